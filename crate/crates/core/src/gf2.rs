//! Vectors and square matrices over the two-element field, stored as bitmasks.
//!
//! Bit `i` of a vector is coordinate `i`. The text form lists coordinates
//! left to right starting at coordinate 0, so `"10"` is the first basis
//! vector of `Z₂²` and has bitmask `0b01`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Largest dimension handled anywhere in this crate.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    dim: u8,
    bits: u32,
}

impl Gf2Vector {
    pub fn new(bits: u32, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionMismatch { expected: MAX_DIM, found: dim });
        }
        if bits >> dim != 0 {
            return Err(Error::InvalidVector(alloc::format!("{bits:#b} in dimension {dim}")));
        }
        Ok(Gf2Vector { dim: dim as u8, bits })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(0, dim)
    }

    /// The `i`-th standard basis vector.
    pub fn unit(i: usize, dim: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: i + 1 });
        }
        Self::new(1 << i, dim)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn get(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    /// Number of nonzero coordinates.
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn support(self) -> impl Iterator<Item = usize> {
        (0..self.dim()).filter(move |&i| self.get(i))
    }

    /// Mod-2 sum.
    pub fn plus(self, other: Self) -> Result<Self> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(Gf2Vector { dim: self.dim, bits: self.bits ^ other.bits })
    }
}

fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl FromStr for Gf2Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' if i < 32 => bits |= 1 << i,
                _ => return Err(Error::InvalidVector(s.to_string())),
            }
        }
        Self::new(bits, s.chars().count()).map_err(|_| Error::InvalidVector(s.to_string()))
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank over GF(2) by elimination on bitmasks.
pub fn rank(vectors: &[Gf2Vector]) -> usize {
    // reduced[b] holds a vector whose lowest set bit is b
    let mut reduced = [0u32; 32];
    let mut r = 0;
    for v in vectors {
        let mut x = v.bits;
        while x != 0 {
            let low = x.trailing_zeros() as usize;
            if reduced[low] == 0 {
                reduced[low] = x;
                r += 1;
                break;
            }
            x ^= reduced[low];
        }
    }
    r
}

/// An `n×n` matrix over GF(2); `rows[i]` bit `j` is entry `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    dim: usize,
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn identity(dim: usize) -> Self {
        Gf2Matrix { dim, rows: (0..dim).map(|i| 1 << i).collect() }
    }

    pub fn from_rows(rows: &[Gf2Vector]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            ensure_dim(dim, r.dim())?;
        }
        Ok(Gf2Matrix { dim, rows: rows.iter().map(|r| r.bits).collect() })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Gf2Vector]) -> Result<Self> {
        let dim = columns.len();
        for c in columns {
            ensure_dim(dim, c.dim())?;
        }
        let rows = (0..dim)
            .map(|i| columns.iter().enumerate().fold(0, |row, (j, c)| row | (c.bits >> i & 1) << j))
            .collect();
        Ok(Gf2Matrix { dim, rows })
    }

    /// Parses rows such as `["10", "11"]`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.as_ref().parse()).collect::<Result<Vec<Gf2Vector>>>()?;
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        Gf2Vector { dim: self.dim as u8, bits: self.rows[i] }
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        let bits = (0..self.dim).fold(0, |acc, i| acc | (self.rows[i] >> j & 1) << i);
        Gf2Vector { dim: self.dim as u8, bits }
    }

    /// `M·v` mod 2.
    pub fn mul_vec(&self, v: Gf2Vector) -> Result<Gf2Vector> {
        ensure_dim(self.dim, v.dim())?;
        let bits = self
            .rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | ((r & v.bits).count_ones() & 1) << i);
        Ok(Gf2Vector { dim: v.dim, bits })
    }

    /// `self · other` mod 2.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        ensure_dim(self.dim, other.dim)?;
        let rows = self
            .rows
            .iter()
            .map(|&r| (0..self.dim).filter(|&j| r >> j & 1 == 1).fold(0, |acc, j| acc ^ other.rows[j]))
            .collect();
        Ok(Gf2Matrix { dim: self.dim, rows })
    }

    /// Inverse by Gauss-Jordan elimination mod 2.
    pub fn inverse(&self) -> Result<Gf2Matrix> {
        let n = self.dim;
        let mut a = self.rows.clone();
        let mut inv = Gf2Matrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1).ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(Gf2Matrix { dim: n, rows: inv })
    }

    pub fn is_identity(&self) -> bool {
        *self == Gf2Matrix::identity(self.dim)
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.dim).map(|i| self.row(i).to_string()).collect()
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vector {
        s.parse().unwrap()
    }

    #[test]
    fn text_form() {
        assert_eq!(v("10").bits(), 0b01);
        assert_eq!(v("01").bits(), 0b10);
        assert_eq!(v("110").to_string(), "110");
        assert!("12".parse::<Gf2Vector>().is_err());
        assert!("".parse::<Gf2Vector>().is_err());
        assert!(Gf2Vector::new(0b100, 2).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[v("11"), v("01")]), 2);
        assert_eq!(rank(&[v("11"), v("11")]), 1);
        assert_eq!(rank(&[v("110"), v("011"), v("101")]), 2);
        assert_eq!(rank(&[v("00")]), 0);
    }

    #[test]
    fn matrix_products() {
        let c = Gf2Matrix::parse_rows(&["10", "11"]).unwrap();
        assert_eq!(c.mul_vec(v("10")).unwrap(), v("11"));
        assert_eq!(c.mul_vec(v("11")).unwrap(), v("10"));
        assert_eq!(c.mul_vec(v("00")).unwrap(), v("00"));
        assert!(c.mul(&c).unwrap().is_identity());
        assert_eq!(c.inverse().unwrap(), c);
        assert_eq!(c.column(0), v("11"));
        let cols = Gf2Matrix::from_columns(&[v("11"), v("01")]).unwrap();
        assert_eq!(cols, c);
    }

    #[test]
    fn singular_inverse() {
        let m = Gf2Matrix::parse_rows(&["11", "11"]).unwrap();
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn dimension_checks() {
        let c = Gf2Matrix::identity(3);
        assert!(matches!(c.mul_vec(v("10")), Err(Error::DimensionMismatch { .. })));
        assert!(v("10").plus(v("100")).is_err());
    }
}
