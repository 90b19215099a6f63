//! The set model of quantum mechanics over `Z₂ⁿ`.
//!
//! Zero-one vectors are subsets of a basis set with equiprobable outcomes.
//! Every basis of `Z₂ⁿ` is a different outcome set, so one abstract vector
//! (a [`Ket`]) is a superposition in one basis and a singleton in another.
//! Basis vectors are written in standard coordinates; conversion matrices act
//! on coordinate columns, `coords_to = C · coords_from`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::density::DensityMatrix;
use crate::gf2::{self, Gf2Matrix, Gf2Vector, MAX_DIM};
use crate::measurement::prob_given;
use crate::outcome::OutcomeSpace;
use crate::{Error, Result, PROB_TOLERANCE};

/// Exhaustive enumeration handles `n ≤ 4` (20160 ordered bases).
pub const MAX_ENUM_DIM: usize = 4;

/// An ordered basis of `Z₂ⁿ` with one outcome label per basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Basis {
    name: String,
    vectors: Vec<Gf2Vector>,
    labels: Vec<String>,
}

impl Gf2Basis {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        vectors: Vec<Gf2Vector>,
        labels: Vec<S>,
    ) -> Result<Self> {
        if !is_basis(&vectors)? {
            return Err(Error::NotABasis);
        }
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != vectors.len() {
            return Err(Error::LengthMismatch { expected: vectors.len(), found: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Gf2Basis { name: name.into(), vectors, labels })
    }

    /// The computational basis `{e₁,…,eₙ}`.
    pub fn standard<S: Into<String>>(name: impl Into<String>, labels: Vec<S>) -> Result<Self> {
        let n = labels.len();
        let vectors = (0..n).map(|i| Gf2Vector::unit(i, n)).collect::<Result<Vec<_>>>()?;
        Self::new(name, vectors, labels)
    }

    /// Parses vectors written like `"11"`, coordinate 0 first.
    pub fn parse<S: Into<String>>(
        name: impl Into<String>,
        vectors: &[&str],
        labels: Vec<S>,
    ) -> Result<Self> {
        let vectors = vectors.iter().map(|v| v.parse()).collect::<Result<Vec<Gf2Vector>>>()?;
        Self::new(name, vectors, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Basis vectors in standard coordinates.
    pub fn vectors(&self) -> &[Gf2Vector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Matrix with the basis vectors as columns: maps coordinates in this
    /// basis to standard coordinates.
    pub fn matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_columns(&self.vectors).expect("basis vectors share the basis dimension")
    }

    /// Vectors sorted by bitmask value; equal for equal unordered bases.
    pub fn canonical_vectors(&self) -> Vec<Gf2Vector> {
        let mut v = self.vectors.clone();
        v.sort_by_key(|x| x.bits());
        v
    }

    /// Same set of basis vectors, ignoring order, name and labels.
    pub fn same_unordered(&self, other: &Gf2Basis) -> bool {
        self.canonical_vectors() == other.canonical_vectors()
    }

    /// The equiprobable outcome space on this basis's labels.
    pub fn outcome_space(&self) -> Arc<OutcomeSpace> {
        OutcomeSpace::equiprobable(self.labels.iter().cloned()).expect("labels are unique")
    }

    /// Labels of the nonzero coordinates, in label order.
    pub fn labels_of(&self, coords: Gf2Vector) -> Vec<&str> {
        coords.support().map(|i| self.labels[i].as_str()).collect()
    }

    /// Coordinates of the subset with the given labels.
    pub fn coords_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Gf2Vector> {
        let mut bits = 0u32;
        for l in labels {
            let i = self
                .labels
                .iter()
                .position(|x| x == l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().into()))?;
            bits |= 1 << i;
        }
        Gf2Vector::new(bits, self.dim())
    }
}

impl fmt::Display for Gf2Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {{", self.name)?;
        for (i, (v, l)) in self.vectors.iter().zip(&self.labels).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}={v}")?;
        }
        f.write_str("}")
    }
}

/// An abstract nonzero vector of `Z₂ⁿ`, representable in any basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ket {
    standard: Gf2Vector,
}

impl Ket {
    pub fn new(standard: Gf2Vector) -> Result<Self> {
        if standard.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Ket { standard })
    }

    /// The ket whose coordinates in `basis` are `coords`.
    pub fn from_coords(basis: &Gf2Basis, coords: Gf2Vector) -> Result<Self> {
        Self::new(basis.matrix().mul_vec(coords)?)
    }

    pub fn standard_coords(&self) -> Gf2Vector {
        self.standard
    }

    pub fn coords_in(&self, basis: &Gf2Basis) -> Result<Gf2Vector> {
        basis.matrix().inverse()?.mul_vec(self.standard)
    }
}

/// `true` iff the `n` vectors of dimension `n` have rank `n` over GF(2).
pub fn is_basis(vectors: &[Gf2Vector]) -> Result<bool> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
    }
    Ok(gf2::rank(vectors) == n)
}

/// Number of bases of `Z₂ⁿ` by Gauss's formula
/// `(2ⁿ−1)(2ⁿ−2)…(2ⁿ−2ⁿ⁻¹)`, divided by `n!` when unordered.
pub fn count_bases(n: usize, ordered: bool) -> Result<BigUint> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::CountOverflow { n, max: MAX_DIM });
    }
    let full = BigUint::from(1u32) << n;
    let mut count = BigUint::from(1u32);
    for i in 0..n {
        count *= &full - (BigUint::from(1u32) << i);
    }
    if !ordered {
        let factorial = (1..=n as u32).fold(BigUint::from(1u32), |acc, k| acc * k);
        count /= factorial;
    }
    Ok(count)
}

/// Every unordered basis of `Z₂ⁿ`, each with vectors sorted by bitmask and
/// the list sorted lexicographically by those bitmasks.
///
/// Basis `k` (from 1) is named `B{k}` with labels `b{k}_1 … b{k}_n`.
pub fn enumerate_bases(n: usize) -> Result<Vec<Gf2Basis>> {
    if n == 0 || n > MAX_ENUM_DIM {
        return Err(Error::EnumerationCap { n, max: MAX_ENUM_DIM });
    }
    let nonzero: Vec<Gf2Vector> =
        (1u32..1 << n).map(|b| Gf2Vector::new(b, n).expect("fits dimension")).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    combinations(&nonzero, n, 0, &mut chosen, &mut |vs| {
        if gf2::rank(vs) == n {
            let k = out.len() + 1;
            let labels = (1..=n).map(|i| format!("b{k}_{i}")).collect::<Vec<_>>();
            out.push(Gf2Basis { name: format!("B{k}"), vectors: vs.to_vec(), labels });
        }
    });
    Ok(out)
}

fn combinations<T: Copy>(
    items: &[T],
    k: usize,
    start: usize,
    chosen: &mut Vec<T>,
    visit: &mut impl FnMut(&[T]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in start..items.len() {
        chosen.push(items[i]);
        combinations(items, k, i + 1, chosen, visit);
        chosen.pop();
    }
}

/// `C_{from→to} = M_to⁻¹ · M_from`, so that `coords_to = C · coords_from`.
pub fn conversion_matrix(from: &Gf2Basis, to: &Gf2Basis) -> Result<Gf2Matrix> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch { expected: from.dim(), found: to.dim() });
    }
    to.matrix().inverse()?.mul(&from.matrix())
}

pub fn convert_ket(coords: Gf2Vector, conversion: &Gf2Matrix) -> Result<Gf2Vector> {
    conversion.mul_vec(coords)
}

/// One row of a [`KetTable`]: an abstract vector in each basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetRow {
    pub coords: Vec<Gf2Vector>,
    pub cells: Vec<Vec<String>>,
}

/// Every nonzero vector of `Z₂ⁿ` written as a label subset in each basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetTable {
    pub columns: Vec<String>,
    pub rows: Vec<KetRow>,
}

impl KetTable {
    /// Cell text such as `{H,T}`.
    pub fn cell_text(cell: &[String]) -> String {
        format!("{{{}}}", cell.join(","))
    }
}

impl fmt::Display for KetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let headers: Vec<String> = self.columns.iter().map(|c| format!("{c}-basis")).collect();
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.cells.iter().map(|c| Self::cell_text(c)).collect())
            .collect();
        let widths: Vec<usize> = (0..headers.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain(core::iter::once(headers[j].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |f: &mut fmt::Formatter<'_>, items: &[String]| -> fmt::Result {
            for (j, item) in items.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                let pad = widths[j] - item.chars().count();
                write!(f, "{item}{:pad$}", "")?;
            }
            writeln!(f)
        };
        line(f, &headers)?;
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(f, &rule)?;
        for r in &cells {
            line(f, r)?;
        }
        Ok(())
    }
}

/// The ket table over `bases`. Rows follow the coordinates in the first
/// basis, ordered by their text form descending (`11`, `10`, `01` for `n = 2`).
pub fn ket_table(bases: &[Gf2Basis]) -> Result<KetTable> {
    let first = bases.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
    let n = first.dim();
    if n > MAX_ENUM_DIM {
        return Err(Error::EnumerationCap { n, max: MAX_ENUM_DIM });
    }
    if let Some(b) = bases.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
    }
    let inverses = bases.iter().map(|b| b.matrix().inverse()).collect::<Result<Vec<_>>>()?;
    let mut first_coords: Vec<Gf2Vector> =
        (1u32..1 << n).map(|b| Gf2Vector::new(b, n).expect("fits dimension")).collect();
    first_coords.sort_by_key(|c| core::cmp::Reverse(c.to_string()));
    let first_matrix = first.matrix();
    let rows = first_coords
        .into_iter()
        .map(|c| {
            let standard = first_matrix.mul_vec(c)?;
            let coords = inverses.iter().map(|inv| inv.mul_vec(standard)).collect::<Result<Vec<_>>>()?;
            let cells = coords
                .iter()
                .zip(bases)
                .map(|(&c, b)| b.labels_of(c).into_iter().map(String::from).collect())
                .collect();
            Ok(KetRow { coords, cells })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KetTable { columns: bases.iter().map(|b| b.name.clone()).collect(), rows })
}

fn ket_density_on(space: &Arc<OutcomeSpace>, coords: Gf2Vector) -> Result<DensityMatrix> {
    let n = space.len();
    if coords.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: coords.dim() });
    }
    if coords.is_zero() {
        return Err(Error::ZeroVector);
    }
    // normalized 0/1 vector has entries 1/√k, so the outer product has 1/k
    let entry = 1.0 / coords.weight() as f64;
    let mut entries = alloc::vec![0.0; n * n];
    for i in coords.support() {
        for k in coords.support() {
            entries[i * n + k] = entry;
        }
    }
    Ok(DensityMatrix::trusted(Arc::clone(space), entries))
}

/// Real density matrix of the ket with coordinates `coords` in `basis`,
/// expressed in that basis's frame.
pub fn ket_to_density(basis: &Gf2Basis, coords: Gf2Vector) -> Result<DensityMatrix> {
    ket_density_on(&basis.outcome_space(), coords)
}

/// A classical mixture of kets, each given by coordinates in some basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    components: Vec<(f64, Gf2Vector)>,
}

impl QState {
    pub fn new(components: Vec<(f64, Gf2Vector)>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptyMixture)?;
        let n = first.1.dim();
        for &(w, v) in &components {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight(w));
            }
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        let sum: f64 = components.iter().map(|c| c.0).sum();
        if (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::WeightNormalization { sum });
        }
        Ok(QState { components })
    }

    pub fn pure(coords: Gf2Vector) -> Result<Self> {
        Self::new(alloc::vec![(1.0, coords)])
    }

    pub fn components(&self) -> &[(f64, Gf2Vector)] {
        &self.components
    }

    pub fn is_pure(&self) -> bool {
        self.components.len() == 1
    }

    pub fn dim(&self) -> usize {
        self.components[0].1.dim()
    }
}

/// Converts each component from `from` to `to` coordinates, builds its
/// density matrix in the `to` frame and mixes them with the state's weights.
pub fn state_density_in_basis(state: &QState, from: &Gf2Basis, to: &Gf2Basis) -> Result<DensityMatrix> {
    if state.dim() != from.dim() {
        return Err(Error::DimensionMismatch { expected: from.dim(), found: state.dim() });
    }
    let conversion = conversion_matrix(from, to)?;
    let space = to.outcome_space();
    let (weights, matrices): (Vec<f64>, Vec<DensityMatrix>) = state
        .components
        .iter()
        .map(|&(w, c)| Ok((w, ket_density_on(&space, convert_ket(c, &conversion)?)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    DensityMatrix::mix(&weights, &matrices)
}

/// Probability of the `to`-basis outcome set `target` for `state`, by the
/// trace rule in the `to` frame.
pub fn measure_in_basis<S: AsRef<str>>(
    state: &QState,
    from: &Gf2Basis,
    to: &Gf2Basis,
    target: &[S],
) -> Result<f64> {
    let rho = state_density_in_basis(state, from, to)?;
    let event = rho.space().event(target)?;
    prob_given(&event, &rho)
}

/// The three bases of `Z₂²` for the coin: `U = {H, T}`,
/// `U' = {H' = {H,T}, T' = {T}}` and `U'' = {H'' = {H}, T'' = {H,T}}`.
pub fn coin_bases() -> [Gf2Basis; 3] {
    let u = Gf2Basis::parse("U", &["10", "01"], alloc::vec!["H", "T"]);
    let u1 = Gf2Basis::parse("U'", &["11", "01"], alloc::vec!["H'", "T'"]);
    let u2 = Gf2Basis::parse("U''", &["10", "11"], alloc::vec!["H''", "T''"]);
    [u.unwrap(), u1.unwrap(), u2.unwrap()]
}
