//! Real density matrices for classical events, superposition events,
//! partitions and their mixtures.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg;
use crate::outcome::{ensure_same_space, Event, OutcomeSpace, Partition};
use crate::{Error, Result, MATRIX_TOLERANCE, PROB_TOLERANCE};

/// The normalized ket `|S⟩` with entries `√(pᵢ/Pr(S))·χ_S(uᵢ)`.
#[derive(Debug, Clone)]
pub struct StateVector {
    space: Arc<OutcomeSpace>,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn of_event(s: &Event) -> Result<Self> {
        let pr = s.require_positive()?;
        let space = s.space();
        let amplitudes = (0..space.len())
            .map(|i| if s.contains(i) { libm::sqrt(space.prob(i) / pr) } else { 0.0 })
            .collect();
        Ok(StateVector { space: Arc::clone(space), amplitudes })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a * a).sum())
    }

    /// `|v⟩⟨v|`.
    pub fn outer(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                entries[i * n + k] = self.amplitudes[i] * self.amplitudes[k];
            }
        }
        DensityMatrix::trusted(Arc::clone(&self.space), entries)
    }
}

/// A real symmetric positive-semidefinite matrix of trace one, stored
/// row-major with rows and columns in outcome-label order.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: Arc<OutcomeSpace>,
    entries: Vec<f64>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && crate::outcome::same_space(&self.space, &other.space)
    }
}

impl DensityMatrix {
    /// Largest matrix the eigenvalue check accepts.
    pub const MAX_EIGEN_CHECK: usize = 16;

    /// Built by one of the constructions that are valid by definition.
    pub(crate) fn trusted(space: Arc<OutcomeSpace>, entries: Vec<f64>) -> Self {
        let rho = DensityMatrix { space, entries };
        debug_assert!(
            rho.dim() > Self::MAX_EIGEN_CHECK || rho.validate(MATRIX_TOLERANCE).is_ok(),
            "constructed matrix fails density-matrix invariants: {:?}",
            rho.validate(MATRIX_TOLERANCE)
        );
        rho
    }

    /// Validates an arbitrary row-major matrix against the density-matrix
    /// invariants at tolerance `tol`, then symmetrizes it exactly.
    pub fn from_entries(space: &Arc<OutcomeSpace>, entries: Vec<f64>, tol: f64) -> Result<Self> {
        let n = space.len();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        let mut rho = DensityMatrix { space: Arc::clone(space), entries };
        rho.validate(tol)?;
        for i in 0..n {
            for k in i + 1..n {
                let avg = 0.5 * (rho.entries[i * n + k] + rho.entries[k * n + i]);
                rho.entries[i * n + k] = avg;
                rho.entries[k * n + i] = avg;
            }
        }
        Ok(rho)
    }

    pub fn from_rows(space: &Arc<OutcomeSpace>, rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = space.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        Self::from_entries(space, rows.concat(), tol)
    }

    /// The classical event `ρ(ΔS)`: diagonal `pᵢ/Pr(S)·χ_S(uᵢ)`.
    pub fn delta(s: &Event) -> Result<Self> {
        let pr = s.require_positive()?;
        let space = s.space();
        let n = space.len();
        let mut entries = alloc::vec![0.0; n * n];
        for i in s.indices() {
            entries[i * n + i] = space.prob(i) / pr;
        }
        Ok(Self::trusted(Arc::clone(space), entries))
    }

    /// The superposition event `ρ(ΣS) = |S⟩⟨S|`, entries `√(pᵢpₖ)/Pr(S)` on `S×S`.
    pub fn sigma(s: &Event) -> Result<Self> {
        Ok(StateVector::of_event(s)?.outer())
    }

    /// `ρ(π) = Σⱼ Pr(Bⱼ)·ρ(ΣBⱼ)`, with block probabilities relative to the
    /// partition's carrier. Blocks of probability zero contribute nothing.
    pub fn of_partition(pi: &Partition) -> Self {
        let space = pi.space();
        let n = space.len();
        let mut entries = alloc::vec![0.0; n * n];
        for (block, w) in pi.blocks().zip(pi.block_probabilities()) {
            if w <= 0.0 {
                continue;
            }
            let sigma = DensityMatrix::sigma(&block).expect("block has positive probability");
            for (e, s) in entries.iter_mut().zip(&sigma.entries) {
                *e += w * s;
            }
        }
        Self::trusted(Arc::clone(space), entries)
    }

    /// The convex combination `Σ qⱼ ρⱼ`.
    pub fn mix(weights: &[f64], matrices: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != matrices.len() {
            return Err(Error::LengthMismatch { expected: matrices.len(), found: weights.len() });
        }
        let first = matrices.first().ok_or(Error::EmptyMixture)?;
        if let Some(&w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::NegativeWeight(w));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::WeightNormalization { sum });
        }
        for m in &matrices[1..] {
            ensure_same_space(&first.space, &m.space)?;
        }
        let mut entries = alloc::vec![0.0; first.entries.len()];
        for (w, m) in weights.iter().zip(matrices) {
            for (e, x) in entries.iter_mut().zip(&m.entries) {
                *e += w * x;
            }
        }
        Ok(Self::trusted(Arc::clone(&first.space), entries))
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim() + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim()).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// `ρ²` as a plain row-major matrix.
    pub fn square(&self) -> Vec<f64> {
        linalg::matmul(&self.entries, &self.entries, self.dim())
    }

    /// `tr[ρ²]`, computed as the sum of all squared entries.
    pub fn trace_of_square(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Largest entrywise difference to another matrix over the same space.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        ensure_same_space(&self.space, &other.space)?;
        Ok(linalg::max_abs_diff(&self.entries, &other.entries))
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.dim() > Self::MAX_EIGEN_CHECK {
            return Err(Error::EigenCheckCap { size: self.dim(), max: Self::MAX_EIGEN_CHECK });
        }
        Ok(linalg::symmetric_eigenvalues(&self.entries, self.dim()))
    }

    /// Checks symmetry, unit trace and positive semidefiniteness at `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for k in i + 1..n {
                if (self.get(i, k) - self.get(k, i)).abs() > tol {
                    return Err(Error::NotSymmetric { row: i, col: k });
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::BadTrace(tr));
        }
        let min = self.eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(())
    }

    /// `ρ² = ρ` within [`MATRIX_TOLERANCE`] in the max norm.
    pub fn is_pure(&self) -> bool {
        linalg::max_abs_diff(&self.square(), &self.entries) <= MATRIX_TOLERANCE
    }

    /// Runs both purity tests, `ρ² = ρ` and `tr[ρ²] = 1`, and reports an
    /// error if they disagree.
    pub fn check_purity(&self) -> Result<bool> {
        let max_deviation = linalg::max_abs_diff(&self.square(), &self.entries);
        let trace_of_square = self.trace_of_square();
        let by_square = max_deviation <= MATRIX_TOLERANCE;
        let by_trace = (trace_of_square - 1.0).abs() <= MATRIX_TOLERANCE;
        if by_square == by_trace {
            Ok(by_square)
        } else {
            Err(Error::PurityDisagreement { max_deviation, trace_of_square })
        }
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim()) {
            f.write_str("[")?;
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x:.12}")?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}
