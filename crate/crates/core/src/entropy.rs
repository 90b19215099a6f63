//! Logical entropy: `h(q) = 1 − Σ qⱼ²`, `h(π) = 1 − Σ Pr(Bⱼ)²` and
//! `h(ρ) = 1 − tr[ρ²]`, plus the accounting of entropy created when a
//! measurement zeroes off-diagonal entries.

use alloc::vec::Vec;

use crate::density::DensityMatrix;
use crate::measurement::luders;
use crate::outcome::Partition;
use crate::{Error, Result, PROB_TOLERANCE};

/// Logical entropy of a probability distribution.
pub fn logical_entropy_distribution(q: &[f64]) -> Result<f64> {
    if q.is_empty() {
        return Err(Error::Normalization { sum: 0.0 });
    }
    if let Some(&w) = q.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::NegativeWeight(w));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::Normalization { sum });
    }
    Ok(1.0 - q.iter().map(|x| x * x).sum::<f64>())
}

/// Logical entropy of a partition, with block probabilities taken relative
/// to its carrier set (so `h(π↾S)` uses `Pr(Bⱼ∩S)/Pr(S)`).
pub fn logical_entropy_partition(pi: &Partition) -> f64 {
    1.0 - pi.block_probabilities().iter().map(|x| x * x).sum::<f64>()
}

pub fn logical_entropy_density(rho: &DensityMatrix) -> f64 {
    1.0 - rho.trace_of_square()
}

/// Entropy before and after a Lüders measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub before: f64,
    pub after: f64,
    /// `after − before`.
    pub created: f64,
    /// `Σ ρ_before,ik² − Σ ρ_after,ik²`: the squares of the entries the
    /// measurement zeroed.
    pub zeroed_square_sum: f64,
}

/// Measures `rho` by `pi` with the Lüders operation and accounts for the
/// logical entropy created.
pub fn measurement_entropy_report(rho: &DensityMatrix, pi: &Partition) -> Result<EntropyReport> {
    let after_state = luders(rho, pi)?;
    let before = logical_entropy_density(rho);
    let after = logical_entropy_density(&after_state);
    Ok(EntropyReport {
        before,
        after,
        created: after - before,
        zeroed_square_sum: rho.trace_of_square() - after_state.trace_of_square(),
    })
}

/// Entries `(row, col, value)` that the Lüders operation by `pi` zeroes:
/// nonzero entries coupling different blocks or leaving the carrier.
pub fn zeroed_entries(rho: &DensityMatrix, pi: &Partition) -> Vec<(usize, usize, f64)> {
    let n = rho.dim();
    let block: Vec<Option<usize>> = (0..n).map(|i| pi.block_of(i)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let v = rho.get(i, k);
            let kept = block[i].is_some() && block[i] == block[k];
            if !kept && v.abs() > PROB_TOLERANCE {
                out.push((i, k, v));
            }
        }
    }
    out
}
