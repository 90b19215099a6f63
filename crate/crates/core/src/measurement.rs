//! Projective measurement: the trace rule, projection of superposition
//! events, the Lüders mixture operation and expectations.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::density::DensityMatrix;
use crate::outcome::{ensure_same_space, indices, Event, OutcomeSpace, Partition, RandomVariable};
use crate::{Error, Result, MATRIX_TOLERANCE, PROB_TOLERANCE};

/// Diagonal 0/1 projector `P_T` with `(P_T)ᵢᵢ = χ_T(uᵢ)`.
#[derive(Debug, Clone)]
pub struct ProjectionMatrix {
    space: Arc<OutcomeSpace>,
    mask: u64,
}

impl ProjectionMatrix {
    pub fn of_event(t: &Event) -> Self {
        ProjectionMatrix { space: Arc::clone(t.space()), mask: t.mask() }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.space.len()).map(|i| (self.mask >> i & 1) as f64).collect()
    }

    /// Dense row-major entries.
    pub fn entries(&self) -> Vec<f64> {
        let n = self.space.len();
        let mut out = alloc::vec![0.0; n * n];
        for i in indices(self.mask) {
            out[i * n + i] = 1.0;
        }
        out
    }

    /// `tr[P ρ]`, unclamped.
    pub fn trace_with(&self, rho: &DensityMatrix) -> Result<f64> {
        ensure_same_space(&self.space, rho.space())?;
        Ok(indices(self.mask).map(|i| rho.get(i, i)).sum())
    }

    /// `P ρ P` as a plain row-major matrix: entries outside `T×T` zeroed.
    pub fn sandwich(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        ensure_same_space(&self.space, rho.space())?;
        let n = self.space.len();
        let mut out = alloc::vec![0.0; n * n];
        for i in indices(self.mask) {
            for k in indices(self.mask) {
                out[i * n + k] = rho.get(i, k);
            }
        }
        Ok(out)
    }
}

/// One possible result of measuring a random variable.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub value: f64,
    pub probability: f64,
    pub post_state: DensityMatrix,
}

fn clamp_probability(p: f64) -> f64 {
    debug_assert!(
        (-MATRIX_TOLERANCE..=1.0 + MATRIX_TOLERANCE).contains(&p),
        "trace-rule probability {p} out of range"
    );
    p.clamp(0.0, 1.0)
}

/// The trace rule `Pr(T | ρ) = tr[P_T ρ]`, clamped to `[0, 1]`.
pub fn prob_given(t: &Event, rho: &DensityMatrix) -> Result<f64> {
    ProjectionMatrix::of_event(t).trace_with(rho).map(clamp_probability)
}

/// Projects the superposition event `ΣS` onto `T`:
/// `P_T ρ(ΣS) P_T = Pr(T∩S)/Pr(S) · ρ(Σ(T∩S))`.
///
/// Returns the probability and the normalized post-measurement state.
pub fn project_superposition(s: &Event, t: &Event) -> Result<(f64, DensityMatrix)> {
    let pr_s = s.require_positive()?;
    let meet = s.intersect(t)?.ok_or(Error::NullIntersection)?;
    let pr_meet = meet.probability();
    if pr_meet <= 0.0 {
        return Err(Error::NullIntersection);
    }
    Ok(((pr_meet / pr_s).clamp(0.0, 1.0), DensityMatrix::sigma(&meet)?))
}

/// The Lüders mixture operation `ρ ↦ Σⱼ P_{Bⱼ} ρ P_{Bⱼ}`.
///
/// Entries coupling outcomes in different blocks are zeroed. The state must
/// have no weight outside the partition's carrier set.
pub fn luders(rho: &DensityMatrix, pi: &Partition) -> Result<DensityMatrix> {
    ensure_same_space(rho.space(), pi.space())?;
    let n = rho.dim();
    let block: Vec<Option<usize>> = (0..n).map(|i| pi.block_of(i)).collect();
    let mut entries = alloc::vec![0.0; n * n];
    let mut lost = 0.0;
    for i in 0..n {
        match block[i] {
            Some(b) => {
                for k in 0..n {
                    if block[k] == Some(b) {
                        entries[i * n + k] = rho.get(i, k);
                    }
                }
            }
            None => lost += rho.get(i, i),
        }
    }
    if lost > MATRIX_TOLERANCE {
        return Err(Error::SupportOutsideCarrier { lost });
    }
    Ok(DensityMatrix::trusted(Arc::clone(rho.space()), entries))
}

/// Measures `f` in state `ρ`: one outcome per value `φⱼ` (ascending) whose
/// probability `tr[P_{Bⱼ} ρ]` exceeds [`PROB_TOLERANCE`], with post-state
/// `P_{Bⱼ} ρ P_{Bⱼ} / Pr(φⱼ | ρ)`.
pub fn measure(rho: &DensityMatrix, f: &RandomVariable) -> Result<Vec<MeasurementOutcome>> {
    ensure_same_space(rho.space(), f.space())?;
    let mut out = Vec::new();
    for value in f.distinct_values() {
        let level = Event::from_mask(f.space(), f.level_mask(value))?;
        let proj = ProjectionMatrix::of_event(&level);
        let raw = proj.trace_with(rho)?;
        if raw <= PROB_TOLERANCE {
            continue;
        }
        let mut entries = proj.sandwich(rho)?;
        for e in &mut entries {
            *e /= raw;
        }
        out.push(MeasurementOutcome {
            value,
            probability: clamp_probability(raw),
            post_state: DensityMatrix::trusted(Arc::clone(rho.space()), entries),
        });
    }
    Ok(out)
}

/// `⟨f⟩_ρ = tr[O_f ρ] = Σᵢ f(uᵢ)·ρᵢᵢ`.
pub fn expectation(rho: &DensityMatrix, f: &RandomVariable) -> Result<f64> {
    ensure_same_space(rho.space(), f.space())?;
    Ok(f.values().iter().enumerate().map(|(i, v)| v * rho.get(i, i)).sum())
}
