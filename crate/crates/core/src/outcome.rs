//! Outcome spaces, events, partitions and random variables.
//!
//! Events are bitmasks over outcome indices, so a space holds at most
//! [`OutcomeSpace::MAX_OUTCOMES`] outcomes. Label order is the row and column
//! order of every matrix built downstream.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result, PROB_TOLERANCE};

/// A finite sample space `U = {u₁,…,uₙ}` with point probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSpace {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl OutcomeSpace {
    pub const MAX_OUTCOMES: usize = 64;

    /// Validates and builds a space. Zero probabilities are allowed.
    pub fn new<L, S>(labels: L, probs: Vec<f64>) -> Result<Arc<Self>>
    where
        L: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        if labels.len() > Self::MAX_OUTCOMES {
            return Err(Error::TooManyOutcomes { count: labels.len(), max: Self::MAX_OUTCOMES });
        }
        if labels.len() != probs.len() {
            return Err(Error::LengthMismatch { expected: labels.len(), found: probs.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (l, &p) in labels.iter().zip(&probs) {
            if !p.is_finite() {
                return Err(Error::NonFinite("probability"));
            }
            if p < 0.0 {
                return Err(Error::NegativeProbability { label: l.clone(), value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::Normalization { sum });
        }
        Ok(Arc::new(OutcomeSpace { labels, probs }))
    }

    /// A space where every outcome has probability `1/n`.
    pub fn equiprobable<L, S>(labels: L) -> Result<Arc<Self>>
    where
        L: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let probs = alloc::vec![1.0 / n.max(1) as f64; n];
        Self::new(labels, probs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Bitmask with one bit per outcome.
    pub fn full_mask(&self) -> u64 {
        mask_of_len(self.len())
    }

    /// `Σ_{i∈mask} pᵢ`.
    pub fn mask_probability(&self, mask: u64) -> f64 {
        indices(mask).map(|i| self.probs[i]).sum()
    }

    /// Builds the event containing the given labels.
    pub fn event<S: AsRef<str>>(self: &Arc<Self>, labels: &[S]) -> Result<Event> {
        let mut mask = 0u64;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Event::from_mask(self, mask)
    }

    /// The sure event `U`.
    pub fn universe(self: &Arc<Self>) -> Event {
        Event { space: Arc::clone(self), mask: self.full_mask() }
    }

    pub fn singleton(self: &Arc<Self>, index: usize) -> Event {
        assert!(index < self.len(), "outcome index out of range");
        Event { space: Arc::clone(self), mask: 1 << index }
    }
}

pub(crate) fn mask_of_len(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Set-bit positions of `mask`, ascending.
pub(crate) fn indices(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// True when both handles refer to the same space, by identity or by value.
pub(crate) fn same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A non-empty subset `S ⊆ U`.
#[derive(Debug, Clone)]
pub struct Event {
    space: Arc<OutcomeSpace>,
    mask: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && same_space(&self.space, &other.space)
    }
}

impl Event {
    pub fn from_mask(space: &Arc<OutcomeSpace>, mask: u64) -> Result<Self> {
        if mask & !space.full_mask() != 0 {
            return Err(Error::InvalidVector(alloc::format!("{mask:#x}")));
        }
        if mask == 0 {
            return Err(Error::EmptyEvent);
        }
        Ok(Event { space: Arc::clone(space), mask })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The characteristic function `χ_S(uᵢ)`.
    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.mask >> index & 1 == 1
    }

    pub fn indicator(&self, index: usize) -> f64 {
        if self.contains(index) {
            1.0
        } else {
            0.0
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        indices(self.mask)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.space.labels[i].as_str()).collect()
    }

    /// `Pr(S) = Σ_{uᵢ∈S} pᵢ`.
    pub fn probability(&self) -> f64 {
        self.space.mask_probability(self.mask)
    }

    /// `Pr(self | given) = Pr(self ∩ given) / Pr(given)`.
    pub fn conditional_probability(&self, given: &Event) -> Result<f64> {
        ensure_same_space(&self.space, &given.space)?;
        let denom = given.probability();
        if denom <= 0.0 {
            return Err(Error::NullConditioning);
        }
        let num = self.space.mask_probability(self.mask & given.mask);
        Ok((num / denom).clamp(0.0, 1.0))
    }

    /// `self ∩ other`, or `None` when empty.
    pub fn intersect(&self, other: &Event) -> Result<Option<Event>> {
        ensure_same_space(&self.space, &other.space)?;
        let mask = self.mask & other.mask;
        Ok((mask != 0).then(|| Event { space: Arc::clone(&self.space), mask }))
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.mask & !other.mask == 0
    }

    pub(crate) fn require_positive(&self) -> Result<f64> {
        let p = self.probability();
        if p > 0.0 {
            Ok(p)
        } else {
            Err(Error::NullConditioning)
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

/// Pairwise-disjoint non-empty blocks covering a carrier set.
///
/// The carrier is `U` for ordinary partitions and `S` for a restriction
/// `π↾S`. Block probabilities are reported relative to the carrier.
#[derive(Debug, Clone)]
pub struct Partition {
    space: Arc<OutcomeSpace>,
    carrier: u64,
    blocks: Vec<u64>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
            && self.blocks == other.blocks
            && same_space(&self.space, &other.space)
    }
}

impl Partition {
    /// A partition of the whole space.
    pub fn new(space: &Arc<OutcomeSpace>, blocks: &[Event]) -> Result<Self> {
        Self::on(&space.universe(), blocks)
    }

    /// A partition of `carrier`, which must have positive probability.
    pub fn on(carrier: &Event, blocks: &[Event]) -> Result<Self> {
        carrier.require_positive()?;
        let mut seen = 0u64;
        for b in blocks {
            ensure_same_space(&b.space, &carrier.space)?;
            if b.mask & seen != 0 {
                return Err(Error::OverlappingBlocks);
            }
            seen |= b.mask;
        }
        if seen != carrier.mask {
            return Err(Error::IncompleteCover);
        }
        Ok(Partition {
            space: Arc::clone(&carrier.space),
            carrier: carrier.mask,
            blocks: blocks.iter().map(|b| b.mask).collect(),
        })
    }

    pub fn from_label_blocks<S: AsRef<str>>(
        space: &Arc<OutcomeSpace>,
        blocks: &[Vec<S>],
    ) -> Result<Self> {
        let events = blocks.iter().map(|b| space.event(b)).collect::<Result<Vec<_>>>()?;
        Self::new(space, &events)
    }

    /// The discrete partition `1_U` of singletons.
    pub fn discrete(space: &Arc<OutcomeSpace>) -> Self {
        Self::discrete_on(&space.universe())
    }

    /// `1_S`, singletons of `S`. The carrier may have probability zero here.
    pub fn discrete_on(carrier: &Event) -> Self {
        Partition {
            space: Arc::clone(&carrier.space),
            carrier: carrier.mask,
            blocks: carrier.indices().map(|i| 1u64 << i).collect(),
        }
    }

    /// The indiscrete partition `0_U = {U}`.
    pub fn indiscrete(space: &Arc<OutcomeSpace>) -> Self {
        Partition { space: Arc::clone(space), carrier: space.full_mask(), blocks: alloc::vec![space.full_mask()] }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn carrier(&self) -> Event {
        Event { space: Arc::clone(&self.space), mask: self.carrier }
    }

    pub fn covers_space(&self) -> bool {
        self.carrier == self.space.full_mask()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn blocks(&self) -> impl Iterator<Item = Event> + '_ {
        self.blocks.iter().map(|&mask| Event { space: Arc::clone(&self.space), mask })
    }

    /// Index of the block containing outcome `index`, if it lies in the carrier.
    pub fn block_of(&self, index: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b >> index & 1 == 1)
    }

    /// `Pr(Bⱼ) / Pr(carrier)` for each block, in block order.
    pub fn block_probabilities(&self) -> Vec<f64> {
        let total = self.space.mask_probability(self.carrier);
        self.blocks
            .iter()
            .map(|&b| if total > 0.0 { self.space.mask_probability(b) / total } else { 0.0 })
            .collect()
    }

    /// `π↾S`: the non-empty intersections `Bⱼ ∩ S`, a partition of `S`.
    pub fn restrict(&self, s: &Event) -> Result<Partition> {
        ensure_same_space(&self.space, &s.space)?;
        s.require_positive()?;
        if s.mask & !self.carrier != 0 {
            return Err(Error::IncompleteCover);
        }
        let blocks = self.blocks.iter().map(|b| b & s.mask).filter(|&b| b != 0).collect();
        Ok(Partition { space: Arc::clone(&self.space), carrier: s.mask, blocks })
    }

    pub fn label_blocks(&self) -> Vec<Vec<&str>> {
        self.blocks()
            .map(|b| b.indices().map(|i| self.space.labels[i].as_str()).collect())
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (j, b) in self.blocks().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

/// A real-valued function `f: U → ℝ`.
#[derive(Debug, Clone)]
pub struct RandomVariable {
    space: Arc<OutcomeSpace>,
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(space: &Arc<OutcomeSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), found: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("random variable value"));
        }
        Ok(RandomVariable { space: Arc::clone(space), values })
    }

    /// Builds from `(label, value)` pairs; every outcome must get exactly one value.
    pub fn from_labels<S: AsRef<str>>(
        space: &Arc<OutcomeSpace>,
        pairs: &[(S, f64)],
    ) -> Result<Self> {
        let mut values: Vec<Option<f64>> = alloc::vec![None; space.len()];
        for (label, v) in pairs {
            let label = label.as_ref();
            let i = space.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            if values[i].replace(*v).is_some() {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownLabel(space.labels[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, values)
    }

    /// The characteristic function `χ_T` as a 0/1 variable.
    pub fn indicator(event: &Event) -> Self {
        let values = (0..event.space.len()).map(|i| event.indicator(i)).collect();
        RandomVariable { space: Arc::clone(&event.space), values }
    }

    pub fn constant(space: &Arc<OutcomeSpace>, value: f64) -> Self {
        RandomVariable { space: Arc::clone(space), values: alloc::vec![value; space.len()] }
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Distinct values `φⱼ`, ascending.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut vals = self.values.clone();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// The level set `f⁻¹(φ)` as a bitmask (possibly empty).
    pub fn level_mask(&self, value: f64) -> u64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == value)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// The inverse-image partition `{f⁻¹(φⱼ)}` with blocks in ascending `φⱼ`.
    pub fn partition(&self) -> Partition {
        let blocks = self.distinct_values().into_iter().map(|v| self.level_mask(v)).collect();
        Partition { space: Arc::clone(&self.space), carrier: self.space.full_mask(), blocks }
    }
}
