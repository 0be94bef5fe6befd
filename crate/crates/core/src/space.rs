use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{domain, structural, Result};

pub const MAX_OUTCOMES: usize = 24;
pub const SUM_TOL: f64 = 1e-12;

/// A finite outcome set. Cloning is cheap; spaces compare by labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Arc<Vec<String>>,
}

impl FiniteSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_OUTCOMES {
            return domain(format!(
                "space needs 1..={MAX_OUTCOMES} outcomes, got {}",
                labels.len()
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return domain(format!("duplicate outcome label {l:?}"));
            }
        }
        Ok(FiniteSpace {
            labels: Arc::new(labels),
        })
    }

    /// Space with labels `w0, w1, …`.
    pub fn anonymous(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("w{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full_mask(&self) -> u32 {
        full_mask(self.size())
    }

    pub fn empty(&self) -> Event {
        Event {
            space: self.clone(),
            mask: 0,
        }
    }

    pub fn full(&self) -> Event {
        Event {
            space: self.clone(),
            mask: self.full_mask(),
        }
    }

    pub fn event(&self, members: &[usize]) -> Result<Event> {
        let mut mask = 0u32;
        for &i in members {
            if i >= self.size() {
                return structural(format!("outcome index {i} out of range"));
            }
            mask |= 1 << i;
        }
        Ok(Event {
            space: self.clone(),
            mask,
        })
    }

    pub fn event_from_mask(&self, mask: u32) -> Result<Event> {
        if mask & !self.full_mask() != 0 {
            return structural(format!("mask {mask:#b} has bits outside the space"));
        }
        Ok(Event {
            space: self.clone(),
            mask,
        })
    }

    pub(crate) fn check_same(&self, other: &FiniteSpace, what: &str) -> Result<()> {
        if Arc::ptr_eq(&self.labels, &other.labels) || self == other {
            Ok(())
        } else {
            structural(format!("{what}: objects live on different spaces"))
        }
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Iterates over the set bits of a mask, lowest first.
pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A subset of a finite space stored as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    space: FiniteSpace,
    mask: u32,
}

impl Event {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        bits(self.mask)
            .map(|i| self.space.labels()[i].clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.mask & (1 << i) != 0
    }

    pub fn complement(&self) -> Event {
        Event {
            space: self.space.clone(),
            mask: !self.mask & self.space.full_mask(),
        }
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.space.check_same(&other.space, "union")?;
        Ok(Event {
            space: self.space.clone(),
            mask: self.mask | other.mask,
        })
    }

    pub fn intersection(&self, other: &Event) -> Result<Event> {
        self.space.check_same(&other.space, "intersection")?;
        Ok(Event {
            space: self.space.clone(),
            mask: self.mask & other.mask,
        })
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.mask & !other.mask == 0
    }
}

/// One finite real per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable {
    space: FiniteSpace,
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(space: &FiniteSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.size() {
            return structural(format!(
                "random variable has {} values for a space of {} outcomes",
                values.len(),
                space.size()
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return domain(format!("random variable value {v} is not finite"));
        }
        Ok(RandomVariable {
            space: space.clone(),
            values,
        })
    }

    pub fn constant(space: &FiniteSpace, c: f64) -> Result<Self> {
        Self::new(space, vec![c; space.size()])
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sorted distinct values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
        v
    }

    /// The tail event `{X > x}`.
    pub fn tail_mask(&self, x: f64) -> u32 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > x)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn tail(&self, x: f64) -> Event {
        Event {
            space: self.space.clone(),
            mask: self.tail_mask(x),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<RandomVariable> {
        RandomVariable::new(&self.space, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn add(&self, other: &RandomVariable) -> Result<RandomVariable> {
        self.space
            .check_same(&other.space, "sum of random variables")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        RandomVariable::new(&self.space, values)
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    space: FiniteSpace,
    weights: Vec<f64>,
}

impl ProbabilityMeasure {
    pub fn new(space: &FiniteSpace, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.size() {
            return structural(format!(
                "measure has {} weights for a space of {} outcomes",
                weights.len(),
                space.size()
            ));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return domain(format!("measure weight {w} is negative or not finite"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return domain(format!("measure weights sum to {total}, not 1"));
        }
        Ok(ProbabilityMeasure {
            space: space.clone(),
            weights,
        })
    }

    pub fn uniform(space: &FiniteSpace) -> Self {
        let n = space.size();
        ProbabilityMeasure {
            space: space.clone(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Normalizes nonnegative masses to sum one.
    pub fn from_masses(space: &FiniteSpace, masses: Vec<f64>) -> Result<Self> {
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return domain("masses must have a positive finite total");
        }
        Self::new(space, masses.into_iter().map(|m| m / total).collect())
            .or_else(|_| domain("masses must be nonnegative"))
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn prob_mask(&self, mask: u32) -> f64 {
        bits(mask).map(|i| self.weights[i]).sum()
    }

    pub fn prob(&self, a: &Event) -> Result<f64> {
        self.space.check_same(a.space(), "measure evaluation")?;
        Ok(self.prob_mask(a.mask()))
    }

    pub fn expectation(&self, x: &RandomVariable) -> Result<f64> {
        self.space.check_same(x.space(), "expectation")?;
        Ok(self.expectation_on(x, self.space.full_mask()))
    }

    /// `E[X·1_A]` for `A` given as a mask.
    pub fn expectation_on(&self, x: &RandomVariable, mask: u32) -> f64 {
        bits(mask).map(|i| self.weights[i] * x.value(i)).sum()
    }
}
