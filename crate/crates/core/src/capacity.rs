use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divergence::DistortionCurve;
use crate::error::{domain, Result};
use crate::space::{bits, Event, FiniteSpace, ProbabilityMeasure, RandomVariable, SUM_TOL};

/// Largest space on which exhaustive set-function checks run.
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Pair count for sampled checks on larger spaces.
pub const DEFAULT_SAMPLED_PAIRS: usize = 200_000;

#[derive(Debug, Clone)]
pub enum Backend {
    Measure(ProbabilityMeasure),
    Distortion {
        curve: DistortionCurve,
        base: ProbabilityMeasure,
    },
    SupOfMeasures(Vec<ProbabilityMeasure>),
    /// `min(1, E[Y·1_A])`.
    ExpectationCap {
        y: RandomVariable,
        base: ProbabilityMeasure,
    },
    /// `min(E[Y2·1_A], E[Y1·1_A] + 1 − E[Y1])`.
    LikelihoodBand {
        y1: RandomVariable,
        y2: RandomVariable,
        base: ProbabilityMeasure,
    },
    Table(Vec<f64>),
    Dual(Box<Capacity>),
}

/// Monotone set function with `w(∅) = 0` and `w(Ω) = 1`.
#[derive(Debug, Clone)]
pub struct Capacity {
    space: FiniteSpace,
    backend: Backend,
}

impl Capacity {
    pub fn measure(p: ProbabilityMeasure) -> Self {
        Capacity {
            space: p.space().clone(),
            backend: Backend::Measure(p),
        }
    }

    pub fn distortion(curve: DistortionCurve, base: ProbabilityMeasure) -> Self {
        Capacity {
            space: base.space().clone(),
            backend: Backend::Distortion { curve, base },
        }
    }

    pub fn sup_of_measures(measures: Vec<ProbabilityMeasure>) -> Result<Self> {
        let Some(first) = measures.first() else {
            return domain("sup of measures needs at least one measure");
        };
        let space = first.space().clone();
        for m in &measures[1..] {
            space.check_same(m.space(), "sup of measures")?;
        }
        Ok(Capacity {
            space,
            backend: Backend::SupOfMeasures(measures),
        })
    }

    pub fn expectation_cap(y: RandomVariable, base: ProbabilityMeasure) -> Result<Self> {
        base.space().check_same(y.space(), "expectation cap")?;
        if y.values().iter().any(|&v| v < 0.0) {
            return domain("expectation cap needs Y >= 0");
        }
        let mean = base.expectation(&y)?;
        if mean < 1.0 - SUM_TOL {
            return domain(format!("expectation cap needs E[Y] >= 1, got {mean}"));
        }
        Ok(Capacity {
            space: base.space().clone(),
            backend: Backend::ExpectationCap { y, base },
        })
    }

    pub fn likelihood_band(
        y1: RandomVariable,
        y2: RandomVariable,
        base: ProbabilityMeasure,
    ) -> Result<Self> {
        base.space().check_same(y1.space(), "likelihood band")?;
        base.space().check_same(y2.space(), "likelihood band")?;
        for (a, b) in y1.values().iter().zip(y2.values()) {
            if *a < 0.0 || a > b {
                return domain("likelihood band needs 0 <= Y1 <= Y2");
            }
        }
        let (e1, e2) = (base.expectation(&y1)?, base.expectation(&y2)?);
        if !(e1 < 1.0 && e2 > 1.0) {
            return domain(format!(
                "likelihood band needs E[Y1] < 1 < E[Y2], got {e1} and {e2}"
            ));
        }
        Ok(Capacity {
            space: base.space().clone(),
            backend: Backend::LikelihoodBand { y1, y2, base },
        })
    }

    /// Explicit values indexed by event mask. Rejected unless normalized and monotone.
    pub fn table(space: &FiniteSpace, values: Vec<f64>) -> Result<Self> {
        let n = space.size();
        if n > EXHAUSTIVE_LIMIT {
            return domain(format!(
                "table capacities support at most {EXHAUSTIVE_LIMIT} outcomes"
            ));
        }
        if values.len() != 1 << n {
            return domain(format!(
                "table needs {} entries, got {}",
                1usize << n,
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("table values must be finite");
        }
        if values[0].abs() > SUM_TOL || (values[(1 << n) - 1] - 1.0).abs() > SUM_TOL {
            return domain("table must satisfy w(empty) = 0 and w(full) = 1");
        }
        for mask in 1..values.len() {
            for i in bits(mask as u32) {
                let sub = mask & !(1 << i);
                if values[sub] > values[mask] + SUM_TOL {
                    return domain(format!("table is not monotone: w({sub:#b}) > w({mask:#b})"));
                }
            }
        }
        Ok(Capacity {
            space: space.clone(),
            backend: Backend::Table(values),
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// Evaluation on a raw mask; the mask must fit the space.
    pub fn eval_mask(&self, mask: u32) -> f64 {
        match &self.backend {
            Backend::Measure(p) => p.prob_mask(mask),
            Backend::Distortion { curve, base } => {
                if mask == 0 {
                    0.0
                } else if mask == self.space.full_mask() {
                    1.0
                } else {
                    curve.g(base.prob_mask(mask))
                }
            }
            Backend::SupOfMeasures(ms) => ms.iter().map(|m| m.prob_mask(mask)).fold(0.0, f64::max),
            Backend::ExpectationCap { y, base } => base.expectation_on(y, mask).min(1.0),
            Backend::LikelihoodBand { y1, y2, base } => {
                if mask == self.space.full_mask() {
                    return 1.0;
                }
                let upper = base.expectation_on(y2, mask);
                let outside = base.expectation_on(y1, !mask & self.space.full_mask());
                upper.min(1.0 - outside)
            }
            Backend::Table(v) => v[mask as usize],
            Backend::Dual(inner) => 1.0 - inner.eval_mask(!mask & self.space.full_mask()),
        }
    }

    pub fn eval(&self, a: &Event) -> Result<f64> {
        self.space.check_same(a.space(), "capacity evaluation")?;
        Ok(self.eval_mask(a.mask()))
    }

    /// `w(X > x)`.
    pub fn tail_prob(&self, x: &RandomVariable, t: f64) -> f64 {
        self.eval_mask(x.tail_mask(t))
    }

    /// All event values indexed by mask.
    pub fn values_table(&self) -> Result<Vec<f64>> {
        let n = self.space.size();
        if n > EXHAUSTIVE_LIMIT {
            return domain(format!(
                "value tables need at most {EXHAUSTIVE_LIMIT} outcomes"
            ));
        }
        Ok((0..1u32 << n).map(|m| self.eval_mask(m)).collect())
    }

    /// Whether the set function is monotone, normalized and within [0,1].
    pub fn is_monotone(&self) -> bool {
        let n = self.space.size();
        let full = self.space.full_mask();
        if self.eval_mask(0).abs() > SUM_TOL || (self.eval_mask(full) - 1.0).abs() > SUM_TOL {
            return false;
        }
        if n <= EXHAUSTIVE_LIMIT {
            let t = self.values_table().expect("size checked");
            (1..t.len()).all(|m| {
                t[m] <= 1.0 + SUM_TOL && bits(m as u32).all(|i| t[m & !(1 << i)] <= t[m] + SUM_TOL)
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            (0..DEFAULT_SAMPLED_PAIRS).all(|_| {
                let b: u32 = rng.random::<u32>() & full;
                let a = b & rng.random::<u32>();
                self.eval_mask(a) <= self.eval_mask(b) + SUM_TOL
            })
        }
    }
}

/// The conjugate `ŵ(A) = 1 − w(Aᶜ)`.
pub fn capacity_dual(w: &Capacity) -> Capacity {
    match &w.backend {
        Backend::Measure(_) => w.clone(),
        Backend::Dual(inner) => (**inner).clone(),
        _ => Capacity {
            space: w.space.clone(),
            backend: Backend::Dual(Box::new(w.clone())),
        },
    }
}

/// Exhaustive for spaces up to [`EXHAUSTIVE_LIMIT`] outcomes, sampled beyond.
pub fn is_subadditive(w: &Capacity) -> bool {
    if w.space.size() <= EXHAUSTIVE_LIMIT {
        is_subadditive_exhaustive(w)
    } else {
        is_subadditive_sampled(w, DEFAULT_SAMPLED_PAIRS, 0)
    }
}

// Disjoint pairs suffice: w(A∪B) = w(A∪(B∖A)) ≤ w(A) + w(B∖A) ≤ w(A) + w(B).
fn is_subadditive_exhaustive(w: &Capacity) -> bool {
    let t = w.values_table().expect("size checked");
    let full = w.space.full_mask();
    for a in 0..=full {
        let rest = full & !a;
        let mut b = rest;
        loop {
            if t[(a | b) as usize] > t[a as usize] + t[b as usize] + SUM_TOL {
                return false;
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & rest;
        }
    }
    true
}

pub fn is_subadditive_sampled(w: &Capacity, pairs: usize, seed: u64) -> bool {
    let full = w.space.full_mask();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..pairs).all(|_| {
        let a = rng.random::<u32>() & full;
        let b = rng.random::<u32>() & full;
        w.eval_mask(a | b) <= w.eval_mask(a) + w.eval_mask(b) + SUM_TOL
    })
}
