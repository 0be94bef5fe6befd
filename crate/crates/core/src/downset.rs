//! Families of downsets `x ↦ A_x` and the risk measures they induce.

use std::fmt;
use std::sync::Arc;

use crate::capacity::Capacity;
use crate::error::{domain, structural, Result};
use crate::ext::ExtReal;
use crate::lambda::{Direction, LambdaFn};
use crate::lambdavar::{scan_infimum, FEAS_TOL};
use crate::space::{bits, FiniteSpace, RandomVariable};

/// Spaces up to this size store collections as explicit membership tables.
pub const EXPLICIT_LIMIT: usize = 12;

type Membership = Arc<dyn Fn(u32) -> bool + Send + Sync>;

/// A collection of events, given by mask.
#[derive(Clone)]
pub enum Collection {
    Explicit(Arc<Vec<bool>>),
    Predicate(Membership),
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collection::Explicit(t) => {
                write!(f, "Explicit({} members)", t.iter().filter(|b| **b).count())
            }
            Collection::Predicate(_) => write!(f, "Predicate"),
        }
    }
}

impl Collection {
    pub fn contains(&self, mask: u32) -> bool {
        match self {
            Collection::Explicit(t) => t[mask as usize],
            Collection::Predicate(p) => p(mask),
        }
    }

    /// Only `∅`.
    pub fn trivial(space: &FiniteSpace) -> Self {
        Self::from_predicate(space, |m| m == 0)
    }

    /// Explicit table on small spaces, predicate otherwise.
    pub fn from_predicate(
        space: &FiniteSpace,
        member: impl Fn(u32) -> bool + Send + Sync + 'static,
    ) -> Self {
        if space.size() <= EXPLICIT_LIMIT {
            Collection::Explicit(Arc::new((0..=space.full_mask()).map(member).collect()))
        } else {
            Collection::Predicate(Arc::new(member))
        }
    }

    /// `{A : w(A) ≤ level}`.
    pub fn sublevel(w: &Capacity, level: f64) -> Self {
        let w2 = w.clone();
        Self::from_predicate(w.space(), move |m| w2.eval_mask(m) <= level + FEAS_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    DecreasingLeftContinuous,
}

/// Piecewise-constant family on a threshold grid `t_1 < … < t_K`.
///
/// `gaps[j]` applies on the open interval between `t_j` and `t_{j+1}`
/// (unbounded at the ends) and `points[j]` at `t_{j+1}` itself.
#[derive(Debug, Clone)]
pub struct DownsetFamily {
    space: FiniteSpace,
    thresholds: Vec<f64>,
    gaps: Vec<Collection>,
    points: Vec<Collection>,
    monotonicity: Monotonicity,
}

impl DownsetFamily {
    pub fn new(
        space: &FiniteSpace,
        thresholds: Vec<f64>,
        gaps: Vec<Collection>,
        points: Vec<Collection>,
        monotonicity: Monotonicity,
    ) -> Result<Self> {
        if thresholds.windows(2).any(|w| w[0] >= w[1]) || thresholds.iter().any(|t| !t.is_finite())
        {
            return domain("family thresholds must be finite and strictly increasing");
        }
        if gaps.len() != thresholds.len() + 1 || points.len() != thresholds.len() {
            return structural(format!(
                "{} thresholds need {} gap and {} point collections",
                thresholds.len(),
                thresholds.len() + 1,
                thresholds.len()
            ));
        }
        let f = DownsetFamily {
            space: space.clone(),
            thresholds,
            gaps,
            points,
            monotonicity,
        };
        if space.size() <= EXPLICIT_LIMIT {
            f.validate()?;
        }
        Ok(f)
    }

    /// `A_x = {A : w(A) ≤ Λ(x)}`.
    pub fn from_lambda(w: &Capacity, l: &LambdaFn) -> Result<Self> {
        let monotonicity = match l.direction() {
            Direction::Increasing | Direction::Constant => Monotonicity::Increasing,
            Direction::Decreasing => Monotonicity::DecreasingLeftContinuous,
        };
        let thresholds = l.breakpoints().to_vec();
        let gaps = l
            .values()
            .iter()
            .map(|&v| Collection::sublevel(w, v))
            .collect();
        let points = thresholds
            .iter()
            .map(|&t| Collection::sublevel(w, l.eval(t)))
            .collect();
        Self::new(w.space(), thresholds, gaps, points, monotonicity)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn gaps(&self) -> &[Collection] {
        &self.gaps
    }

    pub fn points(&self) -> &[Collection] {
        &self.points
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    /// The same family with the collection at `t_{j+1}` replaced.
    pub fn with_point(&self, j: usize, c: Collection) -> Result<Self> {
        if j >= self.points.len() {
            return structural(format!("no threshold with index {j}"));
        }
        let mut points = self.points.clone();
        points[j] = c;
        Self::new(
            &self.space,
            self.thresholds.clone(),
            self.gaps.clone(),
            points,
            self.monotonicity,
        )
    }

    pub fn collection_at(&self, x: f64) -> &Collection {
        let j = self.thresholds.partition_point(|&t| t < x);
        if self.thresholds.get(j) == Some(&x) {
            &self.points[j]
        } else {
            &self.gaps[j]
        }
    }

    pub fn contains(&self, x: f64, mask: u32) -> bool {
        self.collection_at(x).contains(mask)
    }

    /// Exhaustive check of the downset, monotonicity and continuity invariants.
    pub fn validate(&self) -> Result<()> {
        let full = self.space.full_mask();
        // ordered left to right: gap 0, point 0, gap 1, …, gap K
        let mut seq: Vec<&Collection> = Vec::with_capacity(2 * self.points.len() + 1);
        for j in 0..self.points.len() {
            seq.push(&self.gaps[j]);
            seq.push(&self.points[j]);
        }
        seq.push(&self.gaps[self.points.len()]);
        for (k, c) in seq.iter().enumerate() {
            if !c.contains(0) {
                return domain(format!("collection {k} does not contain the empty set"));
            }
            for m in 1..=full {
                if c.contains(m) && bits(m).any(|i| !c.contains(m & !(1 << i))) {
                    return domain(format!("collection {k} is not downward closed at {m:#b}"));
                }
            }
        }
        for (k, pair) in seq.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let ok = (0..=full).all(|m| match self.monotonicity {
                Monotonicity::Increasing => !a.contains(m) || b.contains(m),
                Monotonicity::DecreasingLeftContinuous => !b.contains(m) || a.contains(m),
            });
            if !ok {
                return domain(format!(
                    "family is not monotone between pieces {k} and {}",
                    k + 1
                ));
            }
        }
        if self.monotonicity == Monotonicity::DecreasingLeftContinuous {
            for j in 0..self.points.len() {
                if (0..=full).any(|m| self.points[j].contains(m) != self.gaps[j].contains(m)) {
                    return domain(format!(
                        "decreasing family is not left-continuous at {}",
                        self.thresholds[j]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// `inf{x : {X > x} ∈ A_x}`.
pub fn induced_rho(f: &DownsetFamily, x: &RandomVariable) -> Result<ExtReal> {
    f.space().check_same(x.space(), "induced_rho")?;
    let mut grid = x.values().to_vec();
    grid.extend_from_slice(f.thresholds());
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    Ok(scan_infimum(&grid, |t| f.contains(t, x.tail_mask(t))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdavar::lambda_var;
    use crate::space::ProbabilityMeasure;

    fn fixture() -> (Capacity, RandomVariable) {
        let s = FiniteSpace::anonymous(4).unwrap();
        let w = Capacity::measure(ProbabilityMeasure::uniform(&s));
        let x = RandomVariable::new(&s, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        (w, x)
    }

    #[test]
    fn family_from_lambda_recovers_lambda_var() {
        let (w, x) = fixture();
        for l in [
            LambdaFn::increasing(vec![2.5], vec![0.2, 0.6]).unwrap(),
            LambdaFn::decreasing(vec![1.5, 3.0], vec![0.8, 0.4, 0.1]).unwrap(),
            LambdaFn::constant(0.3).unwrap(),
        ] {
            let f = DownsetFamily::from_lambda(&w, &l).unwrap();
            assert_eq!(
                induced_rho(&f, &x).unwrap(),
                lambda_var(&w, &l, &x).unwrap()
            );
        }
    }

    #[test]
    fn trivial_family_lands_on_the_maximum() {
        // {X > x} is empty once x reaches max X, so ∅-only families are feasible there
        let (w, x) = fixture();
        let s = w.space().clone();
        let f = DownsetFamily::new(
            &s,
            vec![],
            vec![Collection::trivial(&s)],
            vec![],
            Monotonicity::Increasing,
        )
        .unwrap();
        assert_eq!(induced_rho(&f, &x).unwrap(), ExtReal::Finite(4.0));
    }

    #[test]
    fn rejects_broken_families() {
        let s = FiniteSpace::anonymous(3).unwrap();
        let not_down = Collection::from_predicate(&s, |m| m == 0 || m == 0b11);
        assert!(
            DownsetFamily::new(&s, vec![], vec![not_down], vec![], Monotonicity::Increasing)
                .is_err()
        );
        let small = Collection::trivial(&s);
        let big = Collection::from_predicate(&s, |m| m.count_ones() <= 1);
        assert!(DownsetFamily::new(
            &s,
            vec![0.0],
            vec![big.clone(), small.clone()],
            vec![big.clone()],
            Monotonicity::Increasing
        )
        .is_err());
        // decreasing but the point takes the right-hand collection
        assert!(DownsetFamily::new(
            &s,
            vec![0.0],
            vec![big.clone(), small.clone()],
            vec![small],
            Monotonicity::DecreasingLeftContinuous
        )
        .is_err());
    }
}
