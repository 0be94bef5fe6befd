use crate::error::{contract, Result};
use crate::lambda::LambdaFn;

/// Nondecreasing right-continuous step function `x ↦ sup_{Σyᵢ=x} Σ Λᵢ(yᵢ)`
/// (uncapped), stored as its jump points.
///
/// `levels[k][i]` is the piece of agent `i` used at step `k`; the first
/// threshold is `−∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    pub thresholds: Vec<f64>,
    pub values: Vec<f64>,
    pub levels: Vec<Vec<usize>>,
}

impl Staircase {
    /// Exact sup-convolution of nondecreasing step functions.
    pub fn of(ls: &[LambdaFn]) -> Result<Self> {
        if ls.is_empty() {
            return contract("the sup-convolution needs at least one lambda");
        }
        if let Some(l) = ls.iter().find(|l| !l.is_nondecreasing()) {
            return contract(format!(
                "sup-convolution needs nondecreasing lambdas, got {:?}",
                l.direction()
            ));
        }
        let mut acc = Self::single(&ls[0]);
        for l in &ls[1..] {
            acc = acc.combine(&Self::single(l));
        }
        Ok(acc)
    }

    fn single(l: &LambdaFn) -> Self {
        let thresholds = std::iter::once(f64::NEG_INFINITY)
            .chain(l.breakpoints().iter().copied())
            .collect();
        Staircase {
            thresholds,
            values: l.values().to_vec(),
            levels: (0..l.values().len()).map(|j| vec![j]).collect(),
        }
    }

    // y₁ ≥ t₁ and y₂ ≥ t₂ with y₁ + y₂ = x is possible iff t₁ + t₂ ≤ x.
    fn combine(&self, other: &Staircase) -> Staircase {
        let mut cand: Vec<(f64, f64, Vec<usize>)> = Vec::new();
        for a in 0..self.values.len() {
            for b in 0..other.values.len() {
                let mut lv = self.levels[a].clone();
                lv.extend_from_slice(&other.levels[b]);
                cand.push((
                    self.thresholds[a] + other.thresholds[b],
                    self.values[a] + other.values[b],
                    lv,
                ));
            }
        }
        cand.sort_by(|p, q| p.0.total_cmp(&q.0).then(q.1.total_cmp(&p.1)));
        let mut out = Staircase {
            thresholds: vec![],
            values: vec![],
            levels: vec![],
        };
        for (t, v, lv) in cand {
            if out.values.last().is_none_or(|&last| v > last) {
                out.thresholds.push(t);
                out.values.push(v);
                out.levels.push(lv);
            }
        }
        out
    }

    pub fn step_index(&self, x: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= x) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.values[self.step_index(x)]
    }

    /// Finite jump points.
    pub fn finite_thresholds(&self) -> impl Iterator<Item = f64> + '_ {
        self.thresholds.iter().copied().filter(|t| t.is_finite())
    }
}

/// `Λ*(x) = 1 ∧ sup_{y₁+⋯+yₙ=x} Σ Λᵢ(yᵢ)` for nondecreasing step Λ's.
pub fn lambda_star(ls: &[LambdaFn], x: f64) -> Result<f64> {
    Ok(Staircase::of(ls)?.eval(x).min(1.0))
}
