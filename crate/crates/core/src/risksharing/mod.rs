//! Inf-convolution of Lambda VaRs and optimal allocations.
//!
//! The tail event `{X > x}` takes finitely many values as `x` moves, and the
//! feasibility of `x` only depends on how that tail is split among agents.
//! For each candidate tail the best split is found by a dynamic program over
//! subsets, so every agent count up to [`MAX_AGENTS`] costs `O(n·3^|Ω|)`.

mod comonotone;
mod finiteness;
mod homogeneous;
mod lambda_star;
mod robust;

pub use comonotone::comonotone_inf_convolution;
pub use finiteness::{finiteness_check, kappa, Finiteness, FinitenessClass};
pub use homogeneous::{
    inf_convolution_homogeneous, inf_convolution_homogeneous_constant, inf_convolution_y_grid,
};
pub use lambda_star::{lambda_star, Staircase};
pub use robust::{robust_sharing, RobustAgent, RobustSharing};

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::Capacity;
use crate::error::{contract, domain, structural, Result};
use crate::ext::ExtReal;
use crate::lambda::{Direction, LambdaFn};
use crate::lambdavar::FEAS_TOL;
use crate::space::{Event, RandomVariable};

pub const MAX_AGENTS: usize = 4;
/// Largest space on which partitions are searched.
pub const MAX_PARTITION_OUTCOMES: usize = 12;

#[derive(Debug, Clone)]
pub struct Agent {
    pub label: String,
    pub lambda: LambdaFn,
    pub w: Capacity,
}

impl Agent {
    pub fn new(label: impl Into<String>, lambda: LambdaFn, w: Capacity) -> Self {
        Agent {
            label: label.into(),
            lambda,
            w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// The value is `−∞`; no allocation attains it.
    UnboundedBelow,
    /// Neither sufficient condition of the comonotone identity holds.
    SufficientConditionNotMet,
    /// The pooled condition holds but the tail cannot be split among agents
    /// without dividing an atom.
    AtomSplitRequired,
    /// Partition search was skipped because the space is too large.
    WitnessSkipped,
    /// Some Λ reaches 1.
    LambdaTouchesOne,
}

/// One line of the feasibility certificate `w_i({X > x*} ∩ A_i) ≤ Λ_i(y_i)`.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateLine {
    pub tail_capacity: f64,
    pub lambda_at_y: f64,
    pub holds: bool,
}

/// An optimal allocation of the form `X_i = (X − x*)·1_{A_i} + y_i`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x_star: f64,
    pub y_star: Vec<f64>,
    pub partition: Vec<Event>,
    pub certificate: Vec<CertificateLine>,
}

#[derive(Debug, Clone)]
pub struct SharingResult {
    pub value: ExtReal,
    pub witness: Option<Witness>,
    pub allocations: Option<Vec<RandomVariable>>,
    pub flags: Vec<Flag>,
}

impl SharingResult {
    fn unbounded() -> Self {
        SharingResult {
            value: ExtReal::NegInf,
            witness: None,
            allocations: None,
            flags: vec![Flag::UnboundedBelow],
        }
    }
}

pub(crate) fn check_agents(agents: &[Agent], x: &RandomVariable) -> Result<()> {
    if agents.is_empty() {
        return domain("risk sharing needs at least one agent");
    }
    if agents.len() > MAX_AGENTS {
        return domain(format!("at most {MAX_AGENTS} agents are supported"));
    }
    for a in agents {
        if a.w.space() != x.space() {
            return structural(format!("agent {} lives on a different space", a.label));
        }
    }
    Ok(())
}

/// Feasible cash levels `{y : Λ(y) ≥ p}` as a closed interval `[lo, hi]`
/// with infinite ends; empty when `lo > hi`.
pub(crate) fn cash_interval(l: &LambdaFn, p: f64) -> (f64, f64) {
    let ok = |v: f64| v >= p - FEAS_TOL;
    let vals = l.values();
    let bps = l.breakpoints();
    match l.direction() {
        Direction::Increasing | Direction::Constant => {
            let lo = match vals.iter().position(|&v| ok(v)) {
                Some(0) => f64::NEG_INFINITY,
                Some(j) => bps[j - 1],
                None => f64::INFINITY,
            };
            (lo, f64::INFINITY)
        }
        Direction::Decreasing => {
            let hi = match vals.iter().rposition(|&v| ok(v)) {
                Some(j) if j == vals.len() - 1 => f64::INFINITY,
                // left-continuous: the value on piece j holds up to and including b_{j+1}
                Some(j) => bps[j],
                None => f64::NEG_INFINITY,
            };
            (f64::NEG_INFINITY, hi)
        }
    }
}

fn interval_empty((lo, hi): (f64, f64)) -> bool {
    lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
}

/// Sum with `+∞` absorbing.
fn add_inf(a: f64, b: f64) -> f64 {
    if a == f64::INFINITY || b == f64::INFINITY {
        f64::INFINITY
    } else {
        a + b
    }
}

/// Minimum over ordered partitions `(A_1,…,A_n)` of `S` of `Σ score_k(A_k)`,
/// for every `S` at once. `choice[k][S]` is the cell of agent `k` in the best
/// split of `S` among agents `0..=k`; ties keep the smallest mask.
pub(crate) struct PartitionDp {
    pub best: Vec<f64>,
    choice: Vec<Vec<u32>>,
}

impl PartitionDp {
    pub fn min_sum(scores: &[Vec<f64>], full: u32) -> Self {
        Self::run(scores, full, add_inf)
    }

    /// Minimum over partitions of the largest score.
    pub fn min_max(scores: &[Vec<f64>], full: u32) -> Self {
        Self::run(scores, full, f64::max)
    }

    fn run(scores: &[Vec<f64>], full: u32, combine: fn(f64, f64) -> f64) -> Self {
        let mut best = scores[0].clone();
        let mut choice = vec![(0..=full).collect::<Vec<u32>>()];
        for sc in &scores[1..] {
            let layer: Vec<(f64, u32)> = (0..=full)
                .into_par_iter()
                .map(|s| {
                    let mut arg = 0u32;
                    let mut val = combine(best[s as usize], sc[0]);
                    let mut a = 0u32;
                    while a != s {
                        a = a.wrapping_sub(s) & s;
                        let cand = combine(best[(s ^ a) as usize], sc[a as usize]);
                        if cand < val {
                            val = cand;
                            arg = a;
                        }
                    }
                    (val, arg)
                })
                .collect();
            best = layer.iter().map(|p| p.0).collect();
            choice.push(layer.iter().map(|p| p.1).collect());
        }
        PartitionDp { best, choice }
    }

    /// Cells of the optimal split of `s`, agent by agent.
    pub fn partition(&self, mut s: u32) -> Vec<u32> {
        let n = self.choice.len();
        let mut cells = vec![0u32; n];
        for k in (1..n).rev() {
            cells[k] = self.choice[k][s as usize];
            s ^= cells[k];
        }
        cells[0] = s;
        cells
    }
}

/// Splits `x` into cash amounts inside the given intervals.
pub(crate) fn split_cash(x: f64, intervals: &[(f64, f64)]) -> Result<Vec<f64>> {
    let mut y: Vec<f64> = intervals
        .iter()
        .map(|&(lo, hi)| {
            if lo.is_finite() {
                lo
            } else if hi.is_finite() {
                hi
            } else {
                0.0
            }
        })
        .collect();
    let d = x - y.iter().sum::<f64>();
    if d != 0.0 {
        let absorber = if d > 0.0 {
            intervals.iter().rposition(|&(_, hi)| hi == f64::INFINITY)
        } else {
            intervals
                .iter()
                .rposition(|&(lo, _)| lo == f64::NEG_INFINITY)
        };
        match absorber {
            Some(k) => y[k] += d,
            None => {
                return contract(format!(
                    "cannot split {x} within the agents' cash intervals"
                ))
            }
        }
    }
    Ok(y)
}

/// Builds `X_i = (X − x*)·1_{A_i} + y_i` and the certificate. Outcomes
/// outside the tail go to the first agent.
pub(crate) fn build_witness(
    agents: &[Agent],
    x: &RandomVariable,
    x_star: f64,
    tail_cells: &[u32],
    y: Vec<f64>,
) -> Result<(Witness, Vec<RandomVariable>)> {
    let space = x.space();
    let tail = x.tail_mask(x_star);
    let mut cells = tail_cells.to_vec();
    cells[0] |= space.full_mask() & !tail;
    let mut allocations = Vec::with_capacity(agents.len());
    let mut certificate = Vec::with_capacity(agents.len());
    for (k, a) in agents.iter().enumerate() {
        let vals = (0..space.size())
            .map(|i| {
                let inside = cells[k] & (1 << i) != 0;
                if inside {
                    x.value(i) - x_star + y[k]
                } else {
                    y[k]
                }
            })
            .collect();
        allocations.push(RandomVariable::new(space, vals)?);
        let tail_capacity = a.w.eval_mask(tail & cells[k]);
        let lambda_at_y = a.lambda.eval(y[k]);
        certificate.push(CertificateLine {
            tail_capacity,
            lambda_at_y,
            holds: tail_capacity <= lambda_at_y + FEAS_TOL,
        });
    }
    let partition = cells
        .iter()
        .map(|&m| space.event_from_mask(m))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        Witness {
            x_star,
            y_star: y,
            partition,
            certificate,
        },
        allocations,
    ))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Increasing,
    Decreasing,
    Mixed,
}

/// `inf{Σ ΛᵢVaR^{wᵢ}(Xᵢ) : Σ Xᵢ = X}` through the pooled downset condition.
///
/// Exact for any mix of monotone Λ's: with only nondecreasing (or only
/// decreasing) agents the best split minimizes (maximizes) the sum of cash
/// thresholds; once both kinds are present, the feasible cash sets add up to
/// the whole line and only their nonemptiness matters.
pub fn inf_convolution(agents: &[Agent], x: &RandomVariable) -> Result<SharingResult> {
    check_agents(agents, x)?;
    let space = x.space();
    if space.size() > MAX_PARTITION_OUTCOMES {
        return domain(format!(
            "partition search supports at most {MAX_PARTITION_OUTCOMES} outcomes"
        ));
    }
    let full = space.full_mask();
    let ups = agents
        .iter()
        .filter(|a| a.lambda.is_nondecreasing())
        .count();
    let mode = if ups == agents.len() {
        Mode::Increasing
    } else if ups == 0 {
        Mode::Decreasing
    } else {
        Mode::Mixed
    };

    let intervals: Vec<Vec<(f64, f64)>> = agents
        .par_iter()
        .map(|a| {
            (0..=full)
                .map(|m| cash_interval(&a.lambda, a.w.eval_mask(m)))
                .collect()
        })
        .collect();
    let scores: Vec<Vec<f64>> = intervals
        .iter()
        .map(|iv| {
            iv.iter()
                .map(|&(lo, hi)| {
                    if interval_empty((lo, hi)) {
                        f64::INFINITY
                    } else {
                        match mode {
                            Mode::Increasing => lo,
                            Mode::Decreasing => -hi,
                            Mode::Mixed => 0.0,
                        }
                    }
                })
                .collect()
        })
        .collect();
    let dp = PartitionDp::min_sum(&scores, full);

    let u = x.distinct_values();
    let m = u.len();
    let tails: Vec<u32> = std::iter::once(full)
        .chain(u.iter().map(|&v| x.tail_mask(v)))
        .collect();
    let best = |j: usize| dp.best[tails[j] as usize];

    let value = match mode {
        Mode::Increasing => {
            let c0 = best(0);
            if c0 == f64::NEG_INFINITY {
                ExtReal::NegInf
            } else if c0 < u[0] {
                ExtReal::Finite(c0)
            } else {
                (1..=m)
                    .find_map(|j| {
                        let upper = if j < m { u[j] } else { f64::INFINITY };
                        (best(j) < upper).then(|| ExtReal::Finite(u[j - 1].max(best(j))))
                    })
                    .unwrap_or(ExtReal::PosInf)
            }
        }
        Mode::Decreasing => {
            if best(0) < f64::INFINITY {
                ExtReal::NegInf
            } else {
                (1..=m)
                    .find(|&j| -best(j) >= u[j - 1])
                    .map_or(ExtReal::PosInf, |j| ExtReal::Finite(u[j - 1]))
            }
        }
        Mode::Mixed => {
            if best(0) < f64::INFINITY {
                ExtReal::NegInf
            } else {
                (1..=m)
                    .find(|&j| best(j) < f64::INFINITY)
                    .map_or(ExtReal::PosInf, |j| ExtReal::Finite(u[j - 1]))
            }
        }
    };

    let x_star = match value {
        ExtReal::NegInf => return Ok(SharingResult::unbounded()),
        ExtReal::PosInf => {
            return Ok(SharingResult {
                value,
                witness: None,
                allocations: None,
                flags: vec![],
            })
        }
        ExtReal::Finite(v) => v,
    };
    let tail = x.tail_mask(x_star);
    let cells = dp.partition(tail);
    let iv: Vec<(f64, f64)> = cells
        .iter()
        .enumerate()
        .map(|(k, &c)| intervals[k][c as usize])
        .collect();
    let y = split_cash(x_star, &iv)?;
    let (witness, allocations) = build_witness(agents, x, x_star, &cells, y)?;
    let mut flags = vec![];
    if agents.iter().any(|a| a.lambda.lambda_plus() >= 1.0) {
        flags.push(Flag::LambdaTouchesOne);
    }
    Ok(SharingResult {
        value,
        witness: Some(witness),
        allocations: Some(allocations),
        flags,
    })
}
