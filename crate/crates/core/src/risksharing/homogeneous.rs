//! Sharing among agents whose worst cases are `min(1, E_P[Y·1_A])` for a
//! common `(P, Y)`.

use rayon::prelude::*;

use super::lambda_star::Staircase;
use super::{
    build_witness, check_agents, split_cash, Agent, Flag, SharingResult, MAX_PARTITION_OUTCOMES,
};
use crate::capacity::Backend;
use crate::error::{contract, domain, Result};
use crate::ext::ExtReal;
use crate::lambdavar::{scan_infimum, FEAS_TOL};
use crate::space::{ProbabilityMeasure, RandomVariable};

/// The common `(P, Y)`, with `Y ≡ 1` for plain measures.
fn common_density(agents: &[Agent]) -> Result<(ProbabilityMeasure, RandomVariable)> {
    let mut found: Option<(ProbabilityMeasure, RandomVariable)> = None;
    for a in agents {
        if !a.lambda.is_nondecreasing() {
            return contract(format!("agent {} needs a nondecreasing lambda", a.label));
        }
        let (p, y) = match a.w.backend() {
            Backend::ExpectationCap { y, base } => (base.clone(), y.clone()),
            Backend::Measure(p) => (p.clone(), RandomVariable::constant(p.space(), 1.0)?),
            _ => {
                return contract(format!(
                    "agent {} needs an expectation-cap capacity",
                    a.label
                ))
            }
        };
        match &found {
            None => found = Some((p, y)),
            Some((p0, y0)) => {
                if p0.weights() != p.weights() || y0.values() != y.values() {
                    return contract("all agents must share the same base measure and density");
                }
            }
        }
    }
    Ok(found.expect("agents checked nonempty"))
}

/// `inf{x : E_P[Y·1_{X>x}] ≤ Λ̄*(x)}` with `Λ̄*` the uncapped sup-convolution.
///
/// The optimal split of the pooled level among agents always exists for
/// step functions. Splitting the tail event itself may need fractions of
/// atoms; when no whole-atom partition fits, the value is returned with
/// [`Flag::AtomSplitRequired`] and no allocation.
pub fn inf_convolution_homogeneous(agents: &[Agent], x: &RandomVariable) -> Result<SharingResult> {
    check_agents(agents, x)?;
    let (p, y) = common_density(agents)?;
    let ls: Vec<_> = agents.iter().map(|a| a.lambda.clone()).collect();
    let stair = Staircase::of(&ls)?;
    let mut grid = x.values().to_vec();
    grid.extend(stair.finite_thresholds());
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    let tail_mass = |t: f64| p.expectation_on(&y, x.tail_mask(t));
    let value = scan_infimum(&grid, |t| tail_mass(t) <= stair.eval(t) + FEAS_TOL);
    let x_star = match value {
        ExtReal::Finite(v) => v,
        ExtReal::NegInf => {
            return Ok(SharingResult {
                value,
                witness: None,
                allocations: None,
                flags: vec![Flag::UnboundedBelow],
            })
        }
        ExtReal::PosInf => {
            return Ok(SharingResult {
                value,
                witness: None,
                allocations: None,
                flags: vec![],
            })
        }
    };
    if x.space().size() > MAX_PARTITION_OUTCOMES {
        return Ok(SharingResult {
            value,
            witness: None,
            allocations: None,
            flags: vec![Flag::WitnessSkipped],
        });
    }

    let tail = x.tail_mask(x_star);
    let mass: Vec<f64> = (0..=tail)
        .map(|m| {
            if m & !tail == 0 {
                agents[0].w.eval_mask(m)
            } else {
                0.0
            }
        })
        .collect();
    for levels in level_choices(&ls, x_star) {
        let caps: Vec<f64> = levels
            .iter()
            .zip(&ls)
            .map(|(&j, l)| l.values()[j])
            .collect();
        if let Some(cells) = pack(tail, &mass, &caps) {
            let intervals: Vec<(f64, f64)> = levels
                .iter()
                .zip(&ls)
                .map(|(&j, l)| {
                    let lo = if j == 0 {
                        f64::NEG_INFINITY
                    } else {
                        l.breakpoints()[j - 1]
                    };
                    (lo, f64::INFINITY)
                })
                .collect();
            let yv = split_cash(x_star, &intervals)?;
            let (witness, allocations) = build_witness(agents, x, x_star, &cells, yv)?;
            return Ok(SharingResult {
                value,
                witness: Some(witness),
                allocations: Some(allocations),
                flags: vec![],
            });
        }
    }
    Ok(SharingResult {
        value,
        witness: None,
        allocations: None,
        flags: vec![Flag::AtomSplitRequired],
    })
}

/// Per-agent pieces whose left ends sum to at most `x`, highest total first.
fn level_choices(ls: &[crate::lambda::LambdaFn], x: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<(f64, Vec<usize>)> = vec![(0.0, vec![])];
    let mut left: Vec<f64> = vec![0.0];
    for l in ls {
        let mut next = Vec::new();
        let mut next_left = Vec::new();
        for ((v, lv), &t) in out.iter().zip(&left) {
            for j in 0..l.values().len() {
                let tj = if j == 0 {
                    f64::NEG_INFINITY
                } else {
                    l.breakpoints()[j - 1]
                };
                let mut lv2 = lv.clone();
                lv2.push(j);
                next.push((v + l.values()[j], lv2));
                next_left.push(t + tj);
            }
        }
        out = next;
        left = next_left;
    }
    let mut feasible: Vec<(f64, Vec<usize>)> = out
        .into_iter()
        .zip(left)
        .filter(|(_, t)| *t <= x)
        .map(|(c, _)| c)
        .collect();
    feasible.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    feasible.into_iter().map(|c| c.1).collect()
}

/// Partition of `tail` into cells with capacity at most `caps[k]`.
fn pack(tail: u32, mass: &[f64], caps: &[f64]) -> Option<Vec<u32>> {
    let n = caps.len();
    let subs: Vec<u32> = {
        let mut v = vec![];
        let mut a = 0u32;
        loop {
            v.push(a);
            if a == tail {
                break;
            }
            a = a.wrapping_sub(tail) & tail;
        }
        v
    };
    // reach[k][S]: S splits among agents 0..=k within their caps
    let mut reach: Vec<Vec<bool>> = vec![vec![false; tail as usize + 1]; n];
    for &s in &subs {
        reach[0][s as usize] = mass[s as usize] <= caps[0] + FEAS_TOL;
    }
    for k in 1..n {
        for &s in &subs {
            let mut a = 0u32;
            loop {
                if mass[a as usize] <= caps[k] + FEAS_TOL && reach[k - 1][(s ^ a) as usize] {
                    reach[k][s as usize] = true;
                    break;
                }
                if a == s {
                    break;
                }
                a = a.wrapping_sub(s) & s;
            }
        }
    }
    if !reach[n - 1][tail as usize] {
        return None;
    }
    let mut cells = vec![0u32; n];
    let mut s = tail;
    for k in (1..n).rev() {
        let mut a = 0u32;
        loop {
            if mass[a as usize] <= caps[k] + FEAS_TOL && reach[k - 1][(s ^ a) as usize] {
                break;
            }
            a = a.wrapping_sub(s) & s;
        }
        cells[k] = a;
        s ^= a;
    }
    cells[0] = s;
    Some(cells)
}

/// `inf{x : E_P[Y·1_{X>x}] ≤ Σ λᵢ⁺}`, valid when some Λᵢ is constant.
pub fn inf_convolution_homogeneous_constant(
    agents: &[Agent],
    x: &RandomVariable,
) -> Result<ExtReal> {
    check_agents(agents, x)?;
    let (p, y) = common_density(agents)?;
    if !agents.iter().any(|a| a.lambda.breakpoints().is_empty()) {
        return contract("the constant formula needs at least one constant lambda");
    }
    let level: f64 = agents.iter().map(|a| a.lambda.lambda_plus()).sum();
    let mut grid = x.distinct_values();
    grid.dedup();
    Ok(scan_infimum(&grid, |t| {
        p.expectation_on(&y, x.tail_mask(t)) <= level + FEAS_TOL
    }))
}

/// Infimum over cash increments on a grid of spacing `resolution` of
/// `inf{x : E_P[Y·1_{X>x}] ≤ Λ^y(x)}`, where agent `i < n` receives the
/// increment `dᵢ` and the last agent the rest.
///
/// Increments range over the breakpoint window widened by one on each side;
/// grids with spacings `r` and `r/2` are nested, so halving the spacing can
/// only lower the value.
pub fn inf_convolution_y_grid(
    agents: &[Agent],
    x: &RandomVariable,
    resolution: f64,
) -> Result<ExtReal> {
    check_agents(agents, x)?;
    if !(resolution > 0.0 && resolution.is_finite()) {
        return domain(format!(
            "grid resolution must be positive, got {resolution}"
        ));
    }
    let (p, y) = common_density(agents)?;
    let n = agents.len();
    let inner = |fixed: &[f64]| -> ExtReal {
        let shift: f64 = fixed.iter().sum();
        let head: f64 = fixed
            .iter()
            .zip(agents)
            .map(|(&d, a)| a.lambda.eval(d))
            .sum();
        let last = &agents[n - 1].lambda;
        let mut grid = x.values().to_vec();
        grid.extend(last.breakpoints().iter().map(|b| b + shift));
        grid.sort_by(|a, b| a.total_cmp(b));
        grid.dedup();
        scan_infimum(&grid, |t| {
            p.expectation_on(&y, x.tail_mask(t)) <= head + last.eval(t - shift) + FEAS_TOL
        })
    };
    if n == 1 {
        return Ok(inner(&[]));
    }
    let bps: Vec<f64> = agents
        .iter()
        .flat_map(|a| a.lambda.breakpoints().iter().copied())
        .collect();
    let lo = bps.iter().copied().fold(0.0f64, f64::min) - 1.0;
    let hi = bps.iter().copied().fold(0.0f64, f64::max) + 1.0;
    let k_lo = (lo / resolution).floor() as i64;
    let k_hi = (hi / resolution).ceil() as i64;
    let axis: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * resolution).collect();
    let dims = n - 1;
    let total = axis.len().pow(dims as u32);
    let best = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut d = Vec::with_capacity(dims);
            for _ in 0..dims {
                d.push(axis[idx % axis.len()]);
                idx /= axis.len();
            }
            inner(&d)
        })
        .reduce(|| ExtReal::PosInf, ExtReal::min);
    Ok(best)
}
