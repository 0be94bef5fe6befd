//! Brute-force verifiers.
//!
//! Nothing here calls into the scan, partition or inverse routines of the
//! main paths; capacities and Λ's are only evaluated pointwise.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::AmbiguitySet;
use crate::capacity::Capacity;
use crate::divergence::PhiFn;
use crate::error::{domain, structural, Result};
use crate::ext::ExtReal;
use crate::lambda::LambdaFn;
use crate::risksharing::Agent;
use crate::space::{ProbabilityMeasure, RandomVariable};

const TOL: f64 = 1e-12;
const BISECTIONS: usize = 80;
/// Cap on comonotone slope configurations; the simplex grid is coarsened to fit.
pub const MAX_COMONOTONE_CONFIGS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub x_resolution: f64,
    pub y_resolution: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_resolution: 1e-3,
            y_resolution: 1e-2,
            sample_count: 1000,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn new(
        x_resolution: f64,
        y_resolution: f64,
        sample_count: usize,
        seed: u64,
    ) -> Result<Self> {
        let g = GridSpec {
            x_resolution,
            y_resolution,
            sample_count,
            seed,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_resolution > 0.0 && self.x_resolution.is_finite())
            || !(self.y_resolution > 0.0 && self.y_resolution.is_finite())
        {
            return domain("grid resolutions must be positive");
        }
        if self.sample_count == 0 {
            return domain("sample count must be positive");
        }
        Ok(())
    }
}

// k·res, computed as k/(1/res) when 1/res is an integer so that decimal
// grids hit decimal literals exactly.
fn grid_point(k: i64, res: f64) -> f64 {
    let inv = 1.0 / res;
    if (inv - inv.round()).abs() < 1e-9 {
        k as f64 / inv.round()
    } else {
        k as f64 * res
    }
}

fn tail_of(values: &[f64], t: f64) -> u32 {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > t)
        .fold(0, |m, (i, _)| m | 1 << i)
}

// Scan of inf{t : w(Z>t) ≤ Λ(t)} on the grid over [min − 1, max + 1], with
// min/max taken over Z and the breakpoints. Nondecreasing Λ make the feasible
// set an up-set, so bisection over grid indices is exact there.
fn scan(w: &Capacity, l: &LambdaFn, values: &[f64], res: f64) -> ExtReal {
    let bps = l.breakpoints();
    let lo = values
        .iter()
        .chain(bps)
        .copied()
        .fold(f64::INFINITY, f64::min)
        - 1.0;
    let hi = values
        .iter()
        .chain(bps)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0;
    let k0 = (lo / res).floor() as i64;
    let k1 = (hi / res).ceil() as i64;
    let ok = |k: i64| {
        let t = grid_point(k, res);
        w.eval_mask(tail_of(values, t)) <= l.eval(t) + TOL
    };
    if ok(k0) {
        return ExtReal::NegInf;
    }
    if l.is_nondecreasing() {
        if !ok(k1) {
            return ExtReal::PosInf;
        }
        let (mut a, mut b) = (k0, k1);
        while b - a > 1 {
            let m = a + (b - a) / 2;
            if ok(m) {
                b = m;
            } else {
                a = m;
            }
        }
        ExtReal::Finite(grid_point(b, res))
    } else {
        (k0 + 1..=k1)
            .find(|&k| ok(k))
            .map_or(ExtReal::PosInf, |k| ExtReal::Finite(grid_point(k, res)))
    }
}

/// Grid scan of `inf{x : w(X>x) ≤ Λ(x)}`; an upper bound within
/// `x_resolution` of the exact value.
pub fn brute_lambda_var(
    w: &Capacity,
    l: &LambdaFn,
    x: &RandomVariable,
    grid: &GridSpec,
) -> ExtReal {
    scan(w, l, x.values(), grid.x_resolution)
}

fn add_all(vals: impl IntoIterator<Item = ExtReal>) -> ExtReal {
    let mut total = 0.0;
    for v in vals {
        match v {
            ExtReal::Finite(f) => total += f,
            other => return other,
        }
    }
    ExtReal::Finite(total)
}

fn breakpoint_range(agents: &[Agent]) -> (f64, f64) {
    let bps = agents
        .iter()
        .flat_map(|a| a.lambda.breakpoints().iter().copied());
    let (lo, hi) = bps.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| {
        (lo.min(b), hi.max(b))
    });
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}

fn check_sharing(agents: &[Agent], x: &RandomVariable, max_agents: usize) -> Result<()> {
    if agents.is_empty() || agents.len() > max_agents {
        return domain(format!("brute force handles 1 to {max_agents} agents"));
    }
    if agents.iter().any(|a| a.w.space() != x.space()) {
        return structural("agents must live on the space of X");
    }
    Ok(())
}

/// Minimum of `Σ ΛᵢVaR^{wᵢ}(Xᵢ)` over `Xᵢ = (X − x)·1_{Aᵢ} + yᵢ` with
/// `x` on the x-grid, `y₁,…,y_{n−1}` on the y-grid and every assignment
/// of outcomes to agents. Each term is a [`brute_lambda_var`] scan.
///
/// Supports at most 3 agents and 6 outcomes.
pub fn brute_inf_convolution(
    agents: &[Agent],
    x: &RandomVariable,
    grid: &GridSpec,
) -> Result<ExtReal> {
    check_sharing(agents, x, 3)?;
    let n_omega = x.space().size();
    if n_omega > 6 {
        return domain("brute-force inf-convolution handles at most 6 outcomes");
    }
    let n = agents.len();
    let (bmin, bmax) = breakpoint_range(agents);
    let (xr, yr) = (grid.x_resolution, grid.y_resolution);
    let xlo = x.min().min(n as f64 * (bmin - 1.0)) - 1.0;
    let xhi = x.max().max(n as f64 * (bmax + 1.0)) + 1.0;
    let kx: Vec<i64> = ((xlo / xr).floor() as i64..=(xhi / xr).ceil() as i64).collect();
    let masks = 1u32 << n_omega;
    let assignments = n.pow(n_omega as u32);

    let best = kx
        .par_iter()
        .map(|&k| {
            let xs = grid_point(k, xr);
            // Outside [lo, hi] every agent's term is constant in its cash: the
            // held values X − xs never push a threshold past a breakpoint. The
            // gridded agents also need room to steer the residual cash of the
            // last agent into [lo, hi].
            let lo = bmin - (x.max() - xs).max(0.0) - 1.0;
            let hi = bmax + (xs - x.min()).max(0.0) + 1.0;
            let m = (n - 1) as f64;
            let ky0 = (lo.min(xs - m * hi) / yr).floor() as i64;
            let ky1 = (hi.max(xs - m * lo) / yr).ceil() as i64;
            let ys: Vec<f64> = (ky0..=ky1).map(|k| grid_point(k, yr)).collect();
            let shifted = |mask: u32, y: f64| -> Vec<f64> {
                x.values()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if mask >> i & 1 == 1 { v - xs + y } else { y })
                    .collect()
            };
            // h[i][mask][j]: agent i holding cell `mask` and cash ys[j]
            let h: Vec<Vec<Vec<ExtReal>>> = agents[..n - 1]
                .iter()
                .map(|a| {
                    (0..masks)
                        .map(|m| {
                            ys.iter()
                                .map(|&y| scan(&a.w, &a.lambda, &shifted(m, y), xr))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let last = &agents[n - 1];
            let mut memo = HashMap::new();
            let mut best = ExtReal::PosInf;
            let mut idx = vec![0usize; n - 1];
            for code in 0..assignments {
                let mut cells = vec![0u32; n];
                let mut c = code;
                for i in 0..n_omega {
                    cells[c % n] |= 1 << i;
                    c /= n;
                }
                idx.iter_mut().for_each(|j| *j = 0);
                loop {
                    let cash: f64 = idx.iter().map(|&j| ys[j]).sum();
                    let yn = xs - cash;
                    let total = add_all(
                        idx.iter()
                            .enumerate()
                            .map(|(i, &j)| h[i][cells[i] as usize][j])
                            .chain(std::iter::once(
                                *memo.entry((cells[n - 1], yn.to_bits())).or_insert_with(|| {
                                    scan(&last.w, &last.lambda, &shifted(cells[n - 1], yn), xr)
                                }),
                            )),
                    );
                    best = best.min(total);
                    // odometer over the y-grid
                    let mut p = 0;
                    while p < idx.len() {
                        idx[p] += 1;
                        if idx[p] < ys.len() {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == idx.len() {
                        break;
                    }
                }
            }
            best
        })
        .reduce(|| ExtReal::PosInf, ExtReal::min);
    Ok(best)
}

fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![k]];
    }
    (0..=k)
        .flat_map(|first| {
            compositions(k - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Minimum total over comonotone splits `Xᵢ = fᵢ(X)` where each `fᵢ` is
/// piecewise linear between the sorted distinct values of `X` and zero,
/// `fᵢ(0) = 0`, and the slope vectors lie on a simplex grid of step
/// `y_resolution` (coarsened so that at most [`MAX_COMONOTONE_CONFIGS`]
/// configurations are tried).
///
/// Supports at most 3 agents and 6 distinct values.
pub fn brute_comonotone(agents: &[Agent], x: &RandomVariable, grid: &GridSpec) -> Result<ExtReal> {
    check_sharing(agents, x, 3)?;
    let mut knots = x.distinct_values();
    if knots.len() > 6 {
        return domain("brute-force comonotone search handles at most 6 distinct values");
    }
    knots.push(0.0);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let n = agents.len();
    let segments = knots.len() - 1;
    let mut k = (1.0 / grid.y_resolution).round().max(1.0) as usize;
    let simplex = loop {
        let s = compositions(k, n);
        if k == 1 || (s.len() as f64).powi(segments as i32) <= MAX_COMONOTONE_CONFIGS as f64 {
            break s;
        }
        k -= 1;
    };
    let zero = knots
        .iter()
        .position(|&v| v == 0.0)
        .expect("zero is a knot");
    let configs = simplex.len().pow(segments as u32);

    let best = (0..configs)
        .into_par_iter()
        .map(|code| {
            let mut slopes = Vec::with_capacity(segments);
            let mut c = code;
            for _ in 0..segments {
                slopes.push(&simplex[c % simplex.len()]);
                c /= simplex.len();
            }
            // f[i][j] = fᵢ(knots[j])
            let mut f = vec![vec![0.0; knots.len()]; n];
            for i in 0..n {
                for j in zero + 1..knots.len() {
                    let s = slopes[j - 1][i] as f64 / k as f64;
                    f[i][j] = f[i][j - 1] + s * (knots[j] - knots[j - 1]);
                }
                for j in (0..zero).rev() {
                    let s = slopes[j][i] as f64 / k as f64;
                    f[i][j] = f[i][j + 1] - s * (knots[j + 1] - knots[j]);
                }
            }
            add_all(agents.iter().enumerate().map(|(i, a)| {
                let vals: Vec<f64> = x
                    .values()
                    .iter()
                    .map(|v| f[i][knots.iter().position(|u| u == v).expect("value is a knot")])
                    .collect();
                scan(&a.w, &a.lambda, &vals, grid.x_resolution)
            }))
        })
        .reduce(|| ExtReal::PosInf, ExtReal::min);
    Ok(best)
}

/// Searches for allocations whose total ΛVaR falls below `−depth / 2`.
///
/// Candidates are `Xᵢ = (X + depth)·1_{Aᵢ} + yᵢ` over every assignment of
/// outcomes, with one agent taking cash `−depth − (n−1)h` and the others `h`
/// above every breakpoint. Λ's must be nondecreasing.
pub fn brute_divergence_witness(
    agents: &[Agent],
    x: &RandomVariable,
    depth: f64,
    grid: &GridSpec,
) -> Result<bool> {
    check_sharing(agents, x, 4)?;
    if agents.iter().any(|a| !a.lambda.is_nondecreasing()) {
        return domain("divergence search needs nondecreasing lambdas");
    }
    let n_omega = x.space().size();
    if n_omega > 10 {
        return domain("divergence search handles at most 10 outcomes");
    }
    let n = agents.len();
    let (_, bmax) = breakpoint_range(agents);
    let h = bmax.max(0.0) + 1.0;
    let found = (0..n.pow(n_omega as u32)).into_par_iter().any(|code| {
        let mut cells = vec![0u32; n];
        let mut c = code;
        for i in 0..n_omega {
            cells[c % n] |= 1 << i;
            c /= n;
        }
        (0..n).any(|low| {
            let total = add_all(agents.iter().enumerate().map(|(i, a)| {
                let y = if i == low {
                    -depth - (n - 1) as f64 * h
                } else {
                    h
                };
                let vals: Vec<f64> = x
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(o, &v)| {
                        if cells[i] >> o & 1 == 1 {
                            v + depth + y
                        } else {
                            y
                        }
                    })
                    .collect();
                scan(&a.w, &a.lambda, &vals, grid.x_resolution)
            }));
            total <= ExtReal::Finite(-depth / 2.0)
        })
    });
    Ok(found)
}

/// `sup{E[Z·1_A] : Y1 ≤ Z ≤ Y2, E[Z] = 1}` by filling `A` first.
pub fn greedy_band_capacity(
    y1: &RandomVariable,
    y2: &RandomVariable,
    base: &ProbabilityMeasure,
    mask: u32,
) -> f64 {
    let p = base.weights();
    let (a, b) = (y1.values(), y2.values());
    let mut budget = 1.0 - (0..p.len()).map(|i| p[i] * a[i]).sum::<f64>();
    let mut value = 0.0;
    for i in 0..p.len() {
        if mask >> i & 1 == 1 {
            let add = budget.min(p[i] * (b[i] - a[i]));
            value += p[i] * a[i] + add;
            budget -= add;
        }
    }
    value
}

fn phi_divergence(phi: &PhiFn, z: &[f64], p: &[f64]) -> f64 {
    z.iter()
        .zip(p)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&zi, &w)| w * phi.eval(zi))
        .sum()
}

// Largest s ∈ [0,1] with D(1 + s(z − 1)) ≤ δ.
fn shrink_into_ball(phi: &PhiFn, delta: f64, z: &[f64], p: &[f64]) -> Vec<f64> {
    let at = |s: f64| -> Vec<f64> { z.iter().map(|&zi| 1.0 + s * (zi - 1.0)).collect() };
    if phi_divergence(phi, z, p) <= delta {
        return z.to_vec();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if phi_divergence(phi, &at(mid), p) <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}

// Densities a·1_A + b·1_{Aᶜ} with the largest feasible Q(A).
fn two_point_densities(phi: &PhiFn, delta: f64, p: &[f64]) -> Vec<Vec<f64>> {
    let n = p.len();
    (1..(1u32 << n) - 1)
        .filter_map(|mask| {
            let pa: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| p[i]).sum();
            if pa <= 0.0 || pa >= 1.0 {
                return None;
            }
            let div =
                |t: f64| pa * phi.eval(t / pa) + (1.0 - pa) * phi.eval((1.0 - t) / (1.0 - pa));
            let (mut lo, mut hi) = (pa, 1.0);
            if div(hi) <= delta {
                lo = hi;
            } else {
                for _ in 0..BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if div(mid) <= delta {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            let (a, b) = (lo / pa, (1.0 - lo) / (1.0 - pa));
            Some(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { a } else { b })
                    .collect(),
            )
        })
        .collect()
}

fn sampled_densities(s: &AmbiguitySet, grid: &GridSpec) -> Vec<Vec<f64>> {
    let p = s.base().weights();
    let n = p.len();
    (0..grid.sample_count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            rng.set_stream(k as u64);
            let shape = [0.1, 0.5, 1.0, 5.0][rng.random_range(0..4)];
            let gamma = Gamma::new(shape, 1.0).expect("positive shape");
            match s {
                AmbiguitySet::PhiBall { phi, delta, .. } => {
                    let q: Vec<f64> = (0..n)
                        .map(|i| if p[i] > 0.0 { rng.sample(gamma) } else { 0.0 })
                        .collect();
                    let total: f64 = q.iter().sum();
                    let z: Vec<f64> = (0..n)
                        .map(|i| if p[i] > 0.0 { q[i] / total / p[i] } else { 1.0 })
                        .collect();
                    shrink_into_ball(phi, *delta, &z, p)
                }
                AmbiguitySet::LikelihoodBand { y1, y2, .. } => {
                    let (a, b) = (y1.values(), y2.values());
                    let u: Vec<f64> = (0..n)
                        .map(|i| a[i] + rng.random::<f64>() * (b[i] - a[i]))
                        .collect();
                    let e = |v: &[f64]| (0..n).map(|i| p[i] * v[i]).sum::<f64>();
                    let eu = e(&u);
                    if eu > 1.0 {
                        let t = (1.0 - e(a)) / (eu - e(a));
                        (0..n).map(|i| a[i] + t * (u[i] - a[i])).collect()
                    } else {
                        let t = (1.0 - eu) / (e(b) - eu);
                        (0..n).map(|i| u[i] + t * (b[i] - u[i])).collect()
                    }
                }
            }
        })
        .collect()
}

fn extreme_densities(s: &AmbiguitySet) -> Vec<Vec<f64>> {
    let p = s.base().weights();
    match s {
        AmbiguitySet::PhiBall { phi, delta, .. } => two_point_densities(phi, *delta, p),
        AmbiguitySet::LikelihoodBand { y1, y2, .. } => {
            let n = p.len();
            let (a, b) = (y1.values(), y2.values());
            (1..1u32 << n)
                .map(|mask| {
                    let mut budget = 1.0 - (0..n).map(|i| p[i] * a[i]).sum::<f64>();
                    let mut z = a.to_vec();
                    let order = (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .chain((0..n).filter(|i| mask >> i & 1 == 0));
                    for i in order {
                        if p[i] > 0.0 {
                            let add = budget.min(p[i] * (b[i] - a[i]));
                            z[i] += add / p[i];
                            budget -= add;
                        }
                    }
                    z
                })
                .collect()
        }
    }
}

/// Max of [`brute_lambda_var`] under `sample_count` random members of `s`
/// plus its two-point (or greedy-extreme) members; a lower bound for the
/// worst case up to the scan resolution.
pub fn brute_sup_over_ball(
    s: &AmbiguitySet,
    l: &LambdaFn,
    x: &RandomVariable,
    grid: &GridSpec,
) -> Result<ExtReal> {
    grid.validate()?;
    if s.base().space() != x.space() {
        return structural("ambiguity set and X live on different spaces");
    }
    let p = s.base().weights();
    let mut densities = sampled_densities(s, grid);
    densities.extend(extreme_densities(s));
    let best = densities
        .par_iter()
        .filter_map(|z| {
            let masses = z.iter().zip(p).map(|(zi, pi)| (zi * pi).max(0.0)).collect();
            let q = ProbabilityMeasure::from_masses(x.space(), masses).ok()?;
            Some(brute_lambda_var(&Capacity::measure(q), l, x, grid))
        })
        .reduce(|| ExtReal::NegInf, ExtReal::max);
    Ok(best)
}
