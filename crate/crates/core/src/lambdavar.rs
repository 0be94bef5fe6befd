//! Lambda value-at-risk under a capacity and the Choquet quantile.

use crate::capacity::Capacity;
use crate::error::{contract, domain, Result};
use crate::ext::ExtReal;
use crate::lambda::{Direction, LambdaFn};
use crate::space::RandomVariable;

/// Absolute tolerance of every feasibility test `w(X>x) ≤ Λ(x)`.
pub const FEAS_TOL: f64 = 1e-12;

/// Sorted distinct union of the values of `x` and the breakpoints of every `ls`.
pub fn merged_grid<'a>(x: &RandomVariable, ls: impl IntoIterator<Item = &'a LambdaFn>) -> Vec<f64> {
    let mut g = x.values().to_vec();
    for l in ls {
        g.extend_from_slice(l.breakpoints());
    }
    g.sort_by(|a, b| a.total_cmp(b));
    g.dedup();
    g
}

/// Infimum of `{x : feasible(x)}` for a predicate constant on every open gap
/// of `grid` (sorted, distinct, nonempty).
///
/// Grid points are tested directly and gaps through one interior probe; the
/// outer gaps use `g₁ − 1` and `g_K + 1`.
pub fn scan_infimum(grid: &[f64], feasible: impl Fn(f64) -> bool) -> ExtReal {
    assert!(!grid.is_empty(), "scan needs a nonempty grid");
    if feasible(grid[0] - 1.0) {
        return ExtReal::NegInf;
    }
    for (j, &g) in grid.iter().enumerate() {
        if feasible(g) {
            return ExtReal::Finite(g);
        }
        let probe = match grid.get(j + 1) {
            Some(&next) => midpoint(g, next),
            None => g + 1.0,
        };
        if feasible(probe) {
            return ExtReal::Finite(g);
        }
    }
    ExtReal::PosInf
}

/// Supremum of `{x : feasible(x)}`, mirror of [`scan_infimum`].
pub fn scan_supremum(grid: &[f64], feasible: impl Fn(f64) -> bool) -> ExtReal {
    assert!(!grid.is_empty(), "scan needs a nonempty grid");
    let k = grid.len();
    if feasible(grid[k - 1] + 1.0) {
        return ExtReal::PosInf;
    }
    for j in (0..k).rev() {
        let g = grid[j];
        if feasible(g) {
            return ExtReal::Finite(g);
        }
        let probe = if j == 0 {
            g - 1.0
        } else {
            midpoint(grid[j - 1], g)
        };
        if feasible(probe) {
            return ExtReal::Finite(g);
        }
    }
    ExtReal::NegInf
}

fn midpoint(a: f64, b: f64) -> f64 {
    a + (b - a) / 2.0
}

/// `inf{x : w(X>x) ≤ Λ(x)}`.
pub fn lambda_var(w: &Capacity, l: &LambdaFn, x: &RandomVariable) -> Result<ExtReal> {
    w.space().check_same(x.space(), "lambda_var")?;
    let grid = merged_grid(x, [l]);
    Ok(scan_infimum(&grid, |t| {
        w.tail_prob(x, t) <= l.eval(t) + FEAS_TOL
    }))
}

/// `sup{x : w(X>x) ≥ Λ(x)}`.
pub fn lambda_var_plus(w: &Capacity, l: &LambdaFn, x: &RandomVariable) -> Result<ExtReal> {
    w.space().check_same(x.space(), "lambda_var_plus")?;
    let grid = merged_grid(x, [l]);
    Ok(scan_supremum(&grid, |t| {
        w.tail_prob(x, t) >= l.eval(t) - FEAS_TOL
    }))
}

/// `inf{x : w(X>x) ≤ p}`.
pub fn choquet_quantile(w: &Capacity, p: f64, x: &RandomVariable) -> Result<ExtReal> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("quantile level {p} outside (0, 1]"));
    }
    lambda_var(w, &LambdaFn::constant(p)?, x)
}

// Direct quantile over the distinct values, kept apart from the grid scan so
// the representation below is an independent evaluation route.
fn quantile_by_values(w: &Capacity, p: f64, x: &RandomVariable) -> ExtReal {
    if 1.0 <= p + FEAS_TOL {
        return ExtReal::NegInf;
    }
    x.distinct_values()
        .into_iter()
        .find(|&v| w.tail_prob(x, v) <= p + FEAS_TOL)
        .map_or(ExtReal::PosInf, ExtReal::Finite)
}

/// `inf_x { VaR^w_{Λ(x)}(X) ∨ x }` for nondecreasing Λ.
///
/// Λ is constant on each of its pieces, so the infimum over a piece is the
/// quantile at that level capped below by the piece's left end.
pub fn lambda_var_via_choquet(w: &Capacity, l: &LambdaFn, x: &RandomVariable) -> Result<ExtReal> {
    w.space().check_same(x.space(), "lambda_var_via_choquet")?;
    if l.direction() == Direction::Decreasing {
        return contract("the quantile representation needs a nondecreasing lambda");
    }
    let mut best = ExtReal::PosInf;
    for (j, &v) in l.values().iter().enumerate() {
        let left = if j == 0 {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(l.breakpoints()[j - 1])
        };
        best = best.min(quantile_by_values(w, v, x).max(left));
    }
    Ok(best)
}
