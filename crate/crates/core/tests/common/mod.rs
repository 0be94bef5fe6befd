#![allow(dead_code)]

use lvar_core::{
    Capacity, DistortionCurve, FiniteSpace, LambdaFn, PhiFn, ProbabilityMeasure, RandomVariable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(n: usize) -> FiniteSpace {
    FiniteSpace::anonymous(n).unwrap()
}

pub fn measure(r: &mut impl Rng, s: &FiniteSpace) -> ProbabilityMeasure {
    let masses = (0..s.size()).map(|_| 0.05 + r.random::<f64>()).collect();
    ProbabilityMeasure::from_masses(s, masses).unwrap()
}

/// Values `k·step` with `k` uniform in `lo..=hi`.
pub fn lattice_x(r: &mut impl Rng, s: &FiniteSpace, step: f64, lo: i32, hi: i32) -> RandomVariable {
    let v = (0..s.size())
        .map(|_| r.random_range(lo..=hi) as f64 * step)
        .collect();
    RandomVariable::new(s, v).unwrap()
}

pub fn real_x(r: &mut impl Rng, s: &FiniteSpace, lo: f64, hi: f64) -> RandomVariable {
    let v = (0..s.size()).map(|_| r.random_range(lo..hi)).collect();
    RandomVariable::new(s, v).unwrap()
}

fn sorted_levels(r: &mut impl Rng, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| r.random_range(lo..hi)).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn distinct_breakpoints(r: &mut impl Rng, k: usize, step: f64, lo: i32, hi: i32) -> Vec<f64> {
    let mut ks: Vec<i32> = Vec::new();
    while ks.len() < k {
        let c = r.random_range(lo..=hi);
        if !ks.contains(&c) {
            ks.push(c);
        }
    }
    ks.sort();
    ks.into_iter().map(|c| c as f64 * step).collect()
}

/// Nondecreasing step Λ with `pieces` pieces, breakpoints on `step·[lo, hi]`.
pub fn increasing_lambda(
    r: &mut impl Rng,
    pieces: usize,
    step: f64,
    lo: i32,
    hi: i32,
    vmin: f64,
    vmax: f64,
) -> LambdaFn {
    if pieces == 1 {
        return LambdaFn::constant(r.random_range(vmin..vmax)).unwrap();
    }
    let bps = distinct_breakpoints(r, pieces - 1, step, lo, hi);
    LambdaFn::increasing(bps, sorted_levels(r, pieces, vmin, vmax)).unwrap()
}

pub fn decreasing_lambda(
    r: &mut impl Rng,
    pieces: usize,
    step: f64,
    lo: i32,
    hi: i32,
    vmin: f64,
    vmax: f64,
) -> LambdaFn {
    let bps = distinct_breakpoints(r, pieces - 1, step, lo, hi);
    let mut vals = sorted_levels(r, pieces, vmin, vmax);
    vals.reverse();
    LambdaFn::decreasing(bps, vals).unwrap()
}

/// Either direction, 1 to 4 pieces, values in `[0.02, 0.95)`.
pub fn any_lambda(r: &mut impl Rng) -> LambdaFn {
    let pieces = r.random_range(1..=4);
    if pieces > 1 && r.random_bool(0.5) {
        decreasing_lambda(r, pieces, 0.5, -6, 10, 0.02, 0.95)
    } else {
        increasing_lambda(r, pieces, 0.5, -6, 10, 0.02, 0.95)
    }
}

/// Measure, distortion or sup of measures on `s`.
pub fn capacity(r: &mut impl Rng, s: &FiniteSpace) -> Capacity {
    match r.random_range(0..3) {
        0 => Capacity::measure(measure(r, s)),
        1 => {
            let phi = [PhiFn::Kl, PhiFn::ChiSquared][r.random_range(0..2)].clone();
            let curve = DistortionCurve::new(phi, r.random_range(0.01..0.5)).unwrap();
            Capacity::distortion(curve, measure(r, s))
        }
        _ => {
            let k = r.random_range(2..=3);
            Capacity::sup_of_measures((0..k).map(|_| measure(r, s)).collect()).unwrap()
        }
    }
}

/// The decreasing Λ `x ↦ ((1−x) ∨ 0.2) ∧ 0.8`, sampled at the thousandths:
/// the piece `(b_{j−1}, b_j]` takes the value at `b_j`.
pub fn example_decreasing_lambda() -> LambdaFn {
    let bps: Vec<f64> = (200..=800).map(|i| i as f64 / 1000.0).collect();
    let vals = std::iter::once(0.8)
        .chain(bps[1..].iter().map(|b| (1.0 - b).clamp(0.2, 0.8)))
        .chain(std::iter::once(0.2))
        .collect();
    LambdaFn::decreasing(bps, vals).unwrap()
}

pub struct ExampleSupFixture {
    pub x: RandomVariable,
    pub p1: ProbabilityMeasure,
    pub p2: ProbabilityMeasure,
    pub lambda: LambdaFn,
}

/// Three outcomes with X = (0.75, 0.5, 0) and two measures whose upper
/// envelope breaks the sup-closure identity for a decreasing Λ.
pub fn example_sup_fixture() -> ExampleSupFixture {
    let s = space(3);
    ExampleSupFixture {
        x: RandomVariable::new(&s, vec![0.75, 0.5, 0.0]).unwrap(),
        p1: ProbabilityMeasure::new(&s, vec![0.625, 0.125, 0.25]).unwrap(),
        p2: ProbabilityMeasure::new(&s, vec![0.15, 0.7, 0.15]).unwrap(),
        lambda: example_decreasing_lambda(),
    }
}
