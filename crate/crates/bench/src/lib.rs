//! Deterministic fixtures for the kernel benchmarks.

use lvar_core::{
    Agent, Capacity, DistortionCurve, FiniteSpace, LambdaFn, PhiFn, ProbabilityMeasure,
    RandomVariable,
};

/// Uneven weights `∝ 1 + (i mod 3)` on `n` outcomes.
pub fn measure(space: &FiniteSpace) -> ProbabilityMeasure {
    let masses = (0..space.size()).map(|i| 1.0 + (i % 3) as f64).collect();
    ProbabilityMeasure::from_masses(space, masses).expect("positive masses")
}

/// `X(ωᵢ) = (7i mod n) − n/2`, a permutation of a centred lattice.
pub fn outcome(space: &FiniteSpace) -> RandomVariable {
    let n = space.size();
    let v = (0..n)
        .map(|i| ((7 * i) % n) as f64 - (n / 2) as f64)
        .collect();
    RandomVariable::new(space, v).expect("finite values")
}

/// Nondecreasing Λ with `pieces` steps between 0.1 and 0.6.
pub fn staircase(pieces: usize) -> LambdaFn {
    if pieces <= 1 {
        return LambdaFn::constant(0.3).expect("valid level");
    }
    let bps = (0..pieces - 1).map(|j| j as f64 - 1.0).collect();
    let vals = (0..pieces)
        .map(|j| 0.1 + 0.5 * j as f64 / (pieces - 1) as f64)
        .collect();
    LambdaFn::increasing(bps, vals).expect("valid staircase")
}

pub fn capacities(space: &FiniteSpace) -> Vec<(&'static str, Capacity)> {
    let p = measure(space);
    let q = ProbabilityMeasure::uniform(space);
    let kl = DistortionCurve::new(PhiFn::Kl, 0.1).expect("valid radius");
    vec![
        ("measure", Capacity::measure(p.clone())),
        ("distortion", Capacity::distortion(kl, p.clone())),
        (
            "sup_of_measures",
            Capacity::sup_of_measures(vec![p, q]).expect("same space"),
        ),
    ]
}

/// `n` agents on a common measure with staggered staircases.
pub fn agents(space: &FiniteSpace, n: usize) -> Vec<Agent> {
    let p = measure(space);
    (0..n)
        .map(|i| Agent::new(format!("a{i}"), staircase(2 + i), Capacity::measure(p.clone())))
        .collect()
}
