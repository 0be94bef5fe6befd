//! Ambiguity sets around a reference measure and their worst cases.

use serde::Serialize;

use crate::capacity::Capacity;
use crate::divergence::{transform_lambda, DistortionCurve, PhiFn};
use crate::error::{contract, domain, Result};
use crate::ext::ExtReal;
use crate::lambda::{Direction, LambdaFn};
use crate::lambdavar::lambda_var;
use crate::space::{ProbabilityMeasure, RandomVariable};

/// Allowed gap between the capacity route and the transformed-Λ route.
pub const ROUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum AmbiguitySet {
    /// `{Q ≪ P : D_φ(Q‖P) ≤ δ}`.
    PhiBall {
        phi: PhiFn,
        delta: f64,
        base: ProbabilityMeasure,
    },
    /// `{Q : Y1 ≤ dQ/dP ≤ Y2}`.
    LikelihoodBand {
        y1: RandomVariable,
        y2: RandomVariable,
        base: ProbabilityMeasure,
    },
}

impl AmbiguitySet {
    pub fn phi_ball(phi: PhiFn, delta: f64, base: ProbabilityMeasure) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return domain(format!("ball radius must be positive, got {delta}"));
        }
        Ok(AmbiguitySet::PhiBall { phi, delta, base })
    }

    pub fn likelihood_band(
        y1: RandomVariable,
        y2: RandomVariable,
        base: ProbabilityMeasure,
    ) -> Result<Self> {
        // the capacity constructor carries the full set of checks
        Capacity::likelihood_band(y1.clone(), y2.clone(), base.clone())?;
        Ok(AmbiguitySet::LikelihoodBand { y1, y2, base })
    }

    /// Band with constant bounds `k1 ≤ dQ/dP ≤ k2`.
    pub fn constant_band(k1: f64, k2: f64, base: ProbabilityMeasure) -> Result<Self> {
        let s = base.space().clone();
        Self::likelihood_band(
            RandomVariable::constant(&s, k1)?,
            RandomVariable::constant(&s, k2)?,
            base,
        )
    }

    pub fn base(&self) -> &ProbabilityMeasure {
        match self {
            AmbiguitySet::PhiBall { base, .. } | AmbiguitySet::LikelihoodBand { base, .. } => base,
        }
    }

    /// The distortion whose composition with the base gives the worst case,
    /// when one exists: divergence balls and constant bands.
    pub fn distortion_curve(&self) -> Result<Option<DistortionCurve>> {
        match self {
            AmbiguitySet::PhiBall { phi, delta, .. } => {
                Ok(Some(DistortionCurve::new(phi.clone(), *delta)?))
            }
            AmbiguitySet::LikelihoodBand { y1, y2, .. } => match (constant_of(y1), constant_of(y2))
            {
                (Some(k1), Some(k2)) => Ok(Some(DistortionCurve::new(PhiFn::band(k1, k2)?, 1.0)?)),
                _ => Ok(None),
            },
        }
    }
}

fn constant_of(y: &RandomVariable) -> Option<f64> {
    let v = y.values()[0];
    y.values().iter().all(|&u| u == v).then_some(v)
}

/// `Q̄(A) = sup_{Q ∈ S} Q(A)`.
///
/// For a non-constant band the supremum is the linear-programming value
/// `min(E[Y2·1_A], 1 − E[Y1·1_{Aᶜ}])`, which splits atoms fractionally.
pub fn worst_case_capacity(s: &AmbiguitySet) -> Result<Capacity> {
    match s {
        AmbiguitySet::PhiBall { phi, delta, base } => Ok(Capacity::distortion(
            DistortionCurve::new(phi.clone(), *delta)?,
            base.clone(),
        )),
        AmbiguitySet::LikelihoodBand { y1, y2, base } => {
            if y1.values().iter().all(|&v| v == 0.0) {
                return Capacity::expectation_cap(y2.clone(), base.clone());
            }
            match s.distortion_curve()? {
                Some(curve) => Ok(Capacity::distortion(curve, base.clone())),
                None => Capacity::likelihood_band(y1.clone(), y2.clone(), base.clone()),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustReport {
    pub value: ExtReal,
    /// Value through `(g⁻¹∘Λ)VaR^P` when a distortion exists.
    pub transformed_value: Option<ExtReal>,
    /// Whether both routes were compared.
    pub routes_checked: bool,
    /// Λ reaches 1, where `g⁻¹(1) = x_δ` makes the transformed route a
    /// different function; the routes are then not compared.
    pub lambda_touches_one: bool,
}

/// `sup_{Q∈S} ΛVaR^Q(X)` for nondecreasing Λ.
pub fn robust_lambda_var(
    s: &AmbiguitySet,
    l: &LambdaFn,
    x: &RandomVariable,
) -> Result<RobustReport> {
    if l.direction() == Direction::Decreasing {
        return contract("robust lambda VaR needs a nondecreasing lambda");
    }
    let cap = worst_case_capacity(s)?;
    let value = lambda_var(&cap, l, x)?;
    let curve = match s.distortion_curve()? {
        Some(c) if c.phi().is_superlinear() || matches!(c.phi(), PhiFn::Band { .. }) => Some(c),
        _ => None,
    };
    let touches = l.lambda_plus() >= 1.0;
    let mut report = RobustReport {
        value,
        transformed_value: None,
        routes_checked: false,
        lambda_touches_one: touches,
    };
    if let Some(curve) = curve {
        let tl = transform_lambda(&curve, l)?;
        let tv = lambda_var(&Capacity::measure(s.base().clone()), &tl, x)?;
        report.transformed_value = Some(tv);
        if !touches {
            report.routes_checked = true;
            if value.distance(tv) > ROUTE_TOL {
                return contract(format!(
                    "capacity route gives {value} but transformed route gives {tv}"
                ));
            }
        }
    }
    Ok(report)
}

/// Choquet integral `∫ g(w(X>x)) dx` with the usual split at zero.
pub fn distortion_rm(w: &Capacity, g: impl Fn(f64) -> f64, x: &RandomVariable) -> Result<f64> {
    w.space().check_same(x.space(), "distortion_rm")?;
    let u = x.distinct_values();
    let mut total = u[0];
    for pair in u.windows(2) {
        total += g(w.tail_prob(x, pair[0])) * (pair[1] - pair[0]);
    }
    Ok(total)
}

/// `ρ^P_{g∘g_{φ,δ}}(X)`, an upper bound on `sup_Q ρ^Q_g(X)` over the ball.
pub fn robust_distortion_bound(
    s: &AmbiguitySet,
    g: impl Fn(f64) -> f64,
    x: &RandomVariable,
) -> Result<f64> {
    let AmbiguitySet::PhiBall { phi, delta, base } = s else {
        return contract("the distortion bound needs a divergence ball");
    };
    let curve = DistortionCurve::new(phi.clone(), *delta)?;
    distortion_rm(&Capacity::measure(base.clone()), |t| g(curve.g(t)), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdavar::choquet_quantile;
    use crate::space::FiniteSpace;

    fn uniform(n: usize) -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(&FiniteSpace::anonymous(n).unwrap())
    }

    #[test]
    fn band_specializations() {
        let p = uniform(10);
        let s = p.space().clone();
        let a = s.event(&[0, 1, 2]).unwrap();
        let cap = AmbiguitySet::likelihood_band(
            RandomVariable::constant(&s, 0.0).unwrap(),
            RandomVariable::constant(&s, 2.0).unwrap(),
            p.clone(),
        )
        .unwrap();
        assert!((worst_case_capacity(&cap).unwrap().eval(&a).unwrap() - 0.6).abs() < 1e-12);

        let p4 = uniform(4);
        let band = AmbiguitySet::constant_band(0.5, 2.0, p4.clone()).unwrap();
        let w = worst_case_capacity(&band).unwrap();
        assert_eq!(w.eval_mask(0b0001), 0.5);

        let ball = AmbiguitySet::phi_ball(PhiFn::ChiSquared, 0.25, uniform(5)).unwrap();
        assert!((worst_case_capacity(&ball).unwrap().eval_mask(0b1) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn band_rejects_bad_bounds() {
        let p = uniform(3);
        let s = p.space().clone();
        let y = |v: Vec<f64>| RandomVariable::new(&s, v).unwrap();
        assert!(AmbiguitySet::likelihood_band(
            y(vec![1.0, 0.5, 0.0]),
            y(vec![0.5, 2.0, 2.0]),
            p.clone()
        )
        .is_err());
        assert!(
            AmbiguitySet::likelihood_band(y(vec![0.5; 3]), y(vec![0.9; 3]), p.clone()).is_err()
        );
        assert!(AmbiguitySet::phi_ball(PhiFn::Kl, 0.0, p).is_err());
    }

    #[test]
    fn constant_lambda_under_a_ball() {
        let p = uniform(8);
        let s = p.space().clone();
        let x = RandomVariable::new(&s, (0..8).map(|i| i as f64).collect()).unwrap();
        let ball = AmbiguitySet::phi_ball(PhiFn::Kl, 0.1, p.clone()).unwrap();
        let l = LambdaFn::constant(0.3).unwrap();
        let r = robust_lambda_var(&ball, &l, &x).unwrap();
        assert!(r.routes_checked);
        let curve = DistortionCurve::new(PhiFn::Kl, 0.1).unwrap();
        let level = crate::divergence::g_inverse(&curve, 0.3).unwrap();
        assert_eq!(
            r.value,
            choquet_quantile(&Capacity::measure(p), level, &x).unwrap()
        );
    }

    #[test]
    fn distortion_integral() {
        let p = uniform(4);
        let s = p.space().clone();
        let x = RandomVariable::new(&s, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = Capacity::measure(p);
        assert!((distortion_rm(&w, |t| t * t, &x).unwrap() - 1.875).abs() < 1e-15);
        assert!((distortion_rm(&w, |t| t, &x).unwrap() - 2.5).abs() < 1e-15);
        let c = RandomVariable::constant(&s, -3.0).unwrap();
        assert_eq!(distortion_rm(&w, |t| t.sqrt(), &c).unwrap(), -3.0);
    }

    #[test]
    fn decreasing_lambda_is_rejected() {
        let p = uniform(3);
        let x = RandomVariable::constant(p.space(), 1.0).unwrap();
        let ball = AmbiguitySet::phi_ball(PhiFn::Kl, 0.1, p).unwrap();
        let l = LambdaFn::decreasing(vec![0.0], vec![0.5, 0.2]).unwrap();
        assert_eq!(
            robust_lambda_var(&ball, &l, &x).unwrap_err().reason(),
            "contract"
        );
    }
}
