//! φ-divergences and the worst-case distortion `g_{φ,δ}` of a divergence ball.

use std::fmt;
use std::sync::Arc;

use crate::error::{contract, domain, LvarError, Result};
use crate::lambda::LambdaFn;

const MAX_BISECTIONS: usize = 200;
/// Residual accepted when checking a bisection root.
pub const ROOT_TOL: f64 = 1e-10;

type PhiEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PhiFn {
    /// `φ(u) = u ln u`.
    Kl,
    /// `φ(u) = u^α − 1`, α > 1.
    Alpha(f64),
    /// `φ(u) = (u − 1)²`.
    ChiSquared,
    /// `φ = 0` on `[k1, k2]` and `+∞` elsewhere.
    Band { k1: f64, k2: f64 },
    /// A user convex function with `φ(1) = 0`. `superlinear` asserts strict
    /// convexity and `φ(u)/u → ∞`, which enables the threshold and inverse.
    Custom {
        name: String,
        eval: PhiEval,
        superlinear: bool,
    },
}

impl fmt::Debug for PhiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiFn::Kl => write!(f, "Kl"),
            PhiFn::Alpha(a) => write!(f, "Alpha({a})"),
            PhiFn::ChiSquared => write!(f, "ChiSquared"),
            PhiFn::Band { k1, k2 } => write!(f, "Band {{ k1: {k1}, k2: {k2} }}"),
            PhiFn::Custom {
                name, superlinear, ..
            } => write!(f, "Custom({name}, superlinear: {superlinear})"),
        }
    }
}

impl PhiFn {
    pub fn alpha(a: f64) -> Result<Self> {
        if !(a > 1.0 && a.is_finite()) {
            return domain(format!("alpha divergence needs alpha > 1, got {a}"));
        }
        Ok(PhiFn::Alpha(a))
    }

    pub fn band(k1: f64, k2: f64) -> Result<Self> {
        if !((0.0..1.0).contains(&k1) && 1.0 < k2 && k2.is_finite()) {
            return domain(format!("band needs 0 <= k1 < 1 < k2, got ({k1}, {k2})"));
        }
        Ok(PhiFn::Band { k1, k2 })
    }

    /// Checks `φ(1) = 0` and midpoint convexity on a grid over `[0, 16]`.
    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        superlinear: bool,
    ) -> Result<Self> {
        let eval: PhiEval = Arc::new(eval);
        if eval(1.0).abs() > 1e-12 {
            return domain("custom phi must vanish at 1");
        }
        let grid: Vec<f64> = (0..=160).map(|i| i as f64 * 0.1).collect();
        for (i, &a) in grid.iter().enumerate() {
            for &b in &grid[i + 1..] {
                let (fa, fb, fm) = (eval(a), eval(b), eval(0.5 * (a + b)));
                if fa.is_finite() && fb.is_finite() && fm > 0.5 * (fa + fb) + 1e-9 {
                    return domain(format!("custom phi fails convexity between {a} and {b}"));
                }
            }
        }
        Ok(PhiFn::Custom {
            name: name.into(),
            eval,
            superlinear,
        })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            PhiFn::Kl => {
                if u == 0.0 {
                    0.0
                } else {
                    u * u.ln()
                }
            }
            PhiFn::Alpha(a) => u.powf(*a) - 1.0,
            PhiFn::ChiSquared => (u - 1.0) * (u - 1.0),
            PhiFn::Band { k1, k2 } => {
                if u >= *k1 - 1e-15 && u <= *k2 + 1e-15 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PhiFn::Custom { eval, .. } => eval(u),
        }
    }

    /// Strictly convex with superlinear growth.
    pub fn is_superlinear(&self) -> bool {
        match self {
            PhiFn::Kl | PhiFn::Alpha(_) | PhiFn::ChiSquared => true,
            PhiFn::Band { .. } => false,
            PhiFn::Custom { superlinear, .. } => *superlinear,
        }
    }

    /// `f(x,t) = xφ(t/x) + (1−x)φ((1−t)/(1−x))` for `x ∈ (0,1)`.
    pub fn two_point(&self, x: f64, t: f64) -> f64 {
        x * self.eval(t / x) + (1.0 - x) * self.eval((1.0 - t) / (1.0 - x))
    }

    /// `E_P[φ(Z)]` for a density `Z` given on weighted atoms.
    pub fn divergence(&self, density: &[f64], weights: &[f64]) -> f64 {
        density
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&z, &w)| w * self.eval(z))
            .sum()
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return domain(format!("divergence radius must be positive, got {delta}"));
    }
    Ok(())
}

/// Bisection on `[x, 1]` for the last `t` with `f(x,t) ≤ δ`. Returns the
/// feasible end of the final bracket.
fn g_bisect(phi: &PhiFn, delta: f64, x: f64) -> Result<f64> {
    if phi.two_point(x, 1.0) <= delta {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (x, 1.0);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if phi.two_point(x, mid) <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = phi.two_point(x, lo) - delta;
    if !(residual <= ROOT_TOL) || hi - lo > ROOT_TOL {
        return Err(LvarError::Numeric {
            message: format!("g bisection at x = {x} did not converge"),
            residual: if residual.is_nan() {
                f64::INFINITY
            } else {
                residual.abs().max(hi - lo)
            },
        });
    }
    Ok(lo)
}

/// `g_{φ,δ}(x)` by bisection for every kind, ignoring closed forms.
pub fn g_value_generic(phi: &PhiFn, delta: f64, x: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit(x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    g_bisect(phi, delta, x)
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("argument {x} outside [0, 1]"));
    }
    Ok(())
}

/// `g_{φ,δ}(x) = sup{t ∈ [x,1] : f(x,t) ≤ δ}` with `g(0) = 0`, `g(1) = 1`.
pub fn g_value(phi: &PhiFn, delta: f64, x: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit(x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    match phi {
        PhiFn::ChiSquared => Ok(chi_g(delta, x)),
        PhiFn::Band { k1, k2 } => Ok(band_g(*k1, *k2, x)),
        _ => g_bisect(phi, delta, x),
    }
}

fn chi_g(delta: f64, x: f64) -> f64 {
    if x >= 1.0 / (1.0 + delta) {
        1.0
    } else {
        (x + (delta * x * (1.0 - x)).sqrt()).min(1.0)
    }
}

fn band_g(k1: f64, k2: f64, x: f64) -> f64 {
    (k2 * x).min(k1 * x + 1.0 - k1).min(1.0)
}

/// Root of `xφ(1/x) + (1−x)φ(0) = δ` in `(0,1)`.
pub fn x_delta(phi: &PhiFn, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if !phi.is_superlinear() {
        return contract(format!(
            "threshold needs a strictly convex superlinear phi, got {phi:?}"
        ));
    }
    let h = |x: f64| phi.two_point(x, 1.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = h(hi) - delta;
    if !(residual.abs() <= ROOT_TOL || hi - lo <= f64::EPSILON) {
        return Err(LvarError::Numeric {
            message: "threshold bisection did not converge".into(),
            residual: residual.abs(),
        });
    }
    Ok(hi)
}

/// The worst-case distortion of a divergence ball.
#[derive(Debug, Clone)]
pub struct DistortionCurve {
    phi: PhiFn,
    delta: f64,
    x_delta: f64,
}

impl DistortionCurve {
    /// `x_delta` is 1 when no threshold applies (band and non-superlinear kinds).
    pub fn new(phi: PhiFn, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let x_delta = if phi.is_superlinear() {
            x_delta(&phi, delta)?
        } else {
            match phi {
                PhiFn::Band { k1: 0.0, k2 } => 1.0 / k2,
                _ => 1.0,
            }
        };
        Ok(DistortionCurve {
            phi,
            delta,
            x_delta,
        })
    }

    pub fn phi(&self) -> &PhiFn {
        &self.phi
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn x_delta(&self) -> f64 {
        self.x_delta
    }

    /// `g(x)` for `x ∈ [0,1]`; arguments are clamped into the unit interval.
    pub fn g(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 || x == 1.0 {
            return x;
        }
        match &self.phi {
            PhiFn::ChiSquared => chi_g(self.delta, x),
            PhiFn::Band { k1, k2 } => band_g(*k1, *k2, x),
            phi => {
                if phi.is_superlinear() && x >= self.x_delta {
                    1.0
                } else {
                    // bisection cannot fail on a built-in kind; custom kinds
                    // that produce NaN fall back to the trivial bound
                    g_bisect(phi, self.delta, x).unwrap_or(1.0)
                }
            }
        }
    }

    pub fn g_checked(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        if x == 0.0 || x == 1.0 {
            return Ok(x);
        }
        match &self.phi {
            PhiFn::ChiSquared | PhiFn::Band { .. } => Ok(self.g(x)),
            phi => {
                if phi.is_superlinear() && x >= self.x_delta {
                    Ok(1.0)
                } else {
                    g_bisect(phi, self.delta, x)
                }
            }
        }
    }
}

/// Smallest `x` with `g(x) = t`; in particular `g⁻¹(1) = x_δ`.
pub fn g_inverse(curve: &DistortionCurve, t: f64) -> Result<f64> {
    check_unit(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    match curve.phi {
        PhiFn::Band { k1, k2 } => {
            let x = if k1 == 0.0 {
                t / k2
            } else {
                (t / k2).max((t - 1.0 + k1) / k1)
            };
            Ok(x.clamp(0.0, 1.0))
        }
        ref phi if !phi.is_superlinear() => contract(format!(
            "inverse needs a strictly increasing distortion, got {phi:?}"
        )),
        _ => {
            if t == 1.0 {
                return Ok(curve.x_delta);
            }
            let (mut lo, mut hi) = (0.0f64, curve.x_delta);
            for _ in 0..MAX_BISECTIONS {
                let mid = lo + (hi - lo) / 2.0;
                if mid <= lo || mid >= hi {
                    break;
                }
                if curve.g_checked(mid)? >= t {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let residual = curve.g_checked(hi)? - t;
            if residual.abs() > ROOT_TOL {
                return Err(LvarError::Numeric {
                    message: format!("inverse distortion at t = {t} did not converge"),
                    residual: residual.abs(),
                });
            }
            Ok(hi)
        }
    }
}

/// `g⁻¹ ∘ Λ`, keeping breakpoints and direction.
pub fn transform_lambda(curve: &DistortionCurve, l: &LambdaFn) -> Result<LambdaFn> {
    let mut mapped = Vec::with_capacity(l.values().len());
    for &v in l.values() {
        mapped.push(g_inverse(curve, v)?);
    }
    LambdaFn::new(l.direction(), l.breakpoints().to_vec(), mapped)
}
