use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
}

/// Monotone step function `ℝ → (0,1]`.
///
/// `values[0]` holds on the leftmost piece, `values[j]` between
/// `breakpoints[j-1]` and `breakpoints[j]`. Increasing and constant
/// functions are right-continuous, decreasing ones left-continuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LambdaSpec", into = "LambdaSpec")]
pub struct LambdaFn {
    direction: Direction,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    lambda_minus: f64,
    lambda_plus: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaSpec {
    direction: Direction,
    #[serde(default)]
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<LambdaSpec> for LambdaFn {
    type Error = crate::LvarError;
    fn try_from(s: LambdaSpec) -> Result<Self> {
        LambdaFn::new(s.direction, s.breakpoints, s.values)
    }
}

impl From<LambdaFn> for LambdaSpec {
    fn from(l: LambdaFn) -> Self {
        LambdaSpec {
            direction: l.direction,
            breakpoints: l.breakpoints,
            values: l.values,
        }
    }
}

impl LambdaFn {
    pub fn new(direction: Direction, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return domain(format!(
                "lambda needs one more value than breakpoints ({} values, {} breakpoints)",
                values.len(),
                breakpoints.len()
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return domain("lambda breakpoints must be finite");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return domain("lambda breakpoints must be strictly increasing");
        }
        if values.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
            return domain("lambda values must lie in (0, 1]");
        }
        let ordered = match direction {
            Direction::Increasing => values.windows(2).all(|w| w[0] <= w[1]),
            Direction::Decreasing => values.windows(2).all(|w| w[0] >= w[1]),
            Direction::Constant => values.windows(2).all(|w| w[0] == w[1]),
        };
        if !ordered {
            return domain(format!("lambda values are not {direction:?}"));
        }
        let lambda_minus = values.iter().copied().fold(f64::INFINITY, f64::min);
        let lambda_plus = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(LambdaFn {
            direction,
            breakpoints,
            values,
            lambda_minus,
            lambda_plus,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(Direction::Constant, vec![], vec![value])
    }

    pub fn increasing(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(Direction::Increasing, breakpoints, values)
    }

    pub fn decreasing(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(Direction::Decreasing, breakpoints, values)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    /// Increasing or constant.
    pub fn is_nondecreasing(&self) -> bool {
        matches!(self.direction, Direction::Increasing | Direction::Constant)
    }

    /// Whether every value is strictly below one.
    pub fn below_one(&self) -> bool {
        self.lambda_plus < 1.0
    }

    /// Index of the piece containing `x` under the continuity convention.
    pub fn piece_index(&self, x: f64) -> usize {
        match self.direction {
            // right-continuous: b_j belongs to the piece on its right
            Direction::Increasing | Direction::Constant => {
                self.breakpoints.partition_point(|&b| b <= x)
            }
            Direction::Decreasing => self.breakpoints.partition_point(|&b| b < x),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.values[self.piece_index(x)]
    }

    /// Same breakpoints and direction with every value mapped by `f`.
    ///
    /// Adjacent pieces that become equal are kept; the result is still a
    /// valid step function as long as `f` is increasing and maps into (0,1].
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<LambdaFn> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        LambdaFn::new(self.direction, self.breakpoints.clone(), values)
    }
}
