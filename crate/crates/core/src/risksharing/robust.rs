use super::{inf_convolution, Agent, Flag, SharingResult};
use crate::ambiguity::{worst_case_capacity, AmbiguitySet, ROUTE_TOL};
use crate::capacity::Capacity;
use crate::divergence::{transform_lambda, PhiFn};
use crate::error::{contract, Result};
use crate::ext::ExtReal;
use crate::lambda::LambdaFn;
use crate::space::RandomVariable;

#[derive(Debug, Clone)]
pub struct RobustAgent {
    pub label: String,
    pub lambda: LambdaFn,
    pub set: AmbiguitySet,
}

impl RobustAgent {
    pub fn new(label: impl Into<String>, lambda: LambdaFn, set: AmbiguitySet) -> Self {
        RobustAgent {
            label: label.into(),
            lambda,
            set,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RobustSharing {
    pub result: SharingResult,
    /// Value of the inf-convolution under the base measures with transformed
    /// Λ's, when every set has a distortion.
    pub transformed_value: Option<ExtReal>,
    pub routes_checked: bool,
}

/// Inf-convolution of worst-case ΛVaRs, each agent facing its own
/// ambiguity set.
pub fn robust_sharing(agents: &[RobustAgent], x: &RandomVariable) -> Result<RobustSharing> {
    let plain = agents
        .iter()
        .map(|a| {
            Ok(Agent::new(
                a.label.clone(),
                a.lambda.clone(),
                worst_case_capacity(&a.set)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let result = inf_convolution(&plain, x)?;

    let mut transformed = Vec::with_capacity(agents.len());
    for a in agents {
        match a.set.distortion_curve()? {
            Some(c) if c.phi().is_superlinear() || matches!(c.phi(), PhiFn::Band { .. }) => {
                transformed.push(Agent::new(
                    a.label.clone(),
                    transform_lambda(&c, &a.lambda)?,
                    Capacity::measure(a.set.base().clone()),
                ));
            }
            _ => {
                return Ok(RobustSharing {
                    result,
                    transformed_value: None,
                    routes_checked: false,
                })
            }
        }
    }
    let tv = inf_convolution(&transformed, x)?.value;
    let touches = result.flags.contains(&Flag::LambdaTouchesOne);
    if !touches && result.value.distance(tv) > ROUTE_TOL {
        return contract(format!(
            "capacity route gives {} but transformed route gives {tv}",
            result.value
        ));
    }
    Ok(RobustSharing {
        result,
        transformed_value: Some(tv),
        routes_checked: !touches,
    })
}
