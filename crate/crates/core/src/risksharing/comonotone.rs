use super::{check_agents, Agent, Flag, SharingResult};
use crate::error::{contract, Result};
use crate::ext::ExtReal;
use crate::lambdavar::lambda_var;
use crate::space::RandomVariable;

/// `minᵢ ΛᵢVaR^{wᵢ}(X)`, with the whole of `X` given to the lowest-index
/// minimizer.
///
/// The identity with the comonotone inf-convolution is guaranteed when all
/// individual values are nonnegative or all Λᵢ are constant on `(−∞, 0)`;
/// otherwise the value is still returned, flagged
/// [`Flag::SufficientConditionNotMet`].
pub fn comonotone_inf_convolution(agents: &[Agent], x: &RandomVariable) -> Result<SharingResult> {
    check_agents(agents, x)?;
    if let Some(a) = agents.iter().find(|a| !a.lambda.is_nondecreasing()) {
        return contract(format!("agent {} needs a nondecreasing lambda", a.label));
    }
    let values = agents
        .iter()
        .map(|a| lambda_var(&a.w, &a.lambda, x))
        .collect::<Result<Vec<_>>>()?;
    let mut i0 = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[i0] {
            i0 = i;
        }
    }
    let nonnegative = values.iter().all(|v| *v >= ExtReal::Finite(0.0));
    // right-continuous steps are constant on (−∞, 0) iff no breakpoint is negative
    let flat_below_zero = agents
        .iter()
        .all(|a| a.lambda.breakpoints().iter().all(|&b| b >= 0.0));
    let mut flags = vec![];
    if !nonnegative && !flat_below_zero {
        flags.push(Flag::SufficientConditionNotMet);
    }
    let zero = RandomVariable::constant(x.space(), 0.0)?;
    let allocations = (0..agents.len())
        .map(|i| if i == i0 { x.clone() } else { zero.clone() })
        .collect();
    Ok(SharingResult {
        value: values[i0],
        witness: None,
        allocations: Some(allocations),
        flags,
    })
}
