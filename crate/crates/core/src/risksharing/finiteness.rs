use serde::Serialize;

use super::{check_agents, Agent, PartitionDp, MAX_PARTITION_OUTCOMES};
use crate::capacity::is_subadditive;
use crate::error::{contract, domain, Result};
use crate::space::RandomVariable;

/// Margin around `κ = 1` inside which no classification is made.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinitenessClass {
    MinusInfinity,
    Finite,
    Boundary,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Finiteness {
    pub class: FinitenessClass,
    pub kappa: f64,
}

/// `κ = inf over partitions (A₁,…,Aₙ) of Ω of
/// minᵢ ( wᵢ(Aᵢ)/λᵢ⁻ ∨ max_{j≠i} wⱼ(Aⱼ)/λⱼ⁺ )`.
pub fn kappa(agents: &[Agent]) -> Result<f64> {
    let Some(first) = agents.first() else {
        return domain("risk sharing needs at least one agent");
    };
    let space = first.w.space();
    if space.size() > MAX_PARTITION_OUTCOMES {
        return domain(format!(
            "partition search supports at most {MAX_PARTITION_OUTCOMES} outcomes"
        ));
    }
    let full = space.full_mask();
    let tables: Vec<Vec<f64>> = agents
        .iter()
        .map(|a| (0..=full).map(|m| a.w.eval_mask(m)).collect())
        .collect();
    let mut kappa = f64::INFINITY;
    for i in 0..agents.len() {
        let scores: Vec<Vec<f64>> = agents
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let lam = if j == i {
                    a.lambda.lambda_minus()
                } else {
                    a.lambda.lambda_plus()
                };
                tables[j].iter().map(|v| v / lam).collect()
            })
            .collect();
        let dp = PartitionDp::min_max(&scores, full);
        kappa = kappa.min(dp.best[full as usize]);
    }
    Ok(kappa)
}

/// Classifies whether the inf-convolution is `−∞` from `κ`.
///
/// Requires nondecreasing Λ's with `0 < λᵢ⁻ ≤ λᵢ⁺ < 1` and subadditive
/// capacities; continuity of capacities holds trivially on finite spaces.
pub fn finiteness_check(agents: &[Agent], x: &RandomVariable) -> Result<Finiteness> {
    check_agents(agents, x)?;
    for a in agents {
        if !a.lambda.is_nondecreasing() || !a.lambda.below_one() {
            return contract(format!(
                "agent {} needs a nondecreasing lambda with values below one",
                a.label
            ));
        }
        if !is_subadditive(&a.w) {
            return contract(format!("capacity of agent {} is not subadditive", a.label));
        }
    }
    let kappa = kappa(agents)?;
    let class = if kappa < 1.0 - BOUNDARY_TOL {
        FinitenessClass::MinusInfinity
    } else if kappa > 1.0 + BOUNDARY_TOL {
        FinitenessClass::Finite
    } else {
        FinitenessClass::Boundary
    };
    Ok(Finiteness { class, kappa })
}
