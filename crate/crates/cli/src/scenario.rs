use std::collections::BTreeMap;

use clap::ValueEnum;
use lvar_core::{
    Agent, AmbiguitySet, Capacity, DistortionCurve, FiniteSpace, GridSpec, LambdaFn, PhiFn,
    ProbabilityMeasure, RandomVariable, RobustAgent,
};
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Eval,
    Robust,
    Share,
    ComoShare,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Kl,
    ChiSquared,
    Alpha { alpha: f64 },
    Band { k1: f64, k2: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CapacitySpec {
    Measure {
        base: String,
    },
    Distortion {
        phi: PhiSpec,
        delta: f64,
        base: String,
    },
    SupOfMeasures {
        measures: Vec<String>,
    },
    ExpectationCap {
        #[serde(rename = "Y")]
        y: Vec<f64>,
        base: String,
    },
    LikelihoodBand {
        #[serde(rename = "Y1")]
        y1: Vec<f64>,
        #[serde(rename = "Y2")]
        y2: Vec<f64>,
        base: String,
    },
    /// Values on all `2^n` events, indexed by bitmask.
    Table {
        values: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmbiguitySpec {
    PhiBall {
        phi: PhiSpec,
        delta: f64,
        base: String,
    },
    LikelihoodBand {
        #[serde(rename = "Y1")]
        y1: Vec<f64>,
        #[serde(rename = "Y2")]
        y2: Vec<f64>,
        base: String,
    },
    ConstantBand {
        k1: f64,
        k2: f64,
        base: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub label: String,
    pub lambda: LambdaFn,
    pub capacity: Option<CapacitySpec>,
    pub ambiguity: Option<AmbiguitySpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub phi: PhiSpec,
    pub delta: f64,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    pub x_resolution: Option<f64>,
    pub y_resolution: Option<f64>,
    pub sample_count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub command: Command,
    #[serde(default)]
    pub outcomes: Vec<String>,
    #[serde(default)]
    pub measures: BTreeMap<String, Vec<f64>>,
    #[serde(rename = "X")]
    pub x: Option<Vec<f64>>,
    pub capacity: Option<CapacitySpec>,
    pub lambda: Option<LambdaFn>,
    pub ambiguity: Option<AmbiguitySpec>,
    #[serde(default)]
    pub agents: Vec<AgentSpec>,
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub grid: GridOverrides,
    pub format: Option<Format>,
}

pub enum SharingAgents {
    Plain(Vec<Agent>),
    Robust(Vec<RobustAgent>),
}

fn missing(field: &str, command: &str) -> CliError {
    CliError::Schema(format!("command {command} needs the field {field}"))
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let s: Scenario =
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    if s.version != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "unsupported schema version {}, expected {SCHEMA_VERSION}",
            s.version
        )));
    }
    Ok(s)
}

impl PhiSpec {
    pub fn build(&self) -> Result<PhiFn, CliError> {
        Ok(match *self {
            PhiSpec::Kl => PhiFn::Kl,
            PhiSpec::ChiSquared => PhiFn::ChiSquared,
            PhiSpec::Alpha { alpha } => PhiFn::alpha(alpha)?,
            PhiSpec::Band { k1, k2 } => PhiFn::band(k1, k2)?,
        })
    }
}

impl CurveSpec {
    pub fn build(&self) -> Result<DistortionCurve, CliError> {
        Ok(DistortionCurve::new(self.phi.build()?, self.delta)?)
    }
}

/// Scenario with its space and named measures resolved.
pub struct Resolved<'a> {
    pub scenario: &'a Scenario,
    pub space: FiniteSpace,
    measures: BTreeMap<&'a str, ProbabilityMeasure>,
}

impl<'a> Resolved<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self, CliError> {
        let space = FiniteSpace::new(scenario.outcomes.iter().cloned())?;
        let measures = scenario
            .measures
            .iter()
            .map(|(name, w)| Ok((name.as_str(), ProbabilityMeasure::new(&space, w.clone())?)))
            .collect::<Result<_, CliError>>()?;
        Ok(Resolved {
            scenario,
            space,
            measures,
        })
    }

    fn measure(&self, name: &str) -> Result<ProbabilityMeasure, CliError> {
        self.measures
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::Schema(format!("unknown measure {name:?}")))
    }

    fn variable(&self, values: &[f64]) -> Result<RandomVariable, CliError> {
        Ok(RandomVariable::new(&self.space, values.to_vec())?)
    }

    pub fn x(&self, command: &str) -> Result<RandomVariable, CliError> {
        let v = self.scenario.x.as_ref().ok_or_else(|| missing("X", command))?;
        self.variable(v)
    }

    pub fn lambda(&self, command: &str) -> Result<LambdaFn, CliError> {
        self.scenario
            .lambda
            .clone()
            .ok_or_else(|| missing("lambda", command))
    }

    pub fn capacity(&self, spec: &CapacitySpec) -> Result<Capacity, CliError> {
        Ok(match spec {
            CapacitySpec::Measure { base } => Capacity::measure(self.measure(base)?),
            CapacitySpec::Distortion { phi, delta, base } => Capacity::distortion(
                DistortionCurve::new(phi.build()?, *delta)?,
                self.measure(base)?,
            ),
            CapacitySpec::SupOfMeasures { measures } => Capacity::sup_of_measures(
                measures
                    .iter()
                    .map(|m| self.measure(m))
                    .collect::<Result<_, _>>()?,
            )?,
            CapacitySpec::ExpectationCap { y, base } => {
                Capacity::expectation_cap(self.variable(y)?, self.measure(base)?)?
            }
            CapacitySpec::LikelihoodBand { y1, y2, base } => Capacity::likelihood_band(
                self.variable(y1)?,
                self.variable(y2)?,
                self.measure(base)?,
            )?,
            CapacitySpec::Table { values } => Capacity::table(&self.space, values.clone())?,
        })
    }

    pub fn ambiguity(&self, spec: &AmbiguitySpec) -> Result<AmbiguitySet, CliError> {
        Ok(match spec {
            AmbiguitySpec::PhiBall { phi, delta, base } => {
                AmbiguitySet::phi_ball(phi.build()?, *delta, self.measure(base)?)?
            }
            AmbiguitySpec::LikelihoodBand { y1, y2, base } => AmbiguitySet::likelihood_band(
                self.variable(y1)?,
                self.variable(y2)?,
                self.measure(base)?,
            )?,
            AmbiguitySpec::ConstantBand { k1, k2, base } => {
                AmbiguitySet::constant_band(*k1, *k2, self.measure(base)?)?
            }
        })
    }

    /// Agents all carry a capacity or all carry an ambiguity set.
    pub fn agents(&self, command: &str) -> Result<SharingAgents, CliError> {
        let specs = &self.scenario.agents;
        if specs.is_empty() {
            return Err(missing("agents", command));
        }
        let robust = specs[0].ambiguity.is_some();
        let mut plain = Vec::new();
        let mut sets = Vec::new();
        for a in specs {
            match (&a.capacity, &a.ambiguity, robust) {
                (Some(c), None, false) => {
                    plain.push(Agent::new(a.label.clone(), a.lambda.clone(), self.capacity(c)?))
                }
                (None, Some(s), true) => sets.push(RobustAgent::new(
                    a.label.clone(),
                    a.lambda.clone(),
                    self.ambiguity(s)?,
                )),
                _ => {
                    return Err(CliError::Schema(format!(
                        "agent {:?} must give exactly one of capacity or ambiguity, \
                         the same kind as the other agents",
                        a.label
                    )))
                }
            }
        }
        Ok(if robust {
            SharingAgents::Robust(sets)
        } else {
            SharingAgents::Plain(plain)
        })
    }
}

/// Scenario grid, then flag overrides, then defaults.
pub fn grid(scenario: &GridOverrides, flags: &GridOverrides) -> Result<(GridSpec, bool), CliError> {
    let d = GridSpec::default();
    let seed = flags.seed.or(scenario.seed);
    let g = GridSpec::new(
        flags.x_resolution.or(scenario.x_resolution).unwrap_or(d.x_resolution),
        flags.y_resolution.or(scenario.y_resolution).unwrap_or(d.y_resolution),
        flags.sample_count.or(scenario.sample_count).unwrap_or(d.sample_count),
        seed.unwrap_or(d.seed),
    )?;
    Ok((g, seed.is_some()))
}
