use lvar_core::risksharing::CertificateLine;
use lvar_core::{
    brute_comonotone, brute_inf_convolution, brute_lambda_var, brute_sup_over_ball,
    comonotone_inf_convolution, inf_convolution, lambda_var, lambda_var_plus, robust_lambda_var,
    robust_sharing, worst_case_capacity, Agent, ExtReal, Flag, GridSpec, RandomVariable,
    RobustReport, SharingResult,
};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::scenario::{Command, Format, Resolved, Scenario, SharingAgents};

/// Oracle slack when checking the direction of a bound.
const BOUND_TOL: f64 = 1e-9;

pub struct Options {
    pub oracle: bool,
    pub grid: GridSpec,
    pub explicit_seed: bool,
    pub format: Format,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Bound {
    /// The oracle value should not fall below the main value.
    Upper,
    Lower,
}

#[derive(Debug, Serialize)]
struct OracleReport {
    oracle: &'static str,
    main: ExtReal,
    oracle_value: Option<ExtReal>,
    delta: Option<f64>,
    bound: Bound,
    holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl OracleReport {
    fn new(oracle: &'static str, main: ExtReal, value: ExtReal, bound: Bound) -> Self {
        let delta = match (main, value) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some(b - a),
            _ => None,
        };
        let holds = match bound {
            Bound::Upper => above(value, main),
            Bound::Lower => above(main, value),
        };
        OracleReport {
            oracle,
            main,
            oracle_value: Some(value),
            delta,
            bound,
            holds: Some(holds),
            note: None,
        }
    }

    fn skipped(oracle: &'static str, main: ExtReal, bound: Bound, note: String) -> Self {
        OracleReport {
            oracle,
            main,
            oracle_value: None,
            delta: None,
            bound,
            holds: None,
            note: Some(note),
        }
    }
}

fn above(a: ExtReal, b: ExtReal) -> bool {
    match (a, b) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => a >= b - BOUND_TOL,
        _ => a >= b,
    }
}

pub fn run(s: &Scenario, opts: &Options) -> Result<String, CliError> {
    let name = command_name(s.command);
    if opts.format == Format::Csv && !matches!(s.command, Command::Curve | Command::Share) {
        return Err(CliError::Schema(format!("command {name} has no csv output")));
    }
    if s.command == Command::Curve {
        return curve(s, opts);
    }
    let r = Resolved::new(s)?;
    match s.command {
        Command::Eval => eval(&r, opts),
        Command::Robust => robust(&r, opts),
        Command::Share => share(&r, opts),
        Command::ComoShare => como_share(&r, opts),
        Command::Curve => unreachable!("handled above"),
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Eval => "eval",
        Command::Robust => "robust",
        Command::Share => "share",
        Command::ComoShare => "como_share",
        Command::Curve => "curve",
    }
}

fn to_json(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn eval(r: &Resolved, opts: &Options) -> Result<String, CliError> {
    let spec = r
        .scenario
        .capacity
        .as_ref()
        .ok_or_else(|| CliError::Schema("command eval needs the field capacity".into()))?;
    let w = r.capacity(spec)?;
    let l = r.lambda("eval")?;
    let x = r.x("eval")?;
    let value = lambda_var(&w, &l, &x)?;
    let plus = lambda_var_plus(&w, &l, &x)?;
    let mut doc = json!({
        "command": "eval",
        "lambda_var": value,
        "lambda_var_plus": plus,
    });
    if opts.oracle {
        let b = brute_lambda_var(&w, &l, &x, &opts.grid);
        doc["oracle"] = json!(OracleReport::new("brute_lambda_var", value, b, Bound::Upper));
    }
    Ok(to_json(doc))
}

fn robust(r: &Resolved, opts: &Options) -> Result<String, CliError> {
    let spec = r
        .scenario
        .ambiguity
        .as_ref()
        .ok_or_else(|| CliError::Schema("command robust needs the field ambiguity".into()))?;
    let set = r.ambiguity(spec)?;
    let l = r.lambda("robust")?;
    let x = r.x("robust")?;
    let report: RobustReport = robust_lambda_var(&set, &l, &x)?;
    let mut doc = json!({ "command": "robust", "report": report });
    if opts.oracle {
        if !opts.explicit_seed {
            return Err(CliError::Schema(
                "the sampling oracle needs an explicit seed in the grid or via --seed".into(),
            ));
        }
        let b = brute_sup_over_ball(&set, &l, &x, &opts.grid)?;
        doc["oracle"] = json!(OracleReport::new(
            "brute_sup_over_ball",
            report.value,
            b,
            Bound::Lower
        ));
    }
    Ok(to_json(doc))
}

fn labels(r: &Resolved, e: &lvar_core::Event) -> Vec<String> {
    e.members()
        .into_iter()
        .map(|i| r.space.labels()[i].clone())
        .collect()
}

fn sharing_doc(
    r: &Resolved,
    command: &str,
    names: &[String],
    res: &SharingResult,
) -> serde_json::Value {
    let (x_star, y_star, partition, certificate): (_, _, _, Vec<CertificateLine>) =
        match &res.witness {
            Some(w) => (
                Some(w.x_star),
                Some(w.y_star.clone()),
                Some(w.partition.iter().map(|e| labels(r, e)).collect::<Vec<_>>()),
                w.certificate.clone(),
            ),
            None => (None, None, None, Vec::new()),
        };
    let allocations = res.allocations.as_ref().map(|a| {
        names
            .iter()
            .zip(a)
            .map(|(n, xi)| (n.clone(), json!(xi.values())))
            .collect::<serde_json::Map<_, _>>()
    });
    json!({
        "command": command,
        "value": res.value,
        "x_star": x_star,
        "y_star": y_star,
        "partition": partition,
        "allocations": allocations,
        "certificate": certificate,
        "flags": res.flags,
    })
}

/// One row per outcome, one column per agent.
fn allocation_csv(r: &Resolved, names: &[String], allocs: Option<&Vec<RandomVariable>>) -> String {
    let mut out = String::from("outcome");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    if let Some(allocs) = allocs {
        for (i, label) in r.space.labels().iter().enumerate() {
            out.push_str(label);
            for a in allocs {
                out.push_str(&format!(",{}", a.value(i)));
            }
            out.push('\n');
        }
    }
    out
}

fn sharing_oracle(
    agents: &[Agent],
    x: &RandomVariable,
    main: ExtReal,
    grid: &GridSpec,
) -> OracleReport {
    match brute_inf_convolution(agents, x, grid) {
        Ok(b) => OracleReport::new("brute_inf_convolution", main, b, Bound::Upper),
        Err(e) => OracleReport::skipped("brute_inf_convolution", main, Bound::Upper, e.to_string()),
    }
}

fn share(r: &Resolved, opts: &Options) -> Result<String, CliError> {
    let x = r.x("share")?;
    let (names, res, plain, transformed) = match r.agents("share")? {
        SharingAgents::Plain(agents) => {
            let res = inf_convolution(&agents, &x)?;
            let names = agents.iter().map(|a| a.label.clone()).collect::<Vec<_>>();
            (names, res, agents, None)
        }
        SharingAgents::Robust(agents) => {
            let rs = robust_sharing(&agents, &x)?;
            let plain = agents
                .iter()
                .map(|a| {
                    Ok(Agent::new(
                        a.label.clone(),
                        a.lambda.clone(),
                        worst_case_capacity(&a.set)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let names = agents.iter().map(|a| a.label.clone()).collect();
            let routes = json!({
                "transformed_value": rs.transformed_value,
                "routes_checked": rs.routes_checked,
            });
            (names, rs.result, plain, Some(routes))
        }
    };
    if opts.format == Format::Csv {
        return Ok(allocation_csv(r, &names, res.allocations.as_ref()));
    }
    let mut doc = sharing_doc(r, "share", &names, &res);
    if let Some(t) = transformed {
        doc["routes"] = t;
    }
    if opts.oracle {
        doc["oracle"] = json!(sharing_oracle(&plain, &x, res.value, &opts.grid));
    }
    Ok(to_json(doc))
}

fn como_share(r: &Resolved, opts: &Options) -> Result<String, CliError> {
    let x = r.x("como_share")?;
    let SharingAgents::Plain(agents) = r.agents("como_share")? else {
        return Err(CliError::Schema(
            "command como_share needs agents with capacities".into(),
        ));
    };
    let res = comonotone_inf_convolution(&agents, &x)?;
    let names: Vec<String> = agents.iter().map(|a| a.label.clone()).collect();
    let mut doc = sharing_doc(r, "como_share", &names, &res);
    if opts.oracle {
        let mut rep = match brute_comonotone(&agents, &x, &opts.grid) {
            Ok(b) => OracleReport::new("brute_comonotone", res.value, b, Bound::Upper),
            Err(e) => OracleReport::skipped("brute_comonotone", res.value, Bound::Upper, e.to_string()),
        };
        if res.flags.contains(&Flag::SufficientConditionNotMet) {
            rep.note = Some("sufficient conditions fail; the bound need not hold".into());
        }
        doc["oracle"] = json!(rep);
    }
    Ok(to_json(doc))
}

fn curve(s: &Scenario, opts: &Options) -> Result<String, CliError> {
    let spec = s
        .curve
        .as_ref()
        .ok_or_else(|| CliError::Schema("command curve needs the field curve".into()))?;
    let c = spec.build()?;
    let res = opts.grid.x_resolution;
    let inv = 1.0 / res;
    let steps = inv.ceil() as i64;
    // decimal resolutions land on decimal literals
    let point = |k: i64| {
        if (inv - inv.round()).abs() < 1e-9 {
            k as f64 / inv.round()
        } else {
            (k as f64 * res).min(1.0)
        }
    };
    let rows: Vec<(f64, f64)> = (0..=steps)
        .map(|k| {
            let x = point(k);
            Ok((x, c.g_checked(x)?))
        })
        .collect::<Result<_, CliError>>()?;
    match opts.format {
        Format::Csv => {
            let mut out = String::from("x,g\n");
            for (x, g) in rows {
                out.push_str(&format!("{x},{g}\n"));
            }
            Ok(out)
        }
        Format::Json => Ok(to_json(json!({
            "command": "curve",
            "x_delta": c.x_delta(),
            "points": rows,
        }))),
    }
}
