use std::path::Path;

use parity_forge::algorithms::{
    build_graph_state, optimize_params, qaoa_landscape, qaoa_layer_breakdown, qft_expected_depth,
    qft_stages, reference_logical_qaoa, GraphSpec, ProblemHamiltonian, REFERENCE_MAX_QUBITS,
};
use parity_forge::circuit::{schedule_depth, Circuit, DepthReport, Wire};
use parity_forge::code::{lhz_layout, CodeJson, QubitLabel};
use parity_forge::codec::{
    compile_decode_measurement, compile_encode_measurement, CorrectionPlan, Deformation,
};
use parity_forge::sim::SimConfig;
use parity_forge::verify::{
    check_correction_oracle, check_cross_engine, check_deformation, check_graph_state,
    check_lhz_round_trip, check_qft, random_clifford_codec_circuit,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Command, Global};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] parity_forge::Error),
    #[error("cli: {0}: {1}")]
    Io(String, std::io::Error),
    #[error("cli: {0}")]
    Usage(String),
    #[error("cli: csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Lets `?` lift any module error into [`CliError`].
macro_rules! lib_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Lib(e.into())
            }
        }
    )*};
}
lib_error!(
    parity_forge::code::CodeError,
    parity_forge::circuit::CircuitError,
    parity_forge::codec::CodecError,
    parity_forge::sim::SimError,
    parity_forge::algorithms::AlgorithmError
);

/// A command's result: the JSON document, an optional CSV table and the
/// overall verdict.
pub struct Report {
    pub json: Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    pub pass: bool,
}

impl Report {
    fn json(json: Value, pass: bool) -> Self {
        Report {
            json,
            table: None,
            pass,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn need_n(g: &Global, default: Option<usize>) -> Result<usize, CliError> {
    g.n.or(default)
        .ok_or_else(|| CliError::Usage("--n is required".into()))
}

fn config() -> Result<SimConfig, CliError> {
    Ok(SimConfig::from_env()?)
}

fn circuit_json(c: &Circuit) -> Value {
    serde_json::to_value(c.to_json()).expect("gates serialize")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Parses `0-1` (or `(0,1)`) into a label.
fn parse_label(s: &str) -> Result<QubitLabel, CliError> {
    if s.trim_start().starts_with('(') {
        return Ok(s.parse()?);
    }
    let idx = s
        .split('-')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad qubit label {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QubitLabel::new(idx)?)
}

fn deformation_report(
    def: &Deformation,
    circuit: &Circuit,
    plan: &CorrectionPlan,
    verify: bool,
    g: &Global,
) -> Result<Report, CliError> {
    let mut out = json!({
        "direction": def.direction().to_string(),
        "before": to_value(&CodeJson::from_code(def.before())),
        "after": to_value(&CodeJson::from_code(def.after())),
        "circuit": circuit_json(circuit),
        "corrections": to_value(&plan.to_json()),
        "depth": to_value(&schedule_depth(circuit)),
    });
    let mut pass = true;
    if verify {
        let policy = g.policy.as_ref().map(|p| p.to_policy(g.seed));
        let check = check_deformation(def, g.seed, policy, g.tol, &config()?)?;
        pass = check.pass;
        out["verification"] = to_value(&check);
    }
    Ok(Report::json(out, pass))
}

pub fn run(cmd: &Command, g: &Global) -> Result<Report, CliError> {
    match cmd {
        Command::Layout { no_data } => {
            let code = lhz_layout(need_n(g, None)?, !no_data)?;
            Ok(Report::json(to_value(&CodeJson::from_code(&code)), true))
        }
        Command::Validate { code } => {
            let code = CodeJson::parse(&read(code)?)?;
            let report = code.validate();
            Ok(Report::json(to_value(&report), report.is_valid()))
        }
        Command::Encode { from, to, verify } => {
            let def = match (from, to) {
                (Some(a), Some(b)) => {
                    Deformation::encode(&CodeJson::parse(&read(a)?)?, &CodeJson::parse(&read(b)?)?)?
                }
                _ => Deformation::full_lhz_encode(need_n(g, None)?)?,
            };
            let (c, plan) = compile_encode_measurement(&def, "")?;
            deformation_report(&def, &c, &plan, *verify, g)
        }
        Command::Decode {
            code,
            remove,
            verify,
        } => {
            let def = match code {
                Some(path) => {
                    let code = CodeJson::parse(&read(path)?)?;
                    let removed: Vec<QubitLabel> = if remove.is_empty() {
                        code.parity_qubits().cloned().collect()
                    } else {
                        remove
                            .iter()
                            .map(|s| parse_label(s))
                            .collect::<Result<_, _>>()?
                    };
                    Deformation::decode(&code, &removed)?
                }
                None => Deformation::full_lhz_decode(need_n(g, None)?)?,
            };
            let (c, plan) = compile_decode_measurement(&def, "")?;
            deformation_report(&def, &c, &plan, *verify, g)
        }
        Command::Qaoa {
            problem,
            landscape,
            budget,
        } => qaoa(problem.as_deref(), *landscape, *budget, g),
        Command::Qft { verify, inputs } => qft(*verify, *inputs, g),
        Command::Graphstate { graph, verify } => {
            let graph = match graph {
                Some(path) => GraphSpec::parse_json(&read(path)?)?,
                None => GraphSpec::random(need_n(g, None)?, &mut ChaCha8Rng::seed_from_u64(g.seed)),
            };
            let c = build_graph_state(&graph)?;
            let mut out = json!({
                "graph": serde_json::from_str::<Value>(&graph.to_json_string()).expect("valid json"),
                "depth": to_value(&schedule_depth(&c)),
                "circuit": circuit_json(&c),
            });
            let mut pass = true;
            if *verify {
                let check = check_graph_state(&graph, g.seed, g.tol, &config()?)?;
                pass = check.pass;
                out["verification"] = to_value(&check);
            }
            Ok(Report::json(out, pass))
        }
        Command::Verify { samples } => verify(*samples, g),
        Command::Report { qaoa, qft } => report(*qaoa || !*qft, *qft || !*qaoa, g),
    }
}

fn qaoa(
    problem: Option<&Path>,
    landscape: Option<usize>,
    budget: usize,
    g: &Global,
) -> Result<Report, CliError> {
    let problem = match problem {
        Some(path) => ProblemHamiltonian::parse_json(&read(path)?)?,
        None => ProblemHamiltonian::random_two_body(
            need_n(g, Some(3))?,
            &mut ChaCha8Rng::seed_from_u64(g.seed),
        ),
    };
    let code = lhz_layout(problem.n, true)?;
    let cfg = config()?;
    let depth: Vec<Value> = qaoa_layer_breakdown(&problem, &code)?
        .into_iter()
        .map(|(row, d)| json!({"row": row, "depth": d.to_string()}))
        .collect();
    let problem_json: Value = serde_json::from_str(&problem.to_json_string()).expect("valid json");
    if let Some(size) = landscape {
        if g.p != 1 {
            return Err(CliError::Usage("--landscape needs --p 1".into()));
        }
        if size == 0 {
            return Err(CliError::Usage("--landscape must be positive".into()));
        }
        let points = qaoa_landscape(&problem, &code, size, &cfg)?;
        let max_delta = points.iter().map(|p| p.delta).fold(0.0, f64::max);
        let pass = max_delta <= g.tol;
        let header = ["beta", "gamma", "E_parity", "E_logical", "abs_delta"]
            .map(String::from)
            .to_vec();
        let rows = points
            .iter()
            .map(|p| {
                [p.beta, p.gamma, p.parity, p.logical, p.delta]
                    .iter()
                    .map(|x| format!("{x:.12e}"))
                    .collect()
            })
            .collect();
        let json = json!({
            "problem": problem_json,
            "layer_depth": depth,
            "max_abs_delta": max_delta,
            "pass": pass,
            "landscape": to_value(&points),
        });
        return Ok(Report {
            json,
            table: Some((header, rows)),
            pass,
        });
    }
    let result = optimize_params(&problem, &code, g.p, budget, &cfg)?;
    let mut json = json!({
        "problem": problem_json,
        "layer_depth": depth,
        "result": to_value(&result),
    });
    let mut pass = true;
    if problem.n <= REFERENCE_MAX_QUBITS {
        let reference = reference_logical_qaoa(&problem, &result.params)?;
        pass = (reference - result.energy).abs() <= g.tol;
        json["reference_energy"] = json!(reference);
        json["pass"] = json!(pass);
    }
    let header = ["evaluation", "best_energy"].map(String::from).to_vec();
    let rows = result
        .trace
        .iter()
        .enumerate()
        .map(|(k, e)| vec![k.to_string(), format!("{e:.12e}")])
        .collect();
    Ok(Report {
        json,
        table: Some((header, rows)),
        pass,
    })
}

fn qft(verify: bool, inputs: usize, g: &Global) -> Result<Report, CliError> {
    let n = need_n(g, None)?;
    let mut c = Circuit::with_wires((0..n).map(Wire::data));
    for s in qft_stages(n)? {
        c.extend(&s.circuit)?;
    }
    let depth = schedule_depth(&c);
    let (cnot, measure) = qft_expected_depth(n);
    let mut pass = depth.cnot == cnot && depth.measure == measure;
    let mut out = json!({
        "n": n,
        "depth": to_value(&depth),
        "expected": {"cnot": cnot, "measure": measure},
        "circuit": circuit_json(&c),
    });
    if verify {
        let policy = g.policy.as_ref().map(|p| p.to_policy(g.seed));
        let check = check_qft(n, inputs, g.seed, policy, g.tol, &config()?)?;
        pass &= check.pass;
        out["verification"] = to_value(&check);
    }
    out["pass"] = json!(pass);
    Ok(Report::json(out, pass))
}

fn verify(samples: usize, g: &Global) -> Result<Report, CliError> {
    let n = need_n(g, Some(3))?;
    let cfg = config()?;
    let round_trip = check_lhz_round_trip(n, g.seed, g.tol, &cfg)?;
    let oracle = check_correction_oracle(n, samples, g.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut cross = Vec::new();
    if n <= 4 {
        for k in 0..20 {
            let c = random_clifford_codec_circuit(n, &mut rng)?;
            cross.push(check_cross_engine(&c, g.seed + k, &cfg)?);
        }
    }
    let pass = round_trip.pass && oracle.pass && cross.iter().all(|c| c.pass);
    Ok(Report::json(
        json!({
            "n": n,
            "round_trip": to_value(&round_trip),
            "correction_oracle": to_value(&oracle),
            "cross_engine": to_value(&cross),
            "pass": pass,
        }),
        pass,
    ))
}

/// Per-constituent depth of one QAOA layer that the compiler should reach.
const QAOA_LAYER_TARGET: [(&str, DepthReport); 5] = [
    (
        "encoding",
        DepthReport {
            measure: 1,
            cnot: 4,
            single: 1,
        },
    ),
    (
        "U_P",
        DepthReport {
            measure: 0,
            cnot: 0,
            single: 1,
        },
    ),
    (
        "decoding",
        DepthReport {
            measure: 1,
            cnot: 0,
            single: 1,
        },
    ),
    (
        "U_X",
        DepthReport {
            measure: 0,
            cnot: 0,
            single: 1,
        },
    ),
    (
        "total",
        DepthReport {
            measure: 2,
            cnot: 4,
            single: 4,
        },
    ),
];

fn report(with_qaoa: bool, with_qft: bool, g: &Global) -> Result<Report, CliError> {
    let header = [
        "section", "n", "row", "measure", "cnot", "single", "depth", "expected", "pass",
    ]
    .map(String::from)
    .to_vec();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut json = json!({});
    let mut pass = true;
    if with_qaoa {
        let n = need_n(g, Some(4))?;
        let problem =
            ProblemHamiltonian::random_two_body(n, &mut ChaCha8Rng::seed_from_u64(g.seed));
        let parts = qaoa_layer_breakdown(&problem, &lhz_layout(n, true)?)?;
        let mut entries = Vec::new();
        for ((row, d), (_, want)) in parts.iter().zip(QAOA_LAYER_TARGET) {
            let ok = *d == want;
            pass &= ok;
            rows.push(vec![
                "qaoa".into(),
                n.to_string(),
                row.to_string(),
                d.measure.to_string(),
                d.cnot.to_string(),
                d.single.to_string(),
                d.to_string(),
                want.to_string(),
                ok.to_string(),
            ]);
            entries.push(json!({"row": row, "depth": d.to_string(), "expected": want.to_string(), "pass": ok}));
        }
        json["qaoa"] = json!({"n": n, "rows": entries});
    }
    if with_qft {
        let top = need_n(g, Some(8))?;
        let mut entries = Vec::new();
        for n in 2..=top.max(2) {
            let mut c = Circuit::with_wires((0..n).map(Wire::data));
            for s in qft_stages(n)? {
                c.extend(&s.circuit)?;
            }
            let d = schedule_depth(&c);
            let (cnot, measure) = qft_expected_depth(n);
            let ok = d.cnot == cnot && d.measure == measure;
            pass &= ok;
            let want = format!("{measure}/{cnot}/-");
            rows.push(vec![
                "qft".into(),
                n.to_string(),
                "strip".into(),
                d.measure.to_string(),
                d.cnot.to_string(),
                d.single.to_string(),
                d.to_string(),
                want.clone(),
                ok.to_string(),
            ]);
            entries.push(json!({"n": n, "depth": d.to_string(), "expected": want, "pass": ok}));
        }
        json["qft"] = json!(entries);
    }
    json["pass"] = json!(pass);
    Ok(Report {
        json,
        table: Some((header, rows)),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse_in_both_forms() {
        assert_eq!(parse_label("0-2").unwrap(), QubitLabel::pair(0, 2));
        assert_eq!(parse_label("(1,3)").unwrap(), QubitLabel::pair(1, 3));
        assert!(parse_label("a-b").is_err());
    }

    #[test]
    fn layer_target_rows_are_ordered_like_the_breakdown() {
        let p = ProblemHamiltonian::random_two_body(4, &mut ChaCha8Rng::seed_from_u64(0));
        let parts = qaoa_layer_breakdown(&p, &lhz_layout(4, true).unwrap()).unwrap();
        let names: Vec<&str> = parts.iter().map(|p| p.0).collect();
        assert_eq!(names, QAOA_LAYER_TARGET.map(|t| t.0));
    }
}
