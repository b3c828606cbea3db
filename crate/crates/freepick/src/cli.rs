//! Command-line surface.
//!
//! One subcommand per workflow; every command reads and writes the JSON
//! formats of [`crate::problem`]. Exit codes: `0` success/solved, `1` input
//! or usage error, `2` target outside the algebra of the node, `3`
//! undecided or failed checks (for `solve`, this comes with a counterexample
//! search over the variety).
//!
//! Flags may also be set through environment variables prefixed with
//! `FREEPICK_` (`--max-iter` becomes `FREEPICK_MAX_ITER`); explicit flags
//! win over the environment.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::freepoly::MatrixTuple;
use crate::nevanlinna::{ParametrizationFile, Theta};
use crate::numerics::{op_norm, CMat};
use crate::oracle::{pick_matrix, schur_solve, ScalarPickData, SchurOutcome};
use crate::pipeline::{self, Outcome, SolveOptions};
use crate::problem::{
    matrix_from_json, matrix_to_json, OracleDataFile, PickProblem, PointFile, Report,
};
use crate::realization::RealizationFile;
use crate::sampler::{sample_domain, sample_variety, SampleConfig};
use crate::tol::Tolerances;
use serde::Serialize;

const USAGE: &str = "\
usage: freepick <command> [args] [flags]

commands:
  solve <problem.json>                 decide and solve a one-point problem
  extend <problem.json>                fold variety data and extend off it
  norm <problem.json>                  minimal interpolation norm by bisection
  eval <realization.json>              evaluate a stored realization (--point)
  verify <realization.json> <problem.json>
                                       run the invariant suite
  parametrize <problem.json>           solve and store the solution family
  lft <parametrization.json>           evaluate one family member (--point, --theta)
  sample <problem.json>                draw domain or variety samples (--what)
  oracle-pick <data.json>              classical scalar disk interpolation

flags: --tol --max-iter --seed --samples --max-size --margin
       --out --report --cert --point --theta --what --sup
environment: FREEPICK_TOL, FREEPICK_MAX_ITER, FREEPICK_SEED, ...
";

struct Flags {
    values: BTreeMap<String, String>,
    positional: Vec<String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, String> {
        let mut values = BTreeMap::new();
        let mut positional = Vec::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                let value = it
                    .next()
                    .ok_or_else(|| format!("flag --{name} expects a value"))?;
                values.insert(name.to_string(), value.clone());
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Flags { values, positional })
    }

    fn lookup(&self, name: &str) -> Option<String> {
        if let Some(v) = self.values.get(name) {
            return Some(v.clone());
        }
        let env_name = format!("FREEPICK_{}", name.replace('-', "_").to_uppercase());
        std::env::var(env_name).ok()
    }

    fn get_f64(&self, name: &str, default: f64) -> Result<f64, String> {
        match self.lookup(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("--{name}: not a number: {v}")),
        }
    }

    fn get_usize(&self, name: &str, default: usize) -> Result<usize, String> {
        match self.lookup(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("--{name}: not an integer: {v}")),
        }
    }

    fn get_u64(&self, name: &str, default: u64) -> Result<u64, String> {
        match self.lookup(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("--{name}: not an integer: {v}")),
        }
    }

    fn options(&self) -> Result<SolveOptions, String> {
        let mut tol = Tolerances::default();
        tol.sdp_tol = self.get_f64("tol", tol.sdp_tol)?;
        tol.sdp_max_iter = self.get_usize("max-iter", tol.sdp_max_iter)?;
        Ok(SolveOptions {
            tol,
            seed: self.get_u64("seed", 1)?,
            samples: self.get_usize("samples", 50)?,
            max_size: self.get_usize("max-size", 4)?,
            margin: self.get_f64("margin", 0.0)?,
        })
    }
}

fn read_to_string(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn write_file(path: &str, content: &str) -> Result<(), String> {
    fs::write(path, content).map_err(|e| format!("{path}: {e}"))
}

fn derived_path(input: &str, suffix: &str) -> String {
    let p = Path::new(input);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    match p.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            format!("{}/{stem}.{suffix}.json", dir.display())
        }
        _ => format!("{stem}.{suffix}.json"),
    }
}

fn emit_report(report: &Report, flags: &Flags) -> Result<(), String> {
    let text = report.to_json();
    match flags.lookup("report") {
        Some(path) => write_file(&path, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_problem(path: &str) -> Result<PickProblem, String> {
    let text = read_to_string(path)?;
    PickProblem::parse_str(&text).map_err(|e| format!("{path}: {e}"))
}

fn load_point(flags: &Flags) -> Result<MatrixTuple, String> {
    let path = flags
        .lookup("point")
        .ok_or_else(|| "--point <file> is required".to_string())?;
    let text = read_to_string(&path)?;
    let point: PointFile = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    point.to_tuple().map_err(|e| format!("{path}: {e}"))
}

#[derive(Serialize)]
struct ValueOut {
    size: usize,
    value: Vec<[f64; 2]>,
    norm: f64,
}

fn print_value(v: &CMat, flags: &Flags) -> Result<(), String> {
    let out = ValueOut {
        size: v.nrows(),
        value: matrix_to_json(v),
        norm: op_norm(v).map_err(|e| e.to_string())?,
    };
    let text = serde_json::to_string_pretty(&out).expect("value serialization");
    match flags.lookup("out") {
        Some(path) => write_file(&path, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "solve: missing problem file".to_string())?;
    let problem = load_problem(input)?;
    let opts = flags.options()?;
    let (outcome, report) = pipeline::solve(&problem, &opts).map_err(|e| e.to_string())?;
    if let Outcome::Solved(bundle) = &outcome {
        let out = flags
            .lookup("out")
            .unwrap_or_else(|| derived_path(input, "realization"));
        let file = RealizationFile::from_realization(&bundle.realization, bundle.basis.size());
        write_file(
            &out,
            &serde_json::to_string_pretty(&file).expect("realization"),
        )?;
        if let Some(cert_path) = flags.lookup("cert") {
            let cert = crate::certificate::CertificateFile::from_certificate(&bundle.certificate);
            write_file(
                &cert_path,
                &serde_json::to_string_pretty(&cert).expect("certificate"),
            )?;
        }
    }
    emit_report(&report, flags)?;
    Ok(report.exit_code)
}

fn cmd_extend(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "extend: missing problem file".to_string())?;
    let problem = load_problem(input)?;
    let opts = flags.options()?;
    let sup = match flags.lookup("sup") {
        Some(v) => Some(v.parse().map_err(|_| format!("--sup: not a number: {v}"))?),
        None => None,
    };
    let (outcome, _scale, report) =
        pipeline::extend(&problem, &opts, sup).map_err(|e| e.to_string())?;
    if let Outcome::Solved(bundle) = &outcome {
        let out = flags
            .lookup("out")
            .unwrap_or_else(|| derived_path(input, "realization"));
        let file = RealizationFile::from_realization(&bundle.realization, bundle.basis.size());
        write_file(
            &out,
            &serde_json::to_string_pretty(&file).expect("realization"),
        )?;
    }
    emit_report(&report, flags)?;
    Ok(report.exit_code)
}

fn cmd_norm(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "norm: missing problem file".to_string())?;
    let problem = load_problem(input)?;
    let opts = flags.options()?;
    let (_norm, report) = pipeline::minimal_norm(&problem, &opts).map_err(|e| e.to_string())?;
    emit_report(&report, flags)?;
    Ok(report.exit_code)
}

fn load_realization(path: &str) -> Result<crate::realization::Realization, String> {
    let text = read_to_string(path)?;
    let file: RealizationFile = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    file.into_realization().map_err(|e| format!("{path}: {e}"))
}

fn cmd_eval(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "eval: missing realization file".to_string())?;
    let realization = load_realization(input)?;
    let point = load_point(flags)?;
    let value = realization.eval(&point).map_err(|e| e.to_string())?;
    print_value(&value, flags)?;
    Ok(0)
}

fn cmd_verify(flags: &Flags) -> Result<i32, String> {
    let real_path = flags
        .positional
        .get(1)
        .ok_or_else(|| "verify: missing realization file".to_string())?;
    let problem_path = flags.positional.get(2);
    let realization = load_realization(real_path)?;
    let problem = match problem_path {
        Some(p) => Some(load_problem(p)?),
        None => None,
    };
    let opts = flags.options()?;
    let report = pipeline::verify_realization(&realization, problem.as_ref(), &opts)
        .map_err(|e| e.to_string())?;
    let text = serde_json::to_string_pretty(&report).expect("verify report");
    match flags.lookup("report") {
        Some(path) => write_file(&path, &text)?,
        None => println!("{text}"),
    }
    Ok(report.exit_code)
}

fn cmd_parametrize(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "parametrize: missing problem file".to_string())?;
    let problem = load_problem(input)?;
    let opts = flags.options()?;
    let (outcome, report) = pipeline::solve(&problem, &opts).map_err(|e| e.to_string())?;
    if let Outcome::Solved(bundle) = &outcome {
        let data = pipeline::parametrize(&problem, bundle, &opts).map_err(|e| e.to_string())?;
        let out = flags
            .lookup("out")
            .unwrap_or_else(|| derived_path(input, "parametrization"));
        let file = ParametrizationFile::from_data(&data);
        write_file(
            &out,
            &serde_json::to_string_pretty(&file).expect("parametrization"),
        )?;
    }
    emit_report(&report, flags)?;
    Ok(report.exit_code)
}

#[derive(serde::Deserialize)]
struct ThetaFileConstant {
    constant: Vec<[f64; 2]>,
}

fn load_theta(flags: &Flags) -> Result<Theta, String> {
    let Some(path) = flags.lookup("theta") else {
        return Ok(Theta::Zero);
    };
    let text = read_to_string(&path)?;
    if let Ok(c) = serde_json::from_str::<ThetaFileConstant>(&text) {
        let m = matrix_from_json(&c.constant).map_err(|e| format!("{path}: {e}"))?;
        return Ok(Theta::Constant(m));
    }
    let file: RealizationFile = serde_json::from_str(&text)
        .map_err(|e| format!("{path}: not a constant or realization: {e}"))?;
    Ok(Theta::Scalar(
        file.into_realization()
            .map_err(|e| format!("{path}: {e}"))?,
    ))
}

fn cmd_lft(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "lft: missing parametrization file".to_string())?;
    let text = read_to_string(input)?;
    let file: ParametrizationFile =
        serde_json::from_str(&text).map_err(|e| format!("{input}: {e}"))?;
    let data = file.into_data().map_err(|e| format!("{input}: {e}"))?;
    let theta = load_theta(flags)?;
    let point = load_point(flags)?;
    let value = data.lft(&theta, &point).map_err(|e| e.to_string())?;
    print_value(&value, flags)?;
    Ok(0)
}

#[derive(Serialize)]
struct SampleOut {
    size: usize,
    delta_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    interpolant_norm: Option<f64>,
    #[serde(rename = "X")]
    x: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct SampleDump {
    kind: String,
    seed: u64,
    count: usize,
    samples: Vec<SampleOut>,
}

fn cmd_sample(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "sample: missing problem file".to_string())?;
    let problem = load_problem(input)?;
    let opts = flags.options()?;
    let kind = flags.lookup("what").unwrap_or_else(|| "gdelta".to_string());
    let cfg = SampleConfig {
        seed: opts.seed,
        max_size: opts.max_size,
        count: opts.samples,
        ..SampleConfig::default()
    };
    let tol = &opts.tol;
    let (samples, interpolant) = match kind.as_str() {
        "gdelta" => (
            sample_domain(&problem.delta, &cfg).map_err(|e| e.to_string())?,
            None,
        ),
        "variety" => {
            let basis = crate::algebra::AlgebraBasis::compute(&problem.node, tol)
                .map_err(|e| e.to_string())?;
            let samples =
                sample_variety(&basis, &problem.delta, &cfg).map_err(|e| e.to_string())?;
            let p0 = basis
                .membership(&problem.target, tol.membership)
                .map_err(|e| e.to_string())?
                .map(|m| m.poly);
            (samples, p0)
        }
        other => return Err(format!("--what must be gdelta or variety, got {other}")),
    };
    let mut out = Vec::with_capacity(samples.len());
    for x in &samples {
        let dnorm = op_norm(&problem.delta.eval(x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let pnorm = match &interpolant {
            Some(p) => Some(
                op_norm(&crate::freepoly::eval(p, x).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?,
            ),
            None => None,
        };
        out.push(SampleOut {
            size: x.size(),
            delta_norm: dnorm,
            interpolant_norm: pnorm,
            x: x.mats().iter().map(matrix_to_json).collect(),
        });
    }
    let dump = SampleDump {
        kind,
        seed: opts.seed,
        count: out.len(),
        samples: out,
    };
    let text = serde_json::to_string_pretty(&dump).expect("sample dump");
    match flags.lookup("out") {
        Some(path) => write_file(&path, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct OracleOut {
    solvable: bool,
    pick_min_eig: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    schur_parameters: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interpolation_residual: Option<f64>,
}

fn cmd_oracle_pick(flags: &Flags) -> Result<i32, String> {
    let input = flags
        .positional
        .get(1)
        .ok_or_else(|| "oracle-pick: missing data file".to_string())?;
    let text = read_to_string(input)?;
    let data: OracleDataFile = serde_json::from_str(&text).map_err(|e| format!("{input}: {e}"))?;
    let nodes = data
        .z
        .iter()
        .map(|&[a, b]| crate::numerics::cx(a, b))
        .collect();
    let targets = data
        .w
        .iter()
        .map(|&[a, b]| crate::numerics::cx(a, b))
        .collect();
    let data = ScalarPickData::new(nodes, targets).map_err(|e| e.to_string())?;
    let tol = Tolerances::default();
    let p = pick_matrix(&data);
    let min_eig = crate::numerics::min_eig_herm(&p, &tol).map_err(|e| e.to_string())?;
    let outcome = schur_solve(&data).map_err(|e| e.to_string())?;
    let out = match &outcome {
        SchurOutcome::Solvable(f) => {
            let residual = data
                .nodes
                .iter()
                .zip(&data.targets)
                .map(|(z, w)| (f.eval(*z) - w).norm())
                .fold(0.0, f64::max);
            OracleOut {
                solvable: true,
                pick_min_eig: min_eig,
                schur_parameters: Some(f.stages().iter().map(|&(_, g)| [g.re, g.im]).collect()),
                interpolation_residual: Some(residual),
            }
        }
        SchurOutcome::Unsolvable => OracleOut {
            solvable: false,
            pick_min_eig: min_eig,
            schur_parameters: None,
            interpolation_residual: None,
        },
    };
    let text = serde_json::to_string_pretty(&out).expect("oracle output");
    match flags.lookup("out") {
        Some(path) => write_file(&path, &text)?,
        None => println!("{text}"),
    }
    Ok(if out.solvable { 0 } else { 3 })
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let flags = match Flags::parse(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{USAGE}");
            return 1;
        }
    };
    let Some(command) = flags.positional.first().cloned() else {
        eprint!("{USAGE}");
        return 1;
    };
    let result = match command.as_str() {
        "solve" => cmd_solve(&flags),
        "extend" => cmd_extend(&flags),
        "norm" => cmd_norm(&flags),
        "eval" => cmd_eval(&flags),
        "verify" => cmd_verify(&flags),
        "parametrize" => cmd_parametrize(&flags),
        "lft" => cmd_lft(&flags),
        "sample" => cmd_sample(&flags),
        "oracle-pick" => cmd_oracle_pick(&flags),
        other => {
            eprintln!("error: unknown command '{other}'");
            eprint!("{USAGE}");
            return 1;
        }
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}
