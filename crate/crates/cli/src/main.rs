//! Command line front end for the lifting library. Every subcommand maps to
//! one library operation, speaks JSON on stdin-free argv in and stdout out,
//! and reports failures as machine-readable error JSON: exit 0 on success,
//! 2 when the caller violated a precondition (including malformed input),
//! 1 when an internal invariant broke or a verification failed.

mod repro;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use zlift::json::{
    parse_ideal, Big, CertificateJson, ClassTableJson, MatrixJson, PointJson, TargetJson,
    WitnessJson,
};
use zlift::lifting::{
    recheck, sl_lift, sl_multi_congruence_lift, sl_surject_projective, sp_extend_column,
    sp_extend_row, sp_lift, sp_multi_congruence_lift, sp_surject_projective, RowBand,
};
use zlift::projective::{
    crt_lift_projective, enumerate_classes_with_budget, reduce_projective, EnumerationBudget,
};
use zlift::unital::{cmh_perturb, coprime_shift, diag_det_one, usc_shift_mod};
use zlift::{Ideal, IntMatrix};

#[derive(Parser)]
#[command(name = "zlift", version, about = "Exact congruence lifting over the integers")]
struct Cli {
    /// Write the result JSON to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,

    /// Seed for the randomized spot checks in `repro`.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

/// JSON arguments accept inline JSON, `@path`, or a bare path to a file.
#[derive(Subcommand)]
enum Cmd {
    /// Lift a matrix to an exact determinant-one integer matrix congruent
    /// to it modulo n.
    LiftSl {
        /// Matrix JSON: nested arrays or {rows, cols, entries}.
        #[arg(long)]
        matrix: String,
        /// Modulus n >= 1 (0 asks for exactness).
        #[arg(long)]
        modulus: String,
    },
    /// Lift a matrix to an exact symplectic integer matrix congruent to it
    /// modulo n.
    LiftSp {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        modulus: String,
    },
    /// Complete a length-2k row containing +-1 to an exact symplectic
    /// matrix with the row at POSITION (1-based).
    ExtendRow {
        /// Comma-separated integers, length 2k.
        #[arg(long)]
        entries: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        position: usize,
    },
    /// Column version of extend-row.
    ExtendCol {
        #[arg(long)]
        entries: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        position: usize,
    },
    /// Determinant-one lift matching one row prescription per ideal.
    MultiLiftSl {
        /// Target JSON: {rows, moduli} with optional weights.
        #[arg(long)]
        target: String,
    },
    /// Symplectic lift matching one row prescription per ideal.
    MultiLiftSp {
        #[arg(long)]
        target: String,
    },
    /// Determinant-one matrix whose rows land in the given weighted
    /// projective classes (one point per row).
    SurjectSl {
        /// JSON array of {coords, modulus, weights} points.
        #[arg(long)]
        points: String,
    },
    /// Symplectic version of surject-sl (needs an even number of points).
    SurjectSp {
        #[arg(long)]
        points: String,
    },
    /// Glue classes over pairwise coprime moduli into one class modulo the
    /// product.
    CrtProjLift {
        #[arg(long)]
        points: String,
    },
    /// Reduce a class to components over coprime factors of its modulus.
    CrtProjReduce {
        #[arg(long)]
        point: String,
        /// Comma-separated factors whose product is the point's modulus.
        #[arg(long)]
        factors: String,
    },
    /// Enumerate the weighted projective classes of (Z/n)^d.
    EnumerateClasses {
        #[arg(long)]
        modulus: String,
        /// Comma-separated exponents, one per coordinate.
        #[arg(long)]
        weights: String,
        /// Raise the default enumeration budget (modulus cap).
        #[arg(long)]
        max_modulus: Option<u64>,
        /// Raise the default enumeration budget (dimension cap).
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Diagonal with prescribed unit residues and product 1 modulo the
    /// product of the moduli.
    DiagDetOne {
        #[arg(long)]
        values: String,
        #[arg(long)]
        moduli: String,
    },
    /// Deterministic n0 >= 0 with gcd(a + n0*b, m) = 1, given gcd(a, b) = 1.
    CoprimeShift {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        m: String,
    },
    /// Shift the head of a vector by a combination of its tail so the head
    /// becomes a unit modulo the target.
    UscShift {
        #[arg(long)]
        entries: String,
        #[arg(long)]
        target: String,
    },
    /// Perturbation vector, entrywise divisible by the modulus, whose sum
    /// with the input has integer gcd 1.
    CmhPerturb {
        #[arg(long)]
        entries: String,
        #[arg(long)]
        modulus: String,
    },
    /// Decide whether a weight-one class modulo an odd prime is missed by
    /// the indefinite orthogonal group of signature (p, q).
    Obstruction {
        #[arg(long)]
        point: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Which rows of the Gram matrix carry the positive squares.
        #[arg(long, value_enum)]
        band: BandArg,
    },
    /// Recompute every named check of a certificate from its input and
    /// output; exit 0 only if all of them pass.
    Verify {
        #[arg(long)]
        certificate: String,
    },
    /// Run the bundled example suite and report pass/fail with timings.
    Repro {
        /// Skip enumerations with modulus above 101.
        #[arg(long)]
        budget_small: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BandArg {
    /// Positive squares on the first p coordinates.
    FirstP,
    /// Positive squares on the last q coordinates.
    LastQ,
}

impl From<BandArg> for RowBand {
    fn from(b: BandArg) -> RowBand {
        match b {
            BandArg::FirstP => RowBand::FirstP,
            BandArg::LastQ => RowBand::LastQ,
        }
    }
}

enum Failure {
    Lib(zlift::Error),
    BadInput(String),
    Io(String),
}

impl From<zlift::Error> for Failure {
    fn from(e: zlift::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Lib(e) if !e.is_precondition() => 1,
            _ => 2,
        }
    }

    fn code(&self) -> &str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::BadInput(_) => "BadInput",
            Failure::Io(_) => "IoError",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::BadInput(m) | Failure::Io(m) => m.clone(),
        }
    }
}

struct Outcome {
    value: Value,
    exit: u8,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, exit: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = pretty(&outcome.value);
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, text + "\n") {
                    emit(&pretty(
                        &json!({"code": "IoError", "message": format!("cannot write {path}: {e}")}),
                    ));
                    return ExitCode::from(2);
                }
            } else {
                emit(&text);
            }
            ExitCode::from(outcome.exit)
        }
        Err(f) => {
            emit(&pretty(
                &json!({"code": f.code(), "message": f.message()}),
            ));
            ExitCode::from(f.exit())
        }
    }
}

/// A reader hanging up early (head, grep -m1) is its choice, not our error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values always serialize")
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.cmd {
        Cmd::LiftSl { matrix, modulus } => {
            let cert = sl_lift(&matrix_arg(matrix)?, &ideal_arg(modulus)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::LiftSp { matrix, modulus } => {
            let cert = sp_lift(&matrix_arg(matrix)?, &ideal_arg(modulus)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::ExtendRow {
            entries,
            k,
            position,
        } => {
            let m = sp_extend_row(&big_list(entries)?, *k, *position)?;
            Ok(Outcome::ok(json!({"matrix": MatrixJson::of(&m)})))
        }
        Cmd::ExtendCol {
            entries,
            k,
            position,
        } => {
            let m = sp_extend_column(&big_list(entries)?, *k, *position)?;
            Ok(Outcome::ok(json!({"matrix": MatrixJson::of(&m)})))
        }
        Cmd::MultiLiftSl { target } => {
            let cert = sl_multi_congruence_lift(&target_arg(target)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::MultiLiftSp { target } => {
            let cert = sp_multi_congruence_lift(&target_arg(target)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::SurjectSl { points } => {
            let cert = sl_surject_projective(&points_arg(points)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::SurjectSp { points } => {
            let cert = sp_surject_projective(&points_arg(points)?)?;
            Ok(Outcome::ok(cert_value(&cert)))
        }
        Cmd::CrtProjLift { points } => {
            let p = crt_lift_projective(&points_arg(points)?)?;
            Ok(Outcome::ok(json!({"point": PointJson::of(&p)})))
        }
        Cmd::CrtProjReduce { point, factors } => {
            let p = typed::<PointJson>(read_json_arg(point)?)?.to_point()?;
            let factors = big_list(factors)?
                .iter()
                .map(parse_ideal)
                .collect::<zlift::Result<Vec<_>>>()?;
            let parts = reduce_projective(&p, &factors)?;
            let parts: Vec<PointJson> = parts.iter().map(PointJson::of).collect();
            Ok(Outcome::ok(json!({"points": parts})))
        }
        Cmd::EnumerateClasses {
            modulus,
            weights,
            max_modulus,
            max_dim,
        } => {
            let default = EnumerationBudget::default();
            let budget = EnumerationBudget {
                max_modulus: max_modulus.unwrap_or(default.max_modulus),
                max_dim: max_dim.unwrap_or(default.max_dim),
            };
            let table = enumerate_classes_with_budget(
                &ideal_arg(modulus)?,
                &weights_arg(weights)?,
                budget,
            )?;
            Ok(Outcome::ok(value_of(&ClassTableJson::of(&table)?)))
        }
        Cmd::DiagDetOne { values, moduli } => {
            let moduli = big_list(moduli)?
                .iter()
                .map(parse_ideal)
                .collect::<zlift::Result<Vec<_>>>()?;
            let diag = diag_det_one(&big_list(values)?, &moduli)?;
            let diag: Vec<String> = diag.iter().map(|d| d.to_string()).collect();
            Ok(Outcome::ok(json!({"diagonal": diag})))
        }
        Cmd::CoprimeShift { a, b, m } => {
            let shift = coprime_shift(&big_arg(a)?, &big_arg(b)?, &big_arg(m)?)?;
            Ok(Outcome::ok(json!({"shift": shift.to_string()})))
        }
        Cmd::UscShift { entries, target } => {
            let w = usc_shift_mod(&big_list(entries)?, &ideal_arg(target)?)?;
            Ok(Outcome::ok(value_of(&WitnessJson::of(&w))))
        }
        Cmd::CmhPerturb { entries, modulus } => {
            let out = cmh_perturb(&big_list(entries)?, &ideal_arg(modulus)?)?;
            let out: Vec<String> = out.iter().map(|e| e.to_string()).collect();
            Ok(Outcome::ok(json!({"perturbation": out})))
        }
        Cmd::Obstruction { point, p, q, band } => {
            let pt = typed::<PointJson>(read_json_arg(point)?)?.to_point()?;
            let obstructed =
                zlift::lifting::orthogonal_obstruction(&pt, *p, *q, (*band).into())?;
            Ok(Outcome::ok(json!({"obstructed": obstructed})))
        }
        Cmd::Verify { certificate } => {
            let wire = typed::<CertificateJson>(read_json_arg(certificate)?)?;
            let (input, output, lambdas, names) = wire.to_parts()?;
            let checks = recheck(&input, &output, &lambdas, &names)?;
            let all_pass = checks.iter().all(|c| c.pass);
            let checks: Vec<Value> = checks
                .iter()
                .map(|c| json!({"name": c.name, "pass": c.pass}))
                .collect();
            Ok(Outcome {
                value: json!({"all_pass": all_pass, "checks": checks}),
                exit: if all_pass { 0 } else { 1 },
            })
        }
        Cmd::Repro { budget_small } => Ok(repro::run(*budget_small, cli.seed)),
    }
}

fn cert_value(cert: &zlift::lifting::LiftCertificate) -> Value {
    value_of(&CertificateJson::of(cert))
}

fn value_of<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("wire types always serialize")
}

fn big_arg(s: &str) -> Result<BigInt, Failure> {
    BigInt::from_str(s.trim()).map_err(|_| Failure::BadInput(format!("invalid integer '{s}'")))
}

fn big_list(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',').map(big_arg).collect()
}

fn ideal_arg(s: &str) -> Result<Ideal, Failure> {
    Ok(parse_ideal(&big_arg(s)?)?)
}

fn weights_arg(s: &str) -> Result<zlift::projective::Weights, Failure> {
    let parsed = s
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<u32>()
                .map_err(|_| Failure::BadInput(format!("invalid weight '{w}'")))
        })
        .collect::<Result<Vec<u32>, Failure>>()?;
    Ok(zlift::projective::Weights::new(parsed)?)
}

/// Inline JSON, `@path`, or a bare path to a JSON file.
fn read_json_arg(s: &str) -> Result<Value, Failure> {
    if let Some(path) = s.strip_prefix('@') {
        return parse_json_text(&read_file(path)?);
    }
    match serde_json::from_str(s) {
        Ok(v) => Ok(v),
        Err(e) => {
            if Path::new(s).is_file() {
                parse_json_text(&read_file(s)?)
            } else {
                Err(Failure::BadInput(format!("not valid JSON: {e}")))
            }
        }
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {path}: {e}")))
}

fn parse_json_text(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::BadInput(format!("not valid JSON: {e}")))
}

fn typed<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::BadInput(format!("bad shape: {e}")))
}

/// Accepts plain nested arrays or the full {rows, cols, entries} envelope.
fn matrix_arg(s: &str) -> Result<IntMatrix, Failure> {
    let v = read_json_arg(s)?;
    match &v {
        Value::Array(_) => {
            let rows: Vec<Vec<Big>> = typed(v)?;
            Ok(IntMatrix::from_rows(
                rows.into_iter()
                    .map(|r| r.into_iter().map(|b| b.0).collect())
                    .collect(),
            )?)
        }
        Value::Object(_) => Ok(typed::<MatrixJson>(v)?.to_matrix()?),
        _ => Err(Failure::BadInput(
            "matrix must be an array of rows or a matrix object".into(),
        )),
    }
}

fn target_arg(s: &str) -> Result<zlift::lifting::CongruenceTarget, Failure> {
    Ok(typed::<TargetJson>(read_json_arg(s)?)?.to_target()?)
}

fn points_arg(s: &str) -> Result<Vec<zlift::projective::ProjPoint>, Failure> {
    let wire: Vec<PointJson> = typed(read_json_arg(s)?)?;
    Ok(wire
        .iter()
        .map(|p| p.to_point())
        .collect::<zlift::Result<Vec<_>>>()?)
}
