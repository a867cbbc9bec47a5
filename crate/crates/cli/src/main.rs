//! JSON-in/JSON-out command line for the hypermoduli library. Every
//! subcommand prints a single JSON payload on stdout; errors map to distinct
//! exit codes (2 usage, 3 malformed JSON, 4 violated precondition) with a
//! JSON error payload naming the precondition.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hypermoduli::curve::{curve_from_config, global_g12_for_genus, tautological_family_exists};
use hypermoduli::json as wire;
use hypermoduli::moebius::solve_pairing_involution;
use hypermoduli::picard;
use hypermoduli::scalar::{FieldTag, Scalar};
use hypermoduli::strata;
use hypermoduli::verify::{run_all, VerifyConfig};
use hypermoduli::Error;

#[derive(Parser)]
#[command(name = "hypermoduli")]
#[command(about = "Exact invariants and moduli quantities of hyperelliptic curves")]
#[command(version)]
struct Cli {
    /// Read the JSON input from a file instead of stdin
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Attach computation traces (stabilizer elements, witnesses) to the payload
    #[arg(long, global = true)]
    trace: bool,

    /// Worker threads for shardable scans; the output does not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant and smoothness of a binary form (stdin: form JSON)
    Discriminant,
    /// Automorphism group of a point configuration (stdin: configuration JSON)
    AutGroup,
    /// Moebius equivalence of two configurations (stdin: {"c1":…, "c2":…})
    Equiv,
    /// The involution pairing two point pairs (stdin: {"field":…, "points":[p1..p4]})
    InvolutionSolve,
    /// Exhaustive four-subset lemma scan over sizes 6..=nmax
    LemmaCombin {
        #[arg(long)]
        nmax: usize,
    },
    /// Dimension of one stratum of the extra-automorphism locus
    StratumDim {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: u64,
    },
    /// Class-group / Picard orders, Hodge data and the descent subgroup
    PicardReport {
        #[arg(long)]
        genus: u64,
    },
    /// The two-probe descent computation only
    Descent {
        #[arg(long)]
        genus: u64,
        /// Override the automatically selected prime (must be 1 mod lcm(2g+1, 2g+2))
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Exponent of det of the pushforward of omega^a(bW) in the generator
    TabExponent {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        genus: u64,
    },
    /// Hodge class exponent and subgroup index
    Hodge {
        #[arg(long)]
        genus: u64,
    },
    /// Build the double cover of a configuration (stdin: {"config":…, "twist":…})
    CurveBuild,
    /// Weierstrass points of a curve (stdin: curve JSON)
    Weierstrass,
    /// Isomorphism of two curves over the field and the closure (stdin: {"c1":…, "c2":…})
    Iso,
    /// Square class of a twist value
    TwistClass {
        #[arg(long)]
        field: String,
        #[arg(long)]
        value: String,
    },
    /// Point count of a curve over its prime field (stdin: curve JSON)
    CountPoints,
    /// Parity predicates: tautological family and global degree-2 pencil
    TautExists {
        #[arg(long)]
        genus: u64,
    },
    /// Run the whole verification suite
    VerifyAll {
        /// Upper genus for the descent and order sweeps
        #[arg(long, default_value_t = 20)]
        gmax: u64,
    },
}

enum CliError {
    Json(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Json(m) => CliError::Json(m),
            other => CliError::Domain(other),
        }
    }
}

fn read_input(cli: &Cli) -> Result<Value, CliError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Json(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Json(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::Json(e.to_string()))
}

fn object_field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, CliError> {
    v.get(key)
        .ok_or_else(|| CliError::Json(format!("missing key {key:?}")))
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Discriminant => {
            let form = wire::form_from_json(&read_input(cli)?)?;
            let delta = hypermoduli::binform::discriminant(&form)?;
            Ok(json!({
                "genus": form.genus(),
                "discriminant": delta.to_string(),
                "smooth": !delta.is_zero(),
            }))
        }
        Command::AutGroup => {
            let config = wire::configuration_from_json(&read_input(cli)?)?;
            let group = config.automorphism_group_jobs(cli.jobs)?;
            let mut payload = wire::group_to_json(&group);
            if !cli.trace {
                // full permutations only on request; matrices and cycle
                // types are part of the report
                for e in payload["elements"].as_array_mut().unwrap() {
                    e.as_object_mut().unwrap().remove("permutation");
                }
            }
            Ok(payload)
        }
        Command::Equiv => {
            let input = read_input(cli)?;
            let c1 = wire::configuration_from_json(object_field(&input, "c1")?)?;
            let c2 = wire::configuration_from_json(object_field(&input, "c2")?)?;
            let witness = c1.equivalent_to(&c2);
            Ok(json!({
                "equivalent": witness.is_some(),
                "witness": witness.map(|w| wire::moebius_to_json(&w)),
            }))
        }
        Command::InvolutionSolve => {
            let input = read_input(cli)?;
            let tag = wire::field_from_json(object_field(&input, "field")?)?;
            let points = object_field(&input, "points")?
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| CliError::Json("points must be an array of four".into()))?;
            let pts = points
                .iter()
                .map(|p| wire::point_from_json(p, tag))
                .collect::<Result<Vec<_>, _>>()?;
            let a = solve_pairing_involution(&pts[0], &pts[1], &pts[2], &pts[3])?;
            Ok(json!({
                "matrix": wire::moebius_to_json(&a),
                "order": 2,
            }))
        }
        Command::LemmaCombin { nmax } => {
            let report = strata::verify_lemma_combin(*nmax, cli.jobs)?;
            Ok(wire::lemma_report_to_json(&report))
        }
        Command::StratumDim { g, p, i } => {
            let dim = strata::stratum_dimension(*g, *p, *i)?;
            Ok(json!({ "dim": dim }))
        }
        Command::PicardReport { genus } => {
            let report = picard::picard_report(*genus)?;
            // the report always carries the full descent trace
            Ok(wire::picard_report_to_json(&report, true))
        }
        Command::Descent { genus, prime } => {
            let report = picard::descent_report(*genus, *prime)?;
            Ok(wire::descent_to_json(&report, cli.trace))
        }
        Command::TabExponent { a, b, genus } => {
            let class = picard::tab_exponent(*a, *b, *genus)?;
            Ok(json!({
                "modulus": class.modulus,
                "residue": class.residue,
                "pushforward_rank": picard::pushforward_rank(*a, *b, *genus)?,
            }))
        }
        Command::Hodge { genus } => {
            let class = picard::hodge_class(*genus)?;
            let index = picard::hodge_index(*genus)?;
            Ok(json!({
                "modulus": class.modulus,
                "exponent": class.residue,
                "index": index,
                "generates": index == 1,
            }))
        }
        Command::CurveBuild => {
            let input = read_input(cli)?;
            let config = wire::configuration_from_json(object_field(&input, "config")?)?;
            let twist = wire::scalar_from_json(object_field(&input, "twist")?, config.tag())?;
            let curve = curve_from_config(&config, twist)?;
            let mut payload = wire::curve_to_json(&curve);
            if cli.trace {
                payload["coordinate_shift"] = curve
                    .coordinate_shift()
                    .map(wire::moebius_to_json)
                    .unwrap_or(Value::Null);
            }
            Ok(payload)
        }
        Command::Weierstrass => {
            let curve = wire::curve_from_json(&read_input(cli)?)?;
            let points = curve.weierstrass_points()?;
            Ok(wire::configuration_to_json(&points))
        }
        Command::Iso => {
            let input = read_input(cli)?;
            let c1 = wire::curve_from_json(object_field(&input, "c1")?)?;
            let c2 = wire::curve_from_json(object_field(&input, "c2")?)?;
            let closure = c1.isomorphic_over_closure(&c2)?;
            let field = c1.isomorphic_over_field(&c2)?;
            Ok(json!({
                "isomorphic_over_closure": closure.is_some(),
                "closure_witness": closure.map(|w| wire::moebius_to_json(&w)),
                "isomorphic_over_field": field.is_some(),
                "field_witness": field.map(|w| wire::witness_to_json(&w)),
            }))
        }
        Command::TwistClass { field, value } => {
            let tag: FieldTag = field.parse()?;
            let scalar = Scalar::parse(value, tag)?;
            let class = scalar.square_class()?;
            Ok(json!({
                "value": scalar.to_string(),
                "field": tag.to_string(),
                "class": class.to_string(),
            }))
        }
        Command::CountPoints => {
            let curve = wire::curve_from_json(&read_input(cli)?)?;
            Ok(json!({
                "genus": curve.genus(),
                "count": curve.count_points()?,
            }))
        }
        Command::TautExists { genus } => {
            if *genus < 2 {
                return Err(CliError::Domain(Error::PreconditionViolated(
                    "genus must be at least 2".into(),
                )));
            }
            Ok(json!({
                "genus": genus,
                "tautological_family": tautological_family_exists(*genus),
                "global_g12": global_g12_for_genus(*genus).to_string(),
            }))
        }
        Command::VerifyAll { gmax } => {
            let cfg = VerifyConfig {
                gmax: *gmax,
                jobs: cli.jobs,
            };
            let outcomes = run_all(&cfg);
            for o in &outcomes {
                eprintln!("{}", o.summary_line());
            }
            // timings go to stderr only, keeping stdout byte-stable
            Ok(json!({
                "all_passed": outcomes.iter().all(|o| o.passed),
                "criteria": outcomes
                    .iter()
                    .map(|o| json!({
                        "id": o.id,
                        "name": o.name,
                        "passed": o.passed,
                        "details": o.details,
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(payload) => {
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            ExitCode::SUCCESS
        }
        Err(CliError::Json(msg)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "status": "error",
                    "kind": "malformed-json",
                    "message": msg,
                }))
                .unwrap()
            );
            ExitCode::from(3)
        }
        Err(CliError::Domain(e)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "status": "error",
                    "kind": "precondition",
                    "precondition": e.precondition_name(),
                    "message": e.to_string(),
                }))
                .unwrap()
            );
            ExitCode::from(4)
        }
    }
}
