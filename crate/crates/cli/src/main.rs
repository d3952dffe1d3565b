mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quartix_core::invariants::{absolute_invariants, dixmier_ohno, weighted_equal};
use quartix_core::strata::{self, classify, reconstruct_z1, reconstruct_z4};
use quartix_core::weierstrass::{self, hyperflex_form_seeded, point_flex_type, DEFAULT_SEED};
use quartix_core::{Field, TernaryQuartic};
use serde_json::{json, Map, Value};

use input::CurveInput;

const COEFF_NOTE: &str = "Coefficient maps use the integral convention: the value under key \"i,j,k\" is the plain \
coefficient a_ijk of X^i Y^j Z^k, with no multinomial factors. For example {\"2,2,0\": \"6\"} means 6 X^2 Y^2.";

const AFTER_HELP: &str = "Coefficient maps use the integral convention: the value under key \"i,j,k\" is the plain \
coefficient a_ijk of X^i Y^j Z^k, with no multinomial factors.

Fields: Q, Q(i), Fp(p), Q(sqrt(d)[; name]), ext(base; name; relation[; trusted]).
Batch files: one `field | curve` per line; `#` starts a comment.
QUARTIX_SEED (decimal or 0x hex) fixes the random frames used for hyperflex counts.
Exit status: 0 on success, 2 on error; compare exits 1 when the curves differ.";

#[derive(Parser)]
#[command(name = "quartix", version, about = "Exact invariants, hyperflexes and strata of plane quartics", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// Field descriptor
    #[arg(long, default_value = "Q")]
    field: String,
    /// Quartic in X, Y, Z, or a JSON coefficient map keyed by "i,j,k" (integral a_ijk convention)
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch", long_help = COEFF_NOTE)]
    curve: Option<String>,
    /// File with one `field | curve` per line
    #[arg(long)]
    batch: Option<String>,
    /// Add decimal renderings (display only)
    #[arg(long)]
    approx: bool,
}

#[derive(Subcommand)]
enum Command {
    /// The thirteen Dixmier-Ohno invariants
    Invariants(CurveArgs),
    /// Absolute invariants i1..i6, j1..j6
    Absolutes(CurveArgs),
    /// Hyperflex count, flex count and the binary form of hyperflexes
    Hyperflex {
        #[command(flatten)]
        curve: CurveArgs,
        /// Report the flex type of this point (x:y:z) instead
        #[arg(long)]
        point: Option<String>,
    },
    /// Stratum membership
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Also count hyperflexes and check the count against the stratum
        #[arg(long)]
        count_hyperflexes: bool,
    },
    /// Weighted equality of invariants; exit 0 if equal, 1 if not
    Compare {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, long_help = COEFF_NOTE)]
        curve: String,
        /// Second curve (defaults to the first)
        #[arg(long)]
        other: Option<String>,
        /// Matrix "a,b,c;d,e,f;g,h,k" applied to the second curve
        #[arg(long)]
        transform: Option<String>,
    },
    /// A family member from its modulus z
    Reconstruct {
        /// Z1 or Z4
        #[arg(long)]
        stratum: String,
        #[arg(long)]
        z: String,
        /// Field containing z
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// The recorded model of a zero dimensional stratum
    Model {
        #[arg(long)]
        stratum: String,
    },
}

type Outcome = Result<Value, String>;

fn seed() -> Result<u64, String> {
    match std::env::var("QUARTIX_SEED") {
        Ok(s) => weierstrass::parse_seed(&s).ok_or_else(|| format!("QUARTIX_SEED `{s}` is not an integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn curve_header(input: &CurveInput) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("field".into(), report::field(&input.field));
    m.insert("curve".into(), json!(input.curve.to_string()));
    m
}

fn merge(mut head: Map<String, Value>, body: Value) -> Value {
    if let Value::Object(b) = body {
        head.extend(b);
    }
    Value::Object(head)
}

fn run_curve(cmd: &Command, input: &CurveInput, approx: bool) -> Outcome {
    let f = &input.curve;
    let body = match cmd {
        Command::Invariants(_) => report::invariants(&dixmier_ohno(f).map_err(|e| e.to_string())?, approx),
        Command::Absolutes(_) => {
            let v = dixmier_ohno(f).map_err(|e| e.to_string())?;
            report::absolutes(&absolute_invariants(&v).map_err(|e| e.to_string())?, approx)
        }
        Command::Hyperflex { point: Some(p), .. } => {
            let p = input::point(p, &input.field)?;
            let t = point_flex_type(f, &p).map_err(|e| e.to_string())?;
            json!({ "point": p.iter().map(report::element).collect::<Vec<_>>(), "type": t.name() })
        }
        Command::Hyperflex { point: None, .. } => {
            let seed = seed()?;
            report::flex(&hyperflex_form_seeded(f, seed).map_err(|e| e.to_string())?, seed)
        }
        Command::Classify { count_hyperflexes, .. } => {
            let v = dixmier_ohno(f).map_err(|e| e.to_string())?;
            let count = if *count_hyperflexes {
                Some(hyperflex_form_seeded(f, seed()?).map_err(|e| e.to_string())?.hyperflex_count)
            } else {
                None
            };
            report::stratum(&classify(&v, count).map_err(|e| e.to_string())?)
        }
        _ => unreachable!("not a per-curve command"),
    };
    Ok(merge(curve_header(input), body))
}

fn curve_command(cmd: &Command, args: &CurveArgs) -> (Outcome, bool) {
    if let Some(path) = &args.batch {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return (Err(format!("{path}: {e}")), false),
        };
        let items = input::batch(&text);
        let one = |(line, parsed): &(usize, Result<CurveInput, String>)| -> Value {
            let mut head = Map::new();
            head.insert("line".into(), json!(line));
            let out = parsed.as_ref().map_err(Clone::clone).and_then(|c| run_curve(cmd, c, args.approx));
            match out {
                Ok(v) => merge(head, v),
                Err(e) => merge(head, report::error(&e)),
            }
        };
        #[cfg(feature = "parallel")]
        let results: Vec<Value> = {
            use rayon::prelude::*;
            items.par_iter().map(one).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<Value> = items.iter().map(one).collect();
        let failed = results.iter().any(|r| r.get("error").is_some());
        return (Ok(json!({ "results": results })), failed);
    }
    let parsed = input::field(&args.field).and_then(|field| {
        let text = args.curve.as_deref().expect("clap requires --curve");
        let curve = input::curve(text, &field)?;
        Ok(CurveInput { field, curve })
    });
    (parsed.and_then(|c| run_curve(cmd, &c, args.approx)), false)
}

fn compare(field: &str, curve: &str, other: Option<&str>, transform: Option<&str>) -> Result<(Value, bool), String> {
    let field = input::field(field)?;
    let f = input::curve(curve, &field)?;
    let mut g = match other {
        Some(t) => input::curve(t, &field)?,
        None => f.clone(),
    };
    if let Some(t) = transform {
        g = g.transform(&input::transform(t, &field)?).map_err(|e| e.to_string())?;
    }
    let (a, b) = (dixmier_ohno(&f).map_err(|e| e.to_string())?, dixmier_ohno(&g).map_err(|e| e.to_string())?);
    let eq = weighted_equal(&a, &b).map_err(|e| e.to_string())?;
    Ok((
        json!({
            "field": report::field(&field),
            "curve": f.to_string(),
            "other": g.to_string(),
            "weighted_equal": eq,
        }),
        eq,
    ))
}

fn reconstruct(stratum: &str, z: &str, field: &str) -> Outcome {
    let field = input::field(field)?;
    let z = input::elem(z, &field)?;
    let label = strata::canonical_label(stratum);
    let rec = match label.as_str() {
        "Z1" => reconstruct_z1(&z),
        "Z4" => reconstruct_z4(&z),
        _ => return Err(format!("reconstruction is available for Z1 and Z4, not `{stratum}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "stratum": label,
        "z": report::element(&z),
        "param": rec.param.to_string(),
        "template": rec.template,
        "t_field": report::field(rec.t.field()),
        "t": report::element(&rec.t),
        "model": rec.model.to_string(),
    }))
}

fn model(stratum: &str) -> Outcome {
    let label = strata::data().stratum(stratum).map_err(|e| e.to_string())?;
    let f: TernaryQuartic = strata::builtin_model(stratum).map_err(|e| e.to_string())?;
    let field: &Field = f.field();
    Ok(json!({
        "stratum": label.name,
        "s": label.hyperflexes,
        "dim": label.dim,
        "field": report::field(field),
        "curve": f.to_string(),
    }))
}

fn emit(v: &Value) {
    use std::io::Write;
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command;
    let result: Result<(Value, u8), String> = match &command {
        Command::Invariants(a) | Command::Absolutes(a) | Command::Hyperflex { curve: a, .. } | Command::Classify { curve: a, .. } => {
            match curve_command(&command, a) {
                (Ok(v), failed) => Ok((v, if failed { 2 } else { 0 })),
                (Err(e), _) => Err(e),
            }
        }
        Command::Compare { field, curve, other, transform } => {
            compare(field, curve, other.as_deref(), transform.as_deref()).map(|(v, eq)| (v, if eq { 0 } else { 1 }))
        }
        Command::Reconstruct { stratum, z, field } => reconstruct(stratum, z, field).map(|v| (v, 0)),
        Command::Model { stratum } => model(stratum).map(|v| (v, 0)),
    };
    match result {
        Ok((v, code)) => {
            emit(&v);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("quartix: {e}");
            emit(&report::error(&e));
            ExitCode::from(2)
        }
    }
}
