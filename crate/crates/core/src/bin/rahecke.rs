use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use rahecke::catalog;
use rahecke::enumeration::ball;
use rahecke::growth::{character_list, classify_simplicity, pole_and_rho};
use rahecke::hecke::HeckeAlgebra;
use rahecke::params::Rational;
use rahecke::scalar::Scalar;
use rahecke::suite::{self, Mode, SuiteConfig};
use rahecke::{CoxeterDiagram, Error, MultiParameter, SignPattern};

#[derive(Parser)]
#[command(name = "rahecke", version, about = "Right-angled Coxeter groups, Hecke algebras and simplicity")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct DiagramArg {
    /// Diagram JSON file, or one of d_infty, A, pentagon, free3.
    #[arg(long)]
    diagram: String,
}

#[derive(clap::Args, Clone)]
struct ParamArg {
    /// Parameters as `a=1/4,b=9` or `all=1/2`.
    #[arg(long)]
    q: String,
    #[arg(long, default_value = "exact")]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// Simple / NotSimple verdict with the sign-pattern sweep.
    Classify {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long)]
        q: String,
    },
    /// Growth series data along the ray through q.
    Growth {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long)]
        q: String,
    },
    /// ShortLex normal form of a word.
    Nf {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long)]
        word: String,
    },
    /// Product of two Hecke elements.
    Mul {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        params: ParamArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Sphere sizes of a ball, optionally with its elements.
    Ball {
        #[command(flatten)]
        diagram: DiagramArg,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        elements: bool,
    },
    /// Character values on generators (and on an element).
    Char {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        params: ParamArg,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long)]
        element: Option<String>,
    },
    /// Partial sum of a central projection.
    Eproj {
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        params: ParamArg,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long)]
        cutoff: usize,
    },
    /// Run one verification suite on a ball.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        diagram: DiagramArg,
        #[command(flatten)]
        params: ParamArg,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Run the acceptance criteria and emit a pass/fail table.
    Report {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

enum Outcome {
    Ok(Value),
    Failed(Value),
}

fn load_diagram(arg: &DiagramArg) -> rahecke::Result<CoxeterDiagram> {
    let path = Path::new(&arg.diagram);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::MalformedDiagram(format!("{}: {e}", path.display())))?;
        return CoxeterDiagram::parse_json(&text);
    }
    match arg.diagram.as_str() {
        "d_infty" => Ok(catalog::d_infinity()),
        "A" => Ok(catalog::diagram_a()),
        "pentagon" => Ok(catalog::pentagon()),
        "free3" => Ok(catalog::free_product(3)),
        other => Err(Error::MalformedDiagram(format!("no such file or catalog diagram: {other}"))),
    }
}

fn element_json<K: Scalar>(alg: &HeckeAlgebra<K>, x: &rahecke::hecke::HeckeElement<K>) -> Value {
    json!({
        "terms": x.to_json(alg.diagram()),
        "display": x.display(alg.diagram()),
    })
}

fn mul<K: Scalar>(d: &CoxeterDiagram, q: &MultiParameter, a: &str, b: &str) -> rahecke::Result<Value> {
    let alg = HeckeAlgebra::<K>::new(d, q)?;
    let x = alg.parse_element(a)?;
    let y = alg.parse_element(b)?;
    Ok(element_json(&alg, &alg.mul(&x, &y)))
}

fn character<K: Scalar>(d: &CoxeterDiagram, q: &MultiParameter, eps: &SignPattern, element: Option<&str>) -> rahecke::Result<Value> {
    let alg = HeckeAlgebra::<K>::new(d, q)?;
    let values: serde_json::Map<String, Value> = d
        .generators()
        .map(|s| (d.name(s).to_string(), json!(alg.char_generator(eps, s).render())))
        .collect();
    let bounded = character_list(d, q).map(|l| l.contains(eps)).ok();
    let value = match element {
        Some(text) => Some(alg.char_value(eps, &alg.parse_element(text)?).render()),
        None => None,
    };
    Ok(json!({"epsilon": eps.to_string(), "generators": values, "bounded": bounded, "value": value}))
}

fn eproj<K: Scalar>(d: &CoxeterDiagram, q: &MultiParameter, eps: &SignPattern, cutoff: usize) -> rahecke::Result<Value> {
    let alg = HeckeAlgebra::<K>::new(d, q)?;
    let e = alg.central_projection_partial(eps, cutoff)?;
    Ok(json!({
        "epsilon": eps.to_string(),
        "cutoff": cutoff,
        "normalizer": alg.projection_normalizer(eps)?.render(),
        "trace": alg.trace(&e).render(),
        "support": e.support_len(),
        "terms": e.to_json(d),
    }))
}

fn run(cli: &Cli) -> rahecke::Result<Outcome> {
    let ok = |v: Value| Ok(Outcome::Ok(v));
    match &cli.command {
        Command::Classify { diagram, q } => {
            let d = load_diagram(diagram)?;
            ok(classify_simplicity(&d, &MultiParameter::parse(&d, q)?).to_json(&d))
        }
        Command::Growth { diagram, q } => {
            let d = load_diagram(diagram)?;
            ok(pole_and_rho(&d, &MultiParameter::parse(&d, q)?).to_json(&d))
        }
        Command::Nf { diagram, word } => {
            let d = load_diagram(diagram)?;
            ok(json!(d.format(&d.parse_elem(word)?)))
        }
        Command::Mul { diagram, params, a, b } => {
            let d = load_diagram(diagram)?;
            let q = MultiParameter::parse(&d, &params.q)?;
            ok(match params.mode {
                Mode::Exact => mul::<Rational>(&d, &q, a, b)?,
                Mode::Float => mul::<f64>(&d, &q, a, b)?,
            })
        }
        Command::Ball { diagram, radius, elements } => {
            let d = load_diagram(diagram)?;
            let b = ball(&d, *radius)?;
            let mut v = json!({"radius": radius, "size": b.len(), "sphere_sizes": b.sphere_sizes()});
            if *elements {
                v["elements"] = json!(b.elements().iter().map(|w| d.format(w)).collect::<Vec<_>>());
            }
            ok(v)
        }
        Command::Char { diagram, params, epsilon, element } => {
            let d = load_diagram(diagram)?;
            let q = MultiParameter::parse(&d, &params.q)?;
            let eps = SignPattern::parse(d.rank(), epsilon)?;
            ok(match params.mode {
                Mode::Exact => character::<Rational>(&d, &q, &eps, element.as_deref())?,
                Mode::Float => character::<f64>(&d, &q, &eps, element.as_deref())?,
            })
        }
        Command::Eproj { diagram, params, epsilon, cutoff } => {
            let d = load_diagram(diagram)?;
            let q = MultiParameter::parse(&d, &params.q)?;
            let eps = SignPattern::parse(d.rank(), epsilon)?;
            ok(match params.mode {
                Mode::Exact => eproj::<Rational>(&d, &q, &eps, *cutoff)?,
                Mode::Float => eproj::<f64>(&d, &q, &eps, *cutoff)?,
            })
        }
        Command::Verify { suite: name, diagram, params, radius, seed, word, trials } => {
            let d = load_diagram(diagram)?;
            let cfg = SuiteConfig {
                q: MultiParameter::parse(&d, &params.q)?,
                word: word.as_deref().map(|w| d.parse_elem(w)).transpose()?,
                diagram: d,
                radius: *radius,
                seed: *seed,
                mode: params.mode,
                trials: *trials,
            };
            let mut v = suite::verify_suite(name, &cfg)?;
            v["suite"] = json!(name);
            v["q"] = json!(cfg.q.display(&cfg.diagram));
            Ok(if v["passed"] == json!(true) { Outcome::Ok(v) } else { Outcome::Failed(v) })
        }
        Command::Report { only } => {
            let ids: Vec<&str> = if only.is_empty() {
                suite::CRITERIA.iter().map(|(id, _)| *id).collect()
            } else {
                only.iter().map(String::as_str).collect()
            };
            let mut results = vec![];
            for id in ids {
                let r = suite::run_criterion(id)?;
                eprintln!("{}", r.line());
                results.push(r);
            }
            let v = suite::report_json(&results);
            Ok(if v["passed"] == json!(true) { Outcome::Ok(v) } else { Outcome::Failed(v) })
        }
    }
}

fn emit(out: Option<&Path>, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = std::panic::catch_unwind(|| run(&cli));
    let (value, code) = match result {
        Ok(Ok(Outcome::Ok(v))) => (v, 0),
        Ok(Ok(Outcome::Failed(v))) => (v, 1),
        Ok(Err(e)) => (json!({"error": e.to_string()}), 1),
        Err(_) => (json!({"error": "internal failure"}), 2),
    };
    if emit(cli.out.as_deref(), &value).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
