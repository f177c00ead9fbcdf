//! Thin command-line front end: `check` certifies a hypothesis for an
//! equation file, `find` locates periodic solutions and writes a report
//! (plus an optional displacement CSV), `reproduce` runs the built-in
//! regression suite. Exit codes: 0 success, 1 usage/input error,
//! 2 certification refusal.

use abel::flow::{
    assign_components, find_periodic_solutions, IntegrationConfig, DEFAULT_SCAN_GRID,
};
use abel::hypothesis::{
    certify_c, certify_h, certify_h_prime, suggest_nodes, CertifyError, HypothesisCertificate,
};
use abel::report::{
    evaluate_bound, write_displacement_csv, EquationFile, ParsedEquation, Provenance, Report,
    CERTIFICATE_SCHEMA,
};
use abel::scalar::parse_rational;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "abel",
    version,
    about = "Certify sign hypotheses and locate periodic solutions of generalized Abel equations"
)]
struct Cli {
    /// Seed echoed into report provenance and used by randomized suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a hypothesis for an equation file; prints the certificate as JSON.
    Check(CheckArgs),
    /// Locate and classify periodic solutions; writes a JSON report.
    Find(FindArgs),
    /// Run the built-in regression suite and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Hypothesis {
    /// Alternating signs on lines x = λᵢ.
    H,
    /// Algebraic zero criterion for degree-one trigonometric coefficients.
    C,
    /// Alternating determinant signs along a curve family (requires curves).
    Hprime,
}

#[derive(Args)]
struct CheckArgs {
    /// Equation file (JSON).
    input: PathBuf,
    #[arg(long, value_enum)]
    hypothesis: Hypothesis,
    /// Comma-separated nodes (reals or p/q); falls back to the file's nodes,
    /// then to the automatic search.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambdas: Option<Vec<String>>,
}

#[derive(Args)]
struct FindArgs {
    /// Equation file (JSON).
    input: PathBuf,
    /// Scan range, written lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = DEFAULT_SCAN_GRID)]
    grid: usize,
    /// Displacement tolerance (sets abs_tol and the refinement width).
    #[arg(long)]
    tol: Option<f64>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-sample displacement map as CSV.
    #[arg(long)]
    displacement_csv: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Print the claim table without running it.
    #[arg(long)]
    list: bool,
    /// Degrade the finder tolerance (the claim thresholds stay pinned).
    #[arg(long)]
    tol: Option<f64>,
}

enum CliError {
    Input(String),
    Refusal(Box<CertifyError>),
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::NotCertifiable(_)
            | CertifyError::NoAdmissibleSubsequence { .. }
            | CertifyError::ZeroEquation
            | CertifyError::DegenerateConditionPolynomial => CliError::Refusal(Box::new(e)),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<ParsedEquation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    EquationFile::parse_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_lambda_list(items: &[String]) -> Result<Vec<f64>, CliError> {
    items
        .iter()
        .map(|s| {
            parse_rational(s)
                .map(|r| abel::scalar::Scalar::to_f64(&r))
                .or_else(|| s.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Input(format!("cannot parse node '{s}'")))
        })
        .collect()
}

fn certificate_json(cert: &HypothesisCertificate) -> serde_json::Value {
    let mut v = serde_json::to_value(cert).expect("certificate serializes");
    v.as_object_mut()
        .expect("object")
        .insert("schema".into(), json!(CERTIFICATE_SCHEMA));
    v
}

fn run_check(args: &CheckArgs) -> Result<(), CliError> {
    let parsed = load(&args.input)?;
    let lambda_strings: Option<Vec<String>> = args.lambdas.clone().or_else(|| {
        parsed.file.nodes.as_ref().map(|nodes| {
            nodes
                .iter()
                .map(|n| match n {
                    abel::report::RealSpec::Number(x) => x.to_string(),
                    abel::report::RealSpec::Text(s) => s.clone(),
                })
                .collect()
        })
    });
    let cert = match args.hypothesis {
        Hypothesis::C => match &parsed.exact {
            Some(exact) => certify_c(exact)?,
            None => certify_c(&parsed.float)?,
        },
        Hypothesis::H => {
            let lambdas = resolve_lambdas(&parsed, lambda_strings.as_deref())?;
            match (&parsed.exact, &lambdas) {
                (Some(exact), Lambdas::Exact(l)) => certify_h(exact, l)?,
                (_, Lambdas::Exact(l)) => {
                    let floats: Vec<f64> =
                        l.iter().map(abel::scalar::Scalar::to_f64).collect();
                    certify_h(&parsed.float, &floats)?
                }
                (_, Lambdas::Float(l)) => certify_h(&parsed.float, l)?,
            }
        }
        Hypothesis::Hprime => {
            let curves = parsed
                .curves
                .clone()
                .ok_or_else(|| CliError::Input("hprime requires a curves record".into()))?;
            let lambdas = match &lambda_strings {
                Some(items) => parse_lambda_list(items)?,
                None => {
                    return Err(CliError::Input(
                        "hprime requires --lambdas (or nodes in the file)".into(),
                    ))
                }
            };
            certify_h_prime(&parsed.float, &curves, &lambdas)?
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&certificate_json(&cert)).expect("json")
    );
    Ok(())
}

enum Lambdas {
    Exact(Vec<abel::Rat>),
    Float(Vec<f64>),
}

fn resolve_lambdas(
    parsed: &ParsedEquation,
    strings: Option<&[String]>,
) -> Result<Lambdas, CliError> {
    if let Some(items) = strings {
        let exact: Option<Vec<abel::Rat>> =
            items.iter().map(|s| parse_rational(s)).collect();
        return match exact {
            Some(l) => Ok(Lambdas::Exact(l)),
            None => Ok(Lambdas::Float(parse_lambda_list(items)?)),
        };
    }
    // no nodes given: fall back to the automatic search
    let suggestion = match &parsed.exact {
        Some(exact) => suggest_nodes(exact),
        None => suggest_nodes(&parsed.float),
    };
    match suggestion {
        Some(s) => match s.exact {
            Some(e) => Ok(Lambdas::Exact(e)),
            None => Ok(Lambdas::Float(s.values)),
        },
        None => Err(CliError::Input(
            "no nodes given and the automatic search found none; pass --lambdas".into(),
        )),
    }
}

fn run_find(args: &FindArgs, seed: u64) -> Result<(), CliError> {
    let started = Instant::now();
    let parsed = load(&args.input)?;
    let (lo, hi) = args
        .range
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| CliError::Input(format!("cannot parse --range '{}'", args.range)))?;
    let mut cfg = IntegrationConfig::default();
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        cfg.abs_tol = t;
        cfg.refine_width = t;
    }
    if args.grid < 2 {
        return Err(CliError::Input("--grid must be at least 2".into()));
    }

    let report_body = find_periodic_solutions(&parsed.float, (lo, hi), &cfg, args.grid)
        .map_err(|e| CliError::Input(format!("finder: {e}")))?;

    // certificate (and component assignment) when the file carries nodes
    let mut certificate = None;
    let mut refusal = None;
    let mut solutions = report_body;
    if let Some(nodes) = parsed.nodes.clone() {
        solutions = assign_components(&solutions, &nodes, &cfg);
        let attempt = match (&parsed.exact, &parsed.nodes_exact) {
            (Some(exact), Some(nodes_exact)) => certify_h(exact, nodes_exact),
            _ => certify_h(&parsed.float, &nodes),
        };
        match attempt {
            Ok(cert) => certificate = Some(cert),
            Err(CertifyError::NotCertifiable(r)) => refusal = Some(r),
            Err(e) => return Err(CliError::Input(format!("certification: {e}"))),
        }
    }

    if let Some(path) = &args.displacement_csv {
        let mut buf = Vec::new();
        write_displacement_csv(&mut buf, &solutions)
            .map_err(|e| CliError::Input(format!("csv: {e}")))?;
        std::fs::write(path, buf)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }

    let config_echo = json!({
        "range": [lo, hi],
        "grid": args.grid,
        "integration": serde_json::to_value(&cfg).expect("config serializes"),
    });
    let mut report = Report::new(Provenance::new(
        seed,
        config_echo,
        started.elapsed().as_millis() as u64,
    ));
    if let Some(cert) = certificate {
        let bc = evaluate_bound(
            &cert,
            &solutions,
            parsed.float.leading().mean(),
        );
        report.bound_satisfied = Some(bc.satisfied);
        report.bound_check = Some(bc);
        report.certificate = Some(cert);
    }
    report.refusal = refusal;
    report.solutions = Some(solutions);

    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run_reproduce(args: &ReproduceArgs, seed: u64) -> ExitCode {
    if args.list {
        println!("{:<24} description", "id");
        for c in abel::reproduce::claims() {
            println!("{:<24} {}", c.id, c.description);
        }
        return ExitCode::SUCCESS;
    }
    let outcomes = abel::reproduce::run(seed, args.tol);
    let mut all_pass = true;
    println!("{:<24} {:<6} {:>8}  detail", "id", "status", "ms");
    for o in &outcomes {
        all_pass &= o.pass;
        println!(
            "{:<24} {:<6} {:>8}  {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.millis,
            o.detail
        );
    }
    if all_pass {
        println!("all {} claims pass", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("FAILURES present");
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ABEL_THREADS") {
        if let Ok(n) = threads.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Find(args) => run_find(args, cli.seed),
        Command::Reproduce(args) => return run_reproduce(args, cli.seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Refusal(err)) => {
            let body = match err.as_ref() {
                CertifyError::NotCertifiable(refusal) => json!({
                    "schema": CERTIFICATE_SCHEMA,
                    "certified": false,
                    "refusal": refusal,
                }),
                CertifyError::NoAdmissibleSubsequence { roots } => json!({
                    "schema": CERTIFICATE_SCHEMA,
                    "certified": false,
                    "reason": "no admissible alternating subsequence",
                    "annotated_roots": roots,
                }),
                other => json!({
                    "schema": CERTIFICATE_SCHEMA,
                    "certified": false,
                    "reason": other.to_string(),
                }),
            };
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            ExitCode::from(2)
        }
    }
}
