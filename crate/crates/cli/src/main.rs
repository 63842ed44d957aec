use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tourlink::anchor::{find_anchored_candidate, route, AnchorCertificate, RouteOutcome};
use tourlink::flow::{is_k_connected, vertex_connectivity, DigraphView, PathSystem};
use tourlink::linker::{link, HypothesisCheck, LinkOptions};
use tourlink::ordering::{check_interval_domination, local_median_order};
use tourlink::toolkit::{from_trn, generate, to_trn_with_comments, BlockInner, GenSpec, Model};
use tourlink::{oracle, Error, Tournament};

#[derive(Parser)]
#[command(name = "tourlink", version, about = "Disjoint linkages in tournaments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format for the result document.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tournament in TRN format.
    Gen(GenArgs),
    /// Compute a local median order and check it.
    Median(InArgs),
    /// Find an anchoring candidate and route permutations through it.
    Anchor(AnchorArgs),
    /// Link terminal pairs by disjoint dipaths.
    Link(LinkArgs),
    /// Vertex connectivity, exact or as a threshold test.
    Conn(ConnArgs),
    /// Run an exhaustive checker.
    Oracle(OracleArgs),
    /// Validate a path system document against a tournament.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InArgs {
    /// Tournament in TRN format.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Random,
    Transitive,
    RotationalQr,
    Blocks,
}

#[derive(Clone, Copy, ValueEnum)]
enum InnerArg {
    Random,
    Transitive,
}

impl From<InnerArg> for BlockInner {
    fn from(a: InnerArg) -> Self {
        match a {
            InnerArg::Random => BlockInner::Random,
            InnerArg::Transitive => BlockInner::Transitive,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Random)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of the dominating block (blocks model).
    #[arg(long)]
    first: Option<usize>,
    #[arg(long, value_enum, default_value_t = InnerArg::Random)]
    inner_first: InnerArg,
    #[arg(long, value_enum, default_value_t = InnerArg::Random)]
    inner_second: InnerArg,
}

#[derive(Args)]
struct AnchorArgs {
    #[command(flatten)]
    input: InArgs,
    #[arg(long)]
    k: usize,
    /// Pairing to route, as comma-separated B-side indices; defaults to identity.
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// Route every permutation, restarting from the escalated certificate if needed.
    #[arg(long)]
    all: bool,
    /// Validate every routed system with the path oracle.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct LinkArgs {
    #[command(flatten)]
    input: InArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    sources: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    sinks: Vec<usize>,
    /// Always check the connectivity and degree hypotheses first.
    #[arg(long, conflicts_with = "no_check_hypotheses")]
    check_hypotheses: bool,
    /// Never check the hypotheses.
    #[arg(long)]
    no_check_hypotheses: bool,
    /// Re-validate the result with the path oracle.
    #[arg(long)]
    verify: bool,
    /// Include the full pipeline trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct ConnArgs {
    #[command(flatten)]
    input: InArgs,
    /// Only decide whether κ ≥ K; exit 1 if not.
    #[arg(long)]
    at_least: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleCheck {
    Linked,
    KLinked,
    Anchors,
    Connectivity,
    Median,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InArgs,
    #[arg(long, value_enum)]
    check: OracleCheck,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    sources: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    sinks: Vec<usize>,
    /// Vertex limit for the path searches.
    #[arg(long, default_value_t = oracle::LINKED_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InArgs,
    /// JSON document holding a path system (a `link` result or a bare system).
    #[arg(long)]
    paths: PathBuf,
    /// Expected endpoints; default to the document's own pairs.
    #[arg(long, value_delimiter = ',')]
    sources: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    sinks: Vec<usize>,
}

/// A finished command: the document to print and the exit status.
struct Outcome {
    doc: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value, text: String) -> Self {
        Outcome { doc, text, code: 0 }
    }
}

struct Failure {
    code: u8,
    message: String,
    detail: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, detail) = match &e {
            Error::Input(_) | Error::Format { .. } | Error::Budget(_) => (2, Value::Null),
            Error::Hypothesis(r) => (3, serde_json::to_value(r).unwrap_or(Value::Null)),
            Error::Precondition { .. } => (4, Value::Null),
        };
        Failure {
            code,
            message: e.to_string(),
            detail,
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: 2,
        message,
        detail: Value::Null,
    }
}

fn load(path: &Path) -> Result<Tournament, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    from_trn(&text).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn paths_json(ps: &PathSystem) -> Value {
    serde_json::to_value(ps).expect("path systems serialize")
}

fn describe_paths(ps: &PathSystem) -> String {
    ps.paths
        .iter()
        .map(|p| {
            p.vertices()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" -> ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_gen(a: &GenArgs) -> Result<(String, u8), Failure> {
    let model = match a.model {
        ModelArg::Random => Model::Random,
        ModelArg::Transitive => Model::Transitive,
        ModelArg::RotationalQr => Model::RotationalQr,
        ModelArg::Blocks => Model::Blocks {
            first: a
                .first
                .ok_or_else(|| input_failure("--first is required for blocks".into()))?,
            inner_first: a.inner_first.into(),
            inner_second: a.inner_second.into(),
        },
    };
    let spec = GenSpec {
        model,
        n: a.n,
        seed: a.seed,
    };
    let t = generate(&spec)?;
    Ok((to_trn_with_comments(&t, &[spec.describe()]), 0))
}

fn cmd_median(a: &InArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input)?;
    let ord = local_median_order(&t, None);
    let violations = check_interval_domination(&t, ord.perm())?;
    let text = format!(
        "order: {:?}\nforward arcs: {}\nviolations: {}",
        ord.perm(),
        ord.forward_arcs(),
        violations.len()
    );
    Ok(Outcome::ok(
        json!({ "ordering": ord, "violations": violations }),
        text,
    ))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cmd_anchor(a: &AnchorArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input.input)?;
    let candidate = find_anchored_candidate(&t, a.k)?;
    let mut cert = candidate.clone();
    let mut escalated: Option<AnchorCertificate> = None;
    let perms: Vec<Vec<usize>> = if a.all {
        let mut p: Vec<usize> = (0..a.k).collect();
        let mut all = vec![p.clone()];
        while next_permutation(&mut p) {
            all.push(p.clone());
        }
        all
    } else {
        vec![a.pi.clone().unwrap_or_else(|| (0..a.k).collect())]
    };
    let mut routed = Vec::new();
    let mut failures = 0;
    let mut text = String::new();
    for pi in &perms {
        let ps = match route(&t, &cert, pi)? {
            RouteOutcome::Routed(ps) => ps,
            RouteOutcome::Escalated { certificate, .. } => {
                escalated = Some(certificate.clone());
                cert = certificate;
                match route(&t, &cert, pi)? {
                    RouteOutcome::Routed(ps) => ps,
                    RouteOutcome::Escalated { .. } => {
                        return Err(Error::Precondition {
                            step: "anchor routing".into(),
                            detail: "a domination certificate stalled".into(),
                        }
                        .into())
                    }
                }
            }
        };
        let violations = if a.verify {
            let expected: Vec<(usize, usize)> =
                (0..a.k).map(|i| (cert.a[i], cert.b[pi[i]])).collect();
            oracle::validate_path_system(&t, &expected, &ps)
        } else {
            Vec::new()
        };
        failures += usize::from(!violations.is_empty());
        text.push_str(&format!("pi = {pi:?}\n{}\n", describe_paths(&ps)));
        routed.push(json!({ "pi": pi, "paths": paths_json(&ps), "violations": violations }));
    }
    let doc = json!({
        "candidate": candidate,
        "escalated": escalated,
        "final": cert,
        "routes": routed,
    });
    text.push_str(&format!("final A = {:?}, B = {:?}", cert.a, cert.b));
    Ok(Outcome {
        doc,
        text,
        code: u8::from(failures > 0),
    })
}

fn cmd_link(a: &LinkArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input.input)?;
    if a.sources.len() != a.k || a.sinks.len() != a.k {
        return Err(input_failure(format!(
            "--k {} needs {} sources and sinks, got {} and {}",
            a.k,
            a.k,
            a.sources.len(),
            a.sinks.len()
        )));
    }
    let hypotheses = if a.check_hypotheses {
        HypothesisCheck::Always
    } else if a.no_check_hypotheses {
        HypothesisCheck::Never
    } else {
        HypothesisCheck::Auto
    };
    let (ps, trace) = link(&t, &a.sources, &a.sinks, &LinkOptions { hypotheses })?;
    for w in &trace.warnings {
        eprintln!("warning: {w}");
    }
    let mut doc = json!({ "paths": paths_json(&ps), "escalated": trace.escalated() });
    if a.verify {
        let expected: Vec<(usize, usize)> = a
            .sources
            .iter()
            .copied()
            .zip(a.sinks.iter().copied())
            .collect();
        let violations = oracle::validate_path_system(&t, &expected, &ps);
        doc["violations"] = json!(violations);
        if !violations.is_empty() {
            return Ok(Outcome {
                doc,
                text: format!("{} violation(s)", violations.len()),
                code: 4,
            });
        }
    }
    if let Some(h) = &trace.hypotheses {
        doc["hypotheses"] = json!(h);
    }
    if a.trace {
        doc["trace"] = json!(trace);
    }
    Ok(Outcome::ok(doc, describe_paths(&ps)))
}

fn cmd_conn(a: &ConnArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input.input)?;
    let view = DigraphView::new(&t);
    if let Some(k) = a.at_least {
        let ok = is_k_connected(&view, k);
        return Ok(Outcome {
            doc: json!({ "at_least": k, "holds": ok }),
            text: format!("κ ≥ {k}: {ok}"),
            code: u8::from(!ok),
        });
    }
    let c = vertex_connectivity(&view);
    let text = format!("κ = {}", c.value);
    Ok(Outcome::ok(json!(c), text))
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input.input)?;
    let (doc, text, code) = match a.check {
        OracleCheck::Linked => {
            match oracle::brute_force_linked(&t, &a.sources, &a.sinks, a.budget)? {
                Some(ps) => (
                    json!({ "linked": true, "paths": paths_json(&ps) }),
                    describe_paths(&ps),
                    0,
                ),
                None => (json!({ "linked": false }), "no linkage".into(), 1),
            }
        }
        OracleCheck::KLinked => {
            let k = a.k.ok_or_else(|| input_failure("--k is required".into()))?;
            let ok = oracle::brute_force_is_k_linked(&t, k)?;
            (
                json!({ "k": k, "k_linked": ok }),
                format!("{k}-linked: {ok}"),
                u8::from(!ok),
            )
        }
        OracleCheck::Anchors => {
            let ok = oracle::brute_force_anchors(&t, &a.sources, &a.sinks, a.budget)?;
            (
                json!({ "anchors": ok }),
                format!("anchors: {ok}"),
                u8::from(!ok),
            )
        }
        OracleCheck::Connectivity => {
            let c = oracle::brute_force_vertex_connectivity(&DigraphView::new(&t))?;
            (json!({ "connectivity": c }), format!("κ = {c}"), 0)
        }
        OracleCheck::Median => {
            let o = oracle::exact_median_order(&t)?;
            let text = format!("order: {:?}\nforward arcs: {}", o.perm(), o.forward_arcs());
            (json!({ "ordering": o }), text, 0)
        }
    };
    Ok(Outcome { doc, text, code })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let t = load(&a.input.input)?;
    let raw = std::fs::read_to_string(&a.paths)
        .map_err(|e| input_failure(format!("{}: {e}", a.paths.display())))?;
    let value: Value = serde_json::from_str(&raw)
        .map_err(|e| input_failure(format!("{}: {e}", a.paths.display())))?;
    let system = value
        .get("paths")
        .filter(|p| p.is_object())
        .unwrap_or(&value);
    let ps: PathSystem = serde_json::from_value(system.clone())
        .map_err(|e| input_failure(format!("{}: not a path system: {e}", a.paths.display())))?;
    let expected: Vec<(usize, usize)> = if a.sources.is_empty() && a.sinks.is_empty() {
        ps.pairs.clone()
    } else if a.sources.len() == a.sinks.len() {
        a.sources
            .iter()
            .copied()
            .zip(a.sinks.iter().copied())
            .collect()
    } else {
        return Err(input_failure(
            "--sources and --sinks differ in length".into(),
        ));
    };
    let violations = oracle::validate_path_system(&t, &expected, &ps);
    let text = if violations.is_empty() {
        "valid".to_string()
    } else {
        violations
            .iter()
            .map(|v| v.detail.clone())
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok(Outcome {
        code: u8::from(!violations.is_empty()),
        doc: json!({ "valid": violations.is_empty(), "violations": violations }),
        text,
    })
}

fn emit(common: &Common, body: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| input_failure(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| input_failure(format!("stdout: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if let Command::Gen(a) = &cli.command {
        let (body, code) = cmd_gen(a)?;
        emit(&cli.common, &body)?;
        return Ok(code);
    }
    let outcome = match &cli.command {
        Command::Gen(_) => unreachable!(),
        Command::Median(a) => cmd_median(a)?,
        Command::Anchor(a) => cmd_anchor(a)?,
        Command::Link(a) => cmd_link(a)?,
        Command::Conn(a) => cmd_conn(a)?,
        Command::Oracle(a) => cmd_oracle(a)?,
        Command::Verify(a) => cmd_verify(a)?,
    };
    let body = match cli.common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome.doc).expect("json")
        ),
        Format::Text => format!("{}\n", outcome.text),
    };
    emit(&cli.common, &body)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if cli.common.format == Format::Json && !f.detail.is_null() {
                println!("{}", json!({ "error": f.message, "detail": f.detail }));
            }
            ExitCode::from(f.code)
        }
    }
}
