//! Command-line front end: exact volumes, germs, L-factor series, transfer
//! factors, branching multiplicities, and the property-verification
//! driver, with JSON, CSV, or LaTeX output.

mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{Doc, Format};
use qvol::branching::{branching_multiplicity, self_associate, DominantWeight};
use qvol::cartan::{cell_volume, count_cosets_oracle, SignedPartition};
use qvol::germs::{eval_germ, germ_of_vol, GermExpansion};
use qvol::invariants::{car_lin, project_sym, transfer_factor};
use qvol::lfactors::{
    bf_unramified_check, ext_sq_lfactor, std_lfactor, tate_series, PairConvention, SatakeData,
    TruncatedSeries, UnramifiedTorusData,
};
use qvol::orbital::{check_linear_term, orbital_direct, orbital_germ};
use qvol::verify::{run_verify, Suite, VerifyConfig, VerifyReport};
use qvol::volumes::{vol_direct, vol_recur, vol_recur2, VolParams};

#[derive(Parser)]
#[command(
    name = "qvol",
    about = "Exact p-adic double-coset volumes, germ expansions, local L-factors, \
             transfer factors and branching multiplicities",
    version
)]
struct Cli {
    /// Output format for results.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Seed for randomized verification sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted volume vol_{n,alpha}(x) of the Cartan cells in a box.
    Vol(VolArgs),
    /// Germ expansion of the volume family.
    Germ(GermArgs),
    /// Volume of a single Cartan cell, optionally cross-checked by the
    /// sublattice-counting oracle.
    Cell(CellArgs),
    /// Contracted orbital sum of a profile, optionally with its germ.
    Orbital(OrbitalArgs),
    /// Truncated local L-factor series and identities.
    Lfactor(LfactorArgs),
    /// Transfer factor and invariants of a strongly regular pair.
    Transfer(TransferArgs),
    /// Branching multiplicity and self-association of a dominant weight.
    Branch(BranchArgs),
    /// Run the property-verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VolArgs {
    #[arg(short)]
    n: u32,
    #[arg(short, allow_hyphen_values = true)]
    a: i64,
    #[arg(short)]
    x: u64,
    /// Computation route: direct | recur | recur2.
    #[arg(long, default_value = "direct")]
    method: String,
}

#[derive(Args)]
struct GermArgs {
    /// Expand the volume family vol_{n,a} (the built-in sampler).
    #[arg(long)]
    vol: bool,
    #[arg(short)]
    n: u32,
    #[arg(short, allow_hyphen_values = true)]
    a: i64,
}

#[derive(Args)]
struct CellArgs {
    /// Weakly increasing entries, comma separated, e.g. 0,1,2.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Also count cosets by sublattice enumeration.
    #[arg(long)]
    oracle: bool,
    /// Residue characteristic for the oracle.
    #[arg(short, default_value_t = 3)]
    p: u64,
}

#[derive(Args)]
struct OrbitalArgs {
    /// Path to a profile JSON file: {n, N, entries: [{first, second, value}]}.
    #[arg(long)]
    profile: String,
    #[arg(short)]
    x: u64,
    /// Also compute the germ expansion and the linear-term check.
    #[arg(long)]
    germ: bool,
}

#[derive(Args)]
struct LfactorArgs {
    /// Which factor: std | extsq | tate | bf.
    mode: String,
    /// Satake parameters, comma separated rationals, e.g. 2,1/2.
    #[arg(long, allow_hyphen_values = true)]
    satake: Option<String>,
    /// Residue cardinality.
    #[arg(short, default_value = "4")]
    q: String,
    /// Character sign for std/extsq: 1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eta: i8,
    /// Character sign paired with s1 in the rank-one identity.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eta1: i8,
    /// Character sign paired with s0 in the rank-one identity.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eta0: i8,
    /// Torus data for tate: degree:sign pairs, e.g. 2:1,1:-1.
    #[arg(long, allow_hyphen_values = true)]
    torus: Option<String>,
    /// Truncation order.
    #[arg(short = 'D', default_value_t = 6)]
    order: usize,
    /// Exterior-square pair convention: ordered (i<j) | distinct (i!=j).
    #[arg(long, default_value = "ordered")]
    convention: String,
}

#[derive(Args)]
struct TransferArgs {
    /// Path to a JSON file holding the 2n x 2n matrix (rows of rationals).
    #[arg(long)]
    gamma: String,
    /// Row vector w, comma separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Prime through which valuations are read.
    #[arg(long)]
    p: u64,
    /// Characters eta0,eta1,eta2: q (quadratic) or 1 (trivial), e.g. q,1,q.
    #[arg(long)]
    signs: String,
}

#[derive(Args)]
struct BranchArgs {
    /// Weakly decreasing entries, comma separated, e.g. 1,0,0,-1.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated suite names (default: all).
    #[arg(long)]
    suites: Option<String>,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, default_value_t = 6)]
    x_max: u64,
    /// Random cases per property.
    #[arg(long, default_value_t = 20)]
    seeds: u32,
    /// Comma-separated primes for specializations.
    #[arg(long, default_value = "2,3,5")]
    primes: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match Format::parse(&cli.format) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(RunOutcome { doc, failed }) => {
            println!("{}", doc.render(format));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct RunOutcome {
    doc: Doc,
    /// Verification ran and found counterexamples.
    failed: bool,
}

impl RunOutcome {
    fn ok(doc: Doc) -> Self {
        Self { doc, failed: false }
    }
}

fn run(cli: &Cli) -> Result<RunOutcome, String> {
    match &cli.command {
        Command::Vol(args) => cmd_vol(args),
        Command::Germ(args) => cmd_germ(args),
        Command::Cell(args) => cmd_cell(args),
        Command::Orbital(args) => cmd_orbital(args),
        Command::Lfactor(args) => cmd_lfactor(args),
        Command::Transfer(args) => cmd_transfer(args),
        Command::Branch(args) => cmd_branch(args),
        Command::Verify(args) => cmd_verify(args, cli.seed),
    }
}

fn err_str(e: qvol::Error) -> String {
    e.to_string()
}

fn cmd_vol(args: &VolArgs) -> Result<RunOutcome, String> {
    let params = VolParams::new(args.n, args.a, args.x);
    let value = match args.method.as_str() {
        "direct" => vol_direct(&params),
        "recur" => vol_recur(&params),
        "recur2" => vol_recur2(&params),
        other => return Err(format!("unknown method '{other}' (direct|recur|recur2)")),
    };
    Ok(RunOutcome::ok(Doc::scalar(vec![
        (
            "params",
            json!({"n": args.n, "alpha": args.a, "x": args.x, "method": args.method}),
        ),
        ("value", Value::String(value.to_string())),
    ])))
}

fn germ_doc(germ: &GermExpansion, extra: Vec<(&str, Value)>) -> Doc {
    let terms: Vec<Value> = germ
        .terms()
        .map(|(&(a, b), c)| json!({"a": a, "b": b, "coeff": c.to_string()}))
        .collect();
    let mut json_obj = json!({
        "terms": terms,
        "validity_from": germ.validity_from(),
    });
    for (k, v) in extra {
        json_obj[k] = v;
    }
    let headers = vec!["a".to_string(), "b".to_string(), "coeff".to_string()];
    let rows = germ
        .terms()
        .map(|(&(a, b), c)| vec![a.to_string(), b.to_string(), c.to_string()])
        .collect();
    Doc {
        json: json_obj,
        headers,
        rows,
    }
}

fn cmd_germ(args: &GermArgs) -> Result<RunOutcome, String> {
    if !args.vol {
        return Err("only the volume family sampler is built in; pass --vol".into());
    }
    let germ = germ_of_vol(args.n, args.a).map_err(err_str)?;
    Ok(RunOutcome::ok(germ_doc(&germ, vec![])))
}

fn cmd_cell(args: &CellArgs) -> Result<RunOutcome, String> {
    let entries = input::parse_i64_list(&args.lambda)?;
    let lambda = SignedPartition::new(entries).map_err(err_str)?;
    let volume = cell_volume(&lambda);
    let mut pairs = vec![
        ("lambda", Value::String(lambda.to_string())),
        ("volume", Value::String(volume.to_string())),
    ];
    if args.oracle {
        // The oracle wants the minimum entry at zero; the volume is
        // invariant under the shift.
        let shifted = lambda.shifted_to_zero();
        let count = count_cosets_oracle(&shifted, args.p).map_err(err_str)?;
        pairs.push(("oracle_count", json!(count)));
        pairs.push(("p", json!(args.p)));
    }
    Ok(RunOutcome::ok(Doc::scalar(pairs)))
}

fn cmd_orbital(args: &OrbitalArgs) -> Result<RunOutcome, String> {
    let text = std::fs::read_to_string(&args.profile)
        .map_err(|e| format!("cannot read {}: {e}", args.profile))?;
    let profile = input::parse_profile(&text)?;
    let value = orbital_direct(&profile, args.x);
    let mut pairs = vec![
        ("n", json!(profile.rank())),
        ("N", json!(profile.radius())),
        ("x", json!(args.x)),
        ("value", Value::String(value.to_string())),
    ];
    if args.germ {
        let germ = orbital_germ(&profile).map_err(err_str)?;
        let terms: Vec<Value> = germ
            .terms()
            .map(|(&(a, b), c)| json!({"a": a, "b": b, "coeff": c.to_string()}))
            .collect();
        pairs.push((
            "germ",
            json!({"terms": terms, "validity_from": germ.validity_from()}),
        ));
        pairs.push((
            "linear_term_ok",
            json!(check_linear_term(&profile).map_err(err_str)?),
        ));
    }
    Ok(RunOutcome::ok(Doc::scalar(pairs)))
}

fn series_doc(series: &TruncatedSeries, extra: Vec<(&str, Value)>) -> Doc {
    let coeffs: Vec<Value> = series
        .coeffs()
        .iter()
        .map(|c| Value::String(c.to_string()))
        .collect();
    let mut json_obj = json!({ "coeffs": coeffs });
    for (k, v) in extra {
        json_obj[k] = v;
    }
    let headers = vec!["degree".to_string(), "coeff".to_string()];
    let rows = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| vec![k.to_string(), c.to_string()])
        .collect();
    Doc {
        json: json_obj,
        headers,
        rows,
    }
}

fn cmd_lfactor(args: &LfactorArgs) -> Result<RunOutcome, String> {
    let q = input::parse_rational(&args.q)?;
    let satake = |required: &str| -> Result<SatakeData, String> {
        let list = args
            .satake
            .as_ref()
            .ok_or_else(|| format!("--satake is required for {required}"))?;
        let params = input::parse_rational_list(list)?;
        SatakeData::new(params, q.clone()).map_err(err_str)
    };
    match args.mode.as_str() {
        "std" => {
            let series = std_lfactor(&satake("std")?, args.eta, args.order);
            Ok(RunOutcome::ok(series_doc(&series, vec![])))
        }
        "extsq" => {
            let convention = match args.convention.as_str() {
                "ordered" => PairConvention::Ordered,
                "distinct" => PairConvention::Distinct,
                other => return Err(format!("unknown convention '{other}'")),
            };
            let series = ext_sq_lfactor(&satake("extsq")?, args.eta, args.order, convention)
                .map_err(err_str)?;
            Ok(RunOutcome::ok(series_doc(&series, vec![])))
        }
        "tate" => {
            let torus_text = args
                .torus
                .as_ref()
                .ok_or("--torus is required for tate (e.g. 2:1,1:-1)")?;
            let torus = UnramifiedTorusData::new(input::parse_torus(torus_text)?)
                .map_err(err_str)?;
            let (direct, closed) = tate_series(&torus, args.order);
            let equal = direct == closed;
            Ok(RunOutcome::ok(series_doc(
                &direct,
                vec![("equal", json!(equal))],
            )))
        }
        "bf" => {
            let holds = bf_unramified_check(&satake("bf")?, args.eta1, args.eta0, args.order)
                .map_err(err_str)?;
            Ok(RunOutcome::ok(Doc::scalar(vec![
                ("holds", json!(holds)),
                ("order", json!(args.order)),
            ])))
        }
        other => Err(format!("unknown lfactor mode '{other}' (std|extsq|tate|bf)")),
    }
}

fn cmd_transfer(args: &TransferArgs) -> Result<RunOutcome, String> {
    let text = std::fs::read_to_string(&args.gamma)
        .map_err(|e| format!("cannot read {}: {e}", args.gamma))?;
    let gamma = input::parse_matrix(&text)?;
    let w_entries = input::parse_rational_list(&args.w)?;
    let n = w_entries.len();
    let w = qvol::invariants::MatQ::new(1, n, w_entries).map_err(err_str)?;
    let signs = input::parse_signs(&args.signs)?;
    let omega = transfer_factor(&gamma, &w, &signs, args.p).map_err(err_str)?;
    let x = project_sym(&gamma, args.p).map_err(err_str)?;
    let car: Vec<Value> = car_lin(&x)
        .map_err(err_str)?
        .iter()
        .map(|c| Value::String(c.to_string()))
        .collect();
    Ok(RunOutcome::ok(Doc::scalar(vec![
        ("omega", json!(omega)),
        ("car_lin", Value::Array(car)),
    ])))
}

fn cmd_branch(args: &BranchArgs) -> Result<RunOutcome, String> {
    let entries = input::parse_i64_list(&args.weight)?;
    let weight = DominantWeight::new(entries).map_err(err_str)?;
    let multiplicity = branching_multiplicity(&weight).map_err(err_str)?;
    let sa = self_associate(&weight).map_err(err_str)?;
    Ok(RunOutcome::ok(Doc::scalar(vec![
        ("multiplicity", json!(multiplicity)),
        ("self_associate", json!(sa)),
    ])))
}

fn cmd_verify(args: &VerifyArgs, seed: u64) -> Result<RunOutcome, String> {
    let suites = match &args.suites {
        None => Suite::all(),
        Some(list) => {
            let mut out = Vec::new();
            for name in list.split(',').filter(|s| !s.is_empty()) {
                out.push(Suite::parse(name.trim()).map_err(err_str)?);
            }
            out
        }
    };
    let primes = input::parse_u64_list(&args.primes)?;
    let config = VerifyConfig {
        suites,
        n_max: args.n_max,
        x_max: args.x_max,
        seeds: args.seeds,
        rng_seed: seed,
        primes,
    };
    let report = run_verify(&config).map_err(err_str)?;
    let failed = !report.success;
    Ok(RunOutcome {
        doc: report_doc(&report),
        failed,
    })
}

fn report_doc(report: &VerifyReport) -> Doc {
    let mut suites = serde_json::Map::new();
    let mut rows = Vec::new();
    for (name, suite) in &report.suites {
        let properties: Vec<Value> = suite
            .properties
            .iter()
            .map(|p| {
                json!({
                    "name": p.name,
                    "passed": p.passed,
                    "failed": p.failed,
                    "first_counterexample": p.first_counterexample,
                })
            })
            .collect();
        suites.insert(
            name.to_string(),
            json!({
                "passed": suite.passed,
                "failed": suite.failed,
                "counterexamples": suite.counterexamples,
                "properties": properties,
            }),
        );
        for p in &suite.properties {
            rows.push(vec![
                name.to_string(),
                p.name.clone(),
                p.passed.to_string(),
                p.failed.to_string(),
                p.first_counterexample.clone().unwrap_or_default(),
            ]);
        }
    }
    Doc {
        json: json!({"success": report.success, "suites": Value::Object(suites)}),
        headers: vec![
            "suite".into(),
            "property".into(),
            "passed".into(),
            "failed".into(),
            "first_counterexample".into(),
        ],
        rows,
    }
}
