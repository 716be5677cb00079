//! Command-line interface: compute major-index generating functions by any
//! of the independent evaluators, run identity-verification sweeps, and
//! benchmark the determinant against the hypergeometric sums.
//!
//! Exit status: 0 success, 1 verification failure or cross-method
//! disagreement, 2 invalid input, 3 resource limit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::process::ExitCode;
use std::time::Instant;

use skewmaj::elliptic;
use skewmaj::genfun;
use skewmaj::hypergeom::{self, Identity, SweepConfig};
use skewmaj::qseries::LaurentPoly;
use skewmaj::tableaux::{self, SkewShape, StaircaseSpec};
use skewmaj::Error;

const SCHEMA_VERSION: u32 = 1;

/// Seed used when neither `--seed` nor `SKEWMAJ_SEED` is given.
fn default_seed() -> u64 {
    std::env::var("SKEWMAJ_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

#[derive(Parser)]
#[command(
    name = "skewmaj",
    about = "Exact major-index generating functions of skew standard Young tableaux",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the generating function of a shape by a chosen method.
    Majgf(MajgfArgs),
    /// Run a seeded identity-verification sweep.
    Verify(VerifyArgs),
    /// Benchmark the determinant evaluator against the multi-sum formulas.
    Bench(BenchArgs),
    /// Run a quick built-in cross-check battery.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Brute-force tableau enumeration (small shapes only).
    Oracle,
    /// Determinant of reciprocal q-factorials.
    Det,
    /// Multi-dimensional hypergeometric sums (staircase specs only).
    Thm1,
    /// Expansion of the determinant along the rectangle columns.
    Laplace,
    /// Closed products for staircase offsets 0 and 1.
    Closed,
    /// Every applicable method, with an agreement check.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
    Coeffs,
}

#[derive(Args)]
struct MajgfArgs {
    /// Staircase-minus-rectangle parameters, e.g. "N=6,n=6,m=3,r=2".
    #[arg(long)]
    staircase: Option<String>,
    /// Skew shape as "lambda/mu", e.g. "6,5,4,3,2,1/3,3".
    #[arg(long)]
    shape: Option<String>,
    /// Outer partition, e.g. "2,1" (alternative to --shape).
    #[arg(long)]
    lambda: Option<String>,
    /// Inner partition, e.g. "1" (with --lambda).
    #[arg(long)]
    mu: Option<String>,
    #[arg(long, value_enum, default_value = "det")]
    method: Method,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Cell limit for the enumeration oracle.
    #[arg(long, default_value_t = tableaux::DEFAULT_CELL_LIMIT)]
    limit: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to sweep: dimension-change, whipple, inverted, symmetric,
    /// product-case, single-sum, thm2, or all. The aliases cor3, eq33,
    /// eq34, cor4, eq37 and eq38 are also accepted.
    #[arg(long, default_value = "all")]
    identity: String,
    #[arg(long, default_value_t = default_seed())]
    seed: u64,
    /// Admissible samples per grid cell (exact sweeps) or in total
    /// (numeric sweep).
    #[arg(long, default_value_t = 25)]
    trials: u64,
    /// Exponent range for sampled q-power parameters.
    #[arg(long, default_value_t = 10)]
    max_exp: i64,
    /// Grid bound for the sum dimensions m, r, s.
    #[arg(long, default_value_t = 3)]
    max_mrs: i64,
    /// Relative tolerance for the numeric (theta-function) sweep.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for sweeping multiple identities.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Number of staircase rows n.
    #[arg(short = 'n', long, default_value_t = 40)]
    rows: u64,
    /// Staircase offsets N - n to benchmark, comma separated.
    #[arg(long, default_value = "0,1,2")]
    offsets: String,
    /// Removed rectangle width m.
    #[arg(short = 'm', long, default_value_t = 2)]
    rect_width: u64,
    /// Removed rectangle height r.
    #[arg(short = 'r', long, default_value_t = 2)]
    rect_height: u64,
    /// Timing repeats; the median is reported.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Worker threads (default 1 for reproducible timing).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Majgf(args) => cmd_majgf(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit(_) => ExitCode::from(3),
                Error::Inadmissible(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// majgf
// ---------------------------------------------------------------------------

fn parse_staircase(text: &str) -> Result<StaircaseSpec, Error> {
    let mut vals = [None::<u64>; 4];
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got {part:?}")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad number in {part:?}")))?;
        let slot = match key.trim() {
            "N" => 0,
            "n" => 1,
            "m" => 2,
            "r" => 3,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown staircase key {other:?} (expected N, n, m, r)"
                )))
            }
        };
        vals[slot] = Some(value);
    }
    let [nn, n, m, r] = vals;
    let missing = |what| Error::InvalidInput(format!("missing {what} in staircase spec"));
    StaircaseSpec::new(
        nn.ok_or_else(|| missing("N"))?,
        n.ok_or_else(|| missing("n"))?,
        m.ok_or_else(|| missing("m"))?,
        r.ok_or_else(|| missing("r"))?,
    )
}

struct ShapeInput {
    shape: SkewShape,
    spec: Option<StaircaseSpec>,
}

fn parse_shape_input(args: &MajgfArgs) -> Result<ShapeInput, Error> {
    if let Some(text) = &args.staircase {
        let spec = parse_staircase(text)?;
        return Ok(ShapeInput { shape: spec.to_skew_shape(), spec: Some(spec) });
    }
    let shape = if let Some(text) = &args.shape {
        SkewShape::parse(text)?
    } else if let Some(lambda) = &args.lambda {
        let text = match &args.mu {
            Some(mu) => format!("{lambda}/{mu}"),
            None => lambda.clone(),
        };
        SkewShape::parse(&text)?
    } else {
        return Err(Error::InvalidInput(
            "one of --staircase, --shape, --lambda is required".into(),
        ));
    };
    // recognize staircase-minus-rectangle shapes so the multi-sum methods apply
    let spec = staircase_of_shape(&shape);
    Ok(ShapeInput { shape, spec })
}

fn staircase_of_shape(shape: &SkewShape) -> Option<StaircaseSpec> {
    let lambda = shape.lambda();
    let mu = shape.mu();
    if lambda.is_empty() {
        return StaircaseSpec::new(0, 0, 0, 0).ok();
    }
    let nn = lambda[0];
    let n = lambda.len() as u64;
    for (i, &l) in lambda.iter().enumerate() {
        if l != nn - i as u64 {
            return None;
        }
    }
    let r = mu.iter().filter(|&&m| m > 0).count() as u64;
    let m = if r == 0 { 0 } else { mu[0] };
    if mu.iter().take(r as usize).any(|&x| x != m) {
        return None;
    }
    StaircaseSpec::new(nn, n, m, r).ok()
}

#[derive(Serialize)]
struct MajgfReport {
    schema_version: u32,
    shape: String,
    methods: Vec<MethodResult>,
    agreement: Option<bool>,
    syt_count: String,
}

#[derive(Serialize)]
struct MethodResult {
    method: String,
    polynomial: LaurentPoly,
}

fn cmd_majgf(args: &MajgfArgs) -> Result<ExitCode, Error> {
    let input = parse_shape_input(args)?;
    let shape = &input.shape;
    let mut results: Vec<MethodResult> = Vec::new();
    let wants = |m: Method| args.method == m || args.method == Method::All;
    let need_spec = || {
        input.spec.ok_or_else(|| {
            Error::InvalidInput(format!(
                "method requires a staircase-minus-rectangle shape, got {shape}"
            ))
        })
    };

    if wants(Method::Oracle) {
        match tableaux::maj_gf_oracle_with_limit(shape, args.limit) {
            Ok(gf) => results.push(MethodResult { method: "oracle".into(), polynomial: gf }),
            Err(e @ Error::ResourceLimit(_)) if args.method == Method::All => {
                eprintln!("note: skipping oracle: {e}");
            }
            Err(e) => return Err(e),
        }
    }
    if wants(Method::Det) {
        results.push(MethodResult {
            method: "det".into(),
            polynomial: genfun::det_majgf(shape)?,
        });
    }
    if wants(Method::Thm1) {
        match need_spec() {
            Ok(spec) => results.push(MethodResult {
                method: "thm1".into(),
                polynomial: genfun::staircase_gf(&spec)?,
            }),
            Err(e) if args.method == Method::All => eprintln!("note: skipping thm1: {e}"),
            Err(e) => return Err(e),
        }
    }
    if wants(Method::Laplace) {
        match need_spec() {
            Ok(spec) => results.push(MethodResult {
                method: "laplace".into(),
                polynomial: genfun::laplace_sum(&spec)?.as_polynomial()?,
            }),
            Err(e) if args.method == Method::All => eprintln!("note: skipping laplace: {e}"),
            Err(e) => return Err(e),
        }
    }
    if wants(Method::Closed) {
        match need_spec() {
            Ok(spec) => {
                let (n, m, r) = (spec.rows, spec.rect_width, spec.rect_height);
                let gf = match spec.offset() {
                    0 => Some(genfun::closed_staircase(n, m, r)?),
                    1 => Some(genfun::closed_staircase_plus1(n, m, r)?),
                    _ if args.method == Method::All => None,
                    _ => {
                        return Err(Error::InvalidInput(
                            "closed products cover staircase offsets 0 and 1 only".into(),
                        ))
                    }
                };
                if let Some(gf) = gf {
                    results.push(MethodResult { method: "closed".into(), polynomial: gf });
                }
            }
            Err(e) if args.method == Method::All => eprintln!("note: skipping closed: {e}"),
            Err(e) => return Err(e),
        }
    }

    let agreement = if args.method == Method::All {
        Some(results.windows(2).all(|w| w[0].polynomial == w[1].polynomial))
    } else {
        None
    };
    let gf = &results
        .first()
        .ok_or_else(|| Error::InvalidInput("no applicable method".into()))?
        .polynomial;
    let syt_count = gf.eval_one().to_string();

    match args.format {
        Format::Text => {
            for r in &results {
                if results.len() > 1 {
                    println!("{:>8}: {}", r.method, r.polynomial.to_text());
                } else {
                    println!("{}", r.polynomial.to_text());
                }
            }
            if let Some(ok) = agreement {
                println!("agreement: {}", if ok { "all methods match" } else { "MISMATCH" });
            }
        }
        Format::Latex => {
            for r in &results {
                println!("{}", r.polynomial.to_latex());
            }
        }
        Format::Coeffs => {
            for (i, c) in gf.coeffs().iter().enumerate() {
                println!("{}\t{}", gf.min_exponent() + i as i64, c);
            }
        }
        Format::Json => {
            let report = MajgfReport {
                schema_version: SCHEMA_VERSION,
                shape: shape.to_string(),
                methods: results,
                agreement,
                syt_count,
            };
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if report.agreement == Some(false) {
                return Ok(ExitCode::from(1));
            }
            return Ok(ExitCode::SUCCESS);
        }
    }
    if agreement == Some(false) {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn identities_for(selector: &str) -> Result<(Vec<Identity>, bool), Error> {
    // (exact identities, include numeric theta sweep)
    let all = (Identity::ALL.to_vec(), true);
    Ok(match selector {
        "all" => all,
        "thm2" | "elliptic" => (Vec::new(), true),
        "dimension-change" | "dimension_change" | "cor3" => {
            (vec![Identity::DimensionChange], false)
        }
        "whipple" | "eq33" => (vec![Identity::Whipple], false),
        "inverted" | "eq34" => (vec![Identity::Inverted], false),
        "symmetric" | "cor4" => (vec![Identity::SymmetricB, Identity::SymmetricC], false),
        "product-case" | "product_case" | "eq37" => (vec![Identity::ProductCase], false),
        "single-sum" | "single_sum" | "eq38" => {
            (vec![Identity::SingleSumB, Identity::SingleSumC], false)
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown identity {other:?}"
            )))
        }
    })
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    seed: u64,
    trials: u64,
    sweeps: Vec<hypergeom::SweepOutcome>,
    theta_sweep: Option<elliptic::Thm2SweepOutcome>,
    all_pass: bool,
}

fn run_pool<T: Send, R: Send>(
    items: Vec<T>,
    workers: usize,
    f: impl Fn(T) -> R + Sync,
) -> Vec<R> {
    if workers <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let mut results: Vec<Option<R>> = Vec::new();
    results.resize_with(items.len(), || None);
    let queue = std::sync::Mutex::new(items.into_iter().enumerate().collect::<Vec<_>>());
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let Some((idx, item)) = queue.lock().unwrap().pop() else {
                    return;
                };
                let out = f(item);
                slots.lock().unwrap()[idx] = Some(out);
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let (identities, run_theta) = identities_for(args.identity.as_str())?;
    let cfg = SweepConfig {
        seed: args.seed,
        trials: args.trials,
        max_exp: args.max_exp,
        max_mrs: args.max_mrs,
        numeric_checks: 3,
    };
    let sweeps_res = run_pool(identities, args.workers, |id| hypergeom::sweep(id, &cfg));
    let mut sweeps = Vec::new();
    for s in sweeps_res {
        sweeps.push(s?);
    }
    let theta_sweep = if run_theta {
        Some(elliptic::thm2_sweep(args.seed, args.trials, args.tolerance)?)
    } else {
        None
    };
    let all_pass = sweeps.iter().all(|s| s.all_equal)
        && theta_sweep.as_ref().map_or(true, |t| t.all_pass);

    match args.format {
        Format::Json => {
            let out = VerifyOutput {
                schema_version: SCHEMA_VERSION,
                seed: args.seed,
                trials: args.trials,
                sweeps,
                theta_sweep,
                all_pass,
            };
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        _ => {
            for s in &sweeps {
                println!(
                    "{:>16}: {} over {} cells, {} samples ({} rejected), max numeric err {:.2e}",
                    s.identity,
                    if s.all_equal { "pass" } else { "FAIL" },
                    s.cells,
                    s.samples,
                    s.rejected,
                    s.max_numeric_error,
                );
                for f in &s.failures {
                    println!("    failing parameters: {:?}", f.params);
                    if let (Some(l), Some(r)) = (&f.lhs, &f.rhs) {
                        println!("    lhs: {l}");
                        println!("    rhs: {r}");
                    }
                }
            }
            if let Some(t) = &theta_sweep {
                println!(
                    "{:>16}: {} over {} samples ({} rejected), max relative err {:.2e}",
                    "theta-transform",
                    if t.all_pass { "pass" } else { "FAIL" },
                    t.samples,
                    t.rejected,
                    t.max_relative_error,
                );
                for f in &t.failures {
                    println!("    failing sample {}: rel err {:?}", f.sample, f.relative_error);
                }
            }
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BenchOutput {
    schema_version: u32,
    rows: Vec<BenchRow>,
    all_match: bool,
}

#[derive(Serialize)]
struct BenchRow {
    spec: String,
    cells: usize,
    r#match: bool,
    timing: BenchTiming,
}

#[derive(Serialize)]
struct BenchTiming {
    det_ms: f64,
    thm1_ms: f64,
    speedup: f64,
}

fn median_ms(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode, Error> {
    let offsets: Vec<u64> = args
        .offsets
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad offset {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let specs: Vec<StaircaseSpec> = offsets
        .iter()
        .map(|&off| {
            StaircaseSpec::new(args.rows + off, args.rows, args.rect_width, args.rect_height)
        })
        .collect::<Result<_, _>>()?;

    let bench_one = |spec: StaircaseSpec| -> Result<BenchRow, Error> {
        let shape = spec.to_skew_shape();
        let mut det_ms = Vec::new();
        let mut thm1_ms = Vec::new();
        let mut det_form = None;
        let mut thm1_form = None;
        for _ in 0..args.repeats.max(1) {
            let t = Instant::now();
            det_form = Some(genfun::det_majgf_factored(&shape)?);
            det_ms.push(t.elapsed().as_secs_f64() * 1e3);
            let t = Instant::now();
            thm1_form = Some(genfun::staircase_gf_factored(&spec)?);
            thm1_ms.push(t.elapsed().as_secs_f64() * 1e3);
        }
        let det_form = det_form.unwrap();
        let thm1_form = thm1_form.unwrap();
        let matches = det_form.eq_exact(&thm1_form)?;
        let det = median_ms(&mut det_ms);
        let thm1 = median_ms(&mut thm1_ms);
        Ok(BenchRow {
            spec: spec.to_string(),
            cells: spec.cell_count(),
            r#match: matches,
            timing: BenchTiming { det_ms: det, thm1_ms: thm1, speedup: det / thm1 },
        })
    };

    let rows_res = run_pool(specs, args.workers, bench_one);
    let mut rows = Vec::new();
    for r in rows_res {
        rows.push(r?);
    }
    let all_match = rows.iter().all(|r| r.r#match);

    match args.format {
        Format::Json => {
            let out = BenchOutput { schema_version: SCHEMA_VERSION, rows, all_match };
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        _ => {
            println!(
                "{:<24} {:>8} {:>12} {:>12} {:>10}  match",
                "spec", "cells", "det (ms)", "thm1 (ms)", "speedup"
            );
            for r in &rows {
                println!(
                    "{:<24} {:>8} {:>12.1} {:>12.3} {:>10.1}  {}",
                    r.spec,
                    r.cells,
                    r.timing.det_ms,
                    r.timing.thm1_ms,
                    r.timing.speedup,
                    if r.r#match { "yes" } else { "NO" }
                );
            }
        }
    }
    if !all_match {
        eprintln!("error: evaluators disagree");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

fn cmd_selftest() -> Result<ExitCode, Error> {
    let mut pass = true;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "pass" } else { "FAIL" });
        pass &= ok;
    };

    let shape = SkewShape::parse("4,3,2/1")?;
    let oracle = tableaux::maj_gf_oracle(&shape)?;
    check("oracle = det on (4,3,2)/(1)", oracle == genfun::det_majgf(&shape)?);

    let spec = StaircaseSpec::new(6, 6, 3, 2)?;
    let det = genfun::det_majgf(&spec.to_skew_shape())?;
    check("det = thm1 on N=6,n=6,m=3,r=2", det == genfun::staircase_gf(&spec)?);
    check(
        "det = closed product on N=6,n=6,m=3,r=2",
        det == genfun::closed_staircase(6, 3, 2)?,
    );
    check(
        "det = laplace sum on N=6,n=6,m=3,r=2",
        genfun::laplace_sum(&spec)?.as_polynomial()? == det,
    );

    let cfg = SweepConfig { trials: 2, max_mrs: 2, ..Default::default() };
    for id in Identity::ALL {
        let sweep = hypergeom::sweep(id, &cfg)?;
        check(&format!("identity sweep: {}", id.name()), sweep.all_equal);
    }
    let theta = elliptic::thm2_sweep(default_seed(), 10, 1e-8)?;
    check("theta transformation (10 samples)", theta.all_pass);
    let (done, worst) = elliptic::p0_crosscheck(default_seed(), 5, 1e-10)?;
    check(
        &format!("theta p=0 vs exact ({done} samples, worst {worst:.2e})"),
        worst <= 1e-10,
    );

    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
