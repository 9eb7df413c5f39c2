//! Command-line front end for the exact elliptic-curve arithmetic library.
//!
//! Commands parse series expressions in the same grammar the library prints,
//! so every reported value can be fed back in. All randomness is seeded and
//! the seed is echoed, so failures replay exactly. Exit code 0 means every
//! requested check passed; 1 means a check failed; 2 means the request
//! itself could not be carried out.

mod parser;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde_json::json;

use puiseux_elliptic::{
    points_agree, rat, reduce_curve, reduce_point, reduced_points_agree, reduction_type, run_suite,
    sample, ClassificationReport, CurvePoint, ExecMode, MinimalCurve, PrecisionConfig,
    PuiseuxNumber, QuotientSetting, Rat, Real, ReductionType, SuiteConfig, SuiteId, YBranch,
};

use parser::{parse_point, parse_series, PointArg};

const WINDOW_ENV: &str = "PEC_WINDOW";
const DEFAULT_WINDOW: u32 = 6;

#[derive(Parser)]
#[command(
    name = "pec",
    about = "Exact arithmetic on y^2 = x(x+1)(x+eps) over truncated Puiseux series",
    after_help = "Series are written in the grammar the tool prints, e.g. \
\"1/2 + 3*t - t^(5/2)\" or \"t + O(t^4)\". Points are \"O\", \"(x, y)\", or \
\"(x, +)\" / \"(x, -)\" to lift an abscissa through the curve equation. \
The PEC_WINDOW environment variable sets the relative precision window in \
powers of t (default 6). Cost grows quadratically with the window, so \
torsion chains and valuation checks run at a narrow window unless \
PEC_WINDOW is set explicitly."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the quotient by the infinitesimal subgroup, full or truncated
    Classify(ClassifyArgs),
    /// Run a verification suite over sampled curves, or focused on one curve
    Verify(VerifyArgs),
    /// Print the bounding torsion chain T_4, T_8, ... of a curve
    Torsion(TorsionArgs),
    /// Reduce a point to the residue curve
    Reduce(ReduceArgs),
    /// Add two points with the exact group law
    Add(AddArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Curve parameter, a series with 0 < eps < 1
    #[arg(long)]
    epsilon: String,
    /// Truncate at the point lifted from this abscissa instead of the full group
    #[arg(long)]
    trunc_x: Option<String>,
    /// Ordinate half for the truncation lift: + or -
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    branch: String,
    /// Torsion chain depth reported alongside the classification
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: valuation-axioms, group-law, reduction-hom, torsion-chain,
    /// fstar, remminus, classification-table
    suite: String,
    /// Pin the suite to this curve instead of sampling curves per trial
    #[arg(long)]
    epsilon: Option<String>,
    /// Torsion chain depth (torsion-chain only)
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Level of the circle-map well-definedness check (fstar only)
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Number of seeded trials
    #[arg(long, default_value_t = 16)]
    trials: u32,
    /// Root seed; each trial derives its own generator from (seed, index)
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Emit a JSON summary instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TorsionArgs {
    /// Curve parameter, a series with 0 < eps < 1
    #[arg(long)]
    epsilon: String,
    /// Deepest chain entry, T_{2^depth}
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    /// Curve parameter, a series with 0 < eps < 1
    #[arg(long)]
    epsilon: String,
    /// The point: O, (x, y), or (x, +) / (x, -)
    point: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AddArgs {
    /// Curve parameter, a series with 0 < eps < 1
    #[arg(long)]
    epsilon: String,
    /// First summand: O, (x, y), or (x, +) / (x, -)
    p: String,
    /// Second summand
    q: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

enum CliError {
    Parse { what: &'static str, err: parser::ParseError },
    Lib(puiseux_elliptic::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { what, err } => write!(f, "{what}: {err}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<puiseux_elliptic::Error> for CliError {
    fn from(e: puiseux_elliptic::Error) -> Self {
        CliError::Lib(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let wants_json = match &cli.cmd {
        Cmd::Classify(a) => a.json,
        Cmd::Verify(a) => a.json,
        Cmd::Torsion(a) => a.json,
        Cmd::Reduce(a) => a.json,
        Cmd::Add(a) => a.json,
    };
    let outcome = precision_from_env().and_then(|prec| match cli.cmd {
        Cmd::Classify(a) => cmd_classify(&a, &prec),
        Cmd::Verify(a) => cmd_verify(&a, &prec),
        Cmd::Torsion(a) => cmd_torsion(&a, &prec),
        Cmd::Reduce(a) => cmd_reduce(&a, &prec),
        Cmd::Add(a) => cmd_add(&a, &prec),
    });
    match outcome {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::from(1),
        Err(e) => {
            if wants_json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}

/// Precision policy for one invocation. Series cost grows quadratically
/// with the window, so checks that only read leading behaviour run narrow
/// by default; an explicit window widens everything.
#[derive(Clone, Copy)]
struct Precision {
    cfg: PrecisionConfig,
    explicit: bool,
}

impl Precision {
    fn general(&self) -> PrecisionConfig {
        self.cfg
    }

    fn narrow(&self) -> PrecisionConfig {
        if self.explicit {
            self.cfg
        } else {
            PrecisionConfig {
                window: 2,
                ..self.cfg
            }
        }
    }
}

fn precision_from_env() -> Result<Precision, CliError> {
    let (window, explicit) = match std::env::var(WINDOW_ENV) {
        Ok(s) => {
            let w = s
                .trim()
                .parse::<u32>()
                .ok()
                .filter(|w| *w > 0)
                .ok_or_else(|| {
                    usage(format!("{WINDOW_ENV} must be a positive integer, got {s:?}"))
                })?;
            (w, true)
        }
        Err(std::env::VarError::NotPresent) => (DEFAULT_WINDOW, false),
        Err(std::env::VarError::NotUnicode(_)) => {
            return Err(usage(format!("{WINDOW_ENV} is not valid unicode")))
        }
    };
    Ok(Precision {
        cfg: PrecisionConfig {
            window,
            ..PrecisionConfig::default()
        },
        explicit,
    })
}

fn default_mode() -> ExecMode {
    if cfg!(feature = "parallel") {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    }
}

fn parse_epsilon(text: &str, cfg: &PrecisionConfig) -> Result<PuiseuxNumber, CliError> {
    parse_series(text, cfg).map_err(|err| CliError::Parse { what: "--epsilon", err })
}

fn build_curve(text: &str, cfg: &PrecisionConfig) -> Result<MinimalCurve, CliError> {
    let eps = parse_epsilon(text, cfg)?;
    MinimalCurve::new(eps, *cfg).map_err(CliError::Lib)
}

fn parse_branch(text: &str) -> Result<YBranch, CliError> {
    match text {
        "+" => Ok(YBranch::Plus),
        "-" => Ok(YBranch::Minus),
        other => Err(usage(format!("--branch must be + or -, got {other:?}"))),
    }
}

fn resolve_point(
    curve: &MinimalCurve,
    text: &str,
    what: &'static str,
    cfg: &PrecisionConfig,
) -> Result<CurvePoint, CliError> {
    let arg = parse_point(text, cfg).map_err(|err| CliError::Parse { what, err })?;
    match arg {
        PointArg::Infinity => Ok(CurvePoint::Infinity),
        PointArg::Lift(x, branch) => curve.point_from_x(x, branch).map_err(CliError::Lib),
        PointArg::Coords(x, y) => {
            let p = CurvePoint::affine(x, y);
            if curve.contains(&p) {
                Ok(p)
            } else {
                Err(usage(format!("{what} does not satisfy the curve equation")))
            }
        }
    }
}

fn cmd_classify(a: &ClassifyArgs, prec: &Precision) -> Result<bool, CliError> {
    let cfg = prec.general();
    let curve = build_curve(&a.epsilon, &cfg)?;
    let setting = match &a.trunc_x {
        None => QuotientSetting::full(&curve)?,
        Some(tx) => {
            let x = parse_series(tx, &cfg)
                .map_err(|err| CliError::Parse { what: "--trunc-x", err })?;
            let s = curve.point_from_x(x, parse_branch(&a.branch)?)?;
            QuotientSetting::truncated(&curve, s)?
        }
    };
    let report = ClassificationReport::build(&setting, a.depth)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        let based = if report.one_based { "1-based" } else { "non-1-based" };
        println!("{}, {}, {}", report.reduction_type, based, report.internality);
        println!("case: {}", report.case_label);
        println!("scope: {}", report.scope);
        if let Some(tx) = &report.trunc_x {
            println!("truncation abscissa: {tx}");
        }
        println!("witness: {}", report.witness);
        if !report.torsion_valuations.is_empty() {
            println!("torsion valuations: [{}]", report.torsion_valuations.join(","));
        }
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    Ok(true)
}

fn cmd_torsion(a: &TorsionArgs, prec: &Precision) -> Result<bool, CliError> {
    // Chains deepen the exponent grid per layer, so they run narrow unless
    // the user widens the window explicitly.
    let curve = build_curve(&a.epsilon, &prec.narrow())?;
    let rt = reduction_type(&curve)?;
    let chain = curve.bounding_torsion_chain(a.depth)?;
    let rows: Vec<(String, &CurvePoint, String)> = chain
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = p
                .x()
                .and_then(|x| x.valuation())
                .map(|v| v.to_string())
                .unwrap_or_else(|| "indeterminate".to_string());
            (format!("T_{}", 1u64 << (i as u32 + 2)), p, v)
        })
        .collect();
    if a.json {
        let chain_json: Vec<_> = rows
            .iter()
            .map(|(name, p, v)| {
                json!({
                    "order": name,
                    "x": p.x().map(|x| x.to_string()),
                    "y": p.y().map(|y| y.to_string()),
                    "x_valuation": v,
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "epsilon": curve.epsilon().to_string(),
                "reduction": rt.label(),
                "depth": a.depth,
                "chain": chain_json,
            })
        );
    } else {
        println!("epsilon {}, reduction {}", curve.epsilon(), rt.label());
        for (name, p, v) in &rows {
            println!("{name}: v(x) = {v}, point {p}");
        }
    }
    Ok(true)
}

fn cmd_reduce(a: &ReduceArgs, prec: &Precision) -> Result<bool, CliError> {
    let cfg = prec.general();
    let curve = build_curve(&a.epsilon, &cfg)?;
    let rc = reduce_curve(&curve)?;
    let p = resolve_point(&curve, &a.point, "point", &cfg)?;
    let rp = reduce_point(&p)?;
    let smooth = !rc.is_node(&rp);
    if a.json {
        println!(
            "{}",
            json!({
                "epsilon": curve.epsilon().to_string(),
                "point": p.to_string(),
                "reduced": rp.to_string(),
                "smooth": smooth,
            })
        );
    } else {
        println!("point: {p}");
        println!("reduced: {rp}");
        println!("smooth: {}", if smooth { "yes" } else { "no (the node)" });
    }
    Ok(true)
}

fn cmd_add(a: &AddArgs, prec: &Precision) -> Result<bool, CliError> {
    let cfg = prec.general();
    let curve = build_curve(&a.epsilon, &cfg)?;
    let p = resolve_point(&curve, &a.p, "p", &cfg)?;
    let q = resolve_point(&curve, &a.q, "q", &cfg)?;
    let sum = curve.add_points(&p, &q)?;
    if a.json {
        println!(
            "{}",
            json!({
                "epsilon": curve.epsilon().to_string(),
                "p": p.to_string(),
                "q": q.to_string(),
                "sum": sum.to_string(),
            })
        );
    } else {
        println!("{sum}");
    }
    Ok(true)
}

fn cmd_verify(a: &VerifyArgs, prec: &Precision) -> Result<bool, CliError> {
    let suite: SuiteId = a
        .suite
        .parse()
        .map_err(|e: puiseux_elliptic::Error| CliError::Lib(e))?;
    let mut valuations: Option<Vec<String>> = None;
    let failures = match &a.epsilon {
        None => {
            let config = SuiteConfig {
                trials: a.trials,
                seed: a.seed,
                mode: default_mode(),
                precision: prec.general(),
            };
            run_suite(suite, &config).failures
        }
        Some(text) => {
            let eps = parse_epsilon(text, &prec.general())?;
            match suite {
                SuiteId::TorsionChain => {
                    let (vals, fails) = focused_torsion(&eps, prec, a.depth)?;
                    valuations = Some(vals);
                    fails
                }
                SuiteId::GroupLaw => focused_group_law(&eps, prec, a.trials, a.seed)?,
                SuiteId::ReductionHom => focused_reduction_hom(&eps, prec, a.trials, a.seed)?,
                SuiteId::RemMinus => focused_remminus(&eps, prec, a.trials, a.seed)?,
                SuiteId::FStar => focused_fstar(&eps, prec, a.level, a.trials, a.seed)?,
                SuiteId::ValuationAxioms | SuiteId::ClassificationTable => {
                    return Err(usage(format!(
                        "suite {} samples its own inputs; drop --epsilon",
                        suite.label()
                    )));
                }
            }
        }
    };
    let passed = failures.is_empty();
    if a.json {
        println!(
            "{}",
            json!({
                "suite": suite.label(),
                "scope": if a.epsilon.is_some() { "focused" } else { "sampled" },
                "epsilon": a.epsilon,
                "trials": a.trials,
                "seed": a.seed,
                "depth": (suite == SuiteId::TorsionChain).then_some(a.depth),
                "level": (suite == SuiteId::FStar).then_some(a.level),
                "valuations": valuations,
                "passed": passed,
                "failures": failures,
            })
        );
    } else {
        for f in &failures {
            println!("counterexample: {f}");
        }
        let verdict = if passed { "pass" } else { "FAIL" };
        match valuations {
            Some(vals) => println!("valuations [{}], {verdict}", vals.join(",")),
            None => println!("{verdict}"),
        }
    }
    Ok(passed)
}

/// Widens the window so that chord cancellations up to `span` powers of t
/// stay visible; below that the surviving term would sit past the horizon.
fn window_for_span(cfg: &PrecisionConfig, span: &Rat) -> PrecisionConfig {
    let needed = u32::try_from(span.ceil().to_integer()).unwrap_or(u32::MAX).saturating_add(2);
    PrecisionConfig {
        window: cfg.window.max(needed),
        ..*cfg
    }
}

fn split_valuation(curve: &MinimalCurve) -> Result<Rat, CliError> {
    let rt = reduction_type(curve)?;
    if rt != ReductionType::SplitMultiplicative {
        return Err(usage(format!(
            "this check concerns split multiplicative reduction; epsilon {} reduces {}",
            curve.epsilon(),
            rt.label()
        )));
    }
    Ok(curve
        .epsilon()
        .valuation()
        .expect("split epsilon has positive valuation")
        .clone())
}

/// Chain valuation law: doubling walks the chain back down, and the
/// abscissa valuation halves per layer in the split case and stays at
/// zero in the bounded cases.
fn focused_torsion(
    eps: &PuiseuxNumber,
    prec: &Precision,
    depth: u32,
) -> Result<(Vec<String>, Vec<String>), CliError> {
    let curve = MinimalCurve::new(eps.clone(), prec.narrow())?;
    let rt = reduction_type(&curve)?;
    let veps = curve.epsilon().valuation().cloned();
    let chain = curve.bounding_torsion_chain(depth)?;
    let mut vals = Vec::new();
    let mut fails = Vec::new();
    let mut prev = curve.t2();
    for (i, p) in chain.iter().enumerate() {
        let k = i as u32 + 2;
        if !curve.contains(p) {
            fails.push(format!("T_{} is off the curve: {p}", 1u64 << k));
        }
        match curve.double_point(p) {
            Ok(d) if points_agree(&d, &prev) => {}
            Ok(d) => fails.push(format!(
                "doubling T_{} gave {d}, expected {prev}",
                1u64 << k
            )),
            Err(e) => fails.push(format!("doubling T_{} failed: {e}", 1u64 << k)),
        }
        let expected = match (&rt, &veps) {
            (ReductionType::SplitMultiplicative, Some(v)) => v * &rat(1, 2).pow(k as i32 - 1),
            _ => rat(0, 1),
        };
        match p.x().and_then(|x| x.valuation()) {
            Some(v) if *v == expected => vals.push(v.to_string()),
            Some(v) => {
                fails.push(format!(
                    "v(x) of T_{} is {v}, expected {expected}",
                    1u64 << k
                ));
                vals.push(v.to_string());
            }
            None => {
                fails.push(format!("v(x) of T_{} is indeterminate", 1u64 << k));
                vals.push("indeterminate".to_string());
            }
        }
        prev = p.clone();
    }
    Ok((vals, fails))
}

/// Closure, commutativity, inverses and associativity on one curve, with
/// abscissas drawn to cover the regimes relevant to its reduction type.
fn focused_group_law(
    eps: &PuiseuxNumber,
    prec: &Precision,
    trials: u32,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    let probe = MinimalCurve::new(eps.clone(), prec.narrow())?;
    let rt = reduction_type(&probe)?;
    let veps = probe.epsilon().valuation().cloned();
    // Split-regime chords can cancel to twice v(eps) before the surviving
    // term shows.
    let cfg = match &veps {
        Some(v) if rt == ReductionType::SplitMultiplicative => {
            window_for_span(&prec.narrow(), &(v + v))
        }
        _ => prec.narrow(),
    };
    let curve = MinimalCurve::new(eps.clone(), cfg)?;
    let mut fails = Vec::new();
    for i in 0..trials {
        let mut rng = sample::trial_rng(seed, i);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<CurvePoint, CliError> {
            let branch = if rng.gen_bool(0.5) { YBranch::Plus } else { YBranch::Minus };
            let x = match (&rt, &veps) {
                (ReductionType::SplitMultiplicative, Some(v)) => match rng.gen_range(0..3) {
                    0 => sample::far_abscissa(rng),
                    1 => sample::interior_abscissa(rng, v),
                    _ => sample::deep_abscissa(rng, curve.epsilon()),
                },
                _ => {
                    if rng.gen_bool(0.5) {
                        sample::far_abscissa(rng)
                    } else {
                        PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, true))
                    }
                }
            };
            curve.point_from_x(x, branch).map_err(CliError::Lib)
        };
        let trial = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Option<String>, CliError> {
            let p = pick(rng)?;
            let q = pick(rng)?;
            let r = pick(rng)?;
            let pq = curve.add_points(&p, &q)?;
            if !curve.contains(&pq) {
                return Ok(Some(format!("sum left the curve: P={p} Q={q}")));
            }
            if !points_agree(&pq, &curve.add_points(&q, &p)?) {
                return Ok(Some(format!("addition not commutative: P={p} Q={q}")));
            }
            if !curve.add_points(&p, &p.neg())?.is_infinity() {
                return Ok(Some(format!("P plus its negative missed O: P={p}")));
            }
            let left = curve.add_points(&pq, &r)?;
            let right = curve.add_points(&p, &curve.add_points(&q, &r)?)?;
            if !points_agree(&left, &right) {
                return Ok(Some(format!(
                    "addition not associative: P={p} Q={q} R={r}"
                )));
            }
            Ok(None)
        };
        match trial(&mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => fails.push(format!("trial {i}: {msg}")),
            Err(e) => fails.push(format!("trial {i}: unexpected error: {e}")),
        }
    }
    Ok(fails)
}

/// Reduction is a homomorphism on the subgroup of points with smooth image:
/// reduce(P + Q) equals reduce(P) + reduce(Q) on the residue curve.
fn focused_reduction_hom(
    eps: &PuiseuxNumber,
    prec: &Precision,
    trials: u32,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    let curve = MinimalCurve::new(eps.clone(), prec.general())?;
    let rc = reduce_curve(&curve)?;
    let mut fails = Vec::new();
    for i in 0..trials {
        let mut rng = sample::trial_rng(seed, i);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<CurvePoint, CliError> {
            let branch = if rng.gen_bool(0.5) { YBranch::Plus } else { YBranch::Minus };
            let x = if rng.gen_bool(0.5) {
                sample::far_abscissa(rng)
            } else {
                PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, true))
            };
            curve.point_from_x(x, branch).map_err(CliError::Lib)
        };
        let trial = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Option<String>, CliError> {
            let p = pick(rng)?;
            let q = pick(rng)?;
            let rp = reduce_point(&p)?;
            let rq = reduce_point(&q)?;
            if rc.is_node(&rp) || rc.is_node(&rq) {
                return Ok(None);
            }
            let lhs = reduce_point(&curve.add_points(&p, &q)?)?;
            let rhs = rc.add_points(&rp, &rq)?;
            if reduced_points_agree(&lhs, &rhs) {
                Ok(None)
            } else {
                Ok(Some(format!(
                    "reduce(P+Q) = {lhs} but reduce(P)+reduce(Q) = {rhs}: P={p} Q={q}"
                )))
            }
        };
        match trial(&mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => fails.push(format!("trial {i}: {msg}")),
            Err(e) => fails.push(format!("trial {i}: unexpected error: {e}")),
        }
    }
    Ok(fails)
}

/// Difference valuation law on a split curve: for same-branch interior
/// points, v(x of P - Q) is the spread |v(x_P) - v(x_Q)|.
fn focused_remminus(
    eps: &PuiseuxNumber,
    prec: &Precision,
    trials: u32,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    let probe = MinimalCurve::new(eps.clone(), prec.narrow())?;
    let veps = split_valuation(&probe)?;
    let cfg = window_for_span(&prec.narrow(), &veps);
    let curve = MinimalCurve::new(eps.clone(), cfg)?;
    let mut fails = Vec::new();
    for i in 0..trials {
        let mut rng = sample::trial_rng(seed, i);
        let a1 = rng.gen_range(1..=15i64);
        let mut a2 = rng.gen_range(1..=15i64);
        if a2 == a1 {
            a2 = if a1 == 15 { 1 } else { a1 + 1 };
        }
        let mk = |a: i64, rng: &mut rand_chacha::ChaCha8Rng| {
            curve.point_from_x(
                PuiseuxNumber::monomial(
                    Real::from_rat(sample::small_positive_rat(rng)),
                    &rat(a, 16) * &veps,
                ),
                YBranch::Plus,
            )
        };
        let trial = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Option<String>, CliError> {
            let p = mk(a1, rng)?;
            let q = mk(a2, rng)?;
            let d = curve.sub_points(&p, &q)?;
            let expected = &rat((a1 - a2).abs(), 16) * &veps;
            match d.x().and_then(|x| x.valuation()) {
                Some(v) if *v == expected => Ok(None),
                Some(v) => Ok(Some(format!(
                    "v(x of P-Q) = {v}, expected {expected}: P={p} Q={q}"
                ))),
                None => Ok(Some(format!(
                    "v(x of P-Q) indeterminate, expected {expected}: P={p} Q={q}"
                ))),
            }
        };
        match trial(&mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => fails.push(format!("trial {i}: {msg}")),
            Err(e) => fails.push(format!("trial {i}: unexpected error: {e}")),
        }
    }
    Ok(fails)
}

/// Circle-map well-definedness at one level on a split curve: pairs whose
/// difference lies in the level-2n set map to values within v(eps)/n of
/// each other.
fn focused_fstar(
    eps: &PuiseuxNumber,
    prec: &Precision,
    level: u32,
    trials: u32,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    if level == 0 {
        return Err(usage("--level must be at least 1"));
    }
    let probe = MinimalCurve::new(eps.clone(), prec.narrow())?;
    let veps = split_valuation(&probe)?;
    let cfg = window_for_span(&prec.narrow(), &veps);
    let curve = MinimalCurve::new(eps.clone(), cfg)?;
    let setting = QuotientSetting::full(&curve)?;
    let n = level;
    // Largest spread on the 1/32 grid that keeps the difference inside
    // level 2n; past n = 15 only coincident abscissas qualify.
    let dmax = (15 / n as i64).max(0);
    let mut fails = Vec::new();
    for i in 0..trials {
        let mut rng = sample::trial_rng(seed, i);
        let a1 = rng.gen_range(1..=31i64);
        let delta = if dmax == 0 { 0 } else { rng.gen_range(1..=dmax) };
        let a2 = if a1 + delta <= 31 { a1 + delta } else { a1 - delta };
        let mk = |a: i64, rng: &mut rand_chacha::ChaCha8Rng| {
            curve.point_from_x(
                PuiseuxNumber::monomial(
                    Real::from_rat(sample::small_positive_rat(rng)),
                    &rat(a, 32) * &veps,
                ),
                YBranch::Plus,
            )
        };
        let trial = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Option<String>, CliError> {
            let p = mk(a1, rng)?;
            let q = mk(a2, rng)?;
            let d = curve.sub_points(&p, &q)?;
            if !setting.g00_member(&d, 2 * n)? {
                return Ok(Some(format!(
                    "difference escaped level {}: P={p} Q={q}",
                    2 * n
                )));
            }
            let vp = setting
                .f_star(&p)?
                .valuation()
                .cloned()
                .ok_or_else(|| usage("image of P lost its valuation"))?;
            let vq = setting
                .f_star(&q)?
                .valuation()
                .cloned()
                .ok_or_else(|| usage("image of Q lost its valuation"))?;
            let spread = if vp >= vq { &vp - &vq } else { &vq - &vp };
            if &spread * &rat(n as i64, 1) <= veps {
                Ok(None)
            } else {
                Ok(Some(format!(
                    "images spread {spread} beyond v(eps)/{n}: P={p} Q={q}"
                )))
            }
        };
        match trial(&mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => fails.push(format!("trial {i}: {msg}")),
            Err(e) => fails.push(format!("trial {i}: unexpected error: {e}")),
        }
    }
    Ok(fails)
}
