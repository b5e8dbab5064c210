use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use mcg_core::acceptance;
use mcg_core::constants_engine::{
    chain_verify, main_lemma_power, p1_constant, threshold_search, ProjectionParams,
};
use mcg_core::exact::ExactRational;
use mcg_core::farey_model::{classify, farey_distance, parse_matrix_list, FareyDistance};
use mcg_core::free_cert::{find_short_independent, theorem1_constants, FindConfig};
use mcg_core::growth_counter::{
    ball_sizes_capped, growth_estimate, BallCache, DEFAULT_ELEMENT_CAP,
};
use mcg_core::random_walk::{
    free_radial_probs, monte_carlo, return_probs_capped, rho_estimate, DEFAULT_STATE_CAP,
};
use mcg_core::twist_calculus::{
    default_sample_powers, slope_box, twist_inequality_check_with, verify_twist_pingpong,
    InequalityMode, TwistWord,
};
use mcg_core::{MappingClass, McgError, Slope};

#[derive(Parser, Debug)]
#[command(name = "mcg", version, about = "Mapping classes of the once-punctured torus")]
struct Cli {
    /// Output format. JSON is the default.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Shorthand for `--format text`.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
enum Command {
    /// Nielsen–Thurston type of a matrix.
    Classify {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Intersection number of two slopes `p/q`.
    Intersect {
        #[arg(allow_hyphen_values = true)]
        s1: String,
        #[arg(allow_hyphen_values = true)]
        s2: String,
    },
    /// Farey graph distance between two slopes.
    Distance {
        #[arg(allow_hyphen_values = true)]
        s1: String,
        #[arg(allow_hyphen_values = true)]
        s2: String,
        #[arg(long, default_value_t = 1000)]
        cap: u64,
    },
    /// Intersection after twisting: i(T(δ), δ′) against its lower bound.
    TwistCheck {
        #[arg(long, allow_hyphen_values = true)]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        power: i64,
        #[arg(allow_hyphen_values = true)]
        delta: String,
        #[arg(allow_hyphen_values = true)]
        delta_prime: String,
        /// Drop the −2 from the coefficient.
        #[arg(long)]
        same_sign: bool,
    },
    /// Ping-pong certificate for two twists.
    TwistPingpong {
        #[arg(long, allow_hyphen_values = true)]
        a_axis: String,
        #[arg(long, allow_hyphen_values = true)]
        a_power: i64,
        #[arg(long, allow_hyphen_values = true)]
        b_axis: String,
        #[arg(long, allow_hyphen_values = true)]
        b_power: i64,
        /// Sample slopes with |p|, |q| up to this bound.
        #[arg(long, default_value_t = 5)]
        sample_box: i64,
    },
    /// Short free generators in a finitely generated subgroup.
    FindFree(FindFreeArgs),
    /// Ball sizes and growth estimate.
    Growth(GrowthArgs),
    /// Return probabilities of the simple random walk.
    Walk(WalkArgs),
    /// Constant chain for relative pseudo-Anosovs.
    Constants(ConstantsArgs),
    /// Run the acceptance criteria and print a pass/fail table.
    Reproduce {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Args, Debug, Serialize)]
struct FindFreeArgs {
    /// Matrices separated by `;`, e.g. "[[1,2],[0,1]]; [[1,0],[2,1]]".
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
    #[arg(long, default_value_t = 32)]
    max_power: u32,
    #[arg(long, default_value_t = 12)]
    oracle_depth: usize,
    #[arg(long, default_value_t = 5)]
    sample_box: i64,
    /// Accept a certificate backed only by the relation oracle.
    #[arg(long)]
    allow_oracle_only: bool,
}

#[derive(Args, Debug, Serialize)]
struct GrowthArgs {
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
    #[arg(long)]
    radius: usize,
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: u64,
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Shorthand for `--format csv`.
    #[arg(long)]
    csv: bool,
    /// Ignore `MCG_CACHE_DIR`.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Debug, Serialize)]
struct WalkArgs {
    /// Generators; inverses are added when missing.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "free_rank")]
    gens: Option<String>,
    /// Walk on the free group of this rank through the radial chain.
    #[arg(long, conflicts_with = "gens")]
    free_rank: Option<u32>,
    #[arg(long)]
    steps: usize,
    /// Exact dynamic programming (default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo with this many trials.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct ConstantsArgs {
    /// Translation constant, an exact rational such as `1` or `3/7`.
    #[arg(long)]
    c: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, default_value_t = 10)]
    d_in: u64,
    #[arg(long, default_value_t = 4)]
    d_out: u64,
    /// Search for the least Behrstock threshold.
    #[arg(long)]
    search: bool,
    /// Power supplied for the second term of the main lemma bound.
    #[arg(long)]
    p2: Option<u64>,
}

struct Report {
    result: Value,
    text: String,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn new(result: impl Serialize, text: String) -> Result<Self> {
        Ok(Report {
            result: serde_json::to_value(result)?,
            text,
            csv: None,
            ok: true,
        })
    }
}

fn slope(s: &str) -> Result<Slope> {
    Ok(Slope::from_str(s)?)
}

fn matrices(s: &str) -> Result<Vec<MappingClass>> {
    Ok(parse_matrix_list(s)?)
}

fn rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|_| McgError::parse(s, "expected a rational such as 3/7").into())
}

fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Classify { matrix } => {
            let m: MappingClass = matrix.parse()?;
            let c = classify(&m);
            let text = match &c {
                mcg_core::farey_model::ClassificationResult::PseudoAnosov { dilatation } => {
                    format!("pseudo_anosov, dilatation {dilatation}")
                }
                mcg_core::farey_model::ClassificationResult::DehnTwist { axis, power, negated } => {
                    format!(
                        "dehn_twist about {axis}, power {power}{}",
                        if *negated { ", negated" } else { "" }
                    )
                }
                other => other.name().to_string(),
            };
            Report::new(c, text)
        }
        Command::Intersect { s1, s2 } => {
            let i = slope(s1)?.intersection(&slope(s2)?);
            Report::new(json!(i.to_string().parse::<Value>()?), i.to_string())
        }
        Command::Distance { s1, s2, cap } => {
            let d = farey_distance(&slope(s1)?, &slope(s2)?, *cap);
            let (value, text) = match d {
                FareyDistance::Finite(n) => (json!(n), n.to_string()),
                FareyDistance::ExceedsCap => (json!({ "exceeds_cap": cap }), format!("exceeds cap {cap}")),
            };
            Report::new(value, text)
        }
        Command::TwistCheck { axis, power, delta, delta_prime, same_sign } => {
            let t = TwistWord::single(slope(axis)?, *power)?;
            let mode = if *same_sign { InequalityMode::SameSign } else { InequalityMode::Standard };
            let r = twist_inequality_check_with(&t, &slope(delta)?, &slope(delta_prime)?, mode);
            let text = format!("lhs {} rhs {} holds {}", r.lhs, r.rhs, r.holds);
            Report::new(r, text)
        }
        Command::TwistPingpong { a_axis, a_power, b_axis, b_power, sample_box } => {
            let a = TwistWord::single(slope(a_axis)?, *a_power)?;
            let b = TwistWord::single(slope(b_axis)?, *b_power)?;
            let cert = verify_twist_pingpong(&a, &b, &slope_box(*sample_box), &default_sample_powers())?;
            let text = format!("certified free: {} and {}", cert.generators[0], cert.generators[1]);
            Report::new(cert, text)
        }
        Command::FindFree(args) => {
            let gens = matrices(&args.gens)?;
            let config = FindConfig {
                max_power: args.max_power,
                oracle_depth: args.oracle_depth,
                sample_box: args.sample_box,
                allow_oracle_only: args.allow_oracle_only,
            };
            let res = find_short_independent(&gens, &config)?;
            let constants = theorem1_constants(u64::from(res.p_used), res.index as u64)?;
            let text = format!(
                "u = {} (length {}), v = {} (length {}), {:?} certificate, growth ≥ {} ≈ {:.6}; uniform r = {}",
                res.u,
                res.u_length,
                res.v,
                res.v_length,
                res.certificate.kind,
                res.growth_bound_symbolic,
                res.growth_bound,
                constants.r_symbolic
            );
            Report::new(json!({ "independence": res, "constants": constants }), text)
        }
        Command::Growth(args) => growth(args),
        Command::Walk(args) => walk(args),
        Command::Constants(args) => constants(args),
        Command::Reproduce { criterion } => {
            let outcomes = match criterion {
                Some(id) => vec![acceptance::run(*id)?],
                None => acceptance::run_all(),
            };
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!(
                    "{} {:>2}  {:<36} {}\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.id,
                    o.name,
                    o.detail
                ));
            }
            let ok = outcomes.iter().all(|o| o.passed);
            let mut report = Report::new(&outcomes, text.trim_end().to_string())?;
            report.ok = ok;
            Ok(report)
        }
    }
}

fn growth(args: &GrowthArgs) -> Result<Report> {
    let gens = matrices(&args.gens)?;
    let cache = if args.no_cache { None } else { BallCache::from_env() };
    let table = match &cache {
        Some(c) => c.ball_sizes(&gens, args.radius, args.cap)?,
        None => ball_sizes_capped(&gens, args.radius, args.cap)?,
    };
    let estimate = growth_estimate(&table, args.window).ok();
    let mut csv = String::from("radius,size,rate\n");
    for (k, s) in table.sizes.iter().enumerate() {
        let rate = if k == 0 { String::new() } else { format!("{:.9}", (*s as f64).ln() / k as f64) };
        csv.push_str(&format!("{k},{s},{rate}\n"));
    }
    let text = format!(
        "sizes {:?}{}{}",
        table.sizes,
        table
            .truncated
            .map(|t| format!(", truncated at radius {} (cap {})", t.radius, t.cap))
            .unwrap_or_default(),
        estimate
            .as_ref()
            .map(|e| format!(", growth ≈ {:.6}", e.extrapolated))
            .unwrap_or_default()
    );
    let mut report = Report::new(
        json!({ "table": table, "estimate": estimate, "cached": cache.is_some() }),
        text,
    )?;
    report.csv = Some(csv);
    Ok(report)
}

fn walk(args: &WalkArgs) -> Result<Report> {
    if let Some(trials) = args.mc {
        let gens = matrices(args.gens.as_deref().context("--mc needs --gens")?)?;
        let mut sym = Vec::new();
        for g in &gens {
            for x in [g.clone(), g.inverse()] {
                if !sym.contains(&x) {
                    sym.push(x);
                }
            }
        }
        let report = monte_carlo(&sym, args.steps, trials, args.seed)?;
        let text = format!("return frequencies {:?}", report.frequencies);
        return Report::new(report, text);
    }
    let table = match (&args.gens, args.free_rank) {
        (_, Some(rank)) => free_radial_probs(rank, args.steps)?,
        (Some(g), None) => return_probs_capped(&matrices(g)?, args.steps, args.cap)?,
        (None, None) => unreachable!("clap requires one of --gens, --free-rank"),
    };
    let rho = rho_estimate(&table).ok();
    let last = &table.probs[table.steps()];
    let shown = if last.to_string().len() <= 40 {
        last.to_string()
    } else {
        format!("{:.6e}", mcg_core::exact::rational_to_f64(last))
    };
    let text = format!(
        "p({}) = {shown}{}",
        table.steps(),
        rho.as_ref()
            .map(|r| format!(", ρ ≥ {:.6} ({:?} bound at n = {})", r.best, r.best_method, r.best_index))
            .unwrap_or_default()
    );
    Report::new(json!({ "table": table, "rho": rho }), text)
}

#[derive(Serialize)]
struct ConstantsResult {
    c: ExactRational,
    #[serde(rename = "D_in_min", skip_serializing_if = "Option::is_none")]
    d_in_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum_min: Option<u64>,
    p1: ExactRational,
    p: u64,
    chain: mcg_core::constants_engine::ConstantChain,
    #[serde(skip_serializing_if = "Option::is_none")]
    main_lemma_power: Option<String>,
}

fn constants(args: &ConstantsArgs) -> Result<Report> {
    let c = rational(&args.c)?;
    let p1 = p1_constant(std::slice::from_ref(&c))?;
    let search = if args.search { Some(threshold_search()?) } else { None };
    let params = ProjectionParams::new(c.clone(), args.d_in, args.d_out)?;
    let p = match args.p {
        Some(p) => p,
        None => u64::try_from(p1.ceil().to_integer())
            .map_err(|_| McgError::InvalidParameter("p₁ too large".into()))?,
    };
    let chain = chain_verify(&params, p, args.m)?;
    let main = args.p2.map(|p2| main_lemma_power(&p1, p2).to_string());
    let text = format!(
        "{}p1 = {p1}; chain at p = {p}, m = {}: {}",
        search
            .as_ref()
            .map(|s| format!("D_in_min = {}, sum_min = {}; ", s.d_in_min, s.sum_min))
            .unwrap_or_default(),
        args.m,
        if chain.accepted {
            "accepted".to_string()
        } else {
            format!("rejected at step {}", chain.first_failure.map_or(0, |i| i + 1))
        }
    );
    let ok = chain.accepted;
    let mut report = Report::new(
        ConstantsResult {
            c: ExactRational(c),
            d_in_min: search.as_ref().map(|s| s.d_in_min),
            sum_min: search.as_ref().map(|s| s.sum_min),
            p1: ExactRational(p1),
            p,
            chain,
            main_lemma_power: main,
        },
        text,
    )?;
    report.ok = ok || args.p.is_some();
    Ok(report)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<McgError>() {
        Some(e) if e.is_hypothesis_violation() || matches!(e, McgError::Parse { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut format = cli.format;
    if cli.json {
        format = Format::Json;
    }
    if cli.text {
        format = Format::Text;
    }
    if let Command::Growth(g) = &cli.command {
        if g.csv {
            format = Format::Csv;
        }
    }
    match run(&cli.command) {
        Ok(report) => {
            match format {
                Format::Text => println!("{}", report.text),
                Format::Csv if report.csv.is_some() => print!("{}", report.csv.unwrap_or_default()),
                _ => {
                    let envelope = json!({
                        "tool": "mcg",
                        "version": env!("CARGO_PKG_VERSION"),
                        "config": { "format": format, "command": &cli.command },
                        "result": report.result,
                    });
                    println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
