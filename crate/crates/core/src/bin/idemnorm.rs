use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use idemnorm::fourier::{
    a_norm, a_norm_abelian_oracle, pullback_function, restrict, GroupFunction, NormError, NormReport,
    DEFAULT_SVD_TOL,
};
use idemnorm::group::{is_coset, normalize_subset, quotient, CosetCheck, CosetSide, FiniteGroup, GroupError, Subgroup};
use idemnorm::groupspec::GroupSpec;
use idemnorm::hom::{
    hom_norm_exact_rank_one, hom_norm_lower_sample, hom_norm_upper, parse_piece_specs, rho_f, verify_homomorphism,
    HomCheck, HomError, InducedHom, LowerBound, PieceSpec, PiecewiseAffineMap,
};
use idemnorm::report::{resolve_output, to_csv, to_json_string, Artifact, CsvCell, RunManifest};
use idemnorm::search::{
    gap_audit, growth_table, orbit_spot_check, search, Family, GrowthConfig, GrowthRow, OrbitSpotCheck,
    SearchConfig, SearchError, SearchResult, Strategy, TieBreak, MAX_EXHAUSTIVE_ORDER,
};
use idemnorm::zline::{dirichlet_norm, QuadratureConfig, QuadratureScheme, ZlineError, MAX_POINTS};

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Check tolerance for the quotient and restriction experiments.
const CHECK_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "idemnorm", version, about = "Fourier-algebra norms of idempotents on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of an indicator or of an explicit function.
    Norm(NormArgs),
    /// Largest indicator norm, exhaustively or by hill climbing.
    Search(SearchArgs),
    /// Coset and gap check over every nonempty subset.
    GapAudit(GapArgs),
    /// Extremal norms over a family of groups.
    Growth(GrowthArgs),
    /// Dirichlet kernel norms as CSV.
    Dirichlet(DirichletArgs),
    /// Bounds and homomorphism check for an induced map.
    Hom(HomArgs),
    /// Pullback through a quotient against the original norm.
    QuotientCheck(QuotientArgs),
    /// Restriction to a subgroup against the original norm.
    RestrictCheck(RestrictArgs),
}

#[derive(Args, Serialize)]
struct NormArgs {
    /// Group: a JSON file or inline JSON.
    #[arg(long)]
    group: String,
    /// Comma-separated element indices.
    #[arg(long, conflicts_with = "values")]
    subset: Option<String>,
    /// JSON array of values, numbers or [re, im] pairs; a file or inline.
    #[arg(long)]
    values: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Trace)]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_SVD_TOL)]
    svd_tol: f64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Trace,
    Oracle,
    Both,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 8)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random subsets compared with their orbit representatives (exhaustive runs).
    #[arg(long, default_value_t = 1000)]
    spot_check_pairs: usize,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Exhaustive,
    Local,
}

#[derive(Args, Serialize)]
struct GapArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GrowthArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 1)]
    min_n: usize,
    #[arg(long)]
    max_n: usize,
    #[arg(long, default_value_t = 400)]
    budget: u64,
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cyclic groups up to this order are searched exhaustively.
    #[arg(long, default_value_t = 16)]
    exhaustive_cap: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyArg {
    Cyclic,
    Z3power,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
struct DirichletArgs {
    #[arg(long)]
    kmax: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Initial quadrature grid.
    #[arg(long, default_value_t = 16)]
    points: usize,
    /// k = 0 and powers of two (dyadic) or every k up to kmax (linear).
    #[arg(long, value_enum, default_value_t = ScheduleArg::Dyadic)]
    schedule: ScheduleArg,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScheduleArg {
    Dyadic,
    Linear,
}

#[derive(Args, Serialize)]
struct HomArgs {
    /// Piecewise affine map JSON (file or inline).
    #[arg(long, conflicts_with = "rho_f")]
    map: Option<String>,
    /// Comma-separated F for the rank-one map u -> u(e) chi_F.
    #[arg(long)]
    rho_f: Option<String>,
    /// Group H whose functions are transformed.
    #[arg(long)]
    domain: String,
    /// Group G carrying the pieces and the images.
    #[arg(long)]
    codomain: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct QuotientArgs {
    #[arg(long)]
    group: String,
    /// Comma-separated normal subgroup.
    #[arg(long)]
    normal: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RestrictArgs {
    #[arg(long)]
    group: String,
    /// Comma-separated subgroup.
    #[arg(long)]
    subgroup: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Failures and exit codes

#[derive(Debug)]
enum Failure {
    Io(String),
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<NormError> for Failure {
    fn from(e: NormError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<ZlineError> for Failure {
    fn from(e: ZlineError) -> Self {
        match e {
            ZlineError::Norm(n) => n.into(),
            ZlineError::NoConvergence { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Norm(n) => n.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<HomError> for Failure {
    fn from(e: HomError) -> Self {
        match e {
            HomError::Norm(n) => n.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

// ---------------------------------------------------------------------------
// Input helpers

fn read_json_arg(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))
}

fn load_group(arg: &str) -> Result<Arc<FiniteGroup>, Failure> {
    let spec = GroupSpec::from_json(&read_json_arg(arg)?)?;
    Ok(Arc::new(spec.build()?))
}

fn parse_subset(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|e| Failure::Validation(format!("bad element '{s}': {e}"))))
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ValueEntry {
    Real(f64),
    Complex([f64; 2]),
}

fn parse_values(arg: &str) -> Result<Vec<Complex64>, Failure> {
    let entries: Vec<ValueEntry> = serde_json::from_str(&read_json_arg(arg)?)?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            ValueEntry::Real(x) => Complex64::new(x, 0.0),
            ValueEntry::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect())
}

fn emit<T: Serialize>(mut manifest: RunManifest, started: Instant, out: Option<&Path>, result: &T) -> Outcome {
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    let text = to_json_string(&Artifact { manifest: &manifest, result })?;
    write_text(out, &manifest.command, "json", &text)
}

fn write_text(out: Option<&Path>, command: &str, ext: &str, text: &str) -> Outcome {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(out) => {
            let path = resolve_output(out, command, ext);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
    }
}

fn manifest<T: Serialize>(command: &str, args: &T, seed: Option<u64>) -> Result<RunManifest, Failure> {
    Ok(RunManifest::new(command, std::env::args().collect(), serde_json::to_value(args)?, seed))
}

// ---------------------------------------------------------------------------
// Commands

#[derive(Serialize)]
struct CosetSummary {
    is_coset: bool,
    side: Option<CosetSide>,
    subgroup: Option<Vec<usize>>,
    representative: Option<usize>,
}

#[derive(Serialize)]
struct NormOutput {
    #[serde(flatten)]
    report: NormReport,
    oracle: Option<NormReport>,
    coset: Option<CosetSummary>,
}

fn cmd_norm(args: &NormArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("norm", args, None)?;
    let g = load_group(&args.group)?;
    let (u, subset) = match (&args.subset, &args.values) {
        (Some(s), None) => {
            let set = normalize_subset(&g, &parse_subset(s)?)?;
            (GroupFunction::indicator(&g, &set)?, Some(set))
        }
        (None, Some(v)) => (GroupFunction::new(&g, parse_values(v)?)?, None),
        _ => return Err(Failure::Validation("give exactly one of --subset or --values".into())),
    };
    let trace = |m: &mut RunManifest| {
        m.count("a_norm", 1);
        a_norm(&u, args.svd_tol)
    };
    let (report, oracle) = match args.method {
        MethodArg::Trace => (trace(&mut m)?, None),
        MethodArg::Oracle => {
            m.count("a_norm_abelian_oracle", 1);
            (a_norm_abelian_oracle(&u)?, None)
        }
        MethodArg::Both => {
            let t = trace(&mut m)?;
            m.count("a_norm_abelian_oracle", 1);
            (t, Some(a_norm_abelian_oracle(&u)?))
        }
    };
    let coset = match subset {
        Some(set) => {
            m.count("is_coset", 1);
            Some(match is_coset(&g, &set)? {
                CosetCheck::Coset(w) => CosetSummary {
                    is_coset: true,
                    side: Some(w.side),
                    subgroup: Some(w.subgroup.members().to_vec()),
                    representative: Some(w.representative),
                },
                _ => CosetSummary { is_coset: false, side: None, subgroup: None, representative: None },
            })
        }
        None => None,
    };
    emit(m, started, args.out.as_deref(), &NormOutput { report, oracle, coset })
}

#[derive(Serialize)]
struct SearchOutput {
    config: SearchConfig,
    #[serde(flatten)]
    result: SearchResult,
    orbit_check: Option<OrbitSpotCheck>,
}

fn cmd_search(args: &SearchArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("search", args, Some(args.seed))?;
    let g = load_group(&args.group)?;
    let cfg = SearchConfig {
        strategy: match args.strategy {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Local => Strategy::LocalSearch,
        },
        budget: args.budget,
        restarts: args.restarts,
        seed: args.seed,
        tie_break: TieBreak::SmallestCanonicalSubset,
    };
    let result = search(&g, &cfg)?;
    m.count(if result.exhausted { "brute_force_max" } else { "local_search_max" }, 1);
    m.count("a_norm", result.evaluations);
    let orbit_check = if cfg.strategy == Strategy::Exhaustive && g.order() <= MAX_EXHAUSTIVE_ORDER {
        m.count("orbit_spot_check", 1);
        Some(orbit_spot_check(&g, args.spot_check_pairs, args.seed)?)
    } else {
        None
    };
    emit(m, started, args.out.as_deref(), &SearchOutput { config: cfg, result, orbit_check })
}

fn cmd_gap_audit(args: &GapArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("gap-audit", args, None)?;
    let g = load_group(&args.group)?;
    let report = gap_audit(&g)?;
    m.count("gap_audit", 1);
    m.count("is_coset", report.subsets_checked);
    m.count("a_norm", report.orbits);
    emit(m, started, args.out.as_deref(), &report)
}

fn cmd_growth(args: &GrowthArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("growth", args, Some(args.seed))?;
    let family = match args.family {
        FamilyArg::Cyclic => Family::Cyclic,
        FamilyArg::Z3power => Family::Z3power,
        FamilyArg::Symmetric => Family::Symmetric,
    };
    let mut cfg = GrowthConfig::new(family, args.min_n, args.max_n);
    cfg.exhaustive_cap = args.exhaustive_cap;
    cfg.search = SearchConfig { budget: args.budget, restarts: args.restarts, seed: args.seed, ..cfg.search };
    let rows: Vec<GrowthRow> = growth_table(&cfg)?;
    m.count("growth_table", 1);
    for r in &rows {
        let op = match r.method.as_str() {
            "exhaustive" => "brute_force_max",
            "interval" => "a_norm_abelian_oracle",
            "product_witness" => "product_witness",
            _ => "local_search_max",
        };
        m.count(op, 1);
    }
    if args.format == FormatArg::Csv {
        m.wall_time_seconds = started.elapsed().as_secs_f64();
        let cells: Vec<Vec<CsvCell>> = rows
            .iter()
            .map(|r| {
                let subset = r.subset.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                vec![
                    CsvCell::Int(r.n as i64),
                    CsvCell::Text(r.group.clone()),
                    CsvCell::Int(r.order as i64),
                    CsvCell::Float(r.norm),
                    CsvCell::Text(r.method.clone()),
                    CsvCell::Text(subset),
                ]
            })
            .collect();
        let text = to_csv(&m, &["n", "group", "order", "norm", "method", "subset"], &cells)?;
        return write_text(args.out.as_deref(), "growth", "csv", &text);
    }
    emit(m, started, args.out.as_deref(), &rows)
}

fn cmd_dirichlet(args: &DirichletArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("dirichlet", args, None)?;
    let cfg = QuadratureConfig {
        scheme: QuadratureScheme::TrapezoidUniform,
        points: args.points,
        abs_tol: args.tol,
        max_points: MAX_POINTS,
    };
    let ks: Vec<u64> = match args.schedule {
        ScheduleArg::Linear => (0..=args.kmax).collect(),
        ScheduleArg::Dyadic => std::iter::once(0)
            .chain(std::iter::successors(Some(1u64), |k| k.checked_mul(2)).take_while(|&k| k <= args.kmax))
            .collect(),
    };
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let t = Instant::now();
        let q = dirichlet_norm(k, &cfg)?;
        m.count("dirichlet_norm", 1);
        rows.push(vec![
            CsvCell::Int(k as i64),
            CsvCell::Float(q.value),
            CsvCell::Int(q.points as i64),
            CsvCell::Float(t.elapsed().as_secs_f64()),
        ]);
    }
    m.wall_time_seconds = started.elapsed().as_secs_f64();
    let text = to_csv(&m, &["k", "norm", "points_used", "seconds"], &rows)?;
    write_text(args.out.as_deref(), "dirichlet", "csv", &text)
}

#[derive(Serialize)]
struct HomOutput {
    kind: &'static str,
    domain: String,
    codomain: String,
    pieces: Vec<PieceSpec>,
    check: HomCheck,
    lower: Option<LowerBound>,
    exact: Option<f64>,
    upper: Option<f64>,
}

fn cmd_hom(args: &HomArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("hom", args, Some(args.seed))?;
    let h = load_group(&args.domain)?;
    let g = load_group(&args.codomain)?;
    let (rho, kind) = match (&args.map, &args.rho_f) {
        (Some(map), None) => {
            let specs = parse_piece_specs(&read_json_arg(map)?)?;
            (InducedHom::new(PiecewiseAffineMap::from_specs_unchecked(&g, &h, &specs)?), "piecewise")
        }
        (None, Some(f)) => (rho_f(&parse_subset(f)?, &g, &h)?, "rank_one"),
        _ => return Err(Failure::Validation("give exactly one of --map or --rho-f".into())),
    };
    let check = verify_homomorphism(&rho, args.trials, args.seed)?;
    m.count("verify_homomorphism", 1);
    let mut out = HomOutput {
        kind,
        domain: h.label().into(),
        codomain: g.label().into(),
        pieces: rho.map().to_specs(),
        check,
        lower: None,
        exact: None,
        upper: None,
    };
    if !out.check.passed {
        emit(m, started, args.out.as_deref(), &out)?;
        return Err(Failure::Validation(format!(
            "not a valid piecewise affine map: {} violation(s), first at t = {}",
            out.check.violations.len(),
            out.check.violations[0].t
        )));
    }
    out.lower = Some(hom_norm_lower_sample(&rho, args.trials.max(1), args.seed)?);
    out.upper = Some(hom_norm_upper(&rho)?);
    m.count("hom_norm_lower_sample", 1);
    m.count("hom_norm_upper", 1);
    if rho.rank_one_set().is_some() {
        out.exact = Some(hom_norm_exact_rank_one(&rho)?);
        m.count("hom_norm_exact_rank_one", 1);
    }
    emit(m, started, args.out.as_deref(), &out)
}

#[derive(Serialize)]
struct CheckOutput {
    group: String,
    subgroup: Vec<usize>,
    other_group: String,
    trials: usize,
    /// Largest `|a - b|` (quotient) or `max(a - b, 0)` (restriction).
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

fn cmd_quotient_check(args: &QuotientArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("quotient-check", args, Some(args.seed))?;
    let g = load_group(&args.group)?;
    let n = Subgroup::new(&g, &parse_subset(&args.normal)?)?;
    let q = quotient(&g, &n)?;
    m.count("quotient", 1);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let u = GroupFunction::random_gaussian(q.group(), &mut rng);
        let lifted = pullback_function(&q, &u)?;
        let d = (a_norm(&lifted, DEFAULT_SVD_TOL)?.value - a_norm(&u, DEFAULT_SVD_TOL)?.value).abs();
        worst = worst.max(d);
    }
    m.count("a_norm", 2 * args.trials as u64);
    let out = CheckOutput {
        group: g.label().into(),
        subgroup: n.members().to_vec(),
        other_group: q.group().label().into(),
        trials: args.trials,
        max_deviation: worst,
        tolerance: CHECK_TOL,
        passed: worst <= CHECK_TOL,
    };
    emit(m, started, args.out.as_deref(), &out)
}

fn cmd_restrict_check(args: &RestrictArgs) -> Outcome {
    let started = Instant::now();
    let mut m = manifest("restrict-check", args, Some(args.seed))?;
    let g = load_group(&args.group)?;
    let h = Subgroup::new(&g, &parse_subset(&args.subgroup)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    let mut label = String::new();
    for _ in 0..args.trials {
        let u = GroupFunction::random_gaussian(&g, &mut rng);
        let r = restrict(&u, &h)?;
        label = r.group().label().to_string();
        let excess = a_norm(&r, DEFAULT_SVD_TOL)?.value - a_norm(&u, DEFAULT_SVD_TOL)?.value;
        worst = worst.max(excess);
    }
    m.count("a_norm", 2 * args.trials as u64);
    m.count("restrict", args.trials as u64);
    let out = CheckOutput {
        group: g.label().into(),
        subgroup: h.members().to_vec(),
        other_group: label,
        trials: args.trials,
        max_deviation: worst,
        tolerance: CHECK_TOL,
        passed: worst <= CHECK_TOL,
    };
    emit(m, started, args.out.as_deref(), &out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("IDEMNORM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    configure_threads();
    let outcome = match &cli.command {
        Command::Norm(a) => cmd_norm(a),
        Command::Search(a) => cmd_search(a),
        Command::GapAudit(a) => cmd_gap_audit(a),
        Command::Growth(a) => cmd_growth(a),
        Command::Dirichlet(a) => cmd_dirichlet(a),
        Command::Hom(a) => cmd_hom(a),
        Command::QuotientCheck(a) => cmd_quotient_check(a),
        Command::RestrictCheck(a) => cmd_restrict_check(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("idemnorm: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
