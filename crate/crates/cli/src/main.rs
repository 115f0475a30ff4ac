use std::f64::consts::LN_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entanglion::inequalities::{
    alpha_grid, attach_tails, compare_tightness, random_suite, scan_hybrid, sweep, sweep_csv, SuiteConfig,
    TightnessVerdict, MONOGAMY_SCALE,
};
use entanglion::{
    catalog, catalog_state, evaluate, measure, measure_profile, Bipartition, InequalityReport, MeasureKind,
    MeasureValue, QuantumState, RoofConfig, TheoremId, Verdict,
};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "entanglion", version, about = "Entanglement measures and monogamy/polygamy checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate measures across focus|rest and on every (focus, j) pair.
    Measure(MeasureArgs),
    /// Run inequality checks at one or more alpha values.
    Check(CheckArgs),
    /// Tabulate baseline and weighted bounds over an alpha grid.
    Sweep(SweepArgs),
    /// Run every bound on seeded Haar-random pure qubit states.
    RandomSuite(SuiteArgs),
    /// List the named states.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct RoofArgs {
    /// Seed for the convex-roof optimizer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optimizer restarts.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
}

impl RoofArgs {
    fn config(&self) -> RoofConfig {
        RoofConfig {
            restarts: self.restarts,
            ..RoofConfig::with_seed(self.seed)
        }
    }
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// State file path or `catalog:NAME`.
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 0)]
    focus: usize,
    /// Measures to evaluate (comma separated); all when omitted.
    #[arg(long, value_delimiter = ',')]
    measure: Vec<String>,
    #[command(flatten)]
    roof: RoofArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 0)]
    focus: usize,
    /// Single alpha; accepts `4ln2`-style multiples of ln 2.
    #[arg(long, conflicts_with = "alpha_grid", allow_hyphen_values = true)]
    alpha: Option<String>,
    /// `lo:hi:steps`, inclusive and strictly increasing.
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: Option<String>,
    /// Theorems to run (comma separated); chosen from alpha when omitted.
    #[arg(long, value_delimiter = ',')]
    theorems: Vec<String>,
    /// Split index for thm3/thm7; every admissible value when omitted.
    #[arg(long)]
    t: Option<usize>,
    #[command(flatten)]
    roof: RoofArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    state: String,
    #[arg(long, default_value_t = 0)]
    focus: usize,
    /// `lcren` or `lcrenoa`.
    #[arg(long, default_value = "lcren")]
    measure: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: String,
    #[command(flatten)]
    roof: RoofArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, default_value_t = 3)]
    qubits: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Base seed; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also evaluate the hybrid split bounds (four or more qubits).
    #[arg(long)]
    hybrid: bool,
    /// Optimizer restarts for group reductions.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn load_state(source: &str) -> Result<QuantumState> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return Ok(catalog_state(name)?);
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("reading state file {source}"))?;
    QuantumState::from_json(&text).with_context(|| format!("parsing state file {source}"))
}

/// Parses `x`, `4ln2` or `ln2`.
fn parse_alpha(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.strip_suffix("ln2") {
        Some("") => LN_2,
        Some(k) => k.parse::<f64>().map_err(|_| anyhow!("bad alpha `{s}`"))? * LN_2,
        None => s.parse::<f64>().map_err(|_| anyhow!("bad alpha `{s}`"))?,
    };
    if !v.is_finite() {
        bail!("alpha must be finite, got `{s}`");
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        bail!("alpha grid must be lo:hi:steps, got `{s}`");
    };
    let steps: usize = steps.parse().map_err(|_| anyhow!("bad step count `{steps}`"))?;
    Ok(alpha_grid(parse_alpha(lo)?, parse_alpha(hi)?, steps)?)
}

fn parse_measure(s: &str) -> Result<MeasureKind> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| anyhow!("unknown measure `{s}`"))
}

fn emit(out: &OutArgs, body: &str) -> Result<()> {
    match &out.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => write_atomic(path, body)?,
    }
    Ok(())
}

fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct CutValues {
    a: Vec<usize>,
    b: Vec<usize>,
    values: Vec<MeasureValue>,
}

#[derive(Serialize)]
struct MeasureReport {
    state: String,
    dims: Vec<usize>,
    focus: usize,
    cuts: Vec<CutValues>,
}

const DEFAULT_MEASURES: [MeasureKind; 9] = [
    MeasureKind::Negativity,
    MeasureKind::LogNegativity,
    MeasureKind::Concurrence,
    MeasureKind::ConcurrenceAssist,
    MeasureKind::Cren,
    MeasureKind::Crenoa,
    MeasureKind::Lcren,
    MeasureKind::Lcrenoa,
    MeasureKind::Tangle,
];

fn cmd_measure(args: &MeasureArgs) -> Result<u8> {
    let state = load_state(&args.state)?;
    let parties = state.shape().len();
    if args.focus >= parties {
        bail!("focus {} out of range for {parties} subsystems", args.focus);
    }
    let kinds: Vec<MeasureKind> = if args.measure.is_empty() {
        DEFAULT_MEASURES.to_vec()
    } else {
        args.measure.iter().map(|m| parse_measure(m)).collect::<Result<_>>()?
    };
    let cfg = args.roof.config();
    let mut cuts = vec![Bipartition::focus_rest(args.focus, parties)];
    if parties > 2 {
        cuts.extend((0..parties).filter(|&j| j != args.focus).map(|j| Bipartition::pair(args.focus, j)));
    }
    let mut out = Vec::new();
    for cut in cuts {
        let dims: Vec<usize> = {
            let mut keep: Vec<usize> = cut.a.iter().chain(&cut.b).copied().collect();
            keep.sort_unstable();
            keep.iter().map(|&i| state.shape().dims()[i]).collect()
        };
        let two_qubit = dims == [2, 2];
        let mut values = Vec::new();
        for &k in &kinds {
            let closed_only = matches!(k, MeasureKind::Concurrence | MeasureKind::ConcurrenceAssist);
            if closed_only && !two_qubit {
                continue;
            }
            values.push(measure(k, &state, &cut, &cfg)?);
        }
        out.push(CutValues {
            a: cut.a,
            b: cut.b,
            values,
        });
    }
    let report = MeasureReport {
        state: args.state.clone(),
        dims: state.shape().dims().to_vec(),
        focus: args.focus,
        cuts: out,
    };
    let body = match args.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("a,b,measure,value,method,error_bound\n");
            for c in &report.cuts {
                let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                for v in &c.values {
                    let method = serde_json::to_value(v.method)?;
                    s.push_str(&format!(
                        "{},{},{},{:.16e},{},{:.16e}\n",
                        join(&c.a),
                        join(&c.b),
                        v.name.as_str(),
                        v.value,
                        method.as_str().unwrap_or_default(),
                        v.error_bound
                    ));
                }
            }
            s
        }
    };
    emit(&args.out, &body)?;
    Ok(0)
}

/// Theorems applicable at `alpha` when none are requested.
fn default_theorems(alpha: f64, n: usize) -> Vec<TheoremId> {
    let mut ids = Vec::new();
    if alpha >= MONOGAMY_SCALE - 1e-12 {
        ids.extend([TheoremId::BaselineMono, TheoremId::Thm1, TheoremId::Thm2]);
        if n >= 3 {
            ids.push(TheoremId::Thm3);
        }
    }
    if (0.0..=2.0).contains(&alpha) {
        ids.extend([TheoremId::BaselinePoly, TheoremId::Thm5, TheoremId::Thm6]);
        if n >= 3 {
            ids.push(TheoremId::Thm7);
        }
    }
    if alpha < 0.0 {
        ids.extend([TheoremId::Thm4, TheoremId::Thm8]);
    }
    ids
}

#[derive(Serialize)]
struct CheckReport {
    state: String,
    dims: Vec<usize>,
    focus: usize,
    multi_qubit: bool,
    reports: Vec<InequalityReport>,
    tightness: Vec<TightnessVerdict>,
    unexpected_violations: usize,
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let state = load_state(&args.state)?;
    let alphas = match (&args.alpha, &args.alpha_grid) {
        (Some(a), None) => vec![parse_alpha(a)?],
        (None, Some(g)) => parse_grid(g)?,
        _ => bail!("pass exactly one of --alpha or --alpha-grid"),
    };
    let requested: Vec<TheoremId> = args.theorems.iter().map(|t| TheoremId::parse(t)).collect::<Result<_, _>>()?;
    let cfg = args.roof.config();
    let parties = state.shape().len();
    let n = parties.saturating_sub(1);

    let mut plan: Vec<(f64, TheoremId)> = Vec::new();
    for &a in &alphas {
        let ids = if requested.is_empty() {
            let mut ids = default_theorems(a, n);
            ids.push(TheoremId::Ckw);
            ids
        } else {
            requested.clone()
        };
        plan.extend(ids.into_iter().map(|id| (a, id)));
    }
    if !requested.is_empty() {
        plan.dedup();
    } else {
        let mut seen_ckw = false;
        plan.retain(|(_, id)| *id != TheoremId::Ckw || !std::mem::replace(&mut seen_ckw, true));
    }

    let needs = |k: MeasureKind| plan.iter().any(|(_, id)| id.measure() == k);
    let needs_tails = |k: MeasureKind| {
        plan.iter()
            .any(|(_, id)| id.measure() == k && matches!(id, TheoremId::Thm3 | TheoremId::Thm7))
    };
    let mut profiles = Vec::new();
    for k in [MeasureKind::Lcren, MeasureKind::Lcrenoa, MeasureKind::Tangle] {
        if needs(k) {
            let mut p = measure_profile(&state, args.focus, k, &cfg)?;
            if needs_tails(k) && p.n() >= 3 {
                attach_tails(&mut p, &state, &cfg)?;
            }
            profiles.push(p);
        }
    }
    let profile_for = |k: MeasureKind| profiles.iter().find(|p| p.measure == k).expect("profile computed");

    let mut reports = Vec::new();
    for &(a, id) in &plan {
        let p = profile_for(id.measure());
        match id {
            TheoremId::Thm3 | TheoremId::Thm7 if args.t.is_none() => reports.extend(scan_hybrid(p, a)?),
            _ => reports.push(evaluate(p, id, a, args.t)?),
        }
    }
    let multi_qubit = state.shape().is_multi_qubit();
    let unexpected_violations = if multi_qubit {
        reports.iter().filter(|r| r.verdict == Verdict::Violated).count()
    } else {
        0
    };
    let report = CheckReport {
        state: args.state.clone(),
        dims: state.shape().dims().to_vec(),
        focus: args.focus,
        multi_qubit,
        tightness: compare_tightness(&reports),
        reports,
        unexpected_violations,
    };
    let body = match args.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("theorem,alpha,lhs,rhs,margin,error_bound,verdict\n");
            for r in &report.reports {
                let verdict = serde_json::to_value(r.verdict)?;
                s.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                    r.theorem_id.as_str(),
                    r.alpha,
                    r.lhs,
                    r.rhs,
                    r.margin,
                    r.error_bound,
                    verdict.as_str().unwrap_or_default()
                ));
            }
            s
        }
    };
    emit(&args.out, &body)?;
    Ok(if unexpected_violations > 0 { EXIT_VIOLATION } else { 0 })
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    let state = load_state(&args.state)?;
    let kind = parse_measure(&args.measure)?;
    if !matches!(kind, MeasureKind::Lcren | MeasureKind::Lcrenoa) {
        bail!("sweeps take --measure lcren or lcrenoa");
    }
    let alphas = parse_grid(&args.alpha_grid)?;
    let profile = measure_profile(&state, args.focus, kind, &args.roof.config())?;
    let rows = sweep(&profile, &alphas)?;
    let body = match args.format {
        Format::Csv => sweep_csv(kind, &rows),
        Format::Json => to_json(&serde_json::json!({
            "state": args.state,
            "measure": kind,
            "focus": args.focus,
            "rows": rows,
        }))?,
    };
    emit(&args.out, &body)?;
    Ok(0)
}

fn cmd_random_suite(args: &SuiteArgs) -> Result<u8> {
    let cfg = SuiteConfig {
        qubits: args.qubits,
        count: args.count,
        seed: args.seed,
        hybrid: args.hybrid,
        roof: RoofConfig {
            restarts: args.restarts,
            ..RoofConfig::with_seed(args.seed)
        },
        ..SuiteConfig::default()
    };
    let summary = random_suite(&cfg)?;
    emit(&args.out, &to_json(&summary)?)?;
    Ok(0)
}

fn cmd_catalog(args: &CatalogArgs) -> Result<u8> {
    let entries = catalog();
    let body = match args.format {
        Format::Json => to_json(&entries)?,
        Format::Csv => {
            let mut s = String::from("name,dims,kind,description\n");
            for e in &entries {
                let dims = e.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x");
                let kind = serde_json::to_value(e.kind)?;
                s.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    e.name,
                    dims,
                    kind.as_str().unwrap_or_default(),
                    e.description.replace('"', "\"\"")
                ));
            }
            s
        }
    };
    emit(&args.out, &body)?;
    Ok(0)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ENTANGLION_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("ENTANGLION_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    configure_threads()?;
    match &cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::RandomSuite(a) => cmd_random_suite(a),
        Command::Catalog(a) => cmd_catalog(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_tokens() {
        assert_eq!(parse_alpha("1.5").unwrap(), 1.5);
        assert_eq!(parse_alpha("4ln2").unwrap(), 4.0 * LN_2);
        assert_eq!(parse_alpha("ln2").unwrap(), LN_2);
        assert!(parse_alpha("abc").is_err());
        assert!(parse_alpha("inf").is_err());
    }

    #[test]
    fn grid_tokens() {
        let g = parse_grid("4ln2:10:50").unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], MONOGAMY_SCALE);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("2:1:5").is_err());
    }

    #[test]
    fn default_theorem_selection() {
        assert_eq!(
            default_theorems(3.0, 2),
            vec![TheoremId::BaselineMono, TheoremId::Thm1, TheoremId::Thm2]
        );
        assert!(default_theorems(1.5, 3).contains(&TheoremId::Thm7));
        assert_eq!(default_theorems(-1.0, 2), vec![TheoremId::Thm4, TheoremId::Thm8]);
        assert!(default_theorems(2.5, 2).is_empty());
    }

    #[test]
    fn measure_names() {
        assert_eq!(parse_measure("lcrenoa").unwrap(), MeasureKind::Lcrenoa);
        assert!(parse_measure("bogus").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
