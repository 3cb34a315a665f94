//! Command definitions and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabgap_core::barrier::{generalized_barrier_exact, heuristic_barrier, BarrierReport, Limits, PathFamily, Targets};
use stabgap_core::bounds::{self, BoundReport, VerifyConfig, VERIFY_TOL};
use stabgap_core::davies::{spectral_gap, Bath, BathKind, Davies, DaviesLimits, GapMethod};
use stabgap_core::model::{energy_to_f64, TorusLayout};
use stabgap_core::pauli::parse_pauli;

use crate::error::CliError;
use crate::format::{fmt_energy, fmt_g, fmt_opt, write_csv};
use crate::grid::parse_grid;
use crate::modelfile::{load_model, ModelFile};

#[derive(Debug, Parser)]
#[command(name = "stabgap", version, about = "Energy barriers and Davies spectral-gap bounds for commuting Pauli Hamiltonians")]
pub struct Cli {
    /// Worker threads (default: RAYON_NUM_THREADS or all cores). Never changes results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a model file and print its basic invariants.
    Check { model: PathBuf },
    /// Generalized energy barrier, exact or for a path family.
    Barrier {
        model: PathBuf,
        #[command(flatten)]
        paths: PathArgs,
        /// Write per-target costs as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact spectral gap of the Davies generator.
    Gap {
        model: PathBuf,
        #[command(flatten)]
        bath: BathArgs,
        #[arg(long, default_value = "0")]
        beta: f64,
        #[arg(long, value_enum, default_value_t = MethodChoice::Coset)]
        method: MethodChoice,
        /// Print the Dirichlet and variance blocks of this coset representative.
        #[arg(long)]
        dump_block: Option<String>,
    },
    /// Every bound at each β of the grid.
    Bound(GridArgs),
    /// Check λ ≥ bound at each β; exit 1 on any violation.
    Verify(GridArgs),
    /// One CSV row per β.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixing-time bound t(ε) from the exact gap or one of the lower bounds.
    Mixing {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = LambdaSource::Exact)]
        source: LambdaSource,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BathChoice {
    Metropolis,
    Glauber,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodChoice {
    Coset,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LambdaSource {
    Exact,
    Gen,
    Special,
}

#[derive(Debug, Args)]
pub struct BathArgs {
    #[arg(long, value_enum, default_value_t = BathChoice::Metropolis)]
    pub bath: BathChoice,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Force the exhaustive barrier (default when no family is given).
    #[arg(long, conflicts_with = "family")]
    pub exact: bool,
    /// `natural`, `order:i,j,...`, `css` or `css:LXxLY`.
    #[arg(long)]
    pub family: Option<String>,
    /// Evaluate the family on all 4^N targets (default).
    #[arg(long, conflicts_with = "sample")]
    pub all: bool,
    /// Evaluate the family on a seeded random sample of targets.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Raise the N limit for the exhaustive barrier.
    #[arg(long)]
    pub exact_limit: Option<usize>,
    /// Raise the N limit for enumerating all targets.
    #[arg(long)]
    pub enumerate_limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    pub model: PathBuf,
    #[command(flatten)]
    pub bath: BathArgs,
    /// `start:stop:step`, `b1,b2,...` or a single value.
    #[arg(long, default_value = "0")]
    pub beta: String,
    #[command(flatten)]
    pub paths: PathArgs,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Absolute slack in λ ≥ bound.
    #[arg(long, default_value_t = VERIFY_TOL)]
    pub tol: f64,
}

fn bath_kind(c: BathChoice) -> BathKind {
    match c {
        BathChoice::Metropolis => BathKind::Metropolis,
        BathChoice::Glauber => BathKind::Glauber,
    }
}

fn limits(p: &PathArgs) -> Limits {
    let mut l = Limits::default();
    if let Some(n) = p.exact_limit {
        l.exact_barrier_n = n;
        l.exact_cost_n = l.exact_cost_n.max(n);
    }
    if let Some(n) = p.enumerate_limit {
        l.enumerate_n = n;
    }
    l
}

fn parse_family(spec: &str, file: &ModelFile) -> Result<PathFamily, CliError> {
    let n = file.model.n();
    let bad = |m: String| CliError::Input(format!("family {spec:?}: {m}"));
    if spec == "natural" {
        return Ok(PathFamily::fixed_natural(n));
    }
    if spec == "css" {
        return file.layout.map(PathFamily::CssString).ok_or_else(|| bad("needs a toric builtin or css:LXxLY".into()));
    }
    if let Some(dims) = spec.strip_prefix("css:") {
        let (a, b) = dims.split_once('x').ok_or_else(|| bad("expected css:LXxLY".into()))?;
        let lx = a.parse().map_err(|_| bad(format!("bad width {a:?}")))?;
        let ly = b.parse().map_err(|_| bad(format!("bad height {b:?}")))?;
        return Ok(PathFamily::CssString(TorusLayout { lx, ly }));
    }
    if let Some(list) = spec.strip_prefix("order:") {
        let order = list
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad(format!("bad site {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(PathFamily::FixedOrder(order));
    }
    Err(bad("expected natural, order:..., css or css:LXxLY".into()))
}

fn family(p: &PathArgs, file: &ModelFile) -> Result<Option<PathFamily>, CliError> {
    p.family.as_deref().map(|s| parse_family(s, file)).transpose()
}

fn targets(p: &PathArgs) -> Targets {
    match p.sample {
        Some(count) => Targets::Sample { count, seed: p.seed },
        None => Targets::All,
    }
}

fn barrier(file: &ModelFile, p: &PathArgs) -> Result<BarrierReport, CliError> {
    let l = limits(p);
    Ok(match family(p, file)? {
        None => generalized_barrier_exact(&file.model, &l)?,
        Some(f) => heuristic_barrier(&file.model, &f, targets(p), &l)?,
    })
}

fn verify_config(file: &ModelFile, g: &GridArgs) -> Result<VerifyConfig, CliError> {
    Ok(VerifyConfig {
        family: family(&g.paths, file)?,
        targets: targets(&g.paths),
        epsilon: g.epsilon,
        c_beta: true,
        tol: g.tol,
        limits: limits(&g.paths),
        davies: DaviesLimits::default(),
    })
}

fn run_grid(g: &GridArgs) -> Result<(ModelFile, Vec<f64>, VerifyConfig, Vec<BoundReport>), CliError> {
    let file = load_model(&g.model)?;
    let betas = parse_grid(&g.beta)?;
    if !(g.epsilon > 0.0 && g.epsilon < 1.0) {
        return Err(CliError::Input(format!("epsilon must lie in (0,1), got {}", g.epsilon)));
    }
    let config = verify_config(&file, g)?;
    let rows = bounds::verify(&file.model, &bath_kind(g.bath.bath), &betas, &config)?;
    Ok((file, betas, config, rows))
}

fn header(command: &str, file: &ModelFile, g: &GridArgs, config: &VerifyConfig) -> Vec<(String, String)> {
    let fam = config.family.as_ref().map(|f| f.name()).unwrap_or_else(|| "exact".into());
    let targets = match config.targets {
        Targets::All => "all".to_string(),
        Targets::Sample { count, seed } => format!("sample count={count} seed={seed}"),
    };
    let l = &config.limits;
    vec![
        ("stabgap".into(), format!("{} {command}", env!("CARGO_PKG_VERSION"))),
        ("model".into(), format!("{} ({})", file.model.name().unwrap_or("unnamed"), file.source)),
        ("bath".into(), bath_kind(g.bath.bath).name().into()),
        ("beta".into(), g.beta.clone()),
        ("family".into(), fam),
        ("targets".into(), targets),
        ("seed".into(), g.paths.seed.to_string()),
        ("epsilon".into(), fmt_g(config.epsilon)),
        ("tol".into(), fmt_g(config.tol)),
        (
            "limits".into(),
            format!("exact_barrier_n={} exact_cost_n={} enumerate_n={} path_table_n={}", l.exact_barrier_n, l.exact_cost_n, l.enumerate_n, l.path_table_n),
        ),
    ]
}

fn print_report(out: &mut dyn Write, r: &BoundReport) -> std::io::Result<()> {
    writeln!(out, "beta={}", fmt_g(r.beta))?;
    writeln!(out, "epsilon_bar={} ({})", fmt_energy(&r.epsilon_bar), if r.exact { "exact" } else { "family, valid but possibly loose" })?;
    writeln!(out, "eta_star={}", r.eta_star)?;
    writeln!(out, "h_star={}", fmt_g(r.h_star))?;
    writeln!(out, "delta_max={}", fmt_energy(&r.delta_max))?;
    writeln!(out, "gen_bound={}", fmt_g(r.gen_bound))?;
    writeln!(out, "special_bound={}", r.special_bound.map(fmt_g).unwrap_or_else(|| "n/a (paths visit a site twice)".into()))?;
    writeln!(out, "c_beta={}", fmt_opt(r.c_beta))?;
    writeln!(out, "c_bound={}", fmt_opt(r.c_bound))?;
    writeln!(out, "beta_zero_floor={}", fmt_g(r.beta_zero_floor))?;
    match r.one_d_bounds {
        Some((o, p)) => writeln!(out, "one_d_bounds=obc:{} pbc:{}", fmt_g(o), fmt_g(p))?,
        None => writeln!(out, "one_d_bounds=")?,
    }
    writeln!(out, "lambda_exact={}", fmt_opt(r.lambda_exact))?;
    writeln!(out, "mixing_time={}", fmt_opt(r.mixing_time))?;
    writeln!(out, "pass={}", r.pass)
}

fn print_matrix(out: &mut dyn Write, m: &nalgebra::DMatrix<f64>) -> std::io::Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_g(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Runs a command, writing reports to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { model } => {
            let file = load_model(model)?;
            let m = &file.model;
            writeln!(out, "name={}", m.name().unwrap_or("unnamed"))?;
            writeln!(out, "N={} M={} r={} Δ={}", m.n(), m.m(), m.rank(), fmt_energy(&m.max_bohr()))?;
            writeln!(out, "eg_zero={}", m.eg_is_zero())?;
            writeln!(out, "valid_syndromes=2^{}", m.rank())?;
            Ok(0)
        }
        Command::Barrier { model, paths, out: csv_out } => {
            let file = load_model(model)?;
            let rep = barrier(&file, paths)?;
            writeln!(out, "epsilon_bar={}", fmt_energy(&rep.barrier))?;
            writeln!(out, "exact={}", rep.exact)?;
            writeln!(out, "exhaustive={}", rep.exhaustive)?;
            writeln!(out, "family={}", rep.family)?;
            writeln!(out, "eta_star={}", rep.eta_star)?;
            writeln!(out, "single_visit={}", rep.single_visit)?;
            writeln!(out, "witness_target={}", rep.witness_target)?;
            writeln!(out, "witness_prefix={}", rep.witness_prefix)?;
            let prefixes: Vec<String> = rep.witness_path.prefixes().iter().map(|p| p.to_string()).collect();
            writeln!(out, "witness_path={}", prefixes.join(" "))?;
            if let Some(path) = csv_out {
                let per = rep.per_target.as_ref().ok_or_else(|| CliError::Input("no per-target costs for this mode".into()))?;
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(csv_io)?;
                w.write_record(["target", "cost"]).map_err(csv_io)?;
                for (t, c) in per {
                    w.write_record([t.to_string(), fmt_g(energy_to_f64(c))]).map_err(csv_io)?;
                }
                w.flush()?;
            }
            Ok(0)
        }
        Command::Gap { model, bath, beta, method, dump_block } => {
            let file = load_model(model)?;
            let b = Bath::new(bath_kind(bath.bath), *beta)?;
            let m = match method {
                MethodChoice::Coset => GapMethod::Coset,
                MethodChoice::Full => GapMethod::Full,
            };
            let g = spectral_gap(&file.model, &b, m, &DaviesLimits::default())?;
            writeln!(out, "lambda={}", fmt_g(g.gap))?;
            writeln!(out, "method={}", if m == GapMethod::Coset { "coset" } else { "full" })?;
            writeln!(out, "achieving_rep={}", g.achieving_rep)?;
            writeln!(out, "residual={}", fmt_g(g.residual))?;
            writeln!(out, "cutoff={}", fmt_g(g.cutoff))?;
            if let Some(rep) = dump_block {
                let w = parse_pauli(rep)?;
                let d = Davies::new(&file.model, b)?;
                writeln!(out, "# dirichlet {w}")?;
                print_matrix(out, &d.dirichlet_block(&w)?.matrix)?;
                writeln!(out, "# variance {w}")?;
                print_matrix(out, &d.variance_block(&w)?.matrix)?;
            }
            Ok(0)
        }
        Command::Bound(g) => {
            let (_, _, _, rows) = run_grid(g)?;
            for (i, r) in rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                print_report(out, r)?;
            }
            Ok(0)
        }
        Command::Verify(g) => {
            let (_, _, _, rows) = run_grid(g)?;
            writeln!(out, "beta,lambda_exact,bound,value,margin,status")?;
            let mut ok = true;
            for r in &rows {
                let lam = r.lambda_exact.unwrap_or(f64::NAN);
                for (name, margin) in r.margins() {
                    let pass = margin >= -g.tol;
                    ok &= pass;
                    writeln!(out, "{},{},{name},{},{},{}", fmt_g(r.beta), fmt_g(lam), fmt_g(lam - margin), fmt_g(margin), if pass { "pass" } else { "FAIL" })?;
                }
            }
            writeln!(out, "{}", if ok { "all bounds hold" } else { "bound violated" })?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Sweep { grid, out: path } => {
            let (file, _, config, rows) = run_grid(grid)?;
            let bytes = write_csv(&header("sweep", &file, grid, &config), &rows).map_err(csv_io)?;
            match path {
                Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => out.write_all(&bytes)?,
            }
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Mixing { grid, source } => {
            let (file, _, config, rows) = run_grid(grid)?;
            writeln!(out, "beta,lambda,t_mix")?;
            for r in &rows {
                let lam = match source {
                    LambdaSource::Exact => r.lambda_exact,
                    LambdaSource::Gen => Some(r.gen_bound),
                    LambdaSource::Special => r.special_bound,
                };
                let t = lam.map(|l| bounds::mixing_time_bound(&file.model, r.beta, l, config.epsilon)).transpose()?;
                writeln!(out, "{},{},{}", fmt_g(r.beta), fmt_opt(lam), fmt_opt(t))?;
            }
            Ok(0)
        }
    }
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
