//! `projssa` — SSA with projection over CSV files.
//!
//! Subcommands: `generate` (synthetic series), `decompose` (eigentriple
//! summary and vectors), `reconstruct` (grouped components), `bench`
//! (Monte Carlo RMSE comparison). Exit codes: 0 success, 2 usage or
//! config error, 3 numeric/validation error; every failure prints a
//! single `error[<code>]: <message>` line to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use projssa::bench::{parse_config, parse_index_list, run_experiment};
use projssa::decomposition::{basic_ssa, Decomposition, DEFAULT_RANK_TOLERANCE};
use projssa::error::SsaError;
use projssa::io;
use projssa::projection::{
    polynomial_basis, proj_ssa_with_tolerance, ProjectionBasis, ProjectionSpec,
};
use projssa::reconstruction::{reconstruct, Grouping};
use projssa::series::TimeSeries;
use projssa::signals::{gaussian_noise, generate, Root, RootSpec};
use projssa::Result;

#[derive(Parser)]
#[command(
    name = "projssa",
    version,
    about = "Singular spectrum analysis with subspace projection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic series (trend + sinusoids + seeded noise) as CSV.
    Generate(GenerateArgs),
    /// Decompose a series; write eigentriple summary and vector files.
    Decompose(DecomposeArgs),
    /// Decompose and reconstruct grouped components as CSV columns.
    Reconstruct(ReconstructArgs),
    /// Run a Monte Carlo RMSE comparison from a config file and/or flags.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Series length N
    #[arg(long)]
    length: usize,
    /// Linear trend `slope,intercept`
    #[arg(long, allow_hyphen_values = true)]
    linear: Option<String>,
    /// Cubic trend coefficient (`c` in c * n^3)
    #[arg(long, allow_hyphen_values = true)]
    cubic: Option<f64>,
    /// Sinusoid `amplitude,frequency[,phase]`; repeatable
    #[arg(long, allow_hyphen_values = true)]
    sine: Vec<String>,
    /// General root `modulus,frequency,multiplicity,phase,c0[,c1,...]`; repeatable
    #[arg(long, allow_hyphen_values = true)]
    root: Vec<String>,
    /// Gaussian noise standard deviation
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Noise seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Window length L
    #[arg(long)]
    window: usize,
    /// Row projection onto polynomials of degree q-1 (0 = none)
    #[arg(long, default_value_t = 0, conflicts_with = "row_basis")]
    row_proj: usize,
    /// Column projection onto polynomials of degree p-1 (0 = none)
    #[arg(long, default_value_t = 0, conflicts_with = "col_basis")]
    col_proj: usize,
    /// Explicit row basis CSV (one vector per column, K rows)
    #[arg(long)]
    row_basis: Option<PathBuf>,
    /// Explicit column basis CSV (one vector per column, L rows)
    #[arg(long)]
    col_basis: Option<PathBuf>,
    /// Relative singular-value cutoff
    #[arg(long, default_value_t = DEFAULT_RANK_TOLERANCE)]
    rank_tolerance: f64,
    /// Output prefix: writes `<prefix>_triples.csv`, `<prefix>_left.csv`, `<prefix>_right.csv`
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    input: PathBuf,
    /// Window length L
    #[arg(long)]
    window: usize,
    /// Row projection onto polynomials of degree q-1 (0 = none)
    #[arg(long, default_value_t = 0)]
    row_proj: usize,
    /// Column projection onto polynomials of degree p-1 (0 = none)
    #[arg(long, default_value_t = 0)]
    col_proj: usize,
    /// Group spec `name=1,2;name2=3-5`; omitted: the projection block as `trend`
    #[arg(long)]
    groups: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Flat key-value config file; flags below override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    /// `linear(a,b)` or `cubic(c)`
    #[arg(long)]
    trend: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<String>,
    /// Frequency grid, e.g. `0.02:0.1:0.005` or `0.05,0.1`
    #[arg(long)]
    omegas: Option<String>,
    /// Phase set, e.g. `0,1.5707963267948966`
    #[arg(long, allow_hyphen_values = true)]
    phases: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    replications: Option<String>,
    #[arg(long)]
    base_seed: Option<String>,
    /// e.g. `regression(1), projssa(1,1), basic-ssa(1-2)+refit`
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error[{}]: {error}", error.code());
            ExitCode::from(if error.is_usage() { 2 } else { 3 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let mut roots: Vec<Root> = Vec::new();
    if let Some(linear) = &args.linear {
        let v = parse_numbers(linear, 2, 2, "--linear expects `slope,intercept`")?;
        roots.extend(RootSpec::linear(v[0], v[1])?.roots().to_vec());
    }
    if let Some(coeff) = args.cubic {
        roots.extend(
            RootSpec::polynomial(&[0.0, 0.0, 0.0, coeff])?
                .roots()
                .to_vec(),
        );
    }
    for sine in &args.sine {
        let v = parse_numbers(sine, 2, 3, "--sine expects `amplitude,frequency[,phase]`")?;
        let phase = v.get(2).copied().unwrap_or(0.0);
        roots.extend(RootSpec::sine(v[0], v[1], phase)?.roots().to_vec());
    }
    for root in &args.root {
        let v = parse_numbers(
            root,
            5,
            usize::MAX,
            "--root expects `modulus,frequency,multiplicity,phase,c0[,c1,...]`",
        )?;
        if v[2].fract() != 0.0 || v[2] < 1.0 {
            return Err(SsaError::Parse(format!(
                "bad multiplicity in --root `{root}`"
            )));
        }
        roots.push(Root {
            modulus: v[0],
            frequency: v[1],
            multiplicity: v[2] as usize,
            phase: v[3],
            coeffs: v[4..].to_vec(),
        });
    }

    let mut series = match roots.is_empty() {
        true => TimeSeries::from_fn(args.length, |_| 0.0)?,
        false => generate(&RootSpec::new(roots)?, args.length)?,
    };
    if args.sigma != 0.0 {
        series = series.add(&gaussian_noise(args.length, args.sigma, args.seed)?)?;
    }
    io::write_series_csv(&args.output, &series)
}

fn load_spec(
    series_len: usize,
    window: usize,
    row_proj: usize,
    col_proj: usize,
    row_basis: Option<&PathBuf>,
    col_basis: Option<&PathBuf>,
) -> Result<Option<ProjectionSpec>> {
    if window <= 1 || window >= series_len {
        return Err(SsaError::WindowOutOfRange { window, series_len });
    }
    let lag_count = series_len - window + 1;
    let row = basis_from(row_proj, row_basis, lag_count, "row")?;
    let col = basis_from(col_proj, col_basis, window, "column")?;
    match (row, col) {
        (None, None) => Ok(None),
        (row, col) => Ok(Some(ProjectionSpec::new(row, col)?)),
    }
}

fn basis_from(
    count: usize,
    file: Option<&PathBuf>,
    ambient: usize,
    side: &str,
) -> Result<Option<ProjectionBasis>> {
    match (count, file) {
        (0, None) => Ok(None),
        (0, Some(path)) => {
            let (basis, dropped) = io::read_basis_csv(path, ambient)?;
            if dropped > 0 {
                eprintln!(
                    "warning: dropped {dropped} dependent {side}-basis vector(s) from {}",
                    path.display()
                );
            }
            Ok(Some(basis))
        }
        (q, None) => Ok(Some(polynomial_basis(ambient, q - 1)?)),
        (_, Some(_)) => Err(SsaError::ConfigInvalid(format!(
            "--{side}-proj and --{side}-basis are mutually exclusive"
        ))),
    }
}

fn decompose_series(
    series: &TimeSeries,
    window: usize,
    spec: Option<ProjectionSpec>,
    rank_tolerance: f64,
) -> Result<Decomposition> {
    match spec {
        Some(spec) => proj_ssa_with_tolerance(series, window, &spec, rank_tolerance),
        None => basic_ssa(series, window),
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Result<()> {
    let series = io::read_series_csv(&args.input)?;
    let spec = load_spec(
        series.len(),
        args.window,
        args.row_proj,
        args.col_proj,
        args.row_basis.as_ref(),
        args.col_basis.as_ref(),
    )?;
    let decomposition = decompose_series(&series, args.window, spec, args.rank_tolerance)?;

    let prefix = args.output.as_os_str().to_string_lossy().into_owned();
    io::write_triples_csv(
        &PathBuf::from(format!("{prefix}_triples.csv")),
        &decomposition,
    )?;
    io::write_vectors_csv(
        &PathBuf::from(format!("{prefix}_left.csv")),
        &decomposition,
        true,
    )?;
    io::write_vectors_csv(
        &PathBuf::from(format!("{prefix}_right.csv")),
        &decomposition,
        false,
    )?;
    Ok(())
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<()> {
    let series = io::read_series_csv(&args.input)?;
    let spec = load_spec(
        series.len(),
        args.window,
        args.row_proj,
        args.col_proj,
        None,
        None,
    )?;
    let decomposition = decompose_series(&series, args.window, spec, DEFAULT_RANK_TOLERANCE)?;

    let grouping = match &args.groups {
        Some(text) => parse_groups(text)?,
        None => {
            let block = decomposition.projection_count();
            if block == 0 {
                return Err(SsaError::ConfigInvalid(
                    "--groups is required when no projection is configured".into(),
                ));
            }
            Grouping::new(vec![("trend".into(), (1..=block).collect())])?
        }
    };
    let components = reconstruct(&decomposition, &grouping)?;
    io::write_reconstruction_csv(&args.output, &components)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut document = match &args.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    for (key, value) in [
        ("n", &args.n),
        ("l", &args.l),
        ("trend", &args.trend),
        ("amplitude", &args.amplitude),
        ("omegas", &args.omegas),
        ("phases", &args.phases),
        ("sigma", &args.sigma),
        ("replications", &args.replications),
        ("base_seed", &args.base_seed),
        ("methods", &args.methods),
    ] {
        if let Some(value) = value {
            document.push_str(&format!("\n{key} = {value}\n"));
        }
    }
    let config = parse_config(&document)?;
    let result = run_experiment(&config)?;
    io::write_result_csv(&args.output, &result)
}

/// `name=1,2;name2=3-5`
fn parse_groups(text: &str) -> Result<Grouping> {
    let mut groups = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, indices) = part
            .split_once('=')
            .ok_or_else(|| SsaError::Parse(format!("group `{part}` must look like `name=1,2`")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(SsaError::Parse("empty group name".into()));
        }
        let indices = parse_index_list(&[indices.trim().to_string()])?;
        groups.push((name.to_string(), indices));
    }
    if groups.is_empty() {
        return Err(SsaError::Parse("empty group spec".into()));
    }
    Grouping::new(groups)
}

fn parse_numbers(text: &str, min: usize, max: usize, usage: &str) -> Result<Vec<f64>> {
    let values: std::result::Result<Vec<f64>, _> = text
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect();
    match values {
        Ok(values) if values.len() >= min && values.len() <= max => Ok(values),
        _ => Err(SsaError::Parse(format!("{usage}, got `{text}`"))),
    }
}
