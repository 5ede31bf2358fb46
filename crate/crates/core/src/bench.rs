//! Monte Carlo comparison harness.
//!
//! Builds synthetic series `x_n = t_n + A sin(2 pi omega n + phi) + eps_n`
//! over a grid of frequencies and phases, runs each configured trend
//! estimator on every noise replication, and aggregates root-mean-square
//! errors against the true trend. Replication `i` always uses seed
//! `base_seed + i`, and accumulation is replication-major, so results
//! are bit-identical across runs (and across thread counts: replications
//! run in parallel but are reduced in index order).

use rayon::prelude::*;

use crate::decomposition::basic_ssa;
use crate::error::SsaError;
use crate::projection::{proj_ssa, projssa_spec};
use crate::reconstruction::{augment_trend_group, reconstruct};
use crate::regression::{polyfit, refit};
use crate::series::TimeSeries;
use crate::signals::gaussian_noise;
use crate::Result;

/// The deterministic trend of the synthetic model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrendSpec {
    /// `slope * n + intercept`
    Linear { slope: f64, intercept: f64 },
    /// `coeff * n^3`
    Cubic { coeff: f64 },
}

impl TrendSpec {
    pub fn value(&self, n: usize) -> f64 {
        match self {
            TrendSpec::Linear { slope, intercept } => slope * n as f64 + intercept,
            TrendSpec::Cubic { coeff } => coeff * (n as f64).powi(3),
        }
    }

    /// Degree used by refit variants and regression defaults.
    pub fn degree(&self) -> usize {
        match self {
            TrendSpec::Linear { .. } => 1,
            TrendSpec::Cubic { .. } => 3,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (name, args) = split_call(text)?;
        match name {
            "linear" => {
                let v = parse_f64_args(&args, 2, text)?;
                Ok(TrendSpec::Linear {
                    slope: v[0],
                    intercept: v[1],
                })
            }
            "cubic" => {
                let v = parse_f64_args(&args, 1, text)?;
                Ok(TrendSpec::Cubic { coeff: v[0] })
            }
            _ => Err(SsaError::Parse(format!("unknown trend `{text}`"))),
        }
    }
}

impl std::fmt::Display for TrendSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrendSpec::Linear { slope, intercept } => write!(f, "linear({slope},{intercept})"),
            TrendSpec::Cubic { coeff } => write!(f, "cubic({coeff})"),
        }
    }
}

/// A trend estimator entering the comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Basic SSA reconstructed from the given 1-based eigentriple set.
    BasicSsa { group: Vec<usize>, refit: bool },
    /// SSA with projection; the trend is the projection block.
    ProjSsa {
        row_count: usize,
        col_count: usize,
        refit: bool,
    },
    /// Plain polynomial least squares of the given degree.
    Regression { degree: usize },
}

impl Method {
    /// Parses the mini-grammar used in config files and on the command
    /// line: `regression(d)`, `projssa(q,p)`, `basic-ssa(1-2)` or
    /// `basic-ssa(1,2,5)`, with an optional `+refit` suffix on the SSA
    /// methods.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (body, with_refit) = match trimmed.strip_suffix("+refit") {
            Some(stripped) => (stripped.trim(), true),
            None => (trimmed, false),
        };
        let (name, args) = split_call(body)?;
        match name {
            "regression" => {
                if with_refit {
                    return Err(SsaError::Parse(format!(
                        "`{text}`: refit applies to SSA methods only"
                    )));
                }
                let v = parse_f64_args(&args, 1, text)?;
                if v[0] < 0.0 || v[0].fract() != 0.0 {
                    return Err(SsaError::Parse(format!(
                        "bad regression degree in `{text}`"
                    )));
                }
                Ok(Method::Regression {
                    degree: v[0] as usize,
                })
            }
            "projssa" => {
                let v = parse_f64_args(&args, 2, text)?;
                if v.iter().any(|x| *x < 0.0 || x.fract() != 0.0) {
                    return Err(SsaError::Parse(format!("bad projssa counts in `{text}`")));
                }
                Ok(Method::ProjSsa {
                    row_count: v[0] as usize,
                    col_count: v[1] as usize,
                    refit: with_refit,
                })
            }
            "basic-ssa" => Ok(Method::BasicSsa {
                group: parse_index_list(&args)?,
                refit: with_refit,
            }),
            _ => Err(SsaError::Parse(format!("unknown method `{text}`"))),
        }
    }

    fn refit_suffix(refit: bool) -> &'static str {
        if refit {
            "+refit"
        } else {
            ""
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::BasicSsa { group, refit } => write!(
                f,
                "basic-ssa({}){}",
                render_index_list(group),
                Method::refit_suffix(*refit)
            ),
            Method::ProjSsa {
                row_count,
                col_count,
                refit,
            } => write!(
                f,
                "projssa({row_count},{col_count}){}",
                Method::refit_suffix(*refit)
            ),
            Method::Regression { degree } => write!(f, "regression({degree})"),
        }
    }
}

/// Declarative description of one Monte Carlo comparison.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Series length N.
    pub n: usize,
    /// Window length L.
    pub l: usize,
    pub trend: TrendSpec,
    /// Amplitude A of the periodic component.
    pub amplitude: f64,
    /// Frequency grid for the periodic component.
    pub omegas: Vec<f64>,
    /// Phase set for the periodic component.
    pub phases: Vec<f64>,
    /// Noise standard deviation.
    pub sigma: f64,
    /// Number of noise replications M.
    pub replications: usize,
    /// Replication i uses seed `base_seed + i`.
    pub base_seed: u64,
    pub methods: Vec<Method>,
}

impl ExperimentConfig {
    /// Checks the structural invariants and per-method parameter
    /// consistency (basis sizes against L and K, ET indices against the
    /// largest possible rank, regression degree against N).
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(SsaError::ConfigInvalid(format!("n = {} too small", self.n)));
        }
        if self.l <= 1 || self.l >= self.n {
            return Err(SsaError::ConfigInvalid(format!(
                "window l = {} must satisfy 1 < l < n = {}",
                self.l, self.n
            )));
        }
        if self.replications == 0 {
            return Err(SsaError::ConfigInvalid("replications must be >= 1".into()));
        }
        if self.omegas.is_empty() {
            return Err(SsaError::ConfigInvalid("omega grid is empty".into()));
        }
        if self.phases.is_empty() {
            return Err(SsaError::ConfigInvalid("phase set is empty".into()));
        }
        if self.methods.is_empty() {
            return Err(SsaError::ConfigInvalid("no methods configured".into()));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(SsaError::ConfigInvalid(format!("bad sigma {}", self.sigma)));
        }
        if !self.amplitude.is_finite() {
            return Err(SsaError::ConfigInvalid("bad amplitude".into()));
        }
        let k = self.n - self.l + 1;
        let max_rank = self.l.min(k);
        for method in &self.methods {
            match method {
                Method::ProjSsa {
                    row_count,
                    col_count,
                    ..
                } => {
                    if row_count + col_count == 0 {
                        return Err(SsaError::ConfigInvalid(
                            "projssa(0,0) performs no projection".into(),
                        ));
                    }
                    if *row_count > k || *col_count > self.l {
                        return Err(SsaError::ConfigInvalid(format!(
                            "projssa({row_count},{col_count}) exceeds K = {k} or L = {}",
                            self.l
                        )));
                    }
                }
                Method::BasicSsa { group, .. } => {
                    if group.is_empty() {
                        return Err(SsaError::ConfigInvalid(
                            "basic-ssa needs an explicit eigentriple set".into(),
                        ));
                    }
                    if let Some(&max) = group.iter().max() {
                        if max > max_rank {
                            return Err(SsaError::ConfigInvalid(format!(
                                "basic-ssa eigentriple {max} exceeds min(L, K) = {max_rank}"
                            )));
                        }
                    }
                }
                Method::Regression { degree } => {
                    if degree + 1 > self.n {
                        return Err(SsaError::ConfigInvalid(format!(
                            "regression degree {degree} too large for n = {}",
                            self.n
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One aggregated cell of an experiment.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub method: String,
    pub omega: f64,
    pub phase: f64,
    pub rmse: f64,
    pub replications: usize,
    pub base_seed: u64,
}

/// All cells of an experiment, one row per (omega, phase, method).
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
}

impl ExperimentResult {
    pub fn row(&self, method: &str, omega: f64, phase: f64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.omega == omega && r.phase == phase)
    }

    /// RMSE column for one method in row order.
    pub fn method_rmse(&self, method: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.rmse)
            .collect()
    }

    /// CSV rendering with 17 significant digits on floating-point columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,omega,phase,rmse,replications,base_seed\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{},{}\n",
                row.method, row.omega, row.phase, row.rmse, row.replications, row.base_seed
            ));
        }
        out
    }
}

/// Applies one method to one realization, returning its trend estimate.
pub fn method_trend_estimate(
    method: &Method,
    series: &TimeSeries,
    config: &ExperimentConfig,
) -> Result<TimeSeries> {
    match method {
        Method::Regression { degree } => polyfit(series, *degree)?.evaluate(series.len()),
        Method::BasicSsa {
            group,
            refit: with_refit,
        } => {
            let decomposition = basic_ssa(series, config.l)?;
            let grouping = augment_trend_group(&decomposition, group)?;
            let trend = take_trend(reconstruct(&decomposition, &grouping)?);
            if *with_refit {
                refit(&trend, config.trend.degree())
            } else {
                Ok(trend)
            }
        }
        Method::ProjSsa {
            row_count,
            col_count,
            refit: with_refit,
        } => {
            let k = series.len() - config.l + 1;
            let spec =
                projssa_spec(*row_count, *col_count, config.l, k)?.ok_or(SsaError::NoProjector)?;
            let decomposition = proj_ssa(series, config.l, &spec)?;
            let grouping = augment_trend_group(&decomposition, &[])?;
            let trend = take_trend(reconstruct(&decomposition, &grouping)?);
            if *with_refit {
                refit(&trend, config.trend.degree())
            } else {
                Ok(trend)
            }
        }
    }
}

fn take_trend(components: Vec<(String, TimeSeries)>) -> TimeSeries {
    components
        .into_iter()
        .find(|(name, _)| name == "trend")
        .expect("augment_trend_group always names a trend group")
        .1
}

/// Runs the full grid.
///
/// For each `(omega, phase)` cell and each replication `i`, the series
/// `trend + A sin(2 pi omega n + phase) + noise(base_seed + i)` is built
/// once and handed to every method; squared errors accumulate per
/// replication and are reduced in replication order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let n = config.n;
    let truth = TimeSeries::from_fn(n, |i| config.trend.value(i))?;

    let mut rows = Vec::new();
    for &omega in &config.omegas {
        for &phase in &config.phases {
            let clean = TimeSeries::from_fn(n, |i| {
                config.trend.value(i)
                    + config.amplitude
                        * (2.0 * std::f64::consts::PI * omega * i as f64 + phase).sin()
            })?;

            // per replication: the sum of squared errors of every method
            let partials: Vec<Result<Vec<f64>>> = (0..config.replications)
                .into_par_iter()
                .map(|i| {
                    let seed = config.base_seed.wrapping_add(i as u64);
                    let series = if config.sigma > 0.0 {
                        clean.add(&gaussian_noise(n, config.sigma, seed)?)?
                    } else {
                        clean.clone()
                    };
                    config
                        .methods
                        .iter()
                        .map(|method| {
                            let estimate = method_trend_estimate(method, &series, config)?;
                            Ok(estimate
                                .values()
                                .iter()
                                .zip(truth.values())
                                .map(|(e, t)| (e - t) * (e - t))
                                .sum())
                        })
                        .collect()
                })
                .collect();

            let mut totals = vec![0.0f64; config.methods.len()];
            for partial in partials {
                for (total, sse) in totals.iter_mut().zip(partial?) {
                    *total += sse;
                }
            }
            let denominator = (config.replications * n) as f64;
            for (method, total) in config.methods.iter().zip(totals) {
                rows.push(ResultRow {
                    method: method.to_string(),
                    omega,
                    phase,
                    rmse: (total / denominator).sqrt(),
                    replications: config.replications,
                    base_seed: config.base_seed,
                });
            }
        }
    }
    Ok(ExperimentResult { rows })
}

/// Parses the flat `key = value` config document. Keys: `n`, `l`,
/// `trend`, `amplitude`, `omegas`, `phases`, `sigma`, `replications`,
/// `base_seed`, `methods`. Lines starting with `#` and blank lines are
/// ignored. Unset keys with defaults: `amplitude` 0, `phases` `0`,
/// `sigma` 0, `replications` 1, `base_seed` 0.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut n = None;
    let mut l = None;
    let mut trend = None;
    let mut amplitude = 0.0;
    let mut omegas = None;
    let mut phases = vec![0.0];
    let mut sigma = 0.0;
    let mut replications = 1usize;
    let mut base_seed = 0u64;
    let mut methods = None;

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            SsaError::Parse(format!("line {}: expected `key = value`", line_no + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "n" => n = Some(parse_usize(value)?),
            "l" => l = Some(parse_usize(value)?),
            "trend" => trend = Some(TrendSpec::parse(value)?),
            "amplitude" => amplitude = parse_f64(value)?,
            "omegas" => omegas = Some(parse_grid(value)?),
            "phases" => phases = parse_grid(value)?,
            "sigma" => sigma = parse_f64(value)?,
            "replications" => replications = parse_usize(value)?,
            "base_seed" => {
                base_seed = value
                    .parse()
                    .map_err(|_| SsaError::Parse(format!("bad base_seed `{value}`")))?
            }
            "methods" => methods = Some(parse_methods(value)?),
            _ => return Err(SsaError::Parse(format!("unknown config key `{key}`"))),
        }
    }

    let config = ExperimentConfig {
        n: n.ok_or_else(|| SsaError::ConfigInvalid("missing key `n`".into()))?,
        l: l.ok_or_else(|| SsaError::ConfigInvalid("missing key `l`".into()))?,
        trend: trend.ok_or_else(|| SsaError::ConfigInvalid("missing key `trend`".into()))?,
        amplitude,
        omegas: omegas.ok_or_else(|| SsaError::ConfigInvalid("missing key `omegas`".into()))?,
        phases,
        sigma,
        replications,
        base_seed,
        methods: methods.ok_or_else(|| SsaError::ConfigInvalid("missing key `methods`".into()))?,
    };
    config.validate()?;
    Ok(config)
}

/// Comma-separated list of methods.
pub fn parse_methods(text: &str) -> Result<Vec<Method>> {
    split_top_level(text)
        .into_iter()
        .map(|token| Method::parse(&token))
        .collect()
}

/// A grid token list: numbers and `start:stop:step` ranges, comma
/// separated. Range endpoints are generated as `start + i * step` so
/// grids are reproducible digit for digit.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if let Some((start, rest)) = token.split_once(':') {
            let (stop, step) = rest
                .split_once(':')
                .ok_or_else(|| SsaError::Parse(format!("bad range `{token}`")))?;
            let (start, stop, step) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
            if step <= 0.0 || stop < start {
                return Err(SsaError::Parse(format!("bad range `{token}`")));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize;
            for i in 0..=count {
                out.push(start + i as f64 * step);
            }
        } else {
            out.push(parse_f64(token)?);
        }
    }
    Ok(out)
}

fn split_call(text: &str) -> Result<(&str, Vec<String>)> {
    let text = text.trim();
    let open = text
        .find('(')
        .ok_or_else(|| SsaError::Parse(format!("expected `name(args)` in `{text}`")))?;
    if !text.ends_with(')') {
        return Err(SsaError::Parse(format!(
            "unbalanced parentheses in `{text}`"
        )));
    }
    let name = text[..open].trim();
    let args = text[open + 1..text.len() - 1]
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Ok((name, args))
}

fn parse_f64(text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| SsaError::Parse(format!("bad number `{text}`")))
}

fn parse_usize(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| SsaError::Parse(format!("bad integer `{text}`")))
}

fn parse_f64_args(args: &[String], expected: usize, context: &str) -> Result<Vec<f64>> {
    if args.len() != expected {
        return Err(SsaError::Parse(format!(
            "`{context}`: expected {expected} argument(s), got {}",
            args.len()
        )));
    }
    args.iter().map(|a| parse_f64(a)).collect()
}

/// 1-based indices written as `1,2,5` and/or ranges `1-4`.
pub fn parse_index_list(tokens: &[String]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for token in tokens {
        for part in token.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if let Some((lo, hi)) = part.split_once('-') {
                let (lo, hi): (usize, usize) = (parse_usize(lo)?, parse_usize(hi)?);
                if lo == 0 || hi < lo {
                    return Err(SsaError::Parse(format!("bad index range `{part}`")));
                }
                out.extend(lo..=hi);
            } else {
                let index = parse_usize(part)?;
                if index == 0 {
                    return Err(SsaError::Parse("triple indices are 1-based".into()));
                }
                out.push(index);
            }
        }
    }
    if out.is_empty() {
        return Err(SsaError::Parse("empty index list".into()));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Renders sorted indices compactly, contiguous runs as `a-b`.
fn render_index_list(indices: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut run_start = None;
    let mut prev = None;
    for &index in indices {
        match (run_start, prev) {
            (None, _) => run_start = Some(index),
            (Some(_), Some(p)) if index == p + 1 => {}
            (Some(s), Some(p)) => {
                parts.push(render_run(s, p));
                run_start = Some(index);
            }
            _ => unreachable!(),
        }
        prev = Some(index);
    }
    if let (Some(s), Some(p)) = (run_start, prev) {
        parts.push(render_run(s, p));
    }
    parts.join(",")
}

fn render_run(start: usize, end: usize) -> String {
    if start == end {
        format!("{start}")
    } else {
        format!("{start}-{end}")
    }
}

// split on commas not inside parentheses
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                if !current.trim().is_empty() {
                    out.push(current.trim().to_string());
                }
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            n: 199,
            l: 100,
            trend: TrendSpec::Linear {
                slope: 1.0,
                intercept: -100.0,
            },
            amplitude: 1.0,
            omegas: vec![0.05],
            phases: vec![0.0],
            sigma: 0.0,
            replications: 1,
            base_seed: 0,
            methods: vec![Method::ProjSsa {
                row_count: 1,
                col_count: 1,
                refit: false,
            }],
        }
    }

    #[test]
    fn exact_separability_gives_zero_rmse() {
        let result = run_experiment(&base_config()).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert!(result.rows[0].rmse <= 1e-8, "rmse {}", result.rows[0].rmse);
    }

    #[test]
    fn noiseless_pure_trend_is_recovered_by_every_ssa_method() {
        let mut config = base_config();
        config.amplitude = 0.0;
        config.methods = vec![
            Method::ProjSsa {
                row_count: 1,
                col_count: 1,
                refit: false,
            },
            Method::ProjSsa {
                row_count: 2,
                col_count: 0,
                refit: false,
            },
            Method::BasicSsa {
                group: vec![1, 2],
                refit: false,
            },
        ];
        let result = run_experiment(&config).unwrap();
        for row in &result.rows {
            assert!(row.rmse <= 1e-9, "{}: rmse {}", row.method, row.rmse);
        }
    }

    #[test]
    fn regression_recovers_pure_line() {
        let mut config = base_config();
        config.amplitude = 0.0;
        config.methods = vec![Method::Regression { degree: 1 }];
        let result = run_experiment(&config).unwrap();
        assert!(result.rows[0].rmse <= 1e-10);
    }

    #[test]
    fn runs_are_bit_identical() {
        let mut config = base_config();
        config.sigma = 0.4;
        config.replications = 8;
        config.methods = vec![
            Method::Regression { degree: 1 },
            Method::ProjSsa {
                row_count: 1,
                col_count: 1,
                refit: true,
            },
            Method::BasicSsa {
                group: vec![1, 2],
                refit: false,
            },
        ];
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let mut config = base_config();
        config.sigma = 0.5;
        config.replications = 6;
        config.methods = vec![
            Method::Regression { degree: 1 },
            Method::ProjSsa {
                row_count: 1,
                col_count: 1,
                refit: false,
            },
        ];
        let parallel = run_experiment(&config).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| run_experiment(&config)).unwrap();
        assert_eq!(parallel.to_csv(), serial.to_csv());
    }

    #[test]
    fn config_validation_errors() {
        let mut config = base_config();
        config.methods.clear();
        assert!(matches!(
            run_experiment(&config),
            Err(SsaError::ConfigInvalid(_))
        ));

        let mut config = base_config();
        config.omegas.clear();
        assert!(config.validate().is_err());

        let mut config = base_config();
        config.replications = 0;
        assert!(config.validate().is_err());

        let mut config = base_config();
        config.methods = vec![Method::ProjSsa {
            row_count: 0,
            col_count: 0,
            refit: false,
        }];
        assert!(config.validate().is_err());

        let mut config = base_config();
        config.methods = vec![Method::ProjSsa {
            row_count: 101,
            col_count: 0,
            refit: false,
        }];
        assert!(config.validate().is_err());

        let mut config = base_config();
        config.l = 199;
        assert!(config.validate().is_err());
    }

    #[test]
    fn method_grammar_round_trip() {
        for text in [
            "regression(1)",
            "projssa(1,1)",
            "projssa(2,0)+refit",
            "basic-ssa(1-2)",
            "basic-ssa(1-2,5)+refit",
        ] {
            let method = Method::parse(text).unwrap();
            assert_eq!(method.to_string(), text);
        }
        assert_eq!(
            Method::parse("basic-ssa(1,2,5)").unwrap().to_string(),
            "basic-ssa(1-2,5)"
        );
        assert!(Method::parse("regression(1)+refit").is_err());
        assert!(Method::parse("unknown(1)").is_err());
        assert!(Method::parse("projssa(1)").is_err());
        assert!(Method::parse("basic-ssa(0)").is_err());
    }

    #[test]
    fn grid_parsing() {
        let grid = parse_grid("0.02:0.1:0.005").unwrap();
        assert_eq!(grid.len(), 17);
        assert_eq!(grid[0], 0.02);
        assert!((grid[16] - 0.1).abs() < 1e-12);

        let list = parse_grid("0, 1.5707963267948966").unwrap();
        assert_eq!(list, vec![0.0, std::f64::consts::FRAC_PI_2]);

        assert!(parse_grid("0.1:0.02:0.005").is_err());
        assert!(parse_grid("nope").is_err());
    }

    #[test]
    fn config_document_round_trip() {
        let text = "\
# comparison on a noisy line
n = 199
l = 100
trend = linear(1, -100)
amplitude = 0
omegas = 0.05
sigma = 1
replications = 4
base_seed = 17
methods = regression(1), projssa(1,1), basic-ssa(1-2)
";
        let config = parse_config(text).unwrap();
        assert_eq!(config.n, 199);
        assert_eq!(config.methods.len(), 3);
        assert_eq!(config.phases, vec![0.0]);
        assert_eq!(config.base_seed, 17);

        assert!(parse_config("n = 10\n").is_err()); // missing keys
        assert!(parse_config("bogus = 1\n").is_err());
        assert!(parse_config("n 10\n").is_err());
    }

    #[test]
    fn result_csv_shape() {
        let mut config = base_config();
        config.omegas = vec![0.04, 0.05];
        config.phases = vec![0.0, 1.0];
        config.methods = vec![
            Method::Regression { degree: 1 },
            Method::ProjSsa {
                row_count: 1,
                col_count: 1,
                refit: false,
            },
        ];
        let result = run_experiment(&config).unwrap();
        assert_eq!(result.rows.len(), 2 * 2 * 2);
        let csv = result.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,omega,phase,rmse,replications,base_seed"
        );
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.contains("4.0000000000000001e-2"));
    }
}
