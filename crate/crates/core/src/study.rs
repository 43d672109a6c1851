//! Convergence studies, index-set reports and reference files, as CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gauss1d::{build_family, RuleFamily};
use crate::index::{
    bound_bd, bound_loglog, bound_sg, bound_tp, cardinality_x, cost_bound_sq, cost_exact,
    enumerate_y, max_box_volume, WeightVector,
};
use crate::integrand::Integrand;
use crate::model::{h1_relative_error, AnalyticProblem, DiffusionConfig, DiffusionModel, MomentIntegrand};
use crate::qmc::qmc_integrate_with_checkpoints;
use crate::sparse_quad::{count_distinct_points, IndexSetKind, SparseQuadrature};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Smallest relative noise floor assumed for any reference.
const MIN_NOISE_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Rows enter the slope fit only when their error exceeds this multiple of the
/// reference noise floor.
pub const FLOOR_FACTOR: f64 = 10.0;

/// How dimension weights are derived from the KL expansion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WeightMode {
    /// τ_n = 1/γ_n.
    #[default]
    Tensor,
    /// τ_n rescaled by the coefficient lower bound and k^{-1-δ}.
    Theoretical { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Analytic { r: f64, m: usize },
    Diffusion { config: DiffusionConfig, moments: u32, weight_mode: WeightMode },
}

impl ProblemSpec {
    fn describe(&self) -> String {
        match self {
            ProblemSpec::Analytic { r, m } => format!("problem=analytic r={r} m={m}"),
            ProblemSpec::Diffusion { config, moments, weight_mode } => {
                let mode = match weight_mode {
                    WeightMode::Tensor => "tensor".to_string(),
                    WeightMode::Theoretical { delta } => format!("theoretical delta={delta}"),
                };
                format!(
                    "problem=diffusion nu={} ell={} mean={} h_exp={} trace_tol={} moments={moments} weights={mode}",
                    config.nu, config.ell, config.mean, config.grid_exponent, config.trace_tol
                )
            }
        }
    }
}

/// An instantiated problem.
#[derive(Debug)]
pub enum Problem {
    Analytic(AnalyticProblem),
    Diffusion { model: DiffusionModel, moments: u32, weight_mode: WeightMode },
}

impl Problem {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        Ok(match *spec {
            ProblemSpec::Analytic { r, m } => Problem::Analytic(AnalyticProblem::new(r, m)?),
            ProblemSpec::Diffusion { config, moments, weight_mode } => {
                if !(1..=4).contains(&moments) {
                    return Err(Error::invalid(format!("moments = {moments} must lie in 1..=4")));
                }
                Problem::Diffusion {
                    model: DiffusionModel::new(config)?,
                    moments,
                    weight_mode,
                }
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::Analytic(p) => p.dim(),
            Problem::Diffusion { model, .. } => model.dim(),
        }
    }

    pub fn weights(&self) -> Result<WeightVector> {
        Ok(match self {
            Problem::Analytic(p) => p.profile().weights().clone(),
            Problem::Diffusion { model, weight_mode, .. } => match weight_mode {
                WeightMode::Tensor => model.profile()?.weights().clone(),
                WeightMode::Theoretical { delta } => model.profile_theoretical(*delta)?.weights().clone(),
            },
        })
    }

    pub fn integrand(&self) -> Result<Box<dyn Integrand + '_>> {
        Ok(match self {
            Problem::Analytic(p) => Box::new(p.clone()),
            Problem::Diffusion { model, moments, .. } => Box::new(MomentIntegrand::stacked(model, *moments)?),
        })
    }

    pub fn quantity_names(&self) -> Vec<String> {
        match self {
            Problem::Analytic(_) => vec!["err".into()],
            Problem::Diffusion { moments, .. } => (1..=*moments).map(|p| format!("err_m{p}")).collect(),
        }
    }

    /// Relative error of `values` against `reference`, one entry per quantity:
    /// ℓ^∞ for the analytic problem, discrete H^1 per moment for diffusion.
    pub fn relative_errors(&self, values: &[f64], reference: &[f64]) -> Result<Vec<f64>> {
        match self {
            Problem::Analytic(_) => {
                let num = values
                    .iter()
                    .zip(reference)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                let den = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if den == 0.0 {
                    return Err(Error::invalid("reference is identically zero"));
                }
                Ok(vec![num / den])
            }
            Problem::Diffusion { model, .. } => {
                let n = model.interior_nodes();
                values
                    .chunks(n)
                    .zip(reference.chunks(n))
                    .map(|(u, r)| h1_relative_error(u, r, model.mesh_size()))
                    .collect()
            }
        }
    }
}

/// Levels start, start + step, ..., up to and including stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSchedule {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl LevelSchedule {
    pub fn single(q: f64) -> Self {
        Self { start: q, stop: q, step: 1.0 }
    }

    pub fn levels(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start >= 0.0) {
            return Err(Error::invalid("level schedule bounds must be finite and nonnegative"));
        }
        if !(self.step > 0.0) {
            return Err(Error::invalid(format!("level step {} must be positive", self.step)));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor();
        if count < 0.0 {
            return Err(Error::invalid("level schedule is empty"));
        }
        Ok((0..=count as usize)
            .map(|k| self.start + k as f64 * self.step)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSpec {
    /// The same sparse quadrature at a higher level.
    Sparse { q_ref: f64 },
    /// Halton QMC with 2^log2_n samples.
    Qmc { log2_n: u32 },
    /// A reference file previously written by [`write_reference`].
    File(PathBuf),
}

/// Reference values with a per-quantity relative noise estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub values: Vec<f64>,
    pub noise: Vec<f64>,
    pub provenance: Vec<String>,
}

fn family_for(w: &WeightVector, q: f64) -> RuleFamily {
    let w1 = w.entries().first().copied().unwrap_or(1.0);
    build_family((q / w1).floor() as usize + 1)
}

/// Sparse quadrature of the problem at level `q`.
pub fn sparse_estimate(problem: &Problem, w: &WeightVector, q: f64) -> Result<(SparseQuadrature, Vec<f64>)> {
    let family = family_for(w, q);
    let quad = SparseQuadrature::build(w, q, &family)?;
    let values = quad.apply(problem.integrand()?.as_ref())?;
    Ok((quad, values))
}

pub fn compute_reference(problem: &Problem, spec: &ProblemSpec, reference: &ReferenceSpec) -> Result<Reference> {
    let floor = |noise: Vec<f64>| noise.into_iter().map(|v| v.max(MIN_NOISE_FLOOR)).collect();
    match reference {
        ReferenceSpec::Sparse { q_ref } => {
            let w = problem.weights()?;
            let (quad, values) = sparse_estimate(problem, &w, *q_ref)?;
            let coarser = (q_ref - 1.0).max(0.0);
            let (_, prev) = sparse_estimate(problem, &w, coarser)?;
            let noise = problem.relative_errors(&prev, &values)?;
            Ok(Reference {
                values,
                noise: floor(noise),
                provenance: vec![
                    "method=sparse".into(),
                    spec.describe(),
                    format!("q_ref={q_ref} points={}", quad.union_len()),
                ],
            })
        }
        ReferenceSpec::Qmc { log2_n } => {
            if *log2_n == 0 || *log2_n > 40 {
                return Err(Error::invalid(format!("log2-n = {log2_n} must lie in 1..=40")));
            }
            let n = 1usize << log2_n;
            let integrand = problem.integrand()?;
            let (values, partial) = qmc_integrate_with_checkpoints(integrand.as_ref(), n, &[n / 2])?;
            let noise = problem.relative_errors(&partial[0].1, &values)?;
            Ok(Reference {
                values,
                noise: floor(noise),
                provenance: vec![
                    "method=qmc-halton".into(),
                    spec.describe(),
                    format!("samples=2^{log2_n}"),
                ],
            })
        }
        ReferenceSpec::File(path) => read_reference(path),
    }
}

/// Writes `# key` provenance lines, `# noise_floor <value>` lines, then one
/// value per line with 17 significant digits.
pub fn write_reference(path: &Path, reference: &Reference) -> Result<()> {
    fs::write(path, format_reference(reference)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn format_reference(reference: &Reference) -> String {
    let mut out = String::new();
    for line in &reference.provenance {
        let _ = writeln!(out, "# {line}");
    }
    for v in &reference.noise {
        let _ = writeln!(out, "# noise_floor {}", fmt_f64(*v));
    }
    for v in &reference.values {
        let _ = writeln!(out, "{}", fmt_f64(*v));
    }
    out
}

pub fn read_reference(path: &Path) -> Result<Reference> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reference = Reference {
        values: Vec::new(),
        noise: Vec::new(),
        provenance: Vec::new(),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| {
                Error::invalid(format!("{}:{}: {e}", path.display(), lineno + 1))
            })
        };
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            match comment.strip_prefix("noise_floor ") {
                Some(v) => reference.noise.push(parse(v.trim())?),
                None => reference.provenance.push(comment.to_string()),
            }
        } else {
            reference.values.push(parse(line)?);
        }
    }
    Ok(reference)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub problem: ProblemSpec,
    pub schedule: LevelSchedule,
    pub reference: ReferenceSpec,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<Vec<f64>> {
        let levels = self.schedule.levels()?;
        if let ReferenceSpec::Sparse { q_ref } = self.reference {
            let q_max = levels.last().copied().unwrap_or(0.0);
            if !(q_ref > q_max) {
                return Err(Error::invalid(format!(
                    "reference level {q_ref} must exceed the largest study level {q_max}"
                )));
            }
        }
        Ok(levels)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub q: f64,
    /// Size of the Y-union of tensor grids.
    pub n_points: usize,
    /// Points with nonzero weight, i.e. integrand evaluations.
    pub n_evaluations: usize,
    pub card_x: u128,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub quantities: Vec<String>,
    pub rows: Vec<StudyRow>,
    pub noise_floors: Vec<f64>,
    /// Least-squares slope of log(error) against log(N) per quantity, over
    /// rows above the noise threshold; `None` with fewer than two such rows.
    pub slopes: Vec<Option<f64>>,
    pub provenance: Vec<String>,
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

pub fn run_convergence_study(config: &StudyConfig) -> Result<StudyReport> {
    let levels = config.validate()?;
    let problem = Problem::new(&config.problem)?;
    let reference = compute_reference(&problem, &config.problem, &config.reference)?;
    run_convergence_study_with(&problem, &levels, &reference)
}

/// Study over `levels` against an already computed reference.
pub fn run_convergence_study_with(problem: &Problem, levels: &[f64], reference: &Reference) -> Result<StudyReport> {
    let quantities = problem.quantity_names();
    let noise_floors = if reference.noise.len() == quantities.len() {
        reference.noise.clone()
    } else {
        vec![MIN_NOISE_FLOOR; quantities.len()]
    };
    let w = problem.weights()?;
    let mut rows = Vec::with_capacity(levels.len());
    for &q in levels {
        let (quad, values) = sparse_estimate(problem, &w, q)?;
        if values.len() != reference.values.len() {
            return Err(Error::invalid(format!(
                "reference holds {} values, the problem produces {}",
                reference.values.len(),
                values.len()
            )));
        }
        rows.push(StudyRow {
            q,
            n_points: quad.union_len(),
            n_evaluations: quad.len(),
            card_x: cardinality_x(&w, q)?,
            errors: problem.relative_errors(&values, &reference.values)?,
        });
    }
    let slopes = (0..quantities.len())
        .map(|k| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.errors[k] > FLOOR_FACTOR * noise_floors[k])
                .map(|r| (r.n_points as f64, r.errors[k]))
                .collect();
            loglog_slope(&pts)
        })
        .collect();
    Ok(StudyReport {
        quantities,
        rows,
        noise_floors,
        slopes,
        provenance: reference.provenance.clone(),
    })
}

impl StudyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.provenance {
            let _ = writeln!(out, "# reference {line}");
        }
        let _ = writeln!(out, "q,N_points,card_X,{},N_evaluations", self.quantities.join(","));
        for row in &self.rows {
            let errs: Vec<String> = row.errors.iter().map(|e| fmt_f64(*e)).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(row.q),
                row.n_points,
                row.card_x,
                errs.join(","),
                row.n_evaluations
            );
        }
        for ((name, slope), floor) in self.quantities.iter().zip(&self.slopes).zip(&self.noise_floors) {
            let slope = slope.map_or_else(|| "NaN".to_string(), fmt_f64);
            let _ = writeln!(out, "# slope,{name},{slope},noise_floor,{}", fmt_f64(*floor));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexSetRow {
    pub q: f64,
    pub card_x: u128,
    pub card_y: usize,
    pub bound_sg: f64,
    pub bound_bd: f64,
    pub bound_tp: f64,
    /// `None` when m < 3.
    pub bound_loglog: Option<f64>,
    pub max_box: u128,
    pub cost_exact: u128,
    pub cost_sq: u128,
    /// Size of the Y-union of tensor grids, when requested.
    pub points_y_union: Option<usize>,
}

/// Per-level cardinalities, bounds and costs for a weight vector.
pub fn run_indexset_report(
    w: &WeightVector,
    schedule: &LevelSchedule,
    r: f64,
    with_point_union: bool,
) -> Result<Vec<IndexSetRow>> {
    let levels = schedule.levels()?;
    let q_max = levels.last().copied().unwrap_or(0.0);
    let family = family_for(w, q_max);
    levels
        .into_iter()
        .map(|q| {
            Ok(IndexSetRow {
                q,
                card_x: cardinality_x(w, q)?,
                card_y: enumerate_y(w, q)?.len(),
                bound_sg: bound_sg(w, q),
                bound_bd: bound_bd(w, q),
                bound_tp: bound_tp(w, q),
                bound_loglog: bound_loglog(q, w.dim(), r).ok(),
                max_box: max_box_volume(w, q)?,
                cost_exact: cost_exact(w, q, &family)?,
                cost_sq: cost_bound_sq(w, q)?,
                points_y_union: if with_point_union {
                    Some(count_distinct_points(w, q, &family, IndexSetKind::Y)?)
                } else {
                    None
                },
            })
        })
        .collect()
}

/// CSV with columns q, card_X, card_Y, bound_sg, bound_bd, bound_tp,
/// bound_loglog, max_box, cost_exact, cost_sq.
pub fn indexset_stats_csv(rows: &[IndexSetRow]) -> String {
    let mut out = String::from("q,card_X,card_Y,bound_sg,bound_bd,bound_tp,bound_loglog,max_box,cost_exact,cost_sq\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.q),
            r.card_x,
            r.card_y,
            fmt_f64(r.bound_sg),
            fmt_f64(r.bound_bd),
            fmt_f64(r.bound_tp),
            r.bound_loglog.map_or_else(|| "NaN".to_string(), fmt_f64),
            r.max_box,
            r.cost_exact,
            r.cost_sq
        );
    }
    out
}

/// Nodes and weights of one rule: columns index, node, weight.
pub fn rule_csv(family: &RuleFamily, level: usize) -> String {
    let rule = family.rule(level);
    let mut out = String::from("index,node,weight\n");
    for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_f64(*x), fmt_f64(*w));
    }
    out
}

/// Points (original dimension order) and weights, one row per point.
pub fn grid_csv(quad: &SparseQuadrature) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=quad.dim()).map(|n| format!("y{n}")).collect();
    let _ = writeln!(out, "{},weight", header.join(","));
    let mut y = vec![0.0; quad.dim()];
    for (i, w) in quad.weights().iter().enumerate() {
        quad.fill_point(i, &mut y);
        let cells: Vec<String> = y.iter().map(|v| fmt_f64(*v)).collect();
        let _ = writeln!(out, "{},{}", cells.join(","), fmt_f64(*w));
    }
    out
}

/// Parses a weight file: one positive decimal per line, in original
/// dimension order. Blank lines and `#` comments are ignored.
pub fn parse_weight_file(text: &str) -> Result<WeightVector> {
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|e| Error::invalid(format!("weight file line {}: {e}", lineno + 1)))?;
        raw.push(v);
    }
    if raw.is_empty() {
        return Err(Error::invalid("weight file holds no weights"));
    }
    WeightVector::new(raw)
}
