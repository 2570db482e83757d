//! Command implementations. Each writes its result to standard output (or a
//! file) and reports failures through [`CliError`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sbrm_core::limits::{self, density_curve, em_moment_series, mp_moment_series, Law};
use sbrm_core::montecarlo::{empirical_density, run_comparison, BlockGraph, EnsembleParams};
use sbrm_core::polyalg::serial::{rational_from_str, rational_to_string};
use sbrm_core::polyalg::{to_c_form, MomentPoly, Poly, RatFn, Rational};
use sbrm_core::verify::{self, Suite};
use sbrm_core::{averager, tables, Model};
use serde_json::json;
use thiserror::Error;

use crate::cache::Cache;
use crate::{CurveFormat, Format, LawArg, MomentModel, SimModel, SuiteArg};

/// Version of every JSON document printed by the commands.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<sbrm_core::Error> for CliError {
    fn from(e: sbrm_core::Error) -> Self {
        use sbrm_core::Error as E;
        match e {
            E::Domain(_) | E::Parse(_) | E::Parameter(_) => CliError::Usage(e.to_string()),
            E::Invariant(_) | E::Numerical(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}

/// Accepts `p`, `p/q` or a plain decimal `a.b`, all parsed exactly.
pub fn parse_exact(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("not an exact number: {s:?}"));
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num = format!("{int_part}{frac}");
        let den = format!("1{}", "0".repeat(frac.len()));
        return rational_from_str(&format!("{num}/{den}")).map_err(|_| bad());
    }
    rational_from_str(s).map_err(|_| bad())
}

fn show_rational(r: &Rational) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        rational_to_string(r)
    }
}

fn poly_json(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(rational_to_string).collect()
}

fn emit_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

impl MomentModel {
    fn key(self) -> &'static str {
        match self {
            MomentModel::Adjacency => "adjacency",
            MomentModel::Laplacian => "laplacian",
            MomentModel::DiagBlock => "diag-block",
        }
    }

    fn default_cap(self) -> usize {
        match self {
            MomentModel::Adjacency => tables::ADJACENCY_MAX,
            MomentModel::Laplacian => tables::LAPLACIAN_MAX,
            MomentModel::DiagBlock => 8,
        }
    }

    /// Number of objects the computation enumerates at order `n`: tree walks,
    /// or set partitions for the diagonal block.
    fn size_estimate(self, n: usize) -> f64 {
        match self {
            MomentModel::Adjacency => averager::estimated_walk_count(Model::Adjacency, n),
            MomentModel::Laplacian => averager::estimated_walk_count(Model::Laplacian, n),
            MomentModel::DiagBlock => bell_number(n),
        }
    }
}

fn bell_number(n: usize) -> f64 {
    // Bell triangle
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("non-empty row")];
        for x in &row {
            next.push(next.last().expect("non-empty row") + x);
        }
        row = next;
    }
    row[0]
}

pub struct MomentsArgs {
    pub model: MomentModel,
    pub order: usize,
    pub t: Option<String>,
    pub d: Option<String>,
    pub max_order: Option<usize>,
    pub c_form: bool,
    pub format: Format,
}

fn compute_moment(model: MomentModel, order: usize, cache: Option<&Cache>) -> Result<MomentPoly, CliError> {
    let key = Cache::key(model.key(), order);
    if let Some(hit) = cache.and_then(|c| c.load(&key)) {
        eprintln!("cache hit: {} order {order}", model.key());
        return Ok(hit);
    }
    let m = match model {
        MomentModel::Adjacency => averager::moment(Model::Adjacency, order)?,
        MomentModel::Laplacian => averager::moment(Model::Laplacian, order)?,
        MomentModel::DiagBlock => averager::diag_block_moment(order)?,
    };
    if let Some(c) = cache {
        // a failed write only loses the cache entry
        if let Err(e) = c.store(&key, &m) {
            eprintln!("warning: cache write failed: {e}");
        }
    }
    Ok(m)
}

fn moment_at_t(m: &MomentPoly, t: &Rational) -> RatFn {
    m.terms()
        .map(|(k, c)| {
            let tk = num_pow(t, k);
            c.scale(&tk)
        })
        .sum()
}

fn num_pow(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::from_integer(1.into()), |acc, _| acc * x)
}

pub fn moments(a: &MomentsArgs, cache: Option<&Cache>) -> Result<(), CliError> {
    let cap = a.model.default_cap().max(a.max_order.unwrap_or(0));
    let estimate = a.model.size_estimate(a.order);
    if a.order > cap {
        return Err(CliError::Usage(format!(
            "order {} exceeds the cap {cap} for {}; about {estimate:.2e} objects would be enumerated. Pass --max-order {} to proceed.",
            a.order,
            a.model.key(),
            a.order
        )));
    }
    if a.order > a.model.default_cap() {
        eprintln!(
            "warning: {} order {} is beyond the verified range; about {estimate:.2e} objects to enumerate (time grows roughly in proportion)",
            a.model.key(),
            a.order
        );
    }
    let t = a.t.as_deref().map(parse_exact).transpose()?;
    let d = a.d.as_deref().map(parse_exact).transpose()?;
    let m = compute_moment(a.model, a.order, cache)?;

    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "model": a.model.key(),
        "order": a.order,
        "moment": m,
    });
    let mut text = vec![m.display()];
    match (&t, &d) {
        (Some(t), Some(d)) => {
            let v = m.eval(t, d)?;
            doc["evaluation"] = json!({"t": rational_to_string(t), "d": rational_to_string(d), "value": rational_to_string(&v)});
            text = vec![show_rational(&v)];
        }
        (None, Some(d)) => {
            let p = m.at_d(d)?;
            doc["evaluation"] = json!({"d": rational_to_string(d), "t_coeffs": poly_json(&p)});
            text = vec![p.display_with("t")];
        }
        (Some(t), None) => {
            let f = moment_at_t(&m, t);
            doc["evaluation"] = json!({"t": rational_to_string(t), "value": f});
            text = vec![f.display()];
        }
        (None, None) => {}
    }
    if a.c_form {
        let c = to_c_form(&m);
        doc["c_form"] = json!({"text": c, "canonical": false});
        text.push(format!("c-form (display only, not canonical): {c}"));
    }
    match a.format {
        Format::Json => emit_json(&doc),
        Format::Text => text.iter().for_each(|l| println!("{l}")),
    }
    Ok(())
}

pub fn limit_moments(model: MomentModel, order: usize, t: Option<&str>, format: Format) -> Result<(), CliError> {
    let p = match model {
        MomentModel::Adjacency => em_moment_series(order).coeff(order),
        MomentModel::Laplacian => mp_moment_series(order).coeff(order),
        MomentModel::DiagBlock if order == 0 => Poly::one(),
        MomentModel::DiagBlock => limits::narayana(order as u64)?,
    };
    let value = t.map(parse_exact).transpose()?.map(|t| p.eval(&t));
    match format {
        Format::Json => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "model": model.key(),
                "order": order,
                "t_coeffs": poly_json(&p),
            });
            if let (Some(v), Some(t)) = (&value, t) {
                doc["evaluation"] = json!({"t": rational_to_string(&parse_exact(t)?), "value": rational_to_string(v)});
            }
            emit_json(&doc);
        }
        Format::Text => match value {
            Some(v) => println!("{}", show_rational(&v)),
            None => println!("{}", p.display_with("t")),
        },
    }
    Ok(())
}

impl From<LawArg> for Law {
    fn from(l: LawArg) -> Law {
        match l {
            LawArg::Em => Law::Em,
            LawArg::Mp => Law::Mp,
            LawArg::PasturBlock => Law::PasturBlock,
            LawArg::ShiftedSemicircle => Law::ShiftedSemicircle,
            LawArg::Semicircle => Law::Semicircle,
        }
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("range must be lo:hi with lo < hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn write_output(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn density(
    law: LawArg,
    t: f64,
    grid: usize,
    range: Option<&str>,
    eps: f64,
    out: Option<&Path>,
    format: CurveFormat,
) -> Result<(), CliError> {
    let law = Law::from(law);
    if grid < 2 {
        return Err(CliError::Usage("the grid needs at least 2 points".into()));
    }
    let ((lo, hi), atom) = limits::law_support(law, t)?;
    let (lo, hi) = match range {
        Some(r) => parse_range(r)?,
        None => {
            let pad = 0.05 * (hi - lo).max(1e-3);
            (lo - pad, hi + pad)
        }
    };
    let xs: Vec<f64> = (0..grid).map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64).collect();
    let curve = density_curve(law, t, &xs, eps)?;
    eprintln!(
        "{law} t={t}: support [{:.6}, {:.6}], atom at 0 = {atom}, trapezoid mass on grid = {:.6}",
        curve.support.0,
        curve.support.1,
        curve.trapezoid()
    );
    let body = match format {
        CurveFormat::Csv => curve.to_csv(),
        CurveFormat::Json => {
            let mut v = serde_json::to_value(&curve).map_err(|e| CliError::Internal(e.to_string()))?;
            v["schema_version"] = json!(SCHEMA_VERSION);
            serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
        }
    };
    write_output(out, &body)
}

pub struct SimulateArgs {
    pub model: SimModel,
    pub params: EnsembleParams,
    pub orders: Vec<usize>,
    pub order_cap: usize,
    pub gate: f64,
    pub histogram: Option<(usize, PathBuf)>,
    pub dump: Option<PathBuf>,
    pub format: Format,
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let model = match a.model {
        SimModel::Adjacency => Model::Adjacency,
        SimModel::Laplacian => Model::Laplacian,
    };
    let report = run_comparison(&a.params, model, &a.orders, a.order_cap)?;
    if let Some(path) = &a.dump {
        let g = BlockGraph::sample(&a.params, 0)?;
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        g.dump(model, &mut f)?;
        f.flush()?;
    }
    if let Some((bins, path)) = &a.histogram {
        let h = empirical_density(&a.params, model, *bins)?;
        fs::write(path, h.to_csv())?;
    }
    match a.format {
        Format::Json => emit_json(&serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?),
        Format::Text => {
            let p = &report.params;
            println!("{model} N={} d={} Z={} samples={} seed={} (t = {})", p.n, p.d, p.z, p.samples, p.seed, p.t());
            println!("{:>5} {:>16} {:>12} {:>16} {:>8}", "order", "mean", "std_error", "exact", "z");
            for r in &report.records {
                println!("{:>5} {:>16.8} {:>12.3e} {:>16.8} {:>8.2}", r.order, r.mean, r.std_error, r.exact, r.z_score);
            }
            println!("samples without edges: {}, wall time {:.2}s", report.empty_samples, report.wall_time_secs);
        }
    }
    let worst = report.max_abs_z();
    if worst > a.gate {
        return Err(CliError::CheckFailed(format!("max |z| = {worst:.2} exceeds the gate {}", a.gate)));
    }
    Ok(())
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Tables => Suite::Tables,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::D1 => Suite::D1,
            SuiteArg::Narayana => Suite::Narayana,
            SuiteArg::Mc => Suite::Mc,
            SuiteArg::Stretch => Suite::Stretch,
            SuiteArg::All => Suite::All,
        }
    }
}

pub fn verify(suite: SuiteArg, stretch_budget: f64, verbose: bool, format: Format) -> Result<(), CliError> {
    let start = Instant::now();
    let checks = verify::run_suite(suite.into(), stretch_budget);
    let failed: Vec<String> = checks.iter().filter(|c| !c.ok()).map(|c| c.id.clone()).collect();
    match format {
        Format::Json => emit_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "checks": checks,
            "passed": failed.is_empty(),
            "elapsed_secs": start.elapsed().as_secs_f64(),
        })),
        Format::Text => {
            for c in &checks {
                println!("{}", c.line());
                if verbose || !c.passed {
                    c.details.iter().for_each(|d| println!("    {d}"));
                }
            }
            println!("{} of {} checks passed in {:.1}s", checks.iter().filter(|c| c.passed).count(), checks.len(), start.elapsed().as_secs_f64());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("failed checks: {}", failed.join(", "))))
    }
}
