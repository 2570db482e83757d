//! Closed-form limiting densities, their supports and atoms, and quadrature.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::resolvent::stieltjes_density;

/// A limiting spectral law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// Limiting adjacency law (cubic resolvent equation).
    Em,
    /// Limiting Laplacian law.
    Mp,
    /// Limiting law of one diagonal Laplacian block.
    PasturBlock,
    /// Large-`t` Laplacian law.
    ShiftedSemicircle,
    /// Large-`t` adjacency law.
    Semicircle,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::Em => "em",
            Law::Mp => "mp",
            Law::PasturBlock => "pastur-block",
            Law::ShiftedSemicircle => "shifted-semicircle",
            Law::Semicircle => "semicircle",
        }
    }

    pub const ALL: [Law; 5] = [Law::Em, Law::Mp, Law::PasturBlock, Law::ShiftedSemicircle, Law::Semicircle];
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown law `{s}` (em, mp, pastur-block, shifted-semicircle, semicircle)")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must be positive, got {t}")))
    }
}

fn sqrt_law(lambda: f64, a: f64, b: f64, norm: f64) -> f64 {
    if lambda <= a || lambda >= b || lambda == 0.0 {
        return 0.0;
    }
    ((b - lambda) * (lambda - a)).sqrt() / norm
}

/// Support `[(sqrt t - sqrt 2)^2, (sqrt t + sqrt 2)^2]` of the limiting
/// Laplacian law.
pub fn mp_support(t: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    let (r, s) = (t.sqrt(), 2f64.sqrt());
    Ok(((r - s).powi(2), (r + s).powi(2)))
}

/// Continuous part `sqrt((b - x)(x - a)) / (4 pi x)` of the limiting
/// Laplacian law.
pub fn mp_density(lambda: f64, t: f64) -> Result<f64> {
    let (a, b) = mp_support(t)?;
    Ok(sqrt_law(lambda, a, b, 4.0 * std::f64::consts::PI * lambda))
}

/// Point mass of the limiting Laplacian law at `0`, `max(0, 1 - t/2)`.
pub fn mp_atom(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((1.0 - t / 2.0).max(0.0))
}

/// Support `[(1 - sqrt t)^2, (1 + sqrt t)^2]` of the diagonal-block law.
pub fn pastur_block_support(t: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    Ok(((1.0 - t.sqrt()).powi(2), (1.0 + t.sqrt()).powi(2)))
}

/// Continuous part `sqrt((a+ - x)(x - a-)) / (2 pi x)` of the diagonal-block law.
pub fn pastur_block_density(lambda: f64, t: f64) -> Result<f64> {
    let (a, b) = pastur_block_support(t)?;
    Ok(sqrt_law(lambda, a, b, 2.0 * std::f64::consts::PI * lambda))
}

/// Point mass of the diagonal-block law at `0`, `max(0, 1 - t)`.
pub fn pastur_block_atom(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((1.0 - t).max(0.0))
}

/// `sqrt(8t - (x - t)^2) / (4 pi t)`.
pub fn shifted_semicircle_density(x: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let r = (8.0 * t).sqrt();
    Ok(sqrt_law(x, t - r, t + r, 4.0 * std::f64::consts::PI * t))
}

/// `sqrt(4t - x^2) / (2 pi t)`.
pub fn semicircle_density(x: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let r = 2.0 * t.sqrt();
    if x.abs() >= r {
        return Ok(0.0);
    }
    Ok((4.0 * t - x * x).sqrt() / (2.0 * std::f64::consts::PI * t))
}

/// Support intervals of the limiting adjacency law, from the positive roots
/// `y = x^2` of the discriminant
/// `4 y^2 + ((t-1)^2 - 18 (t-1) - 27) y - 4 (t-1)^3` of its cubic.
pub fn em_support(t: f64) -> Result<Vec<(f64, f64)>> {
    check_t(t)?;
    let s = t - 1.0;
    let b = s * s - 18.0 * s - 27.0;
    let c = -4.0 * s.powi(3);
    let disc = (b * b - 16.0 * c).max(0.0).sqrt();
    let mut ys: Vec<f64> = [(-b - disc) / 8.0, (-b + disc) / 8.0].into_iter().filter(|y| *y > 0.0).collect();
    ys.sort_by(f64::total_cmp);
    Ok(match ys.as_slice() {
        [y] => vec![(-y.sqrt(), y.sqrt())],
        [y1, y2] => vec![(-y2.sqrt(), -y1.sqrt()), (y1.sqrt(), y2.sqrt())],
        _ => Vec::new(),
    })
}

/// Point mass of the limiting adjacency law at `0`, `max(0, 1 - t)`: for
/// `t < 1` the physical root of the cubic has a pole at `z = 0` with this
/// residue, and the continuous part lives on two intervals away from `0`.
pub fn em_atom(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((1.0 - t).max(0.0))
}

/// Hull of the support and the analytic atom at `0` of a law.
pub fn law_support(law: Law, t: f64) -> Result<((f64, f64), f64)> {
    Ok(match law {
        Law::Em => {
            let iv = em_support(t)?;
            let lo = iv.first().map_or(0.0, |p| p.0);
            let hi = iv.last().map_or(0.0, |p| p.1);
            ((lo, hi), em_atom(t)?)
        }
        Law::Mp => (mp_support(t)?, mp_atom(t)?),
        Law::PasturBlock => (pastur_block_support(t)?, pastur_block_atom(t)?),
        Law::ShiftedSemicircle => {
            check_t(t)?;
            let r = (8.0 * t).sqrt();
            ((t - r, t + r), 0.0)
        }
        Law::Semicircle => {
            check_t(t)?;
            let r = 2.0 * t.sqrt();
            ((-r, r), 0.0)
        }
    })
}

/// Quadrature segments: the support intervals, split at `0`. Gaps are
/// skipped so that a smoothed atom at `0` is not picked up.
fn segments(law: Law, t: f64) -> Result<Vec<(f64, f64)>> {
    let intervals = match law {
        Law::Em => em_support(t)?,
        _ => vec![law_support(law, t)?.0],
    };
    Ok(intervals
        .into_iter()
        .flat_map(|(a, b)| if a < 0.0 && b > 0.0 { vec![(a, 0.0), (0.0, b)] } else { vec![(a, b)] })
        .collect())
}

/// `integral w(x) rho(x) dx` over the continuous part of a law, by tanh-sinh
/// quadrature over the support intervals (split at `0`). For [`Law::Em`]
/// the density comes from Stieltjes inversion at `eps`.
pub fn integrate_law(law: Law, t: f64, eps: f64, w: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    let segs = segments(law, t)?;
    let tol = if law == Law::Em { 1e-9 } else { 1e-14 };
    let mut total = 0.0;
    for (a, b) in segs {
        // x = a + (b - a) sin^2(u/2) turns square-root edges and 1/sqrt
        // singularities at the ends into smooth integrands
        let half = 0.5 * (b - a);
        let x_of = |u: f64| a + 2.0 * half * (0.5 * u).sin().powi(2);
        let jac = |u: f64| half * u.sin();
        let out = match law {
            Law::Em => {
                let failed = AtomicBool::new(false);
                let out = quadrature::double_exponential::integrate(
                    |u| {
                        let x = x_of(u);
                        match stieltjes_density(crate::Model::Adjacency, x, t, eps) {
                            Ok(r) => w(x) * r * jac(u),
                            Err(_) => {
                                failed.store(true, Ordering::Relaxed);
                                0.0
                            }
                        }
                    },
                    0.0,
                    std::f64::consts::PI,
                    tol,
                );
                if failed.into_inner() {
                    return Err(Error::Numerical(format!("resolvent tracking failed on [{a}, {b}]")));
                }
                out
            }
            _ => quadrature::double_exponential::integrate(
                |u| {
                    let x = x_of(u);
                    w(x) * closed_form(law, x, t).unwrap_or(0.0) * jac(u)
                },
                0.0,
                std::f64::consts::PI,
                tol,
            ),
        };
        total += out.integral;
    }
    Ok(total)
}

/// `k`-th moment of a law including its atom (which only contributes to `k = 0`).
pub fn law_moment(law: Law, t: f64, k: u32, eps: f64) -> Result<f64> {
    let cont = integrate_law(law, t, eps, |x| x.powi(k as i32))?;
    let atom = if k == 0 { law_support(law, t)?.1 } else { 0.0 };
    Ok(cont + atom)
}

pub(super) fn closed_form(law: Law, x: f64, t: f64) -> Result<f64> {
    match law {
        Law::Mp => mp_density(x, t),
        Law::PasturBlock => pastur_block_density(x, t),
        Law::ShiftedSemicircle => shifted_semicircle_density(x, t),
        Law::Semicircle => semicircle_density(x, t),
        Law::Em => Err(Error::Domain("the adjacency law has no closed-form density".into())),
    }
}

/// Sampled density with metadata.
#[derive(Debug, Clone, Serialize)]
pub struct DensityCurve {
    pub law: Law,
    pub t: f64,
    /// `closed-form` or `stieltjes-richardson`.
    pub method: String,
    pub eps: Option<f64>,
    /// Hull of the support of the continuous part.
    pub support: (f64, f64),
    /// Analytic point mass at `0`.
    pub atom: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,rho\n");
        for (x, y) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{x:.12e},{y:.12e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    /// Trapezoid integral of the sampled values.
    pub fn trapezoid(&self) -> f64 {
        self.grid.windows(2).zip(self.values.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
    }
}
