//! Resolvents of the limiting laws and Stieltjes inversion.
//!
//! The resolvent is `r(z) = lim (1/Nd) tr (z - M)^{-1}`, so `r(z) ~ 1/z` at
//! infinity, `Im r < 0` in the upper half plane and the density is
//! `-Im r(x + i0) / pi`.

use nalgebra::Matrix3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Model;

use super::density::{closed_form, law_support, DensityCurve, Law};

/// Roots of `r^3 + a r^2 + b r + c`.
///
/// Closed form with a cancellation-avoiding choice of the cube-root branch,
/// polished by Newton steps; falls back to the eigenvalues of the companion
/// matrix when a polished root still has a relative residual above `1e-12`.
pub fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    let p = |r: Complex64| ((r + a) * r + b) * r + c;
    let dp = |r: Complex64| (3.0 * r + 2.0 * a) * r + b;
    let scale = |r: Complex64| {
        let m = r.norm();
        m.powi(3) + a.norm() * m * m + b.norm() * m + c.norm()
    };
    let shift = a / 3.0;
    let pp = b - a * shift;
    let qq = 2.0 * shift * shift * shift - shift * b + c;
    let disc = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
    let u3 = if (-qq / 2.0 + disc).norm() >= (-qq / 2.0 - disc).norm() { -qq / 2.0 + disc } else { -qq / 2.0 - disc };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = if u3.norm() == 0.0 {
        [-shift; 3]
    } else {
        let u = u3.cbrt();
        let v = -pp / (3.0 * u);
        [u + v - shift, omega * u + omega.conj() * v - shift, omega.conj() * u + omega * v - shift]
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = dp(*r);
            if d.norm() == 0.0 {
                break;
            }
            let next = *r - p(*r) / d;
            if next.is_finite() {
                *r = next;
            }
        }
    }
    if roots.iter().all(|&r| p(r).norm() <= 1e-12 * scale(r)) {
        return roots;
    }
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let companion = Matrix3::new(-a, -b, -c, one, z, z, z, one, z);
    let eig = companion.schur().eigenvalues().expect("complex Schur form is triangular");
    [eig[0], eig[1], eig[2]]
}

fn check_upper(z: Complex64) -> Result<()> {
    if z.im > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("resolvent needs Im z > 0, got {z}")))
    }
}

/// Follows the root selected at `x + iY` (the one nearest `1/z`) down the
/// vertical line to `z`, always taking the root nearest the previous one.
fn track(z: Complex64, roots: impl Fn(Complex64) -> Vec<Complex64>) -> Result<Complex64> {
    check_upper(z)?;
    let top = 1e3 * (1.0 + z.re.abs());
    if z.im >= top {
        return Ok(nearest(&roots(z), 1.0 / z).0);
    }
    let start = Complex64::new(z.re, top);
    let mut cur = nearest(&roots(start), 1.0 / start).0;
    let mut im = top;
    let ratio: f64 = 0.8;
    while im > z.im {
        let next = (im * ratio).max(z.im);
        cur = step(z.re, im, next, cur, &roots, 0)?;
        im = next;
    }
    Ok(cur)
}

fn nearest(roots: &[Complex64], target: Complex64) -> (Complex64, f64, f64) {
    let mut d: Vec<(f64, Complex64)> = roots.iter().map(|&r| ((r - target).norm(), r)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    (d[0].1, d[0].0, d.get(1).map_or(f64::INFINITY, |p| p.0))
}

fn step(
    x: f64,
    from: f64,
    to: f64,
    prev: Complex64,
    roots: &impl Fn(Complex64) -> Vec<Complex64>,
    depth: u32,
) -> Result<Complex64> {
    let (r, d1, d2) = nearest(&roots(Complex64::new(x, to)), prev);
    if d1 <= 0.25 * d2 {
        return Ok(r);
    }
    if depth >= 40 {
        return Err(Error::Numerical(format!("branch tracking is ambiguous near {x} + {to}i")));
    }
    let mid = 0.5 * (from + to);
    let r_mid = step(x, from, mid, prev, roots, depth + 1)?;
    step(x, mid, to, r_mid, roots, depth + 1)
}

/// Resolvent of the limiting adjacency law: the physical root of
/// `z r^3 + (t - 1) r^2 - z r + 1 = 0`.
pub fn em_resolvent(z: Complex64, t: f64) -> Result<Complex64> {
    let r = track(z, |z| {
        let a = Complex64::new(t - 1.0, 0.0) / z;
        cubic_roots(a, Complex64::new(-1.0, 0.0), 1.0 / z).to_vec()
    })?;
    if r.im > 1e-8 * r.norm().max(1.0) {
        return Err(Error::Numerical(format!("tracked root {r} at {z} is not a resolvent")));
    }
    Ok(r)
}

/// Resolvent of the limiting Laplacian law: the physical root of
/// `2 z r^2 + (t - 2 - z) r + 1 = 0`.
pub fn mp_resolvent(z: Complex64, t: f64) -> Result<Complex64> {
    track(z, |z| {
        let b = Complex64::new(t - 2.0, 0.0) - z;
        let disc = (b * b - 8.0 * z).sqrt();
        let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
        vec![q / (2.0 * z), 1.0 / q]
    })
}

fn resolvent(model: Model, z: Complex64, t: f64) -> Result<Complex64> {
    match model {
        Model::Adjacency => em_resolvent(z, t),
        Model::Laplacian => mp_resolvent(z, t),
    }
}

/// `-Im r / pi` at `x + i eps` and `x + 2i eps`, Richardson-extrapolated to
/// `eps -> 0`: `2 rho(eps) - rho(2 eps)`.
pub fn stieltjes_density(model: Model, x: f64, t: f64, eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let rho = |e: f64| resolvent(model, Complex64::new(x, e), t).map(|r| -r.im / std::f64::consts::PI);
    Ok(2.0 * rho(eps)? - rho(2.0 * eps)?)
}

/// Density of the limiting adjacency (`em`) or Laplacian (`mp`) law from its
/// resolvent on a grid; negative extrapolated values are clipped to `0`.
pub fn density_from_resolvent(model: Model, t: f64, grid: &[f64], eps: f64) -> Result<DensityCurve> {
    let law = match model {
        Model::Adjacency => Law::Em,
        Model::Laplacian => Law::Mp,
    };
    let (support, atom) = law_support(law, t)?;
    let values = grid
        .par_iter()
        .map(|&x| stieltjes_density(model, x, t, eps).map(|v| v.max(0.0)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DensityCurve {
        law,
        t,
        method: "stieltjes-richardson".into(),
        eps: Some(eps),
        support,
        atom,
        grid: grid.to_vec(),
        values,
    })
}

/// Density curve of any law: Stieltjes inversion for `em`, closed forms
/// otherwise.
pub fn density_curve(law: Law, t: f64, grid: &[f64], eps: f64) -> Result<DensityCurve> {
    if law == Law::Em {
        return density_from_resolvent(Model::Adjacency, t, grid, eps);
    }
    let (support, atom) = law_support(law, t)?;
    let values = grid.iter().map(|&x| closed_form(law, x, t)).collect::<Result<Vec<f64>>>()?;
    Ok(DensityCurve { law, t, method: "closed-form".into(), eps: None, support, atom, grid: grid.to_vec(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{em_moment_series, law_moment, mp_density};
    use proptest::prelude::*;

    #[test]
    fn cubic_solver_recovers_known_roots() {
        let (r1, r2, r3) = (Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(3.0, -1.0));
        let a = -(r1 + r2 + r3);
        let b = r1 * r2 + r1 * r3 + r2 * r3;
        let c = -(r1 * r2 * r3);
        let roots = cubic_roots(a, b, c);
        for r in [r1, r2, r3] {
            assert!(roots.iter().any(|x| (x - r).norm() < 1e-12));
        }
        // triple root
        let roots = cubic_roots(Complex64::new(-3.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(-1.0, 0.0));
        assert!(roots.iter().all(|x| (x - 1.0).norm() < 1e-4));
    }

    #[test]
    fn large_z_asymptotics() {
        let z = Complex64::new(0.0, 1e6);
        let r = em_resolvent(z, 1.0).unwrap();
        assert!(((r - 1.0 / z) / (1.0 / z)).norm() < 1e-5);
        assert!(em_resolvent(Complex64::new(1.0, 0.0), 1.0).is_err());
        assert!(em_resolvent(Complex64::new(1.0, -1.0), 1.0).is_err());
    }

    #[test]
    fn expansion_at_large_z_matches_series() {
        // z r(z) = f(1/z): sample on a circle of radius R and read off Fourier coefficients
        let t = 1.0;
        let f = em_moment_series(10);
        let radius = 4.0;
        let n = 256;
        let samples: Vec<Complex64> = (0..n)
            .map(|k| {
                // upper half circle directly, lower half by conjugation symmetry
                let th = std::f64::consts::PI * (2 * k + 1) as f64 / n as f64;
                let z = Complex64::from_polar(radius, th);
                if z.im > 0.0 {
                    z * em_resolvent(z, t).unwrap()
                } else {
                    (z.conj() * em_resolvent(z.conj(), t).unwrap()).conj()
                }
            })
            .collect();
        for m in 0..=10 {
            // coefficient of x^m = z^{-m}
            let th = |k: usize| std::f64::consts::PI * (2 * k + 1) as f64 / n as f64;
            let c: Complex64 = (0..n).map(|k| samples[k] * Complex64::from_polar(radius.powi(m as i32), m as f64 * th(k))).sum::<Complex64>()
                / n as f64;
            let exact = f.coeff(m).eval_f64(t);
            assert!((c.re - exact).abs() < 1e-9 * exact.max(1.0), "m={m}: {c} vs {exact}");
            assert!(c.im.abs() < 1e-9 * exact.max(1.0));
        }
    }

    #[test]
    fn laplacian_resolvent_matches_closed_density() {
        let t = 2.0;
        for i in 1..80 {
            let x = i as f64 * 0.1;
            let rho = stieltjes_density(Model::Laplacian, x, t, 1e-6).unwrap();
            assert!((rho - mp_density(x, t).unwrap()).abs() < 5e-4, "x={x}");
        }
        assert!(stieltjes_density(Model::Laplacian, 1.0, t, 0.0).is_err());
    }

    #[test]
    fn adjacency_density_normalization_and_moments() {
        for t in [0.5, 1.0, 2.0] {
            let f = em_moment_series(6);
            let mass = law_moment(Law::Em, t, 0, 1e-6).unwrap();
            assert!((mass - 1.0).abs() < 1e-3, "t={t}: mass {mass}");
            for k in 1..=6u32 {
                let q = law_moment(Law::Em, t, k, 1e-6).unwrap();
                let exact = f.coeff(k as usize).eval_f64(t);
                assert!((q - exact).abs() < 1e-4, "t={t} k={k}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn curve_grid() {
        let grid: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
        let c = density_curve(Law::Em, 2.0, &grid, 1e-6).unwrap();
        assert!(c.values.iter().all(|v| *v >= 0.0));
        assert!((c.trapezoid() - 1.0).abs() < 5e-2);
        let c = density_curve(Law::Semicircle, 1.0, &grid, 1e-6).unwrap();
        assert_eq!(c.method, "closed-form");
    }

    #[test]
    fn atoms_match_resolvent_residues() {
        // the mass at 0 is lim_{y -> 0} -y Im r(i y)
        use crate::limits::{em_atom, mp_atom};
        let y = 1e-9;
        for t in [0.5, 1.5, 3.0] {
            let z = Complex64::new(0.0, y);
            let mp = -y * mp_resolvent(z, t).unwrap().im;
            assert!((mp - mp_atom(t).unwrap()).abs() < 1e-6, "t={t}: {mp}");
            let em = -y * em_resolvent(z, t).unwrap().im;
            assert!((em - em_atom(t).unwrap()).abs() < 1e-6, "t={t}: {em}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn resolvent_maps_upper_to_lower_half_plane(x in -6.0f64..6.0, y in 1e-6f64..5.0, t in 0.3f64..4.0) {
            let z = Complex64::new(x, y);
            prop_assert!(em_resolvent(z, t).unwrap().im < 0.0);
            prop_assert!(mp_resolvent(z, t).unwrap().im < 0.0);
        }
    }
}
