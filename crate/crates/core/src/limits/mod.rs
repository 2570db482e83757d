//! The `d -> infinity` limit and the classical reference laws.
//!
//! Combinatorial numbers, exact moment series of the limiting laws, closed
//! form densities, resolvents of the limiting cubic/quadratic equations and
//! Stieltjes inversion.

mod density;
mod resolvent;
mod series;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyalg::{MomentPoly, Poly, Rational};

pub use density::{
    em_atom, em_support, integrate_law, law_moment, law_support, mp_atom, mp_density, mp_support, pastur_block_atom,
    pastur_block_density, pastur_block_support, semicircle_density, shifted_semicircle_density, DensityCurve, Law,
};
pub use resolvent::{cubic_roots, density_curve, density_from_resolvent, em_resolvent, mp_resolvent, stieltjes_density};
pub use series::{em_moment_series, mp_moment_series, narayana_consistency, SeriesInX};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Catalan number `C_n = (2n)! / (n! (n+1)!)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}

/// Narayana number `N(s, j) = C(s, j) C(s, j-1) / s`, zero outside `1..=s`.
pub fn narayana_number(s: u64, j: u64) -> BigInt {
    if s == 0 || j == 0 || j > s {
        return BigInt::zero();
    }
    binomial(s, j) * binomial(s, j - 1) / BigInt::from(s)
}

/// Narayana polynomial `P_s(t) = sum_j N(s, j) t^j`.
pub fn narayana(s: u64) -> Result<Poly> {
    if s == 0 {
        return Err(Error::Domain("narayana polynomial needs s >= 1".into()));
    }
    Ok(Poly::from_coeffs((0..=s).map(|j| Rational::from(narayana_number(s, j))).collect()))
}

/// Stirling number of the second kind; zero when `i > s`.
pub fn stirling2(s: u64, i: u64) -> BigInt {
    if i > s {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for n in 1..=s as usize {
        let mut next = vec![BigInt::zero(); n + 1];
        for k in 1..=n {
            let stay = if k < row.len() { &row[k] * BigInt::from(k) } else { BigInt::zero() };
            next[k] = stay + &row[k - 1];
        }
        row = next;
    }
    row[i as usize].clone()
}

/// `sum_{i=1}^s Z^i S(s, i)`: the `s`-th moment of a Poisson variable of mean `Z`.
pub fn poisson_moment(s: u64, z: &Rational) -> Rational {
    poisson_polynomial(s).eval(z)
}

/// Poisson moment as a polynomial in the mean.
pub fn poisson_polynomial(s: u64) -> Poly {
    if s == 0 {
        return Poly::one();
    }
    Poly::from_coeffs((0..=s).map(|i| if i == 0 { Rational::zero() } else { Rational::from(stirling2(s, i)) }).collect())
}

/// `d -> infinity` limits of the top `k` t-coefficients of a moment, highest
/// power first, as `(power, coefficient)`. Shorter polynomials give fewer
/// entries.
pub fn leading_coefficients(p: &MomentPoly, k: usize) -> Result<Vec<(usize, Rational)>> {
    let lim = p.limit_d_infinity()?;
    let Some(deg) = lim.degree() else {
        return Ok(Vec::new());
    };
    Ok((0..k).take_while(|&i| i <= deg).map(|i| (deg - i, lim.coeff(deg - i))).collect())
}
