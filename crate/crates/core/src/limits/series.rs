//! Truncated power series in `x` with polynomial-in-`t` coefficients.

use serde::{Serialize, Serializer};

use crate::model::Model;
use crate::polyalg::{serial, Poly};

use super::narayana;

/// `sum_{n=0}^{K} a_n(t) x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInX {
    coeffs: Vec<Poly>,
}

impl SeriesInX {
    pub fn zero(order: usize) -> Self {
        SeriesInX { coeffs: vec![Poly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = SeriesInX::zero(order);
        s.coeffs[0] = Poly::one();
        s
    }

    /// `x^k` truncated at `order`.
    pub fn x_power(k: usize, order: usize) -> Self {
        let mut s = SeriesInX::zero(order);
        if k <= order {
            s.coeffs[k] = Poly::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Poly {
        self.coeffs.get(n).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn add(&self, other: &SeriesInX) -> SeriesInX {
        SeriesInX { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &SeriesInX) -> SeriesInX {
        SeriesInX { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, other: &SeriesInX) -> SeriesInX {
        let k = self.order().min(other.order());
        let mut out = SeriesInX::zero(k);
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        out
    }

    /// Multiplies every coefficient by a polynomial in `t`.
    pub fn scale(&self, c: &Poly) -> SeriesInX {
        SeriesInX { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `1 / self`; the constant term must be `1`.
    pub fn recip_unit(&self) -> Option<SeriesInX> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let k = self.order();
        let mut out = SeriesInX::zero(k);
        out.coeffs[0] = Poly::one();
        for n in 1..=k {
            let mut acc = Poly::zero();
            for j in 1..=n {
                acc = &acc - &(&self.coeffs[j] * &out.coeffs[n - j]);
            }
            out.coeffs[n] = acc;
        }
        Some(out)
    }
}

impl Serialize for SeriesInX {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            x_power: usize,
            t_coeffs: Vec<String>,
        }
        let entries: Vec<Entry> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, p)| Entry { x_power: n, t_coeffs: p.coeffs().iter().map(serial::rational_to_string).collect() })
            .collect();
        entries.serialize(s)
    }
}

/// Iterates `f <- 1 + step(f)` until the truncated series is stable; each
/// pass fixes at least one more order because `step` carries a factor `x`.
fn fixed_point(order: usize, step: impl Fn(&SeriesInX) -> SeriesInX) -> SeriesInX {
    let mut f = SeriesInX::one(order);
    for _ in 0..=order {
        let next = SeriesInX::one(order).add(&step(&f));
        if next == f {
            break;
        }
        f = next;
    }
    f
}

/// Moment generating function of the limiting adjacency law, the solution of
/// `x^2 f^3 - x^2 f^2 (1 - t) - f + 1 = 0` with `f(0) = 1`.
pub fn em_moment_series(order: usize) -> SeriesInX {
    let x2 = SeriesInX::x_power(2, order);
    let t_minus_1 = SeriesInX::one(order).scale(&Poly::from_ints(&[-1, 1]));
    fixed_point(order, |f| x2.mul(&f.mul(f)).mul(&f.add(&t_minus_1)))
}

/// Moment generating function of the limiting Laplacian law, the solution of
/// `2 x f^2 + f (x t - 1 - 2x) + 1 = 0` with `f(0) = 1`.
pub fn mp_moment_series(order: usize) -> SeriesInX {
    let x = SeriesInX::x_power(1, order);
    let t_minus_2 = Poly::from_ints(&[-2, 1]);
    fixed_point(order, |f| x.mul(f).mul(&f.scale(&Poly::from_ints(&[2])).add(&SeriesInX::one(order).scale(&t_minus_2))))
}

/// Checks, to order `order`, that `F = 1 + sum_n P_n(t) g^n` reproduces the
/// moment series of `model` for its variable `g` (`x^2 f` for the adjacency,
/// `x / (1 - x f)` for the Laplacian), and that `g (F^2 - F (1 - t)) = F - 1`.
pub fn narayana_consistency(model: Model, order: usize) -> bool {
    if order == 0 {
        return true;
    }
    let one = SeriesInX::one(order);
    let (f, g) = match model {
        Model::Adjacency => {
            let f = em_moment_series(order);
            let g = SeriesInX::x_power(2, order).mul(&f);
            (f, g)
        }
        Model::Laplacian => {
            let f = mp_moment_series(order);
            let g = one.sub(&SeriesInX::x_power(1, order).mul(&f)).recip_unit().expect("unit constant term");
            let g = SeriesInX::x_power(1, order).mul(&g);
            (f, g)
        }
    };
    let mut big_f = one.clone();
    let mut g_pow = one.clone();
    for n in 1..=order as u64 {
        g_pow = g_pow.mul(&g);
        big_f = big_f.add(&g_pow.scale(&narayana(n).expect("n >= 1")));
    }
    let one_minus_t = Poly::from_ints(&[1, -1]);
    let lhs = g.mul(&big_f.mul(&big_f).sub(&big_f.scale(&one_minus_t)));
    big_f == f && lhs == big_f.sub(&one)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_series_low_orders() {
        let f = em_moment_series(10);
        assert_eq!(f.coeff(0), Poly::one());
        assert_eq!(f.coeff(2), Poly::from_ints(&[0, 1]));
        assert_eq!(f.coeff(4), Poly::from_ints(&[0, 1, 2]));
        assert_eq!(f.coeff(6), Poly::from_ints(&[0, 1, 6, 5]));
        assert!(f.coeff(5).is_zero());
    }

    #[test]
    fn laplacian_series_low_orders() {
        let f = mp_moment_series(6);
        assert_eq!(f.coeff(0), Poly::one());
        assert_eq!(f.coeff(1), Poly::from_ints(&[0, 1]));
        assert_eq!(f.coeff(2), Poly::from_ints(&[0, 2, 1]));
        assert_eq!(f.coeff(3), Poly::from_ints(&[0, 4, 6, 1]));
    }

    #[test]
    fn narayana_substitution() {
        for model in [Model::Adjacency, Model::Laplacian] {
            assert!(narayana_consistency(model, 0));
            assert!(narayana_consistency(model, 6));
            assert!(narayana_consistency(model, 14));
        }
    }

    #[test]
    fn reciprocal() {
        let s = SeriesInX::one(5).sub(&SeriesInX::x_power(1, 5));
        let r = s.recip_unit().unwrap();
        for n in 0..=5 {
            assert_eq!(r.coeff(n), Poly::one());
        }
        assert!(SeriesInX::zero(3).recip_unit().is_none());
    }
}
