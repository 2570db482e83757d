use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::{Poly, RatFn, Rational};
use crate::error::Result;

/// A spectral moment: a polynomial in `t = Z/d` whose coefficients are
/// reduced rational functions of `d`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MomentPoly {
    terms: BTreeMap<u32, RatFn>,
}

impl MomentPoly {
    pub fn zero() -> Self {
        MomentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MomentPoly::term(0, RatFn::one())
    }

    /// `t`.
    pub fn t() -> Self {
        MomentPoly::term(1, RatFn::one())
    }

    /// `coeff * t^power`.
    pub fn term(power: u32, coeff: RatFn) -> Self {
        let mut m = MomentPoly::zero();
        m.add_term(power, coeff);
        m
    }

    /// Lifts a `d`-independent polynomial in `t`.
    pub fn from_t_poly(p: &Poly) -> Self {
        let mut m = MomentPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            m.add_term(k as u32, RatFn::constant(c.clone()));
        }
        m
    }

    pub fn add_term(&mut self, power: u32, coeff: RatFn) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(power) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t^power`.
    pub fn coeff(&self, power: u32) -> RatFn {
        self.terms.get(&power).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RatFn)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Highest power of `t` present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &RatFn) -> MomentPoly {
        let mut m = MomentPoly::zero();
        for (k, v) in &self.terms {
            m.add_term(*k, v * c);
        }
        m
    }

    pub fn pow(&self, e: u32) -> MomentPoly {
        (0..e).fold(MomentPoly::one(), |acc, _| &acc * self)
    }

    /// Exact value at rational `t` and `d`.
    pub fn eval(&self, t: &Rational, d: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        let mut tp = Rational::one();
        let mut last = 0u32;
        for (k, c) in &self.terms {
            while last < *k {
                tp *= t;
                last += 1;
            }
            acc += c.eval(d)? * &tp;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, t: f64, d: f64) -> f64 {
        self.terms.iter().map(|(k, c)| c.eval_f64(d) * t.powi(*k as i32)).sum()
    }

    /// Coefficient-wise `d -> infinity` limit, as a polynomial in `t`.
    pub fn limit_d_infinity(&self) -> Result<Poly> {
        let top = self.degree().map_or(0, |k| k as usize + 1);
        let mut coeffs = vec![Rational::zero(); top];
        for (k, c) in &self.terms {
            coeffs[*k as usize] = c.limit_at_infinity()?;
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Coefficient-wise evaluation at a fixed `d`, as a polynomial in `t`.
    pub fn at_d(&self, d: &Rational) -> Result<Poly> {
        let top = self.degree().map_or(0, |k| k as usize + 1);
        let mut coeffs = vec![Rational::zero(); top];
        for (k, c) in &self.terms {
            coeffs[*k as usize] = c.eval(d)?;
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let tpow = match k {
                    0 => String::new(),
                    1 => "t".into(),
                    _ => format!("t^{k}"),
                };
                match (c.as_constant(), k) {
                    (Some(v), 0) => super::poly::format_rational(&v),
                    (Some(v), _) if v.is_one() => tpow,
                    (Some(v), _) => format!("{} {tpow}", super::poly::format_rational(&v)),
                    (None, 0) => format!("({c})"),
                    (None, _) => format!("({c}) {tpow}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for MomentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MomentPoly({})", self.display())
    }
}

impl fmt::Display for MomentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Add for &MomentPoly {
    type Output = MomentPoly;
    fn add(self, rhs: &MomentPoly) -> MomentPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Mul for &MomentPoly {
    type Output = MomentPoly;
    fn mul(self, rhs: &MomentPoly) -> MomentPoly {
        let mut out = MomentPoly::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl std::iter::Sum for MomentPoly {
    fn sum<I: Iterator<Item = MomentPoly>>(iter: I) -> MomentPoly {
        iter.fold(MomentPoly::zero(), |acc, x| &acc + &x)
    }
}
