//! Coefficients kept as sums of `r / prod_j (d + 2j)^{e_j}`.
//!
//! Averaging a vector that occurs `2m` times multiplies by
//! `1 / (d (d+2) ... (d+2m-2))`, so every intermediate coefficient is a
//! rational linear combination of such products. Keeping them factored makes
//! addition a map merge instead of a polynomial gcd; conversion to a reduced
//! [`RatFn`] happens once at the end.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::polyalg::{int, Poly, RatFn, Rational};

#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Factored {
    /// Exponent vector over the factors `d, d+2, d+4, ...` -> coefficient.
    terms: BTreeMap<Vec<i32>, Rational>,
}

fn trim(mut key: Vec<i32>) -> Vec<i32> {
    while key.last() == Some(&0) {
        key.pop();
    }
    key
}

impl Factored {
    pub fn zero() -> Self {
        Factored::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut f = Factored::zero();
        if !c.is_zero() {
            f.terms.insert(Vec::new(), c);
        }
        f
    }

    pub fn one() -> Self {
        Factored::constant(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &Factored) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    fn add_term(&mut self, key: Vec<i32>, c: Rational) {
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> Factored {
        if c.is_zero() {
            return Factored::zero();
        }
        Factored { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// `self * c / (d (d+2) ... (d+2m-2))`.
    pub fn times_pochhammer_recip(&self, c: &Rational, m: usize) -> Factored {
        let mut out = Factored::zero();
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            let mut key = k.clone();
            if key.len() < m {
                key.resize(m, 0);
            }
            for e in key.iter_mut().take(m) {
                *e -= 1;
            }
            out.add_term(trim(key), v * c);
        }
        out
    }

    /// `self * d^k`.
    pub fn times_d_power(&self, k: i32) -> Factored {
        let mut out = Factored::zero();
        for (key, v) in &self.terms {
            let mut key = key.clone();
            if key.is_empty() {
                key.push(0);
            }
            key[0] += k;
            out.add_term(trim(key), v.clone());
        }
        out
    }

    pub fn to_ratfn(&self) -> RatFn {
        if self.terms.is_empty() {
            return RatFn::zero();
        }
        let width = self.terms.keys().map(Vec::len).max().unwrap_or(0);
        let mut low = vec![0i32; width];
        for key in self.terms.keys() {
            for (j, &e) in key.iter().enumerate() {
                low[j] = low[j].min(e);
            }
        }
        let factor = |j: usize| Poly::linear(int(2 * j as i64));
        let mut num = Poly::zero();
        for (key, v) in &self.terms {
            let mut p = Poly::constant(v.clone());
            for (j, &lo) in low.iter().enumerate() {
                let e = key.get(j).copied().unwrap_or(0) - lo;
                if e > 0 {
                    p = &p * &factor(j).pow(e as u32);
                }
            }
            num = &num + &p;
        }
        let mut den = Poly::one();
        for (j, &lo) in low.iter().enumerate() {
            if lo < 0 {
                den = &den * &factor(j).pow((-lo) as u32);
            }
        }
        RatFn::new(num, den).expect("product of linear factors is nonzero")
    }
}
