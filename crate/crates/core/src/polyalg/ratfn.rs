use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Reduced rational function of the block dimension `d`.
///
/// Numerator and denominator are coprime, the denominator is monic, and zero
/// is `0/1`. This makes equality structural and therefore decidable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    /// The bare symbol `d`.
    pub fn d() -> Self {
        RatFn::from_poly(Poly::x())
    }

    /// Normalizes `num/den`. Fails if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().expect("nonzero denominator").recip();
        RatFn { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Returns the value as a rational constant if it does not depend on `d`.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by the zero rational function".into()));
        }
        Ok(RatFn::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, e: u32) -> RatFn {
        // Powers of coprime polynomials stay coprime.
        RatFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Exact evaluation at `d`. Fails if `d` is a pole.
    pub fn eval(&self, d: &Rational) -> Result<Rational> {
        let den = self.den.eval(d);
        if den.is_zero() {
            return Err(Error::Invariant(format!(
                "denominator {} vanishes at d = {}",
                self.den.display_with("d"),
                d
            )));
        }
        Ok(self.num.eval(d) / den)
    }

    pub fn eval_f64(&self, d: f64) -> f64 {
        self.num.eval_f64(d) / self.den.eval_f64(d)
    }

    /// Limit as `d -> infinity`. Fails when the limit diverges.
    pub fn limit_at_infinity(&self) -> Result<Rational> {
        let Some(nd) = self.num.degree() else {
            return Ok(Rational::zero());
        };
        let dd = self.den.degree().expect("nonzero denominator");
        match nd.cmp(&dd) {
            std::cmp::Ordering::Less => Ok(Rational::zero()),
            std::cmp::Ordering::Equal => Ok(self.num.leading().unwrap() / self.den.leading().unwrap()),
            std::cmp::Ordering::Greater => Err(Error::Invariant(format!(
                "coefficient {self} diverges as d -> infinity"
            ))),
        }
    }

    /// True when `d = 0` is a pole.
    pub fn has_pole_at_zero(&self) -> bool {
        self.den.coeff(0).is_zero()
    }

    pub fn display(&self) -> String {
        let wrap = |p: &Poly| {
            let s = p.display_with("d");
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            self.num.display_with("d")
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({})", self.display())
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFn::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        RatFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for RatFn {
    fn sum<I: Iterator<Item = RatFn>>(iter: I) -> RatFn {
        iter.fold(RatFn::zero(), |acc, x| &acc + &x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, rat};
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-6i64..=6, 1..4).prop_map(|c| Poly::from_ints(&c))
    }

    fn small_ratfn() -> impl Strategy<Value = RatFn> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFn::new(n, d).unwrap())
    }

    #[test]
    fn normal_form_cancels_and_makes_monic() {
        // (2d+4)/(4d+8) = 1/2
        let f = RatFn::new(Poly::from_ints(&[4, 2]), Poly::from_ints(&[8, 4])).unwrap();
        assert_eq!(f, RatFn::constant(rat(1, 2)));
        let g = RatFn::new(Poly::from_ints(&[3]), Poly::from_ints(&[4, 2])).unwrap();
        assert_eq!(g.denom(), &Poly::linear(int(2)));
        assert_eq!(g.numer(), &Poly::constant(rat(3, 2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatFn::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn limits_at_infinity() {
        let f = RatFn::new(Poly::from_ints(&[1, 3]), Poly::from_ints(&[2, 1])).unwrap();
        assert_eq!(f.limit_at_infinity().unwrap(), int(3));
        let g = RatFn::new(Poly::from_ints(&[1]), Poly::from_ints(&[2, 1])).unwrap();
        assert_eq!(g.limit_at_infinity().unwrap(), int(0));
        assert!(RatFn::d().limit_at_infinity().is_err());
    }

    #[test]
    fn pole_is_reported_on_eval() {
        let g = RatFn::new(Poly::one(), Poly::linear(int(2))).unwrap();
        assert!(g.eval(&int(-2)).is_err());
        assert_eq!(g.eval(&int(1)).unwrap(), rat(1, 3));
    }

    proptest! {
        #[test]
        fn product_then_quotient_roundtrips(f in small_ratfn(), g in small_ratfn()) {
            prop_assume!(!g.is_zero());
            let back = (&f * &g).checked_div(&g).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn addition_matches_pointwise(f in small_ratfn(), g in small_ratfn(), x in 1i64..20) {
            let x = int(x);
            if let (Ok(a), Ok(b)) = (f.eval(&x), g.eval(&x)) {
                prop_assert_eq!((&f + &g).eval(&x).unwrap(), a + b);
            }
        }
    }
}
