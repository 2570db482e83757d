//! JSON layouts for exact values.
//!
//! - a rational is the decimal string `"p/q"` (`q > 0`, reduced);
//! - a rational function of `d` is `{"num": [...], "den": [...]}` with
//!   ascending powers of `d`, each coefficient a rational string;
//! - a moment polynomial is an array of `{"t_power", "num", "den"}` objects in
//!   ascending `t_power` order.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{MomentPoly, Poly, RatFn, Rational};
use crate::error::{Error, Result};

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn poly_to_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(rational_to_string).collect()
}

fn poly_from_strings(v: &[String]) -> Result<Poly> {
    Ok(Poly::from_coeffs(v.iter().map(|s| rational_from_str(s)).collect::<Result<_>>()?))
}

#[derive(Serialize, Deserialize)]
struct RatFnRepr {
    num: Vec<String>,
    den: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    t_power: u32,
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for RatFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFnRepr { num: poly_to_strings(self.numer()), den: poly_to_strings(self.denom()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = RatFnRepr::deserialize(de)?;
        let num = poly_from_strings(&r.num).map_err(D::Error::custom)?;
        let den = poly_from_strings(&r.den).map_err(D::Error::custom)?;
        RatFn::new(num, den).map_err(D::Error::custom)
    }
}

impl Serialize for MomentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms()
            .map(|(k, c)| TermRepr { t_power: k, num: poly_to_strings(c.numer()), den: poly_to_strings(c.denom()) })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(de)?;
        let mut m = MomentPoly::zero();
        for t in terms {
            let num = poly_from_strings(&t.num).map_err(D::Error::custom)?;
            let den = poly_from_strings(&t.den).map_err(D::Error::custom)?;
            m.add_term(t.t_power, RatFn::new(num, den).map_err(D::Error::custom)?);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, substitute_c_form};
    use proptest::prelude::*;

    #[test]
    fn moment_json_layout() {
        let m = substitute_c_form("t + (12 + 2 c_2) t^2").unwrap();
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json[0]["t_power"], 1);
        assert_eq!(json[0]["num"][0], "1/1");
        assert_eq!(json[1]["num"], serde_json::json!(["30/1", "12/1"]));
        assert_eq!(json[1]["den"], serde_json::json!(["2/1", "1/1"]));
        let back: MomentPoly = serde_json::from_value(json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&rat(-6, 4)), "-3/2");
        assert_eq!(rational_from_str("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(rational_from_str("7").unwrap(), rat(7, 1));
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }

    proptest! {
        #[test]
        fn ratfn_json_roundtrip(n in prop::collection::vec(-50i64..50, 1..4), d in prop::collection::vec(-50i64..50, 1..4)) {
            let den = Poly::from_ints(&d);
            prop_assume!(!den.is_zero());
            let f = RatFn::new(Poly::from_ints(&n), den).unwrap();
            let s = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(serde_json::from_str::<RatFn>(&s).unwrap(), f);
        }
    }
}
