//! The `c_m` notation: `c_m/d` is the average of the `2m`-th power of the
//! scalar product between a fixed unit vector and a uniformly random one on
//! the sphere in `d` dimensions, `c_m = (2m-1)!! / ((d+2)(d+4)...(d+2m-2))`.
//!
//! Expressions written with `c_m` symbols are parsed into canonical
//! [`MomentPoly`] values; [`to_c_form`] goes the other way, producing one of
//! many equivalent c-forms for display.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{MomentPoly, Poly, RatFn, Rational};
use crate::error::{Error, Result};

/// `n!! = n (n-2) (n-4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `c_m` as a rational function of `d`.
pub fn c_value(m: i64) -> Result<RatFn> {
    if m < 1 {
        return Err(Error::Domain(format!("c_m needs m >= 1, got {m}")));
    }
    let num = Poly::constant(Rational::from_integer(double_factorial(2 * m - 1)));
    let den = (1..m).fold(Poly::one(), |acc, j| &acc * &Poly::linear(Rational::from_integer((2 * j).into())));
    RatFn::new(num, den)
}

/// `c_m` evaluated at a rational `d`.
pub fn c_value_at(m: i64, d: &Rational) -> Result<Rational> {
    c_value(m)?.eval(d)
}

/// Parses an expression in `t` and `c_2, c_3, ...` and substitutes every
/// `c_m` by its rational function of `d`.
///
/// Accepted syntax: integers, `+ - * / ^`, parentheses or brackets, and
/// implicit multiplication by juxtaposition (`2 c_2 t^3`). Symbols are `t`
/// and `c_m`, `cm` or `c_{m}`. Division is only allowed by `t`-free factors.
pub fn substitute_c_form(expr: &str) -> Result<MomentPoly> {
    let tokens = tokenize(expr)?;
    let mut p = Parser { tokens, pos: 0 };
    let value = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected trailing input at token {}", p.pos)));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    T,
    C(i64),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Num(digits.parse().expect("ascii digits")));
        } else if "+-*/^()[]".contains(ch) {
            out.push(Token::Op(ch));
            i += 1;
        } else if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '{' || chars[i] == '}') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            out.push(symbol(&ident)?);
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

fn symbol(ident: &str) -> Result<Token> {
    if ident == "t" {
        return Ok(Token::T);
    }
    if let Some(rest) = ident.strip_prefix('c') {
        let idx = rest.trim_start_matches('_').trim_start_matches('{').trim_end_matches('}');
        if let Ok(m) = idx.parse::<i64>() {
            if m >= 1 {
                return Ok(Token::C(m));
            }
        }
    }
    Err(Error::Parse(format!("unknown symbol {ident:?}")))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MomentPoly> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc + &rhs.scale(&RatFn::constant(-Rational::one())) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MomentPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = divide(&acc, &rhs)?;
                }
                Some(Token::Num(_) | Token::T | Token::C(_) | Token::Op('(' | '[')) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MomentPoly> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(&RatFn::constant(-Rational::one())))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MomentPoly> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.bump() {
                Some(Token::Num(e)) => {
                    let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                other => return Err(Error::Parse(format!("expected integer exponent, got {other:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MomentPoly> {
        match self.bump() {
            Some(Token::Num(n)) => Ok(MomentPoly::term(0, RatFn::constant(Rational::from_integer(n)))),
            Some(Token::T) => Ok(MomentPoly::t()),
            Some(Token::C(m)) => Ok(MomentPoly::term(0, c_value(m)?)),
            Some(Token::Op(open @ ('(' | '['))) => {
                let inner = self.expr()?;
                let close = if open == '(' { ')' } else { ']' };
                match self.bump() {
                    Some(Token::Op(c)) if c == close => Ok(inner),
                    other => Err(Error::Parse(format!("expected {close:?}, got {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn divide(num: &MomentPoly, den: &MomentPoly) -> Result<MomentPoly> {
    if den.degree().unwrap_or(0) > 0 {
        return Err(Error::Parse("division by an expression containing t".into()));
    }
    let inv = den.coeff(0).recip().map_err(|_| Error::Parse("division by zero".into()))?;
    Ok(num.scale(&inv))
}

/// Renders a moment in the `c_m` notation.
///
/// The c-form is not unique; this picks one by repeatedly matching the
/// highest denominator factor `(d+2j)` against the c-monomial with the same
/// factor profile. Coefficients whose denominators are not of that shape are
/// printed as plain rational functions of `d`.
pub fn to_c_form(m: &MomentPoly) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in m.terms() {
        let body = coeff_c_form(c);
        let simple = !body.contains(' ') || body.starts_with('(');
        let tpow = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        parts.push(match (k, body.as_str()) {
            (0, _) => body.clone(),
            (_, "1") => tpow,
            _ if simple => format!("{body} {tpow}"),
            _ => format!("{tpow} ({body})"),
        });
    }
    parts.join(" + ")
}

fn coeff_c_form(c: &RatFn) -> String {
    match c_form_terms(c) {
        Some((terms, rest)) => {
            let mut out: Vec<String> = Vec::new();
            if !rest.is_zero() {
                out.push(rest.display_with("d"));
            }
            for (q, ms) in terms.into_iter().rev() {
                if q.is_zero() {
                    continue;
                }
                let mono = ms.iter().map(|m| format!("c_{m}")).collect::<Vec<_>>().join(" ");
                let qs = super::poly::format_rational(&q);
                out.push(if q.is_one() { mono } else { format!("{qs} {mono}") });
            }
            if out.is_empty() {
                "0".into()
            } else {
                out.join(" + ").replace("+ -", "- ")
            }
        }
        None => format!("({})", c.display()),
    }
}

/// Rational multiples of products of `c_m`, each given by its list of `m`.
type CTerms = Vec<(Rational, Vec<i64>)>;

/// Greedy decomposition `c = rest(d) + sum q_i * prod c_{m}`; `None` when the
/// denominator is not a product of `(d + 2j)`, `j >= 1`.
fn c_form_terms(c: &RatFn) -> Option<(CTerms, Poly)> {
    let mut den = c.denom().clone();
    let mut profile: Vec<usize> = Vec::new();
    let mut j = 1i64;
    while den.degree().unwrap_or(0) > 0 {
        let (q, k) = den.deflate_root(&Rational::from_integer((-2 * j).into()));
        profile.push(k);
        den = q;
        j += 1;
        if j > 64 {
            return None;
        }
    }
    // `den` is now the constant 1 (monic); pad the profile to be non-increasing.
    let mut num = c.numer().clone();
    let mut hull = profile.clone();
    for i in (0..hull.len().saturating_sub(1)).rev() {
        hull[i] = hull[i].max(hull[i + 1]);
    }
    for (i, (&h, &e)) in hull.iter().zip(&profile).enumerate() {
        let f = Poly::linear(Rational::from_integer((2 * (i as i64 + 1)).into()));
        num = &num * &f.pow((h - e) as u32);
    }
    let mut terms = Vec::new();
    while let Some(top) = hull.iter().rposition(|&h| h > 0) {
        // c-monomial with factor profile `hull`: one c_m per column of the profile.
        let ms: Vec<i64> = (1..=hull[0]).map(|i| hull.iter().filter(|&&h| h >= i).count() as i64 + 1).collect();
        let cnum: BigInt = ms.iter().map(|&m| double_factorial(2 * m - 1)).product();
        let root = Rational::from_integer((-2 * (top as i64 + 1)).into());
        let q = num.eval(&root) / Rational::from_integer(cnum.clone());
        let rest = &num - &Poly::constant(&q * Rational::from_integer(cnum));
        let (quot, rem) = rest.div_rem(&Poly::linear(-&root));
        if !rem.is_zero() {
            return None;
        }
        num = quot;
        terms.push((q, ms));
        hull[top] -= 1;
    }
    Some((terms, num))
}
