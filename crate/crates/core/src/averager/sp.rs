//! Polynomials in the scalar products `s_ij = a_i . a_j` of unit vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::factored::Factored;
use crate::error::{Error, Result};
use crate::polyalg::{int, RatFn, Rational};

/// Product of scalar-product symbols `s_ij^e` with `i < j`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<((u8, u8), u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Builds a monomial from possibly unsorted, repeated symbols.
    ///
    /// Fails on a diagonal symbol `s_ii`.
    pub fn from_symbols(symbols: impl IntoIterator<Item = ((u8, u8), u32)>) -> Result<Self> {
        let mut map: BTreeMap<(u8, u8), u32> = BTreeMap::new();
        for ((i, j), e) in symbols {
            if i == j {
                return Err(Error::Invariant(format!("diagonal symbol s_{i}{i}")));
            }
            if e > 0 {
                *map.entry((i.min(j), i.max(j))).or_default() += e;
            }
        }
        Ok(Monomial(map.into_iter().collect()))
    }

    pub fn symbols(&self) -> &[((u8, u8), u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree of vector `v`.
    pub fn degree_of(&self, v: u8) -> u32 {
        self.0.iter().filter(|((i, j), _)| *i == v || *j == v).map(|(_, e)| e).sum()
    }

    fn vectors(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().flat_map(|((i, j), _)| [*i, *j])
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|((i, j), e)| if *e == 1 { format!("s{i}_{j}") } else { format!("s{i}_{j}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial in scalar-product symbols with coefficients in `d`, together
/// with the set of vectors still to be averaged.
#[derive(Debug, Clone, PartialEq)]
pub struct SPPoly {
    terms: BTreeMap<Monomial, Factored>,
    live: BTreeSet<u8>,
}

impl SPPoly {
    /// The constant `1` with the given live vectors.
    pub fn unit(live: impl IntoIterator<Item = u8>) -> Self {
        SPPoly { terms: BTreeMap::from([(Monomial::one(), Factored::one())]), live: live.into_iter().collect() }
    }

    /// `tr(X_{w_0} X_{w_1} ... )` for a cyclic sequence of projectors
    /// `X = |a><a|`, after collapsing adjacent repeats (`X^2 = X`).
    pub fn trace(word: &[u8]) -> SPPoly {
        let live: BTreeSet<u8> = word.iter().copied().collect();
        let w = collapse_repeats(word);
        let symbols = if w.len() < 2 {
            Vec::new()
        } else {
            (0..w.len()).map(|i| ((w[i], w[(i + 1) % w.len()]), 1)).collect()
        };
        let mono = Monomial::from_symbols(symbols).expect("collapsed word has no adjacent repeats");
        SPPoly { terms: BTreeMap::from([(mono, Factored::one())]), live }
    }

    pub fn live(&self) -> &BTreeSet<u8> {
        &self.live
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial as a rational function of `d`.
    pub fn coeff(&self, m: &Monomial) -> RatFn {
        self.terms.get(m).map(Factored::to_ratfn).unwrap_or_else(RatFn::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// The value once every vector is averaged.
    pub fn constant(&self) -> Option<RatFn> {
        if !self.live.is_empty() || self.terms.keys().any(|m| !m.is_one()) {
            return None;
        }
        Some(self.coeff(&Monomial::one()))
    }

    pub(crate) fn constant_factored(&self) -> Option<Factored> {
        if !self.live.is_empty() || self.terms.keys().any(|m| !m.is_one()) {
            return None;
        }
        Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_default())
    }

    fn add(&mut self, m: Monomial, c: Factored) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        entry.add_assign(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Averages the unit vector `v` uniformly over the sphere.
    ///
    /// `<prod_j (a_j . y)^{k_j}>` with `sum k_j = 2m` equals
    /// `1/(d (d+2) ... (d+2m-2))` times the sum over perfect matchings of the
    /// `2m` factors, each matched pair `(j, l)` contributing `s_jl`. Matchings
    /// are grouped by the multigraph they induce on the partners.
    pub fn average_vector(&self, v: u8) -> Result<SPPoly> {
        if !self.live.contains(&v) {
            return Err(Error::Invariant(format!("vector {v} is not live")));
        }
        let mut live = self.live.clone();
        live.remove(&v);
        let mut out = SPPoly { terms: BTreeMap::new(), live };
        for (mono, coeff) in &self.terms {
            let mut partners = Vec::new();
            let mut rest = Vec::new();
            for &((i, j), e) in mono.symbols() {
                if i == v {
                    partners.push((j, e));
                } else if j == v {
                    partners.push((i, e));
                } else {
                    rest.push(((i, j), e));
                }
            }
            let total: u32 = partners.iter().map(|p| p.1).sum();
            if total % 2 == 1 {
                return Err(Error::Invariant(format!("vector {v} has odd degree {total} in {mono}")));
            }
            if total == 0 {
                out.add(mono.clone(), coeff.clone());
                continue;
            }
            for (weight, edges) in matchings(&partners) {
                let m = Monomial::from_symbols(rest.iter().copied().chain(edges))?;
                out.add(m, coeff.times_pochhammer_recip(&weight, (total / 2) as usize));
            }
        }
        Ok(out)
    }

    /// Averages every live vector of degree at most two in all monomials.
    ///
    /// For such a vector the average is the contraction
    /// `<(a.y)(y.b)> = s_ab / d`, and a vector that no longer occurs at all
    /// averages to itself (in particular `<tr X> = 1`).
    pub fn single_occurrence_reduce(&self) -> Result<SPPoly> {
        let mut p = self.clone();
        loop {
            let next = p.live.iter().copied().find(|&v| p.terms.keys().all(|m| m.degree_of(v) <= 2));
            match next {
                Some(v) => p = p.average_vector(v)?,
                None => return Ok(p),
            }
        }
    }

    /// Number of distinct vectors sharing a symbol with `v`.
    fn partner_count(&self, v: u8) -> usize {
        let mut set = BTreeSet::new();
        for m in self.terms.keys() {
            for ((i, j), _) in m.symbols() {
                if *i == v {
                    set.insert(*j);
                } else if *j == v {
                    set.insert(*i);
                }
            }
        }
        set.len()
    }

    /// Averages all live vectors: degree-two shortcuts first, then the vector
    /// with the fewest partners (ties to the lowest id).
    pub fn average_all(&self) -> Result<RatFn> {
        Ok(self.average_all_factored()?.to_ratfn())
    }

    pub(crate) fn average_all_factored(&self) -> Result<Factored> {
        let mut p = self.single_occurrence_reduce()?;
        while let Some(v) = p.live.iter().copied().min_by_key(|&v| (p.partner_count(v), v)) {
            p = p.average_vector(v)?.single_occurrence_reduce()?;
        }
        p.constant_factored().ok_or_else(|| Error::Invariant("symbols left after averaging".into()))
    }

    /// Averages the live vectors in exactly the given order.
    pub fn average_in_order(&self, order: &[u8]) -> Result<RatFn> {
        let mut p = self.clone();
        for &v in order {
            p = p.average_vector(v)?;
        }
        p.constant().ok_or_else(|| Error::Invariant("order does not cover all live vectors".into()))
    }

    /// Vectors referenced by some monomial.
    pub fn referenced(&self) -> BTreeSet<u8> {
        self.terms.keys().flat_map(|m| m.vectors().collect::<Vec<_>>()).collect()
    }
}

/// Removes cyclically adjacent repeats until none remain.
pub(crate) fn collapse_repeats(word: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// A weighted multigraph on the partners of one vector: `((i, j), multiplicity)` edges.
type Matching = (Rational, Vec<((u8, u8), u32)>);

/// Multigraphs on the partners with degree `k_j` at partner `j`, as
/// `(weight, symbols)`; loops are `s_jj = 1` and are dropped. The weight
/// counts the perfect matchings inducing the multigraph:
/// `prod k_j! / (prod l_j! 2^{l_j} prod e_jl!)`.
fn matchings(partners: &[(u8, u32)]) -> Vec<Matching> {
    fn factorial(n: u32) -> Rational {
        (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
    }

    struct Ctx<'a> {
        partners: &'a [(u8, u32)],
        rem: Vec<u32>,
        edges: Vec<((u8, u8), u32)>,
        out: Vec<Matching>,
        numer: Rational,
    }

    fn vertex(c: &mut Ctx, idx: usize, denom: Rational) {
        if idx == c.partners.len() {
            c.out.push((&c.numer / &denom, c.edges.clone()));
            return;
        }
        let r = c.rem[idx];
        for loops in 0..=r / 2 {
            let d = &denom * factorial(loops) * int(1 << loops);
            spread(c, idx, idx + 1, r - 2 * loops, d);
        }
    }

    fn spread(c: &mut Ctx, idx: usize, j: usize, left: u32, denom: Rational) {
        if left == 0 {
            vertex(c, idx + 1, denom);
            return;
        }
        if j == c.partners.len() {
            return;
        }
        for e in 0..=left.min(c.rem[j]) {
            c.rem[j] -= e;
            if e > 0 {
                c.edges.push(((c.partners[idx].0, c.partners[j].0), e));
            }
            spread(c, idx, j + 1, left - e, &denom * factorial(e));
            if e > 0 {
                c.edges.pop();
            }
            c.rem[j] += e;
        }
    }

    let numer = partners.iter().fold(Rational::one(), |acc, p| acc * factorial(p.1));
    let mut c = Ctx { partners, rem: partners.iter().map(|p| p.1).collect(), edges: Vec::new(), out: Vec::new(), numer };
    vertex(&mut c, 0, Rational::one());
    c.out.retain(|(w, _)| !w.is_zero());
    c.out
}
