//! Exact averaging of walk words over the random unit vectors.
//!
//! A closed tree walk with `E` distinct edges contributes
//! `Z^E / d * <tr prod X>` with `Z = t d`. Two exact simplifications are
//! applied to the cyclic projector word first: adjacent repeats collapse
//! (`X^2 = X`), and a projector occurring once is averaged out by the
//! contraction rule (factor `1/d`). The remaining word is averaged with the
//! general matching formula in [`SPPoly::average_vector`]. Words reducing to
//! the same cyclic word (up to rotation, reversal and relabelling) share the
//! averaged factor, so moments are assembled from class counts.

mod factored;
mod sp;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use self::factored::Factored;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::polyalg::{int, MomentPoly, RatFn};
use crate::walks::{self, EdgeWord};

pub use sp::{Monomial, SPPoly};

/// `tr prod X` for a walk word, as a scalar-product polynomial with every
/// vector live.
pub fn trace_to_sp(w: &EdgeWord) -> SPPoly {
    SPPoly::trace(&w.projectors())
}

/// Applies the repeat-collapse and single-occurrence rules to a cyclic
/// projector word until neither applies.
///
/// Returns the reduced word and the number of projectors removed by the
/// single-occurrence rule (each one a factor `1/d`).
pub fn reduce_word(word: &[u8]) -> (Vec<u8>, usize) {
    let mut w = sp::collapse_repeats(word);
    let mut removed = 0;
    while w.len() > 1 {
        let mut counts: HashMap<u8, usize> = HashMap::new();
        for &x in &w {
            *counts.entry(x).or_default() += 1;
        }
        match w.iter().position(|x| counts[x] == 1) {
            Some(pos) => {
                w.remove(pos);
                removed += 1;
                w = sp::collapse_repeats(&w);
            }
            None => break,
        }
    }
    (w, removed)
}

/// Representative of a cyclic word under rotation, reversal and relabelling:
/// the lexicographically smallest first-occurrence relabelling.
pub fn canonical_cyclic(word: &[u8]) -> Vec<u8> {
    let n = word.len();
    let mut best: Option<Vec<u8>> = None;
    let mut relabel = |seq: &mut dyn Iterator<Item = u8>| {
        let mut map = [u8::MAX; 256];
        let mut next = 0u8;
        let cand: Vec<u8> = seq
            .map(|x| {
                if map[x as usize] == u8::MAX {
                    map[x as usize] = next;
                    next += 1;
                }
                map[x as usize]
            })
            .collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    };
    for r in 0..n {
        relabel(&mut (0..n).map(|i| word[(r + i) % n]));
        relabel(&mut (0..n).map(|i| word[(r + n - i) % n]));
    }
    best.unwrap_or_default()
}

/// `d^{h-1} <tr w>` for a reduced word with `h` distinct projectors.
fn reduced_factor(word: &[u8]) -> Result<Factored> {
    if word.len() <= 1 {
        return Ok(Factored::one());
    }
    let h = word.iter().collect::<BTreeSet<_>>().len() as i32;
    let f = SPPoly::trace(word).average_all_factored()?.times_d_power(h - 1);
    check_factor(word, &f.to_ratfn())?;
    Ok(f)
}

/// Every word factor is finite at `d = 0` and bounded as `d -> infinity`.
fn check_factor(word: &[u8], f: &RatFn) -> Result<()> {
    if f.has_pole_at_zero() || f.limit_at_infinity().is_err() {
        return Err(Error::Invariant(format!("word {word:?} averaged to {} with residual d-power", f.display())));
    }
    Ok(())
}

/// Contribution `sign * multiplicity * t^E * d^{E-1} <tr prod X>` of one walk.
pub fn walk_contribution(w: &EdgeWord) -> Result<MomentPoly> {
    let (reduced, _) = reduce_word(&w.projectors());
    let f = reduced_factor(&canonical_cyclic(&reduced))?.to_ratfn();
    let c = int(w.sign() as i64) * int(w.multiplicity() as i64);
    Ok(MomentPoly::term(w.edge_count() as u32, f.scale(&c)))
}

/// The same contribution without the word-level shortcuts, averaging the
/// full trace vector by vector in the given order.
pub fn walk_contribution_in_order(w: &EdgeWord, order: &[u8]) -> Result<MomentPoly> {
    let e = w.edge_count();
    if e == 0 {
        return Ok(MomentPoly::one());
    }
    let avg = trace_to_sp(w).average_in_order(order)?;
    let f = &avg * &RatFn::d().pow(e as u32 - 1);
    let c = int(w.sign() as i64) * int(w.multiplicity() as i64);
    Ok(MomentPoly::term(e as u32, f.scale(&c)))
}

/// Walks sharing edge count, sign, crossing flag and canonical reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkClass {
    pub edges: u32,
    pub sign: i8,
    /// Whether the walks contain an `abab` pattern; `None` when not tracked.
    pub crossing: Option<bool>,
    /// Canonical reduced cyclic projector word.
    pub word: Vec<u8>,
    pub count: u64,
}

/// Moment with enumeration statistics.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub moment: MomentPoly,
    /// Number of canonical tree walks.
    pub walks: u64,
    /// Number of distinct reduced cyclic words that had to be averaged.
    pub reduced_words: usize,
}

type ClassKey = (u32, i8, Option<bool>, Vec<u8>);

fn merge_counts(mut a: HashMap<ClassKey, u64>, b: HashMap<ClassKey, u64>) -> HashMap<ClassKey, u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

fn sorted_classes(map: HashMap<ClassKey, u64>) -> Vec<WalkClass> {
    let mut out: Vec<WalkClass> = map
        .into_iter()
        .map(|((edges, sign, crossing, word), count)| WalkClass { edges, sign, crossing, word, count })
        .collect();
    out.sort_by(|a, b| (a.edges, a.sign, a.crossing, &a.word).cmp(&(b.edges, b.sign, b.crossing, &b.word)));
    out
}

/// Groups all closed tree walks of `n` steps into [`WalkClass`]es, in a
/// deterministic order. With `track_crossing` every walk is also tested for
/// an `abab` pattern.
pub fn classify_walks(model: Model, n: usize, track_crossing: bool) -> Vec<WalkClass> {
    if n == 0 {
        let crossing = track_crossing.then_some(false);
        return vec![WalkClass { edges: 0, sign: 1, crossing, word: Vec::new(), count: 1 }];
    }
    let map = walks::par_fold_walks(
        model,
        n,
        HashMap::new,
        |acc: &mut HashMap<ClassKey, u64>, w| {
            let word: Vec<u8> = w.letters().iter().map(|l| l.edge).collect();
            let off = w.letters().iter().filter(|l| !l.diagonal).count();
            let sign = if off % 2 == 0 { 1 } else { -1 };
            let crossing = track_crossing.then(|| walks::has_abab_seq(&word));
            let key = (w.edge_count() as u32, sign, crossing, canonical_cyclic(&reduce_word(&word).0));
            *acc.entry(key).or_default() += 1;
        },
        merge_counts,
    );
    sorted_classes(map)
}

/// `d^{h-1} <tr w>` for a reduced cyclic word with `h` distinct projectors:
/// the contribution of any walk reducing to `w`, divided by `t^E`.
pub fn reduced_word_factor(word: &[u8]) -> Result<RatFn> {
    Ok(reduced_factor(word)?.to_ratfn())
}

/// Averaged factor of every distinct reduced word among the classes.
pub fn class_factors(classes: &[WalkClass]) -> Result<BTreeMap<Vec<u8>, RatFn>> {
    Ok(factored_classes(classes)?.into_iter().map(|(w, f)| (w, f.to_ratfn())).collect())
}

fn factored_classes(classes: &[WalkClass]) -> Result<BTreeMap<Vec<u8>, Factored>> {
    let words: BTreeSet<&Vec<u8>> = classes.iter().map(|c| &c.word).collect();
    Ok(words
        .into_par_iter()
        .map(|w| reduced_factor(w).map(|f| (w.clone(), f)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect())
}

/// Sums `sign * count * t^E * factor(word)` over the classes.
pub fn moment_from_classes(classes: &[WalkClass]) -> Result<MomentReport> {
    let factors = factored_classes(classes)?;
    let mut by_power: BTreeMap<u32, Factored> = BTreeMap::new();
    let mut walks = 0;
    for c in classes {
        walks += c.count;
        let k = int(c.sign as i64) * int(c.count as i64);
        by_power.entry(c.edges).or_default().add_assign(&factors[&c.word].scale(&k));
    }
    let mut moment = MomentPoly::zero();
    for (e, f) in by_power {
        moment.add_term(e, f.to_ratfn());
    }
    Ok(MomentReport { moment, walks, reduced_words: factors.len() })
}

/// Rough number of tree walks of order `n`, extrapolated from measured
/// counts (`mu22`: 23785699, `nu11`: 7290791) with the observed growth per
/// order. Used for cost warnings only.
pub fn estimated_walk_count(model: Model, n: usize) -> f64 {
    match model {
        Model::Adjacency if n % 2 == 1 => 0.0,
        Model::Adjacency => 23_785_699.0 * 7.25f64.powf((n as f64 - 22.0) / 2.0),
        Model::Laplacian => 7_290_791.0 * 6.5f64.powf(n as f64 - 11.0),
    }
}

/// `n`-th moment of the adjacency or Laplacian block matrix.
pub fn moment(model: Model, n: usize) -> Result<MomentPoly> {
    Ok(moment_report(model, n)?.moment)
}

pub fn moment_report(model: Model, n: usize) -> Result<MomentReport> {
    if n == 0 {
        return Ok(MomentReport { moment: MomentPoly::one(), walks: 1, reduced_words: 0 });
    }
    moment_from_classes(&classify_walks(model, n, false))
}

/// `s`-th moment `(1/d) <tr (sum_j alpha_j X_j)^s>` of one diagonal block of
/// the Laplacian, summed over set partitions of the `s` positions.
pub fn diag_block_moment(s: usize) -> Result<MomentPoly> {
    if s == 0 {
        return Ok(MomentPoly::one());
    }
    let mut map = HashMap::new();
    walks::for_each_set_partition(s, &mut |word, blocks| {
        let key = (blocks as u32, 1, None, canonical_cyclic(&reduce_word(word).0));
        *map.entry(key).or_default() += 1;
    });
    Ok(moment_from_classes(&sorted_classes(map))?.moment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{c_value, substitute_c_form, Poly, Rational};
    use num_traits::One;
    use proptest::prelude::*;

    fn parse(s: &str) -> MomentPoly {
        substitute_c_form(s).unwrap()
    }

    #[test]
    fn word_reduction() {
        assert_eq!(reduce_word(&[0, 1, 1, 0]).0.len(), 1);
        assert_eq!(reduce_word(&[0, 1, 0, 1]), (vec![0, 1, 0, 1], 0));
        assert_eq!(reduce_word(&[0, 1, 0, 2, 0, 1]).0.len(), 4);
        assert_eq!(reduce_word(&[]), (vec![], 0));
        assert_eq!(canonical_cyclic(&[3, 5, 3, 5]), vec![0, 1, 0, 1]);
        assert_eq!(canonical_cyclic(&[0, 1, 2, 0, 2, 1]), canonical_cyclic(&[2, 1, 0, 2, 0, 1]));
    }

    #[test]
    fn contribution_examples() {
        let w = EdgeWord::from_letters(vec![walks::Letter::off(0); 2]).unwrap();
        assert_eq!(walk_contribution(&w).unwrap(), MomentPoly::t());
        let w = EdgeWord::from_letters([0, 1, 0, 1].map(walks::Letter::off).to_vec()).unwrap();
        assert_eq!(walk_contribution(&w).unwrap(), MomentPoly::term(2, c_value(2).unwrap()));
        let w = EdgeWord::from_letters(vec![walks::Letter::diag(0)]).unwrap();
        assert_eq!(walk_contribution(&w).unwrap(), MomentPoly::t());
    }

    #[test]
    fn low_moments() {
        assert_eq!(moment(Model::Adjacency, 0).unwrap(), MomentPoly::one());
        assert!(moment(Model::Adjacency, 5).unwrap().is_zero());
        assert_eq!(moment(Model::Adjacency, 6).unwrap(), parse("t + 6 t^2 + 5 t^3"));
        assert_eq!(moment(Model::Laplacian, 3).unwrap(), parse("4 t + 6 t^2 + t^3"));
        assert_eq!(moment(Model::Laplacian, 4).unwrap(), parse("8 t + t^2 (24 + c_2) + 12 t^3 + t^4"));
        assert_eq!(diag_block_moment(1).unwrap(), parse("t"));
        assert_eq!(diag_block_moment(2).unwrap(), parse("t + t^2"));
        assert_eq!(diag_block_moment(4).unwrap(), parse("t + t^2 (6 + c_2) + 6 t^3 + t^4"));
    }

    #[test]
    fn walk_factors_collapse_at_d_one() {
        let one = Rational::one();
        for (model, n) in [(Model::Adjacency, 8), (Model::Laplacian, 6)] {
            for w in walks::enumerate_tree_walks(model, n) {
                let p = walk_contribution(&w).unwrap().at_d(&one).unwrap();
                let expect = Poly::monomial(w.edge_count(), int(w.sign() as i64));
                assert_eq!(p, expect, "{w}");
            }
        }
    }

    #[test]
    fn elimination_order_does_not_matter() {
        for (model, n) in [(Model::Adjacency, 8), (Model::Laplacian, 6)] {
            for w in walks::enumerate_tree_walks(model, n) {
                let ids: Vec<u8> = (0..w.edge_count() as u8).collect();
                let rev: Vec<u8> = ids.iter().rev().copied().collect();
                let shortcut = walk_contribution(&w).unwrap();
                assert_eq!(walk_contribution_in_order(&w, &ids).unwrap(), shortcut, "{w}");
                assert_eq!(walk_contribution_in_order(&w, &rev).unwrap(), shortcut, "{w}");
            }
        }
    }

    #[test]
    fn classes_carry_crossing_flags() {
        let classes = classify_walks(Model::Adjacency, 8, true);
        let factors = class_factors(&classes).unwrap();
        for c in &classes {
            let lim = factors[&c.word].limit_at_infinity().unwrap();
            assert_eq!(lim, int(if c.crossing == Some(true) { 0 } else { 1 }));
        }
        let total: u64 = classes.iter().map(|c| c.count).sum();
        assert_eq!(total, walks::enumerate_tree_walks(Model::Adjacency, 8).len() as u64);
        assert_eq!(moment_from_classes(&classes).unwrap().moment, moment(Model::Adjacency, 8).unwrap());
    }

    #[test]
    fn noncrossing_words_survive_large_d() {
        for (model, n) in [(Model::Adjacency, 10), (Model::Laplacian, 6)] {
            for w in walks::enumerate_tree_walks(model, n) {
                let lim = walk_contribution(&w).unwrap().limit_d_infinity().unwrap();
                let expect = if walks::has_abab(&w) { Poly::zero() } else { Poly::monomial(w.edge_count(), int(1)) };
                assert_eq!(lim, expect, "{w}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn any_elimination_order_agrees(idx in 0usize..10_000, perm in Just((0u8..8).collect::<Vec<_>>()).prop_shuffle()) {
            let words = walks::enumerate_tree_walks(Model::Laplacian, 7);
            let w = &words[idx % words.len()];
            let order: Vec<u8> = perm.into_iter().filter(|&e| (e as usize) < w.edge_count()).collect();
            prop_assert_eq!(walk_contribution_in_order(w, &order).unwrap(), walk_contribution(w).unwrap());
        }
    }
}
