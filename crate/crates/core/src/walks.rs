//! Closed walks on trees.
//!
//! In the `N -> infinity` limit only closed walks whose distinct edges form a
//! tree survive (`V = E + 1`). A walk is stored in canonical form: vertices
//! are numbered in first-visit order and edges in first-use order, so two
//! walks that differ only by a relabelling of the matrix indices give the
//! same [`EdgeWord`].
//!
//! For the adjacency matrix every step moves along an edge. For the Laplacian
//! a step is either such a move (an off-diagonal block, sign `-1`) or a
//! diagonal letter: the block pair `X_{r,s} X_{s,r}` picked from the diagonal
//! block at the current vertex `r`, which leaves the walk at `r`. The
//! auxiliary vertex `s` of a diagonal letter is either a fresh vertex or an
//! existing tree neighbour; anything else would close a cycle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;

/// One letter of an [`EdgeWord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub edge: u8,
    pub diagonal: bool,
}

impl Letter {
    pub fn off(edge: u8) -> Self {
        Letter { edge, diagonal: false }
    }

    pub fn diag(edge: u8) -> Self {
        Letter { edge, diagonal: true }
    }
}

/// Canonical record of a closed tree walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeWord {
    letters: Vec<Letter>,
    sign: i8,
    vertex_count: usize,
    edge_count: usize,
    multiplicity: u64,
}

impl EdgeWord {
    /// Builds a word from letters already in canonical (first-use) labelling.
    ///
    /// Fails if the edge labels are not canonical. The tree condition
    /// `V = E + 1` holds by construction.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let mut next = 0u8;
        for l in &letters {
            if l.edge > next {
                return Err(Error::Domain(format!("edge label {} used before {}", l.edge, next)));
            }
            if l.edge == next {
                next += 1;
            }
        }
        let off = letters.iter().filter(|l| !l.diagonal).count();
        let edge_count = next as usize;
        Ok(EdgeWord {
            letters,
            sign: if off % 2 == 0 { 1 } else { -1 },
            vertex_count: edge_count + 1,
            edge_count,
            multiplicity: 1,
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    /// The cyclic sequence of projectors `X_e`; a diagonal letter `X_e^2 = X_e`
    /// contributes one projector.
    pub fn projectors(&self) -> Vec<u8> {
        self.letters.iter().map(|l| l.edge).collect()
    }
}

impl std::fmt::Display for EdgeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|l| format!("e{}{}", l.edge, if l.diagonal { "d" } else { "" })).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Kind of a raw walk step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Move from the current vertex to `target`.
    OffDiagonal,
    /// Stay; `target` is the auxiliary vertex `J` of the diagonal block term.
    Diagonal,
}

/// A raw walk step on arbitrary vertex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub target: u32,
}

impl Step {
    pub fn to(target: u32) -> Self {
        Step { kind: StepKind::OffDiagonal, target }
    }

    pub fn diag(target: u32) -> Self {
        Step { kind: StepKind::Diagonal, target }
    }
}

/// Relabels a raw closed walk starting at `root` into canonical form.
///
/// Returns an error if a step does not change/point away from the current
/// vertex, if the walk does not return to `root`, or if its edges contain a
/// cycle (the caller should prune such walks).
pub fn canonical_word(root: u32, steps: &[Step]) -> Result<EdgeWord> {
    let mut vertices: HashMap<u32, usize> = HashMap::from([(root, 0)]);
    let mut edges: HashMap<(u32, u32), u8> = HashMap::new();
    let mut letters = Vec::with_capacity(steps.len());
    let mut cur = root;
    for s in steps {
        if s.target == cur {
            return Err(Error::Domain(format!("step from {cur} to itself")));
        }
        let key = (cur.min(s.target), cur.max(s.target));
        let n = edges.len() as u8;
        let e = *edges.entry(key).or_insert(n);
        let nv = vertices.len();
        vertices.entry(s.target).or_insert(nv);
        match s.kind {
            StepKind::OffDiagonal => {
                letters.push(Letter::off(e));
                cur = s.target;
            }
            StepKind::Diagonal => letters.push(Letter::diag(e)),
        }
    }
    if cur != root {
        return Err(Error::Domain("walk is not closed".into()));
    }
    if vertices.len() != edges.len() + 1 {
        return Err(Error::Domain("walk edges contain a cycle".into()));
    }
    EdgeWord::from_letters(letters)
}

/// Mutable depth-first state of a partial walk.
#[derive(Clone)]
pub(crate) struct WalkState {
    neighbours: Vec<Vec<(u8, u8)>>,
    depth: Vec<u8>,
    letters: Vec<Letter>,
    cur: u8,
}

impl WalkState {
    fn root() -> Self {
        WalkState { neighbours: vec![Vec::new()], depth: vec![0], letters: Vec::new(), cur: 0 }
    }

    pub(crate) fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.depth.len() - 1
    }

    fn grow(&mut self, from: u8) -> (u8, u8) {
        let v = self.depth.len() as u8;
        let e = v - 1;
        self.depth.push(self.depth[from as usize] + 1);
        self.neighbours.push(vec![(from, e)]);
        self.neighbours[from as usize].push((v, e));
        (v, e)
    }

    fn shrink(&mut self, from: u8) {
        self.depth.pop();
        self.neighbours.pop();
        self.neighbours[from as usize].pop();
    }

    /// Extends the walk by all admissible steps until `remaining == stop`.
    fn dfs(&mut self, model: Model, remaining: usize, stop: usize, visit: &mut dyn FnMut(&WalkState)) {
        let cur = self.cur;
        let here = self.depth[cur as usize] as usize;
        if here > remaining {
            return;
        }
        if remaining == stop {
            if stop > 0 || cur == 0 {
                visit(self);
            }
            return;
        }
        let rest = remaining - 1;
        for i in 0..self.neighbours[cur as usize].len() {
            let (u, e) = self.neighbours[cur as usize][i];
            if self.depth[u as usize] as usize <= rest {
                self.letters.push(Letter::off(e));
                self.cur = u;
                self.dfs(model, rest, stop, visit);
                self.cur = cur;
                self.letters.pop();
            }
        }
        if here < rest {
            let (v, e) = self.grow(cur);
            self.letters.push(Letter::off(e));
            self.cur = v;
            self.dfs(model, rest, stop, visit);
            self.cur = cur;
            self.letters.pop();
            self.shrink(cur);
        }
        if model == Model::Laplacian && here <= rest {
            for i in 0..self.neighbours[cur as usize].len() {
                let (_, e) = self.neighbours[cur as usize][i];
                self.letters.push(Letter::diag(e));
                self.dfs(model, rest, stop, visit);
                self.letters.pop();
            }
            let (_, e) = self.grow(cur);
            self.letters.push(Letter::diag(e));
            self.dfs(model, rest, stop, visit);
            self.letters.pop();
            self.shrink(cur);
        }
    }
}

/// Calls `visit` on every canonical closed tree walk of `n` steps, in a fixed
/// deterministic order.
pub(crate) fn for_each_walk(model: Model, n: usize, visit: &mut dyn FnMut(&WalkState)) {
    if model == Model::Adjacency && n % 2 == 1 {
        return;
    }
    WalkState::root().dfs(model, n, 0, visit);
}

/// Parallel fold over all canonical closed tree walks of `n` steps.
///
/// The search space is split on a prefix of the walk; each prefix is folded
/// into its own accumulator and the accumulators are combined with `merge`,
/// which must be associative and commutative for the result to be
/// schedule-independent.
pub(crate) fn par_fold_walks<A, I, F, M>(model: Model, n: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &WalkState) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if model == Model::Adjacency && n % 2 == 1 {
        return init();
    }
    let split = n.saturating_sub(6).min(6);
    if split == 0 {
        let mut acc = init();
        WalkState::root().dfs(model, n, 0, &mut |w| fold(&mut acc, w));
        return acc;
    }
    let mut prefixes = Vec::new();
    WalkState::root().dfs(model, n, n - split, &mut |w| prefixes.push(w.clone()));
    prefixes
        .into_par_iter()
        .fold(&init, |mut acc, mut state| {
            state.dfs(model, n - split, 0, &mut |w| fold(&mut acc, w));
            acc
        })
        .reduce(&init, &merge)
}

/// All closed tree walks of `n` steps as a multiset of canonical words,
/// sorted by letters. `n = 0` yields the empty walk.
///
/// Memory grows with the number of walks; prefer the streaming folds in
/// [`crate::averager`] for high orders.
pub fn enumerate_tree_walks(model: Model, n: usize) -> Vec<EdgeWord> {
    let mut merged: BTreeMap<Vec<Letter>, u64> = BTreeMap::new();
    for_each_walk(model, n, &mut |w| *merged.entry(w.letters().to_vec()).or_default() += 1);
    merged
        .into_iter()
        .map(|(letters, mult)| {
            let mut w = EdgeWord::from_letters(letters).expect("enumerator emits canonical labels");
            w.multiplicity = mult;
            w
        })
        .collect()
}

/// Number of canonical closed tree walks of `n` steps, by edge count.
pub fn count_tree_walks(model: Model, n: usize) -> BTreeMap<usize, u64> {
    par_fold_walks(
        model,
        n,
        BTreeMap::new,
        |acc: &mut BTreeMap<usize, u64>, w| *acc.entry(w.edge_count()).or_default() += 1,
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )
}

/// True iff the sequence contains `a ... b ... a ... b` with `a != b`.
pub fn has_abab_seq(seq: &[u8]) -> bool {
    let mut labels: Vec<u8> = seq.to_vec();
    labels.sort_unstable();
    labels.dedup();
    for &a in &labels {
        for &b in &labels {
            if a == b {
                continue;
            }
            let pattern = [a, b, a, b];
            let mut k = 0;
            for &x in seq {
                if x == pattern[k] {
                    k += 1;
                    if k == 4 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// True iff the word's edge sequence (diagonal flags ignored) has a crossing.
pub fn has_abab(w: &EdgeWord) -> bool {
    has_abab_seq(&w.projectors())
}

/// Calls `visit` with every set partition of `{0..s}` as a restricted growth
/// string (block labels in first-occurrence order) and its number of blocks.
pub fn for_each_set_partition(s: usize, visit: &mut dyn FnMut(&[u8], usize)) {
    fn rec(word: &mut Vec<u8>, s: usize, blocks: u8, visit: &mut dyn FnMut(&[u8], usize)) {
        if word.len() == s {
            visit(word, blocks as usize);
            return;
        }
        for b in 0..=blocks {
            word.push(b);
            rec(word, s, blocks.max(b + 1), visit);
            word.pop();
        }
    }
    rec(&mut Vec::with_capacity(s), s, 0, visit);
}

/// Number of noncrossing set partitions of an `s`-set by block count, found by
/// brute-force enumeration of all set partitions.
pub fn count_noncrossing(s: usize) -> Result<BTreeMap<usize, u64>> {
    if s == 0 {
        return Err(Error::Domain("count_noncrossing needs s >= 1".into()));
    }
    let mut out = BTreeMap::new();
    for_each_set_partition(s, &mut |word, blocks| {
        if !has_abab_seq(word) {
            *out.entry(blocks).or_default() += 1;
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(model: Model, n: usize) -> Vec<String> {
        enumerate_tree_walks(model, n).iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn adjacency_low_orders() {
        assert!(enumerate_tree_walks(Model::Adjacency, 3).is_empty());
        assert_eq!(words(Model::Adjacency, 2), ["[e0,e0]"]);
        assert_eq!(words(Model::Adjacency, 4), ["[e0,e0,e0,e0]", "[e0,e0,e1,e1]", "[e0,e1,e1,e0]"]);
    }

    #[test]
    fn laplacian_first_order_is_one_diagonal_letter() {
        let w = enumerate_tree_walks(Model::Laplacian, 1);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].letters(), &[Letter::diag(0)]);
        assert_eq!(w[0].sign(), 1);
        assert_eq!(w[0].edge_count(), 1);
    }

    #[test]
    fn laplacian_second_order_matches_hand_expansion() {
        // (aX)^2(aX)^2 on one edge, the off-diagonal pair, and two distinct diagonal letters.
        let mut w = words(Model::Laplacian, 2);
        w.sort();
        assert_eq!(w, ["[e0,e0]", "[e0d,e0d]", "[e0d,e1d]"]);
    }

    #[test]
    fn empty_walk_at_order_zero() {
        let w = enumerate_tree_walks(Model::Adjacency, 0);
        assert_eq!(w.len(), 1);
        assert!(w[0].is_empty());
        assert_eq!(w[0].vertex_count(), 1);
    }

    #[test]
    fn every_word_is_a_signed_tree_walk() {
        for model in [Model::Adjacency, Model::Laplacian] {
            for n in 1..=7 {
                for w in enumerate_tree_walks(model, n) {
                    assert_eq!(w.vertex_count(), w.edge_count() + 1);
                    assert_eq!(w.multiplicity(), 1);
                    // closed walks on trees cross every edge an even number of times
                    assert_eq!(w.sign(), 1);
                    if model == Model::Adjacency {
                        assert!(w.letters().iter().all(|l| !l.diagonal));
                    }
                }
            }
        }
    }

    /// Independent route: enumerate raw index sequences over a small vertex
    /// set, keep the tree walks, and canonicalize each one.
    fn brute_force(model: Model, n: usize) -> BTreeMap<Vec<Letter>, u64> {
        let nv = n as u32 + 1;
        let mut out = BTreeMap::new();
        let mut steps = Vec::new();
        fn rec(model: Model, n: usize, nv: u32, cur: u32, steps: &mut Vec<Step>, out: &mut BTreeMap<Vec<Letter>, u64>) {
            if steps.len() == n {
                if let Ok(w) = canonical_word(0, steps) {
                    *out.entry(w.letters().to_vec()).or_default() += 1;
                }
                return;
            }
            for v in 0..nv {
                if v == cur {
                    continue;
                }
                steps.push(Step::to(v));
                rec(model, n, nv, v, steps, out);
                steps.pop();
                if model == Model::Laplacian {
                    steps.push(Step::diag(v));
                    rec(model, n, nv, cur, steps, out);
                    steps.pop();
                }
            }
        }
        rec(model, n, nv, 0, &mut steps, &mut out);
        out
    }

    #[test]
    fn enumeration_matches_relabelled_brute_force() {
        for (model, n) in [(Model::Adjacency, 4), (Model::Adjacency, 6), (Model::Laplacian, 3), (Model::Laplacian, 4)] {
            let distinct: Vec<Vec<Letter>> = brute_force(model, n).into_keys().collect();
            let ours: Vec<Vec<Letter>> = enumerate_tree_walks(model, n).iter().map(|w| w.letters().to_vec()).collect();
            assert_eq!(ours, distinct, "{model} n={n}");
        }
    }

    #[test]
    fn parallel_counts_match_sequential() {
        for (model, n) in [(Model::Adjacency, 12), (Model::Laplacian, 8)] {
            let mut seq: BTreeMap<usize, u64> = BTreeMap::new();
            for_each_walk(model, n, &mut |w| *seq.entry(w.edge_count()).or_default() += 1);
            assert_eq!(count_tree_walks(model, n), seq);
        }
    }

    #[test]
    fn canonical_word_relabels() {
        let w = canonical_word(7, &[Step::to(3), Step::to(7)]).unwrap();
        assert_eq!(w.letters(), &[Letter::off(0), Letter::off(0)]);
        let w = canonical_word(5, &[Step::diag(9), Step::diag(9)]).unwrap();
        assert_eq!(w.letters(), &[Letter::diag(0), Letter::diag(0)]);
        // triangle closes a cycle
        assert!(canonical_word(0, &[Step::to(1), Step::to(2), Step::to(0)]).is_err());
        assert!(canonical_word(0, &[Step::to(1)]).is_err());
        assert!(canonical_word(0, &[Step::to(0)]).is_err());
    }

    #[test]
    fn abab_examples() {
        assert!(has_abab_seq(&[0, 1, 0, 1]));
        assert!(!has_abab_seq(&[0, 1, 1, 0]));
        assert!(has_abab_seq(&[0, 1, 2, 1, 0, 2]));
        assert!(!has_abab_seq(&[0, 0, 1, 1, 2, 2]));
    }

    #[test]
    fn noncrossing_small_cases() {
        assert_eq!(count_noncrossing(1).unwrap(), BTreeMap::from([(1, 1)]));
        assert_eq!(count_noncrossing(3).unwrap(), BTreeMap::from([(1, 1), (2, 3), (3, 1)]));
        assert_eq!(count_noncrossing(4).unwrap()[&2], 6);
        assert!(count_noncrossing(0).is_err());
    }

    fn abab_by_tuples(seq: &[u8]) -> bool {
        let n = seq.len();
        for p1 in 0..n {
            for p2 in p1 + 1..n {
                for p3 in p2 + 1..n {
                    for p4 in p3 + 1..n {
                        if seq[p1] == seq[p3] && seq[p2] == seq[p4] && seq[p1] != seq[p2] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    proptest! {
        #[test]
        fn abab_agrees_with_four_tuple_search(seq in prop::collection::vec(0u8..4, 0..10)) {
            prop_assert_eq!(has_abab_seq(&seq), abab_by_tuples(&seq));
        }

        #[test]
        fn canonical_form_ignores_vertex_names(perm in Just((0u32..8).collect::<Vec<_>>()).prop_shuffle(), pick in 0usize..50) {
            let all = enumerate_tree_walks(Model::Laplacian, 4);
            let w = &all[pick % all.len()];
            // replay the canonical walk on permuted vertex labels
            let mut nbr: Vec<(u32, u32, u8)> = Vec::new();
            let mut cur = 0u32;
            let mut next = 1u32;
            let mut steps = Vec::new();
            for l in w.letters() {
                let other = match nbr.iter().find(|(a, b, e)| *e == l.edge && (*a == cur || *b == cur)) {
                    Some(&(a, b, _)) => if a == cur { b } else { a },
                    None => { nbr.push((cur, next, l.edge)); next += 1; next - 1 }
                };
                if l.diagonal {
                    steps.push(Step::diag(perm[other as usize]));
                } else {
                    steps.push(Step::to(perm[other as usize]));
                    cur = other;
                }
            }
            let again = canonical_word(perm[0], &steps).unwrap();
            prop_assert_eq!(again.letters(), w.letters());
        }
    }
}
