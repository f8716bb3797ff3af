use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;
use std::time::Duration;

use rustc_hash::{FxHashMap, FxHashSet, FxHasher};

use crate::braid::BraidWord;
use crate::clock::Stopwatch;
use crate::length::{masks_separated, support_mask, LengthOracle};

/// Limits for the conjugator searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    /// Maximum number of expanded states (backtracking) or descent steps.
    pub max_expansions: usize,
    pub max_time: Duration,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_expansions: 10_000, max_time: Duration::from_secs(300) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFailure {
    /// No move decreases the total length and the tuples are not separated.
    LocalMinimum,
    /// The backtracking frontier ran empty.
    Exhausted,
    ExpansionCap,
    TimeCap,
}

/// One accepted move: the letter prepended to `z'` and the new total length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub letter: i8,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// The separating conjugator, on success.
    pub z_prime: Option<BraidWord>,
    /// The tuples `z'·a·z'^{-1}` and `z'·b·z'^{-1}` as found by the search.
    pub conjugated: Option<(Vec<BraidWord>, Vec<BraidWord>)>,
    pub failure: Option<SearchFailure>,
    /// Descent steps (greedy, variant II) or expanded states (backtracking).
    pub iterations: usize,
    /// Expanded states that were not a child of the state expanded just
    /// before them.
    pub backtrack_pops: usize,
    /// Total length of the input tuples.
    pub initial_total: usize,
    /// Accepted moves along the returned (or last explored) path.
    pub trace: Vec<TraceStep>,
}

/// Memoised length oracle on raw letters.
pub(crate) struct Evaluator<'a> {
    oracle: &'a LengthOracle,
    strands: usize,
    cache: FxHashMap<Vec<i8>, Rc<[i8]>>,
    cache_limit: usize,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(oracle: &'a LengthOracle, strands: usize) -> Self {
        Evaluator { oracle, strands, cache: FxHashMap::default(), cache_limit: 400_000 }
    }

    fn reduce(&mut self, letters: Vec<i8>) -> Rc<[i8]> {
        if let Some(r) = self.cache.get(&letters) {
            return r.clone();
        }
        let reduced: Rc<[i8]> = self.oracle.reduce(self.strands, &letters).into();
        if self.cache.len() >= self.cache_limit {
            self.cache.clear();
        }
        self.cache.insert(letters, reduced.clone());
        reduced
    }

    /// Reduced witness of `g·w·g^{-1}`.
    fn conjugate(&mut self, w: &Rc<[i8]>, g: i8) -> Rc<[i8]> {
        let i = g.unsigned_abs();
        if support_mask(w) & (0b111u64 << (i - 1)) == 0 {
            return w.clone();
        }
        let mut v = Vec::with_capacity(w.len() + 2);
        v.push(g);
        v.extend_from_slice(w);
        v.push(-g);
        self.reduce(v)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SearchState {
    a: Vec<Rc<[i8]>>,
    b: Vec<Rc<[i8]>>,
    total: usize,
    mask_a: u64,
    mask_b: u64,
}

impl SearchState {
    fn new(a: Vec<Rc<[i8]>>, b: Vec<Rc<[i8]>>) -> Self {
        let total = a.iter().chain(&b).map(|w| w.len()).sum();
        let mask_a = a.iter().fold(0, |m, w| m | support_mask(w));
        let mask_b = b.iter().fold(0, |m, w| m | support_mask(w));
        SearchState { a, b, total, mask_a, mask_b }
    }

    fn initial(ev: &mut Evaluator, a: &[BraidWord], b: &[BraidWord]) -> Self {
        let a = a.iter().map(|w| ev.reduce(w.letters().to_vec())).collect();
        let b = b.iter().map(|w| ev.reduce(w.letters().to_vec())).collect();
        SearchState::new(a, b)
    }

    fn separated(&self) -> bool {
        masks_separated(self.mask_a, self.mask_b)
    }

    fn child(&self, ev: &mut Evaluator, g: i8) -> SearchState {
        let a = self.a.iter().map(|w| ev.conjugate(w, g)).collect();
        let b = self.b.iter().map(|w| ev.conjugate(w, g)).collect();
        SearchState::new(a, b)
    }

    fn fingerprint(&self, strands: usize) -> u64 {
        let mut h = FxHasher::default();
        for w in self.a.iter().chain(&self.b) {
            BraidWord::from_raw(strands, w.to_vec()).normal_form().hash(&mut h);
        }
        h.finish()
    }

    fn words(&self, strands: usize) -> (Vec<BraidWord>, Vec<BraidWord>) {
        let conv = |ws: &[Rc<[i8]>]| ws.iter().map(|w| BraidWord::from_raw(strands, w.to_vec())).collect();
        (conv(&self.a), conv(&self.b))
    }
}

/// Candidate moves in tie-break order: smaller index first, `σ_i` before
/// `σ_i^{-1}`.
fn moves(strands: usize) -> impl Iterator<Item = i8> {
    (1..strands as i8).flat_map(|i| [i, -i])
}

/// All children in move order.
fn children(ev: &mut Evaluator, state: &SearchState, strands: usize) -> Vec<(i8, SearchState)> {
    moves(strands).map(|g| (g, state.child(ev, g))).collect()
}

/// The separated child with the smallest total, ties broken by move order.
fn best_separated(kids: &[(i8, SearchState)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, (_, s)) in kids.iter().enumerate() {
        if s.separated() && best.is_none_or(|b| s.total < kids[b].1.total) {
            best = Some(k);
        }
    }
    best
}

/// The child with the smallest total, ties broken by move order.
fn best_child(kids: &[(i8, SearchState)]) -> usize {
    let mut best = 0;
    for (k, (_, s)) in kids.iter().enumerate() {
        if s.total < kids[best].1.total {
            best = k;
        }
    }
    best
}

fn finish(
    strands: usize,
    z: Vec<i8>,
    state: &SearchState,
    iterations: usize,
    backtrack_pops: usize,
    initial_total: usize,
    trace: Vec<TraceStep>,
) -> SearchResult {
    SearchResult {
        z_prime: Some(BraidWord::from_raw(strands, z)),
        conjugated: Some(state.words(strands)),
        failure: None,
        iterations,
        backtrack_pops,
        initial_total,
        trace,
    }
}

fn fail(failure: SearchFailure, iterations: usize, backtrack_pops: usize, initial_total: usize, trace: Vec<TraceStep>) -> SearchResult {
    SearchResult {
        z_prime: None,
        conjugated: None,
        failure: Some(failure),
        iterations,
        backtrack_pops,
        initial_total,
        trace,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Descent {
    /// Stop at the first separated state.
    Greedy,
    /// Descend to a local minimum, then test separation.
    Exhaustive,
}

fn descend(oracle: &LengthOracle, a: &[BraidWord], b: &[BraidWord], caps: SearchCaps, mode: Descent) -> SearchResult {
    let strands = a.iter().chain(b).map(BraidWord::strands).next().unwrap_or(2);
    let clock = Stopwatch::start();
    let mut ev = Evaluator::new(oracle, strands);
    let mut state = SearchState::initial(&mut ev, a, b);
    let initial_total = state.total;
    let mut z: Vec<i8> = Vec::new();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if mode == Descent::Greedy && state.separated() {
            return finish(strands, z, &state, steps, 0, initial_total, trace);
        }
        if steps >= caps.max_expansions {
            return fail(SearchFailure::ExpansionCap, steps, 0, initial_total, trace);
        }
        if clock.elapsed() > caps.max_time {
            return fail(SearchFailure::TimeCap, steps, 0, initial_total, trace);
        }
        let mut kids = children(&mut ev, &state, strands);
        if mode == Descent::Greedy {
            if let Some(k) = best_separated(&kids) {
                let (g, s) = kids.swap_remove(k);
                z.insert(0, g);
                trace.push(TraceStep { letter: g, total: s.total });
                return finish(strands, z, &s, steps + 1, 0, initial_total, trace);
            }
        }
        let k = best_child(&kids);
        if kids[k].1.total >= state.total {
            if mode == Descent::Exhaustive && state.separated() {
                return finish(strands, z, &state, steps, 0, initial_total, trace);
            }
            return fail(SearchFailure::LocalMinimum, steps, 0, initial_total, trace);
        }
        let (g, s) = kids.swap_remove(k);
        z.insert(0, g);
        trace.push(TraceStep { letter: g, total: s.total });
        state = s;
        steps += 1;
    }
}

/// Greedy descent on the total tuple length, stopping as soon as the
/// conjugated tuples are separated. Only strictly decreasing moves are
/// accepted; a state with no such move and no separated child is a failure.
pub fn recover_conjugator_greedy(
    oracle: &LengthOracle,
    a: &[BraidWord],
    b: &[BraidWord],
    caps: SearchCaps,
) -> SearchResult {
    descend(oracle, a, b, caps, Descent::Greedy)
}

/// Like [`recover_conjugator_greedy`], but keeps descending past separated
/// states and tests separation only at the local minimum.
pub fn recover_conjugator_ii(oracle: &LengthOracle, a: &[BraidWord], b: &[BraidWord], caps: SearchCaps) -> SearchResult {
    descend(oracle, a, b, caps, Descent::Exhaustive)
}

struct Node {
    state: SearchState,
    parent: usize,
    letter: i8,
}

const ROOT: usize = usize::MAX;

fn path(nodes: &[Node], mut id: usize) -> (Vec<i8>, Vec<TraceStep>) {
    let mut z = Vec::new();
    let mut trace = Vec::new();
    while id != ROOT && nodes[id].parent != ROOT {
        z.push(nodes[id].letter);
        trace.push(TraceStep { letter: nodes[id].letter, total: nodes[id].state.total });
        id = nodes[id].parent;
    }
    trace.reverse();
    (z, trace)
}

/// Best-first search over conjugated tuples ordered by total length (ties by
/// insertion order). Each expanded state pushes all `2(n-1)` children;
/// states whose tuples have the same normal forms are expanded once.
pub fn recover_conjugator_backtracking(
    oracle: &LengthOracle,
    a: &[BraidWord],
    b: &[BraidWord],
    caps: SearchCaps,
) -> SearchResult {
    backtracking_observed(oracle, a, b, caps, |_, _| {})
}

/// Backtracking search that reports each expanded state together with the
/// smallest total left in the frontier at that moment.
fn backtracking_observed(
    oracle: &LengthOracle,
    a: &[BraidWord],
    b: &[BraidWord],
    caps: SearchCaps,
    mut observe: impl FnMut(&SearchState, Option<usize>),
) -> SearchResult {
    let strands = a.iter().chain(b).map(BraidWord::strands).next().unwrap_or(2);
    let clock = Stopwatch::start();
    let mut ev = Evaluator::new(oracle, strands);
    let root = SearchState::initial(&mut ev, a, b);
    let initial_total = root.total;

    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    // (total, insertion order, parent node, move)
    let mut frontier = BinaryHeap::new();
    frontier.push(Reverse((root.total, 0u64, ROOT, 0i8)));
    let mut root = Some(root);
    let mut seq = 1u64;
    let mut expansions = 0usize;
    let mut backtracks = 0usize;
    let mut last: Option<usize> = None;

    while let Some(Reverse((_, _, parent, letter))) = frontier.pop() {
        let state = match parent {
            ROOT => root.take().expect("root is popped once"),
            p => nodes[p].state.child(&mut ev, letter),
        };
        if !seen.insert(state.fingerprint(strands)) {
            continue;
        }
        if expansions >= caps.max_expansions {
            let trace = last.map(|id| path(&nodes, id).1).unwrap_or_default();
            return fail(SearchFailure::ExpansionCap, expansions, backtracks, initial_total, trace);
        }
        if clock.elapsed() > caps.max_time {
            let trace = last.map(|id| path(&nodes, id).1).unwrap_or_default();
            return fail(SearchFailure::TimeCap, expansions, backtracks, initial_total, trace);
        }
        if parent != ROOT && last != Some(parent) {
            backtracks += 1;
        }
        expansions += 1;
        observe(&state, frontier.peek().map(|Reverse((t, ..))| *t));
        let id = nodes.len();
        nodes.push(Node { state, parent, letter });
        last = Some(id);

        if nodes[id].state.separated() {
            let (z, trace) = path(&nodes, id);
            return finish(strands, z, &nodes[id].state, expansions, backtracks, initial_total, trace);
        }
        let kids = children(&mut ev, &nodes[id].state, strands);
        if let Some(k) = best_separated(&kids) {
            let (g, s) = &kids[k];
            let (mut z, mut trace) = path(&nodes, id);
            z.insert(0, *g);
            trace.push(TraceStep { letter: *g, total: s.total });
            return finish(strands, z, s, expansions, backtracks, initial_total, trace);
        }
        for (g, s) in kids {
            frontier.push(Reverse((s.total, seq, id, g)));
            seq += 1;
        }
    }
    let trace = last.map(|id| path(&nodes, id).1).unwrap_or_default();
    fail(SearchFailure::Exhausted, expansions, backtracks, initial_total, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, letters: &[i8]) -> BraidWord {
        BraidWord::new(n, letters.to_vec()).unwrap()
    }

    fn check_bookkeeping(res: &SearchResult, a: &[BraidWord], b: &[BraidWord]) {
        let z = res.z_prime.as_ref().unwrap();
        let (ca, cb) = res.conjugated.as_ref().unwrap();
        for (orig, got) in a.iter().zip(ca).chain(b.iter().zip(cb)) {
            assert!(orig.conjugate(z).equivalent(got));
        }
    }

    #[test]
    fn separated_input_gives_identity() {
        let oracle = LengthOracle::default();
        let a = [w(6, &[1, 2])];
        let b = [w(6, &[4, 5])];
        for res in [
            recover_conjugator_greedy(&oracle, &a, &b, SearchCaps::default()),
            recover_conjugator_ii(&oracle, &a, &b, SearchCaps::default()),
            recover_conjugator_backtracking(&oracle, &a, &b, SearchCaps::default()),
        ] {
            assert!(res.z_prime.as_ref().unwrap().is_empty());
            assert_eq!(res.iterations.min(1), res.iterations);
        }
    }

    #[test]
    fn one_step_greedy() {
        let oracle = LengthOracle::default();
        let a = [w(6, &[3, 2, -3])];
        let b = [w(6, &[3, 4, -3])];
        let res = recover_conjugator_greedy(&oracle, &a, &b, SearchCaps::default());
        assert_eq!(res.z_prime.as_ref().unwrap().letters(), &[-3]);
        assert_eq!(res.initial_total, 6);
        assert_eq!(res.trace, vec![TraceStep { letter: -3, total: 2 }]);
        check_bookkeeping(&res, &a, &b);
    }

    #[test]
    fn variant_ii_descends_past_separation() {
        let oracle = LengthOracle::default();
        let a = [w(6, &[1, 2, -1])];
        let b = [w(6, &[4, 5])];
        let g = recover_conjugator_greedy(&oracle, &a, &b, SearchCaps::default());
        assert!(g.z_prime.unwrap().is_empty());
        let ii = recover_conjugator_ii(&oracle, &a, &b, SearchCaps::default());
        assert_eq!(ii.z_prime.as_ref().unwrap().len(), 1);
        assert_eq!(ii.trace.last().unwrap().total, 3);
        check_bookkeeping(&ii, &a, &b);
    }

    #[test]
    fn minimal_unseparated_input_fails() {
        let oracle = LengthOracle::default();
        let a = [w(4, &[1])];
        let b = [w(4, &[2])];
        let g = recover_conjugator_greedy(&oracle, &a, &b, SearchCaps::default());
        assert_eq!(g.failure, Some(SearchFailure::LocalMinimum));
        let ii = recover_conjugator_ii(&oracle, &a, &b, SearchCaps::default());
        assert_eq!(ii.failure, Some(SearchFailure::LocalMinimum));
    }

    #[test]
    fn backtracking_respects_caps() {
        let oracle = LengthOracle::default();
        // σ_1 and σ_2 are never separated by conjugation
        let a = [w(4, &[1])];
        let b = [w(4, &[2])];
        let caps = SearchCaps { max_expansions: 30, max_time: Duration::from_secs(60) };
        let res = recover_conjugator_backtracking(&oracle, &a, &b, caps);
        assert_eq!(res.failure, Some(SearchFailure::ExpansionCap));
        assert_eq!(res.iterations, 30);
    }

    #[test]
    fn descent_is_strictly_monotone() {
        let oracle = LengthOracle::default();
        let z = w(8, &[4, -3, 5, 2, -6]);
        let a: Vec<_> = [&[1, 2, -1][..], &[2, 2, 1]].iter().map(|l| w(8, l).conjugate(&z)).collect();
        let b: Vec<_> = [&[5, -6, 7][..], &[7, 6]].iter().map(|l| w(8, l).conjugate(&z)).collect();
        let res = recover_conjugator_ii(&oracle, &a, &b, SearchCaps::default());
        let mut prev = res.initial_total;
        for step in &res.trace {
            assert!(step.total < prev);
            prev = step.total;
        }
        if res.z_prime.is_some() {
            check_bookkeeping(&res, &a, &b);
        }
        let bt = recover_conjugator_backtracking(&oracle, &a, &b, SearchCaps::default());
        check_bookkeeping(&bt, &a, &b);
    }

    #[test]
    fn backtracking_is_best_first_and_expands_each_state_once() {
        let oracle = LengthOracle::default();
        let a = [w(5, &[1, 2])];
        let b = [w(5, &[2, 3])];
        let caps = SearchCaps { max_expansions: 200, max_time: Duration::from_secs(60) };
        let mut expanded = Vec::new();
        let res = backtracking_observed(&oracle, &a, &b, caps, |state, frontier_min| {
            if let Some(m) = frontier_min {
                assert!(state.total <= m, "popped {} with {m} waiting", state.total);
            }
            let (sa, sb) = state.words(5);
            let nfs: Vec<_> = sa.iter().chain(&sb).map(BraidWord::normal_form).collect();
            expanded.push(nfs);
        });
        assert_eq!(res.failure, Some(SearchFailure::ExpansionCap));
        assert_eq!(expanded.len(), 200);
        let distinct: std::collections::HashSet<_> = expanded.iter().collect();
        assert_eq!(distinct.len(), expanded.len());
        // no conjugate is separated, so the search must leave every path it starts
        assert!(res.backtrack_pops > 0);
    }
}
