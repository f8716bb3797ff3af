use rustc_hash::FxHashMap;

use crate::braid::{BraidWord, GarsideNormalForm};
use crate::{Error, Result};

/// Exact geodesic length by breadth-first search over the Cayley graph,
/// with states deduplicated by normal form. Only practical for small `n`
/// and short geodesics.
pub fn exact_length_bfs(w: &BraidWord, radius_cap: usize) -> Result<usize> {
    let target = w.normal_form();
    if target.is_identity() {
        return Ok(0);
    }
    let n = w.strands();
    let mut seen: FxHashMap<GarsideNormalForm, ()> = FxHashMap::default();
    seen.insert(GarsideNormalForm::identity(n), ());
    let mut frontier: Vec<Vec<i8>> = vec![Vec::new()];
    for radius in 1..=radius_cap {
        let mut next = Vec::new();
        for word in &frontier {
            for e in generators(n) {
                if word.last() == Some(&-e) {
                    continue;
                }
                let mut ext = word.clone();
                ext.push(e);
                let nf = BraidWord::from_raw(n, ext.clone()).normal_form();
                if seen.contains_key(&nf) {
                    continue;
                }
                if nf == target {
                    return Ok(radius);
                }
                seen.insert(nf, ());
                next.push(ext);
            }
        }
        frontier = next;
    }
    Err(Error::RadiusCap(radius_cap))
}

/// All elements of `B_n` within a given geodesic radius, each with its
/// distance and one geodesic word.
#[derive(Debug, Clone)]
pub struct GeodesicBall {
    strands: usize,
    radius: usize,
    entries: FxHashMap<GarsideNormalForm, (usize, Vec<i8>)>,
}

impl GeodesicBall {
    pub fn new(strands: usize, radius: usize) -> Self {
        let mut entries = FxHashMap::default();
        entries.insert(GarsideNormalForm::identity(strands), (0, Vec::new()));
        let mut frontier: Vec<Vec<i8>> = vec![Vec::new()];
        for r in 1..=radius {
            let mut next = Vec::new();
            for word in &frontier {
                for e in generators(strands) {
                    if word.last() == Some(&-e) {
                        continue;
                    }
                    let mut ext = word.clone();
                    ext.push(e);
                    let nf = BraidWord::from_raw(strands, ext.clone()).normal_form();
                    entries.entry(nf).or_insert_with(|| {
                        next.push(ext.clone());
                        (r, ext)
                    });
                }
            }
            frontier = next;
        }
        GeodesicBall { strands, radius, entries }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact length of `w`, or `None` if it lies outside the ball.
    pub fn distance(&self, w: &BraidWord) -> Option<usize> {
        debug_assert_eq!(w.strands(), self.strands);
        self.entries.get(&w.normal_form()).map(|(d, _)| *d)
    }

    /// Elements at exactly distance `r`, as geodesic words.
    pub fn sphere(&self, r: usize) -> Vec<BraidWord> {
        let mut out: Vec<BraidWord> = self
            .entries
            .values()
            .filter(|(d, _)| *d == r)
            .map(|(_, w)| BraidWord::from_raw(self.strands, w.clone()))
            .collect();
        out.sort_by(|a, b| a.letters().cmp(b.letters()));
        out
    }
}

fn generators(n: usize) -> impl Iterator<Item = i8> {
    (1..n as i8).flat_map(|i| [i, -i])
}
