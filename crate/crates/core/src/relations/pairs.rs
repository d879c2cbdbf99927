use std::fmt::Write;

use crate::model::{EpistemicModel, StateSet};

/// A set of ordered state pairs over one model, stored as successor sets.
///
/// For a refinement, `(x, y)` means `M_y` refines `M_x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StatePairRelation {
    succ: Vec<StateSet>,
}

impl StatePairRelation {
    pub fn empty(n: usize) -> Self {
        StatePairRelation {
            succ: vec![StateSet::empty(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        StatePairRelation {
            succ: (0..n).map(|i| StateSet::singleton(n, i)).collect(),
        }
    }

    pub fn from_successors(succ: Vec<StateSet>) -> Self {
        let n = succ.len();
        assert!(succ.iter().all(|s| s.universe() == n));
        StatePairRelation { succ }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    /// Number of states of the underlying model.
    pub fn universe(&self) -> usize {
        self.succ.len()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.succ[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.succ[x].insert(y);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.succ[x].remove(y);
    }

    /// `{y | (x, y) ∈ R}`
    pub fn successors(&self, x: usize) -> &StateSet {
        &self.succ[x]
    }

    /// `{x | (x, y) ∈ R}`
    pub fn predecessors(&self, y: usize) -> StateSet {
        let n = self.universe();
        StateSet::from_indices(n, (0..n).filter(|&x| self.contains(x, y)))
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(StateSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(StateSet::is_empty)
    }

    /// Pairs in lexicographic (state-order) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |y| (x, y)))
    }

    pub fn is_subset(&self, other: &StatePairRelation) -> bool {
        self.succ.iter().zip(&other.succ).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.universe()).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs()
            .all(|(x, y)| self.succ[y].is_subset(&self.succ[x]))
    }

    /// One `s -> t` line per pair, in state order.
    pub fn dump(&self, m: &EpistemicModel) -> String {
        let mut out = String::new();
        for (x, y) in self.pairs() {
            let _ = writeln!(out, "{} -> {}", m.state_name(x), m.state_name(y));
        }
        out
    }

    /// Pairs as state names, in state order.
    pub fn named_pairs(&self, m: &EpistemicModel) -> Vec<(String, String)> {
        self.pairs()
            .map(|(x, y)| (m.state_name(x).to_string(), m.state_name(y).to_string()))
            .collect()
    }
}
