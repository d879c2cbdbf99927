use super::StatePairRelation;
use crate::model::{EpistemicModel, StateSet};

/// Why a pair is missing from the maximal refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalReason {
    /// The two states disagree on this atom; the pair was never seeded.
    Atom(usize),
    /// Back fails: `witness ∼_agent y` has no `agent`-counterpart at `x`
    /// among the pairs still present when the pair was removed.
    Back { agent: usize, witness: usize },
}

/// The maximal refinement of a (possibly restricted) model together with the
/// record of how the greatest fixed point was reached.
#[derive(Clone, Debug)]
pub struct MaxRefinement {
    pub relation: StatePairRelation,
    /// Applications of the pruning step, including the final one that
    /// changed nothing.
    pub iterations: usize,
    pub alive: StateSet,
    reasons: Vec<Option<RemovalReason>>,
}

impl MaxRefinement {
    /// Why `(x, y)` is not in the relation; `None` if it is (or either
    /// state is outside the model).
    pub fn reason(&self, x: usize, y: usize) -> Option<RemovalReason> {
        self.reasons[x * self.relation.universe() + y]
    }
}

fn atom_mismatch(m: &EpistemicModel, x: usize, y: usize) -> Option<usize> {
    (0..m.atoms().len()).find(|&p| m.holds(p, x) != m.holds(p, y))
}

/// A back-clause failure for `(x, y)` relative to `r`, looking only at
/// states in `alive`.
fn back_failure(
    m: &EpistemicModel,
    alive: &StateSet,
    preds: &[StateSet],
    x: usize,
    y: usize,
) -> Option<RemovalReason> {
    for a in 0..m.agents().len() {
        let cx = m.class(a, x).intersection(alive);
        let cy = m.class(a, y).intersection(alive);
        for y2 in &cy {
            if !preds[y2].intersects(&cx) {
                return Some(RemovalReason::Back { agent: a, witness: y2 });
            }
        }
    }
    None
}

fn predecessor_sets(r: &StatePairRelation) -> Vec<StateSet> {
    let n = r.universe();
    let mut preds = vec![StateSet::empty(n); n];
    for (x, y) in r.pairs() {
        preds[y].insert(x);
    }
    preds
}

/// Greatest fixed point on the submodel `alive`, seeded with all pairs of
/// alive states that agree on every atom. Each round removes, all at once,
/// every pair whose back clause fails against the current relation.
pub(crate) fn refinement_on(m: &EpistemicModel, alive: &StateSet) -> MaxRefinement {
    let n = m.len();
    let mut reasons = vec![None; n * n];
    let mut r = StatePairRelation::empty(n);
    for x in alive {
        for y in alive {
            match atom_mismatch(m, x, y) {
                None => r.insert(x, y),
                Some(p) => reasons[x * n + y] = Some(RemovalReason::Atom(p)),
            }
        }
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let preds = predecessor_sets(&r);
        let removals: Vec<(usize, usize, RemovalReason)> = r
            .pairs()
            .filter_map(|(x, y)| back_failure(m, alive, &preds, x, y).map(|why| (x, y, why)))
            .collect();
        if removals.is_empty() {
            break;
        }
        for (x, y, why) in removals {
            r.remove(x, y);
            reasons[x * n + y] = Some(why);
        }
    }
    MaxRefinement {
        relation: r,
        iterations,
        alive: alive.clone(),
        reasons,
    }
}

/// The maximal refinement on `m`: `(x, y)` is present iff `M_y` refines
/// `M_x`. Reflexive and transitive.
pub fn max_refinement(m: &EpistemicModel) -> StatePairRelation {
    refinement_on(m, &m.full_set()).relation
}

/// [`max_refinement`] with iteration count and removal reasons.
pub fn max_refinement_traced(m: &EpistemicModel) -> MaxRefinement {
    refinement_on(m, &m.full_set())
}

/// One application of the pruning function: the pairs of `r` satisfying
/// the atoms clause and the back clause relative to `r`.
pub fn refinement_step(m: &EpistemicModel, r: &StatePairRelation) -> StatePairRelation {
    let alive = m.full_set();
    let preds = predecessor_sets(r);
    let mut out = StatePairRelation::empty(m.len());
    for (x, y) in r.pairs() {
        if atom_mismatch(m, x, y).is_none() && back_failure(m, &alive, &preds, x, y).is_none() {
            out.insert(x, y);
        }
    }
    out
}

/// Whether `r` is a refinement relation (atoms and back for every pair).
pub fn is_refinement(m: &EpistemicModel, r: &StatePairRelation) -> bool {
    &refinement_step(m, r) == r
}

/// A pair `(x, y)` of the maximal refinement with `x ∈ t` and `y ∉ t`, if any.
pub fn closure_violation(m: &EpistemicModel, t: &StateSet) -> Option<(usize, usize)> {
    closure_violation_in(&max_refinement(m), t)
}

pub(crate) fn closure_violation_in(r: &StatePairRelation, t: &StateSet) -> Option<(usize, usize)> {
    t.iter().find_map(|x| {
        r.successors(x)
            .difference(t)
            .first()
            .map(|y| (x, y))
    })
}

/// Whether `t` is closed under refinements in `m`.
pub fn is_refinement_closed(m: &EpistemicModel, t: &StateSet) -> bool {
    closure_violation(m, t).is_none()
}
