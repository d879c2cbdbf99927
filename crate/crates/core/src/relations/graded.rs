use super::StatePairRelation;
use crate::model::{EpistemicModel, PointedModel, StateSet};

/// The descending family `ℜ^0 ⊇ ℜ^1 ⊇ … ⊇ ℜ^n` of maximal graded
/// bisimulations on one model: `ℜ^0` relates states agreeing on all atoms,
/// `ℜ^{k+1}` keeps the pairs of `ℜ^k` whose forth and back clauses are met
/// by `ℜ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRelationFamily {
    pub levels: Vec<StatePairRelation>,
}

impl GradedRelationFamily {
    pub fn compute(m: &EpistemicModel, n: usize) -> Self {
        let size = m.len();
        let mut level0 = StatePairRelation::empty(size);
        for x in 0..size {
            for y in 0..size {
                if (0..m.atoms().len()).all(|p| m.holds(p, x) == m.holds(p, y)) {
                    level0.insert(x, y);
                }
            }
        }
        let mut levels = vec![level0];
        for _ in 0..n {
            let prev = levels.last().expect("level 0 exists");
            let next = step(m, prev);
            let stable = &next == prev;
            levels.push(next);
            if stable {
                // Every later level is identical; materialise them lazily.
                while levels.len() <= n {
                    levels.push(levels.last().expect("nonempty").clone());
                }
                break;
            }
        }
        GradedRelationFamily { levels }
    }

    pub fn level(&self, k: usize) -> &StatePairRelation {
        &self.levels[k]
    }

    /// Structural check of the defining clauses.
    pub fn is_valid(&self, m: &EpistemicModel) -> bool {
        self.levels.windows(2).all(|w| {
            w[1].is_subset(&w[0])
                && w[1]
                    .pairs()
                    .all(|(x, y)| forth_back(m, &w[0], x, y))
        })
    }
}

fn forth_back(m: &EpistemicModel, prev: &StatePairRelation, x: usize, y: usize) -> bool {
    (0..m.agents().len()).all(|a| {
        let cx = m.class(a, x);
        let cy = m.class(a, y);
        cx.iter().all(|x2| prev.successors(x2).intersects(cy))
            && cy.iter().all(|y2| prev.predecessors(y2).intersects(cx))
    })
}

fn step(m: &EpistemicModel, prev: &StatePairRelation) -> StatePairRelation {
    let mut next = StatePairRelation::empty(m.len());
    for (x, y) in prev.pairs() {
        if forth_back(m, prev, x, y) {
            next.insert(x, y);
        }
    }
    next
}

/// Disjoint union of two models over the union of their signatures. Agents
/// missing from one side are the identity there; missing atoms are false.
/// States of `m1` come first, then those of `m2`.
pub fn disjoint_union(m1: &EpistemicModel, m2: &EpistemicModel) -> EpistemicModel {
    let mut agents = m1.agents().to_vec();
    for a in m2.agents() {
        if !agents.contains(a) {
            agents.push(a.clone());
        }
    }
    let mut atoms = m1.atoms().to_vec();
    for p in m2.atoms() {
        if !atoms.contains(p) {
            atoms.push(p.clone());
        }
    }
    let n1 = m1.len();
    let n = n1 + m2.len();
    let lift = |set: &StateSet, offset: usize| StateSet::from_indices(n, set.iter().map(|s| s + offset));
    let partitions = agents
        .iter()
        .map(|a| {
            let mut classes = Vec::new();
            for (m, offset) in [(m1, 0), (m2, n1)] {
                match m.agent_index(a) {
                    Some(ai) => classes.extend(m.partition(ai).iter().map(|c| lift(c, offset))),
                    None => classes.extend(
                        (0..m.len()).map(|s| StateSet::singleton(n, s + offset)),
                    ),
                }
            }
            classes
        })
        .collect();
    let valuation = atoms
        .iter()
        .map(|p| {
            let mut set = StateSet::empty(n);
            for (m, offset) in [(m1, 0), (m2, n1)] {
                if let Some(pi) = m.atom_index(p) {
                    set.union_with(&lift(m.valuation(pi), offset));
                }
            }
            set
        })
        .collect();
    let states = m1
        .states()
        .iter()
        .map(|s| format!("1_{s}"))
        .chain(m2.states().iter().map(|s| format!("2_{s}")))
        .collect();
    EpistemicModel::assemble(agents, atoms, states, partitions, valuation)
}

/// Whether the two points are `n`-bisimilar.
pub fn n_bisimilar(m1: &PointedModel, m2: &PointedModel, n: usize) -> bool {
    let u = disjoint_union(&m1.model, &m2.model);
    let family = GradedRelationFamily::compute(&u, n);
    family.level(n).contains(m1.point, m1.model.len() + m2.point)
}

/// Whether the two points are bisimilar (via the maximal bisimulation on the
/// disjoint union).
pub fn bisimilar(m1: &PointedModel, m2: &PointedModel) -> bool {
    let u = disjoint_union(&m1.model, &m2.model);
    super::max_bisimulation(&u).contains(m1.point, m1.model.len() + m2.point)
}
