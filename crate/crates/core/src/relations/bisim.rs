use std::collections::HashMap;

use super::StatePairRelation;
use crate::model::{EpistemicModel, StateSet};

/// Coarsest stable partition of the states in `alive` (classes and
/// valuation intersected with `alive`), as a block id per state; dead states
/// get `usize::MAX`. Block ids are numbered by least member.
pub(crate) fn bisimulation_blocks(m: &EpistemicModel, alive: &StateSet) -> Vec<usize> {
    let n = m.len();
    let mut block = vec![usize::MAX; n];
    let mut count = renumber(alive, &mut block, |s| {
        (0..m.atoms().len()).map(|p| m.holds(p, s) as usize).collect()
    });
    loop {
        let prev = block.clone();
        let new_count = renumber(alive, &mut block, |s| {
            let mut sig = vec![prev[s]];
            for a in 0..m.agents().len() {
                let mut reach: Vec<usize> = m
                    .class(a, s)
                    .intersection(alive)
                    .iter()
                    .map(|t| prev[t])
                    .collect();
                reach.sort_unstable();
                reach.dedup();
                sig.push(usize::MAX);
                sig.extend(reach);
            }
            sig
        });
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

fn renumber(
    alive: &StateSet,
    block: &mut [usize],
    signature: impl Fn(usize) -> Vec<usize>,
) -> usize {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let sigs: Vec<(usize, Vec<usize>)> = alive.iter().map(|s| (s, signature(s))).collect();
    for (s, sig) in sigs {
        let next = ids.len();
        block[s] = *ids.entry(sig).or_insert(next);
    }
    ids.len()
}

/// Max-bisimulation classes of `alive`, ordered by least member.
pub(crate) fn bisimulation_classes(m: &EpistemicModel, alive: &StateSet) -> Vec<StateSet> {
    let block = bisimulation_blocks(m, alive);
    let count = alive.iter().map(|s| block[s] + 1).max().unwrap_or(0);
    let mut classes = vec![StateSet::empty(m.len()); count];
    for s in alive {
        classes[block[s]].insert(s);
    }
    classes
}

pub(crate) fn bisimulation_on(m: &EpistemicModel, alive: &StateSet) -> StatePairRelation {
    let mut r = StatePairRelation::empty(m.len());
    for class in bisimulation_classes(m, alive) {
        for x in &class {
            for y in &class {
                r.insert(x, y);
            }
        }
    }
    r
}

/// The maximal bisimulation on `m`, an equivalence relation.
pub fn max_bisimulation(m: &EpistemicModel) -> StatePairRelation {
    bisimulation_on(m, &m.full_set())
}

/// The bisimulation quotient of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// One state per class, named after its least member.
    pub model: EpistemicModel,
    /// For each original state, its state index in `model`.
    pub map: Vec<usize>,
    /// For each quotient state, the original representative (least member).
    pub representatives: Vec<usize>,
}

pub fn quotient(m: &EpistemicModel) -> Quotient {
    let classes = bisimulation_classes(m, &m.full_set());
    let k = classes.len();
    let mut map = vec![0; m.len()];
    for (ci, c) in classes.iter().enumerate() {
        for s in c {
            map[s] = ci;
        }
    }
    let representatives: Vec<usize> = classes
        .iter()
        .map(|c| c.first().expect("classes are nonempty"))
        .collect();
    let partitions = (0..m.agents().len())
        .map(|a| {
            m.partition(a)
                .iter()
                .map(|c| StateSet::from_indices(k, c.iter().map(|s| map[s])))
                .collect::<Vec<_>>()
        })
        .map(|mut cls: Vec<StateSet>| {
            // Images of distinct classes may coincide; keep them once.
            cls.sort();
            cls.dedup();
            cls
        })
        .collect();
    let valuation = (0..m.atoms().len())
        .map(|p| StateSet::from_indices(k, m.valuation(p).iter().map(|s| map[s])))
        .collect();
    let model = EpistemicModel::assemble(
        m.agents().to_vec(),
        m.atoms().to_vec(),
        representatives
            .iter()
            .map(|&r| m.state_name(r).to_string())
            .collect(),
        partitions,
        valuation,
    );
    Quotient {
        model,
        map,
        representatives,
    }
}

pub fn is_bisimulation_minimal(m: &EpistemicModel) -> bool {
    bisimulation_classes(m, &m.full_set()).len() == m.len()
}
