//! Formula synthesis: formulas whose extension is a given set of states.

mod positive;
mod simplify;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{EpistemicModel, StateSet};
use crate::relations::{bisimulation_classes, quotient};
use crate::syntax::{stack_lba, Formula};

pub use positive::{positive_defining_formula, positive_separator};
pub use simplify::simplify;

/// A synthesized formula and the set it was built for. `verified` records
/// that the extension was recomputed and matched; results are only returned
/// when it did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    pub formula: Formula,
    pub target: StateSet,
    pub verified: bool,
}

pub(crate) fn verify(m: &EpistemicModel, formula: Formula, target: &StateSet) -> Result<SynthesisResult> {
    let ext = m.extension(&formula)?;
    if &ext != target {
        return Err(Error::Synthesis(format!(
            "formula {formula} defines {:?}, expected {:?}",
            m.names(&ext),
            m.names(target)
        )));
    }
    Ok(SynthesisResult {
        formula,
        target: target.clone(),
        verified: true,
    })
}

fn check_target(m: &EpistemicModel, t: &StateSet) -> Result<()> {
    m.check_set(t)?;
    if t.is_empty() {
        return Err(Error::InvalidArgument("target set is empty".into()));
    }
    Ok(())
}

/// Conjunction of literals over `atoms` (in the model's declaration order)
/// describing the valuation of `s`. The empty set gives `true`.
pub fn char_valuation<S: AsRef<str>>(m: &EpistemicModel, s: usize, atoms: &[S]) -> Result<Formula> {
    let wanted: BTreeSet<&str> = atoms.iter().map(AsRef::as_ref).collect();
    for p in &wanted {
        if m.atom_index(p).is_none() {
            return Err(Error::UndeclaredAtom(p.to_string()));
        }
    }
    let literals = m
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, p)| wanted.contains(p.as_str()))
        .map(|(i, p)| {
            let atom = Formula::atom(p.clone());
            if m.holds(i, s) {
                atom
            } else {
                Formula::not(atom)
            }
        });
    Ok(Formula::conjunction(literals))
}

/// `δ_n = L_ba^n δ0 & ~L_ba^(n-1) δ0`, the formula singling out the state at
/// distance `n` from an edge distinguished by `δ0` on a one-edged chain.
pub fn chain_delta(n: usize, delta0: &Formula) -> Result<Formula> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain_delta needs n >= 1".into()));
    }
    Ok(Formula::and(
        stack_lba(n, delta0.clone()),
        Formula::not(stack_lba(n - 1, delta0.clone())),
    ))
}

/// An epistemic formula with extension exactly `t`, on a bisimulation
/// minimal model, by iterated class splitting.
pub fn distinguishing_formula(m: &EpistemicModel, t: &StateSet) -> Result<SynthesisResult> {
    check_target(m, t)?;
    let classes = bisimulation_classes(m, &m.full_set());
    if let Some(c) = classes.iter().find(|c| c.len() > 1) {
        let mut it = c.iter();
        let (x, y) = (it.next().expect("len > 1"), it.next().expect("len > 1"));
        return Err(Error::NotMinimal(
            m.state_name(x).to_string(),
            m.state_name(y).to_string(),
        ));
    }
    if t.is_full() {
        return verify(m, Formula::Top, t);
    }

    // Blocks of the current partition and a formula for each.
    let n = m.len();
    let all_atoms: Vec<&str> = m.atoms().iter().map(String::as_str).collect();
    let mut blocks: Vec<(StateSet, Formula)> = Vec::new();
    for s in 0..n {
        if let Some(b) = blocks.iter_mut().find(|(b, _)| {
            let r = b.first().expect("nonempty");
            (0..all_atoms.len()).all(|p| m.holds(p, r) == m.holds(p, s))
        }) {
            b.0.insert(s);
        } else {
            blocks.push((StateSet::singleton(n, s), char_valuation(m, s, &all_atoms)?));
        }
    }

    loop {
        let union_of_blocks = blocks
            .iter()
            .all(|(b, _)| b.is_subset(t) || !b.intersects(t));
        if union_of_blocks {
            let parts = blocks
                .iter()
                .filter(|(b, _)| b.is_subset(t))
                .map(|(_, f)| f.clone());
            return verify(m, simplify(&Formula::disjunction(parts)), t);
        }
        blocks = split(m, &blocks);
    }
}

/// One splitting round: states of a block stay together iff for every agent
/// they see the same blocks. Each piece of a split block gets the block's
/// formula conjoined with `L a δ_B` / `~L a δ_B` for the (agent, block) pairs
/// on which the pieces differ.
fn split(m: &EpistemicModel, blocks: &[(StateSet, Formula)]) -> Vec<(StateSet, Formula)> {
    let agents = m.agents().len();
    let sees = |s: usize| -> Vec<Vec<bool>> {
        (0..agents)
            .map(|a| blocks.iter().map(|(b, _)| m.class(a, s).intersects(b)).collect())
            .collect()
    };
    let mut out = Vec::new();
    for (block, formula) in blocks {
        let mut pieces: Vec<(Vec<Vec<bool>>, StateSet)> = Vec::new();
        for s in block {
            let sig = sees(s);
            match pieces.iter_mut().find(|(g, _)| *g == sig) {
                Some((_, set)) => set.insert(s),
                None => pieces.push((sig, StateSet::singleton(m.len(), s))),
            }
        }
        if pieces.len() == 1 {
            out.push((block.clone(), formula.clone()));
            continue;
        }
        for (sig, set) in &pieces {
            let mut conj = vec![formula.clone()];
            for (a, agent) in m.agents().iter().enumerate() {
                for (bi, (_, bf)) in blocks.iter().enumerate() {
                    let differs = pieces.iter().any(|(g, _)| g[a][bi] != sig[a][bi]);
                    if differs {
                        let l = Formula::poss(agent.clone(), bf.clone());
                        conj.push(if sig[a][bi] { l } else { Formula::not(l) });
                    }
                }
            }
            out.push((set.clone(), Formula::conjunction(conj)));
        }
    }
    out
}

/// An epistemic formula with extension `t`, for any union of
/// maximal-bisimulation classes (the model need not be minimal).
pub fn epistemic_defining_formula(m: &EpistemicModel, t: &StateSet) -> Result<SynthesisResult> {
    check_target(m, t)?;
    let q = quotient(m);
    let image = StateSet::from_indices(q.model.len(), t.iter().map(|s| q.map[s]));
    if let Some(s) = (0..m.len()).find(|&s| image.contains(q.map[s]) && !t.contains(s)) {
        let inside = t
            .iter()
            .find(|&x| q.map[x] == q.map[s])
            .expect("image member has a preimage in t");
        return Err(Error::InvalidArgument(format!(
            "set is not a union of bisimulation classes: it contains {} but not the bisimilar {}",
            m.state_name(inside),
            m.state_name(s)
        )));
    }
    let on_quotient = distinguishing_formula(&q.model, &image)?;
    verify(m, on_quotient.formula, t)
}
