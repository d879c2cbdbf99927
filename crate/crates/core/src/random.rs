//! Seeded random models and formulas for property tests and the validity
//! suite. Everything is driven by a caller-supplied RNG, so a fixed seed
//! gives a fixed corpus.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::model::{EpistemicModel, StateSet};
use crate::syntax::Formula;

/// Names `s0, s1, …`
pub fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// A uniformly labelled random S5 model: each agent's partition comes from
/// assigning every state one of `n` class labels; each atom holds at each
/// state with probability 1/2.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    agents: &[&str],
    atoms: &[&str],
) -> EpistemicModel {
    assert!(states > 0, "random_model needs at least one state");
    let partitions = agents
        .iter()
        .map(|_| {
            let mut classes = vec![StateSet::empty(states); states];
            for s in 0..states {
                classes[rng.random_range(0..states)].insert(s);
            }
            classes
        })
        .collect();
    let valuation = atoms
        .iter()
        .map(|_| StateSet::from_indices(states, (0..states).filter(|_| rng.random_bool(0.5))))
        .collect();
    EpistemicModel::assemble(
        agents.iter().map(|a| a.to_string()).collect(),
        atoms.iter().map(|p| p.to_string()).collect(),
        state_names(states),
        partitions,
        valuation,
    )
}

/// A model bisimilar to `m`, together with the original of each new state.
/// Every state gets one or two copies, the states are shuffled, and an
/// agent's class whose states all have two copies may be split into one class
/// per copy; mapping copies back to originals is then a bounded morphism.
pub fn garbled_copy<R: Rng + ?Sized>(rng: &mut R, m: &EpistemicModel) -> (EpistemicModel, Vec<usize>) {
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for s in 0..m.len() {
        copies.push((s, 0));
        if rng.random_bool(0.5) {
            copies.push((s, 1));
        }
    }
    copies.shuffle(rng);
    let n = copies.len();
    let original: Vec<usize> = copies.iter().map(|&(s, _)| s).collect();
    let doubled = |s: usize| copies.iter().filter(|&&(t, _)| t == s).count() == 2;

    let mut partitions = Vec::new();
    for a in 0..m.agents().len() {
        let mut classes = Vec::new();
        for class in m.partition(a) {
            let members = |copy: Option<usize>| {
                StateSet::from_indices(
                    n,
                    (0..n).filter(|&i| class.contains(copies[i].0) && copy.is_none_or(|c| copies[i].1 == c)),
                )
            };
            if class.iter().all(doubled) && rng.random_bool(0.5) {
                classes.push(members(Some(0)));
                classes.push(members(Some(1)));
            } else {
                classes.push(members(None));
            }
        }
        partitions.push(classes);
    }
    let valuation = (0..m.atoms().len())
        .map(|p| StateSet::from_indices(n, (0..n).filter(|&i| m.holds(p, original[i]))))
        .collect();
    let model = EpistemicModel::assemble(
        m.agents().to_vec(),
        m.atoms().to_vec(),
        state_names(n),
        partitions,
        valuation,
    );
    (model, original)
}

/// Which constructors a random formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaShape {
    /// Maximal operator nesting above the literals.
    pub depth: usize,
    /// Only `p | ~p | & | | | K a` (plus constants).
    pub positive: bool,
    /// Allow `[φ]ψ` and `<φ>ψ`.
    pub announcements: bool,
    /// How many quantifier occurrences the formula may contain.
    pub quantifiers: usize,
    /// Allow `box`/`dia` besides `box+`/`dia+`.
    pub apal: bool,
}

impl FormulaShape {
    pub fn epistemic(depth: usize) -> Self {
        FormulaShape {
            depth,
            positive: false,
            announcements: false,
            quantifiers: 0,
            apal: false,
        }
    }

    pub fn positive(depth: usize) -> Self {
        FormulaShape {
            positive: true,
            ..Self::epistemic(depth)
        }
    }

    pub fn full(depth: usize, quantifiers: usize) -> Self {
        FormulaShape {
            announcements: true,
            quantifiers,
            apal: true,
            ..Self::epistemic(depth)
        }
    }
}

pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[&str],
    agents: &[&str],
    shape: FormulaShape,
) -> Formula {
    let mut budget = shape.quantifiers;
    gen(rng, atoms, agents, &shape, shape.depth, &mut budget)
}

fn literal<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> Formula {
    if atoms.is_empty() || rng.random_ratio(1, 12) {
        return if rng.random_bool(0.5) { Formula::Top } else { Formula::Bottom };
    }
    let p = Formula::atom(*atoms.choose(rng).expect("nonempty"));
    if rng.random_ratio(1, 3) {
        Formula::not(p)
    } else {
        p
    }
}

fn gen<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[&str],
    agents: &[&str],
    shape: &FormulaShape,
    depth: usize,
    budget: &mut usize,
) -> Formula {
    if depth == 0 || rng.random_ratio(1, 4) {
        return literal(rng, atoms);
    }
    #[derive(Clone, Copy)]
    enum Op {
        Not,
        And,
        Or,
        Implies,
        Know,
        Poss,
        Announce,
        AnnounceDual,
        Quant,
    }
    let mut ops = vec![Op::And, Op::Or, Op::Know];
    if !shape.positive {
        ops.extend([Op::Not, Op::Implies, Op::Poss]);
    }
    if shape.announcements && !shape.positive {
        ops.extend([Op::Announce, Op::AnnounceDual]);
    }
    if *budget > 0 && !shape.positive {
        ops.push(Op::Quant);
    }
    if agents.is_empty() {
        ops.retain(|op| !matches!(op, Op::Know | Op::Poss));
    }
    let d = depth - 1;
    let sub = |rng: &mut R, budget: &mut usize| gen(rng, atoms, agents, shape, d, budget);
    match *ops.choose(rng).expect("nonempty") {
        Op::Not => Formula::not(sub(rng, budget)),
        Op::And => Formula::and(sub(rng, budget), sub(rng, budget)),
        Op::Or => Formula::or(sub(rng, budget), sub(rng, budget)),
        Op::Implies => Formula::implies(sub(rng, budget), sub(rng, budget)),
        Op::Know => Formula::know(*agents.choose(rng).expect("nonempty"), sub(rng, budget)),
        Op::Poss => Formula::poss(*agents.choose(rng).expect("nonempty"), sub(rng, budget)),
        Op::Announce => Formula::announce(sub(rng, budget), sub(rng, budget)),
        Op::AnnounceDual => Formula::announce_dual(sub(rng, budget), sub(rng, budget)),
        Op::Quant => {
            *budget -= 1;
            let body = sub(rng, budget);
            let kinds = if shape.apal { 4 } else { 2 };
            match rng.random_range(0..kinds) {
                0 => Formula::box_pos(body),
                1 => Formula::dia_pos(body),
                2 => Formula::box_apal(body),
                _ => Formula::dia_apal(body),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::bisimilar;
    use crate::model::PointedModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let f = random_formula(&mut rng, &["p", "q"], &["a", "b"], FormulaShape::positive(3));
            assert!(f.is_positive(), "{f}");
            let g = random_formula(&mut rng, &["p", "q"], &["a", "b"], FormulaShape::full(2, 1));
            assert!(g.quantifier_nesting() <= 1 && g.height() <= 3, "{g}");
            let e = random_formula(&mut rng, &["p"], &["a"], FormulaShape::epistemic(2));
            assert!(e.is_epistemic());
        }
    }

    #[test]
    fn garbled_copy_is_bisimilar() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let m = random_model(&mut rng, 4, &["a", "b"], &["p", "q"]);
            let (g, original) = garbled_copy(&mut rng, &m);
            for (i, &s) in original.iter().enumerate() {
                let left = PointedModel { model: m.clone(), point: s };
                let right = PointedModel { model: g.clone(), point: i };
                assert!(bisimilar(&left, &right));
            }
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let m = random_model(&mut rng, 5, &["a", "b"], &["p", "q"]);
            let f = random_formula(&mut rng, &["p", "q"], &["a", "b"], FormulaShape::full(2, 1));
            (m.to_text(), f)
        };
        assert_eq!(draw(), draw());
    }
}
