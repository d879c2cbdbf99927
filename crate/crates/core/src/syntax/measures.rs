use std::collections::BTreeSet;

use super::Formula;

impl Formula {
    /// Literal membership in the positive grammar `p | ~p | φ & ψ | φ | ψ | K a φ`.
    ///
    /// Purely syntactic: `~~p` and `p -> q` are rejected. The constants count
    /// as positive (`true` abbreviates `p | ~p`).
    pub fn is_positive(&self) -> bool {
        use Formula::*;
        match self {
            Top | Bottom | Atom(_) => true,
            Not(f) => matches!(**f, Atom(_)),
            And(l, r) | Or(l, r) => l.is_positive() && r.is_positive(),
            Know(_, f) => f.is_positive(),
            _ => false,
        }
    }

    /// Epistemic depth: stacked `K`/`L` operators, where an announcement adds
    /// the depth of the announced formula and quantifiers count as nothing.
    pub fn depth(&self) -> usize {
        use Formula::*;
        match self {
            Top | Bottom | Atom(_) => 0,
            Not(f) | BoxApal(f) | DiaApal(f) | BoxPos(f) | DiaPos(f) => f.depth(),
            And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r) => l.depth().max(r.depth()),
            Know(_, f) | Poss(_, f) => f.depth() + 1,
            Announce(l, r) | AnnounceDual(l, r) => l.depth() + r.depth(),
        }
    }

    /// Propositional variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Negation normal form over `p | ~p | & | | | K | L | [.] | <.> | box+ |
    /// dia+ | box | dia`. Implications and biconditionals are expanded.
    pub fn nnf(&self) -> Formula {
        nnf(self, false)
    }
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match (f, negate) {
        (Top, false) | (Bottom, true) => Top,
        (Top, true) | (Bottom, false) => Bottom,
        (Atom(_), false) => f.clone(),
        (Atom(_), true) => Formula::not(f.clone()),
        (Not(g), _) => nnf(g, !negate),
        (And(l, r), false) => Formula::and(nnf(l, false), nnf(r, false)),
        (And(l, r), true) => Formula::or(nnf(l, true), nnf(r, true)),
        (Or(l, r), false) => Formula::or(nnf(l, false), nnf(r, false)),
        (Or(l, r), true) => Formula::and(nnf(l, true), nnf(r, true)),
        (Implies(l, r), false) => Formula::or(nnf(l, true), nnf(r, false)),
        (Implies(l, r), true) => Formula::and(nnf(l, false), nnf(r, true)),
        (Iff(l, r), false) => Formula::or(
            Formula::and(nnf(l, false), nnf(r, false)),
            Formula::and(nnf(l, true), nnf(r, true)),
        ),
        (Iff(l, r), true) => Formula::or(
            Formula::and(nnf(l, false), nnf(r, true)),
            Formula::and(nnf(l, true), nnf(r, false)),
        ),
        (Know(a, g), false) => Formula::know(a.clone(), nnf(g, false)),
        (Know(a, g), true) => Formula::poss(a.clone(), nnf(g, true)),
        (Poss(a, g), false) => Formula::poss(a.clone(), nnf(g, false)),
        (Poss(a, g), true) => Formula::know(a.clone(), nnf(g, true)),
        // The announced formula keeps its polarity: it is a precondition, not
        // a subformula under the negation.
        (Announce(a, g), false) => Formula::announce(nnf(a, false), nnf(g, false)),
        (Announce(a, g), true) => Formula::announce_dual(nnf(a, false), nnf(g, true)),
        (AnnounceDual(a, g), false) => Formula::announce_dual(nnf(a, false), nnf(g, false)),
        (AnnounceDual(a, g), true) => Formula::announce(nnf(a, false), nnf(g, true)),
        (BoxApal(g), false) => Formula::box_apal(nnf(g, false)),
        (BoxApal(g), true) => Formula::dia_apal(nnf(g, true)),
        (DiaApal(g), false) => Formula::dia_apal(nnf(g, false)),
        (DiaApal(g), true) => Formula::box_apal(nnf(g, true)),
        (BoxPos(g), false) => Formula::box_pos(nnf(g, false)),
        (BoxPos(g), true) => Formula::dia_pos(nnf(g, true)),
        (DiaPos(g), false) => Formula::dia_pos(nnf(g, false)),
        (DiaPos(g), true) => Formula::box_pos(nnf(g, true)),
    }
}

fn stack(n: usize, base: Formula, innermost: &str, other: &str, know: bool) -> Formula {
    (1..=n).fold(base, |acc, k| {
        let agent = if k % 2 == 1 { innermost } else { other };
        if know {
            Formula::know(agent, acc)
        } else {
            Formula::poss(agent, acc)
        }
    })
}

/// `n` alternating `L_a`/`L_b` operators whose innermost one is `L a`.
/// `stack_lba(0, φ) = φ`, `stack_lba(2, p) = L b L a p`.
pub fn stack_lba(n: usize, base: Formula) -> Formula {
    stack(n, base, "a", "b", false)
}

/// `n` alternating operators whose innermost one is `L b`.
pub fn stack_lab(n: usize, base: Formula) -> Formula {
    stack(n, base, "b", "a", false)
}

/// Knowledge counterpart of [`stack_lba`]: innermost operator `K a`.
pub fn stack_kba(n: usize, base: Formula) -> Formula {
    stack(n, base, "a", "b", true)
}

/// Knowledge counterpart of [`stack_lab`]: innermost operator `K b`.
pub fn stack_kab(n: usize, base: Formula) -> Formula {
    stack(n, base, "b", "a", true)
}
