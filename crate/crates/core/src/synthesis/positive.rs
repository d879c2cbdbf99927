use std::collections::HashMap;

use super::{check_target, simplify, verify, SynthesisResult};
use crate::error::{Error, Result};
use crate::model::{EpistemicModel, StateSet};
use crate::relations::{closure_violation_in, refinement_on, MaxRefinement, RemovalReason};
use crate::syntax::Formula;

/// Stop growing the enumeration table past this many distinct extensions.
const TABLE_CAP: usize = 2048;

/// Positive formulas enumerated bottom-up, one (small) formula per distinct
/// extension, in order of discovery.
struct Table {
    entries: Vec<(StateSet, Formula, usize)>,
    seen: HashMap<StateSet, usize>,
}

impl Table {
    fn build(m: &EpistemicModel) -> Self {
        let mut table = Table {
            entries: Vec::new(),
            seen: HashMap::new(),
        };
        let size_ceiling = 4 + 2 * m.len();
        for (p, name) in m.atoms().iter().enumerate() {
            let ext = m.valuation(p).clone();
            table.add(ext.complement(), Formula::not(Formula::atom(name.clone())));
            table.add(ext, Formula::atom(name.clone()));
        }
        let mut frontier_start = 0;
        while frontier_start < table.entries.len() && table.entries.len() < TABLE_CAP {
            let frontier_end = table.entries.len();
            for i in frontier_start..frontier_end {
                let (ext, f, size) = table.entries[i].clone();
                if size < size_ceiling {
                    for (a, agent) in m.agents().iter().enumerate() {
                        let mut k = m.empty_set();
                        for class in m.partition(a) {
                            if class.is_subset(&ext) {
                                k.union_with(class);
                            }
                        }
                        table.add(k, Formula::know(agent.clone(), f.clone()));
                    }
                }
                for j in 0..frontier_end {
                    let (ext2, g, size2) = table.entries[j].clone();
                    if size + size2 + 1 > size_ceiling {
                        continue;
                    }
                    let (l, r) = if j < i { (g.clone(), f.clone()) } else { (f.clone(), g.clone()) };
                    table.add(ext.intersection(&ext2), Formula::and(l.clone(), r.clone()));
                    table.add(ext.union(&ext2), Formula::or(l, r));
                    if table.entries.len() >= TABLE_CAP {
                        return table;
                    }
                }
            }
            frontier_start = frontier_end;
        }
        table
    }

    fn add(&mut self, ext: StateSet, f: Formula) {
        if !self.seen.contains_key(&ext) {
            self.seen.insert(ext.clone(), self.entries.len());
            let size = f.size();
            self.entries.push((ext, f, size));
        }
    }

    fn exact(&self, t: &StateSet) -> Option<&Formula> {
        self.seen.get(t).map(|&i| &self.entries[i].1)
    }

    /// The entry true at `s` excluding the most states of `avoid`; ties go
    /// to the smaller formula.
    fn best_excluding(&self, s: usize, avoid: &StateSet) -> Option<&(StateSet, Formula, usize)> {
        self.entries
            .iter()
            .filter(|(e, _, _)| e.contains(s))
            .map(|entry| (avoid.difference(&entry.0).len(), entry))
            .filter(|(gain, _)| *gain > 0)
            .max_by(|(g1, e1), (g2, e2)| g1.cmp(g2).then(e2.2.cmp(&e1.2)))
            .map(|(_, e)| e)
    }
}

/// Separators read off the pruning trace of the maximal refinement: an atom
/// mismatch gives a literal; a back failure via `y' ∼_a y` gives
/// `K_a (⋁_{x' ∼_a x} sep(x', y'))`.
struct TraceSeparators<'a> {
    m: &'a EpistemicModel,
    trace: &'a MaxRefinement,
    memo: HashMap<(usize, usize), Formula>,
}

impl TraceSeparators<'_> {
    fn sep(&mut self, x: usize, y: usize) -> Formula {
        if let Some(f) = self.memo.get(&(x, y)) {
            return f.clone();
        }
        let f = match self.trace.reason(x, y) {
            Some(RemovalReason::Atom(p)) => {
                let atom = Formula::atom(self.m.atoms()[p].clone());
                if self.m.holds(p, x) {
                    atom
                } else {
                    Formula::not(atom)
                }
            }
            Some(RemovalReason::Back { agent, witness }) => {
                let class = self.m.class(agent, x).clone();
                let parts: Vec<Formula> = class.iter().map(|x2| self.sep(x2, witness)).collect();
                Formula::know(
                    self.m.agents()[agent].clone(),
                    simplify(&Formula::disjunction(parts)),
                )
            }
            None => panic!("no separator for a pair of the maximal refinement"),
        };
        self.memo.insert((x, y), f.clone());
        f
    }
}

fn named_pair(m: &EpistemicModel, x: usize, y: usize) -> Error {
    Error::NotClosed(m.state_name(x).to_string(), m.state_name(y).to_string())
}

/// A positive formula true at `x` and false at `y`. Exists iff `M_y` does
/// not refine `M_x`.
pub fn positive_separator(m: &EpistemicModel, x: usize, y: usize) -> Result<Formula> {
    let trace = refinement_on(m, &m.full_set());
    if trace.relation.contains(x, y) {
        return Err(Error::InvalidArgument(format!(
            "{} refines {}; no positive formula separates them",
            m.state_name(y),
            m.state_name(x)
        )));
    }
    let table = Table::build(m);
    let avoid = StateSet::singleton(m.len(), y);
    if let Some((_, f, _)) = table.best_excluding(x, &avoid) {
        return Ok(f.clone());
    }
    let mut seps = TraceSeparators {
        m,
        trace: &trace,
        memo: HashMap::new(),
    };
    Ok(seps.sep(x, y))
}

/// A positive formula whose extension is exactly `t`. `t` must be nonempty
/// and closed under refinements.
pub fn positive_defining_formula(m: &EpistemicModel, t: &StateSet) -> Result<SynthesisResult> {
    check_target(m, t)?;
    let trace = refinement_on(m, &m.full_set());
    if let Some((x, y)) = closure_violation_in(&trace.relation, t) {
        return Err(named_pair(m, x, y));
    }
    if t.is_full() {
        return verify(m, Formula::Top, t);
    }
    let table = Table::build(m);
    if let Some(f) = table.exact(t) {
        return verify(m, simplify(f), t);
    }

    // ⋁_{s ∈ T} ⋀_{u ∉ T} sep(s, u), choosing conjuncts greedily and
    // skipping states already covered by earlier disjuncts.
    let mut seps = TraceSeparators {
        m,
        trace: &trace,
        memo: HashMap::new(),
    };
    let outside = t.complement();
    let mut covered = m.empty_set();
    let mut disjuncts = Vec::new();
    for s in t {
        if covered.contains(s) {
            continue;
        }
        let mut uncovered = outside.clone();
        let mut ext = m.full_set();
        let mut conjuncts = Vec::new();
        while let Some(u) = uncovered.first() {
            let (e, f) = match table.best_excluding(s, &uncovered) {
                Some((e, f, _)) => (e.clone(), f.clone()),
                None => {
                    let f = seps.sep(s, u);
                    (m.extension(&f)?, f)
                }
            };
            uncovered.intersect_with(&e);
            ext.intersect_with(&e);
            conjuncts.push(f);
        }
        covered.union_with(&ext);
        disjuncts.push(Formula::conjunction(conjuncts));
    }
    verify(m, simplify(&Formula::disjunction(disjuncts)), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::compose9;
    use crate::relations::{is_refinement_closed, max_refinement};

    #[test]
    fn full_domain_is_true() {
        let m = compose9().model;
        let r = positive_defining_formula(&m, &m.full_set()).unwrap();
        assert_eq!(r.formula, Formula::Top);
        assert!(r.verified);
    }

    #[test]
    fn announcement_of_k_a_p() {
        let m = compose9().model;
        let t = m.state_set(&["s", "t", "s'", "t'", "u'", "v'"]).unwrap();
        let r = positive_defining_formula(&m, &t).unwrap();
        assert!(r.formula.is_positive());
        assert_eq!(m.extension(&r.formula).unwrap(), t);
    }

    #[test]
    fn non_closed_rejected_with_pair() {
        let m = compose9().model;
        let t = m.state_set(&["s"]).unwrap();
        let err = positive_defining_formula(&m, &t).unwrap_err();
        assert_eq!(err, Error::NotClosed("s".into(), "u'".into()));
    }

    #[test]
    fn every_closed_set_of_compose9() {
        let m = compose9().model;
        for mask in 1u64..1 << m.len() {
            let t = StateSet::from_mask(m.len(), mask);
            if is_refinement_closed(&m, &t) {
                let r = positive_defining_formula(&m, &t).unwrap();
                assert!(r.formula.is_positive(), "{}", r.formula);
            }
        }
    }

    #[test]
    fn trace_separators_separate() {
        let m = compose9().model;
        let trace = refinement_on(&m, &m.full_set());
        let r = max_refinement(&m);
        let mut seps = TraceSeparators {
            m: &m,
            trace: &trace,
            memo: HashMap::new(),
        };
        for x in 0..m.len() {
            for y in 0..m.len() {
                if !r.contains(x, y) {
                    let f = seps.sep(x, y);
                    assert!(f.is_positive());
                    let ext = m.extension(&f).unwrap();
                    assert!(ext.contains(x) && !ext.contains(y), "{f}");
                    assert_eq!(positive_separator(&m, x, y).map(|g| {
                        let e = m.extension(&g).unwrap();
                        e.contains(x) && !e.contains(y)
                    }), Ok(true));
                }
            }
        }
    }
}
