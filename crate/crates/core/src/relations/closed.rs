use super::{refinement_on, StatePairRelation};
use crate::error::{Error, Result};
use crate::model::{EpistemicModel, StateSet};

/// Default cap on the number of states for subset enumeration.
pub const DEFAULT_STATE_CAP: usize = 22;

/// Hard ceiling imposed by the `u64` mask representation.
pub const MAX_ENUMERABLE_STATES: usize = 63;

/// How to enumerate closed subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Generate only closed sets by propagating closure constraints.
    #[default]
    Dag,
    /// Test every subset of the domain.
    Naive,
}

/// Upward-closure data of a reflexive, transitive relation restricted to a
/// set of live states, in mask form.
#[derive(Clone, Debug)]
pub struct ClosureSystem {
    n: usize,
    alive: u64,
    cl: Vec<u64>,
    pred: Vec<u64>,
}

pub(crate) fn check_cap(states: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_ENUMERABLE_STATES);
    if states > cap {
        return Err(Error::StateCap { states, cap });
    }
    Ok(())
}

impl ClosureSystem {
    /// `r` must be reflexive and transitive on `alive` and relate only live
    /// states.
    pub fn new(r: &StatePairRelation, alive: &StateSet, cap: usize) -> Result<Self> {
        let n = r.universe();
        if n > MAX_ENUMERABLE_STATES {
            return Err(Error::StateCap {
                states: n,
                cap: cap.min(MAX_ENUMERABLE_STATES),
            });
        }
        check_cap(alive.len(), cap)?;
        let mask = |s: &StateSet| s.to_mask().expect("universe fits a mask");
        let alive_mask = mask(alive);
        let mut cl = vec![0u64; n];
        let mut pred = vec![0u64; n];
        for x in alive {
            cl[x] = mask(r.successors(x)) & alive_mask;
        }
        for x in alive {
            for y in StateSet::from_mask(n, cl[x]).iter() {
                pred[y] |= 1 << x;
            }
        }
        Ok(ClosureSystem {
            n,
            alive: alive_mask,
            cl,
            pred,
        })
    }

    pub fn is_closed(&self, set: u64) -> bool {
        let mut rest = set;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.cl[x] & !set != 0 {
                return false;
            }
        }
        true
    }

    /// Nonempty closed subsets of the live states containing `s`, in
    /// ascending mask order.
    pub fn subsets_containing(&self, s: usize, strategy: Strategy) -> ClosedSubsets<'_> {
        let inner = if self.alive >> s & 1 == 0 {
            Inner::Done
        } else {
            match strategy {
                Strategy::Dag => Inner::Dag {
                    stack: vec![Frame {
                        bit: self.n as isize - 1,
                        incl: self.cl[s],
                        excl: !self.alive,
                    }],
                },
                Strategy::Naive => Inner::Naive {
                    next: Some(0),
                    must: 1 << s,
                },
            }
        };
        ClosedSubsets { sys: self, inner }
    }
}

#[derive(Clone, Copy)]
struct Frame {
    bit: isize,
    incl: u64,
    excl: u64,
}

enum Inner {
    Dag { stack: Vec<Frame> },
    Naive { next: Option<u64>, must: u64 },
    Done,
}

/// Lazy iterator over closed subsets; see [`ClosureSystem::subsets_containing`].
pub struct ClosedSubsets<'a> {
    sys: &'a ClosureSystem,
    inner: Inner,
}

impl ClosedSubsets<'_> {
    /// Next subset as a raw mask.
    pub fn next_mask(&mut self) -> Option<u64> {
        let sys = self.sys;
        match &mut self.inner {
            Inner::Done => None,
            // Decide bits from the most significant down, exploring "out"
            // before "in": leaves then come out in ascending order. For a
            // preorder both choices at an undecided bit stay consistent, so
            // every leaf is a closed set.
            Inner::Dag { stack } => {
                while let Some(f) = stack.pop() {
                    if f.bit < 0 {
                        return Some(f.incl);
                    }
                    let b = f.bit as usize;
                    let below = f.bit - 1;
                    if (f.incl | f.excl) >> b & 1 == 1 {
                        stack.push(Frame { bit: below, ..f });
                    } else {
                        stack.push(Frame {
                            bit: below,
                            incl: f.incl | sys.cl[b],
                            excl: f.excl,
                        });
                        stack.push(Frame {
                            bit: below,
                            incl: f.incl,
                            excl: f.excl | sys.pred[b],
                        });
                    }
                }
                None
            }
            Inner::Naive { next, must } => {
                // Ascending walk over the submasks of `alive`.
                while let Some(cur) = *next {
                    *next = if cur == sys.alive {
                        None
                    } else {
                        Some((cur | !sys.alive).wrapping_add(1) & sys.alive)
                    };
                    if cur & *must != 0 && sys.is_closed(cur) {
                        return Some(cur);
                    }
                }
                None
            }
        }
    }
}

impl Iterator for ClosedSubsets<'_> {
    type Item = StateSet;

    fn next(&mut self) -> Option<StateSet> {
        let n = self.sys.n;
        self.next_mask().map(|m| StateSet::from_mask(n, m))
    }
}

/// Refinement-closure data for the whole of `m`.
pub fn refinement_closure(m: &EpistemicModel, cap: usize) -> Result<ClosureSystem> {
    check_cap(m.len(), cap)?;
    let alive = m.full_set();
    ClosureSystem::new(&refinement_on(m, &alive).relation, &alive, cap)
}

/// All nonempty refinement-closed subsets of `m` containing state `s`, in
/// ascending bitmask order. Fails when `m` exceeds `cap` states.
pub fn closed_subsets_containing(
    m: &EpistemicModel,
    s: usize,
    cap: usize,
    strategy: Strategy,
) -> Result<Vec<StateSet>> {
    let sys = refinement_closure(m, cap)?;
    Ok(sys.subsets_containing(s, strategy).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelDescription;
    use crate::relations::is_refinement_closed;

    fn model(text: &str) -> EpistemicModel {
        ModelDescription::from_text(text).unwrap().build().unwrap()
    }

    #[test]
    fn singleton_model() {
        let m = model("agents: a\natoms: p\nstates: s\nrel a: {s}");
        let subs = closed_subsets_containing(&m, 0, DEFAULT_STATE_CAP, Strategy::Dag).unwrap();
        assert_eq!(subs, [m.full_set()]);
    }

    #[test]
    fn edge_model() {
        let m = model("agents: a\natoms: p\nstates: s t\nval s: p\nrel a: {s t}");
        for strategy in [Strategy::Dag, Strategy::Naive] {
            let subs = closed_subsets_containing(&m, 0, DEFAULT_STATE_CAP, strategy).unwrap();
            let names: Vec<Vec<String>> = subs.iter().map(|t| m.names(t)).collect();
            assert_eq!(names, [vec!["s"], vec!["s", "t"]]);
        }
    }

    #[test]
    fn unrelated_states_give_all_subsets() {
        // Singleton classes and distinct valuations: nothing refines anything else.
        let m = model(
            "agents: a\natoms: p q\nstates: w x y z\nval x: p\nval y: q\nval z: p q\nrel a: {w} {x} {y} {z}",
        );
        let subs = closed_subsets_containing(&m, 2, DEFAULT_STATE_CAP, Strategy::Dag).unwrap();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let m = model("agents: a\natoms: p\nstates: s t u\nrel a: {s t u}");
        let err = closed_subsets_containing(&m, 0, 2, Strategy::Dag).unwrap_err();
        assert_eq!(err, Error::StateCap { states: 3, cap: 2 });
        assert!(err.to_string().contains("cap of 2"));
    }

    #[test]
    fn strategies_agree_with_filter() {
        let m = crate::model::compose9().model;
        let dag = closed_subsets_containing(&m, 0, DEFAULT_STATE_CAP, Strategy::Dag).unwrap();
        let naive = closed_subsets_containing(&m, 0, DEFAULT_STATE_CAP, Strategy::Naive).unwrap();
        assert_eq!(dag, naive);
        let brute: Vec<StateSet> = (1u64..1 << m.len())
            .map(|mask| StateSet::from_mask(m.len(), mask))
            .filter(|t| t.contains(0) && is_refinement_closed(&m, t))
            .collect();
        assert_eq!(dag, brute);
    }
}
