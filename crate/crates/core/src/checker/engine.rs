use std::collections::HashMap;
use std::rc::Rc;

use super::{CheckConfig, Stats};
use crate::model::{EpistemicModel, StateSet};
use crate::relations::{
    bisimulation_on, refinement_on, ClosedSubsets, ClosureSystem, Strategy,
};
use crate::syntax::Formula;

pub(crate) type NodeId = u32;

/// A subformula with children replaced by arena ids; agents and atoms are
/// resolved to model indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Top,
    Bottom,
    Atom(usize),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Know(usize, NodeId),
    Poss(usize, NodeId),
    Announce(NodeId, NodeId),
    AnnounceDual(NodeId, NodeId),
    BoxApal(NodeId),
    DiaApal(NodeId),
    BoxPos(NodeId),
    DiaPos(NodeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Quant {
    Pos,
    Apal,
}

/// Evaluates formulas on submodels of one root model. A submodel is the
/// set of surviving root states ("alive"); restriction never renumbers.
pub(crate) struct Engine<'m> {
    pub root: &'m EpistemicModel,
    pub cfg: CheckConfig,
    pub stats: Stats,
    nodes: Vec<Node>,
    interned: HashMap<Node, NodeId>,
    sat_memo: HashMap<(StateSet, u32, NodeId), bool>,
    ext_memo: HashMap<(StateSet, NodeId), StateSet>,
    closures: HashMap<(StateSet, bool), Rc<ClosureSystem>>,
}

impl<'m> Engine<'m> {
    pub fn new(root: &'m EpistemicModel, cfg: CheckConfig) -> Self {
        Engine {
            root,
            cfg,
            stats: Stats::default(),
            nodes: Vec::new(),
            interned: HashMap::new(),
            sat_memo: HashMap::new(),
            ext_memo: HashMap::new(),
            closures: HashMap::new(),
        }
    }

    /// Intern `f`; the caller has already checked its signature.
    pub fn intern(&mut self, f: &Formula) -> NodeId {
        use Formula as F;
        let node = match f {
            F::Top => Node::Top,
            F::Bottom => Node::Bottom,
            F::Atom(p) => Node::Atom(self.root.atom_index(p).expect("declared atom")),
            F::Not(g) => Node::Not(self.intern(g)),
            F::And(l, r) => Node::And(self.intern(l), self.intern(r)),
            F::Or(l, r) => Node::Or(self.intern(l), self.intern(r)),
            F::Implies(l, r) => Node::Implies(self.intern(l), self.intern(r)),
            F::Iff(l, r) => Node::Iff(self.intern(l), self.intern(r)),
            F::Know(a, g) => Node::Know(self.agent(a), self.intern(g)),
            F::Poss(a, g) => Node::Poss(self.agent(a), self.intern(g)),
            F::Announce(l, r) => Node::Announce(self.intern(l), self.intern(r)),
            F::AnnounceDual(l, r) => Node::AnnounceDual(self.intern(l), self.intern(r)),
            F::BoxApal(g) => Node::BoxApal(self.intern(g)),
            F::DiaApal(g) => Node::DiaApal(self.intern(g)),
            F::BoxPos(g) => Node::BoxPos(self.intern(g)),
            F::DiaPos(g) => Node::DiaPos(self.intern(g)),
        };
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.interned.insert(node, id);
        id
    }

    fn agent(&self, a: &str) -> usize {
        self.root.agent_index(a).expect("declared agent")
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    /// `(M|alive)_s ⊨ id`
    pub fn sat(&mut self, alive: &StateSet, s: usize, id: NodeId) -> bool {
        self.stats.nodes_visited += 1;
        let key = (alive.clone(), s as u32, id);
        if self.cfg.memo_enabled {
            if let Some(&v) = self.sat_memo.get(&key) {
                self.stats.cache_hits += 1;
                return v;
            }
        }
        let v = self.sat_uncached(alive, s, id);
        if self.cfg.memo_enabled {
            self.sat_memo.insert(key, v);
        }
        v
    }

    fn sat_uncached(&mut self, alive: &StateSet, s: usize, id: NodeId) -> bool {
        match self.node(id) {
            Node::Top => true,
            Node::Bottom => false,
            Node::Atom(p) => self.root.holds(p, s),
            Node::Not(g) => !self.sat(alive, s, g),
            Node::And(l, r) => self.sat(alive, s, l) && self.sat(alive, s, r),
            Node::Or(l, r) => self.sat(alive, s, l) || self.sat(alive, s, r),
            Node::Implies(l, r) => !self.sat(alive, s, l) || self.sat(alive, s, r),
            Node::Iff(l, r) => self.sat(alive, s, l) == self.sat(alive, s, r),
            Node::Know(a, g) => {
                let class = self.root.class(a, s).intersection(alive);
                class.iter().all(|t| self.sat(alive, t, g))
            }
            Node::Poss(a, g) => {
                let class = self.root.class(a, s).intersection(alive);
                class.iter().any(|t| self.sat(alive, t, g))
            }
            Node::Announce(ann, g) => {
                if !self.sat(alive, s, ann) {
                    return true;
                }
                let after = self.ext(alive, ann);
                self.sat(&after, s, g)
            }
            Node::AnnounceDual(ann, g) => {
                if !self.sat(alive, s, ann) {
                    return false;
                }
                let after = self.ext(alive, ann);
                self.sat(&after, s, g)
            }
            Node::BoxPos(g) => self.first_witness(alive, s, g, Quant::Pos, false).is_none(),
            Node::DiaPos(g) => self.first_witness(alive, s, g, Quant::Pos, true).is_some(),
            Node::BoxApal(g) => self.first_witness(alive, s, g, Quant::Apal, false).is_none(),
            Node::DiaApal(g) => self.first_witness(alive, s, g, Quant::Apal, true).is_some(),
        }
    }

    /// `⟦id⟧` on the submodel `alive`.
    pub fn ext(&mut self, alive: &StateSet, id: NodeId) -> StateSet {
        let key = (alive.clone(), id);
        if self.cfg.memo_enabled {
            if let Some(v) = self.ext_memo.get(&key) {
                self.stats.cache_hits += 1;
                return v.clone();
            }
        }
        let mut out = StateSet::empty(alive.universe());
        for t in alive {
            if self.sat(alive, t, id) {
                out.insert(t);
            }
        }
        if self.cfg.memo_enabled {
            self.ext_memo.insert(key, out.clone());
        }
        out
    }

    /// Closure data for the quantifier's relation on the submodel: the
    /// maximal refinement (positive) or maximal bisimulation (APAL),
    /// recomputed for each distinct submodel.
    pub fn closure(&mut self, alive: &StateSet, q: Quant) -> Rc<ClosureSystem> {
        let key = (alive.clone(), q == Quant::Pos);
        if let Some(c) = self.closures.get(&key) {
            return Rc::clone(c);
        }
        let rel = match q {
            Quant::Pos => refinement_on(self.root, alive).relation,
            Quant::Apal => bisimulation_on(self.root, alive),
        };
        let sys = Rc::new(
            ClosureSystem::new(&rel, alive, self.cfg.state_cap)
                .expect("state cap checked before evaluation"),
        );
        self.closures.insert(key, Rc::clone(&sys));
        sys
    }

    /// The first (ascending mask) restriction `T ∋ s`, closed for the
    /// quantifier's relation, at which `g` evaluates to `want`.
    pub fn first_witness(
        &mut self,
        alive: &StateSet,
        s: usize,
        g: NodeId,
        q: Quant,
        want: bool,
    ) -> Option<StateSet> {
        let sys = self.closure(alive, q);
        let strategy = self.cfg.strategy;
        let mut it: ClosedSubsets<'_> = sys.subsets_containing(s, strategy);
        let n = self.root.len();
        while let Some(mask) = it.next_mask() {
            self.stats.restrictions_enumerated += 1;
            let t = StateSet::from_mask(n, mask);
            if self.sat(&t, s, g) == want {
                return Some(t);
            }
        }
        None
    }

    /// All restrictions the quantifier ranges over at `(alive, s)`.
    pub fn restrictions(&mut self, alive: &StateSet, s: usize, q: Quant) -> Vec<StateSet> {
        let sys = self.closure(alive, q);
        let strategy: Strategy = self.cfg.strategy;
        sys.subsets_containing(s, strategy).collect()
    }
}
