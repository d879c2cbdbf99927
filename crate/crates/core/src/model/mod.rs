//! Finite S5 epistemic models.
//!
//! Relations are stored as partitions, so reflexivity, symmetry and
//! transitivity hold by construction. Models are immutable; restriction
//! builds a new model that keeps the surviving state names.

mod description;
mod generators;
mod state_set;

use std::collections::HashMap;
use std::fmt;

pub use description::{Diagnostic, ModelDescription};
pub use generators::{
    compose9, expr_m, expr_mprime, fixture, fixture_names, gen_ab_chain, left_edge_chain,
    right_edge_chain, two_leg_chain,
};
pub use state_set::{Iter as StateSetIter, StateSet};

use crate::error::{Error, Result};
use crate::syntax::Formula;

#[derive(Clone, PartialEq, Eq)]
pub struct EpistemicModel {
    agents: Vec<String>,
    atoms: Vec<String>,
    states: Vec<String>,
    /// Per agent, the equivalence classes ordered by their least member.
    partitions: Vec<Vec<StateSet>>,
    /// Per agent, per state: index into `partitions[agent]`.
    class_of: Vec<Vec<usize>>,
    /// Per atom, the states where it holds.
    valuation: Vec<StateSet>,
    state_index: HashMap<String, usize>,
}

impl EpistemicModel {
    /// Build from index-level data. `partitions[a]` must be a partition of
    /// `0..states.len()`; use [`ModelDescription`] for name-level input with
    /// diagnostics.
    pub fn from_parts(
        agents: Vec<String>,
        atoms: Vec<String>,
        states: Vec<String>,
        partitions: Vec<Vec<Vec<usize>>>,
        valuation: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let desc = ModelDescription {
            rel: agents
                .iter()
                .zip(&partitions)
                .map(|(a, classes)| {
                    let named = classes
                        .iter()
                        .map(|c| c.iter().map(|&i| states[i].clone()).collect())
                        .collect();
                    (a.clone(), named)
                })
                .collect(),
            val: {
                let mut val: std::collections::BTreeMap<String, Vec<String>> = Default::default();
                for (atom, holders) in atoms.iter().zip(&valuation) {
                    for &i in holders {
                        val.entry(states[i].clone()).or_default().push(atom.clone());
                    }
                }
                val
            },
            agents,
            atoms,
            states,
            links: Default::default(),
            point: None,
        };
        desc.build()
    }

    pub(crate) fn assemble(
        agents: Vec<String>,
        atoms: Vec<String>,
        states: Vec<String>,
        partitions: Vec<Vec<StateSet>>,
        valuation: Vec<StateSet>,
    ) -> Self {
        let n = states.len();
        let mut partitions = partitions;
        for classes in &mut partitions {
            classes.retain(|c| !c.is_empty());
            classes.sort_by_key(|c| c.first());
        }
        let class_of = partitions
            .iter()
            .map(|classes| {
                let mut of = vec![usize::MAX; n];
                for (ci, c) in classes.iter().enumerate() {
                    for s in c {
                        of[s] = ci;
                    }
                }
                of
            })
            .collect();
        let state_index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        EpistemicModel {
            agents,
            atoms,
            states,
            partitions,
            class_of,
            valuation,
            state_index,
        }
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Models always have at least one state; provided for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn require_state(&self, name: &str) -> Result<usize> {
        self.state_index(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|p| p == name)
    }

    /// The classes of agent `a` (by index), ordered by least member.
    pub fn partition(&self, a: usize) -> &[StateSet] {
        &self.partitions[a]
    }

    /// The `a`-class of state `s`.
    pub fn class(&self, a: usize, s: usize) -> &StateSet {
        &self.partitions[a][self.class_of[a][s]]
    }

    pub fn class_index(&self, a: usize, s: usize) -> usize {
        self.class_of[a][s]
    }

    pub fn equivalent(&self, a: usize, s: usize, t: usize) -> bool {
        self.class_of[a][s] == self.class_of[a][t]
    }

    /// States where atom `p` (by index) holds.
    pub fn valuation(&self, p: usize) -> &StateSet {
        &self.valuation[p]
    }

    pub fn holds(&self, p: usize, s: usize) -> bool {
        self.valuation[p].contains(s)
    }

    /// Atom names true at `s`, in declaration order.
    pub fn true_atoms(&self, s: usize) -> Vec<&str> {
        (0..self.atoms.len())
            .filter(|&p| self.holds(p, s))
            .map(|p| self.atoms[p].as_str())
            .collect()
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.len())
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// Resolve state names into a set.
    pub fn state_set<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet> {
        let mut out = self.empty_set();
        for n in names {
            out.insert(self.require_state(n.as_ref())?);
        }
        Ok(out)
    }

    /// Names of the members of `set`, in state order.
    pub fn names(&self, set: &StateSet) -> Vec<String> {
        set.iter().map(|i| self.states[i].clone()).collect()
    }

    pub fn check_set(&self, set: &StateSet) -> Result<()> {
        if set.universe() != self.len() {
            return Err(Error::UniverseMismatch {
                expected: self.len(),
                found: set.universe(),
            });
        }
        Ok(())
    }

    /// `M|T`: keep the states in `t` (with their names), intersect every
    /// relation and the valuation with `t`.
    pub fn restrict(&self, t: &StateSet) -> Result<EpistemicModel> {
        self.check_set(t)?;
        if t.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        let keep: Vec<usize> = t.iter().collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (ni, &oi) in keep.iter().enumerate() {
            new_index[oi] = ni;
        }
        let n = keep.len();
        let project = |set: &StateSet| {
            StateSet::from_indices(n, set.intersection(t).iter().map(|i| new_index[i]))
        };
        let partitions = self
            .partitions
            .iter()
            .map(|classes| classes.iter().map(project).collect())
            .collect();
        let valuation = self.valuation.iter().map(project).collect();
        Ok(EpistemicModel::assemble(
            self.agents.clone(),
            self.atoms.clone(),
            keep.iter().map(|&i| self.states[i].clone()).collect(),
            partitions,
            valuation,
        ))
    }

    /// `⟦f⟧`: the states where `f` holds, under the default checker settings.
    pub fn extension(&self, f: &Formula) -> Result<StateSet> {
        crate::checker::extension(self, f, &crate::checker::CheckConfig::default())
    }

    /// Check that every atom and agent of `f` is declared here.
    pub fn check_signature(&self, f: &Formula) -> Result<()> {
        for p in f.vars() {
            if self.atom_index(&p).is_none() {
                return Err(Error::UndeclaredAtom(p));
            }
        }
        for a in f.agents() {
            if self.agent_index(&a).is_none() {
                return Err(Error::UndeclaredAgent(a));
            }
        }
        Ok(())
    }

    /// Name-level description, for serialization.
    pub fn describe(&self) -> ModelDescription {
        ModelDescription::from_model(self, None)
    }

    pub fn to_text(&self) -> String {
        self.describe().to_text()
    }
}

impl fmt::Debug for EpistemicModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A model with a designated state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: EpistemicModel,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: EpistemicModel, point: &str) -> Result<Self> {
        let point = model.require_state(point)?;
        Ok(PointedModel { model, point })
    }

    pub fn point_name(&self) -> &str {
        self.model.state_name(self.point)
    }

    pub fn describe(&self) -> ModelDescription {
        ModelDescription::from_model(&self.model, Some(self.point))
    }

    pub fn to_text(&self) -> String {
        self.describe().to_text()
    }
}
