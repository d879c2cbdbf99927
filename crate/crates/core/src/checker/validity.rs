//! Executable validity checking: a schema is a formula whose metavariables
//! are written as atoms (`phi`, `psi`, `chi`); each trial samples a model and
//! an instantiation and checks the instance at every state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use super::{extension, CheckConfig};
use crate::error::Result;
use crate::model::EpistemicModel;
use crate::random::{garbled_copy, random_formula, random_model, FormulaShape};
use crate::relations::{is_refinement_closed, Strategy};
use crate::syntax::Formula;

/// What a metavariable may be instantiated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `K`/`L`/boolean formulas only.
    Epistemic,
    /// The positive fragment.
    Positive,
    /// Announcements allowed, no quantifiers.
    QuantifierFree,
    /// Anything, with at most one quantifier occurrence.
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub formula: Formula,
    pub slots: Vec<(String, Slot)>,
    /// Instantiate this metavariable several times per sampled instance of
    /// the others.
    pub repeat: Option<(String, usize)>,
}

impl Schema {
    pub fn new(name: &str, text: &str, slots: &[(&str, Slot)]) -> Self {
        Schema {
            name: name.to_string(),
            formula: text.parse().expect("schema text parses"),
            slots: slots.iter().map(|(v, s)| (v.to_string(), *s)).collect(),
            repeat: None,
        }
    }

    pub fn repeating(mut self, var: &str, times: usize) -> Self {
        self.repeat = Some((var.to_string(), times));
        self
    }
}

/// The suite run by `props` and the acceptance tests: quantifier laws,
/// reduction axioms, S5 validities and the positive-fragment properties.
pub fn standard_schemas() -> Vec<Schema> {
    use Slot::*;
    vec![
        Schema::new("box+ distributes over &", "box+ (phi & psi) <-> (box+ phi & box+ psi)", &[("phi", QuantifierFree), ("psi", QuantifierFree)]),
        Schema::new("box+ is factive", "box+ phi -> phi", &[("phi", Any)]),
        Schema::new("K a box+ -> box+ K a", "K a box+ phi -> box+ K a phi", &[("phi", QuantifierFree)]),
        Schema::new("Church-Rosser", "dia+ box+ phi -> box+ dia+ phi", &[("phi", QuantifierFree)]),
        Schema::new("McKinsey", "box+ dia+ phi -> dia+ box+ phi", &[("phi", QuantifierFree)]),
        Schema::new("AP", "[phi]p <-> (phi -> p)", &[("phi", Any)]),
        Schema::new("AN", "[phi]~psi <-> (phi -> ~[phi]psi)", &[("phi", Any), ("psi", Any)]),
        Schema::new("AC", "[phi](psi & chi) <-> ([phi]psi & [phi]chi)", &[("phi", Any), ("psi", Any), ("chi", QuantifierFree)]),
        Schema::new("AK", "[phi]K a psi <-> (phi -> K a [phi]psi)", &[("phi", Any), ("psi", Any)]),
        Schema::new("AA", "[phi][psi]chi <-> [phi & [phi]psi]chi", &[("phi", QuantifierFree), ("psi", Any), ("chi", QuantifierFree)]),
        Schema::new("A+", "box+ phi -> [psi]phi", &[("phi", QuantifierFree), ("psi", Positive)]).repeating("psi", 5),
        Schema::new("T", "K a phi -> phi", &[("phi", Any)]),
        Schema::new("4", "K a phi -> K a K a phi", &[("phi", Any)]),
        Schema::new("5", "~K a phi -> K a ~K a phi", &[("phi", Any)]),
        Schema::new("K", "K a (phi -> psi) -> (K a phi -> K a psi)", &[("phi", QuantifierFree), ("psi", QuantifierFree)]),
        Schema::new("box is factive", "box phi -> phi", &[("phi", QuantifierFree)]),
        Schema::new("preservation", "phi -> [psi]phi", &[("phi", Positive), ("psi", Any)]),
        Schema::new("success", "phi -> [phi]phi", &[("phi", Positive)]),
        Schema::new("idempotence", "[phi]psi -> [phi][phi]psi", &[("phi", Positive), ("psi", Any)]),
    ]
}

/// Random models with at most `max_states` states over fixed agents and
/// atoms, and instantiations of bounded depth. Seeded, hence reproducible.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub max_states: usize,
    pub agents: Vec<&'static str>,
    pub atoms: Vec<&'static str>,
    pub depth: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_states: 5,
            agents: vec!["a", "b"],
            atoms: vec!["p", "q"],
            depth: 2,
        }
    }

    pub fn model(&mut self) -> EpistemicModel {
        use rand::Rng;
        let n = self.rng.random_range(1..=self.max_states);
        random_model(&mut self.rng, n, &self.agents, &self.atoms)
    }

    /// A bisimilar copy of `m` and the original of each of its states.
    pub fn garbled(&mut self, m: &EpistemicModel) -> (EpistemicModel, Vec<usize>) {
        garbled_copy(&mut self.rng, m)
    }

    pub fn formula(&mut self, slot: Slot) -> Formula {
        let shape = match slot {
            Slot::Epistemic => FormulaShape::epistemic(self.depth),
            Slot::Positive => FormulaShape::positive(self.depth),
            Slot::QuantifierFree => FormulaShape::full(self.depth, 0),
            Slot::Any => FormulaShape::full(self.depth, 1),
        };
        random_formula(&mut self.rng, &self.atoms, &self.agents, shape)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The model in the textual model format.
    pub model: String,
    pub state: String,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub schema: String,
    pub models: usize,
    pub instances: usize,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `trials` sampled instances of `schema`, each on a fresh model, at
/// every state.
pub fn check_validity(
    schema: &Schema,
    sampler: &mut Sampler,
    trials: usize,
    cfg: &CheckConfig,
) -> Result<ValidityReport> {
    let mut report = ValidityReport {
        schema: schema.name.clone(),
        models: 0,
        instances: 0,
        violations: Vec::new(),
    };
    let no_agents = BTreeMap::new();
    for _ in 0..trials {
        let m = sampler.model();
        report.models += 1;
        let mut base = BTreeMap::new();
        for (var, slot) in &schema.slots {
            base.insert(var.clone(), sampler.formula(*slot));
        }
        let mut instantiations = vec![base.clone()];
        if let Some((var, times)) = &schema.repeat {
            let slot = schema
                .slots
                .iter()
                .find(|(v, _)| v == var)
                .map(|(_, s)| *s)
                .expect("repeated metavariable has a slot");
            for _ in 1..*times {
                let mut next = base.clone();
                next.insert(var.clone(), sampler.formula(slot));
                instantiations.push(next);
            }
        }
        for inst in instantiations {
            let instance = schema.formula.substitute(&inst, &no_agents);
            let ext = extension(&m, &instance, cfg)?;
            report.instances += 1;
            for s in ext.complement().iter() {
                report.violations.push(Violation {
                    model: m.to_text(),
                    state: m.state_name(s).to_string(),
                    instance: instance.to_string(),
                });
            }
        }
    }
    Ok(report)
}

fn report(name: &str) -> ValidityReport {
    ValidityReport {
        schema: name.to_string(),
        models: 0,
        instances: 0,
        violations: Vec::new(),
    }
}

/// Bisimilar points agree: each sampled formula (at most one quantifier)
/// has the same truth value at a state and at every copy of it in a
/// garbled bisimilar model.
pub fn bisimulation_invariance(sampler: &mut Sampler, trials: usize, cfg: &CheckConfig) -> Result<ValidityReport> {
    let mut r = report("bisimulation invariance");
    for _ in 0..trials {
        let m = sampler.model();
        let (g, original) = sampler.garbled(&m);
        if g.len() > cfg.state_cap {
            continue;
        }
        r.models += 1;
        let f = sampler.formula(Slot::Any);
        r.instances += 1;
        let (e1, e2) = (extension(&m, &f, cfg)?, extension(&g, &f, cfg)?);
        for (i, &s) in original.iter().enumerate() {
            if e1.contains(s) != e2.contains(i) {
                r.violations.push(Violation {
                    model: format!("{}\n# copy\n{}", m.to_text(), g.to_text()),
                    state: format!("{} / copy {}", m.state_name(s), g.state_name(i)),
                    instance: f.to_string(),
                });
            }
        }
    }
    Ok(r)
}

/// The closure-system enumerator with memoization agrees with walking all
/// subsets and filtering by closure, without memoization.
pub fn enumerators_agree(sampler: &mut Sampler, trials: usize, cfg: &CheckConfig) -> Result<ValidityReport> {
    let mut r = report("quantifier enumeration agrees with the naive filter");
    let naive = CheckConfig {
        strategy: Strategy::Naive,
        memo_enabled: false,
        ..*cfg
    };
    for _ in 0..trials {
        let m = sampler.model();
        let f = sampler.formula(Slot::Any);
        r.models += 1;
        r.instances += 1;
        let (fast, slow) = (extension(&m, &f, cfg)?, extension(&m, &f, &naive)?);
        for s in fast.difference(&slow).union(&slow.difference(&fast)).iter() {
            r.violations.push(Violation {
                model: m.to_text(),
                state: m.state_name(s).to_string(),
                instance: f.to_string(),
            });
        }
    }
    Ok(r)
}

/// `f` and its negation normal form have the same extension.
pub fn nnf_agrees(sampler: &mut Sampler, trials: usize, cfg: &CheckConfig) -> Result<ValidityReport> {
    let mut r = report("negation normal form is equivalent");
    for _ in 0..trials {
        let m = sampler.model();
        let f = sampler.formula(Slot::Any);
        r.models += 1;
        r.instances += 1;
        let (a, b) = (extension(&m, &f, cfg)?, extension(&m, &f.nnf(), cfg)?);
        for s in a.difference(&b).union(&b.difference(&a)).iter() {
            r.violations.push(Violation {
                model: m.to_text(),
                state: m.state_name(s).to_string(),
                instance: f.to_string(),
            });
        }
    }
    Ok(r)
}

/// Extensions of positive formulas are closed under refinement.
pub fn positive_extensions_closed(sampler: &mut Sampler, trials: usize, cfg: &CheckConfig) -> Result<ValidityReport> {
    let mut r = report("positive extensions are refinement-closed");
    for _ in 0..trials {
        let m = sampler.model();
        let f = sampler.formula(Slot::Positive);
        r.models += 1;
        r.instances += 1;
        if !is_refinement_closed(&m, &extension(&m, &f, cfg)?) {
            r.violations.push(Violation {
                model: m.to_text(),
                state: String::new(),
                instance: f.to_string(),
            });
        }
    }
    Ok(r)
}

/// Every standard schema and invariant, `trials` samples each, from one
/// seeded sampler.
pub fn run_suite(seed: u64, trials: usize, cfg: &CheckConfig) -> Result<Vec<ValidityReport>> {
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::new();
    for schema in standard_schemas() {
        out.push(check_validity(&schema, &mut sampler, trials, cfg)?);
    }
    out.push(bisimulation_invariance(&mut sampler, trials, cfg)?);
    out.push(enumerators_agree(&mut sampler, trials, cfg)?);
    out.push(nnf_agrees(&mut sampler, trials, cfg)?);
    out.push(positive_extensions_closed(&mut sampler, trials, cfg)?);
    Ok(out)
}
