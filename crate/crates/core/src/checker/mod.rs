//! Model checking for the full language.
//!
//! `box+ φ` holds at `s` when `φ` holds at `s` after every restriction to a
//! refinement-closed set containing `s` (these are exactly the extensions of
//! positive formulas on a finite model). `box φ` ranges over unions of
//! maximal-bisimulation classes containing `s` (the extensions of epistemic
//! formulas). Both relations are recomputed on the current submodel.

mod engine;
pub mod validity;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EpistemicModel, PointedModel, StateSet};
use crate::relations::{check_cap, Strategy, DEFAULT_STATE_CAP};
use crate::syntax::{Formula, PositiveFormula};
use crate::synthesis;

use engine::{Engine, Quant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Largest model on which quantifiers are evaluated.
    pub state_cap: usize,
    /// Largest quantifier nesting accepted.
    pub nesting_cap: usize,
    /// Whether `box`/`dia` are allowed.
    pub apal_enabled: bool,
    pub memo_enabled: bool,
    /// Subset enumeration strategy for quantifiers.
    pub strategy: Strategy,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            state_cap: DEFAULT_STATE_CAP,
            nesting_cap: 16,
            apal_enabled: true,
            memo_enabled: true,
            strategy: Strategy::Dag,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes_visited: u64,
    pub cache_hits: u64,
    pub restrictions_enumerated: u64,
}

/// A restriction certifying an existential quantifier, with an
/// announcement that produces it. When the quantified formula is (a
/// conjunction containing) another existential, `then` holds its witness
/// inside the restricted model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Surviving states, as indices of the model passed to the checker.
    pub set: StateSet,
    pub states: Vec<String>,
    /// Positive for `dia+`, epistemic for `dia`; defined on the model in
    /// which the quantifier was evaluated.
    pub formula: Formula,
    pub then: Option<Box<Witness>>,
}

impl Witness {
    /// The sequence of witnesses, outermost first.
    pub fn chain(&self) -> Vec<&Witness> {
        let mut out = vec![self];
        while let Some(next) = &out.last().expect("nonempty").then {
            out.push(next);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: bool,
    /// Present iff the verdict is true and the formula is `dia+ …`/`dia …`.
    pub witness: Option<Witness>,
    pub stats: Stats,
}

fn preflight(m: &EpistemicModel, f: &Formula, cfg: &CheckConfig) -> Result<()> {
    m.check_signature(f)?;
    if f.has_apal_quantifier() && !cfg.apal_enabled {
        return Err(Error::ApalDisabled);
    }
    let nesting = f.quantifier_nesting();
    if nesting > cfg.nesting_cap {
        return Err(Error::NestingCap {
            nesting,
            cap: cfg.nesting_cap,
        });
    }
    if f.has_quantifier() {
        check_cap(m.len(), cfg.state_cap)?;
    }
    Ok(())
}

/// Evaluate `f` at the point of `pm`.
pub fn evaluate(pm: &PointedModel, f: &Formula, cfg: &CheckConfig) -> Result<CheckResult> {
    let m = &pm.model;
    preflight(m, f, cfg)?;
    let mut engine = Engine::new(m, *cfg);
    let id = engine.intern(f);
    let full = m.full_set();
    let verdict = engine.sat(&full, pm.point, id);
    let stats = engine.stats;
    let witness = if verdict {
        build_witness(&mut engine, &full, pm.point, f)?
    } else {
        None
    };
    Ok(CheckResult {
        verdict,
        witness,
        stats,
    })
}

/// Truth value only.
pub fn holds(pm: &PointedModel, f: &Formula, cfg: &CheckConfig) -> Result<bool> {
    let m = &pm.model;
    preflight(m, f, cfg)?;
    let mut engine = Engine::new(m, *cfg);
    let id = engine.intern(f);
    Ok(engine.sat(&m.full_set(), pm.point, id))
}

/// `⟦f⟧_M`
pub fn extension(m: &EpistemicModel, f: &Formula, cfg: &CheckConfig) -> Result<StateSet> {
    preflight(m, f, cfg)?;
    let mut engine = Engine::new(m, *cfg);
    let id = engine.intern(f);
    Ok(engine.ext(&m.full_set(), id))
}

/// Indices of `set` (root indices, all in `alive`) as indices of
/// `root.restrict(alive)`.
fn to_submodel(alive: &StateSet, set: &StateSet) -> StateSet {
    let rank: Vec<usize> = alive.iter().collect();
    StateSet::from_indices(
        rank.len(),
        set.iter()
            .map(|s| rank.binary_search(&s).expect("witness inside submodel")),
    )
}

fn build_witness(
    engine: &mut Engine<'_>,
    alive: &StateSet,
    s: usize,
    f: &Formula,
) -> Result<Option<Witness>> {
    let (q, body) = match f {
        Formula::DiaPos(g) => (Quant::Pos, g),
        Formula::DiaApal(g) => (Quant::Apal, g),
        _ => return Ok(None),
    };
    let gid = engine.intern(body);
    let Some(t) = engine.first_witness(alive, s, gid, q, true) else {
        return Ok(None);
    };
    let sub = engine.root.restrict(alive)?;
    let target = to_submodel(alive, &t);
    let formula = match q {
        Quant::Pos => synthesis::positive_defining_formula(&sub, &target)?.formula,
        Quant::Apal => synthesis::epistemic_defining_formula(&sub, &target)?.formula,
    };
    let then = match next_existential(body) {
        Some(inner) => build_witness(engine, &t, s, inner)?.map(Box::new),
        None => None,
    };
    Ok(Some(Witness {
        states: engine.root.names(&t),
        set: t,
        formula,
        then,
    }))
}

/// The existential reached through conjunctions: the body of a witnessed
/// quantifier is true, so each of its conjuncts is too.
fn next_existential(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::DiaPos(_) | Formula::DiaApal(_) => Some(f),
        Formula::And(l, r) => next_existential(l).or_else(|| next_existential(r)),
        _ => None,
    }
}

/// If `dia+ goal` holds, the first refinement-closed `T ∋ point` (ascending
/// mask order) with `(M|T)_point ⊨ goal`, and a positive formula whose
/// extension is `T`.
pub fn find_positive_witness(
    pm: &PointedModel,
    goal: &Formula,
    cfg: &CheckConfig,
) -> Result<Option<(StateSet, PositiveFormula)>> {
    let m = &pm.model;
    preflight(m, &Formula::dia_pos(goal.clone()), cfg)?;
    let mut engine = Engine::new(m, *cfg);
    let gid = engine.intern(goal);
    let full = m.full_set();
    let Some(t) = engine.first_witness(&full, pm.point, gid, Quant::Pos, true) else {
        return Ok(None);
    };
    let synth = synthesis::positive_defining_formula(m, &t)?;
    let pf = PositiveFormula::new(synth.formula)
        .ok_or_else(|| Error::Synthesis("defining formula is not positive".into()))?;
    Ok(Some((t, pf)))
}

/// Every restriction a quantifier at the point ranges over: the
/// refinement-closed (`positive`) or bisimulation-closed sets containing it.
pub fn quantifier_range(pm: &PointedModel, positive: bool, cfg: &CheckConfig) -> Result<Vec<StateSet>> {
    check_cap(pm.model.len(), cfg.state_cap)?;
    let mut engine = Engine::new(&pm.model, *cfg);
    let q = if positive { Quant::Pos } else { Quant::Apal };
    Ok(engine.restrictions(&pm.model.full_set(), pm.point, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compose9, expr_m, expr_mprime, ModelDescription};

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn edge() -> PointedModel {
        ModelDescription::from_text("agents: a\natoms: p\nstates: s t\nval s: p\nrel a: {s t}\npoint: s")
            .unwrap()
            .build_pointed()
            .unwrap()
    }

    #[test]
    fn basic_clauses() {
        let cfg = CheckConfig::default();
        let pm = edge();
        assert!(holds(&pm, &f("[p]K a p"), &cfg).unwrap());
        assert!(!holds(&pm, &f("K a p"), &cfg).unwrap());
        assert!(holds(&pm, &f("L a ~p"), &cfg).unwrap());
        assert!(holds(&pm, &f("box+ true"), &cfg).unwrap());
        assert!(holds(&pm, &f("[~p]false"), &cfg).unwrap());
        assert!(!holds(&pm, &f("<~p>true"), &cfg).unwrap());
        assert!(holds(&pm, &f("dia+ K a p"), &cfg).unwrap());
    }

    #[test]
    fn composability() {
        let cfg = CheckConfig::default();
        let pm = compose9();
        let chi = "(L a q & K a (K b q | K b ~q))";
        let two = evaluate(&pm, &f(&format!("dia+ dia+ {chi}")), &cfg).unwrap();
        assert!(two.verdict);
        let w = two.witness.unwrap();
        assert_eq!(w.chain().len(), 2);
        assert!(!evaluate(&pm, &f(&format!("dia+ {chi}")), &cfg).unwrap().verdict);
    }

    #[test]
    fn expressivity_pair() {
        let cfg = CheckConfig::default();
        for q in ["dia+", "dia"] {
            let g = f(&format!("{q} (K a p & ~K b K a p)"));
            assert!(!holds(&expr_m(), &g, &cfg).unwrap());
            assert!(holds(&expr_mprime(), &g, &cfg).unwrap());
        }
    }

    #[test]
    fn witness_formula_reproduces_set() {
        let cfg = CheckConfig::default();
        let pm = compose9();
        let r = evaluate(&pm, &f("dia+ (K a p & ~q & L a q)"), &cfg).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(pm.model.extension(&w.formula).unwrap(), w.set);
        assert!(w.formula.is_positive());
    }

    #[test]
    fn errors() {
        let cfg = CheckConfig::default();
        let pm = edge();
        assert_eq!(
            holds(&pm, &f("K b p"), &cfg),
            Err(Error::UndeclaredAgent("b".into()))
        );
        let off = CheckConfig {
            apal_enabled: false,
            ..cfg
        };
        assert_eq!(holds(&pm, &f("box p"), &off), Err(Error::ApalDisabled));
        let tight = CheckConfig {
            nesting_cap: 1,
            ..cfg
        };
        assert!(matches!(
            holds(&pm, &f("box+ box+ p"), &tight),
            Err(Error::NestingCap { nesting: 2, cap: 1 })
        ));
        let small = CheckConfig {
            state_cap: 1,
            ..cfg
        };
        assert!(matches!(
            holds(&pm, &f("box+ p"), &small),
            Err(Error::StateCap { states: 2, cap: 1 })
        ));
        assert!(holds(&pm, &f("K a p | p"), &small).unwrap());
    }

    #[test]
    fn positive_witness_examples() {
        let cfg = CheckConfig::default();
        let pm = compose9();
        assert_eq!(find_positive_witness(&pm, &Formula::Bottom, &cfg).unwrap(), None);
        let (t, pf) = find_positive_witness(&pm, &Formula::Top, &cfg).unwrap().unwrap();
        assert_eq!(pm.model.extension(pf.as_formula()).unwrap(), t);
        assert_eq!(t, quantifier_range(&pm, true, &cfg).unwrap()[0]);
    }
}
