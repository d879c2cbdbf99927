//! Formula AST for epistemic logic with public announcements and the two
//! announcement quantifiers (arbitrary `box`/`dia` and positive `box+`/`dia+`).

mod measures;
mod parser;
mod print;

use std::collections::BTreeMap;
use std::fmt;

pub use measures::{stack_kab, stack_kba, stack_lab, stack_lba};
pub use parser::{parse, ParseError};

/// A formula of the full language. `Top` and `Bottom` are constants that
/// print as `true` / `false`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `K a φ`
    Know(String, Box<Formula>),
    /// `L a φ`, the dual of `K a`.
    Poss(String, Box<Formula>),
    /// `[φ]ψ`
    Announce(Box<Formula>, Box<Formula>),
    /// `<φ>ψ`
    AnnounceDual(Box<Formula>, Box<Formula>),
    /// `box φ`: after every epistemic announcement.
    BoxApal(Box<Formula>),
    /// `dia φ`
    DiaApal(Box<Formula>),
    /// `box+ φ`: after every positive announcement.
    BoxPos(Box<Formula>),
    /// `dia+ φ`
    DiaPos(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn know(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Know(agent.into(), Box::new(f))
    }

    pub fn poss(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Poss(agent.into(), Box::new(f))
    }

    pub fn announce(ann: Formula, f: Formula) -> Self {
        Formula::Announce(Box::new(ann), Box::new(f))
    }

    pub fn announce_dual(ann: Formula, f: Formula) -> Self {
        Formula::AnnounceDual(Box::new(ann), Box::new(f))
    }

    pub fn box_apal(f: Formula) -> Self {
        Formula::BoxApal(Box::new(f))
    }

    pub fn dia_apal(f: Formula) -> Self {
        Formula::DiaApal(Box::new(f))
    }

    pub fn box_pos(f: Formula) -> Self {
        Formula::BoxPos(Box::new(f))
    }

    pub fn dia_pos(f: Formula) -> Self {
        Formula::DiaPos(Box::new(f))
    }

    /// Left-nested conjunction of `parts`; the empty conjunction is `true`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction of `parts`; the empty disjunction is `false`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Top | Bottom | Atom(_) => vec![],
            Not(f) | Know(_, f) | Poss(_, f) | BoxApal(f) | DiaApal(f) | BoxPos(f) | DiaPos(f) => {
                vec![f]
            }
            And(l, r)
            | Or(l, r)
            | Implies(l, r)
            | Iff(l, r)
            | Announce(l, r)
            | AnnounceDual(l, r) => vec![l, r],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Height of the AST (an atom has height 0).
    pub fn height(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(
            self,
            Formula::BoxApal(_) | Formula::DiaApal(_) | Formula::BoxPos(_) | Formula::DiaPos(_)
        )
    }

    /// Maximum number of nested quantifiers on any branch.
    pub fn quantifier_nesting(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Formula::quantifier_nesting)
            .max()
            .unwrap_or(0);
        below + usize::from(self.is_quantifier())
    }

    pub fn has_quantifier(&self) -> bool {
        self.is_quantifier() || self.children().into_iter().any(Formula::has_quantifier)
    }

    pub fn has_apal_quantifier(&self) -> bool {
        matches!(self, Formula::BoxApal(_) | Formula::DiaApal(_))
            || self.children().into_iter().any(Formula::has_apal_quantifier)
    }

    /// True for formulas without announcements or quantifiers.
    pub fn is_epistemic(&self) -> bool {
        use Formula::*;
        match self {
            Announce(..) | AnnounceDual(..) | BoxApal(_) | DiaApal(_) | BoxPos(_) | DiaPos(_) => {
                false
            }
            _ => self.children().into_iter().all(Formula::is_epistemic),
        }
    }

    /// Agent names in order of first occurrence.
    pub fn agents(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut Vec<String>) {
        if let Formula::Know(a, _) | Formula::Poss(a, _) = self {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        for c in self.children() {
            c.collect_agents(out);
        }
    }

    /// Replace atoms named in `atoms` and agents named in `agents`.
    /// Used to instantiate schemas whose metavariables are written as atoms.
    pub fn substitute(
        &self,
        atoms: &BTreeMap<String, Formula>,
        agents: &BTreeMap<String, String>,
    ) -> Formula {
        use Formula::*;
        let sub = |f: &Formula| Box::new(f.substitute(atoms, agents));
        let agent = |a: &String| agents.get(a).cloned().unwrap_or_else(|| a.clone());
        match self {
            Top => Top,
            Bottom => Bottom,
            Atom(p) => atoms.get(p).cloned().unwrap_or_else(|| Atom(p.clone())),
            Not(f) => Not(sub(f)),
            And(l, r) => And(sub(l), sub(r)),
            Or(l, r) => Or(sub(l), sub(r)),
            Implies(l, r) => Implies(sub(l), sub(r)),
            Iff(l, r) => Iff(sub(l), sub(r)),
            Know(a, f) => Know(agent(a), sub(f)),
            Poss(a, f) => Poss(agent(a), sub(f)),
            Announce(l, r) => Announce(sub(l), sub(r)),
            AnnounceDual(l, r) => AnnounceDual(sub(l), sub(r)),
            BoxApal(f) => BoxApal(sub(f)),
            DiaApal(f) => DiaApal(sub(f)),
            BoxPos(f) => BoxPos(sub(f)),
            DiaPos(f) => DiaPos(sub(f)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// A formula certified to lie in the positive fragment
/// `p | ~p | φ & φ | φ | φ | K a φ` (plus the constants).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveFormula(Formula);

impl PositiveFormula {
    pub fn new(f: Formula) -> Option<Self> {
        f.is_positive().then_some(PositiveFormula(f))
    }

    pub fn as_formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl fmt::Display for PositiveFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<PositiveFormula> for Formula {
    fn from(p: PositiveFormula) -> Self {
        p.0
    }
}

/// True when `name` is a legal atom name: `[a-z][a-zA-Z0-9_]*` and not a
/// reserved word.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !parser::is_keyword(name)
}

/// Agent names: `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_agent_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// State names are free-form tokens of alphanumerics, `_`, `-` and `'`.
pub fn is_state_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-'))
}
