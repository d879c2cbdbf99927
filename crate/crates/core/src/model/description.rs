use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EpistemicModel, PointedModel, StateSet};
use crate::error::{Error, Result};
use crate::syntax::{is_agent_name, is_atom_name, is_state_name};

/// Name-level model, as read from or written to a model file.
///
/// `rel` lists each agent's partition; `links` is the alternative edge-list
/// input, closed under reflexivity, symmetry and transitivity when the model
/// is built. An agent given only links gets singleton classes for every
/// state it does not mention.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub agents: Vec<String>,
    pub atoms: Vec<String>,
    pub states: Vec<String>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub rel: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub links: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

/// A violated model invariant, naming the offending states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Diagnostic {
    EmptyDomain,
    InvalidName { kind: &'static str, name: String },
    Duplicate { kind: &'static str, name: String },
    UnknownState { context: String, name: String },
    UnknownAgent(String),
    UndeclaredAtom { state: String, atom: String },
    MissingPartition(String),
    EmptyClass(String),
    OverlappingClasses { agent: String, state: String },
    Uncovered { agent: String, state: String },
    BadPoint(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            EmptyDomain => write!(f, "empty domain"),
            InvalidName { kind, name } => write!(f, "invalid {kind} name '{name}'"),
            Duplicate { kind, name } => write!(f, "duplicate {kind} '{name}'"),
            UnknownState { context, name } => write!(f, "unknown state '{name}' in {context}"),
            UnknownAgent(a) => write!(f, "relation given for undeclared agent '{a}'"),
            UndeclaredAtom { state, atom } => {
                write!(f, "undeclared atom '{atom}' in valuation of '{state}'")
            }
            MissingPartition(a) => write!(f, "no partition given for agent '{a}'"),
            EmptyClass(a) => write!(f, "empty class in partition of agent '{a}'"),
            OverlappingClasses { agent, state } => write!(
                f,
                "overlapping classes: state '{state}' appears in two {agent}-classes"
            ),
            Uncovered { agent, state } => {
                write!(f, "state '{state}' is in no {agent}-class (partition must cover all states)")
            }
            BadPoint(p) => write!(f, "designated point '{p}' is not a state"),
        }
    }
}

fn duplicates<'a>(kind: &'static str, names: &'a [String], out: &mut Vec<Diagnostic>) {
    let mut seen: BTreeSet<&'a str> = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            out.push(Diagnostic::Duplicate {
                kind,
                name: n.clone(),
            });
        }
    }
}

type NameCheck<'a> = (&'static str, &'a [String], fn(&str) -> bool);

impl ModelDescription {
    /// All invariant violations; empty means the description builds.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Diagnostic::EmptyDomain);
        }
        let checks: [NameCheck; 3] = [
            ("agent", &self.agents, is_agent_name),
            ("atom", &self.atoms, is_atom_name),
            ("state", &self.states, is_state_name),
        ];
        for (kind, names, ok) in checks {
            for n in names {
                if !ok(n) {
                    out.push(Diagnostic::InvalidName {
                        kind,
                        name: n.clone(),
                    });
                }
            }
            duplicates(kind, names, &mut out);
        }

        let states: BTreeSet<&str> = self.states.iter().map(String::as_str).collect();
        let atoms: BTreeSet<&str> = self.atoms.iter().map(String::as_str).collect();
        for (s, ps) in &self.val {
            if !states.contains(s.as_str()) {
                out.push(Diagnostic::UnknownState {
                    context: "valuation".into(),
                    name: s.clone(),
                });
            }
            for p in ps {
                if !atoms.contains(p.as_str()) {
                    out.push(Diagnostic::UndeclaredAtom {
                        state: s.clone(),
                        atom: p.clone(),
                    });
                }
            }
        }

        for a in self.rel.keys().chain(self.links.keys()) {
            if !self.agents.contains(a) {
                out.push(Diagnostic::UnknownAgent(a.clone()));
            }
        }
        for (a, groups) in &self.links {
            for g in groups {
                for s in g {
                    if !states.contains(s.as_str()) {
                        out.push(Diagnostic::UnknownState {
                            context: format!("{a}-links"),
                            name: s.clone(),
                        });
                    }
                }
            }
        }
        for a in &self.agents {
            let linked = self.links.contains_key(a);
            let Some(classes) = self.rel.get(a) else {
                if !linked {
                    out.push(Diagnostic::MissingPartition(a.clone()));
                }
                continue;
            };
            let mut seen = BTreeSet::new();
            for class in classes {
                if class.is_empty() {
                    out.push(Diagnostic::EmptyClass(a.clone()));
                }
                let mut in_class = BTreeSet::new();
                for s in class {
                    if !states.contains(s.as_str()) {
                        out.push(Diagnostic::UnknownState {
                            context: format!("{a}-partition"),
                            name: s.clone(),
                        });
                    } else if !in_class.insert(s.as_str()) {
                        // Repeated within one class: harmless, ignore.
                    } else if !seen.insert(s.as_str()) {
                        out.push(Diagnostic::OverlappingClasses {
                            agent: a.clone(),
                            state: s.clone(),
                        });
                    }
                }
            }
            if !linked {
                for s in &self.states {
                    if !seen.contains(s.as_str()) {
                        out.push(Diagnostic::Uncovered {
                            agent: a.clone(),
                            state: s.clone(),
                        });
                    }
                }
            }
        }
        if let Some(p) = &self.point {
            if !states.contains(p.as_str()) {
                out.push(Diagnostic::BadPoint(p.clone()));
            }
        }
        out
    }

    pub fn build(&self) -> Result<EpistemicModel> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(Error::InvalidModel(diags));
        }
        let n = self.states.len();
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();

        let partitions = self
            .agents
            .iter()
            .map(|a| {
                let mut uf = UnionFind::new(n);
                let groups = self.rel.get(a).into_iter().chain(self.links.get(a));
                for group in groups.flatten() {
                    for w in group.windows(2) {
                        uf.union(index[w[0].as_str()], index[w[1].as_str()]);
                    }
                }
                uf.classes()
                    .into_iter()
                    .map(|c| StateSet::from_indices(n, c))
                    .collect()
            })
            .collect();

        let valuation = self
            .atoms
            .iter()
            .map(|p| {
                StateSet::from_indices(
                    n,
                    self.val
                        .iter()
                        .filter(|(_, ps)| ps.contains(p))
                        .map(|(s, _)| index[s.as_str()]),
                )
            })
            .collect();

        Ok(EpistemicModel::assemble(
            self.agents.clone(),
            self.atoms.clone(),
            self.states.clone(),
            partitions,
            valuation,
        ))
    }

    /// Build with the designated point; without a `point:` entry the first
    /// state is used.
    pub fn build_pointed(&self) -> Result<PointedModel> {
        let model = self.build()?;
        let point = match &self.point {
            Some(p) => model.require_state(p)?,
            None => 0,
        };
        Ok(PointedModel { model, point })
    }

    pub(crate) fn from_model(m: &EpistemicModel, point: Option<usize>) -> Self {
        let val = (0..m.len())
            .filter_map(|s| {
                let ps: Vec<String> = m.true_atoms(s).into_iter().map(String::from).collect();
                (!ps.is_empty()).then(|| (m.state_name(s).to_string(), ps))
            })
            .collect();
        let rel = m
            .agents()
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let classes = m.partition(a).iter().map(|c| m.names(c)).collect();
                (name.clone(), classes)
            })
            .collect();
        ModelDescription {
            agents: m.agents().to_vec(),
            atoms: m.atoms().to_vec(),
            states: m.states().to_vec(),
            val,
            rel,
            links: BTreeMap::new(),
            point: point.map(|p| m.state_name(p).to_string()),
        }
    }

    /// Parse the line-oriented model format. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut d = ModelDescription::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let err = |message: String| Error::ModelSyntax { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once(':') else {
                return Err(err(format!("expected 'key: value', found '{content}'")));
            };
            let mut key_parts = key.split_whitespace();
            let head = key_parts.next().unwrap_or("");
            let arg = key_parts.next();
            if key_parts.next().is_some() {
                return Err(err(format!("malformed key '{}'", key.trim())));
            }
            let words = || value.split_whitespace().map(String::from);
            let need_arg = |what: &str| {
                arg.map(String::from)
                    .ok_or_else(|| err(format!("'{head}' needs {what}, e.g. '{head} x: ...'")))
            };
            match (head, arg) {
                ("agents", None) => d.agents.extend(words()),
                ("atoms", None) => d.atoms.extend(words()),
                ("states", None) => d.states.extend(words()),
                ("point", None) => {
                    let w: Vec<String> = words().collect();
                    if w.len() != 1 {
                        return Err(err("'point' takes exactly one state".into()));
                    }
                    d.point = w.into_iter().next();
                }
                ("val", _) => {
                    let s = need_arg("a state")?;
                    d.val.entry(s).or_default().extend(words());
                }
                ("rel", _) => {
                    let a = need_arg("an agent")?;
                    let classes = parse_classes(value).map_err(err)?;
                    d.rel.entry(a).or_default().extend(classes);
                }
                ("link", _) => {
                    let a = need_arg("an agent")?;
                    let groups = value
                        .split(',')
                        .map(|g| g.split_whitespace().map(String::from).collect::<Vec<_>>())
                        .filter(|g| !g.is_empty());
                    d.links.entry(a).or_default().extend(groups);
                }
                _ => return Err(err(format!("unknown key '{}'", key.trim()))),
            }
        }
        Ok(d)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("agents: {}\n", self.agents.join(" ")));
        out.push_str(&format!("atoms: {}\n", self.atoms.join(" ")));
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        for s in &self.states {
            if let Some(ps) = self.val.get(s).filter(|ps| !ps.is_empty()) {
                out.push_str(&format!("val {s}: {}\n", ps.join(" ")));
            }
        }
        for a in &self.agents {
            if let Some(classes) = self.rel.get(a) {
                let body: Vec<String> = classes
                    .iter()
                    .map(|c| format!("{{{}}}", c.join(" ")))
                    .collect();
                out.push_str(&format!("rel {a}: {}\n", body.join(" ")));
            }
            if let Some(groups) = self.links.get(a) {
                let body: Vec<String> = groups.iter().map(|g| g.join(" ")).collect();
                out.push_str(&format!("link {a}: {}\n", body.join(", ")));
            }
        }
        if let Some(p) = &self.point {
            out.push_str(&format!("point: {p}\n"));
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ModelSyntax {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model descriptions always serialize")
    }

    /// Parse either format: JSON if the first non-blank character is `{`.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

fn parse_classes(value: &str) -> std::result::Result<Vec<Vec<String>>, String> {
    let mut classes = Vec::new();
    let mut rest = value.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('{') else {
            return Err(format!("expected '{{' to open a class, found '{rest}'"));
        };
        let Some(end) = body.find('}') else {
            return Err("unclosed '{'".into());
        };
        classes.push(body[..end].split_whitespace().map(String::from).collect());
        rest = body[end + 1..].trim_start();
    }
    Ok(classes)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
        }
    }

    fn classes(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}
