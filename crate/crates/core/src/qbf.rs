//! Prenex QBF and its reduction to positive-announcement model checking.
//!
//! Each boolean variable `x_i` becomes a pair of states `(s_i,0)`, `(s_i,1)`
//! in a one-agent model with the universal relation, plus an anchor state
//! `s`. Deciding `x_i` means announcing away exactly one state of the pair;
//! `X_i = L j xp_i` then reads "`x_i` is true".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::checker::{holds, CheckConfig};
use crate::error::{Error, Result};
use crate::model::{EpistemicModel, PointedModel, StateSet};
use crate::syntax::Formula;

/// Largest number of variables `solve` accepts by default; the encoding has
/// `2k + 1` states.
pub const DEFAULT_QBF_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

/// `Q1 x1 … Qk xk φ` with a boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
}

impl Qbf {
    /// Checks that the prefix is nonempty with distinct variables, that the
    /// matrix is boolean, and that every matrix variable is bound.
    pub fn new(prefix: Vec<(Quantifier, String)>, matrix: Formula) -> Result<Self> {
        let q = Qbf { prefix, matrix };
        q.check(0)?;
        Ok(q)
    }

    fn check(&self, line: usize) -> Result<()> {
        let err = |message: String| Error::QbfSyntax { line, message };
        if self.prefix.is_empty() {
            return Err(err("empty quantifier prefix".into()));
        }
        let mut bound = BTreeSet::new();
        for (_, x) in &self.prefix {
            if !bound.insert(x.as_str()) {
                return Err(err(format!("variable '{x}' is quantified twice")));
            }
        }
        if !is_boolean(&self.matrix) {
            return Err(err("matrix may only use ~, &, |, ->, <->, true, false".into()));
        }
        if let Some(x) = self.matrix.vars().iter().find(|x| !bound.contains(x.as_str())) {
            return Err(err(format!("variable '{x}' is not bound by the prefix")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, x) in &self.prefix {
            writeln!(f, "{q} {x}")?;
        }
        write!(f, "matrix: {}", self.matrix)
    }
}

fn is_boolean(f: &Formula) -> bool {
    use Formula::*;
    match f {
        Top | Bottom | Atom(_) => true,
        Not(g) => is_boolean(g),
        And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r) => is_boolean(l) && is_boolean(r),
        _ => false,
    }
}

/// Parse either the line format
///
/// ```text
/// # comment
/// forall x1
/// exists x2 x3
/// matrix: x1 <-> (x2 | ~x3)
/// ```
///
/// or QDIMACS (prenex CNF; variable `n` is named `xn`, free variables are
/// existential and outermost).
pub fn parse_qbf(text: &str) -> Result<Qbf> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("p ") => parse_qdimacs(text),
        _ => parse_lines(text),
    }
}

fn parse_lines(text: &str) -> Result<Qbf> {
    let mut prefix = Vec::new();
    let mut matrix: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((_, m)) = &mut matrix {
            // Continuation lines of a long matrix.
            m.push(' ');
            m.push_str(content);
            continue;
        }
        if let Some(rest) = content.strip_prefix("matrix:") {
            matrix = Some((line, rest.trim().to_string()));
            continue;
        }
        let mut current = None;
        for tok in content.split_whitespace() {
            match tok {
                "forall" => current = Some(Quantifier::Forall),
                "exists" => current = Some(Quantifier::Exists),
                x => {
                    let q = current.ok_or_else(|| Error::QbfSyntax {
                        line,
                        message: format!("expected 'forall', 'exists' or 'matrix:', found '{x}'"),
                    })?;
                    if !crate::syntax::is_atom_name(x) {
                        return Err(Error::QbfSyntax {
                            line,
                            message: format!("'{x}' is not a valid variable name"),
                        });
                    }
                    prefix.push((q, x.to_string()));
                }
            }
        }
    }
    let (line, m) = matrix.ok_or_else(|| Error::QbfSyntax {
        line: text.lines().count().max(1),
        message: "missing 'matrix:' line".into(),
    })?;
    let matrix: Formula = m.parse().map_err(|e: crate::syntax::ParseError| Error::QbfSyntax {
        line,
        message: e.to_string(),
    })?;
    let q = Qbf { prefix, matrix };
    q.check(line)?;
    Ok(q)
}

fn parse_qdimacs(text: &str) -> Result<Qbf> {
    let mut declared = 0usize;
    let mut prefix: Vec<(Quantifier, String)> = Vec::new();
    let mut clauses: Vec<Formula> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        let err = |message: String| Error::QbfSyntax { line, message };
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("p") => {
                let fields: Vec<&str> = toks.collect();
                match fields.as_slice() {
                    ["cnf", v, _c] => {
                        declared = v.parse().map_err(|_| err(format!("bad variable count '{v}'")))?;
                    }
                    _ => return Err(err("expected 'p cnf <vars> <clauses>'".into())),
                }
            }
            Some(q @ ("a" | "e")) => {
                let quant = if q == "a" { Quantifier::Forall } else { Quantifier::Exists };
                for t in toks {
                    let v: usize = t.parse().map_err(|_| err(format!("bad variable '{t}'")))?;
                    if v == 0 {
                        break;
                    }
                    if v > declared {
                        return Err(err(format!("variable {v} exceeds the declared {declared}")));
                    }
                    prefix.push((quant, format!("x{v}")));
                }
            }
            Some(first) => {
                for t in std::iter::once(first).chain(toks) {
                    let lit: i64 = t.parse().map_err(|_| err(format!("bad literal '{t}'")))?;
                    if lit == 0 {
                        clauses.push(clause(&current));
                        current.clear();
                    } else {
                        if lit.unsigned_abs() as usize > declared {
                            return Err(err(format!("literal {lit} exceeds the declared {declared} variables")));
                        }
                        current.push(lit);
                    }
                }
            }
            None => {}
        }
    }
    if !current.is_empty() {
        clauses.push(clause(&current));
    }
    let matrix = Formula::conjunction(clauses);
    let bound: BTreeSet<String> = prefix.iter().map(|(_, x)| x.clone()).collect();
    let free: Vec<(Quantifier, String)> = matrix
        .vars()
        .into_iter()
        .filter(|x| !bound.contains(x))
        .map(|x| (Quantifier::Exists, x))
        .collect();
    let prefix = free.into_iter().chain(prefix).collect();
    let q = Qbf { prefix, matrix };
    q.check(0)?;
    Ok(q)
}

fn clause(lits: &[i64]) -> Formula {
    Formula::disjunction(lits.iter().map(|&l| {
        let x = Formula::atom(format!("x{}", l.unsigned_abs()));
        if l < 0 {
            Formula::not(x)
        } else {
            x
        }
    }))
}

/// Truth of `q` by expanding every quantifier.
pub fn eval_brute(q: &Qbf) -> bool {
    fn go(q: &Qbf, i: usize, env: &mut BTreeMap<String, bool>) -> bool {
        let Some((quant, x)) = q.prefix.get(i) else {
            return eval_bool(&q.matrix, env);
        };
        let branch = |v: bool, env: &mut BTreeMap<String, bool>| {
            env.insert(x.clone(), v);
            go(q, i + 1, env)
        };
        match quant {
            Quantifier::Forall => branch(false, env) && branch(true, env),
            Quantifier::Exists => branch(false, env) || branch(true, env),
        }
    }
    go(q, 0, &mut BTreeMap::new())
}

fn eval_bool(f: &Formula, env: &BTreeMap<String, bool>) -> bool {
    use Formula::*;
    match f {
        Top => true,
        Bottom => false,
        Atom(x) => env[x],
        Not(g) => !eval_bool(g, env),
        And(l, r) => eval_bool(l, env) && eval_bool(r, env),
        Or(l, r) => eval_bool(l, env) || eval_bool(r, env),
        Implies(l, r) => !eval_bool(l, env) || eval_bool(r, env),
        Iff(l, r) => eval_bool(l, env) == eval_bool(r, env),
        _ => unreachable!("matrix checked to be boolean"),
    }
}

/// The agent of the encoding.
pub const AGENT: &str = "j";

fn plus(i: usize) -> String {
    format!("xp{i}")
}

fn minus(i: usize) -> String {
    format!("xm{i}")
}

/// The model `M^Ψ`: states `s`, then `s{i}_0`, `s{i}_1` for each variable in
/// prefix order; `xp{i}` holds at `s{i}_1`, `xm{i}` at `s{i}_0`, `x0` at `s`;
/// one agent `j` with the universal relation. Pointed at `s`.
pub fn encoding_model(k: usize) -> PointedModel {
    let mut states = vec!["s".to_string()];
    let mut atoms = vec!["x0".to_string()];
    let mut valuation = vec![vec![0]];
    for i in 1..=k {
        states.push(format!("s{i}_0"));
        states.push(format!("s{i}_1"));
        atoms.push(plus(i));
        atoms.push(minus(i));
        valuation.push(vec![2 * i]);
        valuation.push(vec![2 * i - 1]);
    }
    let n = states.len();
    let model = EpistemicModel::from_parts(
        vec![AGENT.to_string()],
        atoms,
        states,
        vec![vec![(0..n).collect()]],
        valuation,
    )
    .expect("encoding model is well formed");
    PointedModel { model, point: 0 }
}

fn l(atom: String) -> Formula {
    Formula::poss(AGENT, Formula::atom(atom))
}

fn x(i: usize) -> Formula {
    l(plus(i))
}

fn x_bar(i: usize) -> Formula {
    l(minus(i))
}

fn u(i: usize) -> Formula {
    if i == 0 {
        l("x0".into())
    } else {
        Formula::and(x(i), x_bar(i))
    }
}

fn d(i: usize) -> Formula {
    Formula::iff(x(i), Formula::not(x_bar(i)))
}

/// `U_0 ∧ ⋀_{i≤n} D_i ∧ ⋀_{n<i≤k} U_i`
fn guard(n: usize, k: usize) -> Formula {
    let parts = std::iter::once(u(0))
        .chain((1..=n).map(d))
        .chain((n + 1..=k).map(u));
    Formula::conjunction(parts)
}

/// `(M^Ψ, f(Ψ))`: `M^Ψ_s ⊨ f(Ψ)` iff `Ψ` is true. The matrix keeps its
/// shape, with `x_i` replaced by `X_i`.
pub fn encode(q: &Qbf) -> (PointedModel, Formula) {
    let k = q.len();
    let subst: BTreeMap<String, Formula> = q
        .prefix
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (v.clone(), x(i + 1)))
        .collect();
    let mut f = Formula::and(guard(k, k), q.matrix.substitute(&subst, &BTreeMap::new()));
    for (n, (quant, _)) in q.prefix.iter().enumerate().rev() {
        let n = n + 1;
        f = match quant {
            Quantifier::Forall => Formula::box_pos(Formula::implies(guard(n, k), f)),
            Quantifier::Exists => Formula::dia_pos(Formula::and(guard(n, k), f)),
        };
    }
    (encoding_model(k), f)
}

/// Decide `q` by model checking its encoding. `cap` bounds the number of
/// variables.
pub fn solve(q: &Qbf, cap: usize) -> Result<bool> {
    if q.len() > cap {
        return Err(Error::InvalidArgument(format!(
            "QBF has {} variables, above the cap of {cap}",
            q.len()
        )));
    }
    let (pm, f) = encode(q);
    let cfg = CheckConfig {
        state_cap: pm.model.len().max(crate::relations::DEFAULT_STATE_CAP),
        nesting_cap: q.len().max(1),
        ..CheckConfig::default()
    };
    holds(&pm, &f, &cfg)
}

/// For a restriction of `M^Ψ` containing `s`: which variables are decided
/// (exactly one state of the pair left) and to what value, or `None` when
/// some pair is gone entirely.
pub fn read_assignment(k: usize, t: &StateSet) -> Option<Vec<Option<bool>>> {
    (1..=k)
        .map(|i| match (t.contains(2 * i - 1), t.contains(2 * i)) {
            (true, true) => Some(None),
            (false, true) => Some(Some(true)),
            (true, false) => Some(Some(false)),
            (false, false) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::evaluate;

    fn q(text: &str) -> Qbf {
        parse_qbf(text).unwrap()
    }

    #[test]
    fn parse_line_format() {
        let a = q("exists x1\nmatrix: x1");
        assert_eq!(a.prefix, vec![(Quantifier::Exists, "x1".into())]);
        let b = q("forall x1 exists x2\nmatrix: x1 <-> x2");
        assert_eq!(b.len(), 2);
        assert_eq!(b.prefix[1].0, Quantifier::Exists);
        let err = parse_qbf("forall x1\nexists x2\nmatrix: x1 & x3").unwrap_err();
        assert!(err.to_string().contains("x3"), "{err}");
        assert!(parse_qbf("forall x1 x1\nmatrix: x1").is_err());
        assert!(parse_qbf("forall x1\nmatrix: K a x1").is_err());
        assert!(parse_qbf("matrix: true").is_err());
        assert_eq!(q(&b.to_string()), b);
    }

    #[test]
    fn parse_qdimacs() {
        let text = "c example\np cnf 3 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 3 0\n";
        let r = q(text);
        assert_eq!(
            r.prefix,
            vec![
                (Quantifier::Exists, "x3".into()),
                (Quantifier::Forall, "x1".into()),
                (Quantifier::Exists, "x2".into())
            ]
        );
        assert_eq!(r.matrix.to_string(), "(x1 | ~x2) & (~x1 | x2 | x3)");
        assert!(eval_brute(&r));
        assert!(parse_qbf("p cnf 1 1\ne 1 0\n2 0\n").is_err());
    }

    #[test]
    fn brute_examples() {
        assert!(!eval_brute(&q("exists x1\nmatrix: x1 & ~x1")));
        assert!(eval_brute(&q("forall x1\nmatrix: x1 | ~x1")));
    }

    #[test]
    fn encoding_shape() {
        let pm = encoding_model(2);
        let m = &pm.model;
        assert_eq!(m.len(), 5);
        assert_eq!(m.partition(0).len(), 1);
        assert_eq!(m.names(m.valuation(m.atom_index("xp2").unwrap())), ["s2_1"]);
        assert_eq!(m.names(m.valuation(m.atom_index("xm1").unwrap())), ["s1_0"]);
        assert_eq!(m.names(m.valuation(m.atom_index("x0").unwrap())), ["s"]);
        let (_, f) = encode(&q("exists x1\nmatrix: x1"));
        let expected: Formula =
            "dia+ (L j x0 & (L j xp1 <-> ~L j xm1) & (L j x0 & (L j xp1 <-> ~L j xm1) & L j xp1))"
                .parse()
                .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn solve_examples() {
        for (text, want) in [
            ("exists x1\nmatrix: x1", true),
            ("forall x1\nmatrix: x1", false),
            ("forall x1 exists x2\nmatrix: x1 <-> x2", true),
            ("exists x1 forall x2\nmatrix: x1 <-> x2", false),
        ] {
            let qq = q(text);
            assert_eq!(solve(&qq, DEFAULT_QBF_CAP).unwrap(), want, "{text}");
            assert_eq!(eval_brute(&qq), want);
        }
        let big = q("forall x1 x2 x3 x4 x5 x6 x7 x8 x9\nmatrix: true");
        assert!(solve(&big, DEFAULT_QBF_CAP).is_err());
    }

    #[test]
    fn witnesses_decide_one_variable_per_step() {
        let qq = q("exists x1 x2\nmatrix: x1 & ~x2");
        let (pm, f) = encode(&qq);
        let r = evaluate(&pm, &f, &CheckConfig::default()).unwrap();
        let w = r.witness.unwrap();
        let chain = w.chain();
        assert_eq!(chain.len(), 2);
        assert_eq!(read_assignment(2, &chain[0].set), Some(vec![Some(true), None]));
        assert_eq!(read_assignment(2, &chain[1].set), Some(vec![Some(true), Some(false)]));
    }
}
