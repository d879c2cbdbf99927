use super::{EpistemicModel, ModelDescription, PointedModel};
use crate::error::{Error, Result};

fn names<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn classes(groups: &[&[&str]]) -> Vec<Vec<String>> {
    groups
        .iter()
        .map(|g| g.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn pointed(d: ModelDescription) -> PointedModel {
    d.build_pointed().expect("built-in fixtures are valid")
}

/// A line of states `0..length` with alternating two-element a/b classes,
/// the first link (between states 0 and 1) belonging to `first_link`. `p`
/// holds at state `i` iff `p_pattern[i] == '1'`.
pub fn gen_ab_chain(length: usize, p_pattern: &str, first_link: &str) -> Result<EpistemicModel> {
    if length == 0 {
        return Err(Error::InvalidArgument("chain length must be at least 1".into()));
    }
    if p_pattern.chars().count() != length {
        return Err(Error::InvalidArgument(format!(
            "pattern '{p_pattern}' has length {}, expected {length}",
            p_pattern.chars().count()
        )));
    }
    if let Some(c) = p_pattern.chars().find(|c| !matches!(c, '0' | '1')) {
        return Err(Error::InvalidArgument(format!("pattern character '{c}' is not 0 or 1")));
    }
    let other = match first_link {
        "a" => "b",
        "b" => "a",
        _ => {
            return Err(Error::InvalidArgument(format!(
                "first link must be agent 'a' or 'b', not '{first_link}'"
            )))
        }
    };
    let states: Vec<String> = (0..length).map(|i| i.to_string()).collect();
    let mut d = ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p"]),
        states: states.clone(),
        ..Default::default()
    };
    for (i, c) in p_pattern.chars().enumerate() {
        if c == '1' {
            d.val.insert(states[i].clone(), names(["p"]));
        }
    }
    // Link i–(i+1) belongs to `first_link` when i is even.
    for (agent, parity) in [(first_link, 0), (other, 1)] {
        let mut cls = Vec::new();
        let mut i = 0;
        while i < length {
            if i % 2 == parity && i + 1 < length {
                cls.push(vec![states[i].clone(), states[i + 1].clone()]);
                i += 2;
            } else {
                cls.push(vec![states[i].clone()]);
                i += 1;
            }
        }
        d.rel.insert(agent.to_string(), cls);
    }
    d.build()
}

/// Two-state model `s{p} –a– t{}` (agents a, b; b is the identity).
pub fn expr_m() -> PointedModel {
    pointed(ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p"]),
        states: names(["s", "t"]),
        val: [("s".into(), names(["p"]))].into(),
        rel: [
            ("a".into(), classes(&[&["s", "t"]])),
            ("b".into(), classes(&[&["s"], &["t"]])),
        ]
        .into(),
        links: Default::default(),
        point: Some("s".into()),
    })
}

/// Four-state square: `s'{p,q} –a– t'{}` above `u'{p,q} –a– v'{q}`, with
/// b-links `s'–u'` and `t'–v'`. Announcing `q` removes `t'`.
pub fn expr_mprime() -> PointedModel {
    pointed(ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p", "q"]),
        states: names(["s'", "t'", "u'", "v'"]),
        val: [
            ("s'".into(), names(["p", "q"])),
            ("u'".into(), names(["p", "q"])),
            ("v'".into(), names(["q"])),
        ]
        .into(),
        rel: [
            ("a".into(), classes(&[&["s'", "t'"], &["u'", "v'"]])),
            ("b".into(), classes(&[&["s'", "u'"], &["t'", "v'"]])),
        ]
        .into(),
        links: Default::default(),
        point: Some("s'".into()),
    })
}

/// The nine-state counterexample to composability of positive
/// announcements, pointed at `s`.
pub fn compose9() -> PointedModel {
    let p_states = ["s", "t", "u", "v", "s'", "t'", "u'", "v'"];
    let q_states = ["t", "v", "s'", "t'", "v'"];
    let states = names(["s", "t", "u", "v", "w", "s'", "t'", "u'", "v'"]);
    let val = states
        .iter()
        .filter_map(|s| {
            let mut ps = Vec::new();
            if p_states.contains(&s.as_str()) {
                ps.push("p".to_string());
            }
            if q_states.contains(&s.as_str()) {
                ps.push("q".to_string());
            }
            (!ps.is_empty()).then(|| (s.clone(), ps))
        })
        .collect();
    pointed(ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p", "q"]),
        states,
        val,
        rel: [
            (
                "a".into(),
                classes(&[&["s", "t", "s'", "t'"], &["u", "v", "w"], &["u'", "v'"]]),
            ),
            (
                "b".into(),
                classes(&[&["s", "s'"], &["t", "u"], &["t'", "u'"], &["v"], &["w"], &["v'"]]),
            ),
        ]
        .into(),
        links: Default::default(),
        point: Some("s".into()),
    })
}

/// Finite truncation of the two-legged chain: upper leg `0..=upper`, lower
/// leg `0'..=lower'`, a-links `(2i, 2i+1)` on both legs, b-links
/// `(2i+1, 2i+2)` on both legs plus `0–0'`; `p` holds at `0` and `0'`.
pub fn two_leg_chain(lower: usize, upper: usize) -> PointedModel {
    let up: Vec<String> = (0..=upper).map(|i| i.to_string()).collect();
    let down: Vec<String> = (0..=lower).map(|i| format!("{i}'")).collect();
    let mut a = Vec::new();
    let mut b = vec![vec![up[0].clone(), down[0].clone()]];
    for leg in [&up, &down] {
        let n = leg.len();
        let mut i = 0;
        while i < n {
            if i + 1 < n {
                a.push(vec![leg[i].clone(), leg[i + 1].clone()]);
            } else {
                a.push(vec![leg[i].clone()]);
            }
            i += 2;
        }
        let mut i = 1;
        while i < n {
            if i + 1 < n {
                b.push(vec![leg[i].clone(), leg[i + 1].clone()]);
            } else {
                b.push(vec![leg[i].clone()]);
            }
            i += 2;
        }
    }
    pointed(ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p"]),
        states: up.iter().chain(&down).cloned().collect(),
        val: [(up[0].clone(), names(["p"])), (down[0].clone(), names(["p"]))].into(),
        rel: [("a".into(), a), ("b".into(), b)].into(),
        links: Default::default(),
        point: Some("0".into()),
    })
}

/// States `lo..=hi` (integers, named in decimal) with a-links
/// `(2i-1, 2i)`, b-links `(2i, 2i+1)` and `p` at the odd states, pointed at 0.
/// This is the common shape of the one-edged chains; `lo <= 0 <= hi`.
fn integer_segment(lo: i64, hi: i64) -> PointedModel {
    assert!(lo <= 0 && 0 <= hi, "segment must contain 0");
    let name = |i: i64| i.to_string();
    let states: Vec<String> = (lo..=hi).map(name).collect();
    let mut a: Vec<Vec<String>> = Vec::new();
    let mut b: Vec<Vec<String>> = Vec::new();
    let mut val = std::collections::BTreeMap::new();
    for i in lo..=hi {
        if i.rem_euclid(2) == 1 {
            val.insert(name(i), names(["p"]));
        }
        // Each state joins the class opened by its lower neighbour when that
        // link belongs to the agent, otherwise starts a new class.
        let a_link_down = i.rem_euclid(2) == 0 && i > lo;
        let b_link_down = i.rem_euclid(2) == 1 && i > lo;
        for (cls, linked) in [(&mut a, a_link_down), (&mut b, b_link_down)] {
            if let (true, Some(last)) = (linked, cls.last_mut()) {
                last.push(name(i));
            } else {
                cls.push(vec![name(i)]);
            }
        }
    }
    pointed(ModelDescription {
        agents: names(["a", "b"]),
        atoms: names(["p"]),
        states,
        val,
        rel: [("a".into(), a), ("b".into(), b)].into(),
        links: Default::default(),
        point: Some("0".into()),
    })
}

/// Finite analogue of the left-edged chain: the edge `-n` lies on the
/// a-side of the point, the b-side is cut `far` states away. `n` must be odd
/// so that the edge is a `p`-state with a singleton b-class.
pub fn left_edge_chain(n: usize, far: usize) -> Result<PointedModel> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("left edge distance {n} must be odd")));
    }
    Ok(integer_segment(-(n as i64), far as i64))
}

/// Mirror image: the edge `n` lies on the b-side of the point, the a-side is
/// cut `far` states away. `n` must be even and positive.
pub fn right_edge_chain(n: usize, far: usize) -> Result<PointedModel> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "right edge distance {n} must be even and positive"
        )));
    }
    Ok(integer_segment(-(far as i64), n as i64))
}

/// Fixture names understood by [`fixture`].
pub fn fixture_names() -> &'static [&'static str] {
    &[
        "expr_M",
        "expr_Mprime",
        "compose9",
        "two_leg_chain(lower,upper)",
        "left_edge_chain(n,far)",
        "right_edge_chain(n,far)",
    ]
}

/// Look up a fixture by name, e.g. `compose9` or `two_leg_chain(4,6)`.
pub fn fixture(name: &str) -> Result<PointedModel> {
    let unknown = || Error::UnknownFixture(name.to_string());
    let name = name.trim();
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let args = inner
                .split(',')
                .map(|a| a.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| unknown())?;
            (h.trim(), args)
        }
        None => (name, vec![]),
    };
    match (head, args.as_slice()) {
        ("expr_M", []) => Ok(expr_m()),
        ("expr_Mprime", []) => Ok(expr_mprime()),
        ("compose9", []) => Ok(compose9()),
        ("two_leg_chain", &[lower, upper]) => Ok(two_leg_chain(lower, upper)),
        ("left_edge_chain", &[n, far]) => left_edge_chain(n, far),
        ("right_edge_chain", &[n, far]) => right_edge_chain(n, far),
        _ => Err(unknown()),
    }
}
