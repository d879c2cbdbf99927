use crate::syntax::Formula;

fn flatten_into(f: Formula, is_and: bool, out: &mut Vec<Formula>) {
    match (f, is_and) {
        (Formula::And(l, r), true) => {
            flatten_into(*l, true, out);
            flatten_into(*r, true, out);
        }
        (Formula::Or(l, r), false) => {
            flatten_into(*l, false, out);
            flatten_into(*r, false, out);
        }
        (g, _) => out.push(g),
    }
}

/// Cheap local rewriting: unit and zero elements of `&`/`|`, duplicate
/// operands, absorption (`a & (a | b) = a`, `a | (a & b) = a`), and `K`/`L`
/// of constants. Positive formulas stay positive.
pub fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        And(..) | Or(..) => {
            let is_and = matches!(f, And(..));
            let mut parts = Vec::new();
            flatten_into(f.clone(), is_and, &mut parts);
            let (unit, zero) = if is_and { (Top, Bottom) } else { (Bottom, Top) };
            let mut kept: Vec<Formula> = Vec::new();
            for p in parts {
                let mut sub = Vec::new();
                flatten_into(simplify(&p), is_and, &mut sub);
                for q in sub {
                    if q == zero {
                        return zero;
                    }
                    if q != unit && !kept.contains(&q) {
                        kept.push(q);
                    }
                }
            }
            // Absorption: drop an operand of the dual connective that
            // contains another operand as one of its own operands.
            let absorbed: Vec<bool> = kept
                .iter()
                .map(|k| {
                    let mut inner = Vec::new();
                    flatten_into(k.clone(), !is_and, &mut inner);
                    inner.len() > 1 && kept.iter().any(|other| other != k && inner.contains(other))
                })
                .collect();
            let kept = kept
                .into_iter()
                .zip(absorbed)
                .filter(|(_, a)| !a)
                .map(|(k, _)| k);
            if is_and {
                Formula::conjunction(kept)
            } else {
                Formula::disjunction(kept)
            }
        }
        Know(a, g) => match simplify(g) {
            Top => Top,
            h => Formula::know(a.clone(), h),
        },
        Poss(a, g) => match simplify(g) {
            Bottom => Bottom,
            h => Formula::poss(a.clone(), h),
        },
        Not(g) => match simplify(g) {
            Top => Bottom,
            Bottom => Top,
            Not(h) => *h,
            h => Formula::not(h),
        },
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> String {
        simplify(&text.parse().unwrap()).to_string()
    }

    #[test]
    fn rules() {
        assert_eq!(s("p & true & p"), "p");
        assert_eq!(s("p | false | q | p"), "p | q");
        assert_eq!(s("p & (p | q)"), "p");
        assert_eq!(s("p | (q & p) | r"), "p | r");
        assert_eq!(s("K a true & q"), "q");
        assert_eq!(s("p & false"), "false");
        assert_eq!(s("(p & q) & (r & p)"), "p & q & r");
        assert_eq!(s("~~p"), "p");
        assert_eq!(s("~~(p & q)"), "p & q");
    }
}
