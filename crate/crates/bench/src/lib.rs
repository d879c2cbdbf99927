//! Benchmark inputs shared by the criterion targets.

use papal_core::model::gen_ab_chain;
use papal_core::qbf::{parse_qbf, Qbf};
use papal_core::EpistemicModel;

/// An a/b chain of `len` states with `p` on every third state.
pub fn chain(len: usize) -> EpistemicModel {
    let pattern: String = (0..len).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
    gen_ab_chain(len, &pattern, "a").unwrap()
}

/// Alternating prefix `forall x1 exists x2 ...` over a chain of
/// equivalences `(x1 <-> x2) | (x2 <-> ~x3) | ...`.
pub fn alternating_qbf(k: usize) -> Qbf {
    let mut text = String::new();
    for i in 1..=k {
        let q = if i % 2 == 1 { "forall" } else { "exists" };
        text.push_str(&format!("{q} x{i}\n"));
    }
    let clauses: Vec<String> = (1..k)
        .map(|i| if i % 2 == 1 { format!("(x{i} <-> x{})", i + 1) } else { format!("(x{i} <-> ~x{})", i + 1) })
        .collect();
    let matrix = if clauses.is_empty() { "x1 | ~x1".to_string() } else { clauses.join(" & ") };
    text.push_str(&format!("matrix: {matrix}\n"));
    parse_qbf(&text).unwrap()
}
