use std::fmt::{self, Write};

use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Writes `f`, parenthesised when its precedence is below `min`.
fn write_at<W: Write>(out: &mut W, f: &Formula, min: u8) -> fmt::Result {
    if precedence(f) < min {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

fn write_binary<W: Write>(
    out: &mut W,
    l: &Formula,
    op: &str,
    r: &Formula,
    prec: u8,
    right_assoc: bool,
) -> fmt::Result {
    let (lmin, rmin) = if right_assoc {
        (prec + 1, prec)
    } else {
        (prec, prec + 1)
    };
    write_at(out, l, lmin)?;
    write!(out, " {op} ")?;
    write_at(out, r, rmin)
}

pub(super) fn write_formula<W: Write>(out: &mut W, f: &Formula) -> fmt::Result {
    use Formula::*;
    match f {
        Top => out.write_str("true"),
        Bottom => out.write_str("false"),
        Atom(p) => out.write_str(p),
        Not(g) => {
            out.write_char('~')?;
            write_at(out, g, UNARY)
        }
        And(l, r) => write_binary(out, l, "&", r, AND, false),
        Or(l, r) => write_binary(out, l, "|", r, OR, false),
        Implies(l, r) => write_binary(out, l, "->", r, IMPLIES, true),
        Iff(l, r) => write_binary(out, l, "<->", r, IFF, false),
        Know(a, g) => {
            write!(out, "K {a} ")?;
            write_at(out, g, UNARY)
        }
        Poss(a, g) => {
            write!(out, "L {a} ")?;
            write_at(out, g, UNARY)
        }
        Announce(a, g) => {
            out.write_char('[')?;
            write_formula(out, a)?;
            out.write_char(']')?;
            write_at(out, g, UNARY)
        }
        AnnounceDual(a, g) => {
            out.write_char('<')?;
            write_formula(out, a)?;
            out.write_char('>')?;
            write_at(out, g, UNARY)
        }
        BoxApal(g) => {
            out.write_str("box ")?;
            write_at(out, g, UNARY)
        }
        DiaApal(g) => {
            out.write_str("dia ")?;
            write_at(out, g, UNARY)
        }
        BoxPos(g) => {
            out.write_str("box+ ")?;
            write_at(out, g, UNARY)
        }
        DiaPos(g) => {
            out.write_str("dia+ ")?;
            write_at(out, g, UNARY)
        }
    }
}
