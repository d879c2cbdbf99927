use std::fmt;

use super::Formula;

const KEYWORDS: &[&str] = &["K", "L", "box", "dia", "true", "false"];

pub(crate) fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

/// Syntax error with a 1-based source position and the set of tokens that
/// would have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at {}:{}: found {}, expected one of: {}",
            self.line,
            self.column,
            self.found,
            self.expected.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    BoxPlus,
    DiaPlus,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::BoxPlus => "`box+`".into(),
            Tok::DiaPlus => "`dia+`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let push = |tok: Tok, width: usize, out: &mut Vec<Spanned>| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            width
        };
        let width = match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => 1,
            '~' => push(Tok::Tilde, 1, &mut out),
            '&' => push(Tok::Amp, 1, &mut out),
            '|' => push(Tok::Bar, 1, &mut out),
            '[' => push(Tok::LBracket, 1, &mut out),
            ']' => push(Tok::RBracket, 1, &mut out),
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            '>' => push(Tok::RAngle, 1, &mut out),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut out),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::DoubleArrow, 3, &mut out)
            }
            '<' => push(Tok::LAngle, 1, &mut out),
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if (word == "box" || word == "dia") && chars.get(j) == Some(&'+') {
                    let tok = if word == "box" { Tok::BoxPlus } else { Tok::DiaPlus };
                    push(tok, j - i + 1, &mut out)
                } else {
                    push(Tok::Word(word), j - i, &mut out)
                }
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    found: format!("`{other}`"),
                    expected: vec!["a formula token".into()],
                })
            }
        };
        i += width;
        column += width;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const FORMULA_START: &[&str] = &[
    "atom", "`~`", "`K`", "`L`", "`[`", "`<`", "`box`", "`dia`", "`box+`", "`dia+`", "`true`",
    "`false`", "`(`",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            found: here.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Word(w) if super::is_agent_name(&w) => {
                self.bump();
                Ok(w)
            }
            _ => Err(self.error(&["agent name"])),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxPlus => {
                self.bump();
                Ok(Formula::box_pos(self.unary()?))
            }
            Tok::DiaPlus => {
                self.bump();
                Ok(Formula::dia_pos(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let ann = self.formula()?;
                self.expect(Tok::RBracket)?;
                Ok(Formula::announce(ann, self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let ann = self.formula()?;
                self.expect(Tok::RAngle)?;
                Ok(Formula::announce_dual(ann, self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Word(w) => match w.as_str() {
                "K" | "L" => {
                    self.bump();
                    let agent = self.agent()?;
                    let body = self.unary()?;
                    Ok(if w == "K" {
                        Formula::know(agent, body)
                    } else {
                        Formula::poss(agent, body)
                    })
                }
                "box" => {
                    self.bump();
                    Ok(Formula::box_apal(self.unary()?))
                }
                "dia" => {
                    self.bump();
                    Ok(Formula::dia_apal(self.unary()?))
                }
                "true" => {
                    self.bump();
                    Ok(Formula::Top)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::Bottom)
                }
                _ if super::is_atom_name(&w) => {
                    self.bump();
                    Ok(Formula::Atom(w))
                }
                _ => Err(self.error(FORMULA_START)),
            },
            _ => Err(self.error(FORMULA_START)),
        }
    }
}

/// Parse a formula in the ASCII grammar.
///
/// Unary operators (`~`, `K a`, `L a`, `[φ]`, `<φ>`, `box`, `dia`, `box+`,
/// `dia+`) bind tightest, then `&`, `|`, `->` (right-associative) and `<->`.
/// `&`, `|` and `<->` associate to the left.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn know_atom() {
        assert_eq!(p("K a p"), Formula::know("a", Formula::atom("p")));
    }

    #[test]
    fn composability_body() {
        let expected = Formula::dia_pos(Formula::and(
            Formula::poss("a", Formula::atom("q")),
            Formula::know(
                "a",
                Formula::or(
                    Formula::know("b", Formula::atom("q")),
                    Formula::know("b", Formula::not(Formula::atom("q"))),
                ),
            ),
        ));
        assert_eq!(p("dia+ (L a q & K a (K b q | K b ~q))"), expected);
    }

    #[test]
    fn trailing_operator_is_an_error() {
        let err = parse("K a p &").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"atom".to_string()));
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Formula::atom("a"), Formula::atom("b"), Formula::atom("c"));
        assert_eq!(
            p("a | b & c"),
            Formula::or(a.clone(), Formula::and(b.clone(), c.clone()))
        );
        assert_eq!(
            p("a -> b -> c"),
            Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            p("a & b & c"),
            Formula::and(Formula::and(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            p("a <-> b -> c"),
            Formula::iff(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            p("~a & b"),
            Formula::and(Formula::not(a.clone()), b.clone())
        );
        assert_eq!(
            p("[a]b & c"),
            Formula::and(Formula::announce(a.clone(), b.clone()), c)
        );
    }

    #[test]
    fn announcements_and_quantifiers() {
        assert_eq!(
            p("<p -> q>r"),
            Formula::announce_dual(
                Formula::implies(Formula::atom("p"), Formula::atom("q")),
                Formula::atom("r")
            )
        );
        assert_eq!(p("box dia p"), Formula::box_apal(Formula::dia_apal(Formula::atom("p"))));
        assert_eq!(p("box+dia+p"), Formula::box_pos(Formula::dia_pos(Formula::atom("p"))));
        assert_eq!(p("true & false"), Formula::and(Formula::Top, Formula::Bottom));
    }

    #[test]
    fn multiline_error_position() {
        let err = parse("p &\n  (q | )").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
    }

    #[test]
    fn rejects_uppercase_atoms_and_stray_chars() {
        assert!(parse("P").is_err());
        assert!(parse("p $ q").is_err());
        assert!(parse("K p").is_err());
        assert!(parse("(p").is_err());
        assert!(parse("").is_err());
    }
}
