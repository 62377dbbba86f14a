use super::{Formula, Modality};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Box(Modality),
    Dia(Modality),
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Atom(a) => format!("atom `{a}`"),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Implies => "`->`".into(),
        Tok::Box(m) => format!("`[{m}]`"),
        Tok::Dia(m) => format!("`<{m}>`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Implies
                } else {
                    return Err(err(start, "expected `->`"));
                }
            }
            b'[' | b'<' => {
                let close = if c == b'[' { b']' } else { b'>' };
                let m = match bytes.get(i + 1) {
                    Some(b'a') => Modality::A,
                    Some(b'b') => Modality::B,
                    _ => return Err(err(start, "expected modality `a` or `b`")),
                };
                if bytes.get(i + 2) != Some(&close) {
                    return Err(err(start, format!("expected `{}`", close as char)));
                }
                i += 3;
                if c == b'[' {
                    Tok::Box(m)
                } else {
                    Tok::Dia(m)
                }
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Atom(name.to_string()),
                }
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Not => Ok(Formula::neg(self.unary()?)),
            Tok::Box(m) => Ok(Formula::boxed(m, self.unary()?)),
            Tok::Dia(m) => Ok(Formula::diamond(m, self.unary()?)),
            Tok::Atom(name) => Ok(Formula::atom(&name)),
            Tok::True => Ok(Formula::top()),
            Tok::False => Ok(Formula::falsum()),
            Tok::LParen => {
                let inner = self.implication()?;
                let close_at = self.offset();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    t => Err(err(close_at, format!("expected `)`, found {}", describe(&t)))),
                }
            }
            t => Err(err(at, format!("expected a formula, found {}", describe(&t)))),
        }
    }
}

/// Parses the text syntax, eliminating `true`, `|`, `->` and the diamonds.
///
/// Precedence from tightest: `~`, `[x]`, `<x>`; then `&`; then `|`; then
/// `->`, which associates to the right.
pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let f = p.implication()?;
    let at = p.offset();
    match p.peek() {
        Tok::End => Ok(f),
        t => Err(err(at, format!("unexpected {} after formula", describe(t)))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn eliminates_derived_connectives() {
        assert_eq!(parse("true").unwrap(), Formula::top());
        assert_eq!(
            parse("p | q").unwrap(),
            Formula::neg(Formula::and(Formula::neg(p()), Formula::neg(Formula::atom("q"))))
        );
        assert_eq!(parse("<a>p").unwrap(), Formula::neg(Formula::box_a(Formula::neg(p()))));
        assert_eq!(
            parse("[a]([b]p) -> [a]p").unwrap(),
            Formula::neg(Formula::and(
                Formula::box_a(Formula::box_b(p())),
                Formula::neg(Formula::box_a(p()))
            ))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("p & q | r").unwrap(), parse("(p & q) | r").unwrap());
        assert_eq!(parse("p -> q -> r").unwrap(), parse("p -> (q -> r)").unwrap());
        assert_eq!(parse("~p & q").unwrap(), parse("(~p) & q").unwrap());
        assert_eq!(parse("[a]p & q").unwrap(), parse("([a]p) & q").unwrap());
        assert_eq!(parse("p & q & r").unwrap(), parse("(p & q) & r").unwrap());
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse(" [a] \n p->q ").unwrap(), parse("[a]p -> q").unwrap());
    }

    #[test]
    fn atoms_allow_digits_and_underscores() {
        assert_eq!(parse("p_1x").unwrap(), Formula::atom("p_1x"));
    }

    #[test]
    fn errors_report_position() {
        assert_eq!(parse("p &").unwrap_err().position, 3);
        assert_eq!(parse("[c]p").unwrap_err().position, 0);
        assert_eq!(parse("(p").unwrap_err().position, 2);
        assert_eq!(parse("p q").unwrap_err().position, 2);
        assert_eq!(parse("P").unwrap_err().position, 0);
        assert!(parse("").is_err());
    }
}
