use std::fmt::{self, Write};

use super::{Formula, Kind, Modality};

// Binding strength, loosest first.
const IMP: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

enum View<'a> {
    Top,
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Dia(Modality, &'a Formula),
    Not(&'a Formula),
}

fn view_neg(inner: &Formula) -> View<'_> {
    match inner.kind() {
        Kind::Falsum => View::Top,
        Kind::And(l, r) => match (l.as_neg(), r.as_neg()) {
            // `~x & ~y` with `x` shaped like `u & ~v` reads better as `(u -> v) -> y`
            (Some(nl), Some(nr)) if !matches!(nl.kind(), Kind::And(_, v) if v.as_neg().is_some()) => {
                View::Or(nl, nr)
            }
            (_, Some(r)) => View::Implies(l, r),
            _ => View::Not(inner),
        },
        Kind::BoxA(g) | Kind::BoxB(g) => match g.as_neg() {
            Some(h) => View::Dia(inner.as_box().unwrap().0, h),
            None => View::Not(inner),
        },
        _ => View::Not(inner),
    }
}

fn level(f: &Formula) -> u8 {
    match f.kind() {
        Kind::And(..) => AND,
        Kind::Neg(inner) => match view_neg(inner) {
            View::Or(..) => OR,
            View::Implies(..) => IMP,
            _ => UNARY,
        },
        _ => UNARY,
    }
}

fn write_at(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    match f.kind() {
        Kind::Atom(name) => out.write_str(name),
        Kind::Falsum => out.write_str("false"),
        Kind::And(l, r) => {
            write_at(out, l, AND)?;
            out.write_str(" & ")?;
            write_at(out, r, UNARY)
        }
        Kind::BoxA(c) => {
            out.write_str("[a]")?;
            write_at(out, c, UNARY)
        }
        Kind::BoxB(c) => {
            out.write_str("[b]")?;
            write_at(out, c, UNARY)
        }
        Kind::Neg(inner) => match view_neg(inner) {
            View::Top => out.write_str("true"),
            View::Or(l, r) => {
                write_at(out, l, OR)?;
                out.write_str(" | ")?;
                write_at(out, r, AND)
            }
            View::Implies(l, r) => {
                write_at(out, l, OR)?;
                out.write_str(" -> ")?;
                write_at(out, r, IMP)
            }
            View::Dia(m, g) => {
                write!(out, "<{m}>")?;
                write_at(out, g, UNARY)
            }
            View::Not(g) => {
                out.write_char('~')?;
                write_at(out, g, UNARY)
            }
        },
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::parse;

    fn show(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn reintroduces_sugar() {
        assert_eq!(show("<a>p"), "<a>p");
        assert_eq!(show("~[a]~p"), "<a>p");
        assert_eq!(show("p | q"), "p | q");
        assert_eq!(show("~(p & ~q)"), "p -> q");
        assert_eq!(show("~false"), "true");
        assert_eq!(show("~(p & q)"), "~(p & q)");
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(show("(p & q) | r"), "p & q | r");
        assert_eq!(show("p & (q | r)"), "p & (q | r)");
        assert_eq!(show("(p -> q) -> r"), "(p -> q) -> r");
        assert_eq!(show("p -> (q -> r)"), "p -> q -> r");
        assert_eq!(show("p & (q & r)"), "p & (q & r)");
        assert_eq!(show("[a]([b]p) -> [a]p"), "[a][b]p -> [a]p");
        assert_eq!(show("[a](p & q)"), "[a](p & q)");
    }
}
