//! Logic identifiers, box-minus projections and consistent classical
//! saturations (CCS).
//!
//! A CCS of `u` is a clash-free set `w` with `u <= w <= csf(u)` that is closed
//! under the propositional tableau rules. [`enumerate_ccs`] produces them as
//! the open branches of a propositional tableau for `u`; [`is_ccs`] is the
//! clause-by-clause reference check.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{csf, Formula, FormulaSet, Kind, Modality};

/// One of the supported bimodal logics.
///
/// `de` adds weak density (`[a][b]p -> [a]p`), `four_a`/`four_b` make the
/// corresponding relation transitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LogicId {
    de: bool,
    four_a: bool,
    four_b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown logic `{0}` (expected one of kab, kab4a, kab4a4b, kde, kde4a, kde4a4b, kde4b)")]
    UnknownName(String),
    #[error("transitivity of b alone is only supported together with weak density (kde4b)")]
    Unsupported,
}

impl LogicId {
    pub const K: LogicId = LogicId { de: false, four_a: false, four_b: false };
    pub const K4A: LogicId = LogicId { de: false, four_a: true, four_b: false };
    pub const K4A4B: LogicId = LogicId { de: false, four_a: true, four_b: true };
    pub const KDE: LogicId = LogicId { de: true, four_a: false, four_b: false };
    pub const KDE4A: LogicId = LogicId { de: true, four_a: true, four_b: false };
    pub const KDE4A4B: LogicId = LogicId { de: true, four_a: true, four_b: true };
    /// Weak density with transitive `b` only. Experimental.
    pub const KDE4B: LogicId = LogicId { de: true, four_a: false, four_b: true };

    /// The six fully supported logics.
    pub const ALL: [LogicId; 6] =
        [LogicId::K, LogicId::K4A, LogicId::K4A4B, LogicId::KDE, LogicId::KDE4A, LogicId::KDE4A4B];

    pub fn from_flags(de: bool, four_a: bool, four_b: bool) -> Result<LogicId, LogicError> {
        if four_b && !four_a && !de {
            return Err(LogicError::Unsupported);
        }
        Ok(LogicId { de, four_a, four_b })
    }

    pub fn de(self) -> bool {
        self.de
    }

    pub fn four_a(self) -> bool {
        self.four_a
    }

    pub fn four_b(self) -> bool {
        self.four_b
    }

    pub fn transitive(self, m: Modality) -> bool {
        match m {
            Modality::A => self.four_a,
            Modality::B => self.four_b,
        }
    }

    pub fn is_experimental(self) -> bool {
        self == LogicId::KDE4B
    }

    pub fn name(self) -> &'static str {
        match (self.de, self.four_a, self.four_b) {
            (false, false, false) => "kab",
            (false, true, false) => "kab4a",
            (false, true, true) => "kab4a4b",
            (true, false, false) => "kde",
            (true, true, false) => "kde4a",
            (true, true, true) => "kde4a4b",
            (true, false, true) => "kde4b",
            (false, false, true) => unreachable!("rejected by from_flags"),
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicId {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kab" => Ok(LogicId::K),
            "kab4a" => Ok(LogicId::K4A),
            "kab4a4b" => Ok(LogicId::K4A4B),
            "kde" => Ok(LogicId::KDE),
            "kde4a" => Ok(LogicId::KDE4A),
            "kde4a4b" => Ok(LogicId::KDE4A4B),
            "kde4b" => Ok(LogicId::KDE4B),
            other => Err(LogicError::UnknownName(other.to_string())),
        }
    }
}

impl TryFrom<String> for LogicId {
    type Error = LogicError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<LogicId> for String {
    fn from(l: LogicId) -> String {
        l.name().to_string()
    }
}

/// What a `modality`-successor of a world satisfying `w` inherits:
/// `{f : [m]f in w}`, plus the boxes themselves when `m` is transitive.
pub fn box_minus(w: &FormulaSet, modality: Modality, logic: LogicId) -> FormulaSet {
    let keep_box = logic.transitive(modality);
    let mut out = Vec::new();
    for f in w {
        if let Some((m, body)) = f.as_box() {
            if m == modality {
                out.push(body.clone());
                if keep_box {
                    out.push(f.clone());
                }
            }
        }
    }
    FormulaSet::from_vec(out)
}

type Branch = BTreeSet<Formula>;

/// Adds `f` and everything the deterministic tableau rules derive from it.
/// Returns false on a clash.
fn grow(branch: &mut Branch, f: Formula) -> bool {
    let mut todo = vec![f];
    while let Some(f) = todo.pop() {
        if branch.contains(&f) {
            continue;
        }
        if f.is_falsum() {
            return false;
        }
        let clash = match f.as_neg() {
            Some(g) => branch.contains(g),
            None => false,
        } || branch.contains(&Formula::neg(f.clone()));
        if clash {
            return false;
        }
        match f.kind() {
            Kind::And(l, r) => {
                todo.push(r.clone());
                todo.push(l.clone());
            }
            Kind::Neg(g) => {
                if let Some(h) = g.as_neg() {
                    todo.push(h.clone());
                }
            }
            _ => {}
        }
        branch.insert(f);
    }
    true
}

/// First `~(l & r)` of the branch (canonical order) with neither `~l` nor `~r` present.
fn open_disjunction(branch: &Branch) -> Option<(Formula, Formula)> {
    for f in branch {
        if let Some(g) = f.as_neg() {
            if let Kind::And(l, r) = g.kind() {
                let nl = Formula::neg(l.clone());
                let nr = Formula::neg(r.clone());
                if !branch.contains(&nl) && !branch.contains(&nr) {
                    return Some((nl, nr));
                }
            }
        }
    }
    None
}

/// Lazy stream over the open saturated branches of the tableau for `u`.
///
/// Branch order is depth first; at each `~(l & r)` the branches `~l`, `~r`
/// and `~l, ~r` are explored in that order. Every yielded set is a CCS of
/// `u`, each appears once, and the stream is empty iff `u` has no CCS.
pub struct CcsIter {
    stack: Vec<Branch>,
    seen: HashSet<FormulaSet>,
}

impl Iterator for CcsIter {
    type Item = FormulaSet;

    fn next(&mut self) -> Option<FormulaSet> {
        while let Some(branch) = self.stack.pop() {
            match open_disjunction(&branch) {
                None => {
                    let w = FormulaSet::from_vec(branch.into_iter().collect());
                    if self.seen.insert(w.clone()) {
                        return Some(w);
                    }
                }
                Some((nl, nr)) => {
                    let mut both = branch.clone();
                    if grow(&mut both, nl.clone()) && grow(&mut both, nr.clone()) {
                        self.stack.push(both);
                    }
                    let mut right = branch.clone();
                    if grow(&mut right, nr) {
                        self.stack.push(right);
                    }
                    let mut left = branch;
                    if grow(&mut left, nl) {
                        self.stack.push(left);
                    }
                }
            }
        }
        None
    }
}

pub fn enumerate_ccs(u: &FormulaSet) -> CcsIter {
    let mut root = Branch::new();
    let mut ok = true;
    for f in u {
        if !grow(&mut root, f.clone()) {
            ok = false;
            break;
        }
    }
    CcsIter { stack: if ok { vec![root] } else { Vec::new() }, seen: HashSet::new() }
}

/// The clause check for `w` being a CCS of `u`.
pub fn is_ccs(w: &FormulaSet, u: &FormulaSet) -> bool {
    u.is_subset(w) && w.is_subset(&csf(u)) && is_saturated_consistent(w)
}

/// The closure and consistency clauses alone, without the `u <= w <= csf(u)` bounds.
pub fn is_saturated_consistent(w: &FormulaSet) -> bool {
    for f in w {
        match f.kind() {
            Kind::Falsum => return false,
            Kind::And(l, r) => {
                if !w.contains(l) || !w.contains(r) {
                    return false;
                }
            }
            Kind::Neg(g) => {
                if w.contains(g) {
                    return false;
                }
                match g.kind() {
                    Kind::And(l, r) => {
                        if !w.contains(&Formula::neg(l.clone())) && !w.contains(&Formula::neg(r.clone())) {
                            return false;
                        }
                    }
                    Kind::Neg(h)
                        if !w.contains(h) => {
                            return false;
                        }
                    _ => {}
                }
            }
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    fn all(u: &FormulaSet) -> Vec<FormulaSet> {
        enumerate_ccs(u).collect()
    }

    #[test]
    fn box_minus_examples() {
        let w = set(&["[a]p", "[b]q", "r"]);
        assert_eq!(box_minus(&w, Modality::A, LogicId::K), set(&["p"]));
        assert_eq!(box_minus(&w, Modality::A, LogicId::K4A), set(&["p", "[a]p"]));
        assert_eq!(box_minus(&w, Modality::B, LogicId::K4A), set(&["q"]));
        assert_eq!(box_minus(&w, Modality::B, LogicId::K4A4B), set(&["q", "[b]q"]));
        for logic in LogicId::ALL {
            assert!(box_minus(&set(&["p", "~[a]q"]), Modality::A, logic).is_empty());
        }
    }

    #[test]
    fn enumeration_examples() {
        assert!(all(&set(&["p", "~p"])).is_empty());
        assert_eq!(all(&set(&["p & q"])), vec![set(&["p & q", "p", "q"])]);
        assert_eq!(
            all(&set(&["~(p & q)"])),
            vec![set(&["~(p & q)", "~p"]), set(&["~(p & q)", "~q"]), set(&["~(p & q)", "~p", "~q"])]
        );
        assert_eq!(all(&FormulaSet::new()), vec![FormulaSet::new()]);
        assert!(all(&set(&["false"])).is_empty());
        assert_eq!(all(&set(&["~~p"])), vec![set(&["~~p", "p"])]);
    }

    #[test]
    fn clause_check_examples() {
        assert!(is_ccs(&set(&["p & q", "p", "q"]), &set(&["p & q"])));
        assert!(!is_ccs(&set(&["p & q", "p"]), &set(&["p & q"])));
        assert!(is_ccs(&set(&["p"]), &set(&["p"])));
        assert!(!is_ccs(&set(&["p", "~p"]), &set(&["p", "~p"])));
        // a positive formula from csf(u) may be added
        assert!(is_ccs(&set(&["~(p & q)", "~p", "q"]), &set(&["~(p & q)"])));
        // but nothing from outside csf(u)
        assert!(!is_ccs(&set(&["p", "q"]), &set(&["p"])));
    }

    #[test]
    fn enumerated_sets_pass_the_clause_check() {
        let u = set(&["~(p & ~(q & ~[a]r))", "~(q & r)", "[b]p | ~q"]);
        let out = all(&u);
        assert!(!out.is_empty());
        for w in &out {
            assert!(is_ccs(w, &u), "{w}");
            assert_eq!(w.degree(), u.degree());
        }
        let distinct: HashSet<_> = out.iter().collect();
        assert_eq!(distinct.len(), out.len());
    }

    #[test]
    fn logic_names_round_trip() {
        for logic in LogicId::ALL.into_iter().chain([LogicId::KDE4B]) {
            assert_eq!(logic.name().parse::<LogicId>().unwrap(), logic);
        }
        assert_eq!(LogicId::from_flags(false, false, true), Err(LogicError::Unsupported));
        assert!(LogicId::KDE4B.is_experimental());
        assert!("kd45".parse::<LogicId>().is_err());
    }
}
