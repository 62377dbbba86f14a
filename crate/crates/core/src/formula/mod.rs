//! Bimodal formulas over atoms, `false`, negation, conjunction and the two
//! boxes `[a]` and `[b]`.
//!
//! The derived connectives (`true`, `|`, `->`, `<a>`, `<b>`) only exist in the
//! text syntax: [`parse`] eliminates them and [`Formula`]'s `Display`
//! reintroduces them where the AST has the matching shape.
//!
//! Formulas are reference counted and carry their size, modal degree and a
//! structural hash, so cloning and comparing them is cheap.

mod parse;
mod print;
mod set;

pub use parse::{parse, ParseError};
pub use set::FormulaSet;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// One of the two modalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    A,
    B,
}

impl Modality {
    pub const BOTH: [Modality; 2] = [Modality::A, Modality::B];

    pub fn other(self) -> Modality {
        match self {
            Modality::A => Modality::B,
            Modality::B => Modality::A,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::A => "a",
            Modality::B => "b",
        })
    }
}

/// The shape of a formula node.
#[derive(Debug)]
pub enum Kind {
    Atom(Arc<str>),
    Falsum,
    Neg(Formula),
    And(Formula, Formula),
    BoxA(Formula),
    BoxB(Formula),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    size: u32,
    degree: u32,
    hash: u64,
}

/// An immutable formula.
///
/// Equality is structural. The total order is the canonical one used for
/// every formula set: first by size, then by the preorder token sequence.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

const TAG_FALSUM: u8 = 0;
const TAG_ATOM: u8 = 1;
const TAG_NEG: u8 = 2;
const TAG_AND: u8 = 3;
const TAG_BOX_A: u8 = 4;
const TAG_BOX_B: u8 = 5;

fn mix(h: u64, v: u64) -> u64 {
    // splitmix64 finaliser over the running value
    let mut z = h ^ v.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Formula {
    fn from_kind(kind: Kind) -> Formula {
        let (size, degree, hash) = match &kind {
            Kind::Atom(name) => {
                let mut h = mix(0, TAG_ATOM as u64);
                for b in name.bytes() {
                    h = mix(h, b as u64);
                }
                (1, 0, h)
            }
            Kind::Falsum => (1, 0, mix(0, TAG_FALSUM as u64)),
            Kind::Neg(c) => (1 + c.0.size, c.0.degree, mix(mix(0, TAG_NEG as u64), c.0.hash)),
            Kind::And(l, r) => (
                1 + l.0.size + r.0.size,
                l.0.degree.max(r.0.degree),
                mix(mix(mix(0, TAG_AND as u64), l.0.hash), r.0.hash),
            ),
            Kind::BoxA(c) => (1 + c.0.size, 1 + c.0.degree, mix(mix(0, TAG_BOX_A as u64), c.0.hash)),
            Kind::BoxB(c) => (1 + c.0.size, 1 + c.0.degree, mix(mix(0, TAG_BOX_B as u64), c.0.hash)),
        };
        Formula(Arc::new(Node { kind, size, degree, hash }))
    }

    pub fn atom(name: &str) -> Formula {
        Formula::from_kind(Kind::Atom(Arc::from(name)))
    }

    pub fn falsum() -> Formula {
        Formula::from_kind(Kind::Falsum)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::from_kind(Kind::Neg(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::from_kind(Kind::And(l, r))
    }

    pub fn boxed(m: Modality, f: Formula) -> Formula {
        match m {
            Modality::A => Formula::from_kind(Kind::BoxA(f)),
            Modality::B => Formula::from_kind(Kind::BoxB(f)),
        }
    }

    pub fn box_a(f: Formula) -> Formula {
        Formula::boxed(Modality::A, f)
    }

    pub fn box_b(f: Formula) -> Formula {
        Formula::boxed(Modality::B, f)
    }

    /// `true`, i.e. `~false`.
    pub fn top() -> Formula {
        Formula::neg(Formula::falsum())
    }

    /// `l | r`, i.e. `~(~l & ~r)`.
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::neg(Formula::and(Formula::neg(l), Formula::neg(r)))
    }

    /// `l -> r`, i.e. `~(l & ~r)`.
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::neg(Formula::and(l, Formula::neg(r)))
    }

    /// `<m>f`, i.e. `~[m]~f`.
    pub fn diamond(m: Modality, f: Formula) -> Formula {
        Formula::neg(Formula::boxed(m, Formula::neg(f)))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Number of symbol occurrences (AST nodes).
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// Modal depth; both modalities count alike.
    pub fn degree(&self) -> usize {
        self.0.degree as usize
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self.kind(), Kind::Falsum)
    }

    pub fn as_neg(&self) -> Option<&Formula> {
        match self.kind() {
            Kind::Neg(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<(Modality, &Formula)> {
        match self.kind() {
            Kind::BoxA(c) => Some((Modality::A, c)),
            Kind::BoxB(c) => Some((Modality::B, c)),
            _ => None,
        }
    }

    /// For `~[m]psi` returns `(m, psi)`.
    pub fn as_negated_box(&self) -> Option<(Modality, &Formula)> {
        self.as_neg().and_then(Formula::as_box)
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        let mut todo = vec![self];
        while let Some(f) = todo.pop() {
            match f.kind() {
                Kind::Atom(n) => {
                    out.insert(n.clone());
                }
                Kind::Falsum => {}
                Kind::Neg(c) | Kind::BoxA(c) | Kind::BoxB(c) => todo.push(c),
                Kind::And(l, r) => {
                    todo.push(l);
                    todo.push(r);
                }
            }
        }
        out
    }

    fn tag(&self) -> u8 {
        match self.kind() {
            Kind::Falsum => TAG_FALSUM,
            Kind::Atom(_) => TAG_ATOM,
            Kind::Neg(_) => TAG_NEG,
            Kind::And(..) => TAG_AND,
            Kind::BoxA(_) => TAG_BOX_A,
            Kind::BoxB(_) => TAG_BOX_B,
        }
    }

    /// Lexicographic comparison of the preorder token sequences. The
    /// encoding is prefix free, so this is a plain recursive comparison.
    fn preorder_cmp(&self, other: &Formula) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match self.tag().cmp(&other.tag()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.kind(), other.kind()) {
            (Kind::Atom(x), Kind::Atom(y)) => x.cmp(y),
            (Kind::Falsum, Kind::Falsum) => Ordering::Equal,
            (Kind::Neg(x), Kind::Neg(y)) | (Kind::BoxA(x), Kind::BoxA(y)) | (Kind::BoxB(x), Kind::BoxB(y)) => {
                x.preorder_cmp(y)
            }
            (Kind::And(a, b), Kind::And(c, d)) => a.preorder_cmp(c).then_with(|| b.preorder_cmp(d)),
            _ => unreachable!("tags compared equal"),
        }
    }

    fn structural_eq(&self, other: &Formula) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::Atom(x), Kind::Atom(y)) => x == y,
            (Kind::Falsum, Kind::Falsum) => true,
            (Kind::Neg(x), Kind::Neg(y)) | (Kind::BoxA(x), Kind::BoxA(y)) | (Kind::BoxB(x), Kind::BoxB(y)) => {
                x.structural_eq(y)
            }
            (Kind::And(a, b), Kind::And(c, d)) => a.structural_eq(c) && b.structural_eq(d),
            _ => false,
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.structural_eq(other)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.size.cmp(&other.0.size).then_with(|| self.preorder_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Modal depth of `f`.
pub fn degree(f: &Formula) -> usize {
    f.degree()
}

/// Number of symbol occurrences in `f`.
pub fn size(f: &Formula) -> usize {
    f.size()
}

fn close(w: &FormulaSet, through_boxes: bool) -> FormulaSet {
    let mut out: BTreeSet<Formula> = w.iter().cloned().collect();
    let mut todo: Vec<Formula> = out.iter().cloned().collect();
    let push = |f: Formula, out: &mut BTreeSet<Formula>, todo: &mut Vec<Formula>| {
        if out.insert(f.clone()) {
            todo.push(f);
        }
    };
    while let Some(f) = todo.pop() {
        match f.kind() {
            Kind::And(l, r) => {
                push(l.clone(), &mut out, &mut todo);
                push(r.clone(), &mut out, &mut todo);
            }
            Kind::BoxA(c) | Kind::BoxB(c) if through_boxes => push(c.clone(), &mut out, &mut todo),
            Kind::Neg(c) => {
                match c.kind() {
                    Kind::And(l, r) => {
                        push(Formula::neg(l.clone()), &mut out, &mut todo);
                        push(Formula::neg(r.clone()), &mut out, &mut todo);
                    }
                    Kind::BoxA(g) | Kind::BoxB(g) if through_boxes => {
                        push(Formula::neg(g.clone()), &mut out, &mut todo);
                    }
                    _ => {}
                }
                push(c.clone(), &mut out, &mut todo);
            }
            _ => {}
        }
    }
    FormulaSet::from_sorted_unique(out.into_iter().collect())
}

/// Least superset of `w` closed under the classical decomposition rules:
/// `p & q => p, q`; `~(p & q) => ~p, ~q`; `~p => p`.
pub fn csf(w: &FormulaSet) -> FormulaSet {
    close(w, false)
}

/// [`csf`] extended with the modal rules `[m]p => p` and `~[m]p => ~p`.
pub fn sf(w: &FormulaSet) -> FormulaSet {
    close(w, true)
}
