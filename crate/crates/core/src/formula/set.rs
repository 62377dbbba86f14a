use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Formula;

/// A finite set of formulas stored as a canonically sorted slice.
///
/// Two sets are equal iff they hold the same formulas, and iteration always
/// follows the canonical formula order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FormulaSet(Arc<[Formula]>);

impl FormulaSet {
    pub fn new() -> FormulaSet {
        FormulaSet(Arc::from(Vec::new()))
    }

    pub fn singleton(f: Formula) -> FormulaSet {
        FormulaSet(Arc::from(vec![f]))
    }

    /// `v` must already be sorted and free of duplicates.
    pub(crate) fn from_sorted_unique(v: Vec<Formula>) -> FormulaSet {
        debug_assert!(v.windows(2).all(|p| p[0] < p[1]));
        FormulaSet(Arc::from(v))
    }

    pub fn from_vec(mut v: Vec<Formula>) -> FormulaSet {
        v.sort();
        v.dedup();
        FormulaSet(Arc::from(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut j = 0;
        for f in self.iter() {
            loop {
                match other.0.get(j) {
                    None => return false,
                    Some(g) => match g.cmp(f) {
                        std::cmp::Ordering::Less => j += 1,
                        std::cmp::Ordering::Equal => {
                            j += 1;
                            break;
                        }
                        std::cmp::Ordering::Greater => return false,
                    },
                }
            }
        }
        true
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        FormulaSet(Arc::from(out))
    }

    pub fn intersection(&self, other: &FormulaSet) -> FormulaSet {
        FormulaSet(self.iter().filter(|f| other.contains(f)).cloned().collect())
    }

    pub fn difference(&self, other: &FormulaSet) -> FormulaSet {
        FormulaSet(self.iter().filter(|f| !other.contains(f)).cloned().collect())
    }

    pub fn with(&self, f: Formula) -> FormulaSet {
        match self.0.binary_search(&f) {
            Ok(_) => self.clone(),
            Err(at) => {
                let mut v = self.0.to_vec();
                v.insert(at, f);
                FormulaSet(Arc::from(v))
            }
        }
    }

    /// Maximal degree of a member; 0 for the empty set.
    pub fn degree(&self) -> usize {
        self.iter().map(Formula::degree).max().unwrap_or(0)
    }

    /// Sum of member sizes; 0 for the empty set.
    pub fn size(&self) -> usize {
        self.iter().map(Formula::size).sum()
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        FormulaSet::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FormulaSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FormulaSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Formula>::deserialize(d)?.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn set_operations() {
        let a = set(&["p", "q", "[a]p"]);
        let b = set(&["q", "r"]);
        assert_eq!(a.union(&b), set(&["p", "q", "r", "[a]p"]));
        assert_eq!(a.intersection(&b), set(&["q"]));
        assert_eq!(a.difference(&b), set(&["p", "[a]p"]));
        assert!(set(&["q"]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(FormulaSet::new().is_subset(&b));
        assert_eq!(a.with(parse("r").unwrap()), set(&["p", "q", "r", "[a]p"]));
    }

    #[test]
    fn measures_of_empty_set_are_zero() {
        assert_eq!(FormulaSet::new().degree(), 0);
        assert_eq!(FormulaSet::new().size(), 0);
        assert_eq!(set(&["[a][b]p", "q"]).degree(), 2);
        assert_eq!(set(&["[a][b]p", "q"]).size(), 4);
    }

    #[test]
    fn duplicates_collapse() {
        assert_eq!(set(&["p", "p", "~~p"]).len(), 2);
    }
}
