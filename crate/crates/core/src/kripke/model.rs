use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Kind, Modality};
use crate::saturation::LogicId;

pub type World = usize;
pub type Relation = BTreeSet<(World, World)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown world {0}")]
    UnknownWorld(World),
    #[error("the model has no worlds")]
    Empty,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    worlds: BTreeSet<World>,
    root: World,
    ra: Relation,
    rb: Relation,
    val: BTreeMap<String, BTreeSet<World>>,
}

/// A finite bimodal Kripke model with a designated root.
///
/// Serialises as `{"worlds":[..],"root":id,"ra":[[i,j],..],"rb":[..],"val":{"p":[..]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct KripkeModel {
    worlds: BTreeSet<World>,
    root: World,
    ra: Relation,
    rb: Relation,
    val: BTreeMap<String, BTreeSet<World>>,
}

impl TryFrom<RawModel> for KripkeModel {
    type Error = ModelError;

    fn try_from(r: RawModel) -> Result<Self, Self::Error> {
        KripkeModel::new(r.worlds, r.root, r.ra, r.rb, r.val)
    }
}

impl From<KripkeModel> for RawModel {
    fn from(m: KripkeModel) -> RawModel {
        RawModel { worlds: m.worlds, root: m.root, ra: m.ra, rb: m.rb, val: m.val }
    }
}

impl KripkeModel {
    pub fn new(
        worlds: BTreeSet<World>,
        root: World,
        ra: Relation,
        rb: Relation,
        val: BTreeMap<String, BTreeSet<World>>,
    ) -> Result<KripkeModel, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        let known = |w: &World| if worlds.contains(w) { Ok(()) } else { Err(ModelError::UnknownWorld(*w)) };
        known(&root)?;
        for (s, t) in ra.iter().chain(rb.iter()) {
            known(s)?;
            known(t)?;
        }
        for ws in val.values() {
            for w in ws {
                known(w)?;
            }
        }
        let val = val.into_iter().filter(|(_, ws)| !ws.is_empty()).collect();
        Ok(KripkeModel { worlds, root, ra, rb, val })
    }

    pub fn worlds(&self) -> &BTreeSet<World> {
        &self.worlds
    }

    pub fn root(&self) -> World {
        self.root
    }

    pub fn relation(&self, m: Modality) -> &Relation {
        match m {
            Modality::A => &self.ra,
            Modality::B => &self.rb,
        }
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<World>> {
        &self.val
    }

    pub fn with_root(&self, root: World) -> Result<KripkeModel, ModelError> {
        KripkeModel::new(self.worlds.clone(), root, self.ra.clone(), self.rb.clone(), self.val.clone())
    }

    /// Same model with `rel` replaced.
    pub fn with_relation(&self, m: Modality, rel: Relation) -> Result<KripkeModel, ModelError> {
        let (ra, rb) = match m {
            Modality::A => (rel, self.rb.clone()),
            Modality::B => (self.ra.clone(), rel),
        };
        KripkeModel::new(self.worlds.clone(), self.root, ra, rb, self.val.clone())
    }

    /// The submodel generated by the root.
    pub fn reachable_submodel(&self) -> KripkeModel {
        let succ = successors(self.ra.iter().chain(self.rb.iter()));
        let mut seen = BTreeSet::from([self.root]);
        let mut todo = vec![self.root];
        while let Some(w) = todo.pop() {
            for &t in succ.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(t) {
                    todo.push(t);
                }
            }
        }
        let keep = |r: &Relation| r.iter().filter(|(s, _)| seen.contains(s)).copied().collect();
        let val = self
            .val
            .iter()
            .map(|(p, ws)| (p.clone(), ws.intersection(&seen).copied().collect()))
            .collect();
        KripkeModel::new(seen.clone(), self.root, keep(&self.ra), keep(&self.rb), val)
            .expect("restriction of a valid model")
    }

    /// Worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula) -> BTreeSet<World> {
        let index: HashMap<World, usize> = self.worlds.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let ids: Vec<World> = self.worlds.iter().copied().collect();
        let succ_a = dense_successors(&self.ra, &index, ids.len());
        let succ_b = dense_successors(&self.rb, &index, ids.len());
        let mut memo = HashMap::new();
        let truth = self.eval(f, &index, &succ_a, &succ_b, &mut memo);
        ids.iter().zip(truth.iter()).filter(|(_, t)| **t).map(|(w, _)| *w).collect()
    }

    fn eval(
        &self,
        f: &Formula,
        index: &HashMap<World, usize>,
        succ_a: &[Vec<usize>],
        succ_b: &[Vec<usize>],
        memo: &mut HashMap<Formula, Vec<bool>>,
    ) -> Vec<bool> {
        if let Some(v) = memo.get(f) {
            return v.clone();
        }
        let n = index.len();
        let v = match f.kind() {
            Kind::Atom(p) => {
                let mut v = vec![false; n];
                if let Some(ws) = self.val.get(p.as_ref()) {
                    for w in ws {
                        v[index[w]] = true;
                    }
                }
                v
            }
            Kind::Falsum => vec![false; n],
            Kind::Neg(g) => self.eval(g, index, succ_a, succ_b, memo).into_iter().map(|x| !x).collect(),
            Kind::And(l, r) => {
                let l = self.eval(l, index, succ_a, succ_b, memo);
                let r = self.eval(r, index, succ_a, succ_b, memo);
                l.into_iter().zip(r).map(|(x, y)| x && y).collect()
            }
            Kind::BoxA(g) | Kind::BoxB(g) => {
                let body = self.eval(g, index, succ_a, succ_b, memo);
                let succ = if matches!(f.kind(), Kind::BoxA(_)) { succ_a } else { succ_b };
                succ.iter().map(|ts| ts.iter().all(|&t| body[t])).collect()
            }
        };
        memo.insert(f.clone(), v.clone());
        v
    }
}

fn successors<'a>(pairs: impl Iterator<Item = &'a (World, World)>) -> HashMap<World, Vec<World>> {
    let mut out: HashMap<World, Vec<World>> = HashMap::new();
    for (s, t) in pairs {
        out.entry(*s).or_default().push(*t);
    }
    out
}

fn dense_successors(rel: &Relation, index: &HashMap<World, usize>, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (s, t) in rel {
        out[index[s]].push(index[t]);
    }
    out
}

/// Whether `f` holds at world `x` of `m`.
pub fn model_check(m: &KripkeModel, x: World, f: &Formula) -> Result<bool, ModelError> {
    if !m.worlds.contains(&x) {
        return Err(ModelError::UnknownWorld(x));
    }
    Ok(m.truth_set(f).contains(&x))
}

/// Every `a`-step `s -> t` has a witness `u` with `s -a-> u -b-> t`.
pub fn is_weakly_dense(m: &KripkeModel) -> bool {
    let succ_a = successors(m.ra.iter());
    m.ra.iter().all(|&(s, t)| succ_a[&s].iter().any(|&u| m.rb.contains(&(u, t))))
}

pub fn is_transitive(rel: &Relation) -> bool {
    let succ = successors(rel.iter());
    rel.iter()
        .all(|&(x, y)| succ.get(&y).is_none_or(|zs| zs.iter().all(|&z| rel.contains(&(x, z)))))
}

pub fn transitive_closure(rel: &Relation) -> Relation {
    let succ = successors(rel.iter());
    let mut out = Relation::new();
    for &s in succ.keys() {
        let mut seen = BTreeSet::new();
        let mut todo = succ[&s].clone();
        while let Some(t) = todo.pop() {
            if seen.insert(t) {
                if let Some(next) = succ.get(&t) {
                    todo.extend(next.iter().copied());
                }
            }
        }
        out.extend(seen.into_iter().map(|t| (s, t)));
    }
    out
}

/// The frame conditions of `logic`: weak density iff `de`, transitivity of
/// each relation iff the matching `4` flag.
pub fn frame_satisfies_logic(m: &KripkeModel, logic: LogicId) -> bool {
    (!logic.de() || is_weakly_dense(m))
        && (!logic.four_a() || is_transitive(&m.ra))
        && (!logic.four_b() || is_transitive(&m.rb))
}

/// `m` is a model of `logic` whose root satisfies `f`.
pub fn certify(m: &KripkeModel, f: &Formula, logic: LogicId) -> bool {
    frame_satisfies_logic(m, logic) && model_check(m, m.root, f).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn model(n: usize, ra: &[(World, World)], rb: &[(World, World)], val: &[(&str, &[World])]) -> KripkeModel {
        KripkeModel::new(
            (0..n).collect(),
            0,
            ra.iter().copied().collect(),
            rb.iter().copied().collect(),
            val.iter().map(|(p, ws)| (p.to_string(), ws.iter().copied().collect())).collect(),
        )
        .unwrap()
    }

    fn holds(m: &KripkeModel, x: World, s: &str) -> bool {
        model_check(m, x, &parse(s).unwrap()).unwrap()
    }

    #[test]
    fn model_check_examples() {
        assert!(holds(&model(1, &[], &[], &[]), 0, "[a]false"));
        let m = model(2, &[(0, 1)], &[], &[("p", &[1])]);
        assert!(holds(&m, 0, "<a>p"));
        assert!(!holds(&m, 0, "<a><b>p"));
        assert_eq!(model_check(&m, 7, &parse("p").unwrap()), Err(ModelError::UnknownWorld(7)));
    }

    #[test]
    fn weak_density_examples() {
        assert!(is_weakly_dense(&model(2, &[(0, 1)], &[(1, 1)], &[])));
        assert!(!is_weakly_dense(&model(2, &[(0, 1)], &[], &[])));
        assert!(is_weakly_dense(&model(2, &[], &[(0, 1)], &[])));
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&Relation::new()));
        assert!(!is_transitive(&[(0, 1), (1, 2)].into_iter().collect()));
        let closed: Relation = [(0, 1), (1, 2), (0, 2)].into_iter().collect();
        assert!(is_transitive(&closed));
        assert_eq!(transitive_closure(&[(0, 1), (1, 2)].into_iter().collect()), closed);
        assert_eq!(transitive_closure(&closed), closed);
    }

    #[test]
    fn frame_conditions_per_logic() {
        let bare = model(2, &[(0, 1)], &[], &[]);
        assert!(frame_satisfies_logic(&bare, LogicId::K));
        assert!(!frame_satisfies_logic(&bare, LogicId::KDE));
        assert!(frame_satisfies_logic(&model(2, &[(0, 1)], &[(1, 1)], &[]), LogicId::KDE4A));
    }

    #[test]
    fn certify_examples() {
        let m = model(1, &[], &[], &[]);
        assert!(!certify(&m, &parse("p").unwrap(), LogicId::K));
        let dense = model(2, &[(0, 1)], &[(1, 1)], &[("p", &[1])]);
        assert!(certify(&dense, &parse("<a>p").unwrap(), LogicId::KDE));
        let broken = dense.with_relation(Modality::B, Relation::new()).unwrap();
        assert!(!certify(&broken, &parse("<a>p").unwrap(), LogicId::KDE));
    }

    #[test]
    fn json_schema_round_trip() {
        let m = model(2, &[(0, 1)], &[(1, 1)], &[("p", &[1])]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"worlds":[0,1],"root":0,"ra":[[0,1]],"rb":[[1,1]],"val":{"p":[1]}}"#);
        assert_eq!(serde_json::from_str::<KripkeModel>(&text).unwrap(), m);
        assert!(serde_json::from_str::<KripkeModel>(r#"{"worlds":[0],"root":1,"ra":[],"rb":[],"val":{}}"#).is_err());
    }

    #[test]
    fn reachable_part_drops_isolated_worlds() {
        let m = model(3, &[(0, 1)], &[], &[("p", &[1, 2])]);
        let r = m.reachable_submodel();
        assert_eq!(r.worlds().len(), 2);
        assert_eq!(r.valuation()["p"], BTreeSet::from([1]));
    }
}
