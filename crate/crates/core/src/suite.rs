//! End-to-end checks of the decision procedures against independent ground
//! truth. Each check produces a [`Report`]; the acceptance tests and the
//! `selftest` command both run them.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{decide_traced, decide_with, valid_with, Config, Termination};
use crate::formula::{csf, parse, sf, Formula, FormulaSet, Modality};
use crate::kripke::{certify, model_check, KripkeModel};
use crate::oracle::{
    atom_names, ccs_subset_filter, enumerate_corpus, random_formula, random_model, random_set, CorpusOracle,
};
use crate::saturation::{enumerate_ccs, is_ccs, LogicId};
use crate::windows::{find_continuation, find_window, is_continuation, is_window, splice};

#[derive(Clone, Debug)]
pub struct Report {
    pub criterion: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn f(s: &str) -> Formula {
    parse(s).expect("built-in formula parses")
}

const DE_LOGICS: [LogicId; 3] = [LogicId::KDE, LogicId::KDE4A, LogicId::KDE4A4B];
const FOUR_LOGICS: [LogicId; 4] = [LogicId::K4A, LogicId::K4A4B, LogicId::KDE4A, LogicId::KDE4A4B];
const TRANSITIVE_DE_LOGICS: [LogicId; 2] = [LogicId::KDE4A, LogicId::KDE4A4B];

const PER_CASE_LIMIT: Duration = Duration::from_secs(1);

/// Known theorems must come out valid, each within a second.
pub fn axiom_validity() -> Report {
    let start = Instant::now();
    let mut cases: Vec<(&str, LogicId)> = Vec::new();
    for l in DE_LOGICS {
        cases.push(("[a][b]p -> [a]p", l));
        cases.push(("<a>p -> <a><b>p", l));
    }
    for l in LogicId::ALL.into_iter().filter(|l| l.four_a()) {
        cases.push(("[a]p -> [a][a]p", l));
    }
    for l in LogicId::ALL.into_iter().filter(|l| l.four_b()) {
        cases.push(("[b]p -> [b][b]p", l));
    }
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for (text, logic) in &cases {
        let t = Instant::now();
        let r = valid_with(&f(text), *logic, &Config::default());
        let took = t.elapsed();
        slowest = slowest.max(took);
        match r {
            Ok(r) if r.valid && took < PER_CASE_LIMIT => {}
            Ok(r) => failures.push(format!("{text} in {logic}: valid={} in {:.3}s", r.valid, took.as_secs_f64())),
            Err(e) => failures.push(format!("{text} in {logic}: {e}")),
        }
    }
    Report {
        criterion: 1,
        title: "axiom validity",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} theorem/logic pairs valid, slowest {:.3}s", cases.len(), slowest.as_secs_f64())
        } else {
            failures.join("; ")
        },
        elapsed: start.elapsed(),
    }
}

/// The weak density axiom must fail outside weak density, with a certified countermodel.
pub fn non_theorems() -> Report {
    let start = Instant::now();
    let axiom = f("[a][b]p -> [a]p");
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for logic in [LogicId::K, LogicId::K4A4B] {
        let t = Instant::now();
        match valid_with(&axiom, logic, &Config::default()) {
            Ok(r) => {
                let took = t.elapsed();
                let certified =
                    r.countermodel.as_ref().is_some_and(|m| certify(m, &Formula::neg(axiom.clone()), logic));
                if r.valid || !certified || took >= PER_CASE_LIMIT {
                    failures.push(format!("{logic}: valid={} certified={certified} {:.3}s", r.valid, took.as_secs_f64()));
                } else {
                    sizes.push(format!("{logic}: {} worlds", r.countermodel.unwrap().worlds().len()));
                }
            }
            Err(e) => failures.push(format!("{logic}: {e}")),
        }
    }
    Report {
        criterion: 2,
        title: "non-theorems with countermodels",
        passed: failures.is_empty(),
        detail: if failures.is_empty() { format!("certified countermodels ({})", sizes.join(", ")) } else { failures.join("; ") },
        elapsed: start.elapsed(),
    }
}

/// Per (formula, logic) outcome of the corpus run.
#[derive(Clone, Debug)]
struct CorpusCase {
    sat: Result<bool, String>,
    dual_sat: Result<bool, String>,
    max_stack_depth: usize,
    /// `(g, p, c)` alternation violations on the trace.
    alternation_violations: usize,
    alternations: usize,
    degree_violations: usize,
}

/// Fuel-mode comparison for one corpus formula in plain weak density.
#[derive(Clone, Debug)]
struct FuelCase {
    fuel_sat: Result<bool, String>,
    longest_chain: usize,
}

/// Everything the corpus-based criteria need, computed once.
pub struct CorpusRun {
    formulas: Vec<Formula>,
    oracle: CorpusOracle,
    cases: Vec<[CorpusCase; 6]>,
    fuel: Vec<FuelCase>,
    fuel_n: u64,
    oracle_time: Duration,
    decide_time: Duration,
    dual_time: Duration,
    fuel_time: Duration,
}

fn err_string<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs the exhaustive corpus over `atoms` atoms up to `max_size` through the
/// oracle and every engine configuration the corpus criteria compare.
pub fn corpus_run(atoms: usize, max_size: usize, fuel_n: u64) -> CorpusRun {
    let formulas = enumerate_corpus(atoms, max_size);
    let names = atom_names(atoms);
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();

    let t = Instant::now();
    let oracle = CorpusOracle::new(&formulas, &name_refs);
    let oracle_time = t.elapsed();

    let cfg = Config::default();
    let mut decide_time = Duration::ZERO;
    let mut dual_time = Duration::ZERO;
    let mut cases = Vec::with_capacity(formulas.len());
    for g in &formulas {
        let row: Vec<CorpusCase> = LogicId::ALL
            .iter()
            .map(|&logic| {
                let t = Instant::now();
                let traced = decide_traced(g, logic, &cfg);
                decide_time += t.elapsed();
                let (sat, depth, alt_v, alts, deg_v) = match traced {
                    Ok((r, trace)) => {
                        let alt_v = if logic.four_a() || logic.four_b() { trace.alternation_violations().len() } else { 0 };
                        let alts = if logic.four_a() || logic.four_b() { trace.alternations() } else { 0 };
                        let deg_v = if logic == LogicId::KDE { trace.degree_discipline_violations().len() } else { 0 };
                        (Ok(r.satisfiable), r.stats.max_stack_depth, alt_v, alts, deg_v)
                    }
                    Err(e) => (Err(err_string(e)), 0, 0, 0, 0),
                };
                let t = Instant::now();
                let dual = valid_with(&Formula::neg(g.clone()), logic, &cfg).map(|r| !r.valid).map_err(err_string);
                dual_time += t.elapsed();
                CorpusCase {
                    sat,
                    dual_sat: dual,
                    max_stack_depth: depth,
                    alternation_violations: alt_v,
                    alternations: alts,
                    degree_violations: deg_v,
                }
            })
            .collect();
        cases.push(row.try_into().expect("six logics"));
    }

    let t = Instant::now();
    let fuel_cfg = Config { termination: Termination::Fuel(BigUint::from(fuel_n)), ..Config::default() };
    let fuel = formulas
        .iter()
        .map(|g| {
            let fuel_sat = decide_with(g, LogicId::KDE, &fuel_cfg).map(|r| r.satisfiable).map_err(err_string);
            let longest_chain = decide_with(g, LogicId::KDE, &cfg).map(|r| r.stats.max_window_chain).unwrap_or(usize::MAX);
            FuelCase { fuel_sat, longest_chain }
        })
        .collect();
    let fuel_time = t.elapsed();

    CorpusRun { formulas, oracle, cases, fuel, fuel_n, oracle_time, decide_time, dual_time, fuel_time }
}

fn logic_index(logic: LogicId) -> usize {
    LogicId::ALL.iter().position(|l| *l == logic).expect("supported logic")
}

impl CorpusRun {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Whenever the oracle finds a model, the engine must say satisfiable.
    pub fn oracle_agreement(&self) -> Report {
        let mut disagreements = Vec::new();
        let mut errors = Vec::new();
        let mut oracle_found = 0usize;
        let mut engine_sat = 0usize;
        let mut bad_witness = 0usize;
        for (i, g) in self.formulas.iter().enumerate() {
            for logic in LogicId::ALL {
                let case = &self.cases[i][logic_index(logic)];
                let found = self.oracle.found(i, logic);
                if found {
                    oracle_found += 1;
                    if !self.oracle.model(i, logic).is_some_and(|m| certify(&m, g, logic)) {
                        bad_witness += 1;
                    }
                }
                match &case.sat {
                    Ok(true) => engine_sat += 1,
                    Ok(false) if found => disagreements.push(format!("{g} in {logic}")),
                    Ok(false) => {}
                    Err(e) => errors.push(format!("{g} in {logic}: {e}")),
                }
            }
        }
        let total = self.formulas.len() * 6;
        let mut detail = format!(
            "{} formulas x 6 logics: oracle models {oracle_found}, engine sat {engine_sat}/{total}, disagreements {}, engine errors {}, uncertified oracle models {bad_witness}; oracle {:.1}s, engine {:.1}s",
            self.formulas.len(),
            disagreements.len(),
            errors.len(),
            self.oracle_time.as_secs_f64(),
            self.decide_time.as_secs_f64()
        );
        for d in disagreements.iter().chain(errors.iter()).take(5) {
            detail.push_str(&format!("; {d}"));
        }
        Report {
            criterion: 3,
            title: "oracle agreement",
            passed: disagreements.is_empty() && errors.is_empty() && bad_witness == 0,
            detail,
            elapsed: self.oracle_time + self.decide_time,
        }
    }

    /// `decide(f)` is satisfiable iff `valid(~f)` fails.
    pub fn dual_consistency(&self) -> Report {
        let mut bad = Vec::new();
        for (i, g) in self.formulas.iter().enumerate() {
            for logic in LogicId::ALL {
                let c = &self.cases[i][logic_index(logic)];
                match (&c.sat, &c.dual_sat) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (a, b) => bad.push(format!("{g} in {logic}: decide {a:?}, not-valid(~f) {b:?}")),
                }
            }
        }
        Report {
            criterion: 5,
            title: "dual consistency",
            passed: bad.is_empty(),
            detail: format!("{} pairs, {} disagreements{}", self.formulas.len() * 6, bad.len(), first(&bad)),
            elapsed: self.decide_time + self.dual_time,
        }
    }

    /// Loop detection and fixed fuel agree in plain weak density, and every
    /// chain repeats before the fuel would run out.
    pub fn termination_equivalence(&self) -> Report {
        let mut diverge = Vec::new();
        let mut late = Vec::new();
        let mut longest = 0usize;
        let kde = logic_index(LogicId::KDE);
        for (i, g) in self.formulas.iter().enumerate() {
            let by_loop = &self.cases[i][kde].sat;
            let fc = &self.fuel[i];
            if fc.fuel_sat.as_ref().ok() != by_loop.as_ref().ok() || fc.fuel_sat.is_err() || by_loop.is_err() {
                diverge.push(format!("{g}: loop {by_loop:?}, fuel {:?}", fc.fuel_sat));
            }
            if fc.longest_chain as u64 >= self.fuel_n {
                late.push(format!("{g}: chain of {} windows", fc.longest_chain));
            } else {
                longest = longest.max(fc.longest_chain);
            }
        }
        Report {
            criterion: 9,
            title: "termination-mode equivalence",
            passed: diverge.is_empty() && late.is_empty(),
            detail: format!(
                "{} formulas in kde, fuel N={}: {} divergences, {} chains without repetition before N, longest chain {}{}",
                self.formulas.len(),
                self.fuel_n,
                diverge.len(),
                late.len(),
                longest,
                first(&diverge.iter().chain(late.iter()).cloned().collect::<Vec<_>>())
            ),
            elapsed: self.fuel_time,
        }
    }
}

fn first(items: &[String]) -> String {
    items.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

/// Outcome of the random certificate run.
pub struct RandomRun {
    per_logic: usize,
    checked: BTreeMap<&'static str, (usize, usize)>,
    failures: Vec<String>,
    /// `(size, max_stack_depth)` of every instance in a transitive logic.
    depths: Vec<(usize, usize)>,
    alternation_violations: usize,
    alternations: usize,
    elapsed: Duration,
}

/// Decides `per_logic` random formulas per logic and certifies every model.
pub fn certificate_run(per_logic: usize, atoms: usize, max_size: usize, seed: u64) -> RandomRun {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = BTreeMap::new();
    let mut failures = Vec::new();
    let mut depths = Vec::new();
    let (mut alt_v, mut alts) = (0, 0);
    let cfg = Config::default();
    for logic in LogicId::ALL {
        let (mut n_sat, mut n_total) = (0, 0);
        for _ in 0..per_logic {
            let g = random_formula(&mut rng, atoms, max_size);
            n_total += 1;
            match decide_traced(&g, logic, &cfg) {
                Ok((r, trace)) => {
                    if logic.four_a() || logic.four_b() {
                        depths.push((g.size(), r.stats.max_stack_depth));
                    }
                    if TRANSITIVE_DE_LOGICS.contains(&logic) {
                        alt_v += trace.alternation_violations().len();
                        alts += trace.alternations();
                    }
                    if r.satisfiable {
                        n_sat += 1;
                        let ok = r.model.as_ref().is_some_and(|m| {
                            certify(m, &g, logic) && certify(&m.reachable_submodel(), &g, logic)
                        });
                        if !ok {
                            failures.push(format!("{g} in {logic}: model does not certify"));
                        }
                    }
                }
                Err(e) => failures.push(format!("{g} in {logic}: {e}")),
            }
        }
        checked.insert(logic.name(), (n_sat, n_total));
    }
    RandomRun {
        per_logic,
        checked,
        failures,
        depths,
        alternation_violations: alt_v,
        alternations: alts,
        elapsed: start.elapsed(),
    }
}

impl RandomRun {
    pub fn certificate_completeness(&self) -> Report {
        let per: Vec<String> = self.checked.iter().map(|(l, (s, t))| format!("{l} {s}/{t} sat")).collect();
        Report {
            criterion: 4,
            title: "certificate completeness",
            passed: self.failures.is_empty() && self.checked.values().all(|(_, t)| *t >= self.per_logic),
            detail: format!("{}; {} failures{}", per.join(", "), self.failures.len(), first(&self.failures)),
            elapsed: self.elapsed,
        }
    }
}

/// Context stack depth stays within `2 |f|^4` in every transitive logic.
pub fn depth_bound(corpus: &CorpusRun, random: &RandomRun) -> Report {
    let mut pairs: Vec<(usize, usize)> = random.depths.clone();
    for (i, g) in corpus.formulas.iter().enumerate() {
        for logic in FOUR_LOGICS {
            pairs.push((g.size(), corpus.cases[i][logic_index(logic)].max_stack_depth));
        }
    }
    let bound = |size: usize| 2.0 * (size as f64).powi(4);
    let violations = pairs.iter().filter(|(s, d)| *d as f64 > bound(*s)).count();
    let max_ratio = pairs.iter().map(|(s, d)| *d as f64 / bound(*s)).fold(0.0, f64::max);
    let deepest = pairs.iter().map(|p| p.1).max().unwrap_or(0);
    Report {
        criterion: 8,
        title: "stack depth bound",
        passed: violations == 0,
        detail: format!(
            "{} runs in transitive logics, {violations} above 2|f|^4, deepest stack {deepest}, max depth/bound ratio {max_ratio:.6}",
            pairs.len()
        ),
        elapsed: Duration::ZERO,
    }
}

/// Alternating heir steps lower the degree over two steps.
pub fn alternation_degree_drop(corpus: &CorpusRun, random: &RandomRun) -> Report {
    let mut violations = random.alternation_violations;
    let mut alternations = random.alternations;
    let mut kde_violations = 0;
    for row in &corpus.cases {
        for logic in TRANSITIVE_DE_LOGICS {
            let c = &row[logic_index(logic)];
            violations += c.alternation_violations;
            alternations += c.alternations;
        }
        kde_violations += row[logic_index(LogicId::KDE)].degree_violations;
    }
    Report {
        criterion: 10,
        title: "degree drop across alternating heirs",
        passed: violations == 0 && kde_violations == 0,
        detail: format!(
            "{alternations} alternating steps checked in kde4a/kde4a4b traces, {violations} violations; plain kde degree-discipline violations {kde_violations}"
        ),
        elapsed: Duration::ZERO,
    }
}

/// Candidate CCSs for property instances: tableau output, plus every CCS
/// from the subset filter when the closure is small enough.
fn ccs_candidates(u: &FormulaSet, with_filter: bool) -> Vec<(FormulaSet, &'static str)> {
    let mut out: Vec<(FormulaSet, &'static str)> = enumerate_ccs(u).take(16).map(|w| (w, "tableau")).collect();
    if with_filter && csf(u).len() - u.len() <= 12 {
        out.extend(ccs_subset_filter(u).into_iter().map(|w| (w, "subset")));
    }
    out
}

#[derive(Default)]
struct ItemTally {
    checked: usize,
    failed: usize,
    failed_tableau: usize,
    example: Option<String>,
}

impl ItemTally {
    fn record(&mut self, ok: bool, source: &str, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if source == "tableau" {
                self.failed_tableau += 1;
            }
            if self.example.is_none() {
                self.example = Some(example());
            }
        }
    }
}

/// Which reading of the CCS properties to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcsReading {
    /// The closure properties with `sf`, over CCSs from both the tableau and
    /// the subset filter.
    Literal,
    /// The forms the algorithms rely on: the degree property only for
    /// tableau-produced sets, restriction and truth sets taken with `csf`.
    Operational,
}

/// Closure properties of CCSs over `instances` random instances.
pub fn ccs_properties(instances: usize, seed: u64, reading: CcsReading) -> Report {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let with_filter = reading == CcsReading::Literal;
    let close = |u: &FormulaSet| if reading == CcsReading::Literal { sf(u) } else { csf(u) };
    let mut items: BTreeMap<&'static str, ItemTally> = ["merge", "split", "degree", "restrict", "truth"].into_iter().map(|i| (i, ItemTally::default())).collect();
    let mut size_ok = true;
    let mut done = 0;
    while done < instances {
        done += 1;
        let u = random_set(&mut rng, 2, 4, 10);
        let v = random_set(&mut rng, 2, 4, 10);

        // merge and degree: w in CCS(u U w1), w1 in CCS(v)
        if let Some((w1, src1)) = ccs_candidates(&v, with_filter).choose(&mut rng).cloned() {
            if let Some((w, src)) = ccs_candidates(&u.union(&w1), with_filter).choose(&mut rng).cloned() {
                let src = if src1 == "subset" { "subset" } else { src };
                let uv = u.union(&v);
                items.get_mut("merge").unwrap().record(is_ccs(&w, &uv), src, || format!("u={u} v={v} w1={w1} w={w}"));
                if reading == CcsReading::Literal || src == "tableau" {
                    let d = w.difference(&w1).degree();
                    items.get_mut("degree").unwrap().record(d <= u.degree(), src, || format!("u={u} v={v} w1={w1} w={w}"));
                }
            }
        }

        // split: w in CCS(u U v)
        let uv = u.union(&v);
        if let Some((w, src)) = ccs_candidates(&uv, with_filter).choose(&mut rng).cloned() {
            let v1 = w.intersection(&csf(&u));
            let v2 = w.intersection(&csf(&v));
            let ok = is_ccs(&v1, &u) && is_ccs(&v2, &v) && v1.union(&v2) == w;
            items.get_mut("split").unwrap().record(ok, src, || format!("u={u} v={v} w={w}"));
            size_ok &= w.len() <= csf(&uv).len() && w.size() <= csf(&uv).size();
        }

        // restrict: u <= v' and w in CCS(v')
        if let Some((w, src)) = ccs_candidates(&uv, with_filter).choose(&mut rng).cloned() {
            let restricted = close(&u).intersection(&w);
            items.get_mut("restrict").unwrap().record(is_ccs(&restricted, &u), src, || format!("u={u} v={uv} w={w}"));
        }

        // truth: formulas true at a world of a random model
        let m = random_model(&mut rng, 3, 2);
        let x = *m.worlds().iter().collect::<Vec<_>>().choose(&mut rng).unwrap();
        let true_here: FormulaSet = (0..rng.gen_range(1..=3))
            .map(|_| random_formula(&mut rng, 2, 8))
            .filter(|g| model_check(&m, *x, g).unwrap())
            .collect();
        let truth = truth_at(&m, *x, &close(&true_here));
        items.get_mut("truth").unwrap().record(is_ccs(&truth, &true_here), "model", || {
            format!("u={true_here} at world {x} of {}", serde_json::to_string(&m).unwrap())
        });
    }
    let failed: Vec<String> = items
        .iter()
        .filter(|(_, t)| t.failed > 0)
        .map(|(i, t)| {
            format!(
                "{i}: {}/{} failed ({} on tableau sets), e.g. {}",
                t.failed,
                t.checked,
                t.failed_tableau,
                t.example.as_deref().unwrap_or("")
            )
        })
        .collect();
    let counts: Vec<String> = items.iter().map(|(i, t)| format!("{i}:{}", t.checked)).collect();
    Report {
        criterion: 6,
        title: match reading {
            CcsReading::Literal => "CCS properties (literal closure forms)",
            CcsReading::Operational => "CCS properties (operational forms)",
        },
        passed: failed.is_empty() && size_ok,
        detail: format!(
            "{instances} instances (checks per property {}), size bound {}{}",
            counts.join(" "),
            if size_ok { "ok" } else { "VIOLATED" },
            if failed.is_empty() { String::new() } else { format!("; {}", failed.join("; ")) }
        ),
        elapsed: start.elapsed(),
    }
}

fn truth_at(m: &KripkeModel, x: usize, candidates: &FormulaSet) -> FormulaSet {
    candidates.iter().filter(|g| model_check(m, x, g).unwrap()).cloned().collect()
}

/// A random parent set with at least one `<a>` obligation, and its goal.
fn random_parent(rng: &mut ChaCha8Rng) -> Option<(FormulaSet, Formula)> {
    let body = random_formula(rng, 2, 6);
    let mut u = random_set(rng, 2, 3, 8);
    u = u.with(Formula::diamond(Modality::A, body));
    let ws: Vec<FormulaSet> = enumerate_ccs(&u).take(8).collect();
    let w = ws.choose(rng)?.clone();
    let goals: Vec<Formula> = w
        .iter()
        .filter_map(|g| match g.as_negated_box() {
            Some((Modality::A, psi)) => Some(Formula::neg(psi.clone())),
            _ => None,
        })
        .collect();
    let goal = goals.choose(rng)?.clone();
    Some((w, goal))
}

/// Splicing a window with any continuation yields a longer window.
pub fn continuation_splice(triples: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0usize;
    let mut failures = Vec::new();
    let mut attempts = 0usize;
    let mut by_k: BTreeMap<usize, usize> = BTreeMap::new();
    while found < triples && attempts < triples * 50 {
        attempts += 1;
        let logic = if rng.gen_bool(0.5) { LogicId::KDE } else { LogicId::KDE4A };
        let Some((w, goal)) = random_parent(&mut rng) else { continue };
        for t0 in find_window(&w, &goal, logic).take(3) {
            for t1 in find_continuation(&t0, logic).take(3) {
                found += 1;
                *by_k.entry(t0.k()).or_default() += 1;
                let long = splice(&t0, &t1);
                let ok = is_window(&t0, logic)
                    && is_continuation(&t0, &t1, logic)
                    && long.k() == t0.k() + 1
                    && is_window(&long, logic);
                if !ok {
                    failures.push(format!("{logic}: parent {w}, window {:?}, continuation {:?}", t0.cells(), t1.cells()));
                }
            }
        }
    }
    let ks: Vec<String> = by_k.iter().map(|(k, n)| format!("k={k}:{n}")).collect();
    Report {
        criterion: 7,
        title: "continuation splice",
        passed: failures.is_empty() && found >= triples,
        detail: format!("{found} triples ({}), {} failures{}", ks.join(" "), failures.len(), first(&failures)),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operational_ccs_properties_hold() {
        let r = ccs_properties(400, 11, CcsReading::Operational);
        assert!(r.passed, "{r}");
    }

    #[test]
    fn small_corpus_passes_everything() {
        let run = corpus_run(1, 4, 16);
        let random = certificate_run(10, 2, 8, 3);
        for r in [
            run.oracle_agreement(),
            run.dual_consistency(),
            run.termination_equivalence(),
            random.certificate_completeness(),
            depth_bound(&run, &random),
            alternation_degree_drop(&run, &random),
        ] {
            assert!(r.passed, "{r}");
        }
    }
}
