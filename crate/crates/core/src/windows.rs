//! Windows: finite stretches of the `b`-chain that weak density forces below
//! every `a`-successor, and the search for them.
//!
//! A k-window for a parent set `w` is a sequence `(w_0, ..., w_k)` where
//! `w_k` is a CCS of `box_minus(w, a)` and each `w_i` (`i < k`) is a CCS of
//! `box_minus(w, a) U box_minus(w_{i+1}, b)`; the first cell additionally
//! carries the goal of the `<a>` obligation being served. Cell `i+1`
//! `b`-sees cell `i`.
//!
//! Without transitivity of `b`, an infinite window is approximated by a chain
//! of continuations that eventually repeats. With transitivity of `b` a
//! single stationary 2-window suffices: its second cell `b`-sees itself.

use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::formula::{Formula, FormulaSet, Modality};
use crate::saturation::{box_minus, enumerate_ccs, is_ccs, CcsIter, LogicId};

/// How the last cell of a window continues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowShape {
    /// An ordinary k-window, continued by [`find_continuation`].
    Finite,
    /// A 2-window whose last cell is closed under `box_minus(., b)` and
    /// repeats forever.
    Stationary,
}

#[derive(Clone, Debug)]
pub struct Window {
    parent: FormulaSet,
    cells: Vec<FormulaSet>,
    goal: Option<Formula>,
    shape: WindowShape,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Window {}

impl Hash for Window {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl Window {
    pub fn new(parent: FormulaSet, cells: Vec<FormulaSet>, goal: Option<Formula>, shape: WindowShape) -> Window {
        assert!(!cells.is_empty(), "a window has at least one cell");
        Window { parent, cells, goal, shape }
    }

    pub fn parent(&self) -> &FormulaSet {
        &self.parent
    }

    pub fn cells(&self) -> &[FormulaSet] {
        &self.cells
    }

    pub fn goal(&self) -> Option<&Formula> {
        self.goal.as_ref()
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    pub fn k(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn first(&self) -> &FormulaSet {
        &self.cells[0]
    }
}

/// Reference check of the window clauses.
pub fn is_window(t: &Window, logic: LogicId) -> bool {
    let ba = box_minus(&t.parent, Modality::A, logic);
    let k = t.k();
    let goal_set = |i: usize| match (&t.goal, i) {
        (Some(g), 0) => FormulaSet::singleton(g.clone()),
        _ => FormulaSet::new(),
    };
    let last_input = match t.shape {
        WindowShape::Finite => ba.clone(),
        WindowShape::Stationary => {
            let closure = box_minus(&t.cells[k], Modality::B, logic);
            if k != 1 || !closure.is_subset(&t.cells[k]) {
                return false;
            }
            ba.union(&closure)
        }
    };
    if !is_ccs(&t.cells[k], &last_input.union(&goal_set(k))) {
        return false;
    }
    for i in 0..k {
        let input = ba.union(&box_minus(&t.cells[i + 1], Modality::B, logic)).union(&goal_set(i));
        if !is_ccs(&t.cells[i], &input) {
            return false;
        }
    }
    if logic.four_b() {
        for i in 0..k {
            let outer = box_minus(&t.cells[i + 1], Modality::B, logic);
            if !outer.is_subset(&box_minus(&t.cells[i], Modality::B, logic)) {
                return false;
            }
        }
    }
    true
}

/// Checks that `t1` is a window continuing `t0`: same parent and length,
/// and `t1[i-1]` is a CCS of `box_minus(t1[i], b) U t0[i]` for `1 <= i <= k`.
pub fn is_continuation(t0: &Window, t1: &Window, logic: LogicId) -> bool {
    if t0.cells.len() != t1.cells.len() || t0.parent != t1.parent || !is_window(t1, logic) {
        return false;
    }
    (1..=t0.k()).all(|i| {
        let input = box_minus(&t1.cells[i], Modality::B, logic).union(&t0.cells[i]);
        is_ccs(&t1.cells[i - 1], &input)
    })
}

/// Right-to-left depth-first search over cell sequences where cell `i`
/// ranges over `enumerate_ccs(base U extras[i] U box_minus(cell[i+1], b))`
/// and the last cell over `enumerate_ccs(base U extras[last])`.
struct CellSearch {
    logic: LogicId,
    base: FormulaSet,
    extras: Vec<FormulaSet>,
    iters: Vec<Option<CcsIter>>,
    picked: Vec<Option<FormulaSet>>,
    started: bool,
    finished: bool,
    yielded_sets: u64,
}

impl CellSearch {
    fn new(logic: LogicId, base: FormulaSet, extras: Vec<FormulaSet>) -> CellSearch {
        let n = extras.len();
        CellSearch {
            logic,
            base,
            extras,
            iters: (0..n).map(|_| None).collect(),
            picked: vec![None; n],
            started: false,
            finished: false,
            yielded_sets: 0,
        }
    }

    fn input(&self, pos: usize) -> FormulaSet {
        let mut u = self.base.union(&self.extras[pos]);
        if pos + 1 < self.extras.len() {
            let next = self.picked[pos + 1].as_ref().expect("right neighbour chosen first");
            u = u.union(&box_minus(next, Modality::B, self.logic));
        }
        u
    }

    fn next_cells(&mut self) -> Option<Vec<FormulaSet>> {
        if self.finished {
            return None;
        }
        let n = self.extras.len();
        let mut pos = if self.started {
            0
        } else {
            self.started = true;
            self.iters[n - 1] = Some(enumerate_ccs(&self.input(n - 1)));
            n - 1
        };
        loop {
            let step = self.iters[pos].as_mut().expect("iterator initialised").next();
            match step {
                Some(c) => {
                    self.yielded_sets += 1;
                    self.picked[pos] = Some(c);
                    if pos == 0 {
                        return Some(self.picked.iter().map(|c| c.clone().unwrap()).collect());
                    }
                    pos -= 1;
                    self.iters[pos] = Some(enumerate_ccs(&self.input(pos)));
                }
                None => {
                    self.iters[pos] = None;
                    self.picked[pos] = None;
                    if pos == n - 1 {
                        self.finished = true;
                        return None;
                    }
                    pos += 1;
                }
            }
        }
    }
}

/// Enumerates CCSs `c` of sets `seed' >= seed` with `box_minus(c, b) <= c`,
/// growing the seed by the `box_minus` of each non-closed candidate.
struct ClosedSearch {
    logic: LogicId,
    stack: Vec<CcsIter>,
    seen: HashSet<FormulaSet>,
    yielded_sets: u64,
}

impl ClosedSearch {
    fn new(logic: LogicId, seed: &FormulaSet) -> ClosedSearch {
        ClosedSearch { logic, stack: vec![enumerate_ccs(seed)], seen: HashSet::new(), yielded_sets: 0 }
    }
}

impl Iterator for ClosedSearch {
    type Item = FormulaSet;

    fn next(&mut self) -> Option<FormulaSet> {
        loop {
            let top = self.stack.last_mut()?;
            match top.next() {
                None => {
                    self.stack.pop();
                }
                Some(c) => {
                    self.yielded_sets += 1;
                    let inherited = box_minus(&c, Modality::B, self.logic);
                    if inherited.is_subset(&c) {
                        if self.seen.insert(c.clone()) {
                            return Some(c);
                        }
                    } else {
                        self.stack.push(enumerate_ccs(&c.union(&inherited)));
                    }
                }
            }
        }
    }
}

enum SearchKind {
    Cells(CellSearch),
    Stationary { ba: FormulaSet, goal: Formula, outer: ClosedSearch, last: Option<FormulaSet>, inner: Option<CcsIter> },
}

/// Lazy stream of windows produced by [`find_window`] or [`find_continuation`].
pub struct WindowSearch {
    parent: FormulaSet,
    goal: Option<Formula>,
    kind: SearchKind,
    inner_yields: u64,
}

impl WindowSearch {
    /// Number of CCSs drawn from the underlying enumerators so far.
    pub fn ccs_enumerated(&self) -> u64 {
        match &self.kind {
            SearchKind::Cells(s) => s.yielded_sets,
            SearchKind::Stationary { outer, .. } => outer.yielded_sets + self.inner_yields,
        }
    }
}

impl Iterator for WindowSearch {
    type Item = Window;

    fn next(&mut self) -> Option<Window> {
        match &mut self.kind {
            SearchKind::Cells(s) => {
                let cells = s.next_cells()?;
                Some(Window::new(self.parent.clone(), cells, self.goal.clone(), WindowShape::Finite))
            }
            SearchKind::Stationary { ba, goal, outer, last, inner } => loop {
                if let (Some(w1), Some(it)) = (last.as_ref(), inner.as_mut()) {
                    if let Some(w0) = it.next() {
                        self.inner_yields += 1;
                        return Some(Window::new(
                            self.parent.clone(),
                            vec![w0, w1.clone()],
                            self.goal.clone(),
                            WindowShape::Stationary,
                        ));
                    }
                }
                let w1 = outer.next()?;
                let logic = outer.logic;
                let input = ba.union(&box_minus(&w1, Modality::B, logic)).with(goal.clone());
                *inner = Some(enumerate_ccs(&input));
                *last = Some(w1);
            },
        }
    }
}

/// Windows for `w` whose first cell contains `goal`.
///
/// With transitive `b` these are stationary 2-windows; otherwise
/// `d(w)`-windows built right to left.
pub fn find_window(w: &FormulaSet, goal: &Formula, logic: LogicId) -> WindowSearch {
    let ba = box_minus(w, Modality::A, logic);
    let kind = if logic.four_b() {
        SearchKind::Stationary {
            outer: ClosedSearch::new(logic, &ba),
            ba,
            goal: goal.clone(),
            last: None,
            inner: None,
        }
    } else {
        let k = w.degree();
        let mut extras = vec![FormulaSet::new(); k + 1];
        extras[0] = FormulaSet::singleton(goal.clone());
        SearchKind::Cells(CellSearch::new(logic, ba, extras))
    };
    WindowSearch { parent: w.clone(), goal: Some(goal.clone()), kind, inner_yields: 0 }
}

/// Continuations `(w~_1, ..., w~_{k+1})` of a finite window `t`.
pub fn find_continuation(t: &Window, logic: LogicId) -> WindowSearch {
    assert_eq!(t.shape, WindowShape::Finite, "stationary windows are not continued");
    let ba = box_minus(&t.parent, Modality::A, logic);
    let k = t.k();
    let mut extras: Vec<FormulaSet> = t.cells[1..].to_vec();
    extras.push(FormulaSet::new());
    debug_assert_eq!(extras.len(), k + 1);
    WindowSearch { parent: t.parent.clone(), goal: None, kind: SearchKind::Cells(CellSearch::new(logic, ba, extras)), inner_yields: 0 }
}

/// True iff `next` equals (cell-wise) one of the windows already seen.
pub fn window_sequence_loops<'a, I>(seen: I, next: &Window) -> bool
where
    I: IntoIterator<Item = &'a Window>,
{
    seen.into_iter().any(|t| t == next)
}

/// `(w_0, w~_1, ..., w~_{k+1})` for a window `t0` and its continuation `t1`.
pub fn splice(t0: &Window, t1: &Window) -> Window {
    let mut cells = Vec::with_capacity(t1.cells.len() + 1);
    cells.push(t0.cells[0].clone());
    cells.extend(t1.cells.iter().cloned());
    Window::new(t0.parent.clone(), cells, t0.goal.clone(), WindowShape::Finite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn diamond_gets_a_one_window() {
        let w = set(&["<a>p"]);
        let found: Vec<Window> = find_window(&w, &f("p"), LogicId::KDE).collect();
        assert!(!found.is_empty());
        for t in &found {
            assert_eq!(t.k(), 1);
            assert!(t.first().contains(&f("p")));
            assert!(is_window(t, LogicId::KDE));
        }
    }

    #[test]
    fn boxed_contradiction_has_no_window() {
        let w = set(&["~[a]p", "[a]p"]);
        assert_eq!(find_window(&w, &f("~p"), LogicId::KDE).count(), 0);
    }

    #[test]
    fn transitive_b_gives_stationary_windows() {
        let w = set(&["<a>p", "[a][b]q"]);
        let found: Vec<Window> = find_window(&w, &f("p"), LogicId::KDE4A4B).collect();
        assert!(!found.is_empty());
        for t in &found {
            assert_eq!(t.shape(), WindowShape::Stationary);
            assert_eq!(t.k(), 1);
            assert!(is_window(t, LogicId::KDE4A4B));
            let w1 = &t.cells()[1];
            assert!(box_minus(w1, Modality::B, LogicId::KDE4A4B).is_subset(w1));
            assert!(box_minus(w1, Modality::B, LogicId::KDE4A4B).is_subset(t.first()));
        }
    }

    #[test]
    fn broken_windows_are_rejected() {
        let w = set(&["<a>p", "[a]q"]);
        let t = find_window(&w, &f("p"), LogicId::KDE).next().unwrap();
        let mut cells = t.cells().to_vec();
        let last = cells.len() - 1;
        cells[last] = FormulaSet::new();
        assert!(!is_window(&Window::new(w.clone(), cells, t.goal().cloned(), WindowShape::Finite), LogicId::KDE));

        let pre = set(&["<a>p"]);
        let bad = Window::new(pre, vec![set(&["p"]), set(&["[b]q", "q"])], Some(f("p")), WindowShape::Finite);
        assert!(!is_window(&bad, LogicId::KDE4A4B));
    }

    #[test]
    fn zero_window_continuations_are_last_cells() {
        let parent = set(&["[a]p"]);
        let t0 = Window::new(parent.clone(), vec![set(&["p"])], None, WindowShape::Finite);
        assert!(is_window(&t0, LogicId::KDE));
        let conts: Vec<Window> = find_continuation(&t0, LogicId::KDE).collect();
        assert_eq!(conts, vec![Window::new(parent, vec![set(&["p"])], None, WindowShape::Finite)]);
    }

    #[test]
    fn continuation_splices_into_longer_window() {
        let w = set(&["<a>p", "[a](q | [b]~q)"]);
        for logic in [LogicId::KDE, LogicId::KDE4A] {
            for t0 in find_window(&w, &f("p"), logic) {
                for t1 in find_continuation(&t0, logic) {
                    assert!(is_continuation(&t0, &t1, logic));
                    let long = splice(&t0, &t1);
                    assert_eq!(long.k(), t0.k() + 1);
                    assert!(is_window(&long, logic));
                }
            }
        }
    }

    #[test]
    fn loop_detection_is_cellwise() {
        let w = set(&["<a>p"]);
        let t = find_window(&w, &f("p"), LogicId::KDE).next().unwrap();
        assert!(window_sequence_loops([&t], &t));
        assert!(!window_sequence_loops(std::iter::empty::<&Window>(), &t));
        let same_cells = Window::new(set(&["<a>p", "q"]), t.cells().to_vec(), None, WindowShape::Finite);
        assert!(window_sequence_loops([&t], &same_cells));
    }
}
