use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wdtab::engine::decide;
use wdtab::formula::{csf, parse, sf, Formula, FormulaSet, Modality};
use wdtab::kripke::{certify, KripkeModel};
use wdtab::oracle::{bounded_sat, ccs_subset_filter, random_formula, random_model, random_set, SearchBudget};
use wdtab::saturation::{enumerate_ccs, is_ccs, LogicId};
use wdtab::windows::{find_window, is_window};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn formula(max_size: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |s| random_formula(&mut rng(s), 2, max_size))
}

fn set(max_len: usize, max_size: usize) -> impl Strategy<Value = FormulaSet> {
    any::<u64>().prop_map(move |s| random_set(&mut rng(s), 2, max_len, max_size))
}

fn logic() -> impl Strategy<Value = LogicId> {
    prop::sample::select(LogicId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(f in formula(16)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn closures_are_idempotent_and_nested(w in set(8, 10)) {
        let c = csf(&w);
        let s = sf(&w);
        prop_assert!(w.is_subset(&c));
        prop_assert_eq!(csf(&c), c.clone());
        prop_assert_eq!(sf(&s), s.clone());
        prop_assert!(c.is_subset(&s));
        if !w.is_empty() {
            prop_assert_eq!(c.degree(), w.degree());
        }
    }

    #[test]
    fn set_order_is_canonical(fs in prop::collection::vec(formula(6), 0..6)) {
        let mut rev = fs.clone();
        rev.reverse();
        let a = FormulaSet::from_vec(fs);
        let b = FormulaSet::from_vec(rev);
        prop_assert_eq!(a.to_string(), b.to_string());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn enumerated_sets_are_ccs(u in set(6, 10)) {
        let c = csf(&u);
        for w in enumerate_ccs(&u).take(32) {
            prop_assert!(is_ccs(&w, &u), "{w} for {u}");
            prop_assert_eq!(w.degree(), u.degree());
            prop_assert!(w.is_subset(&c));
            prop_assert!(w.len() <= c.len() && w.size() <= c.size());
        }
    }

    #[test]
    fn tableau_and_subset_filter_agree_on_emptiness(u in set(4, 7)) {
        prop_assume!(csf(&u).len() - u.len() <= 14);
        let by_tableau = enumerate_ccs(&u).next().is_some();
        let by_filter = ccs_subset_filter(&u);
        prop_assert_eq!(by_tableau, !by_filter.is_empty());
        for w in enumerate_ccs(&u) {
            prop_assert!(by_filter.contains(&w));
        }
    }

    #[test]
    fn models_round_trip_through_json(seed in any::<u64>()) {
        let m = random_model(&mut rng(seed), 4, 2);
        let text = serde_json::to_string(&m).unwrap();
        let back: KripkeModel = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn found_windows_are_windows(u in set(3, 8), body in formula(5)) {
        let u = u.with(Formula::diamond(Modality::A, body));
        for logic in [LogicId::KDE, LogicId::KDE4A, LogicId::KDE4A4B] {
            for w in enumerate_ccs(&u).take(2) {
                let goals = w.iter().filter_map(|g| match g.as_negated_box() {
                    Some((Modality::A, psi)) => Some(Formula::neg(psi.clone())),
                    _ => None,
                });
                for goal in goals {
                    for t in find_window(&w, &goal, logic).take(3) {
                        prop_assert!(is_window(&t, logic), "{logic}: {:?}", t.cells());
                    }
                }
            }
        }
    }

    #[test]
    fn verdicts_match_small_model_search(f in formula(7), logic in logic()) {
        let r = decide(&f, logic).unwrap();
        if let Some(m) = &r.model {
            prop_assert!(certify(m, &f, logic));
        }
        let budget = SearchBudget { max_worlds: 2, ..SearchBudget::default() };
        if bounded_sat(&f, logic, budget).model().is_some() {
            prop_assert!(r.satisfiable, "{f} in {logic}");
        }
    }
}
