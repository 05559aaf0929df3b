//! Agreement between the search engine and the brute-force oracle, plus
//! the structural invariants of the solution sets.

use abduction::instance::{Instance, VarSet};
use abduction::oracle::{gen_instance, GenConfig, GenDialect, Oracle, Rng};
use abduction::order::{self, OrderKind};
use abduction::solve::{QueryKind, Solver};

const ALL_ORDERINGS: [OrderKind; 6] = [
    OrderKind::Universal,
    OrderKind::SubsetPreference,
    OrderKind::CardinalityPreference,
    OrderKind::SubsetPrioritization,
    OrderKind::CardinalityPrioritization,
    OrderKind::Penalization,
];

fn weighted_prio_config() -> GenConfig {
    GenConfig { max_hypotheses: 5, classes: 2, weights: true, ..GenConfig::default() }
}

#[test]
fn minimal_solutions_are_solutions_and_universal_keeps_all() {
    let mut rng = Rng::new(0x501);
    let cfg = weighted_prio_config();
    for _ in 0..40 {
        let inst = gen_instance(&mut rng, &cfg);
        let oracle = Oracle::new(&inst).unwrap();
        let mut solver = Solver::new(&inst);
        for kind in ALL_ORDERINGS {
            let order = order::bind(kind, &inst).unwrap();
            let minimal = solver.enumerate_minimal(order.as_ref()).unwrap();
            assert!(minimal.complete);
            for s in &minimal.explanations {
                assert!(oracle.is_solution(s), "{kind:?}: {s} not a solution");
            }
            if kind == OrderKind::Universal {
                assert_eq!(minimal.explanations, oracle.solutions());
            }
            // well-foundedness: solutions exist iff minimal ones do
            assert_eq!(minimal.explanations.is_empty(), oracle.solutions().is_empty());
        }
    }
}

#[test]
fn sandwich_property_holds_exhaustively() {
    let mut rng = Rng::new(0x5a9d);
    let cfg = GenConfig { max_hypotheses: 5, ..GenConfig::default() };
    for _ in 0..30 {
        let inst = gen_instance(&mut rng, &cfg);
        let oracle = Oracle::new(&inst).unwrap();
        let subsets = inst.hypotheses().subsets();
        for a in oracle.solutions() {
            for b in oracle.solutions() {
                if !a.is_subset(b) {
                    continue;
                }
                for k in &subsets {
                    if a.is_subset(k) && k.is_subset(b) {
                        assert!(
                            oracle.is_solution(k),
                            "sandwich violated: {a} <= {k} <= {b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn necessary_is_the_negation_of_dispensable() {
    let mut rng = Rng::new(0x4e3);
    let cfg = weighted_prio_config();
    for _ in 0..25 {
        let inst = gen_instance(&mut rng, &cfg);
        let mut solver = Solver::new(&inst);
        for kind in ALL_ORDERINGS {
            let order = order::bind(kind, &inst).unwrap();
            for h in inst.hypotheses().iter() {
                let n = solver.query_variable(order.as_ref(), QueryKind::Necessary, h).unwrap();
                let d = solver.query_variable(order.as_ref(), QueryKind::Dispensable, h).unwrap();
                assert_eq!(n.answer, !d.answer, "{kind:?} h={h}");
            }
        }
    }
}

fn assert_solver_matches_oracle(inst: &Instance, rng: &mut Rng) {
    let oracle = Oracle::new(inst).unwrap();
    let mut solver = Solver::new(inst);
    assert_eq!(solver.exists().unwrap().answer, oracle.exists());
    if let Some(w) = solver.exists().unwrap().witness {
        assert!(oracle.is_solution(&w));
    }
    let subsets = inst.hypotheses().subsets();
    for kind in ALL_ORDERINGS {
        let order = order::bind(kind, inst).unwrap();
        let minimal = solver.enumerate_minimal(order.as_ref()).unwrap();
        assert!(minimal.complete);
        assert_eq!(minimal.explanations, oracle.minimal(order.as_ref()), "{kind:?}");
        // three seeded candidate sets for verification
        for _ in 0..3 {
            let candidate: VarSet =
                inst.hypotheses().iter().filter(|_| rng.chance(1, 2)).collect();
            let v = solver.verify_minimal(order.as_ref(), &candidate).unwrap();
            assert_eq!(v.answer, oracle.verify_minimal(order.as_ref(), &candidate), "{kind:?}");
        }
        let _ = subsets;
        for h in inst.hypotheses().iter() {
            let r = solver.query_variable(order.as_ref(), QueryKind::Relevant, h).unwrap();
            assert_eq!(r.answer, oracle.relevant(order.as_ref(), h), "{kind:?} relevant {h}");
            if let Some(w) = r.witness {
                assert!(w.contains(h));
                assert!(oracle.verify_minimal(order.as_ref(), &w));
            }
            let n = solver.query_variable(order.as_ref(), QueryKind::Necessary, h).unwrap();
            assert_eq!(n.answer, oracle.necessary(order.as_ref(), h), "{kind:?} necessary {h}");
            if !n.answer {
                if let Some(w) = n.witness {
                    assert!(!w.contains(h));
                    assert!(oracle.verify_minimal(order.as_ref(), &w));
                }
            }
            let d = solver.query_variable(order.as_ref(), QueryKind::Dispensable, h).unwrap();
            assert_eq!(d.answer, oracle.dispensable(order.as_ref(), h), "{kind:?}");
        }
    }
}

#[test]
fn solver_matches_oracle_on_random_instances() {
    let mut rng = Rng::new(0x0a9cee);
    let cfg = weighted_prio_config();
    for _ in 0..50 {
        let inst = gen_instance(&mut rng, &cfg);
        assert_solver_matches_oracle(&inst, &mut rng);
    }
}

#[test]
fn definite_horn_fast_paths_agree_with_general_search() {
    let mut rng = Rng::new(0xd0);
    let cfg = GenConfig {
        max_hypotheses: 6,
        dialect: GenDialect::DefiniteHorn,
        ..GenConfig::default()
    };
    for _ in 0..100 {
        let inst = gen_instance(&mut rng, &cfg);
        let mut solver = Solver::new(&inst);
        let fast = solver.dh_exists().unwrap().answer;
        let general = solver.exists().unwrap().answer;
        assert_eq!(fast, general);
        let subset = order::bind(OrderKind::SubsetPreference, &inst).unwrap();
        for h in inst.hypotheses().iter() {
            let fast = solver.dh_subset_necessary(h).unwrap();
            let general =
                solver.query_variable(subset.as_ref(), QueryKind::Necessary, h).unwrap();
            assert_eq!(fast.answer, general.answer, "h={h}");
            if let Some(w) = fast.witness {
                // a minimal solution omitting h certifies the false answer
                let oracle = Oracle::new(&inst).unwrap();
                assert!(!w.contains(h));
                assert!(oracle.verify_minimal(subset.as_ref(), &w));
            }
        }
    }
}
