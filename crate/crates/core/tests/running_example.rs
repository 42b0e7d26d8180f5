//! Frozen values on the 15-tuple tax records example.

mod common;

use adcminer_core::approx::{
    exact_f3_bruteforce, f1_score, f2_score, greedy_f3_accept, min_repair_removals, prefilter_2eps,
    ApproxFunction, CleanTupleFraction, GreedyRepair, PairFraction,
};
use adcminer_core::enumerate::adc_enum_collect;
use adcminer_core::evidence::{build_evidence, sat};
use adcminer_core::{ColumnType, Operator, Pattern, PredicateSet, PredicateSpace};
use common::*;

#[test]
fn column_types_are_inferred() {
    let d = table1();
    let types: Vec<ColumnType> = d.schema().map(|(_, t)| t).collect();
    use ColumnType::*;
    assert_eq!(types, vec![String, String, Numeric, Numeric, Numeric]);
    assert_eq!(d.row_count(), 15);
}

#[test]
fn predicate_space_at_default_threshold() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.3).unwrap();
    let has = |l: &str, op: &str, r: &str| {
        ps.find_named(Pattern::CrossTuple, l, Operator::from_symbol(op).unwrap(), r)
            .is_some()
    };
    for op in ["=", "!="] {
        assert!(has("Name", op, "Name"));
    }
    for op in [">", ">=", "<", "<="] {
        assert!(has("Income", op, "Income"));
    }
    // No Income value is also a Tax value, so the columns are not compared.
    assert!(!has("Income", ">", "Tax"));
    // Name, State: 2 each; Zip, Income, Tax: 6 each.
    assert_eq!(ps.len(), 22);
}

#[test]
fn predicate_space_with_cross_column_comparisons() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.0).unwrap();
    for op in [">", ">=", "<", "<="] {
        assert!(ps
            .find_named(Pattern::CrossTuple, "Income", Operator::from_symbol(op).unwrap(), "Tax")
            .is_some());
    }
}

#[test]
fn sat_of_t2_t5() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.0).unwrap();
    let id = |l: &str, op: &str, r: &str| {
        ps.find_named(Pattern::CrossTuple, l, Operator::from_symbol(op).unwrap(), r)
            .unwrap()
    };
    let s25 = sat(&d, &ps, 1, 4);
    for p in [
        id("Name", "!=", "Name"),
        id("Income", ">", "Income"),
        id("Income", ">=", "Income"),
        id("Income", ">", "Tax"),
        id("Income", ">=", "Tax"),
    ] {
        assert!(s25.contains(p), "{}", ps.render(p));
    }
    let s52 = sat(&d, &ps, 4, 1);
    assert!(s52.contains(id("Income", "<", "Income")));
    assert!(s52.contains(id("Income", "<=", "Income")));
    assert!(!s52.contains(id("Income", ">", "Income")));
}

#[test]
fn pair_counts() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.3).unwrap();
    let (e, v) = build_evidence(&d, &ps).unwrap();
    assert_eq!(e.total_pairs(), 210);
    assert_eq!(e.pair_universe(), 210);
    for s in 0..e.len() {
        let incidence: u64 = v.entries(s).iter().map(|&(_, c)| u64::from(c)).sum();
        assert_eq!(incidence, 2 * e.multiplicity(s));
    }
}

#[test]
fn example_violation_rates() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.3).unwrap();
    let (e, v) = build_evidence(&d, &ps).unwrap();
    let h1 = dc_hitting_set(&ps, &PHI1);
    let h2 = dc_hitting_set(&ps, &PHI2);

    assert_eq!(e.uncovered_weight(&h1), 2);
    assert_eq!(e.uncovered_weight(&h2), 16);
    assert_eq!(f1_score(&e, &h1).unwrap(), 1.0 - 2.0 / 210.0);

    let f2 = CleanTupleFraction::new(&e, &v);
    assert_eq!(f2.problematic(&e.uncovered(&h1)), vec![5, 6, 13, 14]);
    assert_eq!(f2.problematic(&e.uncovered(&h2)), (5..13).chain([14]).collect::<Vec<_>>());
    assert_eq!(f2_score(&e, &v, &h2), 1.0 - 9.0 / 15.0);
}

#[test]
fn example_repairs() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.3).unwrap();
    let (e, v) = build_evidence(&d, &ps).unwrap();
    let h1 = dc_hitting_set(&ps, &PHI1);
    let h2 = dc_hitting_set(&ps, &PHI2);

    assert_eq!(min_repair_removals(&d, &ps, &h1).unwrap(), 2);
    assert_eq!(min_repair_removals(&d, &ps, &h2).unwrap(), 1);
    assert_eq!(exact_f3_bruteforce(&d, &ps, &h1).unwrap(), 13.0 / 15.0);
    assert_eq!(exact_f3_bruteforce(&d, &ps, &h2).unwrap(), 14.0 / 15.0);

    let greedy = GreedyRepair::new(&e, &v);
    let r2 = greedy.removal(&e.uncovered(&h2));
    assert_eq!(r2.removed, vec![14]);
    assert_eq!((r2.violations, r2.covered), (16, 16));
    assert_eq!(greedy_f3_accept(&e, &v, &h2, 0.07), (true, 1));
    assert!(greedy.accepts(&e.uncovered(&h2), 0.07));

    // Each of t6, t7, t14, t15 takes part in exactly one violating pair.
    let r1 = greedy.removal(&e.uncovered(&h1));
    assert_eq!(r1.removed, vec![5, 6]);
    assert_eq!((r1.violations, r1.covered), (2, 2));
    assert_eq!(greedy_f3_accept(&e, &v, &h1, 0.05), (false, 2));
    assert!(!greedy.accepts(&e.uncovered(&h1), 0.05));

    assert!(prefilter_2eps(&e, &h2, 0.05));
    assert!(!prefilter_2eps(&e, &h2, 0.03));
}

#[test]
fn enumeration_at_one_percent() {
    let d = table1();
    let ps = PredicateSpace::generate(&d, 0.3).unwrap();
    let (e, _) = build_evidence(&d, &ps).unwrap();
    let f = PairFraction::new(&e).unwrap();
    let (out, stats) = adc_enum_collect(&e, &ps, &f, 0.01);
    let found: Vec<&PredicateSet> = out.iter().map(|em| &em.hitting_set).collect();
    assert!(found.contains(&&dc_hitting_set(&ps, &PHI1)));
    assert!(!found.contains(&&dc_hitting_set(&ps, &PHI2)));
    assert_eq!(stats.emitted, out.len());
    assert!(!stats.empty_accepted);

    let oracle_ok = out.iter().all(|em| {
        let u = e.uncovered(&em.hitting_set);
        f.accepts(&u, 0.01)
            && em.hitting_set.iter().all(|p| {
                let mut smaller = em.hitting_set.clone();
                smaller.remove(p);
                !f.accepts(&e.uncovered(&smaller), 0.01)
            })
    });
    assert!(oracle_ok);
}
