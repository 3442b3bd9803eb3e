use fpq_core::oracle::{classify_fragment, gen_p_rdf, gen_random, gen_strongly_acyclic, is_strongly_acyclic, Profile};
use fpq_core::{
    decide_membership, eval_query, eval_query_timed, parse_query, HeterogeneousDb, Mapping, Query, RdfGraph,
    RelDatabase, Triple,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shuffled(q: &Query, seed: u64) -> Query {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rules = q.rules.clone();
    rules.shuffle(&mut rng);
    for r in &mut rules {
        r.triple_atoms.shuffle(&mut rng);
        r.rel_atoms.shuffle(&mut rng);
    }
    Query::new(rules).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn atom_and_rule_order_is_irrelevant(seed in any::<u64>(), perm in any::<u64>()) {
        let (d, q) = gen_random(seed, &Profile::default());
        prop_assert_eq!(eval_query(&d, &q).unwrap(), eval_query(&d, &shuffled(&q, perm)).unwrap());
    }

    #[test]
    fn timed_and_optimized_modes_agree(seed in any::<u64>()) {
        let (d, q) = gen_random(seed, &Profile::default());
        let plain = eval_query(&d, &q).unwrap();
        let (timed, report) = eval_query_timed(&d, &q).unwrap();
        prop_assert_eq!(report.total.solutions, plain.len());
        prop_assert_eq!(timed, plain);
    }

    #[test]
    fn membership_agrees_with_evaluation(seed in any::<u64>()) {
        let (d, q) = gen_random(seed, &Profile::default());
        let result = eval_query(&d, &q).unwrap();
        let head = q.head_vars();
        let adom: Vec<_> = d.graph.adom().into_iter().collect();
        for mu in result.iter() {
            prop_assert!(decide_membership(&d, &q, mu).unwrap());
        }
        if !adom.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4 {
                let mu = Mapping::from_pairs(head.iter().map(|v| (v.clone(), adom.choose(&mut rng).unwrap().clone())));
                prop_assert_eq!(decide_membership(&d, &q, &mu).unwrap(), result.contains(&mu));
            }
        }
    }

    #[test]
    fn classification_survives_reordering_and_reparsing(seed in any::<u64>(), perm in any::<u64>()) {
        let (_, q) = gen_random(seed, &Profile::default());
        let flags = classify_fragment(&q);
        prop_assert_eq!(classify_fragment(&shuffled(&q, perm)), flags);
        prop_assert_eq!(classify_fragment(&parse_query(&q.to_string()).unwrap()), flags);
    }
}

#[test]
fn next_and_next_next_conjunction_separates_triangles_from_forests() {
    let q = parse_query("q(?x, ?y) :- (?x, next, ?y), (?x, next/next, ?y)").unwrap();
    let triangle = RdfGraph::from_triples([Triple::new("a", "p", "b"), Triple::new("b", "p", "c"), Triple::new("a", "p", "c")]);
    assert!(!eval_query(&HeterogeneousDb::new(triangle, RelDatabase::new()), &q).unwrap().is_empty());

    let mut forests = 0;
    for seed in 0..200 {
        let g = if seed % 2 == 0 { gen_strongly_acyclic(seed, 10) } else { gen_p_rdf(seed, 6, 6) };
        if !is_strongly_acyclic(&g).unwrap() {
            continue;
        }
        forests += 1;
        let d = HeterogeneousDb::new(g, RelDatabase::new());
        assert!(eval_query(&d, &q).unwrap().is_empty(), "seed {seed}");
    }
    assert!(forests >= 100);
}
