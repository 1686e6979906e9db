mod support;

use std::collections::BTreeSet;

use aspt_core::families::{add_random_redundancy, red_star};
use aspt_core::formats::*;
use aspt_core::proofkit::check_res_proof;
use aspt_core::tableau::solve;
use aspt_core::{Clause, ClauseSet, EngineConfig, ExtensionSet, Outcome};
use proptest::prelude::*;
use support::*;

fn prog_strategy(tight: bool) -> impl Strategy<Value = Prog> {
    any::<u64>().prop_map(move |seed| {
        use rand::SeedableRng;
        random_prog(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), 6, 10, tight)
    })
}

fn cnf_strategy() -> impl Strategy<Value = (u32, Vec<Vec<i32>>)> {
    (1u32..=6).prop_flat_map(|nv| {
        let lit = (1..=nv as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        (Just(nv), prop::collection::vec(prop::collection::vec(lit, 1..=3), 1..=20))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn program_text_round_trips(p in prog_strategy(false)) {
        let a = parse_program(&p.text()).unwrap();
        let b = parse_program(&serialize_program(&a)).unwrap();
        prop_assert_eq!(a.rule_set(), b.rule_set());
        prop_assert_eq!(a.rules().len(), b.rules().len());
    }

    #[test]
    fn dimacs_round_trips((nv, raw) in cnf_strategy()) {
        let cs = ClauseSet::new(nv, raw.iter().map(|c| Clause::from_dimacs(c)).collect());
        let back = parse_dimacs(&serialize_dimacs(&cs)).unwrap();
        prop_assert_eq!(back.num_vars(), cs.num_vars());
        prop_assert_eq!(back.clauses(), cs.clauses());
    }

    #[test]
    fn refutations_round_trip_and_check((nv, raw) in cnf_strategy()) {
        if let Some(proof) = dpll_refutation(nv, &raw) {
            let cs = ClauseSet::new(nv, raw.iter().map(|c| Clause::from_dimacs(c)).collect());
            let back = parse_res_proof(&serialize_res_proof(&proof)).unwrap();
            prop_assert!(check_res_proof(&cs, &back).is_valid());
            prop_assert_eq!(back.steps.len(), proof.steps.len());
        } else {
            prop_assert!(!cnf_models(nv, &raw).is_empty());
        }
    }

    #[test]
    fn engine_agrees_with_oracle(p in prog_strategy(false), la in any::<bool>()) {
        let program = parse_program(&p.text()).unwrap();
        let oracle: BTreeSet<BTreeSet<String>> = p.stable_models().into_iter().map(|m| p.names_of(m)).collect();
        let cfg = EngineConfig::preset(aspt_core::tableau::Preset::Smodels).with_lookahead(la);
        match solve(&program, &ExtensionSet::new(), &cfg).unwrap().outcome {
            Outcome::Sat { model, .. } => {
                let names: BTreeSet<String> = program.names_of(&model).into_iter().collect();
                prop_assert!(oracle.contains(&names));
            }
            Outcome::Unsat { .. } => prop_assert!(oracle.is_empty()),
            Outcome::Unknown => prop_assert!(false, "no answer"),
        }
    }

    #[test]
    fn redundancy_count_and_red_star((seed, n, pct) in (any::<u64>(), 1usize..6, 0usize..500)) {
        let php = aspt_core::families::gen_php(n).unwrap();
        let out = add_random_redundancy(&php, n, pct, seed).unwrap();
        prop_assert_eq!(out.rules().len() - php.rules().len(), pct * n / 100);
        let again = add_random_redundancy(&php, n, pct, seed).unwrap();
        prop_assert_eq!(out.rules(), again.rules());
        let reduced = red_star(&out);
        prop_assert!(reduced.rule_set().is_subset(&out.rule_set()));
        prop_assert!(php.rule_set().is_subset(&reduced.rule_set()));
    }
}
