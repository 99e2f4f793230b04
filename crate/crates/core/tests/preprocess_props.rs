mod common;

use proptest::prelude::*;

use common::{formula, game_partition, word, GAME_ATOMS};
use ltlfsynt::ltlf::{eval_word, Formula, Semantics, Vocabulary};
use ltlfsynt::oracle::explicit_realizable;
use ltlfsynt::preprocess::{decompose, polarity_prune, solve_decomposed, synthesize, PipelineOptions};

fn conjunction() -> impl Strategy<Value = Formula> {
    proptest::collection::vec(formula(GAME_ATOMS, 3), 1..4).prop_map(Formula::and)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parts_have_disjoint_outputs_and_conjoin_back(f in conjunction(), w in word(4, 5)) {
        let part = game_partition();
        let d = decompose(f, &part);
        let mut seen: Vec<String> = Vec::new();
        for (_, p) in &d.parts {
            for o in &p.outputs {
                prop_assert!(!seen.contains(o));
                seen.push(o.clone());
            }
        }
        let v = Vocabulary::from_names(GAME_ATOMS).unwrap();
        let joined = Formula::and(d.parts.iter().map(|(g, _)| *g));
        prop_assert_eq!(eval_word(joined, &v, &w, 0).unwrap(), eval_word(f, &v, &w, 0).unwrap());
    }

    #[test]
    fn pruning_preserves_verdicts(f in formula(GAME_ATOMS, 5), moore in any::<bool>()) {
        let sem = if moore { Semantics::Moore } else { Semantics::Mealy };
        let part = game_partition();
        let (g, _, _) = polarity_prune(f, &part);
        prop_assert_eq!(
            explicit_realizable(g, &part, sem).unwrap(),
            explicit_realizable(f, &part, sem).unwrap()
        );
    }

    #[test]
    fn pipeline_toggles_preserve_verdicts(f in conjunction(), moore in any::<bool>(), bits in 0u32..32) {
        let sem = if moore { Semantics::Moore } else { Semantics::Mealy };
        let part = game_partition();
        let mut o = PipelineOptions::default();
        o.preprocess = bits & 1 != 0;
        o.decompose = bits & 2 != 0;
        o.solve.one_step = bits & 4 != 0;
        o.solve.early_exit = bits & 8 != 0;
        o.threads = if bits & 16 != 0 { 3 } else { 1 };
        prop_assert_eq!(
            solve_decomposed(f, &part, sem, &o).unwrap().is_realizable(),
            explicit_realizable(f, &part, sem).unwrap()
        );
    }

    #[test]
    fn pruned_strategies_satisfy_the_original(f in conjunction(), moore in any::<bool>()) {
        let sem = if moore { Semantics::Moore } else { Semantics::Mealy };
        let (r, m) = synthesize(f, &game_partition(), sem, &PipelineOptions::default()).unwrap();
        prop_assert_eq!(r.is_realizable(), m.is_some());
        if let Some(m) = m {
            prop_assert!(m.verify(f, 5_000).unwrap() > 0);
        }
    }
}
