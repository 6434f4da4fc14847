mod common;

use std::collections::BTreeMap;

use cohen_lab::approximation::{check_approximation, mask_elements, FiniteModelPair, Verdict};
use cohen_lab::bits::BinSeq;
use cohen_lab::cohen::{
    decode_blocks, decode_lambda, densify, densify_lambda, encode_blocks, encode_lambda, is_lambda_coded,
    is_split_coded, CohenOne, LambdaSplitCoded, ManyCondition, SplitCoded,
};
use cohen_lab::dictionary::{Dictionary, DictionaryMany};
use cohen_lab::iteration::{random_stages, DictionaryRule, StageSpec};
use cohen_lab::order::{build_generic, Filter, FinitePoset, Poset, DEFAULT_BUDGET};
use cohen_lab::projections::{lift_one, project_one};
use cohen_lab::sampling::{ManyDense, OneDense};
use cohen_lab::term::{catalog, equiv, eval_name, term_leq, term_to_cohen, default_labeler, Antichain, TermCondition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits(max: usize) -> impl Strategy<Value = BinSeq> {
    proptest::collection::vec(any::<bool>(), 0..=max).prop_map(|v| BinSeq::from_bits(&v).unwrap())
}

fn nonempty_bits(max: usize) -> impl Strategy<Value = BinSeq> {
    proptest::collection::vec(any::<bool>(), 1..=max).prop_map(|v| BinSeq::from_bits(&v).unwrap())
}

fn blocks() -> impl Strategy<Value = Vec<BinSeq>> {
    (bits(4), proptest::collection::vec(nonempty_bits(4), 0..5)).prop_map(|(first, rest)| {
        let mut v = vec![first];
        v.extend(rest);
        v
    })
}

fn slice(lambda: u32) -> impl Strategy<Value = ManyCondition> {
    proptest::collection::btree_map(0..lambda, nonempty_bits(3), 1..=lambda as usize)
        .prop_map(ManyCondition::from_entries)
}

fn dictionary() -> impl Strategy<Value = Dictionary> {
    prop_oneof![
        Just(Dictionary::Identity),
        Just(Dictionary::BitFlip),
        any::<u64>().prop_map(Dictionary::scrambled),
        Just(Dictionary::swap01()),
    ]
}

fn poset() -> impl Strategy<Value = FinitePoset> {
    let all = catalog(4);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn term_over(p: &FinitePoset, max_len: usize) -> impl Strategy<Value = TermCondition> {
    let acs: Vec<u32> = p.antichains();
    proptest::collection::vec(proptest::sample::select(acs), 0..=max_len)
        .prop_map(|v| TermCondition(v.into_iter().map(Antichain).collect()))
}

proptest! {
    #[test]
    fn blocks_round_trip(b in blocks()) {
        let c = encode_blocks(&b, 64).unwrap();
        prop_assert!(is_split_coded(&c.seq()));
        prop_assert_eq!(decode_blocks(&c), b.clone());
        let strings: Vec<String> = b.iter().map(ToString::to_string).collect();
        prop_assert_eq!(common::encode(&strings), Some(c.seq().to_string()));
    }

    #[test]
    fn decode_agrees_with_oracle(s in bits(21)) {
        if let Ok(c) = SplitCoded::new(s) {
            let ours: Vec<String> = decode_blocks(&c).iter().map(ToString::to_string).collect();
            prop_assert_eq!(ours, common::decode(&s.to_string()));
        } else {
            prop_assert!(!common::is_coded(&s.to_string()));
        }
    }

    #[test]
    fn densify_appends_one_or_zero_one(p in bits(20)) {
        let d = densify(&p, 64).unwrap().seq();
        prop_assert!(d.extends(&p));
        prop_assert!(is_split_coded(&d));
        let added = if p.len() % 2 == 0 { "1" } else { "01" };
        prop_assert_eq!(d.suffix_from(p.len()).to_string(), added);
    }

    #[test]
    fn lambda_round_trip(slices in proptest::collection::vec(slice(3), 0..4)) {
        let coded = encode_lambda(&slices, &LambdaSplitCoded::empty(), 64).unwrap();
        prop_assert!(is_lambda_coded(coded.condition()));
        prop_assert_eq!(decode_lambda(&coded), slices.clone());
        let raw: BTreeMap<u32, String> = coded.condition().iter().map(|(k, v)| (k, v.to_string())).collect();
        let oracle: Vec<BTreeMap<u32, String>> = slices
            .iter()
            .map(|s| s.iter().map(|(k, v)| (k, v.to_string())).collect())
            .collect();
        prop_assert_eq!(common::decode_many(&raw), oracle);
    }

    #[test]
    fn lambda_encoding_extends_its_base(
        first in proptest::collection::vec(slice(3), 0..3),
        second in proptest::collection::vec(slice(3), 0..3),
    ) {
        let base = encode_lambda(&first, &LambdaSplitCoded::empty(), 64).unwrap();
        let more = encode_lambda(&second, &base, 64).unwrap();
        prop_assert!(more.condition().extends(base.condition()));
        let mut all = first.clone();
        all.extend(second);
        prop_assert_eq!(decode_lambda(&more), all);
    }

    #[test]
    fn densify_lambda_extends(m in proptest::collection::btree_map(0u32..4, bits(5), 0..4)) {
        let p = ManyCondition::from_entries(m);
        let d = densify_lambda(&p, 64).unwrap();
        prop_assert!(d.condition().extends(&p));
        prop_assert!(is_lambda_coded(d.condition()));
    }

    #[test]
    fn dictionaries_are_length_preserving_bijections(d in dictionary(), s in bits(12)) {
        let f = d.forward(&s);
        prop_assert_eq!(f.len(), s.len());
        prop_assert_eq!(d.inverse(&f), s);
    }

    #[test]
    fn many_dictionaries_invert(seed in any::<u64>(), m in proptest::collection::btree_map(0u32..3, nonempty_bits(6), 0..3)) {
        let d = DictionaryMany::scrambled(seed, 3);
        let m = ManyCondition::from_entries(m);
        prop_assert_eq!(d.inverse(&d.forward(&m)), m);
    }

    #[test]
    fn project_one_preserves_order_and_lifts_exactly(d in dictionary(), p in bits(9), ext in bits(8), tail in bits(4)) {
        let p = densify(&p, 64).unwrap();
        let r = densify(&p.seq().concat(&ext).unwrap(), 64).unwrap();
        let (pp, pr) = (project_one(&d, &p).unwrap(), project_one(&d, &r).unwrap());
        prop_assert!(pr.extends(&pp));
        let q = pp.concat(&tail).unwrap();
        let lifted = lift_one(&d, &p, &q, 64).unwrap();
        prop_assert!(lifted.seq().extends(&p.seq()));
        prop_assert_eq!(project_one(&d, &lifted).unwrap(), q);
    }

    #[test]
    fn term_order_is_a_preorder((p, a, b, c) in poset().prop_flat_map(|p| {
        (Just(p.clone()), term_over(&p, 3), term_over(&p, 3), term_over(&p, 3))
    })) {
        prop_assert!(term_leq(&p, &a, &a));
        if term_leq(&p, &a, &b) && term_leq(&p, &b, &c) {
            prop_assert!(term_leq(&p, &a, &c));
        }
    }

    #[test]
    fn eval_name_is_monotone((p, q, tail, atom) in poset().prop_flat_map(|p| {
        let n = p.size();
        (Just(p.clone()), term_over(&p, 3), term_over(&p, 2), 0..n)
    })) {
        let mut longer = q.clone();
        longer.0.extend(tail.0);
        prop_assert!(term_leq(&p, &longer, &q));
        let g = Filter::principal(&p, &atom);
        prop_assert!(eval_name(&longer, &g).extends(&eval_name(&q, &g)));
    }

    #[test]
    fn eval_name_respects_equivalent_entries((p, q, picks) in poset().prop_flat_map(|p| {
        (Just(p.clone()), term_over(&p, 3), proptest::collection::vec(any::<prop::sample::Index>(), 3))
    })) {
        // replace every entry by some antichain with the same atom coverage
        let acs = p.antichains();
        let swapped = TermCondition(
            q.0.iter()
                .zip(&picks)
                .map(|(a, pick)| {
                    let class: Vec<u32> = acs.iter().copied().filter(|&b| equiv(&p, *a, Antichain(b))).collect();
                    Antichain(*pick.get(&class))
                })
                .collect(),
        );
        prop_assert!(term_leq(&p, &swapped, &q) && term_leq(&p, &q, &swapped));
        for atom in common::minimal_elements(&p) {
            let g = Filter::principal(&p, &atom);
            prop_assert_eq!(eval_name(&swapped, &g), eval_name(&q, &g));
        }
    }

    #[test]
    fn term_to_cohen_preserves_order((p, q, tail) in poset().prop_flat_map(|p| {
        (Just(p.clone()), term_over(&p, 3), term_over(&p, 2))
    })) {
        let labeler = default_labeler(&p);
        let mut longer = q.clone();
        longer.0.extend(tail.0);
        prop_assert!(term_to_cohen(&labeler, &longer).extends(&term_to_cohen(&labeler, &q)));
    }

    #[test]
    fn generic_filters_meet_their_families(seed in any::<u64>(), n in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = OneDense::random_family(&mut rng, n);
        let sets: Vec<_> = family.iter().map(OneDense::dense_set).collect();
        let poset = CohenOne::new(32);
        let g = build_generic(&poset, &sets, &poset.top(), DEFAULT_BUDGET).unwrap();
        prop_assert!(g.check(&poset).is_ok());
        prop_assert!(sets.iter().all(|d| g.meets(d)));
    }

    #[test]
    fn approximation_agrees_with_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = FiniteModelPair::random(&mut rng, 5);
        let explicit = |s: &std::collections::BTreeSet<u64>| s.iter().map(|&x| mask_elements(x)).collect();
        let oracle = common::approximation_oracle(m.universe, m.delta, &explicit(&m.w), &explicit(&m.v));
        let ours = match check_approximation(&m) {
            Verdict::Holds => None,
            Verdict::Counterexample { witness } => Some(witness),
        };
        prop_assert_eq!(ours, oracle);
    }

    #[test]
    fn model_pairs_round_trip_through_json(seed in any::<u64>()) {
        let m = FiniteModelPair::random(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        prop_assert_eq!(FiniteModelPair::from_json(&m.to_json().to_string()).unwrap(), m);
    }

    #[test]
    fn dense_specs_round_trip_through_json(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = OneDense::random_family(&mut rng, 5);
        let many = ManyDense::random_family(&mut rng, 3, 5);
        let back: Vec<OneDense> = serde_json::from_str(&serde_json::to_string(&one).unwrap()).unwrap();
        prop_assert_eq!(back, one);
        let back: Vec<ManyDense> = serde_json::from_str(&serde_json::to_string(&many).unwrap()).unwrap();
        prop_assert_eq!(back, many);
    }

    #[test]
    fn stage_specs_round_trip_through_json(seed in any::<u64>()) {
        let stages = random_stages(seed, 2, 2, 20, 3, DictionaryRule::SeededHash { seed });
        let back: Vec<StageSpec> = serde_json::from_str(&serde_json::to_string(&stages).unwrap()).unwrap();
        prop_assert_eq!(back, stages);
    }
}

#[test]
fn catalog_posets_are_partial_orders_with_top() {
    let all = catalog(4);
    assert_eq!(all.len(), 88);
    for p in &all {
        let n = p.size();
        for a in 0..n {
            assert!(p.le(a, a));
            assert!(p.le(a, p.top_index()));
            for b in 0..n {
                if a != b {
                    assert!(!(p.le(a, b) && p.le(b, a)));
                }
                for c in 0..n {
                    if p.le(a, b) && p.le(b, c) {
                        assert!(p.le(a, c));
                    }
                }
            }
        }
        let ours: Vec<Vec<usize>> = p.antichains().iter().map(|&m| Antichain(m).indices().collect()).collect();
        assert_eq!(ours.len(), common::antichains(p).len());
    }
}
