use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use pcac::codes::{is_pcac, SequenceSet};
use pcac::diffsets::{is_dds, DisjointDifferenceSet};
use pcac::formats::{
    parse_dds, parse_packing, parse_sequence_set, read_sequence_set, sequence_set_to_json, write_dds, write_packing,
    write_sequence_set,
};
use pcac::packing::{
    code_to_packing, dds_to_packing, edge_difference, is_packing, packing_to_code, supporting_graph,
    supporting_graph_size_weight3, Edge,
};
use pcac::search::{df_search, DfOutcome};
use pcac::seqcore::{
    hamming_xcorr_bounded, xcorr_profile_sets, xcorr_profile_words, BinarySequence, CharacteristicSet,
};

fn subset(n: usize, k: usize) -> impl Strategy<Value = CharacteristicSet> {
    btree_set(0..n, k).prop_map(move |s| CharacteristicSet::new(n, s).unwrap())
}

/// A family of `count` distinct weight-`k` sets mod `n`.
fn family(n: usize, k: usize, count: usize) -> impl Strategy<Value = Vec<CharacteristicSet>> {
    vec(subset(n, k), count).prop_filter("distinct", |v| {
        let mut e: Vec<_> = v.iter().map(|s| s.elements().to_vec()).collect();
        e.sort();
        e.dedup();
        e.len() == v.len()
    })
}

fn repeated_difference(set: &CharacteristicSet) -> Option<usize> {
    let n = set.modulus();
    let e = set.elements();
    let d = [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])].map(|(a, b)| edge_difference(Edge::new(a, b, n).unwrap(), n));
    if d[0] == d[1] || d[0] == d[2] {
        Some(d[0])
    } else if d[1] == d[2] {
        Some(d[1])
    } else {
        None
    }
}

proptest! {
    #[test]
    fn weight3_edge_count_matches_formula((n, set, delta) in (7usize..40).prop_flat_map(|n| (Just(n), subset(n, 3), 0..n / 2))) {
        if let Some(d) = repeated_difference(&set) {
            if 3 * d != n {
                let got = supporting_graph(&set, delta).unwrap().len();
                prop_assert_eq!(got, supporting_graph_size_weight3(d, delta, n).unwrap());
            }
        } else {
            prop_assert!(supporting_graph(&set, delta).unwrap().len() <= 3 * (delta + 1));
        }
    }

    #[test]
    fn packing_iff_pcac((n, k, delta, sets) in (6usize..24, 2usize..4).prop_flat_map(|(n, k)| {
        (Just(n), Just(k), 0..n / 2, (2usize..5).prop_flat_map(move |c| family(n, k, c)))
    })) {
        let seqs: Vec<_> = sets.iter().map(|s| BinarySequence::from_characteristic_set(s, None).unwrap()).collect();
        let code = SequenceSet::new(n, k, delta, seqs).unwrap();
        let packing = is_packing(&sets, n, delta).unwrap().is_valid();
        prop_assert_eq!(packing, is_pcac(&code).is_valid());
    }

    #[test]
    fn bounded_xcorr_agrees_across_methods((n, x, y, delta) in (2usize..150).prop_flat_map(|n| {
        (Just(n), vec(any::<bool>(), n), vec(any::<bool>(), n), 0..n)
    })) {
        let x = BinarySequence::from_bits(x).unwrap();
        let y = BinarySequence::from_bits(y).unwrap();
        let a = xcorr_profile_sets(&x, &y, delta);
        prop_assert_eq!(&a, &xcorr_profile_words(&x, &y, delta));
        let naive: Vec<usize> = (0..=delta)
            .map(|t| (0..n).filter(|&i| x.get(i) && y.get((i + n - t) % n)).count())
            .collect();
        prop_assert_eq!(&a, &naive);
        prop_assert_eq!(hamming_xcorr_bounded(&x, &y, delta).unwrap(), *a.iter().max().unwrap());
    }

    #[test]
    fn sequence_set_round_trips(sets in (8usize..40).prop_flat_map(|n| family(n, 3, 4))) {
        let n = sets[0].modulus();
        let seqs: Vec<_> = sets.iter().map(|s| BinarySequence::from_characteristic_set(s, None).unwrap()).collect();
        let code = SequenceSet::new(n, 3, 1, seqs).unwrap();
        let back = parse_sequence_set(&write_sequence_set(&code)).unwrap();
        prop_assert_eq!(back.sequences(), code.sequences());
        let json = read_sequence_set(&sequence_set_to_json(&code, None)).unwrap();
        prop_assert_eq!(json.sequences(), code.sequences());
        prop_assert_eq!(json.delta(), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dds_translates_form_a_packing((n, r, delta) in (13usize..40).prop_flat_map(|n| (Just(n), 1usize..3, 0usize..4))) {
        let found = df_search(n, 3, r, 200_000).unwrap();
        if let DfOutcome::Found(dds) = found.outcome {
            prop_assert!(is_dds(dds.blocks(), n).unwrap().is_valid());
            if let Ok(p) = dds_to_packing(&dds, delta) {
                prop_assert_eq!(p.len(), r * (n / (delta + 1)));
                prop_assert!(is_packing(p.members(), n, delta).unwrap().is_valid());
                let code = packing_to_code(&p).unwrap();
                prop_assert!(is_pcac(&code).is_valid());
                let again = code_to_packing(&code).unwrap();
                prop_assert_eq!(again.members(), p.members());

                let text = write_packing(&p);
                let parsed = parse_packing(&text).unwrap();
                prop_assert_eq!(parsed.members, p.members().to_vec());

                let dtext = write_dds(&dds);
                let back = parse_dds(&dtext).unwrap();
                prop_assert_eq!(DisjointDifferenceSet::new(back.n, back.blocks).unwrap(), dds);
            }
        }
    }
}
