use proptest::prelude::*;

use pcac::codes::{
    bounds_weight3, difference_sets_overlap, exact_m_weight2, is_pcac, is_ui, PcacVerdict, SequenceSet, UiOptions,
    UiVerdict,
};
use pcac::constructions::pcac_ui;
use pcac::diffsets::{dts_to_dds, singer_dds, skolem_dts};
use pcac::packing::{code_to_packing, is_packing};
use pcac::search::{df_search, max_packing_exact, DfOutcome};

#[test]
fn weight2_formula_is_non_increasing_in_delta() {
    for n in 3..=60 {
        let values: Vec<u64> = (0..n).map(|d| exact_m_weight2(n, d).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] >= w[1]), "n = {n}: {values:?}");
        assert_eq!(values[n - 1], (n / 2) as u64);
    }
}

// Several instances from n = 14 on (Δ = 1 and 2 above all) need millions
// of nodes; past n = 13 they get a small budget and may stay open.
#[test]
fn weight3_bounds_hold_for_small_n() {
    let mut open = Vec::new();
    for n in 7..=19 {
        for delta in 0..=5.min(n / 2 - 1) {
            let budget = if n <= 13 { 100_000 } else { 5_000 };
            let r = max_packing_exact(n, 3, delta, budget).unwrap();
            let m = r.size as u64;
            assert!(m <= r.root_bound as u64);
            if !r.complete {
                assert!(n > 13, "n = {n}, delta = {delta} should finish");
                open.push((n, delta));
                continue;
            }
            let b = bounds_weight3(n, delta).unwrap();
            assert!(
                b.lower <= m && m <= b.upper.unwrap(),
                "n = {n}, delta = {delta}: {b:?} vs {m}"
            );
        }
    }
    eprintln!("undecided within budget: {open:?}");
}

#[test]
fn conflict_avoiding_codes_have_disjoint_difference_sets() {
    for q in [2, 3, 4, 5] {
        let dds = singer_dds(q).unwrap();
        let code = pcac_ui(&dds, dds.modulus() - 1).unwrap();
        assert_eq!(difference_sets_overlap(&code), None);
    }
    for r in 1..=6 {
        let dts = skolem_dts(r).unwrap();
        let n = 2 * dts.scope() as usize + 1;
        let code = pcac_ui(&dts_to_dds(&dts, n).unwrap(), n - 1).unwrap();
        assert!(is_pcac(&code).is_valid());
        assert_eq!(difference_sets_overlap(&code), None);
    }
}

#[test]
fn packing_verdict_matches_pcac_on_constructed_codes() {
    for (n, k, r) in [(19, 3, 3), (25, 3, 4), (37, 4, 3), (13, 3, 2)] {
        let DfOutcome::Found(dds) = df_search(n, k, r, 10_000_000).unwrap().outcome else {
            panic!("({n},{k},{r}) should exist");
        };
        for delta in 0..n / 2 {
            let code = pcac_ui(&dds, delta).unwrap();
            let p = code_to_packing(&code).unwrap();
            assert!(is_packing(p.members(), n, delta).unwrap().is_valid());
            // Loosening the shift bound past the construction may break both.
            if delta + 1 < n / 2 {
                let wider = code.with_delta(delta + 1).unwrap();
                let packing = is_packing(p.members(), n, delta + 1).unwrap().is_valid();
                assert_eq!(packing, is_pcac(&wider).is_valid());
            }
        }
    }
}

fn small_pcac() -> impl Strategy<Value = SequenceSet> {
    (
        prop::sample::select(vec![(19usize, 3usize, 3usize), (13, 3, 2), (37, 4, 3)]),
        0usize..4,
    )
        .prop_map(|((n, k, r), delta)| {
            let DfOutcome::Found(dds) = df_search(n, k, r, 10_000_000).unwrap().outcome else {
                unreachable!()
            };
            pcac_ui(&dds, delta).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pcac_codes_are_ui(code in small_pcac(), take in 3usize..8, active in 2usize..4) {
        prop_assert_eq!(is_pcac(&code), PcacVerdict::Valid);
        let seqs = &code.sequences()[..take.min(code.len())];
        let k = active.min(code.weight()).min(seqs.len());
        let opts = UiOptions { samples: Some(2_000), ..UiOptions::default() };
        let report = is_ui(seqs, k, code.delta(), &opts).unwrap();
        let clean = matches!(report.verdict, UiVerdict::Verified | UiVerdict::SampledClean { .. });
        prop_assert!(clean, "verdict {:?}", report.verdict);
    }
}
