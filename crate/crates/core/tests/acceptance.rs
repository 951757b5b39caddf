//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use pcac::codes::{bounds_weight3, bounds_weight3_real, exact_m_weight2, is_pcac, is_ui, UiOptions, UiVerdict};
use pcac::constructions::{compare_periods, gf_ui, loglog_slope, pcac_ui, sweep, Approach, CompareOptions};
use pcac::diffsets::{bose_dds, is_dds, is_dts, singer_dds, skolem_dts, DisjointDifferenceSet, DtsVerdict};
use pcac::numtheory::primes_in;
use pcac::packing::{edge_difference, supporting_graph, supporting_graph_size_weight3, Edge};
use pcac::search::{df_search, max_packing_exact, table3_row, DfOutcome, DEFAULT_NODE_BUDGET};
use pcac::seqcore::CharacteristicSet;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn example_dds() -> DisjointDifferenceSet {
    DisjointDifferenceSet::new(19, vec![vec![0, 4, 5], vec![0, 6, 8], vec![0, 7, 10]]).unwrap()
}

const PRINTED: [&str; 9] = [
    "1000110000000000000",
    "0000001000110000000",
    "0000000000001000110",
    "1000001010000000000",
    "0000001000001010000",
    "0100000000001000001",
    "1000000100100000000",
    "0000001000000100100",
    "1001000000001000000",
];

fn c1_worked_example() -> Outcome {
    let start = Instant::now();
    let code = pcac_ui(&example_dds(), 5).map_err(|e| e.to_string())?;
    let got: Vec<String> = code.sequences().iter().map(|s| s.to_string()).collect();
    ensure(got == PRINTED, || format!("sequences differ: {got:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok("9 sequences match bit for bit".into())
}

fn c2_worked_example_ui() -> Outcome {
    let start = Instant::now();
    let code = pcac_ui(&example_dds(), 5).map_err(|e| e.to_string())?;
    let report = is_ui(code.sequences(), 3, 5, &UiOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.verdict == UiVerdict::Verified, || {
        format!("UI verdict {:?}", report.verdict)
    })?;
    ensure(report.evaluated == 18_144, || {
        format!("{} configurations", report.evaluated)
    })?;
    ensure(is_pcac(&code).is_valid(), || "PCAC check failed".into())?;
    within(start, Duration::from_secs(1))?;
    Ok("18144 configurations, PCAC holds".into())
}

fn c3_weight2_exact() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 3..=14 {
        for delta in 0..n / 2 {
            let r = max_packing_exact(n, 2, delta, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            let formula = exact_m_weight2(n, delta).map_err(|e| e.to_string())?;
            ensure(r.complete, || format!("n={n} delta={delta}: search incomplete"))?;
            ensure(r.size as u64 == formula, || {
                format!("n={n} delta={delta}: search {} vs formula {formula}", r.size)
            })?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{count} instances agree"))
}

fn c4_collapse() -> Outcome {
    let mut checked = 0;
    for k in [2usize, 3] {
        for n in k + 1..=12 {
            let a = max_packing_exact(n, k, n / 2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            let b = max_packing_exact(n, k, n - 1, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            ensure(a.complete && b.complete, || format!("n={n} k={k}: search incomplete"))?;
            ensure(a.size == b.size, || {
                format!("n={n} k={k}: M at floor(n/2) = {}, at n-1 = {}", a.size, b.size)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, k) pairs agree"))
}

fn c5_edge_counts() -> Outcome {
    let mut checked = 0;
    for n in [8usize, 9, 19, 23] {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let diffs = [(a, b), (a, c), (b, c)].map(|(u, v)| edge_difference(Edge::new(u, v, n).unwrap(), n));
                    let repeated = if diffs[0] == diffs[1] || diffs[0] == diffs[2] {
                        diffs[0]
                    } else if diffs[1] == diffs[2] {
                        diffs[1]
                    } else {
                        continue;
                    };
                    if 3 * repeated == n {
                        continue;
                    }
                    let set = CharacteristicSet::new(n, [a, b, c]).unwrap();
                    for delta in 0..n / 2 {
                        let got = supporting_graph(&set, delta).unwrap().len();
                        let want = supporting_graph_size_weight3(repeated, delta, n).unwrap();
                        ensure(got == want, || format!("A={set} n={n} delta={delta}: {got} vs {want}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    let fig_a = supporting_graph(&CharacteristicSet::new(8, [0, 1, 2]).unwrap(), 2)
        .unwrap()
        .len();
    let fig_b = supporting_graph(&CharacteristicSet::new(8, [3, 5, 7]).unwrap(), 2)
        .unwrap()
        .len();
    ensure((fig_a, fig_b) == (7, 8), || format!("anchors gave {fig_a} and {fig_b}"))?;
    Ok(format!("{checked} (A, delta) cases plus anchors 7 and 8"))
}

const TABLE2_N: [usize; 18] = [
    200, 400, 600, 800, 1000, 1200, 1400, 1600, 1800, 2000, 2200, 2400, 2600, 2800, 3000, 3200, 3400, 3600,
];
const TABLE2_LOWER: [u64; 18] = [
    429, 1254, 2277, 3591, 4980, 6567, 8388, 10374, 12259, 14319, 16470, 19152, 21650, 23766, 26447, 29315, 32262,
    35341,
];

/// (n, Δ, lower, optimum, upper).
type Instance = (usize, usize, u64, usize, u64);

/// The weight-3 instances, searched once and shared.
fn weight3_instances() -> &'static Result<Vec<Instance>, String> {
    static CELL: OnceLock<Result<Vec<Instance>, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for n in [7usize, 13, 19] {
            for delta in [0usize, 1, 2, 5] {
                if delta >= n / 2 {
                    continue;
                }
                let r = max_packing_exact(n, 3, delta, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
                if !r.complete {
                    return Err(format!(
                        "n={n} delta={delta}: search incomplete after {} nodes",
                        r.nodes
                    ));
                }
                let b = bounds_weight3(n, delta).map_err(|e| e.to_string())?;
                out.push((n, delta, b.lower, r.size, b.upper.unwrap()));
            }
        }
        Ok(out)
    })
}

fn c6_table2() -> Outcome {
    for (i, &n) in TABLE2_N.iter().enumerate() {
        let b = bounds_weight3_real(n, (n as f64).sqrt()).map_err(|e| e.to_string())?;
        ensure(b.lower == TABLE2_LOWER[i], || {
            format!("n={n}: lower {} vs {}", b.lower, TABLE2_LOWER[i])
        })?;
        let upper = b.upper.unwrap();
        ensure(upper >= TABLE2_LOWER[i], || {
            format!("n={n}: upper {upper} below {}", TABLE2_LOWER[i])
        })?;
    }
    let inst = weight3_instances().as_ref().map_err(Clone::clone)?;
    for &(n, delta, _, opt, upper) in inst {
        ensure(opt as u64 <= upper, || {
            format!("n={n} delta={delta}: optimum {opt} above {upper}")
        })?;
    }
    Ok(format!(
        "18 lower entries exact; upper dominates on {} searched instances",
        inst.len()
    ))
}

fn c7_table3() -> Outcome {
    let start = Instant::now();
    let rows = [
        (13usize, 4usize, 2usize),
        (37, 4, 15),
        (61, 4, 30),
        (41, 5, 10),
        (31, 6, 4),
    ];
    for (n, k, want) in rows {
        let row = table3_row(n, k, DEFAULT_NODE_BUDGET).map_err(|e| format!("({n},{k}): {e}"))?;
        ensure(row.value == want, || format!("({n},{k}): {} vs {want}", row.value))?;
        ensure(row.code.len() == want && is_pcac(&row.code).is_valid(), || {
            format!("({n},{k}): code not verified")
        })?;
    }
    let r = df_search(61, 6, 2, u64::MAX).map_err(|e| e.to_string())?;
    ensure(r.outcome == DfOutcome::Exhausted, || format!("(61,6): {:?}", r.outcome))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("5 rows match; no (61,6)-DF after {} nodes", r.nodes))
}

fn c8_weight3_sandwich() -> Outcome {
    let start = Instant::now();
    let inst = weight3_instances().as_ref().map_err(Clone::clone)?;
    let mut parts = Vec::new();
    for &(n, delta, lower, opt, upper) in inst {
        ensure(lower <= opt as u64 && opt as u64 <= upper, || {
            format!("n={n} delta={delta}: {lower} <= {opt} <= {upper} fails")
        })?;
        parts.push(format!("M_{delta}({n},3)={opt}"));
    }
    within(start, Duration::from_secs(600))?;
    Ok(parts.join(" "))
}

fn c9_skolem() -> Outcome {
    for r in 1..=40u64 {
        let dts = skolem_dts(r).map_err(|e| e.to_string())?;
        let want = if r % 4 <= 1 { 3 * r } else { 3 * r + 1 };
        let v = is_dts(dts.blocks()).map_err(|e| e.to_string())?;
        ensure(v == DtsVerdict::Valid { scope: want }, || format!("r={r}: {v:?}"))?;
    }
    Ok("r = 1..40 valid with optimal scope".into())
}

fn c10_singer_bose() -> Outcome {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let s = singer_dds(q).map_err(|e| e.to_string())?;
        let n = s.modulus();
        ensure(
            n as u64 == q * q + q + 1 && s.differences() == (1..n).collect::<Vec<_>>(),
            || format!("Singer q={q} is not perfect"),
        )?;
    }
    for q in [3u64, 4, 5, 7, 8, 9] {
        let b = bose_dds(q).map_err(|e| e.to_string())?;
        let ok =
            b.modulus() as u64 == q * q - 1 && is_dds(b.blocks(), b.modulus()).map_err(|e| e.to_string())?.is_valid();
        ensure(ok, || format!("Bose q={q} fails"))?;
    }
    Ok("Singer perfect for 7 orders, Bose valid for 6".into())
}

fn c11_gf_ui() -> Outcome {
    let start = Instant::now();
    for delta in 0..=2 {
        let set = gf_ui(3, 2, delta).map_err(|e| e.to_string())?;
        let r = is_ui(set.sequences(), 3, delta, &UiOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.verdict == UiVerdict::Verified, || {
            format!("delta={delta}: {:?}", r.verdict)
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("q=3, m=2 UI for delta 0, 1, 2".into())
}

fn c12_comparison() -> Outcome {
    let c = compare_periods(9, 3, 5, &CompareOptions::default()).map_err(|e| e.to_string())?;
    let pcac = c.pcac_period();
    let tdma = c.period(Approach::Tdma);
    let gf = c.period(Approach::Gf);
    ensure(pcac == Some(19), || format!("PCAC period {pcac:?}"))?;
    ensure(tdma.is_some_and(|t| t > 45), || format!("TDMA period {tdma:?}"))?;
    ensure(gf.is_some_and(|g| g >= 54), || format!("GF period {gf:?}"))?;
    ensure(c.row(Approach::PcacDds).is_some_and(|r| r.verified), || {
        "PCAC row not verified".into()
    })?;
    Ok(format!(
        "PCAC 19, TDMA {} > 45, GF {} >= 54",
        tdma.unwrap(),
        gf.unwrap()
    ))
}

fn c13_slopes() -> Outcome {
    let ks = primes_in(31, 97);
    let rows = sweep(&ks, &CompareOptions::default()).map_err(|e| e.to_string())?;
    let mut pcac = Vec::new();
    let mut tdma = Vec::new();
    for (k, c) in ks.iter().zip(&rows) {
        let p = c.pcac_period().ok_or_else(|| format!("k={k}: no PCAC period"))?;
        let t = c
            .period(Approach::Tdma)
            .ok_or_else(|| format!("k={k}: no TDMA period"))?;
        pcac.push((*k as f64, p as f64));
        tdma.push((*k as f64, t as f64));
    }
    let sp = loglog_slope(&pcac);
    let st = loglog_slope(&tdma);
    ensure((sp - 3.0).abs() <= 0.3, || format!("PCAC slope {sp:.3}"))?;
    ensure((st - 4.0).abs() <= 0.3, || format!("TDMA slope {st:.3}"))?;
    Ok(format!(
        "PCAC slope {sp:.3}, TDMA slope {st:.3} over {} primes",
        ks.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 13] = [
        ("worked example reproduced bit for bit", c1_worked_example),
        ("worked example passes UI and PCAC checks", c2_worked_example_ui),
        ("weight-2 formula equals exhaustive optimum", c3_weight2_exact),
        ("shift-bound collapse at floor(n/2)", c4_collapse),
        ("weight-3 supporting graph edge counts", c5_edge_counts),
        ("sqrt(n) lower-bound row and upper-bound dominance", c6_table2),
        ("difference-family rows and (61,6) nonexistence", c7_table3),
        ("weight-3 optimum between the bounds", c8_weight3_sandwich),
        ("Skolem difference triangle scopes", c9_skolem),
        ("Singer and Bose designs", c10_singer_bose),
        ("polynomial construction is UI", c11_gf_ui),
        ("nine-user period comparison", c12_comparison),
        ("asymptotic period slopes", c13_slopes),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{t:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
