//! Sequence-set builders (TDMA, polynomial over GF(q), DDS translates) and
//! the minimal-period comparison between them.

use std::fmt::Write as _;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{dds_size_necessary, is_pcac, is_ui, ui_configurations, SequenceSet, UiOptions, UiVerdict};
use crate::diffsets::{bose_dds, dts_to_dds, singer_dds, skolem_dts, DisjointDifferenceSet};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::numtheory::{is_prime, next_prime, prime_power, prime_powers_in};
use crate::packing::{dds_to_packing, packing_to_code};
use crate::search::{df_search, multiplier_df_search, DfOutcome};
use crate::seqcore::BinarySequence;

/// k sequences of period k(Δ + 1); sequence i has its single 1 at i(Δ + 1).
pub fn tdma_ui(k: usize, delta: usize) -> Result<SequenceSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("TDMA needs at least one user".into()));
    }
    let n = k * (delta + 1);
    let seqs = (0..k)
        .map(|i| BinarySequence::from_bits((0..n).map(|t| t == i * (delta + 1))))
        .collect::<Result<Vec<_>>>()?;
    SequenceSet::new(n, 1, delta, seqs)
}

/// Largest k the polynomial construction over GF(q) with degree < m
/// supports: q ≥ (k - 1)(m - 1) + 1.
pub fn gf_max_active(q: u64, m: u32) -> u64 {
    (q - 1) / (m as u64 - 1) + 1
}

/// Cap on q^m for [`gf_ui`].
const GF_MAX_SEQUENCES: u64 = 1 << 20;

/// q^m sequences of period (Δ + 1)q² and weight q, one per polynomial f of
/// degree < m over GF(q).
///
/// Polynomials and field elements are numbered by their encodings. The
/// base sequence of f has a 1 at i·q + f(i) for every field element i,
/// and each base slot is then widened to Δ + 1 slots with the 1 first.
/// Any two sequences agree in at most m - 1 base slots.
pub fn gf_ui(q: u64, m: u32, delta: usize) -> Result<SequenceSet> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "polynomial degree bound m = {m} must be at least 2"
        )));
    }
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q < m as u64 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} < m = {m}: distinct polynomials could coincide as functions"
        )));
    }
    let count = q
        .checked_pow(m)
        .filter(|&c| c <= GF_MAX_SEQUENCES)
        .ok_or_else(|| Error::InvalidParameter(format!("{q}^{m} sequences is too many")))?;
    let field = FiniteField::with_order(q)?;
    let qs = q as usize;
    let n = qs * qs * (delta + 1);
    let points: Vec<_> = field.elements().collect();
    let mut seqs = Vec::with_capacity(count as usize);
    for f in 0..count {
        let coeffs = (0..m)
            .map(|j| field.element(f / q.pow(j) % q))
            .collect::<Result<Vec<_>>>()?;
        let mut ones: Vec<usize> = points
            .iter()
            .enumerate()
            .map(|(i, &x)| (i * qs + field.polynomial_eval(&coeffs, x).index() as usize) * (delta + 1))
            .collect();
        ones.sort_unstable();
        let set = crate::seqcore::CharacteristicSet::new(n, ones)?;
        seqs.push(BinarySequence::from_characteristic_set(&set, Some(qs))?);
    }
    SequenceSet::new(n, qs, delta, seqs)
}

/// Translates of a DDS as a verified PCAC_Δ of size r⌊n/(Δ + 1)⌋.
pub fn pcac_ui(dds: &DisjointDifferenceSet, delta: usize) -> Result<SequenceSet> {
    let code = packing_to_code(&dds_to_packing(dds, delta)?)?;
    match is_pcac(&code) {
        crate::codes::PcacVerdict::Valid => Ok(code),
        v => Err(Error::InvalidParameter(format!(
            "internal error: translate code is not a PCAC: {v:?}"
        ))),
    }
}

/// Keeps the first k elements of every block; sub-blocks of a DDS are a DDS.
pub fn shrink_blocks(dds: &DisjointDifferenceSet, k: usize) -> Result<DisjointDifferenceSet> {
    if k < 2 || k > dds.block_size() {
        return Err(Error::InvalidParameter(format!(
            "cannot shrink blocks of size {} to {k}",
            dds.block_size()
        )));
    }
    let blocks = dds.blocks().iter().map(|b| b[..k].to_vec()).collect();
    DisjointDifferenceSet::new(dds.modulus(), blocks)
}

/// Tries the explicit designs, then backtracking, for an (n, k, r)-DDS.
/// Returns the design and a short description of where it came from.
pub fn find_dds(n: usize, k: usize, r: usize, budget: u64) -> Result<Option<(DisjointDifferenceSet, String)>> {
    if k == 3 {
        let dts = skolem_dts(r as u64)?;
        if n > 2 * dts.scope() as usize {
            return Ok(Some((dts_to_dds(&dts, n)?, "skolem".into())));
        }
    }
    if r == 1 {
        for q in prime_powers_in(k as u64 - 1, 2 * n as u64) {
            if (q * q + q + 1) as usize == n && q + 1 >= k as u64 {
                return Ok(Some((shrink_blocks(&singer_dds(q)?, k)?, format!("singer q={q}"))));
            }
            if (q * q).checked_sub(1) == Some(n as u64) && q >= k as u64 {
                return Ok(Some((shrink_blocks(&bose_dds(q)?, k)?, format!("bose q={q}"))));
            }
        }
    }
    if n < r * k * (k - 1) + 1 {
        return Ok(None);
    }
    if k >= 3 && n == r * k * (k - 1) + 1 && is_prime(n as u64) {
        if let Some(d) = multiplier_df_search(n, k, budget)? {
            return Ok(Some((d, "multiplier".into())));
        }
    }
    Ok(match df_search(n, k, r, budget)?.outcome {
        DfOutcome::Found(d) => Some((d, "search".into())),
        _ => None,
    })
}

/// The approaches compared by [`compare_periods`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Approach {
    /// DDS translates with the DDS actually built and the code verified.
    PcacDds,
    /// Translates of (r(q²+q+1), q+1, r)-DDS.
    PcacA,
    /// Translates of (r(q²-1), q, r)-DDS.
    PcacB,
    Gf,
    Tdma,
}

impl Approach {
    pub fn name(self) -> &'static str {
        match self {
            Approach::PcacDds => "pcac-dds",
            Approach::PcacA => "pcac-a",
            Approach::PcacB => "pcac-b",
            Approach::Gf => "gf",
            Approach::Tdma => "tdma",
        }
    }

    pub fn is_pcac(self) -> bool {
        matches!(self, Approach::PcacDds | Approach::PcacA | Approach::PcacB)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub approach: Approach,
    /// Minimal period found; `None` when infeasible within the limits.
    pub period: Option<u64>,
    /// Potential users supported at that period.
    pub users: u64,
    pub k: usize,
    pub delta: usize,
    /// `key=value` pairs separated by ';'.
    pub parameters: String,
    /// A sequence set of this period was built and passed its checker.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub target_users: u64,
    pub k: usize,
    pub delta: usize,
    pub rows: Vec<ComparisonRow>,
}

pub const CSV_VERSION_LINE: &str = "# pcac-compare v1";
pub const CSV_HEADER: &str = "approach,n,N,k,delta,parameters,verified";

impl Comparison {
    pub fn row(&self, approach: Approach) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.approach == approach)
    }

    pub fn period(&self, approach: Approach) -> Option<u64> {
        self.row(approach).and_then(|r| r.period)
    }

    /// Smallest period over the PCAC rows.
    pub fn pcac_period(&self) -> Option<u64> {
        self.rows
            .iter()
            .filter(|r| r.approach.is_pcac())
            .filter_map(|r| r.period)
            .min()
    }

    /// Row with the smallest period. TDMA wins ties, then the PCAC rows,
    /// then GF.
    pub fn winner(&self) -> Option<&ComparisonRow> {
        let rank = |a: Approach| match a {
            Approach::Tdma => 0,
            Approach::PcacDds => 1,
            Approach::PcacA => 2,
            Approach::PcacB => 3,
            Approach::Gf => 4,
        };
        self.rows
            .iter()
            .filter(|r| r.period.is_some())
            .min_by_key(|r| (r.period, rank(r.approach)))
    }

    /// CSV rows without the version and header lines.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let n = r.period.map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.approach.name(),
                n,
                r.users,
                r.k,
                r.delta,
                r.parameters,
                r.verified
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_VERSION_LINE}\n{CSV_HEADER}\n{}", self.csv_rows())
    }
}

/// Limits for [`compare_periods`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Build the `pcac-dds` row by scanning periods upward.
    pub construct: bool,
    /// Largest period tried for the `pcac-dds` row.
    pub max_construct_period: usize,
    /// Node budget per DDS search.
    pub search_budget: u64,
    /// Rows are verified only when the set has at most this period...
    pub verify_max_period: u64,
    /// ...and the UI check needs at most this many configurations.
    pub verify_budget: u128,
    pub max_q: u64,
    pub max_m: u32,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            construct: true,
            max_construct_period: 500,
            search_budget: 1_000_000,
            verify_max_period: 5_000,
            verify_budget: 1_000_000,
            max_q: 1024,
            max_m: 6,
        }
    }
}

fn infeasible(approach: Approach, k: usize, delta: usize, why: &str) -> ComparisonRow {
    ComparisonRow {
        approach,
        period: None,
        users: 0,
        k,
        delta,
        parameters: format!("infeasible;{why}"),
        verified: false,
    }
}

fn ui_verified(seqs: &[BinarySequence], k: usize, delta: usize, budget: u128) -> bool {
    if seqs.len() < k || ui_configurations(seqs.len(), k, delta) > budget {
        return false;
    }
    let opts = UiOptions {
        budget,
        ..UiOptions::default()
    };
    is_ui(seqs, k, delta, &opts).is_ok_and(|r| r.verdict == UiVerdict::Verified)
}

/// Shared search for the two algebraic PCAC families: n = r·base(q) with
/// r = 1 or r a prime beyond `r_floor(q)`.
fn algebraic_row(
    approach: Approach,
    target: u64,
    delta: usize,
    opts: &CompareOptions,
    q_min: u64,
    base: fn(u64) -> u64,
    r_floor_inclusive: fn(u64) -> u64,
) -> Option<(u64, u64, u64, u64)> {
    let mut best: Option<(u64, u64, u64, u64)> = None;
    for q in prime_powers_in(q_min, opts.max_q) {
        let b = base(q);
        let users = |r: u64| r * (r * b / (delta as u64 + 1));
        let mut r = 1;
        loop {
            let n = r * b;
            if best.is_some_and(|(bn, ..)| n > bn) {
                break;
            }
            if users(r) >= target {
                if best.is_none_or(|(bn, ..)| n < bn) {
                    best = Some((n, q, r, users(r)));
                }
                break;
            }
            r = if r == 1 {
                let lo = r_floor_inclusive(q);
                if is_prime(lo) {
                    lo
                } else {
                    next_prime(lo)
                }
            } else {
                next_prime(r)
            };
        }
    }
    debug!("{}: {best:?}", approach.name());
    best
}

fn pcac_a_row(target: u64, k: usize, delta: usize, opts: &CompareOptions) -> ComparisonRow {
    let q_min = (k as u64).saturating_sub(1).max(2);
    let Some((n, q, r, users)) = algebraic_row(
        Approach::PcacA,
        target,
        delta,
        opts,
        q_min,
        |q| q * q + q + 1,
        |q| q + 1,
    ) else {
        return infeasible(Approach::PcacA, k, delta, "no q within limits");
    };
    let mut verified = false;
    let mut parameters = format!("q={q};r={r}");
    if r == 1 && n <= opts.verify_max_period {
        verified = singer_dds(q)
            .and_then(|d| shrink_blocks(&d, k))
            .and_then(|d| pcac_ui(&d, delta))
            .is_ok_and(|c| c.len() as u64 >= target);
        parameters.push_str(";method=singer");
    } else if r > 1 {
        parameters.push_str(";formula-only");
    }
    ComparisonRow {
        approach: Approach::PcacA,
        period: Some(n),
        users,
        k,
        delta,
        parameters,
        verified,
    }
}

fn pcac_b_row(target: u64, k: usize, delta: usize, opts: &CompareOptions) -> ComparisonRow {
    let Some((n, q, r, users)) = algebraic_row(
        Approach::PcacB,
        target,
        delta,
        opts,
        (k as u64).max(2),
        |q| q * q - 1,
        |q| q,
    ) else {
        return infeasible(Approach::PcacB, k, delta, "no q within limits");
    };
    let mut verified = false;
    let mut parameters = format!("q={q};r={r}");
    if r == 1 && n <= opts.verify_max_period {
        verified = bose_dds(q)
            .and_then(|d| shrink_blocks(&d, k))
            .and_then(|d| pcac_ui(&d, delta))
            .is_ok_and(|c| c.len() as u64 >= target);
        parameters.push_str(";method=bose");
    } else if r > 1 {
        parameters.push_str(";formula-only");
    }
    ComparisonRow {
        approach: Approach::PcacB,
        period: Some(n),
        users,
        k,
        delta,
        parameters,
        verified,
    }
}

fn gf_row(target: u64, k: usize, delta: usize, opts: &CompareOptions) -> ComparisonRow {
    let mut best: Option<(u64, u64, u32)> = None;
    for m in 2..=opts.max_m {
        let need = (k as u64 - 1) * (m as u64 - 1) + 1;
        let q = prime_powers_in(need.max(m as u64), opts.max_q)
            .into_iter()
            .find(|&q| q.checked_pow(m).is_none_or(|v| v >= target));
        if let Some(q) = q {
            let n = q * q * (delta as u64 + 1);
            if best.is_none_or(|(bn, ..)| n < bn) {
                best = Some((n, q, m));
            }
        }
    }
    let Some((n, q, m)) = best else {
        return infeasible(Approach::Gf, k, delta, "no q within limits");
    };
    let users = q.checked_pow(m).unwrap_or(u64::MAX);
    let verified = n <= opts.verify_max_period
        && ui_configurations(target as usize, k, delta) <= opts.verify_budget
        && gf_ui(q, m, delta).is_ok_and(|set| {
            let seqs = &set.sequences()[..target as usize];
            ui_verified(seqs, k, delta, opts.verify_budget)
        });
    ComparisonRow {
        approach: Approach::Gf,
        period: Some(n),
        users,
        k,
        delta,
        parameters: format!("q={q};m={m}"),
        verified,
    }
}

fn tdma_row(target: u64, k: usize, delta: usize, opts: &CompareOptions) -> ComparisonRow {
    let n = target * (delta as u64 + 1);
    let verified = n <= opts.verify_max_period
        && ui_configurations(target as usize, k, delta) <= opts.verify_budget
        && tdma_ui(target as usize, delta).is_ok_and(|set| ui_verified(set.sequences(), k, delta, opts.verify_budget));
    ComparisonRow {
        approach: Approach::Tdma,
        period: Some(n),
        users: target,
        k,
        delta,
        parameters: format!("slots=N(delta+1);lower-bound=N*delta={}", target * delta as u64),
        verified,
    }
}

fn pcac_dds_row(target: u64, k: usize, delta: usize, opts: &CompareOptions) -> ComparisonRow {
    for n in k * (k - 1) + 1..=opts.max_construct_period {
        let copies = n / (delta + 1);
        if copies == 0 {
            continue;
        }
        let r = (target as usize).div_ceil(copies);
        if dds_size_necessary(n, k).map_or(true, |r_max| r > r_max) {
            continue;
        }
        let Ok(Some((dds, method))) = find_dds(n, k, r, opts.search_budget) else {
            continue;
        };
        let Ok(mut code) = pcac_ui(&dds, delta) else { continue };
        let users = code.len() as u64;
        code.truncate(target as usize);
        if !is_pcac(&code).is_valid() {
            continue;
        }
        return ComparisonRow {
            approach: Approach::PcacDds,
            period: Some(n as u64),
            users,
            k,
            delta,
            parameters: format!("r={r};method={method}"),
            verified: true,
        };
    }
    infeasible(
        Approach::PcacDds,
        k,
        delta,
        &format!("none up to n={}", opts.max_construct_period),
    )
}

/// Minimal periods serving `target_users` potential users with `k` active
/// at shift bound Δ, for each approach.
pub fn compare_periods(target_users: u64, k: usize, delta: usize, opts: &CompareOptions) -> Result<Comparison> {
    if k < 2 || target_users < k as u64 {
        return Err(Error::InvalidParameter(format!(
            "need N >= k >= 2, got N = {target_users}, k = {k}"
        )));
    }
    let mut rows = Vec::with_capacity(5);
    if opts.construct {
        rows.push(pcac_dds_row(target_users, k, delta, opts));
    }
    rows.push(pcac_a_row(target_users, k, delta, opts));
    rows.push(pcac_b_row(target_users, k, delta, opts));
    rows.push(gf_row(target_users, k, delta, opts));
    rows.push(tdma_row(target_users, k, delta, opts));
    Ok(Comparison {
        target_users,
        k,
        delta,
        rows,
    })
}

/// Comparisons for N = k³, Δ = k - 1 over the given k, without the
/// constructed row.
pub fn sweep(ks: &[u64], opts: &CompareOptions) -> Result<Vec<Comparison>> {
    let opts = CompareOptions {
        construct: false,
        ..opts.clone()
    };
    ks.par_iter()
        .map(|&k| compare_periods(k.pow(3), k as usize, k as usize - 1, &opts))
        .collect()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
