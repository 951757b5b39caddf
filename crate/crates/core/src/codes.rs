//! Sequence sets, PCAC and UI verification, and closed-form bounds on
//! M_Δ(n, k).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::binomial;
use crate::seqcore::{xcorr_profile_sets, BinarySequence, CharacteristicSet};

/// N distinct sequences sharing period n and weight k, tagged with the shift
/// bound Δ they are meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSet {
    period: usize,
    weight: usize,
    delta: usize,
    sequences: Vec<BinarySequence>,
}

impl SequenceSet {
    pub fn new(period: usize, weight: usize, delta: usize, sequences: Vec<BinarySequence>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        if delta >= period {
            return Err(Error::ShiftOutOfRange { delta, n: period });
        }
        for s in &sequences {
            if s.period() != period {
                return Err(Error::PeriodMismatch {
                    left: period,
                    right: s.period(),
                });
            }
            if s.weight() != weight {
                return Err(Error::WeightMismatch {
                    expected: weight,
                    found: s.weight(),
                });
            }
        }
        let mut order: Vec<usize> = (0..sequences.len()).collect();
        order.sort_by(|&a, &b| sequences[a].cmp(&sequences[b]).then(a.cmp(&b)));
        if let Some(w) = order.windows(2).find(|w| sequences[w[0]] == sequences[w[1]]) {
            return Err(Error::DuplicateSequence {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
        Ok(Self {
            period,
            weight,
            delta,
            sequences,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn sequences(&self) -> &[BinarySequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.sequences.truncate(len);
    }

    /// Same sequences, different shift bound.
    pub fn with_delta(&self, delta: usize) -> Result<Self> {
        if delta >= self.period {
            return Err(Error::ShiftOutOfRange { delta, n: self.period });
        }
        Ok(Self { delta, ..self.clone() })
    }
}

/// Outcome of [`is_pcac`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PcacVerdict {
    Valid,
    /// |I_X ∩ (I_Y + τ)| = count ≥ 2 for X = sequences[first],
    /// Y = sequences[second].
    Violation {
        first: usize,
        second: usize,
        tau: usize,
        count: usize,
    },
}

impl PcacVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PcacVerdict::Valid)
    }
}

/// Checks H_Δ(X, Y) ≤ 1 over all ordered pairs of distinct sequences.
///
/// The reported violation is the smallest (first, second, τ).
pub fn is_pcac(code: &SequenceSet) -> PcacVerdict {
    pcac_violation(code.sequences(), code.delta())
}

/// [`is_pcac`] on bare sequences of one period; weights may differ.
pub fn pcac_violation(seqs: &[BinarySequence], delta: usize) -> PcacVerdict {
    (0..seqs.len())
        .into_par_iter()
        .find_map_first(|i| {
            (0..seqs.len()).filter(|&j| j != i).find_map(|j| {
                xcorr_profile_sets(&seqs[i], &seqs[j], delta)
                    .into_iter()
                    .enumerate()
                    .find(|&(_, c)| c >= 2)
                    .map(|(tau, count)| PcacVerdict::Violation {
                        first: i,
                        second: j,
                        tau,
                        count,
                    })
            })
        })
        .unwrap_or(PcacVerdict::Valid)
}

/// For a CAC (Δ = n - 1) the within-block difference sets of distinct
/// sequences are disjoint. Returns the first offending pair otherwise.
pub fn difference_sets_overlap(code: &SequenceSet) -> Option<(usize, usize)> {
    let diffs: Vec<Vec<usize>> = code
        .sequences()
        .iter()
        .map(|s| s.characteristic_set().differences())
        .collect();
    for i in 0..diffs.len() {
        for j in i + 1..diffs.len() {
            if diffs[i].iter().any(|d| diffs[j].binary_search(d).is_ok()) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Default number of stacked-matrix evaluations [`is_ui`] may spend.
pub const DEFAULT_UI_BUDGET: u128 = 10_000_000;

/// Controls for [`is_ui`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiOptions {
    /// Maximum configurations for exhaustive checking.
    pub budget: u128,
    /// When the budget is exceeded, test this many random configurations
    /// instead of giving up.
    pub samples: Option<u64>,
    pub seed: u64,
    /// Also run the column-scan test and assert it agrees with the
    /// private-slot test.
    pub cross_check: bool,
}

impl Default for UiOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_UI_BUDGET,
            samples: None,
            seed: 0x5eed,
            cross_check: true,
        }
    }
}

/// A k-subset of users with shifts whose stacked matrix has no k×k
/// permutation submatrix; row `blocked` has no private slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiWitness {
    pub users: Vec<usize>,
    pub shifts: Vec<usize>,
    pub blocked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UiVerdict {
    /// Every configuration was checked.
    Verified,
    Violated(UiWitness),
    /// Too many configurations and no sampling requested.
    Unverified {
        required: u128,
        budget: u128,
    },
    /// Random configurations found no violation; not a proof.
    SampledClean {
        samples: u64,
        required: u128,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiReport {
    pub verdict: UiVerdict,
    /// Configurations actually evaluated.
    pub evaluated: u128,
}

/// C(N, k) · (Δ + 1)^k, saturating.
pub fn ui_configurations(num_sequences: usize, k: usize, delta: usize) -> u128 {
    let mut total = binomial(num_sequences as u64, k as u64);
    for _ in 0..k {
        total = total.saturating_mul(delta as u128 + 1);
    }
    total
}

struct Stack<'a> {
    /// shifted[u][τ] = words of R^τ X_u.
    shifted: &'a [Vec<Vec<u64>>],
    period: usize,
}

impl Stack<'_> {
    /// Index of the first row with no private slot.
    fn private_slot(&self, users: &[usize], shifts: &[usize]) -> Option<usize> {
        let rows: Vec<&[u64]> = users
            .iter()
            .zip(shifts)
            .map(|(&u, &t)| self.shifted[u][t].as_slice())
            .collect();
        let words = rows[0].len();
        (0..rows.len()).find(|&i| {
            !(0..words).any(|w| {
                let others = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(0u64, |acc, (_, r)| acc | r[w]);
                rows[i][w] & !others != 0
            })
        })
    }

    /// Scans columns for unit vectors e_i; row i is served when one exists.
    fn column_scan(&self, users: &[usize], shifts: &[usize]) -> Option<usize> {
        let k = users.len();
        let mut served = vec![false; k];
        for t in 0..self.period {
            let mut hit = None;
            let mut hits = 0;
            for (i, (&u, &s)) in users.iter().zip(shifts).enumerate() {
                if self.shifted[u][s][t / 64] >> (t % 64) & 1 == 1 {
                    hits += 1;
                    hit = Some(i);
                }
            }
            if hits == 1 {
                served[hit.unwrap()] = true;
            }
        }
        served.iter().position(|&s| !s)
    }

    fn evaluate(&self, users: &[usize], shifts: &[usize], cross_check: bool) -> Option<usize> {
        let a = self.private_slot(users, shifts);
        if cross_check {
            let b = self.column_scan(users, shifts);
            assert_eq!(
                a.is_some(),
                b.is_some(),
                "UI tests disagree on users {users:?} shifts {shifts:?}"
            );
        }
        a
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn next_tuple(t: &mut [usize], max: usize) -> bool {
    for i in (0..t.len()).rev() {
        if t[i] < max {
            t[i] += 1;
            return true;
        }
        t[i] = 0;
    }
    false
}

/// Checks the UI property: for every k users and shifts τ_i ∈ [0, Δ], the
/// stacked matrix of R^{τ_i} X_{u_i} contains a k×k permutation submatrix.
///
/// Such a submatrix exists exactly when every row owns a column where it is
/// the only 1. Enumeration is exhaustive within `options.budget`; the
/// returned witness is the lexicographically smallest (users, shifts).
pub fn is_ui(sequences: &[BinarySequence], k: usize, delta: usize, options: &UiOptions) -> Result<UiReport> {
    let big_n = sequences.len();
    if k == 0 || big_n < k {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= N, got k = {k}, N = {big_n}"
        )));
    }
    let n = sequences[0].period();
    for s in sequences {
        if s.period() != n {
            return Err(Error::PeriodMismatch {
                left: n,
                right: s.period(),
            });
        }
    }
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    let required = ui_configurations(big_n, k, delta);
    if required > options.budget && options.samples.is_none() {
        return Ok(UiReport {
            verdict: UiVerdict::Unverified {
                required,
                budget: options.budget,
            },
            evaluated: 0,
        });
    }
    let shifted: Vec<Vec<Vec<u64>>> = sequences
        .iter()
        .map(|s| (0..=delta).map(|t| s.cyclic_shift(t).as_words().to_vec()).collect())
        .collect();
    let stack = Stack {
        shifted: &shifted,
        period: n,
    };

    if required > options.budget {
        let samples = options.samples.unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        for done in 0..samples {
            let mut users = sample(&mut rng, big_n, k).into_vec();
            users.sort_unstable();
            let shifts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=delta)).collect();
            if let Some(blocked) = stack.evaluate(&users, &shifts, options.cross_check) {
                return Ok(UiReport {
                    verdict: UiVerdict::Violated(UiWitness { users, shifts, blocked }),
                    evaluated: done as u128 + 1,
                });
            }
        }
        return Ok(UiReport {
            verdict: UiVerdict::SampledClean { samples, required },
            evaluated: samples as u128,
        });
    }

    let witness = (0..=big_n - k).into_par_iter().find_map_first(|first| {
        let mut rest: Vec<usize> = (first + 1..first + k).collect();
        loop {
            let users: Vec<usize> = std::iter::once(first).chain(rest.iter().copied()).collect();
            let mut shifts = vec![0; k];
            loop {
                if let Some(blocked) = stack.evaluate(&users, &shifts, options.cross_check) {
                    return Some(UiWitness { users, shifts, blocked });
                }
                if !next_tuple(&mut shifts, delta) {
                    break;
                }
            }
            if rest.is_empty() || !next_combination_offset(&mut rest, first + 1, big_n) {
                return None;
            }
        }
    });
    Ok(match witness {
        Some(w) => UiReport {
            verdict: UiVerdict::Violated(w),
            evaluated: 0,
        },
        None => UiReport {
            verdict: UiVerdict::Verified,
            evaluated: required,
        },
    })
}

/// Advances a sorted combination drawn from [lo, hi).
fn next_combination_offset(c: &mut [usize], lo: usize, hi: usize) -> bool {
    for x in c.iter_mut() {
        *x -= lo;
    }
    let more = next_combination(c, hi - lo);
    for x in c.iter_mut() {
        *x += lo;
    }
    more
}

/// ⌊n/2⌋: from this shift bound on, M_Δ(n, k) = M(n, k).
pub fn delta_collapse_threshold(n: usize) -> usize {
    n / 2
}

/// Exact M_Δ(n, 2).
pub fn exact_m_weight2(n: usize, delta: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 3")));
    }
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    let (n, d) = (n as u64, delta as u64);
    Ok(if n % 2 == 1 && 2 * d + 3 <= n {
        (n - 1) / 2 * (n / (d + 1))
    } else if n % 2 == 0 && 2 * d + 2 <= n {
        (n / 2 - 1) * (n / (d + 1)) + n / (2 * d + 2)
    } else {
        n / 2
    })
}

/// Lower and upper bounds on M_Δ(n, k), with the exact value when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub lower: u64,
    /// `None` means unbounded.
    pub upper: Option<u64>,
    pub exact: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Upper expression U(n, Δ) for weight 3; M_Δ(n, 3) < U.
pub fn weight3_upper_expression(n: f64, delta: f64) -> f64 {
    n * (n - 1.0) / (6.0 * (delta + 1.0)) + ((2.0 * std::f64::consts::LN_2 - 1.0) / 3.0) * n + n / (3.0 * (delta + 1.0))
}

/// Bounds on M_Δ(n, 3) for a real-valued shift bound Δ < ⌊n/2⌋.
///
/// lower = ⌊(n-1)/6⌋ · ⌊n/(Δ+1)⌋; upper is the largest integer strictly
/// below U(n, Δ).
pub fn bounds_weight3_real(n: usize, delta: f64) -> Result<BoundsReport> {
    if n < 7 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 7")));
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "shift bound {delta} must be non-negative"
        )));
    }
    if delta >= (n / 2) as f64 {
        return Err(Error::CollapseRegime {
            n,
            delta: delta.floor() as usize,
        });
    }
    let copies = (n as f64 / (delta + 1.0)).floor() as u64;
    let lower = ((n as u64 - 1) / 6) * copies;
    let u = weight3_upper_expression(n as f64, delta);
    let upper = u.ceil() as u64 - 1;
    Ok(BoundsReport {
        n,
        k: 3,
        delta,
        lower,
        upper: Some(upper),
        exact: None,
        note: None,
    })
}

pub fn bounds_weight3(n: usize, delta: usize) -> Result<BoundsReport> {
    bounds_weight3_real(n, delta as f64)
}

/// ⌊(n - 1)/(k(k - 1))⌋: the most blocks an (n, k, r)-DDS can have.
pub fn dds_size_necessary(n: usize, k: usize) -> Result<usize> {
    if k < 2 || n <= k {
        return Err(Error::InvalidParameter(format!(
            "need n > k >= 2, got n = {n}, k = {k}"
        )));
    }
    Ok((n - 1) / (k * (k - 1)))
}

/// Bounds for any weight. Weight 2 is exact, weight 3 below the collapse
/// threshold uses [`bounds_weight3`]; everything else falls back to the
/// trivial bounds 1 ≤ M ≤ ⌊C(n,2)/C(k,2)⌋.
pub fn bounds(n: usize, k: usize, delta: usize) -> Result<BoundsReport> {
    if k < 2 || n <= k {
        return Err(Error::InvalidParameter(format!(
            "need n > k >= 2, got n = {n}, k = {k}"
        )));
    }
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    if k == 2 {
        let m = exact_m_weight2(n, delta)?;
        let note = (delta >= delta_collapse_threshold(n)).then(|| "collapse regime: equals M(n,2)".to_string());
        return Ok(BoundsReport {
            n,
            k,
            delta: delta as f64,
            lower: m,
            upper: Some(m),
            exact: Some(m),
            note,
        });
    }
    if k == 3 && n >= 7 && delta < delta_collapse_threshold(n) {
        return bounds_weight3(n, delta);
    }
    let pairs = |x: u64| x * (x - 1) / 2;
    let note = if delta >= delta_collapse_threshold(n) {
        "collapse regime: equals M(n,k); trivial bounds only"
    } else {
        "trivial bounds only"
    };
    Ok(BoundsReport {
        n,
        k,
        delta: delta as f64,
        lower: 1,
        upper: Some(pairs(n as u64) / pairs(k as u64)),
        exact: None,
        note: Some(note.into()),
    })
}

/// Characteristic sets of a code, in order.
pub fn characteristic_sets(code: &SequenceSet) -> Vec<CharacteristicSet> {
    code.sequences()
        .iter()
        .map(BinarySequence::characteristic_set)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n: usize, xs: &[usize]) -> BinarySequence {
        let set = CharacteristicSet::new(n, xs.iter().copied()).unwrap();
        BinarySequence::from_characteristic_set(&set, None).unwrap()
    }

    fn code(n: usize, delta: usize, sets: &[&[usize]]) -> SequenceSet {
        let seqs: Vec<_> = sets.iter().map(|s| seq(n, s)).collect();
        let k = seqs[0].weight();
        SequenceSet::new(n, k, delta, seqs).unwrap()
    }

    #[test]
    fn sequence_set_validation() {
        let a = seq(8, &[0, 1]);
        assert_eq!(
            SequenceSet::new(8, 2, 0, vec![a.clone(), seq(8, &[2, 3]), a.clone()]).unwrap_err(),
            Error::DuplicateSequence { first: 0, second: 2 }
        );
        assert!(matches!(
            SequenceSet::new(8, 2, 0, vec![a.clone(), seq(8, &[1])]),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(matches!(
            SequenceSet::new(8, 2, 8, vec![a]),
            Err(Error::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn pcac_examples() {
        assert!(is_pcac(&code(8, 1, &[&[0, 1], &[0, 2]])).is_valid());
        assert!(is_pcac(&code(8, 0, &[&[0, 1], &[1, 2]])).is_valid());
        assert_eq!(
            is_pcac(&code(8, 0, &[&[0, 1, 3], &[0, 1, 4]])),
            PcacVerdict::Violation {
                first: 0,
                second: 1,
                tau: 0,
                count: 2
            }
        );
        assert!(is_pcac(&code(8, 7, &[&[0, 1, 3]])).is_valid());
    }

    #[test]
    fn pcac_is_over_ordered_pairs() {
        let c = code(10, 1, &[&[1, 2], &[0, 1]]);
        assert_eq!(xcorr_profile_sets(&c.sequences()[0], &c.sequences()[1], 1), vec![1, 2]);
        assert_eq!(
            is_pcac(&c),
            PcacVerdict::Violation {
                first: 0,
                second: 1,
                tau: 1,
                count: 2
            }
        );
        // Here only the reversed pair collides.
        let c = code(10, 1, &[&[0, 1], &[1, 2]]);
        assert_eq!(
            is_pcac(&c),
            PcacVerdict::Violation {
                first: 1,
                second: 0,
                tau: 1,
                count: 2
            }
        );
    }

    #[test]
    fn ui_small_cases() {
        let opts = UiOptions::default();
        let tdma = vec![seq(9, &[0]), seq(9, &[3]), seq(9, &[6])];
        let r = is_ui(&tdma, 3, 2, &opts).unwrap();
        assert_eq!(r.verdict, UiVerdict::Verified);
        assert_eq!(r.evaluated, 27);

        let clash = vec![seq(4, &[0]), seq(4, &[1])];
        let r = is_ui(&clash, 2, 1, &opts).unwrap();
        assert_eq!(
            r.verdict,
            UiVerdict::Violated(UiWitness {
                users: vec![0, 1],
                shifts: vec![1, 0],
                blocked: 0
            })
        );
    }

    #[test]
    fn ui_budget_and_sampling() {
        let tdma = vec![seq(9, &[0]), seq(9, &[3]), seq(9, &[6])];
        let tight = UiOptions {
            budget: 10,
            ..UiOptions::default()
        };
        assert_eq!(
            is_ui(&tdma, 3, 2, &tight).unwrap().verdict,
            UiVerdict::Unverified {
                required: 27,
                budget: 10
            }
        );
        let sampled = UiOptions {
            budget: 10,
            samples: Some(50),
            ..UiOptions::default()
        };
        assert_eq!(
            is_ui(&tdma, 3, 2, &sampled).unwrap().verdict,
            UiVerdict::SampledClean {
                samples: 50,
                required: 27
            }
        );
        assert!(is_ui(&tdma, 4, 2, &UiOptions::default()).is_err());
    }

    #[test]
    fn weight2_formula() {
        assert_eq!(exact_m_weight2(9, 2).unwrap(), 12);
        assert_eq!(exact_m_weight2(8, 1).unwrap(), 14);
        assert_eq!(exact_m_weight2(8, 5).unwrap(), 4);
        assert_eq!(exact_m_weight2(9, 4).unwrap(), 4);
        assert_eq!(exact_m_weight2(8, 0).unwrap(), 28);
        assert!(exact_m_weight2(2, 0).is_err());
        for n in 3..=60 {
            for d in 1..n {
                assert!(exact_m_weight2(n, d).unwrap() <= exact_m_weight2(n, d - 1).unwrap());
            }
        }
    }

    #[test]
    fn collapse_threshold() {
        assert_eq!(delta_collapse_threshold(8), 4);
        assert_eq!(delta_collapse_threshold(19), 9);
    }

    #[test]
    fn weight3_bounds() {
        let b = bounds_weight3(19, 5).unwrap();
        assert_eq!(b.lower, 9);
        assert_eq!(b.upper, Some(13));
        assert_eq!(bounds_weight3_real(200, 200f64.sqrt()).unwrap().lower, 429);
        assert_eq!(bounds_weight3_real(400, 20.0).unwrap().lower, 1254);
        assert!(matches!(bounds_weight3(19, 9), Err(Error::CollapseRegime { .. })));
        assert_eq!(bounds_weight3(7, 0).unwrap().upper, Some(10));
    }

    #[test]
    fn dds_size() {
        assert_eq!(dds_size_necessary(19, 3).unwrap(), 3);
        assert_eq!(dds_size_necessary(7, 3).unwrap(), 1);
        assert_eq!(dds_size_necessary(13, 4).unwrap(), 1);
        assert!(dds_size_necessary(3, 3).is_err());
    }

    #[test]
    fn general_bounds() {
        let b = bounds(9, 2, 7).unwrap();
        assert_eq!(b.exact, Some(4));
        let b = bounds(13, 4, 3).unwrap();
        assert_eq!((b.lower, b.upper), (1, Some(13)));
    }

    #[test]
    fn cac_difference_disjointness() {
        let c = code(13, 12, &[&[0, 1, 4], &[0, 2, 7]]);
        assert!(is_pcac(&c).is_valid());
        assert_eq!(difference_sets_overlap(&c), None);
        let c = code(13, 12, &[&[0, 1, 4], &[0, 1, 5]]);
        assert_eq!(difference_sets_overlap(&c), Some((0, 1)));
    }
}
