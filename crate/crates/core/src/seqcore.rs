//! Binary periodic sequences, characteristic sets and shift-bounded Hamming
//! cross-correlation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A binary sequence of fixed period `n`, stored as packed 64-bit words.
///
/// Bit `i` of the sequence is bit `i % 64` of word `i / 64`; bits past the
/// period in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySequence {
    period: usize,
    words: Vec<u64>,
}

impl BinarySequence {
    /// All-zero sequence of period `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        Ok(Self {
            period: n,
            words: vec![0; n.div_ceil(64)],
        })
    }

    pub fn from_bits<I>(bits: I) -> Result<Self>
    where
        I: IntoIterator<Item = bool>,
    {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut seq = Self::zeros(bits.len())?;
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                seq.set(i);
            }
        }
        Ok(seq)
    }

    /// Builds the sequence whose characteristic set is `set`.
    ///
    /// When `expected_weight` is given the set size must match it.
    pub fn from_characteristic_set(set: &CharacteristicSet, expected_weight: Option<usize>) -> Result<Self> {
        if let Some(w) = expected_weight {
            if w != set.len() {
                return Err(Error::WeightMismatch {
                    expected: w,
                    found: set.len(),
                });
            }
        }
        let mut seq = Self::zeros(set.modulus())?;
        for &i in set.elements() {
            seq.set(i);
        }
        Ok(seq)
    }

    #[inline]
    pub fn period(&self) -> usize {
        self.period
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.period);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    /// Packed words; bit `i` lives in word `i / 64` at position `i % 64`.
    pub fn as_words(&self) -> &[u64] {
        &self.words
    }

    /// Number of ones, ω(X).
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the ones in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.period).filter(move |&i| self.get(i))
    }

    /// Applies the cyclic shift operator τ times; `τ` is reduced mod n.
    ///
    /// The result satisfies `result(i) = X((i - τ) mod n)`.
    pub fn cyclic_shift(&self, tau: usize) -> Self {
        let n = self.period;
        let tau = tau % n;
        let mut out = Self {
            period: n,
            words: vec![0; self.words.len()],
        };
        for i in self.ones() {
            out.set((i + tau) % n);
        }
        out
    }

    pub fn characteristic_set(&self) -> CharacteristicSet {
        CharacteristicSet {
            modulus: self.period,
            elements: self.ones().collect(),
        }
    }

    /// 64 consecutive bits read cyclically starting at `start`.
    fn window(&self, start: usize) -> u64 {
        let n = self.period;
        if start + 64 <= n {
            let w = start / 64;
            let off = start % 64;
            if off == 0 {
                self.words[w]
            } else {
                let hi = self.words.get(w + 1).copied().unwrap_or(0);
                (self.words[w] >> off) | (hi << (64 - off))
            }
        } else {
            let mut acc = 0u64;
            for t in 0..64 {
                if self.get((start + t) % n) {
                    acc |= 1 << t;
                }
            }
            acc
        }
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.period {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence({self})")
    }
}

impl FromStr for BinarySequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "unexpected character {other:?} in binary sequence"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }
}

/// A subset of Z_n kept as a strictly increasing list of residues.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CharacteristicSet {
    modulus: usize,
    elements: Vec<usize>,
}

impl CharacteristicSet {
    /// Validates and sorts `elements`; out-of-range or repeated residues
    /// are rejected.
    pub fn new<I>(modulus: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        let mut v: Vec<usize> = elements.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&x| x >= modulus) {
            return Err(Error::ResidueOutOfRange { value: bad, modulus });
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateResidue { value: w[0], modulus });
        }
        Ok(Self { modulus, elements: v })
    }

    /// Reduces arbitrary integers mod n before building the set.
    pub fn from_integers<I>(modulus: usize, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let m = modulus as i64;
        Self::new(modulus, values.into_iter().map(|v| v.rem_euclid(m.max(1)) as usize))
    }

    #[inline]
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    #[inline]
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// A + τ = {a + τ mod n : a ∈ A}.
    pub fn translate(&self, tau: usize) -> Self {
        let n = self.modulus;
        let mut elements: Vec<usize> = self.elements.iter().map(|&a| (a + tau) % n).collect();
        elements.sort_unstable();
        Self { modulus: n, elements }
    }

    /// D(A): the set of nonzero residues x - y with x, y ∈ A.
    pub fn differences(&self) -> Vec<usize> {
        let n = self.modulus;
        let mut d: Vec<usize> = Vec::with_capacity(self.len() * self.len());
        for &x in &self.elements {
            for &y in &self.elements {
                if x != y {
                    d.push((x + n - y) % n);
                }
            }
        }
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl fmt::Display for CharacteristicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_pair(x: &BinarySequence, y: &BinarySequence, delta: usize) -> Result<()> {
    if x.period() != y.period() {
        return Err(Error::PeriodMismatch {
            left: x.period(),
            right: y.period(),
        });
    }
    if delta >= x.period() {
        return Err(Error::ShiftOutOfRange { delta, n: x.period() });
    }
    Ok(())
}

/// H_Δ(X, Y): the largest number of coinciding ones between X and R^τ Y over
/// 0 ≤ τ ≤ Δ. Only Y is shifted, so the value is not symmetric for Δ < n-1.
pub fn hamming_xcorr_bounded(x: &BinarySequence, y: &BinarySequence, delta: usize) -> Result<usize> {
    check_pair(x, y, delta)?;
    let sparse = (x.weight() + y.weight()) * 16 < x.period();
    Ok(if sparse {
        xcorr_profile_sets(x, y, delta).into_iter().max().unwrap_or(0)
    } else {
        xcorr_profile_words(x, y, delta).into_iter().max().unwrap_or(0)
    })
}

/// Full Hamming cross-correlation H(X, Y) = H_{n-1}(X, Y).
pub fn hamming_xcorr(x: &BinarySequence, y: &BinarySequence) -> Result<usize> {
    hamming_xcorr_bounded(x, y, x.period().saturating_sub(1))
}

/// Correlation values for τ = 0..=Δ computed through characteristic sets:
/// entry τ is |I_X ∩ (I_Y + τ)|.
pub fn xcorr_profile_sets(x: &BinarySequence, y: &BinarySequence, delta: usize) -> Vec<usize> {
    let n = x.period();
    let ys: Vec<usize> = y.ones().collect();
    (0..=delta)
        .map(|tau| ys.iter().filter(|&&j| x.get((j + tau) % n)).count())
        .collect()
}

/// Correlation values for τ = 0..=Δ computed with word-level AND/popcount.
pub fn xcorr_profile_words(x: &BinarySequence, y: &BinarySequence, delta: usize) -> Vec<usize> {
    let n = x.period();
    (0..=delta)
        .map(|tau| {
            x.words()
                .iter()
                .enumerate()
                .map(|(j, &xw)| {
                    let start = (64 * j + n - tau % n) % n;
                    (xw & y.window(start)).count_ones() as usize
                })
                .sum()
        })
        .collect()
}
