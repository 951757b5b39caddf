//! Disjoint difference sets, difference triangle sets and the classical
//! designs that produce them.
//!
//! Every construction in this module runs its output through the matching
//! checker before returning it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::numtheory::prime_power;

/// Outcome of [`is_dds`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DdsVerdict {
    Valid,
    /// The smallest residue produced twice, with the first two ordered pairs
    /// `(x, y)` (x - y = residue) met in block order.
    Repeated {
        residue: usize,
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl DdsVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, DdsVerdict::Valid)
    }
}

fn validate_blocks(blocks: &[Vec<usize>], n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidParameter("a difference set needs at least one block".into()))?;
    let k = first.len();
    for (index, b) in blocks.iter().enumerate() {
        if b.len() != k {
            return Err(Error::BlockSizeMismatch {
                index,
                expected: k,
                found: b.len(),
            });
        }
        for (i, &x) in b.iter().enumerate() {
            if x >= n {
                return Err(Error::ResidueOutOfRange { value: x, modulus: n });
            }
            if b[..i].contains(&x) {
                return Err(Error::DuplicateResidue { value: x, modulus: n });
            }
        }
    }
    Ok(k)
}

/// Checks that every nonzero residue of Z_n occurs at most once among the
/// within-block differences.
pub fn is_dds(blocks: &[Vec<usize>], n: usize) -> Result<DdsVerdict> {
    validate_blocks(blocks, n)?;
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; n];
    type Repeat = (usize, (usize, usize), (usize, usize));
    let mut repeats: Vec<Repeat> = Vec::new();
    for b in blocks {
        for &x in b {
            for &y in b {
                if x == y {
                    continue;
                }
                let g = (x + n - y) % n;
                match seen[g] {
                    None => seen[g] = Some((x, y)),
                    Some(first) => {
                        if !repeats.iter().any(|r| r.0 == g) {
                            repeats.push((g, first, (x, y)));
                        }
                    }
                }
            }
        }
    }
    Ok(match repeats.into_iter().min_by_key(|r| r.0) {
        None => DdsVerdict::Valid,
        Some((residue, first, second)) => DdsVerdict::Repeated { residue, first, second },
    })
}

/// A DDS whose differences cover every nonzero residue exactly once.
pub fn is_difference_family(blocks: &[Vec<usize>], n: usize) -> Result<bool> {
    let k = validate_blocks(blocks, n)?;
    Ok(is_dds(blocks, n)?.is_valid() && n == blocks.len() * k * (k - 1) + 1)
}

/// An (n, k, r)-disjoint difference set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointDifferenceSet {
    modulus: usize,
    blocks: Vec<Vec<usize>>,
}

impl DisjointDifferenceSet {
    /// Validates the blocks; each block is stored sorted.
    pub fn new(modulus: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        match is_dds(&blocks, modulus)? {
            DdsVerdict::Valid => {}
            DdsVerdict::Repeated { residue, .. } => return Err(Error::NotDisjointDifferenceSet { residue }),
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Self { modulus, blocks })
    }

    /// Translates each block so its minimum is 0 and sorts the blocks.
    pub fn canonical(&self) -> Self {
        let n = self.modulus;
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                let lo = *b.iter().min().expect("blocks are nonempty");
                let mut t: Vec<usize> = b.iter().map(|&x| (x + n - lo) % n).collect();
                t.sort_unstable();
                t
            })
            .collect();
        blocks.sort();
        Self { modulus: n, blocks }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_difference_family(&self) -> bool {
        let k = self.block_size();
        self.modulus == self.num_blocks() * k * (k - 1) + 1
    }

    /// Multiset of within-block differences as a sorted list.
    pub fn differences(&self) -> Vec<usize> {
        let n = self.modulus;
        let mut d: Vec<usize> = self
            .blocks
            .iter()
            .flat_map(|b| {
                b.iter()
                    .flat_map(move |&x| b.iter().filter(move |&&y| y != x).map(move |&y| (x + n - y) % n))
            })
            .collect();
        d.sort_unstable();
        d
    }
}

/// Outcome of [`is_dts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DtsVerdict {
    Valid { scope: u64 },
    NotNormalized { block: usize },
    RepeatedDifference { difference: u64 },
}

/// Checks a normalized difference triangle set: each block starts at 0,
/// is strictly increasing, all blocks have equal size and every positive
/// difference inside the blocks is distinct.
pub fn is_dts(blocks: &[Vec<u64>]) -> Result<DtsVerdict> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidParameter("a difference triangle set needs at least one block".into()))?;
    let len = first.len();
    if len < 2 {
        return Err(Error::InvalidParameter("DTS blocks need at least two elements".into()));
    }
    let mut seen = std::collections::HashSet::new();
    let mut repeated: Option<u64> = None;
    for (i, b) in blocks.iter().enumerate() {
        if b.len() != len {
            return Err(Error::BlockSizeMismatch {
                index: i,
                expected: len,
                found: b.len(),
            });
        }
        if b[0] != 0 || b.windows(2).any(|w| w[0] >= w[1]) {
            return Ok(DtsVerdict::NotNormalized { block: i });
        }
        for j in 0..b.len() {
            for jj in j + 1..b.len() {
                let d = b[jj] - b[j];
                if !seen.insert(d) {
                    repeated = Some(repeated.map_or(d, |r: u64| r.min(d)));
                }
            }
        }
    }
    Ok(match repeated {
        Some(difference) => DtsVerdict::RepeatedDifference { difference },
        None => DtsVerdict::Valid {
            scope: blocks.iter().map(|b| *b.last().unwrap()).max().unwrap(),
        },
    })
}

/// A normalized difference triangle set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceTriangleSet {
    blocks: Vec<Vec<u64>>,
}

impl DifferenceTriangleSet {
    pub fn new(mut blocks: Vec<Vec<u64>>) -> Result<Self> {
        match is_dts(&blocks)? {
            DtsVerdict::Valid { .. } => {}
            DtsVerdict::NotNormalized { block } => {
                return Err(Error::InvalidParameter(format!("block {block} is not normalized")))
            }
            DtsVerdict::RepeatedDifference { difference } => {
                return Err(Error::InvalidParameter(format!("difference {difference} repeats")))
            }
        }
        blocks.sort();
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Largest last element over the blocks.
    pub fn scope(&self) -> u64 {
        self.blocks.iter().map(|b| *b.last().unwrap()).max().unwrap()
    }

    /// All positive differences, sorted.
    pub fn differences(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self
            .blocks
            .iter()
            .flat_map(|b| (0..b.len()).flat_map(move |j| (j + 1..b.len()).map(move |jj| b[jj] - b[j])))
            .collect();
        d.sort_unstable();
        d
    }
}

/// A Skolem sequence (or hooked Skolem sequence) of order r, given as the
/// positions `(a_i, b_i)` of the two copies of `i` with `b_i - a_i = i`.
///
/// The positions partition {1, ..., 2r} for r ≡ 0, 1 (mod 4); for r ≡ 2, 3
/// (mod 4) they partition {1, ..., 2r - 1, 2r + 1} (hooked).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSequence {
    order: u64,
    hooked: bool,
    pairs: Vec<(u64, u64)>,
}

impl SkolemSequence {
    /// Explicit construction by residue class of r mod 4.
    ///
    /// For r ≥ 6 the pairs come from closed families of nested pairs
    /// (s = ⌊r/4⌋ throughout):
    ///
    /// * r = 4s, s ≥ 2: (4s+j-1, 8s-j+1) j=1..2s; (j, 4s-j-1) j=1..s-1;
    ///   (s+j+1, 3s-j) j=1..s-2; (s, s+1), (2s, 4s-1), (2s+1, 6s).
    /// * r = 4s+1, s ≥ 2: (4s+j+1, 8s-j+3) j=1..2s; (j, 4s-j+1) j=1..s;
    ///   (s+j+2, 3s-j+1) j=1..s-2; (s+1, s+2), (2s+2, 4s+1), (2s+1, 6s+2).
    /// * r = 4s+2 (hooked), s ≥ 1: (j, 4s-j+2) j=1..2s; (4s+j+1, 8s-j+4)
    ///   j=1..s; (5s+j+3, 7s-j+4) j=1..s-1; (2s+1, 6s+3), (6s+4, 8s+5),
    ///   (5s+2, 5s+3).
    /// * r = 4s+3 (hooked), s ≥ 1: (j, 4s-j+4) j=1..2s+1; (4s+j+3, 8s-j+6)
    ///   j=1..s; (5s+j+5, 7s-j+6) j=1..s-1; (2s+2, 6s+5), (6s+6, 8s+7),
    ///   (5s+4, 5s+5).
    ///
    /// Orders 1 through 5 use fixed small sequences.
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("Skolem order must be at least 1".into()));
        }
        let hooked = matches!(order % 4, 2 | 3);
        let s = order / 4;
        let mut p: Vec<(u64, u64)> = Vec::with_capacity(order as usize);
        match order {
            1 => p.push((1, 2)),
            2 => p.extend([(1, 2), (3, 5)]),
            3 => p.extend([(2, 3), (5, 7), (1, 4)]),
            4 => p.extend([(1, 2), (4, 6), (5, 8), (3, 7)]),
            5 => p.extend([(8, 9), (1, 3), (4, 7), (2, 6), (5, 10)]),
            _ => match order % 4 {
                0 => {
                    p.extend((1..=2 * s).map(|j| (4 * s + j - 1, 8 * s - j + 1)));
                    p.extend((1..s).map(|j| (j, 4 * s - j - 1)));
                    p.extend((1..s.saturating_sub(1)).map(|j| (s + j + 1, 3 * s - j)));
                    p.extend([(s, s + 1), (2 * s, 4 * s - 1), (2 * s + 1, 6 * s)]);
                }
                1 => {
                    p.extend((1..=2 * s).map(|j| (4 * s + j + 1, 8 * s - j + 3)));
                    p.extend((1..=s).map(|j| (j, 4 * s - j + 1)));
                    p.extend((1..s.saturating_sub(1)).map(|j| (s + j + 2, 3 * s - j + 1)));
                    p.extend([(s + 1, s + 2), (2 * s + 2, 4 * s + 1), (2 * s + 1, 6 * s + 2)]);
                }
                2 => {
                    p.extend((1..=2 * s).map(|j| (j, 4 * s - j + 2)));
                    p.extend((1..=s).map(|j| (4 * s + j + 1, 8 * s - j + 4)));
                    p.extend((1..s).map(|j| (5 * s + j + 3, 7 * s - j + 4)));
                    p.extend([(2 * s + 1, 6 * s + 3), (6 * s + 4, 8 * s + 5), (5 * s + 2, 5 * s + 3)]);
                }
                _ => {
                    p.extend((1..=2 * s + 1).map(|j| (j, 4 * s - j + 4)));
                    p.extend((1..=s).map(|j| (4 * s + j + 3, 8 * s - j + 6)));
                    p.extend((1..s).map(|j| (5 * s + j + 5, 7 * s - j + 6)));
                    p.extend([(2 * s + 2, 6 * s + 5), (6 * s + 6, 8 * s + 7), (5 * s + 4, 5 * s + 5)]);
                }
            },
        }
        p.sort_by_key(|&(a, b)| b - a);
        let seq = Self {
            order,
            hooked,
            pairs: p,
        };
        seq.check()?;
        Ok(seq)
    }

    fn check(&self) -> Result<()> {
        let r = self.order;
        let mut pos: Vec<u64> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        pos.sort_unstable();
        let expected: Vec<u64> = if self.hooked {
            (1..2 * r).chain(std::iter::once(2 * r + 1)).collect()
        } else {
            (1..=2 * r).collect()
        };
        let diffs_ok = self
            .pairs
            .iter()
            .enumerate()
            .all(|(i, &(a, b))| b > a && b - a == i as u64 + 1);
        if pos != expected || !diffs_ok {
            return Err(Error::InvalidParameter(format!(
                "internal error: Skolem construction for order {r} is invalid"
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_hooked(&self) -> bool {
        self.hooked
    }

    /// `pairs()[i - 1] = (a_i, b_i)`.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// The sequence written out, 0 marking the hook position.
    pub fn to_vec(&self) -> Vec<u64> {
        let len = if self.hooked {
            2 * self.order + 1
        } else {
            2 * self.order
        };
        let mut v = vec![0; len as usize];
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            v[a as usize - 1] = i as u64 + 1;
            v[b as usize - 1] = i as u64 + 1;
        }
        v
    }
}

/// An (r, 2)-DTS of scope 3r (r ≡ 0, 1 mod 4) or 3r + 1 (r ≡ 2, 3 mod 4)
/// built from the blocks {0, i, b_i + r} of a (hooked) Skolem sequence.
pub fn skolem_dts(r: u64) -> Result<DifferenceTriangleSet> {
    let sk = SkolemSequence::new(r)?;
    let blocks = sk
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, &(_, b))| vec![0, i as u64 + 1, b + r])
        .collect();
    DifferenceTriangleSet::new(blocks)
}

/// Reads a DTS of scope m as a DDS over Z_n; requires n ≥ 2m + 1.
pub fn dts_to_dds(dts: &DifferenceTriangleSet, n: usize) -> Result<DisjointDifferenceSet> {
    let scope = dts.scope() as usize;
    if n < 2 * scope + 1 {
        return Err(Error::InvalidParameter(format!(
            "modulus {n} is below 2 * scope + 1 = {}",
            2 * scope + 1
        )));
    }
    let blocks = dts
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&x| x as usize).collect())
        .collect();
    Ok(DisjointDifferenceSet::new(n, blocks)?.canonical())
}

/// Singer's planar difference set: a (q^2+q+1, q+1, 1)-DDS from GF(q^3).
pub fn singer_dds(q: u64) -> Result<DisjointDifferenceSet> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let big = FiniteField::new(p, 3 * m)?;
    let n = (q * q + q + 1) as usize;
    let alpha = big.primitive_element();
    let sub = big.subfield(m)?;
    let mut block: Vec<usize> = Vec::with_capacity(sub.len() * sub.len());
    for &a in &sub {
        for &b in &sub {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let x = big.add(a, big.mul(b, alpha));
            let l = big.discrete_log(x).expect("a + bα is nonzero for (a, b) ≠ (0, 0)");
            block.push(l as usize % n);
        }
    }
    block.sort_unstable();
    block.dedup();
    if block.len() != q as usize + 1 {
        return Err(Error::InvalidParameter(format!(
            "internal error: Singer block for q = {q} has {} elements",
            block.len()
        )));
    }
    Ok(DisjointDifferenceSet::new(n, vec![block])?.canonical())
}

/// Bose's (q^2-1, q, 1)-DDS: logarithms of α + GF(q) inside GF(q^2).
pub fn bose_dds(q: u64) -> Result<DisjointDifferenceSet> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let big = FiniteField::new(p, 2 * m)?;
    let n = (q * q - 1) as usize;
    let alpha = big.primitive_element();
    let mut block = Vec::with_capacity(q as usize);
    for a in big.subfield(m)? {
        let x = big.add(alpha, a);
        // α lies outside GF(q), so α + a never vanishes.
        assert!(!x.is_zero(), "α + a = 0 would put α in GF(q)");
        block.push(big.discrete_log(x)? as usize);
    }
    Ok(DisjointDifferenceSet::new(n, vec![block])?.canonical())
}
