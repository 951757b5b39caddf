//! Supporting graphs G_Δ(A) and (k, Δ)-packings of the complete graph K_n.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::SequenceSet;
use crate::diffsets::DisjointDifferenceSet;
use crate::error::{Error, Result};
use crate::seqcore::{BinarySequence, CharacteristicSet};

/// An unordered edge {u, v} of K_n, stored with u < v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::ResidueOutOfRange {
                value: a.max(b),
                modulus: n,
            });
        }
        if a == b {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
        }
        Ok(Self {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

/// The difference of an edge: the smaller of (v - u) and (u - v) mod n,
/// a value in [1, ⌊n/2⌋].
pub fn edge_difference(e: Edge, n: usize) -> usize {
    let d = e.v - e.u;
    d.min(n - d)
}

/// An edge with difference exactly n/2 (n even).
pub fn is_exceptional(e: Edge, n: usize) -> bool {
    n.is_multiple_of(2) && edge_difference(e, n) == n / 2
}

/// A set of edges of K_n.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeSet {
    modulus: usize,
    edges: BTreeSet<Edge>,
}

impl EdgeSet {
    pub fn new(modulus: usize) -> Self {
        Self {
            modulus,
            edges: BTreeSet::new(),
        }
    }

    /// Adds the clique on `vertices`.
    pub fn add_clique(&mut self, vertices: &[usize]) {
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if a != b {
                    self.edges.insert(Edge {
                        u: a.min(b),
                        v: a.max(b),
                    });
                }
            }
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// Smallest shared edge, if any.
    pub fn first_common(&self, other: &EdgeSet) -> Option<Edge> {
        self.edges.intersection(&other.edges).next().copied()
    }

    /// Number of edges having difference `d`.
    pub fn count_with_difference(&self, d: usize) -> usize {
        self.iter().filter(|&e| edge_difference(e, self.modulus) == d).count()
    }
}

/// G_Δ(A): the union of the cliques on A, A + 1, ..., A + Δ.
pub fn supporting_graph(a: &CharacteristicSet, delta: usize) -> Result<EdgeSet> {
    let n = a.modulus();
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "a supporting graph needs at least two vertices".into(),
        ));
    }
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    let mut g = EdgeSet::new(n);
    let mut shifted = Vec::with_capacity(a.len());
    for tau in 0..=delta {
        shifted.clear();
        shifted.extend(a.elements().iter().map(|&x| (x + tau) % n));
        g.add_clique(&shifted);
    }
    Ok(g)
}

/// Predicted |G_Δ(A)| for a 3-subset A having two edges of equal
/// difference d, with Δ < ⌊n/2⌋.
///
/// For d ≠ n/3 the count is 2Δ + 2 + d when d ≤ Δ and 3(Δ + 1) otherwise.
/// The equilateral case d = n/3 has A + n/3 = A, giving 3(Δ + 1) when
/// n/3 > Δ and n otherwise.
pub fn supporting_graph_size_weight3(d: usize, delta: usize, n: usize) -> Result<usize> {
    if d == 0 || d > n / 2 {
        return Err(Error::InvalidParameter(format!(
            "difference {d} is outside [1, {}]",
            n / 2
        )));
    }
    if delta >= n / 2 {
        return Err(Error::CollapseRegime { n, delta });
    }
    if 3 * d == n {
        return Ok(if d > delta { 3 * (delta + 1) } else { n });
    }
    Ok(if d <= delta { 2 * delta + 2 + d } else { 3 * (delta + 1) })
}

/// Outcome of [`is_packing`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PackingVerdict {
    Valid,
    /// Members `first < second` whose supporting graphs share `edge`.
    Collision {
        first: usize,
        second: usize,
        edge: Edge,
    },
}

impl PackingVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PackingVerdict::Valid)
    }
}

fn check_members(members: &[CharacteristicSet], n: usize, delta: usize) -> Result<usize> {
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    let k = members.first().map_or(2, |m| m.len());
    if k < 2 {
        return Err(Error::InvalidParameter("packing members need weight at least 2".into()));
    }
    for (index, m) in members.iter().enumerate() {
        if m.modulus() != n {
            return Err(Error::PeriodMismatch {
                left: n,
                right: m.modulus(),
            });
        }
        if m.len() != k {
            return Err(Error::BlockSizeMismatch {
                index,
                expected: k,
                found: m.len(),
            });
        }
    }
    Ok(k)
}

/// Checks that the supporting graphs of `members` are pairwise
/// edge-disjoint.
///
/// The witness is the first collision met when members are scanned in
/// order and each member's edges in increasing order.
pub fn is_packing(members: &[CharacteristicSet], n: usize, delta: usize) -> Result<PackingVerdict> {
    check_members(members, n, delta)?;
    let graphs: Vec<EdgeSet> = members
        .par_iter()
        .map(|m| supporting_graph(m, delta))
        .collect::<Result<_>>()?;
    let total: usize = graphs.iter().map(EdgeSet::len).sum();
    let mut owner: HashMap<Edge, usize> = HashMap::with_capacity(total);
    for (j, g) in graphs.iter().enumerate() {
        for e in g.iter() {
            if let Some(&i) = owner.get(&e) {
                return Ok(PackingVerdict::Collision {
                    first: i,
                    second: j,
                    edge: e,
                });
            }
            owner.insert(e, j);
        }
    }
    Ok(PackingVerdict::Valid)
}

/// A verified (k, Δ)-packing of K_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportingGraphPacking {
    modulus: usize,
    weight: usize,
    delta: usize,
    members: Vec<CharacteristicSet>,
}

impl SupportingGraphPacking {
    /// Validates the family; member order is preserved. An empty family is
    /// accepted and given weight `weight`.
    pub fn new(modulus: usize, weight: usize, delta: usize, members: Vec<CharacteristicSet>) -> Result<Self> {
        if weight < 2 {
            return Err(Error::InvalidParameter("packing weight must be at least 2".into()));
        }
        if let Some(m) = members.first() {
            if m.len() != weight {
                return Err(Error::WeightMismatch {
                    expected: weight,
                    found: m.len(),
                });
            }
        }
        match is_packing(&members, modulus, delta)? {
            PackingVerdict::Valid => {}
            PackingVerdict::Collision { first, second, edge } => {
                let (u, v) = edge.endpoints();
                return Err(Error::NotPacking { first, second, u, v });
            }
        }
        Ok(Self {
            modulus,
            weight,
            delta,
            members,
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn members(&self) -> &[CharacteristicSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Σ |G_Δ(P_i)|; never exceeds C(n, 2).
    pub fn edges_used(&self) -> usize {
        self.members
            .iter()
            .map(|m| supporting_graph(m, self.delta).map_or(0, |g| g.len()))
            .sum()
    }

    /// Keeps the first `len` members.
    pub fn truncate(&mut self, len: usize) {
        self.members.truncate(len);
    }
}

/// Translates every block B_i by t(Δ + 1) for 0 ≤ t < ⌊n/(Δ + 1)⌋.
/// Members are ordered by block, then by t.
pub fn dds_to_packing(dds: &DisjointDifferenceSet, delta: usize) -> Result<SupportingGraphPacking> {
    let n = dds.modulus();
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    let copies = n / (delta + 1);
    let mut members = Vec::with_capacity(dds.num_blocks() * copies);
    for b in dds.blocks() {
        let base = CharacteristicSet::new(n, b.iter().copied())?;
        for t in 0..copies {
            members.push(base.translate(t * (delta + 1)));
        }
    }
    SupportingGraphPacking::new(n, dds.block_size(), delta, members)
}

/// Sequences whose characteristic sets are the packing members.
pub fn packing_to_code(p: &SupportingGraphPacking) -> Result<SequenceSet> {
    let seqs = p
        .members()
        .iter()
        .map(|m| BinarySequence::from_characteristic_set(m, Some(p.weight())))
        .collect::<Result<Vec<_>>>()?;
    SequenceSet::new(p.modulus(), p.weight(), p.delta(), seqs)
}

/// Characteristic sets of a code; fails unless they form a packing.
pub fn code_to_packing(code: &SequenceSet) -> Result<SupportingGraphPacking> {
    let members = code
        .sequences()
        .iter()
        .map(BinarySequence::characteristic_set)
        .collect();
    SupportingGraphPacking::new(code.period(), code.weight(), code.delta(), members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> CharacteristicSet {
        CharacteristicSet::new(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn edge_count_anchors() {
        let a = supporting_graph(&set(8, &[0, 1, 2]), 2).unwrap();
        assert_eq!(a.len(), 7);
        assert_eq!((a.count_with_difference(1), a.count_with_difference(2)), (4, 3));
        let b = supporting_graph(&set(8, &[3, 5, 7]), 2).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!((b.count_with_difference(2), b.count_with_difference(4)), (5, 3));
        assert_eq!(supporting_graph(&set(8, &[0, 1, 3]), 0).unwrap().len(), 3);
        assert!(supporting_graph(&set(8, &[0]), 0).is_err());
        assert!(supporting_graph(&set(8, &[0, 1]), 8).is_err());
    }

    #[test]
    fn weight3_formula() {
        assert_eq!(supporting_graph_size_weight3(1, 2, 8).unwrap(), 7);
        assert_eq!(supporting_graph_size_weight3(2, 2, 8).unwrap(), 8);
        assert_eq!(supporting_graph_size_weight3(5, 2, 23).unwrap(), 9);
        assert_eq!(supporting_graph(&set(23, &[0, 5, 10]), 2).unwrap().len(), 9);
        assert_eq!(supporting_graph_size_weight3(3, 2, 9).unwrap(), 9);
        assert_eq!(supporting_graph_size_weight3(3, 3, 9).unwrap(), 9);
        assert_eq!(supporting_graph(&set(9, &[0, 3, 6]), 3).unwrap().len(), 9);
        assert!(supporting_graph_size_weight3(1, 4, 8).is_err());
    }

    #[test]
    fn differences() {
        assert_eq!(edge_difference(Edge::new(0, 1, 8).unwrap(), 8), 1);
        let e = Edge::new(4, 0, 8).unwrap();
        assert_eq!(edge_difference(e, 8), 4);
        assert!(is_exceptional(e, 8));
        assert_eq!(edge_difference(Edge::new(1, 7, 8).unwrap(), 8), 2);
        assert!(Edge::new(3, 3, 8).is_err());
    }

    fn example_dds() -> DisjointDifferenceSet {
        DisjointDifferenceSet::new(19, vec![vec![0, 4, 5], vec![0, 6, 8], vec![0, 7, 10]]).unwrap()
    }

    #[test]
    fn dds_translates_in_order() {
        let p = dds_to_packing(&example_dds(), 5).unwrap();
        let listed: [&[usize]; 9] = [
            &[0, 4, 5],
            &[6, 10, 11],
            &[12, 16, 17],
            &[0, 6, 8],
            &[6, 12, 14],
            &[12, 18, 1],
            &[0, 7, 10],
            &[6, 13, 16],
            &[12, 0, 3],
        ];
        let expected: Vec<CharacteristicSet> = listed.iter().map(|xs| set(19, xs)).collect();
        assert_eq!(p.members(), expected.as_slice());
        assert!(is_packing(&expected, 19, 5).unwrap().is_valid());
        assert!(p.edges_used() <= 19 * 18 / 2);

        assert_eq!(dds_to_packing(&example_dds(), 18).unwrap().len(), 3);
    }

    #[test]
    fn collisions_have_witnesses() {
        let v = is_packing(&[set(8, &[0, 1, 2]), set(8, &[1, 2, 3])], 8, 0).unwrap();
        assert_eq!(
            v,
            PackingVerdict::Collision {
                first: 0,
                second: 1,
                edge: Edge::new(1, 2, 8).unwrap()
            }
        );
        assert!(is_packing(&[set(9, &[0, 1]), set(9, &[2, 4])], 9, 1)
            .unwrap()
            .is_valid());
        assert!(matches!(
            is_packing(&[set(9, &[0, 1]), set(9, &[2, 4, 5])], 9, 1),
            Err(Error::BlockSizeMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn code_round_trip() {
        let p = dds_to_packing(&example_dds(), 5).unwrap();
        let code = packing_to_code(&p).unwrap();
        assert_eq!(code.sequences()[3].to_string(), "1000001010000000000");
        let back = code_to_packing(&code).unwrap();
        assert_eq!(back, p);
        assert!(SupportingGraphPacking::new(5, 1, 0, vec![set(5, &[0])]).is_err());
    }
}
