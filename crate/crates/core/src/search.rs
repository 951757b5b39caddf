//! Exhaustive oracles: maximum (k, Δ)-packings by branch and bound, and
//! backtracking search for disjoint difference sets and difference families.

use log::debug;

use crate::codes::{dds_size_necessary, is_pcac, SequenceSet};
use crate::constructions::pcac_ui;
use crate::diffsets::{is_dds, DisjointDifferenceSet};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::numtheory::{binomial, is_prime};
use crate::packing::{supporting_graph, SupportingGraphPacking};
use crate::seqcore::CharacteristicSet;

/// Default node budget for both searches.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest number of candidate subsets the packing search will enumerate.
const MAX_CANDIDATES: u128 = 2_000_000;

/// Result of [`max_packing_exact`].
#[derive(Clone, Debug)]
pub struct PackingSearchResult {
    /// Size of `witness`; the optimum when `complete`.
    pub size: usize,
    pub witness: SupportingGraphPacking,
    /// False when the node budget ran out; `size` is then only a lower bound.
    pub complete: bool,
    pub nodes: u64,
    pub root_bound: usize,
}

/// Edge numbering by difference class, then position: edge {i, i + c} of
/// class c sits at `offset[c] + i`, with i < n/2 for the class c = n/2.
struct EdgeIndex {
    n: usize,
    offset: Vec<usize>,
    len: Vec<usize>,
    total: usize,
}

impl EdgeIndex {
    fn new(n: usize) -> Self {
        let classes = n / 2;
        let mut offset = vec![0; classes + 2];
        let mut len = vec![0; classes + 1];
        for c in 1..=classes {
            len[c] = if 2 * c == n { n / 2 } else { n };
            offset[c + 1] = offset[c] + len[c];
        }
        let total = offset[classes + 1];
        Self { n, offset, len, total }
    }

    fn id(&self, u: usize, v: usize) -> usize {
        let n = self.n;
        let d = (v + n - u) % n;
        let (c, i) = if 2 * d <= n { (d, u) } else { (n - d, v) };
        let i = if 2 * c == n { i % (n / 2) } else { i };
        self.offset[c] + i
    }

    fn class_of(&self, e: usize) -> usize {
        self.offset[1..].partition_point(|&o| o <= e)
    }
}

type Mask = Vec<u64>;

fn mask_fits(m: &Mask, free: &Mask) -> bool {
    m.iter().zip(free).all(|(a, f)| a & !f == 0)
}

struct PackingSearch<'a> {
    idx: &'a EdgeIndex,
    k: usize,
    delta: usize,
    candidates: Vec<CharacteristicSet>,
    masks: Vec<Mask>,
    /// Edge ids of each candidate's supporting graph.
    edges: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    by_edge: Vec<Vec<usize>>,
    min_edges: usize,
    /// Smallest vertex count and smallest vertex degree of a candidate's
    /// supporting graph.
    min_cover: usize,
    min_vertex_degree: usize,
    /// seg_cap[c][ℓ]: weighted capacity of a free run of length ℓ in class c.
    seg_cap: Option<Vec<Vec<usize>>>,
    units: usize,
    free: Mask,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

/// Free edges that some candidate fitting in the free edges still uses.
struct Live {
    mask: Mask,
    /// Fitting candidates through each edge.
    count: Vec<usize>,
    degree: Vec<usize>,
    edges: usize,
}

impl PackingSearch<'_> {
    fn live(&self) -> Live {
        let mut count = vec![0; self.idx.total];
        for (c, m) in self.masks.iter().enumerate() {
            if mask_fits(m, &self.free) {
                for &e in &self.edges[c] {
                    count[e] += 1;
                }
            }
        }
        let mut mask = vec![0u64; self.free.len()];
        let mut degree = vec![0; self.idx.n];
        let mut edges = 0;
        for (e, _) in count.iter().enumerate().filter(|&(_, &c)| c > 0) {
            mask[e / 64] |= 1 << (e % 64);
            let (u, v) = self.ends[e];
            degree[u] += 1;
            degree[v] += 1;
            edges += 1;
        }
        Live {
            mask,
            count,
            degree,
            edges,
        }
    }

    fn class_bound(&self, seg_cap: &[Vec<usize>], free: &Mask) -> usize {
        let idx = self.idx;
        let bit = |e: usize| free[e / 64] >> (e % 64) & 1 == 1;
        let mut total = 0;
        for (c, caps) in seg_cap.iter().enumerate().skip(1) {
            let (off, len) = (idx.offset[c], idx.len[c]);
            let Some(start) = (0..len).find(|&i| !bit(off + i)) else {
                let mut cap = caps[len];
                if self.k == 3 && 3 * c == idx.n && c <= self.delta {
                    cap = cap.max(3);
                }
                total += cap;
                continue;
            };
            let mut run = 0;
            for j in 1..=len {
                if bit(off + (start + j) % len) {
                    run += 1;
                } else {
                    total += caps[run];
                    run = 0;
                }
            }
        }
        total / self.units
    }

    /// Δ = 0 only: every member meets each of its vertices in k - 1 edges,
    /// so the unused live edges at v number live_deg(v) mod (k - 1) or more,
    /// and if all those residues vanish the unused edges form a graph of
    /// minimum degree at least 2, which has 0 or at least 3 edges.
    fn leave_bound(&self, live: &Live) -> usize {
        let per_vertex = self.k - 1;
        let residue: usize = live.degree.iter().map(|d| d % per_vertex).sum();
        let leave = residue.div_ceil(2);
        if live.edges < leave {
            return 0;
        }
        let mut m = (live.edges - leave) / self.units;
        let rest = live.edges - m * self.units;
        if residue == 0 && (rest == 1 || rest == 2) {
            m = m.saturating_sub(1);
        }
        m
    }

    fn bound(&self, live: &Live) -> usize {
        let incidences: usize = live.degree.iter().map(|d| d / self.min_vertex_degree).sum();
        let mut b = (live.edges / self.min_edges).min(incidences / self.min_cover);
        if self.delta == 0 && self.k >= 3 {
            b = b.min(self.leave_bound(live));
        }
        if let Some(s) = &self.seg_cap {
            b = b.min(self.class_bound(s, &live.mask));
        }
        b
    }

    fn first_free(&self) -> Option<usize> {
        self.free
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn set_free(&mut self, e: usize, free: bool) {
        if free {
            self.free[e / 64] |= 1u64 << (e % 64);
        } else {
            self.free[e / 64] &= !(1u64 << (e % 64));
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Search while nothing is chosen and only whole difference classes are
    /// excluded. The free edges are then invariant under translation, so if
    /// some member uses an edge of the lowest free class c, a translate of
    /// the packing uses {0, c}; otherwise class c can be dropped entirely.
    fn dfs_symmetric(&mut self) {
        if !self.tick() {
            return;
        }
        if self.bound(&self.live()) <= self.best.len() {
            return;
        }
        let Some(e) = self.first_free() else { return };
        let c = self.idx.class_of(e);
        debug_assert_eq!(self.idx.offset[c], e, "free set is a union of whole classes");
        if !self.cover(e) {
            return;
        }
        let class = e..e + self.idx.len[c];
        for f in class.clone() {
            self.set_free(f, false);
        }
        self.dfs_symmetric();
        for f in class {
            self.set_free(f, true);
        }
    }

    /// Tries every fitting candidate through edge e. Returns false if the
    /// search was aborted.
    fn cover(&mut self, e: usize) -> bool {
        for ci in 0..self.by_edge[e].len() {
            let cand = self.by_edge[e][ci];
            if !mask_fits(&self.masks[cand], &self.free) {
                continue;
            }
            self.claim(cand, true);
            self.chosen.push(cand);
            self.dfs();
            self.chosen.pop();
            self.claim(cand, false);
            if self.aborted {
                return false;
            }
        }
        true
    }

    /// Branches on a live edge: one of its fitting candidates covers it, or
    /// it stays unused. An edge with a single candidate goes first, else the
    /// edge with the fewest candidates in the lowest live difference class.
    fn dfs(&mut self) {
        if !self.tick() {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let live = self.live();
        if self.chosen.len() + self.bound(&live) <= self.best.len() {
            return;
        }
        let Some(first) = (0..self.idx.total).find(|&e| live.count[e] > 0) else {
            return;
        };
        let e = match (first..self.idx.total).find(|&e| live.count[e] == 1) {
            Some(e) => e,
            None => {
                let c = self.idx.class_of(first);
                let class = self.idx.offset[c]..self.idx.offset[c] + self.idx.len[c];
                class
                    .filter(|&e| live.count[e] > 0)
                    .min_by_key(|&e| live.count[e])
                    .unwrap()
            }
        };
        if !self.cover(e) {
            return;
        }
        self.set_free(e, false);
        self.dfs();
        self.set_free(e, true);
    }

    /// Marks a candidate's edges used (`take`) or free again.
    fn claim(&mut self, cand: usize, take: bool) {
        for (f, m) in self.free.iter_mut().zip(&self.masks[cand]) {
            if take {
                *f &= !m;
            } else {
                *f |= m;
            }
        }
    }
}

fn segment_capacities(idx: &EdgeIndex, k: usize, delta: usize) -> Vec<Vec<usize>> {
    let w = delta + 1;
    let mut table = vec![Vec::new()];
    for c in 1..idx.len.len() {
        let len = idx.len[c];
        let doubles = k == 3 && c <= delta;
        table.push(
            (0..=len)
                .map(|l| {
                    if !doubles {
                        return l / w;
                    }
                    (0..=l / (w + c))
                        .map(|b| 2 * b + (l - b * (w + c)) / w)
                        .max()
                        .unwrap_or(0)
                })
                .collect(),
        );
    }
    table
}

/// All k-subsets of {0, ..., n-1} ordered by (largest element, lexicographic).
fn subsets_by_max(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(lo: usize, hi: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in lo..hi {
            if hi - x < left {
                break;
            }
            cur.push(x);
            rec(x + 1, hi, left - 1, cur, out);
            cur.pop();
        }
    }
    for max in k - 1..n {
        cur.clear();
        rec(0, max, k - 1, &mut cur, &mut out);
        for s in out.iter_mut().rev().take_while(|s| s.len() == k - 1) {
            s.push(max);
        }
    }
    out
}

/// Best packing among the translate construction of a DDS and a greedy
/// pass, used as the starting incumbent.
fn initial_packing(
    n: usize,
    k: usize,
    delta: usize,
    cands: &[CharacteristicSet],
    masks: &[Mask],
    words: usize,
) -> Vec<CharacteristicSet> {
    let mut free: Mask = vec![!0; words];
    let mut greedy = Vec::new();
    for (c, m) in cands.iter().zip(masks) {
        if mask_fits(m, &free) {
            for (f, b) in free.iter_mut().zip(m) {
                *f &= !b;
            }
            greedy.push(c.clone());
        }
    }
    let mut best = greedy;
    let r_max = dds_size_necessary(n, k).unwrap_or(0);
    let copies = n / (delta + 1);
    for r in (1..=r_max).rev() {
        if r * copies <= best.len() {
            break;
        }
        let Ok(DfSearchResult {
            outcome: DfOutcome::Found(dds),
            ..
        }) = df_search(n, k, r, 200_000)
        else {
            continue;
        };
        best = dds
            .blocks()
            .iter()
            .flat_map(|b| {
                let base = CharacteristicSet::new(n, b.iter().copied()).expect("valid block");
                (0..copies).map(move |t| base.translate(t * (delta + 1)))
            })
            .collect();
        break;
    }
    best
}

/// Maximum (k, Δ)-packing of K_n by branch and bound.
///
/// Branches on a free edge: either some candidate k-subset whose supporting
/// graph fits in the free edges covers it, or it stays unused. Edges no
/// fitting candidate uses are ignored by the bound, which is the smallest
/// of the free-edge count over the smallest supporting graph, a vertex
/// count (members through a vertex are limited by its free degree), a
/// parity count on the unused edges when Δ = 0 and, for
/// k ∈ {2, 3} below the collapse threshold, a per-difference-class
/// capacity: each member occupies windows of Δ + 1 consecutive edges in
/// the classes of its differences, a repeated difference c ≤ Δ forming one
/// window of length Δ + 1 + c.
///
/// Until the first member is chosen, translation symmetry is used: the
/// lowest free edge {0, c} is either covered or its whole class dropped.
pub fn max_packing_exact(n: usize, k: usize, delta: usize, budget: u64) -> Result<PackingSearchResult> {
    if k < 2 || n <= k {
        return Err(Error::InvalidParameter(format!(
            "need n > k >= 2, got n = {n}, k = {k}"
        )));
    }
    if delta >= n {
        return Err(Error::ShiftOutOfRange { delta, n });
    }
    if binomial(n as u64, k as u64) > MAX_CANDIDATES {
        return Err(Error::InvalidParameter(format!(
            "C({n}, {k}) candidate subsets exceed the search limit"
        )));
    }
    let idx = EdgeIndex::new(n);
    let words = idx.total.div_ceil(64);
    let mut seen = std::collections::HashSet::new();
    let mut candidates = Vec::new();
    let mut masks: Vec<Mask> = Vec::new();
    for s in subsets_by_max(n, k) {
        let set = CharacteristicSet::new(n, s)?;
        let g = supporting_graph(&set, delta)?;
        let mut m = vec![0u64; words];
        for e in g.iter() {
            let (u, v) = e.endpoints();
            let id = idx.id(u, v);
            m[id / 64] |= 1 << (id % 64);
        }
        if seen.insert(m.clone()) {
            candidates.push(set);
            masks.push(m);
        }
    }
    let mut ends = vec![(0, 0); idx.total];
    for u in 0..n {
        for v in u + 1..n {
            ends[idx.id(u, v)] = (u, v);
        }
    }
    let mut by_edge = vec![Vec::new(); idx.total];
    let mut edges = Vec::with_capacity(masks.len());
    let (mut min_cover, mut min_vertex_degree) = (n, n);
    for (ci, m) in masks.iter().enumerate() {
        let ids: Vec<usize> = (0..idx.total).filter(|&e| m[e / 64] >> (e % 64) & 1 == 1).collect();
        let mut deg = vec![0usize; n];
        for &e in &ids {
            by_edge[e].push(ci);
            deg[ends[e].0] += 1;
            deg[ends[e].1] += 1;
        }
        min_cover = min_cover.min(deg.iter().filter(|&&d| d > 0).count());
        min_vertex_degree = min_vertex_degree.min(deg.iter().copied().filter(|&d| d > 0).min().unwrap_or(n));
        edges.push(ids);
    }
    let min_edges = masks
        .iter()
        .map(|m| m.iter().map(|w| w.count_ones() as usize).sum())
        .min()
        .unwrap_or(1);
    let seg_cap = (k <= 3 && delta < n / 2).then(|| segment_capacities(&idx, k, delta));
    let mut free = vec![!0u64; words];
    if !idx.total.is_multiple_of(64) {
        free[words - 1] = (1u64 << (idx.total % 64)) - 1;
    }

    let seed = initial_packing(n, k, delta, &candidates, &masks, words);
    let mut search = PackingSearch {
        idx: &idx,
        k,
        delta,
        candidates,
        masks,
        edges,
        ends,
        by_edge,
        min_edges,
        min_cover,
        min_vertex_degree,
        seg_cap,
        units: k * (k - 1) / 2,
        free,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    let root_bound = search.bound(&search.live());
    debug!(
        "packing n={n} k={k} delta={delta}: root bound {root_bound}, seed {}",
        seed.len()
    );

    let (size, members) = if seed.len() >= root_bound {
        (seed.len(), seed)
    } else {
        // Only solutions beating the seed are of interest; a placeholder of
        // seed length makes the bound prune everything else.
        search.best = vec![usize::MAX; seed.len()];
        search.dfs_symmetric();
        if search.best.first() == Some(&usize::MAX) || search.best.is_empty() {
            (seed.len(), seed)
        } else {
            let members: Vec<CharacteristicSet> = search.best.iter().map(|&c| search.candidates[c].clone()).collect();
            (members.len(), members)
        }
    };
    debug!("packing n={n} k={k} delta={delta}: {size} after {} nodes", search.nodes);
    Ok(PackingSearchResult {
        size,
        witness: SupportingGraphPacking::new(n, k, delta, members)?,
        complete: !search.aborted,
        nodes: search.nodes,
        root_bound,
    })
}

/// Outcome of [`df_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DfOutcome {
    Found(DisjointDifferenceSet),
    /// The whole canonical search space was explored without a solution.
    Exhausted,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfSearchResult {
    pub outcome: DfOutcome,
    pub nodes: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Budget,
}

/// Backtracking over canonical DDS representatives.
///
/// In difference-family mode (n = r·k(k-1) + 1) each new block is
/// translated so that it contains 0 and the smallest uncovered difference
/// d; the block covering d must exist, so this loses nothing. Otherwise
/// every block is the lexicographically smallest of its translates that
/// contain 0, and blocks appear in increasing lexicographic order.
struct DdsSearch<F: FnMut(&[Vec<usize>]) -> bool> {
    n: usize,
    k: usize,
    r: usize,
    df: bool,
    used: Vec<bool>,
    blocks: Vec<Vec<usize>>,
    current: Vec<usize>,
    /// Forced difference of the open block in DF mode.
    forced: usize,
    nodes: u64,
    budget: u64,
    visit: F,
}

impl<F: FnMut(&[Vec<usize>]) -> bool> DdsSearch<F> {
    fn new(n: usize, k: usize, r: usize, budget: u64, df: bool, visit: F) -> Self {
        Self {
            n,
            k,
            r,
            df,
            used: vec![false; n],
            blocks: Vec::with_capacity(r),
            current: Vec::with_capacity(k),
            forced: 0,
            nodes: 0,
            budget,
            visit,
        }
    }

    /// Adds x to the open block if all its differences with the block are
    /// new; nothing is marked on failure.
    fn try_add(&mut self, x: usize) -> bool {
        let n = self.n;
        for i in 0..self.current.len() {
            let g = (x + n - self.current[i]) % n;
            let h = n - g;
            if g == h || self.used[g] || self.used[h] {
                for &y in &self.current[..i] {
                    let g = (x + n - y) % n;
                    self.used[g] = false;
                    self.used[n - g] = false;
                }
                return false;
            }
            self.used[g] = true;
            self.used[h] = true;
        }
        self.current.push(x);
        true
    }

    fn remove_last(&mut self) {
        let n = self.n;
        let x = self.current.pop().expect("open block is nonempty");
        for &y in &self.current {
            let g = (x + n - y) % n;
            self.used[g] = false;
            self.used[n - g] = false;
        }
    }

    fn is_orbit_minimum(&self, b: &[usize]) -> bool {
        let n = self.n;
        b[1..].iter().all(|&s| {
            let mut t: Vec<usize> = b.iter().map(|&x| (x + n - s) % n).collect();
            t.sort_unstable();
            t.as_slice() >= b
        })
    }

    fn open_block(&mut self) -> Flow {
        if self.blocks.len() == self.r {
            return if (self.visit)(&self.blocks) {
                Flow::Stop
            } else {
                Flow::Continue
            };
        }
        self.current.clear();
        self.current.push(0);
        if !self.df {
            return self.extend(1);
        }
        let Some(d) = (1..self.n).find(|&d| !self.used[d]) else {
            return Flow::Continue;
        };
        if !self.try_add(d) {
            return Flow::Continue;
        }
        let saved = self.forced;
        self.forced = d;
        let flow = self.extend(1);
        self.forced = saved;
        self.remove_last();
        flow
    }

    fn close_block(&mut self) -> Flow {
        let mut block = self.current.clone();
        block.sort_unstable();
        if !self.df && (self.blocks.last().is_some_and(|p| *p >= block) || !self.is_orbit_minimum(&block)) {
            return Flow::Continue;
        }
        let saved = std::mem::take(&mut self.current);
        self.blocks.push(block);
        let flow = self.open_block();
        self.blocks.pop();
        self.current = saved;
        flow
    }

    fn extend(&mut self, lo: usize) -> Flow {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Flow::Budget;
        }
        if self.current.len() == self.k {
            return self.close_block();
        }
        let need = self.k - self.current.len();
        for x in lo..self.n {
            if self.n - x < need {
                break;
            }
            if self.df && x == self.forced {
                continue;
            }
            if !self.df {
                if let Some(p) = self.blocks.last() {
                    let j = self.current.len();
                    if self.current[..j] == p[..j] && x < p[j] {
                        continue;
                    }
                }
            }
            if !self.try_add(x) {
                continue;
            }
            let flow = self.extend(x + 1);
            self.remove_last();
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }
}

fn check_dds_parameters(n: usize, k: usize, r: usize) -> Result<()> {
    if k < 2 || r == 0 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 2 and r >= 1, got k = {k}, r = {r}"
        )));
    }
    if n < r * k * (k - 1) + 1 {
        return Err(Error::InvalidParameter(format!(
            "no ({n},{k},{r})-DDS can exist: n must be at least {}",
            r * k * (k - 1) + 1
        )));
    }
    Ok(())
}

/// Searches for an (n, k, r)-DDS, a difference family when
/// n = r·k(k-1) + 1. `budget` counts search-tree nodes.
pub fn df_search(n: usize, k: usize, r: usize, budget: u64) -> Result<DfSearchResult> {
    check_dds_parameters(n, k, r)?;
    let mut found: Option<Vec<Vec<usize>>> = None;
    let df = n == r * k * (k - 1) + 1;
    let mut search = DdsSearch::new(n, k, r, budget, df, |blocks: &[Vec<usize>]| {
        found = Some(blocks.to_vec());
        true
    });
    let flow = search.open_block();
    let nodes = search.nodes;
    debug!("dds search ({n},{k},{r}): {nodes} nodes");
    let outcome = match flow {
        Flow::Stop => {
            let blocks = found.expect("a stopped search has a solution");
            debug_assert!(is_dds(&blocks, n)?.is_valid());
            DfOutcome::Found(DisjointDifferenceSet::new(n, blocks)?.canonical())
        }
        Flow::Continue => DfOutcome::Exhausted,
        Flow::Budget => DfOutcome::BudgetExceeded,
    };
    Ok(DfSearchResult { outcome, nodes })
}

/// Multiplier construction of a (p, k)-difference family for prime p.
///
/// With t = (p - 1)/(k(k-1)), let H be the subgroup of Z_p^* of order 2t
/// and m = k(k-1)/2 its index. If the m differences x - y (x > y) of a
/// base block B lie in m distinct cosets of H, the blocks s·B for s over
/// representatives of H/{±1} form a difference family. The block is found
/// by backtracking over B = {0, 1, x_3 < ... < x_k}; any valid block can
/// be scaled and translated to that shape. `None` means no such block was
/// found within `budget` nodes, not that no family exists.
pub fn multiplier_df_search(p: usize, k: usize, budget: u64) -> Result<Option<DisjointDifferenceSet>> {
    if !is_prime(p as u64) || k < 3 || !(p - 1).is_multiple_of(k * (k - 1)) {
        return Err(Error::InvalidParameter(format!(
            "need a prime p with k(k-1) | p - 1 and k >= 3, got p = {p}, k = {k}"
        )));
    }
    let field = FiniteField::new(p as u64, 1)?;
    let m = k * (k - 1) / 2;
    let t = (p - 1) / (k * (k - 1));
    let mut coset = vec![usize::MAX; p];
    for e in 0..p - 1 {
        coset[field.exp(e as u64).index() as usize] = e % m;
    }
    let mut block = vec![0usize, 1];
    let mut used = vec![false; m];
    used[coset[1]] = true;
    let mut nodes = 0u64;
    if !extend_multiplier_block(p, k, &coset, &mut block, &mut used, &mut nodes, budget) {
        debug!("multiplier search ({p},{k}): no block after {nodes} nodes");
        return Ok(None);
    }
    let blocks: Vec<Vec<usize>> = (0..t)
        .map(|j| {
            let s = field.exp((m * j) as u64).index() as usize;
            block.iter().map(|&x| x * s % p).collect()
        })
        .collect();
    if !is_dds(&blocks, p)?.is_valid() {
        return Err(Error::InvalidParameter(format!(
            "internal error: multiplier family for ({p},{k}) is invalid"
        )));
    }
    Ok(Some(DisjointDifferenceSet::new(p, blocks)?.canonical()))
}

fn extend_multiplier_block(
    p: usize,
    k: usize,
    coset: &[usize],
    block: &mut Vec<usize>,
    used: &mut [bool],
    nodes: &mut u64,
    budget: u64,
) -> bool {
    if block.len() == k {
        return true;
    }
    let last = *block.last().expect("block starts with 0 and 1");
    let mut fresh = Vec::with_capacity(k);
    for x in last + 1..p {
        if *nodes >= budget {
            return false;
        }
        *nodes += 1;
        fresh.clear();
        let ok = block.iter().all(|&y| {
            let c = coset[x - y];
            if used[c] || fresh.contains(&c) {
                return false;
            }
            fresh.push(c);
            true
        });
        if !ok {
            continue;
        }
        for &c in &fresh {
            used[c] = true;
        }
        block.push(x);
        if extend_multiplier_block(p, k, coset, block, used, nodes, budget) {
            return true;
        }
        block.pop();
        for y in block.iter() {
            used[coset[x - y]] = false;
        }
    }
    false
}

/// Number of canonical solutions visited by [`df_search`]'s enumeration.
/// Returns `None` if the budget runs out.
pub fn count_canonical_dds(n: usize, k: usize, r: usize, budget: u64) -> Result<Option<u64>> {
    check_dds_parameters(n, k, r)?;
    let mut count = 0u64;
    let df = n == r * k * (k - 1) + 1;
    let mut search = DdsSearch::new(n, k, r, budget, df, |_: &[Vec<usize>]| {
        count += 1;
        false
    });
    let flow = search.open_block();
    Ok((flow != Flow::Budget).then_some(count))
}

/// Number of ordered r-tuples of k-subsets of Z_n forming a DDS, by plain
/// enumeration without symmetry breaking. Equals the canonical count
/// times n^r · r!.
pub fn count_ordered_dds_bruteforce(n: usize, k: usize, r: usize) -> u64 {
    let subsets: Vec<Vec<usize>> = subsets_by_max(n, k)
        .into_iter()
        .filter(|b| is_dds(std::slice::from_ref(b), n).is_ok_and(|v| v.is_valid()))
        .collect();
    fn rec(n: usize, r: usize, subsets: &[Vec<usize>], chosen: &mut Vec<Vec<usize>>) -> u64 {
        if chosen.len() == r {
            return 1;
        }
        let mut total = 0;
        for s in subsets {
            chosen.push(s.clone());
            if is_dds(chosen, n).is_ok_and(|v| v.is_valid()) {
                total += rec(n, r, subsets, chosen);
            }
            chosen.pop();
        }
        total
    }
    rec(n, r, &subsets, &mut Vec::new())
}

/// A difference-family backed lower bound on M_Δ(n, k) with Δ = √n.
#[derive(Clone, Debug)]
pub struct Table3Row {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// r · ⌊n / (√n + 1)⌋ with the real square root.
    pub value: usize,
    pub dds: DisjointDifferenceSet,
    /// A verified code of exactly `value` sequences; shifts up to ⌊√n⌋.
    pub code: SequenceSet,
}

/// Builds the √n-shift lower bound from an (n, k)-difference family.
pub fn table3_row(n: usize, k: usize, budget: u64) -> Result<Table3Row> {
    if k < 2 || n <= k || !(n - 1).is_multiple_of(k * (k - 1)) {
        return Err(Error::InvalidParameter(format!(
            "n - 1 = {} is not a multiple of k(k-1) = {}",
            n.saturating_sub(1),
            k * k.saturating_sub(1)
        )));
    }
    let r = (n - 1) / (k * (k - 1));
    let multiplier = if k >= 3 && is_prime(n as u64) {
        multiplier_df_search(n, k, budget)?
    } else {
        None
    };
    let dds = match multiplier {
        Some(d) => d,
        None => match df_search(n, k, r, budget)?.outcome {
            DfOutcome::Found(d) => d,
            DfOutcome::Exhausted => {
                return Err(Error::InvalidParameter(format!(
                    "no ({n},{k})-difference family exists"
                )))
            }
            DfOutcome::BudgetExceeded => {
                return Err(Error::InvalidParameter(format!(
                    "({n},{k})-difference family not found within {budget} nodes"
                )))
            }
        },
    };
    let root = (n as f64).sqrt();
    let value = r * (n as f64 / (root + 1.0)).floor() as usize;
    let delta = (n as u64).isqrt() as usize;
    let mut code = pcac_ui(&dds, delta)?;
    code.truncate(value);
    if !is_pcac(&code).is_valid() || code.len() != value {
        return Err(Error::InvalidParameter(format!(
            "internal error: code for ({n},{k}) failed verification"
        )));
    }
    Ok(Table3Row {
        n,
        k,
        r,
        value,
        dds,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{bounds_weight3, exact_m_weight2};
    use crate::diffsets::is_difference_family;

    #[test]
    fn edge_index_is_a_bijection() {
        for n in 3..=12 {
            let idx = EdgeIndex::new(n);
            assert_eq!(idx.total, n * (n - 1) / 2);
            let mut ids: Vec<usize> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .map(|(u, v)| idx.id(u, v))
                .collect();
            ids.sort_unstable();
            assert_eq!(ids, (0..idx.total).collect::<Vec<_>>());
        }
    }

    #[test]
    fn subset_order() {
        let s = subsets_by_max(4, 2);
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets_by_max(7, 3).len(), 35);
    }

    #[test]
    fn weight2_examples() {
        let r = max_packing_exact(9, 2, 2, DEFAULT_NODE_BUDGET).unwrap();
        assert!(r.complete);
        assert_eq!(r.size, 12);
        assert_eq!(r.size as u64, exact_m_weight2(9, 2).unwrap());
        assert_eq!(max_packing_exact(8, 2, 1, DEFAULT_NODE_BUDGET).unwrap().size, 14);
    }

    #[test]
    fn weight3_small() {
        let r = max_packing_exact(7, 3, 0, DEFAULT_NODE_BUDGET).unwrap();
        assert!(r.complete);
        assert_eq!(r.size, 7);
        let r = max_packing_exact(13, 3, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert!(r.complete);
        assert_eq!(r.size, 12);
        let b = bounds_weight3(13, 1).unwrap();
        assert!(b.lower <= 12 && 12 <= b.upper.unwrap());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let r = max_packing_exact(12, 2, 1, 3).unwrap();
        assert!(!r.complete);
        assert!(max_packing_exact(5, 5, 0, 10).is_err());
    }

    #[test]
    fn df_examples() {
        let r = df_search(13, 4, 1, DEFAULT_NODE_BUDGET).unwrap();
        let DfOutcome::Found(d) = r.outcome else {
            panic!("no (13,4)-DF found")
        };
        assert!(is_difference_family(d.blocks(), 13).unwrap());

        let r = df_search(19, 3, 3, DEFAULT_NODE_BUDGET).unwrap();
        assert!(matches!(r.outcome, DfOutcome::Found(_)));

        // 14 ≥ 2·6 + 1, yet no (14,3,2)-DDS exists.
        let r = df_search(14, 3, 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.outcome, DfOutcome::Exhausted);
        assert_eq!(count_ordered_dds_bruteforce(14, 3, 2), 0);

        assert!(df_search(18, 3, 3, 10).is_err());
        assert_eq!(df_search(61, 4, 5, 2).unwrap().outcome, DfOutcome::BudgetExceeded);
    }

    #[test]
    fn canonical_counts_match_brute_force() {
        for n in 7..=13 {
            for r in 1..=(n - 1) / 6 {
                let brute = count_ordered_dds_bruteforce(n, 3, r);
                let canon = count_canonical_dds(n, 3, r, DEFAULT_NODE_BUDGET).unwrap().unwrap();
                let factor = (n as u64).pow(r as u32) * (1..=r as u64).product::<u64>();
                assert_eq!(brute, canon * factor, "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn table3_small_row() {
        let row = table3_row(13, 4, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((row.r, row.value), (1, 2));
        assert_eq!(row.code.len(), 2);
        assert!(table3_row(14, 4, 10).is_err());
    }

    #[test]
    fn multiplier_families() {
        for (p, k) in [
            (13, 3),
            (13, 4),
            (37, 4),
            (41, 5),
            (31, 6),
            (151, 6),
            (337, 7),
            (1051, 7),
        ] {
            let d = multiplier_df_search(p, k, 10_000_000).unwrap().expect("family exists");
            assert_eq!(d.num_blocks(), (p - 1) / (k * (k - 1)));
            assert!(d.is_difference_family());
        }
        assert_eq!(multiplier_df_search(61, 6, u64::MAX).unwrap(), None);
        assert!(multiplier_df_search(25, 4, 100).is_err());
    }
}
