//! Edge-to-edge dissimilarities and the tables derived from them.
//!
//! Every edge's boundary strip is read clockwise. When edge `e1` of one piece
//! abuts edge `e2` of another, walking along the seam visits `e1` clockwise and
//! `e2` counterclockwise, so pixel `k` of `e1`'s strip meets pixel `K-1-k` of
//! `e2`'s. For a right edge against a left edge this is the usual row-by-row
//! comparison, and the value does not depend on how the pair is later rotated.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::par;
use crate::tile::{EdgeLabel, EdgeRef, Piece, RelativeRelation};

pub const DEFAULT_TABLE_THRESHOLD: usize = 6_000;
pub const DEFAULT_MEMO_CAPACITY: usize = 1 << 20;

/// Root of summed squared channel differences between two abutting strips,
/// both given in clockwise order.
fn strip_distance(s1: &[[f64; 3]], s2: &[[f64; 3]]) -> f64 {
    let k = s1.len();
    let mut sum = 0.0;
    for i in 0..k {
        let p = s1[i];
        let q = s2[k - 1 - i];
        for ch in 0..3 {
            let d = p[ch] - q[ch];
            sum += d * d;
        }
    }
    libm::sqrt(sum)
}

/// Dissimilarity of placing edge `edge_a` of `a` against edge `edge_b` of `b`.
pub fn dissimilarity(a: &Piece, edge_a: EdgeLabel, b: &Piece, edge_b: EdgeLabel) -> Result<f64> {
    if a.id() == b.id() {
        return Err(invalid!("dissimilarity of piece {} with itself", a.id()));
    }
    if a.side() != b.side() {
        return Err(Error::Dimension { expected: a.side(), actual: b.side() });
    }
    // Lower piece id first, matching the table's canonical order bit for bit.
    let ((a, edge_a), (b, edge_b)) =
        if (a.id(), edge_a) <= (b.id(), edge_b) { ((a, edge_a), (b, edge_b)) } else { ((b, edge_b), (a, edge_a)) };
    let s1: Vec<_> = a.strip_clockwise(edge_a).collect();
    let s2: Vec<_> = b.strip_clockwise(edge_b).collect();
    Ok(strip_distance(&s1, &s2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMode {
    /// Every unordered edge pair is stored.
    Materialized,
    /// Values are recomputed from the edge strips on request (memoized under `std`).
    OnDemand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Above this many pieces the table switches to on-demand mode.
    pub threshold: usize,
    /// Forces a mode regardless of `threshold`.
    pub mode: Option<TableMode>,
    /// Upper bound on memoized values in on-demand mode.
    pub memo_capacity: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { threshold: DEFAULT_TABLE_THRESHOLD, mode: None, memo_capacity: DEFAULT_MEMO_CAPACITY }
    }
}

impl TableOptions {
    pub fn resolve(&self, n: usize) -> TableMode {
        self.mode.unwrap_or(if n > self.threshold { TableMode::OnDemand } else { TableMode::Materialized })
    }
}

/// Bytes a materialized table needs for `n` pieces.
pub fn materialized_bytes(n: usize) -> u64 {
    pair_count(n) as u64 * 16 * core::mem::size_of::<f64>() as u64
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the unordered piece pair `(i, j)`, `i < j`, in row-major upper-triangle order.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

enum Storage {
    Materialized(Vec<f64>),
    OnDemand(memo::MemoCache),
}

/// Precomputed compatibility data for one puzzle instance.
pub struct CompatibilityTable {
    n: usize,
    side: usize,
    /// Clockwise boundary strips, `side` pixels per edge, edges in `EdgeRef::index` order.
    strips: Vec<[f64; 3]>,
    storage: Storage,
    mean: f64,
    none_penalty: f64,
    most_compatible: Vec<EdgeRef>,
}

impl core::fmt::Debug for CompatibilityTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CompatibilityTable")
            .field("n", &self.n)
            .field("side", &self.side)
            .field("mode", &self.mode())
            .field("none_penalty", &self.none_penalty)
            .finish_non_exhaustive()
    }
}

struct RowScan {
    partial_sum: f64,
    best: [(f64, usize); 4],
}

impl CompatibilityTable {
    pub fn build(pieces: &[Piece]) -> Result<CompatibilityTable> {
        Self::build_with(pieces, TableOptions::default())
    }

    pub fn build_with(pieces: &[Piece], options: TableOptions) -> Result<CompatibilityTable> {
        let (n, side, strips) = Self::prepare(pieces)?;
        let storage = match options.resolve(n) {
            TableMode::Materialized => {
                let rows = par::map_indexed(n, |i| {
                    let mut row = Vec::with_capacity(16 * (n - i - 1));
                    for j in i + 1..n {
                        for ea in 0..4 {
                            for eb in 0..4 {
                                row.push(strip_distance(
                                    Self::strip_of(&strips, side, 4 * i + ea),
                                    Self::strip_of(&strips, side, 4 * j + eb),
                                ));
                            }
                        }
                    }
                    row
                });
                Storage::Materialized(rows.concat())
            }
            TableMode::OnDemand => Storage::OnDemand(memo::MemoCache::new(options.memo_capacity)),
        };
        Ok(Self::finish(n, side, strips, storage))
    }

    /// Rebuilds a materialized table from stored pair values (see [`Self::materialized_values`]).
    pub fn from_materialized_values(pieces: &[Piece], values: Vec<f64>) -> Result<CompatibilityTable> {
        let (n, side, strips) = Self::prepare(pieces)?;
        if values.len() != 16 * pair_count(n) {
            return Err(invalid!("expected {} table values, got {}", 16 * pair_count(n), values.len()));
        }
        Ok(Self::finish(n, side, strips, Storage::Materialized(values)))
    }

    fn prepare(pieces: &[Piece]) -> Result<(usize, usize, Vec<[f64; 3]>)> {
        let n = pieces.len();
        if n < 2 {
            return Err(invalid!("need at least 2 pieces, got {n}"));
        }
        let side = pieces[0].side();
        let mut strips = Vec::with_capacity(4 * n * side);
        for (i, p) in pieces.iter().enumerate() {
            if p.id() != i {
                return Err(invalid!("piece at position {i} has id {}", p.id()));
            }
            if p.side() != side {
                return Err(Error::Dimension { expected: side, actual: p.side() });
            }
            for e in EdgeLabel::ALL {
                strips.extend(p.strip_clockwise(e));
            }
        }
        Ok((n, side, strips))
    }

    fn finish(n: usize, side: usize, strips: Vec<[f64; 3]>, storage: Storage) -> CompatibilityTable {
        let mut table = CompatibilityTable {
            n,
            side,
            strips,
            storage,
            mean: 0.0,
            none_penalty: 0.0,
            most_compatible: Vec::new(),
        };
        let scans = par::map_indexed(n, |i| table.scan_row(i));
        let total: f64 = scans.iter().map(|s| s.partial_sum).sum();
        table.mean = total / (16 * pair_count(n)) as f64;
        table.none_penalty = 2.0 * table.mean;
        table.most_compatible = scans.iter().flat_map(|s| s.best.map(|(_, v)| EdgeRef::from_index(v))).collect();
        table
    }

    /// One streaming pass over piece `i`: the sum of its pairs with higher-indexed
    /// pieces and the argmin partner of each of its edges. Ties keep the smallest
    /// partner index.
    fn scan_row(&self, i: usize) -> RowScan {
        let mut partial_sum = 0.0;
        let mut best = [(f64::INFINITY, usize::MAX); 4];
        for j in 0..self.n {
            if j == i {
                continue;
            }
            for ea in 0..4 {
                for eb in 0..4 {
                    let d = self.scan_value(4 * i + ea, 4 * j + eb);
                    if j > i {
                        partial_sum += d;
                    }
                    if d < best[ea].0 {
                        best[ea] = (d, 4 * j + eb);
                    }
                }
            }
        }
        RowScan { partial_sum, best }
    }

    fn strip_of(strips: &[[f64; 3]], side: usize, edge: usize) -> &[[f64; 3]] {
        &strips[edge * side..(edge + 1) * side]
    }

    fn compute(&self, u: usize, v: usize) -> f64 {
        strip_distance(Self::strip_of(&self.strips, self.side, u), Self::strip_of(&self.strips, self.side, v))
    }

    /// Like [`Self::value`] but never touches the memo cache.
    fn scan_value(&self, u: usize, v: usize) -> f64 {
        match self.storage {
            Storage::Materialized(_) => self.value(u, v),
            Storage::OnDemand(_) => {
                let (u, v) = if u < v { (u, v) } else { (v, u) };
                self.compute(u, v)
            }
        }
    }

    /// Value for two dense edge indices on distinct pieces.
    fn value(&self, u: usize, v: usize) -> f64 {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        match &self.storage {
            Storage::Materialized(values) => {
                let (i, j) = (u / 4, v / 4);
                values[pair_index(self.n, i, j) * 16 + (u & 3) * 4 + (v & 3)]
            }
            Storage::OnDemand(cache) => cache.get_or_insert((u * 4 * self.n + v) as u64, || self.compute(u, v)),
        }
    }

    pub fn piece_count(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn mode(&self) -> TableMode {
        match self.storage {
            Storage::Materialized(_) => TableMode::Materialized,
            Storage::OnDemand(_) => TableMode::OnDemand,
        }
    }

    /// Stored pair values in piece-pair order `(0,1), (0,2), ..., (1,2), ...`,
    /// 16 per pair ordered by (label of lower piece, label of higher piece).
    /// `None` in on-demand mode.
    pub fn materialized_values(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Materialized(values) => Some(values),
            Storage::OnDemand(_) => None,
        }
    }

    /// Unchecked lookup for the hot path. Both edges must be on distinct, in-range pieces.
    pub fn get(&self, e1: EdgeRef, e2: EdgeRef) -> f64 {
        debug_assert!(e1.piece != e2.piece && e1.piece < self.n && e2.piece < self.n);
        self.value(e1.index(), e2.index())
    }

    pub fn lookup(&self, e1: EdgeRef, e2: EdgeRef) -> Result<f64> {
        self.check_pair(e1, e2)?;
        Ok(self.get(e1, e2))
    }

    fn check_pair(&self, e1: EdgeRef, e2: EdgeRef) -> Result<()> {
        if e1.piece >= self.n || e2.piece >= self.n {
            return Err(invalid!("edge out of range for {} pieces: {e1}, {e2}", self.n));
        }
        if e1.piece == e2.piece {
            return Err(invalid!("edges {e1} and {e2} belong to the same piece"));
        }
        Ok(())
    }

    /// Mean over all unordered edge pairs of distinct pieces.
    pub fn mean_dissimilarity(&self) -> f64 {
        self.mean
    }

    /// Cost charged for an edge with no neighbour: twice the mean dissimilarity.
    pub fn none_penalty(&self) -> f64 {
        self.none_penalty
    }

    pub fn most_compatible(&self, e: EdgeRef) -> EdgeRef {
        self.most_compatible[e.index()]
    }

    pub fn most_compatible_all(&self) -> &[EdgeRef] {
        &self.most_compatible
    }

    pub fn best_buddies(&self, e1: EdgeRef, e2: EdgeRef) -> Result<bool> {
        self.check_pair(e1, e2)?;
        Ok(self.is_best_buddy_pair(e1, e2))
    }

    /// Each edge is the other's most compatible edge.
    pub fn is_best_buddy_pair(&self, e1: EdgeRef, e2: EdgeRef) -> bool {
        self.most_compatible(e1) == e2 && self.most_compatible(e2) == e1
    }

    pub fn best_buddy_pairs(&self) -> Vec<RelativeRelation> {
        (0..4 * self.n)
            .filter_map(|u| {
                let e = EdgeRef::from_index(u);
                let m = self.most_compatible(e);
                (u < m.index() && self.most_compatible(m) == e).then(|| RelativeRelation::new_unchecked(e, m))
            })
            .collect()
    }
}

#[cfg(feature = "std")]
mod memo {
    use std::collections::HashMap;
    use std::sync::Mutex;

    const SHARDS: usize = 64;

    /// Bounded, sharded memo of computed values. A full shard is cleared
    /// before inserting, so results never depend on what is cached.
    pub(super) struct MemoCache {
        shards: Vec<Mutex<HashMap<u64, f64>>>,
        per_shard: usize,
    }

    impl MemoCache {
        pub(super) fn new(capacity: usize) -> MemoCache {
            MemoCache {
                shards: (0..SHARDS).map(|_| Mutex::new(HashMap::new())).collect(),
                per_shard: (capacity / SHARDS).max(1),
            }
        }

        pub(super) fn get_or_insert(&self, key: u64, compute: impl FnOnce() -> f64) -> f64 {
            let shard = &self.shards[(key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 58) as usize];
            if let Some(v) = shard.lock().unwrap().get(&key) {
                return *v;
            }
            let v = compute();
            let mut map = shard.lock().unwrap();
            if map.len() >= self.per_shard {
                map.clear();
            }
            map.insert(key, v);
            v
        }
    }
}

#[cfg(not(feature = "std"))]
mod memo {
    /// Without `std` there is no lock to share a cache behind; values are recomputed.
    pub(super) struct MemoCache;

    impl MemoCache {
        pub(super) fn new(_capacity: usize) -> MemoCache {
            MemoCache
        }

        pub(super) fn get_or_insert(&self, _key: u64, compute: impl FnOnce() -> f64) -> f64 {
            compute()
        }
    }
}
