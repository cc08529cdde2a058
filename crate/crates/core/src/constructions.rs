//! Extremal graphs with no (or few) independent transversals, and the
//! bipartite graphs they consume.
//!
//! Block vertex ids are allocated in the order `A_1, B_1, A_2, B_2, ...`, so
//! each block is a contiguous id range. Wherever a layout needs a sub-block
//! (`B'_{i+1} ⊆ B_{i+1}` or `A'_{i-1} ⊆ A_{i-1}`) it takes the lowest ids.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{Edge, GraphError, MultipartiteGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("r must be even, got {0}")]
    OddR(usize),
    #[error("r must be at least {min}, got {r}")]
    SmallR { r: usize, min: usize },
    #[error("n must be positive")]
    ZeroN,
    #[error("r - 1 = {divisor} does not divide n = {n}")]
    Divisibility { n: usize, divisor: usize },
    #[error("(r - 2) t = {0} is odd")]
    Parity(usize),
    #[error("block {block} would have size {size}; every block needs at least one vertex")]
    NonPositiveBlock { block: String, size: i64 },
    #[error("part V_{part} cannot be laid out: {reason}")]
    Layout { part: usize, reason: String },
    #[error("H must be bipartite with both parts of size {expected}, got {actual:?}")]
    HShape { expected: usize, actual: Vec<usize> },
    #[error("H has an edge inside one of its parts")]
    HNotBipartite,
    #[error("degree {d} exceeds side size {n}")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("cycle needs N >= 3, got {0}")]
    ShortCycle(usize),
    #[error("could not complete a {d}-regular bipartite graph on {n}+{n} vertices with seed {seed}")]
    RetriesExhausted { n: usize, d: usize, seed: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The `r - 1` vertex-disjoint complete-bipartite skeleton `(A_i, B_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSystem {
    pub pairs: Vec<(VertexSet, VertexSet)>,
}

impl PairSystem {
    pub fn new(pairs: Vec<(VertexSet, VertexSet)>) -> Self {
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Nonempty sides, pairwise disjoint.
    pub fn is_well_formed(&self) -> bool {
        let Some(universe) = self.pairs.first().map(|(a, _)| a.universe()) else {
            return true;
        };
        let mut seen = VertexSet::new(universe);
        for (a, b) in &self.pairs {
            for side in [a, b] {
                if side.is_empty() || side.intersects(&seen) {
                    return false;
                }
                seen.union_with(side);
            }
        }
        true
    }

    /// Edge set of `⋃ K(A_i, B_i)`, sorted with `u < v`.
    pub fn union_edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .pairs
            .iter()
            .flat_map(|(a, b)| a.iter().flat_map(move |u| b.iter().map(move |v| (u.min(v), u.max(v)))))
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Metadata describing a construction instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionMeta {
    pub construction: &'static str,
    pub r: usize,
    pub n: usize,
    pub t: usize,
    /// `|A_i| = |B_i|` for `i = 1..r-1`.
    pub block_sizes: Vec<usize>,
    pub predicted_max_degree: usize,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: MultipartiteGraph,
    pub pairs: PairSystem,
    pub meta: ConstructionMeta,
}

/// `⌈rn / (2r - 2)⌉`.
pub fn ceil_block(r: usize, n: usize) -> usize {
    (r * n).div_ceil(2 * r - 2)
}

/// Allocates the blocks and partitions them into parts `V_1..V_r`.
///
/// Returns `(parts, blocks)` where `blocks[i] = (A_{i+1}, B_{i+1})` as id lists.
#[allow(clippy::type_complexity)]
#[allow(clippy::needless_range_loop)]
fn lay_out(
    r: usize,
    n: usize,
    sizes: &[usize],
) -> Result<(Vec<Vec<usize>>, Vec<(Vec<usize>, Vec<usize>)>), ConstructionError> {
    debug_assert_eq!(sizes.len(), r - 1);
    let mut next = 0usize;
    let mut blocks = Vec::with_capacity(r - 1);
    for &sz in sizes {
        let a: Vec<usize> = (next..next + sz).collect();
        let b: Vec<usize> = (next + sz..next + 2 * sz).collect();
        next += 2 * sz;
        blocks.push((a, b));
    }
    let half = r / 2;
    // 1-based block accessors
    let a = |i: usize| &blocks[i - 1].0;
    let b = |i: usize| &blocks[i - 1].1;
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); r];

    // b_split[i] / a_split[i]: how many leading ids of B_i / A_i go to B'_i / A'_i
    let mut b_split = vec![0usize; r];
    let mut a_split = vec![0usize; r];
    for i in 1..half {
        let take = n
            .checked_sub(a(i).len())
            .filter(|&k| k <= b(i + 1).len())
            .ok_or_else(|| ConstructionError::Layout {
                part: i,
                reason: format!(
                    "needs {} vertices of B_{} (|A_{}| = {}, |B_{}| = {})",
                    n as i64 - a(i).len() as i64,
                    i + 1,
                    i,
                    a(i).len(),
                    i + 1,
                    b(i + 1).len()
                ),
            })?;
        b_split[i + 1] = take;
        parts[i - 1].extend(a(i));
        parts[i - 1].extend(&b(i + 1)[..take]);
    }
    parts[half - 1].extend(b(1));
    for i in 2..=half {
        parts[half - 1].extend(&b(i)[b_split[i]..]);
    }
    for i in half + 1..r {
        let take = n
            .checked_sub(b(i).len())
            .filter(|&k| k <= a(i - 1).len())
            .ok_or_else(|| ConstructionError::Layout {
                part: i,
                reason: format!(
                    "needs {} vertices of A_{} (|B_{}| = {}, |A_{}| = {})",
                    n as i64 - b(i).len() as i64,
                    i - 1,
                    i,
                    b(i).len(),
                    i - 1,
                    a(i - 1).len()
                ),
            })?;
        a_split[i - 1] = take;
        parts[i - 1].extend(b(i));
        parts[i - 1].extend(&a(i - 1)[..take]);
    }
    parts[r - 1].extend(a(r - 1));
    for i in half..r - 1 {
        parts[r - 1].extend(&a(i)[a_split[i]..]);
    }
    for (p, members) in parts.iter_mut().enumerate() {
        members.sort_unstable();
        if members.len() != n {
            return Err(ConstructionError::Layout {
                part: p + 1,
                reason: format!("has {} vertices instead of {n}", members.len()),
            });
        }
    }
    Ok((parts, blocks))
}

fn block_labels(blocks: &[(Vec<usize>, Vec<usize>)]) -> BTreeMap<usize, String> {
    let mut labels = BTreeMap::new();
    for (i, (a, b)) in blocks.iter().enumerate() {
        for &v in a {
            labels.insert(v, format!("A{}", i + 1));
        }
        for &v in b {
            labels.insert(v, format!("B{}", i + 1));
        }
    }
    labels
}

fn pair_system(universe: usize, blocks: &[(Vec<usize>, Vec<usize>)]) -> PairSystem {
    PairSystem::new(
        blocks
            .iter()
            .map(|(a, b)| {
                (
                    VertexSet::from_iter_in(universe, a.iter().copied()),
                    VertexSet::from_iter_in(universe, b.iter().copied()),
                )
            })
            .collect(),
    )
}

fn complete_between(a: &[usize], b: &[usize], out: &mut Vec<Edge>) {
    for &u in a {
        for &v in b {
            out.push((u, v));
        }
    }
}

/// Union of `r - 1` balanced complete bipartite graphs on blocks of size
/// `rn / (2r - 2)`, partitioned into `r` parts of size `n`. It is
/// `rn/(2r-2)`-regular and has no independent transversal.
pub fn build_g1(r: usize, n: usize) -> Result<Construction, ConstructionError> {
    if r % 2 == 1 {
        return Err(ConstructionError::OddR(r));
    }
    if r < 2 {
        return Err(ConstructionError::SmallR { r, min: 2 });
    }
    if n == 0 {
        return Err(ConstructionError::ZeroN);
    }
    if !n.is_multiple_of(r - 1) {
        return Err(ConstructionError::Divisibility { n, divisor: r - 1 });
    }
    let size = r * n / (2 * r - 2);
    let sizes = vec![size; r - 1];
    let (parts, blocks) = lay_out(r, n, &sizes)?;
    let mut edges = Vec::new();
    for (a, b) in &blocks {
        complete_between(a, b, &mut edges);
    }
    let universe = r * n;
    let graph = MultipartiteGraph::new(parts, &edges)?.with_labels(block_labels(&blocks))?;
    Ok(Construction {
        pairs: pair_system(universe, &blocks),
        graph,
        meta: ConstructionMeta {
            construction: "g1",
            r,
            n,
            t: 0,
            block_sizes: sizes,
            predicted_max_degree: size,
        },
    })
}

/// Block sizes for the degree-`(D - t)` construction, `D = ⌈rn/(2r-2)⌉`.
pub fn g2_block_sizes(r: usize, n: usize, t: usize) -> Result<Vec<usize>, ConstructionError> {
    if r % 2 == 1 {
        return Err(ConstructionError::OddR(r));
    }
    if r < 2 {
        return Err(ConstructionError::SmallR { r, min: 2 });
    }
    if n == 0 {
        return Err(ConstructionError::ZeroN);
    }
    if ((r - 2) * t) % 2 == 1 {
        return Err(ConstructionError::Parity((r - 2) * t));
    }
    let d = ceil_block(r, n) as i64;
    let (ri, ni, ti) = (r as i64, n as i64, t as i64);
    if r == 2 {
        return Ok(vec![n]);
    }
    let end = d + (ri - 2) * ti / 2;
    let middle = d - ti;
    let center = ri * ni / 2 - (ri - 2) * d - 2 * ti;
    let half = r / 2;
    let mut sizes = Vec::with_capacity(r - 1);
    for i in 1..r {
        let (sz, name) = if i == 1 || i == r - 1 {
            (end, "end")
        } else if i == half {
            (center, "center")
        } else {
            (middle, "middle")
        };
        if sz < 1 {
            return Err(ConstructionError::NonPositiveBlock {
                block: format!("A_{i}/B_{i} ({name})"),
                size: sz,
            });
        }
        sizes.push(sz as usize);
    }
    if middle < 1 {
        return Err(ConstructionError::NonPositiveBlock {
            block: "D - t".into(),
            size: middle,
        });
    }
    Ok(sizes)
}

fn check_h(h: &MultipartiteGraph, side: usize) -> Result<(), ConstructionError> {
    let sizes: Vec<usize> = h.parts().iter().map(Vec::len).collect();
    if sizes != [side, side] {
        return Err(ConstructionError::HShape {
            expected: side,
            actual: sizes,
        });
    }
    if !h.is_multipartite() {
        return Err(ConstructionError::HNotBipartite);
    }
    Ok(())
}

/// Edges of `K(A, B) - H`, mapping H's k-th left vertex to `a[k]` and its
/// k-th right vertex to `b[k]`.
fn bipartite_complement_onto(h: &MultipartiteGraph, a: &[usize], b: &[usize], out: &mut Vec<Edge>) {
    let (left, right) = (h.part(0), h.part(1));
    for (i, &hu) in left.iter().enumerate() {
        for (j, &hv) in right.iter().enumerate() {
            if !h.has_edge(hu, hv) {
                out.push((a[i], b[j]));
            }
        }
    }
}

/// Degree-`(D - t)` construction with the bipartite complement of `H` on
/// both end blocks.
pub fn build_g2(r: usize, n: usize, t: usize, h: &MultipartiteGraph) -> Result<Construction, ConstructionError> {
    build_g2_with(r, n, t, h, h)
}

/// As [`build_g2`], with independent graphs for the first and last blocks.
pub fn build_g2_with(
    r: usize,
    n: usize,
    t: usize,
    h_first: &MultipartiteGraph,
    h_last: &MultipartiteGraph,
) -> Result<Construction, ConstructionError> {
    let sizes = g2_block_sizes(r, n, t)?;
    let d = ceil_block(r, n);
    let end = sizes[0];
    check_h(h_first, end)?;
    check_h(h_last, end)?;

    let (parts, blocks) = lay_out(r, n, &sizes)?;
    let mut edges = Vec::new();
    bipartite_complement_onto(h_first, &blocks[0].0, &blocks[0].1, &mut edges);
    if r > 2 {
        for (a, b) in &blocks[1..r - 2] {
            complete_between(a, b, &mut edges);
        }
        let (a, b) = &blocks[r - 2];
        bipartite_complement_onto(h_last, a, b, &mut edges);
    }
    let graph = MultipartiteGraph::new(parts, &edges)?.with_labels(block_labels(&blocks))?;
    Ok(Construction {
        pairs: pair_system(r * n, &blocks),
        graph,
        meta: ConstructionMeta {
            construction: "g2",
            r,
            n,
            t,
            block_sizes: sizes,
            predicted_max_degree: if r == 2 { n.saturating_sub(t) } else { d - t },
        },
    })
}

fn bipartite_from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> MultipartiteGraph {
    let edges: Vec<Edge> = pairs.into_iter().map(|(i, j)| (i, n + j)).collect();
    MultipartiteGraph::new(vec![(0..n).collect(), (n..2 * n).collect()], &edges).expect("bipartite edges are in range")
}

const MATCHING_RETRIES: usize = 64;

/// Tries to extend `matching` (left -> right) to a perfect matching inside
/// `allowed` using augmenting paths in a shuffled order.
fn augment_perfect_matching(allowed: &[Vec<bool>], rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cols: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let mut c: Vec<usize> = (0..n).filter(|&v| allowed[u][v]).collect();
            c.shuffle(rng);
            c
        })
        .collect();

    fn try_augment(u: usize, cols: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for &v in &cols[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if match_right[v].is_none_or(|w| try_augment(w, cols, seen, match_right)) {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    for &u in &order {
        let mut seen = vec![false; n];
        if !try_augment(u, &cols, &mut seen, &mut match_right) {
            return None;
        }
    }
    let mut left = vec![0; n];
    for (v, u) in match_right.into_iter().enumerate() {
        left[u?] = v;
    }
    Some(left)
}

/// Seeded `d`-regular bipartite graph on `N + N` vertices (left ids
/// `0..N`, right ids `N..2N`), built as a union of `d` perfect matchings.
///
/// Each matching is first sampled as a uniform permutation and resampled on
/// collision; after `MATCHING_RETRIES` collisions it is completed by
/// augmenting paths in the residual graph, which is regular and so always
/// has a perfect matching. For `d > N/2` the complement is generated instead.
pub fn random_regular_bipartite(n: usize, d: usize, seed: u64) -> Result<MultipartiteGraph, ConstructionError> {
    if d > n {
        return Err(ConstructionError::DegreeTooLarge { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flip = 2 * d > n;
    let k = if flip { n - d } else { d };
    let mut used = vec![vec![false; n]; n];
    for _ in 0..k {
        let mut placed = false;
        for _ in 0..MATCHING_RETRIES {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            if perm.iter().enumerate().all(|(u, &v)| !used[u][v]) {
                perm.iter().enumerate().for_each(|(u, &v)| used[u][v] = true);
                placed = true;
                break;
            }
        }
        if !placed {
            let allowed: Vec<Vec<bool>> = used.iter().map(|row| row.iter().map(|&x| !x).collect()).collect();
            let perm = augment_perfect_matching(&allowed, &mut rng).ok_or(ConstructionError::RetriesExhausted {
                n,
                d,
                seed,
            })?;
            perm.iter().enumerate().for_each(|(u, &v)| used[u][v] = true);
        }
    }
    let pairs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)));
    let used = &used;
    Ok(bipartite_from_pairs(n, pairs.filter(|&(u, v)| used[u][v] != flip)))
}

/// The cycle `C_{2N}` as a balanced bipartite graph: left `i` is joined to
/// right `i` and right `i + 1 (mod N)`. It is 2-regular with girth `2N`,
/// hence `K_{2,2}`-free for `N >= 3`.
pub fn even_cycle_bipartite(n: usize) -> Result<MultipartiteGraph, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::ShortCycle(n));
    }
    Ok(bipartite_from_pairs(n, (0..n).flat_map(|i| [(i, i), (i, (i + 1) % n)])))
}

/// Uniformly random bipartite graph with each cross pair present with
/// probability `p`; used for fuzzing.
pub fn random_bipartite(n: usize, p: f64, seed: u64) -> MultipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    bipartite_from_pairs(n, pairs)
}

/// Random multipartite graph with the given part sizes and cross-edge
/// probability `p`.
pub fn random_multipartite(sizes: &[usize], p: f64, seed: u64) -> MultipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::with_capacity(sizes.len());
    let mut next = 0;
    for &s in sizes {
        parts.push((next..next + s).collect::<Vec<_>>());
        next += s;
    }
    let total = next;
    let part_of: Vec<usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(p, m)| m.iter().map(move |_| p))
        .collect();
    let mut edges = Vec::new();
    for u in 0..total {
        for v in u + 1..total {
            if part_of[u] != part_of[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    MultipartiteGraph::new(parts, &edges).expect("generated graph is well-formed")
}
