//! Exact search and counting for independent transversals, their
//! `s`-blowups, `K_{s,s}` in bipartite graphs, and complete `r`-partite
//! `r`-uniform sub-hypergraphs of the transversal hypergraph.

use std::collections::HashSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::MultipartiteGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("expected a bipartite graph (2 parts), got {0} parts")]
    NotBipartite(usize),
    #[error("s must be positive")]
    ZeroS,
    #[error("q must satisfy 1 <= q <= k = {k}, got {q}")]
    BadSelection { q: usize, k: usize },
    #[error("sets live in different universes")]
    MixedUniverse,
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// One vertex per part, pairwise non-adjacent. `picks[p] ∈ V_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Transversal {
    pub picks: Vec<usize>,
}

impl Transversal {
    pub fn is_valid(&self, g: &MultipartiteGraph) -> bool {
        self.picks.len() == g.r()
            && self
                .picks
                .iter()
                .enumerate()
                .all(|(p, &v)| v < g.vertex_count() && g.part_of(v) == p)
            && self
                .picks
                .iter()
                .enumerate()
                .all(|(i, &u)| self.picks[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
    }
}

/// `s` vertices per part whose union is independent. `picks[p] ⊆ V_p`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupTransversal {
    pub picks: Vec<Vec<usize>>,
}

impl BlowupTransversal {
    pub fn is_valid(&self, g: &MultipartiteGraph, s: usize) -> bool {
        if self.picks.len() != g.r() {
            return false;
        }
        let mut union = VertexSet::new(g.vertex_count());
        for (p, set) in self.picks.iter().enumerate() {
            if set.len() != s {
                return false;
            }
            for &v in set {
                if v >= g.vertex_count() || g.part_of(v) != p || !union.insert(v) {
                    return false;
                }
            }
        }
        g.is_independent(&union)
    }
}

/// Part order used by every search: ascending size, then ascending degree
/// sum, then index.
pub fn search_order(g: &MultipartiteGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.r()).collect();
    order.sort_by_key(|&p| {
        let deg: usize = g.part(p).iter().map(|&v| g.neighbors(v).len()).sum();
        (g.part(p).len(), deg, p)
    });
    order
}

/// Precomputed state shared by the backtracking engines.
struct Engine<'g> {
    g: &'g MultipartiteGraph,
    order: Vec<usize>,
    masks: Vec<VertexSet>,
    nonadj: Vec<VertexSet>,
}

impl<'g> Engine<'g> {
    fn new(g: &'g MultipartiteGraph) -> Self {
        let order = search_order(g);
        let masks = order.iter().map(|&p| g.part_mask(p).clone()).collect();
        let nonadj = (0..g.vertex_count()).map(|v| g.neighbors(v).complement()).collect();
        Self {
            g,
            order,
            masks,
            nonadj,
        }
    }

    fn universe(&self) -> VertexSet {
        VertexSet::full(self.g.vertex_count())
    }

    /// Every part at or after `depth` still has at least `need` candidates.
    #[inline]
    fn feasible(&self, depth: usize, cand: &VertexSet, need: usize) -> bool {
        self.masks[depth..].iter().all(|m| m.intersection_len(cand) >= need)
    }

    fn find(&self, depth: usize, cand: &VertexSet, picks: &mut Vec<usize>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let options = self.masks[depth].intersection(cand);
        for v in &options {
            let next = cand.intersection(&self.nonadj[v]);
            if !self.feasible(depth + 1, &next, 1) {
                continue;
            }
            picks.push(v);
            if self.find(depth + 1, &next, picks) {
                return true;
            }
            picks.pop();
        }
        false
    }

    fn count(&self, depth: usize, cand: &VertexSet) -> u128 {
        let last = self.order.len() - 1;
        if depth == last {
            return self.masks[depth].intersection_len(cand) as u128;
        }
        let options = self.masks[depth].intersection(cand);
        let mut total = 0u128;
        for v in &options {
            total += self.count_under(depth, cand, v);
        }
        total
    }

    /// Transversals extending a pick of `v` at `depth`.
    fn count_under(&self, depth: usize, cand: &VertexSet, v: usize) -> u128 {
        let next = cand.intersection(&self.nonadj[v]);
        if !self.feasible(depth + 1, &next, 1) {
            return 0;
        }
        self.count(depth + 1, &next)
    }

    fn visit<F>(&self, depth: usize, cand: &VertexSet, picks: &mut Vec<usize>, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Transversal) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return f(&self.to_transversal(picks));
        }
        let options = self.masks[depth].intersection(cand);
        for v in &options {
            let next = cand.intersection(&self.nonadj[v]);
            if !self.feasible(depth + 1, &next, 1) {
                continue;
            }
            picks.push(v);
            self.visit(depth + 1, &next, picks, f)?;
            picks.pop();
        }
        ControlFlow::Continue(())
    }

    fn to_transversal(&self, picks: &[usize]) -> Transversal {
        let mut out = vec![0; self.order.len()];
        for (depth, &p) in self.order.iter().enumerate() {
            out[p] = picks[depth];
        }
        Transversal { picks: out }
    }

    fn blowup(&self, depth: usize, s: usize, cand: &VertexSet, picks: &mut Vec<Vec<usize>>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        self.blowup_part(depth, s, cand, None, picks)
    }

    /// Extends `picks[depth]` with vertices above `after`, in increasing order.
    fn blowup_part(
        &self,
        depth: usize,
        s: usize,
        cand: &VertexSet,
        after: Option<usize>,
        picks: &mut Vec<Vec<usize>>,
    ) -> bool {
        let have = picks[depth].len();
        if have == s {
            return self.blowup(depth + 1, s, cand, picks);
        }
        let options: Vec<usize> = match after {
            None => self.masks[depth].intersection(cand).to_vec(),
            Some(a) => self.masks[depth].intersection(cand).iter_after(a).collect(),
        };
        let missing = s - have;
        if options.len() < missing {
            return false;
        }
        for (i, &v) in options.iter().enumerate() {
            if options.len() - i < missing {
                break;
            }
            let next = cand.intersection(&self.nonadj[v]);
            if !self.feasible(depth + 1, &next, s) {
                continue;
            }
            picks[depth].push(v);
            if self.blowup_part(depth, s, &next, Some(v), picks) {
                return true;
            }
            picks[depth].pop();
        }
        false
    }
}

/// Some independent transversal, or `None`. Returns `None` when a part is
/// empty; use [`MultipartiteGraph::empty_part`] to tell the cases apart.
pub fn find_it(g: &MultipartiteGraph) -> Option<Transversal> {
    if g.empty_part().is_some() {
        return None;
    }
    let engine = Engine::new(g);
    let cand = engine.universe();
    if !engine.feasible(0, &cand, 1) {
        return None;
    }
    let mut picks = Vec::with_capacity(g.r());
    engine.find(0, &cand, &mut picks).then(|| engine.to_transversal(&picks))
}

/// Exact number of independent transversals (pruned backtracking).
pub fn count_its(g: &MultipartiteGraph) -> u128 {
    let engine = Engine::new(g);
    let cand = engine.universe();
    if !engine.feasible(0, &cand, 1) {
        return 0;
    }
    engine.count(0, &cand)
}

/// As [`count_its`], splitting the first part's choices across `workers`
/// threads. The total is independent of the worker count.
pub fn count_its_parallel(g: &MultipartiteGraph, workers: usize) -> Result<u128, SolverError> {
    if workers <= 1 || g.r() < 2 {
        return Ok(count_its(g));
    }
    let engine = Engine::new(g);
    let cand = engine.universe();
    if !engine.feasible(0, &cand, 1) {
        return Ok(0);
    }
    let first: Vec<usize> = engine.masks[0].to_vec();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SolverError::Pool(e.to_string()))?;
    let partials: Vec<u128> = pool.install(|| first.par_iter().map(|&v| engine.count_under(0, &cand, v)).collect());
    Ok(partials.into_iter().sum())
}

/// Reference count: checks every tuple of `Π |V_i|` against the edge set.
pub fn count_its_naive(g: &MultipartiteGraph) -> u128 {
    let parts = g.parts();
    if parts.iter().any(Vec::is_empty) {
        return 0;
    }
    let r = parts.len();
    let mut idx = vec![0usize; r];
    let mut total = 0u128;
    loop {
        let tuple: Vec<usize> = idx.iter().enumerate().map(|(p, &i)| parts[p][i]).collect();
        let independent = (0..r).all(|i| (i + 1..r).all(|j| !g.has_edge(tuple[i], tuple[j])));
        if independent {
            total += 1;
        }
        // odometer
        let mut p = 0;
        loop {
            if p == r {
                return total;
            }
            idx[p] += 1;
            if idx[p] < parts[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Calls `f` on independent transversals until it breaks. Returns `true`
/// if enumeration ran to completion.
pub fn for_each_it<F>(g: &MultipartiteGraph, mut f: F) -> bool
where
    F: FnMut(&Transversal) -> ControlFlow<()>,
{
    let engine = Engine::new(g);
    let cand = engine.universe();
    if !engine.feasible(0, &cand, 1) {
        return true;
    }
    let mut picks = Vec::with_capacity(g.r());
    engine.visit(0, &cand, &mut picks, &mut f).is_continue()
}

/// Some `s`-blowup of an independent transversal, or `None`.
pub fn find_blowup_it(g: &MultipartiteGraph, s: usize) -> Result<Option<BlowupTransversal>, SolverError> {
    if s == 0 {
        return Err(SolverError::ZeroS);
    }
    let engine = Engine::new(g);
    let cand = engine.universe();
    if !engine.feasible(0, &cand, s) {
        return Ok(None);
    }
    let mut picks = vec![Vec::with_capacity(s); g.r()];
    if !engine.blowup(0, s, &cand, &mut picks) {
        return Ok(None);
    }
    let mut out = vec![Vec::new(); g.r()];
    for (depth, &p) in engine.order.iter().enumerate() {
        out[p] = std::mem::take(&mut picks[depth]);
    }
    Ok(Some(BlowupTransversal { picks: out }))
}

/// A complete bipartite `K_{s,s}`: `s` vertices from part 0 and `s` from
/// part 1 of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biclique {
    pub left: VertexSet,
    pub right: VertexSet,
}

/// Searches `B` for `K_{s,s}` by enumerating `s`-subsets of the smaller side
/// and tracking their common neighbourhood on the other side.
pub fn find_kss(b: &MultipartiteGraph, s: usize) -> Result<Option<Biclique>, SolverError> {
    if b.r() != 2 {
        return Err(SolverError::NotBipartite(b.r()));
    }
    if s == 0 {
        return Err(SolverError::ZeroS);
    }
    let (small, large) = if b.part(0).len() <= b.part(1).len() {
        (0, 1)
    } else {
        (1, 0)
    };
    let side: Vec<usize> = b.part(small).to_vec();
    let mut chosen = Vec::with_capacity(s);

    fn extend(
        b: &MultipartiteGraph,
        side: &[usize],
        from: usize,
        s: usize,
        common: &VertexSet,
        chosen: &mut Vec<usize>,
    ) -> Option<VertexSet> {
        if chosen.len() == s {
            return Some(common.clone());
        }
        for i in from..side.len() {
            if side.len() - i < s - chosen.len() {
                break;
            }
            let u = side[i];
            let next = common.intersection(b.neighbors(u));
            if next.len() < s {
                continue;
            }
            chosen.push(u);
            if let Some(found) = extend(b, side, i + 1, s, &next, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let common = b.part_mask(large).clone();
    let Some(common) = extend(b, &side, 0, s, &common, &mut chosen) else {
        return Ok(None);
    };
    let n = b.vertex_count();
    let small_set = VertexSet::from_iter_in(n, chosen);
    let large_set = VertexSet::from_iter_in(n, common.iter().take(s));
    Ok(Some(if small == 0 {
        Biclique {
            left: small_set,
            right: large_set,
        }
    } else {
        Biclique {
            left: large_set,
            right: small_set,
        }
    }))
}

/// Outcome of [`select_large_intersection`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    /// Indices into the input, ascending.
    pub indices: Vec<usize>,
    pub intersection: usize,
    /// Average density `(1/k) Σ |A_i| / n`.
    pub alpha: f64,
    /// `(α/2)^q · n`.
    pub guaranteed_size: f64,
    /// Whether `α ≥ 2q/k`, the condition under which the guarantee applies.
    pub guaranteed: bool,
}

/// Picks `q` of the `k` sets maximizing their common intersection, by
/// exhaustive search over all `q`-subsets (first maximum in lexicographic
/// order). When the average density `α` satisfies `α ≥ 2q/k`, the result
/// is at least `(α/2)^q · n`.
pub fn select_large_intersection(sets: &[VertexSet], q: usize) -> Result<Selection, SolverError> {
    let k = sets.len();
    if q == 0 || q > k {
        return Err(SolverError::BadSelection { q, k });
    }
    let n = sets[0].universe();
    if sets.iter().any(|s| s.universe() != n) {
        return Err(SolverError::MixedUniverse);
    }
    let alpha = if n == 0 {
        0.0
    } else {
        sets.iter().map(VertexSet::len).sum::<usize>() as f64 / (k as f64 * n as f64)
    };
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..q).collect();
    loop {
        let mut acc = sets[idx[0]].clone();
        for &i in &idx[1..] {
            acc.intersect_with(&sets[i]);
        }
        let size = acc.len();
        if best.as_ref().is_none_or(|(b, _)| size > *b) {
            best = Some((size, idx.clone()));
        }
        // next combination in lexicographic order
        let Some(pos) = (0..q).rev().find(|&p| idx[p] < k - q + p) else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..q {
            idx[p] = idx[p - 1] + 1;
        }
    }
    let (intersection, indices) = best.expect("at least one q-subset");
    Ok(Selection {
        indices,
        intersection,
        alpha,
        guaranteed_size: (alpha / 2.0).powi(q as i32) * n as f64,
        guaranteed: alpha >= 2.0 * q as f64 / k as f64,
    })
}

/// Outcome of [`find_krrs_from_its`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KrrsOutcome {
    /// Every one of the `s^r` transversal tuples of the witness is a collected IT.
    Found {
        witness: BlowupTransversal,
        collected: usize,
    },
    /// All ITs were collected and none of the required shape exists.
    NoneExists { collected: usize },
    /// The graph has more than `cap` ITs and none was found among the first `cap`.
    CapExceeded { cap: usize },
}

pub const DEFAULT_IT_CAP: usize = 1_000_000;

/// Collects up to `cap` independent transversals as hyperedges of an
/// `r`-uniform hypergraph and looks for a copy of `K_r^r(s)` whose classes
/// respect the parts.
pub fn find_krrs_from_its(g: &MultipartiteGraph, s: usize, cap: usize) -> Result<KrrsOutcome, SolverError> {
    if s == 0 {
        return Err(SolverError::ZeroS);
    }
    let r = g.r();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut overflow = false;
    for_each_it(g, |t| {
        if edges.len() == cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        edges.push(t.picks.clone());
        ControlFlow::Continue(())
    });
    let collected = edges.len();

    // Every prefix (in part-index order) of a collected hyperedge.
    let mut prefixes: HashSet<Vec<usize>> = HashSet::new();
    for e in &edges {
        for len in 1..=r {
            prefixes.insert(e[..len].to_vec());
        }
    }

    fn classes(g: &MultipartiteGraph, prefixes: &HashSet<Vec<usize>>, s: usize, chosen: &mut Vec<Vec<usize>>) -> bool {
        let p = chosen.len();
        if p == g.r() {
            return true;
        }
        // tuples from the classes chosen so far
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for class in chosen.iter() {
            tuples = tuples
                .iter()
                .flat_map(|t| {
                    class.iter().map(move |&v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        let options: Vec<usize> = g
            .part(p)
            .iter()
            .copied()
            .filter(|&v| {
                tuples.iter().all(|t| {
                    let mut t = t.clone();
                    t.push(v);
                    prefixes.contains(&t)
                })
            })
            .collect();
        if options.len() < s {
            return false;
        }
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            chosen.push(idx.iter().map(|&i| options[i]).collect());
            if classes(g, prefixes, s, chosen) {
                return true;
            }
            chosen.pop();
            let m = options.len();
            let Some(pos) = (0..s).rev().find(|&q| idx[q] < m - s + q) else {
                return false;
            };
            idx[pos] += 1;
            for q in pos + 1..s {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }

    let mut chosen = Vec::with_capacity(r);
    if collected > 0 && classes(g, &prefixes, s, &mut chosen) {
        return Ok(KrrsOutcome::Found {
            witness: BlowupTransversal { picks: chosen },
            collected,
        });
    }
    Ok(if overflow {
        KrrsOutcome::CapExceeded { cap }
    } else {
        KrrsOutcome::NoneExists { collected }
    })
}
