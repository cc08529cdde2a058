//! Induced matching configurations.
//!
//! An IMC is a set of `2(r - 1)` vertices inducing a perfect matching whose
//! contraction (one node per part) is a spanning tree on the `r` parts.
//! This module verifies them, extracts partial independent transversals,
//! computes attachment sets, swaps representatives, searches for an IMC
//! through a given edge, and recovers complete-bipartite decompositions.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::constructions::PairSystem;
use crate::graph::{Edge, MultipartiteGraph};

/// The condition an IMC candidate fails.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ImcViolation {
    #[error("expected {expected} pairs (r - 1), got {actual}")]
    PairCount { expected: usize, actual: usize },
    #[error("vertex {vertex} is used more than once")]
    RepeatedVertex { vertex: usize },
    #[error("pair ({v}, {w}) is not an edge")]
    MissingMatchingEdge { v: usize, w: usize },
    #[error("extra induced edge ({u}, {v}) outside the matching")]
    ExtraInducedEdge { u: usize, v: usize },
    #[error("pair ({v}, {w}) lies inside part {part} (loop in the contraction)")]
    LoopEdge { v: usize, w: usize, part: usize },
    #[error("parts {a} and {b} are joined by more than one pair")]
    RepeatedPartPair { a: usize, b: usize },
    #[error("contraction is disconnected: part {part} is not reached from part 0")]
    DisconnectedContraction { part: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImcError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("not an IMC: {0}")]
    Invalid(#[from] ImcViolation),
    #[error("part index {q} out of range for r = {r}")]
    BadPart { q: usize, r: usize },
    #[error("expected {expected} candidate pairs, got {actual}")]
    CandidateCount { expected: usize, actual: usize },
    #[error("candidate pair {index} ({v}, {w}) is not in A_{a} x A_{b}")]
    NotInAttachmentSet {
        index: usize,
        v: usize,
        w: usize,
        a: usize,
        b: usize,
    },
    #[error("extracted picks are not independent: edge ({0}, {1})")]
    DependentPit(usize, usize),
}

/// Verified IMC. Pairs are listed in order of their smaller endpoint; each
/// pair keeps the orientation it was given.
#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
pub struct Imc {
    pairs: Vec<(usize, usize)>,
}

impl PartialEq for Imc {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Imc {
    pub fn new(g: &MultipartiteGraph, pairs: &[(usize, usize)]) -> Result<Self, ImcError> {
        verify_imc(g, pairs)?;
        let mut pairs = pairs.to_vec();
        pairs.sort_by_key(|&(v, w)| (v.min(w), v.max(w)));
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Pairs oriented `(min, max)` and sorted.
    pub fn canonical(&self) -> Vec<(usize, usize)> {
        let mut c: Vec<_> = self.pairs.iter().map(|&(v, w)| (v.min(w), v.max(w))).collect();
        c.sort_unstable();
        c
    }

    pub fn vertices(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(universe, self.pairs.iter().flat_map(|&(v, w)| [v, w]))
    }
}

/// Pairs document: `{"pairs": [[v, w], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsDocument {
    pub pairs: Vec<[usize; 2]>,
}

impl PairsDocument {
    pub fn to_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&[v, w]| (v, w)).collect()
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        Self {
            pairs: pairs.iter().map(|&(v, w)| [v, w]).collect(),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Checks the induced-perfect-matching and tree-contraction conditions.
pub fn verify_imc(g: &MultipartiteGraph, pairs: &[(usize, usize)]) -> Result<(), ImcError> {
    let n = g.vertex_count();
    if let Some(&v) = pairs.iter().flat_map(|(v, w)| [v, w]).find(|&&v| v >= n) {
        return Err(ImcError::UnknownVertex(v));
    }
    let r = g.r();
    if pairs.len() + 1 != r {
        return Err(ImcViolation::PairCount {
            expected: r.saturating_sub(1),
            actual: pairs.len(),
        }
        .into());
    }
    let mut members = VertexSet::new(n);
    for &(v, w) in pairs {
        for x in [v, w] {
            if !members.insert(x) {
                return Err(ImcViolation::RepeatedVertex { vertex: x }.into());
            }
        }
    }
    for &(v, w) in pairs {
        if !g.has_edge(v, w) {
            return Err(ImcViolation::MissingMatchingEdge { v, w }.into());
        }
    }
    // every member is adjacent to exactly its partner inside the set
    let partner: BTreeMap<usize, usize> = pairs.iter().flat_map(|&(v, w)| [(v, w), (w, v)]).collect();
    for (&x, &mate) in &partner {
        if let Some(y) = g.neighbors(x).intersection(&members).iter().find(|&y| y != mate) {
            return Err(ImcViolation::ExtraInducedEdge {
                u: x.min(y),
                v: x.max(y),
            }
            .into());
        }
    }
    let mut seen_pairs = BTreeMap::new();
    for &(v, w) in pairs {
        let (a, b) = (g.part_of(v), g.part_of(w));
        if a == b {
            return Err(ImcViolation::LoopEdge { v, w, part: a }.into());
        }
        if seen_pairs.insert((a.min(b), a.max(b)), ()).is_some() {
            return Err(ImcViolation::RepeatedPartPair {
                a: a.min(b),
                b: a.max(b),
            }
            .into());
        }
    }
    let mut uf = UnionFind::new(r);
    for &(v, w) in pairs {
        uf.union(g.part_of(v), g.part_of(w));
    }
    if let Some(part) = (0..r).find(|&p| uf.find(p) != uf.find(0)) {
        return Err(ImcViolation::DisconnectedContraction { part }.into());
    }
    Ok(())
}

/// An independent set with one vertex in every part except `avoided`.
/// `picks[j]` is an endpoint of the IMC's `j`-th pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pit {
    pub picks: Vec<usize>,
    pub avoided: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PitViolation {
    #[error("has {0} picks, expected r - 1")]
    Size(usize),
    #[error("vertex {0} lies in the avoided part")]
    InAvoidedPart(usize),
    #[error("part {0} is hit {1} times")]
    PartHits(usize, usize),
    #[error("edge ({0}, {1}) inside the picks")]
    NotIndependent(usize, usize),
}

impl Pit {
    pub fn check(&self, g: &MultipartiteGraph) -> Result<(), PitViolation> {
        let r = g.r();
        if self.picks.len() + 1 != r {
            return Err(PitViolation::Size(self.picks.len()));
        }
        let mut hits = vec![0usize; r];
        for &v in &self.picks {
            let p = g.part_of(v);
            if p == self.avoided {
                return Err(PitViolation::InAvoidedPart(v));
            }
            hits[p] += 1;
        }
        if let Some(p) = (0..r).find(|&p| p != self.avoided && hits[p] != 1) {
            return Err(PitViolation::PartHits(p, hits[p]));
        }
        for (i, &u) in self.picks.iter().enumerate() {
            if let Some(&v) = self.picks[i + 1..].iter().find(|&&v| g.has_edge(u, v)) {
                return Err(PitViolation::NotIndependent(u, v));
            }
        }
        Ok(())
    }
}

/// Roots the contraction tree at part `q` and takes, from every matching
/// edge, the endpoint lying in the child part. Each part other than `q`
/// is the child of exactly one tree edge, and any edge among the picks
/// would be an induced edge of the IMC outside the matching.
pub fn extract_pit(g: &MultipartiteGraph, imc: &Imc, q: usize) -> Result<Pit, ImcError> {
    let r = g.r();
    if q >= r {
        return Err(ImcError::BadPart { q, r });
    }
    verify_imc(g, imc.pairs())?;
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
    for (j, &(v, w)) in imc.pairs().iter().enumerate() {
        let (a, b) = (g.part_of(v), g.part_of(w));
        tree[a].push((b, j));
        tree[b].push((a, j));
    }
    let mut picks = vec![usize::MAX; imc.pairs().len()];
    let mut visited = vec![false; r];
    visited[q] = true;
    let mut queue = VecDeque::from([q]);
    while let Some(parent) = queue.pop_front() {
        for &(child, j) in &tree[parent] {
            if visited[child] {
                continue;
            }
            visited[child] = true;
            let (v, w) = imc.pairs()[j];
            picks[j] = if g.part_of(v) == child { v } else { w };
            queue.push_back(child);
        }
    }
    for (i, &u) in picks.iter().enumerate() {
        if let Some(&v) = picks[i + 1..].iter().find(|&&v| g.has_edge(u, v)) {
            return Err(ImcError::DependentPit(u, v));
        }
    }
    Ok(Pit { picks, avoided: q })
}

/// `A_v = {y : N(y) ∩ I = {v}}` for every `v ∈ I`. The sets are disjoint;
/// each IMC vertex lies in its partner's set.
pub fn attachment_sets(g: &MultipartiteGraph, imc: &Imc) -> Result<BTreeMap<usize, VertexSet>, ImcError> {
    verify_imc(g, imc.pairs())?;
    let n = g.vertex_count();
    let members = imc.vertices(n);
    let mut sets: BTreeMap<usize, VertexSet> = members.iter().map(|v| (v, VertexSet::new(n))).collect();
    for y in 0..n {
        let hits = g.neighbors(y).intersection(&members);
        if hits.len() == 1 {
            let v = hits.first().expect("one element");
            sets.get_mut(&v).expect("member").insert(y);
        }
    }
    Ok(sets)
}

/// Result of [`replace_representatives`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Valid(Imc),
    /// The candidates are not independent in `G - E`; `offending` is an
    /// edge between two candidates that is not a candidate pair.
    HypothesisFails {
        offending: Edge,
    },
    /// The hypothesis holds but the result is not an IMC. This can only
    /// happen when the host graph has an independent transversal.
    ConclusionFails(ImcViolation),
}

/// Replaces every pair `{a_i, b_i}` of `imc` by a candidate pair with one
/// endpoint in `A_{a_i}` and the other in `A_{b_i}` (either orientation),
/// given in the order of [`Imc::pairs`].
pub fn replace_representatives(
    g: &MultipartiteGraph,
    imc: &Imc,
    candidates: &[(usize, usize)],
) -> Result<Replacement, ImcError> {
    let n = g.vertex_count();
    if let Some(&v) = candidates.iter().flat_map(|(v, w)| [v, w]).find(|&&v| v >= n) {
        return Err(ImcError::UnknownVertex(v));
    }
    if candidates.len() != imc.pairs().len() {
        return Err(ImcError::CandidateCount {
            expected: imc.pairs().len(),
            actual: candidates.len(),
        });
    }
    let attach = attachment_sets(g, imc)?;
    for (index, (&(a, b), &(v, w))) in imc.pairs().iter().zip(candidates).enumerate() {
        let straight = attach[&a].contains(v) && attach[&b].contains(w);
        let crossed = attach[&a].contains(w) && attach[&b].contains(v);
        if !straight && !crossed {
            return Err(ImcError::NotInAttachmentSet { index, v, w, a, b });
        }
    }
    let set = VertexSet::from_iter_in(n, candidates.iter().flat_map(|&(v, w)| [v, w]));
    let matched: BTreeMap<usize, usize> = candidates.iter().flat_map(|&(v, w)| [(v, w), (w, v)]).collect();
    for x in &set {
        if let Some(y) = g.neighbors(x).intersection(&set).iter().find(|&y| matched[&x] != y) {
            return Ok(Replacement::HypothesisFails {
                offending: (x.min(y), x.max(y)),
            });
        }
    }
    match Imc::new(g, candidates) {
        Ok(next) => Ok(Replacement::Valid(next)),
        Err(ImcError::Invalid(v)) => Ok(Replacement::ConclusionFails(v)),
        Err(e) => Err(e),
    }
}

/// Backtracking search for an IMC containing edge `e`. Edges are added in
/// a fixed order (by part pair, then endpoints), each joining two parts
/// not yet connected in the contraction and avoiding every vertex of or
/// adjacent to the current set. Returns the first IMC found.
pub fn find_imc_containing_edge(g: &MultipartiteGraph, e: Edge) -> Option<Imc> {
    let (u, v) = e;
    let n = g.vertex_count();
    if u >= n || v >= n || !g.has_edge(u, v) || g.part_of(u) == g.part_of(v) {
        return None;
    }
    let r = g.r();
    let mut candidates: Vec<Edge> = g
        .edges()
        .into_iter()
        .filter(|&(x, y)| g.part_of(x) != g.part_of(y) && (x, y) != (u.min(v), u.max(v)))
        .collect();
    candidates.sort_by_key(|&(x, y)| {
        let (a, b) = (g.part_of(x), g.part_of(y));
        (a.min(b), a.max(b), x, y)
    });

    // vertices that may still join: not in I, not adjacent to I
    let mut blocked = VertexSet::new(n);
    for x in [u, v] {
        blocked.insert(x);
        blocked.union_with(g.neighbors(x));
    }
    let mut chosen = vec![(u, v)];
    let mut comp: Vec<usize> = (0..r).collect();
    merge(&mut comp, g.part_of(u), g.part_of(v));

    fn merge(comp: &mut [usize], a: usize, b: usize) {
        let (ca, cb) = (comp[a], comp[b]);
        for c in comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
    }

    fn extend(
        g: &MultipartiteGraph,
        candidates: &[Edge],
        from: usize,
        blocked: &VertexSet,
        comp: &[usize],
        chosen: &mut Vec<Edge>,
    ) -> bool {
        if chosen.len() + 1 == g.r() {
            return true;
        }
        for i in from..candidates.len() {
            let (x, y) = candidates[i];
            if blocked.contains(x) || blocked.contains(y) {
                continue;
            }
            let (a, b) = (g.part_of(x), g.part_of(y));
            if comp[a] == comp[b] {
                continue;
            }
            let mut next_blocked = blocked.clone();
            for z in [x, y] {
                next_blocked.insert(z);
                next_blocked.union_with(g.neighbors(z));
            }
            let mut next_comp = comp.to_vec();
            merge(&mut next_comp, a, b);
            chosen.push((x, y));
            if extend(g, candidates, i + 1, &next_blocked, &next_comp, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    if extend(g, &candidates, 0, &blocked, &comp, &mut chosen) {
        let imc = Imc::new(g, &chosen).expect("search maintains the IMC conditions");
        Some(imc)
    } else {
        None
    }
}

/// Why a graph is not a union of `r - 1` complete bipartite graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum DecomposeFailure {
    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: usize },
    #[error("expected {expected} components with edges, found {actual}")]
    ComponentCount { expected: usize, actual: usize },
    #[error("component containing {vertex} has an odd cycle")]
    NotBipartite { vertex: usize },
    #[error("component containing {vertex} is bipartite but not complete")]
    NotComplete { vertex: usize },
}

/// Recovers `(A_i, B_i)` when `G` is exactly `⋃ K(A_i, B_i)` over `r - 1`
/// vertex-disjoint blocks covering every vertex. Within a pair, `A` holds
/// the smaller least vertex; pairs are ordered by least vertex.
pub fn decompose_bipartite_union(g: &MultipartiteGraph) -> Result<PairSystem, DecomposeFailure> {
    let n = g.vertex_count();
    if let Some(vertex) = (0..n).find(|&v| g.neighbors(v).is_empty()) {
        return Err(DecomposeFailure::IsolatedVertex { vertex });
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        let mut sides = [VertexSet::new(n), VertexSet::new(n)];
        color[start] = Some(false);
        sides[0].insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].expect("colored");
            for y in g.neighbors(x) {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        sides[usize::from(!cx)].insert(y);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return Err(DecomposeFailure::NotBipartite { vertex: start }),
                    Some(_) => {}
                }
            }
        }
        let [a, b] = sides;
        let complete =
            a.iter().all(|x| g.neighbors(x).len() == b.len()) && b.iter().all(|y| g.neighbors(y).len() == a.len());
        if !complete {
            return Err(DecomposeFailure::NotComplete { vertex: start });
        }
        blocks.push((a, b));
    }
    let expected = g.r().saturating_sub(1);
    if blocks.len() != expected {
        return Err(DecomposeFailure::ComponentCount {
            expected,
            actual: blocks.len(),
        });
    }
    // start vertices ascend, and the start is in side 0, so ordering holds
    Ok(PairSystem::new(blocks))
}
