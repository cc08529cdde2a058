//! Multipartite graphs over dense vertex ids.
//!
//! Vertices are `0..|V|`; every vertex belongs to exactly one part and the
//! adjacency is stored as one bitset row per vertex. Graphs are immutable:
//! every "edit" (edge deletion, complement) produces a new value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;

pub type Edge = (usize, usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one part")]
    NoParts,
    #[error("vertex {0} appears more than once in the part lists")]
    DuplicateVertex(usize),
    #[error("vertex ids must be dense: {0} is missing from 0..{1}")]
    MissingVertex(usize, usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("document declares r = {declared} but lists {actual} parts")]
    PartCountMismatch { declared: usize, actual: usize },
    #[error("label key {0:?} is not a vertex id")]
    BadLabel(String),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteGraph {
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
    part_masks: Vec<VertexSet>,
    adj: Vec<VertexSet>,
    labels: BTreeMap<usize, String>,
}

impl MultipartiteGraph {
    /// Builds a graph from explicit part lists and an edge list.
    ///
    /// Part lists must be disjoint and together cover `0..|V|`. Repeated
    /// edges collapse; intra-part edges are kept (see [`Self::intra_part_edges`]).
    pub fn new(part_lists: Vec<Vec<usize>>, edges: &[Edge]) -> Result<Self, GraphError> {
        if part_lists.is_empty() {
            return Err(GraphError::NoParts);
        }
        let total: usize = part_lists.iter().map(Vec::len).sum();
        let mut part_of = vec![usize::MAX; total];
        for (p, members) in part_lists.iter().enumerate() {
            for &v in members {
                if v >= total {
                    // a gap must exist somewhere below `total`
                    let mut seen = vec![false; total];
                    part_lists
                        .iter()
                        .flatten()
                        .filter(|&&u| u < total)
                        .for_each(|&u| seen[u] = true);
                    let gap = seen.iter().position(|s| !s).unwrap_or(0);
                    return Err(GraphError::MissingVertex(gap, total));
                }
                if part_of[v] != usize::MAX {
                    return Err(GraphError::DuplicateVertex(v));
                }
                part_of[v] = p;
            }
        }
        let mut adj = vec![VertexSet::new(total); total];
        for &(u, v) in edges {
            if u >= total {
                return Err(GraphError::UnknownVertex(u));
            }
            if v >= total {
                return Err(GraphError::UnknownVertex(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let parts: Vec<Vec<usize>> = part_lists
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        let part_masks = parts
            .iter()
            .map(|p| VertexSet::from_iter_in(total, p.iter().copied()))
            .collect();
        Ok(Self {
            parts,
            part_of,
            part_masks,
            adj,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Result<Self, GraphError> {
        if let Some((&v, _)) = labels.iter().find(|(&v, _)| v >= self.vertex_count()) {
            return Err(GraphError::UnknownVertex(v));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Graph with the given parts and no edges.
    pub fn edgeless(part_lists: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        Self::new(part_lists, &[])
    }

    /// `r` parts of `n` consecutive ids each, no edges.
    pub fn edgeless_balanced(r: usize, n: usize) -> Self {
        Self::edgeless(balanced_parts(r, n)).expect("balanced parts are well-formed")
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    #[inline]
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    #[inline]
    pub fn part(&self, p: usize) -> &[usize] {
        &self.parts[p]
    }

    #[inline]
    pub fn part_mask(&self, p: usize) -> &VertexSet {
        &self.part_masks[p]
    }

    #[inline]
    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Index of the first empty part, if any.
    pub fn empty_part(&self) -> Option<usize> {
        self.parts.iter().position(Vec::is_empty)
    }

    /// Common part size when all parts are equal.
    pub fn balanced_size(&self) -> Option<usize> {
        let n = self.parts[0].len();
        self.parts.iter().all(|p| p.len() == n).then_some(n)
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Neighbourhood row; panics on an unknown vertex.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.adj[v].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(VertexSet::len).min().unwrap_or(0)
    }

    /// `A ∖ (N(v) ∪ {v})`; counts same-part vertices as non-neighbours.
    pub fn nonneighbors(&self, v: usize, within: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check(v)?;
        let mut out = within.difference(&self.adj[v]);
        out.remove(v);
        Ok(out)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// All edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.vertex_count())
            .flat_map(|u| self.adj[u].iter_after(u).map(move |v| (u, v)))
            .collect()
    }

    /// Edges whose endpoints share a part.
    pub fn intra_part_edges(&self) -> Vec<Edge> {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| self.part_of[u] == self.part_of[v])
            .collect()
    }

    pub fn is_multipartite(&self) -> bool {
        (0..self.vertex_count()).all(|v| !self.adj[v].intersects(&self.part_masks[self.part_of[v]]))
    }

    /// Copy of the graph with one edge removed (a no-op if absent).
    pub fn without_edge(&self, (u, v): Edge) -> Self {
        let mut g = self.clone();
        if u < g.vertex_count() && v < g.vertex_count() {
            g.adj[u].remove(v);
            g.adj[v].remove(u);
        }
        g
    }

    /// Copy of the graph with the given edges removed.
    pub fn without_edges(&self, edges: &[Edge]) -> Self {
        let mut g = self.clone();
        for &(u, v) in edges {
            if u < g.vertex_count() && v < g.vertex_count() {
                g.adj[u].remove(v);
                g.adj[v].remove(u);
            }
        }
        g
    }

    /// Same parts; `u ~ v` iff they lie in different parts and are not
    /// adjacent here. Independent transversals of `self` are exactly the
    /// part-respecting r-cliques of the result.
    pub fn multipartite_complement(&self) -> Self {
        let n = self.vertex_count();
        let adj = (0..n)
            .map(|v| {
                let mut row = self.adj[v].complement();
                row.difference_with(&self.part_masks[self.part_of[v]]);
                row
            })
            .collect();
        Self {
            parts: self.parts.clone(),
            part_of: self.part_of.clone(),
            part_masks: self.part_masks.clone(),
            adj,
            labels: self.labels.clone(),
        }
    }

    /// True when every vertex in `set` is non-adjacent to every other one.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| !self.adj[v].intersects(set))
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            r: self.r(),
            parts: self.parts.clone(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: (!self.labels.is_empty())
                .then(|| self.labels.iter().map(|(v, l)| (v.to_string(), l.clone())).collect()),
        }
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self, GraphError> {
        if doc.r != doc.parts.len() {
            return Err(GraphError::PartCountMismatch {
                declared: doc.r,
                actual: doc.parts.len(),
            });
        }
        let edges: Vec<Edge> = doc.edges.iter().map(|&[u, v]| (u, v)).collect();
        let g = Self::new(doc.parts, &edges)?;
        match doc.labels {
            None => Ok(g),
            Some(raw) => {
                let mut labels = BTreeMap::new();
                for (k, l) in raw {
                    let v = k.parse::<usize>().map_err(|_| GraphError::BadLabel(k.clone()))?;
                    labels.insert(v, l);
                }
                g.with_labels(labels)
            }
        }
    }

    /// Compact JSON document with a trailing newline; edges sorted, `u < v`.
    pub fn serialize(&self) -> String {
        let mut s = serde_json::to_string(&self.to_document()).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn deserialize(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }
}

/// On-disk graph format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub r: usize,
    pub parts: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

/// Parts `[0..n), [n..2n), ...`.
pub fn balanced_parts(r: usize, n: usize) -> Vec<Vec<usize>> {
    (0..r).map(|p| (p * n..(p + 1) * n).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22() -> MultipartiteGraph {
        MultipartiteGraph::new(vec![vec![0, 1], vec![2, 3]], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn c6() -> MultipartiteGraph {
        // 0-3-1-4-2-5-0
        MultipartiteGraph::new(
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)],
        )
        .unwrap()
    }

    #[test]
    fn construction_basics() {
        let g = MultipartiteGraph::new(vec![vec![0], vec![1]], &[]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 0);
        let k = k22();
        assert_eq!(k.edge_count(), 4);
        assert!(k.is_multipartite());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            MultipartiteGraph::new(vec![vec![0], vec![1]], &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            MultipartiteGraph::new(vec![vec![0, 1], vec![1]], &[]),
            Err(GraphError::DuplicateVertex(1))
        );
        assert_eq!(
            MultipartiteGraph::new(vec![vec![0], vec![1]], &[(0, 7)]),
            Err(GraphError::UnknownVertex(7))
        );
        assert_eq!(
            MultipartiteGraph::new(vec![vec![0], vec![2]], &[]),
            Err(GraphError::MissingVertex(1, 2))
        );
        assert_eq!(MultipartiteGraph::new(vec![], &[]), Err(GraphError::NoParts));
    }

    #[test]
    fn degrees() {
        let k = k22();
        for v in 0..4 {
            assert_eq!(k.degree(v), Ok(2));
        }
        assert_eq!(k.degree(9), Err(GraphError::UnknownVertex(9)));
        assert_eq!(MultipartiteGraph::edgeless_balanced(3, 4).max_degree(), 0);
    }

    #[test]
    fn nonneighbor_sets() {
        let k = k22();
        let right = k.part_mask(1).clone();
        assert!(k.nonneighbors(0, &right).unwrap().is_empty());

        let e = MultipartiteGraph::edgeless_balanced(2, 3);
        let rest = VertexSet::full(6).difference(&VertexSet::from_iter_in(6, [0]));
        assert_eq!(e.nonneighbors(0, &rest).unwrap(), rest);

        let c = c6();
        for v in 0..3 {
            assert_eq!(c.nonneighbors(v, c.part_mask(1)).unwrap().len(), 1);
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(k22().multipartite_complement().edge_count(), 0);
        let e = MultipartiteGraph::edgeless_balanced(2, 3);
        let k33 = e.multipartite_complement();
        assert_eq!(k33.edge_count(), 9);
        assert_eq!(k33.multipartite_complement(), e);
    }

    #[test]
    fn intra_part_edges_are_flagged() {
        let g = MultipartiteGraph::new(vec![vec![0, 1], vec![2]], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.intra_part_edges(), vec![(0, 1)]);
        assert!(!g.is_multipartite());
    }

    #[test]
    fn document_round_trip_and_errors() {
        let k = k22();
        let text = k.serialize();
        assert_eq!(
            text,
            "{\"r\":2,\"parts\":[[0,1],[2,3]],\"edges\":[[0,2],[0,3],[1,2],[1,3]]}\n"
        );
        assert_eq!(MultipartiteGraph::deserialize(&text).unwrap(), k);

        let dup = r#"{"r":2,"parts":[[0,1],[1,2]],"edges":[]}"#;
        assert_eq!(MultipartiteGraph::deserialize(dup), Err(GraphError::DuplicateVertex(1)));
        let mismatch = r#"{"r":3,"parts":[[0],[1]],"edges":[]}"#;
        assert!(matches!(
            MultipartiteGraph::deserialize(mismatch),
            Err(GraphError::PartCountMismatch { .. })
        ));
        assert!(matches!(
            MultipartiteGraph::deserialize("{\"r\":"),
            Err(GraphError::Malformed(_))
        ));
    }

    #[test]
    fn labels_round_trip() {
        let g = k22()
            .with_labels(BTreeMap::from([(0, "A1".to_string()), (2, "B1".to_string())]))
            .unwrap();
        let back = MultipartiteGraph::deserialize(&g.serialize()).unwrap();
        assert_eq!(back.labels().get(&2).map(String::as_str), Some("B1"));
        assert_eq!(back, g);
    }
}
