//! Critical graphs: IT-free, but deleting any single edge creates an IT.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, MultipartiteGraph};
use crate::solver::{find_it, Transversal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CriticalError {
    #[error("input has an independent transversal {:?}", .0.picks)]
    HasIt(Transversal),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeWitness {
    pub edge: Edge,
    pub transversal: Transversal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub is_critical: bool,
    /// Set when the graph itself has an IT.
    pub it_in_graph: Option<Transversal>,
    /// Edges whose deletion keeps the graph IT-free.
    pub redundant_edges: Vec<Edge>,
    /// Edges removed by [`criticalize`]; empty for [`is_critical`].
    pub removed_edges: Vec<Edge>,
    /// One IT of `G - e` per edge `e` that has one.
    pub per_edge_witness: Vec<EdgeWitness>,
}

/// Checks criticality; the report carries a witness IT of `G - e` for every
/// edge when the graph is critical.
pub fn is_critical(g: &MultipartiteGraph) -> CriticalReport {
    if let Some(t) = find_it(g) {
        return CriticalReport {
            is_critical: false,
            it_in_graph: Some(t),
            redundant_edges: Vec::new(),
            removed_edges: Vec::new(),
            per_edge_witness: Vec::new(),
        };
    }
    let probes: Vec<(Edge, Option<Transversal>)> = g
        .edges()
        .into_par_iter()
        .map(|e| (e, find_it(&g.without_edge(e))))
        .collect();
    let mut redundant_edges = Vec::new();
    let mut per_edge_witness = Vec::new();
    for (edge, probe) in probes {
        match probe {
            Some(transversal) => per_edge_witness.push(EdgeWitness { edge, transversal }),
            None => redundant_edges.push(edge),
        }
    }
    CriticalReport {
        is_critical: redundant_edges.is_empty(),
        it_in_graph: None,
        redundant_edges,
        removed_edges: Vec::new(),
        per_edge_witness,
    }
}

/// Deletes edges in lexicographic order while the graph stays IT-free.
///
/// Deleting edges only adds transversals, so an edge that is not removable
/// stays non-removable after later deletions; one pass in scan order gives
/// the same result as restarting the scan after every deletion.
pub fn criticalize(g: &MultipartiteGraph) -> Result<(MultipartiteGraph, CriticalReport), CriticalError> {
    if let Some(t) = find_it(g) {
        return Err(CriticalError::HasIt(t));
    }
    let mut current = g.clone();
    let mut removed = Vec::new();
    for e in g.edges() {
        let candidate = current.without_edge(e);
        if find_it(&candidate).is_none() {
            current = candidate;
            removed.push(e);
        }
    }
    let mut report = is_critical(&current);
    debug_assert!(report.is_critical);
    report.removed_edges = removed;
    Ok((current, report))
}
