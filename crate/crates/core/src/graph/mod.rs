//! Multigraph substrate: vertices, edges with dense ids, subgraph
//! references, and separations.
//!
//! Loops and parallel edges are first-class. Every edge has a dense
//! integer id assigned at construction; certificates always reference
//! edges by id so that parallel edges stay distinguishable.

pub mod flow;
pub mod io;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// A finite undirected multigraph. Loops (equal endpoints) and parallel
/// edges (same endpoint pair, distinct ids) are permitted.
#[derive(Debug, Clone, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_edge_id: EdgeId,
}

impl MultiGraph {
    pub fn new() -> Self {
        MultiGraph {
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
            next_edge_id: 0,
        }
    }

    /// Graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = MultiGraph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Adds an edge and returns its id. Endpoints must already exist.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        assert!(self.vertices.contains(&u), "add_edge: unknown vertex {u}");
        assert!(self.vertices.contains(&v), "add_edge: unknown vertex {v}");
        let id = self.next_edge_id;
        self.edges.insert(id, (u, v));
        self.next_edge_id = id + 1;
        id
    }

    /// Adds an edge under a caller-chosen id (used by parsers and tests
    /// that need stable ids). Panics on id collisions or unknown endpoints.
    pub fn add_edge_with_id(&mut self, id: EdgeId, u: VertexId, v: VertexId) {
        assert!(self.vertices.contains(&u), "add_edge_with_id: unknown vertex {u}");
        assert!(self.vertices.contains(&v), "add_edge_with_id: unknown vertex {v}");
        assert!(!self.edges.contains_key(&id), "add_edge_with_id: duplicate edge id {id}");
        self.edges.insert(id, (u, v));
        self.next_edge_id = self.next_edge_id.max(id + 1);
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.remove(&e)
    }

    /// Removes a vertex together with all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Iterates `(edge id, (u, v))` in increasing id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (VertexId, VertexId))> + '_ {
        self.edges.iter().map(|(&e, &uv)| (e, uv))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge_id_set(&self) -> BTreeSet<EdgeId> {
        self.edges.keys().copied().collect()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(&e), Some(&(u, v)) if u == v)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Distinct neighbors; a loop makes a vertex its own neighbor.
    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &(a, b) in self.edges.values() {
            if a == v {
                out.insert(b);
            }
            if b == v {
                out.insert(a);
            }
        }
        out
    }

    /// Edge ids incident with `v`, in increasing order; loops appear once.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| (a == u && b == v) || (a == v && b == u))
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(u, v) in self.edges.values() {
            if u == v {
                return false;
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    /// Connected components as sorted vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut remaining: BTreeSet<VertexId> = self.vertices.clone();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            remaining.remove(&start);
            comp.insert(start);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if remaining.remove(&w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True for the empty graph and for any graph with one component.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The subgraph reference holding `xs` and every edge with both
    /// endpoints inside `xs`.
    pub fn induced_subgraph(&self, xs: &BTreeSet<VertexId>) -> Result<SubgraphRef, GraphError> {
        for &v in xs {
            if !self.vertices.contains(&v) {
                return Err(GraphError::UnknownVertex { v });
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|(_, &(u, v))| xs.contains(&u) && xs.contains(&v))
            .map(|(&e, _)| e)
            .collect();
        Ok(SubgraphRef {
            vertices: xs.clone(),
            edges,
        })
    }

    /// Materializes a subgraph reference into a standalone graph,
    /// keeping vertex and edge ids.
    pub fn materialize(&self, sub: &SubgraphRef) -> Result<MultiGraph, GraphError> {
        sub.validate(self)?;
        let mut g = MultiGraph::new();
        for &v in &sub.vertices {
            g.add_vertex(v);
        }
        for &e in &sub.edges {
            let (u, v) = self.edges[&e];
            g.add_edge_with_id(e, u, v);
        }
        Ok(g)
    }

    /// The graph with a vertex set removed (incident edges dropped).
    pub fn without_vertices(&self, zs: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = self.clone();
        for &z in zs {
            g.remove_vertex(z);
        }
        g
    }

    /// Contracts edge `e`: endpoints merge into the smaller endpoint id,
    /// the contracted edge disappears, parallel edges become loops,
    /// other incident edges are re-attached. Contracting a loop deletes it.
    pub fn contract_edge(&self, e: EdgeId) -> Result<MultiGraph, GraphError> {
        let &(u, v) = self.edges.get(&e).ok_or(GraphError::UnknownEdge { e })?;
        let mut g = self.clone();
        g.edges.remove(&e);
        if u == v {
            return Ok(g);
        }
        let keep = u.min(v);
        let gone = u.max(v);
        g.vertices.remove(&gone);
        for (_, ends) in g.edges.iter_mut() {
            if ends.0 == gone {
                ends.0 = keep;
            }
            if ends.1 == gone {
                ends.1 = keep;
            }
        }
        Ok(g)
    }
}

impl Default for MultiGraph {
    fn default() -> Self {
        MultiGraph::new()
    }
}

/// Equality compares the vertex set and the edge id map; the internal
/// id counter is bookkeeping and deliberately ignored.
impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

/// A subgraph of a host graph, referenced by explicit vertex and edge id
/// sets. Only meaningful together with the host it was built from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgraphRef {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl SubgraphRef {
    pub fn empty() -> Self {
        SubgraphRef {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Self {
        SubgraphRef {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
        }
    }

    /// The whole host graph as a subgraph reference.
    pub fn whole(g: &MultiGraph) -> Self {
        SubgraphRef {
            vertices: g.vertex_set().clone(),
            edges: g.edge_id_set(),
        }
    }

    /// Every referenced id exists in the host and every referenced edge
    /// has both endpoints inside the vertex subset.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), GraphError> {
        for &v in &self.vertices {
            if !g.has_vertex(v) {
                return Err(GraphError::UnknownVertex { v });
            }
        }
        for &e in &self.edges {
            let (u, v) = g.endpoints(e).ok_or(GraphError::UnknownEdge { e })?;
            if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
                return Err(GraphError::EdgeOutsideVertices { e });
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &SubgraphRef) -> SubgraphRef {
        SubgraphRef {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn contains(&self, other: &SubgraphRef) -> bool {
        other.vertices.is_subset(&self.vertices) && other.edges.is_subset(&self.edges)
    }

    /// Removes a vertex set and all edges incident with it (host needed
    /// to resolve edge endpoints).
    pub fn minus_vertices(&self, g: &MultiGraph, zs: &BTreeSet<VertexId>) -> SubgraphRef {
        let vertices = self.vertices.difference(zs).copied().collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&e| {
                let (u, v) = g.endpoints(e).expect("edge id must exist in host");
                !zs.contains(&u) && !zs.contains(&v)
            })
            .collect();
        SubgraphRef { vertices, edges }
    }

    /// Connected on its own vertices and edges, with no vertex left out.
    pub fn is_connected(&self, g: &MultiGraph) -> bool {
        g.materialize(self).map(|m| m.is_connected()).unwrap_or(false)
    }
}

/// A separation (A, B): two subgraphs covering the host with no shared
/// edge. The order is the number of shared vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Separation {
    #[serde(rename = "A")]
    pub a: SubgraphRef,
    #[serde(rename = "B")]
    pub b: SubgraphRef,
}

impl Separation {
    pub fn new(a: SubgraphRef, b: SubgraphRef) -> Self {
        Separation { a, b }
    }

    pub fn order(&self) -> usize {
        self.a.vertices.intersection(&self.b.vertices).count()
    }

    pub fn separator(&self) -> BTreeSet<VertexId> {
        self.a.vertices.intersection(&self.b.vertices).copied().collect()
    }

    pub fn flip(&self) -> Separation {
        Separation {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// Checks the separation axioms against the host: both sides valid
    /// subgraphs, sides cover all vertices and all edges, no edge on both
    /// sides.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), GraphError> {
        self.a.validate(g)?;
        self.b.validate(g)?;
        for v in g.vertices() {
            if !self.a.vertices.contains(&v) && !self.b.vertices.contains(&v) {
                return Err(GraphError::SeparationMissesVertex { v });
            }
        }
        for e in g.edge_ids() {
            let in_a = self.a.edges.contains(&e);
            let in_b = self.b.edges.contains(&e);
            if !in_a && !in_b {
                return Err(GraphError::SeparationMissesEdge { e });
            }
            if in_a && in_b {
                return Err(GraphError::SeparationSharesEdge { e });
            }
        }
        Ok(())
    }

    /// Sort key giving the deterministic output order used everywhere:
    /// lexicographic on sorted V(A), then V(B), then E(A), then E(B).
    pub fn sort_key(&self) -> (Vec<VertexId>, Vec<VertexId>, Vec<EdgeId>, Vec<EdgeId>) {
        (
            self.a.vertices.iter().copied().collect(),
            self.b.vertices.iter().copied().collect(),
            self.a.edges.iter().copied().collect(),
            self.b.edges.iter().copied().collect(),
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id {v}")]
    UnknownVertex { v: VertexId },
    #[error("unknown edge id {e}")]
    UnknownEdge { e: EdgeId },
    #[error("edge {e} has an endpoint outside the referenced vertex set")]
    EdgeOutsideVertices { e: EdgeId },
    #[error("vertex {v} lies on neither side of the separation")]
    SeparationMissesVertex { v: VertexId },
    #[error("edge {e} lies on neither side of the separation")]
    SeparationMissesEdge { e: EdgeId },
    #[error("edge {e} lies on both sides of the separation")]
    SeparationSharesEdge { e: EdgeId },
}
