//! Minor models and subdivision models: verification and exhaustive search.
//!
//! A minor model maps each pattern vertex to a connected branch set in the
//! host and each pattern edge to a distinct host edge joining the right
//! branch sets (loop images must avoid the branch set's own edges). A
//! subdivision model maps pattern vertices injectively to host vertices and
//! pattern edges to internally disjoint host paths (cycles for loops).
//! Both searches are exhaustive with feasibility pruning, so a `None`
//! answer is a proof of absence at the given guard scale.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::flow::max_disjoint_paths;
use crate::graph::{EdgeId, GraphError, MultiGraph, SubgraphRef, VertexId};
use crate::guard::{GuardError, Guards};

/// An H-minor of a host graph: connected branch sets per pattern vertex
/// plus one distinct host edge per pattern edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<VertexId, SubgraphRef>,
    pub edge_images: BTreeMap<EdgeId, EdgeId>,
}

/// The image of one pattern edge under a subdivision model: a host path
/// (`closed: false`, edges joining consecutive vertices) or a host cycle
/// (`closed: true`, last edge returning to the first vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeImage {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub closed: bool,
}

impl EdgeImage {
    pub fn path(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        EdgeImage {
            vertices,
            edges,
            closed: false,
        }
    }

    pub fn cycle(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        EdgeImage {
            vertices,
            edges,
            closed: true,
        }
    }

    /// Checks the image is a real path or cycle of `g` with distinct
    /// vertices and matching edge endpoints.
    fn is_walk_of(&self, g: &MultiGraph) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() {
            return false;
        }
        let expected_edges = if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        };
        if self.edges.len() != expected_edges {
            return false;
        }
        let distinct_edges: BTreeSet<_> = self.edges.iter().collect();
        if distinct_edges.len() != self.edges.len() {
            return false;
        }
        for (i, &e) in self.edges.iter().enumerate() {
            let x = self.vertices[i];
            let y = self.vertices[(i + 1) % self.vertices.len()];
            match g.endpoints(e) {
                Some((a, b)) if (a, b) == (x, y) || (a, b) == (y, x) => {}
                _ => return false,
            }
        }
        // A closed image on two vertices needs two distinct parallel
        // edges; distinctness was checked above. A closed image on one
        // vertex is a loop edge, covered by the endpoint check.
        true
    }
}

/// An H-subdivision of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionModel {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeImage>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("pattern vertex {v} does not exist")]
    UnknownPatternVertex { v: VertexId },
    #[error("pattern edge {e} does not exist")]
    UnknownPatternEdge { e: EdgeId },
    #[error("host id referenced by the model does not exist: {0}")]
    DanglingHostId(#[from] GraphError),
    #[error(transparent)]
    Guard(#[from] GuardError),
}

/// One broken clause of the minor-model definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorViolation {
    MissingBranchSet { pattern_vertex: VertexId },
    EmptyBranchSet { pattern_vertex: VertexId },
    DisconnectedBranchSet { pattern_vertex: VertexId },
    OverlappingBranchSets { a: VertexId, b: VertexId },
    MissingEdgeImage { pattern_edge: EdgeId },
    WrongEnds { pattern_edge: EdgeId },
    LoopImageInsideBranchSet { pattern_edge: EdgeId },
    DuplicateEdgeImage { first: EdgeId, second: EdgeId },
}

impl std::fmt::Display for MinorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MinorViolation::MissingBranchSet { pattern_vertex } => {
                write!(f, "pattern vertex {pattern_vertex} has no branch set")
            }
            MinorViolation::EmptyBranchSet { pattern_vertex } => {
                write!(f, "branch set of {pattern_vertex} is empty")
            }
            MinorViolation::DisconnectedBranchSet { pattern_vertex } => {
                write!(f, "branch set of {pattern_vertex} is not connected")
            }
            MinorViolation::OverlappingBranchSets { a, b } => {
                write!(f, "branch sets of {a} and {b} intersect")
            }
            MinorViolation::MissingEdgeImage { pattern_edge } => {
                write!(f, "pattern edge {pattern_edge} has no image")
            }
            MinorViolation::WrongEnds { pattern_edge } => {
                write!(f, "image of edge {pattern_edge} joins the wrong branch sets")
            }
            MinorViolation::LoopImageInsideBranchSet { pattern_edge } => {
                write!(f, "loop image {pattern_edge} uses an edge of its branch set")
            }
            MinorViolation::DuplicateEdgeImage { first, second } => {
                write!(f, "edges {first} and {second} share a host edge image")
            }
        }
    }
}

/// Outcome of a model check: valid when `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport<V> {
    pub violations: Vec<V>,
}

impl<V> ModelReport<V> {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the four minor-model clauses; ids must resolve or the call errors.
pub fn verify_minor(
    g: &MultiGraph,
    h: &MultiGraph,
    m: &MinorModel,
) -> Result<ModelReport<MinorViolation>, ModelError> {
    for &hv in m.branch_sets.keys() {
        if !h.has_vertex(hv) {
            return Err(ModelError::UnknownPatternVertex { v: hv });
        }
    }
    for (&he, &ge) in &m.edge_images {
        if h.endpoints(he).is_none() {
            return Err(ModelError::UnknownPatternEdge { e: he });
        }
        if g.endpoints(ge).is_none() {
            return Err(ModelError::DanglingHostId(GraphError::UnknownEdge {
                e: ge,
            }));
        }
    }
    for branch in m.branch_sets.values() {
        branch.validate(g)?;
    }

    let mut violations = Vec::new();
    for hv in h.vertices() {
        match m.branch_sets.get(&hv) {
            None => violations.push(MinorViolation::MissingBranchSet { pattern_vertex: hv }),
            Some(branch) => {
                if branch.vertices.is_empty() {
                    violations.push(MinorViolation::EmptyBranchSet { pattern_vertex: hv });
                } else if !branch.is_connected(g) {
                    violations.push(MinorViolation::DisconnectedBranchSet { pattern_vertex: hv });
                }
            }
        }
    }
    let assigned: Vec<(&VertexId, &SubgraphRef)> = m.branch_sets.iter().collect();
    for (i, &(&a, sa)) in assigned.iter().enumerate() {
        for &(&b, sb) in &assigned[i + 1..] {
            if !sa.vertices.is_disjoint(&sb.vertices) {
                violations.push(MinorViolation::OverlappingBranchSets { a, b });
            }
        }
    }
    let mut seen_host_edges: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for (he, (h1, h2)) in h.edges() {
        let Some(&ge) = m.edge_images.get(&he) else {
            violations.push(MinorViolation::MissingEdgeImage { pattern_edge: he });
            continue;
        };
        if let Some(&prev) = seen_host_edges.get(&ge) {
            violations.push(MinorViolation::DuplicateEdgeImage {
                first: prev,
                second: he,
            });
        } else {
            seen_host_edges.insert(ge, he);
        }
        let (x, y) = g.endpoints(ge).expect("validated above");
        let (s1, s2) = match (m.branch_sets.get(&h1), m.branch_sets.get(&h2)) {
            (Some(s1), Some(s2)) => (s1, s2),
            _ => continue, // already reported as missing branch sets
        };
        if h1 == h2 {
            let inside = s1.vertices.contains(&x) && s1.vertices.contains(&y);
            if !inside {
                violations.push(MinorViolation::WrongEnds { pattern_edge: he });
            } else if s1.edges.contains(&ge) {
                violations.push(MinorViolation::LoopImageInsideBranchSet { pattern_edge: he });
            }
        } else {
            let forward = s1.vertices.contains(&x) && s2.vertices.contains(&y);
            let backward = s1.vertices.contains(&y) && s2.vertices.contains(&x);
            if !forward && !backward {
                violations.push(MinorViolation::WrongEnds { pattern_edge: he });
            }
        }
    }
    Ok(ModelReport { violations })
}

/// One broken clause of the subdivision-model definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubdivisionViolation {
    MissingVertexImage { pattern_vertex: VertexId },
    NotInjective { a: VertexId, b: VertexId },
    MissingEdgeImage { pattern_edge: EdgeId },
    BrokenImage { pattern_edge: EdgeId },
    WrongEnds { pattern_edge: EdgeId },
    SharedInternalVertex { a: EdgeId, b: EdgeId, vertex: VertexId },
    SharedEdge { a: EdgeId, b: EdgeId, edge: EdgeId },
}

impl std::fmt::Display for SubdivisionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubdivisionViolation::MissingVertexImage { pattern_vertex } => {
                write!(f, "pattern vertex {pattern_vertex} has no image")
            }
            SubdivisionViolation::NotInjective { a, b } => {
                write!(f, "pattern vertices {a} and {b} share an image")
            }
            SubdivisionViolation::MissingEdgeImage { pattern_edge } => {
                write!(f, "pattern edge {pattern_edge} has no image")
            }
            SubdivisionViolation::BrokenImage { pattern_edge } => {
                write!(f, "image of edge {pattern_edge} is not a path or cycle of the host")
            }
            SubdivisionViolation::WrongEnds { pattern_edge } => {
                write!(f, "image of edge {pattern_edge} has the wrong end vertices")
            }
            SubdivisionViolation::SharedInternalVertex { a, b, vertex } => {
                write!(f, "images of edges {a} and {b} meet internally at vertex {vertex}")
            }
            SubdivisionViolation::SharedEdge { a, b, edge } => {
                write!(f, "images of edges {a} and {b} share host edge {edge}")
            }
        }
    }
}

/// Checks the three subdivision clauses. Image paths may meet only at
/// host vertices that are images of shared pattern endpoints; in
/// particular no two images share a host edge.
pub fn verify_subdivision(
    g: &MultiGraph,
    h: &MultiGraph,
    m: &SubdivisionModel,
) -> Result<ModelReport<SubdivisionViolation>, ModelError> {
    for (&hv, &gv) in &m.vertex_map {
        if !h.has_vertex(hv) {
            return Err(ModelError::UnknownPatternVertex { v: hv });
        }
        if !g.has_vertex(gv) {
            return Err(ModelError::DanglingHostId(GraphError::UnknownVertex {
                v: gv,
            }));
        }
    }
    for (&he, image) in &m.edge_map {
        if h.endpoints(he).is_none() {
            return Err(ModelError::UnknownPatternEdge { e: he });
        }
        for &gv in &image.vertices {
            if !g.has_vertex(gv) {
                return Err(ModelError::DanglingHostId(GraphError::UnknownVertex {
                    v: gv,
                }));
            }
        }
        for &ge in &image.edges {
            if g.endpoints(ge).is_none() {
                return Err(ModelError::DanglingHostId(GraphError::UnknownEdge {
                    e: ge,
                }));
            }
        }
    }

    let mut violations = Vec::new();
    let mut image_of: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for hv in h.vertices() {
        match m.vertex_map.get(&hv) {
            None => violations.push(SubdivisionViolation::MissingVertexImage {
                pattern_vertex: hv,
            }),
            Some(&gv) => {
                if let Some(&prev) = image_of.get(&gv) {
                    violations.push(SubdivisionViolation::NotInjective { a: prev, b: hv });
                } else {
                    image_of.insert(gv, hv);
                }
            }
        }
    }

    let mut checked: Vec<(EdgeId, &EdgeImage)> = Vec::new();
    for (he, (h1, h2)) in h.edges() {
        let Some(image) = m.edge_map.get(&he) else {
            violations.push(SubdivisionViolation::MissingEdgeImage { pattern_edge: he });
            continue;
        };
        let is_loop = h1 == h2;
        if image.closed != is_loop || !image.is_walk_of(g) {
            violations.push(SubdivisionViolation::BrokenImage { pattern_edge: he });
            continue;
        }
        let ends_ok = match (m.vertex_map.get(&h1), m.vertex_map.get(&h2)) {
            (Some(&p1), Some(&p2)) => {
                if is_loop {
                    image.vertices[0] == p1
                } else {
                    let first = image.vertices[0];
                    let last = *image.vertices.last().expect("nonempty path");
                    (first, last) == (p1, p2) || (first, last) == (p2, p1)
                }
            }
            _ => true, // missing vertex image already reported
        };
        if !ends_ok {
            violations.push(SubdivisionViolation::WrongEnds { pattern_edge: he });
            continue;
        }
        checked.push((he, image));
    }

    for (i, &(e1, im1)) in checked.iter().enumerate() {
        let ends1: BTreeSet<VertexId> = if im1.closed {
            [im1.vertices[0]].into()
        } else {
            [im1.vertices[0], *im1.vertices.last().unwrap()].into()
        };
        for &(e2, im2) in &checked[i + 1..] {
            let ends2: BTreeSet<VertexId> = if im2.closed {
                [im2.vertices[0]].into()
            } else {
                [im2.vertices[0], *im2.vertices.last().unwrap()].into()
            };
            let v1: BTreeSet<_> = im1.vertices.iter().copied().collect();
            let v2: BTreeSet<_> = im2.vertices.iter().copied().collect();
            for &shared in v1.intersection(&v2) {
                if !(ends1.contains(&shared) && ends2.contains(&shared)) {
                    violations.push(SubdivisionViolation::SharedInternalVertex {
                        a: e1,
                        b: e2,
                        vertex: shared,
                    });
                }
            }
            let s1: BTreeSet<_> = im1.edges.iter().copied().collect();
            for &ge in &im2.edges {
                if s1.contains(&ge) {
                    violations.push(SubdivisionViolation::SharedEdge { a: e1, b: e2, edge: ge });
                }
            }
        }
    }
    Ok(ModelReport { violations })
}

/// All connected subsets of `avail` (in the induced sense), ordered by
/// size then lexicographically. Exponential; callers stay at desk scale.
fn connected_subsets(g: &MultiGraph, avail: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
    let mut found: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    // Grow each subset from its minimum vertex so every connected set is
    // produced at least once.
    fn grow(
        g: &MultiGraph,
        avail: &BTreeSet<VertexId>,
        current: &mut BTreeSet<VertexId>,
        found: &mut BTreeSet<Vec<VertexId>>,
    ) {
        if !found.insert(current.iter().copied().collect()) {
            return;
        }
        let frontier: BTreeSet<VertexId> = current
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|w| avail.contains(w) && !current.contains(w))
            .collect();
        for w in frontier {
            current.insert(w);
            grow(g, avail, current, found);
            current.remove(&w);
        }
    }
    for &v in avail {
        let mut current = BTreeSet::from([v]);
        grow(g, avail, &mut current, &mut found);
    }
    let mut out: Vec<BTreeSet<VertexId>> = found.into_iter().map(|v| v.into_iter().collect()).collect();
    out.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

fn spanning_tree_edges(g: &MultiGraph, set: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    let mut tree = BTreeSet::new();
    let Some(&start) = set.iter().next() else {
        return tree;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for e in g.incident_edges(v) {
            let (a, b) = g.endpoints(e).expect("incident edge exists");
            let w = if a == v { b } else { a };
            if w != v && set.contains(&w) && seen.insert(w) {
                tree.insert(e);
                queue.push_back(w);
            }
        }
    }
    tree
}

fn edges_between_sets(
    g: &MultiGraph,
    s1: &BTreeSet<VertexId>,
    s2: &BTreeSet<VertexId>,
) -> Vec<EdgeId> {
    g.edges()
        .filter(|&(_, (u, v))| {
            (s1.contains(&u) && s2.contains(&v)) || (s1.contains(&v) && s2.contains(&u))
        })
        .map(|(e, _)| e)
        .collect()
}

/// Exhaustive H-minor search; `None` means no model exists. Branch sets
/// are tried smallest-first, so returned models are lexicographically
/// earliest in that order.
pub fn find_minor(
    g: &MultiGraph,
    h: &MultiGraph,
    guards: &Guards,
) -> Result<Option<MinorModel>, ModelError> {
    guards.check_subdivision_vertices(g.num_vertices())?;
    let pattern_vertices: Vec<VertexId> = h.vertices().collect();
    if pattern_vertices.len() > g.num_vertices() {
        return Ok(None);
    }

    // Pattern edge demands, grouped: multiplicity per unordered vertex
    // pair and loop count per vertex.
    let mut pair_demand: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    let mut loop_demand: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (_, (a, b)) in h.edges() {
        if a == b {
            *loop_demand.entry(a).or_default() += 1;
        } else {
            *pair_demand.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    struct Search<'a> {
        g: &'a MultiGraph,
        pattern_vertices: &'a [VertexId],
        pattern_edge_list: Vec<(EdgeId, VertexId, VertexId)>,
        pair_demand: &'a BTreeMap<(VertexId, VertexId), usize>,
        loop_demand: &'a BTreeMap<VertexId, usize>,
    }

    impl Search<'_> {
        fn assign(
            &self,
            idx: usize,
            avail: &BTreeSet<VertexId>,
            chosen: &mut Vec<(VertexId, BTreeSet<VertexId>, BTreeSet<EdgeId>)>,
        ) -> Option<MinorModel> {
            if idx == self.pattern_vertices.len() {
                return self.finish(chosen);
            }
            let hv = self.pattern_vertices[idx];
            let remaining_after = self.pattern_vertices.len() - idx - 1;
            for set in connected_subsets(self.g, avail) {
                if set.is_empty() || avail.len() - set.len() < remaining_after {
                    continue;
                }
                let tree = spanning_tree_edges(self.g, &set);
                // Crossing-degree bound: distinct host edges leaving the
                // set must cover this pattern vertex's non-loop degree.
                let crossing = self
                    .g
                    .edges()
                    .filter(|&(_, (u, v))| set.contains(&u) != set.contains(&v))
                    .count();
                if crossing < self.nonloop_degree_of(hv) {
                    continue;
                }
                // Loop demand: spare inside edges (not in the tree).
                let inside_spare = self
                    .g
                    .edges()
                    .filter(|&(e, (u, v))| {
                        set.contains(&u) && set.contains(&v) && !tree.contains(&e)
                    })
                    .count();
                if inside_spare < self.loop_demand.get(&hv).copied().unwrap_or(0) {
                    continue;
                }
                // Pairwise demand against already-chosen sets.
                let feasible = chosen.iter().all(|(prev_hv, prev_set, _)| {
                    let key = (hv.min(*prev_hv), hv.max(*prev_hv));
                    match self.pair_demand.get(&key) {
                        None => true,
                        Some(&need) => {
                            edges_between_sets(self.g, &set, prev_set).len() >= need
                        }
                    }
                });
                if !feasible {
                    continue;
                }
                let next_avail: BTreeSet<_> = avail.difference(&set).copied().collect();
                chosen.push((hv, set, tree));
                if let Some(model) = self.assign(idx + 1, &next_avail, chosen) {
                    return Some(model);
                }
                chosen.pop();
            }
            None
        }

        fn nonloop_degree_of(&self, hv: VertexId) -> usize {
            self.pair_demand
                .iter()
                .filter(|&(&(a, b), _)| a == hv || b == hv)
                .map(|(_, &m)| m)
                .sum()
        }

        fn finish(
            &self,
            chosen: &[(VertexId, BTreeSet<VertexId>, BTreeSet<EdgeId>)],
        ) -> Option<MinorModel> {
            // Assign one distinct host edge per pattern edge. Candidates
            // for different vertex pairs are automatically distinct, but
            // parallel edges and loops share candidate pools, so match by
            // backtracking over pattern edges in id order.
            let set_of: BTreeMap<VertexId, &BTreeSet<VertexId>> =
                chosen.iter().map(|(hv, s, _)| (*hv, s)).collect();
            let tree_of: BTreeMap<VertexId, &BTreeSet<EdgeId>> =
                chosen.iter().map(|(hv, _, t)| (*hv, t)).collect();
            let mut candidates: Vec<(EdgeId, Vec<EdgeId>)> = Vec::new();
            for &(he, a, b) in &self.pattern_edge_list {
                let pool = if a == b {
                    let set = set_of[&a];
                    let tree = tree_of[&a];
                    self.g
                        .edges()
                        .filter(|&(e, (u, v))| {
                            set.contains(&u) && set.contains(&v) && !tree.contains(&e)
                        })
                        .map(|(e, _)| e)
                        .collect()
                } else {
                    edges_between_sets(self.g, set_of[&a], set_of[&b])
                };
                candidates.push((he, pool));
            }
            let mut used = BTreeSet::new();
            let mut images = BTreeMap::new();
            if !pick_edges(&candidates, 0, &mut used, &mut images) {
                return None;
            }
            let branch_sets = chosen
                .iter()
                .map(|(hv, set, tree)| {
                    (
                        *hv,
                        SubgraphRef {
                            vertices: set.clone(),
                            edges: tree.clone(),
                        },
                    )
                })
                .collect();
            Some(MinorModel {
                branch_sets,
                edge_images: images,
            })
        }

    }

    fn pick_edges(
        candidates: &[(EdgeId, Vec<EdgeId>)],
        idx: usize,
        used: &mut BTreeSet<EdgeId>,
        images: &mut BTreeMap<EdgeId, EdgeId>,
    ) -> bool {
        if idx == candidates.len() {
            return true;
        }
        let (he, pool) = &candidates[idx];
        let mut sorted = pool.clone();
        sorted.sort_unstable();
        for ge in sorted {
            if used.insert(ge) {
                images.insert(*he, ge);
                if pick_edges(candidates, idx + 1, used, images) {
                    return true;
                }
                images.remove(he);
                used.remove(&ge);
            }
        }
        false
    }

    let search = Search {
        g,
        pattern_vertices: &pattern_vertices,
        pattern_edge_list: h.edges().map(|(e, (a, b))| (e, a, b)).collect(),
        pair_demand: &pair_demand,
        loop_demand: &loop_demand,
    };
    let avail: BTreeSet<VertexId> = g.vertices().collect();
    let mut chosen = Vec::new();
    let found = search.assign(0, &avail, &mut chosen);
    if let Some(model) = &found {
        debug_assert!(verify_minor(g, h, model).expect("model ids valid").ok());
    }
    Ok(found)
}

/// Exhaustive H-subdivision search. Branch vertices are assigned in id
/// order over degree-feasible host vertices, then edge images are routed
/// by backtracking depth-first search with a Menger-based prune.
pub fn find_subdivision(
    g: &MultiGraph,
    h: &MultiGraph,
    guards: &Guards,
) -> Result<Option<SubdivisionModel>, ModelError> {
    guards.check_subdivision_vertices(g.num_vertices())?;
    let pattern_vertices: Vec<VertexId> = h.vertices().collect();
    if pattern_vertices.len() > g.num_vertices() {
        return Ok(None);
    }
    let host_vertices: Vec<VertexId> = g.vertices().collect();

    // Pattern edges in id order; loops last so open paths claim scarce
    // vertices before cycles do (pure heuristic, search stays complete).
    let mut pattern_edges: Vec<(EdgeId, VertexId, VertexId)> = h
        .edges()
        .map(|(e, (a, b))| (e, a, b))
        .collect();
    pattern_edges.sort_by_key(|&(e, a, b)| (a == b, e));

    let blocked_branch: BTreeSet<VertexId> = h
        .vertices()
        .filter(|&v| h.degree(v) > 0)
        .collect();

    struct Router<'a> {
        g: &'a MultiGraph,
        pattern_edges: &'a [(EdgeId, VertexId, VertexId)],
        vertex_map: &'a BTreeMap<VertexId, VertexId>,
        // Host vertices no image may pass through internally: images of
        // pattern vertices with at least one incident edge.
        hard_blocked: BTreeSet<VertexId>,
    }

    impl Router<'_> {
        fn route(
            &self,
            idx: usize,
            used_vertices: &mut BTreeSet<VertexId>,
            used_edges: &mut BTreeSet<EdgeId>,
            images: &mut BTreeMap<EdgeId, EdgeImage>,
        ) -> bool {
            if idx == self.pattern_edges.len() {
                return true;
            }
            if !self.demands_feasible(idx, used_vertices, used_edges) {
                return false;
            }
            let (he, a, b) = self.pattern_edges[idx];
            let (pa, pb) = (self.vertex_map[&a], self.vertex_map[&b]);
            if a == b {
                self.route_cycle(idx, he, pa, used_vertices, used_edges, images)
            } else {
                let mut path = vec![pa];
                let mut edges = Vec::new();
                self.extend_path(
                    idx,
                    he,
                    pb,
                    &mut path,
                    &mut edges,
                    used_vertices,
                    used_edges,
                    images,
                )
            }
        }

        /// Depth-first extension of an open path toward `target`.
        #[allow(clippy::too_many_arguments)]
        fn extend_path(
            &self,
            idx: usize,
            he: EdgeId,
            target: VertexId,
            path: &mut Vec<VertexId>,
            edges: &mut Vec<EdgeId>,
            used_vertices: &mut BTreeSet<VertexId>,
            used_edges: &mut BTreeSet<EdgeId>,
            images: &mut BTreeMap<EdgeId, EdgeImage>,
        ) -> bool {
            let here = *path.last().expect("path nonempty");
            for e in self.g.incident_edges(here) {
                if used_edges.contains(&e) || edges.contains(&e) {
                    continue;
                }
                let (x, y) = self.g.endpoints(e).expect("edge exists");
                if x == y {
                    continue;
                }
                let next = if x == here { y } else { x };
                if next == target {
                    edges.push(e);
                    path.push(next);
                    for &v in path.iter().skip(1).take(path.len() - 2) {
                        used_vertices.insert(v);
                    }
                    for &pe in edges.iter() {
                        used_edges.insert(pe);
                    }
                    images.insert(he, EdgeImage::path(path.clone(), edges.clone()));
                    if self.route(idx + 1, used_vertices, used_edges, images) {
                        return true;
                    }
                    images.remove(&he);
                    for &pe in edges.iter() {
                        used_edges.remove(&pe);
                    }
                    for &v in path.iter().skip(1).take(path.len() - 2) {
                        used_vertices.remove(&v);
                    }
                    path.pop();
                    edges.pop();
                    continue;
                }
                if self.hard_blocked.contains(&next)
                    || used_vertices.contains(&next)
                    || path.contains(&next)
                {
                    continue;
                }
                path.push(next);
                edges.push(e);
                if self.extend_path(
                    idx,
                    he,
                    target,
                    path,
                    edges,
                    used_vertices,
                    used_edges,
                    images,
                ) {
                    return true;
                }
                path.pop();
                edges.pop();
            }
            false
        }

        /// Routes a loop image: a cycle through `anchor`.
        fn route_cycle(
            &self,
            idx: usize,
            he: EdgeId,
            anchor: VertexId,
            used_vertices: &mut BTreeSet<VertexId>,
            used_edges: &mut BTreeSet<EdgeId>,
            images: &mut BTreeMap<EdgeId, EdgeImage>,
        ) -> bool {
            // Case 1: a host loop at the anchor.
            for e in self.g.incident_edges(anchor) {
                if used_edges.contains(&e) {
                    continue;
                }
                if self.g.is_loop(e) {
                    used_edges.insert(e);
                    images.insert(he, EdgeImage::cycle(vec![anchor], vec![e]));
                    if self.route(idx + 1, used_vertices, used_edges, images) {
                        return true;
                    }
                    images.remove(&he);
                    used_edges.remove(&e);
                }
            }
            // Case 2: leave the anchor by one edge and walk back to it.
            for first in self.g.incident_edges(anchor) {
                if used_edges.contains(&first) || self.g.is_loop(first) {
                    continue;
                }
                let (x, y) = self.g.endpoints(first).expect("edge exists");
                let start = if x == anchor { y } else { x };
                if self.hard_blocked.contains(&start) || used_vertices.contains(&start) {
                    continue;
                }
                let mut path = vec![anchor, start];
                let mut edges = vec![first];
                if self.close_cycle(
                    idx,
                    he,
                    anchor,
                    &mut path,
                    &mut edges,
                    used_vertices,
                    used_edges,
                    images,
                ) {
                    return true;
                }
            }
            false
        }

        #[allow(clippy::too_many_arguments)]
        fn close_cycle(
            &self,
            idx: usize,
            he: EdgeId,
            anchor: VertexId,
            path: &mut Vec<VertexId>,
            edges: &mut Vec<EdgeId>,
            used_vertices: &mut BTreeSet<VertexId>,
            used_edges: &mut BTreeSet<EdgeId>,
            images: &mut BTreeMap<EdgeId, EdgeImage>,
        ) -> bool {
            let here = *path.last().expect("path nonempty");
            for e in self.g.incident_edges(here) {
                if used_edges.contains(&e) || edges.contains(&e) {
                    continue;
                }
                let (x, y) = self.g.endpoints(e).expect("edge exists");
                if x == y {
                    continue;
                }
                let next = if x == here { y } else { x };
                if next == anchor {
                    edges.push(e);
                    for &v in path.iter().skip(1) {
                        used_vertices.insert(v);
                    }
                    for &ce in edges.iter() {
                        used_edges.insert(ce);
                    }
                    images.insert(he, EdgeImage::cycle(path.clone(), edges.clone()));
                    if self.route(idx + 1, used_vertices, used_edges, images) {
                        return true;
                    }
                    images.remove(&he);
                    for &ce in edges.iter() {
                        used_edges.remove(&ce);
                    }
                    for &v in path.iter().skip(1) {
                        used_vertices.remove(&v);
                    }
                    edges.pop();
                    continue;
                }
                if self.hard_blocked.contains(&next)
                    || used_vertices.contains(&next)
                    || path.contains(&next)
                {
                    continue;
                }
                path.push(next);
                edges.push(e);
                if self.close_cycle(
                    idx,
                    he,
                    anchor,
                    path,
                    edges,
                    used_vertices,
                    used_edges,
                    images,
                ) {
                    return true;
                }
                path.pop();
                edges.pop();
            }
            false
        }

        /// Menger prune: every unrouted endpoint pair must still admit as
        /// many internally disjoint connections as it demands.
        fn demands_feasible(
            &self,
            idx: usize,
            used_vertices: &BTreeSet<VertexId>,
            used_edges: &BTreeSet<EdgeId>,
        ) -> bool {
            let mut demand: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
            for &(_, a, b) in &self.pattern_edges[idx..] {
                if a != b {
                    let (pa, pb) = (self.vertex_map[&a], self.vertex_map[&b]);
                    *demand.entry((pa.min(pb), pa.max(pb))).or_default() += 1;
                }
            }
            for (&(pa, pb), &need) in &demand {
                let direct = self
                    .g
                    .edges_between(pa, pb)
                    .into_iter()
                    .filter(|e| !used_edges.contains(e))
                    .count();
                if direct >= need {
                    continue;
                }
                // Count longer routes: vertex-disjoint paths between the
                // free neighborhoods of the two ends.
                let mut residual = self.g.clone();
                let forbidden: BTreeSet<VertexId> = self
                    .hard_blocked
                    .iter()
                    .chain(used_vertices.iter())
                    .copied()
                    .filter(|v| *v != pa && *v != pb)
                    .collect();
                for v in forbidden {
                    residual.remove_vertex(v);
                }
                let na: BTreeSet<VertexId> = residual
                    .neighbors(pa)
                    .into_iter()
                    .filter(|&w| w != pa && w != pb)
                    .collect();
                let nb: BTreeSet<VertexId> = residual
                    .neighbors(pb)
                    .into_iter()
                    .filter(|&w| w != pa && w != pb)
                    .collect();
                residual.remove_vertex(pa);
                residual.remove_vertex(pb);
                let long = max_disjoint_paths(&residual, &na, &nb)
                    .expect("vertices present")
                    .count();
                if direct + long < need {
                    return false;
                }
            }
            true
        }
    }

    // Injective assignment of pattern vertices to degree-feasible hosts.
    fn assign(
        idx: usize,
        pattern_vertices: &[VertexId],
        host_vertices: &[VertexId],
        g: &MultiGraph,
        h: &MultiGraph,
        map: &mut BTreeMap<VertexId, VertexId>,
        taken: &mut BTreeSet<VertexId>,
        run: &mut dyn FnMut(&BTreeMap<VertexId, VertexId>) -> Option<SubdivisionModel>,
    ) -> Option<SubdivisionModel> {
        if idx == pattern_vertices.len() {
            return run(map);
        }
        let hv = pattern_vertices[idx];
        for &gv in host_vertices {
            if taken.contains(&gv) || g.degree(gv) < h.degree(hv) {
                continue;
            }
            taken.insert(gv);
            map.insert(hv, gv);
            if let Some(model) = assign(
                idx + 1,
                pattern_vertices,
                host_vertices,
                g,
                h,
                map,
                taken,
                run,
            ) {
                return Some(model);
            }
            map.remove(&hv);
            taken.remove(&gv);
        }
        None
    }

    let mut map = BTreeMap::new();
    let mut taken = BTreeSet::new();
    let mut run = |vertex_map: &BTreeMap<VertexId, VertexId>| -> Option<SubdivisionModel> {
        let router = Router {
            g,
            pattern_edges: &pattern_edges,
            vertex_map,
            hard_blocked: blocked_branch
                .iter()
                .map(|hv| vertex_map[hv])
                .collect(),
        };
        let mut used_vertices = BTreeSet::new();
        let mut used_edges = BTreeSet::new();
        let mut images = BTreeMap::new();
        if router.route(0, &mut used_vertices, &mut used_edges, &mut images) {
            Some(SubdivisionModel {
                vertex_map: vertex_map.clone(),
                edge_map: images,
            })
        } else {
            None
        }
    };
    let found = assign(
        0,
        &pattern_vertices,
        &host_vertices,
        g,
        h,
        &mut map,
        &mut taken,
        &mut run,
    );
    if let Some(model) = &found {
        debug_assert!(verify_subdivision(g, h, model).expect("model ids valid").ok());
    }
    Ok(found)
}
