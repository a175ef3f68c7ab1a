//! Disjoint-path computations via unit-capacity flows.
//!
//! `max_disjoint_paths` answers the Menger question for vertex sets: a
//! maximum family of fully vertex-disjoint paths from `src` to `dst`
//! together with a matching minimum vertex cut. The cut returned is the
//! sink-side-minimal one, which downstream decomposition code relies on.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use super::{EdgeId, GraphError, MultiGraph, VertexId};

const INF: i64 = i64::MAX / 4;

/// A small deterministic max-flow network (augmenting BFS, unit steps).
/// Arcs are stored in pairs: arc `i` and its reverse `i ^ 1`.
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds `from -> to` with capacity `cap` (reverse capacity 0) and
    /// returns the arc index.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let idx = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.adj[from].push(idx);
        self.to.push(from);
        self.cap.push(0);
        self.adj[to].push(idx + 1);
        idx
    }

    /// Adds an undirected unit-capacity edge (each direction is the
    /// other's reverse) and returns the forward arc index.
    pub(crate) fn add_undirected_unit(&mut self, a: usize, b: usize) -> usize {
        let idx = self.to.len();
        self.to.push(b);
        self.cap.push(1);
        self.adj[a].push(idx);
        self.to.push(a);
        self.cap.push(1);
        self.adj[b].push(idx + 1);
        idx
    }

    /// Runs augmenting-path max flow from `s` to `t`, one unit per round,
    /// and returns the flow value. Deterministic: BFS scans arcs in
    /// insertion order.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut pred: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut queue = VecDeque::new();
            queue.push_back(s);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            'bfs: while let Some(x) = queue.pop_front() {
                for &a in &self.adj[x] {
                    let y = self.to[a];
                    if !seen[y] && self.cap[a] > 0 {
                        seen[y] = true;
                        pred[y] = Some(a);
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut bottleneck = INF;
            let mut x = t;
            while x != s {
                let a = pred[x].expect("predecessor exists on augmenting path");
                bottleneck = bottleneck.min(self.cap[a]);
                x = self.to[a ^ 1];
            }
            let mut x = t;
            while x != s {
                let a = pred[x].expect("predecessor exists on augmenting path");
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                x = self.to[a ^ 1];
            }
            total += bottleneck;
        }
    }

    /// After max_flow: the set of nodes with a residual path TO `t`.
    pub(crate) fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let mut reach = vec![false; self.adj.len()];
        reach[t] = true;
        let mut queue = VecDeque::new();
        queue.push_back(t);
        while let Some(y) = queue.pop_front() {
            // x reaches y when the arc x -> y has residual capacity; scan
            // y's incident arcs and look at their reverses.
            for &a in &self.adj[y] {
                let x = self.to[a];
                if !reach[x] && self.cap[a ^ 1] > 0 {
                    reach[x] = true;
                    queue.push_back(x);
                }
            }
        }
        reach
    }

    /// Net flow pushed along arc `a` (forward arcs only make sense here).
    pub(crate) fn flow(&self, a: usize, original_cap: i64) -> i64 {
        original_cap - self.cap[a]
    }
}

/// One path of a disjoint family: vertices in order plus the edge ids
/// used between consecutive vertices (empty for a one-vertex path).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DisjointPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// A maximum disjoint-path family with a matching minimum vertex cut
/// (Menger: `paths.len() == cut.len()`).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DisjointPaths {
    pub paths: Vec<DisjointPath>,
    pub cut: Vec<VertexId>,
}

impl DisjointPaths {
    pub fn count(&self) -> usize {
        self.paths.len()
    }
}

/// Maximum family of fully vertex-disjoint paths with first vertex in
/// `src` and last in `dst`; vertices in `src ∩ dst` form one-vertex
/// paths. Also returns the sink-side-minimal minimum vertex cut
/// separating `src` from `dst` (cut vertices may belong to either set).
pub fn max_disjoint_paths(
    g: &MultiGraph,
    src: &BTreeSet<VertexId>,
    dst: &BTreeSet<VertexId>,
) -> Result<DisjointPaths, GraphError> {
    for &v in src.iter().chain(dst.iter()) {
        if !g.has_vertex(v) {
            return Err(GraphError::UnknownVertex { v });
        }
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let index = |v: VertexId| verts.binary_search(&v).expect("vertex present");
    let n = verts.len();
    let v_in = |i: usize| 2 * i;
    let v_out = |i: usize| 2 * i + 1;
    let s = 2 * n;
    let t = 2 * n + 1;

    let mut net = FlowNetwork::new(2 * n + 2);
    let mut internal_arc = vec![usize::MAX; n];
    for i in 0..n {
        internal_arc[i] = net.add_arc(v_in(i), v_out(i), 1);
    }
    // Each graph edge yields one labeled arc per direction, capacity
    // unbounded: the unit vertex capacities do all the limiting, so the
    // minimum cut consists of vertices only.
    let mut arc_edge: Vec<(usize, EdgeId)> = Vec::new();
    for (e, (u, v)) in g.edges() {
        let (ui, vi) = (index(u), index(v));
        arc_edge.push((net.add_arc(v_out(ui), v_in(vi), INF), e));
        arc_edge.push((net.add_arc(v_out(vi), v_in(ui), INF), e));
    }
    for &v in src {
        net.add_arc(s, v_in(index(v)), INF);
    }
    for &v in dst {
        net.add_arc(v_out(index(v)), t, INF);
    }

    let value = net.max_flow(s, t);
    debug_assert!(value < INF / 2, "flow must be finite");

    // Sink-side-minimal cut: vertices whose internal arc crosses from
    // the non-reaching side into the sink-reaching side of the residual.
    let reach = net.reaches_sink(t);
    let cut: Vec<VertexId> = (0..n)
        .filter(|&i| !reach[v_in(i)] && reach[v_out(i)])
        .map(|i| verts[i])
        .collect();

    // Decompose the unit flow into paths, following flow-carrying arcs.
    let edge_of = |arc: usize| -> Option<EdgeId> {
        arc_edge
            .binary_search_by_key(&arc, |&(a, _)| a)
            .ok()
            .map(|pos| arc_edge[pos].1)
    };
    let mut used = vec![false; net.to.len()];
    let mut paths = Vec::new();
    for &v in src {
        // Each unit leaving the source through v_in starts one path.
        loop {
            let mut here = v_in(index(v));
            if net.flow(internal_arc[index(v)], 1) == 0 {
                break;
            }
            // Claim this unit by walking until the sink side, marking arcs.
            let mut vertex_seq = Vec::new();
            let mut edge_seq = Vec::new();
            let mut progressed = false;
            'walk: loop {
                // here is some v_in; traverse the internal arc.
                let i = here / 2;
                let ia = internal_arc[i];
                if used[ia] || net.flow(ia, 1) == 0 {
                    break 'walk;
                }
                used[ia] = true;
                vertex_seq.push(verts[i]);
                progressed = true;
                // From v_out, either stop (terminal) or continue along a
                // flowful edge arc not yet claimed.
                let out = v_out(i);
                let mut next = None;
                for &a in &net.adj[out] {
                    if a % 2 == 0 && !used[a] {
                        if let Some(e) = edge_of(a) {
                            if net.flow(a, INF) > 0 {
                                next = Some((a, e));
                                break;
                            }
                        }
                    }
                }
                match next {
                    Some((a, e)) => {
                        used[a] = true;
                        edge_seq.push(e);
                        here = net.to[a];
                    }
                    None => break 'walk,
                }
            }
            if !progressed {
                break;
            }
            debug_assert!(
                dst.contains(vertex_seq.last().expect("nonempty path")),
                "flow path must end in dst"
            );
            paths.push(DisjointPath {
                vertices: vertex_seq,
                edges: edge_seq,
            });
        }
    }
    paths.sort_by(|p, q| p.vertices.cmp(&q.vertices));
    debug_assert_eq!(paths.len(), value as usize);
    debug_assert_eq!(cut.len(), value as usize, "Menger equality");
    Ok(DisjointPaths { paths, cut })
}

/// Maximum number of pairwise edge-disjoint paths between two distinct
/// vertices (loops are useless on paths and ignored).
pub fn edge_disjoint_path_count(
    g: &MultiGraph,
    u: VertexId,
    v: VertexId,
) -> Result<usize, GraphError> {
    if !g.has_vertex(u) {
        return Err(GraphError::UnknownVertex { v: u });
    }
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex { v });
    }
    assert_ne!(u, v, "edge_disjoint_path_count needs distinct endpoints");
    let verts: Vec<VertexId> = g.vertices().collect();
    let index = |x: VertexId| verts.binary_search(&x).expect("vertex present");
    let mut net = FlowNetwork::new(verts.len());
    for (_, (a, b)) in g.edges() {
        if a != b {
            net.add_undirected_unit(index(a), index(b));
        }
    }
    Ok(net.max_flow(index(u), index(v)) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use itertools::Itertools;

    fn set(vs: impl IntoIterator<Item = VertexId>) -> BTreeSet<VertexId> {
        vs.into_iter().collect()
    }

    /// Exhaustive minimum vertex cut: smallest X ⊆ V such that G − X has
    /// no src−dst path (vertices of src/dst may be deleted too).
    fn brute_force_min_cut(
        g: &MultiGraph,
        src: &BTreeSet<VertexId>,
        dst: &BTreeSet<VertexId>,
    ) -> usize {
        let verts: Vec<VertexId> = g.vertices().collect();
        for size in 0..=verts.len() {
            for cut in verts.iter().copied().combinations(size) {
                let cut_set: BTreeSet<_> = cut.into_iter().collect();
                let reduced = g.without_vertices(&cut_set);
                let live_src: BTreeSet<_> = src.difference(&cut_set).copied().collect();
                let live_dst: BTreeSet<_> = dst.difference(&cut_set).copied().collect();
                let mut reachable = live_src.clone();
                let mut stack: Vec<_> = live_src.iter().copied().collect();
                while let Some(x) = stack.pop() {
                    for y in reduced.neighbors(x) {
                        if reachable.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                if reachable.is_disjoint(&live_dst) {
                    return size;
                }
            }
        }
        verts.len()
    }

    fn assert_family_valid(
        g: &MultiGraph,
        src: &BTreeSet<VertexId>,
        dst: &BTreeSet<VertexId>,
        result: &DisjointPaths,
    ) {
        let mut seen_vertices = BTreeSet::new();
        for path in &result.paths {
            assert!(!path.vertices.is_empty());
            assert!(src.contains(&path.vertices[0]));
            assert!(dst.contains(path.vertices.last().unwrap()));
            assert_eq!(path.edges.len() + 1, path.vertices.len());
            for (i, &e) in path.edges.iter().enumerate() {
                let (a, b) = g.endpoints(e).unwrap();
                let (x, y) = (path.vertices[i], path.vertices[i + 1]);
                assert!((a, b) == (x, y) || (a, b) == (y, x));
            }
            for &v in &path.vertices {
                assert!(seen_vertices.insert(v), "vertex {v} reused across paths");
            }
        }
        // The returned cut must separate src from dst.
        let cut_set: BTreeSet<_> = result.cut.iter().copied().collect();
        let reduced = g.without_vertices(&cut_set);
        let live_src: BTreeSet<_> = src.difference(&cut_set).copied().collect();
        let live_dst: BTreeSet<_> = dst.difference(&cut_set).copied().collect();
        let mut reachable = live_src.clone();
        let mut stack: Vec<_> = live_src.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for y in reduced.neighbors(x) {
                if reachable.insert(y) {
                    stack.push(y);
                }
            }
        }
        assert!(reachable.is_disjoint(&live_dst), "cut fails to separate");
        assert_eq!(result.cut.len(), result.paths.len(), "Menger equality");
    }

    #[test]
    fn single_vertex_sides_cap_the_family_at_one() {
        // Paths are fully vertex-disjoint, endpoints included, so a
        // one-vertex source admits exactly one path however connected
        // the graph is.
        let g = fixtures::complete(4);
        let r = max_disjoint_paths(&g, &set([0]), &set([1])).unwrap();
        assert_eq!(r.count(), 1);
        assert_family_valid(&g, &set([0]), &set([1]), &r);
    }

    #[test]
    fn bipartite_sides_route_in_parallel() {
        let g = fixtures::complete_bipartite(3, 3);
        let r = max_disjoint_paths(&g, &set([0, 1, 2]), &set([3, 4, 5])).unwrap();
        assert_eq!(r.count(), 3);
        assert_family_valid(&g, &set([0, 1, 2]), &set([3, 4, 5]), &r);
    }

    #[test]
    fn cycle_gives_two_routes() {
        let g = fixtures::cycle(4);
        let r = max_disjoint_paths(&g, &set([0, 1]), &set([2, 3])).unwrap();
        assert_eq!(r.count(), 2);
        assert_family_valid(&g, &set([0, 1]), &set([2, 3]), &r);
    }

    #[test]
    fn shared_vertices_become_one_vertex_paths() {
        let g = fixtures::complete(4);
        let x = set([1, 3]);
        let r = max_disjoint_paths(&g, &x, &x).unwrap();
        assert_eq!(r.count(), 2);
        for p in &r.paths {
            assert_eq!(p.vertices.len(), 1);
            assert!(p.edges.is_empty());
        }
    }

    #[test]
    fn star_center_cuts_everything() {
        let g = fixtures::star(5);
        let r = max_disjoint_paths(&g, &set([1, 2]), &set([3, 4, 5])).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.cut, vec![0], "the hub is the sink-side-minimal cut");
    }

    #[test]
    fn empty_sides_give_empty_family() {
        let g = fixtures::complete(4);
        let r = max_disjoint_paths(&g, &set([]), &set([0])).unwrap();
        assert_eq!(r.count(), 0);
        assert!(r.cut.is_empty());
    }

    #[test]
    fn unknown_vertex_is_an_error() {
        let g = fixtures::complete(3);
        assert!(max_disjoint_paths(&g, &set([7]), &set([0])).is_err());
    }

    #[test]
    fn parallel_edges_do_not_add_vertex_disjoint_paths() {
        let mut g = MultiGraph::with_vertices(3);
        g.add_edge(0, 1);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let r = max_disjoint_paths(&g, &set([0]), &set([2])).unwrap();
        assert_eq!(r.count(), 1);
    }

    #[test]
    fn matches_exhaustive_min_cut_on_fixture_zoo() {
        let mut zoo: Vec<(MultiGraph, BTreeSet<usize>, BTreeSet<usize>)> = vec![
            (fixtures::complete(5), set([0]), set([4])),
            (fixtures::complete(5), set([0, 1]), set([3, 4])),
            (fixtures::petersen(), set([0]), set([7])),
            (fixtures::grid(3, 3), set([0, 1, 2]), set([6, 7, 8])),
            (fixtures::grid(2, 4), set([0]), set([7])),
            (fixtures::cube(), set([0]), set([7])),
            (fixtures::star(6), set([1, 2, 3]), set([4, 5, 6])),
            (fixtures::wheel(5), set([1]), set([3])),
            (fixtures::path(6), set([0, 5]), set([2])),
            (fixtures::complete_bipartite(2, 3), set([0]), set([1])),
        ];
        // A few irregular graphs with loops and parallels.
        let mut weird = fixtures::grid(2, 3);
        weird.add_edge(0, 0);
        weird.add_edge(0, 4);
        weird.add_edge(0, 4);
        zoo.push((weird, set([0, 1]), set([5])));
        let mut overlap = fixtures::cycle(5);
        overlap.add_edge(0, 2);
        zoo.push((overlap, set([0, 1]), set([1, 3])));

        for (g, src, dst) in zoo {
            let r = max_disjoint_paths(&g, &src, &dst).unwrap();
            assert_family_valid(&g, &src, &dst, &r);
            assert_eq!(
                r.count(),
                brute_force_min_cut(&g, &src, &dst),
                "flow disagrees with exhaustive cut search"
            );
        }
    }

    #[test]
    fn deterministic_output() {
        let g = fixtures::petersen();
        let a = max_disjoint_paths(&g, &set([0, 1]), &set([7, 8, 9])).unwrap();
        let b = max_disjoint_paths(&g, &set([0, 1]), &set([7, 8, 9])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn edge_disjoint_counts() {
        assert_eq!(edge_disjoint_path_count(&fixtures::cycle(4), 0, 2).unwrap(), 2);
        assert_eq!(edge_disjoint_path_count(&fixtures::path(3), 0, 2).unwrap(), 1);
        assert_eq!(edge_disjoint_path_count(&fixtures::complete(4), 0, 3).unwrap(), 3);
        let mut doubled = fixtures::path(2);
        doubled.add_edge(0, 1);
        assert_eq!(edge_disjoint_path_count(&doubled, 0, 1).unwrap(), 2);
    }
}
