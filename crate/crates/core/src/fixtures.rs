//! Standard small graphs used by tests, benchmarks and the CLI examples.
//!
//! All builders number vertices `0..n` and assign edge ids in the order
//! the edges are listed here, so fixtures are stable across runs.

use crate::graph::MultiGraph;

/// Complete graph K_n; edges in lexicographic pair order.
pub fn complete(n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// Path with `n` vertices and `n-1` edges.
pub fn path(n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for v in 1..n {
        g.add_edge(v - 1, v);
    }
    g
}

/// Cycle with `n ≥ 3` vertices (n = 1 gives a loop, n = 2 a parallel pair).
pub fn cycle(n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    if n == 0 {
        return g;
    }
    for v in 0..n {
        g.add_edge(v, (v + 1) % n);
    }
    g
}

/// Star K_{1,k}: center 0, leaves 1..=k.
pub fn star(k: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(k + 1);
    for v in 1..=k {
        g.add_edge(0, v);
    }
    g
}

/// Complete bipartite K_{a,b}: parts 0..a and a..a+b.
pub fn complete_bipartite(a: usize, b: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(a + b);
    for u in 0..a {
        for v in a..(a + b) {
            g.add_edge(u, v);
        }
    }
    g
}

/// Wheel: hub 0 joined to a rim cycle 1..=n.
pub fn wheel(n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n + 1);
    for v in 1..=n {
        g.add_edge(0, v);
    }
    for v in 1..=n {
        let w = if v == n { 1 } else { v + 1 };
        g.add_edge(v, w);
    }
    g
}

/// r-by-c grid; vertex (i, j) is `i * c + j`, row edges before column
/// edges, both in row-major order.
pub fn grid(r: usize, c: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(r * c);
    for i in 0..r {
        for j in 0..c {
            if j + 1 < c {
                g.add_edge(i * c + j, i * c + j + 1);
            }
        }
    }
    for i in 0..r {
        for j in 0..c {
            if i + 1 < r {
                g.add_edge(i * c + j, (i + 1) * c + j);
            }
        }
    }
    g
}

/// The cube graph Q₃: vertices are 3-bit strings, edges flip one bit.
pub fn cube() -> MultiGraph {
    let mut g = MultiGraph::with_vertices(8);
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                g.add_edge(v, w);
            }
        }
    }
    g
}

/// The octahedron K_{2,2,2}: complete graph on 6 vertices minus the
/// perfect matching {0-3, 1-4, 2-5}.
pub fn octahedron() -> MultiGraph {
    let mut g = MultiGraph::with_vertices(6);
    for u in 0..6 {
        for v in (u + 1)..6 {
            if v != u + 3 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10,
/// spokes i - (i+5).
pub fn petersen() -> MultiGraph {
    let mut g = MultiGraph::with_vertices(10);
    for v in 0..5 {
        g.add_edge(v, (v + 1) % 5);
    }
    for v in 0..5 {
        g.add_edge(5 + v, 5 + (v + 2) % 5);
    }
    for v in 0..5 {
        g.add_edge(v, v + 5);
    }
    g
}
