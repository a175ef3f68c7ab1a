//! Separation enumeration, tangle axioms, tangle enumeration, and the
//! tangle-level relations (restriction, induction, conformality, freeness,
//! minor control).
//!
//! A tangle of order θ orients every separation of order < θ so that no
//! three chosen A-sides cover the whole graph and no A-side spans every
//! vertex. Enumeration searches orientation assignments with constraint
//! propagation, then re-verifies each candidate against the axioms, so the
//! output is trustworthy even if the pruning were wrong.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, MultiGraph, Separation, SubgraphRef, VertexId};
use crate::guard::{GuardError, Guards};
use crate::minor::{verify_minor, MinorModel, ModelError};

/// A tangle: an orientation of all low-order separations. Members are
/// kept sorted by `Separation::sort_key` and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tangle {
    pub order: usize,
    pub members: Vec<Separation>,
}

impl Tangle {
    pub fn new(order: usize, mut members: Vec<Separation>) -> Self {
        members.sort_by_key(|s| s.sort_key());
        members.dedup();
        Tangle { order, members }
    }

    /// Members of order below `new_order` form a tangle of that order,
    /// conformal with the original.
    pub fn truncate(&self, new_order: usize) -> Result<Tangle, TangleError> {
        if new_order == 0 || new_order > self.order {
            return Err(TangleError::BadTruncationOrder {
                requested: new_order,
                theta: self.order,
            });
        }
        Ok(Tangle::new(
            new_order,
            self.members
                .iter()
                .filter(|s| s.order() < new_order)
                .cloned()
                .collect(),
        ))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TangleError {
    #[error("a tangle must have positive order")]
    ZeroOrder,
    #[error("member has order {order}, which is not below the tangle order {theta}")]
    MemberOrderTooHigh { order: usize, theta: usize },
    #[error("cannot remove {removed} vertices from a tangle of order {theta}")]
    RemovalTooLarge { removed: usize, theta: usize },
    #[error("truncation to order {requested} is invalid for a tangle of order {theta}")]
    BadTruncationOrder { requested: usize, theta: usize },
    #[error("induced tangles require order at least 2, got {theta}")]
    InductionOrderTooSmall { theta: usize },
    #[error("freeness at order {k} is not determined by a tangle of order {theta}")]
    FreenessOrderTooHigh { k: usize, theta: usize },
    #[error("the supplied minor model is invalid")]
    InvalidModel,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Guard(#[from] GuardError),
}

/// First broken axiom found, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangleViolation {
    /// (T1) this separation appears in neither orientation.
    NotOriented { separation: Separation },
    /// (T1) this separation appears in both orientations.
    BothOrientations { separation: Separation },
    /// (T3) this member's A-side spans every vertex.
    FullSide { member: Separation },
    /// (T2) these three members (repetition allowed) cover the graph.
    CoveringTriple {
        first: Separation,
        second: Separation,
        third: Separation,
    },
}

impl std::fmt::Display for TangleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TangleViolation::NotOriented { .. } => {
                write!(f, "a low-order separation is oriented in neither direction")
            }
            TangleViolation::BothOrientations { .. } => {
                write!(f, "a separation is oriented in both directions")
            }
            TangleViolation::FullSide { .. } => {
                write!(f, "a member's A-side spans every vertex")
            }
            TangleViolation::CoveringTriple { .. } => {
                write!(f, "three members cover the whole graph")
            }
        }
    }
}

/// Axiom-check outcome; `ok()` is true when no violation was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleReport {
    pub violation: Option<TangleViolation>,
}

impl TangleReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// All separations of order below `max_order`, both orientations, in
/// `sort_key` order. The construction assigns a separator set M, sends
/// each component of G − M wholly to one side, and assigns each edge
/// inside M (loops included) to one side; distinct assignments yield
/// distinct separations, so no deduplication is needed.
pub fn enumerate_separations(
    g: &MultiGraph,
    max_order: usize,
    guards: &Guards,
) -> Result<Vec<Separation>, TangleError> {
    guards.check_separation_vertices(g.num_vertices())?;
    let verts: Vec<VertexId> = g.vertices().collect();
    let all_vertices: BTreeSet<VertexId> = verts.iter().copied().collect();
    let mut out = Vec::new();
    for m_size in 0..max_order {
        if m_size > verts.len() {
            break;
        }
        for m in verts.iter().copied().combinations(m_size) {
            let m_set: BTreeSet<VertexId> = m.into_iter().collect();
            let reduced = g.without_vertices(&m_set);
            let comps = reduced.components();
            let m_edges: Vec<EdgeId> = g
                .edges()
                .filter(|&(_, (u, v))| m_set.contains(&u) && m_set.contains(&v))
                .map(|(e, _)| e)
                .collect();
            assert!(
                comps.len() + m_edges.len() < 60,
                "separation enumeration blow-up: {} components and {} separator edges",
                comps.len(),
                m_edges.len()
            );
            // Edges incident to each component (their other end is in the
            // component or in M, so they follow the component's side).
            let comp_of: BTreeMap<VertexId, usize> = comps
                .iter()
                .enumerate()
                .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
                .collect();
            let mut comp_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); comps.len()];
            for (e, (u, v)) in g.edges() {
                let c = comp_of.get(&u).or_else(|| comp_of.get(&v));
                if let Some(&i) = c {
                    comp_edges[i].push(e);
                }
            }
            for comp_mask in 0..(1u64 << comps.len()) {
                for edge_mask in 0..(1u64 << m_edges.len()) {
                    let mut va = m_set.clone();
                    let mut vb = m_set.clone();
                    let mut ea = BTreeSet::new();
                    let mut eb = BTreeSet::new();
                    for (i, comp) in comps.iter().enumerate() {
                        if comp_mask >> i & 1 == 1 {
                            va.extend(comp.iter().copied());
                            ea.extend(comp_edges[i].iter().copied());
                        } else {
                            vb.extend(comp.iter().copied());
                            eb.extend(comp_edges[i].iter().copied());
                        }
                    }
                    for (i, &e) in m_edges.iter().enumerate() {
                        if edge_mask >> i & 1 == 1 {
                            ea.insert(e);
                        } else {
                            eb.insert(e);
                        }
                    }
                    out.push(Separation::new(
                        SubgraphRef::new(va, ea),
                        SubgraphRef::new(vb, eb),
                    ));
                }
            }
        }
    }
    let _ = &all_vertices;
    out.sort_by_key(|s| s.sort_key());
    debug_assert!(
        out.iter().tuple_windows().all(|(a, b)| a != b),
        "separation construction must be duplicate-free"
    );
    Ok(out)
}

/// A side's vertex and edge sets as bit masks, for fast covering tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SideMask {
    v: u64,
    e: [u64; 4],
    vcount: u32,
}

impl SideMask {
    fn union_covers(a: &SideMask, b: &SideMask, c: &SideMask, full: &SideMask) -> bool {
        if a.v | b.v | c.v != full.v {
            return false;
        }
        (0..4).all(|i| a.e[i] | b.e[i] | c.e[i] == full.e[i])
    }
}

struct MaskSpace {
    vertex_index: BTreeMap<VertexId, usize>,
    edge_index: BTreeMap<EdgeId, usize>,
    full: SideMask,
}

impl MaskSpace {
    fn build(g: &MultiGraph) -> MaskSpace {
        assert!(g.num_vertices() <= 64, "mask space supports up to 64 vertices");
        assert!(g.num_edges() <= 256, "mask space supports up to 256 edges");
        let vertex_index: BTreeMap<VertexId, usize> =
            g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let edge_index: BTreeMap<EdgeId, usize> =
            g.edge_ids().enumerate().map(|(i, e)| (e, i)).collect();
        let mut full = SideMask {
            v: 0,
            e: [0; 4],
            vcount: vertex_index.len() as u32,
        };
        for &i in vertex_index.values() {
            full.v |= 1 << i;
        }
        for &i in edge_index.values() {
            full.e[i / 64] |= 1 << (i % 64);
        }
        MaskSpace {
            vertex_index,
            edge_index,
            full,
        }
    }

    fn side(&self, side: &SubgraphRef) -> SideMask {
        let mut m = SideMask {
            v: 0,
            e: [0; 4],
            vcount: side.vertices.len() as u32,
        };
        for v in &side.vertices {
            m.v |= 1 << self.vertex_index[v];
        }
        for e in &side.edges {
            let i = self.edge_index[e];
            m.e[i / 64] |= 1 << (i % 64);
        }
        m
    }
}

/// Checks the tangle axioms. The report names the first violated axiom
/// in the order (T1), (T3), (T2) with witness separations. Members must
/// be valid separations of order below θ or the call errors.
pub fn is_tangle(g: &MultiGraph, t: &Tangle, guards: &Guards) -> Result<TangleReport, TangleError> {
    if t.order == 0 {
        return Err(TangleError::ZeroOrder);
    }
    for member in &t.members {
        member.validate(g)?;
        if member.order() >= t.order {
            return Err(TangleError::MemberOrderTooHigh {
                order: member.order(),
                theta: t.order,
            });
        }
    }
    let member_set: BTreeSet<&Separation> = t.members.iter().collect();

    // (T1): every low-order separation in exactly one orientation.
    let all = enumerate_separations(g, t.order, guards)?;
    for s in &all {
        let flipped = s.flip();
        if s.sort_key() > flipped.sort_key() {
            continue; // handle each orientation pair once
        }
        let here = member_set.contains(s);
        let there = s != &flipped && member_set.contains(&flipped);
        match (here, there) {
            (true, true) => {
                return Ok(TangleReport {
                    violation: Some(TangleViolation::BothOrientations {
                        separation: s.clone(),
                    }),
                })
            }
            (false, false) => {
                return Ok(TangleReport {
                    violation: Some(TangleViolation::NotOriented {
                        separation: s.clone(),
                    }),
                })
            }
            _ => {}
        }
    }

    // (T3): no member's A-side spans every vertex.
    let space = MaskSpace::build(g);
    for member in &t.members {
        if member.a.vertices.len() == g.num_vertices() {
            return Ok(TangleReport {
                violation: Some(TangleViolation::FullSide {
                    member: member.clone(),
                }),
            });
        }
    }

    // (T2): no three members (with repetition) cover the graph. Members
    // are scanned largest-A-side first so the vertex-count bound can cut
    // the triple loops early.
    let mut masked: Vec<(SideMask, &Separation)> = t
        .members
        .iter()
        .map(|m| (space.side(&m.a), m))
        .collect();
    masked.sort_by_key(|(mask, _)| std::cmp::Reverse(mask.vcount));
    let n = space.full.vcount;
    for i in 0..masked.len() {
        if 3 * masked[i].0.vcount < n {
            break;
        }
        for j in i..masked.len() {
            if masked[i].0.vcount + 2 * masked[j].0.vcount < n {
                break;
            }
            for k in j..masked.len() {
                if masked[i].0.vcount + masked[j].0.vcount + masked[k].0.vcount < n {
                    break;
                }
                if SideMask::union_covers(&masked[i].0, &masked[j].0, &masked[k].0, &space.full) {
                    return Ok(TangleReport {
                        violation: Some(TangleViolation::CoveringTriple {
                            first: masked[i].1.clone(),
                            second: masked[j].1.clone(),
                            third: masked[k].1.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(TangleReport { violation: None })
}

/// All tangles of the given order, via backtracking over orientation
/// pairs with (T3) forcing and (T2) propagation, re-verified against the
/// axioms before being returned. Deterministic output order.
pub fn enumerate_tangles(
    g: &MultiGraph,
    order: usize,
    guards: &Guards,
) -> Result<Vec<Tangle>, TangleError> {
    if order == 0 {
        return Err(TangleError::ZeroOrder);
    }
    guards.check_tangle_vertices(g.num_vertices())?;
    let seps = enumerate_separations(g, order, guards)?;
    let space = MaskSpace::build(g);

    // Orientation pairs, canonical side first.
    let sep_set: BTreeSet<&Separation> = seps.iter().collect();
    let mut pairs: Vec<[Separation; 2]> = Vec::new();
    for s in &seps {
        let f = s.flip();
        if s.sort_key() <= f.sort_key() {
            debug_assert!(*s == f || sep_set.contains(&f), "flip must be enumerated");
            pairs.push([s.clone(), f]);
        }
    }
    let masks: Vec<[SideMask; 2]> = pairs
        .iter()
        .map(|[a, b]| [space.side(&a.a), space.side(&b.a)])
        .collect();
    // (T3) pre-pass: an orientation whose A-side spans all vertices can
    // never be chosen.
    let full_v = space.full.v;
    let t3_banned: Vec<[bool; 2]> = masks
        .iter()
        .map(|[a, b]| [a.v == full_v, b.v == full_v])
        .collect();
    if t3_banned.iter().any(|b| b[0] && b[1]) {
        return Ok(Vec::new());
    }

    struct Dfs<'a> {
        pairs: &'a [[Separation; 2]],
        masks: &'a [[SideMask; 2]],
        t3_banned: &'a [[bool; 2]],
        full: SideMask,
        // chosen A-side masks sorted descending by vertex count
        chosen: Vec<(SideMask, usize)>,
        state: Vec<Option<u8>>,
        found: Vec<Vec<usize2>>,
    }
    // Each found assignment is recorded as chosen orientation per pair.
    type usize2 = u8;

    impl Dfs<'_> {
        /// Would adding `cand` create a covering triple with the chosen
        /// members (using `cand` up to three times)?
        fn creates_cover(&self, cand: &SideMask) -> bool {
            let n = self.full.vcount;
            // Probe list: candidate first, then chosen in descending size.
            let probe = |a: &SideMask, b: &SideMask| -> bool {
                SideMask::union_covers(cand, a, b, &self.full)
            };
            if probe(cand, cand) {
                return true;
            }
            for (i, (m1, _)) in self.chosen.iter().enumerate() {
                if cand.vcount + cand.vcount + m1.vcount < n {
                    break;
                }
                if probe(cand, m1) {
                    return true;
                }
                let _ = i;
            }
            for i in 0..self.chosen.len() {
                let m1 = &self.chosen[i].0;
                if cand.vcount + 2 * m1.vcount < n {
                    break;
                }
                for j in i..self.chosen.len() {
                    let m2 = &self.chosen[j].0;
                    if cand.vcount + m1.vcount + m2.vcount < n {
                        break;
                    }
                    if probe(m1, m2) {
                        return true;
                    }
                }
            }
            false
        }

        fn choose(&mut self, pair: usize, orient: u8) -> bool {
            debug_assert!(self.state[pair].is_none());
            let mask = self.masks[pair][orient as usize];
            if self.creates_cover(&mask) {
                return false;
            }
            self.state[pair] = Some(orient);
            let pos = self
                .chosen
                .partition_point(|(m, _)| m.vcount >= mask.vcount);
            self.chosen.insert(pos, (mask, pair));
            true
        }

        fn unchoose(&mut self, pair: usize) {
            self.state[pair] = None;
            let pos = self
                .chosen
                .iter()
                .position(|&(_, p)| p == pair)
                .expect("chosen entry present");
            self.chosen.remove(pos);
        }

        /// Forces all decidable pairs; returns the forced pair list, or
        /// None on contradiction (already undone).
        fn propagate(&mut self) -> Option<Vec<usize>> {
            let mut trail = Vec::new();
            loop {
                let mut changed = false;
                for p in 0..self.pairs.len() {
                    if self.state[p].is_some() {
                        continue;
                    }
                    let banned = [
                        self.t3_banned[p][0] || self.creates_cover(&self.masks[p][0]),
                        self.t3_banned[p][1] || self.creates_cover(&self.masks[p][1]),
                    ];
                    match banned {
                        [true, true] => {
                            for &q in trail.iter().rev() {
                                self.unchoose(q);
                            }
                            return None;
                        }
                        [true, false] | [false, true] => {
                            let orient = u8::from(banned[0]);
                            if !self.choose(p, orient) {
                                for &q in trail.iter().rev() {
                                    self.unchoose(q);
                                }
                                return None;
                            }
                            trail.push(p);
                            changed = true;
                        }
                        [false, false] => {}
                    }
                }
                if !changed {
                    return Some(trail);
                }
            }
        }

        fn search(&mut self) {
            let Some(trail) = self.propagate() else {
                return;
            };
            match self.state.iter().position(|s| s.is_none()) {
                None => {
                    self.found
                        .push(self.state.iter().map(|s| s.expect("complete")).collect());
                }
                Some(p) => {
                    for orient in [0u8, 1u8] {
                        if self.t3_banned[p][orient as usize] {
                            continue;
                        }
                        if self.choose(p, orient) {
                            self.search();
                            self.unchoose(p);
                        }
                    }
                }
            }
            for &q in trail.iter().rev() {
                self.unchoose(q);
            }
        }
    }

    let mut dfs = Dfs {
        pairs: &pairs,
        masks: &masks,
        t3_banned: &t3_banned,
        full: space.full,
        chosen: Vec::new(),
        state: vec![None; pairs.len()],
        found: Vec::new(),
    };
    dfs.search();

    let mut out = Vec::new();
    for assignment in dfs.found {
        let members: Vec<Separation> = assignment
            .iter()
            .enumerate()
            .map(|(p, &o)| pairs[p][o as usize].clone())
            .collect();
        let tangle = Tangle::new(order, members);
        let report = is_tangle(g, &tangle, guards)?;
        debug_assert!(report.ok(), "search produced a non-tangle");
        if report.ok() {
            out.push(tangle);
        }
    }
    out.sort_by(|a, b| {
        a.members
            .iter()
            .map(Separation::sort_key)
            .cmp(b.members.iter().map(Separation::sort_key))
    });
    Ok(out)
}

/// The tangle T − Z: members (A − Z, B − Z) of every member whose
/// separator contains Z, at order θ − |Z| in G − Z.
pub fn tangle_minus(
    g: &MultiGraph,
    t: &Tangle,
    z: &BTreeSet<VertexId>,
) -> Result<Tangle, TangleError> {
    if z.len() >= t.order {
        return Err(TangleError::RemovalTooLarge {
            removed: z.len(),
            theta: t.order,
        });
    }
    for &v in z {
        if !g.has_vertex(v) {
            return Err(TangleError::Graph(GraphError::UnknownVertex { v }));
        }
    }
    let members = t
        .members
        .iter()
        .filter(|s| z.iter().all(|v| s.a.vertices.contains(v) && s.b.vertices.contains(v)))
        .map(|s| {
            Separation::new(s.a.minus_vertices(g, z), s.b.minus_vertices(g, z))
        })
        .collect();
    Ok(Tangle::new(t.order - z.len(), members))
}

/// The tangle in the host induced by a tangle of the pattern through a
/// minor model: separations (A, B) of the host, of order below θ, such
/// that some member (A', B') of the pattern tangle satisfies
/// α(E(A')) = E(A) ∩ α(E(H)).
pub fn induced_tangle(
    g: &MultiGraph,
    h: &MultiGraph,
    model: &MinorModel,
    t_h: &Tangle,
    guards: &Guards,
) -> Result<Tangle, TangleError> {
    if t_h.order < 2 {
        return Err(TangleError::InductionOrderTooSmall { theta: t_h.order });
    }
    if !verify_minor(g, h, model)?.ok() {
        return Err(TangleError::InvalidModel);
    }
    let alpha_all: BTreeSet<EdgeId> = model.edge_images.values().copied().collect();
    let member_edge_images: BTreeSet<BTreeSet<EdgeId>> = t_h
        .members
        .iter()
        .map(|s| {
            s.a.edges
                .iter()
                .filter_map(|e| model.edge_images.get(e).copied())
                .collect()
        })
        .collect();
    let members = enumerate_separations(g, t_h.order, guards)?
        .into_iter()
        .filter(|s| {
            let trace: BTreeSet<EdgeId> =
                s.a.edges.intersection(&alpha_all).copied().collect();
            member_edge_images.contains(&trace)
        })
        .collect();
    Ok(Tangle::new(t_h.order, members))
}

/// True when every member of the first tangle is a member of the second
/// (both on the same host graph; members are validated against it).
pub fn is_conformal(
    g: &MultiGraph,
    t_small: &Tangle,
    t_big: &Tangle,
) -> Result<bool, TangleError> {
    for member in t_small.members.iter().chain(t_big.members.iter()) {
        member.validate(g)?;
    }
    let big: BTreeSet<&Separation> = t_big.members.iter().collect();
    Ok(t_small.members.iter().all(|m| big.contains(m)))
}

/// A vertex set is free when no member of order below |X| captures it on
/// the A-side.
pub fn is_free(
    g: &MultiGraph,
    t: &Tangle,
    x: &BTreeSet<VertexId>,
) -> Result<bool, TangleError> {
    for &v in x {
        if !g.has_vertex(v) {
            return Err(TangleError::Graph(GraphError::UnknownVertex { v }));
        }
    }
    Ok(!t
        .members
        .iter()
        .any(|s| s.order() < x.len() && x.is_subset(&s.a.vertices)))
}

/// A vertex is k-free when no member of order below k has it strictly on
/// the A-side (in V(A) − V(B)). k above θ is not determined by t.
pub fn is_k_free_vertex(
    g: &MultiGraph,
    t: &Tangle,
    v: VertexId,
    k: usize,
) -> Result<bool, TangleError> {
    if !g.has_vertex(v) {
        return Err(TangleError::Graph(GraphError::UnknownVertex { v }));
    }
    if k > t.order {
        return Err(TangleError::FreenessOrderTooHigh { k, theta: t.order });
    }
    Ok(!t.members.iter().any(|s| {
        s.order() < k && s.a.vertices.contains(&v) && !s.b.vertices.contains(&v)
    }))
}

/// A tangle controls a minor model when no member of order below |V(H)|
/// captures a whole branch set on its A-side.
pub fn controls_minor(
    g: &MultiGraph,
    h: &MultiGraph,
    t: &Tangle,
    model: &MinorModel,
) -> Result<bool, TangleError> {
    if !verify_minor(g, h, model)?.ok() {
        return Err(TangleError::InvalidModel);
    }
    let bound = h.num_vertices();
    Ok(!t.members.iter().any(|s| {
        s.order() < bound
            && model
                .branch_sets
                .values()
                .any(|branch| branch.vertices.is_subset(&s.a.vertices))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn guards() -> Guards {
        Guards::default()
    }

    /// The orientation of every low-order separation whose B-side spans
    /// all vertices: the classic tangle of a highly connected graph.
    fn big_side_tangle(g: &MultiGraph, order: usize) -> Tangle {
        let members = enumerate_separations(g, order, &guards())
            .unwrap()
            .into_iter()
            .filter(|s| s.b.vertices.len() == g.num_vertices())
            .collect();
        Tangle::new(order, members)
    }

    #[test]
    fn connected_graph_has_two_trivial_separations() {
        let g = fixtures::petersen();
        let seps = enumerate_separations(&g, 1, &guards()).unwrap();
        assert_eq!(seps.len(), 2);
        assert!(seps.iter().any(|s| s.a.vertices.is_empty()));
        assert!(seps.iter().any(|s| s.b.vertices.is_empty()));
    }

    #[test]
    fn two_triangles_split_by_component() {
        let mut g = fixtures::cycle(3);
        let offset = 10;
        for v in 0..3 {
            g.add_vertex(offset + v);
        }
        g.add_edge(10, 11);
        g.add_edge(11, 12);
        g.add_edge(10, 12);
        let seps = enumerate_separations(&g, 1, &guards()).unwrap();
        // Two components, each to either side: four order-0 separations.
        assert_eq!(seps.len(), 4);
        assert!(seps
            .iter()
            .any(|s| s.a.vertices == [0, 1, 2].into() && s.b.vertices == [10, 11, 12].into()));
    }

    #[test]
    fn triangle_separations_have_flips_and_valid_orders() {
        let g = fixtures::cycle(3);
        let seps = enumerate_separations(&g, 2, &guards()).unwrap();
        let set: BTreeSet<_> = seps.iter().cloned().collect();
        assert_eq!(set.len(), seps.len());
        for s in &seps {
            assert!(s.order() < 2);
            assert!(s.validate(&g).is_ok());
            assert!(set.contains(&s.flip()));
        }
        // K3 is 2-connected: order-1 separators leave one component, so
        // one side is just the separator vertex.
        for s in seps.iter().filter(|s| s.order() == 1) {
            let small = s.a.vertices.len().min(s.b.vertices.len());
            assert_eq!(small, 1);
        }
    }

    #[test]
    fn separator_edges_are_assigned_both_ways() {
        // K2 with separator {0,1} puts the edge on either side.
        let g = fixtures::path(2);
        let seps = enumerate_separations(&g, 3, &guards()).unwrap();
        let both_vertices: Vec<_> = seps
            .iter()
            .filter(|s| s.order() == 2)
            .collect();
        assert_eq!(both_vertices.len(), 2);
        assert!(both_vertices.iter().any(|s| s.a.edges.contains(&0)));
        assert!(both_vertices.iter().any(|s| s.b.edges.contains(&0)));
    }

    #[test]
    fn single_vertex_tangle() {
        let g = fixtures::complete(1);
        let tangles = enumerate_tangles(&g, 1, &guards()).unwrap();
        assert_eq!(tangles.len(), 1);
        assert_eq!(tangles[0].members.len(), 1);
        assert!(tangles[0].members[0].a.vertices.is_empty());
        assert!(is_tangle(&g, &tangles[0], &guards()).unwrap().ok());
    }

    #[test]
    fn full_side_member_violates_t3() {
        let g = fixtures::cycle(3);
        let t = Tangle::new(
            1,
            vec![Separation::new(SubgraphRef::whole(&g), SubgraphRef::empty())],
        );
        let report = is_tangle(&g, &t, &guards()).unwrap();
        assert!(matches!(
            report.violation,
            Some(TangleViolation::FullSide { .. })
        ));
    }

    #[test]
    fn unoriented_separation_violates_t1() {
        let g = fixtures::complete(1);
        let t = Tangle::new(1, vec![]);
        let report = is_tangle(&g, &t, &guards()).unwrap();
        assert!(matches!(
            report.violation,
            Some(TangleViolation::NotOriented { .. })
        ));
    }

    #[test]
    fn both_orientations_violate_t1() {
        let g = fixtures::complete(4);
        let mut members = big_side_tangle(&g, 2).members;
        let extra = members[0].flip();
        members.push(extra);
        let t = Tangle::new(2, members);
        let report = is_tangle(&g, &t, &guards()).unwrap();
        assert!(matches!(
            report.violation,
            Some(TangleViolation::BothOrientations { .. })
        ));
    }

    #[test]
    fn member_order_at_theta_is_an_error() {
        let g = fixtures::path(2);
        let seps = enumerate_separations(&g, 3, &guards()).unwrap();
        let high = seps.iter().find(|s| s.order() == 2).unwrap().clone();
        let t = Tangle::new(2, vec![high]);
        assert!(matches!(
            is_tangle(&g, &t, &guards()),
            Err(TangleError::MemberOrderTooHigh { order: 2, theta: 2 })
        ));
    }

    #[test]
    fn k6_small_side_orientation_is_a_tangle() {
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        assert!(is_tangle(&g, &t, &guards()).unwrap().ok());
    }

    #[test]
    fn k4_has_an_order_two_tangle() {
        let g = fixtures::complete(4);
        let tangles = enumerate_tangles(&g, 2, &guards()).unwrap();
        assert_eq!(tangles.len(), 1);
        assert_eq!(tangles[0], big_side_tangle(&g, 2));
    }

    #[test]
    fn single_edge_has_the_edge_tangle() {
        // Both order-2 orientations around the lone edge are forced: the
        // members are the three separations keeping the edge on the
        // B-side. Trees do carry these order-2 tangles.
        let g = fixtures::path(2);
        let tangles = enumerate_tangles(&g, 2, &guards()).unwrap();
        assert_eq!(tangles.len(), 1);
        for member in &tangles[0].members {
            assert!(member.b.edges.contains(&0));
        }
    }

    #[test]
    fn path_tangles_point_at_single_edges() {
        // Each edge of a path yields one order-2 tangle; brute-forced
        // check that the enumeration finds them all and nothing else.
        let g = fixtures::path(3);
        let tangles = enumerate_tangles(&g, 2, &guards()).unwrap();
        assert_eq!(tangles.len(), 2);
        for t in &tangles {
            assert!(is_tangle(&g, t, &guards()).unwrap().ok());
            // All members agree on which single edge stays on the B-side.
            let common: BTreeSet<EdgeId> = t
                .members
                .iter()
                .fold(g.edge_id_set(), |acc, m| {
                    acc.intersection(&m.b.edges).copied().collect()
                });
            assert_eq!(common.len(), 1);
        }
    }

    #[test]
    fn clique_tangles_exist_at_two_thirds_order() {
        for k in 3..=6 {
            let g = fixtures::complete(k);
            let order = 2 * k / 3;
            let tangles = enumerate_tangles(&g, order, &guards()).unwrap();
            assert!(!tangles.is_empty(), "K{k} at order {order}");
        }
    }

    #[test]
    fn tangle_minus_vertex_of_k6() {
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        let z: BTreeSet<_> = [0].into();
        let reduced = tangle_minus(&g, &t, &z).unwrap();
        assert_eq!(reduced.order, 3);
        let g_minus = g.without_vertices(&z);
        assert!(is_tangle(&g_minus, &reduced, &guards()).unwrap().ok());
    }

    #[test]
    fn tangle_minus_nothing_is_identity() {
        let g = fixtures::complete(4);
        let t = big_side_tangle(&g, 2);
        let same = tangle_minus(&g, &t, &BTreeSet::new()).unwrap();
        assert_eq!(same, t);
    }

    #[test]
    fn tangle_minus_rejects_large_removals() {
        let g = fixtures::complete(4);
        let t = big_side_tangle(&g, 2);
        let z: BTreeSet<_> = [0, 1].into();
        assert!(matches!(
            tangle_minus(&g, &t, &z),
            Err(TangleError::RemovalTooLarge { removed: 2, theta: 2 })
        ));
    }

    fn identity_model(g: &MultiGraph) -> MinorModel {
        MinorModel {
            branch_sets: g
                .vertices()
                .map(|v| (v, SubgraphRef::new([v], [])))
                .collect(),
            edge_images: g.edge_ids().map(|e| (e, e)).collect(),
        }
    }

    #[test]
    fn identity_minor_induces_the_same_tangle() {
        let g = fixtures::complete(4);
        let t = big_side_tangle(&g, 2);
        let induced = induced_tangle(&g, &g, &identity_model(&g), &t, &guards()).unwrap();
        assert_eq!(induced, t);
    }

    #[test]
    fn subdivided_k6_carries_the_clique_tangle() {
        // Subdivide edge 0-1 of K6 through a new vertex 6 and transport
        // the order-4 clique tangle through the natural minor model.
        let h = fixtures::complete(6);
        let mut g = fixtures::complete(6);
        let (u, v) = g.endpoints(0).unwrap();
        g.remove_edge(0);
        let mid = g.add_vertex(6);
        let e1 = g.add_edge(u, mid);
        let _e2 = g.add_edge(mid, v);
        let mut model = identity_model(&h);
        model
            .branch_sets
            .insert(u, SubgraphRef::new([u, mid], [e1]));
        model.edge_images.insert(0, _e2);
        assert!(verify_minor(&g, &h, &model).unwrap().ok());
        let t_h = big_side_tangle(&h, 4);
        let induced = induced_tangle(&g, &h, &model, &t_h, &guards()).unwrap();
        assert_eq!(induced.order, 4);
        assert!(is_tangle(&g, &induced, &guards()).unwrap().ok());
    }

    #[test]
    fn induction_needs_order_two() {
        let g = fixtures::complete(1);
        let t = enumerate_tangles(&g, 1, &guards()).unwrap().remove(0);
        assert!(matches!(
            induced_tangle(&g, &g, &identity_model(&g), &t, &guards()),
            Err(TangleError::InductionOrderTooSmall { theta: 1 })
        ));
    }

    #[test]
    fn conformality_on_truncations() {
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        assert!(is_conformal(&g, &t, &t).unwrap());
        let truncated = t.truncate(3).unwrap();
        assert!(is_conformal(&g, &truncated, &t).unwrap());
        assert!(!is_conformal(&g, &t, &truncated).unwrap());
    }

    #[test]
    fn block_tangles_are_not_conformal() {
        // Two disjoint K4 blocks give exactly two order-2 tangles, one
        // per block, and neither contains the other.
        let mut g = fixtures::complete(4);
        for v in 4..8 {
            g.add_vertex(v);
        }
        for u in 4..8 {
            for v in (u + 1)..8 {
                g.add_edge(u, v);
            }
        }
        let tangles = enumerate_tangles(&g, 2, &guards()).unwrap();
        assert_eq!(tangles.len(), 2);
        assert!(!is_conformal(&g, &tangles[0], &tangles[1]).unwrap());
        assert!(!is_conformal(&g, &tangles[1], &tangles[0]).unwrap());
    }

    #[test]
    fn small_sets_are_free_in_k6() {
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        assert!(is_free(&g, &t, &BTreeSet::new()).unwrap());
        assert!(is_free(&g, &t, &[0, 1, 2].into()).unwrap());
    }

    #[test]
    fn pendant_vertex_with_cut_is_not_free() {
        // K5 plus a pendant vertex 5 hanging off vertex 0. The separation
        // ({0,1,5} | everything) has order 2 and captures {5,0,1}.
        let mut g = fixtures::complete(5);
        g.add_vertex(5);
        g.add_edge(0, 5);
        let tangles = enumerate_tangles(&g, 3, &guards()).unwrap();
        assert_eq!(tangles.len(), 1);
        let t = &tangles[0];
        assert!(!is_free(&g, t, &[5, 0, 1].into()).unwrap());
        assert!(is_free(&g, t, &[1, 2, 3].into()).unwrap());
    }

    #[test]
    fn k_freeness_of_vertices() {
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        for v in 0..6 {
            assert!(is_k_free_vertex(&g, &t, v, 4).unwrap());
            assert!(is_k_free_vertex(&g, &t, v, 0).unwrap());
        }
        assert!(matches!(
            is_k_free_vertex(&g, &t, 0, 5),
            Err(TangleError::FreenessOrderTooHigh { k: 5, theta: 4 })
        ));
    }

    #[test]
    fn pendant_vertex_is_not_two_free() {
        let mut g = fixtures::complete(5);
        g.add_vertex(5);
        g.add_edge(0, 5);
        let t = enumerate_tangles(&g, 3, &guards()).unwrap().remove(0);
        assert!(!is_k_free_vertex(&g, &t, 5, 2).unwrap());
        assert!(is_k_free_vertex(&g, &t, 2, 3).unwrap());
    }

    #[test]
    fn separator_sides_capture_singleton_branch_sets() {
        // Every order-3 separator side of K6 is a member, so singleton
        // branch sets are always captured and the identity K4 model is
        // not controlled by the order-4 tangle.
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        let h = fixtures::complete(4);
        let model = MinorModel {
            branch_sets: (0..4).map(|v| (v, SubgraphRef::new([v], []))).collect(),
            edge_images: h
                .edges()
                .map(|(he, (a, b))| {
                    let ge = g.edges_between(a, b)[0];
                    (he, ge)
                })
                .collect(),
        };
        assert!(verify_minor(&g, &h, &model).unwrap().ok());
        assert!(!controls_minor(&g, &h, &t, &model).unwrap());
    }

    #[test]
    fn two_vertex_branch_sets_are_controlled() {
        // At pattern size 2 only order-<2 members count, and their
        // A-sides are at most single vertices.
        let g = fixtures::complete(6);
        let t = big_side_tangle(&g, 4);
        let mut h = MultiGraph::with_vertices(2);
        h.add_edge(0, 1);
        let e02 = g.edges_between(0, 2)[0];
        let e13 = g.edges_between(1, 3)[0];
        let cross = g.edges_between(2, 3)[0];
        let model = MinorModel {
            branch_sets: [
                (0, SubgraphRef::new([0, 2], [e02])),
                (1, SubgraphRef::new([1, 3], [e13])),
            ]
            .into(),
            edge_images: [(0, cross)].into(),
        };
        assert!(verify_minor(&g, &h, &model).unwrap().ok());
        assert!(controls_minor(&g, &h, &t, &model).unwrap());
    }

    #[test]
    fn tangle_away_from_a_component_does_not_control() {
        // Triangle plus far K4 block; the K4 tangle at order 2 sees the
        // triangle's branch sets inside a small A-side.
        let mut g = fixtures::cycle(3);
        for v in 3..7 {
            g.add_vertex(v);
        }
        for u in 3..7 {
            for v in (u + 1)..7 {
                g.add_edge(u, v);
            }
        }
        let h = fixtures::complete(3);
        let model = identity_model(&fixtures::cycle(3));
        let tangles = enumerate_tangles(&g, 2, &guards()).unwrap();
        let away = tangles
            .iter()
            .find(|t| {
                t.members
                    .iter()
                    .any(|s| s.a.vertices.contains(&0) && s.a.vertices.len() >= 3)
            })
            .expect("tangle pointing at the K4 block");
        assert!(!controls_minor(&g, &h, away, &model).unwrap());
    }

    #[test]
    fn tangle_json_round_trips() {
        let g = fixtures::complete(4);
        let t = big_side_tangle(&g, 2);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.starts_with("{\"order\":2,\"members\":[{\"A\":"));
        let back: Tangle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn guard_stops_oversized_tangle_enumeration() {
        let g = fixtures::petersen();
        assert!(matches!(
            enumerate_tangles(&g, 2, &guards()),
            Err(TangleError::Guard(_))
        ));
        let loose = Guards {
            max_tangle_vertices: 10,
            ..Guards::default()
        };
        assert!(enumerate_tangles(&g, 2, &loose).is_ok());
    }
}
