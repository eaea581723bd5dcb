//! Decorated tropical graphs and curves: validation, balancing, genus,
//! multiplicities, automorphisms fixing labeled ends, marked points, and
//! localization at a vertex.

use std::collections::{HashMap, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::lattice::LatticeVector;
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Internal,
    External,
}

/// Oriented edge. Internal edges run tail → head; external edges (ends)
/// are attached at `tail` only and oriented outgoing, with a required
/// distinct label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: Option<String>,
    pub direction: LatticeVector,
    pub kind: EdgeKind,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalGraph {
    pub ambient_dim: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphViolation {
    DuplicateVertexId(String),
    DuplicateEdgeId(String),
    UnknownVertex { edge: String, vertex: String },
    BadDimension { edge: String },
    InternalWithoutHead(String),
    ExternalWithHead(String),
    ExternalWithoutLabel(String),
    InternalWithLabel(String),
    DuplicateLabel(String),
    Disconnected,
    NoVertices,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is invalid: {0:?}")]
    Invalid(Vec<GraphViolation>),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is unbalanced")]
    Unbalanced,
    #[error("label already used: {0}")]
    LabelClash(String),
    #[error("no such edge: {0}")]
    NoSuchEdge(String),
    #[error("no such vertex: {0}")]
    NoSuchVertex(String),
}

impl TropicalGraph {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn internal_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Internal)
    }

    pub fn external_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::External)
    }

    pub fn validate(&self) -> Vec<GraphViolation> {
        let mut out = vec![];
        let mut seen_v = HashSet::new();
        for v in &self.vertices {
            if !seen_v.insert(v) {
                out.push(GraphViolation::DuplicateVertexId(v.clone()));
            }
        }
        if self.vertices.is_empty() {
            out.push(GraphViolation::NoVertices);
        }
        let mut seen_e = HashSet::new();
        let mut seen_label = HashSet::new();
        for e in &self.edges {
            if !seen_e.insert(&e.id) {
                out.push(GraphViolation::DuplicateEdgeId(e.id.clone()));
            }
            if e.direction.dim() != self.ambient_dim {
                out.push(GraphViolation::BadDimension { edge: e.id.clone() });
            }
            if self.vertex_index(&e.tail).is_none() {
                out.push(GraphViolation::UnknownVertex {
                    edge: e.id.clone(),
                    vertex: e.tail.clone(),
                });
            }
            if let Some(h) = &e.head {
                if self.vertex_index(h).is_none() {
                    out.push(GraphViolation::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: h.clone(),
                    });
                }
            }
            match e.kind {
                EdgeKind::Internal => {
                    if e.head.is_none() {
                        out.push(GraphViolation::InternalWithoutHead(e.id.clone()));
                    }
                    if e.label.is_some() {
                        out.push(GraphViolation::InternalWithLabel(e.id.clone()));
                    }
                }
                EdgeKind::External => {
                    if e.head.is_some() {
                        out.push(GraphViolation::ExternalWithHead(e.id.clone()));
                    }
                    match &e.label {
                        None => out.push(GraphViolation::ExternalWithoutLabel(e.id.clone())),
                        Some(l) => {
                            if !seen_label.insert(l.clone()) {
                                out.push(GraphViolation::DuplicateLabel(l.clone()));
                            }
                        }
                    }
                }
            }
        }
        if out.is_empty() && !self.is_connected() {
            out.push(GraphViolation::Disconnected);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let n = self.vertices.len();
        let mut adj = vec![vec![]; n];
        for e in self.internal_edges() {
            let (Some(t), Some(h)) = (
                self.vertex_index(&e.tail),
                e.head.as_deref().and_then(|h| self.vertex_index(h)),
            ) else {
                continue;
            };
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Outward momentum sum at each vertex; nonzero entries are the
    /// balancing defects. Empty result means balanced.
    pub fn balance(&self) -> Result<Vec<(String, LatticeVector)>, GraphError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut defects = vec![];
        for v in &self.vertices {
            let mut acc = LatticeVector::zero(self.ambient_dim);
            for e in &self.edges {
                if &e.tail == v {
                    acc = acc.add(&e.direction);
                }
                if e.head.as_deref() == Some(v) {
                    acc = acc.sub(&e.direction);
                }
            }
            if !acc.is_zero() {
                defects.push((v.clone(), acc));
            }
        }
        Ok(defects)
    }

    pub fn is_balanced(&self) -> bool {
        matches!(self.balance(), Ok(d) if d.is_empty())
    }

    /// First Betti number: #internal edges − #vertices + 1.
    pub fn genus(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let internal = self.internal_edges().count();
        Ok(internal + 1 - self.vertices.len())
    }

    /// Content of the direction vector; 0 for an edge sent to a point.
    pub fn edge_multiplicity(&self, edge_id: &str) -> Result<Int, GraphError> {
        let e = self
            .edge(edge_id)
            .ok_or_else(|| GraphError::NoSuchEdge(edge_id.to_string()))?;
        Ok(e.direction.content())
    }

    /// Splits edge `e` with a new bivalent vertex carrying a zero-momentum
    /// external edge with the given label. Balancing and genus are
    /// preserved.
    pub fn add_marked_point(
        &self,
        edge_id: &str,
        new_label: &str,
    ) -> Result<TropicalGraph, GraphError> {
        if self
            .external_edges()
            .any(|e| e.label.as_deref() == Some(new_label))
        {
            return Err(GraphError::LabelClash(new_label.to_string()));
        }
        let pos = self
            .edges
            .iter()
            .position(|e| e.id == edge_id)
            .ok_or_else(|| GraphError::NoSuchEdge(edge_id.to_string()))?;
        let fresh = |base: String, taken: &dyn Fn(&str) -> bool| -> String {
            if !taken(&base) {
                return base;
            }
            let mut k = 2;
            loop {
                let cand = format!("{base}.{k}");
                if !taken(&cand) {
                    return cand;
                }
                k += 1;
            }
        };
        let e = self.edges[pos].clone();
        let new_vertex = fresh(format!("mp:{new_label}"), &|s: &str| {
            self.vertices.iter().any(|v| v == s)
        });
        let taken_edge = |s: &str| self.edges.iter().any(|e| e.id == s);
        let seg_a = fresh(format!("{}:a", e.id), &taken_edge);
        let seg_b = fresh(format!("{}:b", e.id), &taken_edge);
        let mark_id = fresh(format!("mark:{new_label}"), &taken_edge);

        let mut g = self.clone();
        g.vertices.push(new_vertex.clone());
        let mut replacement = vec![
            Edge {
                id: seg_a,
                tail: e.tail.clone(),
                head: Some(new_vertex.clone()),
                direction: e.direction.clone(),
                kind: EdgeKind::Internal,
                label: None,
            },
            match e.kind {
                EdgeKind::Internal => Edge {
                    id: seg_b,
                    tail: new_vertex.clone(),
                    head: e.head.clone(),
                    direction: e.direction.clone(),
                    kind: EdgeKind::Internal,
                    label: None,
                },
                EdgeKind::External => Edge {
                    id: seg_b,
                    tail: new_vertex.clone(),
                    head: None,
                    direction: e.direction.clone(),
                    kind: EdgeKind::External,
                    label: e.label.clone(),
                },
            },
            Edge {
                id: mark_id,
                tail: new_vertex.clone(),
                head: None,
                direction: LatticeVector::zero(self.ambient_dim),
                kind: EdgeKind::External,
                label: Some(new_label.to_string()),
            },
        ];
        g.edges.splice(pos..=pos, replacement.drain(..));
        Ok(g)
    }
}

/// Incidence-preserving graph symmetry fixing every external label.
/// Orientation-reversed internal edges must negate their direction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphAutomorphism {
    /// vertex index → vertex index
    pub vertex_map: Vec<usize>,
    /// edge index → edge index
    pub edge_map: Vec<usize>,
    /// per source edge: whether the image reverses orientation
    pub reversed: Vec<bool>,
}

impl GraphAutomorphism {
    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.reversed.iter().all(|&r| !r)
    }
}

/// The full automorphism group as a canonically ordered list (identity
/// included). Backtracking over vertex images pruned by outward-momentum
/// multisets, then exhaustive matching of parallel edge classes.
pub fn automorphisms(g: &TropicalGraph) -> Result<Vec<GraphAutomorphism>, GraphError> {
    let violations = g.validate();
    if !violations.is_empty() {
        return Err(GraphError::Invalid(violations));
    }
    let nv = g.vertices.len();
    let vidx: HashMap<&str, usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();

    // vertices carrying a labeled end are fixed, since ends are fixed
    let mut fixed = vec![false; nv];
    for e in g.external_edges() {
        fixed[vidx[e.tail.as_str()]] = true;
    }

    // invariant per vertex: sorted multiset of outward momenta
    let outward = |v: usize| -> Vec<LatticeVector> {
        let mut m = vec![];
        for e in &g.edges {
            if vidx[e.tail.as_str()] == v {
                m.push(e.direction.clone());
            }
            if e.head.as_deref().map(|h| vidx[h]) == Some(v) {
                m.push(e.direction.neg());
            }
        }
        m.sort();
        m
    };
    let inv: Vec<Vec<LatticeVector>> = (0..nv).map(outward).collect();

    let internal: Vec<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EdgeKind::Internal)
        .map(|(i, _)| i)
        .collect();

    let mut result = vec![];
    let mut sigma = vec![usize::MAX; nv];
    let mut used = vec![false; nv];

    // candidate edge images for a fixed vertex permutation
    fn edge_maps(
        g: &TropicalGraph,
        vidx: &HashMap<&str, usize>,
        sigma: &[usize],
        internal: &[usize],
        result: &mut Vec<GraphAutomorphism>,
    ) {
        // group internal edges by the unordered image-independent key
        let ends = |i: usize| -> (usize, usize) {
            let e = &g.edges[i];
            (vidx[e.tail.as_str()], vidx[e.head.as_deref().unwrap()])
        };
        // backtrack over internal edges in order, assigning distinct images
        let ne = g.edges.len();
        let mut emap: Vec<usize> = (0..ne).collect();
        let mut rev = vec![false; ne];
        let mut taken = vec![false; ne];
        fn go(
            g: &TropicalGraph,
            sigma: &[usize],
            internal: &[usize],
            ends: &dyn Fn(usize) -> (usize, usize),
            k: usize,
            emap: &mut Vec<usize>,
            rev: &mut Vec<bool>,
            taken: &mut Vec<bool>,
            result: &mut Vec<GraphAutomorphism>,
        ) {
            if k == internal.len() {
                result.push(GraphAutomorphism {
                    vertex_map: sigma.to_vec(),
                    edge_map: emap.clone(),
                    reversed: rev.clone(),
                });
                return;
            }
            let i = internal[k];
            let (t, h) = ends(i);
            let (st, sh) = (sigma[t], sigma[h]);
            for &j in internal.iter() {
                if taken[j] {
                    continue;
                }
                let (jt, jh) = ends(j);
                let dir_i = &g.edges[i].direction;
                let dir_j = &g.edges[j].direction;
                for reverse in [false, true] {
                    let ok = if !reverse {
                        jt == st && jh == sh && dir_i == dir_j
                    } else {
                        jt == sh && jh == st && dir_i.neg() == *dir_j
                    };
                    if !ok {
                        continue;
                    }
                    emap[i] = j;
                    rev[i] = reverse;
                    taken[j] = true;
                    go(g, sigma, internal, ends, k + 1, emap, rev, taken, result);
                    taken[j] = false;
                }
            }
            emap[i] = i;
            rev[i] = false;
        }
        go(
            g, sigma, internal, &ends, 0, &mut emap, &mut rev, &mut taken, result,
        );
    }

    fn go_vertices(
        g: &TropicalGraph,
        vidx: &HashMap<&str, usize>,
        fixed: &[bool],
        inv: &[Vec<LatticeVector>],
        internal: &[usize],
        v: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        result: &mut Vec<GraphAutomorphism>,
    ) {
        let nv = sigma.len();
        if v == nv {
            edge_maps(g, vidx, sigma, internal, result);
            return;
        }
        let candidates: Vec<usize> = if fixed[v] {
            vec![v]
        } else {
            (0..nv).filter(|&w| !fixed[w]).collect()
        };
        for w in candidates {
            if used[w] || inv[v] != inv[w] {
                continue;
            }
            sigma[v] = w;
            used[w] = true;
            go_vertices(g, vidx, fixed, inv, internal, v + 1, sigma, used, result);
            used[w] = false;
            sigma[v] = usize::MAX;
        }
    }

    go_vertices(
        g, &vidx, &fixed, &inv, &internal, 0, &mut sigma, &mut used, &mut result,
    );
    result.sort();
    result.dedup();
    Ok(result)
}

/// Geometric realization of a combinatorial type: vertex positions and
/// positive internal edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    pub graph: TropicalGraph,
    pub positions: HashMap<String, Vec<Rat>>,
    pub lengths: HashMap<String, Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveViolation {
    MissingPosition(String),
    MissingLength(String),
    NonPositiveLength(String),
    EdgeEquationViolated(String),
}

impl TropicalCurve {
    pub fn validate(&self) -> Vec<CurveViolation> {
        let mut out = vec![];
        for v in &self.graph.vertices {
            if !self.positions.contains_key(v) {
                out.push(CurveViolation::MissingPosition(v.clone()));
            }
        }
        for e in self.graph.internal_edges() {
            let Some(l) = self.lengths.get(&e.id) else {
                out.push(CurveViolation::MissingLength(e.id.clone()));
                continue;
            };
            if l <= &Rat::zero() {
                out.push(CurveViolation::NonPositiveLength(e.id.clone()));
            }
            let (Some(pt), Some(ph)) = (
                self.positions.get(&e.tail),
                e.head.as_ref().and_then(|h| self.positions.get(h)),
            ) else {
                continue;
            };
            // head = tail + length · direction
            let ok = pt
                .iter()
                .zip(ph)
                .zip(e.direction.entries())
                .all(|((t, h), d)| t + l * Rat::from(d.clone()) == *h);
            if !ok {
                out.push(CurveViolation::EdgeEquationViolated(e.id.clone()));
            }
        }
        out
    }
}

/// The star of `v`: vertex `v` with all incident edges, internal incident
/// edges converted to outgoing external edges (infinite length) carrying
/// the momentum they have at `v`. Balanced at `v` iff the input was.
pub fn localize(c: &TropicalCurve, v: &str) -> Result<TropicalCurve, GraphError> {
    let g = &c.graph;
    if g.vertex_index(v).is_none() {
        return Err(GraphError::NoSuchVertex(v.to_string()));
    }
    let mut edges = vec![];
    for e in &g.edges {
        let at_tail = e.tail == v;
        let at_head = e.head.as_deref() == Some(v);
        if !at_tail && !at_head {
            continue;
        }
        match e.kind {
            EdgeKind::External => edges.push(e.clone()),
            EdgeKind::Internal => {
                // a loop contributes two ends, one per incidence
                if at_tail {
                    edges.push(Edge {
                        id: format!("{}:out", e.id),
                        tail: v.to_string(),
                        head: None,
                        direction: e.direction.clone(),
                        kind: EdgeKind::External,
                        label: Some(format!("{}:out", e.id)),
                    });
                }
                if at_head {
                    edges.push(Edge {
                        id: format!("{}:in", e.id),
                        tail: v.to_string(),
                        head: None,
                        direction: e.direction.neg(),
                        kind: EdgeKind::External,
                        label: Some(format!("{}:in", e.id)),
                    });
                }
            }
        }
    }
    let graph = TropicalGraph {
        ambient_dim: g.ambient_dim,
        vertices: vec![v.to_string()],
        edges,
    };
    let mut positions = HashMap::new();
    if let Some(p) = c.positions.get(v) {
        positions.insert(v.to_string(), p.clone());
    }
    Ok(TropicalCurve {
        graph,
        positions,
        lengths: HashMap::new(),
    })
}
