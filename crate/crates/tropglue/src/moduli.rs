//! Moduli presentations of combinatorial types: the integral linear map
//! whose kernel (with positive lengths) parametrizes tropical curves of a
//! fixed type, component counts via lattice indices, gluing constants,
//! genus splittings, and point-constrained solving.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{automorphisms, GraphError, TropicalCurve, TropicalGraph};
use crate::lattice::{
    cokernel_order, kernel_basis, snf, solve_rational, CokernelOrder, IntMatrix, LatticeVector,
};
use crate::poly::fm::{LinCon, LinSystem, Rel};
use crate::{Int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuliError {
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("graph is unbalanced; its moduli space is empty")]
    Unbalanced,
    #[error("total genus {total} is smaller than the graph genus {graph}")]
    GenusTooSmall { total: usize, graph: usize },
    #[error("marked label {0} has no point")]
    MissingPoint(String),
    #[error("point for label {0} has wrong dimension")]
    BadPointDim(String),
    #[error("assignment for label {0} names unknown edge {1}")]
    BadAssignment(String, String),
}

/// Column layout of the moduli map: one length variable per internal edge
/// (input order), then `n` position coordinates per vertex (input order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMap {
    pub internal_edges: Vec<String>,
    pub vertices: Vec<String>,
    pub ambient_dim: usize,
}

impl VariableMap {
    pub fn cols(&self) -> usize {
        self.internal_edges.len() + self.ambient_dim * self.vertices.len()
    }

    pub fn length_col(&self, edge_id: &str) -> Option<usize> {
        self.internal_edges.iter().position(|e| e == edge_id)
    }

    pub fn position_col(&self, vertex_id: &str, coord: usize) -> Option<usize> {
        let v = self.vertices.iter().position(|w| w == vertex_id)?;
        Some(self.internal_edges.len() + self.ambient_dim * v + coord)
    }
}

fn check_balanced(g: &TropicalGraph) -> Result<(), ModuliError> {
    let defects = g.balance().map_err(ModuliError::Graph)?;
    if !defects.is_empty() {
        return Err(ModuliError::Unbalanced);
    }
    Ok(())
}

/// The map A: one n-row block per internal edge e expressing
/// x_tail + l_e·α_e − x_head = 0 in the variable layout of `VariableMap`.
pub fn assemble_a(g: &TropicalGraph) -> Result<(IntMatrix, VariableMap), ModuliError> {
    check_balanced(g)?;
    let n = g.ambient_dim;
    let vars = VariableMap {
        internal_edges: g.internal_edges().map(|e| e.id.clone()).collect(),
        vertices: g.vertices.clone(),
        ambient_dim: n,
    };
    let rows = n * vars.internal_edges.len();
    let mut a = IntMatrix::zero(rows, vars.cols());
    for (i, e) in g.internal_edges().enumerate() {
        let lcol = vars.length_col(&e.id).unwrap();
        let head = e.head.as_deref().unwrap();
        for coord in 0..n {
            let r = n * i + coord;
            a.set(r, lcol, e.direction.get(coord).clone());
            let tcol = vars.position_col(&e.tail, coord).unwrap();
            let hcol = vars.position_col(head, coord).unwrap();
            // a loop contributes +1 and −1 to the same column
            let tv = a.get(r, tcol).clone() + Int::one();
            a.set(r, tcol, tv);
            let hv = a.get(r, hcol).clone() - Int::one();
            a.set(r, hcol, hv);
        }
    }
    Ok((a, vars))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliPresentation {
    pub a: IntMatrix,
    pub vars: VariableMap,
    /// cols − rank(a): dimension of the kernel, hence of the moduli cell.
    pub dimension: usize,
    pub surjective: bool,
    /// |Z^(n·#e) / A(Z^(#e + n·#v))|: finite iff A is surjective.
    pub component_count: CokernelOrder,
    pub kernel: Vec<LatticeVector>,
    /// Whether the kernel meets {all lengths > 0}: decided exactly.
    pub positive_cell_nonempty: bool,
}

pub fn moduli_presentation(g: &TropicalGraph) -> Result<ModuliPresentation, ModuliError> {
    let (a, vars) = assemble_a(g)?;
    let rank = snf(&a).rank();
    let kernel = kernel_basis(&a);
    let component_count = cokernel_order(&a);
    let surjective = rank == a.rows();
    let ne = vars.internal_edges.len();
    // strict positivity of all length coordinates over the kernel span
    let positive_cell_nonempty = if ne == 0 {
        true
    } else {
        let mut sys = LinSystem::new(kernel.len());
        for i in 0..ne {
            let normal =
                LatticeVector::new(kernel.iter().map(|k| k.get(i).clone()).collect());
            sys.push(LinCon::new(normal, Rat::zero(), Rel::Gt));
        }
        sys.is_feasible()
    };
    Ok(ModuliPresentation {
        dimension: vars.cols() - rank,
        surjective,
        component_count,
        kernel,
        positive_cell_nonempty,
        a,
        vars,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    /// ∏ m_e / |Aut Γ| over internal edges; 0 iff some internal edge is
    /// sent to a point.
    pub k_gamma: Rat,
    /// Genus of the graph.
    pub g_gamma: usize,
    pub aut_order: usize,
    /// ∏ m_e; 0 if any internal direction vanishes.
    pub gluing_choices: Int,
    /// All splittings (g_v) of the remaining genus over the vertices, in
    /// lexicographic order.
    pub genus_splits: Vec<Vec<usize>>,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for rest in compositions(total - first, parts - 1) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

pub fn gluing_data(g: &TropicalGraph, total_genus: usize) -> Result<GluingData, ModuliError> {
    check_balanced(g)?;
    let g_gamma = g.genus().map_err(ModuliError::Graph)?;
    if total_genus < g_gamma {
        return Err(ModuliError::GenusTooSmall {
            total: total_genus,
            graph: g_gamma,
        });
    }
    let gluing_choices = g
        .internal_edges()
        .map(|e| e.direction.content())
        .fold(Int::one(), |acc, m| acc * m);
    let aut_order = automorphisms(g).map_err(ModuliError::Graph)?.len();
    let k_gamma = Rat::new(gluing_choices.clone(), Int::from(aut_order));
    let genus_splits = compositions(total_genus - g_gamma, g.vertices.len());
    Ok(GluingData {
        k_gamma,
        g_gamma,
        aut_order,
        gluing_choices,
        genus_splits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedCurve {
    pub curve: TropicalCurve,
    /// Lattice-index multiplicity of the augmented map; `None` when the
    /// augmented map is not rationally surjective (non-transverse).
    pub multiplicity: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveFailure {
    /// The augmented linear system has no rational solution.
    Infeasible,
    /// The unique solution has a non-positive edge length.
    NonPositiveLength { edge: String, length: Rat },
    /// The constrained system still has moduli; no isolated curves to list.
    PositiveDimensional { dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub marked_graph: TropicalGraph,
    pub curves: Vec<SolvedCurve>,
    pub failure: Option<SolveFailure>,
    /// Set when a solution exists but the augmented map is not surjective,
    /// so no multiplicity is assigned.
    pub non_transverse: bool,
}

/// Inserts one zero-momentum marked end per label on the assigned edge,
/// then solves the exact linear system {A = 0, marked vertex = point}.
/// Labels are processed in sorted order; marking the same original edge
/// twice marks the far piece of the previous split.
pub fn solve_points(
    g: &TropicalGraph,
    assignment: &BTreeMap<String, String>,
    points: &BTreeMap<String, Vec<Rat>>,
) -> Result<SolveOutcome, ModuliError> {
    check_balanced(g)?;
    let n = g.ambient_dim;
    for (label, point) in points {
        if !assignment.contains_key(label) {
            return Err(ModuliError::MissingPoint(label.clone()));
        }
        if point.len() != n {
            return Err(ModuliError::BadPointDim(label.clone()));
        }
    }
    let mut mg = g.clone();
    let mut redirect: HashMap<String, String> = HashMap::new();
    let mut marked_vertex: BTreeMap<String, String> = BTreeMap::new();
    for (label, edge_id) in assignment {
        if !points.contains_key(label) {
            return Err(ModuliError::MissingPoint(label.clone()));
        }
        if g.edge(edge_id).is_none() {
            return Err(ModuliError::BadAssignment(label.clone(), edge_id.clone()));
        }
        let target = redirect
            .get(edge_id)
            .cloned()
            .unwrap_or_else(|| edge_id.clone());
        let before: Vec<String> = mg.vertices.clone();
        mg = mg.add_marked_point(&target, label)?;
        let new_vertex = mg
            .vertices
            .iter()
            .find(|v| !before.contains(v))
            .expect("marking adds a vertex")
            .clone();
        marked_vertex.insert(label.clone(), new_vertex);
        redirect.insert(edge_id.clone(), format!("{target}:b"));
    }

    let (a, vars) = assemble_a(&mg)?;
    let pin_rows: usize = n * points.len();
    let mut aug = IntMatrix::zero(a.rows() + pin_rows, vars.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug.set(i, j, a.get(i, j).clone());
        }
    }
    let mut rhs = vec![Rat::zero(); a.rows() + pin_rows];
    for (k, (label, point)) in points.iter().enumerate() {
        let v = &marked_vertex[label];
        for coord in 0..n {
            let r = a.rows() + n * k + coord;
            let c = vars.position_col(v, coord).unwrap();
            aug.set(r, c, Int::one());
            rhs[r] = point[coord].clone();
        }
    }

    let Some(sol) = solve_rational(&aug, &rhs) else {
        return Ok(SolveOutcome {
            marked_graph: mg,
            curves: vec![],
            failure: Some(SolveFailure::Infeasible),
            non_transverse: false,
        });
    };
    if !sol.kernel.is_empty() {
        return Ok(SolveOutcome {
            marked_graph: mg,
            curves: vec![],
            failure: Some(SolveFailure::PositiveDimensional {
                dim: sol.kernel.len(),
            }),
            non_transverse: false,
        });
    }
    // unique candidate: positivity of every internal length
    for (i, e) in vars.internal_edges.iter().enumerate() {
        let l = &sol.particular[i];
        if !l.is_positive() {
            return Ok(SolveOutcome {
                marked_graph: mg,
                curves: vec![],
                failure: Some(SolveFailure::NonPositiveLength {
                    edge: e.clone(),
                    length: l.clone(),
                }),
                non_transverse: false,
            });
        }
    }
    let mut positions = HashMap::new();
    for v in &vars.vertices {
        positions.insert(
            v.clone(),
            (0..n)
                .map(|c| sol.particular[vars.position_col(v, c).unwrap()].clone())
                .collect(),
        );
    }
    let mut lengths = HashMap::new();
    for (i, e) in vars.internal_edges.iter().enumerate() {
        lengths.insert(e.clone(), sol.particular[i].clone());
    }
    let curve = TropicalCurve {
        graph: mg.clone(),
        positions,
        lengths,
    };
    debug_assert!(curve.validate().is_empty());
    let (multiplicity, non_transverse) = match cokernel_order(&aug) {
        CokernelOrder::Finite(k) => (Some(k), false),
        CokernelOrder::Infinite => (None, true),
    };
    Ok(SolveOutcome {
        marked_graph: mg,
        curves: vec![SolvedCurve {
            curve,
            multiplicity,
        }],
        failure: None,
        non_transverse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedSolution {
    /// label → edge of the input graph.
    pub assignment: BTreeMap<String, String>,
    pub curve: SolvedCurve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Sum of multiplicities over deduplicated solutions.
    pub total: Int,
    pub solutions: Vec<EnumeratedSolution>,
    /// Set when no points are given and the unconstrained presentation is
    /// positive-dimensional.
    pub positive_dimensional: bool,
    pub any_non_transverse: bool,
}

/// Geometric fingerprint of a solution on the original graph: positions of
/// the original vertices, total lengths of the original internal edges and
/// the marked point images. Solutions from different assignments that
/// describe the same curve collapse to the same key.
fn solution_key(g: &TropicalGraph, points: &BTreeMap<String, Vec<Rat>>, sc: &SolvedCurve) -> String {
    let mut parts = vec![];
    for v in &g.vertices {
        let p = &sc.curve.positions[v];
        parts.push(format!("v {v} {}", fmt_rats(p)));
    }
    for e in g.internal_edges() {
        // original edge may be split into pieces e, e:a, e:a:b, …
        let mut total = Rat::zero();
        for (id, l) in &sc.curve.lengths {
            if id == &e.id || id.starts_with(&format!("{}:", e.id)) {
                total += l;
            }
        }
        parts.push(format!("e {} {}", e.id, total));
    }
    for label in points.keys() {
        let v = sc
            .curve
            .graph
            .external_edges()
            .find(|e| e.label.as_deref() == Some(label))
            .map(|e| e.tail.clone());
        if let Some(v) = v {
            parts.push(format!("m {label} {}", fmt_rats(&sc.curve.positions[&v])));
        }
    }
    parts.join(";")
}

fn fmt_rats(v: &[Rat]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Tries every assignment of marked labels to edges of `g`, deduplicates
/// identical solution curves, and totals the multiplicities. `threads`
/// fans the assignments out over worker threads; results are merged in
/// canonical assignment order, so the report does not depend on it.
pub fn enumerate_assignments(
    g: &TropicalGraph,
    points: &BTreeMap<String, Vec<Rat>>,
    threads: usize,
) -> Result<EnumerationReport, ModuliError> {
    check_balanced(g)?;
    if points.is_empty() {
        let p = moduli_presentation(g)?;
        let total = match (&p.component_count, p.dimension) {
            (CokernelOrder::Finite(k), 0) => k.clone(),
            _ => Int::zero(),
        };
        return Ok(EnumerationReport {
            total,
            solutions: vec![],
            positive_dimensional: p.dimension > 0,
            any_non_transverse: !p.surjective,
        });
    }
    let labels: Vec<String> = points.keys().cloned().collect();
    let edge_ids: Vec<String> = g.edges.iter().map(|e| e.id.clone()).collect();
    // all |edges|^|labels| assignments in lexicographic order
    let mut assignments = vec![BTreeMap::new()];
    for label in &labels {
        assignments = assignments
            .into_iter()
            .flat_map(|a: BTreeMap<String, String>| {
                edge_ids.iter().map(move |e| {
                    let mut b = a.clone();
                    b.insert(label.clone(), e.clone());
                    b
                })
            })
            .collect();
    }

    let threads = threads.max(1);
    let outcomes: Vec<Result<SolveOutcome, ModuliError>> = if threads == 1 {
        assignments
            .iter()
            .map(|a| solve_points(g, a, points))
            .collect()
    } else {
        let chunk = assignments.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = assignments
                .chunks(chunk.max(1))
                .map(|slice| {
                    scope.spawn(move || {
                        slice
                            .iter()
                            .map(|a| solve_points(g, a, points))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    let mut seen = std::collections::HashSet::new();
    let mut solutions = vec![];
    let mut total = Int::zero();
    let mut any_non_transverse = false;
    for (assignment, outcome) in assignments.iter().zip(outcomes) {
        let outcome = outcome?;
        any_non_transverse |= outcome.non_transverse;
        for sc in outcome.curves {
            let key = solution_key(g, points, &sc);
            if !seen.insert(key) {
                continue;
            }
            if let Some(m) = &sc.multiplicity {
                total += m;
            }
            solutions.push(EnumeratedSolution {
                assignment: assignment.clone(),
                curve: sc,
            });
        }
    }
    Ok(EnumerationReport {
        total,
        solutions,
        positive_dimensional: false,
        any_non_transverse,
    })
}
