//! JSON schemas for the library's value types. Rationals travel as
//! decimal-free "p/q" strings (bare "p" when the denominator is 1) and
//! integers as JSON numbers, falling back to strings outside the i64
//! range; numbers and strings are both accepted on input.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, EdgeKind, TropicalCurve, TropicalGraph};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::poly::{ChartedComplex, Constraint, Gluing, RationalPolyhedron, Refinement, Stratum};
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or an integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                Int::from_str(v).map(JsonInt).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = JsonRat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a \"p/q\" string or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRat, E> {
                Ok(JsonRat(Rat::from(Int::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRat, E> {
                Ok(JsonRat(Rat::from(Int::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRat, E> {
                Rat::from_str(v).map(JsonRat).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn rat_string(r: &Rat) -> String {
    r.to_string()
}

pub fn int_vec(v: &LatticeVector) -> Vec<JsonInt> {
    v.entries().iter().cloned().map(JsonInt).collect()
}

pub fn rat_vec(v: &[Rat]) -> Vec<JsonRat> {
    v.iter().cloned().map(JsonRat).collect()
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    (0..m.rows()).map(|i| int_vec(&m.row(i))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonConstraint {
    pub normal: Vec<JsonInt>,
    pub offset: JsonRat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonPolyhedron {
    pub dim: usize,
    #[serde(default)]
    pub ineqs: Vec<JsonConstraint>,
    #[serde(default)]
    pub eqs: Vec<JsonConstraint>,
}

fn to_constraint(c: &JsonConstraint) -> Constraint {
    Constraint::new(
        LatticeVector::new(c.normal.iter().map(|x| x.0.clone()).collect()),
        c.offset.0.clone(),
    )
}

fn from_constraint(c: &Constraint) -> JsonConstraint {
    JsonConstraint {
        normal: int_vec(&c.normal),
        offset: JsonRat(c.offset.clone()),
    }
}

impl JsonPolyhedron {
    pub fn to_polyhedron(&self) -> Result<RationalPolyhedron, String> {
        RationalPolyhedron::new(
            self.dim,
            self.ineqs.iter().map(to_constraint).collect(),
            self.eqs.iter().map(to_constraint).collect(),
        )
        .map_err(|e| e.to_string())
    }

    pub fn from_polyhedron(p: &RationalPolyhedron) -> JsonPolyhedron {
        JsonPolyhedron {
            dim: p.ambient_dim(),
            ineqs: p.ineqs().iter().map(from_constraint).collect(),
            eqs: p.eqs().iter().map(from_constraint).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonEdge {
    pub id: String,
    pub tail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<String>,
    pub dir: Vec<JsonInt>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonGraph {
    pub ambient_dim: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<JsonEdge>,
}

impl JsonGraph {
    pub fn to_graph(&self) -> Result<TropicalGraph, String> {
        let mut edges = vec![];
        for e in &self.edges {
            let kind = match e.kind.as_str() {
                "internal" => EdgeKind::Internal,
                "external" => EdgeKind::External,
                other => return Err(format!("edge {}: unknown kind {other:?}", e.id)),
            };
            if kind == EdgeKind::Internal && e.head.is_none() {
                return Err(format!("internal edge {} has no head", e.id));
            }
            if kind == EdgeKind::External && e.head.is_some() {
                return Err(format!("external edge {} has a head", e.id));
            }
            edges.push(Edge {
                id: e.id.clone(),
                tail: e.tail.clone(),
                head: e.head.clone(),
                direction: LatticeVector::new(e.dir.iter().map(|x| x.0.clone()).collect()),
                kind,
                label: e.label.clone(),
            });
        }
        Ok(TropicalGraph {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
            edges,
        })
    }

    pub fn from_graph(g: &TropicalGraph) -> JsonGraph {
        JsonGraph {
            ambient_dim: g.ambient_dim,
            vertices: g.vertices.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| JsonEdge {
                    id: e.id.clone(),
                    tail: e.tail.clone(),
                    head: e.head.clone(),
                    dir: int_vec(&e.direction),
                    kind: match e.kind {
                        EdgeKind::Internal => "internal".to_string(),
                        EdgeKind::External => "external".to_string(),
                    },
                    label: e.label.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonGluing {
    pub chart_a: usize,
    pub facet_a: usize,
    pub chart_b: usize,
    pub facet_b: usize,
    pub linear: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub translate: Vec<JsonRat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonComplex {
    pub charts: Vec<JsonPolyhedron>,
    pub gluings: Vec<JsonGluing>,
}

fn to_matrix(rows: &[Vec<JsonInt>]) -> Result<IntMatrix, String> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err("ragged matrix".to_string());
    }
    let mut m = IntMatrix::zero(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, x.0.clone());
        }
    }
    Ok(m)
}

impl JsonComplex {
    pub fn to_complex(&self) -> Result<ChartedComplex, String> {
        let charts = self
            .charts
            .iter()
            .map(|c| c.to_polyhedron())
            .collect::<Result<Vec<_>, _>>()?;
        let mut gluings = vec![];
        for (i, g) in self.gluings.iter().enumerate() {
            let linear = to_matrix(&g.linear).map_err(|e| format!("gluing {i}: {e}"))?;
            let dim = linear.rows();
            let translate = if g.translate.is_empty() {
                vec![num_traits::Zero::zero(); dim]
            } else {
                g.translate.iter().map(|r| r.0.clone()).collect()
            };
            gluings.push(Gluing {
                chart_a: g.chart_a,
                facet_a: g.facet_a,
                chart_b: g.chart_b,
                facet_b: g.facet_b,
                linear,
                translate,
            });
        }
        Ok(ChartedComplex { charts, gluings })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonRefinement {
    pub coarse: Vec<JsonPolyhedron>,
    pub fine: Vec<JsonPolyhedron>,
    pub assignment: Vec<usize>,
}

impl JsonRefinement {
    pub fn to_refinement(&self) -> Result<Refinement, String> {
        Ok(Refinement {
            coarse: self
                .coarse
                .iter()
                .map(|p| p.to_polyhedron())
                .collect::<Result<Vec<_>, _>>()?,
            fine: self
                .fine
                .iter()
                .map(|p| p.to_polyhedron())
                .collect::<Result<Vec<_>, _>>()?,
            assignment: self.assignment.clone(),
        })
    }
}

pub fn stratum_from_indices(tight: Vec<usize>) -> Stratum {
    Stratum::new(tight)
}

/// Curve output: positions and lengths keyed by id, in sorted key order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonCurve {
    pub positions: BTreeMap<String, Vec<JsonRat>>,
    pub lengths: BTreeMap<String, JsonRat>,
}

impl JsonCurve {
    pub fn from_curve(c: &TropicalCurve) -> JsonCurve {
        JsonCurve {
            positions: c
                .positions
                .iter()
                .map(|(k, v)| (k.clone(), rat_vec(v)))
                .collect(),
            lengths: c
                .lengths
                .iter()
                .map(|(k, v)| (k.clone(), JsonRat(v.clone())))
                .collect(),
        }
    }
}
