//! Polyhedral charts glued along facets by integral affine transitions, and
//! directional continuation of tangent vectors along paths of gluings. The
//! composite linear part around a loop is the integral affine monodromy.

use thiserror::Error;

use crate::lattice::{IntMatrix, LatticeVector};
use crate::Rat;

use super::RationalPolyhedron;

/// A facet-to-facet transition x ↦ linear·x + translate carrying facet
/// `facet_a` of chart `chart_a` onto facet `facet_b` of chart `chart_b`.
/// Crossing in the reverse direction applies the inverse map.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub chart_a: usize,
    pub facet_a: usize,
    pub chart_b: usize,
    pub facet_b: usize,
    pub linear: IntMatrix,
    pub translate: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct ChartedComplex {
    pub charts: Vec<RationalPolyhedron>,
    pub gluings: Vec<Gluing>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("gluing {0}: chart index out of range")]
    BadChart(usize),
    #[error("gluing {0}: facet index out of range")]
    BadFacet(usize),
    #[error("gluing {0}: linear part is not unimodular")]
    NotUnimodular(usize),
    #[error("gluing {0}: affine map does not carry facet onto facet")]
    FacetMismatch(usize),
    #[error("path step {0}: gluing does not touch the current chart")]
    BrokenPath(usize),
    #[error("path step {0}: gluing index out of range")]
    BadGluing(usize),
}

/// One step of a continuation path: the chart the step starts in and the
/// gluing to cross. Crossing from `chart_b` back to `chart_a` is allowed
/// and applies the inverse transition.
#[derive(Clone, Copy, Debug)]
pub struct PathStep {
    pub chart: usize,
    pub gluing: usize,
}

impl ChartedComplex {
    /// Checks unimodularity and that each gluing's affine map carries its
    /// source facet exactly onto its target facet (which makes the reverse
    /// crossing the inverse map).
    pub fn validate(&self) -> Result<(), ComplexError> {
        for (i, g) in self.gluings.iter().enumerate() {
            let ca = self
                .charts
                .get(g.chart_a)
                .ok_or(ComplexError::BadChart(i))?;
            let cb = self
                .charts
                .get(g.chart_b)
                .ok_or(ComplexError::BadChart(i))?;
            if g.linear.inverse_unimodular().is_none() {
                return Err(ComplexError::NotUnimodular(i));
            }
            let fa = ca.facet(g.facet_a).map_err(|_| ComplexError::BadFacet(i))?;
            let fb = cb.facet(g.facet_b).map_err(|_| ComplexError::BadFacet(i))?;
            let image = fa.affine_image(&g.linear, &g.translate);
            if !image.set_eq(&fb) {
                return Err(ComplexError::FacetMismatch(i));
            }
        }
        Ok(())
    }

    /// Continues a direction vector along a path of gluings, composing the
    /// gluings' linear parts in order.
    pub fn continue_direction(
        &self,
        path: &[PathStep],
        d: &LatticeVector,
    ) -> Result<LatticeVector, ComplexError> {
        let mut current: Option<usize> = None;
        let mut v = d.clone();
        for (i, step) in path.iter().enumerate() {
            if let Some(c) = current {
                if c != step.chart {
                    return Err(ComplexError::BrokenPath(i));
                }
            }
            let g = self
                .gluings
                .get(step.gluing)
                .ok_or(ComplexError::BadGluing(i))?;
            if g.chart_a == step.chart {
                v = g.linear.mul_vec(&v);
                current = Some(g.chart_b);
            } else if g.chart_b == step.chart {
                let inv = g
                    .linear
                    .inverse_unimodular()
                    .ok_or(ComplexError::BadGluing(i))?;
                v = inv.mul_vec(&v);
                current = Some(g.chart_a);
            } else {
                return Err(ComplexError::BrokenPath(i));
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;
    use crate::poly::Constraint;
    use crate::Int;
    use num_traits::Zero;

    fn cone(rays: [[i64; 2]; 2], normals: [[i64; 2]; 2]) -> RationalPolyhedron {
        // sanity: each normal nonnegative on both rays
        for n in &normals {
            for r in &rays {
                assert!(n[0] * r[0] + n[1] * r[1] >= 0);
            }
        }
        RationalPolyhedron::new(
            2,
            normals
                .iter()
                .map(|n| Constraint::new(LatticeVector::from_i64(n), Rat::zero()))
                .collect(),
            vec![],
        )
        .unwrap()
    }

    /// The cut-plane of the non-existence example: R² with a cut along the
    /// ray (1,0), subdivided by the rays (0,1) and (-1,-1). Chart 0 sits
    /// above the cut, chart 2 below it; the transition across the cut is
    /// the shear fixing (1,0) and sending (0,1) to (1,1), coming from the
    /// identification of chart 2 with cone((1,0), (-2,-1)).
    fn cut_plane() -> ChartedComplex {
        let c0 = cone([[1, 0], [0, 1]], [[0, 1], [1, 0]]); // ineq 0: y≥0, ineq 1: x≥0
        let c1 = cone([[0, 1], [-1, -1]], [[-1, 0], [-1, 1]]); // between (0,1) and (-1,-1)
        let c2 = cone([[-1, -1], [1, 0]], [[1, -1], [0, -1]]); // between (-1,-1) and (1,0)
        let id = IntMatrix::identity(2);
        let shear = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let zero_t = vec![Rat::zero(), Rat::zero()];
        ChartedComplex {
            charts: vec![c0, c1, c2],
            gluings: vec![
                // c0 and c1 share the ray (0,1): facet x = 0 of c0 is
                // facet -x-y... compute: c0 ineq 1 (x ≥ 0) tight; c1 tight on -x ≥ 0
                Gluing {
                    chart_a: 0,
                    facet_a: 1,
                    chart_b: 1,
                    facet_b: 0,
                    linear: id.clone(),
                    translate: zero_t.clone(),
                },
                // c1 and c2 share the ray (-1,-1)
                Gluing {
                    chart_a: 1,
                    facet_a: 1,
                    chart_b: 2,
                    facet_b: 0,
                    linear: id.clone(),
                    translate: zero_t.clone(),
                },
                // crossing the cut from below: shear maps c2's boundary ray
                // (1,0) to itself and continues straight lines over the cut
                Gluing {
                    chart_a: 2,
                    facet_a: 1,
                    chart_b: 0,
                    facet_b: 0,
                    linear: shear,
                    translate: zero_t,
                },
            ],
        }
    }

    #[test]
    fn empty_path_is_identity() {
        let c = cut_plane();
        let d = LatticeVector::from_i64(&[0, 1]);
        assert_eq!(c.continue_direction(&[], &d).unwrap(), d);
    }

    #[test]
    fn crossing_the_cut_shears_vertical_to_diagonal() {
        let c = cut_plane();
        c.validate().unwrap();
        let d = LatticeVector::from_i64(&[0, 1]);
        let out = c
            .continue_direction(&[PathStep { chart: 2, gluing: 2 }], &d)
            .unwrap();
        assert_eq!(out, LatticeVector::from_i64(&[1, 1]));
    }

    #[test]
    fn loop_monodromy_is_nontrivial() {
        let c = cut_plane();
        let d = LatticeVector::from_i64(&[0, 1]);
        let path = [
            PathStep { chart: 0, gluing: 0 },
            PathStep { chart: 1, gluing: 1 },
            PathStep { chart: 2, gluing: 2 },
        ];
        let out = c.continue_direction(&path, &d).unwrap();
        assert_ne!(out, d, "monodromy around the puncture must be nontrivial");
        assert_eq!(out, LatticeVector::from_i64(&[1, 1]));
        // primitivity is preserved by unimodular transitions
        assert_eq!(out.content(), Int::from(1));
    }

    #[test]
    fn broken_path_reported() {
        let c = cut_plane();
        let d = LatticeVector::from_i64(&[0, 1]);
        let path = [PathStep { chart: 1, gluing: 2 }];
        assert_eq!(
            c.continue_direction(&path, &d),
            Err(ComplexError::BrokenPath(0))
        );
    }

    #[test]
    fn validate_catches_facet_mismatch() {
        let mut c = cut_plane();
        // break the first gluing by translating it off the facet
        c.gluings[0].translate = vec![Rat::from(Int::from(1)), Rat::zero()];
        assert_eq!(c.validate(), Err(ComplexError::FacetMismatch(0)));
    }
}
