//! Validation of polyhedral refinements: containment, interior
//! disjointness, and exact covering.

use super::fm::{LinCon, Rel};
use super::RationalPolyhedron;

/// A proposed subdivision: each fine cell is assigned to a coarse cell.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub coarse: Vec<RationalPolyhedron>,
    pub fine: Vec<RationalPolyhedron>,
    /// fine index → coarse index
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementViolation {
    BadAssignment { fine: usize },
    NotContained { fine: usize, coarse: usize },
    CoverGap { coarse: usize },
    InteriorOverlap { fine_a: usize, fine_b: usize },
}

/// Checks all refinement invariants and returns the violations found
/// (empty list means the refinement is valid). Never aborts on bad input.
///
/// Covering is decided exactly: coarse \ union(fine) is nonempty iff some
/// choice of one violated constraint per assigned fine cell is feasible
/// together with the coarse cell, so the check enumerates those choice
/// tuples and runs an exact feasibility test on each. This handles bounded
/// and unbounded cells uniformly.
pub fn refinement_check(r: &Refinement) -> Vec<RefinementViolation> {
    let mut violations = vec![];
    for (i, _) in r.fine.iter().enumerate() {
        match r.assignment.get(i) {
            Some(&c) if c < r.coarse.len() => {}
            _ => violations.push(RefinementViolation::BadAssignment { fine: i }),
        }
    }

    // containment
    for (i, f) in r.fine.iter().enumerate() {
        let Some(&ci) = r.assignment.get(i) else { continue };
        let Some(c) = r.coarse.get(ci) else { continue };
        if f.ambient_dim() != c.ambient_dim() || !c.contains_poly(f) {
            violations.push(RefinementViolation::NotContained { fine: i, coarse: ci });
        }
    }

    // pairwise relative-interior disjointness within each coarse cell
    for i in 0..r.fine.len() {
        for j in (i + 1)..r.fine.len() {
            if r.assignment.get(i) != r.assignment.get(j) {
                continue;
            }
            let (a, b) = (&r.fine[i], &r.fine[j]);
            if a.ambient_dim() != b.ambient_dim() {
                continue;
            }
            let mut sys = a.relint_system();
            for c in b.relint_system().cons {
                sys.push(c);
            }
            if sys.is_feasible() {
                violations.push(RefinementViolation::InteriorOverlap { fine_a: i, fine_b: j });
            }
        }
    }

    // covering
    for (ci, c) in r.coarse.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let cells: Vec<&RationalPolyhedron> = r
            .fine
            .iter()
            .enumerate()
            .filter(|(i, f)| {
                r.assignment.get(*i) == Some(&ci) && f.ambient_dim() == c.ambient_dim()
            })
            .map(|(_, f)| f)
            .collect();
        if has_cover_gap(c, &cells) {
            violations.push(RefinementViolation::CoverGap { coarse: ci });
        }
    }
    violations
}

/// Whether coarse \ union(cells) is nonempty. A point escapes every cell
/// iff it violates at least one constraint of each cell; enumerate one
/// violated constraint (and side, for equalities) per cell.
fn has_cover_gap(coarse: &RationalPolyhedron, cells: &[&RationalPolyhedron]) -> bool {
    // per cell: the list of "violation" constraints, any one of which
    // excludes the point from the cell
    let mut choices: Vec<Vec<LinCon>> = vec![];
    for f in cells {
        let mut opts = vec![];
        for c in f.ineqs() {
            opts.push(LinCon::new(c.normal.neg(), -c.offset.clone(), Rel::Gt));
        }
        for c in f.eqs() {
            opts.push(LinCon::new(c.normal.neg(), -c.offset.clone(), Rel::Gt));
            opts.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Gt));
        }
        if opts.is_empty() {
            // a cell with no constraints is the whole space: no gap possible
            return false;
        }
        choices.push(opts);
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut sys = coarse.to_system();
        for (k, opts) in choices.iter().enumerate() {
            sys.push(opts[idx[k]].clone());
        }
        if sys.is_feasible() {
            return true;
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == choices.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;
    use crate::poly::Constraint;
    use crate::{Int, Rat};

    fn rat(p: i64) -> Rat {
        Rat::from(Int::from(p))
    }

    fn interval(a: i64, b: i64) -> RationalPolyhedron {
        RationalPolyhedron::new(
            1,
            vec![
                Constraint::new(LatticeVector::from_i64(&[1]), rat(a)),
                Constraint::new(LatticeVector::from_i64(&[-1]), rat(-b)),
            ],
            vec![],
        )
        .unwrap()
    }

    fn cone2(normals: &[[i64; 2]]) -> RationalPolyhedron {
        RationalPolyhedron::new(
            2,
            normals
                .iter()
                .map(|n| Constraint::new(LatticeVector::from_i64(n), rat(0)))
                .collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn split_interval_ok() {
        let r = Refinement {
            coarse: vec![interval(0, 2)],
            fine: vec![interval(0, 1), interval(1, 2)],
            assignment: vec![0, 0],
        };
        assert!(refinement_check(&r).is_empty());
    }

    #[test]
    fn missing_half_is_a_gap() {
        let r = Refinement {
            coarse: vec![interval(0, 2)],
            fine: vec![interval(0, 1)],
            assignment: vec![0],
        };
        assert_eq!(
            refinement_check(&r),
            vec![RefinementViolation::CoverGap { coarse: 0 }]
        );
    }

    #[test]
    fn overlapping_halves_reported() {
        let r = Refinement {
            coarse: vec![interval(0, 2)],
            fine: vec![interval(0, 1), interval(1, 2), interval(0, 2)],
            assignment: vec![0, 0, 0],
        };
        let v = refinement_check(&r);
        assert!(v.contains(&RefinementViolation::InteriorOverlap { fine_a: 0, fine_b: 2 }));
        assert!(v.contains(&RefinementViolation::InteriorOverlap { fine_a: 1, fine_b: 2 }));
    }

    #[test]
    fn not_contained_reported() {
        let r = Refinement {
            coarse: vec![interval(0, 1)],
            fine: vec![interval(0, 2)],
            assignment: vec![0],
        };
        let v = refinement_check(&r);
        assert!(v.contains(&RefinementViolation::NotContained { fine: 0, coarse: 0 }));
    }

    #[test]
    fn fan_cone_split_by_inserted_ray() {
        // cone((1,0),(0,1)) split along the ray (1,1); unbounded cells
        let coarse = cone2(&[[1, 0], [0, 1]]);
        let below = cone2(&[[0, 1], [1, -1]]); // between (1,0) and (1,1)
        let above = cone2(&[[1, 0], [-1, 1]]); // between (1,1) and (0,1)
        let r = Refinement {
            coarse: vec![coarse],
            fine: vec![below, above],
            assignment: vec![0, 0],
        };
        assert!(refinement_check(&r).is_empty());
    }

    #[test]
    fn fan_cone_split_with_gap() {
        let coarse = cone2(&[[1, 0], [0, 1]]);
        let below = cone2(&[[0, 1], [1, -1]]);
        let r = Refinement {
            coarse: vec![coarse],
            fine: vec![below],
            assignment: vec![0],
        };
        assert_eq!(
            refinement_check(&r),
            vec![RefinementViolation::CoverGap { coarse: 0 }]
        );
    }
}
