//! Rational polyhedra in H-representation, strata, tropical completion,
//! End-space projection, refinement validation and charted integral-affine
//! complexes.

pub mod complex;
pub mod fm;
pub mod refine;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{snf, IntMatrix, LatticeVector};
use crate::{Int, Rat};

use fm::{LinCon, LinSystem, Rel};

pub use complex::{ChartedComplex, Gluing, PathStep};
pub use refine::{refinement_check, Refinement, RefinementViolation};

/// Constraint ⟨normal, x⟩ ≥ offset (or = offset when used as an equality).
/// Normals are stored primitive; offsets are rescaled accordingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub normal: LatticeVector,
    pub offset: Rat,
}

impl Constraint {
    pub fn new(normal: LatticeVector, offset: Rat) -> Self {
        let c = normal.content();
        if c.is_zero() || c.is_one() {
            Constraint { normal, offset }
        } else {
            Constraint {
                normal: normal.primitive_part(),
                offset: offset / Rat::from(c),
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("ambient dimension mismatch")]
    DimMismatch,
    #[error("tight set does not define a stratum with nonempty relative interior")]
    InvalidStratum,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("no ray of the polyhedron points in the given direction")]
    NoRay,
    #[error("direction is the zero vector; the identity end component is the polyhedron itself")]
    ZeroVector,
    #[error("inequality index {0} out of range")]
    BadIndex(usize),
}

/// H-representation rational polyhedron: ⟨n, x⟩ ≥ c inequalities and
/// ⟨n, x⟩ = c equalities with primitive integer normals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyhedron {
    ambient_dim: usize,
    ineqs: Vec<Constraint>,
    eqs: Vec<Constraint>,
}

impl RationalPolyhedron {
    pub fn new(
        ambient_dim: usize,
        ineqs: Vec<Constraint>,
        eqs: Vec<Constraint>,
    ) -> Result<Self, PolyError> {
        for c in ineqs.iter().chain(&eqs) {
            if c.normal.dim() != ambient_dim {
                return Err(PolyError::DimMismatch);
            }
        }
        Ok(RationalPolyhedron {
            ambient_dim,
            ineqs,
            eqs,
        })
    }

    /// Whole ambient space.
    pub fn full(ambient_dim: usize) -> Self {
        RationalPolyhedron {
            ambient_dim,
            ineqs: vec![],
            eqs: vec![],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ineqs(&self) -> &[Constraint] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Constraint] {
        &self.eqs
    }

    pub fn to_system(&self) -> LinSystem {
        let mut s = LinSystem::new(self.ambient_dim);
        for c in &self.ineqs {
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Ge));
        }
        for c in &self.eqs {
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Eq));
        }
        s
    }

    /// Relative interior: all inequalities strict, equalities kept.
    pub fn relint_system(&self) -> LinSystem {
        let mut s = LinSystem::new(self.ambient_dim);
        for c in &self.ineqs {
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Gt));
        }
        for c in &self.eqs {
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Eq));
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        !self.to_system().is_feasible()
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.to_system().satisfied_by(x)
    }

    /// Whether `other` is a subset: every constraint of `self` is valid on
    /// `other`, decided exactly by infeasibility of constraint violation.
    pub fn contains_poly(&self, other: &RationalPolyhedron) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        for c in &self.ineqs {
            let mut sys = other.to_system();
            // violation: ⟨n, x⟩ < offset
            sys.push(LinCon::new(c.normal.neg(), -c.offset.clone(), Rel::Gt));
            if sys.is_feasible() {
                return false;
            }
        }
        for c in &self.eqs {
            for (n, o) in [
                (c.normal.neg(), -c.offset.clone()),
                (c.normal.clone(), c.offset.clone()),
            ] {
                let mut sys = other.to_system();
                sys.push(LinCon::new(n, o, Rel::Gt));
                if sys.is_feasible() {
                    return false;
                }
            }
        }
        true
    }

    pub fn set_eq(&self, other: &RationalPolyhedron) -> bool {
        self.contains_poly(other) && other.contains_poly(self)
    }

    /// Polyhedron of the facet where inequality `i` is tight.
    pub fn facet(&self, i: usize) -> Result<RationalPolyhedron, PolyError> {
        if i >= self.ineqs.len() {
            return Err(PolyError::BadIndex(i));
        }
        let mut ineqs = self.ineqs.clone();
        let tight = ineqs.remove(i);
        let mut eqs = self.eqs.clone();
        eqs.push(tight);
        Ok(RationalPolyhedron {
            ambient_dim: self.ambient_dim,
            ineqs,
            eqs,
        })
    }

    /// Image under the affine map x ↦ L·x + t with L unimodular.
    pub fn affine_image(&self, linear: &IntMatrix, translate: &[Rat]) -> RationalPolyhedron {
        assert_eq!(linear.rows(), self.ambient_dim);
        assert_eq!(linear.cols(), self.ambient_dim);
        assert_eq!(translate.len(), self.ambient_dim);
        let inv = linear
            .inverse_unimodular()
            .expect("affine_image requires a unimodular linear part");
        let invt = inv.transpose();
        let map = |c: &Constraint| {
            // ⟨n, x⟩ ≥ o with x = L⁻¹(y − t) becomes ⟨(L⁻¹)ᵀ n, y⟩ ≥ o + ⟨(L⁻¹)ᵀ n, t⟩
            let n2 = invt.mul_vec(&c.normal);
            let shift = n2.dot_rat(translate);
            Constraint::new(n2, c.offset.clone() + shift)
        };
        RationalPolyhedron {
            ambient_dim: self.ambient_dim,
            ineqs: self.ineqs.iter().map(map).collect(),
            eqs: self.eqs.iter().map(map).collect(),
        }
    }
}

/// A stratum of a polyhedron: the face where the listed inequalities are
/// tight, required to have nonempty relative interior within the
/// stratification (non-tight inequalities hold strictly somewhere on it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub tight: Vec<usize>,
}

impl Stratum {
    pub fn new(mut tight: Vec<usize>) -> Self {
        tight.sort_unstable();
        tight.dedup();
        Stratum { tight }
    }

    /// System whose solutions are the relative interior of the stratum.
    fn relint_system(&self, p: &RationalPolyhedron) -> Result<LinSystem, PolyError> {
        let mut s = LinSystem::new(p.ambient_dim());
        for &i in &self.tight {
            if i >= p.ineqs().len() {
                return Err(PolyError::BadIndex(i));
            }
        }
        for (i, c) in p.ineqs().iter().enumerate() {
            let rel = if self.tight.contains(&i) {
                Rel::Eq
            } else {
                Rel::Gt
            };
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), rel));
        }
        for c in p.eqs() {
            s.push(LinCon::new(c.normal.clone(), c.offset.clone(), Rel::Eq));
        }
        Ok(s)
    }

    pub fn is_valid_for(&self, p: &RationalPolyhedron) -> Result<bool, PolyError> {
        Ok(self.relint_system(p)?.is_feasible())
    }
}

/// Tropical completion of the stratum `s` of `p`: the union of all rays
/// beginning in `s` that meet `p` in more than one point. Computed by
/// keeping exactly the constraints tight on `s` and dropping the rest.
pub fn tropical_completion(
    p: &RationalPolyhedron,
    s: &Stratum,
) -> Result<RationalPolyhedron, PolyError> {
    if !s.is_valid_for(p)? {
        return Err(PolyError::InvalidStratum);
    }
    let ineqs = s
        .tight
        .iter()
        .map(|&i| p.ineqs()[i].clone())
        .collect();
    RationalPolyhedron::new(p.ambient_dim(), ineqs, p.eqs().to_vec())
}

/// Whether the recession cone of `p` contains `v`: an infinite ray in the
/// direction of `v` fits inside `p`.
pub fn recession_contains(p: &RationalPolyhedron, v: &LatticeVector) -> Result<bool, PolyError> {
    if v.dim() != p.ambient_dim() {
        return Err(PolyError::DimMismatch);
    }
    if p.is_empty() {
        return Err(PolyError::EmptyPolyhedron);
    }
    Ok(p.ineqs().iter().all(|c| !c.normal.dot(v).is_negative())
        && p.eqs().iter().all(|c| c.normal.dot(v).is_zero()))
}

/// End-space projection along a recession direction `v`: a unimodular `u`
/// with u·v = (0,…,0,content(v)) together with the image of u·p under
/// forgetting the last coordinate.
pub fn end_projection(
    p: &RationalPolyhedron,
    v: &LatticeVector,
) -> Result<(IntMatrix, RationalPolyhedron), PolyError> {
    if v.dim() != p.ambient_dim() {
        return Err(PolyError::DimMismatch);
    }
    if v.is_zero() {
        return Err(PolyError::ZeroVector);
    }
    if !recession_contains(p, v)? {
        return Err(PolyError::NoRay);
    }
    let m = p.ambient_dim();
    let u = direction_to_last_axis(v);
    debug_assert!({
        let uv = u.mul_vec(v);
        (0..m - 1).all(|i| uv.get(i).is_zero()) && *uv.get(m - 1) == v.content()
    });

    // transform constraints to y = u·x coordinates and eliminate y_{m-1}
    let uinv = u.inverse_unimodular().expect("u is unimodular");
    let uinvt = uinv.transpose();
    let mut sys = LinSystem::new(m);
    for c in p.ineqs() {
        sys.push(LinCon::new(uinvt.mul_vec(&c.normal), c.offset.clone(), Rel::Ge));
    }
    for c in p.eqs() {
        sys.push(LinCon::new(uinvt.mul_vec(&c.normal), c.offset.clone(), Rel::Eq));
    }
    let projected = sys.eliminate(m - 1);
    let mut ineqs = vec![];
    let mut eqs = vec![];
    for c in projected.cons {
        let con = Constraint::new(c.normal, c.offset);
        match c.rel {
            Rel::Ge => ineqs.push(con),
            Rel::Eq => eqs.push(con),
            Rel::Gt => unreachable!("projection of a closed system is closed"),
        }
    }
    let pv = RationalPolyhedron::new(m - 1, ineqs, eqs)?;
    Ok((u, pv))
}

/// Unimodular matrix sending the primitive part of `v` to the last
/// standard basis vector, built from the Smith normal form of `v` as a
/// column matrix.
fn direction_to_last_axis(v: &LatticeVector) -> IntMatrix {
    let m = v.dim();
    let w = v.primitive_part();
    let mut col = IntMatrix::zero(m, 1);
    for i in 0..m {
        col.set(i, 0, w.get(i).clone());
    }
    // U·w·V = e_0 with V = (±1), so (V₀₀·U)·w = e_0
    let s = snf(&col);
    let mut u = s.u;
    if s.v.get(0, 0) == &Int::from(-1) {
        for j in 0..m {
            let x = -u.get(0, j).clone();
            u.set(0, j, x);
        }
    }
    // swap coordinate 0 into the last slot
    let mut perm = IntMatrix::zero(m, m);
    for i in 0..m {
        let target = if i == 0 {
            m - 1
        } else if i == m - 1 {
            0
        } else {
            i
        };
        perm.set(target, i, Int::one());
    }
    perm.mul(&u)
}
