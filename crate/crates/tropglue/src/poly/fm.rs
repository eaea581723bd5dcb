//! Fourier–Motzkin elimination over exact rationals, with strict/non-strict
//! inequality tracking. Internal engine behind feasibility tests, stratum
//! validation and end-space projection.

use num_traits::{Signed, Zero};

use crate::lattice::LatticeVector;
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    /// ⟨normal, x⟩ ≥ offset
    Ge,
    /// ⟨normal, x⟩ > offset
    Gt,
    /// ⟨normal, x⟩ = offset
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinCon {
    pub normal: LatticeVector,
    pub offset: Rat,
    pub rel: Rel,
}

impl LinCon {
    pub fn new(normal: LatticeVector, offset: Rat, rel: Rel) -> Self {
        LinCon {
            normal,
            offset,
            rel,
        }
        .reduced()
    }

    /// Divides the normal by its content, rescaling the offset.
    pub fn reduced(self) -> LinCon {
        let c = self.normal.content();
        if c.is_zero() || c == Int::from(1) {
            return self;
        }
        LinCon {
            normal: self.normal.primitive_part(),
            offset: self.offset / Rat::from(c),
            rel: self.rel,
        }
    }

    /// For a zero-normal constraint, whether `0 rel offset` holds.
    fn trivially_true(&self) -> bool {
        debug_assert!(self.normal.is_zero());
        match self.rel {
            Rel::Ge => !self.offset.is_positive(),
            Rel::Gt => self.offset.is_negative(),
            Rel::Eq => self.offset.is_zero(),
        }
    }
}

/// A conjunction of linear constraints in a fixed ambient dimension.
#[derive(Clone, Debug)]
pub struct LinSystem {
    pub dim: usize,
    pub cons: Vec<LinCon>,
}

impl LinSystem {
    pub fn new(dim: usize) -> Self {
        LinSystem { dim, cons: vec![] }
    }

    pub fn push(&mut self, c: LinCon) {
        debug_assert_eq!(c.normal.dim(), self.dim);
        self.cons.push(c);
    }

    /// Eliminates coordinate `j`, returning the system on the remaining
    /// coordinates (ambient dimension drops by one). The result is the
    /// exact projection of the solution set.
    pub fn eliminate(&self, j: usize) -> LinSystem {
        assert!(j < self.dim);
        let drop_coord = |v: &LatticeVector| -> LatticeVector {
            let mut e: Vec<Int> = v.entries().to_vec();
            e.remove(j);
            LatticeVector::new(e)
        };
        let mut out = LinSystem::new(self.dim - 1);
        let push_dedup = |sys: &mut LinSystem, c: LinCon| {
            let c = c.reduced();
            if c.normal.is_zero() && c.trivially_true() {
                return;
            }
            if !sys.cons.contains(&c) {
                sys.cons.push(c);
            }
        };

        // substitute through an equality containing x_j, if any
        if let Some(eq_pos) = self
            .cons
            .iter()
            .position(|c| c.rel == Rel::Eq && !c.normal.get(j).is_zero())
        {
            let eq = &self.cons[eq_pos];
            let e = eq.normal.get(j).clone();
            for (idx, c) in self.cons.iter().enumerate() {
                if idx == eq_pos {
                    continue;
                }
                let a = c.normal.get(j).clone();
                if a.is_zero() {
                    push_dedup(
                        &mut out,
                        LinCon {
                            normal: drop_coord(&c.normal),
                            offset: c.offset.clone(),
                            rel: c.rel,
                        },
                    );
                    continue;
                }
                // |e|·c − sign(e)·a·eq cancels coordinate j; the positive
                // multiplier |e| preserves the relation
                let abs_e = if e >= Int::zero() { e.clone() } else { -e.clone() };
                let sgn: Int = if e >= Int::zero() {
                    Int::from(1)
                } else {
                    Int::from(-1)
                };
                let coef = &sgn * &a;
                let normal = LatticeVector::new(
                    c.normal
                        .entries()
                        .iter()
                        .zip(eq.normal.entries())
                        .map(|(cn, en)| cn * &abs_e - &coef * en)
                        .collect(),
                );
                let offset =
                    &c.offset * Rat::from(abs_e.clone()) - eq.offset.clone() * Rat::from(coef);
                push_dedup(
                    &mut out,
                    LinCon {
                        normal: drop_coord(&normal),
                        offset,
                        rel: c.rel,
                    },
                );
            }
            return out;
        }

        // no equality involves x_j: pair positive and negative inequalities
        let mut pos = vec![];
        let mut neg = vec![];
        for c in &self.cons {
            let a = c.normal.get(j);
            if a.is_zero() {
                push_dedup(
                    &mut out,
                    LinCon {
                        normal: drop_coord(&c.normal),
                        offset: c.offset.clone(),
                        rel: c.rel,
                    },
                );
            } else if a > &Int::zero() {
                pos.push(c);
            } else {
                neg.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let pj = p.normal.get(j).clone();
                let nj = -n.normal.get(j).clone(); // positive
                let normal = LatticeVector::new(
                    p.normal
                        .entries()
                        .iter()
                        .zip(n.normal.entries())
                        .map(|(pe, ne)| pe * &nj + ne * &pj)
                        .collect(),
                );
                let offset = &p.offset * Rat::from(nj) + &n.offset * Rat::from(pj);
                let rel = if p.rel == Rel::Gt || n.rel == Rel::Gt {
                    Rel::Gt
                } else {
                    Rel::Ge
                };
                push_dedup(
                    &mut out,
                    LinCon {
                        normal: drop_coord(&normal),
                        offset,
                        rel,
                    },
                );
            }
        }
        out
    }

    /// Exact feasibility over the rationals.
    pub fn is_feasible(&self) -> bool {
        let mut sys = self.clone();
        while sys.dim > 0 {
            // short-circuit on zero-normal contradictions
            if sys
                .cons
                .iter()
                .any(|c| c.normal.is_zero() && !c.trivially_true())
            {
                return false;
            }
            sys = sys.eliminate(0);
        }
        sys.cons.iter().all(|c| c.trivially_true())
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.dim);
        self.cons.iter().all(|c| {
            let lhs = c.normal.dot_rat(x);
            match c.rel {
                Rel::Ge => lhs >= c.offset,
                Rel::Gt => lhs > c.offset,
                Rel::Eq => lhs == c.offset,
            }
        })
    }
}
