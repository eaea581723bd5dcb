//! Exact integer linear algebra over arbitrary-precision integers: Hermite
//! and Smith normal forms, saturated kernels, cokernel torsion orders and
//! rational solving. Everything here is a pure function on immutable values.


use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// Integer vector with a fixed ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    entries: Vec<Int>,
}

impl LatticeVector {
    pub fn new(entries: Vec<Int>) -> Self {
        LatticeVector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector {
            entries: vec![Int::zero(); dim],
        }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector {
            entries: entries.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &LatticeVector) -> Int {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn dot_rat(&self, other: &[Rat]) -> Rat {
        assert_eq!(self.dim(), other.len(), "dimension mismatch in dot");
        self.entries
            .iter()
            .zip(other)
            .map(|(a, b)| Rat::from(a.clone()) * b)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector {
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), other.dim());
        LatticeVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        self.add(&other.neg())
    }

    /// gcd of the absolute values of the entries; `0` for the zero vector.
    ///
    /// This is the multiplicity of a tropical edge with this momentum: the
    /// zero vector (an edge sent to a point) has content 0.
    pub fn content(&self) -> Int {
        self.entries
            .iter()
            .fold(Int::zero(), |acc, e| acc.gcd(e))
    }

    /// Divides all entries by the content; identity on the zero vector.
    pub fn primitive_part(&self) -> LatticeVector {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        LatticeVector {
            entries: self.entries.iter().map(|e| e / &c).collect(),
        }
    }

    pub fn into_entries(self) -> Vec<Int> {
        self.entries
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector::new(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.dim(), "shape mismatch in mul_vec");
        LatticeVector::new(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| self.get(i, j) * v.get(j))
                        .sum::<Int>()
                })
                .collect(),
        )
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_rat_vec");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from(self.get(i, j).clone()) * &v[j])
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries
                .swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries
                .swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &Int) {
        for j in 0..self.cols {
            let t = self.get(k, j) * q;
            let idx = i * self.cols + j;
            self.entries[idx] -= t;
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &Int) {
        for i in 0..self.rows {
            let t = self.get(i, k) * q;
            let idx = i * self.cols + j;
            self.entries[idx] -= t;
        }
    }

    /// Replaces rows (a, b) with (x·a + y·b, z·a + w·b).
    fn row_combine(&mut self, a: usize, b: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        for j in 0..self.cols {
            let ra = self.get(a, j).clone();
            let rb = self.get(b, j).clone();
            self.set(a, j, x * &ra + y * &rb);
            self.set(b, j, z * &ra + w * &rb);
        }
    }

    /// Replaces cols (a, b) with (x·a + y·b, z·a + w·b).
    fn col_combine(&mut self, a: usize, b: usize, x: &Int, y: &Int, z: &Int, w: &Int) {
        for i in 0..self.rows {
            let ca = self.get(i, a).clone();
            let cb = self.get(i, b).clone();
            self.set(i, a, x * &ca + y * &cb);
            self.set(i, b, z * &ca + w * &cb);
        }
    }

    /// Inverse of a matrix with |det| = 1; `None` if the matrix is not
    /// unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let (h, u) = hnf(self);
        if h != IntMatrix::identity(self.rows) {
            return None;
        }
        Some(u)
    }
}

/// Row Hermite normal form: returns `(h, u)` with `h = u·m`, `u` unimodular,
/// `h` in echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        // clear entries below position (r, c) using extended-gcd row ops
        for i in (r + 1)..m.rows() {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(r, c).clone();
            let b = h.get(i, c).clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // [x y; -b/g a/g] has determinant 1
            let mb = -(&b / &g);
            let ag = &a / &g;
            h.row_combine(r, i, &eg.x, &eg.y, &mb, &ag);
            u.row_combine(r, i, &eg.x, &eg.y, &mb, &ag);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&pivot);
            if !q.is_zero() {
                h.row_sub(i, r, &q);
                u.row_sub(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form `U·M·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors on the diagonal, each dividing the next; length
    /// `min(rows, cols)`, zeros at the end.
    pub d: Vec<Int>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut b = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());
    let mut t = 0;
    while t < n {
        // pivot: smallest nonzero |entry| in the trailing submatrix,
        // first in row-major order among ties
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows() {
            for j in t..m.cols() {
                if b.get(i, j).is_zero() {
                    continue;
                }
                match &pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        let (pi, pj) = (*pi, *pj);
                        if b.get(i, j).abs() < b.get(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        b.swap_rows(t, pi);
        u.swap_rows(t, pi);
        b.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // clear column t; plain elimination when the pivot divides,
            // so the pivot row is untouched and no entries reappear
            for i in (t + 1)..m.rows() {
                if b.get(i, t).is_zero() {
                    continue;
                }
                let a = b.get(t, t).clone();
                let c = b.get(i, t).clone();
                if (&c % &a).is_zero() {
                    let q = &c / &a;
                    b.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    continue;
                }
                let eg = a.extended_gcd(&c);
                let g = eg.gcd;
                let mc = -(&c / &g);
                let ag = &a / &g;
                b.row_combine(t, i, &eg.x, &eg.y, &mc, &ag);
                u.row_combine(t, i, &eg.x, &eg.y, &mc, &ag);
            }
            // clear row t
            let mut row_dirty = false;
            for j in (t + 1)..m.cols() {
                if b.get(t, j).is_zero() {
                    continue;
                }
                let a = b.get(t, t).clone();
                let c = b.get(t, j).clone();
                if (&c % &a).is_zero() {
                    let q = &c / &a;
                    b.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    continue;
                }
                let eg = a.extended_gcd(&c);
                let g = eg.gcd;
                let mc = -(&c / &g);
                let ag = &a / &g;
                b.col_combine(t, j, &eg.x, &eg.y, &mc, &ag);
                v.col_combine(t, j, &eg.x, &eg.y, &mc, &ag);
                row_dirty = true;
            }
            // clearing the row may have reintroduced entries in the column
            if row_dirty && (t + 1..m.rows()).any(|i| !b.get(i, t).is_zero()) {
                continue;
            }
            // divisibility: d_t must divide the whole trailing block
            let dt = b.get(t, t).clone();
            let mut bad: Option<usize> = None;
            'scan: for i in (t + 1)..m.rows() {
                for j in (t + 1)..m.cols() {
                    if !(b.get(i, j) % &dt).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    // fold the offending row into row t and re-clear
                    let one = Int::one();
                    let zero = Int::zero();
                    b.row_combine(t, i, &one, &one, &zero, &one);
                    u.row_combine(t, i, &one, &one, &zero, &one);
                }
                None => break,
            }
        }
        if b.get(t, t).is_negative() {
            b.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let d = (0..n).map(|i| b.get(i, i).clone()).collect();
    SnfResult { d, u, v }
}

pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// Order of the cokernel Z^rows / (column lattice of m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(Int),
    Infinite,
}

/// |Z^k / m(Z^cols)| for m with k rows: infinite when rank(m) < k,
/// otherwise the product of the nonzero invariant factors.
pub fn cokernel_order(m: &IntMatrix) -> CokernelOrder {
    let s = snf(m);
    if s.rank() < m.rows() {
        return CokernelOrder::Infinite;
    }
    let prod = s
        .d
        .iter()
        .filter(|x| !x.is_zero())
        .fold(Int::one(), |acc, x| acc * x);
    CokernelOrder::Finite(prod)
}

/// Basis of the saturated integer kernel {x in Z^cols : m·x = 0}.
///
/// The basis spans the rational kernel and is primitive: Z^cols modulo the
/// span is torsion-free. Cardinality is cols - rank(m).
pub fn kernel_basis(m: &IntMatrix) -> Vec<LatticeVector> {
    let s = snf(m);
    let r = s.rank();
    // columns of V past the rank are a basis of the kernel; V unimodular
    // makes them primitive and saturated
    (r..m.cols()).map(|j| s.v.col(j)).collect()
}

/// Exact rational solution of m·x = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<LatticeVector>,
}

/// Solves m·x = b over the rationals; `None` means no rational solution.
pub fn solve_rational(m: &IntMatrix, b: &[Rat]) -> Option<RationalSolution> {
    assert_eq!(b.len(), m.rows(), "rhs length mismatch");
    let s = snf(m);
    let r = s.rank();
    let c = s.u.mul_rat_vec(b);
    // rows past the rank must vanish
    if c[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![Rat::zero(); m.cols()];
    for j in 0..r {
        y[j] = &c[j] / Rat::from(s.d[j].clone());
    }
    let particular = s.v.mul_rat_vec(&y);
    Some(RationalSolution {
        particular,
        kernel: (r..m.cols()).map(|j| s.v.col(j)).collect(),
    })
}

/// gcd of absolute values of entries; 0 for the zero vector.
pub fn content(v: &LatticeVector) -> Int {
    v.content()
}
