//! Exact integer linear algebra: lattice vectors, integer matrices, Smith
//! normal form and the lattice constructions built on it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element of a lattice `Z^n`, stored as arbitrary-precision coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Canonical pairing with a vector of the dual lattice.
    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        dot(&self.0, &other.0)
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Nonzero with coprime coordinates.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray; the zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|a| a / &g).collect())
    }

    /// Converts small coordinates back to machine integers, if they fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|a| a.to_i64()).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVector(v)
    }
}

/// Shorthand for building a lattice vector from small integers.
pub fn lv(coords: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(coords)
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data: entries.iter().map(|&e| BigInt::from(e)).collect() }
    }

    /// Builds a matrix whose rows are the given vectors; `cols` is needed for the empty case.
    pub fn from_rows(rows: &[LatticeVector], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.rank(), cols, "row length mismatch");
            for (j, c) in r.coords().iter().enumerate() {
                m.data[i * cols + j] = c.clone();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors; `rows` is needed for the empty case.
    pub fn from_cols(cols: &[LatticeVector], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vectors(&self) -> Vec<LatticeVector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank(), "vector rank does not match matrix");
        LatticeVector(
            (0..self.rows)
                .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v.coords()))
                .collect(),
        )
    }

    /// Submatrix of the given row range and all columns.
    pub fn row_range(&self, from: usize, to: usize) -> Matrix {
        Matrix {
            rows: to - from,
            cols: self.cols,
            data: self.data[from * self.cols..to * self.cols].to_vec(),
        }
    }

    /// Submatrix of the given column range and all rows.
    pub fn col_range(&self, from: usize, to: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                m.data[i * (to - from) + j - from] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).into_coords()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.row_vectors(), self.cols)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Homomorphism `Z^source_rank -> Z^target_rank` given by a matrix on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    matrix: Matrix,
}

impl LatticeMap {
    pub fn new(matrix: Matrix) -> Self {
        LatticeMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.apply(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap { matrix: self.matrix.mul(&other.matrix) }
    }
}

/// `A = U·S·V` with `U`, `V` unimodular and `S` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
    pub u_inv: Matrix,
    pub v_inv: Matrix,
    /// The `min(rows, cols)` diagonal entries of `S`, nonnegative.
    pub diagonal: Vec<BigInt>,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct SnfState {
    s: Matrix,
    u: Matrix,
    v: Matrix,
    u_inv: Matrix,
    v_inv: Matrix,
}

impl SnfState {
    // row_i += c * row_t
    fn row_add(&mut self, i: usize, t: usize, c: &BigInt) {
        let (m, n) = (self.s.rows, self.s.cols);
        for j in 0..n {
            let d = self.s.get(t, j) * c;
            self.s.data[i * n + j] += d;
        }
        for r in 0..m {
            let d = self.u.get(r, i) * c;
            self.u.data[r * m + t] -= d;
        }
        for j in 0..m {
            let d = self.u_inv.get(t, j) * c;
            self.u_inv.data[i * m + j] += d;
        }
    }

    // col_j += c * col_t
    fn col_add(&mut self, j: usize, t: usize, c: &BigInt) {
        let (m, n) = (self.s.rows, self.s.cols);
        for r in 0..m {
            let d = self.s.get(r, t) * c;
            self.s.data[r * n + j] += d;
        }
        for k in 0..n {
            let d = self.v.get(j, k) * c;
            self.v.data[t * n + k] -= d;
        }
        for r in 0..n {
            let d = self.v_inv.get(r, t) * c;
            self.v_inv.data[r * n + j] += d;
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (m, n) = (self.s.rows, self.s.cols);
        for j in 0..n {
            self.s.data.swap(a * n + j, b * n + j);
        }
        for r in 0..m {
            self.u.data.swap(r * m + a, r * m + b);
        }
        for j in 0..m {
            self.u_inv.data.swap(a * m + j, b * m + j);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (m, n) = (self.s.rows, self.s.cols);
        for r in 0..m {
            self.s.data.swap(r * n + a, r * n + b);
        }
        for k in 0..n {
            self.v.data.swap(a * n + k, b * n + k);
        }
        for r in 0..n {
            self.v_inv.data.swap(r * n + a, r * n + b);
        }
    }

    fn row_negate(&mut self, i: usize) {
        let (m, n) = (self.s.rows, self.s.cols);
        for j in 0..n {
            let x = -&self.s.data[i * n + j];
            self.s.data[i * n + j] = x;
        }
        for r in 0..m {
            let x = -&self.u.data[r * m + i];
            self.u.data[r * m + i] = x;
        }
        for j in 0..m {
            let x = -&self.u_inv.data[i * m + j];
            self.u_inv.data[i * m + j] = x;
        }
    }
}

/// Smith normal form. Pivots are the smallest nonzero absolute entry of the
/// remaining block, ties broken in row-major order.
pub fn smith_normal_form(a: &Matrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut st = SnfState {
        s: a.clone(),
        u: Matrix::identity(m),
        v: Matrix::identity(n),
        u_inv: Matrix::identity(m),
        v_inv: Matrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let e = st.s.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => e.abs() < st.s.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        st.row_swap(t, pi);
        st.col_swap(t, pj);
        let p = st.s.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..m {
            let q = st.s.get(i, t).div_floor(&p);
            if !q.is_zero() {
                st.row_add(i, t, &-q);
            }
            if !st.s.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..n {
            let q = st.s.get(t, j).div_floor(&p);
            if !q.is_zero() {
                st.col_add(j, t, &-q);
            }
            if !st.s.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        let bad_row = (t + 1..m).find(|&i| (t + 1..n).any(|j| !st.s.get(i, j).is_multiple_of(&p)));
        if let Some(i) = bad_row {
            st.row_add(t, i, &BigInt::one());
            continue;
        }
        if p.is_negative() {
            st.row_negate(t);
        }
        t += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| st.s.get(i, i).clone()).collect();
    SmithDecomposition { u: st.u, s: st.s, v: st.v, u_inv: st.u_inv, v_inv: st.v_inv, diagonal }
}

/// Index of a sublattice or of an image: finite or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(k) => Some(k),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[target : image]`.
pub fn cokernel_index(f: &LatticeMap) -> Index {
    let snf = smith_normal_form(f.matrix());
    if snf.rank() < f.target_rank() {
        return Index::Infinite;
    }
    Index::Finite(snf.diagonal.iter().fold(BigInt::one(), |acc, d| acc * d))
}

/// Basis of the (saturated) kernel lattice.
pub fn kernel_basis(f: &LatticeMap) -> Vec<LatticeVector> {
    let snf = smith_normal_form(f.matrix());
    (snf.rank()..f.source_rank()).map(|j| snf.v_inv.col(j)).collect()
}

/// Integer vectors orthogonal to every given vector, as a lattice basis.
pub fn orthogonal_complement(vectors: &[LatticeVector], rank: usize) -> Vec<LatticeVector> {
    kernel_basis(&LatticeMap::new(Matrix::from_rows(vectors, rank)))
}

/// Basis of `span_R(vectors) ∩ Z^rank`.
pub fn saturation(vectors: &[LatticeVector], rank: usize) -> Vec<LatticeVector> {
    let perp = orthogonal_complement(vectors, rank);
    orthogonal_complement(&perp, rank)
}

/// `Z^n / sub` with the free part presented by lifts and a projection.
#[derive(Clone, Debug)]
pub struct QuotientLattice {
    pub ambient_rank: usize,
    pub sublattice_basis: Vec<LatticeVector>,
    /// Lifts in `Z^n` of a basis of the free part.
    pub quotient_basis: Vec<LatticeVector>,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    /// Projection onto the free part, `(n - k) x n`; maps each lift to a standard basis vector.
    pub projection: Matrix,
}

impl QuotientLattice {
    pub fn free_rank(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn project(&self, v: &LatticeVector) -> LatticeVector {
        self.projection.apply(v)
    }
}

pub fn quotient_lattice(ambient_rank: usize, sub: &[LatticeVector]) -> Result<QuotientLattice> {
    let k = sub.len();
    let b = Matrix::from_cols(sub, ambient_rank);
    let snf = smith_normal_form(&b);
    if snf.rank() < k {
        return Err(Error::DependentVectors);
    }
    let torsion = snf.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
    Ok(QuotientLattice {
        ambient_rank,
        sublattice_basis: sub.to_vec(),
        quotient_basis: (k..ambient_rank).map(|j| snf.u.col(j)).collect(),
        torsion,
        projection: snf.u_inv.row_range(k, ambient_rank),
    })
}

/// A right inverse `ξ` with `f ∘ ξ = Id`, from the Smith form of `f`.
pub fn section_of_surjection(f: &LatticeMap) -> Result<LatticeMap> {
    match cokernel_index(f) {
        Index::Finite(k) if k.is_one() => {}
        _ => return Err(Error::NotSurjective),
    }
    let snf = smith_normal_form(f.matrix());
    let (m, n) = (f.target_rank(), f.source_rank());
    let mut emb = Matrix::zeros(n, m);
    for i in 0..m {
        emb.set(i, i, BigInt::one());
    }
    Ok(LatticeMap::new(snf.v_inv.mul(&emb).mul(&snf.u_inv)))
}

/// The transpose map on dual lattices.
pub fn dual_map(f: &LatticeMap) -> LatticeMap {
    LatticeMap::new(f.matrix().transpose())
}

/// Integer left inverse of a matrix whose columns form a saturated system.
pub(crate) fn left_inverse(b: &Matrix) -> Result<Matrix> {
    let snf = smith_normal_form(b);
    if snf.rank() < b.cols() || snf.diagonal.iter().any(|d| !d.is_one()) {
        return Err(Error::NotSaturated);
    }
    let (n, k) = (b.rows(), b.cols());
    let mut proj = Matrix::zeros(k, n);
    for i in 0..k {
        proj.set(i, i, BigInt::one());
    }
    Ok(snf.v_inv.mul(&proj).mul(&snf.u_inv))
}

pub(crate) fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Rank over the rationals of a list of vectors of length `cols`.
pub fn rational_rank(rows: &[LatticeVector], cols: usize) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| to_rational(r.coords())).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[rank][c];
            for j in c..cols {
                let d = &f * &a[rank][j];
                a[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `Σ λ_i g_i = v` for independent generators `g_i`; `None` if `v` is outside their span.
pub fn solve_in_span(gens: &[LatticeVector], v: &LatticeVector) -> Option<Vec<BigRational>> {
    let n = v.rank();
    let k = gens.len();
    // Augmented system with k unknowns and n equations.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                gens.iter().map(|g| BigRational::from_integer(g.coords()[i].clone())).collect();
            row.push(BigRational::from_integer(v.coords()[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..=k {
            a[r][j] *= &inv;
        }
        for i in 0..n {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..=k {
                let d = &f * &a[r][j];
                a[i][j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    if pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| a[i][k].clone()).collect())
}

/// Integer coordinates of `v` in the lattice basis `basis`, if `v` lies in that lattice.
pub fn coordinates_in(basis: &[LatticeVector], v: &LatticeVector) -> Option<LatticeVector> {
    let lam = solve_in_span(basis, v)?;
    lam.into_iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect::<Option<Vec<_>>>()
        .map(LatticeVector::new)
}
