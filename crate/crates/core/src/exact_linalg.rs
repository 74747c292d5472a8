//! Exact integer and rational linear algebra: Hermite and Smith normal forms,
//! integer kernels, sublattice comparison, dual cones of rational polyhedral
//! cones and a small exact simplex used for feasibility questions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone is not full-dimensional (rank {rank} in ambient rank {ambient})")]
    NotFullDimensional { rank: usize, ambient: usize },
    #[error("{0} is not a sublattice of the given lattice")]
    NotSublattice(String),
}

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "row {i} has length {} but {cols} columns were requested",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
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

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = factor * &self.data[source * self.cols + j];
            self.data[target * self.cols + j] += add;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = factor * &self.data[i * self.cols + source];
            self.data[i * self.cols + target] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc + x * y })
}

pub fn to_bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Divides a vector by the gcd of its entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Integer arithmetic used by the echelon routines. The `i64` implementation
/// reports overflow by returning `None`, which makes callers retry with `BigInt`.
trait EchelonInt: Clone + PartialEq + std::fmt::Debug {
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    /// a*x + b*y
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// (g, s, t) with g = s*a + t*b, g > 0
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn div_exact(&self, d: &Self) -> Self;
    fn floor_div(&self, d: &Self) -> Self;
    fn unit_value() -> Self;
}

impl EchelonInt for i64 {
    fn unit_value() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_add(b.checked_mul(*y)?)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        if *a == i64::MIN || *b == i64::MIN {
            return None;
        }
        let e = a.extended_gcd(b);
        if e.gcd < 0 {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn floor_div(&self, d: &Self) -> Self {
        Integer::div_floor(self, d)
    }
}

impl EchelonInt for BigInt {
    fn unit_value() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x + b * y)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn floor_div(&self, d: &Self) -> Self {
        Integer::div_floor(self, d)
    }
}

fn leading_index<T: EchelonInt>(row: &[T]) -> Option<usize> {
    row.iter().position(|x| !x.is_nil())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Returns the nonzero rows, sorted by pivot column, with positive pivots
/// and entries above each pivot reduced into `[0, pivot)`.
fn echelon<T: EchelonInt>(rows: &[Vec<T>], cols: usize) -> Option<Vec<Vec<T>>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for input in rows {
        let mut r = input.clone();
        loop {
            let Some(c) = leading_index(&r) else { break };
            match pivots.iter().position(|&p| p == c) {
                Some(k) => {
                    let b = &basis[k];
                    let (g, s, t) = T::ext_gcd(&b[c], &r[c])?;
                    let bq = b[c].div_exact(&g);
                    let rq = r[c].div_exact(&g);
                    let mut new_b = Vec::with_capacity(cols);
                    let mut new_r = Vec::with_capacity(cols);
                    for j in 0..cols {
                        new_b.push(T::combine(&s, &b[j], &t, &r[j])?);
                        new_r.push(T::combine(&bq, &r[j], &rq.negated()?, &b[j])?);
                    }
                    basis[k] = new_b;
                    r = new_r;
                }
                None => {
                    if r[c].is_neg() {
                        r = r.iter().map(|x| x.negated()).collect::<Option<Vec<_>>>()?;
                    }
                    basis.push(r);
                    pivots.push(c);
                    break;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&k| pivots[k]);
    let mut sorted: Vec<Vec<T>> = order.iter().map(|&k| basis[k].clone()).collect();
    let sorted_pivots: Vec<usize> = order.iter().map(|&k| pivots[k]).collect();
    for k in 0..sorted.len() {
        let p = sorted_pivots[k];
        let pivot = sorted[k][p].clone();
        for j in 0..k {
            let q = sorted[j][p].floor_div(&pivot);
            if q.is_nil() {
                continue;
            }
            let neg_q = q.negated()?;
            let mut reduced = Vec::with_capacity(cols);
            for col in 0..cols {
                reduced.push(T::combine(&T::unit_value(), &sorted[j][col], &neg_q, &sorted[k][col])?);
            }
            sorted[j] = reduced;
        }
    }
    Some(sorted)
}

fn small_rows(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()).collect()
}

/// Hermite normal form of the row lattice, trying machine integers first.
pub fn hnf_rows(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    if let Some(small) = small_rows(rows) {
        if let Some(h) = echelon(&small, cols) {
            return h.into_iter().map(|r| to_bigint_vec(&r)).collect();
        }
    }
    echelon(rows, cols).expect("BigInt arithmetic does not overflow")
}

/// Hermite normal form `H` of `a` together with a unimodular `U` with `U a = H`.
/// `H` has the same shape as `a`; its zero rows sit at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let augmented: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let echelon_rows = hnf_rows(&augmented, n + m);
    // Rows whose pivot lies in the identity block form the left kernel; they are
    // listed after the rows carrying the nonzero part of H.
    let mut h = IntMatrix::zeros(m, n);
    let mut u = IntMatrix::zeros(m, m);
    for (i, row) in echelon_rows.iter().enumerate() {
        for j in 0..n {
            h.set(i, j, row[j].clone());
        }
        for j in 0..m {
            u.set(i, j, row[n + j].clone());
        }
    }
    (h, u)
}

/// A basis, in Hermite normal form, of `{x in Z^cols : a x = 0}`.
pub fn kernel_lattice_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let m = a.rows();
    let n = a.cols();
    let augmented: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..m).map(|i| a.get(i, j).clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    hnf_rows(&augmented, m + n)
        .into_iter()
        .filter(|row| row[..m].iter().all(|x| x.is_zero()))
        .map(|row| row[m..].to_vec())
        .collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    hnf_rows(&a.to_rows(), a.cols()).len()
}

pub fn rank_of_rows(rows: &[Vec<BigInt>], cols: usize) -> usize {
    hnf_rows(rows, cols).len()
}

/// `U a V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries, each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -Integer::div_floor(d.get(i, t), d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -Integer::div_floor(d.get(t, j), d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(u, d, v)
}

fn finish_smith(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> SmithForm {
    SmithForm { u, d, v }
}

/// A lattice in `Z^ambient`, kept as a Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(ambient: usize, generators: &[Vec<BigInt>]) -> Self {
        let basis = hnf_rows(generators, ambient);
        let pivots = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        Lattice { ambient, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Integer coefficients expressing `v` in the Hermite basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coeffs.push(q);
        }
        rest.iter().all(|x| x.is_zero()).then_some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }
}

/// Whether two generating sets span the same lattice, by mutual membership.
pub fn sublattice_equal(a: &[Vec<BigInt>], b: &[Vec<BigInt>], ambient: usize) -> bool {
    let la = Lattice::from_generators(ambient, a);
    let lb = Lattice::from_generators(ambient, b);
    la.is_sublattice_of(&lb) && lb.is_sublattice_of(&la)
}

/// Index of `sub` in `sup`; `None` when the index is infinite.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<Option<BigInt>, LinalgError> {
    let coords: Vec<Vec<BigInt>> = sub
        .basis()
        .iter()
        .map(|b| sup.coordinates(b))
        .collect::<Option<_>>()
        .ok_or_else(|| LinalgError::NotSublattice("first argument".into()))?;
    if sub.rank() < sup.rank() {
        return Ok(None);
    }
    let h = Lattice::from_generators(sup.rank(), &coords);
    Ok(Some(h.basis.iter().zip(&h.pivots).fold(BigInt::one(), |acc, (r, &p)| acc * &r[p])))
}

fn to_rational_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Reduced row echelon form over the rationals, returning pivot columns.
pub fn rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the rational nullspace `{x : rows x = 0}`.
pub fn rational_nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m[i][f].clone();
            }
            x
        })
        .collect()
}

pub fn rational_rank(rows: &[Vec<BigRational>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Solves `a x = b` over the rationals when a solution exists.
pub fn rational_solve(a: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][cols].clone();
    }
    Some(x)
}

/// Clears denominators and divides by the content.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    primitive(&ints)
}

/// Rational polyhedral cone generated by integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    pub ambient_rank: usize,
    pub generators: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct DdRay {
    vector: Vec<BigInt>,
    zeros: Bits,
}

/// Primitive integer extreme rays of the dual cone `{f : <f, g> >= 0 for all generators g}`,
/// computed by the double description method and sorted lexicographically.
pub fn dual_cone_extreme_rays(cone: &RationalCone) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    let d = cone.ambient_rank;
    let gens = &cone.generators;
    if let Some(g) = gens.iter().find(|g| g.len() != d) {
        return Err(LinalgError::DimensionMismatch(format!("generator of length {} in ambient rank {d}", g.len())));
    }
    // greedy choice of d independent generators
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if chosen.len() == d {
            break;
        }
        chosen_rows.push(g.clone());
        if rank_of_rows(&chosen_rows, d) == chosen_rows.len() {
            chosen.push(i);
        } else {
            chosen_rows.pop();
        }
    }
    if chosen.len() < d {
        return Err(LinalgError::NotFullDimensional { rank: chosen.len(), ambient: d });
    }
    let n = gens.len();
    let b = to_rational_rows(&chosen_rows);
    let mut rays: Vec<DdRay> = Vec::new();
    for k in 0..d {
        let rhs: Vec<BigRational> =
            (0..d).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect();
        let x = rational_solve(&b, &rhs, d).expect("chosen generators are independent");
        let vector = primitive_integer_vector(&x);
        let mut zeros = Bits::new(n);
        for (pos, &gi) in chosen.iter().enumerate() {
            if pos != k {
                zeros.set(gi);
            }
        }
        rays.push(DdRay { vector, zeros });
    }
    let chosen_set: BTreeSet<usize> = chosen.iter().copied().collect();
    for (gi, g) in gens.iter().enumerate() {
        if chosen_set.contains(&gi) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(&r.vector, g)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<DdRay> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if (common.count() as usize) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|o| o == p || o == q || !common.subset_of(&rays[o].zeros));
                if !adjacent {
                    continue;
                }
                let combo: Vec<BigInt> = rays[q]
                    .vector
                    .iter()
                    .zip(&rays[p].vector)
                    .map(|(nq, np)| &values[p] * nq - &values[q] * np)
                    .collect();
                let mut zeros = common;
                zeros.set(gi);
                next.push(DdRay { vector: primitive(&combo), zeros });
            }
        }
        let old = std::mem::take(&mut rays);
        for (i, mut r) in old.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.set(gi);
            }
            rays.push(r);
        }
        rays.extend(next);
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.vector).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Cross-check for [`dual_cone_extreme_rays`]: every extreme ray is the normal of
/// some `rank - 1` independent generators, so enumerate those subsets.
pub fn brute_force_dual_rays(cone: &RationalCone) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    let d = cone.ambient_rank;
    let rows = to_rational_rows(&cone.generators);
    if rational_rank(&rows, d) < d {
        return Err(LinalgError::NotFullDimensional { rank: rational_rank(&rows, d), ambient: d });
    }
    let mut found: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    combinations(rows.len(), d - 1, &mut |subset| {
        let sub: Vec<Vec<BigRational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let null = rational_nullspace(&sub, d);
        if null.len() != 1 {
            return;
        }
        let f = primitive_integer_vector(&null[0]);
        let values: Vec<BigInt> = cone.generators.iter().map(|g| dot(&f, g)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            found.insert(f);
        } else if values.iter().all(|v| !v.is_positive()) {
            found.insert(f.iter().map(|x| -x).collect());
        }
    });
    Ok(found.into_iter().collect())
}

/// Finds `x >= 0` with `a x = b` by a two-phase simplex over the rationals
/// using Bland's rule, or reports infeasibility.
pub fn nonnegative_solution(a: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    let m = a.len();
    // tableau columns: original (cols), artificial (m), rhs
    let width = cols + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let negate = b[i].is_negative();
        let mut r = Vec::with_capacity(width);
        for x in row {
            r.push(if negate { -x.clone() } else { x.clone() });
        }
        for j in 0..m {
            r.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        r.push(if negate { -b[i].clone() } else { b[i].clone() });
        t.push(r);
    }
    // objective row: minimize the sum of artificials, written as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..cols {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    loop {
        let Some(enter) = (0..cols + m).find(|&j| obj[j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else { break };
        let inv = t[pr][enter].recip();
        for x in t[pr].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[pr] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Finds an integer `f` with `<f, e> = 0` for every row of `equalities` and
/// `<f, g> >= 1` for every row of `positives`, if one exists.
pub fn strict_feasible_point(
    ambient: usize,
    equalities: &[Vec<BigInt>],
    positives: &[Vec<BigInt>],
) -> Option<Vec<BigInt>> {
    // variables: f+ (ambient), f- (ambient), one slack per strict row
    let cols = 2 * ambient + positives.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let make = |row: &[BigInt], slack: Option<usize>| {
        let mut r = vec![BigRational::zero(); cols];
        for (j, x) in row.iter().enumerate() {
            r[j] = BigRational::from_integer(x.clone());
            r[ambient + j] = -BigRational::from_integer(x.clone());
        }
        if let Some(s) = slack {
            r[2 * ambient + s] = -BigRational::one();
        }
        r
    };
    for e in equalities {
        a.push(make(e, None));
        b.push(BigRational::zero());
    }
    for (s, g) in positives.iter().enumerate() {
        a.push(make(g, Some(s)));
        b.push(BigRational::one());
    }
    let x = nonnegative_solution(&a, &b, cols)?;
    let f: Vec<BigRational> = (0..ambient).map(|j| &x[j] - &x[ambient + j]).collect();
    Some(primitive_integer_vector(&f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), to_bigint_vec(&[2, 4]));
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn kernel_of_sum_map() {
        let a = m(&[vec![1, 1]]);
        assert_eq!(kernel_lattice_basis(&a), vec![to_bigint_vec(&[1, -1])]);
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = m(&[vec![3, 5, 7], vec![2, 4, 6], vec![1, 1, 1]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul(&a).unwrap(), h);
    }

    #[test]
    fn index_of_even_sublattice() {
        let sub = Lattice::from_generators(2, &[to_bigint_vec(&[2, 0]), to_bigint_vec(&[0, 2])]);
        let sup = Lattice::from_generators(2, &[to_bigint_vec(&[1, 0]), to_bigint_vec(&[0, 1])]);
        assert_eq!(lattice_index(&sub, &sup).unwrap(), Some(BigInt::from(4)));
        let line = Lattice::from_generators(2, &[to_bigint_vec(&[1, 1])]);
        assert_eq!(lattice_index(&line, &sup).unwrap(), None);
    }

    #[test]
    fn dual_of_positive_quadrant() {
        let cone = RationalCone { ambient_rank: 2, generators: vec![to_bigint_vec(&[1, 0]), to_bigint_vec(&[1, 2])] };
        let rays = dual_cone_extreme_rays(&cone).unwrap();
        assert_eq!(rays, vec![to_bigint_vec(&[0, 1]), to_bigint_vec(&[2, -1])]);
        assert_eq!(brute_force_dual_rays(&cone).unwrap(), rays);
    }

    #[test]
    fn lower_rank_cone_is_rejected() {
        let cone = RationalCone { ambient_rank: 2, generators: vec![to_bigint_vec(&[1, 1])] };
        assert!(matches!(dual_cone_extreme_rays(&cone), Err(LinalgError::NotFullDimensional { .. })));
    }

    #[test]
    fn simplex_detects_infeasibility() {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        // x0 + x1 = -1 has no nonnegative solution
        assert!(nonnegative_solution(&[vec![q(1), q(1)]], &[q(-1)], 2).is_none());
        let sol = nonnegative_solution(&[vec![q(1), q(2)]], &[q(4)], 2).unwrap();
        assert_eq!(&sol[0] + q(2) * &sol[1], q(4));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
    }

    proptest! {
        #[test]
        fn smith_reconstructs(rows in small_matrix()) {
            let a = m(&rows);
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
            let diag = s.diagonal();
            for w in diag.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
            prop_assert!(diag.iter().all(|x| !x.is_negative()));
        }

        #[test]
        fn hnf_preserves_lattice(rows in small_matrix()) {
            let a = m(&rows);
            let (h, u) = hermite_normal_form(&a);
            prop_assert_eq!(u.mul(&a).unwrap(), h.clone());
            let cols = a.cols();
            prop_assert!(sublattice_equal(&a.to_rows(), &h.to_rows(), cols));
            // unimodular: |det U| = 1
            let s = smith_normal_form(&u);
            prop_assert!(s.diagonal().iter().all(|x| x.is_one()));
        }

        #[test]
        fn kernel_is_saturated(rows in small_matrix()) {
            let a = m(&rows);
            let basis = kernel_lattice_basis(&a);
            for v in &basis {
                prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(basis.len() + rank(&a), a.cols());
            if !basis.is_empty() {
                let k = IntMatrix::from_rows(a.cols(), basis.clone()).unwrap();
                let s = smith_normal_form(&k);
                prop_assert!(s.invariant_factors().iter().all(|x| x.is_one()));
            }
        }

        #[test]
        fn dd_matches_brute_force(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3..7)) {
            let gens: Vec<Vec<BigInt>> = rows.iter().map(|r| to_bigint_vec(r)).collect();
            let cone = RationalCone { ambient_rank: 3, generators: gens };
            match (dual_cone_extreme_rays(&cone), brute_force_dual_rays(&cone)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "disagreement {:?} vs {:?}", a, b),
            }
        }
    }
}
