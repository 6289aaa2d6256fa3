//! Dense and sparse exact linear algebra over [`Q`].
//!
//! Elimination always pivots on the first nonzero entry, scanning columns
//! left to right and, inside a column, rows top to bottom. Every output
//! basis is therefore a deterministic function of the input matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::rational::Q;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Q) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_int(v)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Matrix {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    /// `J_m(lambda)`: `lambda` on the diagonal, ones on the superdiagonal.
    pub fn jordan(m: usize, lambda: &Q) -> Matrix {
        let mut j = Matrix::scalar(m, lambda);
        for i in 0..m.saturating_sub(1) {
            j[(i, i + 1)] = Q::one();
        }
        j
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = &self[(r, c)];
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (r, c, v) in self.nonzero_entries() {
            t[(c, r)] = v.clone();
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for (r, k, a) in self.nonzero_entries() {
            for c in 0..other.cols {
                let b = &other[(k, c)];
                if !b.is_zero() {
                    let prod = a * b;
                    out[(r, c)] += &prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        let mut t = Q::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Kronecker product; the row index of `self` is the major index.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, a) in self.nonzero_entries() {
            for (r2, c2, b) in other.nonzero_entries() {
                out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * b;
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for (r, c, v) in self.nonzero_entries() {
            out[(r, c)] = v.clone();
        }
        for (r, c, v) in other.nonzero_entries() {
            out[(self.rows + r, self.cols + c)] = v.clone();
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for (r, c, v) in self.nonzero_entries() {
            out[(r, c)] = v.clone();
        }
        for (r, c, v) in other.nonzero_entries() {
            out[(r, self.cols + c)] = v.clone();
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out[(r, k)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out[(k, c)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for c in 0..m.cols {
            if lead_row == m.rows {
                break;
            }
            let Some(p) = (lead_row..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead_row);
            let inv = m[(lead_row, c)].recip();
            for k in c..m.cols {
                let v = &m[(lead_row, k)] * &inv;
                m[(lead_row, k)] = v;
            }
            for r in 0..m.rows {
                if r == lead_row || m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone();
                for k in c..m.cols {
                    let delta = &factor * &m[(lead_row, k)];
                    if !delta.is_zero() {
                        m[(r, k)] -= &delta;
                    }
                }
            }
            pivots.push(c);
            lead_row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -&r[(row, f)];
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// A surjection `q` with `q * self == 0` whose kernel is exactly the
    /// column space of `self`. Returns `(q, dim coker)`.
    pub fn cokernel(&self) -> (Matrix, usize) {
        let mut e = Echelon::new(self.rows);
        for c in 0..self.cols {
            e.push(sparse_of(&self.column(c)));
        }
        let rref = e.finish();
        let q = rref.quotient_map();
        let mut m = Matrix::zeros(rref.free.len(), self.rows);
        for (coord, images) in q.iter().enumerate() {
            for (k, v) in images {
                m[(*k, coord)] = v.clone();
            }
        }
        let d = rref.free.len();
        (m, d)
    }

    /// Solves `self * x == rhs`; `None` if inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = r[(row, self.cols + c)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// For a matrix of full column rank, an `L` with `L * self == I`.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let (_, pivots) = self.transpose().rref();
        if pivots.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&pivots);
        let inv = square.inverse()?;
        let mut l = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.cols {
            for (k, &p) in pivots.iter().enumerate() {
                l[(r, p)] = inv[(r, k)].clone();
            }
        }
        Some(l)
    }

    /// Fitting decomposition of a square matrix `f`: bases (as columns) of
    /// `ker f^N` and `im f^N` for `N = rows`.
    pub fn fitting_split(&self) -> (Matrix, Matrix) {
        assert!(self.is_square(), "fitting_split needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return (Matrix::zeros(0, 0), Matrix::zeros(0, 0));
        }
        // ranks of f^k stabilise after at most n steps; stop as soon as
        // they do to keep the entries small
        let mut power = self.clone();
        let mut rank = power.rank();
        loop {
            let next = power.mul(self);
            let next_rank = next.rank();
            if next_rank == rank {
                break;
            }
            power = next;
            rank = next_rank;
        }
        (power.kernel(), power.image())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(Q::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub type SparseRow = Vec<(usize, Q)>;

pub fn sparse_of(v: &[Q]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Incremental row echelon form of a sparse system in `nvars` unknowns.
pub struct Echelon {
    nvars: usize,
    // lead column -> remaining entries, with the lead coefficient normalised to 1
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl Echelon {
    pub fn new(nvars: usize) -> Echelon {
        Echelon {
            nvars,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it was independent of the earlier ones.
    pub fn push(&mut self, row: SparseRow) -> bool {
        let mut work: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, v) in row {
            assert!(c < self.nvars, "column out of range");
            if !v.is_zero() {
                let e = work.entry(c).or_insert_with(Q::zero);
                *e += &v;
                if e.is_zero() {
                    work.remove(&c);
                }
            }
        }
        reduce(&mut work, &self.pivots);
        let Some((&lead, lead_val)) = work.iter().next() else {
            return false;
        };
        let inv = lead_val.recip();
        work.remove(&lead);
        for v in work.values_mut() {
            *v = &*v * &inv;
        }
        self.pivots.insert(lead, work);
        true
    }

    pub fn finish(self) -> Rref {
        let mut reduced: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut work = row.clone();
            reduce(&mut work, &reduced);
            reduced.insert(lead, work);
        }
        let free = (0..self.nvars).filter(|c| !reduced.contains_key(c)).collect();
        Rref {
            nvars: self.nvars,
            pivots: reduced,
            free,
        }
    }
}

fn reduce(work: &mut BTreeMap<usize, Q>, pivots: &BTreeMap<usize, BTreeMap<usize, Q>>) {
    let mut cursor = 0;
    loop {
        let next = work
            .range(cursor..)
            .find(|(c, _)| pivots.contains_key(c))
            .map(|(c, v)| (*c, v.clone()));
        let Some((c, coef)) = next else { break };
        work.remove(&c);
        for (cc, v) in &pivots[&c] {
            let delta = &coef * v;
            let e = work.entry(*cc).or_insert_with(Q::zero);
            *e -= &delta;
            if e.is_zero() {
                work.remove(cc);
            }
        }
        cursor = c + 1;
    }
}

/// Fully reduced echelon form: every pivot row mentions only its own lead
/// and free columns.
pub struct Rref {
    pub nvars: usize,
    pub pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
    pub free: Vec<usize>,
}

impl Rref {
    /// Basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let index: BTreeMap<usize, usize> =
            self.free.iter().enumerate().map(|(k, &f)| (f, k)).collect();
        let mut basis = vec![vec![Q::zero(); self.nvars]; self.free.len()];
        for (k, &f) in self.free.iter().enumerate() {
            basis[k][f] = Q::one();
        }
        for (&p, row) in &self.pivots {
            for (f, v) in row {
                basis[index[f]][p] = -v;
            }
        }
        basis
    }

    /// Image of every coordinate vector in the quotient by the row space,
    /// expressed in the basis indexed by the free columns.
    pub fn quotient_map(&self) -> Vec<SparseRow> {
        let index: BTreeMap<usize, usize> =
            self.free.iter().enumerate().map(|(k, &f)| (f, k)).collect();
        (0..self.nvars)
            .map(|c| match self.pivots.get(&c) {
                Some(row) => row.iter().map(|(f, v)| (index[f], -v)).collect(),
                None => vec![(index[&c], Q::one())],
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                // sparse-ish, with small fractions
                if rng.gen_bool(0.6) {
                    m[(r, c)] = Q::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
                }
            }
        }
        m
    }

    #[test]
    fn cokernel_of_zero_is_identity() {
        let (q, d) = Matrix::zeros(3, 2).cokernel();
        assert_eq!(d, 3);
        assert!(q.is_identity());
    }

    #[test]
    fn cokernel_of_identity_is_empty() {
        let (q, d) = Matrix::identity(3).cokernel();
        assert_eq!(d, 0);
        assert_eq!((q.rows(), q.cols()), (0, 3));
    }

    #[test]
    fn cokernel_contract_on_column() {
        let f = Matrix::from_i64(&[&[1], &[2]]);
        let (q, d) = f.cokernel();
        assert_eq!(d, 1);
        assert_eq!(q.rank(), 1);
        assert!(q.mul(&f).is_zero());
    }

    #[test]
    fn fitting_extremes() {
        let nil = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let (k, i) = nil.fitting_split();
        assert_eq!((k.cols(), i.cols()), (3, 0));
        let inv = Matrix::from_i64(&[&[2, 1], &[0, 3]]);
        let (k, i) = inv.fitting_split();
        assert_eq!((k.cols(), i.cols()), (0, 2));
    }

    #[test]
    fn fitting_jordan_blocks() {
        // J_2(0) ⊕ J_1(1)
        let f = Matrix::jordan(2, &Q::zero()).direct_sum(&Matrix::jordan(1, &Q::one()));
        let (k, i) = f.fitting_split();
        assert_eq!((k.cols(), i.cols()), (2, 1));
        // invariance and complementarity
        let both = k.hstack(&i);
        assert!(both.is_invertible());
        assert!(k.solve(&f.mul(&k)).is_some());
        assert!(i.solve(&f.mul(&i)).is_some());
    }

    #[test]
    fn left_inverse_and_solve() {
        let b = Matrix::from_i64(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = b.left_inverse().unwrap();
        assert!(l.mul(&b).is_identity());
        let y = b.mul(&Matrix::from_i64(&[&[5], &[-7]]));
        assert_eq!(b.solve(&y).unwrap(), Matrix::from_i64(&[&[5], &[-7]]));
        assert!(b.solve(&Matrix::from_i64(&[&[1], &[0], &[0]])).is_none());
    }

    #[test]
    fn sparse_nullspace_matches_dense_kernel() {
        let m = random_matrix(4, 7, 11);
        let mut e = Echelon::new(7);
        for r in 0..4 {
            e.push(sparse_of(m.row(r)));
        }
        let null = e.finish().nullspace();
        let dense = m.kernel();
        assert_eq!(null.len(), dense.cols());
        for v in &null {
            let col = Matrix::from_columns(7, std::slice::from_ref(v));
            assert!(m.mul(&col).is_zero());
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in 0u64..500) {
            let m = random_matrix(rows, cols, seed);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.cols(), cols);
            prop_assert!(m.mul(&k).is_zero());
        }

        #[test]
        fn cokernel_section(rows in 1usize..6, cols in 1usize..6, seed in 0u64..500) {
            let f = random_matrix(rows, cols, seed);
            let (q, d) = f.cokernel();
            prop_assert_eq!(d, rows - f.rank());
            prop_assert!(q.mul(&f).is_zero());
            prop_assert_eq!(q.rank(), d);
            // any right inverse of q is a section: q * s = I on the quotient
            if d > 0 {
                let s = q.transpose().left_inverse().unwrap().transpose();
                prop_assert!(q.mul(&s).is_identity());
            }
        }

        #[test]
        fn fitting_parts_complementary(n in 1usize..6, seed in 0u64..500) {
            let f = random_matrix(n, n, seed);
            let (k, i) = f.fitting_split();
            prop_assert_eq!(k.cols() + i.cols(), n);
            prop_assert!(k.hstack(&i).is_invertible() || n == 0);
        }
    }
}
