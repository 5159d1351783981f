use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect() }
    }

    /// Build from unsorted pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in pairs {
            *m.entry(i).or_insert_with(Scalar::zero) += &c;
        }
        SparseVec { entries: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); len];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn first(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let v = &a[i].1 + &(&b[j].1 * c);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::one(), other)
    }

    pub fn dot(&self, dense: &[Scalar]) -> Scalar {
        self.entries.iter().map(|(i, c)| c * &dense[*i]).sum()
    }

    /// Shift every index by `offset`.
    pub fn shift(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect() }
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, c)| (i, c))).finish()
    }
}

/// Row echelon form with leftmost pivots; every stored row has pivot coefficient one.
/// Each row may carry a dense tag tracking how it was formed from tagged inputs.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SparseVec, Vec<Scalar>)>,
    tag_len: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_tags(tag_len: usize) -> Self {
        Echelon { rows: BTreeMap::new(), tag_len }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Reduce `v` against the stored rows; returns the residual and the accumulated tag
    /// (coefficients such that `v = residual + sum tag-combination of stored rows`).
    pub fn reduce_tagged(&self, v: &SparseVec) -> (SparseVec, Vec<Scalar>) {
        let mut v = v.clone();
        let mut tag = vec![Scalar::zero(); self.tag_len];
        let mut cursor = 0usize;
        loop {
            let next = v.entries.iter().find(|(i, _)| *i >= cursor && self.rows.contains_key(i)).cloned();
            let Some((p, c)) = next else { break };
            let (row, rtag) = &self.rows[&p];
            v = v.axpy(&(-&c), row);
            for (t, r) in tag.iter_mut().zip(rtag) {
                if !r.is_zero() {
                    *t += &(&c * r);
                }
            }
            cursor = p + 1;
        }
        (v, tag)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tagged(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert `v`; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        self.insert_tagged(v, vec![Scalar::zero(); self.tag_len])
    }

    pub fn insert_tagged(&mut self, v: &SparseVec, tag: Vec<Scalar>) -> Option<usize> {
        let (r, t) = self.reduce_tagged(v);
        let (p, c) = r.first()?.clone();
        let inv = c.inv();
        let tag: Vec<Scalar> = tag.iter().zip(&t).map(|(a, b)| (a - b) * &inv).collect();
        self.rows.insert(p, (r.scale(&inv), tag));
        Some(p)
    }

    /// Fully reduced rows (each pivot column zero in all other rows), in pivot order.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseVec)> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, (row, _)) in self.rows.iter().rev() {
            let mut r = row.clone();
            let hits: Vec<(usize, Scalar)> =
                r.entries.iter().filter(|(i, _)| *i != p && done.contains_key(i)).cloned().collect();
            for (i, c) in hits {
                r = r.axpy(&(-&c), &done[&i]);
            }
            done.insert(p, r);
        }
        done.into_iter().collect()
    }
}

/// Basis of `{x : row . x = 0 for all rows}` in `ncols` unknowns, one vector per free
/// column (free entry one), in increasing free-column order.
pub fn kernel_of_rows(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    kernel_from_echelon(&ech, ncols)
}

pub fn kernel_from_echelon(ech: &Echelon, ncols: usize) -> Vec<SparseVec> {
    let red = ech.reduced_rows();
    let pivots: std::collections::BTreeSet<usize> = red.iter().map(|(p, _)| *p).collect();
    // column -> list of (pivot, coefficient)
    let mut by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (p, r) in &red {
        for (i, c) in r.entries() {
            if *i != *p {
                by_col.entry(*i).or_default().push((*p, c.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for f in 0..ncols {
        if pivots.contains(&f) {
            continue;
        }
        let mut pairs = vec![(f, Scalar::one())];
        if let Some(list) = by_col.get(&f) {
            for (p, c) in list {
                pairs.push((*p, -c));
            }
        }
        out.push(SparseVec::from_pairs(pairs));
    }
    out
}

/// Dense matrix over the scalar field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(rows: usize, cols: Vec<Vec<Scalar>>) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::int(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + &(a * b);
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn kronecker(&self, o: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for i in 0..self.rows {
            e.insert(&SparseVec::from_dense(&self.row(i)));
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().rank()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv();
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let v = &a[r][k] - &(&f * &a[c][k]);
                    a[r][k] = v;
                }
            }
        }
        det
    }

    /// Right kernel basis.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        kernel_from_echelon(&self.row_echelon(), self.cols).iter().map(|v| v.to_dense(self.cols)).collect()
    }

    /// Echelon basis of the column space.
    pub fn image(&self) -> Vec<Vec<Scalar>> {
        self.transpose()
            .row_echelon()
            .reduced_rows()
            .into_iter()
            .map(|(_, r)| r.to_dense(self.rows))
            .collect()
    }

    /// Solve `self * x = b`; free unknowns are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        if self.rows == self.cols && self.rows > 8 {
            if let Some(x) = self.solve_fraction_free(b) {
                return Some(x);
            }
        }
        let n = self.cols;
        let mut e = Echelon::new();
        for i in 0..self.rows {
            let mut row = self.row(i);
            row.push(b[i].clone());
            e.insert(&SparseVec::from_dense(&row));
        }
        let red = e.reduced_rows();
        let mut x = vec![Scalar::zero(); n];
        for (p, r) in red {
            if p == n {
                return None;
            }
            x[p] = r.get(n);
        }
        Some(x)
    }

    /// Bareiss elimination over the integers for a square rational system. `None` when an
    /// entry is irrational or the matrix is singular; the caller then uses the general path.
    fn solve_fraction_free(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<BigRational> =
                self.data[i * n..(i + 1) * n].iter().chain(std::iter::once(&b[i])).map(Scalar::to_rational).collect::<Option<_>>()?;
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero())?;
            a.swap(p, k);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[i][n].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(a[i][j].clone()) * &x[j];
            }
            x[i] = acc / BigRational::from_integer(a[i][i].clone());
        }
        Some(x.into_iter().map(Scalar::rational).collect())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[j] = Scalar::one();
            cols.push(self.solve(&e)?);
        }
        let inv = Matrix::from_cols(n, cols);
        (self.mul(&inv) == Matrix::identity(n)).then_some(inv)
    }

    /// Pivots of symmetric elimination without pivoting (`d_i` of `L D L^T`); stops at the
    /// first zero pivot, which is then the last entry.
    pub fn symmetric_pivots(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.to_rows();
        let mut out = Vec::with_capacity(n);
        for c in 0..n {
            let piv = a[c][c].clone();
            out.push(piv.clone());
            if piv.is_zero() {
                break;
            }
            let inv = piv.inv();
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let v = &a[r][k] - &(&f * &a[c][k]);
                    a[r][k] = v;
                }
            }
        }
        out
    }

    /// Exact positive definiteness of a symmetric matrix (all leading pivots positive).
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && {
            let p = self.symmetric_pivots();
            p.len() == self.rows && p.iter().all(Scalar::is_positive)
        }
    }

    /// Leading principal minors, used as an independent positivity check.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.rows)
            .map(|k| {
                let sub: Vec<Vec<Scalar>> = (0..k).map(|i| self.row(i)[..k].to_vec()).collect();
                Matrix::from_rows(sub).det()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Graded helpers phrased as in the rest of the crate: kernels, images, solves and
/// cokernel bases, all by leftmost-pivot echelon.
pub mod graded {
    use super::*;

    pub fn kernel(m: &Matrix) -> Vec<Vec<Scalar>> {
        m.kernel()
    }

    pub fn image(m: &Matrix) -> Vec<Vec<Scalar>> {
        m.image()
    }

    pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
        m.solve(b)
    }

    /// Indices of those `ambient` vectors that complete `submodule` to a basis of the span of
    /// both, chosen greedily in order: a basis of `span(ambient) / span(submodule)`.
    pub fn residue_basis(ambient: &[SparseVec], submodule: &[SparseVec]) -> Vec<usize> {
        let mut e = Echelon::new();
        for v in submodule {
            e.insert(v);
        }
        let mut chosen = Vec::new();
        for (i, v) in ambient.iter().enumerate() {
            if e.insert(v).is_some() {
                chosen.push(i);
            }
        }
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.kernel(), vec![vec![Scalar::int(-1), Scalar::int(1)]]);
        let m = Matrix::from_ints(&[&[2]]);
        assert_eq!(m.solve(&[Scalar::int(3)]).unwrap(), vec![Scalar::ratio(3, 2)]);
        let m = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert!(m.solve(&[Scalar::int(1), Scalar::int(2)]).is_none());
    }

    #[test]
    fn residue_of_polynomial_ring_is_empty_in_degree_two() {
        // A^2 basis x, y; images of x*1 and y*1.
        let ambient = vec![SparseVec::unit(0), SparseVec::unit(1)];
        let sub = vec![SparseVec::unit(0), SparseVec::unit(1)];
        assert!(graded::residue_basis(&ambient, &sub).is_empty());
    }

    #[test]
    fn determinant_and_pivots() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(m.det(), Scalar::int(3));
        assert!(m.is_positive_definite());
        assert_eq!(m.symmetric_pivots(), vec![Scalar::int(2), Scalar::ratio(3, 2)]);
        assert!(!Matrix::from_ints(&[&[0, 1], &[1, 0]]).is_positive_definite());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }
}
