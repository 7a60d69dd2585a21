//! Dense matrices over a prime field `F_p` with exact Gaussian elimination.
//!
//! Entries are stored as residues in `0..p`, row-major. Vectors are rows
//! unless stated otherwise; `kernel` and `solve` follow the column convention
//! (`m * x = 0`, `m * x = b`), the `left_*` variants the row convention.

use crate::error::{Error, Result};

/// Largest characteristic accepted. Products of two residues then fit in 32
/// bits, so a dot product of any practical length fits in a `u64` accumulator.
pub const MAX_CHAR: u32 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_char(p: u32) -> Result<()> {
    if !is_prime(p) || p >= MAX_CHAR {
        return Err(Error::Input(format!(
            "characteristic {p} must be a prime below {MAX_CHAR}"
        )));
    }
    Ok(())
}

/// Reduce an arbitrary integer into `0..p`.
pub fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r: u64 = 1 % p as u64;
    let mut b = (a % p) as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    a = r as u32;
    a
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mat[F_{}; {}x{}]", self.p, self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            write!(f, "\n  {:?}", &self.row(r)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Build from signed integer rows, reducing mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = reduce(v, p);
            }
        }
        m
    }

    /// Like `from_rows` but with an explicit column count, so that empty row
    /// lists still carry a shape.
    pub fn from_rows_shaped(p: u32, cols: usize, rows: &[Vec<u32>]) -> Mat {
        let mut m = Mat::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = v % p;
            }
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < p));
        Mat { p, rows, cols, data }
    }

    pub fn row_vector(p: u32, v: &[u32]) -> Mat {
        Mat::from_vec(p, 1, v.len(), v.iter().map(|&x| x % p).collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if self.p != other.p {
            return Err(Error::CharMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let n = other.cols;
        let mut out = Mat::zeros(self.p, self.rows, n);
        let nnz = other.data.iter().filter(|&&v| v != 0).count();
        if nnz * 4 < other.data.len() {
            // Sparse right factor: walk only its nonzero entries.
            let sparse: Vec<Vec<(usize, u64)>> = (0..other.rows)
                .map(|k| {
                    other.row(k).iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j, v as u64)).collect()
                })
                .collect();
            let mut acc = vec![0u64; n];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|a| *a = 0);
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a == 0 || sparse[k].is_empty() {
                        continue;
                    }
                    let a = a as u64;
                    for &(j, b) in &sparse[k] {
                        acc[j] += a * b;
                    }
                }
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, a) in orow.iter_mut().zip(&acc) {
                    *o = (a % p) as u32;
                }
            }
            return Ok(out);
        }
        let mut acc = vec![0u64; n];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let arow = self.row(i);
            for (k, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                let brow = other.row(k);
                for (acc_j, &b) in acc.iter_mut().zip(brow) {
                    *acc_j += a * b as u64;
                }
            }
            let orow = &mut out.data[i * n..(i + 1) * n];
            for (o, a) in orow.iter_mut().zip(&acc) {
                *o = (a % p) as u32;
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on a shape mismatch (internal use).
    pub fn mul(&self, other: &Mat) -> Mat {
        self.try_mul(other).expect("matrix product shape")
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "sum shape");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        let p = self.p;
        let data = self.data.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Mat {
        let p = self.p as u64;
        let c = (c % self.p) as u64;
        let data = self.data.iter().map(|&a| (a as u64 * c % p) as u32).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Mat, c: u32) {
        assert_eq!(self.shape(), other.shape());
        let p = self.p as u64;
        let c = (c % self.p) as u64;
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = ((*a as u64 + c * b as u64) % p) as u32;
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut result = Mat::identity(self.p, self.rows);
        let mut base = self.clone();
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

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let cols = self.cols + other.cols;
        let mut out = Mat::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            out.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn vstack_all(p: u32, cols: usize, parts: &[Mat]) -> Mat {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Mat { p, rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn block_diag_all(p: u32, parts: &[Mat]) -> Mat {
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, r, c);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Mat) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for r in 0..m.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(r));
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut out = Mat::zeros(self.p, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.p, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Row-major flattening as a `1 x (rows*cols)` vector.
    pub fn flatten(&self) -> Mat {
        Mat { p: self.p, rows: 1, cols: self.rows * self.cols, data: self.data.clone() }
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Mat {
        assert_eq!(rows * cols, self.data.len());
        Mat { p: self.p, rows, cols, data: self.data.clone() }
    }

    /// Reduced row-echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(self.cols);
        (m, piv)
    }

    /// Row-reduce in place, choosing pivots only among the first `limit`
    /// columns (the remaining columns ride along, e.g. right-hand sides).
    pub fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let p = self.p as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let iv = inv(self.data[r * cols + c], self.p) as u64;
            for j in c..cols {
                let v = &mut self.data[r * cols + j];
                *v = (*v as u64 * iv % p) as u32;
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let elim = |row: &mut [u32]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let nf = p - f as u64;
                for j in c..cols {
                    if prow[j] != 0 {
                        row[j] = ((row[j] as u64 + nf * prow[j] as u64) % p) as u32;
                    }
                }
            };
            for row in before.chunks_mut(cols) {
                elim(row);
            }
            for row in after.chunks_mut(cols) {
                elim(row);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        if self.rows < self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    /// Columns form a basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Mat {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in piv.iter().enumerate() {
                let v = r.get(i, f);
                if v != 0 {
                    k.set(pc, j, self.p - v);
                }
            }
        }
        k
    }

    /// Rows form a basis of `{x : x * self = 0}`.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().kernel().transpose()
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        self.same_field(b)?;
        if b.rows != self.rows {
            return Err(Error::Dimension(format!(
                "solve with {}x{} system and {} right-hand rows",
                self.rows, self.cols, b.rows
            )));
        }
        let mut aug = self.hstack(b);
        let piv = aug.rref_in_place(self.cols);
        let rank = piv.len();
        for i in rank..aug.rows {
            if aug.row(i)[self.cols..].iter().any(|&v| v != 0) {
                return Ok(None);
            }
        }
        let mut x = Mat::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = aug.get(i, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Some `x` with `x * self = b`.
    pub fn solve_left(&self, b: &Mat) -> Result<Option<Mat>> {
        Ok(self.transpose().solve(&b.transpose())?.map(|x| x.transpose()))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(self.p, n));
        let piv = aug.rref_in_place(n);
        if piv.len() < n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_basis(&self) -> Mat {
        let (r, piv) = self.rref();
        r.block(0, piv.len(), 0, self.cols)
    }

    /// Kronecker product; row index `i_a * rows_b + i_b`, column index alike.
    pub fn kron(&self, other: &Mat) -> Mat {
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Mat::zeros(self.p, rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja) as u64;
                if a == 0 {
                    continue;
                }
                for ib in 0..other.rows {
                    let r = ia * other.rows + ib;
                    for jb in 0..other.cols {
                        let b = other.get(ib, jb) as u64;
                        if b != 0 {
                            out.data[r * cols + ja * other.cols + jb] = (a * b % p) as u32;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Subspace operations on row spaces (rows of a matrix span the subspace).
pub mod rowspace {
    use super::Mat;

    /// Whether every row of `v` lies in the row space of `basis`.
    pub fn contains(basis: &Mat, v: &Mat) -> bool {
        if v.rows() == 0 {
            return true;
        }
        basis.vstack(v).rank() == basis.rank()
    }

    pub fn sum(a: &Mat, b: &Mat) -> Mat {
        a.vstack(b).row_basis()
    }

    /// Intersection of two row spaces.
    pub fn intersect(a: &Mat, b: &Mat) -> Mat {
        let p = a.p();
        let n = a.cols();
        if a.rows() == 0 || b.rows() == 0 {
            return Mat::zeros(p, 0, n);
        }
        // x a = y b  <=>  (x, -y) [a; b] = 0
        let stacked = a.vstack(b);
        let lk = stacked.left_kernel();
        let coeff = lk.block(0, lk.rows(), 0, a.rows());
        coeff.mul(a).row_basis()
    }

    /// Indices of rows of `candidates` extending `base` to a basis of the
    /// sum of both row spaces, chosen greedily in order.
    pub fn extend(base: &Mat, candidates: &Mat) -> Vec<usize> {
        let mut cur = base.row_basis();
        let mut rank = cur.rows();
        let mut picked = Vec::new();
        for i in 0..candidates.rows() {
            let next = cur.vstack(&candidates.select_rows(&[i]));
            let r = next.rank();
            if r > rank {
                cur = next;
                rank = r;
                picked.push(i);
            }
        }
        picked
    }

    /// Coordinates of the rows of `v` in terms of the rows of `basis`
    /// (which must be linearly independent).
    pub fn coords(basis: &Mat, v: &Mat) -> Option<Mat> {
        basis.solve_left(v).ok().flatten()
    }

    /// Quotient of `F_p^n` by the row space of `sub`, on the non-pivot
    /// coordinates: `(proj, section)` with `proj` (`n x q`) killing `sub`
    /// and `section * proj = id`.
    pub fn quotient(sub: &Mat, n: usize) -> (Mat, Mat) {
        let p = sub.p();
        let (r, piv) = sub.rref();
        let keep: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        // e_j -> e_j for kept j; e_{piv_i} -> -(row i restricted to kept).
        let mut proj = Mat::zeros(p, n, keep.len());
        for (t, &j) in keep.iter().enumerate() {
            proj.set(j, t, 1);
        }
        for (i, &pc) in piv.iter().enumerate() {
            for (t, &j) in keep.iter().enumerate() {
                let v = r.get(i, j);
                if v != 0 {
                    proj.set(pc, t, p - v);
                }
            }
        }
        (proj, Mat::identity(p, n).select_rows(&keep))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_of_empty_matrix() {
        let (r, piv) = Mat::zeros(3, 0, 0).rref();
        assert_eq!(r.shape(), (0, 0));
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_of_identity() {
        let (r, piv) = Mat::identity(3, 3).rref();
        assert_eq!(r, Mat::identity(3, 3));
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one_over_f5() {
        let m = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0]);
        assert_eq!(r, Mat::from_rows(5, &[vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(Mat::identity(7, 4).kernel().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_spans_everything() {
        let k = Mat::zeros(2, 2, 3).kernel();
        assert_eq!(k.shape(), (3, 3));
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn kernel_rank_one_over_f5() {
        // Enumerate all x + 2y = 0 over F_5: the solutions are multiples of (3, 1).
        let mut oracle = Vec::new();
        for x in 0..5u32 {
            for y in 0..5u32 {
                if (x + 2 * y) % 5 == 0 && (x, y) != (0, 0) {
                    oracle.push((x, y));
                }
            }
        }
        assert!(oracle.contains(&(3, 1)));
        let m = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(oracle.contains(&(k.get(0, 0), k.get(1, 0))));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Mat::from_rows(7, &[vec![3], vec![5]]);
        assert_eq!(Mat::identity(7, 2).solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let b = Mat::from_rows(3, &[vec![1], vec![0]]);
        assert_eq!(Mat::zeros(3, 2, 2).solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_small_system_over_f2() {
        let m = Mat::from_rows(2, &[vec![1, 1], vec![0, 1]]);
        let b = Mat::from_rows(2, &[vec![1], vec![1]]);
        // Enumerate all four vectors of F_2^2.
        let mut hits = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                let v = Mat::from_rows(2, &[vec![x], vec![y]]);
                if m.mul(&v) == b {
                    hits.push(v);
                }
            }
        }
        assert_eq!(hits, vec![Mat::from_rows(2, &[vec![0], vec![1]])]);
        assert_eq!(m.solve(&b).unwrap(), Some(hits[0].clone()));
    }

    #[test]
    fn solve_rejects_mismatched_rhs() {
        let m = Mat::identity(2, 2);
        assert!(m.solve(&Mat::zeros(2, 3, 1)).is_err());
    }

    #[test]
    fn kron_identities_and_zero() {
        assert_eq!(Mat::identity(5, 2).kron(&Mat::identity(5, 3)), Mat::identity(5, 6));
        let a = Mat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        assert!(a.kron(&Mat::zeros(5, 2, 3)).is_zero());
    }

    #[test]
    fn kron_row_times_column_over_f3() {
        // [[1,1]] (1x2) kron [[1],[2]] (2x1): entry (i_b, j_a) = a[0][j_a] * b[i_b][0].
        let a = Mat::from_rows(3, &[vec![1, 1]]);
        let b = Mat::from_rows(3, &[vec![1], vec![2]]);
        let expected = Mat::from_rows(3, &[vec![1, 1], vec![2, 2]]);
        assert_eq!(a.kron(&b), expected);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(7, &[vec![2, 1], vec![1, 1]]);
        let i = m.inverse().unwrap();
        assert_eq!(m.mul(&i), Mat::identity(7, 2));
        assert!(Mat::from_rows(7, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn row_space_intersection() {
        let a = Mat::from_rows(3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Mat::from_rows(3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = rowspace::intersect(&a, &b);
        assert_eq!(i, Mat::from_rows(3, &[vec![0, 1, 0]]));
    }
}
