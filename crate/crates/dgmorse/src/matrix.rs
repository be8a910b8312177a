//! Dense matrices over exact rings, Smith normal form over Euclidean rings,
//! and Gaussian elimination helpers over fields.

use std::fmt::{self, Display};
use std::ops::{Index, IndexMut};

use crate::error::Error;
use crate::scalar::{EuclideanRing, Field, Ring};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<R> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + self[(i, k)].clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c.clone() * self[(i, j)].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[R]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn columns_subset(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn map<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> Mat<S> {
        Mat::<S>::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }
}

impl<R> Index<(usize, usize)> for Mat<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}
impl<R> IndexMut<(usize, usize)> for Mat<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Ring> Display for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// `u * a * v = s` with `u`, `v` invertible and `s` diagonal, each diagonal
/// entry dividing the next, diagonal entries in canonical unit-normalized
/// form. `uinv`/`vinv` are the tracked inverses.
#[derive(Clone, Debug)]
pub struct Snf<R> {
    pub u: Mat<R>,
    pub uinv: Mat<R>,
    pub v: Mat<R>,
    pub vinv: Mat<R>,
    pub s: Mat<R>,
    pub rank: usize,
}

impl<R: EuclideanRing> Snf<R> {
    pub fn diagonal(&self) -> Vec<R> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Non-unit nonzero diagonal entries: the torsion invariant factors.
    pub fn invariant_factors(&self) -> Vec<R> {
        self.diagonal().into_iter().filter(|d| !d.is_unit()).collect()
    }

    pub fn verify(&self, a: &Mat<R>) -> bool {
        let lhs = self.u.mul(a).mul(&self.v);
        if lhs != self.s {
            return false;
        }
        let n = self.u.rows;
        let m = self.v.rows;
        self.u.mul(&self.uinv) == Mat::identity(n) && self.v.mul(&self.vinv) == Mat::identity(m)
    }
}

/// Smith normal form over a Euclidean ring by row/column reduction.
pub fn smith_normal_form<R: EuclideanRing>(a: &Mat<R>) -> Snf<R> {
    let (n, m) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = Mat::identity(n);
    let mut uinv = Mat::identity(n);
    let mut v = Mat::identity(m);
    let mut vinv = Mat::identity(m);

    // elementary operations, applied to s while tracking transforms
    fn swap_rows<R: EuclideanRing>(s: &mut Mat<R>, u: &mut Mat<R>, uinv: &mut Mat<R>, i: usize, j: usize) {
        for c in 0..s.cols {
            let tmp = s[(i, c)].clone();
            s[(i, c)] = s[(j, c)].clone();
            s[(j, c)] = tmp;
        }
        for c in 0..u.cols {
            let tmp = u[(i, c)].clone();
            u[(i, c)] = u[(j, c)].clone();
            u[(j, c)] = tmp;
        }
        for r in 0..uinv.rows {
            let tmp = uinv[(r, i)].clone();
            uinv[(r, i)] = uinv[(r, j)].clone();
            uinv[(r, j)] = tmp;
        }
    }
    fn swap_cols<R: EuclideanRing>(s: &mut Mat<R>, v: &mut Mat<R>, vinv: &mut Mat<R>, i: usize, j: usize) {
        for r in 0..s.rows {
            let tmp = s[(r, i)].clone();
            s[(r, i)] = s[(r, j)].clone();
            s[(r, j)] = tmp;
        }
        for r in 0..v.rows {
            let tmp = v[(r, i)].clone();
            v[(r, i)] = v[(r, j)].clone();
            v[(r, j)] = tmp;
        }
        for c in 0..vinv.cols {
            let tmp = vinv[(i, c)].clone();
            vinv[(i, c)] = vinv[(j, c)].clone();
            vinv[(j, c)] = tmp;
        }
    }
    // row i -= q * row j   (S' = L S with L = I - q E_ij, Linv = I + q E_ij)
    fn row_sub<R: EuclideanRing>(
        s: &mut Mat<R>,
        u: &mut Mat<R>,
        uinv: &mut Mat<R>,
        i: usize,
        j: usize,
        q: &R,
    ) {
        for c in 0..s.cols {
            s[(i, c)] = s[(i, c)].clone() - q.clone() * s[(j, c)].clone();
        }
        for c in 0..u.cols {
            u[(i, c)] = u[(i, c)].clone() - q.clone() * u[(j, c)].clone();
        }
        for r in 0..uinv.rows {
            uinv[(r, j)] = uinv[(r, j)].clone() + q.clone() * uinv[(r, i)].clone();
        }
    }
    // col i -= q * col j
    fn col_sub<R: EuclideanRing>(
        s: &mut Mat<R>,
        v: &mut Mat<R>,
        vinv: &mut Mat<R>,
        i: usize,
        j: usize,
        q: &R,
    ) {
        for r in 0..s.rows {
            s[(r, i)] = s[(r, i)].clone() - s[(r, j)].clone() * q.clone();
        }
        for r in 0..v.rows {
            v[(r, i)] = v[(r, i)].clone() - v[(r, j)].clone() * q.clone();
        }
        for c in 0..vinv.cols {
            vinv[(j, c)] = vinv[(j, c)].clone() + q.clone() * vinv[(i, c)].clone();
        }
    }
    // scale row i by unit w (for unit-normalization)
    fn row_scale<R: EuclideanRing>(
        s: &mut Mat<R>,
        u: &mut Mat<R>,
        uinv: &mut Mat<R>,
        i: usize,
        w: &R,
        winv: &R,
    ) {
        for c in 0..s.cols {
            s[(i, c)] = w.clone() * s[(i, c)].clone();
        }
        for c in 0..u.cols {
            u[(i, c)] = w.clone() * u[(i, c)].clone();
        }
        for r in 0..uinv.rows {
            uinv[(r, i)] = uinv[(r, i)].clone() * winv.clone();
        }
    }

    // Min-norm pivoting with balanced quotients: whenever a reduction leaves
    // a nonzero remainder, that remainder is strictly smaller than the
    // current pivot, so we restart pivot selection instead of pressing on.
    // This keeps intermediate entries small; the stale-pivot variant shows
    // catastrophic coefficient growth already on dense 8x8 integer matrices.
    let mut k = 0;
    'pivot: while k < n.min(m) {
        // nonzero entry of minimal norm in the remaining block
        let mut pivot: Option<(usize, usize, u64)> = None;
        for i in k..n {
            for j in k..m {
                if let Some(norm) = s[(i, j)].euclid_norm() {
                    if pivot.map_or(true, |(_, _, pn)| norm < pn) {
                        pivot = Some((i, j, norm));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        swap_rows(&mut s, &mut u, &mut uinv, k, pi);
        swap_cols(&mut s, &mut v, &mut vinv, k, pj);

        // clear column k, then row k; a nonzero remainder becomes the next,
        // strictly smaller pivot
        for i in (k + 1)..n {
            if s[(i, k)].is_zero() {
                continue;
            }
            let (q, r) = s[(i, k)].balanced_div_rem(&s[(k, k)]);
            if !q.is_zero() {
                row_sub(&mut s, &mut u, &mut uinv, i, k, &q);
            }
            if !r.is_zero() {
                continue 'pivot;
            }
        }
        for j in (k + 1)..m {
            if s[(k, j)].is_zero() {
                continue;
            }
            let (q, r) = s[(k, j)].balanced_div_rem(&s[(k, k)]);
            if !q.is_zero() {
                col_sub(&mut s, &mut v, &mut vinv, j, k, &q);
            }
            if !r.is_zero() {
                continue 'pivot;
            }
        }

        // the pivot must divide the rest of the block: fold an offending row
        // into row k, where the next sweep shrinks the pivot past it
        for i in (k + 1)..n {
            for j in (k + 1)..m {
                let (_, r) = s[(i, j)].div_rem(&s[(k, k)]);
                if !r.is_zero() {
                    // row k += row i
                    let minus_one = -R::one();
                    row_sub(&mut s, &mut u, &mut uinv, k, i, &minus_one);
                    continue 'pivot;
                }
            }
        }
        k += 1;
    }
    let rank = k;

    // unit-normalize the diagonal
    for i in 0..rank {
        let (unit, canon) = s[(i, i)].unit_normalize();
        if !unit.is_one() {
            let winv = unit.clone();
            let w = canon
                .try_exact_div(&s[(i, i)])
                .or_else(|| {
                    // unit inverse: 1/unit
                    R::one().try_exact_div(&unit)
                })
                .expect("unit must be invertible");
            row_scale(&mut s, &mut u, &mut uinv, i, &w, &winv);
        }
    }

    Snf { u, uinv, v, vinv, s, rank }
}

/// Inverse of a square matrix when it is invertible over the ring.
pub fn invert<R: EuclideanRing>(a: &Mat<R>) -> Option<Mat<R>> {
    if a.rows != a.cols {
        return None;
    }
    let snf = smith_normal_form(a);
    if snf.rank < a.rows {
        return None;
    }
    let mut sinv = Mat::zero(a.rows, a.rows);
    for i in 0..a.rows {
        let d = &snf.s[(i, i)];
        sinv[(i, i)] = R::one().try_exact_div(d)?;
    }
    // a = uinv s vinv, so a^-1 = v s^-1 u
    Some(snf.v.mul(&sinv).mul(&snf.u))
}

/// Smith normal form behind the supported-ring gate.
pub fn snf_checked<R: EuclideanRing>(a: &Mat<R>) -> Result<Snf<R>, Error> {
    Ok(smith_normal_form(a))
}

// ---------------------------------------------------------------------------
// Field linear algebra
// ---------------------------------------------------------------------------

/// Reduced row echelon form; returns pivot column indices.
pub fn rref<F: Field>(m: &Mat<F>) -> (Mat<F>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row >= a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&i| !a[(i, col)].is_zero()) else { continue };
        if pr != row {
            for c in 0..a.cols {
                let tmp = a[(row, c)].clone();
                a[(row, c)] = a[(pr, c)].clone();
                a[(pr, c)] = tmp;
            }
        }
        let inv = a[(row, col)].inv();
        for c in 0..a.cols {
            a[(row, c)] = a[(row, c)].clone() * inv.clone();
        }
        for i in 0..a.rows {
            if i != row && !a[(i, col)].is_zero() {
                let f = a[(i, col)].clone();
                for c in 0..a.cols {
                    a[(i, c)] = a[(i, c)].clone() - f.clone() * a[(row, c)].clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    rref(m).1.len()
}

/// Basis of the null space, as columns.
pub fn kernel_basis<F: Field>(m: &Mat<F>) -> Mat<F> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Mat::zero(m.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        out[(fc, k)] = F::one();
        for (prow, &pc) in pivots.iter().enumerate() {
            out[(pc, k)] = -r[(prow, fc)].clone();
        }
    }
    out
}

/// Solve `m x = b` for each column of `b`; `None` if any system is
/// inconsistent.
pub fn solve<F: Field>(m: &Mat<F>, b: &Mat<F>) -> Option<Mat<F>> {
    assert_eq!(m.rows, b.rows);
    let aug = m.hstack(b);
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= m.cols) {
        return None;
    }
    let mut x = Mat::zero(m.cols, b.cols);
    for (prow, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(pc, j)] = r[(prow, m.cols + j)].clone();
        }
    }
    Some(x)
}

/// Indices of columns of `m` that extend the column span of `base`.
pub fn extend_basis<F: Field>(base: &Mat<F>, m: &Mat<F>) -> Vec<usize> {
    assert_eq!(base.rows, m.rows);
    let mut cur = base.clone();
    let mut cur_rank = rank(&cur);
    let mut chosen = Vec::new();
    for j in 0..m.cols {
        let cand = cur.hstack(&m.columns_subset(&[j]));
        let r = rank(&cand);
        if r > cur_rank {
            chosen.push(j);
            cur = cand;
            cur_rank = r;
        }
    }
    chosen
}
