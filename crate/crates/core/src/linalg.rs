//! Exact integer linear algebra over `i128` with overflow detection.
//!
//! Everything here works on small dense matrices: column-style Hermite
//! normal form (lattice membership, canonical coset representatives,
//! integer linear solving) and Smith normal form (invariant factors).
//! Every arithmetic operation is checked; an overflow surfaces as
//! [`LinalgError::Overflow`] instead of a wrong answer.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

#[inline]
fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(LinalgError::Overflow)
}

#[inline]
fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(LinalgError::Overflow)
}

#[inline]
fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(LinalgError::Overflow)
}

/// `a + k * b`
#[inline]
fn axpy(a: i128, k: i128, b: i128) -> Result<i128> {
    add(a, mul(k, b)?)
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[i128] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Matrix with the given row and column removed.
    pub fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows - 1, self.cols - 1);
        let mut ri = 0;
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let mut ci = 0;
            for c in 0..self.cols {
                if c == col {
                    continue;
                }
                out[(ri, ci)] = self[(r, c)];
                ci += 1;
            }
            ri += 1;
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension { expected: self.cols, got: v.len() });
        }
        let mut out = vec![0i128; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (a, b) in self.row(r).iter().zip(v) {
                if *a != 0 && *b != 0 {
                    acc = add(acc, mul(*a, *b)?)?;
                }
            }
            *o = acc;
        }
        Ok(out)
    }

    pub fn mul_mat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension { expected: self.cols, got: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        out[(i, j)] = add(out[(i, j)], mul(a, b)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// col_dst += k * col_src
    fn col_axpy(&mut self, dst: usize, k: i128, src: usize) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for r in 0..self.rows {
            let s = self[(r, src)];
            if s != 0 {
                self[(r, dst)] = axpy(self[(r, dst)], k, s)?;
            }
        }
        Ok(())
    }

    /// row_dst += k * row_src
    fn row_axpy(&mut self, dst: usize, k: i128, src: usize) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let s = self[(src, c)];
            if s != 0 {
                self[(dst, c)] = axpy(self[(dst, c)], k, s)?;
            }
        }
        Ok(())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            self[(r, c)] = -self[(r, c)];
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = -self[(r, c)];
        }
    }

    /// Replace columns `(a, b)` by `(s*a + t*b, u*a + v*b)`; the 2x2 block
    /// `[[s, u], [t, v]]` must be unimodular.
    fn col_combine(&mut self, a: usize, b: usize, s: i128, t: i128, u: i128, v: i128) -> Result<()> {
        for r in 0..self.rows {
            let x = self[(r, a)];
            let y = self[(r, b)];
            if x == 0 && y == 0 {
                continue;
            }
            self[(r, a)] = add(mul(s, x)?, mul(t, y)?)?;
            self[(r, b)] = add(mul(u, x)?, mul(v, y)?)?;
        }
        Ok(())
    }

    fn row_combine(&mut self, a: usize, b: usize, s: i128, t: i128, u: i128, v: i128) -> Result<()> {
        for c in 0..self.cols {
            let x = self[(a, c)];
            let y = self[(b, c)];
            if x == 0 && y == 0 {
                continue;
            }
            self[(a, c)] = add(mul(s, x)?, mul(t, y)?)?;
            self[(b, c)] = add(mul(u, x)?, mul(v, y)?)?;
        }
        Ok(())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[(k, k)] == 0 {
                match (k + 1..n).find(|&r| m[(r, k)] != 0) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = sub(mul(m[(i, j)], m[(k, k)])?, mul(m[(i, k)], m[(k, j)])?)?;
                    m[(i, j)] = num / prev;
                }
            }
            prev = m[(k, k)];
        }
        Ok(sign * m[(n - 1, n - 1)])
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        &mut self.data[r * self.cols + c]
    }
}

/// Column-style Hermite normal form `H = M * U` of a matrix `M`.
///
/// The first `rank` columns of `H` form an echelon basis of the column
/// lattice of `M`: column `j` is zero above its pivot row `pivots[j]`, the
/// pivot is positive, pivot rows strictly increase, and every entry to the
/// left of a pivot lies in `[0, pivot)`. The remaining columns are zero and
/// the matching columns of `U` span the integer kernel of `M`.
#[derive(Debug, Clone)]
pub struct ColumnHermite {
    h: IntMatrix,
    u: IntMatrix,
    pivots: Vec<usize>,
}

impl ColumnHermite {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        let mut h = m.clone();
        let mut u = IntMatrix::identity(m.cols);
        let mut pivots = Vec::new();
        let mut j = 0;
        for r in 0..h.rows {
            if j == h.cols {
                break;
            }
            // gcd-combine row r of columns j.. into column j
            for k in j + 1..h.cols {
                let b = h[(r, k)];
                if b == 0 {
                    continue;
                }
                let a = h[(r, j)];
                let (g, s, t) = ext_gcd(a, b);
                // new_j = s*col_j + t*col_k ; new_k = (-b/g)*col_j + (a/g)*col_k
                let (u2, v2) = (-b / g, a / g);
                h.col_combine(j, k, s, t, u2, v2)?;
                u.col_combine(j, k, s, t, u2, v2)?;
            }
            let p = h[(r, j)];
            if p == 0 {
                continue;
            }
            if p < 0 {
                h.negate_col(j);
                u.negate_col(j);
            }
            let p = h[(r, j)];
            for k in 0..j {
                let q = h[(r, k)].div_euclid(p);
                if q != 0 {
                    h.col_axpy(k, -q, j)?;
                    u.col_axpy(k, -q, j)?;
                }
            }
            pivots.push(r);
            j += 1;
        }
        Ok(ColumnHermite { h, u, pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.h
    }

    pub fn pivot_value(&self, j: usize) -> i128 {
        self.h[(self.pivots[j], j)]
    }

    /// Integer solution `x` of `M x = b`, if one exists.
    pub fn solve(&self, b: &[i128]) -> Result<Option<Vec<i128>>> {
        if b.len() != self.h.rows {
            return Err(LinalgError::Dimension { expected: self.h.rows, got: b.len() });
        }
        let mut residual = b.to_vec();
        let mut coeffs = vec![0i128; self.h.cols];
        for (j, &p) in self.pivots.iter().enumerate() {
            let piv = self.h[(p, j)];
            if residual[p] % piv != 0 {
                return Ok(None);
            }
            let q = residual[p] / piv;
            coeffs[j] = q;
            if q != 0 {
                for r in p..self.h.rows {
                    let hv = self.h[(r, j)];
                    if hv != 0 {
                        residual[r] = sub(residual[r], mul(q, hv)?)?;
                    }
                }
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        self.u.mul_vec(&coeffs).map(Some)
    }

    pub fn contains(&self, v: &[i128]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    /// Canonical representative of `v` modulo the column lattice: the unique
    /// vector in the coset whose pivot coordinates lie in `[0, pivot)`.
    pub fn reduce(&self, v: &[i128]) -> Result<Vec<i128>> {
        if v.len() != self.h.rows {
            return Err(LinalgError::Dimension { expected: self.h.rows, got: v.len() });
        }
        let mut out = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let piv = self.h[(p, j)];
            let q = out[p].div_euclid(piv);
            if q != 0 {
                for r in p..self.h.rows {
                    let hv = self.h[(r, j)];
                    if hv != 0 {
                        out[r] = sub(out[r], mul(q, hv)?)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Smith normal form `D = U * M * V` with the left transform `U` retained.
#[derive(Debug, Clone)]
pub struct Smith {
    diagonal: Vec<i128>,
    left: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Smith {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        let mut a = m.clone();
        let mut left = IntMatrix::identity(m.rows);
        let (rows, cols) = (m.rows, m.cols);
        let mut diagonal = Vec::new();
        for t in 0..rows.min(cols) {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = a[(r, c)];
                    if x != 0 && best.map_or(true, |(br, bc)| x.abs() < a[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            a.swap_rows(t, br);
            left.swap_rows(t, br);
            a.swap_cols(t, bc);
            loop {
                // clear column t below the pivot
                for r in t + 1..rows {
                    let b = a[(r, t)];
                    if b == 0 {
                        continue;
                    }
                    let p = a[(t, t)];
                    if b % p == 0 {
                        a.row_axpy(r, -(b / p), t)?;
                        left.row_axpy(r, -(b / p), t)?;
                        continue;
                    }
                    let (g, s, tt) = ext_gcd(p, b);
                    let (u2, v2) = (-b / g, p / g);
                    a.row_combine(t, r, s, tt, u2, v2)?;
                    left.row_combine(t, r, s, tt, u2, v2)?;
                }
                // clear row t right of the pivot
                let mut dirty = false;
                for c in t + 1..cols {
                    let b = a[(t, c)];
                    if b == 0 {
                        continue;
                    }
                    let p = a[(t, t)];
                    if b % p == 0 {
                        a.col_axpy(c, -(b / p), t)?;
                        continue;
                    }
                    let (g, s, tt) = ext_gcd(p, b);
                    let (u2, v2) = (-b / g, p / g);
                    a.col_combine(t, c, s, tt, u2, v2)?;
                    dirty = true;
                }
                if dirty && (t + 1..rows).any(|r| a[(r, t)] != 0) {
                    continue;
                }
                // divisibility: pivot must divide the whole trailing block
                let p = a[(t, t)];
                let bad = (t + 1..rows)
                    .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                    .find(|&(r, c)| a[(r, c)] % p != 0);
                match bad {
                    Some((r, _)) => {
                        a.row_axpy(t, 1, r)?;
                        left.row_axpy(t, 1, r)?;
                    }
                    None => break,
                }
            }
            if a[(t, t)] < 0 {
                a.negate_row(t);
                left.negate_row(t);
            }
            diagonal.push(a[(t, t)]);
        }
        Ok(Smith { diagonal, left, rows, cols })
    }

    /// Nonzero diagonal entries, each dividing the next.
    pub fn diagonal(&self) -> &[i128] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Rank of the free part of the cokernel `Z^rows / M Z^cols`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.rows - self.rank()
    }

    /// Invariant factors of the torsion part of the cokernel (entries > 1).
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn left(&self) -> &IntMatrix {
        &self.left
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coordinates of `v` in the cokernel: `U v` reduced modulo the diagonal.
    pub fn coordinates(&self, v: &[i128]) -> Result<Vec<i128>> {
        let mut w = self.left.mul_vec(v)?;
        for (x, d) in w.iter_mut().zip(&self.diagonal) {
            *x = x.rem_euclid(*d);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert!(g >= 0);
                if a != 0 || b != 0 {
                    assert_eq!(a % g, 0);
                    assert_eq!(b % g, 0);
                }
            }
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[1, 2]]).determinant().unwrap(), 3);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), -1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant().unwrap(), 0);
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).determinant().unwrap(), 6);
    }

    #[test]
    fn hermite_solves_and_reduces() {
        let a = m(&[&[2, 4], &[0, 6]]);
        let h = ColumnHermite::new(&a).unwrap();
        assert_eq!(h.rank(), 2);
        let x = h.solve(&[6, 6]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![6, 6]);
        assert!(h.solve(&[1, 0]).unwrap().is_none());
        // lattice index is |det| = 12, so the box of reps has 12 points
        let mut reps = std::collections::HashSet::new();
        for x in -10..10 {
            for y in -10..10 {
                reps.insert(h.reduce(&[x, y]).unwrap());
            }
        }
        assert_eq!(reps.len(), 12);
    }

    #[test]
    fn smith_of_known_matrix() {
        // diag(2, 6) up to unimodular change
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = Smith::new(&a).unwrap();
        assert_eq!(s.diagonal(), &[2, 6, 12]);
        let l = m(&[&[-1, 1], &[1, -1]]);
        let s = Smith::new(&l).unwrap();
        assert_eq!(s.diagonal(), &[1]);
        assert_eq!(s.cokernel_free_rank(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i128::MAX / 2;
        let a = m(&[&[big, 1], &[1, big]]);
        assert_eq!(a.determinant(), Err(LinalgError::Overflow));
    }
}
