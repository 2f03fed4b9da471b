//! Exact matrices over cyclotomic fields, read projectively.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{conductor_containing, CycloField, CycloNum};

const FINITE_ORDER_BOUND: u64 = 1_000;
const FINITE_ORDER_CONDUCTOR_BOUND: u32 = 2_000;

/// Rank of a list of row vectors by Gaussian elimination.
pub fn rank_of_rows(rows: &[Vec<CycloNum>]) -> usize {
    let mut m: Vec<Vec<CycloNum>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inverse().expect("nonzero pivot");
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..ncols {
                if m[rank][c].is_zero() {
                    continue;
                }
                let t = &factor * &m[rank][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Basis of `{v : M v = 0}` for `M` given by its rows, `ncols` columns.
pub fn null_space(rows: &[Vec<CycloNum>], ncols: usize, field: &CycloField) -> Vec<Vec<CycloNum>> {
    let mut m: Vec<Vec<CycloNum>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inverse().expect("nonzero pivot");
        for c in col..ncols {
            if !m[rank][c].is_zero() {
                m[rank][c] = &m[rank][c] * &inv;
            }
        }
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..ncols {
                if m[rank][c].is_zero() {
                    continue;
                }
                let t = &factor * &m[rank][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            if !m[r][free].is_zero() {
                v[pc] = -&m[r][free];
            }
        }
        basis.push(v);
    }
    basis
}

/// True when all vectors are proportional (rank at most one).
pub fn rank_at_most_one(rows: &[&[CycloNum]]) -> bool {
    let Some((r, c)) = rows
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|x| !x.is_zero()).map(|c| (i, c)))
    else {
        return true;
    };
    let pivot_row = rows[r];
    let pv = &pivot_row[c];
    rows.iter().enumerate().all(|(i, row)| {
        i == r
            || row
                .iter()
                .zip(pivot_row)
                .all(|(x, y)| (x * pv) == (&row[c] * y))
    })
}

/// A dense square or rectangular matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: CycloField,
    rows: usize,
    cols: usize,
    entries: Vec<CycloNum>,
}

impl Matrix {
    pub fn zeros(field: &CycloField, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &CycloField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        let nrows = rows.len();
        let Some(first) = rows.first().and_then(|r| r.first()) else {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        };
        let field = first.field().clone();
        let ncols = rows[0].len();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for x in r {
                if !x.field().same_as(&field) {
                    return Err(Error::FieldMismatch(
                        x.field().conductor(),
                        field.conductor(),
                    ));
                }
                entries.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<CycloNum>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycloNum::is_zero)
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.entries
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !self.field.same_as(&other.field) {
            return Err(Error::FieldMismatch(
                self.field.conductor(),
                other.field.conductor(),
            ));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Result<Vec<CycloNum>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, c: &CycloNum) -> Matrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            if !e.is_zero() {
                *e = &*e * c;
            }
        }
        out
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix shapes".into()));
        }
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            if !o.is_zero() {
                *e = &*e - o;
            }
        }
        Ok(out)
    }

    /// `self - c I`.
    pub fn minus_scalar(&self, c: &CycloNum) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            out.entries[idx] = &out.entries[idx] - c;
        }
        out
    }

    pub fn trace(&self) -> CycloNum {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.row_vectors())
    }

    pub fn det(&self) -> Result<CycloNum> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.row_vectors();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inverse()?;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    if m[col][c].is_zero() {
                        continue;
                    }
                    let t = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.row_vectors();
        let mut b = Matrix::identity(&self.field, n).row_vectors();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(piv, col);
            b.swap(piv, col);
            let inv = a[col][col].inverse()?;
            for c in 0..n {
                if !a[col][c].is_zero() {
                    a[col][c] = &a[col][c] * &inv;
                }
                if !b[col][c].is_zero() {
                    b[col][c] = &b[col][c] * &inv;
                }
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    if !a[col][c].is_zero() {
                        let t = &factor * &a[col][c];
                        a[r][c] = &a[r][c] - &t;
                    }
                    if !b[col][c].is_zero() {
                        let t = &factor * &b[col][c];
                        b[r][c] = &b[r][c] - &t;
                    }
                }
            }
        }
        Matrix::from_rows(b)
    }

    pub fn lift(&self, target: &CycloField) -> Result<Matrix> {
        if self.field.same_as(target) {
            return Ok(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed_lift(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// An invertible square matrix acting on projective space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix(Matrix);

impl ProjMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        if m.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(ProjMatrix(m))
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(field: &CycloField, n: usize) -> Self {
        ProjMatrix(Matrix::identity(field, n))
    }

    pub fn diagonal(entries: &[CycloNum]) -> Result<Self> {
        let field = entries
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty diagonal".into()))?
            .field()
            .clone();
        let n = entries.len();
        let mut m = Matrix::zeros(&field, n, n);
        for (i, e) in entries.iter().enumerate() {
            if e.is_zero() {
                return Err(Error::SingularMatrix);
            }
            if !e.field().same_as(&field) {
                return Err(Error::FieldMismatch(
                    e.field().conductor(),
                    field.conductor(),
                ));
            }
            m.set(i, i, e.clone());
        }
        Ok(ProjMatrix(m))
    }

    /// Monomial matrix with `M[i][sigma[i]] = scalars[i]`, so `(M x)_i = scalars[i] x_{sigma[i]}`.
    pub fn monomial(sigma: &[usize], scalars: &[CycloNum]) -> Result<Self> {
        let n = sigma.len();
        if scalars.len() != n || n == 0 {
            return Err(Error::DimensionMismatch("monomial matrix data".into()));
        }
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || seen[s] {
                return Err(Error::DimensionMismatch("not a permutation".into()));
            }
            seen[s] = true;
        }
        let field = scalars[0].field().clone();
        let mut m = Matrix::zeros(&field, n, n);
        for i in 0..n {
            if scalars[i].is_zero() {
                return Err(Error::SingularMatrix);
            }
            m.set(i, sigma[i], scalars[i].clone());
        }
        Ok(ProjMatrix(m))
    }

    pub fn permutation(field: &CycloField, sigma: &[usize]) -> Result<Self> {
        Self::monomial(sigma, &vec![field.one(); sigma.len()])
    }

    /// A change of coordinates whose first column is `p`, completed by the
    /// standard basis vectors other than the first nonzero coordinate of `p`.
    pub fn completing_basis(p: &[CycloNum]) -> Result<Self> {
        let pivot = p
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(Error::ZeroVector)?;
        Self::completing_basis_with_pivot(p, pivot)
    }

    /// As [`completing_basis`](Self::completing_basis) but omitting the given
    /// coordinate, which must be nonzero in `p`.
    pub fn completing_basis_with_pivot(p: &[CycloNum], pivot: usize) -> Result<Self> {
        let n = p.len();
        if pivot >= n || p[pivot].is_zero() {
            return Err(Error::SingularMatrix);
        }
        let field = p[pivot].field().clone();
        let mut m = Matrix::zeros(&field, n, n);
        for (i, x) in p.iter().enumerate() {
            m.set(i, 0, x.clone());
        }
        let mut col = 1;
        for i in 0..n {
            if i != pivot {
                m.set(i, col, field.one());
                col += 1;
            }
        }
        Ok(ProjMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn field(&self) -> &CycloField {
        &self.0.field
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        self.0.row(i)
    }

    pub fn column(&self, j: usize) -> Vec<CycloNum> {
        self.0.column(j)
    }

    pub fn row_vectors(&self) -> Vec<Vec<CycloNum>> {
        self.0.row_vectors()
    }

    pub fn mul(&self, other: &ProjMatrix) -> Result<ProjMatrix> {
        Ok(ProjMatrix(self.0.checked_mul(&other.0)?))
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Result<Vec<CycloNum>> {
        self.0.mul_vec(v)
    }

    pub fn inverse(&self) -> Result<ProjMatrix> {
        Ok(ProjMatrix(self.0.inverse()?))
    }

    pub fn det(&self) -> CycloNum {
        self.0.det().expect("square")
    }

    pub fn trace(&self) -> CycloNum {
        self.0.trace()
    }

    pub fn pow(&self, mut k: u64) -> ProjMatrix {
        let mut base = self.clone();
        let mut acc = ProjMatrix::identity(self.field(), self.size());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same shape");
            }
        }
        acc
    }

    /// `M A M^{-1}` where `self = A`.
    pub fn conjugate_by(&self, m: &ProjMatrix) -> Result<ProjMatrix> {
        m.mul(self)?.mul(&m.inverse()?)
    }

    pub fn lift(&self, target: &CycloField) -> Result<ProjMatrix> {
        Ok(ProjMatrix(self.0.lift(target)?))
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.size();
        let d = self.get(0, 0);
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    self.get(i, j) == d
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// For a monomial matrix, `sigma` with `M[i][sigma[i]] != 0`.
    pub fn monomial_permutation(&self) -> Option<Vec<usize>> {
        let n = self.size();
        let mut sigma = Vec::with_capacity(n);
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            sigma.push(nz[0]);
        }
        Some(sigma)
    }

    pub fn diagonal_entries(&self) -> Vec<CycloNum> {
        (0..self.size()).map(|i| self.get(i, i).clone()).collect()
    }

    /// Scalar multiple with the first nonzero entry (row-major) equal to 1.
    pub fn normalized(&self) -> ProjMatrix {
        let first = self
            .0
            .entries
            .iter()
            .find(|x| !x.is_zero())
            .expect("invertible matrix");
        if first.is_one() {
            return self.clone();
        }
        let inv = first.inverse().expect("nonzero");
        ProjMatrix(self.0.scale(&inv))
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, other: &ProjMatrix) -> bool {
        if self.size() != other.size() || !self.field().same_as(other.field()) {
            return false;
        }
        let Some(k) = self.0.entries.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let a = &self.0.entries[k];
        let b = &other.0.entries[k];
        if b.is_zero() {
            return false;
        }
        self.0
            .entries
            .iter()
            .zip(&other.0.entries)
            .all(|(x, y)| (x * b) == (y * a))
    }

    /// Smallest `k >= 1` with `A^k` scalar.
    pub fn projective_order(&self, k_max: u64) -> Result<u64> {
        let mut p = self.clone();
        for k in 1..=k_max {
            if p.is_scalar() {
                return Ok(k);
            }
            if k < k_max {
                p = p.mul(self)?;
            }
        }
        Err(Error::OrderExceedsBound(k_max))
    }

    /// True when `A p` is proportional to `p`.
    pub fn fixes_point(&self, p: &[CycloNum]) -> Result<bool> {
        let ap = self.mul_vec(p)?;
        Ok(rank_at_most_one(&[&ap, p]))
    }

    pub fn eigen_structure(&self) -> Result<EigenStructure> {
        if self.is_diagonal() {
            let field = self.field().clone();
            let n = self.size();
            let mut pairs: Vec<EigenPair> = Vec::new();
            for i in 0..n {
                let v = self.get(i, i).clone();
                let e = unit_vector(&field, n, i);
                match pairs.iter_mut().find(|p| p.value == v) {
                    Some(p) => p.basis.push(e),
                    None => pairs.push(EigenPair {
                        value: v,
                        basis: vec![e],
                    }),
                }
            }
            return Ok(EigenStructure { field, pairs });
        }
        if let Some(sigma) = self.monomial_permutation() {
            return self.monomial_eigen_structure(&sigma);
        }
        self.finite_order_eigen_structure()
    }

    /// Eigenspaces of a matrix with `A^m = c I`: the eigenvalues are the
    /// `m`-th roots of `c`, found when `c` is a root of unity.
    fn finite_order_eigen_structure(&self) -> Result<EigenStructure> {
        let unsupported = || {
            Error::UnsupportedShape(
                "neither diagonal, monomial nor of small finite order; supply a diagonalizing witness".into(),
            )
        };
        let m = self
            .projective_order(FINITE_ORDER_BOUND)
            .map_err(|_| unsupported())?;
        let c = self.pow(m).get(0, 0).clone();
        let (big_m, j) = c.recognize_root_of_unity().ok_or_else(unsupported)?;
        let conductor = conductor_containing(self.field().conductor(), m as u32 * big_m);
        if conductor > FINITE_ORDER_CONDUCTOR_BOUND {
            return Err(unsupported());
        }
        let field = CycloField::new(conductor)?;
        let a = self.lift(&field)?;
        let base = field.signed_root_of_unity(m as u32 * big_m, j as i64)?;
        let n = self.size();
        let mut pairs = Vec::new();
        let mut dims = 0;
        for t in 0..m {
            let lambda = &base * &field.signed_root_of_unity(m as u32, t as i64)?;
            let basis = null_space(&a.0.minus_scalar(&lambda).row_vectors(), n, &field);
            if !basis.is_empty() {
                dims += basis.len();
                pairs.push(EigenPair {
                    value: lambda,
                    basis,
                });
            }
        }
        if dims != n {
            return Err(Error::Inconsistency(format!(
                "eigenspaces of a matrix of finite order span dimension {dims} of {n}"
            )));
        }
        Ok(EigenStructure { field, pairs })
    }

    fn monomial_eigen_structure(&self, sigma: &[usize]) -> Result<EigenStructure> {
        let n = self.size();
        let mut visited = vec![false; n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                cyc.push(i);
                i = sigma[i];
            }
            cycles.push(cyc);
        }
        // each cycle needs an l-th root of its entry product
        let mut recog = Vec::with_capacity(cycles.len());
        let mut conductor = self.field().conductor();
        for cyc in &cycles {
            let mut q = self.field().one();
            for &i in cyc {
                q = &q * self.get(i, sigma[i]);
            }
            let (m, j) = q
                .recognize_root_of_unity()
                .ok_or(Error::UnrecognizedCycleProduct)?;
            let l = cyc.len() as u32;
            conductor = conductor_containing(conductor, m * l);
            recog.push((m, j));
        }
        let field = CycloField::new(conductor)?;
        let a = self.lift(&field)?;
        let mut pairs: Vec<EigenPair> = Vec::new();
        for (cyc, &(m, j)) in cycles.iter().zip(&recog) {
            let l = cyc.len() as u32;
            for t in 0..l {
                // (zeta_{ml}^j) * zeta_l^t = zeta_{ml}^{j + m t}
                let lambda = field.signed_root_of_unity(m * l, (j + m * t) as i64)?;
                let mut v = vec![field.zero(); n];
                let mut c = field.one();
                for &i in cyc {
                    v[i] = c.clone();
                    let w_inv = a.get(i, sigma[i]).inverse()?;
                    c = &(&c * &lambda) * &w_inv;
                }
                match pairs.iter_mut().find(|p| p.value == lambda) {
                    Some(p) => p.basis.push(v),
                    None => pairs.push(EigenPair {
                        value: lambda,
                        basis: vec![v],
                    }),
                }
            }
        }
        Ok(EigenStructure { field, pairs })
    }

    /// Eigenstructure given `W` whose columns diagonalize `A` (`W^{-1} A W` diagonal).
    pub fn eigen_structure_with_witness(&self, w: &ProjMatrix) -> Result<EigenStructure> {
        let field = crate::exactnum::CycloField::new(conductor_containing(
            self.field().conductor(),
            w.field().conductor(),
        ))?;
        let a = self.lift(&field)?;
        let w = w.lift(&field)?;
        let d = w.inverse()?.mul(&a)?.mul(&w)?;
        if !d.is_diagonal() {
            return Err(Error::UnsupportedShape(
                "witness does not diagonalize the matrix".into(),
            ));
        }
        let n = self.size();
        let mut pairs: Vec<EigenPair> = Vec::new();
        for i in 0..n {
            let v = d.get(i, i).clone();
            let col = w.column(i);
            match pairs.iter_mut().find(|p| p.value == v) {
                Some(p) => p.basis.push(col),
                None => pairs.push(EigenPair {
                    value: v,
                    basis: vec![col],
                }),
            }
        }
        Ok(EigenStructure { field, pairs })
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn unit_vector(field: &CycloField, n: usize, i: usize) -> Vec<CycloNum> {
    (0..n)
        .map(|j| if i == j { field.one() } else { field.zero() })
        .collect()
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize_point(p: &[CycloNum]) -> Result<Vec<CycloNum>> {
    let first = p.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    if first.is_one() {
        return Ok(p.to_vec());
    }
    let inv = first.inverse()?;
    Ok(p.iter().map(|x| x * &inv).collect())
}

pub fn points_proj_eq(p: &[CycloNum], q: &[CycloNum]) -> bool {
    p.len() == q.len()
        && p.iter().any(|x| !x.is_zero())
        && q.iter().any(|x| !x.is_zero())
        && rank_at_most_one(&[p, q])
}

pub fn lift_vector(p: &[CycloNum], target: &CycloField) -> Result<Vec<CycloNum>> {
    p.iter().map(|x| x.embed_lift(target)).collect()
}

/// Renders a point as `[a:b:c]`.
pub fn format_point(p: &[CycloNum]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(":"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub value: CycloNum,
    pub basis: Vec<Vec<CycloNum>>,
}

impl EigenPair {
    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }
}

/// Eigenvalues with eigenspace bases, all over `field` (possibly enlarged
/// from the matrix field).
#[derive(Clone, Debug)]
pub struct EigenStructure {
    pub field: CycloField,
    pub pairs: Vec<EigenPair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Inner,
    Outer,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Inner => "inner",
            PointKind::Outer => "outer",
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of the shape test: `A` is conjugate to `diag(a, b, ..., b)` with
/// `a/b` a primitive `(d-1)`-th (inner) or `d`-th (outer) root of unity.
#[derive(Clone, Debug)]
pub struct ShapeMatch {
    pub kind: PointKind,
    pub a: CycloNum,
    pub b: CycloNum,
    pub ratio: CycloNum,
    pub point: Vec<CycloNum>,
}

/// Field containing the matrix entries and the `(d-1)`-th and `d`-th roots of unity.
pub fn detection_field(field: &CycloField, d: u32) -> Result<CycloField> {
    let c = conductor_containing(conductor_containing(field.conductor(), d - 1), d);
    if c == field.conductor() {
        Ok(field.clone())
    } else {
        CycloField::new(c)
    }
}

fn coprime(a: u32, b: u32) -> bool {
    num_integer::gcd(a, b) == 1
}

/// Decides whether `A` is conjugate to `diag(a, b I_{n+1})` with `a/b` a primitive
/// `(d-1)`-th root (inner) or `d`-th root (outer) of unity.
///
/// For a candidate ratio `rho`, the trace fixes `b = t/(rho+n+1)`, and the
/// condition is `rank(A - bI) = 1` together with `(A - rho b I)(A - bI) = 0`.
/// Both are tested after multiplying through by `s = rho+n+1`.
pub fn theorem8_shape_test(a_mat: &ProjMatrix, d: u32, n: usize) -> Result<Option<ShapeMatch>> {
    if a_mat.size() != n + 2 {
        return Err(Error::DimensionMismatch(format!(
            "matrix of size {} for n = {n}",
            a_mat.size()
        )));
    }
    if d < 3 {
        return Err(Error::Precondition("degree must be at least 3".into()));
    }
    let field = detection_field(a_mat.field(), d)?;
    let a = a_mat.lift(&field)?;
    let t = a.trace();
    let scan = [(PointKind::Inner, d - 1), (PointKind::Outer, d)];
    for (kind, order) in scan {
        for j in 1..order {
            if !coprime(j, order) {
                continue;
            }
            let rho = field.signed_root_of_unity(order, j as i64)?;
            let s = &rho + &field.from_int(n as i64 + 1);
            assert!(!s.is_zero(), "rho + n + 1 vanishes");
            let sa = a.matrix().scale(&s);
            let b_mat = sa.minus_scalar(&t);
            if b_mat.is_zero() {
                continue;
            }
            let rows: Vec<&[CycloNum]> = (0..n + 2).map(|i| b_mat.row(i)).collect();
            if !rank_at_most_one(&rows) {
                continue;
            }
            let rho_t = &rho * &t;
            let c_mat = sa.minus_scalar(&rho_t);
            if !c_mat.checked_mul(&b_mat)?.is_zero() {
                continue;
            }
            let col = (0..n + 2)
                .map(|j| b_mat.column(j))
                .find(|c| c.iter().any(|x| !x.is_zero()))
                .expect("nonzero matrix");
            let s_inv = s.inverse()?;
            let b = &t * &s_inv;
            let a_val = &rho * &b;
            return Ok(Some(ShapeMatch {
                kind,
                a: a_val,
                b,
                ratio: rho,
                point: normalize_point(&col)?,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> CycloField {
        CycloField::new(n).unwrap()
    }

    fn z(f: &CycloField, m: u32, j: i64) -> CycloNum {
        f.root_of_unity(m, j).unwrap()
    }

    #[test]
    fn basic_examples() {
        let f = q(5);
        let d = Matrix::from_rows(vec![
            vec![z(&f, 5, 1), f.zero(), f.zero(), f.zero()],
            vec![f.zero(), f.one(), f.zero(), f.zero()],
            vec![f.zero(), f.zero(), f.one(), f.zero()],
            vec![f.zero(), f.zero(), f.zero(), f.one()],
        ])
        .unwrap();
        assert_eq!(d.minus_scalar(&f.one()).rank(), 1);
        let f3 = q(3);
        let m = ProjMatrix::diagonal(&[z(&f3, 3, 1), z(&f3, 3, 2), f3.one(), f3.one()]).unwrap();
        assert!(m.det().is_one());
        let f1 = CycloField::rationals();
        let swap = ProjMatrix::permutation(&f1, &[1, 0]).unwrap();
        assert_eq!(swap.inverse().unwrap(), swap);
        assert_eq!(
            ProjMatrix::from_rows(vec![vec![f1.one(), f1.one()], vec![f1.one(), f1.one()]]),
            Err(Error::SingularMatrix)
        );
    }

    fn exa3_a(f: &CycloField) -> ProjMatrix {
        ProjMatrix::monomial(
            &[0, 1, 3, 2],
            &[z(f, 55, -10), z(f, 55, 1), f.one(), f.one()],
        )
        .unwrap()
    }

    #[test]
    fn orders() {
        let f = q(5);
        let g = ProjMatrix::diagonal(&[z(&f, 5, 3), z(&f, 5, 2), f.one()]).unwrap();
        assert_eq!(g.projective_order(10_000).unwrap(), 5);
        assert_eq!(ProjMatrix::identity(&f, 3).projective_order(1).unwrap(), 1);
        assert_eq!(g.projective_order(4), Err(Error::OrderExceedsBound(4)));
        let f55 = q(55);
        assert_eq!(exa3_a(&f55).projective_order(10_000).unwrap(), 110);
        // scalar multiples have the same projective order
        let scaled = ProjMatrix::new(exa3_a(&f55).matrix().scale(&z(&f55, 11, 3))).unwrap();
        assert_eq!(scaled.projective_order(10_000).unwrap(), 110);
    }

    fn check_pairs(a: &ProjMatrix, es: &EigenStructure) {
        let a = a.lift(&es.field).unwrap();
        let total: usize = es.pairs.iter().map(EigenPair::multiplicity).sum();
        assert_eq!(total, a.size());
        for p in &es.pairs {
            for v in &p.basis {
                let av = a.mul_vec(v).unwrap();
                let lv: Vec<CycloNum> = v.iter().map(|x| x * &p.value).collect();
                assert_eq!(av, lv);
            }
        }
    }

    #[test]
    fn eigenspaces_of_a_conjugated_diagonal() {
        let f = q(4);
        let i4 = z(&f, 4, 1);
        let d = ProjMatrix::diagonal(&[i4.clone(), i4.clone(), f.one(), -f.one()]).unwrap();
        let h = ProjMatrix::from_rows(
            [[1, 1, 0, 2], [0, 1, -1, 0], [2, 0, 1, 1], [1, 1, 1, 0]]
                .iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
        .unwrap();
        let a = d.conjugate_by(&h).unwrap();
        let es = a.eigen_structure().unwrap();
        check_pairs(&a, &es);
        let mut mult: Vec<usize> = es.pairs.iter().map(EigenPair::multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 1, 2]);
        let big = es.pairs.iter().find(|p| p.multiplicity() == 2).unwrap();
        let span = vec![big.basis[0].clone(), big.basis[1].clone(), h.column(0)];
        assert_eq!(rank_of_rows(&span), 2);
    }

    #[test]
    fn null_space_examples() {
        let f = q(1);
        let rows: Vec<Vec<CycloNum>> = [[1, 2, 3], [2, 4, 6]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
            .collect();
        let ns = null_space(&rows, 3, &f);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = (0..3).fold(f.zero(), |acc, k| &acc + &(&rows[0][k] * &v[k]));
            assert!(dot.is_zero());
        }
        assert!(null_space(&ProjMatrix::identity(&f, 3).row_vectors(), 3, &f).is_empty());
    }

    #[test]
    fn eigen_examples() {
        let f3 = q(3);
        let m = ProjMatrix::diagonal(&[z(&f3, 3, 1), z(&f3, 3, 2), f3.one(), f3.one()]).unwrap();
        let es = m.eigen_structure().unwrap();
        assert_eq!(es.pairs.len(), 3);
        assert_eq!(es.pairs[2].value, f3.one());
        assert_eq!(es.pairs[2].multiplicity(), 2);
        check_pairs(&m, &es);

        let f1 = CycloField::rationals();
        let swap = ProjMatrix::permutation(&f1, &[1, 0]).unwrap();
        let es = swap.eigen_structure().unwrap();
        check_pairs(&swap, &es);
        let one = es.pairs.iter().find(|p| p.value.is_one()).unwrap();
        assert_eq!(one.basis[0], vec![es.field.one(), es.field.one()]);
        let minus = es
            .pairs
            .iter()
            .find(|p| p.value == -es.field.one())
            .unwrap();
        assert_eq!(minus.basis[0], vec![es.field.one(), -es.field.one()]);

        let cyc = ProjMatrix::monomial(&[1, 0], &[f3.one(), z(&f3, 3, 1)]).unwrap();
        let es = cyc.eigen_structure().unwrap();
        check_pairs(&cyc, &es);
        for p in &es.pairs {
            assert_eq!(p.value.pow(2), z(&es.field, 3, 1));
        }
        assert_eq!(es.pairs.len(), 2);

        let f2 = CycloField::rationals();
        let bad = ProjMatrix::monomial(&[1, 0], &[f2.one(), f2.from_int(2)]).unwrap();
        assert_eq!(
            bad.eigen_structure().unwrap_err(),
            Error::UnrecognizedCycleProduct
        );
        let full = ProjMatrix::from_rows(vec![
            vec![f2.one(), f2.one()],
            vec![f2.zero(), f2.from_int(2)],
        ])
        .unwrap();
        assert!(matches!(
            full.eigen_structure(),
            Err(Error::UnsupportedShape(_))
        ));
        let w = ProjMatrix::from_rows(vec![vec![f2.one(), f2.one()], vec![f2.zero(), f2.one()]])
            .unwrap();
        let es = full.eigen_structure_with_witness(&w).unwrap();
        check_pairs(&full, &es);
    }

    #[test]
    fn shape_test_examples() {
        let f4 = q(4);
        let g = ProjMatrix::diagonal(&[f4.zeta(), f4.one(), f4.one()]).unwrap();
        let m = theorem8_shape_test(&g, 4, 1).unwrap().unwrap();
        assert_eq!(m.kind, PointKind::Outer);
        assert!(m.b.is_one());
        assert_eq!(m.a, m.b.field().root_of_unity(4, 1).unwrap());
        assert!(points_proj_eq(
            &m.point,
            &unit_vector(&m.b.field().clone(), 3, 0)
        ));

        let f5 = q(5);
        let g = ProjMatrix::diagonal(&[z(&f5, 5, 3), z(&f5, 5, 2), f5.one()]).unwrap();
        for k in 1..=4 {
            assert!(theorem8_shape_test(&g.pow(k), 6, 1).unwrap().is_none());
        }
    }

    #[test]
    fn shape_test_under_conjugation() {
        let f4 = q(4);
        let g = ProjMatrix::diagonal(&[f4.zeta(), f4.one(), f4.one(), f4.one()]).unwrap();
        let m = ProjMatrix::from_rows(vec![
            vec![f4.one(), f4.from_int(2), f4.zero(), f4.one()],
            vec![f4.zero(), f4.one(), f4.from_int(-1), f4.zero()],
            vec![f4.from_int(3), f4.zero(), f4.one(), f4.zero()],
            vec![f4.zero(), f4.zero(), f4.one(), f4.from_int(1)],
        ])
        .unwrap();
        let conj = g.conjugate_by(&m).unwrap();
        let r = theorem8_shape_test(&conj, 5, 2).unwrap().unwrap();
        assert_eq!(r.kind, PointKind::Inner);
        let target = detection_field(&f4, 5).unwrap();
        let expected = lift_vector(&m.column(0), &target).unwrap();
        assert!(points_proj_eq(&r.point, &expected));
    }
}
