//! Dense exact linear algebra: matrices, row reduction, nullspaces and subspaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T: Scalar> {
    field: T::F,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(field: &T::F, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &T::F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn scalar(field: &T::F, n: usize, c: &T) -> Self {
        Self::identity(field, n).scale(c)
    }

    pub fn diag(field: &T::F, entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Builds from row vectors, checking shape and that every entry lives in `field`.
    pub fn from_rows(field: &T::F, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Self::from_vec(field, r, c, data)
    }

    pub fn from_vec(field: &T::F, rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        for x in &data {
            if x.field() != *field {
                return Err(Error::FieldMismatch(field.to_string(), x.field().to_string()));
            }
        }
        Ok(Self { field: field.clone(), rows, cols, data })
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(field: &T::F, len: usize, cols: &[Vec<T>]) -> Result<Self> {
        let mut m = Self::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &T::F {
        &self.field
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
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }
    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Row-major flattening; `vec()[i*n + j]` is entry (i, j).
    pub fn vectorize(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn from_vectorized(field: &T::F, n: usize, v: &[T]) -> Result<Self> {
        Self::from_vec(field, n, n, v.to_vec())
    }

    /// Entries must share one field descriptor.
    pub fn check_field(&self) -> Result<()> {
        for x in &self.data {
            if x.field() != self.field {
                return Err(Error::FieldMismatch(self.field.to_string(), x.field().to_string()));
            }
        }
        Ok(())
    }

    fn same_field(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: o.rows });
        }
        let mut out = Self::zeros(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].clone() + &(a.clone() * b);
                }
            }
        }
        Ok(out)
    }

    /// Product with a column vector.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + &(a.clone() * x);
                    }
                }
                acc
            })
            .collect())
    }

    fn zip(&self, o: &Self, f: impl Fn(T, &T) -> T) -> Result<Self> {
        self.same_field(o)?;
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: o.rows * o.cols,
            });
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a.clone(), b)).collect();
        Ok(Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and pivot columns. Pivots are the first nonzero entry found.
    pub fn rref(&self) -> Result<(Self, Vec<usize>)> {
        self.check_field()?;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rj = m.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).clone() - &(factor.clone() * rj);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<T>>> {
        let (r, pivots) = self.rref()?;
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(row, free).clone();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank().map(|r| r == self.rows).unwrap_or(false)
    }

    pub fn commutes_with(&self, o: &Self) -> Result<bool> {
        Ok(self.matmul(o)? == o.matmul(self)?)
    }

    /// Reduces every entry through `f`, producing a matrix over another field.
    pub fn map_field<U: Scalar>(&self, field: &U::F, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<U>>>()?;
        Matrix::from_vec(field, self.rows, self.cols, data)
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Linear combination `Σ c_i v_i`.
pub fn combine<T: Scalar>(field: &T::F, len: usize, coeffs: &[T], vectors: &[Vec<T>]) -> Vec<T> {
    let mut out = vec![field.zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + &(c.clone() * x);
        }
    }
    out
}

/// A subspace of `field^ambient`, stored by the nonzero rows of its reduced row echelon form,
/// so two subspaces are equal iff their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<T: Scalar> {
    field: T::F,
    ambient: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    pub fn span(field: &T::F, ambient: usize, vectors: &[Vec<T>]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::zero(field, ambient));
        }
        let m = Matrix::from_rows(field, vectors.to_vec())?;
        if m.cols() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, found: m.cols() });
        }
        let (r, pivots) = m.rref()?;
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Ok(Self { field: field.clone(), ambient, basis })
    }

    pub fn zero(field: &T::F, ambient: usize) -> Self {
        Self { field: field.clone(), ambient, basis: Vec::new() }
    }

    pub fn full(field: &T::F, ambient: usize) -> Self {
        let id = Matrix::<T>::identity(field, ambient);
        Self { field: field.clone(), ambient, basis: id.to_rows() }
    }

    pub fn field(&self) -> &T::F {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        if v.iter().all(|x| x.is_zero()) {
            return Ok(true);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(Matrix::from_rows(&self.field, rows)?.rank()? == self.dim())
    }

    pub fn is_subspace_of(&self, o: &Self) -> Result<bool> {
        for v in &self.basis {
            if !o.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Self::span(&self.field, self.ambient, &all)
    }

    /// Solves `Σ a_i u_i = Σ b_j w_j` and returns the span of the common vectors.
    pub fn intersection(&self, o: &Self) -> Result<Self> {
        if self.ambient != o.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: o.ambient });
        }
        if self.dim() == 0 || o.dim() == 0 {
            return Ok(Self::zero(&self.field, self.ambient));
        }
        let mut cols = self.basis.clone();
        cols.extend(o.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Matrix::from_columns(&self.field, self.ambient, &cols)?;
        let p = self.dim();
        let vecs: Vec<Vec<T>> = m
            .nullspace()?
            .into_iter()
            .map(|c| combine(&self.field, self.ambient, &c[..p], &self.basis))
            .collect();
        Self::span(&self.field, self.ambient, &vecs)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix<T>) -> Result<Self> {
        let vecs = self.basis.iter().map(|v| m.apply(v)).collect::<Result<Vec<_>>>()?;
        Self::span(&self.field, m.rows(), &vecs)
    }
}

impl<T: Scalar> fmt::Display for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "span{{{}}}", vs.join(", "))
    }
}

/// Column space of a matrix.
pub fn column_space<T: Scalar>(m: &Matrix<T>) -> Result<Subspace<T>> {
    Subspace::span(m.field(), m.rows(), &m.transpose().to_rows())
}

/// Kernel of a matrix.
pub fn kernel<T: Scalar>(m: &Matrix<T>) -> Result<Subspace<T>> {
    Subspace::span(m.field(), m.cols(), &m.nullspace()?)
}

/// A linear space of n×n matrices, stored through its vectorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixSubspace<T: Scalar> {
    n: usize,
    inner: Subspace<T>,
}

impl<T: Scalar> MatrixSubspace<T> {
    pub fn span(field: &T::F, n: usize, mats: &[Matrix<T>]) -> Result<Self> {
        let vecs: Vec<Vec<T>> = mats.iter().map(|m| m.vectorize()).collect();
        Ok(Self { n, inner: Subspace::span(field, n * n, &vecs)? })
    }

    pub fn from_subspace(n: usize, inner: Subspace<T>) -> Result<Self> {
        if inner.ambient() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: inner.ambient() });
        }
        Ok(Self { n, inner })
    }

    pub fn full(field: &T::F, n: usize) -> Self {
        Self { n, inner: Subspace::full(field, n * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }
    pub fn field(&self) -> &T::F {
        self.inner.field()
    }
    pub fn as_subspace(&self) -> &Subspace<T> {
        &self.inner
    }

    pub fn basis(&self) -> Vec<Matrix<T>> {
        self.inner
            .basis()
            .iter()
            .map(|v| Matrix::from_vectorized(self.inner.field(), self.n, v).expect("square basis"))
            .collect()
    }

    pub fn contains(&self, m: &Matrix<T>) -> Result<bool> {
        self.inner.contains(&m.vectorize())
    }

    pub fn is_subspace_of(&self, o: &Self) -> Result<bool> {
        self.inner.is_subspace_of(&o.inner)
    }

    pub fn intersection(&self, o: &Self) -> Result<Self> {
        Ok(Self { n: self.n, inner: self.inner.intersection(&o.inner)? })
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        Ok(Self { n: self.n, inner: self.inner.sum(&o.inner)? })
    }
}

impl<T: Scalar> fmt::Display for MatrixSubspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.basis().iter().map(|m| m.to_string()).collect();
        write!(f, "span{{{}}}", b.join(", "))
    }
}

/// Characteristic polynomial `det(tI - m)` by Berkowitz's division-free algorithm.
/// Coefficients from the leading 1 down to the constant term.
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(berkowitz(m))
}

fn berkowitz<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    let f = m.field().clone();
    let n = m.rows();
    if n == 0 {
        return vec![f.one()];
    }
    if n == 1 {
        return vec![f.one(), -m.get(0, 0).clone()];
    }
    let a = m.get(0, 0).clone();
    let r: Vec<T> = (1..n).map(|j| m.get(0, j).clone()).collect();
    let c: Vec<T> = (1..n).map(|i| m.get(i, 0).clone()).collect();
    let mut sub = Matrix::zeros(&f, n - 1, n - 1);
    for i in 1..n {
        for j in 1..n {
            sub.set(i - 1, j - 1, m.get(i, j).clone());
        }
    }
    // diags = [1, -a, -R C, -R A C, -R A^2 C, ...]
    let mut diags = vec![f.one(), -a];
    let mut v = c;
    for i in 0..n - 1 {
        let dot = r.iter().zip(&v).fold(f.zero(), |acc, (x, y)| acc + &(x.clone() * y));
        diags.push(-dot);
        if i + 1 < n - 1 {
            v = sub.apply(&v).expect("square");
        }
    }
    let tail = berkowitz(&sub);
    // Toeplitz (n+1) x n lower-triangular matrix times tail (length n).
    (0..=n)
        .map(|i| {
            let mut acc = f.zero();
            for (j, t) in tail.iter().enumerate() {
                if j <= i {
                    acc = acc + &(diags[i - j].clone() * t);
                }
            }
            acc
        })
        .collect()
}
