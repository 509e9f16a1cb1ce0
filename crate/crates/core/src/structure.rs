//! Centers, centralizers, series, ideals and the small-dimension structural tests.

use std::fmt;

use crate::algebra::{BiHomLieAlgebra, StructureConstants};
use crate::derivation::{central_derivations_with, centroid, commutator, derivations, Sidedness};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, MatrixSubspace, Subspace};
use crate::scalar::{Field, Scalar};

/// `span{[s, t] : s ∈ S, t ∈ T}` over basis vectors.
pub fn product_subspace<T: Scalar>(l: &BiHomLieAlgebra<T>, s: &Subspace<T>, t: &Subspace<T>) -> Result<Subspace<T>> {
    let mut vecs = Vec::new();
    for x in s.basis() {
        for y in t.basis() {
            vecs.push(l.bracket(x, y)?);
        }
    }
    Subspace::span(l.field(), l.dim(), &vecs)
}

pub fn whole<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Subspace<T> {
    Subspace::full(l.field(), l.dim())
}

/// Solves for all `x` with `[x, v] = 0` (and `[v, x] = 0` when two-sided) for each `v`.
fn annihilator<T: Scalar>(l: &BiHomLieAlgebra<T>, vs: &[Vec<T>], side: Sidedness) -> Result<Subspace<T>> {
    let n = l.dim();
    let f = l.field();
    let mut rows = Vec::new();
    for v in vs {
        // ([x, v])_s = Σ_i x_i ([e_i, v])_s
        let left: Vec<Vec<T>> = (0..n).map(|i| l.bracket(&l.unit(i), v)).collect::<Result<_>>()?;
        for s in 0..n {
            rows.push(left.iter().map(|col| col[s].clone()).collect());
        }
        if side == Sidedness::TwoSided {
            let right: Vec<Vec<T>> = (0..n).map(|i| l.bracket(v, &l.unit(i))).collect::<Result<_>>()?;
            for s in 0..n {
                rows.push(right.iter().map(|col| col[s].clone()).collect());
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(f, n));
    }
    kernel(&Matrix::from_rows(f, rows)?)
}

/// `{x : [x, y] = 0 for all y}`, or both slots when two-sided.
pub fn center_with<T: Scalar>(l: &BiHomLieAlgebra<T>, side: Sidedness) -> Result<Subspace<T>> {
    annihilator(l, whole(l).basis(), side)
}

pub fn center<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<Subspace<T>> {
    center_with(l, Sidedness::OneSided)
}

/// `{x : [x, s] = 0 for all s ∈ S}`.
pub fn centralizer<T: Scalar>(l: &BiHomLieAlgebra<T>, s: &Subspace<T>) -> Result<Subspace<T>> {
    annihilator(l, s.basis(), Sidedness::OneSided)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// Dimensions from the whole space until the terms repeat.
    pub dims: Vec<usize>,
    pub terminated_at_zero: bool,
    /// Index of the first zero term, when it exists.
    pub steps: Option<usize>,
}

impl fmt::Display for SeriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", dims.join(", "))?;
        if let Some(s) = self.steps {
            write!(f, " ({s}-step)")?;
        }
        Ok(())
    }
}

fn run_series<S: Clone + PartialEq>(
    kind: SeriesKind,
    start: S,
    dim: impl Fn(&S) -> usize,
    mut next: impl FnMut(&S) -> Result<S>,
) -> Result<SeriesReport> {
    let mut history = vec![start];
    loop {
        let cur = history.last().expect("nonempty");
        if dim(cur) == 0 {
            break;
        }
        let nx = next(cur)?;
        if history.contains(&nx) {
            break;
        }
        history.push(nx);
    }
    let dims: Vec<usize> = history.iter().map(&dim).collect();
    let steps = dims.iter().position(|&d| d == 0);
    Ok(SeriesReport { kind, dims, terminated_at_zero: steps.is_some(), steps })
}

/// `L^0 = L`, `L^k = [L, L^{k-1}]`.
pub fn lower_central_series<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<SeriesReport> {
    let all = whole(l);
    run_series(SeriesKind::LowerCentral, all.clone(), Subspace::dim, |s| product_subspace(l, &all, s))
}

/// `L^(0) = L`, `L^(k) = [L^(k-1), L^(k-1)]`.
pub fn derived_series<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<SeriesReport> {
    run_series(SeriesKind::Derived, whole(l), Subspace::dim, |s| product_subspace(l, s, s))
}

pub fn is_nilpotent<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<bool> {
    Ok(lower_central_series(l)?.terminated_at_zero)
}

pub fn is_solvable<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<bool> {
    Ok(derived_series(l)?.terminated_at_zero)
}

/// Twist-invariant and closed under brackets with `L` on both sides.
pub fn is_ideal<T: Scalar>(l: &BiHomLieAlgebra<T>, s: &Subspace<T>) -> Result<bool> {
    let all = whole(l);
    Ok(s.image(l.alpha())?.is_subspace_of(s)?
        && s.image(l.beta())?.is_subspace_of(s)?
        && product_subspace(l, s, &all)?.is_subspace_of(s)?
        && product_subspace(l, &all, s)?.is_subspace_of(s)?)
}

pub fn ker_alpha_plus_ker_beta<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<Subspace<T>> {
    kernel(l.alpha())?.sum(&kernel(l.beta())?)
}

/// Lower central series of a matrix Lie algebra under the commutator.
/// Fails if the span is not closed under commutators.
pub fn matrix_lie_lower_central<T: Scalar>(space: &MatrixSubspace<T>) -> Result<SeriesReport> {
    let basis = space.basis();
    for a in &basis {
        for b in &basis {
            if !space.contains(&commutator(a, b)?)? {
                return Err(Error::Precondition("derivation span is not closed under commutator".into()));
            }
        }
    }
    let field = space.field().clone();
    let n = space.n();
    run_series(SeriesKind::LowerCentral, space.clone(), MatrixSubspace::dim, |cur| {
        let mut mats = Vec::new();
        for a in &basis {
            for b in cur.basis() {
                mats.push(commutator(a, &b)?);
            }
        }
        MatrixSubspace::span(&field, n, &mats)
    })
}

/// Whether the Lie algebra `Der_{α⁰β⁰}(L)` is nilpotent.
pub fn is_characteristically_nilpotent<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<bool> {
    Ok(matrix_lie_lower_central(&derivations(l, 0, 0)?.space)?.terminated_at_zero)
}

/// `Γ_{α⁰β⁰}(L) ⊆ span(CDer_{α⁰β⁰}(L) ∪ {id})`, without any decomposition.
pub fn is_small_centroid_with<T: Scalar>(l: &BiHomLieAlgebra<T>, side: Sidedness) -> Result<bool> {
    let gamma = centroid(l, 0, 0)?;
    let cder = central_derivations_with(l, 0, 0, side)?;
    let id = MatrixSubspace::span(l.field(), l.dim(), &[Matrix::identity(l.field(), l.dim())])?;
    gamma.space.is_subspace_of(&cder.space.sum(&id)?)
}

pub fn is_small_centroid<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<bool> {
    is_small_centroid_with(l, Sidedness::OneSided)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallVerdict {
    pub small: bool,
    /// True when the verdict was taken factor by factor over a decomposition.
    pub delegated: bool,
}

/// Small-centroid verdict; two-dimensional decomposable algebras delegate to their factors.
pub fn small_centroid_verdict<T: Scalar>(l: &BiHomLieAlgebra<T>, side: Sidedness) -> Result<SmallVerdict> {
    if l.dim() == 2 {
        if let Some((a, b)) = decompose_2dim(l)?.ideals {
            let small = is_small_centroid_with(&restrict(l, &a)?, side)? && is_small_centroid_with(&restrict(l, &b)?, side)?;
            return Ok(SmallVerdict { small, delegated: true });
        }
    }
    Ok(SmallVerdict { small: is_small_centroid_with(l, side)?, delegated: false })
}

/// Coordinates of `v` in the stored basis of `s`.
fn coords<T: Scalar>(s: &Subspace<T>, v: &[T]) -> Result<Vec<T>> {
    let f = s.field();
    let a = Matrix::from_columns(f, s.ambient(), s.basis())?;
    let mut aug = Matrix::zeros(f, s.ambient(), s.dim() + 1);
    for (i, x) in v.iter().enumerate().take(s.ambient()) {
        for j in 0..s.dim() {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, s.dim(), x.clone());
    }
    let (r, piv) = aug.rref()?;
    if piv.contains(&s.dim()) {
        return Err(Error::Precondition("vector outside subspace".into()));
    }
    Ok((0..s.dim()).map(|j| r.get(j, s.dim()).clone()).collect())
}

/// The algebra structure on an ideal, in the ideal's stored basis.
pub fn restrict<T: Scalar>(l: &BiHomLieAlgebra<T>, s: &Subspace<T>) -> Result<BiHomLieAlgebra<T>> {
    if !is_ideal(l, s)? {
        return Err(Error::Precondition("subspace is not an ideal".into()));
    }
    let d = s.dim();
    let b = s.basis();
    let c = StructureConstants::from_products(l.field(), d, |i, j| coords(s, &l.bracket(&b[i], &b[j])?))?;
    let tw = |m: &Matrix<T>| -> Result<Matrix<T>> {
        let cols = b.iter().map(|v| coords(s, &m.apply(v)?)).collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(l.field(), d, &cols)
    };
    BiHomLieAlgebra::new(c, tw(l.alpha())?, tw(l.beta())?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<T: Scalar> {
    /// Two one-dimensional ideals spanning the algebra, if found.
    pub ideals: Option<(Subspace<T>, Subspace<T>)>,
    /// Whether `L = [L, L] ⊕ C(L)` holds.
    pub square_plus_center: bool,
}

fn eigenvalues_2x2<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    let f = m.field();
    if let Some(all) = f.elements() {
        let id = Matrix::identity(f, 2);
        return Ok(all.into_iter().filter(|t| !m.sub(&id.scale(t)).unwrap().is_invertible()).collect());
    }
    let tr = m.get(0, 0).clone() + m.get(1, 1);
    let det = m.get(0, 0).clone() * m.get(1, 1) - &(m.get(0, 1).clone() * m.get(1, 0));
    let disc = tr.clone() * &tr - &(f.from_i64(4) * &det);
    let root = disc
        .sqrt()
        .ok_or_else(|| Error::UnsupportedField(format!("twist {m} has eigenvalues outside the field")))?;
    let half = f.from_i64(2).inv().expect("char 0");
    let mut out = vec![(tr.clone() + &root) * &half];
    if !root.is_zero() {
        out.push((tr - &root) * &half);
    }
    Ok(out)
}

/// Invariant lines of a 2×2 matrix; `None` when every line is invariant.
fn invariant_lines<T: Scalar>(m: &Matrix<T>) -> Result<Option<Vec<Subspace<T>>>> {
    let f = m.field();
    if m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1) {
        return Ok(None);
    }
    let id = Matrix::identity(f, 2);
    let mut out = Vec::new();
    for t in eigenvalues_2x2(m)? {
        out.push(kernel(&m.sub(&id.scale(&t))?)?);
    }
    Ok(Some(out))
}

/// Looks for a splitting of a 2-dimensional algebra into two 1-dimensional ideals.
pub fn decompose_2dim<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<Decomposition<T>> {
    if l.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: l.dim() });
    }
    let f = l.field();
    let line = |v: Vec<T>| Subspace::span(f, 2, &[v]);
    let mut candidates: Vec<Subspace<T>> = match (invariant_lines(l.alpha())?, invariant_lines(l.beta())?) {
        (Some(a), Some(b)) => a.into_iter().filter(|x| b.contains(x)).collect(),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            let mut c = Vec::new();
            let sq = product_subspace(l, &whole(l), &whole(l))?;
            for s in [sq, center(l)?, center_with(l, Sidedness::TwoSided)?] {
                if s.dim() == 1 {
                    c.push(s);
                }
            }
            for v in [vec![f.one(), f.zero()], vec![f.zero(), f.one()], vec![f.one(), f.one()]] {
                c.push(line(v)?);
            }
            c
        }
    };
    let mut seen = Vec::new();
    candidates.retain(|c| {
        let fresh = !seen.contains(c);
        seen.push(c.clone());
        fresh
    });
    let ideals: Vec<Subspace<T>> =
        candidates.into_iter().filter(|c| is_ideal(l, c).unwrap_or(false)).collect();
    let mut found = None;
    'outer: for (i, a) in ideals.iter().enumerate() {
        for b in &ideals[i + 1..] {
            if a.sum(b)?.dim() == 2 {
                found = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let sq = product_subspace(l, &whole(l), &whole(l))?;
    let c = center(l)?;
    let square_plus_center = sq.dim() + c.dim() == 2 && sq.intersection(&c)?.dim() == 0;
    Ok(Decomposition { ideals: found, square_plus_center })
}

/// A proper nonzero ideal, if one exists among the bracket image, the centers, the kernel sum, the
/// factors of a 2-dimensional splitting and the coordinate lines.
pub fn proper_ideal_witness<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<Option<Subspace<T>>> {
    let n = l.dim();
    let f = l.field();
    let all = whole(l);
    let mut cands = vec![product_subspace(l, &all, &all)?, center(l)?, ker_alpha_plus_ker_beta(l)?];
    cands.push(center_with(l, Sidedness::TwoSided)?);
    if n == 2 {
        if let Ok(Decomposition { ideals: Some((a, b)), .. }) = decompose_2dim(l) {
            cands.push(a);
            cands.push(b);
        }
    }
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        cands.push(Subspace::span(f, n, &[e])?);
    }
    for c in cands {
        if c.dim() > 0 && c.dim() < n && is_ideal(l, &c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
