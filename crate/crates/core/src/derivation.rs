//! Generalized (λ,μ,γ)-α^kβ^l-derivations and the spaces built from them.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::algebra::{BiHomLieAlgebra, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixSubspace, Subspace};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenDerivationParams<T: Scalar> {
    pub lambda: T,
    pub mu: T,
    pub gamma: T,
    pub k: u32,
    pub l: u32,
}

impl<T: Scalar> GenDerivationParams<T> {
    pub fn new(lambda: T, mu: T, gamma: T, k: u32, l: u32) -> Self {
        Self { lambda, mu, gamma, k, l }
    }

    /// Builds a triple from small integers.
    pub fn ints(field: &T::F, triple: (i64, i64, i64), k: u32, l: u32) -> Self {
        Self::new(field.from_i64(triple.0), field.from_i64(triple.1), field.from_i64(triple.2), k, l)
    }

    pub fn with_triple(&self, (lambda, mu, gamma): (T, T, T)) -> Self {
        Self { lambda, mu, gamma, k: self.k, l: self.l }
    }

    pub fn triple(&self) -> (T, T, T) {
        (self.lambda.clone(), self.mu.clone(), self.gamma.clone())
    }
}

impl<T: Scalar> fmt::Display for GenDerivationParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) k={} l={}", self.lambda, self.mu, self.gamma, self.k, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace<T: Scalar> {
    pub params: GenDerivationParams<T>,
    pub space: MatrixSubspace<T>,
    pub algebra_fingerprint: String,
}

impl<T: Scalar> DerivationSpace<T> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn basis(&self) -> Vec<Matrix<T>> {
        self.space.basis()
    }
}

/// Short digest of the algebra's field, structure constants and twists.
pub fn algebra_digest<T: Scalar>(l: &BiHomLieAlgebra<T>) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}|{}|", l.field(), l.dim()));
    for (i, j, k, v) in l.structure().nonzero_entries() {
        h.update(format!("{i},{j},{k},{v};"));
    }
    h.update(format!("|{}|{}", l.alpha(), l.beta()));
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Index of unknown `d_{ab}` in the vectorized system (row-major).
fn var(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}

/// Rows `dm - md = 0` for each twist `m`.
fn commutation_rows<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Vec<Vec<T>> {
    let n = l.dim();
    let f = l.field();
    let mut rows = Vec::new();
    for m in [l.alpha(), l.beta()] {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![f.zero(); n * n];
                for k in 0..n {
                    // (dm)_{ij} = Σ_k d_{ik} m_{kj};  (md)_{ij} = Σ_k m_{ik} d_{kj}
                    row[var(n, i, k)] = row[var(n, i, k)].clone() + m.get(k, j);
                    row[var(n, k, j)] = row[var(n, k, j)].clone() - m.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Rows `λ Σ_k C_{ij}^k d_{sk} − μ Σ d_{ki} m_{lj} C_{kl}^s − γ Σ d_{lj} m_{ki} C_{kl}^s = 0`.
fn derivation_rows<T: Scalar>(l: &BiHomLieAlgebra<T>, p: &GenDerivationParams<T>) -> Vec<Vec<T>> {
    let n = l.dim();
    let f = l.field();
    let m = l.twist_power(p.k, p.l);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                let mut row = vec![f.zero(); n * n];
                for k in 0..n {
                    let c = l.c(i, j, k);
                    if !c.is_zero() {
                        row[var(n, s, k)] = row[var(n, s, k)].clone() + &(p.lambda.clone() * c);
                    }
                }
                for k in 0..n {
                    for t in 0..n {
                        let c = l.c(k, t, s);
                        if c.is_zero() {
                            continue;
                        }
                        // μ d_{ki} m_{tj}
                        let w = m.get(t, j);
                        if !w.is_zero() {
                            row[var(n, k, i)] = row[var(n, k, i)].clone() - &(p.mu.clone() * w * c);
                        }
                        // γ d_{tj} m_{ki}
                        let w = m.get(k, i);
                        if !w.is_zero() {
                            row[var(n, t, j)] = row[var(n, t, j)].clone() - &(p.gamma.clone() * w * c);
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn solve<T: Scalar>(l: &BiHomLieAlgebra<T>, rows: Vec<Vec<T>>) -> Result<MatrixSubspace<T>> {
    let n = l.dim();
    let f = l.field();
    let sys = Matrix::from_rows(f, rows)?;
    MatrixSubspace::from_subspace(n, Subspace::span(f, n * n, &sys.nullspace()?)?)
}

/// Joint commutant of α and β.
pub fn omega_basis<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<MatrixSubspace<T>> {
    solve(l, commutation_rows(l))
}

pub fn gen_der_space<T: Scalar>(l: &BiHomLieAlgebra<T>, p: &GenDerivationParams<T>) -> Result<DerivationSpace<T>> {
    let mut rows = commutation_rows(l);
    rows.extend(derivation_rows(l, p));
    Ok(DerivationSpace { params: p.clone(), space: solve(l, rows)?, algebra_fingerprint: algebra_digest(l) })
}

/// Direct check of `d ∈ Ω` and `λ d[e_i,e_j] = μ[d e_i, m e_j] + γ[m e_i, d e_j]` on basis pairs.
pub fn verify_membership<T: Scalar>(l: &BiHomLieAlgebra<T>, d: &Matrix<T>, p: &GenDerivationParams<T>) -> bool {
    let n = l.dim();
    if d.rows() != n || d.cols() != n || d.field() != l.field() {
        return false;
    }
    if !d.commutes_with(l.alpha()).unwrap_or(false) || !d.commutes_with(l.beta()).unwrap_or(false) {
        return false;
    }
    let m = l.twist_power(p.k, p.l);
    for i in 0..n {
        for j in 0..n {
            let lhs: Vec<T> = d.apply(&l.bracket_basis(i, j)).unwrap().into_iter().map(|x| x * &p.lambda).collect();
            let r1 = l.bracket(&d.column(i), &m.column(j)).unwrap();
            let r2 = l.bracket(&m.column(i), &d.column(j)).unwrap();
            let rhs: Vec<T> = r1.iter().zip(&r2).map(|(a, b)| a.clone() * &p.mu + &(b.clone() * &p.gamma)).collect();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

pub fn centroid<T: Scalar>(l: &BiHomLieAlgebra<T>, k: u32, lexp: u32) -> Result<DerivationSpace<T>> {
    gen_der_space(l, &GenDerivationParams::ints(l.field(), (1, 1, 0), k, lexp))
}

pub fn quasi_centroid<T: Scalar>(l: &BiHomLieAlgebra<T>, k: u32, lexp: u32) -> Result<DerivationSpace<T>> {
    gen_der_space(l, &GenDerivationParams::ints(l.field(), (0, 1, -1), k, lexp))
}

pub fn derivations<T: Scalar>(l: &BiHomLieAlgebra<T>, k: u32, lexp: u32) -> Result<DerivationSpace<T>> {
    gen_der_space(l, &GenDerivationParams::ints(l.field(), (1, 1, 1), k, lexp))
}

/// Which bracket slots a derived notion constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sidedness {
    /// Only `[x, y] = 0` with the subject on the left, as in the source definitions.
    #[default]
    OneSided,
    /// Both slots.
    TwoSided,
}

/// `Der^{(1,0,0)} ∩ Der^{(0,1,0)}`, additionally `∩ Der^{(0,0,1)}` when two-sided.
pub fn central_derivations_with<T: Scalar>(
    l: &BiHomLieAlgebra<T>,
    k: u32,
    lexp: u32,
    side: Sidedness,
) -> Result<DerivationSpace<T>> {
    let f = l.field();
    let a = gen_der_space(l, &GenDerivationParams::ints(f, (1, 0, 0), k, lexp))?;
    let b = gen_der_space(l, &GenDerivationParams::ints(f, (0, 1, 0), k, lexp))?;
    let mut space = a.space.intersection(&b.space)?;
    if side == Sidedness::TwoSided {
        let c = gen_der_space(l, &GenDerivationParams::ints(f, (0, 0, 1), k, lexp))?;
        space = space.intersection(&c.space)?;
    }
    Ok(DerivationSpace { params: a.params, space, algebra_fingerprint: a.algebra_fingerprint })
}

pub fn central_derivations<T: Scalar>(l: &BiHomLieAlgebra<T>, k: u32, lexp: u32) -> Result<DerivationSpace<T>> {
    central_derivations_with(l, k, lexp, Sidedness::OneSided)
}

/// Case of the parameter-normalization classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalCase {
    /// `λ = μ = γ = 0`; the space is Ω.
    AllZero,
    /// Cases 1–7 in the order of the classification.
    Case(u8),
}

impl fmt::Display for NormalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalCase::AllZero => f.write_str("zero"),
            NormalCase::Case(c) => write!(f, "{c}"),
        }
    }
}

/// Canonical representative of `(λ, μ, γ)` when the twists are surjective.
pub fn normalize_params<T: Scalar>(lambda: &T, mu: &T, gamma: &T) -> ((T, T, T), NormalCase) {
    let f = lambda.field();
    let (zero, one) = (f.zero(), f.one());
    let sq_differ = mu.clone() * mu != gamma.clone() * gamma;
    if lambda.is_zero() && mu.is_zero() && gamma.is_zero() {
        return ((zero.clone(), zero.clone(), zero), NormalCase::AllZero);
    }
    if !lambda.is_zero() {
        if sq_differ {
            let s = mu.clone() + gamma;
            return ((lambda.div(&s).expect("μ+γ ≠ 0"), one, zero), NormalCase::Case(1));
        }
        if mu.is_zero() {
            return ((one, zero.clone(), zero), NormalCase::Case(4));
        }
        if *gamma == -mu.clone() && *gamma != *mu {
            return ((one.clone(), one.clone(), -one), NormalCase::Case(2));
        }
        return ((lambda.div(mu).expect("μ ≠ 0"), one.clone(), one), NormalCase::Case(3));
    }
    if sq_differ {
        return ((zero.clone(), one, zero), NormalCase::Case(5));
    }
    if *gamma == *mu {
        return ((zero, one.clone(), one), NormalCase::Case(6));
    }
    ((zero, one.clone(), -one), NormalCase::Case(7))
}

pub fn commutator<T: Scalar>(d: &Matrix<T>, d2: &Matrix<T>) -> Result<Matrix<T>> {
    d.matmul(d2)?.sub(&d2.matmul(d)?)
}

/// `½(fg + gf)`; undefined in characteristic 2.
pub fn jordan_product<T: Scalar>(f: &Matrix<T>, g: &Matrix<T>) -> Result<Matrix<T>> {
    let field = f.field();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let half = field.from_i64(2).inv().expect("char ≠ 2");
    Ok(f.matmul(g)?.add(&g.matmul(f)?)?.scale(&half))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentGrid<T: Scalar> {
    /// Grid points in `(k, l)` row-major order.
    pub points: Vec<DerivationSpace<T>>,
    /// Span of all grid points.
    pub span: MatrixSubspace<T>,
}

/// Cap used when a caller has no better bound. The grid is a finite approximation of all `k, l ∈ ℕ`.
pub const DEFAULT_EXPONENT_CAP: u32 = 3;

/// Spaces at every `(k, l)` with `k ≤ k_max`, `l ≤ l_max`; the triple is taken from `params`.
pub fn der_space_union_over_exponents<T: Scalar>(
    l: &BiHomLieAlgebra<T>,
    params: &GenDerivationParams<T>,
    k_max: u32,
    l_max: u32,
) -> Result<ExponentGrid<T>> {
    let mut points = Vec::new();
    let mut span = MatrixSubspace::span(l.field(), l.dim(), &[])?;
    for k in 0..=k_max {
        for le in 0..=l_max {
            let p = GenDerivationParams { k, l: le, ..params.clone() };
            let s = gen_der_space(l, &p)?;
            span = span.sum(&s.space)?;
            points.push(s);
        }
    }
    Ok(ExponentGrid { points, span })
}

/// `{d ∈ Ω : d(L²) = 0}`, computed from Ω and the bracket image directly.
pub fn annihilators_of_square<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<MatrixSubspace<T>> {
    let n = l.dim();
    let f = l.field();
    let mut rows = commutation_rows(l);
    let sq = bracket_image(l.structure())?;
    for v in sq.basis() {
        // (d v)_s = Σ_b d_{sb} v_b = 0
        for s in 0..n {
            let mut row = vec![f.zero(); n * n];
            for (b, x) in v.iter().enumerate() {
                row[var(n, s, b)] = x.clone();
            }
            rows.push(row);
        }
    }
    solve(l, rows)
}

/// `{d ∈ Ω : d(L) ⊆ S}` for a subspace `S`.
pub fn maps_into<T: Scalar>(l: &BiHomLieAlgebra<T>, target: &Subspace<T>) -> Result<MatrixSubspace<T>> {
    let n = l.dim();
    let f = l.field();
    let mut rows = commutation_rows(l);
    // Annihilator of S: vectors w with w·s = 0 for s in S; then w·(d e_j) = 0 for all j.
    let ann = if target.dim() == 0 {
        Matrix::<T>::identity(f, n).to_rows()
    } else {
        Matrix::from_rows(f, target.basis().to_vec())?.nullspace()?
    };
    for w in ann {
        for j in 0..n {
            let mut row = vec![f.zero(); n * n];
            for (s, x) in w.iter().enumerate() {
                row[var(n, s, j)] = x.clone();
            }
            rows.push(row);
        }
    }
    solve(l, rows)
}

/// Span of all basis brackets.
pub fn bracket_image<T: Scalar>(c: &StructureConstants<T>) -> Result<Subspace<T>> {
    let n = c.dim();
    let vecs: Vec<Vec<T>> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c.bracket_basis(i, j)).collect();
    Subspace::span(c.field(), n, &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational, RationalField};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn normalization_cases() {
        let n = |a: &str, b: &str, c: &str| normalize_params(&q(a), &q(b), &q(c));
        assert_eq!(n("2", "3", "1"), ((q("1/2"), q("1"), q("0")), NormalCase::Case(1)));
        assert_eq!(n("1", "1", "1"), ((q("1"), q("1"), q("1")), NormalCase::Case(3)));
        assert_eq!(n("0", "5", "5"), ((q("0"), q("1"), q("1")), NormalCase::Case(6)));
        assert_eq!(n("3", "2", "-2"), ((q("1"), q("1"), q("-1")), NormalCase::Case(2)));
        assert_eq!(n("3", "0", "0"), ((q("1"), q("0"), q("0")), NormalCase::Case(4)));
        assert_eq!(n("0", "2", "1"), ((q("0"), q("1"), q("0")), NormalCase::Case(5)));
        assert_eq!(n("0", "-3", "3"), ((q("0"), q("1"), q("-1")), NormalCase::Case(7)));
        assert_eq!(n("0", "0", "0").1, NormalCase::AllZero);
    }

    #[test]
    fn commutator_and_jordan() {
        let f = RationalField;
        let d = Matrix::diag(&f, &[q("1"), q("2")]);
        let e = Matrix::from_rows(&f, vec![vec![q("0"), q("1")], vec![q("0"), q("0")]]).unwrap();
        let c = commutator(&d, &e).unwrap();
        assert_eq!(c, Matrix::from_rows(&f, vec![vec![q("0"), q("-1")], vec![q("0"), q("0")]]).unwrap());
        assert!(commutator(&d, &d).unwrap().is_zero());
        assert_eq!(jordan_product(&d, &d).unwrap(), d.matmul(&d).unwrap());
        assert_eq!(jordan_product(&Matrix::identity(&f, 2), &e).unwrap(), e);
        let f2 = crate::scalar::PrimeField::new(2).unwrap();
        let i2 = Matrix::<crate::scalar::Fp>::identity(&f2, 2);
        assert_eq!(jordan_product(&i2, &i2), Err(Error::CharacteristicTwo));
    }
}
