//! Isomorphism witnesses, invariant fingerprints and exhaustive search over small prime fields.

use std::fmt;

use crate::algebra::BiHomLieAlgebra;
use crate::derivation::{gen_der_space, GenDerivationParams};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, Matrix};
use crate::scalar::{Field, Fp, PrimeField, Rational, Scalar};
use crate::structure::{center, derived_series, lower_central_series, product_subspace, whole};

/// True iff `f` is invertible, intertwines both twists and satisfies
/// `Σ_k C_{ij}^k f_{sk} = Σ_{p,q} f_{pi} f_{qj} C'_{pq}^s` for all `(i, j, s)`.
pub fn verify_isomorphism<T: Scalar>(l: &BiHomLieAlgebra<T>, l2: &BiHomLieAlgebra<T>, f: &Matrix<T>) -> Result<bool> {
    let n = l.dim();
    if l2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l2.dim() });
    }
    if f.rows() != n || f.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.rows() });
    }
    if !f.is_invertible() {
        return Ok(false);
    }
    if l2.alpha().matmul(f)? != f.matmul(l.alpha())? || l2.beta().matmul(f)? != f.matmul(l.beta())? {
        return Ok(false);
    }
    let field = l.field();
    for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                let mut lhs = field.zero();
                for k in 0..n {
                    lhs = lhs + &(l.c(i, j, k).clone() * f.get(s, k));
                }
                let mut rhs = field.zero();
                for p in 0..n {
                    let fp = f.get(p, i);
                    if fp.is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        let c = l2.c(p, q, s);
                        if !c.is_zero() {
                            rhs = rhs + &(fp.clone() * f.get(q, j) * c);
                        }
                    }
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Canonical triples used for fingerprints and derivation-dimension surveys.
pub const CANONICAL_TRIPLES: [(i64, i64, i64); 7] =
    [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1), (1, 1, -1), (0, 1, -1)];

/// `((λ, μ, γ), k, l, dim)`.
pub type DerDim = ((i64, i64, i64), u32, u32, usize);

/// Basis-independent invariants. Differences certify non-isomorphism; equality is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint<T: Scalar> {
    pub dim: usize,
    pub rank_alpha: usize,
    pub rank_beta: usize,
    pub dim_bracket_image: usize,
    pub dim_center: usize,
    pub lower_central_dims: Vec<usize>,
    pub derived_dims: Vec<usize>,
    /// `((λ, μ, γ), k, l)` and the dimension of that space.
    pub der_dims: Vec<DerDim>,
    pub char_poly_alpha: Vec<T>,
    pub char_poly_beta: Vec<T>,
}

pub fn fingerprint<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<Fingerprint<T>> {
    let f = l.field();
    let mut der_dims = Vec::new();
    for &t in &CANONICAL_TRIPLES {
        for k in 0..=1 {
            for le in 0..=1 {
                let d = gen_der_space(l, &GenDerivationParams::ints(f, t, k, le))?.dim();
                der_dims.push((t, k, le, d));
            }
        }
    }
    Ok(Fingerprint {
        dim: l.dim(),
        rank_alpha: l.alpha().rank()?,
        rank_beta: l.beta().rank()?,
        dim_bracket_image: product_subspace(l, &whole(l), &whole(l))?.dim(),
        dim_center: center(l)?.dim(),
        lower_central_dims: lower_central_series(l)?.dims,
        derived_dims: derived_series(l)?.dims,
        der_dims,
        char_poly_alpha: char_poly(l.alpha())?,
        char_poly_beta: char_poly(l.beta())?,
    })
}

impl<T: Scalar> Fingerprint<T> {
    /// Names of the components that differ.
    pub fn differences(&self, o: &Self) -> Vec<&'static str> {
        let mut d = Vec::new();
        let mut chk = |c: bool, name| {
            if c {
                d.push(name)
            }
        };
        chk(self.dim != o.dim, "dim");
        chk(self.rank_alpha != o.rank_alpha, "rank_alpha");
        chk(self.rank_beta != o.rank_beta, "rank_beta");
        chk(self.dim_bracket_image != o.dim_bracket_image, "dim_bracket_image");
        chk(self.dim_center != o.dim_center, "dim_center");
        chk(self.lower_central_dims != o.lower_central_dims, "lower_central_dims");
        chk(self.derived_dims != o.derived_dims, "derived_dims");
        chk(self.der_dims != o.der_dims, "der_dims");
        chk(self.char_poly_alpha != o.char_poly_alpha, "char_poly_alpha");
        chk(self.char_poly_beta != o.char_poly_beta, "char_poly_beta");
        d
    }
}

impl<T: Scalar> fmt::Display for Fingerprint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        writeln!(f, "dim: {}", self.dim)?;
        writeln!(f, "rank alpha: {}", self.rank_alpha)?;
        writeln!(f, "rank beta: {}", self.rank_beta)?;
        writeln!(f, "dim [L,L]: {}", self.dim_bracket_image)?;
        writeln!(f, "dim center: {}", self.dim_center)?;
        writeln!(f, "lower central dims: {:?}", self.lower_central_dims)?;
        writeln!(f, "derived dims: {:?}", self.derived_dims)?;
        writeln!(f, "char poly alpha: [{}]", list(&self.char_poly_alpha))?;
        writeln!(f, "char poly beta: [{}]", list(&self.char_poly_beta))?;
        for ((a, b, c), k, l, d) in &self.der_dims {
            writeln!(f, "der ({a},{b},{c}) k={k} l={l}: {d}")?;
        }
        Ok(())
    }
}

/// Reduces rational data modulo `p`.
pub fn reduce_mod_p(l: &BiHomLieAlgebra<Rational>, p: u64) -> Result<BiHomLieAlgebra<Fp>> {
    let field = PrimeField::new(p)?;
    l.map_field(&field, |x| field.reduce(x)).map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!(
            "{msg}; smallest admissible prime is {}",
            smallest_admissible_prime(&[l])
        )),
        e => e,
    })
}

/// Smallest prime dividing none of the denominators in the given algebras.
pub fn smallest_admissible_prime(algs: &[&BiHomLieAlgebra<Rational>]) -> u64 {
    let mut dens = Vec::new();
    for l in algs {
        for (_, _, _, v) in l.structure().nonzero_entries() {
            dens.push(v.denom().clone());
        }
        for m in [l.alpha(), l.beta()] {
            dens.extend(m.entries().iter().map(|v| v.denom().clone()));
        }
    }
    (2u64..)
        .filter(|&p| crate::scalar::is_prime(p))
        .find(|&p| dens.iter().all(|d| (d % p) != num_bigint::BigInt::from(0)))
        .expect("some prime works")
}

/// Scans all invertible matrices over `F_p` in lexicographic order of their row-major entries and
/// returns the first isomorphism witness. Dimension is limited to 3.
pub fn brute_force_iso(l: &BiHomLieAlgebra<Fp>, l2: &BiHomLieAlgebra<Fp>) -> Result<Option<Matrix<Fp>>> {
    let n = l.dim();
    if l2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l2.dim() });
    }
    if l.field() != l2.field() {
        return Err(Error::FieldMismatch(l.field().to_string(), l2.field().to_string()));
    }
    if n > 3 {
        return Err(Error::InvalidParameter(format!("exhaustive search limited to n ≤ 3, got {n}")));
    }
    let field = l.field();
    let p = field.modulus();
    let total = p.pow((n * n) as u32);
    for code in 0..total {
        let mut data = vec![field.zero(); n * n];
        let mut c = code;
        for idx in (0..n * n).rev() {
            data[idx] = field.elem(c % p);
            c /= p;
        }
        let f = Matrix::from_vec(field, n, n, data)?;
        if verify_isomorphism(l, l2, &f)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
