//! BiHom-Lie algebras given by structure constants and two twist matrices.
//!
//! Conventions: basis indices are 0-based internally and reported 1-based. A twist matrix
//! `a` acts by `α(e_j) = Σ_s a[s][j] e_s`, so column `j` holds the image of `e_j`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// Dense table of structure constants `C_{ij}^k` with `[e_i, e_j] = Σ_k C_{ij}^k e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureConstants<T: Scalar> {
    field: T::F,
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> StructureConstants<T> {
    pub fn zeros(field: &T::F, n: usize) -> Self {
        Self { field: field.clone(), n, data: vec![field.zero(); n * n * n] }
    }

    /// Builds from sparse 0-based `(i, j, k, value)` records; repeated records add up.
    pub fn from_entries(field: &T::F, n: usize, entries: &[(usize, usize, usize, T)]) -> Result<Self> {
        let mut c = Self::zeros(field, n);
        for (i, j, k, v) in entries {
            for idx in [*i, *j, *k] {
                if idx >= n {
                    return Err(Error::DimensionMismatch { expected: n, found: idx + 1 });
                }
            }
            if v.field() != *field {
                return Err(Error::FieldMismatch(field.to_string(), v.field().to_string()));
            }
            let cur = c.get(*i, *j, *k).clone();
            c.set(*i, *j, *k, cur + v);
        }
        Ok(c)
    }

    /// Structure table whose `(i, j)` bracket is the given coordinate vector.
    pub fn from_products(field: &T::F, n: usize, products: impl Fn(usize, usize) -> Result<Vec<T>>) -> Result<Self> {
        let mut c = Self::zeros(field, n);
        for i in 0..n {
            for j in 0..n {
                let v = products(i, j)?;
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                }
                for (k, x) in v.into_iter().enumerate() {
                    c.set(i, j, k, x);
                }
            }
        }
        Ok(c)
    }

    pub fn field(&self) -> &T::F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.data[(i * self.n + j) * self.n + k]
    }
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }

    /// Nonzero entries in `(i, j, k)` order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, T)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<T> {
        let start = (i * self.n + j) * self.n;
        self.data[start..start + self.n].to_vec()
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let mut out = vec![self.field.zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let s = self.get(i, j, k);
                    if !s.is_zero() {
                        *o = o.clone() + &(c.clone() * s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// First `(i, j, k)` with `C_{ij}^k + C_{ji}^k ≠ 0`.
    pub fn skew_violation(&self) -> Option<[usize; 3]> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !(self.get(i, j, k).clone() + self.get(j, i, k)).is_zero() {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// First basis triple violating the classical Jacobi identity.
    pub fn jacobi_violation(&self) -> Option<[usize; 3]> {
        let n = self.n;
        let e = |i: usize| unit(&self.field, n, i);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t1 = self.bracket(&e(i), &self.bracket_basis(j, k)).expect("dims");
                    let t2 = self.bracket(&e(j), &self.bracket_basis(k, i)).expect("dims");
                    let t3 = self.bracket(&e(k), &self.bracket_basis(i, j)).expect("dims");
                    if !vadd(&vadd(&t1, &t2), &t3).iter().all(|x| x.is_zero()) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn is_lie(&self) -> bool {
        self.skew_violation().is_none() && self.jacobi_violation().is_none()
    }

    /// True iff `m[x, y] = [m x, m y]` on all basis pairs.
    pub fn is_morphism(&self, m: &Matrix<T>) -> Result<bool> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let lhs = m.apply(&self.bracket_basis(i, j))?;
                let rhs = self.bracket(&m.column(i), &m.column(j))?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn unit<T: Scalar>(field: &T::F, n: usize, i: usize) -> Vec<T> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn vadd<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn vsub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn vscale<T: Scalar>(c: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| x.clone() * c).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// A bracket with two twist maps. Axioms are not enforced at construction; see [`check_all`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiHomLieAlgebra<T: Scalar> {
    structure: StructureConstants<T>,
    alpha: Matrix<T>,
    beta: Matrix<T>,
}

impl<T: Scalar> BiHomLieAlgebra<T> {
    pub fn new(structure: StructureConstants<T>, alpha: Matrix<T>, beta: Matrix<T>) -> Result<Self> {
        let n = structure.dim();
        for m in [&alpha, &beta] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.rows().max(m.cols()) });
            }
            if m.field() != structure.field() {
                return Err(Error::FieldMismatch(structure.field().to_string(), m.field().to_string()));
            }
            m.check_field()?;
        }
        Ok(Self { structure, alpha, beta })
    }

    /// A Lie algebra viewed with identity twists.
    pub fn untwisted(structure: StructureConstants<T>) -> Self {
        let id = Matrix::identity(structure.field(), structure.dim());
        Self { alpha: id.clone(), beta: id, structure }
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }
    pub fn field(&self) -> &T::F {
        self.structure.field()
    }
    pub fn structure(&self) -> &StructureConstants<T> {
        &self.structure
    }
    pub fn alpha(&self) -> &Matrix<T> {
        &self.alpha
    }
    pub fn beta(&self) -> &Matrix<T> {
        &self.beta
    }
    pub fn c(&self, i: usize, j: usize, k: usize) -> &T {
        self.structure.get(i, j, k)
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        self.structure.bracket(x, y)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<T> {
        self.structure.bracket_basis(i, j)
    }

    pub fn unit(&self, i: usize) -> Vec<T> {
        unit(self.field(), self.dim(), i)
    }

    /// Matrix of `α^k β^l`.
    pub fn twist_power(&self, k: u32, l: u32) -> Matrix<T> {
        self.alpha.pow(k).and_then(|a| a.matmul(&self.beta.pow(l)?)).expect("square twists")
    }

    pub fn is_regular(&self) -> bool {
        self.alpha.is_invertible() && self.beta.is_invertible()
    }

    /// Replaces entries through `f`, e.g. reduction modulo a prime.
    pub fn map_field<U: Scalar>(&self, field: &U::F, f: impl Fn(&T) -> Result<U>) -> Result<BiHomLieAlgebra<U>> {
        let n = self.dim();
        let data = self.structure.data.iter().map(&f).collect::<Result<Vec<U>>>()?;
        let structure = StructureConstants { field: field.clone(), n, data };
        BiHomLieAlgebra::new(structure, self.alpha.map_field(field, &f)?, self.beta.map_field(field, &f)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Commuting,
    Skew,
    Jacobi,
    MultiplicativeAlpha,
    MultiplicativeBeta,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Commuting => "commuting",
            Axiom::Skew => "skew",
            Axiom::Jacobi => "jacobi",
            Axiom::MultiplicativeAlpha => "multiplicative-alpha",
            Axiom::MultiplicativeBeta => "multiplicative-beta",
        })
    }
}

/// The first failing index tuple (1-based) and the nonzero residual there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<T: Scalar> {
    pub axiom: Axiom,
    pub indices: Vec<(char, usize)>,
    pub residual: T,
}

impl<T: Scalar> Violation<T> {
    fn new(axiom: Axiom, names: &str, idx: &[usize], residual: T) -> Self {
        Self { axiom, indices: names.chars().zip(idx.iter().map(|i| i + 1)).collect(), residual }
    }
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|(c, i)| format!("{c}={i}")).collect();
        write!(f, "{} ({})", self.axiom, idx.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport<T: Scalar> {
    pub commuting: bool,
    pub skew_symmetric: bool,
    pub bihom_jacobi: bool,
    pub multiplicative: bool,
    pub first_violation: Option<Violation<T>>,
}

impl<T: Scalar> AxiomReport<T> {
    pub fn is_ok(&self) -> bool {
        self.commuting && self.skew_symmetric && self.bihom_jacobi && self.multiplicative
    }
}

/// `αβ = βα`, reporting the first differing entry.
pub fn check_commuting<T: Scalar>(l: &BiHomLieAlgebra<T>) -> std::result::Result<(), Violation<T>> {
    let ab = l.alpha.matmul(&l.beta).expect("square twists");
    let ba = l.beta.matmul(&l.alpha).expect("square twists");
    let n = l.dim();
    for i in 0..n {
        for j in 0..n {
            let r = ab.get(i, j).clone() - ba.get(i, j);
            if !r.is_zero() {
                return Err(Violation::new(Axiom::Commuting, "ij", &[i, j], r));
            }
        }
    }
    Ok(())
}

/// `Σ_{p,q} (b_{pi} a_{qj} + b_{pj} a_{qi}) C_{pq}^s = 0` for all `(i, j, s)`.
pub fn check_skew_symmetry<T: Scalar>(l: &BiHomLieAlgebra<T>) -> std::result::Result<(), Violation<T>> {
    let (n, a, b) = (l.dim(), &l.alpha, &l.beta);
    let f = l.field();
    for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                let mut acc = f.zero();
                for p in 0..n {
                    for q in 0..n {
                        let c = l.c(p, q, s);
                        if c.is_zero() {
                            continue;
                        }
                        let w = b.get(p, i).clone() * a.get(q, j) + &(b.get(p, j).clone() * a.get(q, i));
                        acc = acc + &(w * c);
                    }
                }
                if !acc.is_zero() {
                    return Err(Violation::new(Axiom::Skew, "ijs", &[i, j, s], acc));
                }
            }
        }
    }
    Ok(())
}

/// The BiHom-Jacobi identity in structure-constant form: for all `(i, j, k, r)`,
/// `Σ (b²_{pi} b_{qj} a_{sk} + b²_{pj} b_{qk} a_{si} + b²_{pk} b_{qi} a_{sj}) C_{qs}^l C_{pl}^r = 0`
/// where `b²_{pi} = Σ_{s'} b_{ps'} b_{s'i}`.
pub fn check_bihom_jacobi<T: Scalar>(l: &BiHomLieAlgebra<T>) -> std::result::Result<(), Violation<T>> {
    let (n, a, b) = (l.dim(), &l.alpha, &l.beta);
    let f = l.field();
    let b2 = b.matmul(b).expect("square");
    // inner[j][k][l] = Σ_{q,s} b_{qj} a_{sk} C_{qs}^l
    let mut inner = vec![f.zero(); n * n * n];
    for q in 0..n {
        for s in 0..n {
            for t in 0..n {
                let c = l.c(q, s, t);
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let bq = b.get(q, j);
                    if bq.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        let as_ = a.get(s, k);
                        if as_.is_zero() {
                            continue;
                        }
                        let idx = (j * n + k) * n + t;
                        inner[idx] = inner[idx].clone() + &(bq.clone() * as_ * c);
                    }
                }
            }
        }
    }
    // term(i, j, k)[r] = Σ_{p,l} b²_{pi} inner[j][k][l] C_{pl}^r
    let term = |i: usize, j: usize, k: usize, r: usize| {
        let mut acc = f.zero();
        for p in 0..n {
            let w = b2.get(p, i);
            if w.is_zero() {
                continue;
            }
            for t in 0..n {
                let v = &inner[(j * n + k) * n + t];
                let c = l.c(p, t, r);
                if v.is_zero() || c.is_zero() {
                    continue;
                }
                acc = acc + &(w.clone() * v * c);
            }
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for r in 0..n {
                    let total = term(i, j, k, r) + &term(j, k, i, r) + &term(k, i, j, r);
                    if !total.is_zero() {
                        return Err(Violation::new(Axiom::Jacobi, "ijkr", &[i, j, k, r], total));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `Σ_k C_{ij}^k m_{sk} = Σ_{p,q} m_{pi} m_{qj} C_{pq}^s` for `m = α` and `m = β`.
pub fn check_multiplicative<T: Scalar>(l: &BiHomLieAlgebra<T>) -> std::result::Result<(), Violation<T>> {
    let n = l.dim();
    let f = l.field();
    for (m, axiom) in [(&l.alpha, Axiom::MultiplicativeAlpha), (&l.beta, Axiom::MultiplicativeBeta)] {
        for i in 0..n {
            for j in 0..n {
                for s in 0..n {
                    let mut lhs = f.zero();
                    for k in 0..n {
                        lhs = lhs + &(l.c(i, j, k).clone() * m.get(s, k));
                    }
                    let mut rhs = f.zero();
                    for p in 0..n {
                        for q in 0..n {
                            let c = l.c(p, q, s);
                            if !c.is_zero() {
                                rhs = rhs + &(m.get(p, i).clone() * m.get(q, j) * c);
                            }
                        }
                    }
                    let r = lhs - &rhs;
                    if !r.is_zero() {
                        return Err(Violation::new(axiom, "ijs", &[i, j, s], r));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn check_all<T: Scalar>(l: &BiHomLieAlgebra<T>) -> AxiomReport<T> {
    let results = [check_commuting(l), check_skew_symmetry(l), check_bihom_jacobi(l), check_multiplicative(l)];
    let flags: Vec<bool> = results.iter().map(|r| r.is_ok()).collect();
    let first_violation = results.into_iter().find_map(|r| r.err());
    AxiomReport {
        commuting: flags[0],
        skew_symmetric: flags[1],
        bihom_jacobi: flags[2],
        multiplicative: flags[3],
        first_violation,
    }
}

/// Axioms evaluated directly on basis elements with the bracket:
/// `[βe_i, αe_j] = -[βe_j, αe_i]`, `↺[β²e_i, [βe_j, αe_k]] = 0`, `m[e_i, e_j] = [m e_i, m e_j]`.
/// Used to cross-check the structure-constant forms.
pub fn axioms_on_basis<T: Scalar>(l: &BiHomLieAlgebra<T>) -> AxiomReport<T> {
    let n = l.dim();
    let (a, b) = (&l.alpha, &l.beta);
    let b2 = b.matmul(b).expect("square");
    let col = |m: &Matrix<T>, i: usize| m.column(i);
    let br = |x: &[T], y: &[T]| l.bracket(x, y).expect("dims");

    let commuting = a.matmul(b).unwrap() == b.matmul(a).unwrap();
    let mut skew = true;
    let mut jacobi = true;
    let mut mult = true;
    for i in 0..n {
        for j in 0..n {
            let s = vadd(&br(&col(b, i), &col(a, j)), &br(&col(b, j), &col(a, i)));
            skew &= is_zero_vec(&s);
            for m in [a, b] {
                mult &= m.apply(&l.bracket_basis(i, j)).unwrap() == br(&col(m, i), &col(m, j));
            }
            for k in 0..n {
                let t = |i: usize, j: usize, k: usize| br(&col(&b2, i), &br(&col(b, j), &col(a, k)));
                let sum = vadd(&vadd(&t(i, j, k), &t(j, k, i)), &t(k, i, j));
                jacobi &= is_zero_vec(&sum);
            }
        }
    }
    AxiomReport {
        commuting,
        skew_symmetric: skew,
        bihom_jacobi: jacobi,
        multiplicative: mult,
        first_violation: None,
    }
}

// ---------------------------------------------------------------------------
// Constructions

/// `[x, y] = [α x, β y]'` for a Lie bracket `[ , ]'` and commuting morphisms `α`, `β`.
pub fn yau_twist<T: Scalar>(lie: &StructureConstants<T>, alpha: &Matrix<T>, beta: &Matrix<T>) -> Result<BiHomLieAlgebra<T>> {
    let n = lie.dim();
    if !alpha.commutes_with(beta)? {
        return Err(Error::Precondition("twists do not commute".into()));
    }
    if !lie.is_lie() {
        return Err(Error::Precondition("input bracket is not a Lie bracket".into()));
    }
    if !lie.is_morphism(alpha)? || !lie.is_morphism(beta)? {
        return Err(Error::Precondition("twists are not morphisms of the bracket".into()));
    }
    let c = StructureConstants::from_products(lie.field(), n, |i, j| lie.bracket(&alpha.column(i), &beta.column(j)))?;
    BiHomLieAlgebra::new(c, alpha.clone(), beta.clone())
}

/// `[x, y]' = [α⁻¹ x, β⁻¹ y]` for a regular algebra.
pub fn induced_lie<T: Scalar>(l: &BiHomLieAlgebra<T>) -> Result<StructureConstants<T>> {
    let ai = l.alpha.invert().map_err(|_| Error::NotRegular("alpha is singular".into()))?;
    let bi = l.beta.invert().map_err(|_| Error::NotRegular("beta is singular".into()))?;
    StructureConstants::from_products(l.field(), l.dim(), |i, j| l.bracket(&ai.column(i), &bi.column(j)))
}

/// Twisted Heisenberg algebra on `X_1..X_m, Y_1..Y_m, Z`: the Yau twist of `[X_i, Y_i]' = Z` by
/// `α = diag(b_i, a/b_i, a)` and `β = diag(y_i, x/y_i, x)`.
pub fn heisenberg<T: Scalar>(a: &T, x: &T, bs: &[T], ys: &[T]) -> Result<BiHomLieAlgebra<T>> {
    let m = bs.len();
    if m == 0 || ys.len() != m {
        return Err(Error::InvalidParameter("need m ≥ 1 values of b and of y".into()));
    }
    if a.is_zero() || x.is_zero() || bs.iter().chain(ys).any(|v| v.is_zero()) {
        return Err(Error::InvalidParameter("Heisenberg parameters must be nonzero".into()));
    }
    let f = a.field();
    let n = 2 * m + 1;
    let mut entries = Vec::new();
    for i in 0..m {
        entries.push((i, m + i, n - 1, f.one()));
        entries.push((m + i, i, n - 1, -f.one()));
    }
    let lie = StructureConstants::from_entries(&f, n, &entries)?;
    let mut ad = bs.to_vec();
    ad.extend(bs.iter().map(|b| a.div(b).expect("nonzero")));
    ad.push(a.clone());
    let mut bd = ys.to_vec();
    bd.extend(ys.iter().map(|y| x.div(y).expect("nonzero")));
    bd.push(x.clone());
    yau_twist(&lie, &Matrix::diag(&f, &ad), &Matrix::diag(&f, &bd))
}

/// Extends a Lie algebra by a (b,a,a)-derivation `D` on `L ⊕ K D`:
/// `[x + λD, y + μD] = [x, y]' − μ b D(x) + λ a D(y)`, `α = id ⊕ a`, `β = id ⊕ b`.
pub fn derivation_extension<T: Scalar>(lie: &StructureConstants<T>, d: &Matrix<T>, a: &T, b: &T) -> Result<BiHomLieAlgebra<T>> {
    let n = lie.dim();
    let f = lie.field().clone();
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: d.rows() });
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = vscale(b, &d.apply(&lie.bracket_basis(i, j))?);
            let r1 = lie.bracket(&d.column(i), &unit(&f, n, j))?;
            let r2 = lie.bracket(&unit(&f, n, i), &d.column(j))?;
            if lhs != vscale(a, &vadd(&r1, &r2)) {
                return Err(Error::Precondition(format!(
                    "D is not a (b,a,a)-derivation at (i={},j={})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let m = n + 1;
    let mut c = StructureConstants::zeros(&f, m);
    for (i, j, k, v) in lie.nonzero_entries() {
        c.set(i, j, k, v);
    }
    for i in 0..n {
        for s in 0..n {
            // [e_i, D] = -b D(e_i), [D, e_i] = a D(e_i)
            c.set(i, n, s, -(b.clone() * d.get(s, i)));
            c.set(n, i, s, a.clone() * d.get(s, i));
        }
    }
    let mut ad = vec![f.one(); n];
    ad.push(a.clone());
    let mut bd = vec![f.one(); n];
    bd.push(b.clone());
    BiHomLieAlgebra::new(c, Matrix::diag(&f, &ad), Matrix::diag(&f, &bd))
}

fn block_diag<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (p, q) = (a.rows(), b.rows());
    let mut m = Matrix::zeros(a.field(), p + q, p + q);
    for i in 0..p {
        for j in 0..p {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..q {
        for j in 0..q {
            m.set(p + i, p + j, b.get(i, j).clone());
        }
    }
    m
}

pub fn direct_sum<T: Scalar>(a: &BiHomLieAlgebra<T>, b: &BiHomLieAlgebra<T>) -> Result<BiHomLieAlgebra<T>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let p = a.dim();
    let mut entries = a.structure.nonzero_entries();
    entries.extend(b.structure.nonzero_entries().into_iter().map(|(i, j, k, v)| (i + p, j + p, k + p, v)));
    let c = StructureConstants::from_entries(a.field(), p + b.dim(), &entries)?;
    BiHomLieAlgebra::new(c, block_diag(&a.alpha, &b.alpha), block_diag(&a.beta, &b.beta))
}

/// The structure making `f` an isomorphism onto it: `α' = f α f⁻¹`, `β' = f β f⁻¹`,
/// `[u, v]' = f [f⁻¹ u, f⁻¹ v]`.
pub fn transport<T: Scalar>(l: &BiHomLieAlgebra<T>, f: &Matrix<T>) -> Result<BiHomLieAlgebra<T>> {
    let fi = f.invert()?;
    if f.rows() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), found: f.rows() });
    }
    let c = StructureConstants::from_products(l.field(), l.dim(), |i, j| {
        f.apply(&l.bracket(&fi.column(i), &fi.column(j))?)
    })?;
    let alpha = f.matmul(&l.alpha)?.matmul(&fi)?;
    let beta = f.matmul(&l.beta)?.matmul(&fi)?;
    BiHomLieAlgebra::new(c, alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, RationalField};

    fn q(v: i64) -> Rational {
        RationalField.from_i64(v)
    }

    fn alg(n: usize, br: &[(usize, usize, usize, i64)], a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> BiHomLieAlgebra<Rational> {
        let f = RationalField;
        let e: Vec<_> = br.iter().map(|&(i, j, k, v)| (i, j, k, q(v))).collect();
        let m = |r: Vec<Vec<i64>>| Matrix::from_rows(&f, r.into_iter().map(|x| x.into_iter().map(q).collect()).collect()).unwrap();
        BiHomLieAlgebra::new(StructureConstants::from_entries(&f, n, &e).unwrap(), m(a), m(b)).unwrap()
    }

    #[test]
    fn skew_violation_reported_at_first_index() {
        let l = alg(2, &[(0, 1, 0, 1)], vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 1]]);
        let v = check_skew_symmetry(&l).unwrap_err();
        assert_eq!(v.to_string(), "skew (i=1,j=2,s=1)");
        assert_eq!(v.residual, q(1));
        assert!(!check_all(&l).is_ok());
    }

    #[test]
    fn non_commuting_twists() {
        let l = alg(2, &[], vec![vec![1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]);
        assert!(check_commuting(&l).is_err());
    }

    #[test]
    fn multiplicativity_violation() {
        // [e2,e2] = e1, α = diag(0,1): fails at (2,2,1)
        let l = alg(2, &[(1, 1, 0, 1)], vec![vec![0, 0], vec![0, 1]], vec![vec![0, 0], vec![0, 1]]);
        let v = check_multiplicative(&l).unwrap_err();
        assert_eq!(v.to_string(), "multiplicative-alpha (i=2,j=2,s=1)");
    }

    #[test]
    fn zero_twists_are_multiplicative() {
        let l = alg(2, &[(0, 1, 0, 1), (1, 1, 1, 3)], vec![vec![0, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]);
        assert!(check_multiplicative(&l).is_ok());
    }

    #[test]
    fn sl2_twisted_by_identity_passes() {
        // e=0, f=1, h=2: [e,f]=h, [h,e]=2e, [h,f]=-2f
        let lie = StructureConstants::from_entries(
            &RationalField,
            3,
            &[
                (0, 1, 2, q(1)),
                (1, 0, 2, q(-1)),
                (2, 0, 0, q(2)),
                (0, 2, 0, q(-2)),
                (2, 1, 1, q(-2)),
                (1, 2, 1, q(2)),
            ],
        )
        .unwrap();
        let id = Matrix::identity(&RationalField, 3);
        let l = yau_twist(&lie, &id, &id).unwrap();
        assert_eq!(l.structure(), &lie);
        assert!(check_all(&l).is_ok());
    }

    #[test]
    fn heisenberg_brackets() {
        let l = heisenberg(&q(4), &q(9), &[q(2)], &[q(3)]).unwrap();
        assert_eq!(l.bracket_basis(0, 1), vec![q(0), q(0), q(6)]);
        assert_eq!(l.bracket_basis(1, 0), vec![q(0), q(0), q(-6)]);
        assert!(check_all(&l).is_ok());
        assert!(l.is_regular());
        let lie = induced_lie(&l).unwrap();
        assert_eq!(lie.bracket_basis(0, 1), vec![q(0), q(0), q(1)]);
        assert!(heisenberg(&q(0), &q(9), &[q(2)], &[q(3)]).is_err());
    }

    #[test]
    fn transport_by_identity_is_noop() {
        let l = heisenberg(&q(4), &q(9), &[q(2)], &[q(3)]).unwrap();
        assert_eq!(transport(&l, &Matrix::identity(&RationalField, 3)).unwrap(), l);
    }
}
