#![allow(dead_code, clippy::type_complexity)]

use bihom::algebra::{transport, BiHomLieAlgebra, StructureConstants};
use bihom::catalog::catalog;
use bihom::derivation::GenDerivationParams;
use bihom::expr::Env;
use bihom::linalg::Matrix;
use bihom::scalar::parse_rational;
use bihom::{Field, Fp, FpAlgebra, FpMatrix, PrimeField, QAlgebra, QMatrix, Rational, RationalField, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

pub fn qi(v: i64) -> Rational {
    RationalField.from_i64(v)
}

pub fn qv(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

pub fn qm(rows: &[&[&str]]) -> QMatrix {
    Matrix::from_rows(&RationalField, rows.iter().map(|r| qv(r)).collect()).unwrap()
}

pub fn env(pairs: &[(&str, &str)]) -> Env {
    pairs.iter().map(|(k, v)| (k.to_string(), q(v))).collect()
}

pub fn params(t: (i64, i64, i64), k: u32, l: u32) -> GenDerivationParams<Rational> {
    GenDerivationParams::ints(&RationalField, t, k, l)
}

pub fn entry(id: &str, e: &[(&str, &str)]) -> QAlgebra {
    catalog().entry(id).unwrap().build(&env(e)).unwrap()
}

/// Every shipped sample of every family.
pub fn instances() -> Vec<(String, Env, QAlgebra)> {
    let mut out = Vec::new();
    for e in &catalog().families {
        for s in e.samples().unwrap() {
            let l = e.build(&s).unwrap();
            out.push((e.id.clone(), s, l));
        }
    }
    out
}

pub fn algebra(n: usize, br: &[(usize, usize, usize, &str)], a: &[&[&str]], b: &[&[&str]]) -> QAlgebra {
    let e: Vec<_> = br.iter().map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, q(v))).collect();
    BiHomLieAlgebra::new(StructureConstants::from_entries(&RationalField, n, &e).unwrap(), qm(a), qm(b)).unwrap()
}

/// All n×n matrices over F_p.
pub fn all_matrices(f: &PrimeField, n: usize) -> Vec<FpMatrix> {
    let p = f.modulus();
    let total = p.pow((n * n) as u32);
    (0..total)
        .map(|mut c| {
            let mut data = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                data.push(f.elem(c % p));
                c /= p;
            }
            Matrix::from_vec(f, n, n, data).unwrap()
        })
        .collect()
}

/// Counts members of a derivation space by direct evaluation of the defining identity.
pub fn count_members(l: &FpAlgebra, p: &GenDerivationParams<Fp>, mats: &[FpMatrix]) -> usize {
    let n = l.dim();
    let m = l.twist_power(p.k, p.l);
    let br = |x: &[Fp], y: &[Fp]| l.bracket(x, y).unwrap();
    mats.iter()
        .filter(|d| {
            if d.matmul(l.alpha()).unwrap() != l.alpha().matmul(d).unwrap() {
                return false;
            }
            if d.matmul(l.beta()).unwrap() != l.beta().matmul(d).unwrap() {
                return false;
            }
            (0..n).all(|i| {
                (0..n).all(|j| {
                    let lhs: Vec<Fp> = d.apply(&l.bracket_basis(i, j)).unwrap().into_iter().map(|x| x * p.lambda).collect();
                    let a = br(&d.column(i), &m.column(j));
                    let b = br(&m.column(i), &d.column(j));
                    let rhs: Vec<Fp> = a.iter().zip(&b).map(|(x, y)| *x * p.mu + *y * p.gamma).collect();
                    lhs == rhs
                })
            })
        })
        .count()
}

const POOL: [&str; 9] = ["1", "-1", "2", "-2", "3", "1/2", "-1/2", "1/3", "3/2"];

pub fn rand_q<R: Rng>(rng: &mut R) -> Rational {
    q(POOL.choose(rng).unwrap())
}

pub fn rand_q_or_zero<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.2) {
        qi(0)
    } else {
        rand_q(rng)
    }
}

pub fn rand_invertible<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| if rng.gen_bool(0.4) { qi(0) } else { rand_q(rng) }).collect()).collect();
        let m = Matrix::from_rows(&RationalField, rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random small Lie bracket with two commuting morphisms, expressed in a random basis.
/// Base algebras: abelian (twists a polynomial pair), the 2-dim non-abelian algebra, Heisenberg,
/// sl2 and the 2-dim non-abelian algebra plus a line, each with diagonal torus morphisms.
pub fn random_lie_with_twists<R: Rng>(rng: &mut R) -> (StructureConstants<Rational>, QMatrix, QMatrix) {
    let f = RationalField;
    let kind = rng.gen_range(0..5);
    let (lie, a, b) = match kind {
        0 => {
            let n = rng.gen_range(2..=3);
            let lie = StructureConstants::zeros(&f, n);
            let a = Matrix::from_rows(&f, (0..n).map(|_| (0..n).map(|_| rand_q_or_zero(rng)).collect()).collect()).unwrap();
            let (c0, c1) = (rand_q_or_zero(rng), rand_q_or_zero(rng));
            let b = Matrix::scalar(&f, n, &c0).add(&a.scale(&c1)).unwrap().add(&a.matmul(&a).unwrap().scale(&rand_q_or_zero(rng))).unwrap();
            (lie, a, b)
        }
        1 => {
            let lie = StructureConstants::from_entries(&f, 2, &[(0, 1, 1, qi(1)), (1, 0, 1, qi(-1))]).unwrap();
            (lie, Matrix::diag(&f, &[qi(1), rand_q_or_zero(rng)]), Matrix::diag(&f, &[qi(1), rand_q_or_zero(rng)]))
        }
        2 => {
            let lie = StructureConstants::from_entries(&f, 3, &[(0, 1, 2, qi(1)), (1, 0, 2, qi(-1))]).unwrap();
            let d = |rng: &mut R| {
                let (p, s) = (rand_q_or_zero(rng), rand_q_or_zero(rng));
                Matrix::diag(&f, &[p.clone(), s.clone(), p * s])
            };
            (lie, d(rng), d(rng))
        }
        3 => {
            let lie = StructureConstants::from_entries(
                &f,
                3,
                &[(0, 1, 2, qi(1)), (1, 0, 2, qi(-1)), (2, 0, 0, qi(2)), (0, 2, 0, qi(-2)), (2, 1, 1, qi(-2)), (1, 2, 1, qi(2))],
            )
            .unwrap();
            let d = |rng: &mut R| {
                let t = rand_q(rng);
                Matrix::diag(&f, &[t.clone(), t.inv().unwrap(), qi(1)])
            };
            (lie, d(rng), d(rng))
        }
        _ => {
            let lie = StructureConstants::from_entries(&f, 3, &[(0, 1, 1, qi(1)), (1, 0, 1, qi(-1))]).unwrap();
            let d = |rng: &mut R| Matrix::diag(&f, &[qi(1), rand_q_or_zero(rng), rand_q_or_zero(rng)]);
            (lie, d(rng), d(rng))
        }
    };
    let n = lie.dim();
    let p = rand_invertible(rng, n);
    let moved = transport(&BiHomLieAlgebra::new(lie, a, b).unwrap(), &p).unwrap();
    (moved.structure().clone(), moved.alpha().clone(), moved.beta().clone())
}

pub fn reduce3(l: &QAlgebra) -> Option<FpAlgebra> {
    bihom::iso::reduce_mod_p(l, 3).ok()
}

pub fn is_zero_matrix<T: Scalar>(m: &Matrix<T>) -> bool {
    m.is_zero()
}

/// Closed forms of the six Heisenberg spaces for m = 1, as diagonal patterns in
/// `a, b, x, y, delta, k, l` with slots `d1, d2, d3`.
pub fn heisenberg_forms() -> Vec<(&'static str, (i64, i64, i64), [&'static str; 3])> {
    const R: &str = "d1*a^k*x^l/(b^(2*k)*y^(2*l))";
    vec![
        ("(1,0,0)", (1, 0, 0), ["d1", "d2", "0"]),
        ("(delta,1,0)", (-1, 1, 0), ["d1", R, "d1*a^k*x^l/(delta*b^k*y^l)"]),
        ("(delta,1,1)", (-1, 1, 1), ["d1", "d2", "(d2*b^(2*k)*y^(2*l) + d1*a^k*x^l)/(delta*b^k*y^l)"]),
        ("(0,1,1)", (0, 1, 1), ["d1", "-d1*a^k*x^l/(b^(2*k)*y^(2*l))", "d3"]),
        ("(1,1,-1)", (1, 1, -1), ["d1", R, "0"]),
        ("(0,1,-1)", (0, 1, -1), ["d1", R, "d3"]),
    ]
}

/// Pattern rows for a diagonal closed form.
pub fn diag_pattern(d: &[&str; 3]) -> Vec<Vec<String>> {
    (0..3).map(|i| (0..3).map(|j| if i == j { d[i].to_string() } else { "0".into() }).collect()).collect()
}

/// `(computed, expected)` dimensions and whether the spans agree, for one closed form. A `-1` in
/// the triple stands for `delta`.
pub fn heisenberg_compare(
    vals: (&str, &str, &str, &str),
    delta: i64,
    triple: (i64, i64, i64),
    form: &[&str; 3],
    k: u32,
    l: u32,
) -> (usize, usize, bool) {
    use bihom::catalog::pattern_space;
    use bihom::derivation::gen_der_space;
    let (a, b, x, y) = vals;
    let h = bihom::algebra::heisenberg(&q(a), &q(x), &[q(b)], &[q(y)]).unwrap();
    let lam = if triple.0 == -1 { delta } else { triple.0 };
    let computed = gen_der_space(&h, &params((lam, triple.1, triple.2), k, l)).unwrap().space;
    let e = env(&[("a", a), ("b", b), ("x", x), ("y", y), ("delta", &delta.to_string())]);
    let expected = pattern_space(&diag_pattern(form), &e, k, l).unwrap();
    (computed.dim(), expected.dim(), computed == expected)
}
