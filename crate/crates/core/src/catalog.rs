//! The two-dimensional families with their free parameters and expected centroid and derivation
//! tables, loaded from a versioned JSON data file, plus the harness that replays the tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{BiHomLieAlgebra, StructureConstants};
use crate::derivation::{centroid, derivations, Sidedness};
use crate::error::{Error, Result};
use crate::expr::{eval, eval_guard, symbols, Env};
use crate::linalg::{Matrix, MatrixSubspace};
use crate::scalar::{parse_rational, Rational, RationalField};
use crate::structure::{is_characteristically_nilpotent, small_centroid_verdict};

pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Slot symbols allowed in expected patterns.
const SLOTS: [&str; 6] = ["c1", "c2", "c3", "d1", "d2", "d3"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(default)]
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketExpr {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    /// Condition on `k`, `l` and the parameters; empty means always.
    pub guard: String,
    pub centroid: Vec<Vec<String>>,
    pub der: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub small: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cn: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    pub params: Vec<ParamSpec>,
    pub brackets: Vec<BracketExpr>,
    pub alpha: Vec<Vec<String>>,
    pub beta: Vec<Vec<String>>,
    pub samples: Vec<BTreeMap<String, String>>,
    /// Whether the family splits as a direct sum of two ideals.
    pub decomposable: bool,
    /// Generator of a proper ideal named for the family.
    pub ideal: Vec<String>,
    pub rows: Vec<ExpectedRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    pub format_version: u32,
    pub families: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("catalog line {} column {}: {e}", e.line(), e.column())))?;
        if c.format_version != 1 {
            return Err(Error::Parse(format!("unsupported catalog format_version {}", c.format_version)));
        }
        for e in &c.families {
            e.validate()?;
        }
        Ok(c)
    }

    /// Looks up by id (`L1_10`) or display name (`L_1^10`).
    pub fn entry(&self, key: &str) -> Result<&CatalogEntry> {
        self.families
            .iter()
            .find(|e| e.id == key || e.name == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown catalog entry '{key}'")))
    }
}

/// The shipped catalog.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::parse(CATALOG_JSON).expect("shipped catalog is valid"))
}

pub fn build(id: &str, params: &Env) -> Result<BiHomLieAlgebra<Rational>> {
    catalog().entry(id)?.build(params)
}

pub fn expected_rows(id: &str) -> Result<&'static [ExpectedRow]> {
    Ok(&catalog().entry(id)?.rows)
}

pub fn format_env(env: &Env) -> String {
    env.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Parses `name=value,name=value`.
pub fn parse_assignment(s: &str) -> Result<Env> {
    let mut env = Env::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got '{part}'")))?;
        env.insert(k.trim().to_string(), parse_rational(v)?);
    }
    Ok(env)
}

impl CatalogEntry {
    fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    fn validate(&self) -> Result<()> {
        let ctx = |m: String| Error::Parse(format!("catalog entry {}: {m}", self.id));
        let names = self.param_names();
        let check_syms = |src: &str, extra: &[&str]| -> Result<()> {
            for s in symbols(src)? {
                if !names.contains(&s.as_str()) && !extra.contains(&s.as_str()) {
                    return Err(ctx(format!("unknown symbol '{s}' in '{src}'")));
                }
            }
            Ok(())
        };
        for b in &self.brackets {
            if ![b.i, b.j, b.k].iter().all(|&x| (1..=2).contains(&x)) {
                return Err(ctx(format!("bracket index out of range in {b:?}")));
            }
            check_syms(&b.value, &[])?;
        }
        for m in [&self.alpha, &self.beta] {
            if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
                return Err(ctx("twist must be 2x2".into()));
            }
            m.iter().flatten().try_for_each(|x| check_syms(x, &[]))?;
        }
        let mut with_exp = vec!["k", "l"];
        with_exp.extend(SLOTS);
        for r in &self.rows {
            check_syms(&r.guard, &["k", "l"])?;
            for m in [&r.centroid, &r.der] {
                if m.len() != 2 || m.iter().any(|x| x.len() != 2) {
                    return Err(ctx("pattern must be 2x2".into()));
                }
                m.iter().flatten().try_for_each(|x| check_syms(x, &with_exp))?;
            }
        }
        for s in &self.samples {
            let mut keys: Vec<&str> = s.keys().map(String::as_str).collect();
            let mut want = names.clone();
            keys.sort();
            want.sort();
            if keys != want {
                return Err(ctx(format!("sample {s:?} does not assign exactly {want:?}")));
            }
        }
        if self.ideal.len() != 2 {
            return Err(ctx("ideal generator must have 2 coordinates".into()));
        }
        Ok(())
    }

    /// Checks that exactly the family's parameters are given and nonzero ones are nonzero.
    pub fn check_admissible(&self, env: &Env) -> Result<()> {
        for p in &self.params {
            let v = env
                .get(&p.name)
                .ok_or_else(|| Error::InvalidParameter(format!("{}: missing parameter '{}'", self.id, p.name)))?;
            if p.nonzero && v.is_zero() {
                return Err(Error::InvalidParameter(format!("{}: parameter '{}' must be nonzero", self.id, p.name)));
            }
        }
        for k in env.keys() {
            if !self.params.iter().any(|p| &p.name == k) {
                return Err(Error::InvalidParameter(format!("{}: unknown parameter '{k}'", self.id)));
            }
        }
        Ok(())
    }

    pub fn build(&self, env: &Env) -> Result<BiHomLieAlgebra<Rational>> {
        self.check_admissible(env)?;
        let f = RationalField;
        let mut entries = Vec::new();
        for b in &self.brackets {
            entries.push((b.i - 1, b.j - 1, b.k - 1, eval(&b.value, env)?));
        }
        let c = StructureConstants::from_entries(&f, 2, &entries)?;
        let m = |rows: &Vec<Vec<String>>| -> Result<Matrix<Rational>> {
            let r = rows.iter().map(|r| r.iter().map(|x| eval(x, env)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            Matrix::from_rows(&f, r)
        };
        BiHomLieAlgebra::new(c, m(&self.alpha)?, m(&self.beta)?)
    }

    pub fn samples(&self) -> Result<Vec<Env>> {
        self.samples
            .iter()
            .map(|s| s.iter().map(|(k, v)| Ok((k.clone(), parse_rational(v)?))).collect())
            .collect()
    }

    /// The ideal generator named for the family, as a vector.
    pub fn ideal_generator(&self) -> Result<Vec<Rational>> {
        self.ideal.iter().map(|s| parse_rational(s)).collect()
    }

    pub fn is_regular(&self) -> bool {
        self.samples().ok().and_then(|s| s.first().and_then(|e| self.build(e).ok())).is_some_and(|l| l.is_regular())
    }

    /// A random admissible assignment from a small pool of rationals.
    pub fn random_assignment<R: Rng>(&self, rng: &mut R) -> Result<Env> {
        const POOL: [&str; 12] = ["0", "1", "-1", "2", "-2", "3", "1/2", "-1/2", "1/3", "3/2", "-3", "2/3"];
        for _ in 0..100 {
            let mut env = Env::new();
            for p in &self.params {
                let pool: Vec<&str> = POOL.iter().copied().filter(|v| !(p.nonzero && *v == "0")).collect();
                env.insert(p.name.clone(), parse_rational(pool.choose(rng).expect("nonempty"))?);
            }
            if self.build(&env).is_ok() {
                return Ok(env);
            }
        }
        Err(Error::InvalidParameter(format!("{}: no admissible random assignment found", self.id)))
    }

    fn env_with_exponents(env: &Env, k: u32, l: u32) -> Env {
        let mut e = env.clone();
        e.insert("k".into(), Rational::from_integer(k.into()));
        e.insert("l".into(), Rational::from_integer(l.into()));
        e
    }

    /// Indices of the rows whose guard holds.
    pub fn matching_rows(&self, env: &Env, k: u32, l: u32) -> Result<Vec<usize>> {
        let e = Self::env_with_exponents(env, k, l);
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if eval_guard(&r.guard, &e)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// Span of a square pattern matrix linear in its slot symbols (`c1..c3`, `d1..d3`): one matrix
/// per slot set to 1. `k` and `l` are bound to the exponents.
pub fn pattern_space(pattern: &[Vec<String>], env: &Env, k: u32, l: u32) -> Result<MatrixSubspace<Rational>> {
    let f = RationalField;
    let n = pattern.len();
    if pattern.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("pattern must be square".into()));
    }
    let base = CatalogEntry::env_with_exponents(env, k, l);
    let eval_with = |assign: &[(&str, i64)]| -> Result<Matrix<Rational>> {
        let mut e = base.clone();
        for s in SLOTS {
            e.insert(s.into(), Rational::zero());
        }
        for (s, v) in assign {
            e.insert((*s).into(), Rational::from_integer((*v).into()));
        }
        let rows = pattern.iter().map(|r| r.iter().map(|x| eval(x, &e)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(&f, rows)
    };
    if !eval_with(&[])?.is_zero() {
        return Err(Error::Parse("pattern has a constant term".into()));
    }
    let mut mats = Vec::new();
    for s in SLOTS {
        let one = eval_with(&[(s, 1)])?;
        if one.scale(&Rational::from_integer(2.into())) != eval_with(&[(s, 2)])? {
            return Err(Error::Parse(format!("pattern is not linear in '{s}'")));
        }
        mats.push(one);
    }
    // Cross terms: all slots at once must give the matching combination.
    let joint: Vec<(&str, i64)> = SLOTS.iter().zip(1..).map(|(s, v)| (*s, v)).collect();
    let mut combo = Matrix::zeros(&f, n, n);
    for (m, (_, v)) in mats.iter().zip(&joint) {
        combo = combo.add(&m.scale(&Rational::from_integer((*v).into())))?;
    }
    if combo != eval_with(&joint)? {
        return Err(Error::Parse("pattern is not linear in its slots".into()));
    }
    MatrixSubspace::span(&f, n, &mats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Match,
    Mismatch,
    /// No row's guard holds at this point.
    Uncovered,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Match => "match",
            Outcome::Mismatch => "mismatch",
            Outcome::Uncovered => "uncovered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiff {
    pub row: usize,
    pub what: &'static str,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for RowDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} {}: expected {} computed {}", self.row + 1, self.what, self.expected, self.computed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryVerdict {
    pub id: String,
    pub params: Env,
    pub k: u32,
    pub l: u32,
    pub rows: Vec<usize>,
    pub outcome: Outcome,
    pub centroid: MatrixSubspace<Rational>,
    pub der: MatrixSubspace<Rational>,
    pub small: Option<bool>,
    pub cn: Option<bool>,
    pub diffs: Vec<RowDiff>,
}

impl fmt::Display for EntryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] k={} l={}: {}", self.id, format_env(&self.params), self.k, self.l, self.outcome)?;
        if self.outcome == Outcome::Match {
            let rows: Vec<String> = self.rows.iter().map(|r| (r + 1).to_string()).collect();
            write!(f, " (rows {})", rows.join(","))?;
        }
        for d in &self.diffs {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Replays every matching table row at one parameter point. Small and CN flags are compared only
/// at `(k, l) = (0, 0)`, where the tables state them.
pub fn verify_entry(id: &str, params: &Env, k: u32, l: u32) -> Result<EntryVerdict> {
    verify_entry_with(catalog().entry(id)?, params, k, l)
}

pub fn verify_entry_with(entry: &CatalogEntry, params: &Env, k: u32, l: u32) -> Result<EntryVerdict> {
    let alg = entry.build(params)?;
    let cen = centroid(&alg, k, l)?.space;
    let der = derivations(&alg, k, l)?.space;
    let rows = entry.matching_rows(params, k, l)?;
    let at_origin = k == 0 && l == 0;
    let wants_small = at_origin && rows.iter().any(|&r| entry.rows[r].small.is_some());
    let wants_cn = at_origin && rows.iter().any(|&r| entry.rows[r].cn.is_some());
    let small = if wants_small { Some(small_centroid_verdict(&alg, Sidedness::OneSided)?.small) } else { None };
    let cn = if wants_cn { Some(is_characteristically_nilpotent(&alg)?) } else { None };
    let mut diffs = Vec::new();
    for &r in &rows {
        let row = &entry.rows[r];
        let pc = pattern_space(&row.centroid, params, k, l)?;
        if pc != cen {
            diffs.push(RowDiff { row: r, what: "centroid", expected: pc.to_string(), computed: cen.to_string() });
        }
        let pd = pattern_space(&row.der, params, k, l)?;
        if pd != der {
            diffs.push(RowDiff { row: r, what: "der", expected: pd.to_string(), computed: der.to_string() });
        }
        if at_origin {
            for (what, want, got) in [("small", row.small, small), ("cn", row.cn, cn)] {
                if let (Some(w), Some(g)) = (want, got) {
                    if w != g {
                        diffs.push(RowDiff { row: r, what, expected: w.to_string(), computed: g.to_string() });
                    }
                }
            }
        }
    }
    let outcome = if rows.is_empty() {
        Outcome::Uncovered
    } else if diffs.is_empty() {
        Outcome::Match
    } else {
        Outcome::Mismatch
    };
    Ok(EntryVerdict { id: entry.id.clone(), params: params.clone(), k, l, rows, outcome, centroid: cen, der, small, cn, diffs })
}
