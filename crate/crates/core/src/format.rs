//! The versioned JSON algebra file: sparse brackets, dense twists, exact value strings.

use serde::{Deserialize, Serialize};

use crate::algebra::{BiHomLieAlgebra, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Fp, PrimeField, Rational, RationalField, Scalar};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawField {
    Name(String),
    Prime { fp: u64 },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Str(String),
    Int(i64),
}

impl RawValue {
    fn text(&self) -> String {
        match self {
            RawValue::Str(s) => s.clone(),
            RawValue::Int(i) => i.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBracket {
    i: usize,
    j: usize,
    k: usize,
    value: RawValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: u32,
    field: RawField,
    dim: usize,
    brackets: Vec<RawBracket>,
    alpha: Vec<Vec<RawValue>>,
    beta: Vec<Vec<RawValue>>,
    #[serde(default)]
    metadata: Option<Metadata>,
}

/// An algebra over whichever field the file names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAlgebra {
    Rational(BiHomLieAlgebra<Rational>),
    Prime(BiHomLieAlgebra<Fp>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebra: AnyAlgebra,
    pub metadata: Option<Metadata>,
}

fn build<F: Field>(field: &F, raw: &RawFile) -> Result<BiHomLieAlgebra<F::Elem>> {
    let n = raw.dim;
    if n == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    let mut entries = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, b) in raw.brackets.iter().enumerate() {
        let ctx = |m: String| Error::Parse(format!("brackets[{idx}]: {m}"));
        for x in [b.i, b.j, b.k] {
            if x < 1 || x > n {
                return Err(ctx(format!("index {x} outside 1..={n}")));
            }
        }
        if !seen.insert((b.i, b.j, b.k)) {
            return Err(ctx(format!("duplicate record ({}, {}, {})", b.i, b.j, b.k)));
        }
        let v = field.parse(&b.value.text()).map_err(|e| ctx(e.to_string()))?;
        entries.push((b.i - 1, b.j - 1, b.k - 1, v));
    }
    let c = StructureConstants::from_entries(field, n, &entries)?;
    let mat = |name: &str, rows: &Vec<Vec<RawValue>>| -> Result<Matrix<F::Elem>> {
        if rows.len() != n {
            return Err(Error::Parse(format!("{name}: expected {n} rows, found {}", rows.len())));
        }
        let mut out = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("{name} row {}: expected {n} values, found {}", r + 1, row.len())));
            }
            let vals = row
                .iter()
                .enumerate()
                .map(|(cidx, v)| {
                    field.parse(&v.text()).map_err(|e| Error::Parse(format!("{name}[{}][{}]: {e}", r + 1, cidx + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(vals);
        }
        Matrix::from_rows(field, out)
    };
    BiHomLieAlgebra::new(c, mat("alpha", &raw.alpha)?, mat("beta", &raw.beta)?)
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        if raw.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {}", raw.format_version)));
        }
        let algebra = match &raw.field {
            RawField::Name(s) if s == "rational" => AnyAlgebra::Rational(build(&RationalField, &raw)?),
            RawField::Name(s) => return Err(Error::Parse(format!("unknown field '{s}'"))),
            RawField::Prime { fp } => {
                let f = PrimeField::new(*fp).map_err(|e| Error::Parse(format!("field: {e}")))?;
                AnyAlgebra::Prime(build(&f, &raw)?)
            }
        };
        Ok(Self { algebra, metadata: raw.metadata })
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn rational(algebra: BiHomLieAlgebra<Rational>, metadata: Option<Metadata>) -> Self {
        Self { algebra: AnyAlgebra::Rational(algebra), metadata }
    }

    /// Canonical text: nonzero brackets in `(i, j, k)` order, one record per line.
    pub fn to_canonical_string(&self) -> String {
        match &self.algebra {
            AnyAlgebra::Rational(l) => render(l, "\"rational\"", self.metadata.as_ref()),
            AnyAlgebra::Prime(l) => render(l, &format!("{{\"fp\": {}}}", l.field().modulus()), self.metadata.as_ref()),
        }
    }
}

fn js(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn render<T: Scalar>(l: &BiHomLieAlgebra<T>, field: &str, meta: Option<&Metadata>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format_version\": {FORMAT_VERSION},\n"));
    out.push_str(&format!("  \"field\": {field},\n"));
    out.push_str(&format!("  \"dim\": {},\n", l.dim()));
    let br: Vec<String> = l
        .structure()
        .nonzero_entries()
        .into_iter()
        .map(|(i, j, k, v)| {
            format!("    {{\"i\": {}, \"j\": {}, \"k\": {}, \"value\": {}}}", i + 1, j + 1, k + 1, js(&v.to_string()))
        })
        .collect();
    if br.is_empty() {
        out.push_str("  \"brackets\": [],\n");
    } else {
        out.push_str(&format!("  \"brackets\": [\n{}\n  ],\n", br.join(",\n")));
    }
    let mat = |m: &Matrix<T>| {
        let rows: Vec<String> = m
            .to_rows()
            .iter()
            .map(|r| format!("    [{}]", r.iter().map(|x| js(&x.to_string())).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[\n{}\n  ]", rows.join(",\n"))
    };
    out.push_str(&format!("  \"alpha\": {},\n", mat(l.alpha())));
    out.push_str(&format!("  \"beta\": {}", mat(l.beta())));
    if let Some(m) = meta {
        let mut parts = Vec::new();
        if let Some(n) = &m.name {
            parts.push(format!("\"name\": {}", js(n)));
        }
        if let Some(s) = &m.source {
            parts.push(format!("\"source\": {}", js(s)));
        }
        out.push_str(&format!(",\n  \"metadata\": {{{}}}", parts.join(", ")));
    }
    out.push_str("\n}\n");
    out
}
