//! Command-line surface. Exit codes: 0 success, 1 mathematical negative, 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_all, heisenberg, BiHomLieAlgebra};
use crate::catalog::{catalog, format_env, parse_assignment, verify_entry_with, Outcome};
use crate::derivation::{gen_der_space, normalize_params, GenDerivationParams, Sidedness};
use crate::error::{Error, Result};
use crate::format::{AlgebraFile, AnyAlgebra, Metadata};
use crate::iso::{brute_force_iso, fingerprint, reduce_mod_p, verify_isomorphism};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, Field, Fp, Scalar};
use crate::structure::{
    center_with, decompose_2dim, derived_series, is_characteristically_nilpotent, is_ideal, ker_alpha_plus_ker_beta,
    lower_central_series, product_subspace, small_centroid_verdict, whole,
};

pub const SEED_ENV: &str = "BIHOM_SAMPLE_SEED";
const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "bihom", about = "Exact computations for BiHom-Lie algebras given by structure constants")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms; exit 1 on the first violation.
    Check { path: PathBuf },
    /// Basis of a generalized derivation space.
    Der(DerArgs),
    /// Center, series, ideals, characteristic nilpotency and small-centroid verdicts.
    Structure {
        path: PathBuf,
        /// Use two-sided centers and central derivations.
        #[arg(long)]
        two_sided: bool,
    },
    /// Replay the expected tables of the two-dimensional catalog.
    Catalog(CatalogArgs),
    /// Print basis-independent invariants.
    Fingerprint { path: PathBuf },
    /// Compare two algebras.
    Iso(IsoArgs),
    /// Write an algebra file for a catalog instance or a twisted Heisenberg algebra.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct DerArgs {
    pub path: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Replace the triple by its canonical representative first.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Entry id (`L1_10`) or name (`L_1^10`); all entries when omitted.
    #[arg(long)]
    pub entry: Option<String>,
    /// Parameter assignment `name=value,...`; the shipped samples when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub kmax: u32,
    #[arg(long, default_value_t = 2)]
    pub lmax: u32,
    /// Additionally replay N random admissible assignments per entry (seeded by BIHOM_SAMPLE_SEED).
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IsoArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// JSON file holding the candidate matrix as rows of value strings.
    #[arg(long, conflicts_with = "brute")]
    pub witness: Option<PathBuf>,
    /// Search all of GL_n(F_p).
    #[arg(long)]
    pub brute: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, conflicts_with = "heisenberg")]
    pub entry: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// `a=..,x=..,b=b1:b2:..,y=y1:y2:..`
    #[arg(long, allow_hyphen_values = true)]
    pub heisenberg: Option<String>,
}

struct Out<'a> {
    w: &'a mut dyn Write,
    fmt: OutputFormat,
}

impl Out<'_> {
    /// One fact: printed as `kind<TAB>keys<TAB>value` in records mode, `human` otherwise.
    fn fact(&mut self, kind: &str, keys: &[(&str, String)], value: impl ToString, human: impl AsRef<str>) {
        let line = match self.fmt {
            OutputFormat::Records => {
                let k: Vec<String> = keys.iter().map(|(a, b)| format!("{a}={b}")).collect();
                format!("{kind}\t{}\t{}", k.join(";"), value.to_string())
            }
            OutputFormat::Human => human.as_ref().to_string(),
        };
        let _ = writeln!(self.w, "{line}");
    }

    fn human(&mut self, text: impl AsRef<str>) {
        if self.fmt == OutputFormat::Human {
            let _ = writeln!(self.w, "{}", text.as_ref());
        }
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let mut out = Out { w: stdout, fmt: cli.output };
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut Out) -> Result<i32> {
    match cmd {
        Command::Check { path } => match AlgebraFile::read(&path)?.algebra {
            AnyAlgebra::Rational(l) => Ok(cmd_check(&l, out)),
            AnyAlgebra::Prime(l) => Ok(cmd_check(&l, out)),
        },
        Command::Der(a) => match AlgebraFile::read(&a.path)?.algebra {
            AnyAlgebra::Rational(l) => cmd_der(&l, &a, out),
            AnyAlgebra::Prime(l) => cmd_der(&l, &a, out),
        },
        Command::Structure { path, two_sided } => {
            let side = if two_sided { Sidedness::TwoSided } else { Sidedness::OneSided };
            match AlgebraFile::read(&path)?.algebra {
                AnyAlgebra::Rational(l) => cmd_structure(&l, side, out),
                AnyAlgebra::Prime(l) => cmd_structure(&l, side, out),
            }
        }
        Command::Catalog(a) => cmd_catalog(&a, out),
        Command::Fingerprint { path } => match AlgebraFile::read(&path)?.algebra {
            AnyAlgebra::Rational(l) => cmd_fingerprint(&l, out),
            AnyAlgebra::Prime(l) => cmd_fingerprint(&l, out),
        },
        Command::Iso(a) => cmd_iso(&a, out),
        Command::Export(a) => cmd_export(&a, out),
    }
}

fn cmd_check<T: Scalar>(l: &BiHomLieAlgebra<T>, out: &mut Out) -> i32 {
    let r = check_all(l);
    for (name, ok) in [
        ("commuting", r.commuting),
        ("skew", r.skew_symmetric),
        ("jacobi", r.bihom_jacobi),
        ("multiplicative", r.multiplicative),
    ] {
        out.fact("axiom", &[("name", name.into())], ok, format!("{name}: {}", if ok { "pass" } else { "FAIL" }));
    }
    out.fact("regular", &[], l.is_regular(), format!("regular: {}", yn(l.is_regular())));
    if let Some(v) = &r.first_violation {
        out.fact(
            "violation",
            &[("axiom", v.axiom.to_string())],
            format!("{v}"),
            format!("first violation: {v}, residual {}", v.residual),
        );
        1
    } else {
        0
    }
}

fn print_space<T: Scalar>(out: &mut Out, label: &str, basis: &[Matrix<T>]) {
    for (i, m) in basis.iter().enumerate() {
        out.fact("basis", &[("space", label.into()), ("index", (i + 1).to_string())], m, format!("  {m}"));
    }
}

fn cmd_der<T: Scalar>(l: &BiHomLieAlgebra<T>, a: &DerArgs, out: &mut Out) -> Result<i32> {
    let f = l.field();
    let mut triple = (f.parse(&a.lambda)?, f.parse(&a.mu)?, f.parse(&a.gamma)?);
    if a.normalize {
        let (t, case) = normalize_params(&triple.0, &triple.1, &triple.2);
        if !l.is_regular() {
            out.human("warning: twists are not invertible; the normalized space may differ");
        }
        out.fact(
            "normalized",
            &[("case", case.to_string())],
            format!("({},{},{})", t.0, t.1, t.2),
            format!("normalized: ({},{},{}) case {case}", t.0, t.1, t.2),
        );
        triple = t;
    }
    let p = GenDerivationParams::new(triple.0, triple.1, triple.2, a.k, a.l);
    let s = gen_der_space(l, &p)?;
    let keys = [("params", p.to_string())];
    out.fact("dimension", &keys, s.dim(), format!("Der {p}: dim {}", s.dim()));
    print_space(out, "der", &s.basis());
    Ok(0)
}

fn cmd_structure<T: Scalar>(l: &BiHomLieAlgebra<T>, side: Sidedness, out: &mut Out) -> Result<i32> {
    let all = whole(l);
    let sq = product_subspace(l, &all, &all)?;
    let c = center_with(l, side)?;
    out.fact("subspace", &[("name", "bracket_image".into())], &sq, format!("[L,L] = {sq} (dim {})", sq.dim()));
    out.fact("subspace", &[("name", "center".into())], &c, format!("center = {c} (dim {})", c.dim()));
    let ci = is_ideal(l, &c)?;
    out.fact("ideal", &[("name", "center".into())], ci, format!("center is an ideal: {}", yn(ci)));
    let kb = ker_alpha_plus_ker_beta(l)?;
    let ki = is_ideal(l, &kb)?;
    out.fact("subspace", &[("name", "ker_alpha_plus_ker_beta".into())], &kb, format!("ker alpha + ker beta = {kb}"));
    out.fact("ideal", &[("name", "ker_alpha_plus_ker_beta".into())], ki, format!("ker alpha + ker beta is an ideal: {}", yn(ki)));
    let lc = lower_central_series(l)?;
    let ds = derived_series(l)?;
    out.fact("series", &[("kind", "lower_central".into())], format!("{:?}", lc.dims), format!("lower central series: {lc}"));
    out.fact("series", &[("kind", "derived".into())], format!("{:?}", ds.dims), format!("derived series: {ds}"));
    out.fact("nilpotent", &[], lc.terminated_at_zero, format!("nilpotent: {}", yn(lc.terminated_at_zero)));
    out.fact("solvable", &[], ds.terminated_at_zero, format!("solvable: {}", yn(ds.terminated_at_zero)));
    match is_characteristically_nilpotent(l) {
        Ok(cn) => out.fact("cn", &[], cn, format!("characteristically nilpotent: {}", yn(cn))),
        Err(e) => out.fact("cn", &[], "error", format!("characteristically nilpotent: undetermined ({e})")),
    }
    let sv = small_centroid_verdict(l, side)?;
    let how = if sv.delegated { " (via factors)" } else { "" };
    out.fact("small_centroid", &[("delegated", sv.delegated.to_string())], sv.small, format!("small centroid: {}{how}", yn(sv.small)));
    if l.dim() == 2 {
        match decompose_2dim(l) {
            Ok(d) => {
                let text = match &d.ideals {
                    Some((a, b)) => format!("{a} + {b}"),
                    None => "none".into(),
                };
                out.fact("decomposition", &[], &text, format!("decomposition: {text}"));
                out.fact(
                    "square_plus_center",
                    &[],
                    d.square_plus_center,
                    format!("L = [L,L] + C(L) direct: {}", yn(d.square_plus_center)),
                );
            }
            Err(e) => out.fact("decomposition", &[], "error", format!("decomposition: undetermined ({e})")),
        }
    }
    Ok(0)
}

fn sample_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn cmd_catalog(a: &CatalogArgs, out: &mut Out) -> Result<i32> {
    let cat = catalog();
    let entries: Vec<_> = match &a.entry {
        Some(id) => vec![cat.entry(id)?],
        None => cat.families.iter().collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed());
    let (mut matched, mut mismatched, mut uncovered) = (0, 0, 0);
    for e in entries {
        let mut assignments = match &a.params {
            Some(p) => vec![parse_assignment(p)?],
            None => e.samples()?,
        };
        for _ in 0..a.random.unwrap_or(0) {
            assignments.push(e.random_assignment(&mut rng)?);
        }
        for env in &assignments {
            e.build(env)?;
            for k in 0..=a.kmax {
                for l in 0..=a.lmax {
                    let v = verify_entry_with(e, env, k, l)?;
                    match v.outcome {
                        Outcome::Match => matched += 1,
                        Outcome::Mismatch => mismatched += 1,
                        Outcome::Uncovered => uncovered += 1,
                    }
                    let keys = [
                        ("entry", e.id.clone()),
                        ("params", format_env(env)),
                        ("k", k.to_string()),
                        ("l", l.to_string()),
                    ];
                    out.fact("verdict", &keys, v.outcome, v.to_string());
                }
            }
        }
    }
    out.fact(
        "summary",
        &[],
        format!("match={matched};mismatch={mismatched};uncovered={uncovered}"),
        format!("{matched} match, {mismatched} mismatch, {uncovered} uncovered"),
    );
    Ok(if mismatched == 0 { 0 } else { 1 })
}

fn cmd_fingerprint<T: Scalar>(l: &BiHomLieAlgebra<T>, out: &mut Out) -> Result<i32> {
    let fp = fingerprint(l)?;
    match out.fmt {
        OutputFormat::Human => {
            let _ = write!(out.w, "{fp}");
        }
        OutputFormat::Records => {
            for line in fp.to_string().lines() {
                let (k, v) = line.split_once(": ").unwrap_or((line, ""));
                let _ = writeln!(out.w, "fingerprint\tname={k}\t{v}");
            }
        }
    }
    Ok(0)
}

fn read_witness<T: Scalar>(path: &PathBuf, field: &T::F) -> Result<Matrix<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => field.parse(s),
                    serde_json::Value::Number(n) => field.parse(&n.to_string()),
                    _ => Err(Error::Parse(format!("{}: witness entries must be strings or integers", path.display()))),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, rows)
}

fn witness_verdict<T: Scalar>(a: &BiHomLieAlgebra<T>, b: &BiHomLieAlgebra<T>, path: &PathBuf, out: &mut Out) -> Result<i32> {
    let f = read_witness::<T>(path, a.field())?;
    let ok = verify_isomorphism(a, b, &f)?;
    let text = if ok { "isomorphic (witness verified)" } else { "witness rejected" };
    out.fact("iso", &[("method", "witness".into())], ok, text);
    Ok(if ok { 0 } else { 1 })
}

fn fingerprint_verdict<T: Scalar>(a: &BiHomLieAlgebra<T>, b: &BiHomLieAlgebra<T>, out: &mut Out) -> Result<i32> {
    let d = fingerprint(a)?.differences(&fingerprint(b)?);
    if d.is_empty() {
        out.fact("iso", &[("method", "fingerprint".into())], "inconclusive", "inconclusive (fingerprints agree)");
        Ok(0)
    } else {
        let list = d.join(",");
        out.fact("iso", &[("method", "fingerprint".into())], "different", format!("not isomorphic (fingerprints differ: {list})"));
        Ok(1)
    }
}

fn to_prime(alg: AnyAlgebra, p: u64) -> Result<BiHomLieAlgebra<Fp>> {
    match alg {
        AnyAlgebra::Rational(l) => reduce_mod_p(&l, p),
        AnyAlgebra::Prime(l) if l.field().modulus() == p => Ok(l),
        AnyAlgebra::Prime(l) => Err(Error::FieldMismatch(l.field().to_string(), format!("F_{p}"))),
    }
}

fn cmd_iso(a: &IsoArgs, out: &mut Out) -> Result<i32> {
    let fa = AlgebraFile::read(&a.a)?.algebra;
    let fb = AlgebraFile::read(&a.b)?.algebra;
    if let Some(p) = a.brute {
        let (la, lb) = (to_prime(fa, p)?, to_prime(fb, p)?);
        return Ok(match brute_force_iso(&la, &lb)? {
            Some(w) => {
                out.fact("iso", &[("method", "brute".into()), ("p", p.to_string())], &w, format!("witness over F_{p}: {w}"));
                0
            }
            None => {
                out.fact("iso", &[("method", "brute".into()), ("p", p.to_string())], "none", format!("no witness over F_{p}"));
                1
            }
        });
    }
    match (fa, fb) {
        (AnyAlgebra::Rational(x), AnyAlgebra::Rational(y)) => match &a.witness {
            Some(w) => witness_verdict(&x, &y, w, out),
            None => fingerprint_verdict(&x, &y, out),
        },
        (AnyAlgebra::Prime(x), AnyAlgebra::Prime(y)) => {
            if x.field() != y.field() {
                return Err(Error::FieldMismatch(x.field().to_string(), y.field().to_string()));
            }
            match &a.witness {
                Some(w) => witness_verdict(&x, &y, w, out),
                None => fingerprint_verdict(&x, &y, out),
            }
        }
        _ => Err(Error::FieldMismatch("Q".into(), "F_p".into())),
    }
}

fn cmd_export(a: &ExportArgs, out: &mut Out) -> Result<i32> {
    let file = if let Some(h) = &a.heisenberg {
        let mut vals = std::collections::BTreeMap::new();
        for part in h.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got '{part}'")))?;
            let list = v.split(':').map(parse_rational).collect::<Result<Vec<_>>>()?;
            vals.insert(k.trim().to_string(), list);
        }
        let get = |k: &str| vals.get(k).cloned().ok_or_else(|| Error::Parse(format!("missing '{k}'")));
        let (av, xv, bv, yv) = (get("a")?, get("x")?, get("b")?, get("y")?);
        if av.len() != 1 || xv.len() != 1 {
            return Err(Error::Parse("a and x take a single value".into()));
        }
        let l = heisenberg(&av[0], &xv[0], &bv, &yv)?;
        AlgebraFile::rational(l, Some(Metadata { name: Some("twisted Heisenberg".into()), source: Some(format!("heisenberg {h}")) }))
    } else if let Some(id) = &a.entry {
        let e = catalog().entry(id)?;
        let env = match &a.params {
            Some(p) => parse_assignment(p)?,
            None => e.samples()?.into_iter().next().unwrap_or_default(),
        };
        let l = e.build(&env)?;
        let src = if env.is_empty() { "catalog".to_string() } else { format!("catalog {}", format_env(&env)) };
        AlgebraFile::rational(l, Some(Metadata { name: Some(e.name.clone()), source: Some(src) }))
    } else {
        return Err(Error::Parse("export needs --entry or --heisenberg".into()));
    };
    let _ = write!(out.w, "{}", file.to_canonical_string());
    Ok(0)
}
