//! TOML datum files.
//!
//! ```toml
//! format = "rootsigma-datum"
//! version = 1
//! name = "doubled_a1"
//! dim = 2
//! gram = [["1", "0"], ["0", "1"]]
//! sigma = [["0", "1"], ["1", "0"]]
//! roots = [["-1", "0"], ["0", "-1"], ["0", "1"], ["1", "0"]]
//! mult = [1, 1, 1, 1]
//! st_trivial = []
//! whh_generators = [[["0", "-1"], ["-1", "0"]]]
//! ```
//!
//! Rationals are strings `"p/q"` or `"p"`. Matrices are lists of rows.
//! `st_trivial` holds indices into `roots`; `whh_generators` are matrices
//! on all of `a` (identity on `a_h`).

use std::path::{Path, PathBuf};

use num_traits::Zero;
use rootsigma_core::linalg::{QMatrix, QVec, Rat};
use rootsigma_core::root_datum::{fixtures, RawDatum};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "rootsigma-datum";
pub const VERSION: u32 = 1;
pub const FIXTURE_DIR_VAR: &str = "ROOTSIGMA_FIXTURE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed datum file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unsupported format {format:?} version {version}")]
    Version { format: String, version: u32 },
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("{0}")]
    Shape(String),
    #[error("no datum file or fixture named {0:?}")]
    NotFound(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFile {
    format: String,
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dim: usize,
    gram: Vec<Vec<String>>,
    sigma: Vec<Vec<String>>,
    roots: Vec<Vec<String>>,
    mult: Vec<u32>,
    #[serde(default)]
    st_trivial: Vec<usize>,
    #[serde(default)]
    whh_generators: Vec<Vec<Vec<String>>>,
}

/// Parses `"p/q"` or `"p"` with optional surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rat, FileError> {
    let t = s.trim();
    let bad = || FileError::Rational(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// A comma- or whitespace-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<QVec, FileError> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).map(parse_rational).collect()
}

fn vec_of(v: &[String]) -> Result<QVec, FileError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn matrix_of(rows: &[Vec<String>], n: usize, what: &str) -> Result<QMatrix, FileError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(FileError::Shape(format!("{what} must be {n}x{n}")));
    }
    let rows: Vec<QVec> = rows.iter().map(|r| vec_of(r)).collect::<Result<_, _>>()?;
    Ok(QMatrix::from_rows(&rows, n))
}

fn show_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn show_matrix(m: &QMatrix) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| show_vec(r)).collect()
}

/// Parses a datum file; returns the raw datum and its declared name.
pub fn from_toml(text: &str) -> Result<(RawDatum, Option<String>), FileError> {
    let f: DatumFile = toml::from_str(text)?;
    if f.format != FORMAT || f.version != VERSION {
        return Err(FileError::Version { format: f.format, version: f.version });
    }
    let n = f.dim;
    let roots: Vec<QVec> = f.roots.iter().map(|r| vec_of(r)).collect::<Result<_, _>>()?;
    if roots.iter().any(|r| r.len() != n) {
        return Err(FileError::Shape(format!("every root must have {n} coordinates")));
    }
    if let Some(i) = f.st_trivial.iter().find(|&&i| i >= roots.len()) {
        return Err(FileError::Shape(format!("st_trivial index {i} is out of range")));
    }
    let st_trivial = f.st_trivial;
    let whh_generators = f.whh_generators.iter().map(|m| matrix_of(m, n, "whh generator")).collect::<Result<_, _>>()?;
    let raw = RawDatum {
        dim: n,
        gram: matrix_of(&f.gram, n, "gram")?,
        sigma: matrix_of(&f.sigma, n, "sigma")?,
        roots,
        mult: f.mult,
        st_trivial,
        whh_generators,
    };
    Ok((raw, f.name))
}

pub fn to_toml(raw: &RawDatum, name: Option<&str>) -> String {
    let f = DatumFile {
        format: FORMAT.to_string(),
        version: VERSION,
        name: name.map(str::to_string),
        dim: raw.dim,
        gram: show_matrix(&raw.gram),
        sigma: show_matrix(&raw.sigma),
        roots: raw.roots.iter().map(|r| show_vec(r)).collect(),
        mult: raw.mult.clone(),
        st_trivial: raw.st_trivial.clone(),
        whh_generators: raw.whh_generators.iter().map(show_matrix).collect(),
    };
    toml::to_string(&f).expect("datum file serializes")
}

pub fn read_file(path: &Path) -> Result<(RawDatum, String), FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.to_path_buf(), source })?;
    let (raw, name) = from_toml(&text)?;
    let name = name.unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    Ok((raw, name))
}

/// Resolves a command-line datum argument: an existing file path, then
/// `<name>.toml` in the fixture directory override, then a built-in
/// fixture.
pub fn resolve(arg: &str) -> Result<(RawDatum, String), FileError> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_file(path);
    }
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_VAR) {
        let p = Path::new(&dir).join(format!("{arg}.toml"));
        if p.is_file() {
            return read_file(&p);
        }
    }
    fixtures::by_name(arg).map(|d| (d.to_raw(), arg.to_string())).ok_or_else(|| FileError::NotFound(arg.to_string()))
}
