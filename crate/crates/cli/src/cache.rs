//! Plain-text persistence of the Kazhdan-Lusztig memo table.
//!
//! ```text
//! KLCACHE v1 A2
//! 1 2\t1 2\t0:1
//! 1 2\t1\t1:1
//! ```
//!
//! One record per nonzero coefficient `h_{x,y}` of `b_y`: the reduced word of
//! `y`, the reduced word of `x` and the Laurent polynomial in text form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use deodhar_core::hecke::HeckeElement;
use deodhar_core::{BigInt, GroupElement, Hecke, LaurentPoly};
use thiserror::Error;

pub const MAGIC: &str = "KLCACHE v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:1: missing or malformed header, expected \"KLCACHE v1 <group>\"", path.display())]
    Header { path: PathBuf },
    #[error("{}: cache is for group {found}, not {expected}", path.display())]
    DescriptorMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: cached b_{{{element}}} fails verification: {reason}", path.display())]
    Verification {
        path: PathBuf,
        element: String,
        reason: String,
    },
}

/// Serialises every memoised `b_y`, shortest `y` first.
pub fn render(alg: &Hecke) -> String {
    let sys = alg.system();
    let mut rows: Vec<(usize, String, &GroupElement)> = Vec::new();
    let table = alg.kl_table();
    for (y, _) in &table {
        rows.push((y.length(), sys.format_element(y), y));
    }
    rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let by_elem: BTreeMap<&GroupElement, &HeckeElement<BigInt>> = table.iter().map(|(y, b)| (y, b.as_ref())).collect();

    let mut out = format!("{MAGIC} {}\n", sys.label());
    for (_, yw, y) in rows {
        let mut terms: Vec<(std::cmp::Reverse<usize>, String, &LaurentPoly)> = by_elem[y]
            .iter()
            .map(|(x, c)| (std::cmp::Reverse(x.length()), sys.format_element(x), c))
            .collect();
        terms.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        for (_, xw, c) in terms {
            writeln!(out, "{yw}\t{xw}\t{c}").unwrap();
        }
    }
    out
}

pub fn save(path: &Path, alg: &Hecke) -> Result<(), CacheError> {
    fs::write(path, render(alg)).map_err(|source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a cache file for `alg`'s group. Returns the table without touching
/// the algebra.
pub fn parse(path: &Path, text: &str, alg: &Hecke) -> Result<Vec<(GroupElement, HeckeElement<BigInt>)>, CacheError> {
    let sys = alg.system();
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let found = header
        .strip_prefix(MAGIC)
        .and_then(|r| r.strip_prefix(' '))
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .ok_or_else(|| CacheError::Header { path: path.into() })?;
    if found != sys.label() {
        return Err(CacheError::DescriptorMismatch {
            path: path.into(),
            expected: sys.label().to_string(),
            found: found.to_string(),
        });
    }

    let mut table: BTreeMap<GroupElement, HeckeElement<BigInt>> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| CacheError::Parse {
            path: path.into(),
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [yw, xw, poly] = fields[..] else {
            return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        let y = sys.parse_element(yw).map_err(|e| err(e.to_string()))?;
        let x = sys.parse_element(xw).map_err(|e| err(e.to_string()))?;
        let c: LaurentPoly = poly.parse().map_err(|e: deodhar_core::Error| err(e.to_string()))?;
        if c.is_zero() {
            return Err(err("zero coefficient".into()));
        }
        let b = table.entry(y).or_insert_with(HeckeElement::zero);
        if b.get(&x).is_some() {
            return Err(err(format!("duplicate coefficient for {xw}")));
        }
        b.add_term(x, c);
    }
    Ok(table.into_iter().collect())
}

/// Checks the two defining properties of a cached `b_y`.
pub fn verify(alg: &Hecke, y: &GroupElement, b: &HeckeElement<BigInt>) -> Result<(), String> {
    if b.coeff(y) != LaurentPoly::one() {
        return Err("top coefficient is not 1".into());
    }
    for (x, c) in b.iter() {
        if x != y && !(x.length() < y.length() && c.in_v_poly()) {
            return Err(format!("coefficient at {} is {c}", alg.system().format_element(x)));
        }
    }
    if &alg.bar(b) != b {
        return Err("not bar-invariant".into());
    }
    Ok(())
}

/// Loads `path` into the memo table of `alg`. A missing file is an empty
/// cache. Returns the number of elements loaded.
pub fn load(path: &Path, alg: &Hecke, check: bool) -> Result<usize, CacheError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(source) => {
            return Err(CacheError::Io {
                path: path.into(),
                source,
            })
        }
    };
    let table = parse(path, &text, alg)?;
    if check {
        for (y, b) in &table {
            verify(alg, y, b).map_err(|reason| CacheError::Verification {
                path: path.into(),
                element: alg.system().format_element(y),
                reason,
            })?;
        }
    }
    let n = table.len();
    for (y, b) in table {
        alg.insert_kl(y, b);
    }
    Ok(n)
}
