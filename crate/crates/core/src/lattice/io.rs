//! Plain-text lattice files: a `r m` header line followed by `r` lines of
//! `m` space-separated integers, one basis vector per line.

use std::fmt::Write as _;

use super::{Basis, LatticeError};

pub fn write_basis(basis: &Basis) -> Result<String, LatticeError> {
    let rows = basis.to_integers().ok_or(LatticeError::NotIntegral)?;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", basis.rank(), basis.dim());
    for row in rows {
        let line: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    Ok(out)
}

pub fn read_basis(text: &str) -> Result<Basis, LatticeError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| LatticeError::Parse("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| LatticeError::Parse(format!("bad header `{header}`")))?;
    let [r, m] = dims[..] else {
        return Err(LatticeError::Parse(format!(
            "header must be `r m`, got `{header}`"
        )));
    };
    if r == 0 || m == 0 {
        return Err(LatticeError::Parse("zero dimension in header".into()));
    }
    let mut rows = Vec::with_capacity(r);
    for (i, line) in lines.enumerate() {
        if i >= r {
            return Err(LatticeError::Parse(format!("more than {r} rows")));
        }
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| LatticeError::Parse(format!("bad entry on row {}", i + 1)))?;
        if row.len() != m {
            return Err(LatticeError::Parse(format!(
                "row {} has {} entries, expected {m}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != r {
        return Err(LatticeError::Parse(format!(
            "expected {r} rows, found {}",
            rows.len()
        )));
    }
    Basis::from_integers(&rows)
}
