//! Sparse parity-check matrix I/O in the conventional alist text format.
//!
//! Layout (whitespace-separated):
//!
//! ```text
//! n m                  (columns = variables, rows = checks)
//! dv_max dc_max        (largest column / row degree)
//! d(col 0) ... d(col n-1)
//! d(row 0) ... d(row m-1)
//! n lines of 1-based row indices per column, zero-padded to dv_max
//! m lines of 1-based column indices per row, zero-padded to dc_max
//! ```
//!
//! The reader accepts both zero-padded and unpadded index lines, and
//! cross-checks the two adjacency lists against each other.

use crate::{BitMatrix, Error, Result};
use std::path::Path;

/// Serializes a parity-check matrix (rows = checks) to alist text.
pub fn write_alist(m: &BitMatrix) -> String {
    let (rows, cols) = (m.rows(), m.cols());
    let col_supports: Vec<Vec<usize>> = (0..cols)
        .map(|c| (0..rows).filter(|&r| m.get(r, c)).collect())
        .collect();
    let row_supports: Vec<Vec<usize>> = (0..rows).map(|r| m.row(r).ones()).collect();
    let dv_max = col_supports.iter().map(Vec::len).max().unwrap_or(0);
    let dc_max = row_supports.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{cols} {rows}\n{dv_max} {dc_max}\n"));
    let degrees = |v: &[Vec<usize>]| {
        v.iter().map(|s| s.len().to_string()).collect::<Vec<_>>().join(" ")
    };
    out.push_str(&degrees(&col_supports));
    out.push('\n');
    out.push_str(&degrees(&row_supports));
    out.push('\n');
    let padded = |support: &[usize], width: usize| {
        let mut items: Vec<String> = support.iter().map(|i| (i + 1).to_string()).collect();
        items.resize(width, "0".to_string());
        items.join(" ")
    };
    for s in &col_supports {
        out.push_str(&padded(s, dv_max));
        out.push('\n');
    }
    for s in &row_supports {
        out.push_str(&padded(s, dc_max));
        out.push('\n');
    }
    out
}

/// Parses alist text into a parity-check matrix (rows = checks).
pub fn read_alist(text: &str) -> Result<BitMatrix> {
    let mut tokens = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| Error::Parse(format!("alist: expected integer, got {t:?}")))
    });
    let mut next = |what: &str| {
        tokens
            .next()
            .unwrap_or_else(|| Err(Error::Parse(format!("alist: missing {what}"))))
    };

    let n = next("column count")?;
    let m = next("row count")?;
    let dv_max = next("max column degree")?;
    let dc_max = next("max row degree")?;
    let col_degs: Vec<usize> =
        (0..n).map(|_| next("column degree")).collect::<Result<_>>()?;
    let row_degs: Vec<usize> =
        (0..m).map(|_| next("row degree")).collect::<Result<_>>()?;
    if col_degs.iter().any(|&d| d > dv_max) || row_degs.iter().any(|&d| d > dc_max) {
        return Err(Error::Parse("alist: degree exceeds declared maximum".into()));
    }
    if col_degs.iter().sum::<usize>() != row_degs.iter().sum::<usize>() {
        return Err(Error::Parse("alist: degree sums disagree".into()));
    }

    // Index lists may be zero-padded to the max degree or written bare. Peek at
    // the token stream: each line holds `deg` real entries then optional zeros.
    // Since we tokenized across newlines, detect padding by total token count.
    let all: Vec<usize> = tokens.collect::<Result<_>>()?;
    let bare = col_degs.iter().sum::<usize>() + row_degs.iter().sum::<usize>();
    let padded = n * dv_max + m * dc_max;
    let (col_stride, row_stride) = if all.len() == padded && padded != bare {
        (Some(dv_max), Some(dc_max))
    } else if all.len() == bare {
        (None, None)
    } else {
        return Err(Error::Parse(format!(
            "alist: expected {bare} or {padded} index tokens, found {}",
            all.len()
        )));
    };

    let mut mat = BitMatrix::zeros(m, n);
    let mut pos = 0;
    let mut take = |deg: usize, stride: Option<usize>| -> Result<Vec<usize>> {
        let width = stride.unwrap_or(deg);
        let slice = &all[pos..pos + width];
        pos += width;
        let entries: Vec<usize> = slice.iter().take(deg).copied().collect();
        if entries.iter().any(|&e| e == 0) || slice.iter().skip(deg).any(|&e| e != 0) {
            return Err(Error::Parse("alist: malformed index padding".into()));
        }
        Ok(entries)
    };
    for (c, &deg) in col_degs.iter().enumerate() {
        for r in take(deg, col_stride)? {
            if r > m {
                return Err(Error::Parse(format!("alist: row index {r} out of range")));
            }
            mat.set(r - 1, c, true);
        }
    }
    for (r, &deg) in row_degs.iter().enumerate() {
        for c in take(deg, row_stride)? {
            if c > n || !mat.get(r, c - 1) {
                return Err(Error::Parse(
                    "alist: row list disagrees with column list".into(),
                ));
            }
        }
        if mat.row_weight(r) != deg {
            return Err(Error::Parse("alist: row weight disagrees".into()));
        }
    }
    Ok(mat)
}

pub fn save_alist(path: impl AsRef<Path>, m: &BitMatrix) -> Result<()> {
    std::fs::write(path, write_alist(m))?;
    Ok(())
}

pub fn load_alist(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Parse(format!("alist {}: {e}", path.as_ref().display()))
    })?;
    read_alist(&text)
}
