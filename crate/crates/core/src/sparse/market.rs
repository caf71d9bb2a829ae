use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::TripletMatrix;

/// Reads a Matrix Market coordinate file (real, integer or pattern entries;
/// general or symmetric). Symmetric files have their off-diagonal entries
/// mirrored; pattern entries get value 1.0; duplicates are summed. Array
/// (dense) format and complex/skew-symmetric qualifiers are rejected.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<TripletMatrix> {
    let file = File::open(path.as_ref())?;
    read_matrix_market_from(BufReader::new(file))
}

/// Same parser over any buffered reader (handy for tests and pipes).
pub fn read_matrix_market_from(reader: impl BufRead) -> Result<TripletMatrix> {
    let mut lines = reader.lines().enumerate();

    let (lineno, header) = match lines.next() {
        Some((n, l)) => (n + 1, l?),
        None => return Err(Error::parse(1, "empty file")),
    };
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() < 4 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(lineno, "missing %%MatrixMarket matrix header"));
    }
    if fields[2] != "coordinate" {
        return Err(Error::parse(
            lineno,
            format!("unsupported format '{}': only coordinate is supported", fields[2]),
        ));
    }
    let field_kind = fields[3].as_str();
    let pattern = match field_kind {
        "real" | "integer" => false,
        "pattern" => true,
        other => {
            return Err(Error::parse(
                lineno,
                format!("unsupported field type '{other}'"),
            ))
        }
    };
    let symmetry = fields.get(4).map(String::as_str).unwrap_or("general");
    let symmetric = match symmetry {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(Error::parse(
                lineno,
                format!("unsupported symmetry '{other}'"),
            ))
        }
    };

    // Size line: first non-comment, non-blank line after the header.
    let (mut n_rows, mut n_cols, mut nnz_declared) = (0usize, 0usize, 0usize);
    let mut size_seen = false;
    let mut entry_lines = 0usize;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (n, line) in lines {
        let lineno = n + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let mut it = text.split_whitespace();
        if !size_seen {
            n_rows = parse_field(it.next(), lineno, "row count")?;
            n_cols = parse_field(it.next(), lineno, "column count")?;
            nnz_declared = parse_field(it.next(), lineno, "nonzero count")?;
            if it.next().is_some() {
                return Err(Error::parse(lineno, "trailing fields on size line"));
            }
            size_seen = true;
            entries.reserve(if symmetric { 2 * nnz_declared } else { nnz_declared });
            continue;
        }
        let i: usize = parse_field(it.next(), lineno, "row index")?;
        let j: usize = parse_field(it.next(), lineno, "column index")?;
        let v = if pattern {
            1.0
        } else {
            let raw = it
                .next()
                .ok_or_else(|| Error::parse(lineno, "missing value field"))?;
            raw.parse::<f64>()
                .map_err(|_| Error::parse(lineno, format!("bad value '{raw}'")))?
        };
        if i < 1 || i > n_rows || j < 1 || j > n_cols {
            return Err(Error::parse(
                lineno,
                format!("index ({i}, {j}) outside declared {n_rows}x{n_cols}"),
            ));
        }
        entry_lines += 1;
        entries.push((i - 1, j - 1, v));
        if symmetric && i != j {
            entries.push((j - 1, i - 1, v));
        }
    }
    if !size_seen {
        return Err(Error::parse(0, "missing size line"));
    }
    if entry_lines != nnz_declared {
        return Err(Error::parse(
            0,
            format!("declared {nnz_declared} entries but found {entry_lines}"),
        ));
    }
    TripletMatrix::new(n_rows, n_cols, entries)
}

fn parse_field(raw: Option<&str>, lineno: usize, what: &str) -> Result<usize> {
    let raw = raw.ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    raw.parse::<usize>()
        .map_err(|_| Error::parse(lineno, format!("bad {what} '{raw}'")))
}

/// Writes a matrix as `coordinate real general`, entries in canonical order,
/// 1-based. Values use Rust's shortest round-trip float formatting, so output
/// is deterministic and re-reads to the same matrix.
pub fn write_matrix_market(m: &TripletMatrix, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), m.nnz())?;
    for &(r, c, v) in m.entries() {
        writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
    }
    w.flush()?;
    Ok(())
}
