//! Plain-text matrix format: a header line `R C`, then `R` lines of `C`
//! whitespace-separated base-10 integers, newline terminated.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, LatticeVector};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Tokens of one line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses a matrix block starting at the first non-blank line of `text`.
///
/// Returns the dimensions, the row-major entries and the index of the first
/// unconsumed line.
fn parse_block(lines: &[&str], first: usize) -> Result<(usize, usize, Vec<BigInt>, usize)> {
    let mut idx = first;
    while idx < lines.len() && lines[idx].trim().is_empty() {
        idx += 1;
    }
    if idx == lines.len() {
        return Err(parse_err(idx + 1, 1, "missing header line \"R C\""));
    }
    let header = tokens(lines[idx]);
    if header.len() != 2 {
        return Err(parse_err(idx + 1, 1, format!("header must hold two integers, found {}", header.len())));
    }
    let dim = |(col, tok): (usize, &str)| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| parse_err(idx + 1, col, format!("invalid dimension {tok:?}")))
    };
    let rows = dim(header[0])?;
    let cols = dim(header[1])?;
    idx += 1;
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        if idx >= lines.len() {
            return Err(parse_err(idx + 1, 1, format!("expected {rows} rows, found {r}")));
        }
        let toks = tokens(lines[idx]);
        if toks.len() != cols {
            return Err(parse_err(
                idx + 1,
                toks.get(cols).map(|t| t.0).unwrap_or(lines[idx].len() + 1),
                format!("expected {cols} entries, found {}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            let v = tok
                .parse::<BigInt>()
                .map_err(|_| parse_err(idx + 1, col, format!("invalid integer {tok:?}")))?;
            data.push(v);
        }
        idx += 1;
    }
    Ok((rows, cols, data, idx))
}

/// Parses a matrix in the text format. Trailing blank lines are allowed.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let (rows, cols, data, next) = parse_block(&lines, 0)?;
    if let Some(extra) = lines[next..].iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(next + extra + 1, 1, "unexpected content after matrix"));
    }
    IntMatrix::new(rows, cols, data).map_err(|e| parse_err(1, 1, e.to_string()))
}

/// Parses a list of vectors stored as matrix rows. A `0 C` header yields an
/// empty list.
pub fn parse_vectors(text: &str) -> Result<Vec<LatticeVector>> {
    let lines: Vec<&str> = text.lines().collect();
    let (rows, cols, data, next) = parse_block(&lines, 0)?;
    if let Some(extra) = lines[next..].iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(next + extra + 1, 1, "unexpected content after matrix"));
    }
    Ok((0..rows).map(|r| LatticeVector::new(data[r * cols..(r + 1) * cols].to_vec())).collect())
}

/// Parses a single vector given as a `1 n` matrix.
pub fn parse_vector(text: &str) -> Result<LatticeVector> {
    let m = parse_matrix(text)?;
    if m.rows() != 1 {
        return Err(parse_err(1, 1, format!("expected a 1 x n vector, found {} rows", m.rows())));
    }
    Ok(m.row_vector(0))
}

pub fn format_matrix(m: &IntMatrix) -> String {
    let rows: Vec<&[BigInt]> = (0..m.rows()).map(|i| m.row(i)).collect();
    format_rows(&rows, m.cols())
}

/// Formats vectors as the rows of a matrix. An empty list is written as a
/// `0 n` header.
pub fn format_vectors(vectors: &[LatticeVector], n: usize) -> String {
    let rows: Vec<&[BigInt]> = vectors.iter().map(|v| v.coords()).collect();
    format_rows(&rows, n)
}

fn format_rows(rows: &[&[BigInt]], cols: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", rows.len(), cols);
    for r in rows {
        let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Layered witness file: a `layers N width n` line followed by an `N x n`
/// matrix, one layer per row.
pub fn format_layered(layers: &[LatticeVector], width: usize) -> String {
    format!("layers {} width {}\n{}", layers.len(), width, format_vectors(layers, width))
}

pub fn parse_layered(text: &str) -> Result<Vec<LatticeVector>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((ln, first)) = lines.next() else {
        return Err(parse_err(1, 1, "empty layered file"));
    };
    let toks = tokens(first);
    let ok = toks.len() == 4 && toks[0].1 == "layers" && toks[2].1 == "width";
    if !ok {
        return Err(parse_err(ln + 1, 1, "expected \"layers N width n\""));
    }
    let num = |(col, tok): (usize, &str)| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| parse_err(ln + 1, col, format!("invalid count {tok:?}")))
    };
    let count = num(toks[1])?;
    let width = num(toks[3])?;
    let rest: String = text.lines().skip(ln + 1).map(|l| format!("{l}\n")).collect();
    let layers = parse_vectors(&rest).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse { line: line + ln + 1, column, message },
        other => other,
    })?;
    if layers.len() != count || layers.iter().any(|l| l.len() != width) {
        return Err(parse_err(ln + 1, 1, "layer block does not match the declared shape"));
    }
    Ok(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let text = "2 4\n1 1 1 1\n0 1 2 3\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(format_matrix(&m), text);
    }

    #[test]
    fn tolerates_extra_whitespace() {
        let m = parse_matrix("  2  2\n1\t-2\n  3 4  \n\n").unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[[1, -2], [3, 4]]).unwrap());
    }

    #[test]
    fn reports_line_and_column() {
        match parse_matrix("2 3\n1 2 3\n4 x 6\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_matrix("2 3\n1 2 3\n4 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_matrix("1 2\n1 2\n3 4\n").is_err());
        assert!(parse_matrix("").is_err());
    }

    #[test]
    fn big_integers_survive() {
        let text = "1 2\n123456789012345678901234567890 -5\n";
        assert_eq!(format_matrix(&parse_matrix(text).unwrap()), text);
    }

    #[test]
    fn empty_vector_list() {
        assert_eq!(format_vectors(&[], 3), "0 3\n");
        assert!(parse_vectors("0 3\n").unwrap().is_empty());
    }

    #[test]
    fn layered_round_trip() {
        let layers = vec![LatticeVector::from_i64(&[1, -1]), LatticeVector::from_i64(&[-1, 1])];
        let text = format_layered(&layers, 2);
        assert_eq!(text, "layers 2 width 2\n2 2\n1 -1\n-1 1\n");
        assert_eq!(parse_layered(&text).unwrap(), layers);
    }
}
