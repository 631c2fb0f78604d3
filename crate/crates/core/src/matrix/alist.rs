//! alist export/import of expanded parity check matrices.
//!
//! The layout is the usual one used by LDPC tooling: `n m`, the maximum
//! column and row weights, the column weights, the row weights, then one line
//! per column and one per row listing 1-based neighbour indices. Lines are
//! zero-padded to the maximum weight on output; the parser accepts padded or
//! unpadded lists.

use super::{MatrixError, ParityCheckMatrix};
use std::io::Write;

pub fn write_alist<W: Write>(h: &ParityCheckMatrix, mut out: W) -> std::io::Result<()> {
    let col_w: Vec<usize> = (0..h.n()).map(|c| h.col(c).len()).collect();
    let row_w: Vec<usize> = (0..h.m()).map(|r| h.row(r).len()).collect();
    let max_col = col_w.iter().copied().max().unwrap_or(0);
    let max_row = row_w.iter().copied().max().unwrap_or(0);
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "{} {}", h.n(), h.m())?;
    writeln!(out, "{max_col} {max_row}")?;
    writeln!(out, "{}", join(&mut col_w.iter().copied()))?;
    writeln!(out, "{}", join(&mut row_w.iter().copied()))?;
    for c in 0..h.n() {
        let rows = h.col(c).iter().map(|&r| r + 1);
        let pad = std::iter::repeat(0).take(max_col - h.col(c).len());
        writeln!(out, "{}", join(&mut rows.chain(pad)))?;
    }
    for r in 0..h.m() {
        let cols = h.row(r).iter().map(|&c| c + 1);
        let pad = std::iter::repeat(0).take(max_row - h.row(r).len());
        writeln!(out, "{}", join(&mut cols.chain(pad)))?;
    }
    Ok(())
}

/// Parses an alist document. Only the column section is used to build the
/// matrix; the row section is checked against it.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix, MatrixError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next_numbers = |what: &str| -> Result<(usize, Vec<usize>), MatrixError> {
        let (lineno, line) = lines.next().ok_or_else(|| MatrixError::Parse {
            line: 0,
            column: 0,
            message: format!("unexpected end of input reading {what}"),
        })?;
        let nums = line
            .split_whitespace()
            .enumerate()
            .map(|(j, f)| {
                f.parse::<usize>().map_err(|_| MatrixError::Parse {
                    line: lineno,
                    column: j + 1,
                    message: format!("invalid number `{f}` in {what}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((lineno, nums))
    };

    let (l, dims) = next_numbers("dimensions")?;
    if dims.len() != 2 {
        return Err(MatrixError::Parse {
            line: l,
            column: 1,
            message: "expected `n m`".into(),
        });
    }
    let (n, m) = (dims[0], dims[1]);
    let (lm, max_w) = next_numbers("maximum weights")?;
    if max_w.len() != 2 {
        return Err(MatrixError::Parse {
            line: lm,
            column: 1,
            message: "expected `max_col_weight max_row_weight`".into(),
        });
    }
    // an all-zero matrix has empty (blank) list lines
    let lists_present = max_w[0] > 0;
    let (_, col_w) = next_numbers("column weights")?;
    let (_, row_w) = next_numbers("row weights")?;
    if col_w.len() != n || row_w.len() != m {
        return Err(MatrixError::Parse {
            line: l,
            column: 1,
            message: "weight list lengths disagree with dimensions".into(),
        });
    }
    let mut incidences = Vec::new();
    for (c, &w) in col_w.iter().enumerate() {
        if !lists_present {
            if w != 0 {
                return Err(MatrixError::Parse {
                    line: lm,
                    column: 1,
                    message: format!("column {} has weight {w} above the maximum 0", c + 1),
                });
            }
            continue;
        }
        let (lineno, rows) = next_numbers("column list")?;
        let rows: Vec<usize> = rows.into_iter().filter(|&r| r != 0).collect();
        if rows.len() != w {
            return Err(MatrixError::Parse {
                line: lineno,
                column: 1,
                message: format!("column {} lists {} rows, weight says {w}", c + 1, rows.len()),
            });
        }
        incidences.extend(rows.into_iter().map(|r| (r - 1, c)));
    }
    let h = ParityCheckMatrix::from_incidences(m, n, incidences)?;
    for (r, &w) in row_w.iter().enumerate() {
        if !lists_present {
            if w != 0 {
                return Err(MatrixError::Parse {
                    line: lm,
                    column: 2,
                    message: format!("row {} has weight {w} above the maximum 0", r + 1),
                });
            }
            continue;
        }
        let (lineno, cols) = next_numbers("row list")?;
        let mut cols: Vec<usize> = cols.into_iter().filter(|&c| c != 0).map(|c| c - 1).collect();
        cols.sort_unstable();
        if cols.len() != w || cols.as_slice() != h.row(r) {
            return Err(MatrixError::Parse {
                line: lineno,
                column: 1,
                message: format!("row {} disagrees with the column section", r + 1),
            });
        }
    }
    Ok(h)
}
