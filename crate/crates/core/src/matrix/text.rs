//! Plain-text base matrix format.
//!
//! ```text
//! # comment lines start with '#'
//! <rows> <cols> <z>
//! <cols space-separated shifts, -1 for a null block>   (rows times)
//! ```

use super::{BaseMatrix, MatrixError};
use std::io::{BufRead, Write};
use std::path::Path;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> MatrixError {
    MatrixError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a base matrix from any buffered reader.
pub fn load_base_matrix<R: BufRead>(reader: R) -> Result<BaseMatrix, MatrixError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    let mut rows_seen = 0usize;
    let mut last_line = 0usize;

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        1,
                        format!("header must be `<rows> <cols> <z>`, found {} fields", fields.len()),
                    ));
                }
                let mut dims = [0usize; 3];
                for (j, f) in fields.iter().enumerate() {
                    dims[j] = f.parse().map_err(|_| {
                        parse_err(lineno, j + 1, format!("invalid dimension `{f}`"))
                    })?;
                    if dims[j] == 0 {
                        return Err(parse_err(lineno, j + 1, "dimensions must be positive"));
                    }
                }
                header = Some((dims[0], dims[1], dims[2]));
            }
            Some((rows, cols, z)) => {
                if rows_seen == rows {
                    return Err(parse_err(
                        lineno,
                        1,
                        format!("wrong row count: more than the {rows} declared rows"),
                    ));
                }
                if fields.len() != cols {
                    return Err(parse_err(
                        lineno,
                        fields.len().min(cols) + 1,
                        format!("expected {cols} entries, found {}", fields.len()),
                    ));
                }
                for (j, f) in fields.iter().enumerate() {
                    let v: i64 = f
                        .parse()
                        .map_err(|_| parse_err(lineno, j + 1, format!("invalid entry `{f}`")))?;
                    entries.push(match v {
                        -1 => None,
                        v if v >= 0 && (v as usize) < z => Some(v as usize),
                        v => {
                            return Err(parse_err(
                                lineno,
                                j + 1,
                                format!("shift out of range: {v} not in [0, {z}) or -1"),
                            ))
                        }
                    });
                }
                rows_seen += 1;
            }
        }
    }

    let (rows, cols, z) = header.ok_or_else(|| parse_err(last_line.max(1), 1, "missing header"))?;
    if rows_seen != rows {
        return Err(parse_err(
            last_line.max(1),
            1,
            format!("wrong row count: declared {rows}, found {rows_seen}"),
        ));
    }
    BaseMatrix::new(rows, cols, z, entries)
}

/// Parses a base matrix from a string.
pub fn parse_base_matrix(text: &str) -> Result<BaseMatrix, MatrixError> {
    load_base_matrix(text.as_bytes())
}

impl BaseMatrix {
    /// Reads a base matrix file.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, MatrixError> {
        let f = std::fs::File::open(path)?;
        load_base_matrix(std::io::BufReader::new(f))
    }
}

/// Serializes a base matrix. Each entry of `comments` becomes a `# ` line
/// ahead of the header.
pub fn write_base_matrix<W: Write>(
    base: &BaseMatrix,
    comments: &[String],
    mut out: W,
) -> std::io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{} {} {}", base.rows(), base.cols(), base.z())?;
    for r in 0..base.rows() {
        let line: Vec<String> = (0..base.cols())
            .map(|c| match base.get(r, c) {
                Some(s) => s.to_string(),
                None => "-1".to_string(),
            })
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_direct_mapping() {
        let b = parse_base_matrix("1 2 3\n0 -1\n").unwrap();
        assert_eq!((b.rows(), b.cols(), b.z()), (1, 2, 3));
        assert_eq!(b.entries(), &[Some(0), None]);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let b = parse_base_matrix("# hello\n\n1 1 4\n# mid\n3\n").unwrap();
        assert_eq!(b.get(0, 0), Some(3));
    }

    #[test]
    fn shift_out_of_range() {
        let err = parse_base_matrix("1 1 4\n4\n").unwrap_err();
        match err {
            MatrixError::Parse { line, column, message } => {
                assert_eq!((line, column), (2, 1));
                assert!(message.contains("out of range"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn wrong_row_count() {
        let err = parse_base_matrix("2 2 8\n0 1\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { ref message, .. } if message.contains("wrong row count")));
        let err = parse_base_matrix("1 2 8\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { line: 3, .. }));
    }

    #[test]
    fn malformed_header_and_entries() {
        assert!(matches!(
            parse_base_matrix("1 2\n0 1\n"),
            Err(MatrixError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_base_matrix("1 x 3\n"),
            Err(MatrixError::Parse { line: 1, column: 2, .. })
        ));
        assert!(matches!(
            parse_base_matrix("1 2 3\n0\n"),
            Err(MatrixError::Parse { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            parse_base_matrix("1 2 3\n0 -2\n"),
            Err(MatrixError::Parse { line: 2, column: 2, .. })
        ));
        assert!(parse_base_matrix("# only comments\n").is_err());
    }

    #[test]
    fn writes_comments_then_table() {
        let b = parse_base_matrix("2 2 5\n0 -1\n4 2\n").unwrap();
        let mut out = Vec::new();
        write_base_matrix(&b, &["seed: 1".to_string()], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# seed: 1\n2 2 5\n0 -1\n4 2\n");
    }
}
