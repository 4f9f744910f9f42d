//! Plain-text code files.
//!
//! A file carries one header line `subspace-code q=<q> n=<n>` followed by
//! one codeword per line in the form `k=<k> <row1>;<row2>;...`, where each
//! row lists its entries as field element codes separated by commas. Lines
//! starting with `#` and blank lines are ignored. The writer emits nothing
//! non-deterministic, so the same code renders to byte-identical files
//! across runs and platforms.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::gf::Field;
use crate::matrix::FqMatrix;
use crate::subspace::{Code, Subspace};
use crate::{Error, Result};

/// A parsed code file, with the codeword matrices kept exactly as written.
///
/// Rows are not canonicalized on ingestion: a verifier wants to see the
/// file's actual content, including duplicate or non-reduced generator
/// matrices. Use [`RawCode::collect`] to canonicalize into a [`Code`].
#[derive(Debug)]
pub struct RawCode {
    pub field: Field,
    pub ambient: usize,
    pub words: Vec<FqMatrix>,
}

impl RawCode {
    /// Canonicalizes every word and assembles a [`Code`]. Fails if two
    /// lines describe the same subspace.
    pub fn collect(&self) -> Result<Code> {
        let words: Vec<Subspace> =
            self.words.iter().map(Subspace::from_matrix).collect();
        Code::new(&self.field, self.ambient, words)
    }
}

fn parse_tagged(token: &str, tag: &str, line: usize) -> Result<u64> {
    let rest = token.strip_prefix(tag).ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected `{tag}<integer>`, found `{token}`"),
    })?;
    rest.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("`{rest}` is not a nonnegative integer"),
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<(Field, usize)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "subspace-code" {
        return Err(Error::Parse {
            line: line_no,
            msg: "expected header `subspace-code q=<q> n=<n>`".into(),
        });
    }
    let q = parse_tagged(tokens[1], "q=", line_no)?;
    let n = parse_tagged(tokens[2], "n=", line_no)? as usize;
    if q > u64::from(u32::MAX) {
        return Err(Error::Parse { line: line_no, msg: format!("field order {q} out of range") });
    }
    let field = Field::of_order(q as u32)
        .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
    if n == 0 || n > 64 {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("ambient dimension must be between 1 and 64, found {n}"),
        });
    }
    Ok((field, n))
}

fn parse_word(field: &Field, n: usize, line_no: usize, body: &str) -> Result<FqMatrix> {
    let (dim_tok, rows_tok) = body.split_once(char::is_whitespace).ok_or_else(|| Error::Parse {
        line: line_no,
        msg: "expected `k=<dim> <row1>;<row2>;...`".into(),
    })?;
    let k = parse_tagged(dim_tok, "k=", line_no)? as usize;
    if k == 0 || k > n {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("dimension must be between 1 and {n}, found {k}"),
        });
    }
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
    for row in rows_tok.trim().split(';') {
        let mut entries: Vec<u32> = Vec::with_capacity(n);
        for entry in row.split(',') {
            let v = entry.trim().parse::<u32>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("`{}` is not a field element code", entry.trim()),
            })?;
            if v >= field.q() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("element code {v} exceeds field order {}", field.q()),
                });
            }
            entries.push(v);
        }
        if entries.len() != n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("row has {} entries, ambient dimension is {n}", entries.len()),
            });
        }
        rows.push(entries);
    }
    if rows.len() != k {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("word declares k={k} but lists {} rows", rows.len()),
        });
    }
    FqMatrix::from_rows(field, &rows)
}

/// Parses code-file text. The header must precede every codeword line.
pub fn parse_code(text: &str) -> Result<RawCode> {
    let mut header: Option<(Field, usize)> = None;
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("subspace-code") {
            if header.is_some() {
                return Err(Error::Parse { line: line_no, msg: "second header line".into() });
            }
            header = Some(parse_header(line_no, line)?);
            continue;
        }
        let (field, n) = header.as_ref().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "codeword before the `subspace-code` header".into(),
        })?;
        words.push(parse_word(field, *n, line_no, line)?);
    }
    let (field, ambient) = header.ok_or_else(|| Error::Parse {
        line: 1,
        msg: "missing `subspace-code q=<q> n=<n>` header".into(),
    })?;
    Ok(RawCode { field, ambient, words })
}

/// Reads and parses a code file from disk.
pub fn read_code(path: &Path) -> Result<RawCode> {
    let text = fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_code(&text)
}

fn push_word(out: &mut String, w: &Subspace) {
    let m = w.matrix();
    let _ = write!(out, "k={} ", w.dim());
    for i in 0..m.rows() {
        if i > 0 {
            out.push(';');
        }
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m.get(i, j));
        }
    }
    out.push('\n');
}

/// Renders labeled groups of words into one file. Each group is preceded
/// by a `#` comment carrying its label; parsing the result flattens the
/// groups back into a single code.
pub fn render_grouped(
    field: &Field,
    n: usize,
    comments: &[String],
    groups: &[(String, Vec<Subspace>)],
) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "subspace-code q={} n={}", field.q(), n);
    for (label, words) in groups {
        let _ = writeln!(out, "# {label} ({} words)", words.len());
        for w in words {
            push_word(&mut out, w);
        }
    }
    out
}

/// Renders a code as one unlabeled block, preserving word order.
pub fn render_code(code: &Code, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "subspace-code q={} n={}", code.field().q(), code.ambient());
    for w in code.words() {
        push_word(&mut out, w);
    }
    out
}

/// Writes rendered text to disk.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(())
}
