//! The `TRN v1` format: a header line, the vertex count, then one row of `n`
//! characters per vertex where character `j` of row `i` is `1` iff `i→j`, `0`
//! iff `j→i`, and `-` on the diagonal.
//!
//! Lines starting with `#` directly after the header are comments; they carry
//! generator provenance and are dropped on load.

use std::path::Path;

use crate::error::{Error, Result};
use crate::tournament::Tournament;
use crate::vertex_set::VertexSet;

const HEADER: &str = "TRN v1";

pub fn to_trn(t: &Tournament) -> String {
    to_trn_with_comments(t, &[])
}

pub fn to_trn_with_comments(t: &Tournament, comments: &[String]) -> String {
    let n = t.n();
    let mut s = String::with_capacity((n + 1) * n + 32);
    s.push_str(HEADER);
    s.push('\n');
    for c in comments {
        s.push_str("# ");
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&n.to_string());
    s.push('\n');
    for u in 0..n {
        for v in 0..n {
            s.push(if u == v {
                '-'
            } else if t.dominates(u, v) {
                '1'
            } else {
                '0'
            });
        }
        s.push('\n');
    }
    s
}

fn format_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        column,
        message: message.into(),
    }
}

pub fn from_trn(text: &str) -> Result<Tournament> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((no, other)) => {
            return Err(format_error(
                no,
                1,
                format!("expected header `{HEADER}`, found `{other}`"),
            ))
        }
        None => return Err(format_error(1, 1, "empty document")),
    }
    let mut lines = lines.skip_while(|(_, l)| l.starts_with('#')).peekable();
    let (count_line, count) = lines
        .next()
        .ok_or_else(|| format_error(2, 1, "missing vertex count"))?;
    let n: usize = count.trim().parse().map_err(|_| {
        format_error(
            count_line,
            1,
            format!("vertex count `{count}` is not an integer"),
        )
    })?;
    if n == 0 {
        return Err(format_error(count_line, 1, "vertex count must be positive"));
    }

    let mut rows: Vec<(usize, Vec<u8>)> = Vec::with_capacity(n);
    for (no, line) in lines.by_ref() {
        if rows.len() == n {
            if !line.trim().is_empty() {
                return Err(format_error(no, 1, format!("more than {n} rows")));
            }
            continue;
        }
        if line.len() != n {
            return Err(format_error(
                no,
                line.len().min(n) + 1,
                format!("row has {} characters, expected {n}", line.chars().count()),
            ));
        }
        rows.push((no, line.as_bytes().to_vec()));
    }
    if rows.len() < n {
        return Err(format_error(
            count_line + rows.len() + 1,
            1,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }

    let mut out = vec![VertexSet::new(n); n];
    for (i, (no, row)) in rows.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let col = j + 1;
            match (c, i == j) {
                (b'-', true) => {}
                (_, true) => return Err(format_error(*no, col, "diagonal entry must be `-`")),
                (b'1', false) => {
                    out[i].insert(j);
                }
                (b'0', false) => {}
                _ => {
                    return Err(format_error(
                        *no,
                        col,
                        format!("unexpected character `{}`", c as char),
                    ))
                }
            }
        }
    }
    for (i, (no, _)) in rows.iter().enumerate() {
        for j in 0..i {
            if out[i].contains(j) == out[j].contains(i) {
                return Err(format_error(
                    *no,
                    j + 1,
                    format!("complementarity violated at ({i},{j}): entries ({j},{i}) and ({i},{j}) agree"),
                ));
            }
        }
    }
    Tournament::from_out_rows(out)
}

pub fn save(t: &Tournament, path: &Path) -> Result<()> {
    std::fs::write(path, to_trn(t)).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Tournament> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    from_trn(&text)
}
