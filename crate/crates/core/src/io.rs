//! Plain-text formats.
//!
//! * matrix: `n w`, then `n` rows of `n` entries from `{-1, 0, 1}`
//! * lattice: `n`, then `n` basis rows
//! * code: `m n k`, then `k` generator rows over `Z_m`
//!
//! Blank lines and lines starting with `#` are ignored. Errors carry
//! 1-based line numbers.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::codes::LinearCodeZm;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::matrices::WeighingMatrix;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<i64>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let nums = t
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("{tok:?} is not an integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
        Err(Error::Parse {
            line: self.last + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next_numbers("nothing") {
            Ok((line, _)) => Err(Error::Parse {
                line,
                msg: "trailing data".into(),
            }),
            Err(_) => Ok(()),
        }
    }
}

fn header(lines: &mut Lines, count: usize, what: &str) -> Result<Vec<i64>> {
    let (line, h) = lines.next_numbers(what)?;
    if h.len() != count || h.iter().any(|&v| v < 0) {
        return Err(Error::Parse {
            line,
            msg: format!("expected header `{what}`"),
        });
    }
    Ok(h)
}

fn rows(lines: &mut Lines, count: usize, width: usize) -> Result<Vec<Vec<i64>>> {
    (0..count)
        .map(|r| {
            let (line, v) = lines.next_numbers(&format!("row {}", r + 1))?;
            if v.len() != width {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {width} entries, found {}", v.len()),
                });
            }
            Ok(v)
        })
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<WeighingMatrix> {
    let mut lines = Lines::new(text);
    let h = header(&mut lines, 2, "n w")?;
    let (n, w) = (h[0] as usize, h[1] as usize);
    let body = rows(&mut lines, n, n)?;
    lines.expect_end()?;
    let m = WeighingMatrix::new(&IntMatrix::from_rows(&body)?)?;
    if m.weight() != w {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header weight {w} but rows have weight {}", m.weight()),
        });
    }
    Ok(m)
}

pub fn format_matrix(m: &WeighingMatrix) -> String {
    let mut s = format!("{} {}\n", m.order(), m.weight());
    for i in 0..m.order() {
        let row: Vec<String> = m.row(i).iter().map(i8::to_string).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// Hex SHA-256 of the canonical text form of `m`.
pub fn matrix_hash(m: &WeighingMatrix) -> String {
    hex::encode(Sha256::digest(format_matrix(m).as_bytes()))
}

pub fn parse_lattice(text: &str) -> Result<IntMatrix> {
    let mut lines = Lines::new(text);
    let n = header(&mut lines, 1, "n")?[0] as usize;
    let body = rows(&mut lines, n, n)?;
    lines.expect_end()?;
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    IntMatrix::from_rows(&body)
}

pub fn format_int_matrix(m: &IntMatrix) -> String {
    let mut s = String::new();
    for r in m.row_iter() {
        let row: Vec<String> = r.iter().map(i64::to_string).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn format_lattice(basis: &IntMatrix) -> String {
    format!("{}\n{}", basis.rows(), format_int_matrix(basis))
}

pub fn parse_code(text: &str) -> Result<LinearCodeZm> {
    let mut lines = Lines::new(text);
    let h = header(&mut lines, 3, "m n k")?;
    let (m, n, k) = (h[0] as u64, h[1] as usize, h[2] as usize);
    let body = rows(&mut lines, k, n)?;
    lines.expect_end()?;
    let gens = body
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| v.rem_euclid(m.max(1) as i64) as u64)
                .collect()
        })
        .collect();
    LinearCodeZm::new(m, n, gens)
}

pub fn format_code(c: &LinearCodeZm) -> String {
    let rows = c.howell_rows();
    let mut s = format!("{} {} {}\n", c.modulus(), c.length(), rows.len());
    for r in rows {
        let row: Vec<String> = r.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::paley_conference;

    #[test]
    fn matrix_round_trip() {
        let m = paley_conference(5, 64).unwrap();
        let text = format_matrix(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert_eq!(matrix_hash(&m).len(), 64);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_matrix("2 2\n1 1\n# note\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_lattice("3\n1 0 0\n0 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_code("4 2 1\n1 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(
            parse_matrix("2 1\n1 1\n1 -1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn code_round_trip() {
        let c = parse_code("4 2 1\n1 1\n").unwrap();
        assert_eq!(parse_code(&format_code(&c)).unwrap(), c);
        assert_eq!(c.cardinality_u64(), Some(4));
    }
}
