//! Plain-text matrix documents.
//!
//! A document holds one or more square matrices, one row per line with
//! whitespace separated numbers. A line `matrix <label>` starts a new matrix;
//! without one the first matrix is labelled `A`. Everything after `#` is a
//! comment, blank lines are ignored.

use std::fmt::Write;

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Labelled {
    pub label: String,
    pub matrix: DMatrix<f64>,
}

pub fn parse(text: &str) -> Result<Vec<Labelled>, String> {
    let mut out = Vec::new();
    let mut label: Option<String> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let flush = |label: &mut Option<String>, rows: &mut Vec<Vec<f64>>, out: &mut Vec<Labelled>| {
        if rows.is_empty() {
            return match label.take() {
                Some(l) => Err(format!("matrix {l} has no rows")),
                None => Ok(()),
            };
        }
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(format!(
                "matrix {} is not square: row {} has {} entries, expected {n}",
                label.as_deref().unwrap_or("A"),
                bad + 1,
                rows[bad].len()
            ));
        }
        let l = label.take().unwrap_or_else(|| default_label(out.len()));
        out.push(Labelled {
            label: l,
            matrix: DMatrix::from_fn(n, n, |r, c| rows[r][c]),
        });
        rows.clear();
        Ok(())
    };
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("matrix") {
            flush(&mut label, &mut rows, &mut out)?;
            let l = rest.trim();
            label = Some(if l.is_empty() { default_label(out.len()) } else { l.to_string() });
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        match row {
            Ok(r) => rows.push(r),
            Err(e) => return Err(format!("line {}: {e}", no + 1)),
        }
    }
    flush(&mut label, &mut rows, &mut out)?;
    if out.is_empty() {
        return Err("no matrix found".into());
    }
    Ok(out)
}

fn default_label(k: usize) -> String {
    if k < 26 {
        ((b'A' + k as u8) as char).to_string()
    } else {
        format!("M{}", k + 1)
    }
}

/// 17 significant digits, enough to round-trip every `f64`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn angle(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12}")
}

pub fn write_rows(out: &mut String, m: &DMatrix<f64>) {
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| num(m[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn write_matrix(out: &mut String, label: &str, m: &DMatrix<f64>) {
    let _ = writeln!(out, "matrix {label}");
    write_rows(out, m);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_labels() {
        let text = "# two matrices\nmatrix first\n1 0\n0 2 # diagonal\n\nmatrix second\n3 1\n1 3\n";
        let d = parse(text).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].label, "first");
        assert_eq!(d[1].matrix[(0, 1)], 1.0);
    }

    #[test]
    fn unlabelled_matrix_is_a() {
        let d = parse("1 2\n2 1\n").unwrap();
        assert_eq!(d[0].label, "A");
    }

    #[test]
    fn rejects_ragged_and_garbage() {
        assert!(parse("1 2\n3\n").is_err());
        assert!(parse("1 x\n2 1\n").is_err());
        assert!(parse("# nothing\n").is_err());
        assert!(parse("matrix A\nmatrix B\n1\n").is_err());
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, std::f64::consts::PI, 1e-300, -0.0, 123456789.123456789] {
            assert_eq!(num(x).parse::<f64>().unwrap(), if x == 0.0 { 0.0 } else { x });
        }
        let m = DMatrix::from_fn(3, 3, |r, c| (r as f64 + 0.1) / (c as f64 + 0.7));
        let mut s = String::new();
        write_matrix(&mut s, "M", &m);
        assert_eq!(parse(&s).unwrap()[0].matrix, m);
    }
}
