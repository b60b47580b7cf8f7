//! Line-oriented algebra description files.
//!
//! ```text
//! # comments and blank lines are ignored
//! name heis3
//! dim 3
//! tag source example
//! bracket 1 2 3 1
//! metric
//! 1 0 0
//! 0 1 0
//! 0 0 1
//! ```
//!
//! `bracket i j k v` sets `c[i][j][k] = v` (1-based indices) and implies
//! `c[j][i][k] = -v`. The `metric` block holds `dim` rows of `dim` numbers
//! and defaults to the identity. `tag key value` lines carry free-form
//! metadata. [`AlgebraSpecFile::write`] emits the canonical form: brackets
//! with `i < j` sorted by `(i, j, k)`, numbers in shortest round-trip notation.

use std::fmt::Write as _;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::metric::MetricLieAlgebra;
use crate::tol::Tolerances;
use crate::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpecFile {
    pub name: String,
    pub dim: usize,
    /// `(i, j, k, value)`, 0-based, `i < j`.
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub metric: Option<Matrix>,
    pub metadata: Vec<(String, String)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("'{tok}' is not finite")));
    }
    Ok(v)
}

fn parse_index(tok: &str, dim: usize, line: usize) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is not an index")))?;
    if i == 0 || i > dim {
        return Err(parse_err(line, format!("index {i} out of range 1..={dim}")));
    }
    Ok(i - 1)
}

impl AlgebraSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut dim: Option<usize> = None;
        let mut brackets: Vec<(usize, usize, usize, f64)> = Vec::new();
        let mut metric_rows: Option<Vec<Vec<f64>>> = None;
        let mut metadata = Vec::new();
        let mut in_metric = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().expect("non-empty line");
            if in_metric {
                let rows = metric_rows.as_mut().expect("metric block open");
                let n = dim.expect("dim checked before metric");
                if head.parse::<f64>().is_ok() || head.starts_with(['-', '+', '.']) {
                    let row = line
                        .split_whitespace()
                        .map(|t| parse_f64(t, line_no))
                        .collect::<Result<Vec<_>>>()?;
                    if row.len() != n {
                        return Err(parse_err(
                            line_no,
                            format!("metric row has {} entries, expected {n}", row.len()),
                        ));
                    }
                    rows.push(row);
                    if rows.len() == n {
                        in_metric = false;
                    }
                    continue;
                }
                return Err(parse_err(
                    line_no,
                    format!("metric block has {} rows, expected {n}", rows.len()),
                ));
            }
            match head {
                "name" => {
                    let rest = line["name".len()..].trim();
                    if rest.is_empty() {
                        return Err(parse_err(line_no, "missing name"));
                    }
                    if name.replace(rest.to_string()).is_some() {
                        return Err(parse_err(line_no, "duplicate name"));
                    }
                }
                "dim" => {
                    let tok = toks.next().ok_or_else(|| parse_err(line_no, "missing dimension"))?;
                    let d: usize = tok
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("'{tok}' is not a dimension")))?;
                    if d == 0 {
                        return Err(parse_err(line_no, "dimension must be positive"));
                    }
                    if dim.replace(d).is_some() {
                        return Err(parse_err(line_no, "duplicate dim"));
                    }
                }
                "tag" => {
                    let key = toks.next().ok_or_else(|| parse_err(line_no, "missing tag key"))?;
                    let value = toks.collect::<Vec<_>>().join(" ");
                    metadata.push((key.to_string(), value));
                }
                "bracket" => {
                    let n = dim.ok_or_else(|| parse_err(line_no, "bracket before dim"))?;
                    let parts: Vec<&str> = toks.collect();
                    if parts.len() != 4 {
                        return Err(parse_err(line_no, "expected 'bracket i j k value'"));
                    }
                    let i = parse_index(parts[0], n, line_no)?;
                    let j = parse_index(parts[1], n, line_no)?;
                    let k = parse_index(parts[2], n, line_no)?;
                    let v = parse_f64(parts[3], line_no)?;
                    if i == j {
                        if v != 0.0 {
                            return Err(parse_err(line_no, format!("[e{0}, e{0}] must vanish", i + 1)));
                        }
                        continue;
                    }
                    let (i, j, v) = if i < j { (i, j, v) } else { (j, i, -v) };
                    if brackets.iter().any(|&(a, b, c, _)| (a, b, c) == (i, j, k)) {
                        return Err(parse_err(
                            line_no,
                            format!("duplicate bracket entry ({}, {}, {})", i + 1, j + 1, k + 1),
                        ));
                    }
                    brackets.push((i, j, k, v));
                }
                "metric" => {
                    if dim.is_none() {
                        return Err(parse_err(line_no, "metric before dim"));
                    }
                    if metric_rows.is_some() {
                        return Err(parse_err(line_no, "duplicate metric block"));
                    }
                    metric_rows = Some(Vec::new());
                    in_metric = true;
                }
                other => return Err(parse_err(line_no, format!("unknown keyword '{other}'"))),
            }
        }
        if in_metric {
            return Err(parse_err(text.lines().count(), "metric block is incomplete"));
        }
        let name = name.ok_or_else(|| parse_err(0, "missing 'name' line"))?;
        let dim = dim.ok_or_else(|| parse_err(0, "missing 'dim' line"))?;
        brackets.sort_by_key(|b| (b.0, b.1, b.2));
        let metric = metric_rows.map(|rows| Matrix::from_fn(dim, dim, |r, c| rows[r][c]));
        Ok(Self {
            name,
            dim,
            brackets,
            metric,
            metadata,
        })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name {}", self.name).unwrap();
        writeln!(out, "dim {}", self.dim).unwrap();
        for (k, v) in &self.metadata {
            if v.is_empty() {
                writeln!(out, "tag {k}").unwrap();
            } else {
                writeln!(out, "tag {k} {v}").unwrap();
            }
        }
        for &(i, j, k, v) in &self.brackets {
            writeln!(out, "bracket {} {} {} {v}", i + 1, j + 1, k + 1).unwrap();
        }
        if let Some(g) = &self.metric {
            out.push_str("metric\n");
            for r in 0..self.dim {
                let row: Vec<String> = (0..self.dim).map(|c| g[(r, c)].to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        out
    }

    /// Validated metric Lie algebra; fails on Jacobi violations and non-SPD metrics.
    pub fn to_metric_lie_algebra(&self, tol: &Tolerances) -> Result<MetricLieAlgebra> {
        let alg = LieAlgebra::from_brackets(self.dim, &self.brackets)?;
        alg.validate(tol)?;
        match &self.metric {
            Some(g) => MetricLieAlgebra::new(alg, g.clone()),
            None => Ok(MetricLieAlgebra::with_identity(alg)),
        }
    }

    pub fn from_metric_lie_algebra(name: &str, mla: &MetricLieAlgebra) -> Self {
        let n = mla.dim();
        let metric = (mla.metric() != &Matrix::identity(n, n)).then(|| mla.metric().clone());
        Self {
            name: name.to_string(),
            dim: n,
            brackets: mla.alg().nonzero_brackets(),
            metric,
            metadata: Vec::new(),
        }
    }
}

/// Reads a bare metric: `dim` rows of `dim` whitespace-separated numbers.
pub fn parse_metric(text: &str, dim: usize) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_f64(t, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(parse_err(
                idx + 1,
                format!("metric row has {} entries, expected {dim}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(parse_err(0, format!("metric has {} rows, expected {dim}", rows.len())));
    }
    Ok(Matrix::from_fn(dim, dim, |r, c| rows[r][c]))
}
