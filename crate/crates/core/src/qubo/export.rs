use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::QuboProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadTerm {
    pub i: usize,
    pub j: usize,
    pub c: i64,
}

/// Serializable snapshot of a problem. Quadratic terms are upper-triangular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuboJson {
    pub offset: i64,
    pub linear: Vec<i64>,
    pub quadratic: Vec<QuadTerm>,
    pub roles: Vec<String>,
}

impl QuboProblem {
    /// Upper-triangular coefficient list: a `# offset <c>` header, then one
    /// `i j c` line per nonzero coefficient with `i <= j` (diagonal = linear).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# vars {}", self.num_vars()).unwrap();
        writeln!(out, "# offset {}", self.offset()).unwrap();
        let mut quad = self.quadratic_terms().peekable();
        for i in 0..self.num_vars() {
            if self.linear(i) != 0 {
                writeln!(out, "{i} {i} {}", self.linear(i)).unwrap();
            }
            while let Some(&(a, j, c)) = quad.peek() {
                if a != i {
                    break;
                }
                writeln!(out, "{i} {j} {c}").unwrap();
                quad.next();
            }
        }
        out
    }

    /// Reads the format written by [`QuboProblem::to_text`] into an unlabelled problem.
    pub fn from_text(text: &str) -> Result<QuboProblem, String> {
        let mut n = 0usize;
        let mut offset = 0i64;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || format!("line {}: cannot parse `{line}`", lineno + 1);
            if let Some(rest) = line.strip_prefix('#') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                match fields.as_slice() {
                    ["vars", v] => n = v.parse().map_err(|_| bad())?,
                    ["offset", v] => offset = v.parse().map_err(|_| bad())?,
                    _ => {}
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [i, j, c] = fields.as_slice() else {
                return Err(bad());
            };
            let (i, j, c): (usize, usize, i64) = (
                i.parse().map_err(|_| bad())?,
                j.parse().map_err(|_| bad())?,
                c.parse().map_err(|_| bad())?,
            );
            n = n.max(i + 1).max(j + 1);
            entries.push((i, j, c));
        }
        let mut q = QuboProblem::with_vars(n);
        q.add_offset(offset);
        for (i, j, c) in entries {
            q.add_quadratic(i, j, c);
        }
        Ok(q)
    }

    pub fn to_json(&self) -> QuboJson {
        QuboJson {
            offset: self.offset(),
            linear: (0..self.num_vars()).map(|i| self.linear(i)).collect(),
            quadratic: self.quadratic_terms().map(|(i, j, c)| QuadTerm { i, j, c }).collect(),
            roles: self.registry().roles().iter().map(ToString::to_string).collect(),
        }
    }
}
