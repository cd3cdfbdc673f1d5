use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ArgumentationFramework;
use crate::error::AfError;

/// Input file formats.
///
/// `Apx` is the Prolog-style `arg(x).` / `att(x,y).` format; `Iccma` is the
/// numeric `p af <n>` format with one 1-based `i j` attack per line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Apx,
    Iccma,
}

impl Format {
    /// Guesses the format from the first significant line.
    pub fn detect(text: &str) -> Format {
        let first = text
            .lines()
            .map(strip_comment)
            .map(str::trim)
            .find(|l| !l.is_empty());
        match first {
            Some(l) if l.starts_with("p ") => Format::Iccma,
            _ => Format::Apx,
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Apx => "apx",
            Format::Iccma => "iccma",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "apx" => Ok(Format::Apx),
            "iccma" | "af" | "i23" => Ok(Format::Iccma),
            other => Err(format!("unknown format `{other}` (expected apx or iccma)")),
        }
    }
}

pub fn parse(text: &str, format: Format) -> Result<ArgumentationFramework, AfError> {
    match format {
        Format::Apx => parse_apx(text),
        Format::Iccma => parse_iccma(text),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn syntax(line: usize, message: impl Into<String>) -> AfError {
    AfError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_apx(text: &str) -> Result<ArgumentationFramework, AfError> {
    let mut names: Vec<String> = Vec::new();
    let mut declared = std::collections::HashMap::new();
    let mut raw_attacks: Vec<(usize, String, String)> = Vec::new();

    let mut pending = String::new();
    let mut pending_line = 0;
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        for ch in strip_comment(line).chars() {
            if ch == '.' {
                let stmt = std::mem::take(&mut pending);
                let stmt = stmt.trim();
                if stmt.is_empty() {
                    return Err(syntax(lineno, "empty statement"));
                }
                let (pred, args) = split_statement(stmt, pending_line.max(1))?;
                match (pred, args.as_slice()) {
                    ("arg", [name]) => {
                        if !declared.contains_key(name) {
                            declared.insert(name.clone(), names.len());
                            names.push(name.clone());
                        }
                    }
                    ("att", [from, to]) => raw_attacks.push((pending_line, from.clone(), to.clone())),
                    ("arg", _) | ("att", _) => {
                        return Err(syntax(pending_line, format!("wrong arity for `{pred}`")));
                    }
                    _ => return Err(syntax(pending_line, format!("unknown predicate `{pred}`"))),
                }
            } else {
                if pending.trim().is_empty() && !ch.is_whitespace() {
                    pending_line = lineno;
                }
                pending.push(ch);
            }
        }
        pending.push(' ');
    }
    if !pending.trim().is_empty() {
        return Err(syntax(pending_line, "statement not terminated by `.`"));
    }

    let mut attacks = Vec::with_capacity(raw_attacks.len());
    for (line, from, to) in raw_attacks {
        let lookup = |name: &str| {
            declared
                .get(name)
                .copied()
                .ok_or_else(|| syntax(line, format!("attack references undeclared argument `{name}`")))
        };
        attacks.push((lookup(&from)?, lookup(&to)?));
    }
    ArgumentationFramework::new(names, attacks)
}

fn split_statement(stmt: &str, line: usize) -> Result<(&str, Vec<String>), AfError> {
    let open = stmt
        .find('(')
        .ok_or_else(|| syntax(line, format!("expected `(` in `{stmt}`")))?;
    if !stmt.ends_with(')') {
        return Err(syntax(line, format!("expected `)` at end of `{stmt}`")));
    }
    let pred = stmt[..open].trim();
    let inner = &stmt[open + 1..stmt.len() - 1];
    let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
    if args.iter().any(|a| a.is_empty() || a.contains(['(', ')'])) {
        return Err(syntax(line, format!("malformed arguments in `{stmt}`")));
    }
    Ok((pred, args))
}

pub fn parse_iccma(text: &str) -> Result<ArgumentationFramework, AfError> {
    let mut n: Option<usize> = None;
    let mut attacks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (n, fields.as_slice()) {
            (None, ["p", "af", count]) => {
                n = Some(
                    count
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad argument count `{count}`")))?,
                );
            }
            (None, _) => return Err(syntax(lineno, "expected header `p af <n>`")),
            (Some(_), ["p", ..]) => return Err(syntax(lineno, "duplicate header")),
            (Some(n), [i, j]) => {
                let parse_idx = |s: &str| -> Result<usize, AfError> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad argument index `{s}`")))?;
                    if v == 0 || v > n {
                        return Err(syntax(lineno, format!("argument {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                attacks.push((parse_idx(i)?, parse_idx(j)?));
            }
            (Some(_), _) => return Err(syntax(lineno, format!("expected `<i> <j>`, got `{line}`"))),
        }
    }
    let n = n.ok_or_else(|| syntax(1, "missing header `p af <n>`"))?;
    ArgumentationFramework::new((1..=n).map(|i| i.to_string()).collect(), attacks)
}

pub fn write_apx(af: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for name in af.names() {
        writeln!(out, "arg({name}).").unwrap();
    }
    for &(a, b) in af.attacks() {
        writeln!(out, "att({},{}).", af.name(a), af.name(b)).unwrap();
    }
    out
}

/// Numeric format; argument names are replaced by their 1-based positions.
pub fn write_iccma(af: &ArgumentationFramework) -> String {
    let mut out = format!("p af {}\n", af.len());
    for &(a, b) in af.attacks() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}
