//! Reader and writer for the APX (Aspartix) argumentation exchange format:
//!
//! ```text
//! % comment
//! arg(a). arg(b).
//! att(a,b).
//! ```

use std::fmt::Write as _;

use super::{AfError, ArgumentId, AttackGraph};

/// Parses APX text. Several statements may share a line; `%` starts a
/// comment running to the end of the line. Attacks may only reference
/// arguments declared somewhere in the file.
pub fn parse_apx(text: &str) -> Result<AttackGraph, AfError> {
    let mut graph = AttackGraph::new();
    let mut attacks: Vec<(usize, ArgumentId, ArgumentId)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('%').next().unwrap_or("");
        let mut rest = line.trim_start();
        while !rest.is_empty() {
            let (stmt, tail) = statement(rest).map_err(|message| AfError::ApxSyntax { line: line_no, message })?;
            match stmt {
                Statement::Arg(a) => {
                    graph.add_argument(a);
                }
                Statement::Att(a, b) => attacks.push((line_no, a, b)),
            }
            rest = tail.trim_start();
        }
    }

    for (line, a, b) in attacks {
        for end in [&a, &b] {
            if !graph.contains(end.as_str()) {
                return Err(AfError::ApxUndeclared {
                    line,
                    argument: end.clone(),
                });
            }
        }
        graph.add_attack(a, b)?;
    }
    Ok(graph)
}

/// Writes `graph` as APX, one statement per line, arguments first.
pub fn to_apx(graph: &AttackGraph) -> String {
    let mut out = String::new();
    for a in graph.arguments() {
        writeln!(out, "arg({a}).").unwrap();
    }
    for (a, b) in graph.attacks() {
        writeln!(out, "att({a},{b}).").unwrap();
    }
    out
}

enum Statement {
    Arg(ArgumentId),
    Att(ArgumentId, ArgumentId),
}

fn statement(input: &str) -> Result<(Statement, &str), String> {
    let open = input
        .find('(')
        .ok_or_else(|| format!("expected `(` in `{}`", input.trim()))?;
    let keyword = input[..open].trim();
    let close = input[open..]
        .find(')')
        .map(|i| i + open)
        .ok_or_else(|| format!("unclosed `(` after `{keyword}`"))?;
    let args: Vec<&str> = input[open + 1..close].split(',').map(str::trim).collect();
    let after = input[close + 1..].trim_start();
    let tail = after
        .strip_prefix('.')
        .ok_or_else(|| format!("expected `.` after `{keyword}(...)`"))?;

    let ids = args.iter().map(|a| identifier(a)).collect::<Result<Vec<_>, _>>()?;
    let stmt = match (keyword, ids.as_slice()) {
        ("arg", [a]) => Statement::Arg(a.clone()),
        ("att", [a, b]) => Statement::Att(a.clone(), b.clone()),
        ("arg", _) => return Err(format!("arg expects 1 argument, got {}", ids.len())),
        ("att", _) => return Err(format!("att expects 2 arguments, got {}", ids.len())),
        (other, _) => return Err(format!("unknown statement `{other}`")),
    };
    Ok((stmt, tail))
}

fn identifier(s: &str) -> Result<ArgumentId, String> {
    if s.is_empty() {
        return Err("empty argument name".to_string());
    }
    if let Some(bad) = s.chars().find(|c| c.is_whitespace() || "().,%\"".contains(*c)) {
        return Err(format!("invalid character `{bad}` in argument name `{s}`"));
    }
    ArgumentId::new(s).map_err(|e| e.to_string())
}
