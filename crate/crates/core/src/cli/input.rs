//! Input files: one `key: value` entry per line, `#` starts a comment.
//!
//! Classification files hold `poly:` and `point:`; degeneration files hold `Y:`,
//! `H:`, `F:` and `point:`; group files hold `degree:` and one `perm:` per
//! generator.

use crate::classifier::DegenerationInput;
use crate::permgroup::Permutation;
use crate::poly::{parse_form, parse_point, ComplexPoint, HomogeneousPoly, ParseError};

use super::CliError;

struct Entry<'a> {
    key: String,
    value: &'a str,
    line: usize,
    /// Column of the first character of `value`.
    column: usize,
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(colon) = body.find(':') else {
            return Err(CliError::Input(format!("line {line}: expected `key: value`")));
        };
        let value = &body[colon + 1..];
        let lead = value.len() - value.trim_start().len();
        out.push(Entry {
            key: body[..colon].trim().to_ascii_lowercase(),
            value: value.trim(),
            line,
            column: colon + 2 + lead,
        });
    }
    Ok(out)
}

/// Moves a parse error from value coordinates to file coordinates.
fn located(e: ParseError, entry: &Entry) -> CliError {
    let (line, column) = if e.line <= 1 {
        (entry.line, entry.column + e.column - 1)
    } else {
        (entry.line + e.line - 1, e.column)
    };
    CliError::Input(format!("line {line}, column {column}: {}", e.message))
}

fn single<'a, 'b>(all: &'b [Entry<'a>], key: &str) -> Result<&'b Entry<'a>, CliError> {
    let mut hits = all.iter().filter(|e| e.key == key);
    let first = hits
        .next()
        .ok_or_else(|| CliError::Input(format!("missing `{key}:` entry")))?;
    if let Some(second) = hits.next() {
        return Err(CliError::Input(format!("line {}: duplicate `{key}:` entry", second.line)));
    }
    Ok(first)
}

fn reject_unknown(all: &[Entry], allowed: &[&str]) -> Result<(), CliError> {
    match all.iter().find(|e| !allowed.contains(&e.key.as_str())) {
        Some(e) => Err(CliError::Input(format!(
            "line {}: unknown key `{}` (expected one of {})",
            e.line,
            e.key,
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

fn point(entry: &Entry) -> Result<ComplexPoint, CliError> {
    Ok(ComplexPoint::new(parse_point(entry.value).map_err(|e| located(e, entry))?))
}

fn form(entry: &Entry, num_vars: usize) -> Result<HomogeneousPoly, CliError> {
    parse_form(entry.value, Some(num_vars)).map_err(|e| located(e, entry))
}

/// A hypersurface and a center.
pub fn classify_input(text: &str) -> Result<(HomogeneousPoly, ComplexPoint), CliError> {
    let all = entries(text)?;
    reject_unknown(&all, &["poly", "point"])?;
    let p = point(single(&all, "point")?)?;
    let f = form(single(&all, "poly")?, p.dim())?;
    Ok((f, p))
}

/// The pencil pieces `Y`, `H`, `F` and a center.
pub fn degeneration_input(text: &str) -> Result<DegenerationInput, CliError> {
    let all = entries(text)?;
    reject_unknown(&all, &["y", "h", "f", "point"])?;
    let center = point(single(&all, "point")?)?;
    let n = center.dim();
    Ok(DegenerationInput {
        y: form(single(&all, "y")?, n)?,
        h: form(single(&all, "h")?, n)?,
        f: form(single(&all, "f")?, n)?,
        center,
    })
}

/// Generators in cycle notation with their degree.
pub fn group_input(text: &str, degree_override: Option<usize>) -> Result<(usize, Vec<Permutation>), CliError> {
    let all = entries(text)?;
    reject_unknown(&all, &["degree", "perm"])?;
    let degree = match (degree_override, all.iter().find(|e| e.key == "degree")) {
        (Some(d), _) => d,
        (None, Some(e)) => e
            .value
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("line {}: degree must be a positive integer", e.line)))?,
        (None, None) => return Err(CliError::Input("missing `degree:` entry or --degree flag".into())),
    };
    if degree == 0 {
        return Err(CliError::Input("degree must be positive".into()));
    }
    let perms = all
        .iter()
        .filter(|e| e.key == "perm")
        .map(|e| {
            Permutation::parse(e.value, degree).map_err(|err| CliError::Input(format!("line {}: {err}", e.line)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((degree, perms))
}
