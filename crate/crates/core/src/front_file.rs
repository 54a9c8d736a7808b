//! Plain-text front files: one point per line, objective values separated by
//! a single space. Lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pareto::Objectives;

pub fn parse(text: &str, origin: &str) -> Result<Vec<Vec<f64>>> {
    let mut points = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_string(),
            line: idx + 1,
            message,
        };
        let point = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| parse_err(format!("`{tok}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if point.iter().any(|v| !v.is_finite()) {
            return Err(parse_err("non-finite objective value".into()));
        }
        match width {
            None => width = Some(point.len()),
            Some(w) if w != point.len() => {
                return Err(parse_err(format!("expected {w} values, found {}", point.len())))
            }
            _ => {}
        }
        points.push(point);
    }
    Ok(points)
}

pub fn read(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    parse(&text, &path.display().to_string())
}

fn number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Renders points with shortest round-trip float formatting.
pub fn format<T: Objectives>(points: &[T], comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for p in points {
        let row: Vec<String> = p.objectives().iter().map(|&v| number(v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write<T: Objectives>(path: &Path, points: &[T], comment: Option<&str>) -> Result<()> {
    fs::write(path, format(points, comment))?;
    Ok(())
}
