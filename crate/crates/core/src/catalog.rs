//! Named groups: the built-in catalog and a plain-text catalog format.
//!
//! ```text
//! # comment
//! [Z3]
//! names = e a b        (optional)
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! Each entry starts with a bracketed name and continues with the
//! multiplication table, one row per line, until the next entry.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::group::{FiniteGroup, NotAGroup};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCatalogEntry {
    pub name: String,
    pub group: FiniteGroup,
    pub element_names: Option<Vec<String>>,
}

impl GroupCatalogEntry {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Index of an element given by name or by number.
    pub fn element(&self, token: &str) -> Option<usize> {
        if let Some(names) = &self.element_names {
            if let Some(k) = names.iter().position(|n| n == token) {
                return Some(k);
            }
        }
        token.parse::<usize>().ok().filter(|&k| k < self.order())
    }
}

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("entry {name}: {source}")]
    NotAGroup { name: String, source: NotAGroup },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse { line, column, message: message.into() }
}

struct Pending {
    name: String,
    line: usize,
    names: Option<Vec<String>>,
    rows: Vec<Vec<usize>>,
}

impl Pending {
    fn finish(self) -> Result<GroupCatalogEntry, CatalogError> {
        if self.rows.is_empty() {
            return Err(parse_error(self.line, 1, format!("entry {} has no table", self.name)));
        }
        let group = FiniteGroup::from_table(&self.rows)
            .map_err(|source| CatalogError::NotAGroup { name: self.name.clone(), source })?;
        if let Some(n) = &self.names {
            if n.len() != group.order() {
                return Err(parse_error(self.line, 1, format!("entry {} names {} elements, order is {}", self.name, n.len(), group.order())));
            }
        }
        Ok(GroupCatalogEntry { name: self.name, group, element_names: self.names })
    }
}

pub fn parse_catalog(src: &str) -> Result<Vec<GroupCatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("");
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = text.len() - text.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parse_error(line, indent + trimmed.len() + 1, "expected ']'"));
            };
            let name = name.trim();
            if name.is_empty() {
                return Err(parse_error(line, indent + 2, "empty entry name"));
            }
            if let Some(p) = pending.take() {
                out.push(p.finish()?);
            }
            pending = Some(Pending { name: name.to_string(), line, names: None, rows: Vec::new() });
            continue;
        }
        let Some(p) = pending.as_mut() else {
            return Err(parse_error(line, indent + 1, "table row before any [name] header"));
        };
        if let Some(rest) = trimmed.strip_prefix("names") {
            let Some(list) = rest.trim_start().strip_prefix('=') else {
                return Err(parse_error(line, indent + 6, "expected '=' after names"));
            };
            if !p.rows.is_empty() {
                return Err(parse_error(line, indent + 1, "names must precede the table"));
            }
            p.names = Some(list.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for tok in text.split_inclusive(char::is_whitespace) {
            let word = tok.trim();
            if !word.is_empty() {
                let value = word
                    .parse::<usize>()
                    .ok()
                    .or_else(|| p.names.as_ref().and_then(|n| n.iter().position(|x| x == word)));
                match value {
                    Some(v) => row.push(v),
                    None => return Err(parse_error(line, col + 1, format!("unrecognised table entry '{word}'"))),
                }
            }
            col += tok.len();
        }
        if let Some(first) = p.rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(line, 1, format!("row has {} entries, expected {}", row.len(), first.len())));
            }
        }
        p.rows.push(row);
    }
    if let Some(p) = pending.take() {
        out.push(p.finish()?);
    }
    Ok(out)
}

pub fn load_catalog(path: &Path) -> Result<Vec<GroupCatalogEntry>, CatalogError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_catalog(&src)
}

pub fn render_catalog(entries: &[GroupCatalogEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(out, "[{}]", e.name);
        if let Some(n) = &e.element_names {
            let _ = writeln!(out, "names = {}", n.join(" "));
        }
        for row in e.group.table_rows() {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out.push('\n');
    }
    out
}

/// The fifteen built-in groups of order at most 12.
pub fn builtin_catalog() -> Vec<GroupCatalogEntry> {
    let entry = |name: &str, group: FiniteGroup| GroupCatalogEntry { name: name.to_string(), group, element_names: None };
    vec![
        entry("trivial", FiniteGroup::trivial()),
        entry("Z2", FiniteGroup::cyclic(2)),
        entry("Z3", FiniteGroup::cyclic(3)),
        entry("Z4", FiniteGroup::cyclic(4)),
        entry("Z2xZ2", FiniteGroup::abelian(&[2, 2])),
        entry("Z5", FiniteGroup::cyclic(5)),
        entry("Z6", FiniteGroup::cyclic(6)),
        entry("S3", FiniteGroup::symmetric3()),
        entry("Z8", FiniteGroup::cyclic(8)),
        entry("Z4xZ2", FiniteGroup::abelian(&[4, 2])),
        entry("Z2^3", FiniteGroup::abelian(&[2, 2, 2])),
        entry("D4", FiniteGroup::dihedral(4)),
        entry("Q8", FiniteGroup::quaternion8()),
        entry("Z12", FiniteGroup::cyclic(12)),
        entry("A4", FiniteGroup::alternating4()),
    ]
}

/// Case-insensitive spelling with `×` as `x` and `Z2xZ2xZ2`, `Z2³` as `Z2^3`.
fn normalise(name: &str) -> String {
    let n = name.trim().to_lowercase().replace('×', "x").replace('³', "^3");
    if n == "z2xz2xz2" { "z2^3".to_string() } else { n }
}

pub fn find<'a>(entries: &'a [GroupCatalogEntry], name: &str) -> Option<&'a GroupCatalogEntry> {
    let want = normalise(name);
    entries.iter().find(|e| normalise(&e.name) == want)
}
