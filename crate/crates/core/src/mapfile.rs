//! Text descriptions of maps `A(G) → A(H)`.
//!
//! A partial map `α: Y ⊆ H → G` lists its domain and one pair per line:
//!
//! ```text
//! map Z2 -> Z4
//! domain 0 1
//! 0 -> 0
//! 1 -> 2
//! ```
//!
//! An arbitrary linear map gives its matrix instead, one row per `h ∈ H`
//! and one column per `s ∈ G`, so that `(Φu)(h) = Σ_s M[h][s]·u(s)`:
//!
//! ```text
//! map Z2 -> Z2
//! matrix
//! 1 1
//! 0 0
//! ```

use thiserror::Error;

use crate::catalog::{find, GroupCatalogEntry};
use crate::cb::LinearFunctionMap;
use crate::group::PartialMap;
use crate::lab::build_phi_alpha;
use crate::linalg::CMat;
use crate::scalar::cre;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapFileError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: unknown group {name}")]
    UnknownGroup { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Partial(PartialMap),
    Matrix(LinearFunctionMap<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapFile {
    /// Name of `H`, the domain group of `α`.
    pub source: String,
    /// Name of `G`.
    pub target: String,
    pub spec: MapSpec,
}

impl MapFile {
    pub fn linear_map(&self) -> LinearFunctionMap<f64> {
        match &self.spec {
            MapSpec::Partial(pm) => build_phi_alpha(pm),
            MapSpec::Matrix(m) => m.clone(),
        }
    }

    pub fn partial_map(&self) -> Option<&PartialMap> {
        match &self.spec {
            MapSpec::Partial(pm) => Some(pm),
            MapSpec::Matrix(_) => None,
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> MapFileError {
    MapFileError::Parse { line, column, message: message.into() }
}

/// Non-comment lines with their 1-based numbers and the column of their first character.
fn content_lines(src: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    src.lines().enumerate().filter_map(|(k, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        let t = text.trim();
        (!t.is_empty()).then(|| (k + 1, text.len() - text.trim_start().len() + 1, t))
    })
}

pub fn parse_map_file(src: &str, catalog: &[GroupCatalogEntry]) -> Result<MapFile, MapFileError> {
    let mut lines = content_lines(src);
    let Some((hl, hc, header)) = lines.next() else {
        return Err(err(1, 1, "empty map file"));
    };
    let Some(rest) = header.strip_prefix("map ") else {
        return Err(err(hl, hc, "expected 'map <H> -> <G>'"));
    };
    let Some((h_name, g_name)) = rest.split_once("->") else {
        return Err(err(hl, hc + 4, "expected '->' between group names"));
    };
    let (h_name, g_name) = (h_name.trim(), g_name.trim());
    let h = find(catalog, h_name).ok_or_else(|| MapFileError::UnknownGroup { line: hl, name: h_name.into() })?;
    let g = find(catalog, g_name).ok_or_else(|| MapFileError::UnknownGroup { line: hl, name: g_name.into() })?;

    let Some((kl, kc, kind)) = lines.next() else {
        return Err(err(hl + 1, 1, "expected a 'domain' or 'matrix' line"));
    };
    let spec = if kind == "matrix" {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (l, c, text) in lines {
            let row = text
                .split_whitespace()
                .map(|w| w.parse::<f64>().map_err(|_| err(l, c, format!("not a number: '{w}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != g.order() {
                return Err(err(l, c, format!("row has {} entries, expected {}", row.len(), g.order())));
            }
            rows.push(row);
        }
        if rows.len() != h.order() {
            return Err(err(kl, kc, format!("matrix has {} rows, expected {}", rows.len(), h.order())));
        }
        let m = CMat::from_fn(h.order(), g.order(), |r, c| cre(rows[r][c]));
        MapSpec::Matrix(LinearFunctionMap::new(&g.group, &h.group, m).expect("shape checked"))
    } else if let Some(rest) = kind.strip_prefix("domain") {
        let domain = rest
            .split_whitespace()
            .map(|w| h.element(w).ok_or_else(|| err(kl, kc, format!("'{w}' is not an element of {}", h.name))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut pairs = Vec::new();
        for (l, c, text) in lines {
            let Some((a, b)) = text.split_once("->") else {
                return Err(err(l, c, "expected '<h> -> <g>'"));
            };
            let x = h.element(a.trim()).ok_or_else(|| err(l, c, format!("'{}' is not an element of {}", a.trim(), h.name)))?;
            let y = g.element(b.trim()).ok_or_else(|| err(l, c, format!("'{}' is not an element of {}", b.trim(), g.name)))?;
            if !domain.contains(&x) {
                return Err(err(l, c, format!("{x} is not in the domain line")));
            }
            if pairs.iter().any(|&(p, _)| p == x) {
                return Err(err(l, c, format!("{x} is mapped twice")));
            }
            pairs.push((x, y));
        }
        if let Some(&missing) = domain.iter().find(|d| !pairs.iter().any(|&(p, _)| p == **d)) {
            return Err(err(kl, kc, format!("domain element {missing} has no image")));
        }
        MapSpec::Partial(PartialMap::from_pairs(&h.group, &g.group, &pairs).map_err(|e| err(kl, kc, e.to_string()))?)
    } else {
        return Err(err(kl, kc, "expected a 'domain' or 'matrix' line"));
    };
    Ok(MapFile { source: h.name.clone(), target: g.name.clone(), spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;

    #[test]
    fn partial_map_file() {
        let f = parse_map_file("# doubling\nmap Z2 -> Z4\ndomain 0 1\n0 -> 0\n1 -> 2\n", &builtin_catalog()).unwrap();
        let pm = f.partial_map().unwrap();
        assert_eq!(pm.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 2)]);
        assert_eq!(f.linear_map().matrix()[(1, 2)], cre(1.0));
    }

    #[test]
    fn empty_domain_is_allowed() {
        let f = parse_map_file("map Z2 -> Z3\ndomain\n", &builtin_catalog()).unwrap();
        assert!(f.partial_map().unwrap().domain().is_empty());
    }

    #[test]
    fn matrix_file() {
        let f = parse_map_file("map Z2 -> Z2\nmatrix\n1 1\n0 0\n", &builtin_catalog()).unwrap();
        assert!(f.partial_map().is_none());
        assert_eq!(f.linear_map().matrix()[(0, 1)], cre(1.0));
    }

    #[test]
    fn errors_carry_positions() {
        let c = builtin_catalog();
        assert!(matches!(parse_map_file("map Z2 -> Z7\n", &c), Err(MapFileError::UnknownGroup { line: 1, .. })));
        assert!(matches!(
            parse_map_file("map Z2 -> Z4\ndomain 0\n1 -> 2\n", &c),
            Err(MapFileError::Parse { line: 3, column: 1, .. })
        ));
        assert!(matches!(parse_map_file("map Z2 -> Z4\ndomain 0 1\n0 -> 0\n", &c), Err(MapFileError::Parse { line: 2, .. })));
        assert!(matches!(parse_map_file("map Z2 -> Z2\nmatrix\n1 1\n", &c), Err(MapFileError::Parse { line: 2, .. })));
    }
}
