//! Text format for coset-ring sets.
//!
//! ```text
//! # comment
//! dim 2                  # ambient dimension (optional if a vector fixes it)
//! split 1                # first-coordinate dimension for graph decomposition
//! even := (0,0) + span{(2,2)}
//! odd  := (1,2) + span{(2,2)} minus { (1,2) + span{(4,4)}, (3,4) }
//! ```
//!
//! One piece per line: `[name :=] coset [minus { coset, ... }]`, where a coset
//! is `vector [+ span{vector; vector; ...}]`. Vectors are `(a,b,...)`; in one
//! dimension a bare integer is also accepted. An empty `span{}` is allowed.

use thiserror::Error;

use super::{CosetRingSet, IntLattice, LatticeCoset, Piece};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ExprError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parsed lattice expression file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeExpr {
    pub dim: usize,
    pub split: Option<usize>,
    pub names: Vec<Option<String>>,
    pub set: CosetRingSet<i64>,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line }
    }

    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError { line: self.line, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(kw.chars()) {
            let boundary = self.chars.get(end).is_none_or(|c| !c.is_alphanumeric() && *c != '_');
            if boundary {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(start).is_some_and(|c| c.is_alphabetic() || *c == '_') {
            return None;
        }
        let mut end = start;
        while self.chars.get(end).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            end += 1;
        }
        self.pos = end;
        Some(self.chars[start..end].iter().collect())
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        if matches!(self.chars.get(end), Some('-') | Some('+')) {
            end += 1;
        }
        while self.chars.get(end).is_some_and(|c| c.is_ascii_digit()) {
            end += 1;
        }
        let text: String = self.chars[start..end].iter().collect();
        let v = text.parse::<i64>().map_err(|_| self.err("expected an integer"))?;
        self.pos = end;
        Ok(v)
    }

    fn vector(&mut self) -> Result<Vec<i64>, ExprError> {
        if self.eat('(') {
            let mut v = vec![self.integer()?];
            while self.eat(',') {
                v.push(self.integer()?);
            }
            self.expect(')')?;
            Ok(v)
        } else {
            Ok(vec![self.integer()?])
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

struct Parser {
    dim: Option<usize>,
}

impl Parser {
    fn check(&mut self, cur: &Cursor, v: &[i64]) -> Result<(), ExprError> {
        match self.dim {
            None => {
                self.dim = Some(v.len());
                Ok(())
            }
            Some(d) if d == v.len() => Ok(()),
            Some(d) => Err(cur.err(format!("vector of length {} in dimension {d}", v.len()))),
        }
    }

    fn coset(&mut self, cur: &mut Cursor) -> Result<LatticeCoset<i64>, ExprError> {
        let offset = cur.vector()?;
        self.check(cur, &offset)?;
        let mut gens = Vec::new();
        if cur.eat('+') {
            if !cur.keyword("span") {
                return Err(cur.err("expected 'span'"));
            }
            cur.expect('{')?;
            if !cur.eat('}') {
                loop {
                    let g = cur.vector()?;
                    self.check(cur, &g)?;
                    gens.push(g);
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(';')?;
                }
            }
        }
        Ok(LatticeCoset::new(offset.clone(), IntLattice::canonicalize(offset.len(), &gens)))
    }

    fn piece(&mut self, cur: &mut Cursor) -> Result<(Option<String>, Piece<i64>), ExprError> {
        let save = cur.pos;
        let mut name = None;
        if let Some(id) = cur.ident() {
            if cur.eat(':') {
                cur.expect('=')?;
                name = Some(id);
            } else {
                cur.pos = save;
            }
        }
        let base = self.coset(cur)?;
        let mut holes = Vec::new();
        if cur.keyword("minus") {
            cur.expect('{')?;
            if !cur.eat('}') {
                loop {
                    holes.push(self.coset(cur)?);
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
        }
        if !cur.at_end() {
            return Err(cur.err("unexpected trailing input"));
        }
        Ok((name, Piece::new(base, holes)))
    }
}

pub fn parse(src: &str) -> Result<LatticeExpr, ExprError> {
    let mut p = Parser { dim: None };
    let mut split = None;
    let mut names = Vec::new();
    let mut pieces = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(text, i + 1);
        if cur.at_end() {
            continue;
        }
        let is_dim = cur.keyword("dim");
        if is_dim || cur.keyword("split") {
            let v = cur.integer()?;
            if v < 0 {
                return Err(cur.err("expected a nonnegative integer"));
            }
            if !cur.at_end() {
                return Err(cur.err("unexpected trailing input"));
            }
            if is_dim {
                if !pieces.is_empty() || p.dim.is_some_and(|d| d != v as usize) {
                    return Err(cur.err("'dim' must precede all pieces"));
                }
                p.dim = Some(v as usize);
            } else {
                split = Some(v as usize);
            }
            continue;
        }
        let (name, piece) = p.piece(&mut cur)?;
        names.push(name);
        pieces.push(piece);
    }
    let dim = p.dim.unwrap_or(1);
    let set = CosetRingSet::new(dim, pieces).expect("dimensions checked while parsing");
    if let Some(s) = split {
        if s > dim {
            return Err(ExprError { line: 0, column: 0, message: format!("split {s} exceeds dimension {dim}") });
        }
    }
    Ok(LatticeExpr { dim, split, names, set })
}
