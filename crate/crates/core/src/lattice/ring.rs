use super::{check_dim, covering_witness, Coverage, LatticeCoset, LatticeError};
use crate::scalar::Int;

/// `base \ ⋃ holes`, with every hole a subcoset of the base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece<T: Int = i64> {
    base: LatticeCoset<T>,
    holes: Vec<LatticeCoset<T>>,
}

impl<T: Int> Piece<T> {
    /// Holes are intersected with the base first, so any cosets may be passed.
    pub fn new(base: LatticeCoset<T>, holes: impl IntoIterator<Item = LatticeCoset<T>>) -> Self {
        let mut hs: Vec<LatticeCoset<T>> = Vec::new();
        for h in holes {
            if let Some(h) = base.intersect(&h) {
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
        }
        Piece { base, holes: hs }
    }

    pub fn coset(base: LatticeCoset<T>) -> Self {
        Piece { base, holes: Vec::new() }
    }

    pub fn base(&self) -> &LatticeCoset<T> {
        &self.base
    }

    pub fn holes(&self) -> &[LatticeCoset<T>] {
        &self.holes
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub(crate) fn has(&self, x: &[T]) -> bool {
        self.base.has(x) && !self.holes.iter().any(|h| h.has(x))
    }

    pub fn contains(&self, x: &[T]) -> Result<bool, LatticeError> {
        check_dim(self.dim(), x.len())?;
        Ok(self.has(x))
    }

    /// A point of the piece, or `None` when the holes exhaust the base.
    pub fn witness(&self) -> Option<Vec<T>> {
        let rel: Vec<LatticeCoset<T>> = self.holes.iter().map(|h| self.base.relative(h)).collect();
        match covering_witness(&rel, self.base.lattice().rank()) {
            Coverage::Covered => None,
            Coverage::Uncovered(t) => Some(self.base.at(&t)),
        }
    }

    pub fn is_empty_set(&self) -> bool {
        self.witness().is_none()
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let base = self.base.intersect(&other.base)?;
        Some(Piece::new(base, self.holes.iter().chain(&other.holes).cloned()))
    }

    /// `self \ other` as pairwise disjoint pieces.
    pub fn minus(&self, other: &Self) -> Vec<Self> {
        let Some(meet) = self.base.intersect(&other.base) else {
            return vec![self.clone()];
        };
        let mut out = vec![Piece::new(self.base.clone(), self.holes.iter().cloned().chain([meet.clone()]))];
        // points of self inside other's base but inside one of its holes
        let mut earlier: Vec<LatticeCoset<T>> = Vec::new();
        for m in &other.holes {
            if let Some(part) = meet.intersect(m) {
                out.push(Piece::new(part.clone(), self.holes.iter().cloned().chain(earlier.iter().cloned())));
                earlier.push(part);
            }
        }
        out
    }
}

/// A finite union of pieces in ℤ^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetRingSet<T: Int = i64> {
    dim: usize,
    pieces: Vec<Piece<T>>,
}

impl<T: Int> CosetRingSet<T> {
    pub fn new(dim: usize, pieces: Vec<Piece<T>>) -> Result<Self, LatticeError> {
        for p in &pieces {
            check_dim(dim, p.dim())?;
        }
        Ok(CosetRingSet { dim, pieces })
    }

    pub fn empty(dim: usize) -> Self {
        CosetRingSet { dim, pieces: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn push(&mut self, piece: Piece<T>) -> Result<(), LatticeError> {
        check_dim(self.dim, piece.dim())?;
        self.pieces.push(piece);
        Ok(())
    }

    pub fn contains(&self, x: &[T]) -> Result<bool, LatticeError> {
        check_dim(self.dim, x.len())?;
        Ok(self.pieces.iter().any(|p| p.has(x)))
    }

    /// The same set as nonempty, pairwise disjoint pieces. Only intersections
    /// of lattices already present are introduced.
    pub fn disjoint_pieces(&self) -> Vec<Piece<T>> {
        let mut done: Vec<Piece<T>> = Vec::new();
        for p in &self.pieces {
            let mut frags = vec![p.clone()];
            for q in &done {
                frags = frags.iter().flat_map(|f| f.minus(q)).collect();
            }
            done.extend(frags.into_iter().filter(|f| !f.is_empty_set()));
        }
        done
    }
}
