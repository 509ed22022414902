use super::{add, check_dim, combine, to_i64, LatticeCoset, LatticeError, Piece};
use crate::lattice::CosetRingSet;
use crate::scalar::Int;

/// An affine map on a lattice coset, written in the coordinates of the
/// domain's canonical basis: `offset + Σ t_k b_k ↦ image_offset + A t`.
///
/// Maps such as `2n ↦ n` on `2ℤ` have no integer matrix on the ambient
/// space, which is why the linear part acts on lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeAffineMap<T: Int = i64> {
    domain: LatticeCoset<T>,
    image_offset: Vec<T>,
    /// Columns: images of the domain basis vectors, each of length `e`.
    linear: Vec<Vec<T>>,
}

impl<T: Int> LatticeAffineMap<T> {
    pub fn new(domain: LatticeCoset<T>, image_offset: Vec<T>, linear: Vec<Vec<T>>) -> Self {
        assert_eq!(linear.len(), domain.lattice().rank(), "one image per basis vector");
        assert!(linear.iter().all(|c| c.len() == image_offset.len()), "image dimension");
        LatticeAffineMap { domain, image_offset, linear }
    }

    /// `x ↦ M x + b` restricted to `domain`; `matrix` is given by rows.
    pub fn from_matrix(domain: LatticeCoset<T>, matrix: &[Vec<T>], b: &[T]) -> Self {
        let e = b.len();
        assert_eq!(matrix.len(), e, "matrix rows");
        let apply = |x: &[T]| -> Vec<T> {
            matrix.iter().map(|row| row.iter().zip(x).fold(T::zero(), |s, (&m, &v)| s + m * v)).collect()
        };
        let image_offset = add(&apply(domain.offset()), b);
        let linear = domain.lattice().basis().iter().map(|c| apply(c)).collect();
        Self::new(domain, image_offset, linear)
    }

    pub fn domain(&self) -> &LatticeCoset<T> {
        &self.domain
    }

    pub fn image_offset(&self) -> &[T] {
        &self.image_offset
    }

    pub fn linear(&self) -> &[Vec<T>] {
        &self.linear
    }

    pub fn source_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.image_offset.len()
    }

    fn apply_coords(&self, t: &[T]) -> Vec<T> {
        add(&self.image_offset, &combine(self.target_dim(), &self.linear, t))
    }

    /// Value at `x`, or `None` off the domain.
    pub fn evaluate(&self, x: &[T]) -> Option<Vec<T>> {
        let t = self.domain.lattice().coordinates(&super::sub(x, self.domain.offset()))?;
        Some(self.apply_coords(&t))
    }

    /// The graph of the map over a subcoset `c` of the domain, in ℤ^{d+e}.
    pub fn graph_of(&self, c: &LatticeCoset<T>) -> LatticeCoset<T> {
        let rel = self.domain.relative(c);
        let lift = |x: &[T], y: &[T]| -> Vec<T> { x.iter().chain(y).copied().collect() };
        let cols: Vec<Vec<T>> = self
            .domain
            .lattice()
            .basis()
            .iter()
            .zip(&self.linear)
            .map(|(b, a)| lift(b, a))
            .collect();
        let origin = lift(self.domain.offset(), &self.image_offset);
        rel.embed(&origin, &cols)
    }
}

/// Affine maps on pairwise disjoint regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePiecewiseAffine<T: Int = i64> {
    source_dim: usize,
    target_dim: usize,
    pieces: Vec<(Piece<T>, LatticeAffineMap<T>)>,
}

impl<T: Int> LatticePiecewiseAffine<T> {
    /// Validates containment of each region in its map's domain and pairwise
    /// disjointness of the regions.
    pub fn new(source_dim: usize, target_dim: usize, pieces: Vec<(Piece<T>, LatticeAffineMap<T>)>) -> Result<Self, LatticeError> {
        for (k, (region, map)) in pieces.iter().enumerate() {
            check_dim(source_dim, region.dim())?;
            check_dim(source_dim, map.source_dim())?;
            check_dim(target_dim, map.target_dim())?;
            if !region.base().is_subset_of(map.domain()) {
                return Err(LatticeError::RegionOutsideDomain { piece: k });
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if let Some(x) = pieces[i].0.intersect(&pieces[j].0).and_then(|p| p.witness()) {
                    return Err(LatticeError::OverlappingPieces { first: i, second: j, x: to_i64(&x) });
                }
            }
        }
        Ok(LatticePiecewiseAffine { source_dim, target_dim, pieces })
    }

    pub fn pieces(&self) -> &[(Piece<T>, LatticeAffineMap<T>)] {
        &self.pieces
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn evaluate(&self, x: &[T]) -> Result<Option<Vec<T>>, LatticeError> {
        check_dim(self.source_dim, x.len())?;
        let mut hits = self.pieces.iter().filter(|(r, _)| r.has(x));
        let first = hits.next();
        if hits.next().is_some() {
            return Err(LatticeError::AmbiguousPieces { x: to_i64(x) });
        }
        Ok(first.map(|(_, m)| m.evaluate(x).expect("region inside domain")))
    }

    /// `{(x, α(x))}` as a coset-ring set in ℤ^{d+e}.
    pub fn graph(&self) -> CosetRingSet<T> {
        let pieces = self
            .pieces
            .iter()
            .map(|(r, m)| Piece::new(m.graph_of(r.base()), r.holes().iter().map(|h| m.graph_of(h))))
            .collect();
        CosetRingSet::new(self.source_dim + self.target_dim, pieces).expect("graph dimensions")
    }
}
