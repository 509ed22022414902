use thiserror::Error;

use super::{ElementSet, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartialMapError {
    #[error("{count} images given for a domain of size {len}")]
    LengthMismatch { len: usize, count: usize },
    #[error("image {value} is out of range for a target of order {order}")]
    ImageOutOfRange { value: usize, order: usize },
    #[error("domain set belongs to a different group")]
    ForeignDomain,
}

/// A map `α: Y → G` defined on a subset `Y` of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    source: FiniteGroup,
    target: FiniteGroup,
    domain: ElementSet,
    images: Vec<usize>,
}

/// An affine map written as a translated homomorphism: with `s = anchor_source`,
/// `α(y) = α(s)·φ(s⁻¹y)` where `φ` is the homomorphism table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineWitness {
    pub anchor_source: usize,
    pub anchor_target: usize,
    /// Pairs `(s⁻¹y, α(s)⁻¹α(y))` for `y ∈ Y`, sorted by the first entry.
    pub homomorphism_table: Vec<(usize, usize)>,
}

impl PartialMap {
    /// `images[k]` is the image of the `k`-th (sorted) domain member.
    pub fn new(
        source: &FiniteGroup,
        target: &FiniteGroup,
        domain: ElementSet,
        images: Vec<usize>,
    ) -> Result<Self, PartialMapError> {
        if domain.parent() != source {
            return Err(PartialMapError::ForeignDomain);
        }
        if images.len() != domain.len() {
            return Err(PartialMapError::LengthMismatch { len: domain.len(), count: images.len() });
        }
        if let Some(&value) = images.iter().find(|&&v| v >= target.order()) {
            return Err(PartialMapError::ImageOutOfRange { value, order: target.order() });
        }
        Ok(PartialMap { source: source.clone(), target: target.clone(), domain, images })
    }

    /// Builds from `(h, g)` pairs; later pairs for the same `h` are rejected.
    pub fn from_pairs(
        source: &FiniteGroup,
        target: &FiniteGroup,
        pairs: &[(usize, usize)],
    ) -> Result<Self, PartialMapError> {
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let domain = ElementSet::new(source, sorted.iter().map(|p| p.0));
        let images = sorted.iter().map(|p| p.1).collect();
        Self::new(source, target, domain, images)
    }

    /// Builds from a dense table indexed by source element (`None` = outside `Y`).
    pub fn from_dense(source: &FiniteGroup, target: &FiniteGroup, dense: &[Option<usize>]) -> Result<Self, PartialMapError> {
        if dense.len() != source.order() {
            return Err(PartialMapError::LengthMismatch { len: source.order(), count: dense.len() });
        }
        let pairs: Vec<(usize, usize)> =
            dense.iter().enumerate().filter_map(|(h, g)| g.map(|g| (h, g))).collect();
        Self::from_pairs(source, target, &pairs)
    }

    /// The map `h ↦ f(h)` on all of `H`.
    pub fn total(source: &FiniteGroup, target: &FiniteGroup, f: impl Fn(usize) -> usize) -> Result<Self, PartialMapError> {
        let images = source.elements().map(f).collect();
        Self::new(source, target, ElementSet::full(source), images)
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn domain(&self) -> &ElementSet {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn get(&self, h: usize) -> Option<usize> {
        self.domain.members().binary_search(&h).ok().map(|k| self.images[k])
    }

    /// Images indexed by source element.
    pub fn dense(&self) -> Vec<Option<usize>> {
        self.source.elements().map(|h| self.get(h)).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.domain.members().iter().copied().zip(self.images.iter().copied())
    }

    pub fn image_set(&self) -> ElementSet {
        ElementSet::new(&self.target, self.images.iter().copied())
    }

    /// First domain triple breaking `α(rs⁻¹t) = α(r)α(s)⁻¹α(t)`, or
    /// breaking closure of `Y` under `rs⁻¹t`.
    pub fn affine_violation(&self) -> Option<(usize, usize, usize)> {
        let (h, g) = (&self.source, &self.target);
        for (r, ar) in self.pairs() {
            for (s, as_) in self.pairs() {
                let rs = h.mul(r, h.inv(s));
                let ars = g.mul(ar, g.inv(as_));
                for (t, at) in self.pairs() {
                    match self.get(h.mul(rs, t)) {
                        Some(v) if v == g.mul(ars, at) => {}
                        _ => return Some((r, s, t)),
                    }
                }
            }
        }
        None
    }

    /// `Some` iff `Y` is a coset and `α` is affine on it.
    pub fn is_affine(&self) -> Option<AffineWitness> {
        if self.domain.is_empty() || self.affine_violation().is_some() {
            return None;
        }
        let (h, g) = (&self.source, &self.target);
        let (s, a) = self.pairs().next().expect("nonempty domain");
        let mut table: Vec<(usize, usize)> =
            self.pairs().map(|(y, ay)| (h.mul(h.inv(s), y), g.mul(g.inv(a), ay))).collect();
        table.sort_unstable();
        Some(AffineWitness { anchor_source: s, anchor_target: a, homomorphism_table: table })
    }

    /// `Y` is a subgroup and `α(st) = α(s)α(t)` on it.
    pub fn is_group_homomorphism(&self) -> bool {
        let (h, g) = (&self.source, &self.target);
        if !self.domain.is_subgroup() {
            return false;
        }
        self.pairs().all(|(s, as_)| {
            self.pairs().all(|(t, at)| self.get(h.mul(s, t)) == Some(g.mul(as_, at)))
        })
    }
}

impl AffineWitness {
    /// Checks that the table is a homomorphism between subgroups.
    pub fn verify(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let lookup = |x: usize| self.homomorphism_table.binary_search_by_key(&x, |p| p.0).ok().map(|k| self.homomorphism_table[k].1);
        let dom = ElementSet::new(source, self.homomorphism_table.iter().map(|p| p.0));
        let img = ElementSet::new(target, self.homomorphism_table.iter().map(|p| p.1));
        dom.is_subgroup()
            && img.is_subgroup()
            && self.homomorphism_table.iter().all(|&(x, fx)| {
                self.homomorphism_table
                    .iter()
                    .all(|&(y, fy)| lookup(source.mul(x, y)) == Some(target.mul(fx, fy)))
            })
    }
}
