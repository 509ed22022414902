use crate::linalg::{czeros, is_psd_by_cholesky, min_eigenvalue, CMat};
use crate::scalar::{cre, Real};

/// A linear map `⊕_σ M_{d_σ} → ⊕_π M_{b_π}` given by its Choi blocks.
///
/// `choi(σ, π)` has size `d_σ·b_π` and entry `(i·b_π + k, j·b_π + l)`
/// equal to `φ(E^σ_ij)_π[k, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMap<T: Real = f64> {
    dom: Vec<usize>,
    cod: Vec<usize>,
    choi: Vec<Vec<CMat<T>>>,
}

impl<T: Real> BlockMap<T> {
    pub fn new(dom: Vec<usize>, cod: Vec<usize>, choi: Vec<Vec<CMat<T>>>) -> Self {
        assert_eq!(choi.len(), dom.len(), "one row of blocks per domain block");
        for (row, &d) in choi.iter().zip(&dom) {
            assert_eq!(row.len(), cod.len(), "one block per codomain block");
            for (blk, &b) in row.iter().zip(&cod) {
                assert_eq!(blk.shape(), (d * b, d * b), "Choi block has the wrong size");
            }
        }
        BlockMap { dom, cod, choi }
    }

    pub fn dom(&self) -> &[usize] {
        &self.dom
    }

    pub fn cod(&self) -> &[usize] {
        &self.cod
    }

    pub fn choi(&self, sigma: usize, pi: usize) -> &CMat<T> {
        &self.choi[sigma][pi]
    }

    /// `φ(E^σ_ij)` in codomain block `π`.
    pub fn unit_image(&self, sigma: usize, i: usize, j: usize, pi: usize) -> CMat<T> {
        let b = self.cod[pi];
        let c = &self.choi[sigma][pi];
        CMat::from_fn(b, b, |k, l| c[(i * b + k, j * b + l)])
    }

    /// `φ(1)` in codomain block `π`.
    pub fn unit_image_of_identity(&self, pi: usize) -> CMat<T> {
        let b = self.cod[pi];
        let mut out = czeros::<T>(b, b);
        for (s, &d) in self.dom.iter().enumerate() {
            for i in 0..d {
                out += self.unit_image(s, i, i, pi);
            }
        }
        out
    }

    /// Smallest eigenvalue over the Hermitian parts of all Choi blocks.
    pub fn min_choi_eigenvalue(&self) -> T {
        self.choi
            .iter()
            .flatten()
            .map(min_eigenvalue)
            .fold(T::max_value().expect("bounded real"), |m, v| m.min(v))
    }

    /// Every Choi block Hermitian with smallest eigenvalue `≥ −tol`.
    pub fn is_completely_positive(&self, tol: T) -> bool {
        self.choi.iter().flatten().all(|c| is_psd_by_cholesky(c, tol))
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.choi.iter().flatten().all(|c| c.iter().all(|z| z.norm_sqr() <= tol * tol))
    }

    /// Restriction to codomain block `π`, as a map into `M_{b_π}`.
    pub fn component(&self, pi: usize) -> BlockMap<T> {
        BlockMap {
            dom: self.dom.clone(),
            cod: vec![self.cod[pi]],
            choi: self.choi.iter().map(|row| vec![row[pi].clone()]).collect(),
        }
    }

    pub fn scaled(&self, c: T) -> BlockMap<T> {
        BlockMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            choi: self.choi.iter().map(|row| row.iter().map(|m| m * cre(c)).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::MatrixMap;

    #[test]
    fn identity_unit_images() {
        let b = MatrixMap::<f64>::identity(3).to_block_map();
        assert!(b.is_completely_positive(1e-9));
        let one = b.unit_image_of_identity(0);
        assert!((one - nalgebra::DMatrix::identity(3, 3)).norm() < 1e-12);
        assert!((b.min_choi_eigenvalue()).abs() < 1e-12);
    }

    #[test]
    fn transpose_is_not_cp() {
        let b = MatrixMap::<f64>::transpose(2).to_block_map();
        assert!(!b.is_completely_positive(1e-9));
        assert!((b.min_choi_eigenvalue() + 1.0).abs() < 1e-12);
    }
}
