//! Small dense complex linear algebra helpers.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{cabs, cre, cx, Cx, Real};

/// Dense complex matrix.
pub type CMat<T> = DMatrix<Cx<T>>;

pub fn czeros<T: Real>(r: usize, c: usize) -> CMat<T> {
    CMat::from_element(r, c, Cx::new(T::zero(), T::zero()))
}

pub fn cidentity<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

pub fn to_complex<T: Real>(m: &DMatrix<T>) -> CMat<T> {
    m.map(cre)
}

/// Singular values, each once, descending. Computed from the real form
/// `[[Re M, −Im M], [Im M, Re M]]`, whose singular values are those of `M`
/// repeated twice; the complex SVD is not used.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    let mut sv: Vec<T> = real_embed(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv.iter().step_by(2).copied().collect()
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(m: &CMat<T>) -> T {
    match (m.nrows(), m.ncols()) {
        (0, _) | (_, 0) => T::zero(),
        (1, 1) => cabs(m[(0, 0)]),
        (2, 2) => {
            // σ1 + σ2 = sqrt(‖A‖_F² + 2|det A|)
            let fro = m.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            (fro + cabs(det) * T::lit(2.0)).sqrt()
        }
        _ => singular_values(m).iter().fold(T::zero(), |s, &v| s + v),
    }
}

/// Largest singular value.
pub fn op_norm<T: Real>(m: &CMat<T>) -> T {
    match (m.nrows(), m.ncols()) {
        (0, _) | (_, 0) => T::zero(),
        (1, 1) => cabs(m[(0, 0)]),
        _ => singular_values(m).first().copied().unwrap_or_else(T::zero),
    }
}

pub fn hermitian_part<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + m.adjoint()).map(|z| z * cre(T::lit(0.5)))
}

/// Largest entry of `|M - M*|`.
pub fn hermitian_defect<T: Real>(m: &CMat<T>) -> T {
    (m - m.adjoint()).iter().fold(T::zero(), |s, z| s.max(cabs(*z)))
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMat<T>) -> Vec<T> {
    let h = hermitian_part(m);
    let mut ev: Vec<T> = match h.nrows() {
        0 => Vec::new(),
        1 => vec![h[(0, 0)].re],
        2 => {
            let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
            let half = T::lit(0.5);
            let mid = (a + d) * half;
            let rad = (((a - d) * half).powi(2) + b.norm_sqr()).sqrt();
            vec![mid - rad, mid + rad]
        }
        _ => h.symmetric_eigenvalues().iter().copied().collect(),
    };
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

pub fn min_eigenvalue<T: Real>(m: &CMat<T>) -> T {
    hermitian_eigenvalues(m).first().copied().unwrap_or_else(T::zero)
}

pub fn max_eigenvalue<T: Real>(m: &CMat<T>) -> T {
    hermitian_eigenvalues(m).last().copied().unwrap_or_else(T::zero)
}

/// Hermitian within `tol` (entrywise) and smallest eigenvalue ≥ −tol.
pub fn is_psd_within<T: Real>(m: &CMat<T>, tol: T) -> bool {
    hermitian_defect(m) <= tol && min_eigenvalue(m) >= -tol
}

/// Same verdict as [`is_psd_within`] via a Cholesky factorisation of the
/// real form of `H + tol·I`, which is much cheaper for large matrices.
/// Exact at the boundary only up to the factorisation's rounding.
pub fn is_psd_by_cholesky<T: Real>(m: &CMat<T>, tol: T) -> bool {
    if hermitian_defect(m) > tol {
        return false;
    }
    let n = m.nrows();
    let shifted = hermitian_part(m) + cidentity::<T>(n).map(|z| z * cre(tol));
    if shifted.iter().all(|z| z.im == T::zero()) {
        shifted.map(|z| z.re).cholesky().is_some()
    } else {
        real_embed(&shifted).cholesky().is_some()
    }
}

pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

/// `[[Re M, −Im M], [Im M, Re M]]`, the real form of a complex matrix.
pub fn real_embed<T: Real>(m: &CMat<T>) -> DMatrix<T> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Complex matrix whose real form is closest to `r` in the sense of
/// averaging `r` with `J r Jᵀ`; a contraction whenever `r` is.
fn complex_part<T: Real>(r: &DMatrix<T>, rows: usize, cols: usize) -> CMat<T> {
    let half = T::lit(0.5);
    CMat::from_fn(rows, cols, |i, j| {
        cx(
            (r[(i, j)] + r[(rows + i, cols + j)]) * half,
            (r[(rows + i, j)] - r[(i, cols + j)]) * half,
        )
    })
}

/// Top singular triple `(σ, u, v)` with `M v = σ u`.
pub fn top_singular<T: Real>(m: &CMat<T>) -> (T, DVector<Cx<T>>, DVector<Cx<T>>) {
    let (r, c) = m.shape();
    let svd = real_embed(m).svd(true, true);
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, T::zero()), |(bk, bs), (k, &s)| if s > bs { (k, s) } else { (bk, bs) });
    let u = svd.u.expect("requested").column(k).into_owned();
    let v = svd.v_t.expect("requested").row(k).transpose();
    // real vector [x; y] is the complex vector x + iy
    let u = DVector::from_fn(r, |i, _| cx(u[i], u[r + i]));
    let v = DVector::from_fn(c, |i, _| cx(v[i], v[c + i]));
    (s, u, v)
}

/// A contraction `W` maximising `Re tr(W M)`, which equals `‖M‖₁`,
/// together with `‖M‖₁`.
pub fn polar_maximiser<T: Real>(m: &CMat<T>) -> (CMat<T>, T) {
    let (r, c) = m.shape();
    let svd = real_embed(m).svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let total = svd.singular_values.iter().fold(T::zero(), |s, &v| s + v) * T::lit(0.5);
    (complex_part(&(vt.transpose() * u.transpose()), c, r), total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn arb_cmat(n: usize) -> impl Strategy<Value = CMat<f64>> {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
            .prop_map(move |v| CMat::from_iterator(n, n, v.into_iter().map(|(a, b)| cx(a, b))))
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let m = CMat::<f64>::from_diagonal(&DVector::from_vec(vec![cx(3.0, 4.0), cx(-1.0, 0.0), cx(0.0, 2.0)]));
        assert_relative_eq!(trace_norm(&m), 8.0, epsilon = 1e-12);
        assert_relative_eq!(op_norm(&m), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn transpose_choi_has_negative_eigenvalue() {
        // swap matrix on C²⊗C²
        let mut s = czeros::<f64>(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                s[(i * 2 + j, j * 2 + i)] = cre(1.0);
            }
        }
        let ev = hermitian_eigenvalues(&s);
        assert_relative_eq!(ev[0], -1.0, epsilon = 1e-12);
        assert!(!is_psd_within(&s, 1e-9));
        assert!(!is_psd_by_cholesky(&s, 1e-9));
    }

    #[test]
    fn structured_matrix_singular_values() {
        // partial transpose of a unitary; the complex SVD misreports this one
        let x = CMat::<f64>::from_fn(4, 4, |i, j| cx(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + j * j) % 3) as f64 - 1.0));
        let (q, _) = (x.clone().qr().q(), ());
        let w = CMat::from_fn(4, 4, |r, c| q[((r / 2) * 2 + c % 2, (c / 2) * 2 + r % 2)]);
        let want = max_eigenvalue(&(w.adjoint() * &w)).sqrt();
        assert_relative_eq!(op_norm(&w), want, epsilon = 1e-10);
        assert!(op_norm(&w) <= 2.0 + 1e-12);
        let evs = hermitian_eigenvalues(&(w.adjoint() * &w));
        let tn: f64 = evs.iter().map(|v| v.max(0.0).sqrt()).sum();
        assert_relative_eq!(trace_norm(&w), tn, epsilon = 1e-6);
    }

    proptest! {
        #[test]
        fn singular_values_match_gram_spectrum(m in arb_cmat(4)) {
            let sv = singular_values(&m);
            let ev = hermitian_eigenvalues(&(m.adjoint() * &m));
            for (s, e) in sv.iter().zip(ev.iter().rev()) {
                prop_assert!((s * s - e).abs() < 1e-9);
            }
        }

        #[test]
        fn closed_forms_match_svd(m in arb_cmat(2)) {
            let svd: f64 = singular_values(&m).iter().sum();
            prop_assert!((trace_norm(&m) - svd).abs() < 1e-10);
            let h = hermitian_part(&m);
            let ev = hermitian_eigenvalues(&h);
            let mut direct: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            direct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert!((ev[0] - direct[0]).abs() < 1e-10 && (ev[1] - direct[1]).abs() < 1e-10);
        }

        #[test]
        fn psd_tests_agree(m in arb_cmat(4)) {
            let g = &m * m.adjoint();
            prop_assert!(is_psd_within(&g, 1e-9));
            prop_assert!(is_psd_by_cholesky(&g, 1e-9));
            let shifted = &g - cidentity::<f64>(4).map(|z| z * cre(min_eigenvalue(&g) + 0.1));
            prop_assert!(!is_psd_within(&shifted, 1e-9));
            prop_assert!(!is_psd_by_cholesky(&shifted, 1e-9));
        }

        #[test]
        fn embedding_preserves_spectrum(m in arb_cmat(3)) {
            let h = hermitian_part(&m);
            let e = real_embed(&h);
            let mut re: Vec<f64> = e.symmetric_eigenvalues().iter().copied().collect();
            re.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ce = hermitian_eigenvalues(&h);
            for (k, v) in ce.iter().enumerate() {
                prop_assert!((re[2 * k] - v).abs() < 1e-9 && (re[2 * k + 1] - v).abs() < 1e-9);
            }
        }

        #[test]
        fn polar_factor_attains_trace_norm(m in arb_cmat(3)) {
            let (w, t) = polar_maximiser(&m);
            prop_assert!(op_norm(&w) <= 1.0 + 1e-9);
            prop_assert!(((&w * &m).trace().re - t).abs() < 1e-9);
            let (s, u, v) = top_singular(&m);
            prop_assert!((&m * &v - &u * cre(s)).norm() < 1e-9);
        }
    }
}
