use super::{fourier_transform, is_positive_definite, FunctionOnGroup, IrrepSet, ReprError};
use crate::linalg::{czeros, op_norm, trace_norm, CMat};
use crate::scalar::{cabs, cre, cx, Cx, Real};
use crate::sdp::{SdpProblem, SdpSettings};

/// Largest group order accepted by [`a_norm_oracle`].
pub const ORACLE_BOUND: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    IrrepFormula,
    TraceMinOracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport<T> {
    pub a_norm: T,
    pub is_positive_definite: bool,
    pub method: NormMethod,
}

/// `‖u‖_A = (1/|G|) Σ_π d_π ‖û(π)‖₁`.
pub fn a_norm<T: Real>(u: &FunctionOnGroup<T>, irreps: &IrrepSet<T>) -> Result<NormReport<T>, ReprError> {
    let coeffs = fourier_transform(u, irreps)?;
    let total = irreps
        .irreps()
        .iter()
        .zip(&coeffs.blocks)
        .fold(T::zero(), |s, (p, b)| s + T::from_count(p.dim) * trace_norm(b));
    Ok(NormReport {
        a_norm: total / T::from_count(u.group().order()),
        is_positive_definite: is_positive_definite(u, T::lit(1e-9)),
        method: NormMethod::IrrepFormula,
    })
}

/// Both sides of the trace-norm duality for `‖u‖_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport<T> {
    /// Trace norm of an exactly feasible `T` with `tr(T λ(s)) = u(s)`.
    pub primal: T,
    /// `|Σ_s u(s) c_s| / ‖Σ_s c_s λ(s)‖` for the dual coefficients `c`.
    pub dual: T,
    pub iterations: usize,
}

impl<T: Real> OracleReport<T> {
    pub fn value(&self) -> T {
        (self.primal + self.dual) * T::lit(0.5)
    }
}

/// `‖u‖_A` as `min ‖T‖₁` subject to `tr(T λ(s)) = u(s)`, solved as a
/// semidefinite program, with both bounds certified after the solve.
/// The bounds must agree within `1e-6`.
pub fn a_norm_oracle<T: Real>(u: &FunctionOnGroup<T>, settings: &SdpSettings<T>) -> Result<OracleReport<T>, ReprError> {
    let g = u.group();
    let n = g.order();
    if n > ORACLE_BOUND {
        return Err(ReprError::OrderTooLarge { order: n, bound: ORACLE_BOUND });
    }
    let real = u.values().iter().all(|z| z.im == T::zero());
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);

    let (iterations, tmat, coeffs);
    if real {
        // X = [[W1, T], [Tᵀ, W2]], tr(T λ(s)) = Σ_a T[a, sa]
        let mut p = SdpProblem::new(vec![2 * n]);
        for i in 0..2 * n {
            p.add_objective(0, i, i, half);
        }
        for s in g.elements() {
            let c = p.add_constraint(u.at(s).re);
            for a in g.elements() {
                p.add_entry(c, 0, a, n + g.mul(s, a), half);
            }
        }
        let sol = p.solve(settings)?;
        tmat = CMat::from_fn(n, n, |a, b| cre(sol.x[0][(a, n + b)]));
        coeffs = sol.y.iter().map(|&y| cre(y)).collect::<Vec<_>>();
        iterations = sol.iterations;
    } else {
        // real form of the Hermitian X: Re X = Y[..2n, ..2n], Im X = Y[2n.., ..2n]
        let m = 2 * n;
        let mut p = SdpProblem::new(vec![2 * m]);
        for i in 0..2 * m {
            p.add_objective(0, i, i, quarter);
        }
        for s in g.elements() {
            let re = p.add_constraint(u.at(s).re);
            for a in g.elements() {
                let b = g.mul(s, a);
                p.add_entry(re, 0, a, n + b, quarter);
                p.add_entry(re, 0, m + a, m + n + b, quarter);
            }
            let im = p.add_constraint(u.at(s).im);
            for a in g.elements() {
                let b = g.mul(s, a);
                p.add_entry(im, 0, m + a, n + b, quarter);
                p.add_entry(im, 0, a, m + n + b, -quarter);
            }
        }
        let sol = p.solve(settings)?;
        let y = &sol.x[0];
        tmat = CMat::from_fn(n, n, |a, b| {
            cx(
                (y[(a, n + b)] + y[(m + a, m + n + b)]) * half,
                (y[(m + a, n + b)] - y[(a, m + n + b)]) * half,
            )
        });
        coeffs = (0..n).map(|s| cx(sol.y[2 * s], -sol.y[2 * s + 1])).collect();
        iterations = sol.iterations;
    }

    let lambda = |s: usize| -> CMat<T> {
        CMat::from_fn(n, n, |r, c| cre(if r == g.mul(s, c) { T::one() } else { T::zero() }))
    };
    let mut feasible = tmat.clone();
    for s in g.elements() {
        let l = lambda(s);
        let miss = u.at(s) - (&tmat * &l).trace();
        feasible += l.adjoint() * (miss / cre(T::from_count(n)));
    }
    let primal = trace_norm(&feasible);

    let mut x = czeros::<T>(n, n);
    let mut pairing: Cx<T> = cre(T::zero());
    for s in g.elements() {
        x += lambda(s) * coeffs[s];
        pairing += u.at(s) * coeffs[s];
    }
    let xn = op_norm(&x);
    let dual = if xn > T::zero() { cabs(pairing) / xn } else { T::zero() };

    if (primal - dual).abs() > T::lit(1e-6) {
        return Err(ReprError::OracleDisagreement { primal: primal.as_f64(), dual: dual.as_f64() });
    }
    Ok(OracleReport { primal, dual, iterations })
}
