//! Dense primal-dual interior-point method for block-diagonal semidefinite
//! programs.
//!
//! ```text
//! (P)  minimise ⟨C, X⟩  subject to ⟨A_i, X⟩ = b_i,  X ⪰ 0
//! (D)  maximise bᵀy     subject to Σ y_i A_i + Z = C,  Z ⪰ 0
//! ```
//!
//! Search directions are HKM with a Mehrotra predictor-corrector step.
//! Complex Hermitian problems are passed in through [`real_embed`] style
//! blocks; see [`ComplexLmi`].
//!
//! [`real_embed`]: crate::linalg::real_embed

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linalg::CMat;
use crate::scalar::{Cx, Real};

/// Sparse entry `(block, row, col, value)` of a constraint matrix.
pub type Entry<T> = (usize, usize, usize, T);

#[derive(Debug, Clone)]
pub struct SdpProblem<T: Real> {
    blocks: Vec<usize>,
    c: Vec<DMatrix<T>>,
    a: Vec<Vec<Entry<T>>>,
    b: Vec<T>,
}

#[derive(Debug, Clone, Copy)]
pub struct SdpSettings<T> {
    /// Target for relative gap and both relative infeasibilities.
    pub tol: T,
    pub max_iterations: usize,
    /// Fraction of the distance to the boundary taken per step.
    pub step_fraction: T,
}

impl<T: Real> Default for SdpSettings<T> {
    fn default() -> Self {
        SdpSettings { tol: T::lit(1e-8), max_iterations: 100, step_fraction: T::lit(0.95) }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution<T: Real> {
    pub x: Vec<DMatrix<T>>,
    pub y: Vec<T>,
    pub z: Vec<DMatrix<T>>,
    pub primal_objective: T,
    pub dual_objective: T,
    pub iterations: usize,
    pub relative_gap: T,
    pub primal_infeasibility: T,
    pub dual_infeasibility: T,
}

#[derive(Debug, Clone, Error)]
#[error("SDP solver failed after {iterations} iterations ({reason}): gap {relative_gap:.3e}, primal infeasibility {primal_infeasibility:.3e}, dual infeasibility {dual_infeasibility:.3e}")]
pub struct SolverFailure {
    pub reason: String,
    pub iterations: usize,
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

fn frob<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |s, &v| s + v * v).sqrt()
}

fn inner<T: Real>(a: &[DMatrix<T>], b: &[DMatrix<T>]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + x.dot(y))
}

/// Largest `α` with `X + α·D ⪰ 0` (infinite if every direction is feasible).
fn max_step<T: Real>(x: &[DMatrix<T>], d: &[DMatrix<T>]) -> Option<T> {
    let mut best: Option<T> = None;
    for (xb, db) in x.iter().zip(d) {
        let l = xb.clone().cholesky()?.unpack();
        let linv = l.clone().try_inverse()?;
        let s = &linv * db * linv.transpose();
        let s = (&s + s.transpose()) * T::lit(0.5);
        let lmin = s.symmetric_eigenvalues().iter().fold(T::max_value().unwrap(), |m, &v| m.min(v));
        if lmin < T::zero() {
            let a = -T::one() / lmin;
            best = Some(best.map_or(a, |b: T| b.min(a)));
        }
    }
    Some(best.unwrap_or_else(|| T::lit(1e30)))
}

impl<T: Real> SdpProblem<T> {
    pub fn new(blocks: Vec<usize>) -> Self {
        let c = blocks.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        SdpProblem { blocks, c, a: Vec::new(), b: Vec::new() }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    /// Adds `v` at `(r, c)` and `(c, r)` of the objective matrix.
    pub fn add_objective(&mut self, block: usize, r: usize, c: usize, v: T) {
        self.c[block][(r, c)] += v;
        if r != c {
            self.c[block][(c, r)] += v;
        }
    }

    /// Starts a constraint `⟨A, X⟩ = rhs` and returns its index.
    pub fn add_constraint(&mut self, rhs: T) -> usize {
        self.a.push(Vec::new());
        self.b.push(rhs);
        self.a.len() - 1
    }

    /// Adds `v` at `(r, c)` and `(c, r)` of constraint `i`.
    pub fn add_entry(&mut self, i: usize, block: usize, r: usize, c: usize, v: T) {
        self.a[i].push((block, r, c, v));
        if r != c {
            self.a[i].push((block, c, r, v));
        }
    }

    fn a_op(&self, x: &[DMatrix<T>]) -> Vec<T> {
        self.a
            .iter()
            .map(|ai| ai.iter().fold(T::zero(), |s, &(b, r, c, v)| s + v * x[b][(r, c)]))
            .collect()
    }

    fn a_adj(&self, y: &[T]) -> Vec<DMatrix<T>> {
        let mut out: Vec<DMatrix<T>> = self.blocks.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for (ai, &yi) in self.a.iter().zip(y) {
            for &(b, r, c, v) in ai {
                out[b][(r, c)] += yi * v;
            }
        }
        out
    }

    fn by_block(&self) -> Vec<Vec<(usize, Vec<(usize, usize, T)>)>> {
        let mut out: Vec<Vec<(usize, Vec<(usize, usize, T)>)>> = vec![Vec::new(); self.blocks.len()];
        for (i, ai) in self.a.iter().enumerate() {
            let mut per: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); self.blocks.len()];
            for &(b, r, c, v) in ai {
                per[b].push((r, c, v));
            }
            for (b, e) in per.into_iter().enumerate() {
                if !e.is_empty() {
                    out[b].push((i, e));
                }
            }
        }
        out
    }

    /// `M_ij = tr(A_i X A_j W)`.
    fn schur(&self, groups: &[Vec<(usize, Vec<(usize, usize, T)>)>], x: &[DMatrix<T>], w: &[DMatrix<T>]) -> DMatrix<T> {
        let m = self.a.len();
        let mut out = DMatrix::zeros(m, m);
        for (bk, list) in groups.iter().enumerate() {
            let (xb, wb) = (&x[bk], &w[bk]);
            for (a, (i, ei)) in list.iter().enumerate() {
                for (j, ej) in &list[a..] {
                    let mut s = T::zero();
                    for &(p, q, va) in ei {
                        for &(r, t, vb) in ej {
                            s += va * vb * xb[(q, r)] * wb[(t, p)];
                        }
                    }
                    out[(*i, *j)] += s;
                    if i != j {
                        out[(*j, *i)] += s;
                    }
                }
            }
        }
        out
    }

    pub fn solve(&self, settings: &SdpSettings<T>) -> Result<SdpSolution<T>, SolverFailure> {
        let nb = self.blocks.len();
        let m = self.a.len();
        let n_total: usize = self.blocks.iter().sum();
        let nf = T::from_count(n_total.max(1));
        let groups = self.by_block();
        let bnorm = self.b.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
        let cnorm = self.c.iter().fold(T::zero(), |s, c| s + c.dot(c)).sqrt();

        let mut x = Vec::with_capacity(nb);
        let mut z = Vec::with_capacity(nb);
        for (bk, &n) in self.blocks.iter().enumerate() {
            let sn = T::from_count(n).sqrt();
            let mut xi = T::lit(10.0).max(sn);
            let mut eta = T::lit(10.0).max(sn).max(T::one() + frob(&self.c[bk]));
            for (i, e) in groups[bk].iter().map(|(i, e)| (*i, e)) {
                let an = e.iter().fold(T::zero(), |s, &(_, _, v)| s + v * v).sqrt();
                xi = xi.max(sn * (T::one() + self.b[i].abs()) / (T::one() + an));
                eta = eta.max(T::one() + an);
            }
            x.push(DMatrix::identity(n, n) * xi);
            z.push(DMatrix::identity(n, n) * eta);
        }
        let mut y = vec![T::zero(); m];
        let half = T::lit(0.5);

        let mut diag = (T::one(), T::one(), T::one());
        for iter in 0..=settings.max_iterations {
            let ax = self.a_op(&x);
            let rp: Vec<T> = self.b.iter().zip(&ax).map(|(&b, &a)| b - a).collect();
            let aty = self.a_adj(&y);
            let rd: Vec<DMatrix<T>> = (0..nb).map(|k| &self.c[k] - &z[k] - &aty[k]).collect();
            let pobj = inner(&self.c, &x);
            let dobj = self.b.iter().zip(&y).fold(T::zero(), |s, (&b, &v)| s + b * v);
            let gap = (pobj - dobj).abs() / (T::one() + pobj.abs() + dobj.abs());
            let pinf = rp.iter().fold(T::zero(), |s, &v| s + v * v).sqrt() / (T::one() + bnorm);
            let dinf = rd.iter().fold(T::zero(), |s, r| s + r.dot(r)).sqrt() / (T::one() + cnorm);
            diag = (gap, pinf, dinf);
            if gap <= settings.tol && pinf <= settings.tol && dinf <= settings.tol {
                return Ok(SdpSolution {
                    x,
                    y,
                    z,
                    primal_objective: pobj,
                    dual_objective: dobj,
                    iterations: iter,
                    relative_gap: gap,
                    primal_infeasibility: pinf,
                    dual_infeasibility: dinf,
                });
            }
            if iter == settings.max_iterations {
                break;
            }
            let fail = |reason: &str| SolverFailure {
                reason: reason.to_string(),
                iterations: iter,
                relative_gap: gap.as_f64(),
                primal_infeasibility: pinf.as_f64(),
                dual_infeasibility: dinf.as_f64(),
            };
            let mu = inner(&x, &z) / nf;
            let mut w = Vec::with_capacity(nb);
            for zb in &z {
                w.push(zb.clone().cholesky().ok_or_else(|| fail("Z lost definiteness"))?.inverse());
            }
            let schur = self.schur(&groups, &x, &w);
            let solver = SchurSolver::new(schur).ok_or_else(|| fail("singular Schur complement"))?;

            let direction = |g: &[DMatrix<T>]| -> Option<(Vec<DMatrix<T>>, Vec<T>, Vec<DMatrix<T>>)> {
                let t: Vec<DMatrix<T>> = (0..nb).map(|k| &g[k] - &x[k] * &rd[k] * &w[k]).collect();
                let at = self.a_op(&t);
                let rhs = DVector::from_iterator(m, rp.iter().zip(&at).map(|(&a, &b)| a - b));
                let dy = solver.solve(&rhs)?;
                let dy: Vec<T> = dy.iter().copied().collect();
                let atdy = self.a_adj(&dy);
                let dz: Vec<DMatrix<T>> = (0..nb).map(|k| &rd[k] - &atdy[k]).collect();
                let dx: Vec<DMatrix<T>> = (0..nb)
                    .map(|k| {
                        let d = &g[k] - &x[k] * &dz[k] * &w[k];
                        (&d + d.transpose()) * half
                    })
                    .collect();
                Some((dx, dy, dz))
            };

            let g_aff: Vec<DMatrix<T>> = x.iter().map(|xb| -xb).collect();
            let (dx_a, _, dz_a) = direction(&g_aff).ok_or_else(|| fail("predictor solve failed"))?;
            let ap = T::one().min(max_step(&x, &dx_a).ok_or_else(|| fail("X lost definiteness"))?);
            let ad = T::one().min(max_step(&z, &dz_a).ok_or_else(|| fail("Z lost definiteness"))?);
            let x_a: Vec<DMatrix<T>> = (0..nb).map(|k| &x[k] + &dx_a[k] * ap).collect();
            let z_a: Vec<DMatrix<T>> = (0..nb).map(|k| &z[k] + &dz_a[k] * ad).collect();
            let mu_aff = inner(&x_a, &z_a) / nf;
            let sigma = (mu_aff / mu).max(T::zero()).min(T::one()).powi(3);

            let g: Vec<DMatrix<T>> = (0..nb)
                .map(|k| &w[k] * (sigma * mu) - &x[k] - &dx_a[k] * &dz_a[k] * &w[k])
                .collect();
            let (dx, dy, dz) = direction(&g).ok_or_else(|| fail("corrector solve failed"))?;
            let tau = settings.step_fraction;
            let ap = T::one().min(tau * max_step(&x, &dx).ok_or_else(|| fail("X lost definiteness"))?);
            let ad = T::one().min(tau * max_step(&z, &dz).ok_or_else(|| fail("Z lost definiteness"))?);
            for k in 0..nb {
                x[k] += &dx[k] * ap;
                z[k] += &dz[k] * ad;
                x[k] = (&x[k] + x[k].transpose()) * half;
                z[k] = (&z[k] + z[k].transpose()) * half;
            }
            for (yi, d) in y.iter_mut().zip(&dy) {
                *yi += *d * ad;
            }
        }
        Err(SolverFailure {
            reason: "iteration limit reached".into(),
            iterations: settings.max_iterations,
            relative_gap: diag.0.as_f64(),
            primal_infeasibility: diag.1.as_f64(),
            dual_infeasibility: diag.2.as_f64(),
        })
    }
}

enum SchurSolver<T: Real> {
    Chol(nalgebra::Cholesky<T, nalgebra::Dyn>),
    Lu(nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>),
}

impl<T: Real> SchurSolver<T> {
    fn new(m: DMatrix<T>) -> Option<Self> {
        if m.nrows() == 0 {
            return Some(SchurSolver::Lu(m.lu()));
        }
        match m.clone().cholesky() {
            Some(c) => Some(SchurSolver::Chol(c)),
            None => {
                let lu = m.lu();
                lu.is_invertible().then_some(SchurSolver::Lu(lu))
            }
        }
    }

    fn solve(&self, rhs: &DVector<T>) -> Option<DVector<T>> {
        match self {
            SchurSolver::Chol(c) => Some(c.solve(rhs)),
            SchurSolver::Lu(l) => l.solve(rhs),
        }
    }
}

/// Linear matrix inequalities with complex Hermitian blocks, in the form
///
/// ```text
/// maximise  bᵀy   subject to   F_k(y) = C_k − Σ_i y_i A_{k,i} ⪰ 0   for every block k
/// ```
///
/// with real variables `y`. Blocks marked real are passed through; complex
/// blocks are replaced by their real embedding, which is PSD exactly when
/// the Hermitian block is.
#[derive(Debug, Clone)]
pub struct ComplexLmi<T: Real> {
    nvars: usize,
    objective: Vec<T>,
    blocks: Vec<LmiBlock<T>>,
}

#[derive(Debug, Clone)]
struct LmiBlock<T: Real> {
    n: usize,
    real: bool,
    constant: CMat<T>,
    /// `(var, r, c, v)`: `A_var` gets `v` at `(r, c)` and `conj(v)` at `(c, r)`.
    terms: Vec<(usize, usize, usize, Cx<T>)>,
}

impl<T: Real> ComplexLmi<T> {
    pub fn new(nvars: usize) -> Self {
        ComplexLmi { nvars, objective: vec![T::zero(); nvars], blocks: Vec::new() }
    }

    pub fn set_objective(&mut self, var: usize, coeff: T) {
        self.objective[var] = coeff;
    }

    /// Adds a block of size `n` with constant part `constant` (Hermitian).
    pub fn add_block(&mut self, constant: CMat<T>, real: bool) -> usize {
        let n = constant.nrows();
        self.blocks.push(LmiBlock { n, real, constant, terms: Vec::new() });
        self.blocks.len() - 1
    }

    /// `A_{block,var} += v E_rc + conj(v) E_cr` (just `Re v · E_rr` when `r == c`).
    pub fn add_term(&mut self, block: usize, var: usize, r: usize, c: usize, v: Cx<T>) {
        self.blocks[block].terms.push((var, r, c, v));
    }

    /// The matrix `F_k(y)` for a given `y`.
    pub fn evaluate_block(&self, block: usize, y: &[T]) -> CMat<T> {
        let b = &self.blocks[block];
        let mut f = b.constant.clone();
        for &(var, r, c, v) in &b.terms {
            let s = Cx::new(y[var], T::zero());
            if r == c {
                f[(r, r)] -= Cx::new(v.re, T::zero()) * s;
            } else {
                f[(r, c)] -= v * s;
                f[(c, r)] -= v.conj() * s;
            }
        }
        f
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn to_sdp(&self) -> SdpProblem<T> {
        let sizes = self.blocks.iter().map(|b| if b.real { b.n } else { 2 * b.n }).collect();
        let mut p = SdpProblem::new(sizes);
        for _ in 0..self.nvars {
            p.add_constraint(T::zero());
        }
        p.b = self.objective.clone();
        for (k, b) in self.blocks.iter().enumerate() {
            let n = b.n;
            let c = if b.real { b.constant.map(|z| z.re) } else { crate::linalg::real_embed(&b.constant) };
            p.c[k] = c;
            for &(var, r, c, v) in &b.terms {
                if r == c {
                    p.add_entry(var, k, r, r, v.re);
                    if !b.real {
                        p.add_entry(var, k, n + r, n + r, v.re);
                    }
                } else {
                    p.add_entry(var, k, r, c, v.re);
                    if !b.real {
                        p.add_entry(var, k, n + r, n + c, v.re);
                        // [[Re, −Im], [Im, Re]] with Im A[r][c] = v.im, Im A[c][r] = −v.im
                        p.add_entry(var, k, n + r, c, v.im);
                        p.add_entry(var, k, n + c, r, -v.im);
                    }
                }
            }
        }
        p
    }

    pub fn solve(&self, settings: &SdpSettings<T>) -> Result<SdpSolution<T>, SolverFailure> {
        self.to_sdp().solve(settings)
    }
}
