use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BlockMap, CbError};
use crate::linalg::{czeros, min_eigenvalue, op_norm, polar_maximiser, top_singular, trace_norm, CMat};
use crate::scalar::{cre, cx, Cx, Real};
use crate::sdp::{ComplexLmi, SdpSettings, SolverFailure};

/// Default bound on the total dimension of domain and codomain algebras.
pub const DEFAULT_CB_SIZE_BOUND: usize = 12;

#[derive(Debug, Clone, Copy)]
pub struct CbSettings<T> {
    pub seed: u64,
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Relative gap above which [`cb_norm`] reports non-convergence.
    pub gap: T,
    pub size_bound: usize,
    pub sdp: SdpSettings<T>,
}

impl<T: Real> Default for CbSettings<T> {
    fn default() -> Self {
        CbSettings {
            seed: 0,
            restarts: 8,
            max_sweeps: 400,
            gap: T::lit(1e-3),
            size_bound: DEFAULT_CB_SIZE_BOUND,
            sdp: SdpSettings::default(),
        }
    }
}

/// Certified bounds `lower ≤ ‖φ‖_cb ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbBound<T> {
    pub lower: T,
    pub upper: T,
    /// Amplification level used for the lower bound.
    pub level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contractivity {
    Contractive,
    NotContractive,
    Indeterminate,
}

impl<T: Real> CbBound<T> {
    pub fn exact(value: T) -> Self {
        CbBound { lower: value, upper: value, level: 1 }
    }

    pub fn contains(&self, value: T, tol: T) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }

    pub fn gap(&self) -> T {
        self.upper - self.lower
    }

    /// `(upper − lower) / upper`, zero for the zero map.
    pub fn relative_gap(&self) -> T {
        if self.upper > T::zero() {
            self.gap() / self.upper
        } else {
            T::zero()
        }
    }

    /// Contractive when `upper ≤ 1 + tol`, not contractive when
    /// `lower > 1 + tol`, indeterminate otherwise.
    pub fn completely_contractive(&self, tol: T) -> Contractivity {
        if self.upper <= T::one() + tol {
            Contractivity::Contractive
        } else if self.lower > T::one() + tol {
            Contractivity::NotContractive
        } else {
            Contractivity::Indeterminate
        }
    }

    pub fn to_f64(&self) -> CbBound<f64> {
        CbBound { lower: self.lower.as_f64(), upper: self.upper.as_f64(), level: self.level }
    }

    /// Tightest combination of two certified sandwiches for the same map.
    pub fn meet(&self, other: &Self) -> Self {
        let (lower, level) = if other.lower > self.lower { (other.lower, other.level) } else { (self.lower, self.level) };
        CbBound { lower, upper: self.upper.min(other.upper), level }
    }
}

/// Sandwich for `‖φ‖_cb`: exact for one-dimensional codomain blocks,
/// otherwise a Paulsen semidefinite upper bound and an alternating
/// maximisation lower bound at level `b_π` with seeded restarts.
pub fn cb_norm<T: Real>(map: &BlockMap<T>, settings: &CbSettings<T>) -> Result<CbBound<T>, CbError> {
    let size = map.dom().iter().sum::<usize>().max(map.cod().iter().sum());
    if size > settings.size_bound {
        return Err(CbError::TooLarge { size, bound: settings.size_bound });
    }
    let mut total = CbBound { lower: T::zero(), upper: T::zero(), level: 1 };
    for (p, &b) in map.cod().iter().enumerate() {
        let comp = map.component(p);
        let bound = if comp.is_zero(T::lit(1e-14)) {
            CbBound::exact(T::zero())
        } else if b == 1 {
            CbBound::exact(functional_norm(&comp))
        } else {
            let upper = paulsen_sdp_upper(&comp, &settings.sdp)?;
            let lower = alternating_lower_bound(&comp, b, settings.restarts, settings.max_sweeps, settings.seed.wrapping_add(p as u64));
            CbBound { lower, upper, level: b }
        };
        if bound.lower > total.lower {
            total.lower = bound.lower;
            total.level = bound.level;
        }
        total.upper = total.upper.max(bound.upper);
    }
    if total.relative_gap() > settings.gap {
        return Err(CbError::NonConvergence {
            lower: total.lower.as_f64(),
            upper: total.upper.as_f64(),
            bound: total.to_f64(),
        });
    }
    Ok(total)
}

/// Norm of a map into `M_1`: `Σ_σ ‖J_σ‖₁`.
fn functional_norm<T: Real>(comp: &BlockMap<T>) -> T {
    (0..comp.dom().len()).fold(T::zero(), |s, k| s + trace_norm(comp.choi(k, 0)))
}

/// `Σ_i X[(i,k),(i,l)]` for `X` of size `(d·b)²`.
fn partial_trace<T: Real>(x: &CMat<T>, d: usize, b: usize) -> CMat<T> {
    CMat::from_fn(b, b, |k, l| (0..d).fold(cre(T::zero()), |s, i| s + x[(i * b + k, i * b + l)]))
}

/// Certified upper bound from a candidate `(P_σ, Q_σ)` for a map into `M_b`:
/// after shifting both by the most negative eigenvalue of the blocks
/// `[[P_σ, J_σ], [J_σ*, Q_σ]]`, returns `sqrt(‖Σ Tr₁ P‖·‖Σ Tr₁ Q‖)`.
pub fn paulsen_upper_bound<T: Real>(map: &BlockMap<T>, p: &[CMat<T>], q: &[CMat<T>]) -> T {
    assert_eq!(map.cod().len(), 1, "single codomain block expected");
    let b = map.cod()[0];
    let mut delta = T::zero();
    for (s, &d) in map.dom().iter().enumerate() {
        let n = d * b;
        let j = map.choi(s, 0);
        let mut f = czeros::<T>(2 * n, 2 * n);
        f.view_mut((0, 0), (n, n)).copy_from(&p[s]);
        f.view_mut((n, n), (n, n)).copy_from(&q[s]);
        f.view_mut((0, n), (n, n)).copy_from(j);
        f.view_mut((n, 0), (n, n)).copy_from(&j.adjoint());
        delta = delta.max(-min_eigenvalue(&f));
    }
    let mut tp = czeros::<T>(b, b);
    let mut tq = czeros::<T>(b, b);
    for (s, &d) in map.dom().iter().enumerate() {
        let shift = CMat::<T>::identity(d * b, d * b) * cre(delta);
        tp += partial_trace(&(&p[s] + &shift), d, b);
        tq += partial_trace(&(&q[s] + &shift), d, b);
    }
    (op_norm(&tp) * op_norm(&tq)).sqrt()
}

/// Hermitian parametrisation of an `n×n` block: `(var, r, c, v)` adds
/// `y_var·(v E_rc + conj(v) E_cr)` (or `y_var·E_rr` on the diagonal).
fn hermitian_params<T: Real>(start: usize, n: usize, real: bool) -> Vec<(usize, usize, usize, Cx<T>)> {
    let mut out = Vec::new();
    let mut var = start;
    for r in 0..n {
        for c in r..n {
            out.push((var, r, c, cre(T::one())));
            var += 1;
            if r != c && !real {
                out.push((var, r, c, cx(T::zero(), T::one())));
                var += 1;
            }
        }
    }
    out
}

fn assemble<T: Real>(params: &[(usize, usize, usize, Cx<T>)], y: &[T], n: usize) -> CMat<T> {
    let mut m = czeros::<T>(n, n);
    for &(var, r, c, v) in params {
        if r == c {
            m[(r, r)] += cre(y[var] * v.re);
        } else {
            m[(r, c)] += v * cre(y[var]);
            m[(c, r)] += v.conj() * cre(y[var]);
        }
    }
    m
}

/// Minimises `t` subject to `[[P_σ, J_σ], [J_σ*, Q_σ]] ⪰ 0` and
/// `tI ⪰ Σ_σ Tr₁ P_σ`, `tI ⪰ Σ_σ Tr₁ Q_σ`, then certifies the result.
pub fn paulsen_sdp_upper<T: Real>(map: &BlockMap<T>, settings: &SdpSettings<T>) -> Result<T, SolverFailure> {
    assert_eq!(map.cod().len(), 1, "single codomain block expected");
    let b = map.cod()[0];
    let real = (0..map.dom().len()).all(|s| map.choi(s, 0).iter().all(|z| z.im == T::zero()));
    let mut next = 1;
    let mut layout = Vec::new();
    for &d in map.dom() {
        let n = d * b;
        let p = hermitian_params::<T>(next, n, real);
        next += p.len();
        let q = hermitian_params::<T>(next, n, real);
        next += q.len();
        layout.push((p, q));
    }
    let mut lmi = ComplexLmi::new(next);
    lmi.set_objective(0, -T::one());
    let trace_blocks = [lmi.add_block(czeros(b, b), real), lmi.add_block(czeros(b, b), real)];
    for tb in trace_blocks {
        for k in 0..b {
            lmi.add_term(tb, 0, k, k, cre(-T::one()));
        }
    }
    for (s, &d) in map.dom().iter().enumerate() {
        let n = d * b;
        let j = map.choi(s, 0);
        let mut c = czeros::<T>(2 * n, 2 * n);
        c.view_mut((0, n), (n, n)).copy_from(j);
        c.view_mut((n, 0), (n, n)).copy_from(&j.adjoint());
        let blk = lmi.add_block(c, real);
        for (params, off, tb) in [(&layout[s].0, 0, trace_blocks[0]), (&layout[s].1, n, trace_blocks[1])] {
            for &(var, r, c, v) in params {
                lmi.add_term(blk, var, off + r, off + c, -v);
                let (i, k, jj, l) = (r / b, r % b, c / b, c % b);
                if i == jj {
                    lmi.add_term(tb, var, k, l, v);
                }
            }
        }
    }
    let sol = lmi.solve(settings)?;
    let p: Vec<CMat<T>> = map.dom().iter().zip(&layout).map(|(&d, (pp, _))| assemble(pp, &sol.y, d * b)).collect();
    let q: Vec<CMat<T>> = map.dom().iter().zip(&layout).map(|(&d, (_, qq))| assemble(qq, &sol.y, d * b)).collect();
    Ok(paulsen_upper_bound(map, &p, &q))
}

fn random_unit<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> DVector<Cx<T>> {
    let v = DVector::from_fn(n, |_, _| cx(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0))));
    let norm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    v.map(|z| z / cre(norm))
}

/// `max ‖φ^{(n)}(X)‖` over contractions `X`, by alternating between the
/// polar maximiser in `X` and the top singular pair of `φ^{(n)}(X)`.
/// Every value returned is attained, hence a lower bound for `‖φ‖_cb`.
pub fn alternating_lower_bound<T: Real>(map: &BlockMap<T>, level: usize, restarts: usize, max_sweeps: usize, seed: u64) -> T {
    assert_eq!(map.cod().len(), 1, "single codomain block expected");
    let b = map.cod()[0];
    let n = level;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::zero();
    for _ in 0..restarts.max(1) {
        let mut xi: DVector<Cx<T>> = random_unit(&mut rng, n * b);
        let mut eta: DVector<Cx<T>> = random_unit(&mut rng, n * b);
        let mut value = T::zero();
        for _ in 0..max_sweeps {
            // X_σ maximising Σ_σ tr(X_σ K_σ)
            let xs: Vec<CMat<T>> = map
                .dom()
                .iter()
                .enumerate()
                .map(|(s, &d)| {
                    let j = map.choi(s, 0);
                    let k = CMat::from_fn(n * d, n * d, |r, c| {
                        let (q, jj, p, i) = (r / d, r % d, c / d, c % d);
                        let mut acc = cre(T::zero());
                        for kk in 0..b {
                            for l in 0..b {
                                acc += eta[p * b + kk].conj() * j[(i * b + kk, jj * b + l)] * xi[q * b + l];
                            }
                        }
                        acc
                    });
                    polar_maximiser(&k).0
                })
                .collect();
            // W = φ^{(n)}(X)
            let mut w = czeros::<T>(n * b, n * b);
            for (s, &d) in map.dom().iter().enumerate() {
                let j = map.choi(s, 0);
                let x = &xs[s];
                for p in 0..n {
                    for q in 0..n {
                        for i in 0..d {
                            for jj in 0..d {
                                let c = x[(p * d + i, q * d + jj)];
                                if c == cre(T::zero()) {
                                    continue;
                                }
                                for kk in 0..b {
                                    for l in 0..b {
                                        w[(p * b + kk, q * b + l)] += c * j[(i * b + kk, jj * b + l)];
                                    }
                                }
                            }
                        }
                    }
                }
            }
            let (sv, u, v) = top_singular(&w);
            xi = v;
            eta = u;
            let improved = sv > value * (T::one() + T::lit(1e-12));
            value = value.max(sv);
            if !improved {
                break;
            }
        }
        best = best.max(value);
    }
    best
}
