use nalgebra::DMatrix;
use num_complex::Complex;

use super::fit::{contract_a_raw, contract_b_raw, kron_fit_unconstrained};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_truncate, HermitianMatrix};
use crate::scalar::{creal, Real};

/// Stopping rule for [`lr_kron`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrKronOptions {
    /// Relative objective decrease below which the iteration stops.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LrKronOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

/// Estimated `A ⊗ B` with rank constraints and fit diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct KronCovModel<T: Real> {
    a_factor: HermitianMatrix<T>,
    b_factor: HermitianMatrix<T>,
    r_a: usize,
    r_b: usize,
    /// `‖S − A_k⊗B_k‖_F²`; entry 0 is the truncated initialisation.
    pub objective_trace: Vec<T>,
    pub converged: bool,
    pub iterations: usize,
    /// Numerical ranks of the returned factors (≤ the requested ranks).
    pub effective_rank_a: usize,
    pub effective_rank_b: usize,
    /// Mean diagonal power of `S` not explained by `A⊗B`, clipped at zero.
    pub noise_floor: T,
}

/// Eigenvalues beyond the rank must be below this fraction of the leading one.
pub const RANK_TOL: f64 = 1e-9;

fn numerical_rank<T: Real>(m: &HermitianMatrix<T>) -> usize {
    let e = hermitian_eig(m);
    if e.is_empty() || e.values[0] <= T::zero() {
        return 0;
    }
    let floor = T::tol(RANK_TOL) * e.values[0];
    e.values.iter().filter(|v| v.abs() > floor).count()
}

impl<T: Real> KronCovModel<T> {
    /// Builds a model from given factors (e.g. the true scenario factors or a loaded file).
    ///
    /// Factors must be psd with numerical rank within `r_a`, `r_b`. No normalisation is applied.
    pub fn from_factors(a: HermitianMatrix<T>, b: HermitianMatrix<T>, r_a: usize, r_b: usize) -> Result<Self> {
        let (p, q) = (a.dim(), b.dim());
        if r_a == 0 || r_a > p || r_b == 0 || r_b > q {
            return Err(Error::arg(format!(
                "ranks (r_a={r_a}, r_b={r_b}) must lie in 1..={p} and 1..={q}"
            )));
        }
        for (name, f) in [("spatial", &a), ("temporal", &b)] {
            if !f.is_psd() {
                f.check_psd()
                    .map_err(|e| Error::Validation(format!("{name} factor: {e}")))?;
            }
        }
        let (ea, eb) = (numerical_rank(&a), numerical_rank(&b));
        if ea > r_a || eb > r_b {
            return Err(Error::Validation(format!(
                "factor ranks ({ea}, {eb}) exceed requested ({r_a}, {r_b})"
            )));
        }
        let a = HermitianMatrix::from_hermitian_part(a.into_inner(), true);
        let b = HermitianMatrix::from_hermitian_part(b.into_inner(), true);
        Ok(Self {
            a_factor: a,
            b_factor: b,
            r_a,
            r_b,
            objective_trace: Vec::new(),
            converged: false,
            iterations: 0,
            effective_rank_a: ea,
            effective_rank_b: eb,
            noise_floor: T::zero(),
        })
    }

    pub fn a_factor(&self) -> &HermitianMatrix<T> {
        &self.a_factor
    }

    pub fn b_factor(&self) -> &HermitianMatrix<T> {
        &self.b_factor
    }

    pub fn r_a(&self) -> usize {
        self.r_a
    }

    pub fn r_b(&self) -> usize {
        self.r_b
    }

    pub fn p(&self) -> usize {
        self.a_factor.dim()
    }

    pub fn q(&self) -> usize {
        self.b_factor.dim()
    }

    /// Dense `A ⊗ B`.
    pub fn covariance(&self) -> HermitianMatrix<T> {
        HermitianMatrix::kron(&self.a_factor, &self.b_factor)
    }

    pub fn final_objective(&self) -> Option<T> {
        self.objective_trace.last().copied()
    }
}

/// `Σ_ij ‖S(i,j) − a_ij B‖_F²`, computed blockwise.
fn objective<T: Real>(s: &DMatrix<Complex<T>>, a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> T {
    let (p, q) = (a.nrows(), b.nrows());
    let mut total = T::zero();
    for j in 0..p {
        for i in 0..p {
            let aij = a[(i, j)];
            let blk = s.view((i * q, j * q), (q, q));
            total += blk
                .iter()
                .zip(b.iter())
                .fold(T::zero(), |acc, (x, y)| acc + (*x - aij * y).norm_sqr());
        }
    }
    total
}

/// Moves the scale into `b` so that `‖a‖_F = 1`.
fn normalize<T: Real>(a: &mut DMatrix<Complex<T>>, b: &mut DMatrix<Complex<T>>) -> Result<()> {
    let n = a.norm();
    if n == T::zero() || b.norm() == T::zero() {
        return Err(Error::Degenerate("a Kronecker factor collapsed to zero".into()));
    }
    *a *= creal(T::one() / n);
    *b *= creal(n);
    Ok(())
}

/// LR-Kron: alternating rank-constrained psd fit of `A ⊗ B` to `s`.
pub fn lr_kron<T: Real>(
    s: &HermitianMatrix<T>,
    p: usize,
    q: usize,
    r_a: usize,
    r_b: usize,
    opts: &LrKronOptions,
) -> Result<KronCovModel<T>> {
    if p == 0 || q == 0 || s.dim() != p * q {
        return Err(Error::arg(format!("covariance of size {} does not match p={p}, q={q}", s.dim())));
    }
    if r_a == 0 || r_a > p || r_b == 0 || r_b > q {
        return Err(Error::arg(format!("ranks (r_a={r_a}, r_b={r_b}) must lie in 1..={p} and 1..={q}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::arg("tolerance must be positive"));
    }
    let s_norm2 = s.as_matrix().norm_squared();
    if s_norm2 == T::zero() {
        return Err(Error::Degenerate("covariance is identically zero".into()));
    }
    if !s.is_psd() {
        s.check_psd()?;
    }

    let sm = s.as_matrix();
    let (a0, b0) = kron_fit_unconstrained(s, p, q)?;
    let (mut a, mut rank_a) = psd_truncate(a0.into_inner(), r_a);
    if rank_a == 0 {
        // The fit has no positive spatial part; fall back to the block-trace average, psd for psd s.
        (a, rank_a) = psd_truncate(contract_a_raw(sm, &DMatrix::identity(q, q), p, q)?, r_a);
    }
    let (mut b, mut rank_b) = psd_truncate(b0.into_inner(), r_b);
    if rank_b == 0 && rank_a > 0 {
        (b, rank_b) = psd_truncate(contract_b_raw(sm, &a, p, q)?, r_b);
    }
    if rank_a == 0 || rank_b == 0 {
        return Err(Error::Degenerate("covariance has no positive Kronecker component".into()));
    }
    normalize(&mut a, &mut b)?;

    let f0 = objective(sm, &a, &b);
    let denom = f0.max(T::default_epsilon() * s_norm2);
    let tol = T::lit(opts.tol);
    let mut trace = vec![f0];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let rb = contract_b_raw(sm, &a, p, q)?;
        let (nb, kb) = psd_truncate(rb, r_b);
        if kb == 0 {
            return Err(Error::Degenerate("temporal contraction has no positive part".into()));
        }
        let ra = contract_a_raw(sm, &nb, p, q)?;
        let (na, ka) = psd_truncate(ra, r_a);
        if ka == 0 {
            return Err(Error::Degenerate("spatial contraction has no positive part".into()));
        }
        a = na;
        b = nb;
        (rank_a, rank_b) = (ka, kb);
        normalize(&mut a, &mut b)?;
        iterations += 1;
        let f = objective(sm, &a, &b);
        let prev = *trace.last().expect("non-empty trace");
        trace.push(f);
        if (prev - f).abs() / denom < tol {
            converged = true;
            break;
        }
    }
    log::debug!("lr_kron: {iterations} iterations, converged={converged}");

    let explained = a.trace().re * b.trace().re;
    let total = s.trace_re();
    let pq = T::from_usize(p * q).expect("dimension");
    let noise_floor = ((total - explained) / pq).max(T::zero());

    Ok(KronCovModel {
        a_factor: HermitianMatrix::from_hermitian_part(a, true),
        b_factor: HermitianMatrix::from_hermitian_part(b, true),
        r_a,
        r_b,
        objective_trace: trace,
        converged,
        iterations,
        effective_rank_a: rank_a,
        effective_rank_b: rank_b,
        noise_floor,
    })
}
