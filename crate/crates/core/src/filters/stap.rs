use nalgebra::DMatrix;
use num_complex::Complex;
use std::fmt;

use super::steering::{temporal_matrix, SteeringVector};
use crate::error::{Error, Result};
use crate::estimation::{KronCovModel, SampleSet};
use crate::linalg::{eig_dense, hermitian_eig, CVector, HermitianMatrix};
use crate::scalar::{creal, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterKind {
    LowRank,
    KronClassical,
    KronStap,
    SpatialOnly,
}

impl FilterKind {
    pub const ALL: [FilterKind; 4] = [
        FilterKind::KronStap,
        FilterKind::SpatialOnly,
        FilterKind::KronClassical,
        FilterKind::LowRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::LowRank => "lr-stap",
            FilterKind::KronClassical => "kron-classical",
            FilterKind::KronStap => "kron-stap",
            FilterKind::SpatialOnly => "spatial-only",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Spatial,
    Temporal,
}

/// Non-fatal conditions noticed while building a filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterWarning {
    /// The factor projector removes its whole space, so the filter output is identically zero.
    FactorAnnihilated(Factor),
    /// `r_b > 0.9·q`: a smaller temporal rank is usually preferable.
    TemporalRankNearFull { r_b: usize, q: usize },
}

impl fmt::Display for FilterWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterWarning::FactorAnnihilated(Factor::Spatial) => {
                write!(f, "spatial rank equals p; the filter annihilates every input")
            }
            FilterWarning::FactorAnnihilated(Factor::Temporal) => {
                write!(f, "temporal rank equals q; the filter annihilates every input")
            }
            FilterWarning::TemporalRankNearFull { r_b, q } => {
                write!(f, "temporal rank {r_b} exceeds 0.9·q (q = {q}); consider truncating r_b")
            }
        }
    }
}

/// An orthogonal-projector STAP filter stored through its clutter bases.
#[derive(Clone, Debug)]
pub struct StapFilter<T: Real> {
    kind: FilterKind,
    p: usize,
    q: usize,
    spatial_basis: Option<DMatrix<Complex<T>>>,
    temporal_basis: Option<DMatrix<Complex<T>>>,
    joint_basis: Option<DMatrix<Complex<T>>>,
    warnings: Vec<FilterWarning>,
}

const ORTHO_TOL: f64 = 1e-10;

fn check_orthonormal<T: Real>(u: &DMatrix<Complex<T>>, what: &str) -> Result<()> {
    let gram = u.adjoint() * u;
    let err = (gram - DMatrix::identity(u.ncols(), u.ncols())).norm();
    if err > T::tol(ORTHO_TOL) {
        return Err(Error::Validation(format!("{what} basis is not orthonormal (‖U^H U − I‖ = {err:e})")));
    }
    Ok(())
}

/// `X` (p×q) from the antenna-major vector `x`: `X[i,k] = x[i·q + k]`.
pub fn to_pq<T: Real>(x: &[Complex<T>], p: usize, q: usize) -> DMatrix<Complex<T>> {
    DMatrix::from_row_slice(p, q, x)
}

/// Inverse of [`to_pq`].
pub fn from_pq<T: Real>(y: &DMatrix<Complex<T>>) -> CVector<T> {
    let (p, q) = y.shape();
    CVector::from_fn(p * q, |r, _| y[(r / q, r % q)])
}

fn leading_vectors<T: Real>(m: &HermitianMatrix<T>, r: usize) -> DMatrix<Complex<T>> {
    hermitian_eig(m).leading(r)
}

impl<T: Real> StapFilter<T> {
    /// Builds a filter from explicit bases, validating shapes and orthonormality.
    ///
    /// `LowRank` takes `joint`; `SpatialOnly` takes `spatial`; the Kronecker kinds take both factor bases.
    pub fn from_bases(
        kind: FilterKind,
        p: usize,
        q: usize,
        spatial: Option<DMatrix<Complex<T>>>,
        temporal: Option<DMatrix<Complex<T>>>,
        joint: Option<DMatrix<Complex<T>>>,
    ) -> Result<Self> {
        let need = match kind {
            FilterKind::LowRank => (false, false, true),
            FilterKind::SpatialOnly => (true, false, false),
            FilterKind::KronClassical | FilterKind::KronStap => (true, true, false),
        };
        let have = (spatial.is_some(), temporal.is_some(), joint.is_some());
        if need != have {
            return Err(Error::arg(format!("wrong set of bases for a {kind} filter")));
        }
        for (basis, rows, what) in [(&spatial, p, "spatial"), (&temporal, q, "temporal"), (&joint, p * q, "joint")] {
            if let Some(u) = basis {
                if u.nrows() != rows || u.ncols() > rows {
                    return Err(Error::arg(format!(
                        "{what} basis is {}x{}, expected {rows} rows and at most {rows} columns",
                        u.nrows(),
                        u.ncols()
                    )));
                }
                check_orthonormal(u, what)?;
            }
        }
        let mut warnings = Vec::new();
        if matches!(kind, FilterKind::KronStap) {
            if spatial.as_ref().is_some_and(|u| u.ncols() == p) {
                warnings.push(FilterWarning::FactorAnnihilated(Factor::Spatial));
            }
            if temporal.as_ref().is_some_and(|u| u.ncols() == q) {
                warnings.push(FilterWarning::FactorAnnihilated(Factor::Temporal));
            }
        }
        if matches!(kind, FilterKind::KronStap | FilterKind::KronClassical) {
            let r_b = temporal.as_ref().map_or(0, |u| u.ncols());
            if 10 * r_b > 9 * q {
                warnings.push(FilterWarning::TemporalRankNearFull { r_b, q });
            }
        }
        for w in &warnings {
            log::warn!("{kind} filter: {w}");
        }
        Ok(Self {
            kind,
            p,
            q,
            spatial_basis: spatial,
            temporal_basis: temporal,
            joint_basis: joint,
            warnings,
        })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn spatial_basis(&self) -> Option<&DMatrix<Complex<T>>> {
        self.spatial_basis.as_ref()
    }

    pub fn temporal_basis(&self) -> Option<&DMatrix<Complex<T>>> {
        self.temporal_basis.as_ref()
    }

    pub fn joint_basis(&self) -> Option<&DMatrix<Complex<T>>> {
        self.joint_basis.as_ref()
    }

    pub fn warnings(&self) -> &[FilterWarning] {
        &self.warnings
    }

    /// Dimension of the filter's range (trace of the projector).
    pub fn range_dim(&self) -> usize {
        let (p, q) = (self.p, self.q);
        let ra = self.spatial_basis.as_ref().map_or(0, |u| u.ncols());
        let rb = self.temporal_basis.as_ref().map_or(0, |u| u.ncols());
        match self.kind {
            FilterKind::LowRank => p * q - self.joint_basis.as_ref().map_or(0, |u| u.ncols()),
            FilterKind::KronClassical => p * q - ra * rb,
            FilterKind::KronStap => (p - ra) * (q - rb),
            FilterKind::SpatialOnly => (p - ra) * q,
        }
    }

    /// `F_A X = X − U_A(U_A^H X)`.
    fn spatial_stage(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let u = self.spatial_basis.as_ref().expect("spatial basis");
        x - u * (u.adjoint() * x)
    }

    /// `X F_Bᵀ = X − (X conj(U_B)) U_Bᵀ`.
    fn temporal_stage(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let u = self.temporal_basis.as_ref().expect("temporal basis");
        x - (x * u.conjugate()) * u.transpose()
    }

    /// `F` applied to a `p × q` reshaped sample.
    pub fn apply_pq(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        match self.kind {
            FilterKind::SpatialOnly => self.spatial_stage(x),
            FilterKind::KronStap => self.temporal_stage(&self.spatial_stage(x)),
            FilterKind::KronClassical => {
                let ua = self.spatial_basis.as_ref().expect("spatial basis");
                let ub = self.temporal_basis.as_ref().expect("temporal basis");
                let core = (ua.adjoint() * x) * ub.conjugate();
                x - ua * core * ub.transpose()
            }
            FilterKind::LowRank => to_pq(self.apply_vec(&from_pq(x)).as_slice(), self.p, self.q),
        }
    }

    fn apply_vec(&self, x: &CVector<T>) -> CVector<T> {
        match self.kind {
            FilterKind::LowRank => {
                let u = self.joint_basis.as_ref().expect("joint basis");
                x - u * (u.adjoint() * x)
            }
            _ => from_pq(&self.apply_pq(&to_pq(x.as_slice(), self.p, self.q))),
        }
    }

    /// Applies the filter to every column of a `pq × m` sample matrix.
    pub fn apply_columns(&self, xs: &DMatrix<Complex<T>>) -> Result<DMatrix<Complex<T>>> {
        if xs.nrows() != self.p * self.q {
            return Err(Error::arg(format!("samples have length {}, expected {}", xs.nrows(), self.p * self.q)));
        }
        if let FilterKind::LowRank = self.kind {
            let u = self.joint_basis.as_ref().expect("joint basis");
            return Ok(xs - u * (u.adjoint() * xs));
        }
        let mut out = xs.clone();
        for (mut col, src) in out.column_iter_mut().zip(xs.column_iter()) {
            let x = CVector::from_column_slice(src.as_slice());
            col.copy_from(&self.apply_vec(&x));
        }
        Ok(out)
    }

    /// Dense `pq × pq` realisation, for tests and small problems.
    pub fn dense(&self) -> DMatrix<Complex<T>> {
        let n = self.p * self.q;
        self.apply_columns(&DMatrix::identity(n, n)).expect("matching size")
    }
}

/// `F x`, computed factorwise for the Kronecker kinds.
pub fn apply_filter<T: Real>(f: &StapFilter<T>, x: &CVector<T>) -> Result<CVector<T>> {
    if x.len() != f.p * f.q {
        return Err(Error::arg(format!("sample has length {}, expected {}", x.len(), f.p * f.q)));
    }
    Ok(f.apply_vec(x))
}

/// LR-STAP: `F = I − U U^H` with `U` the top-`r` eigenvectors of `s`.
pub fn lr_stap_filter<T: Real>(s: &HermitianMatrix<T>, p: usize, q: usize, r: usize) -> Result<StapFilter<T>> {
    if s.dim() != p * q {
        return Err(Error::arg(format!("covariance of size {} does not match p={p}, q={q}", s.dim())));
    }
    if r > p * q {
        return Err(Error::arg(format!("rank {r} exceeds dimension {}", p * q)));
    }
    StapFilter::from_bases(FilterKind::LowRank, p, q, None, None, Some(leading_vectors(s, r)))
}

/// LR-STAP from training samples without forming the `pq × pq` SCM when `n < pq`.
///
/// The leading eigenvectors of `XX^H/n` are `X v_i/√(n λ_i)` for the eigenpairs of `X^H X/n`.
/// When `r` exceeds the number of clearly positive eigenvalues the remaining directions lie in the
/// SCM null space, where any orthonormal completion is an equally valid eigenbasis; a deterministic
/// Gram–Schmidt completion over the coordinate vectors is used.
pub fn lr_stap_filter_from_samples<T: Real>(data: &SampleSet<T>, r: usize) -> Result<StapFilter<T>> {
    let (p, q, n) = (data.p(), data.q(), data.len());
    let dim = p * q;
    if r > dim {
        return Err(Error::arg(format!("rank {r} exceeds dimension {dim}")));
    }
    if n >= dim {
        return lr_stap_filter(&crate::estimation::sample_covariance(data), p, q, r);
    }
    let x = data.as_matrix();
    let gram = eig_dense(crate::linalg::symmetrize(x.adjoint() * x));
    let floor = T::tol(1e-10) * gram.values.get(0).copied().unwrap_or_else(T::zero);
    let positive = gram.values.iter().take(r).filter(|&&v| v > floor && v > T::zero()).count();
    let mut u = DMatrix::zeros(dim, r);
    if positive > 0 {
        let mut lead = x * gram.leading(positive);
        for (mut col, lam) in lead.column_iter_mut().zip(gram.values.iter()) {
            col *= creal(T::one() / lam.sqrt());
        }
        u.columns_mut(0, positive).copy_from(&lead);
    }
    complete_basis(&mut u, positive);
    StapFilter::from_bases(FilterKind::LowRank, p, q, None, None, Some(u))
}

/// Fills columns `filled..` of `u` with coordinate vectors orthogonalised (twice) against the earlier columns.
fn complete_basis<T: Real>(u: &mut DMatrix<Complex<T>>, filled: usize) {
    let (dim, r) = u.shape();
    let mut k = filled;
    let mut e = 0;
    while k < r && e < dim {
        let mut v = DMatrix::<Complex<T>>::zeros(dim, 1);
        v[(e, 0)] = creal(T::one());
        e += 1;
        for _ in 0..2 {
            let basis = u.columns(0, k);
            let coef = basis.adjoint() * &v;
            v -= basis * coef;
        }
        let nv = v.norm();
        if nv > T::lit(0.5) {
            u.set_column(k, &(v.column(0) * creal(T::one() / nv)));
            k += 1;
        }
    }
}

fn factor_bases<T: Real>(model: &KronCovModel<T>) -> (DMatrix<Complex<T>>, DMatrix<Complex<T>>) {
    (
        leading_vectors(model.a_factor(), model.r_a()),
        leading_vectors(model.b_factor(), model.r_b()),
    )
}

/// `I − (U_A U_A^H) ⊗ (U_B U_B^H)`.
pub fn kron_classical_filter<T: Real>(model: &KronCovModel<T>) -> Result<StapFilter<T>> {
    let (ua, ub) = factor_bases(model);
    StapFilter::from_bases(FilterKind::KronClassical, model.p(), model.q(), Some(ua), Some(ub), None)
}

/// `(I − U_A U_A^H) ⊗ (I − U_B U_B^H)`.
pub fn kron_stap_filter<T: Real>(model: &KronCovModel<T>) -> Result<StapFilter<T>> {
    let (ua, ub) = factor_bases(model);
    StapFilter::from_bases(FilterKind::KronStap, model.p(), model.q(), Some(ua), Some(ub), None)
}

/// `(I − U_A U_A^H) ⊗ I`.
pub fn spatial_only_filter<T: Real>(model: &KronCovModel<T>) -> Result<StapFilter<T>> {
    let ua = leading_vectors(model.a_factor(), model.r_a());
    StapFilter::from_bases(FilterKind::SpatialOnly, model.p(), model.q(), Some(ua), None, None)
}

/// Per-bank-entry `max_{‖h‖=1} |(h ⊗ b_i)^H F x|` together with the maximising `h`.
pub fn detection_statistic_with_h<T: Real>(
    f: &StapFilter<T>,
    x: &CVector<T>,
    bank: &[SteeringVector<T>],
) -> Result<Vec<(T, CVector<T>)>> {
    check_bank(f, bank)?;
    let y = to_pq(apply_filter(f, x)?.as_slice(), f.p, f.q);
    let z = y * temporal_matrix(bank).conjugate();
    Ok(z.column_iter()
        .map(|c| {
            let norm = c.norm();
            let h = if norm > T::zero() {
                c.into_owned() * creal(T::one() / norm)
            } else {
                super::steering::unit(f.p, 0)
            };
            (norm, h)
        })
        .collect())
}

/// Closed-form detection statistic: the norm of `z_k = (e_k ⊗ b_i)^H F x`.
pub fn detection_statistic<T: Real>(f: &StapFilter<T>, x: &CVector<T>, bank: &[SteeringVector<T>]) -> Result<Vec<T>> {
    check_bank(f, bank)?;
    let y = to_pq(apply_filter(f, x)?.as_slice(), f.p, f.q);
    let z = y * temporal_matrix(bank).conjugate();
    Ok(z.column_iter().map(|c| c.norm()).collect())
}

/// Detection statistics of every sample (column of `xs`) against the bank; result is `m × N`.
pub fn detection_statistics<T: Real>(
    f: &StapFilter<T>,
    xs: &DMatrix<Complex<T>>,
    bank: &[SteeringVector<T>],
) -> Result<DMatrix<T>> {
    check_bank(f, bank)?;
    let ys = f.apply_columns(xs)?;
    let bconj = temporal_matrix(bank).conjugate();
    let mut out = DMatrix::zeros(xs.ncols(), bank.len());
    for (m, col) in ys.column_iter().enumerate() {
        let z = to_pq(col.as_slice(), f.p, f.q) * &bconj;
        for (i, c) in z.column_iter().enumerate() {
            out[(m, i)] = c.norm();
        }
    }
    Ok(out)
}

fn check_bank<T: Real>(f: &StapFilter<T>, bank: &[SteeringVector<T>]) -> Result<()> {
    if let Some(s) = bank.iter().find(|s| s.q() != f.q) {
        return Err(Error::arg(format!("steering vector has q = {}, filter has q = {}", s.q(), f.q)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::steering::{doppler_grid, steering_bank};
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_c(rng: &mut ChaCha8Rng) -> Complex<f64> {
        cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }

    fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> CVector<f64> {
        CVector::from_fn(n, |_, _| rand_c(rng))
    }

    fn orthonormal(rng: &mut ChaCha8Rng, n: usize, r: usize) -> DMatrix<Complex<f64>> {
        let g = DMatrix::from_fn(n, r.max(1), |_, _| rand_c(rng));
        g.qr().q().columns(0, r).into_owned()
    }

    fn model(rng: &mut ChaCha8Rng, p: usize, q: usize, ra: usize, rb: usize) -> KronCovModel<f64> {
        let ua = orthonormal(rng, p, ra);
        let ub = orthonormal(rng, q, rb);
        let a = HermitianMatrix::from_hermitian_part(&ua * ua.adjoint(), true);
        let b = HermitianMatrix::from_hermitian_part(&ub * ub.adjoint() * creal(3.0), true);
        KronCovModel::from_factors(a, b, ra, rb).unwrap()
    }

    #[test]
    fn lr_rank_zero_is_identity() {
        let s = HermitianMatrix::<f64>::from_diagonal(&[5.0, 2.0, 1.0, 0.5]);
        let f = lr_stap_filter(&s, 2, 2, 0).unwrap();
        assert!((f.dense() - DMatrix::identity(4, 4)).norm() < 1e-14);
        assert!(lr_stap_filter(&s, 2, 2, 5).is_err());
    }

    #[test]
    fn lr_diagonal_case() {
        let s = HermitianMatrix::<f64>::from_diagonal(&[5.0, 2.0, 1.0]);
        let f = lr_stap_filter(&s, 1, 3, 1).unwrap();
        let want = HermitianMatrix::<f64>::from_diagonal(&[0.0, 1.0, 1.0]);
        assert!((f.dense() - want.as_matrix()).norm() < 1e-12);
    }

    #[test]
    fn thin_route_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = DMatrix::from_fn(24, 9, |_, _| rand_c(&mut rng));
        let data = SampleSet::from_matrix(3, 8, x.clone()).unwrap();
        for r in [0, 3, 9] {
            let thin = lr_stap_filter_from_samples(&data, r).unwrap();
            let dense = lr_stap_filter(&crate::estimation::sample_covariance(&data), 3, 8, r).unwrap();
            assert!((thin.dense() - dense.dense()).norm() < 1e-9, "r = {r}");
        }
        // Beyond the sample rank the completion is arbitrary, but the filter is still a rank-(pq − r)
        // projector that annihilates the training data.
        for r in [12, 24] {
            let f = lr_stap_filter_from_samples(&data, r).unwrap();
            let d = f.dense();
            assert!((&d * &d - &d).norm() < 1e-10);
            assert!((d.trace().re - (24 - r) as f64).abs() < 1e-10);
            assert!(f.apply_columns(&x).unwrap().norm() < 1e-10 * x.norm());
        }
    }

    #[test]
    fn classical_full_rank_cancels_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = kron_classical_filter(&model(&mut rng, 2, 3, 2, 3)).unwrap();
        assert!(f.dense().norm() < 1e-12);
    }

    #[test]
    fn kron_stap_warnings() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = kron_stap_filter(&model(&mut rng, 2, 10, 2, 10)).unwrap();
        assert!(f.warnings().contains(&FilterWarning::FactorAnnihilated(Factor::Spatial)));
        assert!(f.warnings().contains(&FilterWarning::FactorAnnihilated(Factor::Temporal)));
        assert!(f.warnings().contains(&FilterWarning::TemporalRankNearFull { r_b: 10, q: 10 }));
        let g = kron_stap_filter(&model(&mut rng, 3, 10, 1, 9)).unwrap();
        assert!(g.warnings().is_empty());
    }

    #[test]
    fn target_orthogonal_to_clutter_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = model(&mut rng, 3, 8, 1, 2);
        let ua = hermitian_eig(m.a_factor()).leading(1);
        let ub = hermitian_eig(m.b_factor()).leading(2);
        let mut a = rand_vec(&mut rng, 3);
        a -= &ua * (ua.adjoint() * &a);
        let mut b = rand_vec(&mut rng, 8);
        b -= &ub * (ub.adjoint() * &b);
        let d = a.kronecker(&b);
        for f in [kron_stap_filter(&m).unwrap(), kron_classical_filter(&m).unwrap(), spatial_only_filter(&m).unwrap()] {
            assert!((apply_filter(&f, &d).unwrap() - &d).norm() < 1e-12);
        }
        // Clutter direction in range(U_A) ⊗ range(U_B) is removed by the two-sided filter.
        let c = ua.column(0).into_owned().kronecker(&ub.column(1).into_owned());
        assert!(apply_filter(&kron_stap_filter(&m).unwrap(), &c).unwrap().norm() < 1e-12);
    }

    #[test]
    fn kron_stap_is_spatial_then_temporal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = model(&mut rng, 3, 6, 1, 2);
        let ks = kron_stap_filter(&m).unwrap();
        let sp = spatial_only_filter(&m).unwrap();
        let ub = ks.temporal_basis().unwrap().clone();
        let ft = DMatrix::<Complex<f64>>::identity(3, 3).kronecker(&(DMatrix::identity(6, 6) - &ub * ub.adjoint()));
        for _ in 0..10 {
            let x = rand_vec(&mut rng, 18);
            let two = apply_filter(&sp, &(&ft * &x)).unwrap();
            assert!((apply_filter(&ks, &x).unwrap() - two).norm() < 1e-10);
        }
        assert_eq!(sp.range_dim(), 2 * 6);
        assert!((sp.dense().trace().re - 12.0).abs() < 1e-10);
    }

    #[test]
    fn rank_one_spatial_kills_h_kron_anything() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = model(&mut rng, 3, 5, 1, 2);
        let h = hermitian_eig(m.a_factor()).leading(1).column(0).into_owned();
        let x = h.kronecker(&rand_vec(&mut rng, 5));
        assert!(apply_filter(&spatial_only_filter(&m).unwrap(), &x).unwrap().norm() < 1e-12);
    }

    #[test]
    fn length_mismatch_rejected() {
        let f = lr_stap_filter(&HermitianMatrix::<f64>::identity(4), 2, 2, 1).unwrap();
        assert!(apply_filter(&f, &CVector::zeros(3)).is_err());
        let bank = steering_bank(2, 3, &[0.1], 1.0).unwrap();
        assert!(detection_statistic(&f, &CVector::zeros(4), &bank).is_err());
    }

    #[test]
    fn detection_of_matched_target() {
        let f = lr_stap_filter(&HermitianMatrix::<f64>::identity(24), 3, 8, 0).unwrap();
        let dopplers = doppler_grid(8);
        let bank = steering_bank(3, 8, &dopplers, 1.0).unwrap();
        assert!(detection_statistic(&f, &CVector::zeros(24), &bank).unwrap().iter().all(|v| *v == 0.0));
        let x = bank[3].full();
        let out = detection_statistic_with_h(&f, &x, &bank).unwrap();
        assert!((out[3].0 - 1.0).abs() < 1e-12);
        assert!((out[3].1.dotc(&bank[3].spatial).norm() - 1.0).abs() < 1e-12);
        // Grid bins are DFT-orthogonal: every other bin sees nothing.
        for (i, (v, _)) in out.iter().enumerate() {
            if i != 3 {
                assert!(*v < 1e-12);
            }
        }
    }

    #[test]
    fn batched_statistics_match_single() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = model(&mut rng, 3, 8, 1, 2);
        let bank = steering_bank(3, 8, &doppler_grid(11), 0.5).unwrap();
        let xs = DMatrix::from_fn(24, 4, |_, _| rand_c(&mut rng));
        for f in [kron_stap_filter(&m).unwrap(), lr_stap_filter(&m.covariance(), 3, 8, 2).unwrap()] {
            let batch = detection_statistics(&f, &xs, &bank).unwrap();
            for c in 0..4 {
                let single = detection_statistic(&f, &xs.column(c).into_owned(), &bank).unwrap();
                for i in 0..11 {
                    assert!((batch[(c, i)] - single[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in FilterKind::ALL {
            assert_eq!(FilterKind::parse(k.name()), Some(k));
        }
    }
}
