//! Seeded randomized checks of the period transformation laws: group-action
//! sanity, the two determinant lemmas, invariance of the (2,-1)-form, and
//! first/second-order operator covariance on scalar test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::geometry::ModelGeometry;
use super::linalg::{bilinear, det_rows, inv3, row_mat, C64, CMat2};
use super::siegel::{
    grad3, nabla, nabla_weights, transform_period, PeriodTransform, SiegelPoint, FD_STEP,
};
use super::symplectic::{random_symplectic, SymplecticElement};
use crate::error::ModularError;

/// Frame determinant floor below which a sample is rejected.
const DEN_FLOOR: f64 = 1e-2;
/// Resample attempts per trial before the trial is reported as failed.
const MAX_ATTEMPTS: usize = 64;
/// Outer step of the nested second-order finite differences.
const FD_STEP_OUTER: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Composition law, image symmetry/positivity, det N * det M = 1.
    GroupAction,
    /// N*C is symmetric.
    NcSymmetry,
    /// Coordinate gradients of log det M equal the N*C entries.
    LogdetGradient,
    /// Directional period derivative of N equals -N C nu^T nu N.
    NablaN,
    /// The three frame-determinant identities under nu -> nu N.
    DetIdentities,
    /// (x - y) * Psi(x, y) -> 1 at coincidence.
    PoleNormalization,
    /// Psi is unchanged under the transformed data.
    PsiInvariance,
    /// -nu(y1) (grad_x N) C nu(y2)^T factorizes through nu(x) N C nu^T.
    OdeIdentity,
    /// First-order operator covariance of det M^(c/2) * F.
    O1Covariance,
    /// Second-order operator covariance (nested finite differences).
    O2Covariance,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::GroupAction,
        CheckKind::NcSymmetry,
        CheckKind::LogdetGradient,
        CheckKind::NablaN,
        CheckKind::DetIdentities,
        CheckKind::PoleNormalization,
        CheckKind::PsiInvariance,
        CheckKind::OdeIdentity,
        CheckKind::O1Covariance,
        CheckKind::O2Covariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::GroupAction => "group_action",
            CheckKind::NcSymmetry => "nc_symmetry",
            CheckKind::LogdetGradient => "logdet_gradient",
            CheckKind::NablaN => "nabla_n",
            CheckKind::DetIdentities => "det_identities",
            CheckKind::PoleNormalization => "pole",
            CheckKind::PsiInvariance => "psi",
            CheckKind::OdeIdentity => "ode_identity",
            CheckKind::O1Covariance => "o1",
            CheckKind::O2Covariance => "o2",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckKind::GroupAction => 1e-9,
            CheckKind::NcSymmetry => 1e-12,
            CheckKind::O1Covariance => 1e-5,
            CheckKind::O2Covariance => 1e-3,
            _ => 1e-6,
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            CheckKind::O1Covariance => 50,
            CheckKind::O2Covariance => 25,
            _ => 100,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: usize,
    pub word_length: usize,
    pub tolerance: f64,
    /// Central-charge values exercised by the covariance checks.
    pub c_values: Vec<f64>,
}

impl CheckConfig {
    pub fn for_kind(kind: CheckKind) -> CheckConfig {
        CheckConfig {
            seed: 42,
            trials: kind.default_trials(),
            word_length: 8,
            tolerance: kind.default_tolerance(),
            c_values: vec![0.0, 2.0, -22.0 / 5.0],
        }
    }
}

/// Reproduction data for one trial: the generator word, the base point, the
/// sample points and the observed errors.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub word: Vec<String>,
    pub omega: SiegelPoint,
    pub points: Vec<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_value: Option<f64>,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub seed: u64,
    pub trials: usize,
    pub word_length: usize,
    pub tolerance: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub pass: bool,
    /// The trial with the largest relative error, for reproduction.
    pub worst_trial: Option<TrialRecord>,
}

/// Relative error against a reference magnitude, floored at unit scale so
/// near-zero references do not inflate it.
fn rel(abs: f64, reference: f64) -> f64 {
    abs / reference.abs().max(1.0)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn sample_point_z(rng: &mut impl Rng) -> C64 {
    let r = rng.gen_range(0.6..1.4);
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

/// Sample `k` points pairwise separated by at least 0.4.
fn sample_points(rng: &mut impl Rng, k: usize) -> Vec<C64> {
    loop {
        let pts: Vec<C64> = (0..k).map(|_| sample_point_z(rng)).collect();
        let ok = (0..k).all(|i| (0..i).all(|j| (pts[i] - pts[j]).norm() >= 0.4));
        if ok {
            return pts;
        }
    }
}

fn sample_transform(
    rng: &mut impl Rng,
    word_length: usize,
) -> Result<(SymplecticElement, SiegelPoint, PeriodTransform), ModularError> {
    let gamma = random_symplectic(rng, word_length)?;
    let omega = SiegelPoint::random(rng);
    let t = transform_period(&gamma, &omega)?;
    Ok((gamma, omega, t))
}

fn det_m_at(gamma: &SymplecticElement, p: &SiegelPoint) -> C64 {
    let c = CMat2::from_int(&gamma.c);
    let d = CMat2::from_int(&gamma.d);
    c.mul(&p.as_matrix()).add(&d).det()
}

fn n_at(gamma: &SymplecticElement, p: &SiegelPoint) -> CMat2 {
    let c = CMat2::from_int(&gamma.c);
    let d = CMat2::from_int(&gamma.d);
    c.mul(&p.as_matrix()).add(&d).inverse()
}

/// Coordinate gradient of `log det M`, computed as `(grad det M) / det M`
/// to stay off the logarithm branch cut. `det M` is quadratic in the
/// coordinates, so the extrapolated central difference is exact to rounding.
fn logdet_m_grad(gamma: &SymplecticElement, omega: &SiegelPoint) -> [C64; 3] {
    let f = |p: &SiegelPoint| det_m_at(gamma, p);
    let g = grad3(&f, omega, FD_STEP, true);
    let d0 = det_m_at(gamma, omega);
    [g[0] / d0, g[1] / d0, g[2] / d0]
}

/// Mixed coordinate weights of the two-point first-order operator:
/// `(nu1 nu1', (nu1 nu2' + nu2 nu1')/2, nu2 nu2')`.
fn mixed_weights(n1: [C64; 2], n2: [C64; 2]) -> [C64; 3] {
    [
        n1[0] * n2[0],
        (n1[0] * n2[1] + n1[1] * n2[0]) * 0.5,
        n1[1] * n2[1],
    ]
}

fn dot3(a: [C64; 3], b: [C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Transformed bidifferential: the double sum over coordinate gradients of
/// `log det M` with symmetrised differential weights subtracted from omega.
fn omega_gamma(
    geom: &ModelGeometry,
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
    x: C64,
    y: C64,
) -> C64 {
    let g = logdet_m_grad(gamma, omega);
    let correction = dot3(mixed_weights(geom.nu(x, omega), geom.nu(y, omega)), g);
    geom.omega(x, y, omega) - correction
}

/// The (2,-1)-form on the model data: numerator from the bidifferential and
/// the directional period derivative of the frame, normalized by the
/// point-derivative frame determinant.
pub fn evaluate_psi(
    geom: &ModelGeometry,
    omega: &SiegelPoint,
    x: C64,
    y: C64,
) -> Result<C64, ModularError> {
    let ny = geom.nu(y, omega);
    let den = det_rows(ny, geom.dnu_dy(y, omega));
    if den.norm() < DEN_FLOOR {
        return Err(ModularError::DegenerateSample(
            "frame determinant too small".into(),
        ));
    }
    let nx = geom.nu(x, omega);
    let mut grad_nu_y = [C64::new(0.0, 0.0); 2];
    for (a, out) in grad_nu_y.iter_mut().enumerate() {
        let f = |p: &SiegelPoint| geom.nu(y, p)[a];
        *out = nabla(&grad3(&f, omega, FD_STEP, true), nx);
    }
    let num = geom.omega(x, y, omega) * det_rows(nx, ny) + det_rows(ny, grad_nu_y);
    Ok(-num / den)
}

/// The (2,-1)-form rebuilt from the transformed data `nu N`, the transformed
/// bidifferential, and the untransformed directional derivative weights.
fn evaluate_psi_gamma(
    geom: &ModelGeometry,
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
    t: &PeriodTransform,
    x: C64,
    y: C64,
) -> Result<C64, ModularError> {
    let nu_g = |z: C64, p: &SiegelPoint| row_mat(geom.nu(z, p), &n_at(gamma, p));
    let ny_g = row_mat(geom.nu(y, omega), &t.n);
    let den = det_rows(ny_g, row_mat(geom.dnu_dy(y, omega), &t.n));
    if den.norm() < DEN_FLOOR * t.n.det().norm() {
        return Err(ModularError::DegenerateSample(
            "transformed frame determinant too small".into(),
        ));
    }
    let nx_plain = geom.nu(x, omega);
    let mut grad_nu_y = [C64::new(0.0, 0.0); 2];
    for (a, out) in grad_nu_y.iter_mut().enumerate() {
        let f = |p: &SiegelPoint| nu_g(y, p)[a];
        *out = nabla(&grad3(&f, omega, FD_STEP, true), nx_plain);
    }
    let nx_g = row_mat(nx_plain, &t.n);
    let num = omega_gamma(geom, gamma, omega, x, y) * det_rows(nx_g, ny_g)
        + det_rows(ny_g, grad_nu_y);
    Ok(-num / den)
}

/// Entrywise directional period derivative of `N` by finite differences.
fn nabla_n_fd(gamma: &SymplecticElement, omega: &SiegelPoint, nx: [C64; 2]) -> CMat2 {
    let mut out = CMat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            let f = |p: &SiegelPoint| n_at(gamma, p).0[i][j];
            out.0[i][j] = nabla(&grad3(&f, omega, FD_STEP, true), nx);
        }
    }
    out
}

/// Jacobian `J[i][j] = d(image coordinate i)/d(coordinate j)` of the period
/// map at `omega`.
fn transform_jacobian(
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
) -> Result<[[C64; 3]; 3], ModularError> {
    let mut jac = [[C64::new(0.0, 0.0); 3]; 3];
    let h = C64::new(FD_STEP, 0.0);
    for col in 0..3 {
        let plus = transform_period(gamma, &omega.perturbed(col, h))?;
        let minus = transform_period(gamma, &omega.perturbed(col, -h))?;
        let cp = plus.image.coords();
        let cm = minus.image.coords();
        for (row, slot) in jac.iter_mut().enumerate() {
            slot[col] = (cp[row] - cm[row]) / (h * 2.0);
        }
    }
    Ok(jac)
}

/// Reject samples where `det M^(c/2)` would straddle the principal branch
/// cut anywhere on the finite-difference stencil.
fn guard_branch(det: C64) -> Result<(), ModularError> {
    if det.norm() < 5e-2 || (det.re < 0.0 && det.im.abs() < 0.1 * det.norm()) {
        return Err(ModularError::DegenerateSample(
            "det M too close to the branch cut".into(),
        ));
    }
    Ok(())
}

/// Gradient of a scalar in the transformed coordinates via the inverse
/// Jacobian: `dG/dW_j = sum_i dG/dw_i * K[i][j]` for `K = J^-1`.
fn chain_gradient(grad: [C64; 3], k: &[[C64; 3]; 3]) -> [C64; 3] {
    let mut out = [C64::new(0.0, 0.0); 3];
    for (j, slot) in out.iter_mut().enumerate() {
        for i in 0..3 {
            *slot += grad[i] * k[i][j];
        }
    }
    out
}

/// The order-two operator applied to a scalar with value `val`, coordinate
/// gradient `grad` and Hessian `hess`, with first-order weights `w1`, `w2`,
/// mixed weights `mixed`, connections `s1`, `s2` and bidifferential `om12`.
#[allow(clippy::too_many_arguments)]
fn apply_order_two(
    w1: [C64; 3],
    w2: [C64; 3],
    mixed: [C64; 3],
    s1: C64,
    s2: C64,
    om12: C64,
    c: f64,
    val: C64,
    grad: [C64; 3],
    hess: &[[C64; 3]; 3],
) -> C64 {
    let c12 = C64::new(c / 12.0, 0.0);
    let mut second = C64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            second += w1[i] * w2[j] * hess[i][j];
        }
    }
    second
        + c12 * s1 * dot3(w2, grad)
        + c12 * s2 * dot3(w1, grad)
        + c12 * c12 * s1 * s2 * val
        + om12 * dot3(mixed, grad) * 2.0
        + C64::new(c / 2.0, 0.0) * om12 * om12 * val
}

struct CovarianceSides {
    lhs: C64,
    rhs: C64,
}

/// First-order covariance of `G = det M^(c/2) * F`: transformed operator and
/// connection on `G` versus `det M^(c/2)` times the plain operator on `F`.
fn o1_sides(
    geom: &ModelGeometry,
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
    t: &PeriodTransform,
    x: C64,
    c: f64,
) -> Result<CovarianceSides, ModularError> {
    let det0 = t.m.det();
    guard_branch(det0)?;
    let c_half = C64::new(c / 2.0, 0.0);
    let c12 = C64::new(c / 12.0, 0.0);
    let g_fn = |p: &SiegelPoint| det_m_at(gamma, p).powc(c_half) * geom.f_scalar(p);
    let grad_g = grad3(&g_fn, omega, FD_STEP, true);
    let k = inv3(&transform_jacobian(gamma, omega)?);
    let grad_gamma = chain_gradient(grad_g, &k);
    let nx = geom.nu(x, omega);
    let w_gamma = nabla_weights(row_mat(nx, &t.n));
    let s_gamma = geom.s(x, omega) - nabla(&logdet_m_grad(gamma, omega), nx) * 6.0;
    let lhs = dot3(w_gamma, grad_gamma) + c12 * s_gamma * g_fn(omega);
    let grad_f = grad3(&|p: &SiegelPoint| geom.f_scalar(p), omega, FD_STEP, true);
    let rhs = det0.powc(c_half)
        * (nabla(&grad_f, nx) + c12 * geom.s(x, omega) * geom.f_scalar(omega));
    Ok(CovarianceSides { lhs, rhs })
}

/// Second-order covariance; transformed second derivatives use nested
/// chain-rule finite differences with a wider outer step.
fn o2_sides(
    geom: &ModelGeometry,
    gamma: &SymplecticElement,
    omega: &SiegelPoint,
    t: &PeriodTransform,
    x1: C64,
    x2: C64,
    c: f64,
) -> Result<CovarianceSides, ModularError> {
    let det0 = t.m.det();
    guard_branch(det0)?;
    let c_half = C64::new(c / 2.0, 0.0);
    let g_fn = |p: &SiegelPoint| det_m_at(gamma, p).powc(c_half) * geom.f_scalar(p);
    let f_fn = |p: &SiegelPoint| geom.f_scalar(p);

    // Plain side on F.
    let f0 = f_fn(omega);
    let grad_f = grad3(&f_fn, omega, FD_STEP, true);
    let mut hess_f = [[C64::new(0.0, 0.0); 3]; 3];
    let h_out = C64::new(FD_STEP_OUTER, 0.0);
    for (i, row) in hess_f.iter_mut().enumerate() {
        let gp = grad3(&f_fn, &omega.perturbed(i, h_out), FD_STEP, true);
        let gm = grad3(&f_fn, &omega.perturbed(i, -h_out), FD_STEP, true);
        for j in 0..3 {
            row[j] = (gp[j] - gm[j]) / (h_out * 2.0);
        }
    }
    let n1 = geom.nu(x1, omega);
    let n2 = geom.nu(x2, omega);
    let rhs_operator = apply_order_two(
        nabla_weights(n1),
        nabla_weights(n2),
        mixed_weights(n1, n2),
        geom.s(x1, omega),
        geom.s(x2, omega),
        geom.omega(x1, x2, omega),
        c,
        f0,
        grad_f,
        &hess_f,
    );
    let rhs = det0.powc(c_half) * rhs_operator;

    // Transformed side on G. The gradient in the image coordinates is a
    // function of the base point; its outer finite difference is chained
    // through the inverse Jacobian at the center.
    let grad_in_image = |p: &SiegelPoint| -> Result<[C64; 3], ModularError> {
        let k = inv3(&transform_jacobian(gamma, p)?);
        Ok(chain_gradient(grad3(&g_fn, p, FD_STEP, true), &k))
    };
    let grad_gamma = grad_in_image(omega)?;
    let k0 = inv3(&transform_jacobian(gamma, omega)?);
    let mut hess_gamma = [[C64::new(0.0, 0.0); 3]; 3];
    for base in 0..3 {
        let gp = grad_in_image(&omega.perturbed(base, h_out))?;
        let gm = grad_in_image(&omega.perturbed(base, -h_out))?;
        for (i, row) in hess_gamma.iter_mut().enumerate() {
            for j in 0..3 {
                row[j] += k0[base][i] * (gp[j] - gm[j]) / (h_out * 2.0);
            }
        }
    }
    let n1_g = row_mat(n1, &t.n);
    let n2_g = row_mat(n2, &t.n);
    let logdet_grad = logdet_m_grad(gamma, omega);
    let lhs = apply_order_two(
        nabla_weights(n1_g),
        nabla_weights(n2_g),
        mixed_weights(n1_g, n2_g),
        geom.s(x1, omega) - nabla(&logdet_grad, n1) * 6.0,
        geom.s(x2, omega) - nabla(&logdet_grad, n2) * 6.0,
        omega_gamma(geom, gamma, omega, x1, x2),
        c,
        g_fn(omega),
        grad_gamma,
        &hess_gamma,
    );
    Ok(CovarianceSides { lhs, rhs })
}

/// One sampled trial of `kind`; errors request a resample.
fn try_trial(
    kind: CheckKind,
    cfg: &CheckConfig,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord, ModularError> {
    let record = |word: Vec<String>, omega: SiegelPoint, points: Vec<C64>, c_value, abs: f64, rel_err: f64| {
        TrialRecord {
            trial,
            word,
            omega,
            points,
            c_value,
            abs_error: abs,
            rel_error: rel_err,
        }
    };
    match kind {
        CheckKind::GroupAction => {
            let (g1, omega, t1) = sample_transform(rng, cfg.word_length)?;
            let g2 = random_symplectic(rng, cfg.word_length)?;
            let composed = g2.compose(&g1);
            composed.validate()?;
            let direct = transform_period(&composed, &omega)?;
            let staged = transform_period(&g2, &t1.image)?;
            let mut abs: f64 = 0.0;
            let mut worst_rel: f64 = 0.0;
            for (a, b) in direct.image.coords().iter().zip(staged.image.coords()) {
                let d = (a - b).norm();
                abs = abs.max(d);
                worst_rel = worst_rel.max(rel(d, a.norm()));
            }
            let unit = (t1.n.det() * t1.m.det() - 1.0).norm();
            abs = abs.max(unit).max(t1.asymmetry).max(direct.asymmetry);
            worst_rel = worst_rel.max(unit).max(t1.asymmetry).max(direct.asymmetry);
            Ok(record(composed.word, omega, vec![], None, abs, worst_rel))
        }
        CheckKind::NcSymmetry => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let nc = t.n.mul(&CMat2::from_int(&gamma.c));
            let abs = nc.sub(&nc.transpose()).max_abs();
            Ok(record(gamma.word, omega, vec![], None, abs, rel(abs, nc.max_abs())))
        }
        CheckKind::LogdetGradient => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let nc = t.n.mul(&CMat2::from_int(&gamma.c));
            let grad = logdet_m_grad(&gamma, &omega);
            let targets = [nc.0[0][0], nc.0[0][1] * 2.0, nc.0[1][1]];
            let mut abs: f64 = 0.0;
            let mut worst_rel: f64 = 0.0;
            for (g, target) in grad.iter().zip(targets) {
                let d = (g - target).norm();
                abs = abs.max(d);
                worst_rel = worst_rel.max(rel(d, target.norm()));
            }
            Ok(record(gamma.word, omega, vec![], None, abs, worst_rel))
        }
        CheckKind::NablaN => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, false);
            let x = sample_point_z(rng);
            let nx = geom.nu(x, &omega);
            let lhs = nabla_n_fd(&gamma, &omega, nx);
            let c = CMat2::from_int(&gamma.c);
            let rhs = t
                .n
                .mul(&c)
                .mul(&CMat2::outer(nx, nx))
                .mul(&t.n)
                .scale(C64::new(-1.0, 0.0));
            let abs = lhs.sub(&rhs).max_abs();
            Ok(record(gamma.word, omega, vec![x], None, abs, rel(abs, rhs.max_abs())))
        }
        CheckKind::DetIdentities => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, false);
            let pts = sample_points(rng, 2);
            let (x, y) = (pts[0], pts[1]);
            let det_n = t.n.det();
            let nx = geom.nu(x, &omega);
            let ny = geom.nu(y, &omega);
            let nx_g = row_mat(nx, &t.n);
            let ny_g = row_mat(ny, &t.n);
            let nc = t.n.mul(&CMat2::from_int(&gamma.c));

            let mut abs: f64 = 0.0;
            let mut worst_rel: f64 = 0.0;
            let mut push = |lhs: C64, rhs: C64| {
                let d = (lhs - rhs).norm();
                abs = abs.max(d);
                worst_rel = worst_rel.max(rel(d, rhs.norm()));
            };
            push(det_rows(nx_g, ny_g), det_rows(nx, ny) * det_n);
            push(
                det_rows(ny_g, row_mat(geom.dnu_dy(y, &omega), &t.n)),
                det_rows(ny, geom.dnu_dy(y, &omega)) * det_n,
            );
            let mut grad_plain = [C64::new(0.0, 0.0); 2];
            let mut grad_trans = [C64::new(0.0, 0.0); 2];
            for a in 0..2 {
                let f = |p: &SiegelPoint| geom.nu(y, p)[a];
                grad_plain[a] = nabla(&grad3(&f, &omega, FD_STEP, true), nx);
                let f_g = |p: &SiegelPoint| row_mat(geom.nu(y, p), &n_at(&gamma, p))[a];
                grad_trans[a] = nabla(&grad3(&f_g, &omega, FD_STEP, true), nx);
            }
            push(
                det_rows(ny_g, grad_trans),
                det_rows(ny, grad_plain) * det_n
                    + bilinear(nx, &nc, ny) * det_rows(nx, ny) * det_n,
            );
            Ok(record(gamma.word, omega, vec![x, y], None, abs, worst_rel))
        }
        CheckKind::PoleNormalization => {
            let geom = ModelGeometry::random(rng, true);
            let omega = SiegelPoint::random(rng);
            let x = sample_point_z(rng);
            // Neville extrapolation of t * Psi(x, x - t) over halving steps.
            // The base step stays small because the expansion only converges
            // up to the nearest zero of the frame determinant.
            let levels = 8;
            let mut row: Vec<C64> = Vec::with_capacity(levels);
            let mut step = 0.04;
            for _ in 0..levels {
                let t_step = C64::new(step, 0.0);
                row.push(t_step * evaluate_psi(&geom, &omega, x, x - t_step)?);
                step *= 0.5;
            }
            for order in 1..levels {
                let factor = (1u64 << order) as f64;
                for k in 0..levels - order {
                    row[k] = (row[k + 1] * factor - row[k]) / (factor - 1.0);
                }
            }
            let abs = (row[0] - 1.0).norm();
            Ok(record(vec![], omega, vec![x], None, abs, abs))
        }
        CheckKind::PsiInvariance => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, true);
            let pts = sample_points(rng, 2);
            let plain = evaluate_psi(&geom, &omega, pts[0], pts[1])?;
            let transformed = evaluate_psi_gamma(&geom, &gamma, &omega, &t, pts[0], pts[1])?;
            let abs = (transformed - plain).norm();
            Ok(record(gamma.word, omega, pts, None, abs, rel(abs, plain.norm())))
        }
        CheckKind::OdeIdentity => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, false);
            let pts = sample_points(rng, 3);
            let (x, y1, y2) = (pts[0], pts[1], pts[2]);
            let nx = geom.nu(x, &omega);
            let ny1 = geom.nu(y1, &omega);
            let ny2 = geom.nu(y2, &omega);
            let c = CMat2::from_int(&gamma.c);
            let grad_n = nabla_n_fd(&gamma, &omega, nx);
            let lhs = -bilinear(ny1, &grad_n.mul(&c), ny2);
            let nc = t.n.mul(&c);
            let rhs = bilinear(nx, &nc, ny1) * bilinear(nx, &nc, ny2);
            let abs = (lhs - rhs).norm();
            Ok(record(gamma.word, omega, pts, None, abs, rel(abs, rhs.norm())))
        }
        CheckKind::O1Covariance => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, false);
            let x = sample_point_z(rng);
            let mut abs: f64 = 0.0;
            let mut worst_rel: f64 = 0.0;
            let mut worst_c = cfg.c_values.first().copied();
            for &c in &cfg.c_values {
                let sides = o1_sides(&geom, &gamma, &omega, &t, x, c)?;
                let d = (sides.lhs - sides.rhs).norm();
                let r = rel(d, sides.rhs.norm());
                abs = abs.max(d);
                if r >= worst_rel {
                    worst_rel = r;
                    worst_c = Some(c);
                }
            }
            Ok(record(gamma.word, omega, vec![x], worst_c, abs, worst_rel))
        }
        CheckKind::O2Covariance => {
            let (gamma, omega, t) = sample_transform(rng, cfg.word_length)?;
            let geom = ModelGeometry::random(rng, true);
            let pts = sample_points(rng, 2);
            let mut abs: f64 = 0.0;
            let mut worst_rel: f64 = 0.0;
            let mut worst_c = cfg.c_values.first().copied();
            for &c in &cfg.c_values {
                let sides = o2_sides(&geom, &gamma, &omega, &t, pts[0], pts[1], c)?;
                let d = (sides.lhs - sides.rhs).norm();
                let r = rel(d, sides.rhs.norm());
                abs = abs.max(d);
                if r >= worst_rel {
                    worst_rel = r;
                    worst_c = Some(c);
                }
            }
            Ok(record(gamma.word, omega, pts, worst_c, abs, worst_rel))
        }
    }
}

fn run_trial(kind: CheckKind, cfg: &CheckConfig, trial: usize) -> TrialRecord {
    let mut rng = trial_rng(cfg.seed, trial);
    for _ in 0..MAX_ATTEMPTS {
        if let Ok(record) = try_trial(kind, cfg, trial, &mut rng) {
            return record;
        }
    }
    // No admissible sample: fail loudly with an infinite error.
    TrialRecord {
        trial,
        word: vec!["<resampling exhausted>".into()],
        omega: SiegelPoint::random(&mut rng),
        points: vec![],
        c_value: None,
        abs_error: f64::INFINITY,
        rel_error: f64::INFINITY,
    }
}

pub fn run_check(kind: CheckKind, cfg: &CheckConfig) -> CheckReport {
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut worst: Option<TrialRecord> = None;
    for trial in 0..cfg.trials {
        let record = run_trial(kind, cfg, trial);
        max_abs = max_abs.max(record.abs_error);
        if record.rel_error >= max_rel || worst.is_none() {
            max_rel = record.rel_error;
            worst = Some(record);
        }
    }
    CheckReport {
        check: kind.name().into(),
        seed: cfg.seed,
        trials: cfg.trials,
        word_length: cfg.word_length,
        tolerance: cfg.tolerance,
        max_abs_error: max_abs,
        max_rel_error: max_rel,
        pass: max_rel <= cfg.tolerance,
        worst_trial: worst,
    }
}

/// Run every check at its default configuration rooted at `seed`.
pub fn run_all_checks(seed: u64) -> Vec<CheckReport> {
    CheckKind::ALL
        .iter()
        .map(|&kind| {
            let mut cfg = CheckConfig::for_kind(kind);
            cfg.seed = seed;
            run_check(kind, &cfg)
        })
        .collect()
}
