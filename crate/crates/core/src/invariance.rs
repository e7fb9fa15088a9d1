//! Positive invariance of `ẋ = Ax` on Lorenz cones and ellipsoids.
//!
//! A cone `{xᵀQx ≤ 0}` is invariant iff some scalar `a` makes
//! `S(a) = QA + AᵀQ + aQ` negative semidefinite. `f(a) = λ_max(S(a))` is
//! convex and, for indefinite `Q`, coercive, so its minimum is located by a
//! one-dimensional search. Boundary sampling and trajectory simulation give
//! independent evidence for the same verdict.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::{LorenzCone, Region};
use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{unit_directions, Ellipsoid};
use crate::linalg::{ensure_finite_matrix, ensure_symmetric, lambda_max, quad_form, sym_eigen};
use crate::spectral::{inertia, Inertia};

/// Default threshold on the Nagumo inner product at unit boundary points.
pub const NAGUMO_TOL: f64 = 1e-8;

/// Default containment violation that counts as leaving the set.
pub const EXIT_TOL: f64 = 1e-6;

const MAX_BRACKET_STEPS: usize = 200;
const MAX_GOLDEN_STEPS: usize = 500;

/// `ẋ = Ax`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    a: DMatrix<f64>,
}

impl LinearSystem {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "system matrix must be square and nonempty, got {}×{}",
                a.nrows(),
                a.ncols()
            )));
        }
        ensure_finite_matrix(&a, "system matrix")?;
        Ok(Self { a })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn rhs(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x
    }

    /// `QA + AᵀQ + aQ`.
    pub fn lmi(&self, q: &DMatrix<f64>, a: f64) -> DMatrix<f64> {
        let qa = q * &self.a;
        &qa + qa.transpose() + q * a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NagumoCounterexample {
    /// Unit boundary point.
    pub point: Vec<f64>,
    /// `⟨Ax, Qx⟩`.
    pub inner_product: f64,
    /// `|xᵀQx|` for cones, `|xᵀPx − 1|` for ellipsoids (before normalization).
    pub boundary_residual: f64,
    pub sample_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceCertificate {
    pub feasible: bool,
    pub a_star: f64,
    pub lambda_max_at_a_star: f64,
    pub tolerance: f64,
    pub search_bracket: (f64, f64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<NagumoCounterexample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    pub lambda_max: f64,
}

fn check_cone_matrix(sys: &LinearSystem, q: &DMatrix<f64>) -> Result<()> {
    ensure_finite_matrix(q, "cone matrix")?;
    ensure_dim("cone matrix", q.nrows(), sys.dim())?;
    ensure_dim("cone matrix columns", q.ncols(), sys.dim())?;
    ensure_symmetric(q, 1e-12)?;
    let found = inertia(q)?;
    if found != Inertia::lorenz(sys.dim()) {
        return Err(Error::NotALorenzCone { inertia: found });
    }
    Ok(())
}

/// Minimizes `f(a) = λ_max(QA + AᵀQ + aQ)`; feasible iff the minimum is at
/// most `tol`.
///
/// The bracket starts at `[−1, 1]` and doubles toward the lower end until
/// the midpoint is no larger than either end; golden-section search then
/// shrinks it to width `1e−10·(1 + |a|)`. The default tolerance is
/// `1e−9·(‖QA + AᵀQ‖_F + ‖Q‖_F)`. Infeasible verdicts carry a boundary
/// counterexample when the sampler finds one.
pub fn certify_cone(
    sys: &LinearSystem,
    q: &DMatrix<f64>,
    tol: Option<f64>,
) -> Result<InvarianceCertificate> {
    check_cone_matrix(sys, q)?;
    let f = |a: f64| lambda_max(&sys.lmi(q, a));
    let (lo, hi) = bracket_minimum(&f)?;
    let (a_star, f_star) = golden_minimize(&f, lo, hi)?;
    let tolerance = tol.unwrap_or_else(|| 1e-9 * (sys.lmi(q, 0.0).norm() + q.norm()));
    let feasible = f_star <= tolerance;
    let counterexample = if feasible {
        None
    } else {
        nagumo_falsify(sys, q, None, 1024, 0, NAGUMO_TOL)?
    };
    Ok(InvarianceCertificate {
        feasible,
        a_star,
        lambda_max_at_a_star: f_star,
        tolerance,
        search_bracket: (lo, hi),
        counterexample,
    })
}

fn bracket_minimum(f: &impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let (mut lo, mut mid, mut hi) = (-1.0, 0.0, 1.0);
    let (mut flo, mut fmid, mut fhi) = (f(lo)?, f(mid)?, f(hi)?);
    for _ in 0..MAX_BRACKET_STEPS {
        if fmid <= flo && fmid <= fhi {
            return Ok((lo, hi));
        }
        if flo < fhi {
            (hi, fhi) = (mid, fmid);
            (mid, fmid) = (lo, flo);
            lo = mid - 2.0 * (hi - mid);
            flo = f(lo)?;
        } else {
            (lo, flo) = (mid, fmid);
            (mid, fmid) = (hi, fhi);
            hi = mid + 2.0 * (mid - lo);
            fhi = f(hi)?;
        }
    }
    Err(Error::Numeric(
        "λ_max(S(a)) is not coercive; could not bracket a minimum".into(),
    ))
}

fn golden_minimize(
    f: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..MAX_GOLDEN_STEPS {
        let centre = 0.5 * (lo + hi);
        if hi - lo <= 1e-10 * (1.0 + centre.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let centre = 0.5 * (lo + hi);
    let fc = f(centre)?;
    let best = [(centre, fc), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three candidates");
    Ok(best)
}

/// Invariance of the centered ellipsoid `{xᵀPx ≤ 1}`: feasible iff
/// `λ_max(AᵀP + PA) ≤ tol`. `a_star` is reported as 0.
///
/// The default tolerance is `1e−9·(‖AᵀP + PA‖_F + ‖P‖_F)`.
pub fn certify_ellipsoid(
    sys: &LinearSystem,
    p: &DMatrix<f64>,
    tol: Option<f64>,
) -> Result<InvarianceCertificate> {
    ensure_finite_matrix(p, "ellipsoid matrix")?;
    ensure_dim("ellipsoid matrix", p.nrows(), sys.dim())?;
    ensure_dim("ellipsoid matrix columns", p.ncols(), sys.dim())?;
    ensure_symmetric(p, 1e-12)?;
    Cholesky::new(p.clone()).ok_or(Error::NotPositiveDefinite)?;
    let s = sys.lmi(p, 0.0);
    let eig = sym_eigen(&s)?;
    let lambda = eig.values[0];
    let tolerance = tol.unwrap_or_else(|| 1e-9 * (s.norm() + p.norm()));
    let feasible = lambda <= tolerance;
    let counterexample = if feasible {
        None
    } else {
        let v = eig.vectors.column(0).into_owned();
        let x = &v / quad_form(p, &v).sqrt();
        Some(NagumoCounterexample {
            inner_product: quad_form(&(p * sys.matrix()), &x),
            boundary_residual: (quad_form(p, &x) - 1.0).abs(),
            point: x.as_slice().to_vec(),
            sample_index: 0,
        })
    };
    Ok(InvarianceCertificate {
        feasible,
        a_star: 0.0,
        lambda_max_at_a_star: lambda,
        tolerance,
        search_bracket: (0.0, 0.0),
        counterexample,
    })
}

/// Samples unit points on `xᵀQx = 0` and returns the one with the largest
/// `⟨Ax, Qx⟩` if that exceeds `tol`.
///
/// Directions are drawn uniformly in the positive eigenspace; the component
/// along the negative eigenvector is solved for the boundary. With a hint,
/// points are flipped onto the branch where `hintᵀx ≥ 0`. The inner product
/// is even in `x`, so the verdict does not depend on the branch.
pub fn nagumo_falsify(
    sys: &LinearSystem,
    q: &DMatrix<f64>,
    hint: Option<&DVector<f64>>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<NagumoCounterexample>> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    check_cone_matrix(sys, q)?;
    if let Some(h) = hint {
        ensure_dim("axis hint", h.len(), sys.dim())?;
    }
    let n = sys.dim();
    let eig = sym_eigen(q)?;
    let neg = eig.values[n - 1];
    let v_neg = eig.vectors.column(n - 1).into_owned();
    let qa = q * sys.matrix();
    let mut worst: Option<NagumoCounterexample> = None;
    for (index, w) in unit_directions(n - 1, samples, seed)
        .into_iter()
        .enumerate()
    {
        let mut positive = 0.0;
        let mut x = DVector::zeros(n);
        for (k, wk) in w.iter().enumerate() {
            positive += eig.values[k] * wk * wk;
            x += eig.vectors.column(k) * *wk;
        }
        x += &v_neg * (positive / -neg).sqrt();
        if hint.is_some_and(|h| h.dot(&x) < 0.0) {
            x = -x;
        }
        x /= x.norm();
        let inner = quad_form(&qa, &x);
        if worst.as_ref().is_none_or(|w| inner > w.inner_product) {
            worst = Some(NagumoCounterexample {
                point: x.as_slice().to_vec(),
                inner_product: inner,
                boundary_residual: quad_form(q, &x).abs(),
                sample_index: index,
            });
        }
    }
    Ok(worst.filter(|w| w.inner_product > tol))
}

/// `f(a)` on each grid point.
pub fn certificate_scan(
    sys: &LinearSystem,
    q: &DMatrix<f64>,
    grid: &[f64],
) -> Result<Vec<ScanPoint>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("scan grid is empty".into()));
    }
    check_cone_matrix(sys, q)?;
    grid.iter()
        .map(|&a| {
            Ok(ScanPoint {
                a,
                lambda_max: lambda_max(&sys.lmi(q, a))?,
            })
        })
        .collect()
}

/// `count` evenly spaced points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count)
            .map(|k| min + (max - min) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone)]
pub enum TargetSet {
    Cone(LorenzCone),
    Ellipsoid(Ellipsoid),
}

impl TargetSet {
    pub fn dim(&self) -> usize {
        match self {
            Self::Cone(c) => c.dim(),
            Self::Ellipsoid(e) => e.dim(),
        }
    }

    /// Scale-free containment violation, 0 inside the set.
    ///
    /// Cones use `max(q(x)/‖x − v‖², 0)` plus the normalized distance to the
    /// hinted half-space; ellipsoids use `max(q(x) − 1, 0)`.
    pub fn violation(&self, x: &DVector<f64>) -> f64 {
        match self {
            Self::Cone(cone) => {
                let rel = x - cone.vertex();
                let r2 = rel.norm_squared();
                if r2 == 0.0 {
                    return 0.0;
                }
                let radial = (cone.quadratic(x) / r2).max(0.0);
                let side = cone
                    .axis_hint()
                    .map_or(0.0, |h| (-h.dot(&rel) / r2.sqrt()).max(0.0));
                radial + side
            }
            Self::Ellipsoid(e) => (e.quadratic(x) - 1.0).max(0.0),
        }
    }

    fn contains(&self, x: &DVector<f64>) -> bool {
        match self {
            Self::Cone(cone) => cone.membership(x).region != Region::Exterior,
            Self::Ellipsoid(e) => e.contains(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Rk4,
    /// Steps with `e^{Ah}`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub step: f64,
    pub horizon: f64,
    pub integrator: Integrator,
    pub exit_tol: f64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            horizon: 10.0,
            integrator: Integrator::Rk4,
            exit_tol: EXIT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub initial: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub integrator: Integrator,
    pub steps: usize,
    pub max_violation: f64,
    pub exited: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_time: Option<f64>,
    pub final_point: Vec<f64>,
}

/// `ceil(T/h)`, treating ratios within 1e−9 of an integer as that integer.
pub fn step_count(step: f64, horizon: f64) -> usize {
    let ratio = horizon / step;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Integrates `ẋ = Ax` from a member `x0` for `ceil(T/h)` fixed steps,
/// tracking the largest containment violation and the first step where it
/// exceeds `exit_tol`.
pub fn simulate(
    sys: &LinearSystem,
    set: &TargetSet,
    x0: &DVector<f64>,
    options: &SimulationOptions,
) -> Result<TrajectoryRecord> {
    ensure_dim("set", set.dim(), sys.dim())?;
    ensure_dim("initial point", x0.len(), sys.dim())?;
    let SimulationOptions {
        step,
        horizon,
        integrator,
        exit_tol,
    } = *options;
    if !(step > 0.0 && step.is_finite() && horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step and horizon must be positive and finite, got h = {step}, T = {horizon}"
        )));
    }
    if !set.contains(x0) {
        return Err(Error::NotAMember {
            violation: set.violation(x0),
        });
    }
    let a = sys.matrix();
    let propagator = match integrator {
        Integrator::Exact => (a * step).exp(),
        Integrator::Rk4 => {
            let n = sys.dim();
            let ah = a * step;
            let ah2 = &ah * &ah;
            let ah3 = &ah2 * &ah;
            let ah4 = &ah3 * &ah;
            DMatrix::identity(n, n) + &ah + ah2 / 2.0 + ah3 / 6.0 + ah4 / 24.0
        }
    };
    ensure_finite_matrix(&propagator, "step propagator")?;
    let steps = step_count(step, horizon);
    let mut x = x0.clone();
    let mut max_violation = set.violation(&x);
    let mut exit_time = None;
    for k in 1..=steps {
        x = &propagator * &x;
        let v = set.violation(&x);
        if !v.is_finite() || x.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("trajectory state"));
        }
        max_violation = max_violation.max(v);
        if exit_time.is_none() && v > exit_tol {
            exit_time = Some(k as f64 * step);
        }
    }
    Ok(TrajectoryRecord {
        initial: x0.as_slice().to_vec(),
        step,
        horizon,
        integrator,
        steps,
        max_violation,
        exited: exit_time.is_some(),
        exit_time,
        final_point: x.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lorentz_signature;
    use proptest::prelude::*;

    fn m(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    fn sys(n: usize, v: &[f64]) -> LinearSystem {
        LinearSystem::new(m(n, v)).unwrap()
    }

    fn rotation() -> LinearSystem {
        sys(2, &[0.0, -1.0, 1.0, 0.0])
    }

    #[test]
    fn certify_contracting_system() {
        let s = LinearSystem::new(-DMatrix::identity(3, 3)).unwrap();
        let cert = certify_cone(&s, &lorentz_signature(3), None).unwrap();
        assert!(cert.feasible);
        assert!((cert.a_star - 2.0).abs() < 1e-9, "{}", cert.a_star);
        assert!(cert.lambda_max_at_a_star.abs() < 1e-9);
        assert!(s.lmi(&lorentz_signature(3), 2.0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn certify_hyperbolic_system() {
        let s = sys(2, &[0.0, 1.0, 1.0, 0.0]);
        let cert = certify_cone(&s, &lorentz_signature(2), None).unwrap();
        assert!(cert.feasible);
        assert!(cert.a_star.abs() < 1e-9);
        assert!(cert.lambda_max_at_a_star.abs() < 1e-9);
    }

    #[test]
    fn certify_rotation_is_infeasible() {
        let cert = certify_cone(&rotation(), &lorentz_signature(2), None).unwrap();
        assert!(!cert.feasible);
        // smooth minimum: a* is resolved only to about √ε
        assert!(cert.a_star.abs() < 1e-6);
        assert!((cert.lambda_max_at_a_star - 2.0).abs() < 1e-12);
        let cx = cert.counterexample.unwrap();
        assert!(cx.inner_product > 0.0);
        assert!(cx.point[0] * cx.point[1] < 0.0);
    }

    #[test]
    fn certify_rejects_non_cone() {
        let s = LinearSystem::new(-DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(
            certify_cone(&s, &DMatrix::identity(2, 2), None),
            Err(Error::NotALorenzCone { .. })
        ));
    }

    #[test]
    fn ellipsoid_examples() {
        let p = DMatrix::identity(2, 2);
        let c = certify_ellipsoid(&LinearSystem::new(-p.clone()).unwrap(), &p, None).unwrap();
        assert!(c.feasible && c.lambda_max_at_a_star == -2.0);
        let c = certify_ellipsoid(&LinearSystem::new(p.clone()).unwrap(), &p, None).unwrap();
        assert!(!c.feasible && c.lambda_max_at_a_star == 2.0);
        assert!(c.counterexample.unwrap().inner_product > 0.0);
        let c = certify_ellipsoid(&sys(2, &[0.0, 1.0, -1.0, 0.0]), &p, None).unwrap();
        assert!(c.feasible && c.lambda_max_at_a_star == 0.0);
        assert!(matches!(
            certify_ellipsoid(&sys(2, &[0.0; 4]), &m(2, &[1.0, 0.0, 0.0, -1.0]), None),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn falsifier_examples() {
        let q = lorentz_signature(2);
        let hint = DVector::from_column_slice(&[0.0, 1.0]);
        let cx = nagumo_falsify(&rotation(), &q, Some(&hint), 64, 3, NAGUMO_TOL)
            .unwrap()
            .unwrap();
        assert!((cx.inner_product - 1.0).abs() < 1e-12);
        assert!(cx.point[1] > 0.0 && cx.point[0] < 0.0);
        assert!(cx.boundary_residual < 1e-14);

        let q3 = lorentz_signature(3);
        let s = LinearSystem::new(-DMatrix::identity(3, 3)).unwrap();
        assert!(nagumo_falsify(&s, &q3, None, 10_000, 1, NAGUMO_TOL)
            .unwrap()
            .is_none());
        assert!(nagumo_falsify(&s, &q3, None, 0, 1, NAGUMO_TOL).is_err());
    }

    #[test]
    fn falsifier_is_deterministic() {
        let q = crate::cone::construct_axis(&[1.0, 2.0, 0.5], 0)
            .unwrap()
            .matrix()
            .clone();
        let s = sys(3, &[0.3, -1.0, 0.2, 1.0, 0.1, 0.0, -0.5, 0.4, -0.2]);
        let a = nagumo_falsify(&s, &q, None, 500, 42, NAGUMO_TOL).unwrap();
        let b = nagumo_falsify(&s, &q, None, 500, 42, NAGUMO_TOL).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scan_examples() {
        let s = LinearSystem::new(-DMatrix::identity(3, 3)).unwrap();
        let scan = certificate_scan(&s, &lorentz_signature(3), &[1.0, 2.0, 3.0]).unwrap();
        let values: Vec<f64> = scan.iter().map(|p| p.lambda_max).collect();
        assert_eq!(values, vec![1.0, 0.0, 1.0]);

        let grid = linear_grid(-3.0, 3.0, 61);
        let scan = certificate_scan(&rotation(), &lorentz_signature(2), &grid).unwrap();
        let best = scan
            .iter()
            .min_by(|a, b| a.lambda_max.total_cmp(&b.lambda_max))
            .unwrap();
        assert!(best.a.abs() < 1e-12 && (best.lambda_max - 2.0).abs() < 1e-12);
        for w in scan.windows(3) {
            assert!(w[1].lambda_max <= 0.5 * (w[0].lambda_max + w[2].lambda_max) + 1e-12);
        }
        assert!(certificate_scan(&rotation(), &lorentz_signature(2), &[]).is_err());
    }

    #[test]
    fn simulate_examples() {
        let opts = SimulationOptions::default();
        let std3 = TargetSet::Cone(LorenzCone::standard(3).unwrap());
        let s = LinearSystem::new(-DMatrix::identity(3, 3)).unwrap();
        let x0 = DVector::from_column_slice(&[0.5, 0.0, 1.0]);
        let rec = simulate(&s, &std3, &x0, &opts).unwrap();
        assert_eq!(rec.steps, 10_000);
        assert!(!rec.exited && rec.max_violation <= 1e-9);

        let disk = TargetSet::Ellipsoid(Ellipsoid::centered(DMatrix::identity(2, 2)).unwrap());
        let x0 = DVector::from_column_slice(&[1.0, 0.0]);
        let rec = simulate(&rotation(), &disk, &x0, &opts).unwrap();
        assert!(!rec.exited && rec.max_violation <= 1e-6);

        let std2 = TargetSet::Cone(LorenzCone::standard(2).unwrap());
        let x0 = DVector::from_column_slice(&[1.0, 1.0]) / 2f64.sqrt();
        let rec = simulate(&rotation(), &std2, &x0, &opts).unwrap();
        let t = rec.exit_time.unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-2, "{t}");

        let outside = DVector::from_column_slice(&[2.0, 1.0]);
        assert!(matches!(
            simulate(&rotation(), &std2, &outside, &opts),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn exact_and_rk4_agree() {
        let s = sys(2, &[0.0, 1.0, 1.0, 0.0]);
        let std2 = TargetSet::Cone(LorenzCone::standard(2).unwrap());
        let x0 = DVector::from_column_slice(&[0.3, 1.0]);
        let rk4 = simulate(&s, &std2, &x0, &SimulationOptions::default()).unwrap();
        let exact = simulate(
            &s,
            &std2,
            &x0,
            &SimulationOptions {
                integrator: Integrator::Exact,
                ..SimulationOptions::default()
            },
        )
        .unwrap();
        assert!(!rk4.exited && !exact.exited);
        let (a, b) = (
            DVector::from_vec(rk4.final_point),
            DVector::from_vec(exact.final_point),
        );
        assert!((a - &b).norm() <= 1e-9 * b.norm());
    }

    #[test]
    fn step_count_rounds_up() {
        assert_eq!(step_count(1e-3, 10.0), 10_000);
        assert_eq!(step_count(0.3, 1.0), 4);
        assert_eq!(step_count(0.1, 0.3), 3);
    }

    fn lorenz_matrix(seed: &[f64], n: usize) -> DMatrix<f64> {
        // U diag(…, −d) Uᵀ with U from a QR factorization
        let raw = DMatrix::from_fn(n, n, |i, j| {
            seed[(i * n + j) % seed.len()] + (i == j) as u8 as f64
        });
        let u = raw.qr().q();
        let d = DVector::from_fn(n, |i, _| {
            let v = 0.2 + seed[i % seed.len()].abs();
            if i == n - 1 {
                -v
            } else {
                v
            }
        });
        let q = &u * DMatrix::from_diagonal(&d) * u.transpose();
        (&q + q.transpose()) * 0.5
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn f_is_convex(
            n in 2usize..5,
            seed in prop::collection::vec(-1.0f64..1.0, 25),
            a1 in -5.0f64..5.0,
            a2 in -5.0f64..5.0,
        ) {
            let q = lorenz_matrix(&seed, n);
            let s = LinearSystem::new(DMatrix::from_fn(n, n, |i, j| seed[(3 * i + j + 7) % 25])).unwrap();
            let f = |a: f64| lambda_max(&s.lmi(&q, a)).unwrap();
            prop_assert!(f(0.5 * (a1 + a2)) <= 0.5 * (f(a1) + f(a2)) + 1e-9);
        }

        #[test]
        fn feasibility_is_scale_and_similarity_invariant(
            n in 2usize..5,
            seed in prop::collection::vec(-1.0f64..1.0, 25),
            kappa in 0.1f64..10.0,
        ) {
            let q = lorenz_matrix(&seed, n);
            let s = LinearSystem::new(DMatrix::from_fn(n, n, |i, j| seed[(5 * i + 2 * j + 3) % 25])).unwrap();
            let base = certify_cone(&s, &q, None).unwrap();
            let scaled = certify_cone(&s, &(&q * kappa), Some(base.tolerance * kappa)).unwrap();
            prop_assert_eq!(base.feasible, scaled.feasible);
            let f = |a: f64| lambda_max(&s.lmi(&q, a)).unwrap();
            let f_scale = s.lmi(&q, 0.0).norm() + q.norm() * (1.0 + base.a_star.abs());
            prop_assert!((f(scaled.a_star) - f(base.a_star)).abs() <= 1e-9 * f_scale);
            prop_assert!((base.a_star - scaled.a_star).abs() <= 1e-6 * (1.0 + base.a_star.abs()));

            let p = DMatrix::from_fn(n, n, |i, j| seed[(i + 4 * j + 1) % 25] * 0.3) + DMatrix::identity(n, n);
            let p_inv = p.clone().try_inverse().unwrap();
            let similar = LinearSystem::new(&p_inv * s.matrix() * &p).unwrap();
            let congruent = p.transpose() * &q * &p;
            let moved = certify_cone(&similar, &((&congruent + congruent.transpose()) * 0.5), None).unwrap();
            // verdicts may only differ when the margin is within rounding
            if base.lambda_max_at_a_star.abs() > 1e-6 {
                prop_assert_eq!(base.feasible, moved.feasible);
            }
        }
    }
}
