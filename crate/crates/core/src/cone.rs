//! Lorenz cones generated by the origin and a Dikin-ellipsoid base.
//!
//! Every construction here returns a cone matrix `Q` with vertex at the
//! origin, normalized so that the base anchor `x₀` satisfies `x₀ᵀQx₀ = −β`
//! with `β = 1` for Dikin bases. The quadratic `xᵀQx ≤ 0` describes two
//! branches; constructions keep the one on the base side of the slicing
//! plane.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{
    distance_to_hyperplane, DikinEllipsoid, Ellipsoid, EllipsoidSlice, Hyperplane,
};
use crate::linalg::{
    ensure_finite_matrix, ensure_finite_vector, ensure_symmetric, lorentz_signature, quad_form,
    sym_eigen,
};
use crate::spectral::{
    det_axis_cone, det_identity_plus_rank_one, equal_c_spectrum, inertia, lambda1_bounds_axis_cone,
    ArrowheadMatrix, Inertia, SpectralReport,
};

/// Relative width of the boundary band in membership tests.
pub const BOUNDARY_BAND: f64 = 1e-10;

/// Smallest accepted `‖c‖² − 1` for the sphere-tangent cone.
pub const TANGENCY_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub region: Region,
    /// `xᵀQx + 2pᵀx + ρ`.
    pub value: f64,
    pub band: f64,
    /// False when the point lies on the branch opposite the axis hint.
    pub on_branch: bool,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.region != Region::Exterior
    }
}

fn classify(value: f64, x_norm_sq: f64, branch_offset: Option<(f64, f64)>) -> Membership {
    let band = BOUNDARY_BAND * (1.0 + x_norm_sq);
    let on_branch = match branch_offset {
        Some((side, rel_norm)) => side >= -BOUNDARY_BAND * (1.0 + rel_norm),
        None => true,
    };
    let region = if !on_branch || value > band {
        Region::Exterior
    } else if value < -band {
        Region::Interior
    } else {
        Region::Boundary
    };
    Membership {
        region,
        value,
        band,
        on_branch,
    }
}

/// `{x : xᵀQx + 2pᵀx + ρ ≤ 0}` with inertia `(n−1, 0, 1)` and
/// `ρ = pᵀQ⁻¹p`, optionally restricted to the branch where
/// `hintᵀ(x − vertex) ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCone {
    q: DMatrix<f64>,
    p: DVector<f64>,
    rho: f64,
    axis_hint: Option<DVector<f64>>,
}

impl LorenzCone {
    pub fn new(q: DMatrix<f64>, p: DVector<f64>, axis_hint: Option<DVector<f64>>) -> Result<Self> {
        ensure_finite_matrix(&q, "cone matrix")?;
        ensure_finite_vector(&p, "cone shift")?;
        ensure_symmetric(&q, 1e-12)?;
        let n = q.nrows();
        ensure_dim("cone shift", p.len(), n)?;
        if n < 2 {
            return Err(Error::InvalidDimension(format!(
                "a cone needs n ≥ 2, got {n}"
            )));
        }
        let found = inertia(&q)?;
        if found != Inertia::lorenz(n) {
            return Err(Error::NotALorenzCone { inertia: found });
        }
        let axis_hint = match axis_hint {
            Some(h) => {
                ensure_dim("axis hint", h.len(), n)?;
                ensure_finite_vector(&h, "axis hint")?;
                let norm = h.norm();
                if norm == 0.0 {
                    return Err(Error::InvalidInput("axis hint is zero".into()));
                }
                Some(h / norm)
            }
            None => None,
        };
        let rho = p.dot(&solve(&q, &p)?);
        Ok(Self {
            q,
            p,
            rho,
            axis_hint,
        })
    }

    /// Accepts an explicit `ρ`, which must match `pᵀQ⁻¹p` within 1e−8
    /// relative.
    pub fn from_parts(
        q: DMatrix<f64>,
        p: DVector<f64>,
        rho: f64,
        axis_hint: Option<DVector<f64>>,
    ) -> Result<Self> {
        let cone = Self::new(q, p, axis_hint)?;
        if (cone.rho - rho).abs() > 1e-8 * cone.rho.abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "ρ = {rho} is inconsistent with pᵀQ⁻¹p = {}",
                cone.rho
            )));
        }
        Ok(cone)
    }

    /// Vertex at the origin.
    pub fn homogeneous(q: DMatrix<f64>, axis_hint: Option<DVector<f64>>) -> Result<Self> {
        let n = q.nrows();
        Self::new(q, DVector::zeros(n), axis_hint)
    }

    /// `x₁² + … + x_{n−1}² ≤ xₙ²`, `xₙ ≥ 0`.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(format!(
                "a cone needs n ≥ 2, got {n}"
            )));
        }
        let mut hint = DVector::zeros(n);
        hint[n - 1] = 1.0;
        Self::homogeneous(lorentz_signature(n), Some(hint))
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.p
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn axis_hint(&self) -> Option<&DVector<f64>> {
        self.axis_hint.as_ref()
    }

    /// `−Q⁻¹p`.
    pub fn vertex(&self) -> DVector<f64> {
        // adding zeros turns −0.0 into 0.0
        -solve(&self.q, &self.p).expect("cone matrix is nonsingular") + DVector::zeros(self.dim())
    }

    pub fn quadratic(&self, x: &DVector<f64>) -> f64 {
        quad_form(&self.q, x) + 2.0 * self.p.dot(x) + self.rho
    }

    pub fn membership(&self, x: &DVector<f64>) -> Membership {
        let value = self.quadratic(x);
        let branch = self.axis_hint.as_ref().map(|h| {
            let rel = x - self.vertex();
            (h.dot(&rel), rel.norm())
        });
        classify(value, x.norm_squared(), branch)
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.membership(x).is_member()
    }

    /// Congruence `P̄` with `P̄ᵀQP̄ = Ĩ` and the shift `(QP̄)⁻¹p`.
    ///
    /// Columns are ordered positive eigenvalues first. With an axis hint the
    /// last column points into the hinted branch, so the map sends that
    /// branch onto the standard one.
    pub fn standardize(&self) -> Result<StandardizingTransform> {
        let eig = sym_eigen(&self.q)?;
        let n = self.dim();
        let mut p_bar = eig.vectors.clone();
        for (j, value) in eig.values.iter().enumerate() {
            let mut col = p_bar.column_mut(j);
            let pivot = col.iamax();
            let mut sign = col[pivot].signum();
            if j == n - 1 {
                if let Some(h) = &self.axis_hint {
                    let d = h.dot(&col);
                    if d != 0.0 {
                        sign = d.signum();
                    }
                }
            }
            col *= sign / value.abs().sqrt();
        }
        let shift = solve(&(&self.q * &p_bar), &self.p)?;
        StandardizingTransform::new(p_bar, shift)
    }
}

fn solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    m.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Numeric("singular matrix".into()))
}

/// The standard cone `{x : xᵀĨx ≤ 0, xₙ ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StandardLorenzCone {
    pub dim: usize,
}

impl StandardLorenzCone {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn quadratic(&self, x: &DVector<f64>) -> f64 {
        let n = self.dim;
        x.rows(0, n - 1).norm_squared() - x[n - 1] * x[n - 1]
    }

    pub fn membership(&self, x: &DVector<f64>) -> Membership {
        let side = x[self.dim - 1];
        classify(self.quadratic(x), x.norm_squared(), Some((side, x.norm())))
    }

    /// Membership in `C* ∪ (−C*)`.
    pub fn double_membership(&self, x: &DVector<f64>) -> Membership {
        classify(self.quadratic(x), x.norm_squared(), None)
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.membership(x).is_member()
    }
}

/// Affine map `x ↦ P̄⁻¹x + shift` onto a standard cone or unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizingTransform {
    p: DMatrix<f64>,
    p_inv: DMatrix<f64>,
    shift: DVector<f64>,
}

impl StandardizingTransform {
    fn new(p: DMatrix<f64>, shift: DVector<f64>) -> Result<Self> {
        let p_inv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("standardizing matrix is singular".into()))?;
        Ok(Self { p, p_inv, shift })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.p_inv * x + &self.shift
    }

    pub fn invert(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.p * (y - &self.shift)
    }

    /// `‖P̄ᵀQP̄ − target‖_F`.
    pub fn congruence_residual(&self, q: &DMatrix<f64>, target: &DMatrix<f64>) -> f64 {
        (self.p.transpose() * q * &self.p - target).norm()
    }
}

/// `P` with `PᵀQP = I` and shift `(QP)⁻¹p`, sending the ellipsoid onto the
/// unit ball.
pub fn standardize_ellipsoid(e: &Ellipsoid) -> Result<StandardizingTransform> {
    let eig = sym_eigen(e.matrix())?;
    let mut p = eig.vectors.clone();
    for (j, value) in eig.values.iter().enumerate() {
        let mut col = p.column_mut(j);
        let sign = col[col.iamax()].signum();
        col *= sign / value.sqrt();
    }
    let shift = solve(&(e.matrix() * &p), e.shift())?;
    StandardizingTransform::new(p, shift)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionKind {
    /// Arbitrary normal through the Dikin center.
    General,
    /// Coordinate hyperplane `x_index = c_index` (0-based).
    Axis { index: usize },
    /// `eᵀx = eᵀc`.
    Ones,
    /// Tangent cone from the origin to the unit sphere centered at `c`.
    TangentSphere,
}

/// Residuals of the three base-matching conditions:
/// `‖βHᵀMH − HᵀQH‖`, `‖x₀ᵀQH‖` and `|x₀ᵀQx₀ + β|`, where the base is
/// `{x₀ + Hz : zᵀHᵀMHz ≤ 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionResiduals {
    pub gram: f64,
    pub cross: f64,
    pub normalization: f64,
}

impl ConditionResiduals {
    pub fn max(&self) -> f64 {
        self.gram.max(self.cross).max(self.normalization)
    }

    pub fn all_within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// A cone matrix together with the base it was built from.
#[derive(Debug, Clone)]
pub struct ConeConstruction {
    kind: ConstructionKind,
    center: DVector<f64>,
    dikin: Option<DikinEllipsoid>,
    plane: Hyperplane,
    base_anchor: DVector<f64>,
    base_metric: DMatrix<f64>,
    q: DMatrix<f64>,
    gamma: f64,
    beta: f64,
    branch: DVector<f64>,
    residuals: ConditionResiduals,
}

impl ConeConstruction {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: ConstructionKind,
        center: DVector<f64>,
        dikin: Option<DikinEllipsoid>,
        plane: Hyperplane,
        base_anchor: DVector<f64>,
        base_metric: DMatrix<f64>,
        q: DMatrix<f64>,
        beta: f64,
    ) -> Result<Self> {
        ensure_finite_matrix(&q, "cone matrix")?;
        let side = plane.normal().dot(&base_anchor);
        let branch = plane.normal() * (side.signum() / plane.normal().norm());
        let mut cc = Self {
            kind,
            center,
            dikin,
            plane,
            base_anchor,
            base_metric,
            q,
            gamma: 1.0,
            beta,
            branch,
            residuals: ConditionResiduals {
                gram: 0.0,
                cross: 0.0,
                normalization: 0.0,
            },
        };
        cc.residuals = verify_conditions(&cc);
        Ok(cc)
    }

    pub fn kind(&self) -> ConstructionKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Center of the generating ellipsoid (Dikin center or sphere center).
    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn dikin(&self) -> Option<&DikinEllipsoid> {
        self.dikin.as_ref()
    }

    pub fn plane(&self) -> &Hyperplane {
        &self.plane
    }

    /// Point of the slicing plane around which the base is centered.
    pub fn base_anchor(&self) -> &DVector<f64> {
        &self.base_anchor
    }

    pub fn base_metric(&self) -> &DMatrix<f64> {
        &self.base_metric
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Unit normal oriented toward the base; the kept branch has
    /// `branchᵀx ≥ 0`.
    pub fn branch(&self) -> &DVector<f64> {
        &self.branch
    }

    pub fn residuals(&self) -> ConditionResiduals {
        self.residuals
    }

    pub fn vertex(&self) -> DVector<f64> {
        DVector::zeros(self.dim())
    }

    /// The base as `{x₀ + Hz : zᵀGz ≤ 1}`.
    pub fn base(&self) -> Result<EllipsoidSlice> {
        let h = self.plane.basis();
        let gram = h.transpose() * &self.base_metric * h;
        EllipsoidSlice::new(self.base_anchor.clone(), h.clone(), gram)
    }

    pub fn to_cone(&self) -> Result<LorenzCone> {
        LorenzCone::homogeneous(self.q.clone(), Some(self.branch.clone()))
    }

    pub fn membership(&self, x: &DVector<f64>) -> Membership {
        let value = quad_form(&self.q, x);
        classify(
            value,
            x.norm_squared(),
            Some((self.branch.dot(x), x.norm())),
        )
    }

    /// Decomposes `Q − M` into `μaaᵀ + a(Hz)ᵀ + (Hz)aᵀ`.
    pub fn sandwich(&self) -> Result<SandwichDecomposition> {
        let x = &self.q - &self.base_metric * self.beta;
        sandwich_decompose(&x, self.plane.normal(), self.plane.basis())
    }

    /// Dense spectrum together with the closed forms that apply to this
    /// construction.
    pub fn spectral_report(&self) -> Result<SpectralReport> {
        let report = SpectralReport::analyze(&self.q)?;
        let c = self.center.as_slice();
        Ok(match self.kind {
            ConstructionKind::Axis { index } => {
                let arrow = ArrowheadMatrix::from_dense(&self.q, index, 0.0)?;
                report
                    .with_closed_form_det(det_axis_cone(c)?)
                    .with_lambda1_bounds(lambda1_bounds_axis_cone(c, index)?)
                    .with_closed_form_eigenvalues(arrow.eigenvalues())
            }
            ConstructionKind::Ones if all_equal(c) => {
                let n = c.len();
                let k2 = c[0] * c[0];
                let nf = n as f64;
                let det = det_identity_plus_rank_one(1.0 / k2, -(nf + 1.0) / (nf * nf * k2), n);
                report
                    .with_closed_form_det(det)
                    .with_closed_form_eigenvalues(equal_c_spectrum(c[0], n)?)
            }
            _ => report,
        })
    }
}

fn all_equal(c: &[f64]) -> bool {
    c.iter().all(|v| (v - c[0]).abs() <= 1e-12 * c[0].abs())
}

/// Residuals of the base-matching conditions for a construction.
pub fn verify_conditions(cc: &ConeConstruction) -> ConditionResiduals {
    let h = cc.plane.basis();
    let q = &cc.q;
    let x0 = &cc.base_anchor;
    let gram = (h.transpose() * &cc.base_metric * h * cc.beta - h.transpose() * q * h).norm();
    let cross = (x0.transpose() * q * h).norm();
    let normalization = (quad_form(q, x0) + cc.beta).abs();
    ConditionResiduals {
        gram,
        cross,
        normalization,
    }
}

fn check_center_plane(ed: &DikinEllipsoid, plane: &Hyperplane) -> Result<f64> {
    ensure_dim("hyperplane", plane.dim(), ed.dim())?;
    let c = ed.center();
    if !plane.passes_through(c) {
        return Err(Error::PlaneNotThroughCenter {
            residual: (plane.normal().dot(c) - plane.offset()).abs(),
        });
    }
    let dot = plane.normal().dot(c);
    if dot.abs() <= 1e-10 * plane.normal().norm() * c.norm() {
        return Err(Error::PlaneThroughOriginDirection { dot });
    }
    Ok(dot)
}

/// Cone over the slice of a Dikin ellipsoid by an arbitrary plane through
/// its center:
///
/// `Q = D − ((1 + cᵀD̃c)/(cᵀa)²)aaᵀ − (1/(cᵀa))(acᵀDH̃ + H̃Dcaᵀ)`
///
/// with `D = C⁻²`, `H̃ = H(HᵀH)⁻¹Hᵀ` and `D̃ = D − (DH̃ + H̃D)`.
pub fn construct_general(ed: &DikinEllipsoid, plane: &Hyperplane) -> Result<ConeConstruction> {
    let alpha = check_center_plane(ed, plane)?;
    let c = ed.center();
    let a = plane.normal();
    let d = ed.scaling();
    let proj = plane.projector()?;
    let d_tilde = &d - (&d * &proj + &proj * &d);
    let coupling = &proj * (&d * c);
    let rank_one = (1.0 + quad_form(&d_tilde, c)) / (alpha * alpha);
    let q = &d
        - a * a.transpose() * rank_one
        - (a * coupling.transpose() + &coupling * a.transpose()) / alpha;
    ConeConstruction::assemble(
        ConstructionKind::General,
        c.clone(),
        Some(ed.clone()),
        plane.clone(),
        c.clone(),
        d,
        q,
        1.0,
    )
}

/// Cone over the slice by `x_axis = c_axis` (0-based `axis`):
/// `Q = D + ((n−3)/cᵢ²)Eᵢᵢ − Σ_{j≠i} (Eᵢⱼ + Eⱼᵢ)/(cᵢcⱼ)`.
pub fn construct_axis(c: &[f64], axis: usize) -> Result<ConeConstruction> {
    let ed = DikinEllipsoid::from_slice(c)?;
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "a cone needs n ≥ 2, got {n}"
        )));
    }
    if axis >= n {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: n,
        });
    }
    let d = ed.scaling();
    let mut q = d.clone();
    let ci = c[axis];
    q[(axis, axis)] += (n as f64 - 3.0) / (ci * ci);
    for j in (0..n).filter(|&j| j != axis) {
        let v = -1.0 / (ci * c[j]);
        q[(axis, j)] = v;
        q[(j, axis)] = v;
    }
    let plane = Hyperplane::axis(n, axis, ci)?;
    ConeConstruction::assemble(
        ConstructionKind::Axis { index: axis },
        ed.center().clone(),
        Some(ed.clone()),
        plane,
        ed.center().clone(),
        d,
        q,
        1.0,
    )
}

/// Cone over the slice by `eᵀx = eᵀc`:
/// `Qᵢⱼ = Dᵢⱼ + (n−1)/(eᵀc)² − (1/cᵢ + 1/cⱼ)/(eᵀc)`.
pub fn construct_ones(c: &[f64]) -> Result<ConeConstruction> {
    let ed = DikinEllipsoid::from_slice(c)?;
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "a cone needs n ≥ 2, got {n}"
        )));
    }
    let s: f64 = c.iter().sum();
    let d = ed.scaling();
    let lead = (n as f64 - 1.0) / (s * s);
    let q = DMatrix::from_fn(n, n, |i, j| {
        d[(i, j)] + lead - (1.0 / c[i] + 1.0 / c[j]) / s
    });
    let plane = Hyperplane::ones(n, s)?;
    ConeConstruction::assemble(
        ConstructionKind::Ones,
        ed.center().clone(),
        Some(ed.clone()),
        plane,
        ed.center().clone(),
        d,
        q,
        1.0,
    )
}

/// Tangent cone from the origin to `{x : ‖x − c‖ ≤ 1}`:
/// `Q = I − ccᵀ/(‖c‖² − 1)`, touching the sphere on `cᵀx = ‖c‖² − 1`.
///
/// The base circle has radius² `r² = 1 − dist(c, plane)²`, and `β = r²`.
pub fn construct_tangent_sphere(c: &[f64]) -> Result<ConeConstruction> {
    let center = DVector::from_column_slice(c);
    ensure_finite_vector(&center, "sphere center")?;
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "a cone needs n ≥ 2, got {n}"
        )));
    }
    let norm_sq = center.norm_squared();
    if norm_sq <= 1.0 {
        return Err(Error::OriginInsideSphere {
            norm: norm_sq.sqrt(),
        });
    }
    let gap = norm_sq - 1.0;
    if gap < TANGENCY_GAP {
        return Err(Error::NearTangent { gap });
    }
    let q = DMatrix::identity(n, n) - &center * center.transpose() / gap;
    let plane = Hyperplane::new(center.clone(), gap)?;
    let dist = distance_to_hyperplane(&center, &plane)?;
    let radius_sq = 1.0 - dist * dist;
    let anchor = &center * (gap / norm_sq);
    let metric = DMatrix::identity(n, n) / radius_sq;
    ConeConstruction::assemble(
        ConstructionKind::TangentSphere,
        center,
        None,
        plane,
        anchor,
        metric,
        q,
        radius_sq,
    )
}

/// `X = μaaᵀ + azᵀHᵀ + Hzaᵀ` recovered from a symmetric `X` with
/// `HᵀXH = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichDecomposition {
    pub mu: f64,
    pub z: DVector<f64>,
    /// `‖X − μaaᵀ − azᵀHᵀ − Hzaᵀ‖_F`.
    pub residual: f64,
}

pub fn sandwich_decompose(
    x: &DMatrix<f64>,
    a: &DVector<f64>,
    h: &DMatrix<f64>,
) -> Result<SandwichDecomposition> {
    let n = a.len();
    ensure_dim("X rows", x.nrows(), n)?;
    ensure_dim("X columns", x.ncols(), n)?;
    ensure_dim("H rows", h.nrows(), n)?;
    ensure_dim("H columns", h.ncols(), n.saturating_sub(1))?;
    ensure_finite_matrix(x, "X")?;
    ensure_symmetric(x, 1e-12)?;
    let a_sq = a.norm_squared();
    if a_sq == 0.0 {
        return Err(Error::InvalidInput("normal vector is zero".into()));
    }
    let x_norm = x.norm();
    let kernel = (h.transpose() * x * h).norm();
    if kernel > 1e-8 * x_norm {
        return Err(Error::NotInKernel { residual: kernel });
    }
    let xa = x * a;
    let mu = a.dot(&xa) / (a_sq * a_sq);
    let gram = Cholesky::new(h.transpose() * h)
        .ok_or_else(|| Error::InvalidInput("complementary basis is rank deficient".into()))?;
    let z = gram.solve(&(h.transpose() * &xa)) / a_sq;
    let hz = h * &z;
    let rebuilt = a * a.transpose() * mu + a * hz.transpose() + &hz * a.transpose();
    let residual = (x - rebuilt).norm();
    Ok(SandwichDecomposition { mu, z, residual })
}
