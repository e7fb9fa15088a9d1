//! Hyperplanes, Dikin ellipsoids, general ellipsoids and central slices.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{ensure_finite_matrix, ensure_finite_vector, ensure_symmetric, quad_form};

/// Tolerance factor for `aᵀH = 0` when accepting a caller supplied basis.
const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Orthonormal basis of the orthogonal complement of `a`, as the columns of
/// an `n × (n−1)` matrix.
///
/// The basis is taken from the Householder reflector that maps `a/‖a‖` onto
/// its largest coordinate axis; the remaining columns of the reflector span
/// the complement.
pub fn complementary_basis(a: &DVector<f64>) -> Result<DMatrix<f64>> {
    ensure_finite_vector(a, "normal vector")?;
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "complementary basis needs n ≥ 2, got {n}"
        )));
    }
    let norm = a.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput("normal vector is zero".into()));
    }
    let v = a / norm;
    let pivot = v.iamax();
    let mut w = v.clone();
    w[pivot] += v[pivot].signum();
    let ww = w.norm_squared();

    let mut basis = DMatrix::zeros(n, n - 1);
    let mut col = 0;
    for j in 0..n {
        if j == pivot {
            continue;
        }
        // column j of I − 2wwᵀ/(wᵀw)
        let scale = 2.0 * w[j] / ww;
        for i in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            basis[(i, col)] = delta - scale * w[i];
        }
        col += 1;
    }
    Ok(basis)
}

/// The explicit orthonormal complement of `e = (1,…,1)`:
/// `hᵢ = −(1/√(i(i+1))) Σ_{k≤i} e_k + √(i/(i+1)) e_{i+1}`.
pub fn ones_complement_basis(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "ones complement needs n ≥ 2, got {n}"
        )));
    }
    let mut h = DMatrix::zeros(n, n - 1);
    for col in 0..n - 1 {
        let i = (col + 1) as f64;
        let lead = -1.0 / (i * (i + 1.0)).sqrt();
        for row in 0..=col {
            h[(row, col)] = lead;
        }
        h[(col + 1, col)] = (i / (i + 1.0)).sqrt();
    }
    Ok(h)
}

/// Axis complement `[e₁,…,e_{i−1},e_{i+1},…,eₙ]` (0-based `axis`).
pub fn axis_complement_basis(n: usize, axis: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "axis complement needs n ≥ 2, got {n}"
        )));
    }
    if axis >= n {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: n,
        });
    }
    let mut h = DMatrix::zeros(n, n - 1);
    for (col, row) in (0..n).filter(|&r| r != axis).enumerate() {
        h[(row, col)] = 1.0;
    }
    Ok(h)
}

/// `|aᵀx − α| / ‖a‖`.
pub fn distance_to_hyperplane(x: &DVector<f64>, plane: &Hyperplane) -> Result<f64> {
    ensure_dim("point", x.len(), plane.dim())?;
    Ok((plane.normal.dot(x) - plane.offset).abs() / plane.normal.norm())
}

/// Hyperplane `{x : aᵀx = α}` carrying a complementary basis `H`, so that it
/// also reads `{x₀ + Hz}` for any point `x₀` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: DVector<f64>,
    offset: f64,
    basis: DMatrix<f64>,
}

impl Hyperplane {
    /// Plane with an orthonormal Householder complement.
    pub fn new(normal: DVector<f64>, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite("hyperplane offset"));
        }
        let basis = complementary_basis(&normal)?;
        Ok(Self {
            normal,
            offset,
            basis,
        })
    }

    /// Plane with normal `a` passing through `point`.
    pub fn through(normal: DVector<f64>, point: &DVector<f64>) -> Result<Self> {
        ensure_dim("point", point.len(), normal.len())?;
        let offset = normal.dot(point);
        Self::new(normal, offset)
    }

    /// Plane with a caller supplied complementary basis (not necessarily
    /// orthonormal). Rejects bases that are not orthogonal to `a` or are
    /// rank deficient.
    pub fn with_basis(normal: DVector<f64>, offset: f64, basis: DMatrix<f64>) -> Result<Self> {
        ensure_finite_vector(&normal, "normal vector")?;
        ensure_finite_matrix(&basis, "complementary basis")?;
        let n = normal.len();
        if n < 2 {
            return Err(Error::InvalidDimension(format!(
                "hyperplane needs n ≥ 2, got {n}"
            )));
        }
        if basis.nrows() != n || basis.ncols() != n - 1 {
            return Err(Error::InvalidDimension(format!(
                "basis must be {n}×{}, got {}×{}",
                n - 1,
                basis.nrows(),
                basis.ncols()
            )));
        }
        let a_norm = normal.norm();
        if a_norm == 0.0 {
            return Err(Error::InvalidInput("normal vector is zero".into()));
        }
        for (j, h) in basis.column_iter().enumerate() {
            let dot = normal.dot(&h).abs();
            if dot > ORTHOGONALITY_TOL * a_norm * h.norm() {
                return Err(Error::InvalidInput(format!(
                    "basis column {j} is not orthogonal to the normal (|aᵀh| = {dot:e})"
                )));
            }
        }
        let gram = basis.transpose() * &basis;
        let scale = gram.diagonal().max();
        let full_rank = Cholesky::new(gram).is_some_and(|f| {
            let l = f.l();
            l.diagonal().iter().all(|d| d * d > 1e-12 * scale)
        });
        if !full_rank {
            return Err(Error::InvalidInput(
                "basis columns are linearly dependent".into(),
            ));
        }
        Ok(Self {
            normal,
            offset,
            basis,
        })
    }

    /// `{x : x_axis = offset}` with the coordinate complement as basis.
    pub fn axis(n: usize, axis: usize, offset: f64) -> Result<Self> {
        let basis = axis_complement_basis(n, axis)?;
        let mut normal = DVector::zeros(n);
        normal[axis] = 1.0;
        Ok(Self {
            normal,
            offset,
            basis,
        })
    }

    /// `{x : eᵀx = offset}` with the explicit ones complement as basis.
    pub fn ones(n: usize, offset: f64) -> Result<Self> {
        let basis = ones_complement_basis(n)?;
        Ok(Self {
            normal: DVector::from_element(n, 1.0),
            offset,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &DVector<f64> {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Projector `H(HᵀH)⁻¹Hᵀ` onto the plane's direction space.
    pub fn projector(&self) -> Result<DMatrix<f64>> {
        let h = &self.basis;
        let gram = h.transpose() * h;
        let chol = Cholesky::new(gram)
            .ok_or_else(|| Error::Numeric("HᵀH is not positive definite".into()))?;
        Ok(h * chol.solve(&h.transpose()))
    }

    /// Whether `|aᵀx − α| ≤ 1e−10·(1+|α|)`.
    pub fn passes_through(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim() && self.center_residual(x) <= 1e-10 * (1.0 + self.offset.abs())
    }

    fn center_residual(&self, x: &DVector<f64>) -> f64 {
        (self.normal.dot(x) - self.offset).abs()
    }
}

/// Types whose boundary can be sampled deterministically from a seed.
pub trait BoundarySampler {
    fn sample_boundary(&self, count: usize, seed: u64) -> Vec<DVector<f64>>;
}

/// Unit vectors drawn from a seeded normal distribution.
pub(crate) fn unit_directions(dim: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        let norm: f64 = v.norm();
        if norm > 1e-12 {
            out.push(v / norm);
        }
    }
    out
}

/// `{x : (x−c)ᵀC⁻²(x−c) ≤ 1}` with `C = diag(c)` and `c > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DikinEllipsoid {
    center: DVector<f64>,
}

impl TryFrom<Vec<f64>> for DikinEllipsoid {
    type Error = Error;

    fn try_from(c: Vec<f64>) -> Result<Self> {
        Self::new(DVector::from_vec(c))
    }
}

impl From<DikinEllipsoid> for Vec<f64> {
    fn from(d: DikinEllipsoid) -> Self {
        d.center.as_slice().to_vec()
    }
}

impl DikinEllipsoid {
    pub fn new(center: DVector<f64>) -> Result<Self> {
        ensure_finite_vector(&center, "Dikin center")?;
        if center.is_empty() {
            return Err(Error::InvalidDimension("Dikin center is empty".into()));
        }
        if let Some((i, v)) = center.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "Dikin center must be strictly positive, c[{i}] = {v}"
            )));
        }
        Ok(Self { center })
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(c))
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    /// `D = C⁻²`.
    pub fn scaling(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.center.map(|c| 1.0 / (c * c)))
    }

    /// `(x−c)ᵀC⁻²(x−c)`.
    pub fn quadratic(&self, x: &DVector<f64>) -> f64 {
        x.iter()
            .zip(self.center.iter())
            .map(|(xi, ci)| {
                let t = (xi - ci) / ci;
                t * t
            })
            .sum()
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim() && self.quadratic(x) <= 1.0 + 1e-12
    }

    /// The slice `H ∩ E_D` for a hyperplane through the center.
    pub fn slice(&self, plane: &Hyperplane) -> Result<EllipsoidSlice> {
        ensure_dim("hyperplane", plane.dim(), self.dim())?;
        if !plane.passes_through(&self.center) {
            return Err(Error::PlaneNotThroughCenter {
                residual: plane.center_residual(&self.center),
            });
        }
        let h = plane.basis().clone();
        let gram = h.transpose() * self.scaling() * &h;
        EllipsoidSlice::new(self.center.clone(), h, gram)
    }
}

impl BoundarySampler for DikinEllipsoid {
    fn sample_boundary(&self, count: usize, seed: u64) -> Vec<DVector<f64>> {
        unit_directions(self.dim(), count, seed)
            .into_iter()
            .map(|u| &self.center + u.component_mul(&self.center))
            .collect()
    }
}

/// `{c + Hz : zᵀGz ≤ 1}` with `G = HᵀC⁻²H`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidSlice {
    anchor: DVector<f64>,
    basis: DMatrix<f64>,
    gram: DMatrix<f64>,
    gram_factor: DMatrix<f64>,
}

impl EllipsoidSlice {
    pub(crate) fn new(
        anchor: DVector<f64>,
        basis: DMatrix<f64>,
        gram: DMatrix<f64>,
    ) -> Result<Self> {
        let chol = Cholesky::new(gram.clone()).ok_or(Error::NotPositiveDefinite)?;
        let gram_factor = chol.l();
        Ok(Self {
            anchor,
            basis,
            gram,
            gram_factor,
        })
    }

    pub fn anchor(&self) -> &DVector<f64> {
        &self.anchor
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    /// `zᵀGz`.
    pub fn quadratic(&self, z: &DVector<f64>) -> f64 {
        quad_form(&self.gram, z)
    }

    pub fn contains(&self, z: &DVector<f64>) -> bool {
        z.len() == self.gram.nrows() && self.quadratic(z) <= 1.0 + 1e-12
    }

    /// `c + Hz`.
    pub fn point(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.anchor + &self.basis * z
    }

    /// Slice coordinates `z` with `zᵀGz = 1` in direction `u` (unit).
    pub fn boundary_coordinates(&self, u: &DVector<f64>) -> DVector<f64> {
        // z = L⁻ᵀu gives zᵀLLᵀz = uᵀu
        self.gram_factor
            .transpose()
            .solve_upper_triangular(u)
            .expect("Cholesky factor has a positive diagonal")
    }

    /// Deterministic sample of slice coordinates on `zᵀGz = 1`.
    pub fn sample_boundary_coordinates(&self, count: usize, seed: u64) -> Vec<DVector<f64>> {
        unit_directions(self.gram.nrows(), count, seed)
            .iter()
            .map(|u| self.boundary_coordinates(u))
            .collect()
    }
}

impl BoundarySampler for EllipsoidSlice {
    fn sample_boundary(&self, count: usize, seed: u64) -> Vec<DVector<f64>> {
        self.sample_boundary_coordinates(count, seed)
            .iter()
            .map(|z| self.point(z))
            .collect()
    }
}

/// `{x : xᵀQx + 2pᵀx + ρ ≤ 1}` with `Q ≻ 0` and `ρ = pᵀQ⁻¹p`, centered at
/// `−Q⁻¹p`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    q: DMatrix<f64>,
    p: DVector<f64>,
    rho: f64,
    factor: Cholesky<f64, Dyn>,
}

impl Ellipsoid {
    pub fn new(q: DMatrix<f64>, p: DVector<f64>) -> Result<Self> {
        ensure_finite_matrix(&q, "ellipsoid matrix")?;
        ensure_finite_vector(&p, "ellipsoid shift")?;
        ensure_symmetric(&q, 1e-12)?;
        ensure_dim("ellipsoid shift", p.len(), q.nrows())?;
        let factor = Cholesky::new(q.clone()).ok_or(Error::NotPositiveDefinite)?;
        let rho = p.dot(&factor.solve(&p));
        Ok(Self { q, p, rho, factor })
    }

    /// Accepts an explicit `ρ`, which must equal `pᵀQ⁻¹p` within 1e−10.
    pub fn from_parts(q: DMatrix<f64>, p: DVector<f64>, rho: f64) -> Result<Self> {
        let e = Self::new(q, p)?;
        if (e.rho - rho).abs() > 1e-10 * (1.0 + e.rho.abs()) {
            return Err(Error::InvalidInput(format!(
                "ρ = {rho} is inconsistent with pᵀQ⁻¹p = {}",
                e.rho
            )));
        }
        Ok(e)
    }

    /// Ellipsoid centered at the origin, `xᵀPx ≤ 1`.
    pub fn centered(q: DMatrix<f64>) -> Result<Self> {
        let n = q.nrows();
        Self::new(q, DVector::zeros(n))
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

    pub fn center(&self) -> DVector<f64> {
        -self.factor.solve(&self.p)
    }

    /// `xᵀQx + 2pᵀx + ρ`; membership is `≤ 1`.
    pub fn quadratic(&self, x: &DVector<f64>) -> f64 {
        quad_form(&self.q, x) + 2.0 * self.p.dot(x) + self.rho
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim() && self.quadratic(x) <= 1.0 + 1e-12
    }
}

impl BoundarySampler for Ellipsoid {
    fn sample_boundary(&self, count: usize, seed: u64) -> Vec<DVector<f64>> {
        let center = self.center();
        let lt = self.factor.l().transpose();
        unit_directions(self.dim(), count, seed)
            .iter()
            .map(|u| {
                &center
                    + lt.solve_upper_triangular(u)
                        .expect("Cholesky factor has a positive diagonal")
            })
            .collect()
    }
}
