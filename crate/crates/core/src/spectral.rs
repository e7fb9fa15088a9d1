//! Arrowhead eigenvalues, inertia, closed-form determinants and eigenvalue
//! brackets for the constructed cone matrices.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_symmetric, sym_eigenvalues};

/// Relative threshold below which an eigenvalue counts as zero.
pub const INERTIA_REL_TOL: f64 = 1e-10;

/// Symmetric matrix `[[α, pᵀ], [p, diag(b)]]` with `b` kept in descending
/// order. `order[k]` is the original position of the k-th sorted entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowheadMatrix {
    alpha: f64,
    p: Vec<f64>,
    b: Vec<f64>,
    order: Vec<usize>,
}

impl ArrowheadMatrix {
    pub fn new(alpha: f64, p: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if p.len() != b.len() {
            return Err(Error::InvalidDimension(format!(
                "arrowhead: p has length {}, b has length {}",
                p.len(),
                b.len()
            )));
        }
        if !alpha.is_finite() || p.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("arrowhead entries"));
        }
        let mut order: Vec<usize> = (0..b.len()).collect();
        order.sort_by(|&i, &j| b[j].total_cmp(&b[i]));
        let p = order.iter().map(|&k| p[k]).collect();
        let b = order.iter().map(|&k| b[k]).collect();
        Ok(Self { alpha, p, b, order })
    }

    /// Reads an arrowhead matrix out of a dense symmetric matrix whose only
    /// off-diagonal entries sit in row/column `head`. Entries outside the
    /// arrow must be at most `tol` in magnitude.
    pub fn from_dense(m: &DMatrix<f64>, head: usize, tol: f64) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n || n == 0 {
            return Err(Error::InvalidDimension(format!(
                "arrowhead source must be square and nonempty, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if head >= n {
            return Err(Error::IndexOutOfRange {
                index: head,
                dim: n,
            });
        }
        ensure_symmetric(m, 1e-12)?;
        for i in 0..n {
            for j in 0..n {
                if i != j && i != head && j != head && m[(i, j)].abs() > tol {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) = {} lies outside the arrow",
                        m[(i, j)]
                    )));
                }
            }
        }
        let rest: Vec<usize> = (0..n).filter(|&k| k != head).collect();
        let p = rest.iter().map(|&k| m[(head, k)]).collect();
        let b = rest.iter().map(|&k| m[(k, k)]).collect();
        Self::new(m[(head, head)], p, b)
    }

    pub fn dim(&self) -> usize {
        self.b.len() + 1
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Coupling vector in sorted order.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Diagonal tail, descending.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Original index of each sorted tail entry.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Dense form in sorted order.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        m[(0, 0)] = self.alpha;
        for (k, (&pk, &bk)) in self.p.iter().zip(&self.b).enumerate() {
            m[(0, k + 1)] = pk;
            m[(k + 1, 0)] = pk;
            m[(k + 1, k + 1)] = bk;
        }
        m
    }

    /// `det(λI − D) = (λ−α)∏(λ−b_k) − Σⱼ pⱼ² ∏_{k≠j}(λ−b_k)`, using prefix
    /// and suffix products so no division by `λ − b_k` occurs.
    pub fn charpoly(&self, lambda: f64) -> f64 {
        self.charpoly_terms(lambda, false)
    }

    /// The same sum with every factor replaced by its absolute value; the
    /// natural scale for judging a residual of [`Self::charpoly`].
    pub fn charpoly_scale(&self, lambda: f64) -> f64 {
        self.charpoly_terms(lambda, true)
    }

    fn charpoly_terms(&self, lambda: f64, absolute: bool) -> f64 {
        let f = |v: f64| if absolute { v.abs() } else { v };
        let m = self.b.len();
        let factors: Vec<f64> = self.b.iter().map(|&bk| f(lambda - bk)).collect();
        let mut prefix = vec![1.0; m + 1];
        for k in 0..m {
            prefix[k + 1] = prefix[k] * factors[k];
        }
        let mut suffix = vec![1.0; m + 1];
        for k in (0..m).rev() {
            suffix[k] = suffix[k + 1] * factors[k];
        }
        let lead = f(lambda - self.alpha) * prefix[m];
        let coupling: f64 = (0..m)
            .map(|j| self.p[j] * self.p[j] * prefix[j] * suffix[j + 1])
            .sum();
        if absolute {
            lead + coupling
        } else {
            lead - coupling
        }
    }

    /// All eigenvalues, descending.
    ///
    /// Zero couplings and repeated tail entries are deflated first: each
    /// pins an eigenvalue exactly at the corresponding `b`. The remaining
    /// roots are separated by strictly decreasing poles of the secular
    /// function `λ − α − Σ wⱼ/(λ − bⱼ)`, which is increasing between poles,
    /// so each is found by bisection inside its interlacing bracket.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let coupling_norm = self.p.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale =
            self.alpha.abs() + self.b.iter().fold(0.0_f64, |a, v| a.max(v.abs())) + coupling_norm;
        if scale == 0.0 {
            return vec![0.0; self.dim()];
        }
        let zero_tol = f64::EPSILON * scale;
        let tie_tol = 4.0 * f64::EPSILON * scale;

        let mut out = Vec::with_capacity(self.dim());
        // (pole, weight) with strictly decreasing poles and positive weights
        let mut poles: Vec<(f64, f64)> = Vec::new();
        for (&pk, &bk) in self.p.iter().zip(&self.b) {
            if pk.abs() <= zero_tol {
                out.push(bk);
                continue;
            }
            match poles.last_mut() {
                Some((pole, weight)) if (*pole - bk).abs() <= tie_tol => {
                    *weight += pk * pk;
                    out.push(bk);
                }
                _ => poles.push((bk, pk * pk)),
            }
        }

        if poles.is_empty() {
            out.push(self.alpha);
        } else {
            let total: f64 = poles.iter().map(|(_, w)| w).sum();
            let radius = total.sqrt();
            let top = self.alpha.max(poles[0].0) + radius;
            let bottom = self.alpha.min(poles[poles.len() - 1].0) - radius;
            let secular = |lambda: f64| {
                lambda - self.alpha - poles.iter().map(|(b, w)| w / (lambda - b)).sum::<f64>()
            };
            let mut edges = Vec::with_capacity(poles.len() + 2);
            edges.push(top);
            edges.extend(poles.iter().map(|(b, _)| *b));
            edges.push(bottom);
            for pair in edges.windows(2) {
                out.push(bisect_increasing(&secular, pair[1], pair[0]));
            }
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

/// Root of an increasing function on `(lo, hi)`, bisected to machine
/// precision.
fn bisect_increasing(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn arrowhead_charpoly(m: &ArrowheadMatrix, lambda: f64) -> f64 {
    m.charpoly(lambda)
}

pub fn arrowhead_eigenvalues(m: &ArrowheadMatrix) -> Vec<f64> {
    m.eigenvalues()
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Inertia {
    pub const fn new(positive: usize, zero: usize, negative: usize) -> Self {
        Self {
            positive,
            zero,
            negative,
        }
    }

    /// Inertia `(n−1, 0, 1)` of a Lorenz cone matrix.
    pub const fn lorenz(n: usize) -> Self {
        Self::new(n - 1, 0, 1)
    }

    pub fn dim(&self) -> usize {
        self.positive + self.zero + self.negative
    }

    /// Classifies with threshold `τ = 1e−10·max|λ|`.
    pub fn from_eigenvalues(values: &[f64]) -> Self {
        let norm = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let tau = INERTIA_REL_TOL * norm;
        let positive = values.iter().filter(|&&v| v > tau).count();
        let negative = values.iter().filter(|&&v| v < -tau).count();
        Self::new(positive, values.len() - positive - negative, negative)
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.zero, self.negative)
    }
}

pub fn inertia(q: &DMatrix<f64>) -> Result<Inertia> {
    ensure_symmetric(q, 1e-12)?;
    Ok(Inertia::from_eigenvalues(&sym_eigenvalues(q)?))
}

fn ensure_positive(c: &[f64]) -> Result<()> {
    match c
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > 0.0 && v.is_finite()))
    {
        Some((i, v)) => Err(Error::InvalidInput(format!(
            "entries must be positive and finite, c[{i}] = {v}"
        ))),
        None => Ok(()),
    }
}

/// `det(Qᵢ) = −∏ 1/c_k²` for the axis-hyperplane cone (independent of `i`).
pub fn det_axis_cone(c: &[f64]) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::InvalidDimension("empty center".into()));
    }
    ensure_positive(c)?;
    Ok(-c.iter().map(|v| 1.0 / (v * v)).product::<f64>())
}

/// `det(βI + αeeᵀ) = (1 + nα/β)βⁿ`, evaluated as `βⁿ⁻¹(β + nα)` so that
/// `β = 0` needs no special case.
pub fn det_identity_plus_rank_one(beta: f64, alpha: f64, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    beta.powi(n as i32 - 1) * (beta + n as f64 * alpha)
}

/// Lower and upper brackets for the largest eigenvalue of the axis cone `Qᵢ`
/// (0-based `axis`), built from the largest and smallest of the remaining
/// center coordinates respectively.
pub fn lambda1_bounds_axis_cone(c: &[f64], axis: usize) -> Result<(f64, f64)> {
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "eigenvalue bounds need n ≥ 2, got {n}"
        )));
    }
    if axis >= n {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: n,
        });
    }
    ensure_positive(c)?;
    let ci = c[axis];
    let others = c
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != axis)
        .map(|(_, &v)| v);
    let c_max = others.clone().fold(f64::NEG_INFINITY, f64::max);
    let c_min = others.clone().fold(f64::INFINITY, f64::min);
    let inv_sq_sum: f64 = others.map(|v| 1.0 / (v * v)).sum();
    let lead = (n as f64 - 2.0) / ci;
    let bound = |cj: f64| {
        let gap = lead - ci / (cj * cj);
        0.5 * (lead / ci + 1.0 / (cj * cj) + (gap * gap + 4.0 * inv_sq_sum).sqrt() / ci)
    };
    Ok((bound(c_max), bound(c_min)))
}

/// Spectrum of a rank-one product `acᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankOneSpectrum {
    /// `aᵀc`; zero in the defective case.
    pub eigenvalue: f64,
    pub zero_multiplicity: usize,
    /// Nonzero nilpotent matrix (`acᵀ ≠ 0`, `aᵀc = 0`): every eigenvalue is 0
    /// but the zero eigenspace has dimension `n−1` only.
    pub defective: bool,
}

impl RankOneSpectrum {
    /// Eigenvalues with multiplicity, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.zero_multiplicity];
        if self.zero_multiplicity < self.dim() {
            v.push(self.eigenvalue);
        }
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    fn dim(&self) -> usize {
        if self.eigenvalue == 0.0 {
            self.zero_multiplicity
        } else {
            self.zero_multiplicity + 1
        }
    }
}

pub fn rank_one_spectrum(a: &DVector<f64>, c: &DVector<f64>) -> Result<RankOneSpectrum> {
    if a.len() != c.len() {
        return Err(Error::InvalidDimension(format!(
            "rank-one factors differ in length: {} vs {}",
            a.len(),
            c.len()
        )));
    }
    let n = a.len();
    let (na, nc) = (a.norm(), c.norm());
    if na == 0.0 && nc == 0.0 {
        return Err(Error::InvalidInput("both rank-one factors are zero".into()));
    }
    let dot = a.dot(c);
    if na == 0.0 || nc == 0.0 {
        return Ok(RankOneSpectrum {
            eigenvalue: 0.0,
            zero_multiplicity: n,
            defective: false,
        });
    }
    if dot.abs() <= 1e-12 * na * nc {
        return Ok(RankOneSpectrum {
            eigenvalue: 0.0,
            zero_multiplicity: n,
            defective: true,
        });
    }
    Ok(RankOneSpectrum {
        eigenvalue: dot,
        zero_multiplicity: n - 1,
        defective: false,
    })
}

/// Spectrum of the all-ones-plane cone at `c = κe`: `1/κ²` with multiplicity
/// `n−1` and `−1/(nκ²)` once, descending.
pub fn equal_c_spectrum(c: f64, n: usize) -> Result<Vec<f64>> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("c must be positive, got {c}")));
    }
    if n < 2 {
        return Err(Error::InvalidDimension(format!("need n ≥ 2, got {n}")));
    }
    let inv = 1.0 / (c * c);
    let mut v = vec![inv; n - 1];
    v.push(-inv / n as f64);
    Ok(v)
}

/// Numeric spectrum of a cone matrix next to whatever closed forms apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Dense eigensolver output, descending.
    pub eigenvalues: Vec<f64>,
    pub inertia: Inertia,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_closed_form: Option<f64>,
    pub det_numeric: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1_upper: Option<f64>,
    /// Eigenvalues from a structural route (arrowhead bisection or the
    /// equal-center formula), descending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_eigenvalues: Option<Vec<f64>>,
}

impl SpectralReport {
    pub fn analyze(q: &DMatrix<f64>) -> Result<Self> {
        ensure_symmetric(q, 1e-12)?;
        let eigenvalues = sym_eigenvalues(q)?;
        let inertia = Inertia::from_eigenvalues(&eigenvalues);
        let det_numeric = q.clone().lu().determinant();
        Ok(Self {
            eigenvalues,
            inertia,
            det_closed_form: None,
            det_numeric,
            lambda1_lower: None,
            lambda1_upper: None,
            closed_form_eigenvalues: None,
        })
    }

    pub fn with_closed_form_det(mut self, det: f64) -> Self {
        self.det_closed_form = Some(det);
        self
    }

    pub fn with_lambda1_bounds(mut self, (lower, upper): (f64, f64)) -> Self {
        self.lambda1_lower = Some(lower);
        self.lambda1_upper = Some(upper);
        self
    }

    pub fn with_closed_form_eigenvalues(mut self, values: Vec<f64>) -> Self {
        self.closed_form_eigenvalues = Some(values);
        self
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `|det_closed − det_numeric| ≤ 1e−8·max(1, |det_numeric|)` when a
    /// closed form is present.
    pub fn determinant_consistent(&self) -> bool {
        self.det_closed_form
            .is_none_or(|d| (d - self.det_numeric).abs() <= 1e-8 * self.det_numeric.abs().max(1.0))
    }

    /// Whether the bracket (if any) contains the largest eigenvalue, with
    /// slack `tol` relative to its magnitude.
    pub fn bracket_holds(&self, tol: f64) -> bool {
        let l1 = self.lambda1();
        let slack = tol * l1.abs().max(1.0);
        self.lambda1_lower.is_none_or(|lo| lo <= l1 + slack)
            && self.lambda1_upper.is_none_or(|hi| l1 <= hi + slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_det(m: &DMatrix<f64>) -> f64 {
        m.clone().lu().determinant()
    }

    #[test]
    fn charpoly_hand_values() {
        let m = ArrowheadMatrix::new(2.0, vec![1.0], vec![1.0]).unwrap();
        assert_eq!(m.charpoly(0.0), 1.0);
        // det(λI − D) at 0 is det(−D) = det(D) for 2×2: 2·1 − 1 = 1
        assert_eq!(dense_det(&m.to_dense()), 1.0);
        let r1 = (3.0 + 5f64.sqrt()) / 2.0;
        let r2 = (3.0 - 5f64.sqrt()) / 2.0;
        assert!(m.charpoly(r1).abs() < 1e-14);
        assert!(m.charpoly(r2).abs() < 1e-14);
    }

    #[test]
    fn charpoly_decoupled() {
        let m = ArrowheadMatrix::new(5.0, vec![0.0, 0.0], vec![3.0, 1.0]).unwrap();
        for lambda in [-2.0, 0.5, 4.0, 7.25] {
            let expected = (lambda - 5.0) * (lambda - 3.0) * (lambda - 1.0);
            assert!((m.charpoly(lambda) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_examples() {
        let m = ArrowheadMatrix::new(2.0, vec![1.0], vec![1.0]).unwrap();
        let ev = m.eigenvalues();
        assert!((ev[0] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);

        let diag = ArrowheadMatrix::new(5.0, vec![0.0, 0.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(diag.eigenvalues(), vec![5.0, 3.0, 1.0]);
        assert_eq!(diag.b(), &[3.0, 1.0]);
        assert_eq!(diag.order(), &[1, 0]);

        // Q₁ at n = 3, c = e
        let q1 = ArrowheadMatrix::new(1.0, vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let ev = q1.eigenvalues();
        let s2 = 2f64.sqrt();
        for (got, want) in ev.iter().zip([1.0 + s2, 1.0, 1.0 - s2]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn from_dense_requires_arrow_pattern() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 2.0, 0.0, 4.0]);
        let a = ArrowheadMatrix::from_dense(&m, 2, 0.0).unwrap();
        assert_eq!(a.alpha(), 4.0);
        let bad = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 2.0, 1.0, 3.0, 0.0, 2.0, 0.0, 4.0]);
        assert!(ArrowheadMatrix::from_dense(&bad, 2, 0.0).is_err());
    }

    #[test]
    fn inertia_examples() {
        let sig = crate::linalg::lorentz_signature(3);
        assert_eq!(inertia(&sig).unwrap(), Inertia::new(2, 0, 1));
        assert_eq!(
            inertia(&DMatrix::identity(4, 4)).unwrap(),
            Inertia::new(4, 0, 0)
        );
        let h =
            crate::geometry::complementary_basis(&DVector::from_column_slice(&[1.0, 2.0, -1.0]))
                .unwrap();
        assert_eq!(
            inertia(&(&h * h.transpose())).unwrap(),
            Inertia::new(2, 1, 0)
        );
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(inertia(&asym), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn det_axis_examples() {
        assert_eq!(det_axis_cone(&[1.0, 1.0, 1.0]).unwrap(), -1.0);
        assert!((det_axis_cone(&[1.0, 2.0, 3.0]).unwrap() + 1.0 / 36.0).abs() < 1e-16);
        let c = [0.7, 1.3, 2.2, 0.4];
        let t: f64 = 1.7;
        let scaled: Vec<f64> = c.iter().map(|v| v * t).collect();
        let ratio = det_axis_cone(&scaled).unwrap() / det_axis_cone(&c).unwrap();
        assert!((ratio - t.powi(-8)).abs() < 1e-14);
        assert!(det_axis_cone(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn det_rank_one_examples() {
        assert_eq!(det_identity_plus_rank_one(1.0, 1.0, 3), 4.0);
        assert_eq!(det_identity_plus_rank_one(1.5, 0.0, 4), 1.5f64.powi(4));
        assert_eq!(det_identity_plus_rank_one(2.0, -1.0, 2), 0.0);
        assert_eq!(det_identity_plus_rank_one(0.0, 3.0, 3), 0.0);
        assert_eq!(det_identity_plus_rank_one(0.0, 3.0, 1), 3.0);
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = lambda1_bounds_axis_cone(&[1.0, 1.0, 1.0], 0).unwrap();
        let tight = 1.0 + 2f64.sqrt();
        assert!((lo - tight).abs() < 1e-14 && (hi - tight).abs() < 1e-14);

        let (lo, hi) = lambda1_bounds_axis_cone(&[1.0, 1.0, 2.0], 0).unwrap();
        assert!((lo - 1.8042476415070754).abs() < 1e-12, "{lo}");
        assert!((hi - (2.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        // λ₁ of [[1,−1,−1/2],[−1,1,0],[−1/2,0,1/4]] from the dense solver
        let q = DMatrix::from_row_slice(3, 3, &[1.0, -1.0, -0.5, -1.0, 1.0, 0.0, -0.5, 0.0, 0.25]);
        let l1 = sym_eigenvalues(&q).unwrap()[0];
        assert!(lo <= l1 && l1 <= hi, "{lo} ≤ {l1} ≤ {hi}");
        assert!((l1 - 2.08).abs() < 0.01);

        assert!(matches!(
            lambda1_bounds_axis_cone(&[1.0], 0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn rank_one_examples() {
        let e = DVector::from_element(3, 1.0);
        let s = rank_one_spectrum(&e, &e).unwrap();
        assert_eq!(s.eigenvalue, 3.0);
        assert_eq!(s.zero_multiplicity, 2);
        assert_eq!(s.eigenvalues(), vec![3.0, 0.0, 0.0]);

        let a = DVector::from_column_slice(&[1.0, -2.0, 2.0]);
        assert_eq!(rank_one_spectrum(&a, &a).unwrap().eigenvalue, 9.0);

        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        let e2 = DVector::from_column_slice(&[0.0, 1.0, 0.0]);
        let s = rank_one_spectrum(&e1, &e2).unwrap();
        assert!(s.defective);
        assert_eq!(s.eigenvalues(), vec![0.0; 3]);

        let z = DVector::zeros(3);
        assert!(rank_one_spectrum(&z, &z).is_err());
    }

    #[test]
    fn equal_c_examples() {
        assert_eq!(
            equal_c_spectrum(1.0, 3).unwrap(),
            vec![1.0, 1.0, -1.0 / 3.0]
        );
        assert_eq!(equal_c_spectrum(2.0, 2).unwrap(), vec![0.25, -0.125]);
        assert!(equal_c_spectrum(-1.0, 3).is_err());
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*state >> 11) as f64) / ((1u64 << 53) as f64)
    }

    proptest! {
        #[test]
        fn arrowhead_matches_dense_and_interlaces(
            m in 1usize..10,
            seed in any::<u64>(),
            repeat in any::<bool>(),
        ) {
            let mut s = seed;
            let alpha = 10.0 * lcg(&mut s) - 5.0;
            let p: Vec<f64> = (0..m).map(|_| 4.0 * lcg(&mut s) - 2.0).collect();
            let mut b: Vec<f64> = (0..m).map(|_| 10.0 * lcg(&mut s) - 5.0).collect();
            if repeat && m > 1 {
                b[1] = b[0];
            }
            let arrow = ArrowheadMatrix::new(alpha, p, b).unwrap();
            let ev = arrow.eigenvalues();
            let dense = sym_eigenvalues(&arrow.to_dense()).unwrap();
            for (x, y) in ev.iter().zip(&dense) {
                prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
            }
            for (k, bk) in arrow.b().iter().enumerate() {
                prop_assert!(ev[k] >= bk - 1e-9 && *bk >= ev[k + 1] - 1e-9);
            }
        }

        #[test]
        fn det_rank_one_matches_dense(
            n in 1usize..=8,
            beta in -5.0f64..5.0,
            alpha in -5.0f64..5.0,
        ) {
            prop_assume!(beta.abs() > 1e-3);
            let m = DMatrix::identity(n, n) * beta + DMatrix::from_element(n, n, alpha);
            let dense = dense_det(&m);
            let closed = det_identity_plus_rank_one(beta, alpha, n);
            prop_assert!((closed - dense).abs() <= 1e-10 * dense.abs().max(closed.abs()).max(1e-300) + 1e-12);
        }
    }
}
