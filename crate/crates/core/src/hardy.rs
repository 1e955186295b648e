//! Hardy-space numerics: Taylor vectors, boundary samples, kernels, model
//! space projection, orbit limits of `B ∘ phi^(n)` and the span trichotomy.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, Zero, ZeroSequence};
use crate::chart::HalfPlanePoint;
use crate::error::{invalid, HolError, Result};
use crate::geometry::{DiscPoint, MoebiusAutomorphism, NonEllipticNormalForm};

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_KAPPA_MAX: f64 = 1e12;
pub const DEFAULT_EPS_E: f64 = 0.05;
pub const DEFAULT_SUBDISC: f64 = 0.95;
pub const DEFAULT_EPS_FIT: f64 = 1e-3;
pub const DEFAULT_EPS_CONST: f64 = 1e-3;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated power series `a_0 + a_1 z + ... + a_N z^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TaylorVector {
    pub coefficients: Vec<Complex64>,
}

impl TaylorVector {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        Self::new(c)
    }

    /// Szegő kernel `K_w` truncated to degree `degree`: coefficients `conj(w)^n`.
    pub fn kernel(w: DiscPoint, degree: usize) -> Self {
        let wc = w.value().conj();
        let mut c = Vec::with_capacity(degree + 1);
        let mut p = ONE;
        for _ in 0..=degree {
            c.push(p);
            p *= wc;
        }
        Self::new(c)
    }

    /// Degree needed for `|w|^n` to drop below `1e-17`.
    pub fn kernel_degree(abs_w: f64) -> usize {
        if abs_w < 1e-300 {
            return 0;
        }
        ((-17.0 * std::f64::consts::LN_10 / abs_w.ln()).ceil() as usize).max(1)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients.get(n).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new((0..n).map(|k| self.coefficient(k) + other.coefficient(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// Samples on the `m`-point grid; coefficients beyond `m` fold onto
    /// their aliases, which is exact pointwise sampling.
    pub fn to_samples(&self, m: usize) -> Result<BoundarySamples> {
        check_grid(m)?;
        let mut buf = vec![ZERO; m];
        for (n, a) in self.coefficients.iter().enumerate() {
            buf[n % m] += a;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        BoundarySamples::new(buf)
    }
}

/// `<f, g> = sum a_n conj(b_n)`.
pub fn inner_product(f: &TaylorVector, g: &TaylorVector) -> Complex64 {
    f.coefficients
        .iter()
        .zip(&g.coefficients)
        .map(|(a, b)| a * b.conj())
        .sum()
}

/// `K_w(z) = 1/(1 - conj(w) z)`.
pub fn kernel_eval(w: DiscPoint, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(HolError::NotInDisc { re: z.re, im: z.im });
    }
    Ok(ONE / (ONE - w.value().conj() * z))
}

fn check_grid(m: usize) -> Result<()> {
    if m == 0 || !m.is_power_of_two() {
        return invalid(format!("grid size {m} is not a power of two"));
    }
    Ok(())
}

/// Values on the equispaced grid `theta_j = 2 pi j / M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySamples {
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_grid(values.len())?;
        Ok(Self { values })
    }

    pub fn from_fn(m: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_grid(m)?;
        Self::new((0..m).map(|j| f(Complex64::from_polar(1.0, angle(j, m)))).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.len()).map(|j| angle(j, self.len())).collect()
    }

    /// Fourier coefficients `c_k`, `k = 0..M`, index `k >= M/2` meaning `k - M`.
    pub fn fourier(&self) -> Vec<Complex64> {
        let m = self.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let s = 1.0 / m as f64;
        buf.iter().map(|c| c * s).collect()
    }

    /// Analytic part `c_0 .. c_{M/2 - 1}` as a Taylor vector.
    pub fn to_taylor(&self) -> TaylorVector {
        let mut c = self.fourier();
        c.truncate(self.len() / 2);
        TaylorVector::new(c)
    }

    /// Band-limited extension evaluated at the boundary point `e^{i theta}`:
    /// the radial limit of the Poisson extension of the trigonometric
    /// interpolant.
    pub fn interpolator(&self) -> Interpolator {
        let m = self.len();
        let c = self.fourier();
        let half = m / 2;
        let mut pos: Vec<Complex64> = c[..half].to_vec();
        let mut neg: Vec<Complex64> = c[half..].iter().rev().copied().collect();
        // split the Nyquist term evenly so the interpolant stays real for real data
        if m >= 2 {
            let nyq = neg.pop().unwrap_or(ZERO) * 0.5;
            pos.push(nyq);
            neg.push(nyq);
        }
        Interpolator { pos, neg }
    }
}

/// `sum_{k >= 0} pos_k zeta^k + sum_{k >= 1} neg_{k-1} conj(zeta)^k`.
#[derive(Debug, Clone)]
pub struct Interpolator {
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
}

impl Interpolator {
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let p = self.pos.iter().rev().fold(ZERO, |acc, &a| acc * z + a);
        let zb = z.conj();
        let q = self.neg.iter().rev().fold(ZERO, |acc, &a| acc * zb + a) * zb;
        p + q
    }
}

fn angle(j: usize, m: usize) -> f64 {
    2.0 * PI * j as f64 / m as f64
}

/// `(mean |f|^p)^{1/p}` over the grid; `p = inf` gives the grid maximum.
pub fn hp_norm(f: &BoundarySamples, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return invalid(format!("p = {p} must be at least 1"));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let s: f64 = f.values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / f.len() as f64;
    Ok(s.powf(1.0 / p))
}

/// Samples of `f ∘ phi` on the same grid.
pub fn compose_boundary(f: &BoundarySamples, phi: &MoebiusAutomorphism) -> BoundarySamples {
    let interp = f.interpolator();
    let m = f.len();
    let values = (0..m)
        .map(|j| {
            let xi = Complex64::from_polar(1.0, angle(j, m));
            interp.eval_angle(phi.apply(xi).arg())
        })
        .collect();
    BoundarySamples { values }
}

/// Nodes `w_i` with the optional elements `1` and `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpanBasis {
    pub nodes: Vec<DiscPoint>,
    pub include_constant: bool,
    pub include_z: bool,
}

impl KernelSpanBasis {
    /// Basis of `span[{1} ∪ {K_w : w in E} ∪ {z : 0 in E}]`; `K_0 = 1` is dropped.
    pub fn from_set(e: &[DiscPoint]) -> Self {
        let has_zero = e.iter().any(|w| w.value().norm() == 0.0);
        Self {
            nodes: e.iter().copied().filter(|w| w.value().norm() != 0.0).collect(),
            include_constant: true,
            include_z: has_zero,
        }
    }

    fn elements(&self) -> Vec<BasisElement> {
        let mut out = Vec::new();
        if self.include_constant {
            out.push(BasisElement::One);
        }
        out.extend(self.nodes.iter().map(|w| BasisElement::Kernel(w.value())));
        if self.include_z {
            out.push(BasisElement::Z);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.nodes.len() + self.include_constant as usize + self.include_z as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `G_{ij} = <e_j, e_i>`.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let el = self.elements();
        let n = el.len();
        DMatrix::from_fn(n, n, |i, j| el[j].inner(&el[i]))
    }

    /// Materialized basis vectors.
    pub fn vectors(&self) -> Vec<TaylorVector> {
        let deg = self.degree();
        self.elements().iter().map(|e| e.vector(deg)).collect()
    }

    fn degree(&self) -> usize {
        let r = self.nodes.iter().map(|w| w.value().norm()).fold(0.0, f64::max);
        TaylorVector::kernel_degree(r).max(1)
    }
}

#[derive(Debug, Clone, Copy)]
enum BasisElement {
    One,
    Kernel(Complex64),
    Z,
}

impl BasisElement {
    /// `<self, other>`.
    fn inner(&self, other: &Self) -> Complex64 {
        use BasisElement::*;
        match (*self, *other) {
            (One, One) | (Z, Z) => ONE,
            (One, Z) | (Z, One) => ZERO,
            (f, Kernel(b)) => f.eval(b),
            (Kernel(a), g) => g.inner(&Kernel(a)).conj(),
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::One => ONE,
            Self::Z => z,
            Self::Kernel(a) => ONE / (ONE - a.conj() * z),
        }
    }

    /// `<f, self>` for a Taylor vector `f`.
    fn coefficient_of(&self, f: &TaylorVector) -> Complex64 {
        match *self {
            Self::One => f.coefficient(0),
            Self::Z => f.coefficient(1),
            Self::Kernel(a) => f.eval(a),
        }
    }

    fn vector(&self, degree: usize) -> TaylorVector {
        match *self {
            Self::One => TaylorVector::constant(ONE),
            Self::Z => TaylorVector::monomial(1),
            Self::Kernel(a) => {
                TaylorVector::kernel(DiscPoint::new(a).expect("node in disc"), degree)
            }
        }
    }
}

/// Orthogonal projection onto the span of `basis`, via a Cholesky solve of
/// the Gram system.
pub fn model_space_project(f: &TaylorVector, basis: &KernelSpanBasis) -> Result<TaylorVector> {
    model_space_project_with(f, basis, DEFAULT_KAPPA_MAX)
}

pub fn model_space_project_with(
    f: &TaylorVector,
    basis: &KernelSpanBasis,
    kappa_max: f64,
) -> Result<TaylorVector> {
    if basis.is_empty() {
        return Ok(TaylorVector::default());
    }
    let g = basis.gram();
    let ev = g.clone().symmetric_eigenvalues();
    let (lo, hi) = ev
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= kappa_max) {
        return Err(HolError::IllConditionedBasis {
            condition,
            limit: kappa_max,
        });
    }
    let chol = g.cholesky().ok_or(HolError::IllConditionedBasis {
        condition,
        limit: kappa_max,
    })?;
    let el = basis.elements();
    let rhs = DVector::from_iterator(el.len(), el.iter().map(|e| e.coefficient_of(f)));
    let c = chol.solve(&rhs);
    let deg = basis.degree().max(f.len().saturating_sub(1));
    Ok(el
        .iter()
        .zip(c.iter())
        .fold(TaylorVector::default(), |acc, (e, &ci)| acc.add(&e.vector(deg).scale(ci))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum OrbitLimit {
    UnimodularConstant { lambda: Complex64 },
    RotatedInvolution { lambda: Complex64, w: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitLimitFit {
    pub n: i64,
    pub limit: OrbitLimit,
    /// Sup of `|g_n - fit|` over the test disc.
    pub sup_residual: f64,
    /// `||g_n - fit||_2`, from `2 - 2 Re <g_n, fit>`.
    pub h2_distance: f64,
    pub fit_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitLimitOptions {
    pub radius: f64,
    pub n_points: usize,
    pub eps_const: f64,
    pub eps_fit: f64,
}

impl Default for OrbitLimitOptions {
    fn default() -> Self {
        Self {
            radius: 0.7,
            n_points: 200,
            eps_const: DEFAULT_EPS_CONST,
            eps_fit: DEFAULT_EPS_FIT,
        }
    }
}

/// Polar test grid: 8 rings of `n/8` points each, radii up to `radius`.
fn test_disc(radius: f64, n_points: usize) -> Vec<Complex64> {
    let rings = 8;
    let per = n_points.div_ceil(rings).max(1);
    let mut out = Vec::with_capacity(rings * per);
    for r in 1..=rings {
        let rad = radius * r as f64 / rings as f64;
        for a in 0..per {
            let th = 2.0 * PI * (a as f64 + 0.5 * (r % 2) as f64) / per as f64;
            out.push(Complex64::from_polar(rad, th));
        }
    }
    out.truncate(n_points);
    out
}

/// Fits each `g_n = B ∘ phi^(n)` by a unimodular constant or `lambda phi_w`.
pub fn orbit_limit_points(
    b: &BlaschkeProduct,
    form: &NonEllipticNormalForm,
    n_list: &[i64],
    options: &OrbitLimitOptions,
) -> Vec<OrbitLimitFit> {
    let grid = test_disc(options.radius, options.n_points);
    n_list
        .iter()
        .map(|&n| fit_one(b, form, n, &grid, options))
        .collect()
}

fn fit_one(
    b: &BlaschkeProduct,
    form: &NonEllipticNormalForm,
    n: i64,
    grid: &[Complex64],
    options: &OrbitLimitOptions,
) -> OrbitLimitFit {
    let u0 = form.iterate_chart(n, &HalfPlanePoint::ORIGIN);
    let g0 = b.eval_chart(&u0, b.len());
    let log_g0 = b.log_abs_chart(&u0, b.len());
    let g = |z: Complex64| b.eval_composed(form, n, z);
    // roots of g_n are the pullbacks phi^(-n)(z_j); take the one nearest 0
    let nearest = (0..b.len())
        .map(|k| (k, form.iterate_chart(-n, &b.zero(k).point)))
        .max_by(|a, c| a.1.log_one_minus_abs_sq().total_cmp(&c.1.log_one_minus_abs_sq()));
    let constant = log_g0 > (-options.eps_const).ln_1p() || nearest.is_none();
    if constant {
        let lambda = if g0.norm() > 0.0 { g0 / g0.norm() } else { ONE };
        let sup_residual = grid.iter().map(|&z| (g(z) - lambda).norm()).fold(0.0, f64::max);
        let h2_distance = (-2.0 * log_g0.exp_m1()).max(0.0).sqrt();
        return OrbitLimitFit {
            n,
            limit: OrbitLimit::UnimodularConstant { lambda },
            sup_residual,
            h2_distance,
            fit_ok: h2_distance <= options.eps_fit,
        };
    }
    let (k_star, root) = nearest.expect("nonempty");
    let w = root.to_disc();
    // h = g/phi_w is analytic; <g, lambda phi_w> = conj(lambda) h(0)
    let log_h0: f64 = (0..b.len())
        .map(|k| {
            let m = b.zero(k).multiplicity as f64 - (k == k_star) as u32 as f64;
            m * u0.log_rho(&b.zero(k).point)
        })
        .sum();
    let h0_phase = if w.norm() > 1e-8 {
        (g0 / w).arg()
    } else {
        // h(0) = g'(0)/phi_w'(0) with phi_w'(0) = |w|^2 - 1 < 0
        (-cauchy_derivative(&g, 0.5, 64)).arg()
    };
    let lambda = Complex64::from_polar(1.0, h0_phase);
    let phi_w = |z: Complex64| (w - z) / (ONE - w.conj() * z);
    let sup_residual = grid
        .iter()
        .map(|&z| (g(z) - lambda * phi_w(z)).norm())
        .fold(0.0, f64::max);
    let h2_distance = (-2.0 * log_h0.exp_m1()).max(0.0).sqrt();
    OrbitLimitFit {
        n,
        limit: OrbitLimit::RotatedInvolution { lambda, w },
        sup_residual,
        h2_distance,
        fit_ok: h2_distance <= options.eps_fit,
    }
}

/// `g'(0)` from the Cauchy integral on the circle of radius `r`.
fn cauchy_derivative(g: &impl Fn(Complex64) -> Complex64, r: f64, n: usize) -> Complex64 {
    (0..n)
        .map(|k| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            g(e * r) * e.conj()
        })
        .sum::<Complex64>()
        / (n as f64 * r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackCluster {
    pub center: Complex64,
    pub hits: usize,
    /// Number of distinct zeros of `B` whose pullbacks land in the cluster.
    pub distinct_zeros: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateEOptions {
    pub eps_e: f64,
    pub subdisc: f64,
    pub min_distinct: usize,
}

impl Default for EstimateEOptions {
    fn default() -> Self {
        Self {
            eps_e: DEFAULT_EPS_E,
            subdisc: DEFAULT_SUBDISC,
            min_distinct: 2,
        }
    }
}

/// Clusters of pullbacks `phi^(-m)(z_j)`, `m` in `window`, that stay in the
/// subdisc. A cluster counts as a point of `E` once pullbacks of at least
/// `min_distinct` different zeros accumulate there.
#[allow(non_snake_case)]
pub fn estimate_E(
    b: &BlaschkeProduct,
    form: &NonEllipticNormalForm,
    window: RangeInclusive<i64>,
    options: &EstimateEOptions,
) -> Vec<PullbackCluster> {
    let inside = |p: &HalfPlanePoint| p.abs_disc() <= options.subdisc;
    let mut hits: Vec<(i64, usize, HalfPlanePoint)> = Vec::new();
    for j in 0..b.len() {
        let z = &b.zero(j).point;
        let Ok((q, r)) = form.reduce_chart(z) else {
            continue;
        };
        // |phi^(d)(r)| grows monotonically in |d| away from d in {-1, 0}
        for dir in [1i64, -1] {
            let mut d: i64 = if dir == 1 { 0 } else { -1 };
            let mut outside_run = 0;
            while outside_run < 2 && d.abs() < 100_000 {
                let p = form.iterate_chart(d, &r);
                let m = q - d;
                if inside(&p) {
                    outside_run = 0;
                    if window.contains(&m) {
                        hits.push((m, j, p));
                    }
                } else {
                    outside_run += 1;
                }
                d += dir;
            }
        }
    }
    hits.sort_by_key(|h| (h.0, h.1));
    let mut clusters: Vec<(HalfPlanePoint, usize, Vec<usize>)> = Vec::new();
    for (_, j, p) in hits {
        match clusters.iter_mut().find(|c| c.0.rho(&p) < options.eps_e) {
            Some(c) => {
                c.1 += 1;
                if !c.2.contains(&j) {
                    c.2.push(j);
                }
            }
            None => clusters.push((p, 1, vec![j])),
        }
    }
    clusters
        .into_iter()
        .filter(|c| c.2.len() >= options.min_distinct)
        .map(|(p, hits, zs)| PullbackCluster {
            center: p.to_disc(),
            hits,
            distinct_zeros: zs.len(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum SpanCase {
    WholeSpace,
    ConstantsOnly,
    ModelSpace { b: BlaschkeProduct },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub gamma: Complex64,
    pub gamma_modulus_error: f64,
    /// Sup of `|b(phi(z)) - gamma b(z)|` over the subgrid.
    pub max_residual: f64,
    pub grid_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanClassification {
    #[serde(flatten)]
    pub case: SpanCase,
    pub check: Option<EigenCheck>,
    /// Warning: `E` is not closed under `phi` and `phi^{-1}` inside the subdisc.
    pub not_phi_invariant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanOptions {
    /// Closure of `E` is checked for images landing in `|z| <= subdisc`.
    pub subdisc: f64,
    /// Radius of the verification subgrid.
    pub grid_radius: f64,
    pub grid_points: usize,
}

impl Default for SpanOptions {
    fn default() -> Self {
        Self {
            subdisc: DEFAULT_SUBDISC,
            grid_radius: 0.5,
            grid_points: 200,
        }
    }
}

/// Which closed span `[{1} ∪ {K_w : w in E} ∪ {z : 0 in E}]` is: all of
/// `H^2` for a non-Blaschke `E`, the constants for empty `E`, and the model
/// space `(z b H^2)^⊥` with `Z(b) = E` otherwise.
pub fn span_classification(
    e: &[DiscPoint],
    blaschke_intent: bool,
    form: &NonEllipticNormalForm,
    options: &SpanOptions,
) -> Result<SpanClassification> {
    if e.is_empty() {
        return Ok(SpanClassification {
            case: SpanCase::ConstantsOnly,
            check: None,
            not_phi_invariant: false,
        });
    }
    if !blaschke_intent {
        return Ok(SpanClassification {
            case: SpanCase::WholeSpace,
            check: None,
            not_phi_invariant: false,
        });
    }
    let charts: Vec<HalfPlanePoint> = e.iter().map(|w| w.chart()).collect();
    let closed = charts.iter().all(|w| {
        [1, -1].iter().all(|&s| {
            let img = form.iterate_chart(s, w);
            img.abs_disc() > options.subdisc || charts.iter().any(|c| c.rho(&img) < 1e-9)
        })
    });
    if !closed {
        log::warn!("E is not phi-invariant within the subdisc; skipping the eigen check");
    }
    let b = BlaschkeProduct::new(ZeroSequence::new(
        charts.iter().map(|c| Zero::simple(*c)).collect(),
    ));
    let check = closed.then(|| eigen_check(&b, form, options));
    Ok(SpanClassification {
        case: SpanCase::ModelSpace { b },
        check,
        not_phi_invariant: !closed,
    })
}

/// `gamma = median` of `b(phi(z))/b(z)` over grid points away from the zeros.
fn eigen_check(b: &BlaschkeProduct, form: &NonEllipticNormalForm, options: &SpanOptions) -> EigenCheck {
    let grid = test_disc(options.grid_radius, options.grid_points);
    let pairs: Vec<(Complex64, Complex64)> = grid
        .iter()
        .filter_map(|&z| {
            let u = HalfPlanePoint::from_disc(z);
            let near = (0..b.len()).any(|k| u.rho(&b.zero(k).point) < 0.1);
            let near_img = (0..b.len())
                .any(|k| form.iterate_chart(1, &u).rho(&b.zero(k).point) < 0.1);
            (!near && !near_img).then(|| (b.eval_chart(&u, b.len()), b.eval_composed(form, 1, z)))
        })
        .collect();
    if pairs.is_empty() {
        return EigenCheck {
            gamma: Complex64::new(f64::NAN, f64::NAN),
            gamma_modulus_error: f64::NAN,
            max_residual: f64::NAN,
            grid_points: 0,
        };
    }
    let ratios: Vec<Complex64> = pairs.iter().map(|(bz, bp)| bp / bz).collect();
    let gamma = complex_median(&ratios);
    let max_residual = pairs
        .iter()
        .map(|(bz, bp)| (bp - gamma * bz).norm())
        .fold(0.0, f64::max);
    EigenCheck {
        gamma,
        gamma_modulus_error: (gamma.norm() - 1.0).abs(),
        max_residual,
        grid_points: pairs.len(),
    }
}

/// Componentwise median.
pub fn complex_median(v: &[Complex64]) -> Complex64 {
    let med = |mut x: Vec<f64>| {
        x.sort_by(f64::total_cmp);
        let n = x.len();
        if n % 2 == 1 {
            x[n / 2]
        } else {
            0.5 * (x[n / 2 - 1] + x[n / 2])
        }
    };
    Complex64::new(
        med(v.iter().map(|z| z.re).collect()),
        med(v.iter().map(|z| z.im).collect()),
    )
}
