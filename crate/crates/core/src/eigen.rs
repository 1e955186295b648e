//! Eigenfunctions of `C_phi`: outer eigenfunctions built from a boundary
//! modulus on `J`, Blaschke eigenvectors from orbit-closed zero sets,
//! singular inner eigenvectors from atomic measures, and their products.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, Zero, ZeroSequence};
use crate::chart::HalfPlanePoint;
use crate::error::{invalid, HolError, Result};
use crate::geometry::{BoundaryPoint, DiscPoint, MoebiusAutomorphism, NonEllipticNormalForm};
use crate::hardy::complex_median;
use crate::quadrature::GaussLegendre;

pub const DEFAULT_N_TILE: u32 = 24;
pub const DEFAULT_NODES: usize = 64;
pub const DEFAULT_EPS_QUAD: f64 = 1e-8;
pub const DEFAULT_R_MAX: f64 = 0.95;
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Cap on `int_J |log f0|`.
pub const LOG_L1_CAP: f64 = 1e300;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Positive samples of `f0` on each arc of `J`, uniform in the arc parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryModulus {
    pub arcs: Vec<Vec<f64>>,
}

impl BoundaryModulus {
    pub fn new(arcs: Vec<Vec<f64>>) -> Result<Self> {
        if arcs.is_empty() || arcs.iter().any(|a| a.len() < 2) {
            return invalid("each arc needs at least two samples");
        }
        if let Some(v) = arcs.iter().flatten().find(|v| !(**v > 0.0 && v.is_finite())) {
            return invalid(format!("boundary modulus sample {v} is not positive"));
        }
        Ok(Self { arcs })
    }

    /// Samples `f(arc, u)` at `n` points per arc of `J`.
    pub fn from_fn(
        form: &NonEllipticNormalForm,
        n: usize,
        f: impl Fn(usize, f64) -> f64,
    ) -> Result<Self> {
        let n = n.max(2);
        let arcs = (0..form.tile_j().arcs.len())
            .map(|a| (0..n).map(|i| f(a, i as f64 / (n - 1) as f64)).collect())
            .collect();
        Self::new(arcs)
    }

    pub fn constant(form: &NonEllipticNormalForm, c: f64) -> Result<Self> {
        Self::from_fn(form, 2, |_, _| c)
    }

    /// Piecewise-linear interpolation in the arc parameter.
    pub fn value(&self, arc: usize, u: f64) -> f64 {
        let s = &self.arcs[arc.min(self.arcs.len() - 1)];
        let x = u.clamp(0.0, 1.0) * (s.len() - 1) as f64;
        let i = (x.floor() as usize).min(s.len() - 2);
        let t = x - i as f64;
        s[i] * (1.0 - t) + s[i + 1] * t
    }

    pub fn check_form(&self, form: &NonEllipticNormalForm) -> Result<()> {
        let want = form.tile_j().arcs.len();
        if self.arcs.len() != want {
            return invalid(format!("modulus has {} arcs, J has {want}", self.arcs.len()));
        }
        Ok(())
    }

    /// `int_J |log f0| |dz|`, which must be finite.
    pub fn log_l1(&self, form: &NonEllipticNormalForm) -> f64 {
        modulus_nodes(form, self, DEFAULT_NODES)
            .iter()
            .map(|&(_, w, a, u)| w * self.value(a, u).ln().abs())
            .sum()
    }

    pub fn sup_log(&self) -> f64 {
        self.arcs.iter().flatten().map(|v| v.ln().abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LambdaRange {
    Open { lo: f64, hi: f64 },
    Singleton { value: f64 },
}

impl LambdaRange {
    pub fn contains(&self, lambda: f64) -> bool {
        match *self {
            Self::Open { lo, hi } => lo < lambda && lambda < hi,
            Self::Singleton { value } => (lambda - value).abs() <= 1e-12,
        }
    }
}

pub fn admissible_lambda_range(p: f64, form: &NonEllipticNormalForm) -> Result<LambdaRange> {
    if !(p >= 1.0) {
        return invalid(format!("p = {p} must be at least 1"));
    }
    Ok(match *form {
        NonEllipticNormalForm::Hyperbolic { alpha } if p.is_finite() => LambdaRange::Open {
            lo: alpha.powf(-1.0 / p),
            hi: alpha.powf(1.0 / p),
        },
        _ => LambdaRange::Singleton { value: 1.0 },
    })
}

/// Pullback of a boundary point into `J`: `(n, arc, u)` with `xi = phi^(n)(J_arc(u))`.
fn pull_back_to_j(form: &NonEllipticNormalForm, xi: BoundaryPoint) -> Result<(i64, usize, f64)> {
    let n = form.quotient_index_boundary(xi)?;
    let zeta = form.iterate_boundary(-n, xi);
    let j = form.tile_j();
    let a = j.arc_of(zeta);
    Ok((n, a, j.arcs[a].param_of(zeta)))
}

/// `f(xi) = lambda^n f0(phi^(-n)(xi))` with `n` the tile index of `xi`.
pub fn tile_boundary_modulus(
    f0: &BoundaryModulus,
    lambda: f64,
    form: &NonEllipticNormalForm,
    xi: BoundaryPoint,
) -> Result<f64> {
    let (n, a, u) = pull_back_to_j(form, xi)?;
    Ok(lambda.powf(n as f64) * f0.value(a, u))
}

/// Tile index of `xi` together with `log f(xi)`.
pub fn tile_log_modulus(
    f0: &BoundaryModulus,
    lambda: f64,
    form: &NonEllipticNormalForm,
    xi: BoundaryPoint,
) -> Result<(i64, f64)> {
    let (n, a, u) = pull_back_to_j(form, xi)?;
    Ok((n, n as f64 * lambda.ln() + f0.value(a, u).ln()))
}

/// Gauss-Legendre nodes on `J`: `(point, weight in d theta, arc, u)`.
fn j_nodes(form: &NonEllipticNormalForm, nodes: usize) -> Vec<(BoundaryPoint, f64, usize, f64)> {
    let gl = GaussLegendre::new(nodes).unit_interval();
    let j = form.tile_j();
    let mut out = Vec::with_capacity(nodes * j.arcs.len());
    for (a, arc) in j.arcs.iter().enumerate() {
        for &(u, w) in &gl {
            out.push((arc.point(u), w * arc.length.abs(), a, u));
        }
    }
    out
}

/// Nodes refined to the sample segments of `f0`, so the rule sees a smooth
/// integrand on each piece of the linear interpolant.
fn modulus_nodes(
    form: &NonEllipticNormalForm,
    f0: &BoundaryModulus,
    min_nodes: usize,
) -> Vec<(BoundaryPoint, f64, usize, f64)> {
    let j = form.tile_j();
    let mut out = Vec::new();
    for (a, arc) in j.arcs.iter().enumerate() {
        let segs = f0.arcs[a.min(f0.arcs.len() - 1)].len() - 1;
        let q = min_nodes.div_ceil(segs).max(4);
        let gl = GaussLegendre::new(q).unit_interval();
        let h = 1.0 / segs as f64;
        for s in 0..segs {
            for &(v, w) in &gl {
                let u = (s as f64 + v) * h;
                out.push((arc.point(u), w * h * arc.length.abs(), a, u));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LpVerdict {
    Converges { tail_bound: f64 },
    Diverges,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpConvergence {
    #[serde(flatten)]
    pub verdict: LpVerdict,
    pub n: u32,
    /// `S_k = sum_{|m| <= k} int_{phi^(m)(J)} f^p`, `k = 0..=n` (for `p = inf`, the running sup of `f`).
    pub partial_sums: Vec<f64>,
    /// `sum_{|m| <= k} int_{phi^(m)(J)} |log f|`.
    pub log_partial_sums: Vec<f64>,
}

/// Tile sums of `int f^p` by pullback to `J`, with a verdict from the
/// geometric (hyperbolic) or quadratic (parabolic) majorant.
pub fn check_lp_convergence(
    f0: &BoundaryModulus,
    lambda: f64,
    form: &NonEllipticNormalForm,
    p: f64,
    n_max: u32,
) -> Result<LpConvergence> {
    if n_max < 1 {
        return invalid("N must be at least 1");
    }
    if !(p >= 1.0) {
        return invalid(format!("p = {p} must be at least 1"));
    }
    if !(lambda > 0.0) {
        return invalid(format!("lambda = {lambda} must be positive"));
    }
    f0.check_form(form)?;
    let nodes = modulus_nodes(form, f0, DEFAULT_NODES);
    let vals: Vec<f64> = nodes.iter().map(|&(_, _, a, u)| f0.value(a, u)).collect();
    let ll = lambda.ln();
    let tile = |n: i64| -> (f64, f64) {
        let mut ip = 0.0;
        let mut il = 0.0;
        for (k, &(w, wt, _, _)) in nodes.iter().enumerate() {
            let d = form.derivative_modulus(n, w.value());
            if p.is_finite() {
                ip += wt * d * (p * (n as f64 * ll + vals[k].ln())).exp();
            }
            il += wt * d * (n as f64 * ll + vals[k].ln()).abs();
        }
        (ip, il)
    };
    let sup_f0 = vals.iter().copied().fold(0.0, f64::max);
    let mut partial_sums = Vec::with_capacity(n_max as usize + 1);
    let mut log_partial_sums = Vec::with_capacity(n_max as usize + 1);
    let (mut s, mut sl) = tile(0);
    let mut sup = sup_f0;
    partial_sums.push(if p.is_finite() { s } else { sup });
    log_partial_sums.push(sl);
    for k in 1..=n_max as i64 {
        let (a, al) = tile(k);
        let (b, bl) = tile(-k);
        s += a + b;
        sl += al + bl;
        sup = sup.max(lambda.powf(k as f64) * sup_f0).max(lambda.powf(-k as f64) * sup_f0);
        partial_sums.push(if p.is_finite() { s } else { sup });
        log_partial_sums.push(sl);
    }
    let int_j: f64 = nodes
        .iter()
        .zip(&vals)
        .map(|(&(_, wt, _, _), v)| wt * v.powf(if p.is_finite() { p } else { 1.0 }))
        .sum();
    let verdict = if p.is_infinite() {
        if (lambda - 1.0).abs() <= 1e-12 {
            LpVerdict::Converges { tail_bound: 0.0 }
        } else {
            LpVerdict::Diverges
        }
    } else {
        match *form {
            NonEllipticNormalForm::Hyperbolic { alpha } => {
                let qp = lambda.powf(p) / alpha;
                let qm = lambda.powf(-p) / alpha;
                if qp < 1.0 && qm < 1.0 {
                    let e = n_max as i32 + 1;
                    let tail = (alpha + 1.0).powi(2)
                        * int_j
                        * (qp.powi(e) / (1.0 - qp) + qm.powi(e) / (1.0 - qm));
                    LpVerdict::Converges { tail_bound: tail }
                } else {
                    LpVerdict::Diverges
                }
            }
            NonEllipticNormalForm::Parabolic { t } => {
                if (lambda - 1.0).abs() <= 1e-12 {
                    let tail = crate::geometry::parabolic_c(t) * int_j * 2.0
                        / (t * t * n_max as f64);
                    LpVerdict::Converges { tail_bound: tail }
                } else {
                    LpVerdict::Diverges
                }
            }
        }
    };
    Ok(LpConvergence {
        verdict,
        n: n_max,
        partial_sums,
        log_partial_sums,
    })
}

/// Herglotz kernel `(xi + z)/(xi - z)`.
fn herglotz(xi: Complex64, z: Complex64) -> Complex64 {
    (xi + z) / (xi - z)
}

/// `d/dxi` of the Herglotz kernel.
fn herglotz_dxi(xi: Complex64, z: Complex64) -> Complex64 {
    let d = xi - z;
    -2.0 * z / (d * d)
}

/// Contributions of the tiles beyond the explicit window, near one fixed point.
#[derive(Debug, Clone)]
struct FarMoments {
    fixed: Complex64,
    /// `sum coef`, `sum coef (xi - xi*)` and `sum |coef| |xi - xi*|^2`.
    m0: f64,
    m1: Complex64,
    r2: f64,
    max_offset: f64,
    /// Bounds scaled by `sup |H|` and by the Lipschitz constant of `H`.
    bound_kernel: f64,
    bound_first: f64,
}

#[derive(Debug, Clone)]
struct TileQuadrature {
    /// `(xi, w |phi^(n)'| log f / 2 pi)` over the explicit tiles.
    entries: Vec<(Complex64, f64)>,
    far: Vec<FarMoments>,
}

impl TileQuadrature {
    fn build(f: &OuterEigenfunction) -> Self {
        let form = &f.form;
        let nodes = modulus_nodes(form, &f.f0, f.nodes);
        let ll = f.lambda.ln();
        let logs: Vec<f64> = nodes.iter().map(|&(_, _, a, u)| f.f0.value(a, u).ln()).collect();
        let coarse = j_nodes(form, f.nodes);
        let coarse_logs: Vec<f64> =
            coarse.iter().map(|&(_, _, a, u)| f.f0.value(a, u).ln()).collect();
        let nt = f.n_tile as i64;
        let mut entries = Vec::with_capacity(nodes.len() * (2 * nt as usize + 1));
        for n in -nt..=nt {
            for (k, &(w, wt, _, _)) in nodes.iter().enumerate() {
                let xi = form.iterate_boundary(n, w).value();
                let d = form.derivative_modulus(n, w.value());
                entries.push((xi, wt * d * (n as f64 * ll + logs[k]) / (2.0 * PI)));
            }
        }
        let far = [1i64, -1]
            .iter()
            .map(|&side| far_moments(form, &coarse, &coarse_logs, ll, nt, side))
            .collect();
        Self { entries, far }
    }

    fn exponent(&self, z: Complex64) -> Complex64 {
        let mut e: Complex64 = self.entries.iter().map(|&(xi, c)| herglotz(xi, z) * c).sum();
        for f in &self.far {
            e += herglotz(f.fixed, z) * f.m0 + herglotz_dxi(f.fixed, z) * f.m1;
        }
        e
    }

    fn tail(&self, r: f64) -> f64 {
        self.far
            .iter()
            .map(|f| {
                let gap = (1.0 - r - f.max_offset).max(1e-300);
                2.0 * r / gap.powi(3) * f.r2
                    + (1.0 + r) / (1.0 - r) * f.bound_kernel
                    + 2.0 / (1.0 - r).powi(2) * f.bound_first
            })
            .sum()
    }
}

const PARABOLIC_FAR_TILES: i64 = 16384;

fn far_moments(
    form: &NonEllipticNormalForm,
    nodes: &[(BoundaryPoint, f64, usize, f64)],
    logs: &[f64],
    ll: f64,
    nt: i64,
    side: i64,
) -> FarMoments {
    let fixed = match form {
        NonEllipticNormalForm::Hyperbolic { .. } if side < 0 => Complex64::new(-1.0, 0.0),
        _ => ONE,
    };
    let extra = match *form {
        NonEllipticNormalForm::Hyperbolic { alpha } => (45.0 / alpha.log10()).ceil() as i64 + 1,
        NonEllipticNormalForm::Parabolic { .. } => PARABOLIC_FAR_TILES,
    };
    let mut m0 = 0.0;
    let mut m1 = Complex64::new(0.0, 0.0);
    let mut r2 = 0.0;
    let mut max_offset = 0.0f64;
    for k in 1..=extra {
        let n = side * (nt + k);
        for (i, &(w, wt, _, _)) in nodes.iter().enumerate() {
            let d = form.derivative_modulus(n, w.value());
            let c = wt * d * (n as f64 * ll + logs[i]) / (2.0 * PI);
            let off = form.iterate_boundary(n, w).value() - fixed;
            m0 += c;
            m1 += off * c;
            r2 += c.abs() * off.norm_sqr();
            max_offset = max_offset.max(off.norm());
        }
    }
    let last = nt + extra;
    let sup_log = logs.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let j_len: f64 = nodes.iter().map(|n| n.1).sum();
    let (bound_kernel, bound_first) = match *form {
        NonEllipticNormalForm::Hyperbolic { alpha } => {
            // tile majorant (alpha+1)^2 alpha^{-|n|} on the remaining tiles
            let q = 1.0 / alpha;
            let k0 = (last + 1) as f64;
            let s0 = q.powf(k0) / (1.0 - q);
            let s1 = k0 * q.powf(k0) / (1.0 - q).powi(2);
            let b = (alpha + 1.0).powi(2) * j_len / (2.0 * PI) * (ll.abs() * s1 + sup_log * s0);
            (b, 0.0)
        }
        NonEllipticNormalForm::Parabolic { t } => {
            // lambda = 1: remaining tiles by the midpoint integral of
            // (1 + x^2)/(1 + (x + n t)^2) with the kernel frozen at 1
            let a = last as f64 + 0.5;
            let mut bk = 0.0;
            let mut bf = 0.0;
            for (i, &(w, wt, _, _)) in nodes.iter().enumerate() {
                let x = w.chart().boundary_coordinate();
                let u = if side > 0 { x + a * t } else { a * t - x };
                let g = (0.5 * PI - u.atan()) / t;
                let s = wt * (1.0 + x * x) / (2.0 * PI);
                m0 += s * logs[i] * g;
                bk += s * logs[i].abs() * t / (12.0 * u.powi(3));
                bf += s * logs[i].abs() / (t * (u - 0.5 * t).powi(2));
            }
            (bk, bf)
        }
    };
    FarMoments {
        fixed,
        m0,
        m1,
        r2,
        max_offset,
        bound_kernel,
        bound_first,
    }
}

mod exponent {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            Repr::Text("inf".into()).serialize(s)
        } else {
            Repr::Num(*p).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(f64::INFINITY)
            }
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad exponent {t}"))),
        }
    }
}

fn default_nodes() -> usize {
    DEFAULT_NODES
}
fn default_eps_quad() -> f64 {
    DEFAULT_EPS_QUAD
}
fn default_r_max() -> f64 {
    DEFAULT_R_MAX
}

/// `F(z) = exp(int (xi + z)/(xi - z) log f dtheta/2pi)` with `f` the tiled
/// modulus; `F ∘ phi = gamma lambda F`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterEigenfunction {
    pub form: NonEllipticNormalForm,
    pub f0: BoundaryModulus,
    pub lambda: f64,
    #[serde(with = "exponent")]
    pub p: f64,
    pub n_tile: u32,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_eps_quad")]
    pub eps_quad: f64,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(skip)]
    quad: OnceLock<TileQuadrature>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterValue {
    pub value: Complex64,
    /// The exponent `log F(z)`.
    pub log_value: Complex64,
    pub tail_bound: f64,
}

impl OuterEigenfunction {
    pub fn new(
        form: NonEllipticNormalForm,
        f0: BoundaryModulus,
        lambda: f64,
        p: f64,
        n_tile: u32,
    ) -> Result<Self> {
        let f = Self {
            form,
            f0,
            lambda,
            p,
            n_tile,
            nodes: DEFAULT_NODES,
            eps_quad: DEFAULT_EPS_QUAD,
            r_max: DEFAULT_R_MAX,
            quad: OnceLock::new(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.f0.check_form(&self.form)?;
        let l1 = self.f0.log_l1(&self.form);
        if !(l1 < LOG_L1_CAP) {
            return invalid("log f0 is not integrable on J");
        }
        if !admissible_lambda_range(self.p, &self.form)?.contains(self.lambda) {
            return Err(HolError::InadmissibleLambda {
                lambda: self.lambda,
                p: self.p,
            });
        }
        if self.nodes < 2 {
            return invalid("need at least two quadrature nodes per arc");
        }
        Ok(())
    }

    fn quadrature(&self) -> &TileQuadrature {
        self.quad.get_or_init(|| TileQuadrature::build(self))
    }

    /// Certified bound on the neglected part of the exponent at radius `r`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        self.quadrature().tail(r)
    }
}

pub fn outer_eval(f: &OuterEigenfunction, z: DiscPoint) -> Result<OuterValue> {
    f.validate()?;
    let z = z.value();
    let r = z.norm();
    if r > f.r_max {
        return invalid(format!("|z| = {r} exceeds r_max = {}", f.r_max));
    }
    let q = f.quadrature();
    let tail_bound = q.tail(r);
    if tail_bound > f.eps_quad {
        return Err(HolError::QuadratureTailTooLarge {
            tail: tail_bound,
            tolerance: f.eps_quad,
        });
    }
    let log_value = q.exponent(z);
    Ok(OuterValue {
        value: log_value.exp(),
        log_value,
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub gamma: Complex64,
    pub modulus_error: f64,
}

/// `gamma = F(phi(0)) / (lambda F(0))`.
pub fn eigenvalue_gamma(f: &OuterEigenfunction) -> Result<GammaEstimate> {
    let at0 = outer_eval(f, DiscPoint::new(Complex64::new(0.0, 0.0))?)?;
    if at0.log_value.re < (1e-300f64).ln() {
        return Err(HolError::NumericalUnderflow("|F(0)| below 1e-300".into()));
    }
    let p0 = f.form.iterate_eval(1, Complex64::new(0.0, 0.0));
    let at1 = outer_eval(f, DiscPoint::new(p0)?)?;
    let gamma = (at1.log_value - at0.log_value - f.lambda.ln()).exp();
    Ok(GammaEstimate {
        gamma,
        modulus_error: (gamma.norm() - 1.0).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeEigenvector {
    pub product: BlaschkeProduct,
    pub gamma: Complex64,
    pub gamma_modulus_error: f64,
    /// `|gamma_N - gamma_{N/2}|`.
    pub gamma_drift: f64,
    pub reference_point: Complex64,
    pub n_orbit: u32,
}

fn orbit_zeros(form: &NonEllipticNormalForm, seeds: &[HalfPlanePoint], n_orbit: u32) -> Vec<Zero> {
    let mut zeros = Vec::with_capacity(seeds.len() * (2 * n_orbit as usize + 1));
    for k in 0..=n_orbit as i64 {
        let ns = [k, -k];
        for &n in &ns[..if k == 0 { 1 } else { 2 }] {
            zeros.extend(seeds.iter().map(|s| Zero::simple(form.iterate_chart(n, s))));
        }
    }
    zeros
}

/// Product over `{phi^(n)(z_k) : |n| <= N_orbit}` for seeds `z_k` in the
/// fundamental domain, with `gamma = B(phi(z0))/B(z0)`.
pub fn blaschke_eigenvector(
    form: &NonEllipticNormalForm,
    seed: &[DiscPoint],
    n_orbit: u32,
) -> Result<BlaschkeEigenvector> {
    let charts: Vec<HalfPlanePoint> = seed.iter().map(|s| s.chart()).collect();
    for (index, c) in charts.iter().enumerate() {
        let quotient = form.quotient_index_chart(c)?;
        if quotient != 0 {
            return Err(HolError::SeedOutsideFundamentalDomain { index, quotient });
        }
    }
    let product = BlaschkeProduct::new(ZeroSequence::new(orbit_zeros(form, &charts, n_orbit)));
    let reference_point = reference_point(&product)?;
    let gamma_at = |b: &BlaschkeProduct| {
        let u = HalfPlanePoint::from_disc(reference_point);
        let num = b.eval_chart(&form.iterate_chart(1, &u), b.len());
        num / b.eval_chart(&u, b.len())
    };
    let gamma = gamma_at(&product);
    let half = BlaschkeProduct::new(ZeroSequence::new(orbit_zeros(form, &charts, n_orbit / 2)));
    let gamma_drift = (gamma - gamma_at(&half)).norm();
    Ok(BlaschkeEigenvector {
        gamma_modulus_error: (gamma.norm() - 1.0).abs(),
        product,
        gamma,
        gamma_drift,
        reference_point,
        n_orbit,
    })
}

/// `0` unless a zero is within `rho < 0.1` of it, then `0.3i`.
fn reference_point(b: &BlaschkeProduct) -> Result<Complex64> {
    for z0 in [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.3)] {
        let u = HalfPlanePoint::from_disc(z0);
        if (0..b.len()).all(|k| u.rho(&b.zero(k).point) >= 0.1) {
            return Ok(z0);
        }
    }
    Err(HolError::ReferencePointNearZero)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: BoundaryPoint,
    pub mass: f64,
}

/// Finite positive combination of point masses on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct AtomicSingularMeasure {
    pub atoms: Vec<Atom>,
}

impl AtomicSingularMeasure {
    /// Atoms closer than `1e-12` in angle are merged; zero masses are dropped.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            if !(a.mass >= 0.0 && a.mass.is_finite()) {
                return invalid(format!("atom mass {} must be finite and nonnegative", a.mass));
            }
            if a.mass == 0.0 {
                continue;
            }
            match out.iter_mut().find(|b| angle_gap(a.point, b.point) <= ATOM_MERGE_TOL) {
                Some(b) => b.mass += a.mass,
                None => out.push(a),
            }
        }
        Ok(Self { atoms: out })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(point: BoundaryPoint, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { point, mass }])
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `-sum m_i (xi_i + z)/(xi_i - z)`, the logarithm of `S_mu(z)`.
    pub fn log_inner(&self, z: Complex64) -> Complex64 {
        -self
            .atoms
            .iter()
            .map(|a| herglotz(a.point.value(), z) * a.mass)
            .sum::<Complex64>()
    }
}

fn angle_gap(a: BoundaryPoint, b: BoundaryPoint) -> f64 {
    let d = (a.angle() - b.angle()).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

pub fn singular_inner_eval(mu: &AtomicSingularMeasure, z: DiscPoint) -> Complex64 {
    mu.log_inner(z.value()).exp()
}

/// Each atom `(xi, m)` goes to `(phi(xi), m |phi'(xi)|)`.
pub fn pushforward_measure(
    nu: &AtomicSingularMeasure,
    phi: &MoebiusAutomorphism,
) -> AtomicSingularMeasure {
    AtomicSingularMeasure {
        atoms: nu
            .atoms
            .iter()
            .map(|a| Atom {
                point: phi.eval_boundary(a.point),
                mass: a.mass * phi.derivative_modulus(a.point.value()),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitMeasure {
    pub measure: AtomicSingularMeasure,
    /// Bound on the mass of the omitted tiles `|n| > N_tile`.
    pub tail_bound: f64,
    pub n_tile: u32,
}

/// `sum_{|n| <= N_tile}` of the weighted pushforwards of `nu0` by `phi^(n)`.
pub fn orbit_measure(
    nu0: &AtomicSingularMeasure,
    form: &NonEllipticNormalForm,
    n_tile: u32,
) -> Result<OrbitMeasure> {
    let j = form.tile_j();
    for a in &nu0.atoms {
        if !j.contains(a.point) {
            return Err(HolError::AtomOutsideJ {
                angle: a.point.angle(),
            });
        }
    }
    let nt = n_tile as i64;
    let mut atoms = Vec::with_capacity(nu0.atoms.len() * (2 * nt as usize + 1));
    for n in -nt..=nt {
        for a in &nu0.atoms {
            atoms.push(Atom {
                point: form.iterate_boundary(n, a.point),
                mass: a.mass * form.derivative_modulus(n, a.point.value()),
            });
        }
    }
    Ok(OrbitMeasure {
        measure: AtomicSingularMeasure { atoms },
        tail_bound: nu0.total_mass() * form.derivative_tail_majorant(n_tile as u64),
        n_tile,
    })
}

/// `a delta_1` for parabolic forms; hyperbolic forms admit only `a = 0`.
pub fn fixed_point_component(form: &NonEllipticNormalForm, a: f64) -> Result<AtomicSingularMeasure> {
    if !(a >= 0.0 && a.is_finite()) {
        return invalid(format!("mass {a} must be finite and nonnegative"));
    }
    match form {
        NonEllipticNormalForm::Hyperbolic { .. } if a > 0.0 => {
            Err(HolError::HyperbolicFixedAtomNotEigen { mass: a })
        }
        NonEllipticNormalForm::Hyperbolic { .. } => Ok(AtomicSingularMeasure::zero()),
        NonEllipticNormalForm::Parabolic { .. } => {
            AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(0.0), a)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenFactorization {
    pub form: NonEllipticNormalForm,
    pub outer: Option<OuterEigenfunction>,
    pub blaschke: Option<BlaschkeProduct>,
    pub singular: Option<AtomicSingularMeasure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub eigenvalue: Complex64,
    pub modulus_ratio: f64,
    pub expected_modulus: f64,
    pub modulus_deviation: f64,
    /// `max | |h(phi z)/h(z)| - lambda | / lambda` over the grid.
    pub max_ratio_err: f64,
    /// `max |arg(ratio / eigenvalue)|` over the grid.
    pub arg_dispersion: f64,
    pub tail_bound: f64,
    #[serde(rename = "N_tile")]
    pub n_tile: Option<u32>,
    pub points_used: usize,
}

/// Evaluates `h = F B S` on the grid and estimates the eigenvalue of
/// `h ∘ phi = mu h` as the median ratio.
pub fn combine_factors(fac: &EigenFactorization, grid: &[Complex64]) -> Result<VerificationReport> {
    if fac.outer.is_none() && fac.blaschke.is_none() && fac.singular.is_none() {
        return Err(HolError::AllFactorsAbsent);
    }
    let form = &fac.form;
    let mut ratios = Vec::with_capacity(grid.len());
    let mut tail_bound = 0.0f64;
    for &z in grid {
        let w = form.iterate_eval(1, z);
        let mut log_ratio = Complex64::new(0.0, 0.0);
        let mut log_abs_h = 0.0;
        if let Some(f) = &fac.outer {
            let a = outer_eval(f, DiscPoint::new(z)?)?;
            let b = outer_eval(f, DiscPoint::new(w)?)?;
            log_ratio += b.log_value - a.log_value;
            log_abs_h += a.log_value.re;
            tail_bound = tail_bound.max(a.tail_bound + b.tail_bound);
        }
        if let Some(bp) = &fac.blaschke {
            let u = HalfPlanePoint::from_disc(z);
            let la = bp.log_abs_chart(&u, bp.len());
            log_abs_h += la;
            let num = bp.eval_chart(&form.iterate_chart(1, &u), bp.len());
            let den = bp.eval_chart(&u, bp.len());
            if den.norm() == 0.0 {
                continue;
            }
            log_ratio += (num / den).ln();
        }
        if let Some(s) = &fac.singular {
            log_ratio += s.log_inner(w) - s.log_inner(z);
            log_abs_h += s.log_inner(z).re;
        }
        if log_abs_h > (1e-12f64).ln() {
            ratios.push(log_ratio.exp());
        }
    }
    if ratios.is_empty() {
        return invalid("no grid point with |h| > 1e-12");
    }
    let eigenvalue = complex_median(&ratios);
    let expected_modulus = fac.outer.as_ref().map_or(1.0, |f| f.lambda);
    let max_ratio_err = ratios
        .iter()
        .map(|r| (r.norm() - expected_modulus).abs() / expected_modulus)
        .fold(0.0, f64::max);
    let arg_dispersion = ratios
        .iter()
        .map(|r| (r / eigenvalue).arg().abs())
        .fold(0.0, f64::max);
    Ok(VerificationReport {
        eigenvalue,
        modulus_ratio: eigenvalue.norm(),
        expected_modulus,
        modulus_deviation: (eigenvalue.norm() - expected_modulus).abs(),
        max_ratio_err,
        arg_dispersion,
        tail_bound,
        n_tile: fac.outer.as_ref().map(|f| f.n_tile),
        points_used: ratios.len(),
    })
}

/// Polar grid of `rings x per_ring` points with radii up to `radius`.
pub fn polar_grid(radius: f64, rings: usize, per_ring: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rings * per_ring);
    for r in 1..=rings {
        let rad = radius * r as f64 / rings as f64;
        for a in 0..per_ring {
            let th = 2.0 * PI * (a as f64 + 0.5 * (r % 2) as f64) / per_ring as f64;
            out.push(Complex64::from_polar(rad, th));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hyp(a: f64) -> NonEllipticNormalForm {
        NonEllipticNormalForm::hyperbolic(a).unwrap()
    }

    fn par(t: f64) -> NonEllipticNormalForm {
        NonEllipticNormalForm::parabolic(t).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
        Complex64::from_polar(rmax * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
    }

    /// Smooth positive modulus, identical on both arcs of `J`.
    fn symmetric_f0(form: &NonEllipticNormalForm, seed: u64) -> BoundaryModulus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-0.15..0.15)).collect();
        BoundaryModulus::from_fn(form, 257, |_, u| {
            1.0 + c
                .iter()
                .enumerate()
                .map(|(k, ck)| ck * (PI * (k as f64 + 1.0) * u).cos())
                .sum::<f64>()
        })
        .unwrap()
    }

    #[test]
    fn lambda_ranges() {
        let r = admissible_lambda_range(2.0, &hyp(4.0)).unwrap();
        assert_eq!(r, LambdaRange::Open { lo: 0.5, hi: 2.0 });
        assert_eq!(
            admissible_lambda_range(3.0, &par(1.0)).unwrap(),
            LambdaRange::Singleton { value: 1.0 }
        );
        assert_eq!(
            admissible_lambda_range(f64::INFINITY, &hyp(2.0)).unwrap(),
            LambdaRange::Singleton { value: 1.0 }
        );
    }

    #[test]
    fn tiled_modulus_eigenrelation() {
        let form = hyp(2.0);
        let one = BoundaryModulus::constant(&form, 1.0).unwrap();
        let f0 = symmetric_f0(&form, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let xi = BoundaryPoint::from_angle(rng.random_range(-PI..PI));
            assert!((tile_boundary_modulus(&one, 1.0, &form, xi).unwrap() - 1.0).abs() < 1e-15);
            let f = tile_boundary_modulus(&f0, 1.3, &form, xi).unwrap();
            let g = tile_boundary_modulus(&f0, 1.3, &form, form.iterate_boundary(1, xi)).unwrap();
            assert!((g / f - 1.3).abs() < 1e-9);
        }
        let j = form.tile_j();
        let xi = j.arcs[0].point(0.3);
        assert!((tile_boundary_modulus(&f0, 1.3, &form, xi).unwrap() - f0.value(0, 0.3)).abs() < 1e-12);
        assert!(tile_boundary_modulus(&f0, 1.3, &form, BoundaryPoint::from_angle(0.0)).is_err());
    }

    #[test]
    fn lp_convergence_sharpness() {
        let form = hyp(2.0);
        let f0 = symmetric_f0(&form, 7);
        for p in [1.0, 2.0, 4.0] {
            let bound = 2f64.powf(1.0 / p);
            let c = check_lp_convergence(&f0, 0.9 * bound, &form, p, 50).unwrap();
            assert!(matches!(c.verdict, LpVerdict::Converges { .. }));
            let d = check_lp_convergence(&f0, 1.1 * bound, &form, p, 50).unwrap();
            assert_eq!(d.verdict, LpVerdict::Diverges);
            // no plateau: the tile increments grow geometrically once the tiles leave J
            let inc: Vec<f64> = d.partial_sums.windows(2).map(|w| w[1] - w[0]).collect();
            assert!(inc[10..].windows(2).all(|w| w[1] > w[0]));
            assert!(d.partial_sums[50] > 10.0 * d.partial_sums[10]);
        }
        let c = check_lp_convergence(&f0, 1.2, &form, 2.0, 60).unwrap();
        let LpVerdict::Converges { tail_bound } = c.verdict else { panic!() };
        assert!(tail_bound < 1e-6);
        let pf = par(2.0);
        let g0 = BoundaryModulus::constant(&pf, 2.0).unwrap();
        let c = check_lp_convergence(&g0, 1.0, &pf, 2.0, 40).unwrap();
        assert!(matches!(c.verdict, LpVerdict::Converges { .. }));
        assert_eq!(check_lp_convergence(&g0, 1.05, &pf, 2.0, 40).unwrap().verdict, LpVerdict::Diverges);
    }

    #[test]
    fn constant_moduli() {
        let form = hyp(2.0);
        for c in [1.0, 3.0] {
            let f0 = BoundaryModulus::constant(&form, c).unwrap();
            let f = OuterEigenfunction::new(form, f0, 1.0, 2.0, DEFAULT_N_TILE).unwrap();
            for z in [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.5)] {
                let v = outer_eval(&f, DiscPoint::new(z).unwrap()).unwrap();
                assert!((v.value - c).norm() < 1e-12, "{v:?}");
            }
        }
    }

    #[test]
    fn outer_eigenrelation_and_gamma() {
        let form = hyp(2.0);
        let f0 = symmetric_f0(&form, 11);
        let f1 = OuterEigenfunction::new(form, f0.clone(), 1.0, 2.0, DEFAULT_N_TILE).unwrap();
        let f12 = OuterEigenfunction::new(form, f0.clone(), 1.2, 2.0, DEFAULT_N_TILE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.7);
            let a = outer_eval(&f12, DiscPoint::new(z).unwrap()).unwrap();
            let b = outer_eval(&f12, DiscPoint::new(form.iterate_eval(1, z)).unwrap()).unwrap();
            assert!((b.value.norm() / a.value.norm() / 1.2 - 1.0).abs() < 1e-6);
        }
        let g1 = eigenvalue_gamma(&f1).unwrap();
        let g12 = eigenvalue_gamma(&f12).unwrap();
        assert!(g1.modulus_error < 1e-8 && g12.modulus_error < 1e-8, "{g1:?} {g12:?}");
        assert!((g1.gamma - g12.gamma).norm() < 1e-6, "{g1:?} {g12:?}");
        assert!(OuterEigenfunction::new(form, f0, 2.2, 2.0, DEFAULT_N_TILE).is_err());
    }

    #[test]
    fn poisson_routes_agree() {
        // log|F| against a fine trapezoid over the circle of the tiled log f
        let form = hyp(2.0);
        let f0 = BoundaryModulus::from_fn(&form, 65, |_, u| 1.5 + 0.4 * (2.0 * PI * u).sin().powi(2))
            .unwrap();
        let f = OuterEigenfunction::new(form, f0.clone(), 1.0, 2.0, DEFAULT_N_TILE).unwrap();
        let z = Complex64::new(0.2, 0.3);
        let quad = outer_eval(&f, DiscPoint::new(z).unwrap()).unwrap().log_value.re;
        let m = 1 << 18;
        let mut s = 0.0;
        for j in 0..m {
            let th = -PI + 2.0 * PI * (j as f64 + 0.5) / m as f64;
            let xi = Complex64::from_polar(1.0, th);
            let pk = (1.0 - z.norm_sqr()) / (xi - z).norm_sqr();
            if let Ok((_, l)) = tile_log_modulus(&f0, 1.0, &form, BoundaryPoint::from_angle(th)) {
                s += pk * l;
            }
        }
        s /= m as f64;
        assert!((quad - s).abs() < 1e-6, "{quad} {s}");
    }

    #[test]
    fn singular_inner_examples() {
        let mu = AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(0.0), 1.0).unwrap();
        let z0 = DiscPoint::new(Complex64::new(0.0, 0.0)).unwrap();
        assert!((singular_inner_eval(&mu, z0).re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(singular_inner_eval(&AtomicSingularMeasure::zero(), z0), ONE);
        let two = AtomicSingularMeasure::new(vec![
            Atom { point: BoundaryPoint::from_angle(1.0), mass: 0.5 },
            Atom { point: BoundaryPoint::from_angle(1.0 + 1e-13), mass: 0.25 },
            Atom { point: BoundaryPoint::from_angle(-2.0), mass: 2.0 },
        ])
        .unwrap();
        assert_eq!(two.atoms.len(), 2);
        assert!((-singular_inner_eval(&two, z0).norm().ln() - 2.75).abs() < 1e-14);
    }

    #[test]
    fn pushforward_examples() {
        let form = hyp(2.0);
        let phi = form.iterate(1);
        let m = pushforward_measure(
            &AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(PI), 1.0).unwrap(),
            &phi,
        );
        assert!((m.atoms[0].mass - 2.0).abs() < 1e-12);
        assert!((m.atoms[0].point.value() + 1.0).norm() < 1e-12);
        let m = pushforward_measure(
            &AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(0.0), 1.0).unwrap(),
            &phi,
        );
        assert!((m.atoms[0].mass - 0.5).abs() < 1e-12);
        let pp = par(1.0).iterate(1);
        let m = pushforward_measure(
            &AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(0.0), 1.0).unwrap(),
            &pp,
        );
        assert!((m.atoms[0].mass - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let nu = AtomicSingularMeasure::new(
            (0..5)
                .map(|_| Atom {
                    point: BoundaryPoint::from_angle(rng.random_range(-PI..PI)),
                    mass: rng.random_range(0.1..2.0),
                })
                .collect(),
        )
        .unwrap();
        let mu = pushforward_measure(&nu, &phi);
        let inv = phi.inverse();
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.9);
            let a = nu.log_inner(inv.apply(z)).re.exp();
            let b = mu.log_inner(z).re.exp();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_measure_examples() {
        let form = hyp(2.0);
        let mid = form.tile_j().arcs[0].point(0.5);
        let nu0 = AtomicSingularMeasure::dirac(mid, 1.0).unwrap();
        let om = orbit_measure(&nu0, &form, DEFAULT_N_TILE).unwrap();
        let direct: f64 = (-24..=24).map(|n| form.derivative_modulus(n, mid.value())).sum();
        assert!((om.measure.total_mass() - direct).abs() < 1e-12);
        let majorant: f64 = (-24i32..=24).map(|n| 9.0 * 2f64.powi(-n.abs())).sum();
        assert!(om.measure.total_mass() <= majorant);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.7);
            let w = form.iterate_eval(1, z);
            let d = (om.measure.log_inner(w).re - om.measure.log_inner(z).re).abs();
            assert!(d < 10.0 * om.tail_bound, "{d} {}", om.tail_bound);
        }
        let empty = orbit_measure(&AtomicSingularMeasure::zero(), &form, 8).unwrap();
        assert!(empty.measure.atoms.is_empty());
        let off = AtomicSingularMeasure::dirac(BoundaryPoint::from_angle(2.5), 1.0).unwrap();
        assert!(matches!(orbit_measure(&off, &form, 8), Err(HolError::AtomOutsideJ { .. })));
    }

    #[test]
    fn fixed_point_atoms() {
        let m = fixed_point_component(&par(1.0), 3.0).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].point.value() - 1.0).norm() < 1e-15);
        let inv = par(1.0).iterate(-1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let z = random_point(&mut rng, 0.9);
            assert!((m.log_inner(inv.apply(z)).re - m.log_inner(z).re).abs() < 1e-12);
        }
        assert!(fixed_point_component(&hyp(2.0), 0.0).unwrap().atoms.is_empty());
        assert!(matches!(
            fixed_point_component(&hyp(2.0), 1.0),
            Err(HolError::HyperbolicFixedAtomNotEigen { .. })
        ));
    }

    #[test]
    fn blaschke_eigenvectors() {
        let form = hyp(2.0);
        let e = blaschke_eigenvector(&form, &[], 8).unwrap();
        assert!(e.product.is_empty() && e.gamma == ONE);
        let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
        let e = blaschke_eigenvector(&form, &[w], 32).unwrap();
        assert_eq!(e.product.len(), 65);
        assert!(e.gamma_modulus_error < 1e-6 && e.gamma_drift < 1e-4, "{e:?}");
        let far = DiscPoint::from_re_im(0.9, 0.0).unwrap();
        assert!(matches!(
            blaschke_eigenvector(&form, &[far], 4),
            Err(HolError::SeedOutsideFundamentalDomain { .. })
        ));
    }

    #[test]
    fn combined_factorizations() {
        let grid = polar_grid(0.7, 6, 20);
        let pf = par(1.0);
        let fac = EigenFactorization {
            form: pf,
            outer: None,
            blaschke: None,
            singular: Some(fixed_point_component(&pf, 1.0).unwrap()),
        };
        let r = combine_factors(&fac, &grid).unwrap();
        assert!(r.modulus_deviation < 1e-10);

        let form = hyp(2.0);
        let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
        let b = blaschke_eigenvector(&form, &[w], 32).unwrap().product;
        let only_b = EigenFactorization { form, outer: None, blaschke: Some(b.clone()), singular: None };
        let r = combine_factors(&only_b, &grid).unwrap();
        assert!(r.arg_dispersion < 1e-4, "{r:?}");

        let f0 = symmetric_f0(&form, 11);
        let f = OuterEigenfunction::new(form, f0, 1.2, 2.0, DEFAULT_N_TILE).unwrap();
        let only_f = EigenFactorization { form, outer: Some(f.clone()), blaschke: None, singular: None };
        let r = combine_factors(&only_f, &grid).unwrap();
        assert!((r.modulus_ratio - 1.2).abs() < 1e-6, "{r:?}");

        let empty = EigenFactorization { form, outer: None, blaschke: None, singular: None };
        assert!(matches!(combine_factors(&empty, &grid), Err(HolError::AllFactorsAbsent)));
    }
}
