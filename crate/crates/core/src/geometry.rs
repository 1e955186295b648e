//! Disc automorphisms, the pseudo-hyperbolic metrics, classification of
//! non-elliptic maps and their normal forms, fundamental domains and the
//! boundary tile `J`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chart::{to_half_plane, HalfPlanePoint};
use crate::error::{invalid, HolError, Result};

/// Default classification tolerance.
pub const TAU_CLS: f64 = 1e-12;
/// Exclusion radius around fixed points.
pub const TAU_FP: f64 = 1e-12;
const UNIMODULAR_TOL: f64 = 1e-14;
const OUTSIDE_TOL: f64 = 1e-12;

fn reject_outside(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + OUTSIDE_TOL) {
        return Err(HolError::OutsideClosedDisc { re: z.re, im: z.im });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.norm() < 1.0 {
            Ok(Self(value))
        } else {
            Err(HolError::NotInDisc {
                re: value.re,
                im: value.im,
            })
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn chart(&self) -> HalfPlanePoint {
        HalfPlanePoint::from_disc(self.0)
    }
}

impl TryFrom<Complex64> for DiscPoint {
    type Error = HolError;
    fn try_from(value: Complex64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Self {
        p.0
    }
}

/// Point of the unit circle stored by its angle in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    angle: f64,
}

pub fn wrap_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

impl BoundaryPoint {
    pub fn from_angle(theta: f64) -> Self {
        Self {
            angle: wrap_angle(theta),
        }
    }

    /// Radial projection of a nonzero complex number onto the circle.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_angle(z.im.atan2(z.re))
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn chart(&self) -> HalfPlanePoint {
        HalfPlanePoint::from_boundary(*self)
    }
}

/// Disc automorphism `z -> rotation * (center - z)/(1 - conj(center) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusAutomorphism {
    pub rotation: Complex64,
    pub center: Complex64,
}

impl MoebiusAutomorphism {
    pub fn new(rotation: Complex64, center: Complex64) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(HolError::NotUnimodular {
                re: rotation.re,
                im: rotation.im,
            });
        }
        DiscPoint::new(center)?;
        Ok(Self { rotation, center })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Complex64::new(-1.0, 0.0),
            center: Complex64::new(0.0, 0.0),
        }
    }

    /// The involution `phi_w`.
    pub fn involution(w: DiscPoint) -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            center: w.value(),
        }
    }

    /// `z -> rotation * z`.
    pub fn rotation_map(rotation: Complex64) -> Result<Self> {
        Self::new(-rotation, Complex64::new(0.0, 0.0))
    }

    /// Evaluation without the closed-disc check.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotation * (self.center - z) / (1.0 - self.center.conj() * z)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        reject_outside(z)?;
        Ok(self.apply(z))
    }

    pub fn eval_boundary(&self, xi: BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.apply(xi.value()))
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = 1.0 - self.center.conj() * z;
        self.rotation * (self.center.norm_sqr() - 1.0) / (d * d)
    }

    pub fn derivative_modulus(&self, z: Complex64) -> f64 {
        let w = self.center;
        (1.0 - w.norm()) * (1.0 + w.norm()) / (1.0 - w.conj() * z).norm_sqr()
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        [
            [-self.rotation, self.rotation * self.center],
            [-self.center.conj(), one],
        ]
    }

    /// Canonical form of the automorphism with matrix `[[a, b], [c, d]]`.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let [[a, b], [_, d]] = m;
        if a.norm() == 0.0 || d.norm() == 0.0 {
            return invalid("matrix does not represent a disc automorphism");
        }
        let lambda = -a / d;
        let lambda = lambda / lambda.norm();
        Self::new(lambda, -b / a)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let p = self.matrix();
        let q = other.matrix();
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
            }
        }
        Self::from_matrix(r)
    }

    pub fn inverse(&self) -> Self {
        Self {
            rotation: self.rotation.conj(),
            center: self.rotation * self.center,
        }
    }
}

pub fn mobius_eval(m: &MoebiusAutomorphism, z: Complex64) -> Result<Complex64> {
    m.eval(z)
}

pub fn rho(z: DiscPoint, w: DiscPoint) -> f64 {
    rho_c(z.value(), w.value())
}

pub(crate) fn rho_c(z: Complex64, w: Complex64) -> f64 {
    ((w - z) / (1.0 - w.conj() * z)).norm()
}

pub fn beta(z: DiscPoint, w: DiscPoint) -> f64 {
    let r = rho(z, w);
    r.ln_1p() - (-r).ln_1p()
}

/// `beta` as a function of `rho`.
pub fn beta_from_rho(r: f64) -> f64 {
    r.ln_1p() - (-r).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralAutomorphismParams {
    pub theta: f64,
    pub p: DiscPoint,
}

impl GeneralAutomorphismParams {
    pub fn new(theta: f64, p: Complex64) -> Result<Self> {
        Ok(Self {
            theta: wrap_angle(theta),
            p: DiscPoint::new(p)?,
        })
    }

    pub fn to_moebius(&self) -> MoebiusAutomorphism {
        MoebiusAutomorphism {
            rotation: Complex64::from_polar(1.0, self.theta),
            center: self.p.value(),
        }
    }

    /// Roots of `conj(p) z^2 - (1 + e^{i theta}) z + e^{i theta} p = 0`.
    pub fn fixed_points(&self) -> Vec<Complex64> {
        let e = Complex64::from_polar(1.0, self.theta);
        let a = self.p.value().conj();
        let b = -(1.0 + e);
        let c = e * self.p.value();
        if a.norm() == 0.0 {
            if b.norm() == 0.0 {
                return vec![];
            }
            return vec![-c / b];
        }
        let disc = (b * b - 4.0 * a * c).sqrt();
        // pick the root without cancellation, then Vieta
        let q = if (b.conj() * disc).re >= 0.0 {
            -0.5 * (b + disc)
        } else {
            -0.5 * (b - disc)
        };
        if q.norm() == 0.0 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        vec![q / a, c / q]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutomorphismClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub fn classify(params: &GeneralAutomorphismParams) -> Result<AutomorphismClass> {
    classify_with_tolerance(params, TAU_CLS)
}

pub fn classify_with_tolerance(
    params: &GeneralAutomorphismParams,
    tolerance: f64,
) -> Result<AutomorphismClass> {
    let e = Complex64::from_polar(1.0, params.theta);
    let pm = params.p.value().norm();
    if (e + 1.0).norm() < UNIMODULAR_TOL && pm < UNIMODULAR_TOL {
        return Err(HolError::DegenerateIdentity);
    }
    let c = (0.5 * params.theta).cos();
    Ok(if (pm - c).abs() <= tolerance {
        AutomorphismClass::Parabolic
    } else if pm > c {
        AutomorphismClass::Hyperbolic
    } else {
        AutomorphismClass::Elliptic
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NonEllipticNormalForm {
    Hyperbolic { alpha: f64 },
    Parabolic { t: f64 },
}

/// Result of conjugating a non-elliptic automorphism to normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormConjugacy {
    pub form: NonEllipticNormalForm,
    /// `sigma` with `sigma ∘ phi ∘ sigma^{-1}` equal to the normal form.
    pub conjugator: MoebiusAutomorphism,
    /// Set when `phi^{-1}` was normalized instead of `phi` to make `t > 0`.
    pub inverted: bool,
}

fn mobius_through(z: [Complex64; 3]) -> [[Complex64; 2]; 2] {
    // x -> ((x - z1)(z2 - z3)) / ((x - z3)(z2 - z1)) sends z to (0, 1, inf)
    let k = z[1] - z[2];
    let l = z[1] - z[0];
    [[k, -k * z[0]], [l, -l * z[2]]]
}

fn mat_inv(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

fn mat_mul(p: [[Complex64; 2]; 2], q: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    r
}

fn snap_identity(m: MoebiusAutomorphism) -> MoebiusAutomorphism {
    if (m.rotation + 1.0).norm() < 1e-14 && m.center.norm() < 1e-14 {
        MoebiusAutomorphism::identity()
    } else {
        m
    }
}

pub fn to_normal_form(params: &GeneralAutomorphismParams) -> Result<NormalFormConjugacy> {
    let class = classify(params)?;
    let phi = params.to_moebius();
    let roots = params.fixed_points();
    match class {
        AutomorphismClass::Elliptic => Err(HolError::EllipticInput),
        AutomorphismClass::Hyperbolic => {
            if roots.len() != 2 {
                return Err(HolError::EllipticInput);
            }
            let a0 = roots[0] / roots[0].norm();
            let a1 = roots[1] / roots[1].norm();
            let (attr, rep) = if phi.derivative_modulus(a0) < phi.derivative_modulus(a1) {
                (a0, a1)
            } else {
                (a1, a0)
            };
            let alpha = 1.0 / phi.derivative_modulus(attr);
            let ta = attr.im.atan2(attr.re);
            let tr = rep.im.atan2(rep.re);
            let span = (ta - tr).rem_euclid(2.0 * PI);
            let mid = Complex64::from_polar(1.0, tr + 0.5 * span);
            let src = mobius_through([rep, mid, attr]);
            let dst = mobius_through([
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ]);
            let sigma = MoebiusAutomorphism::from_matrix(mat_mul(mat_inv(dst), src))?;
            Ok(NormalFormConjugacy {
                form: NonEllipticNormalForm::Hyperbolic { alpha },
                conjugator: snap_identity(sigma),
                inverted: false,
            })
        }
        AutomorphismClass::Parabolic => {
            let fixed = match roots.len() {
                2 => 0.5 * (roots[0] + roots[1]),
                1 => roots[0],
                _ => return Err(HolError::EllipticInput),
            };
            let fixed = fixed / fixed.norm();
            let sigma = MoebiusAutomorphism::rotation_map(fixed.conj())?;
            let conj = sigma.compose(&phi)?.compose(&sigma.inverse())?;
            let shift = to_half_plane(conj.apply(Complex64::new(0.0, 0.0))).re;
            let inverted = shift < 0.0;
            Ok(NormalFormConjugacy {
                form: NonEllipticNormalForm::Parabolic { t: shift.abs() },
                conjugator: snap_identity(sigma),
                inverted,
            })
        }
    }
}

/// One of the two arcs making up `J`, traversed from `start_angle` by
/// `length` radians (negative length runs clockwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JArc {
    pub start_angle: f64,
    pub length: f64,
}

impl JArc {
    pub fn start(&self) -> BoundaryPoint {
        BoundaryPoint::from_angle(self.start_angle)
    }

    pub fn end(&self) -> BoundaryPoint {
        BoundaryPoint::from_angle(self.start_angle + self.length)
    }

    /// Point at arc parameter `u` in `[0, 1]`.
    pub fn point(&self, u: f64) -> BoundaryPoint {
        BoundaryPoint::from_angle(self.start_angle + u * self.length)
    }

    pub fn angle_at(&self, u: f64) -> f64 {
        self.start_angle + u * self.length
    }

    /// Arc parameter of a point assumed to lie on the arc.
    pub fn param_of(&self, xi: BoundaryPoint) -> f64 {
        let mut d = xi.angle() - self.start_angle;
        if self.length >= 0.0 {
            d = d.rem_euclid(2.0 * PI);
        } else {
            d = -(-d).rem_euclid(2.0 * PI);
        }
        (d / self.length).clamp(0.0, 1.0)
    }
}

/// The boundary tile `J`; the endpoint at `start` is included, the one at
/// `start + length` is excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIntervalJ {
    pub form: NonEllipticNormalForm,
    pub arcs: Vec<JArc>,
}

impl BoundaryIntervalJ {
    pub fn contains(&self, xi: BoundaryPoint) -> bool {
        matches!(self.form.quotient_index_boundary(xi), Ok(0))
    }

    /// Index of the arc containing a point of `J`.
    pub fn arc_of(&self, xi: BoundaryPoint) -> usize {
        usize::from(self.arcs.len() > 1 && xi.angle() >= 0.0)
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length.abs()).sum()
    }
}

pub fn boundary_tile_j(form: &NonEllipticNormalForm) -> BoundaryIntervalJ {
    form.tile_j()
}

/// Half-open fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub form: NonEllipticNormalForm,
}

impl FundamentalDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        matches!(self.form.quotient_index(z), Ok(0))
    }

    pub fn contains_chart(&self, v: &HalfPlanePoint) -> bool {
        matches!(self.form.quotient_index_chart(v), Ok(0))
    }
}

/// Parabolic derivative constant of the upper bound in the tile estimate.
pub fn parabolic_c(t: f64) -> f64 {
    let gap = 2.0 * (1.0 / (t * t + 1.0).sqrt() - 1.0 / (t * t + 4.0).sqrt());
    (4.0f64 + 1e-9).max(4.0 / (gap * gap))
}

impl NonEllipticNormalForm {
    pub fn hyperbolic(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return invalid(format!("hyperbolic multiplier must exceed 1, got {alpha}"));
        }
        Ok(Self::Hyperbolic { alpha })
    }

    pub fn parabolic(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("parabolic translation must be positive, got {t}"));
        }
        Ok(Self::Parabolic { t })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Self::Hyperbolic { .. })
    }

    pub fn fixed_points(&self) -> Vec<Complex64> {
        match self {
            Self::Hyperbolic { .. } => vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
            Self::Parabolic { .. } => vec![Complex64::new(1.0, 0.0)],
        }
    }

    fn near_fixed(&self, z: Complex64) -> bool {
        self.fixed_points().iter().any(|f| (z - f).norm() < TAU_FP)
    }

    /// `phi^(n)` in canonical form.
    pub fn iterate(&self, n: i64) -> MoebiusAutomorphism {
        match *self {
            Self::Hyperbolic { alpha } => {
                let x = 0.5 * n as f64 * alpha.ln();
                MoebiusAutomorphism {
                    rotation: Complex64::new(-1.0, 0.0),
                    center: Complex64::new(-x.tanh(), 0.0),
                }
            }
            Self::Parabolic { t } => {
                let nt = n as f64 * t;
                let two_i = Complex64::new(0.0, 2.0);
                MoebiusAutomorphism {
                    rotation: (nt - two_i) / (nt + two_i),
                    center: nt / (nt - two_i),
                }
            }
        }
    }

    pub fn iterate_eval(&self, n: i64, z: Complex64) -> Complex64 {
        self.iterate(n).apply(z)
    }

    pub fn iterate_boundary(&self, n: i64, xi: BoundaryPoint) -> BoundaryPoint {
        self.iterate_chart(n, &xi.chart()).to_boundary()
    }

    /// `phi^(n)` acting on chart coordinates.
    pub fn iterate_chart(&self, n: i64, v: &HalfPlanePoint) -> HalfPlanePoint {
        match *self {
            Self::Hyperbolic { alpha } => v.dilate(n as f64 * alpha.ln()),
            Self::Parabolic { t } => v.translate(n as f64 * t),
        }
    }

    /// `|phi^(n)'(z)|` for `|z| <= 1`.
    pub fn derivative_modulus(&self, n: i64, z: Complex64) -> f64 {
        match *self {
            Self::Hyperbolic { alpha } => {
                let x = 0.5 * n as f64 * alpha.ln();
                let sech = 1.0 / x.cosh();
                sech * sech / (1.0 + x.tanh() * z).norm_sqr()
            }
            Self::Parabolic { .. } => self.iterate(n).derivative_modulus(z),
        }
    }

    pub fn boundary_derivative(&self, n: i64, w: BoundaryPoint) -> Result<f64> {
        let z = w.value();
        if self.near_fixed(z) {
            return Err(HolError::FixedPointSingularity { re: z.re, im: z.im });
        }
        Ok(self.derivative_modulus(n, z))
    }

    /// Two-sided bounds on `|phi^(n)'|` over `J`.
    pub fn derivative_bounds(&self, n: i64) -> (f64, f64) {
        match *self {
            Self::Hyperbolic { alpha } => {
                let g = alpha.powi(-(n.unsigned_abs() as i32));
                (0.25 * g, (alpha + 1.0).powi(2) * g)
            }
            Self::Parabolic { t } => {
                let d = (n as f64 * t).powi(2) + 4.0;
                (1.0 / d, parabolic_c(t) / d)
            }
        }
    }

    /// Upper bound for `sum_{|n| > cutoff} sup_J |phi^(n)'|`.
    pub fn derivative_tail_majorant(&self, cutoff: u64) -> f64 {
        match *self {
            Self::Hyperbolic { alpha } => {
                let c = (alpha + 1.0).powi(2);
                2.0 * c * alpha.powf(-(cutoff as f64 + 1.0)) / (1.0 - 1.0 / alpha)
            }
            Self::Parabolic { t } => {
                let n = cutoff.max(1) as f64;
                // sum_{n > N} 1/(n^2 t^2) <= 1/(t^2 N)
                2.0 * parabolic_c(t) / (t * t * n)
            }
        }
    }

    pub fn quotient_index_chart(&self, v: &HalfPlanePoint) -> Result<i64> {
        match *self {
            Self::Hyperbolic { alpha } => {
                let l = v.log_modulus;
                if !l.is_finite() {
                    let z = v.to_disc();
                    return Err(HolError::FixedPointSingularity { re: z.re, im: z.im });
                }
                let la = alpha.ln();
                let mut n = (l / la).floor();
                if l - n * la < 0.0 {
                    n -= 1.0;
                } else if l - n * la >= la {
                    n += 1.0;
                }
                Ok(n as i64)
            }
            Self::Parabolic { t } => {
                let x = v.log_modulus.exp() * v.cos_arg();
                if !x.is_finite() || v.log_modulus == f64::INFINITY {
                    return Err(HolError::FixedPointSingularity { re: 1.0, im: 0.0 });
                }
                let mut n = (x / t).floor();
                if x - n * t < 0.0 {
                    n -= 1.0;
                } else if x - n * t >= t {
                    n += 1.0;
                }
                Ok(n as i64)
            }
        }
    }

    pub fn quotient_index(&self, z: Complex64) -> Result<i64> {
        reject_outside(z)?;
        if self.near_fixed(z) {
            return Err(HolError::FixedPointSingularity { re: z.re, im: z.im });
        }
        self.quotient_index_chart(&HalfPlanePoint::from_disc(z))
    }

    pub fn quotient_index_boundary(&self, xi: BoundaryPoint) -> Result<i64> {
        let z = xi.value();
        if self.near_fixed(z) {
            return Err(HolError::FixedPointSingularity { re: z.re, im: z.im });
        }
        self.quotient_index_chart(&xi.chart())
    }

    pub fn tile_j(&self) -> BoundaryIntervalJ {
        let arcs = match *self {
            Self::Hyperbolic { alpha } => {
                let len = FRAC_PI_2 - 2.0 * (1.0 / alpha).atan();
                vec![
                    JArc {
                        start_angle: -FRAC_PI_2,
                        length: len,
                    },
                    JArc {
                        start_angle: FRAC_PI_2,
                        length: -len,
                    },
                ]
            }
            Self::Parabolic { t } => vec![JArc {
                start_angle: PI,
                length: PI - 2.0 * (1.0 / t).atan(),
            }],
        };
        BoundaryIntervalJ { form: *self, arcs }
    }

    pub fn fundamental_domain(&self) -> FundamentalDomain {
        FundamentalDomain { form: *self }
    }

    /// Pullback of a disc point into the fundamental domain together with
    /// the quotient index.
    pub fn reduce_chart(&self, v: &HalfPlanePoint) -> Result<(i64, HalfPlanePoint)> {
        let n = self.quotient_index_chart(v)?;
        Ok((n, self.iterate_chart(-n, v)))
    }
}

pub fn iterate_eval(form: &NonEllipticNormalForm, n: i64, z: Complex64) -> Result<Complex64> {
    reject_outside(z)?;
    Ok(form.iterate_eval(n, z))
}

pub fn boundary_derivative(form: &NonEllipticNormalForm, n: i64, w: BoundaryPoint) -> Result<f64> {
    form.boundary_derivative(n, w)
}

pub fn quotient_index(form: &NonEllipticNormalForm, z: Complex64) -> Result<i64> {
    form.quotient_index(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::from_half_plane;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_examples() {
        let w = DiscPoint::from_re_im(0.5, 0.0).unwrap();
        let m = MoebiusAutomorphism::involution(w);
        assert!((m.eval(c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!(m.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);
        assert!((m.eval(c(-0.5, 0.0)).unwrap() - c(0.8, 0.0)).norm() < 1e-15);
        assert!(matches!(
            m.eval(c(1.1, 0.0)),
            Err(HolError::OutsideClosedDisc { .. })
        ));
        let b = m.eval(c(0.6, 0.8)).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn metric_examples() {
        let a = DiscPoint::from_re_im(0.5, 0.0).unwrap();
        let b = DiscPoint::from_re_im(-0.5, 0.0).unwrap();
        let o = DiscPoint::from_re_im(0.0, 0.0).unwrap();
        assert!((rho(a, b) - 0.8).abs() < 1e-15);
        assert!((rho(o, a) - 0.5).abs() < 1e-15);
        assert_eq!(rho(a, a), 0.0);
        assert!((beta(o, a) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(beta(a, a), 0.0);
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::from_re_im(1.0, 0.0).is_err());
        assert!(DiscPoint::from_re_im(0.6, 0.8).is_err());
    }

    #[test]
    fn classification_examples() {
        let p = |theta: f64, re: f64| GeneralAutomorphismParams::new(theta, c(re, 0.0)).unwrap();
        assert_eq!(classify(&p(0.0, 0.5)).unwrap(), AutomorphismClass::Elliptic);
        assert_eq!(
            classify(&p(FRAC_PI_2, 0.5f64.sqrt())).unwrap(),
            AutomorphismClass::Parabolic
        );
        assert_eq!(classify(&p(FRAC_PI_2, 0.9)).unwrap(), AutomorphismClass::Hyperbolic);
        assert!(matches!(classify(&p(PI, 0.0)), Err(HolError::DegenerateIdentity)));
        // interior fixed point 2 - sqrt(3) of the elliptic example
        let roots = p(0.0, 0.5).fixed_points();
        assert!(roots.iter().any(|r| (r - c(2.0 - 3f64.sqrt(), 0.0)).norm() < 1e-14));
    }

    #[test]
    fn iterate_examples() {
        let h = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let oracle = |n: i32, z: Complex64| from_half_plane(2f64.powi(n) * to_half_plane(z));
        assert!((h.iterate_eval(1, c(0.0, 0.0)) - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((h.iterate_eval(2, c(0.0, 0.0)) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((oracle(2, c(0.0, 0.0)) - c(0.6, 0.0)).norm() < 1e-15);
        let p = NonEllipticNormalForm::parabolic(2.0).unwrap();
        assert!((p.iterate_eval(1, c(0.0, 0.0)) - c(0.5, -0.5)).norm() < 1e-15);
        let z = c(0.2, -0.3);
        let via_half = from_half_plane(to_half_plane(z) + 6.0);
        assert!((p.iterate_eval(3, z) - via_half).norm() < 1e-13);
    }

    #[test]
    fn boundary_derivative_examples() {
        let h = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let p = NonEllipticNormalForm::parabolic(2.0).unwrap();
        let i = BoundaryPoint::from_angle(FRAC_PI_2);
        let m1 = BoundaryPoint::from_angle(PI);
        assert!((h.boundary_derivative(1, i).unwrap() - 0.8).abs() < 1e-15);
        assert!((p.boundary_derivative(1, m1).unwrap() - 0.2).abs() < 1e-15);
        assert!((h.boundary_derivative(0, i).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            h.boundary_derivative(1, BoundaryPoint::from_angle(0.0)),
            Err(HolError::FixedPointSingularity { .. })
        ));
        // fixed-point multipliers
        assert!((h.derivative_modulus(1, c(1.0, 0.0)) - 0.5).abs() < 1e-12);
        assert!((h.derivative_modulus(1, c(-1.0, 0.0)) - 2.0).abs() < 1e-12);
        assert!((p.derivative_modulus(1, c(1.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_examples() {
        let h4 = NonEllipticNormalForm::hyperbolic(4.0).unwrap();
        let z = from_half_plane(c(0.0, 8.0));
        assert_eq!(h4.quotient_index(z).unwrap(), 1);
        let p2 = NonEllipticNormalForm::parabolic(2.0).unwrap();
        let z = from_half_plane(c(5.0, 1.0));
        assert_eq!(p2.quotient_index(z).unwrap(), 2);
        assert_eq!(p2.quotient_index(from_half_plane(c(1.0, 1.0))).unwrap(), 0);
        assert!(h4.quotient_index(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn tile_endpoints() {
        let h = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let j = h.tile_j();
        assert!((j.arcs[1].start().value() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((j.arcs[0].start().value() - c(0.0, -1.0)).norm() < 1e-15);
        let phi_minus_i = h.iterate_eval(1, c(0.0, -1.0));
        assert!((j.arcs[0].end().value() - phi_minus_i).norm() < 1e-14);
        let phi_i = h.iterate_eval(1, c(0.0, 1.0));
        assert!((j.arcs[1].end().value() - phi_i).norm() < 1e-14);
        let p = NonEllipticNormalForm::parabolic(2.0).unwrap();
        let jp = p.tile_j();
        assert!((jp.arcs[0].start().value() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((jp.arcs[0].end().value() - p.iterate_eval(1, c(-1.0, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn normal_form_rotation_conjugator() {
        // hyperbolic map with fixed points i (attractive) and -i
        let sigma = MoebiusAutomorphism::rotation_map(c(0.0, 1.0)).unwrap();
        let model = NonEllipticNormalForm::hyperbolic(3.0).unwrap().iterate(1);
        let phi = sigma.compose(&model).unwrap().compose(&sigma.inverse()).unwrap();
        let params = GeneralAutomorphismParams::new(phi.rotation.arg(), phi.center).unwrap();
        let nf = to_normal_form(&params).unwrap();
        match nf.form {
            NonEllipticNormalForm::Hyperbolic { alpha } => assert!((alpha - 3.0).abs() < 1e-10),
            _ => panic!("expected hyperbolic"),
        }
        assert!(nf.conjugator.center.norm() < 1e-12);
        // rotation z -> -i z
        let img = nf.conjugator.apply(c(1.0, 0.0));
        assert!((img - c(0.0, -1.0)).norm() < 1e-12);
    }
}
