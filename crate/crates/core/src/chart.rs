//! Log-polar upper half-plane chart for points of the disc.
//!
//! A disc point `z` is carried as `v = h(z) = i(1+z)/(1-z)` written as
//! `v = exp(log_modulus + i*arg)` with `arg` in `[0, pi]`. Hyperbolic normal
//! forms act by shifting `log_modulus`, so orbits that run millions of
//! hyperbolic units toward a fixed point stay representable, and the
//! pseudo-hyperbolic distance between two chart points is computed without
//! ever forming `1 - |z|`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::BoundaryPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Cayley map `h(z) = i(1+z)/(1-z)` from the disc onto the upper half-plane.
pub fn to_half_plane(z: Complex64) -> Complex64 {
    I * (1.0 + z) / (1.0 - z)
}

/// Inverse Cayley map `h^{-1}(v) = (v-i)/(v+i)`.
pub fn from_half_plane(v: Complex64) -> Complex64 {
    (v - I) / (v + I)
}

/// Upper half-plane point `v = exp(log_modulus) * e^{i psi}`. The argument
/// `psi` is stored as `edge_angle = min(psi, pi - psi)` plus the side of the
/// imaginary axis, so points hugging either half of the real axis keep full
/// relative precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub log_modulus: f64,
    pub edge_angle: f64,
    /// `Re v >= 0`.
    pub right: bool,
}

/// Scaled pieces of `|u - v|^2` and `|u - conj v|^2`, both divided by
/// `|u||v| exp(|log|u| - log|v||)`.
struct DistanceParts {
    near: f64,
    far: f64,
    abs_delta: f64,
}

impl HalfPlanePoint {
    pub const ORIGIN: HalfPlanePoint = HalfPlanePoint {
        log_modulus: 0.0,
        edge_angle: FRAC_PI_2,
        right: true,
    };

    /// From `log|v|` and `arg v` in `[0, pi]`.
    pub fn from_log_polar(log_modulus: f64, arg: f64) -> Self {
        let arg = arg.clamp(0.0, PI);
        if arg <= FRAC_PI_2 {
            Self::from_edge(log_modulus, arg, true)
        } else {
            Self::from_edge(log_modulus, PI - arg, false)
        }
    }

    pub fn from_edge(log_modulus: f64, edge_angle: f64, right: bool) -> Self {
        Self {
            log_modulus,
            edge_angle: edge_angle.clamp(0.0, FRAC_PI_2),
            right,
        }
    }

    /// `arg v` in `[0, pi]` (loses relative precision near `pi`).
    pub fn arg(&self) -> f64 {
        if self.right {
            self.edge_angle
        } else {
            PI - self.edge_angle
        }
    }

    pub fn sin_arg(&self) -> f64 {
        self.edge_angle.sin()
    }

    pub fn cos_arg(&self) -> f64 {
        let c = self.edge_angle.cos();
        if self.right {
            c
        } else {
            -c
        }
    }

    fn unit(&self) -> Complex64 {
        Complex64::new(self.cos_arg(), self.sin_arg())
    }

    pub fn from_upper(v: Complex64) -> Self {
        let r = v.norm();
        if r == 0.0 {
            return Self::from_log_polar(f64::NEG_INFINITY, FRAC_PI_2);
        }
        if !r.is_finite() {
            return Self::from_log_polar(f64::INFINITY, FRAC_PI_2);
        }
        Self::from_edge(r.ln(), v.im.max(0.0).atan2(v.re.abs()), v.re >= 0.0)
    }

    fn from_parts(log_modulus: f64, im: f64, re: f64) -> Self {
        Self::from_edge(log_modulus, im.max(0.0).atan2(re.abs()), re >= 0.0)
    }

    /// Chart coordinates of a point of the closed disc.
    pub fn from_disc(z: Complex64) -> Self {
        let modulus = z.norm();
        let one_minus_sq = ((1.0 - modulus) * (1.0 + modulus)).max(0.0);
        let plus = (1.0 + z).norm();
        let minus = (1.0 - z).norm();
        if minus == 0.0 {
            return Self::from_log_polar(f64::INFINITY, FRAC_PI_2);
        }
        if plus == 0.0 {
            return Self::from_log_polar(f64::NEG_INFINITY, FRAC_PI_2);
        }
        Self::from_parts(plus.ln() - minus.ln(), one_minus_sq, -2.0 * z.im)
    }

    /// Chart of `(1 - one_minus_r) e^{i theta}`, exact for tiny `one_minus_r`.
    pub fn from_disc_polar(one_minus_r: f64, theta: f64) -> Self {
        let e = one_minus_r;
        let r = 1.0 - e;
        let (s, c) = (0.5 * theta).sin_cos();
        let plus_sq = e * e + 4.0 * r * c * c;
        let minus_sq = e * e + 4.0 * r * s * s;
        if minus_sq == 0.0 {
            return Self::from_log_polar(f64::INFINITY, FRAC_PI_2);
        }
        if plus_sq == 0.0 {
            return Self::from_log_polar(f64::NEG_INFINITY, FRAC_PI_2);
        }
        Self::from_parts(
            0.5 * (plus_sq.ln() - minus_sq.ln()),
            e * (2.0 - e),
            -2.0 * r * theta.sin(),
        )
    }

    pub fn from_boundary(b: BoundaryPoint) -> Self {
        let half = 0.5 * b.angle();
        let (s, c) = half.sin_cos();
        if s == 0.0 {
            return Self::from_edge(f64::INFINITY, 0.0, true);
        }
        if c.abs() < 1e-300 {
            return Self::from_edge(f64::NEG_INFINITY, 0.0, true);
        }
        // h(e^{i theta}) = -cot(theta / 2)
        Self::from_edge(c.abs().ln() - s.abs().ln(), 0.0, -c / s > 0.0)
    }

    /// Point `s` of the real axis.
    pub fn from_boundary_coordinate(s: f64) -> Self {
        if s == 0.0 {
            Self::from_edge(f64::NEG_INFINITY, 0.0, true)
        } else {
            Self::from_edge(s.abs().ln(), 0.0, s > 0.0)
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.edge_angle == 0.0 || self.log_modulus.is_infinite()
    }

    pub fn to_upper(&self) -> Complex64 {
        self.log_modulus.exp() * self.unit()
    }

    pub fn to_disc(&self) -> Complex64 {
        if self.log_modulus == f64::INFINITY {
            return Complex64::new(1.0, 0.0);
        }
        if self.log_modulus == f64::NEG_INFINITY {
            return Complex64::new(-1.0, 0.0);
        }
        if self.log_modulus > 0.0 {
            // 1 - 2i/(v + i), with 1/v formed from the log-polar data
            let inv = (-self.log_modulus).exp() * self.unit().conj();
            1.0 - 2.0 * I * inv / (1.0 + I * inv)
        } else {
            from_half_plane(self.to_upper())
        }
    }

    pub fn to_boundary(&self) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.to_disc())
    }

    /// Real coordinate on the boundary line, when the point is on it.
    pub fn boundary_coordinate(&self) -> f64 {
        let m = self.log_modulus.exp();
        if self.right {
            m
        } else {
            -m
        }
    }

    pub fn dilate(&self, log_factor: f64) -> Self {
        Self {
            log_modulus: self.log_modulus + log_factor,
            ..*self
        }
    }

    pub fn translate(&self, shift: f64) -> Self {
        if self.log_modulus > 650.0 || shift == 0.0 {
            return *self;
        }
        let v = self.to_upper() + shift;
        if self.edge_angle == 0.0 {
            // stay exactly on the boundary line
            return Self::from_boundary_coordinate(v.re);
        }
        Self::from_upper(v)
    }

    fn parts(&self, other: &Self) -> DistanceParts {
        let mut delta = self.log_modulus - other.log_modulus;
        if delta.is_nan() {
            delta = 0.0;
        }
        let abs_delta = delta.abs();
        let e = (-abs_delta).exp();
        let radial = (-(-abs_delta).exp_m1()).powi(2);
        let (a, b) = (self.edge_angle, other.edge_angle);
        // sin((psi_u -/+ psi_v)/2) up to sign
        let (sd, ss) = if self.right == other.right {
            ((0.5 * (a - b)).sin(), (0.5 * (a + b)).sin())
        } else {
            ((0.5 * (a + b)).cos(), (0.5 * (a - b)).cos())
        };
        DistanceParts {
            near: radial + 4.0 * sd * sd * e,
            far: radial + 4.0 * ss * ss * e,
            abs_delta,
        }
    }

    /// `log(1 - rho^2)` between two chart points.
    pub fn log_one_minus_rho_sq(&self, other: &Self) -> f64 {
        if self.log_modulus.is_infinite() && self.log_modulus == other.log_modulus {
            return f64::NEG_INFINITY;
        }
        let p = self.parts(other);
        let l = 2.0 * LN_2 - p.abs_delta + self.sin_arg().ln() + other.sin_arg().ln() - p.far.ln();
        if l.is_nan() {
            f64::NEG_INFINITY
        } else {
            l.min(0.0)
        }
    }

    /// Pseudo-hyperbolic distance.
    pub fn rho(&self, other: &Self) -> f64 {
        let p = self.parts(other);
        let ratio = p.near / p.far;
        if ratio.is_finite() && ratio <= 0.25 {
            ratio.sqrt()
        } else {
            let l = self.log_one_minus_rho_sq(other);
            (-l.exp_m1()).max(0.0).sqrt()
        }
    }

    pub fn log_rho(&self, other: &Self) -> f64 {
        let p = self.parts(other);
        let ratio = p.near / p.far;
        if ratio.is_finite() && ratio <= 0.25 {
            0.5 * ratio.ln()
        } else {
            let l = self.log_one_minus_rho_sq(other);
            0.5 * (-l.exp()).ln_1p()
        }
    }

    /// Hyperbolic distance `log((1 + rho)/(1 - rho))`.
    pub fn beta(&self, other: &Self) -> f64 {
        let rho = self.rho(other);
        if rho == 0.0 {
            return 0.0;
        }
        2.0 * rho.ln_1p() - self.log_one_minus_rho_sq(other)
    }

    /// `log(1 - |z|^2)` for the disc point represented by `self`.
    pub fn log_one_minus_abs_sq(&self) -> f64 {
        self.log_one_minus_rho_sq(&Self::ORIGIN)
    }

    pub fn abs_disc(&self) -> f64 {
        self.rho(&Self::ORIGIN)
    }

    /// `(u - v)/(u - conj v)` with `u = self`: an automorphism of the disc in
    /// the variable `z = h^{-1}(u)` vanishing at `h^{-1}(v)`.
    pub fn moebius_ratio(&self, zero: &Self) -> Complex64 {
        let mut delta = self.log_modulus - zero.log_modulus;
        if delta.is_nan() {
            delta = 0.0;
        }
        let eu = self.unit();
        let ev = zero.unit();
        if delta >= 0.0 {
            let e = (-delta).exp();
            (eu - e * ev) / (eu - e * ev.conj())
        } else {
            let e = delta.exp();
            (e * eu - ev) / (e * eu - ev.conj())
        }
    }

    /// Image of the disc point `zeta` under an automorphism that carries 0
    /// to `self`; `rho(result, self) = |zeta|`.
    pub fn ball_point(&self, zeta: Complex64) -> Self {
        let h = to_half_plane(zeta);
        let e = self.edge_angle;
        if e > FRAC_PI_4 {
            let q = self.cos_arg() + self.sin_arg() * h;
            return Self::from_upper(q).dilate(self.log_modulus);
        }
        // q = s cos(e) (1 + s tan(e) h) with s the side sign, kept in
        // factored form so tiny edge angles survive
        let s = if self.right { 1.0 } else { -1.0 };
        let tau = e.tan();
        let re_w = 1.0 + s * tau * h.re;
        let log_mod = e.cos().ln() + 0.5 * (2.0 * s * tau * h.re + tau * tau * h.norm_sqr()).ln_1p();
        let re_q = s * e.cos() * re_w;
        let im_q = e.sin() * h.im;
        Self::from_edge(
            log_mod + self.log_modulus,
            im_q.max(0.0).atan2(re_q.abs()),
            re_q >= 0.0,
        )
    }
}

/// `log rho(T_a(p), T_b(q))`, where `T_c(u) = |c| (cos psi_c + sin psi_c u)`
/// is the affine map of the upper half-plane carrying `i` to `c`, and `p`,
/// `q` are upper half-plane points of moderate size. The distance is formed
/// in the frame of `b`, so points deep inside small balls near the real axis
/// keep their offsets.
pub fn log_rho_framed(a: &HalfPlanePoint, p: Complex64, b: &HalfPlanePoint, q: Complex64) -> f64 {
    let delta = a.log_modulus - b.log_modulus;
    let log_a = delta + a.sin_arg().ln() - b.sin_arg().ln();
    // B = (e^delta cos psi_a - cos psi_b) / sin psi_b, in scaled form
    let m = delta.max(0.0);
    let num = (delta - m).exp() * a.cos_arg() - (-m).exp() * b.cos_arg();
    let log_b = if num == 0.0 {
        f64::NEG_INFINITY
    } else {
        m + num.abs().ln() - b.sin_arg().ln()
    };
    let sign_b = num.signum();
    let big = (log_a + p.norm().ln())
        .max(log_b)
        .max(q.norm().ln())
        .max(0.0);
    let ap = (log_a - big).exp() * p;
    let bs = sign_b * (log_b - big).exp();
    let qs = (-big).exp() * q;
    let near = qs - ap - bs;
    let far = qs - ap.conj() - bs;
    let ratio = near.norm_sqr() / far.norm_sqr();
    if ratio.is_finite() && ratio <= 0.25 {
        return 0.5 * ratio.ln();
    }
    let l = 2.0 * LN_2 + q.im.ln() + log_a + p.im.ln() - 2.0 * big - far.norm_sqr().ln();
    0.5 * (-l.min(0.0).exp()).ln_1p()
}
