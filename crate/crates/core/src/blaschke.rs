//! Blaschke products, thinness, the thin-subsequence selector and the
//! constructions built on it.
//!
//! Zeros live in the half-plane chart (see [`crate::chart`]): the selector
//! routinely places zeros at hyperbolic distance 10^4 from the origin.

use std::f64::consts::{FRAC_PI_2, LN_10, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chart::{log_rho_framed, to_half_plane, HalfPlanePoint};
use crate::error::{invalid, HolError, Result};
use crate::geometry::{DiscPoint, NonEllipticNormalForm};

/// Tag for the per-factor normalization `(|a|/a)(a - z)/(1 - conj(a) z)`, or
/// `z` when `a = 0`.
pub const CONVENTION: &str = "positive_at_origin";

pub const DEFAULT_MAX_CANDIDATES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub point: HalfPlanePoint,
    pub multiplicity: u32,
}

impl Zero {
    pub fn simple(point: HalfPlanePoint) -> Self {
        Self {
            point,
            multiplicity: 1,
        }
    }

    pub fn disc(&self) -> Complex64 {
        self.point.to_disc()
    }

    /// `1 - |a|`, without cancellation.
    pub fn one_minus_abs(&self) -> f64 {
        let a = self.point.abs_disc();
        self.point.log_one_minus_abs_sq().exp() / (1.0 + a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ZeroSequence {
    pub zeros: Vec<Zero>,
    /// Caller's assertion that the intended infinite sequence is Blaschke.
    pub blaschke_intent: bool,
}

impl ZeroSequence {
    pub fn new(zeros: Vec<Zero>) -> Self {
        Self {
            zeros,
            blaschke_intent: true,
        }
    }

    pub fn from_disc(points: &[(Complex64, u32)]) -> Result<Self> {
        let mut zeros = Vec::with_capacity(points.len());
        for &(z, m) in points {
            DiscPoint::new(z)?;
            if m == 0 {
                return invalid("zero multiplicity must be positive");
            }
            zeros.push(Zero {
                point: HalfPlanePoint::from_disc(z),
                multiplicity: m,
            });
        }
        Ok(Self::new(zeros))
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// `sum (1 - |z_k|)` with multiplicity.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros
            .iter()
            .map(|z| z.multiplicity as f64 * z.one_minus_abs())
            .sum()
    }
}

/// Value of a truncated product with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeValue {
    pub value: Complex64,
    /// Bound on `|B(z) - B_N(z)|`; absent on the boundary.
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct BlaschkeProduct {
    pub zeros: ZeroSequence,
}

impl BlaschkeProduct {
    pub fn new(zeros: ZeroSequence) -> Self {
        Self { zeros }
    }

    pub fn from_disc_zeros(zeros: &[Complex64]) -> Result<Self> {
        let pts: Vec<_> = zeros.iter().map(|&z| (z, 1)).collect();
        Ok(Self::new(ZeroSequence::from_disc(&pts)?))
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zero(&self, k: usize) -> &Zero {
        &self.zeros.zeros[k]
    }

    /// Unimodular constant `|a|/a` of factor `k` (1 for a zero at the origin).
    pub fn gamma(&self, k: usize) -> Complex64 {
        let a = self.zeros.zeros[k].disc();
        if a.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            a.norm() / a
        }
    }

    /// Factor `k` (without multiplicity) at the chart point `u`.
    pub fn factor_chart(&self, k: usize, u: &HalfPlanePoint) -> Complex64 {
        let v = &self.zeros.zeros[k].point;
        let r0 = HalfPlanePoint::ORIGIN.moebius_ratio(v);
        let c = if r0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            r0.norm() / r0
        };
        c * u.moebius_ratio(v)
    }

    pub fn eval_chart(&self, u: &HalfPlanePoint, n_factors: usize) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 0..n_factors.min(self.len()) {
            let f = self.factor_chart(k, u);
            acc *= f.powu(self.zeros.zeros[k].multiplicity);
        }
        acc
    }

    /// `log |B_N(u)|`, accurate when `B` is close to 0 or to the circle.
    pub fn log_abs_chart(&self, u: &HalfPlanePoint, n_factors: usize) -> f64 {
        self.zeros.zeros[..n_factors.min(self.len())]
            .iter()
            .map(|z| z.multiplicity as f64 * u.log_rho(&z.point))
            .sum()
    }

    /// `sum_{k >= N} 2(1 - |a_k|)/(1 - |z|)`.
    pub fn tail_bound(&self, abs_z: f64, n_factors: usize) -> f64 {
        let s: f64 = self.zeros.zeros[n_factors.min(self.len())..]
            .iter()
            .map(|z| z.multiplicity as f64 * z.one_minus_abs())
            .sum();
        2.0 * s / (1.0 - abs_z)
    }

    pub fn eval(&self, z: Complex64, n_factors: usize) -> Result<BlaschkeValue> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(HolError::OutsideClosedDisc { re: z.re, im: z.im });
        }
        let value = self.eval_chart(&HalfPlanePoint::from_disc(z), n_factors);
        let tail_bound = (r < 1.0).then(|| self.tail_bound(r, n_factors));
        Ok(BlaschkeValue { value, tail_bound })
    }

    /// `(B ∘ phi^(m))(z)` computed by shifting the chart.
    pub fn eval_composed(&self, form: &NonEllipticNormalForm, m: i64, z: Complex64) -> Complex64 {
        let u = form.iterate_chart(m, &HalfPlanePoint::from_disc(z));
        self.eval_chart(&u, self.len())
    }

    pub fn prefix(&self, n: usize) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.zeros.truncate(n);
        Self { zeros }
    }
}

pub fn blaschke_eval(b: &BlaschkeProduct, z: Complex64, n_factors: usize) -> Result<BlaschkeValue> {
    b.eval(z, n_factors)
}

/// `log prod_{j != k} rho(z_j, z_k)` with multiplicities.
pub fn log_thinness(zeros: &ZeroSequence, k: usize) -> f64 {
    let zk = &zeros.zeros[k];
    if zk.multiplicity > 1 {
        return f64::NEG_INFINITY;
    }
    zeros
        .zeros
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, z)| z.multiplicity as f64 * zk.point.log_rho(&z.point))
        .sum()
}

pub fn thinness_measure(zeros: &ZeroSequence, k: usize) -> f64 {
    log_thinness(zeros, k).exp()
}

/// Thinness targets `delta_k`, stored as `log delta_k` so that targets within
/// 1e-40 of 1 stay distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinTargets {
    pub log_delta: Vec<f64>,
}

impl ThinTargets {
    pub fn from_deltas(deltas: &[f64]) -> Result<Self> {
        if let Some(d) = deltas.iter().find(|d| !(**d >= 0.0 && **d < 1.0)) {
            return invalid(format!("thinness target {d} is outside [0, 1)"));
        }
        Self::checked(deltas.iter().map(|d| d.ln()).collect())
    }

    /// Targets given by `1 - delta_k`.
    pub fn from_one_minus(gaps: &[f64]) -> Result<Self> {
        if let Some(g) = gaps.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
            return invalid(format!("1 - delta = {g} is outside (0, 1]"));
        }
        Self::checked(gaps.iter().map(|g| (-g).ln_1p()).collect())
    }

    /// `delta_k = 1 - 2^{-k}`, `k = 1..=n`.
    pub fn dyadic(n: usize) -> Self {
        Self {
            log_delta: (1..=n).map(|k| (-(0.5f64).powi(k as i32)).ln_1p()).collect(),
        }
    }

    fn checked(log_delta: Vec<f64>) -> Result<Self> {
        if log_delta.windows(2).any(|w| w[1] < w[0]) {
            return invalid("thinness targets must be non-decreasing");
        }
        Ok(Self { log_delta })
    }

    pub fn len(&self) -> usize {
        self.log_delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_delta.is_empty()
    }

    pub fn delta(&self, k: usize) -> f64 {
        self.log_delta[k].exp()
    }
}

/// Points `0 < x_1 < x_2 < ...` on the radius `[0, 1)`, stored by their
/// hyperbolic distance `s_j = beta(0, x_j)` from the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceThinSequence {
    pub positions: Vec<f64>,
    pub x: Vec<f64>,
    pub one_minus_x: Vec<f64>,
}

/// `log tanh(d/2)`, the log of the pseudo-hyperbolic distance between points
/// at hyperbolic distance `d` on one geodesic.
fn log_rho_of_gap(d: f64) -> f64 {
    let e = (-d.abs()).exp();
    (-e).ln_1p() - e.ln_1p()
}

impl ReferenceThinSequence {
    fn from_positions(positions: Vec<f64>) -> Self {
        let x = positions.iter().map(|s| (0.5 * s).tanh()).collect();
        let one_minus_x = positions.iter().map(|s| 2.0 / (s.exp() + 1.0)).collect();
        Self {
            positions,
            x,
            one_minus_x,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn beta(&self, k: usize, j: usize) -> f64 {
        (self.positions[k] - self.positions[j]).abs()
    }

    pub fn alpha(&self, k: usize, j: usize) -> f64 {
        (0.5 * self.beta(k, j)).tanh()
    }

    pub fn log_thinness(&self, k: usize) -> f64 {
        (0..self.len())
            .filter(|&j| j != k)
            .map(|j| log_rho_of_gap(self.beta(k, j)))
            .sum()
    }

    pub fn chart(&self, j: usize) -> HalfPlanePoint {
        HalfPlanePoint::from_log_polar(self.positions[j], FRAC_PI_2)
    }
}

pub fn reference_thin_sequence(targets: &ThinTargets) -> Result<ReferenceThinSequence> {
    const ITERATION_CAP: usize = 1_000_000;
    // x_j = 1 - 2^{-j}
    let seed = |j: usize| (2f64.powi(j as i32 + 1) - 1.0).ln();
    let n = targets.len();
    let mut positions: Vec<f64> = Vec::with_capacity(n);
    let mut iterations = 0usize;
    for k in 0..n {
        let theta = 1.0 - 0.5f64.powi(k as i32 + 1);
        let mut gap = if k == 0 { 0.0 } else { seed(k + 1) - seed(k) };
        loop {
            let cand = if k == 0 { seed(1) } else { positions[k - 1] + gap };
            if !cand.is_finite() {
                return Err(HolError::TargetsInfeasible { index: k });
            }
            positions.push(cand);
            let ok = (0..=k).all(|j| {
                let ld = targets.log_delta[j];
                if ld == f64::NEG_INFINITY {
                    return true;
                }
                let lp: f64 = (0..=k)
                    .filter(|&i| i != j)
                    .map(|i| log_rho_of_gap(positions[i] - positions[j]))
                    .sum();
                lp > theta * ld
            });
            if ok {
                break;
            }
            positions.pop();
            gap *= 2.0;
            iterations += 1;
            if iterations > ITERATION_CAP {
                return Err(HolError::TargetsInfeasible { index: k });
            }
        }
    }
    let seq = ReferenceThinSequence::from_positions(positions);
    for k in 0..n {
        let ld = targets.log_delta[k];
        if ld > f64::NEG_INFINITY && !(seq.log_thinness(k) > ld) {
            return Err(HolError::TargetsInfeasible { index: k });
        }
    }
    Ok(seq)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinSelectionPlan {
    /// Selected candidate indices `n_k`, increasing.
    pub selected: Vec<usize>,
    pub centers: Vec<HalfPlanePoint>,
    pub radii: Vec<f64>,
    pub targets: ThinTargets,
    pub reference: ReferenceThinSequence,
    /// `R_k = log((1 + r_k)/(1 - r_k))`.
    pub ball_budget: Vec<f64>,
    /// `R_k + sum_{j<k} (R_j + beta_{k,j})`.
    pub required: Vec<f64>,
    /// `beta(z_{n_k}, {z_{n_j} : j < k})`.
    pub achieved: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementCheck {
    pub trials: usize,
    pub failures: usize,
    /// Smallest `log prod_{j != k} rho(xi_j, xi_k) - log delta_k` seen.
    pub worst_margin: f64,
}

impl ThinSelectionPlan {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Budget inequality for every selected index.
    pub fn budgets_hold(&self) -> bool {
        self.achieved
            .iter()
            .zip(&self.required)
            .enumerate()
            .all(|(k, (a, r))| k == 0 || a > r)
    }

    /// Places `xi_k` uniformly in each ball `D_rho(z_{n_k}, r_k)` and checks
    /// the product bound, `trials` times.
    pub fn verify_random_placements<R: Rng>(&self, trials: usize, rng: &mut R) -> PlacementCheck {
        let k_total = self.len();
        let mut failures = 0;
        let mut worst = f64::INFINITY;
        for _ in 0..trials {
            let xi: Vec<Complex64> = (0..k_total)
                .map(|k| {
                    let r = self.radii[k] * rng.random::<f64>().sqrt();
                    let zeta = Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>());
                    to_half_plane(zeta)
                })
                .collect();
            let mut failed = false;
            for k in 0..k_total {
                let ld = self.targets.log_delta[k];
                let lp: f64 = (0..k_total)
                    .filter(|&j| j != k)
                    .map(|j| log_rho_framed(&self.centers[j], xi[j], &self.centers[k], xi[k]))
                    .sum();
                if ld > f64::NEG_INFINITY {
                    worst = worst.min(lp - ld);
                }
                if !(lp > ld) {
                    failed = true;
                }
            }
            if failed {
                failures += 1;
            }
        }
        PlacementCheck {
            trials,
            failures,
            worst_margin: worst,
        }
    }
}

/// Selects `k` candidates greedily. `candidates(i)` returns the `i`-th
/// candidate, `None` past the end of the list.
pub fn thin_subsequence_select<F>(
    mut candidates: F,
    radii: &[f64],
    targets: &ThinTargets,
    k: usize,
    max_candidates: usize,
) -> Result<ThinSelectionPlan>
where
    F: FnMut(usize) -> Option<HalfPlanePoint>,
{
    if radii.len() < k || targets.len() < k {
        return invalid("need one radius and one target per selected element");
    }
    if let Some(r) = radii.iter().find(|r| !(**r >= 0.0 && **r < 1.0)) {
        return invalid(format!("ball radius {r} is outside [0, 1)"));
    }
    let targets = ThinTargets {
        log_delta: targets.log_delta[..k].to_vec(),
    };
    let reference = reference_thin_sequence(&targets)?;
    let ball_budget: Vec<f64> = radii[..k]
        .iter()
        .map(|r| r.ln_1p() - (-r).ln_1p())
        .collect();
    let mut selected = Vec::with_capacity(k);
    let mut centers: Vec<HalfPlanePoint> = Vec::with_capacity(k);
    let mut required = Vec::with_capacity(k);
    let mut achieved = Vec::with_capacity(k);
    let mut next = 0usize;
    for step in 0..k {
        let need = ball_budget[step]
            + (0..step)
                .map(|j| ball_budget[j] + reference.beta(step, j))
                .sum::<f64>();
        loop {
            if next >= max_candidates {
                return Err(HolError::CandidatesExhausted { selected: step });
            }
            let Some(c) = candidates(next) else {
                return Err(HolError::CandidatesExhausted { selected: step });
            };
            let idx = next;
            next += 1;
            let dist = centers
                .iter()
                .map(|p| c.beta(p))
                .fold(f64::INFINITY, f64::min);
            if step == 0 || dist > need {
                selected.push(idx);
                centers.push(c);
                required.push(need);
                achieved.push(dist);
                break;
            }
        }
    }
    Ok(ThinSelectionPlan {
        selected,
        centers,
        radii: radii[..k].to_vec(),
        targets,
        reference,
        ball_budget,
        required,
        achieved,
    })
}

/// Convenience wrapper over a finite candidate list of disc points.
pub fn thin_subsequence_select_list(
    candidates: &[Complex64],
    radii: &[f64],
    targets: &ThinTargets,
    k: usize,
) -> Result<ThinSelectionPlan> {
    for &z in candidates {
        DiscPoint::new(z)?;
    }
    let pts: Vec<HalfPlanePoint> = candidates.iter().map(|&z| HalfPlanePoint::from_disc(z)).collect();
    if pts.len() >= 4 {
        let first = pts[pts.len() / 2].log_one_minus_abs_sq();
        let last = pts[pts.len() - 1].log_one_minus_abs_sq();
        if last > first {
            return invalid("candidate moduli do not tend to 1");
        }
    }
    thin_subsequence_select(|i| pts.get(i).copied(), radii, targets, k, pts.len())
}

/// Indices into `E` for the schedule `a1; a1 a2; a1 a2 a3; ...`, blocks
/// capped at `m` elements.
pub fn repetition_schedule(m: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut block = 1;
    while out.len() < k && m > 0 {
        for i in 0..block.min(m) {
            if out.len() == k {
                break;
            }
            out.push(i);
        }
        block += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinConstruction {
    pub product: BlaschkeProduct,
    pub plan: Option<ThinSelectionPlan>,
    pub seeds: Vec<HalfPlanePoint>,
    /// Index into `seeds` of the point used by factor `k`.
    pub schedule: Vec<usize>,
    /// Iterate index `n_k` of factor `k`.
    pub iterates: Vec<i64>,
}

impl ThinConstruction {
    /// Zero of factor `k`, recomputed from `phi^(n_k)(w_k)` in disc coordinates.
    pub fn zero_by_iteration(&self, form: &NonEllipticNormalForm, k: usize) -> Complex64 {
        form.iterate_eval(self.iterates[k], self.seeds[self.schedule[k]].to_disc())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructOptions {
    pub targets: Option<ThinTargets>,
    pub max_candidates: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            targets: None,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

/// Candidate `z_{-n} = phi^(n)(0)`, `n = i + 1`.
fn orbit_candidate(form: &NonEllipticNormalForm, i: usize) -> HalfPlanePoint {
    form.iterate_chart(i as i64 + 1, &HalfPlanePoint::ORIGIN)
}

#[allow(non_snake_case)]
pub fn construct_thin_from_E(
    form: &NonEllipticNormalForm,
    e_seed: &[DiscPoint],
    k: usize,
    options: &ConstructOptions,
) -> Result<ThinConstruction> {
    let targets = options
        .targets
        .clone()
        .unwrap_or_else(|| ThinTargets::dyadic(k));
    if targets.len() < k {
        return invalid("fewer thinness targets than requested factors");
    }
    if e_seed.is_empty() {
        // zeros -x_j on the radius toward the point -1
        let reference = reference_thin_sequence(&ThinTargets {
            log_delta: targets.log_delta[..k].to_vec(),
        })?;
        let zeros = reference
            .positions
            .iter()
            .map(|s| Zero::simple(HalfPlanePoint::from_log_polar(-s, FRAC_PI_2)))
            .collect();
        return Ok(ThinConstruction {
            product: BlaschkeProduct::new(ZeroSequence::new(zeros)),
            plan: None,
            seeds: vec![],
            schedule: vec![],
            iterates: vec![],
        });
    }
    let seeds: Vec<HalfPlanePoint> = e_seed.iter().map(|w| w.chart()).collect();
    let schedule = repetition_schedule(seeds.len(), k);
    let radii: Vec<f64> = schedule.iter().map(|&i| e_seed[i].value().norm()).collect();
    let plan = thin_subsequence_select(
        |i| Some(orbit_candidate(form, i)),
        &radii,
        &targets,
        k,
        options.max_candidates,
    )?;
    let iterates: Vec<i64> = plan.selected.iter().map(|&i| i as i64 + 1).collect();
    let zeros = schedule
        .iter()
        .zip(&iterates)
        .map(|(&s, &n)| Zero::simple(form.iterate_chart(n, &seeds[s])))
        .collect();
    Ok(ThinConstruction {
        product: BlaschkeProduct::new(ZeroSequence::new(zeros)),
        plan: Some(plan),
        seeds,
        schedule,
        iterates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub n: usize,
    pub partial_sum: f64,
    /// Upper bound (hyperbolic) or guaranteed lower bound (parabolic).
    pub majorant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum OrbitVerdict {
    AlwaysBlaschke {
        bound_factor: f64,
        seed_sum: f64,
        bound: f64,
    },
    BlaschkeIff {
        sup_y: f64,
        /// Caller's claim that the intended `y_k` are bounded.
        bounded_intent: bool,
        blaschke: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitBlaschkeReport {
    pub verdict: OrbitVerdict,
    pub partial_sums: Vec<PartialSum>,
    /// Parabolic only: sum over `|n| <= floor(y_k/t)` for each seed.
    pub block_sums: Vec<f64>,
    /// Parabolic only: `1/(6t)`.
    pub block_lower_bound: Option<f64>,
}

fn check_seeds(form: &NonEllipticNormalForm, seed: &[HalfPlanePoint]) -> Result<()> {
    for (index, v) in seed.iter().enumerate() {
        let q = form.quotient_index_chart(v)?;
        if q != 0 {
            return Err(HolError::SeedOutsideFundamentalDomain { index, quotient: q });
        }
    }
    Ok(())
}

/// Orbit Blaschke sums `sum_k sum_{|n| <= N} Im v / (1 + |v|^2)` over the
/// half-plane images `v` of `phi^(n)(z_k)`.
pub fn blaschke_condition_orbit(
    form: &NonEllipticNormalForm,
    seed: &[HalfPlanePoint],
    n_orbit: usize,
    bounded_intent: bool,
) -> Result<OrbitBlaschkeReport> {
    check_seeds(form, seed)?;
    let half: Vec<Complex64> = seed.iter().map(|v| v.to_upper()).collect();
    let term = |v: Complex64| v.im / (1.0 + v.norm_sqr());
    match *form {
        NonEllipticNormalForm::Hyperbolic { alpha } => {
            let factor = (alpha + 1.0) / (alpha - 1.0) * (1.0 + alpha * alpha);
            let seed_sum: f64 = half.iter().map(|&v| term(v)).sum();
            let la = alpha.ln();
            let mut partial = seed_sum;
            let mut sums = vec![PartialSum {
                n: 0,
                partial_sum: partial,
                majorant: factor * seed_sum,
            }];
            for n in 1..=n_orbit {
                for &v in &half {
                    for s in [n as f64, -(n as f64)] {
                        partial += term(v * (s * la).exp());
                    }
                }
                sums.push(PartialSum {
                    n,
                    partial_sum: partial,
                    majorant: factor * seed_sum,
                });
            }
            Ok(OrbitBlaschkeReport {
                verdict: OrbitVerdict::AlwaysBlaschke {
                    bound_factor: factor,
                    seed_sum,
                    bound: factor * seed_sum,
                },
                partial_sums: sums,
                block_sums: vec![],
                block_lower_bound: None,
            })
        }
        NonEllipticNormalForm::Parabolic { t } => {
            let sup_y = half.iter().map(|v| v.im).fold(0.0, f64::max);
            let lower = 1.0 / (6.0 * t);
            let mut block_sums = Vec::with_capacity(half.len());
            let mut sums = Vec::with_capacity(half.len() + 1);
            let mut partial = 0.0;
            let mut big = 0usize;
            sums.push(PartialSum {
                n: 0,
                partial_sum: 0.0,
                majorant: 0.0,
            });
            for (k, &v) in half.iter().enumerate() {
                let reach = (v.im / t).floor() as i64;
                let block: f64 = (-reach..=reach).map(|n| term(v + n as f64 * t)).sum();
                block_sums.push(block);
                partial += block;
                if v.im >= t + 1.0 {
                    big += 1;
                }
                sums.push(PartialSum {
                    n: k + 1,
                    partial_sum: partial,
                    majorant: big as f64 * lower,
                });
            }
            let _ = n_orbit;
            Ok(OrbitBlaschkeReport {
                verdict: OrbitVerdict::BlaschkeIff {
                    sup_y,
                    bounded_intent,
                    blaschke: bounded_intent,
                },
                partial_sums: sums,
                block_sums,
                block_lower_bound: Some(lower),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example25Options {
    /// Separation of the net in the hyperbolic metric.
    pub delta_sep: f64,
    /// `eta_j = eta_decay^j` in `1 - delta_j = eta_j^2 (1 - |w_j|^2)^2 / 2`.
    pub eta_decay: f64,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub max_candidates: usize,
}

impl Default for Example25Options {
    fn default() -> Self {
        Self {
            delta_sep: 1.0,
            eta_decay: 0.1,
            grid_radial: 16,
            grid_angular: 1600,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example25Row {
    pub j: usize,
    pub n_j: i64,
    pub abs_w: f64,
    pub log10_one_minus_abs_w_sq: f64,
    /// `log10` of `(1 - |B_j(phi^(n_j)(0))|^2)^{1/2} / (1 - |w_j|^2)`.
    pub log10_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example25 {
    pub construction: ThinConstruction,
    pub net: Vec<HalfPlanePoint>,
    pub table: Vec<Example25Row>,
}

impl Example25 {
    pub fn ratio_decreasing(&self) -> bool {
        self.table
            .windows(2)
            .all(|w| w[1].log10_ratio < w[0].log10_ratio)
    }
}

/// Greedy separated net in the fundamental domain, nearest points first.
pub fn separated_net(
    form: &NonEllipticNormalForm,
    k: usize,
    options: &Example25Options,
) -> Result<Vec<HalfPlanePoint>> {
    let span = 40.0;
    let na = options.grid_angular.max(2);
    let nr = options.grid_radial.max(1);
    let mut grid: Vec<(f64, HalfPlanePoint)> = Vec::with_capacity(na * nr);
    for i in 0..nr {
        for a in 0..na {
            let tau = -span + 2.0 * span * a as f64 / (na - 1) as f64;
            let p = match *form {
                NonEllipticNormalForm::Hyperbolic { alpha } => {
                    let l = alpha.ln() * i as f64 / nr as f64;
                    HalfPlanePoint::from_edge(l, 2.0 * (-tau.abs()).exp().atan(), tau <= 0.0)
                }
                NonEllipticNormalForm::Parabolic { t } => {
                    let x = t * i as f64 / nr as f64;
                    HalfPlanePoint::from_upper(Complex64::new(x, tau.exp()))
                }
            };
            if p.edge_angle > 0.0 {
                grid.push((-p.log_one_minus_abs_sq(), p));
            }
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut net: Vec<HalfPlanePoint> = Vec::with_capacity(k);
    for (_, p) in grid {
        if net.len() == k {
            break;
        }
        let far = net.iter().all(|q| {
            [-1, 0, 1]
                .iter()
                .all(|&m| p.beta(&form.iterate_chart(m, q)) >= options.delta_sep)
        });
        if far {
            net.push(p);
        }
    }
    if net.len() < k {
        return invalid(format!("grid supports only {} net points", net.len()));
    }
    Ok(net)
}

/// `log(1 - prod_k rho_k^2)` from `l_k = log(1 - rho_k^2)`.
pub fn log_one_minus_product(l: &[f64]) -> f64 {
    let s: f64 = l.iter().map(|x| (-x.exp()).ln_1p()).sum();
    if s < -1e-15 {
        return (-s.exp_m1()).ln();
    }
    // every factor is within 1e-15 of 1: first-order term
    let m = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + l.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub fn example25_zeros(
    form: &NonEllipticNormalForm,
    k: usize,
    options: &Example25Options,
) -> Result<Example25> {
    if k == 0 {
        return invalid("K must be at least 1");
    }
    let mut net = separated_net(form, k, options)?;
    // rows 1 and 2 share their dominant factor rho(z_1, z_2), so row 1 needs the larger |w|
    if k >= 2 && net[0].abs_disc() < net[1].abs_disc() {
        net.swap(0, 1);
    }
    let log_eta = options.eta_decay.ln();
    // log of the ratio bound eta_j aimed at for each row
    let mut log_bound: Vec<f64> = (0..k).map(|j| (j as f64 + 1.0) * log_eta).collect();
    let mut round = 0;
    loop {
        let (plan, iterates, product, table) = example25_round(form, &net, &log_bound, options)?;
        let ok = table
            .windows(2)
            .all(|w| w[1].log10_ratio < w[0].log10_ratio);
        round += 1;
        if ok || round >= EXAMPLE25_ROUNDS {
            return Ok(Example25 {
                construction: ThinConstruction {
                    product,
                    plan: Some(plan),
                    seeds: net.clone(),
                    schedule: (0..k).collect(),
                    iterates,
                },
                net,
                table,
            });
        }
        // early rows overshoot their bound: aim later rows below the realized ratio
        for j in 1..k {
            if table[j].log10_ratio >= table[j - 1].log10_ratio {
                let prev = table[j - 1].log10_ratio * LN_10;
                log_bound[j] = log_bound[j].min(prev + log_eta);
            }
        }
        log::debug!("example25 round {round}: tightened targets");
    }
}

const EXAMPLE25_ROUNDS: usize = 8;

type Example25Round = (ThinSelectionPlan, Vec<i64>, BlaschkeProduct, Vec<Example25Row>);

fn example25_round(
    form: &NonEllipticNormalForm,
    net: &[HalfPlanePoint],
    log_bound: &[f64],
    options: &Example25Options,
) -> Result<Example25Round> {
    let k = net.len();
    let mut gaps: Vec<f64> = net
        .iter()
        .zip(log_bound)
        .map(|(w, &lb)| (0.5f64.ln() + 2.0 * lb + 2.0 * w.log_one_minus_abs_sq()).exp())
        .collect();
    // targets must increase
    for j in 1..k {
        gaps[j] = gaps[j].min(gaps[j - 1]);
    }
    let targets = ThinTargets::from_one_minus(&gaps)?;
    let radii: Vec<f64> = net.iter().map(|w| w.abs_disc()).collect();
    let plan = thin_subsequence_select(
        |i| Some(orbit_candidate(form, i)),
        &radii,
        &targets,
        k,
        options.max_candidates,
    )?;
    let iterates: Vec<i64> = plan.selected.iter().map(|&i| i as i64 + 1).collect();
    let zeros: Vec<Zero> = net
        .iter()
        .zip(&iterates)
        .map(|(w, &n)| Zero::simple(form.iterate_chart(n, w)))
        .collect();
    let product = BlaschkeProduct::new(ZeroSequence::new(zeros));
    let table = (0..k)
        .map(|j| {
            let center = &plan.centers[j];
            let ls: Vec<f64> = (0..k)
                .filter(|&i| i != j)
                .map(|i| center.log_one_minus_rho_sq(&product.zero(i).point))
                .collect();
            let log_one_minus_p_sq = log_one_minus_product(&ls);
            let lw = net[j].log_one_minus_abs_sq();
            Example25Row {
                j: j + 1,
                n_j: iterates[j],
                abs_w: radii[j],
                log10_one_minus_abs_w_sq: lw / LN_10,
                log10_ratio: (0.5 * log_one_minus_p_sq - lw) / LN_10,
            }
        })
        .collect();
    Ok((plan, iterates, product, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let b = BlaschkeProduct::from_disc_zeros(&[c(0.0, 0.0)]).unwrap();
        let z = c(0.3, -0.4);
        assert!((b.eval(z, 1).unwrap().value - z).norm() < 1e-15);
        let b = BlaschkeProduct::from_disc_zeros(&[c(0.5, 0.0)]).unwrap();
        assert!((b.eval(c(0.0, 0.0), 1).unwrap().value - c(0.5, 0.0)).norm() < 1e-15);
        let direct = (c(0.5, 0.0) - z) / (1.0 - 0.5 * z);
        assert!((b.eval(z, 1).unwrap().value - direct).norm() < 1e-15);
    }

    #[test]
    fn normalization_matches_disc_formula() {
        let zeros = [c(0.3, 0.4), c(-0.7, 0.1), c(0.05, -0.9)];
        let b = BlaschkeProduct::from_disc_zeros(&zeros).unwrap();
        let z = c(-0.2, 0.6);
        let direct: Complex64 = zeros
            .iter()
            .map(|&a| a.norm() / a * (a - z) / (1.0 - a.conj() * z))
            .product();
        assert!((b.eval(z, 3).unwrap().value - direct).norm() < 1e-14);
        let at0 = b.eval(c(0.0, 0.0), 3).unwrap().value;
        let expect: f64 = zeros.iter().map(|a| a.norm()).product();
        assert!((at0 - c(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn thinness_examples() {
        let single = ZeroSequence::from_disc(&[(c(0.5, 0.0), 1)]).unwrap();
        assert_eq!(thinness_measure(&single, 0), 1.0);
        let pair = ZeroSequence::from_disc(&[(c(0.9, 0.0), 1), (c(-0.9, 0.0), 1)]).unwrap();
        assert!((thinness_measure(&pair, 0) - 1.8 / 1.81).abs() < 1e-14);
        let rep = ZeroSequence::from_disc(&[(c(0.9, 0.0), 1), (c(0.9, 0.0), 1)]).unwrap();
        assert_eq!(thinness_measure(&rep, 0), 0.0);
    }

    #[test]
    fn reference_sequence_zero_targets_is_seed() {
        let t = ThinTargets::from_deltas(&[0.0; 5]).unwrap();
        let r = reference_thin_sequence(&t).unwrap();
        for (j, x) in r.x.iter().enumerate() {
            assert!((x - (1.0 - 0.5f64.powi(j as i32 + 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn reference_sequence_dyadic_targets() {
        let t = ThinTargets::dyadic(6);
        let r = reference_thin_sequence(&t).unwrap();
        for k in 0..6 {
            // direct product with the disc formula
            let p: f64 = (0..6)
                .filter(|&j| j != k)
                .map(|j| {
                    let (a, b) = (r.x[j], r.x[k]);
                    ((a - b) / (1.0 - a * b)).abs()
                })
                .product();
            assert!(p > t.delta(k), "k={k}: {p} <= {}", t.delta(k));
        }
        assert!(r.x.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn select_k1_takes_first() {
        let cands: Vec<Complex64> = (1..20).map(|n| c(1.0 - 0.5f64.powi(n), 0.0)).collect();
        let plan = thin_subsequence_select_list(&cands, &[0.5], &ThinTargets::dyadic(1), 1).unwrap();
        assert_eq!(plan.selected, vec![0]);
    }

    #[test]
    fn select_spiral_candidates_and_verify() {
        let cand = |i: usize| {
            let n = i as i32 + 1;
            Some(HalfPlanePoint::from_disc_polar(0.5f64.powi(n), n as f64))
        };
        let plan = thin_subsequence_select(cand, &[0.5; 6], &ThinTargets::dyadic(6), 6, 2000).unwrap();
        assert!(plan.budgets_hold());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let check = plan.verify_random_placements(100, &mut rng);
        assert_eq!(check.failures, 0);
    }

    #[test]
    fn select_reports_exhaustion() {
        let cands: Vec<Complex64> = (1..4).map(|n| c(1.0 - 0.5f64.powi(n), 0.0)).collect();
        let err = thin_subsequence_select_list(&cands, &[0.5; 3], &ThinTargets::dyadic(3), 3);
        assert!(matches!(err, Err(HolError::CandidatesExhausted { .. })));
    }

    #[test]
    fn schedule_blocks() {
        assert_eq!(repetition_schedule(3, 8), vec![0, 0, 1, 0, 1, 2, 0, 1]);
        assert_eq!(repetition_schedule(1, 3), vec![0, 0, 0]);
        assert_eq!(repetition_schedule(2, 7), vec![0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn orbit_condition_hyperbolic() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let seed = [HalfPlanePoint::from_upper(c(0.3, 1.2))];
        let r = blaschke_condition_orbit(&form, &seed, 64, true).unwrap();
        match r.verdict {
            OrbitVerdict::AlwaysBlaschke { bound_factor, .. } => {
                assert!((bound_factor - 15.0).abs() < 1e-12)
            }
            _ => panic!(),
        }
        assert!(r.partial_sums.iter().all(|p| p.partial_sum <= p.majorant));
        let empty = blaschke_condition_orbit(&form, &[], 8, true).unwrap();
        assert_eq!(empty.partial_sums.last().unwrap().partial_sum, 0.0);
        let outside = [HalfPlanePoint::from_upper(c(0.0, 5.0))];
        assert!(matches!(
            blaschke_condition_orbit(&form, &outside, 8, true),
            Err(HolError::SeedOutsideFundamentalDomain { index: 0, quotient: 2 })
        ));
    }

    #[test]
    fn orbit_condition_parabolic_blocks() {
        let form = NonEllipticNormalForm::parabolic(2.0).unwrap();
        let seed: Vec<_> = (1..=12)
            .map(|k| HalfPlanePoint::from_upper(c(0.5, (k * k) as f64)))
            .collect();
        let r = blaschke_condition_orbit(&form, &seed, 0, false).unwrap();
        for (v, b) in seed.iter().zip(&r.block_sums) {
            if v.to_upper().im >= 3.0 {
                assert!(*b >= 1.0 / 12.0, "block {b}");
            }
        }
    }

    #[test]
    fn construct_from_single_point() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
        let c = construct_thin_from_E(&form, &[w], 32, &ConstructOptions::default()).unwrap();
        let plan = c.plan.as_ref().unwrap();
        assert!(plan.budgets_hold());
        let b = &c.product;
        for k in 0..b.len() {
            // zero inside D_rho(z_{-n_k}, |w_k|)
            // chart coordinates reach 7e4 here, so rounding is ~1e-11
            let d = b.zero(k).point.rho(&plan.centers[k]);
            assert!(d <= w.value().norm() + 1e-9);
            assert!((b.zero(k).disc() - c.zero_by_iteration(&form, k)).norm() < 1e-10);
            assert!(log_thinness(&b.zeros, k) > plan.targets.log_delta[k]);
        }
        assert!(c.iterates.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn construct_from_empty_set() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let c = construct_thin_from_E(&form, &[], 8, &ConstructOptions::default()).unwrap();
        assert_eq!(c.product.len(), 8);
        let vals: Vec<Complex64> = [20, 40, 80]
            .iter()
            .map(|&n| c.product.eval_composed(&form, n, Complex64::new(0.0, 0.0)))
            .collect();
        for v in &vals {
            assert!((v.norm() - 1.0).abs() < 1e-5);
        }
        assert!((vals[1] - vals[2]).norm() < 1e-5);
    }

    #[test]
    fn example25_small() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let one = example25_zeros(&form, 1, &Example25Options::default()).unwrap();
        assert_eq!(one.table.len(), 1);
        let ex = example25_zeros(&form, 20, &Example25Options::default()).unwrap();
        assert!(ex.ratio_decreasing());
    }
}
