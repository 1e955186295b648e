//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hol_core::blaschke::{
    blaschke_condition_orbit, construct_thin_from_E, thin_subsequence_select, ConstructOptions,
    OrbitVerdict, ThinTargets, DEFAULT_MAX_CANDIDATES,
};
use hol_core::eigen::{
    admissible_lambda_range, blaschke_eigenvector, check_lp_convergence, combine_factors,
    eigenvalue_gamma, fixed_point_component, orbit_measure, outer_eval, polar_grid,
    pushforward_measure, Atom, AtomicSingularMeasure, BoundaryModulus, EigenFactorization,
    LpVerdict, OuterEigenfunction,
};
use hol_core::geometry::{parabolic_c, rho};
use hol_core::hardy::{
    estimate_E, hp_norm, inner_product, model_space_project, orbit_limit_points,
    span_classification, BoundarySamples, EstimateEOptions, KernelSpanBasis, OrbitLimit,
    OrbitLimitOptions, SpanCase, SpanOptions, TaylorVector,
};
use hol_core::{
    BoundaryPoint, Complex64, DiscPoint, HalfPlanePoint, HolError, MoebiusAutomorphism,
    NonEllipticNormalForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Check>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn hyp(a: f64) -> NonEllipticNormalForm {
    NonEllipticNormalForm::hyperbolic(a).unwrap()
}

fn par(t: f64) -> NonEllipticNormalForm {
    NonEllipticNormalForm::parabolic(t).unwrap()
}

fn random_disc(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rmax * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let e = start.elapsed();
    ensure(e < limit, format!("took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn c1_geometry() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut inv, mut metric, mut group) = (0.0f64, 0.0f64, 0.0f64);
    let forms = [hyp(1.5), hyp(2.0), hyp(4.0), par(1.0), par(2.0), par(4.0)];
    for i in 0..10_000 {
        let w = DiscPoint::new(random_disc(&mut rng, 0.9)).unwrap();
        let z = random_disc(&mut rng, 0.9);
        let z2 = random_disc(&mut rng, 0.9);
        let phi = MoebiusAutomorphism::involution(w);
        inv = inv.max((phi.apply(phi.apply(z)) - z).norm());

        let g = MoebiusAutomorphism::new(
            Complex64::from_polar(1.0, rng.random_range(-PI..PI)),
            random_disc(&mut rng, 0.9),
        )
        .unwrap();
        let (a, b) = (DiscPoint::new(z).unwrap(), DiscPoint::new(z2).unwrap());
        let (ga, gb) = (DiscPoint::new(g.apply(z)).unwrap(), DiscPoint::new(g.apply(z2)).unwrap());
        metric = metric.max((rho(a, b) - rho(ga, gb)).abs());

        let f = forms[i % forms.len()];
        let n = rng.random_range(-20..=20i64);
        let m = rng.random_range(-20..=20i64);
        let v = a.chart();
        let lhs = f.iterate_chart(n, &f.iterate_chart(m, &v)).to_disc();
        group = group.max((lhs - f.iterate_chart(n + m, &v).to_disc()).norm());
    }
    ensure(inv <= 1e-12, format!("involution error {inv:e}"))?;
    ensure(metric <= 1e-10, format!("metric error {metric:e}"))?;
    ensure(group <= 1e-12, format!("group law error {group:e}"))?;
    let e = within(start, Duration::from_secs(5))?;
    Ok(format!("involution {inv:.1e}, metric {metric:.1e}, group law {group:.1e}, {e:.2?}"))
}

fn c2_derivative_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let mut total = 0;
    for alpha in [1.5, 2.0, 4.0] {
        let f = hyp(alpha);
        let j = f.tile_j();
        for _ in 0..1000 {
            let w = j.arcs[rng.random_range(0..2)].point(rng.random::<f64>());
            let n = rng.random_range(-30..=30i64);
            let d = f.derivative_modulus(n, w.value());
            let s = alpha.powi(-(n.abs() as i32));
            total += 1;
            if !(0.25 * s <= d && d <= (alpha + 1.0).powi(2) * s) {
                violations += 1;
            }
        }
    }
    for t in [1.0, 2.0, 4.0] {
        let f = par(t);
        let j = f.tile_j();
        let c = parabolic_c(t);
        for _ in 0..1000 {
            let w = j.arcs[0].point(rng.random::<f64>());
            let n = rng.random_range(-30..=30i64);
            let d = f.derivative_modulus(n, w.value());
            let q = (n * n) as f64 * t * t + 4.0;
            total += 1;
            if !(1.0 / q <= d && d <= c / q) {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, format!("{violations} of {total} samples violate the bounds"))?;
    Ok(format!("{total} samples, 0 violations, c(1) = {:.4}", parabolic_c(1.0)))
}

fn c3_fixed_point_derivatives() -> Check {
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for alpha in [1.5, 2.0, 4.0, 10.0] {
        let phi = hyp(alpha).iterate(1);
        worst = worst.max((phi.derivative_modulus(one) - 1.0 / alpha).abs());
        worst = worst.max((phi.derivative_modulus(-one) - alpha).abs());
    }
    for t in [0.5, 1.0, 2.0, 4.0] {
        worst = worst.max((par(t).iterate(1).derivative_modulus(one) - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn c4_orbit_blaschke_sums() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = hyp(2.0);
    // seeds in 1 <= |v| < 2 of the upper half-plane
    let seeds: Vec<HalfPlanePoint> = (0..20)
        .map(|_| {
            let r: f64 = rng.random_range(1.0..2.0);
            HalfPlanePoint::from_upper(Complex64::from_polar(r, rng.random_range(0.05..PI - 0.05)))
        })
        .collect();
    let rep = blaschke_condition_orbit(&f, &seeds, 200, true).map_err(|e| e.to_string())?;
    let OrbitVerdict::AlwaysBlaschke { bound_factor, bound, .. } = rep.verdict else {
        return Err("hyperbolic verdict missing".into());
    };
    ensure((bound_factor - 15.0).abs() < 1e-12, format!("factor {bound_factor}"))?;
    let over = rep.partial_sums.iter().filter(|s| s.partial_sum > bound).count();
    ensure(over == 0, format!("{over} partial sums exceed the bound"))?;

    let t = 1.5;
    let seeds: Vec<HalfPlanePoint> = (0..24)
        .map(|k| {
            let x = t * rng.random::<f64>();
            HalfPlanePoint::from_upper(Complex64::new(x, 2f64.powi(k)))
        })
        .collect();
    let rep = blaschke_condition_orbit(&par(t), &seeds, 0, false).map_err(|e| e.to_string())?;
    let lower = rep.block_lower_bound.ok_or("no lower bound")?;
    ensure((lower - 1.0 / (6.0 * t)).abs() < 1e-15, "lower bound is not 1/(6t)")?;
    let mut big = 0;
    for (s, block) in seeds.iter().zip(&rep.block_sums) {
        if s.to_upper().im >= t + 1.0 {
            big += 1;
            ensure(*block >= lower, format!("block {block} below {lower}"))?;
        }
    }
    let last = rep.partial_sums.last().unwrap();
    ensure(last.partial_sum >= big as f64 * lower, "partial sum below the block bound")?;
    let e = within(start, Duration::from_secs(10))?;
    Ok(format!("factor 15, {big} big atoms each >= 1/(6t), {e:.2?}"))
}

fn c5_random_placements() -> Check {
    let f = hyp(2.0);
    let k = 8;
    let plan = thin_subsequence_select(
        |i| Some(f.iterate_chart(i as i64 + 1, &HalfPlanePoint::ORIGIN)),
        &vec![0.36; k],
        &ThinTargets::dyadic(k),
        k,
        DEFAULT_MAX_CANDIDATES,
    )
    .map_err(|e| e.to_string())?;
    ensure(plan.budgets_hold(), "selection budgets fail")?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let chk = plan.verify_random_placements(100, &mut rng);
    ensure(chk.failures == 0, format!("{} failures", chk.failures))?;
    Ok(format!("100 placements, 0 failures, worst log margin {:.3}", chk.worst_margin))
}

fn c6_orbit_limits() -> Check {
    let f = hyp(2.0);
    let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
    let con = construct_thin_from_E(&f, &[w], 32, &ConstructOptions::default()).map_err(|e| e.to_string())?;
    ensure(con.product.len() == 32, "product does not have 32 factors")?;
    let fits = orbit_limit_points(&con.product, &f, &con.iterates, &OrbitLimitOptions::default());
    for fit in &fits {
        let OrbitLimit::RotatedInvolution { w: fw, .. } = fit.limit else {
            return Err(format!("n = {} is not fitted by an involution", fit.n));
        };
        ensure((fw - w.value()).norm() < 1e-6, format!("n = {} fits w = {fw}", fit.n))?;
    }
    let h2: Vec<f64> = fits.iter().map(|f| f.h2_distance).collect();
    let last = *h2.last().unwrap();
    ensure(last < 1e-3, format!("final residual {last:e}"))?;
    // decreasing past the first few factors, where the nearest neighbours dominate
    let tail_max = h2[4..].iter().copied().fold(0.0, f64::max);
    ensure(tail_max < h2[0], "residuals do not decrease")?;
    let first_small = h2.iter().position(|&d| d < 1e-3).unwrap();
    ensure(h2[first_small..].iter().all(|&d| d < 1e-3), "residual rises above 1e-3 again")?;

    let clusters = estimate_E(&con.product, &f, -200_000..=200_000, &EstimateEOptions::default());
    ensure(!clusters.is_empty(), "no clusters")?;
    let mut worst = 0.0f64;
    for cl in &clusters {
        let (_, r) = f.reduce_chart(&HalfPlanePoint::from_disc(cl.center)).map_err(|e| e.to_string())?;
        worst = worst.max(r.rho(&w.chart()));
    }
    ensure(worst < 0.05, format!("cluster at rho {worst} from the orbit"))?;
    Ok(format!(
        "h2 {:.1e} -> {:.1e} (< 1e-3 from k = {first_small}), {} clusters within rho {worst:.1e}",
        h2[0],
        last,
        clusters.len()
    ))
}

fn c7_trichotomy() -> Check {
    let f = hyp(2.0);
    let opts = SpanOptions::default();
    let empty = span_classification(&[], true, &f, &opts).map_err(|e| e.to_string())?;
    ensure(empty.case == SpanCase::ConstantsOnly, "empty set is not ConstantsOnly")?;
    let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
    let orbit: Vec<DiscPoint> = (-40..=40)
        .filter_map(|n| DiscPoint::new(f.iterate_eval(n, w.value())).ok())
        .collect();
    let model = span_classification(&orbit, true, &f, &opts).map_err(|e| e.to_string())?;
    ensure(matches!(model.case, SpanCase::ModelSpace { .. }), "orbit is not ModelSpace")?;
    let chk = model.check.ok_or("no eigen check")?;
    ensure(chk.gamma_modulus_error < 1e-8, format!("|gamma| error {:e}", chk.gamma_modulus_error))?;
    ensure(chk.max_residual < 1e-8, format!("residual {:e}", chk.max_residual))?;
    let radial: Vec<DiscPoint> = (1..40).map(|k| DiscPoint::from_re_im(1.0 - 1.0 / (k as f64 + 1.0), 0.0).unwrap()).collect();
    let whole = span_classification(&radial, false, &f, &opts).map_err(|e| e.to_string())?;
    ensure(whole.case == SpanCase::WholeSpace, "non-Blaschke intent is not WholeSpace")?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let nodes: Vec<DiscPoint> = [(0.1, 0.5), (-0.4, 0.2), (0.3, -0.5), (-0.2, -0.6)]
        .iter()
        .map(|&(a, b)| DiscPoint::from_re_im(a, b).unwrap())
        .collect();
    let basis = KernelSpanBasis::from_set(&nodes);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut rv = || TaylorVector::new((0..12).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
        let (a, b) = (rv(), rv());
        let pa = model_space_project(&a, &basis).map_err(|e| e.to_string())?;
        let ppa = model_space_project(&pa, &basis).map_err(|e| e.to_string())?;
        let pb = model_space_project(&b, &basis).map_err(|e| e.to_string())?;
        worst = worst.max(ppa.sub(&pa).norm());
        worst = worst.max((inner_product(&pa, &b) - inner_product(&a, &pb)).norm());
    }
    ensure(worst < 1e-10, format!("projection defect {worst:e}"))?;
    Ok(format!("three cases correct, |gamma| error {:.1e}, projection defect {worst:.1e}", chk.gamma_modulus_error))
}

fn random_f0(f: &NonEllipticNormalForm, seed: u64) -> BoundaryModulus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<f64> = (0..4).map(|_| rng.random_range(-0.15..0.15)).collect();
    BoundaryModulus::from_fn(f, 257, |_, u| {
        1.0 + c.iter().enumerate().map(|(k, ck)| ck * (PI * (k as f64 + 1.0) * u).cos()).sum::<f64>()
    })
    .unwrap()
}

fn c8_outer() -> Check {
    let start = Instant::now();
    let f = hyp(2.0);
    let f0 = random_f0(&f, 8);
    let range = admissible_lambda_range(2.0, &f).map_err(|e| e.to_string())?;
    ensure(range.contains(1.2) && !range.contains(2.2), "admissible range is wrong")?;
    let big = OuterEigenfunction::new(f, f0.clone(), 1.2, 2.0, 24).map_err(|e| e.to_string())?;
    ensure(big.nodes == 64, "not 64 nodes per arc")?;
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let mut rel = 0.0f64;
    for _ in 0..100 {
        let z = random_disc(&mut rng, 0.7);
        let a = outer_eval(&big, DiscPoint::new(z).unwrap()).map_err(|e| e.to_string())?;
        let b = outer_eval(&big, DiscPoint::new(f.iterate_eval(1, z)).unwrap()).map_err(|e| e.to_string())?;
        rel = rel.max((b.value.norm() / a.value.norm() / 1.2 - 1.0).abs());
    }
    ensure(rel < 1e-6, format!("eigenrelation error {rel:e}"))?;
    let lp = check_lp_convergence(&f0, 2.2, &f, 2.0, 50).map_err(|e| e.to_string())?;
    ensure(lp.verdict == LpVerdict::Diverges, "lambda = 2.2 does not diverge")?;
    ensure(
        matches!(OuterEigenfunction::new(f, f0.clone(), 2.2, 2.0, 24), Err(HolError::InadmissibleLambda { .. })),
        "lambda = 2.2 accepted",
    )?;
    let unit = OuterEigenfunction::new(f, f0, 1.0, 2.0, 24).map_err(|e| e.to_string())?;
    let g1 = eigenvalue_gamma(&unit).map_err(|e| e.to_string())?;
    let g12 = eigenvalue_gamma(&big).map_err(|e| e.to_string())?;
    let d = (g1.gamma - g12.gamma).norm();
    ensure(d < 1e-6, format!("gamma differs by {d:e}"))?;
    let m = g1.modulus_error.max(g12.modulus_error);
    ensure(m < 1e-8, format!("|gamma| error {m:e}"))?;
    let e = within(start, Duration::from_secs(60))?;
    Ok(format!("relation {rel:.1e}, gamma gap {d:.1e}, |gamma| error {m:.1e}, {e:.2?}"))
}

fn c9_lp_inequality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let deg = rng.random_range(1..16);
        let poly = TaylorVector::new((0..=deg).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
        let s = poly.to_samples(1024).map_err(|e| e.to_string())?;
        let sup = hp_norm(&s, f64::INFINITY).map_err(|e| e.to_string())?;
        let scale = rng.random_range(0.1..2.0) / sup;
        let u = BoundarySamples::new(s.values.iter().map(|v| v * scale).collect()).map_err(|e| e.to_string())?;
        let l2 = hp_norm(&u, 2.0).map_err(|e| e.to_string())?;
        for p in [1.0, 3.0, 4.0] {
            let lhs = hp_norm(&u, p).map_err(|e| e.to_string())?.powf(p);
            let rhs = 2f64.powf(p - 1.0) * l2;
            ensure(lhs <= rhs * (1.0 + 1e-12), format!("p = {p}: {lhs} > {rhs}"))?;
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(format!("300 checks, max ratio {worst:.3}"))
}

fn c10_singular() -> Check {
    let f = hyp(2.0);
    let phi = f.iterate(1);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let nu = AtomicSingularMeasure::new(
        (0..5)
            .map(|_| Atom { point: BoundaryPoint::from_angle(rng.random_range(-PI..PI)), mass: rng.random_range(0.1..2.0) })
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let mu = pushforward_measure(&nu, &phi);
    let inv = phi.inverse();
    let mut push = 0.0f64;
    for _ in 0..100 {
        let z = random_disc(&mut rng, 0.9);
        push = push.max((nu.log_inner(inv.apply(z)).re.exp() - mu.log_inner(z).re.exp()).abs());
    }
    ensure(push <= 1e-12, format!("pushforward identity error {push:e}"))?;

    let nu0 = AtomicSingularMeasure::dirac(f.tile_j().arcs[0].point(0.4), 1.0).map_err(|e| e.to_string())?;
    let om = orbit_measure(&nu0, &f, 24).map_err(|e| e.to_string())?;
    let mut rel = 0.0f64;
    for _ in 0..100 {
        let z = random_disc(&mut rng, 0.7);
        let w = f.iterate_eval(1, z);
        rel = rel.max((om.measure.log_inner(w).re - om.measure.log_inner(z).re).exp_m1().abs());
    }
    ensure(rel <= 10.0 * om.tail_bound, format!("eigenrelation {rel:e} vs tail {:e}", om.tail_bound))?;
    ensure(
        matches!(fixed_point_component(&f, 1.0), Err(HolError::HyperbolicFixedAtomNotEigen { .. })),
        "hyperbolic fixed atom accepted",
    )?;
    Ok(format!("pushforward {push:.1e}, eigenrelation {rel:.1e} <= 10 x tail {:.1e}, fixed atom rejected", om.tail_bound))
}

fn c11_combined() -> Check {
    let f = hyp(2.0);
    let outer = OuterEigenfunction::new(f, random_f0(&f, 11), 1.2, 2.0, 24).map_err(|e| e.to_string())?;
    let w = DiscPoint::from_re_im(0.3, 0.2).unwrap();
    let b = blaschke_eigenvector(&f, &[w], 32).map_err(|e| e.to_string())?.product;
    let fac = EigenFactorization { form: f, outer: Some(outer), blaschke: Some(b), singular: Some(AtomicSingularMeasure::zero()) };
    let r = combine_factors(&fac, &polar_grid(0.7, 6, 20)).map_err(|e| e.to_string())?;
    ensure((r.modulus_ratio - 1.2).abs() < 1e-4, format!("modulus ratio {}", r.modulus_ratio))?;
    ensure(r.arg_dispersion < 1e-4, format!("argument dispersion {:e}", r.arg_dispersion))?;
    Ok(format!("modulus ratio {:.10}, dispersion {:.1e}", r.modulus_ratio, r.arg_dispersion))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hol")).args(args).output().expect("hol binary runs")
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn c12_cli(suite_start: Instant) -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = tmp.path().join("verify.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "experiment": "eigen-verify", "automorphism": {"kind": "hyperbolic", "alpha": 2.0}, "seed": 11}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut compared = 0;
    for sub in ["eig-verify", "orbit-limits", "eig-outer", "domain-plot"] {
        let mut outs = Vec::new();
        for run in 0..2 {
            let out = tmp.path().join(format!("{sub}-{run}"));
            let mut args = vec![sub, "--out", out.to_str().unwrap(), "--seed", "3"];
            if sub == "eig-verify" {
                args.extend(["--config", cfg.to_str().unwrap()]);
            }
            let o = run_cli(&args);
            ensure(o.status.code() == Some(0), format!("{sub} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)))?;
            outs.push(dir_bytes(&out));
        }
        ensure(outs[0] == outs[1], format!("{sub} outputs differ between runs"))?;
        compared += outs[0].len();
    }
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 9, "experiment": "classify"}"#).unwrap();
    let o = run_cli(&["classify", "--config", bad.to_str().unwrap(), "--out", tmp.path().join("bad").to_str().unwrap()]);
    ensure(o.status.code() == Some(2), format!("invalid config exited {:?}", o.status.code()))?;
    let fail_out = tmp.path().join("fail");
    let o = run_cli(&["eig-blaschke", "--tolerance", "0", "--out", fail_out.to_str().unwrap()]);
    ensure(o.status.code() == Some(1), format!("failed assertion exited {:?}", o.status.code()))?;
    ensure(fail_out.join("report.json").exists(), "report missing after a failed assertion")?;
    let e = within(suite_start, Duration::from_secs(300))?;
    Ok(format!("{compared} files byte-identical across reruns, exit codes 0/1/2 honoured, suite {e:.1?}"))
}

fn main() {
    let suite_start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("geometry suite", Box::new(c1_geometry)),
        ("tile derivative bounds", Box::new(c2_derivative_bounds)),
        ("fixed-point derivatives", Box::new(c3_fixed_point_derivatives)),
        ("orbit Blaschke sums", Box::new(c4_orbit_blaschke_sums)),
        ("random placements in the balls", Box::new(c5_random_placements)),
        ("orbit limits and estimate_E", Box::new(c6_orbit_limits)),
        ("span trichotomy and projection", Box::new(c7_trichotomy)),
        ("outer eigenfunctions", Box::new(c8_outer)),
        ("Lp inequality for bounded polynomials", Box::new(c9_lp_inequality)),
        ("singular inner suite", Box::new(c10_singular)),
        ("combined factorization", Box::new(c11_combined)),
        ("wall clock and CLI determinism", Box::new(move || c12_cli(suite_start))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed, {:.1?}", criteria.len() - failed, suite_start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
