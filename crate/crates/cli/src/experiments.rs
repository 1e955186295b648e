use std::collections::BTreeMap;
use std::f64::consts::PI;

use hol_core::blaschke::{
    blaschke_condition_orbit, construct_thin_from_E, thin_subsequence_select, ConstructOptions,
    OrbitVerdict, ThinTargets, DEFAULT_MAX_CANDIDATES,
};
use hol_core::eigen::{
    blaschke_eigenvector, check_lp_convergence, combine_factors, eigenvalue_gamma,
    fixed_point_component, orbit_measure, outer_eval, polar_grid, pushforward_measure,
    tile_boundary_modulus, AtomicSingularMeasure, BoundaryModulus, EigenFactorization, LpVerdict,
    OuterEigenfunction,
};
use hol_core::geometry::{classify, rho, AutomorphismClass, GeneralAutomorphismParams};
use hol_core::hardy::{
    estimate_E, orbit_limit_points, span_classification, EstimateEOptions, OrbitLimit,
    OrbitLimitOptions, SpanOptions,
};
use hol_core::io::{
    classification_to_json, product_to_json, read_boundary_modulus_csv,
    write_boundary_modulus_csv, write_zeros_csv, MeasureJson,
};
use hol_core::{
    BoundaryPoint, Complex64, DiscPoint, HalfPlanePoint, MoebiusAutomorphism,
    NonEllipticNormalForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::*;
use crate::{Assertion, CliError, Outcome, PlotTable};

pub(crate) fn run(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    match c.experiment {
        ExperimentKind::Classify => run_classify(c),
        ExperimentKind::Iterate => run_iterate(c),
        ExperimentKind::ThinSelect => run_thin_select(c),
        ExperimentKind::ConstructThin => run_construct(c),
        ExperimentKind::OrbitLimits => run_orbit_limits(c),
        ExperimentKind::EstimateE => run_estimate_e(c),
        ExperimentKind::SpanClassify => run_span(c),
        ExperimentKind::EigBlaschke => run_eig_blaschke(c),
        ExperimentKind::EigOuter => run_eig_outer(c),
        ExperimentKind::EigSingular => run_eig_singular(c),
        ExperimentKind::EigVerify => run_eig_verify(c),
        ExperimentKind::DomainPlot => run_domain_plot(c),
    }
}

fn outcome<P: Serialize>(params: &P) -> Result<Outcome, CliError> {
    Ok(Outcome {
        params: serde_json::to_value(params)?,
        results: json!({}),
        assertions: vec![],
        files: vec![],
        plot_data: BTreeMap::new(),
    })
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn bytes_to_string(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("csv output is utf-8")
}

fn form_of(c: &ExperimentConfig) -> Result<NonEllipticNormalForm, CliError> {
    Ok(c.automorphism.normal_form()?.0)
}

fn random_disc(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rmax * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
}

fn c_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn run_classify(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: ClassifyParams = c.params()?;
    let mut out = outcome(&p)?;
    let params = match c.automorphism {
        AutomorphismSpec::General { theta, p } => {
            GeneralAutomorphismParams::new(theta, Complex64::new(p[0], p[1]))?
        }
        _ => {
            let m = form_of(c)?.iterate(1);
            GeneralAutomorphismParams::new(m.rotation.arg(), m.center)?
        }
    };
    let class = classify(&params)?;
    let class_name = match class {
        AutomorphismClass::Elliptic => "elliptic",
        AutomorphismClass::Parabolic => "parabolic",
        AutomorphismClass::Hyperbolic => "hyperbolic",
    };
    let fixed: Vec<_> = params.fixed_points().into_iter().map(c_json).collect();
    let mut results = json!({ "class": class_name, "fixed_points": fixed });
    if class != AutomorphismClass::Elliptic {
        let (form, conj) = c.automorphism.normal_form()?;
        let tol = c.tolerance_or(1e-12);
        let one = Complex64::new(1.0, 0.0);
        let d1 = form.derivative_modulus(1, one);
        let dm1 = form.derivative_modulus(1, -one);
        match form {
            NonEllipticNormalForm::Hyperbolic { alpha } => {
                out.assertions.push(Assertion::at_most("derivative_at_1", (d1 - 1.0 / alpha).abs(), tol));
                out.assertions.push(Assertion::at_most("derivative_at_minus_1", (dm1 - alpha).abs(), tol));
            }
            NonEllipticNormalForm::Parabolic { .. } => {
                out.assertions.push(Assertion::at_most("derivative_at_1", (d1 - 1.0).abs(), tol));
            }
        }
        results["normal_form"] = serde_json::to_value(form)?;
        results["conjugacy"] = serde_json::to_value(conj)?;
        results["derivative_at_fixed_points"] = json!({ "at_1": d1, "at_minus_1": dm1 });
    }
    if let Some(e) = &p.expect {
        out.assertions.push(Assertion::holds("expected_class", e.eq_ignore_ascii_case(class_name)));
    }
    out.results = results;
    Ok(out)
}

fn run_iterate(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: IterateParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let tol = c.tolerance_or(1e-12);
    let pts = disc_points(&p.points)?;
    let mut rows = Vec::new();
    for (i, z) in pts.iter().enumerate() {
        let v = z.chart();
        for n in -p.n_max..=p.n_max {
            let w = form.iterate_chart(n, &v);
            let q = form.quotient_index_chart(&w).map(|q| q.to_string()).unwrap_or_default();
            let d = w.to_disc();
            rows.push(vec![i.to_string(), n.to_string(), d.re.to_string(), d.im.to_string(), q]);
        }
    }
    out.files.push(("iterates.csv".into(), csv_text(&["point", "n", "re", "im", "quotient_index"], rows)));

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let (mut inv, mut metric, mut group) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.samples {
        let w = DiscPoint::new(random_disc(&mut rng, 0.9))?;
        let z = random_disc(&mut rng, 0.9);
        let z2 = random_disc(&mut rng, 0.9);
        let phi = MoebiusAutomorphism::involution(w);
        inv = inv.max((phi.apply(phi.apply(z)) - z).norm());
        let (a, b) = (DiscPoint::new(z)?, DiscPoint::new(z2)?);
        let g = form.iterate(rng.random_range(-3..=3i64).max(1));
        metric = metric.max((rho(a, b) - rho(DiscPoint::new(g.apply(z))?, DiscPoint::new(g.apply(z2))?)).abs());
        let n = rng.random_range(-p.n_max..=p.n_max);
        let m = rng.random_range(-p.n_max..=p.n_max);
        let v = a.chart();
        let lhs = form.iterate_chart(n, &form.iterate_chart(m, &v)).to_disc();
        group = group.max((lhs - form.iterate_chart(n + m, &v).to_disc()).norm());
    }
    let j = form.tile_j();
    let mut violations = 0usize;
    for _ in 0..p.bound_samples {
        let arc = &j.arcs[rng.random_range(0..j.arcs.len())];
        let w = arc.point(rng.random::<f64>());
        let n = rng.random_range(-p.bound_n_max..=p.bound_n_max);
        let d = form.derivative_modulus(n, w.value());
        let (lo, hi) = form.derivative_bounds(n);
        if !(lo <= d && d <= hi) {
            violations += 1;
        }
    }
    out.assertions.push(Assertion::at_most("involution", inv, tol));
    out.assertions.push(Assertion::at_most("metric_invariance", metric, 100.0 * tol));
    out.assertions.push(Assertion::at_most("group_law", group, tol));
    out.assertions.push(Assertion::at_most("derivative_bound_violations", violations as f64, 0.0));
    out.results = json!({
        "max_involution_error": inv,
        "max_metric_error": metric,
        "max_group_law_error": group,
        "derivative_bound_violations": violations,
        "derivative_bounds_n1": form.derivative_bounds(1),
    });
    Ok(out)
}

fn targets(deltas: &Option<Vec<f64>>, k: usize) -> Result<ThinTargets, CliError> {
    Ok(match deltas {
        Some(d) => ThinTargets::from_deltas(d)?,
        None => ThinTargets::dyadic(k),
    })
}

fn run_thin_select(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: ThinSelectParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let t = targets(&p.deltas, p.k)?;
    let plan = thin_subsequence_select(
        |i| Some(form.iterate_chart(i as i64 + 1, &HalfPlanePoint::ORIGIN)),
        &vec![p.radius; p.k],
        &t,
        p.k,
        DEFAULT_MAX_CANDIDATES,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let check = plan.verify_random_placements(p.trials, &mut rng);
    let rows = (0..plan.len()).map(|k| {
        let z = plan.centers[k].to_disc();
        vec![
            k.to_string(),
            (plan.selected[k] + 1).to_string(),
            z.re.to_string(),
            z.im.to_string(),
            plan.radii[k].to_string(),
            plan.targets.log_delta[k].to_string(),
            plan.required[k].to_string(),
            plan.achieved[k].to_string(),
        ]
    });
    out.files.push((
        "plan.csv".into(),
        csv_text(&["k", "n_k", "re", "im", "radius", "log_delta", "required", "achieved"], rows),
    ));
    out.assertions.push(Assertion::holds("budgets_hold", plan.budgets_hold()));
    out.assertions.push(Assertion::at_most("placement_failures", check.failures as f64, 0.0));
    out.results = json!({ "selected": plan.selected, "placement": check });
    Ok(out)
}

fn construct(
    form: &NonEllipticNormalForm,
    seeds: &[[f64; 2]],
    k: usize,
    deltas: &Option<Vec<f64>>,
) -> Result<hol_core::blaschke::ThinConstruction, CliError> {
    let options = ConstructOptions {
        targets: Some(targets(deltas, k)?),
        ..ConstructOptions::default()
    };
    Ok(construct_thin_from_E(form, &disc_points(seeds)?, k, &options)?)
}

fn product_files(out: &mut Outcome, b: &hol_core::blaschke::BlaschkeProduct) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_zeros_csv(&mut buf, &b.zeros)?;
    out.files.push(("zeros.csv".into(), bytes_to_string(buf)));
    out.files.push(("product.json".into(), product_to_json(b)? + "\n"));
    Ok(())
}

fn run_construct(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: ConstructParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let con = construct(&form, &p.seeds, p.k, &p.deltas)?;
    let t = targets(&p.deltas, p.k)?;
    let zs = &con.product.zeros;
    let mut violations = 0;
    let rows: Vec<Vec<String>> = (0..zs.len())
        .map(|k| {
            let lt = hol_core::blaschke::log_thinness(zs, k);
            if !(lt > t.log_delta[k]) {
                violations += 1;
            }
            let n = con.iterates.get(k).map(|n| n.to_string()).unwrap_or_default();
            vec![k.to_string(), n, lt.to_string(), t.log_delta[k].to_string()]
        })
        .collect();
    out.files.push(("thinness.csv".into(), csv_text(&["k", "n_k", "log_thinness", "log_delta"], rows)));
    product_files(&mut out, &con.product)?;
    out.assertions.push(Assertion::at_most("thinness_violations", violations as f64, 0.0));
    out.results = json!({ "iterates": con.iterates, "schedule": con.schedule, "factors": zs.len() });
    Ok(out)
}

fn run_orbit_limits(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: OrbitLimitParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let con = construct(&form, &p.seeds, p.k, &None)?;
    let opts = OrbitLimitOptions {
        radius: p.radius,
        n_points: p.n_points,
        eps_const: p.eps_const,
        eps_fit: p.eps_fit,
    };
    let fits = orbit_limit_points(&con.product, &form, &con.iterates, &opts);
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for f in &fits {
        let (w, l) = match f.limit {
            OrbitLimit::UnimodularConstant { lambda } => (None, lambda),
            OrbitLimit::RotatedInvolution { lambda, w } => (Some(w), lambda),
        };
        rows.push(vec![
            f.n.to_string(),
            w.map(|w| w.re.to_string()).unwrap_or_default(),
            w.map(|w| w.im.to_string()).unwrap_or_default(),
            l.re.to_string(),
            l.im.to_string(),
            f.h2_distance.to_string(),
        ]);
        // residuals below the smallest double are stored as 0 and have no log
        if f.h2_distance > 0.0 {
            plot.push(vec![f.n as f64, f.h2_distance.log10()]);
        }
    }
    out.files.push((
        "orbit_limits.csv".into(),
        csv_text(&["n", "fitted_w_re", "fitted_w_im", "fitted_lambda_re", "fitted_lambda_im", "h2_residual"], rows),
    ));
    out.plot_data.insert(
        "orbit-convergence".into(),
        PlotTable { columns: vec!["n".into(), "log10_residual".into()], rows: plot },
    );
    let last = fits.last().map_or(f64::INFINITY, |f| f.h2_distance);
    let first = fits.first().map_or(f64::INFINITY, |f| f.h2_distance);
    out.assertions.push(Assertion::at_most("final_h2_residual", last, c.tolerance_or(p.eps_h2)));
    out.assertions.push(Assertion::holds("residual_decreases", last < first));
    out.results = json!({ "fits": fits });
    Ok(out)
}

fn run_estimate_e(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: EstimateEParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let con = construct(&form, &p.seeds, p.k, &None)?;
    let opts = EstimateEOptions {
        eps_e: p.eps_e,
        subdisc: p.subdisc,
        min_distinct: p.min_distinct,
    };
    let clusters = estimate_E(&con.product, &form, -p.window..=p.window, &opts);
    let seeds: Vec<HalfPlanePoint> = disc_points(&p.seeds)?.iter().map(|s| s.chart()).collect();
    let mut worst = 0.0f64;
    let rows: Vec<Vec<String>> = clusters
        .iter()
        .map(|cl| {
            let u = HalfPlanePoint::from_disc(cl.center);
            let d = form
                .reduce_chart(&u)
                .map(|(_, r)| seeds.iter().map(|s| r.rho(s)).fold(f64::INFINITY, f64::min))
                .unwrap_or(f64::INFINITY);
            worst = worst.max(d);
            vec![
                cl.center.re.to_string(),
                cl.center.im.to_string(),
                cl.hits.to_string(),
                cl.distinct_zeros.to_string(),
                d.to_string(),
            ]
        })
        .collect();
    out.files.push((
        "clusters.csv".into(),
        csv_text(&["re", "im", "hits", "distinct_zeros", "rho_to_seed_orbit"], rows),
    ));
    out.assertions.push(Assertion::at_least("clusters_found", clusters.len() as f64, 1.0));
    out.assertions.push(Assertion::at_most("max_rho_to_orbit", worst, c.tolerance_or(p.eps_e)));
    out.results = json!({ "clusters": clusters });
    Ok(out)
}

fn set_points(form: &NonEllipticNormalForm, set: &SetSpec) -> Result<Vec<DiscPoint>, CliError> {
    Ok(match set {
        SetSpec::Points { points } => disc_points(points)?,
        SetSpec::Orbit { seeds, n } => {
            let mut pts = Vec::new();
            for s in disc_points(seeds)? {
                for k in -n..=*n {
                    if let Ok(d) = DiscPoint::new(form.iterate_eval(k, s.value())) {
                        pts.push(d);
                    }
                }
            }
            pts
        }
    })
}

fn run_span(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: SpanParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let pts = set_points(&form, &p.set)?;
    let opts = SpanOptions {
        subdisc: p.subdisc,
        grid_radius: p.grid_radius,
        grid_points: p.grid_points,
    };
    let cls = span_classification(&pts, p.blaschke_intent, &form, &opts)?;
    let json_text = classification_to_json(&cls)?;
    let summary: serde_json::Value = serde_json::from_str(&json_text)?;
    out.files.push(("classification.json".into(), json_text + "\n"));
    if let Some(e) = &p.expect {
        out.assertions.push(Assertion::holds("expected_case", summary["case"] == json!(e)));
    }
    if let Some(k) = cls.check {
        out.assertions.push(Assertion::at_most("gamma_modulus_error", k.gamma_modulus_error, c.tolerance_or(1e-8)));
    }
    out.results = json!({
        "case": summary["case"],
        "gamma": summary["gamma"],
        "residuals": summary["residuals"],
        "not_phi_invariant": cls.not_phi_invariant,
    });
    Ok(out)
}

fn run_eig_blaschke(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: BlaschkeParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let n = p.n_orbit.unwrap_or(c.n_tile_or(DEFAULT_BLASCHKE_ORBIT));
    let seeds = disc_points(&p.seeds)?;
    let e = blaschke_eigenvector(&form, &seeds, n)?;
    product_files(&mut out, &e.product)?;
    let charts: Vec<HalfPlanePoint> = seeds.iter().map(|s| s.chart()).collect();
    let orbit = blaschke_condition_orbit(&form, &charts, n as usize, true)?;
    let rows = orbit
        .partial_sums
        .iter()
        .map(|s| vec![s.n as f64, s.partial_sum, s.majorant])
        .collect::<Vec<_>>();
    if let OrbitVerdict::AlwaysBlaschke { .. } = orbit.verdict {
        let over = orbit.partial_sums.iter().filter(|s| s.partial_sum > s.majorant).count();
        out.assertions.push(Assertion::at_most("partial_sums_over_majorant", over as f64, 0.0));
    }
    out.plot_data.insert(
        "blaschke-partials".into(),
        PlotTable { columns: vec!["N".into(), "partial_sum".into(), "majorant".into()], rows },
    );
    out.assertions.push(Assertion::at_most("gamma_modulus_error", e.gamma_modulus_error, c.tolerance_or(1e-6)));
    out.assertions.push(Assertion::at_most("gamma_drift", e.gamma_drift, p.max_drift));
    out.results = json!({
        "gamma": c_json(e.gamma),
        "gamma_modulus_error": e.gamma_modulus_error,
        "gamma_drift": e.gamma_drift,
        "reference_point": c_json(e.reference_point),
        "n_orbit": n,
        "factors": e.product.len(),
        "orbit_verdict": orbit.verdict,
    });
    Ok(out)
}

fn modulus(form: &NonEllipticNormalForm, spec: &ModulusSpec, seed: u64) -> Result<BoundaryModulus, CliError> {
    match spec {
        ModulusSpec::Trig { coefficients, terms, amplitude, samples } => {
            let coef = match coefficients {
                Some(c) => c.clone(),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..*terms).map(|_| rng.random_range(-amplitude..=*amplitude)).collect()
                }
            };
            Ok(BoundaryModulus::from_fn(form, *samples, |_, u| {
                1.0 + coef
                    .iter()
                    .enumerate()
                    .map(|(k, ck)| ck * (PI * (k as f64 + 1.0) * u).cos())
                    .sum::<f64>()
            })?)
        }
        ModulusSpec::Samples { arcs } => Ok(BoundaryModulus::new(arcs.clone())?),
        ModulusSpec::Csv { path } => {
            let f = std::fs::File::open(path).map_err(|e| CliError::Io(path.into(), e))?;
            Ok(read_boundary_modulus_csv(f, form)?)
        }
    }
}

fn outer_function(
    c: &ExperimentConfig,
    form: NonEllipticNormalForm,
    p: &OuterParams,
    lambda: f64,
) -> Result<OuterEigenfunction, CliError> {
    let f0 = modulus(&form, &p.f0, c.seed)?;
    let mut f = OuterEigenfunction::new(form, f0, lambda, p.exponent()?, c.n_tile_or(DEFAULT_OUTER_TILES))?;
    f.nodes = p.nodes;
    f.eps_quad = p.eps_quad;
    Ok(f)
}

fn run_eig_outer(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: OuterParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let exponent = p.exponent()?;
    let f = outer_function(c, form, &p, p.lambda)?;
    let tol = c.tolerance_or(1e-6);

    let lp = check_lp_convergence(&f.f0, p.lambda, &form, exponent, p.lp_n)?;
    let rows = lp
        .partial_sums
        .iter()
        .zip(&lp.log_partial_sums)
        .enumerate()
        .map(|(k, (s, l))| vec![k.to_string(), s.to_string(), l.to_string()]);
    out.files.push(("lp_partial_sums.csv".into(), csv_text(&["k", "partial_sum", "log_partial_sum"], rows)));
    out.assertions.push(Assertion::holds("lp_converges", matches!(lp.verdict, LpVerdict::Converges { .. })));

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(1));
    let mut rel = 0.0f64;
    let mut tail = 0.0f64;
    for _ in 0..p.check_points {
        let z = random_disc(&mut rng, p.check_radius);
        let a = outer_eval(&f, DiscPoint::new(z)?)?;
        let b = outer_eval(&f, DiscPoint::new(form.iterate_eval(1, z))?)?;
        rel = rel.max(((b.log_value.re - a.log_value.re).exp() / p.lambda - 1.0).abs());
        tail = tail.max(a.tail_bound.max(b.tail_bound));
    }
    out.assertions.push(Assertion::at_most("eigenrelation_relative_error", rel, tol));

    let g = eigenvalue_gamma(&f)?;
    out.assertions.push(Assertion::at_most("gamma_modulus_error", g.modulus_error, p.max_gamma_error));
    let mut compare = Vec::new();
    for &l in &p.gamma_compare {
        let other = outer_function(c, form, &p, l)?;
        let go = eigenvalue_gamma(&other)?;
        let d = (go.gamma - g.gamma).norm();
        out.assertions.push(Assertion::at_most(&format!("gamma_independent_of_lambda_{l}"), d, tol));
        compare.push(json!({ "lambda": l, "gamma": c_json(go.gamma), "difference": d }));
    }

    let mut buf = Vec::new();
    write_boundary_modulus_csv(&mut buf, &f.f0)?;
    out.files.push(("boundary_modulus.csv".into(), bytes_to_string(buf)));
    let m = 2048;
    let mut rows = Vec::with_capacity(m);
    for j in 0..m {
        let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / m as f64;
        let xi = BoundaryPoint::from_angle(theta);
        if let (Ok(v), Ok(n)) = (
            tile_boundary_modulus(&f.f0, p.lambda, &form, xi),
            form.quotient_index_boundary(xi),
        ) {
            rows.push(vec![theta, v, n as f64]);
        }
    }
    out.plot_data.insert(
        "boundary-modulus-tiling".into(),
        PlotTable { columns: vec!["theta".into(), "f_value".into(), "tile_index".into()], rows },
    );
    out.results = json!({
        "lp": lp,
        "gamma": c_json(g.gamma),
        "gamma_modulus_error": g.modulus_error,
        "gamma_compare": compare,
        "eigenrelation_relative_error": rel,
        "tail_bound": tail,
        "N_tile": f.n_tile,
    });
    Ok(out)
}

fn singular_measure(
    form: &NonEllipticNormalForm,
    p: &SingularParams,
    n_tile: u32,
) -> Result<(AtomicSingularMeasure, AtomicSingularMeasure, f64), CliError> {
    let nu0 = if p.atoms.is_empty() {
        AtomicSingularMeasure::dirac(form.tile_j().arcs[0].point(0.5), 1.0)?
    } else {
        MeasureJson { atoms: p.atoms.clone() }.to_measure()?
    };
    let om = orbit_measure(&nu0, form, n_tile)?;
    let fixed = fixed_point_component(form, p.fixed_mass)?;
    let mut atoms = om.measure.atoms;
    atoms.extend(fixed.atoms);
    Ok((nu0, AtomicSingularMeasure { atoms }, om.tail_bound))
}

fn run_eig_singular(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: SingularParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let n_tile = c.n_tile_or(DEFAULT_OUTER_TILES);
    let (nu0, nu, tail) = singular_measure(&form, &p, n_tile)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut eig = 0.0f64;
    let mut push = 0.0f64;
    let phi = form.iterate(1);
    let mu = pushforward_measure(&nu0, &phi);
    let inv = phi.inverse();
    for _ in 0..p.check_points {
        let z = random_disc(&mut rng, p.check_radius);
        let w = form.iterate_eval(1, z);
        eig = eig.max(((nu.log_inner(w).re - nu.log_inner(z).re).exp() - 1.0).abs());
        push = push.max((nu0.log_inner(inv.apply(z)).re.exp() - mu.log_inner(z).re.exp()).abs());
    }
    let measures = json!({
        "nu0": MeasureJson::from(&nu0),
        "orbit": MeasureJson::from(&nu),
        "pushforward": MeasureJson::from(&mu),
    });
    out.files.push(("measures.json".into(), serde_json::to_string_pretty(&measures)? + "\n"));
    out.assertions.push(Assertion::at_most("eigenrelation_error", eig, 10.0 * tail));
    out.assertions.push(Assertion::at_most("pushforward_identity", push, c.tolerance_or(1e-12)));
    out.results = json!({
        "tail_bound": tail,
        "N_tile": n_tile,
        "total_mass": nu.total_mass(),
        "eigenrelation_error": eig,
        "pushforward_error": push,
    });
    Ok(out)
}

fn run_eig_verify(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: VerifyParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let outer = p
        .outer
        .as_ref()
        .map(|o| outer_function(c, form, o, o.lambda))
        .transpose()?;
    let blaschke = match &p.blaschke {
        Some(b) => {
            let n = b.n_orbit.unwrap_or(DEFAULT_BLASCHKE_ORBIT);
            Some(blaschke_eigenvector(&form, &disc_points(&b.seeds)?, n)?.product)
        }
        None => None,
    };
    let singular = match &p.singular {
        Some(s) if s.atoms.is_empty() && s.fixed_mass == 0.0 => Some(AtomicSingularMeasure::zero()),
        Some(s) => Some(singular_measure(&form, s, c.n_tile_or(DEFAULT_OUTER_TILES))?.1),
        None => None,
    };
    let fac = EigenFactorization { form, outer, blaschke, singular };
    let grid = polar_grid(p.grid_radius, p.rings, p.per_ring);
    let report = combine_factors(&fac, &grid)?;
    out.files.push(("verification.json".into(), serde_json::to_string_pretty(&report)? + "\n"));
    out.assertions.push(Assertion::at_most("modulus_deviation", report.modulus_deviation, c.tolerance_or(1e-4)));
    out.assertions.push(Assertion::at_most("arg_dispersion", report.arg_dispersion, p.max_arg_dispersion));
    out.results = serde_json::to_value(&report)?;
    Ok(out)
}

fn run_domain_plot(c: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p: DomainParams = c.params()?;
    let mut out = outcome(&p)?;
    let form = form_of(c)?;
    let s = p.samples.max(2);
    let mut rows = Vec::new();
    let mut push = |curve: &str, n: i64, pts: Vec<Complex64>| {
        for (i, z) in pts.into_iter().enumerate() {
            rows.push(vec![curve.to_string(), n.to_string(), i.to_string(), z.re.to_string(), z.im.to_string()]);
        }
    };
    // the two edges of the fundamental domain in the upper half-plane chart
    let inner = (0..s).map(|i| (i as f64 + 0.5) / s as f64);
    match form {
        NonEllipticNormalForm::Hyperbolic { alpha } => {
            for (k, l) in [0.0, alpha.ln()].into_iter().enumerate() {
                let pts = inner.clone().map(|u| HalfPlanePoint::from_log_polar(l, PI * u).to_disc()).collect();
                push("domain_edge", k as i64, pts);
            }
        }
        NonEllipticNormalForm::Parabolic { t } => {
            for (k, x) in [0.0, t].into_iter().enumerate() {
                let pts = inner
                    .clone()
                    .map(|u| HalfPlanePoint::from_upper(Complex64::new(x, (0.5 * PI * u).tan())).to_disc())
                    .collect();
                push("domain_edge", k as i64, pts);
            }
        }
    }
    let j = form.tile_j();
    for n in -p.n_max..=p.n_max {
        for arc in &j.arcs {
            let pts = (0..=s)
                .map(|i| form.iterate_boundary(n, arc.point(i as f64 / s as f64)).value())
                .collect();
            push("tile", n, pts);
        }
    }
    let count = rows.len();
    out.files.push(("domain.csv".into(), csv_text(&["curve", "n", "index", "re", "im"], rows)));
    out.results = json!({ "rows": count, "arcs_per_tile": j.arcs.len() });
    Ok(out)
}
