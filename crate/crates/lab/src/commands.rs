//! The six experiment commands.

use std::path::{Path, PathBuf};

use blowup_core::auxiliary::{
    fit_kernel_bounds, phi_eval, phi_laplacian_residual, solve_fundamental_pair, verify_fundamental_bounds,
    KernelConfig, KernelGrid,
};
use blowup_core::damping::{uniform_grid, DampingProfile};
use blowup_core::exponents::{
    classify, compute_f, compute_g, lifespan_law, strauss_exponent, LawForm, LifespanLaw, RegionTag, SpeedFlags,
    SystemParams,
};
use blowup_core::iteration::{
    blowup_threshold_subcritical, critical_base, critical_closed_form, critical_step, envelope_holds,
    geometric_partial_sum, geometric_weight_limit, log_c_lower_bound, subcritical_base, subcritical_closed_form,
    subcritical_logd_bound, subcritical_step, weighted_sum_identity, BaseCase, CriticalConstants, CriticalEnvelope,
    IterationConstants,
};
use blowup_core::simulator::{
    cone_leakage, run_until_blowup, summarize_sweep, verify_critical_inequalities, verify_identities,
    CriticalCheckConfig, FunctionalTrace, LifespanRecord, RunConfig,
};
use blowup_core::Power;
use clap::ValueEnum;

use crate::config::Experiment;
use crate::plot::{write_plot, PlotStyle, Series};
use crate::sweep::parallel_sweep;
use crate::{num, write_csv, LabError, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classify,
    Iterate,
    Kernels,
    Simulate,
    Sweep,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Iterate => "iterate",
            Command::Kernels => "kernels",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }
}

/// Runs `command`, writes its artifacts and `summary.txt` under `out`.
pub fn dispatch(command: Command, exp: &Experiment, out: &Path) -> Result<Report, LabError> {
    std::fs::create_dir_all(out)?;
    let mut report = Report::default();
    report.line(format!("command: {}", command.name()));
    let p = &exp.params;
    report.line(format!("n = {}, p = {}, q = {}, R = {}, eps = {}", p.n, show(&p.p), show(&p.q), p.radius, p.eps));
    match command {
        Command::Classify => classify_cmd(exp, out, &mut report)?,
        Command::Iterate => iterate_cmd(exp, out, &mut report)?,
        Command::Kernels => kernels_cmd(exp, out, &mut report)?,
        Command::Simulate => simulate_cmd(exp, out, &mut report)?,
        Command::Sweep => sweep_cmd(exp, out, &mut report)?,
        Command::Verify => verify_cmd(exp, out, &mut report)?,
    }
    let summary = out.join("summary.txt");
    report.artifacts.push(summary.clone());
    std::fs::write(&summary, report.to_string())?;
    Ok(report)
}

fn show(x: &Power) -> String {
    match x {
        Power::Exact(r) if !r.is_integer() => format!("{} (exact {})", x.to_f64(), r),
        _ => format!("{}", x.to_f64()),
    }
}

fn artifact(report: &mut Report, out: &Path, name: &str) -> PathBuf {
    let path = out.join(name);
    report.artifacts.push(path.clone());
    path
}

fn speeds(exp: &Experiment) -> SpeedFlags {
    SpeedFlags { u1_nonzero: exp.data.u1 > 0.0, v1_nonzero: exp.data.v1 > 0.0 }
}

fn law_text(law: &LifespanLaw) -> String {
    match law.form {
        LawForm::PowerLaw => format!("T <= C eps^({}) [{:?}]", show(&law.exponent), law.basis),
        LawForm::ExponentialLaw => format!("T <= exp(C eps^({})) [{:?}]", show(&law.exponent), law.basis),
    }
}

fn same(a: &Power, b: &Power) -> bool {
    match (a, b) {
        (Power::Exact(x), Power::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
        }
    }
}

fn exactness(p: &SystemParams) -> &'static str {
    if p.p.is_exact() && p.q.is_exact() {
        "exact"
    } else {
        "approx, 1e-12"
    }
}

fn classify_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &exp.params;
    let class = classify(p);
    let (f_pq, f_qp) = class.f_values.clone();
    let mut rows = vec![
        ("F(n,p,q)".to_string(), f_pq.to_f64()),
        ("F(n,q,p)".to_string(), f_qp.to_f64()),
        ("max F".to_string(), class.max_f().to_f64()),
    ];
    report.line(format!("F(n,p,q) = {}", show(&f_pq)));
    report.line(format!("F(n,q,p) = {}", show(&f_qp)));
    report.line(format!("region: {:?}", class.tag));
    if p.n <= 2 {
        let g_pq = compute_g(p.n, &p.p, &p.q)?;
        let g_qp = compute_g(p.n, &p.q, &p.p)?;
        report.line(format!("G(n,p,q) = {}", show(&g_pq)));
        report.line(format!("G(n,q,p) = {}", show(&g_qp)));
        rows.push(("G(n,p,q)".into(), g_pq.to_f64()));
        rows.push(("G(n,q,p)".into(), g_qp.to_f64()));
    }
    let p0 = strauss_exponent(p.n);
    report.line(format!("Strauss exponent p0(n) = {p0}"));
    rows.push(("p0(n)".into(), p0));
    let law = lifespan_law(p, speeds(exp));
    match &law {
        Ok(law) => {
            report.line(format!("lifespan law: {}", law_text(law)));
            rows.push(("law exponent".into(), law.exponent.to_f64()));
        }
        Err(e) => report.line(format!("lifespan law: none ({e})")),
    }
    let path = artifact(report, out, "classify.csv");
    let mut csv_rows: Vec<Vec<String>> = rows.into_iter().map(|(k, v)| vec![k, num(v)]).collect();
    csv_rows.push(vec!["region".into(), format!("{:?}", class.tag)]);
    write_csv(&path, &["quantity", "value"], csv_rows)?;

    let sign = class.max_f().signum_with_tol(1e-12);
    let expected = match sign {
        1 => RegionTag::SubcriticalBlowup,
        0 => RegionTag::CriticalBlowup,
        _ => RegionTag::Unknown,
    };
    report.check("region-consistent", class.tag == expected, format!("tag {:?}, sign of max F {sign}", class.tag));
    let swapped = compute_f(p.n, &p.q, &p.p)?;
    report.check("f-swap", same(&swapped, &f_qp), "F(n,q,p) recomputed from the swapped pair");
    if p.n >= 2 {
        let p0p = Power::Approx(p0);
        let res = compute_f(p.n, &p0p, &p0p)?.to_f64().abs();
        report.check("strauss-root", res < 1e-10, format!("|F(n,p0,p0)| = {res:e}"));
    }
    Ok(())
}

fn iterate_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &exp.params;
    let j_max = exp.config.j_max;
    match classify(p).tag {
        RegionTag::SubcriticalBlowup => subcritical_iterate(exp, j_max, out, report),
        RegionTag::CriticalBlowup => critical_iterate(p, j_max, out, report),
        RegionTag::Unknown => {
            report.check("region", false, "max F < 0: no iteration scheme applies");
            Ok(())
        }
    }
}

fn subcritical_iterate(exp: &Experiment, j_max: usize, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &exp.params;
    let consts = IterationConstants::from_damping(p, &exp.b1, &exp.b2, 1.0, 1.0)?;
    let base = subcritical_base(p, &consts, &BaseCase::Standard)?;
    let mut states = vec![base.clone()];
    while states.len() < j_max {
        let next = subcritical_step(states.last().expect("nonempty"), p, &consts);
        states.push(next);
    }
    let mut closed_ok = true;
    let mut first_bad = None;
    let mut envelope_ok = true;
    for s in &states {
        let c = subcritical_closed_form(p, s.j)?;
        let mut ok = same(&c.b, &s.b) && same(&c.beta, &s.beta);
        if let (Some(a), Some(alpha)) = (c.a.value(), c.alpha.value()) {
            ok &= same(a, &s.a) && same(alpha, &s.alpha);
        }
        if !ok && first_bad.is_none() {
            first_bad = Some(s.j);
        }
        closed_ok &= ok;
        envelope_ok &= envelope_holds(p, s);
    }
    let tag = exactness(p);
    report.line(format!(
        "closed-form equality: {} ({tag})",
        if closed_ok { "PASS" } else { "FAIL" }
    ));
    report.check(
        "closed-form",
        closed_ok,
        match first_bad {
            None => format!("j = 1..={j_max}, {tag}"),
            Some(j) => format!("mismatch at j = {j}"),
        },
    );
    let mut ws_ok = true;
    for j in (3..=j_max).step_by(2) {
        let (l, r) = weighted_sum_identity(&p.p, &p.q, j)?;
        ws_ok &= same(&l, &r);
    }
    report.check("weighted-sum", ws_ok, format!("odd j in 3..={j_max}, {tag}"));
    report.check("envelope", envelope_ok, "b_j, beta_j below their envelopes");
    let mut bound_ok = true;
    let mut checked = 0;
    for j in (1..=j_max).step_by(2).filter(|&j| j as i64 > consts.j0) {
        bound_ok &= subcritical_logd_bound(p, &consts, &base, j)?.holds();
        checked += 1;
    }
    report.check("log-amplitude-bound", bound_ok, format!("{checked} odd j above j0 = {}", consts.j0));
    match blowup_threshold_subcritical(p, &consts) {
        Ok(t) => report.line(format!("blow-up time bound (frame constants = 1): {t}")),
        Err(e) => report.line(format!("blow-up time bound: unavailable ({e})")),
    }
    let path = artifact(report, out, "iterate.csv");
    write_csv(
        &path,
        &["j", "a", "b", "alpha", "beta", "log_D", "log_Delta"],
        states.iter().map(|s| {
            vec![
                s.j.to_string(),
                s.a.to_string(),
                s.b.to_string(),
                s.alpha.to_string(),
                s.beta.to_string(),
                num(s.log_d),
                num(s.log_delta),
            ]
        }),
    )?;
    Ok(())
}

fn critical_iterate(p: &SystemParams, j_max: usize, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &if !p.symmetric() && p.p_f64() < p.q_f64() { p.swapped() } else { p.clone() };
    let consts = CriticalConstants::default();
    let env = CriticalEnvelope::new(p, &consts)?;
    let mut states = vec![critical_base(p, &consts)?];
    while states.len() <= j_max {
        let next = critical_step(states.last().expect("nonempty"), p, &consts)?;
        states.push(next);
    }
    let log_c0 = states[0].log_c;
    let tag = exactness(p);
    let mut closed_ok = true;
    let mut bound_ok = true;
    let mut rows = Vec::new();
    for s in &states {
        let (a, b) = critical_closed_form(p, s.j)?;
        closed_ok &= same(&a, &s.a) && same(&b, &s.b);
        let lb = log_c_lower_bound(p, &env, log_c0, s.j);
        bound_ok &= s.log_c >= lb - 1e-12 * lb.abs().max(1.0);
        rows.push(vec![s.j.to_string(), s.a.to_string(), s.b.to_string(), num(s.log_c), num(lb)]);
    }
    report.line(format!("case: {:?}", states[0].case));
    report.line(format!("closed-form equality: {} ({tag})", if closed_ok { "PASS" } else { "FAIL" }));
    report.check("closed-form", closed_ok, format!("j = 0..={j_max}, {tag}"));
    let pq = p.p_f64() * p.q_f64();
    let gap = (geometric_partial_sum(pq, 60) - geometric_weight_limit(pq)).abs();
    report.check("weight-sum-limit", gap < 1e-12, format!("|S_60 - S| = {gap:e}"));
    report.check("log-amplitude-bound", bound_ok, "log C_j above its closed lower bound");
    let path = artifact(report, out, "iterate.csv");
    write_csv(&path, &["j", "a", "b", "log_C", "log_C_bound"], rows)?;
    Ok(())
}

fn kernels_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &exp.params;
    let k = &exp.config.kernels;
    let n = p.n;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut row = |check: &str, param: String, value: f64, pass: bool| {
        rows.push(vec![check.into(), param, num(value), pass.to_string()])
    };

    let res = phi_laplacian_residual(n, 10.0, 1e-3);
    let ok = res.max_relative < 1e-4;
    row("phi-laplacian", format!("n={n}"), res.max_relative, ok);
    report.check("phi-laplacian", ok, format!("max relative residual {:e} at rho = {}", res.max_relative, res.at));
    if n == 3 {
        let worst = (0..=1000)
            .map(|i| {
                let rho = i as f64 / 100.0;
                let exact = if rho == 0.0 { 4.0 * std::f64::consts::PI } else { 4.0 * std::f64::consts::PI * rho.sinh() / rho };
                (phi_eval(3, rho) / exact - 1.0).abs()
            })
            .fold(0.0, f64::max);
        row("phi-closed-form", "n=3".into(), worst, worst < 1e-8);
        report.check("phi-closed-form", worst < 1e-8, format!("max relative error {worst:e}"));
    }

    let nf = n as f64;
    let grid = KernelGrid::uniform(k.t_max, k.points, vec![0.0, 0.5, 1.0]);
    for (label, e) in [("1/q", p.q_f64()), ("1/p", p.p_f64())] {
        let r = (nf - 1.0) / 2.0 - 1.0 / e;
        let cfg = KernelConfig { lambda0: k.lambda0, radius: p.radius, r, quad_nodes: k.quad_nodes };
        let bounds = fit_kernel_bounds(&cfg, n, &grid)?;
        let ok = bounds.all_positive();
        row("kernel-bounds", format!("r=(n-1)/2-{label}"), r, ok);
        report.line(format!(
            "kernel constants r = {r}: A0 = {:?}, B0 = {:?}, B1 = {:?}, B2 = {:?}",
            bounds.a0, bounds.b0, bounds.b1, bounds.b2
        ));
        report.check(&format!("kernel-bounds-{label}"), ok, format!("r = {r}"));
    }

    let tgrid = uniform_grid(0.0, k.t_end, k.h);
    let mut undamped: f64 = 0.0;
    for &lambda in &k.lambdas {
        let pair = solve_fundamental_pair(&DampingProfile::Zero, lambda, 0.0, &tgrid)?;
        for (i, &t) in pair.t.iter().enumerate() {
            let c = (lambda * t).cosh();
            let s = (lambda * t).sinh() / lambda;
            undamped = undamped.max((pair.y1[i] - c).abs() / c).max((pair.y2[i] - s).abs() / s.max(1e-12));
        }
        for (name, profile) in [("u", &exp.b1), ("v", &exp.b2)] {
            let pair = solve_fundamental_pair(profile, lambda, 0.0, &tgrid)?;
            let rep = verify_fundamental_bounds(&pair, profile)?;
            let ok = rep.passes(1e-6);
            row("fundamental-bounds", format!("{name} lambda={lambda}"), rep.y1_slack.min(rep.y2_slack), ok);
            report.check(
                &format!("fundamental-{name}-lambda-{lambda}"),
                ok,
                format!(
                    "slack y1 {:e}, y2 {:e}; identities {:e}, {:e}",
                    rep.y1_slack, rep.y2_slack, rep.identity_iv.max_residual, rep.identity_v.max_residual
                ),
            );
        }
    }
    row("undamped-pair", "cosh/sinh".into(), undamped, undamped < 1e-8);
    report.check("undamped-pair", undamped < 1e-8, format!("max relative error {undamped:e}"));
    let path = artifact(report, out, "kernels.csv");
    write_csv(&path, &["check", "parameter", "value", "pass"], rows)?;
    Ok(())
}

fn write_trace(trace: &FunctionalTrace, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let path = artifact(report, out, "trace.csv");
    write_csv(
        &path,
        &["t", "U", "V", "N_u", "N_v", "supnorm"],
        (0..trace.len()).map(|k| {
            vec![
                num(trace.t[k]),
                num(trace.u[k]),
                num(trace.v[k]),
                num(trace.n_u[k]),
                num(trace.n_v[k]),
                num(trace.sup[k]),
            ]
        }),
    )?;
    let series = |label: &str, y: &[f64]| Series {
        label: label.into(),
        points: trace.t.iter().copied().zip(y.iter().copied()).collect(),
    };
    let style = PlotStyle {
        title: "functional trace".into(),
        x_label: "t".into(),
        y_label: "U(t), V(t)".into(),
        log_log: false,
        lines: true,
        fit_line: false,
    };
    let svg = artifact(report, out, "trace.svg");
    write_plot(&svg, &[series("U", &trace.u), series("V", &trace.v)], &style)?;
    Ok(())
}

fn write_records(records: &[LifespanRecord], out: &Path, report: &mut Report) -> Result<(), LabError> {
    let path = artifact(report, out, "records.csv");
    write_csv(
        &path,
        &["eps", "Tblow", "detection", "dr", "dt", "steps"],
        records.iter().map(|r| {
            vec![num(r.eps), num(r.t_blow), r.detection.as_str().into(), num(r.dr), num(r.dt), r.steps.to_string()]
        }),
    )
}

fn simulate_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let (rec, trace) = run_until_blowup(&exp.params, &exp.b1, &exp.b2, &exp.data, &exp.grid, &exp.run)?;
    report.line(format!("detection: {}, T = {}", rec.detection.as_str(), rec.t_blow));
    report.line(format!("dr = {}, dt = {}, steps = {}", rec.dr, rec.dt, rec.steps));
    write_records(&[rec], out, report)?;
    write_trace(&trace, out, report)
}

/// Relative tolerance on the fitted slope and on the envelope constant.
pub const SWEEP_TOLERANCE: f64 = 0.25;

fn sweep_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let eps = match &exp.config.eps_list {
        Some(list) if list.len() >= 4 => list.clone(),
        _ => return Err(LabError::Config("sweep needs eps_list with at least 4 amplitudes".into())),
    };
    let law = lifespan_law(&exp.params, speeds(exp))?;
    report.line(format!("lifespan law: {}", law_text(&law)));
    let run = RunConfig { sample_every: usize::MAX, ..exp.run };
    let records = parallel_sweep(&exp.params, &exp.b1, &exp.b2, &exp.data, &exp.grid, &run, &eps)?;
    write_records(&records, out, report)?;
    for r in &records {
        report.line(format!("eps = {}: {} at T = {}", r.eps, r.detection.as_str(), r.t_blow));
    }
    if law.form != LawForm::PowerLaw {
        report.check("law-form", false, "the sweep compares against power laws only");
        return Ok(());
    }
    let kappa = law.exponent.to_f64();
    let summary = match summarize_sweep(&records, kappa) {
        Ok(s) => s,
        Err(e) => {
            report.check("fit", false, e.to_string());
            return Ok(());
        }
    };
    let blown: Vec<(f64, f64)> =
        records.iter().filter(|r| r.detection.blew_up()).map(|r| (r.eps, r.t_blow)).collect();
    let style = PlotStyle {
        title: "lifespan sweep".into(),
        x_label: "eps".into(),
        y_label: "T(eps)".into(),
        log_log: true,
        lines: false,
        fit_line: true,
    };
    let svg = artifact(report, out, "sweep.svg");
    let plot = write_plot(&svg, &[Series { label: "measured lifespans".into(), points: blown }], &style)?;
    report.line(format!("fitted slope = {}, law exponent = {kappa}", summary.fit.slope));
    report.line(format!("envelope constant C = {}", summary.constant));
    report.check(
        "all-blow-up",
        summary.survived.is_empty(),
        format!("{} of {} runs survived", summary.survived.len(), records.len()),
    );
    report.check("monotone", summary.monotone, "T non-increasing in eps up to one dt");
    let rel = summary.slope_error() / kappa.abs();
    report.check("slope", rel <= SWEEP_TOLERANCE, format!("relative slope error {rel}"));
    report.check(
        "envelope",
        summary.envelope_holds(SWEEP_TOLERANCE),
        format!("max T/(C eps^kappa) - 1 = {}", summary.envelope_excess),
    );
    let refit = plot.fit.map(|f| (f.slope - summary.fit.slope).abs()).unwrap_or(f64::INFINITY);
    report.check("plot-refit", refit <= 1e-12, format!("|plot slope - sweep slope| = {refit:e}"));
    Ok(())
}

fn verify_cmd(exp: &Experiment, out: &Path, report: &mut Report) -> Result<(), LabError> {
    let p = &exp.params;
    let dense = RunConfig { sample_every: 1, ..exp.run };
    let (rec, trace) = run_until_blowup(p, &exp.b1, &exp.b2, &exp.data, &exp.grid, &dense)?;
    report.line(format!("detection: {}, T = {}", rec.detection.as_str(), rec.t_blow));
    write_records(&[rec], out, report)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut add = |report: &mut Report, name: &str, pass: bool, value: f64, detail: String| {
        rows.push(vec![name.into(), num(value), pass.to_string()]);
        report.check(name, pass, detail);
    };

    let ids = verify_identities(&trace, p, &exp.b1, &exp.b2)?;
    report.line(format!("ODE residuals: U {:e}, V {:e}", ids.residual_u, ids.residual_v));
    add(report, "ode-identity", ids.identity_excess < 1e-6, ids.identity_excess, format!("excess over the spatial defect {:e}", ids.identity_excess));
    let frame = ids.frame_slack_u.min(ids.frame_slack_v);
    add(report, "frame-inequalities", ids.frame_holds(1e-6), frame, format!("min relative slack {frame:e}"));
    let nontrivial = exp.data.u0 + exp.data.u1 > 0.0 && exp.data.v0 + exp.data.v1 > 0.0;
    if nontrivial {
        let fit = ids.c1_fit.min(ids.k1_fit);
        add(report, "mass-constants", fit > 0.0, fit, format!("C1 = {:e}, K1 = {:e}", ids.c1_fit, ids.k1_fit));
        add(report, "positivity", ids.positive, 0.0, "U, V > 0 for t > 0".into());
    }
    let leak = cone_leakage(p, &exp.b1, &exp.b2, &exp.data, &exp.grid, &exp.run)?;
    let tol = exp.config.cone_tolerance;
    add(report, "cone-leakage", leak < tol, leak, format!("max |u|,|v| outside t + R + 2dr = {leak:e}, tolerance {tol:e}"));

    if p.n >= 2 && classify(p).tag == RegionTag::CriticalBlowup {
        let c = &exp.config.critical;
        let cfg = CriticalCheckConfig {
            lambda0: c.lambda0,
            quad_nodes: c.quad_nodes,
            r2: c.r2,
            sample_every: exp.run.sample_every,
            log_window: (c.log_start, exp.config.horizon.max(c.log_start * 2.0)),
            threshold: exp.run.threshold,
        };
        let crit = verify_critical_inequalities(p, &exp.b1, &exp.b2, &exp.data, &exp.grid, &cfg)?;
        let viol = crit.first_violation();
        add(
            report,
            "critical-bounds",
            viol.is_none(),
            viol.map_or(0.0, |s| s.t),
            match viol {
                None => format!("{} samples", crit.samples.len()),
                Some(s) => format!("first violation at t = {}", s.t),
            },
        );
        let g = crit.log_growth_min.unwrap_or(f64::NAN);
        add(report, "log-growth", g > 0.0, g, format!("min U(t)/log(2t/3) on the window = {g:e}"));
        let path = artifact(report, out, "critical.csv");
        write_csv(
            &path,
            &["t", "U_weighted", "U_bound", "V_weighted", "V_bound"],
            crit.samples.iter().map(|s| {
                vec![num(s.t), num(s.u_functional), num(s.u_bound), num(s.v_functional), num(s.v_bound)]
            }),
        )?;
    }
    let path = artifact(report, out, "verify.csv");
    write_csv(&path, &["check", "value", "pass"], rows)?;
    write_trace(&trace, out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExperimentConfig;

    fn exp(json: &str) -> Experiment {
        ExperimentConfig::from_json(json).unwrap().validate().unwrap()
    }

    #[test]
    fn classify_reports_half() {
        let dir = tempfile::tempdir().unwrap();
        let r = dispatch(Command::Classify, &exp(r#"{"n": 3, "p": 2, "q": 2}"#), dir.path()).unwrap();
        let text = r.to_string();
        assert!(text.contains("F(n,p,q) = 0.5 (exact 1/2)"), "{text}");
        assert!(text.contains("SubcriticalBlowup"));
        assert!(r.passed());
    }

    #[test]
    fn iterate_closed_form_passes() {
        let dir = tempfile::tempdir().unwrap();
        let r = dispatch(Command::Iterate, &exp(r#"{"n": 3, "p": 3, "q": 2, "j_max": 9}"#), dir.path()).unwrap();
        assert!(r.to_string().contains("closed-form equality: PASS (exact)"), "{r}");
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn iterate_unknown_region_fails() {
        let dir = tempfile::tempdir().unwrap();
        let r = dispatch(Command::Iterate, &exp(r#"{"n": 5, "p": 4, "q": 4}"#), dir.path()).unwrap();
        assert_eq!(r.first_failure().unwrap().name, "region");
    }

    #[test]
    fn critical_iterate_passes() {
        let dir = tempfile::tempdir().unwrap();
        let r = dispatch(Command::Iterate, &exp(r#"{"n": 3, "p": "strauss", "q": "strauss"}"#), dir.path()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn sweep_requires_amplitudes() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            dispatch(Command::Sweep, &exp(r#"{"n": 1, "p": 2, "q": 2}"#), dir.path()),
            Err(LabError::Config(_))
        ));
    }
}
