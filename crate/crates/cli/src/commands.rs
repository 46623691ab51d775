//! The five subcommands. Each returns whether its checks passed.

use std::path::Path;

use anyhow::{Context, Result};
use curvepipe::expansion::{
    assemble_solution, f_name, verify_appendix_tables, ExpansionFields, TABLE,
};
use curvepipe::verify::{
    check_compatibility, check_mass_conservation, flow_rates, grouped_residuals,
};
use curvepipe::{DiscPoly, DiscVector};

use crate::config::{field_order, helix_with, RunConfig};
use crate::export::{write_coefficients, write_field, write_table, DiscGrid, Field, Report};
use crate::pipeline::Pipeline;
use crate::plot;

/// Thresholds for `verify`; the first-order compatibility defect is a
/// discretization error and is reported without a threshold.
pub const PRESSURE_TOL: f64 = 1e-8;
pub const MASS_Q0_TOL: f64 = 1e-8;
pub const MASS_Q1_TOL: f64 = 1e-10;
pub const G_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Lowest order of each problem returned by `grouped_residuals`.
const PROBLEM_ORDER: [usize; 5] = [0, 1, 1, 2, 2];

pub struct Options<'a> {
    pub out: &'a Path,
    pub order: usize,
    pub steady: bool,
}

fn create(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn scalar<'a>(f: &'a ExpansionFields<f64>, name: &str) -> Option<&'a DiscPoly<f64>> {
    match name {
        "u1_0" => Some(&f.u1_0),
        "u1_1" => Some(&f.u1_1),
        "u1_2" => Some(&f.u1_2),
        "p2" => Some(&f.p2),
        "p3" => Some(&f.p3),
        _ => None,
    }
}

fn vector<'a>(f: &'a ExpansionFields<f64>, name: &str) -> Option<&'a DiscVector<f64>> {
    match name {
        "U1" => Some(&f.transverse1),
        "U2" => Some(&f.transverse2),
        _ => None,
    }
}

/// Cosine amplitude of the first Fourier mode of `u1_1` at `s3 = 1/2`.
pub fn skew_amplitude(f: &ExpansionFields<f64>) -> f64 {
    f.u1_1.polar().on_circle(&0.5).mode(1).0
}

fn pressure_table(p: &Pipeline, out: &Path) -> Result<()> {
    let rows: Vec<Vec<f64>> = (0..p.grid.len())
        .map(|i| {
            vec![
                p.grid.node(i),
                p.wall.r[i],
                p.wall.dr_dt[i],
                p.frames[i].kappa,
                p.frames[i].tau,
                p.pressure.p0.p[i],
                p.pressure.p1.p[i],
                p.pressure.p02.p[i],
            ]
        })
        .collect();
    write_table(
        &out.join("pressure.csv"),
        &["s1", "R", "dR_dt", "kappa", "tau", "p0", "p1", "p02"],
        &rows,
    )
}

/// Sampled fields, coefficients, plots and the assembled solution at the
/// configured stations.
pub fn fields(cfg: &RunConfig, p: &Pipeline, opts: &Options) -> Result<()> {
    create(opts.out)?;
    pressure_table(p, opts.out)?;
    let grid = DiscGrid { n: cfg.grid.n_disc };
    let names: Vec<&str> = cfg
        .output
        .fields
        .iter()
        .map(String::as_str)
        .filter(|n| field_order(n) <= opts.order)
        .collect();
    for i in p.station_indices(cfg.output.stations.as_deref()) {
        let dir = opts.out.join(format!("station_{i:03}"));
        create(&dir)?;
        let f = p.fields(i)?;
        let s1 = p.grid.node(i);
        let mut coeffs: Vec<(&str, &str, &DiscPoly<f64>)> = Vec::new();
        for name in &names {
            let title = format!("{name} at s1 = {s1:.4}");
            if let Some(v) = vector(&f, name) {
                write_field(&dir.join(format!("{name}.csv")), grid, &Field::Vector(v))?;
                plot::write(
                    &dir.join(format!("{name}.svg")),
                    &plot::quiver(&title, grid, v),
                )?;
                coeffs.push((name, "2", &v.c2));
                coeffs.push((name, "3", &v.c3));
            } else if let Some(u) = scalar(&f, name) {
                write_field(&dir.join(format!("{name}.csv")), grid, &Field::Scalar(u))?;
                plot::write(
                    &dir.join(format!("{name}.svg")),
                    &plot::heatmap(&title, grid, u),
                )?;
                coeffs.push((name, "-", u));
            }
        }
        write_coefficients(&dir.join("coefficients.csv"), &coeffs)?;

        let frame = p.frames[i];
        let sol = assemble_solution(
            cfg.eps,
            &f,
            frame,
            p.pressure.p0.p[i],
            p.pressure.p1.p[i],
            opts.order,
        )?;
        let r = p.wall.r[i];
        let rows: Vec<Vec<f64>> = grid
            .points()
            .into_iter()
            .map(|(s3, s2, z2, z3)| {
                let x = frame.position.coords + cfg.eps * r * (z2 * frame.n + z3 * frame.b);
                let u = sol.velocity_world(z2, z3);
                vec![
                    s3,
                    s2,
                    z2,
                    z3,
                    x.x,
                    x.y,
                    x.z,
                    u.x,
                    u.y,
                    u.z,
                    sol.pressure(z2, z3),
                ]
            })
            .collect();
        write_table(
            &dir.join("solution.csv"),
            &[
                "s3", "s2", "z2", "z3", "x", "y", "z", "u_x", "u_y", "u_z", "p",
            ],
            &rows,
        )?;

        let s = p.station(i);
        let mut info = Report::default();
        info.push_num("s1", s1);
        info.push_num("R", s.r);
        info.push_num("dR_dt", s.r_t);
        info.push_num("kappa", s.kappa);
        info.push_num("tau", s.tau);
        info.push_num("dp0", s.dp0);
        info.push("order", opts.order);
        info.push("u1_0.modes", format!("{:?}", f.u1_0.polar().active_modes()));
        info.push("u1_1.modes", format!("{:?}", f.u1_1.polar().active_modes()));
        info.push_num("u1_1.cos1_at_half_radius", skew_amplitude(&f));
        info.push(
            "U1.azimuthal_zero",
            f.transverse1.azimuthal_part().is_zero(),
        );
        info.push_num(
            "U1.boundary_mean",
            f.transverse1.radial_part().restrict_to_boundary().mode(0).0,
        );
        info.push_num(
            "U2.azimuthal_max_coeff",
            f.transverse2.azimuthal_part().max_abs_coeff(),
        );
        info.write(&dir.join("station.txt"))?;
    }
    Ok(())
}

/// Conservation, compatibility and residual checks over every node.
pub fn verify(p: &Pipeline, opts: &Options) -> Result<bool> {
    create(opts.out)?;
    let n = p.grid.len();
    let all: Vec<ExpansionFields<f64>> = (0..n).map(|i| p.fields(i)).collect::<Result<_>>()?;
    let mut report = Report::default();
    let mut failed: Vec<String> = Vec::new();
    let mut gate = |report: &mut Report, key: &str, value: f64, tol: f64| {
        report.push_num(key, value);
        if value.is_nan() || value > tol {
            failed.push(key.to_string());
        }
    };
    report.push("mode", format!("{:?}", p.mode).to_lowercase());
    report.push("order", opts.order);
    report.push("nodes", n);
    report.push_num("time", p.wall.t);
    report.push_num("geometry.max_eps_kappa_r", p.stretch);

    let [r0, r1, r2] = p.pressure.residuals(&p.wall, &p.fluid);
    gate(&mut report, "pressure.p0_residual", r0, PRESSURE_TOL);
    gate(&mut report, "pressure.p1_residual", r1, PRESSURE_TOL);
    gate(&mut report, "pressure.p02_residual", r2, PRESSURE_TOL);

    let flow = flow_rates(&all, &p.wall.r);
    let mass = check_mass_conservation(&p.wall, &p.pressure, &p.fluid);
    gate(&mut report, "mass.q0_max", mass.max_q0(), MASS_Q0_TOL);
    gate(&mut report, "mass.q1_max", mass.max_q1(), MASS_Q1_TOL);

    let compat = check_compatibility(&p.wall, &p.pressure, &p.fluid, &p.frames, &p.body);
    report.push_num("compat.u1_max", compat.max_u1());
    report.push_num("compat.spacing", compat.spacing);
    gate(&mut report, "compat.g_max", compat.max_g(), G_TOL);

    let mut worst = [0.0f64; 5];
    let mut names = [""; 5];
    let mut per_node = Vec::with_capacity(n);
    for (i, f) in all.iter().enumerate() {
        let checks = grouped_residuals(&p.station(i), f)?;
        let mut node_worst = 0.0f64;
        for (k, c) in checks.iter().enumerate() {
            if PROBLEM_ORDER[k] > opts.order {
                continue;
            }
            let rel = c.interior.max(c.boundary) / c.scale.max(1.0);
            worst[k] = worst[k].max(rel);
            names[k] = c.problem;
            node_worst = node_worst.max(rel);
        }
        per_node.push(vec![p.grid.node(i), compat.u1[i], compat.g[i], node_worst]);
    }
    for k in 0..5 {
        if PROBLEM_ORDER[k] <= opts.order {
            gate(
                &mut report,
                &format!("residual.{}", names[k].replace(' ', "_")),
                worst[k],
                RESIDUAL_TOL,
            );
        }
    }
    report.push("failed", failed.join(","));
    let pass = failed.is_empty();
    report.push("status", if pass { "pass" } else { "fail" });
    report.write(&opts.out.join("report.txt"))?;

    write_table(
        &opts.out.join("checks.csv"),
        &[
            "s1",
            "u1_compatibility",
            "g_integral",
            "max_relative_residual",
        ],
        &per_node,
    )?;
    let mass_rows: Vec<Vec<f64>> = (0..mass.q0.len())
        .map(|k| vec![p.grid.node(k + 1), mass.q0[k], mass.q1[k]])
        .collect();
    write_table(
        &opts.out.join("mass.csv"),
        &["s1", "dQ0_ds_plus_dA_dt", "dQ1_ds"],
        &mass_rows,
    )?;
    let flow_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            vec![
                p.grid.node(i),
                flow.q[0][i],
                flow.q[1][i],
                flow.q[2][i],
                flow.area[i],
            ]
        })
        .collect();
    write_table(
        &opts.out.join("flow.csv"),
        &["s1", "Q0", "Q1", "Q2", "A"],
        &flow_rows,
    )?;
    Ok(pass)
}

/// Tabulated coefficients checked against the elimination solve.
pub fn tables(out: &Path) -> Result<bool> {
    create(out)?;
    let report = verify_appendix_tables()?;
    let mut w = csv::Writer::from_path(out.join("tables.csv"))?;
    let mut header = vec!["unknown".to_string()];
    header.extend((0..10).map(f_name));
    w.write_record(&header)?;
    for entry in TABLE {
        let mut row = vec![entry.unknown.to_string()];
        row.extend(entry.coefficients().iter().map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut r = Report::default();
    r.push("entries", report.checks.len());
    r.push(
        "missing",
        report
            .missing
            .iter()
            .map(|u| u.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    r.push(
        "mismatches",
        report
            .mismatches()
            .map(|c| c.unknown.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let pass = report.all_match();
    r.push("status", if pass { "pass" } else { "fail" });
    r.write(&out.join("tables.txt"))?;
    Ok(pass)
}

/// Curvature, torsion and `eps` grid evaluated at the middle station.
pub fn sweep(cfg: &RunConfig, opts: &Options) -> Result<()> {
    create(opts.out)?;
    let length = cfg.curve().context("geometry")?.length();
    let one = |v: &Vec<f64>, default: f64| {
        if v.is_empty() {
            vec![default]
        } else {
            v.clone()
        }
    };
    let kappas = one(&cfg.sweep.kappa, 0.0);
    let taus = one(&cfg.sweep.tau, 0.0);
    let epss = one(&cfg.sweep.eps, cfg.eps);
    let grid = DiscGrid { n: cfg.grid.n_disc };
    let mut rows = Vec::new();
    for &kappa in &kappas {
        for &tau in &taus {
            let curve = helix_with(kappa, tau, length)?;
            let mut base = cfg.clone();
            // validity is judged per eps below
            base.eps = f64::MIN_POSITIVE;
            let p = Pipeline::run(&base, opts.steady, Some(curve))
                .with_context(|| format!("sweep kappa = {kappa}, tau = {tau}"))?;
            let i = p.station_indices(None)[0];
            let f = p.fields(i)?;
            let flow = flow_rates(std::slice::from_ref(&f), &p.wall.r[i..=i]);
            let azimuthal = f.transverse2.azimuthal_part();
            let circulation = grid.points().iter().fold(0.0f64, |m, (_, _, z2, z3)| {
                m.max(azimuthal.eval_f64(*z2, *z3).abs())
            });
            let rmax = p.wall.max_radius();
            for &eps in &epss {
                let sol = assemble_solution(
                    eps,
                    &f,
                    p.frames[i],
                    p.pressure.p0.p[i],
                    p.pressure.p1.p[i],
                    opts.order,
                )?;
                let speed = grid.points().iter().fold(0.0f64, |m, (_, _, z2, z3)| {
                    m.max(sol.velocity_reference(*z2, *z3).norm())
                });
                let mut q = 0.0;
                let mut e = 1.0;
                for k in 0..=opts.order {
                    q += e * flow.q[k][0];
                    e *= eps;
                }
                let stretch = eps * kappa * rmax;
                rows.push(vec![
                    kappa,
                    tau,
                    eps,
                    stretch,
                    f64::from(u8::from(stretch < 1.0)),
                    skew_amplitude(&f),
                    circulation,
                    flow.q[0][0],
                    flow.q[1][0],
                    flow.q[2][0],
                    q,
                    speed,
                ]);
            }
        }
    }
    write_table(
        &opts.out.join("sweep.csv"),
        &[
            "kappa",
            "tau",
            "eps",
            "eps_kappa_r",
            "valid",
            "u1_1_cos1",
            "U2_azimuthal_max",
            "Q0",
            "Q1",
            "Q2",
            "Q",
            "max_speed",
        ],
        &rows,
    )
}

/// Everything `fields` and `verify` write.
pub fn solve(cfg: &RunConfig, p: &Pipeline, opts: &Options) -> Result<bool> {
    fields(cfg, p, opts)?;
    verify(p, opts)
}
