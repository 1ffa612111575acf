//! The four subcommands: generate, verify, spectrum, sl2.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use qes_core::sl2;
use qes_core::spectral::{richardson_order, verify_energies, ObservedOrder, SpectralError};
use qes_core::susy::{asymptotic_sign_check, pt_defect, Partner, ZeroClass};
use qes_core::wavefun::{
    psi0, psi1, ratio_check, schrodinger_residual, stencil_limited_half_width, DECAY_BOUND,
};
use qes_core::{linspace, ComplexFn1, EvalError, Grid, JetFn};

use crate::config::{FamilyKind, OutputFormat, Run};
use crate::output::{check_entry, columns_as_json, emit_json, provenance, write_csv, CSV_COLUMNS};
use crate::CliError;

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::numerical(e.to_string())
}

fn config_echo(run: &Run, command: &str) -> Value {
    let source = match (&run.family, &run.expression) {
        (Some(FamilyKind::Oscillator(f)), _) => json!({
            "a": f.a(), "b": f.b(), "family": "oscillator", "m": f.m(),
        }),
        (Some(FamilyKind::Hyperbolic(f)), _) => json!({
            "A": f.big_a(), "B": f.big_b(), "alpha": f.alpha(), "family": "hyperbolic",
        }),
        (None, Some(expr)) => json!({ "wplus": expr }),
        (None, None) => Value::Null,
    };
    json!({
        "command": command,
        "eps": run.pair.eps(),
        "grid": { "n": run.grid.len(), "xmax": run.grid.xmax(), "xmin": run.grid.xmin() },
        "source": source,
        "targets": run.targets,
        "tol_eig": run.tol_eig,
        "tol_oracle": run.tol_oracle,
        "tol_res": run.tol_res,
        "x0": run.x0,
    })
}

fn regularization_tag(run: &Run) -> &'static str {
    match run.pair.class() {
        ZeroClass::Type1 { .. } => "type1",
        ZeroClass::Type2 { .. } => "type2",
    }
}

pub fn cmd_generate(run: &Run) -> Result<i32, CliError> {
    let pp = run.pair.partner_potentials();
    let vplus = pp.contract(Partner::Plus);
    let p0 = psi0(&run.pair, &run.grid).map_err(numerical)?;
    let p1 = psi1(&run.pair, &run.grid).map_err(numerical)?;
    let w = run.pair.w();
    let w1 = run.pair.w1();

    let mut rows: Vec<[f64; 11]> = Vec::with_capacity(run.grid.len());
    for (j, x) in run.grid.points().enumerate() {
        let v = vplus.value(x).map_err(numerical)?;
        let wv = w.jet(x).map_err(numerical)?.v;
        let w1v = w1.jet(x).map_err(numerical)?.v;
        let a = p0.values()[j];
        let b = p1.values()[j];
        rows.push([
            x, v.re, v.im, a.re, a.im, b.re, b.im, wv.re, wv.im, w1v.re, w1v.im,
        ]);
    }

    match run.format {
        OutputFormat::Csv => {
            let csv_path = run
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("qes-generate.csv"));
            write_csv(&csv_path, &rows)?;
            let sidecar = json!({
                "eps": run.pair.eps(),
                "normalization": "max-modulus-one",
                "regularization": regularization_tag(run),
                "schema": 1,
                "x0": run.x0,
            });
            let sidecar_path = csv_path.with_extension("json");
            emit_json(Some(&sidecar_path), &sidecar)?;
            eprintln!(
                "wrote {} ({} rows, columns: {}) and {}",
                csv_path.display(),
                rows.len(),
                CSV_COLUMNS.join("|"),
                sidecar_path.display()
            );
        }
        OutputFormat::Json => {
            let doc = json!({
                "columns": columns_as_json(&rows),
                "eps": run.pair.eps(),
                "normalization": "max-modulus-one",
                "regularization": regularization_tag(run),
                "schema": 1,
                "x0": run.x0,
            });
            let path = run
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("qes-generate.json"));
            emit_json(Some(&path), &doc)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(0)
}

/// Relative spread of `oracle / pipeline` around its median, probing only
/// nodes where the pipeline value is safely nonzero.
fn ratio_constancy(oracle: &[Complex64], pipeline: &[Complex64]) -> f64 {
    let maxp = pipeline.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let qs: Vec<Complex64> = oracle
        .iter()
        .zip(pipeline)
        .filter(|(_, p)| p.norm() > 1e-8 * maxp)
        .map(|(o, p)| o / p)
        .collect();
    let median = |mut xs: Vec<f64>| -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs[xs.len() / 2]
    };
    let med = Complex64::new(
        median(qs.iter().map(|q| q.re).collect()),
        median(qs.iter().map(|q| q.im).collect()),
    );
    qs.iter().map(|q| (q - med).norm()).fold(0.0, f64::max) / med.norm()
}

pub fn cmd_verify(run: &Run) -> Result<i32, CliError> {
    let pair = &run.pair;
    let pp = pair.partner_potentials();
    let vplus = pp.contract(Partner::Plus);
    let mut checks: Vec<Value> = Vec::new();

    // Constraint residual, scaled by 1 + |W|^2 + |W1|^2, on 1001 probes.
    let w = pair.w();
    let w1 = pair.w1();
    let mut worst = 0.0f64;
    for x in linspace(run.grid.xmin(), run.grid.xmax(), 1001) {
        let res = pair.constraint_residual(x).map_err(numerical)?;
        let scale = 1.0
            + w.value(x).map_err(numerical)?.norm_sqr()
            + w1.value(x).map_err(numerical)?.norm_sqr();
        worst = worst.max(res.norm() / scale);
    }
    checks.push(check_entry(
        "constraint_residual",
        json!(worst),
        json!(1e-9),
        worst <= 1e-9,
    ));

    // PT defect of V+ about x0.
    let xs = linspace(run.grid.xmin(), run.grid.xmax(), 201);
    let defect = pt_defect(&vplus, run.x0, &xs).map_err(numerical)?;
    checks.push(check_entry(
        "pt_defect_vplus",
        json!(defect),
        json!(1e-10),
        defect <= 1e-10,
    ));

    // Asymptotic signs of Re W and Re W1 at the domain edge.
    let split = pair.split_real_imag();
    let half = 0.5 * (run.grid.xmax() - run.grid.xmin());
    let signs = asymptotic_sign_check(&split, run.x0, half).map_err(numerical)?;
    checks.push(check_entry(
        "asymptotic_signs",
        json!({ "f": signs.f_ok, "f1": signs.f1_ok }),
        json!(true),
        signs.f_ok && signs.f1_ok,
    ));

    // Eigenstates: decay at the boundary and Schroedinger residuals.
    let p0 = psi0(pair, &run.grid).map_err(numerical)?;
    let p1 = psi1(pair, &run.grid).map_err(numerical)?;
    let decay = p0.boundary_decay_ratio().max(p1.boundary_decay_ratio());
    checks.push(check_entry(
        "boundary_decay",
        json!(decay),
        json!(DECAY_BOUND),
        decay < DECAY_BOUND,
    ));
    // Residuals are only measurable where the stencil truncation stays
    // below tolerance; steeply growing potentials shrink that window.
    let full_half = (run.x0 - run.grid.xmin()).min(run.grid.xmax() - run.x0);
    let w = stencil_limited_half_width(&vplus, &p0, run.x0, run.tol_res)
        .map_err(numerical)?
        .min(stencil_limited_half_width(&vplus, &p1, run.x0, run.tol_res).map_err(numerical)?);
    let (r0, r1, used_half) = if w >= full_half {
        (
            schrodinger_residual(&vplus, &p0).map_err(numerical)?,
            schrodinger_residual(&vplus, &p1).map_err(numerical)?,
            full_half,
        )
    } else if w > 16.0 * run.grid.h() {
        let clipped = Grid::new(run.x0 - w, run.x0 + w, run.grid.len())
            .map_err(|e| CliError::config(e.to_string()))?;
        let q0 = psi0(pair, &clipped).map_err(numerical)?;
        let q1 = psi1(pair, &clipped).map_err(numerical)?;
        (
            schrodinger_residual(&vplus, &q0).map_err(numerical)?,
            schrodinger_residual(&vplus, &q1).map_err(numerical)?,
            w,
        )
    } else {
        (f64::INFINITY, f64::INFINITY, 0.0)
    };
    checks.push(check_entry(
        "residual_window_half_width",
        json!(used_half),
        json!("informational"),
        used_half > 16.0 * run.grid.h(),
    ));
    checks.push(check_entry(
        "schrodinger_residual_psi0",
        json!(r0),
        json!(run.tol_res),
        r0 <= run.tol_res,
    ));
    checks.push(check_entry(
        "schrodinger_residual_psi1",
        json!(r1),
        json!(run.tol_res),
        r1 <= run.tol_res,
    ));

    // V- two ways: W^2 + W' against W1^2 - W1' + eps.
    let mut vminus_gap = 0.0f64;
    for x in linspace(run.grid.xmin(), run.grid.xmax(), 201) {
        let direct = pp.vminus(x).map_err(numerical)?;
        let via = pp.vminus_via_w1(x).map_err(numerical)?;
        vminus_gap = vminus_gap.max((direct - via).norm() / (1.0 + direct.norm()));
    }
    checks.push(check_entry(
        "vminus_route_agreement",
        json!(vminus_gap),
        json!(1e-9),
        vminus_gap <= 1e-9,
    ));

    // Family-specific oracles. Eigenstate equivalence runs on its own
    // finer grid: the comparison tolerance is tighter than what the run
    // grid's quadrature can deliver for the fastest-oscillating members.
    let oracle_grid = if run.grid.len() >= 16001 {
        run.grid
    } else {
        Grid::new(run.grid.xmin(), run.grid.xmax(), 16001)
            .map_err(|e| CliError::config(e.to_string()))?
    };
    match &run.family {
        Some(FamilyKind::Oscillator(fam)) => {
            let mut gap = 0.0f64;
            for x in linspace(-6.0, 6.0, 201) {
                let oracle = fam.potential(x);
                let generic = pp.vplus(x).map_err(numerical)?;
                gap = gap.max((oracle - generic).norm() / (1.0 + oracle.norm()));
            }
            checks.push(check_entry(
                "oracle_vplus",
                json!(gap),
                json!(run.tol_oracle),
                gap <= run.tol_oracle,
            ));
            if fam.m() >= 1 {
                let q0 = psi0(pair, &oracle_grid).map_err(numerical)?;
                let q1 = psi1(pair, &oracle_grid).map_err(numerical)?;
                for (level, pipeline) in [(0usize, &q0), (1usize, &q1)] {
                    let oracle: Result<Vec<Complex64>, _> =
                        oracle_grid.points().map(|x| fam.psi(x, level)).collect();
                    let oracle = oracle.map_err(numerical)?;
                    let dev = ratio_constancy(&oracle, pipeline.values());
                    checks.push(check_entry(
                        &format!("oracle_psi{level}_ratio"),
                        json!(dev),
                        json!(1e-8),
                        dev <= 1e-8,
                    ));
                }
                let fam_z = *fam;
                let z = move |x: f64| -> Result<Complex64, EvalError> {
                    Ok(fam_z.z(x).expect("m >= 1 checked"))
                };
                let dev = ratio_check(&q1, &q0, &z).map_err(numerical)?;
                checks.push(check_entry(
                    "gauge_ratio_z",
                    json!(dev),
                    json!(1e-8),
                    dev <= 1e-8,
                ));
            }
        }
        Some(FamilyKind::Hyperbolic(fam)) => {
            let mut gap = 0.0f64;
            for x in linspace(-8.0, 8.0, 201) {
                let oracle = fam.potential(x);
                let generic = pp.vplus(x).map_err(numerical)?;
                gap = gap.max((oracle - generic).norm() / (1.0 + oracle.norm()));
            }
            checks.push(check_entry(
                "oracle_vplus",
                json!(gap),
                json!(run.tol_oracle),
                gap <= run.tol_oracle,
            ));
            let q0 = psi0(pair, &oracle_grid).map_err(numerical)?;
            let q1 = psi1(pair, &oracle_grid).map_err(numerical)?;
            for (level, pipeline) in [(0usize, &q0), (1usize, &q1)] {
                let oracle: Vec<Complex64> =
                    oracle_grid.points().map(|x| fam.psi(x, level)).collect();
                let dev = ratio_constancy(&oracle, pipeline.values());
                checks.push(check_entry(
                    &format!("oracle_psi{level}_ratio"),
                    json!(dev),
                    json!(1e-8),
                    dev <= 1e-8,
                ));
            }
        }
        None => {}
    }

    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let report = json!({
        "checks": checks,
        "command": "verify",
        "pass": pass,
        "provenance": provenance(config_echo(run, "verify")),
        "schema": 1,
    });
    emit_json(run.out.as_deref(), &report)?;
    Ok(if pass { 0 } else { 1 })
}

pub fn cmd_spectrum(run: &Run, order_check: bool) -> Result<i32, CliError> {
    let pp = run.pair.partner_potentials();
    let vplus = pp.contract(Partner::Plus);

    // Dirichlet truncation is only valid once the eigenstates have decayed.
    let p0 = psi0(&run.pair, &run.grid).map_err(numerical)?;
    let p1 = psi1(&run.pair, &run.grid).map_err(numerical)?;
    let decay = p0.boundary_decay_ratio().max(p1.boundary_decay_ratio());
    if decay >= DECAY_BOUND {
        return Err(CliError::config(format!(
            "domain too small: boundary |psi| is {decay:.3e} of its max \
             (needs < {DECAY_BOUND:.0e}); enlarge --xmin/--xmax"
        )));
    }

    let report = verify_energies(&vplus, &run.targets, &run.grid, run.tol_eig, run.tol_res)
        .map_err(numerical)?;
    let mut targets_json = Vec::new();
    for t in &report.targets {
        targets_json.push(json!({
            "abs_err": t.abs_err,
            "im_abs": t.im_abs,
            "iterations": t.iterations,
            "lambda_im": t.lambda.map(|l| l.im),
            "lambda_re": t.lambda.map(|l| l.re),
            "pass": t.pass,
            "residual": t.residual,
            "target": t.target,
        }));
    }

    let mut orders_json = Vec::new();
    let mut orders_ok = true;
    if order_check {
        let n = run.grid.len();
        if !(n - 1).is_multiple_of(4) {
            return Err(CliError::config(format!(
                "--order-check needs n - 1 divisible by 4, got n = {n}"
            )));
        }
        let coarse = Grid::new(run.grid.xmin(), run.grid.xmax(), (n - 1) / 4 + 1)
            .map_err(|e| CliError::config(e.to_string()))?;
        for &t in &run.targets {
            let order = richardson_order(&vplus, t, &coarse, 1e-9).map_err(|e| match e {
                SpectralError::Eval(inner) => numerical(inner),
                other => numerical(other),
            })?;
            let (value, ok) = match order {
                ObservedOrder::Converged => (json!("converged"), true),
                ObservedOrder::Order(p) => (json!(p), (1.8..=2.2).contains(&p)),
            };
            orders_ok &= ok;
            orders_json.push(json!({ "order": value, "pass": ok, "target": t }));
        }
    }

    let pass = report.pass && orders_ok;
    let doc = json!({
        "command": "spectrum",
        "order_checks": orders_json,
        "pass": pass,
        "provenance": provenance(config_echo(run, "spectrum")),
        "schema": 1,
        "targets": targets_json,
    });
    emit_json(run.out.as_deref(), &doc)?;
    Ok(if pass { 0 } else { 1 })
}

pub fn cmd_sl2(a: f64, b: f64, degree: usize, out: Option<&Path>) -> Result<i32, CliError> {
    if a <= 0.0 || a.is_nan() {
        return Err(CliError::config(format!("need a > 0, got {a}")));
    }
    let t = sl2::t_operator_matrix(a, b, degree).map_err(|e| CliError::config(e.to_string()))?;
    let combo = sl2::quadratic_combination_matrix(a, b, degree)
        .map_err(|e| CliError::config(e.to_string()))?;
    let identity = sl2::operator_equal(&t, &combo, degree - 2, 1e-12)
        .map_err(|e| CliError::config(e.to_string()))?;

    let (j_plus, j_zero, j_minus) =
        sl2::sl2_generators(1.0, degree).map_err(|e| CliError::config(e.to_string()))?;
    let minus_one = Complex64::new(-1.0, 0.0);
    let comm = |x: &sl2::PolyOperator, y: &sl2::PolyOperator| {
        x.mul(y)
            .unwrap()
            .add(&y.mul(x).unwrap().scale(minus_one))
            .unwrap()
    };
    let bound = degree - 2;
    let c1 = sl2::operator_equal(&comm(&j_zero, &j_plus), &j_plus, bound, 1e-13).unwrap();
    let c2 = sl2::operator_equal(
        &comm(&j_zero, &j_minus),
        &j_minus.clone().scale(minus_one),
        bound,
        1e-13,
    )
    .unwrap();
    let c3 = sl2::operator_equal(
        &comm(&j_plus, &j_minus),
        &j_zero.clone().scale(Complex64::new(-2.0, 0.0)),
        bound,
        1e-13,
    )
    .unwrap();
    let comm_max = c1
        .max_discrepancy
        .max(c2.max_discrepancy)
        .max(c3.max_discrepancy);
    let comm_ok = c1.equal && c2.equal && c3.equal;

    // T restricted to span{1, z} must be diag(0, a) exactly.
    let zero = Complex64::ZERO;
    let eigen_ok = t.entry(0, 0) == zero
        && t.entry(1, 0) == zero
        && t.entry(0, 1) == zero
        && t.entry(1, 1) == Complex64::new(a, 0.0)
        && (2..=degree).all(|r| t.entry(r, 0) == zero && t.entry(r, 1) == zero);

    let pass = identity.equal && comm_ok && eigen_ok;
    let doc = json!({
        "a": a,
        "b": b,
        "command": "sl2",
        "commutators": {
            "max_residual": comm_max,
            "pass": comm_ok,
            "tolerance": 1e-13,
        },
        "degree": degree,
        "eigen_block": { "pass": eigen_ok, "values": [0.0, a] },
        "identity": {
            "max_discrepancy": identity.max_discrepancy,
            "pass": identity.equal,
            "tolerance": 1e-12,
        },
        "pass": pass,
        "provenance": provenance(json!({ "a": a, "b": b, "command": "sl2", "degree": degree })),
        "schema": 1,
    });
    emit_json(out, &doc)?;
    Ok(if pass { 0 } else { 1 })
}
