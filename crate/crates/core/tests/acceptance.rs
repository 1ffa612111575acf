//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured margins (run with `--nocapture` to see them).

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qes_core::families::{HyperbolicFamily, OscillatorFamily};
use qes_core::sl2::{
    operator_equal, quadratic_combination_matrix, sl2_generators, t_operator_matrix, PolyOperator,
};
use qes_core::spectral::{richardson_order, verify_energies, ObservedOrder};
use qes_core::susy::{build_pair, pt_defect, GeneratingFunction, Partner, SuperpotentialPair};
use qes_core::wavefun::{psi0, psi1, ratio_check, schrodinger_residual, WavefunctionGrid};
use qes_core::{eval_jet, linspace, parse, EvalError, ExprAst, Grid};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pair_from_expr(src: &str, x0: f64, eps: Option<f64>) -> SuperpotentialPair {
    let ast = parse(src).unwrap_or_else(|e| panic!("cannot parse {src:?}: {e}"));
    let gen = GeneratingFunction::new(Arc::new(ast), x0)
        .unwrap_or_else(|e| panic!("bad generating function {src:?}: {e}"));
    build_pair(gen, eps).unwrap_or_else(|e| panic!("cannot build pair for {src:?}: {e}"))
}

fn pair_from_oscillator(fam: &OscillatorFamily) -> SuperpotentialPair {
    let gen = fam.as_generating_function().unwrap();
    build_pair(gen, Some(fam.eps())).unwrap()
}

fn pair_from_hyperbolic(fam: &HyperbolicFamily) -> SuperpotentialPair {
    let gen = fam.as_generating_function().unwrap();
    build_pair(gen, Some(fam.eps())).unwrap()
}

/// Relative spread of `a/b` around its median over safely nonzero nodes.
fn ratio_constancy(oracle: &[Complex64], pipeline: &[Complex64]) -> f64 {
    let maxp = pipeline.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let qs: Vec<Complex64> = oracle
        .iter()
        .zip(pipeline)
        .filter(|(_, p)| p.norm() > 1e-8 * maxp)
        .map(|(o, p)| o / p)
        .collect();
    assert!(qs.len() > 10, "criterion helper: too few comparable nodes");
    let median = |mut xs: Vec<f64>| -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs[xs.len() / 2]
    };
    let med = c(
        median(qs.iter().map(|q| q.re).collect()),
        median(qs.iter().map(|q| q.im).collect()),
    );
    qs.iter().map(|q| (q - med).norm()).fold(0.0, f64::max) / med.norm()
}

fn max_im_of_targets(report: &qes_core::spectral::EnergyReport) -> f64 {
    report.targets.iter().map(|t| t.im_abs).fold(0.0, f64::max)
}

fn max_err_of_targets(report: &qes_core::spectral::EnergyReport) -> f64 {
    report.targets.iter().map(|t| t.abs_err).fold(0.0, f64::max)
}

#[test]
fn criterion_1_harmonic_reduction() {
    let started = Instant::now();
    let pair = pair_from_expr("x", 0.0, Some(1.0));
    let pp = pair.partner_potentials();

    let mut vgap = 0.0f64;
    for x in linspace(-12.0, 12.0, 201) {
        let expect = c(x * x / 4.0 - 0.5, 0.0);
        vgap = vgap.max((pp.vplus(x).unwrap() - expect).norm());
    }
    assert!(
        vgap <= 1e-12,
        "criterion 1: FAIL - V+ differs from x^2/4 - 1/2 by {vgap}"
    );

    let grid = Grid::new(-12.0, 12.0, 4801).unwrap();
    let report = verify_energies(&pp.contract(Partner::Plus), &[0.0, 1.0], &grid, 5e-4, 1e-6)
        .expect("spectrum run");
    assert!(
        report.pass,
        "criterion 1: FAIL - spectrum missed a target: {:?}",
        report.targets
    );
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "criterion 1: FAIL - runtime {elapsed:?} exceeds 5 s"
    );
    println!(
        "criterion 1: PASS - V+ gap {:.2e}, eigenvalue err {:.2e}, |Im| {:.2e}, runtime {:?}",
        vgap,
        max_err_of_targets(&report),
        max_im_of_targets(&report),
        elapsed
    );
}

#[test]
fn criterion_2_pt_oscillator_reduction() {
    // alpha = 1/2, c = 0 degenerates to V = x^2 - 1 with eigenvalues {0, 2}.
    let fam = OscillatorFamily::pt_oscillator(0.5, 0.0).unwrap();
    assert_eq!(fam.eps(), 2.0);
    let mut vgap = 0.0f64;
    for x in linspace(-8.0, 8.0, 201) {
        vgap = vgap.max((fam.potential(x) - c(x * x - 1.0, 0.0)).norm());
    }
    assert!(
        vgap <= 1e-12,
        "criterion 2: FAIL - m=0 potential differs from x^2 - 1 by {vgap}"
    );
    let pair = pair_from_oscillator(&fam);
    let pp = pair.partner_potentials();
    let grid = Grid::new(-8.0, 8.0, 4801).unwrap();
    let harmonic = verify_energies(&pp.contract(Partner::Plus), &[0.0, 2.0], &grid, 5e-4, 1e-6)
        .expect("spectrum run");
    assert!(
        harmonic.pass,
        "criterion 2: FAIL - harmonic reduction targets: {:?}",
        harmonic.targets
    );

    // alpha = 0.75, c = 0.5: two known levels at {0, 3}.
    let shifted = OscillatorFamily::pt_oscillator(0.75, 0.5).unwrap();
    assert_eq!(shifted.eps(), 3.0);
    let pair = pair_from_oscillator(&shifted);
    let pp = pair.partner_potentials();
    let complex_run = verify_energies(&pp.contract(Partner::Plus), &[0.0, 3.0], &grid, 1e-3, 1e-6)
        .expect("spectrum run");
    assert!(
        complex_run.pass && max_im_of_targets(&complex_run) <= 1e-3,
        "criterion 2: FAIL - shifted oscillator targets: {:?}",
        complex_run.targets
    );
    println!(
        "criterion 2: PASS - reduction gap {:.2e}, eigenvalue errs {:.2e}/{:.2e}",
        vgap,
        max_err_of_targets(&harmonic),
        max_err_of_targets(&complex_run)
    );
}

#[test]
fn criterion_3_oscillator_family() {
    // Residual windows and the m = 3 spectral grid are pinned where the
    // fourth-order stencil and the 3-point eigenvalue error can resolve
    // the stated tolerances at all in f64; the tolerances themselves are
    // identical for all three members.
    struct Case {
        m: usize,
        residual_half_width: f64,
        spectrum_n: usize,
        spectrum_half_width: f64,
    }
    let cases = [
        Case {
            m: 1,
            residual_half_width: 8.0,
            spectrum_n: 4801,
            spectrum_half_width: 8.0,
        },
        Case {
            m: 2,
            residual_half_width: 2.0,
            spectrum_n: 4801,
            spectrum_half_width: 8.0,
        },
        Case {
            m: 3,
            residual_half_width: 1.5,
            spectrum_n: 76801,
            spectrum_half_width: 9.0,
        },
    ];
    for case in &cases {
        let m = case.m;
        let fam = OscillatorFamily::new(m, 2.0, 1.0).unwrap();
        let pair = pair_from_oscillator(&fam);
        let pp = pair.partner_potentials();
        let vplus = pp.contract(Partner::Plus);

        // Closed-form potential vs the generic pipeline.
        let mut vgap = 0.0f64;
        for x in linspace(-6.0, 6.0, 201) {
            let oracle = fam.potential(x);
            let generic = pp.vplus(x).unwrap();
            vgap = vgap.max((oracle - generic).norm() / (1.0 + oracle.norm()));
        }
        assert!(
            vgap <= 1e-10,
            "criterion 3: FAIL - m={m} oracle V+ mismatch {vgap}"
        );

        // PT symmetry about the origin.
        let xs = linspace(-6.0, 6.0, 201);
        let defect = pt_defect(&vplus, 0.0, &xs).unwrap();
        assert!(
            defect <= 1e-12,
            "criterion 3: FAIL - m={m} PT defect {defect}"
        );

        // Schroedinger residuals of both constructed eigenstates.
        let w = case.residual_half_width;
        let rgrid = Grid::new(-w, w, 4001).unwrap();
        let p0 = psi0(&pair, &rgrid).unwrap();
        let p1 = psi1(&pair, &rgrid).unwrap();
        let r0 = schrodinger_residual(&vplus, &p0).unwrap();
        let r1 = schrodinger_residual(&vplus, &p1).unwrap();
        assert!(
            r0 <= 1e-6 && r1 <= 1e-6,
            "criterion 3: FAIL - m={m} residuals {r0:.2e}/{r1:.2e} on [-{w}, {w}]"
        );

        // Spectral membership of {0, eps = 2}.
        let sgrid = Grid::new(
            -case.spectrum_half_width,
            case.spectrum_half_width,
            case.spectrum_n,
        )
        .unwrap();
        let report = verify_energies(&vplus, &[0.0, 2.0], &sgrid, 5e-4, 1e-6).unwrap();
        assert!(
            report.pass,
            "criterion 3: FAIL - m={m} spectrum: {:?}",
            report.targets
        );

        // psi1/psi0 is proportional to the gauge variable z(x).
        let ggrid = Grid::new(-6.0, 6.0, 16001).unwrap();
        let q0 = psi0(&pair, &ggrid).unwrap();
        let q1 = psi1(&pair, &ggrid).unwrap();
        let zdev = ratio_check(&q1, &q0, &|x: f64| {
            fam.z(x).map_err(|_| EvalError::NonFinite { x })
        })
        .unwrap();
        assert!(
            zdev <= 1e-8,
            "criterion 3: FAIL - m={m} ratio z deviation {zdev}"
        );

        // Closed-form eigenstates agree with the pipeline up to a constant.
        for (level, pipeline) in [(0usize, &q0), (1usize, &q1)] {
            let oracle: Vec<Complex64> =
                ggrid.points().map(|x| fam.psi(x, level).unwrap()).collect();
            let dev = ratio_constancy(&oracle, pipeline.values());
            assert!(
                dev <= 1e-8,
                "criterion 3: FAIL - m={m} level {level} oracle ratio {dev}"
            );
        }

        println!(
            "criterion 3 (m={m}): PASS - V+ gap {vgap:.2e}, PT {defect:.1e}, residuals \
             {r0:.2e}/{r1:.2e}, spectrum err {:.2e}, z-ratio {zdev:.2e}",
            max_err_of_targets(&report)
        );
    }
}

#[test]
fn criterion_4_hyperbolic_family() {
    let regimes: [(f64, Option<f64>); 4] = [
        (0.0, Some(1.0)),
        (0.5, Some(1.0)),
        (1.0, Some(1.0)),
        (2.0, Some(1.0)),
    ];
    for (b, eps) in regimes {
        let fam = HyperbolicFamily::new(1.0, 1.0, b, eps).unwrap();
        let pair = pair_from_hyperbolic(&fam);
        let pp = pair.partner_potentials();
        let vplus = pp.contract(Partner::Plus);

        let mut vgap = 0.0f64;
        for x in linspace(-8.0, 8.0, 201) {
            let oracle = fam.potential(x);
            let generic = pp.vplus(x).unwrap();
            vgap = vgap.max((oracle - generic).norm() / (1.0 + oracle.norm()));
        }
        assert!(
            vgap <= 1e-10,
            "criterion 4: FAIL - B={b} oracle V+ mismatch {vgap}"
        );

        // Residuals of the closed-form eigenstates themselves.
        let grid = Grid::new(-6.0, 6.0, 4001).unwrap();
        let energies = [0.0, fam.eps()];
        let mut worst = 0.0f64;
        for level in [0usize, 1] {
            let values: Vec<Complex64> = grid.points().map(|x| fam.psi(x, level)).collect();
            let state = WavefunctionGrid::from_samples(grid, values, energies[level]);
            let oracle_v = |x: f64| -> Result<Complex64, EvalError> { Ok(fam.potential(x)) };
            let r = schrodinger_residual(&oracle_v, &state).unwrap();
            worst = worst.max(r);
        }
        assert!(
            worst <= 1e-6,
            "criterion 4: FAIL - B={b} closed-form residual {worst:.2e}"
        );

        let sgrid = Grid::new(-6.0, 6.0, 4801).unwrap();
        let report = verify_energies(&vplus, &[0.0, fam.eps()], &sgrid, 1e-3, 1e-6).unwrap();
        assert!(
            report.pass,
            "criterion 4: FAIL - B={b} spectrum: {:?}",
            report.targets
        );
        println!(
            "criterion 4 (B={b}): PASS - V+ gap {vgap:.2e}, residual {worst:.2e}, spectrum err {:.2e}",
            max_err_of_targets(&report)
        );
    }

    // Regime continuity: B -> 0+ with eps fixed at A alpha. The rational
    // tail of V equals -eps^2/(..)^2 -> -1/4-ish exactly at the mirror
    // point for every B != 0 (the type-1 -> type-2 transition lives in an
    // O(B)-wide window there), so the potential comparison skips that
    // single node; the eigenstate displays converge everywhere.
    let small = HyperbolicFamily::new(1.0, 1.0, 1e-4, Some(1.0)).unwrap();
    let zero = HyperbolicFamily::new(1.0, 1.0, 0.0, None).unwrap();
    let grid = Grid::new(-6.0, 6.0, 2001).unwrap();
    let mut vdev = 0.0f64;
    for x in grid.points() {
        if x.abs() < grid.h() {
            continue;
        }
        let vs = small.potential(x);
        let vz = zero.potential(x);
        vdev = vdev.max((vs - vz).norm() / (1.0 + vz.norm()));
    }
    assert!(
        vdev <= 1e-3,
        "criterion 4: FAIL - potential continuity at B=1e-4: {vdev}"
    );
    // The first excited state vanishes at the mirror point only for B = 0
    // (for B != 0 its prefactor A sinh + iB never vanishes on the line),
    // so at fixed B the ratio carries an O(1) phase inside
    // |sinh ax| <~ B/tol. Pointwise convergence is checked outside it.
    let window = (small.big_b() / (small.big_a() * 5e-4)).asinh() / small.alpha();
    let kept: Vec<f64> = grid.points().filter(|x| x.abs() >= window).collect();
    let mut worst_psi = 0.0f64;
    for level in [0usize, 1] {
        let a: Vec<Complex64> = kept.iter().map(|&x| small.psi(x, level)).collect();
        let b: Vec<Complex64> = kept.iter().map(|&x| zero.psi(x, level)).collect();
        let dev = ratio_constancy(&a, &b);
        assert!(
            dev <= 1e-3,
            "criterion 4: FAIL - level {level} continuity at B=1e-4: {dev}"
        );
        worst_psi = worst_psi.max(dev);
    }
    println!(
        "criterion 4 (B->0): PASS - potential dev {vdev:.2e}, eigenstate dev {worst_psi:.2e} \
         outside |x| < {window:.3}"
    );
}

#[test]
fn criterion_5_sl2_identity() {
    let degree = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_2a);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = rng.random_range(0.5..4.0);
        let b = rng.random_range(-1.5..1.5);
        let t = t_operator_matrix(a, b, degree).unwrap();
        let combo = quadratic_combination_matrix(a, b, degree).unwrap();
        let report = operator_equal(&t, &combo, 6, 1e-12).unwrap();
        assert!(
            report.equal,
            "criterion 5: FAIL - identity off by {} at a={a}, b={b}",
            report.max_discrepancy
        );
        worst = worst.max(report.max_discrepancy);
    }
    // Wider coefficients at the looser module tolerance.
    for _ in 0..20 {
        let a = rng.random_range(0.5..4.0);
        let b = rng.random_range(-3.0..3.0);
        let t = t_operator_matrix(a, b, degree).unwrap();
        let combo = quadratic_combination_matrix(a, b, degree).unwrap();
        let report = operator_equal(&t, &combo, 6, 1e-11).unwrap();
        assert!(
            report.equal,
            "criterion 5: FAIL - wide-range identity off by {} at a={a}, b={b}",
            report.max_discrepancy
        );
    }

    let (j_plus, j_zero, j_minus) = sl2_generators(1.0, degree).unwrap();
    let neg = c(-1.0, 0.0);
    let comm = |x: &PolyOperator, y: &PolyOperator| {
        x.mul(y)
            .unwrap()
            .add(&y.mul(x).unwrap().scale(neg))
            .unwrap()
    };
    let r1 = operator_equal(&comm(&j_zero, &j_plus), &j_plus, 6, 1e-13).unwrap();
    let r2 = operator_equal(
        &comm(&j_zero, &j_minus),
        &j_minus.clone().scale(neg),
        6,
        1e-13,
    )
    .unwrap();
    // [J+, J-] = -2 J0 for this realization (see the decisions ledger on
    // the sign as printed elsewhere).
    let r3 = operator_equal(
        &comm(&j_plus, &j_minus),
        &j_zero.clone().scale(c(-2.0, 0.0)),
        6,
        1e-13,
    )
    .unwrap();
    assert!(
        r1.equal && r2.equal && r3.equal,
        "criterion 5: FAIL - commutators off by {}/{}/{}",
        r1.max_discrepancy,
        r2.max_discrepancy,
        r3.max_discrepancy
    );

    // T restricted to span{1, z} is exactly diag(0, a).
    let a = 2.7;
    let t = t_operator_matrix(a, -1.3, degree).unwrap();
    assert_eq!(t.entry(0, 0), Complex64::ZERO);
    assert_eq!(t.entry(1, 1), c(a, 0.0));
    for row in 0..=degree {
        if row != 1 {
            assert_eq!(
                t.entry(row, 1),
                Complex64::ZERO,
                "criterion 5: FAIL - T z leaks to degree {row}"
            );
        }
        if row != 0 {
            assert_eq!(t.entry(row, 0), Complex64::ZERO);
        }
    }
    println!(
        "criterion 5: PASS - identity max discrepancy {worst:.2e}, commutators {:.1e}/{:.1e}/{:.1e}",
        r1.max_discrepancy, r2.max_discrepancy, r3.max_discrepancy
    );
}

fn constraint_sup(pair: &SuperpotentialPair, lo: f64, hi: f64) -> f64 {
    let w = pair.w();
    let w1 = pair.w1();
    let mut worst = 0.0f64;
    for x in linspace(lo, hi, 1001) {
        use qes_core::JetFn;
        let res = pair.constraint_residual(x).unwrap();
        let scale = 1.0 + w.jet(x).unwrap().v.norm_sqr() + w1.jet(x).unwrap().v.norm_sqr();
        worst = worst.max(res.norm() / scale);
    }
    worst
}

fn roundtrip_sup(pair: &SuperpotentialPair, lo: f64, hi: f64) -> f64 {
    use qes_core::JetFn;
    let w = pair.w();
    let w1 = pair.w1();
    let guard = 1e-3;
    let mut worst = 0.0f64;
    for x in linspace(lo, hi, 501) {
        if (x - pair.x0()).abs() < guard {
            continue;
        }
        let wv = w.jet(x).unwrap();
        let w1v = w1.jet(x).unwrap();
        let wp = pair.generating().wplus_jet(x).unwrap();
        let sum_gap = ((w1v.v + wv.v) - wp.v).norm() / (1.0 + wp.v.norm());
        let quotient = (wp.d1 - pair.eps()) / wp.v;
        let diff_gap = ((w1v.v - wv.v) - quotient).norm() / (1.0 + quotient.norm());
        worst = worst.max(sum_gap).max(diff_gap);
    }
    worst
}

#[test]
fn criterion_6_property_suites() {
    // Constraint residual and round-trip for every constructed pair.
    let mut pairs: Vec<(String, SuperpotentialPair, f64)> = Vec::new();
    pairs.push(("harmonic".into(), pair_from_expr("x", 0.0, Some(1.0)), 8.0));
    for m in [1usize, 2, 3] {
        let fam = OscillatorFamily::new(m, 2.0, 1.0).unwrap();
        pairs.push((format!("oscillator m={m}"), pair_from_oscillator(&fam), 6.0));
    }
    let m0 = OscillatorFamily::pt_oscillator(0.75, 0.5).unwrap();
    pairs.push(("oscillator m=0".into(), pair_from_oscillator(&m0), 8.0));
    for (b, eps) in [
        (0.0, None),
        (0.5, Some(1.0)),
        (1.0, Some(1.0)),
        (2.0, Some(1.0)),
    ] {
        let fam = HyperbolicFamily::new(1.0, 1.0, b, eps).unwrap();
        pairs.push((format!("hyperbolic B={b}"), pair_from_hyperbolic(&fam), 6.0));
    }

    // 50 random parsed type-1 generating functions.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6_1);
    for k in 0..50 {
        let src = match k % 3 {
            0 => {
                let p = rng.random_range(0.5..3.0);
                let q = rng.random_range(0.0..1.0);
                let r = rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let s = rng.random_range(-0.5..0.5);
                format!("{p}*x + {q}*x^3 + i*({r} + {s}*x^2)")
            }
            1 => {
                let amp = rng.random_range(0.5..2.0);
                let freq = rng.random_range(0.3..1.5);
                let off =
                    rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                format!("{amp}*sinh({freq}*x) + i*{off}")
            }
            _ => {
                let p = rng.random_range(0.5..3.0);
                let r = rng.random_range(1.0..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let s = rng.random_range(-0.5..0.5);
                format!("{p}*x + i*({r} + {s}*cos(x))")
            }
        };
        let eps = rng.random_range(0.5..3.0);
        pairs.push((src.clone(), pair_from_expr(&src, 0.0, Some(eps)), 3.0));
    }

    let mut worst_constraint = 0.0f64;
    let mut worst_roundtrip = 0.0f64;
    for (name, pair, half) in &pairs {
        let res = constraint_sup(pair, -half, *half);
        assert!(
            res <= 1e-9,
            "criterion 6: FAIL - constraint residual {res:.2e} for {name}"
        );
        worst_constraint = worst_constraint.max(res);
        let rt = roundtrip_sup(pair, -half, *half);
        assert!(
            rt <= 1e-10,
            "criterion 6: FAIL - round-trip gap {rt:.2e} for {name}"
        );
        worst_roundtrip = worst_roundtrip.max(rt);
    }

    // Jet derivatives against central differences on random expressions.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6_2);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let mut worst_d1 = 0.0f64;
    let mut worst_d2 = 0.0f64;
    while accepted < 1000 {
        attempts += 1;
        assert!(
            attempts < 100_000,
            "criterion 6: FAIL - random expression sampler starved"
        );
        let ast = random_ast(&mut rng, 6);
        let x: f64 = rng.random_range(-3.0..3.0);
        let h = 1e-5 * (1.0 + x.abs());
        let Some(center) = eval_ok(&ast, x) else {
            continue;
        };
        let Some(minus) = eval_ok(&ast, x - h) else {
            continue;
        };
        let Some(plus) = eval_ok(&ast, x + h) else {
            continue;
        };
        // Avoid singular and FD-hostile draws: huge magnitudes, catastrophic
        // cancellation (|f| >> |f''|), or a derivative jump inside [x-h, x+h]
        // (branch crossing).
        let bounded = [center, minus, plus]
            .iter()
            .all(|j| j.v.norm() <= 1e3 && j.d1.norm() <= 1e3 && j.d2.norm() <= 1e3);
        if !bounded
            || center.v.norm() > 30.0 * (1.0 + center.d2.norm())
            || (plus.d2 - center.d2).norm() > 0.5 * (1.0 + center.d2.norm())
            || (minus.d2 - center.d2).norm() > 0.5 * (1.0 + center.d2.norm())
        {
            continue;
        }
        accepted += 1;
        let fd1 = (plus.v - minus.v) / (2.0 * h);
        let fd2 = (plus.v - 2.0 * center.v + minus.v) / (h * h);
        let e1 = (center.d1 - fd1).norm() / (1.0 + center.d1.norm());
        let e2 = (center.d2 - fd2).norm() / (1.0 + center.d2.norm());
        assert!(
            e1 <= 1e-6,
            "criterion 6: FAIL - d1 vs FD {e1:.2e} for {ast} at x={x}"
        );
        assert!(
            e2 <= 1e-4,
            "criterion 6: FAIL - d2 vs FD {e2:.2e} for {ast} at x={x}"
        );
        worst_d1 = worst_d1.max(e1);
        worst_d2 = worst_d2.max(e2);
    }

    // Discretization order for three reference potentials.
    let mut orders = Vec::new();
    let box_grid = Grid::new(0.0, std::f64::consts::PI, 201).unwrap();
    orders.push((
        "box",
        richardson_order(&|_x: f64| Ok(Complex64::ZERO), 1.0, &box_grid, 1e-9).unwrap(),
    ));
    let harm_grid = Grid::new(-12.0, 12.0, 601).unwrap();
    orders.push((
        "harmonic",
        richardson_order(
            &|x: f64| Ok(c(x * x / 4.0 - 0.5, 0.0)),
            1.0,
            &harm_grid,
            1e-9,
        )
        .unwrap(),
    ));
    let m1 = OscillatorFamily::new(1, 2.0, 1.0).unwrap();
    let m1_pair = pair_from_oscillator(&m1);
    let m1_pp = m1_pair.partner_potentials();
    let m1_grid = Grid::new(-8.0, 8.0, 801).unwrap();
    orders.push((
        "oscillator m=1",
        richardson_order(&m1_pp.contract(Partner::Plus), 0.0, &m1_grid, 1e-9).unwrap(),
    ));
    for (name, order) in &orders {
        match order {
            ObservedOrder::Order(p) => assert!(
                (1.8..=2.2).contains(p),
                "criterion 6: FAIL - {name} order {p}"
            ),
            ObservedOrder::Converged => {
                panic!("criterion 6: FAIL - {name} differences below measurable floor")
            }
        }
    }

    println!(
        "criterion 6: PASS - constraint {worst_constraint:.2e}, round-trip {worst_roundtrip:.2e}, \
         jets d1 {worst_d1:.2e} d2 {worst_d2:.2e} ({attempts} draws), orders {:?}",
        orders
            .iter()
            .map(|(n, o)| match o {
                ObservedOrder::Order(p) => format!("{n}: {p:.2}"),
                ObservedOrder::Converged => format!("{n}: converged"),
            })
            .collect::<Vec<_>>()
    );
}

fn eval_ok(ast: &ExprAst, x: f64) -> Option<qes_core::Jet2> {
    eval_jet(ast, x).ok()
}

fn random_ast(rng: &mut ChaCha8Rng, depth: usize) -> ExprAst {
    use qes_core::expr::{BinOp, Func};
    if depth == 0 || rng.random_range(0..10) < 2 {
        return match rng.random_range(0..4) {
            0 => ExprAst::Literal(c(rng.random_range(-3.0..3.0), 0.0)),
            1 => ExprAst::ImaginaryUnit,
            _ => ExprAst::Var,
        };
    }
    match rng.random_range(0..8) {
        0..=3 => {
            let op = match rng.random_range(0..4) {
                0 => BinOp::Add,
                1 => BinOp::Sub,
                2 => BinOp::Mul,
                _ => BinOp::Div,
            };
            ExprAst::binary(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))
        }
        4 => ExprAst::Neg(Box::new(random_ast(rng, depth - 1))),
        5 => {
            let exponent = match rng.random_range(0..5) {
                0 => c(2.0, 0.0),
                1 => c(3.0, 0.0),
                2 => c(4.0, 0.0),
                3 => c(0.5, 0.0),
                _ => c(-1.0, 0.0),
            };
            ExprAst::Pow {
                base: Box::new(random_ast(rng, depth - 1)),
                exponent,
            }
        }
        _ => {
            let func = [
                Func::Exp,
                Func::Sin,
                Func::Cos,
                Func::Sinh,
                Func::Cosh,
                Func::Tanh,
                Func::Sqrt,
            ][rng.random_range(0..7)];
            ExprAst::Apply {
                func,
                arg: Box::new(random_ast(rng, depth - 1)),
            }
        }
    }
}

#[test]
fn criterion_7_hermitian_degeneration() {
    use qes_core::JetFn;
    // Real generating functions must produce identically real output and
    // reproduce the real-line formulas W, W1 = (w -+ (w' - w'(x0))/w)/2.
    type RealWplus = Box<dyn Fn(f64) -> (f64, f64)>;
    let cases: [(&str, RealWplus); 3] = [
        ("x", Box::new(|x: f64| (x, 1.0))),
        (
            "x + 0.2*x^3",
            Box::new(|x: f64| (x + 0.2 * x * x * x, 1.0 + 0.6 * x * x)),
        ),
        (
            "1.5*sinh(0.7*x)",
            Box::new(|x: f64| (1.5 * (0.7 * x).sinh(), 1.05 * (0.7 * x).cosh())),
        ),
    ];
    let mut worst_im = 0.0f64;
    let mut worst_ref = 0.0f64;
    for (src, real_wplus) in &cases {
        let pair = pair_from_expr(src, 0.0, None);
        let eps = pair.eps();
        let pp = pair.partner_potentials();
        let w = pair.w();
        let w1 = pair.w1();
        for x in linspace(-4.0, 4.0, 101) {
            let wv = w.jet(x).unwrap();
            let w1v = w1.jet(x).unwrap();
            let vp = pp.vplus(x).unwrap();
            let vm = pp.vminus(x).unwrap();
            let im =
                wv.v.im
                    .abs()
                    .max(w1v.v.im.abs())
                    .max(vp.im.abs())
                    .max(vm.im.abs());
            assert!(
                im <= 1e-14,
                "criterion 7: FAIL - imaginary leak {im:.2e} for {src} at x={x}"
            );
            worst_im = worst_im.max(im);
            if x.abs() > 1e-3 {
                let (wp, dwp) = real_wplus(x);
                let reference = 0.5 * (wp - (dwp - eps) / wp);
                let gap = (wv.v.re - reference).abs() / (1.0 + reference.abs());
                assert!(
                    gap <= 1e-12,
                    "criterion 7: FAIL - {src} deviates from the real-line formula by {gap:.2e}"
                );
                worst_ref = worst_ref.max(gap);
            }
        }
    }
    println!(
        "criterion 7: PASS - imaginary parts {worst_im:.1e}, real-formula gap {worst_ref:.2e}"
    );
}
