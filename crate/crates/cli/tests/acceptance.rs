//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured figures (visible with --nocapture).
//!
//! The heavy grid criteria share a mutex so the per-criterion wall-clock
//! budgets are measured without interference from parallel test threads.

use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use sdevo_cli::config::{
    CheckKind, DataKind, DataSection, ExperimentConfig, FitSection, GridSection, ModelSection,
    ObservableSection, OutputFormat, OutputSection, RateCheckSection, TimesSection,
};
use sdevo_cli::experiment::run_experiment;
use sdevo_cli::report::Verdict;
use sdevo_core::grid::{evolve, make_gaussian, make_random_smooth, GridSpec, RealField};
use sdevo_core::inequalities::{
    balanced_s1, holder_product_ratio, pitt_admissible, pitt_ratio, scaling_exponents, PittParams,
};
use sdevo_core::model::{self, ModelParams};
use sdevo_core::norms::{lm_norm, weighted_lm_norm, NormSpec};
use sdevo_core::rates::{self, Family, RateQuery, Term};

static BIG_GRID: Mutex<()> = Mutex::new(());

fn big_lock() -> MutexGuard<'static, ()> {
    BIG_GRID.lock().unwrap_or_else(|e| e.into_inner())
}

fn params(sigma: f64, delta: f64, n: usize) -> ModelParams {
    ModelParams::new(sigma, delta, n).unwrap()
}

fn gaussian_profile(n: usize, w: f64) -> impl Fn(f64) -> f64 {
    let scale = (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0);
    move |rho: f64| scale * (-w * w * rho * rho / 2.0).exp()
}

fn logspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| a * (b / a).powf(k as f64 / (count - 1) as f64))
        .collect()
}

#[test]
fn criterion_01_multiplier_correctness() {
    let start = Instant::now();
    let p = params(1.0, 0.25, 1);
    // Exact initial values of the kernel pair.
    for xi in [0.0, 0.1, 0.25, 1.0, 5.0] {
        let m = model::multiplier(&p, 0, 0.0, 0.0, xi).unwrap();
        assert_eq!((m.m0.re, m.m0.im, m.m1.norm()), (1.0, 0.0, 0.0));
        let m = model::multiplier(&p, 1, 0.0, 0.0, xi).unwrap();
        assert_eq!((m.m0.norm(), m.m1.re, m.m1.im), (0.0, 1.0, 0.0));
    }
    // 20×10 log lattice spanning both root regimes (double root at 0.25).
    let mut worst = 0.0f64;
    for &xi in &logspace(0.01, 8.0, 20) {
        for &t in &logspace(0.5, 50.0, 10) {
            let (r0, r1) = model::ode_residual(&p, xi, t, 1e-4).unwrap();
            worst = worst.max(r0).max(r1);
            assert!(r0 <= 1e-5 && r1 <= 1e-5, "xi {xi:.3}, t {t:.3}: {r0:.2e}/{r1:.2e}");
        }
    }
    // O(h²) Richardson decrease where truncation dominates rounding.
    let (c0, c1) = model::ode_residual(&p, 2.0, 1.0, 1e-2).unwrap();
    let (f0, f1) = model::ode_residual(&p, 2.0, 1.0, 5e-3).unwrap();
    assert!(f0 <= c0 / 2.5 && f1 <= c1 / 2.5);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:.2?}");
    println!("criterion 01 PASS: max residual {worst:.3e} <= 1e-5, O(h^2) confirmed, {elapsed:.2?}");
}

#[test]
fn criterion_02_root_asymptotics() {
    let start = Instant::now();
    for (sigma, delta) in [(1.0, 0.25), (2.0, 0.5), (1.5, 0.6)] {
        let p = params(sigma, delta, 1);
        let exact = model::characteristic_roots(&p, 1e-3).unwrap().lambda1;
        let (approx, _, regime) = model::root_asymptotics(&p, 1e-3).unwrap();
        assert_eq!(regime, model::Regime::Low);
        let gap = (exact.re / approx.re - 1.0).abs();
        assert!(gap <= 0.02, "sigma {sigma}, delta {delta}: |ratio - 1| = {gap:.4}");
        // Oscillatory regime: Re λ = −|ξ|^{2δ}/2 exactly.
        for xi_factor in [4.0, 40.0] {
            let xi = model::double_root_frequency(&p) * xi_factor;
            let r = model::characteristic_roots(&p, xi).unwrap();
            let b = xi.powf(2.0 * delta);
            assert_eq!(r.lambda1.re + b / 2.0, 0.0);
            assert_eq!(r.lambda2.re + b / 2.0, 0.0);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:.2?}");
    println!("criterion 02 PASS: slow-root ratio within 2% at |xi| = 1e-3, oscillatory Re exact, {elapsed:.2?}");
}

#[test]
fn criterion_03_grid_vs_oracle() {
    let _guard = big_lock();
    let start = Instant::now();
    let times = [1.0, 10.0, 50.0];
    let mut worst = 0.0f64;
    let mut check = |n: usize, nn: usize, l: f64, w: f64, term: Term| {
        let p = params(1.0, 0.25, n);
        let grid = GridSpec::new(n, nn, l).unwrap();
        let data = make_gaussian(grid, w, false).unwrap();
        let zero = RealField::zero(grid);
        for &t in &times {
            let field = match term {
                Term::U0 => evolve(&p, &data, &zero, t, 0, 0.0).unwrap(),
                Term::U1 => evolve(&p, &zero, &data, t, 0, 0.0).unwrap(),
            };
            let grid_norm = lm_norm(&field, 2.0).unwrap();
            let oracle =
                rates::radial_norm_oracle(&p, 0, 0.0, t, term, gaussian_profile(n, w)).unwrap();
            let rel = (grid_norm - oracle).abs() / oracle;
            worst = worst.max(rel);
            assert!(rel <= 1e-3, "n {n} {term:?} t {t}: rel {rel:.3e}");
        }
    };
    check(1, 1 << 21, 300_000.0, 2.0, Term::U0);
    check(1, 1 << 21, 300_000.0, 2.0, Term::U1);
    check(2, 2048, 1000.0, 2.0, Term::U0);
    check(2, 4096, 8000.0, 12.0, Term::U1);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:.2?}");
    println!("criterion 03 PASS: worst grid-vs-oracle relative error {worst:.3e} <= 1e-3, {elapsed:.2?}");
}

#[test]
fn criterion_04_rate_saturation_u0() {
    let _guard = big_lock();
    let start = Instant::now();
    let cfg = ExperimentConfig {
        model: ModelSection { sigma: 1.0, delta: 0.25, n: 1 },
        grid: GridSection { points_per_dim: 2048, half_width: 400.0 },
        data: DataSection {
            u0: DataKind::Gaussian,
            u0_width: 1.0,
            u1: DataKind::Zero,
            u1_width: 1.0,
        },
        // t_end beyond the horizon: the harness clamps to t_IR ≈ 143.7.
        times: TimesSection { t_start: 1.0, t_end: 1e6, count: 28 },
        observables: vec![ObservableSection { i: 0, a: 0.0, norm: NormSpec::Lm { m: 2.0 } }],
        rate_checks: vec![RateCheckSection {
            observable: 0,
            family: Family::Proposition,
            m: 1.0,
            a: 0.0,
            j: 0,
            term: Term::U0,
            kind: CheckKind::Saturation,
            tolerance: 0.05,
        }],
        pitt_checks: vec![],
        fit: FitSection { t_lo: 10.0 },
        output: OutputSection { path: "unused".into(), format: OutputFormat::Csv },
    };
    let report = run_experiment(&cfg).unwrap();
    let fit = report.observables[0].fit.as_ref().unwrap();
    let check = &report.observables[0].checks[0];
    assert!((check.exponent - (-1.0 / 3.0)).abs() < 1e-14);
    assert!((fit.window.1 - report.infrared_horizon).abs() < 1e-9 * report.infrared_horizon);
    assert_eq!(check.verdict, Verdict::Pass, "slope {} vs -1/3 +- 0.05", fit.slope);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:.2?}");
    println!(
        "criterion 04 PASS: fitted u0 slope {:.4} vs -1/3 within 0.05 on [10, {:.1}], {elapsed:.2?}",
        fit.slope, report.infrared_horizon
    );
}

#[test]
fn criterion_05_rate_saturation_u1() {
    let _guard = big_lock();
    let start = Instant::now();
    let base = ExperimentConfig {
        model: ModelSection { sigma: 1.0, delta: 0.25, n: 2 },
        grid: GridSection { points_per_dim: 4096, half_width: 12_000.0 },
        data: DataSection {
            u0: DataKind::Zero,
            u0_width: 1.0,
            u1: DataKind::Gaussian,
            u1_width: 4.0,
        },
        times: TimesSection { t_start: 35.0, t_end: 85.0, count: 12 },
        observables: vec![ObservableSection { i: 0, a: 0.0, norm: NormSpec::Lm { m: 2.0 } }],
        rate_checks: vec![RateCheckSection {
            observable: 0,
            family: Family::Proposition,
            m: 1.0,
            a: 0.0,
            j: 0,
            term: Term::U1,
            kind: CheckKind::Saturation,
            tolerance: 0.05,
        }],
        pitt_checks: vec![],
        fit: FitSection { t_lo: 40.0 },
        output: OutputSection { path: "unused".into(), format: OutputFormat::Csv },
    };
    let report = run_experiment(&base).unwrap();
    let fit = report.observables[0].fit.as_ref().unwrap();
    let check = &report.observables[0].checks[0];
    assert!((check.exponent - (-1.0 / 3.0)).abs() < 1e-14);
    assert_eq!(check.verdict, Verdict::Pass, "slope {} vs -1/3 +- 0.05", fit.slope);
    let gaussian_slope = fit.slope;

    // Moment-zero u1 (û1(0) ≈ 0): the weighted-data mechanism buys a
    // strictly steeper measured slope.
    let mut mz = base.clone();
    mz.data.u1 = DataKind::GaussianMomentZero;
    mz.times.count = 10;
    mz.rate_checks.clear();
    let mz_report = run_experiment(&mz).unwrap();
    let mz_slope = mz_report.observables[0].fit.as_ref().unwrap().slope;
    assert!(
        mz_slope <= gaussian_slope - 0.2,
        "moment-zero slope {mz_slope:.4} not steeper than {gaussian_slope:.4} by 0.2"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime {elapsed:.2?}");
    println!(
        "criterion 05 PASS: u1 slope {gaussian_slope:.4} vs -1/3 within 0.05; moment-zero slope {mz_slope:.4} steeper by {:.2}, {elapsed:.2?}",
        gaussian_slope - mz_slope
    );
}

#[test]
fn criterion_06_boundedness() {
    let _guard = big_lock();
    let start = Instant::now();
    // (σ, δ) = (1, 0.05): the weighted family's dimension bound 4δ < 1 = n
    // holds, so the bounded L²−L² estimate applies.
    let p = params(1.0, 0.05, 1);
    let grid = GridSpec::new(1, 1 << 22, 400_000.0).unwrap();
    let u1 = make_gaussian(grid, 2.0, false).unwrap();
    let zero = RealField::zero(grid);
    let denom =
        weighted_lm_norm(&u1, 2.0 * p.delta(), 2.0).unwrap() + lm_norm(&u1, 2.0).unwrap();
    let mut sup: f64 = 0.0;
    let mut tail: Vec<(f64, f64)> = Vec::new();
    for &t in &logspace(1.0, 60.0, 24) {
        let f = evolve(&p, &zero, &u1, t, 0, 0.0).unwrap();
        let ratio = lm_norm(&f, 2.0).unwrap() / denom;
        assert!(ratio.is_finite());
        sup = sup.max(ratio);
        if t >= 10.0 {
            tail.push((t, ratio));
        }
    }
    assert!(tail.len() >= 8);
    for w in tail.windows(2) {
        assert!(
            w[1].1 <= w[0].1 * (1.0 + 1e-12),
            "ratio increased: {:?} -> {:?}",
            w[0],
            w[1]
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 06 PASS: sup ratio {sup:.4} finite, non-increasing over {} tail points after t = 10, {elapsed:.2?}",
        tail.len()
    );
}

#[test]
fn criterion_07_exponent_calculator_identities() {
    let start = Instant::now();
    let p = params(1.0, 0.25, 2);
    let smd = 0.75;
    // L²−L² specialization at m = 2: exponents (0, −σ/(2(σ−δ)), −1).
    let q = |m: f64, a: f64, j: u8, term: Term| RateQuery {
        params: p,
        m,
        a,
        j,
        family: Family::Theorem,
        term,
    };
    assert_eq!(rates::theorem_rate(&q(2.0, 0.0, 0, Term::U0)).unwrap().exponent, 0.0);
    assert_eq!(
        rates::theorem_rate(&q(2.0, 1.0, 0, Term::U0)).unwrap().exponent,
        -1.0 / (2.0 * smd)
    );
    assert_eq!(rates::theorem_rate(&q(2.0, 0.0, 1, Term::U0)).unwrap().exponent, -1.0);
    // Proposition-vs-theorem improvement equals δ/(σ−δ) at a = j = 0.
    for m in [1.2, 1.5, 1.9] {
        let prop = rates::proposition_rate(&RateQuery {
            family: Family::Proposition,
            ..q(m, 0.0, 0, Term::U1)
        })
        .unwrap()
        .exponent;
        let thm = rates::theorem_rate(&q(m, 0.0, 0, Term::U1)).unwrap().exponent;
        assert!(
            ((prop - thm) - 0.25 / smd).abs() <= 1e-13,
            "m {m}: improvement {}",
            prop - thm
        );
    }
    // Dimension-bound crossover exactly at m = 4/3.
    let (pitt, classical, smaller) = rates::dimension_bound_comparison(4.0 / 3.0, 0.25).unwrap();
    assert!((pitt - classical).abs() <= 1e-13);
    assert!(smaller);
    let (pitt, classical, _) = rates::dimension_bound_comparison(4.0 / 3.0 - 1e-9, 0.25).unwrap();
    assert!(pitt > classical);
    let (pitt, classical, _) = rates::dimension_bound_comparison(4.0 / 3.0 + 1e-9, 0.25).unwrap();
    assert!(pitt < classical);
    let elapsed = start.elapsed();
    println!("criterion 07 PASS: calculator identities exact, {elapsed:.2?}");
}

#[test]
fn criterion_08_gamma_integral_lattice() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for beta in [-0.5, 0.0, 1.3] {
        for c in [0.5, 1.0, 2.0] {
            for two_delta in [0.5, 1.0, 1.7] {
                let t = 3.0;
                let closed = rates::gamma_scaled_integral(beta, c, two_delta, t).unwrap();
                let numeric = sdevo_core::quad::integrate_half_line(
                    |r| r.powf(beta) * (-c * (1.0 + t) * r.powf(two_delta)).exp(),
                    1e-10,
                    1e-11,
                )
                .unwrap()
                .value;
                let rel = (closed - numeric).abs() / closed;
                worst = worst.max(rel);
                assert!(rel <= 1e-8, "beta {beta}, c {c}, 2d {two_delta}: rel {rel:.3e}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {elapsed:.2?}");
    println!("criterion 08 PASS: 27-point lattice worst relative gap {worst:.3e} <= 1e-8, {elapsed:.2?}");
}

#[test]
fn criterion_09_pitt_suite() {
    let _guard = big_lock();
    let start = Instant::now();
    // 1. Admissibility balance ⇔ dilation-scaling equality on 200 tuples.
    let mut state = 0x5EED_0123_4567_89ABu64;
    let mut uni = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for k in 0..200 {
        let r1 = 1.01 + 4.0 * uni();
        let r2 = (r1 - 2.0 * uni()).max(1.01);
        let s2 = 1.5 * uni();
        let n = 1 + (uni() * 3.0) as usize;
        let s1 = if k % 2 == 0 {
            balanced_s1(r1, r2, s2, n)
        } else {
            balanced_s1(r1, r2, s2, n) + (uni() - 0.5)
        };
        let p = PittParams { r1, r2, s1, s2, n };
        let (lhs, rhs) = scaling_exponents(&p);
        let scaling_equal = (lhs - rhs).abs() <= 1e-12;
        let balance_ok = !pitt_admissible(&p)
            .violations
            .iter()
            .any(|v| v.starts_with("balance"));
        assert_eq!(scaling_equal, balance_ok, "tuple {k}: {p:?}");
    }
    // 2. Ratio constant under dilation λ ∈ {1/2, 1, 2} to ±1%.
    let grid = GridSpec::new(1, 1 << 18, 20_000.0).unwrap();
    for (r1, r2, s2) in [(2.0, 2.0, 0.125), (2.5, 2.0, 0.2)] {
        let p = PittParams { r1, r2, s1: balanced_s1(r1, r2, s2, 1), s2, n: 1 };
        let base = pitt_ratio(&make_gaussian(grid, 4.0, false).unwrap(), &p).unwrap();
        for lambda in [0.5, 2.0] {
            let r = pitt_ratio(&make_gaussian(grid, 4.0 / lambda, false).unwrap(), &p).unwrap();
            let dev = (r / base - 1.0).abs();
            assert!(dev <= 0.01, "tuple ({r1},{r2},{s2}) lambda {lambda}: deviation {dev:.4}");
        }
    }
    // 3. Plancherel tuple: ratio 1 ± 1e−10.
    let plancherel = PittParams { r1: 2.0, r2: 2.0, s1: 0.0, s2: 0.0, n: 1 };
    let small = GridSpec::new(1, 1024, 60.0).unwrap();
    let ratio = pitt_ratio(&make_gaussian(small, 1.5, false).unwrap(), &plancherel).unwrap();
    assert!((ratio - 1.0).abs() <= 1e-10, "plancherel ratio {ratio}");
    // 4. Hölder product ratio ≤ 1 + 1e−10 on 100 random pairs.
    let hgrid = GridSpec::new(1, 128, 6.0).unwrap();
    let mut hoelder_max = 0.0f64;
    for seed in 0..100u64 {
        let f = make_random_smooth(hgrid, seed, 0.4).unwrap();
        let g = make_random_smooth(hgrid, seed + 7919, 0.7).unwrap();
        let m = 1.0 + (seed % 11) as f64 / 11.0;
        let ratio = holder_product_ratio(&f, &g, m).unwrap();
        hoelder_max = hoelder_max.max(ratio);
        assert!(ratio <= 1.0 + 1e-10, "seed {seed}: ratio {ratio}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:.2?}");
    println!(
        "criterion 09 PASS: 200 tuples consistent, dilation within 1%, plancherel {ratio:.12}, max Hoelder ratio {hoelder_max:.6}, {elapsed:.2?}"
    );
}

#[test]
fn criterion_10_determinism() {
    let _guard = big_lock();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.toml");
    let text = std::fs::read_to_string(path).unwrap();
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    let csv_a = a.to_csv();
    let csv_b = b.to_csv();
    assert_eq!(csv_a.as_bytes(), csv_b.as_bytes(), "CSV not byte-identical");
    assert!(a.all_checks_pass(), "default experiment must pass its checks");
    println!(
        "criterion 10 PASS: two runs of the default config render byte-identical CSV ({} bytes)",
        csv_a.len()
    );
}
