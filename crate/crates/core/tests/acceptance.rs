//! Acceptance suite: one PASS/FAIL line per criterion with its wall time.
//! Tolerances are the fixed ones the lab is held to.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use sdma_capacity::analytic::{
    density_dpc_mimo, density_dpc_miso, density_dpc_sandwich, density_small_eps, density_zf, density_zf_antsel,
    exact_density_root, outage_sandwich_lemma2, DensityResult, DpcMethod, ZfVariant,
};
use sdma_capacity::channel::SimOptions;
use sdma_capacity::kernels::{f_coeff, interference_coeff};
use sdma_capacity::mc::stats::wilson_interval;
use sdma_capacity::mc::{
    estimate_outage, estimate_outage_with, find_max_density, find_max_density_with, validate_distribution,
    BisectionConfig, NamedSampler,
};
use sdma_capacity::{NetworkParams, Scheme, SignalLaw};

const ALPHAS: [f64; 4] = [2.5, 3.0, 4.0, 6.0];
const SLOPE_GRID: [u32; 4] = [2, 4, 8, 16];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn defaults(m: u32, n: u32, k: u32) -> NetworkParams {
    NetworkParams::default().with_antennas(m, n, k)
}

fn kernel_identities() -> Outcome {
    let mut worst_i: f64 = 0.0;
    let mut worst_f: f64 = 0.0;
    for alpha in ALPHAS {
        for m in 1..=64 {
            let got = interference_coeff(m, alpha).unwrap();
            worst_i = worst_i.max(common::relative_error(got, common::interference_coeff(m, alpha)));
        }
        for d in 1..=32 {
            let got = f_coeff(d, alpha, 0.0).unwrap();
            worst_f = worst_f.max(common::relative_error(got, common::f_coeff(d, alpha)));
        }
    }
    Outcome::new(
        worst_i <= 1e-10 && worst_f <= 1e-9,
        format!("max rel err I_M {worst_i:.2e} (tol 1e-10), F_d {worst_f:.2e} (tol 1e-9)"),
    )
}

fn siso_oracle() -> Outcome {
    let trials = 100_000u64;
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [1e-5, 1e-4, 5e-4] {
        let mut p = defaults(1, 1, 1);
        p.lambda = lambda;
        let est = estimate_outage(Scheme::Siso, &p, trials, 2024).unwrap();
        let success = 1.0 - est.p_hat;
        let oracle = common::siso_success(lambda, p.alpha, p.beta, p.distance);
        let se = (oracle * (1.0 - oracle) / trials as f64).sqrt();
        let z = (success - oracle).abs() / se;
        pass &= z <= 3.0;
        parts.push(format!("λ={lambda:e}: {success:.5} vs {oracle:.5} ({z:.2} SE)"));
    }
    Outcome::new(pass, parts.join("; "))
}

fn zf_miso_closed_form() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [2u32, 4] {
        let p = defaults(m, 1, m);
        let mc = find_max_density(Scheme::ZfMiso, &p, 0.02, 11).unwrap().lambda_eps;
        let exact = common::zf_miso_density(m, p.alpha, p.beta, p.distance, p.epsilon);
        let analytic = density_zf(&p, ZfVariant::Miso).unwrap().lambda_eps;
        let err = common::relative_error(mc, exact);
        pass &= err <= 0.05 && common::relative_error(analytic, exact) <= 1e-10;
        parts.push(format!("M={m}: mc {mc:.4e} vs {exact:.4e} ({:.1}%)", 100.0 * err));
    }
    Outcome::new(pass, parts.join("; "))
}

fn dpc_sandwich() -> Outcome {
    let config = BisectionConfig { options: SimOptions::surrogate(), ..BisectionConfig::default() };
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1u32, 2, 3] {
        let p = defaults(m, m, m);
        let (lower, _) = density_dpc_sandwich(&p).unwrap();
        let upper = density_dpc_mimo(&p, DpcMethod::UpperBound).unwrap().lambda_eps;
        let root = find_max_density_with(Scheme::DpcMimoUb, &p, &config, 5).unwrap().result.lambda_eps;
        let inside = lower.lambda_eps <= root && root <= upper;
        pass &= inside;
        parts.push(format!("M=N={m}: {:.3e} ≤ {root:.3e} ≤ {upper:.3e} {}", lower.lambda_eps, mark(inside)));
        for scale in [0.5, 1.0, 2.0] {
            let mut q = p;
            q.lambda = scale * root;
            let (lo, hi) = outage_sandwich_lemma2(&q, m * m).unwrap();
            let est = estimate_outage_with(Scheme::DpcMimoUb, &q, &SimOptions::surrogate(), 100_000, 17).unwrap();
            // 99.9% interval: nine comparisons share the suite's error budget
            let (ci_lo, ci_hi) = wilson_interval(est.outages, est.trials, 3.29);
            let overlap = ci_lo <= hi && lo <= ci_hi;
            pass &= overlap;
            if !overlap {
                parts.push(format!("  outage {:.4} outside [{lo:.4}, {hi:.4}] at {scale}λ", est.p_hat));
            }
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn distribution_suite() -> Outcome {
    let samples = 100_000;
    let mut cases: Vec<(String, Scheme, NetworkParams, SignalLaw)> = Vec::new();
    for (m, k, n) in [(4u32, 2u32, 1u32), (6, 2, 2), (8, 4, 1)] {
        cases.push((format!("ZF ({m},{k},{n})"), Scheme::ZfMulti, defaults(m, n, k), SignalLaw::Gamma(m - k * n + 1)));
    }
    let (m, k, n) = (8u32, 2u32, 2u32);
    cases.push(("BD (8,2,2)".into(), Scheme::BdUb, defaults(m, n, k), SignalLaw::Gamma(n * m - (k - 1) * n * n)));
    for n in [2u32, 4] {
        cases.push((format!("ANTSEL N={n}"), Scheme::ZfAntsel, defaults(4, n, 4), SignalLaw::MaxExp(n)));
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (label, scheme, params, law)) in cases.into_iter().enumerate() {
        let sampler = NamedSampler::SignalGain { scheme, params, options: SimOptions::default() };
        let report = validate_distribution(&sampler, law, samples, 300 + i as u64).unwrap();
        pass &= report.pass;
        parts.push(format!("{label} D={:.4}/{:.4}", report.statistic, report.critical));
    }
    Outcome::new(pass, parts.join("; "))
}

fn slope_of(
    configs: &[NetworkParams],
    axis: impl Fn(&NetworkParams) -> u32,
    f: impl Fn(&NetworkParams) -> DensityResult,
) -> f64 {
    let xs: Vec<f64> = configs.iter().map(|p| axis(p) as f64).collect();
    // ASE recomputed here from the density alone
    let ys: Vec<f64> =
        configs.iter().map(|p| p.k as f64 * f(p).lambda_eps * (1.0 - p.epsilon) * (1.0 + p.beta).log2()).collect();
    common::log_log_slope(&xs, &ys)
}

fn scaling_slopes() -> Outcome {
    let diag =
        |n_of: fn(u32) -> u32| -> Vec<NetworkParams> { SLOPE_GRID.iter().map(|&m| defaults(m, n_of(m), m)).collect() };
    let mimo = diag(|m| m);
    let miso = diag(|_| 1);
    let bd: Vec<_> = SLOPE_GRID.iter().map(|&n| defaults(2 * n, n, 2)).collect();
    let checks = [
        ("DPC-MIMO", slope_of(&mimo, |p| p.m, |p| density_dpc_mimo(p, DpcMethod::SmallEps).unwrap()), 1.5, 0.15),
        ("DPC-MISO", slope_of(&miso, |p| p.m, |p| density_dpc_miso(p).unwrap()), 1.0, 0.1),
        ("ZF-MISO", slope_of(&miso, |p| p.m, |p| density_zf(p, ZfVariant::Miso).unwrap()), 0.5, 0.1),
        ("ZF-ANTSEL", slope_of(&mimo, |p| p.m, |p| density_zf_antsel(p).unwrap()), 1.0, 0.1),
        ("BD", slope_of(&bd, |p| p.n, |p| sdma_capacity::analytic::density_bd(p).unwrap()), 1.0, 0.15),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, slope, target, tol) in checks {
        let ok = (slope - target).abs() <= tol;
        pass &= ok;
        parts.push(format!("{name} {slope:.3} ({target}±{tol}) {}", mark(ok)));
    }
    Outcome::new(pass, parts.join("; "))
}

fn ordering_at_eight() -> Outcome {
    let dpc_p = defaults(8, 8, 8);
    let sel_p = defaults(8, 8, 8);
    let zf_p = defaults(8, 1, 8);
    let dpc = density_dpc_mimo(&dpc_p, DpcMethod::SmallEps).unwrap().ase;
    let sel = density_zf_antsel(&sel_p).unwrap().ase;
    let zf = density_zf(&zf_p, ZfVariant::Miso).unwrap().ase;
    let analytic = dpc > sel && sel > zf;
    let config = BisectionConfig {
        tolerance: 0.05,
        max_trials: 100_000,
        options: SimOptions::surrogate(),
        ..BisectionConfig::default()
    };
    let mc = |scheme: Scheme, p: &NetworkParams| find_max_density_with(scheme, p, &config, 8).unwrap().result.ase;
    let (dpc_mc, sel_mc, zf_mc) =
        (mc(Scheme::DpcMimoUb, &dpc_p), mc(Scheme::ZfAntsel, &sel_p), mc(Scheme::ZfMiso, &zf_p));
    let simulated = dpc_mc > sel_mc && sel_mc > zf_mc;
    Outcome::new(
        analytic && simulated,
        format!(
            "analytic ASE {dpc:.3e} > {sel:.3e} > {zf:.3e} {}; mc {dpc_mc:.3e} > {sel_mc:.3e} > {zf_mc:.3e} {}",
            mark(analytic),
            mark(simulated)
        ),
    )
}

fn simulate_output(workers: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_sdma-capacity"))
        .args(["simulate", "--scheme", "zf-miso,dpc-miso", "--m", "4", "--k", "4", "--lambda", "5e-5"])
        .args(["--trials", "20000", "--seed", "99", "--format", "json"])
        .env("SDMA_WORKERS", workers)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "simulate failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let reference = simulate_output("1");
    let repeat = simulate_output("1");
    let mut pass = reference == repeat && !reference.is_empty();
    for workers in ["4", "16"] {
        pass &= simulate_output(workers) == reference;
    }
    Outcome::new(pass, format!("{} bytes identical across repeats and 1/4/16 workers", reference.len()))
}

fn small_eps_consistency() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (scheme, p) in [(Scheme::ZfMiso, defaults(4, 1, 4)), (Scheme::ZfAntsel, defaults(4, 4, 4))] {
        let errors: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&eps| {
                let q = NetworkParams { epsilon: eps, ..p };
                let small = density_small_eps(scheme, &q).unwrap().lambda_eps;
                let exact = exact_density_root(scheme, &q).unwrap().lambda_eps;
                common::relative_error(small, exact)
            })
            .collect();
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        pass &= decreasing;
        parts.push(format!("{scheme} {:.2e} > {:.2e} > {:.2e}", errors[0], errors[1], errors[2]));
    }
    Outcome::new(pass, parts.join("; "))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("kernel identities", kernel_identities, Duration::from_secs(1)),
        ("SISO exact oracle", siso_oracle, Duration::from_secs(60)),
        ("ZF-MISO closed form", zf_miso_closed_form, Duration::from_secs(300)),
        ("bound sandwich", dpc_sandwich, Duration::from_secs(600)),
        ("distribution suite", distribution_suite, Duration::from_secs(120)),
        ("scaling slopes", scaling_slopes, Duration::from_secs(1)),
        ("ordering at M = N = 8", ordering_at_eight, Duration::from_secs(600)),
        ("determinism", determinism, Duration::from_secs(120)),
        ("small-eps consistency", small_eps_consistency, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = outcome.pass && in_time;
        println!(
            "criterion {}: {} {name} [{:.2}s / {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            outcome.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
