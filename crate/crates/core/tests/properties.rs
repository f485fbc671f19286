//! Invariants of the analytic layer and the configuration format.

use proptest::prelude::*;
use sdma_capacity::analytic::{analytic_densities, DensityMethod};
use sdma_capacity::cli::config::ExperimentConfig;
use sdma_capacity::{NetworkParams, Scheme};

fn configs() -> impl Strategy<Value = (Scheme, NetworkParams)> {
    let scheme = prop::sample::select(vec![
        Scheme::DpcMimoUb,
        Scheme::DpcMiso,
        Scheme::ZfMulti,
        Scheme::ZfRxzf,
        Scheme::ZfAntsel,
        Scheme::ZfMiso,
        Scheme::BdUb,
        Scheme::Siso,
    ]);
    (scheme, 1u32..=8, 1u32..=4, 1u32..=4, 2.2f64..6.0, 0.5f64..10.0).prop_map(|(scheme, m, n, k, alpha, beta)| {
        let p = NetworkParams { alpha, beta, ..NetworkParams::default() }.with_antennas(m, n, k);
        (scheme, scheme.native_config(&p))
    })
}

fn densities(scheme: Scheme, p: &NetworkParams) -> Option<Vec<(DensityMethod, f64)>> {
    analytic_densities(scheme, p).ok().map(|v| v.into_iter().map(|r| (r.method, r.lambda_eps)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn density_grows_with_outage_budget((scheme, p) in configs(), eps in 0.01f64..0.3, factor in 1.05f64..2.0) {
        let lo = NetworkParams { epsilon: eps, ..p };
        let hi = NetworkParams { epsilon: (eps * factor).min(0.6), ..p };
        if let (Some(a), Some(b)) = (densities(scheme, &lo), densities(scheme, &hi)) {
            for ((method, x), (_, y)) in a.iter().zip(&b) {
                prop_assert!(x <= y, "{scheme} {method:?}: {x} > {y}");
            }
        }
    }

    #[test]
    fn density_falls_with_noise((scheme, p) in configs(), eta in 0.0f64..1e-5, extra in 1e-7f64..1e-5) {
        let quiet = NetworkParams { eta, ..p };
        let loud = NetworkParams { eta: eta + extra, ..p };
        if let (Some(a), Some(b)) = (densities(scheme, &quiet), densities(scheme, &loud)) {
            for ((method, x), (_, y)) in a.iter().zip(&b) {
                // the large-deviation bound keeps its e^{+ηs} noise factor
                if *method == DensityMethod::UpperBound && scheme == Scheme::DpcMimoUb {
                    continue;
                }
                prop_assert!(y <= x, "{scheme} {method:?}: {y} > {x}");
            }
        }
    }

    #[test]
    fn ase_recomputes_from_density((scheme, p) in configs(), eps in 0.01f64..0.3) {
        let p = NetworkParams { epsilon: eps, ..p };
        if let Ok(results) = analytic_densities(scheme, &p) {
            for r in results {
                let expected = p.k as f64 * r.lambda_eps * (1.0 - eps) * (1.0 + p.beta).log2();
                prop_assert!((r.ase - expected).abs() <= 1e-12 * expected.abs());
                prop_assert!(r.lambda_eps >= 0.0 && r.lambda_eps.is_finite());
            }
        }
    }

    #[test]
    fn config_round_trips(m in 1u32..32, n in 1u32..8, alpha in 2.1f64..8.0, eps in 0.001f64..0.9, seed in any::<u64>()) {
        let cfg = ExperimentConfig { m, n, k: m, alpha, epsilon: eps, seed, ..ExperimentConfig::default() };
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
