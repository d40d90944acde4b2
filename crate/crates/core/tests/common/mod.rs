#![allow(dead_code)]

use mushy_core::{manufacture, FaceCondition, ManufactureInput, ManufacturedScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// ξ uniform in [0.05, 2]; k, ρ, c, q0 log-uniform over four decades; γ and
/// h0 drawn in units of their natural scales 2q0/√(kρc) and √(kρc).
pub fn random_input(rng: &mut ChaCha8Rng) -> ManufactureInput {
    let k = log_uniform(rng, 1e-2, 1e2);
    let rho = log_uniform(rng, 1e-2, 1e2);
    let c = log_uniform(rng, 1e-2, 1e2);
    let q0 = log_uniform(rng, 1e-2, 1e2);
    let eff = (k * rho * c).sqrt();
    ManufactureInput {
        xi: rng.random_range(0.05..=2.0),
        k,
        rho,
        c,
        epsilon: rng.random_range(0.05..=0.95),
        gamma: log_uniform(rng, 1e-2, 1e2) * 2.0 * q0 / eff,
        q0,
        h0: Some(log_uniform(rng, 1e-2, 1e2) * eff),
    }
}

pub fn scenarios(seed: u64, n: usize, face: FaceCondition) -> Vec<ManufacturedScenario> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| manufacture(&random_input(&mut r), face).expect("sampled data are valid"))
        .collect()
}

/// A few fixed data sets for boundary-straddling checks.
pub fn fixed_inputs() -> Vec<ManufactureInput> {
    vec![
        ManufactureInput::default(),
        ManufactureInput {
            xi: 1.2,
            k: 3.0,
            rho: 0.4,
            c: 2.5,
            epsilon: 0.3,
            gamma: 0.8,
            q0: 2.0,
            h0: Some(5.0),
        },
        ManufactureInput {
            xi: 0.15,
            k: 0.05,
            rho: 20.0,
            c: 7.0,
            epsilon: 0.8,
            gamma: 0.02,
            q0: 0.3,
            h0: Some(40.0),
        },
    ]
}
