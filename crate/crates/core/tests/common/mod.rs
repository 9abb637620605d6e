//! Shared random-state generators for the integration suites.

use homsim_core::{Complex, Ensemble, ModeAssignment, Permutation, PureState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All `n!` one-particle-per-mode assignments.
pub fn sector_assignments(n: usize) -> Vec<ModeAssignment> {
    Permutation::all(n)
        .into_iter()
        .map(|p| ModeAssignment::new(p.image().to_vec()))
        .collect()
}

/// Random pure state supported on the one-particle-per-port sector.
pub fn random_sector_pure(n: usize, rng: &mut ChaCha8Rng) -> PureState {
    let terms = sector_assignments(n).into_iter().map(|a| {
        let amp = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        (a, amp)
    });
    PureState::new(n, n, terms).expect("random sector state")
}

/// Random mixture of 2–4 random sector states.
pub fn random_sector_ensemble(n: usize, rng: &mut ChaCha8Rng) -> Ensemble {
    let count = rng.gen_range(2..=4);
    let mut weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let members = weights
        .into_iter()
        .map(|w| (w, random_sector_pure(n, rng)))
        .collect();
    Ensemble::new(members).expect("random ensemble")
}
