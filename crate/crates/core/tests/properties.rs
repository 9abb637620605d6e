//! Structural invariants checked over randomized inputs, plus a few frozen
//! combinatorial facts about the class partition.

mod common;

use std::collections::BTreeMap;

use homsim_core::multiport::{count_distribution, evolve_grouped};
use homsim_core::perm::expectation;
use homsim_core::suppression::{class_probabilities, class_sets};
use homsim_core::{
    Complex, CountConfiguration, Ensemble, ModeAssignment, Permutation, PureState, State,
    UnitaryMatrix,
};
use proptest::prelude::*;

fn amplitude_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_filter("needs nonzero norm", |v| {
            v.iter().map(|(re, im)| re * re + im * im).sum::<f64>() > 1e-2
        })
}

fn sector_state(n: usize, amps: &[(f64, f64)]) -> PureState {
    let terms = common::sector_assignments(n)
        .into_iter()
        .zip(amps)
        .map(|(a, &(re, im))| (a, Complex::new(re, im)));
    PureState::new(n, n, terms).unwrap()
}

fn perm_index(n: usize) -> impl Strategy<Value = usize> {
    let count: usize = (1..=n).product();
    0..count
}

/// Dense matrix of the label action of `perm` on the sector basis.
fn dense_perm_matrix(perm: &Permutation, basis: &[ModeAssignment]) -> Vec<Vec<f64>> {
    let index: BTreeMap<&ModeAssignment, usize> =
        basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut m = vec![vec![0.0; basis.len()]; basis.len()];
    for (col, a) in basis.iter().enumerate() {
        let image = perm.apply_assignment(a).unwrap();
        m[index[&image]][col] = 1.0;
    }
    m
}

proptest! {
    #[test]
    fn label_action_preserves_inner_products(
        a in amplitude_vec(6),
        b in amplitude_vec(6),
        idx in perm_index(3),
    ) {
        let psi = sector_state(3, &a);
        let phi = sector_state(3, &b);
        let perm = Permutation::all(3)[idx].clone();
        let before = psi.inner(&phi).unwrap();
        let after = perm.apply(&psi).unwrap().inner(&perm.apply(&phi).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-12);
    }

    #[test]
    fn expectation_matches_dense_matrix_element(
        a in amplitude_vec(24),
        idx in perm_index(4),
    ) {
        let psi = sector_state(4, &a);
        let perm = Permutation::all(4)[idx].clone();

        let direct = psi.inner(&perm.apply(&psi).unwrap()).unwrap();
        prop_assert!((expectation(&perm, &psi).unwrap() - direct).norm() < 1e-13);

        let basis = common::sector_assignments(4);
        let m = dense_perm_matrix(&perm, &basis);
        let v: Vec<Complex> = basis.iter().map(|b| psi.amplitude(b)).collect();
        let mut dense = Complex::ZERO;
        for (row, mrow) in m.iter().enumerate() {
            for (col, &entry) in mrow.iter().enumerate() {
                dense += v[row].conj() * entry * v[col];
            }
        }
        prop_assert!((direct - dense).norm() < 1e-12);
        prop_assert!(direct.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn evolution_is_unitary(a in amplitude_vec(6)) {
        let psi = sector_state(3, &a);
        let u = UnitaryMatrix::qft(3).unwrap();
        let out = psi.evolve(&u).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let back = out.evolve(&u.dagger()).unwrap();
        prop_assert!((psi.inner(&back).unwrap() - Complex::ONE).norm() < 1e-10);
    }

    #[test]
    fn tritter_output_depends_only_on_occupancy_pattern(a in amplitude_vec(6)) {
        // For sector inputs, rotating all output ports multiplies every
        // amplitude by a global phase, so mirror-image configurations of the
        // same pattern carry equal probability.
        let psi = sector_state(3, &a);
        let dist = evolve_grouped(&psi, &UnitaryMatrix::qft(3).unwrap()).unwrap();
        let p = |c: [u8; 3]| dist.probability(&CountConfiguration::new(c.to_vec()));
        for group in [
            [[3, 0, 0], [0, 3, 0], [0, 0, 3]],
            [[2, 1, 0], [0, 2, 1], [1, 0, 2]],
            [[1, 2, 0], [0, 1, 2], [2, 0, 1]],
        ] {
            let first = p(group[0]);
            for c in group {
                prop_assert!((p(c) - first).abs() < 1e-12, "{c:?}");
            }
        }
    }

    #[test]
    fn class_vector_is_invariant_under_port_rotation(
        a in amplitude_vec(24),
        shift in 1usize..4,
    ) {
        let psi = sector_state(4, &a);
        let dist = evolve_grouped(&psi, &UnitaryMatrix::qft(4).unwrap()).unwrap();
        let cp = class_probabilities(&dist).unwrap();
        // rotate every output configuration by `shift` ports and re-aggregate
        let mut rotated = vec![0.0; 4];
        for (config, p) in dist.iter() {
            let counts = config.counts();
            let moved: Vec<u8> = (0..4).map(|i| counts[(i + 4 - shift) % 4]).collect();
            let weighted: usize = moved.iter().enumerate().map(|(i, &c)| i * c as usize).sum();
            rotated[weighted % 4] += p;
        }
        for (got, want) in rotated.iter().zip(cp.probabilities()) {
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_is_affine_in_the_mixture(
        a in amplitude_vec(6),
        b in amplitude_vec(6),
        w in 0.05..0.95f64,
        idx in perm_index(3),
    ) {
        let psi = sector_state(3, &a);
        let phi = sector_state(3, &b);
        let perm = Permutation::all(3)[idx].clone();
        let mix = Ensemble::new(vec![(w, psi.clone()), (1.0 - w, phi.clone())]).unwrap();
        let lhs = expectation(&perm, &mix).unwrap();
        let rhs = expectation(&perm, &psi).unwrap() * w
            + expectation(&perm, &phi).unwrap() * (1.0 - w);
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }
}

#[test]
fn class_partition_sizes_are_stable() {
    let expected: [(usize, &[usize]); 5] = [
        (2, &[2, 1]),
        (3, &[4, 3, 3]),
        (4, &[10, 8, 9, 8]),
        (5, &[26, 25, 25, 25, 25]),
        (6, &[80, 75, 78, 76, 78, 75]),
    ];
    for (n, sizes) in expected {
        let sets = class_sets(n).unwrap();
        let got: Vec<usize> = sets.iter().map(Vec::len).collect();
        assert_eq!(got, sizes, "n={n}");
    }
}

/// Dense density matrix over mode assignments, `ρ[a][b] = Σ w ψ(a) ψ(b)*`.
fn dense_density(state: &impl State) -> BTreeMap<(ModeAssignment, ModeAssignment), Complex> {
    let mut rho = BTreeMap::new();
    for (w, psi) in state.weighted_members() {
        for (a, amp_a) in psi.terms() {
            for (b, amp_b) in psi.terms() {
                *rho.entry((a.clone(), b.clone())).or_insert(Complex::ZERO) +=
                    amp_a * amp_b.conj() * w;
            }
        }
    }
    rho
}

#[test]
fn representatives_commute_with_transpositions_for_small_n() {
    for n in 2..=3 {
        for k in 0..n {
            let rho = Ensemble::rho_representative(n, k).unwrap();
            let dense = dense_density(&rho);
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let t = Permutation::transposition(n, i, j).unwrap();
                    // transpositions are involutions, so TρT = ρ iff [T, ρ] = 0
                    for ((a, b), &entry) in &dense {
                        let ta = t.apply_assignment(a).unwrap();
                        let tb = t.apply_assignment(b).unwrap();
                        let conjugated = dense
                            .get(&(ta, tb))
                            .copied()
                            .unwrap_or(Complex::ZERO);
                        assert!(
                            (entry - conjugated).norm() < 1e-12,
                            "n={n} k={k} swap ({i},{j})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn grouped_and_oracle_agree_on_mixtures() {
    let mut rng = common::rng(0x70_72_6f);
    for n in 2..=4 {
        let u = UnitaryMatrix::qft(n).unwrap();
        for _ in 0..10 {
            let rho = common::random_sector_ensemble(n, &mut rng);
            let grouped = evolve_grouped(&rho, &u).unwrap();
            let oracle = count_distribution(&rho.evolve(&u).unwrap()).unwrap();
            for (config, p) in oracle.iter() {
                assert!((grouped.probability(config) - p).abs() < 1e-10);
            }
        }
    }
}
