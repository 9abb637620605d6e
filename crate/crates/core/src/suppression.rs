//! The generalized suppression law on Fourier multiports: class partition of
//! output count configurations, aggregated class probabilities, the
//! operational indistinguishability measure, and state classification.
//!
//! A configuration `(a_0, …, a_{n-1})` of `n` particles over `n` ports
//! belongs to class `Σ i·a_i mod n`; a class-`k` cyclic eigenstate evolved
//! through the n-mode QFT populates only class `k`. Summing an output
//! distribution over the classes therefore recovers the indistinguishability
//! measure without ever resolving individual particles.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::multiport::{all_configurations, evolve_grouped, CountConfiguration, OutcomeDistribution, UnitaryMatrix};
use crate::states::State;
use crate::Complex;

/// Default out-of-class mass threshold for classification.
pub const CLASS_PURITY_TOL: f64 = 1e-9;

/// Suppression class of a configuration: `Σ i·a_i mod n`, the unique class
/// whose eigenstate can populate this output on the QFT multiport.
pub fn suppression_class(config: &CountConfiguration) -> Result<usize> {
    let n = config.total();
    if config.ports() != n {
        return Err(domain(alloc::format!(
            "suppression law needs d = n, got {} ports for {n} particles",
            config.ports()
        )));
    }
    let weighted: usize = config
        .counts()
        .iter()
        .enumerate()
        .map(|(i, &a)| i * a as usize)
        .sum();
    Ok(weighted % n)
}

/// Partition of all count configurations into classes `A_0, …, A_{n-1}`.
pub fn class_sets(n: usize) -> Result<Vec<Vec<CountConfiguration>>> {
    if n < 2 {
        return Err(domain("class partition needs at least 2 particles"));
    }
    let mut sets = alloc::vec![Vec::new(); n];
    for config in all_configurations(n, n) {
        sets[suppression_class(&config)?].push(config);
    }
    Ok(sets)
}

/// Class probabilities `(p_0, …, p_{n-1})`; for `n = 3` these are
/// `(p_α, p_β, p_γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassProbabilities {
    n: usize,
    p: Vec<f64>,
}

impl ClassProbabilities {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n < 2 {
            return Err(domain("need at least 2 classes"));
        }
        if p.iter().any(|&x| !(0.0..=1.0 + 1e-12).contains(&x)) {
            return Err(domain("class probabilities outside [0, 1]"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > crate::multiport::DISTRIBUTION_TOL {
            return Err(domain(alloc::format!(
                "class probabilities sum to {total}, not 1"
            )));
        }
        Ok(ClassProbabilities { n, p })
    }

    pub fn class_count(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// The operational measure `|Σ_i p_i λ^i|²` with `λ = e^{i2π/n}`.
    pub fn operational_measure(&self) -> f64 {
        let step = 2.0 * core::f64::consts::PI / self.n as f64;
        self.p
            .iter()
            .enumerate()
            .map(|(i, &p)| Complex::from_polar(p, step * i as f64))
            .sum::<Complex>()
            .norm_sqr()
    }
}

/// Sums an output distribution over each suppression class.
pub fn class_probabilities(dist: &OutcomeDistribution) -> Result<ClassProbabilities> {
    let n = dist.particle_count();
    if dist.ports() != n {
        return Err(domain("class probabilities need a distribution over d = n ports"));
    }
    let mut p = alloc::vec![0.0; n];
    for (config, prob) in dist.iter() {
        p[suppression_class(config)?] += prob;
    }
    ClassProbabilities::new(p.iter().map(|x| x.clamp(0.0, 1.0)).collect())
}

/// Composes QFT evolution, class aggregation, and the operational formula.
/// For states in the one-particle-per-input-port sector this equals the
/// definitional cyclic measure.
pub fn measure_via_multiport(state: &impl State) -> Result<f64> {
    let n = state.particle_count();
    if state.mode_count() != n {
        return Err(domain("multiport measure needs d = n"));
    }
    for (_, psi) in state.weighted_members() {
        if !psi.one_particle_per_mode() {
            return Err(domain(
                "multiport measure needs one particle per input port",
            ));
        }
    }
    let dist = evolve_grouped(state, &UnitaryMatrix::qft(n)?)?;
    Ok(class_probabilities(&dist)?.operational_measure())
}

/// Result of reading a suppression-class signature off a distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// All probability mass (within tolerance) lies in a single class.
    Definite(usize),
    /// Mass spreads over several classes; the full class vector is returned.
    Mixed(ClassProbabilities),
}

/// Classifies a distribution by its suppression-class support, using the
/// default purity threshold.
pub fn classify_state(dist: &OutcomeDistribution) -> Result<Classification> {
    classify_state_with_tolerance(dist, CLASS_PURITY_TOL)
}

/// As [`classify_state`], with an explicit out-of-class mass threshold.
pub fn classify_state_with_tolerance(
    dist: &OutcomeDistribution,
    tol: f64,
) -> Result<Classification> {
    let cp = class_probabilities(dist)?;
    let (best, &mass) = cp
        .probabilities()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least two classes");
    if 1.0 - mass <= tol {
        Ok(Classification::Definite(best))
    } else {
        Ok(Classification::Mixed(cp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiport::count_distribution;
    use crate::states::{Ensemble, PureState};

    #[test]
    fn class_arithmetic_examples() {
        assert_eq!(suppression_class(&CountConfiguration::new([1, 1, 1])).unwrap(), 0);
        assert_eq!(suppression_class(&CountConfiguration::new([2, 1, 0])).unwrap(), 1);
        assert_eq!(suppression_class(&CountConfiguration::new([3, 0, 0])).unwrap(), 0);
        assert_eq!(suppression_class(&CountConfiguration::new([1, 1])).unwrap(), 1);
        assert!(suppression_class(&CountConfiguration::new([1, 1, 1, 0])).is_err());
    }

    #[test]
    fn tripartite_class_sets_match_table_groupings() {
        let sets = class_sets(3).unwrap();
        let as_vecs = |k: usize| -> Vec<Vec<u8>> {
            sets[k].iter().map(|c| c.counts().to_vec()).collect()
        };
        let mut a0 = as_vecs(0);
        a0.sort();
        assert_eq!(a0, alloc::vec![
            alloc::vec![0, 0, 3],
            alloc::vec![0, 3, 0],
            alloc::vec![1, 1, 1],
            alloc::vec![3, 0, 0],
        ]);
        let mut a1 = as_vecs(1);
        a1.sort();
        assert_eq!(a1, alloc::vec![
            alloc::vec![0, 2, 1],
            alloc::vec![1, 0, 2],
            alloc::vec![2, 1, 0],
        ]);
        let mut a2 = as_vecs(2);
        a2.sort();
        assert_eq!(a2, alloc::vec![
            alloc::vec![0, 1, 2],
            alloc::vec![1, 2, 0],
            alloc::vec![2, 0, 1],
        ]);
    }

    #[test]
    fn bipartite_classes_are_bunch_and_antibunch() {
        let sets = class_sets(2).unwrap();
        let mut a0: Vec<Vec<u8>> = sets[0].iter().map(|c| c.counts().to_vec()).collect();
        a0.sort();
        assert_eq!(a0, alloc::vec![alloc::vec![0, 2], alloc::vec![2, 0]]);
        assert_eq!(sets[1].len(), 1);
        assert_eq!(sets[1][0].counts(), &[1, 1]);
    }

    #[test]
    fn class_sets_partition_all_configurations() {
        for n in 2..=7 {
            let sets = class_sets(n).unwrap();
            let assigned: usize = sets.iter().map(Vec::len).sum();
            assert_eq!(assigned, all_configurations(n, n).len());
            let mut seen = alloc::collections::BTreeSet::new();
            for set in &sets {
                for config in set {
                    assert!(seen.insert(config.clone()), "duplicate {config:?}");
                }
            }
        }
    }

    #[test]
    fn class_probabilities_for_canonical_inputs() {
        let u = UnitaryMatrix::qft(3).unwrap();
        let rho_a = Ensemble::rho_representative(3, 0).unwrap();
        let cp = class_probabilities(&evolve_grouped(&rho_a, &u).unwrap()).unwrap();
        assert!((cp.probabilities()[0] - 1.0).abs() < 1e-12);

        let dist_state = PureState::basis(3, 3, [1, 2, 3]).unwrap();
        let cp = class_probabilities(&evolve_grouped(&dist_state, &u).unwrap()).unwrap();
        for &p in cp.probabilities() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }

        let plus = PureState::symmetric(3).unwrap();
        let cp = class_probabilities(&evolve_grouped(&plus, &u).unwrap()).unwrap();
        assert!((cp.probabilities()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operational_measure_examples() {
        let m = ClassProbabilities::new(alloc::vec![1.0, 0.0, 0.0]).unwrap();
        assert!((m.operational_measure() - 1.0).abs() < 1e-15);
        let m = ClassProbabilities::new(alloc::vec![1.0 / 3.0; 3]).unwrap();
        assert!(m.operational_measure() < 1e-15);
        let m = ClassProbabilities::new(alloc::vec![0.0, 1.0, 0.0]).unwrap();
        assert!((m.operational_measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn multiport_measure_matches_definitional_on_representatives() {
        for k in 0..3 {
            let rho = Ensemble::rho_representative(3, k).unwrap();
            let via = measure_via_multiport(&rho).unwrap();
            let def = crate::perm::cyclic_measure(&rho).unwrap();
            assert!((via - 1.0).abs() < 1e-12 && (def - 1.0).abs() < 1e-12, "k={k}");
        }
        let dist = PureState::basis(3, 3, [1, 2, 3]).unwrap();
        assert!(measure_via_multiport(&dist).unwrap() < 1e-12);
        let lam = PureState::cyclic_eigenstate(5, 2).unwrap();
        assert!((measure_via_multiport(&lam).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classification_examples() {
        let u = UnitaryMatrix::qft(3).unwrap();
        let rho_g = Ensemble::rho_representative(3, 2).unwrap();
        let dist = evolve_grouped(&rho_g, &u).unwrap();
        assert_eq!(classify_state(&dist).unwrap(), Classification::Definite(2));

        let minus = PureState::antisymmetric(3).unwrap();
        let dist = count_distribution(&minus.evolve(&u).unwrap()).unwrap();
        assert_eq!(classify_state(&dist).unwrap(), Classification::Definite(0));

        let halves = Ensemble::new(alloc::vec![
            (0.25, PureState::cyclic_eigenstate(3, 1).unwrap()),
            (0.25, PureState::barred_eigenstate(3, 1).unwrap()),
            (0.25, PureState::cyclic_eigenstate(3, 2).unwrap()),
            (0.25, PureState::barred_eigenstate(3, 2).unwrap()),
        ])
        .unwrap();
        let dist = evolve_grouped(&halves, &u).unwrap();
        match classify_state(&dist).unwrap() {
            Classification::Mixed(cp) => {
                let p = cp.probabilities();
                assert!(p[0].abs() < 1e-12);
                assert!((p[1] - 0.5).abs() < 1e-12);
                assert!((p[2] - 0.5).abs() < 1e-12);
            }
            other => panic!("expected mixed, got {other:?}"),
        }
    }

    #[test]
    fn non_sector_states_rejected_by_multiport_measure() {
        let bunched = PureState::basis(2, 2, [1, 1]).unwrap();
        assert!(measure_via_multiport(&bunched).is_err());
        let rect = PureState::basis(2, 3, [1, 2]).unwrap();
        assert!(measure_via_multiport(&rect).is_err());
    }
}
