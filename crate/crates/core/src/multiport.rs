//! Single-particle unitaries applied identically to all particles
//! (`U ⊗ … ⊗ U`), Fourier multiports, and particle-count statistics.
//!
//! Two evolution routes are provided: [`PureState::evolve`] materializes the
//! full `d^n` output amplitude map and is the correctness oracle;
//! [`evolve_grouped`] sweeps output count configurations and accumulates each
//! configuration's probability from its distinct orderings without holding
//! the whole output state. The grouped sweep touches each configuration
//! independently from read-only data, so it can be parallelized over
//! configurations without any shared mutable state.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::states::{Ensemble, ModeAssignment, PureState, State};
use crate::Complex;

/// Entrywise tolerance for the unitarity check `U†U = I`.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Tolerance on total probability of a distribution.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// A `d×d` single-particle mode transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex>, // row-major
}

impl UnitaryMatrix {
    /// Builds a matrix from row-major entries, rejecting non-unitary input.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim < 1 {
            return Err(domain("unitary dimension must be at least 1"));
        }
        if entries.len() != dim * dim {
            return Err(domain(alloc::format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let u = UnitaryMatrix { dim, entries };
        let dev = u.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(domain(alloc::format!(
                "matrix is not unitary (max |U†U - I| = {dev:.3e})"
            )));
        }
        Ok(u)
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let mut acc = Complex::ZERO;
                for r in 0..self.dim {
                    acc += self.get(r, j).conj() * self.get(r, k);
                }
                let target = if j == k { Complex::ONE } else { Complex::ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// The d-mode quantum Fourier transform,
    /// `U_{jk} = e^{i(2π/d)(j-1)(k-1)} / √d`.
    ///
    /// `qft(3)` is the tritter; `qft(2)` the balanced beam splitter.
    pub fn qft(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(domain("QFT multiport needs at least 2 modes"));
        }
        let root = 1.0 / num_traits::Float::sqrt(d as f64);
        let step = 2.0 * core::f64::consts::PI / d as f64;
        let entries = (0..d * d)
            .map(|idx| {
                let (j, k) = (idx / d, idx % d);
                // reduce the exponent first so large j*k stays accurate
                let e = (j * k) % d;
                Complex::from_polar(root, step * e as f64)
            })
            .collect();
        Ok(UnitaryMatrix { dim: d, entries })
    }

    pub fn identity(d: usize) -> Self {
        let entries = (0..d * d)
            .map(|idx| {
                if idx / d == idx % d {
                    Complex::ONE
                } else {
                    Complex::ZERO
                }
            })
            .collect();
        UnitaryMatrix { dim: d, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at (row, col), 0-indexed.
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let entries = (0..self.dim * self.dim)
            .map(|idx| self.get(idx % self.dim, idx / self.dim).conj())
            .collect();
        UnitaryMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// Matrix product `self · other`.
    pub fn multiply(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(domain("multiplying unitaries of different dimensions"));
        }
        let d = self.dim;
        let entries = (0..d * d)
            .map(|idx| {
                let (r, c) = (idx / d, idx % d);
                (0..d).map(|m| self.get(r, m) * other.get(m, c)).sum()
            })
            .collect();
        Ok(UnitaryMatrix { dim: d, entries })
    }
}

/// Particles per output port: counts `(a_0, …, a_{d-1})`, 0-indexed by port.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountConfiguration(Vec<u8>);

impl CountConfiguration {
    pub fn new(counts: impl Into<Vec<u8>>) -> Self {
        CountConfiguration(counts.into())
    }

    pub fn from_assignment(assignment: &ModeAssignment, d: usize) -> Self {
        let mut counts = alloc::vec![0u8; d];
        for &m in assignment.modes() {
            counts[m as usize - 1] += 1;
        }
        CountConfiguration(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    /// Number of ports.
    pub fn ports(&self) -> usize {
        self.0.len()
    }

    /// Total particle number.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }
}

/// All configurations of `n` particles over `d` ports, lexicographically
/// sorted. This ordering is normative for serialized output.
pub fn all_configurations(n: usize, d: usize) -> Vec<CountConfiguration> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<u8>, out: &mut Vec<CountConfiguration>) {
        if slots == 1 {
            prefix.push(left as u8);
            out.push(CountConfiguration::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for take in 0..=left {
            prefix.push(take as u8);
            rec(left - take, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Probability per particle-count configuration, with complete support over
/// all configurations of `(n, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n: usize,
    d: usize,
    probs: BTreeMap<CountConfiguration, f64>,
}

impl OutcomeDistribution {
    fn zero(n: usize, d: usize) -> Self {
        OutcomeDistribution {
            n,
            d,
            probs: all_configurations(n, d)
                .into_iter()
                .map(|c| (c, 0.0))
                .collect(),
        }
    }

    fn accumulate(&mut self, config: CountConfiguration, p: f64) -> Result<()> {
        if p < -1e-12 {
            return Err(Error::Consistency(alloc::format!(
                "negative probability {p} for {:?}",
                config.counts()
            )));
        }
        match self.probs.get_mut(&config) {
            Some(slot) => {
                *slot += p;
                Ok(())
            }
            None => Err(Error::Consistency("configuration outside (n, d)".into())),
        }
    }

    fn finalized(mut self) -> Result<Self> {
        let total = self.total();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::Consistency(alloc::format!(
                "distribution total {total} differs from 1"
            )));
        }
        for p in self.probs.values_mut() {
            *p = p.clamp(0.0, 1.0);
        }
        Ok(self)
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn ports(&self) -> usize {
        self.d
    }

    pub fn probability(&self, config: &CountConfiguration) -> f64 {
        self.probs.get(config).copied().unwrap_or(0.0)
    }

    /// Configurations in lexicographic order with their probabilities.
    pub fn iter(&self) -> impl Iterator<Item = (&CountConfiguration, f64)> + '_ {
        self.probs.iter().map(|(c, &p)| (c, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Weighted pointwise combination; used to lift member distributions to an
    /// ensemble. Pairs must share `(n, d)` and weights must sum to 1.
    pub fn mix(parts: &[(f64, OutcomeDistribution)]) -> Result<Self> {
        let (n, d) = parts
            .first()
            .map(|(_, dist)| (dist.n, dist.d))
            .ok_or_else(|| domain("mixing zero distributions"))?;
        let mut out = OutcomeDistribution::zero(n, d);
        for (w, dist) in parts {
            if dist.n != n || dist.d != d {
                return Err(domain("mixing distributions over different (n, d)"));
            }
            for (config, p) in dist.iter() {
                out.accumulate(config.clone(), w * p)?;
            }
        }
        out.finalized()
    }
}

impl PureState {
    /// Applies `u` to every particle slot independently, materializing the
    /// full output amplitude map (the brute-force oracle): the amplitude of
    /// output assignment `(j_1…j_n)` is `Σ_in α_in · Π_i U_{j_i k_i}`.
    pub fn evolve(&self, u: &UnitaryMatrix) -> Result<PureState> {
        let (n, d) = (self.particle_count(), self.mode_count());
        if u.dim() != d {
            return Err(domain("unitary dimension does not match mode count"));
        }
        let inputs: Vec<(&ModeAssignment, Complex)> = self.terms().collect();
        let mut amps: BTreeMap<ModeAssignment, Complex> = BTreeMap::new();
        let mut output = alloc::vec![1u8; n];
        loop {
            let amp = output_amplitude(&output, &inputs, u);
            if amp.norm() >= crate::states::PRUNE_TOL {
                amps.insert(ModeAssignment::new(output.clone()), amp);
            }
            if !advance(&mut output, d as u8) {
                break;
            }
        }
        PureState::from_evolved(n, d, amps, DISTRIBUTION_TOL)
    }
}

impl Ensemble {
    /// Member-wise evolution under `u`.
    pub fn evolve(&self, u: &UnitaryMatrix) -> Result<Ensemble> {
        let members = self
            .members()
            .map(|(w, psi)| Ok((w, psi.evolve(u)?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(members)
    }
}

fn output_amplitude(
    output: &[u8],
    inputs: &[(&ModeAssignment, Complex)],
    u: &UnitaryMatrix,
) -> Complex {
    inputs
        .iter()
        .map(|(assignment, alpha)| {
            let mut prod = *alpha;
            for (&j, &k) in output.iter().zip(assignment.modes()) {
                prod *= u.get(j as usize - 1, k as usize - 1);
            }
            prod
        })
        .sum()
}

/// Odometer step over assignments with entries in `1..=d`; false on wrap.
fn advance(digits: &mut [u8], d: u8) -> bool {
    for slot in digits.iter_mut().rev() {
        if *slot < d {
            *slot += 1;
            return true;
        }
        *slot = 1;
    }
    false
}

/// Marginalizes `|amplitude|²` over all assignments sharing the same count
/// configuration; ensembles contribute their weighted member distributions.
pub fn count_distribution(state: &impl State) -> Result<OutcomeDistribution> {
    let (n, d) = (state.particle_count(), state.mode_count());
    let mut out = OutcomeDistribution::zero(n, d);
    for (w, psi) in state.weighted_members() {
        for (assignment, amp) in psi.terms() {
            let config = CountConfiguration::from_assignment(assignment, d);
            out.accumulate(config, w * amp.norm_sqr())?;
        }
    }
    out.finalized()
}

/// Output count distribution of `state` under `u`, computed per configuration
/// without materializing all `d^n` output amplitudes: each configuration
/// accumulates `|Σ_in α_in Π_i U_{j_i k_i}|²` over its distinct orderings.
pub fn evolve_grouped(state: &impl State, u: &UnitaryMatrix) -> Result<OutcomeDistribution> {
    let (n, d) = (state.particle_count(), state.mode_count());
    if u.dim() != d {
        return Err(domain("unitary dimension does not match mode count"));
    }
    let mut out = OutcomeDistribution::zero(n, d);
    for (w, psi) in state.weighted_members() {
        let inputs: Vec<(&ModeAssignment, Complex)> = psi.terms().collect();
        for config in all_configurations(n, d) {
            let mut p = 0.0;
            let mut remaining = config.counts().to_vec();
            let mut ordering = Vec::with_capacity(n);
            orderings(&mut remaining, &mut ordering, n, &mut |output| {
                p += output_amplitude(output, &inputs, u).norm_sqr();
            });
            out.accumulate(config, w * p)?;
        }
    }
    out.finalized()
}

/// Visits every distinct ordering of the configuration held in `remaining`.
fn orderings(remaining: &mut [u8], prefix: &mut Vec<u8>, n: usize, visit: &mut impl FnMut(&[u8])) {
    if prefix.len() == n {
        visit(prefix);
        return;
    }
    for mode in 0..remaining.len() {
        if remaining[mode] > 0 {
            remaining[mode] -= 1;
            prefix.push(mode as u8 + 1);
            orderings(remaining, prefix, n, visit);
            prefix.pop();
            remaining[mode] += 1;
        }
    }
}

/// Hong-Ou-Mandel probabilities on the balanced beam splitter:
/// `(p_bunch, p_antibunch)` for a two-particle, two-mode state in the
/// one-particle-per-port sector.
pub fn hom_probabilities(state: &impl State) -> Result<(f64, f64)> {
    if state.particle_count() != 2 || state.mode_count() != 2 {
        return Err(domain("HOM needs a two-particle, two-mode state"));
    }
    for (_, psi) in state.weighted_members() {
        if !psi.one_particle_per_mode() {
            return Err(domain("HOM input must occupy distinct input ports"));
        }
    }
    let dist = evolve_grouped(state, &UnitaryMatrix::qft(2)?)?;
    let bunch = dist.probability(&CountConfiguration::new([2, 0]))
        + dist.probability(&CountConfiguration::new([0, 2]));
    let anti = dist.probability(&CountConfiguration::new([1, 1]));
    Ok((bunch, anti))
}
