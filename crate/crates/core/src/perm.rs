//! Permutations of particle labels and the indistinguishability measures
//! built from permutation expectation values.
//!
//! A [`Permutation`] is a bijection on particle labels `1..=n`; applying it to
//! a state moves the mode value carried by particle `i` into slot `image[i]`.
//! The same bijection can instead be read as a relabeling of *modes*
//! ([`Permutation::relabel_modes`]): the two actions commute and coincide on
//! the canonical cyclic orbits, but differ on generic states.
//!
//! The cyclic indistinguishability measure ([`cyclic_measure`]) uses the
//! cyclic mode relabeling: that is the symmetry the Fourier-multiport
//! suppression law responds to, and it makes the operational class-probability
//! formula exact for arbitrary one-particle-per-port inputs (see
//! [`crate::suppression::measure_via_multiport`]). Pairwise and shorter-cycle
//! measures act on particle labels.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::states::{ModeAssignment, PureState, State};
use crate::Complex;

/// Bijection on particle labels `1..=n`; `image[i-1]` is where label `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n as u8).collect(),
        }
    }

    /// Builds a permutation from its image tuple, checking bijectivity.
    pub fn from_image(image: impl Into<Vec<u8>>) -> Result<Self> {
        let image = image.into();
        let n = image.len();
        if n == 0 || n > 255 {
            return Err(domain("permutation size must be in 1..=255"));
        }
        let mut seen = alloc::vec![false; n + 1];
        for &v in &image {
            if v < 1 || v as usize > n || seen[v as usize] {
                return Err(domain("image tuple is not a bijection on 1..=n"));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { image })
    }

    /// Swap of labels `i` and `j`, all others fixed.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == j || i < 1 || j < 1 || i > n || j > n {
            return Err(domain(alloc::format!(
                "transposition needs distinct labels in 1..={n}, got ({i}, {j})"
            )));
        }
        let mut image: Vec<u8> = (1..=n as u8).collect();
        image.swap(i - 1, j - 1);
        Ok(Permutation { image })
    }

    /// The n-cycle sending `|1, 2, …, n⟩` to `|n, 1, …, n−1⟩`.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::partial_cycle(n, n)
    }

    /// Cycle on the first `m` labels, identity on the rest; `2 ≤ m ≤ n`.
    pub fn partial_cycle(n: usize, m: usize) -> Result<Self> {
        if m < 2 || m > n {
            return Err(domain(alloc::format!(
                "partial cycle length {m} outside 2..={n}"
            )));
        }
        let image = (1..=n as u8)
            .map(|i| if (i as usize) < m { i + 1 } else if (i as usize) == m { 1 } else { i })
            .collect();
        Ok(Permutation { image })
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.size() != other.size() {
            return Err(domain("composing permutations of different sizes"));
        }
        Ok(Permutation {
            image: other
                .image
                .iter()
                .map(|&v| self.image[v as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut image = alloc::vec![0u8; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = i as u8 + 1;
        }
        Permutation { image }
    }

    /// Parity: `+1` for even permutations, `-1` for odd.
    pub fn sign(&self) -> i8 {
        let mut sign = 1i8;
        let mut seen = alloc::vec![false; self.image.len()];
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                at = self.image[at] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All `n!` permutations, in no particular order.
    pub fn all(n: usize) -> Vec<Permutation> {
        // Heap's algorithm.
        let mut image: Vec<u8> = (1..=n as u8).collect();
        let mut out = Vec::with_capacity((1..=n).product());
        let mut counters = alloc::vec![0usize; n];
        out.push(Permutation { image: image.clone() });
        let mut i = 0;
        while i < n {
            if counters[i] < i {
                if i % 2 == 0 {
                    image.swap(0, i);
                } else {
                    image.swap(counters[i], i);
                }
                out.push(Permutation { image: image.clone() });
                counters[i] += 1;
                i = 0;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        out
    }

    /// Relabels the particle slots of `assignment`: the mode carried by
    /// particle `i` moves to slot `image[i]`.
    pub fn apply_assignment(&self, assignment: &ModeAssignment) -> Result<ModeAssignment> {
        if assignment.len() != self.size() {
            return Err(domain("permutation size does not match particle count"));
        }
        let modes = assignment.modes();
        let mut out = alloc::vec![0u8; modes.len()];
        for (i, &m) in modes.iter().enumerate() {
            out[self.image[i] as usize - 1] = m;
        }
        Ok(ModeAssignment::new(out))
    }

    /// Applies the label permutation to every basis assignment of `state`.
    /// Norm is preserved exactly.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if state.particle_count() != self.size() {
            return Err(domain("permutation size does not match particle count"));
        }
        Ok(state.map_assignments(|a| {
            self.apply_assignment(a).expect("validated length")
        }))
    }

    /// Relabels modes instead of particles: every mode value `m` becomes
    /// `image[m]`. Requires the permutation size to equal the mode count.
    pub fn relabel_modes(&self, state: &PureState) -> Result<PureState> {
        if state.mode_count() != self.size() {
            return Err(domain("permutation size does not match mode count"));
        }
        Ok(state.map_assignments(|a| {
            ModeAssignment::new(
                a.modes()
                    .iter()
                    .map(|&m| self.image[m as usize - 1])
                    .collect::<Vec<u8>>(),
            )
        }))
    }
}

/// `⟨ψ|Π|ψ⟩` for pure states, `Σ w_m ⟨ψ_m|Π|ψ_m⟩` for ensembles.
pub fn expectation(perm: &Permutation, state: &impl State) -> Result<Complex> {
    weighted_expectation(state, |psi| psi.inner(&perm.apply(psi)?))
}

/// Expectation of the mode-relabeling action of `perm`.
pub fn mode_expectation(perm: &Permutation, state: &impl State) -> Result<Complex> {
    weighted_expectation(state, |psi| psi.inner(&perm.relabel_modes(psi)?))
}

fn weighted_expectation(
    state: &impl State,
    f: impl Fn(&PureState) -> Result<Complex>,
) -> Result<Complex> {
    let mut acc = Complex::ZERO;
    for (w, psi) in state.weighted_members() {
        acc += f(psi)? * w;
    }
    Ok(acc)
}

/// Bipartite measure `I_ij = |⟨ψ|Π_ij|ψ⟩|²`.
pub fn pairwise_measure(state: &impl State, i: usize, j: usize) -> Result<f64> {
    let t = Permutation::transposition(state.particle_count(), i, j)?;
    Ok(expectation(&t, state)?.norm_sqr())
}

/// Genuine n-partite measure `I_{12…n}`: squared expectation of the cyclic
/// mode relabeling. Equals 1 on every cyclic eigenstate and 0 on states whose
/// cyclic image is orthogonal.
pub fn cyclic_measure(state: &impl State) -> Result<f64> {
    let d = state.mode_count();
    if d < 2 {
        // A single mode admits only the identity relabeling.
        return Ok(1.0);
    }
    let shift = Permutation::cycle(d)?;
    Ok(mode_expectation(&shift, state)?.norm_sqr())
}

/// Shorter-cycle measure `I_{1…m}` for `m < n`: cycle on the first `m`
/// particle labels, identity elsewhere.
pub fn partial_cyclic_measure(state: &impl State, m: usize) -> Result<f64> {
    let c = Permutation::partial_cycle(state.particle_count(), m)?;
    Ok(expectation(&c, state)?.norm_sqr())
}
