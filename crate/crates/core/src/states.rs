//! Mode-assignment basis, pure states, mixtures, and the canonical state
//! constructors.
//!
//! Mode indices are 1-based (`|123⟩` puts the first particle in mode 1);
//! particle-count configurations elsewhere in the crate are 0-indexed. A state
//! over `n` particles and `d` modes is a sparse complex-amplitude map over
//! assignments `(k_1, …, k_n)` with `k_i ∈ 1..=d`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::perm::Permutation;
use crate::Complex;

/// Unit-norm / weight-sum tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Amplitudes below this modulus are dropped after arithmetic.
pub const PRUNE_TOL: f64 = 1e-14;

/// Ordered tuple of mode indices, one per particle; entries are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeAssignment(Vec<u8>);

impl ModeAssignment {
    pub fn new(modes: impl Into<Vec<u8>>) -> Self {
        ModeAssignment(modes.into())
    }

    pub fn modes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no two particles share a mode (requires `d >= n` to be
    /// satisfiable).
    pub fn one_particle_per_mode(&self) -> bool {
        let mut seen = [false; 256];
        self.0.iter().all(|&m| {
            let fresh = !seen[m as usize];
            seen[m as usize] = true;
            fresh
        })
    }

    pub(crate) fn validate(&self, n: usize, d: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(domain(alloc::format!(
                "assignment has {} entries, expected {n}",
                self.0.len()
            )));
        }
        if let Some(&m) = self.0.iter().find(|&&m| m < 1 || m as usize > d) {
            return Err(domain(alloc::format!("mode index {m} outside 1..={d}")));
        }
        Ok(())
    }

    /// Cyclic relabeling of modes, `k ↦ k - 1` with wrap-around over `1..=d`.
    pub(crate) fn mode_shift_down(&self, d: u8) -> Self {
        ModeAssignment(
            self.0
                .iter()
                .map(|&m| if m == 1 { d } else { m - 1 })
                .collect(),
        )
    }
}

impl From<&[u8]> for ModeAssignment {
    fn from(modes: &[u8]) -> Self {
        ModeAssignment(modes.to_vec())
    }
}

/// Normalized complex superposition over mode assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    d: usize,
    amps: BTreeMap<ModeAssignment, Complex>,
}

impl PureState {
    /// Builds the normalized superposition of `terms`. Duplicate assignments
    /// have their amplitudes summed before normalization.
    pub fn new(
        n: usize,
        d: usize,
        terms: impl IntoIterator<Item = (ModeAssignment, Complex)>,
    ) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(domain("particle and mode counts must be at least 1"));
        }
        let mut amps: BTreeMap<ModeAssignment, Complex> = BTreeMap::new();
        let mut any = false;
        for (assignment, amp) in terms {
            assignment.validate(n, d)?;
            any = true;
            *amps.entry(assignment).or_insert(Complex::ZERO) += amp;
        }
        if !any {
            return Err(domain("state needs at least one term"));
        }
        Self::normalized(n, d, amps)
    }

    /// Single basis ket `|k_1 … k_n⟩`.
    pub fn basis(n: usize, d: usize, modes: impl Into<Vec<u8>>) -> Result<Self> {
        Self::new(n, d, [(ModeAssignment::new(modes), Complex::ONE)])
    }

    /// Cyclic eigenstate `|λ^k⟩`: the λ^{mk}-weighted superposition of the
    /// cyclic images of the seed `|1, 2, …, n⟩`, with `λ = e^{i2π/n}`.
    ///
    /// `k` is a residue in `0..n`; `k = 0` is the eigenvalue-1 state.
    pub fn cyclic_eigenstate(n: usize, k: usize) -> Result<Self> {
        Self::eigenstate_from_seed(n, k, (1..=n as u8).collect())
    }

    /// Partner eigenstate built on the transposed seed `|2, 1, 3, …, n⟩`.
    ///
    /// For `n = 3` this reproduces `|ᾱ⟩`, `|β̄⟩`, `|γ̄⟩` exactly.
    pub fn barred_eigenstate(n: usize, k: usize) -> Result<Self> {
        let mut seed: Vec<u8> = (1..=n as u8).collect();
        seed.swap(0, 1);
        Self::eigenstate_from_seed(n, k, seed)
    }

    fn eigenstate_from_seed(n: usize, k: usize, seed: Vec<u8>) -> Result<Self> {
        if n < 2 {
            return Err(domain("cyclic eigenstates need at least 2 particles"));
        }
        if k >= n {
            return Err(domain(alloc::format!("k = {k} outside 0..{n}")));
        }
        let step = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
        let mut assignment = ModeAssignment::new(seed);
        let mut terms = Vec::with_capacity(n);
        for m in 0..n {
            let phase = Complex::from_polar(1.0, step * m as f64);
            terms.push((assignment.clone(), phase));
            assignment = assignment.mode_shift_down(n as u8);
        }
        Self::new(n, n, terms)
    }

    /// Totally symmetric state `|+⟩` on the one-particle-per-mode seed.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::permanent_like(n, |_| Complex::ONE)
    }

    /// Totally antisymmetric state `|−⟩` (Slater determinant of `n` modes).
    pub fn antisymmetric(n: usize) -> Result<Self> {
        Self::permanent_like(n, |p| Complex::new(p.sign() as f64, 0.0))
    }

    fn permanent_like(n: usize, coeff: impl Fn(&Permutation) -> Complex) -> Result<Self> {
        if n < 2 {
            return Err(domain("symmetrized states need at least 2 particles"));
        }
        let terms = Permutation::all(n).into_iter().map(|p| {
            let c = coeff(&p);
            (ModeAssignment::new(p.image().to_vec()), c)
        });
        Self::new(n, n, terms)
    }

    fn normalized(n: usize, d: usize, mut amps: BTreeMap<ModeAssignment, Complex>) -> Result<Self> {
        let norm_sqr: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        if norm_sqr < PRUNE_TOL * PRUNE_TOL {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / num_traits::Float::sqrt(norm_sqr);
        amps = amps
            .into_iter()
            .filter_map(|(k, a)| {
                let a = a * scale;
                (a.norm() >= PRUNE_TOL).then_some((k, a))
            })
            .collect();
        Ok(PureState { n, d, amps })
    }

    /// Rebuilds a state from raw amplitudes produced by internal arithmetic,
    /// checking the norm drifted by no more than `tol` before renormalizing.
    pub(crate) fn from_evolved(
        n: usize,
        d: usize,
        amps: BTreeMap<ModeAssignment, Complex>,
        tol: f64,
    ) -> Result<Self> {
        let norm_sqr: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::Consistency(alloc::format!(
                "norm² drifted to {norm_sqr}"
            )));
        }
        Self::normalized(n, d, amps)
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn mode_count(&self) -> usize {
        self.d
    }

    /// Amplitude on `assignment` (zero when absent).
    pub fn amplitude(&self, assignment: &ModeAssignment) -> Complex {
        self.amps.get(assignment).copied().unwrap_or(Complex::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModeAssignment, Complex)> + '_ {
        self.amps.iter().map(|(k, &a)| (k, a))
    }

    pub fn term_count(&self) -> usize {
        self.amps.len()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex> {
        if self.n != other.n || self.d != other.d {
            return Err(domain("inner product between mismatched state spaces"));
        }
        Ok(self
            .amps
            .iter()
            .map(|(k, a)| a.conj() * other.amplitude(k))
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// True when every basis assignment puts at most one particle per mode.
    pub fn one_particle_per_mode(&self) -> bool {
        self.amps.keys().all(ModeAssignment::one_particle_per_mode)
    }

    pub(crate) fn map_assignments(
        &self,
        f: impl Fn(&ModeAssignment) -> ModeAssignment,
    ) -> PureState {
        PureState {
            n: self.n,
            d: self.d,
            amps: self.amps.iter().map(|(k, &a)| (f(k), a)).collect(),
        }
    }
}

/// Weighted convex mixture of pure states; represents a density operator
/// diagonal in its member list.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let (first, rest) = members
            .split_first()
            .ok_or_else(|| domain("ensemble needs at least one member"))?;
        let (n, d) = (first.1.particle_count(), first.1.mode_count());
        for (w, state) in core::iter::once(first).chain(rest) {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(domain(alloc::format!("weight {w} outside (0, 1]")));
            }
            if state.particle_count() != n || state.mode_count() != d {
                return Err(domain("ensemble members disagree on (n, d)"));
            }
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(domain(alloc::format!("weights sum to {total}, not 1")));
        }
        Ok(Ensemble { members })
    }

    /// Parastatistics representative `ρ_k = ½|λ^k⟩⟨λ^k| + ½|λ̄^k⟩⟨λ̄^k|`.
    ///
    /// For `n = 3` and `k = 0, 1, 2` this reproduces `ρ_α`, `ρ_β`, `ρ_γ`.
    pub fn rho_representative(n: usize, k: usize) -> Result<Self> {
        Ensemble::new(alloc::vec![
            (0.5, PureState::cyclic_eigenstate(n, k)?),
            (0.5, PureState::barred_eigenstate(n, k)?),
        ])
    }

    pub fn members(&self) -> impl Iterator<Item = (f64, &PureState)> + '_ {
        self.members.iter().map(|(w, s)| (*w, s))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn particle_count(&self) -> usize {
        self.members[0].1.particle_count()
    }

    pub fn mode_count(&self) -> usize {
        self.members[0].1.mode_count()
    }
}

/// Common read-only view over [`PureState`] and [`Ensemble`].
///
/// Every functional in the crate (permutation expectations, output
/// statistics, the operational measure) is affine in the mixture, so generic
/// code only needs to fold over weighted pure members.
pub trait State {
    fn particle_count(&self) -> usize;
    fn mode_count(&self) -> usize;
    fn weighted_members(&self) -> impl Iterator<Item = (f64, &PureState)> + '_;
}

impl State for PureState {
    fn particle_count(&self) -> usize {
        self.particle_count()
    }

    fn mode_count(&self) -> usize {
        self.mode_count()
    }

    fn weighted_members(&self) -> impl Iterator<Item = (f64, &PureState)> + '_ {
        core::iter::once((1.0, self))
    }
}

impl State for Ensemble {
    fn particle_count(&self) -> usize {
        self.particle_count()
    }

    fn mode_count(&self) -> usize {
        self.mode_count()
    }

    fn weighted_members(&self) -> impl Iterator<Item = (f64, &PureState)> + '_ {
        self.members()
    }
}
