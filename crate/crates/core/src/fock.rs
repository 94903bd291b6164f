//! Occupation-number machinery: determinant basis enumeration, diagonal
//! operators over it, wedge-power projectors, and the full many-body
//! spectrum obtained by brute force.
//!
//! Every operator handled by this crate is diagonal in the determinant
//! basis built from the eigenbasis of the generating one-body operator, so
//! a dense vector of entries over the `C(n, N)` basis states is the common
//! representation. The basis order is deterministic: bitmasks in increasing
//! integer value, i.e. colexicographic subset order.

use crate::error::{Error, Result};
use crate::scalar::{NumericPolicy, Scalar};
use crate::spectrum::OneBodySpectrum;

/// Default cap on the number of basis determinants.
pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

/// Binomial coefficient as an exact `u128`. Returns 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// An N-of-n occupation pattern naming one determinant basis state.
///
/// Bit `i` set means orbital `i` (0-based) is occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState {
    bits: u64,
    n_orbitals: usize,
}

impl OccupationState {
    pub fn new(bits: u64, n_orbitals: usize) -> Result<Self> {
        if n_orbitals == 0 || n_orbitals > 64 {
            return Err(Error::InvalidParams(format!(
                "orbital count {n_orbitals} outside supported range 1..=64"
            )));
        }
        if n_orbitals < 64 && bits >> n_orbitals != 0 {
            return Err(Error::OrbitalOutOfRange {
                orbital: 63 - bits.leading_zeros() as usize + 1,
                n_orbitals,
            });
        }
        Ok(OccupationState { bits, n_orbitals })
    }

    /// Builds a state from 0-based occupied orbital indices.
    pub fn from_orbitals(orbitals: &[usize], n_orbitals: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &orb in orbitals {
            if orb >= n_orbitals {
                return Err(Error::OrbitalOutOfRange {
                    orbital: orb + 1,
                    n_orbitals,
                });
            }
            if bits & (1 << orb) != 0 {
                return Err(Error::InvalidParams(format!(
                    "orbital {} listed twice",
                    orb + 1
                )));
            }
            bits |= 1 << orb;
        }
        OccupationState::new(bits, n_orbitals)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_particles(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, orbital: usize) -> bool {
        orbital < self.n_orbitals && self.bits & (1 << orbital) != 0
    }

    /// Occupied orbitals in ascending order (0-based).
    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_orbitals).filter(|&i| self.bits & (1 << i) != 0)
    }

    /// 1-based occupied labels, for reports.
    pub fn occupied_labels(&self) -> Vec<usize> {
        self.occupied().map(|i| i + 1).collect()
    }

    /// Position of this state in the colexicographic basis order.
    pub fn basis_index(&self) -> usize {
        let mut rank = 0u128;
        for (slot, orbital) in self.occupied().enumerate() {
            rank += binomial(orbital, slot + 1);
        }
        rank as usize
    }
}

/// The full determinant basis for N particles in n orbitals.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_orbitals: usize,
    n_particles: usize,
    states: Vec<OccupationState>,
}

impl FockBasis {
    /// Enumerates all `C(n, N)` occupation states in colexicographic order.
    pub fn new(n_orbitals: usize, n_particles: usize, budget: u64) -> Result<Self> {
        if n_particles > n_orbitals {
            return Err(Error::TooManyParticles {
                n_particles,
                n_orbitals,
            });
        }
        if n_orbitals == 0 || n_orbitals > 64 {
            return Err(Error::InvalidParams(format!(
                "orbital count {n_orbitals} outside supported range 1..=64"
            )));
        }
        let count = binomial(n_orbitals, n_particles);
        if count > budget as u128 {
            return Err(Error::BasisTooLarge {
                states: count,
                budget,
            });
        }
        let mut states = Vec::with_capacity(count as usize);
        if n_particles == 0 {
            states.push(OccupationState {
                bits: 0,
                n_orbitals,
            });
        } else {
            // Gosper's hack: next bitmask with the same popcount.
            let mut mask: u64 = (1u64 << n_particles) - 1;
            let limit: u64 = if n_orbitals == 64 {
                u64::MAX
            } else {
                (1u64 << n_orbitals) - 1
            };
            loop {
                states.push(OccupationState {
                    bits: mask,
                    n_orbitals,
                });
                if states.len() == count as usize {
                    break;
                }
                let c = mask & mask.wrapping_neg();
                let r = mask + c;
                mask = (((r ^ mask) >> 2) / c) | r;
                debug_assert!(mask <= limit);
            }
        }
        Ok(FockBasis {
            n_orbitals,
            n_particles,
            states,
        })
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> OccupationState {
        self.states[index]
    }

    pub fn index_of(&self, state: &OccupationState) -> usize {
        state.basis_index()
    }
}

/// A scalar-valued function on the determinant basis, stored densely in
/// basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    n_orbitals: usize,
    n_particles: usize,
    entries: Vec<Scalar>,
}

impl DiagonalOperator {
    pub fn zero(basis: &FockBasis) -> Self {
        DiagonalOperator {
            n_orbitals: basis.n_orbitals(),
            n_particles: basis.n_particles(),
            entries: vec![Scalar::zero(); basis.dimension()],
        }
    }

    pub fn identity(basis: &FockBasis) -> Self {
        DiagonalOperator {
            n_orbitals: basis.n_orbitals(),
            n_particles: basis.n_particles(),
            entries: vec![Scalar::one(); basis.dimension()],
        }
    }

    pub fn from_fn(basis: &FockBasis, mut f: impl FnMut(&OccupationState) -> Scalar) -> Self {
        DiagonalOperator {
            n_orbitals: basis.n_orbitals(),
            n_particles: basis.n_particles(),
            entries: basis.states().iter().map(|s| f(s)).collect(),
        }
    }

    pub fn from_entries(basis: &FockBasis, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != basis.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a basis of dimension {}",
                entries.len(),
                basis.dimension()
            )));
        }
        Ok(DiagonalOperator {
            n_orbitals: basis.n_orbitals(),
            n_particles: basis.n_particles(),
            entries,
        })
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> &Scalar {
        &self.entries[index]
    }

    pub fn entry_for(&self, state: &OccupationState) -> Result<&Scalar> {
        if state.n_orbitals() != self.n_orbitals
            || state.n_particles() != self.n_particles
        {
            return Err(Error::DimensionMismatch(format!(
                "state over {} orbitals / {} particles against operator over {} / {}",
                state.n_orbitals(),
                state.n_particles(),
                self.n_orbitals,
                self.n_particles
            )));
        }
        Ok(&self.entries[state.basis_index()])
    }

    pub fn add(&self, rhs: &DiagonalOperator) -> Result<DiagonalOperator> {
        if self.n_orbitals != rhs.n_orbitals || self.n_particles != rhs.n_particles {
            return Err(Error::DimensionMismatch(
                "adding operators over different bases".into(),
            ));
        }
        Ok(DiagonalOperator {
            n_orbitals: self.n_orbitals,
            n_particles: self.n_particles,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Scalar) -> DiagonalOperator {
        DiagonalOperator {
            n_orbitals: self.n_orbitals,
            n_particles: self.n_particles,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    /// Entrywise equality under the comparison policy.
    pub fn eq_under(&self, rhs: &DiagonalOperator, policy: &NumericPolicy) -> bool {
        self.n_orbitals == rhs.n_orbitals
            && self.n_particles == rhs.n_particles
            && self
                .entries
                .iter()
                .zip(&rhs.entries)
                .all(|(a, b)| policy.eq(a, b))
    }

    /// Number of entries not equal to zero under the policy; for projector
    /// effects this is the rank.
    pub fn support_size(&self, policy: &NumericPolicy) -> usize {
        self.entries.iter().filter(|e| !policy.is_zero(e)).count()
    }

    /// Indices of the basis states annihilated by this operator.
    pub fn kernel_indices(&self, policy: &NumericPolicy) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| policy.is_zero(e))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_nonnegative(&self, policy: &NumericPolicy) -> bool {
        self.entries.iter().all(|e| !policy.is_negative(e))
    }
}

/// Eigenvalue of the expanded one-body operator on one determinant: the sum
/// of the one-particle eigenvalues over the occupied orbitals.
pub fn many_body_eigenvalue(spec: &OneBodySpectrum, occ: &OccupationState) -> Result<Scalar> {
    if occ.n_orbitals() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "state over {} orbitals against spectrum over {}",
            occ.n_orbitals(),
            spec.n()
        )));
    }
    Ok(occ.occupied().map(|i| spec.value_by_label(i)).sum())
}

/// Realizes the N-particle expansion of the one-body operator as a diagonal
/// operator: the entry at each determinant is its eigenvalue.
pub fn build_one_body_diagonal(spec: &OneBodySpectrum, basis: &FockBasis) -> Result<DiagonalOperator> {
    if basis.n_orbitals() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "basis over {} orbitals against spectrum over {}",
            basis.n_orbitals(),
            spec.n()
        )));
    }
    Ok(DiagonalOperator::from_fn(basis, |occ| {
        occ.occupied().map(|i| spec.value_by_label(i)).sum()
    }))
}

/// The number operator of one orbital (0-based): entry 1 when occupied.
pub fn number_operator(basis: &FockBasis, orbital: usize) -> Result<DiagonalOperator> {
    if orbital >= basis.n_orbitals() {
        return Err(Error::OrbitalOutOfRange {
            orbital: orbital + 1,
            n_orbitals: basis.n_orbitals(),
        });
    }
    Ok(DiagonalOperator::from_fn(basis, |occ| {
        if occ.contains(orbital) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }))
}

/// The complement `1 - n_i`: entry 1 when the orbital is empty.
pub fn hole_projector(basis: &FockBasis, orbital: usize) -> Result<DiagonalOperator> {
    if orbital >= basis.n_orbitals() {
        return Err(Error::OrbitalOutOfRange {
            orbital: orbital + 1,
            n_orbitals: basis.n_orbitals(),
        });
    }
    Ok(DiagonalOperator::from_fn(basis, |occ| {
        if occ.contains(orbital) {
            Scalar::zero()
        } else {
            Scalar::one()
        }
    }))
}

/// Projector selecting determinants with exactly `occupancy` particles
/// inside an orbital subset.
#[derive(Debug, Clone)]
pub struct WedgeProjector {
    subset: u64,
    n_orbitals: usize,
    occupancy: usize,
}

impl WedgeProjector {
    pub fn new(subset: &[usize], occupancy: usize, n_orbitals: usize) -> Result<Self> {
        let state = OccupationState::from_orbitals(subset, n_orbitals)?;
        Ok(WedgeProjector {
            subset: state.bits(),
            n_orbitals,
            occupancy,
        })
    }

    pub fn subset_size(&self) -> usize {
        self.subset.count_ones() as usize
    }

    /// Rank of the projector: `C(|S|, j) * C(n-|S|, N-j)`, zero when the
    /// occupancy cannot be met on either side.
    pub fn rank(&self, n_particles: usize) -> u128 {
        let inside = self.subset_size();
        if self.occupancy > n_particles {
            return 0;
        }
        binomial(inside, self.occupancy)
            * binomial(self.n_orbitals - inside, n_particles - self.occupancy)
    }

    /// Indicator entries over the basis, together with the enumerated rank.
    pub fn realize(&self, basis: &FockBasis) -> Result<(DiagonalOperator, u128)> {
        if basis.n_orbitals() != self.n_orbitals {
            return Err(Error::DimensionMismatch(
                "projector subset and basis orbital counts differ".into(),
            ));
        }
        let mut rank = 0u128;
        let op = DiagonalOperator::from_fn(basis, |occ| {
            if (occ.bits() & self.subset).count_ones() as usize == self.occupancy {
                rank += 1;
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        Ok((op, rank))
    }
}

/// Checks that the occupancy-count projectors of a subset partition the
/// whole basis: pairwise disjoint supports, ranks matching the closed form,
/// and ranks summing to `C(n, N)`.
pub fn verify_partition(subset: &[usize], basis: &FockBasis) -> Result<bool> {
    let n_particles = basis.n_particles();
    let mut covered = vec![false; basis.dimension()];
    let mut total = 0u128;
    for occupancy in 0..=n_particles {
        let projector = WedgeProjector::new(subset, occupancy, basis.n_orbitals())?;
        let (op, enumerated) = projector.realize(basis)?;
        if enumerated != projector.rank(n_particles) {
            return Ok(false);
        }
        total += enumerated;
        for (i, entry) in op.entries().iter().enumerate() {
            if !entry.is_zero() {
                if covered[i] {
                    return Ok(false); // overlap between occupancy blocks
                }
                covered[i] = true;
            }
        }
    }
    Ok(total == basis.dimension() as u128 && covered.iter().all(|&c| c))
}

/// One eigenvalue level of the many-body spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumLevel {
    pub value: Scalar,
    pub degeneracy: usize,
    pub states: Vec<OccupationState>,
}

/// The grouped, sorted spectrum of the expanded one-body operator.
#[derive(Debug, Clone)]
pub struct ManyBodySpectrum {
    levels: Vec<SpectrumLevel>,
}

impl ManyBodySpectrum {
    pub fn levels(&self) -> &[SpectrumLevel] {
        &self.levels
    }

    pub fn min_value(&self) -> &Scalar {
        &self.levels[0].value
    }

    /// The level at eigenvalue zero, when present.
    pub fn kernel_level(&self, policy: &NumericPolicy) -> Option<&SpectrumLevel> {
        self.levels.iter().find(|l| policy.is_zero(&l.value))
    }

    pub fn degeneracy_total(&self) -> usize {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }
}

/// Enumerates all determinant eigenvalues and groups them into levels.
/// Adjacent values are merged under the spectrum's comparison policy.
pub fn full_spectrum(spec: &OneBodySpectrum, basis: &FockBasis) -> Result<ManyBodySpectrum> {
    if basis.n_orbitals() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "basis over {} orbitals against spectrum over {}",
            basis.n_orbitals(),
            spec.n()
        )));
    }
    let policy = spec.policy();
    let mut pairs: Vec<(Scalar, OccupationState)> = basis
        .states()
        .iter()
        .map(|occ| {
            let value: Scalar = occ.occupied().map(|i| spec.value_by_label(i)).sum();
            (value, *occ)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut levels: Vec<SpectrumLevel> = Vec::new();
    for (value, occ) in pairs {
        match levels.last_mut() {
            Some(level) if policy.eq(&level.value, &value) => {
                level.degeneracy += 1;
                level.states.push(occ);
            }
            _ => levels.push(SpectrumLevel {
                value,
                degeneracy: 1,
                states: vec![occ],
            }),
        }
    }
    Ok(ManyBodySpectrum { levels })
}
