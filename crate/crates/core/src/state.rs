//! Pure N-particle states expanded over the determinant basis, the
//! occupation probability measures they induce, expectation values of
//! diagonal operators, the particle/hole classification per orbital, and
//! the one-particle Grassmann factor space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{binomial, DiagonalOperator, OccupationState};
use crate::scalar::{ComplexScalar, NumericMode, NumericPolicy, Scalar};

/// A normalized pure state `sum_I c_I Phi_I` over the determinant basis.
#[derive(Debug, Clone)]
pub struct ManyBodyState {
    n_orbitals: usize,
    n_particles: usize,
    terms: Vec<(OccupationState, ComplexScalar)>,
    policy: NumericPolicy,
}

impl ManyBodyState {
    /// Builds a state from (occupation, amplitude) terms. Terms must name
    /// distinct determinants of a common particle count, and the squared
    /// amplitudes must sum to one under the policy.
    pub fn new(
        n_orbitals: usize,
        n_particles: usize,
        terms: Vec<(OccupationState, ComplexScalar)>,
        policy: NumericPolicy,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParams("state has no terms".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (occ, _) in &terms {
            if occ.n_orbitals() != n_orbitals {
                return Err(Error::DimensionMismatch(format!(
                    "term over {} orbitals in a state over {}",
                    occ.n_orbitals(),
                    n_orbitals
                )));
            }
            if occ.n_particles() != n_particles {
                return Err(Error::DimensionMismatch(format!(
                    "term with {} particles in a state of {}",
                    occ.n_particles(),
                    n_particles
                )));
            }
            if !seen.insert(occ.bits()) {
                return Err(Error::InvalidParams(format!(
                    "determinant {:?} appears twice",
                    occ.occupied_labels()
                )));
            }
        }
        let norm_sqr: Scalar = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        if !policy.eq(&norm_sqr, &Scalar::one()) {
            return Err(Error::UnnormalizedState {
                norm_sqr: norm_sqr.to_string(),
            });
        }
        Ok(ManyBodyState {
            n_orbitals,
            n_particles,
            terms,
            policy,
        })
    }

    /// Internal constructor that skips the normalization check, for
    /// scale-invariant uses (factor-space ranks of generic combinations).
    pub(crate) fn unchecked(
        n_orbitals: usize,
        n_particles: usize,
        terms: Vec<(OccupationState, ComplexScalar)>,
        policy: NumericPolicy,
    ) -> Self {
        ManyBodyState {
            n_orbitals,
            n_particles,
            terms,
            policy,
        }
    }

    /// A single determinant with amplitude one.
    pub fn determinant(occ: OccupationState, policy: NumericPolicy) -> Result<Self> {
        ManyBodyState::new(
            occ.n_orbitals(),
            occ.n_particles(),
            vec![(occ, ComplexScalar::real(Scalar::one()))],
            policy,
        )
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn terms(&self) -> &[(OccupationState, ComplexScalar)] {
        &self.terms
    }

    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    pub fn norm_sqr(&self) -> Scalar {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }
}

/// Occupation measures of a state: `mu[i]` is the probability that orbital
/// `i` is occupied, `mu_tilde[i] = 1 - mu[i]` that it is empty. Indexed by
/// 0-based orbital. `sum mu = N` and `sum (mu + mu_tilde) = n`.
pub fn occupation_measures(state: &ManyBodyState) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut mu = vec![Scalar::zero(); state.n_orbitals()];
    for (occ, amplitude) in state.terms() {
        let weight = amplitude.norm_sqr();
        for orbital in occ.occupied() {
            mu[orbital] = &mu[orbital] + &weight;
        }
    }
    let mu_tilde = mu.iter().map(|m| &Scalar::one() - m).collect();
    (mu, mu_tilde)
}

/// `<psi| op |psi> = sum_I |c_I|^2 op(I)` for a diagonal operator.
pub fn expectation(op: &DiagonalOperator, state: &ManyBodyState) -> Result<Scalar> {
    if op.n_orbitals() != state.n_orbitals() || op.n_particles() != state.n_particles() {
        return Err(Error::DimensionMismatch(format!(
            "operator over {} orbitals / {} particles against state over {} / {}",
            op.n_orbitals(),
            op.n_particles(),
            state.n_orbitals(),
            state.n_particles()
        )));
    }
    let mut total = Scalar::zero();
    for (occ, amplitude) in state.terms() {
        total = total + op.entry_for(occ)?.clone() * amplitude.norm_sqr();
    }
    Ok(total)
}

/// Role of one orbital in a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitalRole {
    /// Occupied in every contributing determinant (state in the range of
    /// the number operator).
    Particle,
    /// Empty in every contributing determinant (state in the range of the
    /// complement projector).
    Hole,
    Neither,
}

/// Classifies one orbital: particle when every term with the orbital empty
/// has zero amplitude, hole when every term with it occupied does.
pub fn classify_state(state: &ManyBodyState, orbital: usize) -> Result<OrbitalRole> {
    if orbital >= state.n_orbitals() {
        return Err(Error::OrbitalOutOfRange {
            orbital: orbital + 1,
            n_orbitals: state.n_orbitals(),
        });
    }
    let policy = state.policy();
    let nonzero = |c: &ComplexScalar| !policy.is_zero(&c.re) || !policy.is_zero(&c.im);
    let mut occupied_support = false;
    let mut empty_support = false;
    for (occ, amplitude) in state.terms() {
        if !nonzero(amplitude) {
            continue;
        }
        if occ.contains(orbital) {
            occupied_support = true;
        } else {
            empty_support = true;
        }
    }
    Ok(match (occupied_support, empty_support) {
        (true, false) => OrbitalRole::Particle,
        (false, true) => OrbitalRole::Hole,
        _ => OrbitalRole::Neither,
    })
}

/// The one-particle Grassmann factor space of a state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpace {
    /// Dimension of `{phi : phi ^ psi = 0}`; zero means completely
    /// correlated, and a determinant has dimension N.
    pub dimension: usize,
    /// 0-based orbitals whose basis vector is itself a factor (exactly the
    /// orbitals classified as particles).
    pub factors: Vec<usize>,
}

/// Computes the factor space by solving `phi ^ psi = 0` as a linear system
/// from the n-dimensional one-particle space into the (N+1)-particle space.
pub fn grassmann_factor_space(state: &ManyBodyState, budget: u64) -> Result<FactorSpace> {
    let n = state.n_orbitals();
    let target = binomial(n, state.n_particles() + 1);
    if target > budget as u128 {
        return Err(Error::BasisTooLarge {
            states: target,
            budget,
        });
    }
    let dimension = n - wedge_map_rank(state)?;
    let mut factors = Vec::new();
    for orbital in 0..n {
        if classify_state(state, orbital)? == OrbitalRole::Particle {
            factors.push(orbital);
        }
    }
    Ok(FactorSpace { dimension, factors })
}

pub(crate) fn wedge_map_rank(state: &ManyBodyState) -> Result<usize> {
    let n = state.n_orbitals();
    let policy = state.policy();

    // Row per reachable (N+1)-subset K: entries over columns j with
    // M[K][j] = sign(j, K \ {j}) * c_{K \ {j}}.
    let mut rows: BTreeMap<u64, Vec<ComplexScalar>> = BTreeMap::new();
    for (occ, amplitude) in state.terms() {
        if policy.is_zero(&amplitude.re) && policy.is_zero(&amplitude.im) {
            continue;
        }
        for j in 0..n {
            if occ.contains(j) {
                continue;
            }
            let enlarged = occ.bits() | (1u64 << j);
            let below = (occ.bits() & ((1u64 << j) - 1)).count_ones();
            let signed = if below % 2 == 0 {
                amplitude.clone()
            } else {
                ComplexScalar::new(-&amplitude.re, -&amplitude.im)
            };
            let row = rows
                .entry(enlarged)
                .or_insert_with(|| vec![ComplexScalar::zero(); n]);
            row[j] = row[j].add(&signed);
        }
    }

    match policy.mode() {
        NumericMode::Rational => Ok(exact_rank(rows.into_values().collect())),
        NumericMode::Float => Ok(float_rank(
            rows.into_values().collect(),
            policy.tolerance().to_f64(),
        )),
    }
}

/// Row-echelon rank over Gaussian rationals.
fn exact_rank(mut rows: Vec<Vec<ComplexScalar>>) -> usize {
    let n = match rows.first() {
        Some(r) => r.len(),
        None => return 0,
    };
    let mut rank = 0;
    let mut row_of_pivot: Vec<Option<usize>> = vec![None; n];
    for i in 0..rows.len() {
        // Reduce against existing pivots, then take the first nonzero
        // column as a new pivot.
        for col in 0..n {
            if rows[i][col].is_zero() {
                continue;
            }
            if let Some(p) = row_of_pivot[col] {
                let pivot_row = rows[p].clone();
                let factor = rows[i][col].div(&pivot_row[col]);
                for c in col..n {
                    let delta = factor.mul(&pivot_row[c]);
                    rows[i][c] = rows[i][c].sub(&delta);
                }
            } else {
                row_of_pivot[col] = Some(i);
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Numerical rank by Gaussian elimination with a relative pivot threshold.
fn float_rank(rows: Vec<Vec<ComplexScalar>>, tol: f64) -> usize {
    let n = match rows.first() {
        Some(r) => r.len(),
        None => return 0,
    };
    let mut data: Vec<Vec<(f64, f64)>> = rows
        .iter()
        .map(|row| row.iter().map(|c| (c.re.to_f64(), c.im.to_f64())).collect())
        .collect();
    let scale = data
        .iter()
        .flatten()
        .map(|(re, im)| re.hypot(*im))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let threshold = tol * scale;

    let mut rank = 0;
    let mut row_of_pivot: Vec<Option<usize>> = vec![None; n];
    for i in 0..data.len() {
        for col in 0..n {
            let (re, im) = data[i][col];
            if re.hypot(im) <= threshold {
                continue;
            }
            if let Some(p) = row_of_pivot[col] {
                let (pre, pim) = data[p][col];
                let denom = pre * pre + pim * pim;
                let fre = (re * pre + im * pim) / denom;
                let fim = (im * pre - re * pim) / denom;
                for c in col..n {
                    let (are, aim) = data[p][c];
                    data[i][c].0 -= fre * are - fim * aim;
                    data[i][c].1 -= fre * aim + fim * are;
                }
            } else {
                row_of_pivot[col] = Some(i);
                rank += 1;
                break;
            }
        }
    }
    rank
}
