//! The three decompositions of an expanded one-body operator as
//! outcome/effect families: spectral (orthogonal eigenprojectors),
//! semi-spectral (number operators), and pseudo-spectral (the hole/particle
//! projectors induced by the canonical decomposition), each in a raw and a
//! normalized variant.
//!
//! All effects are realized as diagonal operators, so the operator
//! identities between the variants are decidable entrywise.

use crate::cone::CanonicalDecomposition;
use crate::error::{Error, Result};
use crate::fock::{full_spectrum, hole_projector, number_operator, DiagonalOperator, FockBasis};
use crate::scalar::Scalar;
use crate::spectrum::OneBodySpectrum;

/// What one atom's effect projects onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomTag {
    /// Number operator of one orbital (0-based).
    Particle { orbital: usize },
    /// Complement `1 - n_i` of one orbital (0-based).
    Hole { orbital: usize },
    /// Orthogonal eigenprojector of one spectral level.
    Eigenprojector { level: usize },
}

/// One (outcome, effect) atom of an operator-valued measure.
#[derive(Debug, Clone)]
pub struct PovAtom {
    pub outcome: Scalar,
    pub effect: DiagonalOperator,
    pub tag: AtomTag,
}

/// How the effects of a measure resolve the identity.
#[derive(Debug, Clone, PartialEq)]
pub enum Normalization {
    /// Effects sum to the identity.
    Normalized,
    /// Effects sum to `multiple` times the identity.
    Raw { multiple: Scalar },
}

/// Requested variant of a measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Raw,
    Normalized,
}

/// An outcome-indexed family of positive diagonal effects.
#[derive(Debug, Clone)]
pub struct PovMeasure {
    pub atoms: Vec<PovAtom>,
    pub normalization: Normalization,
}

impl PovMeasure {
    /// `sum outcome * effect`, entrywise.
    pub fn realize(&self, basis: &FockBasis) -> Result<DiagonalOperator> {
        let mut total = DiagonalOperator::zero(basis);
        for atom in &self.atoms {
            total = total.add(&atom.effect.scale(&atom.outcome))?;
        }
        Ok(total)
    }

    /// Checks that the effects sum exactly to the declared multiple of the
    /// identity.
    pub fn verify_normalization(&self, basis: &FockBasis) -> Result<bool> {
        let mut total = DiagonalOperator::zero(basis);
        for atom in &self.atoms {
            total = total.add(&atom.effect)?;
        }
        let multiple = match &self.normalization {
            Normalization::Normalized => Scalar::one(),
            Normalization::Raw { multiple } => multiple.clone(),
        };
        let expected = DiagonalOperator::identity(basis).scale(&multiple);
        Ok(total == expected)
    }
}

/// Spectral (orthogonal) decomposition: one atom per eigenvalue level with
/// the projector onto that level. Always normalized.
pub fn spectral(spec: &OneBodySpectrum, basis: &FockBasis) -> Result<PovMeasure> {
    let many_body = full_spectrum(spec, basis)?;
    let atoms = many_body
        .levels()
        .iter()
        .enumerate()
        .map(|(level, l)| {
            let mut entries = vec![Scalar::zero(); basis.dimension()];
            for state in &l.states {
                entries[state.basis_index()] = Scalar::one();
            }
            Ok(PovAtom {
                outcome: l.value.clone(),
                effect: DiagonalOperator::from_entries(basis, entries)?,
                tag: AtomTag::Eigenprojector { level },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PovMeasure {
        atoms,
        normalization: Normalization::Normalized,
    })
}

/// Semi-spectral decomposition: one atom per orbital built on its number
/// operator. Raw: outcomes are the eigenvalues and the effects sum to `N`
/// times the identity. Normalized: outcomes are `N` times the eigenvalues
/// and the effects `n_i / N` sum to the identity.
pub fn semi_spectral(
    spec: &OneBodySpectrum,
    basis: &FockBasis,
    variant: Variant,
) -> Result<PovMeasure> {
    if basis.n_orbitals() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "basis over {} orbitals against spectrum over {}",
            basis.n_orbitals(),
            spec.n()
        )));
    }
    let n_particles = basis.n_particles() as i64;
    let mut atoms = Vec::with_capacity(spec.n());
    for orbital in 0..spec.n() {
        let value = spec.value_by_label(orbital);
        let occupancy = number_operator(basis, orbital)?;
        let (outcome, effect) = match variant {
            Variant::Raw => (value.clone(), occupancy),
            Variant::Normalized => (
                value.mul_int(n_particles),
                occupancy.scale(&Scalar::from_ratio(1, n_particles)),
            ),
        };
        atoms.push(PovAtom {
            outcome,
            effect,
            tag: AtomTag::Particle { orbital },
        });
    }
    let normalization = match variant {
        Variant::Raw => Normalization::Raw {
            multiple: Scalar::from_int(n_particles),
        },
        Variant::Normalized => Normalization::Normalized,
    };
    Ok(PovMeasure {
        atoms,
        normalization,
    })
}

/// The pseudo-spectral decomposition in its operational form: hole terms
/// `gamma_i (1 - n_i)` for the first `r` sorted positions and particle
/// terms `gamma_k n_k` for the rest.
#[derive(Debug, Clone)]
pub struct PseudoSpectralDecomposition {
    /// `(orbital, weight, effect 1 - n_i)` per hole position, weights > 0.
    pub hole_terms: Vec<(usize, Scalar, DiagonalOperator)>,
    /// `(orbital, weight, effect n_k)` per projector position, weights >= 0.
    pub particle_terms: Vec<(usize, Scalar, DiagonalOperator)>,
}

impl PseudoSpectralDecomposition {
    pub fn realize(&self, basis: &FockBasis) -> Result<DiagonalOperator> {
        let mut total = DiagonalOperator::zero(basis);
        for (_, weight, effect) in self.hole_terms.iter().chain(&self.particle_terms) {
            total = total.add(&effect.scale(weight))?;
        }
        Ok(total)
    }
}

/// Builds the raw pseudo-spectral decomposition from a canonical
/// decomposition.
pub fn pseudo_spectral(
    decomposition: &CanonicalDecomposition,
    basis: &FockBasis,
) -> Result<PseudoSpectralDecomposition> {
    check_decomposition_basis(decomposition, basis)?;
    let mut hole_terms = Vec::with_capacity(decomposition.r());
    for pos in 0..decomposition.r() {
        let orbital = decomposition.labels()[pos];
        hole_terms.push((
            orbital,
            decomposition.gamma(pos).clone(),
            hole_projector(basis, orbital)?,
        ));
    }
    let mut particle_terms = Vec::with_capacity(decomposition.n() - decomposition.r());
    for pos in decomposition.r()..decomposition.n() {
        let orbital = decomposition.labels()[pos];
        particle_terms.push((
            orbital,
            decomposition.gamma(pos).clone(),
            number_operator(basis, orbital)?,
        ));
    }
    Ok(PseudoSpectralDecomposition {
        hole_terms,
        particle_terms,
    })
}

/// The pseudo-spectral family as a full operator-valued measure over all
/// `2n` effects `{1 - n_i, n_i}`, including the zero-outcome complements,
/// so the effects resolve `n` times the identity (raw) or the identity
/// (normalized, effects divided by `n`, outcomes multiplied by `n`).
pub fn pseudo_spectral_pov(
    decomposition: &CanonicalDecomposition,
    basis: &FockBasis,
    variant: Variant,
) -> Result<PovMeasure> {
    check_decomposition_basis(decomposition, basis)?;
    let n = decomposition.n() as i64;
    let r = decomposition.r();
    let mut atoms = Vec::with_capacity(2 * decomposition.n());
    for pos in 0..decomposition.n() {
        let orbital = decomposition.labels()[pos];
        let weight = decomposition.gamma(pos);
        let hole_effect = hole_projector(basis, orbital)?;
        let particle_effect = number_operator(basis, orbital)?;
        // The active effect carries the weight; its complement joins the
        // family with outcome zero.
        let (hole_outcome, particle_outcome) = if pos < r {
            (weight.clone(), Scalar::zero())
        } else {
            (Scalar::zero(), weight.clone())
        };
        let (hole_outcome, particle_outcome, hole_effect, particle_effect) = match variant {
            Variant::Raw => (hole_outcome, particle_outcome, hole_effect, particle_effect),
            Variant::Normalized => (
                hole_outcome.mul_int(n),
                particle_outcome.mul_int(n),
                hole_effect.scale(&Scalar::from_ratio(1, n)),
                particle_effect.scale(&Scalar::from_ratio(1, n)),
            ),
        };
        atoms.push(PovAtom {
            outcome: hole_outcome,
            effect: hole_effect,
            tag: AtomTag::Hole { orbital },
        });
        atoms.push(PovAtom {
            outcome: particle_outcome,
            effect: particle_effect,
            tag: AtomTag::Particle { orbital },
        });
    }
    let normalization = match variant {
        Variant::Raw => Normalization::Raw {
            multiple: Scalar::from_int(n),
        },
        Variant::Normalized => Normalization::Normalized,
    };
    Ok(PovMeasure {
        atoms,
        normalization,
    })
}

fn check_decomposition_basis(
    decomposition: &CanonicalDecomposition,
    basis: &FockBasis,
) -> Result<()> {
    if basis.n_orbitals() != decomposition.n()
        || basis.n_particles() != decomposition.n_particles()
    {
        return Err(Error::DimensionMismatch(format!(
            "basis over {} orbitals / {} particles against decomposition over {} / {}",
            basis.n_orbitals(),
            basis.n_particles(),
            decomposition.n(),
            decomposition.n_particles()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::canonical_decompose;
    use crate::fock::{build_one_body_diagonal, DEFAULT_STATE_BUDGET};
    use crate::scalar::NumericPolicy;

    fn rational_spec(values: Vec<Scalar>) -> OneBodySpectrum {
        OneBodySpectrum::from_values(values, NumericPolicy::rational()).unwrap()
    }

    fn ints(values: &[i64]) -> Vec<Scalar> {
        values.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    fn worked_spec() -> OneBodySpectrum {
        rational_spec(vec![
            Scalar::from_ratio(-7, 5),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ])
    }

    #[test]
    fn semi_spectral_realizes_the_operator() {
        let spec = worked_spec();
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let raw = semi_spectral(&spec, &basis, Variant::Raw).unwrap();
        assert_eq!(raw.atoms.len(), 4);
        let realized = raw.realize(&basis).unwrap();
        let direct = build_one_body_diagonal(&spec, &basis).unwrap();
        assert_eq!(realized, direct);
        let entries: Vec<String> = realized.entries().iter().map(|e| e.to_string()).collect();
        assert_eq!(entries, vec!["1/10", "41/10", "23/5", "13/2"]);
    }

    #[test]
    fn normalized_semi_spectral_matches_raw() {
        let spec = worked_spec();
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let raw = semi_spectral(&spec, &basis, Variant::Raw).unwrap();
        let normalized = semi_spectral(&spec, &basis, Variant::Normalized).unwrap();
        assert_eq!(
            raw.realize(&basis).unwrap(),
            normalized.realize(&basis).unwrap()
        );
        assert!(raw.verify_normalization(&basis).unwrap());
        assert!(normalized.verify_normalization(&basis).unwrap());
    }

    #[test]
    fn identity_spectrum_semi_spectral_is_constant() {
        let spec = rational_spec(ints(&[1, 1, 1, 1, 1]));
        let basis = FockBasis::new(5, 3, DEFAULT_STATE_BUDGET).unwrap();
        let normalized = semi_spectral(&spec, &basis, Variant::Normalized).unwrap();
        let realized = normalized.realize(&basis).unwrap();
        assert!(realized
            .entries()
            .iter()
            .all(|e| *e == Scalar::from_int(3)));
    }

    #[test]
    fn indicator_spectrum_has_single_active_atom() {
        let spec = rational_spec(ints(&[0, 0, 1, 0]));
        let basis = FockBasis::new(4, 2, DEFAULT_STATE_BUDGET).unwrap();
        let raw = semi_spectral(&spec, &basis, Variant::Raw).unwrap();
        let active: Vec<_> = raw
            .atoms
            .iter()
            .filter(|a| !a.outcome.is_zero())
            .collect();
        assert_eq!(active.len(), 1);
        assert_eq!(active[0].tag, AtomTag::Particle { orbital: 2 });
        assert_eq!(
            raw.realize(&basis).unwrap(),
            number_operator(&basis, 2).unwrap()
        );
    }

    #[test]
    fn pseudo_spectral_worked_example() {
        let spec = rational_spec(vec![
            Scalar::from_int(-1),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(2),
        ]);
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let d = canonical_decompose(&spec, 3).unwrap();
        let ps = pseudo_spectral(&d, &basis).unwrap();
        assert_eq!(ps.hole_terms.len(), 1);
        assert_eq!(ps.particle_terms.len(), 3);

        let realized = ps.realize(&basis).unwrap();
        let direct = build_one_body_diagonal(&spec, &basis).unwrap();
        assert_eq!(realized, direct);

        // Entry at {1,3,4}: 0 + 1/2 + 3/2 = 2 = (-1) + 1 + 2.
        let occ = crate::fock::OccupationState::from_orbitals(&[0, 2, 3], 4).unwrap();
        assert_eq!(realized.entry_for(&occ).unwrap(), &Scalar::from_int(2));
    }

    #[test]
    fn pseudo_spectral_extreme_spectrum() {
        let spec = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let basis = FockBasis::new(5, 3, DEFAULT_STATE_BUDGET).unwrap();
        let d = canonical_decompose(&spec, 3).unwrap();
        let ps = pseudo_spectral(&d, &basis).unwrap();
        let realized = ps.realize(&basis).unwrap();
        for (occ, entry) in basis.states().iter().zip(realized.entries()) {
            let expected = if occ.contains(0) {
                Scalar::zero()
            } else {
                Scalar::from_int(3)
            };
            assert_eq!(entry, &expected);
        }
    }

    #[test]
    fn pseudo_spectral_zero_decomposition() {
        let spec = rational_spec(ints(&[0, 0, 0]));
        let basis = FockBasis::new(3, 2, DEFAULT_STATE_BUDGET).unwrap();
        let d = canonical_decompose(&spec, 2).unwrap();
        let ps = pseudo_spectral(&d, &basis).unwrap();
        let realized = ps.realize(&basis).unwrap();
        assert!(realized.entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn pov_family_normalizations() {
        let spec = worked_spec();
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let d = canonical_decompose(&spec, 3).unwrap();

        let raw = pseudo_spectral_pov(&d, &basis, Variant::Raw).unwrap();
        assert_eq!(raw.atoms.len(), 8);
        assert!(raw.verify_normalization(&basis).unwrap());
        assert_eq!(
            raw.normalization,
            Normalization::Raw {
                multiple: Scalar::from_int(4)
            }
        );

        let normalized = pseudo_spectral_pov(&d, &basis, Variant::Normalized).unwrap();
        assert!(normalized.verify_normalization(&basis).unwrap());
        assert_eq!(
            raw.realize(&basis).unwrap(),
            normalized.realize(&basis).unwrap()
        );
        // Zero-outcome complements are kept explicitly: one per orbital
        // (all four weights are nonzero here).
        assert_eq!(
            normalized
                .atoms
                .iter()
                .filter(|a| a.outcome.is_zero())
                .count(),
            4
        );
    }

    #[test]
    fn spectral_measure_matches_direct_operator() {
        let spec = worked_spec();
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let measure = spectral(&spec, &basis).unwrap();
        assert!(measure.verify_normalization(&basis).unwrap());
        let realized = measure.realize(&basis).unwrap();
        let direct = build_one_body_diagonal(&spec, &basis).unwrap();
        assert_eq!(realized, direct);
    }

    #[test]
    fn three_way_equality_on_worked_example() {
        let spec = worked_spec();
        let basis = FockBasis::new(4, 3, DEFAULT_STATE_BUDGET).unwrap();
        let d = canonical_decompose(&spec, 3).unwrap();
        let a = spectral(&spec, &basis).unwrap().realize(&basis).unwrap();
        let b = semi_spectral(&spec, &basis, Variant::Raw)
            .unwrap()
            .realize(&basis)
            .unwrap();
        let c = pseudo_spectral(&d, &basis).unwrap().realize(&basis).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}
