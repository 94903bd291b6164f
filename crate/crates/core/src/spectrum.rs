//! One-particle spectral data and the dual-cone membership test.
//!
//! A self-adjoint one-particle operator is represented by its sorted
//! eigenvalue list. The expanded N-particle operator is positive
//! semidefinite exactly when the sum of the N smallest eigenvalues is
//! nonnegative, which is the membership criterion for the dual cone of the
//! N-representable one-density operators.

use crate::error::{Error, Result};
use crate::scalar::{NumericPolicy, Scalar};

/// Sorted eigenvalues of a one-particle self-adjoint operator.
///
/// `values` is nondecreasing; the first `negatives` entries are strictly
/// negative under the policy (zeros count as nonnegative). `labels` maps
/// each sorted position back to the 0-based position in the caller's input,
/// so reports can name the caller's orbitals.
#[derive(Debug, Clone)]
pub struct OneBodySpectrum {
    values: Vec<Scalar>,
    labels: Vec<usize>,
    positions: Vec<usize>,
    negatives: usize,
    policy: NumericPolicy,
}

impl OneBodySpectrum {
    /// Sorts the raw eigenvalues (stable, so ties keep input order) and
    /// counts the strictly negative ones.
    pub fn from_values(raw: Vec<Scalar>, policy: NumericPolicy) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[a].cmp(&raw[b]).then(a.cmp(&b)));
        let values: Vec<Scalar> = order.iter().map(|&i| raw[i].clone()).collect();
        let labels = order;
        let mut positions = vec![0usize; values.len()];
        for (pos, &label) in labels.iter().enumerate() {
            positions[label] = pos;
        }
        let negatives = values.iter().take_while(|v| policy.is_negative(v)).count();
        Ok(OneBodySpectrum {
            values,
            labels,
            positions,
            negatives,
            policy,
        })
    }

    /// Number of orbitals.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Count of strictly negative eigenvalues.
    pub fn negatives(&self) -> usize {
        self.negatives
    }

    /// Sorted eigenvalues, ascending.
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Eigenvalue at a sorted position.
    pub fn value(&self, position: usize) -> &Scalar {
        &self.values[position]
    }

    /// Input position (0-based) of the orbital at a sorted position.
    pub fn label(&self, position: usize) -> usize {
        self.labels[position]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Sorted position of an input orbital.
    pub fn position_of(&self, label: usize) -> usize {
        self.positions[label]
    }

    /// Eigenvalue of an input orbital.
    pub fn value_by_label(&self, label: usize) -> &Scalar {
        &self.values[self.positions[label]]
    }

    /// Eigenvalues in the caller's input order.
    pub fn values_in_input_order(&self) -> Vec<Scalar> {
        (0..self.n()).map(|i| self.value_by_label(i).clone()).collect()
    }

    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn sum_smallest(&self, k: usize) -> Scalar {
        self.values.iter().take(k).sum()
    }

    /// Same spectrum scaled by a positive factor.
    pub fn scaled(&self, factor: &Scalar) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::InvalidParams("scale factor must be positive".into()));
        }
        let raw: Vec<Scalar> = self
            .values_in_input_order()
            .iter()
            .map(|v| v * factor)
            .collect();
        OneBodySpectrum::from_values(raw, self.policy.clone())
    }

    /// Exact equality of eigenvalues and orbital identification.
    pub fn eq_exact(&self, other: &OneBodySpectrum) -> bool {
        self.values == other.values && self.labels == other.labels
    }
}

/// Outcome of the dual-cone membership test.
#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Sum of the N smallest eigenvalues (the tested quantity).
    pub min_sum: Scalar,
    /// 1-based input labels of the N smallest eigenvalues; present when the
    /// test fails, naming the violating occupation.
    pub certificate: Option<Vec<usize>>,
}

/// Tests whether the expanded N-particle operator is positive semidefinite:
/// the sum of the N smallest eigenvalues must be nonnegative.
pub fn is_dual_cone_member(spec: &OneBodySpectrum, n_particles: usize) -> Result<MembershipVerdict> {
    if n_particles == 0 {
        return Err(Error::ZeroParticles);
    }
    if n_particles > spec.n() {
        return Err(Error::TooManyParticles {
            n_particles,
            n_orbitals: spec.n(),
        });
    }
    let min_sum = spec.sum_smallest(n_particles);
    let member = !spec.policy().is_negative(&min_sum);
    let certificate = if member {
        None
    } else {
        let mut labels: Vec<usize> = (0..n_particles).map(|p| spec.label(p) + 1).collect();
        labels.sort_unstable();
        Some(labels)
    };
    Ok(MembershipVerdict {
        member,
        min_sum,
        certificate,
    })
}

/// Minimum of `N * tr(X d)` over diagonal N-representable occupation
/// vectors; equals the sum of the N smallest eigenvalues.
pub fn min_pairing(spec: &OneBodySpectrum, n_particles: usize) -> Result<Scalar> {
    if n_particles == 0 {
        return Err(Error::ZeroParticles);
    }
    if n_particles > spec.n() {
        return Err(Error::TooManyParticles {
            n_particles,
            n_orbitals: spec.n(),
        });
    }
    Ok(spec.sum_smallest(n_particles))
}

/// Occupation-number spectrum of a one-particle density operator
/// (diagonal in the chosen basis): nonnegative entries of unit trace.
#[derive(Debug, Clone)]
pub struct DensitySpectrum {
    occupations: Vec<Scalar>,
    policy: NumericPolicy,
}

impl DensitySpectrum {
    pub fn new(occupations: Vec<Scalar>, policy: NumericPolicy) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for occ in &occupations {
            if policy.is_negative(occ) {
                return Err(Error::InvalidParams(format!(
                    "occupation {occ} is negative"
                )));
            }
            if occ > &Scalar::one() && !policy.eq(occ, &Scalar::one()) {
                return Err(Error::InvalidParams(format!(
                    "occupation {occ} exceeds 1"
                )));
            }
        }
        let trace: Scalar = occupations.iter().sum();
        if !policy.eq(&trace, &Scalar::one()) {
            return Err(Error::InvalidParams(format!(
                "occupations sum to {trace}, expected 1"
            )));
        }
        Ok(DensitySpectrum {
            occupations,
            policy,
        })
    }

    pub fn n(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[Scalar] {
        &self.occupations
    }
}

/// A diagonal one-density is N-representable exactly when every occupation
/// is at most 1/N.
pub fn is_n_representable(density: &DensitySpectrum, n_particles: usize) -> Result<bool> {
    if n_particles == 0 {
        return Err(Error::ZeroParticles);
    }
    let one = Scalar::one();
    Ok(density.occupations().iter().all(|occ| {
        let scaled = occ.mul_int(n_particles as i64);
        scaled <= one || density.policy.eq(&scaled, &one)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_spec(values: Vec<Scalar>) -> OneBodySpectrum {
        OneBodySpectrum::from_values(values, NumericPolicy::rational()).unwrap()
    }

    fn ints(values: &[i64]) -> Vec<Scalar> {
        values.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    #[test]
    fn from_values_counts_negatives() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        assert_eq!(s.negatives(), 1);
        assert_eq!(s.values()[0], Scalar::from_int(-2));

        // Zeros are classified with the nonnegative block.
        let s = rational_spec(ints(&[0, 0, 0]));
        assert_eq!(s.negatives(), 0);
    }

    #[test]
    fn from_values_sorts_and_labels() {
        let raw = vec![
            Scalar::from_int(5),
            Scalar::from_ratio(-7, 5),
            Scalar::from_int(1),
            Scalar::from_ratio(1, 2),
        ];
        let s = rational_spec(raw);
        let sorted: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        assert_eq!(sorted, vec!["-7/5", "1/2", "1", "5"]);
        assert_eq!(s.negatives(), 1);
        assert_eq!(s.labels(), &[1, 3, 2, 0]);
        assert_eq!(s.value_by_label(0), &Scalar::from_int(5));
        assert_eq!(s.value_by_label(1), &Scalar::from_ratio(-7, 5));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(
            OneBodySpectrum::from_values(vec![], NumericPolicy::rational()).unwrap_err(),
            Error::EmptySpectrum
        );
    }

    #[test]
    fn stable_sort_keeps_tied_labels_in_input_order() {
        let s = rational_spec(ints(&[1, -1, 1, -1]));
        assert_eq!(s.labels(), &[1, 3, 0, 2]);
    }

    #[test]
    fn membership_examples() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let v = is_dual_cone_member(&s, 3).unwrap();
        assert!(v.member);
        assert_eq!(v.min_sum, Scalar::zero());

        let s = rational_spec(vec![
            Scalar::from_ratio(-7, 5),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        let v = is_dual_cone_member(&s, 3).unwrap();
        assert!(v.member);
        assert_eq!(v.min_sum, Scalar::from_ratio(1, 10));

        let s = rational_spec(vec![
            Scalar::from_int(-2),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        let v = is_dual_cone_member(&s, 3).unwrap();
        assert!(!v.member);
        assert_eq!(v.min_sum, Scalar::from_ratio(-1, 2));
        assert_eq!(v.certificate, Some(vec![1, 2, 3]));
    }

    #[test]
    fn membership_rejects_more_particles_than_orbitals() {
        let s = rational_spec(ints(&[1, 2]));
        assert!(matches!(
            is_dual_cone_member(&s, 3),
            Err(Error::TooManyParticles { .. })
        ));
    }

    #[test]
    fn too_many_negatives_is_never_a_member() {
        let s = rational_spec(ints(&[-1, -1, -1, 2, 2]));
        let v = is_dual_cone_member(&s, 3).unwrap();
        assert!(!v.member);
        let v2 = is_dual_cone_member(&s, 2).unwrap();
        assert!(!v2.member);
    }

    #[test]
    fn min_pairing_examples() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        assert_eq!(min_pairing(&s, 3).unwrap(), Scalar::zero());

        let s = rational_spec(ints(&[1, 2, 3]));
        assert_eq!(min_pairing(&s, 3).unwrap(), Scalar::from_int(6));

        let s = rational_spec(vec![
            Scalar::from_ratio(-7, 5),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        assert_eq!(min_pairing(&s, 3).unwrap(), Scalar::from_ratio(1, 10));
    }

    #[test]
    fn density_representability() {
        let policy = NumericPolicy::rational();
        let uniform = DensitySpectrum::new(
            vec![Scalar::from_ratio(1, 4); 4],
            policy.clone(),
        )
        .unwrap();
        assert!(is_n_representable(&uniform, 2).unwrap());

        let boundary = DensitySpectrum::new(
            vec![
                Scalar::from_ratio(1, 2),
                Scalar::from_ratio(1, 2),
                Scalar::zero(),
                Scalar::zero(),
            ],
            policy.clone(),
        )
        .unwrap();
        assert!(is_n_representable(&boundary, 2).unwrap());

        let over = DensitySpectrum::new(
            vec![
                Scalar::from_ratio(3, 5),
                Scalar::from_ratio(2, 5),
                Scalar::zero(),
                Scalar::zero(),
            ],
            policy.clone(),
        )
        .unwrap();
        assert!(!is_n_representable(&over, 2).unwrap());
    }

    #[test]
    fn density_validation() {
        let policy = NumericPolicy::rational();
        assert!(DensitySpectrum::new(
            vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 4)],
            policy.clone()
        )
        .is_err());
        assert!(DensitySpectrum::new(
            vec![Scalar::from_ratio(3, 2), Scalar::from_ratio(-1, 2)],
            policy
        )
        .is_err());
    }

    #[test]
    fn float_mode_tolerance_in_membership() {
        let policy = NumericPolicy::float(1e-9).unwrap();
        // Sum of the 2 smallest is -1e-12: within tolerance of zero, member.
        let s = OneBodySpectrum::from_values(
            vec![
                Scalar::from_f64(-1.0).unwrap(),
                &Scalar::from_f64(1.0).unwrap() - &Scalar::from_ratio(1, 1_000_000_000_000),
                Scalar::from_f64(2.0).unwrap(),
            ],
            policy,
        )
        .unwrap();
        assert!(is_dual_cone_member(&s, 2).unwrap().member);
    }
}
