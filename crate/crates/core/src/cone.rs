//! The canonical convex decomposition of a dual-cone member into the
//! extreme elements of the cone, and the extremality / kernel predicates.
//!
//! The extreme rays of the dual cone are exactly the rank-one projectors
//! `P_i` and the hole elements `(1/N) I - P_i`. Any member decomposes as
//!
//! ```text
//! X = sum_{i<=r} g_i ((1/N) I - P_i)  +  sum_{k>r} g_k P_k
//! ```
//!
//! with strictly positive hole weights and nonnegative projector weights.
//! The split index `r` is found by scanning upward from the number of
//! negative eigenvalues; the defining inequalities pin it uniquely.

use crate::error::{Error, Result};
use crate::fock::{build_one_body_diagonal, FockBasis};
use crate::scalar::{NumericPolicy, Scalar};
use crate::spectrum::{is_dual_cone_member, OneBodySpectrum};

/// An extreme ray of the dual cone, named by a 0-based orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeElement {
    /// The rank-one projector onto one orbital.
    RankOneProjector { orbital: usize },
    /// `(1/N) I - P` for one orbital.
    HoleExtreme { orbital: usize },
}

/// Result of the canonical decomposition.
///
/// Weights are indexed by sorted spectrum position; `labels` carries the
/// sorted-position-to-input-orbital map of the source spectrum. Positions
/// `0..r` pair with hole elements, positions `r..n` with rank-one
/// projectors.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    n_particles: usize,
    r: usize,
    negatives: usize,
    t: Scalar,
    gammas: Vec<Scalar>,
    labels: Vec<usize>,
    policy: NumericPolicy,
}

impl CanonicalDecomposition {
    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// The split index: positions `0..r` carry hole elements.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Count of strictly negative eigenvalues of the source spectrum.
    pub fn negatives(&self) -> usize {
        self.negatives
    }

    /// The shift `t = (sum of the first r eigenvalues) / (N - r)`;
    /// negative whenever the spectrum has a negative part, zero otherwise.
    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// Weights by sorted position.
    pub fn gammas(&self) -> &[Scalar] {
        &self.gammas
    }

    pub fn gamma(&self, position: usize) -> &Scalar {
        &self.gammas[position]
    }

    /// Weights rearranged to the caller's input orbital order.
    pub fn gammas_in_input_order(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.gammas.len()];
        for (pos, &label) in self.labels.iter().enumerate() {
            out[label] = self.gammas[pos].clone();
        }
        out
    }

    /// Sorted-position-to-input-orbital map inherited from the spectrum.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// 0-based input orbitals paired with hole elements.
    pub fn hole_labels(&self) -> Vec<usize> {
        self.labels[..self.r].to_vec()
    }

    /// 0-based input orbitals paired with rank-one projectors.
    pub fn particle_labels(&self) -> Vec<usize> {
        self.labels[self.r..].to_vec()
    }

    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    /// The extreme element attached to a sorted position.
    pub fn element(&self, position: usize) -> ExtremeElement {
        if position < self.r {
            ExtremeElement::HoleExtreme {
                orbital: self.labels[position],
            }
        } else {
            ExtremeElement::RankOneProjector {
                orbital: self.labels[position],
            }
        }
    }
}

/// Finds the split index `r` and shift `t` for a dual-cone member.
///
/// If the negative part is covered by `N - s` copies of the smallest
/// nonnegative eigenvalue, `r = s`. Otherwise `r` is the unique index in
/// `(s, N-1]` with `t(r) + value(r-1) < 0 <= t(r) + value(r)` (0-based
/// positions). All candidates are scanned and the solution is checked to be
/// unique; a member always has exactly one.
pub fn find_r(spec: &OneBodySpectrum, n_particles: usize) -> Result<(usize, Scalar)> {
    let verdict = is_dual_cone_member(spec, n_particles)?;
    if !verdict.member {
        return Err(Error::NotDualConeMember {
            certificate: verdict.certificate.unwrap_or_default(),
            total: verdict.min_sum.to_string(),
        });
    }
    let s = spec.negatives();
    let policy = spec.policy();
    let mut matches: Vec<(usize, Scalar)> = Vec::new();

    // r = s: the negative total plus (N - s) copies of value(s) must be
    // nonnegative.
    let beta_sum = spec.sum_smallest(s);
    let at_s = &beta_sum + &spec.value(s).mul_int((n_particles - s) as i64);
    if policy.ge(&at_s, &Scalar::zero()) {
        matches.push((s, beta_sum.div_int((n_particles - s) as i64)));
    }

    for r in (s + 1)..n_particles {
        let t = spec.sum_smallest(r).div_int((n_particles - r) as i64);
        let lower = &t + spec.value(r - 1);
        let upper = &t + spec.value(r);
        if policy.is_negative(&lower) && policy.ge(&upper, &Scalar::zero()) {
            matches.push((r, t));
        }
    }

    match matches.len() {
        1 => Ok(matches.pop().unwrap()),
        0 => Err(Error::Internal(format!(
            "no split index found for a member spectrum (s = {s}, N = {n_particles})"
        ))),
        _ => Err(Error::Internal(format!(
            "split index is not unique: candidates {:?}",
            matches.iter().map(|(r, _)| *r).collect::<Vec<_>>()
        ))),
    }
}

/// Canonical decomposition of a dual-cone member into extreme elements.
///
/// Hole weights are `-(t + value)` for positions below `r`, projector
/// weights are `t + value` above; the former are strictly positive, the
/// latter nonnegative, and the combination reconstructs the spectrum
/// exactly.
pub fn canonical_decompose(
    spec: &OneBodySpectrum,
    n_particles: usize,
) -> Result<CanonicalDecomposition> {
    let (r, t) = find_r(spec, n_particles)?;
    let policy = spec.policy().clone();
    let mut gammas = Vec::with_capacity(spec.n());
    for pos in 0..spec.n() {
        let gamma = if pos < r {
            -(&t + spec.value(pos))
        } else {
            &t + spec.value(pos)
        };
        gammas.push(gamma);
    }
    for (pos, gamma) in gammas.iter().enumerate() {
        let ok = if pos < r {
            gamma.is_positive() && !policy.is_zero(gamma)
        } else {
            !policy.is_negative(gamma)
        };
        if !ok {
            return Err(Error::Internal(format!(
                "weight sign contract broken at sorted position {pos}: gamma = {gamma}"
            )));
        }
    }
    Ok(CanonicalDecomposition {
        n_particles,
        r,
        negatives: spec.negatives(),
        t,
        gammas,
        labels: spec.labels().to_vec(),
        policy,
    })
}

/// Rebuilds the one-particle spectrum from a decomposition. The orbital at
/// sorted position `p` gets `(sum of hole weights)/N - gamma_p` below the
/// split and `(sum of hole weights)/N + gamma_p` above it.
pub fn reconstruct(decomposition: &CanonicalDecomposition) -> Result<OneBodySpectrum> {
    let hole_sum: Scalar = decomposition.gammas[..decomposition.r].iter().sum();
    let base = hole_sum.div_int(decomposition.n_particles as i64);
    let n = decomposition.n();
    let mut raw = vec![Scalar::zero(); n];
    for pos in 0..n {
        let value = if pos < decomposition.r {
            &base - &decomposition.gammas[pos]
        } else {
            &base + &decomposition.gammas[pos]
        };
        raw[decomposition.labels[pos]] = value;
    }
    OneBodySpectrum::from_values(raw, decomposition.policy.clone())
}

/// Checks the kernel-dimension bound: a member has at most `r - s` zero
/// eigenvalues, and they can only sit at sorted positions in `(s, r]`.
pub fn kernel_dim_bound_check(
    spec: &OneBodySpectrum,
    decomposition: &CanonicalDecomposition,
) -> bool {
    let policy = spec.policy();
    let zero_positions: Vec<usize> = (0..spec.n())
        .filter(|&p| policy.is_zero(spec.value(p)))
        .collect();
    let s = decomposition.negatives();
    let r = decomposition.r();
    zero_positions.len() <= r - s && zero_positions.iter().all(|&p| p >= s && p < r)
}

/// Pattern-matches a spectrum against the two extreme families. Returns the
/// element and the positive scale `c` with `spec = c * element`, or `None`
/// for non-extreme members (including the zero spectrum).
pub fn is_extreme(
    spec: &OneBodySpectrum,
    n_particles: usize,
) -> Option<(ExtremeElement, Scalar)> {
    let policy = spec.policy();
    let n = spec.n();
    let nonzero: Vec<usize> = (0..n)
        .filter(|&p| !policy.is_zero(spec.value(p)))
        .collect();
    if nonzero.is_empty() {
        return None; // the apex of the cone
    }

    // c * P_i: exactly one nonzero eigenvalue, positive.
    if nonzero.len() == 1 {
        let p = nonzero[0];
        let value = spec.value(p);
        if value.is_positive() {
            return Some((
                ExtremeElement::RankOneProjector {
                    orbital: spec.label(p),
                },
                value.clone(),
            ));
        }
        return None;
    }

    // c * ((1/N) I - P_i): n-1 eigenvalues equal to c/N, one equal to
    // c/N - c. The distinct one is the smallest, i.e. sorted position 0.
    if n >= 2 {
        let shared = spec.value(1);
        if shared.is_positive()
            && !policy.is_zero(shared)
            && (2..n).all(|p| policy.eq(spec.value(p), shared))
        {
            let scale = shared.mul_int(n_particles as i64);
            let expected_low = shared - &scale;
            if policy.eq(spec.value(0), &expected_low) && !policy.eq(spec.value(0), shared) {
                return Some((
                    ExtremeElement::HoleExtreme {
                        orbital: spec.label(0),
                    },
                    scale,
                ));
            }
        }
    }
    None
}

/// How two kernels relate as subsets of the determinant basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelOrder {
    Equal,
    /// The left kernel is a proper subset of the right.
    LeftInRight,
    /// The right kernel is a proper subset of the left.
    RightInLeft,
    Incomparable,
}

/// Compares the kernels of the expanded operators of two dual-cone members
/// over the same orbital space, by enumerating the annihilated determinants.
pub fn kernel_compare(
    left: &OneBodySpectrum,
    right: &OneBodySpectrum,
    n_particles: usize,
    budget: u64,
) -> Result<KernelOrder> {
    if left.n() != right.n() {
        return Err(Error::DimensionMismatch(format!(
            "spectra over {} and {} orbitals",
            left.n(),
            right.n()
        )));
    }
    for spec in [left, right] {
        let verdict = is_dual_cone_member(spec, n_particles)?;
        if !verdict.member {
            return Err(Error::NotDualConeMember {
                certificate: verdict.certificate.unwrap_or_default(),
                total: verdict.min_sum.to_string(),
            });
        }
    }
    let basis = FockBasis::new(left.n(), n_particles, budget)?;
    let left_kernel = build_one_body_diagonal(left, &basis)?.kernel_indices(left.policy());
    let right_kernel = build_one_body_diagonal(right, &basis)?.kernel_indices(right.policy());

    let left_set: std::collections::BTreeSet<usize> = left_kernel.into_iter().collect();
    let right_set: std::collections::BTreeSet<usize> = right_kernel.into_iter().collect();
    let left_in_right = left_set.is_subset(&right_set);
    let right_in_left = right_set.is_subset(&left_set);
    Ok(match (left_in_right, right_in_left) {
        (true, true) => KernelOrder::Equal,
        (true, false) => KernelOrder::LeftInRight,
        (false, true) => KernelOrder::RightInLeft,
        (false, false) => KernelOrder::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::DEFAULT_STATE_BUDGET;

    fn rational_spec(values: Vec<Scalar>) -> OneBodySpectrum {
        OneBodySpectrum::from_values(values, NumericPolicy::rational()).unwrap()
    }

    fn ints(values: &[i64]) -> Vec<Scalar> {
        values.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    #[test]
    fn find_r_boundary_case() {
        // -2 + 2*1 = 0, so the negative part is covered at r = s = 1.
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let (r, t) = find_r(&s, 3).unwrap();
        assert_eq!(r, 1);
        assert_eq!(t, Scalar::from_int(-1));
    }

    #[test]
    fn find_r_scan_case() {
        let s = rational_spec(vec![
            Scalar::from_ratio(-7, 5),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        let (r, t) = find_r(&s, 3).unwrap();
        assert_eq!(r, 2);
        assert_eq!(t, Scalar::from_ratio(-9, 10));
    }

    #[test]
    fn find_r_no_negative_part() {
        let s = rational_spec(ints(&[1, 2, 3, 4]));
        let (r, t) = find_r(&s, 2).unwrap();
        assert_eq!(r, 0);
        assert_eq!(t, Scalar::zero());
    }

    #[test]
    fn find_r_requires_membership() {
        let s = rational_spec(vec![
            Scalar::from_int(-2),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        match find_r(&s, 3).unwrap_err() {
            Error::NotDualConeMember { certificate, .. } => {
                assert_eq!(certificate, vec![1, 2, 3]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn decompose_worked_example() {
        let s = rational_spec(vec![
            Scalar::from_int(-1),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(2),
        ]);
        let d = canonical_decompose(&s, 3).unwrap();
        assert_eq!(d.r(), 1);
        assert_eq!(d.t(), &Scalar::from_ratio(-1, 2));
        let expected = vec![
            Scalar::from_ratio(3, 2),
            Scalar::zero(),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(3, 2),
        ];
        assert_eq!(d.gammas(), expected.as_slice());
        assert!(reconstruct(&d).unwrap().eq_exact(&s));
    }

    #[test]
    fn decompose_scan_example() {
        let s = rational_spec(vec![
            Scalar::from_ratio(-7, 5),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(5),
        ]);
        let d = canonical_decompose(&s, 3).unwrap();
        assert_eq!(d.r(), 2);
        let expected = vec![
            Scalar::from_ratio(23, 10),
            Scalar::from_ratio(2, 5),
            Scalar::from_ratio(1, 10),
            Scalar::from_ratio(41, 10),
        ];
        assert_eq!(d.gammas(), expected.as_slice());
        assert!(reconstruct(&d).unwrap().eq_exact(&s));
    }

    #[test]
    fn decompose_extreme_spectrum() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let d = canonical_decompose(&s, 3).unwrap();
        assert_eq!(d.r(), 1);
        assert_eq!(d.gamma(0), &Scalar::from_int(3));
        assert!(d.gammas()[1..].iter().all(|g| g.is_zero()));
        assert!(reconstruct(&d).unwrap().eq_exact(&s));
    }

    #[test]
    fn decompose_zero_spectrum() {
        let s = rational_spec(ints(&[0, 0, 0, 0]));
        let d = canonical_decompose(&s, 2).unwrap();
        assert_eq!(d.r(), 0);
        assert_eq!(d.t(), &Scalar::zero());
        assert!(d.gammas().iter().all(|g| g.is_zero()));
        assert!(reconstruct(&d).unwrap().eq_exact(&s));
    }

    #[test]
    fn reconstruct_handles_unsorted_input() {
        let raw = vec![
            Scalar::from_int(5),
            Scalar::from_ratio(-7, 5),
            Scalar::from_int(1),
            Scalar::from_ratio(1, 2),
        ];
        let s = rational_spec(raw);
        let d = canonical_decompose(&s, 3).unwrap();
        let back = reconstruct(&d).unwrap();
        assert!(back.eq_exact(&s));
        assert_eq!(back.value_by_label(0), &Scalar::from_int(5));
    }

    #[test]
    fn single_projector_reconstruction() {
        let s = rational_spec(ints(&[0, 0, 1]));
        let d = canonical_decompose(&s, 2).unwrap();
        assert_eq!(d.r(), 0);
        assert!(reconstruct(&d).unwrap().eq_exact(&s));
    }

    #[test]
    fn kernel_bound_examples() {
        let s = rational_spec(vec![
            Scalar::from_int(-1),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(2),
        ]);
        let d = canonical_decompose(&s, 3).unwrap();
        assert!(kernel_dim_bound_check(&s, &d));

        let s = rational_spec(ints(&[-1, 0, 1, 1]));
        let d = canonical_decompose(&s, 3).unwrap();
        assert_eq!(d.r(), 2);
        assert!(kernel_dim_bound_check(&s, &d));

        let s = rational_spec(ints(&[1, 2, 3, 4]));
        let d = canonical_decompose(&s, 2).unwrap();
        assert!(kernel_dim_bound_check(&s, &d));
    }

    #[test]
    fn extremality_patterns() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let (element, scale) = is_extreme(&s, 3).unwrap();
        assert_eq!(element, ExtremeElement::HoleExtreme { orbital: 0 });
        assert_eq!(scale, Scalar::from_int(3));

        let s = rational_spec(ints(&[0, 0, 5, 0]));
        let (element, scale) = is_extreme(&s, 2).unwrap();
        assert_eq!(element, ExtremeElement::RankOneProjector { orbital: 2 });
        assert_eq!(scale, Scalar::from_int(5));

        let s = rational_spec(vec![
            Scalar::from_int(-1),
            Scalar::from_ratio(1, 2),
            Scalar::from_int(1),
            Scalar::from_int(2),
        ]);
        assert!(is_extreme(&s, 3).is_none());

        let zero = rational_spec(ints(&[0, 0, 0]));
        assert!(is_extreme(&zero, 2).is_none());
    }

    #[test]
    fn kernel_chain_containment() {
        // Two negatives with the matched flat positive part, against one
        // negative with its own flat part: the first kernel sits properly
        // inside the second.
        let two = rational_spec(ints(&[-1, -1, 2, 2, 2]));
        let one = rational_spec(vec![
            Scalar::from_int(-1),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(1, 2),
        ]);
        let order = kernel_compare(&two, &one, 3, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(order, KernelOrder::LeftInRight);
        let reversed = kernel_compare(&one, &two, 3, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(reversed, KernelOrder::RightInLeft);
    }

    #[test]
    fn hole_kernels_are_incomparable() {
        let hole1 = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let hole2 = rational_spec(ints(&[1, -2, 1, 1, 1]));
        let order = kernel_compare(&hole1, &hole2, 3, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(order, KernelOrder::Incomparable);
    }

    #[test]
    fn kernel_compare_is_reflexive() {
        let s = rational_spec(ints(&[-2, 1, 1, 1, 1]));
        let order = kernel_compare(&s, &s, 3, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(order, KernelOrder::Equal);
    }
}
