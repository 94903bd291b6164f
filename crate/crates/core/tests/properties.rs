//! Property suites for the library invariants: membership monotonicity and
//! scaling, oracle agreement, decomposition round-trips and sign contracts,
//! extremality against kernel maximality, measure identities, and factor
//! counting.

use proptest::prelude::*;

use nrep_core::random::{self, rng_from_seed, RandomSource};
use nrep_core::{
    build_one_body_diagonal, canonical_decompose, classify_state, full_spectrum,
    grassmann_factor_space, is_dual_cone_member, is_extreme, kernel_compare, many_body_eigenvalue,
    min_pairing, occupation_measures, reconstruct, ComplexScalar, ExtremeElement, FockBasis,
    KernelOrder, ManyBodyState, NumericPolicy, OccupationState, OneBodySpectrum, OrbitalRole,
    Scalar, DEFAULT_STATE_BUDGET,
};

fn rational() -> NumericPolicy {
    NumericPolicy::rational()
}

fn spec_from_ints(values: &[i64]) -> OneBodySpectrum {
    let raw = values.iter().map(|&v| Scalar::from_int(v)).collect();
    OneBodySpectrum::from_values(raw, rational()).unwrap()
}

#[test]
fn membership_monotonic_in_particle_count() {
    let mut rng = rng_from_seed(101);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12usize);
        let spec = random::random_spectrum(&mut rng, n);
        let mut member_seen = false;
        for n_particles in 1..=n {
            let verdict = is_dual_cone_member(&spec, n_particles).unwrap();
            if member_seen && !verdict.member {
                panic!(
                    "membership lost when adding particles: n = {n}, N = {n_particles}, \
                     values = {:?}",
                    spec.values()
                );
            }
            member_seen = member_seen || verdict.member;
        }
    }
}

#[test]
fn too_many_negatives_blocks_membership() {
    let mut rng = rng_from_seed(103);
    for _ in 0..200 {
        let n = rng.gen_range(2..=10usize);
        let negatives = rng.gen_range(1..=n);
        let mut raw: Vec<Scalar> = (0..negatives)
            .map(|_| Scalar::from_ratio(-rng.gen_range(1..=9), rng.gen_range(1..=4)))
            .collect();
        raw.extend((negatives..n).map(|_| Scalar::from_ratio(rng.gen_range(0..=9), 1)));
        let spec = OneBodySpectrum::from_values(raw, rational()).unwrap();
        for n_particles in 1..=negatives.min(n) {
            // With s >= N the N smallest are all negative.
            assert!(!is_dual_cone_member(&spec, n_particles).unwrap().member);
        }
    }
}

#[test]
fn min_pairing_matches_enumerated_minimum() {
    let mut rng = rng_from_seed(105);
    for _ in 0..300 {
        let n = rng.gen_range(2..=10usize);
        let n_particles = rng.gen_range(1..=n.min(5));
        let spec = random::random_spectrum(&mut rng, n);
        let basis = FockBasis::new(n, n_particles, DEFAULT_STATE_BUDGET).unwrap();
        let many_body = full_spectrum(&spec, &basis).unwrap();
        assert_eq!(
            &min_pairing(&spec, n_particles).unwrap(),
            many_body.min_value()
        );
    }
}

#[test]
fn level_values_reconstruct_from_representatives() {
    let mut rng = rng_from_seed(107);
    for _ in 0..100 {
        let n = rng.gen_range(2..=9usize);
        let n_particles = rng.gen_range(1..=n.min(4));
        let spec = random::random_spectrum(&mut rng, n);
        let basis = FockBasis::new(n, n_particles, DEFAULT_STATE_BUDGET).unwrap();
        let many_body = full_spectrum(&spec, &basis).unwrap();
        let negatives = spec.negatives();
        for level in many_body.levels() {
            for state in &level.states {
                assert_eq!(state.n_particles(), n_particles);
                assert_eq!(many_body_eigenvalue(&spec, state).unwrap(), level.value);
                let negative_count = state
                    .occupied()
                    .filter(|&orbital| spec.position_of(orbital) < negatives)
                    .count();
                assert!(negative_count <= negatives);
            }
        }
        let total: usize = many_body.levels().iter().map(|l| l.degeneracy).sum();
        assert_eq!(total, basis.dimension());
    }
}

#[test]
fn operator_construction_is_linear() {
    let mut rng = rng_from_seed(109);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8usize);
        let n_particles = rng.gen_range(1..=n.min(4));
        let a = random::random_scalar(&mut rng, 6, 4);
        let b = random::random_scalar(&mut rng, 6, 4);
        let s1 = random::random_spectrum(&mut rng, n);
        let s2 = random::random_spectrum(&mut rng, n);
        let combined_raw: Vec<Scalar> = (0..n)
            .map(|i| &(&a * s1.value_by_label(i)) + &(&b * s2.value_by_label(i)))
            .collect();
        let combined = OneBodySpectrum::from_values(combined_raw, rational()).unwrap();

        let basis = FockBasis::new(n, n_particles, DEFAULT_STATE_BUDGET).unwrap();
        let op1 = build_one_body_diagonal(&s1, &basis).unwrap().scale(&a);
        let op2 = build_one_body_diagonal(&s2, &basis).unwrap().scale(&b);
        let direct = build_one_body_diagonal(&combined, &basis).unwrap();
        assert_eq!(op1.add(&op2).unwrap(), direct);
    }
}

#[test]
fn decomposition_round_trip_and_signs() {
    let mut rng = rng_from_seed(111);
    for _ in 0..500 {
        let n = rng.gen_range(2..=12usize);
        let n_particles = rng.gen_range(1..=n.min(6));
        let spec = random::random_member(&mut rng, n, n_particles);
        let d = canonical_decompose(&spec, n_particles).unwrap();
        assert!(reconstruct(&d).unwrap().eq_exact(&spec));
        for pos in 0..d.r() {
            assert!(d.gamma(pos).is_positive());
        }
        for pos in d.r()..d.n() {
            assert!(!d.gamma(pos).is_negative());
        }
        // t < 0 exactly when the spectrum has a negative part.
        assert_eq!(d.t().is_negative(), spec.negatives() > 0);

        // Exclusion rule: each orbital pairs with exactly one family.
        let holes = d.hole_labels();
        let particles = d.particle_labels();
        let mut all: Vec<usize> = holes.iter().chain(particles.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn decomposition_ignores_tie_breaking() {
    // Degenerate eigenvalues receive equal weights, so any input ordering
    // of the tied values reconstructs identically.
    let spec_a = spec_from_ints(&[-1, 2, 2, 2, 7]);
    let spec_b = spec_from_ints(&[2, 2, -1, 7, 2]);
    let da = canonical_decompose(&spec_a, 3).unwrap();
    let db = canonical_decompose(&spec_b, 3).unwrap();
    assert_eq!(da.gammas(), db.gammas());
    assert_eq!(da.r(), db.r());
    let tied_positions: Vec<usize> = (0..5)
        .filter(|&p| spec_a.value(p) == &Scalar::from_int(2))
        .collect();
    for window in tied_positions.windows(2) {
        assert_eq!(da.gamma(window[0]), da.gamma(window[1]));
    }
}

#[test]
fn extreme_elements_have_maximal_kernels() {
    // Lemma-style cross-check of the pattern matcher: no member's kernel
    // properly contains an extreme element's kernel, and every non-extreme
    // member's kernel sits properly inside some extreme element's kernel.
    // Needs n >= N + 2: at n = N + 1 the rank-one projectors genuinely
    // lose extremality (see rank_one_loses_extremality_at_tight_n below).
    let mut rng = rng_from_seed(113);
    for n in 3..=6usize {
        for n_particles in 2..=4usize.min(n.saturating_sub(2)) {
            let mut extremes: Vec<OneBodySpectrum> = Vec::new();
            for orbital in 0..n {
                let mut projector = vec![Scalar::zero(); n];
                projector[orbital] = Scalar::from_int(1);
                extremes.push(OneBodySpectrum::from_values(projector, rational()).unwrap());
                let hole: Vec<Scalar> = (0..n)
                    .map(|i| {
                        if i == orbital {
                            Scalar::from_ratio(1, n_particles as i64) - Scalar::one()
                        } else {
                            Scalar::from_ratio(1, n_particles as i64)
                        }
                    })
                    .collect();
                extremes.push(OneBodySpectrum::from_values(hole, rational()).unwrap());
            }
            for extreme in &extremes {
                assert!(is_extreme(extreme, n_particles).is_some());
            }

            for _ in 0..40 {
                let member = random::random_member(&mut rng, n, n_particles);
                if member.values().iter().all(|v| v.is_zero()) {
                    continue;
                }
                for extreme in &extremes {
                    let order =
                        kernel_compare(extreme, &member, n_particles, DEFAULT_STATE_BUDGET)
                            .unwrap();
                    assert_ne!(
                        order,
                        KernelOrder::LeftInRight,
                        "extreme kernel properly contained: extreme {:?} member {:?}",
                        extreme.values(),
                        member.values()
                    );
                }
                if is_extreme(&member, n_particles).is_none() {
                    let dominated = extremes.iter().any(|extreme| {
                        kernel_compare(&member, extreme, n_particles, DEFAULT_STATE_BUDGET)
                            .unwrap()
                            == KernelOrder::LeftInRight
                    });
                    assert!(
                        dominated,
                        "non-extreme member with undominated kernel: {:?}",
                        member.values()
                    );
                }
            }
        }
    }
}

#[test]
fn rank_one_loses_extremality_at_tight_n() {
    // With n = N + 1 a rank-one projector splits into two genuine members:
    // P_3 = e*((1/2)I - P_1) + (P_3 - e*((1/2)I - P_1)) at n = 3, N = 2.
    // Its expansion kernel (the one determinant avoiding the orbital) is
    // then properly contained in the hole element's kernel, so kernel
    // maximality fails exactly where the convex split exists.
    let projector = spec_from_ints(&[0, 0, 1]);
    let hole = OneBodySpectrum::from_values(
        vec![
            Scalar::from_ratio(-1, 2),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(1, 2),
        ],
        rational(),
    )
    .unwrap();
    assert_eq!(
        kernel_compare(&projector, &hole, 2, DEFAULT_STATE_BUDGET).unwrap(),
        KernelOrder::LeftInRight
    );

    // Both split parts are members, and they sum back to the projector.
    let eps = Scalar::from_ratio(1, 4);
    let part: Vec<Scalar> = vec![
        &eps * &Scalar::from_ratio(1, 2),
        -&(&eps * &Scalar::from_ratio(1, 2)),
        &Scalar::one() - &(&eps * &Scalar::from_ratio(1, 2)),
    ];
    let part = OneBodySpectrum::from_values(part, rational()).unwrap();
    assert!(is_dual_cone_member(&part, 2).unwrap().member);
    for orbital in 0..3 {
        let recombined = &(&eps * hole.value_by_label(orbital)) + part.value_by_label(orbital);
        assert_eq!(recombined, *projector.value_by_label(orbital));
    }
}

#[test]
fn measures_are_bounded_and_sum_correctly() {
    let mut rng = rng_from_seed(115);
    for _ in 0..300 {
        let n = rng.gen_range(2..=9usize);
        let n_particles = rng.gen_range(1..=n);
        let state = random::random_state(&mut rng, n, n_particles, 5);
        let (mu, mu_tilde) = occupation_measures(&state);
        for (m, mt) in mu.iter().zip(&mu_tilde) {
            assert!(!m.is_negative() && m <= &Scalar::one());
            assert_eq!(&(m + mt), &Scalar::one());
        }
        let mu_sum: Scalar = mu.iter().sum();
        assert_eq!(mu_sum, Scalar::from_int(n_particles as i64));
        let both: Scalar = mu.iter().chain(mu_tilde.iter()).sum();
        assert_eq!(both, Scalar::from_int(n as i64));
    }
}

#[test]
fn determinant_measures_are_indicators() {
    let mut rng = rng_from_seed(117);
    for _ in 0..100 {
        let n = rng.gen_range(2..=10usize);
        let n_particles = rng.gen_range(1..=n);
        let state = random::random_state(&mut rng, n, n_particles, 1);
        let (mu, _) = occupation_measures(&state);
        let occ = state.terms()[0].0;
        for orbital in 0..n {
            let expected = if occ.contains(orbital) {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            assert_eq!(mu[orbital], expected);
            let role = classify_state(&state, orbital).unwrap();
            let expected_role = if occ.contains(orbital) {
                OrbitalRole::Particle
            } else {
                OrbitalRole::Hole
            };
            assert_eq!(role, expected_role);
        }
    }
}

#[test]
fn factor_dimension_bounds_and_common_factor_shift() {
    let mut rng = rng_from_seed(119);
    for _ in 0..60 {
        let n = rng.gen_range(3..=7usize);
        let n_particles = rng.gen_range(1..=n - 1);
        let state = random::random_state(&mut rng, n, n_particles, 4);
        let fs = grassmann_factor_space(&state, DEFAULT_STATE_BUDGET).unwrap();
        assert!(fs.dimension <= n_particles);
        assert!(fs.factors.len() <= fs.dimension);

        // Wedging a fresh lowest orbital onto every term adds exactly one
        // factor dimension.
        let lifted_terms: Vec<(OccupationState, ComplexScalar)> = state
            .terms()
            .iter()
            .map(|(occ, amplitude)| {
                let shifted = occ.bits() << 1 | 1;
                (
                    OccupationState::new(shifted, n + 1).unwrap(),
                    amplitude.clone(),
                )
            })
            .collect();
        let lifted =
            ManyBodyState::new(n + 1, n_particles + 1, lifted_terms, rational()).unwrap();
        let lifted_fs = grassmann_factor_space(&lifted, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(lifted_fs.dimension, fs.dimension + 1);
        assert!(lifted_fs.factors.contains(&0));
    }
}

proptest! {
    #[test]
    fn membership_is_scale_invariant(
        values in proptest::collection::vec(-12i64..=12, 2..=9),
        scale_num in 1i64..=9,
        scale_den in 1i64..=9,
        n_particles in 1usize..=4,
    ) {
        prop_assume!(n_particles <= values.len());
        let spec = spec_from_ints(&values);
        let factor = Scalar::from_ratio(scale_num, scale_den);
        let scaled = spec.scaled(&factor).unwrap();
        let original = is_dual_cone_member(&spec, n_particles).unwrap().member;
        let after = is_dual_cone_member(&scaled, n_particles).unwrap().member;
        prop_assert_eq!(original, after);
    }

    #[test]
    fn decomposition_is_scale_equivariant(
        seed in 0u64..5000,
        scale_num in 1i64..=7,
        scale_den in 1i64..=7,
    ) {
        let mut rng = rng_from_seed(seed);
        let n = rng.gen_range(2..=9usize);
        let n_particles = rng.gen_range(1..=n.min(5));
        let spec = random::random_member(&mut rng, n, n_particles);
        let factor = Scalar::from_ratio(scale_num, scale_den);
        let scaled = spec.scaled(&factor).unwrap();

        let d = canonical_decompose(&spec, n_particles).unwrap();
        let ds = canonical_decompose(&scaled, n_particles).unwrap();
        prop_assert_eq!(d.r(), ds.r());
        for pos in 0..d.n() {
            prop_assert_eq!(&(d.gamma(pos) * &factor), ds.gamma(pos));
        }
    }

    #[test]
    fn extremality_detects_both_families(
        orbital in 0usize..6,
        scale_num in 1i64..=9,
        scale_den in 1i64..=4,
        n in 2usize..=6,
        n_particles in 1usize..=5,
    ) {
        prop_assume!(orbital < n && n_particles <= n);
        let scale = Scalar::from_ratio(scale_num, scale_den);

        let mut projector = vec![Scalar::zero(); n];
        projector[orbital] = scale.clone();
        let spec = OneBodySpectrum::from_values(projector, rational()).unwrap();
        let found = is_extreme(&spec, n_particles);
        prop_assert_eq!(
            found.clone().map(|(e, _)| e),
            Some(ExtremeElement::RankOneProjector { orbital })
        );
        prop_assert_eq!(found.unwrap().1, scale.clone());

        prop_assume!(n_particles >= 2);
        let hole: Vec<Scalar> = (0..n)
            .map(|i| {
                let base = &scale.div_int(n_particles as i64);
                if i == orbital { base - &scale } else { base.clone() }
            })
            .collect();
        let spec = OneBodySpectrum::from_values(hole, rational()).unwrap();
        let found = is_extreme(&spec, n_particles);
        prop_assert_eq!(
            found.clone().map(|(e, _)| e),
            Some(ExtremeElement::HoleExtreme { orbital })
        );
        prop_assert_eq!(found.unwrap().1, scale);
    }
}
