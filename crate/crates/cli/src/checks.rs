//! Seeded cross-validation suites for the `check` subcommand: the
//! membership test against the brute-force minimum, the three-way operator
//! equality with the measure normalizations, the model kernel formula, and
//! the subset-partition identity. Output is deterministic for a fixed seed.

use nrep_core::random::{self, rng_from_seed, RandomSource};
use nrep_core::{
    binomial, build_one_body_diagonal, canonical_decompose, full_spectrum, is_dual_cone_member,
    kernel_dimension, models, pseudo_spectral, pseudo_spectral_pov, semi_spectral, spectral,
    verify_partition, FockBasis, Result, Scalar, Variant,
};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Membership,
    ThreeWay,
    ModelKernel,
    Partition,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Membership,
            Suite::ThreeWay,
            Suite::ModelKernel,
            Suite::Partition,
        ]
    }

    fn name(&self) -> &'static str {
        match self {
            Suite::Membership => "membership",
            Suite::ThreeWay => "threeway",
            Suite::ModelKernel => "thm74",
            Suite::Partition => "lemma31",
        }
    }
}

pub struct CheckOutcome {
    pub all_passed: bool,
    pub report: String,
}

pub fn run_suites(
    suites: &[Suite],
    trials: usize,
    max_n: usize,
    seed: u64,
    budget: u64,
) -> Result<CheckOutcome> {
    let mut report = String::new();
    let mut all_passed = true;
    for suite in suites {
        let result = match suite {
            Suite::Membership => membership_suite(trials, max_n, seed, budget),
            Suite::ThreeWay => three_way_suite(trials, max_n, seed, budget),
            Suite::ModelKernel => model_kernel_suite(trials, max_n, seed, budget),
            Suite::Partition => partition_suite(trials, max_n, seed, budget),
        };
        match result {
            Ok(()) => report.push_str(&format!(
                "suite {}: {} trials, max n = {} ... pass\n",
                suite.name(),
                trials,
                max_n
            )),
            Err(detail) => {
                all_passed = false;
                report.push_str(&format!(
                    "suite {}: {} trials, max n = {} ... FAIL: {}\n",
                    suite.name(),
                    trials,
                    max_n,
                    detail
                ));
            }
        }
    }
    report.push_str(if all_passed {
        "all suites passed\n"
    } else {
        "FAILURES detected\n"
    });
    Ok(CheckOutcome { all_passed, report })
}

/// Membership criterion against the enumerated minimum eigenvalue.
fn membership_suite(
    trials: usize,
    max_n: usize,
    seed: u64,
    budget: u64,
) -> std::result::Result<(), String> {
    let mut rng = rng_from_seed(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n.max(2));
        let n_particles = rng.gen_range(1..=n.min(6));
        let spec = random::random_spectrum(&mut rng, n);
        let verdict = is_dual_cone_member(&spec, n_particles)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        let basis =
            FockBasis::new(n, n_particles, budget).map_err(|e| format!("trial {trial}: {e}"))?;
        let many_body =
            full_spectrum(&spec, &basis).map_err(|e| format!("trial {trial}: {e}"))?;
        let oracle = !many_body.min_value().is_negative();
        if verdict.member != oracle {
            return Err(format!(
                "trial {trial}: membership {} but enumerated minimum {}",
                verdict.member,
                many_body.min_value()
            ));
        }
    }
    Ok(())
}

/// Spectral = semi-spectral = pseudo-spectral realization, plus the
/// normalization sums of every measure variant.
fn three_way_suite(
    trials: usize,
    max_n: usize,
    seed: u64,
    budget: u64,
) -> std::result::Result<(), String> {
    let mut rng = rng_from_seed(seed.wrapping_add(1));
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n.clamp(2, 10));
        let n_particles = rng.gen_range(1..=n.min(5));
        let spec = random::random_member(&mut rng, n, n_particles);
        let fail = |message: String| format!("trial {trial} (n={n}, N={n_particles}): {message}");

        let basis = FockBasis::new(n, n_particles, budget).map_err(|e| fail(e.to_string()))?;
        let direct = build_one_body_diagonal(&spec, &basis).map_err(|e| fail(e.to_string()))?;
        let d = canonical_decompose(&spec, n_particles).map_err(|e| fail(e.to_string()))?;

        let via_spectral = spectral(&spec, &basis)
            .and_then(|m| m.realize(&basis))
            .map_err(|e| fail(e.to_string()))?;
        let via_semi = semi_spectral(&spec, &basis, Variant::Raw)
            .and_then(|m| m.realize(&basis))
            .map_err(|e| fail(e.to_string()))?;
        let via_pseudo = pseudo_spectral(&d, &basis)
            .and_then(|p| p.realize(&basis))
            .map_err(|e| fail(e.to_string()))?;
        if via_spectral != direct || via_semi != direct || via_pseudo != direct {
            return Err(fail("realized operators differ between routes".into()));
        }

        for variant in [Variant::Raw, Variant::Normalized] {
            let semi = semi_spectral(&spec, &basis, variant).map_err(|e| fail(e.to_string()))?;
            if !semi
                .verify_normalization(&basis)
                .map_err(|e| fail(e.to_string()))?
            {
                return Err(fail("semi-spectral normalization sum broken".into()));
            }
            let pov =
                pseudo_spectral_pov(&d, &basis, variant).map_err(|e| fail(e.to_string()))?;
            if !pov
                .verify_normalization(&basis)
                .map_err(|e| fail(e.to_string()))?
            {
                return Err(fail("pseudo-spectral normalization sum broken".into()));
            }
        }
    }
    Ok(())
}

/// Kernel dimension formula and lowest-level structure of random models.
fn model_kernel_suite(
    trials: usize,
    max_n: usize,
    seed: u64,
    budget: u64,
) -> std::result::Result<(), String> {
    let mut rng = rng_from_seed(seed.wrapping_add(2));
    for trial in 0..trials {
        let params = random::random_model(&mut rng, max_n.clamp(4, 12));
        let fail = |message: String| format!("trial {trial}: {message}");
        let (spectrum, decomposition) =
            models::build_model(&params).map_err(|e| fail(e.to_string()))?;
        let basis = FockBasis::new(params.n_orbitals, params.n_particles, budget)
            .map_err(|e| fail(e.to_string()))?;
        let many_body = full_spectrum(&spectrum, &basis).map_err(|e| fail(e.to_string()))?;

        if !many_body.min_value().is_zero() {
            return Err(fail(format!(
                "lowest level is {}, expected 0",
                many_body.min_value()
            )));
        }
        let expected = kernel_dimension(&params).map_err(|e| fail(e.to_string()))?;
        let enumerated = many_body.levels()[0].degeneracy as u128;
        if enumerated != expected {
            return Err(fail(format!(
                "kernel degeneracy {enumerated} != C({}, {}) = {expected}",
                params.n_orbitals - params.m,
                params.n_particles - params.r
            )));
        }

        // The nonzero weights are exactly the lowest positive levels.
        let mut weight_set: Vec<Scalar> = decomposition
            .gammas()
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect();
        weight_set.sort();
        weight_set.dedup();
        let positive_levels: Vec<Scalar> = many_body
            .levels()
            .iter()
            .skip(1)
            .take(weight_set.len())
            .map(|l| l.value.clone())
            .collect();
        if weight_set != positive_levels {
            return Err(fail(format!(
                "lowest positive levels {positive_levels:?} differ from weights {weight_set:?}"
            )));
        }
    }
    Ok(())
}

/// Occupancy projectors of a random subset partition the basis.
fn partition_suite(
    trials: usize,
    max_n: usize,
    seed: u64,
    budget: u64,
) -> std::result::Result<(), String> {
    let mut rng = rng_from_seed(seed.wrapping_add(3));
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n.clamp(2, 16));
        let n_particles = rng.gen_range(0..=n);
        if binomial(n, n_particles) > budget as u128 {
            continue;
        }
        let basis = FockBasis::new(n, n_particles, budget)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        let subset = random::random_subset(&mut rng, n);
        let full: Vec<usize> = (0..n).collect();
        for candidate in [subset, Vec::new(), full] {
            let ok = verify_partition(&candidate, &basis)
                .map_err(|e| format!("trial {trial}: {e}"))?;
            if !ok {
                return Err(format!(
                    "trial {trial}: partition broken for subset {candidate:?} (n={n}, N={n_particles})"
                ));
            }
        }
    }
    Ok(())
}
