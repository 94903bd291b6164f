//! Seeded generators for the cross-validation suites: random spectra,
//! dual-cone members, model parameters, orbital subsets, and normalized
//! states. Everything flows from a caller-provided ChaCha stream so runs
//! are reproducible byte for byte.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fock::OccupationState;
use crate::models::Model74Params;
use crate::scalar::{ComplexScalar, NumericPolicy, Scalar};
use crate::spectrum::OneBodySpectrum;

pub use rand::{Rng as RandomSource, SeedableRng};
pub type CheckRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> CheckRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `[-max_num, max_num]` and denominator
/// in `[1, max_den]`.
pub fn random_scalar(rng: &mut CheckRng, max_num: i64, max_den: i64) -> Scalar {
    let p = rng.gen_range(-max_num..=max_num);
    let q = rng.gen_range(1..=max_den);
    Scalar::from_ratio(p, q)
}

/// Arbitrary spectrum: a handful of negative slots, the rest nonnegative.
/// Produces members and non-members alike.
pub fn random_spectrum(rng: &mut CheckRng, n_orbitals: usize) -> OneBodySpectrum {
    let raw: Vec<Scalar> = (0..n_orbitals)
        .map(|_| {
            if rng.gen_bool(0.25) {
                let p = rng.gen_range(1..=8);
                let q = rng.gen_range(1..=6);
                Scalar::from_ratio(-p, q)
            } else {
                let p = rng.gen_range(0..=12);
                let q = rng.gen_range(1..=6);
                Scalar::from_ratio(p, q)
            }
        })
        .collect();
    OneBodySpectrum::from_values(raw, NumericPolicy::rational()).unwrap()
}

/// Dual-cone member built constructively as a nonnegative combination of
/// extreme elements: hole weights on a random prefix, projector weights on
/// a random subset.
pub fn random_member(rng: &mut CheckRng, n_orbitals: usize, n_particles: usize) -> OneBodySpectrum {
    let hole_count = rng.gen_range(0..n_particles.min(n_orbitals));
    let mut hole_weights = vec![Scalar::zero(); n_orbitals];
    let mut projector_weights = vec![Scalar::zero(); n_orbitals];
    for weight in hole_weights.iter_mut().take(hole_count) {
        let p = rng.gen_range(1..=9);
        let q = rng.gen_range(1..=4);
        *weight = Scalar::from_ratio(p, q);
    }
    for weight in projector_weights.iter_mut().skip(hole_count) {
        if rng.gen_bool(0.7) {
            let p = rng.gen_range(0..=9);
            let q = rng.gen_range(1..=4);
            *weight = Scalar::from_ratio(p, q);
        }
    }
    let hole_total: Scalar = hole_weights.iter().sum();
    let base = hole_total.div_int(n_particles as i64);
    let raw: Vec<Scalar> = (0..n_orbitals)
        .map(|i| &(&base - &hole_weights[i]) + &projector_weights[i])
        .collect();
    OneBodySpectrum::from_values(raw, NumericPolicy::rational()).unwrap()
}

/// Valid model parameters with all nonzero weights confined to a band
/// `[g, 2g)`, which keeps every weight below every sum of two and makes
/// the weights exactly the lowest positive levels.
pub fn random_model(rng: &mut CheckRng, max_orbitals: usize) -> Model74Params {
    loop {
        let n_particles = rng.gen_range(2..=6usize);
        let r = rng.gen_range(1..n_particles);
        let top = n_particles - r + 1 + rng.gen_range(0..=2usize);
        let normal = rng.gen_range(1..=3usize);
        let n_orbitals = r + normal + top;
        if n_orbitals > max_orbitals {
            continue;
        }
        let m = r + normal;

        // Weight band [g, 2g) in quarter steps.
        let g = rng.gen_range(1..=4i64);
        let mut band = || {
            let step = rng.gen_range(0..4i64);
            Scalar::from_ratio(4 * g + step * g, 4)
        };

        let hole_weights: Vec<Scalar> = (0..r).map(|_| band()).collect();
        let hole_total: Scalar = hole_weights.iter().sum();
        let t = -hole_total.div_int(n_particles as i64);
        // Hole values beta = -t - weight must stay strictly negative.
        if hole_weights.iter().any(|w| w <= &-&t) {
            continue;
        }
        let betas: Vec<Scalar> = hole_weights.iter().map(|w| &(-&t) - w).collect();
        let alphas_normal: Vec<Scalar> = (0..normal).map(|_| &band() - &t).collect();

        return Model74Params {
            n_orbitals,
            n_particles,
            r,
            m,
            betas,
            alphas_mid: Vec::new(),
            alphas_normal,
            policy: NumericPolicy::rational(),
        };
    }
}

/// Random orbital subset of `{0..n}`.
pub fn random_subset(rng: &mut CheckRng, n_orbitals: usize) -> Vec<usize> {
    (0..n_orbitals).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Exactly normalized random state: real and imaginary amplitude
/// coordinates are drawn through a stereographic parametrization of the
/// unit sphere, so the squared amplitudes sum to one in exact arithmetic.
pub fn random_state(
    rng: &mut CheckRng,
    n_orbitals: usize,
    n_particles: usize,
    max_terms: usize,
) -> crate::state::ManyBodyState {
    use std::collections::BTreeSet;
    let available = crate::fock::binomial(n_orbitals, n_particles).min(64) as usize;
    let term_count = rng.gen_range(1..=max_terms.max(1)).min(available);
    let mut chosen: BTreeSet<u64> = BTreeSet::new();
    while chosen.len() < term_count {
        let mut bits = 0u64;
        let mut placed = 0;
        while placed < n_particles {
            let orbital = rng.gen_range(0..n_orbitals);
            if bits & (1 << orbital) == 0 {
                bits |= 1 << orbital;
                placed += 1;
            }
        }
        chosen.insert(bits);
    }

    // Unit vector in 2k real coordinates from k*2-1 rationals:
    // (2x_1, ..., 2x_{d}, S-1) / (S+1) with S the squared sum.
    let d = 2 * chosen.len() - 1;
    let xs: Vec<Scalar> = (0..d)
        .map(|_| Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        .collect();
    let s: Scalar = xs.iter().map(|x| x * x).sum();
    let denom = &s + &Scalar::one();
    let mut coords: Vec<Scalar> = xs
        .iter()
        .map(|x| &x.mul_int(2) / &denom)
        .collect();
    coords.push(&(&s - &Scalar::one()) / &denom);

    let terms: Vec<(OccupationState, ComplexScalar)> = chosen
        .into_iter()
        .enumerate()
        .map(|(i, bits)| {
            let occ = OccupationState::new(bits, n_orbitals).unwrap();
            let amplitude = ComplexScalar::new(coords[2 * i].clone(), coords[2 * i + 1].clone());
            (occ, amplitude)
        })
        .collect();
    crate::state::ManyBodyState::new(n_orbitals, n_particles, terms, NumericPolicy::rational())
        .expect("stereographic coordinates are exactly normalized")
}
