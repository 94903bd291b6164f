//! Model Hamiltonians with collective and normal excitations.
//!
//! A model spectrum has three orbital blocks: a "hole" block whose weights
//! become collective levels, a "normal" block of single-particle
//! excitations, and a top block pinned at the value that zeroes its
//! weights, which makes zero the ground level with kernel dimension
//! `C(n-m, N-r)`. Type I uses one shared hole weight; Type II splits the
//! hole block into two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{canonical_decompose, CanonicalDecomposition};
use crate::error::{Error, Result};
use crate::fock::{binomial, full_spectrum, FockBasis, OccupationState};
use crate::scalar::{ComplexScalar, NumericMode, NumericPolicy, Scalar};
use crate::spectrum::OneBodySpectrum;
use crate::state::{wedge_map_rank, ManyBodyState};

/// General three-block model parameters.
///
/// The spectrum is `betas ++ alphas_mid ++ alphas_normal ++ [top; n-m]`
/// in input order, where the top value is derived so that the last block
/// carries zero weight in the canonical decomposition.
#[derive(Debug, Clone)]
pub struct Model74Params {
    pub n_orbitals: usize,
    pub n_particles: usize,
    /// Hole-block size; the first `r` sorted positions carry hole elements.
    pub r: usize,
    /// Orbitals `r+1..=m` (1-based) form the normal block.
    pub m: usize,
    /// Strictly negative values; their count is `s <= r`.
    pub betas: Vec<Scalar>,
    /// Nonnegative values absorbed into the hole block (`r - s` of them).
    pub alphas_mid: Vec<Scalar>,
    /// Normal-block values (`m - r` of them), each above the top value.
    pub alphas_normal: Vec<Scalar>,
    pub policy: NumericPolicy,
}

impl Model74Params {
    fn validate_shape(&self) -> Result<()> {
        let n = self.n_orbitals;
        let n_particles = self.n_particles;
        let s = self.betas.len();
        let r = self.r;
        let m = self.m;
        if n_particles == 0 {
            return Err(Error::ZeroParticles);
        }
        if n_particles > n {
            return Err(Error::TooManyParticles {
                n_particles,
                n_orbitals: n,
            });
        }
        if s > r {
            return Err(Error::InvalidParams(format!(
                "{s} negative values but hole block size r = {r}"
            )));
        }
        if r > n_particles - 1 {
            return Err(Error::InvalidParams(format!(
                "hole block size r = {r} must be at most N - 1 = {}",
                n_particles - 1
            )));
        }
        if self.alphas_mid.len() != r - s {
            return Err(Error::InvalidParams(format!(
                "middle block has {} values, expected r - s = {}",
                self.alphas_mid.len(),
                r - s
            )));
        }
        // m == r means an empty normal block.
        if !(r <= m && m < n) {
            return Err(Error::InvalidParams(format!(
                "block boundaries must satisfy r <= m < n, got r = {r}, m = {m}, n = {n}"
            )));
        }
        if self.alphas_normal.len() != m - r {
            return Err(Error::InvalidParams(format!(
                "normal block has {} values, expected m - r = {}",
                self.alphas_normal.len(),
                m - r
            )));
        }
        if n - m < n_particles - r + 1 {
            return Err(Error::InvalidParams(format!(
                "top block too small: n - m = {} but N - r + 1 = {}",
                n - m,
                n_particles - r + 1
            )));
        }
        Ok(())
    }

    /// The shift `t = (sum of betas + sum of middle alphas) / (N - r)`.
    pub fn shift(&self) -> Scalar {
        let total: Scalar = self.betas.iter().chain(self.alphas_mid.iter()).sum();
        total.div_int((self.n_particles - self.r) as i64)
    }
}

/// Builds the model spectrum and verifies that its canonical decomposition
/// reproduces the intended block structure: hole weights on the first `r`
/// sorted positions, strictly positive normal weights, and zero weights on
/// the top block.
pub fn build_model(
    params: &Model74Params,
) -> Result<(OneBodySpectrum, CanonicalDecomposition)> {
    params.validate_shape()?;
    let policy = &params.policy;

    let mut betas = params.betas.clone();
    betas.sort();
    for beta in &betas {
        if !policy.is_negative(beta) {
            return Err(Error::InvalidParams(format!(
                "hole-block value {beta} must be strictly negative"
            )));
        }
    }
    let t = params.shift();
    let top = -&t;

    let mut mids = params.alphas_mid.clone();
    mids.sort();
    for alpha in &mids {
        if policy.is_negative(alpha) {
            return Err(Error::InvalidParams(format!(
                "middle-block value {alpha} must be nonnegative"
            )));
        }
        let margin = &t + alpha;
        if !policy.is_negative(&margin) {
            return Err(Error::InvalidParams(format!(
                "middle-block value {alpha} must stay below the top value {top}"
            )));
        }
    }

    let mut normals = params.alphas_normal.clone();
    normals.sort();
    for alpha in &normals {
        let weight = &t + alpha;
        if policy.is_negative(&weight) || policy.is_zero(&weight) {
            return Err(Error::InvalidParams(format!(
                "normal-block value {alpha} must lie strictly above the top value {top}"
            )));
        }
    }

    let mut raw = Vec::with_capacity(params.n_orbitals);
    raw.extend(betas);
    raw.extend(mids);
    raw.extend(normals);
    raw.extend(std::iter::repeat(top).take(params.n_orbitals - params.m));

    let spectrum = OneBodySpectrum::from_values(raw, policy.clone())?;
    let decomposition = canonical_decompose(&spectrum, params.n_particles)?;
    if decomposition.r() != params.r {
        return Err(Error::Internal(format!(
            "canonical split index {} disagrees with the requested hole block {}",
            decomposition.r(),
            params.r
        )));
    }
    if !policy.eq(decomposition.t(), &t) {
        return Err(Error::Internal(format!(
            "canonical shift {} disagrees with the model shift {t}",
            decomposition.t()
        )));
    }
    Ok((spectrum, decomposition))
}

/// Kernel dimension of the expanded model operator: `C(n-m, N-r)`.
pub fn kernel_dimension(params: &Model74Params) -> Result<u128> {
    params.validate_shape()?;
    Ok(binomial(
        params.n_orbitals - params.m,
        params.n_particles - params.r,
    ))
}

/// Classification of a model eigenvalue level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelClass {
    Ground,
    Collective,
    Normal,
    Other,
}

impl LevelClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LevelClass::Ground => "ground",
            LevelClass::Collective => "collective",
            LevelClass::Normal => "normal",
            LevelClass::Other => "other",
        }
    }
}

/// One level of a classified diagram.
#[derive(Debug, Clone)]
pub struct DiagramLevel {
    pub value: Scalar,
    pub degeneracy: usize,
    pub class: LevelClass,
    pub states: Vec<OccupationState>,
    /// For collective levels: whether a generic combination of the
    /// eigenspace has no one-particle Grassmann factor. `None` when the
    /// check was not run (non-collective level or budget exceeded).
    pub completely_correlated: Option<bool>,
    /// One-particle eigenvalues composing the first representative.
    pub composition: Vec<Scalar>,
}

/// The classified many-body level structure of a model.
#[derive(Debug, Clone)]
pub struct LevelDiagram {
    pub n_orbitals: usize,
    pub n_particles: usize,
    pub levels: Vec<DiagramLevel>,
    pub notes: Vec<String>,
    /// Every nonzero decomposition weight appears as a level value.
    pub weights_present: bool,
    /// Every level value equals the hole/particle weight sum of its states.
    pub bookkeeping_ok: bool,
    /// Seed used for the generic correlation combinations.
    pub seed: u64,
}

impl LevelDiagram {
    pub fn level_at(&self, value: &Scalar, policy: &NumericPolicy) -> Option<&DiagramLevel> {
        self.levels.iter().find(|l| policy.eq(&l.value, value))
    }
}

/// Weight-sum identity for one determinant: empty hole orbitals contribute
/// their hole weights, occupied projector orbitals their particle weights.
pub fn weight_sum(decomposition: &CanonicalDecomposition, occ: &OccupationState) -> Scalar {
    let mut total = Scalar::zero();
    for pos in 0..decomposition.n() {
        let label = decomposition.labels()[pos];
        if pos < decomposition.r() {
            if !occ.contains(label) {
                total = total + decomposition.gamma(pos).clone();
            }
        } else if occ.contains(label) {
            total = total + decomposition.gamma(pos).clone();
        }
    }
    total
}

/// Groups the full many-body spectrum into levels and classifies each one
/// against the decomposition's hole/normal block structure. Collective
/// levels additionally get a correlation check: a deterministically seeded
/// generic combination of the eigenspace is tested for the absence of
/// one-particle Grassmann factors.
pub fn analyze_levels(
    spec: &OneBodySpectrum,
    n_particles: usize,
    decomposition: &CanonicalDecomposition,
    budget: u64,
    seed: u64,
) -> Result<LevelDiagram> {
    let policy = spec.policy().clone();
    let basis = FockBasis::new(spec.n(), n_particles, budget)?;
    let many_body = full_spectrum(spec, &basis)?;

    let r = decomposition.r();
    let hole_orbitals: Vec<usize> = decomposition.hole_labels();
    let normal_orbitals: Vec<usize> = (r..decomposition.n())
        .filter(|&pos| !policy.is_zero(decomposition.gamma(pos)))
        .map(|pos| decomposition.labels()[pos])
        .collect();

    let correlation_feasible = binomial(spec.n(), n_particles + 1) <= budget as u128;

    let mut levels = Vec::with_capacity(many_body.levels().len());
    let mut weights_present = true;
    let mut bookkeeping_ok = true;

    for (index, level) in many_body.levels().iter().enumerate() {
        for state in &level.states {
            if !policy.eq(&weight_sum(decomposition, state), &level.value) {
                bookkeeping_ok = false;
            }
        }

        let misses_a_hole = |occ: &OccupationState| hole_orbitals.iter().any(|&h| !occ.contains(h));
        let keeps_all_holes = |occ: &OccupationState| hole_orbitals.iter().all(|&h| occ.contains(h));
        let occupies_a_normal =
            |occ: &OccupationState| normal_orbitals.iter().any(|&j| occ.contains(j));

        let class = if policy.is_zero(&level.value) {
            LevelClass::Ground
        } else if !hole_orbitals.is_empty()
            && level.states.iter().all(&misses_a_hole)
            && !level.states.iter().any(&occupies_a_normal)
        {
            LevelClass::Collective
        } else if level.states.iter().all(&keeps_all_holes)
            && normal_orbitals
                .iter()
                .any(|&j| level.states.iter().all(|occ| occ.contains(j)))
        {
            LevelClass::Normal
        } else {
            LevelClass::Other
        };

        let completely_correlated = if class == LevelClass::Collective && correlation_feasible {
            Some(generic_combination_is_correlated(
                spec.n(),
                n_particles,
                &level.states,
                &policy,
                seed,
                index as u64,
            )?)
        } else {
            None
        };

        let composition = level.states[0]
            .occupied()
            .map(|orbital| spec.value_by_label(orbital).clone())
            .collect();

        levels.push(DiagramLevel {
            value: level.value.clone(),
            degeneracy: level.degeneracy,
            class,
            states: level.states.clone(),
            completely_correlated,
            composition,
        });
    }

    for pos in 0..decomposition.n() {
        let gamma = decomposition.gamma(pos);
        if policy.is_zero(gamma) {
            continue;
        }
        if !levels.iter().any(|l| policy.eq(&l.value, gamma)) {
            weights_present = false;
        }
    }

    Ok(LevelDiagram {
        n_orbitals: spec.n(),
        n_particles,
        levels,
        notes: Vec::new(),
        weights_present,
        bookkeeping_ok,
        seed,
    })
}

/// Builds a seeded generic combination of the eigenspace spanned by
/// `states` and reports whether it has no one-particle Grassmann factor.
fn generic_combination_is_correlated(
    n_orbitals: usize,
    n_particles: usize,
    states: &[OccupationState],
    policy: &NumericPolicy,
    seed: u64,
    stream: u64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let terms: Vec<(OccupationState, ComplexScalar)> = states
        .iter()
        .map(|occ| {
            let amplitude = Scalar::from_int(rng.gen_range(1..=16));
            (*occ, ComplexScalar::real(amplitude))
        })
        .collect();
    let state = ManyBodyState::unchecked(n_orbitals, n_particles, terms, policy.clone());
    let rank = wedge_map_rank(&state)?;
    Ok(rank == n_orbitals)
}

/// Everything a model builder produces.
#[derive(Debug, Clone)]
pub struct ModelAnalysis {
    pub spectrum: OneBodySpectrum,
    pub decomposition: CanonicalDecomposition,
    pub diagram: LevelDiagram,
}

/// Type I model: `r = ceil(N/2)` holes sharing one negative value, so a
/// single collective level sits inside the gap below the first normal
/// excitation.
#[derive(Debug, Clone)]
pub struct TypeOneParams {
    pub n_particles: usize,
    /// The shared hole value, strictly negative.
    pub beta: Scalar,
    /// Normal-block values for orbitals `r+1..=m`.
    pub alphas: Vec<Scalar>,
    pub n_orbitals: usize,
    pub m: usize,
    pub policy: NumericPolicy,
}

impl TypeOneParams {
    pub fn hole_count(&self) -> usize {
        (self.n_particles + 1) / 2
    }
}

pub fn type_one(params: &TypeOneParams, budget: u64, seed: u64) -> Result<ModelAnalysis> {
    let n_particles = params.n_particles;
    let r = params.hole_count();
    let policy = &params.policy;
    if n_particles < 2 {
        return Err(Error::InvalidParams(
            "type I model needs at least 2 particles".into(),
        ));
    }
    if !policy.is_negative(&params.beta) {
        return Err(Error::InvalidParams(format!(
            "beta = {} must be strictly negative",
            params.beta
        )));
    }
    if params.m != r + params.alphas.len() {
        return Err(Error::InvalidParams(format!(
            "m = {} must equal r + #alphas = {}",
            params.m,
            r + params.alphas.len()
        )));
    }

    // Collective level value: -(t + beta) with t = r*beta/(N-r).
    let t = params.beta.mul_int(r as i64).div_int((n_particles - r) as i64);
    let collective = -(&t + &params.beta);

    // Gap condition: every normal level t + alpha_j must lie above the
    // collective level. For even N this reads beta + alpha_j > -2*beta.
    for alpha in &params.alphas {
        let normal_level = &t + alpha;
        if !(collective < normal_level && !policy.eq(&collective, &normal_level)) {
            return Err(Error::GapViolation(if n_particles % 2 == 0 {
                format!(
                    "type I requires beta + alpha_j > -2*beta: alpha_j = {alpha} gives \
                     beta + alpha_j = {normal_level}, -2*beta = {collective}"
                )
            } else {
                format!(
                    "type I requires t + alpha_j > -(t + beta): alpha_j = {alpha} gives \
                     t + alpha_j = {normal_level}, collective level {collective}"
                )
            }));
        }
    }

    let model = Model74Params {
        n_orbitals: params.n_orbitals,
        n_particles,
        r,
        m: params.m,
        betas: vec![params.beta.clone(); r],
        alphas_mid: Vec::new(),
        alphas_normal: params.alphas.clone(),
        policy: policy.clone(),
    };
    let (spectrum, decomposition) = build_model(&model)?;
    let mut diagram = analyze_levels(&spectrum, n_particles, &decomposition, budget, seed)?;

    let kappa = params.n_orbitals - params.m;
    let ground_expected = binomial(kappa, n_particles - r);
    let collective_expected = r as u128 * binomial(kappa, n_particles - r + 1);
    let normal_expected = binomial(kappa, n_particles - r - 1);

    let ground = &diagram.levels[0];
    if !policy.is_zero(&ground.value) || ground.degeneracy as u128 != ground_expected {
        return Err(Error::Internal(format!(
            "ground level mismatch: value {}, degeneracy {} (expected 0 with {})",
            ground.value, ground.degeneracy, ground_expected
        )));
    }
    let collective_level = diagram
        .level_at(&collective, policy)
        .ok_or_else(|| Error::Internal(format!("collective level {collective} missing")))?;
    if collective_level.degeneracy as u128 != collective_expected {
        return Err(Error::InvalidParams(format!(
            "accidental degeneracy: level {collective} has {} states, the isolated \
             collective count is {collective_expected}; pick well-separated values",
            collective_level.degeneracy
        )));
    }
    let enumerated_collective = collective_level.degeneracy;

    if let Some(alpha_min) = params.alphas.iter().min() {
        let normal_value = &t + alpha_min;
        let normal_level = diagram
            .level_at(&normal_value, policy)
            .ok_or_else(|| Error::Internal(format!("normal level {normal_value} missing")))?;
        if normal_level.degeneracy as u128 != normal_expected {
            return Err(Error::InvalidParams(format!(
                "accidental degeneracy: level {normal_value} has {} states, the isolated \
                 first-normal count is {normal_expected}; pick well-separated values",
                normal_level.degeneracy
            )));
        }
        if !(Scalar::zero() < collective && collective < normal_value) {
            return Err(Error::Internal(format!(
                "level ordering broken: 0 < {collective} < {normal_value} expected"
            )));
        }
    }

    if n_particles % 2 == 0 {
        let competing = (n_particles as u128 / 2) * binomial(kappa, n_particles / 2);
        if competing != collective_expected {
            diagram.notes.push(format!(
                "collective degeneracy: enumerated {enumerated_collective} matches \
                 (N/2)*C(kappa, N/2+1) = {collective_expected}; the competing count \
                 (N/2)*C(kappa, N/2) = {competing} is inconsistent with enumeration"
            ));
        }
    }

    Ok(ModelAnalysis {
        spectrum,
        decomposition,
        diagram,
    })
}

/// Type II model: the hole block splits into `N/4` orbitals at `2*beta` and
/// `N/4` at `2*alpha`, giving two collective levels inside the gap.
#[derive(Debug, Clone)]
pub struct TypeTwoParams {
    /// Particle count, divisible by 4.
    pub n_particles: usize,
    pub beta: Scalar,
    pub alpha: Scalar,
    /// Normal-block values for orbitals `N/2+1..=m`.
    pub alphas: Vec<Scalar>,
    pub n_orbitals: usize,
    pub m: usize,
    pub policy: NumericPolicy,
}

pub fn type_two(params: &TypeTwoParams, budget: u64, seed: u64) -> Result<ModelAnalysis> {
    let n_particles = params.n_particles;
    let policy = &params.policy;
    if n_particles == 0 || n_particles % 4 != 0 {
        return Err(Error::InvalidParams(format!(
            "type II needs a particle count divisible by 4, got {n_particles}"
        )));
    }
    let quarter = n_particles / 4;
    let r = n_particles / 2;
    if !policy.is_negative(&params.beta) {
        return Err(Error::InvalidParams(format!(
            "beta = {} must be strictly negative",
            params.beta
        )));
    }
    if params.alpha.is_negative() || policy.is_zero(&params.alpha) {
        return Err(Error::InvalidParams(format!(
            "alpha = {} must be strictly positive",
            params.alpha
        )));
    }
    // beta + 3*alpha < 0 keeps the doubled-alpha block strictly below the
    // top value (it implies beta + alpha < 0 and beta + 2*alpha < 0).
    let hole2 = -(&params.beta + &params.alpha.mul_int(3));
    if !policy.is_negative(&(-&hole2)) {
        return Err(Error::InvalidParams(format!(
            "type II requires beta + 3*alpha < 0, got {}",
            -&hole2
        )));
    }
    if params.m != r + params.alphas.len() {
        return Err(Error::InvalidParams(format!(
            "m = {} must equal N/2 + #alphas = {}",
            params.m,
            r + params.alphas.len()
        )));
    }

    let t = &params.beta + &params.alpha;
    let hole1 = -(&params.beta.mul_int(3) + &params.alpha);

    // Gap condition: 4*beta + 2*alpha + alpha_j > 0, i.e. every normal
    // level beta + alpha + alpha_j lies above the larger collective level.
    for alpha_j in &params.alphas {
        let margin = &params.beta.mul_int(4) + &(&params.alpha.mul_int(2) + alpha_j);
        if policy.is_negative(&margin) || policy.is_zero(&margin) {
            return Err(Error::GapViolation(format!(
                "type II requires 4*beta + 2*alpha + alpha_j > 0: alpha_j = {alpha_j} \
                 gives 4*beta + 2*alpha + alpha_j = {margin}"
            )));
        }
    }

    let model = Model74Params {
        n_orbitals: params.n_orbitals,
        n_particles,
        r,
        m: params.m,
        betas: vec![params.beta.mul_int(2); quarter],
        alphas_mid: vec![params.alpha.mul_int(2); quarter],
        alphas_normal: params.alphas.clone(),
        policy: policy.clone(),
    };
    let (spectrum, decomposition) = build_model(&model)?;

    // Cross-check the canonical weights against the closed forms derived
    // from t = beta + alpha.
    if !policy.eq(decomposition.t(), &t) {
        return Err(Error::Internal(format!(
            "shift {} disagrees with beta + alpha = {t}",
            decomposition.t()
        )));
    }
    for pos in 0..quarter {
        if !policy.eq(decomposition.gamma(pos), &hole1) {
            return Err(Error::Internal(format!(
                "first hole weight {} disagrees with -(3*beta + alpha) = {hole1}",
                decomposition.gamma(pos)
            )));
        }
    }
    for pos in quarter..r {
        if !policy.eq(decomposition.gamma(pos), &hole2) {
            return Err(Error::Internal(format!(
                "second hole weight {} disagrees with -(beta + 3*alpha) = {hole2}",
                decomposition.gamma(pos)
            )));
        }
    }

    let mut diagram = analyze_levels(&spectrum, n_particles, &decomposition, budget, seed)?;

    let kappa = params.n_orbitals - params.m;
    let ground_expected = binomial(kappa, n_particles - r);
    let ground = &diagram.levels[0];
    if !policy.is_zero(&ground.value) || ground.degeneracy as u128 != ground_expected {
        return Err(Error::Internal(format!(
            "ground level mismatch: value {}, degeneracy {} (expected 0 with {})",
            ground.value, ground.degeneracy, ground_expected
        )));
    }
    for value in [&hole2, &hole1] {
        if diagram.level_at(value, policy).is_none() {
            return Err(Error::Internal(format!("collective level {value} missing")));
        }
    }
    if let Some(alpha_min) = params.alphas.iter().min() {
        let normal_value = &t + alpha_min;
        if !(Scalar::zero() < hole2 && hole2 < hole1 && hole1 < normal_value) {
            return Err(Error::Internal(format!(
                "level ordering broken: 0 < {hole2} < {hole1} < {normal_value} expected"
            )));
        }
        // A normal value can resonate with a multi-hole excitation (for
        // instance the all-top determinant at -4*(beta+alpha)); the
        // eigenvalue degeneracy then exceeds the isolated single-particle
        // count. Report it rather than hiding it.
        let isolated = binomial(kappa, n_particles - r - 1);
        let (level_degeneracy, level_class) = {
            let level = diagram
                .level_at(&normal_value, policy)
                .ok_or_else(|| Error::Internal(format!("normal level {normal_value} missing")))?;
            (level.degeneracy, level.class)
        };
        if level_degeneracy as u128 != isolated || level_class != LevelClass::Normal {
            diagram.notes.push(format!(
                "level {normal_value} is accidentally resonant: enumerated degeneracy \
                 {level_degeneracy} exceeds the isolated single-particle count {isolated}"
            ));
        }
    }

    let shorthand = -(&params.beta + &params.alpha.mul_int(2));
    if !policy.eq(&shorthand, &hole2) {
        diagram.notes.push(format!(
            "second collective weight: canonical value -(beta + 3*alpha) = {hole2}; \
             the nearby form -(beta + 2*alpha) = {shorthand} does not reproduce the \
             enumerated level"
        ));
    }

    Ok(ModelAnalysis {
        spectrum,
        decomposition,
        diagram,
    })
}

/// Monospace rendering of a level diagram: highest level first, one bar
/// per level scaled by degeneracy, with the one-particle composition of a
/// representative shown after an arrow.
pub fn render_diagram(diagram: &LevelDiagram, mode: NumericMode) -> String {
    let fmt = |v: &Scalar| match mode {
        NumericMode::Rational => v.to_string(),
        NumericMode::Float => format!("{}", v.to_f64()),
    };
    let mut out = String::new();
    out.push_str(&format!(
        "level diagram: n = {} orbitals, N = {} particles, {} states\n",
        diagram.n_orbitals,
        diagram.n_particles,
        diagram.levels.iter().map(|l| l.degeneracy).sum::<usize>()
    ));
    let value_width = diagram
        .levels
        .iter()
        .map(|l| fmt(&l.value).len())
        .max()
        .unwrap_or(1)
        .max(5);
    out.push_str(&format!(
        "{:>value_width$}  {:<32}  {:<10}  composition\n",
        "value", "degeneracy", "class"
    ));
    for level in diagram.levels.iter().rev() {
        let bar: String = "#".repeat(level.degeneracy.min(24));
        let composition = level
            .composition
            .iter()
            .map(|v| format!("({})", fmt(v)))
            .collect::<Vec<_>>()
            .join(" + ");
        let correlated = match level.completely_correlated {
            Some(true) => " [completely correlated]",
            Some(false) => " [factorizable]",
            None => "",
        };
        out.push_str(&format!(
            "{:>value_width$}  {:<32}  {:<10}  <- {}{}\n",
            fmt(&level.value),
            format!("{bar} ({})", level.degeneracy),
            level.class.as_str(),
            composition,
            correlated,
        ));
    }
    for note in &diagram.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
