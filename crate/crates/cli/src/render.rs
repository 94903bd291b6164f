//! Text rendering for the CLI reports.

use serde_json::{json, Value};

use nrep_core::schema::{measure_report, scalar_to_json};
use nrep_core::{
    analysis::AnalysisReport, canonical_decompose, classify_state, expectation,
    grassmann_factor_space, is_dual_cone_member, models, occupation_measures, semi_spectral,
    FockBasis, ManyBodySpectrum, ManyBodyState, NumericMode, OneBodySpectrum, OrbitalRole,
    Result, Scalar, Variant,
};

use crate::{format_scalar, Cli};

fn mode_name(mode: NumericMode) -> &'static str {
    match mode {
        NumericMode::Rational => "rational",
        NumericMode::Float => "float",
    }
}

pub fn analysis_text(report: &AnalysisReport, spec: &OneBodySpectrum) -> String {
    let mode = spec.policy().mode();
    let fs = |v: &Scalar| format_scalar(v, mode);
    let mut out = String::new();
    out.push_str(&format!(
        "spectrum: n = {} orbitals, N = {} particles ({} mode)\n",
        spec.n(),
        report.n_particles,
        mode_name(mode)
    ));
    out.push_str(&format!(
        "sorted eigenvalues: {}\n",
        spec.values().iter().map(&fs).collect::<Vec<_>>().join(", ")
    ));
    if report.verdict.member {
        out.push_str(&format!(
            "membership: MEMBER (sum of {} smallest = {} >= 0)\n",
            report.n_particles,
            fs(&report.verdict.min_sum)
        ));
    } else {
        out.push_str(&format!(
            "membership: NOT A MEMBER (sum of {} smallest = {} < 0)\n",
            report.n_particles,
            fs(&report.verdict.min_sum)
        ));
        if let Some(certificate) = &report.verdict.certificate {
            out.push_str(&format!(
                "certificate: occupying orbitals {certificate:?} gives a negative eigenvalue\n"
            ));
        }
        return out;
    }

    if let Some(d) = &report.decomposition {
        out.push_str(&format!(
            "canonical decomposition: r = {}, t = {}\n",
            d.r(),
            fs(d.t())
        ));
        out.push_str("  orbital  eigenvalue  role      weight\n");
        for pos in 0..d.n() {
            let label = d.labels()[pos];
            let role = if pos < d.r() { "hole" } else { "particle" };
            out.push_str(&format!(
                "  {:>7}  {:>10}  {:<8}  {}\n",
                label + 1,
                fs(spec.value(pos)),
                role,
                fs(d.gamma(pos))
            ));
        }
    }

    if let Some(pseudo) = &report.pseudo {
        let mut terms: Vec<String> = Vec::new();
        for (orbital, weight, _) in &pseudo.hole_terms {
            terms.push(format!("{}*(1 - n_{})", fs(weight), orbital + 1));
        }
        for (orbital, weight, _) in &pseudo.particle_terms {
            if !weight.is_zero() {
                terms.push(format!("{}*n_{}", fs(weight), orbital + 1));
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        out.push_str(&format!("pseudo-spectral form: {}\n", terms.join(" + ")));
    }

    if let Some(levels) = &report.levels {
        let rows: Vec<String> = levels
            .levels()
            .iter()
            .map(|l| format!("{} ({})", fs(&l.value), l.degeneracy))
            .collect();
        out.push_str(&format!("levels (value, degeneracy): {}\n", rows.join(", ")));
    }

    out.push_str("checks:\n");
    for check in &report.checks {
        out.push_str(&format!(
            "  {}: {} — {}\n",
            check.name,
            if check.passed { "pass" } else { "FAIL" },
            check.detail
        ));
    }
    out
}

pub fn spectrum_text(
    spec: &OneBodySpectrum,
    n_particles: usize,
    many_body: &ManyBodySpectrum,
    cli: &Cli,
) -> Result<String> {
    let mode = spec.policy().mode();
    let fs = |v: &Scalar| format_scalar(v, mode);
    let mut out = String::new();
    out.push_str(&format!(
        "many-body spectrum: n = {} orbitals, N = {} particles, {} states\n",
        spec.n(),
        n_particles,
        many_body.degeneracy_total()
    ));
    out.push_str("  value  degeneracy\n");
    for level in many_body.levels() {
        out.push_str(&format!(
            "  {:>5}  {}\n",
            fs(&level.value),
            level.degeneracy
        ));
    }
    // Classified diagram when the spectrum is a member.
    if is_dual_cone_member(spec, n_particles)?.member {
        let decomposition = canonical_decompose(spec, n_particles)?;
        let diagram =
            models::analyze_levels(spec, n_particles, &decomposition, cli.budget, cli.seed)?;
        out.push('\n');
        out.push_str(&models::render_diagram(&diagram, mode));
    }
    Ok(out)
}

pub fn model_text(kind: &str, analysis: &models::ModelAnalysis) -> String {
    let mode = analysis.spectrum.policy().mode();
    let fs = |v: &Scalar| format_scalar(v, mode);
    let mut out = String::new();
    let d = &analysis.decomposition;
    out.push_str(&format!(
        "model {kind}: n = {} orbitals, N = {} particles, r = {}\n",
        analysis.spectrum.n(),
        analysis.diagram.n_particles,
        d.r()
    ));
    out.push_str(&format!(
        "eigenvalues (input order): {}\n",
        analysis
            .spectrum
            .values_in_input_order()
            .iter()
            .map(&fs)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!("shift t = {}\n", fs(d.t())));
    let weights: Vec<String> = d
        .gammas_in_input_order()
        .iter()
        .enumerate()
        .map(|(orbital, g)| format!("gamma_{} = {}", orbital + 1, fs(g)))
        .collect();
    out.push_str(&format!("weights: {}\n\n", weights.join(", ")));
    out.push_str(&models::render_diagram(&analysis.diagram, mode));
    out
}

pub struct StateReport {
    pub text: String,
    pub json: Value,
}

pub fn state_report(
    state: &ManyBodyState,
    spec: &OneBodySpectrum,
    n_particles: usize,
    budget: u64,
) -> Result<StateReport> {
    let policy = spec.policy();
    let mode = policy.mode();
    let fs = |v: &Scalar| format_scalar(v, mode);
    let n = state.n_orbitals();

    let (mu, mu_tilde) = occupation_measures(state);
    let roles: Vec<OrbitalRole> = (0..n)
        .map(|orbital| classify_state(state, orbital))
        .collect::<Result<Vec<_>>>()?;

    let basis = FockBasis::new(n, n_particles, budget)?;
    let operator = nrep_core::build_one_body_diagonal(spec, &basis)?;
    let observed = expectation(&operator, state)?;

    // Eigenvalue route: sum_i value_i * mu_i.
    let eigen_route: Scalar = (0..n)
        .map(|orbital| spec.value_by_label(orbital) * &mu[orbital])
        .sum();
    let eigen_ok = policy.eq(&eigen_route, &observed);

    // Weight route, available for members: hole weights pair with the
    // emptiness measures, projector weights with the occupation measures.
    let membership = is_dual_cone_member(spec, n_particles)?;
    let weight_route = if membership.member {
        let d = canonical_decompose(spec, n_particles)?;
        let mut total = Scalar::zero();
        for pos in 0..d.n() {
            let label = d.labels()[pos];
            let measure = if pos < d.r() {
                &mu_tilde[label]
            } else {
                &mu[label]
            };
            total = total + d.gamma(pos) * measure;
        }
        Some((policy.eq(&total, &observed), total))
    } else {
        None
    };

    let factors = grassmann_factor_space(state, budget)?;
    let semi = semi_spectral(spec, &basis, Variant::Raw)?;

    let mut text = String::new();
    text.push_str(&format!(
        "state: n = {} orbitals, N = {} particles, {} terms ({} mode)\n",
        n,
        n_particles,
        state.terms().len(),
        mode_name(mode)
    ));
    text.push_str("  orbital  mu       mu_tilde  role\n");
    for orbital in 0..n {
        let role = match roles[orbital] {
            OrbitalRole::Particle => "particle",
            OrbitalRole::Hole => "hole",
            OrbitalRole::Neither => "neither",
        };
        text.push_str(&format!(
            "  {:>7}  {:<7}  {:<8}  {}\n",
            orbital + 1,
            fs(&mu[orbital]),
            fs(&mu_tilde[orbital]),
            role
        ));
    }
    let mu_sum: Scalar = mu.iter().sum();
    text.push_str(&format!(
        "sums: sum(mu) = {} (N = {}), sum(mu + mu_tilde) = {} (n = {})\n",
        fs(&mu_sum),
        n_particles,
        fs(&(&mu_sum + &mu_tilde.iter().sum::<Scalar>())),
        n
    ));
    text.push_str(&format!("expectation: {}\n", fs(&observed)));
    text.push_str(&format!(
        "identity (eigenvalue route): {} — sum value_i * mu_i = {}\n",
        if eigen_ok { "pass" } else { "FAIL" },
        fs(&eigen_route)
    ));
    match &weight_route {
        Some((ok, total)) => text.push_str(&format!(
            "identity (weight route): {} — sum gamma*(mu or mu_tilde) = {}\n",
            if *ok { "pass" } else { "FAIL" },
            fs(total)
        )),
        None => text.push_str("identity (weight route): n/a — spectrum is not a dual-cone member\n"),
    }
    text.push_str(&format!(
        "grassmann factor space: dimension {}, factors {:?}\n",
        factors.dimension,
        factors.factors.iter().map(|&o| o + 1).collect::<Vec<_>>()
    ));

    let json = json!({
        "n": n,
        "N": n_particles,
        "mu": mu.iter().map(|v| scalar_to_json(v, mode)).collect::<Vec<_>>(),
        "mu_tilde": mu_tilde.iter().map(|v| scalar_to_json(v, mode)).collect::<Vec<_>>(),
        "roles": roles
            .iter()
            .map(|r| match r {
                OrbitalRole::Particle => "particle",
                OrbitalRole::Hole => "hole",
                OrbitalRole::Neither => "neither",
            })
            .collect::<Vec<_>>(),
        "expectation": scalar_to_json(&observed, mode),
        "identity_eigenvalue_route": eigen_ok,
        "identity_weight_route": weight_route.as_ref().map(|(ok, _)| *ok),
        "factor_dimension": factors.dimension,
        "factors": factors.factors.iter().map(|&o| o + 1).collect::<Vec<_>>(),
        "semi_spectral_atoms": measure_report(&semi, policy, mode),
    });

    Ok(StateReport { text, json })
}
