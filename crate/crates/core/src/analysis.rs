//! Full analysis of one spectrum: membership, canonical decomposition,
//! pseudo-spectral terms, many-body level summary, and the cross-checks
//! that tie the routes together.

use serde_json::{json, Value};

use crate::cone::{canonical_decompose, kernel_dim_bound_check, reconstruct, CanonicalDecomposition};
use crate::error::Result;
use crate::fock::{binomial, build_one_body_diagonal, FockBasis, ManyBodySpectrum};
use crate::povm::{pseudo_spectral, semi_spectral, spectral, PseudoSpectralDecomposition, Variant};
use crate::schema::{decomposition_report, pseudo_spectral_report, scalar_to_json};
use crate::spectrum::{is_dual_cone_member, MembershipVerdict, OneBodySpectrum};

/// One named cross-check with its verdict; `detail` names the violated
/// identity on failure.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Everything `analyze` produces for one spectrum.
#[derive(Debug)]
pub struct AnalysisReport {
    pub n_particles: usize,
    pub verdict: MembershipVerdict,
    pub decomposition: Option<CanonicalDecomposition>,
    pub pseudo: Option<PseudoSpectralDecomposition>,
    pub levels: Option<ManyBodySpectrum>,
    pub checks: Vec<CheckOutcome>,
}

impl AnalysisReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the full analysis. Enumeration-backed parts (level summary, the
/// operator-equality cross-check) are skipped when the basis would exceed
/// the budget; membership and the decomposition never are.
pub fn analyze(spec: &OneBodySpectrum, n_particles: usize, budget: u64) -> Result<AnalysisReport> {
    let verdict = is_dual_cone_member(spec, n_particles)?;
    let policy = spec.policy();
    let mut checks = Vec::new();

    if !verdict.member {
        return Ok(AnalysisReport {
            n_particles,
            verdict,
            decomposition: None,
            pseudo: None,
            levels: None,
            checks,
        });
    }

    let decomposition = canonical_decompose(spec, n_particles)?;

    let reconstruction_ok = reconstruct(&decomposition)?.eq_exact(spec);
    checks.push(CheckOutcome {
        name: "reconstruction",
        passed: reconstruction_ok,
        detail: if reconstruction_ok {
            "weighted extreme elements rebuild the input spectrum".into()
        } else {
            "sum of weighted extreme elements differs from the input spectrum".into()
        },
    });

    let kernel_ok = kernel_dim_bound_check(spec, &decomposition);
    checks.push(CheckOutcome {
        name: "kernel_bound",
        passed: kernel_ok,
        detail: if kernel_ok {
            format!(
                "zero eigenvalues confined to positions ({}, {}]",
                decomposition.negatives(),
                decomposition.r()
            )
        } else {
            "a zero eigenvalue sits outside the allowed position range".into()
        },
    });

    let within_budget = binomial(spec.n(), n_particles) <= budget as u128;
    let mut pseudo = None;
    let mut levels = None;
    if within_budget {
        let basis = FockBasis::new(spec.n(), n_particles, budget)?;
        let pseudo_terms = pseudo_spectral(&decomposition, &basis)?;

        let direct = build_one_body_diagonal(spec, &basis)?;
        let via_spectral = spectral(spec, &basis)?.realize(&basis)?;
        let via_semi = semi_spectral(spec, &basis, Variant::Raw)?.realize(&basis)?;
        let via_pseudo = pseudo_terms.realize(&basis)?;
        let three_way = via_spectral.eq_under(&via_semi, policy)
            && via_semi.eq_under(&via_pseudo, policy)
            && via_pseudo.eq_under(&direct, policy);
        checks.push(CheckOutcome {
            name: "three_way_equality",
            passed: three_way,
            detail: if three_way {
                "spectral, semi-spectral, and pseudo-spectral realizations agree".into()
            } else {
                "realized operators differ between decomposition routes".into()
            },
        });

        levels = Some(crate::fock::full_spectrum(spec, &basis)?);
        pseudo = Some(pseudo_terms);
    }

    Ok(AnalysisReport {
        n_particles,
        verdict,
        decomposition: Some(decomposition),
        pseudo,
        levels,
        checks,
    })
}

/// JSON form of the analysis report.
pub fn analysis_report_json(report: &AnalysisReport, spec: &OneBodySpectrum) -> Value {
    let mode = spec.policy().mode();
    let membership = json!({
        "member": report.verdict.member,
        "min_sum": scalar_to_json(&report.verdict.min_sum, mode),
        "certificate": report.verdict.certificate,
    });
    let decomposition = report.decomposition.as_ref().map(|d| {
        let reconstruction_ok = report
            .checks
            .iter()
            .find(|c| c.name == "reconstruction")
            .map(|c| c.passed)
            .unwrap_or(false);
        decomposition_report(d, reconstruction_ok, mode)
    });
    let pseudo = report
        .pseudo
        .as_ref()
        .map(|p| pseudo_spectral_report(p, mode));
    let levels = report.levels.as_ref().map(|ms| {
        let rows: Vec<Value> = ms
            .levels()
            .iter()
            .map(|l| {
                json!({
                    "value": scalar_to_json(&l.value, mode),
                    "degeneracy": l.degeneracy,
                })
            })
            .collect();
        json!(rows)
    });
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    json!({
        "n": spec.n(),
        "N": report.n_particles,
        "eigenvalues_sorted": spec
            .values()
            .iter()
            .map(|v| scalar_to_json(v, mode))
            .collect::<Vec<_>>(),
        "membership": membership,
        "decomposition": decomposition,
        "pseudo_spectral": pseudo,
        "levels": levels,
        "checks": checks,
    })
}
