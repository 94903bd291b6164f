//! JSON input schemas and report builders.
//!
//! Scalar encoding: rational values travel as integers or `"p/q"` strings
//! (plain decimal strings are also accepted and read exactly); float values
//! travel as JSON numbers. Orbital labels are 1-based on the wire.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::cone::CanonicalDecomposition;
use crate::error::{Error, Result};
use crate::fock::OccupationState;
use crate::models::{LevelDiagram, Model74Params, TypeOneParams, TypeTwoParams};
use crate::povm::{AtomTag, PovMeasure, PseudoSpectralDecomposition};
use crate::scalar::{ComplexScalar, NumericMode, NumericPolicy, Scalar};
use crate::spectrum::OneBodySpectrum;
use crate::state::ManyBodyState;

pub fn scalar_from_json(value: &Value, mode: NumericMode) -> Result<Scalar> {
    match value {
        Value::String(text) => Scalar::parse(text),
        Value::Number(number) => {
            if let Some(int) = number.as_i64() {
                return Ok(Scalar::from_int(int));
            }
            match mode {
                NumericMode::Float => {
                    Scalar::from_f64(number.as_f64().ok_or_else(|| Error::InvalidScalar {
                        text: number.to_string(),
                        reason: "not a finite number".into(),
                    })?)
                }
                NumericMode::Rational => Err(Error::InvalidScalar {
                    text: number.to_string(),
                    reason: "non-integer number in rational mode; write it as a string, e.g. \"7/5\" or \"1.4\"".into(),
                }),
            }
        }
        other => Err(Error::InvalidScalar {
            text: other.to_string(),
            reason: "expected a number or a string".into(),
        }),
    }
}

pub fn scalar_to_json(value: &Scalar, mode: NumericMode) -> Value {
    match mode {
        NumericMode::Float => json!(value.to_f64()),
        NumericMode::Rational => {
            if value.is_integer() {
                if let Ok(int) = value.to_string().parse::<i64>() {
                    return json!(int);
                }
            }
            json!(value.to_string())
        }
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid JSON: {e}")))
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Malformed(format!("{what}: {e}")))
}

/// Resolves the numeric policy from an optional CLI override and the
/// file's `numeric` / `tolerance` fields. Rational is the default.
pub fn resolve_policy(
    cli_override: Option<NumericPolicy>,
    numeric: Option<&str>,
    tolerance: Option<f64>,
) -> Result<NumericPolicy> {
    if let Some(policy) = cli_override {
        return Ok(policy);
    }
    match numeric {
        None | Some("rational") => Ok(NumericPolicy::rational()),
        Some("float") => NumericPolicy::float(tolerance.ok_or(Error::BadTolerance)?),
        Some(other) => Err(Error::Malformed(format!(
            "numeric must be \"rational\" or \"float\", got \"{other}\""
        ))),
    }
}

#[derive(Debug, Deserialize)]
pub struct SpectrumFile {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(rename = "N", default)]
    pub n_particles: Option<usize>,
    pub eigenvalues: Vec<Value>,
    #[serde(default)]
    pub numeric: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug)]
pub struct SpectrumInput {
    pub spectrum: OneBodySpectrum,
    pub n_particles: Option<usize>,
}

/// Parses a spectrum input file. A CLI policy override takes precedence
/// over the file's `numeric`/`tolerance` fields.
pub fn parse_spectrum(text: &str, cli_policy: Option<NumericPolicy>) -> Result<SpectrumInput> {
    let file: SpectrumFile = from_value(parse_json(text)?, "spectrum file")?;
    let policy = resolve_policy(cli_policy, file.numeric.as_deref(), file.tolerance)?;
    if let Some(n) = file.n {
        if n != file.eigenvalues.len() {
            return Err(Error::Malformed(format!(
                "field n = {n} but {} eigenvalues given",
                file.eigenvalues.len()
            )));
        }
    }
    let raw = file
        .eigenvalues
        .iter()
        .map(|v| scalar_from_json(v, policy.mode()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumInput {
        spectrum: OneBodySpectrum::from_values(raw, policy)?,
        n_particles: file.n_particles,
    })
}

#[derive(Debug, Deserialize)]
pub struct StateTermEntry {
    pub occupied: Vec<usize>,
    pub re: Value,
    #[serde(default)]
    pub im: Option<Value>,
}

#[derive(Debug, Deserialize)]
pub struct StateFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_particles: usize,
    pub terms: Vec<StateTermEntry>,
    #[serde(default)]
    pub numeric: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Parses a state file; `occupied` lists 1-based orbital labels.
pub fn parse_state(text: &str, cli_policy: Option<NumericPolicy>) -> Result<ManyBodyState> {
    let file: StateFile = from_value(parse_json(text)?, "state file")?;
    let policy = resolve_policy(cli_policy, file.numeric.as_deref(), file.tolerance)?;
    let mut terms = Vec::with_capacity(file.terms.len());
    for term in &file.terms {
        let zero_based: Vec<usize> = term
            .occupied
            .iter()
            .map(|&label| {
                if label == 0 {
                    Err(Error::Malformed(
                        "orbital labels are 1-based; 0 is not a label".into(),
                    ))
                } else {
                    Ok(label - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let occ = OccupationState::from_orbitals(&zero_based, file.n)?;
        let re = scalar_from_json(&term.re, policy.mode())?;
        let im = match &term.im {
            Some(value) => scalar_from_json(value, policy.mode())?,
            None => Scalar::zero(),
        };
        terms.push((occ, ComplexScalar::new(re, im)));
    }
    ManyBodyState::new(file.n, file.n_particles, terms, policy)
}

#[derive(Debug, Deserialize)]
pub struct TypeOneFile {
    #[serde(rename = "N")]
    pub n_particles: usize,
    pub beta: Value,
    pub alphas: Vec<Value>,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub numeric: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

pub fn parse_type_one(text: &str, cli_policy: Option<NumericPolicy>) -> Result<TypeOneParams> {
    let file: TypeOneFile = from_value(parse_json(text)?, "type I parameter file")?;
    let policy = resolve_policy(cli_policy, file.numeric.as_deref(), file.tolerance)?;
    Ok(TypeOneParams {
        n_particles: file.n_particles,
        beta: scalar_from_json(&file.beta, policy.mode())?,
        alphas: file
            .alphas
            .iter()
            .map(|v| scalar_from_json(v, policy.mode()))
            .collect::<Result<Vec<_>>>()?,
        n_orbitals: file.n,
        m: file.m,
        policy,
    })
}

#[derive(Debug, Deserialize)]
pub struct TypeTwoFile {
    #[serde(rename = "N")]
    pub n_particles: usize,
    pub beta: Value,
    pub alpha: Value,
    #[serde(default)]
    pub alphas: Vec<Value>,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub numeric: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

pub fn parse_type_two(text: &str, cli_policy: Option<NumericPolicy>) -> Result<TypeTwoParams> {
    let file: TypeTwoFile = from_value(parse_json(text)?, "type II parameter file")?;
    let policy = resolve_policy(cli_policy, file.numeric.as_deref(), file.tolerance)?;
    Ok(TypeTwoParams {
        n_particles: file.n_particles,
        beta: scalar_from_json(&file.beta, policy.mode())?,
        alpha: scalar_from_json(&file.alpha, policy.mode())?,
        alphas: file
            .alphas
            .iter()
            .map(|v| scalar_from_json(v, policy.mode()))
            .collect::<Result<Vec<_>>>()?,
        n_orbitals: file.n,
        m: file.m,
        policy,
    })
}

#[derive(Debug, Deserialize)]
pub struct Model74File {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_particles: usize,
    pub r: usize,
    pub m: usize,
    #[serde(default)]
    pub betas: Vec<Value>,
    #[serde(default)]
    pub alphas_mid: Vec<Value>,
    #[serde(default)]
    pub alphas_normal: Vec<Value>,
    #[serde(default)]
    pub numeric: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

pub fn parse_model74(text: &str, cli_policy: Option<NumericPolicy>) -> Result<Model74Params> {
    let file: Model74File = from_value(parse_json(text)?, "model parameter file")?;
    let policy = resolve_policy(cli_policy, file.numeric.as_deref(), file.tolerance)?;
    let convert = |values: &[Value]| -> Result<Vec<Scalar>> {
        values
            .iter()
            .map(|v| scalar_from_json(v, policy.mode()))
            .collect()
    };
    Ok(Model74Params {
        n_orbitals: file.n,
        n_particles: file.n_particles,
        r: file.r,
        m: file.m,
        betas: convert(&file.betas)?,
        alphas_mid: convert(&file.alphas_mid)?,
        alphas_normal: convert(&file.alphas_normal)?,
        policy,
    })
}

/// Decomposition report: weights in the caller's orbital order, hole and
/// projector orbital lists as 1-based labels.
pub fn decomposition_report(
    decomposition: &CanonicalDecomposition,
    reconstruction_ok: bool,
    mode: NumericMode,
) -> Value {
    json!({
        "r": decomposition.r(),
        "t": scalar_to_json(decomposition.t(), mode),
        "gammas": decomposition
            .gammas_in_input_order()
            .iter()
            .map(|g| scalar_to_json(g, mode))
            .collect::<Vec<_>>(),
        "holes": decomposition.hole_labels().iter().map(|&l| l + 1).collect::<Vec<_>>(),
        "particles": decomposition.particle_labels().iter().map(|&l| l + 1).collect::<Vec<_>>(),
        "reconstruction_ok": reconstruction_ok,
    })
}

fn tag_to_json(tag: &AtomTag) -> Value {
    match tag {
        AtomTag::Particle { orbital } => json!(format!("particle({})", orbital + 1)),
        AtomTag::Hole { orbital } => json!(format!("hole({})", orbital + 1)),
        AtomTag::Eigenprojector { level } => json!(format!("level({level})")),
    }
}

/// Measure report: one row per atom with the support size of its effect.
pub fn measure_report(measure: &PovMeasure, policy: &NumericPolicy, mode: NumericMode) -> Value {
    let atoms: Vec<Value> = measure
        .atoms
        .iter()
        .map(|atom| {
            json!({
                "outcome": scalar_to_json(&atom.outcome, mode),
                "tag": tag_to_json(&atom.tag),
                "effect_rank": atom.effect.support_size(policy),
            })
        })
        .collect();
    json!(atoms)
}

/// Pseudo-spectral term list: hole terms then particle terms, 1-based
/// orbitals.
pub fn pseudo_spectral_report(pseudo: &PseudoSpectralDecomposition, mode: NumericMode) -> Value {
    let mut terms = Vec::new();
    for (orbital, weight, _) in &pseudo.hole_terms {
        terms.push(json!({
            "orbital": orbital + 1,
            "kind": "hole",
            "weight": scalar_to_json(weight, mode),
        }));
    }
    for (orbital, weight, _) in &pseudo.particle_terms {
        terms.push(json!({
            "orbital": orbital + 1,
            "kind": "particle",
            "weight": scalar_to_json(weight, mode),
        }));
    }
    json!(terms)
}

fn representatives_json(states: &[OccupationState], cap: usize) -> Value {
    let shown: Vec<Value> = states
        .iter()
        .take(cap)
        .map(|occ| json!(occ.occupied_labels()))
        .collect();
    json!(shown)
}

/// Level diagram report with per-level classification.
pub fn diagram_report(diagram: &LevelDiagram, mode: NumericMode) -> Value {
    let levels: Vec<Value> = diagram
        .levels
        .iter()
        .map(|level| {
            json!({
                "value": scalar_to_json(&level.value, mode),
                "degeneracy": level.degeneracy,
                "classification": level.class.as_str(),
                "representatives": representatives_json(&level.states, 8),
                "completely_correlated": level.completely_correlated,
                "composition": level
                    .composition
                    .iter()
                    .map(|v| scalar_to_json(v, mode))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "n": diagram.n_orbitals,
        "N": diagram.n_particles,
        "seed": diagram.seed,
        "levels": levels,
        "notes": diagram.notes,
        "checks": {
            "weights_present": diagram.weights_present,
            "bookkeeping_ok": diagram.bookkeeping_ok,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_roundtrip() {
        let text = r#"{ "n": 4, "N": 3, "eigenvalues": ["-7/5", "1/2", 1, 5], "numeric": "rational" }"#;
        let input = parse_spectrum(text, None).unwrap();
        assert_eq!(input.n_particles, Some(3));
        assert_eq!(input.spectrum.n(), 4);
        assert_eq!(input.spectrum.negatives(), 1);
        assert_eq!(
            input.spectrum.value_by_label(0),
            &Scalar::from_ratio(-7, 5)
        );
    }

    #[test]
    fn spectrum_rejects_bad_n() {
        let text = r#"{ "n": 3, "eigenvalues": [1, 2] }"#;
        assert!(matches!(
            parse_spectrum(text, None),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn rational_mode_rejects_bare_floats() {
        let text = r#"{ "eigenvalues": [1.5, 2] }"#;
        let err = parse_spectrum(text, None).unwrap_err();
        assert!(matches!(err, Error::InvalidScalar { .. }));

        let text = r#"{ "eigenvalues": [1.5, 2], "numeric": "float", "tolerance": 1e-9 }"#;
        let input = parse_spectrum(text, None).unwrap();
        assert_eq!(input.spectrum.n(), 2);
    }

    #[test]
    fn float_mode_requires_tolerance() {
        let text = r#"{ "eigenvalues": [1, 2], "numeric": "float" }"#;
        assert!(matches!(
            parse_spectrum(text, None),
            Err(Error::BadTolerance)
        ));
    }

    #[test]
    fn state_parsing_is_one_based() {
        let text = r#"{
            "n": 5, "N": 3,
            "terms": [
                { "occupied": [1, 2, 3], "re": "3/5" },
                { "occupied": [1, 4, 5], "re": "4/5", "im": 0 }
            ]
        }"#;
        let state = parse_state(text, None).unwrap();
        assert_eq!(state.n_orbitals(), 5);
        assert!(state.terms()[0].0.contains(0));
        assert!(!state.terms()[0].0.contains(3));

        let text = r#"{ "n": 3, "N": 1, "terms": [ { "occupied": [0], "re": 1 } ] }"#;
        assert!(parse_state(text, None).is_err());
    }

    #[test]
    fn scalar_json_forms() {
        assert_eq!(
            scalar_to_json(&Scalar::from_int(4), NumericMode::Rational),
            json!(4)
        );
        assert_eq!(
            scalar_to_json(&Scalar::from_ratio(3, 2), NumericMode::Rational),
            json!("3/2")
        );
        assert_eq!(
            scalar_to_json(&Scalar::from_ratio(1, 2), NumericMode::Float),
            json!(0.5)
        );
    }
}
