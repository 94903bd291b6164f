//! Dual-cone analysis of fermionic one-body operators.
//!
//! A one-particle self-adjoint operator whose antisymmetric N-particle
//! expansion is positive semidefinite belongs to the dual cone of the
//! N-representable one-density operators. This crate tests that membership,
//! decomposes members canonically into the cone's extreme elements
//! (rank-one projectors and their hole counterparts), realizes the
//! spectral, semi-spectral, and pseudo-spectral operator decompositions as
//! families of diagonal effects, computes the occupation measures those
//! families induce on pure states, and builds model Hamiltonians whose
//! spectra split into ground, collective, and normal levels. Everything is
//! cross-validated against brute-force enumeration over the determinant
//! basis, exactly in rational arithmetic.

pub mod analysis;
pub mod cone;
pub mod error;
pub mod fock;
pub mod models;
pub mod povm;
pub mod random;
pub mod scalar;
pub mod schema;
pub mod spectrum;
pub mod state;

pub use analysis::{analyze, AnalysisReport};
pub use cone::{
    canonical_decompose, find_r, is_extreme, kernel_compare, kernel_dim_bound_check, reconstruct,
    CanonicalDecomposition, ExtremeElement, KernelOrder,
};
pub use error::{Error, Result};
pub use fock::{
    binomial, build_one_body_diagonal, full_spectrum, many_body_eigenvalue, verify_partition,
    DiagonalOperator, FockBasis, ManyBodySpectrum, OccupationState, WedgeProjector,
    DEFAULT_STATE_BUDGET,
};
pub use models::{
    analyze_levels, build_model, kernel_dimension, render_diagram, type_one, type_two,
    LevelClass, LevelDiagram, Model74Params, ModelAnalysis, TypeOneParams, TypeTwoParams,
};
pub use povm::{
    pseudo_spectral, pseudo_spectral_pov, semi_spectral, spectral, AtomTag, Normalization,
    PovAtom, PovMeasure, PseudoSpectralDecomposition, Variant,
};
pub use scalar::{ComplexScalar, NumericMode, NumericPolicy, Scalar};
pub use spectrum::{
    is_dual_cone_member, is_n_representable, min_pairing, DensitySpectrum, MembershipVerdict,
    OneBodySpectrum,
};
pub use state::{
    classify_state, expectation, grassmann_factor_space, occupation_measures, FactorSpace,
    ManyBodyState, OrbitalRole,
};
