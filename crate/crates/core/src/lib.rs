//! Exact-arithmetic toolkit for value sets of polynomials over GF(p^n) and
//! Frobenius-nonclassical curves with separated variables.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf`]: field construction and element arithmetic (log/Zech tables);
//! - [`upoly`]: sparse univariate polynomials, value sets, squarefree
//!   decomposition;
//! - [`linalg`]: exact linear solving over a field;
//! - [`mvsp`]: minimal value set classification for binomials, Mills-style
//!   certificates and low-value-count canonical forms;
//! - [`curves`]: bivariate Frobenius-nonclassicality tests, the superelliptic
//!   specialization and its structural corollaries;
//! - [`orbit`]: rescaling-orbit enumeration of exponent/coefficient data;
//! - [`theorem_b`]: exhaustive classification harnesses for separated
//!   quadrinomial curves.

pub mod curves;
pub mod gf;
pub mod linalg;
pub mod mvsp;
pub mod orbit;
pub mod theorem_b;
pub mod upoly;

pub use curves::{
    corollary_checks, fnc_bivariate_test, quadrinomial_reduce, schmidt_irreducibility,
    separated_fnc_via_mvsp, superelliptic_fnc_test, t_lift_solve, trinomial_power_check,
    AffineType, BiPoly, CurveError, QuadrinomialInput, QuadrinomialReduction, ScreenReport,
    SeparatedVerdict, SuperellipticCurve, TLift,
};
pub use gf::{Field, FieldElement, GfError, SubfieldEmbedding, MAX_Q};
pub use mvsp::{
    carlitz_decompose, classify_binomial, enumerate_mvsp_binomials, mills_certificate,
    mills_structural_check, predicted_value_set, verify_mills_certificate, verify_theorem_a,
    BinomialClassification, BinomialFamily, CarlitzForm, MillsCertificate, MvspEntry, MvspError,
    StructuralCheckReport, TheoremAReport,
};
pub use orbit::DiagonalOrbits;
pub use theorem_b::{
    canonical_form, diagonal_equivalent, family_generate, family_membership,
    type_universe_exponents, verify_theorem_b, verify_type_i, CanonicalCurve, CurveRecord,
    FamilyCatalog, FamilyInstance, Irreducibility, SingletonKey, TheoremBError, TheoremBFamily,
    TheoremBFamilyTag, TheoremBReport, TypeIReport, MAX_HARNESS_Q, MAX_TYPE_I_Q,
};
pub use upoly::{PolyError, SquarefreeDecomposition, UniPoly, ValueSetReport};
