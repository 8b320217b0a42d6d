//! Decide whether a plane projective curve with a marked point has constant
//! moduli along the pencil of lines through that point, compute the product
//! normal form when it does, classify the low-degree cases geometrically, and
//! decide isotriviality of hyperelliptic families given by their branch data.
//!
//! Every symbolic verdict can be cross-checked by an independent numeric
//! sampling oracle ([`moduli::constant_moduli_oracle`]) that never looks at
//! the symbolic machinery.
//!
//! The main pipeline is:
//!
//! 1. [`pencil::setup`] moves the marked point to `[1:0:0]` and strips
//!    line-through-the-point components,
//! 2. [`weierstrass::reduce`] brings the curve to the normalized shape
//!    `Z^m*X^d + sum_h F_{m+h}(Y,Z)*X^(d-h)`,
//! 3. [`weierstrass::decide`] runs the exact pairwise proportionality test
//!    and extracts the normal-form data on success,
//! 4. [`classify`] names the geometric case for degrees 3 and 4,
//! 5. [`fibration`] connects the curve picture with one-parameter families
//!    `z^2 = f(x, y)`.

pub mod binary;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod fibration;
pub mod moduli;
pub mod numkernel;
pub mod parse;
pub mod pencil;
pub mod rational;
pub mod ternary;
pub mod univariate;
pub mod weierstrass;

pub use binary::{BinaryForm, SquarefreePart};
pub use classify::{CaseId, ClassificationResult, SingularLocation, SingularPoint, SingularityType};
pub use corpus::{corpus, default_corpus, CorpusEntry};
pub use error::Error;
pub use fibration::{JConstancyReport, TrivialityVerdict, WeierstrassFamily};
pub use moduli::{AffineInvariants, AffineMatch, OracleOptions, OracleVerdict};
pub use numkernel::{ComplexApprox, RootSet};
pub use num::complex::Complex64;
pub use pencil::{
    concurrency_on_line, tangent_concurrency, tangents_on_line, ConcurrencySample, LineParam,
    PencilLine, PencilSetup, SpecialLine, TLocus, TLocusShape, TangentReport,
};
pub use rational::Rational;
pub use ternary::TernaryForm;
pub use univariate::UnivariatePoly;
pub use weierstrass::{
    decide, has_x_scaling_symmetry, reduce, ConstantModuli, ModuliVerdict, NormalForm,
    WeierstrassData,
};

/// Default numeric tolerance used by sampling-based operations.
pub const DEFAULT_TOL: f64 = 1e-10;
