//! Shortest even (directed, simple) cycle via algebraic fingerprinting.
//!
//! The pipeline enumerates cycle covers of a digraph by the parity of their
//! cycle count, as a permanent-minus-determinant difference over a designed
//! ring `E_{4^d}` of characteristic 4, then reads off the answer from a
//! Lagrange-interpolated polynomial. Brute-force oracles for every stage live
//! in [`oracle`] and back the test suites.
//!
//! Quick tour:
//!
//! * [`fields`] — arithmetic in `F_{2^d} = Z_2[x]/<g2>`, irreducible generation
//! * [`ring4`] — arithmetic in `E_{4^d} = Z_4[x]/<g4>` plus lift/project
//! * [`linalg`] — determinants and interpolation over `F_{2^d}`
//! * [`perdet`] — permanent and determinant over `E_{4^d}` by odd-elimination
//! * [`enumerators`] — the parity cycle cover enumerator `pcc`
//! * [`graph`] — digraphs and the top-level algorithms
//! * [`cli`] — file formats and the command-line surface

pub mod cli;
pub mod enumerators;
#[doc(hidden)]
pub mod expr;
pub mod fields;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod perdet;
pub mod ring4;

pub use enumerators::pcc_f;
pub use fields::{FieldCtx, FieldElem, GF2Poly};
pub use graph::{has_even_cycle, shortest_even_cycle, Digraph};
pub use linalg::{MatrixF, PolyF, PolyMatrixF};
pub use perdet::{det_e, per_det_e, per_e, per_similar, MatrixE};
pub use ring4::{RingCtx, RingElem};

/// Library-level failures. Parse errors have their own type in [`cli`].
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    /// Multiplicative inverse of zero requested in `F_{2^d}`.
    #[error("division by zero in F_2^{0}")]
    DivisionByZero(usize),
    /// `elim_coeff` called with an even multiplier.
    #[error("odd-elimination requires an odd multiplier")]
    EvenMultiplier,
    /// `unlift2` hit an odd coefficient; the per-minus-det difference was not
    /// even, which signals a broken identity upstream.
    #[error("unlift2: coefficient {coeff} of x^{index} is odd")]
    OddCoefficient { index: usize, coeff: u8 },
    /// A polynomial-matrix determinant needs more evaluation points than the
    /// field has elements.
    #[error("F_2^{degree} has fewer than {needed} evaluation points")]
    FieldTooSmall { degree: usize, needed: usize },
    /// Lagrange interpolation received a repeated abscissa.
    #[error("duplicate interpolation abscissa")]
    DuplicateAbscissa,
    /// A brute-force oracle was asked to exceed its size guard.
    #[error("oracle size guard: n = {n} exceeds limit {limit}")]
    OracleTooLarge { n: usize, limit: usize },
    /// Graph construction rejected its input.
    #[error("invalid digraph: {0}")]
    BadGraph(String),
}

pub type Result<T> = std::result::Result<T, Error>;
