//! Exact multigraded homology of the Koszul complex `K(m^c)` of the `c`-th
//! power of the maximal ideal of `K[X_1..X_n]`, with graded Betti tables of
//! Veronese modules, Green-Lazarsfeld indices and checks of the cycle and
//! boundary structure of `K(m^c)`.

pub mod cli;
pub mod combinatorics;
pub mod complex;
pub mod cycles;
pub mod error;
pub mod exactla;
pub mod homology;

/// Part of every cache key; bump when signs or orderings change.
pub const ENGINE_VERSION: &str = "kosz-1";

pub use combinatorics::{ExponentVec, Orbit, RingParams};
pub use complex::{DifferentialBlock, KoszulBasisElement, KoszulComplex};
pub use error::{Error, Result};
pub use exactla::{FieldSpec, RationalPolicy, SparseIntMatrix};

/// Integer chains of the Koszul complex.
pub type Chain = cycles::CycleElement<i64>;
/// Integer chains with arbitrary-precision coefficients.
pub type BigChain = cycles::CycleElement<num_bigint::BigInt>;
/// Block matrices as produced by the differential.
pub type IntMatrix = exactla::SparseIntMatrix<i64>;
/// Exact rationals for dense field computations.
pub type Rationals = exactla::RationalField<num_bigint::BigInt>;
/// Prime field context for dense field computations.
pub type Fp = exactla::PrimeField;
