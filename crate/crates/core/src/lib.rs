//! Exact integer arithmetic for congruence lifting and weighted projective
//! class computations over Z/nZ.
//!
//! Everything here is exact: entries are arbitrary-precision integers, all
//! reductions are explicit, and the congruence lifts return matrices over Z
//! whose defining properties (determinant one, symplectic form preservation,
//! rowwise congruences) hold on the nose, not just modulo the target.
//!
//! Layers, bottom up:
//!
//! * [`arith`]: ideals of Z, extended gcd, CRT, factorization, primality,
//!   modular inverses.
//! * [`unital`]: shift and perturbation constructions on vectors with unit
//!   content, and determinant-one diagonal corrections.
//! * [`matrix`]: dense integer matrices, exact determinants and inverses of
//!   unimodular matrices, the standard symplectic form, block embeddings.
//! * [`projective`]: weighted projective classes over Z/nZ, orbit
//!   enumeration, canonical forms, CRT lifting of class tuples.
//! * [`lifting`]: congruence lifts into SL_k(Z) and Sp_2k(Z), row and
//!   column extensions, multi-modulus lifts, surjection helpers, and
//!   certificates for all of them.
//! * [`json`]: serialization shapes shared with the command line tool.

pub mod arith;
pub mod error;
pub mod json;
pub mod lifting;
pub mod matrix;
pub mod projective;
pub mod unital;

pub use arith::{egcd, factorize, is_prime, mod_inverse, Factorization, Ideal};
pub use error::{Error, Result};
pub use matrix::{IntMatrix, SymplecticForm};
pub use num_bigint::BigInt;
pub use unital::{ShiftWitness, UnitalVector};
