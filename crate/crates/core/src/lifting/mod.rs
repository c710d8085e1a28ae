//! Congruence lifts into SL and Sp over the integers: matrices that are
//! special linear or symplectic exactly while matching prescribed residues
//! modulo one ideal (strong approximation) or one ideal per row (multi-ideal
//! congruence), plus the induced surjections onto products of weighted
//! projective spaces and the quadratic obstruction that rules the same out
//! for indefinite orthogonal groups.
//!
//! Every lift returns a [`LiftCertificate`] carrying the input, the exact
//! integer output, any per-row scaling witnesses, and the list of predicate
//! checks that were recomputed on the result. A certificate cannot be built
//! with a failing check.

use num_bigint::BigInt;

use crate::arith::Ideal;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::projective::{ProjPoint, Weights};
use crate::unital::is_unital;

mod multi;
mod sl;
mod sp;
mod surject;
#[cfg(test)]
pub(crate) mod testutil;
mod verify;

pub use multi::{sl_multi_congruence_lift, sp_multi_congruence_lift};
pub use sl::sl_lift;
pub use sp::{sp_extend_column, sp_extend_row, sp_lift};
pub use surject::{orthogonal_obstruction, sl_surject_projective, sp_surject_projective, RowBand};
pub use verify::recheck;

/// What a lift was asked to match: a matrix modulo one ideal, a row-per-ideal
/// congruence target, or a list of projective points (one class per row).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertInput {
    MatrixModN { matrix: IntMatrix, modulus: Ideal },
    Target(CongruenceTarget),
    Points(Vec<ProjPoint>),
}

/// One recomputed predicate and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
        }
    }
}

/// The verification record emitted by every lifting operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    input: CertInput,
    output: IntMatrix,
    lambdas: Vec<BigInt>,
    checks: Vec<Check>,
}

impl LiftCertificate {
    /// Assembles a certificate, refusing if any check failed: the lift
    /// itself is buggy in that case and must not hand out a result.
    pub(crate) fn build(
        input: CertInput,
        output: IntMatrix,
        lambdas: Vec<BigInt>,
        checks: Vec<Check>,
    ) -> Result<Self> {
        if let Some(failed) = checks.iter().find(|c| !c.pass) {
            return Err(Error::Internal(format!(
                "lift produced an output failing its own check '{}'",
                failed.name
            )));
        }
        Ok(LiftCertificate {
            input,
            output,
            lambdas,
            checks,
        })
    }

    pub fn input(&self) -> &CertInput {
        &self.input
    }

    pub fn output(&self) -> &IntMatrix {
        &self.output
    }

    /// Per-row scaling witnesses; empty when the operation has none.
    pub fn lambdas(&self) -> &[BigInt] {
        &self.lambdas
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }
}

/// Rowwise congruence prescription: row i of the lift must match `rows[i].0`
/// modulo `rows[i].1`. Weights ride along when the rows are meant as
/// projective representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceTarget {
    rows: Vec<(Vec<BigInt>, Ideal)>,
    weights: Option<Vec<Weights>>,
}

impl CongruenceTarget {
    pub fn new(rows: Vec<(Vec<BigInt>, Ideal)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::BadShape("no rows given".into()));
        }
        let width = rows[0].0.len();
        if rows.iter().any(|(r, _)| r.len() != width) {
            return Err(Error::BadShape("rows must have equal length".into()));
        }
        let ideals: Vec<Ideal> = rows.iter().map(|(_, i)| i.clone()).collect();
        if ideals.iter().any(|i| i.is_zero()) {
            return Err(Error::OutOfRange("zero ideal in congruence target".into()));
        }
        if !Ideal::pairwise_coprime(&ideals) {
            return Err(Error::NonCoprimeModuli("congruence target ideals".into()));
        }
        for (idx, (row, _)) in rows.iter().enumerate() {
            if !is_unital(row) {
                return Err(Error::RowNotUnital(format!("row {idx} has gcd != 1")));
            }
        }
        Ok(CongruenceTarget {
            rows,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<Weights>) -> Result<Self> {
        if weights.len() != self.rows.len() {
            return Err(Error::BadShape(
                "one weight vector per row is required".into(),
            ));
        }
        if weights
            .iter()
            .zip(&self.rows)
            .any(|(w, (r, _))| w.len() != r.len())
        {
            return Err(Error::BadShape(
                "weight vectors must match row length".into(),
            ));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn rows(&self) -> &[(Vec<BigInt>, Ideal)] {
        &self.rows
    }

    pub fn weights(&self) -> Option<&[Weights]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.rows[0].0.len()
    }

    pub fn ideals(&self) -> Vec<Ideal> {
        self.rows.iter().map(|(_, i)| i.clone()).collect()
    }
}
