//! Independent re-verification of emitted certificates.
//!
//! The checks stored in a certificate are claims. This module recomputes
//! every named predicate from the input and the output matrix alone, so a
//! verifier never has to trust the stored booleans. Recorded lambdas are
//! treated as part of the claim: when one is present it must itself witness
//! the class membership; when absent (zero) the scan runs from scratch.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_unit_mod, Ideal};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SymplecticForm};
use crate::projective::{equivalent_points, ProjPoint};

use super::{CertInput, Check, CongruenceTarget};

/// Recompute the named checks for `output` against `input`. Unknown names
/// are rejected rather than skipped: a certificate claiming something this
/// library cannot recompute is unverifiable, not acceptable.
pub fn recheck(
    input: &CertInput,
    output: &IntMatrix,
    lambdas: &[BigInt],
    names: &[String],
) -> Result<Vec<Check>> {
    names
        .iter()
        .map(|name| Ok(Check::new(name.clone(), recheck_one(input, output, lambdas, name)?)))
        .collect()
}

fn recheck_one(
    input: &CertInput,
    output: &IntMatrix,
    lambdas: &[BigInt],
    name: &str,
) -> Result<bool> {
    if name == "det_is_one" {
        if !output.is_square() {
            return Ok(false);
        }
        return Ok(output.det()?.is_one());
    }
    if name == "symplectic_exact" {
        if !output.is_square() || output.cols() % 2 != 0 || output.cols() == 0 {
            return Ok(false);
        }
        let form = SymplecticForm::new(output.cols() / 2)?;
        return output.is_symplectic(&form, &Ideal::exact());
    }
    if name == "congruent_to_input" {
        let CertInput::MatrixModN { matrix, modulus } = input else {
            return Err(Error::PreconditionViolated(
                "check 'congruent_to_input' needs a matrix-mod-n input".into(),
            ));
        };
        return Ok(output.congruent_mod(matrix, modulus));
    }
    if let Some(i) = parse_indexed(name, "_congruent") {
        let CertInput::Target(target) = input else {
            return Err(Error::PreconditionViolated(format!(
                "check '{name}' needs a congruence-target input"
            )));
        };
        return row_congruent(target, output, i, name);
    }
    if let Some(i) = parse_indexed(name, "_in_class") {
        let CertInput::Points(points) = input else {
            return Err(Error::PreconditionViolated(format!(
                "check '{name}' needs a points input"
            )));
        };
        return row_in_class(points, output, lambdas, i, name);
    }
    Err(Error::PreconditionViolated(format!(
        "unknown check name '{name}'"
    )))
}

fn parse_indexed(name: &str, suffix: &str) -> Option<usize> {
    name.strip_prefix("row_")?
        .strip_suffix(suffix)?
        .parse()
        .ok()
}

fn row_congruent(
    target: &CongruenceTarget,
    output: &IntMatrix,
    i: usize,
    name: &str,
) -> Result<bool> {
    if i >= target.len() || i >= output.rows() || output.cols() != target.width() {
        return Err(Error::ShapeMismatch(format!(
            "check '{name}' does not fit a {} x {} output for a {}-row target of width {}",
            output.rows(),
            output.cols(),
            target.len(),
            target.width()
        )));
    }
    let (row, ideal) = &target.rows()[i];
    Ok(output
        .row_slice(i)
        .iter()
        .zip(row)
        .all(|(a, b)| ideal.contains(&(a - b))))
}

fn row_in_class(
    points: &[ProjPoint],
    output: &IntMatrix,
    lambdas: &[BigInt],
    i: usize,
    name: &str,
) -> Result<bool> {
    if i >= points.len() || i >= output.rows() || output.cols() != points[i].len() {
        return Err(Error::ShapeMismatch(format!(
            "check '{name}' does not fit a {} x {} output for {} points of length {}",
            output.rows(),
            output.cols(),
            points.len(),
            points[i].len()
        )));
    }
    let point = &points[i];
    let row = output.row_slice(i);
    match lambdas.get(i) {
        Some(lambda) if !lambda.is_zero() => Ok(lambda_witnesses(point, row, lambda)),
        _ => {
            // No recorded witness: search for one. Rows of unimodular
            // matrices always have unit content, so a row that cannot even
            // form a point is not the output of a lift and fails the claim.
            let Ok(row_point) = ProjPoint::new(
                row.to_vec(),
                point.ideal().clone(),
                point.weights().clone(),
            ) else {
                return Ok(false);
            };
            Ok(equivalent_points(point, &row_point)?.0)
        }
    }
}

/// Does `row = lambda^w * point` hold entrywise mod the point's ideal, with
/// lambda a unit?
fn lambda_witnesses(point: &ProjPoint, row: &[BigInt], lambda: &BigInt) -> bool {
    let ideal = point.ideal();
    if !is_unit_mod(lambda, ideal) {
        return false;
    }
    point
        .coords()
        .iter()
        .zip(point.weights().exponents())
        .zip(row)
        .all(|((a, w), b)| {
            let scaled = lambda.modpow(&BigInt::from(*w), ideal.modulus()) * a;
            ideal.contains(&(scaled - b))
        })
}
