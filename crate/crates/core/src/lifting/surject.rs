//! Lifts onto weighted projective classes: a determinant-one or symplectic
//! integer matrix whose i-th row lands in a prescribed class modulo the
//! i-th ideal, with the scaling witnesses recorded. Also the quadratic
//! residue obstruction showing the split orthogonal analogue must fail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_prime, Ideal};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SymplecticForm};
use crate::projective::{equivalent_points, ProjPoint};

use super::{
    sl_multi_congruence_lift, sp_multi_congruence_lift, CertInput, Check, CongruenceTarget,
    LiftCertificate,
};

/// Which rows of a split orthogonal matrix a class is measured against:
/// the first p rows carry form value +1, the last q rows carry -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowBand {
    FirstP,
    LastQ,
}

fn congruence_target(points: &[ProjPoint]) -> Result<CongruenceTarget> {
    CongruenceTarget::new(
        points
            .iter()
            .map(|p| (p.coords().to_vec(), p.ideal().clone()))
            .collect(),
    )?
    .with_weights(points.iter().map(|p| p.weights().clone()).collect())
}

/// Re-reads each output row as a point and finds its scaling witness. A row
/// that matches its representative exactly is found at lambda = 1.
fn class_checks(points: &[ProjPoint], output: &IntMatrix) -> Result<(Vec<Check>, Vec<BigInt>)> {
    let mut checks = Vec::new();
    let mut lambdas = Vec::new();
    for (i, point) in points.iter().enumerate() {
        let row = ProjPoint::new(
            output.row_slice(i).to_vec(),
            point.ideal().clone(),
            point.weights().clone(),
        )?;
        let (ok, lambda) = equivalent_points(point, &row)?;
        checks.push(Check::new(format!("row_{i}_in_class"), ok));
        lambdas.push(lambda.unwrap_or_else(BigInt::zero));
    }
    Ok((checks, lambdas))
}

/// Determinant-one lift hitting one weighted projective class per row. The
/// certificate records a unit witness lambda_i for every row, confirmed by
/// the class predicate rather than by construction.
pub fn sl_surject_projective(points: &[ProjPoint]) -> Result<LiftCertificate> {
    let target = congruence_target(points)?;
    let inner = sl_multi_congruence_lift(&target)?;
    let output = inner.output().clone();
    let mut checks = vec![Check::new("det_is_one", output.det()?.is_one())];
    let (class, lambdas) = class_checks(points, &output)?;
    checks.extend(class);
    LiftCertificate::build(CertInput::Points(points.to_vec()), output, lambdas, checks)
}

/// Symplectic lift hitting one weighted projective class per row.
pub fn sp_surject_projective(points: &[ProjPoint]) -> Result<LiftCertificate> {
    let target = congruence_target(points)?;
    let inner = sp_multi_congruence_lift(&target)?;
    let output = inner.output().clone();
    let form = SymplecticForm::new(points.len() / 2)?;
    let mut checks = vec![Check::new(
        "symplectic_exact",
        output.is_symplectic(&form, &Ideal::exact())?,
    )];
    let (class, lambdas) = class_checks(points, &output)?;
    checks.extend(class);
    LiftCertificate::build(CertInput::Points(points.to_vec()), output, lambdas, checks)
}

/// Whether a projective class modulo an odd prime is missed by every row in
/// the stated band of the split orthogonal group over the integers. Rows in
/// the first p positions have quadratic form value +1, rows in the last q
/// have -1, and scaling a row by a unit scales the value by a square; so a
/// class is reachable only when its form value is a unit square times the
/// band sign. Zero form value is always obstructed. Stated for weights 1.
pub fn orthogonal_obstruction(
    point: &ProjPoint,
    p: usize,
    q: usize,
    band: RowBand,
) -> Result<bool> {
    let n = point.ideal().modulus();
    if !is_prime(n) || !n.is_odd() {
        return Err(Error::NotPrimeModulus(format!(
            "the obstruction needs an odd prime modulus, got {n}"
        )));
    }
    if point.len() != p + q {
        return Err(Error::ShapeMismatch(format!(
            "{} coordinates against signature ({p}, {q})",
            point.len()
        )));
    }
    if point.weights().exponents().iter().any(|&m| m != 1) {
        return Err(Error::PreconditionViolated(
            "the obstruction is stated for weights all 1".into(),
        ));
    }
    let mut norm = BigInt::zero();
    for (i, a) in point.coords().iter().enumerate() {
        if i < p {
            norm += a * a;
        } else {
            norm -= a * a;
        }
    }
    let signed = match band {
        RowBand::FirstP => norm,
        RowBand::LastQ => -norm,
    };
    let s = point.ideal().reduce(&signed);
    if s.is_zero() {
        return Ok(true);
    }
    // Euler's criterion: a unit is a square iff raising it to (n-1)/2
    // gives 1.
    let exp = (n - BigInt::one()) / BigInt::from(2);
    Ok(s.modpow(&exp, n) != BigInt::one())
}
