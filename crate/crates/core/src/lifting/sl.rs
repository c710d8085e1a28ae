//! Strong approximation for the special linear group: an exact SL_k(Z)
//! matrix matching a prescribed SL_k(Z/n) residue.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{mod_inverse, Ideal};
use crate::error::{Error, Result};
use crate::lifting::{CertInput, Check, LiftCertificate};
use crate::matrix::{ElementaryOp, IntMatrix};
use crate::unital::usc_shift_mod;

/// Bookkeeping for one side of the reduction: the accumulated product of
/// the elementary matrices applied on that side.
struct OpLog {
    acc: IntMatrix,
}

impl OpLog {
    fn new(k: usize) -> Self {
        OpLog {
            acc: IntMatrix::identity(k),
        }
    }

    fn apply_right(&mut self, w: &mut IntMatrix, op: &ElementaryOp, n: &Ideal) -> Result<()> {
        let m = op.materialize(w.cols())?;
        *w = w.mul(&m)?.reduce_mod(n);
        self.acc = self.acc.mul(&m)?;
        Ok(())
    }

    fn apply_left(&mut self, w: &mut IntMatrix, op: &ElementaryOp, n: &Ideal) -> Result<()> {
        let m = op.materialize(w.rows())?;
        *w = m.mul(w)?.reduce_mod(n);
        self.acc = m.mul(&self.acc)?;
        Ok(())
    }
}

/// Lifts a matrix that is special linear modulo n to one that is special
/// linear over Z, congruent to the input entrywise.
///
/// The residue is decomposed into transvections column by column: a unit
/// pivot is manufactured from the row tail, moved to exactly 1 with two
/// more transvections, and the pivot row and column are cleared. The last
/// pivot is then forced to 1 by the determinant. Undoing the recorded
/// operations over Z gives the lift.
pub fn sl_lift(m_bar: &IntMatrix, n: &Ideal) -> Result<LiftCertificate> {
    let det = m_bar.det()?;
    if !n.contains(&(&det - BigInt::one())) {
        return Err(Error::NotSlModN(format!(
            "determinant is {det}, not 1, modulo {}",
            n.modulus()
        )));
    }
    let k = m_bar.rows();
    let input = CertInput::MatrixModN {
        matrix: m_bar.clone(),
        modulus: n.clone(),
    };
    if n.is_unit() {
        return certify(input, IntMatrix::identity(k), m_bar, n);
    }
    if n.is_zero() {
        // the exact ideal admits only the input itself, which det == 1
        // already guarantees is special linear
        return certify(input, m_bar.clone(), m_bar, n);
    }

    let mut w = m_bar.reduce_mod(n);
    let mut left = OpLog::new(k);
    let mut right = OpLog::new(k);

    for c in 0..k {
        if c + 1 == k {
            // every earlier pivot is exactly 1 mod n, so the last one
            // carries the whole determinant
            if !n.contains(&(w.get(c, c) - BigInt::one())) {
                return Err(Error::Internal(
                    "final pivot is not 1 despite unit determinant".into(),
                ));
            }
            break;
        }

        // unit pivot from the row tail
        let tail: Vec<BigInt> = (c..k).map(|j| w.get(c, j).clone()).collect();
        let witness = usc_shift_mod(&tail, n)?;
        for (idx, coeff) in witness.coefficients.iter().enumerate() {
            let coeff = n.reduce(coeff);
            if !coeff.is_zero() {
                let op = ElementaryOp::AddMultipleOfColumn {
                    dst: c,
                    src: c + 1 + idx,
                    coeff,
                };
                right.apply_right(&mut w, &op, n)?;
            }
        }

        // pivot to exactly 1: put 1 next door, then pull it across
        let u = w.get(c, c).clone();
        if !n.contains(&(&u - BigInt::one())) {
            let uinv = mod_inverse(&u, n)?;
            let t = n.reduce(&(&uinv * (BigInt::one() - w.get(c, c + 1))));
            if !t.is_zero() {
                let op = ElementaryOp::AddMultipleOfColumn {
                    dst: c + 1,
                    src: c,
                    coeff: t,
                };
                right.apply_right(&mut w, &op, n)?;
            }
            let s = n.reduce(&(BigInt::one() - &u));
            let op = ElementaryOp::AddMultipleOfColumn {
                dst: c,
                src: c + 1,
                coeff: s,
            };
            right.apply_right(&mut w, &op, n)?;
        }
        debug_assert!(n.contains(&(w.get(c, c) - BigInt::one())));

        // clear the pivot row rightwards and the pivot column downwards
        for j in c + 1..k {
            let coeff = n.reduce(&(-w.get(c, j)));
            if !coeff.is_zero() {
                let op = ElementaryOp::AddMultipleOfColumn {
                    dst: j,
                    src: c,
                    coeff,
                };
                right.apply_right(&mut w, &op, n)?;
            }
        }
        for i in c + 1..k {
            let coeff = n.reduce(&(-w.get(i, c)));
            if !coeff.is_zero() {
                let op = ElementaryOp::AddMultipleOfRow {
                    dst: i,
                    src: c,
                    coeff,
                };
                left.apply_left(&mut w, &op, n)?;
            }
        }
    }
    if !w.congruent_mod(&IntMatrix::identity(k), n) {
        return Err(Error::Internal("reduction did not reach identity".into()));
    }

    // left * m_bar * right = I mod n, so the lift undoes both sides
    let lift = left
        .acc
        .inverse_unimodular()?
        .mul(&right.acc.inverse_unimodular()?)?;
    certify(input, lift, m_bar, n)
}

fn certify(
    input: CertInput,
    output: IntMatrix,
    m_bar: &IntMatrix,
    n: &Ideal,
) -> Result<LiftCertificate> {
    let checks = vec![
        Check::new("det_is_one", output.det()? == BigInt::one()),
        Check::new("congruent_to_input", output.congruent_mod(m_bar, n)),
    ];
    LiftCertificate::build(input, output, vec![], checks)
}
