//! Symplectic completions: extending a row or column with a unit entry to
//! an exact Sp_2k(Z) matrix, and strong approximation for the symplectic
//! group itself.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_unit_mod, mod_inverse, Ideal};
use crate::error::{Error, Result};
use crate::lifting::{sl_lift, CertInput, Check, LiftCertificate};
use crate::matrix::{
    embed_sl_pair_block, embed_sp_permutation, embed_symmetric_shear, IntMatrix, SpPermFlavor,
    SymplecticForm,
};
use crate::unital::usc_shift_mod;

fn is_unit_entry(x: &BigInt) -> bool {
    x.is_one() || (-x).is_one()
}

fn transposition(k: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.swap(a, b);
    p
}

fn row_times(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    (0..m.cols())
        .map(|j| v.iter().enumerate().map(|(i, x)| x * m.get(i, j)).sum())
        .collect()
}

/// Extends a length-2k row with s[0] = +-1 to an exact symplectic matrix
/// whose first row is s: a triangular pair block realizes the left half,
/// an upper shear supported on the leading slot supplies the right half.
fn leading_unit_row_extension(s: &[BigInt], k: usize) -> Result<IntMatrix> {
    let a1 = s[0].clone();
    debug_assert!(is_unit_entry(&a1));
    if k == 1 {
        return IntMatrix::from_rows(vec![
            vec![a1.clone(), s[1].clone()],
            vec![BigInt::zero(), a1],
        ]);
    }
    // upper triangular, determinant a1^2 = 1, first row = left half of s
    let mut a = IntMatrix::identity(k);
    *a.entry_mut(0, 0) = a1.clone();
    *a.entry_mut(1, 1) = a1.clone();
    for j in 1..k {
        *a.entry_mut(0, j) = s[j].clone();
    }
    // symmetric B with (first row of A) * B = right half of s
    let mut b = IntMatrix::zero(k, k);
    let mut corner = &a1 * &s[k];
    for m in 1..k {
        corner -= &s[m] * &s[k + m];
        let v = &a1 * &s[k + m];
        *b.entry_mut(0, m) = v.clone();
        *b.entry_mut(m, 0) = v;
    }
    *b.entry_mut(0, 0) = corner;
    embed_sl_pair_block(&a)?.mul(&embed_symmetric_shear(&b, true)?)
}

/// Extends a length-2k integer row containing an entry equal to +-1 to an
/// exact Sp_2k(Z) matrix whose `position`-th row (1-based) is exactly the
/// input.
///
/// The first unit entry (ascending) is routed to the leading slot by a
/// doubled permutation, the routed row is completed through that slot, and
/// a second permutation moves the finished row into place.
pub fn sp_extend_row(entries: &[BigInt], k: usize, position: usize) -> Result<IntMatrix> {
    let form = SymplecticForm::new(k)?;
    if entries.len() != 2 * k {
        return Err(Error::BadLength(format!(
            "row of length {} does not fit Sp_{}",
            entries.len(),
            2 * k
        )));
    }
    if position == 0 || position > 2 * k {
        return Err(Error::OutOfRange(format!(
            "position {position} outside 1..={}",
            2 * k
        )));
    }
    let idx = entries
        .iter()
        .position(is_unit_entry)
        .ok_or_else(|| Error::NoUnitEntry("row has no entry equal to 1 or -1".into()))?;

    let routing = if idx < k {
        embed_sp_permutation(&transposition(k, 0, idx), SpPermFlavor::Diag)?
    } else {
        embed_sp_permutation(&transposition(k, 0, idx - k), SpPermFlavor::OffDiag)?
    };
    let s = row_times(entries, &routing);
    let g0 = leading_unit_row_extension(&s, k)?.mul(&routing.symplectic_inverse(&form)?)?;
    let g = if position - 1 < k {
        embed_sp_permutation(&transposition(k, 0, position - 1), SpPermFlavor::Diag)?.mul(&g0)?
    } else {
        // row k+m of -[[0,P],[-P,0]] is (P row m | 0) = e_1 for this P
        embed_sp_permutation(&transposition(k, 0, position - 1 - k), SpPermFlavor::OffDiag)?
            .neg()
            .mul(&g0)?
    };
    if g.row_slice(position - 1) != entries || !g.is_symplectic(&form, &Ideal::exact())? {
        return Err(Error::Internal("row extension failed its own check".into()));
    }
    Ok(g)
}

/// Column counterpart of [`sp_extend_row`]: the result has the input as its
/// `position`-th column (1-based). Sp_2k is closed under transposition, so
/// the row extension of the same entries transposes into the answer.
pub fn sp_extend_column(entries: &[BigInt], k: usize, position: usize) -> Result<IntMatrix> {
    Ok(sp_extend_row(entries, k, position)?.transpose())
}

/// Exact symplectic matrix whose column i (i < k) is the given length-2k
/// vector with v[i] exactly 1: a lower shear through slot i stacked on a
/// triangular pair block.
///
/// Right multiplication by the result adds v[j]-weighted columns into
/// column i while every side effect on other columns passes through column
/// k+i only; slots of v that are zero leave the matching columns alone.
pub(crate) fn unit_pivot_extension(v: &[BigInt], i: usize, k: usize) -> Result<IntMatrix> {
    if v.len() != 2 * k {
        return Err(Error::BadLength(format!(
            "vector of length {} does not fit Sp_{}",
            v.len(),
            2 * k
        )));
    }
    if i >= k {
        return Err(Error::OutOfRange(format!(
            "pivot slot {i} must lie in the first half 0..{k}"
        )));
    }
    if !v[i].is_one() {
        return Err(Error::PreconditionViolated(format!(
            "pivot entry must be exactly 1, got {}",
            v[i]
        )));
    }
    let mut e = IntMatrix::identity(k);
    for j in 0..k {
        if j != i {
            *e.entry_mut(j, i) = v[j].clone();
        }
    }
    let mut f1 = IntMatrix::zero(k, k);
    let mut diag = v[k + i].clone();
    for l in 0..k {
        if l == i {
            continue;
        }
        *f1.entry_mut(l, i) = v[k + l].clone();
        *f1.entry_mut(i, l) = v[k + l].clone();
        diag -= &v[l] * &v[k + l];
    }
    *f1.entry_mut(i, i) = diag;
    let t = embed_symmetric_shear(&f1, false)?.mul(&embed_sl_pair_block(&e)?)?;
    debug_assert_eq!(t.column(i), v);
    Ok(t)
}

/// Bookkeeping for one side of the reduction: the accumulated product of
/// the exact symplectic factors applied on that side.
struct SpLog {
    acc: IntMatrix,
}

impl SpLog {
    fn new(dim: usize) -> Self {
        SpLog {
            acc: IntMatrix::identity(dim),
        }
    }

    fn right(&mut self, w: &mut IntMatrix, t: &IntMatrix, n: &Ideal) -> Result<()> {
        *w = w.mul(t)?.reduce_mod(n);
        self.acc = self.acc.mul(t)?;
        Ok(())
    }

    fn left(&mut self, w: &mut IntMatrix, t: &IntMatrix, n: &Ideal) -> Result<()> {
        *w = t.mul(w)?.reduce_mod(n);
        self.acc = t.mul(&self.acc)?;
        Ok(())
    }
}

/// Symmetric k x k matrix supported on row and column i with the given
/// entries there, or None when they are all zero.
fn pinned_symmetric(k: usize, i: usize, coeffs: &[BigInt]) -> Option<IntMatrix> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return None;
    }
    let mut s = IntMatrix::zero(k, k);
    for (l, c) in coeffs.iter().enumerate() {
        *s.entry_mut(i, l) = c.clone();
        *s.entry_mut(l, i) = c.clone();
    }
    Some(s)
}

/// Lifts a matrix that is symplectic modulo n to an exact Sp_2k(Z) matrix
/// congruent to it entrywise.
///
/// Round i manufactures a unit pivot at (i, i) out of the columns not yet
/// cleared, moves it to exactly 1 with an embedded 2x2 lift, clears row and
/// column i of the A block with embedded transvections, then wipes row i of
/// B and column i of C with symmetric shears; the symplectic relations keep
/// every previously cleared entry at zero and force the D block. The
/// diagonal residue left after the last round is absorbed by one more
/// embedded 2x2 lift, and undoing the recorded factors over Z gives the
/// lift.
pub fn sp_lift(m_bar: &IntMatrix, n: &Ideal) -> Result<LiftCertificate> {
    if !m_bar.is_square() {
        return Err(Error::NotSquare(format!(
            "{}x{}",
            m_bar.rows(),
            m_bar.cols()
        )));
    }
    if m_bar.rows() % 2 != 0 {
        return Err(Error::NotSymplecticModN(format!(
            "odd dimension {}",
            m_bar.rows()
        )));
    }
    let k = m_bar.rows() / 2;
    let form = SymplecticForm::new(k)?;
    if !m_bar.is_symplectic(&form, n)? {
        return Err(Error::NotSymplecticModN(format!(
            "input fails the form condition modulo {}",
            n.modulus()
        )));
    }
    let input = CertInput::MatrixModN {
        matrix: m_bar.clone(),
        modulus: n.clone(),
    };
    if n.is_unit() {
        return certify(input, IntMatrix::identity(2 * k), m_bar, n, &form);
    }
    if n.is_zero() {
        // the exact ideal admits only the input itself, which the form
        // condition over Z already certifies
        return certify(input, m_bar.clone(), m_bar, n, &form);
    }
    if k == 1 {
        // Sp_2 = SL_2: the determinant condition is the whole predicate
        let g = sl_lift(m_bar, n)?.output().clone();
        return certify(input, g, m_bar, n, &form);
    }

    let mut w = m_bar.reduce_mod(n);
    let mut left = SpLog::new(2 * k);
    let mut right = SpLog::new(2 * k);

    for i in 0..k {
        // unit pivot at (i, i) from row i restricted to live columns; the
        // cleared A columns and the B columns before k+i are zero mod n, so
        // the restriction stays unital and the completion never writes into
        // a cleared column
        let vusc: Vec<BigInt> = (i..k)
            .chain(k + i..2 * k)
            .map(|j| w.get(i, j).clone())
            .collect();
        let witness = usc_shift_mod(&vusc, n)?;
        let coeffs: Vec<BigInt> = witness.coefficients.iter().map(|c| n.reduce(c)).collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            let mut tcol = vec![BigInt::zero(); 2 * k];
            tcol[i] = BigInt::one();
            let a_sources = k - 1 - i;
            for (m, c) in coeffs.into_iter().enumerate() {
                let slot = if m < a_sources {
                    i + 1 + m
                } else {
                    k + i + (m - a_sources)
                };
                tcol[slot] = c;
            }
            let t = unit_pivot_extension(&tcol, i, k)?;
            right.right(&mut w, &t, n)?;
        }
        let u = w.get(i, i).clone();
        debug_assert!(is_unit_mod(&u, n));

        // pivot to exactly 1 against the next slot; the last round keeps
        // its unit for the closing step instead
        if i + 1 < k && !n.contains(&(&u - BigInt::one())) {
            let uinv = mod_inverse(&u, n)?;
            let e2 = sl_lift(
                &IntMatrix::from_rows(vec![
                    vec![uinv, BigInt::zero()],
                    vec![BigInt::zero(), n.reduce(&u)],
                ])?,
                n,
            )?
            .output()
            .clone();
            let mut u_k = IntMatrix::identity(k);
            *u_k.entry_mut(i, i) = e2.get(0, 0).clone();
            *u_k.entry_mut(i, i + 1) = e2.get(0, 1).clone();
            *u_k.entry_mut(i + 1, i) = e2.get(1, 0).clone();
            *u_k.entry_mut(i + 1, i + 1) = e2.get(1, 1).clone();
            right.right(&mut w, &embed_sl_pair_block(&u_k)?, n)?;
        }
        let pivot = w.get(i, i).clone();
        let pivot_inv = mod_inverse(&pivot, n)?;

        // clear row i of A rightwards, then column i downwards
        for j in i + 1..k {
            let c = n.reduce(&-(&pivot_inv * w.get(i, j)));
            if !c.is_zero() {
                let mut t = IntMatrix::identity(k);
                *t.entry_mut(i, j) = c;
                right.right(&mut w, &embed_sl_pair_block(&t)?, n)?;
            }
        }
        for j in i + 1..k {
            let c = n.reduce(&-(&pivot_inv * w.get(j, i)));
            if !c.is_zero() {
                let mut t = IntMatrix::identity(k);
                *t.entry_mut(j, i) = c;
                left.left(&mut w, &embed_sl_pair_block(&t)?, n)?;
            }
        }

        // wipe row i of B with a right shear and column i of C with a left
        // one; row i of A is pivot * e_i now, so each shear lands exactly
        let b_coeffs: Vec<BigInt> = (0..k)
            .map(|l| n.reduce(&-(&pivot_inv * w.get(i, k + l))))
            .collect();
        if let Some(s) = pinned_symmetric(k, i, &b_coeffs) {
            right.right(&mut w, &embed_symmetric_shear(&s, true)?, n)?;
        }
        let c_coeffs: Vec<BigInt> = (0..k)
            .map(|l| n.reduce(&-(&pivot_inv * w.get(k + l, i))))
            .collect();
        if let Some(s) = pinned_symmetric(k, i, &c_coeffs) {
            left.left(&mut w, &embed_symmetric_shear(&s, false)?, n)?;
        }
    }

    // all that may remain is a unit at the last hyperbolic pair
    let t_res = w.get(k - 1, k - 1).clone();
    let t_inv = mod_inverse(&t_res, n)?;
    let mut expected = IntMatrix::identity(2 * k);
    *expected.entry_mut(k - 1, k - 1) = t_res.clone();
    *expected.entry_mut(2 * k - 1, 2 * k - 1) = t_inv.clone();
    if !w.congruent_mod(&expected, n) {
        return Err(Error::Internal(
            "reduction did not reach the diagonal residue".into(),
        ));
    }
    let e2 = sl_lift(
        &IntMatrix::from_rows(vec![
            vec![n.reduce(&t_res), BigInt::zero()],
            vec![BigInt::zero(), t_inv],
        ])?,
        n,
    )?
    .output()
    .clone();
    let mut s_end = IntMatrix::identity(2 * k);
    *s_end.entry_mut(k - 1, k - 1) = e2.get(0, 0).clone();
    *s_end.entry_mut(k - 1, 2 * k - 1) = e2.get(0, 1).clone();
    *s_end.entry_mut(2 * k - 1, k - 1) = e2.get(1, 0).clone();
    *s_end.entry_mut(2 * k - 1, 2 * k - 1) = e2.get(1, 1).clone();

    // left * m_bar * right = s_end mod n, so the lift undoes both sides
    let g = left
        .acc
        .symplectic_inverse(&form)?
        .mul(&s_end)?
        .mul(&right.acc.symplectic_inverse(&form)?)?;
    certify(input, g, m_bar, n, &form)
}

fn certify(
    input: CertInput,
    output: IntMatrix,
    m_bar: &IntMatrix,
    n: &Ideal,
    form: &SymplecticForm,
) -> Result<LiftCertificate> {
    let checks = vec![
        Check::new(
            "symplectic_exact",
            output.is_symplectic(form, &Ideal::exact())?,
        ),
        Check::new("congruent_to_input", output.congruent_mod(m_bar, n)),
    ];
    LiftCertificate::build(input, output, vec![], checks)
}
