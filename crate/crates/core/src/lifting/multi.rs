//! Simultaneous congruence lifting: one integer matrix of determinant one,
//! or one integral symplectic matrix, whose i-th row matches a prescribed
//! residue row modulo the i-th member of a family of pairwise coprime
//! ideals. Each prescription only sees its own row, so the lift is driven
//! by column operations whose coefficients are divisible by the ideals
//! already treated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{crt_list, egcd, mod_inverse, Ideal};
use crate::error::{Error, Result};
use crate::matrix::{embed_sl_pair_block, embed_symmetric_shear, IntMatrix, SymplecticForm};
use crate::unital::{bring_unit, diag_det_one, ShiftWitness};

use super::sl::sl_lift;
use super::sp::unit_pivot_extension;
use super::{CertInput, Check, CongruenceTarget, LiftCertificate};

/// Stored rows are kept small and canonical: rows with a proper ideal are
/// reduced modulo it, rows with a unit ideal are pinned to basis rows (any
/// value represents them, and the basis row is the one the sweeps expect).
fn normalize_rows(w: &mut IntMatrix, ideals: &[Ideal]) {
    for (i, ideal) in ideals.iter().enumerate() {
        for j in 0..w.cols() {
            let v = if ideal.is_unit() {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else {
                ideal.reduce(w.get(i, j))
            };
            *w.entry_mut(i, j) = v;
        }
    }
}

fn right_apply(
    w: &mut IntMatrix,
    r_acc: &mut IntMatrix,
    t: &IntMatrix,
    ideals: &[Ideal],
) -> Result<()> {
    *w = w.mul(t)?;
    normalize_rows(w, ideals);
    *r_acc = r_acc.mul(t)?;
    Ok(())
}

/// Column vector for the pivot column of a batched column operation: slot
/// `pivot` is 1, the remaining slots take the witness coefficients in
/// ascending position order.
fn pivot_column(witness: &ShiftWitness, pivot: usize, len: usize) -> Vec<BigInt> {
    let mut col = vec![BigInt::zero(); len];
    col[pivot] = BigInt::one();
    let mut src = witness.coefficients.iter();
    for (j, slot) in col.iter_mut().enumerate() {
        if j != pivot {
            *slot = src.next().expect("one coefficient per non-pivot entry").clone();
        }
    }
    col
}

/// Overwrites each off-diagonal pair of `block` with a common value
/// congruent to both originals modulo their own row ideals, via a partition
/// of unity for the pair. Unit ideals put no constraint on their row, so
/// the formula degenerates to copying the constrained side.
fn symmetrize_rowwise(block: &mut IntMatrix, ideals: &[Ideal]) {
    let k = block.rows();
    for i in 0..k {
        for j in i + 1..k {
            let ni = ideals[i].modulus().clone();
            let nj = ideals[j].modulus().clone();
            let (g, u, _) = egcd(&ni, &nj);
            debug_assert!(g.is_one());
            let bij = block.get(i, j).clone();
            let bji = block.get(j, i).clone();
            let c = (&bij + u * &ni * (&bji - &bij)).mod_floor(&(ni * nj));
            *block.entry_mut(i, j) = c.clone();
            *block.entry_mut(j, i) = c;
        }
    }
}

fn row_congruence_checks(target: &CongruenceTarget, output: &IntMatrix) -> Vec<Check> {
    target
        .rows()
        .iter()
        .enumerate()
        .map(|(i, (row, ideal))| {
            let ok = output
                .row_slice(i)
                .iter()
                .zip(row)
                .all(|(a, b)| ideal.contains(&(a - b)));
            Check::new(format!("row_{i}_congruent"), ok)
        })
        .collect()
}

fn certify_sl(target: &CongruenceTarget, output: IntMatrix) -> Result<LiftCertificate> {
    let mut checks = vec![Check::new("det_is_one", output.det()?.is_one())];
    checks.extend(row_congruence_checks(target, &output));
    LiftCertificate::build(CertInput::Target(target.clone()), output, vec![], checks)
}

fn certify_sp(
    target: &CongruenceTarget,
    output: IntMatrix,
    form: &SymplecticForm,
) -> Result<LiftCertificate> {
    let mut checks = vec![Check::new(
        "symplectic_exact",
        output.is_symplectic(form, &Ideal::exact())?,
    )];
    checks.extend(row_congruence_checks(target, &output));
    LiftCertificate::build(CertInput::Target(target.clone()), output, vec![], checks)
}

/// Determinant-one lift of a family of row congruences: the certified
/// output A in SL_d(Z) has its i-th row congruent to the i-th target row
/// modulo the i-th ideal. The target must be square. Unit ideals are
/// allowed and put nothing on their row.
///
/// A single-row target is feasible only when the row is congruent to 1,
/// since a 1 x 1 determinant-one matrix has no freedom at all; that case
/// is refused as a precondition rather than silently mislifted.
pub fn sl_multi_congruence_lift(target: &CongruenceTarget) -> Result<LiftCertificate> {
    let d = target.len();
    if target.width() != d {
        return Err(Error::BadShape(format!(
            "need a square target, got {d} rows of width {}",
            target.width()
        )));
    }
    let ideals = target.ideals();
    if ideals.iter().all(|i| i.is_unit()) {
        return certify_sl(target, IntMatrix::identity(d));
    }
    if d == 1 {
        let (row, ideal) = &target.rows()[0];
        if !ideal.contains(&(&row[0] - BigInt::one())) {
            return Err(Error::PreconditionViolated(format!(
                "a 1 x 1 determinant-one lift forces the entry 1, but the target is {} mod {}",
                row[0],
                ideal.modulus()
            )));
        }
        return certify_sl(target, IntMatrix::identity(1));
    }

    let mut w = IntMatrix::from_rows(target.rows().iter().map(|(r, _)| r.clone()).collect())?;
    let mut r_acc = IntMatrix::identity(d);
    normalize_rows(&mut w, &ideals);

    for i in 0..d {
        if ideals[i].is_unit() {
            continue;
        }
        // Unit pivot at (i, i), with coefficients divisible by every ideal
        // already treated so the finished rows keep their residues.
        let coeff = Ideal::product(&ideals[..i]);
        let witness = bring_unit(w.row_slice(i), i, &ideals[i], &coeff)?;
        if !witness.coefficients.iter().all(|c| c.is_zero()) {
            let col = pivot_column(&witness, i, d);
            let mut t = IntMatrix::identity(d);
            for (j, c) in col.iter().enumerate() {
                if j != i {
                    *t.entry_mut(j, i) = c.clone();
                }
            }
            right_apply(&mut w, &mut r_acc, &t, &ideals)?;
        }
        // Clear the rest of row i. Finished rows are safe: their entry in
        // the pivot column is divisible by their own ideal.
        let z = mod_inverse(w.get(i, i), &ideals[i])?;
        let mut t = IntMatrix::identity(d);
        let mut any = false;
        for j in (0..d).filter(|&j| j != i) {
            let c = ideals[i].reduce(&-(&z * w.get(i, j)));
            if !c.is_zero() {
                *t.entry_mut(i, j) = c;
                any = true;
            }
        }
        if any {
            right_apply(&mut w, &mut r_acc, &t, &ideals)?;
        }
        for l in (0..=i).filter(|&l| !ideals[l].is_unit()) {
            debug_assert!(crate::arith::is_unit_mod(w.get(l, l), &ideals[l]));
            debug_assert!((0..d).filter(|&j| j != l).all(|j| w.get(l, j).is_zero()));
        }
    }

    // The working matrix is now diagonal rowwise; match the diagonal with a
    // determinant-one residue and lift that.
    let values: Vec<BigInt> = (0..d).map(|i| w.get(i, i).clone()).collect();
    let diag = diag_det_one(&values, &ideals)?;
    let n = Ideal::product(&ideals);
    let diag_matrix = IntMatrix::from_fn(d, d, |i, j| {
        if i == j {
            n.reduce(&diag[i])
        } else {
            BigInt::zero()
        }
    });
    let b0 = sl_lift(&diag_matrix, &n)?;
    let output = b0.output().mul(&r_acc.inverse_unimodular()?)?;
    certify_sl(target, output)
}

/// State of the symplectic sweep: the working matrix, the accumulated right
/// multiplier, and the exact first-diagonal block carried through the lower
/// half of the sweep.
struct SpSweep<'a> {
    w: IntMatrix,
    r_acc: IntMatrix,
    ideals: &'a [Ideal],
    k: usize,
}

impl SpSweep<'_> {
    fn apply(&mut self, t: &IntMatrix) -> Result<()> {
        right_apply(&mut self.w, &mut self.r_acc, t, self.ideals)
    }

    fn block(&self, corner: (usize, usize)) -> Result<IntMatrix> {
        self.w.block(corner.0, corner.1, self.k, self.k)
    }

    /// Batched unit-pivot column operation from a witness on a full row.
    fn apply_pivot_witness(&mut self, witness: &ShiftWitness, pivot: usize) -> Result<()> {
        if witness.coefficients.iter().all(|c| c.is_zero()) {
            return Ok(());
        }
        let col = pivot_column(witness, pivot, 2 * self.k);
        let t = unit_pivot_extension(&col, pivot, self.k)?;
        self.apply(&t)
    }

    /// Right multiplication by [[U, 0], [0, (U^T)^-1]] for U of determinant
    /// one, skipped when U is the identity.
    fn apply_pair_block(&mut self, u: &IntMatrix) -> Result<()> {
        if *u == IntMatrix::identity(self.k) {
            return Ok(());
        }
        let t = embed_sl_pair_block(u)?;
        self.apply(&t)
    }

    /// Right multiplication by the symmetric shear with block S, skipped
    /// when S is zero.
    fn apply_shear(&mut self, s: &IntMatrix, upper: bool) -> Result<()> {
        if (0..self.k).all(|i| (0..self.k).all(|j| s.get(i, j).is_zero())) {
            return Ok(());
        }
        let t = embed_symmetric_shear(s, upper)?;
        self.apply(&t)
    }
}

/// Symplectic lift of a family of row congruences: the certified output
/// N in Sp_2k(Z) has its i-th row congruent to the i-th target row modulo
/// the i-th ideal. The target must have 2k rows of width 2k.
///
/// The sweep conditions the two half-diagonals in turn: unit pivots down
/// the first block diagonal, a determinant correction, then the same for
/// the second half against a symmetrized off-diagonal block, and a final
/// paired correction that cancels the accumulated first block exactly.
pub fn sp_multi_congruence_lift(target: &CongruenceTarget) -> Result<LiftCertificate> {
    let n2 = target.len();
    if n2 % 2 != 0 || target.width() != n2 {
        return Err(Error::BadShape(format!(
            "need 2k rows of width 2k, got {n2} rows of width {}",
            target.width()
        )));
    }
    let k = n2 / 2;
    let form = SymplecticForm::new(k)?;
    let ideals = target.ideals();
    if ideals.iter().all(|i| i.is_unit()) {
        return certify_sp(target, IntMatrix::identity(n2), &form);
    }
    if k == 1 {
        // Sp_2 = SL_2: the form condition is the determinant condition.
        let inner = sl_multi_congruence_lift(target)?;
        return certify_sp(target, inner.output().clone(), &form);
    }

    let upper = &ideals[..k];
    let n_up = Ideal::product(upper);
    let w = IntMatrix::from_rows(target.rows().iter().map(|(r, _)| r.clone()).collect())?;
    let mut s = SpSweep {
        w,
        r_acc: IntMatrix::identity(n2),
        ideals: &ideals,
        k,
    };
    normalize_rows(&mut s.w, &ideals);

    // Unit pivots down the diagonal of the first block, coefficients
    // divisible by the upper ideals already treated.
    for i in 0..k {
        if ideals[i].is_unit() {
            continue;
        }
        let coeff = Ideal::product(&ideals[..i]);
        let witness = bring_unit(s.w.row_slice(i), i, &ideals[i], &coeff)?;
        s.apply_pivot_witness(&witness, i)?;
        let z = mod_inverse(s.w.get(i, i), &ideals[i])?;
        let mut u = IntMatrix::identity(k);
        for j in (0..k).filter(|&j| j != i) {
            *u.entry_mut(i, j) = ideals[i].reduce(&-(&z * s.w.get(i, j)));
        }
        s.apply_pair_block(&u)?;
    }

    // Correct the first block diagonal to the identity rowwise.
    let values: Vec<BigInt> = (0..k).map(|i| s.w.get(i, i).clone()).collect();
    let diag = diag_det_one(&values, upper)?;
    let diag_matrix = IntMatrix::from_fn(k, k, |i, j| {
        if i == j {
            n_up.reduce(&diag[i])
        } else {
            BigInt::zero()
        }
    });
    let a_tilde = sl_lift(&diag_matrix, &n_up)?.output().clone();
    s.apply_pair_block(&a_tilde.inverse_unimodular()?)?;
    debug_assert_eq!(s.block((0, 0))?, IntMatrix::identity(k));

    // The off-diagonal block admits a symmetric rowwise replacement; shear
    // it away against the exact identity block.
    let mut b = s.block((0, k))?;
    symmetrize_rowwise(&mut b, upper);
    for i in 0..k {
        for j in 0..k {
            *s.w.entry_mut(i, k + j) = b.get(i, j).clone();
        }
    }
    s.apply_shear(&b.neg(), true)?;
    debug_assert_eq!(s.block((0, k))?, IntMatrix::from_fn(k, k, |_, _| BigInt::zero()));

    // The upper half is now exactly (I | 0); carry the first block exactly
    // through the lower sweep.
    let lower = &ideals[k..];
    let n_down = Ideal::product(lower);
    let mut u_track = IntMatrix::identity(k);

    for i in 0..k {
        if ideals[k + i].is_unit() {
            continue;
        }
        // Unit pivot at the (i, i) slot of the third block, coefficients
        // divisible by the lower ideals already treated. The upper rows
        // absorb the operation exactly into the first block.
        let coeff = Ideal::product(&ideals[k..k + i]);
        let witness = bring_unit(s.w.row_slice(k + i), i, &ideals[k + i], &coeff)?;
        if !witness.coefficients.iter().all(|c| c.is_zero()) {
            let col = pivot_column(&witness, i, n2);
            let mut e = IntMatrix::identity(k);
            for (j, c) in col.iter().take(k).enumerate() {
                if j != i {
                    *e.entry_mut(j, i) = c.clone();
                }
            }
            u_track = u_track.mul(&e)?;
            s.apply_pivot_witness(&witness, i)?;
        }
        // A diagonal shear makes the fourth-block diagonal entry 1; its
        // upper component vanishes modulo every upper ideal, so the upper
        // rows are unharmed.
        let z = mod_inverse(s.w.get(k + i, i), &ideals[k + i])?;
        let want = ideals[k + i].reduce(&((BigInt::one() - s.w.get(k + i, k + i)) * z));
        let shear = crt_list(&[BigInt::zero(), want], &[n_up.clone(), ideals[k + i].clone()])?;
        let mut sh = IntMatrix::from_fn(k, k, |_, _| BigInt::zero());
        *sh.entry_mut(i, i) = shear;
        s.apply_shear(&sh, true)?;
        debug_assert!(s.w.get(k + i, k + i).is_one());
    }

    // The fourth block now has unital rows; lift it as its own congruence
    // family and cancel it.
    let d_target = CongruenceTarget::new(
        (0..k)
            .map(|i| (s.w.row_slice(k + i)[k..].to_vec(), ideals[k + i].clone()))
            .collect(),
    )?;
    let v = sl_multi_congruence_lift(&d_target)?.output().clone();
    u_track = u_track.mul(&v.transpose())?;
    s.apply_pair_block(&v.transpose())?;
    debug_assert_eq!(s.block((k, k))?, IntMatrix::identity(k));

    // Symmetrize the third block rowwise and shear it away against the
    // exact identity in the fourth block.
    let mut c = s.block((k, 0))?;
    symmetrize_rowwise(&mut c, lower);
    for i in 0..k {
        for j in 0..k {
            *s.w.entry_mut(k + i, j) = c.get(i, j).clone();
        }
    }
    s.apply_shear(&c.neg(), false)?;

    // Cancel the tracked first block: a paired correction congruent to its
    // inverse above and to the identity below.
    let u_inv = u_track.inverse_unimodular()?;
    let joint = Ideal::new(n_up.modulus() * n_down.modulus())?;
    let m_mix = IntMatrix::from_fn(k, k, |i, j| {
        let id = if i == j { BigInt::one() } else { BigInt::zero() };
        crt_list(
            &[u_inv.get(i, j).clone(), id],
            &[n_up.clone(), n_down.clone()],
        )
        .expect("coprime halves")
    });
    let v_end = sl_lift(&m_mix.reduce_mod(&joint), &joint)?.output().clone();
    s.apply_pair_block(&v_end)?;

    if s.w != IntMatrix::identity(n2) {
        return Err(Error::Internal(
            "symplectic congruence sweep did not reach the identity".into(),
        ));
    }
    let output = s.r_acc.symplectic_inverse(&form)?;
    certify_sp(target, output, &form)
}
