//! Dense matrices over Z with exact arithmetic: fraction-free determinants,
//! adjugate inverses of unimodular matrices, congruence predicates for
//! SL_k and Sp_2k membership modulo an ideal, block embeddings into the
//! symplectic group, and determinant-one elementary operations.
//!
//! Operations return fresh matrices; nothing aliases its inputs. Sizes are
//! desk scale (the lifting pipelines stay at or below 12x12), so storage is
//! dense row-major and multiplication is schoolbook.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Ideal;
use crate::error::{Error, Result};

/// Dense row-major integer matrix with positive dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::OutOfRange("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::BadLength(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::OutOfRange("matrix dimensions must be positive".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadLength("ragged rows".into()));
        }
        let r = rows.len();
        Ok(IntMatrix {
            rows: r,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::from_fn(rows, cols, |_, _| BigInt::zero())
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row_slice(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row_slice(i).to_vec()).collect()
    }

    pub fn with_entry(&self, i: usize, j: usize, value: BigInt) -> IntMatrix {
        let mut out = self.clone();
        *out.entry_mut(i, j) = value;
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    /// Entrywise least nonnegative residues. The exact ideal (modulus 0)
    /// leaves entries untouched.
    pub fn reduce_mod(&self, n: &Ideal) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| n.reduce(self.get(i, j)))
    }

    /// Entrywise congruence modulo n; the exact ideal means equality.
    pub fn congruent_mod(&self, other: &IntMatrix, n: &Ideal) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| n.contains(&(self.get(i, j) - other.get(i, j))))
            })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMatrix::identity(self.rows)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination with row
    /// pivoting. Every interior division is exact.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare(format!("{}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut w: Vec<Vec<BigInt>> = self.row_vectors();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n.saturating_sub(1) {
            let pivot = match (c..n).find(|&r| !w[r][c].is_zero()) {
                Some(r) => r,
                None => return Ok(BigInt::zero()),
            };
            if pivot != c {
                w.swap(pivot, c);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = &w[i][j] * &w[c][c] - &w[i][c] * &w[c][j];
                    w[i][j] = exact_div(num, &prev);
                }
                w[i][c] = BigInt::zero();
            }
            prev = w[c][c].clone();
        }
        Ok(sign * w[n - 1][n - 1].clone())
    }

    /// det ≡ 1 mod n; the exact ideal means det exactly 1.
    pub fn is_sl_mod(&self, n: &Ideal) -> Result<bool> {
        let d = self.det()?;
        Ok(n.contains(&(d - BigInt::one())))
    }

    /// A^T J A ≡ J mod n for the standard form of half-dimension form.k;
    /// the exact ideal means equality over Z.
    pub fn is_symplectic(&self, form: &SymplecticForm, n: &Ideal) -> Result<bool> {
        let dim = 2 * form.k();
        if self.rows != dim || self.cols != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against the symplectic form of size {dim}",
                self.rows, self.cols
            )));
        }
        let j = form.matrix();
        let lhs = self.transpose().mul(&j)?.mul(self)?;
        Ok(lhs.congruent_mod(&j, n))
    }

    /// Exact inverse of a matrix with determinant +-1, via the adjugate
    /// with Bareiss minor determinants.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det()?;
        if !(d == BigInt::one() || d == -BigInt::one()) {
            return Err(Error::NotUnimodular(format!("determinant {d}")));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::new(1, 1, vec![d])?);
        }
        let mut out = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i)?.det()?;
                let c = if (i + j) % 2 == 0 { minor } else { -minor };
                *out.entry_mut(i, j) = &c * &d; // dividing by +-1 is multiplying
            }
        }
        Ok(out)
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> Result<IntMatrix> {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == drop_row {
                continue;
            }
            for j in 0..self.cols {
                if j == drop_col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix::new(self.rows - 1, self.cols - 1, entries)
    }

    /// Inverse of an exactly symplectic matrix: -J A^T J. The caller
    /// guarantees the symplectic property; no predicate is re-run here.
    pub fn symplectic_inverse(&self, form: &SymplecticForm) -> Result<IntMatrix> {
        let dim = 2 * form.k();
        if self.rows != dim || self.cols != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against the symplectic form of size {dim}",
                self.rows, self.cols
            )));
        }
        let j = form.matrix();
        Ok(j.mul(&self.transpose())?.mul(&j)?.neg())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<IntMatrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::OutOfRange("block out of bounds".into()));
        }
        Ok(IntMatrix::from_fn(rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        }))
    }

    pub fn from_blocks(
        a: &IntMatrix,
        b: &IntMatrix,
        c: &IntMatrix,
        d: &IntMatrix,
    ) -> Result<IntMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("block assembly".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(IntMatrix::from_fn(rows, cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        }))
    }
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    debug_assert!(!den.is_zero() && (&num % den).is_zero(), "inexact division");
    num / den
}

/// The standard symplectic form of half-dimension k: J = [[0, I],[-I, 0]].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    k: usize,
}

impl SymplecticForm {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange("half-dimension must be positive".into()));
        }
        Ok(SymplecticForm { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> IntMatrix {
        let k = self.k;
        IntMatrix::from_fn(2 * k, 2 * k, |i, j| {
            if i < k && j == i + k {
                BigInt::one()
            } else if i >= k && j == i - k {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }
}

/// [[U, 0],[0, (U^T)^{-1}]] for U with determinant exactly 1; the result is
/// exactly symplectic.
pub fn embed_sl_pair_block(u: &IntMatrix) -> Result<IntMatrix> {
    if !u.is_square() {
        return Err(Error::NotSquare(format!("{}x{}", u.rows(), u.cols())));
    }
    let d = u.det()?;
    if !d.is_one() {
        return Err(Error::NotUnimodular(format!(
            "embed_sl_pair_block needs determinant 1, got {d}"
        )));
    }
    let k = u.rows();
    let co = u.transpose().inverse_unimodular()?;
    IntMatrix::from_blocks(u, &IntMatrix::zero(k, k), &IntMatrix::zero(k, k), &co)
}

/// [[I, S],[0, I]] (upper) or [[I, 0],[S, I]] (lower) for symmetric S; the
/// result is exactly symplectic.
pub fn embed_symmetric_shear(s: &IntMatrix, upper: bool) -> Result<IntMatrix> {
    if !s.is_square() {
        return Err(Error::NotSquare(format!("{}x{}", s.rows(), s.cols())));
    }
    if *s != s.transpose() {
        return Err(Error::NotSymmetric);
    }
    let k = s.rows();
    let id = IntMatrix::identity(k);
    let z = IntMatrix::zero(k, k);
    if upper {
        IntMatrix::from_blocks(&id, s, &z, &id)
    } else {
        IntMatrix::from_blocks(&id, &z, s, &id)
    }
}

/// Block placement flavor for a doubled permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpPermFlavor {
    /// [[P, 0],[0, P]]
    Diag,
    /// [[0, P],[-P, 0]]
    OffDiag,
}

/// Doubles a permutation of {0,..,k-1} into Sp_2k: P is the matrix with
/// P e_j = e_{perm[j]}. Both flavors are exactly symplectic.
pub fn embed_sp_permutation(perm: &[usize], flavor: SpPermFlavor) -> Result<IntMatrix> {
    let k = perm.len();
    if k == 0 {
        return Err(Error::OutOfRange("empty permutation".into()));
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::PreconditionViolated(format!(
                "not a permutation of 0..{k}: {perm:?}"
            )));
        }
        seen[p] = true;
    }
    let p = IntMatrix::from_fn(k, k, |i, j| {
        if perm[j] == i {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let z = IntMatrix::zero(k, k);
    match flavor {
        SpPermFlavor::Diag => IntMatrix::from_blocks(&p, &z, &z, &p),
        SpPermFlavor::OffDiag => IntMatrix::from_blocks(&z, &p, &p.neg(), &z),
    }
}

/// Determinant-one elementary transformations; each materializes to an
/// integer matrix with determinant exactly 1, so the group generated is a
/// subgroup of SL. Applying the op then its inverse is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    /// row[dst] += coeff * row[src] (left multiplication)
    AddMultipleOfRow {
        dst: usize,
        src: usize,
        coeff: BigInt,
    },
    /// col[dst] += coeff * col[src] (right multiplication)
    AddMultipleOfColumn {
        dst: usize,
        src: usize,
        coeff: BigInt,
    },
    /// (slot i, slot j) <- (slot j, -slot i): a swap with one sign flip
    SwapWithSign { i: usize, j: usize },
    /// slot i scaled by unit, slot j by its inverse; over Z the unit is +-1
    ScalePair { i: usize, j: usize, unit: BigInt },
}

impl ElementaryOp {
    fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = match self {
            ElementaryOp::AddMultipleOfRow { dst, src, .. }
            | ElementaryOp::AddMultipleOfColumn { dst, src, .. } => (*dst, *src),
            ElementaryOp::SwapWithSign { i, j } | ElementaryOp::ScalePair { i, j, .. } => (*i, *j),
        };
        if a == b {
            return Err(Error::PreconditionViolated(
                "elementary op needs two distinct indices".into(),
            ));
        }
        if a >= n || b >= n {
            return Err(Error::OutOfRange(format!(
                "elementary op indices ({a}, {b}) exceed size {n}"
            )));
        }
        if let ElementaryOp::ScalePair { unit, .. } = self {
            if !(unit.is_one() || (-unit).is_one()) {
                return Err(Error::PreconditionViolated(format!(
                    "scale_pair unit must be 1 or -1, got {unit}"
                )));
            }
        }
        Ok(())
    }

    /// The n x n matrix of this op. Row ops act by left multiplication,
    /// column ops by right multiplication; the other two kinds act the same
    /// on either side.
    pub fn materialize(&self, n: usize) -> Result<IntMatrix> {
        self.validate(n)?;
        let mut m = IntMatrix::identity(n);
        match self {
            ElementaryOp::AddMultipleOfRow { dst, src, coeff } => {
                *m.entry_mut(*dst, *src) = coeff.clone();
            }
            ElementaryOp::AddMultipleOfColumn { dst, src, coeff } => {
                *m.entry_mut(*src, *dst) = coeff.clone();
            }
            ElementaryOp::SwapWithSign { i, j } => {
                *m.entry_mut(*i, *i) = BigInt::zero();
                *m.entry_mut(*j, *j) = BigInt::zero();
                *m.entry_mut(*i, *j) = BigInt::one();
                *m.entry_mut(*j, *i) = -BigInt::one();
            }
            ElementaryOp::ScalePair { i, j, unit } => {
                *m.entry_mut(*i, *i) = unit.clone();
                *m.entry_mut(*j, *j) = unit.clone(); // (+-1)^{-1} = +-1
            }
        }
        Ok(m)
    }

    pub fn inverse(&self) -> ElementaryOp {
        match self {
            ElementaryOp::AddMultipleOfRow { dst, src, coeff } => ElementaryOp::AddMultipleOfRow {
                dst: *dst,
                src: *src,
                coeff: -coeff,
            },
            ElementaryOp::AddMultipleOfColumn { dst, src, coeff } => {
                ElementaryOp::AddMultipleOfColumn {
                    dst: *dst,
                    src: *src,
                    coeff: -coeff,
                }
            }
            ElementaryOp::SwapWithSign { i, j } => ElementaryOp::SwapWithSign { i: *j, j: *i },
            ElementaryOp::ScalePair { i, j, unit } => ElementaryOp::ScalePair {
                i: *i,
                j: *j,
                unit: unit.clone(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Independent determinant oracle: cofactor expansion along row 0.
    fn cofactor_det(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if a.get(0, j).is_zero() {
                continue;
            }
            let sub = a.minor(0, j).unwrap();
            let term = a.get(0, j) * cofactor_det(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
        IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), BigInt::one());
        assert_eq!(m(&[&[7, 1], &[6, 1]]).det().unwrap(), BigInt::one());
        assert_eq!(m(&[&[2, 0], &[0, 3]]).det().unwrap(), BigInt::from(6));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), BigInt::zero());
        assert_eq!(
            m(&[&[0, 2, 1], &[0, 0, 3], &[5, 0, 0]]).det().unwrap(),
            BigInt::from(30)
        );
        assert!(m(&[&[1, 2, 3], &[4, 5, 6]]).det().is_err());
    }

    #[test]
    fn det_agrees_with_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(90125);
        for n in 1..=5 {
            for _ in 0..40 {
                let a = random_matrix(&mut rng, n, 12);
                assert_eq!(a.det().unwrap(), cofactor_det(&a), "matrix {a:?}");
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for n in 1..=5 {
            for _ in 0..20 {
                let a = random_matrix(&mut rng, n, 1000);
                let b = random_matrix(&mut rng, n, 1000);
                assert_eq!(
                    a.mul(&b).unwrap().det().unwrap(),
                    a.det().unwrap() * b.det().unwrap()
                );
            }
        }
    }

    #[test]
    fn mul_and_transpose_basics() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.mul(&IntMatrix::identity(2)).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.mul(&IntMatrix::identity(3)).is_err());

        let b = m(&[&[5, 6], &[7, 8]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&[19, 22], &[43, 50]]));
    }

    #[test]
    fn reduce_mod_examples() {
        let a = m(&[&[7, 1], &[6, 1]]);
        assert_eq!(
            a.reduce_mod(&Ideal::from_u64(3).unwrap()),
            m(&[&[1, 1], &[0, 1]])
        );
        // exact ideal: untouched, negatives preserved
        let b = m(&[&[-5, 2], &[0, 7]]);
        assert_eq!(b.reduce_mod(&Ideal::exact()), b);
        // congruence respects the exact ideal as equality
        assert!(b.congruent_mod(&b, &Ideal::exact()));
        assert!(!a.congruent_mod(&b, &Ideal::exact()));
        assert!(m(&[&[1]]).congruent_mod(&m(&[&[8]]), &Ideal::from_u64(7).unwrap()));
    }

    #[test]
    fn sl_membership() {
        let n5 = Ideal::from_u64(5).unwrap();
        assert!(IntMatrix::identity(3).is_sl_mod(&n5).unwrap());
        assert!(IntMatrix::identity(3).is_sl_mod(&Ideal::exact()).unwrap());
        let a = m(&[&[2, 0], &[0, 3]]);
        assert!(a.is_sl_mod(&n5).unwrap());
        assert!(!a.is_sl_mod(&Ideal::exact()).unwrap());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_sl_mod(&n5).unwrap());
    }

    #[test]
    fn symplectic_predicate() {
        let form = SymplecticForm::new(2).unwrap();
        let j = form.matrix();
        assert_eq!(
            j,
            m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]])
        );
        assert!(IntMatrix::identity(4).is_symplectic(&form, &Ideal::exact()).unwrap());
        assert!(j.is_symplectic(&form, &Ideal::exact()).unwrap());
        let g = m(&[&[1, 2, 3, 4], &[0, 1, 4, 0], &[0, 0, 1, 0], &[0, 0, -2, 1]]);
        assert!(g.is_symplectic(&form, &Ideal::exact()).unwrap());
        assert!(!m(&[
            &[1, 1, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1]
        ])
        .is_symplectic(&form, &Ideal::exact())
        .unwrap());
        assert!(IntMatrix::identity(2).is_symplectic(&form, &Ideal::exact()).is_err());

        // congruence-only membership: the B block is asymmetric over Z
        let h = m(&[&[1, 0, 0, 5], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(h
            .is_symplectic(&form, &Ideal::from_u64(5).unwrap())
            .unwrap());
        assert!(!h.is_symplectic(&form, &Ideal::exact()).unwrap());
    }

    #[test]
    fn unimodular_inverse() {
        let samples = [
            m(&[&[1, 1], &[0, 1]]),
            m(&[&[0, 1], &[1, 0]]),
            m(&[&[7, 1], &[6, 1]]),
            m(&[&[-1]]),
            m(&[&[1, 2, 3], &[0, 1, 4], &[0, 0, 1]]),
            m(&[&[2, 5], &[1, 3]]),
        ];
        for a in &samples {
            let inv = a.inverse_unimodular().unwrap();
            assert!(a.mul(&inv).unwrap().is_identity(), "a = {a:?}");
            assert!(inv.mul(a).unwrap().is_identity());
        }
        assert!(matches!(
            m(&[&[2, 0], &[0, 3]]).inverse_unimodular(),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn symplectic_inverse_matches_unimodular_inverse() {
        let form = SymplecticForm::new(2).unwrap();
        let g = m(&[&[1, 2, 3, 4], &[0, 1, 4, 0], &[0, 0, 1, 0], &[0, 0, -2, 1]]);
        let inv = g.symplectic_inverse(&form).unwrap();
        assert!(g.mul(&inv).unwrap().is_identity());
        assert_eq!(inv, g.inverse_unimodular().unwrap());
    }

    #[test]
    fn sl_pair_block_embedding() {
        assert_eq!(
            embed_sl_pair_block(&IntMatrix::identity(2)).unwrap(),
            IntMatrix::identity(4)
        );
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            embed_sl_pair_block(&u).unwrap(),
            m(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]])
        );
        let form = SymplecticForm::new(2).unwrap();
        let r = m(&[&[0, -1], &[1, 0]]);
        assert!(embed_sl_pair_block(&r)
            .unwrap()
            .is_symplectic(&form, &Ideal::exact())
            .unwrap());
        assert!(matches!(
            embed_sl_pair_block(&m(&[&[2, 0], &[0, 3]])),
            Err(Error::NotUnimodular(_))
        ));
        // determinant -1 must also be rejected
        assert!(matches!(
            embed_sl_pair_block(&m(&[&[0, 1], &[1, 0]])),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn symmetric_shear_embedding() {
        let form = SymplecticForm::new(2).unwrap();
        let z = IntMatrix::zero(2, 2);
        assert_eq!(
            embed_symmetric_shear(&z, true).unwrap(),
            IntMatrix::identity(4)
        );
        let s = m(&[&[1, 2], &[2, 0]]);
        let up = embed_symmetric_shear(&s, true).unwrap();
        assert!(up.is_symplectic(&form, &Ideal::exact()).unwrap());
        assert_eq!(up.block(0, 2, 2, 2).unwrap(), s);
        let t = m(&[&[0, 1], &[1, 0]]);
        let lo = embed_symmetric_shear(&t, false).unwrap();
        assert!(lo.is_symplectic(&form, &Ideal::exact()).unwrap());
        assert_eq!(lo.block(2, 0, 2, 2).unwrap(), t);
        assert!(matches!(
            embed_symmetric_shear(&m(&[&[1, 2], &[3, 4]]), true),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn sp_permutation_embedding() {
        let form = SymplecticForm::new(2).unwrap();
        assert_eq!(
            embed_sp_permutation(&[0, 1], SpPermFlavor::Diag).unwrap(),
            IntMatrix::identity(4)
        );
        assert_eq!(
            embed_sp_permutation(&[0, 1], SpPermFlavor::OffDiag).unwrap(),
            form.matrix()
        );
        let swap = embed_sp_permutation(&[1, 0], SpPermFlavor::Diag).unwrap();
        assert!(swap.is_symplectic(&form, &Ideal::exact()).unwrap());
        let off = embed_sp_permutation(&[1, 0], SpPermFlavor::OffDiag).unwrap();
        assert!(off.is_symplectic(&form, &Ideal::exact()).unwrap());
        assert!(embed_sp_permutation(&[0, 0], SpPermFlavor::Diag).is_err());
        assert!(embed_sp_permutation(&[2, 0], SpPermFlavor::Diag).is_err());
    }

    #[test]
    fn elementary_ops_have_det_one_and_invert() {
        let ops = [
            ElementaryOp::AddMultipleOfRow {
                dst: 0,
                src: 2,
                coeff: BigInt::from(-7),
            },
            ElementaryOp::AddMultipleOfColumn {
                dst: 1,
                src: 0,
                coeff: BigInt::from(5),
            },
            ElementaryOp::SwapWithSign { i: 0, j: 2 },
            ElementaryOp::ScalePair {
                i: 1,
                j: 2,
                unit: BigInt::from(-1),
            },
        ];
        for op in &ops {
            let mat = op.materialize(3).unwrap();
            assert_eq!(mat.det().unwrap(), BigInt::one(), "op {op:?}");
            let inv = op.inverse().materialize(3).unwrap();
            assert!(mat.mul(&inv).unwrap().is_identity(), "op {op:?}");
            assert!(inv.mul(&mat).unwrap().is_identity());
        }
        // the op matrices act on the expected side
        let a = m(&[&[1, 2], &[3, 4]]);
        let row_op = ElementaryOp::AddMultipleOfRow {
            dst: 0,
            src: 1,
            coeff: BigInt::from(10),
        };
        assert_eq!(
            row_op.materialize(2).unwrap().mul(&a).unwrap(),
            m(&[&[31, 42], &[3, 4]])
        );
        let col_op = ElementaryOp::AddMultipleOfColumn {
            dst: 0,
            src: 1,
            coeff: BigInt::from(10),
        };
        assert_eq!(
            a.mul(&col_op.materialize(2).unwrap()).unwrap(),
            m(&[&[21, 2], &[43, 4]])
        );
    }

    #[test]
    fn elementary_op_rejects_bad_inputs() {
        assert!(ElementaryOp::ScalePair {
            i: 0,
            j: 1,
            unit: BigInt::from(2)
        }
        .materialize(2)
        .is_err());
        assert!(ElementaryOp::SwapWithSign { i: 1, j: 1 }.materialize(2).is_err());
        assert!(ElementaryOp::AddMultipleOfRow {
            dst: 0,
            src: 5,
            coeff: BigInt::one()
        }
        .materialize(2)
        .is_err());
    }

    #[test]
    fn block_assembly_roundtrip() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[5, 6], &[7, 8]]);
        let c = m(&[&[9, 10], &[11, 12]]);
        let d = m(&[&[13, 14], &[15, 16]]);
        let whole = IntMatrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert_eq!(whole.block(0, 0, 2, 2).unwrap(), a);
        assert_eq!(whole.block(0, 2, 2, 2).unwrap(), b);
        assert_eq!(whole.block(2, 0, 2, 2).unwrap(), c);
        assert_eq!(whole.block(2, 2, 2, 2).unwrap(), d);
        assert!(whole.block(3, 3, 2, 2).is_err());
    }
}
