//! Constructive manipulation of unital integer vectors: coprime shifts along
//! arithmetic progressions, head shifts that make the leading entry a unit
//! modulo a target, ideal-confined perturbations that restore a global gcd
//! of one, and determinant-one diagonal corrections under CRT constraints.
//!
//! A vector is unital when the gcd of its entries is 1; it is unital modulo
//! n when the gcd of its entries together with n is 1. The zero ideal is
//! rejected by every operation here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{crt_list, egcd, factorize, gcd, gcd_all, is_unit_mod, mod_inverse, Ideal};
use crate::error::{Error, Result};

/// gcd of the entries is 1. gcd(0, 0) = 0, so the empty and all-zero vectors
/// are not unital.
pub fn is_unital(entries: &[BigInt]) -> bool {
    gcd_all(entries).is_one()
}

/// Nonempty integer vector with gcd exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitalVector(Vec<BigInt>);

impl UnitalVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadLength("unital vector must be nonempty".into()));
        }
        if !is_unital(&entries) {
            return Err(Error::PreconditionViolated(format!(
                "entries are not unital: gcd is {}",
                gcd_all(&entries)
            )));
        }
        Ok(UnitalVector(entries))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Outcome of a shift construction: `result` is the recorded linear
/// combination of the input entries and is a unit modulo `modulus`.
///
/// The combination convention is fixed per operation: for the head shifts
/// the result equals `entries[0] + sum(coefficients[j-1] * entries[j])`;
/// for pivot shifts it is `row[pivot] + sum(coefficients[i] * row[j_i])`
/// with `j_i` running over the non-pivot indices in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftWitness {
    pub coefficients: Vec<BigInt>,
    pub result: BigInt,
    pub modulus: Ideal,
}

impl ShiftWitness {
    /// Recompute the combination against the claimed source entries and
    /// check the unit property. `pivot` selects the fixed entry.
    pub fn verify(&self, entries: &[BigInt], pivot: usize) -> bool {
        if pivot >= entries.len() || self.coefficients.len() + 1 != entries.len() {
            return false;
        }
        let mut acc = entries[pivot].clone();
        let mut k = 0;
        for (j, e) in entries.iter().enumerate() {
            if j == pivot {
                continue;
            }
            acc += &self.coefficients[k] * e;
            k += 1;
        }
        acc == self.result && is_unit_mod(&self.result, &self.modulus)
    }
}

/// Smallest constraint solution k >= 0 with gcd(a + k*b, m) = 1, built by
/// excluding one residue per prime divisor of m and combining with CRT.
/// Requires that no prime dividing both b and m divides a; the classical
/// coprime-pair case gcd(a, b) = 1 always satisfies this.
pub(crate) fn progression_coprime(a: &BigInt, b: &BigInt, m: &BigInt) -> Result<BigInt> {
    let m_abs = m.abs();
    if m_abs.is_one() {
        return Ok(BigInt::zero());
    }
    let mut residues = Vec::new();
    let mut moduli = Vec::new();
    for q in factorize(&m_abs)?.primes() {
        let iq = Ideal::new(q.clone())?;
        if iq.contains(b) {
            if iq.contains(a) {
                return Err(Error::PreconditionViolated(format!(
                    "prime {q} divides a, b and m; no shift can avoid it"
                )));
            }
            continue; // a + k*b is a unit mod q for every k
        }
        let b_inv = mod_inverse(b, &iq)?;
        let forbidden = iq.reduce(&(-(a * b_inv)));
        residues.push(iq.reduce(&(forbidden + BigInt::one())));
        moduli.push(iq);
    }
    if residues.is_empty() {
        return Ok(BigInt::zero());
    }
    crt_list(&residues, &moduli)
}

/// Given gcd(a, b) = 1 and m != 0, returns n0 with gcd(a + n0*b, m) = 1.
/// Deterministic: one excluded residue per prime divisor of m, CRT-combined.
pub fn coprime_shift(a: &BigInt, b: &BigInt, m: &BigInt) -> Result<BigInt> {
    if !gcd(a, b).is_one() {
        return Err(Error::PreconditionViolated(format!(
            "coprime_shift needs gcd(a, b) = 1, got gcd({a}, {b}) = {}",
            gcd(a, b)
        )));
    }
    if m.is_zero() {
        return Err(Error::PreconditionViolated(
            "coprime_shift needs m != 0".into(),
        ));
    }
    progression_coprime(a, b, m)
}

fn require_proper(target: &Ideal, what: &str) -> Result<()> {
    if !target.is_proper() {
        return Err(Error::PreconditionViolated(format!(
            "{what} needs a target modulus >= 2, got {}",
            target.modulus()
        )));
    }
    Ok(())
}

/// Head shift for a unital vector: adds a combination of the tail entries to
/// the head so that the result is a unit modulo `target`. If the head is
/// already a unit the witness carries zero coefficients.
pub fn usc_shift(entries: &UnitalVector, target: &Ideal) -> Result<ShiftWitness> {
    require_proper(target, "usc_shift")?;
    if entries.len() < 2 {
        return Err(Error::BadLength(
            "usc_shift needs at least two entries".into(),
        ));
    }
    let e = entries.entries();
    if is_unit_mod(&e[0], target) {
        return Ok(ShiftWitness {
            coefficients: vec![BigInt::zero(); e.len() - 1],
            result: e[0].clone(),
            modulus: target.clone(),
        });
    }
    // Extract d in the ideal generated by the tail with gcd(head, d) = 1,
    // keeping Bezout coefficients: d = sum(u_j * e_j).
    let mut d = e[1].clone();
    let mut u = vec![BigInt::one()];
    for entry in &e[2..] {
        let (g, x, y) = egcd(&d, entry);
        for c in &mut u {
            *c *= &x;
        }
        u.push(y);
        d = g;
    }
    debug_assert!(gcd(&e[0], &d).is_one());
    let n0 = coprime_shift(&e[0], &d, target.modulus())?;
    let coefficients: Vec<BigInt> = u.into_iter().map(|c| c * &n0).collect();
    let result = &e[0] + n0 * d;
    debug_assert!(is_unit_mod(&result, target));
    Ok(ShiftWitness {
        coefficients,
        result,
        modulus: target.clone(),
    })
}

/// Head shift for a vector that is only unital modulo `target`: the target
/// generator is adjoined as an extra entry to recover a unital vector, the
/// head shift runs on the extension, and the adjoined component is dropped
/// (it only moves the result within its residue class).
pub fn usc_shift_mod(entries: &[BigInt], target: &Ideal) -> Result<ShiftWitness> {
    require_proper(target, "usc_shift_mod")?;
    if entries.is_empty() {
        return Err(Error::BadLength("usc_shift_mod needs entries".into()));
    }
    let g = gcd(&gcd_all(entries), target.modulus());
    if !g.is_one() {
        return Err(Error::PreconditionViolated(format!(
            "entries share the factor {g} with the modulus"
        )));
    }
    if is_unit_mod(&entries[0], target) {
        return Ok(ShiftWitness {
            coefficients: vec![BigInt::zero(); entries.len() - 1],
            result: entries[0].clone(),
            modulus: target.clone(),
        });
    }
    let mut extended = entries.to_vec();
    extended.push(target.modulus().clone());
    let w = usc_shift(&UnitalVector::new(extended)?, target)?;
    let mut coefficients = w.coefficients;
    let t_coeff = coefficients.pop().expect("extension coefficient");
    let result = w.result - t_coeff * target.modulus();
    debug_assert!(is_unit_mod(&result, target));
    Ok(ShiftWitness {
        coefficients,
        result,
        modulus: target.clone(),
    })
}

/// Perturbation t with t_i in idealZ such that gcd(x + t) = 1, for a vector
/// that is unital modulo the ideal and has at least one entry that is a unit
/// modulo it. Already-unital vectors get t = 0.
///
/// The construction fixes coefficients a with sum(a_i * x_i) in 1 + idealZ
/// (inverse of the first unit entry plus the co-unit remainder on the next
/// slot), then Bezout-splits the defect across those two coefficients.
pub fn cmh_perturb(entries: &[BigInt], ideal: &Ideal) -> Result<Vec<BigInt>> {
    require_proper(ideal, "cmh_perturb")?;
    if entries.len() < 2 {
        return Err(Error::BadLength(
            "cmh_perturb needs at least two entries".into(),
        ));
    }
    let g = gcd(&gcd_all(entries), ideal.modulus());
    if !g.is_one() {
        return Err(Error::PreconditionViolated(format!(
            "entries share the factor {g} with the modulus"
        )));
    }
    if is_unital(entries) {
        return Ok(vec![BigInt::zero(); entries.len()]);
    }
    let i0 = entries
        .iter()
        .position(|x| is_unit_mod(x, ideal))
        .ok_or_else(|| {
            Error::PreconditionViolated(
                "cmh_perturb needs an entry that is a unit mod the ideal".into(),
            )
        })?;
    let i1 = (0..entries.len()).find(|&j| j != i0).expect("second slot");

    let a = mod_inverse(&entries[i0], ideal)?;
    let co = BigInt::one() - &a * &entries[i0]; // in idealZ
    debug_assert!(ideal.contains(&co));

    // sum(a_i * x_i) = a*x_{i0} + co*x_{i1} = 1 - t with t in idealZ
    let combo = &a * &entries[i0] + &co * &entries[i1];
    let t = BigInt::one() - &combo;
    if !ideal.contains(&t) {
        return Err(Error::Internal(
            "perturbation defect left the ideal".into(),
        ));
    }

    // b with b_{i0}*a + b_{i1}*co = 1; gcd is 1 because a*x_{i0} + co = 1.
    let (g, b0, b1) = egcd(&a, &co);
    if !g.is_one() {
        return Err(Error::Internal("perturbation coefficients not coprime".into()));
    }
    let mut out = vec![BigInt::zero(); entries.len()];
    out[i0] = &t * b0;
    out[i1] = &t * b1;

    let shifted: Vec<BigInt> = entries.iter().zip(&out).map(|(x, d)| x + d).collect();
    if !is_unital(&shifted) {
        return Err(Error::Internal("perturbation failed to restore gcd 1".into()));
    }
    Ok(out)
}

/// Makes `row[pivot]` a unit modulo `target` by adding multiples of the
/// other entries whose coefficients all lie in `coeff_ideal`. Needs the row
/// unital modulo `target` and gcd(target, coeff_ideal) = 1. The unit ideal
/// as `coeff_ideal` means the coefficients are unconstrained.
pub fn bring_unit(
    row: &[BigInt],
    pivot: usize,
    target: &Ideal,
    coeff_ideal: &Ideal,
) -> Result<ShiftWitness> {
    require_proper(target, "bring_unit")?;
    if coeff_ideal.is_zero() {
        return Err(Error::PreconditionViolated(
            "bring_unit rejects the zero coefficient ideal".into(),
        ));
    }
    if pivot >= row.len() {
        return Err(Error::OutOfRange(format!(
            "pivot {pivot} out of range for row of length {}",
            row.len()
        )));
    }
    if !gcd(target.modulus(), coeff_ideal.modulus()).is_one() {
        return Err(Error::PreconditionViolated(format!(
            "target {} and coefficient ideal {} are not coprime",
            target.modulus(),
            coeff_ideal.modulus()
        )));
    }
    let g = gcd(&gcd_all(row), target.modulus());
    if !g.is_one() {
        return Err(Error::PreconditionViolated(format!(
            "row shares the factor {g} with the target modulus"
        )));
    }
    if is_unit_mod(&row[pivot], target) {
        return Ok(ShiftWitness {
            coefficients: vec![BigInt::zero(); row.len() - 1],
            result: row[pivot].clone(),
            modulus: target.clone(),
        });
    }
    // Head shift on the pivot-first rearrangement, then scale every
    // coefficient by q2 = 1 - q1 with q1 in targetZ, q2 in coeffZ.
    let mut rearranged = vec![row[pivot].clone()];
    rearranged.extend(
        row.iter()
            .enumerate()
            .filter(|(j, _)| *j != pivot)
            .map(|(_, v)| v.clone()),
    );
    let w = usc_shift_mod(&rearranged, target)?;
    let (g, u, v) = egcd(target.modulus(), coeff_ideal.modulus());
    debug_assert!(g.is_one());
    let q2 = v * coeff_ideal.modulus();
    debug_assert!(ideal_one_minus_in(&q2, target));
    let _ = u;
    let joint = target.modulus() * coeff_ideal.modulus();
    let coefficients: Vec<BigInt> = w
        .coefficients
        .iter()
        .map(|y| (y * &q2).mod_floor(&joint))
        .collect();
    let mut result = row[pivot].clone();
    let mut k = 0;
    for (j, e) in row.iter().enumerate() {
        if j == pivot {
            continue;
        }
        result += &coefficients[k] * e;
        k += 1;
    }
    if !is_unit_mod(&result, target) {
        return Err(Error::Internal("bring_unit left a non-unit pivot".into()));
    }
    debug_assert!(coefficients.iter().all(|c| coeff_ideal.contains(c)));
    Ok(ShiftWitness {
        coefficients,
        result,
        modulus: target.clone(),
    })
}

fn ideal_one_minus_in(q2: &BigInt, target: &Ideal) -> bool {
    target.contains(&(BigInt::one() - q2))
}

/// Diagonal correction: given values a_i that are units modulo pairwise
/// coprime moduli n_i, returns d with d_i = a_i mod n_i and
/// prod(d_i) = 1 mod prod(n_i). Unit-ideal slots are free and absorb the
/// inverse factors; with a single proper modulus the first free slot takes
/// the inverse, and with none the answer is all ones.
pub fn diag_det_one(values: &[BigInt], moduli: &[Ideal]) -> Result<Vec<BigInt>> {
    if values.is_empty() || values.len() != moduli.len() {
        return Err(Error::BadLength(format!(
            "diag_det_one needs matching nonempty lists, got {} values and {} moduli",
            values.len(),
            moduli.len()
        )));
    }
    if moduli.iter().any(|m| m.is_zero()) {
        return Err(Error::OutOfRange("diag_det_one rejects the zero ideal".into()));
    }
    if !Ideal::pairwise_coprime(moduli) {
        return Err(Error::NonCoprimeModuli("diag_det_one moduli".into()));
    }
    for (a, n) in values.iter().zip(moduli) {
        if !is_unit_mod(a, n) {
            return Err(Error::NotAUnit(format!(
                "{a} is not a unit modulo {}",
                n.modulus()
            )));
        }
    }
    let proper: Vec<usize> = (0..moduli.len()).filter(|&i| moduli[i].is_proper()).collect();
    let mut d = vec![BigInt::one(); values.len()];
    match proper.len() {
        0 => {}
        1 => {
            let i = proper[0];
            if let Some(free) = (0..moduli.len()).find(|&j| j != i) {
                d[i] = moduli[i].reduce(&values[i]);
                d[free] = mod_inverse(&values[i], &moduli[i])?;
            } else {
                // single slot: feasible only when the value is already 1
                if !moduli[i].contains(&(&values[i] - BigInt::one())) {
                    return Err(Error::PreconditionViolated(format!(
                        "single-slot correction needs value = 1 mod {}",
                        moduli[i].modulus()
                    )));
                }
            }
        }
        _ => {
            let sub_moduli: Vec<Ideal> = proper.iter().map(|&i| moduli[i].clone()).collect();
            let inv: Vec<BigInt> = proper
                .iter()
                .map(|&i| mod_inverse(&values[i], &moduli[i]))
                .collect::<Result<_>>()?;
            for (slot, &i) in proper.iter().enumerate() {
                let residues: Vec<BigInt> = proper
                    .iter()
                    .enumerate()
                    .map(|(other, &j)| match (slot, other) {
                        _ if slot == other => values[j].clone(),
                        (0, _) => inv[other].clone(),
                        (1, 0) => inv[0].clone(),
                        _ => BigInt::one(),
                    })
                    .collect();
                d[i] = crt_list(&residues, &sub_moduli)?;
            }
        }
    }
    let product_ideal = Ideal::product(moduli);
    let prod = d.iter().fold(BigInt::one(), |acc, x| acc * x);
    if product_ideal.is_proper() && !product_ideal.contains(&(prod - BigInt::one())) {
        return Err(Error::Internal("diagonal product is not 1 mod the product".into()));
    }
    Ok(d)
}
