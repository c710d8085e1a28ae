//! Weighted projective classes over Z/nZ: tuples with unit content modulo
//! the scaling a_i -> lambda^{m_i} a_i by units lambda of Z/nZ. Provides
//! the equivalence test with an explicit scaling witness, lexicographic
//! canonical forms, full orbit enumeration at desk scale, the reduction map
//! to coprime factors, and its inverse, a CRT lift that glues classes over
//! coprime moduli into one class over the product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{crt_list, factorize, gcd, is_prime, mod_inverse, Ideal};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::unital::{cmh_perturb, is_unital, usc_shift_mod, UnitalVector};

/// Scaling exponents (m_0,...,m_l), every one >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights(Vec<u32>);

impl Weights {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::BadLength("weights must be nonempty".into()));
        }
        if exponents.iter().any(|&m| m == 0) {
            return Err(Error::OutOfRange("weights must be >= 1".into()));
        }
        Ok(Weights(exponents))
    }

    pub fn uniform(len: usize, m: u32) -> Result<Self> {
        Weights::new(vec![m; len])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A representative of a weighted projective class: integer coordinates
/// with gcd 1, a modulus, and one scaling exponent per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    coords: UnitalVector,
    ideal: Ideal,
    weights: Weights,
}

impl ProjPoint {
    pub fn new(coords: Vec<BigInt>, ideal: Ideal, weights: Weights) -> Result<Self> {
        if ideal.is_zero() {
            return Err(Error::OutOfRange(
                "projective points need a nonzero modulus".into(),
            ));
        }
        if coords.len() != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates against {} weights",
                coords.len(),
                weights.len()
            )));
        }
        Ok(ProjPoint {
            coords: UnitalVector::new(coords)?,
            ideal,
            weights,
        })
    }

    pub fn coords(&self) -> &[BigInt] {
        self.coords.entries()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false // coords are nonempty by construction
    }

    pub fn reduced_coords(&self) -> Vec<BigInt> {
        self.coords()
            .iter()
            .map(|c| self.ideal.reduce(c))
            .collect()
    }
}

/// Orbit partition of the unital tuples of (Z/n)^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    modulus: Ideal,
    weights: Weights,
    classes: Vec<(Vec<BigInt>, u64)>,
}

impl ClassTable {
    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// (canonical representative, class size), ordered by representative.
    pub fn classes(&self) -> &[(Vec<BigInt>, u64)] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total_points(&self) -> u64 {
        self.classes.iter().map(|(_, s)| s).sum()
    }
}

/// Full unit scans are allowed up to this modulus; beyond it only prime
/// moduli are supported (via powers of a primitive root).
const FULL_SCAN_LIMIT: u64 = 10_000;

enum UnitScan {
    Full { n: BigInt, next: BigInt },
    Powers { n: BigInt, g: BigInt, cur: BigInt, remaining: BigInt },
}

impl Iterator for UnitScan {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        match self {
            UnitScan::Full { n, next } => {
                while &*next < n {
                    let cand = next.clone();
                    *next += 1;
                    if gcd(&cand, n).is_one() {
                        return Some(cand);
                    }
                }
                None
            }
            UnitScan::Powers { n, g, cur, remaining } => {
                if remaining.is_zero() {
                    return None;
                }
                *remaining -= 1;
                let out = cur.clone();
                *cur = (&*cur * &*g).mod_floor(n);
                Some(out)
            }
        }
    }
}

/// Iterate the units of Z/n in a deterministic order: ascending when
/// n <= 10^4, otherwise powers of the least primitive root (prime n only).
fn unit_scan(n: &Ideal) -> Result<UnitScan> {
    let m = n.modulus();
    if m.to_u64().map(|v| v <= FULL_SCAN_LIMIT).unwrap_or(false) {
        return Ok(UnitScan::Full {
            n: m.clone(),
            next: BigInt::one(),
        });
    }
    if !is_prime(m) {
        return Err(Error::BudgetExceeded(format!(
            "unit scans modulo composite {m} > {FULL_SCAN_LIMIT} are not supported"
        )));
    }
    let g = least_primitive_root(m)?;
    Ok(UnitScan::Powers {
        n: m.clone(),
        g,
        cur: BigInt::one(),
        remaining: m - BigInt::one(),
    })
}

fn least_primitive_root(p: &BigInt) -> Result<BigInt> {
    let phi = p - BigInt::one();
    let prime_factors: Vec<BigInt> = factorize(&phi)?.primes().cloned().collect();
    let mut g = BigInt::from(2);
    while &g < p {
        if prime_factors
            .iter()
            .all(|q| !g.modpow(&(&phi / q), p).is_one())
        {
            return Ok(g);
        }
        g += 1;
    }
    Err(Error::Internal(format!("no primitive root modulo {p}")))
}

/// lambda applied to a reduced tuple: (lambda^{m_i} * a_i mod n).
fn scaled_tuple(a: &[BigInt], lambda: &BigInt, weights: &Weights, n: &BigInt) -> Vec<BigInt> {
    a.iter()
        .zip(weights.exponents())
        .map(|(ai, &m)| (ai * lambda.modpow(&BigInt::from(m), n)).mod_floor(n))
        .collect()
}

fn same_shape(a: &ProjPoint, b: &ProjPoint) -> Result<()> {
    if a.ideal != b.ideal || a.weights != b.weights || a.len() != b.len() {
        return Err(Error::ShapeMismatch(
            "points must share modulus, weights and length".into(),
        ));
    }
    Ok(())
}

/// Decides whether b lies in the weighted orbit of a, returning the scaling
/// witness: the first unit lambda in scan order with
/// b_i = lambda^{m_i} * a_i mod n for every i. The unit ideal gives (true, 1).
pub fn equivalent_points(a: &ProjPoint, b: &ProjPoint) -> Result<(bool, Option<BigInt>)> {
    same_shape(a, b)?;
    let n = &a.ideal;
    if n.is_unit() {
        return Ok((true, Some(BigInt::one())));
    }
    let ar = a.reduced_coords();
    let br = b.reduced_coords();
    for lambda in unit_scan(n)? {
        if scaled_tuple(&ar, &lambda, &a.weights, n.modulus()) == br {
            return Ok((true, Some(lambda)));
        }
    }
    Ok((false, None))
}

fn canonical_of_raw(coords: &[BigInt], n: &Ideal, weights: &Weights) -> Result<Vec<BigInt>> {
    if n.is_unit() {
        return Ok(vec![BigInt::zero(); coords.len()]);
    }
    let reduced: Vec<BigInt> = coords.iter().map(|c| n.reduce(c)).collect();
    let mut best: Option<Vec<BigInt>> = None;
    for lambda in unit_scan(n)? {
        let cand = scaled_tuple(&reduced, &lambda, weights, n.modulus());
        if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
            best = Some(cand);
        }
    }
    Ok(best.expect("unit scan yields at least lambda = 1"))
}

/// The lexicographically least tuple in [0, n)^d equivalent to p: equal for
/// equivalent points, distinct otherwise.
pub fn canonical_form(p: &ProjPoint) -> Result<Vec<BigInt>> {
    canonical_of_raw(p.coords(), &p.ideal, &p.weights)
}

/// Size limits for class enumeration: modulus, tuple dimension, and total
/// tuple count (the bitmap over (Z/n)^d).
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBudget {
    pub max_modulus: u64,
    pub max_dim: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_modulus: 101,
            max_dim: 4,
        }
    }
}

const MAX_ENUMERATION_TUPLES: u64 = 1 << 28;

struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: u64) -> BitSet {
        BitSet(vec![0; ((len + 63) / 64) as usize])
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pow_mod_u64(mut base: u64, mut exp: u32, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        exp >>= 1;
    }
    acc
}

/// Partitions the unital tuples of (Z/n)^d into weighted orbits under the
/// default desk-scale budget (n <= 101, d <= 4). Classes are listed by
/// ascending canonical representative.
pub fn enumerate_classes(n: &Ideal, weights: &Weights) -> Result<ClassTable> {
    enumerate_classes_with_budget(n, weights, EnumerationBudget::default())
}

/// As enumerate_classes with an explicit budget. The modulus must stay
/// below 2^31 regardless of the budget so the orbit arithmetic cannot
/// overflow, and the tuple count below 2^28 to bound the bitmap.
pub fn enumerate_classes_with_budget(
    n: &Ideal,
    weights: &Weights,
    budget: EnumerationBudget,
) -> Result<ClassTable> {
    if !n.is_proper() {
        return Err(Error::PreconditionViolated(
            "class enumeration needs a modulus >= 2".into(),
        ));
    }
    let n_u = n
        .modulus()
        .to_u64()
        .filter(|&v| v < (1 << 31))
        .ok_or_else(|| Error::BudgetExceeded("modulus too large to enumerate".into()))?;
    if n_u > budget.max_modulus {
        return Err(Error::BudgetExceeded(format!(
            "modulus {n_u} exceeds the enumeration budget {}",
            budget.max_modulus
        )));
    }
    let d = weights.len();
    if d > budget.max_dim {
        return Err(Error::BudgetExceeded(format!(
            "dimension {d} exceeds the enumeration budget {}",
            budget.max_dim
        )));
    }
    let total = n_u
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_ENUMERATION_TUPLES)
        .ok_or_else(|| Error::BudgetExceeded("tuple space too large".into()))?;

    let units: Vec<u64> = (1..n_u).filter(|&l| gcd_u64(l, n_u) == 1).collect();
    // one row per unit: lambda^{m_i} mod n for each coordinate slot
    let pow_rows: Vec<Vec<u64>> = units
        .iter()
        .map(|&l| {
            weights
                .exponents()
                .iter()
                .map(|&m| pow_mod_u64(l, m, n_u))
                .collect()
        })
        .collect();

    let mut seen = BitSet::new(total);
    let mut classes: Vec<(Vec<BigInt>, u64)> = Vec::new();
    let mut digits = vec![0u64; d]; // big-endian: digits[0] is coordinate 0
    for idx in 0..total {
        if !seen.get(idx) {
            let mut g = n_u;
            for &x in &digits {
                g = gcd_u64(g, x);
            }
            if g == 1 {
                // ascending scan: the first unseen member is the orbit's
                // lexicographic minimum, so it is the canonical form
                let mut members: Vec<u64> = pow_rows
                    .iter()
                    .map(|pows| {
                        digits
                            .iter()
                            .zip(pows)
                            .fold(0u64, |acc, (&x, &p)| acc * n_u + p * x % n_u)
                    })
                    .collect();
                members.sort_unstable();
                members.dedup();
                for &mem in &members {
                    seen.set(mem);
                }
                classes.push((
                    digits.iter().map(|&x| BigInt::from(x)).collect(),
                    members.len() as u64,
                ));
            }
        }
        // odometer increment, most significant digit first
        for slot in (0..d).rev() {
            digits[slot] += 1;
            if digits[slot] < n_u {
                break;
            }
            digits[slot] = 0;
        }
    }
    Ok(ClassTable {
        modulus: n.clone(),
        weights: weights.clone(),
        classes,
    })
}

/// A vector congruent to v modulo f with gcd exactly 1, given that v is
/// unital modulo f. Entries other than the head move only by 0 or f.
fn unital_rep_mod(mut v: Vec<BigInt>, f: &Ideal) -> Result<Vec<BigInt>> {
    if is_unital(&v) {
        return Ok(v);
    }
    let tail_gcd = v[1..]
        .iter()
        .fold(BigInt::zero(), |acc, x| gcd(&acc, x));
    if tail_gcd.is_zero() {
        // tail is all zero, so the head is a unit mod f; one f in the tail
        // makes the pair coprime
        v[1] = f.modulus().clone();
    } else {
        let k = crate::unital::progression_coprime(&v[0], f.modulus(), &tail_gcd)?;
        v[0] += k * f.modulus();
    }
    if !is_unital(&v) {
        return Err(Error::Internal("representative fixup failed".into()));
    }
    Ok(v)
}

/// Componentwise reduction of a class to pairwise coprime factors of its
/// modulus. Representatives are entrywise least residues, patched inside
/// the residue class when the raw residues share a common factor.
pub fn reduce_projective(p: &ProjPoint, factors: &[Ideal]) -> Result<Vec<ProjPoint>> {
    if factors.is_empty() {
        return Err(Error::BadFactorization("no factors given".into()));
    }
    if factors.iter().any(|f| f.is_zero()) {
        return Err(Error::BadFactorization("zero ideal among factors".into()));
    }
    if !Ideal::pairwise_coprime(factors) {
        return Err(Error::BadFactorization(
            "factors are not pairwise coprime".into(),
        ));
    }
    if Ideal::product(factors).modulus() != p.ideal.modulus() {
        return Err(Error::BadFactorization(format!(
            "factor product does not equal the modulus {}",
            p.ideal.modulus()
        )));
    }
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let coords = if p.len() == 1 || f.is_unit() {
            p.coords().to_vec() // already unital; any representative works mod 1
        } else {
            unital_rep_mod(p.coords().iter().map(|c| f.reduce(c)).collect(), f)?
        };
        out.push(ProjPoint::new(coords, f.clone(), p.weights.clone())?);
    }
    Ok(out)
}

/// Glues one class per coprime modulus into a single class modulo the
/// product (unit moduli are dropped first). The output reduces back to
/// inputs' classes exactly; this is verified internally before returning.
pub fn crt_lift_projective(points: &[ProjPoint]) -> Result<ProjPoint> {
    if points.is_empty() {
        return Err(Error::ShapeMismatch("no points given".into()));
    }
    for q in &points[1..] {
        if q.weights != points[0].weights || q.len() != points[0].len() {
            return Err(Error::ShapeMismatch(
                "points must share weights and length".into(),
            ));
        }
    }
    let moduli: Vec<Ideal> = points.iter().map(|p| p.ideal.clone()).collect();
    if !Ideal::pairwise_coprime(&moduli) {
        return Err(Error::NonCoprimeModuli("projective lift moduli".into()));
    }
    let proper: Vec<&ProjPoint> = points.iter().filter(|p| p.ideal.is_proper()).collect();
    match proper.len() {
        0 => return Ok(points[0].clone()),
        1 => return Ok(proper[0].clone()),
        _ => {}
    }
    if points[0].len() < 2 {
        // with a single coordinate the only integral representatives are
        // +-1, and two classes over coprime moduli need not share one
        return Err(Error::PreconditionViolated(
            "lifting needs at least two coordinates".into(),
        ));
    }
    let mut acc = proper.last().copied().unwrap().clone();
    for p in proper.iter().rev().skip(1) {
        acc = combine_pair(p, &acc)?;
    }
    for p in &proper {
        let back = reduce_projective(&acc, &split_off(&acc.ideal, &p.ideal)?)?;
        let (ok, _) = equivalent_points(&back[0], p)?;
        if !ok {
            return Err(Error::Internal(
                "projective lift failed its reduction check".into(),
            ));
        }
    }
    Ok(acc)
}

/// [f, n/f] as ideals, for f dividing n.
fn split_off(n: &Ideal, f: &Ideal) -> Result<Vec<Ideal>> {
    let (q, r) = n.modulus().div_rem(f.modulus());
    if !r.is_zero() {
        return Err(Error::Internal("factor does not divide the modulus".into()));
    }
    Ok(vec![f.clone(), Ideal::new(q)?])
}

/// One induction step: the class of p modulo n1 and the class of q modulo
/// n2 merge into a class modulo n1*n2. Tracked column operations make p's
/// head a unit modulo n1 and its tail divisible by n1; entrywise CRT then
/// agrees with both rows, a perturbation restores gcd 1 over Z, and the
/// recorded operations are undone by one exact inverse.
fn combine_pair(p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
    let d = p.len();
    let n1 = &p.ideal;
    let n2 = &q.ideal;
    let mut a = p.reduced_coords();
    let mut b = q.reduced_coords();
    let mut r_acc = IntMatrix::identity(d);

    // col_0 += sum coeffs[j] * col_{j+1}, applied to both rows and recorded
    fn head_shift(
        a: &mut [BigInt],
        b: &mut [BigInt],
        coeffs: &[BigInt],
        r_acc: &mut IntMatrix,
    ) -> Result<()> {
        let mut op = IntMatrix::identity(a.len());
        for (j, c) in coeffs.iter().enumerate() {
            *op.entry_mut(j + 1, 0) = c.clone();
            a[0] = &a[0] + c * &a[j + 1];
            b[0] = &b[0] + c * &b[j + 1];
        }
        *r_acc = r_acc.mul(&op)?;
        Ok(())
    }

    // head of a becomes a unit mod n1
    let w = usc_shift_mod(&a, n1)?;
    head_shift(&mut a, &mut b, &w.coefficients, &mut r_acc)?;

    // clear a's tail mod n1: col_j += -(z a_j) col_0
    let z = mod_inverse(&a[0], n1)?;
    let mut op = IntMatrix::identity(d);
    for j in 1..d {
        let c = n1.reduce(&(-(&z * &a[j])));
        if !c.is_zero() {
            *op.entry_mut(0, j) = c.clone();
            a[j] = &a[j] + &c * &a[0];
            b[j] = &b[j] + &c * &b[0];
        }
    }
    r_acc = r_acc.mul(&op)?;
    debug_assert!(a[1..].iter().all(|x| n1.contains(x)));

    // head of b becomes a unit mod n2; a's tail is 0 mod n1, so a's head
    // keeps its residue there
    let w = usc_shift_mod(&b, n2)?;
    head_shift(&mut a, &mut b, &w.coefficients, &mut r_acc)?;

    // entrywise CRT: x = a mod n1 (tail entries are 0 there), x = b mod n2
    let pair = [n1.clone(), n2.clone()];
    let mut x = Vec::with_capacity(d);
    x.push(crt_list(&[a[0].clone(), b[0].clone()], &pair)?);
    for j in 1..d {
        x.push(crt_list(&[BigInt::zero(), b[j].clone()], &pair)?);
    }

    // restore gcd 1 over Z without moving the class mod n1*n2
    let joint = Ideal::product(&pair);
    let t = cmh_perturb(&x, &joint)?;
    let y: Vec<BigInt> = x.iter().zip(&t).map(|(xi, ti)| xi + ti).collect();

    // undo the recorded column operations
    let r_inv = r_acc.inverse_unimodular()?;
    let out = IntMatrix::new(1, d, y)?.mul(&r_inv)?;
    ProjPoint::new(out.row_slice(0).to_vec(), joint, p.weights.clone())
}

/// Enumerates classes modulo n and modulo every proper factor, then checks
/// the reduction map is a bijection: counts multiply exactly and reduction
/// tuples of canonical forms never collide.
pub fn crt_bijectivity_check(n: &Ideal, factors: &[Ideal], weights: &Weights) -> Result<bool> {
    if factors.is_empty()
        || factors.iter().any(|f| f.is_zero())
        || !Ideal::pairwise_coprime(factors)
        || Ideal::product(factors).modulus() != n.modulus()
    {
        return Err(Error::BadFactorization(
            "factors must be pairwise coprime with product n".into(),
        ));
    }
    let table = enumerate_classes(n, weights)?;
    let proper: Vec<&Ideal> = factors.iter().filter(|f| f.is_proper()).collect();
    let mut product = 1u64;
    let mut factor_tables = Vec::new();
    for f in &proper {
        let t = enumerate_classes(f, weights)?;
        product = product.saturating_mul(t.class_count() as u64);
        factor_tables.push(t);
    }
    if product != table.class_count() as u64 {
        return Ok(false);
    }
    let mut images: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(table.class_count());
    for (rep, _) in table.classes() {
        let mut image = Vec::with_capacity(proper.len());
        for f in &proper {
            image.push(canonical_of_raw(rep, f, weights)?);
        }
        images.push(image);
    }
    images.sort();
    let before = images.len();
    images.dedup();
    Ok(images.len() == before)
}
