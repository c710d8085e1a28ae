//! Ring-level integer toolkit: extended gcd, CRT over coprime ideal lists,
//! bounded factorization, modular inverses and unit tests modulo n.
//!
//! Scalars are arbitrary-precision signed integers throughout. All residues
//! returned by this module are least nonnegative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Principal ideal nZ of the integers, n >= 1. The unit ideal (n = 1) is
/// allowed everywhere; the zero ideal is representable only through
/// [`Ideal::exact`] and is accepted only by the matrix congruence predicates,
/// where it means equality over Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal(BigInt);

impl Ideal {
    pub fn new(modulus: BigInt) -> Result<Self> {
        if modulus < BigInt::one() {
            return Err(Error::OutOfRange(format!(
                "ideal modulus must be >= 1, got {modulus}"
            )));
        }
        Ok(Ideal(modulus))
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Ideal::new(BigInt::from(n))
    }

    /// The unit ideal Z itself. Every congruence modulo it holds.
    pub fn unit() -> Self {
        Ideal(BigInt::one())
    }

    /// The zero ideal, standing for exact equality in congruence predicates.
    pub fn exact() -> Self {
        Ideal(BigInt::zero())
    }

    pub fn modulus(&self) -> &BigInt {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True when the modulus is >= 2, i.e. the ideal is proper and nonzero.
    pub fn is_proper(&self) -> bool {
        self.0 > BigInt::one()
    }

    /// Least nonnegative residue of `a`. The zero ideal reduces nothing.
    pub fn reduce(&self, a: &BigInt) -> BigInt {
        if self.0.is_zero() {
            a.clone()
        } else {
            a.mod_floor(&self.0)
        }
    }

    /// Membership a in nZ.
    pub fn contains(&self, a: &BigInt) -> bool {
        if self.0.is_zero() {
            a.is_zero()
        } else {
            a.mod_floor(&self.0).is_zero()
        }
    }

    pub fn product(ideals: &[Ideal]) -> Ideal {
        Ideal(ideals.iter().fold(BigInt::one(), |acc, i| acc * &i.0))
    }

    pub fn pairwise_coprime(ideals: &[Ideal]) -> bool {
        for (i, a) in ideals.iter().enumerate() {
            for b in &ideals[i + 1..] {
                if !gcd(&a.0, &b.0).is_one() {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Display for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}Z", self.0)
    }
}

/// gcd with the convention gcd(0, 0) = 0, always nonnegative.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// gcd of a whole slice; 0 for an empty slice.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g and g = gcd(a, b) >= 0.
/// gcd(0, 0) = (0, 0, 0).
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Simultaneous congruences x = residues[i] mod moduli[i] for pairwise
/// coprime moduli. Unit-ideal entries impose no constraint. The result is
/// the least nonnegative solution modulo the product of the moduli.
pub fn crt_list(residues: &[BigInt], moduli: &[Ideal]) -> Result<BigInt> {
    if residues.is_empty() || residues.len() != moduli.len() {
        return Err(Error::BadLength(format!(
            "crt_list needs matching nonempty lists, got {} residues and {} moduli",
            residues.len(),
            moduli.len()
        )));
    }
    if moduli.iter().any(|m| m.is_zero()) {
        return Err(Error::OutOfRange("crt_list rejects the zero ideal".into()));
    }
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, ideal) in residues.iter().zip(moduli) {
        let n = ideal.modulus();
        if n.is_one() {
            continue;
        }
        let (g, inv_m, _) = egcd(&m, n);
        if !g.is_one() {
            return Err(Error::NonCoprimeModuli(format!(
                "gcd({m}, {n}) = {g}"
            )));
        }
        // x_new = x + m * ((r - x) * m^-1 mod n)
        let diff = (r - &x).mod_floor(n);
        let step = (diff * inv_m).mod_floor(n);
        x += &m * step;
        m *= n;
    }
    Ok(x.mod_floor(&m))
}

/// Prime factorization as sorted (prime, exponent) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(BigInt, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.pairs.iter().map(|(p, _)| p)
    }

    /// Recompose the factored value.
    pub fn value(&self) -> BigInt {
        self.pairs
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn factorization_budget() -> BigInt {
    BigInt::one() << 96
}

/// Full prime factorization of m >= 2 with trial division below 10^6 and
/// Brent-cycle Pollard rho above it. Inputs beyond 2^96 are refused; within
/// the budget the rho stage always terminates on the worst (semiprime) case.
pub fn factorize(m: &BigInt) -> Result<Factorization> {
    if *m < BigInt::from(2) {
        return Err(Error::OutOfRange(format!("factorize needs m >= 2, got {m}")));
    }
    if *m > factorization_budget() {
        return Err(Error::FactorizationBudgetExceeded(format!(
            "{m} exceeds the 2^96 factorization budget"
        )));
    }
    let mut pairs: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = m.clone();

    let record = |p: BigInt, pairs: &mut Vec<(BigInt, u32)>| {
        if let Some(last) = pairs.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            pairs.push((p, 1));
        }
    };

    let mut d = BigInt::from(2u32);
    while &d * &d <= rest && d < BigInt::from(TRIAL_DIVISION_BOUND) {
        while (&rest % &d).is_zero() {
            record(d.clone(), &mut pairs);
            rest /= &d;
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }

    // Remaining cofactor has no prime factor below 10^6; split with rho.
    let mut stack = Vec::new();
    if rest > BigInt::one() {
        stack.push(rest);
    }
    while let Some(n) = stack.pop() {
        if is_prime(&n) {
            record(n, &mut pairs);
            continue;
        }
        let f = pollard_rho_brent(&n);
        let q = &n / &f;
        stack.push(f);
        stack.push(q);
    }

    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { pairs })
}

/// Brent's variant of Pollard rho. `n` must be composite and odd-ish (no
/// factor below the trial-division bound), which guarantees a split exists.
fn pollard_rho_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    if n.is_even() {
        return BigInt::from(2u32);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut y = BigInt::from(2u32);
        let (mut q, mut g) = (BigInt::one(), BigInt::one());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut r: u64 = 1;
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()).mod_floor(n);
                }
                g = gcd(&q, n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            // Batch overshot; replay one step at a time.
            g = BigInt::one();
            while g.is_one() {
                ys = f(&ys);
                g = gcd(&(&x - &ys).abs(), n);
            }
        }
        if g != *n && g > one {
            return g;
        }
        c += 1u32; // rare: retry with a new polynomial
    }
}

/// Primality: deterministic Miller-Rabin for inputs below 2^64, BPSW above.
/// BPSW has no known pseudoprimes; the factorization budget keeps inputs
/// far below any plausible counterexample range.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    // The 12-base set below is deterministic for all n < 3.3 * 10^24 > 2^64.
    let bases: &[u32] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if !miller_rabin(n, bases) {
        return false;
    }
    if n.bits() <= 64 {
        return true;
    }
    strong_lucas_prp(n)
}

fn miller_rabin(n: &BigInt, bases: &[u32]) -> bool {
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'outer: for &b in bases {
        let b = BigInt::from(b);
        if b >= *n {
            continue;
        }
        let mut x = b.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas_prp(n: &BigInt) -> bool {
    // Find D = 5, -7, 9, -11, ... with jacobi(D, n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            0 => return d.abs() != *n, // shares a factor with n
            -1 => break,
            _ => {}
        }
        d = if d.is_positive() {
            -(&d + BigInt::from(2))
        } else {
            -(&d - BigInt::from(2))
        };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / BigInt::from(4);

    // n + 1 = k * 2^s with k odd
    let n_plus_1 = n + BigInt::one();
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Lucas sequences U_k, V_k by binary ladder.
    let (mut u, mut v) = (BigInt::zero(), BigInt::from(2u32));
    let mut qk = BigInt::one();
    let bits = k.bits();
    for i in (0..bits).rev() {
        // double: (U, V)_{2m}
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            // increment: (U, V)_{2m+1}
            let u_new = (&p * &u + &v) * inverse_of_two(n);
            let v_new = (&d * &u + &p * &v) * inverse_of_two(n);
            u = u_new.mod_floor(n);
            v = v_new.mod_floor(n);
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 0..s.saturating_sub(1) {
        v = (&v * &v - BigInt::from(2) * &qk).mod_floor(n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(n);
    }
    false
}

fn inverse_of_two(n: &BigInt) -> BigInt {
    // n odd here, so (n + 1) / 2 inverts 2 modulo n.
    (n + BigInt::one()) / 2
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8u32).to_u32_digits().1.first().copied().unwrap_or(0);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Inverse of a modulo a proper ideal n >= 2, as a least nonnegative residue.
pub fn mod_inverse(a: &BigInt, n: &Ideal) -> Result<BigInt> {
    if !n.is_proper() {
        return Err(Error::PreconditionViolated(format!(
            "mod_inverse needs modulus >= 2, got {}",
            n.modulus()
        )));
    }
    let (g, x, _) = egcd(a, n.modulus());
    if !g.is_one() {
        return Err(Error::NotAUnit(format!(
            "{a} has gcd {g} with modulus {}",
            n.modulus()
        )));
    }
    Ok(x.mod_floor(n.modulus()))
}

/// gcd(a, n) = 1. Everything is a unit modulo the unit ideal.
pub fn is_unit_mod(a: &BigInt, n: &Ideal) -> bool {
    if n.is_unit() {
        return true;
    }
    gcd(a, n.modulus()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn egcd_examples() {
        // pinned witness used by downstream shift constructions
        assert_eq!(egcd(&big(6), &big(35)), (big(1), big(6), big(-1)));
        assert_eq!(egcd(&big(0), &big(0)), (big(0), big(0), big(0)));
        assert_eq!(egcd(&big(-4), &big(6)), (big(2), big(1), big(1)));
        // sign convention exercised by the perturbation construction
        assert_eq!(egcd(&big(7), &big(-27)), (big(1), big(4), big(1)));
    }

    #[test]
    fn egcd_identity_holds_on_grid() {
        for a in -40i64..=40 {
            for b in -40i64..=40 {
                let (g, x, y) = egcd(&big(a), &big(b));
                assert_eq!(&big(a) * &x + &big(b) * &y, g, "a={a} b={b}");
                // Euclid oracle
                let mut p = a.unsigned_abs();
                let mut q = b.unsigned_abs();
                while q != 0 {
                    let r = p % q;
                    p = q;
                    q = r;
                }
                assert_eq!(g, BigInt::from(p));
            }
        }
    }

    #[test]
    fn crt_examples() {
        let m = |v: &[i64]| -> Vec<Ideal> {
            v.iter().map(|&x| Ideal::new(big(x)).unwrap()).collect()
        };
        assert_eq!(
            crt_list(&[big(2), big(3)], &m(&[3, 5])).unwrap(),
            big(8)
        );
        assert_eq!(
            crt_list(&[big(1), big(2), big(3)], &m(&[2, 3, 5])).unwrap(),
            big(23)
        );
        // unit ideal imposes nothing
        assert_eq!(crt_list(&[big(7), big(2)], &m(&[1, 5])).unwrap(), big(2));
        assert!(matches!(
            crt_list(&[big(1), big(1)], &m(&[4, 6])),
            Err(Error::NonCoprimeModuli(_))
        ));
    }

    #[test]
    fn crt_matches_exhaustive_scan() {
        // oracle: scan 0..product for small coprime triples
        let cases: &[&[i64]] = &[&[3, 5], &[4, 9], &[5, 7, 8], &[2, 3, 5, 7]];
        for moduli in cases {
            let ideals: Vec<Ideal> = moduli.iter().map(|&x| Ideal::new(big(x)).unwrap()).collect();
            let product: i64 = moduli.iter().product();
            for seed in [0i64, 1, 17, product - 1] {
                let residues: Vec<BigInt> =
                    moduli.iter().map(|&m| big(seed.rem_euclid(m))).collect();
                let got = crt_list(&residues, &ideals).unwrap();
                let mut expect = None;
                for x in 0..product {
                    if moduli
                        .iter()
                        .zip(&residues)
                        .all(|(&m, r)| big(x).mod_floor(&big(m)) == *r)
                    {
                        expect = Some(big(x));
                        break;
                    }
                }
                assert_eq!(Some(got), expect, "moduli {moduli:?} seed {seed}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&big(360)).unwrap();
        assert_eq!(
            f.pairs(),
            &[(big(2), 3u32), (big(3), 2), (big(5), 1)]
        );
        assert_eq!(f.value(), big(360));

        let f = factorize(&big(1321)).unwrap();
        assert_eq!(f.pairs(), &[(big(1321), 1)]);

        assert!(matches!(factorize(&big(1)), Err(Error::OutOfRange(_))));
        assert!(matches!(factorize(&big(0)), Err(Error::OutOfRange(_))));

        let too_big = BigInt::one() << 97;
        assert!(matches!(
            factorize(&too_big),
            Err(Error::FactorizationBudgetExceeded(_))
        ));
    }

    #[test]
    fn factorize_recomposes_and_lists_primes() {
        for n in (2i64..500).chain([720, 1024, 9991, 123456, 600851475143]) {
            let f = factorize(&big(n)).unwrap();
            assert_eq!(f.value(), big(n), "recompose {n}");
            for p in f.primes() {
                assert!(is_prime(p), "claimed prime {p} of {n}");
            }
        }
    }

    #[test]
    fn factorize_splits_semiprime_beyond_trial_division() {
        // both factors above the 10^6 trial bound, forces the rho stage
        let p = big(1_000_003);
        let q = big(1_000_033);
        let f = factorize(&(&p * &q)).unwrap();
        assert_eq!(f.pairs(), &[(p, 1u32), (q, 1)]);
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let mut sieve = vec![true; 2000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..2000usize {
            if sieve[i] {
                for j in (i * i..2000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &expect) in sieve.iter().enumerate() {
            assert_eq!(is_prime(&big(i as i64)), expect, "n={i}");
        }
    }

    #[test]
    fn primality_large_inputs() {
        assert!(is_prime(&big(1201)));
        assert!(is_prime(&big(1321)));
        assert!(is_prime(&BigInt::from(2u128.pow(61) - 1))); // Mersenne
        // BPSW path: above 64 bits
        let p65: BigInt = (BigInt::one() << 89) - 1; // 2^89-1 is prime
        assert!(is_prime(&p65));
        let c65: BigInt = (BigInt::one() << 89) + 1; // composite
        assert!(!is_prime(&c65));
    }

    #[test]
    fn mod_inverse_examples() {
        let n = Ideal::new(big(35)).unwrap();
        assert_eq!(mod_inverse(&big(6), &n).unwrap(), big(6));
        assert!(matches!(
            mod_inverse(&big(14), &n),
            Err(Error::NotAUnit(_))
        ));
        let n5 = Ideal::new(big(5)).unwrap();
        assert_eq!(mod_inverse(&big(-1), &n5).unwrap(), big(4));
    }

    #[test]
    fn unit_predicate() {
        let n = Ideal::new(big(12)).unwrap();
        assert!(is_unit_mod(&big(5), &n));
        assert!(!is_unit_mod(&big(8), &n));
        assert!(is_unit_mod(&big(0), &Ideal::unit()));
    }

    #[test]
    fn ideal_contracts() {
        assert!(Ideal::new(big(0)).is_err());
        assert!(Ideal::new(big(-3)).is_err());
        let i = Ideal::new(big(7)).unwrap();
        assert_eq!(i.reduce(&big(-1)), big(6));
        assert!(i.contains(&big(-14)));
        assert!(Ideal::exact().is_zero());
        assert!(Ideal::unit().is_unit());
        assert!(Ideal::pairwise_coprime(&[
            Ideal::from_u64(3).unwrap(),
            Ideal::from_u64(5).unwrap(),
            Ideal::from_u64(7).unwrap()
        ]));
        assert!(!Ideal::pairwise_coprime(&[
            Ideal::from_u64(6).unwrap(),
            Ideal::from_u64(10).unwrap()
        ]));
    }
}
