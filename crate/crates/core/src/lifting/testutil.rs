//! Shared generators for the lifting test suites: genuinely valid random
//! instances, built so that every sampled input satisfies the tested
//! operation's preconditions by construction.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::{embed_sl_pair_block, embed_symmetric_shear, ElementaryOp, IntMatrix};
use crate::unital::is_unital;

/// Random element of SL_k(Z) as a product of unit transvections.
pub(crate) fn random_sl(rng: &mut ChaCha8Rng, k: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(k);
    if k < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        while j == i {
            j = rng.gen_range(0..k);
        }
        let coeff = BigInt::from(rng.gen_range(-4i64..=4));
        let op = if rng.gen_bool(0.5) {
            ElementaryOp::AddMultipleOfRow { dst: i, src: j, coeff }
        } else {
            ElementaryOp::AddMultipleOfColumn { dst: i, src: j, coeff }
        };
        let e = op.materialize(k).unwrap();
        m = if rng.gen_bool(0.5) {
            m.mul(&e).unwrap()
        } else {
            e.mul(&m).unwrap()
        };
    }
    m
}

fn random_symmetric(rng: &mut ChaCha8Rng, k: usize) -> IntMatrix {
    let mut s = IntMatrix::zero(k, k);
    for i in 0..k {
        for j in i..k {
            let v = BigInt::from(rng.gen_range(-3i64..=3));
            *s.entry_mut(i, j) = v.clone();
            *s.entry_mut(j, i) = v;
        }
    }
    s
}

/// Random element of Sp_2k(Z) as a product of block generators: embedded
/// SL_k pairs and symmetric shears on either side.
pub(crate) fn random_sp(rng: &mut ChaCha8Rng, k: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(2 * k);
    for _ in 0..steps {
        let g = match rng.gen_range(0..3) {
            0 => embed_sl_pair_block(&random_sl(rng, k, 4)).unwrap(),
            1 => embed_symmetric_shear(&random_symmetric(rng, k), true).unwrap(),
            _ => embed_symmetric_shear(&random_symmetric(rng, k), false).unwrap(),
        };
        m = m.mul(&g).unwrap();
    }
    m
}

/// Rejection-samples a Z-unital row with entries in [-bound, bound].
pub(crate) fn random_unital_row(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<BigInt> {
    loop {
        let row: Vec<BigInt> = (0..len)
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect();
        if is_unital(&row) {
            return row;
        }
    }
}
