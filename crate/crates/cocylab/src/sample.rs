//! Deterministic sampling used by every audit. All randomness flows through
//! a ChaCha8 stream seeded from a caller-supplied `u64`, so identical flags
//! reproduce identical reports byte for byte.

use num::bigint::BigInt;
use num::rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sl2::Mat2;
use crate::words::{FpLetter, FpWord, FreeWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random reduced free word: geometric-ish syllable count (mean ~4, capped at
/// 12) with exponents in +-1..=4.
pub fn free_word(rng: &mut ChaCha8Rng, rank: u32) -> FreeWord {
    let mut raw = Vec::new();
    let mut len = 0usize;
    while len < 12 && rng.gen_range(0..5) != 0 {
        let gen = rng.gen_range(1..=rank);
        let mag = rng.gen_range(1..=4i64);
        let exp = if rng.gen::<bool>() { mag } else { -mag };
        raw.push((gen, exp));
        len += 1;
    }
    FreeWord::reduce(rank, &raw).expect("indices in range")
}

/// Random normal-form word in Z_m * Z_n with up to 12 letters.
pub fn fp_word(rng: &mut ChaCha8Rng, m: u32, n: u32) -> FpWord {
    let mut raw = Vec::new();
    let mut len = 0usize;
    while len < 12 && rng.gen_range(0..5) != 0 {
        if rng.gen::<bool>() {
            raw.push(FpLetter::A(rng.gen_range(1..m)));
        } else {
            raw.push(FpLetter::B(rng.gen_range(1..n)));
        }
        len += 1;
    }
    FpWord::normalize(m, n, &raw).expect("moduli at least 2")
}

/// Random element of SL2(Z) built as an alternating product of T-powers and
/// S letters. Entries are kept bounded by `bound` (the partial product backs
/// off before overflowing the bound), so samples stay desk-sized but exact.
pub fn sl2_matrix(rng: &mut ChaCha8Rng, bound: i64) -> Mat2 {
    let bound = BigInt::from(bound);
    let mut acc = Mat2::identity();
    let steps = rng.gen_range(1..=12);
    for _ in 0..steps {
        let next = if rng.gen::<bool>() {
            let k = rng.gen_range(1..=9i64);
            let k = if rng.gen::<bool>() { k } else { -k };
            acc.mul(&Mat2::t_power(k))
        } else {
            acc.mul(&Mat2::s())
        };
        if next.max_abs_entry() > bound {
            break;
        }
        acc = next;
    }
    acc
}

/// Nonzero rational with numerator and denominator bounded by 40.
pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut numer = 0i64;
    while numer == 0 {
        numer = rng.gen_range(-40..=40);
    }
    let denom = rng.gen_range(1..=40i64);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational bounded away from nothing in particular; may be zero.
pub fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let numer = rng.gen_range(-40..=40i64);
    let denom = rng.gen_range(1..=40i64);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
