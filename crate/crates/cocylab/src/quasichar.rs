//! Quasi-characters from pattern counting: for a reduced pattern W the map
//! f_W(g) counts occurrences of W in g minus occurrences of W^{-1}
//! (overlapping count on the reduced word), and e_W does the same on the
//! cyclic word of g. Both have uniformly bounded defect
//! |f(x) + f(y) - f(xy)|; e_W is a pseudo-character (e_W(g^n) = n e_W(g))
//! whenever W does not overlap itself.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::sample;
use crate::words::{FpLetter, FpWord, FreeWord, Word, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QcError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("kind does not match the pattern/argument group")]
    KindMismatch,
    #[error("pattern overlaps itself (a proper prefix equals a proper suffix)")]
    PatternSelfOverlaps,
    #[error("witness indices must satisfy 1 <= i < j")]
    BadIndices,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// The four supported kinds: linear (f_W) or cyclic (e_W) counting, over a
/// free group or over Z_m * Z_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcKind {
    FwFree,
    EwFree,
    FwFp,
    EwFp,
}

impl QcKind {
    pub fn cyclic(&self) -> bool {
        matches!(self, QcKind::EwFree | QcKind::EwFp)
    }

    fn free(&self) -> bool {
        matches!(self, QcKind::FwFree | QcKind::EwFree)
    }
}

#[derive(Debug, Clone)]
pub struct QuasiChar {
    kind: QcKind,
    pattern: Word,
    pattern_inv: Word,
}

impl QuasiChar {
    pub fn new(kind: QcKind, pattern: Word) -> Result<Self, QcError> {
        if pattern.is_identity() {
            return Err(QcError::EmptyPattern);
        }
        let pattern_is_free = matches!(pattern, Word::Free(_));
        if pattern_is_free != kind.free() {
            return Err(QcError::KindMismatch);
        }
        let pattern_inv = pattern.invert();
        Ok(QuasiChar { kind, pattern, pattern_inv })
    }

    pub fn kind(&self) -> QcKind {
        self.kind
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    /// Conservative defect bound 3|W| used when declaring image bounds.
    pub fn declared_bound(&self) -> u64 {
        3 * self.pattern.letter_len()
    }

    pub fn evaluate(&self, g: &Word) -> Result<i64, QcError> {
        let cyclic = self.kind.cyclic();
        let plus = g.count_occurrences(&self.pattern, cyclic)?;
        let minus = g.count_occurrences(&self.pattern_inv, cyclic)?;
        Ok(plus as i64 - minus as i64)
    }

    /// Observed image of the coboundary (x, y) -> f(x) + f(y) - f(xy) over
    /// seeded random pairs.
    pub fn coboundary_image(&self, samples: u64, seed: u64) -> Result<ImageReport, QcError> {
        let mut rng = sample::rng(seed);
        let mut values = BTreeSet::new();
        for _ in 0..samples {
            let (x, y) = match &self.pattern {
                Word::Free(p) => {
                    let r = p.rank();
                    (
                        Word::Free(sample::free_word(&mut rng, r)),
                        Word::Free(sample::free_word(&mut rng, r)),
                    )
                }
                Word::Fp(p) => {
                    let (m, n) = p.moduli();
                    (
                        Word::Fp(sample::fp_word(&mut rng, m, n)),
                        Word::Fp(sample::fp_word(&mut rng, m, n)),
                    )
                }
            };
            let xy = x.multiply(&y)?;
            values.insert(self.evaluate(&x)? + self.evaluate(&y)? - self.evaluate(&xy)?);
        }
        Ok(ImageReport { values: values.into_iter().collect(), samples, seed })
    }

    /// Checks e_W(g^n) = n e_W(g) for |n| <= max_n. Only meaningful for the
    /// cyclic kinds, and only guaranteed for non-self-overlapping patterns;
    /// both preconditions are enforced.
    pub fn pseudo_power_check(&self, g: &Word, max_n: i64) -> Result<bool, QcError> {
        if !self.kind.cyclic() {
            return Err(QcError::KindMismatch);
        }
        if pattern_self_overlaps(&self.pattern) {
            return Err(QcError::PatternSelfOverlaps);
        }
        let base = self.evaluate(g)?;
        for n in -max_n..=max_n {
            if self.evaluate(&g.pow(n))? != n * base {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ImageReport {
    pub values: Vec<i64>,
    pub samples: u64,
    pub seed: u64,
}

/// True when some proper prefix of the letter expansion of W equals a proper
/// suffix. Patterns passing this test make e_W a pseudo-character.
pub fn pattern_self_overlaps(pattern: &Word) -> bool {
    match pattern {
        Word::Free(w) => {
            let mut letters: Vec<(u32, i8)> = Vec::new();
            for s in w.syllables() {
                let sign = if s.exp > 0 { 1 } else { -1 };
                for _ in 0..s.exp.unsigned_abs() {
                    letters.push((s.gen, sign));
                }
            }
            has_border(&letters)
        }
        Word::Fp(w) => has_border(w.letters()),
    }
}

fn has_border<T: PartialEq>(letters: &[T]) -> bool {
    let n = letters.len();
    (1..n).any(|l| letters[..l] == letters[n - l..])
}

/// The two witness families whose differences realize quasi-character value
/// 1 (free case, pattern a1^2) resp. 2 (free-product case, pattern ab).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFamily {
    /// b_i = a2^i a1^-i a2 a1^i in the free group of rank 2.
    F1Free,
    /// b_i = (ba^2)^i a (ab)^-i b (ab)^i in Z_m * Z_n (m, n > 3).
    F2Fp { m: u32, n: u32 },
}

impl WitnessFamily {
    pub fn element(&self, i: u32) -> Result<Word, QcError> {
        if i < 1 {
            return Err(QcError::BadIndices);
        }
        match *self {
            WitnessFamily::F1Free => {
                let i = i as i64;
                Ok(Word::Free(FreeWord::reduce(
                    2,
                    &[(2, i), (1, -i), (2, 1), (1, i)],
                )?))
            }
            WitnessFamily::F2Fp { m, n } => {
                let ba2 = FpWord::normalize(m, n, &[FpLetter::B(1), FpLetter::A(2)])?;
                let a = FpWord::normalize(m, n, &[FpLetter::A(1)])?;
                let ab = FpWord::normalize(m, n, &[FpLetter::A(1), FpLetter::B(1)])?;
                let b = FpWord::normalize(m, n, &[FpLetter::B(1)])?;
                let i = i as i64;
                let w = ba2
                    .pow(i)
                    .multiply(&a)?
                    .multiply(&ab.pow(-i))?
                    .multiply(&b)?
                    .multiply(&ab.pow(i))?;
                Ok(Word::Fp(w))
            }
        }
    }

    /// The witness difference b_i b_j^{-1} for 1 <= i < j.
    pub fn witness_element(&self, i: u32, j: u32) -> Result<Word, QcError> {
        if i < 1 || j <= i {
            return Err(QcError::BadIndices);
        }
        let bi = self.element(i)?;
        let bj = self.element(j)?;
        Ok(bi.multiply(&bj.invert())?)
    }

    /// The standard pattern paired with the family.
    pub fn pattern(&self) -> Result<QuasiChar, QcError> {
        match *self {
            WitnessFamily::F1Free => QuasiChar::new(
                QcKind::FwFree,
                Word::Free(FreeWord::reduce(2, &[(1, 2)]).unwrap()),
            ),
            WitnessFamily::F2Fp { m, n } => QuasiChar::new(
                QcKind::FwFp,
                Word::Fp(FpWord::normalize(m, n, &[FpLetter::A(1), FpLetter::B(1)])?),
            ),
        }
    }
}
