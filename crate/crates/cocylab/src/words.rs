//! Reduced words in free groups and in free products of two finite cyclic
//! groups, plus cyclic words and overlapping occurrence counting.
//!
//! Free words are stored run-length encoded: a list of syllables
//! `(generator, exponent)` with 1-based generator indices, nonzero exponents
//! and distinct adjacent generators. Words in `Z_m * Z_n` are stored as
//! alternating letters `A(i)` (1 <= i <= m-1) and `B(j)` (1 <= j <= n-1);
//! this is the normal form `a^{i_1} b^{j_1} a^{i_2} ...` with indices reduced
//! mod m resp. n.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("generator index {0} out of range (rank {1})")]
    IndexOutOfRange(u32, u32),
    #[error("words live in different groups")]
    KindMismatch,
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("moduli must both be at least 2 (got {0}, {1})")]
    BadModuli(u32, u32),
}

/// One run `gen^exp` of a free word; `gen` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Syllable {
    pub gen: u32,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: u32, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// Reduced word in the free group of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: u32,
    syllables: Vec<Syllable>,
}

impl FreeWord {
    pub fn identity(rank: u32) -> Self {
        FreeWord { rank, syllables: Vec::new() }
    }

    pub fn generator(rank: u32, gen: u32) -> Result<Self, WordError> {
        Self::reduce(rank, &[(gen, 1)])
    }

    /// Free reduction: merges equal-generator neighbours, drops zero runs,
    /// cascades. Idempotent on its own output.
    pub fn reduce(rank: u32, raw: &[(u32, i64)]) -> Result<Self, WordError> {
        let mut stack: Vec<Syllable> = Vec::with_capacity(raw.len());
        for &(gen, exp) in raw {
            if gen == 0 || gen > rank {
                return Err(WordError::IndexOutOfRange(gen, rank));
            }
            if exp == 0 {
                continue;
            }
            push_merged(&mut stack, Syllable::new(gen, exp));
        }
        Ok(FreeWord { rank, syllables: stack })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter length (sum of |exp|).
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        if self.rank != other.rank {
            return Err(WordError::KindMismatch);
        }
        let mut stack = self.syllables.clone();
        for &s in &other.syllables {
            push_merged(&mut stack, s);
        }
        Ok(FreeWord { rank: self.rank, syllables: stack })
    }

    pub fn invert(&self) -> FreeWord {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable::new(s.gen, -s.exp))
            .collect();
        FreeWord { rank: self.rank, syllables }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut acc = FreeWord::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            acc = acc.multiply(&base).expect("same rank");
        }
        acc
    }

    /// Exponent sum of each generator (abelianization image).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank as usize];
        for s in &self.syllables {
            sums[(s.gen - 1) as usize] += s.exp;
        }
        sums
    }
}

fn push_merged(stack: &mut Vec<Syllable>, s: Syllable) {
    if let Some(top) = stack.last_mut() {
        if top.gen == s.gen {
            top.exp += s.exp;
            if top.exp == 0 {
                stack.pop();
            }
            return;
        }
    }
    stack.push(s);
}

/// One letter of a `Z_m * Z_n` normal form: `A(i)` is `a^i`, `B(j)` is `b^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FpLetter {
    A(u32),
    B(u32),
}

impl FpLetter {
    pub fn is_a(&self) -> bool {
        matches!(self, FpLetter::A(_))
    }

    pub fn index(&self) -> u32 {
        match *self {
            FpLetter::A(i) | FpLetter::B(i) => i,
        }
    }
}

/// Normal-form word in `Z_m * Z_n = <a, b | a^m = b^n = e>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpWord {
    m: u32,
    n: u32,
    letters: Vec<FpLetter>,
}

impl FpWord {
    pub fn identity(m: u32, n: u32) -> Result<Self, WordError> {
        check_moduli(m, n)?;
        Ok(FpWord { m, n, letters: Vec::new() })
    }

    /// Normalizes an arbitrary letter string: indices reduced mod m / mod n,
    /// adjacent same-type letters merged, vanishing letters dropped, cascaded.
    pub fn normalize(m: u32, n: u32, raw: &[FpLetter]) -> Result<Self, WordError> {
        check_moduli(m, n)?;
        let mut stack: Vec<FpLetter> = Vec::with_capacity(raw.len());
        for &letter in raw {
            let (modulus, idx) = match letter {
                FpLetter::A(i) => (m, i),
                FpLetter::B(j) => (n, j),
            };
            let idx = idx % modulus;
            if idx == 0 {
                continue;
            }
            push_fp_merged(&mut stack, m, n, set_index(letter, idx));
        }
        Ok(FpWord { m, n, letters: stack })
    }

    pub fn moduli(&self) -> (u32, u32) {
        (self.m, self.n)
    }

    pub fn letters(&self) -> &[FpLetter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_len(&self) -> u64 {
        self.letters.len() as u64
    }

    pub fn multiply(&self, other: &FpWord) -> Result<FpWord, WordError> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(WordError::KindMismatch);
        }
        let mut stack = self.letters.clone();
        for &letter in &other.letters {
            push_fp_merged(&mut stack, self.m, self.n, letter);
        }
        Ok(FpWord { m: self.m, n: self.n, letters: stack })
    }

    /// Inverse in normal form: reverse the letters and complement each index
    /// (`a^i -> a^{m-i}`, `b^j -> b^{n-j}`). No merging can occur.
    pub fn invert(&self) -> FpWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|&l| match l {
                FpLetter::A(i) => FpLetter::A(self.m - i),
                FpLetter::B(j) => FpLetter::B(self.n - j),
            })
            .collect();
        FpWord { m: self.m, n: self.n, letters }
    }

    pub fn pow(&self, k: i64) -> FpWord {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = FpWord::identity(self.m, self.n).expect("valid moduli");
        for _ in 0..k.unsigned_abs() {
            acc = acc.multiply(&base).expect("same moduli");
        }
        acc
    }
}

fn check_moduli(m: u32, n: u32) -> Result<(), WordError> {
    if m < 2 || n < 2 {
        return Err(WordError::BadModuli(m, n));
    }
    Ok(())
}

fn set_index(letter: FpLetter, idx: u32) -> FpLetter {
    match letter {
        FpLetter::A(_) => FpLetter::A(idx),
        FpLetter::B(_) => FpLetter::B(idx),
    }
}

fn push_fp_merged(stack: &mut Vec<FpLetter>, m: u32, n: u32, letter: FpLetter) {
    if let Some(&top) = stack.last() {
        if top.is_a() == letter.is_a() {
            let modulus = if top.is_a() { m } else { n };
            let idx = (top.index() + letter.index()) % modulus;
            stack.pop();
            if idx != 0 {
                stack.push(set_index(letter, idx));
            }
            return;
        }
    }
    stack.push(letter);
}

/// A word in either supported group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Free(FreeWord),
    Fp(FpWord),
}

impl Word {
    pub fn is_identity(&self) -> bool {
        match self {
            Word::Free(w) => w.is_identity(),
            Word::Fp(w) => w.is_identity(),
        }
    }

    pub fn letter_len(&self) -> u64 {
        match self {
            Word::Free(w) => w.letter_len(),
            Word::Fp(w) => w.letter_len(),
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        match (self, other) {
            (Word::Free(u), Word::Free(v)) => Ok(Word::Free(u.multiply(v)?)),
            (Word::Fp(u), Word::Fp(v)) => Ok(Word::Fp(u.multiply(v)?)),
            _ => Err(WordError::KindMismatch),
        }
    }

    pub fn invert(&self) -> Word {
        match self {
            Word::Free(w) => Word::Free(w.invert()),
            Word::Fp(w) => Word::Fp(w.invert()),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        match self {
            Word::Free(w) => Word::Free(w.pow(n)),
            Word::Fp(w) => Word::Fp(w.pow(n)),
        }
    }

    /// Overlapping occurrence count of `pattern` in `self`; with `cyclic` the
    /// word is first closed up into its cyclic word (see [`CyclicWord`]).
    pub fn count_occurrences(&self, pattern: &Word, cyclic: bool) -> Result<u64, WordError> {
        if pattern.is_identity() {
            return Err(WordError::EmptyPattern);
        }
        match (self, pattern) {
            (Word::Free(g), Word::Free(p)) => {
                if g.rank() != p.rank() {
                    return Err(WordError::KindMismatch);
                }
                if cyclic {
                    Ok(count_free_cyclic(&CyclicWord::from_word(self).free_ring, p.syllables()))
                } else {
                    Ok(count_free_linear(g.syllables(), p.syllables()))
                }
            }
            (Word::Fp(g), Word::Fp(p)) => {
                if g.moduli() != p.moduli() {
                    return Err(WordError::KindMismatch);
                }
                if cyclic {
                    Ok(count_fp_cyclic(&CyclicWord::from_word(self).fp_ring, p.letters()))
                } else {
                    Ok(count_fp_linear(g.letters(), p.letters()))
                }
            }
            _ => Err(WordError::KindMismatch),
        }
    }
}

/// Cyclic word: conjugacy-class representative. The base word is cyclically
/// reduced (first and last runs cannot merge around the seam) and stored as
/// the lexicographically least rotation, ordering runs by (generator index,
/// exponent as signed integer) and free-product letters by (type A < B,
/// index).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    free_ring: Vec<Syllable>,
    fp_ring: Vec<FpLetter>,
    is_free: bool,
}

impl CyclicWord {
    pub fn from_word(w: &Word) -> CyclicWord {
        match w {
            Word::Free(w) => {
                let mut ring = w.syllables().to_vec();
                loop {
                    if ring.len() < 2 {
                        break;
                    }
                    let first = ring[0];
                    let last = *ring.last().unwrap();
                    if first.gen != last.gen {
                        break;
                    }
                    ring.pop();
                    let merged = first.exp + last.exp;
                    if merged == 0 {
                        ring.remove(0);
                    } else {
                        ring[0] = Syllable::new(first.gen, merged);
                    }
                }
                CyclicWord { free_ring: least_rotation(&ring), fp_ring: Vec::new(), is_free: true }
            }
            Word::Fp(w) => {
                let (m, n) = w.moduli();
                let mut ring = w.letters().to_vec();
                loop {
                    if ring.len() < 2 {
                        break;
                    }
                    let first = ring[0];
                    let last = *ring.last().unwrap();
                    if first.is_a() != last.is_a() {
                        break;
                    }
                    let modulus = if first.is_a() { m } else { n };
                    let idx = (first.index() + last.index()) % modulus;
                    ring.pop();
                    if idx == 0 {
                        ring.remove(0);
                    } else {
                        ring[0] = set_index(first, idx);
                    }
                }
                CyclicWord { free_ring: Vec::new(), fp_ring: least_rotation(&ring), is_free: false }
            }
        }
    }

    pub fn free_ring(&self) -> &[Syllable] {
        &self.free_ring
    }

    pub fn fp_ring(&self) -> &[FpLetter] {
        &self.fp_ring
    }

    pub fn is_free(&self) -> bool {
        self.is_free
    }
}

fn least_rotation<T: Clone + Ord>(ring: &[T]) -> Vec<T> {
    if ring.len() < 2 {
        return ring.to_vec();
    }
    let mut best: Option<Vec<T>> = None;
    for start in 0..ring.len() {
        let mut rot = Vec::with_capacity(ring.len());
        rot.extend_from_slice(&ring[start..]);
        rot.extend_from_slice(&ring[..start]);
        if best.as_ref().map_or(true, |b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

fn same_direction(a: Syllable, b: Syllable) -> bool {
    a.gen == b.gen && (a.exp > 0) == (b.exp > 0)
}

/// Occurrences of `pat` (as letters) in the letter expansion of `g`, counted
/// with overlaps; runs are handled arithmetically, letters are never
/// materialized.
fn count_free_linear(g: &[Syllable], pat: &[Syllable]) -> u64 {
    if pat.is_empty() {
        return 0;
    }
    if pat.len() == 1 {
        let p = pat[0];
        return g
            .iter()
            .filter(|s| same_direction(**s, p))
            .map(|s| (s.exp.unsigned_abs()).saturating_sub(p.exp.unsigned_abs() - 1))
            .sum();
    }
    let t = pat.len();
    let first = pat[0];
    let last = pat[t - 1];
    let interior = &pat[1..t - 1];
    let mut count = 0;
    if g.len() < t {
        return 0;
    }
    for i in 0..=(g.len() - t) {
        let head = g[i];
        let tail = g[i + t - 1];
        if !same_direction(head, first) || head.exp.unsigned_abs() < first.exp.unsigned_abs() {
            continue;
        }
        if !same_direction(tail, last) || tail.exp.unsigned_abs() < last.exp.unsigned_abs() {
            continue;
        }
        if g[i + 1..i + t - 1] == *interior {
            count += 1;
        }
    }
    count
}

/// Occurrence count in a cyclic word: every position of the canonical window
/// starts at most one occurrence, matching against the periodic continuation.
/// A match may wind around the ring several times; the interior runs must
/// then agree exactly on every pass.
fn count_free_cyclic(ring: &[Syllable], pat: &[Syllable]) -> u64 {
    if ring.is_empty() || pat.is_empty() {
        return 0;
    }
    let k = ring.len();
    if pat.len() == 1 {
        let p = pat[0];
        if k == 1 {
            // Single run closed into a loop: the continuation is periodic in
            // one generator, so every letter of the window starts a match.
            let s = ring[0];
            return if same_direction(s, p) { s.exp.unsigned_abs() } else { 0 };
        }
        return ring
            .iter()
            .filter(|s| same_direction(**s, p))
            .map(|s| (s.exp.unsigned_abs()).saturating_sub(p.exp.unsigned_abs() - 1))
            .sum();
    }
    let t = pat.len();
    let first = pat[0];
    let last = pat[t - 1];
    let mut count = 0;
    'outer: for i in 0..k {
        let head = ring[i];
        if !same_direction(head, first) || head.exp.unsigned_abs() < first.exp.unsigned_abs() {
            continue;
        }
        for (j, q) in pat.iter().enumerate().take(t - 1).skip(1) {
            if ring[(i + j) % k] != *q {
                continue 'outer;
            }
        }
        let tail = ring[(i + t - 1) % k];
        if !same_direction(tail, last) || tail.exp.unsigned_abs() < last.exp.unsigned_abs() {
            continue;
        }
        count += 1;
    }
    count
}

fn count_fp_linear(g: &[FpLetter], pat: &[FpLetter]) -> u64 {
    if pat.is_empty() || g.len() < pat.len() {
        return 0;
    }
    (0..=(g.len() - pat.len()))
        .filter(|&i| g[i..i + pat.len()] == *pat)
        .count() as u64
}

fn count_fp_cyclic(ring: &[FpLetter], pat: &[FpLetter]) -> u64 {
    if ring.is_empty() || pat.is_empty() {
        return 0;
    }
    let k = ring.len();
    (0..k)
        .filter(|&i| pat.iter().enumerate().all(|(j, q)| ring[(i + j) % k] == *q))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(raw: &[(u32, i64)]) -> FreeWord {
        FreeWord::reduce(2, raw).unwrap()
    }

    #[test]
    fn reduce_cancels_inverse_pair() {
        assert!(fw(&[(1, 1), (1, -1)]).is_identity());
    }

    #[test]
    fn reduce_cascades_through_vanishing_runs() {
        // a1^2 a2 a2^-1 a1 -> a1^3
        assert_eq!(fw(&[(1, 2), (2, 1), (2, -1), (1, 1)]), fw(&[(1, 3)]));
    }

    #[test]
    fn reduce_rejects_out_of_range_generator() {
        assert_eq!(
            FreeWord::reduce(2, &[(3, 1)]),
            Err(WordError::IndexOutOfRange(3, 2))
        );
    }

    #[test]
    fn multiply_rejects_mixed_kinds() {
        let u = Word::Free(fw(&[(1, 1)]));
        let v = Word::Fp(FpWord::normalize(4, 4, &[FpLetter::A(1)]).unwrap());
        assert_eq!(u.multiply(&v), Err(WordError::KindMismatch));
    }

    #[test]
    fn invert_is_antihomomorphic_on_example() {
        let u = fw(&[(1, 2), (2, -1)]);
        let v = fw(&[(2, 1), (1, 3)]);
        let lhs = u.multiply(&v).unwrap().invert();
        let rhs = v.invert().multiply(&u.invert()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn count_runs_overlapping() {
        // a1^3 contains a1^2 twice.
        let g = Word::Free(fw(&[(1, 3)]));
        let p = Word::Free(fw(&[(1, 2)]));
        assert_eq!(g.count_occurrences(&p, false).unwrap(), 2);
    }

    #[test]
    fn count_does_not_match_multisyllable_pattern_across_sign_change() {
        let g = Word::Free(fw(&[(1, 2), (2, 1), (1, -2)]));
        let p = Word::Free(fw(&[(1, 1), (2, 1), (1, 1)]));
        assert_eq!(g.count_occurrences(&p, false).unwrap(), 0);
    }

    #[test]
    fn count_matches_pattern_inside_longer_runs() {
        // g = a1^4 a2^2 a1^3, pattern a1 a2^2 a1 occurs once.
        let g = Word::Free(fw(&[(1, 4), (2, 2), (1, 3)]));
        let p = Word::Free(fw(&[(1, 1), (2, 2), (1, 1)]));
        assert_eq!(g.count_occurrences(&p, false).unwrap(), 1);
    }

    #[test]
    fn cyclic_count_sees_wraparound() {
        // g = a2 a1 closed up; pattern a1 a2 occurs once through the seam.
        let g = Word::Free(fw(&[(2, 1), (1, 1)]));
        let p = Word::Free(fw(&[(1, 1), (2, 1)]));
        assert_eq!(g.count_occurrences(&p, true).unwrap(), 1);
        assert_eq!(g.count_occurrences(&p, false).unwrap(), 0);
    }

    #[test]
    fn cyclic_count_on_single_run_is_periodic() {
        // Cyclic word of a1^n meets a1^2 at every one of its n letters.
        let g = Word::Free(fw(&[(1, 5)]));
        let p = Word::Free(fw(&[(1, 2)]));
        assert_eq!(g.count_occurrences(&p, true).unwrap(), 5);
    }

    #[test]
    fn cyclic_reduction_conjugates_away_the_seam() {
        // a1 a2 a1^-1 is conjugate to a2.
        let w = Word::Free(fw(&[(1, 1), (2, 1), (1, -1)]));
        let c = CyclicWord::from_word(&w);
        assert_eq!(c.free_ring(), &[Syllable::new(2, 1)]);
    }

    #[test]
    fn canonical_rotation_is_least() {
        let w = Word::Free(fw(&[(2, 1), (1, 1)]));
        let c = CyclicWord::from_word(&w);
        assert_eq!(c.free_ring(), &[Syllable::new(1, 1), Syllable::new(2, 1)]);
    }

    #[test]
    fn empty_pattern_is_rejected() {
        let g = Word::Free(fw(&[(1, 1)]));
        let p = Word::Free(FreeWord::identity(2));
        assert_eq!(g.count_occurrences(&p, false), Err(WordError::EmptyPattern));
    }

    #[test]
    fn fp_normalize_merges_mod_m() {
        // In Z4 * Z4: a2 . a3 = a1.
        let w = FpWord::normalize(4, 4, &[FpLetter::A(2), FpLetter::A(3)]).unwrap();
        assert_eq!(w.letters(), &[FpLetter::A(1)]);
    }

    #[test]
    fn fp_normalize_cascades() {
        // a2 b1 b3 -> a2 in Z4 * Z4.
        let w = FpWord::normalize(4, 4, &[FpLetter::A(2), FpLetter::B(1), FpLetter::B(3)]).unwrap();
        assert_eq!(w.letters(), &[FpLetter::A(2)]);
    }

    #[test]
    fn fp_rejects_bad_moduli() {
        assert_eq!(
            FpWord::normalize(1, 4, &[]),
            Err(WordError::BadModuli(1, 4))
        );
    }

    #[test]
    fn fp_invert_complements_indices() {
        // (a1 b2)^-1 = b3 a3 in Z4 * Z5.
        let w = FpWord::normalize(4, 5, &[FpLetter::A(1), FpLetter::B(2)]).unwrap();
        assert_eq!(w.invert().letters(), &[FpLetter::B(3), FpLetter::A(3)]);
    }

    #[test]
    fn fp_invert_matches_naive_inverse_up_to_length_six() {
        // Brute force over Z4 * Z5: the reversal/complement formula agrees
        // with concatenating single-letter inverses and renormalizing.
        fn extend(m: u32, n: u32, prefix: &mut Vec<FpLetter>, len: usize, all: &mut Vec<Vec<FpLetter>>) {
            if len == 0 {
                return;
            }
            let want_a = match prefix.last() {
                Some(l) => !l.is_a(),
                None => true,
            };
            let (range, make): (u32, fn(u32) -> FpLetter) = if want_a {
                (m, FpLetter::A)
            } else {
                (n, FpLetter::B)
            };
            for i in 1..range {
                prefix.push(make(i));
                all.push(prefix.clone());
                extend(m, n, prefix, len - 1, all);
                prefix.pop();
            }
        }
        let (m, n) = (4, 5);
        let mut words = vec![Vec::new()];
        // Words starting with an a-letter...
        let mut buf = Vec::new();
        extend(m, n, &mut buf, 6, &mut words);
        // ...and words starting with a b-letter.
        for j in 1..n {
            let mut buf = vec![FpLetter::B(j)];
            let mut tail = vec![buf.clone()];
            extend_b(m, n, &mut buf, 5, &mut tail);
            words.extend(tail);
        }
        fn extend_b(m: u32, n: u32, prefix: &mut Vec<FpLetter>, len: usize, all: &mut Vec<Vec<FpLetter>>) {
            if len == 0 {
                return;
            }
            let want_a = !prefix.last().unwrap().is_a();
            let (range, make): (u32, fn(u32) -> FpLetter) = if want_a {
                (m, FpLetter::A)
            } else {
                (n, FpLetter::B)
            };
            for i in 1..range {
                prefix.push(make(i));
                all.push(prefix.clone());
                extend_b(m, n, prefix, len - 1, all);
                prefix.pop();
            }
        }
        let mut checked = 0u64;
        for letters in &words {
            let w = FpWord::normalize(m, n, letters).unwrap();
            let fast = w.invert();
            let mut naive = Vec::new();
            for &l in letters.iter().rev() {
                naive.push(match l {
                    FpLetter::A(i) => FpLetter::A(m - i),
                    FpLetter::B(j) => FpLetter::B(n - j),
                });
            }
            let naive = FpWord::normalize(m, n, &naive).unwrap();
            assert_eq!(fast, naive);
            assert!(w.multiply(&fast).unwrap().is_identity());
            checked += 1;
        }
        assert!(checked > 2000, "enumeration too small: {checked}");
    }

    #[test]
    fn fp_cyclic_count_wraps() {
        // b1 a1 closed up contains a1 b1 once.
        let g = Word::Fp(FpWord::normalize(4, 4, &[FpLetter::B(1), FpLetter::A(1)]).unwrap());
        let p = Word::Fp(FpWord::normalize(4, 4, &[FpLetter::A(1), FpLetter::B(1)]).unwrap());
        assert_eq!(g.count_occurrences(&p, true).unwrap(), 1);
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let w = Word::Free(fw(&[(1, 2), (2, -1)]));
        let mut acc = Word::Free(FreeWord::identity(2));
        for _ in 0..5 {
            acc = acc.multiply(&w).unwrap();
        }
        assert_eq!(w.pow(5), acc);
        assert_eq!(w.pow(-5), acc.invert());
    }
}
