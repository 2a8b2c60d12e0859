//! Balanced two-class assignments modulo a global label flip.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{choose, num_assignments};

/// Default upper bound on the number of assignments an exhaustive
/// enumeration may produce (`n <= 12`).
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

pub(crate) fn words_for(n: usize) -> usize {
    (2 * n).div_ceil(64)
}

/// Mask of the valid bit positions in word `w` for `2n` vertices.
pub(crate) fn valid_mask(n: usize, w: usize) -> u64 {
    let total = 2 * n;
    let start = w * 64;
    let len = total.saturating_sub(start).min(64);
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Canonical representative of an equivalence class `{θ', ¬θ'}` of balanced
/// binary vectors of length `2n`. Bit `i` is the class of vertex `i`; bit 0 is
/// always 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassAssignment {
    n: usize,
    words: Vec<u64>,
}

impl ClassAssignment {
    /// Builds the canonical representative of `{raw, ¬raw}`. Entries must be
    /// 0 or 1, with as many zeros as ones.
    pub fn canonicalize(raw: &[u8]) -> Result<Self> {
        if raw.is_empty() || !raw.len().is_multiple_of(2) {
            return Err(Error::InvalidAssignment(format!(
                "length {} is not a positive even number",
                raw.len()
            )));
        }
        let n = raw.len() / 2;
        let mut words = vec![0u64; words_for(n)];
        let mut ones = 0usize;
        for (i, &b) in raw.iter().enumerate() {
            match b {
                0 => {}
                1 => {
                    ones += 1;
                    words[i / 64] |= 1 << (i % 64);
                }
                other => {
                    return Err(Error::InvalidAssignment(format!(
                        "entry {i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        if ones != n {
            return Err(Error::InvalidAssignment(format!(
                "{ones} ones among {} vertices, expected {n}",
                raw.len()
            )));
        }
        Ok(Self::from_balanced_words(n, words))
    }

    /// `words` must describe a balanced vector with zeroed padding bits.
    pub(crate) fn from_balanced_words(n: usize, mut words: Vec<u64>) -> Self {
        if words[0] & 1 == 1 {
            for (w, word) in words.iter_mut().enumerate() {
                *word = !*word & valid_mask(n, w);
            }
        }
        Self { n, words }
    }

    /// The assignment putting vertices `0..n` in class 0 and `n..2n` in class 1.
    pub fn block(n: usize) -> Self {
        assert!(n > 0, "n must be positive");
        let mut words = vec![0u64; words_for(n)];
        for i in n..2 * n {
            words[i / 64] |= 1 << (i % 64);
        }
        Self { n, words }
    }

    /// Uniform draw from `Θ_n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n > 0, "n must be positive");
        let mut vertices: Vec<usize> = (0..2 * n).collect();
        vertices.shuffle(rng);
        let mut words = vec![0u64; words_for(n)];
        for &v in &vertices[n..] {
            words[v / 64] |= 1 << (v % 64);
        }
        Self::from_balanced_words(n, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    /// Packed class bits, little-endian within each word.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn class_of(&self, vertex: usize) -> u8 {
        ((self.words[vertex / 64] >> (vertex % 64)) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..2 * self.n).map(move |i| self.class_of(i))
    }

    /// Vertices in class 0 (the class containing vertex 0).
    pub fn zero_class(&self) -> Vec<usize> {
        (0..2 * self.n).filter(|&i| self.class_of(i) == 0).collect()
    }

    pub fn one_class(&self) -> Vec<usize> {
        (0..2 * self.n).filter(|&i| self.class_of(i) == 1).collect()
    }

    /// Exchanges the classes of the listed vertices and re-canonicalizes.
    /// The caller keeps the result balanced by flipping equally many
    /// vertices from each class.
    pub(crate) fn flipped(&self, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut words = self.words.clone();
        for v in vertices {
            words[v / 64] ^= 1 << (v % 64);
        }
        Self::from_balanced_words(self.n, words)
    }

    pub fn to_bit_string(&self) -> String {
        self.bits()
            .map(|b| if b == 0 { '0' } else { '1' })
            .collect()
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl Ord for ClassAssignment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let diff = a ^ b;
                if diff != 0 {
                    let bit = diff.trailing_zeros();
                    return if (a >> bit) & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for ClassAssignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ClassAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassAssignment({})", self.to_bit_string())
    }
}

impl fmt::Display for ClassAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl FromStr for ClassAssignment {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; the result is canonicalized.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::InvalidAssignment(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::canonicalize(&bits)
    }
}

/// Minimal number of pair exchanges between two classes, taken over both
/// representatives of `eta`. Lies in `0..=n/2`.
pub fn k_distance(theta: &ClassAssignment, eta: &ClassAssignment) -> Result<usize> {
    theta.check_same_n(eta)?;
    let h: u32 = theta
        .words
        .iter()
        .zip(&eta.words)
        .map(|(t, e)| (!t & e).count_ones())
        .sum();
    let h = h as usize;
    Ok(h.min(theta.n - h))
}

/// Number of canonical assignments at distance exactly `k` from any fixed
/// assignment.
pub fn ring_size(n: usize, k: usize) -> u128 {
    if 2 * k > n {
        return 0;
    }
    let c = choose(n as u64, k as u64).expect("binomial overflow");
    if 2 * k == n {
        c * c / 2
    } else {
        c * c
    }
}

/// Every canonical assignment for `n`, sorted lexicographically by bit
/// string, under [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_assignments(n: usize) -> Result<Vec<ClassAssignment>> {
    enumerate_assignments_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumeration_feasible(n: usize, cap: u64) -> bool {
    n > 0 && num_assignments(n).is_some_and(|c| c <= cap as u128)
}

pub fn enumerate_assignments_capped(n: usize, cap: u64) -> Result<Vec<ClassAssignment>> {
    if n == 0 {
        return Err(Error::InvalidAssignment("n must be positive".into()));
    }
    let count = num_assignments(n).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut words = vec![0u64; words_for(n)];
    // Vertex 0 is fixed to class 0; depth-first with 0 tried before 1 yields
    // lexicographic order.
    fill(n, 1, n - 1, n, &mut words, &mut out);
    Ok(out)
}

fn fill(
    n: usize,
    pos: usize,
    zeros_left: usize,
    ones_left: usize,
    words: &mut Vec<u64>,
    out: &mut Vec<ClassAssignment>,
) {
    if pos == 2 * n {
        out.push(ClassAssignment {
            n,
            words: words.clone(),
        });
        return;
    }
    if zeros_left > 0 {
        fill(n, pos + 1, zeros_left - 1, ones_left, words, out);
    }
    if ones_left > 0 {
        words[pos / 64] |= 1 << (pos % 64);
        fill(n, pos + 1, zeros_left, ones_left - 1, words, out);
        words[pos / 64] &= !(1 << (pos % 64));
    }
}

/// All assignments at pair-exchange distance exactly `k` from `theta0`,
/// sorted lexicographically.
pub fn enumerate_ring(theta0: &ClassAssignment, k: usize) -> Result<Vec<ClassAssignment>> {
    let n = theta0.n;
    if 2 * k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 0,
            hi: (n / 2) as i64,
        });
    }
    let zeros = theta0.zero_class();
    let ones = theta0.one_class();
    let mut ring = BTreeSet::new();
    for from_zero in zeros.iter().copied().combinations(k) {
        for from_one in ones.iter().copied().combinations(k) {
            ring.insert(theta0.flipped(from_zero.iter().chain(&from_one).copied()));
        }
    }
    Ok(ring.into_iter().collect())
}

/// The closed ball `{η : k(center, η) <= radius}`, sorted.
pub fn enumerate_ball(center: &ClassAssignment, radius: usize) -> Result<Vec<ClassAssignment>> {
    let radius = radius.min(center.n / 2);
    let mut ball = Vec::new();
    for k in 0..=radius {
        ball.extend(enumerate_ring(center, k)?);
    }
    ball.sort();
    Ok(ball)
}

/// Largest pairwise `k_distance` among `members` (0 for fewer than two).
pub fn diameter(members: &[ClassAssignment]) -> Result<usize> {
    let mut best = 0;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            best = best.max(k_distance(a, b)?);
        }
        if best == a.n / 2 {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ca(bits: &[u8]) -> ClassAssignment {
        ClassAssignment::canonicalize(bits).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(ca(&[0, 1, 1, 0]).to_bit_string(), "0110");
        assert_eq!(ca(&[1, 0, 0, 1]).to_bit_string(), "0110");
        assert!(matches!(
            ClassAssignment::canonicalize(&[0, 1, 1, 1]),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(ClassAssignment::canonicalize(&[0, 1, 1]).is_err());
        assert!(ClassAssignment::canonicalize(&[0, 2]).is_err());
    }

    #[test]
    fn canonicalize_across_word_boundary() {
        let mut raw = vec![1u8; 50];
        raw.extend(vec![0u8; 50]);
        let a = ClassAssignment::canonicalize(&raw).unwrap();
        assert_eq!(a.class_of(0), 0);
        assert_eq!(a.class_of(49), 0);
        assert_eq!(a.class_of(50), 1);
        assert_eq!(a.class_of(99), 1);
        assert_eq!(a, ClassAssignment::block(50));
        assert_eq!(a.words()[1] >> 36, 0, "padding bits stay clear");
    }

    #[test]
    fn k_distance_examples() {
        let t = ca(&[0, 0, 1, 1]);
        assert_eq!(k_distance(&t, &t).unwrap(), 0);
        assert_eq!(k_distance(&t, &ca(&[0, 1, 0, 1])).unwrap(), 1);
        assert_eq!(k_distance(&t, &ca(&[1, 1, 0, 0])).unwrap(), 0);
        assert!(matches!(
            k_distance(&t, &ClassAssignment::block(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let two = enumerate_assignments(2).unwrap();
        let strings: Vec<_> = two.iter().map(|a| a.to_bit_string()).collect();
        assert_eq!(strings, ["0011", "0101", "0110"]);
        assert_eq!(enumerate_assignments(4).unwrap().len(), 35);
        let one = enumerate_assignments(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_bit_string(), "01");
        let six = enumerate_assignments(6).unwrap();
        assert!(six.windows(2).all(|w| w[0] < w[1]));
        assert!(six
            .windows(2)
            .all(|w| w[0].to_bit_string() < w[1].to_bit_string()));
    }

    #[test]
    fn enumeration_cap_is_reported() {
        match enumerate_assignments(13) {
            Err(Error::EnumerationTooLarge { count, cap }) => {
                assert_eq!(cap, DEFAULT_ENUMERATION_CAP);
                assert_eq!(count, 5_200_300);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(enumerate_assignments_capped(4, 10).is_err());
        assert!(enumeration_feasible(12, DEFAULT_ENUMERATION_CAP));
        assert!(!enumeration_feasible(13, DEFAULT_ENUMERATION_CAP));
    }

    #[test]
    fn ring_examples() {
        let t = ClassAssignment::block(4);
        assert_eq!(enumerate_ring(&t, 1).unwrap().len(), 16);
        assert_eq!(enumerate_ring(&t, 2).unwrap().len(), 18);
        assert_eq!(enumerate_ring(&t, 0).unwrap(), vec![t.clone()]);
        assert!(matches!(
            enumerate_ring(&t, 3),
            Err(Error::OutOfRange { .. })
        ));
        for k in 0..=2 {
            for eta in enumerate_ring(&t, k).unwrap() {
                assert_eq!(k_distance(&t, &eta).unwrap(), k);
            }
        }
    }

    #[test]
    fn from_str_round_trip() {
        let a: ClassAssignment = "10100101".parse().unwrap();
        assert_eq!(a.to_bit_string(), "01011010");
        assert!("0x".parse::<ClassAssignment>().is_err());
    }

    #[test]
    fn random_is_balanced() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..40 {
            let a = ClassAssignment::random(n, &mut rng);
            assert_eq!(a.bits().filter(|&b| b == 1).count(), n);
            assert_eq!(a.class_of(0), 0);
        }
    }
}
