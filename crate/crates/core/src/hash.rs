//! Karp-Rabin fingerprints of length-`k` fragments and the two fragment
//! orders built on top of them.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Error;

/// The Mersenne prime `2^61 - 1`, the default fingerprint modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Parameters of a polynomial Karp-Rabin fingerprint over length-`k`
/// fragments: `Σ code(x[j]) · base^(k-1-j) mod modulus`.
///
/// Immutable after construction; `base^(k-1)` and `base^-1` are precomputed
/// so that rolling in either direction is `O(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashConfig {
    modulus: u64,
    base: u64,
    base_inverse: u64,
    lead_power: u64,
    k: usize,
    seed: u64,
}

impl HashConfig {
    /// Fingerprints modulo `2^61 - 1` with a base drawn from `[2, modulus - 2]`
    /// by a ChaCha generator seeded with `seed`.
    pub fn new(k: usize, seed: u64) -> Result<Self, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = rng.random_range(2..=MERSENNE_61 - 2);
        Self::build(k, MERSENNE_61, base, seed)
    }

    /// Explicit modulus and base, mostly for small hand-checkable examples.
    /// The modulus must be a prime below `2^62`.
    pub fn with_params(k: usize, modulus: u64, base: u64) -> Result<Self, Error> {
        if modulus >= 1 << 62 || !is_prime(modulus) {
            return Err(Error::InvalidParameter("modulus must be a prime below 2^62"));
        }
        if base < 2 || base > modulus - 2 {
            return Err(Error::InvalidParameter("base must lie in [2, modulus - 2]"));
        }
        Self::build(k, modulus, base, 0)
    }

    fn build(k: usize, modulus: u64, base: u64, seed: u64) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1"));
        }
        let mut cfg = HashConfig {
            modulus,
            base,
            base_inverse: 0,
            lead_power: 0,
            k,
            seed,
        };
        cfg.base_inverse = cfg.pow(base, modulus - 2);
        cfg.lead_power = cfg.pow(base, (k - 1) as u64);
        debug_assert_eq!(cfg.mul(cfg.base, cfg.base_inverse), 1);
        Ok(cfg)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn base_inverse(&self) -> u64 {
        self.base_inverse
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let prod = a as u128 * b as u128;
        if self.modulus == MERSENNE_61 {
            let folded = (prod as u64 & MERSENNE_61) + (prod >> 61) as u64;
            if folded >= MERSENNE_61 {
                folded - MERSENNE_61
            } else {
                folded
            }
        } else {
            (prod % self.modulus as u128) as u64
        }
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    fn code(&self, letter: u8) -> u64 {
        letter as u64 % self.modulus
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Fingerprint of `letters`, which must have length exactly `k`.
    pub fn krf_direct(&self, letters: &[u8]) -> Result<u64, Error> {
        if letters.len() != self.k {
            return Err(Error::FragmentLength {
                expected: self.k,
                got: letters.len(),
            });
        }
        Ok(self.krf_of(letters.iter().copied()))
    }

    /// Horner evaluation over exactly `k` letters; the caller guarantees the
    /// length.
    pub(crate) fn krf_of(&self, letters: impl Iterator<Item = u8>) -> u64 {
        letters.fold(0, |acc, a| self.add(self.mul(acc, self.base), self.code(a)))
    }

    /// Fingerprint of the fragment one position to the right: drops
    /// `outgoing` (the letter at `p`) and takes in `incoming` (the letter at
    /// `p + k`).
    #[inline]
    pub fn roll_right(&self, front_krf: u64, outgoing: u8, incoming: u8) -> u64 {
        let without = self.sub(front_krf, self.mul(self.code(outgoing), self.lead_power));
        self.add(self.mul(without, self.base), self.code(incoming))
    }

    /// Fingerprint of the fragment one position to the left: takes in
    /// `incoming` (the letter at `p - 1`) and drops `outgoing` (the letter at
    /// `p + k - 1`).
    #[inline]
    pub fn roll_left(&self, krf_at_p: u64, incoming: u8, outgoing: u8) -> u64 {
        let shifted = self.mul(self.sub(krf_at_p, self.code(outgoing)), self.base_inverse);
        self.add(self.mul(self.code(incoming), self.lead_power), shifted)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Which total order on `k`-mers the engines use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OrderMode {
    /// Compare fingerprints as integers. Colliding `k`-mers compare equal.
    #[default]
    Krf,
    /// Compare the letters themselves. Collision-free, `O(k)` per comparison.
    Lex,
}

impl OrderMode {
    pub fn name(self) -> &'static str {
        match self {
            OrderMode::Krf => "krf",
            OrderMode::Lex => "lex",
        }
    }
}

impl fmt::Display for OrderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "krf" => Ok(OrderMode::Krf),
            "lex" => Ok(OrderMode::Lex),
            _ => Err(Error::InvalidParameter("order must be `lex` or `krf`")),
        }
    }
}

const INLINE_LEX: usize = 16;

/// The letters of one fragment, compared lexicographically.
///
/// Up to 16 letters are stored inline; longer fragments share one heap
/// allocation between clones.
#[derive(Clone)]
pub enum LexKey {
    Inline { len: u8, bytes: [u8; INLINE_LEX] },
    Shared(Arc<[u8]>),
}

impl LexKey {
    pub fn new(letters: &[u8]) -> Self {
        Self::from_letters(letters.iter().copied(), letters.len())
    }

    pub(crate) fn from_letters(letters: impl Iterator<Item = u8>, len: usize) -> Self {
        if len <= INLINE_LEX {
            let mut bytes = [0u8; INLINE_LEX];
            for (slot, a) in bytes.iter_mut().zip(letters) {
                *slot = a;
            }
            LexKey::Inline {
                len: len as u8,
                bytes,
            }
        } else {
            LexKey::Shared(letters.take(len).collect::<Vec<u8>>().into())
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        match self {
            LexKey::Inline { len, bytes } => &bytes[..*len as usize],
            LexKey::Shared(bytes) => bytes,
        }
    }
}

impl PartialEq for LexKey {
    fn eq(&self, other: &Self) -> bool {
        self.as_bytes() == other.as_bytes()
    }
}

impl Eq for LexKey {}

impl PartialOrd for LexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_bytes().cmp(other.as_bytes())
    }
}

impl fmt::Debug for LexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_bytes().escape_ascii())
    }
}

/// The value a fragment is ranked by. Values of one engine always share a
/// mode.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrderValue {
    Krf(u64),
    Lex(LexKey),
}

/// A fingerprint configuration together with the order mode; everything an
/// engine needs to rank fragments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmerOrder {
    hash: HashConfig,
    mode: OrderMode,
}

impl KmerOrder {
    pub fn new(hash: HashConfig, mode: OrderMode) -> Self {
        KmerOrder { hash, mode }
    }

    /// Default fingerprints for `k` and `seed` in the given mode.
    pub fn seeded(k: usize, seed: u64, mode: OrderMode) -> Result<Self, Error> {
        Ok(Self::new(HashConfig::new(k, seed)?, mode))
    }

    pub fn lex(k: usize) -> Result<Self, Error> {
        Self::seeded(k, 0, OrderMode::Lex)
    }

    pub fn k(&self) -> usize {
        self.hash.k
    }

    pub fn mode(&self) -> OrderMode {
        self.mode
    }

    pub fn hash(&self) -> &HashConfig {
        &self.hash
    }

    /// Value of a fragment computed from scratch in `O(k)`.
    pub fn direct_value(&self, letters: &[u8]) -> Result<OrderValue, Error> {
        match self.mode {
            OrderMode::Krf => self.hash.krf_direct(letters).map(OrderValue::Krf),
            OrderMode::Lex if letters.len() == self.k() => Ok(OrderValue::Lex(LexKey::new(letters))),
            OrderMode::Lex => Err(Error::FragmentLength {
                expected: self.k(),
                got: letters.len(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    // Plain polynomial evaluation with explicit powers; shares no code with
    // the Horner/rolling paths.
    fn polynomial(letters: &[u8], modulus: u64, base: u64) -> u64 {
        let k = letters.len();
        let mut total: u128 = 0;
        for (j, &a) in letters.iter().enumerate() {
            let mut power: u128 = 1;
            for _ in 0..(k - 1 - j) {
                power = power * base as u128 % modulus as u128;
            }
            total = (total + a as u128 % modulus as u128 * power) % modulus as u128;
        }
        total as u64
    }

    #[test]
    fn small_examples() {
        let cfg1 = HashConfig::new(1, 7).unwrap();
        assert_eq!(cfg1.krf_direct(&[1]).unwrap(), 1);

        let cfg = HashConfig::with_params(2, 97, 10).unwrap();
        assert_eq!(cfg.krf_direct(&[1, 2]).unwrap(), 12);
        assert_eq!(cfg.krf_direct(&[2, 3]).unwrap(), 23);
        assert_eq!(cfg.roll_right(12, 1, 3), 23);
        assert_eq!(cfg.roll_left(23, 1, 3), 12);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let cfg = HashConfig::with_params(2, 97, 10).unwrap();
        assert_eq!(
            cfg.krf_direct(&[1, 2, 3]),
            Err(Error::FragmentLength { expected: 2, got: 3 })
        );
    }

    #[test]
    fn constant_string_rolls_to_itself() {
        let cfg = HashConfig::new(5, 3).unwrap();
        let h = cfg.krf_direct(b"aaaaa").unwrap();
        assert_eq!(cfg.roll_right(h, b'a', b'a'), h);
        assert_eq!(cfg.roll_left(h, b'a', b'a'), h);
    }

    #[test]
    fn parameters_are_validated() {
        assert!(HashConfig::with_params(3, 91, 10).is_err());
        assert!(HashConfig::with_params(3, 97, 96).is_err());
        assert!(HashConfig::with_params(3, 97, 1).is_err());
        assert!(HashConfig::new(0, 0).is_err());
        assert!(is_prime(MERSENNE_61));
        assert!(!is_prime(MERSENNE_61 - 2));
    }

    #[test]
    fn seed_fixes_base() {
        let a = HashConfig::new(4, 42).unwrap();
        let b = HashConfig::new(4, 42).unwrap();
        let c = HashConfig::new(4, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.base(), c.base());
        assert!(a.base() >= 2 && a.base() <= MERSENNE_61 - 2);
        assert_eq!(a.base() as u128 * a.base_inverse() as u128 % MERSENNE_61 as u128, 1);
    }

    #[test]
    fn sweeps_match_polynomial() {
        let mut rng = SmallRng::seed_from_u64(11);
        for _ in 0..50 {
            let k = rng.random_range(1..=16);
            let text: Vec<u8> = (0..64).map(|_| rng.random()).collect();
            let cfg = HashConfig::new(k, rng.random()).unwrap();
            let expected: Vec<u64> = text
                .windows(k)
                .map(|w| polynomial(w, cfg.modulus(), cfg.base()))
                .collect();
            let mut h = cfg.krf_direct(&text[..k]).unwrap();
            for p in 0..expected.len() {
                assert_eq!(h, expected[p]);
                if p + k < text.len() {
                    h = cfg.roll_right(h, text[p], text[p + k]);
                }
            }
            let last = text.len() - k;
            let mut h = cfg.krf_direct(&text[last..]).unwrap();
            for p in (0..=last).rev() {
                assert_eq!(h, expected[p]);
                if p > 0 {
                    h = cfg.roll_left(h, text[p - 1], text[p + k - 1]);
                }
            }
        }
    }

    #[test]
    fn small_modulus_sweep() {
        let cfg = HashConfig::with_params(3, 97, 10).unwrap();
        let text: Vec<u8> = (0u8..40).map(|i| i.wrapping_mul(37) % 200).collect();
        let mut h = cfg.krf_direct(&text[..3]).unwrap();
        for p in 0..text.len() - 3 {
            h = cfg.roll_right(h, text[p], text[p + 3]);
            assert_eq!(h, polynomial(&text[p + 1..p + 4], 97, 10));
        }
    }

    #[test]
    fn lex_keys_compare_like_slices() {
        let mut rng = SmallRng::seed_from_u64(5);
        for _ in 0..2000 {
            let len = rng.random_range(1..=24);
            let a: Vec<u8> = (0..len).map(|_| rng.random_range(b'a'..=b'c')).collect();
            let b: Vec<u8> = (0..len).map(|_| rng.random_range(b'a'..=b'c')).collect();
            let naive = {
                let mut ord = Ordering::Equal;
                for i in 0..len {
                    if a[i] != b[i] {
                        ord = if a[i] < b[i] { Ordering::Less } else { Ordering::Greater };
                        break;
                    }
                }
                ord
            };
            assert_eq!(LexKey::new(&a).cmp(&LexKey::new(&b)), naive);
        }
    }

    #[test]
    fn order_mode_names() {
        assert_eq!("lex".parse::<OrderMode>().unwrap(), OrderMode::Lex);
        assert_eq!("krf".parse::<OrderMode>().unwrap(), OrderMode::Krf);
        assert!("hash".parse::<OrderMode>().is_err());
        assert_eq!(alloc::string::ToString::to_string(&OrderMode::Lex), "lex");
    }
}
