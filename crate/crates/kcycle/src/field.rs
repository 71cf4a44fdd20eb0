//! Arithmetic in GF(2^64), the finite field with 2^64 elements.
//!
//! Elements are polynomials over GF(2) modulo `x^64 + x^4 + x^3 + x + 1`,
//! packed into one `u64` (bit `i` is the coefficient of `x^i`). Addition is
//! XOR; multiplication is a carryless product followed by reduction. All
//! operations are exact, so determinants computed over this field carry no
//! rounding error and zero tests are meaningful.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign};

/// Low 64 bits of the field modulus `x^64 + x^4 + x^3 + x + 1`.
///
/// The leading `x^64` term is implicit: reducing an overflow bit folds it
/// back in as `x^4 + x^3 + x + 1 = 0x1b`.
pub const MODULUS_TAIL: u64 = 0x1b;

/// An element of GF(2^64).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn new(bits: u64) -> FieldElement {
        FieldElement(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Portable shift-and-reduce product. One step per bit of `rhs`,
    /// reducing overflow as it appears. Bit-identical to the carryless
    /// fast path; the tests hold the two against each other.
    pub fn mul_shift_reduce(self, rhs: FieldElement) -> FieldElement {
        let mut acc = 0u64;
        let mut shifted = self.0;
        for i in 0..64 {
            let select = ((rhs.0 >> i) & 1).wrapping_neg();
            acc ^= shifted & select;
            let overflow = (shifted >> 63).wrapping_neg();
            shifted = (shifted << 1) ^ (MODULUS_TAIL & overflow);
        }
        FieldElement(acc)
    }

    /// Repeated squaring.
    pub fn pow(self, mut exp: u64) -> FieldElement {
        let mut base = self;
        let mut acc = FieldElement::ONE;
        while exp != 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, via exponentiation to `2^64 - 2`.
    ///
    /// Panics on zero: zero has no inverse.
    pub fn inv(self) -> FieldElement {
        assert!(!self.is_zero(), "division by zero in GF(2^64)");
        self.pow(u64::MAX - 1)
    }

    /// Canonical textual form: exactly 16 lowercase hex digits.
    pub fn to_hex(self) -> String {
        format!("{:016x}", self.0)
    }

    /// Parses 1..=16 lowercase hex digits. Rejects anything else,
    /// including uppercase digits and empty input.
    pub fn from_hex(s: &str) -> Option<FieldElement> {
        if s.is_empty() || s.len() > 16 {
            return None;
        }
        if !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return None;
        }
        u64::from_str_radix(s, 16).ok().map(FieldElement)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement(0x{:016x})", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl From<u64> for FieldElement {
    #[inline]
    fn from(bits: u64) -> FieldElement {
        FieldElement(bits)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    // Characteristic two: addition is exactly XOR.
    #[allow(clippy::suspicious_arithmetic_impl)]
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[allow(clippy::suspicious_op_assign_impl)]
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        #[cfg(target_arch = "x86_64")]
        {
            if hw_clmul_available() {
                let (lo, hi) = unsafe { clmul_wide_hw(self.0, rhs.0) };
                return FieldElement(reduce_wide(lo, hi));
            }
        }
        self.mul_shift_reduce(rhs)
    }
}

impl MulAssign for FieldElement {
    #[inline]
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

impl Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> FieldElement {
        iter.fold(FieldElement::ZERO, Add::add)
    }
}

impl Product for FieldElement {
    fn product<I: Iterator<Item = FieldElement>>(iter: I) -> FieldElement {
        iter.fold(FieldElement::ONE, Mul::mul)
    }
}

/// Folds a 128-bit carryless product back below `x^64`.
///
/// `x^64 = x^4 + x^3 + x + 1` mod the modulus, so the high word is folded
/// in twice: once for its 64 overflow bits, once for the at most 4 bits
/// that the first fold pushes past `x^63`.
#[inline]
fn reduce_wide(lo: u64, hi: u64) -> u64 {
    let fold = (hi << 4) ^ (hi << 3) ^ (hi << 1) ^ hi;
    let spill = (hi >> 60) ^ (hi >> 61) ^ (hi >> 63);
    let tail = (spill << 4) ^ (spill << 3) ^ (spill << 1) ^ spill;
    lo ^ fold ^ tail
}

#[cfg(target_arch = "x86_64")]
#[inline]
fn hw_clmul_available() -> bool {
    use std::sync::OnceLock;
    static AVAILABLE: OnceLock<bool> = OnceLock::new();
    *AVAILABLE.get_or_init(|| {
        std::is_x86_feature_detected!("pclmulqdq") && std::is_x86_feature_detected!("sse4.1")
    })
}

/// 64x64 -> 128 carryless multiply via `pclmulqdq`, as (low, high) words.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse4.1")]
unsafe fn clmul_wide_hw(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_extract_epi64, _mm_set_epi64x};
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let prod = _mm_clmulepi64_si128::<0>(va, vb);
    (
        _mm_extract_epi64::<0>(prod) as u64,
        _mm_extract_epi64::<1>(prod) as u64,
    )
}

/// Counter-based deterministic generator: the value at position `counter`
/// is a pure function of `(seed, counter)`, so draws are reproducible no
/// matter how work is scheduled.
#[inline]
pub(crate) fn mix64(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic stream of field elements derived from a 64-bit seed.
///
/// State is just `(seed, counter)` and is always passed explicitly;
/// cloning the state replays the stream.
#[derive(Clone, Debug)]
pub struct FieldRng {
    seed: u64,
    counter: u64,
}

impl FieldRng {
    pub fn new(seed: u64) -> FieldRng {
        FieldRng { seed, counter: 0 }
    }

    /// Uniform element of GF(2^64).
    pub fn next_element(&mut self) -> FieldElement {
        let value = mix64(self.seed, self.counter);
        self.counter += 1;
        FieldElement(value)
    }

    /// Uniform element of GF(2^64) excluding zero.
    pub fn next_nonzero(&mut self) -> FieldElement {
        loop {
            let value = self.next_element();
            if !value.is_zero() {
                return value;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(bits: u64) -> FieldElement {
        FieldElement::new(bits)
    }

    /// Inverse modulo the field polynomial by extended Euclid over
    /// GF(2)[x], sharing nothing with the exponentiation path.
    fn egcd_inverse(a: u64) -> u64 {
        assert_ne!(a, 0);
        fn deg(p: u128) -> i32 {
            127 - p.leading_zeros() as i32
        }
        let mut r0: u128 = (1u128 << 64) | MODULUS_TAIL as u128;
        let mut r1: u128 = a as u128;
        let mut t0: u128 = 0;
        let mut t1: u128 = 1;
        while r1 != 0 {
            while deg(r0) >= deg(r1) {
                let shift = (deg(r0) - deg(r1)) as u32;
                r0 ^= r1 << shift;
                t0 ^= t1 << shift;
                if r0 == 0 {
                    break;
                }
            }
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut t0, &mut t1);
        }
        assert_eq!(r0, 1, "input not coprime with an irreducible modulus");
        t0 as u64
    }

    #[test]
    fn add_is_xor_and_self_inverse() {
        assert_eq!(fe(0xdead) + fe(0xdead), FieldElement::ZERO);
        assert_eq!(fe(0b101) + fe(0b011), fe(0b110));
        let a = fe(0x0123_4567_89ab_cdef);
        assert_eq!(a + FieldElement::ZERO, a);
    }

    #[test]
    fn mul_identities_and_modulus_wrap() {
        let a = fe(0xfeed_face_cafe_f00d);
        assert_eq!(a * FieldElement::ONE, a);
        assert_eq!(fe(2) * fe(2), fe(4));
        // x^63 * x = x^64 = x^4 + x^3 + x + 1
        assert_eq!(fe(0x8000_0000_0000_0000) * fe(2), fe(0x1b));
    }

    #[test]
    fn inv_of_one_and_two() {
        assert_eq!(FieldElement::ONE.inv(), FieldElement::ONE);
        let two_inv = fe(2).inv();
        assert_eq!(fe(2) * two_inv, FieldElement::ONE);
        assert_eq!(two_inv.bits(), egcd_inverse(2));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn inv_of_zero_panics() {
        let _ = FieldElement::ZERO.inv();
    }

    #[test]
    fn inv_matches_euclid_oracle() {
        let mut rng = FieldRng::new(0x1234);
        for _ in 0..200 {
            let a = rng.next_nonzero();
            assert_eq!(a.inv().bits(), egcd_inverse(a.bits()));
            assert_eq!(a * a.inv(), FieldElement::ONE);
        }
    }

    #[test]
    fn mul_matches_shift_reduce_reference() {
        let mut rng = FieldRng::new(0xabcdef);
        for _ in 0..10_000 {
            let a = rng.next_element();
            let b = rng.next_element();
            assert_eq!(a * b, a.mul_shift_reduce(b));
        }
    }

    #[test]
    fn rng_is_reproducible() {
        let mut a = FieldRng::new(42);
        let mut b = FieldRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_element(), b.next_element());
        }
        let mut c = FieldRng::new(43);
        let first: Vec<_> = (0..8).map(|_| FieldRng::new(42).next_element()).collect();
        assert!(first.iter().any(|&x| x != c.next_element()));
    }

    #[test]
    fn rng_bits_are_balanced() {
        let draws = 100_000u64;
        let mut counts = [0u64; 64];
        let mut rng = FieldRng::new(7);
        for _ in 0..draws {
            let v = rng.next_element().bits();
            for (bit, count) in counts.iter_mut().enumerate() {
                *count += (v >> bit) & 1;
            }
        }
        for &count in &counts {
            let frac = count as f64 / draws as f64;
            assert!((frac - 0.5).abs() < 0.01, "bit frequency {frac} out of range");
        }
    }

    #[test]
    fn nonzero_stream_never_yields_zero() {
        let mut rng = FieldRng::new(99);
        for _ in 0..1_000_000 {
            assert!(!rng.next_nonzero().is_zero());
        }
    }

    #[test]
    fn hex_round_trip_and_rejects() {
        let a = fe(0x00ab_cdef_0123_4567);
        assert_eq!(a.to_hex(), "00abcdef01234567");
        assert_eq!(FieldElement::from_hex(&a.to_hex()), Some(a));
        assert_eq!(FieldElement::from_hex("0"), Some(FieldElement::ZERO));
        assert_eq!(FieldElement::from_hex(""), None);
        assert_eq!(FieldElement::from_hex("00abcdef012345678"), None);
        assert_eq!(FieldElement::from_hex("ABCD"), None);
        assert_eq!(FieldElement::from_hex("12g4"), None);
    }

    proptest! {
        #[test]
        fn add_commutes_and_associates(a: u64, b: u64, c: u64) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!((a + b) + c, a + (b + c));
        }

        #[test]
        fn mul_commutes_and_associates(a: u64, b: u64, c: u64) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
        }

        #[test]
        fn mul_distributes_over_add(a: u64, b: u64, c: u64) {
            let (a, b, c) = (fe(a), fe(b), fe(c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
        }

        #[test]
        fn frobenius_square_is_additive(a: u64, b: u64) {
            let (a, b) = (fe(a), fe(b));
            prop_assert_eq!((a + b) * (a + b), a * a + b * b);
        }

        #[test]
        fn nonzero_elements_have_inverses(a in 1u64..) {
            let a = fe(a);
            prop_assert_eq!(a * a.inv(), FieldElement::ONE);
        }

        #[test]
        fn product_of_nonzero_is_nonzero(a in 1u64.., b in 1u64..) {
            prop_assert!(!(fe(a) * fe(b)).is_zero());
        }
    }
}
