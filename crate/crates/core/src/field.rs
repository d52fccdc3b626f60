//! Exact arithmetic in prime fields GF(p) and in arbitrary-precision rationals.
//!
//! Matrix code works on raw `u64` residues through [`PrimeField`] for speed;
//! [`FieldElement`] is the checked value type used at API boundaries, where
//! mixing two moduli must be reported rather than silently reduced.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

/// Errors raised by field construction and checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The requested modulus is not a prime number.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    /// Two operands live in different fields.
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    /// Division by zero or inversion of zero.
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

/// Per-thread counter of field multiplications and inversions.
///
/// Dense routines charge their work in bulk; the solver reads the counter
/// before and after a run to report the arithmetic cost of that run.
pub mod ops {
    use super::OPS;

    /// Adds `n` operations to the counter of the current thread.
    #[inline]
    pub fn charge(n: u64) {
        OPS.with(|c| c.set(c.get().wrapping_add(n)));
    }

    /// Returns the current value of the counter of the current thread.
    pub fn read() -> u64 {
        OPS.with(|c| c.get())
    }
}

/// Decides primality of a machine word.
///
/// Trial division is used below 2^32; above that a Miller-Rabin test with the
/// first twelve prime bases, which is exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < (1 << 32) {
        if n.is_multiple_of(2) {
            return n == 2;
        }
        let mut d = 3u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if BASES.iter().any(|&b| n.is_multiple_of(b)) {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let f = PrimeField { modulus: n };
    'outer: for &a in &BASES {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The prime field GF(p) for a word-sized prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Builds GF(p), rejecting composite moduli.
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if is_prime(modulus) {
            Ok(PrimeField { modulus })
        } else {
            Err(FieldError::NotPrime(modulus))
        }
    }

    /// The characteristic `p`.
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Wraps a residue into a checked element, reducing it first.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.modulus,
            modulus: self.modulus,
        }
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce_i64(&self, v: i64) -> u64 {
        let m = self.modulus as i128;
        (((v as i128) % m + m) % m) as u64
    }

    /// Reduces a big integer into `[0, p)`.
    pub fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let r = ((v % &m) + &m) % &m;
        u64::try_from(r).expect("residue fits in a word")
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        let m = self.modulus as u128;
        (if s >= m { s - m } else { s }) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            ((a as u128 + self.modulus as u128) - b as u128) as u64
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        a %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        let a = a % self.modulus;
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        let m = self.modulus as i128;
        ops::charge(1);
        Ok((((s0 % m) + m) % m) as u64)
    }
}

/// A residue tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

/// The three ring operations accepted by [`fp_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl FieldElement {
    /// The reduced residue in `[0, p)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The field this element belongs to.
    pub fn field(&self) -> PrimeField {
        PrimeField {
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse, failing on zero.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let f = self.field();
        Ok(f.element(f.inv(self.value)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Checked addition, subtraction or multiplication of two elements.
pub fn fp_arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if a.modulus != b.modulus {
        return Err(FieldError::ModulusMismatch(a.modulus, b.modulus));
    }
    let f = a.field();
    let v = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
    };
    Ok(f.element(v))
}

/// Checked inverse of a field element.
pub fn fp_inv(a: FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Parses an integer or an `a/b` fraction into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, RationalParseError> {
    let bad = || RationalParseError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `a` or `a/b` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Builds the rational `n`.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when `r` is an integer.
pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Absolute value helper kept here so callers need not import `Signed`.
pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_556));
        assert!(!is_prime(4_294_967_297));
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "7/2", "-5/10"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(PrimeField::new(6), Err(FieldError::NotPrime(6)));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn gf7_examples() {
        let f = gf(7);
        let add = fp_arith(f.element(3), f.element(0), ArithOp::Add).unwrap();
        assert_eq!(add.value(), 3);
        let mul = fp_arith(f.element(3), f.element(5), ArithOp::Mul).unwrap();
        assert_eq!(mul.value(), 1);
        assert_eq!(fp_inv(f.element(1)).unwrap().value(), 1);
        assert_eq!(fp_inv(f.element(3)).unwrap().value(), 5);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(fp_inv(gf(7).element(0)), Err(FieldError::ZeroInverse));
        assert_eq!(gf(7).inv(14), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn mixed_moduli_rejected() {
        let r = fp_arith(gf(7).element(1), gf(11).element(1), ArithOp::Sub);
        assert_eq!(r, Err(FieldError::ModulusMismatch(7, 11)));
    }

    #[test]
    fn gf101_multiplication_commutes() {
        let f = gf(101);
        for a in 0..101 {
            for b in 0..101 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
    }

    #[test]
    fn gf10007_random_inverses() {
        use rand::{Rng, SeedableRng};
        let f = gf(10007);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = rng.gen_range(1..10007);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_101() {
        for p in (2u64..=101).filter(|&p| is_prime(p)) {
            let f = gf(p);
            for a in 0..p {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..p {
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..p {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn reductions_are_canonical() {
        let f = gf(7);
        assert_eq!(f.reduce_i64(-1), 6);
        assert_eq!(f.reduce_i64(-14), 0);
        assert_eq!(f.reduce_big(&BigInt::from(-8)), 6);
        assert_eq!(f.element(23).value(), 2);
        assert_eq!(f.pow(3, 6), 1);
    }

    proptest::proptest! {
        #[test]
        fn rational_sum_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = BigRational::new(a.into(), b.into()) + BigRational::new(c.into(), d.into());
            let lhs = x * BigRational::from_integer((b * d).into());
            proptest::prop_assert_eq!(lhs, BigRational::from_integer((a * d + c * b).into()));
        }

        #[test]
        fn large_prime_inverse(a in 1u64..2_147_483_647) {
            let f = gf(2_147_483_647);
            proptest::prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }

        #[test]
        fn mul_matches_wide_arithmetic(a in proptest::num::u64::ANY, b in proptest::num::u64::ANY) {
            let p = 18_446_744_073_709_551_557u64;
            let f = gf(p);
            let (a, b) = (a % p, b % p);
            let want = ((a as u128 * b as u128) % p as u128) as u64;
            proptest::prop_assert_eq!(f.mul(a, b), want);
        }
    }
}
