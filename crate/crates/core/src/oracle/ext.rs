//! Evaluation fields for the randomized Pfaffian-degree oracle.
//!
//! Identity testing needs a field much larger than the degree of the
//! polynomials involved. Instances over small GF(p) are therefore evaluated in
//! an extension GF(p^k) that contains GF(p), built from a random irreducible
//! polynomial. Three backends share the [`EvalField`] interface: the prime
//! field itself (`k = 1`), bit-packed GF(2^k), and GF(p^k) for odd `p`.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::field::PrimeField;

/// Largest extension degree supported by the polynomial backends.
pub const MAX_DEGREE: usize = 32;

/// Arithmetic interface used by the evaluation and interpolation code.
pub trait EvalField {
    /// Element representation.
    type E: Copy + Eq + Hash + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: Self::E) -> Self::E;
    /// Embedding of a residue of the prime subfield.
    fn from_base(&self, x: u64) -> Self::E;
    /// Uniform nonzero element.
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> Self::E;
    /// Number of elements `p^k`.
    fn size(&self) -> u128;

    fn is_zero(&self, a: Self::E) -> bool {
        a == self.zero()
    }

    fn pow(&self, mut a: Self::E, mut e: u128) -> Self::E {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
}

/// GF(p) used directly.
#[derive(Debug, Clone, Copy)]
pub struct PrimeEval(pub PrimeField);

impl EvalField for PrimeEval {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.0.add(a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.0.sub(a, b)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.0.mul(a, b)
    }
    fn inv(&self, a: u64) -> u64 {
        self.0.inv(a).expect("nonzero")
    }
    fn from_base(&self, x: u64) -> u64 {
        x % self.0.modulus()
    }
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.0.modulus())
    }
    fn size(&self) -> u128 {
        self.0.modulus() as u128
    }
}

/// GF(2^k) with elements packed into the low `k` bits of a word.
#[derive(Debug, Clone, Copy)]
pub struct Binary {
    k: u32,
    /// Reduction polynomial including the `x^k` term.
    modulus: u64,
}

impl Binary {
    /// Builds GF(2^k) from an irreducible polynomial given as bits.
    pub fn new(k: u32, modulus: u64) -> Self {
        assert!((1..=MAX_DEGREE as u32).contains(&k));
        Binary { k, modulus }
    }
}

impl EvalField for Binary {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        let mut prod = 0u64;
        let mut b = b;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        let k = self.k;
        let mut bit = 2 * k - 2;
        while bit >= k {
            if prod >> bit & 1 == 1 {
                prod ^= self.modulus << (bit - k);
            }
            bit -= 1;
        }
        prod
    }
    fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, (1u128 << self.k) - 2)
    }
    fn from_base(&self, x: u64) -> u64 {
        x & 1
    }
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..(1u64 << self.k))
    }
    fn size(&self) -> u128 {
        1u128 << self.k
    }
}

/// GF(p^k) for `k ≥ 2` and `p < 2^31`, elements as coefficient arrays.
#[derive(Debug, Clone, Copy)]
pub struct PolyExt {
    p: PrimeField,
    k: usize,
    /// Monic reduction polynomial, coefficients of `x^0 … x^{k-1}`.
    low: [u64; MAX_DEGREE],
}

impl PolyExt {
    /// Builds GF(p^k) from a monic irreducible polynomial (`k+1` coefficients,
    /// lowest degree first).
    pub fn new(p: PrimeField, f: &[u64]) -> Self {
        let k = f.len() - 1;
        assert!((2..=MAX_DEGREE).contains(&k) && f[k] == 1);
        assert!(p.modulus() < (1 << 31));
        let mut low = [0u64; MAX_DEGREE];
        low[..k].copy_from_slice(&f[..k]);
        PolyExt { p, k, low }
    }
}

impl EvalField for PolyExt {
    type E = [u64; MAX_DEGREE];
    fn zero(&self) -> Self::E {
        [0; MAX_DEGREE]
    }
    fn one(&self) -> Self::E {
        let mut e = [0; MAX_DEGREE];
        e[0] = 1;
        e
    }
    fn add(&self, a: Self::E, b: Self::E) -> Self::E {
        let mut r = a;
        for i in 0..self.k {
            r[i] = self.p.add(a[i], b[i]);
        }
        r
    }
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E {
        let mut r = a;
        for i in 0..self.k {
            r[i] = self.p.sub(a[i], b[i]);
        }
        r
    }
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E {
        let k = self.k;
        let p = self.p.modulus();
        // Products are below 2^62 / 2^31 per term; reduce after each row.
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] = (t[i + j] + a[i] * b[j]) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = t[d];
            if c == 0 {
                continue;
            }
            t[d] = 0;
            let neg = p - c;
            for j in 0..k {
                t[d - k + j] = (t[d - k + j] + neg * self.low[j]) % p;
            }
        }
        let mut r = [0u64; MAX_DEGREE];
        r[..k].copy_from_slice(&t[..k]);
        r
    }
    fn inv(&self, a: Self::E) -> Self::E {
        assert!(!self.is_zero(a), "inverse of zero");
        self.pow(a, self.size() - 2)
    }
    fn from_base(&self, x: u64) -> Self::E {
        let mut e = [0; MAX_DEGREE];
        e[0] = x % self.p.modulus();
        e
    }
    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> Self::E {
        loop {
            let mut e = [0; MAX_DEGREE];
            for c in e.iter_mut().take(self.k) {
                *c = rng.gen_range(0..self.p.modulus());
            }
            if !self.is_zero(e) {
                return e;
            }
        }
    }
    fn size(&self) -> u128 {
        (self.p.modulus() as u128).pow(self.k as u32)
    }
}

/// Polynomials over GF(p), coefficients lowest degree first, no trailing zeros.
mod poly {
    use crate::field::PrimeField;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(f: PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
        while a.len() > dm {
            let d = a.len() - 1;
            let c = f.mul(a[d], lead_inv);
            for j in 0..=dm {
                let idx = d - dm + j;
                a[idx] = f.sub(a[idx], f.mul(c, m[j]));
            }
            a = trim(a);
        }
        a
    }

    pub fn mulmod(f: PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut t = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                t[i + j] = f.add(t[i + j], f.mul(x, y));
            }
        }
        rem(f, &t, m)
    }

    pub fn powmod(f: PrimeField, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(f, a, m);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(f, &r, &b, m);
            }
            b = mulmod(f, &b, &b, m);
            e >>= 1;
        }
        r
    }

    pub fn gcd(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(v)
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree `k ≥ 1`.
pub fn is_irreducible(f: PrimeField, m: &[u64]) -> bool {
    let k = m.len() - 1;
    let p = f.modulus();
    let x = vec![0u64, 1];
    // frob[i] = x^{p^i} mod m
    let mut frob = vec![poly::rem(f, &x, m)];
    for i in 1..=k {
        let next = poly::powmod(f, &frob[i - 1], p, m);
        frob.push(next);
    }
    if !poly::sub(f, &frob[k], &poly::rem(f, &x, m)).is_empty() {
        return false;
    }
    for q in prime_divisors(k) {
        let h = poly::sub(f, &frob[k / q], &x);
        let g = poly::gcd(f, &h, m);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Draws a random monic irreducible polynomial of degree `k` over GF(p).
pub fn random_irreducible<R: Rng>(f: PrimeField, k: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let mut m: Vec<u64> = (0..k).map(|_| rng.gen_range(0..f.modulus())).collect();
        m.push(1);
        if m[0] != 0 && is_irreducible(f, &m) {
            return m;
        }
    }
}

/// Smallest `k` with `p^k ≥ min_size`.
pub fn extension_degree(p: u64, min_size: u128) -> usize {
    let mut k = 1;
    let mut size = p as u128;
    while size < min_size {
        size *= p as u128;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field_axioms<F: EvalField>(ef: &F, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let a = ef.random_nonzero(&mut rng);
            let b = ef.random_nonzero(&mut rng);
            let c = ef.random_nonzero(&mut rng);
            assert_eq!(ef.mul(a, ef.inv(a)), ef.one());
            assert_eq!(ef.mul(a, ef.add(b, c)), ef.add(ef.mul(a, b), ef.mul(a, c)));
            assert_eq!(ef.mul(ef.mul(a, b), c), ef.mul(a, ef.mul(b, c)));
            assert_eq!(ef.sub(ef.add(a, b), b), a);
        }
    }

    #[test]
    fn known_irreducibles() {
        let f2 = PrimeField::new(2).unwrap();
        assert!(is_irreducible(f2, &[1, 1, 1]));
        assert!(!is_irreducible(f2, &[1, 0, 1]));
        assert!(is_irreducible(f2, &[1, 1, 0, 1]));
        let f7 = PrimeField::new(7).unwrap();
        assert!(is_irreducible(f7, &[1, 0, 1])); // x^2 + 1, -1 is a non-residue mod 7
        assert!(!is_irreducible(f7, &[6, 0, 1])); // x^2 - 1
    }

    #[test]
    fn extension_fields_satisfy_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f2 = PrimeField::new(2).unwrap();
        let m = random_irreducible(f2, 31, &mut rng);
        let bits = m
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (c << i));
        field_axioms(&Binary::new(31, bits), 2);
        let f7 = PrimeField::new(7).unwrap();
        let m = random_irreducible(f7, 12, &mut rng);
        field_axioms(&PolyExt::new(f7, &m), 3);
        field_axioms(&PrimeEval(PrimeField::new(2_147_483_647).unwrap()), 4);
    }

    #[test]
    fn degree_choice() {
        assert_eq!(extension_degree(2, (1 << 31) - 1), 31);
        assert_eq!(extension_degree(7, (1 << 31) - 1), 12);
        assert_eq!(extension_degree(2_147_483_647, (1 << 31) - 1), 1);
    }
}
