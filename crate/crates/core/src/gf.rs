//! Table-based arithmetic for small finite fields GF(p^k), q = p^k <= 128.
//!
//! Elements are integer indices in `[0, q)`: index 0 is the zero element and
//! a nonzero index encodes the polynomial coordinates of the element in base
//! `p` (index `c0 + c1*p + ... + c_{k-1}*p^{k-1}` is the residue class of
//! `c0 + c1*x + ...`). All operations go through lookup tables built once at
//! construction; nothing touches polynomial arithmetic afterwards, so the hot
//! matrix loops elsewhere in the crate pay one table load per field op.
//!
//! The modulus for each extension field comes from a fixed built-in table of
//! Conway polynomials, so element encodings are bit-identical across runs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {0} exceeds the supported bound 128")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("division by zero")]
    DivisionByZero,
}

/// Conway polynomials for every proper extension with p^k <= 128,
/// as ascending coefficient lists (constant term first, monic).
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
];

/// A small finite field with all arithmetic precomputed into tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u8,
    exp_table: Vec<u8>,
    log_table: Vec<u8>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    neg_table: Vec<u8>,
    inv_table: Vec<u8>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over GF(p) and reduce mod `modulus` (monic).
fn polymul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &mi) in modulus.iter().enumerate().take(k) {
            // subtract c * x^(d-k) * modulus
            let idx = d - k + i;
            prod[idx] = (prod[idx] + p * p - (c * mi) % p) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

fn coeffs_to_idx(coeffs: &[u32], p: u32) -> u8 {
    let mut idx = 0u32;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c;
    }
    idx as u8
}

fn idx_to_coeffs(mut idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(k as usize);
    for _ in 0..k {
        coeffs.push(idx % p);
        idx /= p;
    }
    coeffs
}

/// Check irreducibility of a monic polynomial over GF(p) by trial division
/// with every monic polynomial of degree <= deg/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=(k / 2) {
        // all monic polynomials of degree d: p^d choices of lower coefficients
        let count = p.pow(d as u32);
        'cand: for c in 0..count {
            let mut div = idx_to_coeffs(c, p, d as u32);
            div.push(1);
            // long division remainder of modulus by div
            let mut rem: Vec<u32> = modulus.to_vec();
            while rem.len() > d && rem.iter().any(|&x| x != 0) {
                let deg = match rem.iter().rposition(|&x| x != 0) {
                    Some(dd) => dd,
                    None => break,
                };
                if deg < d {
                    break;
                }
                let lead = rem[deg];
                for (i, &ci) in div.iter().enumerate() {
                    let idx = deg - d + i;
                    rem[idx] = (rem[idx] + p * p - (lead * ci) % p) % p;
                }
                if rem[deg] != 0 {
                    continue 'cand; // should not happen, div is monic
                }
            }
            if rem.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_primitive_root(p: u32) -> u32 {
    'outer: for g in 2..p {
        let mut x = 1u64;
        for _ in 0..p - 2 {
            x = x * g as u64 % p as u64;
            if x == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    1 // p == 2
}

impl FieldSpec {
    /// Build GF(p^k). Fails if `p` is not prime or p^k > 128.
    pub fn new(p: u32, k: u32) -> Result<FieldSpec, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let q64 = (p as u64).pow(k);
        if k == 0 || q64 > 128 {
            return Err(GfError::TooLarge(q64));
        }
        let q = q64 as u32;

        let (modulus, primitive) = if k == 1 {
            let g = smallest_primitive_root(p);
            (vec![(p - g) % p, 1], g as u8)
        } else {
            let m = MODULI
                .iter()
                .find(|&&(mp, mk, _)| mp == p && mk == k)
                .expect("modulus table covers all p^k <= 128");
            (m.2.to_vec(), p as u8) // x itself; Conway polynomials are primitive
        };
        assert!(is_irreducible(&modulus, p), "built-in modulus must be irreducible");

        // exp/log tables over the fixed primitive element
        let mut exp_table = vec![0u8; (q - 1) as usize];
        let mut log_table = vec![0u8; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        let gen = idx_to_coeffs(primitive as u32, p, k);
        for (i, slot) in exp_table.iter_mut().enumerate() {
            let idx = coeffs_to_idx(&cur, p);
            assert!(idx != 0 && (i == 0 || log_table[idx as usize] == 0 || idx == 1));
            assert!(
                i == 0 || idx != 1,
                "primitive element has order < q-1"
            );
            *slot = idx;
            log_table[idx as usize] = i as u8;
            cur = polymul_mod(&cur, &gen, &modulus, p);
        }
        assert_eq!(coeffs_to_idx(&cur, p), 1, "primitive element order != q-1");

        // addition: coefficient-wise mod p
        let mut add_table = vec![0u8; (q * q) as usize];
        for a in 0..q {
            let ca = idx_to_coeffs(a, p, k);
            for b in 0..q {
                let cb = idx_to_coeffs(b, p, k);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
                add_table[(a * q + b) as usize] = coeffs_to_idx(&sum, p);
            }
        }
        let mut neg_table = vec![0u8; q as usize];
        for a in 0..q {
            let ca = idx_to_coeffs(a, p, k);
            let na: Vec<u32> = ca.iter().map(|&x| (p - x) % p).collect();
            neg_table[a as usize] = coeffs_to_idx(&na, p);
        }

        // multiplication via discrete logs
        let mut mul_table = vec![0u8; (q * q) as usize];
        for a in 1..q {
            for b in 1..q {
                let e = (log_table[a as usize] as u32 + log_table[b as usize] as u32) % (q - 1);
                mul_table[(a * q + b) as usize] = exp_table[e as usize];
            }
        }
        let mut inv_table = vec![0u8; q as usize];
        for a in 1..q {
            let e = ((q - 1) - log_table[a as usize] as u32) % (q - 1);
            inv_table[a as usize] = exp_table[e as usize];
        }

        Ok(FieldSpec {
            p,
            k,
            q,
            modulus,
            primitive,
            exp_table,
            log_table,
            add_table,
            mul_table,
            neg_table,
            inv_table,
        })
    }

    /// Build GF(q) from the prime power q itself.
    pub fn from_q(q: u32) -> Result<FieldSpec, GfError> {
        if q < 2 {
            return Err(GfError::NotPrimePower(q));
        }
        let mut p = 2;
        while !q.is_multiple_of(p) {
            p += 1;
            if p * p > q {
                p = q;
            }
        }
        let mut k = 0;
        let mut m = q;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if m != 1 {
            return Err(GfError::NotPrimePower(q));
        }
        FieldSpec::new(p, k)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Index of the fixed primitive element.
    #[inline]
    pub fn primitive(&self) -> u8 {
        self.primitive
    }
    /// Index of the multiplicative identity.
    #[inline]
    pub fn one(&self) -> u8 {
        1
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_table[a as usize * self.q as usize + b as usize]
    }
    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_table[a as usize * self.q as usize + b as usize]
    }
    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_table[a as usize]
    }
    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: u8) -> Result<u8, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.inv_table[a as usize])
    }
    /// Inverse of a known-nonzero element.
    #[inline(always)]
    pub fn inv_unchecked(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv_table[a as usize]
    }

    /// a^e; the exponent is reduced mod q-1 for nonzero bases. 0^0 = 1.
    pub fn pow(&self, a: u8, e: u64) -> u8 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let e = (self.log_table[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp_table[e as usize]
    }

    /// a^(p^i), the i-th iterate of the Frobenius automorphism.
    pub fn frobenius(&self, a: u8, i: u32) -> u8 {
        let mut x = a;
        for _ in 0..i {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    pub fn exp(&self, e: u32) -> u8 {
        self.exp_table[(e % (self.q - 1)) as usize]
    }
    pub fn log(&self, a: u8) -> Result<u8, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.log_table[a as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldSpec> {
        let mut v = Vec::new();
        for (p, kmax) in [(2u32, 7u32), (3, 4), (5, 3), (7, 2), (11, 2), (13, 1)] {
            for k in 1..=kmax {
                v.push(FieldSpec::new(p, k).unwrap());
            }
        }
        v
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(FieldSpec::new(2, 8).unwrap_err(), GfError::TooLarge(256));
        assert!(FieldSpec::from_q(12).is_err());
    }

    #[test]
    fn gf2_basics() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.frobenius(1, 1), 1);
    }

    #[test]
    fn gf4_multiplication_table() {
        // GF(4) with modulus x^2+x+1: x * (x+1) = 1, verified against the
        // full 4x4 brute-force polynomial multiplication table.
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = 2u8;
        let x1 = 3u8;
        assert_eq!(f.mul(x, x1), 1);
        for a in 0..4u8 {
            for b in 0..4u8 {
                let ca = idx_to_coeffs(a as u32, 2, 2);
                let cb = idx_to_coeffs(b as u32, 2, 2);
                let prod = polymul_mod(&ca, &cb, &[1, 1, 1], 2);
                assert_eq!(f.mul(a, b), coeffs_to_idx(&prod, 2));
            }
        }
        // characteristic 2
        assert_eq!(f.add(x, x), 0);
        // Frobenius: x^2 = x+1 mod x^2+x+1
        assert_eq!(f.frobenius(x, 1), x1);
    }

    #[test]
    fn gf8_cyclic_of_order_seven() {
        let f = FieldSpec::new(2, 3).unwrap();
        let g = f.primitive();
        assert_eq!(f.pow(g, 7), 1);
        for a in 1..8u8 {
            assert_eq!(f.mul(f.inv(a).unwrap(), a), 1);
            assert_eq!(f.pow(a, 7), 1);
            assert_eq!(f.frobenius(a, 3), a);
        }
    }

    #[test]
    fn log_exp_roundtrip_everywhere() {
        for f in all_fields() {
            for a in 1..f.q() as u8 {
                assert_eq!(f.exp(f.log(a).unwrap() as u32), a);
            }
        }
    }

    #[test]
    fn field_axioms() {
        for f in all_fields() {
            let q = f.q() as u8;
            if f.q() <= 16 {
                for a in 0..q {
                    for b in 0..q {
                        assert_eq!(f.add(a, b), f.add(b, a));
                        assert_eq!(f.mul(a, b), f.mul(b, a));
                        for c in 0..q {
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(
                                f.mul(a, f.add(b, c)),
                                f.add(f.mul(a, b), f.mul(a, c))
                            );
                        }
                    }
                }
            } else {
                // deterministic pseudo-random triples
                let mut s = 0x9e3779b97f4a7c15u64;
                for _ in 0..10_000 {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let a = ((s >> 33) % f.q() as u64) as u8;
                    let b = ((s >> 13) % f.q() as u64) as u8;
                    let c = (s % f.q() as u64) as u8;
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            // inverses and negation
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
            assert!(f.inv(0).is_err());
        }
    }

    #[test]
    fn frobenius_full_orbit_is_identity() {
        for f in all_fields() {
            for a in 0..f.q() as u8 {
                assert_eq!(f.frobenius(a, f.k()), a);
            }
        }
    }

    #[test]
    fn subfield_embedding_of_gf2_is_identity_on_01() {
        for k in 1..=7 {
            let f = FieldSpec::new(2, k).unwrap();
            assert_eq!(f.add(1, 1), 0);
            assert_eq!(f.mul(1, 1), 1);
        }
    }
}
