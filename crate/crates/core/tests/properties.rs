//! Randomized algebraic property tests: field axioms for every supported
//! field size, ring laws and evaluation homomorphism for the exact
//! polynomials, and projective canonicalization invariants.

use mobius3::gf::FieldSpec;
use mobius3::pgl::{canonical_key, canonicalize, mat_det, mat_mul, Mat};
use mobius3::qpoly::QPoly;
use num_bigint::BigInt;
use proptest::prelude::*;

const FIELD_SIZES: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

proptest! {
    #[test]
    fn field_axioms(qi in 0..FIELD_SIZES.len(), a in 0u32..32, b in 0u32..32, c in 0u32..32) {
        let q = FIELD_SIZES[qi];
        let f = FieldSpec::from_q(q).unwrap();
        let a = (a % q) as u8;
        let b = (b % q) as u8;
        let c = (c % q) as u8;
        // commutativity and associativity
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        // distributivity
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        // identities and inverses
        prop_assert_eq!(f.add(a, 0), a);
        prop_assert_eq!(f.mul(a, 1), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        // Frobenius is additive: (a+b)^p = a^p + b^p
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn qpoly_ring_laws(
        ta in proptest::collection::vec((-9i64..10, 0u32..7), 0..5),
        tb in proptest::collection::vec((-9i64..10, 0u32..7), 0..5),
        tc in proptest::collection::vec((-9i64..10, 0u32..7), 0..5),
        x in 0u64..50,
    ) {
        let build = |ts: &[(i64, u32)]| {
            let terms: Vec<(i64, i64, u32)> = ts.iter().map(|&(c, e)| (c, 1, e)).collect();
            QPoly::from_terms(&terms)
        };
        let a = build(&ta);
        let b = build(&tb);
        let c = build(&tc);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        // evaluation is a ring homomorphism on integer-coefficient polys
        let q = BigInt::from(x);
        prop_assert_eq!(a.mul(&b).eval_int(&q), a.eval_int(&q) * b.eval_int(&q));
        prop_assert_eq!(a.add(&b).eval_int(&q), a.eval_int(&q) + b.eval_int(&q));
        // exact division undoes multiplication
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div_exact(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn canonicalization_invariants(entries in proptest::collection::vec(0u32..8, 9), s in 1u32..8) {
        let f = FieldSpec::from_q(8).unwrap();
        let mut m: Mat = [0; 9];
        for (i, &e) in entries.iter().enumerate() {
            m[i] = e as u8;
        }
        prop_assume!(mat_det(&f, &m) != 0);
        let mut c = m;
        canonicalize(&f, &mut c);
        // idempotent
        let mut cc = c;
        canonicalize(&f, &mut cc);
        prop_assert_eq!(cc, c);
        // invariant under nonzero scalar multiples
        let mut sm = m;
        for x in sm.iter_mut() {
            *x = f.mul(*x, s as u8);
        }
        prop_assert_eq!(canonical_key(&f, &sm), canonical_key(&f, &m));
        // compatible with multiplication up to scalars: key of products of
        // canonical forms matches key of product
        let mut csm = sm;
        canonicalize(&f, &mut csm);
        let prod_key = canonical_key(&f, &mat_mul(&f, &m, &sm));
        let canon_prod_key = canonical_key(&f, &mat_mul(&f, &c, &csm));
        prop_assert_eq!(prod_key, canon_prod_key);
    }
}
