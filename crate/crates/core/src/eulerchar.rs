//! Reduced Euler characteristic of the order complex of the poset L_r of
//! nontrivial r-subgroups of PGL(3,q): the seven-case closed forms, a
//! brute-force oracle over elementary abelian subgroups only (the
//! Quillen-style cancellation), a full chain-count oracle that does not use
//! the cancellation, and the elation census behind the r | q case.

use crate::gf::FieldSpec;
use crate::pgl::{canonical_key, mat_mul, Group, Mat, IDENTITY};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EulerError {
    #[error("invalid input: q = {0}, r = {1}")]
    InvalidInput(u64, u64),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// The seven mutually exclusive cases of the closed-form table. Dispatch
/// order matters: r = 2 with q odd and r = 3 with 3 | q-1 take precedence
/// over the generic divisor cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RCase {
    #[serde(rename = "NotDividing")]
    NotDividing,
    #[serde(rename = "DividesQ")]
    DividesQ,
    #[serde(rename = "Three_divQminus1")]
    ThreeDivQminus1,
    #[serde(rename = "Two_Qodd")]
    TwoQodd,
    #[serde(rename = "DividesQminus1_not23")]
    DividesQminus1Not23,
    #[serde(rename = "DividesQplus1_not2")]
    DividesQplus1Not2,
    #[serde(rename = "DividesQ2Q1_not3")]
    DividesQ2Q1Not3,
}

fn is_prime(n: u64) -> bool {
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

/// Characteristic of GF(q), or None if q is not a prime power.
fn char_of(q: u64) -> Option<u64> {
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { Some(p) } else { None };
        }
        p += 1;
    }
    Some(q) // q itself prime
}

pub fn rcase(q: u64, r: u64) -> Result<RCase, EulerError> {
    let p = char_of(q).ok_or(EulerError::InvalidInput(q, r))?;
    if !is_prime(r) || q < 2 {
        return Err(EulerError::InvalidInput(q, r));
    }
    let order = q * q * q * (q * q * q - 1) * (q * q - 1);
    Ok(if !order.is_multiple_of(r) {
        RCase::NotDividing
    } else if r == p {
        RCase::DividesQ
    } else if r == 3 && (q - 1).is_multiple_of(3) {
        RCase::ThreeDivQminus1
    } else if r == 2 && q % 2 == 1 {
        RCase::TwoQodd
    } else if (q - 1).is_multiple_of(r) {
        RCase::DividesQminus1Not23
    } else if (q + 1).is_multiple_of(r) {
        RCase::DividesQplus1Not2
    } else {
        debug_assert_eq!((q * q + q + 1) % r, 0);
        RCase::DividesQ2Q1Not3
    })
}

/// Closed-form reduced Euler characteristic of Delta(L_r) for PGL(3,q).
/// The empty poset (r not dividing |G|) is taken to have chi-tilde = 0,
/// following the convention of the closed-form table.
pub fn chi_closed(q: u64, r: u64) -> Result<(RCase, BigInt), EulerError> {
    let case = rcase(q, r)?;
    let qb = BigInt::from(q);
    let q2 = &qb * &qb;
    let q3 = &q2 * &qb;
    let v = match case {
        RCase::NotDividing => BigInt::zero(),
        RCase::DividesQ => -(&q3 - BigInt::one()),
        RCase::ThreeDivQminus1 => {
            // -q^2 (q^6 - q^4 + 7q^3 - 7q - 8) / 8
            let inner: BigInt =
                &q3 * &q3 - &q2 * &q2 + BigInt::from(7) * &q3 - BigInt::from(7) * &qb - 8;
            let num = -(&q2 * inner);
            exact_div(num, 8)
        }
        RCase::TwoQodd | RCase::DividesQminus1Not23 => {
            // -q^2 (q^2+q+1)(q^2+q-3) / 3
            let s: BigInt = &q2 + &qb;
            let num = -(&q2 * (&s + BigInt::one()) * (&s - BigInt::from(3)));
            exact_div(num, 3)
        }
        RCase::DividesQplus1Not2 => {
            // q^3 (q^3 - 1) / 2
            exact_div(&q3 * (&q3 - 1), 2)
        }
        RCase::DividesQ2Q1Not3 => {
            // q^3 (q-1)^2 (q+1) / 3
            let num = &q3 * (&qb - 1) * (&qb - 1) * (&qb + 1);
            exact_div(num, 3)
        }
    };
    Ok((case, v))
}

fn exact_div(n: BigInt, d: u32) -> BigInt {
    let d = BigInt::from(d);
    debug_assert!((&n % &d).is_zero());
    n / d
}

/// Number of k-dimensional subspaces of an n-dimensional space over GF(r).
pub fn gaussian_binomial(n: u32, k: u32, r: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let r = BigInt::from(r);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= r.pow(n - i) - 1u32;
        den *= r.pow(i + 1) - 1u32;
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

#[derive(Debug, Clone)]
pub struct ElemAbelianRecord {
    pub rank: u32,
    pub count: u64,
    /// the subgroups themselves, as sorted element-id sets
    pub subgroups: Vec<Vec<u32>>,
}

const ENUM_BUDGET: u64 = 400_000;

fn r_valuation(mut n: u64, r: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(r) {
        n /= r;
        v += 1;
    }
    v
}

#[inline]
fn commute(group: &Group, a: u32, b: u32) -> bool {
    let f = group.field();
    let ab = mat_mul(f, &group.mats[a as usize], &group.mats[b as usize]);
    let ba = mat_mul(f, &group.mats[b as usize], &group.mats[a as usize]);
    canonical_key(f, &ab) == canonical_key(f, &ba)
}

/// All elementary abelian r-subgroups of a materialized group, grouped by
/// rank. Grown rank by rank: E_{r^(s+1)} = <E_{r^s}, x> for a commuting
/// order-r element x, so every such subgroup is reached; duplicates are
/// removed by their full element set.
pub fn elem_abelian(group: &Group, r: u64) -> Result<Vec<ElemAbelianRecord>, EulerError> {
    if group.order() > ENUM_BUDGET {
        return Err(EulerError::BudgetExceeded(format!(
            "group order {} above {}",
            group.order(),
            ENUM_BUDGET
        )));
    }
    let max_rank = r_valuation(group.order(), r);
    if max_rank == 0 {
        return Ok(Vec::new());
    }
    // elements of order exactly r
    let x_list: Vec<u32> = (0..group.order() as u32)
        .filter(|&x| group.order_of(x) as u64 == r)
        .collect();

    let mut records: Vec<ElemAbelianRecord> = Vec::new();
    // rank 1
    let mut level: Vec<(Vec<u32>, Vec<u32>)> = Vec::new(); // (elements, generators)
    {
        let mut seen: FxHashSet<Box<[u32]>> = FxHashSet::default();
        for &x in &x_list {
            let mut set = vec![group.identity_id()];
            let mut cur = x;
            for _ in 1..r {
                set.push(cur);
                cur = group.mul(cur, x);
            }
            set.sort_unstable();
            if seen.insert(set.clone().into_boxed_slice()) {
                level.push((set, vec![x]));
            }
        }
    }
    records.push(ElemAbelianRecord {
        rank: 1,
        count: level.len() as u64,
        subgroups: level.iter().map(|(s, _)| s.clone()).collect(),
    });

    for rank in 2..=max_rank {
        let mut next: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut seen: FxHashSet<Box<[u32]>> = FxHashSet::default();
        for (set, gens) in &level {
            for &x in &x_list {
                if set.binary_search(&x).is_ok() {
                    continue;
                }
                if !gens.iter().all(|&g| commute(group, g, x)) {
                    continue;
                }
                // new elements: set * x^j for j = 1..r
                let mut bigger = set.clone();
                let mut xj = x;
                for _ in 1..r {
                    for &t in set {
                        bigger.push(group.mul(t, xj));
                    }
                    xj = group.mul(xj, x);
                }
                bigger.sort_unstable();
                bigger.dedup();
                debug_assert_eq!(bigger.len() as u64, set.len() as u64 * r);
                if seen.insert(bigger.clone().into_boxed_slice()) {
                    let mut g2 = gens.clone();
                    g2.push(x);
                    next.push((bigger, g2));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        records.push(ElemAbelianRecord {
            rank,
            count: next.len() as u64,
            subgroups: next.iter().map(|(s, _)| s.clone()).collect(),
        });
        level = next;
    }
    Ok(records)
}

/// chi-tilde via the cancellation shortcut: only elementary abelian
/// r-subgroups contribute, each with weight (-1)^s r^C(s,2).
pub fn chi_bruteforce(group: &Group, r: u64) -> Result<BigInt, EulerError> {
    let records = elem_abelian(group, r)?;
    let mut total = BigInt::zero();
    for rec in &records {
        let s = rec.rank;
        let weight = BigInt::from(r).pow(s * (s - 1) / 2);
        let signed = if s % 2 == 1 { -weight } else { weight };
        total += BigInt::from(rec.count) * signed;
    }
    Ok(-total)
}

/// The same invariant via explicit chain counts over the FULL poset of
/// nontrivial r-subgroups (cyclic, dihedral, everything) — no cancellation
/// assumed:
///   chi = sum_j (-1)^(j-1) * #{chains with j elements}.
/// Only nonempty chains are counted, matching the closed-form table's
/// convention (an antichain of n points has chi = n, the empty poset 0).
pub fn chi_chaincount(group: &Group, r: u64) -> Result<BigInt, EulerError> {
    let max_rank = r_valuation(group.order(), r);
    if max_rank == 0 {
        return Ok(BigInt::zero());
    }
    let sylow_order = r.pow(max_rank) as usize;
    // elements of r-power order (excluding the identity)
    let e = group.identity_id();
    let xp: Vec<u32> = (0..group.order() as u32)
        .filter(|&x| {
            x != e && {
                let o = group.order_of(x) as u64;
                let mut m = o;
                while m.is_multiple_of(r) {
                    m /= r;
                }
                m == 1
            }
        })
        .collect();

    // breadth-first growth: every r-group is <P, x> for a maximal subgroup P
    // and a normalizing r-element x
    let mut seen: FxHashMap<Box<[u32]>, usize> = FxHashMap::default();
    let mut subs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for &x in &xp {
        let set = group.closure_ids(&[x], sylow_order).unwrap();
        if !seen.contains_key(set.as_slice()) {
            seen.insert(set.clone().into_boxed_slice(), subs.len());
            subs.push((set, vec![x]));
        }
    }
    let mut i = 0;
    while i < subs.len() {
        let (set, gens) = subs[i].clone();
        i += 1;
        if set.len() == sylow_order {
            continue;
        }
        for &x in &xp {
            if set.binary_search(&x).is_ok() {
                continue;
            }
            // x must normalize the subgroup
            if !gens
                .iter()
                .all(|&g| set.binary_search(&group.conj(x, g)).is_ok())
            {
                continue;
            }
            let mut jg = gens.clone();
            jg.push(x);
            let bigger = group
                .closure_ids(&jg, sylow_order)
                .expect("an r-group extension stays inside a Sylow subgroup");
            if !seen.contains_key(bigger.as_slice()) {
                seen.insert(bigger.clone().into_boxed_slice(), subs.len());
                subs.push((bigger, jg));
                if subs.len() > 10_000 {
                    return Err(EulerError::BudgetExceeded(
                        "more than 10^4 r-subgroups".into(),
                    ));
                }
            }
        }
    }

    // chain-count DP over the poset, ascending by order
    let mut order_idx: Vec<usize> = (0..subs.len()).collect();
    order_idx.sort_by_key(|&i| subs[i].0.len());
    let sets: Vec<&Vec<u32>> = order_idx.iter().map(|&i| &subs[i].0).collect();
    let n = sets.len();
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for j in 0..n {
        for i in 0..j {
            if sets[i].len() < sets[j].len()
                && sets[j].len().is_multiple_of(sets[i].len())
                && sets[i].iter().all(|x| sets[j].binary_search(x).is_ok())
            {
                below[j].push(i);
            }
        }
    }
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j_idx, lows) in below.iter().enumerate() {
        for &i_idx in lows {
            above[i_idx].push(j_idx);
        }
    }
    let mut total = BigInt::zero();
    let mut ending: Vec<BigInt> = vec![BigInt::one(); n];
    let mut j = 1u32;
    loop {
        let level: BigInt = ending.iter().sum();
        if level.is_zero() {
            break;
        }
        // chains with j elements contribute with sign (-1)^(j-1)
        total += if j % 2 == 1 { level } else { -level };
        let mut next = vec![BigInt::zero(); n];
        for t in 0..n {
            if !ending[t].is_zero() {
                for &tt in &above[t] {
                    next[tt] += &ending[t];
                }
            }
        }
        ending = next;
        j += 1;
    }
    Ok(total)
}

/// Elation census of PGL(3,q), q = r^d with r the characteristic:
/// N_ac(i) = elementary abelian E_{r^i} of elations with a common center and
/// a common axis; N_a(i) = common axis only; N_c(i) = common center only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElationCensus {
    /// index 0 holds rank 1
    pub n_ac: Vec<BigInt>,
    pub n_a: Vec<BigInt>,
    pub n_c: Vec<BigInt>,
}

pub fn elation_census_formula(q: u64) -> Result<ElationCensus, EulerError> {
    let r = char_of(q).ok_or(EulerError::InvalidInput(q, 0))?;
    if q > 8 {
        return Err(EulerError::InvalidInput(q, r));
    }
    let d = r_valuation(q, r);
    let flags = BigInt::from((q * q + q + 1) * (q + 1));
    let lines = BigInt::from(q * q + q + 1);
    let mut n_ac = Vec::new();
    let mut n_a = Vec::new();
    for i in 1..=d {
        n_ac.push(&flags * gaussian_binomial(d, i, r));
    }
    for i in 1..=2 * d {
        let all = gaussian_binomial(2 * d, i, r);
        let centered = BigInt::from(q + 1) * gaussian_binomial(d, i, r);
        n_a.push(&lines * (all - centered));
    }
    let n_c = n_a.clone();
    Ok(ElationCensus { n_ac, n_a, n_c })
}

/// Direct enumeration: every elation with axis u is I + w u^T for a unique
/// w with u.w = 0, and (I + w1 u^T)(I + w2 u^T) = I + (w1+w2) u^T, so the
/// axis group is the additive group of the 2-dimensional F_q-space u-perp.
/// Subspaces over GF(r) are enumerated per axis (dually per center) and
/// classified by whether their nonzero vectors are F_q-proportional.
pub fn elation_census_direct(q: u64) -> Result<ElationCensus, EulerError> {
    let r = char_of(q).ok_or(EulerError::InvalidInput(q, 0))?;
    if q > 8 {
        return Err(EulerError::InvalidInput(q, r));
    }
    let f = FieldSpec::from_q(q as u32).map_err(|_| EulerError::InvalidInput(q, r))?;
    let d = r_valuation(q, r);
    let mut n_ac = vec![BigInt::zero(); d as usize];
    let mut n_a = vec![BigInt::zero(); 2 * d as usize];
    let mut n_c = vec![BigInt::zero(); 2 * d as usize];

    // canonical projective triples reused as both lines and points
    let mut reps: Vec<[u8; 3]> = Vec::new();
    for y in 0..q as u8 {
        for z in 0..q as u8 {
            reps.push([1, y, z]);
        }
    }
    for z in 0..q as u8 {
        reps.push([0, 1, z]);
    }
    reps.push([0, 0, 1]);

    let dot = |a: &[u8; 3], b: &[u8; 3]| {
        let mut s = 0u8;
        for t in 0..3 {
            s = f.add(s, f.mul(a[t], b[t]));
        }
        s
    };
    let proportional = |a: &[u8; 3], b: &[u8; 3]| {
        // all 2x2 minors vanish
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])) == 0
            && f.sub(f.mul(a[0], b[2]), f.mul(a[2], b[0])) == 0
            && f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])) == 0
    };

    for u in &reps {
        // u-perp: all vectors w with u.w = 0 (q^2 of them, including 0)
        let mut perp: Vec<[u8; 3]> = Vec::new();
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                for c in 0..q as u8 {
                    let w = [a, b, c];
                    if dot(u, &w) == 0 {
                        perp.push(w);
                    }
                }
            }
        }
        assert_eq!(perp.len() as u64, q * q);
        let mut code_of: FxHashMap<[u8; 3], u8> = FxHashMap::default();
        for (i, w) in perp.iter().enumerate() {
            code_of.insert(*w, i as u8);
        }
        let add_codes = |a: u8, b: u8| -> u8 {
            let wa = perp[a as usize];
            let wb = perp[b as usize];
            code_of[&[f.add(wa[0], wb[0]), f.add(wa[1], wb[1]), f.add(wa[2], wb[2])]]
        };
        // tie the vector model to actual matrix multiplication
        let mat_of = |w: &[u8; 3]| -> Mat {
            let mut m = IDENTITY;
            for i in 0..3 {
                for j in 0..3 {
                    m[3 * i + j] = f.add(m[3 * i + j], f.mul(w[i], u[j]));
                }
            }
            m
        };
        {
            let w1 = perp[1];
            let w2 = perp[perp.len() - 1];
            let prod = mat_mul(&f, &mat_of(&w1), &mat_of(&w2));
            let sum = [f.add(w1[0], w2[0]), f.add(w1[1], w2[1]), f.add(w1[2], w2[2])];
            assert_eq!(canonical_key(&f, &prod), canonical_key(&f, &mat_of(&sum)));
        }

        // enumerate all GF(r)-subspaces of u-perp as bitmasks over codes
        let zero_mask: u64 = 1; // code 0 is the zero vector by construction
        debug_assert_eq!(perp[0], [0, 0, 0]);
        let mut seen: FxHashSet<u64> = FxHashSet::default();
        let mut stack = vec![zero_mask];
        seen.insert(zero_mask);
        while let Some(mask) = stack.pop() {
            // classify this subspace
            let members: Vec<u8> = (0..perp.len() as u8)
                .filter(|&c| mask >> c & 1 == 1)
                .collect();
            if members.len() > 1 {
                let rank = r_valuation(members.len() as u64, r);
                let nonzero: Vec<u8> = members.iter().copied().filter(|&c| c != 0).collect();
                let common_center = nonzero
                    .iter()
                    .all(|&c| proportional(&perp[nonzero[0] as usize], &perp[c as usize]));
                if common_center {
                    n_ac[rank as usize - 1] += 1;
                } else {
                    n_a[rank as usize - 1] += 1;
                }
            }
            // extend by any vector outside
            for c in 1..perp.len() as u8 {
                if mask >> c & 1 == 1 {
                    continue;
                }
                let mut bigger = mask;
                // close under addition: add the coset sums
                let mut frontier = vec![c];
                bigger |= 1 << c;
                while let Some(x) = frontier.pop() {
                    let snapshot: Vec<u8> = (0..perp.len() as u8)
                        .filter(|&m| bigger >> m & 1 == 1)
                        .collect();
                    for m in snapshot {
                        let s = add_codes(m, x);
                        if bigger >> s & 1 == 0 {
                            bigger |= 1 << s;
                            frontier.push(s);
                        }
                    }
                }
                if seen.insert(bigger) {
                    stack.push(bigger);
                }
            }
        }
    }

    // the dual count: elations with a common center C are I + C v^T with
    // v in C-perp; the same enumeration with the proportionality test on
    // the v side counts N_c (and re-derives N_ac, which we drop)
    for cpt in &reps {
        let mut perp: Vec<[u8; 3]> = Vec::new();
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                for c in 0..q as u8 {
                    let v = [a, b, c];
                    if dot(cpt, &v) == 0 {
                        perp.push(v);
                    }
                }
            }
        }
        let mut code_of: FxHashMap<[u8; 3], u8> = FxHashMap::default();
        for (i, v) in perp.iter().enumerate() {
            code_of.insert(*v, i as u8);
        }
        let add_codes = |a: u8, b: u8| -> u8 {
            let va = perp[a as usize];
            let vb = perp[b as usize];
            code_of[&[f.add(va[0], vb[0]), f.add(va[1], vb[1]), f.add(va[2], vb[2])]]
        };
        let mut seen: FxHashSet<u64> = FxHashSet::default();
        let mut stack = vec![1u64];
        seen.insert(1u64);
        while let Some(mask) = stack.pop() {
            let members: Vec<u8> = (0..perp.len() as u8)
                .filter(|&c| mask >> c & 1 == 1)
                .collect();
            if members.len() > 1 {
                let rank = r_valuation(members.len() as u64, r);
                let nonzero: Vec<u8> = members.iter().copied().filter(|&c| c != 0).collect();
                let common_axis = nonzero
                    .iter()
                    .all(|&c| proportional(&perp[nonzero[0] as usize], &perp[c as usize]));
                if !common_axis {
                    n_c[rank as usize - 1] += 1;
                }
            }
            for c in 1..perp.len() as u8 {
                if mask >> c & 1 == 1 {
                    continue;
                }
                let mut bigger = mask | 1 << c;
                let mut frontier = vec![c];
                while let Some(x) = frontier.pop() {
                    let snapshot: Vec<u8> = (0..perp.len() as u8)
                        .filter(|&m| bigger >> m & 1 == 1)
                        .collect();
                    for m in snapshot {
                        let s = add_codes(m, x);
                        if bigger >> s & 1 == 0 {
                            bigger |= 1 << s;
                            frontier.push(s);
                        }
                    }
                }
                if seen.insert(bigger) {
                    stack.push(bigger);
                }
            }
        }
    }

    Ok(ElationCensus { n_ac, n_a, n_c })
}
