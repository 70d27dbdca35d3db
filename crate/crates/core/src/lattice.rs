//! Brute-force subgroup lattice of a materialized matrix group: enumeration
//! of all subgroups up to conjugacy, exact Moebius values by top-down
//! recursion over the containment counts, an independent chain-counting
//! oracle, and the Hall/Eulerian sums built on top of the lattice.
//!
//! Enumeration is by conjugacy-class joins: starting from the trivial group,
//! the representative R of each known class is joined with single elements x,
//! where x ranges over orbit representatives of (a subgroup of) N(R) acting
//! by conjugation. Every subgroup S admits a chain 1 < S_1 < ... < S with
//! S_{i+1} = <S_i, x>, so every conjugacy class is reached.

use crate::pgl::Group;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("group order {0} exceeds the enumeration budget {1}")]
    TooLarge(u64, u64),
    #[error("transporter count {0} not divisible by class data {1}")]
    NonIntegralCount(u64, u64),
}

#[derive(Debug, Clone)]
pub struct Budget {
    pub max_group_order: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_group_order: 65_000 }
    }
}

/// Isomorphism-invariant fingerprint of a subgroup, used for reporting and
/// for matching enumerated classes against reference data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IsoFingerprint {
    pub order: u64,
    pub exponent: u64,
    /// (element order, multiplicity), ascending by order
    pub order_histogram: Vec<(u32, u32)>,
    pub abelian: bool,
    /// elementary divisors, ascending; empty unless abelian
    pub abelian_invariants: Vec<u64>,
    /// None when the derived series stabilizes at a nontrivial perfect group
    pub derived_length: Option<u32>,
    pub center_order: u64,
}

/// One conjugacy class of subgroups.
pub struct ClassInfo {
    /// sorted element ids of the chosen representative
    pub rep: Vec<u32>,
    /// a small generating subset of `rep`
    pub gens: Vec<u32>,
    /// every conjugate of the representative, each sorted
    pub conjugates: Vec<Vec<u32>>,
    pub order: u64,
    pub size: u64,
    pub normalizer_order: u64,
    /// elements of N(rep) obtained as Schreier generators of the conjugation
    /// orbit; they generate a (possibly proper) subgroup of N(rep)
    pub norm_gens: Vec<u32>,
}

pub struct Lattice<'g> {
    pub group: &'g Group,
    pub classes: Vec<ClassInfo>,
    /// n[h][k] = number of conjugates of class-k subgroups containing the
    /// class-h representative; stored sparse as (k, count)
    pub over_counts: Vec<Vec<(u32, u64)>>,
    pub mu: Vec<BigInt>,
    pub total_subgroups: u64,
    top: u32,
}

fn conj_subgroup(table: &[u32], sub: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = sub.iter().map(|&x| table[x as usize]).collect();
    out.sort_unstable();
    out
}

/// Greedy generating subset of a sorted subgroup id set.
fn greedy_gens(group: &Group, sub: &[u32]) -> Vec<u32> {
    let e = group.identity_id();
    let mut gens: Vec<u32> = Vec::new();
    let mut cur: Vec<u32> = vec![e];
    for &x in sub {
        if x == e || cur.binary_search(&x).is_ok() {
            continue;
        }
        gens.push(x);
        cur = group
            .closure_ids(&gens, sub.len())
            .expect("closure of a subset stays inside the subgroup");
        if cur.len() == sub.len() {
            break;
        }
    }
    gens
}

pub fn enumerate<'g>(group: &'g Group, budget: &Budget) -> Result<Lattice<'g>, LatticeError> {
    let n = group.order();
    if n > budget.max_group_order {
        return Err(LatticeError::TooLarge(n, budget.max_group_order));
    }
    let n = n as usize;
    let e = group.identity_id();

    // conjugation tables x -> g x g^-1 for the group generators
    let gen_ids: Vec<u32> = group.gen_ids.clone();
    let conj_tables: Vec<Vec<u32>> = gen_ids
        .iter()
        .map(|&g| (0..n as u32).map(|x| group.conj(g, x)).collect())
        .collect();

    let mut classes: Vec<ClassInfo> = Vec::new();
    let mut seen: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();

    // Register the class of `sub`; computes the full conjugation orbit and
    // Schreier generators for the normalizer. Returns the class id.
    let register = |sub: Vec<u32>,
                        classes: &mut Vec<ClassInfo>,
                        seen: &mut FxHashMap<Box<[u32]>, u32>|
     -> u32 {
        if let Some(&id) = seen.get(sub.as_slice()) {
            return id;
        }
        let id = classes.len() as u32;
        let mut orbit: Vec<Vec<u32>> = vec![sub.clone()];
        let mut transversal: Vec<u32> = vec![e];
        let mut local: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
        local.insert(sub.clone().into_boxed_slice(), 0);
        let mut norm_gens: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < orbit.len() {
            for (gi, &a) in gen_ids.iter().enumerate() {
                let img = conj_subgroup(&conj_tables[gi], &orbit[i]);
                match local.get(img.as_slice()) {
                    Some(&j) => {
                        // Schreier generator t_j^-1 a t_i normalizes `sub`
                        if norm_gens.len() < 16 {
                            let s = group.mul(
                                group.mul(group.inv(transversal[j as usize]), a),
                                transversal[i],
                            );
                            if s != e && !norm_gens.contains(&s) {
                                norm_gens.push(s);
                            }
                        }
                    }
                    None => {
                        let j = orbit.len() as u32;
                        local.insert(img.clone().into_boxed_slice(), j);
                        transversal.push(group.mul(a, transversal[i]));
                        orbit.push(img);
                    }
                }
            }
            i += 1;
        }
        for (key, _) in local {
            seen.insert(key, id);
        }
        let size = orbit.len() as u64;
        let normalizer_order = group.order() / size;
        let gens = greedy_gens(group, &sub);
        classes.push(ClassInfo {
            order: sub.len() as u64,
            rep: sub,
            gens,
            conjugates: orbit,
            size,
            normalizer_order,
            norm_gens,
        });
        id
    };

    register(vec![e], &mut classes, &mut seen);

    // proper subgroups have index >= 2
    let half = (group.order() / 2) as usize;
    let mut next = 0usize;
    let mut top: Option<u32> = None;
    while next < classes.len() {
        let rep = classes[next].rep.clone();
        let rep_gens = classes[next].gens.clone();
        let norm_gens = classes[next].norm_gens.clone();
        next += 1;
        if rep.len() == n {
            top = Some((next - 1) as u32);
            continue;
        }
        // orbit representatives of <norm_gens> acting on the group by
        // conjugation; a finer orbit partition only adds redundant joins
        let mut orbit_seen = vec![false; n];
        for x in 0..n as u32 {
            if orbit_seen[x as usize] {
                continue;
            }
            // mark the orbit of x
            let mut stack = vec![x];
            orbit_seen[x as usize] = true;
            while let Some(y) = stack.pop() {
                for &s in &norm_gens {
                    let z = group.conj(s, y);
                    if !orbit_seen[z as usize] {
                        orbit_seen[z as usize] = true;
                        stack.push(z);
                    }
                }
            }
            if x == e || rep.binary_search(&x).is_ok() {
                continue;
            }
            let mut join_gens = rep_gens.clone();
            join_gens.push(x);
            match group.closure_ids(&join_gens, half) {
                None => {} // the join is the whole group
                Some(sub) => {
                    if sub.len() == n {
                        continue;
                    }
                    register(sub, &mut classes, &mut seen);
                }
            }
        }
    }
    // the whole group is itself a class
    let top = match top {
        Some(t) => t,
        None => {
            let all: Vec<u32> = (0..n as u32).collect();
            register(all, &mut classes, &mut seen)
        }
    };

    let total_subgroups = classes.iter().map(|c| c.size).sum();

    // containment counts: for h != k with order(h) < order(k), count the
    // conjugates m of rep(h) inside rep(k); then
    //   n(h,k) = size(k) * m / size(h)
    let words = n / 64 + 1;
    let mut over_counts: Vec<Vec<(u32, u64)>> = vec![Vec::new(); classes.len()];
    for (k, ck) in classes.iter().enumerate() {
        let mut bits = vec![0u64; words];
        for &x in &ck.rep {
            bits[x as usize / 64] |= 1 << (x % 64);
        }
        for (h, ch) in classes.iter().enumerate() {
            if ch.order >= ck.order || ck.order % ch.order != 0 {
                continue;
            }
            let mut m = 0u64;
            'conj: for conj in &ch.conjugates {
                for &x in conj {
                    if bits[x as usize / 64] & (1 << (x % 64)) == 0 {
                        continue 'conj;
                    }
                }
                m += 1;
            }
            if m == 0 {
                continue;
            }
            let t = ck.size * m;
            if !t.is_multiple_of(ch.size) {
                return Err(LatticeError::NonIntegralCount(t, ch.size));
            }
            over_counts[h].push((k as u32, t / ch.size));
        }
    }

    // Moebius recursion, processing classes in descending order
    let mut order_desc: Vec<u32> = (0..classes.len() as u32).collect();
    order_desc.sort_by_key(|&i| std::cmp::Reverse(classes[i as usize].order));
    let mut mu = vec![BigInt::zero(); classes.len()];
    for &i in &order_desc {
        if i == top {
            mu[i as usize] = BigInt::one();
            continue;
        }
        let mut s = BigInt::zero();
        for &(k, cnt) in &over_counts[i as usize] {
            s += BigInt::from(cnt) * &mu[k as usize];
        }
        mu[i as usize] = -s;
    }

    Ok(Lattice { group, classes, over_counts, mu, total_subgroups, top })
}

impl<'g> Lattice<'g> {
    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn class_of(&self, sub_sorted: &[u32]) -> Option<u32> {
        // membership is determined by conjugate equality
        self.classes.iter().position(|c| {
            c.order == sub_sorted.len() as u64 && c.conjugates.iter().any(|x| x == sub_sorted)
        }).map(|i| i as u32)
    }

    /// n([H],[K]): conjugates of class-k subgroups containing rep(h).
    pub fn n(&self, h: u32, k: u32) -> u64 {
        if h == k {
            return 1;
        }
        self.over_counts[h as usize]
            .iter()
            .find(|&&(kk, _)| kk == k)
            .map_or(0, |&(_, c)| c)
    }

    /// mu(H) + sum over K > H of n(h,k) mu(K); zero for every proper class.
    pub fn recursion_residual(&self, h: u32) -> BigInt {
        let mut s = self.mu[h as usize].clone();
        for &(k, cnt) in &self.over_counts[h as usize] {
            s += BigInt::from(cnt) * &self.mu[k as usize];
        }
        s
    }

    /// Independent oracle: Moebius value of the interval [rep(h), G] via
    /// explicit signed chain counts over the actual overgroup poset,
    ///   mu = sum over k of (-1)^k * #{rep = H0 < H1 < ... < Hk = G}.
    pub fn chain_mu(&self, h: u32) -> BigInt {
        if h == self.top {
            return BigInt::one();
        }
        let rep = &self.classes[h as usize].rep;
        // the open interval: subgroups strictly between rep(h) and G
        let mut mid: Vec<&Vec<u32>> = Vec::new();
        for c in &self.classes {
            if c.order <= rep.len() as u64
                || c.order == self.group.order()
                || c.order % rep.len() as u64 != 0
            {
                continue;
            }
            for conj in &c.conjugates {
                if is_subset(rep, conj) {
                    mid.push(conj);
                }
            }
        }
        mid.sort_by_key(|s| s.len());
        let m = mid.len();
        let mut below = vec![Vec::new(); m]; // j -> list of i with mid[i] < mid[j]
        for j in 0..m {
            for i in 0..j {
                if mid[i].len() < mid[j].len() && is_subset(mid[i], mid[j]) {
                    below[j].push(i);
                }
            }
        }
        // t_j = number of strictly increasing j-tuples in the open interval;
        // a chain rep < X1 < ... < X_{k-1} < G contributes at k = j + 1, so
        // mu = sum_j (-1)^(j+1) t_j with t_0 = 1 for the direct chain rep < G.
        let mut total = -BigInt::one(); // the j = 0 term
        let mut ending: Vec<BigInt> = vec![BigInt::one(); m]; // 1-tuples
        let mut j = 1u32;
        loop {
            // exits when no chain extends further (always true once m == 0)
            let level: BigInt = ending.iter().sum();
            if level.is_zero() {
                break;
            }
            let sign = if (j + 1).is_multiple_of(2) { 1 } else { -1 };
            total += BigInt::from(sign) * level;
            let mut next = vec![BigInt::zero(); m];
            for (t, count) in ending.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                // extend a chain ending at mid[t] upward
                for tt in t + 1..m {
                    if below[tt].contains(&t) {
                        next[tt] += count;
                    }
                }
            }
            ending = next;
            j += 1;
        }
        total
    }

    /// Maximal classes: proper classes with no proper overgroup.
    pub fn maximal_classes(&self) -> Vec<u32> {
        (0..self.classes.len() as u32)
            .filter(|&h| {
                h != self.top
                    && self.over_counts[h as usize]
                        .iter()
                        .all(|&(k, _)| k == self.top)
            })
            .collect()
    }

    /// Whether rep(h) is an intersection of maximal subgroups (or G itself).
    pub fn is_intersection_of_maximals(&self, h: u32) -> bool {
        if h == self.top {
            return true;
        }
        let rep = &self.classes[h as usize].rep;
        let n = self.group.order() as usize;
        let words = n / 64 + 1;
        let mut acc = vec![u64::MAX; words];
        let maximals = self.maximal_classes();
        for &mk in &maximals {
            for conj in &self.classes[mk as usize].conjugates {
                if is_subset(rep, conj) {
                    let mut bits = vec![0u64; words];
                    for &x in conj {
                        bits[x as usize / 64] |= 1 << (x % 64);
                    }
                    for w in 0..words {
                        acc[w] &= bits[w];
                    }
                }
            }
        }
        let count: u32 = (0..n as u32)
            .filter(|&x| acc[x as usize / 64] & (1 << (x % 64)) != 0)
            .count() as u32;
        count as usize == rep.len()
            && rep.iter().all(|&x| acc[x as usize / 64] & (1 << (x % 64)) != 0)
    }

    /// phi_n = sum over all subgroups H of |H|^n mu(H).
    pub fn eulerian_phi(&self, n: u32) -> BigInt {
        let mut s = BigInt::zero();
        for (i, c) in self.classes.iter().enumerate() {
            s += BigInt::from(c.size) * BigInt::from(c.order).pow(n) * &self.mu[i];
        }
        s
    }

    /// Probability that n uniform random elements generate the group.
    pub fn gen_probability(&self, n: u32) -> BigRational {
        let phi = self.eulerian_phi(n);
        let total = BigInt::from(self.group.order()).pow(n);
        BigRational::new(phi, total)
    }

    /// a_m = sum of mu(H) over subgroups of index m.
    pub fn a_coeff(&self, index: u64) -> BigInt {
        if !self.group.order().is_multiple_of(index) {
            return BigInt::zero();
        }
        let target = self.group.order() / index;
        let mut s = BigInt::zero();
        for (i, c) in self.classes.iter().enumerate() {
            if c.order == target {
                s += BigInt::from(c.size) * &self.mu[i];
            }
        }
        s
    }

    pub fn fingerprint(&self, h: u32) -> IsoFingerprint {
        let c = &self.classes[h as usize];
        fingerprint_of(self.group, &c.rep, &c.gens)
    }

    /// Serializable snapshot with deterministic ordering (descending order,
    /// then ascending class size, then the element-order histogram).
    pub fn export(&self) -> LatticeModel {
        let mut rows: Vec<LatticeClassRow> = Vec::new();
        let mut ids: Vec<u32> = (0..self.classes.len() as u32).collect();
        let fps: Vec<IsoFingerprint> =
            ids.iter().map(|&i| self.fingerprint(i)).collect();
        ids.sort_by(|&a, &b| {
            let ca = &self.classes[a as usize];
            let cb = &self.classes[b as usize];
            cb.order
                .cmp(&ca.order)
                .then(ca.size.cmp(&cb.size))
                .then(fps[a as usize].order_histogram.cmp(&fps[b as usize].order_histogram))
                .then(self.mu[a as usize].cmp(&self.mu[b as usize]))
        });
        let mut new_pos = vec![0u32; ids.len()];
        for (pos, &i) in ids.iter().enumerate() {
            new_pos[i as usize] = pos as u32;
        }
        for &i in &ids {
            let c = &self.classes[i as usize];
            rows.push(LatticeClassRow {
                order: c.order,
                class_size: c.size,
                normalizer_order: c.normalizer_order,
                mu: self.mu[i as usize].to_string(),
                fingerprint: fps[i as usize].clone(),
            });
        }
        let mut containment = Vec::new();
        for (h, list) in self.over_counts.iter().enumerate() {
            for &(k, cnt) in list {
                containment.push((new_pos[h], new_pos[k as usize], cnt));
            }
        }
        containment.sort_unstable();
        LatticeModel {
            group_order: self.group.order(),
            q: self.group.plane.q(),
            total_subgroups: self.total_subgroups,
            classes: rows,
            containment,
        }
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    // both sorted
    let mut it = big.iter();
    'outer: for &x in small {
        for &y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// JSON/CSV-facing lattice snapshot. Moebius values are decimal strings so
/// magnitudes beyond 2^53 survive any JSON reader.
#[derive(Debug, Serialize)]
pub struct LatticeModel {
    pub group_order: u64,
    pub q: u32,
    pub total_subgroups: u64,
    pub classes: Vec<LatticeClassRow>,
    /// (h, k, n) triples over the `classes` indices
    pub containment: Vec<(u32, u32, u64)>,
}

#[derive(Debug, Serialize)]
pub struct LatticeClassRow {
    pub order: u64,
    pub class_size: u64,
    pub normalizer_order: u64,
    pub mu: String,
    pub fingerprint: IsoFingerprint,
}

impl LatticeModel {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("order,class_size,normalizer_order,mu,abelian,exponent,center_order\n");
        for r in &self.classes {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.order,
                r.class_size,
                r.normalizer_order,
                r.mu,
                r.fingerprint.abelian,
                r.fingerprint.exponent,
                r.fingerprint.center_order
            ));
        }
        out
    }
}

/// Compute the isomorphism fingerprint of a subgroup given by sorted ids.
pub fn fingerprint_of(group: &Group, sub: &[u32], gens: &[u32]) -> IsoFingerprint {
    let mut hist: FxHashMap<u32, u32> = FxHashMap::default();
    let mut exponent = 1u64;
    for &x in sub {
        let o = group.order_of(x);
        *hist.entry(o).or_insert(0) += 1;
        exponent = num_integer::lcm(exponent, o as u64);
    }
    let mut order_histogram: Vec<(u32, u32)> = hist.into_iter().collect();
    order_histogram.sort_unstable();

    let abelian = gens
        .iter()
        .all(|&a| gens.iter().all(|&b| group.mul(a, b) == group.mul(b, a)));

    let abelian_invariants = if abelian {
        abelian_invariants_from_histogram(sub.len() as u64, &order_histogram)
    } else {
        Vec::new()
    };

    let center_order = sub
        .iter()
        .filter(|&&x| gens.iter().all(|&g| group.mul(x, g) == group.mul(g, x)))
        .count() as u64;

    // derived series via normal closures of generator commutators
    let derived_length;
    let mut cur_gens: Vec<u32> = gens.to_vec();
    let mut cur_order = sub.len();
    let mut steps = 0u32;
    loop {
        if cur_order == 1 {
            derived_length = Some(steps);
            break;
        }
        let d_gens = derived_gens(group, &cur_gens, cur_order);
        let d = group
            .closure_ids(&d_gens, cur_order)
            .expect("derived subgroup fits inside the group");
        if d.len() == cur_order {
            derived_length = None; // perfect and nontrivial
            break;
        }
        steps += 1;
        cur_order = d.len();
        cur_gens = greedy_gens(group, &d);
        if cur_gens.is_empty() {
            // trivial derived subgroup
            derived_length = Some(steps);
            break;
        }
    }

    IsoFingerprint {
        order: sub.len() as u64,
        exponent,
        order_histogram,
        abelian,
        abelian_invariants,
        derived_length,
        center_order,
    }
}

/// Generators of the derived subgroup: commutators of the generators, closed
/// under conjugation by the generators (normal closure inside the subgroup).
fn derived_gens(group: &Group, gens: &[u32], sub_order: usize) -> Vec<u32> {
    let e = group.identity_id();
    let mut out: Vec<u32> = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = group.mul(group.mul(a, b), group.inv(group.mul(b, a)));
            if c != e && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    // normal closure under the subgroup generators
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        i += 1;
        for &g in gens {
            let y = group.conj(g, x);
            if y != e && !out.contains(&y) {
                out.push(y);
                if out.len() > sub_order {
                    return out; // defensive; cannot happen
                }
            }
        }
    }
    out
}

fn abelian_invariants_from_histogram(order: u64, hist: &[(u32, u32)]) -> Vec<u64> {
    // For an abelian group the multiset of elementary divisors per prime p is
    // recovered from N_i = #{x : x^(p^i) = 1} = p^(sum_j min(lambda_j, i)):
    // the i-th part of the conjugate partition is log_p(N_i / N_{i-1}).
    let mut divisors: Vec<u64> = Vec::new();
    let mut n = order;
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            primes.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for &p in &primes {
        let count_dividing = |pk: u64| -> u64 {
            hist.iter()
                .filter(|&&(o, _)| pk.is_multiple_of(o as u64))
                .map(|&(_, c)| c as u64)
                .sum()
        };
        let mut conj_parts: Vec<u32> = Vec::new();
        let mut prev = 1u64; // N_0 = 1
        let mut pk = p;
        loop {
            let cur = count_dividing(pk);
            if cur == prev {
                break;
            }
            let ratio = cur / prev;
            debug_assert_eq!(cur % prev, 0);
            let mut logp = 0u32;
            let mut r = ratio;
            while r > 1 {
                debug_assert_eq!(r % p, 0);
                r /= p;
                logp += 1;
            }
            conj_parts.push(logp);
            prev = cur;
            pk = pk.saturating_mul(p);
        }
        // transpose the conjugate partition to get the exponents lambda_j
        let rows = conj_parts.first().copied().unwrap_or(0);
        for j in 0..rows {
            let lambda = conj_parts.iter().filter(|&&c| c > j).count() as u32;
            divisors.push(p.pow(lambda));
        }
    }
    divisors.sort_unstable();
    divisors
}
