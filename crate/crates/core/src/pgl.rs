//! The projective plane PG(2,q), the groups PGL(3,q)/PSL(3,q) as concrete
//! element sets, element classification, maximal-subgroup constructors, and
//! orbit/stabilizer/normalizer/transporter machinery.
//!
//! Elements are 3x3 matrices over GF(q) in canonical projective form: the
//! matrix is scaled so that its first nonzero entry in row-major order is 1.
//! The canonical matrix packs into a single `u64` key (9 entries x 7 bits),
//! which is the element identity used everywhere.

use crate::gf::FieldSpec;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PglError {
    #[error("matrix is singular")]
    Singular,
    #[error("invalid field size {0}")]
    InvalidQ(u32),
    #[error("invalid constructor kind for q={0}")]
    InvalidKind(u32),
    #[error("closure exceeded cap of {0} elements")]
    CapExceeded(u64),
    #[error("group too large for this operation")]
    TooLarge,
    #[error("transporter count {0} is not divisible by normalizer order {1}")]
    NonIntegralCount(u64, u64),
    #[error("line id {0} outside 1..=31")]
    UnsupportedLine(u8),
}

pub type Mat = [u8; 9];

pub const IDENTITY: Mat = [1, 0, 0, 0, 1, 0, 0, 0, 1];

#[inline]
pub fn mat_mul(f: &FieldSpec, a: &Mat, b: &Mat) -> Mat {
    let mut c = [0u8; 9];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0u8;
            for k in 0..3 {
                s = f.add(s, f.mul(a[3 * i + k], b[3 * k + j]));
            }
            c[3 * i + j] = s;
        }
    }
    c
}

pub fn mat_det(f: &FieldSpec, m: &Mat) -> u8 {
    let t1 = f.mul(m[0], f.sub(f.mul(m[4], m[8]), f.mul(m[5], m[7])));
    let t2 = f.mul(m[1], f.sub(f.mul(m[3], m[8]), f.mul(m[5], m[6])));
    let t3 = f.mul(m[2], f.sub(f.mul(m[3], m[7]), f.mul(m[4], m[6])));
    f.add(f.sub(t1, t2), t3)
}

/// Adjugate matrix. Projectively this is the inverse: adj(M) = det(M) * M^-1.
#[inline]
pub fn mat_adjugate(f: &FieldSpec, m: &Mat) -> Mat {
    let c = |a: u8, b: u8, cc: u8, d: u8| f.sub(f.mul(a, d), f.mul(b, cc));
    [
        c(m[4], m[5], m[7], m[8]),
        f.neg(c(m[1], m[2], m[7], m[8])),
        c(m[1], m[2], m[4], m[5]),
        f.neg(c(m[3], m[5], m[6], m[8])),
        c(m[0], m[2], m[6], m[8]),
        f.neg(c(m[0], m[2], m[3], m[5])),
        c(m[3], m[4], m[6], m[7]),
        f.neg(c(m[0], m[1], m[6], m[7])),
        c(m[0], m[1], m[3], m[4]),
    ]
}

pub fn mat_transpose(m: &Mat) -> Mat {
    [m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]]
}

#[inline]
pub fn mat_apply(f: &FieldSpec, m: &Mat, v: &[u8; 3]) -> [u8; 3] {
    let mut w = [0u8; 3];
    for i in 0..3 {
        let mut s = 0u8;
        for k in 0..3 {
            s = f.add(s, f.mul(m[3 * i + k], v[k]));
        }
        w[i] = s;
    }
    w
}

/// Row covector times matrix (the contragredient action on lines uses the
/// adjugate: a line rho is stabilized iff rho * adj(M) is proportional to rho).
#[inline]
pub fn covec_apply(f: &FieldSpec, v: &[u8; 3], m: &Mat) -> [u8; 3] {
    let mut w = [0u8; 3];
    for j in 0..3 {
        let mut s = 0u8;
        for k in 0..3 {
            s = f.add(s, f.mul(v[k], m[3 * k + j]));
        }
        w[j] = s;
    }
    w
}

/// Scale so that the first nonzero entry in row-major order is 1.
/// Idempotent; the identity on already-canonical matrices.
#[inline]
pub fn canonicalize(f: &FieldSpec, m: &mut Mat) {
    for i in 0..9 {
        if m[i] != 0 {
            if m[i] != 1 {
                let s = f.inv_unchecked(m[i]);
                for x in m.iter_mut() {
                    *x = f.mul(*x, s);
                }
            }
            return;
        }
    }
}

/// Pack a canonical matrix into its fixed-width element key (9 x 7 bits).
#[inline]
pub fn pack_key(m: &Mat) -> u64 {
    let mut k = 0u64;
    for &e in m.iter() {
        k = (k << 7) | e as u64;
    }
    k
}

pub fn unpack_key(mut k: u64) -> Mat {
    let mut m = [0u8; 9];
    for i in (0..9).rev() {
        m[i] = (k & 0x7f) as u8;
        k >>= 7;
    }
    m
}

#[inline]
pub fn canonical_key(f: &FieldSpec, m: &Mat) -> u64 {
    let mut c = *m;
    canonicalize(f, &mut c);
    pack_key(&c)
}

/// A projective matrix in canonical form together with its element key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GElem {
    pub mat: Mat,
    pub key: u64,
}

/// Canonicalize an invertible matrix into a group element.
pub fn elem(f: &FieldSpec, mat: Mat) -> Result<GElem, PglError> {
    if mat_det(f, &mat) == 0 {
        return Err(PglError::Singular);
    }
    let mut m = mat;
    canonicalize(f, &mut m);
    Ok(GElem { mat: m, key: pack_key(&m) })
}

impl GElem {
    /// The induced permutation of point ids; a faithful action.
    pub fn perm(&self, plane: &Plane) -> Vec<u16> {
        plane.point_perm(&self.mat)
    }
}

// ---------------------------------------------------------------------------
// The plane PG(2,q)
// ---------------------------------------------------------------------------

/// PG(2,q): canonical homogeneous point and line coordinates with dense ids.
pub struct Plane {
    field: FieldSpec,
    points: Vec<[u8; 3]>,
    lines: Vec<[u8; 3]>,
    id_of: FxHashMap<u32, u32>, // packed canonical coords -> id (shared by points/lines)
    points_on_line: Vec<Vec<u32>>,
    lines_on_point: Vec<Vec<u32>>,
}

fn pack3(v: &[u8; 3]) -> u32 {
    ((v[0] as u32) << 16) | ((v[1] as u32) << 8) | v[2] as u32
}

fn canonical_vec(f: &FieldSpec, v: &[u8; 3]) -> [u8; 3] {
    let mut w = *v;
    for i in 0..3 {
        if w[i] != 0 {
            if w[i] != 1 {
                let s = f.inv_unchecked(w[i]);
                for x in w.iter_mut() {
                    *x = f.mul(*x, s);
                }
            }
            break;
        }
    }
    w
}

impl Plane {
    pub fn new(field: FieldSpec) -> Plane {
        let q = field.q();
        let mut points = Vec::with_capacity((q * q + q + 1) as usize);
        // deterministic order: (1,y,z), then (0,1,z), then (0,0,1)
        for y in 0..q as u8 {
            for z in 0..q as u8 {
                points.push([1, y, z]);
            }
        }
        for z in 0..q as u8 {
            points.push([0, 1, z]);
        }
        points.push([0, 0, 1]);
        let mut id_of = FxHashMap::default();
        for (i, p) in points.iter().enumerate() {
            id_of.insert(pack3(p), i as u32);
        }
        let lines = points.clone(); // same canonical coordinate set, dual role
        let n = points.len();
        let mut points_on_line = vec![Vec::new(); n];
        let mut lines_on_point = vec![Vec::new(); n];
        for (li, l) in lines.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                let mut dot = 0u8;
                for k in 0..3 {
                    dot = field.add(dot, field.mul(l[k], p[k]));
                }
                if dot == 0 {
                    points_on_line[li].push(pi as u32);
                    lines_on_point[pi].push(li as u32);
                }
            }
        }
        Plane { field, points, lines, id_of, points_on_line, lines_on_point }
    }

    pub fn build(q: u32) -> Result<Plane, PglError> {
        let f = FieldSpec::from_q(q).map_err(|_| PglError::InvalidQ(q))?;
        Ok(Plane::new(f))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn n_points(&self) -> u32 {
        self.points.len() as u32
    }
    pub fn points(&self) -> &[[u8; 3]] {
        &self.points
    }
    pub fn lines(&self) -> &[[u8; 3]] {
        &self.lines
    }
    pub fn point_coords(&self, id: u32) -> [u8; 3] {
        self.points[id as usize]
    }
    pub fn point_id(&self, v: &[u8; 3]) -> u32 {
        let c = canonical_vec(&self.field, v);
        self.id_of[&pack3(&c)]
    }
    pub fn line_id(&self, v: &[u8; 3]) -> u32 {
        self.point_id(v)
    }
    pub fn incident(&self, point: u32, line: u32) -> bool {
        self.points_on_line[line as usize].binary_search(&point).is_ok()
    }
    pub fn points_on_line(&self, line: u32) -> &[u32] {
        &self.points_on_line[line as usize]
    }
    pub fn lines_on_point(&self, point: u32) -> &[u32] {
        &self.lines_on_point[point as usize]
    }

    /// Permutation of point ids induced by a matrix.
    pub fn point_perm(&self, m: &Mat) -> Vec<u16> {
        self.points
            .iter()
            .map(|p| self.point_id(&mat_apply(&self.field, m, p)) as u16)
            .collect()
    }

    /// Permutation of line ids induced by a matrix (via the adjugate).
    pub fn line_perm(&self, m: &Mat) -> Vec<u16> {
        let adj = mat_adjugate(&self.field, m);
        self.lines
            .iter()
            .map(|l| self.line_id(&covec_apply(&self.field, l, &adj)) as u16)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Subgroup records
// ---------------------------------------------------------------------------

/// A subgroup given by generators plus its full element set keyed canonically.
#[derive(Debug, Clone)]
pub struct SubgroupRec {
    pub generators: Vec<GElem>,
    /// Sorted canonical element keys; closed under product and inverse.
    pub elements: Vec<u64>,
    pub order: u64,
    /// Line-table id, when this record was built by `line_rep`.
    pub tag: Option<u8>,
}

impl SubgroupRec {
    pub fn contains_key(&self, key: u64) -> bool {
        self.elements.binary_search(&key).is_ok()
    }
}

/// Breadth-first closure of a generator set, deduplicating by canonical key.
/// Element ordering in the result is ascending by key.
pub fn closure(f: &FieldSpec, gens: &[Mat], cap: u64) -> Result<SubgroupRec, PglError> {
    let mut gelems = Vec::new();
    for g in gens {
        gelems.push(elem(f, *g)?);
    }
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    let mut mats: Vec<Mat> = Vec::new();
    let idk = pack_key(&IDENTITY);
    seen.insert(idk);
    mats.push(IDENTITY);
    let mut frontier = 0usize;
    while frontier < mats.len() {
        let cur = mats[frontier];
        frontier += 1;
        for g in &gelems {
            let mut prod = mat_mul(f, &cur, &g.mat);
            canonicalize(f, &mut prod);
            let key = pack_key(&prod);
            if seen.insert(key) {
                if seen.len() as u64 > cap {
                    return Err(PglError::CapExceeded(cap));
                }
                mats.push(prod);
            }
        }
    }
    let mut elements: Vec<u64> = seen.into_iter().collect();
    elements.sort_unstable();
    let order = elements.len() as u64;
    Ok(SubgroupRec { generators: gelems, elements, order, tag: None })
}

// ---------------------------------------------------------------------------
// Materialized groups
// ---------------------------------------------------------------------------

/// A fully materialized matrix group acting on PG(2,q). Elements are indexed
/// `0..order` in ascending key order, so two runs produce identical tables.
pub struct Group {
    pub plane: Plane,
    pub mats: Vec<Mat>,
    pub keys: Vec<u64>,
    index: FxHashMap<u64, u32>,
    pub perms: Vec<Vec<u16>>,
    inv_ids: Vec<u32>,
    pub gen_ids: Vec<u32>,
}

impl Group {
    /// Generate the group from matrices by BFS closure, then freeze it in
    /// ascending key order.
    pub fn generate(plane: Plane, gens: &[Mat], cap: u64) -> Result<Group, PglError> {
        let f = plane.field().clone();
        let rec = closure(&f, gens, cap)?;
        let mats: Vec<Mat> = rec.elements.iter().map(|&k| unpack_key(k)).collect();
        let keys = rec.elements.clone();
        let mut index = FxHashMap::default();
        for (i, &k) in keys.iter().enumerate() {
            index.insert(k, i as u32);
        }
        let perms: Vec<Vec<u16>> = mats.iter().map(|m| plane.point_perm(m)).collect();
        let mut inv_ids = vec![0u32; mats.len()];
        for (i, m) in mats.iter().enumerate() {
            let adj = mat_adjugate(&f, m);
            inv_ids[i] = index[&canonical_key(&f, &adj)];
        }
        let gen_ids = rec
            .generators
            .iter()
            .map(|g| index[&g.key])
            .collect();
        Ok(Group { plane, mats, keys, index, perms, inv_ids, gen_ids })
    }

    pub fn order(&self) -> u64 {
        self.mats.len() as u64
    }
    pub fn field(&self) -> &FieldSpec {
        self.plane.field()
    }
    pub fn id_of_key(&self, key: u64) -> Option<u32> {
        self.index.get(&key).copied()
    }
    pub fn identity_id(&self) -> u32 {
        self.index[&pack_key(&IDENTITY)]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let f = self.plane.field();
        let prod = mat_mul(f, &self.mats[a as usize], &self.mats[b as usize]);
        self.index[&canonical_key(f, &prod)]
    }
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv_ids[a as usize]
    }
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn order_of(&self, x: u32) -> u32 {
        let e = self.identity_id();
        let mut cur = x;
        let mut n = 1;
        while cur != e {
            cur = self.mul(cur, x);
            n += 1;
        }
        n
    }

    /// Closure of a set of element ids inside this group.
    pub fn closure_ids(&self, gen_ids: &[u32], cap: usize) -> Option<Vec<u32>> {
        let e = self.identity_id();
        let mut in_set = vec![false; self.mats.len()];
        let mut list = vec![e];
        in_set[e as usize] = true;
        let mut frontier = 0;
        while frontier < list.len() {
            let cur = list[frontier];
            frontier += 1;
            for &g in gen_ids {
                let prod = self.mul(cur, g);
                if !in_set[prod as usize] {
                    if list.len() >= cap {
                        return None;
                    }
                    in_set[prod as usize] = true;
                    list.push(prod);
                }
            }
        }
        list.sort_unstable();
        Some(list)
    }

    /// Convert a sorted id set into a key-based subgroup record.
    pub fn subgroup_rec(&self, ids: &[u32], gen_ids: &[u32], tag: Option<u8>) -> SubgroupRec {
        let f = self.plane.field();
        let generators = gen_ids
            .iter()
            .map(|&g| elem(f, self.mats[g as usize]).unwrap())
            .collect();
        let elements: Vec<u64> = ids.iter().map(|&i| self.keys[i as usize]).collect();
        let order = elements.len() as u64;
        SubgroupRec { generators, elements, order, tag }
    }

    /// Ids of this group's elements that lie in `rec` (by key).
    pub fn ids_of_rec(&self, rec: &SubgroupRec) -> Option<Vec<u32>> {
        let mut ids = Vec::with_capacity(rec.elements.len());
        for &k in &rec.elements {
            ids.push(*self.index.get(&k)?);
        }
        ids.sort_unstable();
        Some(ids)
    }
}

// ---------------------------------------------------------------------------
// Element classification (the trichotomy of fixed structures)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ClassTag {
    Identity,
    Elation,
    OrderFourUnipotent,
    Homology,
    MixedOrder,
    TriangleDiagonal,
    QuadraticSemisimple,
    SingerType,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ElementClass {
    pub tag: ClassTag,
    pub order: u32,
    pub fixed_points: u32,
    pub fixed_lines: u32,
    /// Center point id, for elations and homologies.
    pub center: Option<u32>,
    /// Axis line id, for elations and homologies.
    pub axis: Option<u32>,
}

/// Classify a group element by its order and rational fixed structure.
pub fn classify(plane: &Plane, g: &GElem) -> ElementClass {
    let f = plane.field();
    let q = f.q();
    let p = f.p();

    // order of the projective element
    let mut order = 1u32;
    let mut cur = g.mat;
    while cur != IDENTITY {
        cur = mat_mul(f, &cur, &g.mat);
        canonicalize(f, &mut cur);
        order += 1;
    }

    let mut fixed_points = Vec::new();
    for (i, pt) in plane.points().iter().enumerate() {
        let w = mat_apply(f, &g.mat, pt);
        if canonical_vec(f, &w) == *pt {
            fixed_points.push(i as u32);
        }
    }
    let adj = mat_adjugate(f, &g.mat);
    let mut fixed_lines = Vec::new();
    for (i, l) in plane.lines().iter().enumerate() {
        let w = covec_apply(f, l, &adj);
        if canonical_vec(f, &w) == *l {
            fixed_lines.push(i as u32);
        }
    }
    let nfp = fixed_points.len() as u32;
    let nfl = fixed_lines.len() as u32;

    if order == 1 {
        return ElementClass {
            tag: ClassTag::Identity,
            order,
            fixed_points: nfp,
            fixed_lines: nfl,
            center: None,
            axis: None,
        };
    }

    let mut is_p_power = true;
    let mut o = order;
    while o > 1 {
        if !o.is_multiple_of(p) {
            is_p_power = false;
            break;
        }
        o /= p;
    }

    let (tag, center, axis) = if is_p_power {
        if nfp == q + 1 {
            // elation: q+1 collinear fixed points, q+1 concurrent fixed lines;
            // the center is the common point of the fixed lines, the axis the
            // common line of the fixed points.
            let axis = fixed_lines
                .iter()
                .copied()
                .find(|&l| fixed_points.iter().all(|&pt| plane.incident(pt, l)));
            let center = fixed_points
                .iter()
                .copied()
                .find(|&pt| fixed_lines.iter().all(|&l| plane.incident(pt, l)));
            (ClassTag::Elation, center, axis)
        } else {
            (ClassTag::OrderFourUnipotent, None, None)
        }
    } else if (q - 1).is_multiple_of(order) {
        if nfp == q + 2 {
            // homology: a line pointwise plus an isolated center
            let axis = fixed_lines
                .iter()
                .copied()
                .find(|&l| fixed_points.iter().filter(|&&pt| plane.incident(pt, l)).count() as u32 == q + 1);
            let center = fixed_points
                .iter()
                .copied()
                .find(|&pt| axis.is_some_and(|l| !plane.incident(pt, l)));
            (ClassTag::Homology, center, axis)
        } else {
            (ClassTag::TriangleDiagonal, None, None)
        }
    } else if order.is_multiple_of(p) {
        (ClassTag::MixedOrder, None, None)
    } else if (q * q - 1).is_multiple_of(order) {
        (ClassTag::QuadraticSemisimple, None, None)
    } else {
        debug_assert_eq!((q * q + q + 1) % order, 0);
        (ClassTag::SingerType, None, None)
    };

    ElementClass { tag, order, fixed_points: nfp, fixed_lines: nfl, center, axis }
}

// ---------------------------------------------------------------------------
// Generators for the standard groups and the line-table representatives
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Pgl3,
    Psl3,
}

pub fn group_order_pgl3(q: u64) -> u64 {
    q * q * q * (q * q * q - 1) * (q * q - 1)
}

pub fn group_order_psl3(q: u64) -> u64 {
    let d = if (q - 1).is_multiple_of(3) { 3 } else { 1 };
    group_order_pgl3(q) / d
}

/// Generating matrices for PGL(3,q) or PSL(3,q).
pub fn standard_generators(f: &FieldSpec, kind: GroupKind) -> Vec<Mat> {
    let e = f.primitive();
    let mut gens = vec![
        // root transvections for the (1,2) and (2,1) positions, over a basis
        [1, 1, 0, 0, 1, 0, 0, 0, 1],
        [1, e, 0, 0, 1, 0, 0, 0, 1],
        [1, 0, 0, 1, 1, 0, 0, 0, 1],
        [1, 0, 0, e, 1, 0, 0, 0, 1],
        // 3-cycle of coordinates
        [0, 0, 1, 1, 0, 0, 0, 1, 0],
    ];
    if kind == GroupKind::Pgl3 {
        gens.push([e, 0, 0, 0, 1, 0, 0, 0, 1]);
    }
    gens
}

/// Materialize PGL(3,q) or PSL(3,q) as a permutation-carrying matrix group.
pub fn materialize_group(q: u32, kind: GroupKind) -> Result<Group, PglError> {
    let plane = Plane::build(q)?;
    let gens = standard_generators(plane.field(), kind);
    let expected = match kind {
        GroupKind::Pgl3 => group_order_pgl3(q as u64),
        GroupKind::Psl3 => group_order_psl3(q as u64),
    };
    let g = Group::generate(plane, &gens, expected)?;
    debug_assert_eq!(g.order(), expected);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximalKind {
    PointStab,
    LineStab,
    TriangleStab,
    SingerNorm,
    SubplaneStab,
}

/// Search for a monic irreducible cubic over GF(q) whose companion matrix has
/// projective order q^2+q+1 (so its powers are a full Singer cycle). The
/// search order is fixed, so the returned modulus is reproducible.
pub fn singer_cubic(f: &FieldSpec) -> [u8; 4] {
    let q = f.q() as u8;
    for c0 in 1..q {
        for c1 in 0..q {
            for c2 in 0..q {
                // x^3 + c2 x^2 + c1 x + c0; irreducible iff it has no root
                let has_root = (0..q).any(|x| {
                    let x2 = f.mul(x, x);
                    let x3 = f.mul(x2, x);
                    let v = f.add(
                        f.add(x3, f.mul(c2, x2)),
                        f.add(f.mul(c1, x), c0),
                    );
                    v == 0
                });
                if has_root {
                    continue;
                }
                let comp = companion_of(f, &[c0, c1, c2, 1]);
                if projective_order(f, &comp) == (f.q() * f.q() + f.q() + 1) as u64 {
                    return [c0, c1, c2, 1];
                }
            }
        }
    }
    unreachable!("an irreducible cubic with full Singer order always exists");
}

fn projective_order(f: &FieldSpec, m: &Mat) -> u64 {
    let mut cur = *m;
    canonicalize(f, &mut cur);
    let mut n = 1u64;
    let mut acc = cur;
    while acc != IDENTITY {
        acc = mat_mul(f, &acc, &cur);
        canonicalize(f, &mut acc);
        n += 1;
        if n > (f.q() as u64 + 1) * (f.q() as u64 + 1) {
            return n; // defensive bound; callers only compare for equality
        }
    }
    n
}

/// Companion matrix of x^3 + c2 x^2 + c1 x + c0 with correct signs.
fn companion_of(f: &FieldSpec, m: &[u8; 4]) -> Mat {
    let (c0, c1, c2) = (m[0], m[1], m[2]);
    [
        0, 0, f.neg(c0),
        1, 0, f.neg(c1),
        0, 1, f.neg(c2),
    ]
}

/// Matrix of the q-power Frobenius of GF(q^3) in the basis {1, x, x^2}.
fn frobenius_matrix(f: &FieldSpec, modulus: &[u8; 4]) -> Mat {
    // polynomial arithmetic over GF(q) modulo the cubic
    let mul_mod = |a: &[u8; 3], b: &[u8; 3]| -> [u8; 3] {
        let mut prod = [0u8; 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = f.add(prod[i + j], f.mul(a[i], b[j]));
            }
        }
        for d in (3..5).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for i in 0..3 {
                    let sub = f.mul(c, modulus[i]);
                    prod[d - 3 + i] = f.sub(prod[d - 3 + i], sub);
                }
            }
        }
        [prod[0], prod[1], prod[2]]
    };
    let x = [0u8, 1, 0];
    // x^q by square-and-multiply
    let mut result = [1u8, 0, 0];
    let mut base = x;
    let mut e = f.q();
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base);
        }
        base = mul_mod(&base, &base);
        e >>= 1;
    }
    // columns = (x^j)^q = (x^q)^j
    let col0 = [1u8, 0, 0];
    let col1 = result;
    let col2 = mul_mod(&result, &result);
    [
        col0[0], col1[0], col2[0],
        col0[1], col1[1], col2[1],
        col0[2], col1[2], col2[2],
    ]
}

/// Generators (not yet closed) for the canonical maximal subgroup of a kind.
pub fn maximal_generators(f: &FieldSpec, kind: MaximalKind) -> Result<Vec<Mat>, PglError> {
    let e = f.primitive();
    Ok(match kind {
        MaximalKind::PointStab => vec![
            // stabilizer of (1:0:0)
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [1, 0, 0, 0, 0, 1, 0, 1, 0],
        ],
        MaximalKind::LineStab => vec![
            // stabilizer of the line Z=0
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [0, 1, 0, 1, 0, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
        ],
        MaximalKind::TriangleStab => vec![
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
            [0, 1, 0, 0, 0, 1, 1, 0, 0],
            [0, 1, 0, 1, 0, 0, 0, 0, 1],
        ],
        MaximalKind::SingerNorm => {
            let cubic = singer_cubic(f);
            vec![companion_of(f, &cubic), frobenius_matrix(f, &cubic)]
        }
        MaximalKind::SubplaneStab => {
            if f.p() != 2 || f.k() < 2 || f.k().is_multiple_of(2) {
                return Err(PglError::InvalidKind(f.q()));
            }
            // the GF(2)-subfield copy of PSL(3,2); indices {0,1} are GF(2)
            vec![
                [1, 1, 0, 0, 1, 0, 0, 0, 1],
                [1, 0, 0, 1, 1, 0, 0, 0, 1],
                [0, 0, 1, 1, 0, 0, 0, 1, 0],
            ]
        }
    })
}

/// Expected order of a maximal subgroup per its defining formula.
pub fn maximal_order(kind: MaximalKind, q: u64) -> u64 {
    match kind {
        MaximalKind::PointStab | MaximalKind::LineStab => q * q * q * (q - 1) * (q - 1) * (q + 1),
        MaximalKind::TriangleStab => 6 * (q - 1) * (q - 1),
        MaximalKind::SingerNorm => 3 * (q * q + q + 1),
        MaximalKind::SubplaneStab => 168,
    }
}

/// Build the canonical representative of a maximal subgroup of PGL(3,q).
pub fn maximal_constructor(kind: MaximalKind, q: u32) -> Result<SubgroupRec, PglError> {
    let f = FieldSpec::from_q(q).map_err(|_| PglError::InvalidQ(q))?;
    let gens = maximal_generators(&f, kind)?;
    let expected = maximal_order(kind, q as u64);
    let rec = closure(&f, &gens, expected)?;
    assert_eq!(rec.order, expected, "maximal subgroup order mismatch");
    Ok(rec)
}

/// Generating matrices for a line-table representative inside PSL(3,2^p).
/// Entries use the primitive element eps of GF(2^p); lines realized inside
/// the subfield copy of PSL(3,2) only use entries 0 and 1.
pub fn line_rep_generators(f: &FieldSpec, line: u8) -> Result<Vec<Mat>, PglError> {
    let e = f.primitive();
    let gens: Vec<Mat> = match line {
        1 => maximal_generators(f, MaximalKind::PointStab)?,
        2 => maximal_generators(f, MaximalKind::LineStab)?,
        3 => maximal_generators(f, MaximalKind::TriangleStab)?,
        4 => maximal_generators(f, MaximalKind::SingerNorm)?,
        5 => maximal_generators(f, MaximalKind::SubplaneStab)?,
        6 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
        ],
        7 => vec![
            [1, 0, 0, 0, e, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [1, 0, 0, 0, 0, 1, 0, 1, 0],
        ],
        8 => vec![
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
        ],
        9 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
        ],
        10 => vec![
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [1, 0, 0, 0, 1, 0, 0, 0, e],
        ],
        11 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
        ],
        12 => vec![
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
        ],
        13 => vec![
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
            [1, 0, 0, 0, 0, 1, 0, 1, 0],
        ],
        14 => vec![
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, e, 0, 0, 0, 1],
        ],
        15 => vec![
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 0, 0, 0, e],
        ],
        16 => vec![
            [e, 0, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
        ],
        17 => vec![[1, 0, 1, 0, e, 0, 0, 0, 1]],
        18 => {
            // the full group of elations with center (1:0:0) and axis Z=0:
            // translations by a GF(2)-basis of the field
            let mut v = Vec::new();
            let mut b = 1u8;
            for _ in 0..f.k() {
                v.push([1, 0, b, 0, 1, 0, 0, 0, 1]);
                b = f.mul(b, e); // powers of the primitive root form a basis
            }
            v
        }
        19 => vec![[e, 0, 0, 0, 1, 0, 0, 0, 1]],
        20 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
            [1, 0, 0, 0, 0, 1, 0, 1, 0],
        ],
        21 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [0, 1, 0, 1, 0, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
        ],
        22 => vec![
            // Singer normalizer of the subfield plane: companion of x^3+x+1
            // and the GF(2)-Frobenius matrix in the same basis
            [0, 0, 1, 1, 0, 1, 0, 1, 0],
            [1, 0, 0, 0, 0, 1, 0, 1, 1],
        ],
        23 => vec![
            [1, 1, 1, 0, 1, 1, 0, 0, 1],
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
        ],
        24 => vec![[0, 0, 1, 1, 0, 1, 0, 1, 0]],
        25 => vec![
            [0, 1, 0, 1, 1, 0, 0, 0, 1],
            [0, 1, 0, 1, 0, 0, 0, 0, 1],
        ],
        26 => vec![[1, 1, 1, 0, 1, 1, 0, 0, 1]],
        27 => vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
        ],
        28 => vec![
            [1, 0, 1, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1, 0, 0, 1],
        ],
        29 => vec![[0, 1, 0, 1, 1, 0, 0, 0, 1]],
        30 => vec![[1, 0, 1, 0, 1, 0, 0, 0, 1]],
        31 => vec![],
        _ => return Err(PglError::UnsupportedLine(line)),
    };
    Ok(gens)
}

/// Build a line-table representative with its full element set, checking
/// the order against the expected value supplied by the caller.
pub fn line_rep(f: &FieldSpec, line: u8, expected_order: u64, cap: u64) -> Result<SubgroupRec, PglError> {
    if expected_order > cap {
        return Err(PglError::TooLarge);
    }
    let gens = line_rep_generators(f, line)?;
    let mut rec = closure(f, &gens, expected_order)?;
    if rec.order != expected_order {
        return Err(PglError::CapExceeded(expected_order));
    }
    rec.tag = Some(line);
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Orbits, stabilizers, normalizers, transporter counts (materialized groups)
// ---------------------------------------------------------------------------

/// Orbit of a point id under generator permutations.
pub fn point_orbit(perms: &[Vec<u16>], seed: u16) -> Vec<u16> {
    let n = perms.first().map_or(0, |p| p.len());
    let mut seen = vec![false; n];
    let mut orbit = vec![seed];
    seen[seed as usize] = true;
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        i += 1;
        for p in perms {
            let y = p[x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
    }
    orbit.sort_unstable();
    orbit
}

/// Orbit and stabilizer of a point inside a materialized group restricted to
/// the given element ids (pass `0..order` for the whole group).
pub fn orbit_stabilizer(group: &Group, member_ids: &[u32], seed: u16) -> (Vec<u16>, Vec<u32>) {
    let gen_perms: Vec<Vec<u16>> = member_ids
        .iter()
        .map(|&i| group.perms[i as usize].clone())
        .collect();
    let orbit = point_orbit(&gen_perms, seed);
    let stab: Vec<u32> = member_ids
        .iter()
        .copied()
        .filter(|&i| group.perms[i as usize][seed as usize] == seed)
        .collect();
    (orbit, stab)
}

/// Normalizer of `h` (given by sorted ids) inside the listed ambient ids.
pub fn normalizer_ids(group: &Group, ambient_ids: &[u32], h_ids: &[u32], h_gens: &[u32]) -> Vec<u32> {
    ambient_ids
        .iter()
        .copied()
        .filter(|&g| {
            h_gens
                .iter()
                .all(|&x| h_ids.binary_search(&group.conj(g, x)).is_ok())
        })
        .collect()
}

/// Count the conjugates of `k` (under the listed ambient ids) whose element
/// set contains `h`; `n_k` is the normalizer order of `k` in the ambient.
pub fn count_conjugates_containing(
    group: &Group,
    ambient_ids: &[u32],
    h_ids: &[u32],
    h_gens: &[u32],
    k_ids: &[u32],
    n_k: u64,
) -> Result<u64, PglError> {
    let mut transporter = 0u64;
    let gens: &[u32] = if h_gens.is_empty() { h_ids } else { h_gens };
    for &g in ambient_ids {
        let ok = gens
            .iter()
            .all(|&x| k_ids.binary_search(&group.conj(g, x)).is_ok());
        if ok {
            transporter += 1;
        }
    }
    if !transporter.is_multiple_of(n_k) {
        return Err(PglError::NonIntegralCount(transporter, n_k));
    }
    Ok(transporter / n_k)
}

// ---------------------------------------------------------------------------
// Streaming over PGL(3,q) without materializing it
// ---------------------------------------------------------------------------

/// Canonical projective first rows for the stream, in plane point order.
pub fn stream_first_rows(q: u32) -> Vec<[u8; 3]> {
    let mut first_rows = Vec::with_capacity((q * q + q + 1) as usize);
    for y in 0..q as u8 {
        for z in 0..q as u8 {
            first_rows.push([1u8, y, z]);
        }
    }
    for z in 0..q as u8 {
        first_rows.push([0u8, 1, z]);
    }
    first_rows.push([0u8, 0, 1]);
    first_rows
}

/// Visit every element of PGL(3,q) with the given canonical first row: the
/// second row ranges over vectors outside span{r1}, the third over vectors
/// outside span{r1, r2}. Each canonical matrix with this first row appears
/// exactly once; there are q^2 (q^3 - q)(q^3 - q^2) / (q-1)... precisely
/// (q^3 - q)(q^3 - q^2) of them.
pub fn stream_pgl3_row<F: FnMut(&Mat)>(f: &FieldSpec, r1: &[u8; 3], visit: &mut F) {
    let q = f.q() as usize;
    let qq = q * q;
    let qqq = q * q * q;
    // vector code v0*q^2 + v1*q + v2
    let decode = |c: usize| -> [u8; 3] { [(c / qq) as u8, ((c / q) % q) as u8, (c % q) as u8] };
    let encode =
        |v: &[u8; 3]| -> usize { v[0] as usize * qq + v[1] as usize * q + v[2] as usize };
    let mut span1 = [usize::MAX; 128];
    for (i, s) in span1.iter_mut().enumerate().take(q) {
        let v = [f.mul(i as u8, r1[0]), f.mul(i as u8, r1[1]), f.mul(i as u8, r1[2])];
        *s = encode(&v);
    }
    let mut span2 = vec![false; qqq];
    for c2 in 0..qqq {
        if span1[..q].contains(&c2) {
            continue;
        }
        let r2 = decode(c2);
        let mut marked = Vec::with_capacity(qq);
        for a in 0..q as u8 {
            let base = [f.mul(a, r1[0]), f.mul(a, r1[1]), f.mul(a, r1[2])];
            for b in 0..q as u8 {
                let v = [
                    f.add(base[0], f.mul(b, r2[0])),
                    f.add(base[1], f.mul(b, r2[1])),
                    f.add(base[2], f.mul(b, r2[2])),
                ];
                let code = encode(&v);
                span2[code] = true;
                marked.push(code);
            }
        }
        for (c3, &in_span) in span2.iter().enumerate().take(qqq) {
            if in_span {
                continue;
            }
            let r3 = decode(c3);
            let m: Mat = [
                r1[0], r1[1], r1[2],
                r2[0], r2[1], r2[2],
                r3[0], r3[1], r3[2],
            ];
            visit(&m);
        }
        for code in marked {
            span2[code] = false;
        }
    }
}

/// Visit every element of PGL(3,q) exactly once, as a canonical matrix, in a
/// fixed deterministic order.
pub fn stream_pgl3<F: FnMut(&Mat)>(f: &FieldSpec, mut visit: F) {
    for r1 in stream_first_rows(f.q()) {
        stream_pgl3_row(f, &r1, &mut visit);
    }
}

/// Order of the stream above: q^3 (q^3-1)(q^2-1) elements.
pub fn stream_len(q: u64) -> u64 {
    group_order_pgl3(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    #[test]
    fn plane_counts() {
        for q in [2u32, 3, 4, 5, 8] {
            let plane = Plane::build(q).unwrap();
            assert_eq!(plane.n_points(), q * q + q + 1);
            assert_eq!(plane.lines().len() as u32, q * q + q + 1);
            for l in 0..plane.n_points() {
                assert_eq!(plane.points_on_line(l).len() as u32, q + 1);
            }
            for p in 0..plane.n_points() {
                assert_eq!(plane.lines_on_point(p).len() as u32, q + 1);
            }
        }
    }

    #[test]
    fn fano_plane_incidence() {
        let plane = Plane::build(2).unwrap();
        assert_eq!(plane.n_points(), 7);
        // every pair of distinct points lies on exactly one common line
        for a in 0..7u32 {
            for b in (a + 1)..7 {
                let common: Vec<u32> = plane
                    .lines_on_point(a)
                    .iter()
                    .filter(|l| plane.lines_on_point(b).contains(l))
                    .copied()
                    .collect();
                assert_eq!(common.len(), 1);
            }
        }
    }

    #[test]
    fn canonical_form_idempotent_and_scalar_invariant() {
        let f = FieldSpec::from_q(8).unwrap();
        let m: Mat = [3, 1, 4, 1, 5, 0, 2, 6, 5];
        assert_ne!(mat_det(&f, &m), 0);
        let e1 = elem(&f, m).unwrap();
        let mut again = e1.mat;
        canonicalize(&f, &mut again);
        assert_eq!(again, e1.mat);
        for lam in 1..8u8 {
            let scaled: Mat = std::array::from_fn(|i| f.mul(m[i], lam));
            assert_eq!(elem(&f, scaled).unwrap().key, e1.key);
        }
        assert_eq!(elem(&f, [0; 9]).unwrap_err(), PglError::Singular);
    }

    #[test]
    fn identity_gives_identity_perm() {
        let plane = Plane::build(2).unwrap();
        let g = elem(plane.field(), IDENTITY).unwrap();
        let p = g.perm(&plane);
        assert!(p.iter().enumerate().all(|(i, &x)| i == x as usize));
    }

    #[test]
    fn group_orders_small_q() {
        for (q, expected) in [(2u32, 168u64), (3, 5616)] {
            let g = materialize_group(q, GroupKind::Pgl3).unwrap();
            assert_eq!(g.order(), expected);
        }
        assert_eq!(group_order_pgl3(3), 5616);
        let psl4 = materialize_group(4, GroupKind::Psl3).unwrap();
        assert_eq!(psl4.order(), 20160);
        let pgl4 = materialize_group(4, GroupKind::Pgl3).unwrap();
        assert_eq!(pgl4.order(), 60480);
    }

    #[test]
    fn elation_matrix_classified() {
        let plane = Plane::build(8).unwrap();
        let f = plane.field();
        let alpha = elem(f, [1, 0, 1, 0, 1, 0, 0, 0, 1]).unwrap();
        let c = classify(&plane, &alpha);
        assert_eq!(c.tag, ClassTag::Elation);
        assert_eq!(c.order, 2);
        assert_eq!(c.fixed_points, 9);
        assert_eq!(c.center, Some(plane.point_id(&[1, 0, 0])));
        assert_eq!(c.axis, Some(plane.line_id(&[0, 0, 1])));
        // alpha^2 = 1
        let sq = mat_mul(f, &alpha.mat, &alpha.mat);
        assert_eq!(canonical_key(f, &sq), pack_key(&IDENTITY));
    }

    #[test]
    fn order_four_unipotent_classified() {
        let plane = Plane::build(8).unwrap();
        let g = elem(plane.field(), [1, 1, 1, 0, 1, 1, 0, 0, 1]).unwrap();
        let c = classify(&plane, &g);
        assert_eq!(c.tag, ClassTag::OrderFourUnipotent);
        assert_eq!(c.order, 4);
        assert_eq!(c.fixed_points, 1);
        assert_eq!(c.fixed_lines, 1);
    }

    #[test]
    fn homology_classified_q4() {
        let plane = Plane::build(4).unwrap();
        let f = plane.field();
        let w = f.primitive(); // order 3 in GF(4)
        let g = elem(f, [w, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        let c = classify(&plane, &g);
        assert_eq!(c.tag, ClassTag::Homology);
        assert_eq!(c.order, 3);
        assert_eq!(c.fixed_points, 4 + 2);
        // fixes the line X=0 pointwise
        let axis = plane.line_id(&[1, 0, 0]);
        assert_eq!(c.axis, Some(axis));
        assert_eq!(c.center, Some(plane.point_id(&[1, 0, 0])));
    }

    #[test]
    fn closure_of_subfield_psl32() {
        // generators of SL(3,2) with 0/1 entries: order 168 over GF(2)
        let f2 = FieldSpec::from_q(2).unwrap();
        let gens: Vec<Mat> = vec![
            [1, 1, 0, 0, 1, 0, 0, 0, 1],
            [1, 0, 0, 1, 1, 0, 0, 0, 1],
            [0, 0, 1, 1, 0, 0, 0, 1, 0],
        ];
        let rec = closure(&f2, &gens, 200).unwrap();
        assert_eq!(rec.order, 168);
        // same matrices inside GF(8): an order-168 subgroup of PSL(3,8)
        let f8 = FieldSpec::from_q(8).unwrap();
        let rec8 = closure(&f8, &gens, 200).unwrap();
        assert_eq!(rec8.order, 168);
    }

    #[test]
    fn maximal_orders_q2_and_q8() {
        assert_eq!(maximal_constructor(MaximalKind::SingerNorm, 2).unwrap().order, 21);
        assert_eq!(
            maximal_constructor(MaximalKind::TriangleStab, 8).unwrap().order,
            294
        );
        assert_eq!(
            maximal_constructor(MaximalKind::PointStab, 8).unwrap().order,
            225_792
        );
    }

    #[test]
    fn orbit_stabilizer_product() {
        let g = materialize_group(2, GroupKind::Pgl3).unwrap();
        let all: Vec<u32> = (0..g.order() as u32).collect();
        let (orbit, stab) = orbit_stabilizer(&g, &all, 0);
        assert_eq!(orbit.len(), 7);
        assert_eq!(stab.len(), 24);
        assert_eq!(orbit.len() as u64 * stab.len() as u64, g.order());
    }

    #[test]
    fn two_transitive_on_points_q4() {
        // single orbit on ordered distinct point pairs of size 21*20
        let g = materialize_group(4, GroupKind::Pgl3).unwrap();
        let n = g.plane.n_points() as usize;
        let mut seen = vec![vec![false; n]; n];
        let mut orbit = vec![(0u16, 1u16)];
        seen[0][1] = true;
        let mut i = 0;
        while i < orbit.len() {
            let (a, b) = orbit[i];
            i += 1;
            for &gid in &g.gen_ids {
                let p = &g.perms[gid as usize];
                let (x, y) = (p[a as usize], p[b as usize]);
                if !seen[x as usize][y as usize] {
                    seen[x as usize][y as usize] = true;
                    orbit.push((x, y));
                }
            }
        }
        assert_eq!(orbit.len(), 21 * 20);
    }

    #[test]
    fn stream_counts_small_q() {
        for q in [2u32, 3] {
            let f = FieldSpec::from_q(q).unwrap();
            let mut n = 0u64;
            let mut keys = FxHashSet::default();
            stream_pgl3(&f, |m| {
                n += 1;
                assert_ne!(mat_det(&f, m), 0);
                // already canonical
                assert_eq!(canonical_key(&f, m), pack_key(m));
                keys.insert(pack_key(m));
            });
            assert_eq!(n, stream_len(q as u64));
            assert_eq!(keys.len() as u64, n);
        }
    }

    #[test]
    fn elation_count_exhaustive() {
        // number of elations equals (q^2+q+1)(q^2-1), checked by classifying
        // the full group
        for q in [2u32, 3, 4] {
            let g = materialize_group(q, GroupKind::Pgl3).unwrap();
            let mut elations = 0u64;
            for m in &g.mats {
                let ge = elem(g.field(), *m).unwrap();
                if classify(&g.plane, &ge).tag == ClassTag::Elation {
                    elations += 1;
                }
            }
            let q64 = q as u64;
            assert_eq!(elations, (q64 * q64 + q64 + 1) * (q64 * q64 - 1));
        }
    }

    #[test]
    fn classify_is_conjugation_invariant() {
        let g = materialize_group(3, GroupKind::Pgl3).unwrap();
        let mut s = 12345u64;
        for _ in 0..200 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = ((s >> 32) % g.order()) as u32;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let h = ((s >> 32) % g.order()) as u32;
            let y = g.conj(h, x);
            let cx = classify(&g.plane, &elem(g.field(), g.mats[x as usize]).unwrap());
            let cy = classify(&g.plane, &elem(g.field(), g.mats[y as usize]).unwrap());
            assert_eq!(cx.tag, cy.tag);
            assert_eq!(cx.order, cy.order);
            assert_eq!(cx.fixed_points, cy.fixed_points);
        }
    }
}
