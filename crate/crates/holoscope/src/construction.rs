//! The order-168 constructions inside affine groups over F_2.
//!
//! GL_3(2) embeds transitively into Aff(F_2^3) by decorating each matrix M
//! with a translation column psi(M). This module pins the canonical
//! generators, solves for psi by exhaustive search, enumerates all
//! transitive subgroups of Aff(F_2^3) isomorphic to GL_3(2), lifts the
//! construction to block wreath products GL_3(2) wr H inside Aff(F_2^{3r}),
//! and computes the normalizer-stabilizer of the diagonal block group.

use crate::affine::AffineElement;
use crate::gf::{GFMatrix, GFVector, GfError, Subspace};
use crate::group::{
    self, close, ActionTable, FiniteGroup, GroupElement, GroupError, PointAction, SubgroupHandle,
};
use crate::holomorph::{self, AffineHolomorph, HolError};
use crate::perm::Permutation;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid wreath spec: {0}")]
    SpecInvalid(String),
    #[error("materialization bound exceeded: r = {0}")]
    MaterializationBound(usize),
    #[error("count formula does not divide: {0} * {1} / {2}")]
    NonIntegralCount(u64, u64, u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hol(#[from] HolError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

// ---------------------------------------------------------------------------
// Canonical generators and the psi map
// ---------------------------------------------------------------------------

/// The four canonical generators of GL_3(2): A, B of orders 7 and 3 generate
/// the index-8 subgroup T', and C, D generate a Sylow 2-subgroup.
pub struct CanonicalGenerators {
    pub a: GFMatrix,
    pub b: GFMatrix,
    pub c: GFMatrix,
    pub d: GFMatrix,
}

fn mat3(entries: [u8; 9]) -> GFMatrix {
    GFMatrix::from_entries(2, 3, 3, &entries).expect("3x3 literal")
}

/// Returns the literal generator matrices and asserts every defining
/// relation among them; a failure here means a transcription bug.
pub fn canonical_generators() -> CanonicalGenerators {
    let a = mat3([0, 0, 1, 1, 0, 1, 0, 1, 0]);
    let b = mat3([1, 0, 0, 0, 0, 1, 0, 1, 1]);
    let c = mat3([1, 1, 0, 0, 1, 1, 0, 0, 1]);
    let d = mat3([1, 0, 0, 0, 1, 1, 0, 0, 1]);
    assert_generator_relations(&a, &b, &c, &d, "matrix");
    CanonicalGenerators { a, b, c, d }
}

/// A^7 = B^3 = I, BA = A^2 B; C^4 = D^2 = I != C^2, DCD^{-1} = C^3;
/// CA = A^3 C^2 D, CB = B^2 C^2 D, DA = A C^3 D, DB = B^2 D.
fn assert_generator_relations<E: GroupElement>(a: &E, b: &E, c: &E, d: &E, what: &str) {
    let id = a.identity_like();
    let pow = |x: &E, k: u32| -> E {
        let mut acc = id.clone();
        for _ in 0..k {
            acc = acc.op(x);
        }
        acc
    };
    assert_eq!(pow(a, 7), id, "{what}: A^7 = I");
    assert_eq!(pow(b, 3), id, "{what}: B^3 = I");
    assert_eq!(b.op(a), pow(a, 2).op(b), "{what}: BA = A^2 B");
    assert_eq!(pow(c, 4), id, "{what}: C^4 = I");
    assert_eq!(pow(d, 2), id, "{what}: D^2 = I");
    assert_ne!(pow(c, 2), id, "{what}: C^2 != I");
    assert_eq!(d.op(c).op(&d.inverse()), pow(c, 3), "{what}: DCD^-1 = C^3");
    assert_eq!(
        c.op(a),
        pow(a, 3).op(&pow(c, 2)).op(d),
        "{what}: CA = A^3 C^2 D"
    );
    assert_eq!(
        c.op(b),
        pow(b, 2).op(&pow(c, 2)).op(d),
        "{what}: CB = B^2 C^2 D"
    );
    assert_eq!(d.op(a), a.op(&pow(c, 3)).op(d), "{what}: DA = A C^3 D");
    assert_eq!(d.op(b), pow(b, 2).op(d), "{what}: DB = B^2 D");
}

/// The translation columns of the canonical transitive embedding:
/// psi(A) = psi(B) = 0, psi(C) = (0,1,1), psi(D) = (1,0,0).
pub const PSI_C_COLUMN: [u8; 3] = [0, 1, 1];
pub const PSI_D_COLUMN: [u8; 3] = [1, 0, 0];

/// The hatted generators of the canonical order-168 transitive subgroup of
/// Aff(F_2^3), with the solved translation columns.
pub fn canonical_affine_generators() -> [AffineElement; 4] {
    let CanonicalGenerators { a, b, c, d } = canonical_generators();
    let zero = GFVector::zero(2, 3);
    let hatted = [
        AffineElement::new(a, zero.clone()).unwrap(),
        AffineElement::new(b, zero).unwrap(),
        AffineElement::new(c, GFVector::new(2, PSI_C_COLUMN.to_vec()).unwrap()).unwrap(),
        AffineElement::new(d, GFVector::new(2, PSI_D_COLUMN.to_vec()).unwrap()).unwrap(),
    ];
    assert_generator_relations(&hatted[0], &hatted[1], &hatted[2], &hatted[3], "affine");
    hatted
}

/// The canonical transitive order-168 subgroup of Aff(F_2^3).
pub fn canonical_group() -> FiniteGroup<AffineElement> {
    let g = close(&canonical_affine_generators(), 169).expect("canonical closure");
    assert_eq!(g.order(), 168, "canonical group order");
    g
}

/// The function psi on all 168 matrices, with M -> (psi(M), M) a group
/// embedding; the cocycle identity psi(MN) = psi(M) + M psi(N) holds.
pub struct PsiMap {
    table: HashMap<GFMatrix, GFVector>,
}

impl PsiMap {
    pub fn psi(&self, m: &GFMatrix) -> Option<&GFVector> {
        self.table.get(m)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// (psi(M), M) as an affine element.
    pub fn hatted(&self, m: &GFMatrix) -> AffineElement {
        let v = self.table.get(m).expect("matrix in GL_3(2)").clone();
        AffineElement::new(m.clone(), v).expect("invertible")
    }
}

/// Solve for the unknown C and D columns by exhaustive search over all 64
/// assignments, keeping those whose closure has order 168 and acts
/// transitively; the solution is unique.
pub fn solve_psi() -> PsiMap {
    let CanonicalGenerators { a, b, c, d } = canonical_generators();
    let ctx = AffineHolomorph::new(2, 3).expect("small context");
    let zero = GFVector::zero(2, 3);
    let a_hat = AffineElement::new(a, zero.clone()).unwrap();
    let b_hat = AffineElement::new(b, zero).unwrap();

    let mut survivors = Vec::new();
    for ci in 0..8usize {
        for di in 0..8usize {
            let c_hat =
                AffineElement::new(c.clone(), GFVector::from_point_index(2, 3, ci)).unwrap();
            let d_hat =
                AffineElement::new(d.clone(), GFVector::from_point_index(2, 3, di)).unwrap();
            let gens = [a_hat.clone(), b_hat.clone(), c_hat, d_hat];
            if let Ok(g) = close(&gens, 169) {
                if g.order() == 168 && holomorph::is_transitive(&g, &ctx).unwrap() {
                    survivors.push((ci, di, g));
                }
            }
        }
    }
    assert_eq!(survivors.len(), 1, "psi assignment must be unique among 64");
    let (ci, di, g) = survivors.pop().unwrap();
    assert_eq!(
        GFVector::from_point_index(2, 3, ci).entries(),
        &PSI_C_COLUMN,
        "solved C column"
    );
    assert_eq!(
        GFVector::from_point_index(2, 3, di).entries(),
        &PSI_D_COLUMN,
        "solved D column"
    );

    let mut table = HashMap::new();
    for e in g.elements() {
        let prev = table.insert(e.lin().clone(), e.trans().clone());
        assert!(prev.is_none(), "projection to GL_3(2) must be injective");
    }
    assert_eq!(table.len(), 168);
    let map = PsiMap { table };

    // cocycle identity at all 168^2 pairs
    for (m, vm) in &map.table {
        for (n, vn) in &map.table {
            let mn = m.mat_mul(n).unwrap();
            let lhs = map.table.get(&mn).expect("closed");
            let rhs = vm.add(&m.mul_vec(vn).unwrap()).unwrap();
            assert_eq!(*lhs, rhs, "cocycle psi(MN) = psi(M) + M psi(N)");
        }
    }
    // surjectivity of psi
    let image: HashSet<usize> = map.table.values().map(|v| v.point_index()).collect();
    assert_eq!(image.len(), 8, "psi is surjective onto F_2^3");
    // psi vanishes on the stabilizer generators
    let CanonicalGenerators { a, b, .. } = canonical_generators();
    assert!(map.table[&a].is_zero() && map.table[&b].is_zero());
    map
}

// ---------------------------------------------------------------------------
// The eight transitive subgroups isomorphic to GL_3(2)
// ---------------------------------------------------------------------------

/// GL_3(2) as a matrix group.
pub fn gl3_2() -> FiniteGroup<GFMatrix> {
    let CanonicalGenerators { a, b, c, d } = canonical_generators();
    let t = close(&[a, b, c, d], 169).expect("GL_3(2) closure");
    assert_eq!(t.order(), 168);
    t
}

impl GroupElement for GFMatrix {
    fn identity_like(&self) -> Self {
        GFMatrix::identity(self.p(), self.rows())
    }

    fn op(&self, rhs: &Self) -> Self {
        self.mat_mul(rhs).expect("square matrices of equal dims")
    }

    fn inverse(&self) -> Self {
        self.mat_inverse().expect("group elements are invertible")
    }
}

impl PointAction for GFMatrix {
    fn degree(&self) -> usize {
        (self.p() as usize).pow(self.rows() as u32)
    }

    fn image_of(&self, point: usize) -> usize {
        let v = GFVector::from_point_index(self.p(), self.rows(), point);
        self.mul_vec(&v).expect("dims").point_index()
    }
}

/// The 8 subgroups of GL_3(2) of index 8: the normalizers of the 8 Sylow
/// 7-subgroups, each of order 21.
pub fn sylow7_normalizers(t: &FiniteGroup<GFMatrix>) -> Vec<SubgroupHandle<GFMatrix>> {
    let mut sylows: Vec<FiniteGroup<GFMatrix>> = Vec::new();
    let mut seen = HashSet::new();
    for e in t.elements() {
        if group::element_order(e) == 7 {
            let p = close(std::slice::from_ref(e), 8).expect("order-7 cyclic");
            if seen.insert(p.canonical_key()) {
                sylows.push(p);
            }
        }
    }
    assert_eq!(sylows.len(), 8, "GL_3(2) has 8 Sylow 7-subgroups");
    let mut out = Vec::new();
    for p in &sylows {
        let fixing: Vec<GFMatrix> = t
            .elements()
            .iter()
            .filter(|g| {
                let ginv = g.inverse();
                p.elements().iter().all(|x| p.contains(&g.op(x).op(&ginv)))
            })
            .cloned()
            .collect();
        let norm = t.subgroup_from_elements(fixing).expect("normalizer");
        assert_eq!(norm.order(), 21);
        out.push(norm);
    }
    out.sort_by_key(|s| s.group().canonical_key());
    out
}

/// All transitive subgroups of Aff(F_2^3) isomorphic to GL_3(2): one per
/// Sylow 7-normalizer, produced by conjugating the canonical group so its
/// stabilizer lands on that normalizer. Exactly 8, pairwise distinct, all
/// conjugate under Aut(V).
pub fn enumerate_transitive_t_subgroups() -> Vec<FiniteGroup<AffineElement>> {
    let t = gl3_2();
    let normalizers = sylow7_normalizers(&t);
    let canonical = canonical_group();
    let CanonicalGenerators { a, b, .. } = canonical_generators();
    let t_prime = t
        .subgroup_from_generators(&[a, b])
        .expect("T' = <A, B> inside GL_3(2)");
    assert_eq!(t_prime.order(), 21);
    assert!(
        normalizers
            .iter()
            .any(|n| n.group().canonical_key() == t_prime.group().canonical_key()),
        "<A, B> is one of the Sylow 7-normalizers"
    );

    let mut out: Vec<FiniteGroup<AffineElement>> = Vec::new();
    let mut seen = HashSet::new();
    for norm in &normalizers {
        // first conjugator in canonical order taking T' to this normalizer
        let conjugator = t
            .elements()
            .iter()
            .find(|x| {
                let xinv = x.inverse();
                t_prime
                    .group()
                    .elements()
                    .iter()
                    .all(|y| norm.group().contains(&x.op(y).op(&xinv)))
            })
            .expect("Sylow normalizers are conjugate")
            .clone();
        let x_hat = AffineElement::linear(conjugator).expect("invertible");
        let x_inv = x_hat.inverse();
        let conj_elements: Vec<AffineElement> = canonical
            .elements()
            .iter()
            .map(|e| x_hat.op(e).op(&x_inv))
            .collect();
        let g = FiniteGroup::from_elements(conj_elements).expect("conjugate subgroup");
        assert_eq!(g.order(), 168);
        if seen.insert(g.canonical_key()) {
            out.push(g);
        }
    }
    assert_eq!(
        out.len(),
        8,
        "exactly 8 transitive subgroups isomorphic to T"
    );

    let ctx = AffineHolomorph::new(2, 3).expect("context");
    for g in &out {
        assert!(holomorph::is_transitive(g, &ctx).unwrap());
        assert_eq!(holomorph::translations(g).unwrap().dim(), 0);
    }
    // single orbit under conjugation by Aut(V)
    let orbit = aut_v_conjugacy_orbit(&canonical, &t);
    let orbit_keys: HashSet<_> = orbit.iter().map(|g| g.canonical_key()).collect();
    assert_eq!(orbit_keys.len(), 8);
    for g in &out {
        assert!(orbit_keys.contains(&g.canonical_key()));
    }
    out.sort_by_key(|g| g.canonical_key());
    out
}

/// Conjugates of `g0` under all of Aut(V) = GL_3(2), deduplicated.
fn aut_v_conjugacy_orbit(
    g0: &FiniteGroup<AffineElement>,
    t: &FiniteGroup<GFMatrix>,
) -> Vec<FiniteGroup<AffineElement>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for x in t.elements() {
        let x_hat = AffineElement::linear(x.clone()).expect("invertible");
        let x_inv = x_hat.inverse();
        let elements: Vec<AffineElement> = g0
            .elements()
            .iter()
            .map(|e| x_hat.op(e).op(&x_inv))
            .collect();
        let mut key = elements.clone();
        key.sort();
        if seen.insert(key) {
            out.push(FiniteGroup::from_elements(elements).expect("conjugate subgroup"));
        }
    }
    out
}

/// Independent exhaustive route: any transitive subgroup isomorphic to T has
/// trivial translations (T is simple, translation subgroups are abelian and
/// normal), so it projects bijectively onto GL_3(2) and is the closure of
/// hatted A, B, C, D for exactly one choice of four translation columns.
/// Scans all 8^4 = 4096 assignments.
pub fn exhaustive_transitive_t_scan(jobs: usize) -> Vec<FiniteGroup<AffineElement>> {
    let CanonicalGenerators { a, b, c, d } = canonical_generators();
    let ctx = AffineHolomorph::new(2, 3).expect("context");
    let assignments: Vec<usize> = (0..4096).collect();
    let scan_one = |t: &usize| -> Vec<FiniteGroup<AffineElement>> {
        let (va, vb, vc, vd) = (t & 7, (t >> 3) & 7, (t >> 6) & 7, (t >> 9) & 7);
        let gens = [
            AffineElement::new(a.clone(), GFVector::from_point_index(2, 3, va)).unwrap(),
            AffineElement::new(b.clone(), GFVector::from_point_index(2, 3, vb)).unwrap(),
            AffineElement::new(c.clone(), GFVector::from_point_index(2, 3, vc)).unwrap(),
            AffineElement::new(d.clone(), GFVector::from_point_index(2, 3, vd)).unwrap(),
        ];
        match close(&gens, 169) {
            Ok(g) if g.order() == 168 && holomorph::is_transitive(&g, &ctx).unwrap() => vec![g],
            _ => Vec::new(),
        }
    };
    let found = holomorph::run_chunked(&assignments, jobs, scan_one);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in found {
        if seen.insert(g.canonical_key()) {
            out.push(g);
        }
    }
    out.sort_by_key(|g| g.canonical_key());
    out
}

// ---------------------------------------------------------------------------
// Wreath construction
// ---------------------------------------------------------------------------

/// r block copies of the order-168 group, permuted by a transitive soluble
/// subgroup H of S_r.
pub struct WreathSpec {
    r: usize,
    h: FiniteGroup<Permutation>,
}

impl WreathSpec {
    pub fn new(r: usize, h: FiniteGroup<Permutation>) -> Result<Self, ConstructionError> {
        if !(1..=4).contains(&r) {
            return Err(ConstructionError::SpecInvalid(format!(
                "r = {r} outside 1..=4"
            )));
        }
        if h.identity().images().len() != r {
            return Err(ConstructionError::SpecInvalid(format!(
                "H must be a transitive subgroup of S_{r}"
            )));
        }
        let action = ActionTable::from_group(&h)?;
        if action.orbit(0)?.len() != r {
            return Err(ConstructionError::SpecInvalid(format!(
                "H must be a transitive subgroup of S_{r}"
            )));
        }
        if !group::is_soluble(&h) {
            return Err(ConstructionError::SpecInvalid("H must be soluble".into()));
        }
        Ok(WreathSpec { r, h })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn h(&self) -> &FiniteGroup<Permutation> {
        &self.h
    }
}

/// Lift a 3x3 matrix with its psi column into block `i` of Aff(F_2^{3r}).
fn block_lift(m: &GFMatrix, psi: &GFVector, i: usize, r: usize) -> AffineElement {
    let n = 3 * r;
    let mut lin = GFMatrix::identity(2, n);
    let mut trans = vec![0u8; n];
    for u in 0..3 {
        for v in 0..3 {
            lin.set(3 * i + u, 3 * i + v, m.get(u, v));
        }
        trans[3 * i + u] = psi.get(u);
    }
    AffineElement::new(lin, GFVector::new(2, trans).unwrap()).expect("block lift invertible")
}

/// The block permutation matrix P(pi): block (pi(j), j) = I.
pub fn block_permutation(pi: &Permutation, r: usize) -> AffineElement {
    let n = 3 * r;
    let mut lin = GFMatrix::zero(2, n, n);
    for j in 0..r {
        let i = pi.apply(j);
        for u in 0..3 {
            lin.set(3 * i + u, 3 * j + u, 1);
        }
    }
    AffineElement::new(lin, GFVector::zero(2, n)).expect("permutation matrix invertible")
}

/// The geometry of one wreath construction G = J x| H inside Aff(F_2^{3r}).
pub struct WreathGroup {
    pub r: usize,
    pub h: FiniteGroup<Permutation>,
    pub ctx: AffineHolomorph,
    /// block-1 lifts of the hatted generators plus P(pi) for generators of H
    pub generators: Vec<AffineElement>,
    /// lifts of all four hatted generators in every block
    pub j_generators: Vec<AffineElement>,
    pub h_generators: Vec<AffineElement>,
    /// 168^r |H|
    pub order: u128,
    /// full element set, materialized for r <= 2
    pub group: Option<FiniteGroup<AffineElement>>,
}

/// Cap on full materialization: 168^2 * |S_2| elements is fine, 168^3 is not.
const WREATH_MATERIALIZE_MAX_R: usize = 2;

pub fn build_wreath(spec: &WreathSpec) -> Result<WreathGroup, ConstructionError> {
    let r = spec.r;
    let h = spec.h.clone();
    let ctx = AffineHolomorph::new(2, 3 * r)?;
    let hatted = canonical_affine_generators();

    let lift = |gen: &AffineElement, i: usize| block_lift(gen.lin(), gen.trans(), i, r);
    let j_generators: Vec<AffineElement> = (0..r)
        .flat_map(|i| hatted.iter().map(move |g| lift(g, i)))
        .collect();
    let h_generators: Vec<AffineElement> = h
        .generators()
        .iter()
        .map(|pi| block_permutation(pi, r))
        .collect();
    let mut generators: Vec<AffineElement> = hatted.iter().map(|g| lift(g, 0)).collect();
    generators.extend(h_generators.iter().cloned());

    // P(pi) X P(pi)^-1 permutes the blocks: verify exactly on generators
    for pi in h.elements() {
        let p = block_permutation(pi, r);
        let p_inv = p.inverse();
        for i in 0..r {
            for gen in &hatted {
                let lhs = p.op(&lift(gen, i)).op(&p_inv);
                assert_eq!(lhs, lift(gen, pi.apply(i)), "block conjugation law");
            }
        }
    }
    // distinct blocks commute and only touch their own block
    for i in 0..r {
        let ti = close(&hatted.iter().map(|g| lift(g, i)).collect::<Vec<_>>(), 169)?;
        assert_eq!(ti.order(), 168, "block copy of the order-168 group");
        for e in ti.elements() {
            for u in 0..3 * r {
                if u < 3 * i || u >= 3 * i + 3 {
                    assert_eq!(e.trans().get(u), 0);
                    for v in 0..3 * r {
                        let want = u8::from(u == v);
                        if v < 3 * i || v >= 3 * i + 3 {
                            assert_eq!(e.lin().get(u, v), want, "block support");
                        }
                    }
                }
            }
        }
        for j in 0..i {
            for x in &hatted {
                for y in &hatted {
                    let (xi, yj) = (lift(x, i), lift(y, j));
                    assert_eq!(xi.op(&yj), yj.op(&xi), "distinct blocks commute");
                }
            }
        }
    }
    // so J is an internal direct product of r copies of order 168
    let order = 168u128.pow(r as u32) * h.order() as u128;

    let group = if r <= WREATH_MATERIALIZE_MAX_R {
        let g = close(&generators, order as usize)?;
        assert_eq!(g.order() as u128, order, "|G| = 168^r |H|");
        Some(g)
    } else {
        None
    };

    Ok(WreathGroup {
        r,
        h,
        ctx,
        generators,
        j_generators,
        h_generators,
        order,
        group,
    })
}

impl WreathGroup {
    /// Orbit of 0_V under the generators; transitivity check that works at
    /// every r.
    pub fn orbit_of_zero_size(&self) -> usize {
        let action = ActionTable::from_generators(&self.generators).expect("affine action");
        action.orbit(0).expect("point 0").len()
    }

    /// Generators of the stabilizer of 0_V: the A, B lifts in every block
    /// plus all of P(H).
    pub fn stabilizer_generators(&self) -> Vec<AffineElement> {
        let hatted = canonical_affine_generators();
        let mut gens: Vec<AffineElement> = (0..self.r)
            .flat_map(|i| {
                hatted[..2]
                    .iter()
                    .map(move |g| block_lift(g.lin(), g.trans(), i, self.r))
            })
            .collect();
        gens.extend(self.h_generators.iter().cloned());
        if gens.is_empty() {
            gens.push(AffineElement::identity(2, 3 * self.r));
        }
        gens
    }

    pub fn stabilizer_order(&self) -> u128 {
        self.order / (8u128.pow(self.r as u32))
    }

    /// J' = T'_1 x ... x T'_r, the stabilizer of 0_V inside J.
    pub fn j_prime(&self) -> FiniteGroup<AffineElement> {
        let hatted = canonical_affine_generators();
        let gens: Vec<AffineElement> = (0..self.r)
            .flat_map(|i| {
                hatted[..2]
                    .iter()
                    .map(move |g| block_lift(g.lin(), g.trans(), i, self.r))
            })
            .collect();
        let jp = close(&gens, 21usize.pow(self.r as u32)).expect("J' closure");
        assert_eq!(jp.order(), 21u64.pow(self.r as u32), "|J'| = 21^r");
        jp
    }

    /// Solubility of the stabilizer J' x| H: J' is materialized and run
    /// through the derived series; H likewise; and P(H) normalizes J' with
    /// trivial intersection, so the stabilizer is an extension of J' by H.
    pub fn stabilizer_is_soluble(&self) -> bool {
        let jp = self.j_prime();
        if !group::is_soluble(&jp) || !group::is_soluble(&self.h) {
            return false;
        }
        for p in &self.h_generators {
            let p_inv = p.inverse();
            for g in jp.generators() {
                if !jp.contains(&p.op(g).op(&p_inv)) {
                    return false;
                }
            }
        }
        for pi in self.h.elements() {
            let p = block_permutation(pi, self.r);
            if jp.contains(&p) && !pi.is_identity() {
                return false;
            }
        }
        true
    }

    /// The V_i block subspace.
    pub fn block_subspace(&self, i: usize) -> Subspace {
        let n = 3 * self.r;
        let basis: Vec<GFVector> = (0..3).map(|u| GFVector::basis(2, n, 3 * i + u)).collect();
        crate::gf::echelonize(2, n, &basis).expect("block basis")
    }

    /// Irreducibility of the linear module: the span of the orbit of every
    /// nonzero vector under the generator linear parts is the whole space.
    pub fn module_is_irreducible(&self) -> bool {
        crate::admissibility::module_is_irreducible(&self.generators, 3 * self.r)
    }

    /// The diagonal block group J = T^r, materialized (r <= 2).
    pub fn j_group(&self) -> Result<FiniteGroup<AffineElement>, ConstructionError> {
        if self.r > WREATH_MATERIALIZE_MAX_R {
            return Err(ConstructionError::MaterializationBound(self.r));
        }
        let j = close(&self.j_generators, 168usize.pow(self.r as u32))?;
        assert_eq!(j.order(), 168u64.pow(self.r as u32));
        Ok(j)
    }

    /// Admissibility picture of the first block subspace Q = V_1 at r >= 2.
    ///
    /// Relative to the transitive block group J the subspace is admissible
    /// with Q_* = T_1 x T_2' x ... x T_r' of order 168 * 21^(r-1), which is
    /// insoluble. Relative to the full wreath group G the literal filter
    /// {g : g . 0 in Q} picks up every block-permutation coset (alpha_g does
    /// not see the permutation part), yielding a strictly larger set that is
    /// not multiplicatively closed, so Q is not G-admissible; consistently,
    /// Q is J-invariant but not G-invariant.
    pub fn verify_block_admissibility(&self) -> Result<BlockAdmissibility, ConstructionError> {
        use crate::admissibility::{self, SubgroupOfN};
        assert!(
            self.r >= 2,
            "block admissibility is a statement about r >= 2"
        );
        let j = self.j_group()?;
        let g = self
            .group
            .as_ref()
            .ok_or(ConstructionError::MaterializationBound(self.r))?;
        let v1 = SubgroupOfN::from_subspace(&self.ctx, &self.block_subspace(0))
            .expect("block subspace is a subgroup");
        let j_report = admissibility::is_admissible(&j, &self.ctx, &v1)
            .expect("three-way equivalence over the transitive J");
        let j_m_star =
            admissibility::m_star_subgroup(&j, &self.ctx, &v1).expect("admissible over J");
        let (g_filter, g_closed) = admissibility::m_star(g, &self.ctx, &v1);
        let g_report = admissibility::is_admissible(g, &self.ctx, &v1)
            .expect("three-way equivalence over the transitive G");
        Ok(BlockAdmissibility {
            j_admissible: j_report.admissible,
            j_m_star_order: j_m_star.order(),
            j_m_star_soluble: group::is_soluble(j_m_star.group()),
            v1_j_invariant: j_report.invariant,
            g_filter_size: g_filter.len() as u64,
            g_filter_closed: g_closed,
            g_admissible: g_report.admissible,
            v1_g_invariant: g_report.invariant,
        })
    }

    /// Every construction-level check as a report line.
    pub fn verify_all(&self) -> Result<Vec<crate::report::Check>, ConstructionError> {
        use crate::report::Check;
        let r = self.r;
        let mut checks = vec![
            Check::new(
                "group_order",
                "|G| = 168^r |H|",
                168u128.pow(r as u32) * self.h.order() as u128,
                self.order,
            ),
            Check::new(
                "orbit_of_zero",
                "G is transitive: the orbit of 0_V has 8^r points",
                8usize.pow(r as u32),
                self.orbit_of_zero_size(),
            ),
            Check::new(
                "stabilizer_order",
                "|G_0| = |G| / 8^r = 21^r |H|",
                21u128.pow(r as u32) * self.h.order() as u128,
                self.stabilizer_order(),
            ),
            Check::bool(
                "stabilizer_soluble",
                "the stabilizer of 0_V is soluble (J' and H both are)",
                self.stabilizer_is_soluble(),
            ),
            Check::bool(
                "module_irreducible",
                "the linear module F_2^{3r} has no proper nonzero invariant subspace",
                self.module_is_irreducible(),
            ),
        ];
        if let Some(g) = &self.group {
            let action = ActionTable::from_group(g)?;
            let stab = group::stabilizer(g, &action, 0)?;
            checks.push(Check::new(
                "stabilizer_order_direct",
                "element filter agrees with orbit-stabilizer",
                self.stabilizer_order(),
                stab.order(),
            ));
            checks.push(Check::bool(
                "stabilizer_soluble_direct",
                "derived series of the filtered stabilizer reaches 1",
                group::is_soluble(stab.group()),
            ));
            checks.push(Check::new(
                "translations_trivial",
                "Tr(G) = {0}",
                0,
                holomorph::translations(g)?.dim(),
            ));
            checks.push(Check::bool(
                "insoluble",
                "G itself is insoluble",
                !group::is_soluble(g),
            ));
        }
        if r >= 2 && self.group.is_some() {
            let adm = self.verify_block_admissibility()?;
            checks.push(Check::bool(
                "v1_admissible_in_block_group",
                "Q = V_1 is admissible for the transitive block group J",
                adm.j_admissible,
            ));
            checks.push(Check::new(
                "v1_block_m_star_order",
                "|Q_*| over J = 168 * 21^(r-1)",
                168u64 * 21u64.pow(r as u32 - 1),
                adm.j_m_star_order,
            ));
            checks.push(Check::bool(
                "v1_block_m_star_insoluble",
                "Q_* over J is insoluble",
                !adm.j_m_star_soluble,
            ));
            checks.push(Check::bool(
                "v1_not_g_invariant",
                "V_1 is not invariant under the full wreath group",
                !adm.v1_g_invariant,
            ));
            checks.push(Check::new(
                "v1_full_filter_size",
                "the literal filter over G is the J-relative set times P(H)",
                168u64 * 21u64.pow(r as u32 - 1) * self.h.order(),
                adm.g_filter_size,
            ));
            checks.push(Check::bool(
                "v1_not_g_admissible",
                "the filter over G is not closed, so V_1 is not G-admissible",
                !adm.g_filter_closed && !adm.g_admissible,
            ));
        }
        Ok(checks)
    }
}

/// Both readings of the Q = V_1 admissibility statement at r >= 2.
#[derive(Clone, Debug)]
pub struct BlockAdmissibility {
    pub j_admissible: bool,
    pub j_m_star_order: u64,
    pub j_m_star_soluble: bool,
    pub v1_j_invariant: bool,
    pub g_filter_size: u64,
    pub g_filter_closed: bool,
    pub g_admissible: bool,
    pub v1_g_invariant: bool,
}

// ---------------------------------------------------------------------------
// Transitive soluble subgroups of S_r
// ---------------------------------------------------------------------------

/// All transitive soluble subgroups of S_r by full lattice enumeration,
/// deduplicated as element sets.
pub fn enumerate_transitive_soluble(
    r: usize,
) -> Result<Vec<FiniteGroup<Permutation>>, ConstructionError> {
    if !(1..=4).contains(&r) {
        return Err(ConstructionError::SpecInvalid(format!(
            "r = {r} outside 1..=4"
        )));
    }
    if r == 1 {
        return Ok(vec![close(&[Permutation::identity(1)], 1)?]);
    }
    let mut gens = vec![Permutation::from_cycles(
        r,
        &[&(0..r as u16).collect::<Vec<_>>()],
    )];
    gens.push(Permutation::from_cycles(r, &[&[0, 1]]));
    let sr = close(&gens, 25)?;
    let mut out = Vec::new();
    for sub in group::all_subgroups(&sr) {
        let action = ActionTable::from_group(sub.group())?;
        if action.orbit(0)?.len() == r && group::is_soluble(sub.group()) {
            out.push(sub.into_group());
        }
    }
    out.sort_by_key(|g| g.canonical_key());
    Ok(out)
}

/// Conventional name for a transitive subgroup of S_r at r <= 4.
pub fn transitive_subgroup_name(g: &FiniteGroup<Permutation>, r: usize) -> String {
    match (r, g.order()) {
        (1, 1) => "1".to_string(),
        (2, 2) => "C2".to_string(),
        (3, 3) => "C3".to_string(),
        (3, 6) => "S3".to_string(),
        (4, 4) => {
            if g.elements().iter().any(|e| group::element_order(e) == 4) {
                "C4".to_string()
            } else {
                "V4".to_string()
            }
        }
        (4, 8) => "D4".to_string(),
        (4, 12) => "A4".to_string(),
        (4, 24) => "S4".to_string(),
        _ => format!("order{}", g.order()),
    }
}

/// Resolve a name like "C2" or "S4" to the first matching transitive soluble
/// subgroup of S_r in canonical order.
pub fn resolve_transitive_soluble(
    r: usize,
    name: &str,
) -> Result<FiniteGroup<Permutation>, ConstructionError> {
    let wanted = match name {
        "trivial" | "triv" | "id" => "1".to_string(),
        "C2xC2" => "V4".to_string(),
        other => other.to_string(),
    };
    for g in enumerate_transitive_soluble(r)? {
        if transitive_subgroup_name(&g, r) == wanted {
            return Ok(g);
        }
    }
    Err(ConstructionError::SpecInvalid(format!(
        "H must be a transitive subgroup of S_{r}; no transitive soluble subgroup named {name:?}"
    )))
}

// ---------------------------------------------------------------------------
// The normalizer-stabilizer of J
// ---------------------------------------------------------------------------

/// Three invertible 3x3 matrices over F_2 whose sum is the zero matrix.
pub fn e_matrices() -> [GFMatrix; 3] {
    let e1 = mat3([1, 1, 0, 0, 1, 1, 1, 0, 0]);
    let e2 = mat3([0, 1, 0, 0, 0, 1, 1, 0, 1]);
    let e3 = GFMatrix::identity(2, 3);
    for e in [&e1, &e2, &e3] {
        assert_ne!(e.det().unwrap(), 0, "E-matrices are invertible");
    }
    let sum = e1.add(&e2).unwrap().add(&e3).unwrap();
    assert_eq!(sum, GFMatrix::zero(2, 3, 3), "E-matrix sum is zero");
    [e1, e2, e3]
}

/// {X in Aff(V) : X . 0 = 0 and X J X^-1 = J} for J the diagonal block group
/// in Aff(F_2^{3r}); equals J' x| S_r of order 21^r r!.
///
/// For r = 2 the candidate set is cut down first by computing the J-submodule
/// lattice of V exhaustively (it is {0, V_1, V_2, V}), which forces any
/// normalizing X fixing 0 to be linear and block-monomial.
pub fn normalizer_of_j_fixing_zero(
    r: usize,
) -> Result<FiniteGroup<AffineElement>, ConstructionError> {
    if r == 0 || r > 2 {
        return Err(ConstructionError::MaterializationBound(r));
    }
    let hatted = canonical_affine_generators();
    let lift_all: Vec<AffineElement> = (0..r)
        .flat_map(|i| {
            hatted
                .iter()
                .map(move |g| block_lift(g.lin(), g.trans(), i, r))
        })
        .collect();
    let j = close(&lift_all, 168usize.pow(r as u32))?;
    assert_eq!(j.order(), 168u64.pow(r as u32));
    let t = gl3_2();

    let candidates: Vec<AffineElement> = if r == 1 {
        // the full stabilizer of 0 in Aff(F_2^3) is GL_3(2) embedded linearly
        t.elements()
            .iter()
            .map(|m| AffineElement::linear(m.clone()).unwrap())
            .collect()
    } else {
        // the J-submodule lattice of V is exactly {0, V_1, V_2, V}
        let mats: Vec<&GFMatrix> = lift_all.iter().map(|g| g.lin()).collect();
        let v1 = block_basis_subspace(0, r);
        let v2 = block_basis_subspace(1, r);
        let mut seen_spans = HashSet::new();
        for idx in 1..(1usize << (3 * r)) {
            let v = GFVector::from_point_index(2, 3 * r, idx);
            let span = crate::admissibility::spin_span(&mats, &v, 3 * r);
            assert!(
                span.dim() == 3 * r || span == v1 || span == v2,
                "only V_1, V_2 and V occur as nonzero J-submodules"
            );
            seen_spans.insert(span.basis().to_vec());
        }
        assert!(seen_spans.contains(v1.basis()) && seen_spans.contains(v2.basis()));
        // a normalizing X fixing 0 is linear and permutes {V_1, V_2}, hence
        // block-monomial: X = diag(M_1, M_2) P(sigma)
        let mut cands = Vec::new();
        for sigma in [
            Permutation::identity(2),
            Permutation::from_cycles(2, &[&[0, 1]]),
        ] {
            let p = block_permutation(&sigma, 2);
            for m1 in t.elements() {
                for m2 in t.elements() {
                    let d1 = block_lift(m1, &GFVector::zero(2, 3), 0, 2);
                    let d2 = block_lift(m2, &GFVector::zero(2, 3), 1, 2);
                    cands.push(d1.op(&d2).op(&p));
                }
            }
        }
        cands
    };

    let normalizing: Vec<AffineElement> = candidates
        .into_iter()
        .filter(|x| {
            let xinv = x.inverse();
            x.image_of(0) == 0 && lift_all.iter().all(|g| j.contains(&x.op(g).op(&xinv)))
        })
        .collect();
    let result = FiniteGroup::from_elements(normalizing)?;

    // J' x| S_r built directly must coincide with the filter result
    let mut expect_gens: Vec<AffineElement> = (0..r)
        .flat_map(|i| {
            hatted[..2]
                .iter()
                .map(move |g| block_lift(g.lin(), g.trans(), i, r))
        })
        .collect();
    if r == 2 {
        expect_gens.push(block_permutation(
            &Permutation::from_cycles(2, &[&[0, 1]]),
            2,
        ));
    }
    let factorial: u64 = (1..=r as u64).product();
    let expect = close(&expect_gens, (21u64.pow(r as u32) * factorial) as usize)?;
    assert_eq!(
        result.order(),
        21u64.pow(r as u32) * factorial,
        "|J' x| S_r|"
    );
    assert_eq!(result.canonical_key(), expect.canonical_key());
    Ok(result)
}

fn block_basis_subspace(i: usize, r: usize) -> Subspace {
    let n = 3 * r;
    let basis: Vec<GFVector> = (0..3).map(|u| GFVector::basis(2, n, 3 * i + u)).collect();
    crate::gf::echelonize(2, n, &basis).expect("block basis")
}

// ---------------------------------------------------------------------------
// Hopf-Galois counting
// ---------------------------------------------------------------------------

/// n_subgroups * |Aut(G, G')| / |Aut(V)|; errors if the division is not
/// exact.
pub fn hopf_galois_count(
    n_subgroups: u64,
    aut_g_gprime: u64,
    aut_v: u64,
) -> Result<u64, ConstructionError> {
    let num = n_subgroups * aut_g_gprime;
    if !num.is_multiple_of(aut_v) {
        return Err(ConstructionError::NonIntegralCount(
            n_subgroups,
            aut_g_gprime,
            aut_v,
        ));
    }
    Ok(num / aut_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_relations_hold() {
        let CanonicalGenerators { a, b, c, d } = canonical_generators();
        assert_eq!(group::element_order(&a), 7);
        assert_eq!(group::element_order(&b), 3);
        assert_eq!(group::element_order(&c), 4);
        assert_eq!(group::element_order(&d), 2);
        // DB = B^2 D and DCD^-1 = C^3 spot checks
        assert_eq!(d.op(&b), b.op(&b).op(&d));
        assert_eq!(d.op(&c).op(&d.inverse()), c.op(&c).op(&c));
    }

    #[test]
    fn ab_generate_order_21() {
        let CanonicalGenerators { a, b, .. } = canonical_generators();
        assert_eq!(close(&[a, b], 200).unwrap().order(), 21);
    }

    #[test]
    fn cd_generate_order_8_acting_regularly() {
        let hatted = canonical_affine_generators();
        let p = close(&hatted[2..4], 200).unwrap();
        assert_eq!(p.order(), 8);
        let ctx = AffineHolomorph::new(2, 3).unwrap();
        assert!(holomorph::is_regular(&p, &ctx).unwrap());
    }

    #[test]
    fn canonical_group_is_transitive_of_order_168() {
        let g = canonical_group();
        assert_eq!(g.order(), 168);
        let ctx = AffineHolomorph::new(2, 3).unwrap();
        assert!(holomorph::is_transitive(&g, &ctx).unwrap());
        assert!(!holomorph::is_regular(&g, &ctx).unwrap());
    }

    #[test]
    fn psi_solution_unique_with_expected_columns() {
        let map = solve_psi();
        assert_eq!(map.len(), 168);
        let CanonicalGenerators { a, b, c, d } = canonical_generators();
        assert!(map.psi(&a).unwrap().is_zero());
        assert!(map.psi(&b).unwrap().is_zero());
        assert_eq!(map.psi(&c).unwrap().entries(), &PSI_C_COLUMN);
        assert_eq!(map.psi(&d).unwrap().entries(), &PSI_D_COLUMN);
        assert!(map.psi(&GFMatrix::identity(2, 3)).unwrap().is_zero());
    }

    #[test]
    fn hatted_c_and_d_move_zero_as_displayed() {
        let hatted = canonical_affine_generators();
        let zero = GFVector::zero(2, 3);
        assert_eq!(hatted[2].act(&zero).unwrap().entries(), &[0, 1, 1]);
        assert_eq!(hatted[3].act(&zero).unwrap().entries(), &[1, 0, 0]);
    }

    #[test]
    fn stabilizer_of_zero_has_order_21_and_is_soluble() {
        let g = canonical_group();
        let action = ActionTable::from_group(&g).unwrap();
        let stab = group::stabilizer(&g, &action, 0).unwrap();
        assert_eq!(stab.order(), 21);
        assert!(group::is_soluble(stab.group()));
        assert!(!group::is_soluble(&g));
        // the stabilizer is not normal: conjugating by C-hat moves it
        assert!(!group::is_normal(&stab, &g).unwrap());
    }

    #[test]
    fn sylow_normalizers_count() {
        let t = gl3_2();
        let norms = sylow7_normalizers(&t);
        assert_eq!(norms.len(), 8);
        assert!(norms.iter().all(|n| n.order() == 21));
    }

    #[test]
    fn eight_transitive_subgroups_match_exhaustive_scan() {
        let sylow_route = enumerate_transitive_t_subgroups();
        assert_eq!(sylow_route.len(), 8);
        let scan = exhaustive_transitive_t_scan(1);
        assert_eq!(scan.len(), 8);
        let a: Vec<_> = sylow_route.iter().map(|g| g.canonical_key()).collect();
        let b: Vec<_> = scan.iter().map(|g| g.canonical_key()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn transitive_soluble_subgroup_counts() {
        assert_eq!(enumerate_transitive_soluble(1).unwrap().len(), 1);
        assert_eq!(enumerate_transitive_soluble(2).unwrap().len(), 1);
        assert_eq!(enumerate_transitive_soluble(3).unwrap().len(), 2);
        // 3 C4 + 1 V4 + 3 D4 + 1 A4 + 1 S4
        let r4 = enumerate_transitive_soluble(4).unwrap();
        assert_eq!(r4.len(), 9);
        let mut names: Vec<String> = r4.iter().map(|g| transitive_subgroup_name(g, 4)).collect();
        names.sort();
        assert_eq!(
            names,
            vec!["A4", "C4", "C4", "C4", "D4", "D4", "D4", "S4", "V4"]
        );
    }

    #[test]
    fn resolve_h_by_name() {
        assert_eq!(resolve_transitive_soluble(2, "C2").unwrap().order(), 2);
        assert!(resolve_transitive_soluble(1, "S2").is_err());
        assert_eq!(resolve_transitive_soluble(4, "A4").unwrap().order(), 12);
    }

    #[test]
    fn wreath_r1_is_canonical() {
        let h = close(&[Permutation::identity(1)], 1).unwrap();
        let spec = WreathSpec::new(1, h).unwrap();
        let w = build_wreath(&spec).unwrap();
        assert_eq!(w.order, 168);
        let g = w.group.as_ref().unwrap();
        assert_eq!(g.canonical_key(), canonical_group().canonical_key());
        assert_eq!(w.orbit_of_zero_size(), 8);
        assert_eq!(w.stabilizer_order(), 21);
        assert!(w.stabilizer_is_soluble());
        assert!(w.module_is_irreducible());
    }

    #[test]
    fn e_matrix_identity() {
        let [e1, e2, e3] = e_matrices();
        assert!(e3.is_identity());
        assert_eq!(e1.add(&e2).unwrap(), e3); // sum zero over F_2
    }

    #[test]
    fn normalizer_r1_is_j_prime() {
        let norm = normalizer_of_j_fixing_zero(1).unwrap();
        assert_eq!(norm.order(), 21);
        let hatted = canonical_affine_generators();
        let jp = close(&hatted[..2], 25).unwrap();
        assert_eq!(norm.canonical_key(), jp.canonical_key());
    }

    #[test]
    fn hopf_count_formula() {
        assert_eq!(hopf_galois_count(8, 42, 168).unwrap(), 2);
        assert_eq!(hopf_galois_count(8, 336 / 8, 168).unwrap(), 2);
        assert_eq!(hopf_galois_count(1, 5, 5).unwrap(), 1);
        assert!(hopf_galois_count(3, 5, 7).is_err());
    }
}
