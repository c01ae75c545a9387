//! Holomorphs and affine groups.
//!
//! For N elementary abelian, Hol(N) is the affine group Aff(F_p^n) and
//! elements are [`AffineElement`]s. For other small N (order <= 16), Hol(N)
//! is built as a permutation group on the points of N from an explicit
//! multiplication table and a computed Aut(N).
//!
//! In every context the points of N are indexed so that the identity of N is
//! point 0, and the holomorph acts by (alpha, theta) . x = alpha * theta(x).

use crate::affine::AffineElement;
use crate::gf::{self, GFMatrix, GFVector, GfError, Subspace};
use crate::group::{
    self, close, ActionTable, FiniteGroup, GroupElement, GroupError, MultTable, PointAction,
};
use crate::perm::Permutation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HolError {
    #[error("point bound exceeded: {0} points > {1}")]
    PointBoundExceeded(usize, usize),
    #[error("ambient order {0} exceeds search bound {1}")]
    SearchBoundExceeded(u128, u128),
    #[error("subgroup is not regular on the points of N")]
    NotRegular,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("bad group table: {0}")]
    BadTable(String),
}

/// Default ceiling on the point count of N for holomorph construction.
pub const DEFAULT_POINT_BOUND: usize = 4096;
/// Default ceiling on |Hol(N)| for exhaustive regular-subgroup search.
pub const DEFAULT_SEARCH_BOUND: u128 = 10_000;

/// Shared view of a holomorph: the point set of N with its group law, plus
/// the element type the ambient group lives in.
pub trait HolContext {
    type Elem: PointAction;

    fn points(&self) -> usize;
    /// The base group operation of N on point indices; 0 is the identity.
    fn law(&self, a: usize, b: usize) -> usize;
    fn inv_point(&self, a: usize) -> usize;
    fn describe(&self) -> String;

    /// alpha_g = g . e.
    fn alpha(&self, g: &Self::Elem) -> usize {
        g.image_of(0)
    }

    /// theta_g(x) = alpha_g^{-1} * (g . x), the automorphism part of g.
    fn theta(&self, g: &Self::Elem, x: usize) -> usize {
        self.law(self.inv_point(self.alpha(g)), g.image_of(x))
    }
}

// ---------------------------------------------------------------------------
// Elementary abelian N: the affine group
// ---------------------------------------------------------------------------

/// Hol(F_p^n) = Aff(V), given by generators; materialized only on demand.
pub struct AffineHolomorph {
    p: u8,
    n: usize,
    gens: Vec<AffineElement>,
    /// None when p^n |GL_n(p)| overflows u128 (possible at n = 12)
    ambient_order: Option<u128>,
}

impl AffineHolomorph {
    pub fn new(p: u8, n: usize) -> Result<Self, HolError> {
        Self::with_point_bound(p, n, DEFAULT_POINT_BOUND)
    }

    pub fn with_point_bound(p: u8, n: usize, point_bound: usize) -> Result<Self, HolError> {
        let points = (p as usize).checked_pow(n as u32).unwrap_or(usize::MAX);
        if points > point_bound {
            return Err(HolError::PointBoundExceeded(points, point_bound));
        }
        let mut gens: Vec<AffineElement> = (0..n)
            .map(|i| AffineElement::translation(GFVector::basis(p, n, i)))
            .collect();
        for m in gl_generators(p, n) {
            gens.push(AffineElement::linear(m)?);
        }
        // |Aff(V)| = p^n |GL_n(p)|
        let pn = (p as u128).pow(n as u32);
        let mut order: Option<u128> = Some(pn);
        for i in 0..n {
            order = order.and_then(|o| o.checked_mul(pn - (p as u128).pow(i as u32)));
        }
        Ok(AffineHolomorph {
            p,
            n,
            gens,
            ambient_order: order,
        })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// None when the order formula overflows u128.
    pub fn ambient_order(&self) -> Option<u128> {
        self.ambient_order
    }

    pub fn ambient_generators(&self) -> &[AffineElement] {
        &self.gens
    }

    /// Materialize the full affine group; checks the order formula.
    pub fn materialize(&self, cap: usize) -> Result<FiniteGroup<AffineElement>, HolError> {
        let order = self
            .ambient_order
            .ok_or(HolError::SearchBoundExceeded(u128::MAX, cap as u128))?;
        if order > cap as u128 {
            return Err(HolError::SearchBoundExceeded(order, cap as u128));
        }
        let g = close(&self.gens, order as usize)?;
        assert_eq!(g.order() as u128, order, "|Aff| formula");
        Ok(g)
    }

    pub fn vector_of_point(&self, idx: usize) -> GFVector {
        GFVector::from_point_index(self.p, self.n, idx)
    }
}

impl HolContext for AffineHolomorph {
    type Elem = AffineElement;

    fn points(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    fn law(&self, a: usize, b: usize) -> usize {
        let va = self.vector_of_point(a);
        let vb = self.vector_of_point(b);
        va.add(&vb).expect("same dims").point_index()
    }

    fn inv_point(&self, a: usize) -> usize {
        self.vector_of_point(a).neg().point_index()
    }

    fn describe(&self) -> String {
        format!("F_{}^{}", self.p, self.n)
    }
}

/// Generators of GL_n(p): the elementary transvections, plus one diagonal
/// scaling by a primitive root when p > 2.
fn gl_generators(p: u8, n: usize) -> Vec<GFMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = GFMatrix::identity(p, n);
                m.set(i, j, 1);
                gens.push(m);
            }
        }
    }
    if p > 2 {
        let root = primitive_root(p);
        let mut m = GFMatrix::identity(p, n);
        m.set(0, 0, root);
        gens.push(m);
    }
    gens
}

fn primitive_root(p: u8) -> u8 {
    'outer: for g in 2..p {
        let mut x = 1u64;
        for _ in 0..(p - 2) {
            x = x * g as u64 % p as u64;
            if x == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    1
}

// ---------------------------------------------------------------------------
// General small N: explicit tables
// ---------------------------------------------------------------------------

/// A small group given by its full multiplication table; identity at index 0.
#[derive(Clone)]
pub struct SmallGroup {
    pub name: String,
    n: usize,
    prod: Vec<u32>,
    inv: Vec<u32>,
}

impl SmallGroup {
    pub fn from_table(name: &str, n: usize, prod: Vec<u32>) -> Result<Self, HolError> {
        let checked = MultTable::from_raw(n, prod.clone())
            .map_err(|e| HolError::BadTable(format!("{name}: {e}")))?;
        Ok(SmallGroup {
            name: name.to_string(),
            n,
            prod,
            inv: checked.inv,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.prod[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn cyclic(n: usize) -> Self {
        let mut prod = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                prod[a * n + b] = ((a + b) % n) as u32;
            }
        }
        SmallGroup::from_table(&format!("C{n}"), n, prod).expect("cyclic table")
    }

    pub fn direct_product(a: &SmallGroup, b: &SmallGroup, name: &str) -> Self {
        let n = a.n * b.n;
        let mut prod = vec![0u32; n * n];
        let enc = |x: usize, y: usize| x * b.n + y;
        for x1 in 0..a.n {
            for y1 in 0..b.n {
                for x2 in 0..a.n {
                    for y2 in 0..b.n {
                        prod[enc(x1, y1) * n + enc(x2, y2)] =
                            enc(a.mul(x1, x2), b.mul(y1, y2)) as u32;
                    }
                }
            }
        }
        SmallGroup::from_table(name, n, prod).expect("product table")
    }

    /// Dihedral group of order 2n: indices 0..n are rotations r^i, n..2n are
    /// reflections s r^i.
    pub fn dihedral(n: usize) -> Self {
        let m = 2 * n;
        let mut prod = vec![0u32; m * m];
        let rot = |i: usize| i % n;
        for i in 0..n {
            for j in 0..n {
                prod[i * m + j] = rot(i + j) as u32; // r^i r^j
                prod[i * m + (n + j)] = (n + rot(n + j - i)) as u32; // r^i (s r^j) = s r^{j-i}
                prod[(n + i) * m + j] = (n + rot(i + j)) as u32; // (s r^i) r^j = s r^{i+j}
                prod[(n + i) * m + (n + j)] = rot(n + j - i) as u32; // (s r^i)(s r^j) = r^{j-i}
            }
        }
        let name = if n == 3 {
            "S3".to_string()
        } else {
            format!("D{n}")
        };
        SmallGroup::from_table(&name, m, prod).expect("dihedral table")
    }

    /// The quaternion group {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion8() -> Self {
        // index = axis * 2 + sign, axis in {0:1, 1:i, 2:j, 3:k}
        let mul = |a: usize, b: usize| -> usize {
            let (ax, sa) = (a / 2, a % 2);
            let (bx, sb) = (b / 2, b % 2);
            let (cx, extra) = match (ax, bx) {
                (0, x) | (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1), // i i = j j = k k = -1
                (1, 2) => (3, 0),           // i j = k
                (2, 1) => (3, 1),           // j i = -k
                (2, 3) => (1, 0),           // j k = i
                (3, 2) => (1, 1),           // k j = -i
                (3, 1) => (2, 0),           // k i = j
                (1, 3) => (2, 1),           // i k = -j
                _ => unreachable!(),
            };
            cx * 2 + (sa + sb + extra) % 2
        };
        let mut prod = vec![0u32; 64];
        for a in 0..8 {
            for b in 0..8 {
                prod[a * 8 + b] = mul(a, b) as u32;
            }
        }
        SmallGroup::from_table("Q8", 8, prod).expect("quaternion table")
    }

    pub fn elementary_abelian_2(k: usize) -> Self {
        let n = 1 << k;
        let mut prod = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                prod[a * n + b] = (a ^ b) as u32;
            }
        }
        SmallGroup::from_table(&format!("C2^{k}"), n, prod).expect("elementary abelian table")
    }

    /// Aut(N) as permutations of the points of N, by table backtracking.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        MultTable::from_raw(self.n, self.prod.clone())
            .expect("validated at build")
            .automorphisms()
    }

    /// Left translation x -> a * x as a point permutation.
    pub fn translation(&self, a: usize) -> Permutation {
        Permutation::new((0..self.n).map(|x| self.mul(a, x) as u16).collect())
            .expect("translations are bijective")
    }
}

/// Every group of order <= 8, from hard-coded constructions; orders are
/// asserted at startup.
pub fn small_groups_up_to_8() -> Vec<SmallGroup> {
    let c2 = SmallGroup::cyclic(2);
    let c4 = SmallGroup::cyclic(4);
    let groups = vec![
        SmallGroup::cyclic(1),
        c2.clone(),
        SmallGroup::cyclic(3),
        c4.clone(),
        SmallGroup::direct_product(&c2, &c2, "C2xC2"),
        SmallGroup::cyclic(5),
        SmallGroup::cyclic(6),
        SmallGroup::dihedral(3),
        SmallGroup::cyclic(7),
        SmallGroup::cyclic(8),
        SmallGroup::direct_product(&c4, &c2, "C4xC2"),
        SmallGroup::elementary_abelian_2(3),
        SmallGroup::dihedral(4),
        SmallGroup::quaternion8(),
    ];
    let expected = [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8];
    for (g, &n) in groups.iter().zip(&expected) {
        assert_eq!(g.order(), n, "catalog order of {}", g.name);
    }
    groups
}

/// Hol(N) for a table-defined N, as a permutation group on the points of N.
pub struct TableHolomorph {
    pub base: SmallGroup,
    aut_order: u64,
    ambient: FiniteGroup<Permutation>,
}

impl TableHolomorph {
    pub fn new(base: SmallGroup) -> Result<Self, HolError> {
        let n = base.order();
        let auts = base.automorphisms();
        let aut_order = auts.len() as u64;
        let ambient = if n == 1 {
            close(&[Permutation::identity(1)], 1)?
        } else {
            let mut gens: Vec<Permutation> = (0..n).map(|a| base.translation(a)).collect();
            gens.extend(auts);
            close(&gens, n * aut_order as usize)?
        };
        assert_eq!(
            ambient.order(),
            n as u64 * aut_order,
            "|Hol(N)| = |N| |Aut(N)| for {}",
            base.name
        );
        Ok(TableHolomorph {
            base,
            aut_order,
            ambient,
        })
    }

    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    pub fn ambient(&self) -> &FiniteGroup<Permutation> {
        &self.ambient
    }
}

impl HolContext for TableHolomorph {
    type Elem = Permutation;

    fn points(&self) -> usize {
        self.base.order()
    }

    fn law(&self, a: usize, b: usize) -> usize {
        self.base.mul(a, b)
    }

    fn inv_point(&self, a: usize) -> usize {
        self.base.inv(a)
    }

    fn describe(&self) -> String {
        self.base.name.clone()
    }
}

// ---------------------------------------------------------------------------
// Transitivity, regularity, translations
// ---------------------------------------------------------------------------

pub fn is_transitive<C: HolContext>(g: &FiniteGroup<C::Elem>, ctx: &C) -> Result<bool, HolError> {
    let action = ActionTable::from_group(g)?;
    Ok(action.orbit(0)?.len() == ctx.points())
}

pub fn is_regular<C: HolContext>(g: &FiniteGroup<C::Elem>, ctx: &C) -> Result<bool, HolError> {
    Ok(g.order() as usize == ctx.points() && is_transitive(g, ctx)?)
}

/// The subspace U = {u : (u, I) in g}; asserts that U is invariant under the
/// linear part of every generator.
pub fn translations(g: &FiniteGroup<AffineElement>) -> Result<Subspace, HolError> {
    let first = g.identity();
    let (p, n) = (first.p(), first.dim());
    let vectors: Vec<GFVector> = g
        .elements()
        .iter()
        .filter(|e| e.is_translation())
        .map(|e| e.trans().clone())
        .collect();
    let u = gf::echelonize(p, n, &vectors)?;
    for gen in g.generators() {
        for b in u.basis() {
            let image = gen.lin().mul_vec(b)?;
            assert!(
                u.contains(&image),
                "translation subspace must be invariant under the group"
            );
        }
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// Regular subgroup enumeration
// ---------------------------------------------------------------------------

/// Elements whose cyclic group acts freely away from 0 and has order
/// dividing |N|; every element of a regular subgroup is of this kind.
fn free_elements<E: PointAction>(ambient: &FiniteGroup<E>, n_points: usize) -> Vec<E> {
    let identity = ambient.identity();
    let mut out = Vec::new();
    'el: for e in ambient.elements() {
        if *e == identity {
            continue;
        }
        let mut x = e.clone();
        let mut order = 1u64;
        while x != identity {
            if x.image_of(0) == 0 {
                continue 'el;
            }
            x = x.op(e);
            order += 1;
        }
        if (n_points as u64).is_multiple_of(order) {
            out.push(e.clone());
        }
    }
    out.sort();
    out
}

fn acts_freely<E: PointAction>(g: &FiniteGroup<E>) -> bool {
    let identity = g.identity();
    g.elements()
        .iter()
        .all(|e| *e == identity || e.image_of(0) != 0)
}

/// All regular subgroups of the ambient group on the points of N, by
/// closure-extension backtracking with order-cap, Lagrange, orbit and
/// free-action pruning; results deduplicated as element sets and sorted.
///
/// Complete for arbitrary subgroups: any chain S < R extends inside R by any
/// element of R \ S, and all such elements survive the pruning.
pub fn enumerate_regular_subgroups<C: HolContext>(
    ctx: &C,
    ambient: &FiniteGroup<C::Elem>,
    search_bound: u128,
) -> Result<Vec<FiniteGroup<C::Elem>>, HolError> {
    if ambient.order() as u128 > search_bound {
        return Err(HolError::SearchBoundExceeded(
            ambient.order() as u128,
            search_bound,
        ));
    }
    let n_points = ctx.points();
    if n_points == 1 {
        return Ok(vec![close(&[ambient.identity()], 1)?]);
    }
    let free = free_elements(ambient, n_points);
    let trivial = close(&[ambient.identity()], 1)?;
    let mut seen = std::collections::HashSet::new();
    seen.insert(trivial.canonical_key());
    let mut worklist = vec![trivial];
    let mut found: Vec<FiniteGroup<C::Elem>> = Vec::new();
    while let Some(s) = worklist.pop() {
        if s.order() as usize == n_points {
            found.push(s);
            continue;
        }
        let orbit0: std::collections::HashSet<usize> =
            s.elements().iter().map(|e| e.image_of(0)).collect();
        for g in &free {
            if s.contains(g) || orbit0.contains(&g.image_of(0)) {
                continue;
            }
            let mut gens = s.generators().to_vec();
            gens.push(g.clone());
            let bigger = match close(&gens, n_points) {
                Ok(b) => b,
                Err(GroupError::CapExceeded(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            if !n_points.is_multiple_of(bigger.order() as usize) || !acts_freely(&bigger) {
                continue;
            }
            if seen.insert(bigger.canonical_key()) {
                worklist.push(bigger);
            }
        }
    }
    found.sort_by_key(|g| g.canonical_key());
    Ok(found)
}

/// Fast path for point counts 2^k: candidate regular subgroups are 2-groups,
/// so every one is reached by a chain of index-2 normal extensions
/// S' = S + gS with g normalizing S and g^2 in S.
///
/// Subgroups are carried as sorted index vectors into the ambient element
/// list; at |Hol(C_2^4)| = 322560 the element sets themselves would
/// dominate memory.
pub fn enumerate_regular_subgroups_two_power<E>(
    ambient: &FiniteGroup<E>,
    n_points: usize,
    jobs: usize,
) -> Result<Vec<FiniteGroup<E>>, HolError>
where
    E: PointAction + Send + Sync,
{
    assert!(n_points.is_power_of_two() && n_points > 1);
    let identity_idx = ambient.index_of(&ambient.identity()).expect("identity") as u32;
    let mul = |a: u32, b: u32| -> u32 {
        let p = ambient.element(a as usize).op(ambient.element(b as usize));
        ambient.index_of(&p).expect("closed ambient") as u32
    };
    let inv: Vec<u32> = ambient
        .elements()
        .iter()
        .map(|e| ambient.index_of(&e.inverse()).expect("closed ambient") as u32)
        .collect();
    let alpha: Vec<u32> = ambient
        .elements()
        .iter()
        .map(|e| e.image_of(0) as u32)
        .collect();

    let free_list = free_elements(ambient, n_points);
    let mut is_free = vec![false; ambient.elements().len()];
    let mut free: Vec<u32> = Vec::with_capacity(free_list.len());
    for e in &free_list {
        let i = ambient.index_of(e).expect("free element in ambient") as u32;
        is_free[i as usize] = true;
        free.push(i);
    }
    free.sort_unstable();

    // seed wave: cyclic subgroups of 2-power order acting freely
    let mut seen = std::collections::HashSet::new();
    let mut wave: Vec<Vec<u32>> = Vec::new();
    let mut found: Vec<Vec<u32>> = Vec::new();
    for &g in &free {
        let mut cyc = vec![identity_idx];
        let mut x = g;
        while x != identity_idx {
            cyc.push(x);
            x = mul(x, g);
        }
        cyc.sort_unstable();
        if seen.insert(cyc.clone()) {
            if cyc.len() == n_points {
                found.push(cyc);
            } else {
                wave.push(cyc);
            }
        }
    }
    wave.sort();

    while !wave.is_empty() {
        let extend_one = |s: &Vec<u32>| -> Vec<Vec<u32>> {
            let mut orbit0: Vec<u32> = s.iter().map(|&x| alpha[x as usize]).collect();
            orbit0.sort_unstable();
            let mut out = Vec::new();
            'g: for &g in &free {
                if s.binary_search(&g).is_ok() || orbit0.binary_search(&alpha[g as usize]).is_ok() {
                    continue;
                }
                if s.binary_search(&mul(g, g)).is_err() {
                    continue;
                }
                let ginv = inv[g as usize];
                for &x in s.iter() {
                    if s.binary_search(&mul(mul(g, x), ginv)).is_err() {
                        continue 'g;
                    }
                }
                // S' = S + gS, closed since g normalizes S and g^2 in S;
                // every new element must itself act freely
                let mut coset = Vec::with_capacity(s.len());
                for &x in s.iter() {
                    let gx = mul(g, x);
                    if !is_free[gx as usize] {
                        continue 'g;
                    }
                    coset.push(gx);
                }
                let mut bigger = s.clone();
                bigger.extend_from_slice(&coset);
                bigger.sort_unstable();
                out.push(bigger);
            }
            out
        };
        let produced: Vec<Vec<u32>> = run_chunked(&wave, jobs, extend_one);
        wave = Vec::new();
        for s in produced {
            if seen.insert(s.clone()) {
                if s.len() == n_points {
                    found.push(s);
                } else {
                    wave.push(s);
                }
            }
        }
        wave.sort();
    }
    let mut groups = found
        .into_iter()
        .map(|idxs| {
            let els: Vec<E> = idxs
                .into_iter()
                .map(|i| ambient.element(i as usize).clone())
                .collect();
            FiniteGroup::from_elements(els).map_err(HolError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    groups.sort_by_key(|g| g.canonical_key());
    Ok(groups)
}

/// Apply `f` to every item, optionally fanning out over `jobs` threads;
/// results are concatenated in input order, so the output is deterministic.
pub fn run_chunked<T, U, F>(items: &[T], jobs: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 || items.len() < 2 {
        return items.iter().flat_map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    let mut results: Vec<Vec<U>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for part in items.chunks(chunk) {
            let fref = &f;
            handles.push(scope.spawn(move || part.iter().flat_map(fref).collect::<Vec<U>>()));
        }
        for h in handles {
            results.push(h.join().expect("worker panicked"));
        }
    });
    results.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// Skew braces
// ---------------------------------------------------------------------------

/// The two Cayley tables of the skew brace induced by a regular subgroup:
/// addition is the base law of N, and a o b = g_a . b where g_a is the
/// unique element with g_a . 0 = a.
pub struct SkewBrace {
    pub add: Vec<Vec<u16>>,
    pub circ: Vec<Vec<u16>>,
    /// isomorphism type of (B, o)
    pub mult_type: String,
}

pub fn skew_brace_from_regular<C: HolContext>(
    g: &FiniteGroup<C::Elem>,
    ctx: &C,
) -> Result<SkewBrace, HolError> {
    if !is_regular(g, ctx)? {
        return Err(HolError::NotRegular);
    }
    let n = ctx.points();
    let mut rep: Vec<Option<&C::Elem>> = vec![None; n];
    for e in g.elements() {
        let a = e.image_of(0);
        assert!(rep[a].is_none(), "regularity gives unique representatives");
        rep[a] = Some(e);
    }
    let add: Vec<Vec<u16>> = (0..n)
        .map(|a| (0..n).map(|b| ctx.law(a, b) as u16).collect())
        .collect();
    let circ: Vec<Vec<u16>> = (0..n)
        .map(|a| {
            let ga = rep[a].expect("transitive");
            (0..n).map(|b| ga.image_of(b) as u16).collect()
        })
        .collect();

    check_group_table(&add).map_err(HolError::BadTable)?;
    check_group_table(&circ).map_err(HolError::BadTable)?;
    // skew brace compatibility: a o (b + c) = (a o b) - a + (a o c)
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = circ[a][add[b][c] as usize];
                let rhs =
                    add[add[circ[a][b] as usize][ctx.inv_point(a)] as usize][circ[a][c] as usize];
                assert_eq!(lhs, rhs, "skew brace compatibility at ({a},{b},{c})");
            }
        }
    }
    // a -> g_a is an isomorphism onto (B, o)
    for a in 0..n {
        for b in 0..n {
            let prod = rep[a].unwrap().op(rep[b].unwrap());
            assert_eq!(
                prod.image_of(0),
                circ[a][b] as usize,
                "g_a g_b must equal g_(a o b)"
            );
        }
    }
    let circ_group = group_from_table(&circ)?;
    assert!(
        group::are_isomorphic(&circ_group, g),
        "(B, o) isomorphic to the regular subgroup"
    );
    let mult_type = group_type_name(&circ_group);
    Ok(SkewBrace {
        add,
        circ,
        mult_type,
    })
}

fn check_group_table(t: &[Vec<u16>]) -> Result<(), String> {
    let n = t.len();
    let prod: Vec<u32> = t.iter().flat_map(|r| r.iter().map(|&x| x as u32)).collect();
    MultTable::from_raw(n, prod)
        .map(|_| ())
        .map_err(|e| e.to_string())
}

/// Left regular representation of a Cayley table.
pub fn group_from_table(t: &[Vec<u16>]) -> Result<FiniteGroup<Permutation>, HolError> {
    let perms: Vec<Permutation> = t
        .iter()
        .map(|row| Permutation::new(row.clone()).expect("rows of a group table are bijections"))
        .collect();
    Ok(FiniteGroup::from_elements(perms)?)
}

// ---------------------------------------------------------------------------
// The conjecture scan
// ---------------------------------------------------------------------------

/// One regular subgroup in a scan report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RegularSubgroupReport {
    pub order: u64,
    pub soluble: bool,
    pub generators: Vec<String>,
    pub brace_mult_type: String,
}

/// Scan result for one base group N.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScanEntry {
    pub base: String,
    pub base_order: usize,
    pub hol_order: u64,
    pub regular_subgroups: Vec<RegularSubgroupReport>,
    pub all_soluble: bool,
}

fn scan_one<C: HolContext>(
    ctx: &C,
    ambient: &FiniteGroup<C::Elem>,
    base_name: &str,
    to_line: impl Fn(&C::Elem) -> String,
) -> Result<ScanEntry, HolError> {
    let regs = enumerate_regular_subgroups(ctx, ambient, DEFAULT_SEARCH_BOUND)?;
    let mut reports = Vec::new();
    let mut all_soluble = true;
    for g in &regs {
        let soluble = group::is_soluble(g);
        all_soluble &= soluble;
        let brace = skew_brace_from_regular(g, ctx)?;
        reports.push(RegularSubgroupReport {
            order: g.order(),
            soluble,
            generators: g.generators().iter().map(&to_line).collect(),
            brace_mult_type: brace.mult_type,
        });
    }
    Ok(ScanEntry {
        base: base_name.to_string(),
        base_order: ctx.points(),
        hol_order: ambient.order(),
        regular_subgroups: reports,
        all_soluble,
    })
}

/// For every catalogued group N of order <= max_order (and, in extended
/// mode, the elementary abelian group of order 16), enumerate the regular
/// subgroups of Hol(N), test each for solubility, and build its skew brace.
pub fn conjecture_scan(
    max_order: usize,
    extended: bool,
    jobs: usize,
) -> Result<Vec<ScanEntry>, HolError> {
    let mut entries = Vec::new();
    for base in small_groups_up_to_8() {
        if base.order() > max_order {
            continue;
        }
        let name = base.name.clone();
        let hol = TableHolomorph::new(base)?;
        entries.push(scan_one(&hol, hol.ambient(), &name, |p: &Permutation| {
            p.images()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })?);
    }
    if extended && max_order >= 16 {
        let ctx = AffineHolomorph::new(2, 4)?;
        let ambient = ctx.materialize(400_000)?;
        let regs = enumerate_regular_subgroups_two_power(&ambient, 16, jobs)?;
        let mut reports = Vec::new();
        let mut all_soluble = true;
        for g in &regs {
            let soluble = group::is_soluble(g);
            all_soluble &= soluble;
            let brace = skew_brace_from_regular(g, &ctx)?;
            reports.push(RegularSubgroupReport {
                order: g.order(),
                soluble,
                generators: g
                    .generators()
                    .iter()
                    .map(crate::affine::write_affine_line)
                    .collect(),
                brace_mult_type: brace.mult_type,
            });
        }
        entries.push(ScanEntry {
            base: "C2^4".to_string(),
            base_order: 16,
            hol_order: ambient.order(),
            regular_subgroups: reports,
            all_soluble,
        });
    }
    Ok(entries)
}

/// Name the isomorphism type of a small group against the order <= 8
/// catalog; beyond the catalog, fall back to a structural fingerprint.
pub fn group_type_name<E: GroupElement>(g: &FiniteGroup<E>) -> String {
    if g.order() <= 8 {
        for cand in small_groups_up_to_8() {
            if cand.order() as u64 != g.order() {
                continue;
            }
            let perms: Vec<Permutation> = (0..cand.order()).map(|a| cand.translation(a)).collect();
            let cg = FiniteGroup::from_elements(perms).expect("catalog tables are groups");
            if group::are_isomorphic(g, &cg) {
                return cand.name.clone();
            }
        }
    }
    let mut orders: Vec<u64> = g.elements().iter().map(group::element_order).collect();
    orders.sort_unstable();
    format!(
        "order{}_{}_orders{:?}",
        g.order(),
        if g.is_abelian() {
            "abelian"
        } else {
            "nonabelian"
        },
        orders
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_holomorph_orders() {
        // oracle: closure of the generators
        assert_eq!(AffineHolomorph::new(2, 1).unwrap().ambient_order(), Some(2));
        let h22 = AffineHolomorph::new(2, 2).unwrap();
        assert_eq!(h22.ambient_order(), Some(24));
        assert_eq!(h22.materialize(100).unwrap().order(), 24);
        let h23 = AffineHolomorph::new(2, 3).unwrap();
        assert_eq!(h23.ambient_order(), Some(1344));
        assert_eq!(h23.materialize(2000).unwrap().order(), 1344);
    }

    #[test]
    fn point_bound_enforced() {
        assert!(matches!(
            AffineHolomorph::new(2, 13),
            Err(HolError::PointBoundExceeded(8192, 4096))
        ));
    }

    #[test]
    fn full_affine_group_is_transitive_not_regular() {
        let ctx = AffineHolomorph::new(2, 3).unwrap();
        let amb = ctx.materialize(2000).unwrap();
        assert!(is_transitive(&amb, &ctx).unwrap());
        assert!(!is_regular(&amb, &ctx).unwrap());
        let trs: Vec<AffineElement> = (0..3)
            .map(|i| AffineElement::translation(GFVector::basis(2, 3, i)))
            .collect();
        let t = close(&trs, 10).unwrap();
        assert!(is_regular(&t, &ctx).unwrap());
        assert_eq!(translations(&t).unwrap().dim(), 3);
        assert_eq!(translations(&amb).unwrap().dim(), 3);
    }

    #[test]
    fn translations_of_single_shift() {
        let e1 = AffineElement::translation(GFVector::basis(2, 3, 0));
        let g = close(&[e1], 4).unwrap();
        let u = translations(&g).unwrap();
        assert_eq!(u.dim(), 1);
        assert!(u.contains(&GFVector::basis(2, 3, 0)));
    }

    #[test]
    fn small_group_catalog_is_sane() {
        let groups = small_groups_up_to_8();
        assert_eq!(groups.len(), 14);
        assert_eq!(groups.iter().filter(|g| g.order() == 8).count(), 5);
    }

    #[test]
    fn aut_orders_of_catalog() {
        let expect = [
            ("C1", 1),
            ("C2", 1),
            ("C3", 2),
            ("C4", 2),
            ("C2xC2", 6),
            ("C5", 4),
            ("C6", 2),
            ("S3", 6),
            ("C7", 6),
            ("C8", 4),
            ("C4xC2", 8),
            ("C2^3", 168),
            ("D4", 8),
            ("Q8", 24),
        ];
        for g in small_groups_up_to_8() {
            let want = expect.iter().find(|(n, _)| *n == g.name).unwrap().1;
            assert_eq!(g.automorphisms().len(), want, "Aut({})", g.name);
        }
    }

    #[test]
    fn hol_orders_match_for_table_contexts() {
        for g in small_groups_up_to_8() {
            let n = g.order() as u64;
            let hol = TableHolomorph::new(g).unwrap();
            assert_eq!(hol.ambient().order(), n * hol.aut_order());
        }
    }

    #[test]
    fn hol_c2_has_one_regular_subgroup() {
        let hol = TableHolomorph::new(SmallGroup::cyclic(2)).unwrap();
        let regs = enumerate_regular_subgroups(&hol, hol.ambient(), 100).unwrap();
        assert_eq!(regs.len(), 1);
        assert_eq!(regs[0].order(), 2);
    }

    #[test]
    fn regular_search_bound_is_enforced() {
        let ctx = AffineHolomorph::new(2, 3).unwrap();
        let amb = ctx.materialize(2000).unwrap();
        assert!(matches!(
            enumerate_regular_subgroups(&ctx, &amb, 100),
            Err(HolError::SearchBoundExceeded(1344, 100))
        ));
    }

    #[test]
    fn hol_f22_has_four_regular_subgroups() {
        let ctx = AffineHolomorph::new(2, 2).unwrap();
        let amb = ctx.materialize(100).unwrap();
        let regs = enumerate_regular_subgroups(&ctx, &amb, 100).unwrap();
        assert_eq!(regs.len(), 4);
        let cyclic_count = regs
            .iter()
            .filter(|g| g.elements().iter().any(|e| group::element_order(e) == 4))
            .count();
        assert_eq!(cyclic_count, 3, "three cyclic C4 and one Klein");
        // the 2-power fast path agrees
        let fast = enumerate_regular_subgroups_two_power(&amb, 4, 1).unwrap();
        let keys: Vec<_> = regs.iter().map(|g| g.canonical_key()).collect();
        let fast_keys: Vec<_> = fast.iter().map(|g| g.canonical_key()).collect();
        assert_eq!(keys, fast_keys);
    }

    #[test]
    fn brace_from_translations_is_trivial() {
        let ctx = AffineHolomorph::new(2, 2).unwrap();
        let trs: Vec<AffineElement> = (0..2)
            .map(|i| AffineElement::translation(GFVector::basis(2, 2, i)))
            .collect();
        let t = close(&trs, 5).unwrap();
        let brace = skew_brace_from_regular(&t, &ctx).unwrap();
        assert_eq!(brace.add, brace.circ);
        assert_eq!(brace.mult_type, "C2xC2");
    }

    #[test]
    fn brace_from_cyclic_regular_c4() {
        let ctx = AffineHolomorph::new(2, 2).unwrap();
        let amb = ctx.materialize(100).unwrap();
        let regs = enumerate_regular_subgroups(&ctx, &amb, 100).unwrap();
        let c4 = regs
            .iter()
            .find(|g| g.elements().iter().any(|e| group::element_order(e) == 4))
            .unwrap();
        let brace = skew_brace_from_regular(c4, &ctx).unwrap();
        // additive Klein group, multiplicative C4
        assert_eq!(brace.mult_type, "C4");
        assert_ne!(brace.add, brace.circ);
    }

    #[test]
    fn non_regular_input_rejected() {
        let ctx = AffineHolomorph::new(2, 2).unwrap();
        let amb = ctx.materialize(100).unwrap();
        assert!(matches!(
            skew_brace_from_regular(&amb, &ctx),
            Err(HolError::NotRegular)
        ));
    }

    #[test]
    fn theta_matches_linear_part() {
        let ctx = AffineHolomorph::new(2, 3).unwrap();
        let amb = ctx.materialize(2000).unwrap();
        for e in amb.elements().iter().step_by(97) {
            for x in 0..8 {
                let via_ctx = ctx.theta(e, x);
                let vx = ctx.vector_of_point(x);
                let via_lin = e.lin().mul_vec(&vx).unwrap().point_index();
                assert_eq!(via_ctx, via_lin);
            }
        }
    }
}
