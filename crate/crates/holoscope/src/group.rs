//! Generic finite-group machinery over concrete element types: closure from
//! generators, orbits and stabilizers, solubility, normality, minimal normal
//! subgroups, socle, and automorphism groups by backtracking.
//!
//! Groups are materialized as explicit element sets with a deterministic
//! insertion order (breadth-first closure over canonically sorted
//! generators), so every enumeration in the crate is reproducible.

use crate::perm::Permutation;
use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("point {0} out of range 0..{1}")]
    PointOutOfRange(usize, usize),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("order {0} exceeds configured bound {1}")]
    BoundExceeded(u64, u64),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("orbit sizes unequal under a normal subgroup: {0:?}")]
    UnequalOrbitSizes(Vec<usize>),
    #[error("point count {0} is not a prime power")]
    NotPrimePower(usize),
    #[error("action inconsistent with group generators")]
    ActionMismatch,
    #[error("derived series did not terminate within {0} steps")]
    DerivedSeriesRunaway(usize),
}

/// An element of some fixed ambient group: total order, hash, multiply,
/// invert, identity of matching shape.
pub trait GroupElement: Clone + Eq + Ord + Hash + Debug {
    fn identity_like(&self) -> Self;
    fn op(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;
}

/// Elements that act as permutations of {0..degree-1}.
pub trait PointAction: GroupElement {
    fn degree(&self) -> usize;
    fn image_of(&self, point: usize) -> usize;
}

// ---------------------------------------------------------------------------
// FiniteGroup
// ---------------------------------------------------------------------------

/// A concrete finite group: generators plus the fully materialized element
/// set in deterministic breadth-first order (identity first).
#[derive(Clone, Debug)]
pub struct FiniteGroup<E: GroupElement> {
    generators: Vec<E>,
    elements: Vec<E>,
    index: HashMap<E, u32>,
}

/// Breadth-first closure of the generators, capped at `cap` elements.
pub fn close<E: GroupElement>(generators: &[E], cap: usize) -> Result<FiniteGroup<E>, GroupError> {
    if generators.is_empty() {
        return Err(GroupError::EmptyGenerators);
    }
    let mut gens: Vec<E> = generators.to_vec();
    gens.sort();
    gens.dedup();
    let identity = gens[0].identity_like();
    gens.retain(|g| *g != identity);

    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0u32);
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        head += 1;
        for g in &gens {
            let y = x.op(g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                index.insert(y.clone(), elements.len() as u32);
                elements.push(y);
            }
        }
    }
    Ok(FiniteGroup {
        generators: gens,
        elements,
        index,
    })
}

impl<E: GroupElement> FiniteGroup<E> {
    /// Wrap an element list already known to be closed. Verifies closure
    /// and derives a small generating set.
    pub fn from_elements(mut elements: Vec<E>) -> Result<Self, GroupError> {
        if elements.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        elements.sort();
        elements.dedup();
        match closure_of_subset(&elements) {
            Some(group) => Ok(group),
            None => Err(GroupError::NotSubgroup(format!(
                "set of {} elements is not closed",
                elements.len()
            ))),
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn identity(&self) -> E {
        self.elements[0].clone()
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.op(b) == b.op(a)))
    }

    /// Key for deduplicating subgroups found repeatedly: the sorted element
    /// list.
    pub fn canonical_key(&self) -> Vec<E> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    pub fn subgroup_from_generators(&self, gens: &[E]) -> Result<SubgroupHandle<E>, GroupError> {
        let group = close(gens, self.elements.len())?;
        SubgroupHandle::new(self, group)
    }

    pub fn subgroup_from_elements(
        &self,
        elements: Vec<E>,
    ) -> Result<SubgroupHandle<E>, GroupError> {
        let group = FiniteGroup::from_elements(elements)?;
        SubgroupHandle::new(self, group)
    }

    pub fn trivial_subgroup(&self) -> SubgroupHandle<E> {
        let group = close(&[self.identity()], 1).expect("trivial closure");
        SubgroupHandle::new(self, group).expect("trivial subgroup")
    }

    pub fn full_subgroup(&self) -> SubgroupHandle<E> {
        SubgroupHandle::new(self, self.clone()).expect("group as its own subgroup")
    }
}

/// Greedy small generating set: scan the elements in canonical order and
/// keep each one that enlarges the closure.
pub fn minimal_generators<E: GroupElement>(elements: &[E]) -> Vec<E> {
    let mut sorted = elements.to_vec();
    sorted.sort();
    let identity = sorted[0].identity_like();
    let mut gens: Vec<E> = Vec::new();
    let mut covered: HashSet<E> = HashSet::new();
    covered.insert(identity.clone());
    for e in &sorted {
        if covered.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let closed = close(&gens, elements.len()).expect("closure within element set");
        if closed.order() as usize == elements.len() {
            return gens;
        }
        covered = closed.elements.iter().cloned().collect();
    }
    if gens.is_empty() {
        gens.push(identity);
    }
    gens
}

/// Closure check in near-linear time: grow a greedy generating set with the
/// closure capped at |S|. The cap is exceeded if and only if <S> is strictly
/// larger than S; otherwise the loop ends with the closure equal to S.
fn closure_of_subset<E: GroupElement>(sorted: &[E]) -> Option<FiniteGroup<E>> {
    let identity = sorted[0].identity_like();
    let mut gens: Vec<E> = Vec::new();
    let mut covered = close(std::slice::from_ref(&identity), 1).expect("trivial closure");
    for e in sorted {
        if covered.contains(e) {
            continue;
        }
        gens.push(e.clone());
        covered = match close(&gens, sorted.len()) {
            Ok(g) => g,
            Err(GroupError::CapExceeded(_)) => return None,
            Err(e) => panic!("unexpected closure failure: {e}"),
        };
    }
    if covered.order() as usize == sorted.len() {
        Some(covered)
    } else {
        None
    }
}

/// True iff the element subset is closed under multiplication.
pub fn subset_is_closed<E: GroupElement>(elements: &[E]) -> bool {
    if elements.is_empty() {
        return false;
    }
    let mut sorted = elements.to_vec();
    sorted.sort();
    sorted.dedup();
    closure_of_subset(&sorted).is_some()
}

pub fn element_order<E: GroupElement>(e: &E) -> u64 {
    let identity = e.identity_like();
    let mut x = e.clone();
    let mut n = 1;
    while x != identity {
        x = x.op(e);
        n += 1;
        assert!(n < 1_000_000, "element order runaway");
    }
    n
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

/// A subgroup together with the order of its parent; Lagrange is checked at
/// construction.
#[derive(Clone, Debug)]
pub struct SubgroupHandle<E: GroupElement> {
    group: FiniteGroup<E>,
    parent_order: u64,
}

impl<E: GroupElement> SubgroupHandle<E> {
    pub fn new(parent: &FiniteGroup<E>, group: FiniteGroup<E>) -> Result<Self, GroupError> {
        for e in &group.elements {
            if !parent.contains(e) {
                return Err(GroupError::NotSubgroup(format!(
                    "element {e:?} not in parent"
                )));
            }
        }
        if !parent.order().is_multiple_of(group.order()) {
            return Err(GroupError::NotSubgroup(format!(
                "Lagrange violated: {} does not divide {}",
                group.order(),
                parent.order()
            )));
        }
        Ok(SubgroupHandle {
            group,
            parent_order: parent.order(),
        })
    }

    pub fn group(&self) -> &FiniteGroup<E> {
        &self.group
    }

    pub fn into_group(self) -> FiniteGroup<E> {
        self.group
    }

    pub fn parent_order(&self) -> u64 {
        self.parent_order
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn index_in_parent(&self) -> u64 {
        self.parent_order / self.group.order()
    }
}

impl<E: GroupElement> std::ops::Deref for SubgroupHandle<E> {
    type Target = FiniteGroup<E>;

    fn deref(&self) -> &FiniteGroup<E> {
        &self.group
    }
}

// ---------------------------------------------------------------------------
// Actions, orbits, stabilizers
// ---------------------------------------------------------------------------

/// Explicit action on a finite point set: one image array per generator.
#[derive(Clone, Debug)]
pub struct ActionTable {
    points: usize,
    gen_images: Vec<Vec<u32>>,
}

impl ActionTable {
    pub fn from_generators<E: PointAction>(gens: &[E]) -> Result<Self, GroupError> {
        let points = gens
            .first()
            .map(|g| g.degree())
            .ok_or(GroupError::EmptyGenerators)?;
        Self::from_generators_on(gens, points)
    }

    fn from_generators_on<E: PointAction>(gens: &[E], points: usize) -> Result<Self, GroupError> {
        let mut gen_images = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != points {
                return Err(GroupError::ActionMismatch);
            }
            let images: Vec<u32> = (0..points).map(|x| g.image_of(x) as u32).collect();
            let mut seen = vec![false; points];
            for &y in &images {
                if seen[y as usize] {
                    return Err(GroupError::ActionMismatch);
                }
                seen[y as usize] = true;
            }
            gen_images.push(images);
        }
        // homomorphism spot check on generator pairs
        for (g, gi) in gens.iter().zip(&gen_images) {
            for (h, hi) in gens.iter().zip(&gen_images) {
                let prod = g.op(h);
                for x in [0, points / 2, points - 1] {
                    let via_prod = prod.image_of(x);
                    let via_images = gi[hi[x] as usize] as usize;
                    if via_prod != via_images {
                        return Err(GroupError::ActionMismatch);
                    }
                }
            }
        }
        Ok(ActionTable { points, gen_images })
    }

    pub fn from_group<E: PointAction>(group: &FiniteGroup<E>) -> Result<Self, GroupError> {
        Self::from_generators_on(group.generators(), group.identity().degree())
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Orbit of `point` under generator-BFS; returned sorted, so the result
    /// is independent of generator order.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, GroupError> {
        if point >= self.points {
            return Err(GroupError::PointOutOfRange(point, self.points));
        }
        let mut seen = vec![false; self.points];
        seen[point] = true;
        let mut queue = vec![point];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for imgs in &self.gen_images {
                let y = imgs[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Ok(queue)
    }

    /// Orbit partition of all points, each orbit sorted, ordered by minimum.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for p in 0..self.points {
            if !seen[p] {
                let orb = self.orbit(p).expect("in-range point");
                for &x in &orb {
                    seen[x] = true;
                }
                out.push(orb);
            }
        }
        out
    }
}

/// Orbit of a point under a materialized group, checked against the action
/// table built from the same generators.
pub fn orbit<E: PointAction>(
    group: &FiniteGroup<E>,
    action: &ActionTable,
    point: usize,
) -> Result<Vec<usize>, GroupError> {
    if action.gen_images.len() != group.generators.len() {
        return Err(GroupError::ActionMismatch);
    }
    action.orbit(point)
}

/// Stabilizer of a point, by direct element filter; verifies orbit-stabilizer.
pub fn stabilizer<E: PointAction>(
    group: &FiniteGroup<E>,
    action: &ActionTable,
    point: usize,
) -> Result<SubgroupHandle<E>, GroupError> {
    if point >= action.points() {
        return Err(GroupError::PointOutOfRange(point, action.points()));
    }
    let fixing: Vec<E> = group
        .elements
        .iter()
        .filter(|e| e.image_of(point) == point)
        .cloned()
        .collect();
    let stab = group.subgroup_from_elements(fixing)?;
    let orb = orbit(group, action, point)?;
    assert_eq!(
        orb.len() as u64 * stab.order(),
        group.order(),
        "orbit-stabilizer violated"
    );
    Ok(stab)
}

// ---------------------------------------------------------------------------
// Conjugacy, normal closures, derived series
// ---------------------------------------------------------------------------

/// Conjugacy classes as sorted element-index lists, by conjugation-orbit BFS
/// under the generators.
pub fn conjugacy_classes<E: GroupElement>(group: &FiniteGroup<E>) -> Vec<Vec<usize>> {
    let n = group.elements.len();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut class = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < class.len() {
            let x = group.elements[class[head]].clone();
            head += 1;
            for g in &group.generators {
                let y = g.op(&x).op(&g.inverse());
                let yi = group.index_of(&y).expect("conjugate stays in group");
                if !seen[yi] {
                    seen[yi] = true;
                    class.push(yi);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Smallest normal subgroup of `group` containing `seeds`: conjugation-orbit
/// BFS of the seeds, then subgroup closure of a greedy generating subset of
/// the conjugates (closing over the full conjugate list would multiply the
/// work by its size).
pub fn normal_closure<E: GroupElement>(
    group: &FiniteGroup<E>,
    seeds: &[E],
) -> Result<SubgroupHandle<E>, GroupError> {
    let mut conj: Vec<E> = Vec::new();
    let mut seen: HashSet<E> = HashSet::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            conj.push(s.clone());
        }
    }
    let mut head = 0;
    while head < conj.len() {
        let x = conj[head].clone();
        head += 1;
        for g in &group.generators {
            let y = g.op(&x).op(&g.inverse());
            if seen.insert(y.clone()) {
                conj.push(y);
            }
        }
    }
    if conj.is_empty() {
        return Ok(group.trivial_subgroup());
    }
    let cap = group.elements.len();
    let mut gens: Vec<E> = Vec::new();
    let mut covered = close(&[conj[0].identity_like()], 1)?;
    for c in &conj {
        if !covered.contains(c) {
            gens.push(c.clone());
            covered = close(&gens, cap)?;
        }
    }
    SubgroupHandle::new(group, covered)
}

/// Derived subgroup: normal closure of the generator commutators.
pub fn derived_subgroup<E: GroupElement>(
    group: &FiniteGroup<E>,
) -> Result<SubgroupHandle<E>, GroupError> {
    let mut seeds = Vec::new();
    for a in &group.generators {
        for b in &group.generators {
            let comm = a.inverse().op(&b.inverse()).op(a).op(b);
            seeds.push(comm);
        }
    }
    if seeds.is_empty() {
        return Ok(group.trivial_subgroup());
    }
    normal_closure(group, &seeds)
}

const DERIVED_SERIES_CAP: usize = 20;

/// Orders along the derived series, stopping at {1} or at stabilization.
pub fn derived_series_orders<E: GroupElement>(group: &FiniteGroup<E>) -> Vec<u64> {
    let mut orders = vec![group.order()];
    let mut cur = group.clone();
    for _ in 0..DERIVED_SERIES_CAP {
        let next = derived_subgroup(&cur)
            .expect("derived subgroup closure")
            .into_group();
        let o = next.order();
        if o == *orders.last().unwrap() || o == 1 {
            orders.push(o);
            return orders;
        }
        orders.push(o);
        cur = next;
    }
    panic!("derived series did not terminate in {DERIVED_SERIES_CAP} steps");
}

/// True iff the derived series reaches the trivial group.
pub fn is_soluble<E: GroupElement>(group: &FiniteGroup<E>) -> bool {
    *derived_series_orders(group).last().unwrap() == 1
}

/// True iff every generator of `group` conjugates `h` into itself.
pub fn is_normal<E: GroupElement>(
    h: &SubgroupHandle<E>,
    group: &FiniteGroup<E>,
) -> Result<bool, GroupError> {
    for e in h.group().elements() {
        if !group.contains(e) {
            return Err(GroupError::NotSubgroup("h not inside g".into()));
        }
    }
    for g in &group.generators {
        let ginv = g.inverse();
        for x in h.group().elements() {
            if !h.group().contains(&g.op(x).op(&ginv)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Minimal normal subgroups, socle, normal subgroups
// ---------------------------------------------------------------------------

pub const MINIMAL_NORMAL_ORDER_BOUND: u64 = 100_000;

/// All minimal normal subgroups: normal closures of one representative per
/// nontrivial conjugacy class, deduplicated, filtered to inclusion-minimal.
pub fn minimal_normal_subgroups<E: GroupElement>(
    group: &FiniteGroup<E>,
    bound: u64,
) -> Result<Vec<SubgroupHandle<E>>, GroupError> {
    if group.order() > bound {
        return Err(GroupError::BoundExceeded(group.order(), bound));
    }
    if group.order() == 1 {
        return Ok(Vec::new());
    }
    let mut closures: Vec<SubgroupHandle<E>> = Vec::new();
    let mut seen: HashSet<Vec<E>> = HashSet::new();
    for class in conjugacy_classes(group) {
        let rep = group.elements[class[0]].clone();
        if rep == group.identity() {
            continue;
        }
        let ncl = normal_closure(group, &[rep])?;
        if seen.insert(ncl.group().canonical_key()) {
            closures.push(ncl);
        }
    }
    closures.sort_by_key(|s| (s.order(), s.group().canonical_key()));
    let mut minimal: Vec<SubgroupHandle<E>> = Vec::new();
    'outer: for cand in closures {
        for m in &minimal {
            if m.order() < cand.order()
                && m.group()
                    .elements()
                    .iter()
                    .all(|e| cand.group().contains(e))
            {
                continue 'outer;
            }
        }
        // keep only if no strictly smaller nontrivial normal subgroup within
        minimal.retain(|m| {
            !(cand.order() < m.order()
                && cand
                    .group()
                    .elements()
                    .iter()
                    .all(|e| m.group().contains(e)))
        });
        minimal.push(cand);
    }
    Ok(minimal)
}

/// Join (closure of the union) of all minimal normal subgroups.
pub fn socle<E: GroupElement>(
    group: &FiniteGroup<E>,
    bound: u64,
) -> Result<SubgroupHandle<E>, GroupError> {
    let minimals = minimal_normal_subgroups(group, bound)?;
    if minimals.is_empty() {
        return Ok(group.trivial_subgroup());
    }
    let mut gens: Vec<E> = Vec::new();
    for m in &minimals {
        gens.extend_from_slice(m.group().generators());
    }
    group.subgroup_from_generators(&gens)
}

/// Every normal subgroup, as joins of conjugacy-class normal closures.
pub fn normal_subgroups<E: GroupElement>(
    group: &FiniteGroup<E>,
    bound: u64,
) -> Result<Vec<SubgroupHandle<E>>, GroupError> {
    if group.order() > bound {
        return Err(GroupError::BoundExceeded(group.order(), bound));
    }
    let mut class_closures: Vec<SubgroupHandle<E>> = Vec::new();
    let mut seen_cl: HashSet<Vec<E>> = HashSet::new();
    for class in conjugacy_classes(group) {
        let rep = group.elements[class[0]].clone();
        if rep == group.identity() {
            continue;
        }
        let ncl = normal_closure(group, &[rep])?;
        if seen_cl.insert(ncl.group().canonical_key()) {
            class_closures.push(ncl);
        }
    }
    let trivial = group.trivial_subgroup();
    let mut known: HashMap<Vec<E>, SubgroupHandle<E>> = HashMap::new();
    known.insert(trivial.group().canonical_key(), trivial);
    let mut frontier: Vec<Vec<E>> = known.keys().cloned().collect();
    while let Some(key) = frontier.pop() {
        let base_gens: Vec<E> = known[&key].group().generators().to_vec();
        for c in &class_closures {
            let mut gens = base_gens.clone();
            gens.extend_from_slice(c.group().generators());
            let join = group.subgroup_from_generators(&gens)?;
            let jkey = join.group().canonical_key();
            if let std::collections::hash_map::Entry::Vacant(slot) = known.entry(jkey.clone()) {
                slot.insert(join);
                frontier.push(jkey);
            }
        }
    }
    let mut out: Vec<SubgroupHandle<E>> = known.into_values().collect();
    out.sort_by_key(|s| (s.order(), s.group().canonical_key()));
    for n in &out {
        debug_assert!(is_normal(n, group).unwrap());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Orbit profile under a normal subgroup
// ---------------------------------------------------------------------------

fn prime_power(n: usize) -> Option<(u8, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2usize;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = n;
            let mut r = 0;
            while m.is_multiple_of(p) {
                m /= p;
                r += 1;
            }
            return if m == 1 { Some((p as u8, r)) } else { None };
        }
        p += 1;
    }
    Some((n as u8, 1))
}

/// For `g` transitive on p^r points and nontrivial normal `j`: verifies all
/// j-orbits share one cardinality p^t and counts p^s of them, s + t = r.
pub fn orbit_cardinality_profile<E: PointAction>(
    group: &FiniteGroup<E>,
    j: &SubgroupHandle<E>,
    action: &ActionTable,
) -> Result<(u32, u32), GroupError> {
    if !is_normal(j, group)? {
        return Err(GroupError::NotNormal);
    }
    let points = action.points();
    let (p, r) = prime_power(points).ok_or(GroupError::NotPrimePower(points))?;
    let g_orbit = orbit(group, action, 0)?;
    assert_eq!(g_orbit.len(), points, "group must be transitive");
    let j_action = ActionTable::from_generators(j.group().generators())?;
    let orbits = j_action.orbits();
    let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    let first = sizes[0];
    if sizes.iter().any(|&s| s != first) {
        return Err(GroupError::UnequalOrbitSizes(sizes));
    }
    let (pt, t) = prime_power(first).unwrap_or((p, 0));
    if first != 1 && pt != p {
        return Err(GroupError::UnequalOrbitSizes(sizes));
    }
    let t = if first == 1 { 0 } else { t };
    let count = orbits.len();
    let (ps, s) = prime_power(count).unwrap_or((p, 0));
    if count != 1 && ps != p {
        return Err(GroupError::NotPrimePower(count));
    }
    let s = if count == 1 { 0 } else { s };
    assert_eq!(s + t, r, "orbit profile must satisfy s + t = r");
    Ok((s, t))
}

// ---------------------------------------------------------------------------
// Multiplication tables and automorphism groups
// ---------------------------------------------------------------------------

/// Dense multiplication table for small groups; the substrate for the
/// automorphism backtracking.
pub struct MultTable {
    pub n: usize,
    prod: Vec<u32>,
    pub inv: Vec<u32>,
    pub orders: Vec<u32>,
}

impl MultTable {
    pub fn from_group<E: GroupElement>(group: &FiniteGroup<E>) -> Self {
        let n = group.elements.len();
        let mut prod = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = group.elements[i].op(&group.elements[j]);
                prod[i * n + j] = group.index_of(&p).expect("closed") as u32;
            }
        }
        let mut inv = vec![0u32; n];
        let mut orders = vec![0u32; n];
        for i in 0..n {
            inv[i] = group.index_of(&group.elements[i].inverse()).unwrap() as u32;
            orders[i] = element_order(&group.elements[i]) as u32;
        }
        MultTable {
            n,
            prod,
            inv,
            orders,
        }
    }

    /// Build from a raw multiplication table with the identity at index 0;
    /// verifies the group axioms in full.
    pub fn from_raw(n: usize, prod: Vec<u32>) -> Result<Self, GroupError> {
        if n == 0 || prod.len() != n * n {
            return Err(GroupError::NotSubgroup("bad table shape".into()));
        }
        let bad = |msg: &str| GroupError::NotSubgroup(msg.into());
        for j in 0..n {
            if prod[j] != j as u32 || prod[j * n] != j as u32 {
                return Err(bad("index 0 is not an identity"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if prod[a * n + b] as usize >= n {
                    return Err(bad("table entry out of range"));
                }
                for c in 0..n {
                    let ab_c = prod[prod[a * n + b] as usize * n + c];
                    let a_bc = prod[a * n + prod[b * n + c] as usize];
                    if ab_c != a_bc {
                        return Err(bad("table is not associative"));
                    }
                }
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if prod[a * n + b] == 0 {
                    inv[a] = b as u32;
                }
            }
            if inv[a] == u32::MAX {
                return Err(bad("missing inverse"));
            }
        }
        let mut orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a;
            let mut o = 1;
            while x != 0 {
                x = prod[x * n + a] as usize;
                o += 1;
            }
            orders[a] = o;
        }
        Ok(MultTable {
            n,
            prod,
            inv,
            orders,
        })
    }

    /// All automorphisms of the table, as permutations of its indices.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        let gens = self.greedy_generators();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                (0..self.n)
                    .filter(|&i| self.orders[i] == self.orders[g])
                    .collect()
            })
            .collect();
        let mut found = Vec::new();
        let mut images = vec![0usize; gens.len()];
        backtrack_autos(self, &gens, &candidates, 0, &mut images, &mut found);
        for perm in &found {
            let map: Vec<u32> = perm.images().iter().map(|&x| x as u32).collect();
            assert!(
                self.is_homomorphism(&map, self.n <= 200),
                "automorphism candidate failed verification"
            );
        }
        found.sort();
        found
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.prod[a * self.n + b] as usize
    }

    pub fn identity_index(&self) -> usize {
        (0..self.n)
            .find(|&i| self.orders[i] == 1)
            .expect("identity present")
    }

    /// Greedy generating indices in canonical element order (assumes the
    /// backing group's elements; order-only determinism is what matters).
    pub fn greedy_generators(&self) -> Vec<usize> {
        let e = self.identity_index();
        let mut covered = vec![false; self.n];
        covered[e] = true;
        let mut covered_count = 1;
        let mut gens = Vec::new();
        for i in 0..self.n {
            if covered[i] {
                continue;
            }
            gens.push(i);
            // closure of current gens
            let mut seen = vec![false; self.n];
            seen[e] = true;
            let mut queue = vec![e];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !seen[y] {
                        seen[y] = true;
                        queue.push(y);
                    }
                }
            }
            covered = seen;
            covered_count = queue.len();
            if covered_count == self.n {
                break;
            }
        }
        assert_eq!(covered_count, self.n, "generators must cover the group");
        gens
    }

    /// Extend a generator-image assignment over the subgroup the generators
    /// reach, by replaying the multiplication BFS; None on any inconsistency
    /// or non-injectivity. With `require_full` the map must cover the group.
    fn extend_map(&self, gens: &[usize], images: &[usize], require_full: bool) -> Option<Vec<u32>> {
        let e = self.identity_index();
        let mut map = vec![u32::MAX; self.n];
        let mut used = vec![false; self.n];
        map[e] = e as u32;
        used[e] = true;
        let mut queue = vec![e];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let xi = map[x] as usize;
            for (&g, &gi) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let yi = self.mul(xi, gi);
                if map[y] == u32::MAX {
                    if used[yi] {
                        return None;
                    }
                    map[y] = yi as u32;
                    used[yi] = true;
                    queue.push(y);
                } else if map[y] != yi as u32 {
                    return None;
                }
            }
        }
        if require_full && queue.len() != self.n {
            return None;
        }
        Some(map)
    }

    fn is_homomorphism(&self, map: &[u32], full: bool) -> bool {
        let step = if full { 1 } else { 7 };
        let mut a = 0;
        while a < self.n {
            let mut b = 0;
            while b < self.n {
                let lhs = map[self.mul(a, b)] as usize;
                let rhs = self.mul(map[a] as usize, map[b] as usize);
                if lhs != rhs {
                    return false;
                }
                b += step;
            }
            a += step;
        }
        true
    }
}

pub const AUTOMORPHISM_ORDER_BOUND: u64 = 500;

/// All automorphisms of `group`, as permutations of its element indices.
/// Backtracking over generator images matched by element order, pruned by
/// multiplication-table replay; the result is sorted canonically.
pub fn automorphism_group<E: GroupElement>(
    group: &FiniteGroup<E>,
    bound: u64,
) -> Result<FiniteGroup<Permutation>, GroupError> {
    if group.order() > bound {
        return Err(GroupError::BoundExceeded(group.order(), bound));
    }
    let table = MultTable::from_group(group);
    FiniteGroup::from_elements(table.automorphisms())
}

fn backtrack_autos(
    table: &MultTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    k: usize,
    images: &mut Vec<usize>,
    found: &mut Vec<Permutation>,
) {
    if k == gens.len() {
        if let Some(map) = table.extend_map(gens, images, true) {
            let perm =
                Permutation::new(map.iter().map(|&x| x as u16).collect()).expect("bijective map");
            found.push(perm);
        }
        return;
    }
    for &cand in &candidates[k] {
        images[k] = cand;
        // prune: the prefix of assignments must already replay consistently
        if table
            .extend_map(&gens[..=k], &images[..=k], false)
            .is_some()
        {
            backtrack_autos(table, gens, candidates, k + 1, images, found);
        }
    }
}

/// Automorphisms (from `auts`, as produced by [`automorphism_group`]) that
/// fix the element-index set of `subgroup` setwise.
pub fn automorphisms_stabilizing<E: GroupElement>(
    group: &FiniteGroup<E>,
    auts: &FiniteGroup<Permutation>,
    subgroup: &SubgroupHandle<E>,
) -> Result<SubgroupHandle<Permutation>, GroupError> {
    let sub_indices: HashSet<usize> = subgroup
        .group()
        .elements()
        .iter()
        .map(|e| group.index_of(e).expect("subgroup inside group"))
        .collect();
    let fixing: Vec<Permutation> = auts
        .elements()
        .iter()
        .filter(|a| {
            sub_indices
                .iter()
                .all(|&i| sub_indices.contains(&a.apply(i)))
        })
        .cloned()
        .collect();
    auts.subgroup_from_elements(fixing)
}

/// Isomorphism test by the same generator-image backtracking.
pub fn are_isomorphic<A: GroupElement, B: GroupElement>(
    a: &FiniteGroup<A>,
    b: &FiniteGroup<B>,
) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let ta = MultTable::from_group(a);
    let tb = MultTable::from_group(b);
    let mut ord_a = ta.orders.clone();
    let mut ord_b = tb.orders.clone();
    ord_a.sort_unstable();
    ord_b.sort_unstable();
    if ord_a != ord_b {
        return false;
    }
    let gens = ta.greedy_generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..tb.n)
                .filter(|&i| tb.orders[i] == ta.orders[g])
                .collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    iso_backtrack(&ta, &tb, &gens, &candidates, 0, &mut images)
}

fn iso_backtrack(
    ta: &MultTable,
    tb: &MultTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    k: usize,
    images: &mut Vec<usize>,
) -> bool {
    if k == gens.len() {
        return extend_map_cross(ta, tb, gens, images, true).is_some();
    }
    for &cand in &candidates[k] {
        images[k] = cand;
        if extend_map_cross(ta, tb, &gens[..=k], &images[..=k], false).is_some()
            && iso_backtrack(ta, tb, gens, candidates, k + 1, images)
        {
            return true;
        }
    }
    false
}

fn extend_map_cross(
    ta: &MultTable,
    tb: &MultTable,
    gens: &[usize],
    images: &[usize],
    require_full: bool,
) -> Option<Vec<u32>> {
    let ea = ta.identity_index();
    let eb = tb.identity_index();
    let mut map = vec![u32::MAX; ta.n];
    let mut used = vec![false; tb.n];
    map[ea] = eb as u32;
    used[eb] = true;
    let mut queue = vec![ea];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let xi = map[x] as usize;
        for (&g, &gi) in gens.iter().zip(images) {
            let y = ta.mul(x, g);
            let yi = tb.mul(xi, gi);
            if map[y] == u32::MAX {
                if used[yi] {
                    return None;
                }
                map[y] = yi as u32;
                used[yi] = true;
                queue.push(y);
            } else if map[y] != yi as u32 {
                return None;
            }
        }
    }
    if require_full && queue.len() != ta.n {
        return None;
    }
    Some(map)
}

// ---------------------------------------------------------------------------
// Subgroup lattice (small groups only)
// ---------------------------------------------------------------------------

/// Every subgroup, by closure-extension BFS. Exponential in general; meant
/// for groups of order <= ~200.
pub fn all_subgroups<E: GroupElement>(group: &FiniteGroup<E>) -> Vec<SubgroupHandle<E>> {
    let trivial = group.trivial_subgroup();
    let mut known: HashMap<Vec<E>, SubgroupHandle<E>> = HashMap::new();
    let mut frontier = vec![trivial.group().canonical_key()];
    known.insert(trivial.group().canonical_key(), trivial);
    while let Some(key) = frontier.pop() {
        let cur = known[&key].clone();
        for e in group.elements() {
            if cur.group().contains(e) {
                continue;
            }
            let mut gens = cur.group().generators().to_vec();
            gens.push(e.clone());
            let bigger = group
                .subgroup_from_generators(&gens)
                .expect("subgroup closure stays inside the group");
            let bkey = bigger.group().canonical_key();
            if let std::collections::hash_map::Entry::Vacant(slot) = known.entry(bkey.clone()) {
                slot.insert(bigger);
                frontier.push(bkey);
            }
        }
    }
    let mut out: Vec<SubgroupHandle<E>> = known.into_values().collect();
    out.sort_by_key(|s| (s.order(), s.group().canonical_key()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn s4() -> FiniteGroup<Permutation> {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 1]]);
        close(&[a, b], 30).unwrap()
    }

    #[test]
    fn closure_of_identity() {
        let id = Permutation::identity(3);
        let g = close(&[id], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn s4_has_order_24() {
        assert_eq!(s4().order(), 24);
    }

    #[test]
    fn closure_cap_exceeded() {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 1]]);
        assert!(matches!(
            close(&[a, b], 10),
            Err(GroupError::CapExceeded(10))
        ));
    }

    #[test]
    fn closure_deterministic_under_generator_order() {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 1]]);
        let g1 = close(&[a.clone(), b.clone()], 30).unwrap();
        let g2 = close(&[b, a], 30).unwrap();
        assert_eq!(g1.elements(), g2.elements());
    }

    #[test]
    fn s4_is_soluble_with_expected_series() {
        // oracle: the derived series orders 24 > 12 > 4 > 1
        let orders = derived_series_orders(&s4());
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert!(is_soluble(&s4()));
    }

    #[test]
    fn orbits_and_stabilizers_in_s4() {
        let g = s4();
        let action = ActionTable::from_group(&g).unwrap();
        let orb = orbit(&g, &action, 0).unwrap();
        assert_eq!(orb, vec![0, 1, 2, 3]);
        let stab = stabilizer(&g, &action, 0).unwrap();
        assert_eq!(stab.order(), 6);
        assert!(matches!(
            orbit(&g, &action, 9),
            Err(GroupError::PointOutOfRange(9, 4))
        ));
    }

    #[test]
    fn trivial_subgroup_is_normal() {
        let g = s4();
        let t = g.trivial_subgroup();
        assert!(is_normal(&t, &g).unwrap());
        assert_eq!(t.index_in_parent(), 24);
    }

    #[test]
    fn a4_is_normal_point_stabilizer_is_not() {
        let g = s4();
        let a4 = derived_subgroup(&g).unwrap();
        assert_eq!(a4.order(), 12);
        assert!(is_normal(&a4, &g).unwrap());
        let action = ActionTable::from_group(&g).unwrap();
        let stab = stabilizer(&g, &action, 0).unwrap();
        assert!(!is_normal(&stab, &g).unwrap());
    }

    #[test]
    fn minimal_normals_of_s4() {
        let g = s4();
        let mins = minimal_normal_subgroups(&g, 1000).unwrap();
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 4); // the Klein four-group
        let soc = socle(&g, 1000).unwrap();
        assert_eq!(soc.order(), 4);
    }

    #[test]
    fn minimal_normals_of_elementary_abelian() {
        // F_2^2 as an abstract group: three subgroups of order 2
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]);
        let v4 = close(&[a, b], 10).unwrap();
        assert_eq!(v4.order(), 4);
        let mins = minimal_normal_subgroups(&v4, 100).unwrap();
        assert_eq!(mins.len(), 3);
        assert!(mins.iter().all(|m| m.order() == 2));
        assert_eq!(socle(&v4, 100).unwrap().order(), 4);
    }

    #[test]
    fn normal_subgroup_lattice_of_s4() {
        let g = s4();
        let normals = normal_subgroups(&g, 1000).unwrap();
        let orders: Vec<u64> = normals.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }

    #[test]
    fn aut_of_klein_four_is_s3() {
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]);
        let v4 = close(&[a, b], 10).unwrap();
        let auts = automorphism_group(&v4, 500).unwrap();
        assert_eq!(auts.order(), 6);
    }

    #[test]
    fn aut_of_cyclic_groups() {
        for (n, phi) in [(3usize, 2u64), (4, 2), (5, 4), (6, 2), (7, 6), (8, 4)] {
            let cycle: Vec<u16> = (0..n as u16).collect();
            let c = Permutation::from_cycles(n, &[&cycle]);
            let g = close(&[c], n + 1).unwrap();
            let auts = automorphism_group(&g, 500).unwrap();
            assert_eq!(auts.order(), phi, "Aut(C_{n})");
        }
    }

    #[test]
    fn aut_bound_is_enforced() {
        let g = s4();
        assert!(matches!(
            automorphism_group(&g, 10),
            Err(GroupError::BoundExceeded(24, 10))
        ));
    }

    #[test]
    fn subgroup_lattice_of_s4_has_30_subgroups() {
        let subs = all_subgroups(&s4());
        assert_eq!(subs.len(), 30);
        // Lagrange on every handle
        for s in &subs {
            assert_eq!(24 % s.order(), 0);
        }
    }

    #[test]
    fn orbit_profile_trivial_cases() {
        let g = s4();
        let a4 = derived_subgroup(&g).unwrap();
        let action = ActionTable::from_group(&g).unwrap();
        // A4 is transitive on the 4 points: one orbit of size 4 = 2^2
        let (s, t) = orbit_cardinality_profile(&g, &a4, &action).unwrap();
        assert_eq!((s, t), (0, 2));
        let klein = socle(&g, 100).unwrap();
        let (s, t) = orbit_cardinality_profile(&g, &klein, &action).unwrap();
        assert_eq!((s, t), (0, 2));
    }

    #[test]
    fn isomorphism_check_distinguishes_c4_and_klein() {
        let c4 = close(&[Permutation::from_cycles(4, &[&[0, 1, 2, 3]])], 5).unwrap();
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]);
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]);
        let v4 = close(&[a, b], 5).unwrap();
        assert!(!are_isomorphic(&c4, &v4));
        assert!(are_isomorphic(&c4, &c4));
    }

    #[test]
    fn element_orders() {
        let c = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert_eq!(element_order(&c), 6);
        assert_eq!(element_order(&Permutation::identity(4)), 1);
    }
}
