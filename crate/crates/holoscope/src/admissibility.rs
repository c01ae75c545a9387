//! Admissible and invariant subgroups of N under a transitive subgroup G of
//! Hol(N), the quotient reduction to Hol(N/M), counterexample-minimality
//! classification, and module irreducibility.
//!
//! For a subgroup M of N, M_* = {g in G : g . e in M}. M is admissible when
//! M_* is a subgroup of G, and invariant when every automorphism part of G
//! maps M into itself. Invariant implies admissible; the converse fails.

use crate::affine::AffineElement;
use crate::gf::{GFMatrix, GFVector, Subspace};
use crate::group::{
    self, close, FiniteGroup, GroupElement, GroupError, PointAction, SubgroupHandle,
};
use crate::holomorph::{self, group_from_table, HolContext, HolError, SmallGroup, TableHolomorph};
use crate::perm::Permutation;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdmisError {
    #[error("point set is not a subgroup of N: {0}")]
    NotSubgroupOfN(String),
    #[error("G must act transitively on N for the equivalence to apply")]
    NotTransitive,
    #[error("the three admissibility conditions disagree: closed={closed} action={action} theta={theta}")]
    EquivalenceViolated {
        closed: bool,
        action: bool,
        theta: bool,
    },
    #[error("M is not G-invariant")]
    NotInvariant,
    #[error("M is not normal in N")]
    NotNormalInN,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hol(#[from] HolError),
}

// ---------------------------------------------------------------------------
// Subgroups of N as point sets
// ---------------------------------------------------------------------------

/// A subgroup of N held as a sorted list of point indices; always contains
/// the identity point 0 and is closed under the base law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupOfN {
    points: Vec<usize>,
}

impl SubgroupOfN {
    pub fn new<C: HolContext>(ctx: &C, mut points: Vec<usize>) -> Result<Self, AdmisError> {
        points.sort_unstable();
        points.dedup();
        if points.first() != Some(&0) {
            return Err(AdmisError::NotSubgroupOfN(
                "must contain the identity point 0".into(),
            ));
        }
        let set: HashSet<usize> = points.iter().copied().collect();
        for &a in &points {
            if !set.contains(&ctx.inv_point(a)) {
                return Err(AdmisError::NotSubgroupOfN(format!(
                    "missing inverse of {a}"
                )));
            }
            for &b in &points {
                if !set.contains(&ctx.law(a, b)) {
                    return Err(AdmisError::NotSubgroupOfN(format!("not closed: {a} * {b}")));
                }
            }
        }
        Ok(SubgroupOfN { points })
    }

    pub fn trivial() -> Self {
        SubgroupOfN { points: vec![0] }
    }

    pub fn full<C: HolContext>(ctx: &C) -> Self {
        SubgroupOfN {
            points: (0..ctx.points()).collect(),
        }
    }

    pub fn from_subspace<C: HolContext>(ctx: &C, s: &Subspace) -> Result<Self, AdmisError> {
        SubgroupOfN::new(ctx, s.point_indices())
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Never empty: a subgroup always contains the identity point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// Normality of M inside N itself (automatic for abelian N).
    pub fn is_normal_in_n<C: HolContext>(&self, ctx: &C) -> bool {
        (0..ctx.points()).all(|n| {
            let ninv = ctx.inv_point(n);
            self.points
                .iter()
                .all(|&m| self.contains(ctx.law(ctx.law(n, m), ninv)))
        })
    }
}

// ---------------------------------------------------------------------------
// M_* and the admissibility equivalence
// ---------------------------------------------------------------------------

/// The subset M_* = {g in G : g . 0 in M} and whether it is closed under
/// multiplication.
pub fn m_star<'g, C: HolContext>(
    g: &'g FiniteGroup<C::Elem>,
    _ctx: &C,
    m: &SubgroupOfN,
) -> (Vec<&'g C::Elem>, bool) {
    let subset: Vec<&C::Elem> = g
        .elements()
        .iter()
        .filter(|e| m.contains(e.image_of(0)))
        .collect();
    let closed = subset.len() == g.elements().len()
        || group::subset_is_closed(&subset.iter().map(|e| (*e).clone()).collect::<Vec<_>>());
    (subset, closed)
}

/// M_* as a materialized subgroup of G; only valid when M is admissible.
pub fn m_star_subgroup<C: HolContext>(
    g: &FiniteGroup<C::Elem>,
    ctx: &C,
    m: &SubgroupOfN,
) -> Result<SubgroupHandle<C::Elem>, AdmisError> {
    let (subset, closed) = m_star(g, ctx, m);
    if !closed {
        return Err(AdmisError::NotSubgroupOfN("M_* is not closed".into()));
    }
    Ok(g.subgroup_from_elements(subset.into_iter().cloned().collect())?)
}

/// True iff the automorphism part of every generator of G maps M into M.
pub fn is_invariant<C: HolContext>(g: &FiniteGroup<C::Elem>, ctx: &C, m: &SubgroupOfN) -> bool {
    g.generators()
        .iter()
        .all(|gen| m.points().iter().all(|&x| m.contains(ctx.theta(gen, x))))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    /// echelonized basis rows when N is a vector space
    pub m_basis: Option<Vec<Vec<u8>>>,
    pub m_order: usize,
    pub admissible: bool,
    pub invariant: bool,
    pub m_star_order: u64,
    pub m_star_soluble: Option<bool>,
}

/// Evaluate the three equivalent admissibility conditions independently and
/// check that they agree:
/// (i) M_* is closed, (ii) g . m stays in M for g in M_*, m in M,
/// (iii) theta_g(m) stays in M for g in M_*, m in M.
pub fn is_admissible<C: HolContext>(
    g: &FiniteGroup<C::Elem>,
    ctx: &C,
    m: &SubgroupOfN,
) -> Result<AdmissibilityReport, AdmisError> {
    if !holomorph::is_transitive(g, ctx)? {
        return Err(AdmisError::NotTransitive);
    }
    let (subset, closed) = m_star(g, ctx, m);
    let action = subset
        .iter()
        .all(|e| m.points().iter().all(|&x| m.contains(e.image_of(x))));
    let theta = subset
        .iter()
        .all(|e| m.points().iter().all(|&x| m.contains(ctx.theta(e, x))));
    if closed != action || closed != theta {
        return Err(AdmisError::EquivalenceViolated {
            closed,
            action,
            theta,
        });
    }
    let invariant = is_invariant(g, ctx, m);
    // invariant implies admissible
    assert!(
        !invariant || closed,
        "an invariant subgroup must be admissible"
    );
    let m_star_soluble = if closed {
        let sub = g.subgroup_from_elements(subset.iter().map(|e| (*e).clone()).collect())?;
        Some(group::is_soluble(sub.group()))
    } else {
        None
    };
    Ok(AdmissibilityReport {
        m_basis: None,
        m_order: m.len(),
        admissible: closed,
        invariant,
        m_star_order: subset.len() as u64,
        m_star_soluble,
    })
}

/// Attach the echelonized basis of M to a report (affine contexts).
pub fn report_with_basis(mut report: AdmissibilityReport, s: &Subspace) -> AdmissibilityReport {
    report.m_basis = Some(s.basis().iter().map(|v| v.entries().to_vec()).collect());
    report
}

// ---------------------------------------------------------------------------
// Quotient reduction
// ---------------------------------------------------------------------------

/// Quotient of the action of G on N/M for a G-invariant normal M: returns
/// the holomorph context of N/M, the induced permutation group on the
/// cosets, and the action kernel K as sorted element indices of G. Checks
/// that K equals core_G(M_*) and that transitivity passes down.
pub fn quotient_reduction<C: HolContext>(
    g: &FiniteGroup<C::Elem>,
    ctx: &C,
    m: &SubgroupOfN,
) -> Result<(TableHolomorph, FiniteGroup<Permutation>, Vec<usize>), AdmisError> {
    if !is_invariant(g, ctx, m) {
        return Err(AdmisError::NotInvariant);
    }
    if !m.is_normal_in_n(ctx) {
        return Err(AdmisError::NotNormalInN);
    }
    let n = ctx.points();
    // canonical coset representatives: the minimum of x * M
    let mut rep = vec![usize::MAX; n];
    for (x, r) in rep.iter_mut().enumerate() {
        *r = m.points().iter().map(|&mm| ctx.law(x, mm)).min().unwrap();
    }
    let mut reps: Vec<usize> = rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let q = reps.len();
    assert_eq!(q * m.len(), n, "cosets partition N");
    assert_eq!(reps[0], 0, "identity coset is represented by 0");
    let coset_index = |x: usize| reps.binary_search(&rep[x]).unwrap();

    // quotient multiplication table, well-defined because M is normal in N
    let mut prod = vec![0u32; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            prod[i * q + j] = coset_index(ctx.law(a, b)) as u32;
        }
    }
    let quotient_group = SmallGroup::from_table(&format!("{}/M", ctx.describe()), q, prod)
        .map_err(AdmisError::Hol)?;

    // induced permutation on the cosets; invariance makes it well-defined,
    // re-checked pointwise
    let induce = |e: &C::Elem| -> Permutation {
        let mut images = vec![u16::MAX; q];
        for x in 0..n {
            let from = coset_index(x);
            let to = coset_index(e.image_of(x)) as u16;
            if images[from] == u16::MAX {
                images[from] = to;
            } else {
                assert_eq!(images[from], to, "induced action must be coset-constant");
            }
        }
        Permutation::new(images).expect("induced bijection")
    };

    let induced_gens: Vec<Permutation> = g.generators().iter().map(&induce).collect();
    let induced = if induced_gens.is_empty() {
        close(&[Permutation::identity(q)], 1)?
    } else {
        close(&induced_gens, g.order() as usize)?
    };

    // kernel of the action = elements inducing the identity permutation
    let kernel_indices: Vec<usize> = g
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, e)| induce(e).is_identity())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(
        induced.order() * kernel_indices.len() as u64,
        g.order(),
        "|G| = |G/K| |K|"
    );

    // K is the core of H = M_*: intersect the conjugates of H over a
    // transversal of the coset space
    let (h_subset, _) = m_star(g, ctx, m);
    let h_set: HashSet<&C::Elem> = h_subset.iter().copied().collect();
    let mut core: Vec<C::Elem> = h_subset.iter().map(|e| (*e).clone()).collect();
    for &r in &reps {
        if let Some(t) = g.elements().iter().find(|e| rep[e.image_of(0)] == r) {
            let tinv = t.inverse();
            core.retain(|x| h_set.contains(&tinv.op(x).op(t)));
        }
    }
    let mut core_indices: Vec<usize> = core
        .iter()
        .map(|e| g.index_of(e).expect("core inside G"))
        .collect();
    core_indices.sort_unstable();
    assert_eq!(
        core_indices, kernel_indices,
        "core_G(M_*) is the action kernel"
    );

    // the induced group sits inside Hol(N/M): each induced permutation is
    // x -> alpha * theta(x) with theta an automorphism of the quotient
    for pi in induced.elements() {
        let alpha = pi.apply(0);
        let alpha_inv = quotient_group.inv(alpha);
        for x in 0..q {
            for y in 0..q {
                let tx = quotient_group.mul(alpha_inv, pi.apply(x));
                let ty = quotient_group.mul(alpha_inv, pi.apply(y));
                let txy = quotient_group.mul(alpha_inv, pi.apply(quotient_group.mul(x, y)));
                assert_eq!(
                    txy,
                    quotient_group.mul(tx, ty),
                    "automorphism part of the induced action"
                );
            }
        }
    }
    let quotient = TableHolomorph::new(quotient_group)?;
    if holomorph::is_transitive(g, ctx)? {
        assert!(
            holomorph::is_transitive(&induced, &quotient)?,
            "transitivity passes to the quotient"
        );
    }
    Ok((quotient, induced, kernel_indices))
}

// ---------------------------------------------------------------------------
// Counterexample classification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CounterexampleStatus {
    NotCounterexample {
        reason: String,
    },
    /// insoluble regular G with M_* soluble for every proper admissible M
    Minimal,
    /// every proper invariant normal M has soluble M_*, but some proper
    /// admissible one does not
    WeaklyMinimal,
    /// some proper invariant normal M has insoluble M_*
    Reducible,
}

/// All subgroups of N as point sets: the full lattice of the base group.
pub fn subgroups_of_n<C: HolContext>(ctx: &C) -> Result<Vec<SubgroupOfN>, AdmisError> {
    let n = ctx.points();
    let rows: Vec<Vec<u16>> = (0..n)
        .map(|a| (0..n).map(|b| ctx.law(a, b) as u16).collect())
        .collect();
    let as_group = group_from_table(&rows)?;
    let mut out = Vec::new();
    for sub in group::all_subgroups(&as_group) {
        // translation permutations are indexed by where they send 0
        let points: Vec<usize> = sub.group().elements().iter().map(|p| p.apply(0)).collect();
        out.push(SubgroupOfN::new(ctx, points)?);
    }
    out.sort_by_key(|s| (s.len(), s.points().to_vec()));
    Ok(out)
}

/// Classify a regular subgroup against the minimality definitions.
pub fn counterexample_status<C: HolContext>(
    g: &FiniteGroup<C::Elem>,
    ctx: &C,
) -> Result<CounterexampleStatus, AdmisError> {
    if !holomorph::is_regular(g, ctx)? {
        return Ok(CounterexampleStatus::NotCounterexample {
            reason: "G is not regular on N".into(),
        });
    }
    if group::is_soluble(g) {
        return Ok(CounterexampleStatus::NotCounterexample {
            reason: "G is soluble".into(),
        });
    }
    let n_soluble = {
        let n = ctx.points();
        let rows: Vec<Vec<u16>> = (0..n)
            .map(|a| (0..n).map(|b| ctx.law(a, b) as u16).collect())
            .collect();
        group::is_soluble(&group_from_table(&rows)?)
    };
    if !n_soluble {
        return Ok(CounterexampleStatus::NotCounterexample {
            reason: "N is not soluble".into(),
        });
    }
    // G is an insoluble regular subgroup of Hol(N) with N soluble
    let mut minimal = true;
    let mut weakly_minimal = true;
    for m in subgroups_of_n(ctx)? {
        if m.len() == ctx.points() {
            continue; // proper subgroups only
        }
        let report = is_admissible(g, ctx, &m)?;
        if report.admissible && report.m_star_soluble == Some(false) {
            minimal = false;
            if report.invariant && m.is_normal_in_n(ctx) {
                weakly_minimal = false;
            }
        }
    }
    Ok(if minimal {
        CounterexampleStatus::Minimal
    } else if weakly_minimal {
        CounterexampleStatus::WeaklyMinimal
    } else {
        CounterexampleStatus::Reducible
    })
}

// ---------------------------------------------------------------------------
// Irreducibility of the linear module
// ---------------------------------------------------------------------------

/// Smallest subspace containing v that is invariant under all the matrices.
pub fn spin_span(mats: &[&GFMatrix], v: &GFVector, n: usize) -> Subspace {
    let mut space = crate::gf::echelonize(2, n, std::slice::from_ref(v)).expect("seed span");
    loop {
        let mut new_vecs: Vec<GFVector> = space.basis().to_vec();
        let before = space.dim();
        for m in mats {
            for b in space.basis() {
                new_vecs.push(m.mul_vec(b).expect("dims"));
            }
        }
        space = crate::gf::echelonize(2, n, &new_vecs).expect("grown span");
        if space.dim() == before {
            return space;
        }
    }
}

/// True iff the linear action of the generators has no proper nontrivial
/// invariant subspace: the spin of every nonzero vector is the full space.
pub fn module_is_irreducible(gens: &[AffineElement], n: usize) -> bool {
    let mats: Vec<&GFMatrix> = gens.iter().map(|g| g.lin()).collect();
    for idx in 1..(1usize << n) {
        let v = GFVector::from_point_index(2, n, idx);
        if spin_span(&mats, &v, n).dim() != n {
            return false;
        }
    }
    true
}

/// Oracle route for small n: count invariant subspaces over the whole
/// subspace lattice; irreducible iff only {0} and V are invariant.
pub fn invariant_subspace_count(gens: &[AffineElement], n: usize) -> usize {
    let mats: Vec<&GFMatrix> = gens.iter().map(|g| g.lin()).collect();
    crate::gf::all_subspaces(2, n)
        .into_iter()
        .filter(|s| {
            s.basis()
                .iter()
                .all(|b| mats.iter().all(|m| s.contains(&m.mul_vec(b).unwrap())))
        })
        .count()
}
