//! Oracle cross-checks: independent brute-force routes validating the
//! production algorithms on small instances.

use holoscope::admissibility::{self, SubgroupOfN};
use holoscope::affine::AffineElement;
use holoscope::construction::canonical_group;
use holoscope::gf::GFVector;
use holoscope::group::{
    self, all_subgroups, close, is_normal, is_soluble, ActionTable, FiniteGroup, GroupElement,
    SubgroupHandle,
};
use holoscope::holomorph::{
    self, enumerate_regular_subgroups, small_groups_up_to_8, AffineHolomorph, HolContext,
    SmallGroup, TableHolomorph,
};
use holoscope::perm::Permutation;

/// Brute-force solubility: a group is soluble iff it has a normal subgroup
/// of prime index whose recursion bottoms out at the trivial group.
fn soluble_oracle<E: GroupElement>(g: &FiniteGroup<E>) -> bool {
    let order = g.order();
    if order == 1 {
        return true;
    }
    for sub in all_subgroups(g) {
        let index = order / sub.order();
        if is_prime(index) && is_normal(&sub, g).unwrap() && soluble_oracle(sub.group()) {
            return true;
        }
    }
    false
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[test]
fn solubility_agrees_with_prime_index_chain_oracle() {
    // every subgroup of order <= 24 arising in S4 and in the catalogued
    // holomorphs of order <= 48
    let s4 = close(
        &[
            Permutation::from_cycles(4, &[&[0, 1, 2, 3]]),
            Permutation::from_cycles(4, &[&[0, 1]]),
        ],
        25,
    )
    .unwrap();
    let mut tested = 0;
    for sub in all_subgroups(&s4) {
        assert_eq!(is_soluble(sub.group()), soluble_oracle(sub.group()));
        tested += 1;
    }
    for base in small_groups_up_to_8() {
        let hol = TableHolomorph::new(base).unwrap();
        if hol.ambient().order() > 48 {
            continue;
        }
        for sub in all_subgroups(hol.ambient()) {
            if sub.order() <= 24 {
                assert_eq!(is_soluble(sub.group()), soluble_oracle(sub.group()));
                tested += 1;
            }
        }
    }
    assert!(tested > 100, "only {tested} groups exercised");
}

#[test]
fn insoluble_group_fails_both_routes() {
    let g = canonical_group();
    assert!(!is_soluble(&g));
    // the oracle agrees on the order-168 simple group (its lattice has
    // hundreds of subgroups; index-prime normal subgroups do not exist)
    let normals = group::normal_subgroups(&g, 1000).unwrap();
    let orders: Vec<u64> = normals.iter().map(|n| n.order()).collect();
    assert_eq!(orders, vec![1, 168], "simplicity");
}

#[test]
fn regular_enumeration_matches_lattice_oracle() {
    // full-lattice enumeration stays tractable through Hol(Q8) of order
    // 192; only Hol(C2^3) is excluded (order 1344), and that case is
    // covered by the agreement of the three enumeration routes
    for base in small_groups_up_to_8() {
        let name = base.name.clone();
        let hol = TableHolomorph::new(base).unwrap();
        if hol.ambient().order() > 200 {
            continue;
        }
        let fast = enumerate_regular_subgroups(&hol, hol.ambient(), 2000).unwrap();
        let oracle: Vec<SubgroupHandle<Permutation>> = all_subgroups(hol.ambient())
            .into_iter()
            .filter(|s| holomorph::is_regular(s.group(), &hol).unwrap())
            .collect();
        assert_eq!(
            fast.len(),
            oracle.len(),
            "regular subgroup count for Hol({name})"
        );
        let keys: Vec<_> = fast.iter().map(|g| g.canonical_key()).collect();
        let mut oracle_keys: Vec<_> = oracle.iter().map(|s| s.group().canonical_key()).collect();
        oracle_keys.sort();
        assert_eq!(keys, oracle_keys, "regular subgroup sets for Hol({name})");
    }
}

#[test]
fn regular_enumeration_is_presentation_independent() {
    // the same ambient group from two different generating sets gives the
    // same regular subgroup list
    let ctx = AffineHolomorph::new(2, 2).unwrap();
    let amb1 = ctx.materialize(100).unwrap();
    let alt_gens: Vec<AffineElement> = vec![
        amb1.elements()[5].clone(),
        amb1.elements()[11].clone(),
        amb1.elements()[17].clone(),
        amb1.elements()[23].clone(),
    ];
    let amb2 = close(&alt_gens, 100).unwrap();
    assert_eq!(
        amb2.order(),
        24,
        "alternative generators span the holomorph"
    );
    let r1 = enumerate_regular_subgroups(&ctx, &amb1, 100).unwrap();
    let r2 = enumerate_regular_subgroups(&ctx, &amb2, 100).unwrap();
    let k1: Vec<_> = r1.iter().map(|g| g.canonical_key()).collect();
    let k2: Vec<_> = r2.iter().map(|g| g.canonical_key()).collect();
    assert_eq!(k1, k2);
}

#[test]
fn minimal_normal_subgroups_verified_directly() {
    // every returned subgroup is nontrivial, normal, and contains no
    // smaller nontrivial normal subgroup of the parent
    let cases: Vec<FiniteGroup<Permutation>> = vec![
        close(
            &[
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]),
                Permutation::from_cycles(4, &[&[0, 1]]),
            ],
            25,
        )
        .unwrap(),
        TableHolomorph::new(SmallGroup::quaternion8())
            .unwrap()
            .ambient()
            .clone(),
        TableHolomorph::new(SmallGroup::dihedral(3))
            .unwrap()
            .ambient()
            .clone(),
    ];
    for g in &cases {
        let minimals = group::minimal_normal_subgroups(g, 10_000).unwrap();
        assert!(!minimals.is_empty());
        for m in &minimals {
            assert!(m.order() > 1);
            assert!(is_normal(m, g).unwrap());
            // minimality: the normal closure of every nontrivial element of
            // m is m itself
            for x in m.group().elements() {
                if *x == m.group().identity() {
                    continue;
                }
                let ncl = group::normal_closure(g, std::slice::from_ref(x)).unwrap();
                assert_eq!(
                    ncl.group().canonical_key(),
                    m.group().canonical_key(),
                    "minimal normal subgroups are normal closures of each of their elements"
                );
            }
        }
    }
}

#[test]
fn admis_sub_round_trip_for_regular_groups() {
    // for regular G: M admissible iff some subgroup H of G acts regularly
    // on M, and then H = M_*
    for base in small_groups_up_to_8() {
        let name = base.name.clone();
        if base.order() > 8 {
            continue;
        }
        let hol = TableHolomorph::new(base).unwrap();
        let regs = enumerate_regular_subgroups(&hol, hol.ambient(), 2000).unwrap();
        for g in regs.iter().take(3) {
            for sub in all_subgroups(g) {
                // the orbit of 0 under a subgroup of a regular group is a
                // candidate M exactly when it is a subgroup of N
                let orbit: Vec<usize> = sub
                    .group()
                    .elements()
                    .iter()
                    .map(|e| holoscope::group::PointAction::image_of(e, 0))
                    .collect();
                if let Ok(m) = SubgroupOfN::new(&hol, orbit.clone()) {
                    if m.len() != sub.order() as usize {
                        continue; // orbit smaller than the subgroup: not regular on M
                    }
                    let report = admissibility::is_admissible(g, &hol, &m).unwrap();
                    assert!(report.admissible, "Hol({name}): orbit subgroup admissible");
                    let m_star = admissibility::m_star_subgroup(g, &hol, &m).unwrap();
                    assert_eq!(
                        m_star.group().canonical_key(),
                        sub.group().canonical_key(),
                        "Hol({name}): H = M_*"
                    );
                }
            }
            // conversely: every admissible M has M_* regular on M
            for m in admissibility::subgroups_of_n(&hol).unwrap() {
                let report = admissibility::is_admissible(g, &hol, &m).unwrap();
                if report.admissible {
                    assert_eq!(report.m_star_order as usize, m.len());
                }
            }
        }
    }
}

#[test]
fn orbit_stabilizer_identity_on_sampled_points() {
    let g = canonical_group();
    let action = ActionTable::from_group(&g).unwrap();
    for point in 0..8 {
        let orbit = group::orbit(&g, &action, point).unwrap();
        let stab = group::stabilizer(&g, &action, point).unwrap();
        assert_eq!(orbit.len() as u64 * stab.order(), g.order());
    }
}

#[test]
fn stabilizer_in_the_trivial_group_is_trivial() {
    let t = close(&[AffineElement::identity(2, 3)], 1).unwrap();
    let action = ActionTable::from_group(&t).unwrap();
    let stab = group::stabilizer(&t, &action, 5).unwrap();
    assert_eq!(stab.order(), 1);
    assert_eq!(group::orbit(&t, &action, 5).unwrap(), vec![5]);
}

#[test]
fn socle_of_the_simple_group_is_itself() {
    let g = canonical_group();
    let soc = group::socle(&g, 1000).unwrap();
    assert_eq!(soc.order(), 168);
    let minimals = group::minimal_normal_subgroups(&g, 1000).unwrap();
    assert_eq!(minimals.len(), 1);
    assert_eq!(minimals[0].order(), 168);
}

#[test]
fn group_axioms_on_sampled_affine_triples() {
    let g = canonical_group();
    let els = g.elements();
    for i in (0..els.len()).step_by(37) {
        for j in (0..els.len()).step_by(41) {
            for k in (0..els.len()).step_by(43) {
                let (a, b, c) = (&els[i], &els[j], &els[k]);
                assert_eq!(a.op(b).op(c), a.op(&b.op(c)));
            }
        }
        let a = &els[i];
        assert!(a.op(&a.inverse()).is_translation());
        assert_eq!(a.op(&a.inverse()), g.identity());
    }
}

#[test]
fn aut_of_elementary_abelian_8_is_gl3() {
    // cross-check of the automorphism backtracking against the matrix group
    let auts = SmallGroup::elementary_abelian_2(3).automorphisms();
    assert_eq!(auts.len(), 168);
}

#[test]
fn theta_action_matches_context_law() {
    // theta_g is an automorphism of N for every g in Hol(N)
    for base in small_groups_up_to_8()
        .into_iter()
        .filter(|b| b.order() <= 6)
    {
        let hol = TableHolomorph::new(base).unwrap();
        for e in hol.ambient().elements() {
            for x in 0..hol.points() {
                for y in 0..hol.points() {
                    let lhs = hol.theta(e, hol.law(x, y));
                    let rhs = hol.law(hol.theta(e, x), hol.theta(e, y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn quotient_of_quaternion_holomorph_by_the_center() {
    // non-abelian N: Hol(Q8) acting on Q8, quotient by the center {1, -1}
    let hol = TableHolomorph::new(SmallGroup::quaternion8()).unwrap();
    let g = hol.ambient().clone();
    // the center is the unique subgroup of order 2
    let center = admissibility::subgroups_of_n(&hol)
        .unwrap()
        .into_iter()
        .find(|m| m.len() == 2)
        .unwrap();
    assert!(center.is_normal_in_n(&hol));
    assert!(admissibility::is_invariant(&g, &hol, &center));
    let (quotient, induced, kernel) = admissibility::quotient_reduction(&g, &hol, &center).unwrap();
    // Q8 / Z is the Klein four-group
    assert_eq!(quotient.points(), 4);
    assert_eq!(induced.order() * kernel.len() as u64, g.order());
    assert!(holomorph::is_transitive(&induced, &quotient).unwrap());
    // the induced group sits inside Hol(C2xC2) of order 24
    assert!(induced.order() <= 24);
}

#[test]
fn quotient_reduction_divides_and_keeps_transitivity() {
    let g = canonical_group();
    let ctx = AffineHolomorph::new(2, 3).unwrap();
    for s in holoscope::gf::all_subspaces(2, 3) {
        let m = SubgroupOfN::from_subspace(&ctx, &s).unwrap();
        if !admissibility::is_invariant(&g, &ctx, &m) {
            continue;
        }
        let (quotient, induced, kernel) = admissibility::quotient_reduction(&g, &ctx, &m).unwrap();
        assert_eq!(g.order() % induced.order(), 0);
        assert_eq!(induced.order() * kernel.len() as u64, g.order());
        assert!(holomorph::is_transitive(&induced, &quotient).unwrap());
    }
}

#[test]
fn counterexample_status_on_regular_subgroups_of_small_holomorphs() {
    // no counterexamples exist at desk scale: every regular subgroup is
    // soluble and is classified as such
    for base in small_groups_up_to_8() {
        let hol = TableHolomorph::new(base).unwrap();
        let regs = enumerate_regular_subgroups(&hol, hol.ambient(), 2000).unwrap();
        for g in regs.iter().take(4) {
            let status = admissibility::counterexample_status(g, &hol).unwrap();
            assert_eq!(
                status,
                admissibility::CounterexampleStatus::NotCounterexample {
                    reason: "G is soluble".into()
                }
            );
        }
    }
}

#[test]
fn measured_wreath_parameters_satisfy_both_inequalities() {
    use holoscope::classify;
    use holoscope::construction::{build_wreath, WreathSpec};
    for r in [1usize, 2] {
        let h = if r == 1 {
            close(&[Permutation::identity(1)], 1).unwrap()
        } else {
            close(&[Permutation::from_cycles(2, &[&[0, 1]])], 3).unwrap()
        };
        let w = build_wreath(&WreathSpec::new(r, h).unwrap()).unwrap();
        // the unique minimal normal subgroup is the full block group
        let g = w.group.as_ref().unwrap();
        let minimals = group::minimal_normal_subgroups(g, 100_000).unwrap();
        assert_eq!(minimals.len(), 1, "one minimal normal subgroup at r = {r}");
        assert_eq!(minimals[0].order(), 168u64.pow(r as u32));
        // parameters read off the block structure land in the (m = r,
        // y = z = 1) case and satisfy both inequalities
        let params = classify::measured_wreath_params(&w).unwrap();
        assert_eq!(params.m, r as u64);
        assert_eq!(params.js.len(), 1);
        assert_eq!(params.js[0].r, r as u64);
        assert_eq!((params.js[0].y, params.js[0].z), (1, 1));
        assert!(classify::check_mk_ry(&params));
        let (lhs, rhs, holds) = classify::check_key_inequality(&params);
        assert!(holds, "lhs {lhs} < rhs {rhs}");
    }
}

#[test]
fn candidate_families_come_from_the_soluble_capable_cases() {
    use holoscope::classify;
    // the insoluble-R cases of the prime-power-index table contribute no
    // candidates
    let insoluble_ts: Vec<&str> = classify::guralnick_table()
        .iter()
        .filter(|c| !c.r_can_be_soluble)
        .map(|c| c.t)
        .collect();
    assert!(insoluble_ts.contains(&"PSL_2(11)"));
    for cand in classify::soluble_index_candidates(100_000) {
        assert!(cand.name.starts_with("PSL"), "{}", cand.name);
        assert_ne!(cand.name, "PSL2(11)");
        assert!(!cand.name.contains('M') && !cand.name.contains("PSU"));
    }
}

#[test]
fn fixed_space_of_nine_dimensional_tensor_action_is_zero() {
    // the 3 (x) 3 tensor module of two order-168 blocks has no nonzero
    // fixed vector
    let g = holoscope::construction::canonical_generators();
    let mats = [g.a.clone(), g.b.clone(), g.c.clone(), g.d.clone()];
    let s = holoscope::classify::tensor_action_fixed_space(&mats, &mats).unwrap();
    assert_eq!(s.dim(), 0);
    // oracle: check every one of the 2^9 vectors directly
    let mut kron_mats = Vec::new();
    let id = holoscope::gf::GFMatrix::identity(2, 3);
    for m in &mats {
        kron_mats.push(m.kron(&id).unwrap());
        kron_mats.push(id.kron(m).unwrap());
    }
    for idx in 1..512 {
        let v = GFVector::from_point_index(2, 9, idx);
        let fixed = kron_mats.iter().all(|m| m.mul_vec(&v).unwrap() == v);
        assert!(!fixed, "vector {idx} should move under the tensor action");
    }
}
