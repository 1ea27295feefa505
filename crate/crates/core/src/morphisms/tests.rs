use std::collections::HashSet;
use std::sync::Arc;

use super::*;
use super::hom;
use super::search::{dfs, GroupData, LeafAction};
use crate::pcp::{parse_pcp, Element, PcPresentation};
use crate::structure::class_and_coclass;

fn fx(text: &str) -> Arc<PcPresentation> {
    Arc::new(parse_pcp(text).unwrap())
}

fn d8() -> Arc<PcPresentation> {
    fx("pcgroup 3\norder 1 2\norder 2 2\norder 3 2\npower 2 := g3\nconj 2 1 := g2 g3\n")
}

fn q8() -> Arc<PcPresentation> {
    fx("pcgroup 3\norder 1 2\norder 2 2\norder 3 2\npower 1 := g3\npower 2 := g3\nconj 2 1 := g2 g3\n")
}

fn d16() -> Arc<PcPresentation> {
    fx("pcgroup 4\norder 1 2\norder 2 2\norder 3 2\norder 4 2\n\
        power 2 := g3\npower 3 := g4\nconj 2 1 := g2 g3 g4\nconj 3 1 := g3 g4\n")
}

fn c8() -> Arc<PcPresentation> {
    fx("pcgroup 1\norder 1 8\n")
}

fn c2x3() -> Arc<PcPresentation> {
    fx("pcgroup 3\norder 1 2\norder 2 2\norder 3 2\n")
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

/// Unpruned oracle: every generator-image tuple in G^d, rejected only by
/// failed relations (checked as soon as their support is assigned) and, at
/// the leaves, by non-surjectivity. Uses only public element arithmetic.
fn oracle_automorphisms(p: &Arc<PcPresentation>) -> Vec<Vec<Element>> {
    let table = {
        // all elements by BFS closure
        let mut seen = HashSet::new();
        let mut queue = vec![p.identity()];
        seen.insert(p.identity());
        while let Some(x) = queue.pop() {
            for g in p.generators() {
                let y = p.multiply(&x, &g).unwrap();
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        let mut v: Vec<Element> = seen.into_iter().collect();
        v.sort_by(|a, b| a.exponents().cmp(b.exponents()));
        v
    };
    let relations = hom::all_relations(p);
    let support_of = |rel: &RelationId| -> Vec<usize> {
        let mut s = match *rel {
            RelationId::Power { gen } => {
                let mut s = vec![gen];
                s.extend(p.power_rhs(gen).letters().iter().map(|l| l.gen));
                s
            }
            RelationId::Conjugation { j, k } => {
                let mut s = vec![j, k];
                if let Some(w) = p.conj_rhs(j, k) {
                    s.extend(w.letters().iter().map(|l| l.gen));
                }
                s
            }
        };
        s.sort_unstable();
        s.dedup();
        s
    };
    let mut found = Vec::new();
    let mut images: Vec<Element> = Vec::new();
    fn rec(
        p: &Arc<PcPresentation>,
        table: &[Element],
        relations: &[(RelationId, usize)],
        images: &mut Vec<Element>,
        found: &mut Vec<Vec<Element>>,
    ) {
        let d = p.num_generators();
        let k = images.len();
        if k == d {
            let hom = check_homomorphism(p, p, images.clone()).unwrap();
            if hom.is_verified() && hom.is_bijective().unwrap() {
                found.push(images.clone());
            }
            return;
        }
        'cand: for cand in table {
            images.push(cand.clone());
            for (rel, max_support) in relations {
                if *max_support == k {
                    let hom_ok = relation_ok(p, images, *rel);
                    if !hom_ok {
                        images.pop();
                        continue 'cand;
                    }
                }
            }
            rec(p, table, relations, images, found);
            images.pop();
        }
    }
    fn relation_ok(p: &Arc<PcPresentation>, images: &[Element], rel: RelationId) -> bool {
        let eval = |w: &crate::pcp::Word| -> Element {
            let mut acc = p.identity();
            for l in w.letters() {
                let pw = p.element_power(&images[l.gen], l.exp).unwrap();
                acc = p.multiply(&acc, &pw).unwrap();
            }
            acc
        };
        match rel {
            RelationId::Power { gen } => {
                p.element_power(&images[gen], p.rel_order(gen) as i64).unwrap()
                    == eval(p.power_rhs(gen))
            }
            RelationId::Conjugation { j, k } => {
                let lhs = p.conjugate(&images[j], &images[k]).unwrap();
                match p.conj_rhs(j, k) {
                    Some(w) => lhs == eval(w),
                    None => lhs == images[j],
                }
            }
        }
    }
    let rels_with_support: Vec<(RelationId, usize)> = relations
        .iter()
        .map(|r| (*r, *support_of(r).iter().max().unwrap()))
        .collect();
    rec(p, &table, &rels_with_support, &mut images, &mut found);
    found
}

#[test]
fn aut_counts_match_paper_and_oracles() {
    // |Aut(D8)| = 8, a 2-group
    let report = automorphism_order(&d8(), &budget()).unwrap();
    assert_eq!(report.aut_order(), 8);
    assert!(report.is_2_group());
    assert!(report.odd_witness.is_none());

    // |Aut(C2^3)| = (8-1)(8-2)(8-4) = 168 = 2^3 * 21
    let report = automorphism_order(&c2x3(), &budget()).unwrap();
    assert_eq!(report.aut_order(), 168);
    assert_eq!(report.two_part_exponent, 3);
    assert_eq!(report.odd_part, 21);
    let witness = report.odd_witness.as_ref().expect("odd witness");
    assert!(witness.is_verified());
    // witness's order is odd and > 1
    let mut power = witness.clone();
    let mut order = 1u32;
    while !power.is_identity() {
        power = power.compose(witness).unwrap();
        order += 1;
        assert!(order <= 21);
    }
    assert!(order > 1 && order % 2 == 1, "witness order {order}");

    // |Aut(C8)| = 4 (units mod 8)
    let report = automorphism_order(&c8(), &budget()).unwrap();
    assert_eq!(report.aut_order(), 4);

    // |Aut(Q8)| = 24
    let report = automorphism_order(&q8(), &budget()).unwrap();
    assert_eq!(report.aut_order(), 24);
    assert_eq!(report.odd_part, 3);

    // trivial group and C2
    let trivial = fx("pcgroup 0\n");
    assert_eq!(automorphism_order(&trivial, &budget()).unwrap().aut_order(), 1);
    let c2 = fx("pcgroup 1\norder 1 2\n");
    assert_eq!(automorphism_order(&c2, &budget()).unwrap().aut_order(), 1);
}

#[test]
fn pruned_search_agrees_with_unpruned_oracle() {
    for p in [d8(), q8(), c8(), c2x3(), d16()] {
        let oracle = oracle_automorphisms(&p);
        let report = automorphism_order(&p, &budget()).unwrap();
        assert_eq!(
            report.aut_order(),
            oracle.len() as u64,
            "count mismatch for {}",
            p.to_text()
        );
        // pruning soundness: collect the pruned search's accepted tuples
        // and compare them as sets
        let oracle_set: HashSet<Vec<Vec<u64>>> = oracle
            .iter()
            .map(|t| t.iter().map(|e| e.exponents().to_vec()).collect())
            .collect();
        assert_eq!(oracle_set.len(), oracle.len());
        let data = GroupData::build(&p).unwrap();
        let mut pruned_set: HashSet<Vec<Vec<u64>>> = HashSet::new();
        dfs(&data, &data, &budget(), |images| {
            pruned_set.insert(
                images
                    .iter()
                    .map(|&r| data.table.element(&p, r).exponents().to_vec())
                    .collect(),
            );
            Ok(LeafAction::Continue)
        })
        .unwrap();
        assert_eq!(pruned_set, oracle_set);
    }
}

#[test]
fn aut_set_closed_under_composition_and_inverse() {
    let p = d8();
    let oracle = oracle_automorphisms(&p);
    let set: HashSet<Vec<Vec<u64>>> = oracle
        .iter()
        .map(|t| t.iter().map(|e| e.exponents().to_vec()).collect())
        .collect();
    for a in &oracle {
        for b in &oracle {
            let ha = check_homomorphism(&p, &p, a.clone()).unwrap();
            let hb = check_homomorphism(&p, &p, b.clone()).unwrap();
            let ab = ha.compose(&hb).unwrap();
            let key: Vec<Vec<u64>> = ab.images().iter().map(|e| e.exponents().to_vec()).collect();
            assert!(set.contains(&key), "composition stays in Aut");
        }
    }
}

#[test]
fn hom_check_examples() {
    let p = d8();
    // identity
    let hom = check_homomorphism(&p, &p, p.generators()).unwrap();
    assert!(hom.is_verified());
    assert!(hom.is_identity());
    assert!(hom.is_bijective().unwrap());

    // D8 -> C2: g1 -> z, g2 -> z, g3 -> 1
    let c2 = fx("pcgroup 1\norder 1 2\n");
    let z = c2.generator(0).unwrap();
    let hom = check_homomorphism(&p, &c2, vec![z.clone(), z, c2.identity()]).unwrap();
    assert!(hom.is_verified());
    assert!(!hom.is_bijective().unwrap());

    // self-map g1 -> g2 breaks g1^2 = 1
    let mut images = p.generators();
    images[0] = p.generator(1).unwrap();
    let hom = check_homomorphism(&p, &p, images).unwrap();
    assert!(!hom.is_verified());
    assert_eq!(hom.failing_relation(), Some(RelationId::Power { gen: 0 }));

    // arity mismatch
    assert!(matches!(
        check_homomorphism(&p, &p, vec![p.identity()]),
        Err(crate::error::Error::ArityMismatch { .. })
    ));
}

#[test]
fn iso_examples() {
    // relabeled D8: reflection second, rotation first
    let relabeled = fx(
        "pcgroup 3\norder 1 2\norder 2 2\norder 3 2\npower 1 := g3\nconj 2 1 := g2 g3\n",
    );
    let found = isomorphism(&d8(), &relabeled, &budget()).unwrap();
    let hom = found.expect("D8 in different labels is isomorphic");
    assert!(hom.is_verified() && hom.is_bijective().unwrap());

    // two-generator presentation of the same group
    let two_gen = fx("pcgroup 2\norder 1 2\norder 2 4\nconj 2 1 := g2^3\n");
    assert!(isomorphism(&d8(), &two_gen, &budget()).unwrap().is_some());

    // D8 vs Q8: certified non-isomorphic
    assert!(isomorphism(&d8(), &q8(), &budget()).unwrap().is_none());

    // reflexive on a fixture
    assert!(isomorphism(&d16(), &d16(), &budget()).unwrap().is_some());
}

#[test]
fn iso_is_an_equivalence_on_sampled_triples() {
    // three presentations of the dihedral group of order 8
    let a = d8();
    let b = fx("pcgroup 3\norder 1 2\norder 2 2\norder 3 2\npower 1 := g3\nconj 2 1 := g2 g3\n");
    let c = fx("pcgroup 2\norder 1 2\norder 2 4\nconj 2 1 := g2^3\n");
    for p in [&a, &b, &c] {
        assert!(isomorphism(p, p, &budget()).unwrap().is_some(), "reflexive");
    }
    let ab = isomorphism(&a, &b, &budget()).unwrap().is_some();
    let ba = isomorphism(&b, &a, &budget()).unwrap().is_some();
    assert!(ab && ba, "symmetric");
    let bc = isomorphism(&b, &c, &budget()).unwrap().is_some();
    let ac = isomorphism(&a, &c, &budget()).unwrap().is_some();
    assert!(bc && ac, "transitive through b");
    // and a non-isomorphic pair stays non-isomorphic in both directions
    assert!(isomorphism(&a, &q8(), &budget()).unwrap().is_none());
    assert!(isomorphism(&q8(), &a, &budget()).unwrap().is_none());
}

#[test]
fn is_aut_2_group_examples() {
    assert!(is_aut_2_group(&c8(), &budget()).unwrap());
    assert!(!is_aut_2_group(&q8(), &budget()).unwrap());
    assert!(is_aut_2_group(&d16(), &budget()).unwrap());
    assert!(!is_aut_2_group(&c2x3(), &budget()).unwrap());
}

#[test]
fn refine_preserves_structure() {
    let c4 = fx("pcgroup 1\norder 1 4\n");
    let (refined, iso) = refine_presentation(&c4).unwrap();
    assert!(iso.is_verified());
    assert!(iso.is_bijective().unwrap());
    assert_eq!(refined.num_generators(), 2);

    // a group with a big cyclic part: t of order 8 under inversion
    let p = fx("pcgroup 2\norder 1 2\norder 2 8\nconj 2 1 := g2^7\n");
    let (refined, iso) = refine_presentation(&p).unwrap();
    assert_eq!(refined.num_generators(), 4);
    assert!(refined.rel_orders().iter().all(|&m| m == 2));
    assert!(iso.is_bijective().unwrap());
    assert_eq!(
        class_and_coclass(&p).unwrap(),
        class_and_coclass(&refined).unwrap()
    );
}

#[test]
fn aut_order_ceiling_is_enforced() {
    // order 2^14 exceeds the counting ceiling
    let big = Arc::new(crate::families::k_group(crate::families::KFamilyId::new(1, 8).unwrap()).unwrap());
    assert!(matches!(
        automorphism_order(&big, &budget()),
        Err(crate::error::Error::OrderCeiling { .. })
    ));
}

#[test]
fn search_budget_is_reported() {
    let tiny = SearchBudget {
        max_nodes: 3,
        max_wall: None,
    };
    let err = automorphism_order(&c2x3(), &tiny).unwrap_err();
    assert!(matches!(err, crate::error::Error::SearchBudget { .. }));
}
