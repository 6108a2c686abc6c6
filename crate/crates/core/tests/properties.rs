use std::collections::BTreeSet;

use homoglab::families::bipede::Elem;
use homoglab::families::{build_bipede, build_omegapede, Crosscut, CrosscutSpec};
use homoglab::{
    atp, automorphism_mapping, discover_equiv_relations, find_embeddings, is_homogeneous_upto,
    partition_of, FinStructure, Signature,
};
use proptest::prelude::*;

fn graph(n: usize, edges: &[bool]) -> FinStructure {
    let mut s = FinStructure::new(Signature::binary(&["E"]), n);
    let mut bits = edges.iter();
    for x in 0..n {
        for y in x + 1..n {
            let e = *bits.next().unwrap_or(&false);
            s.set(0, &[x, y], e);
            s.set(0, &[y, x], e);
        }
    }
    s
}

fn arb_graph() -> impl Strategy<Value = FinStructure> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |e| graph(n, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn atp_is_automorphism_invariant(s in arb_graph(), seed in any::<u64>()) {
        let n = s.size();
        let x = [(seed % n as u64) as usize, ((seed >> 8) % n as u64) as usize];
        let p = [((seed >> 16) % n as u64) as usize];
        for sigma in find_embeddings(&s, &s, 50).unwrap() {
            let img = |v: &[usize]| v.iter().map(|&i| sigma[i]).collect::<Vec<_>>();
            prop_assert_eq!(atp(&s, &img(&x), &img(&p)).unwrap().literals, atp(&s, &x, &p).unwrap().literals);
        }
    }

    #[test]
    fn homogeneous_verdicts_have_automorphisms(s in arb_graph()) {
        let n = s.size();
        let k = n.min(3);
        if is_homogeneous_upto(&s, k).unwrap().is_homogeneous() {
            for u in 0..n {
                for v in 0..n {
                    let (l, r) = ([u, (u + 1) % n], [v, (v + 1) % n]);
                    if atp(&s, &l, &[]).unwrap() == atp(&s, &r, &[]).unwrap() {
                        prop_assert!(automorphism_mapping(&s, &l, &r).unwrap().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn bipede_closure_laws(a in prop::collection::vec(0usize..40, 0..5), b in prop::collection::vec(0usize..40, 0..5)) {
        let g = build_bipede(6, 1, 2);
        let elem = |i: usize| if i < 8 { Elem::Foot(i % g.n_feet()) } else { Elem::Body(i % g.n_bodies()) };
        let small: BTreeSet<Elem> = a.iter().map(|&i| elem(i)).collect();
        let large: BTreeSet<Elem> = small.iter().copied().chain(b.iter().map(|&i| elem(i))).collect();
        let cl_small = g.cl(&small).unwrap();
        let cl_large = g.cl(&large).unwrap();
        prop_assert!(small.is_subset(&cl_small));
        prop_assert!(cl_small.is_subset(&cl_large));
        prop_assert_eq!(g.cl(&cl_small).unwrap(), cl_small);
    }

    #[test]
    fn crosscut_equivalences_intersect_to_equivalences(n_p in 2usize..4, n_q in 2usize..4, cell in 1usize..3) {
        let s = Crosscut::build(CrosscutSpec { n_p, n_q, cell }).to_structure();
        let found = discover_equiv_relations(&s).unwrap();
        let mats: Vec<Vec<Vec<bool>>> = found.iter().map(|d| d.matrix(&s).unwrap()).collect();
        for m in &mats {
            prop_assert!(partition_of(m).is_some());
        }
        for a in &mats {
            for b in &mats {
                let meet: Vec<Vec<bool>> =
                    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| *x && *y).collect()).collect();
                prop_assert!(partition_of(&meet).is_some());
            }
        }
    }
}

#[test]
fn builders_are_deterministic() {
    assert_eq!(
        build_bipede(6, 2, 2).to_structure().to_json(),
        build_bipede(6, 2, 2).to_structure().to_json()
    );
    assert_eq!(
        build_omegapede(3, 2, 3, 2, 2).to_structure().to_json(),
        build_omegapede(3, 2, 3, 2, 2).to_structure().to_json()
    );
}
