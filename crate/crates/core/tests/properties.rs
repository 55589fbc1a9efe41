use std::collections::HashMap;

use proptest::prelude::*;

use lie_branching::affine::{integrable_weights, LevelVector, SMatrix};
use lie_branching::algebra::{build_algebra, Weight};
use lie_branching::branching::{branch_closed, branch_oracle, branch_rs, tensor};
use lie_branching::embedding::{catalog_lookup, compose};
use lie_branching::weyl::{dimension, to_dominant, weight_system, weyl_orbit};

fn labels(rank: usize, max: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0..=max, rank).prop_map(Weight)
}

fn any_labels(rank: usize, max: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-max..=max, rank).prop_map(Weight)
}

const EMBEDDINGS: [&str; 6] = [
    "A1-in-A2-xe1",
    "A1-in-A2-xe4",
    "diag-A1",
    "C2-in-A3",
    "B2-in-A4",
    "B3-in-D4",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dominant_image_is_dominant_and_in_orbit(w in any_labels(3, 4), name in prop::sample::select(vec!["A3", "B3", "C3"])) {
        let g = build_algebra(name).unwrap();
        let r = to_dominant(&g, &w).unwrap();
        prop_assert!(r.weight.is_dominant());
        prop_assert!(r.sign == 1 || r.sign == -1);
        prop_assert_eq!(r.on_boundary, r.weight.0.contains(&0));
        prop_assert!(weyl_orbit(&g, &r.weight).unwrap().contains(&w));
    }

    #[test]
    fn weight_system_sums_to_weyl_dimension(w in labels(2, 4), name in prop::sample::select(vec!["A2", "B2", "G2", "A1+A1"])) {
        let g = build_algebra(name).unwrap();
        let ws = weight_system(&g, &w).unwrap();
        prop_assert_eq!(ws.dim(), dimension(&g, &w).unwrap());
        for (mu, m) in ws.iter() {
            let dom = to_dominant(&g, mu).unwrap().weight;
            prop_assert_eq!(ws.multiplicity(&dom), m);
            prop_assert!(m >= 1);
        }
    }

    #[test]
    fn three_methods_agree(idx in 0..EMBEDDINGS.len(), seed in prop::collection::vec(0i64..=2, 4)) {
        let emb = catalog_lookup(EMBEDDINGS[idx]).unwrap();
        let i = Weight(seed[..emb.g().rank()].to_vec());
        let rs = branch_rs(&emb, &i).unwrap();
        let closed = branch_closed(&emb, &i, None).unwrap();
        let oracle = branch_oracle(&emb, &i).unwrap();
        prop_assert!(rs.same_coefficients(&closed));
        prop_assert!(rs.same_coefficients(&oracle));
        prop_assert_eq!(rs.restricted_dimension(emb.p()).unwrap(), dimension(emb.g(), &i).unwrap());
    }

    #[test]
    fn closed_formula_is_stable_above_the_bound(i in labels(2, 3), extra in 1i64..4) {
        let emb = catalog_lookup("A1-in-A2-xe4").unwrap();
        let at_bound = branch_closed(&emb, &i, None).unwrap();
        let k = at_bound.level.clone().unwrap().plus(extra);
        let higher = branch_closed(&emb, &i, Some(&k)).unwrap();
        prop_assert!(at_bound.same_coefficients(&higher));
    }

    #[test]
    fn conjugation_commutes_with_branching(i in labels(2, 4)) {
        let emb = catalog_lookup("A1-in-A2-xe1").unwrap();
        let a1 = emb.p().clone();
        let t = branch_rs(&emb, &i).unwrap();
        let tc = branch_rs(&emb, &emb.g().conjugate(&i)).unwrap();
        for (a, m) in &t.entries {
            prop_assert_eq!(tc.get(&a1.conjugate(a)), *m);
        }
    }

    #[test]
    fn composition_is_transitive(x in labels(2, 2), y in labels(2, 2)) {
        let e1 = catalog_lookup("A1-in-A2-xe1").unwrap();
        let d2 = catalog_lookup("diag-A2").unwrap();
        let comp = compose(&e1, &d2).unwrap();
        let src = x.concat(&y);
        let direct: HashMap<Weight, u64> = branch_rs(&comp, &src).unwrap().entries.into_iter().collect();
        let mut chained: HashMap<Weight, u64> = HashMap::new();
        for (a, m) in branch_rs(&d2, &src).unwrap().entries {
            for (b, n) in branch_rs(&e1, &a).unwrap().entries {
                *chained.entry(b).or_insert(0) += m * n;
            }
        }
        prop_assert_eq!(direct, chained);
    }

    #[test]
    fn tensor_is_commutative_and_conserves_dimension(i in labels(2, 3), j in labels(2, 3)) {
        let g = build_algebra("B2").unwrap();
        let ij = tensor(&g, &i, &j).unwrap();
        let ji = tensor(&g, &j, &i).unwrap();
        prop_assert!(ij.same_coefficients(&ji));
        let total: u64 = ij.entries.iter().map(|(l, m)| m * dimension(&g, l).unwrap()).sum();
        prop_assert_eq!(total, dimension(&g, &i).unwrap() * dimension(&g, &j).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn s_matrix_is_unitary_and_symmetric(k in 0i64..8, name in prop::sample::select(vec!["A1", "A2", "B2", "G2", "A1+A2"])) {
        let g = build_algebra(name).unwrap();
        let s = SMatrix::new(&g, &LevelVector::uniform(&g, k)).unwrap();
        prop_assert!(s.unitarity_residual() < 1e-9);
        prop_assert!(s.symmetry_residual() < 1e-9);
    }

    #[test]
    fn fusion_symmetries(k in 1i64..6) {
        let g = build_algebra("A2").unwrap();
        let lv = LevelVector(vec![k]);
        let s = SMatrix::new(&g, &lv).unwrap();
        let ws = integrable_weights(&g, &lv).unwrap();
        let zero = Weight(vec![0, 0]);
        for i in &ws {
            // N_{i0}^l = delta_il
            let row = s.fusion(i, &zero).unwrap();
            prop_assert_eq!(row.coefficients.clone(), vec![(i.clone(), 1)]);
            for j in &ws {
                let ij = s.fusion(i, j).unwrap();
                let ji = s.fusion(j, i).unwrap();
                prop_assert_eq!(&ij.coefficients, &ji.coefficients);
                let conj = s.fusion(&g.conjugate(i), &g.conjugate(j)).unwrap();
                for (l, n) in &ij.coefficients {
                    prop_assert_eq!(conj.get(&g.conjugate(l)), *n);
                }
            }
        }
    }

    #[test]
    fn fusion_is_level_independent_above_threshold(i in labels(2, 2), j in labels(2, 2), extra in 0i64..3) {
        let g = build_algebra("A2").unwrap();
        let k = i.0.iter().chain(&j.0).sum::<i64>() + extra;
        let a = SMatrix::new(&g, &LevelVector(vec![k])).unwrap().fusion(&i, &j).unwrap();
        let b = SMatrix::new(&g, &LevelVector(vec![k + 1])).unwrap().fusion(&i, &j).unwrap();
        prop_assert_eq!(&a.coefficients, &b.coefficients);
        let mut t = tensor(&g, &i, &j).unwrap().entries;
        let mut f = a.coefficients.clone();
        t.sort();
        f.sort();
        prop_assert_eq!(t, f);
    }
}
