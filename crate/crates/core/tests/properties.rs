use lieverify_core::lie_core::{basis_jacobiator, q, qf, LieAlgebra, LieType, SparseVec};
use lieverify_core::model_rep::{apply_bump, apply_pi, AtomicRep, BumpFunction, Component};
use lieverify_core::tame_kam::{constant_chain, TameOp};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn algebras() -> &'static [LieAlgebra] {
    static ALGS: OnceLock<Vec<LieAlgebra>> = OnceLock::new();
    ALGS.get_or_init(|| {
        [(LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::D, 4), (LieType::G, 2), (LieType::F, 4)]
            .into_iter()
            .map(|(t, n)| LieAlgebra::new(t, n).unwrap())
            .collect()
    })
}

fn element(alg: &LieAlgebra, coeffs: &[(usize, i64)]) -> lieverify_core::Element {
    let d = alg.dim();
    let mut acc = std::collections::BTreeMap::new();
    for &(i, c) in coeffs {
        *acc.entry(i % d).or_insert_with(|| q(0)) += q(c);
    }
    alg.element(SparseVec::from_pairs(acc))
}

fn coeffs() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1000, -3i64..=3), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_jacobi_vanishes(a in 0usize..6, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let alg = &algebras()[a];
        let d = alg.dim();
        prop_assert!(basis_jacobiator(alg, i % d, j % d, k % d).is_empty());
    }

    #[test]
    fn bracket_antisymmetric_and_jacobi(a in 0usize..6, x in coeffs(), y in coeffs(), z in coeffs()) {
        let alg = &algebras()[a];
        let (x, y, z) = (element(alg, &x), element(alg, &y), element(alg, &z));
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx).unwrap().is_zero());
        let j1 = alg.bracket(&x, &alg.bracket(&y, &z).unwrap()).unwrap();
        let j2 = alg.bracket(&y, &alg.bracket(&z, &x).unwrap()).unwrap();
        let j3 = alg.bracket(&z, &xy).unwrap();
        prop_assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
    }

    #[test]
    fn tame_composition_adds_losses(l1 in 0i64..50, d1 in 1i64..8, l2 in 0i64..50, d2 in 1i64..8, l3 in 0i64..50) {
        let a = TameOp::new("a", qf(l1, d1), &["t"]).unwrap();
        let b = TameOp::new("b", qf(l2, d2), &["l"]).unwrap();
        let c = TameOp::new("c", q(l3), &["beta"]).unwrap();
        prop_assert_eq!(&a.then(&b).loss, &(qf(l1, d1) + qf(l2, d2)));
        prop_assert_eq!(a.then(&b).then(&c).loss, a.then(&b.then(&c)).loss);
        prop_assert_eq!(a.then(&b).const_class, b.then(&a).const_class);
        let p = a.parallel(&b);
        prop_assert!(p.loss >= a.loss && p.loss >= b.loss);
        prop_assert!(p.loss == a.loss || p.loss == b.loss);
    }

    #[test]
    fn chain_monotone(d in 1i64..300, b in 0i64..20, l in 0i64..1000, l1 in 0i64..1000) {
        let c = constant_chain(q(d), q(b), q(l), q(l1)).unwrap();
        prop_assert!(c.sigma < c.sigma0);
        prop_assert!(c.sigma0 < c.sigma1 && c.sigma1 < c.sigma2);
        prop_assert!(c.varrho > c.sigma2);
        let bigger = constant_chain(q(d + 1), q(b), q(l), q(l1)).unwrap();
        prop_assert!(bigger.varrho >= c.varrho);
        let more_beta = constant_chain(q(d), q(b + 1), q(l), q(l1)).unwrap();
        prop_assert!(more_beta.varrho > c.varrho);
    }

    #[test]
    fn functional_calculus_multiplicative(
        chis in prop::collection::btree_set(-500i32..500, 1..10),
        a1 in 0.5f64..20.0, w1 in 1.1f64..4.0, a2 in 0.5f64..20.0, w2 in 1.1f64..4.0,
    ) {
        let comps = chis
            .iter()
            .map(|&c| Component { chi: vec![c as f64 / 10.0], amp: Complex64::new(1.0, -0.5), label: None })
            .collect();
        let xi = AtomicRep::new(1, comps).unwrap();
        let f1 = BumpFunction::new(a1, a1 * w1, 1).unwrap();
        let f2 = BumpFunction::new(a2, a2 * w2, 1).unwrap();
        let two = apply_bump(&f1, &apply_bump(&f2, &xi).unwrap()).unwrap();
        let prod = apply_pi(|t| Complex64::new(f1.eval(t) * f2.eval(t), 0.0), &xi);
        prop_assert!(two.max_diff(&prod) <= 1e-12);
        prop_assert!(two.norm() <= xi.norm() * (1.0 + 1e-12));
    }
}
