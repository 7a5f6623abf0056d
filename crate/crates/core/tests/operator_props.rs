use std::sync::Arc;

use proptest::prelude::*;
use rahecke::catalog;
use rahecke::enumeration::{ball, Ball};
use rahecke::hecke::{HeckeAlgebra, HeckeElement};
use rahecke::operator::{op_norm, proj_p, rep_hecke, TruncatedOperator};
use rahecke::params::{int, rat, Rational};
use rahecke::{CoxeterDiagram, Elem, MultiParameter};

fn element(d: &CoxeterDiagram, raw: &[(Vec<u8>, i8)]) -> HeckeElement<Rational> {
    let r = d.rank() as u8;
    HeckeElement::from_terms(raw.iter().map(|(w, c)| {
        let letters: Vec<_> = w.iter().map(|&s| s % r).collect();
        (d.normal_form(&letters), int(*c as i64))
    }))
}

fn raw_element() -> impl Strategy<Value = Vec<(Vec<u8>, i8)>> {
    prop::collection::vec((prop::collection::vec(0u8..3, 0..=3), -3i8..=3), 1..=3)
}

fn setup(q: Rational, radius: usize) -> (HeckeAlgebra<Rational>, Arc<Ball>) {
    let d = catalog::diagram_a();
    let alg = HeckeAlgebra::new(&d, &MultiParameter::uniform(&d, q).unwrap()).unwrap();
    (alg, Arc::new(ball(&d, radius).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn representation_is_multiplicative(a in raw_element(), b in raw_element(), qi in 0usize..3) {
        let (alg, b7) = setup([rat(1, 4), int(9), int(1)][qi].clone(), 7);
        let d = alg.diagram().clone();
        let (a, b) = (element(&d, &a), element(&d, &b));
        let lhs = rep_hecke(&alg, &a, &b7).mul(&rep_hecke(&alg, &b, &b7));
        let rhs = rep_hecke(&alg, &alg.mul(&a, &b), &b7);
        prop_assert!(lhs.joint_radius(&rhs) >= 1);
        prop_assert!(lhs.agrees_on_domain(&rhs));
    }

    #[test]
    fn columns_are_right_translates(a in raw_element()) {
        let (alg, b5) = setup(rat(1, 4), 5);
        let a = element(alg.diagram(), &a);
        let x = rep_hecke(&alg, &a, &b5);
        for (j, v) in b5.elements().iter().enumerate() {
            let image = alg.mul(&a, &alg.t(v));
            for (i, w) in b5.elements().iter().enumerate() {
                prop_assert_eq!(x.entry(i, j), image.coeff(w));
            }
        }
    }

    #[test]
    fn norms_grow_with_the_ball(a in raw_element()) {
        let (alg, _) = setup(rat(1, 4), 0);
        let a = element(alg.diagram(), &a);
        let mut last = 0.0;
        for n in 2..=6 {
            let bn = Arc::new(ball(alg.diagram(), n).unwrap());
            let norm = op_norm(&rep_hecke(&alg, &a, &bn));
            prop_assert!(norm >= last - 1e-9, "n = {}: {} < {}", n, norm, last);
            last = norm;
        }
        // the operator norm dominates the l2 norm once the support fits
        prop_assert!(last >= alg.l2_norm(&a) - 1e-9);
    }
}

#[test]
fn projections_are_idempotent_and_meet_by_join() {
    let d = catalog::diagram_a();
    let b = Arc::new(ball(&d, 5).unwrap());
    let ws: Vec<Elem> = ["", "a", "c", "ab", "cb", "acb"].iter().map(|w| d.parse_elem(w).unwrap()).collect();
    for v in &ws {
        let pv: TruncatedOperator<Rational> = proj_p(v, &b);
        assert!(pv.mul(&pv).agrees_on_domain(&pv));
        assert!(pv.is_symmetric());
        for w in &ws {
            let pw = proj_p(w, &b);
            let expected = match d.join(v, w) {
                Some(j) => proj_p(&j, &b),
                None => TruncatedOperator::zero(&b),
            };
            assert!(pv.mul(&pw).agrees_on_domain(&expected), "{} {}", d.format(v), d.format(w));
        }
    }
}
