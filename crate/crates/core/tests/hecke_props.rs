use proptest::prelude::*;
use rahecke::catalog;
use rahecke::hecke::{HeckeAlgebra, HeckeElement};
use rahecke::params::{int, rat, Rational};
use rahecke::{CoxeterDiagram, MultiParameter, SignPattern};

fn algebra(d: &CoxeterDiagram, choice: &[usize]) -> HeckeAlgebra<Rational> {
    let pool = [rat(1, 4), int(9), rat(4, 9), int(1), rat(1, 9)];
    let values = d.generators().map(|s| pool[choice[s as usize] % pool.len()].clone()).collect();
    HeckeAlgebra::new(d, &MultiParameter::new(d, values).unwrap()).unwrap()
}

fn element(d: &CoxeterDiagram, raw: &[(Vec<u8>, i8)]) -> HeckeElement<Rational> {
    let r = d.rank() as u8;
    HeckeElement::from_terms(raw.iter().map(|(w, c)| {
        let letters: Vec<_> = w.iter().map(|&s| s % r).collect();
        (d.normal_form(&letters), int(*c as i64))
    }))
}

fn raw_element() -> impl Strategy<Value = Vec<(Vec<u8>, i8)>> {
    prop::collection::vec((prop::collection::vec(0u8..5, 0..=5), -4i8..=4), 0..=4)
}

fn diagrams() -> [CoxeterDiagram; 3] {
    [catalog::diagram_a(), catalog::pentagon(), catalog::free_product(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(
        which in 0usize..3,
        choice in prop::collection::vec(0usize..5, 5),
        a in raw_element(), b in raw_element(), c in raw_element(),
    ) {
        let d = &diagrams()[which];
        let alg = algebra(d, &choice);
        let (a, b, c) = (element(d, &a), element(d, &b), element(d, &c));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn quadratic_relation(which in 0usize..3, choice in prop::collection::vec(0usize..5, 5), s in 0u8..5) {
        let d = &diagrams()[which];
        let alg = algebra(d, &choice);
        let s = s % d.rank() as u8;
        let t = alg.generator(s);
        let rhs = alg.one().add(&t.scale(alg.p(s)));
        prop_assert_eq!(alg.mul(&t, &t), rhs);
    }

    #[test]
    fn inner_product_is_positive_and_adjoint_compatible(
        which in 0usize..3,
        choice in prop::collection::vec(0usize..5, 5),
        a in raw_element(), b in raw_element(), c in raw_element(),
    ) {
        let d = &diagrams()[which];
        let alg = algebra(d, &choice);
        let (a, b, c) = (element(d, &a), element(d, &b), element(d, &c));
        let n = alg.l2_norm_sq(&a);
        prop_assert!(n >= int(0));
        prop_assert_eq!(n == int(0), a.is_zero());
        // <ab, c> = <b, a*c>
        prop_assert_eq!(alg.l2_inner(&alg.mul(&a, &b), &c), alg.l2_inner(&b, &alg.mul(&alg.adjoint(&a), &c)));
    }

    #[test]
    fn characters_are_multiplicative_and_flip_compatible(
        which in 0usize..3,
        choice in prop::collection::vec(0usize..5, 5),
        mask in 0u64..32,
        a in raw_element(), b in raw_element(),
    ) {
        let d = &diagrams()[which];
        let alg = algebra(d, &choice);
        let eps = SignPattern::from_mask(d.rank(), mask & ((1 << d.rank()) - 1));
        let (a, b) = (element(d, &a), element(d, &b));
        prop_assert_eq!(
            alg.char_value(&eps, &alg.mul(&a, &b)),
            alg.char_value(&eps, &a) * alg.char_value(&eps, &b)
        );
        let flipped = alg.flipped_algebra(&eps);
        let plus = SignPattern::all_positive(d.rank());
        prop_assert_eq!(alg.char_value(&eps, &a), flipped.char_value(&plus, &alg.flip_parameters(&a, &eps)));
        prop_assert_eq!(
            alg.flip_parameters(&alg.mul(&a, &b), &eps),
            flipped.mul(&alg.flip_parameters(&a, &eps), &alg.flip_parameters(&b, &eps))
        );
    }
}

#[test]
fn partial_projections_have_the_expected_trace_and_character() {
    // Inside the region the partial sums have trace 1/W and their character
    // value tends to 1.
    let d = catalog::free_product(3);
    let alg = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::uniform(&d, rat(1, 4)).unwrap()).unwrap();
    let eps = SignPattern::all_positive(3);
    let w = alg.projection_normalizer(&eps).unwrap();
    let mut last = f64::INFINITY;
    for i in [4, 8, 12] {
        let e = alg.central_projection_partial(&eps, i).unwrap();
        assert_eq!(alg.trace(&e), w);
        let gap = (1.0 - rahecke::params::to_f64(&alg.char_value(&eps, &e))).abs();
        assert!(gap < last, "i = {i}");
        last = gap;
    }
    assert!(last < 1e-3);
}
