use proptest::prelude::*;
use rahecke::catalog;
use rahecke::enumeration::{restricted_sphere_weight, sphere_weight};
use rahecke::growth::{growth_reciprocal, pole_and_rho, region_membership, Region};
use rahecke::params::{int, rat, to_f64, Rational};
use rahecke::{CoxeterDiagram, MultiParameter};

fn params(d: &CoxeterDiagram, raw: &[(i64, i64)]) -> MultiParameter {
    let values = d.generators().map(|s| {
        let (n, m) = raw[s as usize % raw.len()];
        rat(n, m)
    });
    MultiParameter::new(d, values.collect()).unwrap()
}

fn raw_params() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..12, 1i64..12), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sphere_weights_are_submultiplicative(which in 0usize..16, raw in raw_params(), l in 1usize..6, m in 1usize..6) {
        let ds = catalog::connected_corpus(4);
        let d = &ds[which % ds.len()];
        let q = params(d, &raw);
        prop_assert!(sphere_weight(d, &q, l + m) <= sphere_weight(d, &q, l) * sphere_weight(d, &q, m));
    }

    #[test]
    fn rho_is_homogeneous_along_rays(which in 0usize..16, raw in raw_params(), t in (1i64..9, 1i64..9)) {
        let ds = catalog::connected_corpus(4);
        let d = &ds[which % ds.len()];
        let q = params(d, &raw);
        let t = rat(t.0, t.1);
        let base = pole_and_rho(d, &q).rho;
        let scaled = pole_and_rho(d, &q.scaled(&t)).rho;
        // intervals for ρ(tq) and tρ(q) must overlap
        prop_assert!(scaled.lo <= &base.hi * &t && &base.lo * &t <= scaled.hi);
    }

    #[test]
    fn the_region_is_open(which in 0usize..16, raw in raw_params()) {
        let ds = catalog::connected_corpus(4);
        let d = &ds[which % ds.len()];
        let q = params(d, &raw);
        let report = pole_and_rho(d, &q);
        if report.region == Region::Interior && report.rho.hi < int(1) && report.rho.hi > int(0) {
            // any t with tρ < 1 stays inside
            let t = (report.rho.hi.recip() + int(1)) / int(2);
            prop_assert_eq!(region_membership(d, &q.scaled(&t)), Region::Interior);
        }
    }
}

#[test]
fn fekete_limit_is_approached() {
    let d = catalog::diagram_a();
    let q = MultiParameter::uniform(&d, int(1)).unwrap();
    let rho = to_f64(&pole_and_rho(&d, &q).rho.hi);
    assert!((rho - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    let a20 = to_f64(&sphere_weight(&d, &q, 20)).powf(1.0 / 20.0);
    assert!(a20 >= rho * (1.0 - 1e-12));
    assert!((a20 - rho) / rho < 0.05, "a_20^(1/20) = {a20}, rho = {rho}");
}

#[test]
fn reducible_series_multiply() {
    let d = CoxeterDiagram::new(&["a", "b", "c", "x", "y"], &[("a", "x"), ("a", "y"), ("b", "x"), ("b", "y"), ("c", "x"), ("c", "y")]).unwrap();
    let comps = d.components();
    assert_eq!(comps.len(), 2);
    let values: Vec<Rational> = vec![rat(1, 3), rat(2, 5), int(1), rat(1, 7), int(2)];
    let q = MultiParameter::new(&d, values.clone()).unwrap();
    let mut product = int(1);
    for mask in d.component_masks() {
        let sub = d.sub_diagram(mask);
        let sub_values = (0..d.rank()).filter(|i| mask >> i & 1 == 1).map(|i| values[i].clone()).collect();
        product *= growth_reciprocal(&sub, &MultiParameter::new(&sub, sub_values).unwrap());
    }
    assert_eq!(growth_reciprocal(&d, &q), product);
}

#[test]
fn restricted_growth_matches_full_growth() {
    let d = catalog::diagram_a();
    let q = MultiParameter::uniform(&d, int(1)).unwrap();
    let full = to_f64(&sphere_weight(&d, &q, 20)).powf(1.0 / 20.0);
    for s in d.generators() {
        let g = d.generator(s);
        let restricted = to_f64(&restricted_sphere_weight(&d, &q, 20, &g)).powf(1.0 / 20.0);
        assert!((restricted / full - 1.0).abs() < 0.05, "{}: {restricted} vs {full}", d.format(&g));
    }
    // Longer prefixes: the restricted share of the sphere stays bounded
    // below, so the l-th roots still agree in the limit.
    for g in ["ab", "acbc"] {
        let g = d.parse_elem(g).unwrap();
        let share: Vec<f64> = (12..=20)
            .map(|l| to_f64(&(restricted_sphere_weight(&d, &q, l, &g) / sphere_weight(&d, &q, l))))
            .collect();
        let lo = share.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = share.iter().cloned().fold(0.0, f64::max);
        assert!(lo > 0.0 && hi / lo < 1.2, "{}: {share:?}", d.format(&g));
    }
}
