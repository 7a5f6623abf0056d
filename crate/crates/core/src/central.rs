//! Partial sums of the central projections `E_{q,ε}`: their ℓ²-residuals,
//! mutual inner products, and the character growth witness.
//!
//! The residuals of `T_s E^{(i)} − χ(T_s) E^{(i)}` only involve the two
//! boundary spheres and reduce to weighted sphere sums. For free products
//! with a uniform parameter the partial sums live in the commutative algebra
//! spanned by the sphere sums `h_m = Σ_{|w|=m} T_w`, where `E² − E` can be
//! computed to large `i` without expanding into group elements.

use num_traits::{One, Zero};

use crate::coxeter::Gen;
use crate::enumeration::weighted_sphere_sums;
use crate::error::{Error, Result};
use crate::growth::sphere_weights_from_series;
use crate::hecke::HeckeAlgebra;
use crate::params::{Rational, SignPattern};

/// `‖T_s E^{(i)} − χ(T_s) E^{(i)}‖₂²`.
///
/// Only words of length `i+1` starting with `s` and words of length `i` not
/// starting with `s` survive, which gives `W⁻² (1 + |q_ε|_s) B_i` with
/// `B_l = Σ_{|v|=l, s≰v} |q_ε|_v`.
pub fn generator_residual_sq(alg: &HeckeAlgebra<Rational>, eps: &SignPattern, s: Gen, i: usize) -> Result<Rational> {
    let d = alg.diagram();
    let abs = alg.parameter().flipped(eps);
    let norm = alg.projection_normalizer(eps)?;
    let a = sphere_weights_from_series(d, &abs, i);
    let qs = abs.value(s);
    let mut b = Rational::one();
    for a_l in &a[1..] {
        b = a_l - qs * &b;
    }
    Ok(&norm * &norm * (Rational::one() + qs) * b)
}

/// `⟨E^{(i)}_ε, E^{(i)}_{ε′}⟩₂ = W_ε⁻¹ W_{ε′}⁻¹ Σ_{|w|≤i} χ_ε(T_w) χ_{ε′}(T_w)`.
pub fn projection_inner(alg: &HeckeAlgebra<Rational>, eps: &SignPattern, other: &SignPattern, i: usize) -> Result<Rational> {
    let d = alg.diagram();
    let n1 = alg.projection_normalizer(eps)?;
    let n2 = alg.projection_normalizer(other)?;
    let z: Vec<Rational> = d
        .generators()
        .map(|s| alg.char_generator(eps, s) * alg.char_generator(other, s))
        .collect();
    let total = weighted_sphere_sums(d, &z, i).into_iter().fold(Rational::zero(), |a, x| a + x);
    Ok(n1 * n2 * total)
}

/// `|χ(h_l)|² / (l² ‖h_l‖₂²)` for `h_l = Σ_{|w|=l} χ(T_w) T_w`. Both
/// numerator and `‖h_l‖₂²` equal the sphere weight `a_l(|q_ε|)`, so the
/// value is `a_l(|q_ε|)/l²`.
pub fn character_witness_ratio_sq(alg: &HeckeAlgebra<Rational>, eps: &SignPattern, l: usize) -> Result<Rational> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    let a = sphere_weights_from_series(alg.diagram(), &alg.parameter().flipped(eps), l);
    Ok(&a[l] / Rational::from_integer((l * l).into()))
}

/// Radial part of the Hecke algebra of the free product of `n` order-two
/// groups with one parameter: elements are coefficient vectors on `h_m`.
#[derive(Clone, Debug)]
pub struct RadialAlgebra {
    n: usize,
    p: Rational,
}

impl RadialAlgebra {
    /// `p = q^{-1/2}(q − 1)`, the common structure constant of `T_s² = 1 + p T_s`.
    pub fn new(n: usize, p: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("need at least two generators".into()));
        }
        Ok(RadialAlgebra { n, p })
    }

    pub fn from_algebra(alg: &HeckeAlgebra<Rational>) -> Result<Self> {
        let d = alg.diagram();
        let free = d.generators().all(|s| d.commute_mask(s) == 0);
        let uniform = alg.parameter().values().windows(2).all(|v| v[0] == v[1]);
        if !free || !uniform {
            return Err(Error::InvalidArgument("radial algebra needs a free product with one parameter".into()));
        }
        RadialAlgebra::new(d.rank(), alg.p(0).clone())
    }

    /// `#{|w| = m}`.
    pub fn sphere_size(&self, m: usize) -> Rational {
        if m == 0 {
            Rational::one()
        } else {
            Rational::from_integer((self.n as i64).into()) * num_traits::pow(Rational::from_integer((self.n as i64 - 1).into()), m - 1)
        }
    }

    /// `h_1 · y`, using `h_1 h_m = h_{m+1} + p h_m + c_m h_{m−1}` with
    /// `c_1 = n` and `c_m = n − 1` for `m ≥ 2`.
    pub fn mul_h1(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); y.len() + 1];
        for (m, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if m == 0 {
                out[1] += c;
                continue;
            }
            out[m + 1] += c;
            out[m] += &self.p * c;
            let back = if m == 1 { self.n } else { self.n - 1 };
            out[m - 1] += Rational::from_integer((back as i64).into()) * c;
        }
        trim(out)
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = vec![];
        let mut prev: Vec<Rational> = vec![];
        let mut cur: Vec<Rational> = y.to_vec();
        for (m, c) in x.iter().enumerate() {
            if m > 0 {
                let mut next = self.mul_h1(&cur);
                if m > 1 {
                    let back = if m == 2 { self.n } else { self.n - 1 };
                    add_scaled(&mut next, &cur, &-self.p.clone());
                    add_scaled(&mut next, &prev, &-Rational::from_integer((back as i64).into()));
                }
                prev = std::mem::replace(&mut cur, trim(next));
            }
            add_scaled(&mut out, &cur, c);
        }
        trim(out)
    }

    pub fn norm_sq(&self, z: &[Rational]) -> Rational {
        z.iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (m, c)| acc + c * c * self.sphere_size(m))
    }

    /// Radial coefficients of `E^{(i)}` for a uniform character value `χ`.
    pub fn projection(&self, normalizer: &Rational, chi: &Rational, i: usize) -> Vec<Rational> {
        (0..=i).map(|m| normalizer * num_traits::pow(chi.clone(), m)).collect()
    }

    /// `‖(E^{(i)})² − E^{(i)}‖₂²` for `i = 0..=max_i`.
    pub fn idempotency_residuals_sq(&self, normalizer: &Rational, chi: &Rational, max_i: usize) -> Vec<Rational> {
        (0..=max_i)
            .map(|i| {
                let e = self.projection(normalizer, chi, i);
                let mut sq = self.mul(&e, &e);
                add_scaled(&mut sq, &e, &-Rational::one());
                self.norm_sq(&sq)
            })
            .collect()
    }
}

fn add_scaled(out: &mut Vec<Rational>, x: &[Rational], c: &Rational) {
    if out.len() < x.len() {
        out.resize(x.len(), Rational::zero());
    }
    for (o, v) in out.iter_mut().zip(x) {
        *o += c * v;
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hecke::HeckeElement;
    use crate::params::{int, rat, MultiParameter};

    fn free3(q: Rational) -> HeckeAlgebra<Rational> {
        let d = catalog::free_product(3);
        HeckeAlgebra::new(&d, &MultiParameter::uniform(&d, q).unwrap()).unwrap()
    }

    fn radial_to_element(alg: &HeckeAlgebra<Rational>, z: &[Rational]) -> HeckeElement<Rational> {
        let mut out = HeckeElement::term(crate::Elem::identity(), z[0].clone());
        crate::enumeration::for_each_normal_word(alg.diagram(), z.len().saturating_sub(1), |w| {
            out.add_term(crate::Elem::from_normal_word(w.to_vec()), z[w.len()].clone());
        });
        out
    }

    #[test]
    fn generator_residual_matches_expansion() {
        let alg = free3(rat(1, 4));
        let eps = SignPattern::all_positive(3);
        for i in 0..5 {
            let e = alg.central_projection_partial(&eps, i).unwrap();
            let r = alg.mul(&alg.generator(0), &e).sub(&e.scale(&rat(1, 2)));
            let exact = generator_residual_sq(&alg, &eps, 0, i).unwrap();
            assert_eq!(alg.l2_norm_sq(&r), exact);
            assert_eq!(exact, rat(1, 5) * num_traits::pow(rat(1, 2), i));
        }
        let d = catalog::diagram_a();
        let alg = HeckeAlgebra::new(&d, &MultiParameter::new(&d, vec![rat(1, 4), rat(1, 9), rat(1, 9)]).unwrap()).unwrap();
        for s in 0..3 {
            for i in 0..4 {
                let e = alg.central_projection_partial(&eps, i).unwrap();
                let chi = alg.char_generator(&eps, s);
                let r = alg.mul(&alg.generator(s), &e).sub(&e.scale(&chi));
                assert_eq!(alg.l2_norm_sq(&r), generator_residual_sq(&alg, &eps, s, i).unwrap());
            }
        }
    }

    #[test]
    fn radial_product_matches_hecke_product() {
        let alg = free3(rat(1, 4));
        let radial = RadialAlgebra::from_algebra(&alg).unwrap();
        let x = vec![int(1), rat(-2, 3), int(3)];
        let y = vec![rat(1, 2), int(0), int(1), int(-1)];
        let lhs = radial_to_element(&alg, &radial.mul(&x, &y));
        let rhs = alg.mul(&radial_to_element(&alg, &x), &radial_to_element(&alg, &y));
        assert_eq!(lhs, rhs);
        assert_eq!(radial.norm_sq(&y), alg.l2_norm_sq(&radial_to_element(&alg, &y)));
    }

    #[test]
    fn idempotency_residuals_match_expansion() {
        let alg = free3(rat(1, 4));
        let eps = SignPattern::all_positive(3);
        let radial = RadialAlgebra::from_algebra(&alg).unwrap();
        let n = alg.projection_normalizer(&eps).unwrap();
        let res = radial.idempotency_residuals_sq(&n, &rat(1, 2), 4);
        for (i, r) in res.iter().enumerate() {
            let e = alg.central_projection_partial(&eps, i).unwrap();
            assert_eq!(&alg.l2_norm_sq(&alg.mul(&e, &e).sub(&e)), r);
        }
    }

    #[test]
    fn inner_products() {
        let alg = free3(rat(1, 4));
        let eps = SignPattern::all_positive(3);
        let e = alg.central_projection_partial(&eps, 3).unwrap();
        assert_eq!(projection_inner(&alg, &eps, &eps, 3).unwrap(), alg.l2_norm_sq(&e));
        assert!(projection_inner(&alg, &eps, &SignPattern::all_negative(3), 3).is_err());
        let d = catalog::free_product(3);
        let alg = HeckeAlgebra::new(&d, &MultiParameter::new(&d, vec![int(1), rat(1, 9), rat(1, 9)]).unwrap()).unwrap();
        let other = SignPattern::parse(3, "-++").unwrap();
        let e1 = alg.central_projection_partial(&eps, 4).unwrap();
        let e2 = alg.central_projection_partial(&other, 4).unwrap();
        assert_eq!(projection_inner(&alg, &eps, &other, 4).unwrap(), alg.l2_inner(&e1, &e2));
    }

    #[test]
    fn witness_ratio() {
        let alg = free3(int(1));
        let eps = SignPattern::all_positive(3);
        for l in 1..6 {
            let expected = Rational::from_integer((3 * (1i64 << (l - 1))).into()) / Rational::from_integer(((l * l) as i64).into());
            assert_eq!(character_witness_ratio_sq(&alg, &eps, l).unwrap(), expected);
        }
    }
}
