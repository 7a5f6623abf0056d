//! The multi-parameter Hecke algebra `ℂ_q[W]` of a right-angled system.
//!
//! Basis products follow `T_s T_w = T_{sw}` when `s ≰ w` and
//! `T_s T_w = T_{sw} + p_s(q) T_w` when `s ≤ w`, with
//! `p_s(q) = q_s^{-1/2}(q_s − 1)`. The parameter lives in [`HeckeAlgebra`];
//! elements are plain coefficient maps, so mixing parameters can only
//! happen by handing an element to the wrong algebra object.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::coxeter::{CoxeterDiagram, Elem, Gen};
use crate::enumeration::{for_each_normal_word, Ball};
use crate::error::{Error, Result};
use crate::growth;
use crate::params::{parse_rational, MultiParameter, SignPattern};
use crate::scalar::Scalar;

/// A finite linear combination `Σ c_w T_w`, zero coefficients pruned,
/// ordered by (length, ShortLex).
#[derive(Clone, PartialEq)]
pub struct HeckeElement<K> {
    terms: BTreeMap<Elem, K>,
}

impl<K: Scalar> HeckeElement<K> {
    pub fn zero() -> Self {
        HeckeElement { terms: BTreeMap::new() }
    }

    pub fn basis(w: Elem) -> Self {
        Self::term(w, K::one())
    }

    pub fn term(w: Elem, c: K) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Elem, K)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Elem, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, w: &Elem) -> K {
        self.terms.get(w).cloned().unwrap_or_else(K::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Elem, &K)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|w|` in the support (0 for the zero element).
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Elem::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone() * k.clone())))
    }

    /// Coefficient list in basis order.
    pub fn to_json(&self, d: &CoxeterDiagram) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| serde_json::json!([d.format(w), c.render()]))
                .collect(),
        )
    }

    pub fn display(&self, d: &CoxeterDiagram) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = *c < K::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&format!("{}*T({})", mag.render(), d.format(w)));
        }
        out
    }
}

impl<K: Scalar> fmt::Debug for HeckeElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Term `(w′, Γ, w″)` of the clique decomposition of `T_w`, with its
/// coefficient `∏_{s∈Γ} p_s(q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliqTerm<K> {
    pub prefix: Elem,
    pub clique: u64,
    pub suffix: Elem,
    pub coefficient: K,
}

/// `ℂ_q[W]` for a fixed diagram and parameter, over the scalar field `K`.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra<K> {
    diagram: CoxeterDiagram,
    q: MultiParameter,
    roots: Vec<K>,
    p: Vec<K>,
}

pub type ExactAlgebra = HeckeAlgebra<crate::params::Rational>;
pub type FloatAlgebra = HeckeAlgebra<f64>;

impl<K: Scalar> HeckeAlgebra<K> {
    /// In exact mode every `q_s` must be the square of a rational.
    pub fn new(d: &CoxeterDiagram, q: &MultiParameter) -> Result<Self> {
        if q.rank() != d.rank() {
            return Err(Error::InvalidArgument("parameter rank differs from diagram rank".into()));
        }
        let roots = d
            .generators()
            .map(|s| {
                K::sqrt_of(q.value(s)).map_err(|e| match e {
                    Error::NotASquare { value, .. } => Error::NotASquare {
                        generator: d.name(s).to_string(),
                        value,
                    },
                    e => e,
                })
            })
            .collect::<Result<Vec<K>>>()?;
        let p = roots.iter().map(|r| r.clone() - K::one() / r.clone()).collect();
        Ok(HeckeAlgebra {
            diagram: d.clone(),
            q: q.clone(),
            roots,
            p,
        })
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn parameter(&self) -> &MultiParameter {
        &self.q
    }

    /// `√q_s`.
    pub fn root(&self, s: Gen) -> &K {
        &self.roots[s as usize]
    }

    /// `p_s(q)`.
    pub fn p(&self, s: Gen) -> &K {
        &self.p[s as usize]
    }

    pub fn one(&self) -> HeckeElement<K> {
        HeckeElement::basis(Elem::identity())
    }

    pub fn t(&self, w: &Elem) -> HeckeElement<K> {
        HeckeElement::basis(w.clone())
    }

    pub fn generator(&self, s: Gen) -> HeckeElement<K> {
        HeckeElement::basis(self.diagram.generator(s))
    }

    /// `T_s · x`.
    pub fn left_generator(&self, s: Gen, x: &HeckeElement<K>) -> HeckeElement<K> {
        let d = &self.diagram;
        let mut out = HeckeElement::zero();
        for (w, c) in &x.terms {
            out.add_term(d.left_mul(s, w), c.clone());
            if d.is_left_descent(s, w) {
                out.add_term(w.clone(), c.clone() * self.p[s as usize].clone());
            }
        }
        out
    }

    /// `x · T_s`, using `T_w T_s = T_{ws}` or `T_{ws} + p_s T_w`.
    pub fn right_generator(&self, x: &HeckeElement<K>, s: Gen) -> HeckeElement<K> {
        let d = &self.diagram;
        let mut out = HeckeElement::zero();
        for (w, c) in &x.terms {
            out.add_term(d.right_mul(w, s), c.clone());
            if d.right_descents(w) >> s & 1 == 1 {
                out.add_term(w.clone(), c.clone() * self.p[s as usize].clone());
            }
        }
        out
    }

    /// `T_v · x`, expanding `v` letter by letter from the right.
    pub fn left_basis(&self, v: &Elem, x: &HeckeElement<K>) -> HeckeElement<K> {
        v.letters()
            .iter()
            .rev()
            .fold(x.clone(), |acc, &s| self.left_generator(s, &acc))
    }

    pub fn mul(&self, a: &HeckeElement<K>, b: &HeckeElement<K>) -> HeckeElement<K> {
        let mut out = HeckeElement::zero();
        for (v, c) in &a.terms {
            for (w, e) in self.left_basis(v, b).terms {
                out.add_term(w, c.clone() * e);
            }
        }
        out
    }

    /// `T_w ↦ T_{w⁻¹}`; coefficients are real, so conjugation is trivial.
    pub fn adjoint(&self, a: &HeckeElement<K>) -> HeckeElement<K> {
        HeckeElement::from_terms(a.terms.iter().map(|(w, c)| (self.diagram.inverse(w), c.clone())))
    }

    /// `τ_q(x)`: the coefficient of `T_e`.
    pub fn trace(&self, a: &HeckeElement<K>) -> K {
        a.coeff(&Elem::identity())
    }

    /// `τ_q(b* a) = Σ_w a_w b_w` (the `T_w` are orthonormal).
    pub fn l2_inner(&self, a: &HeckeElement<K>, b: &HeckeElement<K>) -> K {
        let (small, large) = if a.terms.len() <= b.terms.len() { (a, b) } else { (b, a) };
        small
            .terms
            .iter()
            .filter_map(|(w, c)| large.terms.get(w).map(|e| c.clone() * e.clone()))
            .fold(K::zero(), |acc, x| acc + x)
    }

    /// `‖a‖₂²`.
    pub fn l2_norm_sq(&self, a: &HeckeElement<K>) -> K {
        self.l2_inner(a, a)
    }

    pub fn l2_norm(&self, a: &HeckeElement<K>) -> f64 {
        self.l2_norm_sq(a).to_f64().sqrt()
    }

    /// The algebra for `q′ = (q_s^{ε_s})_s`, with roots `r_s^{ε_s}`.
    pub fn flipped_algebra(&self, eps: &SignPattern) -> HeckeAlgebra<K> {
        let roots: Vec<K> = self
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| if eps.is_negative(i as Gen) { K::one() / r.clone() } else { r.clone() })
            .collect();
        let p = roots.iter().map(|r| r.clone() - K::one() / r.clone()).collect();
        HeckeAlgebra {
            diagram: self.diagram.clone(),
            q: self.q.flipped(eps),
            roots,
            p,
        }
    }

    /// Image under `T_s ↦ ε_s T_s^{(q′)}`: on a reduced word this is
    /// `T_w ↦ ε_w T_w^{(q′)}`. The result belongs to
    /// [`flipped_algebra`](Self::flipped_algebra).
    pub fn flip_parameters(&self, a: &HeckeElement<K>, eps: &SignPattern) -> HeckeElement<K> {
        HeckeElement::from_terms(a.terms.iter().map(|(w, c)| {
            let c = if eps.sign_of(w.letters()) < 0 { -c.clone() } else { c.clone() };
            (w.clone(), c)
        }))
    }

    /// `χ_{q_ε}(T_s) = ε_s q_s^{ε_s/2}`.
    pub fn char_generator(&self, eps: &SignPattern, s: Gen) -> K {
        let r = &self.roots[s as usize];
        if eps.is_negative(s) {
            -(K::one() / r.clone())
        } else {
            r.clone()
        }
    }

    /// `χ_{q_ε}(T_w) = ∏ ε_s q_s^{ε_s/2}` over the letters of `w`.
    pub fn char_basis(&self, eps: &SignPattern, w: &Elem) -> K {
        w.letters()
            .iter()
            .fold(K::one(), |acc, &s| acc * self.char_generator(eps, s))
    }

    pub fn char_value(&self, eps: &SignPattern, a: &HeckeElement<K>) -> K {
        a.terms
            .iter()
            .fold(K::zero(), |acc, (w, c)| acc + c.clone() * self.char_basis(eps, w))
    }

    /// `1/W(|q_ε|)` with `|q_ε| = (q_s^{ε_s})_s`; requires `ρ(|q_ε|) < 1`.
    pub fn projection_normalizer(&self, eps: &SignPattern) -> Result<K> {
        let w = growth::growth_value(&self.diagram, &self.q.flipped(eps))?;
        Ok(K::from_rational(&w.recip()))
    }

    /// `E^{(i)} = (1/W(|q_ε|)) Σ_{|w| ≤ i} χ_{q_ε}(T_w) T_w`.
    pub fn central_projection_partial(&self, eps: &SignPattern, i: usize) -> Result<HeckeElement<K>> {
        let norm = self.projection_normalizer(eps)?;
        let mut out = HeckeElement::term(Elem::identity(), norm.clone());
        for_each_normal_word(&self.diagram, i, |letters| {
            let w = Elem::from_normal_word(letters.to_vec());
            let c = self.char_basis(eps, &w) * norm.clone();
            out.add_term(w, c);
        });
        Ok(out)
    }

    /// All `(w′, Γ, w″)` with `w = w′·(∏Γ)·w″` length-additive, `Γ` a clique,
    /// and `|w′t| > |w′|` for every `t ∉ Γ` commuting with all of `Γ`.
    pub fn cliq_decomposition(&self, w: &Elem) -> Vec<CliqTerm<K>> {
        let d = &self.diagram;
        let mut out = Vec::new();
        for prefix in d.prefixes(w) {
            let rest = d.multiply(&d.inverse(&prefix), w);
            let desc = d.left_descents(&rest);
            let right = d.right_descents(&prefix);
            // subsets of the left descents of the rest, which pairwise commute
            let mut sub = desc;
            loop {
                let gamma = sub;
                let mut centralizer = full(d.rank()) & !gamma;
                let mut m = gamma;
                while m != 0 {
                    let s = m.trailing_zeros() as Gen;
                    m &= m - 1;
                    centralizer &= d.commute_mask(s);
                }
                if centralizer & right == 0 {
                    let letters = mask_letters(gamma);
                    let suffix = d.multiply(&d.normal_form(&letters), &rest);
                    let coefficient = letters
                        .iter()
                        .fold(K::one(), |acc, &s| acc * self.p[s as usize].clone());
                    out.push(CliqTerm {
                        prefix: prefix.clone(),
                        clique: gamma,
                        suffix,
                        coefficient,
                    });
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & desc;
            }
        }
        out.sort_by(|a, b| (&a.prefix, a.clique, &a.suffix).cmp(&(&b.prefix, b.clique, &b.suffix)));
        out
    }

    /// Parses literals such as `1*T(e) - 3/2*T(a) + T(ab)`; a bare number
    /// is a multiple of `T(e)`.
    pub fn parse_element(&self, text: &str) -> Result<HeckeElement<K>> {
        let bad = |m: &str| Error::MalformedElement(format!("{m} in `{text}`"));
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut depth = 0i32;
        let mut last_sig: Option<char> = None;
        for ch in text.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let splits = (ch == '+' || ch == '-') && depth == 0 && matches!(last_sig, None | Some(')'));
            if splits {
                if last_sig.is_some() {
                    terms.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
                last_sig = Some(ch);
                continue;
            }
            if !ch.is_whitespace() {
                last_sig = Some(ch);
            }
            current.push(ch);
        }
        if depth != 0 {
            return Err(bad("unbalanced parentheses"));
        }
        terms.push((negative, current));
        let mut out = HeckeElement::zero();
        for (neg, body) in terms {
            let body = body.trim();
            if body.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, word) = match body.find("T(") {
                Some(k) => {
                    if !body.ends_with(')') {
                        return Err(bad("expected `)`"));
                    }
                    let word = &body[k + 2..body.len() - 1];
                    let c = body[..k].trim().trim_end_matches('*').trim();
                    let c = if c.is_empty() { crate::params::int(1) } else { parse_rational(c)? };
                    (c, self.diagram.parse_elem(word)?)
                }
                None => (parse_rational(body)?, Elem::identity()),
            };
            let c = K::from_rational(&coef);
            out.add_term(word, if neg { -c } else { c });
        }
        Ok(out)
    }

    /// A seeded random element with `terms` basis terms drawn from the ball
    /// and integer coefficients in `[−range, range]`.
    pub fn random_element<R: Rng>(&self, ball: &Ball, terms: usize, range: i64, rng: &mut R) -> HeckeElement<K> {
        let mut out = HeckeElement::zero();
        for _ in 0..terms {
            let w = ball.element(rng.gen_range(0..ball.len())).clone();
            let c = rng.gen_range(-range..=range);
            out.add_term(w, K::from_rational(&crate::params::int(c)));
        }
        out
    }
}

fn full(rank: usize) -> u64 {
    if rank == 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

fn mask_letters(mut m: u64) -> Vec<Gen> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as Gen);
        m &= m - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::enumeration::ball;
    use crate::params::{int, rat, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact(d: &CoxeterDiagram, v: Rational) -> ExactAlgebra {
        HeckeAlgebra::new(d, &MultiParameter::uniform(d, v).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_relation_example() {
        let d = catalog::diagram_a();
        let h = exact(&d, rat(1, 4));
        let ta = h.generator(0);
        let sq = h.mul(&ta, &ta);
        assert_eq!(sq, h.parse_element("1*T(e) - 3/2*T(a)").unwrap());
        let x = h.parse_element("2*T(ab) - T(c) + 1/3").unwrap();
        assert_eq!(h.mul(&h.one(), &x), x);
        let tab = h.t(&d.parse_elem("ab").unwrap());
        let got = h.mul(&tab, &ta);
        let want = h.parse_element("T(b) - 3/2*T(ab)").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn not_a_square_is_rejected() {
        let d = catalog::d_infinity();
        let err = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::uniform(&d, rat(1, 2)).unwrap()).unwrap_err();
        assert_eq!(err, Error::NotASquare { generator: "a".into(), value: "1/2".into() });
        assert!(HeckeAlgebra::<f64>::new(&d, &MultiParameter::uniform(&d, rat(1, 2)).unwrap()).is_ok());
    }

    #[test]
    fn adjoint_examples() {
        let d = catalog::diagram_a();
        let h = exact(&d, rat(1, 4));
        let ac = h.t(&d.parse_elem("ac").unwrap());
        assert_eq!(h.adjoint(&ac), h.t(&d.parse_elem("ca").unwrap()));
        let ab = h.t(&d.parse_elem("ab").unwrap());
        assert_eq!(h.adjoint(&ab), ab);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = ball(&d, 3).unwrap();
        for _ in 0..20 {
            let x = h.random_element(&b, 4, 3, &mut rng);
            let y = h.random_element(&b, 4, 3, &mut rng);
            assert_eq!(h.adjoint(&h.adjoint(&x)), x);
            assert_eq!(h.adjoint(&h.mul(&x, &y)), h.mul(&h.adjoint(&y), &h.adjoint(&x)));
            assert_eq!(h.l2_inner(&x, &y), h.trace(&h.mul(&h.adjoint(&y), &x)));
        }
    }

    #[test]
    fn flip_of_a_single_generator() {
        let d = catalog::free_product(1);
        let h = exact(&d, rat(1, 4));
        let eps = SignPattern::all_negative(1);
        let g = h.flipped_algebra(&eps);
        assert_eq!(*g.p(0), -h.p(0).clone());
        let x = h.flip_parameters(&h.generator(0), &eps);
        assert_eq!(x, g.generator(0).scale(&int(-1)));
        let lhs = g.mul(&x, &x);
        let rhs = g.one().add(&x.scale(h.p(0)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn characters_of_a_generator() {
        let d = catalog::free_product(1);
        let h = exact(&d, rat(1, 4));
        assert_eq!(h.char_value(&SignPattern::all_positive(1), &h.generator(0)), rat(1, 2));
        assert_eq!(h.char_value(&SignPattern::all_negative(1), &h.generator(0)), int(-2));
        assert_eq!(h.char_value(&SignPattern::all_negative(1), &h.one()), int(1));
    }

    #[test]
    fn central_projection_start() {
        let d = catalog::free_product(3);
        let h = exact(&d, rat(1, 4));
        let eps = SignPattern::all_positive(3);
        let e0 = h.central_projection_partial(&eps, 0).unwrap();
        assert_eq!(e0, HeckeElement::term(Elem::identity(), rat(2, 5)));
        let e3 = h.central_projection_partial(&eps, 3).unwrap();
        assert_eq!(h.trace(&e3), rat(2, 5));
        assert_eq!(e3.support_len(), 1 + 3 + 6 + 12);
        assert!(h.central_projection_partial(&SignPattern::all_negative(3), 2).is_err());
    }

    #[test]
    fn cliq_decomposition_examples() {
        let d = catalog::diagram_a();
        let h = exact(&d, rat(1, 4));
        let e = h.cliq_decomposition(&Elem::identity());
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].coefficient, int(1));
        let a = h.cliq_decomposition(&d.parse_elem("a").unwrap());
        assert_eq!(a.len(), 2);
        let ab = h.cliq_decomposition(&d.parse_elem("ab").unwrap());
        let shown: Vec<(String, u64, String, Rational)> = ab
            .iter()
            .map(|t| (d.format(&t.prefix), t.clique, d.format(&t.suffix), t.coefficient.clone()))
            .collect();
        let p = rat(-3, 2);
        assert_eq!(
            shown,
            [
                ("e".to_string(), 0, "ab".to_string(), int(1)),
                ("e".to_string(), 1, "b".to_string(), p.clone()),
                ("e".to_string(), 2, "a".to_string(), p.clone()),
                ("e".to_string(), 3, "e".to_string(), &p * &p),
            ]
        );
    }

    #[test]
    fn element_literals() {
        let d = catalog::diagram_a();
        let h = exact(&d, int(1));
        let x = h.parse_element("-T(a) + 2.5*T(cb) - 1e-1").unwrap();
        assert_eq!(x.coeff(&d.parse_elem("a").unwrap()), int(-1));
        assert_eq!(x.coeff(&d.parse_elem("cb").unwrap()), rat(5, 2));
        assert_eq!(x.coeff(&Elem::identity()), rat(-1, 10));
        assert_eq!(h.parse_element(&x.display(&d)).unwrap(), x);
        assert!(h.parse_element("T(z)").is_err());
        assert!(h.parse_element("2*T(a").is_err());
    }
}
