//! The extension group A x G with multiplication twisted by a 2-cocycle,
//!
//!   (a1, g1) * (a2, g2) = (a1 + g1.a2 + h(g1, g2), g1 g2),
//!
//! plus cocycle-equivalence checking and the braid-flavored computations on
//! the sign cocycle over SL2(Z) (braid relation discrepancy, full twist).

use std::rc::Rc;

use num::{BigInt, BigRational};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{
    asai_cocycle, Action, CocycleError, Cocycle2, CoeffValue,
};
use crate::encode;
use crate::group::{Element, Group, GroupError};
use crate::report::{AuditReport, Violation};
use crate::sample;
use crate::sl2::Mat2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElement {
    pub a: CoeffValue,
    pub g: Element,
}

#[derive(Debug, Clone)]
pub struct ExtGroup {
    cocycle: Cocycle2,
}

impl ExtGroup {
    pub fn new(cocycle: Cocycle2) -> ExtGroup {
        ExtGroup { cocycle }
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    pub fn base(&self) -> &Group {
        self.cocycle.group()
    }

    pub fn coeff(&self) -> &crate::cocycle::CoeffGroup {
        self.cocycle.coeff()
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement { a: self.coeff().zero(), g: self.base().identity() }
    }

    /// The embedded copy of the coefficients: a -> (a, e).
    pub fn embed_coeff(&self, a: &CoeffValue) -> ExtElement {
        ExtElement { a: self.coeff().reduce_value(a), g: self.base().identity() }
    }

    /// The set-theoretic section g -> (0, g).
    pub fn section(&self, g: &Element) -> Result<ExtElement, GroupError> {
        self.base().validate(g)?;
        Ok(ExtElement { a: self.coeff().zero(), g: g.clone() })
    }

    pub fn validate(&self, x: &ExtElement) -> Result<(), GroupError> {
        if x.a.0.len() != self.coeff().rank() {
            return Err(GroupError::Mismatch);
        }
        self.base().validate(&x.g)
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> Result<ExtElement, GroupError> {
        self.validate(x)?;
        self.validate(y)?;
        let coeff = self.coeff();
        let twisted = self.cocycle.act(&x.g, &y.a);
        let h = self.cocycle.eval(&x.g, &y.g);
        let a = coeff.add(&coeff.add(&x.a, &twisted), &h);
        let g = self.base().mul(&x.g, &y.g)?;
        Ok(ExtElement { a, g })
    }

    pub fn inv(&self, x: &ExtElement) -> Result<ExtElement, GroupError> {
        self.validate(x)?;
        let coeff = self.coeff();
        let gi = self.base().inv(&x.g)?;
        let minus = coeff.add(&self.cocycle.act(&gi, &x.a), &self.cocycle.eval(&gi, &x.g));
        Ok(ExtElement { a: coeff.neg(&minus), g: gi })
    }

    pub fn pow(&self, x: &ExtElement, n: i64) -> Result<ExtElement, GroupError> {
        let base = if n < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> ExtElement {
        ExtElement { a: self.coeff().sample(rng), g: self.base().sample(rng) }
    }
}

/// Seeded audit of the group axioms in the extension: associativity on
/// sampled triples, the identity and inverse laws, and the second projection
/// being a homomorphism. Violations are reported with the offending elements
/// in canonical encoding.
pub fn group_axioms_audit(ext: &ExtGroup, samples: u64, seed: u64) -> AuditReport {
    let mut rng = sample::rng(seed);
    let mut report = AuditReport::new();
    let e = ext.identity();
    let enc = |x: &ExtElement| encode::encode_element(&Element::Ext(Box::new(x.clone())));
    let check = |report: &mut AuditReport, inputs: Vec<String>, lhs: &ExtElement, rhs: &ExtElement| {
        report.record_check();
        if lhs != rhs {
            report.record_violation(Violation {
                inputs,
                lhs: enc(lhs),
                rhs: enc(rhs),
            });
        }
    };
    for _ in 0..samples {
        let x = ext.sample(&mut rng);
        let y = ext.sample(&mut rng);
        let z = ext.sample(&mut rng);
        let xy = ext.mul(&x, &y).expect("sampled elements multiply");
        let yz = ext.mul(&y, &z).expect("sampled elements multiply");
        let assoc_l = ext.mul(&xy, &z).expect("sampled elements multiply");
        let assoc_r = ext.mul(&x, &yz).expect("sampled elements multiply");
        check(
            &mut report,
            vec!["assoc".into(), enc(&x), enc(&y), enc(&z)],
            &assoc_l,
            &assoc_r,
        );
        let xe = ext.mul(&x, &e).expect("identity multiplies");
        check(&mut report, vec!["unit-right".into(), enc(&x)], &xe, &x);
        let ex = ext.mul(&e, &x).expect("identity multiplies");
        check(&mut report, vec!["unit-left".into(), enc(&x)], &ex, &x);
        let xi = ext.inv(&x).expect("sampled element inverts");
        let xxi = ext.mul(&x, &xi).expect("inverse multiplies");
        check(&mut report, vec!["inverse-right".into(), enc(&x)], &xxi, &e);
        let xix = ext.mul(&xi, &x).expect("inverse multiplies");
        check(&mut report, vec!["inverse-left".into(), enc(&x)], &xix, &e);
        // Second projection is a homomorphism.
        report.record_check();
        let base_prod = ext.base().mul(&x.g, &y.g).expect("base elements multiply");
        if xy.g != base_prod {
            report.record_violation(Violation {
                inputs: vec!["projection".into(), enc(&x), enc(&y)],
                lhs: encode::encode_element(&xy.g),
                rhs: encode::encode_element(&base_prod),
            });
        }
    }
    report
}

/// A 1-cochain with rational values, used to compare cocycles up to
/// coboundary; torsion coordinates are compared modulo their modulus.
pub type RatCochain = Rc<dyn Fn(&Element) -> Vec<BigRational>>;

fn act_rational(h: &Cocycle2, g: &Element, v: &[BigRational]) -> Vec<BigRational> {
    match h.action() {
        Action::Central => v.to_vec(),
        Action::ByMatrix(rep) => {
            let mat = rep(g);
            (0..v.len())
                .map(|i| {
                    (0..v.len())
                        .map(|j| BigRational::from_integer(mat[i][j].clone()) * &v[j])
                        .sum()
                })
                .collect()
        }
    }
}

fn to_rational(a: &CoeffValue) -> Vec<BigRational> {
    a.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// True iff h1 - h2 = df on every sampled pair, i.e. the two extensions are
/// related by the isomorphism (a, g) -> (a + f(g), g) as far as the samples
/// can tell. f must be normalized (f(e) = 0).
pub fn equivalence_check(
    h1: &Cocycle2,
    h2: &Cocycle2,
    f: &RatCochain,
    samples: u64,
    seed: u64,
) -> Result<bool, CocycleError> {
    if h1.group().signature() != h2.group().signature() || h1.coeff() != h2.coeff() {
        return Err(CocycleError::Group(GroupError::Mismatch));
    }
    let group = h1.group();
    let rank = h1.coeff().rank();
    let fe = f(&group.identity());
    if fe.len() != rank || fe.iter().any(|c| *c != BigRational::from_integer(BigInt::from(0))) {
        return Err(CocycleError::NotNormalized);
    }
    let mut rng = crate::sample::rng(seed);
    for _ in 0..samples {
        let x = group.sample(&mut rng);
        let y = group.sample(&mut rng);
        let xy = group.mul(&x, &y)?;
        let diff = h1.coeff().sub(&h1.eval(&x, &y), &h2.eval(&x, &y));
        let xf = act_rational(h1, &x, &f(&y));
        let df: Vec<BigRational> = f(&x)
            .iter()
            .zip(&xf)
            .zip(&f(&xy))
            .map(|((a, b), c)| a + b - c)
            .collect();
        let d = to_rational(&diff);
        for (i, &m) in h1.coeff().moduli().iter().enumerate() {
            let gap = &d[i] - &df[i];
            let ok = if m == 0 {
                gap == BigRational::from_integer(BigInt::from(0))
            } else {
                // Compare modulo m: the gap must be an integer multiple of m.
                let scaled = gap / BigRational::from_integer(BigInt::from(m));
                scaled.is_integer()
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The extension of SL2(Z) by Z along the sign cocycle.
pub fn asai_ext_group() -> ExtGroup {
    ExtGroup::new(asai_cocycle())
}

/// h(g^k, g) for k = 1..=max: the telescope entries used when evaluating a
/// splitting function on powers.
pub fn power_telescope(
    h: &Cocycle2,
    g: &Element,
    max: u32,
) -> Result<Vec<CoeffValue>, GroupError> {
    let mut out = Vec::with_capacity(max as usize);
    let mut acc = g.clone();
    for _ in 1..=max {
        out.push(h.eval(&acc, g));
        acc = h.group().mul(&acc, g)?;
    }
    Ok(out)
}

/// The lifted braid generators (k1, T) and (k2, U) in the sign extension.
pub fn braid_lifts(ext: &ExtGroup, k1: i64, k2: i64) -> (ExtElement, ExtElement) {
    let s1 = ExtElement {
        a: ext.coeff().reduce(vec![BigInt::from(k1)]),
        g: Element::Mat(Mat2::t()),
    };
    let s2 = ExtElement {
        a: ext.coeff().reduce(vec![BigInt::from(k2)]),
        g: Element::Mat(Mat2::u()),
    };
    (s1, s2)
}

/// A-part difference of the two sides of the braid relation
/// s1 s2 s1 = s2 s1 s2 computed on the lifts; the base parts always agree.
/// All six cocycle values along the two triple products vanish, so the
/// difference is k1 - k2 (the relation weighs the generators 2:1 against
/// 1:2); in particular the canonical lifts (0, T), (0, U) satisfy the braid
/// relation exactly.
pub fn braid_discrepancy(k1: i64, k2: i64) -> BigInt {
    let ext = asai_ext_group();
    let (s1, s2) = braid_lifts(&ext, k1, k2);
    let lhs = ext
        .mul(&ext.mul(&s1, &s2).unwrap(), &s1)
        .expect("braid products stay in the extension");
    let rhs = ext
        .mul(&ext.mul(&s2, &s1).unwrap(), &s2)
        .expect("braid products stay in the extension");
    assert_eq!(lhs.g, rhs.g, "braid relation must hold in the base group");
    lhs.a.0[0].clone() - rhs.a.0[0].clone()
}

/// (s1 s2)^6 on the lifts: the lifted full twist. Its base part is the
/// identity and its A-part is -1 + 6 k1 + 6 k2.
pub fn full_twist_center(k1: i64, k2: i64) -> ExtElement {
    let ext = asai_ext_group();
    let (s1, s2) = braid_lifts(&ext, k1, k2);
    let v = ext.mul(&s1, &s2).expect("lifts multiply");
    ext.pow(&v, 6).expect("powers stay in the extension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{zero_cocycle, CoeffGroup};
    use crate::sl2;

    fn ints(vals: &[i64]) -> CoeffValue {
        CoeffValue(vals.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn identity_law() {
        let ext = asai_ext_group();
        let x = ExtElement { a: ints(&[5]), g: Element::Mat(Mat2::s()) };
        assert_eq!(ext.mul(&ext.identity(), &x).unwrap(), x);
        assert_eq!(ext.mul(&x, &ext.identity()).unwrap(), x);
    }

    #[test]
    fn s_squared_picks_up_the_sign() {
        let ext = asai_ext_group();
        let s = ext.section(&Element::Mat(Mat2::s())).unwrap();
        let ss = ext.mul(&s, &s).unwrap();
        assert_eq!(ss, ExtElement { a: ints(&[1]), g: Element::Mat(Mat2::s().pow(2)) });
    }

    #[test]
    fn tut_product_stays_flat() {
        let ext = asai_ext_group();
        let t = ext.section(&Element::Mat(Mat2::t())).unwrap();
        let u = ext.section(&Element::Mat(Mat2::u())).unwrap();
        let tut = ext.mul(&ext.mul(&t, &u).unwrap(), &t).unwrap();
        // T U T = S^-1 = [[0,1],[-1,0]] with no sign contribution.
        assert_eq!(tut, ExtElement { a: ints(&[0]), g: Element::Mat(Mat2::s().inv()) });
    }

    #[test]
    fn inverse_formula_oracles() {
        let ext = asai_ext_group();
        assert_eq!(ext.inv(&ext.identity()).unwrap(), ext.identity());
        let s = ext.section(&Element::Mat(Mat2::s())).unwrap();
        assert_eq!(
            ext.inv(&s).unwrap(),
            ExtElement { a: ints(&[0]), g: Element::Mat(Mat2::s().pow(3)) }
        );
        let minus = ExtElement { a: ints(&[1]), g: Element::Mat(Mat2::s().pow(2)) };
        assert_eq!(
            ext.inv(&minus).unwrap(),
            ExtElement { a: ints(&[0]), g: Element::Mat(Mat2::s().pow(2)) }
        );
    }

    #[test]
    fn inverse_law_on_samples() {
        let ext = asai_ext_group();
        let mut rng = sample::rng(11);
        for _ in 0..200 {
            let x = ext.sample(&mut rng);
            let xi = ext.inv(&x).unwrap();
            assert_eq!(ext.mul(&x, &xi).unwrap(), ext.identity());
            assert_eq!(ext.mul(&xi, &x).unwrap(), ext.identity());
        }
    }

    #[test]
    fn central_coefficients_commute() {
        let ext = asai_ext_group();
        let z = ext.embed_coeff(&ints(&[3]));
        let mut rng = sample::rng(12);
        for _ in 0..200 {
            let x = ext.sample(&mut rng);
            assert_eq!(ext.mul(&z, &x).unwrap(), ext.mul(&x, &z).unwrap());
        }
    }

    #[test]
    fn base_projection_is_a_homomorphism() {
        let ext = asai_ext_group();
        let mut rng = sample::rng(13);
        for _ in 0..200 {
            let x = ext.sample(&mut rng);
            let y = ext.sample(&mut rng);
            let xy = ext.mul(&x, &y).unwrap();
            assert_eq!(
                xy.g,
                Group::Sl2.mul(&x.g, &y.g).unwrap(),
                "second projection must be a homomorphism"
            );
        }
    }

    #[test]
    fn group_axioms_hold_on_samples() {
        let ext = asai_ext_group();
        let report = group_axioms_audit(&ext, 300, 7);
        assert!(report.clean(), "{:?}", report.violations);
        // 6 checks per sample: assoc, two unit laws, two inverse laws,
        // projection.
        assert_eq!(report.checked, 1800);
    }

    #[test]
    fn equivalence_trivially_reflexive() {
        let h = asai_cocycle();
        let f: RatCochain = Rc::new(|_| vec![BigRational::from_integer(BigInt::from(0))]);
        assert_eq!(equivalence_check(&h, &h, &f, 200, 0), Ok(true));
    }

    #[test]
    fn asai_splits_rationally() {
        let h = asai_cocycle();
        let zero = zero_cocycle(Group::Sl2, CoeffGroup::integers());
        let f: RatCochain = Rc::new(|g: &Element| {
            vec![sl2::asai_split_f(g.as_mat().expect("matrix element")).expect("integer matrix")]
        });
        assert_eq!(equivalence_check(&h, &zero, &f, 300, 1), Ok(true));
    }

    #[test]
    fn asai_is_not_zero_without_f() {
        let h = asai_cocycle();
        let zero = zero_cocycle(Group::Sl2, CoeffGroup::integers());
        let f: RatCochain = Rc::new(|_| vec![BigRational::from_integer(BigInt::from(0))]);
        assert_eq!(equivalence_check(&h, &zero, &f, 300, 2), Ok(false));
    }

    #[test]
    fn equivalence_rejects_unnormalized_f() {
        let h = asai_cocycle();
        let f: RatCochain = Rc::new(|_| vec![BigRational::from_integer(BigInt::from(1))]);
        assert_eq!(equivalence_check(&h, &h, &f, 10, 0), Err(CocycleError::NotNormalized));
    }

    #[test]
    fn equivalence_rejects_mismatched_groups() {
        let h = asai_cocycle();
        let other = zero_cocycle(Group::Free { rank: 2 }, CoeffGroup::integers());
        let f: RatCochain = Rc::new(|_| vec![BigRational::from_integer(BigInt::from(0))]);
        assert_eq!(
            equivalence_check(&h, &other, &f, 10, 0),
            Err(CocycleError::Group(GroupError::Mismatch))
        );
    }

    #[test]
    fn braid_relation_lifts_on_the_nose() {
        // For the canonical lifts (and any equal central shift) the braid
        // relation holds exactly in the extension: all six cocycle values
        // along both triple products vanish.
        for k in -2..=2 {
            assert_eq!(braid_discrepancy(k, k), BigInt::from(0));
        }
    }

    #[test]
    fn braid_discrepancy_closed_form() {
        // sigma1 appears twice on the left and once on the right (and vice
        // versa for sigma2), so unequal central shifts leave exactly k1 - k2.
        for k1 in -2..=2 {
            for k2 in -2..=2 {
                assert_eq!(braid_discrepancy(k1, k2), BigInt::from(k1 - k2));
            }
        }
    }

    #[test]
    fn full_twist_is_central_minus_one() {
        let tw = full_twist_center(0, 0);
        assert_eq!(tw, ExtElement { a: ints(&[-1]), g: Element::Mat(Mat2::identity()) });
        let tw2 = full_twist_center(1, 0);
        assert_eq!(tw2, ExtElement { a: ints(&[5]), g: Element::Mat(Mat2::identity()) });
        let tw3 = full_twist_center(0, 1);
        assert_eq!(tw3, ExtElement { a: ints(&[5]), g: Element::Mat(Mat2::identity()) });
    }

    #[test]
    fn tu_power_telescope() {
        let h = asai_cocycle();
        let v = Element::Mat(Mat2::t().mul(&Mat2::u()));
        let tele = power_telescope(&h, &v, 5).unwrap();
        let expected: Vec<CoeffValue> = [0, 0, -1, 0, 0].iter().map(|&k| ints(&[k])).collect();
        assert_eq!(tele, expected);
    }

    #[test]
    fn full_twist_commutes_with_lifts() {
        let ext = asai_ext_group();
        let (s1, s2) = braid_lifts(&ext, 0, 0);
        let tw = full_twist_center(0, 0);
        for g in [&s1, &s2] {
            assert_eq!(ext.mul(&tw, g).unwrap(), ext.mul(g, &tw).unwrap());
        }
    }
}
