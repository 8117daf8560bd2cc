//! A small closed universe of concrete groups: free groups, free products
//! Z_m * Z_n, SL2(Z), central/twisted extensions built from a 2-cocycle, and
//! finite direct products of these. Every operation is exact.

use std::rc::Rc;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cocycle::CoeffValue;
use crate::extension::{ExtElement, ExtGroup};
use crate::sample;
use crate::sl2::{Mat2, Sl2Error};
use crate::words::{FpWord, FreeWord, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("element does not belong to this group")]
    Mismatch,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Free(FreeWord),
    Fp(FpWord),
    Mat(Mat2),
    Ext(Box<ExtElement>),
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    pub fn pair(x: Element, y: Element) -> Element {
        Element::Pair(Box::new(x), Box::new(y))
    }

    pub fn ext(a: CoeffValue, g: Element) -> Element {
        Element::Ext(Box::new(ExtElement { a, g }))
    }

    pub fn as_free(&self) -> Result<&FreeWord, GroupError> {
        match self {
            Element::Free(w) => Ok(w),
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn as_fp(&self) -> Result<&FpWord, GroupError> {
        match self {
            Element::Fp(w) => Ok(w),
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn as_mat(&self) -> Result<&Mat2, GroupError> {
        match self {
            Element::Mat(m) => Ok(m),
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn as_ext(&self) -> Result<&ExtElement, GroupError> {
        match self {
            Element::Ext(e) => Ok(e),
            _ => Err(GroupError::Mismatch),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Group {
    Free { rank: u32 },
    FreeProduct { m: u32, n: u32 },
    Sl2,
    Ext(Rc<ExtGroup>),
    Product(Box<Group>, Box<Group>),
}

impl Group {
    pub fn product(a: Group, b: Group) -> Group {
        Group::Product(Box::new(a), Box::new(b))
    }

    /// Structural signature; two groups interoperate exactly when their
    /// signatures agree.
    pub fn signature(&self) -> String {
        match self {
            Group::Free { rank } => format!("free({rank})"),
            Group::FreeProduct { m, n } => format!("zfree({m},{n})"),
            Group::Sl2 => "sl2z".to_string(),
            Group::Ext(e) => format!(
                "ext({}; {})",
                e.base().signature(),
                e.coeff().signature()
            ),
            Group::Product(a, b) => format!("prod({},{})", a.signature(), b.signature()),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Free { rank } => Element::Free(FreeWord::identity(*rank)),
            Group::FreeProduct { m, n } => {
                // Moduli are validated wherever a FreeProduct group is built
                // from external input, so this cannot fail for a live group.
                Element::Fp(FpWord::identity(*m, *n).expect("moduli >= 2"))
            }
            Group::Sl2 => Element::Mat(Mat2::identity()),
            Group::Ext(e) => Element::Ext(Box::new(e.identity())),
            Group::Product(a, b) => Element::pair(a.identity(), b.identity()),
        }
    }

    pub fn validate(&self, e: &Element) -> Result<(), GroupError> {
        match (self, e) {
            (Group::Free { rank }, Element::Free(w)) if w.rank() == *rank => Ok(()),
            (Group::FreeProduct { m, n }, Element::Fp(w)) if w.moduli() == (*m, *n) => Ok(()),
            (Group::Sl2, Element::Mat(mat)) => {
                if mat.is_integral() {
                    Ok(())
                } else {
                    Err(GroupError::Mismatch)
                }
            }
            (Group::Ext(g), Element::Ext(x)) => {
                if g.coeff().reduce_value(&x.a) != x.a {
                    return Err(GroupError::Mismatch);
                }
                g.base().validate(&x.g)
            }
            (Group::Product(a, b), Element::Pair(x, y)) => {
                a.validate(x)?;
                b.validate(y)
            }
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        match (self, x, y) {
            (Group::Free { .. }, Element::Free(a), Element::Free(b)) => {
                Ok(Element::Free(a.multiply(b)?))
            }
            (Group::FreeProduct { .. }, Element::Fp(a), Element::Fp(b)) => {
                Ok(Element::Fp(a.multiply(b)?))
            }
            (Group::Sl2, Element::Mat(a), Element::Mat(b)) => Ok(Element::Mat(a.mul(b))),
            (Group::Ext(g), Element::Ext(a), Element::Ext(b)) => {
                Ok(Element::Ext(Box::new(g.mul(a, b)?)))
            }
            (Group::Product(g1, g2), Element::Pair(a1, a2), Element::Pair(b1, b2)) => {
                Ok(Element::pair(g1.mul(a1, b1)?, g2.mul(a2, b2)?))
            }
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn inv(&self, x: &Element) -> Result<Element, GroupError> {
        match (self, x) {
            (Group::Free { .. }, Element::Free(a)) => Ok(Element::Free(a.invert())),
            (Group::FreeProduct { .. }, Element::Fp(a)) => Ok(Element::Fp(a.invert())),
            (Group::Sl2, Element::Mat(a)) => Ok(Element::Mat(a.inv())),
            (Group::Ext(g), Element::Ext(a)) => Ok(Element::Ext(Box::new(g.inv(a)?))),
            (Group::Product(g1, g2), Element::Pair(a, b)) => {
                Ok(Element::pair(g1.inv(a)?, g2.inv(b)?))
            }
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn pow(&self, x: &Element, n: i64) -> Result<Element, GroupError> {
        let base = if n < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Seeded random element with bounded size (word length / matrix entries).
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Element {
        match self {
            Group::Free { rank } => Element::Free(sample::free_word(rng, *rank)),
            Group::FreeProduct { m, n } => Element::Fp(sample::fp_word(rng, *m, *n)),
            Group::Sl2 => Element::Mat(sample::sl2_matrix(rng, 1_000_000)),
            Group::Ext(g) => {
                let a = g.coeff().sample(rng);
                let base = g.base().sample(rng);
                Element::Ext(Box::new(ExtElement { a, g: base }))
            }
            Group::Product(a, b) => {
                let x = a.sample(rng);
                let y = b.sample(rng);
                Element::pair(x, y)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group_ops_round_trip() {
        let g = Group::Free { rank: 2 };
        let mut rng = sample::rng(7);
        for _ in 0..200 {
            let x = g.sample(&mut rng);
            let xi = g.inv(&x).unwrap();
            assert_eq!(g.mul(&x, &xi).unwrap(), g.identity());
            assert_eq!(g.mul(&xi, &x).unwrap(), g.identity());
        }
    }

    #[test]
    fn mismatched_kinds_are_rejected() {
        let free = Group::Free { rank: 2 };
        let sl2 = Group::Sl2;
        let w = free.identity();
        let m = sl2.identity();
        assert_eq!(free.mul(&w, &m), Err(GroupError::Mismatch));
        assert_eq!(sl2.validate(&w), Err(GroupError::Mismatch));
        // Rank mismatch within the same kind is also a mismatch.
        let free3 = Group::Free { rank: 3 };
        assert!(free3.validate(&w).is_err());
    }

    #[test]
    fn sl2_validation_requires_integrality() {
        use num::BigRational;
        let half = BigRational::new(1.into(), 2.into());
        let two = BigRational::from_integer(2.into());
        let m = Mat2::new(
            half.clone(),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
            two,
        )
        .unwrap();
        assert_eq!(Group::Sl2.validate(&Element::Mat(m)), Err(GroupError::Mismatch));
    }

    #[test]
    fn product_group_ops_are_componentwise() {
        let g = Group::product(Group::Free { rank: 1 }, Group::Sl2);
        let x = Element::pair(
            Element::Free(FreeWord::reduce(1, &[(1, 3)]).unwrap()),
            Element::Mat(Mat2::s()),
        );
        let y = Element::pair(
            Element::Free(FreeWord::reduce(1, &[(1, -1)]).unwrap()),
            Element::Mat(Mat2::s()),
        );
        let xy = g.mul(&x, &y).unwrap();
        let expected = Element::pair(
            Element::Free(FreeWord::reduce(1, &[(1, 2)]).unwrap()),
            Element::Mat(Mat2::s().mul(&Mat2::s())),
        );
        assert_eq!(xy, expected);
        assert_eq!(g.mul(&xy, &g.inv(&xy).unwrap()).unwrap(), g.identity());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let g = Group::Sl2;
        let x = Element::Mat(Mat2::t());
        assert_eq!(g.pow(&x, 5).unwrap(), Element::Mat(Mat2::t_power(5)));
        assert_eq!(g.pow(&x, -3).unwrap(), Element::Mat(Mat2::t_power(-3)));
        assert_eq!(g.pow(&x, 0).unwrap(), g.identity());
    }
}
