//! Black-box auditor for symplectic Steinberg symbols over the rationals:
//! exact randomized checks of the core relations
//!
//!   (S1) c(x,y) + c(xy,z) = c(x,yz) + c(y,z)
//!   (S2) c(1,1) = 0 and c(x,y) = c(x^-1,y^-1)
//!   (S3) c(x,y) = c(x,(1-x)y) for x != 1
//!
//! (written additively), of six derived consequences, and of triviality on
//! sums of squares. Symbols are supplied as closures on nonzero rationals.

use std::rc::Rc;

use num::{BigInt, BigRational, Signed, Zero};

use crate::encode;
use crate::report::{AuditReport, Violation};
use crate::sample;
use crate::sl2;

#[derive(Clone)]
pub struct SymbolUnderTest {
    name: String,
    eval: Rc<dyn Fn(&BigRational, &BigRational) -> i64>,
}

impl SymbolUnderTest {
    pub fn new(
        name: impl Into<String>,
        eval: Rc<dyn Fn(&BigRational, &BigRational) -> i64>,
    ) -> SymbolUnderTest {
        SymbolUnderTest { name: name.into(), eval }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> i64 {
        assert!(!x.is_zero() && !y.is_zero(), "symbol arguments must be nonzero");
        (self.eval)(x, y)
    }

    /// The ordered-field symbol: 1 when both arguments are negative, else 0.
    pub fn ordered() -> SymbolUnderTest {
        SymbolUnderTest::new(
            "ordered",
            Rc::new(|x, y| sl2::steinberg_ordered(x, y).expect("nonzero arguments")),
        )
    }

    pub fn trivial() -> SymbolUnderTest {
        SymbolUnderTest::new("trivial", Rc::new(|_, _| 0))
    }

    /// Deliberately broken decoy: 1 when exactly one argument is negative.
    /// Fails both (S1) and (S3); used to exercise the auditor.
    pub fn xor_signs() -> SymbolUnderTest {
        SymbolUnderTest::new(
            "xor-signs",
            Rc::new(|x, y| if x.is_negative() != y.is_negative() { 1 } else { 0 }),
        )
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn record(
    report: &mut AuditReport,
    tag: &str,
    args: &[&BigRational],
    lhs: i64,
    rhs: i64,
    recheck: impl Fn() -> (i64, i64),
) {
    report.record_check();
    if lhs != rhs {
        // Soundness: re-evaluate before reporting; only persistent
        // inequalities are recorded.
        let (l2, r2) = recheck();
        if l2 != r2 {
            let mut inputs = vec![tag.to_string()];
            inputs.extend(args.iter().map(|a| encode::rational_str(a)));
            report.record_violation(Violation {
                inputs,
                lhs: l2.to_string(),
                rhs: r2.to_string(),
            });
        }
    }
}

/// Audits (S1) on sampled triples and (S2)/(S3) on sampled pairs.
pub fn audit_core(s: &SymbolUnderTest, samples: u64, seed: u64) -> AuditReport {
    let mut rng = sample::rng(seed);
    let mut report = AuditReport::new();
    let one = rat(1);

    let c11 = s.eval(&one, &one);
    record(&mut report, "S2:unit", &[&one, &one], c11, 0, || (s.eval(&one, &one), 0));

    for _ in 0..samples {
        let x = sample::nonzero_rational(&mut rng);
        let y = sample::nonzero_rational(&mut rng);
        let z = sample::nonzero_rational(&mut rng);

        let xy = &x * &y;
        let yz = &y * &z;
        let lhs = s.eval(&x, &y) + s.eval(&xy, &z);
        let rhs = s.eval(&x, &yz) + s.eval(&y, &z);
        record(&mut report, "S1", &[&x, &y, &z], lhs, rhs, || {
            (s.eval(&x, &y) + s.eval(&xy, &z), s.eval(&x, &yz) + s.eval(&y, &z))
        });

        let xi = x.recip();
        let yi = y.recip();
        record(&mut report, "S2:inv", &[&x, &y], s.eval(&x, &y), s.eval(&xi, &yi), || {
            (s.eval(&x, &y), s.eval(&xi, &yi))
        });

        if x != one {
            let shifted = (&one - &x) * &y;
            record(&mut report, "S3", &[&x, &y], s.eval(&x, &y), s.eval(&x, &shifted), || {
                (s.eval(&x, &y), s.eval(&x, &shifted))
            });
        }
    }
    report
}

/// Audits the six derived identities that follow from (S1)-(S3):
/// (1) c(x,y) = c(y^-1,x);       (2) c(x,y) = c(x,-xy);
/// (3) c(x,t^2) + c(x,u^2) = c(x,(tu)^2);
/// (4) c(xy^2,z) = c(x,zy^2) = c(x,z);
/// (5) c(x,y) = c(y,x);          (6) c(x,-1) = c(x,y) + c(x,-y).
pub fn audit_derived(s: &SymbolUnderTest, samples: u64, seed: u64) -> AuditReport {
    let mut rng = sample::rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let x = sample::nonzero_rational(&mut rng);
        let y = sample::nonzero_rational(&mut rng);
        let z = sample::nonzero_rational(&mut rng);
        let t = sample::nonzero_rational(&mut rng);
        let u = sample::nonzero_rational(&mut rng);

        let yi = y.recip();
        record(&mut report, "D1", &[&x, &y], s.eval(&x, &y), s.eval(&yi, &x), || {
            (s.eval(&x, &y), s.eval(&yi, &x))
        });

        let mxy = -(&x * &y);
        record(&mut report, "D2", &[&x, &y], s.eval(&x, &y), s.eval(&x, &mxy), || {
            (s.eval(&x, &y), s.eval(&x, &mxy))
        });

        let t2 = &t * &t;
        let u2 = &u * &u;
        let tu2 = &t2 * &u2;
        record(
            &mut report,
            "D3",
            &[&x, &t, &u],
            s.eval(&x, &t2) + s.eval(&x, &u2),
            s.eval(&x, &tu2),
            || (s.eval(&x, &t2) + s.eval(&x, &u2), s.eval(&x, &tu2)),
        );

        let y2 = &y * &y;
        let xy2 = &x * &y2;
        let zy2 = &z * &y2;
        record(&mut report, "D4a", &[&x, &y, &z], s.eval(&xy2, &z), s.eval(&x, &z), || {
            (s.eval(&xy2, &z), s.eval(&x, &z))
        });
        record(&mut report, "D4b", &[&x, &y, &z], s.eval(&x, &zy2), s.eval(&x, &z), || {
            (s.eval(&x, &zy2), s.eval(&x, &z))
        });

        record(&mut report, "D5", &[&x, &y], s.eval(&x, &y), s.eval(&y, &x), || {
            (s.eval(&x, &y), s.eval(&y, &x))
        });

        let minus_one = rat(-1);
        let my = -y.clone();
        record(
            &mut report,
            "D6",
            &[&x, &y],
            s.eval(&x, &minus_one),
            s.eval(&x, &y) + s.eval(&x, &my),
            || (s.eval(&x, &minus_one), s.eval(&x, &y) + s.eval(&x, &my)),
        );
    }
    report
}

/// Samples s as a sum of `terms` nonzero rational squares and checks
/// c(s, t) = c(t, s) = 0 against random nonzero t.
pub fn squares_check(s: &SymbolUnderTest, terms: u32, samples: u64, seed: u64) -> AuditReport {
    assert!(terms >= 1, "need at least one square");
    let mut rng = sample::rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let mut sum = BigRational::zero();
        for _ in 0..terms {
            let r = sample::nonzero_rational(&mut rng);
            sum += &r * &r;
        }
        let t = sample::nonzero_rational(&mut rng);
        record(&mut report, "SQ:left", &[&sum, &t], s.eval(&sum, &t), 0, || {
            (s.eval(&sum, &t), 0)
        });
        record(&mut report, "SQ:right", &[&t, &sum], s.eval(&t, &sum), 0, || {
            (s.eval(&t, &sum), 0)
        });
    }
    report
}

/// Evaluates both sides of bimultiplicativity in the first slot at
/// x = y = z = -1: returns (c(xy, z), c(x, z) + c(y, z)). For the ordered
/// symbol this is (0, 2), witnessing that the symbol is not bimultiplicative
/// (it is symplectic-only).
pub fn bimultiplicativity_probe(s: &SymbolUnderTest) -> (i64, i64) {
    let m = rat(-1);
    let xy = &m * &m;
    (s.eval(&xy, &m), s.eval(&m, &m) + s.eval(&m, &m))
}
