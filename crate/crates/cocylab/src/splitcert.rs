//! Splitness certification on Cayley balls. For a central cocycle h with
//! free-abelian coefficients, the split equation
//!
//!   f(xy) = f(x) + f(y) - h(x, y)
//!
//! determines f on the whole ball from its values on the generators. We
//! propagate symbolic affine values f(w) = sum_i lambda_i u_i + const along
//! geodesic witnesses, turn every in-ball pair with in-ball product into a
//! linear constraint on the unknowns u_i = f(gen_i), and decide the system
//! exactly over Z or Q. NonSplit verdicts carry a relation word + constraint
//! certificate that is independently re-checked; Split verdicts carry the
//! full assignment on the ball.

use std::collections::{HashMap, HashSet};

use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

use crate::cocycle::Cocycle2;
use crate::group::{Element, Group, GroupError};
use crate::solver;

pub const DEFAULT_MAX_BALL: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("generator does not belong to the base group")]
    BadGenerator,
    #[error("certification requires a central action")]
    UnsupportedAction,
    #[error("certification requires free-abelian coefficients")]
    UnsupportedCoefficients,
    #[error("predicate is not symmetric on the sample")]
    NotSymmetric,
    #[error("thickness caps exceeded (n must be 2..=6, sample at most 24)")]
    CapExceeded,
    #[error("ball exceeded the element cap {0} (set COCYLAB_MAX_BALL to raise)")]
    BallTooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Radius-r ball in the Cayley graph of `group` w.r.t. `gens`, with one
/// geodesic witness (as a parent chain) per element. Element order is BFS
/// discovery order, which is deterministic for a fixed generator list.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    group: Group,
    gens: Vec<Element>,
    gen_invs: Vec<Element>,
    radius: u32,
    elements: Vec<Element>,
    parents: Vec<Option<(usize, usize, i8)>>,
    index: HashMap<Element, usize>,
}

fn max_ball_from_env() -> usize {
    std::env::var("COCYLAB_MAX_BALL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_BALL)
}

impl CayleyBall {
    pub fn build(group: &Group, gens: &[Element], radius: u32) -> Result<CayleyBall, SplitError> {
        CayleyBall::build_capped(group, gens, radius, max_ball_from_env())
    }

    pub(crate) fn build_capped(
        group: &Group,
        gens: &[Element],
        radius: u32,
        cap: usize,
    ) -> Result<CayleyBall, SplitError> {
        let mut gen_invs = Vec::with_capacity(gens.len());
        for g in gens {
            group.validate(g).map_err(|e| match e {
                GroupError::Mismatch => SplitError::BadGenerator,
                other => SplitError::Group(other),
            })?;
            gen_invs.push(group.inv(g)?);
        }
        let identity = group.identity();
        let mut elements = vec![identity.clone()];
        let mut parents = vec![None];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut frontier = vec![0usize];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &at in &frontier {
                let here = elements[at].clone();
                for (gi, (gen, ginv)) in gens.iter().zip(&gen_invs).enumerate() {
                    for (step, sign) in [(gen, 1i8), (ginv, -1i8)] {
                        let child = group.mul(&here, step)?;
                        if index.contains_key(&child) {
                            continue;
                        }
                        if elements.len() >= cap {
                            return Err(SplitError::BallTooLarge(cap));
                        }
                        index.insert(child.clone(), elements.len());
                        next.push(elements.len());
                        elements.push(child);
                        parents.push(Some((at, gi, sign)));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(CayleyBall {
            group: group.clone(),
            gens: gens.to_vec(),
            gen_invs,
            radius,
            elements,
            parents,
            index,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains the identity
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The geodesic witness word for element `idx`, as (generator index,
    /// sign) letters read left to right from the identity.
    pub fn witness(&self, idx: usize) -> Vec<(usize, i8)> {
        let mut letters = Vec::new();
        let mut at = idx;
        while let Some((parent, gi, sign)) = self.parents[at] {
            letters.push((gi, sign));
            at = parent;
        }
        letters.reverse();
        letters
    }
}

/// Evaluates a relation word (letters over the generator list) in the group.
pub fn relation_element(
    group: &Group,
    gens: &[Element],
    letters: &[(usize, i8)],
) -> Result<Element, GroupError> {
    let mut acc = group.identity();
    for &(gi, sign) in letters {
        let step = if sign >= 0 { gens[gi].clone() } else { group.inv(&gens[gi])? };
        acc = group.mul(&acc, &step)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitDomain {
    Integers,
    Rationals,
}

/// A NonSplit certificate: a relation word over the generators whose
/// telescoped constraint (together with the constraints accumulated before
/// it) has no solution in the chosen domain. The constraint is
/// sign-normalized so its leading nonzero coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonSplitCert {
    pub relation: Vec<(usize, i8)>,
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
    pub coordinate: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitVerdict {
    /// The split equation is solvable on the ball; the assignment lists
    /// f-values for every ball element in BFS order.
    Split { assignment: Vec<(Element, Vec<BigRational>)> },
    NonSplit { cert: NonSplitCert },
    /// Degenerate call (radius 0 or no generators): nothing to certify.
    Inconclusive { reason: String },
}

/// Symbolic affine value: coeffs over the generator unknowns plus a constant
/// per coefficient coordinate.
#[derive(Debug, Clone)]
struct Affine {
    coeffs: Vec<BigInt>,
    konst: Vec<BigInt>,
}

impl Affine {
    fn zero(k: usize, r: usize) -> Affine {
        Affine { coeffs: vec![BigInt::zero(); k], konst: vec![BigInt::zero(); r] }
    }
}

struct Constraint {
    coeffs: Vec<BigInt>,
    rhs: Vec<BigInt>,
    pair: (usize, usize),
}

/// Decides solvability of the split equation for `h` on the radius-`radius`
/// ball w.r.t. `gens`, over the integers or the rationals. The cocycle must
/// be central with free-abelian coefficients.
pub fn certify_split(
    h: &Cocycle2,
    gens: &[Element],
    radius: u32,
    domain: SplitDomain,
) -> Result<SplitVerdict, SplitError> {
    if !h.action().is_central() {
        return Err(SplitError::UnsupportedAction);
    }
    if !h.coeff().is_free() {
        return Err(SplitError::UnsupportedCoefficients);
    }
    if gens.is_empty() {
        return Ok(SplitVerdict::Inconclusive {
            reason: "no generators supplied".to_string(),
        });
    }
    if radius == 0 {
        return Ok(SplitVerdict::Inconclusive {
            reason: "radius 0 ball contains only the identity".to_string(),
        });
    }

    let group = h.group();
    let ball = CayleyBall::build(group, gens, radius)?;
    let k = gens.len();
    let r = h.coeff().rank();
    let n = ball.len();

    // Affine f-value of each generator step. For the inverse step the split
    // equation at (g, g^-1) gives f(g^-1) = h(g, g^-1) - f(g).
    let step_affine = |gi: usize, sign: i8| -> Affine {
        let mut aff = Affine::zero(k, r);
        if sign >= 0 {
            aff.coeffs[gi] = BigInt::from(1);
        } else {
            aff.coeffs[gi] = BigInt::from(-1);
            aff.konst = h.eval(&ball.gens[gi], &ball.gen_invs[gi]).0;
        }
        aff
    };

    // Propagate along BFS witnesses: f(parent * step) =
    // f(parent) + f(step) - h(parent, step).
    let mut affs: Vec<Affine> = Vec::with_capacity(n);
    affs.push(Affine::zero(k, r));
    for idx in 1..n {
        let (p, gi, sign) = ball.parents[idx].expect("non-identity element has a parent");
        let step_elem = if sign >= 0 { &ball.gens[gi] } else { &ball.gen_invs[gi] };
        let step = step_affine(gi, sign);
        let hval = h.eval(&ball.elements[p], step_elem);
        let parent = &affs[p];
        let coeffs: Vec<BigInt> =
            parent.coeffs.iter().zip(&step.coeffs).map(|(a, b)| a + b).collect();
        let konst: Vec<BigInt> = parent
            .konst
            .iter()
            .zip(&step.konst)
            .zip(&hval.0)
            .map(|((a, b), c)| a + b - c)
            .collect();
        affs.push(Affine { coeffs, konst });
    }

    // Every in-ball ordered pair with in-ball product yields a constraint;
    // this makes a Split verdict sound on all such pairs by construction.
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut seen: HashSet<(Vec<BigInt>, Vec<BigInt>)> = HashSet::new();
    for i in 0..n {
        for j in 0..n {
            let prod = group.mul(&ball.elements[i], &ball.elements[j])?;
            let Some(p) = ball.index_of(&prod) else {
                continue;
            };
            let hij = h.eval(&ball.elements[i], &ball.elements[j]);
            let coeffs: Vec<BigInt> = (0..k)
                .map(|c| &affs[i].coeffs[c] + &affs[j].coeffs[c] - &affs[p].coeffs[c])
                .collect();
            let rhs: Vec<BigInt> = (0..r)
                .map(|c| &affs[p].konst[c] - (&affs[i].konst[c] + &affs[j].konst[c] - &hij.0[c]))
                .collect();
            if coeffs.iter().all(|v| v.is_zero()) && rhs.iter().all(|v| v.is_zero()) {
                continue;
            }
            if seen.insert((coeffs.clone(), rhs.clone())) {
                constraints.push(Constraint { coeffs, rhs, pair: (i, j) });
            }
        }
    }

    let rows: Vec<Vec<BigInt>> = constraints.iter().map(|c| c.coeffs.clone()).collect();
    let solvable = |rows: &[Vec<BigInt>], rhs: &[BigInt]| -> bool {
        match domain {
            SplitDomain::Rationals => solver::solve_rational(k, rows, rhs).is_some(),
            SplitDomain::Integers => {
                let direct = solver::solve_integer(k, rows, rhs).is_some();
                let check = solver::integer_solvable_by_diagonalization(k, rows, rhs);
                assert_eq!(direct, check, "independent integer solvers disagree");
                direct
            }
        }
    };

    for coord in 0..r {
        let rhs: Vec<BigInt> = constraints.iter().map(|c| c.rhs[coord].clone()).collect();
        if solvable(&rows, &rhs) {
            continue;
        }
        // Minimal unsolvable prefix: its last constraint is the certificate.
        let mut len = constraints.len();
        for l in 1..=constraints.len() {
            if !solvable(&rows[..l], &rhs[..l]) {
                len = l;
                break;
            }
        }
        let trigger = &constraints[len - 1];
        let (i, j) = trigger.pair;
        let prod = group.mul(&ball.elements[i], &ball.elements[j])?;
        let p = ball.index_of(&prod).expect("constraint product is in the ball");
        let mut relation = ball.witness(i);
        relation.extend(ball.witness(j));
        relation.extend(ball.witness(p).into_iter().rev().map(|(gi, s)| (gi, -s)));
        // Soundness: the relation word must evaluate to the identity.
        let evaluated = relation_element(group, gens, &relation)?;
        assert_eq!(
            evaluated,
            group.identity(),
            "certificate relation must evaluate to the identity"
        );
        // Independent re-check of the unsolvable prefix.
        let recheck = match domain {
            SplitDomain::Integers => {
                solver::integer_solvable_by_diagonalization(k, &rows[..len], &rhs[..len])
            }
            SplitDomain::Rationals => {
                let rev_rows: Vec<Vec<BigInt>> = rows[..len].iter().rev().cloned().collect();
                let rev_rhs: Vec<BigInt> = rhs[..len].iter().rev().cloned().collect();
                solver::solve_rational(k, &rev_rows, &rev_rhs).is_some()
            }
        };
        assert!(!recheck, "certificate prefix must re-check as unsolvable");

        let mut coeffs = trigger.coeffs.clone();
        let mut rhs_val = trigger.rhs[coord].clone();
        if let Some(first) = coeffs.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                coeffs = coeffs.iter().map(|v| -v).collect();
                rhs_val = -rhs_val;
            }
        }
        return Ok(SplitVerdict::NonSplit {
            cert: NonSplitCert { relation, coeffs, rhs: rhs_val, coordinate: coord },
        });
    }

    // Solvable in every coordinate: produce the assignment.
    let mut u: Vec<Vec<BigRational>> = Vec::with_capacity(r);
    for coord in 0..r {
        let rhs: Vec<BigInt> = constraints.iter().map(|c| c.rhs[coord].clone()).collect();
        let sol = match domain {
            SplitDomain::Rationals => {
                solver::solve_rational(k, &rows, &rhs).expect("checked solvable")
            }
            SplitDomain::Integers => solver::solve_integer(k, &rows, &rhs)
                .expect("checked solvable")
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        };
        u.push(sol);
    }
    let assignment: Vec<(Element, Vec<BigRational>)> = (0..n)
        .map(|idx| {
            let values: Vec<BigRational> = (0..r)
                .map(|coord| {
                    let mut v = BigRational::from_integer(affs[idx].konst[coord].clone());
                    for (c, lam) in affs[idx].coeffs.iter().enumerate() {
                        v += BigRational::from_integer(lam.clone()) * &u[coord][c];
                    }
                    v
                })
                .collect();
            (ball.elements[idx].clone(), values)
        })
        .collect();
    Ok(SplitVerdict::Split { assignment })
}

/// Sample-level n-thickness: true iff every choice of n sample members
/// contains a pair i < j with g_i^-1 g_j in P. True means "not refuted on
/// this sample", not a global proof. P must be symmetric on the sample.
pub fn is_n_thick(
    group: &Group,
    sample: &[Element],
    pred: &dyn Fn(&Element) -> bool,
    n: usize,
) -> Result<bool, SplitError> {
    if !(2..=6).contains(&n) || sample.len() > 24 {
        return Err(SplitError::CapExceeded);
    }
    for s in sample {
        if pred(s) && !pred(&group.inv(s)?) {
            return Err(SplitError::NotSymmetric);
        }
    }
    let m = sample.len();
    if n > m {
        return Ok(true); // no n-tuples to refute
    }
    // Pair table: good[i][j] for i < j.
    let mut good = vec![vec![false; m]; m];
    for i in 0..m {
        let inv_i = group.inv(&sample[i])?;
        for j in (i + 1)..m {
            good[i][j] = pred(&group.mul(&inv_i, &sample[j])?);
        }
    }
    // Enumerate index combinations of size n.
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let has_pair = (0..n).any(|a| ((a + 1)..n).any(|b| good[combo[a]][combo[b]]));
        if !has_pair {
            return Ok(false);
        }
        // Next combination in lexicographic order.
        let mut idx = n;
        loop {
            if idx == 0 {
                return Ok(true);
            }
            idx -= 1;
            if combo[idx] != idx + m - n {
                break;
            }
        }
        combo[idx] += 1;
        for later in (idx + 1)..n {
            combo[later] = combo[later - 1] + 1;
        }
    }
}

/// First lexicographic pair (i, j), i < j (1-based), whose difference
/// g_i g_j^-1 satisfies the predicate.
pub fn thick_pair(
    group: &Group,
    sequence: &[Element],
    pred: &dyn Fn(&Element) -> bool,
) -> Result<Option<(usize, usize)>, SplitError> {
    for i in 0..sequence.len() {
        for j in (i + 1)..sequence.len() {
            let d = group.mul(&sequence[i], &group.inv(&sequence[j])?)?;
            if pred(&d) {
                return Ok(Some((i + 1, j + 1)));
            }
        }
    }
    Ok(None)
}
