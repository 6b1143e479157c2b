//! Positive/real root machinery: Descartes' sign rule, exact Sturm counting,
//! and bracketed isolation with a polish step that never leaves its bracket.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Real, Ring};

/// Polynomials above this degree are refused by the counting routines.
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Interval `(lo, hi]`; a missing end is infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
}

impl<T> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// `(lo, ∞)`
    pub fn above(lo: T) -> Self {
        Interval {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn real_line() -> Self {
        Interval { lo: None, hi: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootBracket<T> {
    pub lo: T,
    pub hi: T,
    /// Polished estimate, always inside `[lo, hi]`.
    pub root: T,
    pub multiplicity_hint: u32,
    /// `false` when the iteration cap was hit before the width target.
    pub polished: bool,
}

fn check_degree<T: Ring>(p: &Poly<T>) -> Result<usize> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: d,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    Ok(d)
}

/// Sign changes in the sequence of nonzero coefficients.
pub fn descartes_bound<T: Ring + PartialOrd>(p: &Poly<T>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let zero = T::zero();
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for c in p.coeffs().iter().filter(|c| !c.is_zero()) {
        let neg = *c < zero;
        if last.is_some_and(|l| l != neg) {
            changes += 1;
        }
        last = Some(neg);
    }
    Ok(changes)
}

/// Sturm sequence of the square-free part.
pub fn sturm_chain<T: Field + PartialOrd>(p: &Poly<T>) -> Vec<Poly<T>> {
    let p0 = p.square_free();
    let mut chain = vec![p0.clone()];
    let p1 = p0.derivative();
    if p1.is_zero() {
        return chain;
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    chain
}

fn variations<T: Field + PartialOrd>(chain: &[Poly<T>], x: &T) -> usize {
    let zero = T::zero();
    let mut last: Option<bool> = None;
    let mut v = 0;
    for q in chain {
        let s = q.eval(x);
        if s == zero {
            continue;
        }
        let neg = s < zero;
        if last.is_some_and(|l| l != neg) {
            v += 1;
        }
        last = Some(neg);
    }
    v
}

fn resolve<T: Field + PartialOrd + Signed>(p: &Poly<T>, iv: &Interval<T>) -> Result<(T, T)> {
    let bound = if p.degree().unwrap_or(0) == 0 {
        T::one()
    } else {
        p.cauchy_bound()
    };
    let lo = iv.lo.clone().unwrap_or_else(|| -bound.clone());
    let hi = iv.hi.clone().unwrap_or(bound);
    if lo >= hi {
        return Err(Error::BadInterval);
    }
    Ok((lo, hi))
}

/// Number of distinct real roots in `(lo, hi]`, exactly when `T` is exact.
/// Infinite ends are replaced by the Cauchy bound.
pub fn sturm_count<T: Field + PartialOrd + Signed>(p: &Poly<T>, iv: &Interval<T>) -> Result<usize> {
    check_degree(p)?;
    let chain = sturm_chain(p);
    let (lo, hi) = resolve(p, iv)?;
    Ok(sturm_count_chain(&chain, &lo, &hi))
}

fn sturm_count_chain<T: Field + PartialOrd>(chain: &[Poly<T>], lo: &T, hi: &T) -> usize {
    variations(chain, lo).saturating_sub(variations(chain, hi))
}

/// Distinct positive real roots, exactly.
pub fn positive_root_count<T: Field + PartialOrd + Signed>(p: &Poly<T>) -> Result<usize> {
    sturm_count(p, &Interval::above(T::zero()))
}

fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite tolerance")
}

/// Newton from the bracket midpoint; any step leaving `[lo, hi]` ends the
/// polish and the best in-bracket estimate is kept.
fn polish<T: Real>(p: &Poly<T>, lo: T, hi: T) -> T {
    let dp = p.derivative();
    let mut x = (lo + hi) * T::lit(0.5);
    let mut fx = p.eval(&x).abs();
    for _ in 0..50 {
        let d = dp.eval(&x);
        if d == T::zero() || !d.is_finite() {
            break;
        }
        let next = x - p.eval(&x) / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let fn_ = p.eval(&next).abs();
        if fn_ > fx {
            break;
        }
        let done = next == x;
        x = next;
        fx = fn_;
        if done || fx == T::zero() {
            break;
        }
    }
    x
}

/// Exact isolation through Sturm counts on rational intervals, refined by
/// rational bisection to width below `tol`, then polished in `f64`.
pub fn isolate_exact(
    p: &Poly<BigRational>,
    iv: &Interval<BigRational>,
    tol: f64,
) -> Result<Vec<RootBracket<f64>>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    check_degree(p)?;
    let (lo, hi) = resolve(p, iv)?;
    let chain = sturm_chain(p);
    let sqf = chain[0].clone();
    let tol_q = rat_from_f64(tol);
    let two = BigRational::from_integer(2.into());
    const MAX_SPLITS: usize = 4000;

    // split (lo, hi] until every piece holds at most one root
    let mut stack = vec![(lo.clone(), hi.clone(), sturm_count_chain(&chain, &lo, &hi))];
    let mut isolated = Vec::new();
    let mut splits = 0;
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 || splits >= MAX_SPLITS {
            isolated.push((a, b, n == 1));
            continue;
        }
        splits += 1;
        let m = (&a + &b) / &two;
        let left = sturm_count_chain(&chain, &a, &m);
        stack.push((m.clone(), b, n - left));
        stack.push((a, m, left));
    }

    // multiplicity: how deep the root survives in gcd(g, g') repeatedly
    let mut gcds = Vec::new();
    let mut g = p.gcd(&p.derivative());
    while g.degree().is_some_and(|d| d > 0) {
        gcds.push(sturm_chain(&g));
        g = g.gcd(&g.derivative());
    }

    let sqf_f = sqf.map(rat_to_f64);
    let zero = BigRational::zero();
    let mut out = Vec::with_capacity(isolated.len());
    for (mut a, mut b, single) in isolated {
        let mut ok = single;
        if single {
            // keep exactly one root in (a, b] while halving
            let mut steps = 0;
            while &b - &a >= tol_q {
                if steps > 4000 {
                    ok = false;
                    break;
                }
                steps += 1;
                let m = (&a + &b) / &two;
                if sturm_count_chain(&chain, &a, &m) == 1 {
                    b = m;
                } else {
                    a = m;
                }
            }
        }
        let mult = 1 + gcds
            .iter()
            .filter(|c| sturm_count_chain(c, &a, &b) > 0)
            .count() as u32;
        let (lo_f, hi_f) = (rat_to_f64(&a), rat_to_f64(&b));
        let root = if sqf.eval(&b) == zero {
            hi_f
        } else {
            polish(&sqf_f, lo_f, hi_f)
        };
        out.push(RootBracket {
            lo: lo_f,
            hi: hi_f,
            root,
            multiplicity_hint: mult,
            polished: ok,
        });
    }
    out.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());
    Ok(out)
}

/// Bisection on a strict sign change, then polish.
fn bisect<T: Real>(p: &Poly<T>, mut a: T, mut b: T, tol: T) -> RootBracket<T> {
    let mut fa = p.eval(&a);
    let mut done = true;
    let mut steps = 0;
    while b - a > tol {
        let m = (a + b) * T::lit(0.5);
        if m <= a || m >= b {
            break;
        }
        steps += 1;
        if steps > 400 {
            done = false;
            break;
        }
        let fm = p.eval(&m);
        if fm == T::zero() {
            a = m;
            b = m;
            break;
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let root = if a == b { a } else { polish(p, a, b) };
    RootBracket {
        lo: a,
        hi: b,
        root,
        multiplicity_hint: 1,
        polished: done,
    }
}

/// Real roots in `[lo, hi]` by splitting at the critical points (found
/// recursively on the derivative) into monotone pieces and bisecting every
/// piece whose ends differ in sign. A critical point where `p` is exactly
/// zero is reported with multiplicity hint 2; a tangency that floating point
/// does not resolve to a sign change is not a root here, see
/// [`critical_points`].
pub fn isolate_float<T: Real>(p: &Poly<T>, lo: T, hi: T, tol: T) -> Result<Vec<RootBracket<T>>> {
    check_degree(p)?;
    if !(lo < hi) {
        return Err(Error::BadInterval);
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    Ok(float_roots(p, lo, hi, tol))
}

fn float_roots<T: Real>(p: &Poly<T>, lo: T, hi: T, tol: T) -> Vec<RootBracket<T>> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        let r = -p.coeff(0) / p.coeff(1);
        return if r >= lo && r <= hi {
            vec![RootBracket {
                lo: r,
                hi: r,
                root: r,
                multiplicity_hint: 1,
                polished: true,
            }]
        } else {
            Vec::new()
        };
    }
    let crit: Vec<T> = float_roots(&p.derivative(), lo, hi, tol)
        .into_iter()
        .map(|b| b.root)
        .filter(|&c| c > lo && c < hi)
        .collect();
    let mut knots = Vec::with_capacity(crit.len() + 2);
    knots.push((lo, false));
    knots.extend(crit.iter().map(|&c| (c, true)));
    knots.push((hi, false));
    knots.dedup_by(|a, b| a.0 == b.0);

    let values: Vec<T> = knots.iter().map(|(x, _)| p.eval(x)).collect();
    let mut out = Vec::new();
    for (i, &(x, is_crit)) in knots.iter().enumerate() {
        if values[i] == T::zero() {
            out.push(RootBracket {
                lo: x,
                hi: x,
                root: x,
                multiplicity_hint: if is_crit { 2 } else { 1 },
                polished: true,
            });
        }
        if i + 1 < knots.len() {
            let (va, vb) = (values[i], values[i + 1]);
            if va != T::zero() && vb != T::zero() && (va < T::zero()) != (vb < T::zero()) {
                out.push(bisect(p, x, knots[i + 1].0, tol));
            }
        }
    }
    out.sort_by(|a, b| a.root.partial_cmp(&b.root).unwrap());
    out
}

/// Roots of `p'` in `[lo, hi]`: the points where double roots can appear.
pub fn critical_points<T: Real>(p: &Poly<T>, lo: T, hi: T, tol: T) -> Vec<T> {
    float_roots(&p.derivative(), lo, hi, tol)
        .into_iter()
        .map(|b| b.root)
        .collect()
}

/// Cauchy bound for a floating polynomial.
pub fn cauchy_bound_float<T: Real>(p: &Poly<T>) -> T {
    let c = p.coeffs();
    let Some((lead, rest)) = c.split_last() else {
        return T::one();
    };
    rest.iter()
        .fold(T::zero(), |m, &a| m.max((a / *lead).abs()))
        + T::one()
}
