//! Exact reduction of the `|A| = k` fixed-point problem on `I₃` to a single
//! polynomial in `u`, its palindromic quotient by `u² − 1`, the half-degree
//! polynomial in `ξ = u + 1/u`, and everything built on top: branch
//! functions, critical couplings and solution counts.
//!
//! Symbolic objects carry integer polynomials in `α` as coefficients, so the
//! divisibility and symmetry identities are checked exactly for every `k`.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{system8_residual, w_residual, FieldVector, ModelParams};
use crate::poly::Poly;
use crate::roots::{
    cauchy_bound_float, critical_points, descartes_bound, isolate_float, positive_root_count,
};
use crate::scalar::Real;

pub type IntPoly = Poly<BigInt>;

/// Name of the main variable, for display.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    U,
    Xi,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::Xi => "xi",
        }
    }
}

/// A polynomial in `u` (or `ξ`) whose coefficients are integer polynomials
/// in `α`.
#[derive(Clone, PartialEq)]
pub struct AlphaPoly {
    var: Var,
    poly: Poly<IntPoly>,
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `c · α^j`
fn alpha_mono(c: i64, j: usize) -> IntPoly {
    Poly::monomial(int(c), j)
}

fn to_real<T: Real>(c: &BigInt) -> T {
    T::lit(c.to_f64().unwrap_or(f64::NAN))
}

impl AlphaPoly {
    pub fn new(var: Var, poly: Poly<IntPoly>) -> Self {
        AlphaPoly { var, poly }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn poly(&self) -> &Poly<IntPoly> {
        &self.poly
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Coefficient of `var^i` as a polynomial in `α`.
    pub fn coeff(&self, i: usize) -> IntPoly {
        self.poly.coeff(i)
    }

    pub fn is_palindromic(&self) -> bool {
        self.poly.is_palindromic()
    }

    pub fn is_antipalindromic(&self) -> bool {
        self.poly.is_antipalindromic()
    }

    /// Exact coefficients at a rational `α`.
    pub fn at_rational(&self, alpha: &BigRational) -> Poly<BigRational> {
        self.poly
            .map(|c| c.eval_with(alpha, |b| BigRational::from_integer(b.clone())))
    }

    /// Floating coefficients at a real `α`.
    pub fn at<T: Real>(&self, alpha: T) -> Poly<T> {
        self.poly.map(|c| c.eval_with(&alpha, to_real::<T>))
    }

    /// `P(x, α)`
    pub fn eval<T: Real>(&self, x: T, alpha: T) -> T {
        self.at(alpha).eval(&x)
    }

    /// `∂P/∂α`
    pub fn d_alpha(&self) -> Self {
        AlphaPoly {
            var: self.var,
            poly: self.poly.map(|c| c.derivative()),
        }
    }

    /// `∂P/∂var`
    pub fn d_var(&self) -> Self {
        AlphaPoly {
            var: self.var,
            poly: self.poly.derivative(),
        }
    }
}

fn render_alpha_term(c: &BigInt, j: usize) -> String {
    let mag = c.abs();
    match j {
        0 => mag.to_string(),
        _ => {
            let mut s = String::new();
            if !mag.is_one() {
                write!(s, "{mag}*").unwrap();
            }
            s.push_str("alpha");
            if j > 1 {
                write!(s, "^{j}").unwrap();
            }
            s
        }
    }
}

/// Terms of an α-polynomial in descending order, as `(negative, body)`.
fn alpha_terms(c: &IntPoly) -> Vec<(bool, String)> {
    c.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, b)| !b.is_zero())
        .map(|(j, b)| (b.is_negative(), render_alpha_term(b, j)))
        .collect()
}

fn join_terms(terms: &[(bool, String)], out: &mut String) {
    for (neg, body) in terms {
        if out.is_empty() {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
}

/// Canonical text: descending powers, explicit α-coefficients, e.g.
/// `u^8 - alpha*u^7 + u^6 - alpha*u^5 + (alpha^2 + 1)*u^4 - ...`.
impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        let mut out = String::new();
        for (i, c) in self.poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match i {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{i}"),
            };
            let terms = alpha_terms(c);
            if i == 0 {
                join_terms(&terms, &mut out);
                continue;
            }
            if terms.len() == 1 {
                let (neg, body) = &terms[0];
                let body = if body == "1" {
                    power
                } else {
                    format!("{body}*{power}")
                };
                join_terms(&[(*neg, body)], &mut out);
            } else {
                let mut inner = String::new();
                join_terms(&terms, &mut inner);
                join_terms(&[(false, format!("({inner})*{power}"))], &mut out);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaPoly({self})")
    }
}

/// `u^{2k} − α u^{2k−1} + α² u^{k+1} − α² u^{k−1} + α u − 1`: the
/// `|A| = k` fixed-point condition on `I₃` in the variable `u = f(z₂)`.
pub fn build_poly12(k: usize) -> Result<AlphaPoly> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 2, got {k}"
        )));
    }
    let terms = [
        (2 * k, alpha_mono(1, 0)),
        (2 * k - 1, alpha_mono(-1, 1)),
        (k + 1, alpha_mono(1, 2)),
        (k - 1, alpha_mono(-1, 2)),
        (1, alpha_mono(1, 1)),
        (0, alpha_mono(-1, 0)),
    ];
    let mut coeffs = vec![IntPoly::zero(); 2 * k + 1];
    for (i, c) in terms {
        coeffs[i] = coeffs[i].clone() + c;
    }
    Ok(AlphaPoly::new(Var::U, Poly::new(coeffs)))
}

/// Exact quotient by `u² − 1`; the quotient must come out palindromic.
pub fn factor_u2_minus_1(p: &AlphaPoly) -> Result<AlphaPoly> {
    let divisor = Poly::new(vec![-IntPoly::one(), IntPoly::zero(), IntPoly::one()]);
    let (q, r) = p.poly.div_rem_monic(&divisor);
    if !r.is_zero() {
        return Err(Error::NonZeroRemainder);
    }
    if !q.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    Ok(AlphaPoly::new(p.var, q))
}

/// For palindromic `p` of degree `2m`, the degree-`m` polynomial `q` with
/// `u^m q(u + 1/u) = p(u)`.
pub fn xi_substitute(p: &AlphaPoly) -> Result<AlphaPoly> {
    if !p.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    let n = p.degree().unwrap_or(0);
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    let m = n / 2;
    // u^m ξ^d = u^{m−d} (u² + 1)^d
    let u2p1 = Poly::new(vec![IntPoly::one(), IntPoly::zero(), IntPoly::one()]);
    let mut rest = p.poly.clone();
    let mut q = vec![IntPoly::zero(); m + 1];
    for d in (0..=m).rev() {
        let c = rest.coeff(m + d);
        if c.is_zero() {
            continue;
        }
        let basis = u2p1.pow(d as u32).shift(m - d);
        rest = rest - basis.scale(&c);
        q[d] = c;
    }
    if !rest.is_zero() {
        // unreachable for palindromic input
        return Err(Error::NotPalindromic);
    }
    Ok(AlphaPoly::new(Var::Xi, Poly::new(q)))
}

/// `u^m q(u + 1/u)` rebuilt symbolically, for identity checks.
pub fn xi_expand(q: &AlphaPoly) -> AlphaPoly {
    let m = q.degree().unwrap_or(0);
    let u2p1 = Poly::new(vec![IntPoly::one(), IntPoly::zero(), IntPoly::one()]);
    let mut acc = Poly::zero();
    for d in 0..=m {
        let c = q.coeff(d);
        if !c.is_zero() {
            acc = acc + u2p1.pow(d as u32).shift(m - d).scale(&c);
        }
    }
    AlphaPoly::new(Var::U, acc)
}

/// The two solutions `α(ξ)` of the ξ-polynomial, which is quadratic in `α`;
/// ordered by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Lower,
    Upper,
}

/// Closed-form `α(ξ)` on each branch, for `k = 5` and `k = 6`.
pub fn branch_eval<T: Real>(k: usize, branch: Branch, xi: T) -> Result<T> {
    let two = T::lit(2.0);
    let x2 = xi * xi;
    let (base, disc) = match k {
        5 => (
            xi * x2 - two * xi,
            x2 * x2 * x2 - T::lit(8.0) * x2 * x2 + T::lit(16.0) * x2 - T::lit(4.0),
        ),
        6 => (
            x2 * x2 - T::lit(3.0) * x2 + T::one(),
            xi * (x2 - T::one()) * (x2 - T::lit(3.0)) * (xi - two) * (x2 + two * xi + two)
                + T::one(),
        ),
        _ => return Err(Error::NoBranchFormula(k)),
    };
    if disc < T::zero() {
        return Err(Error::NegativeDiscriminant(
            disc.to_f64_lossy(),
            xi.to_f64_lossy(),
        ));
    }
    let s = disc.sqrt();
    Ok(match branch {
        Branch::Lower => (base - s) / two,
        Branch::Upper => (base + s) / two,
    })
}

/// The root `v₀ > 4` of `v³ − 8v² + 16v − 4`; the `k = 5` branches are
/// real exactly for `ξ ≥ √v₀`.
pub fn v_cubic_root<T: Real>() -> T {
    let phi = |v: T| ((v - T::lit(8.0)) * v + T::lit(16.0)) * v - T::lit(4.0);
    let (mut lo, mut hi) = (T::lit(4.0), T::lit(8.0));
    while hi - lo > T::lit(1e-15) * hi {
        let m = (lo + hi) * T::lit(0.5);
        if m <= lo || m >= hi {
            break;
        }
        if phi(m) < T::zero() {
            lo = m;
        } else {
            hi = m;
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Golden-section minimisation on `[a, b]`.
fn golden_min<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> T {
    let g = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) * T::lit(0.5)
}

/// Minimum of the lower branch: over `[ξ₀, ∞)` for `k = 5`, over `[2, ∞)`
/// for `k = 6`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchMinimum<T> {
    pub xi: T,
    pub alpha: T,
}

pub fn branch_minimum<T: Real>(k: usize) -> Result<BranchMinimum<T>> {
    let start = match k {
        5 => v_cubic_root::<T>().sqrt(),
        6 => T::lit(2.0),
        _ => return Err(Error::NoBranchFormula(k)),
    };
    let f = |x: T| branch_eval(k, Branch::Lower, x).unwrap_or(T::infinity());
    let xi = golden_min(f, start, start + T::lit(20.0), T::lit(1e-10));
    Ok(BranchMinimum { xi, alpha: f(xi) })
}

/// How the first root `ξ > 2` appears as `α` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// A double root appears inside `(2, ∞)`.
    Tangency,
    /// A root enters through `ξ = 2`.
    Endpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalValue<T> {
    pub alpha: T,
    /// `ξ` at which the new root appears.
    pub xi: T,
    pub kind: TransitionKind,
    /// Count-change bracket before the final Newton polish.
    pub bracket: (T, T),
    /// Independent value from minimising the closed-form branch (k = 5, 6).
    pub branch_check: Option<BranchMinimum<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriticalOutcome<T> {
    /// No `α > 1` admits a root `ξ > 2`.
    NoTransition,
    Critical(CriticalValue<T>),
}

#[derive(Clone, Debug)]
pub struct CriticalConfig<T> {
    /// Scan starts just above this value.
    pub alpha_min: T,
    pub alpha_max: T,
    pub step: T,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: T,
}

impl<T: Real> Default for CriticalConfig<T> {
    fn default() -> Self {
        CriticalConfig {
            alpha_min: T::one(),
            alpha_max: T::lit(50.0),
            step: T::lit(0.01),
            tol: T::lit(1e-12),
        }
    }
}

/// A count change of `#{ξ > 2}` along the α axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition<T> {
    pub alpha: T,
    pub from: usize,
    pub to: usize,
}

/// Boundary-aware classification settings.
#[derive(Clone, Debug)]
pub struct ClassifyConfig<T> {
    /// α closer than this to a count change is reported with the boundary
    /// flag and counted as at the change point.
    pub boundary_tol: T,
    /// Root bracket width.
    pub root_tol: T,
    /// Back-substituted solutions must reach this residual.
    pub residual_tol: T,
}

impl<T: Real> Default for ClassifyConfig<T> {
    fn default() -> Self {
        ClassifyConfig {
            boundary_tol: T::lit(1e-6),
            root_tol: T::epsilon() * T::lit(16.0),
            residual_tol: T::lit(1e-9),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution<T> {
    /// `None` for the standing root `u = 1`.
    pub xi: Option<T>,
    pub u: T,
    /// Absent when `z₂ = (α − u)/(αu − 1)` is not positive.
    pub field: Option<FieldVector<T>>,
    /// `‖W(h) − h‖∞`
    pub residual: T,
    /// Residual of the fixed-point system in `z` coordinates.
    pub residual_z: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport<T> {
    pub alpha: T,
    pub k: usize,
    /// Distinct roots `ξ > 2` of the ξ-polynomial.
    pub n_alpha: usize,
    /// Distinct positive roots `u` of the full polynomial: `2 n_α + 1`.
    #[serde(rename = "N_alpha")]
    pub big_n_alpha: usize,
    /// Weakly periodic, non-periodic fixed points on `I₃`.
    pub wp_count: usize,
    /// Positive roots `u ≠ 1` that do not map back to a positive `z₂`.
    pub rejected: usize,
    pub boundary_flag: bool,
    pub xi_roots: Vec<T>,
    pub solutions: Vec<Solution<T>>,
    pub max_residual: T,
}

/// The reduction for one `k`, with every symbolic stage kept.
#[derive(Clone, Debug)]
pub struct Reduction {
    k: usize,
    poly12: AlphaPoly,
    quotient: AlphaPoly,
    xi_poly: AlphaPoly,
    xi_d_alpha: AlphaPoly,
    xi_d_xi: AlphaPoly,
    xi_d_xi_xi: AlphaPoly,
    xi_d_xi_alpha: AlphaPoly,
}

impl Reduction {
    pub fn new(k: usize) -> Result<Self> {
        let poly12 = build_poly12(k)?;
        let quotient = factor_u2_minus_1(&poly12)?;
        let xi_poly = xi_substitute(&quotient)?;
        let xi_d_xi = xi_poly.d_var();
        Ok(Reduction {
            k,
            xi_d_alpha: xi_poly.d_alpha(),
            xi_d_xi_xi: xi_d_xi.d_var(),
            xi_d_xi_alpha: xi_d_xi.d_alpha(),
            xi_d_xi,
            poly12,
            quotient,
            xi_poly,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn poly12(&self) -> &AlphaPoly {
        &self.poly12
    }

    pub fn quotient(&self) -> &AlphaPoly {
        &self.quotient
    }

    pub fn xi_poly(&self) -> &AlphaPoly {
        &self.xi_poly
    }

    /// Distinct positive roots of the full polynomial at rational `α`, exactly.
    pub fn exact_positive_roots(&self, alpha: &BigRational) -> Result<usize> {
        positive_root_count(&self.poly12.at_rational(alpha))
    }

    /// Sign changes of the full polynomial at `α`.
    pub fn descartes_at<T: Real>(&self, alpha: T) -> Result<usize> {
        descartes_bound(&self.poly12.at(alpha))
    }

    fn xi_upper<T: Real>(&self, p: &Poly<T>) -> T {
        cauchy_bound_float(p).max(T::lit(3.0))
    }

    /// Roots `ξ > 2` by plain sign changes, no boundary handling.
    pub fn raw_xi_roots<T: Real>(&self, alpha: T) -> Vec<T> {
        let p = self.xi_poly.at(alpha);
        let two = T::lit(2.0);
        isolate_float(&p, two, self.xi_upper(&p), T::epsilon() * T::lit(16.0))
            .unwrap_or_default()
            .into_iter()
            .map(|b| b.root)
            .filter(|&r| r > two)
            .collect()
    }

    /// Every change of `#{ξ > 2}` on a uniform α grid, bisected to `tol`.
    pub fn transitions<T: Real>(
        &self,
        alpha_min: T,
        alpha_max: T,
        step: T,
        tol: T,
    ) -> Vec<Transition<T>> {
        let count = |a: T| self.raw_xi_roots(a).len();
        let mut out = Vec::new();
        let mut a = alpha_min;
        let mut ca = count(a);
        while a < alpha_max {
            let b = (a + step).min(alpha_max);
            let cb = count(b);
            if cb != ca {
                let (mut lo, mut hi) = (a, b);
                while hi - lo > tol {
                    let m = (lo + hi) * T::lit(0.5);
                    if m <= lo || m >= hi {
                        break;
                    }
                    if count(m) == ca {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                out.push(Transition {
                    alpha: (lo + hi) * T::lit(0.5),
                    from: ca,
                    to: cb,
                });
            }
            a = b;
            ca = cb;
        }
        out
    }

    /// Newton on `P = ∂ξ P = 0` in `(ξ, α)`.
    fn polish_tangency<T: Real>(&self, mut xi: T, mut alpha: T) -> Option<(T, T)> {
        for _ in 0..60 {
            let f1 = self.xi_poly.eval(xi, alpha);
            let f2 = self.xi_d_xi.eval(xi, alpha);
            let (a11, a12) = (f2, self.xi_d_alpha.eval(xi, alpha));
            let (a21, a22) = (
                self.xi_d_xi_xi.eval(xi, alpha),
                self.xi_d_xi_alpha.eval(xi, alpha),
            );
            let det = a11 * a22 - a12 * a21;
            if det == T::zero() || !det.is_finite() {
                return None;
            }
            let dx = (f1 * a22 - f2 * a12) / det;
            let da = (a11 * f2 - a21 * f1) / det;
            xi = xi - dx;
            alpha = alpha - da;
            if dx.abs() < T::epsilon() * T::lit(4.0) * xi.abs()
                && da.abs() < T::epsilon() * T::lit(4.0) * alpha.abs()
            {
                break;
            }
        }
        (xi.is_finite() && alpha.is_finite()).then_some((xi, alpha))
    }

    /// Newton on `P(2, α) = 0`.
    fn polish_endpoint<T: Real>(&self, mut alpha: T) -> Option<T> {
        let two = T::lit(2.0);
        for _ in 0..60 {
            let f = self.xi_poly.eval(two, alpha);
            let d = self.xi_d_alpha.eval(two, alpha);
            if d == T::zero() {
                return None;
            }
            let step = f / d;
            alpha = alpha - step;
            if step.abs() < T::epsilon() * T::lit(4.0) * alpha.abs() {
                break;
            }
        }
        alpha.is_finite().then_some(alpha)
    }

    /// Infimum of `α > alpha_min` for which a root `ξ > 2` exists.
    pub fn critical_alpha<T: Real>(&self, cfg: &CriticalConfig<T>) -> Result<CriticalOutcome<T>> {
        if self.k <= 3 {
            return Ok(CriticalOutcome::NoTransition);
        }
        if !(cfg.step > T::zero()) || !(cfg.alpha_max > cfg.alpha_min) {
            return Err(Error::InvalidParameter("empty α scan range".into()));
        }
        let mut a = cfg.alpha_min;
        let mut found = None;
        while a < cfg.alpha_max {
            let b = (a + cfg.step).min(cfg.alpha_max);
            if !self.raw_xi_roots(b).is_empty() {
                found = Some((a, b));
                break;
            }
            a = b;
        }
        let Some((mut lo, mut hi)) = found else {
            return Ok(CriticalOutcome::NoTransition);
        };
        while hi - lo > cfg.tol {
            let m = (lo + hi) * T::lit(0.5);
            if m <= lo || m >= hi {
                break;
            }
            if self.raw_xi_roots(m).is_empty() {
                lo = m;
            } else {
                hi = m;
            }
        }
        let roots = self.raw_xi_roots(hi);
        let two = T::lit(2.0);
        let slack = (hi - lo).max(T::lit(1e-9));
        // a root entering through ξ = 2 sits next to 2; a tangency produces
        // a close pair
        let near_two = roots.first().is_some_and(|&r| {
            let d = self.xi_d_xi.eval(two, hi).abs().max(T::epsilon());
            (r - two) < T::lit(1e3) * slack * self.xi_d_alpha.eval(two, hi).abs() / d + T::lit(1e-6)
        });
        let mid = (lo + hi) * T::lit(0.5);
        let (kind, xi, alpha) = if near_two && roots.len() % 2 == 1 {
            let alpha = self
                .polish_endpoint(mid)
                .filter(|a| (*a - mid).abs() < T::lit(1e-6))
                .unwrap_or(mid);
            (TransitionKind::Endpoint, two, alpha)
        } else {
            let guess = if roots.len() >= 2 {
                (roots[0] + roots[1]) * T::lit(0.5)
            } else {
                roots.first().copied().unwrap_or(two)
            };
            match self
                .polish_tangency(guess, mid)
                .filter(|(_, a)| (*a - mid).abs() < T::lit(1e-6))
            {
                Some((x, a)) => (TransitionKind::Tangency, x, a),
                None => (TransitionKind::Tangency, guess, mid),
            }
        };
        let branch_check = match self.k {
            5 | 6 => Some(branch_minimum::<T>(self.k)?),
            _ => None,
        };
        Ok(CriticalOutcome::Critical(CriticalValue {
            alpha,
            xi,
            kind,
            bracket: (lo, hi),
            branch_check,
        }))
    }

    /// Counts and back-substituted solutions at `α`.
    pub fn classify<T: Real>(
        &self,
        alpha: T,
        cfg: &ClassifyConfig<T>,
    ) -> Result<ClassificationReport<T>> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::NonPositive {
                what: "alpha",
                value: alpha.to_f64_lossy(),
            });
        }
        let two = T::lit(2.0);
        let p = self.xi_poly.at(alpha);
        let pa = self.xi_d_alpha.at(alpha);
        let upper = self.xi_upper(&p);
        let mut roots: Vec<T> = isolate_float(&p, two, upper, cfg.root_tol)?
            .into_iter()
            .map(|b| b.root)
            .filter(|&r| r > two)
            .collect();
        let mut boundary = false;

        // a root crossing ξ = 2
        let (p2, pa2) = (p.eval(&two), pa.eval(&two));
        if pa2 != T::zero() && p2.abs() < cfg.boundary_tol * pa2.abs() {
            boundary = true;
            let slope = p.derivative().eval(&two).abs().max(T::epsilon());
            let reach = T::lit(4.0) * cfg.boundary_tol * pa2.abs() / slope + T::lit(1e-12);
            roots.retain(|&r| r - two > reach);
        }

        // double roots appearing or splitting at critical points
        let p2nd = p.derivative().derivative();
        for c in critical_points(&p, two, upper, cfg.root_tol) {
            if c <= two {
                continue;
            }
            let (pc, pac) = (p.eval(&c), pa.eval(&c));
            if pac == T::zero() || !(pc.abs() < cfg.boundary_tol * pac.abs()) {
                continue;
            }
            boundary = true;
            let curv = p2nd.eval(&c).abs().max(T::epsilon());
            let reach = T::lit(2.0) * (T::lit(2.0) * cfg.boundary_tol * pac.abs() / curv).sqrt()
                + T::lit(1e-12);
            roots.retain(|&r| (r - c).abs() > reach);
            roots.push(c);
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let params = ModelParams::from_alpha(self.k, self.k, alpha)?;
        let mut solutions = vec![Solution {
            xi: None,
            u: T::one(),
            field: Some(FieldVector::zero()),
            residual: T::zero(),
            residual_z: T::zero(),
        }];
        for &xi in &roots {
            let s = (xi * xi - T::lit(4.0)).max(T::zero()).sqrt();
            let big = (xi + s) * T::lit(0.5);
            for u in [T::one() / big, big] {
                solutions.push(self.back_substitute(xi, u, &params));
            }
        }
        let wp_count = solutions[1..].iter().filter(|s| s.field.is_some()).count();
        let big_n = 1 + 2 * roots.len();
        let max_residual = solutions
            .iter()
            .filter(|s| s.field.is_some())
            .fold(T::zero(), |m, s| m.max(s.residual).max(s.residual_z));
        Ok(ClassificationReport {
            alpha,
            k: self.k,
            n_alpha: roots.len(),
            big_n_alpha: big_n,
            wp_count,
            rejected: big_n - 1 - wp_count,
            boundary_flag: boundary,
            xi_roots: roots,
            solutions,
            max_residual,
        })
    }

    /// `u ↦ (z₁, z₂, z₃, z₄) = (u^{−k}, (α − u)/(αu − 1), 1/z₂, u^k)`.
    fn back_substitute<T: Real>(&self, xi: T, u: T, params: &ModelParams<T>) -> Solution<T> {
        let alpha = params.alpha;
        let z2 = (alpha - u) / (alpha * u - T::one());
        if !(z2 > T::zero()) || !z2.is_finite() || !(u > T::zero()) {
            return Solution {
                xi: Some(xi),
                u,
                field: None,
                residual: T::infinity(),
                residual_z: T::infinity(),
            };
        }
        let half = T::lit(0.5);
        let h1 = -T::from_usize(self.k).unwrap() * half * u.ln();
        let h2 = half * z2.ln();
        let field = FieldVector::on_i3(h1, h2);
        let z = [
            u.powi(-(self.k as i32)),
            z2,
            T::one() / z2,
            u.powi(self.k as i32),
        ];
        Solution {
            xi: Some(xi),
            u,
            residual: w_residual(&field, params),
            residual_z: system8_residual(&z, params),
            field: Some(field),
        }
    }
}

/// One-shot [`Reduction::critical_alpha`] with default settings.
pub fn critical_alpha(k: usize) -> Result<CriticalOutcome<f64>> {
    Reduction::new(k)?.critical_alpha(&CriticalConfig::default())
}

/// One-shot [`Reduction::classify`] with default settings.
pub fn classify(alpha: f64, k: usize) -> Result<ClassificationReport<f64>> {
    Reduction::new(k)?.classify(alpha, &ClassifyConfig::default())
}
