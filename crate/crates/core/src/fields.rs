//! Boundary-field recursion, the operator `W` on the four weakly periodic
//! field values, its invariant sets and fixed points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::{damped_iteration, newton_corrector};

/// Tree order, subgroup size and the coupling in all three of its guises.
///
/// Only `θ = tanh(Jβ)` enters the recursion; `α = (1 − θ)/(1 + θ)` is what
/// the counting results are stated in. When built from `θ` or `α` the
/// temperature is normalised to `β = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams<T> {
    pub k: usize,
    pub card_a: usize,
    pub coupling: T,
    pub beta: T,
    pub theta: T,
    pub alpha: T,
}

impl<T: Real> ModelParams<T> {
    fn check_shape(k: usize, card_a: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidOrder(k));
        }
        if card_a == 0 || card_a > k {
            return Err(Error::InvalidCardA { card_a, k });
        }
        Ok(())
    }

    fn finish(k: usize, card_a: usize, coupling: T, beta: T, theta: T) -> Result<Self> {
        if !(theta.abs() < T::one()) {
            return Err(Error::ThetaOutOfRange(theta.to_f64_lossy()));
        }
        let alpha = (T::one() - theta) / (T::one() + theta);
        Ok(ModelParams {
            k,
            card_a,
            coupling,
            beta,
            theta,
            alpha,
        })
    }

    pub fn from_coupling(k: usize, card_a: usize, coupling: T, beta: T) -> Result<Self> {
        Self::check_shape(k, card_a)?;
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::NonPositive {
                what: "beta",
                value: beta.to_f64_lossy(),
            });
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidParameter("J must be finite".into()));
        }
        Self::finish(k, card_a, coupling, beta, (coupling * beta).tanh())
    }

    pub fn from_theta(k: usize, card_a: usize, theta: T) -> Result<Self> {
        Self::check_shape(k, card_a)?;
        if !(theta.abs() < T::one()) {
            return Err(Error::ThetaOutOfRange(theta.to_f64_lossy()));
        }
        Self::finish(k, card_a, theta.atanh(), T::one(), theta)
    }

    pub fn from_alpha(k: usize, card_a: usize, alpha: T) -> Result<Self> {
        Self::check_shape(k, card_a)?;
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::NonPositive {
                what: "alpha",
                value: alpha.to_f64_lossy(),
            });
        }
        let theta = (T::one() - alpha) / (T::one() + alpha);
        let mut p = Self::finish(k, card_a, theta.atanh(), T::one(), theta)?;
        // keep the caller's α bit-exact rather than the round-tripped value
        p.alpha = alpha;
        Ok(p)
    }

    /// `k · artanh|θ|`: every component of `W(h)` lies within this bound.
    pub fn field_bound(&self) -> T {
        T::from_usize(self.k).unwrap() * self.theta.abs().atanh()
    }
}

/// `f(h, θ) = artanh(θ tanh h)`.
pub fn recursion_f<T: Real>(h: T, theta: T) -> Result<T> {
    if !(theta.abs() < T::one()) {
        return Err(Error::ThetaOutOfRange(theta.to_f64_lossy()));
    }
    Ok(f(h, theta))
}

#[inline]
fn f<T: Real>(h: T, theta: T) -> T {
    (theta * h.tanh()).atanh()
}

/// The same map in the exponential coordinate `z = e^{2h}`:
/// `(z + α)/(αz + 1)`.
pub fn mobius_f<T: Real>(z: T, alpha: T) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::NonPositive {
            what: "z",
            value: z.to_f64_lossy(),
        });
    }
    if !(alpha > T::zero()) {
        return Err(Error::NonPositive {
            what: "alpha",
            value: alpha.to_f64_lossy(),
        });
    }
    Ok(mobius(z, alpha))
}

#[inline]
fn mobius<T: Real>(z: T, alpha: T) -> T {
    (z + alpha) / (alpha * z + T::one())
}

/// The quadruple `(h₁, h₂, h₃, h₄)` of field values on the four
/// (coset of x, coset of x↓) classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldVector<T> {
    pub h: [T; 4],
}

impl<T: Real> FieldVector<T> {
    pub fn new(h1: T, h2: T, h3: T, h4: T) -> Self {
        FieldVector {
            h: [h1, h2, h3, h4],
        }
    }

    pub fn zero() -> Self {
        FieldVector { h: [T::zero(); 4] }
    }

    /// The point `(h₁, h₂, −h₂, −h₁)` of `I₃`.
    pub fn on_i3(h1: T, h2: T) -> Self {
        Self::new(h1, h2, -h2, -h1)
    }

    pub fn sup_distance(&self, other: &Self) -> T {
        self.h
            .iter()
            .zip(&other.h)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn sup_norm(&self) -> T {
        self.h.iter().fold(T::zero(), |m, &a| m.max(a.abs()))
    }

    pub fn in_i1(&self, tol: T) -> bool {
        let [a, b, c, d] = self.h;
        (a - b).abs() <= tol && (a - c).abs() <= tol && (a - d).abs() <= tol
    }

    pub fn in_i2(&self, tol: T) -> bool {
        let [a, b, c, d] = self.h;
        (a - d).abs() <= tol && (b - c).abs() <= tol
    }

    pub fn in_i3(&self, tol: T) -> bool {
        let [a, b, c, d] = self.h;
        (a + d).abs() <= tol && (b + c).abs() <= tol
    }

    pub fn memberships(&self, tol: T) -> Vec<InvariantSet> {
        let mut out = Vec::new();
        if self.in_i1(tol) {
            out.push(InvariantSet::I1);
        }
        if self.in_i2(tol) {
            out.push(InvariantSet::I2);
        }
        if self.in_i3(tol) {
            out.push(InvariantSet::I3);
        }
        out
    }

    /// `(h₄, h₃, h₂, h₁)`
    pub fn swapped(&self) -> Self {
        let [a, b, c, d] = self.h;
        Self::new(d, c, b, a)
    }
}

impl<T: Real> std::ops::Neg for FieldVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        FieldVector {
            h: self.h.map(|v| -v),
        }
    }
}

/// The operator `W` on `R⁴` for `|A| = card_a`.
pub fn apply_w<T: Real>(h: &FieldVector<T>, params: &ModelParams<T>) -> Result<FieldVector<T>> {
    if params.card_a == 0 || params.card_a > params.k {
        return Err(Error::InvalidCardA {
            card_a: params.card_a,
            k: params.k,
        });
    }
    Ok(w_unchecked(h, params))
}

fn w_unchecked<T: Real>(h: &FieldVector<T>, p: &ModelParams<T>) -> FieldVector<T> {
    let [h1, h2, h3, h4] = h.h.map(|v| f(v, p.theta));
    let (a, k) = (
        T::from_usize(p.card_a).unwrap(),
        T::from_usize(p.k).unwrap(),
    );
    let one = T::one();
    FieldVector::new(
        a * h3 + (k - a) * h1,
        (a - one) * h3 + (k + one - a) * h1,
        (a - one) * h2 + (k + one - a) * h4,
        a * h2 + (k - a) * h4,
    )
}

/// `‖W(h) − h‖∞`.
pub fn w_residual<T: Real>(h: &FieldVector<T>, params: &ModelParams<T>) -> T {
    w_unchecked(h, params).sup_distance(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InvariantSet {
    I1,
    I2,
    I3,
}

/// Where the fixed-point search runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Restriction {
    #[default]
    None,
    Set(InvariantSet),
}

impl std::str::FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "r4" => Ok(Restriction::None),
            "i1" => Ok(Restriction::Set(InvariantSet::I1)),
            "i2" => Ok(Restriction::Set(InvariantSet::I2)),
            "i3" => Ok(Restriction::Set(InvariantSet::I3)),
            other => Err(Error::InvalidParameter(format!(
                "unknown restriction {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig<T> {
    /// Multistart points per coordinate axis.
    pub grid: usize,
    /// λ in `h ← (1 − λ) h + λ W(h)`.
    pub damping: T,
    pub damped_steps: usize,
    pub corrector_tol: T,
    pub max_iter: usize,
    pub residual_tol: T,
    pub dedup_tol: T,
    pub seed: u64,
    /// Start jitter as a fraction of the grid spacing.
    pub jitter: T,
}

impl<T: Real> Default for SearchConfig<T> {
    fn default() -> Self {
        SearchConfig {
            grid: 9,
            damping: T::lit(0.5),
            damped_steps: 25,
            corrector_tol: T::corrector_tol(),
            max_iter: 200,
            residual_tol: T::residual_tol(),
            dedup_tol: T::dedup_tol(),
            seed: 0,
            jitter: T::lit(0.05),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FixedPointSearch<T> {
    /// Distinct fixed points, in deterministic lexicographic order.
    pub points: Vec<FieldVector<T>>,
    pub starts: usize,
    /// Corrector runs that did not reach the tolerance.
    pub failed: usize,
}

/// Restricted map in reduced coordinates together with its embedding.
struct Reduced<'a, T> {
    dim: usize,
    params: &'a ModelParams<T>,
    set: Restriction,
}

impl<T: Real> Reduced<'_, T> {
    fn embed(&self, x: &[T]) -> FieldVector<T> {
        match self.set {
            Restriction::None => FieldVector::new(x[0], x[1], x[2], x[3]),
            Restriction::Set(InvariantSet::I1) => FieldVector::new(x[0], x[0], x[0], x[0]),
            Restriction::Set(InvariantSet::I2) => FieldVector::new(x[0], x[1], x[1], x[0]),
            Restriction::Set(InvariantSet::I3) => FieldVector::on_i3(x[0], x[1]),
        }
    }

    fn map(&self, x: &[T]) -> Vec<T> {
        let p = self.params;
        let (a, k) = (
            T::from_usize(p.card_a).unwrap(),
            T::from_usize(p.k).unwrap(),
        );
        let one = T::one();
        match self.set {
            Restriction::None => w_unchecked(&self.embed(x), p).h.to_vec(),
            Restriction::Set(InvariantSet::I1) => vec![k * f(x[0], p.theta)],
            Restriction::Set(InvariantSet::I2) => {
                let (f1, f2) = (f(x[0], p.theta), f(x[1], p.theta));
                vec![a * f2 + (k - a) * f1, (a - one) * f2 + (k + one - a) * f1]
            }
            Restriction::Set(InvariantSet::I3) => {
                let (f1, f2) = (f(x[0], p.theta), f(x[1], p.theta));
                vec![-a * f2 + (k - a) * f1, -(a - one) * f2 + (k + one - a) * f1]
            }
        }
    }
}

fn lattice<T: Real>(dim: usize, bound: T, cfg: &SearchConfig<T>) -> Vec<Vec<T>> {
    let n = cfg.grid.max(1);
    let axis: Vec<T> = if n == 1 {
        vec![T::zero()]
    } else {
        (0..n)
            .map(|i| {
                -bound + (bound + bound) * T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap()
            })
            .collect()
    };
    let spacing = if n == 1 {
        bound
    } else {
        (bound + bound) / T::from_usize(n - 1).unwrap()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = n.pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut pt = Vec::with_capacity(dim);
        for _ in 0..dim {
            let u: f64 = rng.random_range(-1.0..1.0);
            pt.push(axis[idx % n] + cfg.jitter * spacing * T::lit(u));
            idx /= n;
        }
        out.push(pt);
    }
    out
}

fn lex_key<T: Real>(v: &FieldVector<T>) -> [i64; 4] {
    v.h.map(|x| (x.to_f64_lossy() * 1e9).round() as i64)
}

/// Fixed points of `W`, optionally restricted to an invariant set.
///
/// Multistart on a jittered lattice filling the invariant box
/// `[−k·artanh|θ|, k·artanh|θ|]^d`; each start is corrected by Newton both
/// directly and after a short damped iteration. Every returned point has
/// `‖W(h) − h‖∞ < residual_tol`.
pub fn fixed_points_w<T: Real>(
    params: &ModelParams<T>,
    restrict: Restriction,
    cfg: &SearchConfig<T>,
) -> Result<FixedPointSearch<T>> {
    if params.card_a == 0 || params.card_a > params.k {
        return Err(Error::InvalidCardA {
            card_a: params.card_a,
            k: params.k,
        });
    }
    if params.theta == T::zero() {
        return Ok(FixedPointSearch {
            points: vec![FieldVector::zero()],
            starts: 0,
            failed: 0,
        });
    }
    let dim = match restrict {
        Restriction::None => 4,
        Restriction::Set(InvariantSet::I1) => 1,
        Restriction::Set(_) => 2,
    };
    let reduced = Reduced {
        dim,
        params,
        set: restrict,
    };
    let map = |x: &[T]| reduced.map(x);
    let starts = lattice(reduced.dim, params.field_bound(), cfg);

    let mut found: Vec<FieldVector<T>> = vec![FieldVector::zero()];
    let mut failed = 0;
    for s in &starts {
        let seeded = damped_iteration(&map, s, cfg.damping, cfg.damped_steps);
        for init in [s.as_slice(), seeded.as_slice()] {
            let out = newton_corrector(&map, init, cfg.corrector_tol, cfg.max_iter);
            if !out.converged {
                failed += 1;
            }
            let h = reduced.embed(&out.x);
            if !(w_residual(&h, params) < cfg.residual_tol) {
                continue;
            }
            if found.iter().all(|g| g.sup_distance(&h) >= cfg.dedup_tol) {
                found.push(h);
            }
        }
    }
    found.sort_by_key(lex_key);
    Ok(FixedPointSearch {
        points: found,
        starts: starts.len(),
        failed,
    })
}

/// All real solutions of `h = k f(h, θ)`, sorted.
pub fn ti_solutions<T: Real>(params: &ModelParams<T>) -> Vec<T> {
    let theta = params.theta;
    if theta == T::zero() {
        return vec![T::zero()];
    }
    let k = T::from_usize(params.k).unwrap();
    // q(h) = k f(h)/h − 1 on [0, B]; q(0) is the limit kθ − 1
    let q = |h: T| {
        if h == T::zero() {
            k * theta - T::one()
        } else {
            k * f(h, theta) / h - T::one()
        }
    };
    let bound = params.field_bound();
    let n = 2000;
    let mut positive = Vec::new();
    let mut a = T::zero();
    let mut qa = q(a);
    for i in 1..=n {
        let b = bound * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
        let qb = q(b);
        if qb == T::zero() && b > T::zero() {
            positive.push(b);
        } else if qa * qb < T::zero() {
            let (mut lo, mut hi, mut qlo) = (a, b, qa);
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if mid <= lo || mid >= hi {
                    break;
                }
                let qm = q(mid);
                if qm == T::zero() {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (qm < T::zero()) == (qlo < T::zero()) {
                    lo = mid;
                    qlo = qm;
                } else {
                    hi = mid;
                }
            }
            let r = (lo + hi) * T::lit(0.5);
            if r > T::zero() {
                positive.push(r);
            }
        }
        a = b;
        qa = qb;
    }
    let mut out: Vec<T> = positive.iter().rev().map(|&r| -r).collect();
    out.push(T::zero());
    out.extend(positive);
    out
}

/// `zᵢ = e^{2hᵢ}`.
pub fn h_to_z<T: Real>(h: &FieldVector<T>) -> [T; 4] {
    h.h.map(|v| (v + v).exp())
}

pub fn z_to_h<T: Real>(z: &[T; 4]) -> Result<FieldVector<T>> {
    if let Some(&bad) = z.iter().find(|&&v| !(v > T::zero())) {
        return Err(Error::NonPositive {
            what: "z",
            value: bad.to_f64_lossy(),
        });
    }
    Ok(FieldVector {
        h: z.map(|v| v.ln() * T::lit(0.5)),
    })
}

/// Max absolute difference between each `zᵢ` and the right-hand side of the
/// fixed-point system written in `z` coordinates. Non-positive entries give
/// an infinite residual.
pub fn system8_residual<T: Real>(z: &[T; 4], params: &ModelParams<T>) -> T {
    if z.iter().any(|&v| !(v > T::zero())) {
        return T::infinity();
    }
    let a = params.card_a as i32;
    let k = params.k as i32;
    let m = z.map(|v| mobius(v, params.alpha));
    let rhs = [
        m[2].powi(a) * m[0].powi(k - a),
        m[2].powi(a - 1) * m[0].powi(k + 1 - a),
        m[1].powi(a - 1) * m[3].powi(k + 1 - a),
        m[1].powi(a) * m[3].powi(k - a),
    ];
    z.iter()
        .zip(rhs)
        .fold(T::zero(), |acc, (&zi, r)| acc.max((zi - r).abs()))
}
