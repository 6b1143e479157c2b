//! Finite-volume Gibbs measures on `V_n` by exhaustive enumeration, the
//! marginal compatibility check between consecutive volumes, and
//! single-site magnetization.
//!
//! Configuration `c` of a ball assigns spin `+1` to vertex `i` iff bit `i`
//! of `c` is set, with vertices in ball order. Since `V_{n−1}` is a prefix of
//! `V_n`, the low bits of a configuration on `V_n` are its restriction.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{recursion_f, FieldVector, ModelParams};
use crate::scalar::Real;
use crate::tree::{enumerate_ball, field_index, successors, Ball, SubgroupSpec, TreeWord};

/// Largest `|V_n|` enumerated by default: `2²⁰` configurations.
pub const DEFAULT_MEASURE_CAP: usize = 20;

const BLOCK: usize = 1 << 12;

/// Spins on `V_n` in ball order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    spins: Vec<i8>,
}

impl Configuration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(s) = spins.iter().find(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter(format!("spin must be ±1, got {s}")));
        }
        Ok(Configuration { spins })
    }

    pub fn all_plus(len: usize) -> Self {
        Configuration {
            spins: vec![1; len],
        }
    }

    /// Decodes a configuration index.
    pub fn from_index(index: u64, len: usize) -> Self {
        Configuration {
            spins: (0..len)
                .map(|i| if index >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn flip(&mut self, i: usize) {
        self.spins[i] = -self.spins[i];
    }
}

/// `−J Σ_{⟨x,y⟩ ∈ L_n} σ(x)σ(y)`
pub fn hamiltonian<T: Real>(
    ball: &Ball,
    sigma: &Configuration,
    params: &ModelParams<T>,
) -> Result<T> {
    if sigma.len() != ball.len() {
        return Err(Error::IncompleteConfiguration {
            got: sigma.len(),
            expected: ball.len(),
        });
    }
    let s = sigma.spins();
    let bonds: i64 = ball
        .edges()
        .iter()
        .map(|&(p, c)| (s[p] * s[c]) as i64)
        .sum();
    Ok(-params.coupling * T::from_i64(bonds).unwrap())
}

/// `μ_n` as a table over all `2^{|V_n|}` configurations.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteMeasure<T> {
    pub n: usize,
    pub vertices: Vec<TreeWord>,
    /// Probabilities indexed by configuration index.
    pub weights: Vec<T>,
    /// `ln Z_n`
    pub log_z: T,
}

impl<T: Real> FiniteMeasure<T> {
    /// `Z_n`
    pub fn partition(&self) -> T {
        self.log_z.exp()
    }

    pub fn probability(&self, sigma: &Configuration) -> Result<T> {
        if sigma.len() != self.vertices.len() {
            return Err(Error::IncompleteConfiguration {
                got: sigma.len(),
                expected: self.vertices.len(),
            });
        }
        Ok(self.weights[sigma.index() as usize])
    }

    pub fn total(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// Marginal on the first `len` vertices (a sub-ball `V_m`).
    pub fn marginal_prefix(&self, len: usize) -> Vec<T> {
        let mask = (1usize << len) - 1;
        let mut out = vec![T::zero(); 1 << len];
        for (c, &w) in self.weights.iter().enumerate() {
            out[c & mask] = out[c & mask] + w;
        }
        out
    }
}

/// Enumerates `μ_n(σ) ∝ exp(−βH(σ) + Σ_{x∈W_n} h_x σ(x))`. `field` lists
/// `h_x` for the boundary shell in ball order.
pub fn finite_measure<T: Real>(
    ball: &Ball,
    field: &[T],
    params: &ModelParams<T>,
    cap: usize,
) -> Result<FiniteMeasure<T>> {
    let len = ball.len();
    if len > cap {
        return Err(Error::EnumerationCap {
            requested: 1u128 << len.min(127),
            cap: 1u128 << cap.min(127),
        });
    }
    let n = ball.radius();
    let range = ball.shell_range(n);
    if field.len() != range.len() {
        return Err(Error::MissingField);
    }
    let bj = params.beta * params.coupling;
    let edges = ball.edges();
    let start = range.start;
    let log_weight = |c: usize| {
        let spin = |i: usize| if c >> i & 1 == 1 { T::one() } else { -T::one() };
        let bonds = edges
            .iter()
            .fold(T::zero(), |a, &(p, q)| a + spin(p) * spin(q));
        let ext = field
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (j, &h)| a + h * spin(start + j));
        bj * bonds + ext
    };
    let mut logs = vec![T::zero(); 1 << len];
    logs.par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(b, chunk)| {
            for (j, slot) in chunk.iter_mut().enumerate() {
                *slot = log_weight(b * BLOCK + j);
            }
        });
    if logs.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite Boltzmann exponent".into(),
        ));
    }
    let peak = logs.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    let mut weights = logs;
    weights.par_iter_mut().for_each(|v| *v = (*v - peak).exp());
    // fixed summation order keeps the result independent of thread count
    let sum = weights.iter().fold(T::zero(), |a, &w| a + w);
    weights.par_iter_mut().for_each(|w| *w = *w / sum);
    Ok(FiniteMeasure {
        n,
        vertices: ball.vertices().to_vec(),
        weights,
        log_z: peak + sum.ln(),
    })
}

/// How the root obtains a field when `n = 0`; the root has no parent and so
/// no coset index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootRule {
    /// `h₁ + f(h₁)`: the root sits in `H_A` like an index-1 vertex and has
    /// one extra successor in `H_A`. Agrees with [`RootRule::Recursion`]
    /// exactly when the first fixed-point equation holds.
    #[default]
    Anchored,
    /// `Σ_{y ∈ S(root)} f(h_y)` over all `k + 1` successors. Makes the `n = 1`
    /// check hold for every vector.
    Recursion,
}

impl std::str::FromStr for RootRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "anchored" => Ok(RootRule::Anchored),
            "recursion" => Ok(RootRule::Recursion),
            _ => Err(Error::InvalidParameter(format!("unknown root rule {s:?}"))),
        }
    }
}

fn check_sub<T>(params: &ModelParams<T>, sub: &SubgroupSpec) -> Result<()> {
    if params.k != sub.order() {
        return Err(Error::OrderMismatch(params.k, sub.order()));
    }
    if params.card_a != sub.card() {
        return Err(Error::InvalidCardA {
            card_a: sub.card(),
            k: params.k,
        });
    }
    Ok(())
}

/// Root field under `rule`.
pub fn root_field<T: Real>(
    h: &FieldVector<T>,
    params: &ModelParams<T>,
    sub: &SubgroupSpec,
    rule: RootRule,
) -> Result<T> {
    check_sub(params, sub)?;
    match rule {
        RootRule::Anchored => Ok(h.h[0] + recursion_f(h.h[0], params.theta)?),
        RootRule::Recursion => {
            let root = TreeWord::root(params.k)?;
            successors(&root).iter().try_fold(T::zero(), |acc, y| {
                let idx = field_index(y, sub)?;
                Ok(acc + recursion_f(h.h[idx.slot()], params.theta)?)
            })
        }
    }
}

/// Boundary field on `W_n` of the weakly periodic assignment `x ↦ h_{i(x)}`.
pub fn weakly_periodic_field<T: Real>(
    ball: &Ball,
    h: &FieldVector<T>,
    params: &ModelParams<T>,
    sub: &SubgroupSpec,
    rule: RootRule,
) -> Result<Vec<T>> {
    check_sub(params, sub)?;
    if ball.order() != params.k {
        return Err(Error::OrderMismatch(ball.order(), params.k));
    }
    if ball.radius() == 0 {
        return Ok(vec![root_field(h, params, sub, rule)?]);
    }
    ball.boundary()
        .iter()
        .map(|x| Ok(h.h[field_index(x, sub)?.slot()]))
        .collect()
}

/// `μ_n` for the weakly periodic assignment of `h`.
pub fn weakly_periodic_measure<T: Real>(
    n: usize,
    h: &FieldVector<T>,
    params: &ModelParams<T>,
    sub: &SubgroupSpec,
    rule: RootRule,
    cap: usize,
) -> Result<FiniteMeasure<T>> {
    let ball = enumerate_ball(n, params.k, cap)?;
    let field = weakly_periodic_field(&ball, h, params, sub, rule)?;
    finite_measure(&ball, &field, params, cap)
}

/// `max_{σ_{n−1}} |Σ_{σ^{(n)}} μ_n(σ_{n−1} ∨ σ^{(n)}) − μ_{n−1}(σ_{n−1})|`
pub fn compatibility_defect<T: Real>(
    n: usize,
    h: &FieldVector<T>,
    params: &ModelParams<T>,
    sub: &SubgroupSpec,
    rule: RootRule,
) -> Result<T> {
    compatibility_defect_capped(n, h, params, sub, rule, DEFAULT_MEASURE_CAP)
}

pub fn compatibility_defect_capped<T: Real>(
    n: usize,
    h: &FieldVector<T>,
    params: &ModelParams<T>,
    sub: &SubgroupSpec,
    rule: RootRule,
    cap: usize,
) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("compatibility needs n ≥ 1".into()));
    }
    let outer = weakly_periodic_measure(n, h, params, sub, rule, cap)?;
    let inner = weakly_periodic_measure(n - 1, h, params, sub, rule, cap)?;
    Ok(max_gap(
        &outer.marginal_prefix(inner.vertices.len()),
        &inner.weights,
    ))
}

/// Sup-distance between two probability tables.
pub fn max_gap<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

/// `E_μ[σ(x)]`
pub fn magnetization<T: Real>(mu: &FiniteMeasure<T>, x: &TreeWord) -> Result<T> {
    let i = mu
        .vertices
        .binary_search(x)
        .map_err(|_| Error::VertexOutsideBall)?;
    Ok(mu
        .weights
        .iter()
        .enumerate()
        .fold(
            T::zero(),
            |acc, (c, &w)| if c >> i & 1 == 1 { acc + w } else { acc - w },
        ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::InvariantSet;
    use crate::fields::{apply_w, fixed_points_w, Restriction, SearchConfig};
    use proptest::prelude::*;

    fn params(k: usize, a: usize, theta: f64) -> ModelParams<f64> {
        ModelParams::from_theta(k, a, theta).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let ball = enumerate_ball(1, 2, 64).unwrap();
        let p = ModelParams::<f64>::from_coupling(2, 1, 0.7, 1.0).unwrap();
        let plus = Configuration::all_plus(ball.len());
        assert!((hamiltonian(&ball, &plus, &p).unwrap() + 3.0 * 0.7).abs() < 1e-15);

        let leaf = ball.len() - 1;
        let mut flipped = plus.clone();
        flipped.flip(leaf);
        let dh = hamiltonian(&ball, &flipped, &p).unwrap() - hamiltonian(&ball, &plus, &p).unwrap();
        assert!((dh - 2.0 * 0.7 * 1.0 * 1.0).abs() < 1e-15);

        let free = ModelParams::from_coupling(2, 1, 0.0, 1.0).unwrap();
        let mixed = Configuration::from_index(0b0101, ball.len());
        assert_eq!(hamiltonian(&ball, &mixed, &free).unwrap(), 0.0);

        let short = Configuration::all_plus(2);
        assert_eq!(
            hamiltonian(&ball, &short, &p),
            Err(Error::IncompleteConfiguration {
                got: 2,
                expected: 4
            })
        );
        assert!(Configuration::new(vec![1, 0]).is_err());
    }

    #[test]
    fn configuration_index_round_trip() {
        for c in 0..64u64 {
            assert_eq!(Configuration::from_index(c, 6).index(), c);
        }
    }

    #[test]
    fn two_point_measure_at_n0() {
        let ball = enumerate_ball(0, 3, 64).unwrap();
        let p = params(3, 1, 0.4);
        let mu = finite_measure(&ball, &[0.0], &p, 20).unwrap();
        assert_eq!(mu.weights, vec![0.5, 0.5]);
        let mu = finite_measure(&ball, &[0.3], &p, 20).unwrap();
        assert!((mu.weights[1] / mu.weights[0] - (0.6f64).exp()).abs() < 1e-12);
        let hot = ModelParams::from_coupling(3, 1, 0.4, 9.0).unwrap();
        let mu2 = finite_measure(&ball, &[0.3], &hot, 20).unwrap();
        assert_eq!(mu.weights, mu2.weights);
    }

    #[test]
    fn free_measure_is_uniform() {
        let ball = enumerate_ball(2, 2, 64).unwrap();
        let p = params(2, 1, 0.0);
        let field = vec![0.0; ball.boundary().len()];
        let mu = finite_measure(&ball, &field, &p, 20).unwrap();
        let u = 1.0 / (1u64 << ball.len()) as f64;
        assert!(mu.weights.iter().all(|&w| (w - u).abs() < 1e-15));
        assert!((mu.log_z - ball.len() as f64 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let ball = enumerate_ball(2, 3, 64).unwrap();
        let field = vec![0.0; ball.boundary().len()];
        let err = finite_measure(&ball, &field, &params(3, 1, 0.2), 10).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { .. }));
        assert_eq!(
            finite_measure(&ball, &[0.0], &params(3, 1, 0.2), 20).unwrap_err(),
            Error::MissingField
        );
    }

    #[test]
    fn large_exponents_stay_finite() {
        let ball = enumerate_ball(1, 3, 64).unwrap();
        let p = ModelParams::<f64>::from_coupling(3, 1, 10.0, 1.0).unwrap();
        let mu = finite_measure(&ball, &[300.0; 4], &p, 20).unwrap();
        assert!((mu.total() - 1.0).abs() < 1e-12);
        assert!(mu.log_z.is_finite());
    }

    #[test]
    fn zero_vector_is_compatible() {
        for (k, a) in [(2, 1), (2, 2), (3, 2), (5, 3)] {
            let sub = SubgroupSpec::first(k, a).unwrap();
            let p = params(k, a, -0.6);
            let max_n = if k == 5 { 1 } else { 2 };
            for n in 1..=max_n {
                let d = compatibility_defect(n, &FieldVector::zero(), &p, &sub, RootRule::Anchored)
                    .unwrap();
                assert!(d < 1e-12, "k={k} n={n} d={d}");
            }
        }
    }

    #[test]
    fn fixed_points_are_compatible() {
        let sub = SubgroupSpec::first(2, 2).unwrap();
        let p = ModelParams::from_alpha(2, 2, 0.2).unwrap();
        let found = fixed_points_w(&p, Restriction::None, &SearchConfig::default()).unwrap();
        assert!(found.points.len() > 1);
        for h in &found.points {
            let d = compatibility_defect(2, h, &p, &sub, RootRule::Anchored).unwrap();
            assert!(d < 1e-10, "{h:?} {d}");
        }
    }

    #[test]
    fn perturbed_vector_is_detected() {
        let sub = SubgroupSpec::first(2, 2).unwrap();
        let p = ModelParams::from_alpha(2, 2, 0.2).unwrap();
        let found = fixed_points_w(&p, Restriction::None, &SearchConfig::default()).unwrap();
        for h in &found.points {
            let mut bad = *h;
            bad.h[1] += 0.2;
            let d = compatibility_defect(2, &bad, &p, &sub, RootRule::Anchored).unwrap();
            assert!(d > 1e-4, "{h:?} {d}");
        }
    }

    #[test]
    fn recursion_root_rule_hides_n1_defects() {
        let sub = SubgroupSpec::first(3, 2).unwrap();
        let p = params(3, 2, 0.7);
        let h = FieldVector::new(0.9, -0.3, 0.4, 0.1);
        assert!(w_defect(&h, &p) > 0.1);
        let d = compatibility_defect(1, &h, &p, &sub, RootRule::Recursion).unwrap();
        assert!(d < 1e-14);
        let d = compatibility_defect(1, &h, &p, &sub, RootRule::Anchored).unwrap();
        assert!(d > 1e-3);
    }

    fn w_defect(h: &FieldVector<f64>, p: &ModelParams<f64>) -> f64 {
        apply_w(h, p).unwrap().sup_distance(h)
    }

    #[test]
    fn root_rules_agree_at_fixed_points() {
        let sub = SubgroupSpec::first(3, 3).unwrap();
        let p = ModelParams::<f64>::from_alpha(3, 3, 0.2).unwrap();
        for h in fixed_points_w(&p, Restriction::None, &SearchConfig::default())
            .unwrap()
            .points
        {
            let a = root_field(&h, &p, &sub, RootRule::Anchored).unwrap();
            let r = root_field(&h, &p, &sub, RootRule::Recursion).unwrap();
            assert!((a - r).abs() < 1e-10);
        }
    }

    #[test]
    fn double_marginal_is_transitive() {
        let sub = SubgroupSpec::first(2, 1).unwrap();
        let p = ModelParams::from_alpha(2, 1, 0.15).unwrap();
        let h = fixed_points_w(&p, Restriction::None, &SearchConfig::default())
            .unwrap()
            .points
            .into_iter()
            .max_by(|a, b| a.sup_norm().partial_cmp(&b.sup_norm()).unwrap())
            .unwrap();
        assert!(h.sup_norm() > 0.1);
        let mu2 = weakly_periodic_measure(2, &h, &p, &sub, RootRule::Anchored, 20).unwrap();
        let mu0 = weakly_periodic_measure(0, &h, &p, &sub, RootRule::Anchored, 20).unwrap();
        assert!(max_gap(&mu2.marginal_prefix(1), &mu0.weights) < 1e-10);
    }

    #[test]
    fn magnetization_examples() {
        let ball = enumerate_ball(1, 2, 64).unwrap();
        let mu = finite_measure(&ball, &[0.0; 3], &params(2, 1, 0.5), 20).unwrap();
        for x in ball.vertices() {
            assert!(magnetization(&mu, x).unwrap().abs() < 1e-15);
        }
        let free = finite_measure(&ball, &[0.3, -0.8, 1.1], &params(2, 1, 0.0), 20).unwrap();
        for (x, h) in ball.boundary().iter().zip([0.3f64, -0.8, 1.1]) {
            assert!((magnetization(&free, x).unwrap() - h.tanh()).abs() < 1e-14);
        }
        let far = TreeWord::new(2, &[1, 2]).unwrap();
        assert_eq!(magnetization(&mu, &far), Err(Error::VertexOutsideBall));
    }

    #[test]
    fn i3_magnetization_is_odd() {
        let k = 5;
        let sub = SubgroupSpec::first(k, k).unwrap();
        let p = ModelParams::<f64>::from_alpha(k, k, 3.0).unwrap();
        let pts = fixed_points_w(
            &p,
            Restriction::Set(InvariantSet::I3),
            &SearchConfig::default(),
        )
        .unwrap();
        let root = TreeWord::root(k).unwrap();
        for h in pts.points {
            let m = magnetization(
                &weakly_periodic_measure(1, &h, &p, &sub, RootRule::Anchored, 20).unwrap(),
                &root,
            )
            .unwrap();
            let neg = magnetization(
                &weakly_periodic_measure(1, &-h, &p, &sub, RootRule::Anchored, 20).unwrap(),
                &root,
            )
            .unwrap();
            assert!((m + neg).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_subgroup_is_rejected() {
        let p = params(3, 2, 0.3);
        let sub = SubgroupSpec::first(2, 2).unwrap();
        assert!(
            compatibility_defect(1, &FieldVector::zero(), &p, &sub, RootRule::Anchored).is_err()
        );
        let sub = SubgroupSpec::first(3, 1).unwrap();
        assert!(
            compatibility_defect(1, &FieldVector::zero(), &p, &sub, RootRule::Anchored).is_err()
        );
        let sub = SubgroupSpec::first(3, 2).unwrap();
        assert!(
            compatibility_defect(0, &FieldVector::zero(), &p, &sub, RootRule::Anchored).is_err()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn weights_normalise(theta in -0.95f64..0.95, h in proptest::collection::vec(-3.0f64..3.0, 4)) {
            let ball = enumerate_ball(1, 3, 64).unwrap();
            let mu = finite_measure(&ball, &h, &params(3, 1, theta), 20).unwrap();
            prop_assert!((mu.total() - 1.0).abs() < 1e-12);
            prop_assert!(mu.weights.iter().all(|&w| w > 0.0));
            prop_assert!(mu.partition() > 0.0);
        }
    }
}
