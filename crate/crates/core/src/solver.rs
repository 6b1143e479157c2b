//! Small dense fixed-point machinery: damped iteration and a Newton corrector
//! with a finite-difference Jacobian. Dimensions here are 1, 2 or 4.

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct CorrectorOutcome<T> {
    pub x: Vec<T>,
    /// `‖G(x) − x‖∞` at the returned point.
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

fn sup_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

fn defect<T: Real>(map: &impl Fn(&[T]) -> Vec<T>, x: &[T]) -> Vec<T> {
    map(x).into_iter().zip(x).map(|(g, &xi)| g - xi).collect()
}

/// `x ← (1 − λ) x + λ G(x)`, `steps` times.
pub fn damped_iteration<T: Real>(
    map: &impl Fn(&[T]) -> Vec<T>,
    start: &[T],
    damping: T,
    steps: usize,
) -> Vec<T> {
    let mut x = start.to_vec();
    for _ in 0..steps {
        let g = map(&x);
        for (xi, gi) in x.iter_mut().zip(g) {
            *xi = (T::one() - damping) * *xi + damping * gi;
        }
    }
    x
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].abs() > T::epsilon() * T::lit(1e-3)) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (i, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (x, &v) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = *x - f * v;
            }
            let v = b[col];
            b[col + 1 + i] = b[col + 1 + i] - f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s = s - a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton on `F(x) = G(x) − x` with a central-difference Jacobian and
/// step halving. Stops when `‖F‖∞ < tol` or after `max_iter` iterations.
pub fn newton_corrector<T: Real>(
    map: &impl Fn(&[T]) -> Vec<T>,
    start: &[T],
    tol: T,
    max_iter: usize,
) -> CorrectorOutcome<T> {
    let n = start.len();
    let mut x = start.to_vec();
    let mut f = defect(map, &x);
    let mut r = sup_norm(&f);
    let fd_step = T::epsilon().cbrt();
    let mut it = 0;
    while it < max_iter && !(r < tol) {
        it += 1;
        let mut jac = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            let h = fd_step * (T::one() + x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] = xp[j] + h;
            xm[j] = xm[j] - h;
            let fp = defect(map, &xp);
            let fm = defect(map, &xm);
            for i in 0..n {
                jac[i][j] = (fp[i] - fm[i]) / (h + h);
            }
        }
        let Some(step) = solve_dense(jac, f.iter().map(|&v| -v).collect()) else {
            break;
        };
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &s)| a + lambda * s).collect();
            let ft = defect(map, &trial);
            let rt = sup_norm(&ft);
            if rt.is_finite() && rt < r {
                x = trial;
                f = ft;
                r = rt;
                accepted = true;
                break;
            }
            lambda = lambda * T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    CorrectorOutcome {
        converged: r < tol,
        x,
        residual: r,
        iterations: it,
    }
}
