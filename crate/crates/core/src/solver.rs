//! Root finding: a bracketed scalar solver and a damped Newton method for
//! small systems.

use core::fmt;

/// Tolerances shared by the calibration solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SolverConfig {
    /// Absolute tolerance on every residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Search interval for short rates (decimal).
    pub rate_bracket: (f64, f64),
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, rate_bracket: (1e-6, 1.0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    NotConverged {
        iterations: usize,
        residual: f64,
    },
    /// The Jacobian could not be factorised.
    Singular,
    /// The start point lies outside the admissible domain.
    OutOfDomain,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NoSignChange { lo, hi, f_lo, f_hi } => {
                write!(f, "no sign change on [{}, {}] (f = {} and {})", lo, hi, f_lo, f_hi)
            }
            SolveError::NotConverged { iterations, residual } => {
                write!(f, "no convergence after {} iterations (residual {:e})", iterations, residual)
            }
            SolveError::Singular => write!(f, "singular Jacobian"),
            SolveError::OutOfDomain => write!(f, "start point outside the admissible domain"),
        }
    }
}

impl core::error::Error for SolveError {}

/// A converged root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` on `[lo, hi]` with the Illinois variant of regula
/// falsi, falling back to bisection when the secant step stalls.
pub fn solve_scalar<F>(mut f: F, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<Root<f64>, SolveError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(SolveError::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }
    let mut side = 0i8;
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=cfg.max_iter {
        let mut c = (a * fb - b * fa) / (fb - fa);
        let width = (b - a).abs();
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if !fc.is_finite() {
            return Err(SolveError::NotConverged { iterations: it, residual: best.1 });
        }
        if fc.abs() < best.1.abs() {
            best = (c, fc);
        }
        if fc.abs() <= cfg.tol || width <= 4.0 * f64::EPSILON * c.abs().max(1e-300) {
            return Ok(Root { x: best.0, residual: best.1, iterations: it });
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // Guard against slow one-sided convergence.
        if (b - a).abs() > 0.5 * width && it % 4 == 0 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
    }
    Err(SolveError::NotConverged { iterations: cfg.max_iter, residual: best.1 })
}

/// Solves `f(x) = 0` for `N` unknowns by Newton's method with a central
/// finite-difference Jacobian and step halving.
///
/// `f` returns `None` outside its domain; the line search then shortens the
/// step.
pub fn solve_system<const N: usize, F>(mut f: F, x0: [f64; N], cfg: &SolverConfig) -> Result<Root<[f64; N]>, SolveError>
where
    F: FnMut(&[f64; N]) -> Option<[f64; N]>,
{
    let mut x = x0;
    let mut fx = f(&x).ok_or(SolveError::OutOfDomain)?;
    let mut norm = max_abs(&fx);
    for it in 0..cfg.max_iter {
        if norm <= cfg.tol {
            return Ok(Root { x, residual: norm, iterations: it });
        }
        let jac = jacobian(&mut f, &x, &fx);
        let mut neg = fx;
        for v in neg.iter_mut() {
            *v = -*v;
        }
        let dx = gauss_solve(jac, neg).ok_or(SolveError::Singular)?;

        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-10 {
            let mut trial = x;
            for k in 0..N {
                trial[k] += lambda * dx[k];
            }
            if let Some(ft) = f(&trial) {
                let nt = max_abs(&ft);
                if nt.is_finite() && nt < norm * (1.0 - 1e-4 * lambda) {
                    x = trial;
                    fx = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
                if nt <= cfg.tol {
                    return Ok(Root { x: trial, residual: nt, iterations: it + 1 });
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(SolveError::NotConverged { iterations: it + 1, residual: norm });
        }
    }
    if norm <= cfg.tol {
        Ok(Root { x, residual: norm, iterations: cfg.max_iter })
    } else {
        Err(SolveError::NotConverged { iterations: cfg.max_iter, residual: norm })
    }
}

fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

fn jacobian<const N: usize, F>(f: &mut F, x: &[f64; N], fx: &[f64; N]) -> [[f64; N]; N]
where
    F: FnMut(&[f64; N]) -> Option<[f64; N]>,
{
    let mut jac = [[0.0; N]; N];
    for k in 0..N {
        let h = libm::cbrt(f64::EPSILON) * x[k].abs().max(1e-3);
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += h;
        xm[k] -= h;
        let column = match (f(&xp), f(&xm)) {
            (Some(fp), Some(fm)) => core::array::from_fn::<f64, N, _>(|r| (fp[r] - fm[r]) / (2.0 * h)),
            (Some(fp), None) => core::array::from_fn(|r| (fp[r] - fx[r]) / h),
            (None, Some(fm)) => core::array::from_fn(|r| (fx[r] - fm[r]) / h),
            (None, None) => [f64::NAN; N],
        };
        for r in 0..N {
            jac[r][k] = column[r];
        }
    }
    jac
}

/// Gaussian elimination with partial pivoting.
fn gauss_solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= scale * 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
