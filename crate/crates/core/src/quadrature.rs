//! Adaptive Simpson quadrature.

use crate::scalar::Scalar;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to roughly `abs_tol` absolute error.
///
/// Intervals are bisected until the two-panel Simpson estimate agrees with the
/// one-panel estimate within `15 * tol`; the Richardson correction is added
/// to each accepted panel.
pub fn adaptive_simpson<T, F>(f: F, a: T, b: T, abs_tol: T) -> T
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if a == b {
        return T::zero();
    }
    let fa = f(a);
    let fb = f(b);
    let m = T::half() * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(&f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let m = T::half() * (a + b);
    let lm = T::half() * (a + m);
    let rm = T::half() * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let floor = T::epsilon() * T::lit(16.0) * (left + right).abs();
    if depth == 0 || delta.abs() <= T::lit(15.0) * tol.max(floor) || m <= a || m >= b {
        return left + right + delta / T::lit(15.0);
    }
    let half_tol = T::half() * tol;
    refine(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact() {
        let v = adaptive_simpson(|x: f64| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-10);
        // x^3 - x^2 + x on [-1, 2] = 6 - (-3) = 9
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn log2_integral() {
        // x log2 x - x / ln 2
        let anti = |x: f64| x * x.log2() - x / std::f64::consts::LN_2;
        let v = adaptive_simpson(f64::log2, 8.0, 64.0, 1e-10);
        assert!((v - (anti(64.0) - anti(8.0))).abs() < 1e-9);
    }

    #[test]
    fn oscillatory() {
        let v = adaptive_simpson(|x: f64| (std::f64::consts::PI * x).cos(), 0.0, 1.5, 1e-10);
        assert!((v + 1.0 / std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|x: f64| x, 2.0, 2.0, 1e-10), 0.0);
    }
}
