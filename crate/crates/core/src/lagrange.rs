//! Lagrange interpolation: the three-node closed form used by every segment and
//! a general n-node form that serves as an independent check.

use crate::error::{Error, Result};
use crate::sample::{SamplePoint, SampleSeries};
use crate::scalar::Scalar;

/// Largest node count accepted by [`lagrange_general`]; monomial coefficients
/// lose too much precision beyond this.
pub const MAX_GENERAL_NODES: usize = 12;

/// Polynomial stored in the local variable `t = (x - center) / scale`,
/// coefficients in ascending degree. The local form keeps evaluation well
/// conditioned; [`Polynomial::to_monomial`] expands it in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    pub center: T,
    pub scale: T,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn eval(&self, x: T) -> T {
        let t = (x - self.center) / self.scale;
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// Coefficients of the same polynomial in powers of `x`, ascending.
    pub fn to_monomial(&self) -> Vec<T> {
        let n = self.coeffs.len();
        let mut out = vec![T::zero(); n];
        // running expansion of ((x - center) / scale)^k
        let mut power = vec![T::one()];
        for (k, &c) in self.coeffs.iter().enumerate() {
            for (o, p) in out.iter_mut().zip(&power) {
                *o = *o + c * *p;
            }
            if k + 1 < n {
                let mut next = vec![T::zero(); power.len() + 1];
                for (j, &p) in power.iter().enumerate() {
                    next[j + 1] = next[j + 1] + p / self.scale;
                    next[j] = next[j] - p * self.center / self.scale;
                }
                power = next;
            }
        }
        out
    }

    /// Index of the highest non-zero local coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != T::zero())
            .unwrap_or(0)
    }
}

fn degenerate<T: Scalar>(x: T) -> Error {
    Error::DegenerateNodes {
        x: x.to_f64().unwrap_or(f64::NAN),
    }
}

/// Coefficients `(a, b, c)` of the quadratic through three points.
///
/// Collinear points give `a == 0` (up to rounding).
pub fn lagrange_quadratic<T: Scalar>(
    p0: SamplePoint<T>,
    p1: SamplePoint<T>,
    p2: SamplePoint<T>,
) -> Result<(T, T, T)> {
    if p0.x == p1.x || p0.x == p2.x {
        return Err(degenerate(p0.x));
    }
    if p1.x == p2.x {
        return Err(degenerate(p1.x));
    }
    // Newton divided differences, expanded to monomial form.
    let d01 = (p1.y - p0.y) / (p1.x - p0.x);
    let d12 = (p2.y - p1.y) / (p2.x - p1.x);
    let a = (d12 - d01) / (p2.x - p0.x);
    let b = d01 - a * (p0.x + p1.x);
    let c = p0.y - d01 * p0.x + a * p0.x * p1.x;
    Ok((a, b, c))
}

/// Interpolating polynomial of degree `< n` through all points of `series`.
pub fn lagrange_general<T: Scalar>(series: &SampleSeries<T>) -> Result<Polynomial<T>> {
    let pts = series.points();
    let n = pts.len();
    if n > MAX_GENERAL_NODES {
        return Err(Error::TooManyNodes {
            n,
            limit: MAX_GENERAL_NODES,
        });
    }
    let (lo, hi) = (series.first_x(), series.last_x());
    let center = T::half() * (lo + hi);
    let scale = if hi > lo { T::half() * (hi - lo) } else { T::one() };
    let ts: Vec<T> = pts.iter().map(|p| (p.x - center) / scale).collect();
    let mut coeffs = vec![T::zero(); n];
    let mut basis = Vec::with_capacity(n);
    for (j, pj) in pts.iter().enumerate() {
        // basis_j(x) = prod_{m != j} (x - x_m) / (x_j - x_m)
        basis.clear();
        basis.push(T::one());
        let mut denom = T::one();
        for (m, &tm) in ts.iter().enumerate() {
            if m == j {
                continue;
            }
            let diff = ts[j] - tm;
            if diff == T::zero() {
                return Err(degenerate(pj.x));
            }
            denom = denom * diff;
            basis.push(T::zero());
            for k in (1..basis.len()).rev() {
                basis[k] = basis[k - 1] - tm * basis[k];
            }
            basis[0] = -tm * basis[0];
        }
        let scale = pj.y / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c = *c + scale * *b;
        }
    }
    Ok(Polynomial {
        center,
        scale,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rel_diff;

    fn series(pairs: &[(f64, f64)]) -> SampleSeries<f64> {
        SampleSeries::from_pairs(pairs).unwrap()
    }

    fn pts(pairs: [(f64, f64); 3]) -> (SamplePoint<f64>, SamplePoint<f64>, SamplePoint<f64>) {
        (pairs[0].into(), pairs[1].into(), pairs[2].into())
    }

    #[test]
    fn reproduces_square() {
        let (p0, p1, p2) = pts([(1.0, 1.0), (2.0, 4.0), (3.0, 9.0)]);
        assert_eq!(lagrange_quadratic(p0, p1, p2).unwrap(), (1.0, 0.0, 0.0));
    }

    #[test]
    fn collinear_gives_line() {
        let (p0, p1, p2) = pts([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]);
        assert_eq!(lagrange_quadratic(p0, p1, p2).unwrap(), (0.0, 1.0, 0.0));
    }

    #[test]
    fn hand_expanded_basis() {
        let (p0, p1, p2) = pts([(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]);
        assert_eq!(lagrange_quadratic(p0, p1, p2).unwrap(), (1.0, 0.0, 0.0));
    }

    #[test]
    fn repeated_x_rejected() {
        let (p0, p1, p2) = pts([(0.0, 0.0), (1.0, 1.0), (1.0, 4.0)]);
        assert!(matches!(
            lagrange_quadratic(p0, p1, p2),
            Err(Error::DegenerateNodes { .. })
        ));
    }

    #[test]
    fn general_four_nodes() {
        // Gaussian elimination on [[1,0,0,0],[1,1,1,1],[1,2,4,8],[1,3,9,27]] c = [1,2,5,10]
        // gives c = (1, 0, 1, 0).
        let p = lagrange_general(&series(&[(0.0, 1.0), (1.0, 2.0), (2.0, 5.0), (3.0, 10.0)])).unwrap();
        let expected = [1.0, 0.0, 1.0, 0.0];
        let mono = p.to_monomial();
        for (c, e) in mono.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12, "{mono:?}");
        }
        assert!(p.degree() < 4);
    }

    #[test]
    fn general_single_node() {
        let p = lagrange_general(&series(&[(5.0, 7.0)])).unwrap();
        assert_eq!(p.to_monomial(), vec![7.0]);
        assert_eq!(p.eval(-100.0), 7.0);
    }

    #[test]
    fn general_matches_three_point() {
        let s = series(&[(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]);
        let p = lagrange_general(&s).unwrap().to_monomial();
        let pts = s.points();
        let (a, b, c) = lagrange_quadratic(pts[0], pts[1], pts[2]).unwrap();
        assert!(rel_diff(p[2], a) < 1e-12);
        assert!(rel_diff(p[1], b) < 1e-12);
        assert!(rel_diff(p[0], c) < 1e-12);
    }

    #[test]
    fn node_cap() {
        let pairs: Vec<_> = (0..13).map(|i| (i as f64, 1.0)).collect();
        assert_eq!(
            lagrange_general(&series(&pairs)).unwrap_err(),
            Error::TooManyNodes { n: 13, limit: 12 }
        );
    }

    #[test]
    fn general_interpolates_nodes() {
        let pairs: Vec<_> = (0..9)
            .map(|i| {
                let x = -2.0 + 0.55 * i as f64;
                (x, (x * 1.3).sin() + 0.2 * x)
            })
            .collect();
        let p = lagrange_general(&series(&pairs)).unwrap();
        for (x, y) in pairs {
            assert!(rel_diff(p.eval(x), y) < 1e-9);
        }
        assert!(p.degree() < 9);
    }

    #[test]
    fn works_in_f32() {
        let p0 = SamplePoint::new(1.0f32, 1.0);
        let p1 = SamplePoint::new(2.0f32, 4.0);
        let p2 = SamplePoint::new(3.0f32, 9.0);
        let (a, b, c) = lagrange_quadratic(p0, p1, p2).unwrap();
        assert!((a - 1.0).abs() < 1e-6 && b.abs() < 1e-5 && c.abs() < 1e-5);
    }
}
