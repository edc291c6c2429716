//! Least-squares fits of `k * g(n) + C` for a set of growth classes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sample::SampleSeries;
use crate::scalar::Scalar;

/// Largest input at which `2^n` is evaluated; keeps `g^2 * len` finite in f64.
pub const EXP_INPUT_CAP: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandidateClass {
    Const,
    Log,
    Sqrt,
    Linear,
    NLogN,
    Quadratic,
    Exp,
    LogLog,
}

impl CandidateClass {
    pub const ALL: [CandidateClass; 8] = [
        CandidateClass::Const,
        CandidateClass::Log,
        CandidateClass::Sqrt,
        CandidateClass::Linear,
        CandidateClass::NLogN,
        CandidateClass::Quadratic,
        CandidateClass::Exp,
        CandidateClass::LogLog,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CandidateClass::Const => "const",
            CandidateClass::Log => "log",
            CandidateClass::Sqrt => "sqrt",
            CandidateClass::Linear => "linear",
            CandidateClass::NLogN => "nlogn",
            CandidateClass::Quadratic => "quadratic",
            CandidateClass::Exp => "exp",
            CandidateClass::LogLog => "loglog",
        }
    }

    /// Growth function `g(n)`; `None` where it is undefined or capped.
    pub fn eval<T: Scalar>(self, n: T) -> Option<T> {
        let v = match self {
            CandidateClass::Const => T::one(),
            CandidateClass::Log => n.log2(),
            CandidateClass::Sqrt => n.sqrt(),
            CandidateClass::Linear => n,
            CandidateClass::NLogN => n * n.log2(),
            CandidateClass::Quadratic => n * n,
            CandidateClass::Exp => {
                if n > T::lit(EXP_INPUT_CAP) {
                    return None;
                }
                n.exp2()
            }
            CandidateClass::LogLog => n.log2().log2(),
        };
        v.is_finite().then_some(v)
    }
}

impl fmt::Display for CandidateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CandidateClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let class = match s.trim() {
            "const" | "1" => CandidateClass::Const,
            "log" | "logn" => CandidateClass::Log,
            "sqrt" => CandidateClass::Sqrt,
            "linear" | "n" => CandidateClass::Linear,
            "nlogn" => CandidateClass::NLogN,
            "quadratic" | "n2" => CandidateClass::Quadratic,
            "exp" | "2^n" => CandidateClass::Exp,
            "loglog" => CandidateClass::LogLog,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown candidate class `{other}`"
                )))
            }
        };
        Ok(class)
    }
}

/// const, log, sqrt, linear, nlogn, quadratic, exp, loglog.
pub fn default_candidates() -> Vec<CandidateClass> {
    CandidateClass::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFit<T> {
    pub class: CandidateClass,
    /// Proportionality constant, never negative.
    pub k: T,
    /// Offset.
    pub c: T,
    pub rmse: T,
    /// `rmse / (max y - min y)`.
    pub normalized_rmse: T,
    /// Points left out because `g` is undefined or capped there.
    pub excluded: usize,
}

impl<T: Scalar> CandidateFit<T> {
    pub fn predict(&self, n: T) -> Option<T> {
        self.class.eval(n).map(|g| self.k * g + self.c)
    }
}

/// Fits `y ~ k * g(x) + C` with `k >= 0` in closed form.
pub fn fit_class<T: Scalar>(series: &SampleSeries<T>, class: CandidateClass) -> Result<CandidateFit<T>> {
    let usable: Vec<(T, T)> = series
        .points()
        .iter()
        .filter_map(|p| class.eval(p.x).map(|g| (g, p.y)))
        .collect();
    let excluded = series.len() - usable.len();
    if usable.is_empty() || (class != CandidateClass::Const && usable.len() < 3) {
        return Err(Error::InsufficientPoints {
            class: class.name().into(),
            usable: usable.len(),
        });
    }
    let n = T::from_usize(usable.len()).expect("length fits the scalar");
    let g_mean = usable.iter().fold(T::zero(), |acc, (g, _)| acc + *g) / n;
    let y_mean = usable.iter().fold(T::zero(), |acc, (_, y)| acc + *y) / n;
    let (sgg, sgy) = usable.iter().fold((T::zero(), T::zero()), |(gg, gy), (g, y)| {
        let dg = *g - g_mean;
        (gg + dg * dg, gy + dg * (*y - y_mean))
    });

    let (k, c) = if class == CandidateClass::Const {
        (T::zero(), y_mean)
    } else {
        let g_scale = usable.iter().fold(T::zero(), |acc, (g, _)| acc.max(g.abs()));
        if sgg <= T::epsilon() * T::lit(16.0) * g_scale * g_scale * n {
            return Err(Error::DegenerateDesign {
                class: class.name().into(),
            });
        }
        let k = sgy / sgg;
        if k < T::zero() {
            (T::zero(), y_mean)
        } else {
            (k, y_mean - k * g_mean)
        }
    };

    let sse = usable.iter().fold(T::zero(), |acc, (g, y)| {
        let r = *y - (k * *g + c);
        acc + r * r
    });
    let rmse = (sse / n).sqrt();
    let (lo, hi) = series
        .ys()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let range = hi - lo;
    let normalized_rmse = if range > T::zero() {
        rmse / range
    } else if rmse == T::zero() {
        T::zero()
    } else {
        T::infinity()
    };
    Ok(CandidateFit {
        class,
        k,
        c,
        rmse,
        normalized_rmse,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<T> {
    /// Ascending normalized RMSE, ties broken by class name. Fits that had to
    /// exclude points rank after every full fit.
    pub ranked: Vec<CandidateFit<T>>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> ClassificationReport<T> {
    pub fn winner(&self) -> &CandidateFit<T> {
        &self.ranked[0]
    }

    /// Runner-up normalized RMSE over the winner's.
    pub fn margin(&self) -> T {
        match self.ranked.get(1) {
            None => T::infinity(),
            Some(second) => {
                let (w, r) = (self.ranked[0].normalized_rmse, second.normalized_rmse);
                if w == T::zero() {
                    if r == T::zero() {
                        T::one()
                    } else {
                        T::infinity()
                    }
                } else {
                    r / w
                }
            }
        }
    }
}

/// Fits every candidate and ranks them.
///
/// Candidates with too few usable points (for example `exp` on large inputs)
/// are dropped with a warning; other fit errors propagate.
pub fn classify<T: Scalar>(
    series: &SampleSeries<T>,
    candidates: &[CandidateClass],
) -> Result<ClassificationReport<T>> {
    if candidates.len() < 2 {
        return Err(Error::TooFewCandidates(candidates.len()));
    }
    let mut ranked = Vec::with_capacity(candidates.len());
    let mut warnings = Vec::new();
    for &class in candidates {
        match fit_class(series, class) {
            Ok(fit) => {
                if fit.excluded > 0 {
                    warnings.push(format!(
                        "{class}: {} point(s) outside the evaluable range were excluded",
                        fit.excluded
                    ));
                }
                ranked.push(fit);
            }
            Err(Error::InsufficientPoints { usable, .. }) => {
                warnings.push(format!("{class}: skipped, only {usable} usable point(s)"));
            }
            Err(e) => return Err(e),
        }
    }
    if ranked.is_empty() {
        return Err(Error::TooFewCandidates(0));
    }
    // a fit over a subset of the points is not comparable with full fits
    ranked.sort_by(|a, b| {
        (a.excluded > 0)
            .cmp(&(b.excluded > 0))
            .then_with(|| {
                a.normalized_rmse
                    .partial_cmp(&b.normalized_rmse)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| a.class.name().cmp(b.class.name()))
    });
    Ok(ClassificationReport { ranked, warnings })
}
