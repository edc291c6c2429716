//! Asymptotic classification of a whole runtime profile.

use qseg_core::{classify, CandidateClass, ClassificationReport};

use crate::error::Result;
use crate::interaction::Interaction;
use crate::profile::RuntimeProfile;

/// Per-variable reports plus a one-line composition such as `log(x) + linear(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileClassification {
    /// In the profile's variable order.
    pub reports: Vec<(String, ClassificationReport<f64>)>,
    pub summary: String,
    /// Winning `k` when the target has a single variable.
    pub k_hint: Option<f64>,
}

impl ProfileClassification {
    pub fn report(&self, variable: &str) -> Option<&ClassificationReport<f64>> {
        self.reports.iter().find(|(v, _)| v == variable).map(|(_, r)| r)
    }

    pub fn winner(&self, variable: &str) -> Option<CandidateClass> {
        self.report(variable).map(|r| r.winner().class)
    }
}

/// Joins `class(variable)` terms; consecutive variables are joined by the
/// label of their pair (`+` additive, `·` composite, `,` when unknown).
pub fn compose_summary(
    winners: &[(String, CandidateClass)],
    label: impl Fn(&str, &str) -> Option<Interaction>,
) -> String {
    let mut summary = String::new();
    for (i, (var, class)) in winners.iter().enumerate() {
        if i > 0 {
            let joiner = label(&winners[i - 1].0, var).map_or(", ", |l| l.joiner());
            summary.push_str(joiner);
        }
        summary.push_str(&format!("{class}({var})"));
    }
    summary
}

/// Classifies each variable's final sweep and composes the summary.
pub fn classify_profile(
    profile: &RuntimeProfile,
    candidates: &[CandidateClass],
) -> Result<ProfileClassification> {
    let reports = profile
        .profiles
        .iter()
        .map(|p| Ok((p.variable.clone(), classify(p.series(), candidates)?)))
        .collect::<Result<Vec<_>>>()?;
    let winners: Vec<(String, CandidateClass)> = reports
        .iter()
        .map(|(v, r)| (v.clone(), r.winner().class))
        .collect();
    let summary = compose_summary(&winners, |a, b| profile.interaction(a, b).map(|l| l.label));
    let k_hint = match reports.as_slice() {
        [(_, only)] => Some(only.winner().k),
        _ => None,
    };
    Ok(ProfileClassification {
        reports,
        summary,
        k_hint,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use qseg_core::{default_candidates, BlendMode};

    use super::*;
    use crate::evaluator::Synthetic;
    use crate::profile::build_runtime_profile;
    use crate::sweep::linspace_grid;
    use crate::target::VariableSpec;

    fn profile(
        vars: Vec<VariableSpec>,
        grids: &[(&str, Vec<i64>)],
        f: impl Fn(&crate::target::Args) -> f64 + Send + 'static,
    ) -> RuntimeProfile {
        let mut e = Synthetic::new("synthetic", vars, f);
        let g: BTreeMap<_, _> = grids.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        build_runtime_profile(&mut e, &g, BlendMode::default()).unwrap()
    }

    #[test]
    fn additive_summary() {
        let p = profile(
            vec![VariableSpec::new("x", 1), VariableSpec::new("b", 0)],
            &[("x", linspace_grid(2, 1024, 33).unwrap()), ("b", linspace_grid(5, 705, 7).unwrap())],
            |a| 1e-7 * ((a["x"] as f64).log2() + a["b"] as f64),
        );
        let c = classify_profile(&p, &default_candidates()).unwrap();
        assert_eq!(c.summary, "log(x) + linear(b)");
        assert_eq!(c.k_hint, None);
    }

    #[test]
    fn composite_summary() {
        let p = profile(
            vec![VariableSpec::new("m", 0), VariableSpec::new("x", 0)],
            &[("m", linspace_grid(1, 31, 7).unwrap()), ("x", linspace_grid(50, 350, 7).unwrap())],
            |a| 1e-8 * (a["m"] * a["x"]) as f64,
        );
        let c = classify_profile(&p, &default_candidates()).unwrap();
        assert_eq!(c.summary, "linear(m) · linear(x)");
    }

    #[test]
    fn single_variable_summary() {
        let p = profile(
            vec![VariableSpec::new("x", 0)],
            &[("x", linspace_grid(256, 16384, 9).unwrap())],
            |a| {
                let x = a["x"] as f64;
                2e-9 * x * x.log2() + 1e-5
            },
        );
        let c = classify_profile(&p, &default_candidates()).unwrap();
        assert_eq!(c.summary, "nlogn(x)");
        assert!((c.k_hint.unwrap() / 2e-9 - 1.0).abs() < 1e-6);
    }
}
