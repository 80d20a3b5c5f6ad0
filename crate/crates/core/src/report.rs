//! Aggregated analysis of a chain and the JSON schema of every report.
//!
//! Exact values are rendered as `p/q` strings, floats as shortest round-trip
//! decimals; everything else is plain JSON.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::chain::{MarkovChain, ValidationReport};
use crate::cycle_space::{cycle_rank_test, variance_zero, CycleCertificate};
use crate::error::{Error, Result};
use crate::graph::final_component;
use crate::moments::{cross_checked_moments, FiniteMoments, McReport, MomentReport};
use crate::scalar::Scalar;

/// Everything `analyze` computes: validation, the final component, the
/// moment constants (cross-checked between both engines), the cycle-space
/// certificate, and the per-output variance-zero constants.
#[derive(Debug, Clone)]
pub struct Analysis<S> {
    pub validation: ValidationReport,
    pub output_names: Vec<String>,
    pub component_states: Vec<String>,
    pub period: u64,
    pub moments: MomentReport<S>,
    pub certificate: CycleCertificate<S>,
    pub variance_zero: Vec<Option<S>>,
    pub elapsed: Duration,
}

/// Validates the chain, extracts the final component, runs both moment
/// engines (insisting on exact agreement), the cycle rank test, and the
/// variance-zero test per output. Fails loudly if any two routes disagree.
pub fn analyze<S: Scalar>(chain: &MarkovChain<S>, cap: u64) -> Result<Analysis<S>> {
    let start = Instant::now();
    let validation = chain.validate();
    if !validation.is_valid() {
        return Err(Error::InvalidChain(validation.failures().join("; ")));
    }
    let comp = final_component(chain)?;
    let moments = cross_checked_moments(&comp, cap)?;
    let certificate = cycle_rank_test(&comp);
    if !certificate.is_independent() && moments.sigma_regular {
        return Err(Error::MethodDisagreement(
            "dependence certificate found but sigma is regular".into(),
        ));
    }
    let variance_zero = (0..chain.dim())
        .map(|i| variance_zero(&comp, i))
        .collect::<Result<Vec<_>>>()?;
    let period = validation.period.unwrap_or(0);
    Ok(Analysis {
        validation,
        output_names: chain.outputs().to_vec(),
        component_states: comp.names().to_vec(),
        period,
        moments,
        certificate,
        variance_zero,
        elapsed: start.elapsed(),
    })
}

pub fn validation_json(report: &ValidationReport) -> Value {
    json!({
        "stochastic": report.stochastic,
        "reachable": report.reachable,
        "unreachable": report.unreachable,
        "leaf_count": report.leaf_count,
        "leaf_components": report.leaf_components,
        "final_states": report.final_states,
        "period": report.period,
        "finally_connected": report.finally_connected(),
        "finally_aperiodic": report.finally_aperiodic(),
        "valid": report.is_valid(),
    })
}

fn render_vec<S: Scalar>(values: &[S]) -> Vec<String> {
    values.iter().map(Scalar::render).collect()
}

fn render_matrix<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<String>> {
    rows.iter().map(|row| render_vec(row)).collect()
}

pub fn moment_report_json<S: Scalar>(report: &MomentReport<S>, outputs: &[String]) -> Value {
    let m = report.dim();
    let pairs: Vec<Value> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| {
            json!({
                "outputs": [outputs.get(i), outputs.get(j)],
                "c": report.sigma[i][j].render(),
                "independent": report.pairwise_independent[i][j],
            })
        })
        .collect();
    json!({
        "method": report.method.to_string(),
        "e": render_vec(&report.e),
        "sigma": render_matrix(&report.sigma),
        "sigma_regular": report.sigma_regular,
        "pairwise_independent": report.pairwise_independent,
        "pairs": pairs,
    })
}

pub fn analysis_json<S: Scalar>(analysis: &Analysis<S>) -> Value {
    let mut value = json!({
        "validation": validation_json(&analysis.validation),
        "final_component": {
            "states": analysis.component_states,
            "period": analysis.period,
        },
        "outputs": analysis.output_names,
        "dependence_certificate": analysis
            .certificate
            .coefficients()
            .map(render_vec),
        "variance_zero": analysis
            .variance_zero
            .iter()
            .map(|v| v.as_ref().map(Scalar::render))
            .collect::<Vec<_>>(),
        "method": "digraph+determinant",
        "elapsed_ms": analysis.elapsed.as_secs_f64() * 1e3,
    });
    let moments = moment_report_json(&analysis.moments, &analysis.output_names);
    for (k, v) in moments.as_object().unwrap() {
        if k != "method" {
            value[k] = v.clone();
        }
    }
    value
}

pub fn finite_moments_json<S: Scalar>(fm: &FiniteMoments<S>, method: &str) -> Value {
    json!({
        "method": method,
        "n": fm.n,
        "mean": render_vec(&fm.mean),
        "variance": render_vec(&fm.variance),
        "covariance": render_matrix(&fm.covariance),
    })
}

pub fn mc_report_json(report: &McReport) -> Value {
    json!({
        "method": "mc",
        "n": report.n,
        "samples": report.samples,
        "seed": report.seed,
        "mean": report.mean,
        "covariance": report.covariance,
        "whitened": report.whitened,
        "skewness": report.skewness,
        "excess_kurtosis": report.excess_kurtosis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{block_chain, BlockKind};
    use crate::chain::Transition;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn analyze_bernoulli() {
        let chain = MarkovChain::new(
            vec!["s".into()],
            vec!["k".into()],
            vec![
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(0, 1)],
                },
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(1, 1)],
                },
            ],
        )
        .unwrap();
        let analysis = analyze(&chain, 10_000).unwrap();
        assert_eq!(analysis.moments.e, vec![r(1, 2)]);
        assert_eq!(analysis.moments.sigma, vec![vec![r(1, 4)]]);
        assert!(analysis.moments.sigma_regular);
        assert!(analysis.certificate.is_independent());
        assert_eq!(analysis.variance_zero, vec![None]);

        let value = analysis_json(&analysis);
        assert_eq!(value["e"][0], "1/2");
        assert_eq!(value["sigma"][0][0], "1/4");
        assert_eq!(value["sigma_regular"], true);
        assert_eq!(value["dependence_certificate"], Value::Null);
    }

    #[test]
    fn analyze_block_chain_reports_dependence() {
        let chain = block_chain(BlockKind::TenEleven, r(1, 2), r(1, 2)).unwrap();
        let analysis = analyze(&chain, 10_000).unwrap();
        assert!(analysis.moments.sigma_regular);
        let value = analysis_json(&analysis);
        assert_eq!(value["pairs"][0]["c"], "-1/16");
        assert_eq!(value["pairs"][0]["independent"], false);
        assert_eq!(value["final_component"]["period"], 1);
    }

    #[test]
    fn analyze_refuses_invalid_chains() {
        let chain: MarkovChain<Rational> = MarkovChain::new(
            vec!["a".into(), "b".into()],
            vec![],
            vec![
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 1),
                    out: vec![],
                },
                Transition {
                    from: 1,
                    to: 0,
                    prob: r(1, 1),
                    out: vec![],
                },
            ],
        )
        .unwrap();
        assert!(matches!(analyze(&chain, 100), Err(Error::InvalidChain(_))));
    }
}
