//! Parameterized verification suites producing [`VerificationReport`]s.

mod algebraic;
mod asymptotic;
pub mod config;
pub mod decay;
mod spectral;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use algebraic::{bott_map_suite, clifford_iso, clifford_relations, delta_xr, graded_laws};
pub use asymptotic::{
    alpha, alpha_multiplicativity, commutator_cd, commutator_dirac, composition_gamma, flip_endpoints,
};
pub use config::{SweepConfig, TGrid, TestField};
pub use decay::{fit_loglog, judge_decay, DecayCriteria, DecayVerdict};
pub use spectral::{
    b_squared, compactness, homotopy_projection, mehler, mehler_coefficients, mehler_residuals, s1s2_asymptotics,
    spectrum,
};

use crate::error::{invalid, Result};
use crate::linalg;
pub use crate::oscillator::bott_map;
use crate::report::{Fit, VerificationReport};

/// Every suite, in canonical report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    CliffordRelations,
    CliffordIso,
    GradedLaws,
    BSquared,
    Spectrum,
    Mehler,
    S1s2Asymptotics,
    CommutatorDirac,
    CommutatorCd,
    AlphaMultiplicativity,
    BottMap,
    CompositionGamma,
    HomotopyProjection,
    FlipEndpoints,
    DeltaXr,
    Compactness,
}

impl SuiteId {
    pub const ALL: [SuiteId; 16] = [
        SuiteId::CliffordRelations,
        SuiteId::CliffordIso,
        SuiteId::GradedLaws,
        SuiteId::BSquared,
        SuiteId::Spectrum,
        SuiteId::Mehler,
        SuiteId::S1s2Asymptotics,
        SuiteId::CommutatorDirac,
        SuiteId::CommutatorCd,
        SuiteId::AlphaMultiplicativity,
        SuiteId::BottMap,
        SuiteId::CompositionGamma,
        SuiteId::HomotopyProjection,
        SuiteId::FlipEndpoints,
        SuiteId::DeltaXr,
        SuiteId::Compactness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::CliffordRelations => "clifford-relations",
            SuiteId::CliffordIso => "clifford-iso",
            SuiteId::GradedLaws => "graded-laws",
            SuiteId::BSquared => "b-squared",
            SuiteId::Spectrum => "spectrum",
            SuiteId::Mehler => "mehler",
            SuiteId::S1s2Asymptotics => "s1s2-asymptotics",
            SuiteId::CommutatorDirac => "commutator-dirac",
            SuiteId::CommutatorCd => "commutator-cd",
            SuiteId::AlphaMultiplicativity => "alpha-multiplicativity",
            SuiteId::BottMap => "bott-map",
            SuiteId::CompositionGamma => "composition-gamma",
            SuiteId::HomotopyProjection => "homotopy-projection",
            SuiteId::FlipEndpoints => "flip-endpoints",
            SuiteId::DeltaXr => "delta-xr",
            SuiteId::Compactness => "compactness",
        }
    }

    pub fn run(self, cfg: &SweepConfig) -> Result<VerificationReport> {
        cfg.validate()?;
        match self {
            SuiteId::CliffordRelations => clifford_relations(cfg),
            SuiteId::CliffordIso => clifford_iso(cfg),
            SuiteId::GradedLaws => graded_laws(cfg),
            SuiteId::BSquared => b_squared(cfg),
            SuiteId::Spectrum => spectrum(cfg),
            SuiteId::Mehler => mehler(cfg),
            SuiteId::S1s2Asymptotics => s1s2_asymptotics(cfg),
            SuiteId::CommutatorDirac => commutator_dirac(cfg),
            SuiteId::CommutatorCd => commutator_cd(cfg),
            SuiteId::AlphaMultiplicativity => alpha_multiplicativity(cfg),
            SuiteId::BottMap => bott_map_suite(cfg),
            SuiteId::CompositionGamma => composition_gamma(cfg),
            SuiteId::HomotopyProjection => homotopy_projection(cfg),
            SuiteId::FlipEndpoints => flip_endpoints(cfg),
            SuiteId::DeltaXr => delta_xr(cfg),
            SuiteId::Compactness => compactness(cfg),
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

/// Runs suites in parallel; results come back in canonical order.
pub fn run_suites(ids: &[SuiteId], cfg: &SweepConfig) -> Vec<(SuiteId, Result<VerificationReport>)> {
    let configs: BTreeMap<SuiteId, SweepConfig> = ids.iter().map(|&id| (id, cfg.clone())).collect();
    run_configured(&configs)
}

pub fn run_configured(configs: &BTreeMap<SuiteId, SweepConfig>) -> Vec<(SuiteId, Result<VerificationReport>)> {
    let jobs: Vec<(SuiteId, &SweepConfig)> = configs.iter().map(|(id, c)| (*id, c)).collect();
    jobs.into_par_iter().map(|(id, cfg)| (id, id.run(cfg))).collect()
}

/// Compares two runs on the datapoints they share, keyed by `(series, t)`.
/// A pair is unstable when it differs by more than `rel` of the larger
/// magnitude plus `floor`.
pub fn stability_defect(a: &VerificationReport, b: &VerificationReport, rel: f64, floor: f64) -> Vec<String> {
    let key = |p: &crate::report::DataPoint| (p.series.clone(), p.t.to_bits());
    let other: BTreeMap<_, f64> = b.datapoints.iter().map(|q| (key(q), q.value)).collect();
    a.datapoints
        .iter()
        .filter_map(|p| {
            let q = *other.get(&key(p))?;
            let bad = (p.value - q).abs() > rel * p.value.abs().max(q.abs()) + floor;
            bad.then(|| format!("{}@{}: {:.3e} vs {:.3e}", p.series, p.t, p.value, q))
        })
        .collect()
}

pub(crate) fn window_norm(m: &DMatrix<f64>, idx: &[usize]) -> f64 {
    linalg::operator_norm(&linalg::principal_submatrix(m, idx))
}

/// Records a decay series and folds its verdict into the report.
pub(crate) fn record_decay(
    report: &mut VerificationReport,
    series: &str,
    points: &[(f64, f64)],
    criteria: &DecayCriteria,
) -> DecayVerdict {
    for &(t, v) in points {
        report.push(series, t, v);
    }
    let verdict = judge_decay(points, criteria);
    let exponent = verdict.fit.map_or(serde_json::Value::Null, |f| f.exponent.into());
    let entry = report
        .params
        .entry("exponents".to_string())
        .or_insert_with(|| serde_json::Value::Object(Default::default()));
    entry
        .as_object_mut()
        .expect("exponents is an object")
        .insert(series.to_string(), exponent);
    if verdict.identically_zero {
        report.note(format!("{series}: identically zero"));
    }
    if !verdict.pass {
        report.fail(format!("{series}: {}", verdict.reasons.join("; ")));
    }
    if let Some(fit) = verdict.fit {
        // The report-level fit is the slowest decaying series.
        if report.fit.is_none_or(|f: Fit| fit.exponent > f.exponent) {
            report.fit = Some(fit);
        }
    }
    verdict
}

/// Records a single exact-identity residual against `tol`.
pub(crate) fn record_identity(report: &mut VerificationReport, series: &str, t: f64, value: f64, tol: f64) {
    report.push(series, t, value);
    if !(value <= tol) {
        report.fail(format!("{series}: {value:.3e} > {tol:.1e}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn canonical_order_is_sorted() {
        let mut sorted = SuiteId::ALL;
        sorted.sort();
        assert_eq!(sorted, SuiteId::ALL);
    }
}
