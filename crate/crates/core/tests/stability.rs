//! Reports at K and K + 2 agree to 10% on the datapoints they share.

use bottlab::report::VerificationReport;
use bottlab::verify::{mehler_coefficients, stability_defect, SuiteId, SweepConfig};

const K: usize = 12;
const REL: f64 = 0.1;
/// Residuals below this are at pass level and are not compared relatively.
const FLOOR: f64 = 1e-6;

fn pair(id: SuiteId) -> (VerificationReport, VerificationReport) {
    let a = id.run(&SweepConfig::new(1, K)).unwrap();
    let b = id.run(&SweepConfig::new(1, K + 2)).unwrap();
    (a, b)
}

fn drop_burn_in(r: &mut VerificationReport) {
    r.datapoints.retain(|p| p.t >= 2.0);
}

#[test]
fn suites_are_stable_under_truncation() {
    use SuiteId::*;
    let generic = [
        CliffordRelations,
        CliffordIso,
        GradedLaws,
        BSquared,
        Spectrum,
        Mehler,
        CommutatorDirac,
        CommutatorCd,
        BottMap,
        CompositionGamma,
        HomotopyProjection,
        FlipEndpoints,
        DeltaXr,
    ];
    for id in generic {
        let (a, b) = pair(id);
        let bad = stability_defect(&a, &b, REL, FLOOR);
        assert!(bad.is_empty(), "{id}: {bad:?}");
    }

    let (mut a, mut b) = pair(AlphaMultiplicativity);
    drop_burn_in(&mut a);
    drop_burn_in(&mut b);
    let bad = stability_defect(&a, &b, REL, FLOOR);
    assert!(bad.is_empty(), "alpha-multiplicativity: {bad:?}");
}

#[test]
fn leading_singular_values_are_stable() {
    let (mut a, b) = pair(SuiteId::Compactness);
    let sigma0 = a.series("sigma").first().map(|p| p.1).unwrap();
    a.datapoints.retain(|p| p.series == "sigma" && p.value >= 0.1 * sigma0);
    assert!(a.datapoints.len() >= 4);
    let bad = stability_defect(&a, &b, REL, FLOOR);
    assert!(bad.is_empty(), "{bad:?}");
}

/// The truncated norms are suprema over a finite spectrum; they stay below
/// the supremum over the real line, which is the untruncated value.
#[test]
fn s1s2_norms_stay_below_the_continuum_supremum() {
    let (a, b) = pair(SuiteId::S1s2Asymptotics);
    let grid: Vec<f64> = (-200_000..=200_000).map(|i| i as f64 * 2.5e-4).collect();
    for r in [&a, &b] {
        for p in r.datapoints.iter().filter(|p| !p.series.starts_with("scalar")) {
            let (label, t) = (p.series.split(':').nth(1).unwrap(), p.t);
            let e = t.powi(-2);
            let (s1, s2) = mehler_coefficients(e);
            let a_coef = if label.starts_with("s1") { s1 } else { s2 };
            let weighted = label.ends_with("weighted");
            let sup = grid
                .iter()
                .map(|&y| {
                    let phi = (-0.5 * a_coef * y * y).exp() - (-0.5 * e * y * y).exp();
                    (if weighted { y * phi / t } else { phi }).abs()
                })
                .fold(0.0, f64::max);
            assert!(
                p.value <= sup * (1.0 + 1e-6) + 1e-15,
                "{}@{t}: {} > {sup}",
                p.series,
                p.value
            );
        }
    }
}
