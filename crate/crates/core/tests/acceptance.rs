//! Acceptance criteria 1 to 9, one line each.
//!
//! Runs as a plain binary so the lines are always printed; exits non-zero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use bottlab::clifford::{algebra_isomorphism_check, relation_defect, tensor_product_witness, Signature};
use bottlab::oscillator::{b_squared_identity_check, OscillatorRep};
use bottlab::report::VerificationReport;
use bottlab::verify::{mehler_residuals, SuiteId, SweepConfig};
use bottlab::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn suite(id: SuiteId, dim: usize, levels: usize) -> Result<VerificationReport> {
    id.run(&SweepConfig::new(dim, levels))
}

fn series_max(r: &VerificationReport, name: &str) -> f64 {
    r.series(name).iter().map(|p| p.1).fold(0.0, f64::max)
}

fn failures(r: &VerificationReport) -> String {
    r.notes
        .iter()
        .filter(|n| n.starts_with("FAIL"))
        .cloned()
        .collect::<Vec<_>>()
        .join("; ")
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let relations = suite(SuiteId::CliffordRelations, 1, 12)?;
    let iso = suite(SuiteId::CliffordIso, 1, 12)?;

    let one = Signature::new(1, 0)?;
    let (joined, images) = tensor_product_witness(one, one)?;
    let mats: Vec<_> = images.into_iter().map(|g| g.into_entries()).collect();
    let tensor = relation_defect(&mats, joined)?;
    let w = algebra_isomorphism_check(Signature::new(8, 0)?, Signature::new(4, 4)?)?;
    let elapsed = start.elapsed();

    let pass = relations.pass
        && iso.pass
        && joined == Signature::new(2, 0)?
        && tensor <= 1e-10
        && w.defect <= 1e-10
        && within(elapsed, 10);
    Ok(Outcome::new(
        pass,
        format!(
            "relations p+q≤5 max {:.1e}, R(1,0)⊗̂R(1,0)→{joined} {tensor:.1e}, R(8,0)→R(4,4) {:.1e}, {:.2}s {}{}",
            series_max(&relations, "relations"),
            w.defect,
            elapsed.as_secs_f64(),
            failures(&relations),
            failures(&iso)
        ),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (n, k) in [(1, 12), (2, 10), (3, 8)] {
        let r = b_squared_identity_check(&OscillatorRep::new(n, k)?);
        worst = worst.max(r);
        parts.push(format!("({n},{k}) {r:.1e}"));
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        worst <= 1e-12 && within(elapsed, 30),
        format!("{}, {:.2}s", parts.join(", "), elapsed.as_secs_f64()),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, k) in [(1, 12), (2, 10), (3, 8)] {
        let r = suite(SuiteId::Spectrum, n, k)?;
        pass &= r.pass;
        let clusters = r.params.get("clusters").map(|c| c.to_string()).unwrap_or_default();
        parts.push(format!("n={n} K={k} clusters {clusters} {}", failures(&r)));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 60);
    Ok(Outcome::new(
        pass,
        format!("{}, {:.2}s", parts.join("; "), elapsed.as_secs_f64()),
    ))
}

const MEHLER_ACCEPT_S: [f64; 3] = [0.1, 0.3, 0.5];
const MEHLER_LEVELS: [usize; 5] = [12, 14, 16, 18, 20];
/// Residuals this small count as converged when judging the decrease in K.
const MEHLER_ROUNDOFF: f64 = 1e-13;

fn criterion_4() -> Result<Outcome> {
    let cfg = SweepConfig::new(1, 20);
    let window = SweepConfig::new(1, MEHLER_LEVELS[0]).mehler_probe();
    let reps: Vec<OscillatorRep> = MEHLER_LEVELS
        .iter()
        .map(|&k| OscillatorRep::new(1, k))
        .collect::<Result<_>>()?;
    let mut pass = true;
    let mut parts = Vec::new();
    for s in MEHLER_ACCEPT_S {
        let (c, d) = mehler_residuals(reps.last().expect("levels"), s, cfg.mehler_probe())?;
        pass &= c <= 1e-6 && d <= 1e-6;
        let along: Vec<f64> = reps
            .iter()
            .map(|rep| mehler_residuals(rep, s, window).map(|(c, d)| c.max(d)))
            .collect::<Result<_>>()?;
        let decreasing =
            along.windows(2).all(|w| w[1] < w[0] || w[1] <= MEHLER_ROUNDOFF) && along[along.len() - 1] < along[0];
        pass &= decreasing;
        parts.push(format!(
            "s={s}: K=20 C {c:.1e} D {d:.1e}, K=12→20 {:.1e}→{:.1e}{}",
            along[0],
            along[along.len() - 1],
            if decreasing { "" } else { " not decreasing" }
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn criterion_5() -> Result<Outcome> {
    let dirac = suite(SuiteId::CommutatorDirac, 1, 16)?;
    let cd = suite(SuiteId::CommutatorCd, 1, 16)?;
    let mut pass = dirac.pass && cd.pass;
    let mut worst: f64 = 0.0;
    let mut slowest = f64::NEG_INFINITY;
    for r in [&dirac, &cd] {
        for name in r.series_names() {
            let pts = r.series(name);
            let tail: Vec<_> = pts.iter().filter(|p| p.0 >= 2.0).collect();
            if let (Some(first), Some(last)) = (tail.first(), tail.last()) {
                worst = worst.max(last.1 / first.1);
            }
        }
        if let Some(fit) = r.fit {
            slowest = slowest.max(fit.exponent);
        }
    }
    pass &= worst <= 0.25 && slowest < 0.0;
    Ok(Outcome::new(
        pass,
        format!(
            "{} curves, worst final/initial {worst:.2e}, slowest exponent {slowest:.2} {}{}",
            dirac.series_names().len() + cd.series_names().len(),
            failures(&dirac),
            failures(&cd)
        ),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let r = suite(SuiteId::CompositionGamma, 1, 20)?;
    let ratio = |name: &str| {
        let pts = r.series(name);
        pts.last().map_or(f64::NAN, |l| l.1) / pts.first().map_or(f64::NAN, |f| f.1)
    };
    let (u, v) = (ratio("u"), ratio("v"));
    let mult = series_max(&r, "multiplication-vs-clifford");
    let pass = r.pass && u <= 1e-2 && v <= 1e-2 && mult <= 1e-6;
    Ok(Outcome::new(
        pass,
        format!(
            "u final/initial {u:.2e}, v {v:.2e}, ‖M_u(P) − u(C)‖ max {mult:.1e} {}",
            failures(&r)
        ),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let r = suite(SuiteId::HomotopyProjection, 1, 14)?;
    let at = |name: &str| r.series(name).iter().find(|p| p.0 == 0.05).map_or(f64::NAN, |p| p.1);
    let (u, v) = (at("u"), at("v"));
    let pass = r.pass && u <= 1e-6 && v <= 1e-6;
    Ok(Outcome::new(
        pass,
        format!("s=0.05: ‖u(B/s) − p‖ {u:.1e}, ‖v(B/s)‖ {v:.1e} {}", failures(&r)),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let r = suite(SuiteId::DeltaXr, 1, 12)?;
    let at24 = |name: &str| r.series(name).iter().find(|p| p.0 == 24.0).map_or(f64::NAN, |p| p.1);
    let (u, v) = (at24("u:algebraic"), at24("v:algebraic"));
    let pass = r.pass && u <= 1e-10 && v <= 1e-8;
    Ok(Outcome::new(
        pass,
        format!(
            "level 24: u {u:.1e}, v {v:.1e}; reference u {:.1e}, v {:.1e} {}",
            at24("u:reference"),
            at24("v:reference"),
            failures(&r)
        ),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in [SuiteId::GradedLaws, SuiteId::FlipEndpoints, SuiteId::BottMap] {
        let r = suite(id, 1, 12)?;
        pass &= r.pass;
        parts.push(format!("{id} {}", if r.pass { "ok" } else { "FAIL" }));
    }
    let out = tempfile::tempdir()?;
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_bottlab"))
        .args(["report-all", "--out"])
        .arg(out.path())
        .output()?;
    let elapsed = start.elapsed();
    let code = status.status.code().unwrap_or(-1);
    pass &= code == 0 && within(elapsed, 300);
    if code != 0 {
        parts.push(String::from_utf8_lossy(&status.stdout).into_owned());
    }
    Ok(Outcome::new(
        pass,
        format!(
            "{}; report-all exit {code} in {:.1}s",
            parts.join(", "),
            elapsed.as_secs_f64()
        ),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("Clifford relations and periodicity witnesses", criterion_1),
        ("B² = C² + D² + N on the interior", criterion_2),
        ("B² spectrum, kernel and multiplicities", criterion_3),
        ("Mehler factorizations", criterion_4),
        ("commutator decay", criterion_5),
        ("composition against γ_t", criterion_6),
        ("homotopy to the kernel projection", criterion_7),
        ("Δ through X_R", criterion_8),
        ("property suites and report-all", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {verdict} {title} [{:.1}s] {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail.trim_end()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
