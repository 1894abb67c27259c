//! Decay suites for the asymptotic morphisms `α_t` and `γ_t`, and the flip
//! endpoint identities.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{record_decay, record_identity, window_norm, DecayCriteria, SweepConfig, TestField};
use crate::clifford::{left_mult_operator, MultiVector, Signature};
use crate::error::Result;
use crate::funcalc::{self, Generator, SElement};
use crate::graded::{flip, graded_commutator, graded_tensor, iota, GradedMatrix, Parity};
use crate::linalg::{self, SortedEigen};
use crate::oscillator::{multiplication_operator, padded_clifford_function, CliffordField, OscillatorRep};
use crate::report::VerificationReport;

const NORM_CHECKS: usize = 3;

/// `α_t(f ⊗̂ h) = f(t⁻¹D) M_{h_t}`.
pub fn alpha(f: &SElement, h: &CliffordField, t: f64, rep: &OscillatorRep) -> Result<GradedMatrix> {
    let fd = funcalc::scaled_matrix_function(f, t, rep.dirac())?;
    let mh = multiplication_operator(&h.rescale(t)?, rep.basis())?;
    fd.mul(&mh)
}

fn generators() -> [(Generator, SElement); 2] {
    [(Generator::U, SElement::u()), (Generator::V, SElement::v())]
}

fn scaled_fn(f: &SElement, t: f64, eig: &SortedEigen, x: &GradedMatrix) -> Result<GradedMatrix> {
    funcalc::matrix_function_eig(&f.scale(t)?, eig, x)
}

/// Cross-checks SVD norms against power iteration on a few sampled matrices.
fn norm_crosscheck(report: &mut VerificationReport, samples: &[(String, f64, DMatrix<f64>)], seed: u64) {
    if samples.is_empty() {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut picked = Vec::new();
    for _ in 0..NORM_CHECKS {
        let (name, t, m) = &samples[rng.gen_range(0..samples.len())];
        let svd = linalg::operator_norm(m);
        let power = linalg::power_iteration_norm(m, 100_000, 1e-15);
        worst = worst.max((svd - power).abs() / svd.max(1e-300));
        picked.push(format!("{name}@{t}"));
    }
    report.param("norm_crosscheck", picked);
    report.param("norm_crosscheck_defect", worst);
    if worst > 1e-8 {
        report.fail(format!("power iteration disagrees with SVD by {worst:.3e}"));
    }
}

pub fn commutator_dirac(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(0.25);
    let mut report = VerificationReport::new("commutator-dirac", tol);
    let rep = OscillatorRep::new(cfg.dim, cfg.levels)?;
    let idx = rep.basis().window(cfg.decay_probe());
    let eig = linalg::eigh(rep.dirac().entries())?;
    let fields: Vec<(TestField, CliffordField)> = cfg
        .h_choices
        .iter()
        .map(|c| Ok((*c, c.field(cfg.dim)?)))
        .collect::<Result<_>>()?;

    let per_t: Vec<Vec<(String, f64, DMatrix<f64>)>> = cfg
        .t_grid
        .values()
        .par_iter()
        .map(|&t| -> Result<_> {
            let mut out = Vec::new();
            let mhs: Vec<GradedMatrix> = fields
                .iter()
                .map(|(_, h)| multiplication_operator(&h.rescale(t)?, rep.basis()))
                .collect::<Result<_>>()?;
            for (g, f) in generators() {
                let fd = scaled_fn(&f, t, &eig, rep.dirac())?;
                for ((choice, _), mh) in fields.iter().zip(&mhs) {
                    let c = graded_commutator(&fd, mh)?;
                    let w = linalg::principal_submatrix(c.entries(), &idx);
                    out.push((format!("{}|{}", g.name(), choice.name()), t, w));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let samples: Vec<_> = per_t.into_iter().flatten().collect();
    finish_decay(&mut report, &samples, &DecayCriteria::relative(tol));
    norm_crosscheck(&mut report, &samples, cfg.seed);
    report.param("dim", cfg.dim);
    report.param("levels", cfg.levels);
    report.param("probe_level", cfg.decay_probe());
    report.note("norms are taken on spatial levels ≤ probe_level");
    Ok(report)
}

/// Turns `(series, t, matrix)` samples into per-series decay curves.
fn finish_decay(report: &mut VerificationReport, samples: &[(String, f64, DMatrix<f64>)], criteria: &DecayCriteria) {
    let mut names: Vec<&str> = Vec::new();
    for (name, _, _) in samples {
        if !names.contains(&name.as_str()) {
            names.push(name);
        }
    }
    for name in names {
        let mut pts: Vec<(f64, f64)> = samples
            .iter()
            .filter(|s| s.0 == name)
            .map(|s| (s.1, linalg::operator_norm(&s.2)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        record_decay(report, name, &pts, criteria);
    }
}

pub fn commutator_cd(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(0.25);
    let mut report = VerificationReport::new("commutator-cd", tol);
    let rep = OscillatorRep::new(cfg.dim, cfg.levels)?;
    let idx = rep.basis().window(cfg.decay_probe());
    let ec = linalg::eigh(rep.clifford().entries())?;
    let ed = linalg::eigh(rep.dirac().entries())?;
    let per_t: Vec<Vec<(String, f64, DMatrix<f64>)>> = cfg
        .t_grid
        .values()
        .par_iter()
        .map(|&t| -> Result<_> {
            let mut out = Vec::new();
            for (gf, f) in generators() {
                let fc = scaled_fn(&f, t, &ec, rep.clifford())?;
                for (gg, g) in generators() {
                    let gd = scaled_fn(&g, t, &ed, rep.dirac())?;
                    let c = graded_commutator(&fc, &gd)?;
                    out.push((
                        format!("{}(C)|{}(D)", gf.name(), gg.name()),
                        t,
                        linalg::principal_submatrix(c.entries(), &idx),
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let samples: Vec<_> = per_t.into_iter().flatten().collect();
    finish_decay(&mut report, &samples, &DecayCriteria::relative(tol));
    report.param("dim", cfg.dim);
    report.param("levels", cfg.levels);
    report.param("probe_level", cfg.decay_probe());
    report.note("for v(C), v(D) the graded commutator is an anticommutator");
    Ok(report)
}

/// Sup of `Σ |coeff|` over a grid, an upper bound for `sup ‖h(v)‖`.
fn field_sup(h: &CliffordField, n: usize) -> Result<f64> {
    let per_axis: usize = if n <= 2 { 81 } else { 25 };
    let sig = Signature::euclidean(n)?;
    let total = per_axis.pow(n as u32);
    let mut point = vec![0.0; n];
    let mut sup = 0.0f64;
    for g in 0..total {
        let mut rem = g;
        for p in point.iter_mut() {
            *p = -8.0 + 16.0 * (rem % per_axis) as f64 / (per_axis - 1) as f64;
            rem /= per_axis;
        }
        let mv = h.eval(&point, sig)?;
        sup = sup.max(mv.coeffs().iter().map(|c| c.abs()).sum());
    }
    Ok(sup)
}

/// Residual matrices and norm-bound excesses at one t, keyed by series.
type PerT = (Vec<(String, f64, DMatrix<f64>)>, Vec<(String, f64, f64)>);

pub fn alpha_multiplicativity(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(0.25);
    let bound_slack = 1e-2;
    let mut report = VerificationReport::new("alpha-multiplicativity", tol);
    let rep = OscillatorRep::new(cfg.dim, cfg.levels)?;
    let idx = rep.basis().window(cfg.decay_probe());
    let eig = linalg::eigh(rep.dirac().entries())?;
    let second = CliffordField::Bott(SElement::u());
    let fields: Vec<(TestField, CliffordField)> = cfg
        .h_choices
        .iter()
        .map(|c| Ok((*c, c.field(cfg.dim)?)))
        .collect::<Result<_>>()?;
    let sups: Vec<f64> = fields
        .iter()
        .map(|(_, h)| field_sup(h, cfg.dim))
        .collect::<Result<_>>()?;

    let per_t: Vec<PerT> = cfg
        .t_grid
        .values()
        .par_iter()
        .map(|&t| -> Result<_> {
            let mut residuals = Vec::new();
            let mut excesses = Vec::new();
            let m2 = multiplication_operator(&second.rescale(t)?, rep.basis())?;
            for ((choice, h1), sup) in fields.iter().zip(&sups) {
                let m1 = multiplication_operator(&h1.rescale(t)?, rep.basis())?;
                let product = CliffordField::Product(Box::new(h1.clone()), Box::new(second.clone()));
                let m12 = multiplication_operator(&product.rescale(t)?, rep.basis())?;
                let h1_parity = h1.parity().unwrap_or(Parity::Even);
                for (g1, f1) in generators() {
                    let a1 = scaled_fn(&f1, t, &eig, rep.dirac())?.mul(&m1)?;
                    let excess = linalg::operator_norm(a1.entries()) - f1.sup_norm() * sup;
                    excesses.push((format!("{}|{}", g1.name(), choice.name()), t, excess.max(0.0)));
                    for (g2, f2) in generators() {
                        let a2 = scaled_fn(&f2, t, &eig, rep.dirac())?.mul(&m2)?;
                        let sign = h1_parity.koszul(f2.parity().expect("generator parity"));
                        let joint = scaled_fn(&f1.product(&f2)?, t, &eig, rep.dirac())?.mul(&m12)?;
                        let diff = joint.entries() * sign - a1.mul(&a2)?.entries();
                        residuals.push((
                            format!("{}.{}|{}.u(P)", g1.name(), g2.name(), choice.name()),
                            t,
                            linalg::principal_submatrix(&diff, &idx),
                        ));
                    }
                }
            }
            Ok((residuals, excesses))
        })
        .collect::<Result<_>>()?;

    let mut samples = Vec::new();
    let mut worst_excess = 0.0f64;
    for (res, exc) in per_t {
        samples.extend(res);
        for (_, _, e) in exc {
            worst_excess = worst_excess.max(e);
        }
    }
    finish_decay(&mut report, &samples, &DecayCriteria::relative(tol));
    report.param("norm_bound_excess", worst_excess);
    if worst_excess > bound_slack {
        report.fail(format!("‖α_t(f⊗h)‖ exceeds ‖f‖‖h‖ by {worst_excess:.3e}"));
    }
    report.param("dim", cfg.dim);
    report.param("levels", cfg.levels);
    report.param("probe_level", cfg.decay_probe());
    report.note("series f1.f2|h1.h2 measure α_t of the product against the product of α_t values");
    Ok(report)
}

pub fn composition_gamma(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-2);
    let identity_tol = 1e-6;
    let mut report = VerificationReport::new("composition-gamma", tol);
    let rep = OscillatorRep::new(cfg.dim, cfg.levels)?;
    let idx = rep.basis().window(cfg.decay_probe());
    let eb = linalg::eigh(rep.bott().entries())?;
    let ec = linalg::eigh(rep.clifford().entries())?;
    let ed = linalg::eigh(rep.dirac().entries())?;
    let cd = rep.clifford().entries() + rep.dirac().entries();

    let rows: Vec<(f64, f64, f64, f64)> = cfg
        .t_grid
        .values()
        .par_iter()
        .map(|&t| {
            let e = t.powi(-2);
            let heat = |y: f64| (-e * y * y).exp();
            let lhs_u = linalg::apply_to_eigen(&eb, heat);
            let rhs_u = linalg::apply_to_eigen(&ec, heat) * linalg::apply_to_eigen(&ed, heat);
            let lhs_v = linalg::apply_to_eigen(&eb, |y| y / t * heat(y));
            let rhs_v = &cd * &rhs_u / t;
            let limit = window_norm(&(&lhs_u - DMatrix::identity(rep.dim(), rep.dim())), &idx);
            (
                t,
                window_norm(&(lhs_u - &rhs_u), &idx),
                window_norm(&(lhs_v - rhs_v), &idx),
                limit,
            )
        })
        .collect();
    let criteria = DecayCriteria::relative(tol);
    let u_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let v_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.2)).collect();
    record_decay(&mut report, "u", &u_pts, &criteria);
    record_decay(&mut report, "v", &v_pts, &criteria);
    if let Some(last) = rows.last() {
        report.param("heat_minus_identity_at_t_max", last.3);
    }

    // M_{u(P)_t} against u(t⁻¹C), the latter from a padded truncation.
    if cfg.dim == 1 {
        let padded = 4 * cfg.levels;
        let h = CliffordField::Bott(SElement::u());
        for &t in cfg.t_grid.values() {
            let m = multiplication_operator(&h.rescale(t)?, rep.basis())?;
            let uc = padded_clifford_function(&SElement::u().scale(t)?, &rep, padded)?;
            record_identity(
                &mut report,
                "multiplication-vs-clifford",
                t,
                linalg::operator_norm(&(m.entries() - uc)),
                identity_tol,
            );
        }
        report.param("padded_levels", padded);
    } else {
        report.note("M_u(P) = u(C) comparison runs for dim 1 only");
    }
    report.param("identity_tol", identity_tol);
    report.param("dim", cfg.dim);
    report.param("levels", cfg.levels);
    report.param("probe_level", cfg.decay_probe());
    report.note("as t grows both sides tend to the identity (u) and to zero (v) on the probe window");
    Ok(report)
}

/// Field operators for the second tensor leg, keyed by the generator.
fn bott_operator(g: Generator, rep: &OscillatorRep) -> Result<GradedMatrix> {
    multiplication_operator(&CliffordField::Bott(g.element()), rep.basis())
}

pub const FLIP_MAX_LEVELS: usize = 10;

pub fn flip_endpoints(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-8);
    let mut report = VerificationReport::new("flip-endpoints", tol);
    let levels = cfg.levels.min(FLIP_MAX_LEVELS);
    let rep = OscillatorRep::new(1, levels)?;
    let hp = rep.basis().parity_vector();
    let beta_u = bott_operator(Generator::U, &rep)?;
    let beta_v = bott_operator(Generator::V, &rep)?;
    let beta = |g: Generator| if g == Generator::U { &beta_u } else { &beta_v };
    let fields: Vec<(TestField, CliffordField)> = cfg
        .h_choices
        .iter()
        .map(|c| Ok((*c, c.field(1)?)))
        .collect::<Result<_>>()?;

    let mut flip_samples = Vec::new();
    for &t in cfg.t_grid.values() {
        for (choice, h) in &fields {
            let h_parity = h.parity().unwrap_or(Parity::Even);
            let alphas: Vec<GradedMatrix> = [Generator::U, Generator::V]
                .iter()
                .map(|g| alpha(&g.element(), h, t, &rep))
                .collect::<Result<_>>()?;
            let alpha_of = |g: Generator| &alphas[if g == Generator::U { 0 } else { 1 }];
            for g in [Generator::U, Generator::V] {
                let delta = g.delta();
                let mut f1: Option<GradedMatrix> = None;
                let mut g1: Option<GradedMatrix> = None;
                for term in &delta.terms {
                    let a = if term.left.parity() == Some(Parity::Odd) {
                        Generator::V
                    } else {
                        Generator::U
                    };
                    let b = if term.right.parity() == Some(Parity::Odd) {
                        Generator::V
                    } else {
                        Generator::U
                    };
                    // f1: l(β(a) ⊗̂ α_t(b ⊗̂ h)).
                    let x = graded_tensor(beta(a), alpha_of(b))?.scale(term.coeff);
                    let fx = flip(&x, &hp, &hp)?;
                    // g1: (α_t ⊗̂ id)(a ⊗̂ l(β(b) ⊗̂ h)).
                    let sign = b.element().parity().expect("generator parity").koszul(h_parity);
                    let y = graded_tensor(alpha_of(a), beta(b))?.scale(sign * term.coeff);
                    f1 = Some(match f1 {
                        None => fx,
                        Some(acc) => acc.add(&fx)?,
                    });
                    g1 = Some(match g1 {
                        None => y,
                        Some(acc) => acc.add(&y)?,
                    });
                }
                let (f1, g1) = (f1.expect("nonempty Δ"), g1.expect("nonempty Δ"));
                let label = format!("{}|{}", g.name(), choice.name());
                record_identity(
                    &mut report,
                    &format!("f1-g1:{label}"),
                    t,
                    (f1.entries() - g1.entries()).norm(),
                    tol,
                );

                // The displayed closed forms, with the Koszul sign on the odd-h term.
                let display = match g {
                    Generator::U => graded_tensor(alpha_of(Generator::U), &beta_u)?,
                    Generator::V => {
                        let s = Parity::Odd.koszul(h_parity);
                        graded_tensor(alpha_of(Generator::V), &beta_u)?
                            .add(&graded_tensor(alpha_of(Generator::U), &beta_v)?.scale(s))?
                    }
                };
                record_identity(
                    &mut report,
                    &format!("display:{label}"),
                    t,
                    (f1.entries() - display.entries()).norm(),
                    tol,
                );
                if flip_samples.len() < 4 {
                    flip_samples.push(f1);
                }
            }
        }
    }

    // l is an involutive *-homomorphism on the realized operators.
    let mut hom = 0.0f64;
    for x in &flip_samples {
        for y in &flip_samples {
            if x.declared().is_none() || y.declared().is_none() {
                continue;
            }
            let lhs = flip(&x.mul(y)?, &hp, &hp)?;
            let rhs = flip(x, &hp, &hp)?.mul(&flip(y, &hp, &hp)?)?;
            hom = hom.max((lhs.entries() - rhs.entries()).norm());
        }
        let star = flip(&x.transpose(), &hp, &hp)?.transpose();
        let twice = flip(&flip(x, &hp, &hp)?, &hp, &hp)?;
        hom = hom
            .max((star.entries() - flip(x, &hp, &hp)?.entries()).norm())
            .max((twice.entries() - x.entries()).norm());
    }
    record_identity(&mut report, "flip-star-homomorphism", 1.0, hom, tol);

    // id ⊗̂ ι, with (ιh)(w) = ι(h(-w)), is multiplicative on sampled pairs.
    let sig = Signature::euclidean(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xf11b);
    let mut iota_defect = 0.0f64;
    let lm = |m: &MultiVector| left_mult_operator(m);
    for _ in 0..16 {
        let (v, w) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        for (_, h1) in &fields {
            for (_, h2) in &fields {
                let (a, c) = (h1.eval(&[v], sig)?, h2.eval(&[v], sig)?);
                let (b_m, d_m) = (h2.eval(&[-w], sig)?, h1.eval(&[-w], sig)?);
                let pb = b_m.parity().unwrap_or(Parity::Even);
                let pc = c.parity().unwrap_or(Parity::Even);
                let sign = pb.koszul(pc);
                let product = graded_tensor(&lm(&(&a * &c))?, &lm(&iota(&(&b_m * &d_m)))?)?.scale(sign);
                let separate =
                    graded_tensor(&lm(&a)?, &lm(&iota(&b_m))?)?.mul(&graded_tensor(&lm(&c)?, &lm(&iota(&d_m))?)?)?;
                iota_defect = iota_defect.max(product.max_abs_diff(&separate));
            }
        }
    }
    record_identity(&mut report, "iota-multiplicative", 1.0, iota_defect, tol);

    report.param("dim", 1);
    report.param("levels", levels);
    report.note("residuals are Frobenius norms; the C(V) leg is realized by multiplication operators");
    if cfg.dim != 1 || cfg.levels > FLIP_MAX_LEVELS {
        report.note(format!(
            "run at dim 1 and levels {levels} regardless of the sweep configuration"
        ));
    }
    Ok(report)
}
