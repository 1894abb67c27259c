//! Exact algebraic suites: Clifford relations and witnesses, graded sign
//! laws, the Bott map, and the comultiplication.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{record_identity, SweepConfig};
use crate::clifford::{
    algebra_isomorphism_check, blade_product, generated_dimension, left_mult_operator, regular_representation,
    relation_defect, tensor_product_witness, Blade, MultiVector, Signature,
};
use crate::error::Result;
use crate::funcalc::{self, delta_via_xr_check, Generator, SElement};
use crate::graded::{
    flip, flip_simple, graded_commutator, graded_tensor, iota, tensor_involution_defect, GradedMatrix, Parity,
    ParityVector,
};
use crate::linalg;
use crate::oscillator::{bott_map, multiplication_operator, OscillatorRep};
use crate::report::VerificationReport;

const SAMPLES: usize = 12;

pub fn clifford_relations(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-10);
    let mut report = VerificationReport::new("clifford-relations", tol);
    let mut cases = Vec::new();
    let mut case = 0;
    for total in 1..=5usize {
        for p in (0..=total).rev() {
            let sig = Signature::new(p, total - p)?;
            case += 1;
            let images: Vec<DMatrix<f64>> = regular_representation(sig)?
                .into_iter()
                .map(|g| g.into_entries())
                .collect();
            let defect = relation_defect(&images, sig)?;
            record_identity(&mut report, "relations", case as f64, defect, tol);
            let missing = (sig.blade_count() - generated_dimension(&images)) as f64;
            record_identity(&mut report, "faithfulness", case as f64, missing, 0.0);
            cases.push(sig.to_string());
        }
    }
    report.param("cases", cases);
    report.note(
        "t indexes the signature list in params.cases; faithfulness counts missing dimensions of the generated algebra",
    );
    Ok(report)
}

/// Number of distinct blades reached by products of subsets of blade images.
fn blade_span(images: &[MultiVector], target: Signature) -> Option<usize> {
    let blades: Vec<Blade> = images
        .iter()
        .map(|m| {
            let mut terms = m.terms().filter(|(_, c)| *c != 0.0);
            match (terms.next(), terms.next()) {
                (Some((b, _)), None) => Some(b),
                _ => None,
            }
        })
        .collect::<Option<_>>()?;
    let mut reached = BTreeSet::new();
    for subset in 0..(1u32 << blades.len()) {
        let mut acc = Blade::SCALAR;
        for (i, b) in blades.iter().enumerate() {
            if subset & (1 << i) != 0 {
                acc = blade_product(acc, *b, target).1;
            }
        }
        reached.insert(acc.mask());
    }
    Some(reached.len())
}

pub fn clifford_iso(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-10);
    let mut report = VerificationReport::new("clifford-iso", tol);
    let sig = |p, q| Signature::new(p, q);

    let tensor_cases = [((1, 0), (1, 0)), ((1, 0), (0, 1)), ((1, 1), (1, 0)), ((2, 0), (0, 2))];
    let mut labels = Vec::new();
    for (i, (a, b)) in tensor_cases.iter().enumerate() {
        let (sa, sb) = (sig(a.0, a.1)?, sig(b.0, b.1)?);
        let (joined, images) = tensor_product_witness(sa, sb)?;
        let mats: Vec<DMatrix<f64>> = images.into_iter().map(|g| g.into_entries()).collect();
        let t = (i + 1) as f64;
        record_identity(&mut report, "tensor-relations", t, relation_defect(&mats, joined)?, tol);
        let missing = (joined.blade_count() - generated_dimension(&mats)) as f64;
        record_identity(&mut report, "tensor-faithfulness", t, missing, 0.0);
        labels.push(format!("{sa}x{sb}->{joined}"));
    }
    report.param("tensor_cases", labels);

    let iso_cases = [((8, 0), (4, 4)), ((4, 4), (8, 0)), ((0, 8), (4, 4))];
    let mut labels = Vec::new();
    for (i, (s, t_sig)) in iso_cases.iter().enumerate() {
        let (source, target) = (sig(s.0, s.1)?, sig(t_sig.0, t_sig.1)?);
        let t = (i + 1) as f64;
        let w = algebra_isomorphism_check(source, target)?;
        record_identity(&mut report, "iso-relations", t, w.defect, tol);
        let span = blade_span(&w.images, target).unwrap_or(0);
        record_identity(&mut report, "iso-span", t, (target.blade_count() - span) as f64, 0.0);
        labels.push(format!("{source}->{target}"));
    }
    report.param("iso_cases", labels);

    match algebra_isomorphism_check(sig(2, 0)?, sig(0, 2)?) {
        Ok(_) => report.fail("found a blade witness R(2,0) -> R(0,2), which cannot exist"),
        Err(_) => report.note("no blade witness R(2,0) -> R(0,2), as expected"),
    }
    Ok(report)
}

fn random_graded(rng: &mut ChaCha8Rng, parity: &ParityVector, p: Parity) -> Result<GradedMatrix> {
    let n = parity.len();
    let raw = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let m = GradedMatrix::infer(raw, parity.clone())?.part(p);
    GradedMatrix::new(m.into_entries(), parity.clone(), Some(p))
}

fn random_multivector(rng: &mut ChaCha8Rng, sig: Signature, p: Parity) -> Result<MultiVector> {
    let coeffs = sig
        .blades()
        .map(|b| if b.parity() == p { rng.gen_range(-1.0..1.0) } else { 0.0 })
        .collect();
    MultiVector::from_coeffs(sig, coeffs)
}

const PARITIES: [Parity; 2] = [Parity::Even, Parity::Odd];

pub fn graded_laws(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-12);
    let mut report = VerificationReport::new("graded-laws", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h1 = ParityVector::new(vec![Parity::Even, Parity::Odd, Parity::Even, Parity::Odd, Parity::Odd]);
    let h2 = ParityVector::new(vec![Parity::Even, Parity::Odd, Parity::Odd]);

    let (mut mult, mut invol, mut flip_twice, mut flip_mult, mut flip_star, mut flip_rule, mut comm) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        for pa in PARITIES {
            for pb in PARITIES {
                for pc in PARITIES {
                    let pd = pa + pb + pc;
                    let a = random_graded(&mut rng, &h1, pa)?;
                    let b = random_graded(&mut rng, &h2, pb)?;
                    let c = random_graded(&mut rng, &h1, pc)?;
                    let d = random_graded(&mut rng, &h2, pd)?;
                    let x = graded_tensor(&a, &b)?;
                    let y = graded_tensor(&c, &d)?;
                    let lhs = x.mul(&y)?;
                    let rhs = graded_tensor(&a.mul(&c)?, &b.mul(&d)?)?.scale(pb.koszul(pc));
                    mult = mult.max(lhs.max_abs_diff(&rhs));
                    invol = invol.max(tensor_involution_defect(&a, &b)?);

                    let fx = flip(&x, &h1, &h2)?;
                    let fy = flip(&y, &h1, &h2)?;
                    flip_twice = flip_twice.max(flip(&fx, &h2, &h1)?.max_abs_diff(&x));
                    flip_mult = flip_mult.max(flip(&lhs, &h1, &h2)?.max_abs_diff(&fx.mul(&fy)?));
                    flip_star = flip_star.max(flip(&x.transpose(), &h1, &h2)?.max_abs_diff(&fx.transpose()));
                    flip_rule = flip_rule.max(fx.max_abs_diff(&flip_simple(&a, &b)?));

                    let ac = graded_commutator(&a, &c)?;
                    let ca = graded_commutator(&c, &a)?.scale(-pa.koszul(pc));
                    comm = comm.max(ac.max_abs_diff(&ca));
                }
            }
        }
    }
    record_identity(&mut report, "tensor-multiplication", 1.0, mult, tol);
    record_identity(&mut report, "tensor-involution", 1.0, invol, tol);
    record_identity(&mut report, "flip-involutive", 1.0, flip_twice, tol);
    record_identity(&mut report, "flip-multiplicative", 1.0, flip_mult, tol);
    record_identity(&mut report, "flip-star", 1.0, flip_star, tol);
    record_identity(&mut report, "flip-sign-rule", 1.0, flip_rule, tol);
    record_identity(&mut report, "commutator-symmetry", 1.0, comm, tol);

    // id ⊗̂ ι on Cliff ⊗̂ Cliff, through the left regular representation.
    let sig = Signature::euclidean(cfg.dim.min(3))?;
    let rep = |m: &MultiVector| left_mult_operator(m);
    let mut iota_defect = 0.0f64;
    for _ in 0..SAMPLES {
        for (pa, pb, pc, pd) in [(0, 1, 1, 0), (1, 1, 1, 1), (0, 0, 1, 1), (1, 0, 0, 1)] {
            let [pa, pb, pc, pd] = [pa, pb, pc, pd].map(|b| Parity::from_bit(b == 1));
            let a = random_multivector(&mut rng, sig, pa)?;
            let b = random_multivector(&mut rng, sig, pb)?;
            let c = random_multivector(&mut rng, sig, pc)?;
            let d = random_multivector(&mut rng, sig, pd)?;
            let image = |x: &MultiVector, y: &MultiVector| graded_tensor(&rep(x)?, &rep(&iota(y))?);
            let product = image(&(&a * &c), &(&b * &d))?.scale(pb.koszul(pc));
            let separate = image(&a, &b)?.mul(&image(&c, &d)?)?;
            iota_defect = iota_defect.max(product.max_abs_diff(&separate));
        }
    }
    record_identity(&mut report, "iota-multiplicative", 1.0, iota_defect, tol);

    // Parity block structure of the assembled operators.
    let levels = cfg.levels.min(8);
    let osc = OscillatorRep::new(cfg.dim, levels)?;
    let leak = [
        osc.clifford().block_leak(Parity::Odd),
        osc.dirac().block_leak(Parity::Odd),
        osc.bott().block_leak(Parity::Odd),
        osc.number().block_leak(Parity::Even),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    record_identity(&mut report, "operator-parity", 1.0, leak, 0.0);
    let mut mh_leak = 0.0f64;
    for choice in &cfg.h_choices {
        let h = choice.field(cfg.dim)?;
        let m = multiplication_operator(&h, osc.basis())?;
        let expected = h.parity().unwrap_or(Parity::Even);
        if m.declared() != Some(expected) {
            report.fail(format!(
                "M_{} has parity {:?}, expected {expected}",
                choice.name(),
                m.declared()
            ));
        }
        mh_leak = mh_leak.max(m.block_leak(expected));
    }
    record_identity(&mut report, "multiplication-parity", 1.0, mh_leak, 0.0);

    // Functional calculus on B: homomorphism, parity covariance, scaling.
    let b = osc.bott();
    let eig = linalg::eigh(b.entries())?;
    let gens = [SElement::u(), SElement::v()];
    let mut hom = 0.0f64;
    let mut cov = 0.0f64;
    for f in &gens {
        let fb = funcalc::matrix_function_eig(f, &eig, b)?;
        let raw = GradedMatrix::infer(linalg::apply_to_eigen(&eig, |x| f.eval(x)), b.parity_vector().clone())?;
        cov = cov.max(raw.block_leak(f.parity().expect("generators are homogeneous")));
        for g in &gens {
            let gb = funcalc::matrix_function_eig(g, &eig, b)?;
            let fg = funcalc::matrix_function_eig(&f.product(g)?, &eig, b)?;
            hom = hom.max(fg.max_abs_diff(&fb.mul(&gb)?));
        }
    }
    record_identity(&mut report, "funcalc-homomorphism", 1.0, hom, tol);
    record_identity(&mut report, "funcalc-parity", 1.0, cov, tol);

    let d = osc.dirac();
    let scaled = funcalc::scaled_matrix_function(&SElement::u(), 2.0, d)?;
    let direct = funcalc::matrix_function(&SElement::u(), &d.scale(0.5))?;
    let d2 = d.mul(d)?;
    let heat = linalg::spectral_apply(d2.entries(), |x| (-x / 4.0).exp())?;
    let scale_defect = scaled.max_abs_diff(&direct).max((scaled.entries() - heat).amax());
    record_identity(&mut report, "funcalc-scaling", 1.0, scale_defect, tol);

    report.param("samples", SAMPLES);
    report.param("operator_levels", levels);
    report.note("each series holds the largest defect over all sampled parity combinations");
    Ok(report)
}

pub fn bott_map_suite(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol = cfg.tol_or(1e-12);
    let mut report = VerificationReport::new("bott-map", tol);
    let n = cfg.dim;
    let sig = Signature::euclidean(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb077);
    let points: Vec<Vec<f64>> = (0..64)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let (u, v) = (SElement::u(), SElement::v());
    let pairs = [(u.clone(), u.clone()), (u.clone(), v.clone()), (v.clone(), v.clone())];

    let (mut square, mut two_point, mut hom, mut closed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for x in &points {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let p = MultiVector::vector(sig, x)?;
        square = square.max((&p * &p).max_abs_diff(&MultiVector::scalar(sig, r * r)));
        let one = MultiVector::scalar(sig, 1.0);
        let plus = (&one + &p.scaled(1.0 / r)).scaled(0.5);
        let minus = (&one - &p.scaled(1.0 / r)).scaled(0.5);
        for f in [&u, &v] {
            let expect = &plus.scaled(f.eval(r)) + &minus.scaled(f.eval(-r));
            two_point = two_point.max(bott_map(f, x, sig)?.max_abs_diff(&expect));
        }
        for (f, g) in &pairs {
            let lhs = &bott_map(f, x, sig)? * &bott_map(g, x, sig)?;
            hom = hom.max(lhs.max_abs_diff(&bott_map(&f.product(g)?, x, sig)?));
        }
        let bu = bott_map(&u, x, sig)?;
        let bv = bott_map(&v, x, sig)?;
        let e = (-r * r).exp();
        closed = closed
            .max(bu.max_abs_diff(&MultiVector::scalar(sig, e)))
            .max(bv.max_abs_diff(&p.scaled(e)));
    }
    let origin = vec![0.0; n];
    let at_zero = bott_map(&v, &origin, sig)?.norm();
    record_identity(&mut report, "vector-square", 1.0, square, tol);
    record_identity(&mut report, "two-point-calculus", 1.0, two_point, tol);
    record_identity(&mut report, "closed-form", 1.0, closed, tol);
    record_identity(&mut report, "homomorphism", 1.0, hom, tol);
    record_identity(&mut report, "v-at-origin", 1.0, at_zero, 0.0);
    report.param("points", points.len());
    report.param("dim", n);
    Ok(report)
}

pub const DELTA_LEVELS: [usize; 3] = [16, 20, 24];
pub const DELTA_WINDOW: usize = 4;

pub fn delta_xr(cfg: &SweepConfig) -> Result<VerificationReport> {
    let tol_u = cfg.tol_or(1e-10);
    let tol_v = cfg.tol_or(1e-8);
    let mut report = VerificationReport::new("delta-xr", tol_u);
    let mut radii = Vec::new();
    for generator in [Generator::U, Generator::V] {
        let tol = if generator == Generator::U { tol_u } else { tol_v };
        let mut reference = Vec::new();
        for &level in &DELTA_LEVELS {
            let res = delta_via_xr_check(level, generator, DELTA_WINDOW)?;
            let name = generator.name();
            record_identity(
                &mut report,
                &format!("{name}:algebraic"),
                level as f64,
                res.algebraic,
                tol,
            );
            report.push(&format!("{name}:reference"), level as f64, res.reference);
            reference.push(res.reference);
            let expected = generator.element().parity();
            if res.parity != expected {
                report.fail(format!(
                    "{name}: f(X~) has parity {:?}, expected {expected:?}",
                    res.parity
                ));
            }
            if generator == Generator::U {
                radii.push(res.radius);
            }
        }
        if !reference.windows(2).all(|w| w[1] < w[0]) {
            report.fail(format!(
                "{}: reference residual does not decrease with truncation",
                generator.name()
            ));
        }
    }
    report.param("levels", DELTA_LEVELS);
    report.param("window", DELTA_WINDOW);
    report.param("radius", radii);
    report.param("tol_v", tol_v);
    report.note("algebraic: both sides on the same truncated X; reference: against quadrature-exact u, v on levels ≤ window per leg");
    Ok(report)
}
