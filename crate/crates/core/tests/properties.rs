use nalgebra::DMatrix;
use proptest::prelude::*;

use bottlab::clifford::{blade_product, Blade, MultiVector, Signature};
use bottlab::graded::{flip_simple, graded_tensor, GradedMatrix, Parity, ParityVector};
use bottlab::report::{parse_report, VerificationReport};
use bottlab::verify::{judge_decay, DecayCriteria};

fn signature() -> impl Strategy<Value = Signature> {
    (0usize..=3, 0usize..=3).prop_map(|(p, q)| Signature::new(p, q).unwrap())
}

fn multivector(sig: Signature) -> impl Strategy<Value = MultiVector> {
    prop::collection::vec(-2.0f64..2.0, sig.blade_count()).prop_map(move |c| MultiVector::from_coeffs(sig, c).unwrap())
}

fn parity() -> impl Strategy<Value = Parity> {
    prop::bool::ANY.prop_map(Parity::from_bit)
}

fn grading(n: usize) -> impl Strategy<Value = ParityVector> {
    prop::collection::vec(prop::bool::ANY, n)
        .prop_map(|bits| ParityVector::new(bits.into_iter().map(Parity::from_bit).collect()))
}

fn homogeneous_on(pv: ParityVector) -> impl Strategy<Value = GradedMatrix> {
    let n = pv.len();
    (prop::collection::vec(-1.0f64..1.0, n * n), parity()).prop_map(move |(raw, p)| {
        let m = GradedMatrix::infer(DMatrix::from_vec(n, n, raw), pv.clone())
            .unwrap()
            .part(p);
        GradedMatrix::new(m.into_entries(), pv.clone(), Some(p)).unwrap()
    })
}

/// A homogeneous matrix over a random grading of size `n`.
fn homogeneous(n: usize) -> impl Strategy<Value = GradedMatrix> {
    grading(n).prop_flat_map(homogeneous_on)
}

/// Two homogeneous matrices over one random grading.
fn homogeneous_pair() -> impl Strategy<Value = (GradedMatrix, GradedMatrix)> {
    (1usize..=3)
        .prop_flat_map(grading)
        .prop_flat_map(|pv| (homogeneous_on(pv.clone()), homogeneous_on(pv)))
}

proptest! {
    #[test]
    fn clifford_product_is_associative(
        (a, b, c) in signature().prop_flat_map(|s| (multivector(s), multivector(s), multivector(s)))
    ) {
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn blade_squares_are_signs(sig in signature(), mask in 0u32..64) {
        let blade = Blade::from_mask(mask & ((1u32 << sig.dim()) - 1));
        let (sign, product) = blade_product(blade, blade, sig);
        prop_assert_eq!(product, Blade::from_mask(0));
        prop_assert!(sign == 1.0 || sign == -1.0);
    }

    #[test]
    fn grade_involution_is_multiplicative(
        (a, b) in signature().prop_flat_map(|s| (multivector(s), multivector(s)))
    ) {
        let lhs = a.try_mul(&b).unwrap().grade_involution();
        let rhs = a.grade_involution().try_mul(&b.grade_involution()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn graded_tensor_is_multiplicative(
        (a1, a2) in homogeneous_pair(),
        (b1, b2) in homogeneous_pair(),
    ) {
        let sign = b1.declared().unwrap().koszul(a2.declared().unwrap());
        let lhs = graded_tensor(&a1, &b1).unwrap().mul(&graded_tensor(&a2, &b2).unwrap()).unwrap();
        let rhs = graded_tensor(&a1.mul(&a2).unwrap(), &b1.mul(&b2).unwrap()).unwrap().scale(sign);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn flip_is_an_involution(a in (1usize..=3).prop_flat_map(homogeneous), b in (1usize..=3).prop_flat_map(homogeneous)) {
        let once = flip_simple(&a, &b).unwrap();
        let twice = flip_simple(&b, &a).unwrap();
        let sign = a.declared().unwrap().koszul(b.declared().unwrap());
        // a ⊗̂ b ↦ ±b ⊗̂ a ↦ a ⊗̂ b, with the same sign both ways.
        prop_assert!((once.scale(sign).max_abs_diff(&graded_tensor(&b, &a).unwrap())) < 1e-12);
        prop_assert!((twice.scale(sign).max_abs_diff(&graded_tensor(&a, &b).unwrap())) < 1e-12);
    }

    #[test]
    fn power_laws_decay(c in 0.1f64..10.0, k in 0.5f64..4.0) {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| 2f64.powf(i as f64 / 2.0)).map(|t| (t, c * t.powf(-k))).collect();
        let v = judge_decay(&pts, &DecayCriteria::relative(0.9));
        prop_assert!(v.pass, "{:?}", v);
        prop_assert!((v.fit.unwrap().exponent + k).abs() < 1e-9);
    }

    #[test]
    fn reports_roundtrip(
        points in prop::collection::vec(("[a-z]{1,4}", -1e3f64..1e3, -1e6f64..1e6), 0..20),
        pass in prop::bool::ANY,
        tol in 1e-12f64..1.0,
    ) {
        let mut r = VerificationReport::new("graded-laws", tol);
        for (s, t, v) in &points {
            r.push(s, *t, *v);
        }
        r.param("seed", 7);
        if !pass {
            r.fail("x");
        }
        let back = parse_report(&r.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), r.to_json().unwrap());
    }
}
