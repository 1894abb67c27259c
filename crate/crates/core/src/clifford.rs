//! Real Clifford algebras `R_{p,q}` in the blade basis.
//!
//! Generators are indexed from zero internally; generator `i` squares to
//! `+1` when `i < p` and to `-1` otherwise. A blade is a bit mask over the
//! generators, and multivectors store one dense coefficient per blade.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{graded_tensor, GradedMatrix, Parity, ParityVector};

/// Upper bound on `p + q` for dense storage.
pub const MAX_GENERATORS: usize = 16;

/// Upper bound on `p + q` for the isomorphism checks.
pub const MAX_ISO_GENERATORS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q > MAX_GENERATORS {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: "at most 16 generators are supported",
            });
        }
        Ok(Signature { p, q })
    }

    /// `R_{n,0}`: every generator squares to `+1`.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of generators.
    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// Number of blades, `2^n`.
    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    /// Square of generator `i` (zero-based).
    pub fn square(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn blades(&self) -> impl Iterator<Item = Blade> {
        (0..self.blade_count() as u32).map(Blade)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({},{})", self.p, self.q)
    }
}

impl TryFrom<(usize, usize)> for Signature {
    type Error = Error;

    fn try_from((p, q): (usize, usize)) -> Result<Self> {
        Signature::new(p, q)
    }
}

impl From<Signature> for (usize, usize) {
    fn from(sig: Signature) -> Self {
        (sig.p, sig.q)
    }
}

/// Accepts `p,q` or `R(p,q)`.
impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix("R(")
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let (p, q) = body
            .split_once(',')
            .ok_or_else(|| Error::InvalidParameter(format!("signature `{s}` is not `p,q`")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("signature `{s}` is not `p,q`")))
        };
        Signature::new(parse(p)?, parse(q)?)
    }
}

/// A product of distinct generators in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u32) -> Self {
        Blade(mask)
    }

    /// The single generator `e_{i+1}`.
    pub fn generator(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn parity(self) -> Parity {
        Parity::from_bit(self.grade() & 1 == 1)
    }

    pub fn fits(self, sig: Signature) -> bool {
        (self.0 as u64) < (1u64 << sig.dim())
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for i in 0..32 {
            if self.0 & (1 << i) != 0 {
                if !first {
                    write!(f, "^")?;
                }
                write!(f, "e{}", i + 1)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Product of two basis blades: returns the sign and the resulting blade.
///
/// The sign collects one factor `-1` per transposition needed to sort the
/// concatenated generator word, then the squares of the repeated generators.
pub fn blade_product(a: Blade, b: Blade, sig: Signature) -> (f64, Blade) {
    debug_assert!(a.fits(sig) && b.fits(sig));
    let mut swaps = 0u32;
    let mut shifted = a.0 >> 1;
    while shifted != 0 {
        swaps += (shifted & b.0).count_ones();
        shifted >>= 1;
    }
    let mut sign = if swaps & 1 == 0 { 1.0 } else { -1.0 };
    let mut common = a.0 & b.0;
    while common != 0 {
        let i = common.trailing_zeros() as usize;
        sign *= sig.square(i);
        common &= common - 1;
    }
    (sign, Blade(a.0 ^ b.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiVector {
    signature: Signature,
    coeffs: Vec<f64>,
}

impl MultiVector {
    pub fn zero(signature: Signature) -> Self {
        MultiVector {
            signature,
            coeffs: vec![0.0; signature.blade_count()],
        }
    }

    pub fn scalar(signature: Signature, value: f64) -> Self {
        Self::blade(signature, Blade::SCALAR, value)
    }

    pub fn blade(signature: Signature, blade: Blade, value: f64) -> Self {
        let mut mv = Self::zero(signature);
        mv.coeffs[blade.index()] = value;
        mv
    }

    /// The generator `e_{i+1}`.
    pub fn generator(signature: Signature, i: usize) -> Self {
        Self::blade(signature, Blade::generator(i), 1.0)
    }

    /// The vector `sum_i v_i e_i`.
    pub fn vector(signature: Signature, components: &[f64]) -> Result<Self> {
        if components.len() != signature.dim() {
            return Err(Error::DimensionMismatch(components.len(), signature.dim()));
        }
        let mut mv = Self::zero(signature);
        for (i, &c) in components.iter().enumerate() {
            mv.coeffs[1 << i] = c;
        }
        Ok(mv)
    }

    pub fn from_coeffs(signature: Signature, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != signature.blade_count() {
            return Err(Error::DimensionMismatch(coeffs.len(), signature.blade_count()));
        }
        Ok(MultiVector { signature, coeffs })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> f64 {
        self.coeffs[blade.index()]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, &c)| (Blade(i as u32), c))
    }

    /// `Some(parity)` when every nonzero coefficient sits on blades of one
    /// parity. The zero multivector counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (blade, _) in self.terms() {
            match seen {
                None => seen = Some(blade.parity()),
                Some(p) if p != blade.parity() => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn even_part(&self) -> Self {
        self.parity_part(Parity::Even)
    }

    pub fn odd_part(&self) -> Self {
        self.parity_part(Parity::Odd)
    }

    fn parity_part(&self, parity: Parity) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if Blade(i as u32).parity() == parity { c } else { 0.0 })
            .collect();
        MultiVector {
            signature: self.signature,
            coeffs,
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &MultiVector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        MultiVector {
            signature: self.signature,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// The grading automorphism: `(-1)^grade` on every blade.
    pub fn grade_involution(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if Blade(i as u32).grade() & 1 == 1 { -c } else { c })
            .collect();
        MultiVector {
            signature: self.signature,
            coeffs,
        }
    }

    pub fn try_mul(&self, other: &MultiVector) -> Result<MultiVector> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(self.signature, other.signature));
        }
        let sig = self.signature;
        let mut out = vec![0.0; sig.blade_count()];
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let (sign, blade) = blade_product(a, b, sig);
                out[blade.index()] += sign * ca * cb;
            }
        }
        Ok(MultiVector {
            signature: sig,
            coeffs: out,
        })
    }

    pub fn try_add(&self, other: &MultiVector) -> Result<MultiVector> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(self.signature, other.signature));
        }
        Ok(MultiVector {
            signature: self.signature,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (blade, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{blade}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Panics on signature mismatch; use [`MultiVector::try_mul`] to get an error.
impl Mul for &MultiVector {
    type Output = MultiVector;

    fn mul(self, rhs: &MultiVector) -> MultiVector {
        self.try_mul(rhs).expect("multivector signature mismatch")
    }
}

impl Add for &MultiVector {
    type Output = MultiVector;

    fn add(self, rhs: &MultiVector) -> MultiVector {
        self.try_add(rhs).expect("multivector signature mismatch")
    }
}

impl Sub for &MultiVector {
    type Output = MultiVector;

    fn sub(self, rhs: &MultiVector) -> MultiVector {
        self + &(-rhs)
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;

    fn neg(self) -> MultiVector {
        self.scaled(-1.0)
    }
}

fn blade_parities(sig: Signature) -> ParityVector {
    ParityVector::new(sig.blades().map(Blade::parity).collect())
}

fn require_homogeneous(e: &MultiVector) -> Result<Parity> {
    e.parity().ok_or(Error::Inhomogeneous)
}

/// Matrix of `x -> e x` in the blade basis.
pub fn left_mult_operator(e: &MultiVector) -> Result<GradedMatrix> {
    let parity = require_homogeneous(e)?;
    let sig = e.signature();
    let dim = sig.blade_count();
    let mut m = DMatrix::zeros(dim, dim);
    for x in sig.blades() {
        for (a, ca) in e.terms() {
            let (sign, out) = blade_product(a, x, sig);
            m[(out.index(), x.index())] += sign * ca;
        }
    }
    GradedMatrix::new(m, blade_parities(sig), Some(parity))
}

/// Matrix of `x -> (-1)^{deg x} x f` in the blade basis.
pub fn twisted_right_mult_operator(f: &MultiVector) -> Result<GradedMatrix> {
    let parity = require_homogeneous(f)?;
    let sig = f.signature();
    let dim = sig.blade_count();
    let mut m = DMatrix::zeros(dim, dim);
    for x in sig.blades() {
        let twist = if x.grade() & 1 == 1 { -1.0 } else { 1.0 };
        for (b, cb) in f.terms() {
            let (sign, out) = blade_product(x, b, sig);
            m[(out.index(), x.index())] += twist * sign * cb;
        }
    }
    GradedMatrix::new(m, blade_parities(sig), Some(parity))
}

/// `N = sum_i ê_i e_i` on `Cliff(R^n)`. Only defined for signature `(n, 0)`.
pub fn number_operator(sig: Signature) -> Result<GradedMatrix> {
    if sig.q() != 0 {
        return Err(Error::InvalidSignature {
            p: sig.p(),
            q: sig.q(),
            reason: "the number operator is defined on R(n,0) only",
        });
    }
    let dim = sig.blade_count();
    let mut total = GradedMatrix::zeros(blade_parities(sig), Parity::Even);
    for i in 0..sig.dim() {
        let e = MultiVector::generator(sig, i);
        let term = twisted_right_mult_operator(&e)?.mul(&left_mult_operator(&e)?)?;
        total = total.add(&term)?;
    }
    debug_assert_eq!(total.dim(), dim);
    Ok(total)
}

/// Left-regular representation: the images of the generators.
pub fn regular_representation(sig: Signature) -> Result<Vec<GradedMatrix>> {
    (0..sig.dim())
        .map(|i| left_mult_operator(&MultiVector::generator(sig, i)))
        .collect()
}

/// Largest entrywise violation of `g_i^2 = ±1` and `g_i g_j + g_j g_i = 0`
/// for matrices meant to realize the generators of `sig`.
pub fn relation_defect(images: &[DMatrix<f64>], sig: Signature) -> Result<f64> {
    if images.len() != sig.dim() {
        return Err(Error::DimensionMismatch(images.len(), sig.dim()));
    }
    let mut worst: f64 = 0.0;
    for (i, gi) in images.iter().enumerate() {
        let dim = gi.nrows();
        let square = gi * gi - DMatrix::<f64>::identity(dim, dim) * sig.square(i);
        worst = worst.max(square.amax());
        for gj in &images[i + 1..] {
            let anti = gi * gj + gj * gi;
            worst = worst.max(anti.amax());
        }
    }
    Ok(worst)
}

/// Same relations checked inside the algebra itself.
pub fn multivector_relation_defect(images: &[MultiVector], sig: Signature) -> Result<f64> {
    if images.len() != sig.dim() {
        return Err(Error::DimensionMismatch(images.len(), sig.dim()));
    }
    let mut worst: f64 = 0.0;
    for (i, gi) in images.iter().enumerate() {
        let target = MultiVector::scalar(gi.signature(), sig.square(i));
        worst = worst.max(gi.try_mul(gi)?.max_abs_diff(&target));
        for gj in &images[i + 1..] {
            let anti = gi.try_mul(gj)?.try_add(&gj.try_mul(gi)?)?;
            worst = worst.max(anti.coeffs().iter().fold(0.0, |m, c| m.max(c.abs())));
        }
    }
    Ok(worst)
}

/// Dimension of the linear span of all ordered products of the images.
pub fn generated_dimension(images: &[DMatrix<f64>]) -> usize {
    let Some(first) = images.first() else {
        return 1;
    };
    let dim = first.nrows();
    let count = 1usize << images.len();
    let mut columns = DMatrix::<f64>::zeros(dim * dim, count);
    for subset in 0..count {
        let mut prod = DMatrix::<f64>::identity(dim, dim);
        for (i, g) in images.iter().enumerate() {
            if subset & (1 << i) != 0 {
                prod = &prod * g;
            }
        }
        columns.set_column(
            subset,
            &DMatrix::from_column_slice(dim * dim, 1, prod.as_slice()).column(0),
        );
    }
    columns.rank(1e-9)
}

/// Generator images of one Clifford algebra inside another.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub source: Signature,
    pub target: Signature,
    pub images: Vec<MultiVector>,
    pub defect: f64,
}

/// Looks for a graded isomorphism `R_source -> R_target`.
///
/// Candidate images are odd blades of the target. A choice of blades with the
/// right squares that pairwise anticommute and whose masks are independent
/// over GF(2) generates all `2^n` blades, so it defines an isomorphism. The
/// search is a deterministic depth-first walk; failing to find a witness is
/// not a proof of non-isomorphism.
pub fn algebra_isomorphism_check(source: Signature, target: Signature) -> Result<IsoWitness> {
    let n = source.dim();
    if n != target.dim() {
        return Err(Error::InvalidParameter(format!(
            "{source} and {target} have different generator counts"
        )));
    }
    if n > MAX_ISO_GENERATORS {
        return Err(Error::InvalidParameter(format!(
            "isomorphism checks are limited to {MAX_ISO_GENERATORS} generators"
        )));
    }
    if source == target {
        let images: Vec<_> = (0..n).map(|i| MultiVector::generator(target, i)).collect();
        let defect = multivector_relation_defect(&images, source)?;
        return Ok(IsoWitness {
            source,
            target,
            images,
            defect,
        });
    }

    let candidates: Vec<(Blade, f64)> = target
        .blades()
        .filter(|b| b.grade() & 1 == 1)
        .map(|b| (b, blade_product(b, b, target).0))
        .collect();

    let mut chosen: Vec<Blade> = Vec::with_capacity(n);
    if !search_witness(source, &candidates, &mut chosen) {
        return Err(Error::NoWitness {
            source_sig: source,
            target_sig: target,
        });
    }
    let images: Vec<_> = chosen.iter().map(|&b| MultiVector::blade(target, b, 1.0)).collect();
    let defect = multivector_relation_defect(&images, source)?;
    Ok(IsoWitness {
        source,
        target,
        images,
        defect,
    })
}

fn search_witness(source: Signature, candidates: &[(Blade, f64)], chosen: &mut Vec<Blade>) -> bool {
    let depth = chosen.len();
    if depth == source.dim() {
        return true;
    }
    let wanted = source.square(depth);
    for &(blade, square) in candidates {
        if square != wanted || chosen.contains(&blade) {
            continue;
        }
        // Odd blades anticommute exactly when they share an even number of generators.
        let anticommutes = chosen.iter().all(|c| (c.mask() & blade.mask()).count_ones() % 2 == 0);
        if !anticommutes || !independent_over_gf2(chosen, blade) {
            continue;
        }
        chosen.push(blade);
        if search_witness(source, candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn independent_over_gf2(chosen: &[Blade], candidate: Blade) -> bool {
    let mut basis: Vec<u32> = Vec::new();
    for mask in chosen.iter().map(|b| b.mask()).chain(std::iter::once(candidate.mask())) {
        let mut v = mask;
        for &row in &basis {
            v = v.min(v ^ row);
        }
        if v == 0 {
            return false;
        }
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    true
}

/// Images of the generators of `R_{a.p+b.p, a.q+b.q}` inside the graded
/// tensor product of the regular representations of `a` and `b`: the `+1`
/// generators come first (`e ⊗̂ 1` then `1 ⊗̂ f`), then the `-1` generators.
pub fn tensor_product_witness(a: Signature, b: Signature) -> Result<(Signature, Vec<GradedMatrix>)> {
    let joined = Signature::new(a.p() + b.p(), a.q() + b.q())?;
    let left = regular_representation(a)?;
    let right = regular_representation(b)?;
    let id_left = GradedMatrix::identity(blade_parities(a));
    let id_right = GradedMatrix::identity(blade_parities(b));

    let lift_left = |g: &GradedMatrix| graded_tensor(g, &id_right);
    let lift_right = |g: &GradedMatrix| graded_tensor(&id_left, g);

    let mut images = Vec::with_capacity(joined.dim());
    for g in &left[..a.p()] {
        images.push(lift_left(g)?);
    }
    for g in &right[..b.p()] {
        images.push(lift_right(g)?);
    }
    for g in &left[a.p()..] {
        images.push(lift_left(g)?);
    }
    for g in &right[b.p()..] {
        images.push(lift_right(g)?);
    }
    Ok((joined, images))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn generator_squares_follow_signature() {
        let e1 = Blade::generator(0);
        assert_eq!(blade_product(e1, e1, sig(1, 0)), (1.0, Blade::SCALAR));
        assert_eq!(blade_product(e1, e1, sig(0, 1)), (-1.0, Blade::SCALAR));
    }

    #[test]
    fn generators_anticommute() {
        let s = sig(2, 0);
        let (e1, e2) = (Blade::generator(0), Blade::generator(1));
        let e12 = Blade::from_mask(0b11);
        assert_eq!(blade_product(e1, e2, s), (1.0, e12));
        assert_eq!(blade_product(e2, e1, s), (-1.0, e12));
    }

    #[test]
    fn bivector_squares_to_minus_one() {
        // e1e2 e1e2 = -e1e1 e2e2 = -1
        let s = sig(2, 0);
        let e12 = MultiVector::blade(s, Blade::from_mask(0b11), 1.0);
        assert_eq!(&e12 * &e12, MultiVector::scalar(s, -1.0));
    }

    #[test]
    fn one_plus_e_times_one_minus_e_vanishes() {
        let s = sig(1, 0);
        let one = MultiVector::scalar(s, 1.0);
        let e1 = MultiVector::generator(s, 0);
        let prod = &(&one + &e1) * &(&one - &e1);
        assert_eq!(prod, MultiVector::zero(s));
    }

    #[test]
    fn multiply_rejects_signature_mismatch() {
        let a = MultiVector::scalar(sig(1, 0), 1.0);
        let b = MultiVector::scalar(sig(0, 1), 1.0);
        assert!(matches!(a.try_mul(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn signature_bounds_and_parsing() {
        assert!(Signature::new(9, 8).is_err());
        assert_eq!("4,4".parse::<Signature>().unwrap(), sig(4, 4));
        assert_eq!("R(8,0)".parse::<Signature>().unwrap(), sig(8, 0));
        assert!("8".parse::<Signature>().is_err());
        assert!("a,b".parse::<Signature>().is_err());
    }

    #[test]
    fn left_mult_by_e1_swaps_basis() {
        let s = sig(1, 0);
        let m = left_mult_operator(&MultiVector::generator(s, 0)).unwrap();
        assert_eq!(m.entries(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(m.declared(), Some(Parity::Odd));
        let id = left_mult_operator(&MultiVector::scalar(s, 1.0)).unwrap();
        assert_eq!(id.entries(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn twisted_right_mult_on_r10() {
        let s = sig(1, 0);
        let m = twisted_right_mult_operator(&MultiVector::generator(s, 0)).unwrap();
        // ê1(1) = e1, ê1(e1) = (-1) e1 e1 = -1
        assert_eq!(m.entries()[(1, 0)], 1.0);
        assert_eq!(m.entries()[(0, 1)], -1.0);
        let sq = m.mul(&m).unwrap();
        assert_eq!(sq.entries(), &(-DMatrix::<f64>::identity(2, 2)));
    }

    #[test]
    fn operators_reject_inhomogeneous_input() {
        let s = sig(1, 0);
        let mixed = &MultiVector::scalar(s, 1.0) + &MultiVector::generator(s, 0);
        assert!(matches!(left_mult_operator(&mixed), Err(Error::Inhomogeneous)));
        assert!(matches!(twisted_right_mult_operator(&mixed), Err(Error::Inhomogeneous)));
    }

    #[test]
    fn number_operator_small_cases() {
        let n1 = number_operator(sig(1, 0)).unwrap();
        assert_eq!(n1.entries()[(0, 0)], -1.0);
        assert_eq!(n1.entries()[(1, 1)], 1.0);
        let n2 = number_operator(sig(2, 0)).unwrap();
        let diag: Vec<f64> = n2.entries().diagonal().iter().copied().collect();
        assert_eq!(diag, vec![-2.0, 0.0, 0.0, 2.0]);
        assert!(number_operator(sig(1, 1)).is_err());
    }

    #[test]
    fn pauli_realization_of_r11_spans_m2() {
        let e1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let e2 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let images = [e1, e2];
        assert_eq!(relation_defect(&images, sig(1, 1)).unwrap(), 0.0);
        assert_eq!(generated_dimension(&images), 4);
    }

    #[test]
    fn regular_representation_is_faithful() {
        for (p, q) in [(1, 1), (2, 1), (0, 3)] {
            let s = sig(p, q);
            let images: Vec<_> = regular_representation(s)
                .unwrap()
                .into_iter()
                .map(|g| g.into_entries())
                .collect();
            assert_eq!(relation_defect(&images, s).unwrap(), 0.0);
            assert_eq!(generated_dimension(&images), s.blade_count());
        }
    }

    #[test]
    fn identity_witness_for_equal_signatures() {
        let w = algebra_isomorphism_check(sig(2, 1), sig(2, 1)).unwrap();
        assert_eq!(w.defect, 0.0);
        for (i, img) in w.images.iter().enumerate() {
            assert_eq!(img, &MultiVector::generator(sig(2, 1), i));
        }
    }

    #[test]
    fn r80_and_r44_witness() {
        assert_eq!(sig(8, 0).blade_count(), 256);
        assert_eq!(sig(4, 4).blade_count(), 256);
        let w = algebra_isomorphism_check(sig(8, 0), sig(4, 4)).unwrap();
        assert!(w.defect <= 1e-10);
        assert!(w.images.iter().all(|m| m.parity() == Some(Parity::Odd)));
    }

    #[test]
    fn no_graded_witness_between_r20_and_r02() {
        assert!(matches!(
            algebra_isomorphism_check(sig(2, 0), sig(0, 2)),
            Err(Error::NoWitness { .. })
        ));
        assert!(algebra_isomorphism_check(sig(2, 0), sig(1, 0)).is_err());
    }

    #[test]
    fn tensor_of_two_r10_realizes_r20() {
        let (joined, images) = tensor_product_witness(sig(1, 0), sig(1, 0)).unwrap();
        assert_eq!(joined, sig(2, 0));
        let mats: Vec<_> = images.iter().map(|g| g.entries().clone()).collect();
        assert_eq!(relation_defect(&mats, joined).unwrap(), 0.0);
        assert_eq!(generated_dimension(&mats), 4);
    }

    #[test]
    fn blade_display() {
        assert_eq!(Blade::SCALAR.to_string(), "1");
        assert_eq!(Blade::from_mask(0b101).to_string(), "e1^e3");
    }
}
