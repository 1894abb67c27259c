//! `Cliff(V)`-valued functions on `V = Rⁿ` and their multiplication operators.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::basis::HermiteBasis;
use super::hermite;
use crate::clifford::{left_mult_operator, Blade, MultiVector, Signature};
use crate::error::{invalid, Error, Result};
use crate::funcalc::SElement;
use crate::graded::{graded_tensor, GradedMatrix, Parity, ParityVector};

#[derive(Clone, Debug)]
pub enum CliffordField {
    /// Not in `C_0`, but useful as a degenerate input.
    Constant(MultiVector),
    /// `β(f) = f(P)` with `P(v) = v`.
    Bott(SElement),
    /// `exp(-‖v - center‖² / width²) · blade`.
    Bump {
        center: Vec<f64>,
        width: f64,
        blade: Blade,
    },
    /// `v -> inner(v / t)`.
    Scaled {
        inner: Box<CliffordField>,
        t: f64,
    },
    Product(Box<CliffordField>, Box<CliffordField>),
}

/// `f(P(v)) = f_even(r) + (f_odd(r) / r) v` with `r = ‖v‖`, and `f(0)` at the origin.
pub fn bott_map(f: &SElement, v: &[f64], sig: Signature) -> Result<MultiVector> {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if r == 0.0 {
        return Ok(MultiVector::scalar(sig, f.eval(0.0)));
    }
    let vec = MultiVector::vector(sig, v)?;
    let scalar = MultiVector::scalar(sig, f.even_part_at(r));
    Ok(&scalar + &vec.scaled(f.odd_part_at(r) / r))
}

impl CliffordField {
    pub fn bump(center: Vec<f64>, width: f64, blade: Blade) -> Result<Self> {
        if !(width > 0.0) {
            return Err(invalid("bump width must be positive"));
        }
        Ok(CliffordField::Bump { center, width, blade })
    }

    pub fn eval(&self, v: &[f64], sig: Signature) -> Result<MultiVector> {
        match self {
            CliffordField::Constant(m) => {
                if m.signature() != sig {
                    return Err(Error::SignatureMismatch(m.signature(), sig));
                }
                Ok(m.clone())
            }
            CliffordField::Bott(f) => bott_map(f, v, sig),
            CliffordField::Bump { center, width, blade } => {
                if center.len() != v.len() {
                    return Err(Error::DimensionMismatch(center.len(), v.len()));
                }
                if !blade.fits(sig) {
                    return Err(invalid(format!("blade {blade} does not fit {sig}")));
                }
                let d2: f64 = center.iter().zip(v).map(|(c, x)| (x - c) * (x - c)).sum();
                Ok(MultiVector::blade(sig, *blade, (-d2 / (width * width)).exp()))
            }
            CliffordField::Scaled { inner, t } => {
                let w: Vec<f64> = v.iter().map(|x| x / t).collect();
                inner.eval(&w, sig)
            }
            CliffordField::Product(a, b) => a.eval(v, sig)?.try_mul(&b.eval(v, sig)?),
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        match self {
            CliffordField::Constant(m) => m.parity(),
            CliffordField::Bott(f) => f.parity(),
            CliffordField::Bump { blade, .. } => Some(blade.parity()),
            CliffordField::Scaled { inner, .. } => inner.parity(),
            CliffordField::Product(a, b) => Some(a.parity()? + b.parity()?),
        }
    }

    /// Whether `M_h` is a multiple of the identity.
    pub fn is_scalar_constant(&self) -> bool {
        match self {
            CliffordField::Constant(m) => m.terms().all(|(b, c)| b == Blade::SCALAR || c == 0.0),
            CliffordField::Scaled { inner, .. } => inner.is_scalar_constant(),
            _ => false,
        }
    }

    /// `h_t(v) = h(v / t)`, for `t ≥ 1`.
    pub fn rescale(&self, t: f64) -> Result<CliffordField> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(invalid(format!("rescaling parameter must be ≥ 1, got {t}")));
        }
        if t == 1.0 {
            return Ok(self.clone());
        }
        Ok(match self {
            CliffordField::Constant(_) => self.clone(),
            CliffordField::Scaled { inner, t: s } => CliffordField::Scaled {
                inner: inner.clone(),
                t: s * t,
            },
            other => CliffordField::Scaled {
                inner: Box::new(other.clone()),
                t,
            },
        })
    }

    /// Polynomial degree in `v`, when `h` is polynomial.
    fn poly_degree(&self) -> Option<usize> {
        match self {
            CliffordField::Constant(_) => Some(0),
            CliffordField::Scaled { inner, .. } => inner.poly_degree(),
            CliffordField::Product(a, b) => Some(a.poly_degree()? + b.poly_degree()?),
            _ => None,
        }
    }
}

impl fmt::Display for CliffordField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordField::Constant(m) => write!(f, "const[{m}]"),
            CliffordField::Bott(s) => write!(f, "({s})(P)"),
            CliffordField::Bump { center, width, blade } => {
                write!(f, "bump[{center:?},{width}]*{blade}")
            }
            CliffordField::Scaled { inner, t } => write!(f, "{inner}_t{t}"),
            CliffordField::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// `M_h` by tensor-product Gauss–Hermite quadrature on the spatial legs.
pub fn multiplication_operator(h: &CliffordField, basis: &HermiteBasis) -> Result<GradedMatrix> {
    let nodes = hermite::quadrature_nodes(basis.level(), h.poly_degree());
    multiplication_operator_with_nodes(h, basis, nodes)
}

pub fn multiplication_operator_with_nodes(
    h: &CliffordField,
    basis: &HermiteBasis,
    nodes: usize,
) -> Result<GradedMatrix> {
    let n = basis.dim_n();
    let sig = basis.signature();
    let (xs, ws) = hermite::gauss_hermite(nodes)?;
    let a1 = hermite::weighted_values(basis.level(), &xs, &ws);
    let grid_len = nodes.pow(n as u32);
    let spatial = basis.spatial_len();

    // Φ[k, node] = Π_i a_{k_i}(x_{node_i}).
    let mut phi = DMatrix::zeros(spatial, grid_len);
    let mut values = vec![DVector::zeros(grid_len); basis.blade_count()];
    let mut digits = vec![0usize; n];
    let mut point = vec![0.0; n];
    for g in 0..grid_len {
        let mut rem = g;
        for d in (0..n).rev() {
            digits[d] = rem % nodes;
            rem /= nodes;
        }
        for (p, &d) in point.iter_mut().zip(&digits) {
            *p = xs[d];
        }
        for (s, k) in basis.multi_indices().iter().enumerate() {
            phi[(s, g)] = k.iter().zip(&digits).map(|(&ki, &d)| a1[(ki, d)]).product();
        }
        let hv = h.eval(&point, sig)?;
        for (blade, c) in hv.terms() {
            values[blade.index()][g] = c;
        }
    }

    let spatial_parity = ParityVector::all_even(spatial);
    let mut total: Option<GradedMatrix> = None;
    for blade in sig.blades() {
        let hv = &values[blade.index()];
        if hv.iter().all(|&c| c == 0.0) {
            continue;
        }
        let mut scaled = phi.clone();
        for (mut col, &c) in scaled.column_iter_mut().zip(hv.iter()) {
            col *= c;
        }
        let s = &scaled * phi.transpose();
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::Quadrature);
        }
        let s = GradedMatrix::new((&s + s.transpose()) * 0.5, spatial_parity.clone(), Some(Parity::Even))?;
        let left = left_mult_operator(&MultiVector::blade(sig, blade, 1.0))?;
        let term = graded_tensor(&s, &left)?;
        total = Some(match total {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    Ok(total.unwrap_or_else(|| GradedMatrix::zeros(basis.parity_vector(), Parity::Even)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sig(n: usize) -> Signature {
        Signature::euclidean(n).unwrap()
    }

    #[test]
    fn bott_of_u_is_scalar_gaussian() {
        let s = sig(2);
        let v = [0.6, -0.3];
        let out = bott_map(&SElement::u(), &v, s).unwrap();
        assert_abs_diff_eq!(out.coeff(Blade::SCALAR), (-0.45f64).exp(), epsilon = 1e-15);
        assert!(out.odd_part().norm() < 1e-15);
    }

    #[test]
    fn bott_of_v_at_origin_vanishes() {
        let out = bott_map(&SElement::v(), &[0.0, 0.0], sig(2)).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn bott_agrees_with_two_point_calculus() {
        // P(v) has eigenvalues ±r; f(P) = f(r) Π₊ + f(-r) Π₋ with Π± = (1 ± P/r)/2.
        let s = sig(3);
        let v = [0.4, 1.1, -0.7];
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let p = MultiVector::vector(s, &v).unwrap();
        let one = MultiVector::scalar(s, 1.0);
        let plus = (&one + &p.scaled(1.0 / r)).scaled(0.5);
        let minus = (&one - &p.scaled(1.0 / r)).scaled(0.5);
        for f in [SElement::u(), SElement::v()] {
            let expect = &plus.scaled(f.eval(r)) + &minus.scaled(f.eval(-r));
            let got = bott_map(&f, &v, s).unwrap();
            assert!(got.max_abs_diff(&expect) < 1e-15);
        }
    }

    #[test]
    fn bott_is_multiplicative_pointwise() {
        let s = sig(2);
        let u2 = SElement::u().product(&SElement::u()).unwrap();
        let uv = SElement::u().product(&SElement::v()).unwrap();
        for v in [[0.3, 0.2], [-1.0, 0.5], [0.0, 0.0]] {
            let bu = bott_map(&SElement::u(), &v, s).unwrap();
            let bv = bott_map(&SElement::v(), &v, s).unwrap();
            assert!((&bu * &bu).max_abs_diff(&bott_map(&u2, &v, s).unwrap()) < 1e-15);
            assert!((&bu * &bv).max_abs_diff(&bott_map(&uv, &v, s).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn rescale_rules() {
        let h = CliffordField::Bott(SElement::u());
        assert!(h.rescale(0.5).is_err());
        let h1 = h.rescale(1.0).unwrap();
        let s = sig(1);
        assert_eq!(h1.eval(&[0.7], s).unwrap(), h.eval(&[0.7], s).unwrap());
        let h4 = h.rescale(4.0).unwrap();
        assert_abs_diff_eq!(
            h4.eval(&[2.0], s).unwrap().coeff(Blade::SCALAR),
            (-0.25f64).exp(),
            epsilon = 1e-15
        );
        let c = CliffordField::Constant(MultiVector::scalar(s, 2.0));
        assert_eq!(
            c.rescale(3.0).unwrap().eval(&[5.0], s).unwrap(),
            MultiVector::scalar(s, 2.0)
        );
    }

    #[test]
    fn constant_one_is_identity() {
        let basis = HermiteBasis::new(2, 4).unwrap();
        let h = CliffordField::Constant(MultiVector::scalar(basis.signature(), 1.0));
        let m = multiplication_operator(&h, &basis).unwrap();
        assert!((m.entries() - DMatrix::identity(basis.len(), basis.len())).amax() < 1e-13);
        assert_eq!(m.declared(), Some(Parity::Even));
    }

    #[test]
    fn odd_field_gives_odd_operator() {
        let basis = HermiteBasis::new(1, 6).unwrap();
        let m = multiplication_operator(&CliffordField::Bott(SElement::v()), &basis).unwrap();
        assert_eq!(m.declared(), Some(Parity::Odd));
        assert_eq!(m.block_leak(Parity::Odd), 0.0);
    }
}
