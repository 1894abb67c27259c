//! Elements of `C_0(R)` graded by parity, their functional calculus on
//! symmetric matrices, and the comultiplication on the generators.
//!
//! The generators are `u(x) = exp(-x^2)` (even) and `v(x) = x exp(-x^2)`
//! (odd). A monomial `u^a v^b` is `x^b exp(-(a+b) x^2)`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::graded::{graded_tensor, GradedMatrix, Parity, ParityVector};
use crate::linalg;

/// Uniform grid used for pointwise parity and decay checks.
pub const CHECK_GRID_POINTS: usize = 2001;
pub const CHECK_GRID_HALF_WIDTH: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub u_pow: u32,
    pub v_pow: u32,
}

impl Monomial {
    fn eval(&self, x: f64) -> f64 {
        let k = (self.u_pow + self.v_pow) as f64;
        self.coeff * x.powi(self.v_pow as i32) * (-k * x * x).exp()
    }

    fn parity(&self) -> Parity {
        Parity::from_bit(self.v_pow % 2 == 1)
    }
}

#[derive(Clone, Debug)]
pub enum SElement {
    /// A polynomial in `u` and `v` without constant term; empty means zero.
    Polynomial(Vec<Monomial>),
    /// `x -> inner(x / t)`.
    Scaled { inner: Box<SElement>, t: f64 },
    /// `x -> even(x) + odd(x)` from two stateless callbacks.
    Sampled { even: fn(f64) -> f64, odd: fn(f64) -> f64 },
}

impl SElement {
    pub fn u() -> Self {
        SElement::Polynomial(vec![Monomial {
            coeff: 1.0,
            u_pow: 1,
            v_pow: 0,
        }])
    }

    pub fn v() -> Self {
        SElement::Polynomial(vec![Monomial {
            coeff: 1.0,
            u_pow: 0,
            v_pow: 1,
        }])
    }

    pub fn zero() -> Self {
        SElement::Polynomial(Vec::new())
    }

    /// Rejects monomials of total degree zero, which do not vanish at infinity.
    pub fn polynomial(terms: Vec<Monomial>) -> Result<Self> {
        if terms.iter().any(|m| m.u_pow + m.v_pow == 0 && m.coeff != 0.0) {
            return Err(invalid("constant term is not in C_0(R)"));
        }
        Ok(SElement::Polynomial(terms))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SElement::Polynomial(terms) => terms.iter().map(|m| m.eval(x)).sum(),
            SElement::Scaled { inner, t } => inner.eval(x / t),
            SElement::Sampled { even, odd } => even(x) + odd(x),
        }
    }

    pub fn even_part_at(&self, x: f64) -> f64 {
        0.5 * (self.eval(x) + self.eval(-x))
    }

    pub fn odd_part_at(&self, x: f64) -> f64 {
        0.5 * (self.eval(x) - self.eval(-x))
    }

    /// Declared parity; `None` for mixed elements.
    pub fn parity(&self) -> Option<Parity> {
        match self {
            SElement::Polynomial(terms) => {
                let mut parities = terms.iter().filter(|m| m.coeff != 0.0).map(Monomial::parity);
                match parities.next() {
                    None => Some(Parity::Even),
                    Some(first) => parities.all(|p| p == first).then_some(first),
                }
            }
            SElement::Scaled { inner, .. } => inner.parity(),
            SElement::Sampled { even, odd } => {
                let grid = check_grid();
                let has_even = grid.iter().any(|&x| even(x) != 0.0);
                let has_odd = grid.iter().any(|&x| odd(x) != 0.0);
                match (has_even, has_odd) {
                    (true, true) => None,
                    (false, true) => Some(Parity::Odd),
                    _ => Some(Parity::Even),
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SElement::Polynomial(terms) => terms.iter().all(|m| m.coeff == 0.0),
            SElement::Scaled { inner, .. } => inner.is_zero(),
            SElement::Sampled { .. } => check_grid().iter().all(|&x| self.eval(x) == 0.0),
        }
    }

    /// `x -> f(x / t)`. Nested scalings collapse into one.
    pub fn scale(&self, t: f64) -> Result<SElement> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("scale factor must be positive, got {t}")));
        }
        Ok(match self {
            SElement::Scaled { inner, t: s } => SElement::Scaled {
                inner: inner.clone(),
                t: s * t,
            },
            other => SElement::Scaled {
                inner: Box::new(other.clone()),
                t,
            },
        })
    }

    /// Pointwise product, available for unscaled polynomials.
    pub fn product(&self, other: &SElement) -> Result<SElement> {
        match (self, other) {
            (SElement::Polynomial(a), SElement::Polynomial(b)) => {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        terms.push(Monomial {
                            coeff: x.coeff * y.coeff,
                            u_pow: x.u_pow + y.u_pow,
                            v_pow: x.v_pow + y.v_pow,
                        });
                    }
                }
                Ok(SElement::Polynomial(terms))
            }
            _ => Err(invalid("products are only formed between u,v polynomials")),
        }
    }

    /// Sup norm estimated on the check grid.
    pub fn sup_norm(&self) -> f64 {
        check_grid().iter().map(|&x| self.eval(x).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for SElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SElement::Polynomial(terms) if terms.is_empty() => write!(f, "0"),
            SElement::Polynomial(terms) => {
                for (i, m) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    if m.coeff != 1.0 {
                        write!(f, "{}*", m.coeff)?;
                    }
                    let mut parts = Vec::new();
                    match m.u_pow {
                        0 => {}
                        1 => parts.push("u".to_string()),
                        k => parts.push(format!("u^{k}")),
                    }
                    match m.v_pow {
                        0 => {}
                        1 => parts.push("v".to_string()),
                        k => parts.push(format!("v^{k}")),
                    }
                    write!(f, "{}", parts.join("*"))?;
                }
                Ok(())
            }
            SElement::Scaled { inner, t } => write!(f, "{inner}(x/{t})"),
            SElement::Sampled { .. } => write!(f, "sampled"),
        }
    }
}

pub fn check_grid() -> Vec<f64> {
    let n = CHECK_GRID_POINTS;
    (0..n)
        .map(|i| -CHECK_GRID_HALF_WIDTH + 2.0 * CHECK_GRID_HALF_WIDTH * i as f64 / (n - 1) as f64)
        .collect()
}

/// `f(T)` for symmetric `T`, with the output parity fixed by the input
/// parities: even `T` gives even `f(T)`; odd `T` gives `f(T)` of the parity of `f`.
pub fn matrix_function(f: &SElement, t: &GradedMatrix) -> Result<GradedMatrix> {
    let eig = linalg::eigh(t.entries())?;
    matrix_function_eig(f, &eig, t)
}

/// Same as [`matrix_function`] but reuses a precomputed eigendecomposition of `t`.
pub fn matrix_function_eig(f: &SElement, eig: &linalg::SortedEigen, t: &GradedMatrix) -> Result<GradedMatrix> {
    let raw = linalg::apply_to_eigen(eig, |x| f.eval(x));
    let out_parity = match (t.declared(), f.parity()) {
        (Some(Parity::Even), _) => Some(Parity::Even),
        (Some(Parity::Odd), Some(pf)) => Some(pf),
        _ => None,
    };
    let parity = t.parity_vector().clone();
    match out_parity {
        Some(p) => {
            let tol = 1e-9 * raw.amax().max(1.0);
            GradedMatrix::project(raw, parity, p, tol)
        }
        None => GradedMatrix::infer(raw, parity),
    }
}

/// `f(T / t)`.
pub fn scaled_matrix_function(f: &SElement, t_param: f64, t: &GradedMatrix) -> Result<GradedMatrix> {
    matrix_function(&f.scale(t_param)?, t)
}

/// One term `coeff · left ⊗̂ right` of a comultiplication.
#[derive(Clone, Debug)]
pub struct DeltaTerm {
    pub coeff: f64,
    pub left: SElement,
    pub right: SElement,
}

#[derive(Clone, Debug)]
pub struct DeltaExpansion {
    pub terms: Vec<DeltaTerm>,
}

impl DeltaExpansion {
    pub fn parity(&self) -> Option<Parity> {
        let mut out: Option<Parity> = None;
        for term in &self.terms {
            let p = term.left.parity()? + term.right.parity()?;
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        out
    }

    /// `sum coeff · left(X) ⊗̂ right(X)`.
    pub fn realize(&self, x: &GradedMatrix) -> Result<GradedMatrix> {
        let eig = linalg::eigh(x.entries())?;
        self.realize_with(|f| matrix_function_eig(f, &eig, x))
    }

    /// Realizes the expansion with caller-supplied matrices for each leg.
    pub fn realize_with(&self, mut leg: impl FnMut(&SElement) -> Result<GradedMatrix>) -> Result<GradedMatrix> {
        let mut total: Option<GradedMatrix> = None;
        for term in &self.terms {
            let piece = graded_tensor(&leg(&term.left)?, &leg(&term.right)?)?.scale(term.coeff);
            total = Some(match total {
                None => piece,
                Some(acc) => acc.add(&piece)?,
            });
        }
        total.ok_or_else(|| invalid("empty comultiplication"))
    }
}

/// `Δ(u) = u ⊗̂ u` and `Δ(v) = u ⊗̂ v + v ⊗̂ u`.
pub fn delta_on_generators() -> (DeltaExpansion, DeltaExpansion) {
    let du = DeltaExpansion {
        terms: vec![DeltaTerm {
            coeff: 1.0,
            left: SElement::u(),
            right: SElement::u(),
        }],
    };
    let dv = DeltaExpansion {
        terms: vec![
            DeltaTerm {
                coeff: 1.0,
                left: SElement::u(),
                right: SElement::v(),
            },
            DeltaTerm {
                coeff: 1.0,
                left: SElement::v(),
                right: SElement::u(),
            },
        ],
    };
    (du, dv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    U,
    V,
}

impl Generator {
    pub fn element(self) -> SElement {
        match self {
            Generator::U => SElement::u(),
            Generator::V => SElement::v(),
        }
    }

    pub fn delta(self) -> DeltaExpansion {
        let (du, dv) = delta_on_generators();
        match self {
            Generator::U => du,
            Generator::V => dv,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::U => "u",
            Generator::V => "v",
        }
    }
}

/// Residuals of the `X_R` realization of the comultiplication.
#[derive(Clone, Debug)]
pub struct DeltaResidual {
    pub level: usize,
    /// `‖f(X ⊗̂ 1 + 1 ⊗̂ X) - Δ(f)(X)‖`, both sides on the same truncation.
    pub algebraic: f64,
    /// Same left side against `Δ(f)` built from exact matrix elements of
    /// `u`, `v`, measured on levels `≤ window` of each leg.
    pub reference: f64,
    /// Largest `|eigenvalue|` of the truncated position matrix.
    pub radius: f64,
    pub parity: Option<Parity>,
}

/// Realizes `X_R` as the truncated position matrix on Hermite levels
/// `0..=level` (odd for the parity grading of Hermite functions), forms
/// `X ⊗̂ 1 + 1 ⊗̂ X`, and compares `f` of it with the expansion of `Δ(f)`.
pub fn delta_via_xr_check(level: usize, generator: Generator, window: usize) -> Result<DeltaResidual> {
    use crate::oscillator::hermite;

    if level < 1 {
        return Err(invalid("truncation level must be at least 1"));
    }
    let parity = ParityVector::alternating(level + 1);
    let x = GradedMatrix::new(hermite::position_matrix(level), parity.clone(), Some(Parity::Odd))?;
    let id = GradedMatrix::identity(parity.clone());
    let x_tilde = graded_tensor(&x, &id)?.add(&graded_tensor(&id, &x)?)?;

    let f = generator.element();
    let lhs = matrix_function(&f, &x_tilde)?;
    let delta = generator.delta();
    let algebraic_rhs = delta.realize(&x)?;
    let algebraic = linalg::operator_norm(&(lhs.entries() - algebraic_rhs.entries()));

    let nodes = 4 * (level + 1) + 40;
    let reference_rhs = delta.realize_with(|g| {
        let m = hermite::function_matrix(level, nodes, |t| g.eval(t))?;
        let p = g.parity().ok_or(Error::Inhomogeneous)?;
        GradedMatrix::project(m, parity.clone(), p, 1e-12)
    })?;
    let window = window.min(level);
    let idx: Vec<usize> = (0..=window)
        .flat_map(|i| (0..=window).map(move |j| i * (level + 1) + j))
        .collect();
    let diff = lhs.entries() - reference_rhs.entries();
    let reference = linalg::operator_norm(&linalg::principal_submatrix(&diff, &idx));

    let radius = linalg::eigvalsh(x.entries())?
        .into_iter()
        .fold(0.0, |m: f64, e| m.max(e.abs()));
    Ok(DeltaResidual {
        level,
        algebraic,
        reference,
        radius,
        parity: lhs.declared(),
    })
}

/// Plain-matrix helper: `f(m / t)` for a symmetric `m`.
pub fn apply_scaled(f: &SElement, t: f64, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let g = f.scale(t)?;
    linalg::spectral_apply(m, |x| g.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn graded_diag(values: &[f64]) -> GradedMatrix {
        let n = values.len();
        GradedMatrix::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(values)),
            ParityVector::all_even(n),
            Some(Parity::Even),
        )
        .unwrap()
    }

    #[test]
    fn generators_on_zero_matrix() {
        let z = graded_diag(&[0.0, 0.0, 0.0]);
        assert_eq!(
            matrix_function(&SElement::u(), &z).unwrap().entries(),
            &DMatrix::identity(3, 3)
        );
        assert_eq!(matrix_function(&SElement::v(), &z).unwrap().entries().amax(), 0.0);
    }

    #[test]
    fn u_of_plus_minus_one() {
        let m = graded_diag(&[1.0, -1.0]);
        let out = matrix_function(&SElement::u(), &m).unwrap();
        assert_abs_diff_eq!(out.entries()[(0, 0)], (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.entries()[(1, 1)], (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn parity_of_polynomials() {
        assert_eq!(SElement::u().parity(), Some(Parity::Even));
        assert_eq!(SElement::v().parity(), Some(Parity::Odd));
        assert_eq!(SElement::v().scale(3.0).unwrap().parity(), Some(Parity::Odd));
        let uv = SElement::u().product(&SElement::v()).unwrap();
        assert_eq!(uv.parity(), Some(Parity::Odd));
        let mixed = SElement::polynomial(vec![
            Monomial {
                coeff: 1.0,
                u_pow: 1,
                v_pow: 0,
            },
            Monomial {
                coeff: 1.0,
                u_pow: 0,
                v_pow: 1,
            },
        ])
        .unwrap();
        assert_eq!(mixed.parity(), None);
        assert!(SElement::polynomial(vec![Monomial {
            coeff: 1.0,
            u_pow: 0,
            v_pow: 0
        }])
        .is_err());
    }

    #[test]
    fn generators_vanish_at_infinity() {
        for f in [SElement::u(), SElement::v()] {
            for x in check_grid() {
                if x.abs() >= 8.0 {
                    assert!(f.eval(x).abs() < 1e-8);
                }
                let sign = if f.parity() == Some(Parity::Odd) { -1.0 } else { 1.0 };
                assert_eq!(f.eval(-x), sign * f.eval(x));
            }
        }
    }

    #[test]
    fn scale_rules() {
        assert!(SElement::u().scale(0.0).is_err());
        assert!(SElement::u().scale(-1.0).is_err());
        let once = SElement::u().scale(1.0).unwrap();
        assert_eq!(once.eval(0.7), SElement::u().eval(0.7));
        let nested = SElement::v().scale(2.0).unwrap().scale(3.0).unwrap();
        let direct = SElement::v().scale(6.0).unwrap();
        for x in [-2.0, 0.3, 5.0] {
            assert_eq!(nested.eval(x), direct.eval(x));
        }
    }

    #[test]
    fn sampled_elements() {
        fn cosish(x: f64) -> f64 {
            (-x * x).exp() * x.cos()
        }
        fn zero(_: f64) -> f64 {
            0.0
        }
        let f = SElement::Sampled {
            even: cosish,
            odd: zero,
        };
        assert_eq!(f.parity(), Some(Parity::Even));
        assert!(!f.is_zero());
        assert!(f.sup_norm() <= 1.0);
    }

    #[test]
    fn delta_expansions_shape() {
        let (du, dv) = delta_on_generators();
        assert_eq!(du.terms.len(), 1);
        assert_eq!(dv.terms.len(), 2);
        assert_eq!(du.parity(), Some(Parity::Even));
        assert_eq!(dv.parity(), Some(Parity::Odd));
    }

    #[test]
    fn delta_u_is_self_adjoint() {
        let parity = ParityVector::alternating(6);
        let x = GradedMatrix::new(
            crate::oscillator::hermite::position_matrix(5),
            parity,
            Some(Parity::Odd),
        )
        .unwrap();
        let (du, _) = delta_on_generators();
        let m = du.realize(&x).unwrap();
        assert!(m.symmetry_defect() < 1e-15);
    }
}
