//! Matrices on finite-dimensional graded spaces and the Koszul sign rules.
//!
//! A [`GradedMatrix`] carries the parity of every basis vector of the space it
//! acts on. Tensor products act on `ξ ⊗ η` as
//! `(a ⊗̂ b)(ξ ⊗ η) = (-1)^{deg b · deg ξ} aξ ⊗ bη`, with the product basis
//! ordered so that index `(i, j)` maps to `i * dim_b + j`.

use std::fmt;
use std::ops::Add;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::clifford::MultiVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{deg a · deg b}`.
    pub fn koszul(self, other: Parity) -> f64 {
        if self.is_odd() && other.is_odd() {
            -1.0
        } else {
            1.0
        }
    }
}

/// Degrees add mod 2.
impl Add for Parity {
    type Output = Parity;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.is_odd() ^ rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityVector(Vec<Parity>);

impl ParityVector {
    pub fn new(parities: Vec<Parity>) -> Self {
        ParityVector(parities)
    }

    pub fn all_even(len: usize) -> Self {
        ParityVector(vec![Parity::Even; len])
    }

    /// Alternating even/odd, as for Hermite functions graded by `x -> -x`.
    pub fn alternating(len: usize) -> Self {
        ParityVector((0..len).map(|k| Parity::from_bit(k % 2 == 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Parity {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[Parity] {
        &self.0
    }

    /// Parities of the product basis, `i * other.len() + j`.
    pub fn tensor(&self, other: &ParityVector) -> ParityVector {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.0 {
            for &b in &other.0 {
                out.push(a + b);
            }
        }
        ParityVector(out)
    }

    pub fn restrict(&self, indices: &[usize]) -> ParityVector {
        ParityVector(indices.iter().map(|&i| self.0[i]).collect())
    }

    /// Diagonal grading operator `(-1)^{deg}`.
    pub fn grading_operator(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.len(),
            self.0.iter().map(|p| if p.is_odd() { -1.0 } else { 1.0 }),
        ))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedMatrix {
    entries: DMatrix<f64>,
    parity: ParityVector,
    declared: Option<Parity>,
}

impl GradedMatrix {
    /// Checks the declared parity exactly: an even matrix must vanish between
    /// opposite-parity indices, an odd one between same-parity indices.
    pub fn new(entries: DMatrix<f64>, parity: ParityVector, declared: Option<Parity>) -> Result<Self> {
        check_square(&entries, &parity)?;
        let m = GradedMatrix {
            entries,
            parity,
            declared,
        };
        if let Some(p) = declared {
            let leak = m.block_leak(p);
            if leak != 0.0 {
                return Err(Error::ParityViolation(leak));
            }
        }
        Ok(m)
    }

    /// Declares the parity after discarding forbidden blocks, provided their
    /// largest entry is at most `tol`.
    pub fn project(entries: DMatrix<f64>, parity: ParityVector, declared: Parity, tol: f64) -> Result<Self> {
        check_square(&entries, &parity)?;
        let raw = GradedMatrix {
            entries,
            parity,
            declared: None,
        };
        let leak = raw.block_leak(declared);
        if leak > tol {
            return Err(Error::ParityViolation(leak));
        }
        let mut m = raw.part(declared);
        m.declared = Some(declared);
        Ok(m)
    }

    /// Infers even/odd/inhomogeneous from the exact zero pattern.
    pub fn infer(entries: DMatrix<f64>, parity: ParityVector) -> Result<Self> {
        check_square(&entries, &parity)?;
        let mut m = GradedMatrix {
            entries,
            parity,
            declared: None,
        };
        m.declared = if m.block_leak(Parity::Even) == 0.0 {
            Some(Parity::Even)
        } else if m.block_leak(Parity::Odd) == 0.0 {
            Some(Parity::Odd)
        } else {
            None
        };
        Ok(m)
    }

    pub fn identity(parity: ParityVector) -> Self {
        let n = parity.len();
        GradedMatrix {
            entries: DMatrix::identity(n, n),
            parity,
            declared: Some(Parity::Even),
        }
    }

    pub fn zeros(parity: ParityVector, declared: Parity) -> Self {
        let n = parity.len();
        GradedMatrix {
            entries: DMatrix::zeros(n, n),
            parity,
            declared: Some(declared),
        }
    }

    /// The grading operator itself, as an even matrix.
    pub fn grading(parity: ParityVector) -> Self {
        GradedMatrix {
            entries: parity.grading_operator(),
            parity,
            declared: Some(Parity::Even),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn parity_vector(&self) -> &ParityVector {
        &self.parity
    }

    pub fn declared(&self) -> Option<Parity> {
        self.declared
    }

    /// Largest entry that a matrix of parity `p` would have to be zero at.
    pub fn block_leak(&self, p: Parity) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim() {
            let pj = self.parity.get(j);
            for i in 0..self.dim() {
                if self.parity.get(i) != pj + p {
                    worst = worst.max(self.entries[(i, j)].abs());
                }
            }
        }
        worst
    }

    /// The component of parity `p`: entries outside the allowed blocks zeroed.
    pub fn part(&self, p: Parity) -> GradedMatrix {
        let mut entries = self.entries.clone();
        for j in 0..self.dim() {
            let pj = self.parity.get(j);
            for i in 0..self.dim() {
                if self.parity.get(i) != pj + p {
                    entries[(i, j)] = 0.0;
                }
            }
        }
        GradedMatrix {
            entries,
            parity: self.parity.clone(),
            declared: Some(p),
        }
    }

    /// Even and odd parts; returns `self` alone when already homogeneous.
    pub fn homogeneous_parts(&self) -> Vec<GradedMatrix> {
        match self.declared {
            Some(_) => vec![self.clone()],
            None => vec![self.part(Parity::Even), self.part(Parity::Odd)],
        }
    }

    fn same_space(&self, other: &GradedMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.parity != other.parity {
            return Err(Error::InvalidParameter(
                "operands act on differently graded spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.same_space(other)?;
        Ok(GradedMatrix {
            entries: &self.entries * &other.entries,
            parity: self.parity.clone(),
            declared: match (self.declared, other.declared) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        })
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &GradedMatrix, sign: f64) -> Result<GradedMatrix> {
        self.same_space(other)?;
        let declared = match (self.declared, other.declared) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        let out = GradedMatrix {
            entries: &self.entries + &other.entries * sign,
            parity: self.parity.clone(),
            declared,
        };
        if declared.is_none() {
            // A sum of an even and an odd matrix may still be homogeneous when one side is zero.
            return GradedMatrix::infer(out.entries, out.parity);
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> GradedMatrix {
        GradedMatrix {
            entries: &self.entries * s,
            parity: self.parity.clone(),
            declared: self.declared,
        }
    }

    /// The adjoint of a real matrix.
    pub fn transpose(&self) -> GradedMatrix {
        GradedMatrix {
            entries: self.entries.transpose(),
            parity: self.parity.clone(),
            declared: self.declared,
        }
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    /// Principal submatrix on `indices`, with the matching parities.
    pub fn restrict(&self, indices: &[usize]) -> GradedMatrix {
        GradedMatrix {
            entries: self.entries.select_rows(indices).select_columns(indices),
            parity: self.parity.restrict(indices),
            declared: self.declared,
        }
    }

    pub fn max_abs_diff(&self, other: &GradedMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }
}

fn check_square(entries: &DMatrix<f64>, parity: &ParityVector) -> Result<()> {
    if entries.nrows() != entries.ncols() {
        return Err(Error::DimensionMismatch(entries.nrows(), entries.ncols()));
    }
    if entries.nrows() != parity.len() {
        return Err(Error::DimensionMismatch(entries.nrows(), parity.len()));
    }
    Ok(())
}

/// `a ⊗̂ b` acting on the product of the two graded spaces.
pub fn graded_tensor(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    let pa = a.declared.ok_or(Error::Inhomogeneous)?;
    let pb = b.declared.ok_or(Error::Inhomogeneous)?;
    let (da, db) = (a.dim(), b.dim());
    let mut entries = a.entries.kronecker(&b.entries);
    if pb.is_odd() {
        // Column (ξ, η) picks up (-1)^{deg ξ}.
        for xi in 0..da {
            if a.parity.get(xi).is_odd() {
                for eta in 0..db {
                    entries.column_mut(xi * db + eta).neg_mut();
                }
            }
        }
    }
    Ok(GradedMatrix {
        entries,
        parity: a.parity.tensor(&b.parity),
        declared: Some(pa + pb),
    })
}

/// `[a, b] = ab - (-1)^{deg a · deg b} ba`, extended bilinearly over the
/// even/odd parts of inhomogeneous operands.
pub fn graded_commutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    a.same_space(b)?;
    let mut total: Option<GradedMatrix> = None;
    for x in a.homogeneous_parts() {
        for y in b.homogeneous_parts() {
            let sign = x.declared.unwrap().koszul(y.declared.unwrap());
            let term = x.mul(&y)?.sub(&y.mul(&x)?.scale(sign))?;
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term)?,
            });
        }
    }
    Ok(total.expect("at least one homogeneous part"))
}

/// The `*`-operation on real matrices: the transpose.
pub fn involution(a: &GradedMatrix) -> GradedMatrix {
    a.transpose()
}

/// `‖(a ⊗̂ b)* - (-1)^{deg a deg b} a* ⊗̂ b*‖_max`.
pub fn tensor_involution_defect(a: &GradedMatrix, b: &GradedMatrix) -> Result<f64> {
    let lhs = involution(&graded_tensor(a, b)?);
    let sign = a
        .declared
        .ok_or(Error::Inhomogeneous)?
        .koszul(b.declared.ok_or(Error::Inhomogeneous)?);
    let rhs = graded_tensor(&involution(a), &involution(b))?.scale(sign);
    Ok(lhs.max_abs_diff(&rhs))
}

/// The signed swap `H1 ⊗ H2 -> H2 ⊗ H1`, `ξ ⊗ η -> (-1)^{deg ξ deg η} η ⊗ ξ`,
/// as a permutation with signs: entry `k` says where basis vector `k` goes.
fn signed_swap(left: &ParityVector, right: &ParityVector) -> Vec<(usize, f64)> {
    let (d1, d2) = (left.len(), right.len());
    let mut map = vec![(0, 0.0); d1 * d2];
    for i in 0..d1 {
        for j in 0..d2 {
            map[i * d2 + j] = (j * d1 + i, left.get(i).koszul(right.get(j)));
        }
    }
    map
}

/// The flip `l`, realized as conjugation by the signed swap. `x` acts on
/// `H1 ⊗ H2` with the given factor gradings; the result acts on `H2 ⊗ H1`.
pub fn flip(x: &GradedMatrix, left: &ParityVector, right: &ParityVector) -> Result<GradedMatrix> {
    let dim = left.len() * right.len();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch(x.dim(), dim));
    }
    if x.parity != left.tensor(right) {
        return Err(Error::InvalidParameter(
            "flip: factor gradings do not match the operand".into(),
        ));
    }
    let swap = signed_swap(left, right);
    let mut entries = DMatrix::zeros(dim, dim);
    for (col, &(new_col, sc)) in swap.iter().enumerate() {
        for (row, &(new_row, sr)) in swap.iter().enumerate() {
            entries[(new_row, new_col)] = sr * sc * x.entries[(row, col)];
        }
    }
    Ok(GradedMatrix {
        entries,
        parity: right.tensor(left),
        declared: x.declared,
    })
}

/// `l(a ⊗̂ b) = (-1)^{deg a deg b} b ⊗̂ a`, straight from the sign rule.
pub fn flip_simple(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    let sign = a
        .declared
        .ok_or(Error::Inhomogeneous)?
        .koszul(b.declared.ok_or(Error::Inhomogeneous)?);
    Ok(graded_tensor(b, a)?.scale(sign))
}

/// The automorphism of `Cliff(V)` induced by `e -> -e`.
pub fn iota(m: &MultiVector) -> MultiVector {
    m.grade_involution()
}
