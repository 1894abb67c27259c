//! Truncated Hermite realizations of `L²(Rⁿ, Cliff(Rⁿ))` and the operators
//! `C`, `D`, `B = C + D`, `N`, `M_h`.

pub mod basis;
pub mod field;
pub mod hermite;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use basis::HermiteBasis;
pub use field::{bott_map, multiplication_operator, CliffordField};

use crate::clifford::{left_mult_operator, number_operator, twisted_right_mult_operator, MultiVector};
use crate::error::{invalid, Error, Result};
use crate::funcalc::SElement;
use crate::graded::{graded_tensor, GradedMatrix, Parity, ParityVector};
use crate::linalg;

/// Lift of a 1-D tridiagonal operator to axis `axis` of the spatial basis.
fn spatial_operator(basis: &HermiteBasis, axis: usize, one_d: &DMatrix<f64>) -> DMatrix<f64> {
    let len = basis.spatial_len();
    let mut m = DMatrix::zeros(len, len);
    let mut target = vec![0usize; basis.dim_n()];
    for (col, k) in basis.multi_indices().iter().enumerate() {
        for next in [k[axis].wrapping_sub(1), k[axis] + 1] {
            if next == usize::MAX {
                continue;
            }
            target.copy_from_slice(k);
            target[axis] = next;
            if let Some(row) = basis.spatial_index(&target) {
                m[(row, col)] = one_d[(next, k[axis])];
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct OscillatorRep {
    basis: HermiteBasis,
    c: GradedMatrix,
    d: GradedMatrix,
    b: GradedMatrix,
    n: GradedMatrix,
    interior: Vec<usize>,
}

impl OscillatorRep {
    pub fn new(dim_n: usize, level_k: usize) -> Result<Self> {
        if level_k < 1 {
            return Err(invalid("levels must be ≥ 1"));
        }
        let basis = HermiteBasis::new(dim_n, level_k)?;
        let c = assemble_clifford_operator(&basis)?;
        let d = assemble_dirac_operator(&basis)?;
        let b = c.add(&d)?;
        let spatial_id = GradedMatrix::identity(ParityVector::all_even(basis.spatial_len()));
        let n = graded_tensor(&spatial_id, &number_operator(basis.signature())?)?;
        let interior = basis.interior();
        Ok(OscillatorRep {
            basis,
            c,
            d,
            b,
            n,
            interior,
        })
    }

    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }

    pub fn clifford(&self) -> &GradedMatrix {
        &self.c
    }

    pub fn dirac(&self) -> &GradedMatrix {
        &self.d
    }

    pub fn bott(&self) -> &GradedMatrix {
        &self.b
    }

    pub fn number(&self) -> &GradedMatrix {
        &self.n
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Unit vector on `ψ_0 ⊗ 1`, the normalized Gaussian.
    pub fn gaussian(&self) -> nalgebra::DVector<f64> {
        let mut g = nalgebra::DVector::zeros(self.dim());
        g[self.basis.gaussian_index()] = 1.0;
        g
    }
}

/// `C = Σ_i X_i ⊗ e_i`.
pub fn assemble_clifford_operator(basis: &HermiteBasis) -> Result<GradedMatrix> {
    let x = hermite::position_matrix(basis.level() + 1);
    assemble_sum(basis, &x, left_mult_operator)
}

/// `D = Σ_i ∂_i ⊗ ê_i`.
pub fn assemble_dirac_operator(basis: &HermiteBasis) -> Result<GradedMatrix> {
    let dx = hermite::derivative_matrix(basis.level() + 1);
    assemble_sum(basis, &dx, twisted_right_mult_operator)
}

fn assemble_sum(
    basis: &HermiteBasis,
    one_d: &DMatrix<f64>,
    blade_op: impl Fn(&MultiVector) -> Result<GradedMatrix>,
) -> Result<GradedMatrix> {
    let sig = basis.signature();
    let spatial_parity = ParityVector::all_even(basis.spatial_len());
    let mut total = GradedMatrix::zeros(basis.parity_vector(), Parity::Odd);
    for axis in 0..basis.dim_n() {
        let s = GradedMatrix::new(
            spatial_operator(basis, axis, one_d),
            spatial_parity.clone(),
            Some(Parity::Even),
        )?;
        let e = blade_op(&MultiVector::generator(sig, axis))?;
        total = total.add(&graded_tensor(&s, &e)?)?;
    }
    Ok(total)
}

/// `‖(B² - C² - D² - N)|interior‖`, computed from the interior columns only.
pub fn b_squared_identity_check(rep: &OscillatorRep) -> f64 {
    restricted_residual(rep, rep.interior())
}

/// Same residual over all basis vectors; nonzero at the truncation boundary.
pub fn b_squared_full_residual(rep: &OscillatorRep) -> f64 {
    let all: Vec<usize> = (0..rep.dim()).collect();
    restricted_residual(rep, &all)
}

fn restricted_residual(rep: &OscillatorRep, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 0.0;
    }
    let sq = |m: &GradedMatrix| {
        let e = m.entries();
        e.select_rows(idx) * e.select_columns(idx)
    };
    let res = sq(rep.bott())
        - sq(rep.clifford())
        - sq(rep.dirac())
        - linalg::principal_submatrix(rep.number().entries(), idx);
    linalg::operator_norm(&res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumOperator {
    BSquared,
    Number,
    HarmonicPart,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub operator: SpectrumOperator,
    /// All eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Clusters of the eigenvalues `≤ window`.
    pub clusters: Vec<Cluster>,
    pub window: f64,
    /// `|⟨gaussian, v_min⟩|²` for the lowest eigenvector of `B²`.
    pub ground_overlap: Option<f64>,
}

/// Spectrum of `B²`, `N` or `C² + D²` on levels `≤ K`.
///
/// The squares are formed from operators assembled one level higher and then
/// compressed, so the result is the exact matrix of the square on the
/// truncated space and carries no spurious boundary kernel.
pub fn spectrum(rep: &OscillatorRep, which: SpectrumOperator, cluster_tol: f64) -> Result<Spectrum> {
    let m = compressed_operator(rep, which)?;
    let (values, ground_overlap) = if which == SpectrumOperator::BSquared {
        let eig = linalg::eigh_blocked(&m)?;
        let overlap = eig.vectors.column(0).dot(&rep.gaussian()).powi(2);
        (eig.values.iter().copied().collect(), Some(overlap))
    } else {
        (linalg::eigvalsh_blocked(&m)?, None)
    };
    let window = rep.basis().level() as f64;
    let in_window: Vec<f64> = values.iter().copied().filter(|&v| v <= window + 0.5).collect();
    let clusters = cluster_values(&in_window, cluster_tol)?;
    Ok(Spectrum {
        operator: which,
        values,
        clusters,
        window,
        ground_overlap,
    })
}

/// Ascending eigenvalues of the compressed operator, without eigenvectors.
pub fn spectrum_values(rep: &OscillatorRep, which: SpectrumOperator) -> Result<Vec<f64>> {
    linalg::eigvalsh_blocked(&compressed_operator(rep, which)?)
}

fn compressed_operator(rep: &OscillatorRep, which: SpectrumOperator) -> Result<DMatrix<f64>> {
    let dim = rep.dim();
    let prefix: Vec<usize> = (0..dim).collect();
    let square_prefix = |m: &DMatrix<f64>| m.rows(0, dim) * m.columns(0, dim);
    Ok(match which {
        SpectrumOperator::Number => rep.number().entries().clone(),
        SpectrumOperator::BSquared => {
            let up = OscillatorRep::new(rep.basis().dim_n(), rep.basis().level() + 1)?;
            linalg::principal_submatrix(&square_prefix(up.bott().entries()), &prefix)
        }
        SpectrumOperator::HarmonicPart => {
            let up = OscillatorRep::new(rep.basis().dim_n(), rep.basis().level() + 1)?;
            square_prefix(up.clifford().entries()) + square_prefix(up.dirac().entries())
        }
    })
}

/// Groups sorted values whose neighbours are within `tol`. A gap between
/// `tol` and `100 tol` is reported as ambiguous.
pub fn cluster_values(sorted: &[f64], tol: f64) -> Result<Vec<Cluster>> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &v in sorted {
        let gap = v - last;
        if gap <= tol {
            let c = out.last_mut().expect("cluster exists after first value");
            c.1 += 1;
            c.2 += v;
        } else {
            if gap <= 100.0 * tol {
                return Err(Error::ClusterAmbiguity(v));
            }
            out.push((v, 1, v));
        }
        last = v;
    }
    Ok(out
        .into_iter()
        .map(|(_, mult, sum)| Cluster {
            value: sum / mult as f64,
            multiplicity: mult,
        })
        .collect())
}

/// Number of basis states with `2(|k| + deg) = λ`.
pub fn b_squared_multiplicity(n: usize, lambda: usize) -> usize {
    if lambda % 2 == 1 {
        return 0;
    }
    let level = lambda / 2;
    (0..=n.min(level))
        .map(|d| binomial(n, d) * basis::spatial_count(n - 1, level - d))
        .sum()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub struct CompactnessProfile {
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// First index with `σ_k < tol`, if any.
    pub cutoff: Option<usize>,
}

/// Singular values of `f(D) M_h`.
pub fn compactness_profile(
    f: &SElement,
    h: &CliffordField,
    rep: &OscillatorRep,
    tol: f64,
) -> Result<CompactnessProfile> {
    let fd = crate::funcalc::matrix_function(f, rep.dirac())?;
    let mh = multiplication_operator(h, rep.basis())?;
    let prod = fd.entries() * mh.entries();
    let mut sv: Vec<f64> = prod.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let cutoff = sv.iter().position(|&s| s < tol);
    Ok(CompactnessProfile {
        singular_values: sv,
        cutoff,
    })
}

/// `f(C)` compressed from a larger truncation `padded ≥ K` onto levels `≤ K`.
/// Only the one-dimensional case is supported.
pub fn padded_clifford_function(f: &SElement, rep: &OscillatorRep, padded: usize) -> Result<DMatrix<f64>> {
    if rep.basis().dim_n() != 1 {
        return Err(invalid("padded functional calculus is implemented for dim 1 only"));
    }
    let padded = padded.max(rep.basis().level());
    let big = OscillatorRep::new(1, padded)?;
    let fc = crate::funcalc::matrix_function(f, big.clifford())?;
    let dim = rep.dim();
    Ok(fc.entries().view((0, 0), (dim, dim)).into_owned())
}
