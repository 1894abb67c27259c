use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, MultiVector, Signature};
use crate::error::{invalid, Result};
use crate::funcalc::SElement;
use crate::oscillator::CliffordField;

/// Named test functions in `C_0(V, Cliff(V))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestField {
    #[serde(rename = "u(P)")]
    UOfP,
    #[serde(rename = "v(P)")]
    VOfP,
    /// Gaussian bump centred at `(1, 0, …)`, width 1, times `e1`.
    #[serde(rename = "bump")]
    Bump,
    /// The constant scalar 1; a degenerate input outside `C_0`.
    #[serde(rename = "one")]
    One,
}

impl TestField {
    pub const DEFAULTS: [TestField; 3] = [TestField::UOfP, TestField::VOfP, TestField::Bump];

    pub fn name(self) -> &'static str {
        match self {
            TestField::UOfP => "u(P)",
            TestField::VOfP => "v(P)",
            TestField::Bump => "bump",
            TestField::One => "one",
        }
    }

    pub fn field(self, n: usize) -> Result<CliffordField> {
        Ok(match self {
            TestField::UOfP => CliffordField::Bott(SElement::u()),
            TestField::VOfP => CliffordField::Bott(SElement::v()),
            TestField::Bump => {
                let mut center = vec![0.0; n];
                center[0] = 1.0;
                CliffordField::bump(center, 1.0, Blade::generator(0))?
            }
            TestField::One => CliffordField::Constant(MultiVector::scalar(Signature::euclidean(n)?, 1.0)),
        })
    }
}

/// Increasing parameter grid in `[1, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TGrid(Vec<f64>);

impl TGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("t grid must not be empty"));
        }
        if values.iter().any(|t| !t.is_finite()) {
            return Err(invalid("t grid values must be finite"));
        }
        if values[0] < 1.0 {
            return Err(invalid("t grid must start at t ≥ 1"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("t grid must be strictly increasing"));
        }
        Ok(TGrid(values))
    }

    /// `points` geometrically spaced values from `t_min` to `t_max`.
    pub fn geometric(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(invalid("t grid needs at least one point"));
        }
        if points == 1 {
            return TGrid::new(vec![t_min]);
        }
        if !(t_max > t_min) {
            return Err(invalid("t-max must exceed t-min"));
        }
        let ratio = (t_max / t_min).ln() / (points - 1) as f64;
        let mut v: Vec<f64> = (0..points).map(|i| t_min * (ratio * i as f64).exp()).collect();
        v[points - 1] = t_max;
        TGrid::new(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for TGrid {
    type Error = crate::Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        TGrid::new(v)
    }
}

impl From<TGrid> for Vec<f64> {
    fn from(g: TGrid) -> Self {
        g.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dim: usize,
    pub levels: usize,
    pub t_grid: TGrid,
    /// Overrides the suite's primary tolerance.
    pub tol: Option<f64>,
    pub h_choices: Vec<TestField>,
    /// Spatial level of the probe window; suites pick a default from `levels`.
    pub probe_level: Option<usize>,
    /// Seed for sampled checks.
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dim: 1,
            levels: 12,
            t_grid: TGrid::geometric(1.0, 16.0, 9).expect("default grid is valid"),
            tol: None,
            h_choices: TestField::DEFAULTS.to_vec(),
            probe_level: None,
            seed: 0x5eed,
        }
    }
}

impl SweepConfig {
    pub fn new(dim: usize, levels: usize) -> Self {
        SweepConfig {
            dim,
            levels,
            ..SweepConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid("dim must be ≥ 1"));
        }
        if self.dim > 6 {
            return Err(invalid("dim must be ≤ 6"));
        }
        if self.levels < 2 {
            return Err(invalid("levels must be ≥ 2"));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid("tol must be a positive number"));
            }
        }
        if let Some(p) = self.probe_level {
            if p > self.levels {
                return Err(invalid("probe level must not exceed levels"));
            }
        }
        Ok(())
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Window for decay suites: spatial levels `≤ ⌊K/3⌋`.
    pub fn decay_probe(&self) -> usize {
        self.probe_level.unwrap_or(self.levels / 3)
    }

    /// Window for the Mehler residual: spatial levels `≤ max(1, ⌊K/6⌋)`.
    pub fn mehler_probe(&self) -> usize {
        self.probe_level.unwrap_or((self.levels / 6).max(1))
    }
}
