use std::collections::HashMap;

use crate::clifford::{Blade, Signature};
use crate::error::{invalid, Result};
use crate::graded::ParityVector;

/// Truncated basis `{ψ_k ⊗ blade : |k| ≤ K}` of `L²(Rⁿ, Cliff(Rⁿ))`.
///
/// Multi-indices are ordered by total level, so the level-`K` basis is a
/// prefix of the level-`K+1` basis. Basis index is `spatial · 2ⁿ + blade`.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    dim_n: usize,
    level_k: usize,
    signature: Signature,
    multi: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

fn compositions(n: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == n {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(n, total - first, prefix, out);
        prefix.pop();
    }
}

impl HermiteBasis {
    pub fn new(dim_n: usize, level_k: usize) -> Result<Self> {
        if dim_n == 0 {
            return Err(invalid("dim must be ≥ 1"));
        }
        let signature = Signature::euclidean(dim_n)?;
        let mut multi = Vec::new();
        for total in 0..=level_k {
            compositions(dim_n, total, &mut Vec::with_capacity(dim_n), &mut multi);
        }
        let lookup = multi.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Ok(HermiteBasis {
            dim_n,
            level_k,
            signature,
            multi,
            lookup,
        })
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn level(&self) -> usize {
        self.level_k
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn spatial_len(&self) -> usize {
        self.multi.len()
    }

    pub fn blade_count(&self) -> usize {
        1 << self.dim_n
    }

    pub fn len(&self) -> usize {
        self.spatial_len() * self.blade_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn multi_indices(&self) -> &[Vec<usize>] {
        &self.multi
    }

    pub fn spatial_index(&self, k: &[usize]) -> Option<usize> {
        self.lookup.get(k).copied()
    }

    pub fn index(&self, spatial: usize, blade: Blade) -> usize {
        spatial * self.blade_count() + blade.index()
    }

    /// `(multi-index, blade)` of a basis index.
    pub fn decode(&self, i: usize) -> (&[usize], Blade) {
        let b = self.blade_count();
        (&self.multi[i / b], Blade::from_mask((i % b) as u32))
    }

    pub fn spatial_level(&self, i: usize) -> usize {
        self.multi[i / self.blade_count()].iter().sum()
    }

    /// Grading by blade parity.
    pub fn parity_vector(&self) -> ParityVector {
        let b = self.blade_count();
        ParityVector::new(
            (0..self.len())
                .map(|i| Blade::from_mask((i % b) as u32).parity())
                .collect(),
        )
    }

    pub fn indices_where(&self, keep: impl Fn(usize, Blade) -> bool) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let (k, blade) = self.decode(i);
                keep(k.iter().sum(), blade)
            })
            .collect()
    }

    /// Spatial level `≤ K - 2`.
    pub fn interior(&self) -> Vec<usize> {
        let cut = self.level_k.saturating_sub(2);
        if self.level_k < 2 {
            return Vec::new();
        }
        self.indices_where(|level, _| level <= cut)
    }

    /// Spatial level `≤ m`.
    pub fn window(&self, m: usize) -> Vec<usize> {
        self.indices_where(|level, _| level <= m)
    }

    /// `|k| + deg(blade) ≤ K`: the largest subspace the truncated Bott
    /// operator leaves invariant.
    pub fn core(&self) -> Vec<usize> {
        self.indices_where(|level, blade| level + blade.grade() as usize <= self.level_k)
    }

    /// Index of the Gaussian `ψ_0 ⊗ 1`.
    pub fn gaussian_index(&self) -> usize {
        0
    }
}

/// `C(n + K, n)`.
pub fn spatial_count(n: usize, k: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c * (k as u128 + i) / i;
    }
    c as usize
}
