//! Integrable weights of affine SU(N) at height `h = N + K`.
//!
//! A weight is stored by its shifted Dynkin labels `λ_i = a_i + 1`, so the
//! integrable set is `{λ : λ_i >= 1, Σ λ_i < h}` and the vacuum is `(1, ..., 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `SU(N)` at level `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(rename = "n")]
    pub rank_n: u32,
    pub level: u32,
}

impl AlgebraSpec {
    pub fn new(rank_n: u32, level: u32) -> Result<Self> {
        let spec = AlgebraSpec { rank_n, level };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank_n < 2 {
            return Err(Error::InvalidSpec(format!(
                "SU(N) needs N >= 2, got N = {}",
                self.rank_n
            )));
        }
        // S_N sums and binomial sizes both blow up quickly.
        if self.rank_n > 8 {
            return Err(Error::InvalidSpec(format!(
                "N = {} is beyond the supported range (N <= 8)",
                self.rank_n
            )));
        }
        Ok(())
    }

    pub fn height(&self) -> u32 {
        self.rank_n + self.level
    }

    /// `dim SU(N) = N^2 - 1`.
    pub fn dimension(&self) -> u32 {
        self.rank_n * self.rank_n - 1
    }

    /// Number of integrable weights, `binom(h-1, N-1)`.
    pub fn num_weights(&self) -> usize {
        binomial(self.height() as u64 - 1, self.rank_n as u64 - 1) as usize
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SU({})_{}", self.rank_n, self.level)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Shifted Dynkin labels of an integrable weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightLabel(Vec<u32>);

impl WeightLabel {
    /// Wraps shifted labels without checking them against a height.
    pub fn new(labels: Vec<u32>) -> Self {
        WeightLabel(labels)
    }

    pub fn vacuum(rank_n: u32) -> Self {
        WeightLabel(vec![1; rank_n as usize - 1])
    }

    /// From ordinary (unshifted) Dynkin labels.
    pub fn from_dynkin(unshifted: &[u32]) -> Self {
        WeightLabel(unshifted.iter().map(|a| a + 1).collect())
    }

    /// Ordinary (unshifted) Dynkin labels.
    pub fn dynkin(&self) -> Vec<u32> {
        self.0.iter().map(|l| l - 1).collect()
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    /// `N` inferred from the number of labels.
    pub fn rank_n(&self) -> u32 {
        self.0.len() as u32 + 1
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.iter().all(|&l| l == 1)
    }

    pub fn validate(&self, spec: &AlgebraSpec) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::InvalidWeight {
                label: self.0.clone(),
                reason,
            })
        };
        if self.rank_n() != spec.rank_n {
            return fail(format!("expected {} labels for {spec}", spec.rank_n - 1));
        }
        if self.0.contains(&0) {
            return fail("shifted labels must be >= 1".into());
        }
        let total: u32 = self.0.iter().sum();
        if total >= spec.height() {
            return fail(format!(
                "label sum {total} is not below h = {}",
                spec.height()
            ));
        }
        Ok(())
    }

    pub fn is_valid_for(&self, spec: &AlgebraSpec) -> bool {
        self.validate(spec).is_ok()
    }

    /// `τ(λ) = Σ_i (λ_i - 1) i mod N`.
    pub fn color(&self) -> u32 {
        let n = self.rank_n() as u64;
        let sum: u64 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &l)| (l as u64 - 1) * (i as u64 + 1))
            .sum();
        (sum % n) as u32
    }

    pub fn in_root_lattice(&self) -> bool {
        self.color() == 0
    }

    /// Applies the diagram automorphism `σ₁: λ ↦ (h - Σλ_j, λ_1, ..., λ_{N-2})`
    /// `power` times. Negative powers rotate the other way.
    pub fn diagram_rotation(&self, spec: &AlgebraSpec, power: i64) -> WeightLabel {
        let n = spec.rank_n as i64;
        let steps = power.rem_euclid(n);
        // Rotating the affine labels (λ_0, λ_1, ..., λ_{N-1}) one place to
        // the right is exactly σ₁.
        let h = spec.height();
        let mut affine = Vec::with_capacity(spec.rank_n as usize);
        affine.push(h - self.0.iter().sum::<u32>());
        affine.extend_from_slice(&self.0);
        affine.rotate_right(steps as usize);
        WeightLabel(affine[1..].to_vec())
    }

    /// Conjugate representation: label reversal.
    pub fn conjugate(&self) -> WeightLabel {
        WeightLabel(self.0.iter().rev().copied().collect())
    }

    /// Traceless coordinates: partial sums `ℓ_j = Σ_{i>=j} λ_i`, `ℓ_N = 0`,
    /// centred to sum zero. `S_N` acts by permuting coordinates.
    pub fn euclidean_coords(&self) -> EuclideanWeight {
        let n = self.rank_n() as usize;
        let mut partial = vec![0.0; n];
        let mut acc = 0u64;
        for j in (0..n - 1).rev() {
            acc += self.0[j] as u64;
            partial[j] = acc as f64;
        }
        let mean = partial.iter().sum::<f64>() / n as f64;
        EuclideanWeight(partial.into_iter().map(|x| x - mean).collect())
    }
}

impl fmt::Display for WeightLabel {
    /// Unshifted labels, concatenated when every label is a single digit
    /// (the `(11,4)` notation), comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dynkin();
        if d.iter().all(|&a| a < 10) {
            for a in d {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = d.iter().map(u32::to_string).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// A point of the traceless hyperplane in `R^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanWeight(pub Vec<f64>);

impl EuclideanWeight {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &EuclideanWeight) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }
}

/// All integrable weights in lexicographic order; the vacuum comes first.
pub fn enumerate_weights(spec: &AlgebraSpec) -> Result<Vec<WeightLabel>> {
    spec.validate()?;
    let slots = spec.rank_n as usize - 1;
    let mut out = Vec::with_capacity(spec.num_weights());
    let mut current = Vec::with_capacity(slots);
    fill(slots, spec.height(), &mut current, &mut out);
    Ok(out)
}

fn fill(slots: usize, budget: u32, current: &mut Vec<u32>, out: &mut Vec<WeightLabel>) {
    if current.len() == slots {
        out.push(WeightLabel(current.clone()));
        return;
    }
    let remaining = (slots - current.len()) as u32;
    let used: u32 = current.iter().sum();
    // Leave room for the remaining slots (each >= 1) under the strict bound.
    let max = budget - 1 - used - (remaining - 1);
    for v in 1..=max {
        current.push(v);
        fill(slots, budget, current, out);
        current.pop();
    }
}

/// Permutations of `0..n` with their signs, in Heap's-algorithm order.
pub(crate) fn signed_permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1.0)];
    let mut sign = 1.0;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}
