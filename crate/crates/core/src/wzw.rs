//! Modular data of `SU(N)_K` and of finite products of such theories.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::weights::{enumerate_weights, signed_permutations, AlgebraSpec, WeightLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryKind {
    Wzw,
    Product,
    Coset,
}

impl TheoryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoryKind::Wzw => "wzw",
            TheoryKind::Product => "product",
            TheoryKind::Coset => "coset",
        }
    }
}

/// Row label of a modular-data matrix.
///
/// For WZW and product theories `weights` holds one weight per factor and
/// `resolution` is 1. For cosets `weights` is the canonical orbit
/// representative `(Λ', Λ''; Λ)` and `resolution` is the component index
/// `k ∈ 1..=t` of a resolved fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorLabel {
    pub weights: Vec<WeightLabel>,
    pub resolution: u32,
}

impl SectorLabel {
    pub fn single(weights: Vec<WeightLabel>) -> Self {
        SectorLabel {
            weights,
            resolution: 1,
        }
    }

    /// Concatenated unshifted labels.
    pub fn dynkin(&self) -> Vec<u32> {
        self.weights.iter().flat_map(|w| w.dynkin()).collect()
    }
}

impl std::fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        if self.resolution != 1 {
            write!(f, "#{}", self.resolution)?;
        }
        Ok(())
    }
}

/// S, T, spins, central charge and quantum dimensions of one chiral theory.
///
/// Rows are ordered like `labels`, vacuum first. `delta[λ]` is the conformal
/// dimension (for cosets, reduced to `[0, 1)`), so the univalence is
/// `exp(2πi Δ_λ)` and `T_λ = exp(2πi (Δ_λ - c/24))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    pub kind: TheoryKind,
    pub factors: Vec<AlgebraSpec>,
    pub labels: Vec<SectorLabel>,
    pub s: Array2<Complex64>,
    pub t: Vec<Complex64>,
    pub delta: Vec<f64>,
    pub central_charge: f64,
    pub qdims: Vec<f64>,
    /// `conjugation[λ]` is the row of `λ*`.
    pub conjugation: Vec<usize>,
}

impl ModularData {
    /// `SU(N)_K` via the Kac-Peterson formula.
    pub fn wzw(spec: AlgebraSpec, tol: &Tolerances) -> Result<Self> {
        let weights = enumerate_weights(&spec)?;
        let s = kac_peterson_s(&spec, tol)?;
        let c = central_charge(&spec);
        let delta: Vec<f64> = weights
            .iter()
            .map(|w| conformal_dimension(w, &spec))
            .collect();
        let t = t_matrix(&delta, c);
        let labels: Vec<SectorLabel> = weights
            .into_iter()
            .map(|w| SectorLabel::single(vec![w]))
            .collect();
        let conjugation = conjugation_by_reversal(&labels)?;
        let qdims = quantum_dimensions(&s);
        Ok(ModularData {
            kind: TheoryKind::Wzw,
            factors: vec![spec],
            labels,
            s,
            t,
            delta,
            central_charge: c,
            qdims,
            conjugation,
        })
    }

    /// A single WZW model, or the product of several.
    pub fn from_factors(factors: &[AlgebraSpec], tol: &Tolerances) -> Result<Self> {
        match factors {
            [] => Err(Error::Schema("a theory needs at least one factor".into())),
            [one] => ModularData::wzw(*one, tol),
            many => {
                let parts = many
                    .iter()
                    .map(|f| ModularData::wzw(*f, tol))
                    .collect::<Result<Vec<_>>>()?;
                tensor_theory(&parts)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Row index of a label.
    pub fn index_of(&self, label: &SectorLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Row index of a (resolution-1) label given as one weight per factor.
    pub fn index_of_weights(&self, weights: &[WeightLabel]) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.resolution == 1 && l.weights == weights)
    }

    /// Row index of a resolution-1 label given as concatenated unshifted
    /// Dynkin labels, e.g. `[1, 1, 4]` for `(11,4)`.
    pub fn index_of_dynkin(&self, unshifted: &[u32]) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.resolution == 1 && l.dynkin() == unshifted)
    }

    /// `exp(2πi Δ_λ)`.
    pub fn univalence(&self, row: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.delta[row])
    }

    pub fn univalences(&self) -> Vec<Complex64> {
        (0..self.len()).map(|r| self.univalence(r)).collect()
    }

    /// `D = (Σ d_λ^2)^{1/2}`.
    pub fn global_dimension(&self) -> f64 {
        self.qdims.iter().map(|d| d * d).sum::<f64>().sqrt()
    }

    /// A short identifier such as `SU(2)_1 x SU(2)_1`.
    pub fn name(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.to_string()).collect();
        match self.kind {
            TheoryKind::Coset if parts.len() == 3 => {
                format!("{} x {} / {}", parts[0], parts[1], parts[2])
            }
            _ => parts.join(" x "),
        }
    }
}

/// Kac-Peterson S-matrix of `SU(N)_K`, rows in [`enumerate_weights`] order.
///
/// Entry `(λ, δ)` is `c Σ_{w ∈ S_N} det(w) exp(-2πi <w x(δ), x(λ)> / h)`.
/// The constant `c` is fixed numerically: rows are scaled to unit length and
/// a global phase makes the vacuum row real and positive.
pub fn kac_peterson_s(spec: &AlgebraSpec, tol: &Tolerances) -> Result<Array2<Complex64>> {
    let weights = enumerate_weights(spec)?;
    let n = weights.len();
    let h = spec.height() as f64;
    let coords: Vec<Vec<f64>> = weights.iter().map(|w| w.euclidean_coords().0).collect();
    let perms = signed_permutations(spec.rank_n as usize);

    let mut s = Array2::<Complex64>::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            let xa = &coords[a];
            let xb = &coords[b];
            let mut acc = Complex64::new(0.0, 0.0);
            for (perm, sign) in &perms {
                let ip: f64 = perm.iter().enumerate().map(|(i, &p)| xb[p] * xa[i]).sum();
                acc += Complex64::from_polar(*sign, -2.0 * PI * ip / h);
            }
            s[[a, b]] = acc;
        }
    }

    let norm = s.row(0).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::Normalization(format!(
            "vacuum row of {spec} vanishes"
        )));
    }
    let phase = s[[0, 0]].conj() / s[[0, 0]].norm();
    s.mapv_inplace(|z| z * phase / norm);

    for (b, z) in s.row(0).iter().enumerate() {
        if z.im.abs() > tol.structural || z.re <= tol.structural {
            return Err(Error::Normalization(format!(
                "vacuum row entry {b} of {spec} is {z}, not real positive"
            )));
        }
    }
    let dev = unitarity_deviation(&s);
    if dev > tol.structural {
        return Err(Error::NonUnitary { deviation: dev });
    }
    Ok(s)
}

/// `Δ_λ = (|x(λ)|^2 - |x(ρ)|^2) / 2h`, the Casimir over `K + N`.
pub fn conformal_dimension(weight: &WeightLabel, spec: &AlgebraSpec) -> f64 {
    let x = weight.euclidean_coords().norm_sqr();
    let rho = WeightLabel::vacuum(spec.rank_n)
        .euclidean_coords()
        .norm_sqr();
    (x - rho) / (2.0 * spec.height() as f64)
}

/// `C = K (N^2 - 1) / (K + N)`.
pub fn central_charge(spec: &AlgebraSpec) -> f64 {
    spec.level as f64 * spec.dimension() as f64 / spec.height() as f64
}

/// `T_λ = exp(2πi (Δ_λ - c/24))`.
pub fn t_matrix(delta: &[f64], central_charge: f64) -> Vec<Complex64> {
    delta
        .iter()
        .map(|d| Complex64::from_polar(1.0, 2.0 * PI * (d - central_charge / 24.0)))
        .collect()
}

/// `d_λ = S_{1λ} / S_{11}`.
pub fn quantum_dimensions(s: &Array2<Complex64>) -> Vec<f64> {
    let s00 = s[[0, 0]];
    s.row(0).iter().map(|z| (z / s00).re).collect()
}

/// `max |S S† - I|`.
pub fn unitarity_deviation(s: &Array2<Complex64>) -> f64 {
    let n = s.nrows();
    let sh = s.t().mapv(|z| z.conj());
    let prod = s.dot(&sh);
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[[i, j]] - target).norm());
        }
    }
    dev
}

/// Conjugation for WZW and product labels (per-factor reversal).
pub(crate) fn conjugation_by_reversal(labels: &[SectorLabel]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            let conj = SectorLabel {
                weights: l.weights.iter().map(|w| w.conjugate()).collect(),
                resolution: l.resolution,
            };
            labels.iter().position(|x| *x == conj).ok_or_else(|| {
                Error::Schema(format!("conjugate of {l} is missing from the label set"))
            })
        })
        .collect()
}

/// Tensor product of theories: Kronecker S, multiplied T, added spins and
/// central charges. Rows are ordered with the first factor most significant.
pub fn tensor_theory(parts: &[ModularData]) -> Result<ModularData> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidSpec("tensor product of zero theories".into()))?;
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    if parts.iter().any(|p| p.kind == TheoryKind::Coset) {
        return Err(Error::OutOfScope(
            "tensor products of coset theories".into(),
        ));
    }
    let mut acc = first.clone();
    for next in &parts[1..] {
        acc = tensor_pair(&acc, next);
    }
    acc.kind = TheoryKind::Product;
    acc.qdims = quantum_dimensions(&acc.s);
    acc.conjugation = conjugation_by_reversal(&acc.labels)?;
    Ok(acc)
}

fn tensor_pair(a: &ModularData, b: &ModularData) -> ModularData {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut s = Array2::<Complex64>::zeros((n, n));
    for i in 0..na {
        for k in 0..nb {
            for j in 0..na {
                for l in 0..nb {
                    s[[i * nb + k, j * nb + l]] = a.s[[i, j]] * b.s[[k, l]];
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    for i in 0..na {
        for k in 0..nb {
            let mut w = a.labels[i].weights.clone();
            w.extend(b.labels[k].weights.iter().cloned());
            labels.push(SectorLabel::single(w));
            t.push(a.t[i] * b.t[k]);
            delta.push(a.delta[i] + b.delta[k]);
        }
    }
    let mut factors = a.factors.clone();
    factors.extend(b.factors.iter().copied());
    ModularData {
        kind: TheoryKind::Product,
        factors,
        labels,
        s,
        t,
        delta,
        central_charge: a.central_charge + b.central_charge,
        qdims: Vec::new(),
        conjugation: Vec::new(),
    }
}
