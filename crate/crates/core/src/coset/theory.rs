use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{orbits, CosetSpec, Orbit, WTriple};
use crate::error::{Error, Result};
use crate::fusion::{verlinde_fusion, FusionTensor};
use crate::tolerance::Tolerances;
use crate::weights::{AlgebraSpec, WeightLabel};
use crate::wzw::{
    quantum_dimensions, t_matrix, tensor_theory, ModularData, SectorLabel, TheoryKind,
};

/// An irreducible coset sector: orbit plus resolution index `k ∈ 1..=t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetSector {
    /// Index into [`CosetTheory::orbits`].
    pub orbit: usize,
    pub resolution_index: u32,
    pub qdim: f64,
    pub univalence: Complex64,
}

/// One `SU(N)_k` factor with the lookup tables the coset needs.
#[derive(Debug)]
pub(crate) struct Factor {
    pub md: ModularData,
    index: HashMap<WeightLabel, usize>,
    fusion: OnceLock<std::result::Result<FusionTensor, String>>,
}

impl Factor {
    fn new(spec: AlgebraSpec, tol: &Tolerances) -> Result<Self> {
        let md = ModularData::wzw(spec, tol)?;
        let index: HashMap<WeightLabel, usize> = md
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.weights[0].clone(), i))
            .collect();
        Ok(Factor {
            md,
            index,
            fusion: OnceLock::new(),
        })
    }

    pub fn row(&self, w: &WeightLabel) -> usize {
        self.index[w]
    }

    pub fn fusion(&self, tol: &Tolerances) -> Result<&FusionTensor> {
        self.fusion
            .get_or_init(|| verlinde_fusion(&self.md, tol).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Schema(format!("factor fusion failed: {e}")))
    }
}

/// The diagonal coset with its three WZW factors and orbit structure.
#[derive(Debug)]
pub struct CosetTheory {
    pub spec: CosetSpec,
    pub tol: Tolerances,
    pub(crate) factors: [Factor; 3],
    orbits: Vec<Orbit>,
    /// Factor rows of every orbit image, parallel to `orbits[..].representatives`.
    pub(crate) orbit_rows: Vec<Vec<[usize; 3]>>,
}

impl CosetTheory {
    pub fn new(spec: CosetSpec, tol: Tolerances) -> Result<Self> {
        let factors = [
            Factor::new(spec.first(), &tol)?,
            Factor::new(spec.second(), &tol)?,
            Factor::new(spec.denominator(), &tol)?,
        ];
        let orbits = orbits(&spec)?;
        let orbit_rows = orbits
            .iter()
            .map(|o| {
                o.representatives
                    .iter()
                    .map(|t| {
                        [
                            factors[0].row(&t.lam1),
                            factors[1].row(&t.lam2),
                            factors[2].row(&t.lam),
                        ]
                    })
                    .collect()
            })
            .collect();
        Ok(CosetTheory {
            spec,
            tol,
            factors,
            orbits,
            orbit_rows,
        })
    }

    /// All orbits of `W`, sorted by canonical representative.
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// Indices of orbits inside `W₀`.
    pub fn w0_orbits(&self) -> Vec<usize> {
        (0..self.orbits.len())
            .filter(|&i| self.orbits[i].in_w0)
            .collect()
    }

    /// `W₀` orbits with multiplicity `t > 1`.
    pub fn fixed_orbits(&self) -> Vec<usize> {
        self.w0_orbits()
            .into_iter()
            .filter(|&i| self.orbits[i].is_fixed())
            .collect()
    }

    pub fn first(&self) -> &ModularData {
        &self.factors[0].md
    }

    pub fn second(&self) -> &ModularData {
        &self.factors[1].md
    }

    pub fn denominator(&self) -> &ModularData {
        &self.factors[2].md
    }

    /// The product theory `SU(N)_{m'} x SU(N)_{m''}`.
    pub fn numerator(&self) -> Result<ModularData> {
        tensor_theory(&[self.first().clone(), self.second().clone()])
    }

    pub fn rows_of(&self, t: &WTriple) -> [usize; 3] {
        [
            self.factors[0].row(&t.lam1),
            self.factors[1].row(&t.lam2),
            self.factors[2].row(&t.lam),
        ]
    }

    /// Numerator S: `S_{ij} = S'_{Λ'_i Λ'_j} S''_{Λ''_i Λ''_j}`.
    pub(crate) fn s_num(&self, a: &[usize; 3], b: &[usize; 3]) -> Complex64 {
        self.factors[0].md.s[[a[0], b[0]]] * self.factors[1].md.s[[a[1], b[1]]]
    }

    /// Denominator S: `Ṡ_{αβ}`.
    pub(crate) fn s_den(&self, a: &[usize; 3], b: &[usize; 3]) -> Complex64 {
        self.factors[2].md.s[[a[2], b[2]]]
    }

    /// `N S_{ij} conj(Ṡ_{αβ})`, the unresolved orbit-level S entry.
    pub(crate) fn orbit_s(&self, a: &[usize; 3], b: &[usize; 3]) -> Complex64 {
        self.spec.n as f64 * self.s_num(a, b) * self.s_den(a, b).conj()
    }

    /// `d_{Λ'} d_{Λ''} d_Λ`.
    pub(crate) fn triple_qdim(&self, r: &[usize; 3]) -> f64 {
        self.factors[0].md.qdims[r[0]]
            * self.factors[1].md.qdims[r[1]]
            * self.factors[2].md.qdims[r[2]]
    }

    /// `Δ_i - Δ_α`.
    pub(crate) fn triple_spin(&self, r: &[usize; 3]) -> f64 {
        self.factors[0].md.delta[r[0]] + self.factors[1].md.delta[r[1]]
            - self.factors[2].md.delta[r[2]]
    }

    pub(crate) fn triple_univalence(&self, r: &[usize; 3]) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.triple_spin(r))
    }

    /// `C_G - C_H`.
    pub fn central_charge(&self) -> f64 {
        self.first().central_charge + self.second().central_charge
            - self.denominator().central_charge
    }

    /// Irreducible sectors: each `W₀` orbit with multiplicity `t` gives `t`
    /// sectors of dimension `d/t`. Only prime `N` is resolved.
    pub fn sectors(&self) -> Result<Vec<CosetSector>> {
        let mut out = Vec::new();
        for o in self.w0_orbits() {
            let orbit = &self.orbits[o];
            let t = orbit.multiplicity;
            if t > 1 && !self.spec.n_is_prime() {
                return Err(Error::OutOfScope(format!(
                    "{}: orbit {} is fixed by Z_{} with multiplicity {t}; \
                     resolution is implemented for prime N only",
                    self.spec,
                    orbit.canonical(),
                    self.spec.n
                )));
            }
            let rows = &self.orbit_rows[o][0];
            let qdim = self.triple_qdim(rows) / t as f64;
            let univalence = self.triple_univalence(rows);
            for k in 1..=t as u32 {
                out.push(CosetSector {
                    orbit: o,
                    resolution_index: k,
                    qdim,
                    univalence,
                });
            }
        }
        Ok(out)
    }

    /// Resolved modular data of the coset.
    ///
    /// Free orbits: `S_AB = N S_ij conj(Ṡ_αβ)`. With a unique fixed orbit `F`
    /// (prime `N`): `S_{a F_k} = S_{a F} / N` and
    /// `S_{F_i F_k} = δ_ik + (S_FF - N) / N²`. Spins are `Δ_i - Δ_α` mod 1 and
    /// `T = diag(ω_A) exp(-2πi (C_G - C_H)/24)`.
    pub fn modular_data(&self) -> Result<ModularData> {
        let sectors = self.sectors()?;
        let fixed = self.fixed_orbits();
        if fixed.len() > 1 {
            return Err(Error::OutOfScope(format!(
                "{}: {} fixed orbits; only a single fixed orbit is resolved",
                self.spec,
                fixed.len()
            )));
        }
        let n = sectors.len();
        let big_n = self.spec.n as f64;
        let mut s = Array2::<Complex64>::zeros((n, n));
        for (ai, a) in sectors.iter().enumerate() {
            let ra = &self.orbit_rows[a.orbit][0];
            let a_fixed = self.orbits[a.orbit].is_fixed();
            for (bi, b) in sectors.iter().enumerate() {
                let rb = &self.orbit_rows[b.orbit][0];
                let b_fixed = self.orbits[b.orbit].is_fixed();
                let base = self.orbit_s(ra, rb);
                s[[ai, bi]] = match (a_fixed, b_fixed) {
                    (false, false) => base,
                    (true, true) => {
                        let delta = if a.resolution_index == b.resolution_index {
                            1.0
                        } else {
                            0.0
                        };
                        delta + (base - big_n) / (big_n * big_n)
                    }
                    _ => base / big_n,
                };
            }
        }

        let c = self.central_charge();
        let delta: Vec<f64> = sectors
            .iter()
            .map(|a| reduce_spin(self.triple_spin(&self.orbit_rows[a.orbit][0])))
            .collect();
        let t = t_matrix(&delta, c);
        let labels: Vec<SectorLabel> = sectors
            .iter()
            .map(|a| SectorLabel {
                weights: self.orbits[a.orbit].canonical().weights(),
                resolution: a.resolution_index,
            })
            .collect();
        let conjugation = coset_conjugation(&self.spec, &labels)?;
        let qdims = quantum_dimensions(&s);
        Ok(ModularData {
            kind: TheoryKind::Coset,
            factors: self.spec.factors().to_vec(),
            labels,
            s,
            t,
            delta,
            central_charge: c,
            qdims,
            conjugation,
        })
    }

    /// Sector indices of each orbit, indexed like [`Self::orbits`]; empty
    /// for orbits outside `W₀`.
    pub fn sector_groups(&self, sectors: &[CosetSector]) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.orbits.len()];
        for (i, s) in sectors.iter().enumerate() {
            groups[s.orbit].push(i);
        }
        groups
    }
}

/// Reduces a spin to `[0, 1)`, snapping values within `1e-9` of 1 to 0.
fn reduce_spin(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if 1.0 - r < 1e-9 {
        0.0
    } else {
        r
    }
}

/// Conjugation on coset labels: the sector whose orbit contains the
/// conjugate triple, with the same resolution index.
pub(crate) fn coset_conjugation(spec: &CosetSpec, labels: &[SectorLabel]) -> Result<Vec<usize>> {
    let lookup: HashMap<(WTriple, u32), usize> = labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| WTriple::from_weights(&l.weights).map(|t| ((t, l.resolution), i)))
        .collect();
    labels
        .iter()
        .map(|l| {
            let triple = WTriple::from_weights(&l.weights)
                .ok_or_else(|| Error::Schema(format!("coset label {l} is not a triple")))?;
            let key = (triple.conjugate().canonical(spec), l.resolution);
            lookup
                .get(&key)
                .copied()
                .ok_or_else(|| Error::Schema(format!("conjugate of coset sector {l} is missing")))
        })
        .collect()
}
