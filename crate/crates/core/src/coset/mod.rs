//! Diagonal cosets `SU(N)_{m'} x SU(N)_{m''} / SU(N)_{m'+m''}`.
//!
//! The basis of `W` is the set of triples `(Λ', Λ''; Λ)`. Triples whose
//! color defect `τ(Λ') + τ(Λ'') - τ(Λ)` vanishes mod `N` form `W₀` (the
//! branching set); the simultaneous diagram rotation groups them into orbits
//! (field identification). An orbit of period `s` carries multiplicity
//! `t = N/s` and splits into `t` irreducible sectors of equal dimension.

mod fusion;
mod theory;
mod verify;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{enumerate_weights, AlgebraSpec, WeightLabel};

pub use fusion::FixedPointFusion;
pub(crate) use theory::coset_conjugation;
pub use theory::{CosetSector, CosetTheory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetSpec {
    pub n: u32,
    pub m1: u32,
    pub m2: u32,
}

impl CosetSpec {
    pub fn new(n: u32, m1: u32, m2: u32) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "coset levels must be >= 1, got m' = {m1}, m'' = {m2}"
            )));
        }
        AlgebraSpec::new(n, m1 + m2)?;
        Ok(CosetSpec { n, m1, m2 })
    }

    pub fn first(&self) -> AlgebraSpec {
        AlgebraSpec {
            rank_n: self.n,
            level: self.m1,
        }
    }

    pub fn second(&self) -> AlgebraSpec {
        AlgebraSpec {
            rank_n: self.n,
            level: self.m2,
        }
    }

    pub fn denominator(&self) -> AlgebraSpec {
        AlgebraSpec {
            rank_n: self.n,
            level: self.m1 + self.m2,
        }
    }

    /// `[first, second, denominator]`.
    pub fn factors(&self) -> [AlgebraSpec; 3] {
        [self.first(), self.second(), self.denominator()]
    }

    /// Rebuilds a spec from the three factors of a coset theory.
    pub fn from_factors(factors: &[AlgebraSpec]) -> Result<Self> {
        match factors {
            [a, b, c]
                if a.rank_n == b.rank_n && b.rank_n == c.rank_n && a.level + b.level == c.level =>
            {
                CosetSpec::new(a.rank_n, a.level, b.level)
            }
            _ => Err(Error::Schema(format!(
                "coset factors must be SU(N)_m', SU(N)_m'', SU(N)_(m'+m''), got {factors:?}"
            ))),
        }
    }

    pub fn n_is_prime(&self) -> bool {
        let n = self.n;
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }
}

impl fmt::Display for CosetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} x {} / {}",
            self.first(),
            self.second(),
            self.denominator()
        )
    }
}

/// A basis element `(Λ', Λ''; Λ)` of `W`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WTriple {
    pub lam1: WeightLabel,
    pub lam2: WeightLabel,
    pub lam: WeightLabel,
}

impl WTriple {
    pub fn new(lam1: WeightLabel, lam2: WeightLabel, lam: WeightLabel) -> Self {
        WTriple { lam1, lam2, lam }
    }

    pub fn vacuum(n: u32) -> Self {
        let v = WeightLabel::vacuum(n);
        WTriple::new(v.clone(), v.clone(), v)
    }

    pub fn from_weights(weights: &[WeightLabel]) -> Option<Self> {
        match weights {
            [a, b, c] => Some(WTriple::new(a.clone(), b.clone(), c.clone())),
            _ => None,
        }
    }

    pub fn weights(&self) -> Vec<WeightLabel> {
        vec![self.lam1.clone(), self.lam2.clone(), self.lam.clone()]
    }

    /// `τ(Λ') + τ(Λ'') - τ(Λ) mod N`; zero exactly on `W₀`.
    pub fn color_defect(&self, n: u32) -> u32 {
        (self.lam1.color() + self.lam2.color() + n - self.lam.color()) % n
    }

    pub fn in_w0(&self, n: u32) -> bool {
        self.color_defect(n) == 0
    }

    /// Simultaneous diagram rotation `σ^power`.
    pub fn rotate(&self, spec: &CosetSpec, power: i64) -> WTriple {
        WTriple::new(
            self.lam1.diagram_rotation(&spec.first(), power),
            self.lam2.diagram_rotation(&spec.second(), power),
            self.lam.diagram_rotation(&spec.denominator(), power),
        )
    }

    pub fn conjugate(&self) -> WTriple {
        WTriple::new(
            self.lam1.conjugate(),
            self.lam2.conjugate(),
            self.lam.conjugate(),
        )
    }

    /// Distinct images under `Z_N`, starting from `self`.
    pub fn orbit_images(&self, spec: &CosetSpec) -> Vec<WTriple> {
        let mut images = vec![self.clone()];
        let mut next = self.rotate(spec, 1);
        while next != *self {
            images.push(next.clone());
            next = next.rotate(spec, 1);
        }
        images
    }

    /// Lexicographically minimal element of the orbit.
    pub fn canonical(&self, spec: &CosetSpec) -> WTriple {
        self.orbit_images(spec)
            .into_iter()
            .min()
            .expect("orbit contains at least the triple itself")
    }
}

impl fmt::Display for WTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.lam1, self.lam2, self.lam)
    }
}

/// `W` in lexicographic order with its `W₀` membership flags.
#[derive(Clone, Debug)]
pub struct WRing {
    pub triples: Vec<WTriple>,
    pub in_w0: Vec<bool>,
}

impl WRing {
    pub fn w0(&self) -> impl Iterator<Item = &WTriple> {
        self.triples
            .iter()
            .zip(&self.in_w0)
            .filter_map(|(t, &w0)| w0.then_some(t))
    }

    pub fn w1(&self) -> impl Iterator<Item = &WTriple> {
        self.triples
            .iter()
            .zip(&self.in_w0)
            .filter_map(|(t, &w0)| (!w0).then_some(t))
    }
}

/// Full Cartesian product of the three weight sets, split by color defect.
pub fn build_w(spec: &CosetSpec) -> Result<WRing> {
    let w1 = enumerate_weights(&spec.first())?;
    let w2 = enumerate_weights(&spec.second())?;
    let w3 = enumerate_weights(&spec.denominator())?;
    let mut triples = Vec::with_capacity(w1.len() * w2.len() * w3.len());
    for a in &w1 {
        for b in &w2 {
            for c in &w3 {
                triples.push(WTriple::new(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let in_w0 = triples.iter().map(|t| t.in_w0(spec.n)).collect();
    Ok(WRing { triples, in_w0 })
}

/// A `Z_N` orbit in `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// The `s` distinct images, starting from the canonical (minimal) one.
    pub representatives: Vec<WTriple>,
    pub period: usize,
    pub multiplicity: usize,
    pub in_w0: bool,
}

impl Orbit {
    pub fn canonical(&self) -> &WTriple {
        &self.representatives[0]
    }

    pub fn is_fixed(&self) -> bool {
        self.multiplicity > 1
    }
}

/// Partition of `W` into orbits, sorted by canonical representative.
pub fn orbits(spec: &CosetSpec) -> Result<Vec<Orbit>> {
    let ring = build_w(spec)?;
    let n = spec.n as usize;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // `ring.triples` is sorted, so the first unseen triple of each orbit is
    // its minimum.
    for (triple, &w0) in ring.triples.iter().zip(&ring.in_w0) {
        if seen.contains(triple) {
            continue;
        }
        let images = triple.orbit_images(spec);
        let period = images.len();
        debug_assert_eq!(n % period, 0);
        seen.extend(images.iter().cloned());
        out.push(Orbit {
            representatives: images,
            period,
            multiplicity: n / period,
            in_w0: w0,
        });
    }
    Ok(out)
}
