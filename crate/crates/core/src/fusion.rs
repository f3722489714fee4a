//! Verlinde fusion coefficients.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::wzw::ModularData;

/// Dense `N_{ab}^c`, stored row-major in `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTensor {
    n: usize,
    coeffs: Vec<u32>,
}

/// Outcome of rounding raw Verlinde sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rounding {
    /// Largest `|raw - round(raw)|` over all triples.
    pub max_distance: f64,
    /// Largest `|Im raw|`.
    pub max_imag: f64,
}

impl FusionTensor {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> u32) -> Self {
        let mut coeffs = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    coeffs.push(f(a, b, c));
                }
            }
        }
        FusionTensor { n, coeffs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> u32 {
        self.coeffs[(a * self.n + b) * self.n + c]
    }

    /// Fusion matrix `(N_a)_{bc}`.
    pub fn matrix(&self, a: usize) -> &[u32] {
        let nn = self.n * self.n;
        &self.coeffs[a * nn..(a + 1) * nn]
    }

    /// `N_{1a}^b = δ_ab`, `N_{ab}^c = N_{ba}^c = N_{a*b*}^{c*}`.
    pub fn check_ring_axioms(&self, conjugation: &[usize]) -> std::result::Result<(), String> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let expect = u32::from(a == b);
                if self.get(0, a, b) != expect {
                    return Err(format!("vacuum is not the unit at ({a},{b})"));
                }
                for c in 0..n {
                    let v = self.get(a, b, c);
                    if v != self.get(b, a, c) {
                        return Err(format!("not commutative at ({a},{b},{c})"));
                    }
                    if v != self.get(conjugation[a], conjugation[b], conjugation[c]) {
                        return Err(format!("not conjugation invariant at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `N_{ab}^c = Σ_m S_am S_bm conj(S_cm) / S_1m`, rounded to nonnegative integers.
///
/// Fails on the worst triple if any raw value is further than
/// `tol.integer` from a nonnegative integer.
pub fn verlinde_fusion(md: &ModularData, tol: &Tolerances) -> Result<FusionTensor> {
    verlinde_fusion_with_rounding(md, tol).map(|(t, _)| t)
}

pub fn verlinde_fusion_with_rounding(
    md: &ModularData,
    tol: &Tolerances,
) -> Result<(FusionTensor, Rounding)> {
    let s = &md.s;
    let n = s.nrows();
    let s_conj_t: Array2<Complex64> = s.t().mapv(|z| z.conj());
    let vac: Array1<Complex64> = s.row(0).to_owned();

    let mut coeffs = Vec::with_capacity(n * n * n);
    let mut worst: Option<(usize, usize, usize, Complex64, f64)> = None;
    let mut rounding = Rounding {
        max_distance: 0.0,
        max_imag: 0.0,
    };
    let mut scaled = s.clone();
    for a in 0..n {
        // scaled = S diag(S_a· / S_1·); then N_a = scaled · S†.
        let weights: Array1<Complex64> = &s.row(a) / &vac;
        scaled.assign(s);
        scaled *= &weights.view().insert_axis(Axis(0));
        let na = scaled.dot(&s_conj_t);
        for b in 0..n {
            for c in 0..n {
                let raw = na[[b, c]];
                let rounded = raw.re.round().max(0.0);
                let distance = (raw - Complex64::new(rounded, 0.0)).norm();
                rounding.max_distance = rounding.max_distance.max(distance);
                rounding.max_imag = rounding.max_imag.max(raw.im.abs());
                if distance > tol.integer && worst.is_none_or(|w| distance > w.4) {
                    worst = Some((a, b, c, raw, distance));
                }
                coeffs.push(rounded as u32);
            }
        }
    }
    if let Some((a, b, c, value, distance)) = worst {
        return Err(Error::NonIntegralFusion {
            a,
            b,
            c,
            value,
            distance,
        });
    }
    Ok((FusionTensor { n, coeffs }, rounding))
}

/// Single raw Verlinde sum, for spot checks that do not need the full tensor.
pub fn verlinde_entry(s: &Array2<Complex64>, a: usize, b: usize, c: usize) -> Complex64 {
    (0..s.ncols())
        .map(|m| s[[a, m]] * s[[b, m]] * s[[c, m]].conj() / s[[0, m]])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{AlgebraSpec, WeightLabel};

    fn md(n: u32, k: u32) -> ModularData {
        ModularData::wzw(AlgebraSpec::new(n, k).unwrap(), &Tolerances::default()).unwrap()
    }

    /// Brute-force Verlinde, one entry at a time.
    fn brute(md: &ModularData) -> Vec<Complex64> {
        let n = md.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push(verlinde_entry(&md.s, a, b, c));
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        for (n, k) in [(2, 4), (3, 2), (4, 1)] {
            let m = md(n, k);
            let t = verlinde_fusion(&m, &Tolerances::default()).unwrap();
            let raw = brute(&m);
            for (i, z) in raw.iter().enumerate() {
                let (a, b, c) = (
                    i / (m.len() * m.len()),
                    (i / m.len()) % m.len(),
                    i % m.len(),
                );
                assert!((z.re - t.get(a, b, c) as f64).abs() < 1e-9);
                assert!(z.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn su2_level2_spin_half_squared() {
        let m = md(2, 2);
        let t = verlinde_fusion(&m, &Tolerances::default()).unwrap();
        // (2) x (2) = (1) + (3)
        assert_eq!(t.get(1, 1, 0), 1);
        assert_eq!(t.get(1, 1, 1), 0);
        assert_eq!(t.get(1, 1, 2), 1);
    }

    #[test]
    fn su3_level1_is_z3_group_ring() {
        let m = md(3, 1);
        let t = verlinde_fusion(&m, &Tolerances::default()).unwrap();
        assert!(m.qdims.iter().all(|d| (d - 1.0).abs() < 1e-12));
        // Group law through colors.
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let ca = m.labels[a].weights[0].color();
                    let cb = m.labels[b].weights[0].color();
                    let cc = m.labels[c].weights[0].color();
                    assert_eq!(t.get(a, b, c), u32::from((ca + cb) % 3 == cc));
                }
            }
        }
    }

    #[test]
    fn ring_axioms_hold() {
        for (n, k) in [(2, 5), (3, 3), (4, 2)] {
            let m = md(n, k);
            let t = verlinde_fusion(&m, &Tolerances::default()).unwrap();
            t.check_ring_axioms(&m.conjugation).unwrap();
        }
    }

    #[test]
    fn perturbed_matrix_is_rejected() {
        let mut m = md(2, 3);
        m.s[[1, 2]] += Complex64::new(0.05, 0.0);
        let err = verlinde_fusion(&m, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NonIntegralFusion { .. }));
    }

    #[test]
    fn dimension_is_ring_character() {
        let m = md(3, 3);
        let t = verlinde_fusion(&m, &Tolerances::default()).unwrap();
        for a in 0..m.len() {
            for b in 0..m.len() {
                let rhs: f64 = (0..m.len())
                    .map(|c| t.get(a, b, c) as f64 * m.qdims[c])
                    .sum();
                assert!((m.qdims[a] * m.qdims[b] - rhs).abs() < 1e-9);
            }
        }
        let adj = m
            .index_of_weights(&[WeightLabel::from_dynkin(&[1, 1])])
            .unwrap();
        assert!(t.get(adj, adj, 0) == 1);
    }
}
