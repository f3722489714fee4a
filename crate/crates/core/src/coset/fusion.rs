//! Coset fusion two ways: orbit sums over the factor theories, and Verlinde
//! on the resolved S-matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::theory::CosetTheory;
use crate::error::{Error, Result};
use crate::fusion::{verlinde_entry, FusionTensor};
use crate::wzw::ModularData;

/// `N_{F_i F_j}^{F_k}` from the closed formula and from Verlinde.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointFusion {
    pub closed_form: f64,
    pub verlinde: Complex64,
    pub value: u32,
}

impl CosetTheory {
    fn factor_fusions(&self) -> Result<[&FusionTensor; 3]> {
        Ok([
            self.factors[0].fusion(&self.tol)?,
            self.factors[1].fusion(&self.tol)?,
            self.factors[2].fusion(&self.tol)?,
        ])
    }

    fn orbit_fusion_with(&self, f: &[&FusionTensor; 3], a: usize, b: usize, c: usize) -> u32 {
        let ra = &self.orbit_rows[a][0];
        let rb = &self.orbit_rows[b][0];
        let images = &self.orbit_rows[c];
        (0..self.spec.n as usize)
            .map(|s| {
                let rc = &images[s % images.len()];
                f[0].get(ra[0], rb[0], rc[0])
                    * f[1].get(ra[1], rb[1], rc[1])
                    * f[2].get(ra[2], rb[2], rc[2])
            })
            .sum()
    }

    /// `⟨P(a) P(b), P(c)⟩ = Σ_{s<N} N^G_{ab}^{σ^s c} N^H_{αβ}^{σ^s γ}` for
    /// orbit indices `a`, `b`, `c`.
    pub fn orbit_fusion(&self, a: usize, b: usize, c: usize) -> Result<u32> {
        let f = self.factor_fusions()?;
        Ok(self.orbit_fusion_with(&f, a, b, c))
    }

    /// Compares orbit sums with the resolved fusion tensor on every triple of
    /// `W₀` orbits.
    ///
    /// Two identities are enforced: the total over all components equals the
    /// orbit sum, and each single component `c_i` of the first orbit carries
    /// exactly `1/t` of it. Returns the number of orbit triples checked.
    pub fn cross_validate_fusion(&self, fusion: &FusionTensor) -> Result<usize> {
        let f = self.factor_fusions()?;
        let sectors = self.sectors()?;
        let groups = self.sector_groups(&sectors);
        let w0 = self.w0_orbits();
        let label = |o: usize| self.orbits()[o].canonical().to_string();
        let mut checked = 0;
        for &a in &w0 {
            for &b in &w0 {
                for &c in &w0 {
                    let orbit_sum = self.orbit_fusion_with(&f, a, b, c);
                    let t_a = groups[a].len() as u32;
                    let parts: Vec<u32> = groups[a]
                        .iter()
                        .map(|&i| {
                            groups[b]
                                .iter()
                                .flat_map(|&j| groups[c].iter().map(move |&k| (j, k)))
                                .map(|(j, k)| fusion.get(i, j, k))
                                .sum()
                        })
                        .collect();
                    let total: u32 = parts.iter().sum();
                    let resolved = if total != orbit_sum {
                        Some(total)
                    } else {
                        parts.iter().map(|p| p * t_a).find(|&p| p != orbit_sum)
                    };
                    if let Some(resolved) = resolved {
                        return Err(Error::OrbitFusionMismatch {
                            a: label(a),
                            b: label(b),
                            c: label(c),
                            orbit_sum,
                            resolved,
                        });
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    /// Index of the unique fixed orbit, or an out-of-scope error.
    pub fn unique_fixed_orbit(&self) -> Result<usize> {
        match self.fixed_orbits()[..] {
            [f] if self.spec.n_is_prime() => Ok(f),
            [] => Err(Error::OutOfScope(format!(
                "{} has no fixed orbit",
                self.spec
            ))),
            _ => Err(Error::OutOfScope(format!(
                "{}: the fixed-point fusion formula needs prime N and a unique fixed orbit",
                self.spec
            ))),
        }
    }

    /// `N_{F_i F_j}^{F_k}` for resolution indices `i, j, k ∈ 1..=N`.
    ///
    /// The closed formula reads
    /// `⟨FF,F⟩/N³ + (S_FF/S_1F)((δ_jk+δ_ij+δ_ik)/N - 3/N²)
    ///  + (N δ_ijk + 2/N - δ_jk - δ_ij - δ_ik)/S_1F`
    /// with orbit-level `S_FF`, `S_1F`. It must match Verlinde on `md` (the
    /// output of [`CosetTheory::modular_data`]) and be a nonnegative integer.
    pub fn fixed_point_fusion(
        &self,
        md: &ModularData,
        i: u32,
        j: u32,
        k: u32,
    ) -> Result<FixedPointFusion> {
        let f = self.unique_fixed_orbit()?;
        let n = self.spec.n;
        for idx in [i, j, k] {
            if idx == 0 || idx > n {
                return Err(Error::InvalidSpec(format!(
                    "resolution index {idx} outside 1..={n}"
                )));
            }
        }
        let fusions = self.factor_fusions()?;
        let fff = self.orbit_fusion_with(&fusions, f, f, f) as f64;
        let rf = &self.orbit_rows[f][0];
        let r0 = &self.orbit_rows[0][0];
        let s_ff = self.orbit_s(rf, rf).re;
        let s_1f = self.orbit_s(r0, rf).re;

        let nf = n as f64;
        let d = |x: u32, y: u32| if x == y { 1.0 } else { 0.0 };
        let pair_sum = d(j, k) + d(i, j) + d(i, k);
        let triple = if i == j && j == k { 1.0 } else { 0.0 };
        let closed_form = fff / nf.powi(3)
            + (s_ff / s_1f) * (pair_sum / nf - 3.0 / (nf * nf))
            + (nf * triple + 2.0 / nf - pair_sum) / s_1f;

        let index = |r: u32| {
            md.labels
                .iter()
                .position(|l| {
                    l.resolution == r && l.weights == self.orbits()[f].canonical().weights()
                })
                .ok_or_else(|| Error::Schema(format!("fixed sector {r} missing from coset data")))
        };
        let verlinde = verlinde_entry(&md.s, index(i)?, index(j)?, index(k)?);

        let value = closed_form.round().max(0.0);
        let tol = self.tol.integer;
        if (closed_form - verlinde).norm() > tol || (closed_form - value).abs() > tol {
            return Err(Error::FusionMismatch {
                i: i as usize,
                j: j as usize,
                k: k as usize,
                closed_form,
                verlinde,
            });
        }
        Ok(FixedPointFusion {
            closed_form,
            verlinde,
            value: value as u32,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::CosetSpec;
    use super::*;
    use crate::fusion::verlinde_fusion;
    use crate::tolerance::Tolerances;

    fn theory(n: u32, m1: u32, m2: u32) -> CosetTheory {
        CosetTheory::new(CosetSpec::new(n, m1, m2).unwrap(), Tolerances::default()).unwrap()
    }

    #[test]
    fn vacuum_is_orbit_unit() {
        let th = theory(2, 2, 2);
        for b in th.w0_orbits() {
            let t_b = th.orbits()[b].multiplicity as u32;
            for c in th.w0_orbits() {
                let expect = if b == c { t_b } else { 0 };
                assert_eq!(th.orbit_fusion(0, b, c).unwrap(), expect);
            }
        }
    }

    #[test]
    fn orbit_fusion_is_symmetric() {
        let th = theory(3, 1, 2);
        let w0 = th.w0_orbits();
        for &a in &w0 {
            for &b in &w0 {
                for &c in &w0 {
                    assert_eq!(
                        th.orbit_fusion(a, b, c).unwrap(),
                        th.orbit_fusion(b, a, c).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn cross_validation_passes() {
        for (n, m1, m2) in [(2, 1, 1), (2, 2, 2), (3, 1, 1), (2, 1, 3), (4, 1, 1)] {
            let th = theory(n, m1, m2);
            let md = th.modular_data().unwrap();
            let f = verlinde_fusion(&md, &th.tol).unwrap();
            let w0 = th.w0_orbits().len();
            assert_eq!(th.cross_validate_fusion(&f).unwrap(), w0 * w0 * w0);
        }
    }

    #[test]
    fn tampered_fusion_fails_cross_validation() {
        let th = theory(2, 1, 1);
        let md = th.modular_data().unwrap();
        let f = verlinde_fusion(&md, &th.tol).unwrap();
        let bumped = FusionTensor::from_fn(f.len(), |a, b, c| {
            f.get(a, b, c) + u32::from((a, b, c) == (1, 1, 1))
        });
        let err = th.cross_validate_fusion(&bumped).unwrap_err();
        assert!(matches!(err, Error::OrbitFusionMismatch { .. }));
    }

    #[test]
    fn fixed_point_formula_su2() {
        let th = theory(2, 2, 2);
        let md = th.modular_data().unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    let r = th.fixed_point_fusion(&md, i, j, k).unwrap();
                    assert!((r.closed_form - r.verlinde.re).abs() < 1e-6);
                    let swapped = th.fixed_point_fusion(&md, j, i, k).unwrap();
                    assert_eq!(r.value, swapped.value);
                }
            }
        }
    }

    #[test]
    fn fixed_point_formula_rejects_free_coset() {
        let th = theory(2, 1, 1);
        let md = th.modular_data().unwrap();
        assert!(th
            .fixed_point_fusion(&md, 1, 1, 1)
            .unwrap_err()
            .is_out_of_scope());
    }

    #[test]
    fn fixed_point_formula_rejects_bad_index() {
        let th = theory(2, 2, 2);
        let md = th.modular_data().unwrap();
        assert!(th.fixed_point_fusion(&md, 0, 1, 1).is_err());
        assert!(th.fixed_point_fusion(&md, 1, 3, 1).is_err());
    }
}
