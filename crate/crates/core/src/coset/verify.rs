use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use super::theory::CosetTheory;
use crate::error::Result;
use crate::fusion::{verlinde_fusion_with_rounding, FusionTensor};
use crate::report::{Check, Report};
use crate::tolerance::Tolerances;
use crate::verify::verify_modular_axioms;
use crate::wzw::ModularData;

/// Representative independence is held to a fixed, tighter bound.
pub const ORBIT_TOLERANCE: f64 = 1e-12;

impl CosetTheory {
    /// `σ̃ = Σ d² ω⁻¹` over resolved sectors against its closed form, plus
    /// `|σ̃|² = Σ d²`, the vanishing `W₁` sum and `Σ_{V₀} = (1/N) Σ_{W₀}`.
    pub fn sigma_tilde_check(&self) -> Result<Report> {
        let eps = self.tol.structural;
        let mut report = Report::new(format!("sigma tilde for {}", self.spec));
        let sectors = self.sectors()?;

        let sigma: Complex64 = sectors
            .iter()
            .map(|s| s.qdim * s.qdim * s.univalence.conj())
            .sum();
        let s11 = self.first().s[[0, 0]] * self.second().s[[0, 0]];
        let s11_den = self.denominator().s[[0, 0]];
        let phase = Complex64::from_polar(1.0, -6.0 * PI * self.central_charge() / 24.0);
        let closed = phase / (self.spec.n as f64 * s11 * s11_den);
        report.push(
            Check::within("sigma closed form", (sigma - closed).norm(), eps)
                .with_detail(format!("sigma = {sigma:.12}")),
        );

        let dim_sq: f64 = sectors.iter().map(|s| s.qdim * s.qdim).sum();
        // Relative: both sides grow like the square of the global dimension.
        report.push(Check::within(
            "|sigma|^2 = sum d^2",
            (sigma.norm_sqr() - dim_sq).abs() / dim_sq,
            eps,
        ));

        let mut w0_sum = Complex64::new(0.0, 0.0);
        let mut w1_sum = Complex64::new(0.0, 0.0);
        for (orbit, rows) in self.orbits().iter().zip(&self.orbit_rows) {
            let part: Complex64 = rows
                .iter()
                .map(|r| {
                    let d = self.triple_qdim(r);
                    d * d * self.triple_univalence(r).conj()
                })
                .sum();
            if orbit.in_w0 {
                w0_sum += part;
            } else {
                w1_sum += part;
            }
        }
        report.push(Check::within("W1 sum vanishes", w1_sum.norm(), eps));
        report.push(Check::within(
            "sector sum = W0 sum / N",
            (sigma - w0_sum / self.spec.n as f64).norm(),
            eps,
        ));
        Ok(report)
    }

    /// Full certification of the resolved coset.
    ///
    /// Fails with an error only when the coset is outside the implemented
    /// scope; every numerical problem is reported as a failing check.
    pub fn verify(&self) -> Result<Report> {
        let md = self.modular_data()?;
        self.verify_modular_data(&md)
    }

    /// As [`Self::verify`], on data already produced by
    /// [`Self::modular_data`].
    pub fn verify_modular_data(&self, md: &ModularData) -> Result<Report> {
        let tol = self.tol;
        let mut report = Report::new(format!("coset certification for {}", self.spec));
        let sectors = self.sectors()?;

        let lenient = Tolerances {
            structural: tol.structural,
            integer: f64::INFINITY,
        };
        let (fusion, rounding) = verlinde_fusion_with_rounding(md, &lenient)?;
        report.push(Check::within(
            "Verlinde integrality",
            rounding.max_distance,
            tol.integer,
        ));
        report.extend(verify_modular_axioms(md, &fusion, &tol));
        report.push(y_invertibility(md, &fusion));

        let fixed: Vec<usize> = (0..sectors.len())
            .filter(|&i| self.orbits()[sectors[i].orbit].is_fixed())
            .collect();
        let self_conj = fixed.iter().all(|&i| md.conjugation[i] == i);
        report.push(Check::flag("fixed sectors self-conjugate", self_conj));
        let imag = fixed
            .iter()
            .flat_map(|&i| md.s.row(i).to_vec())
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        report.push(Check::within("fixed rows of S real", imag, tol.structural));
        let t_dev = fixed
            .iter()
            .map(|&i| (md.t[i] - 1.0).norm())
            .fold(0.0, f64::max);
        report.push(Check::within("fixed-point T = 1", t_dev, tol.structural));

        let q_dev = sectors
            .iter()
            .zip(&md.qdims)
            .map(|(s, d)| (s.qdim - d).abs())
            .fold(0.0, f64::max);
        report.push(Check::within("qdims = d'd''d/t", q_dev, tol.structural));
        report.push(Check::within(
            "orbit representative independence",
            self.orbit_deviation(),
            ORBIT_TOLERANCE,
        ));

        report.push(match self.cross_validate_fusion(&fusion) {
            Ok(n) => Check::flag("orbit fusion = Verlinde aggregate", true)
                .with_detail(format!("{n} orbit triples")),
            Err(e) => {
                Check::flag("orbit fusion = Verlinde aggregate", false).with_detail(e.to_string())
            }
        });
        if self.unique_fixed_orbit().is_ok() {
            report.push(self.fixed_point_fusion_check(md));
            if self.spec.m1 == self.spec.m2 {
                report.push(self.fixed_spin_display_check());
            }
        }
        report.extend(self.sigma_tilde_check()?);
        Ok(report)
    }

    fn fixed_point_fusion_check(&self, md: &ModularData) -> Check {
        let n = self.spec.n;
        let mut worst: f64 = 0.0;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    match self.fixed_point_fusion(md, i, j, k) {
                        Ok(r) => worst = worst.max((r.closed_form - r.verlinde).norm()),
                        Err(e) => {
                            return Check::flag("fixed-point fusion formula", false)
                                .with_detail(e.to_string())
                        }
                    }
                }
            }
        }
        Check::within("fixed-point fusion formula", worst, self.tol.integer)
    }

    /// Compares `Δ_i - Δ_α` at the fixed point with the closed expression
    /// `(N²-1)/24 - N(N²-1)/24 (2/(m'+N) - 1/(m'+m''+N))`, which is only
    /// unambiguous for `m' = m''`.
    fn fixed_spin_display_check(&self) -> Check {
        let Ok(f) = self.unique_fixed_orbit() else {
            return Check::flag("fixed-point spin display", false);
        };
        let n = self.spec.n as f64;
        let m1 = self.spec.m1 as f64;
        let m = (self.spec.m1 + self.spec.m2) as f64;
        let g = (n * n - 1.0) / 24.0;
        let display = g - n * g * (2.0 / (m1 + n) - 1.0 / (m + n));
        let direct = self.triple_spin(&self.orbit_rows[f][0]);
        let diff = direct - display;
        Check::within(
            "fixed-point spin display",
            (diff - diff.round()).abs(),
            self.tol.structural,
        )
    }

    /// Largest change in `d`, `ω` or orbit-level `S` when a `W₀` orbit
    /// representative is swapped for another image.
    pub fn orbit_deviation(&self) -> f64 {
        let w0 = self.w0_orbits();
        let mut dev: f64 = 0.0;
        for &a in &w0 {
            let rows = &self.orbit_rows[a];
            let r0 = &rows[0];
            let d0 = self.triple_qdim(r0);
            let w0_phase = self.triple_univalence(r0);
            for r in &rows[1..] {
                dev = dev.max((self.triple_qdim(r) - d0).abs());
                dev = dev.max((self.triple_univalence(r) - w0_phase).norm());
                for &b in &w0 {
                    let rb = &self.orbit_rows[b][0];
                    dev = dev.max((self.orbit_s(r, rb) - self.orbit_s(r0, rb)).norm());
                }
            }
        }
        dev
    }
}

/// Gershgorin bound on the spectrum of `S_11² Y†Y`, with `Y` rebuilt from
/// fusion, spins and dimensions. Passes when the lower bound is positive.
fn y_invertibility(md: &ModularData, fusion: &FusionTensor) -> Check {
    let n = md.len();
    let omega = md.univalences();
    let weight: Vec<Complex64> = (0..n).map(|v| omega[v].conj() * md.qdims[v]).collect();
    let mut y = Array2::<Complex64>::zeros((n, n));
    for l in 0..n {
        let mat = fusion.matrix(l);
        for m in 0..n {
            let inner: Complex64 = mat[m * n..(m + 1) * n]
                .iter()
                .zip(&weight)
                .filter(|(k, _)| **k != 0)
                .map(|(k, w)| w * *k as f64)
                .sum();
            y[[l, m]] = omega[l] * omega[m] * inner;
        }
    }
    let s11 = md.s[[0, 0]];
    let gram = y.t().mapv(|z| z.conj()).dot(&y) * (s11 * s11.conj());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let radius: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| gram[[i, j]].norm())
            .sum();
        let centre = gram[[i, i]].re;
        lo = lo.min(centre - radius);
        hi = hi.max(centre + radius);
    }
    let name = "Y invertible";
    if lo > 0.0 {
        Check::flag(name, true).with_detail(format!("cond(Y) <= {:.6}", (hi / lo).sqrt()))
    } else {
        Check::flag(name, false)
            .with_detail(format!("Gershgorin lower bound {lo:.3e} is not positive"))
    }
}

#[cfg(test)]
mod tests {
    use super::super::CosetSpec;
    use super::*;

    fn theory(n: u32, m1: u32, m2: u32) -> CosetTheory {
        CosetTheory::new(CosetSpec::new(n, m1, m2).unwrap(), Tolerances::default()).unwrap()
    }

    #[test]
    fn small_cosets_certify() {
        for (n, m1, m2) in [(2, 1, 1), (2, 2, 2), (3, 1, 1), (2, 1, 2), (3, 1, 2)] {
            let r = theory(n, m1, m2).verify().unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn fixed_point_checks_present() {
        let r = theory(2, 2, 2).verify().unwrap();
        for name in [
            "fixed-point fusion formula",
            "fixed-point spin display",
            "fixed-point T = 1",
            "Y invertible",
        ] {
            assert!(r.get(name).unwrap().passed, "{name}: {r}");
        }
    }

    #[test]
    fn sigma_tilde_ising() {
        // SU(2)_1 x SU(2)_1 / SU(2)_2 is the Ising model: |σ̃|² = 4.
        let r = theory(2, 1, 1).sigma_tilde_check().unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn tampered_data_fails() {
        let th = theory(2, 2, 2);
        let mut md = th.modular_data().unwrap();
        md.t[1] *= Complex64::from_polar(1.0, 0.2);
        let r = th.verify_modular_data(&md).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn orbit_deviation_is_tiny() {
        assert!(theory(3, 2, 1).orbit_deviation() < ORBIT_TOLERANCE);
    }
}
