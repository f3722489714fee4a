//! Reshetikhin-Turaev invariants of the lens spaces `L(p,1)`.
//!
//! Surgery on a `p`-framed unknot gives
//! `τ(L(p,1)) = (Δ_{sgn p}/D)^{-1} D^{-2} Σ_j ω_j^p d_j²`, with
//! `Δ_± = Σ_j ω_j^{±1} d_j²`, `ω` the univalence and `τ(S³) = D^{-1}`.
//! `L(0,1) = S² x S¹` has invariant 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coset::{CosetSpec, CosetTheory};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::wzw::ModularData;

/// `τ(L(p,1))` for the theory `md`.
pub fn lens_invariant(md: &ModularData, p: i64, tol: &Tolerances) -> Result<Complex64> {
    if p == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let omega = md.univalences();
    let gauss = |power: i64| -> Complex64 {
        omega
            .iter()
            .zip(&md.qdims)
            .map(|(w, d)| w.powi(power as i32) * d * d)
            .sum()
    };
    let dim = md.global_dimension();
    let anomaly = gauss(p.signum());
    if anomaly.norm() < tol.structural {
        return Err(Error::AnomalyUndefined(anomaly.norm()));
    }
    Ok(dim / anomaly / (dim * dim) * gauss(p))
}

/// Invariants of `G = SU(N)_{m'} x SU(N)_{m''}`, `H = SU(N)_{m'+m''}` and the
/// coset at one framing, with `τ_G conj(τ_H) / τ_{G/H}` compared to `N^c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOrientation {
    pub p: i64,
    pub numerator: Complex64,
    pub denominator: Complex64,
    pub coset: Complex64,
    /// `None` when `τ_{G/H}` vanishes.
    pub ratio: Option<Complex64>,
    /// Integer `c` minimizing `|ratio - N^c|`.
    pub power: Option<i32>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub theory: String,
    pub p: i64,
    pub value: Complex64,
    /// `p` and `-p`, for cosets probed with [`factorization_probe`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<ProbeOrientation>>,
}

impl InvariantReport {
    pub fn plain(md: &ModularData, p: i64, tol: &Tolerances) -> Result<Self> {
        Ok(InvariantReport {
            theory: md.name(),
            p,
            value: lens_invariant(md, p, tol)?,
            probe: None,
        })
    }

    /// True when every emitted number is finite.
    pub fn is_finite(&self) -> bool {
        let ok = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        ok(&self.value)
            && self.probe.iter().flatten().all(|o| {
                ok(&o.numerator)
                    && ok(&o.denominator)
                    && ok(&o.coset)
                    && o.ratio.as_ref().is_none_or(ok)
                    && o.residual.is_none_or(f64::is_finite)
            })
    }
}

/// Evaluates both orientations of `L(p,1)` on the coset and its factors.
/// Nothing is asserted; the fitted power is reported as found.
pub fn factorization_probe(spec: &CosetSpec, p: i64, tol: &Tolerances) -> Result<InvariantReport> {
    let theory = CosetTheory::new(*spec, *tol)?;
    let g = theory.numerator()?;
    let h = theory.denominator();
    let coset = theory.modular_data()?;
    let n = spec.n as f64;

    let orientation = |q: i64| -> Result<ProbeOrientation> {
        let tg = lens_invariant(&g, q, tol)?;
        let th = lens_invariant(h, q, tol)?;
        let tc = lens_invariant(&coset, q, tol)?;
        let (ratio, power, residual) = if tc.norm() < tol.structural {
            (None, None, None)
        } else {
            let ratio = tg * th.conj() / tc;
            let power = (ratio.norm().ln() / n.ln()).round() as i32;
            let residual = (ratio - n.powi(power)).norm();
            (Some(ratio), Some(power), Some(residual))
        };
        Ok(ProbeOrientation {
            p: q,
            numerator: tg,
            denominator: th,
            coset: tc,
            ratio,
            power,
            residual,
        })
    };
    Ok(InvariantReport {
        theory: coset.name(),
        p,
        value: lens_invariant(&coset, p, tol)?,
        probe: Some(vec![orientation(p)?, orientation(-p)?]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::AlgebraSpec;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn suite() -> Vec<ModularData> {
        let mut out: Vec<ModularData> = [(2, 1), (2, 5), (3, 2), (4, 2)]
            .iter()
            .map(|&(n, k)| ModularData::wzw(AlgebraSpec::new(n, k).unwrap(), &tol()).unwrap())
            .collect();
        for (n, m1, m2) in [(2, 1, 1), (2, 2, 2)] {
            let th = CosetTheory::new(CosetSpec::new(n, m1, m2).unwrap(), tol()).unwrap();
            out.push(th.modular_data().unwrap());
        }
        out
    }

    #[test]
    fn normalizations() {
        for md in suite() {
            let d = md.global_dimension();
            assert!((lens_invariant(&md, 0, &tol()).unwrap() - 1.0).norm() < 1e-9);
            for p in [1, -1] {
                let v = lens_invariant(&md, p, &tol()).unwrap();
                assert!((v - 1.0 / d).norm() < 1e-9, "{} p={p}: {v}", md.name());
                assert!((v - md.s[[0, 0]]).norm() < 1e-9);
            }
            let prod =
                lens_invariant(&md, 1, &tol()).unwrap() * lens_invariant(&md, -1, &tol()).unwrap();
            assert!((prod - 1.0 / (d * d)).norm() < 1e-9);
        }
    }

    #[test]
    fn orientation_reversal_conjugates() {
        for md in suite() {
            let mut rev = md.clone();
            rev.delta.iter_mut().for_each(|x| *x = -*x);
            rev.t.iter_mut().for_each(|z| *z = z.conj());
            for p in -4..=4 {
                let a = lens_invariant(&md, p, &tol()).unwrap();
                let b = lens_invariant(&rev, p, &tol()).unwrap();
                assert!((a.conj() - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn su2_level1_direct_sum() {
        let md = ModularData::wzw(AlgebraSpec::new(2, 1).unwrap(), &tol()).unwrap();
        // d = (1, 1), ω = (1, i).
        let omega = [
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, PI / 2.0),
        ];
        let d = 2f64.sqrt();
        for p in [2i64, 3, -3, 5] {
            let sum: Complex64 = omega.iter().map(|w| w.powi(p as i32)).sum();
            let anomaly: Complex64 = omega.iter().map(|w| w.powi(p.signum() as i32)).sum();
            let expect = d / anomaly / 2.0 * sum;
            let got = lens_invariant(&md, p, &tol()).unwrap();
            assert!((got - expect).norm() < 1e-12, "p={p}");
        }
        assert!(lens_invariant(&md, 2, &tol()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn probe_is_finite() {
        for (n, m1, m2) in [(2, 1, 1), (2, 2, 2)] {
            let spec = CosetSpec::new(n, m1, m2).unwrap();
            for p in 0..=5 {
                let r = factorization_probe(&spec, p, &tol()).unwrap();
                assert!(r.is_finite());
                assert_eq!(r.probe.as_ref().unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn probe_at_zero_is_trivial() {
        let spec = CosetSpec::new(2, 1, 1).unwrap();
        let r = factorization_probe(&spec, 0, &tol()).unwrap();
        let o = &r.probe.unwrap()[0];
        assert!((o.ratio.unwrap() - 1.0).norm() < 1e-12);
        assert_eq!(o.power, Some(0));
    }
}
