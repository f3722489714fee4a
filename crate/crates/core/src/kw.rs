//! Kac-Wakimoto positivity for a subfactor `H ⊂ G` given by branching data.
//!
//! `b(i,α) = Σ_{(j,β)} S_{ij} conj(Ṡ_{αβ}) ⟨(j,β),(1,1)⟩`. KWC asks for
//! `b > 0` on `exp`; KWH asks for `S_{ij} conj(Ṡ_{αβ}) >= 0` whenever
//! `(i,α) ∈ exp` and `(j,β)` occurs in the vacuum. The normality condition
//! `cond2` asks that the numerator vacuum only pairs with the denominator
//! vacuum.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coset::{build_w, CosetSpec, WTriple};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::tolerance::Tolerances;
use crate::wzw::ModularData;

/// Imaginary parts of `b` above this signal inconsistent branching data.
pub const B_IMAG_TOLERANCE: f64 = 1e-9;

/// `exp` and the vacuum multiplicities, as row indices into the numerator
/// (`i`, `j`) and denominator (`α`, `β`) modular data.
#[derive(Clone, Debug)]
pub struct BranchingTable {
    pub numerator: ModularData,
    pub denominator: ModularData,
    pub exp: Vec<(usize, usize)>,
    pub vacuum_mult: Vec<(usize, usize, u32)>,
}

impl BranchingTable {
    /// Validates indices, that the vacuum pair occurs, and that every pair
    /// with positive multiplicity lies in `exp`.
    pub fn new(
        numerator: ModularData,
        denominator: ModularData,
        exp: Vec<(usize, usize)>,
        vacuum_mult: Vec<(usize, usize, u32)>,
    ) -> Result<Self> {
        if exp.is_empty() {
            return Err(Error::Schema("exp set is empty".into()));
        }
        let (n, m) = (numerator.len(), denominator.len());
        let in_range = |&(i, a): &(usize, usize)| i < n && a < m;
        if let Some(bad) = exp.iter().find(|p| !in_range(p)) {
            return Err(Error::Schema(format!("exp pair {bad:?} out of range")));
        }
        let exp_set: BTreeSet<(usize, usize)> = exp.iter().copied().collect();
        for &(j, b, mult) in &vacuum_mult {
            if !in_range(&(j, b)) {
                return Err(Error::Schema(format!(
                    "vacuum pair ({j}, {b}) out of range"
                )));
            }
            if mult == 0 {
                return Err(Error::Schema(format!(
                    "vacuum multiplicity of ({}, {}) must be positive",
                    numerator.labels[j], denominator.labels[b]
                )));
            }
            if !exp_set.contains(&(j, b)) {
                return Err(Error::Schema(format!(
                    "vacuum pair ({}, {}) is not in exp",
                    numerator.labels[j], denominator.labels[b]
                )));
            }
        }
        if !vacuum_mult.iter().any(|&(j, b, _)| j == 0 && b == 0) {
            return Err(Error::Schema(
                "the vacuum pair must occur in vacuum_mult".into(),
            ));
        }
        Ok(BranchingTable {
            numerator,
            denominator,
            exp,
            vacuum_mult,
        })
    }

    /// `(i, α)` rendered with unshifted labels, e.g. `(11,4)`.
    pub fn pair_name(&self, i: usize, alpha: usize) -> String {
        format!(
            "({},{})",
            label_text(&self.numerator, i),
            label_text(&self.denominator, alpha)
        )
    }
}

fn label_text(md: &ModularData, row: usize) -> String {
    md.labels[row]
        .weights
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join("")
}

/// Branching data of a diagonal coset: `exp = W₀`, and multiplicity 1 on each
/// member of the vacuum orbit.
pub fn diagonal_branching(spec: &CosetSpec, tol: &Tolerances) -> Result<BranchingTable> {
    let numerator = ModularData::from_factors(&[spec.first(), spec.second()], tol)?;
    let denominator = ModularData::wzw(spec.denominator(), tol)?;
    let ring = build_w(spec)?;
    let index = |t: &WTriple| -> Result<(usize, usize)> {
        let i = numerator
            .index_of_weights(&[t.lam1.clone(), t.lam2.clone()])
            .ok_or_else(|| Error::Schema(format!("{t} missing from numerator")))?;
        let a = denominator
            .index_of_weights(std::slice::from_ref(&t.lam))
            .ok_or_else(|| Error::Schema(format!("{t} missing from denominator")))?;
        Ok((i, a))
    };
    let exp = ring.w0().map(index).collect::<Result<Vec<_>>>()?;
    let vacuum_mult = WTriple::vacuum(spec.n)
        .orbit_images(spec)
        .iter()
        .map(|t| index(t).map(|(i, a)| (i, a, 1)))
        .collect::<Result<Vec<_>>>()?;
    BranchingTable::new(numerator, denominator, exp, vacuum_mult)
}

/// `b(i, α)`; errors if the imaginary part exceeds [`B_IMAG_TOLERANCE`].
pub fn b_value(table: &BranchingTable, i: usize, alpha: usize) -> Result<f64> {
    let s = &table.numerator.s;
    let sd = &table.denominator.s;
    let b: num_complex::Complex64 = table
        .vacuum_mult
        .iter()
        .map(|&(j, beta, mult)| s[[i, j]] * sd[[alpha, beta]].conj() * mult as f64)
        .sum();
    if b.im.abs() > B_IMAG_TOLERANCE {
        return Err(Error::ComplexBValue {
            i: label_text(&table.numerator, i),
            alpha: label_text(&table.denominator, alpha),
            imag: b.im,
        });
    }
    Ok(b.re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BValue {
    pub pair: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KwcOutcome {
    pub passed: bool,
    pub b_values: Vec<BValue>,
}

/// A quadruple with `S_{ij} conj(Ṡ_{αβ}) < 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KwhViolation {
    /// `(i, α) ∈ exp`.
    pub exp_pair: String,
    /// `(j, β)` with positive vacuum multiplicity.
    pub vacuum_pair: String,
    pub product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KwhOutcome {
    pub passed: bool,
    pub violations: Vec<KwhViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition2Outcome {
    pub passed: bool,
    /// Pairs `(1, β)` with `β ≠ 1` and positive multiplicity.
    pub witnesses: Vec<String>,
}

/// KWC: `b(i,α) > tol` on every member of `exp`.
pub fn check_kwc(table: &BranchingTable, tol: &Tolerances) -> Result<KwcOutcome> {
    let b_values = table
        .exp
        .iter()
        .map(|&(i, a)| {
            Ok(BValue {
                pair: table.pair_name(i, a),
                value: b_value(table, i, a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = b_values.iter().all(|b| b.value > tol.structural);
    Ok(KwcOutcome { passed, b_values })
}

/// KWH: every product `S_{ij} conj(Ṡ_{αβ})` with `(i,α) ∈ exp` and `(j,β)` in
/// the vacuum must be `>= -tol`.
pub fn check_kwh(table: &BranchingTable, tol: &Tolerances) -> KwhOutcome {
    let s = &table.numerator.s;
    let sd = &table.denominator.s;
    let mut violations = Vec::new();
    for &(j, beta, _) in &table.vacuum_mult {
        for &(i, alpha) in &table.exp {
            let product = (s[[i, j]] * sd[[alpha, beta]].conj()).re;
            if product < -tol.structural {
                violations.push(KwhViolation {
                    exp_pair: table.pair_name(i, alpha),
                    vacuum_pair: table.pair_name(j, beta),
                    product,
                });
            }
        }
    }
    KwhOutcome {
        passed: violations.is_empty(),
        violations,
    }
}

/// Condition (2): `⟨(1,β),(1,1)⟩ > 0` forces `β = 1`.
pub fn check_condition2(table: &BranchingTable) -> Condition2Outcome {
    let witnesses: Vec<String> = table
        .vacuum_mult
        .iter()
        .filter(|&&(j, beta, _)| j == 0 && beta != 0)
        .map(|&(j, beta, _)| table.pair_name(j, beta))
        .collect();
    Condition2Outcome {
        passed: witnesses.is_empty(),
        witnesses,
    }
}

/// `b(i,1)/b(1,1) = S_{i1}/S_{11}` for every `i` with `b(i,1) > tol`.
pub fn prop32_check(table: &BranchingTable, tol: &Tolerances) -> Result<Report> {
    let mut report = Report::new("b(i,1)/b(1,1) = S_i1/S_11");
    let b00 = b_value(table, 0, 0)?;
    let s = &table.numerator.s;
    let mut worst: f64 = 0.0;
    let mut qualifying = 0;
    for i in 0..table.numerator.len() {
        let bi = b_value(table, i, 0)?;
        if bi > tol.structural {
            qualifying += 1;
            let lhs = bi / b00;
            let rhs = (s[[i, 0]] / s[[0, 0]]).re;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    report.push(
        Check::within("b(i,1)/b(1,1) = S_i1/S_11", worst, tol.structural)
            .with_detail(format!("{qualifying} labels with b(i,1) > 0")),
    );
    Ok(report)
}

/// Which checks [`kw_report`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KwChecks {
    pub kwc: bool,
    pub kwh: bool,
    pub condition2: bool,
    pub prop32: bool,
}

impl Default for KwChecks {
    fn default() -> Self {
        KwChecks {
            kwc: true,
            kwh: true,
            condition2: true,
            prop32: true,
        }
    }
}

/// Outcome of the requested Kac-Wakimoto checks on one table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KwReport {
    pub numerator: String,
    pub denominator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kwc: Option<KwcOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kwh: Option<KwhOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition2: Option<Condition2Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prop32: Option<Report>,
}

pub fn kw_report(table: &BranchingTable, checks: KwChecks, tol: &Tolerances) -> Result<KwReport> {
    // KWH implies KWC, so KWC is evaluated whenever KWH is, to keep the
    // implication checkable on every report.
    let kwc = if checks.kwc || checks.kwh {
        Some(check_kwc(table, tol)?)
    } else {
        None
    };
    let kwh = checks.kwh.then(|| check_kwh(table, tol));
    if let (Some(h), Some(c)) = (&kwh, &kwc) {
        debug_assert!(!h.passed || c.passed, "KWH holds but KWC fails");
    }
    Ok(KwReport {
        numerator: table.numerator.name(),
        denominator: table.denominator.name(),
        kwc: if checks.kwc { kwc } else { None },
        kwh,
        condition2: checks.condition2.then(|| check_condition2(table)),
        prop32: if checks.prop32 {
            Some(prop32_check(table, tol)?)
        } else {
            None
        },
    })
}

impl KwReport {
    /// Flattened pass/fail view.
    pub fn to_report(&self) -> Report {
        let mut r = Report::new(format!(
            "Kac-Wakimoto checks for {} over {}",
            self.numerator, self.denominator
        ));
        if let Some(c) = &self.kwc {
            r.push(Check::flag("KWC", c.passed));
        }
        if let Some(h) = &self.kwh {
            let check = Check::flag("KWH", h.passed);
            r.push(match h.violations.first() {
                Some(v) => check.with_detail(format!(
                    "{} violations, first {} against {}: {:.6}",
                    h.violations.len(),
                    v.exp_pair,
                    v.vacuum_pair,
                    v.product
                )),
                None => check,
            });
        }
        if let Some(c) = &self.condition2 {
            let check = Check::flag("cond2 vacuum normality", c.passed);
            r.push(if c.passed {
                check
            } else {
                check.with_detail(format!("witnessed by {}", c.witnesses.join(", ")))
            });
        }
        if let Some(p) = &self.prop32 {
            r.extend(p.clone());
        }
        r
    }

    pub fn passed(&self) -> bool {
        self.to_report().passed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::AlgebraSpec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(n: u32, m1: u32, m2: u32) -> BranchingTable {
        diagonal_branching(&CosetSpec::new(n, m1, m2).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn diagonal_vacuum_orbit() {
        let t = diag(2, 1, 1);
        assert_eq!(t.vacuum_mult.len(), 2);
        assert!(t.vacuum_mult.contains(&(0, 0, 1)));
        assert!(check_condition2(&t).passed);
    }

    #[test]
    fn diagonal_b_positive_exactly_on_w0() {
        for n in [2, 3] {
            for m1 in 1..=3 {
                for m2 in 1..=3 {
                    let t = diag(n, m1, m2);
                    let exp: BTreeSet<_> = t.exp.iter().copied().collect();
                    for i in 0..t.numerator.len() {
                        for a in 0..t.denominator.len() {
                            let b = b_value(&t, i, a).unwrap();
                            assert_eq!(b > 1e-9, exp.contains(&(i, a)), "N={n} {m1},{m2}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_b_is_orbit_multiple_of_vacuum_rows() {
        let t = diag(3, 1, 2);
        let n = 3.0;
        for &(i, a) in &t.exp {
            let b = b_value(&t, i, a).unwrap();
            let expect = n * (t.numerator.s[[i, 0]] * t.denominator.s[[a, 0]]).re;
            assert!((b - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_checks_pass() {
        for (n, m1, m2) in [(2, 1, 1), (2, 2, 3), (3, 1, 1), (3, 2, 2)] {
            let r = kw_report(&diag(n, m1, m2), KwChecks::default(), &tol()).unwrap();
            assert!(r.passed(), "{}", r.to_report());
        }
    }

    #[test]
    fn spurious_exp_member_fails_kwc() {
        let t = diag(2, 1, 1);
        let w1_pair = (0..t.numerator.len())
            .flat_map(|i| (0..t.denominator.len()).map(move |a| (i, a)))
            .find(|p| !t.exp.contains(p))
            .unwrap();
        let mut exp = t.exp.clone();
        exp.push(w1_pair);
        let bad = BranchingTable::new(t.numerator, t.denominator, exp, t.vacuum_mult).unwrap();
        assert!(!check_kwc(&bad, &tol()).unwrap().passed);
    }

    #[test]
    fn trivial_denominator_passes() {
        let num = ModularData::wzw(AlgebraSpec::new(2, 1).unwrap(), &tol()).unwrap();
        let den = ModularData::wzw(AlgebraSpec::new(2, 0).unwrap(), &tol()).unwrap();
        let t = BranchingTable::new(num, den, vec![(0, 0), (1, 0)], vec![(0, 0, 1)]).unwrap();
        let r = kw_report(&t, KwChecks::default(), &tol()).unwrap();
        assert!(r.passed(), "{}", r.to_report());
    }

    #[test]
    fn single_vacuum_entry_satisfies_condition2() {
        let num = ModularData::wzw(AlgebraSpec::new(3, 1).unwrap(), &tol()).unwrap();
        let den = ModularData::wzw(AlgebraSpec::new(2, 1).unwrap(), &tol()).unwrap();
        let t = BranchingTable::new(num, den, vec![(0, 0)], vec![(0, 0, 1)]).unwrap();
        assert!(check_condition2(&t).passed);
    }

    #[test]
    fn table_validation() {
        let num = ModularData::wzw(AlgebraSpec::new(2, 1).unwrap(), &tol()).unwrap();
        let den = ModularData::wzw(AlgebraSpec::new(2, 2).unwrap(), &tol()).unwrap();
        let mk = |exp, vac| BranchingTable::new(num.clone(), den.clone(), exp, vac);
        assert!(mk(vec![], vec![(0, 0, 1)]).is_err());
        assert!(mk(vec![(0, 0)], vec![(0, 0, 0)]).is_err());
        assert!(mk(vec![(0, 0)], vec![(0, 0, 1), (1, 1, 1)]).is_err());
        assert!(mk(vec![(0, 0), (1, 1)], vec![(1, 1, 1)]).is_err());
        assert!(mk(vec![(0, 9)], vec![(0, 0, 1)]).is_err());
        assert!(mk(vec![(0, 0)], vec![(0, 0, 1)]).is_ok());
    }

    #[test]
    fn complex_b_is_rejected() {
        let mut t = diag(2, 1, 1);
        t.numerator.s[[1, 0]].im += 1e-3;
        assert!(matches!(
            b_value(&t, 1, 0),
            Err(Error::ComplexBValue { .. })
        ));
    }
}
