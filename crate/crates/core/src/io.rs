//! JSON formats for modular data and branching tables.
//!
//! Complex numbers are `[re, im]` pairs and labels are unshifted Dynkin labels,
//! concatenated across factors. Floats are written in shortest round-trip form,
//! so `parse(emit(md)) == md` bit for bit.

use std::collections::BTreeSet;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coset::{coset_conjugation, CosetSpec};
use crate::error::{Error, Result};
use crate::kw::BranchingTable;
use crate::tolerance::Tolerances;
use crate::weights::{AlgebraSpec, WeightLabel};
use crate::wzw::{
    conjugation_by_reversal, quantum_dimensions, ModularData, SectorLabel, TheoryKind,
};

/// Branching data for `SU(2)_8 ⊂ SU(3)_2`.
pub const MAVERICK_JSON: &str = include_str!("../data/maverick.json");

/// On-disk form of [`ModularData`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModularDataFile {
    #[serde(rename = "type")]
    pub kind: TheoryKind,
    pub factors: Vec<AlgebraSpec>,
    pub labels: Vec<Vec<u32>>,
    /// Resolution indices, present for cosets only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<u32>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
    pub delta: Vec<f64>,
    pub c: f64,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl From<&ModularData> for ModularDataFile {
    fn from(md: &ModularData) -> Self {
        ModularDataFile {
            kind: md.kind,
            factors: md.factors.clone(),
            labels: md.labels.iter().map(SectorLabel::dynkin).collect(),
            resolution: (md.kind == TheoryKind::Coset)
                .then(|| md.labels.iter().map(|l| l.resolution).collect()),
            s: md
                .s
                .rows()
                .into_iter()
                .map(|row| row.iter().copied().map(pair).collect())
                .collect(),
            t: md.t.iter().copied().map(pair).collect(),
            delta: md.delta.clone(),
            c: md.central_charge,
        }
    }
}

impl TryFrom<ModularDataFile> for ModularData {
    type Error = Error;

    /// Checks shapes and labels; recomputes quantum dimensions and
    /// conjugation, which the format does not carry.
    fn try_from(file: ModularDataFile) -> Result<Self> {
        let n = file.labels.len();
        if n == 0 {
            return Err(Error::Schema("no labels".into()));
        }
        for f in &file.factors {
            f.validate().map_err(|e| Error::Schema(e.to_string()))?;
        }
        match (file.kind, file.factors.len()) {
            (TheoryKind::Wzw, 1) | (TheoryKind::Coset, 3) => {}
            (TheoryKind::Product, k) if k >= 2 => {}
            (kind, k) => {
                return Err(Error::Schema(format!(
                    "type {} cannot have {k} factors",
                    kind.as_str()
                )))
            }
        }
        if file.s.len() != n || file.s.iter().any(|row| row.len() != n) {
            return Err(Error::Schema(format!("S must be {n} x {n}")));
        }
        if file.t.len() != n || file.delta.len() != n {
            return Err(Error::Schema(format!("T and delta must have {n} entries")));
        }
        let resolution = match (file.kind, file.resolution) {
            (TheoryKind::Coset, Some(r)) if r.len() == n => r,
            (TheoryKind::Coset, None) => vec![1; n],
            (TheoryKind::Coset, Some(_)) => {
                return Err(Error::Schema(format!("resolution must have {n} entries")))
            }
            (_, None) => vec![1; n],
            (_, Some(_)) => {
                return Err(Error::Schema(
                    "resolution is only allowed for cosets".into(),
                ))
            }
        };
        let labels = file
            .labels
            .iter()
            .zip(resolution)
            .map(|(l, r)| {
                Ok(SectorLabel {
                    weights: split_label(l, &file.factors)?,
                    resolution: r,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::Schema("duplicate labels".into()));
        }
        let s = Array2::from_shape_fn((n, n), |(i, j)| complex(file.s[i][j]));
        let conjugation = match file.kind {
            TheoryKind::Coset => {
                coset_conjugation(&CosetSpec::from_factors(&file.factors)?, &labels)?
            }
            _ => conjugation_by_reversal(&labels)?,
        };
        let qdims = quantum_dimensions(&s);
        Ok(ModularData {
            kind: file.kind,
            factors: file.factors,
            labels,
            s,
            t: file.t.into_iter().map(complex).collect(),
            delta: file.delta,
            central_charge: file.c,
            qdims,
            conjugation,
        })
    }
}

/// Splits concatenated unshifted labels into one shifted weight per factor.
fn split_label(unshifted: &[u32], factors: &[AlgebraSpec]) -> Result<Vec<WeightLabel>> {
    let expected: usize = factors.iter().map(|f| f.rank_n as usize - 1).sum();
    if unshifted.len() != expected {
        return Err(Error::Schema(format!(
            "label {unshifted:?} needs {expected} entries for {factors:?}"
        )));
    }
    let mut rest = unshifted;
    factors
        .iter()
        .map(|f| {
            let (head, tail) = rest.split_at(f.rank_n as usize - 1);
            rest = tail;
            let w = WeightLabel::from_dynkin(head);
            w.validate(f).map_err(|e| Error::Schema(e.to_string()))?;
            Ok(w)
        })
        .collect()
}

pub fn modular_data_to_json(md: &ModularData) -> Result<String> {
    Ok(serde_json::to_string(&ModularDataFile::from(md))?)
}

pub fn modular_data_from_json(text: &str) -> Result<ModularData> {
    let file: ModularDataFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.try_into()
}

/// A theory named by its factors, as used in branching files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryRef {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TheoryKind>,
    pub factors: Vec<AlgebraSpec>,
}

impl TheoryRef {
    fn load(&self, tol: &Tolerances) -> Result<ModularData> {
        let expected = match self.factors.len() {
            0 => return Err(Error::Schema("a theory needs at least one factor".into())),
            1 => TheoryKind::Wzw,
            _ => TheoryKind::Product,
        };
        if let Some(kind) = self.kind {
            if kind != expected {
                return Err(Error::Schema(format!(
                    "branching theories must be wzw or product, got {} with {} factors",
                    kind.as_str(),
                    self.factors.len()
                )));
            }
        }
        for f in &self.factors {
            f.validate().map_err(|e| Error::Schema(e.to_string()))?;
        }
        ModularData::from_factors(&self.factors, tol)
    }
}

/// On-disk form of a [`BranchingTable`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchingFile {
    pub numerator: TheoryRef,
    pub denominator: TheoryRef,
    pub exp: Vec<(Vec<u32>, Vec<u32>)>,
    pub vacuum_mult: Vec<(Vec<u32>, Vec<u32>, i64)>,
}

impl BranchingFile {
    pub fn into_table(self, tol: &Tolerances) -> Result<BranchingTable> {
        let numerator = self.numerator.load(tol)?;
        let denominator = self.denominator.load(tol)?;
        let row = |md: &ModularData, label: &[u32]| {
            md.index_of_dynkin(label)
                .ok_or_else(|| Error::UnknownLabel {
                    label: label.to_vec(),
                    theory: md.name(),
                })
        };
        let exp = self
            .exp
            .iter()
            .map(|(i, a)| Ok((row(&numerator, i)?, row(&denominator, a)?)))
            .collect::<Result<Vec<_>>>()?;
        if exp.iter().collect::<BTreeSet<_>>().len() != exp.len() {
            return Err(Error::Schema("duplicate exp pairs".into()));
        }
        let vacuum_mult = self
            .vacuum_mult
            .iter()
            .map(|(j, b, m)| {
                let mult = u32::try_from(*m).ok().filter(|&m| m > 0).ok_or_else(|| {
                    Error::Schema(format!(
                        "multiplicity of ({j:?}, {b:?}) must be positive, got {m}"
                    ))
                })?;
                Ok((row(&numerator, j)?, row(&denominator, b)?, mult))
            })
            .collect::<Result<Vec<_>>>()?;
        let keys: BTreeSet<_> = vacuum_mult.iter().map(|&(j, b, _)| (j, b)).collect();
        if keys.len() != vacuum_mult.len() {
            return Err(Error::Schema("duplicate vacuum_mult pairs".into()));
        }
        BranchingTable::new(numerator, denominator, exp, vacuum_mult)
    }

    pub fn from_table(table: &BranchingTable) -> Self {
        let dynkin = |md: &ModularData, r: usize| md.labels[r].dynkin();
        BranchingFile {
            numerator: TheoryRef {
                kind: Some(table.numerator.kind),
                factors: table.numerator.factors.clone(),
            },
            denominator: TheoryRef {
                kind: Some(table.denominator.kind),
                factors: table.denominator.factors.clone(),
            },
            exp: table
                .exp
                .iter()
                .map(|&(i, a)| (dynkin(&table.numerator, i), dynkin(&table.denominator, a)))
                .collect(),
            vacuum_mult: table
                .vacuum_mult
                .iter()
                .map(|&(j, b, m)| {
                    (
                        dynkin(&table.numerator, j),
                        dynkin(&table.denominator, b),
                        i64::from(m),
                    )
                })
                .collect(),
        }
    }
}

pub fn parse_branching_table(text: &str, tol: &Tolerances) -> Result<BranchingTable> {
    let file: BranchingFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.into_table(tol)
}

pub fn load_branching_table(path: &Path, tol: &Tolerances) -> Result<BranchingTable> {
    parse_branching_table(&std::fs::read_to_string(path)?, tol)
}

/// The shipped `SU(2)_8 ⊂ SU(3)_2` table.
pub fn maverick_table(tol: &Tolerances) -> Result<BranchingTable> {
    parse_branching_table(MAVERICK_JSON, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::CosetTheory;
    use crate::kw::diagonal_branching;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn wzw_round_trip_is_exact() {
        for (n, k) in [(2, 3), (3, 2), (4, 1)] {
            let md = ModularData::wzw(AlgebraSpec::new(n, k).unwrap(), &tol()).unwrap();
            let back = modular_data_from_json(&modular_data_to_json(&md).unwrap()).unwrap();
            assert_eq!(back, md);
        }
    }

    #[test]
    fn product_and_coset_round_trip() {
        let a = ModularData::from_factors(
            &[
                AlgebraSpec::new(2, 1).unwrap(),
                AlgebraSpec::new(2, 2).unwrap(),
            ],
            &tol(),
        )
        .unwrap();
        assert_eq!(
            modular_data_from_json(&modular_data_to_json(&a).unwrap()).unwrap(),
            a
        );

        let th = CosetTheory::new(CosetSpec::new(2, 2, 2).unwrap(), tol()).unwrap();
        let md = th.modular_data().unwrap();
        let text = modular_data_to_json(&md).unwrap();
        assert!(text.contains("\"resolution\""));
        assert_eq!(modular_data_from_json(&text).unwrap(), md);
    }

    #[test]
    fn schema_violations() {
        let md = ModularData::wzw(AlgebraSpec::new(2, 1).unwrap(), &tol()).unwrap();
        let good: serde_json::Value =
            serde_json::from_str(&modular_data_to_json(&md).unwrap()).unwrap();
        let broken = |f: &dyn Fn(&mut serde_json::Value)| {
            let mut v = good.clone();
            f(&mut v);
            modular_data_from_json(&v.to_string())
        };
        assert!(broken(&|v| v["S"][0] = serde_json::json!([[1.0, 0.0]])).is_err());
        assert!(broken(&|v| v["labels"][1] = serde_json::json!([5])).is_err());
        assert!(broken(&|v| v["labels"][1] = serde_json::json!([0])).is_err());
        assert!(broken(&|v| v["type"] = serde_json::json!("coset")).is_err());
        assert!(broken(&|v| v["extra"] = serde_json::json!(1)).is_err());
        assert!(broken(&|v| v["resolution"] = serde_json::json!([1, 1])).is_err());
        assert!(broken(&|_| {}).is_ok());
        assert!(matches!(modular_data_from_json("{"), Err(Error::Schema(_))));
    }

    #[test]
    fn diagonal_table_round_trip() {
        let table = diagonal_branching(&CosetSpec::new(3, 1, 1).unwrap(), &tol()).unwrap();
        let text = serde_json::to_string(&BranchingFile::from_table(&table)).unwrap();
        let back = parse_branching_table(&text, &tol()).unwrap();
        assert_eq!(back.exp, table.exp);
        assert_eq!(back.vacuum_mult, table.vacuum_mult);
    }

    #[test]
    fn maverick_fixture_loads() {
        let t = maverick_table(&tol()).unwrap();
        assert_eq!(t.numerator.name(), "SU(3)_2");
        assert_eq!(t.denominator.name(), "SU(2)_8");
        assert_eq!(t.exp.len(), 18);
        let names: Vec<String> = t.exp.iter().map(|&(i, a)| t.pair_name(i, a)).collect();
        for p in ["(00,0)", "(00,4)", "(00,8)", "(11,4)"] {
            assert!(names.contains(&p.to_string()), "{p}");
        }
        assert!(t
            .vacuum_mult
            .iter()
            .any(|&(j, b, _)| t.pair_name(j, b) == "(00,8)"));
    }

    #[test]
    fn branching_schema_violations() {
        let base: serde_json::Value = serde_json::from_str(MAVERICK_JSON).unwrap();
        let broken = |f: &dyn Fn(&mut serde_json::Value)| {
            let mut v = base.clone();
            f(&mut v);
            parse_branching_table(&v.to_string(), &tol())
        };
        assert!(broken(&|v| v["exp"] = serde_json::json!([])).is_err());
        assert!(matches!(
            broken(&|v| v["exp"][0][0] = serde_json::json!([3, 3])),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(broken(&|v| v["vacuum_mult"][0][2] = serde_json::json!(0)).is_err());
        assert!(broken(&|v| v["vacuum_mult"][0][2] = serde_json::json!(-1)).is_err());
        assert!(broken(&|v| v["numerator"]["type"] = serde_json::json!("coset")).is_err());
        assert!(broken(&|v| v["numerator"]["factors"] = serde_json::json!([])).is_err());
        assert!(broken(&|_| {}).is_ok());
    }
}
