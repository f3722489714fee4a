use std::fs;

use coset_mtc::fusion::verlinde_fusion;
use coset_mtc::invariants::{factorization_probe, InvariantReport};
use coset_mtc::io::{load_branching_table, modular_data_from_json, ModularDataFile};
use coset_mtc::kw::{diagonal_branching, kw_report, KwChecks};
use coset_mtc::verify::verify_modular_axioms;
use coset_mtc::{
    AlgebraSpec, CosetSpec, CosetTheory, FusionTensor, ModularData, Report, Tolerances,
};
use serde_json::{json, Value};

use crate::args::{CosetEmit, InvariantArgs, KwArgs, KwCheck, WzwEmit};
use crate::cache::Cache;
use crate::emit::{complex_cells, complex_headers, Cell, Emission, Table};
use crate::error::CliError;

/// What a command produced and whether its checks passed.
pub struct Outcome {
    pub emission: Emission,
    pub passed: bool,
}

impl Outcome {
    fn ok(emission: Emission) -> Self {
        Outcome {
            emission,
            passed: true,
        }
    }
}

pub struct Context {
    pub tol: Tolerances,
    pub cache: Option<Cache>,
}

impl Context {
    fn cache_key(&self, kind: &str, factors: &[AlgebraSpec]) -> String {
        let levels: Vec<String> = factors.iter().map(|f| f.level.to_string()).collect();
        format!(
            "{kind}/N={}/levels={}/tol={:e},{:e}",
            factors[0].rank_n,
            levels.join(","),
            self.tol.structural,
            self.tol.integer
        )
    }

    fn wzw_data(&self, spec: AlgebraSpec) -> Result<ModularData, CliError> {
        let compute = || ModularData::wzw(spec, &self.tol).map_err(CliError::from);
        match &self.cache {
            Some(c) => c.get_or_compute(&self.cache_key("wzw", &[spec]), compute),
            None => compute(),
        }
    }

    fn coset_data(&self, theory: &CosetTheory) -> Result<ModularData, CliError> {
        let compute = || theory.modular_data().map_err(CliError::from);
        match &self.cache {
            Some(c) => c.get_or_compute(&self.cache_key("coset", &theory.spec.factors()), compute),
            None => compute(),
        }
    }
}

fn label_strings(md: &ModularData) -> Vec<String> {
    md.labels.iter().map(|l| l.to_string()).collect()
}

fn pair(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

fn s_emission(md: &ModularData) -> Emission {
    let labels = label_strings(md);
    let mut headers = vec!["label".to_string()];
    headers.extend(labels.iter().flat_map(|l| complex_headers(l)));
    let mut table = Table::new(headers);
    for (i, l) in labels.iter().enumerate() {
        let mut row = vec![Cell::from(l.as_str())];
        row.extend(md.s.row(i).iter().flat_map(|z| complex_cells(*z)));
        table.push(row);
    }
    let s: Vec<Vec<Value>> =
        md.s.rows()
            .into_iter()
            .map(|r| r.iter().map(|z| pair(*z)).collect())
            .collect();
    Emission {
        json: json!({ "theory": md.name(), "labels": labels, "S": s }),
        table: Some(table),
    }
}

fn t_emission(md: &ModularData) -> Emission {
    let labels = label_strings(md);
    let mut table = Table::new(["label", "delta", "T.re", "T.im"]);
    for (i, l) in labels.iter().enumerate() {
        let [re, im] = complex_cells(md.t[i]);
        table.push(vec![l.as_str().into(), md.delta[i].into(), re, im]);
    }
    let t: Vec<Value> = md.t.iter().map(|z| pair(*z)).collect();
    Emission {
        json: json!({
            "theory": md.name(),
            "labels": labels,
            "T": t,
            "delta": md.delta,
            "c": md.central_charge,
        }),
        table: Some(table),
    }
}

fn delta_emission(md: &ModularData) -> Emission {
    let labels = label_strings(md);
    let mut table = Table::new(["label", "delta", "qdim"]);
    for (i, l) in labels.iter().enumerate() {
        table.push(vec![
            l.as_str().into(),
            md.delta[i].into(),
            md.qdims[i].into(),
        ]);
    }
    Emission {
        json: json!({
            "theory": md.name(),
            "labels": labels,
            "delta": md.delta,
            "qdims": md.qdims,
            "c": md.central_charge,
        }),
        table: Some(table),
    }
}

fn fusion_emission(md: &ModularData, fusion: &FusionTensor) -> Emission {
    let labels = label_strings(md);
    let mut table = Table::new(["a", "b", "c", "N"]);
    let mut entries = Vec::new();
    let n = md.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = fusion.get(a, b, c);
                if v != 0 {
                    entries.push(json!([a, b, c, v]));
                    table.push(vec![
                        labels[a].as_str().into(),
                        labels[b].as_str().into(),
                        labels[c].as_str().into(),
                        v.into(),
                    ]);
                }
            }
        }
    }
    Emission {
        json: json!({ "theory": md.name(), "labels": labels, "fusion": entries }),
        table: Some(table),
    }
}

fn report_table(report: &Report) -> Table {
    let mut table = Table::new(["check", "status", "deviation", "tolerance", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.as_str().into(),
            c.passed.into(),
            c.deviation.into(),
            c.tolerance.into(),
            c.detail.clone().into(),
        ]);
    }
    table
}

fn report_outcome(report: Report) -> Outcome {
    let passed = report.passed();
    let mut json = serde_json::to_value(&report).expect("reports serialize");
    json["passed"] = passed.into();
    Outcome {
        emission: Emission {
            json,
            table: Some(report_table(&report)),
        },
        passed,
    }
}

fn data_emission(md: &ModularData) -> Emission {
    Emission {
        json: serde_json::to_value(ModularDataFile::from(md)).expect("modular data serializes"),
        table: None,
    }
}

pub fn wzw(ctx: &Context, n: u32, level: u32, emit: WzwEmit) -> Result<Outcome, CliError> {
    let spec = AlgebraSpec::new(n, level)?;
    let md = ctx.wzw_data(spec)?;
    Ok(match emit {
        WzwEmit::S => Outcome::ok(s_emission(&md)),
        WzwEmit::T => Outcome::ok(t_emission(&md)),
        WzwEmit::Delta => Outcome::ok(delta_emission(&md)),
        WzwEmit::Data => Outcome::ok(data_emission(&md)),
        WzwEmit::Fusion => Outcome::ok(fusion_emission(&md, &verlinde_fusion(&md, &ctx.tol)?)),
        WzwEmit::Verify => {
            let fusion = verlinde_fusion(&md, &ctx.tol)?;
            report_outcome(verify_modular_axioms(&md, &fusion, &ctx.tol))
        }
    })
}

fn sectors_emission(theory: &CosetTheory) -> Result<Emission, CliError> {
    let sectors = theory.sectors()?;
    let mut headers: Vec<String> = [
        "index",
        "representative",
        "resolution",
        "period",
        "multiplicity",
        "qdim",
    ]
    .map(String::from)
    .to_vec();
    headers.extend(complex_headers("univalence"));
    let mut table = Table::new(headers);
    let mut rows = Vec::new();
    for (i, s) in sectors.iter().enumerate() {
        let orbit = &theory.orbits()[s.orbit];
        let rep = orbit.canonical();
        let [re, im] = complex_cells(s.univalence);
        table.push(vec![
            i.into(),
            rep.to_string().into(),
            s.resolution_index.into(),
            orbit.period.into(),
            orbit.multiplicity.into(),
            s.qdim.into(),
            re,
            im,
        ]);
        rows.push(json!({
            "label": rep.to_string(),
            "representative": [rep.lam1.dynkin(), rep.lam2.dynkin(), rep.lam.dynkin()],
            "resolution": s.resolution_index,
            "period": orbit.period,
            "multiplicity": orbit.multiplicity,
            "qdim": s.qdim,
            "univalence": pair(s.univalence),
        }));
    }
    Ok(Emission {
        json: json!({ "theory": theory.spec.to_string(), "sectors": rows }),
        table: Some(table),
    })
}

pub fn coset(
    ctx: &Context,
    n: u32,
    m1: u32,
    m2: u32,
    emit: CosetEmit,
) -> Result<Outcome, CliError> {
    let spec = CosetSpec::new(n, m1, m2)?;
    let theory = CosetTheory::new(spec, ctx.tol)?;
    Ok(match emit {
        CosetEmit::Sectors => Outcome::ok(sectors_emission(&theory)?),
        CosetEmit::SigmaTilde => report_outcome(theory.sigma_tilde_check()?),
        CosetEmit::S => Outcome::ok(s_emission(&ctx.coset_data(&theory)?)),
        CosetEmit::T => Outcome::ok(t_emission(&ctx.coset_data(&theory)?)),
        CosetEmit::Data => Outcome::ok(data_emission(&ctx.coset_data(&theory)?)),
        CosetEmit::Fusion => {
            let md = ctx.coset_data(&theory)?;
            Outcome::ok(fusion_emission(&md, &verlinde_fusion(&md, &ctx.tol)?))
        }
        CosetEmit::Verify => {
            let md = ctx.coset_data(&theory)?;
            report_outcome(theory.verify_modular_data(&md)?)
        }
    })
}

pub fn kw(ctx: &Context, args: &KwArgs) -> Result<Outcome, CliError> {
    let table = match (&args.diagonal, &args.branching) {
        (Some(d), _) => diagonal_branching(&CosetSpec::new(d[0], d[1], d[2])?, &ctx.tol)?,
        (None, Some(path)) => load_branching_table(path, &ctx.tol)?,
        (None, None) => {
            return Err(CliError::Usage(
                "--diagonal or --branching is required".into(),
            ))
        }
    };
    let checks = KwChecks {
        kwc: args.checks.contains(&KwCheck::Kwc),
        kwh: args.checks.contains(&KwCheck::Kwh),
        condition2: args.checks.contains(&KwCheck::Cond2),
        prop32: args.checks.contains(&KwCheck::Prop32),
    };
    let report = kw_report(&table, checks, &ctx.tol)?;
    let summary = report.to_report();
    let passed = summary.passed();

    let mut t = Table::new(["item", "pair", "against", "value", "status"]);
    if let Some(kwc) = &report.kwc {
        for b in &kwc.b_values {
            t.push(vec![
                "b".into(),
                b.pair.as_str().into(),
                Cell::Empty,
                b.value.into(),
                (b.value > ctx.tol.structural).into(),
            ]);
        }
    }
    if let Some(kwh) = &report.kwh {
        for v in &kwh.violations {
            t.push(vec![
                "kwh violation".into(),
                v.exp_pair.as_str().into(),
                v.vacuum_pair.as_str().into(),
                v.product.into(),
                false.into(),
            ]);
        }
    }
    if let Some(c2) = &report.condition2 {
        for w in &c2.witnesses {
            t.push(vec![
                "cond2 witness".into(),
                w.as_str().into(),
                Cell::Empty,
                Cell::Empty,
                false.into(),
            ]);
        }
    }
    for c in &summary.checks {
        t.push(vec![
            "check".into(),
            c.name.as_str().into(),
            Cell::Empty,
            c.deviation.into(),
            c.passed.into(),
        ]);
    }
    let mut json = serde_json::to_value(&report).expect("reports serialize");
    json["passed"] = passed.into();
    Ok(Outcome {
        emission: Emission {
            json,
            table: Some(t),
        },
        passed,
    })
}

pub fn invariant(ctx: &Context, args: &InvariantArgs) -> Result<Outcome, CliError> {
    if args.probe && args.coset.is_none() {
        return Err(CliError::Usage("--probe needs --coset".into()));
    }
    let report = if let Some(c) = &args.coset {
        let spec = CosetSpec::new(c[0], c[1], c[2])?;
        if args.probe {
            factorization_probe(&spec, args.p, &ctx.tol)?
        } else {
            let theory = CosetTheory::new(spec, ctx.tol)?;
            InvariantReport::plain(&ctx.coset_data(&theory)?, args.p, &ctx.tol)?
        }
    } else if let Some(w) = &args.wzw {
        let md = ctx.wzw_data(AlgebraSpec::new(w[0], w[1])?)?;
        InvariantReport::plain(&md, args.p, &ctx.tol)?
    } else if let Some(path) = &args.data {
        let text = fs::read_to_string(path).map_err(coset_mtc::Error::from)?;
        InvariantReport::plain(&modular_data_from_json(&text)?, args.p, &ctx.tol)?
    } else {
        return Err(CliError::Usage("a theory selector is required".into()));
    };

    let table = match &report.probe {
        Some(orientations) => {
            let mut headers = vec!["p".to_string()];
            for name in ["numerator", "denominator", "coset", "ratio"] {
                headers.extend(complex_headers(name));
            }
            headers.extend(["power".to_string(), "residual".to_string()]);
            let mut t = Table::new(headers);
            for o in orientations {
                let mut row = vec![Cell::from(o.p)];
                for z in [o.numerator, o.denominator, o.coset] {
                    row.extend(complex_cells(z));
                }
                match o.ratio {
                    Some(r) => row.extend(complex_cells(r)),
                    None => row.extend([Cell::Empty, Cell::Empty]),
                }
                row.push(o.power.into());
                row.push(o.residual.into());
                t.push(row);
            }
            t
        }
        None => {
            let mut t = Table::new(["theory", "p", "value.re", "value.im"]);
            let [re, im] = complex_cells(report.value);
            t.push(vec![report.theory.as_str().into(), report.p.into(), re, im]);
            t
        }
    };
    Ok(Outcome {
        passed: report.is_finite(),
        emission: Emission {
            json: serde_json::to_value(&report).expect("reports serialize"),
            table: Some(table),
        },
    })
}
