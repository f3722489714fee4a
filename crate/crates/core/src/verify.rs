//! Modular-category axiom checks on a finished [`ModularData`].

use ndarray::Array2;
use num_complex::Complex64;

use crate::fusion::FusionTensor;
use crate::report::{Check, Report};
use crate::tolerance::Tolerances;
use crate::wzw::{unitarity_deviation, ModularData};

/// Runs every relation and returns the deviations.
///
/// Relations: `SS† = I`, `S = Sᵀ`, `|T| = 1`, `TSTST = S`, `S² = C`,
/// `T_λ = T_{λ*}`, quantum dimensions `d_1 = 1`, `d >= 1`, the fusion ring
/// axioms, and `Y_{λμ} = Σ_ν N_{λμ}^ν (ω_λ ω_μ / ω_ν) d_ν = S_{λμ} / S_{11}`.
pub fn verify_modular_axioms(md: &ModularData, fusion: &FusionTensor, tol: &Tolerances) -> Report {
    let mut report = Report::new(format!("modular axioms for {}", md.name()));
    let eps = tol.structural;
    let n = md.len();
    let s = &md.s;

    report.push(Check::within("S unitary", unitarity_deviation(s), eps));
    report.push(Check::within(
        "S symmetric",
        max_abs_diff(s, &s.t().to_owned()),
        eps,
    ));

    let t_dev =
        md.t.iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);
    report.push(Check::within("T unitary", t_dev, eps));

    // T S T S T with T diagonal.
    let st = scale_cols(s, &md.t);
    let tst = scale_rows(&st, &md.t);
    let tstst = scale_cols(&tst.dot(s), &md.t);
    report.push(Check::within("TSTST = S", max_abs_diff(&tstst, s), eps));

    let involution = (0..n).all(|i| md.conjugation.get(md.conjugation[i]) == Some(&i));
    report.push(Check::flag("C is an involution", involution));
    let c = Array2::from_shape_fn((n, n), |(i, j)| {
        if md.conjugation[i] == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    report.push(Check::within("S^2 = C", max_abs_diff(&s.dot(s), &c), eps));

    let tc_dev = (0..n)
        .map(|i| (md.t[i] - md.t[md.conjugation[i]]).norm())
        .fold(0.0, f64::max);
    report.push(Check::within("TC = CT = T", tc_dev, eps));

    let q_dev = md
        .qdims
        .iter()
        .skip(1)
        .map(|d| (1.0 - d).max(0.0))
        .fold((md.qdims[0] - 1.0).abs(), f64::max);
    report.push(Check::within("qdims d_1 = 1, d >= 1", q_dev, eps));

    let ring = fusion.check_ring_axioms(&md.conjugation);
    let mut ring_check = Check::flag("fusion ring axioms", ring.is_ok());
    if let Err(msg) = ring {
        ring_check = ring_check.with_detail(msg);
    }
    report.push(ring_check);

    report.push(Check::within(
        "Y = S/S_11",
        y_identity_deviation(md, fusion),
        eps,
    ));
    report
}

/// `max |Y - S/S_11|` with `Y` rebuilt from fusion, spins and dimensions.
pub fn y_identity_deviation(md: &ModularData, fusion: &FusionTensor) -> f64 {
    let n = md.len();
    let omega = md.univalences();
    let weight: Vec<Complex64> = (0..n).map(|v| omega[v].conj() * md.qdims[v]).collect();
    let s00 = md.s[[0, 0]];
    let mut dev: f64 = 0.0;
    for l in 0..n {
        for m in 0..n {
            let row = fusion.matrix(l);
            let inner: Complex64 = row[m * n..(m + 1) * n]
                .iter()
                .zip(&weight)
                .filter(|(k, _)| **k != 0)
                .map(|(k, w)| w * *k as f64)
                .sum();
            let y = omega[l] * omega[m] * inner;
            dev = dev.max((y - md.s[[l, m]] / s00).norm());
        }
    }
    dev
}

pub(crate) fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn scale_cols(m: &Array2<Complex64>, d: &[Complex64]) -> Array2<Complex64> {
    let mut out = m.clone();
    for mut row in out.rows_mut() {
        for (x, s) in row.iter_mut().zip(d) {
            *x *= s;
        }
    }
    out
}

fn scale_rows(m: &Array2<Complex64>, d: &[Complex64]) -> Array2<Complex64> {
    let mut out = m.clone();
    for (mut row, s) in out.rows_mut().into_iter().zip(d) {
        row.mapv_inplace(|x| x * s);
    }
    out
}
