//! Analysis reports and trajectory tables.

use std::fmt::Write as _;

use crate::algebra::NilpotencyClass;
use crate::error::{Error, Result};
use crate::flow::FlowTrajectory;
use crate::metric::MetricLieAlgebra;
use crate::soliton::{self, GradientReport, MilnorFrame, SolitonCertificate, Verdict};
use crate::tol::Tolerances;
use crate::two_step::{self, EinsteinScale};
use crate::Matrix;

#[derive(Debug, Clone)]
pub struct TwoStepSummary {
    pub center_dim: usize,
    pub htype: bool,
    pub nonsingular: bool,
    pub ricci_kernel_dim: usize,
}

#[derive(Debug, Clone)]
pub struct ExtensionSummary {
    pub scale: EinsteinScale,
    pub lambda_einstein: f64,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub name: String,
    pub dim: usize,
    pub jacobi_residual: f64,
    pub unimodular: bool,
    pub solvable: bool,
    pub lower_central_series: Vec<usize>,
    pub nilpotency: NilpotencyClass,
    pub ricci_spectrum: Vec<f64>,
    pub scalar: f64,
    pub flat: bool,
    pub nilsoliton: Option<SolitonCertificate>,
    pub left_invariant: SolitonCertificate,
    pub gradient: GradientReport,
    pub milnor: Option<MilnorFrame>,
    pub two_step: Option<TwoStepSummary>,
    pub extension: Option<ExtensionSummary>,
    pub tol: Tolerances,
}

impl AnalysisReport {
    /// Solvable and not flat: every left-invariant soliton structure must be expanding.
    pub fn expanding_forced(&self) -> bool {
        self.solvable && !self.flat
    }
}

pub fn analyze(name: &str, mla: &MetricLieAlgebra, tol: &Tolerances) -> Result<AnalysisReport> {
    mla.alg().validate(tol)?;
    let alg = mla.alg();
    let curv = mla.curvature();
    let (lcs, nilpotency) = alg.lower_central_series(tol);
    let nilsoliton = match nilpotency {
        NilpotencyClass::Nilpotent(_) => Some(soliton::solve_nilsoliton_with(mla, &curv, tol)?),
        NilpotencyClass::NotNilpotent => None,
    };
    let unimodular = alg.is_unimodular(tol);
    let milnor = (mla.dim() == 3 && !unimodular)
        .then(|| soliton::milnor_frame(mla, tol))
        .transpose()?;
    let two_step = if nilpotency == NilpotencyClass::Nilpotent(2) {
        let dec = two_step::decompose_two_step(mla, tol)?;
        Some(TwoStepSummary {
            center_dim: dec.center_dim(),
            htype: two_step::is_htype(&dec, tol),
            nonsingular: two_step::is_nonsingular(&dec, tol),
            ricci_kernel_dim: two_step::ricci_kernel_checked(mla, &dec, tol)?.ncols(),
        })
    } else {
        None
    };
    let extension = match &nilsoliton {
        Some(cert) if cert.verdict == Verdict::Nilsoliton => {
            let d = two_step::metric_symmetric_part(cert.derivation.as_ref().expect("nilsoliton has D"), mla.metric());
            let scale = two_step::find_einstein_scale(mla, &d, tol)?;
            let ext = two_step::solvable_extension(mla, &d, scale.scale, tol)?;
            Some(ExtensionSummary {
                scale,
                lambda_einstein: two_step::is_einstein(&ext.extended, tol).lambda_einstein,
            })
        }
        _ => None,
    };
    Ok(AnalysisReport {
        name: name.to_string(),
        dim: mla.dim(),
        jacobi_residual: alg.check_jacobi(),
        unimodular,
        solvable: alg.is_solvable(tol),
        lower_central_series: lcs,
        nilpotency,
        scalar: curv.scalar,
        flat: curv.is_flat(tol),
        left_invariant: soliton::solve_left_invariant_field_with(mla, &curv, tol),
        gradient: soliton::gradient_obstruction_with(mla, &curv, tol),
        ricci_spectrum: curv.ricci_spectrum,
        nilsoliton,
        milnor,
        two_step,
        extension,
        tol: *tol,
    })
}

/// Shortest round-trip form, normalising `-0` to `0`; exponent notation
/// outside `[1e-4, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_number(x)).collect::<Vec<_>>().join(" ")
}

fn diag(m: &Matrix) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, i)]).collect()
}

/// `(key, value, tolerance)` rows shared by the text and CSV renderers.
fn rows(r: &AnalysisReport) -> Vec<(String, String, String)> {
    let t = &r.tol;
    let (alg, rank, sol) = (format_number(t.alg), format_number(t.rank), format_number(t.sol));
    let mut out: Vec<(String, String, String)> = vec![
        ("name".into(), r.name.clone(), String::new()),
        ("dim".into(), r.dim.to_string(), String::new()),
        ("jacobi_residual".into(), format_number(r.jacobi_residual), alg.clone()),
        ("unimodular".into(), r.unimodular.to_string(), alg.clone()),
        ("solvable".into(), r.solvable.to_string(), rank.clone()),
        (
            "lower_central_series".into(),
            r.lower_central_series
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            rank.clone(),
        ),
        ("nilpotency_class".into(), r.nilpotency.to_string(), rank.clone()),
        ("ricci_spectrum".into(), list(&r.ricci_spectrum), alg.clone()),
        ("scalar".into(), format_number(r.scalar), alg.clone()),
        ("flat".into(), r.flat.to_string(), alg.clone()),
        ("expanding_forced".into(), r.expanding_forced().to_string(), alg.clone()),
    ];
    if let Some(c) = &r.nilsoliton {
        out.push(("nilsoliton.verdict".into(), c.verdict.to_string(), sol.clone()));
        out.push(("nilsoliton.residual".into(), format_number(c.residual), sol.clone()));
        if let Some(v) = c.c {
            out.push(("nilsoliton.c".into(), format_number(v), sol.clone()));
        }
        if let Some(d) = &c.derivation {
            out.push(("nilsoliton.derivation_diag".into(), list(&diag(d)), sol.clone()));
        }
        if let Some(l) = c.lambda {
            out.push(("nilsoliton.lambda".into(), format_number(l), rank.clone()));
        }
        if let Some(k) = c.soliton_type {
            out.push(("nilsoliton.type".into(), k.to_string(), rank.clone()));
        }
        out.push((
            "nilsoliton.sign_consistent".into(),
            c.sign_consistent.to_string(),
            rank.clone(),
        ));
    }
    let li = &r.left_invariant;
    out.push(("left_invariant.verdict".into(), li.verdict.to_string(), sol.clone()));
    out.push((
        "left_invariant.residual".into(),
        format_number(li.residual),
        sol.clone(),
    ));
    if let Some(l) = li.lambda {
        out.push(("left_invariant.lambda".into(), format_number(l), sol.clone()));
    }
    if let Some(x) = &li.field {
        out.push(("left_invariant.field".into(), list(x.as_slice()), sol.clone()));
    }
    let g = &r.gradient;
    out.push((
        "gradient.ricci_nondegenerate".into(),
        g.ricci_nondegenerate.to_string(),
        rank.clone(),
    ));
    out.push((
        "gradient.left_invariant_flat_factor".into(),
        g.flat_factor_dim.to_string(),
        rank.clone(),
    ));
    out.push(("gradient.verdict".into(), g.verdict.to_string(), rank.clone()));
    if let Some(m) = &r.milnor {
        out.push((
            "milnor.alpha_beta_gamma_delta".into(),
            list(&[m.alpha, m.beta, m.gamma, m.delta]),
            alg.clone(),
        ));
    }
    if let Some(ts) = &r.two_step {
        out.push(("two_step.center_dim".into(), ts.center_dim.to_string(), rank.clone()));
        out.push(("two_step.htype".into(), ts.htype.to_string(), alg.clone()));
        out.push(("two_step.nonsingular".into(), ts.nonsingular.to_string(), rank.clone()));
        out.push((
            "two_step.ricci_kernel_dim".into(),
            ts.ricci_kernel_dim.to_string(),
            rank.clone(),
        ));
    }
    if let Some(e) = &r.extension {
        out.push(("extension.scale".into(), format_number(e.scale.scale), sol.clone()));
        out.push((
            "extension.einstein_residual".into(),
            format_number(e.scale.residual),
            sol.clone(),
        ));
        out.push(("extension.einstein".into(), e.scale.found.to_string(), sol.clone()));
        out.push((
            "extension.lambda_einstein".into(),
            format_number(e.lambda_einstein),
            sol.clone(),
        ));
    }
    out
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    for (k, v, t) in rows(r) {
        if t.is_empty() {
            writeln!(out, "{k:<38} {v}").unwrap();
        } else {
            writeln!(out, "{k:<38} {v}  (tol {t})").unwrap();
        }
    }
    out
}

pub fn render_csv(r: &AnalysisReport) -> String {
    let mut out = String::from("key,value,tolerance\n");
    for (k, v, t) in rows(r) {
        writeln!(out, "{k},{v},{t}").unwrap();
    }
    out
}

/// Column names: `t`, upper-triangle `g_ij` (row-major, 1-based), `R`, `ricci_norm_sq`, `V`, `rv_invariant`.
pub fn trajectory_header(dim: usize) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for i in 0..dim {
        for j in i..dim {
            cols.push(format!("g_{}{}", i + 1, j + 1));
        }
    }
    cols.extend(["R", "ricci_norm_sq", "V", "rv_invariant"].map(String::from));
    cols
}

/// 17 significant digits, enough to round-trip any `f64`.
fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_to_csv(traj: &FlowTrajectory) -> String {
    let n = traj.dim();
    let mut out = trajectory_header(n).join(",");
    out.push('\n');
    for k in 0..traj.len() {
        let mut fields = vec![sci(traj.times[k])];
        for i in 0..n {
            for j in i..n {
                fields.push(sci(traj.metrics[k][(i, j)]));
            }
        }
        fields.push(sci(traj.scalars[k]));
        fields.push(sci(traj.ricci_norms[k]));
        fields.push(sci(traj.volumes[k]));
        fields.push(sci(traj.rv_invariant[k]));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Rows of a trajectory table as read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub times: Vec<f64>,
    pub metrics: Vec<Matrix>,
    pub scalars: Vec<f64>,
    pub ricci_norms: Vec<f64>,
    pub volumes: Vec<f64>,
    pub rv_invariant: Vec<f64>,
}

pub fn trajectory_from_csv(text: &str) -> Result<TrajectoryTable> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty table".into(),
        })?
        .split(',')
        .collect();
    let tri = header.len().checked_sub(5).ok_or_else(|| Error::Parse {
        line: 1,
        msg: "too few columns".into(),
    })?;
    let dim = (0..=tri).find(|n| n * (n + 1) / 2 == tri).ok_or_else(|| Error::Parse {
        line: 1,
        msg: format!("{tri} metric columns is not a triangular number"),
    })?;
    if header != trajectory_header(dim) {
        return Err(Error::Parse {
            line: 1,
            msg: "unexpected header".into(),
        });
    }
    let mut table = TrajectoryTable {
        times: Vec::new(),
        metrics: Vec::new(),
        scalars: Vec::new(),
        ricci_norms: Vec::new(),
        volumes: Vec::new(),
        rv_invariant: Vec::new(),
    };
    for (idx, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|s| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 2,
                    msg: format!("'{s}' is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != header.len() {
            return Err(Error::Parse {
                line: idx + 2,
                msg: "wrong number of fields".into(),
            });
        }
        let mut g = Matrix::zeros(dim, dim);
        let mut p = 1;
        for i in 0..dim {
            for j in i..dim {
                g[(i, j)] = vals[p];
                g[(j, i)] = vals[p];
                p += 1;
            }
        }
        table.times.push(vals[0]);
        table.metrics.push(g);
        table.scalars.push(vals[p]);
        table.ricci_norms.push(vals[p + 1]);
        table.volumes.push(vals[p + 2]);
        table.rv_invariant.push(vals[p + 3]);
    }
    Ok(table)
}
