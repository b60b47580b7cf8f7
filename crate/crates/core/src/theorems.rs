//! Executable checks of the structural results on left-invariant solitons,
//! one row per (statement, catalog entry) pair.

use crate::catalog::CatalogEntry;
use crate::flow;
use crate::metric::{CurvaturePackage, MetricLieAlgebra};
use crate::par;
use crate::soliton::{self, GradientVerdict, SolitonCertificate, SolitonType, Verdict};
use crate::tol::Tolerances;
use crate::two_step;
use crate::Vector;

/// Source of the Ricci data fed to the soliton solvers. `WrongSign` negates
/// it and exists to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RicciOracle {
    #[default]
    Standard,
    WrongSign,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub oracle: RicciOracle,
    pub flow_t_end: f64,
    pub flow_dt: f64,
    /// Bound on `|d(R V^{2/n})/dt|` along Einstein trajectories.
    pub einstein_slope_bound: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            oracle: RicciOracle::Standard,
            flow_t_end: 0.2,
            flow_dt: flow::DEFAULT_DT,
            einstein_slope_bound: 1e-6,
        }
    }
}

pub const DIVERGENCE_FREE: &str = "unimodular-divergence-free";
pub const NONSOLVABLE_UNIMODULAR: &str = "left-invariant-nonsolvability-unimodular";
pub const NONSOLVABLE_3D: &str = "left-invariant-nonsolvability-3d-nonunimodular";
pub const SOLVABLE_SIGN: &str = "solvable-flat-or-negative-scalar";
pub const SOLVABLE_EXPANDING: &str = "solvable-soliton-expanding";
pub const SIGN_RULE: &str = "no-steady-soliton-sign-rule";
pub const NONSINGULAR_NOT_GRADIENT: &str = "nonsingular-not-gradient";
pub const HTYPE_EXPANDING: &str = "htype-expanding-non-gradient";
pub const RV_MONOTONE: &str = "rv-invariant-monotone";
pub const SCALAR_MONOTONE: &str = "scalar-strictly-monotone";

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRow {
    pub theorem: &'static str,
    pub instance: String,
    pub passed: bool,
    pub detail: String,
}

fn row(theorem: &'static str, instance: &str, passed: bool, detail: String) -> TheoremRow {
    TheoremRow {
        theorem,
        instance: instance.to_string(),
        passed,
        detail,
    }
}

fn curvature_for(mla: &MetricLieAlgebra, oracle: RicciOracle) -> CurvaturePackage {
    let mut curv = mla.curvature();
    if oracle == RicciOracle::WrongSign {
        curv.ricci_form = -curv.ricci_form;
        curv.ricci_endo = -curv.ricci_endo;
        curv.scalar = -curv.scalar;
        curv.ricci_spectrum = curv.ricci_spectrum.iter().rev().map(|x| -x).collect();
    }
    curv
}

fn nontrivial(cert: &SolitonCertificate) -> bool {
    cert.verdict.is_feasible() && cert.soliton_type != Some(SolitonType::Trivial)
}

fn check_entry(entry: &CatalogEntry, opts: &SuiteOptions, tol: &Tolerances) -> Vec<TheoremRow> {
    let name = entry.name.as_str();
    let mla = &entry.algebra;
    let alg = mla.alg();
    let n = mla.dim();
    let curv = curvature_for(mla, opts.oracle);
    let unimodular = alg.is_unimodular(tol);
    let solvable = alg.is_solvable(tol);
    let mut rows = Vec::new();

    let left = soliton::solve_left_invariant_field_with(mla, &curv, tol);
    let nil = soliton::solve_nilsoliton_with(mla, &curv, tol).ok();
    let certs: Vec<&SolitonCertificate> = std::iter::once(&left).chain(nil.iter()).collect();

    if unimodular {
        let max_div = (0..n)
            .map(|i| {
                let e = Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
                mla.divergence_left_invariant(&e).abs()
            })
            .fold(0.0, f64::max);
        rows.push(row(
            DIVERGENCE_FREE,
            name,
            max_div <= tol.alg,
            format!("max |div e_i| = {max_div:e}"),
        ));
        let ok = matches!(left.verdict, Verdict::Infeasible | Verdict::Einstein);
        rows.push(row(
            NONSOLVABLE_UNIMODULAR,
            name,
            ok,
            format!("verdict {} residual {:e}", left.verdict, left.residual),
        ));
    } else if n == 3 {
        let ok = matches!(left.verdict, Verdict::Infeasible | Verdict::Einstein);
        rows.push(row(
            NONSOLVABLE_3D,
            name,
            ok,
            format!("verdict {} residual {:e}", left.verdict, left.residual),
        ));
    }

    if solvable {
        let flat = curv.is_flat(tol);
        rows.push(row(
            SOLVABLE_SIGN,
            name,
            flat || curv.scalar < -tol.alg,
            format!("scalar {:e}, flat {flat}", curv.scalar),
        ));
        let found: Vec<_> = certs.iter().filter(|c| nontrivial(c)).collect();
        if !found.is_empty() {
            let ok = found.iter().all(|c| c.soliton_type == Some(SolitonType::Expanding));
            let kinds: Vec<String> = found
                .iter()
                .map(|c| format!("{}:{}", c.verdict, c.soliton_type.map_or("-", |k| k.as_str())))
                .collect();
            rows.push(row(SOLVABLE_EXPANDING, name, ok, kinds.join(" ")));
        }
    }

    let feasible: Vec<_> = certs.iter().filter(|c| c.verdict.is_feasible()).collect();
    if !feasible.is_empty() {
        let ok = feasible.iter().all(|c| c.sign_consistent);
        let detail: Vec<String> = feasible
            .iter()
            .map(|c| {
                format!(
                    "{}: lambda {:e} R {:e}",
                    c.verdict,
                    c.lambda.unwrap_or(f64::NAN),
                    c.scalar
                )
            })
            .collect();
        rows.push(row(SIGN_RULE, name, ok, detail.join("; ")));
    }

    if let Ok(dec) = two_step::decompose_two_step(mla, tol) {
        let nonsingular = two_step::is_nonsingular(&dec, tol);
        let htype = two_step::is_htype(&dec, tol);
        let gradient = soliton::gradient_obstruction_with(mla, &curv, tol);
        if nonsingular {
            let kernel = two_step::ricci_kernel_two_step(&dec, tol).ncols();
            rows.push(row(
                NONSINGULAR_NOT_GRADIENT,
                name,
                kernel == 0 && gradient.verdict == GradientVerdict::NotGradient,
                format!("ricci kernel dim {kernel}, gradient {}", gradient.verdict),
            ));
        }
        if htype {
            let expanding = nil
                .as_ref()
                .is_some_and(|c| c.verdict == Verdict::Nilsoliton && c.soliton_type == Some(SolitonType::Expanding));
            rows.push(row(
                HTYPE_EXPANDING,
                name,
                nonsingular && expanding && gradient.verdict == GradientVerdict::NotGradient,
                format!(
                    "nonsingular {nonsingular}, nilsoliton {}, gradient {}",
                    nil.as_ref()
                        .map(|c| format!("{}/{}", c.verdict, c.soliton_type.map_or("-", |k| k.as_str())))
                        .unwrap_or_else(|| "none".into()),
                    gradient.verdict
                ),
            ));
        }
    }

    match flow::integrate_flow(mla, opts.flow_t_end, opts.flow_dt, tol) {
        Ok(traj) if traj.breakdown.is_none() => {
            let rv = flow::verify_rv_monotonicity(&traj, tol);
            let einstein = traj.traceless_norms[0].sqrt() <= tol.sol;
            let ok = if einstein {
                rv.max_abs_slope <= opts.einstein_slope_bound
            } else {
                rv.min_slope > 0.0 && rv.matches
            };
            rows.push(row(
                RV_MONOTONE,
                name,
                ok,
                format!(
                    "einstein {einstein}, min slope {:e}, max |slope| {:e}, rel mismatch {:e}",
                    rv.min_slope, rv.max_abs_slope, rv.max_rel_mismatch
                ),
            ));
            if !einstein {
                let strict = traj.scalars.windows(2).all(|r| r[1] > r[0]);
                rows.push(row(
                    SCALAR_MONOTONE,
                    name,
                    strict,
                    format!("R from {:e} to {:e}", traj.scalars[0], traj.scalars[traj.len() - 1]),
                ));
            }
        }
        Ok(traj) => rows.push(row(
            RV_MONOTONE,
            name,
            false,
            format!("flow broke down at t = {:?}", traj.breakdown),
        )),
        Err(e) => rows.push(row(RV_MONOTONE, name, false, e.to_string())),
    }
    rows
}

/// Runs every applicable check on every entry. Entries are evaluated
/// concurrently; rows come back in catalog order.
pub fn run_suite(entries: &[CatalogEntry], opts: &SuiteOptions, tol: &Tolerances) -> Vec<TheoremRow> {
    par::map(entries, |e| check_entry(e, opts, tol))
        .into_iter()
        .flatten()
        .collect()
}

pub fn all_passed(rows: &[TheoremRow]) -> bool {
    rows.iter().all(|r| r.passed)
}
