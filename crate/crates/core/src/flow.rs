//! Homogeneous Ricci flow `dg/dt = -2 Ric(g)` as an ODE on the metric matrix,
//! with the structure constants held fixed. Integrated with classical RK4.

use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::MetricLieAlgebra;
use crate::par;
use crate::tol::Tolerances;
use crate::Matrix;

pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub initial: MetricLieAlgebra,
    pub times: Vec<f64>,
    pub metrics: Vec<Matrix>,
    pub scalars: Vec<f64>,
    pub ricci_norms: Vec<f64>,
    /// `|Ric - (R/n) g|^2`.
    pub traceless_norms: Vec<f64>,
    /// `sqrt(det g)` in the input basis.
    pub volumes: Vec<f64>,
    /// `R V^{2/n}`.
    pub rv_invariant: Vec<f64>,
    /// Ricci eigenvalues at each time, ascending.
    pub ricci_spectra: Vec<Vec<f64>>,
    /// Time at which the metric stopped being positive definite, if it did.
    pub breakdown: Option<f64>,
}

impl FlowTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    fn empty(initial: MetricLieAlgebra) -> Self {
        Self {
            initial,
            times: Vec::new(),
            metrics: Vec::new(),
            scalars: Vec::new(),
            ricci_norms: Vec::new(),
            traceless_norms: Vec::new(),
            volumes: Vec::new(),
            rv_invariant: Vec::new(),
            ricci_spectra: Vec::new(),
            breakdown: None,
        }
    }

    fn record(&mut self, t: f64, mla: &MetricLieAlgebra) {
        let curv = mla.curvature();
        let n = mla.dim() as f64;
        let volume = mla.metric().determinant().sqrt();
        self.times.push(t);
        self.metrics.push(mla.metric().clone());
        self.scalars.push(curv.scalar);
        self.ricci_norms.push(curv.ricci_norm_sq);
        self.traceless_norms.push(curv.traceless_ricci_norm_sq());
        self.volumes.push(volume);
        self.rv_invariant.push(curv.scalar * volume.powf(2.0 / n));
        self.ricci_spectra.push(curv.ricci_spectrum);
    }
}

fn ricci_velocity(base: &MetricLieAlgebra, g: &Matrix, tol: &Tolerances) -> Option<Matrix> {
    if g.iter().any(|x| !x.is_finite()) || linalg::sym_eigenvalues(g)[0] < tol.rank {
        return None;
    }
    let mla = base.with_metric(g.clone()).ok()?;
    Some(mla.curvature().ricci_form * -2.0)
}

/// Integrates the flow from `mla0` to `t_end` (negative for the backward
/// flow) with steps of size at most `dt`.
pub fn integrate_flow(mla0: &MetricLieAlgebra, t_end: f64, dt: f64, tol: &Tolerances) -> Result<FlowTrajectory> {
    if dt.is_nan() || dt <= 0.0 || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    if t_end == 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("end time {t_end} must be nonzero")));
    }
    let steps = ((t_end.abs() / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut traj = FlowTrajectory::empty(mla0.clone());
    traj.record(0.0, mla0);
    let mut g = mla0.metric().clone();
    for step in 0..steps {
        let t = h * step as f64;
        let next = (|| {
            let k1 = ricci_velocity(mla0, &g, tol)?;
            let k2 = ricci_velocity(mla0, &(&g + &k1 * (0.5 * h)), tol)?;
            let k3 = ricci_velocity(mla0, &(&g + &k2 * (0.5 * h)), tol)?;
            let k4 = ricci_velocity(mla0, &(&g + &k3 * h), tol)?;
            let g_next = &g + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let g_next = linalg::symmetrize(&g_next);
            (linalg::sym_eigenvalues(&g_next)[0] >= tol.rank).then_some(g_next)
        })();
        match next.and_then(|g_next| mla0.with_metric(g_next).ok()) {
            Some(mla) => {
                let t_next = if step + 1 == steps {
                    t_end
                } else {
                    h * (step + 1) as f64
                };
                traj.record(t_next, &mla);
                g = mla.metric().clone();
            }
            None => {
                traj.breakdown = Some(t);
                break;
            }
        }
    }
    Ok(traj)
}

/// Independent trajectories evaluated with [`par::map`]; output order follows input order.
pub fn integrate_many(jobs: &[(MetricLieAlgebra, f64, f64)], tol: &Tolerances) -> Vec<Result<FlowTrajectory>> {
    par::map(jobs, |(mla, t_end, dt)| integrate_flow(mla, *t_end, *dt, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolitonEvolution {
    /// Max over stored times of `|R(t)(1 + 2 lambda t)/R0 - 1|`.
    Deviation(f64),
    /// `R0 = 0`; the closed form carries no information. Holds `max |dR/dt|`.
    Degenerate { max_abs_dr_dt: f64 },
}

pub fn verify_soliton_evolution(traj: &FlowTrajectory, lambda: f64, tol: &Tolerances) -> SolitonEvolution {
    let r0 = traj.scalars[0];
    if r0.abs() <= tol.rank {
        let max_abs_dr_dt = traj
            .scalars
            .windows(2)
            .zip(traj.times.windows(2))
            .map(|(r, t)| ((r[1] - r[0]) / (t[1] - t[0])).abs())
            .fold(0.0, f64::max);
        return SolitonEvolution::Degenerate { max_abs_dr_dt };
    }
    let dev = traj
        .times
        .iter()
        .zip(&traj.scalars)
        .map(|(&t, &r)| (r * (1.0 + 2.0 * lambda * t) / r0 - 1.0).abs())
        .fold(0.0, f64::max);
    SolitonEvolution::Deviation(dev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatLaw {
    /// Max `|dR/dt - 2|Ric|^2|` with `dR/dt` from central differences.
    pub max_residual: f64,
    /// `R` never decreases as `t` increases.
    pub nondecreasing: bool,
}

/// Central finite-difference derivative of `values` on the uniform grid
/// `times`, fourth-order where the five-point stencil fits and second-order
/// otherwise. Endpoints are skipped.
fn central_derivative(times: &[f64], values: &[f64]) -> Vec<(usize, f64)> {
    let len = values.len();
    if len < 3 {
        return Vec::new();
    }
    let h = (times[len - 1] - times[0]) / (len - 1) as f64;
    (1..len - 1)
        .map(|k| {
            let d = if k >= 2 && k + 2 < len {
                (-values[k + 2] + 8.0 * values[k + 1] - 8.0 * values[k - 1] + values[k - 2]) / (12.0 * h)
            } else {
                (values[k + 1] - values[k - 1]) / (2.0 * h)
            };
            (k, d)
        })
        .collect()
}

/// Interior points where the five-point stencil applies, or all interior
/// points for short trajectories.
fn stencil_points(times: &[f64], values: &[f64]) -> Vec<(usize, f64)> {
    let d = central_derivative(times, values);
    if values.len() >= 5 {
        d.into_iter().filter(|&(k, _)| k >= 2 && k + 2 < values.len()).collect()
    } else {
        d
    }
}

pub fn verify_heat_law(traj: &FlowTrajectory) -> HeatLaw {
    let max_residual = stencil_points(&traj.times, &traj.scalars)
        .into_iter()
        .map(|(k, d)| (d - 2.0 * traj.ricci_norms[k]).abs())
        .fold(0.0, f64::max);
    let nondecreasing = traj.scalars.windows(2).zip(traj.times.windows(2)).all(|(r, t)| {
        let scale = r[0].abs().max(r[1].abs()).max(1.0);
        (r[1] - r[0]) * (t[1] - t[0]).signum() >= -1e-13 * scale
    });
    HeatLaw {
        max_residual,
        nondecreasing,
    }
}

/// Max relative deviation of `d/dt det g` from `-2 R det g`.
pub fn verify_volume_law(traj: &FlowTrajectory) -> f64 {
    let dets: Vec<f64> = traj.volumes.iter().map(|v| v * v).collect();
    stencil_points(&traj.times, &dets)
        .into_iter()
        .map(|(k, d)| (d + 2.0 * traj.scalars[k] * dets[k]).abs() / dets[k].abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvMonotonicity {
    /// Minimum over steps of `Δ(R V^{2/n}) / Δt`.
    pub min_slope: f64,
    /// Maximum of `|Δ(R V^{2/n}) / Δt|`.
    pub max_abs_slope: f64,
    /// Max `|slope - 2|Ric - (R/n)g|^2 V^{2/n}|`, the right side averaged over the same interval.
    pub max_abs_mismatch: f64,
    /// The same relative to the predicted slope.
    pub max_rel_mismatch: f64,
    /// Mismatch within `tol.flow`, absolutely or relatively.
    pub matches: bool,
}

pub fn verify_rv_monotonicity(traj: &FlowTrajectory, tol: &Tolerances) -> RvMonotonicity {
    let n = traj.dim() as f64;
    let predicted: Vec<f64> = traj
        .traceless_norms
        .iter()
        .zip(&traj.volumes)
        .map(|(&q, &v)| 2.0 * q * v.powf(2.0 / n))
        .collect();
    let mut out = RvMonotonicity {
        min_slope: f64::INFINITY,
        max_abs_slope: 0.0,
        max_abs_mismatch: 0.0,
        max_rel_mismatch: 0.0,
        matches: true,
    };
    let slope = |a: usize, b: usize| (traj.rv_invariant[b] - traj.rv_invariant[a]) / (traj.times[b] - traj.times[a]);
    for k in 0..traj.len().saturating_sub(1) {
        let s = slope(k, k + 1);
        out.min_slope = out.min_slope.min(s);
        out.max_abs_slope = out.max_abs_slope.max(s.abs());
    }
    // Simpson over pairs of steps where possible, trapezoid on a single step.
    let pairs: Vec<(f64, f64)> = if traj.len() >= 3 {
        (1..traj.len() - 1)
            .map(|k| {
                (
                    slope(k - 1, k + 1),
                    (predicted[k - 1] + 4.0 * predicted[k] + predicted[k + 1]) / 6.0,
                )
            })
            .collect()
    } else if traj.len() == 2 {
        vec![(slope(0, 1), 0.5 * (predicted[0] + predicted[1]))]
    } else {
        Vec::new()
    };
    for (s, pred) in pairs {
        let err = (s - pred).abs();
        out.max_abs_mismatch = out.max_abs_mismatch.max(err);
        if pred.abs() > 0.0 {
            out.max_rel_mismatch = out.max_rel_mismatch.max(err / pred.abs());
        } else if err > 0.0 {
            out.max_rel_mismatch = f64::INFINITY;
        }
    }
    out.matches = out.max_abs_mismatch <= tol.flow || out.max_rel_mismatch <= tol.flow;
    out
}

/// ℓ²-normalised sorted Ricci spectrum; zero stays zero.
fn normalized_spectrum(spec: &[f64]) -> Vec<f64> {
    let norm = spec.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return spec.to_vec();
    }
    spec.iter().map(|x| x / norm).collect()
}

/// Max over time of the ℓ² distance between the normalised Ricci spectrum and its initial value.
pub fn verify_self_similarity(traj: &FlowTrajectory) -> f64 {
    let first = normalized_spectrum(&traj.ricci_spectra[0]);
    traj.ricci_spectra
        .iter()
        .map(|s| {
            normalized_spectrum(s)
                .iter()
                .zip(&first)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;

    fn heis3() -> MetricLieAlgebra {
        MetricLieAlgebra::with_identity(LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0)]).unwrap())
    }

    #[test]
    fn abelian_flow_is_constant() {
        let g0 = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let m = MetricLieAlgebra::new(LieAlgebra::abelian(2), g0.clone()).unwrap();
        let traj = integrate_flow(&m, 1.0, 0.1, &Tolerances::default()).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.metrics.iter().all(|g| g == &g0));
        assert!(matches!(
            verify_soliton_evolution(&traj, 0.0, &Tolerances::default()),
            SolitonEvolution::Degenerate { max_abs_dr_dt } if max_abs_dr_dt == 0.0
        ));
    }

    #[test]
    fn heis3_scalar_at_one() {
        let tol = Tolerances::default();
        let traj = integrate_flow(&heis3(), 1.0, 1e-3, &tol).unwrap();
        assert_eq!(*traj.times.last().unwrap(), 1.0);
        assert!((traj.scalars.last().unwrap() + 0.125).abs() < 1e-8);
        let slope = (traj.scalars[1] - traj.scalars[0]) / (traj.times[1] - traj.times[0]);
        assert!((slope - 1.5).abs() < 1e-2);
        assert!((traj.ricci_norms[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_steps() {
        let tol = Tolerances::default();
        assert!(integrate_flow(&heis3(), 1.0, 0.0, &tol).is_err());
        assert!(integrate_flow(&heis3(), 0.0, 1e-3, &tol).is_err());
    }

    #[test]
    fn backward_flow_runs_in_negative_time() {
        let tol = Tolerances::default();
        let traj = integrate_flow(&heis3(), -0.1, 1e-3, &tol).unwrap();
        assert!(traj.times.last().unwrap() < &0.0);
        // R(t) = R0 / (1 + 3t) decreases going backward.
        assert!(traj.scalars.last().unwrap() < &traj.scalars[0]);
        assert!(verify_heat_law(&traj).nondecreasing);
    }
}
