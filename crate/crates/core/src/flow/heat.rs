//! Metric heat flow in Donaldson/Simpson form and the real-form restriction
//! check.
//!
//! The descent direction is the exact discrete metric gradient of
//! ‖F_A + \[φ,φ*\] − λ‖² in multiplicative coordinates (`gradient::metric_gradient`;
//! its continuum limit is the Simpson direction *(F_A + \[φ,φ*\]) − λ), run
//! through a spectral preconditioner that undoes the σ⁴ stiffness of the
//! metric Hessian, with the raw gradient as guaranteed-descent fallback.
//! Steps are multiplicative, h ← h·exp(−η·D), which keeps the metric
//! Hermitian positive definite exactly. Backtracking halves η until the
//! energy strictly decreases; the next trial doubles the accepted step up to
//! a cap.

use crate::cmatrix::{CMat, C64};

use super::gradient::{metric_gradient, metric_gradient_norm};
use super::{
    derived, ymh_energy_from, Derived, EnergyVariant, Field, FlowError, FlowState, GroupTag,
};

/// One accepted step (or the initial row with step 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub time: f64,
    pub energy: f64,
    pub grad_norm: f64,
    pub step: f64,
    /// Whether the step used the raw-gradient fallback rather than the
    /// preconditioned primary direction.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub steps: Vec<TraceRow>,
    pub limit: super::ClusterReport,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub tolerance: f64,
    pub max_steps: usize,
    /// Central constant of the Simpson equation; 0 on the trivial-degree torus.
    pub lambda: f64,
    /// Eigenvalue-cluster reporting threshold for the limit report.
    pub cluster_threshold: f64,
}

impl FlowParams {
    pub fn new(tolerance: f64, max_steps: usize) -> Result<Self, FlowError> {
        if !(tolerance > 0.0) {
            return Err(FlowError::BadTolerance);
        }
        Ok(FlowParams {
            tolerance,
            max_steps,
            lambda: 0.0,
            cluster_threshold: 1e-4,
        })
    }
}

const STEP_UNDERFLOW: f64 = 1e-12;

/// Regularization of the spectral preconditioner at the difference-kernel modes.
const PRECOND_DELTA: f64 = 0.1;

/// Derived fields with the central constant subtracted from the moment, so
/// the objective is ‖M − λ·Id‖² and the gradient targets it.
fn derived_shifted(state: &FlowState, lambda: f64) -> Derived {
    let mut d = derived(state);
    if lambda != 0.0 {
        let lam = CMat::scalar(state.rank, C64::new(lambda, 0.0));
        for m in d.moment.iter_mut() {
            *m = &*m - &lam;
        }
    }
    d
}

/// Spectral preconditioner 1/(δ + σ²(k)/4)² applied entrywise as a real
/// symmetric convolution: it neutralizes the σ⁴ stiffness of the metric
/// Hessian. Positive Fourier multipliers make it SPD in the flat pairing, so
/// the preconditioned gradient is a descent direction up to metric-weight
/// distortion; the raw gradient remains the guaranteed fallback.
struct Preconditioner {
    size: usize,
    /// e^{−2πi m / n} for m in 0..n
    twiddle: Vec<C64>,
    multiplier: Vec<f64>,
}

impl Preconditioner {
    fn new(geom: &super::LatticeGeometry, delta: f64) -> Self {
        let n = geom.size();
        let twiddle: Vec<C64> = (0..n)
            .map(|m| C64::new(0.0, -2.0 * std::f64::consts::PI * m as f64 / n as f64).exp())
            .collect();
        let a2 = geom.cell_area();
        let mut multiplier = vec![0.0; n * n];
        for ky in 0..n {
            for kx in 0..n {
                let sx = (2.0 * std::f64::consts::PI * kx as f64 / n as f64).sin();
                let sy = (2.0 * std::f64::consts::PI * ky as f64 / n as f64).sin();
                let q = (sx * sx + sy * sy) / (4.0 * a2);
                multiplier[ky * n + kx] = 1.0 / ((delta + q) * (delta + q));
            }
        }
        Preconditioner {
            size: n,
            twiddle,
            multiplier,
        }
    }

    /// Apply the convolution to each matrix entry of the field.
    fn apply(&self, field: &Field) -> Field {
        let n = self.size;
        let rank = field[0].n;
        let mut out = vec![CMat::zeros(rank); field.len()];
        let mut grid = vec![C64::new(0.0, 0.0); n * n];
        for e in 0..rank * rank {
            for s in 0..field.len() {
                grid[s] = field[s].d[e];
            }
            self.dft_rows(&mut grid, false);
            self.dft_cols(&mut grid, false);
            for k in 0..n * n {
                grid[k] *= self.multiplier[k];
            }
            self.dft_cols(&mut grid, true);
            self.dft_rows(&mut grid, true);
            let scale = 1.0 / (n * n) as f64;
            for s in 0..field.len() {
                out[s].d[e] = grid[s] * scale;
            }
        }
        out
    }

    fn tw(&self, m: usize, inverse: bool) -> C64 {
        let t = self.twiddle[m % self.size];
        if inverse {
            t.conj()
        } else {
            t
        }
    }

    fn dft_rows(&self, data: &mut [C64], inverse: bool) {
        let n = self.size;
        let mut row = vec![C64::new(0.0, 0.0); n];
        for y in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for x in 0..n {
                    acc += data[y * n + x] * self.tw(x * k, inverse);
                }
                row[k] = acc;
            }
            data[y * n..(y + 1) * n].copy_from_slice(&row);
        }
    }

    fn dft_cols(&self, data: &mut [C64], inverse: bool) {
        let n = self.size;
        let mut col = vec![C64::new(0.0, 0.0); n];
        for x in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for y in 0..n {
                    acc += data[y * n + x] * self.tw(y * k, inverse);
                }
                col[k] = acc;
            }
            for k in 0..n {
                data[k * n + x] = col[k];
            }
        }
    }
}

/// Per-site projection onto the h-self-adjoint part, which keeps the
/// exponential update inside the Hermitian positive cone (the dropped skew
/// part pairs to zero against the gradient, so descent is unaffected).
fn selfadjointize(state: &FlowState, metric_inv: &Field, field: &Field) -> Field {
    (0..field.len())
        .map(|s| {
            let adj = &(&metric_inv[s] * &field[s].adjoint()) * &state.metric[s];
            (&field[s] + &adj).scale(C64::new(0.5, 0.0))
        })
        .collect()
}

fn apply_step(state: &FlowState, grad: &Field, eta: f64) -> Field {
    state
        .metric
        .iter()
        .zip(grad)
        .map(|(h, g)| {
            let hn = h * &g.scale(C64::new(-eta, 0.0)).exp();
            // re-Hermitize to stop rounding drift
            (&hn + &hn.adjoint()).scale(C64::new(0.5, 0.0))
        })
        .collect()
}

fn dump_state(state: &FlowState) -> String {
    crate::records::state_to_text(state)
}

/// Explicit time stepping on the metric with backtracking step control;
/// terminates when the residual norm drops below tolerance or max_steps is
/// reached. Only `state.metric` mutates.
pub fn heat_flow_run(state: &mut FlowState, params: &FlowParams) -> Result<FlowTrace, FlowError> {
    if !(params.tolerance > 0.0) {
        return Err(FlowError::BadTolerance);
    }
    let a2 = state.geometry.cell_area();
    let mut trial_p = 1e-2 * a2;
    let mut trial_g = 1e-2 * a2;
    let cap_p = 8.0;
    let cap_g = 4.0 * a2 * a2;
    let precond = Preconditioner::new(&state.geometry, PRECOND_DELTA);
    let mut time = 0.0;
    let mut rows = Vec::new();
    let mut converged = false;
    let mut last_accepted = 0.0;
    let mut last_fallback = false;
    for step_no in 0..=params.max_steps {
        let d = derived_shifted(state, params.lambda);
        let grad = metric_gradient(state, &d);
        let res_norm = metric_gradient_norm(state, &d, &grad);
        let energy = ymh_energy_from(state, &d, EnergyVariant::Restricted);
        rows.push(TraceRow {
            time,
            energy,
            grad_norm: res_norm,
            step: last_accepted,
            fallback: last_fallback,
        });
        if res_norm < params.tolerance {
            converged = true;
            break;
        }
        if step_no == params.max_steps {
            break;
        }
        // Primary direction: preconditioned gradient, a few halvings.
        let mut accepted = false;
        let pg = selfadjointize(state, &d.metric_inv, &precond.apply(&grad));
        let mut eta = trial_p;
        for _ in 0..12 {
            if eta < STEP_UNDERFLOW {
                break;
            }
            let cand = FlowState {
                metric: apply_step(state, &pg, eta),
                ..state.clone()
            };
            if objective(&cand, params.lambda) < energy {
                state.metric = cand.metric;
                time += eta;
                last_accepted = eta;
                last_fallback = false;
                trial_p = (2.0 * eta).min(cap_p);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            trial_p = (trial_p * 0.25).max(1e-4 * a2);
            // Fallback: the raw gradient direction, halving to underflow.
            let mut eta = trial_g;
            loop {
                if eta < STEP_UNDERFLOW {
                    return Err(FlowError::StepUnderflow {
                        time,
                        floor: STEP_UNDERFLOW,
                        dump: dump_state(state),
                    });
                }
                let cand = FlowState {
                    metric: apply_step(state, &grad, eta),
                    ..state.clone()
                };
                if objective(&cand, params.lambda) < energy {
                    state.metric = cand.metric;
                    time += eta;
                    last_accepted = eta;
                    last_fallback = true;
                    trial_g = (2.0 * eta).min(cap_g);
                    break;
                }
                eta *= 0.5;
            }
        }
        if step_no % 32 == 0 {
            state.check_metric_positive(time)?;
        }
    }
    state.check_metric_positive(time)?;
    let limit = super::classify_limit(state, params.cluster_threshold);
    Ok(FlowTrace {
        steps: rows,
        limit,
        converged,
    })
}

fn objective(state: &FlowState, lambda: f64) -> f64 {
    let d = derived_shifted(state, lambda);
    ymh_energy_from(state, &d, EnergyVariant::Restricted)
}

/// Max residual of the tag's linear constraints on (a, φ) plus the metric
/// locus, over all sites.
pub fn constraint_deviation(state: &FlowState) -> f64 {
    let mut dev = 0.0f64;
    match state.group_tag {
        GroupTag::GlC => {}
        GroupTag::SlnR => {
            for s in 0..state.geometry.sites() {
                let a = &state.base_a[s];
                let phi = &state.higgs[s];
                let h = &state.metric[s];
                dev = dev.max((a + &a.transpose()).max_abs());
                dev = dev.max((phi - &phi.transpose()).max_abs());
                dev = dev.max(phi.trace().norm());
                dev = dev.max((&(&h.transpose() * h) - &CMat::eye(state.rank)).max_abs());
            }
        }
        GroupTag::Sp2nR { n } => {
            for s in 0..state.geometry.sites() {
                let a = &state.base_a[s];
                let phi = &state.higgs[s];
                let h = &state.metric[s];
                let block = |m: &CMat, bi: usize, bj: usize| {
                    let mut out = CMat::zeros(n);
                    for i in 0..n {
                        for j in 0..n {
                            out.set(i, j, m.at(bi * n + i, bj * n + j));
                        }
                    }
                    out
                };
                let (a11, a12, a21, a22) = (
                    block(a, 0, 0),
                    block(a, 0, 1),
                    block(a, 1, 0),
                    block(a, 1, 1),
                );
                dev = dev.max(a12.max_abs()).max(a21.max_abs());
                dev = dev.max((&a22 + &a11.transpose()).max_abs());
                let (p11, p12, p21, p22) = (
                    block(phi, 0, 0),
                    block(phi, 0, 1),
                    block(phi, 1, 0),
                    block(phi, 1, 1),
                );
                dev = dev.max(p11.max_abs()).max(p22.max_abs());
                dev = dev.max((&p12 - &p12.transpose()).max_abs());
                dev = dev.max((&p21 - &p21.transpose()).max_abs());
                let (h11, h12, h21, h22) = (
                    block(h, 0, 0),
                    block(h, 0, 1),
                    block(h, 1, 0),
                    block(h, 1, 1),
                );
                dev = dev.max(h12.max_abs()).max(h21.max_abs());
                let target = h11.transpose().inverse().expect("positive definite");
                dev = dev.max((&h22 - &target).max_abs());
            }
        }
    }
    dev
}

/// Exact projection of the metric onto the tag's constraint locus (log-space
/// linear projection).
pub fn project_metric(state: &mut FlowState) {
    match state.group_tag {
        GroupTag::GlC => {}
        GroupTag::SlnR => {
            for h in state.metric.iter_mut() {
                let u = h.hermitian_log();
                // Hermitian ∩ skew-symmetric = purely imaginary entries
                let mut p = CMat::zeros(u.n);
                for i in 0..u.n {
                    for j in 0..u.n {
                        p.set(i, j, C64::new(0.0, u.at(i, j).im));
                    }
                }
                *h = p.exp();
            }
        }
        GroupTag::Sp2nR { n } => {
            for h in state.metric.iter_mut() {
                let mut h11 = CMat::zeros(n);
                let mut h22 = CMat::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        h11.set(i, j, h.at(i, j));
                        h22.set(i, j, h.at(n + i, n + j));
                    }
                }
                let u1 = h11.hermitian_log();
                let u2 = h22.hermitian_log();
                let v = (&u1 - &u2.transpose()).scale(C64::new(0.5, 0.0));
                let new1 = v.exp();
                let new2 = (-&v.transpose()).exp();
                let mut out = CMat::zeros(2 * n);
                for i in 0..n {
                    for j in 0..n {
                        out.set(i, j, new1.at(i, j));
                        out.set(n + i, n + j, new2.at(i, j));
                    }
                }
                *h = out;
            }
        }
    }
}

/// Twin-run report for the restriction theorem at desk scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictionReport {
    pub duration: f64,
    pub initial_constraint_dev: f64,
    /// Max distance of the ambient-flow state from the constraint locus.
    pub max_constraint_dev: f64,
    /// Max state-by-state metric distance between the two runs.
    pub max_twin_dev: f64,
    pub per_unit_time_constraint: f64,
    pub per_unit_time_twin: f64,
}

/// Runs the ambient complex-group flow and a separately-run real-form flow
/// (same stepper plus per-step projection onto the constraint locus) from the
/// same initial data, reporting the maximal deviations over the duration.
pub fn restriction_check(
    state: &FlowState,
    duration: f64,
    params: &FlowParams,
) -> Result<RestrictionReport, FlowError> {
    let initial_constraint_dev = constraint_deviation(state);
    let mut ambient = state.clone();
    let mut real = state.clone();
    let a2 = state.geometry.cell_area();
    let cap = 8.0;
    let mut trial = 1e-2 * a2;
    let precond = Preconditioner::new(&state.geometry, PRECOND_DELTA);
    let mut time = 0.0;
    let mut max_constraint_dev = 0.0f64;
    let mut max_twin_dev = 0.0f64;
    let mut guard = 0usize;
    while time < duration {
        guard += 1;
        if guard > params.max_steps {
            break;
        }
        // ambient step: preconditioned gradient with raw-gradient fallback
        let d = derived_shifted(&ambient, params.lambda);
        let energy = ymh_energy_from(&ambient, &d, EnergyVariant::Restricted);
        let grad = metric_gradient(&ambient, &d);
        let res = metric_gradient_norm(&ambient, &d, &grad);
        if res < params.tolerance {
            break; // both flows are stationary to tolerance
        }
        let pg = selfadjointize(&ambient, &d.metric_inv, &precond.apply(&grad));
        let mut chosen: Option<(bool, f64)> = None;
        let mut eta = trial;
        for _ in 0..12 {
            if eta < STEP_UNDERFLOW {
                break;
            }
            let cand = FlowState {
                metric: apply_step(&ambient, &pg, eta),
                ..ambient.clone()
            };
            if objective(&cand, params.lambda) < energy {
                ambient.metric = cand.metric;
                chosen = Some((true, eta));
                break;
            }
            eta *= 0.5;
        }
        if chosen.is_none() {
            let mut eta = trial;
            loop {
                if eta < STEP_UNDERFLOW {
                    return Err(FlowError::StepUnderflow {
                        time,
                        floor: STEP_UNDERFLOW,
                        dump: dump_state(&ambient),
                    });
                }
                let cand = FlowState {
                    metric: apply_step(&ambient, &grad, eta),
                    ..ambient.clone()
                };
                if objective(&cand, params.lambda) < energy {
                    ambient.metric = cand.metric;
                    chosen = Some((false, eta));
                    break;
                }
                eta *= 0.5;
            }
        }
        let (used_precond, eta) = chosen.expect("a step was accepted");
        // real-form twin: same direction kind and step size, then projection
        let dr = derived_shifted(&real, params.lambda);
        let gr = metric_gradient(&real, &dr);
        let dir = if used_precond {
            selfadjointize(&real, &dr.metric_inv, &precond.apply(&gr))
        } else {
            gr
        };
        real.metric = apply_step(&real, &dir, eta);
        project_metric(&mut real);
        time += eta;
        trial = (2.0 * eta).min(cap);
        max_constraint_dev = max_constraint_dev.max(constraint_deviation(&ambient));
        let twin: f64 = ambient
            .metric
            .iter()
            .zip(&real.metric)
            .map(|(x, y)| (x - y).max_abs())
            .fold(0.0, f64::max);
        max_twin_dev = max_twin_dev.max(twin);
    }
    let t = time.max(1e-300);
    Ok(RestrictionReport {
        duration: time,
        initial_constraint_dev,
        max_constraint_dev,
        max_twin_dev,
        per_unit_time_constraint: max_constraint_dev / t,
        per_unit_time_twin: max_twin_dev / t,
    })
}
