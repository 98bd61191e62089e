//! Classical RK4 time stepping, fixed or step-doubling adaptive, with
//! wave-breaking monitors.
//!
//! Both evolution forms are supported: the velocity form advances u with
//! `rhs_u_direct`, the momentum form advances m with `rhs_m` and maps back
//! through the inverse momentum operator for diagnostics. An optional forcing
//! term F(t) (a field on the grid, added to the velocity equation) makes
//! manufactured-solution studies possible; in momentum form the forcing is
//! pushed through the momentum map so the two forms stay equivalent.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{conserved_quantities, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::model::{inverse_helmholtz, momentum, rhs_m, rhs_u_direct, ModelParams};
use crate::spectral::{Field, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMethod {
    Rk4Fixed,
    Rk4Doubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolutionForm {
    UForm,
    MForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepperConfig {
    pub method: StepMethod,
    pub dt: f64,
    pub t_end: f64,
    /// Step-doubling error target; ignored by the fixed stepper.
    pub tolerance: f64,
    pub form: EvolutionForm,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            method: StepMethod::Rk4Fixed,
            dt: 1e-3,
            t_end: 1.0,
            tolerance: 1e-8,
            form: EvolutionForm::UForm,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config(format!(
                "time.dt: must be positive and finite (got {})",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config(format!(
                "time.t_end: must be positive and finite (got {})",
                self.t_end
            )));
        }
        if self.dt > self.t_end {
            return Err(Error::config(format!(
                "time.dt: step {} exceeds the run length {}",
                self.dt, self.t_end
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::config(format!(
                "time.tolerance: must be positive and finite (got {})",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorConfig {
    /// Trigger when min u_x drops below -slope_threshold.
    pub slope_threshold: f64,
    /// Trigger when the order-1 dispersion-weighted norm exceeds this cap.
    pub norm_cap: f64,
    /// Diagnostics (and monitor checks) run every this many accepted steps.
    pub check_stride: usize,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig {
            slope_threshold: 1e6,
            norm_cap: 1e12,
            check_stride: 10,
        }
    }
}

impl MonitorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.slope_threshold.is_finite() && self.slope_threshold > 0.0) {
            return Err(Error::config(format!(
                "monitor.slope_threshold: must be positive and finite (got {})",
                self.slope_threshold
            )));
        }
        if !(self.norm_cap.is_finite() && self.norm_cap > 0.0) {
            return Err(Error::config(format!(
                "monitor.norm_cap: must be positive and finite (got {})",
                self.norm_cap
            )));
        }
        if self.check_stride == 0 {
            return Err(Error::config(
                "monitor.check_stride: must be at least 1 (got 0)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ReachedTEnd,
    WaveBreakingDetected,
    NormCapExceeded,
    NonFinite,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StopReason::ReachedTEnd => "reached_t_end",
            StopReason::WaveBreakingDetected => "wave_breaking_detected",
            StopReason::NormCapExceeded => "norm_cap_exceeded",
            StopReason::NonFinite => "non_finite",
        };
        write!(f, "{name}")
    }
}

/// Outcome of a run. `final_state` is always the velocity u, regardless of
/// which form was integrated; `trail` holds only finite records at strictly
/// increasing times.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_state: Field,
    pub stop_reason: StopReason,
    pub stop_time: f64,
    pub trail: Vec<DiagnosticsRecord>,
    pub steps_taken: u64,
}

/// Forcing term for the velocity equation: node values of F(., t).
pub type Forcing<'a> = &'a dyn Fn(f64) -> Result<Vec<f64>>;

fn add_forcing(mut tendency: Field, forcing: Option<Forcing>, t: f64) -> Result<Field> {
    if let Some(f) = forcing {
        let vals = f(t)?;
        if vals.len() != tendency.len() {
            return Err(Error::GridMismatch {
                expected: tendency.len(),
                found: vals.len(),
            });
        }
        for (u, v) in tendency.values.iter_mut().zip(&vals) {
            *u += v;
        }
    }
    Ok(tendency)
}

/// One classical RK4 step of u_t = rhs(u) + F(t); the forcing is evaluated
/// at the stage times t, t + dt/2 and t + dt.
pub fn rk4_step(
    state: &Field,
    dt: f64,
    rhs: &impl Fn(&Field) -> Result<Field>,
    forcing: Option<Forcing>,
) -> Result<Field> {
    let t = state.time;
    let n = state.len();
    let stage = |base: &Field, k: &Field, scale: f64, time: f64| -> Field {
        let mut vals = Vec::with_capacity(n);
        for j in 0..n {
            vals.push(base.values[j] + scale * k.values[j]);
        }
        Field::new(vals, time)
    };

    let k1 = add_forcing(rhs(state)?, forcing, t)?;
    let s2 = stage(state, &k1, 0.5 * dt, t + 0.5 * dt);
    let k2 = add_forcing(rhs(&s2)?, forcing, t + 0.5 * dt)?;
    let s3 = stage(state, &k2, 0.5 * dt, t + 0.5 * dt);
    let k3 = add_forcing(rhs(&s3)?, forcing, t + 0.5 * dt)?;
    let s4 = stage(state, &k3, dt, t + dt);
    let k4 = add_forcing(rhs(&s4)?, forcing, t + dt)?;

    let mut vals = Vec::with_capacity(n);
    let w = dt / 6.0;
    for j in 0..n {
        vals.push(
            state.values[j]
                + w * (k1.values[j]
                    + 2.0 * k2.values[j]
                    + 2.0 * k3.values[j]
                    + k4.values[j]),
        );
    }
    let out = Field::new(vals, t + dt);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("rk4 step"))
    }
}

/// Check a diagnostics record against the monitor thresholds.
pub fn wave_breaking_monitor(record: &DiagnosticsRecord, cfg: &MonitorConfig) -> Option<StopReason> {
    if record.min_slope < -cfg.slope_threshold {
        return Some(StopReason::WaveBreakingDetected);
    }
    if record.norm_h1g > cfg.norm_cap {
        return Some(StopReason::NormCapExceeded);
    }
    None
}

fn l2_difference(grid: &Grid, a: &Field, b: &Field) -> f64 {
    let dx = grid.spacing();
    let sum: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    (dx * sum).sqrt()
}

/// Integrate the model from `initial` (taken as the velocity u at its own
/// start time) for a duration of `t_end` beyond that start, or until a
/// monitor trips or the state leaves the finite range.
pub fn integrate(
    grid: &Grid,
    initial: &Field,
    params: &ModelParams,
    stepper: &StepperConfig,
    monitor: &MonitorConfig,
    forcing: Option<Forcing>,
) -> Result<RunResult> {
    stepper.validate()?;
    monitor.validate()?;
    params.validate_on(grid)?;
    if initial.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            found: initial.len(),
        });
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }

    let t0 = initial.time;
    let t_end = t0 + stepper.t_end;
    let eps_t = 1e-9 * stepper.dt;

    let rhs: Box<dyn Fn(&Field) -> Result<Field>> = match stepper.form {
        EvolutionForm::UForm => Box::new(move |f: &Field| rhs_u_direct(grid, f, params)),
        EvolutionForm::MForm => Box::new(move |f: &Field| rhs_m(grid, f, params)),
    };
    let momentum_forcing = |t: f64| -> Result<Vec<f64>> {
        let f = forcing.expect("wrapped only when present")(t)?;
        Ok(momentum(grid, &Field::new(f, t), &params.operator)?.values)
    };
    let effective_forcing: Option<Forcing> = match (stepper.form, forcing.is_some()) {
        (_, false) => None,
        (EvolutionForm::UForm, true) => forcing,
        (EvolutionForm::MForm, true) => Some(&momentum_forcing),
    };

    let to_velocity = |state: &Field| -> Result<Field> {
        match stepper.form {
            EvolutionForm::UForm => Ok(state.clone()),
            EvolutionForm::MForm => inverse_helmholtz(grid, state, &params.operator),
        }
    };

    let mut state = match stepper.form {
        EvolutionForm::UForm => initial.clone(),
        EvolutionForm::MForm => momentum(grid, initial, &params.operator)?,
    };
    let mut trail: Vec<DiagnosticsRecord> = Vec::new();

    let record0 = conserved_quantities(grid, initial, params)?;
    trail.push(record0.clone());
    if let Some(reason) = wave_breaking_monitor(&record0, monitor) {
        return Ok(RunResult {
            final_state: initial.clone(),
            stop_reason: reason,
            stop_time: t0,
            trail,
            steps_taken: 0,
        });
    }

    let mut t = t0;
    let mut dt_adaptive = stepper.dt;
    let mut accepted: u64 = 0;
    let mut halvings_in_a_row = 0u32;

    loop {
        if t >= t_end - eps_t {
            let u = to_velocity(&state)?;
            if t - trail.last().map(|r| r.time).unwrap_or(t0) > eps_t {
                trail.push(conserved_quantities(grid, &u, params)?);
            }
            return Ok(RunResult {
                final_state: u,
                stop_reason: StopReason::ReachedTEnd,
                stop_time: t,
                trail,
                steps_taken: accepted,
            });
        }

        let step_outcome: Result<(Field, f64)> = match stepper.method {
            StepMethod::Rk4Fixed => {
                let t_next = (t0 + (accepted as f64 + 1.0) * stepper.dt).min(t_end);
                let dt_eff = t_next - t;
                rk4_step(&state, dt_eff, &rhs, effective_forcing).map(|mut s| {
                    s.time = t_next;
                    (s, t_next)
                })
            }
            StepMethod::Rk4Doubling => loop {
                let dt_try = dt_adaptive.min(t_end - t);
                let attempt = rk4_step(&state, dt_try, &rhs, effective_forcing).and_then(|full| {
                    let mid = rk4_step(&state, 0.5 * dt_try, &rhs, effective_forcing)?;
                    let fine = rk4_step(&mid, 0.5 * dt_try, &rhs, effective_forcing)?;
                    Ok((full, fine))
                });
                match attempt {
                    Ok((full, fine)) => {
                        let err = l2_difference(grid, &full, &fine);
                        if err.is_finite() && err <= stepper.tolerance {
                            halvings_in_a_row = 0;
                            if err < stepper.tolerance / 64.0 && dt_try == dt_adaptive {
                                dt_adaptive *= 2.0;
                            }
                            let mut s = fine;
                            let t_next = t + dt_try;
                            s.time = t_next;
                            break Ok((s, t_next));
                        }
                        halvings_in_a_row += 1;
                        if halvings_in_a_row > 60 {
                            break Err(Error::NonFinite("step size underflow"));
                        }
                        dt_adaptive = dt_try / 2.0;
                    }
                    Err(Error::NonFinite(_)) => {
                        halvings_in_a_row += 1;
                        if halvings_in_a_row > 60 {
                            break Err(Error::NonFinite("step size underflow"));
                        }
                        dt_adaptive = dt_adaptive.min(t_end - t) / 2.0;
                    }
                    Err(other) => break Err(other),
                }
            },
        };

        match step_outcome {
            Ok((next, t_next)) => {
                state = next;
                t = t_next;
                accepted += 1;
            }
            Err(Error::NonFinite(_)) => {
                let u = to_velocity(&state)?;
                return Ok(RunResult {
                    final_state: u,
                    stop_reason: StopReason::NonFinite,
                    stop_time: t,
                    trail,
                    steps_taken: accepted,
                });
            }
            Err(other) => return Err(other),
        }

        let due = accepted % monitor.check_stride as u64 == 0;
        if due && t < t_end - eps_t {
            let u = to_velocity(&state)?;
            match conserved_quantities(grid, &u, params) {
                Ok(record) => {
                    trail.push(record.clone());
                    if let Some(reason) = wave_breaking_monitor(&record, monitor) {
                        return Ok(RunResult {
                            final_state: u,
                            stop_reason: reason,
                            stop_time: t,
                            trail,
                            steps_taken: accepted,
                        });
                    }
                }
                Err(Error::NonFinite(_)) => {
                    return Ok(RunResult {
                        final_state: u,
                        stop_reason: StopReason::NonFinite,
                        stop_time: t,
                        trail,
                        steps_taken: accepted,
                    });
                }
                Err(other) => return Err(other),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::OperatorL;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    fn max_diff(a: &Field, b: &Field) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn rk4_matches_the_exponential_through_fourth_order() {
        let g = grid(16);
        let u0 = Field::from_fn(&g, 0.0, f64::cos);
        let decay = |f: &Field| -> Result<Field> {
            Ok(Field::new(f.values.iter().map(|v| -v).collect(), f.time))
        };
        let dt = 0.1;
        let stepped = rk4_step(&u0, dt, &decay, None).unwrap();

        // Amplification factor is the degree-4 Taylor polynomial of e^{-dt}.
        let taylor = 1.0 - dt + dt * dt / 2.0 - dt.powi(3) / 6.0 + dt.powi(4) / 24.0;
        for (v, x) in stepped.values.iter().zip(g.nodes()) {
            assert_abs_diff_eq!(*v, taylor * x.cos(), epsilon = 1e-14);
            assert!((v - (-dt).exp() * x.cos()).abs() <= 1e-7);
        }
        assert_eq!(stepped.time, dt);

        // A fixed point stays fixed.
        let zero = Field::zeros(&g);
        let still = rk4_step(&zero, dt, &decay, None).unwrap();
        assert_eq!(still.max_abs(), 0.0);
    }

    #[test]
    fn step_doubling_gap_shrinks_like_dt_to_the_fifth() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, |x| x.cos() + 0.3 * (2.0 * x).sin());
        let rhs = |f: &Field| rhs_u_direct(&g, f, &params);

        let gap = |dt: f64| -> f64 {
            let full = rk4_step(&u0, dt, &rhs, None).unwrap();
            let mid = rk4_step(&u0, dt / 2.0, &rhs, None).unwrap();
            let fine = rk4_step(&mid, dt / 2.0, &rhs, None).unwrap();
            l2_difference(&g, &full, &fine)
        };
        let ratio = gap(0.02) / gap(0.01);
        assert!(
            (20.0..48.0).contains(&ratio),
            "doubling gap ratio {ratio} is far from 2^5"
        );
    }

    #[test]
    fn zero_initial_data_stays_zero() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let stepper = StepperConfig {
            t_end: 1.0,
            ..Default::default()
        };
        let run = integrate(
            &g,
            &Field::zeros(&g),
            &params,
            &stepper,
            &MonitorConfig::default(),
            None,
        )
        .unwrap();
        assert_eq!(run.stop_reason, StopReason::ReachedTEnd);
        assert!(run.final_state.max_abs() < 1e-15);
        assert_abs_diff_eq!(run.stop_time, 1.0, epsilon = 1e-9);
        for pair in run.trail.windows(2) {
            assert!(pair[1].time > pair[0].time);
        }
    }

    #[test]
    fn monitor_fires_on_the_initial_slope() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, f64::cos); // min u_x = -1
        let monitor = MonitorConfig {
            slope_threshold: 0.5,
            ..Default::default()
        };
        let run = integrate(
            &g,
            &u0,
            &params,
            &StepperConfig::default(),
            &monitor,
            None,
        )
        .unwrap();
        assert_eq!(run.stop_reason, StopReason::WaveBreakingDetected);
        assert_eq!(run.stop_time, 0.0);
        assert_eq!(run.steps_taken, 0);

        // Threshold above the initial slope does not fire at t = 0.
        let monitor = MonitorConfig {
            slope_threshold: 2.0,
            ..Default::default()
        };
        let run = integrate(
            &g,
            &u0,
            &params,
            &StepperConfig {
                t_end: 0.05,
                ..Default::default()
            },
            &monitor,
            None,
        )
        .unwrap();
        assert_eq!(run.stop_reason, StopReason::ReachedTEnd);
    }

    #[test]
    fn norm_cap_monitor_fires() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, f64::cos); // norm_h1g = sqrt(2 pi)
        let monitor = MonitorConfig {
            norm_cap: 1.0,
            ..Default::default()
        };
        let run = integrate(
            &g,
            &u0,
            &params,
            &StepperConfig::default(),
            &monitor,
            None,
        )
        .unwrap();
        assert_eq!(run.stop_reason, StopReason::NormCapExceeded);
        assert_eq!(run.stop_time, 0.0);
    }

    #[test]
    fn forced_steepening_trips_the_monitor_mid_run() {
        // Manufacture u*(x, t) = (1 + t) sin x, whose steepest slope is
        // -(1 + t); with threshold 1.5 the monitor must fire near t = 0.5.
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let target = |t: f64| Field::from_fn(&g, t, |x| (1.0 + t) * x.sin());
        let forcing = |t: f64| -> Result<Vec<f64>> {
            let ut = Field::from_fn(&g, t, |x| x.sin());
            let r = rhs_u_direct(&g, &target(t), &params)?;
            Ok(ut
                .values
                .iter()
                .zip(&r.values)
                .map(|(a, b)| a - b)
                .collect())
        };
        let stepper = StepperConfig {
            dt: 0.01,
            t_end: 2.0,
            ..Default::default()
        };
        let monitor = MonitorConfig {
            slope_threshold: 1.5,
            check_stride: 1,
            ..Default::default()
        };
        let run = integrate(&g, &target(0.0), &params, &stepper, &monitor, Some(&forcing)).unwrap();
        assert_eq!(run.stop_reason, StopReason::WaveBreakingDetected);
        assert!(
            run.stop_time > 0.4 && run.stop_time < 0.65,
            "stop_time = {}",
            run.stop_time
        );
        // The forced run also checks the integrator tracks the target.
        let expect = target(run.stop_time);
        assert!(max_diff(&run.final_state, &expect) < 1e-6);
    }

    #[test]
    fn velocity_and_momentum_forms_land_on_the_same_state() {
        let g = grid(64);
        let params = ModelParams::new(2.0, 1.0, OperatorL::helmholtz()).unwrap();
        let u0 = Field::from_fn(&g, 0.0, |x| 0.8 * x.cos() + 0.2 * (2.0 * x).sin());
        let stepper_u = StepperConfig {
            dt: 1e-3,
            t_end: 0.5,
            form: EvolutionForm::UForm,
            ..Default::default()
        };
        let stepper_m = StepperConfig {
            form: EvolutionForm::MForm,
            ..stepper_u
        };
        let monitor = MonitorConfig::default();
        let run_u = integrate(&g, &u0, &params, &stepper_u, &monitor, None).unwrap();
        let run_m = integrate(&g, &u0, &params, &stepper_m, &monitor, None).unwrap();
        assert_eq!(run_u.stop_reason, StopReason::ReachedTEnd);
        assert_eq!(run_m.stop_reason, StopReason::ReachedTEnd);
        let diff = l2_difference(&g, &run_u.final_state, &run_m.final_state);
        let scale = g.weighted_norm(&run_u.final_state, |_| 1.0).unwrap();
        assert!(diff / scale <= 1e-8, "form gap {}", diff / scale);
    }

    #[test]
    fn free_run_converges_at_fourth_order_in_dt() {
        let g = grid(128);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, f64::cos);
        let monitor = MonitorConfig {
            check_stride: 1_000_000,
            ..Default::default()
        };
        let run_at = |dt: f64| -> Field {
            let stepper = StepperConfig {
                dt,
                t_end: 0.5,
                ..Default::default()
            };
            integrate(&g, &u0, &params, &stepper, &monitor, None)
                .unwrap()
                .final_state
        };
        let reference = run_at(1e-5);
        let dts = [4e-3, 2e-3, 1e-3];
        let errors: Vec<f64> = dts
            .iter()
            .map(|&dt| l2_difference(&g, &run_at(dt), &reference))
            .collect();
        // Least-squares slope of log error against log dt.
        let logs: Vec<(f64, f64)> = dts
            .iter()
            .zip(&errors)
            .map(|(d, e)| (d.ln(), e.ln()))
            .collect();
        let n = logs.len() as f64;
        let (sx, sy): (f64, f64) = logs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (3.5..=4.5).contains(&slope),
            "observed temporal order {slope}, errors {errors:?}"
        );
    }

    #[test]
    fn adaptive_stepper_tracks_the_fixed_one() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, f64::cos);
        let monitor = MonitorConfig::default();
        let fixed = integrate(
            &g,
            &u0,
            &params,
            &StepperConfig {
                dt: 2.5e-4,
                t_end: 0.5,
                ..Default::default()
            },
            &monitor,
            None,
        )
        .unwrap();
        let adaptive = integrate(
            &g,
            &u0,
            &params,
            &StepperConfig {
                dt: 2e-2,
                t_end: 0.5,
                method: StepMethod::Rk4Doubling,
                tolerance: 1e-10,
                ..Default::default()
            },
            &monitor,
            None,
        )
        .unwrap();
        assert_eq!(adaptive.stop_reason, StopReason::ReachedTEnd);
        let diff = l2_difference(&g, &fixed.final_state, &adaptive.final_state);
        assert!(diff < 1e-6, "fixed/adaptive gap {diff}");
        assert!(
            adaptive.steps_taken < fixed.steps_taken,
            "adaptive stepper took {} steps, fixed took {}",
            adaptive.steps_taken,
            fixed.steps_taken
        );
    }

    #[test]
    fn instability_is_reported_as_a_non_finite_stop() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        // A step size far beyond the stability limit of the resolved modes.
        let u0 = Field::from_fn(&g, 0.0, |x| 3.0 * x.cos());
        let stepper = StepperConfig {
            dt: 0.9,
            t_end: 10.0,
            ..Default::default()
        };
        let run = integrate(&g, &u0, &params, &stepper, &MonitorConfig::default(), None).unwrap();
        assert_eq!(run.stop_reason, StopReason::NonFinite);
        assert!(run.stop_time < 10.0);
        assert!(run.final_state.is_finite());
        for r in &run.trail {
            assert!(r.is_finite());
        }
    }

    #[test]
    fn bad_inputs_are_rejected_upfront() {
        let g = grid(64);
        let params = ModelParams::camassa_holm();
        let u0 = Field::from_fn(&g, 0.0, f64::cos);
        let monitor = MonitorConfig::default();
        let bad_dt = StepperConfig {
            dt: 0.0,
            ..Default::default()
        };
        assert!(integrate(&g, &u0, &params, &bad_dt, &monitor, None).is_err());
        let zero_len = StepperConfig {
            t_end: 0.0,
            ..Default::default()
        };
        assert!(integrate(&g, &u0, &params, &zero_len, &monitor, None).is_err());
        let nan = Field::constant(&g, f64::NAN, 0.0);
        assert!(integrate(&g, &nan, &params, &StepperConfig::default(), &monitor, None).is_err());
    }
}
