//! Flip-time budgets and the design solvers built on them.
//!
//! Each share phase charges one bank capacitor through the loop
//! resistance; with equal capacitances the loop time constant is
//! `tau = R_ON * C_P / 2` and a phase needs `settle_factor * tau` to
//! transfer its charge. A whole flip spends that per phase across all
//! 2k+1 phases. Requiring the flip to fit inside a fraction of the half
//! vibration period and solving for the unknowns yields the two design
//! rules here: the largest tolerable ON-resistance for a given stage
//! count, and the largest stage count for a given ON-resistance.

use crate::error::{Result, SshcError};
use crate::model::{non_negative, positive, PiezoSource, SshcConfig};

/// Settling allotment that turns a time constant into a phase time:
/// five time constants give about 99.3% charge transfer.
pub const DEFAULT_SETTLE_FACTOR: f64 = 5.0;

/// Fraction of the half period allotted to the flip by default.
pub const DEFAULT_BUDGET_FRACTION: f64 = 0.1;

/// Relative slack used when comparing a flip time against its budget,
/// so that resistances produced by the exact inverse solve are accepted
/// despite floating-point rounding.
const BUDGET_SLACK: f64 = 1e-12;

/// Derived timing quantities for one source/configuration pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    /// Two-capacitor loop time constant in seconds.
    pub tau: f64,
    /// Time per phase in seconds: `settle_factor * tau`.
    pub t_phase: f64,
    /// Total flip time T_F in seconds across all 2k+1 phases.
    pub t_flip: f64,
    /// Half vibration period T/2 in seconds.
    pub half_period: f64,
    /// T_F as a fraction of the half period.
    pub flip_fraction: f64,
}

impl TimingReport {
    /// Builds the report for a validated source/configuration pair.
    pub fn for_design(source: &PiezoSource, config: &SshcConfig) -> Result<Self> {
        let tau = phase_time_constant(config.r_on, source.c_p)?;
        let t_phase = config.settle_factor * tau;
        let t_flip = t_phase * (2 * config.k + 1) as f64;
        let half_period = source.half_period();
        Ok(TimingReport {
            tau,
            t_phase,
            t_flip,
            half_period,
            flip_fraction: t_flip / half_period,
        })
    }
}

/// Time constant of the two-capacitor charging loop: `r_on * c_p / 2`.
pub fn phase_time_constant(r_on: f64, c_p: f64) -> Result<f64> {
    let mut violations = Vec::new();
    if !positive(c_p) {
        violations.push(format!("c_p must be positive (got {:e} F)", c_p));
    }
    if !non_negative(r_on) {
        violations.push(format!("r_on must be non-negative (got {} ohm)", r_on));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }
    Ok(r_on * c_p / 2.0)
}

/// Total flip time across the 2k+1 phases:
/// `settle_factor * (r_on * c_p / 2) * (2k + 1)`.
pub fn total_flip_time(r_on: f64, c_p: f64, k: usize, settle_factor: f64) -> Result<f64> {
    let tau = phase_time_constant(r_on, c_p)?;
    if !positive(settle_factor) {
        return Err(SshcError::validation(vec![format!(
            "settle_factor must be positive (got {})",
            settle_factor
        )]));
    }
    Ok(settle_factor * tau * (2 * k + 1) as f64)
}

/// Largest loop resistance that still fits the flip inside
/// `budget_fraction` of the half period, at five time constants per
/// phase: solves `(5/2) * R * c_p * (2k+1) = budget_fraction * period / 2`
/// for R.
pub fn max_on_resistance(c_p: f64, period: f64, k: usize, budget_fraction: f64) -> Result<f64> {
    let mut violations = Vec::new();
    if !positive(c_p) {
        violations.push(format!("c_p must be positive (got {:e} F)", c_p));
    }
    if !positive(period) {
        violations.push(format!("period must be positive (got {:e} s)", period));
    }
    if !(positive(budget_fraction) && budget_fraction <= 1.0) {
        violations.push(format!(
            "budget_fraction must be in (0, 1] (got {})",
            budget_fraction
        ));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }
    Ok(budget_fraction * period / (DEFAULT_SETTLE_FACTOR * c_p * (2 * k + 1) as f64))
}

/// Largest stage count whose flip time fits inside `budget_fraction` of
/// the half period at the given loop resistance, five time constants
/// per phase. Returns `None` when even the single clearing phase of a
/// zero-stage rectifier exceeds the budget; infeasibility is a reported
/// outcome, not an error.
pub fn max_stage_count(
    c_p: f64,
    period: f64,
    r_on: f64,
    budget_fraction: f64,
) -> Result<Option<usize>> {
    let mut violations = Vec::new();
    if !positive(c_p) {
        violations.push(format!("c_p must be positive (got {:e} F)", c_p));
    }
    if !positive(period) {
        violations.push(format!("period must be positive (got {:e} s)", period));
    }
    if !positive(r_on) {
        violations.push(format!("r_on must be positive (got {} ohm)", r_on));
    }
    if !(positive(budget_fraction) && budget_fraction <= 1.0) {
        violations.push(format!(
            "budget_fraction must be in (0, 1] (got {})",
            budget_fraction
        ));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }

    let budget = budget_fraction * period / 2.0;
    // Number of phases that fit: 2k+1 <= budget / (settle * tau).
    let tau = r_on * c_p / 2.0;
    let phases = budget / (DEFAULT_SETTLE_FACTOR * tau);
    if phases * (1.0 + BUDGET_SLACK) < 1.0 {
        return Ok(None);
    }
    let k = (((phases - 1.0) / 2.0) * (1.0 + BUDGET_SLACK))
        .floor()
        .max(0.0) as usize;

    // Trim any floating-point overshoot against the actual flip time.
    let mut k = k;
    while k > 0 {
        let t = total_flip_time(r_on, c_p, k, DEFAULT_SETTLE_FACTOR)?;
        if t <= budget * (1.0 + BUDGET_SLACK) {
            break;
        }
        k -= 1;
    }
    Ok(Some(k))
}
