//! Charge-sharing flip solver.
//!
//! Executes the 2k+1-phase schedule on a voltage state and iterates
//! flip cycles to the steady state, producing the voltage flip
//! efficiency: the fraction of the pre-flip transducer voltage that
//! survives the flip with reversed sign.
//!
//! Each share phase connects the transducer capacitance C_P to one bank
//! capacitor through the loop resistance R_ON. Under full settling both
//! voltages land on the charge-weighted mean. Under partial settling
//! the voltage difference decays by `exp(-t_phase / tau)` while the
//! total charge is conserved exactly, with `tau = R_ON * Cs` and `Cs`
//! the series combination of the two capacitances (equal capacitors
//! give the familiar `tau = R_ON * C_P / 2`). The clearing phase has no
//! second capacitor, so its discharge constant is `R_ON * C_P`.
//!
//! The whole phase sequence is a linear map on the voltage vector, so
//! the steady state is unique, the iteration contracts geometrically,
//! and the efficiency does not depend on the reference voltage used to
//! drive it.

use crate::error::{Result, SshcError};
use crate::model::{positive, validate, BankState, PiezoSource, SshcConfig};
use crate::schedule::{build_phase_schedule, FlipDirection, Phase};

/// Default reference voltage used to drive the steady-state iteration.
/// Linearity makes the choice immaterial; 1 V makes the efficiency
/// readable directly as the post-flip voltage.
pub const DEFAULT_REFERENCE_VOLTAGE: f64 = 1.0;

/// Default relative convergence tolerance for the steady-state iteration.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Default cap on flip cycles for the steady-state iteration.
pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// How far each phase is allowed to settle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SettlingModel {
    /// Every phase settles completely (the infinite-time limit).
    Full,
    /// Every phase runs for `t_phase` seconds and the charging
    /// transient decays accordingly.
    Partial {
        /// Time allotted to each phase in seconds. Must be positive.
        t_phase: f64,
    },
}

impl SettlingModel {
    fn violations(&self) -> Vec<String> {
        match self {
            SettlingModel::Full => Vec::new(),
            SettlingModel::Partial { t_phase } => {
                if *t_phase > 0.0 {
                    Vec::new()
                } else {
                    vec![format!(
                        "t_phase must be positive in partial settling (got {:e} s)",
                        t_phase
                    )]
                }
            }
        }
    }

    /// Residual fraction of the initial transient after one phase with
    /// time constant `tau`. A zero time constant settles instantly.
    fn residual(&self, tau: f64) -> f64 {
        match self {
            SettlingModel::Full => 0.0,
            SettlingModel::Partial { t_phase } => {
                if tau <= 0.0 {
                    0.0
                } else {
                    (-t_phase / tau).exp()
                }
            }
        }
    }
}

/// Converged steady-state flip outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipResult {
    /// Voltage flip efficiency in [0, 1): the fraction of the pre-flip
    /// voltage recovered with reversed sign, |V_PT after| / |V_PT before|
    /// whenever the flip actually reverses the sign. A settling budget
    /// too small to reverse the sign at all counts as zero rather than
    /// crediting the leftover un-flipped voltage.
    pub efficiency: f64,
    /// Voltage state at convergence, immediately after the last flip.
    pub steady_bank: BankState,
    /// Number of flip cycles executed.
    pub iterations: usize,
    /// Whether the last two cycles agreed within the tolerance.
    pub converged: bool,
}

/// Shares charge between two capacitors connected through the loop
/// resistance. Returns the updated voltage pair.
///
/// Full settling moves both voltages to the charge-weighted mean
/// `(c_a*v_a + c_b*v_b) / (c_a + c_b)`. Partial settling decays the
/// difference `v_a - v_b` by `exp(-t_phase / tau)`; the total charge
/// `c_a*v_a + c_b*v_b` is conserved exactly in both modes.
pub fn share_pair(
    v_a: f64,
    c_a: f64,
    v_b: f64,
    c_b: f64,
    settle: &SettlingModel,
    tau: f64,
) -> Result<(f64, f64)> {
    if !positive(c_a) {
        return Err(SshcError::NonPositiveCapacitance(c_a));
    }
    if !positive(c_b) {
        return Err(SshcError::NonPositiveCapacitance(c_b));
    }
    let c_total = c_a + c_b;
    let mean = (c_a * v_a + c_b * v_b) / c_total;
    let diff = (v_a - v_b) * settle.residual(tau);
    // Splitting the residual difference with these weights keeps the
    // weighted sum identical to the pre-share charge.
    Ok((mean + diff * c_b / c_total, mean - diff * c_a / c_total))
}

/// Time constant of the two-capacitor charging loop formed by C_P and
/// one bank capacitor: `r_on` times the series combination of the two.
fn pair_time_constant(r_on: f64, c_p: f64, c_bank: f64) -> f64 {
    r_on * (c_p * c_bank) / (c_p + c_bank)
}

/// Applies one full 2k+1-phase flip to the state and returns the state
/// after the flip. Bank voltages carry over between calls.
///
/// The down direction runs the canonical schedule; the up direction
/// runs it with every connection polarity negated, which is what lets
/// the bank capacitors keep their standing charge while the transducer
/// voltage alternates sign.
pub fn flip_once(
    state: &BankState,
    source: &PiezoSource,
    config: &SshcConfig,
    settle: &SettlingModel,
    direction: FlipDirection,
) -> Result<BankState> {
    let schedule = build_phase_schedule(config.k);
    let mut next = state.clone();
    for phase in schedule.phases_for(direction) {
        match phase {
            Phase::Share { cap, polarity } => {
                let c_bank = config.bank[cap];
                let sign = polarity.sign();
                let tau = pair_time_constant(config.r_on, source.c_p, c_bank);
                let (v_pt, v_seen) = share_pair(
                    next.v_pt,
                    source.c_p,
                    sign * next.bank_v[cap],
                    c_bank,
                    settle,
                    tau,
                )?;
                next.v_pt = v_pt;
                // The node saw the capacitor through `polarity`; map the
                // settled node-side voltage back to the capacitor's own
                // reference.
                next.bank_v[cap] = sign * v_seen;
            }
            Phase::Clear => {
                // Single capacitor discharging through the loop, so the
                // constant is r_on * c_p, not the pair constant.
                next.v_pt *= settle.residual(config.r_on * source.c_p);
            }
        }
    }
    Ok(next)
}

/// Iterates flip cycles with alternating drive sign until the
/// efficiency settles, starting from a cold (all-zero) bank.
///
/// Each cycle recharges V_PT to the reference magnitude with the sign
/// matching the coming flip, runs the flip, and reads the efficiency as
/// |V_PT after| / reference. Non-convergence within `max_iters` is
/// reported through the `converged` flag, not as an error.
pub fn steady_state_efficiency(
    source: &PiezoSource,
    config: &SshcConfig,
    settle: &SettlingModel,
    tol: f64,
    max_iters: usize,
) -> Result<FlipResult> {
    steady_state_efficiency_with_reference(
        source,
        config,
        settle,
        tol,
        max_iters,
        DEFAULT_REFERENCE_VOLTAGE,
    )
}

/// As [`steady_state_efficiency`], driving the iteration with an
/// explicit reference magnitude. The result is independent of
/// `v_ref` up to the tolerance; exposing it makes that property
/// testable.
pub fn steady_state_efficiency_with_reference(
    source: &PiezoSource,
    config: &SshcConfig,
    settle: &SettlingModel,
    tol: f64,
    max_iters: usize,
    v_ref: f64,
) -> Result<FlipResult> {
    validate(source, config)?;
    let mut violations = settle.violations();
    if !positive(tol) {
        violations.push(format!("tolerance must be positive (got {:e})", tol));
    }
    if max_iters == 0 {
        violations.push("max_iters must be at least 1".to_string());
    }
    if !positive(v_ref) {
        violations.push(format!(
            "reference voltage must be positive (got {} V)",
            v_ref
        ));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }

    let mut state = BankState::zeroed(config.k);
    let mut direction = FlipDirection::Down;
    let mut previous: Option<f64> = None;
    let mut flip_gain = 0.0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        let drive = match direction {
            FlipDirection::Down => v_ref,
            FlipDirection::Up => -v_ref,
        };
        state.v_pt = drive;
        state = flip_once(&state, source, config, settle, direction)?;
        iterations += 1;
        // Signed recovered fraction; negative when the settling budget
        // is too small for the voltage to cross zero at all. The sign
        // matters for convergence detection, the reported efficiency
        // floors it at zero.
        flip_gain = -state.v_pt / drive;

        if let Some(prev) = previous {
            let delta: f64 = flip_gain - prev;
            let settled = if flip_gain != 0.0 {
                (delta / flip_gain).abs() < tol
            } else {
                delta.abs() < tol
            };
            if settled {
                converged = true;
                break;
            }
        }
        previous = Some(flip_gain);
        direction = match direction {
            FlipDirection::Down => FlipDirection::Up,
            FlipDirection::Up => FlipDirection::Down,
        };
    }

    Ok(FlipResult {
        efficiency: flip_gain.max(0.0),
        steady_bank: state,
        iterations,
        converged,
    })
}

/// Ideal-settling flip efficiency of a k-stage equal-capacitor bank:
/// `k / (k + 2)`. This is the fixed point the iterative solver
/// converges to; the two routes are checked against each other in the
/// test suite rather than trusted independently.
pub fn closed_form_efficiency(k: usize) -> f64 {
    k as f64 / (k as f64 + 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn source() -> PiezoSource {
        PiezoSource::new(100e-12, 100e3, 10e-6, 0.0)
    }

    fn equal_config(k: usize) -> SshcConfig {
        SshcConfig::equal_bank(k, 100e-12, 0.0, 5.0)
    }

    /// Analytic steady state of the equal-capacitor bank driven at
    /// v_ref: capacitor i (1-based) holds (k+1-i)/(k+2) * v_ref and the
    /// post-flip node voltage is -k/(k+2) * v_ref. Derived by solving
    /// the phase recurrences by hand; independent of the solver code.
    fn steady_ladder(k: usize, v_ref: f64) -> Vec<f64> {
        (1..=k)
            .map(|i| (k + 1 - i) as f64 / (k + 2) as f64 * v_ref)
            .collect()
    }

    #[test]
    fn equal_capacitors_share_to_the_mean() {
        let (a, b) = share_pair(1.0, 100e-12, 0.0, 100e-12, &SettlingModel::Full, 0.0).unwrap();
        assert_eq!(a, 0.5);
        assert_eq!(b, 0.5);
    }

    #[test]
    fn equal_voltages_are_a_fixed_point_of_sharing() {
        let (a, b) = share_pair(1.0, 100e-12, 1.0, 100e-12, &SettlingModel::Full, 0.0).unwrap();
        assert_eq!((a, b), (1.0, 1.0));
    }

    #[test]
    fn half_life_phase_halves_the_difference() {
        let tau = 5e-9;
        let settle = SettlingModel::Partial {
            t_phase: tau * std::f64::consts::LN_2,
        };
        let (a, b) = share_pair(1.0, 100e-12, 0.0, 100e-12, &settle, tau).unwrap();
        assert!((a - 0.75).abs() < 1e-12);
        assert!((b - 0.25).abs() < 1e-12);
    }

    #[test]
    fn non_positive_capacitance_is_rejected() {
        let err = share_pair(1.0, 0.0, 0.0, 100e-12, &SettlingModel::Full, 0.0).unwrap_err();
        assert_eq!(err, SshcError::NonPositiveCapacitance(0.0));
    }

    #[test]
    fn single_stage_steady_state_hand_trace() {
        // phi_1p: both reach 2/3; phi_0: node cleared; phi_1n: node ends
        // at -1/3 and the capacitor keeps 1/3.
        let state = BankState::new(1.0, vec![1.0 / 3.0]);
        let next = flip_once(
            &state,
            &source(),
            &equal_config(1),
            &SettlingModel::Full,
            FlipDirection::Down,
        )
        .unwrap();
        assert!((next.v_pt + 1.0 / 3.0).abs() < 1e-15);
        assert!((next.bank_v[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_stage_cold_start_first_cycle() {
        let state = BankState::new(1.0, vec![0.0]);
        let next = flip_once(
            &state,
            &source(),
            &equal_config(1),
            &SettlingModel::Full,
            FlipDirection::Down,
        )
        .unwrap();
        assert!((next.v_pt + 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_stage_flip_only_clears_the_node() {
        let state = BankState::new(0.7, vec![]);
        let next = flip_once(
            &state,
            &source(),
            &equal_config(0),
            &SettlingModel::Full,
            FlipDirection::Down,
        )
        .unwrap();
        assert_eq!(next.v_pt, 0.0);
    }

    #[test]
    fn ladder_is_a_fixed_point_for_small_banks() {
        for k in [1usize, 2, 3, 8] {
            let ladder = steady_ladder(k, 1.0);
            let state = BankState::new(1.0, ladder.clone());
            let next = flip_once(
                &state,
                &source(),
                &equal_config(k),
                &SettlingModel::Full,
                FlipDirection::Down,
            )
            .unwrap();
            let expected_v = -(k as f64) / (k as f64 + 2.0);
            assert!(
                (next.v_pt - expected_v).abs() < 1e-14,
                "k = {k}: v_pt = {}",
                next.v_pt
            );
            for (got, want) in next.bank_v.iter().zip(&ladder) {
                assert!((got - want).abs() < 1e-14, "k = {k}");
            }
        }
    }

    #[test]
    fn up_flip_restores_the_positive_voltage() {
        let k = 2;
        let ladder = steady_ladder(k, 1.0);
        let state = BankState::new(-1.0, ladder.clone());
        let next = flip_once(
            &state,
            &source(),
            &equal_config(k),
            &SettlingModel::Full,
            FlipDirection::Up,
        )
        .unwrap();
        assert!((next.v_pt - 0.5).abs() < 1e-15);
        // The bank keeps its standing charge across flip directions.
        for (got, want) in next.bank_v.iter().zip(&ladder) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn one_stage_converges_to_one_third() {
        let r = steady_state_efficiency(
            &source(),
            &equal_config(1),
            &SettlingModel::Full,
            1e-12,
            10_000,
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.efficiency - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn eight_stages_converge_to_eighty_percent() {
        let r = steady_state_efficiency(
            &source(),
            &equal_config(8),
            &SettlingModel::Full,
            1e-12,
            10_000,
        )
        .unwrap();
        assert!(r.converged);
        // The stopping rule bounds the step size, not the distance to
        // the fixed point; the residual here is a few 1e-12.
        assert!((r.efficiency - 0.8).abs() < 1e-11);
    }

    #[test]
    fn two_stages_converge_to_one_half() {
        let r = steady_state_efficiency(
            &source(),
            &equal_config(2),
            &SettlingModel::Full,
            1e-12,
            10_000,
        )
        .unwrap();
        assert!((r.efficiency - 0.5).abs() < 1e-12);
        assert!((r.efficiency - closed_form_efficiency(2)).abs() < 1e-12);
    }

    #[test]
    fn steady_bank_matches_the_analytic_ladder() {
        let k = 8;
        let r = steady_state_efficiency(
            &source(),
            &equal_config(k),
            &SettlingModel::Full,
            1e-13,
            10_000,
        )
        .unwrap();
        for (got, want) in r.steady_bank.bank_v.iter().zip(steady_ladder(k, 1.0)) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_stage_efficiency_is_zero_and_converges() {
        let r =
            steady_state_efficiency(&source(), &equal_config(0), &SettlingModel::Full, 1e-12, 10)
                .unwrap();
        assert!(r.converged);
        assert_eq!(r.efficiency, 0.0);
    }

    #[test]
    fn closed_form_anchors() {
        assert!((closed_form_efficiency(1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(closed_form_efficiency(8), 0.8);
        assert_eq!(closed_form_efficiency(0), 0.0);
    }

    #[test]
    fn iteration_budget_of_one_reports_non_convergence() {
        let r =
            steady_state_efficiency(&source(), &equal_config(4), &SettlingModel::Full, 1e-12, 1)
                .unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn invalid_tolerance_is_rejected() {
        let err =
            steady_state_efficiency(&source(), &equal_config(1), &SettlingModel::Full, 0.0, 100)
                .unwrap_err();
        assert!(err.to_string().contains("tolerance"));
    }

    #[test]
    fn partial_settling_with_generous_time_matches_full() {
        let config = SshcConfig::equal_bank(3, 100e-12, 100.0, 5.0);
        let tau = 100.0 * 100e-12 / 2.0;
        let full = steady_state_efficiency(&source(), &config, &SettlingModel::Full, 1e-12, 10_000)
            .unwrap();
        let slow = steady_state_efficiency(
            &source(),
            &config,
            &SettlingModel::Partial {
                t_phase: 50.0 * tau,
            },
            1e-12,
            10_000,
        )
        .unwrap();
        assert!((full.efficiency - slow.efficiency).abs() < 1e-9);
    }

    #[test]
    fn subcritical_settling_reports_zero_efficiency() {
        // A quarter time constant per phase cannot even reverse the
        // sign of the node voltage; no recovered voltage is credited.
        let config = SshcConfig::equal_bank(4, 100e-12, 200.0, 5.0);
        let tau = 200.0 * 100e-12 / 2.0;
        let r = steady_state_efficiency(
            &source(),
            &config,
            &SettlingModel::Partial {
                t_phase: 0.25 * tau,
            },
            1e-12,
            10_000,
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.efficiency, 0.0);
    }

    #[test]
    fn zero_resistance_partial_settling_behaves_as_full() {
        let config = SshcConfig::equal_bank(2, 100e-12, 0.0, 5.0);
        let r = steady_state_efficiency(
            &source(),
            &config,
            &SettlingModel::Partial { t_phase: 1e-9 },
            1e-12,
            10_000,
        )
        .unwrap();
        assert!((r.efficiency - 0.5).abs() < 1e-12);
    }
}
