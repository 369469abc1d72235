//! Time-domain half-cycle simulation of the transducer and rectifier.
//!
//! The source drives C_P with a sinusoidal current. An ideal bridge
//! clamps the transducer voltage at `±(v_s + 2*v_d)` and delivers the
//! excess charge to storage. At every current zero crossing a
//! synchronized flip reverses the transducer voltage, scaled by the
//! flip efficiency; while the switch network is busy flipping, the
//! source charge is shunted and lost.
//!
//! Charge increments are taken from the analytic integral of the
//! current, so the per-half-cycle accounting
//! `q_half = q_flip_waste + q_reflip + q_out` holds exactly and the
//! sample step only affects the trace resolution, not the bookkeeping.
//! Each half cycle conducts right up to its closing zero crossing; the
//! charge lost to a flip is what flows between the crossing and the end
//! of the voltage transition.

use crate::error::{Result, SshcError};
use crate::model::{non_negative, positive, PiezoSource};

/// Default integration resolution, samples per vibration period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 2000;

/// Default number of simulated vibration periods; the last one is the
/// one reported.
pub const DEFAULT_N_CYCLES: usize = 5;

/// Which rectifier is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectifierKind {
    /// Passive full-bridge baseline: the transducer voltage is never
    /// flipped and must swing the full 2x clamp range each half cycle.
    Fbr,
    /// Switched-capacitor flip rectifier with an efficiency taken from
    /// the flip solver.
    Sshc,
    /// Inductor-flip baseline with a user-supplied efficiency.
    SshiBaseline,
}

/// Rectifier description for the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectifierModel {
    pub kind: RectifierKind,
    /// Voltage flip efficiency in [0, 1) for flipping rectifiers. The
    /// full-bridge baseline carries -1, which encodes "no flip" in the
    /// closed-form power expression.
    pub flip_efficiency: f64,
    /// Total flip duration T_F in seconds; 0 means instantaneous.
    pub flip_duration: f64,
}

impl RectifierModel {
    pub fn fbr() -> Self {
        Self {
            kind: RectifierKind::Fbr,
            flip_efficiency: -1.0,
            flip_duration: 0.0,
        }
    }

    pub fn sshc(flip_efficiency: f64, flip_duration: f64) -> Self {
        Self {
            kind: RectifierKind::Sshc,
            flip_efficiency,
            flip_duration,
        }
    }

    pub fn sshi_baseline(flip_efficiency: f64, flip_duration: f64) -> Self {
        Self {
            kind: RectifierKind::SshiBaseline,
            flip_efficiency,
            flip_duration,
        }
    }

    /// Efficiency value to feed the closed-form power expression.
    pub fn closed_form_eta(&self) -> f64 {
        match self.kind {
            RectifierKind::Fbr => -1.0,
            _ => self.flip_efficiency,
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.kind != RectifierKind::Fbr {
            let eta_ok = non_negative(self.flip_efficiency) && self.flip_efficiency < 1.0;
            if !eta_ok {
                v.push(format!(
                    "flip_efficiency must be in [0, 1) (got {})",
                    self.flip_efficiency
                ));
            }
            if !non_negative(self.flip_duration) {
                v.push(format!(
                    "flip_duration must be non-negative (got {} s)",
                    self.flip_duration
                ));
            }
        }
        v
    }
}

/// One trace sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Time in seconds.
    pub t: f64,
    /// Source current in amperes.
    pub i_p: f64,
    /// Transducer voltage in volts.
    pub v_pt: f64,
}

/// Sampled waveform plus the metadata needed to locate flip intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformTrace {
    pub samples: Vec<TraceSample>,
    pub source: PiezoSource,
    /// Effective flip duration used during the run (0 for the
    /// full-bridge baseline).
    pub flip_duration: f64,
    pub n_cycles: usize,
    pub steps_per_period: usize,
}

/// Per-half-cycle power accounting of the final simulated half cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    /// Output power in watts: `2 * f_res * v_s * q_out`.
    pub p_out: f64,
    /// Storage voltage in volts.
    pub v_s: f64,
    /// Total source charge over the half cycle in coulombs.
    pub q_half: f64,
    /// Charge spent re-charging C_P back to the clamp after the flip.
    pub q_reflip: f64,
    /// Source charge shunted while the flip was in progress.
    pub q_flip_waste: f64,
    /// Charge delivered to storage.
    pub q_out: f64,
}

/// Charge lost to the flip of the final half cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipLoss {
    pub q_flip_waste: f64,
    /// Waste as a fraction of the half-cycle source charge.
    pub fraction_of_q_half: f64,
}

/// Outcome of the storage-voltage optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StorageOptimum {
    Bounded {
        v_s_opt: f64,
        p_max: f64,
    },
    /// The lossless limit (efficiency 1) has no finite optimum.
    Unbounded,
}

/// Closed-form output power with an instantaneous flip:
/// `2 * f * v_s * max(0, q_half - c_p * (1 - eta) * (v_s + 2*v_d))`.
///
/// `eta = -1` encodes the full-bridge baseline, whose recharge term is
/// the full `2 * c_p * (v_s + 2*v_d)` swing. Flip-time waste is ignored
/// (the T_F = 0 limit); this is the independent check the sampled
/// simulator is held against.
pub fn output_power_closed_form(source: &PiezoSource, eta: f64, v_s: f64) -> f64 {
    debug_assert!(v_s >= 0.0);
    let q_half = source.charge_per_half_cycle();
    let q_reflip = source.c_p * (1.0 - eta) * source.clamp_voltage(v_s);
    2.0 * source.f_res * v_s * (q_half - q_reflip).max(0.0)
}

/// Storage voltage maximizing the closed-form output power, and the
/// power there. The quadratic has its vertex at
/// `(q_half / (c_p * (1 - eta)) - 2*v_d) / 2`, floored at zero.
pub fn optimal_storage_voltage(source: &PiezoSource, eta: f64) -> StorageOptimum {
    if eta >= 1.0 {
        return StorageOptimum::Unbounded;
    }
    let q_half = source.charge_per_half_cycle();
    let v_s_opt = (q_half / (source.c_p * (1.0 - eta)) - 2.0 * source.v_d) / 2.0;
    if !v_s_opt.is_finite() {
        return StorageOptimum::Unbounded;
    }
    let v_s_opt = v_s_opt.max(0.0);
    StorageOptimum::Bounded {
        v_s_opt,
        p_max: output_power_closed_form(source, eta, v_s_opt),
    }
}

/// Integration state within one half cycle.
enum Mode {
    /// The switch network is flipping; source charge is shunted and the
    /// node ramps from `v_from` to `v_to` over the transition window.
    Flipping {
        t_start: f64,
        t_end: f64,
        v_from: f64,
        v_to: f64,
    },
    /// C_P integrates the source current toward the clamp.
    Dead,
    /// The bridge conducts; charge goes to storage.
    Conducting,
}

struct HalfCycleCharges {
    q_half: f64,
    q_reflip: f64,
    q_flip_waste: f64,
    q_out: f64,
}

struct Integrator<'a> {
    source: &'a PiezoSource,
    v_clamp: f64,
    mode: Mode,
    v_pt: f64,
    /// Sign of the source current in the current half cycle.
    sign: f64,
    omega: f64,
    record: bool,
    charges: HalfCycleCharges,
}

impl<'a> Integrator<'a> {
    /// Source charge between two instants, from the analytic integral.
    fn charge(&self, t0: f64, t1: f64) -> f64 {
        self.source.i_amp / self.omega * ((self.omega * t0).cos() - (self.omega * t1).cos())
    }

    fn advance(&mut self, t0: f64, t1: f64) {
        if t1 <= t0 {
            return;
        }
        match self.mode {
            Mode::Flipping {
                t_start,
                t_end,
                v_from,
                v_to,
            } => {
                if t1 < t_end {
                    let dq = self.charge(t0, t1);
                    if self.record {
                        self.charges.q_half += dq.abs();
                        self.charges.q_flip_waste += dq.abs();
                    }
                    self.v_pt = v_from + (v_to - v_from) * (t1 - t_start) / (t_end - t_start);
                } else {
                    let dq = self.charge(t0, t_end);
                    if self.record {
                        self.charges.q_half += dq.abs();
                        self.charges.q_flip_waste += dq.abs();
                    }
                    self.v_pt = v_to;
                    self.mode = Mode::Dead;
                    self.advance(t_end, t1);
                }
            }
            Mode::Dead => {
                let dq = self.charge(t0, t1);
                let room = self.source.c_p * (self.sign * self.v_clamp - self.v_pt);
                if dq.abs() < room.abs() || self.v_clamp == 0.0 && room == 0.0 {
                    if room == 0.0 {
                        // Zero clamp: the node is already pinned.
                        self.mode = Mode::Conducting;
                        if self.record {
                            self.charges.q_half += dq.abs();
                            self.charges.q_out += dq.abs();
                        }
                        return;
                    }
                    self.v_pt += dq / self.source.c_p;
                    if self.record {
                        self.charges.q_half += dq.abs();
                        self.charges.q_reflip += dq.abs();
                    }
                } else {
                    // The clamp is reached inside this interval; the
                    // split between recharge and delivery is exact
                    // regardless of where in the interval it happens.
                    self.v_pt = self.sign * self.v_clamp;
                    self.mode = Mode::Conducting;
                    if self.record {
                        self.charges.q_half += dq.abs();
                        self.charges.q_reflip += room.abs();
                        self.charges.q_out += dq.abs() - room.abs();
                    }
                }
            }
            Mode::Conducting => {
                let dq = self.charge(t0, t1);
                if self.record {
                    self.charges.q_half += dq.abs();
                    self.charges.q_out += dq.abs();
                }
            }
        }
    }
}

/// Runs the simulation at the default resolution.
pub fn simulate(
    source: &PiezoSource,
    model: &RectifierModel,
    v_s: f64,
    n_cycles: usize,
) -> Result<(WaveformTrace, PowerResult)> {
    simulate_with_steps(source, model, v_s, n_cycles, DEFAULT_STEPS_PER_PERIOD)
}

/// Runs the simulation with an explicit trace resolution.
///
/// `steps_per_period` must be even and at least 1000 so that samples
/// land on the half-cycle boundaries and the trace step stays at or
/// below a thousandth of the period.
pub fn simulate_with_steps(
    source: &PiezoSource,
    model: &RectifierModel,
    v_s: f64,
    n_cycles: usize,
    steps_per_period: usize,
) -> Result<(WaveformTrace, PowerResult)> {
    let mut violations = Vec::new();
    if !positive(source.c_p) {
        violations.push(format!("c_p must be positive (got {:e} F)", source.c_p));
    }
    if !positive(source.f_res) {
        violations.push(format!(
            "f_res must be positive (got {:e} Hz)",
            source.f_res
        ));
    }
    if !positive(source.i_amp) {
        violations.push(format!("i_amp must be positive (got {:e} A)", source.i_amp));
    }
    if !non_negative(source.v_d) {
        violations.push(format!("v_d must be non-negative (got {} V)", source.v_d));
    }
    if !non_negative(v_s) {
        violations.push(format!("v_s must be non-negative (got {} V)", v_s));
    }
    if n_cycles == 0 {
        violations.push("n_cycles must be at least 1".to_string());
    }
    if steps_per_period < 1000 || !steps_per_period.is_multiple_of(2) {
        violations.push(format!(
            "steps_per_period must be even and at least 1000 (got {})",
            steps_per_period
        ));
    }
    violations.extend(model.violations());
    let flip_duration = match model.kind {
        RectifierKind::Fbr => 0.0,
        _ => model.flip_duration,
    };
    if flip_duration > source.half_period() {
        violations.push(format!(
            "flip_duration must not exceed the half period (got {:e} s, half period {:e} s)",
            flip_duration,
            source.half_period()
        ));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }

    let period = source.period();
    let dt = period / steps_per_period as f64;
    let half_steps = steps_per_period / 2;
    let total_steps = n_cycles * steps_per_period;
    let final_half = 2 * n_cycles - 1;
    let eta = model.flip_efficiency;

    let mut sim = Integrator {
        source,
        v_clamp: source.clamp_voltage(v_s),
        mode: Mode::Dead,
        v_pt: 0.0,
        sign: 1.0,
        omega: 2.0 * std::f64::consts::PI * source.f_res,
        record: false,
        charges: HalfCycleCharges {
            q_half: 0.0,
            q_reflip: 0.0,
            q_flip_waste: 0.0,
            q_out: 0.0,
        },
    };

    let mut samples = Vec::with_capacity(total_steps + 1);
    samples.push(TraceSample {
        t: 0.0,
        i_p: 0.0,
        v_pt: sim.v_pt,
    });

    for idx in 0..total_steps {
        let t0 = idx as f64 * dt;
        let t1 = (idx + 1) as f64 * dt;
        if idx % half_steps == 0 {
            // Current zero crossing: the sign reverses and the flip fires.
            let half_index = idx / half_steps;
            sim.sign = if half_index.is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sim.record = half_index == final_half;
            match model.kind {
                RectifierKind::Fbr => {
                    sim.mode = Mode::Dead;
                }
                _ => {
                    let v_from = sim.v_pt;
                    let v_to = -eta * v_from;
                    if flip_duration == 0.0 {
                        sim.v_pt = v_to;
                        sim.mode = Mode::Dead;
                    } else {
                        sim.mode = Mode::Flipping {
                            t_start: t0,
                            t_end: t0 + flip_duration / 2.0,
                            v_from,
                            v_to,
                        };
                    }
                }
            }
        }
        sim.advance(t0, t1);
        samples.push(TraceSample {
            t: t1,
            i_p: source.current_at(t1),
            v_pt: sim.v_pt,
        });
    }

    let charges = sim.charges;
    let power = PowerResult {
        p_out: 2.0 * source.f_res * v_s * charges.q_out,
        v_s,
        q_half: charges.q_half,
        q_reflip: charges.q_reflip,
        q_flip_waste: charges.q_flip_waste,
        q_out: charges.q_out,
    };
    let trace = WaveformTrace {
        samples,
        source: source.clone(),
        flip_duration,
        n_cycles,
        steps_per_period,
    };
    Ok((trace, power))
}

/// Integrates |I_P| over the flip interval of the final half cycle of a
/// trace, by trapezoid over the recorded samples; the fraction is taken
/// against the analytic half-cycle charge.
pub fn flip_energy_loss(trace: &WaveformTrace) -> Result<FlipLoss> {
    if trace.n_cycles < 2 {
        return Err(SshcError::IncompleteTrace(format!(
            "need at least 2 simulated cycles to call the last one steady (got {})",
            trace.n_cycles
        )));
    }
    let expected = trace.n_cycles * trace.steps_per_period + 1;
    if trace.samples.len() != expected {
        return Err(SshcError::IncompleteTrace(format!(
            "expected {} samples, found {}",
            expected,
            trace.samples.len()
        )));
    }

    let half = trace.source.half_period();
    let window_start = (2 * trace.n_cycles - 1) as f64 * half;
    let window_end = window_start + trace.flip_duration / 2.0;
    let q = integrate_abs_current(&trace.samples, window_start, window_end);
    Ok(FlipLoss {
        q_flip_waste: q,
        fraction_of_q_half: q / trace.source.charge_per_half_cycle(),
    })
}

/// Trapezoid integral of |i_p| over `[a, b]`, clipping sample intervals
/// at the window edges. The current does not change sign inside a flip
/// window, so interpolating the signed samples first is safe.
fn integrate_abs_current(samples: &[TraceSample], a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut total = 0.0;
    for pair in samples.windows(2) {
        let (s0, s1) = (pair[0], pair[1]);
        if s1.t <= a || s0.t >= b {
            continue;
        }
        let ta = s0.t.max(a);
        let tb = s1.t.min(b);
        if tb <= ta {
            continue;
        }
        let span = s1.t - s0.t;
        let ia = s0.i_p + (s1.i_p - s0.i_p) * (ta - s0.t) / span;
        let ib = s0.i_p + (s1.i_p - s0.i_p) * (tb - s0.t) / span;
        total += 0.5 * (ia.abs() + ib.abs()) * (tb - ta);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn source() -> PiezoSource {
        PiezoSource::new(100e-12, 100e3, 10e-6, 0.0)
    }

    #[test]
    fn fbr_recharge_swings_the_full_clamp_range() {
        let src = source();
        let v_s = 0.05; // well below the feasible limit of ~0.159 V
        let (_, power) = simulate(&src, &RectifierModel::fbr(), v_s, 5).unwrap();
        let expected = 2.0 * src.c_p * src.clamp_voltage(v_s);
        assert!(
            (power.q_reflip - expected).abs() < 1e-3 * expected,
            "q_reflip = {}, expected = {}",
            power.q_reflip,
            expected
        );
        assert!(power.q_out > 0.0);
    }

    #[test]
    fn sshc_recharge_covers_only_the_unflipped_fraction() {
        let src = source();
        let eta = 0.8;
        let v_s = 0.5;
        let (_, power) = simulate(&src, &RectifierModel::sshc(eta, 0.0), v_s, 5).unwrap();
        let expected = src.c_p * src.clamp_voltage(v_s) * (1.0 - eta);
        assert!(
            (power.q_reflip - expected).abs() < 1e-3 * expected,
            "q_reflip = {}, expected = {}",
            power.q_reflip,
            expected
        );
    }

    #[test]
    fn zero_storage_voltage_delivers_zero_power() {
        let (_, power) = simulate(&source(), &RectifierModel::sshc(0.5, 0.0), 0.0, 3).unwrap();
        assert_eq!(power.p_out, 0.0);
        // All non-wasted charge still flows through the bridge.
        assert!(power.q_out > 0.0);
    }

    #[test]
    fn unreachable_clamp_delivers_nothing() {
        let (_, power) = simulate(&source(), &RectifierModel::sshc(0.5, 0.0), 100.0, 3).unwrap();
        assert_eq!(power.q_out, 0.0);
        assert_eq!(power.p_out, 0.0);
    }

    #[test]
    fn charge_buckets_sum_to_the_half_cycle_charge() {
        let src = source();
        let t_f = src.period() / 20.0;
        let (_, power) = simulate(&src, &RectifierModel::sshc(0.8, t_f), 0.3, 5).unwrap();
        let sum = power.q_flip_waste + power.q_reflip + power.q_out;
        assert!((power.q_half - sum).abs() <= 1e-12 * power.q_half);
        let analytic = src.charge_per_half_cycle();
        assert!((power.q_half - analytic).abs() < 1e-6 * analytic);
    }

    #[test]
    fn simulated_power_matches_the_closed_form_with_instant_flips() {
        let src = source();
        for eta in [0.0, 1.0 / 3.0, 0.8] {
            let StorageOptimum::Bounded { v_s_opt, p_max } = optimal_storage_voltage(&src, eta)
            else {
                panic!("bounded optimum expected")
            };
            let (_, power) = simulate(&src, &RectifierModel::sshc(eta, 0.0), v_s_opt, 5).unwrap();
            assert!(
                (power.p_out - p_max).abs() <= 0.01 * p_max,
                "eta = {eta}: simulated {} vs closed form {}",
                power.p_out,
                p_max
            );
        }
    }

    #[test]
    fn closed_form_fbr_equals_eta_minus_one() {
        let src = source();
        let v_s = 0.05;
        let q_half = src.charge_per_half_cycle();
        let expected = 2.0 * src.f_res * v_s * (q_half - 2.0 * src.c_p * v_s);
        assert!((output_power_closed_form(&src, -1.0, v_s) - expected).abs() < 1e-18);
    }

    #[test]
    fn closed_form_power_is_monotone_in_eta() {
        let src = source();
        let v_s = 0.1;
        let p1 = output_power_closed_form(&src, 0.2, v_s);
        let p2 = output_power_closed_form(&src, 0.6, v_s);
        assert!(p2 > p1);
        assert!(p1 > 0.0);
    }

    #[test]
    fn fbr_optimum_is_a_quarter_of_the_open_circuit_charge_swing() {
        let src = source();
        let StorageOptimum::Bounded { v_s_opt, .. } = optimal_storage_voltage(&src, -1.0) else {
            panic!("bounded optimum expected")
        };
        let expected = src.charge_per_half_cycle() / (4.0 * src.c_p);
        assert!((v_s_opt - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn default_source_sshc_optimum() {
        // q_half = 1e-10/pi C; at eta = 0.8 the vertex sits at
        // q_half / (0.2 * c_p) / 2 = 5/(2*pi) V.
        let StorageOptimum::Bounded { v_s_opt, p_max } = optimal_storage_voltage(&source(), 0.8)
        else {
            panic!("bounded optimum expected")
        };
        let expected_v = 2.5 / std::f64::consts::PI;
        assert!((v_s_opt - expected_v).abs() < 1e-12);
        assert!(p_max > 0.0);
    }

    #[test]
    fn lossless_limit_is_reported_unbounded() {
        assert_eq!(
            optimal_storage_voltage(&source(), 1.0),
            StorageOptimum::Unbounded
        );
    }

    #[test]
    fn optimum_beats_a_dense_voltage_sweep() {
        let src = source();
        for eta in [-1.0, 0.0, 0.5, 0.8] {
            let StorageOptimum::Bounded { v_s_opt, p_max } = optimal_storage_voltage(&src, eta)
            else {
                panic!("bounded optimum expected")
            };
            let v_limit = 2.5 * v_s_opt.max(0.01);
            for i in 0..400 {
                let v = v_limit * i as f64 / 399.0;
                assert!(output_power_closed_form(&src, eta, v) <= p_max * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn instantaneous_flip_wastes_nothing() {
        let (trace, power) = simulate(&source(), &RectifierModel::sshc(0.8, 0.0), 0.3, 5).unwrap();
        assert_eq!(power.q_flip_waste, 0.0);
        let loss = flip_energy_loss(&trace).unwrap();
        assert_eq!(loss.q_flip_waste, 0.0);
        assert_eq!(loss.fraction_of_q_half, 0.0);
    }

    #[test]
    fn twentieth_period_flip_loss_matches_the_analytic_integral() {
        let src = source();
        let t_f = src.period() / 20.0;
        let (trace, power) = simulate(&src, &RectifierModel::sshc(0.8, t_f), 0.3, 5).unwrap();
        let loss = flip_energy_loss(&trace).unwrap();
        let expected = (std::f64::consts::PI / 40.0).sin().powi(2);
        assert!(
            (loss.fraction_of_q_half - expected).abs() < 1e-4,
            "fraction = {}, expected = {}",
            loss.fraction_of_q_half,
            expected
        );
        // The trace integral and the simulator's own accounting agree.
        assert!((loss.q_flip_waste - power.q_flip_waste).abs() < 1e-4 * power.q_half);
    }

    #[test]
    fn waste_grows_with_flip_duration() {
        let src = source();
        let mut last = -1.0;
        for divisor in [64.0, 32.0, 16.0, 8.0, 4.0, 2.0] {
            let t_f = src.period() / divisor;
            let (_, power) = simulate(&src, &RectifierModel::sshc(0.5, t_f), 0.1, 5).unwrap();
            assert!(
                power.q_flip_waste > last,
                "waste not increasing at T/{divisor}"
            );
            last = power.q_flip_waste;
        }
    }

    #[test]
    fn trace_settles_after_the_first_cycle() {
        let src = source();
        let (trace, _) = simulate(&src, &RectifierModel::sshc(0.8, 0.0), 0.3, 5).unwrap();
        let steps = trace.steps_per_period;
        let scale = src.clamp_voltage(0.3);
        for cycle in 1..4 {
            for i in 0..steps {
                let a = trace.samples[cycle * steps + i].v_pt;
                let b = trace.samples[(cycle + 1) * steps + i].v_pt;
                assert!(
                    (a - b).abs() <= 1e-3 * scale,
                    "cycle {cycle} sample {i}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn halving_the_step_barely_moves_the_power() {
        let src = source();
        let t_f = src.period() / 20.0;
        let model = RectifierModel::sshc(0.8, t_f);
        let (_, coarse) = simulate_with_steps(&src, &model, 0.3, 5, 2000).unwrap();
        let (_, fine) = simulate_with_steps(&src, &model, 0.3, 5, 4000).unwrap();
        assert!((coarse.p_out - fine.p_out).abs() <= 0.002 * fine.p_out);
    }

    #[test]
    fn short_traces_cannot_claim_a_steady_cycle() {
        let (trace, _) = simulate(&source(), &RectifierModel::sshc(0.8, 0.0), 0.3, 1).unwrap();
        assert!(matches!(
            flip_energy_loss(&trace),
            Err(SshcError::IncompleteTrace(_))
        ));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let src = source();
        assert!(simulate(&src, &RectifierModel::sshc(1.2, 0.0), 0.1, 5).is_err());
        assert!(simulate(&src, &RectifierModel::sshc(0.5, -1.0), 0.1, 5).is_err());
        assert!(simulate(&src, &RectifierModel::sshc(0.5, 0.0), -0.1, 5).is_err());
        assert!(simulate(&src, &RectifierModel::sshc(0.5, 0.0), 0.1, 0).is_err());
        assert!(simulate_with_steps(&src, &RectifierModel::fbr(), 0.1, 5, 999).is_err());
        assert!(simulate_with_steps(&src, &RectifierModel::fbr(), 0.1, 5, 1001).is_err());
    }

    #[test]
    fn trace_has_the_expected_sample_count() {
        let (trace, _) = simulate(&source(), &RectifierModel::fbr(), 0.05, 3).unwrap();
        assert_eq!(trace.samples.len(), 3 * DEFAULT_STEPS_PER_PERIOD + 1);
        assert_eq!(trace.samples[0].t, 0.0);
    }
}
