//! Domain types for the transducer and the switched-capacitor rectifier.
//!
//! All quantities are plain SI floating-point values: farads, hertz,
//! amperes, volts, ohms, seconds. Field names carry the unit so call
//! sites stay unambiguous without a unit-wrapper layer.

use crate::error::{Result, SshcError};

/// Finite and strictly positive; rejects NaN and infinities.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Finite and at least zero; rejects NaN and infinities.
pub(crate) fn non_negative(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// A piezoelectric transducer modeled as a sinusoidal current source
/// `I_P = i_amp * sin(2*pi*f_res*t)` in parallel with its inherent
/// capacitance C_P, driving a bridge with diode drop V_D per diode.
#[derive(Debug, Clone, PartialEq)]
pub struct PiezoSource {
    /// Inherent transducer capacitance C_P in farads.
    pub c_p: f64,
    /// Resonant frequency in hertz; the vibration period is `1 / f_res`.
    pub f_res: f64,
    /// Peak amplitude of the source current in amperes.
    pub i_amp: f64,
    /// Forward drop of one bridge diode in volts.
    pub v_d: f64,
}

impl PiezoSource {
    pub fn new(c_p: f64, f_res: f64, i_amp: f64, v_d: f64) -> Self {
        Self {
            c_p,
            f_res,
            i_amp,
            v_d,
        }
    }

    /// Vibration period T in seconds.
    pub fn period(&self) -> f64 {
        1.0 / self.f_res
    }

    /// Half vibration period T/2 in seconds.
    pub fn half_period(&self) -> f64 {
        0.5 / self.f_res
    }

    /// Source charge over one half cycle: integral of |I_P| over T/2,
    /// which evaluates to `i_amp * T / pi`.
    pub fn charge_per_half_cycle(&self) -> f64 {
        self.i_amp * self.period() / std::f64::consts::PI
    }

    /// Instantaneous source current at time `t`.
    pub fn current_at(&self, t: f64) -> f64 {
        self.i_amp * (2.0 * std::f64::consts::PI * self.f_res * t).sin()
    }

    /// Bridge clamp level `v_s + 2 * v_d` for a storage voltage `v_s`.
    pub fn clamp_voltage(&self, v_s: f64) -> f64 {
        v_s + 2.0 * self.v_d
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !positive(self.c_p) {
            v.push(format!("c_p must be positive (got {:e} F)", self.c_p));
        }
        if !positive(self.f_res) {
            v.push(format!("f_res must be positive (got {:e} Hz)", self.f_res));
        }
        if !positive(self.i_amp) {
            v.push(format!("i_amp must be positive (got {:e} A)", self.i_amp));
        }
        if !non_negative(self.v_d) {
            v.push(format!("v_d must be non-negative (got {} V)", self.v_d));
        }
        v
    }
}

/// Configuration of a k-stage switched-capacitor rectifier: the bank of
/// flip capacitors, the series ON-resistance of the two-capacitor
/// charging path, and the settling allotment per phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SshcConfig {
    /// Stage count k (number of bank capacitors). k = 0 is the
    /// degenerate clearing-phase-only rectifier.
    pub k: usize,
    /// Bank capacitances C_1..C_k in farads.
    pub bank: Vec<f64>,
    /// Total series ON-resistance of the charging loop in ohms.
    pub r_on: f64,
    /// Multiples of the loop time constant allotted to each phase.
    /// 5 gives about 99.3% charge transfer per phase.
    pub settle_factor: f64,
}

impl SshcConfig {
    /// A bank of `k` equal capacitors, each `c` farads.
    pub fn equal_bank(k: usize, c: f64, r_on: f64, settle_factor: f64) -> Self {
        Self {
            k,
            bank: vec![c; k],
            r_on,
            settle_factor,
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.bank.len() != self.k {
            v.push(format!(
                "bank length mismatch: k = {} but bank has {} entries",
                self.k,
                self.bank.len()
            ));
        }
        for (i, &c) in self.bank.iter().enumerate() {
            if !positive(c) {
                v.push(format!(
                    "bank capacitance must be positive (C_{} = {:e} F)",
                    i + 1,
                    c
                ));
            }
        }
        if !non_negative(self.r_on) {
            v.push(format!("r_on must be non-negative (got {} ohm)", self.r_on));
        }
        if !positive(self.settle_factor) {
            v.push(format!(
                "settle_factor must be positive (got {})",
                self.settle_factor
            ));
        }
        v
    }
}

/// Instantaneous voltage state: the transducer node V_PT and each bank
/// capacitor voltage in its own reference polarity.
#[derive(Debug, Clone, PartialEq)]
pub struct BankState {
    /// Transducer node voltage V_PT in volts.
    pub v_pt: f64,
    /// Bank capacitor voltages in volts, one per stage.
    pub bank_v: Vec<f64>,
}

impl BankState {
    /// Cold-start state: every node at zero volts.
    pub fn zeroed(k: usize) -> Self {
        Self {
            v_pt: 0.0,
            bank_v: vec![0.0; k],
        }
    }

    pub fn new(v_pt: f64, bank_v: Vec<f64>) -> Self {
        Self { v_pt, bank_v }
    }
}

/// Checks every type invariant of a source/configuration pair and
/// reports all violations at once.
pub fn validate(source: &PiezoSource, config: &SshcConfig) -> Result<()> {
    let mut violations = source.violations();
    violations.extend(config.violations());
    if violations.is_empty() {
        Ok(())
    } else {
        Err(SshcError::validation(violations))
    }
}
