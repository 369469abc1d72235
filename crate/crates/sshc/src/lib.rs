//! Simulation and design-space exploration for switched-capacitor
//! voltage-flip (SSHC) rectifiers driving piezoelectric transducers in
//! ultrasonic wireless power transfer.
//!
//! The crate covers four connected analyses:
//!
//! - [`flip`]: charge-sharing execution of the 2k+1-phase flip schedule
//!   and the steady-state voltage flip efficiency it converges to.
//! - [`timing`]: RC settling budgets for the flip phases and the design
//!   solvers for the largest tolerable ON-resistance and stage count.
//! - [`waveform`]: time-domain half-cycle simulation of the transducer
//!   plus rectifier, with per-half-cycle power accounting.
//! - [`footprint`]: on-chip capacitor area and the size comparison
//!   against an inductor-based flip rectifier.
//!
//! [`sweep`] tabulates any of these over parameter grids; with the
//! default `parallel` feature grid points are evaluated on a rayon
//! thread pool, with identical output to the sequential fallback.

pub mod error;
pub mod flip;
pub mod footprint;
pub mod model;
pub mod schedule;
pub mod sweep;
pub mod timing;
pub mod waveform;

pub use error::{Result, SshcError};
pub use flip::{
    closed_form_efficiency, flip_once, share_pair, steady_state_efficiency,
    steady_state_efficiency_with_reference, FlipResult, SettlingModel,
};
pub use footprint::{bank_area, inductor_comparison, mim_area, InductorComparison, ProcessParams};
pub use model::{validate, BankState, PiezoSource, SshcConfig};
pub use schedule::{build_phase_schedule, FlipDirection, Phase, PhaseSchedule, Polarity};
pub use sweep::{
    best_stage_count, run_sweep, run_sweep_sequential, AxisSpacing, CellValue, StageConstraints,
    StageReport, SweepAxis, SweepFixed, SweepObjective, SweepParameter, SweepRow, SweepSpec,
    SweepTable,
};
pub use timing::{
    max_on_resistance, max_stage_count, phase_time_constant, total_flip_time, TimingReport,
};
pub use waveform::{
    flip_energy_loss, optimal_storage_voltage, output_power_closed_form, simulate,
    simulate_with_steps, FlipLoss, PowerResult, RectifierKind, RectifierModel, StorageOptimum,
    TraceSample, WaveformTrace,
};
