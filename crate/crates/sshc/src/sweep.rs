//! Design-space exploration over grids of rectifier parameters.
//!
//! A sweep evaluates a set of objectives at every point of a cartesian
//! grid spanned by named axes. Grid points are independent, so with the
//! `parallel` feature (on by default) they are evaluated on a rayon
//! pool; rows are assembled in lexicographic axis order either way, so
//! the output is identical for any degree of parallelism, including the
//! sequential fallback built without the feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Result, SshcError};
use crate::flip::{steady_state_efficiency, SettlingModel};
use crate::footprint::{bank_area, mim_area, ProcessParams};
use crate::model::{non_negative, positive, PiezoSource, SshcConfig};
use crate::timing::{max_on_resistance, max_stage_count, total_flip_time};
use crate::waveform::{optimal_storage_voltage, StorageOptimum};

/// Parameters a sweep axis may range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Stage count k (values are rounded to the nearest integer).
    StageCount,
    /// Transducer capacitance C_P in farads.
    TransducerCapacitance,
    /// Resonant frequency in hertz.
    ResonantFrequency,
    /// Loop ON-resistance in ohms.
    OnResistance,
    /// Storage voltage in volts.
    StorageVoltage,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::StageCount => "k",
            SweepParameter::TransducerCapacitance => "c_p",
            SweepParameter::ResonantFrequency => "f_res",
            SweepParameter::OnResistance => "r_on",
            SweepParameter::StorageVoltage => "v_s",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "k" => Ok(SweepParameter::StageCount),
            "c_p" => Ok(SweepParameter::TransducerCapacitance),
            "f_res" => Ok(SweepParameter::ResonantFrequency),
            "r_on" => Ok(SweepParameter::OnResistance),
            "v_s" => Ok(SweepParameter::StorageVoltage),
            other => Err(SshcError::UnknownParameter(other.to_string())),
        }
    }
}

/// Quantities a sweep can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepObjective {
    /// Steady-state voltage flip efficiency of an equal-capacitor bank.
    FlipEfficiency,
    /// Total flip time in seconds at the configured settling factor.
    FlipTime,
    /// Largest budget-compatible loop resistance in ohms.
    MaxOnResistance,
    /// Output power in watts at the optimal storage voltage.
    PowerAtOptimalStorage,
    /// Die area of the capacitor bank in mm^2.
    BankArea,
}

impl SweepObjective {
    pub fn name(&self) -> &'static str {
        match self {
            SweepObjective::FlipEfficiency => "flip_efficiency",
            SweepObjective::FlipTime => "t_flip",
            SweepObjective::MaxOnResistance => "max_r_on",
            SweepObjective::PowerAtOptimalStorage => "p_out_at_opt_vs",
            SweepObjective::BankArea => "bank_area",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "flip_efficiency" => Ok(SweepObjective::FlipEfficiency),
            "t_flip" => Ok(SweepObjective::FlipTime),
            "max_r_on" => Ok(SweepObjective::MaxOnResistance),
            "p_out_at_opt_vs" => Ok(SweepObjective::PowerAtOptimalStorage),
            "bank_area" => Ok(SweepObjective::BankArea),
            other => Err(SshcError::UnknownParameter(other.to_string())),
        }
    }
}

/// Point spacing along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisSpacing {
    Linear,
    Log,
}

/// One sweep axis: a parameter and the points it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub spacing: AxisSpacing,
}

impl SweepAxis {
    pub fn linear(parameter: SweepParameter, min: f64, max: f64, steps: usize) -> Self {
        Self {
            parameter,
            min,
            max,
            steps,
            spacing: AxisSpacing::Linear,
        }
    }

    fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| match self.spacing {
                AxisSpacing::Linear => self.min + (self.max - self.min) * i as f64 / n,
                AxisSpacing::Log => self.min * (self.max / self.min).powf(i as f64 / n),
            })
            .collect()
    }
}

/// Parameters held fixed at every grid point an axis does not override.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFixed {
    pub source: PiezoSource,
    pub k: usize,
    pub r_on: f64,
    pub v_s: f64,
    pub settle_factor: f64,
    pub budget_fraction: f64,
    pub process: ProcessParams,
    pub settling: SettlingModel,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SweepFixed {
    fn default() -> Self {
        Self {
            source: PiezoSource::new(100e-12, 100e3, 10e-6, 0.0),
            k: 8,
            r_on: 117.6470588235294,
            v_s: 1.0,
            settle_factor: 5.0,
            budget_fraction: 0.1,
            process: ProcessParams::default(),
            settling: SettlingModel::Full,
            tol: 1e-12,
            max_iters: 10_000,
        }
    }
}

/// A full sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub fixed: SweepFixed,
    pub objectives: Vec<SweepObjective>,
}

/// One table cell: a value, or an explicit infeasible marker so rows
/// survive hostile corners instead of being dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue {
    Value(f64),
    Infeasible,
}

/// One grid point's row: the axis values followed by objective cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub cells: Vec<CellValue>,
}

/// The assembled sweep result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Axis names followed by objective names.
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

fn validate_spec(spec: &SweepSpec) -> Result<Vec<Vec<f64>>> {
    if spec.axes.is_empty() {
        return Err(SshcError::EmptyGrid("no axes declared".to_string()));
    }
    for (i, axis) in spec.axes.iter().enumerate() {
        for other in &spec.axes[..i] {
            if other.parameter == axis.parameter {
                return Err(SshcError::DuplicateAxis(axis.parameter.name().to_string()));
            }
        }
        if axis.steps == 0 {
            return Err(SshcError::EmptyGrid(format!(
                "axis {} has zero steps",
                axis.parameter.name()
            )));
        }
        let mut violations = Vec::new();
        let ordered = axis.min <= axis.max;
        if !ordered {
            violations.push(format!(
                "axis {}: min {} exceeds max {}",
                axis.parameter.name(),
                axis.min,
                axis.max
            ));
        }
        if axis.spacing == AxisSpacing::Log && !positive(axis.min) {
            violations.push(format!(
                "axis {}: log spacing requires a positive minimum (got {})",
                axis.parameter.name(),
                axis.min
            ));
        }
        if !violations.is_empty() {
            return Err(SshcError::validation(violations));
        }
    }
    Ok(spec.axes.iter().map(|a| a.values()).collect())
}

/// Cartesian product in lexicographic order: first axis slowest.
fn grid_points(values_per_axis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let total: usize = values_per_axis.iter().map(|v| v.len()).product();
    let mut points = Vec::with_capacity(total);
    let mut indices = vec![0usize; values_per_axis.len()];
    for _ in 0..total {
        points.push(
            indices
                .iter()
                .zip(values_per_axis)
                .map(|(&i, vals)| vals[i])
                .collect(),
        );
        for axis in (0..indices.len()).rev() {
            indices[axis] += 1;
            if indices[axis] < values_per_axis[axis].len() {
                break;
            }
            indices[axis] = 0;
        }
    }
    points
}

struct ResolvedPoint {
    source: PiezoSource,
    k: Option<usize>,
    r_on: f64,
}

fn resolve_point(spec: &SweepSpec, axis_values: &[f64]) -> ResolvedPoint {
    let fixed = &spec.fixed;
    let mut source = fixed.source.clone();
    let mut k = Some(fixed.k);
    let mut r_on = fixed.r_on;
    for (axis, &value) in spec.axes.iter().zip(axis_values) {
        match axis.parameter {
            SweepParameter::StageCount => {
                let rounded = value.round();
                k = if rounded >= 0.0 {
                    Some(rounded as usize)
                } else {
                    None
                };
            }
            SweepParameter::TransducerCapacitance => source.c_p = value,
            SweepParameter::ResonantFrequency => source.f_res = value,
            SweepParameter::OnResistance => r_on = value,
            SweepParameter::StorageVoltage => {
                // Tabulated as a column; no current objective consumes it.
            }
        }
    }
    ResolvedPoint { source, k, r_on }
}

fn eval_point(spec: &SweepSpec, axis_values: &[f64]) -> SweepRow {
    let fixed = &spec.fixed;
    let point = resolve_point(spec, axis_values);
    let cells = spec
        .objectives
        .iter()
        .map(|objective| {
            let Some(k) = point.k else {
                return CellValue::Infeasible;
            };
            let config =
                SshcConfig::equal_bank(k, point.source.c_p, point.r_on, fixed.settle_factor);
            match objective {
                SweepObjective::FlipEfficiency => {
                    match steady_state_efficiency(
                        &point.source,
                        &config,
                        &fixed.settling,
                        fixed.tol,
                        fixed.max_iters,
                    ) {
                        Ok(r) if r.converged => CellValue::Value(r.efficiency),
                        _ => CellValue::Infeasible,
                    }
                }
                SweepObjective::FlipTime => {
                    match total_flip_time(point.r_on, point.source.c_p, k, fixed.settle_factor) {
                        Ok(t) => CellValue::Value(t),
                        Err(_) => CellValue::Infeasible,
                    }
                }
                SweepObjective::MaxOnResistance => {
                    match max_on_resistance(
                        point.source.c_p,
                        point.source.period(),
                        k,
                        fixed.budget_fraction,
                    ) {
                        Ok(r) => CellValue::Value(r),
                        Err(_) => CellValue::Infeasible,
                    }
                }
                SweepObjective::PowerAtOptimalStorage => {
                    let eta = match steady_state_efficiency(
                        &point.source,
                        &config,
                        &fixed.settling,
                        fixed.tol,
                        fixed.max_iters,
                    ) {
                        Ok(r) if r.converged => r.efficiency,
                        _ => return CellValue::Infeasible,
                    };
                    match optimal_storage_voltage(&point.source, eta) {
                        StorageOptimum::Bounded { p_max, .. } => CellValue::Value(p_max),
                        StorageOptimum::Unbounded => CellValue::Infeasible,
                    }
                }
                SweepObjective::BankArea => CellValue::Value(bank_area(&config, &fixed.process)),
            }
        })
        .collect();
    SweepRow {
        axis_values: axis_values.to_vec(),
        cells,
    }
}

fn table_columns(spec: &SweepSpec) -> Vec<String> {
    spec.axes
        .iter()
        .map(|a| a.parameter.name().to_string())
        .chain(spec.objectives.iter().map(|o| o.name().to_string()))
        .collect()
}

/// Runs the sweep, evaluating grid points in parallel when the
/// `parallel` feature is enabled. Row order is the lexicographic grid
/// order regardless of how the evaluation is scheduled.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let values = validate_spec(spec)?;
    let points = grid_points(&values);

    #[cfg(feature = "parallel")]
    let rows: Vec<SweepRow> = points.par_iter().map(|p| eval_point(spec, p)).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepRow> = points.iter().map(|p| eval_point(spec, p)).collect();

    Ok(SweepTable {
        columns: table_columns(spec),
        rows,
    })
}

/// Runs the sweep on the current thread only. Kept available with the
/// `parallel` feature enabled so the two paths can be compared and
/// benchmarked against each other.
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<SweepTable> {
    let values = validate_spec(spec)?;
    let points = grid_points(&values);
    let rows: Vec<SweepRow> = points.iter().map(|p| eval_point(spec, p)).collect();
    Ok(SweepTable {
        columns: table_columns(spec),
        rows,
    })
}

/// Constraint set for the stage-count chooser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageConstraints {
    /// ON-resistance the switch design can actually deliver, in ohms.
    pub r_on_available: f64,
    /// Die area budget for the capacitor bank in mm^2.
    pub area_budget_mm2: f64,
    /// Fraction of the half period allotted to the flip.
    pub budget_fraction: f64,
}

/// Outcome of the constrained stage-count search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageReport {
    /// Largest stage count satisfying both constraints; `None` when the
    /// timing budget cannot fit even the clearing phase.
    pub k_best: Option<usize>,
    /// Timing-constrained limit, `None` when infeasible outright.
    pub k_timing: Option<usize>,
    /// Area-constrained limit.
    pub k_area: usize,
    /// True when the timing constraint is what stops k from growing.
    pub timing_bound: bool,
    /// True when the area constraint is what stops k from growing.
    pub area_bound: bool,
}

/// Finds the largest stage count that fits both the flip-time budget at
/// the available ON-resistance and the die-area budget.
pub fn best_stage_count(
    constraints: &StageConstraints,
    source: &PiezoSource,
    process: &ProcessParams,
) -> Result<StageReport> {
    let mut violations = Vec::new();
    if !positive(constraints.r_on_available) {
        violations.push(format!(
            "r_on_available must be positive (got {} ohm)",
            constraints.r_on_available
        ));
    }
    if !non_negative(constraints.area_budget_mm2) {
        violations.push(format!(
            "area_budget_mm2 must be non-negative (got {})",
            constraints.area_budget_mm2
        ));
    }
    if !positive(process.mim_density_ff_per_um2) {
        violations.push(format!(
            "mim density must be positive (got {})",
            process.mim_density_ff_per_um2
        ));
    }
    if !violations.is_empty() {
        return Err(SshcError::validation(violations));
    }

    let k_timing = max_stage_count(
        source.c_p,
        source.period(),
        constraints.r_on_available,
        constraints.budget_fraction,
    )?;
    let area_per_cap = mim_area(source.c_p, process);
    // Slack absorbs rounding when the budget is an exact multiple.
    let k_area = ((constraints.area_budget_mm2 / area_per_cap) * (1.0 + 1e-12)).floor() as usize;

    let k_best = k_timing.map(|kt| kt.min(k_area));
    Ok(StageReport {
        k_best,
        k_timing,
        k_area,
        timing_bound: matches!((k_best, k_timing), (Some(b), Some(t)) if b == t),
        area_bound: matches!(k_best, Some(b) if b == k_area),
    })
}
