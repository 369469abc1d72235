//! JSON run configuration: one document covering every subcommand's
//! inputs, with the reference defaults of a 100 pF / 100 kHz ultrasonic
//! receiver and an 8-stage rectifier. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sshc::{
    max_on_resistance, AxisSpacing, PiezoSource, ProcessParams, SettlingModel, SshcConfig,
    SweepAxis, SweepFixed, SweepObjective, SweepParameter, SweepSpec,
};

use crate::CliError;

/// Marker for a value the tool should derive itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoWord {
    #[serde(rename = "auto")]
    Auto,
}

/// Marker for "take it from the timing design".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignWord {
    #[serde(rename = "design")]
    Design,
}

/// A number or the string `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutoOrValue {
    Value(f64),
    Auto(AutoWord),
}

/// A number or the string `"design"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DesignOrValue {
    Value(f64),
    Design(DesignWord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceConfig {
    pub c_p_farads: f64,
    pub f_res_hertz: f64,
    /// The source current amplitude is not a property of the reference
    /// design; 10 uA is an arbitrary but representative default.
    pub i_amp_amperes: f64,
    pub v_d_volts: f64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            c_p_farads: 100e-12,
            f_res_hertz: 100e3,
            i_amp_amperes: 10e-6,
            v_d_volts: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RectifierConfig {
    /// Stage count k.
    pub k: usize,
    /// Explicit bank capacitances; omitted means k capacitors equal to C_P.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bank_farads: Option<Vec<f64>>,
    /// Loop ON-resistance, or "auto" to use the largest budget-compatible value.
    pub r_on_ohms: AutoOrValue,
    pub settle_factor: f64,
}

impl Default for RectifierConfig {
    fn default() -> Self {
        Self {
            k: 8,
            bank_farads: None,
            r_on_ohms: AutoOrValue::Auto(AutoWord::Auto),
            settle_factor: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum SettlingConfig {
    #[default]
    Full,
    Partial {
        t_phase_seconds: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProcessConfig {
    pub mim_density_ff_per_um2: f64,
}

impl Default for ProcessConfig {
    fn default() -> Self {
        Self {
            mim_density_ff_per_um2: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignConfig {
    /// Fraction of the half period allotted to the flip.
    pub budget_fraction: f64,
    pub chip_thickness_mm: f64,
    /// Optional die-area budget; when set, the design report also runs
    /// the constrained stage-count search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_budget_mm2: Option<f64>,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            budget_fraction: 0.1,
            chip_thickness_mm: 0.3,
            area_budget_mm2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EfficiencyConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for EfficiencyConfig {
    fn default() -> Self {
        Self {
            k_min: 1,
            k_max: 8,
            tol: 1e-12,
            max_iters: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RectifierChoice {
    Fbr,
    Sshc,
    Sshi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub rectifier: RectifierChoice,
    /// Storage voltage, or "auto" for the power-optimal value.
    pub v_s_volts: AutoOrValue,
    /// Flip duration, or "design" for the budgeted flip time. The
    /// design value applies to the switched-capacitor rectifier; the
    /// baselines treat "design" as an instantaneous flip.
    pub flip_duration_seconds: DesignOrValue,
    /// Flip efficiency for the inductor-flip baseline.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sshi_eta: Option<f64>,
    pub n_cycles: usize,
    pub steps_per_period: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            rectifier: RectifierChoice::Sshc,
            v_s_volts: AutoOrValue::Auto(AutoWord::Auto),
            flip_duration_seconds: DesignOrValue::Design(DesignWord::Design),
            sshi_eta: None,
            n_cycles: 5,
            steps_per_period: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxisConfig {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default = "default_spacing")]
    pub spacing: SpacingConfig,
}

fn default_spacing() -> SpacingConfig {
    SpacingConfig::Linear
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingConfig {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<SweepAxisConfig>,
    pub objectives: Vec<String>,
}

/// The whole run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub source: SourceConfig,
    pub rectifier: RectifierConfig,
    pub settling: SettlingConfig,
    pub process: ProcessConfig,
    pub design: DesignConfig,
    pub efficiency: EfficiencyConfig,
    pub simulate: SimulateConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("invalid configuration: {e}")))
    }

    pub fn source(&self) -> PiezoSource {
        PiezoSource::new(
            self.source.c_p_farads,
            self.source.f_res_hertz,
            self.source.i_amp_amperes,
            self.source.v_d_volts,
        )
    }

    /// Resolves the configured ON-resistance; "auto" solves the timing
    /// budget for the configured stage count.
    pub fn resolved_r_on(&self) -> Result<f64, CliError> {
        match self.rectifier.r_on_ohms {
            AutoOrValue::Value(r) => Ok(r),
            AutoOrValue::Auto(_) => {
                let source = self.source();
                max_on_resistance(
                    source.c_p,
                    source.period(),
                    self.rectifier.k,
                    self.design.budget_fraction,
                )
                .map_err(CliError::from)
            }
        }
    }

    pub fn sshc_config(&self) -> Result<SshcConfig, CliError> {
        let r_on = self.resolved_r_on()?;
        let config = match &self.rectifier.bank_farads {
            Some(bank) => SshcConfig {
                k: self.rectifier.k,
                bank: bank.clone(),
                r_on,
                settle_factor: self.rectifier.settle_factor,
            },
            None => SshcConfig::equal_bank(
                self.rectifier.k,
                self.source.c_p_farads,
                r_on,
                self.rectifier.settle_factor,
            ),
        };
        sshc::validate(&self.source(), &config)?;
        Ok(config)
    }

    pub fn settling(&self) -> SettlingModel {
        match self.settling {
            SettlingConfig::Full => SettlingModel::Full,
            SettlingConfig::Partial { t_phase_seconds } => SettlingModel::Partial {
                t_phase: t_phase_seconds,
            },
        }
    }

    pub fn process(&self) -> ProcessParams {
        ProcessParams {
            mim_density_ff_per_um2: self.process.mim_density_ff_per_um2,
        }
    }

    /// Builds the sweep description, reporting the offending axis or
    /// objective by name on failure.
    pub fn sweep_spec(&self) -> Result<SweepSpec, CliError> {
        let Some(sweep) = &self.sweep else {
            return Err(CliError::invalid(
                "the sweep command needs a \"sweep\" section in the configuration".to_string(),
            ));
        };
        let axes = sweep
            .axes
            .iter()
            .map(|axis| {
                let parameter = SweepParameter::parse(&axis.name)
                    .map_err(|_| CliError::invalid(format!("unknown sweep axis: {}", axis.name)))?;
                Ok(SweepAxis {
                    parameter,
                    min: axis.min,
                    max: axis.max,
                    steps: axis.steps,
                    spacing: match axis.spacing {
                        SpacingConfig::Linear => AxisSpacing::Linear,
                        SpacingConfig::Log => AxisSpacing::Log,
                    },
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let objectives = sweep
            .objectives
            .iter()
            .map(|name| {
                SweepObjective::parse(name)
                    .map_err(|_| CliError::invalid(format!("unknown sweep objective: {name}")))
            })
            .collect::<Result<Vec<_>, CliError>>()?;

        let fixed = SweepFixed {
            source: self.source(),
            k: self.rectifier.k,
            r_on: self.resolved_r_on()?,
            v_s: match self.simulate.v_s_volts {
                AutoOrValue::Value(v) => v,
                AutoOrValue::Auto(_) => 0.0,
            },
            settle_factor: self.rectifier.settle_factor,
            budget_fraction: self.design.budget_fraction,
            process: self.process(),
            settling: self.settling(),
            tol: self.efficiency.tol,
            max_iters: self.efficiency.max_iters,
        };
        Ok(SweepSpec {
            axes,
            fixed,
            objectives,
        })
    }
}
