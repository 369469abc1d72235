//! Command-line front end: efficiency curves, timing/area design
//! reports, waveform simulation, and parameter sweeps, driven by one
//! JSON configuration document.
//!
//! Exit codes: 0 for success or a feasible design, 1 for an infeasible
//! design (the report is still printed), 2 for invalid input.

mod config;
mod report;
mod svg;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sshc::{
    bank_area, best_stage_count, closed_form_efficiency, inductor_comparison, max_on_resistance,
    max_stage_count, mim_area, optimal_storage_voltage, output_power_closed_form, run_sweep,
    simulate_with_steps, steady_state_efficiency, total_flip_time, validate, PiezoSource,
    RectifierModel, SshcConfig, SshcError, StageConstraints, StorageOptimum, TimingReport,
    WaveformTrace,
};

use config::{AutoOrValue, DesignOrValue, RectifierChoice, RunConfig};
use report::{AreaReport, DesignReport, SimulateSummary, StageSearchReport};

/// CLI-level error; everything here maps to exit code 2.
#[derive(Debug)]
pub(crate) struct CliError {
    message: String,
}

impl CliError {
    pub(crate) fn invalid(message: String) -> Self {
        Self { message }
    }

    pub(crate) fn message(&self) -> &str {
        &self.message
    }
}

impl From<SshcError> for CliError {
    fn from(err: SshcError) -> Self {
        Self {
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "sshc",
    version,
    about = "Switched-capacitor flip rectifier analysis and design exploration"
)]
struct Cli {
    /// JSON configuration file; built-in defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the command's table or report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. Tables default to csv, reports to readable text.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write an SVG rendering here (efficiency and simulate only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate flip efficiency against stage count.
    Efficiency,
    /// Solve the timing budget and report the physical design point.
    Design,
    /// Run the time-domain waveform simulation.
    Simulate,
    /// Evaluate objectives over a parameter grid.
    Sweep,
    /// Report capacitor bank area and the inductor size comparison.
    Area,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.svg.is_some() && !matches!(cli.command, Command::Efficiency | Command::Simulate) {
        return Err(CliError::invalid(
            "--svg is only produced by the efficiency and simulate commands".to_string(),
        ));
    }
    match cli.command {
        Command::Efficiency => cmd_efficiency(cli, &config),
        Command::Design => cmd_design(cli, &config),
        Command::Simulate => cmd_simulate(cli, &config),
        Command::Sweep => cmd_sweep(cli, &config),
        Command::Area => cmd_area(cli, &config),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_svg(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))
}

fn emit_report(
    cli: &Cli,
    human: String,
    pairs: Vec<(String, String)>,
    json: String,
) -> Result<(), CliError> {
    let content = match cli.format {
        None => human,
        Some(OutputFormat::Csv) => report::pairs_to_csv(&pairs)?,
        Some(OutputFormat::Json) => json,
    };
    write_output(&cli.out, &content)
}

fn cmd_efficiency(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let eff = &config.efficiency;
    if eff.k_min > eff.k_max {
        return Err(CliError::invalid(format!(
            "efficiency range is empty: k_min {} > k_max {}",
            eff.k_min, eff.k_max
        )));
    }
    let source = config.source();
    let r_on = config.resolved_r_on()?;
    let settling = config.settling();

    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    for k in eff.k_min..=eff.k_max {
        let stage_config =
            SshcConfig::equal_bank(k, source.c_p, r_on, config.rectifier.settle_factor);
        validate(&source, &stage_config)?;
        let result =
            steady_state_efficiency(&source, &stage_config, &settling, eff.tol, eff.max_iters)?;
        if !result.converged {
            return Err(CliError::invalid(format!(
                "efficiency iteration did not converge for k = {k} within {} cycles",
                eff.max_iters
            )));
        }
        rows.push((k, result.efficiency, closed_form_efficiency(k)));
    }

    if let Some(svg_path) = &cli.svg {
        let chart = svg::Chart {
            title: "voltage flip efficiency vs stage count".to_string(),
            x_label: "stage count k".to_string(),
            y_label: "flip efficiency".to_string(),
            series: vec![
                svg::Series {
                    label: "iterative".to_string(),
                    points: rows.iter().map(|(k, eta, _)| (*k as f64, *eta)).collect(),
                },
                svg::Series {
                    label: "equal-capacitor closed form".to_string(),
                    points: rows.iter().map(|(k, _, cf)| (*k as f64, *cf)).collect(),
                },
            ],
        };
        write_svg(svg_path, &svg::render(&[chart]))?;
    }

    let columns = vec![
        "k".to_string(),
        "eta_iterative".to_string(),
        "eta_closed_form".to_string(),
    ];
    let content = match cli.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let text_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(k, eta, cf)| {
                    vec![
                        k.to_string(),
                        table::fmt_number(*eta),
                        table::fmt_number(*cf),
                    ]
                })
                .collect();
            let mut buffer = Vec::new();
            table::write_csv(&mut buffer, &columns, &text_rows)?;
            String::from_utf8(buffer)
                .map_err(|e| CliError::invalid(format!("non-UTF8 CSV: {e}")))?
        }
        OutputFormat::Json => {
            use serde_json::{json, Value};
            let array: Vec<Value> = rows
                .iter()
                .map(|(k, eta, cf)| json!({"k": k, "eta_iterative": eta, "eta_closed_form": cf}))
                .collect();
            let mut text = serde_json::to_string_pretty(&Value::Array(array)).expect("valid JSON");
            text.push('\n');
            text
        }
    };
    write_output(&cli.out, &content)?;
    Ok(0)
}

fn build_design_report(config: &RunConfig) -> Result<DesignReport, CliError> {
    let source = config.source();
    let sshc_config = config.sshc_config()?;
    let process = config.process();
    let budget_fraction = config.design.budget_fraction;

    let max_r_on = max_on_resistance(source.c_p, source.period(), sshc_config.k, budget_fraction)?;
    let timing = TimingReport::for_design(&source, &sshc_config)?;
    let feasible = timing.flip_fraction <= budget_fraction * (1.0 + 1e-9);
    let k_max_at_r_on = if sshc_config.r_on > 0.0 {
        max_stage_count(
            source.c_p,
            source.period(),
            sshc_config.r_on,
            budget_fraction,
        )?
    } else {
        // Zero resistance settles instantly; no stage limit applies.
        None
    };

    let cap_area = mim_area(source.c_p, &process);
    let area = bank_area(&sshc_config, &process);
    let volumes = inductor_comparison(area, config.design.chip_thickness_mm);

    let stage_search = match config.design.area_budget_mm2 {
        Some(area_budget) => {
            let outcome = best_stage_count(
                &StageConstraints {
                    r_on_available: sshc_config.r_on,
                    area_budget_mm2: area_budget,
                    budget_fraction,
                },
                &source,
                &process,
            )?;
            Some(StageSearchReport {
                area_budget_mm2: area_budget,
                k_best: outcome.k_best,
                k_timing_limit: outcome.k_timing,
                k_area_limit: outcome.k_area,
                timing_bound: outcome.timing_bound,
                area_bound: outcome.area_bound,
            })
        }
        None => None,
    };

    Ok(DesignReport {
        k: sshc_config.k,
        c_p_farads: source.c_p,
        f_res_hertz: source.f_res,
        budget_fraction,
        settle_factor: sshc_config.settle_factor,
        max_r_on_ohms: max_r_on,
        r_on_used_ohms: sshc_config.r_on,
        tau_seconds: timing.tau,
        t_phase_seconds: timing.t_phase,
        t_flip_seconds: timing.t_flip,
        half_period_seconds: timing.half_period,
        flip_fraction: timing.flip_fraction,
        feasible,
        k_max_at_r_on,
        cap_area_mm2: cap_area,
        bank_area_mm2: area,
        bank_volume_mm3: volumes.bank_volume_mm3,
        inductor_volume_mm3: volumes.inductor_volume_mm3,
        volume_ratio: volumes.ratio.is_finite().then_some(volumes.ratio),
        stage_search,
    })
}

fn cmd_design(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let design = build_design_report(config)?;
    let feasible = design.feasible
        && design
            .stage_search
            .as_ref()
            .is_none_or(|s| s.k_best.is_some());
    emit_report(
        cli,
        design.human(),
        design.pairs(),
        report::to_json(&design),
    )?;
    Ok(if feasible { 0 } else { 1 })
}

fn cmd_area(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let source = config.source();
    let sshc_config = config.sshc_config()?;
    let process = config.process();
    let area = bank_area(&sshc_config, &process);
    let volumes = inductor_comparison(area, config.design.chip_thickness_mm);
    let area_report = AreaReport {
        c_p_farads: source.c_p,
        mim_density_ff_per_um2: process.mim_density_ff_per_um2,
        cap_area_mm2: mim_area(source.c_p, &process),
        k: sshc_config.k,
        bank_area_mm2: area,
        chip_thickness_mm: config.design.chip_thickness_mm,
        bank_volume_mm3: volumes.bank_volume_mm3,
        inductor_volume_mm3: volumes.inductor_volume_mm3,
        volume_ratio: volumes.ratio.is_finite().then_some(volumes.ratio),
    };
    emit_report(
        cli,
        area_report.human(),
        area_report.pairs(),
        report::to_json(&area_report),
    )?;
    Ok(0)
}

struct ResolvedRectifier {
    model: RectifierModel,
    label: &'static str,
    closed_form_eta: f64,
}

fn resolve_rectifier(
    config: &RunConfig,
    source: &PiezoSource,
) -> Result<ResolvedRectifier, CliError> {
    let sim = &config.simulate;
    match sim.rectifier {
        RectifierChoice::Fbr => Ok(ResolvedRectifier {
            model: RectifierModel::fbr(),
            label: "fbr",
            closed_form_eta: -1.0,
        }),
        RectifierChoice::Sshc => {
            let sshc_config = config.sshc_config()?;
            let result = steady_state_efficiency(
                source,
                &sshc_config,
                &config.settling(),
                config.efficiency.tol,
                config.efficiency.max_iters,
            )?;
            if !result.converged {
                return Err(CliError::invalid(
                    "flip efficiency iteration did not converge".to_string(),
                ));
            }
            let flip_duration = match sim.flip_duration_seconds {
                DesignOrValue::Value(v) => v,
                DesignOrValue::Design(_) => total_flip_time(
                    sshc_config.r_on,
                    source.c_p,
                    sshc_config.k,
                    sshc_config.settle_factor,
                )?,
            };
            Ok(ResolvedRectifier {
                model: RectifierModel::sshc(result.efficiency, flip_duration),
                label: "sshc",
                closed_form_eta: result.efficiency,
            })
        }
        RectifierChoice::Sshi => {
            let eta = sim.sshi_eta.ok_or_else(|| {
                CliError::invalid(
                    "the sshi baseline needs \"sshi_eta\" in the simulate section".to_string(),
                )
            })?;
            let flip_duration = match sim.flip_duration_seconds {
                DesignOrValue::Value(v) => v,
                // The inductor flip has no phase schedule to budget.
                DesignOrValue::Design(_) => 0.0,
            };
            Ok(ResolvedRectifier {
                model: RectifierModel::sshi_baseline(eta, flip_duration),
                label: "sshi",
                closed_form_eta: eta,
            })
        }
    }
}

fn trace_csv(trace: &WaveformTrace) -> Result<String, CliError> {
    let columns = vec![
        "t_seconds".to_string(),
        "i_p_amperes".to_string(),
        "v_pt_volts".to_string(),
    ];
    let rows: Vec<Vec<String>> = trace
        .samples
        .iter()
        .map(|s| {
            vec![
                table::fmt_number(s.t),
                table::fmt_number(s.i_p),
                table::fmt_number(s.v_pt),
            ]
        })
        .collect();
    let mut buffer = Vec::new();
    table::write_csv(&mut buffer, &columns, &rows)?;
    String::from_utf8(buffer).map_err(|e| CliError::invalid(format!("non-UTF8 CSV: {e}")))
}

fn trace_json(trace: &WaveformTrace) -> String {
    use serde_json::{json, Value};
    let array: Vec<Value> = trace
        .samples
        .iter()
        .map(|s| json!({"t_seconds": s.t, "i_p_amperes": s.i_p, "v_pt_volts": s.v_pt}))
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(array)).expect("valid JSON");
    text.push('\n');
    text
}

fn waveform_svg(trace: &WaveformTrace) -> String {
    let current: Vec<(f64, f64)> = trace
        .samples
        .iter()
        .map(|s| (s.t * 1e6, s.i_p * 1e6))
        .collect();
    let voltage: Vec<(f64, f64)> = trace.samples.iter().map(|s| (s.t * 1e6, s.v_pt)).collect();
    let charts = [
        svg::Chart {
            title: "source current".to_string(),
            x_label: "t (\u{00b5}s)".to_string(),
            y_label: "I_P (\u{00b5}A)".to_string(),
            series: vec![svg::Series {
                label: "I_P".to_string(),
                points: svg::downsample(&current, 2000),
            }],
        },
        svg::Chart {
            title: "transducer voltage".to_string(),
            x_label: "t (\u{00b5}s)".to_string(),
            y_label: "V_PT (V)".to_string(),
            series: vec![svg::Series {
                label: "V_PT".to_string(),
                points: svg::downsample(&voltage, 2000),
            }],
        },
    ];
    svg::render(&charts)
}

fn cmd_simulate(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let source = config.source();
    let rectifier = resolve_rectifier(config, &source)?;
    let v_s = match config.simulate.v_s_volts {
        AutoOrValue::Value(v) => v,
        AutoOrValue::Auto(_) => match optimal_storage_voltage(&source, rectifier.closed_form_eta) {
            StorageOptimum::Bounded { v_s_opt, .. } => v_s_opt,
            StorageOptimum::Unbounded => {
                return Err(CliError::invalid(
                    "no finite optimal storage voltage for a lossless flip".to_string(),
                ))
            }
        },
    };

    let (trace, power) = simulate_with_steps(
        &source,
        &rectifier.model,
        v_s,
        config.simulate.n_cycles,
        config.simulate.steps_per_period,
    )?;

    let summary = SimulateSummary {
        rectifier: rectifier.label.to_string(),
        flip_efficiency: rectifier.closed_form_eta,
        v_s_volts: v_s,
        flip_duration_seconds: trace.flip_duration,
        flip_fraction_of_half_period: trace.flip_duration / source.half_period(),
        n_cycles: config.simulate.n_cycles,
        steps_per_period: config.simulate.steps_per_period,
        p_out_watts: power.p_out,
        q_half_coulombs: power.q_half,
        q_reflip_coulombs: power.q_reflip,
        q_flip_waste_coulombs: power.q_flip_waste,
        q_out_coulombs: power.q_out,
        p_out_closed_form_watts: output_power_closed_form(&source, rectifier.closed_form_eta, v_s),
    };

    if let Some(svg_path) = &cli.svg {
        write_svg(svg_path, &waveform_svg(&trace))?;
    }

    match &cli.out {
        Some(out_path) => {
            // The trace goes to the file, the summary to stdout.
            let content = match cli.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => trace_csv(&trace)?,
                OutputFormat::Json => trace_json(&trace),
            };
            write_output(&Some(out_path.clone()), &content)?;
            print!("{}", summary.human());
        }
        None => {
            let content = match cli.format {
                None => summary.human(),
                Some(OutputFormat::Csv) => report::pairs_to_csv(&summary.pairs())?,
                Some(OutputFormat::Json) => report::to_json(&summary),
            };
            print!("{content}");
        }
    }
    Ok(0)
}

fn cmd_sweep(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let spec = config.sweep_spec()?;
    let result = run_sweep(&spec)?;
    let content = match cli.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => table::sweep_table_csv(&result)?,
        OutputFormat::Json => table::sweep_table_json(&result),
    };
    write_output(&cli.out, &content)?;
    Ok(0)
}
