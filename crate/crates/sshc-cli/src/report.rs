//! Report structures for the design, area, and simulate commands, with
//! JSON, key/value CSV, and human-readable renderings.

use serde::Serialize;

use crate::table::{fmt_number, fmt_si};

/// Constrained stage-count search outcome, serialized inside the
/// design report.
#[derive(Debug, Clone, Serialize)]
pub struct StageSearchReport {
    pub area_budget_mm2: f64,
    pub k_best: Option<usize>,
    pub k_timing_limit: Option<usize>,
    pub k_area_limit: usize,
    pub timing_bound: bool,
    pub area_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub k: usize,
    pub c_p_farads: f64,
    pub f_res_hertz: f64,
    pub budget_fraction: f64,
    pub settle_factor: f64,
    /// Largest ON-resistance that meets the budget at this stage count.
    pub max_r_on_ohms: f64,
    /// Resistance the rest of the report is evaluated at.
    pub r_on_used_ohms: f64,
    pub tau_seconds: f64,
    pub t_phase_seconds: f64,
    pub t_flip_seconds: f64,
    pub half_period_seconds: f64,
    pub flip_fraction: f64,
    pub feasible: bool,
    /// Largest stage count the used resistance supports.
    pub k_max_at_r_on: Option<usize>,
    pub cap_area_mm2: f64,
    pub bank_area_mm2: f64,
    pub bank_volume_mm3: f64,
    pub inductor_volume_mm3: f64,
    /// Inductor volume over bank volume; none for an empty bank.
    pub volume_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_search: Option<StageSearchReport>,
}

impl DesignReport {
    fn stage_limit_text(&self) -> String {
        if self.r_on_used_ohms == 0.0 {
            // Zero resistance settles instantly; every stage count fits.
            return "unlimited".to_string();
        }
        self.k_max_at_r_on
            .map_or("infeasible".to_string(), |k| k.to_string())
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("k".to_string(), self.k.to_string()),
            ("c_p_farads".to_string(), fmt_number(self.c_p_farads)),
            ("f_res_hertz".to_string(), fmt_number(self.f_res_hertz)),
            (
                "budget_fraction".to_string(),
                fmt_number(self.budget_fraction),
            ),
            ("settle_factor".to_string(), fmt_number(self.settle_factor)),
            ("max_r_on_ohms".to_string(), fmt_number(self.max_r_on_ohms)),
            (
                "r_on_used_ohms".to_string(),
                fmt_number(self.r_on_used_ohms),
            ),
            ("tau_seconds".to_string(), fmt_number(self.tau_seconds)),
            (
                "t_phase_seconds".to_string(),
                fmt_number(self.t_phase_seconds),
            ),
            (
                "t_flip_seconds".to_string(),
                fmt_number(self.t_flip_seconds),
            ),
            (
                "half_period_seconds".to_string(),
                fmt_number(self.half_period_seconds),
            ),
            ("flip_fraction".to_string(), fmt_number(self.flip_fraction)),
            ("feasible".to_string(), self.feasible.to_string()),
            ("k_max_at_r_on".to_string(), self.stage_limit_text()),
            ("cap_area_mm2".to_string(), fmt_number(self.cap_area_mm2)),
            ("bank_area_mm2".to_string(), fmt_number(self.bank_area_mm2)),
            (
                "bank_volume_mm3".to_string(),
                fmt_number(self.bank_volume_mm3),
            ),
            (
                "inductor_volume_mm3".to_string(),
                fmt_number(self.inductor_volume_mm3),
            ),
            (
                "volume_ratio".to_string(),
                self.volume_ratio
                    .map_or("unbounded".to_string(), fmt_number),
            ),
        ];
        if let Some(search) = &self.stage_search {
            pairs.push((
                "area_budget_mm2".to_string(),
                fmt_number(search.area_budget_mm2),
            ));
            pairs.push((
                "k_best".to_string(),
                search
                    .k_best
                    .map_or("infeasible".to_string(), |k| k.to_string()),
            ));
            pairs.push((
                "k_timing_limit".to_string(),
                search
                    .k_timing_limit
                    .map_or("infeasible".to_string(), |k| k.to_string()),
            ));
            pairs.push(("k_area_limit".to_string(), search.k_area_limit.to_string()));
        }
        pairs
    }

    pub fn human(&self) -> String {
        let mut text = String::new();
        text.push_str(&format!(
            "design point: k = {}, C_P = {}, f_res = {}\n",
            self.k,
            fmt_si(self.c_p_farads, "F"),
            fmt_si(self.f_res_hertz, "Hz")
        ));
        text.push_str(&format!(
            "flip budget: {:.4} of the half period ({})\n",
            self.budget_fraction,
            fmt_si(self.half_period_seconds, "s")
        ));
        text.push_str(&format!(
            "R_ON <= {}  (used: {})\n",
            fmt_si(self.max_r_on_ohms, "\u{03a9}"),
            fmt_si(self.r_on_used_ohms, "\u{03a9}")
        ));
        text.push_str(&format!(
            "tau = {}, t_phase = {} ({} tau), T_F = {}\n",
            fmt_si(self.tau_seconds, "s"),
            fmt_si(self.t_phase_seconds, "s"),
            fmt_number(self.settle_factor),
            fmt_si(self.t_flip_seconds, "s")
        ));
        text.push_str(&format!(
            "flip fraction: {:.4} of the half period -> {}\n",
            self.flip_fraction,
            if self.feasible {
                "feasible"
            } else {
                "INFEASIBLE"
            }
        ));
        text.push_str(&format!(
            "stage limit at used R_ON: {}\n",
            match self.stage_limit_text().as_str() {
                "unlimited" => "unlimited (zero resistance)".to_string(),
                "infeasible" => "infeasible".to_string(),
                k => format!("k <= {k}"),
            }
        ));
        text.push_str(&format!(
            "bank area: {:.4} mm\u{00b2} ({:.4} mm\u{00b2} per capacitor)\n",
            self.bank_area_mm2, self.cap_area_mm2
        ));
        text.push_str(&format!(
            "bank volume: {:.4} mm\u{00b3} vs inductor {:.0} mm\u{00b3} ({})\n",
            self.bank_volume_mm3,
            self.inductor_volume_mm3,
            self.volume_ratio
                .map_or("unbounded ratio".to_string(), |r| format!(
                    "{:.0}x smaller",
                    r
                ))
        ));
        if let Some(search) = &self.stage_search {
            text.push_str(&format!(
                "stage search under {:.4} mm\u{00b2}: {}",
                search.area_budget_mm2,
                search
                    .k_best
                    .map_or("infeasible".to_string(), |k| format!("k_best = {k}"))
            ));
            if search.k_best == Some(0) {
                text.push_str(" (bank is empty: clearing phase only)");
            }
            text.push_str(&format!(
                " [timing limit {}, area limit {}]\n",
                search
                    .k_timing_limit
                    .map_or("infeasible".to_string(), |k| k.to_string()),
                search.k_area_limit
            ));
        }
        text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AreaReport {
    pub c_p_farads: f64,
    pub mim_density_ff_per_um2: f64,
    pub cap_area_mm2: f64,
    pub k: usize,
    pub bank_area_mm2: f64,
    pub chip_thickness_mm: f64,
    pub bank_volume_mm3: f64,
    pub inductor_volume_mm3: f64,
    pub volume_ratio: Option<f64>,
}

impl AreaReport {
    pub fn pairs(&self) -> Vec<(String, String)> {
        vec![
            ("c_p_farads".to_string(), fmt_number(self.c_p_farads)),
            (
                "mim_density_ff_per_um2".to_string(),
                fmt_number(self.mim_density_ff_per_um2),
            ),
            ("cap_area_mm2".to_string(), fmt_number(self.cap_area_mm2)),
            ("k".to_string(), self.k.to_string()),
            ("bank_area_mm2".to_string(), fmt_number(self.bank_area_mm2)),
            (
                "chip_thickness_mm".to_string(),
                fmt_number(self.chip_thickness_mm),
            ),
            (
                "bank_volume_mm3".to_string(),
                fmt_number(self.bank_volume_mm3),
            ),
            (
                "inductor_volume_mm3".to_string(),
                fmt_number(self.inductor_volume_mm3),
            ),
            (
                "volume_ratio".to_string(),
                self.volume_ratio
                    .map_or("unbounded".to_string(), fmt_number),
            ),
        ]
    }

    pub fn human(&self) -> String {
        let mut text = String::new();
        text.push_str(&format!(
            "one {} capacitor at {} fF/\u{00b5}m\u{00b2}: {:.4} mm\u{00b2}\n",
            fmt_si(self.c_p_farads, "F"),
            fmt_number(self.mim_density_ff_per_um2),
            self.cap_area_mm2
        ));
        text.push_str(&format!(
            "bank of {}: {:.4} mm\u{00b2}, {:.4} mm\u{00b3} at {:.2} mm thickness\n",
            self.k, self.bank_area_mm2, self.bank_volume_mm3, self.chip_thickness_mm
        ));
        text.push_str(&format!(
            "reference inductor: {:.0} mm\u{00b3} ({})\n",
            self.inductor_volume_mm3,
            self.volume_ratio
                .map_or("unbounded ratio".to_string(), |r| format!("{r:.0}x larger"))
        ));
        text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub rectifier: String,
    pub flip_efficiency: f64,
    pub v_s_volts: f64,
    pub flip_duration_seconds: f64,
    pub flip_fraction_of_half_period: f64,
    pub n_cycles: usize,
    pub steps_per_period: usize,
    pub p_out_watts: f64,
    pub q_half_coulombs: f64,
    pub q_reflip_coulombs: f64,
    pub q_flip_waste_coulombs: f64,
    pub q_out_coulombs: f64,
    /// Closed-form power at the same storage voltage in the
    /// instantaneous-flip limit, for reference.
    pub p_out_closed_form_watts: f64,
}

impl SimulateSummary {
    pub fn pairs(&self) -> Vec<(String, String)> {
        vec![
            ("rectifier".to_string(), self.rectifier.clone()),
            (
                "flip_efficiency".to_string(),
                fmt_number(self.flip_efficiency),
            ),
            ("v_s_volts".to_string(), fmt_number(self.v_s_volts)),
            (
                "flip_duration_seconds".to_string(),
                fmt_number(self.flip_duration_seconds),
            ),
            (
                "flip_fraction_of_half_period".to_string(),
                fmt_number(self.flip_fraction_of_half_period),
            ),
            ("n_cycles".to_string(), self.n_cycles.to_string()),
            (
                "steps_per_period".to_string(),
                self.steps_per_period.to_string(),
            ),
            ("p_out_watts".to_string(), fmt_number(self.p_out_watts)),
            (
                "q_half_coulombs".to_string(),
                fmt_number(self.q_half_coulombs),
            ),
            (
                "q_reflip_coulombs".to_string(),
                fmt_number(self.q_reflip_coulombs),
            ),
            (
                "q_flip_waste_coulombs".to_string(),
                fmt_number(self.q_flip_waste_coulombs),
            ),
            (
                "q_out_coulombs".to_string(),
                fmt_number(self.q_out_coulombs),
            ),
            (
                "p_out_closed_form_watts".to_string(),
                fmt_number(self.p_out_closed_form_watts),
            ),
        ]
    }

    pub fn human(&self) -> String {
        let mut text = String::new();
        text.push_str(&format!(
            "rectifier: {} (flip efficiency {:.4})\n",
            self.rectifier, self.flip_efficiency
        ));
        text.push_str(&format!(
            "storage voltage: {}  flip time: {} ({:.4} of the half period)\n",
            fmt_si(self.v_s_volts, "V"),
            fmt_si(self.flip_duration_seconds, "s"),
            self.flip_fraction_of_half_period
        ));
        text.push_str(&format!(
            "output power: {}  (closed form at T_F = 0: {})\n",
            fmt_si(self.p_out_watts, "W"),
            fmt_si(self.p_out_closed_form_watts, "W")
        ));
        text.push_str(&format!(
            "charge per half cycle: {}  reflip: {}  flip waste: {}  delivered: {}\n",
            fmt_si(self.q_half_coulombs, "C"),
            fmt_si(self.q_reflip_coulombs, "C"),
            fmt_si(self.q_flip_waste_coulombs, "C"),
            fmt_si(self.q_out_coulombs, "C")
        ));
        text
    }
}

/// Serializes any report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

/// Renders key/value pairs as a two-column CSV.
pub fn pairs_to_csv(pairs: &[(String, String)]) -> Result<String, crate::CliError> {
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|(k, v)| vec![k.clone(), v.clone()])
        .collect();
    let mut buffer = Vec::new();
    crate::table::write_csv(
        &mut buffer,
        &["field".to_string(), "value".to_string()],
        &rows,
    )?;
    String::from_utf8(buffer).map_err(|e| crate::CliError::invalid(format!("non-UTF8 CSV: {e}")))
}
