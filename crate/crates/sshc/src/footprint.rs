//! Physical footprint estimates for the capacitor bank.
//!
//! On-chip MIM capacitors in a typical 0.18 um process come in at about
//! 2 fF/um^2, which makes a 100 pF flip capacitor roughly 0.05 mm^2 of
//! silicon. The inductor a resonant-flip rectifier would need instead
//! is a discrete part of around a cubic centimeter; the comparison here
//! puts a number on that gap.

use crate::model::SshcConfig;

/// Reference volume of the millihenry-class inductor the comparison is
/// made against, in mm^3 (one cubic centimeter).
pub const REFERENCE_INDUCTOR_VOLUME_MM3: f64 = 1000.0;

/// Default assumed die thickness in millimeters when converting bank
/// area to volume.
pub const DEFAULT_CHIP_THICKNESS_MM: f64 = 0.3;

/// Process constants for capacitor area estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    /// MIM capacitance density in fF/um^2.
    pub mim_density_ff_per_um2: f64,
}

impl Default for ProcessParams {
    fn default() -> Self {
        Self {
            mim_density_ff_per_um2: 2.0,
        }
    }
}

/// Bank-versus-inductor size comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductorComparison {
    /// Capacitor bank volume in mm^3 (area times die thickness).
    pub bank_volume_mm3: f64,
    /// Reference inductor volume in mm^3.
    pub inductor_volume_mm3: f64,
    /// Inductor volume over bank volume; infinite for a zero-area bank.
    pub ratio: f64,
}

/// Die area of a single MIM capacitor of `c` farads, in mm^2.
///
/// `fF/um^2` equals `1e-3 F/m^2`, so the area in mm^2 works out to
/// `c * 1e9 / density`.
pub fn mim_area(c: f64, process: &ProcessParams) -> f64 {
    debug_assert!(c >= 0.0);
    c * 1e9 / process.mim_density_ff_per_um2
}

/// Total die area of the configured capacitor bank, in mm^2.
pub fn bank_area(config: &SshcConfig, process: &ProcessParams) -> f64 {
    config.bank.iter().map(|&c| mim_area(c, process)).sum()
}

/// Compares the bank's volume against the reference inductor volume.
pub fn inductor_comparison(bank_area_mm2: f64, chip_thickness_mm: f64) -> InductorComparison {
    debug_assert!(chip_thickness_mm > 0.0);
    let bank_volume_mm3 = bank_area_mm2 * chip_thickness_mm;
    let ratio = if bank_volume_mm3 > 0.0 {
        REFERENCE_INDUCTOR_VOLUME_MM3 / bank_volume_mm3
    } else {
        f64::INFINITY
    };
    InductorComparison {
        bank_volume_mm3,
        inductor_volume_mm3: REFERENCE_INDUCTOR_VOLUME_MM3,
        ratio,
    }
}
