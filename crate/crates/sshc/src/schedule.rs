//! Generation of the 2k+1-phase switch schedule.
//!
//! A k-stage rectifier flips the transducer voltage through 2k+1 phases:
//! k charge-dump phases connecting the bank capacitors one by one, a
//! clearing phase shorting the transducer node, and k charge-return
//! phases reconnecting the same capacitors in reverse order with the
//! opposite polarity. One canonical schedule describes the
//! positive-to-negative flip; the reverse flip is the same sequence with
//! every connection polarity negated.

/// How a bank capacitor is wired to the transducer node during a phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Capacitor presents its own voltage to the node.
    Same,
    /// Capacitor is connected upside down and presents the negated voltage.
    Reversed,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Same => Polarity::Reversed,
            Polarity::Reversed => Polarity::Same,
        }
    }

    /// +1 for same-polarity connection, -1 for reversed.
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Same => 1.0,
            Polarity::Reversed => -1.0,
        }
    }
}

/// One step of the flip schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Charge-share the transducer capacitance with bank capacitor
    /// `cap` (0-based index) in the given polarity.
    Share { cap: usize, polarity: Polarity },
    /// Short the transducer node to ground, clearing its remaining charge.
    Clear,
}

impl Phase {
    /// Conventional phase name: `phi_1p`, `phi_0`, `phi_1n`, ...
    pub fn name(&self) -> String {
        match self {
            Phase::Clear => "phi_0".to_string(),
            Phase::Share { cap, polarity } => {
                let suffix = match polarity {
                    Polarity::Same => 'p',
                    Polarity::Reversed => 'n',
                };
                format!("phi_{}{}", cap + 1, suffix)
            }
        }
    }

    fn with_flipped_polarity(self) -> Self {
        match self {
            Phase::Clear => Phase::Clear,
            Phase::Share { cap, polarity } => Phase::Share {
                cap,
                polarity: polarity.flipped(),
            },
        }
    }
}

/// Which way the transducer voltage is being flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipDirection {
    /// Positive to negative: the canonical schedule as generated.
    Down,
    /// Negative to positive: the canonical schedule with all
    /// connection polarities negated.
    Up,
}

/// The ordered 2k+1 phase sequence of one voltage flip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSchedule {
    k: usize,
    phases: Vec<Phase>,
}

impl PhaseSchedule {
    pub fn stage_count(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Phases of the canonical (down) flip, in order.
    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Phases for a flip in the given direction. `Down` returns the
    /// canonical order; `Up` returns the same order with polarities
    /// negated.
    pub fn phases_for(&self, direction: FlipDirection) -> Vec<Phase> {
        match direction {
            FlipDirection::Down => self.phases.clone(),
            FlipDirection::Up => self
                .phases
                .iter()
                .map(|p| p.with_flipped_polarity())
                .collect(),
        }
    }
}

/// Builds the canonical down-flip schedule for a k-stage rectifier:
/// `phi_1p .. phi_kp, phi_0, phi_kn .. phi_1n`. `k = 0` yields the
/// single-phase schedule `[phi_0]`.
pub fn build_phase_schedule(k: usize) -> PhaseSchedule {
    let mut phases = Vec::with_capacity(2 * k + 1);
    for cap in 0..k {
        phases.push(Phase::Share {
            cap,
            polarity: Polarity::Same,
        });
    }
    phases.push(Phase::Clear);
    for cap in (0..k).rev() {
        phases.push(Phase::Share {
            cap,
            polarity: Polarity::Reversed,
        });
    }
    PhaseSchedule { k, phases }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_stage_schedule() {
        let s = build_phase_schedule(1);
        assert_eq!(s.len(), 3);
        assert_eq!(
            s.phases(),
            &[
                Phase::Share {
                    cap: 0,
                    polarity: Polarity::Same
                },
                Phase::Clear,
                Phase::Share {
                    cap: 0,
                    polarity: Polarity::Reversed
                },
            ]
        );
    }

    #[test]
    fn eight_stage_schedule_ends_with_caps_two_then_one() {
        let s = build_phase_schedule(8);
        assert_eq!(s.len(), 17);
        let names: Vec<String> = s.phases().iter().map(|p| p.name()).collect();
        assert_eq!(names[0], "phi_1p");
        assert_eq!(names[7], "phi_8p");
        assert_eq!(names[8], "phi_0");
        assert_eq!(names[15], "phi_2n");
        assert_eq!(names[16], "phi_1n");
    }

    #[test]
    fn zero_stage_schedule_is_clear_only() {
        let s = build_phase_schedule(0);
        assert_eq!(s.phases(), &[Phase::Clear]);
    }

    #[test]
    fn schedule_is_a_polarity_swapped_palindrome() {
        for k in 0..16 {
            let s = build_phase_schedule(k);
            let mirrored: Vec<Phase> = s
                .phases()
                .iter()
                .rev()
                .map(|p| p.with_flipped_polarity())
                .collect();
            assert_eq!(mirrored, s.phases(), "k = {k}");
        }
    }

    #[test]
    fn paired_phases_reference_the_same_capacitor() {
        let s = build_phase_schedule(12);
        let phases = s.phases();
        let k = s.stage_count();
        for i in 1..=k {
            // 1-based positions i and 2k+2-i hold the p- and n-phases of cap i.
            let p = phases[i - 1];
            let n = phases[2 * k + 1 - i];
            match (p, n) {
                (
                    Phase::Share {
                        cap: cp,
                        polarity: Polarity::Same,
                    },
                    Phase::Share {
                        cap: cn,
                        polarity: Polarity::Reversed,
                    },
                ) => {
                    assert_eq!(cp, cn);
                    assert_eq!(cp, i - 1);
                }
                other => panic!("unexpected phase pair {other:?}"),
            }
        }
    }

    #[test]
    fn up_flip_negates_every_polarity() {
        let s = build_phase_schedule(3);
        let up = s.phases_for(FlipDirection::Up);
        for (down_phase, up_phase) in s.phases().iter().zip(&up) {
            assert_eq!(down_phase.with_flipped_polarity(), *up_phase);
        }
        assert_eq!(up[0].name(), "phi_1n");
        assert_eq!(up[6].name(), "phi_1p");
    }
}
