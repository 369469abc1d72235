//! Cross-module checks at the reference design point: a 100 pF, 100 kHz
//! ultrasonic receiver driving an 8-stage rectifier.

use sshc::{
    bank_area, best_stage_count, inductor_comparison, max_on_resistance, max_stage_count,
    optimal_storage_voltage, simulate, steady_state_efficiency, total_flip_time, PiezoSource,
    ProcessParams, RectifierModel, SettlingModel, SshcConfig, StageConstraints, StorageOptimum,
    TimingReport,
};

fn source() -> PiezoSource {
    PiezoSource::new(100e-12, 100e3, 10e-6, 0.0)
}

#[test]
fn reference_design_chain() {
    let src = source();
    let process = ProcessParams::default();

    // Largest ON-resistance that still fits the flip in a tenth of the
    // half period, and the flip time it produces.
    let r_on = max_on_resistance(src.c_p, src.period(), 8, 0.1).unwrap();
    assert!((r_on - 117.6470588).abs() < 1e-6);
    let t_flip = total_flip_time(r_on, src.c_p, 8, 5.0).unwrap();
    assert!((t_flip - 0.5e-6).abs() < 1e-9); // T/20 for T = 10 us

    // The same resistance supports exactly eight stages, no more.
    assert_eq!(
        max_stage_count(src.c_p, src.period(), r_on, 0.1).unwrap(),
        Some(8)
    );

    // The timing report agrees with the scalar solvers.
    let config = SshcConfig::equal_bank(8, src.c_p, r_on, 5.0);
    let report = TimingReport::for_design(&src, &config).unwrap();
    assert!((report.flip_fraction - 0.1).abs() < 1e-12);
    assert!((report.tau - r_on * src.c_p / 2.0).abs() < 1e-20);

    // Eight 100 pF capacitors occupy 0.4 mm^2 of die, more than three
    // orders of magnitude below the reference inductor volume.
    let area = bank_area(&config, &process);
    assert!((area - 0.4).abs() < 1e-12);
    let cmp = inductor_comparison(area, 0.3);
    assert!(cmp.ratio > 1000.0);

    // Both constraints are tight at this point.
    let stage = best_stage_count(
        &StageConstraints {
            r_on_available: r_on,
            area_budget_mm2: area,
            budget_fraction: 0.1,
        },
        &src,
        &process,
    )
    .unwrap();
    assert_eq!(stage.k_best, Some(8));
    assert!(stage.timing_bound && stage.area_bound);
}

#[test]
fn more_stages_mean_more_power_at_the_respective_optimum() {
    let src = source();
    let settle = SettlingModel::Full;

    let eta_of = |k: usize| {
        steady_state_efficiency(
            &src,
            &SshcConfig::equal_bank(k, src.c_p, 0.0, 5.0),
            &settle,
            1e-12,
            10_000,
        )
        .unwrap()
        .efficiency
    };

    let p_at_optimum = |model: RectifierModel, eta_closed_form: f64| {
        let StorageOptimum::Bounded { v_s_opt, .. } =
            optimal_storage_voltage(&src, eta_closed_form)
        else {
            panic!("bounded optimum expected")
        };
        simulate(&src, &model, v_s_opt, 5).unwrap().1.p_out
    };

    let eta_1 = eta_of(1);
    let eta_8 = eta_of(8);
    let p_fbr = p_at_optimum(RectifierModel::fbr(), -1.0);
    let p_1 = p_at_optimum(RectifierModel::sshc(eta_1, 0.0), eta_1);
    let p_8 = p_at_optimum(RectifierModel::sshc(eta_8, 0.0), eta_8);

    assert!(
        p_8 > p_1 && p_1 > p_fbr,
        "power ordering violated: k=8 {p_8}, k=1 {p_1}, FBR {p_fbr}"
    );
}

#[test]
fn designed_flip_duration_uses_a_tenth_of_the_half_period() {
    let src = source();
    let r_on = max_on_resistance(src.c_p, src.period(), 8, 0.1).unwrap();
    let t_flip = total_flip_time(r_on, src.c_p, 8, 5.0).unwrap();
    let fraction = t_flip / src.half_period();
    assert!((fraction - 0.1).abs() < 1e-12);

    // Running the simulator with that duration still delivers power.
    let eta = steady_state_efficiency(
        &src,
        &SshcConfig::equal_bank(8, src.c_p, r_on, 5.0),
        &SettlingModel::Full,
        1e-12,
        10_000,
    )
    .unwrap()
    .efficiency;
    let StorageOptimum::Bounded { v_s_opt, .. } = optimal_storage_voltage(&src, eta) else {
        panic!("bounded optimum expected")
    };
    let (_, power) = simulate(&src, &RectifierModel::sshc(eta, t_flip), v_s_opt, 5).unwrap();
    assert!(power.p_out > 0.0);
    assert!(power.q_flip_waste > 0.0);
}
