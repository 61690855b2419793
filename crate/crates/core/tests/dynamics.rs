use std::f64::consts::PI;

use coupler::config::{validate_config, Config};
use coupler::dynamics::{
    exchange_time, normal_modes, simulate, simulate_with, CoupledOscillatorSystem, Integrator, SimulationOptions, State,
};
use coupler::linear::{self, CapacitanceRatio};

const M: f64 = 6.64e-26;
const W: f64 = 2.0 * PI * 1e6;

fn scaled(ratio: f64) -> CoupledOscillatorSystem {
    CoupledOscillatorSystem::identical(M, W, ratio * M * W * W, 1e-8).unwrap()
}

fn measured_exchange(system: &CoupledOscillatorSystem) -> f64 {
    let beat = PI / normal_modes(system).unwrap().splitting;
    let dt = system.fastest_period() / 1000.0;
    let options = SimulationOptions {
        record_stride: 5,
        ..Default::default()
    };
    exchange_time(&simulate_with(system, 1.2 * beat, dt, options).unwrap()).unwrap()
}

#[test]
fn exchange_matches_swap_time_from_config() {
    let v = validate_config(&Config::example()).unwrap();
    let k = v.k1();
    let gamma = 1e-3 * k;
    let t_swap = linear::rabi_coupling_for(&v, gamma).unwrap().t_swap_s;
    let s = CoupledOscillatorSystem::new(v.ion1.mass_kg, v.ion2.mass_kg, k, v.k2(), gamma, State { x1: 1e-8, ..State::default() }).unwrap();
    let t = measured_exchange(&s);
    assert!(((t - t_swap) / t_swap).abs() < 0.01, "{t} vs {t_swap}");
}

#[test]
fn exchange_time_scales_inversely_with_gamma() {
    let t1 = measured_exchange(&scaled(2e-3));
    let t2 = measured_exchange(&scaled(1e-3));
    assert!((t2 / t1 - 2.0).abs() < 0.02);
}

#[test]
fn sign_of_gamma_does_not_matter() {
    let t_pos = measured_exchange(&scaled(1e-3));
    let t_neg = measured_exchange(&scaled(-1e-3));
    assert!(((t_pos - t_neg) / t_pos).abs() < 1e-6);
}

#[test]
fn energy_contract_over_one_beat() {
    let s = scaled(1e-3);
    let beat = 2.0 * PI / normal_modes(&s).unwrap().splitting;
    let dt = s.fastest_period() / 1000.0;
    let drift = simulate(&s, beat, dt).unwrap().max_energy_drift();
    assert!(drift < 1e-6, "{drift}");
}

#[test]
fn energy_moves_fully_across() {
    let s = scaled(1e-3);
    let t = measured_exchange(&s);
    let dt = s.fastest_period() / 1000.0;
    let tr = simulate(&s, t, dt).unwrap();
    let end = tr.last();
    assert!(end.e1 / end.e_total < 1e-3);
}

#[test]
fn reversibility() {
    let s = scaled(1e-3);
    let dt = s.fastest_period() / 500.0;
    for integrator in [Integrator::Yoshida4, Integrator::VelocityVerlet] {
        let options = SimulationOptions {
            integrator,
            record_stride: 1000,
        };
        let fwd = simulate_with(&s, 2e-4, dt, options).unwrap();
        let e = fwd.last().state();
        let rev = s.with_state(State {
            v1: -e.v1,
            v2: -e.v2,
            ..e
        });
        let steps = (2e-4 / dt).round();
        let back = simulate_with(&rev, steps * dt, dt, options).unwrap().last().state();
        assert!((back.x1 - 1e-8).abs() < 1e-17, "{integrator:?}");
        assert!(back.x2.abs() < 1e-17, "{integrator:?}");
    }
}

#[test]
fn non_finite_state_rejected() {
    assert!(CoupledOscillatorSystem::new(M, M, 1.0, 1.0, 0.0, State { x1: f64::NAN, ..State::default() }).is_err());
}

#[test]
fn physical_coupling_checked_analytically() {
    let v = validate_config(&Config::example()).unwrap();
    let gamma = linear::coupling_factors(&v, &CapacitanceRatio).unwrap().gamma;
    let s = CoupledOscillatorSystem::identical(v.ion1.mass_kg, v.trap1.angular_frequency, gamma, 1e-8).unwrap();
    let g = linear::rabi_coupling_for(&v, gamma).unwrap().g_rad_per_s;
    let split = normal_modes(&s).unwrap().splitting;
    assert!((split / (2.0 * g) - 1.0).abs() < 1e-6);
}
