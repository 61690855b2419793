//! Two classical harmonic oscillators coupled through γ·x₁·x₂.
//!
//! H = ½m₁v₁² + ½m₂v₂² + ½k₁x₁² + ½k₂x₂² + γx₁x₂
//!
//! For identical oscillators the normal modes are ω± = √((k ± γ)/m) and
//! energy moves fully from one oscillator to the other in π/|ω₊ − ω₋|. The
//! sign of γ only swaps which mode is symmetric, so exchange depends on |γ|.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};

/// |γ| above this fraction of min(k₁, k₂) triggers a weak-coupling warning.
pub const WEAK_COUPLING_WARNING: f64 = 0.1;
/// dt must not exceed this fraction of the fastest normal-mode period.
pub const MAX_STEP_FRACTION: f64 = 0.01;
/// An envelope minimum must drop below this fraction of the preceding
/// envelope maximum to count as an exchange.
pub const EXCHANGE_DEPTH: f64 = 0.5;

const EQUALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledOscillatorSystem {
    pub m1: f64,
    pub m2: f64,
    pub k1: f64,
    pub k2: f64,
    pub gamma: f64,
    pub state: State,
}

impl CoupledOscillatorSystem {
    pub fn new(m1: f64, m2: f64, k1: f64, k2: f64, gamma: f64, state: State) -> Result<Self> {
        require_positive("m1", m1)?;
        require_positive("m2", m2)?;
        require_positive("k1", k1)?;
        require_positive("k2", k2)?;
        require_finite("gamma", gamma)?;
        for (name, v) in [("x1", state.x1), ("v1", state.v1), ("x2", state.x2), ("v2", state.v2)] {
            require_finite(name, v)?;
        }
        let k_min = k1.min(k2);
        if gamma.abs() >= k_min {
            return Err(Error::invalid(
                "gamma",
                format!("|gamma| = {} must stay below min(k1, k2) = {k_min}", gamma.abs()),
            ));
        }
        if gamma.abs() > WEAK_COUPLING_WARNING * k_min {
            log::warn!(
                "coupling |gamma|/min(k) = {:.3} is not weak; the two-mode picture is only approximate",
                gamma.abs() / k_min
            );
        }
        Ok(Self {
            m1,
            m2,
            k1,
            k2,
            gamma,
            state,
        })
    }

    /// Identical oscillators (mass `m`, frequency `omega`) with `x1 = amplitude`
    /// and everything else at rest.
    pub fn identical(m: f64, omega: f64, gamma: f64, amplitude: f64) -> Result<Self> {
        let k = m * omega * omega;
        Self::new(
            m,
            m,
            k,
            k,
            gamma,
            State {
                x1: amplitude,
                ..State::default()
            },
        )
    }

    pub fn with_state(&self, state: State) -> Self {
        Self { state, ..*self }
    }

    pub fn acceleration(&self, x1: f64, x2: f64) -> (f64, f64) {
        (
            -(self.k1 * x1 + self.gamma * x2) / self.m1,
            -(self.k2 * x2 + self.gamma * x1) / self.m2,
        )
    }

    /// (E₁, E₂, E_total); the coupling energy only enters the total.
    pub fn energies(&self, s: &State) -> (f64, f64, f64) {
        let e1 = 0.5 * self.m1 * s.v1 * s.v1 + 0.5 * self.k1 * s.x1 * s.x1;
        let e2 = 0.5 * self.m2 * s.v2 * s.v2 + 0.5 * self.k2 * s.x2 * s.x2;
        (e1, e2, e1 + e2 + self.gamma * s.x1 * s.x2)
    }

    /// Normal-mode angular frequencies (high, low) for arbitrary parameters.
    pub fn eigenfrequencies(&self) -> (f64, f64) {
        let a = self.k1 / self.m1;
        let d = self.k2 / self.m2;
        let bc = self.gamma * self.gamma / (self.m1 * self.m2);
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + bc).sqrt();
        ((mean + disc).sqrt(), (mean - disc).max(0.0).sqrt())
    }

    /// Period of the fastest normal mode.
    pub fn fastest_period(&self) -> f64 {
        2.0 * PI / self.eigenfrequencies().0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModes {
    /// √((k + γ)/m): the in-phase mode x₁ = x₂.
    pub omega_plus: f64,
    /// √((k − γ)/m): the out-of-phase mode x₁ = −x₂.
    pub omega_minus: f64,
    /// |ω₊ − ω₋|.
    pub splitting: f64,
}

/// Normal modes of two identical oscillators. Unequal masses or spring
/// constants are not handled here.
pub fn normal_modes(system: &CoupledOscillatorSystem) -> Result<NormalModes> {
    let same = |a: f64, b: f64| (a - b).abs() <= EQUALITY_TOLERANCE * a.abs().max(b.abs());
    if !same(system.m1, system.m2) || !same(system.k1, system.k2) {
        return Err(Error::Unsupported(
            "normal-mode splitting is only defined here for equal masses and spring constants".into(),
        ));
    }
    let (m, k, g) = (system.m1, system.k1, system.gamma);
    let omega_plus = ((k + g) / m).sqrt();
    let omega_minus = ((k - g) / m).sqrt();
    Ok(NormalModes {
        omega_plus,
        omega_minus,
        splitting: (omega_plus - omega_minus).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Second-order velocity Verlet.
    VelocityVerlet,
    /// Fourth-order composition of three velocity-Verlet substeps
    /// (Forest–Ruth/Yoshida weights). Symplectic and time-reversible.
    #[default]
    Yoshida4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub integrator: Integrator,
    /// Keep every n-th step (the first and last steps are always kept).
    pub record_stride: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            record_stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
    pub e1: f64,
    pub e2: f64,
    pub e_total: f64,
}

impl Sample {
    pub fn state(&self) -> State {
        State {
            x1: self.x1,
            v1: self.v1,
            x2: self.x2,
            v2: self.v2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub record_stride: usize,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("a trajectory always holds the initial sample")
    }

    /// max |E_total(t) − E_total(0)| / |E_total(0)|.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.samples[0].e_total;
        self.samples
            .iter()
            .map(|s| (s.e_total - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs()
    }
}

pub fn simulate(system: &CoupledOscillatorSystem, duration: f64, dt: f64) -> Result<Trajectory> {
    simulate_with(system, duration, dt, SimulationOptions::default())
}

pub fn simulate_with(
    system: &CoupledOscillatorSystem,
    duration: f64,
    dt: f64,
    options: SimulationOptions,
) -> Result<Trajectory> {
    require_positive("duration", duration)?;
    require_positive("dt", dt)?;
    let limit = MAX_STEP_FRACTION * system.fastest_period();
    if dt > limit {
        return Err(Error::invalid(
            "dt",
            format!("{dt:e} s exceeds {MAX_STEP_FRACTION} of the fastest period ({limit:e} s)"),
        ));
    }
    if options.record_stride == 0 {
        return Err(Error::invalid("record_stride", "must be >= 1"));
    }
    let steps = (duration / dt).round() as u64;

    let substeps: &[f64] = match options.integrator {
        Integrator::VelocityVerlet => &[1.0],
        Integrator::Yoshida4 => &YOSHIDA,
    };

    let record = |t: f64, s: &State| {
        let (e1, e2, e_total) = system.energies(s);
        Sample {
            t,
            x1: s.x1,
            v1: s.v1,
            x2: s.x2,
            v2: s.v2,
            e1,
            e2,
            e_total,
        }
    };

    let mut s = system.state;
    let mut acc = system.acceleration(s.x1, s.x2);
    let mut samples = Vec::with_capacity((steps / options.record_stride as u64) as usize + 2);
    samples.push(record(0.0, &s));
    for n in 1..=steps {
        for &w in substeps {
            let h = w * dt;
            s.v1 += 0.5 * h * acc.0;
            s.v2 += 0.5 * h * acc.1;
            s.x1 += h * s.v1;
            s.x2 += h * s.v2;
            acc = system.acceleration(s.x1, s.x2);
            s.v1 += 0.5 * h * acc.0;
            s.v2 += 0.5 * h * acc.1;
        }
        if !(s.x1.is_finite() && s.x2.is_finite() && s.v1.is_finite() && s.v2.is_finite()) {
            return Err(Error::Numerical(format!("state became non-finite at step {n}")));
        }
        if n % options.record_stride as u64 == 0 || n == steps {
            samples.push(record(n as f64 * dt, &s));
        }
    }
    Ok(Trajectory {
        dt,
        record_stride: options.record_stride,
        samples,
    })
}

const YOSHIDA_W1: f64 = 1.351_207_191_959_657_6; // 1 / (2 − 2^{1/3})
const YOSHIDA_W0: f64 = -1.702_414_383_919_315_3; // −2^{1/3} / (2 − 2^{1/3})
const YOSHIDA: [f64; 3] = [YOSHIDA_W1, YOSHIDA_W0, YOSHIDA_W1];

/// Time of the first minimum of the E₁ envelope.
///
/// The envelope is traced by the local maxima of the recorded E₁ (which
/// ripples at twice the trap frequency); the minimum is located by a
/// parabola through the three envelope points around it.
pub fn exchange_time(trajectory: &Trajectory) -> Result<f64> {
    let s = &trajectory.samples;
    let peaks: Vec<(f64, f64)> = s
        .windows(3)
        .filter(|w| w[1].e1 > w[0].e1 && w[1].e1 >= w[2].e1)
        .map(|w| (w[1].t, w[1].e1))
        .collect();

    let mut running_max = s.first().map_or(0.0, |x| x.e1);
    for i in 1..peaks.len().saturating_sub(1) {
        running_max = running_max.max(peaks[i - 1].1);
        let (prev, here, next) = (peaks[i - 1], peaks[i], peaks[i + 1]);
        if here.1 < prev.1 && here.1 <= next.1 && here.1 < EXCHANGE_DEPTH * running_max {
            return Ok(parabola_vertex(prev, here, next));
        }
    }
    Err(Error::Numerical(format!(
        "no energy exchange found in {:e} s; extend the duration (or check that gamma != 0)",
        s.last().map_or(0.0, |x| x.t)
    )))
}

fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature <= 0.0 {
        return x1;
    }
    // Vertex of y0 + d01(x − x0) + c(x − x0)(x − x1).
    let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    vertex.clamp(x0, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const M: f64 = 6.64e-26;
    const W: f64 = 2.0 * PI * 1e6;

    fn k() -> f64 {
        M * W * W
    }

    #[test]
    fn decoupled_modes_coincide() {
        let s = CoupledOscillatorSystem::identical(M, W, 0.0, 1e-8).unwrap();
        let n = normal_modes(&s).unwrap();
        assert_eq!(n.omega_plus, n.omega_minus);
        assert_eq!(n.splitting, 0.0);
    }

    #[test]
    fn splitting_matches_first_order_expansion() {
        assert_relative_eq!(k(), 2.622e-12, max_relative = 1e-3);
        let s = CoupledOscillatorSystem::identical(M, W, 1e-3 * k(), 1e-8).unwrap();
        let n = normal_modes(&s).unwrap();
        assert_relative_eq!(n.splitting / W, 1.0e-3, max_relative = 1e-6);
    }

    #[test]
    fn half_splitting_is_rabi_rate() {
        for ratio in [1e-7, 1e-5, 1e-3] {
            let gamma = ratio * k();
            let s = CoupledOscillatorSystem::identical(M, W, gamma, 1e-8).unwrap();
            let g = crate::linear::rabi_coupling(gamma, M, W).unwrap().g_rad_per_s;
            assert_relative_eq!(normal_modes(&s).unwrap().splitting / 2.0, g, max_relative = 1e-6);
        }
    }

    #[test]
    fn unequal_oscillators_rejected_by_normal_modes() {
        let s = CoupledOscillatorSystem::new(M, 2.0 * M, k(), k(), 0.0, State::default()).unwrap();
        assert!(matches!(normal_modes(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn strong_coupling_rejected() {
        assert!(CoupledOscillatorSystem::identical(M, W, k(), 1e-8).is_err());
        assert!(CoupledOscillatorSystem::identical(M, W, -1.5 * k(), 1e-8).is_err());
        assert!(CoupledOscillatorSystem::identical(M, W, 0.5 * k(), 1e-8).is_ok());
    }

    #[test]
    fn general_eigenfrequencies_match_equal_case() {
        let s = CoupledOscillatorSystem::identical(M, W, 0.01 * k(), 1e-8).unwrap();
        let (hi, lo) = s.eigenfrequencies();
        let n = normal_modes(&s).unwrap();
        assert_relative_eq!(hi, n.omega_plus, max_relative = 1e-12);
        assert_relative_eq!(lo, n.omega_minus, max_relative = 1e-12);
    }

    #[test]
    fn decoupled_motion_is_a_pure_cosine() {
        let a = 1e-8;
        let s = CoupledOscillatorSystem::identical(M, W, 0.0, a).unwrap();
        let dt = s.fastest_period() / 1000.0;
        let tr = simulate(&s, 3.0 * s.fastest_period(), dt).unwrap();
        for p in &tr.samples {
            assert_eq!(p.x2, 0.0);
            assert!((p.x1 - a * (W * p.t).cos()).abs() < 1e-7 * a, "t = {}", p.t);
        }
    }

    #[test]
    fn symmetric_start_stays_symmetric() {
        let gamma = 1e-3 * k();
        let s = CoupledOscillatorSystem::new(
            M,
            M,
            k(),
            k(),
            gamma,
            State {
                x1: 1e-8,
                x2: 1e-8,
                ..State::default()
            },
        )
        .unwrap();
        let dt = s.fastest_period() / 200.0;
        let tr = simulate_with(&s, 600.0 * s.fastest_period(), dt, SimulationOptions { record_stride: 7, ..Default::default() }).unwrap();
        for p in &tr.samples {
            assert_eq!(p.x1, p.x2);
            assert_eq!(p.e1, p.e2);
        }
    }

    #[test]
    fn dt_too_large_rejected() {
        let s = CoupledOscillatorSystem::identical(M, W, 0.0, 1e-8).unwrap();
        let t = s.fastest_period();
        assert!(simulate(&s, 10.0 * t, t / 50.0).is_err());
        assert!(simulate(&s, 10.0 * t, t / 100.0).is_ok());
    }

    #[test]
    fn verlet_energy_error_is_second_order() {
        let s = CoupledOscillatorSystem::identical(M, W, 1e-2 * k(), 1e-8).unwrap();
        let t = s.fastest_period();
        let opts = SimulationOptions {
            integrator: Integrator::VelocityVerlet,
            record_stride: 1,
        };
        let coarse = simulate_with(&s, 20.0 * t, t / 100.0, opts).unwrap().max_energy_drift();
        let fine = simulate_with(&s, 20.0 * t, t / 200.0, opts).unwrap().max_energy_drift();
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn yoshida_energy_error_is_fourth_order() {
        let s = CoupledOscillatorSystem::identical(M, W, 1e-2 * k(), 1e-8).unwrap();
        let t = s.fastest_period();
        let opts = SimulationOptions::default();
        let coarse = simulate_with(&s, 20.0 * t, t / 100.0, opts).unwrap().max_energy_drift();
        let fine = simulate_with(&s, 20.0 * t, t / 200.0, opts).unwrap().max_energy_drift();
        let ratio = coarse / fine;
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn exchange_time_matches_beat() {
        let gamma = 1e-2 * k();
        let s = CoupledOscillatorSystem::identical(M, W, gamma, 1e-8).unwrap();
        let n = normal_modes(&s).unwrap();
        let expected = PI / n.splitting;
        let dt = s.fastest_period() / 200.0;
        let tr = simulate_with(&s, 1.3 * expected, dt, SimulationOptions { record_stride: 2, ..Default::default() }).unwrap();
        let t = exchange_time(&tr).unwrap();
        assert_relative_eq!(t, expected, max_relative = 1e-2);
    }

    #[test]
    fn no_coupling_no_exchange() {
        let s = CoupledOscillatorSystem::identical(M, W, 0.0, 1e-8).unwrap();
        let dt = s.fastest_period() / 200.0;
        let tr = simulate(&s, 200.0 * s.fastest_period(), dt).unwrap();
        assert!(matches!(exchange_time(&tr), Err(Error::Numerical(_))));
    }

    #[test]
    fn parabola_vertex_recovers_minimum() {
        let f = |x: f64| 3.0 * (x - 1.3) * (x - 1.3) + 0.2;
        let v = parabola_vertex((1.0, f(1.0)), (1.5, f(1.5)), (2.1, f(2.1)));
        assert_relative_eq!(v, 1.3, max_relative = 1e-12);
    }
}
