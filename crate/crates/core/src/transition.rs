//! Transition map `Z(T, beta, c)`, wave classification and profiles.
//!
//! The transition map follows the orbit of the `(T, U)` field launched from
//! `(T, 0)` until it crosses the ignition line `{T = T_i}` and reads off `Z`
//! there. Launching from the two equilibria gives `Z_0(beta, c)` and
//! `Z_1(beta, c)`, whose position relative to 1 decides the wave type.

use crate::error::{Error, Result};
use crate::integrator::{integrate, Direction, Event, IntegratorConfig, Termination, Trajectory};
use crate::model::{FlowParams, ModelParams, UState, VState};

/// Default tolerance on `|z - 1|` for special-type classification.
pub const DEFAULT_TOL_CLASS: f64 = 1e-6;

/// Localization tolerance for crossing events.
const EVENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionResult {
    pub z_exit: f64,
    pub u_exit: f64,
    pub tau_exit: f64,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveType {
    StrongBump,
    StrongMonotonic,
    StrongSpecial,
    WeakSpecial,
    CjBump,
    CjSpecial,
    NoSolution,
}

impl WaveType {
    pub fn is_solution(self) -> bool {
        self != WaveType::NoSolution
    }

    pub fn is_special(self) -> bool {
        matches!(
            self,
            WaveType::StrongSpecial | WaveType::WeakSpecial | WaveType::CjSpecial
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            WaveType::StrongBump => "StrongBump",
            WaveType::StrongMonotonic => "StrongMonotonic",
            WaveType::StrongSpecial => "StrongSpecial",
            WaveType::WeakSpecial => "WeakSpecial",
            WaveType::CjBump => "CJBump",
            WaveType::CjSpecial => "CJSpecial",
            WaveType::NoSolution => "NoSolution",
        }
    }
}

impl std::fmt::Display for WaveType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// Classification outcome with the transition values that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionClass {
    pub wave: WaveType,
    pub z0: f64,
    /// Only computed when the decision needed it.
    pub z1: Option<f64>,
    pub tol_class: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Shock,
    Reaction,
    Burnt,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Shock => "shock",
            Region::Reaction => "reaction",
            Region::Burnt => "burnt",
        }
    }

    pub fn parse(s: &str) -> Option<Region> {
        match s {
            "shock" => Some(Region::Shock),
            "reaction" => Some(Region::Reaction),
            "burnt" => Some(Region::Burnt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub xi: f64,
    pub t: f64,
    pub z: f64,
    pub region: Region,
}

/// A traveling wave on the whole line in the slow coordinate `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub class: SolutionClass,
    pub samples: Vec<ProfileSample>,
    /// Trailing interface sits at `xi = -ell`; ignition at `xi = 0`.
    pub ell: f64,
    /// Temperature behind the wave.
    pub t_minus: f64,
    /// Temperature where the reaction zone ends.
    pub t_interface: f64,
    /// Largest jump of `T` across `xi = 0` and `xi = -ell`.
    pub boundary_jump: f64,
}

/// The backward orbit from the ignition point `(T_i, Z = 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaOrbit {
    /// Backward time `s = -tau`; states are `(T, U)`.
    pub trajectory: Trajectory,
    pub landing_t: f64,
    /// Fast-time length of the reaction zone.
    pub tau_length: f64,
    /// Backward time of the temperature maximum, when there is one.
    pub bump_at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Strong,
    Weak,
}

/// Numerical context for one model: parameters, integrator settings and
/// classification tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSystem {
    pub params: ModelParams,
    pub solver: IntegratorConfig,
    pub tol_class: f64,
}

impl WaveSystem {
    pub fn new(params: ModelParams) -> Self {
        WaveSystem {
            params,
            solver: IntegratorConfig::default(),
            tol_class: DEFAULT_TOL_CLASS,
        }
    }

    pub fn with_solver(mut self, solver: IntegratorConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_tol_class(mut self, tol_class: f64) -> Self {
        self.tol_class = tol_class;
        self
    }

    /// Fast-time bound on the arrival at `{T = T_i}` from `(t_start, 0)`.
    ///
    /// `U` grows at least at `beta phi(T_i)`. Once `Z` exceeds
    /// `max P_c / q0 + 1`, `T` falls at rate at least `q0`.
    fn transition_horizon(&self, flow: FlowParams, t_start: f64) -> f64 {
        let p = &self.params;
        let (t0, _) = p.equilibria(flow.c).unwrap_or((t_start, t_start));
        let p_max = p
            .p_c(flow.c, p.ti())
            .max(p.p_c(flow.c, t_start.max(t0)))
            .max(0.0);
        let z_star = p_max / p.q0() + 2.0;
        let rate_min = flow.beta * p.rate(p.ti());
        2.0 * (p.z_to_u(z_star) / rate_min + t_start.max(t0) / p.q0()) + 1.0
    }

    /// Transition map: follow the orbit from `(t_start, U = 0)` to `{T = T_i}`.
    pub fn transition_z(&self, flow: FlowParams, t_start: f64) -> Result<TransitionResult> {
        let p = self.params;
        p.check_flow(flow)?;
        let ti = p.ti();
        if t_start < ti {
            return Err(Error::Domain(format!(
                "start temperature {t_start} lies below T_i = {ti}"
            )));
        }
        if t_start == ti {
            let trajectory = integrate(
                |_, y| p.field_u(flow, UState { t: y[0], u: y[1] }),
                [ti, 0.0],
                0.0,
                &[Event::horizon(0.0)],
                &self.solver,
            )?;
            return Ok(TransitionResult {
                z_exit: 0.0,
                u_exit: 0.0,
                tau_exit: 0.0,
                trajectory,
            });
        }
        let horizon = self.transition_horizon(flow, t_start);
        let runaway = 1e6 * (1.0 + t_start);
        let events = [
            Event::crossing(0, ti, Direction::Down).with_tolerance(EVENT_TOL),
            Event::crossing(0, runaway, Direction::Up),
            Event::horizon(horizon),
        ];
        let trajectory = integrate(
            |_, y| p.field_u(flow, UState { t: y[0], u: y[1] }),
            [t_start, 0.0],
            0.0,
            &events,
            &self.solver,
        )?;
        if trajectory.terminal != Termination::Event(0) {
            return Err(Error::NoCrossing { t_start, ti });
        }
        let u_exit = trajectory.final_state()[1];
        Ok(TransitionResult {
            z_exit: p.u_to_z(u_exit),
            u_exit,
            tau_exit: trajectory.t_end(),
            trajectory,
        })
    }

    /// `Z_0(beta, c)`: the transition map from the strong equilibrium.
    pub fn z0(&self, flow: FlowParams) -> Result<f64> {
        let (t0, _) = self.params.equilibria(flow.c)?;
        Ok(self.transition_z(flow, t0)?.z_exit)
    }

    /// `Z_1(beta, c)`: the transition map from the weak equilibrium; defined
    /// for `c < c_star` only.
    pub fn z1(&self, flow: FlowParams) -> Result<f64> {
        let p = &self.params;
        let (_, t1) = p.equilibria(flow.c)?;
        if flow.c >= p.c_star() || t1 <= p.ti() {
            return Err(Error::Domain(format!(
                "weak orbit undefined for c = {} >= c_star = {}",
                flow.c,
                p.c_star()
            )));
        }
        Ok(self.transition_z(flow, t1)?.z_exit)
    }

    pub fn classify(&self, flow: FlowParams) -> Result<SolutionClass> {
        self.classify_with(flow, self.tol_class)
    }

    /// Decision table on the position of `Z_0` and `Z_1` relative to 1.
    pub fn classify_with(&self, flow: FlowParams, tol_class: f64) -> Result<SolutionClass> {
        let p = &self.params;
        let cj = p.is_cj(flow.c);
        let z0 = self.z0(flow)?;
        let class = |wave, z1| SolutionClass {
            wave,
            z0,
            z1,
            tol_class,
        };
        if (z0 - 1.0).abs() <= tol_class {
            let wave = if cj {
                WaveType::CjSpecial
            } else {
                WaveType::StrongSpecial
            };
            return Ok(class(wave, None));
        }
        if z0 < 1.0 {
            let wave = if cj {
                WaveType::CjBump
            } else {
                WaveType::StrongBump
            };
            return Ok(class(wave, None));
        }
        if flow.c >= p.c_star() {
            return Ok(class(WaveType::StrongMonotonic, None));
        }
        let z1 = if cj { z0 } else { self.z1(flow)? };
        let wave = if cj {
            WaveType::NoSolution
        } else if (z1 - 1.0).abs() <= tol_class {
            WaveType::WeakSpecial
        } else if z1 < 1.0 {
            WaveType::StrongMonotonic
        } else {
            WaveType::NoSolution
        };
        Ok(class(wave, Some(z1)))
    }

    /// Orbit of the reversed `(T, U)` field from the ignition point
    /// `(T_i, U(1))` down to `U = 0`.
    pub fn backward_orbit_gamma(&self, flow: FlowParams) -> Result<GammaOrbit> {
        let p = self.params;
        p.check_flow(flow)?;
        let ti = p.ti();
        let u_start = p.u_ignition();
        let horizon = 4.0 * u_start / (flow.beta * p.rate(ti));
        let events = [
            Event::crossing(1, 0.0, Direction::Down).with_tolerance(EVENT_TOL),
            Event::crossing(0, ti, Direction::Down),
            Event::horizon(horizon),
        ];
        let backward = |_: f64, y: &[f64; 2]| {
            let d = p.field_u(flow, UState { t: y[0], u: y[1] });
            [-d[0], -d[1]]
        };
        let trajectory = integrate(backward, [ti, u_start], 0.0, &events, &self.solver)?;
        match trajectory.terminal {
            Termination::Event(0) => {}
            Termination::Event(_) => {
                return Err(Error::Domain(format!(
                    "backward orbit from the ignition point re-crossed T_i at beta = {}, c = {}",
                    flow.beta, flow.c
                )))
            }
            Termination::HorizonReached => {
                return Err(Error::Inconsistent(
                    "backward orbit did not reach U = 0 within the horizon".into(),
                ))
            }
        }
        // a bump is a sign change of dT/ds strictly inside the orbit
        let slope: Vec<f64> = trajectory
            .states
            .iter()
            .map(|y| backward(0.0, y)[0])
            .collect();
        let scale = slope.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-9 * scale.max(1.0);
        let mut bump_at = None;
        let mut last_sign = 0i8;
        for (k, &d) in slope.iter().enumerate() {
            if d.abs() <= floor {
                continue;
            }
            let sign = if d > 0.0 { 1 } else { -1 };
            if last_sign == 1 && sign == -1 {
                bump_at = Some(trajectory.times[k]);
                break;
            }
            last_sign = sign;
        }
        Ok(GammaOrbit {
            landing_t: trajectory.final_state()[0],
            tau_length: trajectory.t_end(),
            trajectory,
            bump_at,
        })
    }

    /// Fitted exponent of `|T - T_which(c)|` against `U` along the orbit
    /// leaving the equilibrium, over the window `U` in `[1e-3, 1e-2]`.
    pub fn contact_order_estimate(&self, flow: FlowParams, which: Branch) -> Result<f64> {
        const U_LO: f64 = 1e-3;
        const U_HI: f64 = 1e-2;
        const SAMPLES: usize = 41;
        let p = self.params;
        p.check_flow(flow)?;
        if p.is_cj(flow.c) || flow.c < p.cj_velocity() {
            return Err(Error::Domain("contact order needs c > c_cj".into()));
        }
        let (t0, t1) = p.equilibria(flow.c)?;
        let t_eq = match which {
            Branch::Strong => t0,
            Branch::Weak => {
                if t1 <= p.ti() {
                    return Err(Error::Domain(format!(
                        "weak equilibrium {t1} below T_i at c = {}",
                        flow.c
                    )));
                }
                t1
            }
        };
        // shifted coordinate x = T - T_eq; P_c(T_eq) = 0 exactly
        let lambda = t_eq - flow.c;
        let shifted = |_: f64, y: &[f64; 2]| {
            let x = y[0];
            [
                lambda * x + 0.5 * x * x - p.q0() * p.u_to_z(y[1]),
                flow.beta * p.rate(t_eq + x),
            ]
        };
        let rate = flow.beta * p.rate(t_eq);
        let events = [
            Event::crossing(1, U_HI, Direction::Up),
            Event::crossing(0, p.ti() - t_eq, Direction::Down),
            Event::horizon(100.0 * U_HI / rate),
        ];
        let cfg = IntegratorConfig {
            h_max: U_LO / rate,
            ..self.solver
        };
        let traj = integrate(shifted, [0.0, 0.0], 0.0, &events, &cfg)?;
        if traj.terminal != Termination::Event(0) {
            return Err(Error::InsufficientRange);
        }
        let tau_hi = traj.t_end();
        let tau_lo = tau_hi * U_LO / U_HI;
        let mut xs = Vec::with_capacity(SAMPLES);
        let mut ys = Vec::with_capacity(SAMPLES);
        for k in 0..SAMPLES {
            let tau = tau_lo * (tau_hi / tau_lo).powf(k as f64 / (SAMPLES - 1) as f64);
            let y = traj.interpolate(tau).ok_or(Error::InsufficientRange)?;
            if !(y[0] != 0.0 && y[1] > 0.0) {
                return Err(Error::InsufficientRange);
            }
            xs.push(y[1].ln());
            ys.push(y[0].abs().ln());
        }
        Ok(least_squares_slope(&xs, &ys))
    }

    /// Distance between the compactified orbit started on the center-manifold
    /// expansion at `Z = 1` and the expansion `eps/2 + q0 (1 - Z) eps^3 / 4`
    /// when the orbit reaches `z_probe`.
    pub fn center_manifold_residual(&self, beta: f64, c: f64, z_probe: f64) -> Result<f64> {
        let p = self.params;
        if !(0.0 < z_probe && z_probe < 1.0) {
            return Err(Error::Domain(format!("z_probe {z_probe} not in (0, 1)")));
        }
        p.check_flow(FlowParams::new(beta, c))?;
        let eps = 1.0 / c;
        let expansion = |z: f64| eps / 2.0 + p.q0() * (1.0 - z) * eps.powi(3) / 4.0;
        // probe the field once so hypothesis failures surface as errors
        p.field_compactified(beta, eps, VState { v: 0.0, z: 1.0 })?;
        let field = |_: f64, y: &[f64; 2]| {
            p.field_compactified(beta, eps, VState { v: y[0], z: y[1] })
                .unwrap_or([f64::NAN, f64::NAN])
        };
        let slow_rate = eps * beta * p.kinetics().psi_at_zero() * z_probe.powf(p.alpha());
        let events = [
            Event::crossing(1, z_probe, Direction::Down).with_tolerance(1e-14),
            Event::horizon(10.0 / slow_rate),
        ];
        let traj = integrate(field, [expansion(1.0), 1.0], 0.0, &events, &self.solver)?;
        if traj.terminal != Termination::Event(0) {
            return Err(Error::Inconsistent(
                "compactified orbit did not reach z_probe".into(),
            ));
        }
        Ok((traj.final_state()[0] - expansion(z_probe)).abs())
    }

    /// Whole-line wave profile sampled on `n_samples` points of
    /// `[xi_min, xi_max]`.
    pub fn profile(
        &self,
        flow: FlowParams,
        xi_min: f64,
        xi_max: f64,
        n_samples: usize,
    ) -> Result<WaveProfile> {
        let p = self.params;
        if !(xi_min < xi_max) || n_samples < 2 {
            return Err(Error::InvalidParameter {
                field: "xi range",
                reason: format!(
                    "need xi_min < xi_max and n >= 2, got [{xi_min}, {xi_max}], n = {n_samples}"
                ),
            });
        }
        let class = self.classify(flow)?;
        if !class.wave.is_solution() {
            return Err(Error::ProfileUndefined {
                beta: flow.beta,
                c: flow.c,
            });
        }
        let (t0, t1) = p.equilibria(flow.c)?;
        let t_minus = match class.wave {
            WaveType::WeakSpecial => t1,
            WaveType::CjBump | WaveType::CjSpecial => p.cj_velocity(),
            _ => t0,
        };
        let gamma = self.backward_orbit_gamma(flow)?;
        let ell = flow.beta * gamma.tau_length;
        let t_interface = gamma.landing_t;

        // burnt region: beta dT/dxi = P_c(T), integrated in s = -xi - ell
        let beyond_len = (-xi_min - ell).max(0.0);
        let burnt = if class.wave.is_special() || beyond_len == 0.0 {
            None
        } else {
            let target_gap = 1e-6;
            let gap = t_interface - t_minus;
            if gap.abs() <= target_gap {
                None
            } else {
                let (target, dir) = if gap > 0.0 {
                    (t_minus + target_gap, Direction::Down)
                } else {
                    (t_minus - target_gap, Direction::Up)
                };
                let c = flow.c;
                let beta = flow.beta;
                let traj = integrate(
                    |_, y| [-p.p_c(c, y[0]) / beta, 0.0],
                    [t_interface, 0.0],
                    0.0,
                    &[Event::crossing(0, target, dir), Event::horizon(beyond_len)],
                    &self.solver,
                )?;
                Some(traj)
            }
        };

        let shock = |xi: f64| {
            let c = flow.c;
            let ti = p.ti();
            2.0 * c / (1.0 + ((2.0 * c - ti) / ti) * (c * xi / flow.beta).exp())
        };
        let reaction = |xi: f64| -> (f64, f64) {
            let s = (-xi / flow.beta).clamp(0.0, gamma.tau_length);
            let y = gamma
                .trajectory
                .interpolate(s)
                .unwrap_or_else(|| gamma.trajectory.final_state());
            (y[0], p.u_to_z(y[1]))
        };
        let burnt_t = |xi: f64| -> f64 {
            match &burnt {
                None => {
                    if class.wave.is_special() {
                        t_interface
                    } else {
                        t_minus
                    }
                }
                Some(traj) => {
                    let s = -xi - ell;
                    traj.interpolate(s).map(|y| y[0]).unwrap_or(t_minus)
                }
            }
        };
        let burnt_start = if class.wave.is_special() {
            t_interface
        } else {
            match &burnt {
                Some(traj) => traj.states[0][0],
                None => t_minus,
            }
        };

        let mut samples = Vec::with_capacity(n_samples);
        for k in 0..n_samples {
            let xi = if k == n_samples - 1 {
                xi_max
            } else {
                xi_min + (xi_max - xi_min) * k as f64 / (n_samples - 1) as f64
            };
            let sample = if xi > 0.0 {
                ProfileSample {
                    xi,
                    t: shock(xi),
                    z: 1.0,
                    region: Region::Shock,
                }
            } else if xi == 0.0 {
                ProfileSample {
                    xi,
                    t: p.ti(),
                    z: 1.0,
                    region: Region::Reaction,
                }
            } else if xi >= -ell {
                let (t, z) = reaction(xi);
                ProfileSample {
                    xi,
                    t,
                    z,
                    region: Region::Reaction,
                }
            } else {
                ProfileSample {
                    xi,
                    t: burnt_t(xi),
                    z: 0.0,
                    region: Region::Burnt,
                }
            };
            samples.push(sample);
        }

        let jump_ignition = (shock(0.0) - gamma.trajectory.states[0][0]).abs();
        let jump_interface = (burnt_start - t_interface).abs();
        Ok(WaveProfile {
            class,
            samples,
            ell,
            t_minus,
            t_interface,
            boundary_jump: jump_ignition.max(jump_interface),
        })
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
