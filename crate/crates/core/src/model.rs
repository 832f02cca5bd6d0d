//! Problem constants, kinetics, coordinate changes and the three planar
//! vector fields of the reaction zone.
//!
//! All fields are written in the fast time `tau = xi / beta` with the rate
//! constant absorbed into `beta` (K = 1):
//!
//! * [`ModelParams::field_fast`]: the field in `(T, Z)`,
//! * [`ModelParams::field_u`]: its push-forward by `U = Z^(1-alpha) / (1-alpha)`,
//!   which has no zero on `{T >= T_i, U >= 0}`,
//! * [`ModelParams::field_compactified`]: the reversed, rescaled field in
//!   `(V, Z)` with `V = 1/T` and `eps = 1/c`, extended smoothly to `V = 0`.

use crate::error::{Error, Result};

/// Chemical kinetics `phi(T)`. Both variants vanish below the ignition
/// temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kinetics {
    /// `phi(T) = H(T - T_i)`.
    Heaviside,
    /// `phi(T) = H(T - T_i) exp(-ta / T)`.
    Arrhenius { ta: f64 },
}

impl Kinetics {
    /// Activation temperature; zero for the Heaviside law.
    pub fn ta(&self) -> f64 {
        match *self {
            Kinetics::Heaviside => 0.0,
            Kinetics::Arrhenius { ta } => ta,
        }
    }

    /// Reaction rate at temperature `t`, in `[0, 1]`.
    pub fn rate(&self, ti: f64, t: f64) -> f64 {
        if t < ti {
            return 0.0;
        }
        match *self {
            Kinetics::Heaviside => 1.0,
            Kinetics::Arrhenius { ta } => (-ta / t).exp(),
        }
    }

    /// `psi(V) = phi(1/V)`, extended to `V = 0` by its limit.
    pub fn psi(&self, ti: f64, v: f64) -> f64 {
        if v == 0.0 {
            return self.psi_at_zero();
        }
        if v > 1.0 / ti {
            return 0.0;
        }
        match *self {
            Kinetics::Heaviside => 1.0,
            Kinetics::Arrhenius { ta } => (-ta * v).exp(),
        }
    }

    /// `psi(0)`; both laws give 1.
    pub fn psi_at_zero(&self) -> f64 {
        1.0
    }

    fn check_hypothesis(&self) -> Result<()> {
        let ta = self.ta();
        if !ta.is_finite() {
            return Err(Error::KineticsHypothesis(format!(
                "activation temperature {ta} is not finite"
            )));
        }
        Ok(())
    }
}

/// Immutable problem definition: reaction order, heat release, ignition
/// temperature and kinetics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    q0: f64,
    ti: f64,
    kinetics: Kinetics,
}

/// The bifurcation pair swept by the tooling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub beta: f64,
    pub c: f64,
}

impl FlowParams {
    pub fn new(beta: f64, c: f64) -> Self {
        FlowParams { beta, c }
    }
}

/// State in the original `(T, Z)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub z: f64,
}

/// State in the `(T, U)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UState {
    pub t: f64,
    pub u: f64,
}

/// State in the compactified `(V, Z)` chart, `V = 1/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VState {
    pub v: f64,
    pub z: f64,
}

pub fn z_to_u(alpha: f64, z: f64) -> f64 {
    z.max(0.0).powf(1.0 - alpha) / (1.0 - alpha)
}

pub fn u_to_z(alpha: f64, u: f64) -> f64 {
    ((1.0 - alpha) * u.max(0.0)).powf(1.0 / (1.0 - alpha))
}

impl ModelParams {
    pub fn new(alpha: f64, q0: f64, ti: f64, kinetics: Kinetics) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                field: "alpha",
                reason: format!("{alpha} not in [0, 1)"),
            });
        }
        if !(q0 > 0.0 && q0.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "q0",
                reason: format!("{q0} must be positive"),
            });
        }
        if !(ti > 0.0 && ti < (2.0 * q0).sqrt()) {
            return Err(Error::InvalidParameter {
                field: "ti",
                reason: format!("{ti} not in (0, sqrt(2 q0)) = (0, {})", (2.0 * q0).sqrt()),
            });
        }
        if let Kinetics::Arrhenius { ta } = kinetics {
            if !(ta >= 0.0) {
                return Err(Error::InvalidParameter {
                    field: "ta",
                    reason: format!("{ta} must be non-negative"),
                });
            }
        }
        Ok(ModelParams {
            alpha,
            q0,
            ti,
            kinetics,
        })
    }

    /// Heaviside kinetics with `alpha = 0.5, q0 = 2, T_i = 0.5`.
    pub fn reference() -> Self {
        ModelParams {
            alpha: 0.5,
            q0: 2.0,
            ti: 0.5,
            kinetics: Kinetics::Heaviside,
        }
    }

    /// The reference parameters with Arrhenius kinetics, `ta = 1`.
    pub fn reference_arrhenius() -> Self {
        ModelParams {
            kinetics: Kinetics::Arrhenius { ta: 1.0 },
            ..Self::reference()
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn q0(&self) -> f64 {
        self.q0
    }
    pub fn ti(&self) -> f64 {
        self.ti
    }
    pub fn kinetics(&self) -> Kinetics {
        self.kinetics
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.q0, self.ti, self.kinetics)
    }

    pub fn cj_velocity(&self) -> f64 {
        (2.0 * self.q0).sqrt()
    }

    /// Speed above which `T_1(c) <= T_i` and the weak equilibrium leaves the domain.
    pub fn c_star(&self) -> f64 {
        (self.ti * self.ti + 2.0 * self.q0) / (2.0 * self.ti)
    }

    /// Whether `c` is the CJ speed up to a relative `1e-9`.
    pub fn is_cj(&self, c: f64) -> bool {
        let cj = self.cj_velocity();
        (c - cj).abs() <= 1e-9 * cj
    }

    /// `P_c(T) = -cT + T^2/2 + q0`.
    pub fn p_c(&self, c: f64, t: f64) -> f64 {
        -c * t + 0.5 * t * t + self.q0
    }

    /// Roots `(T_0(c), T_1(c))` of `P_c`, strong first.
    pub fn equilibria(&self, c: f64) -> Result<(f64, f64)> {
        let disc = c * c - 2.0 * self.q0;
        if disc < 0.0 || !c.is_finite() {
            // tolerate rounding at the CJ speed itself
            if self.is_cj(c) {
                let cj = self.cj_velocity();
                return Ok((cj, cj));
            }
            return Err(Error::BelowCjVelocity {
                c,
                c_cj: self.cj_velocity(),
            });
        }
        let root = disc.sqrt();
        // the weak root in cancellation-free form
        Ok((c + root, 2.0 * self.q0 / (c + root)))
    }

    pub fn check_flow(&self, flow: FlowParams) -> Result<()> {
        if !(flow.beta > 0.0 && flow.beta.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "beta",
                reason: format!("{} must be positive", flow.beta),
            });
        }
        if flow.c < self.cj_velocity() && !self.is_cj(flow.c) {
            return Err(Error::BelowCjVelocity {
                c: flow.c,
                c_cj: self.cj_velocity(),
            });
        }
        Ok(())
    }

    pub fn rate(&self, t: f64) -> f64 {
        self.kinetics.rate(self.ti, t)
    }

    /// `(dT/dtau, dZ/dtau)` in the `(T, Z)` chart.
    pub fn field_fast(&self, flow: FlowParams, s: PhaseState) -> [f64; 2] {
        let z = s.z.max(0.0);
        [
            self.p_c(flow.c, s.t) - self.q0 * z,
            flow.beta * self.rate(s.t) * z.powf(self.alpha),
        ]
    }

    /// `(dT/dtau, dU/dtau)` in the `(T, U)` chart.
    pub fn field_u(&self, flow: FlowParams, s: UState) -> [f64; 2] {
        [
            self.p_c(flow.c, s.t) - self.q0 * u_to_z(self.alpha, s.u),
            flow.beta * self.rate(s.t),
        ]
    }

    /// `(dV/ds, dZ/ds)` for the reversed field divided by `c`, with
    /// `V = 1/T`, `s = c tau` and `eps = 1/c`.
    pub fn field_compactified(&self, beta: f64, eps: f64, s: VState) -> Result<[f64; 2]> {
        self.kinetics.check_hypothesis()?;
        let z = s.z.max(0.0);
        let psi = self.kinetics.psi(self.ti, s.v);
        Ok([
            -s.v + eps * (0.5 + self.q0 * (1.0 - z) * s.v * s.v),
            -eps * beta * psi * z.powf(self.alpha),
        ])
    }

    /// The homocline `Z = P_c(T) / q0` where the fast component vanishes.
    pub fn homocline_z(&self, c: f64, t: f64) -> f64 {
        self.p_c(c, t) / self.q0
    }

    /// Quadratic contact point `(Z_i(c), U_i(c))` of the field with `{T = T_i}`.
    pub fn ignition_contact(&self, c: f64) -> Result<(f64, f64)> {
        let zi = self.homocline_z(c, self.ti);
        if zi < 0.0 {
            return Err(Error::Domain(format!(
                "contact point Z_i = {zi} < 0: c = {c} exceeds c_star = {}",
                self.c_star()
            )));
        }
        Ok((zi, z_to_u(self.alpha, zi)))
    }

    pub fn z_to_u(&self, z: f64) -> f64 {
        z_to_u(self.alpha, z)
    }

    pub fn u_to_z(&self, u: f64) -> f64 {
        u_to_z(self.alpha, u)
    }

    /// `U` at `Z = 1`, the ignition point of every wave.
    pub fn u_ignition(&self) -> f64 {
        1.0 / (1.0 - self.alpha)
    }
}
