//! Adaptive Dormand-Prince 5(4) integration of planar fields with dense
//! output and event localization.
//!
//! Each accepted step stores the quartic continuous extension, so a
//! [`Trajectory`] can be evaluated at any time inside its span. Crossing
//! events are detected by a sign change of `y[component] - target` across a
//! step and localized by bisection on the interpolant.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` selects one from the field scale.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-12,
            atol: 1e-14,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        IntegratorConfig {
            rtol,
            atol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "rtol",
                reason: format!("{} must be positive", self.rtol),
            });
        }
        if !(self.atol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "atol",
                reason: format!("{} must be positive", self.atol),
            });
        }
        if !(self.h_max > 0.0) {
            return Err(Error::InvalidParameter {
                field: "h_max",
                reason: format!("{} must be positive", self.h_max),
            });
        }
        if let Some(h) = self.h_init {
            if !(h > 0.0) {
                return Err(Error::InvalidParameter {
                    field: "h_init",
                    reason: format!("{h} must be positive"),
                });
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                field: "max_steps",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// `y[component]` crosses `target` in the given direction.
    Crosses {
        component: usize,
        target: f64,
        direction: Direction,
    },
    /// Integration time reaches `horizon`.
    ExceedsTime(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub tolerance: f64,
}

impl Event {
    pub fn crossing(component: usize, target: f64, direction: Direction) -> Self {
        Event {
            kind: EventKind::Crosses {
                component,
                target,
                direction,
            },
            tolerance: 1e-12,
        }
    }

    pub fn horizon(t: f64) -> Self {
        Event {
            kind: EventKind::ExceedsTime(t),
            tolerance: 1e-12,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn fires(&self, g_old: f64, g_new: f64) -> bool {
        match self.kind {
            EventKind::Crosses { direction, .. } => match direction {
                Direction::Down => g_old > 0.0 && g_new <= 0.0,
                Direction::Up => g_old < 0.0 && g_new >= 0.0,
                Direction::Either => (g_old > 0.0 && g_new <= 0.0) || (g_old < 0.0 && g_new >= 0.0),
            },
            EventKind::ExceedsTime(_) => false,
        }
    }

    fn g(&self, y: &State) -> f64 {
        match self.kind {
            EventKind::Crosses {
                component, target, ..
            } => y[component] - target,
            EventKind::ExceedsTime(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The event with this index in the caller's list fired.
    Event(usize),
    HorizonReached,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl Segment {
    fn eval(&self, t: f64) -> State {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        let mut y = [0.0; 2];
        for i in 0..2 {
            y[i] = r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub terminal: Termination,
    pub stats: Stats,
    segments: Vec<Segment>,
}

impl Trajectory {
    fn single(t0: f64, y0: State, terminal: Termination) -> Self {
        Trajectory {
            times: vec![t0],
            states: vec![y0],
            terminal,
            stats: Stats::default(),
            segments: Vec::new(),
        }
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn final_state(&self) -> State {
        *self.states.last().unwrap()
    }

    /// Dense-output state at `t`; `None` outside the integrated span.
    pub fn interpolate(&self, t: f64) -> Option<State> {
        if t < self.t_start() || t > self.t_end() {
            return None;
        }
        if self.segments.is_empty() || t == self.t_end() {
            return Some(self.final_state());
        }
        let idx = self
            .segments
            .partition_point(|s| s.t0 + s.h <= t)
            .min(self.segments.len() - 1);
        Some(self.segments[idx].eval(t))
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const PI_BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - PI_BETA * 0.75;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for &(a, k) in terms {
        out[0] += h * a * k[0];
        out[1] += h * a * k[1];
    }
    out
}

fn finite(y: &State) -> bool {
    y[0].is_finite() && y[1].is_finite()
}

fn initial_step<F>(f: &mut F, t0: f64, y0: &State, k1: &State, cfg: &IntegratorConfig) -> f64
where
    F: FnMut(f64, &State) -> State,
{
    let sk = |i: usize| cfg.atol + cfg.rtol * y0[i].abs();
    let dnf = ((k1[0] / sk(0)).powi(2) + (k1[1] / sk(1)).powi(2)) / 2.0;
    let dny = ((y0[0] / sk(0)).powi(2) + (y0[1] / sk(1)).powi(2)) / 2.0;
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(cfg.h_max);
    let y1 = axpy(y0, &[(1.0, k1)], h);
    let k2 = f(t0 + h, &y1);
    let der2 = (((k2[0] - k1[0]) / sk(0)).powi(2) + ((k2[1] - k1[1]) / sk(1)).powi(2)) / 2.0;
    let der2 = der2.sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(cfg.h_max)
}

/// Integrates `y' = field(t, y)` forward from `(t0, initial)` until an event
/// fires or the step budget runs out.
///
/// At most one [`EventKind::ExceedsTime`] is honored (the earliest). Without
/// one, integration runs until a crossing event fires.
pub fn integrate<F>(
    mut field: F,
    initial: State,
    t0: f64,
    events: &[Event],
    cfg: &IntegratorConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &State) -> State,
{
    cfg.validate()?;
    for ev in events {
        if !(ev.tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                field: "event tolerance",
                reason: format!("{} must be positive", ev.tolerance),
            });
        }
    }
    let horizon = events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::ExceedsTime(t) => Some(t),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    if horizon <= t0 {
        return Ok(Trajectory::single(t0, initial, Termination::HorizonReached));
    }

    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = initial;
    let mut k1 = field(t, &y);
    stats.evaluations += 1;
    if !finite(&k1) || !finite(&y) {
        return Err(Error::NonFiniteState { t });
    }
    let mut h = match cfg.h_init {
        Some(h) => h.min(cfg.h_max),
        None => {
            stats.evaluations += 1;
            initial_step(&mut field, t, &y, &k1, cfg)
        }
    };
    let mut times = vec![t];
    let mut states = vec![y];
    let mut segments: Vec<Segment> = Vec::new();
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::StepBudgetExhausted {
                max_steps: cfg.max_steps,
                t,
            });
        }
        let mut hit_horizon = false;
        // a remainder below the step floor is absorbed into this step
        if t + h >= horizon || horizon - (t + h) <= 16.0 * f64::EPSILON * horizon.abs() {
            h = horizon - t;
            hit_horizon = true;
        }
        if h.abs() <= 16.0 * f64::EPSILON * t.abs().max(1e-300) {
            return Err(Error::StepUnderflow { h, t });
        }

        let y2 = axpy(&y, &[(A21, &k1)], h);
        let k2 = field(t + C2 * h, &y2);
        let y3 = axpy(&y, &[(A31, &k1), (A32, &k2)], h);
        let k3 = field(t + C3 * h, &y3);
        let y4 = axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h);
        let k4 = field(t + C4 * h, &y4);
        let y5 = axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h);
        let k5 = field(t + C5 * h, &y5);
        let y6 = axpy(
            &y,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        );
        let k6 = field(t + h, &y6);
        let y_new = axpy(
            &y,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            h,
        );
        let k7 = field(t + h, &y_new);
        stats.evaluations += 6;

        if ![k2, k3, k4, k5, k6, k7, y_new].iter().all(finite) {
            // shrink and retry; a genuine blow-up ends in underflow
            stats.rejected += 1;
            h *= FAC_MIN;
            last_rejected = true;
            if !finite(&y) {
                return Err(Error::NonFiniteState { t });
            }
            if h.abs() <= 16.0 * f64::EPSILON * t.abs().max(1e-300) {
                return Err(Error::NonFiniteState { t });
            }
            continue;
        }

        let mut err = 0.0;
        for i in 0..2 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sk).powi(2);
        }
        let err = (err / 2.0).sqrt();

        let fac11 = err.powf(EXPO);
        if err <= 1.0 {
            let mut fac = fac11 / fac_old.powf(PI_BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            fac_old = err.max(1e-4);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;

            let mut rcont = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k7[i] - bspl;
                rcont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let seg = Segment { t0: t, h, rcont };
            stats.accepted += 1;

            // earliest firing crossing event within this step
            let mut fired: Option<(usize, f64, State)> = None;
            for (idx, ev) in events.iter().enumerate() {
                if ev.fires(ev.g(&y), ev.g(&y_new)) {
                    let (te, ye) = localize(ev, &seg, t, t + h, &y, &y_new);
                    if fired.is_none_or(|(_, tf, _)| te < tf) {
                        fired = Some((idx, te, ye));
                    }
                }
            }
            if let Some((idx, te, ye)) = fired {
                segments.push(seg);
                if te > t {
                    times.push(te);
                    states.push(ye);
                } else {
                    *states.last_mut().unwrap() = ye;
                }
                return Ok(Trajectory {
                    times,
                    states,
                    terminal: Termination::Event(idx),
                    stats,
                    segments,
                });
            }

            segments.push(seg);
            t += h;
            y = y_new;
            k1 = k7;
            times.push(t);
            states.push(y);
            if hit_horizon {
                return Ok(Trajectory {
                    times,
                    states,
                    terminal: Termination::HorizonReached,
                    stats,
                    segments,
                });
            }
            h = h_new.min(cfg.h_max);
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            last_rejected = true;
        }
    }
}

/// Bisection on the dense output of one step for the crossing time.
fn localize(
    ev: &Event,
    seg: &Segment,
    t_lo: f64,
    t_hi: f64,
    y_lo: &State,
    y_hi: &State,
) -> (f64, State) {
    // invariant: g(a) has the pre-crossing sign, g(b) does not
    let mut a = t_lo;
    let mut b = t_hi;
    let ga = ev.g(y_lo);
    let mut best = (t_hi, *y_hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let ym = seg.eval(m);
        let gm = ev.g(&ym);
        if (gm > 0.0) == (ga > 0.0) && gm != 0.0 {
            a = m;
        } else {
            b = m;
            best = (m, ym);
        }
        if (gm.abs() <= ev.tolerance && b - a <= 1e-14 * (1.0 + b.abs()))
            || b - a <= 4.0 * f64::EPSILON * (1.0 + b.abs())
        {
            break;
        }
    }
    best
}
