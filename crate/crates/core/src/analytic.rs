//! Closed-form route for Heaviside kinetics at `alpha = 1/2`.
//!
//! With `phi = 1` the `U` equation integrates to `U = beta tau + 2`, leaving a
//! Riccati equation for `T` whose endpoint values are ratios of Kummer
//! functions. The two residuals below are `T(-ell') - T_0(c)` and
//! `T(-ell') - T_1(c)` as published; their zeros in `beta` are the
//! bifurcation curves. At the CJ speed the same residual reduces to a ratio of
//! modified Bessel functions with argument `1/beta` (reference parameters
//! `q0 = 2, T_i = 1/2` only).

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Lowest `beta` accepted by the closed-form residuals.
pub const ENVELOPE_LO: f64 = 0.1;
/// Highest `beta` accepted by the closed-form residuals.
pub const ENVELOPE_HI: f64 = 50.0;

const TERM_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the last term added.
    pub truncation_estimate: f64,
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the 9-term Lanczos approximation, with reflection for
/// `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &coef) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += coef / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

fn is_non_positive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

/// Kummer's confluent hypergeometric function `M(a; b; z)` by direct
/// summation of its power series.
pub fn kummer_m(a: f64, b: f64, z: f64, rel_tol: f64) -> Result<SeriesResult> {
    if is_non_positive_integer(b) {
        return Err(Error::Pole(b));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small_in_a_row = 0;
    for n in 0..TERM_BUDGET {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term.abs() < rel_tol * sum.abs() || term == 0.0 {
            small_in_a_row += 1;
            if small_in_a_row == 2 {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: n + 2,
                    truncation_estimate: term.abs(),
                });
            }
        } else {
            small_in_a_row = 0;
        }
    }
    Err(Error::NoConvergence(TERM_BUDGET))
}

/// Modified Bessel function of the first kind `I_v(z)` for `z >= 0`, `v > -1`.
pub fn bessel_i(v: f64, z: f64, rel_tol: f64) -> Result<SeriesResult> {
    if !(v > -1.0) {
        return Err(Error::Domain(format!("Bessel order {v} must exceed -1")));
    }
    if !(z >= 0.0) {
        return Err(Error::Domain(format!(
            "Bessel argument {z} must be non-negative"
        )));
    }
    if z == 0.0 {
        let value = if v == 0.0 {
            1.0
        } else if v > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        return Ok(SeriesResult {
            value,
            terms_used: 1,
            truncation_estimate: 0.0,
        });
    }
    let q = 0.25 * z * z;
    let mut term = 1.0 / gamma(v + 1.0);
    let mut sum = term;
    let mut small_in_a_row = 0;
    for k in 0..TERM_BUDGET {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (v + kf + 1.0));
        sum += term;
        if term.abs() < rel_tol * sum.abs() || term == 0.0 {
            small_in_a_row += 1;
            if small_in_a_row == 2 {
                let prefactor = (0.5 * z).powf(v);
                return Ok(SeriesResult {
                    value: prefactor * sum,
                    terms_used: k + 2,
                    truncation_estimate: (prefactor * term).abs(),
                });
            }
        } else {
            small_in_a_row = 0;
        }
    }
    Err(Error::NoConvergence(TERM_BUDGET))
}

const SERIES_TOL: f64 = 1e-16;

fn check_envelope(beta: f64) -> Result<()> {
    if !(ENVELOPE_LO..=ENVELOPE_HI).contains(&beta) {
        return Err(Error::Envelope {
            beta,
            lo: ENVELOPE_LO,
            hi: ENVELOPE_HI,
        });
    }
    Ok(())
}

/// The four Kummer values at `z = sqrt(2 q0) / beta` shared by both residuals.
struct KummerTerms {
    sqrt_disc: f64,
    s2q: f64,
    m2: f64,
    m6: f64,
    m10: f64,
    m14: f64,
}

impl KummerTerms {
    fn new(beta: f64, c: f64, q0: f64) -> Result<Self> {
        check_envelope(beta)?;
        let disc = c * c - 2.0 * q0;
        if disc < -1e-12 * c * c {
            return Err(Error::BelowCjVelocity {
                c,
                c_cj: (2.0 * q0).sqrt(),
            });
        }
        let disc = disc.max(0.0);
        let sq = q0.sqrt();
        let z = SQRT_2 * sq / beta;
        let a = |k: f64| (k * beta * sq + SQRT_2 * disc) / (8.0 * beta * sq);
        Ok(KummerTerms {
            sqrt_disc: disc.sqrt(),
            s2q: SQRT_2 * sq,
            m2: kummer_m(a(2.0), 0.5, z, SERIES_TOL)?.value,
            m6: kummer_m(a(6.0), 1.5, z, SERIES_TOL)?.value,
            m10: kummer_m(a(10.0), 1.5, z, SERIES_TOL)?.value,
            m14: kummer_m(a(14.0), 2.5, z, SERIES_TOL)?.value,
        })
    }
}

/// `T(-ell') - T_0(c)`; zero on the strong special curve `beta = beta_0(c)`.
pub fn heaviside_implicit_f0(beta: f64, c: f64, q0: f64, ti: f64) -> Result<f64> {
    let k = KummerTerms::new(beta, c, q0)?;
    let disc = c * c - 2.0 * q0;
    let num = -3.0 * beta * k.sqrt_disc * (-k.s2q + beta - c + ti) * k.m6
        - 3.0 * (beta * k.s2q + c * c / 3.0 - 2.0 * q0 / 3.0) * k.m14 * k.sqrt_disc
        + 3.0 * beta * (-beta * (k.s2q + c - ti) * k.m2 + k.m10 * (beta * k.s2q + disc));
    let den = 3.0 * beta * (-k.s2q + beta - c + ti) * k.m6
        + 3.0 * k.m14 * (beta * k.s2q + c * c / 3.0 - 2.0 * q0 / 3.0);
    Ok(num / den)
}

/// `T(-ell') - T_1(c)`; zero on the weak special curve `beta = beta_1(c)`.
pub fn heaviside_implicit_f1(beta: f64, c: f64, q0: f64, ti: f64) -> Result<f64> {
    let k = KummerTerms::new(beta, c, q0)?;
    let disc = c * c - 2.0 * q0;
    let num = 3.0 * beta * k.sqrt_disc * (-k.s2q + beta - c + ti) * k.m6
        + 3.0 * (beta * k.s2q + c * c / 3.0 - 2.0 * q0 / 3.0) * k.m14 * k.sqrt_disc
        + 3.0 * beta * (-beta * (k.s2q + c - ti) * k.m2 + k.m10 * (beta * k.s2q + disc));
    let den = 3.0 * beta * (-k.s2q + beta - c + ti) * k.m6
        + 3.0 * k.m14 * (beta * k.s2q + c * c / 3.0 - 2.0 * q0 / 3.0);
    Ok(num / den)
}

/// `T(-ell') - c_cj` at the CJ speed for `q0 = 2, T_i = 1/2`, in Bessel form.
pub fn beta_cj_equation(beta: f64) -> Result<f64> {
    check_envelope(beta)?;
    let z = 1.0 / beta;
    let i = |v: f64| bessel_i(v, z, SERIES_TOL).map(|r| r.value);
    let g34 = gamma(0.75);
    let num = 3.0 * beta * g34 * g34 * (1.0 / beta).sqrt() * (0.75 * i(-0.25)? - i(0.75)?);
    let den = PI * (9.0 / 8.0 * i(0.25)? - 1.5 * i(-0.75)?);
    Ok(num / den)
}

/// Bisection of `f` on `[lo, hi]` (opposite signs at the ends) to width `tol`.
fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of the CJ Bessel equation on `[0.5, 0.7]`, bisected to `1e-12`.
pub fn solve_beta_cj() -> Result<f64> {
    bisect(beta_cj_equation, 0.5, 0.7, 1e-12)
}

/// Root in `beta` of a residual over the envelope: a geometric scan locates
/// the first sign change, bisection refines it. Sign changes through a pole
/// (large residual at the refined point) are skipped.
fn envelope_root<F>(c: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    const SCAN: usize = 400;
    let ratio = (ENVELOPE_HI / ENVELOPE_LO).powf(1.0 / SCAN as f64);
    let mut prev_b = ENVELOPE_LO;
    let mut prev_f = f(prev_b)?;
    for k in 1..=SCAN {
        let b = if k == SCAN {
            ENVELOPE_HI
        } else {
            ENVELOPE_LO * ratio.powi(k as i32)
        };
        let fb = f(b)?;
        if prev_f == 0.0 {
            return Ok(prev_b);
        }
        if (prev_f > 0.0) != (fb > 0.0) {
            let root = bisect(&mut f, prev_b, b, 1e-14)?;
            let scale = prev_f.abs().max(fb.abs());
            if f(root)?.abs() <= scale {
                return Ok(root);
            }
        }
        prev_b = b;
        prev_f = fb;
    }
    Err(Error::NoRootInEnvelope { c })
}

/// `beta_0(c)` from the closed form, reference parameters `q0 = 2, T_i = 1/2`.
pub fn analytic_beta0(c: f64) -> Result<f64> {
    envelope_root(c, |b| heaviside_implicit_f0(b, c, 2.0, 0.5))
}

/// `beta_1(c)` from the closed form, reference parameters `q0 = 2, T_i = 1/2`.
pub fn analytic_beta1(c: f64) -> Result<f64> {
    envelope_root(c, |b| heaviside_implicit_f1(b, c, 2.0, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// erf by its Taylor series, independent of the Kummer routine.
    fn erf_taylor(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut pow = x;
        let mut fact = 1.0;
        for n in 0..60 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (fact * (2 * n + 1) as f64);
            pow *= x * x;
            fact *= (n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    }

    #[test]
    fn gamma_values() {
        assert_abs_diff_eq!(gamma(1.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gamma(5.0), 24.0, epsilon = 1e-11);
        assert_abs_diff_eq!(gamma(0.5), PI.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(gamma(1.5), 0.5 * PI.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(gamma(0.25), 3.625_609_908_221_908, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma(0.75), 1.225_416_702_465_178, epsilon = 1e-13);
        // Gamma(1/4) Gamma(3/4) = pi sqrt 2
        assert_abs_diff_eq!(gamma(0.25) * gamma(0.75), PI * SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma(-0.5), -2.0 * PI.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_m(0.3, 1.7, 0.0, 1e-15).unwrap().value, 1.0);
        assert_abs_diff_eq!(
            kummer_m(1.0, 1.0, 1.0, 1e-16).unwrap().value,
            std::f64::consts::E,
            epsilon = 1e-13
        );
        let oracle = PI.sqrt() * erf_taylor(1.0) / 2.0;
        assert_abs_diff_eq!(oracle, 0.746_824_132_812_427, epsilon = 1e-13);
        assert_abs_diff_eq!(
            kummer_m(0.5, 1.5, -1.0, 1e-16).unwrap().value,
            oracle,
            epsilon = 1e-12
        );
        assert!(matches!(
            kummer_m(1.0, -2.0, 1.0, 1e-12),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            kummer_m(1.0, 0.0, 1.0, 1e-12),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn kummer_acceptance_rule() {
        let r = kummer_m(2.3, 0.5, 14.0, 1e-15).unwrap();
        assert!(r.truncation_estimate <= 1e-15 * r.value.abs());
        assert!(r.terms_used > 10);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i(0.0, 0.0, 1e-15).unwrap().value, 1.0);
        // direct series at a much larger term count as the oracle
        let mut oracle = 0.0;
        let mut fact = 1.0;
        for k in 0..40 {
            if k > 0 {
                fact *= k as f64;
            }
            oracle += 0.25f64.powi(k) / (fact * fact);
        }
        assert_abs_diff_eq!(oracle, 1.266_065_877_752_008_4, epsilon = 1e-14);
        assert_abs_diff_eq!(
            bessel_i(0.0, 1.0, 1e-16).unwrap().value,
            oracle,
            epsilon = 1e-10
        );
        let half = (2.0 / PI).sqrt() * 1f64.sinh();
        assert_abs_diff_eq!(
            bessel_i(0.5, 1.0, 1e-16).unwrap().value,
            half,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(half, 0.937_674_888_245_488, epsilon = 1e-12);
        assert!(bessel_i(-1.5, 1.0, 1e-12).is_err());
        assert!(bessel_i(0.5, -1.0, 1e-12).is_err());
    }

    #[test]
    fn kummer_derivative_relation() {
        // d/dz M(a;b;z) = a/b M(a+1;b+1;z), checked by central differences
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = 0.1 + 3.0 * next();
            let b = 0.1 + 3.0 * next();
            let z = 0.1 + 5.0 * next();
            let h = 1e-5;
            let m = |z: f64| kummer_m(a, b, z, 1e-16).unwrap().value;
            let fd = (m(z + h) - m(z - h)) / (2.0 * h);
            let exact = a / b * kummer_m(a + 1.0, b + 1.0, z, 1e-16).unwrap().value;
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.abs(),
                "a={a} b={b} z={z}"
            );
        }
    }

    #[test]
    fn series_are_deterministic() {
        let a = kummer_m(1.3, 2.5, 7.0, 1e-15).unwrap();
        let b = kummer_m(1.3, 2.5, 7.0, 1e-15).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let a = bessel_i(-0.25, 1.6, 1e-15).unwrap();
        let b = bessel_i(-0.25, 1.6, 1e-15).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn beta_cj_root() {
        let root = solve_beta_cj().unwrap();
        assert_abs_diff_eq!(root, 0.614_452_673_918_923, epsilon = 1e-9);
        assert!(beta_cj_equation(0.614_452_673_9).unwrap().abs() < 1e-8);
        let lo = beta_cj_equation(0.5).unwrap();
        let hi = beta_cj_equation(0.7).unwrap();
        assert!(lo > 0.0 && hi < 0.0);
    }

    #[test]
    fn implicit_curves_at_reference_values() {
        assert!(heaviside_implicit_f0(0.582, 2.5, 2.0, 0.5).unwrap().abs() < 1e-2);
        let a = heaviside_implicit_f0(0.3, 2.5, 2.0, 0.5).unwrap();
        let b = heaviside_implicit_f0(1.0, 2.5, 2.0, 0.5).unwrap();
        assert!(a * b < 0.0);
        assert_abs_diff_eq!(analytic_beta0(2.5).unwrap(), 0.582, epsilon = 5e-3);
        assert_abs_diff_eq!(analytic_beta1(2.5).unwrap(), 1.7675, epsilon = 5e-3);
    }

    #[test]
    fn cj_specialization_agrees_with_bessel_form() {
        // the Kummer residual at c = c_cj is the Bessel residual
        for &b in &[0.2, 0.5, 0.7, 1.5, 4.0] {
            let kummer = heaviside_implicit_f0(b, 2.0, 2.0, 0.5).unwrap();
            let bessel = beta_cj_equation(b).unwrap();
            assert_abs_diff_eq!(kummer, bessel, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(
            analytic_beta0(2.0).unwrap(),
            solve_beta_cj().unwrap(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn envelope_enforced() {
        assert!(matches!(
            heaviside_implicit_f0(0.05, 2.5, 2.0, 0.5),
            Err(Error::Envelope { .. })
        ));
        assert!(matches!(
            beta_cj_equation(60.0),
            Err(Error::Envelope { .. })
        ));
        assert!(matches!(
            analytic_beta1(4.2),
            Err(Error::NoRootInEnvelope { .. })
        ));
    }
}
