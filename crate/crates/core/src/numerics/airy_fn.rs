//! Airy function `Ai` from the differential equation `y'' = x·y`.
//!
//! All evaluation goes through one Taylor kernel: around `x₀` the coefficients
//! of `y(x₀ + s) = Σ aₖ sᵏ` obey `(k+1)(k+2)·a_{k+2} = x₀·aₖ + a_{k−1}`.
//!
//! - `|x| ≤ 1`: a single expansion about 0 (the Maclaurin series) seeded with
//!   `Ai(0) = 3^{−2/3}/Γ(2/3)` and `Ai'(0) = −3^{−1/3}/Γ(1/3)`.
//! - `x < −1`: step the equation from −1 into the oscillatory region.
//! - `x > 1`: forward stepping would be swamped by `Bi`, so the recessive
//!   solution is built by stepping *backwards* from `x + 10` (where `Bi` dies
//!   away) and scaled to match the series value at 1.

use std::sync::OnceLock;

use crate::{Error, Result};

const SERIES_RADIUS: f64 = 1.0;
const BACKWARD_MARGIN: f64 = 10.0;
const MAX_TERMS: usize = 120;
/// Zeros cached by [`airy_zero`].
pub const MAX_ZERO_INDEX: usize = 20;

/// Γ(x) by the Lanczos approximation (g = 7, nine terms), with reflection for
/// `x < 1/2`. Relative error is around 1e-15 on the positive axis.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEFFS: [f64; 9] = [
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
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// `(Ai(0), Ai'(0))`.
pub fn airy_origin() -> (f64, f64) {
    static ORIGIN: OnceLock<(f64, f64)> = OnceLock::new();
    *ORIGIN.get_or_init(|| {
        let ai0 = 1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0));
        let dai0 = -1.0 / (3f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0));
        (ai0, dai0)
    })
}

/// Advances `(y, y')` of `y'' = x·y` from `x0` by `step` with one Taylor
/// expansion summed to convergence.
fn taylor_step(x0: f64, y: f64, dy: f64, step: f64) -> (f64, f64) {
    // a[k-1], a[k], a[k+1] rolling window
    let (mut a_prev, mut a_cur, mut a_next) = (0.0, y, dy);
    let mut value = y + dy * step;
    let mut slope = dy;
    let mut power = step; // step^(k+1) for k = 0
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let a_k2 = (x0 * a_cur + a_prev) / ((kf + 1.0) * (kf + 2.0));
        // term of order k+2
        let value_term = a_k2 * power * step;
        let slope_term = a_k2 * (kf + 2.0) * power;
        value += value_term;
        slope += slope_term;
        power *= step;
        a_prev = a_cur;
        a_cur = a_next;
        a_next = a_k2;
        let small =
            value_term.abs() <= 1e-18 * value.abs().max(1e-300) && slope_term.abs() <= 1e-18 * slope.abs().max(1e-300);
        if small {
            quiet += 1;
            // the recursion skips an order now and then; wait for three quiet terms
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (value, slope)
}

fn step_size(x: f64) -> f64 {
    // keep √|x|·h bounded so each expansion converges quickly
    (1.5 / x.abs().sqrt().max(1.0)).min(0.5)
}

/// Integrates from `(x0, y, dy)` to `x1`, rescaling to avoid overflow. Returns
/// the final pair and the accumulated log-scale (natural log).
fn integrate(x0: f64, y: f64, dy: f64, x1: f64) -> (f64, f64, f64) {
    let dir = (x1 - x0).signum();
    let (mut x, mut y, mut dy) = (x0, y, dy);
    let mut log_scale = 0.0;
    while (x1 - x) * dir > 0.0 {
        let h = step_size(x).min((x1 - x).abs()) * dir;
        let (ny, ndy) = taylor_step(x, y, dy, h);
        y = ny;
        dy = ndy;
        x = if ((x + h) - x1) * dir >= 0.0 { x1 } else { x + h };
        let mag = y.abs().max(dy.abs());
        if mag > 1e100 {
            y /= mag;
            dy /= mag;
            log_scale += mag.ln();
        }
    }
    (y, dy, log_scale)
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_ai_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    let (ai0, dai0) = airy_origin();
    if x.abs() <= SERIES_RADIUS {
        return taylor_step(0.0, ai0, dai0, x);
    }
    if x < 0.0 {
        let (y, dy) = taylor_step(0.0, ai0, dai0, -SERIES_RADIUS);
        let (y, dy, log_scale) = integrate(-SERIES_RADIUS, y, dy, x);
        debug_assert_eq!(log_scale, 0.0);
        return (y, dy);
    }
    if x == f64::INFINITY {
        return (0.0, 0.0);
    }
    // recessive solution from the right, log-derivative seeded from the
    // leading asymptotics so little Bi is present to begin with
    let far = x + BACKWARD_MARGIN;
    let seed_slope = -far.sqrt() - 0.25 / far;
    let (y_x, dy_x, _) = integrate(far, 1.0, seed_slope, x);
    let (y_1, _, log_1) = integrate(x, y_x, dy_x, SERIES_RADIUS);
    let (target, _) = taylor_step(0.0, ai0, dai0, SERIES_RADIUS);
    // Ai(x) = target · y(x)/y(1), carrying the rescaling logs
    let ratio = (-log_1).exp() * target / y_1;
    (y_x * ratio, dy_x * ratio)
}

/// Ai(x).
pub fn airy_ai(x: f64) -> f64 {
    airy_ai_pair(x).0
}

fn zero_table() -> &'static [f64; MAX_ZERO_INDEX] {
    static ZEROS: OnceLock<[f64; MAX_ZERO_INDEX]> = OnceLock::new();
    ZEROS.get_or_init(|| {
        let mut zeros = [0.0; MAX_ZERO_INDEX];
        let scan_step = 0.05;
        let mut found = 0;
        let mut left = 0.0;
        let mut f_left = airy_ai(-left);
        while found < MAX_ZERO_INDEX {
            let right = left + scan_step;
            let f_right = airy_ai(-right);
            if f_left == 0.0 {
                zeros[found] = left;
                found += 1;
            } else if f_left.signum() != f_right.signum() && f_right != 0.0 {
                zeros[found] = bisect(left, right, f_left);
                found += 1;
            }
            left = right;
            f_left = f_right;
        }
        zeros
    })
}

/// Bisection on `λ ↦ Ai(−λ)` inside `[lo, hi]`, down to adjacent floats.
fn bisect(mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = airy_ai(-mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if airy_ai(-lo).abs() <= airy_ai(-hi).abs() {
        lo
    } else {
        hi
    }
}

/// `λₙ > 0` with `Ai(−λₙ) = 0`, for `1 ≤ n ≤ 20`.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 || n > MAX_ZERO_INDEX {
        return Err(Error::AiryZeroIndex {
            index: n,
            max: MAX_ZERO_INDEX,
        });
    }
    Ok(zero_table()[n - 1])
}
