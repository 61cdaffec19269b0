use num_complex::Complex64 as C64;

use super::quadrature::pairwise_sum;
use super::NumericsError;

/// Upward recurrence is used for degrees up to this bound and arguments up to
/// [`LAGUERRE_STABLE_X`]; beyond that the relative error has not been validated.
const LAGUERRE_STABLE_N: usize = 256;
const LAGUERRE_STABLE_X: f64 = 200.0;

/// Above this argument `I_nu(x)` overflows f64 and only the scaled value is returned.
const BESSEL_OVERFLOW_X: f64 = 700.0;
/// Power series below, large-argument expansion above (when `nu^2 < x`).
const BESSEL_SERIES_SEAM: f64 = 30.0;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

fn check_alpha(function: &'static str, alpha: f64) -> Result<(), NumericsError> {
    // Negative integer orders are kept: they are needed by the reflection rule
    // L_n^{(m-n)} = (m!/n!) (-x)^{n-m} L_m^{(n-m)} used for displacement matrices.
    if !alpha.is_finite() || (alpha <= -1.0 && alpha.fract() != 0.0) {
        return Err(NumericsError::Domain {
            function,
            name: "alpha",
            value: alpha,
        });
    }
    Ok(())
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}`.
///
/// `alpha` must exceed -1 unless it is an integer (the polynomial is still
/// well defined and the reflection rule needs those orders).
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64, NumericsError> {
    check_alpha("laguerre", alpha)?;
    debug_assert!(
        n <= LAGUERRE_STABLE_N && x.abs() <= LAGUERRE_STABLE_X,
        "laguerre recurrence used outside its validated range (n = {n}, x = {x})"
    );
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// All of `L_0^{(alpha)}(x), ..., L_nmax^{(alpha)}(x)` from one recurrence pass.
pub fn laguerre_sequence(nmax: usize, alpha: f64, x: f64) -> Result<Vec<f64>, NumericsError> {
    check_alpha("laguerre", alpha)?;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax == 0 {
        return Ok(out);
    }
    out.push(1.0 + alpha - x);
    for k in 1..nmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    Ok(out)
}

/// Same recurrence at a complex argument; fills `out` with degrees `0..out.len()`.
pub fn laguerre_complex(alpha: f64, z: C64, out: &mut [C64]) {
    if out.is_empty() {
        return;
    }
    out[0] = C64::new(1.0, 0.0);
    if out.len() == 1 {
        return;
    }
    out[1] = C64::new(1.0 + alpha, 0.0) - z;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((C64::new(2.0 * kf + 1.0 + alpha, 0.0) - z) * out[k] - out[k - 1] * (kf + alpha))
            / (kf + 1.0);
    }
}

/// Modified Bessel function of the first kind, `I_nu(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselI {
    Value(f64),
    /// Returned above the overflow threshold: `I_nu(x) = scaled * e^x`.
    Scaled(f64),
}

impl BesselI {
    /// Plain value; `+inf` when only the scaled form is representable.
    pub fn value(self) -> f64 {
        match self {
            BesselI::Value(v) => v,
            BesselI::Scaled(_) => f64::INFINITY,
        }
    }
}

pub fn bessel_i(nu: f64, x: f64) -> Result<BesselI, NumericsError> {
    let scaled = bessel_i_scaled(nu, x)?;
    if x > BESSEL_OVERFLOW_X {
        Ok(BesselI::Scaled(scaled))
    } else {
        Ok(BesselI::Value(scaled * x.exp()))
    }
}

/// `e^{-x} I_nu(x)`, finite for every admissible argument.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64, NumericsError> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(NumericsError::Domain {
            function: "bessel_i",
            name: "nu",
            value: nu,
        });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(NumericsError::Domain {
            function: "bessel_i",
            name: "x",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x > BESSEL_SERIES_SEAM && nu * nu < x {
        Ok(bessel_i_scaled_asymptotic(nu, x))
    } else {
        Ok(bessel_i_scaled_series(nu, x))
    }
}

fn bessel_i_scaled_series(nu: f64, x: f64) -> f64 {
    // sum_k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)), terms all positive.
    let quarter_x2 = 0.25 * x * x;
    let mut log_scale = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) - x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= quarter_x2 / (k * (k + nu));
        sum += term;
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::f64::consts::LN_10;
        }
        if term < 1e-17 * sum && k > 0.5 * x {
            break;
        }
    }
    (log_scale + sum.ln()).exp()
}

fn bessel_i_scaled_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Terminating Gauss hypergeometric sum `2F1(-m, b; c; x)`.
///
/// The `m + 1` terms are accumulated with pairwise summation. A pole is reported
/// when `(c)_k` vanishes before the series terminates.
pub fn hyp2f1_terminating(m: usize, b: f64, c: f64, x: f64) -> Result<f64, NumericsError> {
    let mut terms = Vec::with_capacity(m + 1);
    let mut term = 1.0;
    terms.push(term);
    for k in 0..m {
        let kf = k as f64;
        let denom = c + kf;
        if denom == 0.0 {
            return Err(NumericsError::Pole { k, c });
        }
        term *= (kf - m as f64) * (b + kf) / (denom * (kf + 1.0)) * x;
        terms.push(term);
    }
    Ok(pairwise_sum(&terms))
}
