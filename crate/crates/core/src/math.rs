//! Float helpers over `libm` so the crate stays `no_std`.

use num_complex::Complex64;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn atanh(x: f64) -> f64 {
    libm::atanh(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::new(cos(phi), sin(phi))
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sqrt(n! / m!)` for `n >= m`, the ladder factor of `n - m` raising steps.
pub fn ladder(n: usize, m: usize) -> f64 {
    debug_assert!(n >= m);
    ((m + 1)..=n).fold(1.0, |acc, k| acc * sqrt(k as f64))
}

#[cfg(test)]
mod tests {
    use std::prelude::v1::*;
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(2, 3), 0.0);
        assert_eq!(factorial(5), 120.0);
    }

    #[test]
    fn ladder_matches_factorial_ratio() {
        assert!((ladder(3, 1) - sqrt(factorial(3) / factorial(1))).abs() < 1e-15);
        assert_eq!(ladder(2, 2), 1.0);
    }
}
