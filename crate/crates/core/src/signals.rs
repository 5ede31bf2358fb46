//! Generators for series governed by linear recurrence relations, plus
//! seeded Gaussian noise.
//!
//! A series satisfying an order-r LRR has the closed form
//! `s_n = sum_m (sum_j c_mj n^j) mu_m^n` over the characteristic roots
//! `mu_m`; real series combine polynomials, exponentials and sinusoids.
//! [`RootSpec`] describes such a series root by root and is the test
//! fixture factory for the whole crate: rank checks, projector budgets
//! and separability tests all build their inputs here.

use nalgebra::{Complex, DVector};

use crate::error::SsaError;
use crate::series::{embed, TimeSeries};
use crate::Result;

/// Relative singular-value tolerance for the empirical rank; one order
/// looser than the decomposition rank cutoff to absorb generator
/// rounding.
pub const DEFAULT_LRANK_TOLERANCE: f64 = 1e-8;

/// One characteristic root (or conjugate pair) with its polynomial
/// coefficient factor.
///
/// `frequency` in cycles per step: 0 gives the real root `modulus`,
/// 0.5 the real root `-modulus`, anything in between a conjugate pair
/// realified as `A(n) * modulus^n * sin(2 pi frequency n + phase)` with
/// `A(n) = sum_j coeffs[j] n^j`.
#[derive(Debug, Clone)]
pub struct Root {
    pub modulus: f64,
    pub frequency: f64,
    pub multiplicity: usize,
    pub coeffs: Vec<f64>,
    pub phase: f64,
}

impl Root {
    fn validate(&self) -> Result<()> {
        if !(self.modulus.is_finite() && self.modulus > 0.0) {
            return Err(SsaError::InvalidSignalSpec(format!(
                "root modulus must be positive, got {}",
                self.modulus
            )));
        }
        if !(0.0..=0.5).contains(&self.frequency) {
            return Err(SsaError::InvalidSignalSpec(format!(
                "root frequency must lie in [0, 0.5], got {}",
                self.frequency
            )));
        }
        if self.multiplicity == 0 {
            return Err(SsaError::InvalidSignalSpec(
                "root multiplicity must be at least 1".into(),
            ));
        }
        if self.coeffs.is_empty() || self.coeffs.len() > self.multiplicity {
            return Err(SsaError::InvalidSignalSpec(format!(
                "coefficient polynomial must have degree below multiplicity {} (got {} coefficients)",
                self.multiplicity,
                self.coeffs.len()
            )));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) || !self.phase.is_finite() {
            return Err(SsaError::NonFinite {
                context: "root spec",
            });
        }
        Ok(())
    }

    /// Polynomial factor `A(n) = sum_j coeffs[j] n^j`.
    fn amplitude(&self, n: usize) -> f64 {
        let x = n as f64;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Contribution to the series dimension: conjugate pairs count twice.
    fn dimension(&self) -> usize {
        if self.frequency == 0.0 || self.frequency == 0.5 {
            self.multiplicity
        } else {
            2 * self.multiplicity
        }
    }
}

/// A sum of [`Root`] terms; the closed-form model of a finite-rank series.
#[derive(Debug, Clone)]
pub struct RootSpec {
    roots: Vec<Root>,
}

impl RootSpec {
    pub fn new(roots: Vec<Root>) -> Result<Self> {
        if roots.is_empty() {
            return Err(SsaError::InvalidSignalSpec("no roots given".into()));
        }
        for root in &roots {
            root.validate()?;
        }
        Ok(RootSpec { roots })
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Total dimension r: the rank of any large-enough trajectory matrix.
    pub fn dimension(&self) -> usize {
        self.roots.iter().map(Root::dimension).sum()
    }

    /// Polynomial `coeffs[0] + coeffs[1] n + ...` (root 1 with the
    /// matching multiplicity).
    pub fn polynomial(coeffs: &[f64]) -> Result<Self> {
        RootSpec::new(vec![Root {
            modulus: 1.0,
            frequency: 0.0,
            multiplicity: coeffs.len(),
            coeffs: coeffs.to_vec(),
            phase: 0.0,
        }])
    }

    /// The line `slope * n + intercept`.
    pub fn linear(slope: f64, intercept: f64) -> Result<Self> {
        RootSpec::polynomial(&[intercept, slope])
    }

    /// `amplitude * sin(2 pi frequency n + phase)` with frequency in (0, 0.5).
    pub fn sine(amplitude: f64, frequency: f64, phase: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency < 0.5) {
            return Err(SsaError::InvalidSignalSpec(format!(
                "sine frequency must lie in (0, 0.5), got {frequency}"
            )));
        }
        RootSpec::new(vec![Root {
            modulus: 1.0,
            frequency,
            multiplicity: 1,
            coeffs: vec![amplitude],
            phase,
        }])
    }

    /// `scale * modulus^n`.
    pub fn exponential(scale: f64, modulus: f64) -> Result<Self> {
        RootSpec::new(vec![Root {
            modulus,
            frequency: 0.0,
            multiplicity: 1,
            coeffs: vec![scale],
            phase: 0.0,
        }])
    }

    /// Concatenation of two specs (sum of the two series).
    pub fn plus(mut self, other: RootSpec) -> Self {
        self.roots.extend(other.roots);
        self
    }
}

/// Evaluates the closed form at `n = 1..=len`.
pub fn generate(spec: &RootSpec, len: usize) -> Result<TimeSeries> {
    let values = (1..=len)
        .map(|n| {
            spec.roots
                .iter()
                .map(|root| {
                    let base = root.modulus.powi(n as i32);
                    let factor = if root.frequency == 0.0 {
                        base
                    } else if root.frequency == 0.5 {
                        if n % 2 == 0 {
                            base
                        } else {
                            -base
                        }
                    } else {
                        base * (2.0 * std::f64::consts::PI * root.frequency * n as f64 + root.phase)
                            .sin()
                    };
                    root.amplitude(n) * factor
                })
                .sum()
        })
        .collect();
    TimeSeries::new(values)
}

/// Coefficients `a_1..a_r` of the recurrence
/// `s_{i+r} = sum_k a_k s_{i+r-k}`, with `a_r != 0`.
#[derive(Debug, Clone)]
pub struct LrrCoefficients {
    coeffs: Vec<f64>,
}

impl LrrCoefficients {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.last() {
            None => Err(SsaError::InvalidLrr),
            Some(&last) if last == 0.0 || !last.is_finite() => Err(SsaError::InvalidLrr),
            Some(_) => Ok(LrrCoefficients { coeffs }),
        }
    }

    /// Order r of the recurrence.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Runs the recurrence forward from `initial` (the first r values) up to
/// the requested length.
pub fn apply_lrr(coeffs: &LrrCoefficients, initial: &[f64], len: usize) -> Result<TimeSeries> {
    let order = coeffs.order();
    if initial.len() != order {
        return Err(SsaError::LengthMismatch {
            expected: order,
            found: initial.len(),
        });
    }
    if len < order {
        return Err(SsaError::LengthMismatch {
            expected: order,
            found: len,
        });
    }
    let mut values = Vec::with_capacity(len);
    values.extend_from_slice(initial);
    for i in order..len {
        let next: f64 = (1..=order)
            .map(|k| coeffs.coeffs()[k - 1] * values[i - k])
            .sum();
        values.push(next);
    }
    TimeSeries::new(values)
}

/// The minimal LRR whose characteristic polynomial has exactly the
/// spec's roots (conjugate pairs expanded), built by multiplying out
/// `prod (mu - root)^multiplicity` in complex arithmetic.
pub fn lrr_from_roots(spec: &RootSpec) -> Result<LrrCoefficients> {
    // monic polynomial, leading coefficient first
    let mut poly: Vec<Complex<f64>> = vec![Complex::new(1.0, 0.0)];
    let push_root = |mu: Complex<f64>, multiplicity: usize, poly: &mut Vec<Complex<f64>>| {
        for _ in 0..multiplicity {
            let mut next = vec![Complex::new(0.0, 0.0); poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * mu;
            }
            *poly = next;
        }
    };
    for root in spec.roots() {
        let two_pi_w = 2.0 * std::f64::consts::PI * root.frequency;
        if root.frequency == 0.0 {
            push_root(
                Complex::new(root.modulus, 0.0),
                root.multiplicity,
                &mut poly,
            );
        } else if root.frequency == 0.5 {
            push_root(
                Complex::new(-root.modulus, 0.0),
                root.multiplicity,
                &mut poly,
            );
        } else {
            let mu = Complex::from_polar(root.modulus, two_pi_w);
            push_root(mu, root.multiplicity, &mut poly);
            push_root(mu.conj(), root.multiplicity, &mut poly);
        }
    }
    // mu^r - sum a_k mu^{r-k}: a_k is the negated coefficient of mu^{r-k}
    let coeffs: Vec<f64> = poly[1..].iter().map(|c| -c.re).collect();
    LrrCoefficients::new(coeffs)
}

/// Numerical rank of the series' `L`-trajectory matrix at the given
/// relative singular-value tolerance.
pub fn empirical_lrank(series: &TimeSeries, window: usize, tolerance: f64) -> Result<usize> {
    let tm = embed(series, window)?;
    let sigma = tm.matrix().clone().svd(false, false).singular_values;
    let largest = sigma.iter().cloned().fold(0.0f64, f64::max);
    if largest <= 0.0 {
        return Ok(0);
    }
    Ok(sigma.iter().filter(|&&s| s >= tolerance * largest).count())
}

/// Orthonormal basis of the root spec's theoretical column trajectory space
/// over a window of length `window`: span of the vectors
/// `(m^j mu^m)_{m=0..window-1}` over all roots and `j` below each
/// multiplicity, realified for conjugate pairs.
pub fn trajectory_space_basis(
    spec: &RootSpec,
    window: usize,
) -> Result<crate::projection::ProjectionBasis> {
    let mut raw: Vec<DVector<f64>> = Vec::new();
    for root in spec.roots() {
        let two_pi_w = 2.0 * std::f64::consts::PI * root.frequency;
        for j in 0..root.multiplicity {
            let poly = |m: usize| (m as f64).powi(j as i32);
            if root.frequency == 0.0 || root.frequency == 0.5 {
                let sign = if root.frequency == 0.0 { 1.0 } else { -1.0 };
                raw.push(DVector::from_iterator(
                    window,
                    (0..window).map(|m| poly(m) * (sign * root.modulus).powi(m as i32)),
                ));
            } else {
                raw.push(DVector::from_iterator(
                    window,
                    (0..window).map(|m| {
                        poly(m) * root.modulus.powi(m as i32) * (two_pi_w * m as f64).cos()
                    }),
                ));
                raw.push(DVector::from_iterator(
                    window,
                    (0..window).map(|m| {
                        poly(m) * root.modulus.powi(m as i32) * (two_pi_w * m as f64).sin()
                    }),
                ));
            }
        }
    }
    crate::projection::orthonormalize(&raw)
}

/// Deterministic N(0, sigma^2) noise.
///
/// The generator contract (part of any golden-file comparison): draws
/// come from SplitMix64 seeded with `seed`, each 64-bit output mapped to
/// the open unit interval as `((x >> 11) + 0.5) / 2^53`, and pairs of
/// uniforms turned Gaussian by the Box-Muller transform
/// `sqrt(-2 ln u1) * (cos, sin)(2 pi u2)`. For odd lengths the final
/// sine draw is discarded.
pub fn gaussian_noise(len: usize, sigma: f64, seed: u64) -> Result<TimeSeries> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(SsaError::NegativeSigma(sigma));
    }
    let mut rng = SplitMix64::new(seed);
    let mut values = Vec::with_capacity(len + 1);
    while values.len() < len {
        let u1 = rng.next_unit();
        let u2 = rng.next_unit();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        values.push(sigma * radius * angle.cos());
        values.push(sigma * radius * angle.sin());
    }
    values.truncate(len);
    TimeSeries::new(values)
}

/// SplitMix64: counter-based, stable across platforms.
#[derive(Debug, Clone)]
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in the open interval (0, 1): 53 mantissa bits plus a
    /// half-step offset, so `ln` never sees zero.
    pub(crate) fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::orthonormalize;
    use std::f64::consts::PI;

    #[test]
    fn generate_linear() {
        let spec = RootSpec::linear(2.0, -3.0).unwrap();
        let x = generate(&spec, 6).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            let n = (i + 1) as f64;
            assert_eq!(*v, 2.0 * n - 3.0);
        }
        assert_eq!(spec.dimension(), 2);
    }

    #[test]
    fn generate_sine() {
        let spec = RootSpec::sine(1.0, 0.05, 0.0).unwrap();
        let x = generate(&spec, 40).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            let expected = (2.0 * PI * 0.05 * (i + 1) as f64).sin();
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn generate_modulated_sine() {
        let rho = 0.1f64.exp();
        let spec = RootSpec::new(vec![Root {
            modulus: rho,
            frequency: 0.1,
            multiplicity: 1,
            coeffs: vec![1.0],
            phase: 0.3,
        }])
        .unwrap();
        let x = generate(&spec, 30).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            let n = (i + 1) as f64;
            let expected = (0.1 * n).exp() * (2.0 * PI * 0.1 * n + 0.3).sin();
            assert!((v - expected).abs() < 1e-9 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn apply_lrr_geometric() {
        let coeffs = LrrCoefficients::new(vec![2.0]).unwrap();
        let x = apply_lrr(&coeffs, &[1.0], 6).unwrap();
        assert_eq!(x.values(), &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0]);
    }

    #[test]
    fn apply_lrr_linear() {
        // s_{n+2} = 2 s_{n+1} - s_n holds for any line
        let (a, b) = (3.0, -1.0);
        let coeffs = LrrCoefficients::new(vec![2.0, -1.0]).unwrap();
        let x = apply_lrr(&coeffs, &[b + a, b + 2.0 * a], 10).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            assert!((v - (a * (i + 1) as f64 + b)).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_lrr_sine_matches_direct_evaluation() {
        let w = 0.07;
        let coeffs = LrrCoefficients::new(vec![2.0 * (2.0 * PI * w).cos(), -1.0]).unwrap();
        let initial = [(2.0 * PI * w).sin(), (4.0 * PI * w).sin()];
        let x = apply_lrr(&coeffs, &initial, 50).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            let expected = (2.0 * PI * w * (i + 1) as f64).sin();
            assert!(
                (v - expected).abs() < 1e-12,
                "n={} {v} vs {expected}",
                i + 1
            );
        }
    }

    #[test]
    fn lrr_requires_nonzero_trailing_coefficient() {
        assert!(matches!(
            LrrCoefficients::new(vec![1.0, 0.0]),
            Err(SsaError::InvalidLrr)
        ));
        assert!(matches!(
            LrrCoefficients::new(vec![]),
            Err(SsaError::InvalidLrr)
        ));
    }

    #[test]
    fn empirical_lrank_examples() {
        let exp = generate(&RootSpec::exponential(1.0, 1.2).unwrap(), 30).unwrap();
        assert_eq!(
            empirical_lrank(&exp, 10, DEFAULT_LRANK_TOLERANCE).unwrap(),
            1
        );

        let sine = generate(&RootSpec::sine(1.0, 0.17, 0.4).unwrap(), 50).unwrap();
        assert_eq!(
            empirical_lrank(&sine, 2, DEFAULT_LRANK_TOLERANCE).unwrap(),
            2
        );
        assert_eq!(
            empirical_lrank(&sine, 20, DEFAULT_LRANK_TOLERANCE).unwrap(),
            2
        );

        let linear = generate(&RootSpec::linear(1.0, 0.5).unwrap(), 30).unwrap();
        assert_eq!(
            empirical_lrank(&linear, 12, DEFAULT_LRANK_TOLERANCE).unwrap(),
            2
        );
    }

    #[test]
    fn empirical_lrank_matches_spec_dimension() {
        let spec = RootSpec::linear(0.5, 2.0)
            .unwrap()
            .plus(RootSpec::sine(1.5, 0.23, 1.1).unwrap())
            .plus(RootSpec::exponential(0.3, 0.9).unwrap());
        let r = spec.dimension();
        assert_eq!(r, 5);
        let x = generate(&spec, 60).unwrap();
        for window in [r, 10, 25, 55] {
            assert_eq!(
                empirical_lrank(&x, window, DEFAULT_LRANK_TOLERANCE).unwrap(),
                r,
                "window {window}"
            );
        }
    }

    #[test]
    fn generate_agrees_with_lrr_from_roots() {
        let specs = [
            RootSpec::linear(1.0, -100.0).unwrap(),
            RootSpec::polynomial(&[0.0, 0.0, 0.0, 1e-4]).unwrap(),
            RootSpec::sine(2.0, 0.31, 0.7).unwrap(),
            RootSpec::linear(0.2, 1.0)
                .unwrap()
                .plus(RootSpec::sine(1.0, 0.1, 0.0).unwrap()),
            RootSpec::new(vec![Root {
                modulus: 1.05,
                frequency: 0.2,
                multiplicity: 2,
                coeffs: vec![0.5, 0.25],
                phase: 0.1,
            }])
            .unwrap(),
        ];
        for spec in &specs {
            let n = 60;
            let x = generate(spec, n).unwrap();
            let lrr = lrr_from_roots(spec).unwrap();
            let r = lrr.order();
            assert_eq!(r, spec.dimension());
            let scale = x.values().iter().fold(1e-30f64, |acc, v| acc.max(v.abs()));
            for i in 0..(n - r) {
                let predicted: f64 = (1..=r)
                    .map(|k| lrr.coeffs()[k - 1] * x.values()[i + r - k])
                    .sum();
                let actual = x.values()[i + r];
                assert!(
                    (predicted - actual).abs() <= 1e-8 * scale,
                    "residual at {i}: {predicted} vs {actual}"
                );
            }
        }
    }

    #[test]
    fn trajectory_space_matches_embedded_column_space() {
        let spec = RootSpec::linear(1.0, 2.0)
            .unwrap()
            .plus(RootSpec::sine(1.0, 0.12, 0.5).unwrap());
        let window = 12;
        let x = generate(&spec, 50).unwrap();
        let tm = embed(&x, window).unwrap();

        // orthonormal basis of the actual column space
        let cols: Vec<DVector<f64>> = (0..tm.lag_count())
            .map(|j| tm.matrix().column(j).clone_owned())
            .collect();
        let actual = orthonormalize(&cols).unwrap();
        let theory = trajectory_space_basis(&spec, window).unwrap();
        assert_eq!(actual.count(), theory.count());

        // largest principal angle via || (I - Q1 Q1^T) Q2 ||_F <= sin bound
        let q1 = actual.as_matrix();
        let q2 = theory.as_matrix();
        let residual = q2 - q1 * (q1.transpose() * q2);
        assert!(residual.norm() < 1e-6, "{}", residual.norm());
    }

    #[test]
    fn noise_zero_sigma_and_determinism() {
        let zeros = gaussian_noise(10, 0.0, 7).unwrap();
        assert!(zeros.values().iter().all(|&v| v == 0.0));

        let a = gaussian_noise(101, 1.3, 42).unwrap();
        let b = gaussian_noise(101, 1.3, 42).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let c = gaussian_noise(101, 1.3, 43).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn noise_moments() {
        let n = 100_000;
        let x = gaussian_noise(n, 1.0, 2024).unwrap();
        let mean: f64 = x.values().iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
        let variance: f64 = x
            .values()
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n as f64;
        assert!((variance - 1.0).abs() < 0.05, "variance {variance}");
    }

    #[test]
    fn noise_rejects_negative_sigma() {
        assert!(matches!(
            gaussian_noise(10, -1.0, 0),
            Err(SsaError::NegativeSigma(_))
        ));
    }

    #[test]
    fn root_spec_validation() {
        assert!(RootSpec::new(vec![]).is_err());
        assert!(RootSpec::sine(1.0, 0.0, 0.0).is_err());
        assert!(RootSpec::new(vec![Root {
            modulus: -1.0,
            frequency: 0.0,
            multiplicity: 1,
            coeffs: vec![1.0],
            phase: 0.0,
        }])
        .is_err());
        assert!(RootSpec::new(vec![Root {
            modulus: 1.0,
            frequency: 0.0,
            multiplicity: 1,
            coeffs: vec![1.0, 2.0], // degree too high
            phase: 0.0,
        }])
        .is_err());
    }

    #[test]
    fn generate_half_frequency_alternates_sign() {
        let spec = RootSpec::new(vec![Root {
            modulus: 2.0,
            frequency: 0.5,
            multiplicity: 1,
            coeffs: vec![1.0],
            phase: 0.0,
        }])
        .unwrap();
        let x = generate(&spec, 5).unwrap();
        assert_eq!(x.values(), &[-2.0, 4.0, -8.0, 16.0, -32.0]);
        assert_eq!(empirical_lrank(&x, 2, DEFAULT_LRANK_TOLERANCE).unwrap(), 1);
    }
}
