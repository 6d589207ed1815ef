//! Translation actions `T(t)x = x + ρ(t)` on 𝕋^d and trigonometric
//! polynomials on which their generators act as Fourier multipliers.

mod io;
mod scan;
mod series;
mod solve;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{to_f64, Q};

pub use io::{ActionFile, SeriesRecord};
pub use scan::{diophantine_scan, DiophantineReport, ScanVerdict};
pub use series::FourierSeries;
pub use solve::{
    single_mode_tame_sweep, sobolev_norm, solve_laplacian, solve_vectorfield, tame_constant_estimate, NearResonance,
    Solved, TameEstimate,
};

pub const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Relative threshold below which a nonzero divisor is reported as a near-resonance.
pub const NEAR_RESONANCE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("generator index {index} out of range for k = {k}")]
    GeneratorIndex { index: usize, k: usize },
    #[error("resonance at frequency {frequency:?}: the divisor vanishes on a nonzero coefficient")]
    Resonance { frequency: Vec<i64> },
    #[error("series is not real: coefficient at {0:?} is not the conjugate of its mirror")]
    NotReal(Vec<i64>),
    #[error("{0}")]
    Parse(String),
}

/// Exact generator `X_j` scaled to a primitive-denominator integer vector.
#[derive(Debug, Clone, PartialEq)]
struct ScaledGenerator {
    small: Option<Vec<i128>>,
    big: Vec<BigInt>,
}

impl ScaledGenerator {
    fn new(column: &[Q]) -> Self {
        let lcm = column.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let big: Vec<BigInt> = column.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        // keep headroom so that |a·n| stays in range for |n_i| < 2^24
        let bound: BigInt = BigInt::one() << 96u32;
        let small = big
            .iter()
            .map(|a| if a.magnitude() < bound.magnitude() { a.to_i128() } else { None })
            .collect::<Option<Vec<_>>>();
        ScaledGenerator { small, big }
    }

    fn vanishes_on(&self, n: &[i64]) -> bool {
        if let Some(a) = &self.small {
            if n.iter().all(|x| x.unsigned_abs() < 1 << 24) {
                return a.iter().zip(n).map(|(a, &n)| a * n as i128).sum::<i128>() == 0;
            }
        }
        self.big.iter().zip(n).map(|(a, &n)| a * n).sum::<BigInt>().is_zero()
    }
}

/// `ρ: ℝ^k → ℝ^d` given by its generator columns `X_1..X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationAction {
    d: usize,
    generators: Vec<Vec<f64>>,
    exact: Option<Vec<ScaledGenerator>>,
}

impl TranslationAction {
    /// `generators[j]` is the column `X_{j+1} ∈ ℝ^d`.
    pub fn new(d: usize, generators: Vec<Vec<f64>>) -> Result<Self, TorusError> {
        if d == 0 {
            return Err(TorusError::InvalidAction("torus dimension d must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(TorusError::InvalidAction("need at least one generator".into()));
        }
        for (j, x) in generators.iter().enumerate() {
            if x.len() != d {
                return Err(TorusError::InvalidAction(format!("generator {j} has {} entries, expected {d}", x.len())));
            }
            if let Some(v) = x.iter().find(|v| !v.is_finite()) {
                return Err(TorusError::InvalidAction(format!("generator {j} has non-finite entry {v}")));
            }
        }
        Ok(TranslationAction { d, generators, exact: None })
    }

    /// Rational generators; resonances are then decided in exact arithmetic.
    pub fn new_exact(d: usize, generators: Vec<Vec<Q>>) -> Result<Self, TorusError> {
        let floats = generators.iter().map(|x| x.iter().map(to_f64).collect()).collect();
        let mut act = Self::new(d, floats)?;
        act.exact = Some(generators.iter().map(|x| ScaledGenerator::new(x)).collect());
        Ok(act)
    }

    /// `X = (1, φ)` on 𝕋², φ the golden ratio.
    pub fn golden() -> Self {
        Self::new(2, vec![vec![1.0, golden_ratio()]]).expect("valid")
    }

    /// `X_1 = (1, 0)`, `X_2 = (0, φ)` on 𝕋².
    pub fn golden_2d() -> Self {
        Self::new(2, vec![vec![1.0, 0.0], vec![0.0, golden_ratio()]]).expect("valid")
    }

    /// `k` commuting golden-type generators on 𝕋^k: `X_j = e_j + φ e_{j+1}` (cyclically).
    pub fn golden_k(k: usize) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return Self::golden();
        }
        let phi = golden_ratio();
        let gens = (0..k)
            .map(|j| {
                let mut x = vec![0.0; k];
                x[j] = 1.0;
                x[(j + 1) % k] += phi;
                x
            })
            .collect();
        Self::new(k, gens).expect("valid")
    }

    /// `X = (1, 1/2)`, resonant at `n = (1, −2)`.
    pub fn rational_half() -> Self {
        Self::new_exact(2, vec![vec![Q::one(), Q::new(1.into(), 2.into())]]).expect("valid")
    }

    /// `X = (1, λ)` with the truncated Liouville number `λ = Σ_{j ≤ terms} 10^{−j!}`.
    pub fn liouville(terms: u32) -> Self {
        let ten = BigInt::from(10);
        let mut lambda = Q::zero();
        let mut fact: u32 = 1;
        for j in 1..=terms {
            fact *= j;
            lambda += Q::new(BigInt::one(), num_traits::pow(ten.clone(), fact as usize));
        }
        Self::new_exact(2, vec![vec![Q::one(), lambda]]).expect("valid")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub(crate) fn check_frequency(&self, n: &[i64]) -> Result<(), TorusError> {
        if n.len() != self.d {
            return Err(TorusError::DimensionMismatch { expected: self.d, got: n.len() });
        }
        Ok(())
    }

    /// `X_j·n`, forced to an exact zero when rational data says so.
    pub fn generator_dot(&self, j: usize, n: &[i64]) -> f64 {
        if let Some(exact) = &self.exact {
            if exact[j].vanishes_on(n) {
                return 0.0;
            }
        }
        self.generators[j].iter().zip(n).map(|(x, &m)| x * m as f64).sum()
    }

    /// `(Σ_j |X_j·n|²)^{1/2}`.
    pub fn divisor_norm(&self, n: &[i64]) -> f64 {
        (0..self.k()).map(|j| self.generator_dot(j, n).powi(2)).sum::<f64>().sqrt()
    }

    /// Whether every `X_j·n` vanishes. Exact for rational actions; for
    /// float data only a computed `0.0` counts.
    pub fn is_resonant(&self, n: &[i64]) -> bool {
        match &self.exact {
            Some(exact) => exact.iter().all(|g| g.vanishes_on(n)),
            None => (0..self.k()).all(|j| self.generator_dot(j, n) == 0.0),
        }
    }

    /// Generator-wise resonance `X_j·n = 0`.
    pub fn is_resonant_for(&self, j: usize, n: &[i64]) -> bool {
        match &self.exact {
            Some(exact) => exact[j].vanishes_on(n),
            None => self.generator_dot(j, n) == 0.0,
        }
    }

    /// Generators' entry magnitudes, used to scale near-resonance tests.
    pub(crate) fn scale(&self) -> f64 {
        self.generators.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE)
    }
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn euclidean_norm(n: &[i64]) -> f64 {
    n.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt()
}

/// `4π² Σ_j |X_j·n|²`, the eigenvalue of `Δ_T = −Σ X_j²` on `e^{2πi n·x}`.
pub fn laplacian_symbol(act: &TranslationAction, n: &[i64]) -> Result<f64, TorusError> {
    act.check_frequency(n)?;
    Ok(FOUR_PI_SQ * (0..act.k()).map(|j| act.generator_dot(j, n).powi(2)).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn symbol_examples() {
        let unit = TranslationAction::new(1, vec![vec![1.0]]).unwrap();
        assert!((laplacian_symbol(&unit, &[1]).unwrap() - FOUR_PI_SQ).abs() < 1e-12);
        assert_eq!(laplacian_symbol(&TranslationAction::golden(), &[0, 0]).unwrap(), 0.0);
        let phi = golden_ratio();
        let s = laplacian_symbol(&TranslationAction::golden(), &[-1, 1]).unwrap();
        assert!((s - FOUR_PI_SQ * (phi - 1.0).powi(2)).abs() < 1e-12);
        assert!((s - 15.0795).abs() < 1e-3, "{s}");
        assert_eq!(
            laplacian_symbol(&unit, &[1, 2]),
            Err(TorusError::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn exact_resonance() {
        let half = TranslationAction::rational_half();
        assert!(half.is_resonant(&[1, -2]));
        assert!(half.is_resonant(&[-3, 6]));
        assert!(!half.is_resonant(&[1, 2]));
        assert_eq!(laplacian_symbol(&half, &[1, -2]).unwrap(), 0.0);

        // 1/3 is not a dyadic float, the exact path still finds the zero
        let third = TranslationAction::new_exact(2, vec![vec![qf(1, 3), qf(-1, 1)]]).unwrap();
        assert!(third.is_resonant(&[3, 1]));
        assert_eq!(third.generator_dot(0, &[3, 1]), 0.0);

        let liou = TranslationAction::liouville(4);
        assert!(!liou.is_resonant(&[-11, 100]));
        assert!(liou.divisor_norm(&[-11, 100]) < 2e-4);
    }

    #[test]
    fn invalid_actions() {
        assert!(TranslationAction::new(0, vec![vec![]]).is_err());
        assert!(TranslationAction::new(2, vec![]).is_err());
        assert!(TranslationAction::new(2, vec![vec![1.0]]).is_err());
        assert!(TranslationAction::new(1, vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn golden_k_is_minimal_looking() {
        let a = TranslationAction::golden_k(3);
        assert_eq!((a.d(), a.k()), (3, 3));
        assert!(!a.is_resonant(&[1, 0, 0]));
    }
}
