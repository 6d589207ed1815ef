use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::TorusError;

/// Trigonometric polynomial `u(x) = Σ û(n) e^{2πi n·x}` with zero
/// coefficients dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    d: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
    real: bool,
}

impl FourierSeries {
    pub fn zero(d: usize) -> Self {
        FourierSeries { d, coeffs: BTreeMap::new(), real: true }
    }

    /// Sums repeated frequencies and drops zeros.
    pub fn new(d: usize, terms: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Result<Self, TorusError> {
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            if n.len() != d {
                return Err(TorusError::DimensionMismatch { expected: d, got: n.len() });
            }
            *coeffs.entry(n).or_default() += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(FourierSeries { d, coeffs, real: false })
    }

    pub fn mode(n: Vec<i64>, c: Complex64) -> Self {
        let d = n.len();
        Self::new(d, [(n, c)]).expect("consistent dimension")
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        Self::new(d, [(vec![0; d], c)]).expect("consistent dimension")
    }

    /// Checks `û(−n) = conj(û(n))` up to `tol` relative to the largest
    /// coefficient and sets the real-valued flag.
    pub fn into_real(mut self, tol: f64) -> Result<Self, TorusError> {
        let scale = self.max_abs().max(1.0);
        for (n, c) in &self.coeffs {
            let mirror: Vec<i64> = n.iter().map(|x| -x).collect();
            let m = self.get(&mirror);
            if (m - c.conj()).norm() > tol * scale {
                return Err(TorusError::NotReal(n.clone()));
            }
        }
        self.real = true;
        Ok(self)
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub(crate) fn with_real_flag(mut self, real: bool) -> Self {
        self.real = real;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: &[i64]) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// `û(0)`.
    pub fn mean(&self) -> Complex64 {
        self.get(&vec![0; self.d])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest `‖n‖_∞` in the support.
    pub fn radius(&self) -> i64 {
        self.coeffs.keys().flat_map(|n| n.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `(Σ |û(n)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check(&self, other: &Self) -> Result<(), TorusError> {
        if self.d != other.d {
            return Err(TorusError::DimensionMismatch { expected: self.d, got: other.d });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check(other)?;
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(n, c)| (n.clone(), *c));
        Ok(Self::new(self.d, terms)?.with_real_flag(self.real && other.real))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let real = self.real && s.im == 0.0;
        Self::new(self.d, self.coeffs.iter().map(|(n, c)| (n.clone(), c * s)))
            .expect("same dimension")
            .with_real_flag(real)
    }

    /// `û(n) ↦ m(n) û(n)`. The real flag is cleared; callers with
    /// conjugation-symmetric multipliers restore it.
    pub fn map_multiplier(&self, mut m: impl FnMut(&[i64]) -> Complex64) -> Self {
        Self::new(self.d, self.coeffs.iter().map(|(n, c)| (n.clone(), c * m(n)))).expect("same dimension")
    }

    /// Removes the `n = 0` coefficient.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&vec![0; self.d]);
        out
    }

    /// `u(x)` at a point of 𝕋^d (coordinates in ℝ^d).
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(n, c)| {
                let phase: f64 = n.iter().zip(x).map(|(&m, &y)| m as f64 * y).sum();
                c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
            })
            .sum()
    }

    /// Random polynomial with `modes` frequencies drawn from `‖n‖_∞ ≤ radius`
    /// and coefficients uniform in the unit square; `real` adds mirrored
    /// conjugates.
    pub fn random<R: Rng + ?Sized>(d: usize, radius: i64, modes: usize, real: bool, rng: &mut R) -> Self {
        let mut terms = Vec::with_capacity(2 * modes);
        for _ in 0..modes {
            let n: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
            let mut c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if real {
                if n.iter().all(|&x| x == 0) {
                    c.im = 0.0;
                } else {
                    terms.push((n.iter().map(|x| -x).collect(), c.conj()));
                }
            }
            terms.push((n, c));
        }
        Self::new(d, terms).expect("consistent dimension").with_real_flag(real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_form() {
        let s = FourierSeries::new(2, [(vec![1, 0], c(1.0, 0.0)), (vec![1, 0], c(-1.0, 0.0)), (vec![0, 2], c(0.0, 2.0))])
            .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&[0, 2]), c(0.0, 2.0));
        assert_eq!(s.radius(), 2);
        assert!(FourierSeries::new(2, [(vec![1], c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn real_flag() {
        let s = FourierSeries::new(1, [(vec![1], c(1.0, 2.0)), (vec![-1], c(1.0, -2.0))]).unwrap();
        let s = s.into_real(1e-14).unwrap();
        assert!(s.is_real());
        assert!(s.eval(&[0.3]).im.abs() < 1e-14);
        let bad = FourierSeries::mode(vec![1], c(1.0, 0.0));
        assert!(matches!(bad.into_real(1e-14), Err(TorusError::NotReal(_))));
    }

    #[test]
    fn random_real_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = FourierSeries::random(2, 3, 5, true, &mut rng);
            assert!(s.clone().into_real(1e-14).is_ok());
            for x in [[0.1, 0.7], [0.33, 0.9]] {
                assert!(s.eval(&x).im.abs() < 1e-12);
            }
        }
    }
}
