use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::scan::{for_each_half_shell, norm_power};
use super::{diophantine_scan, euclidean_norm, laplacian_symbol, FourierSeries, TorusError, TranslationAction};
use super::{FOUR_PI_SQ, NEAR_RESONANCE};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearResonance {
    pub frequency: Vec<i64>,
    pub divisor: f64,
}

/// Solution `u` of a diagonal equation together with the cokernel component `v̂(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub solution: FourierSeries,
    pub obstruction: Complex64,
    pub warnings: Vec<NearResonance>,
}

fn check_dim(act: &TranslationAction, v: &FourierSeries) -> Result<(), TorusError> {
    if v.d() != act.d() {
        return Err(TorusError::DimensionMismatch { expected: act.d(), got: v.d() });
    }
    Ok(())
}

/// `û(n) = v̂(n) / (4π² Σ |X_j·n|²)` for `n ≠ 0`, `û(0) = 0`, so that
/// `Δ_T u = v − v̂(0)`.
pub fn solve_laplacian(act: &TranslationAction, v: &FourierSeries) -> Result<Solved, TorusError> {
    check_dim(act, v)?;
    let mut warnings = Vec::new();
    for (n, _) in v.iter().filter(|(n, _)| n.iter().any(|&x| x != 0)) {
        let div = act.divisor_norm(n);
        if div == 0.0 || act.is_resonant(n) {
            return Err(TorusError::Resonance { frequency: n.clone() });
        }
        if div < NEAR_RESONANCE * euclidean_norm(n) {
            warnings.push(NearResonance { frequency: n.clone(), divisor: div });
        }
    }
    let solution = v
        .without_mean()
        .map_multiplier(|n| Complex64::new(1.0 / laplacian_symbol(act, n).expect("checked dimension"), 0.0))
        .with_real_flag(v.is_real());
    Ok(Solved { solution, obstruction: v.mean(), warnings })
}

/// `û(n) = v̂(n) / (2πi X_j·n)` for `n ≠ 0`, `û(0) = 0`, so that `X_j u = v − v̂(0)`.
pub fn solve_vectorfield(act: &TranslationAction, j: usize, v: &FourierSeries) -> Result<Solved, TorusError> {
    check_dim(act, v)?;
    if j >= act.k() {
        return Err(TorusError::GeneratorIndex { index: j, k: act.k() });
    }
    let mut warnings = Vec::new();
    for (n, _) in v.iter().filter(|(n, _)| n.iter().any(|&x| x != 0)) {
        let dot = act.generator_dot(j, n);
        if dot == 0.0 || act.is_resonant_for(j, n) {
            return Err(TorusError::Resonance { frequency: n.clone() });
        }
        if dot.abs() < NEAR_RESONANCE * euclidean_norm(n) {
            warnings.push(NearResonance { frequency: n.clone(), divisor: dot.abs() });
        }
    }
    let solution = v
        .without_mean()
        .map_multiplier(|n| 1.0 / Complex64::new(0.0, 2.0 * PI * act.generator_dot(j, n)))
        .with_real_flag(v.is_real());
    Ok(Solved { solution, obstruction: v.mean(), warnings })
}

/// `‖u‖_s = (Σ (1 + ‖n‖²)^s |û(n)|²)^{1/2}`, Euclidean weights; `s` may be negative.
pub fn sobolev_norm(u: &FourierSeries, s: f64) -> f64 {
    u.iter()
        .map(|(n, c)| {
            let w = 1.0 + n.iter().map(|&x| (x * x) as f64).sum::<f64>();
            w.powf(s) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TameEstimate {
    pub tau: f64,
    pub r: f64,
    /// Derivative loss `r_0 = 2τ`.
    pub r0: f64,
    pub radius: u64,
    pub trials: usize,
    /// Largest `‖Δ^{-1}v‖_r / ‖v − v̂(0)‖_{r+r_0}` over random polynomials.
    pub random_max: f64,
    /// The same ratio maximized over every single mode `0 < ‖n‖_∞ ≤ N`.
    pub single_mode_max: f64,
    pub empirical: f64,
    pub k_hat: f64,
    /// `1 / (4π² K_hat²)`.
    pub analytic_bound: f64,
}

fn tame_ratio(act: &TranslationAction, v: &FourierSeries, r: f64, r0: f64) -> Result<f64, TorusError> {
    let u = solve_laplacian(act, v)?.solution;
    let den = sobolev_norm(&v.without_mean(), r + r0);
    Ok(if den == 0.0 { 0.0 } else { sobolev_norm(&u, r) / den })
}

/// `max_{0 < ‖n‖_∞ ≤ N} 1 / (symbol(n) (1 + ‖n‖²)^τ)`, the single-mode value
/// of the tame ratio (independent of `r`).
pub fn single_mode_tame_sweep(act: &TranslationAction, tau: f64, radius: u64) -> Result<f64, TorusError> {
    let weight = norm_power(2.0 * tau);
    let mut best = 0.0f64;
    let mut resonance = None;
    for r in 1..=radius as i64 {
        for_each_half_shell(act.d(), r, |n| {
            if resonance.is_some() {
                return;
            }
            let sym = FOUR_PI_SQ * act.divisor_norm(n).powi(2);
            if sym == 0.0 {
                resonance = Some(n.to_vec());
                return;
            }
            let norm2 = n.iter().map(|&x| (x * x) as f64).sum::<f64>();
            best = best.max(1.0 / (sym * weight(1.0 + norm2)));
        });
        if let Some(frequency) = resonance {
            return Err(TorusError::Resonance { frequency });
        }
    }
    Ok(best)
}

/// Empirical tame constant of `Δ_T^{-1}` with loss `r_0 = 2τ`, against the
/// analytic bound from the scan at `(τ, N)`.
pub fn tame_constant_estimate<R: Rng + ?Sized>(
    act: &TranslationAction,
    tau: f64,
    r: f64,
    trials: usize,
    radius: u64,
    rng: &mut R,
) -> Result<TameEstimate, TorusError> {
    let scan = diophantine_scan(act, tau, radius);
    if let Some(frequency) = scan.resonance {
        return Err(TorusError::Resonance { frequency });
    }
    let r0 = 2.0 * tau;
    let mut random_max = 0.0f64;
    for _ in 0..trials {
        let v = FourierSeries::random(act.d(), radius as i64, 8, true, rng);
        random_max = random_max.max(tame_ratio(act, &v, r, r0)?);
    }
    let single_mode_max = single_mode_tame_sweep(act, tau, radius)?;
    Ok(TameEstimate {
        tau,
        r,
        r0,
        radius,
        trials,
        random_max,
        single_mode_max,
        empirical: random_max.max(single_mode_max),
        k_hat: scan.k_hat,
        analytic_bound: 1.0 / (FOUR_PI_SQ * scan.k_hat * scan.k_hat),
    })
}
