use num_complex::Complex64;
use serde::Serialize;

use super::{codifferential, differential, Cochain, DynError};
use crate::exterior::{binomial, wedge_basis, ExtVector, MultiIndex};
use crate::torus::{laplacian_symbol, TorusError, TranslationAction};

/// `ω = exact + coexact + harmonic`, with `exact ∈ Im d`, `coexact ∈ Im d*`
/// and `harmonic` the constant coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeParts {
    pub exact: Cochain,
    pub coexact: Cochain,
    pub harmonic: ExtVector<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Orthogonality {
    pub exact_coexact: f64,
    pub exact_harmonic: f64,
    pub coexact_harmonic: f64,
}

impl Orthogonality {
    pub fn max(&self) -> f64 {
        self.exact_coexact.max(self.exact_harmonic).max(self.coexact_harmonic)
    }
}

fn cosine(a: &Cochain, b: &Cochain) -> f64 {
    let (na, nb) = (a.l2_norm(), b.l2_norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.inner(b).expect("same shape").norm() / (na * nb)
}

impl HodgeParts {
    pub fn harmonic_cochain(&self) -> Cochain {
        Cochain::constant(self.exact.action(), &self.harmonic).expect("consistent shapes")
    }

    pub fn reconstruct(&self) -> Cochain {
        self.exact.add(&self.coexact).and_then(|s| s.add(&self.harmonic_cochain())).expect("consistent shapes")
    }

    /// `‖exact + coexact + harmonic − ω‖_0 / max(1, ‖ω‖_0)`.
    pub fn reconstruction_error(&self, omega: &Cochain) -> f64 {
        self.reconstruct().sub(omega).expect("same shape").l2_norm() / omega.l2_norm().max(1.0)
    }

    /// Pairwise `|⟨a, b⟩| / (‖a‖ ‖b‖)`, zero when a part vanishes.
    pub fn orthogonality(&self) -> Orthogonality {
        let h = self.harmonic_cochain();
        Orthogonality {
            exact_coexact: cosine(&self.exact, &self.coexact),
            exact_harmonic: cosine(&self.exact, &h),
            coexact_harmonic: cosine(&self.coexact, &h),
        }
    }
}

fn check_no_resonance(omega: &Cochain) -> Result<(), DynError> {
    let act = omega.action();
    for (_, u) in omega.components() {
        for (n, _) in u.iter() {
            if n.iter().any(|&x| x != 0) && act.is_resonant(n) {
                return Err(TorusError::Resonance { frequency: n.clone() }.into());
            }
        }
    }
    Ok(())
}

/// `Δ_{α,ℓ}^{-1}` on cochains without constant part, diagonally.
fn inverse_laplacian(omega: &Cochain) -> Result<Cochain, DynError> {
    check_no_resonance(omega)?;
    let act = omega.action().clone();
    Ok(omega
        .without_constant()
        .map_multiplier(|n| Complex64::new(1.0 / laplacian_symbol(&act, n).expect("cochain dimension"), 0.0)))
}

/// Splits `ω` as `d d* η + d* d η + harmonic` with `η = Δ^{-1}(ω − harmonic)`.
pub fn hodge_decompose(omega: &Cochain) -> Result<HodgeParts, DynError> {
    let eta = inverse_laplacian(omega)?;
    let act = omega.action();
    let l = omega.degree();
    let exact = if l > 0 { differential(&codifferential(&eta)?)? } else { Cochain::zero(act, l) };
    let coexact = if l < omega.k() { codifferential(&differential(&eta)?)? } else { Cochain::zero(act, l) };
    Ok(HodgeParts { exact, coexact, harmonic: omega.constant_part() })
}

/// Rank of a small real matrix by partial pivoting with a relative tolerance.
fn numeric_rank(mut m: Vec<Vec<f64>>, tol: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else {
            break;
        };
        if m[p][c].abs() <= tol * scale {
            continue;
        }
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let f = row[c] / pivot[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix of `d` on the single mode `n`, dropping the common `2πi`.
fn mode_differential(act: &TranslationAction, n: &[i64], l: usize) -> Vec<Vec<f64>> {
    let k = act.k();
    let mut m = vec![vec![0.0; binomial(k, l)]; binomial(k, l + 1)];
    for i in MultiIndex::all(k, l) {
        for j in 0..k {
            if let Some((sign, target)) = wedge_basis(j, &i).expect("j < k") {
                m[target.rank()][i.rank()] += sign.to_i64() as f64 * act.generator_dot(j, n);
            }
        }
    }
    m
}

/// `dim H^ℓ` for `ℓ = 0..=k` of the complex truncated to `‖n‖_∞ ≤ radius`,
/// summed over modes from numerical ranks of each mode's differential.
pub fn harmonic_dims(act: &TranslationAction, radius: i64) -> Vec<usize> {
    let k = act.k();
    let d = act.d();
    let mut dims = vec![0usize; k + 1];
    let side = (2 * radius + 1) as usize;
    let mut n = vec![-radius; d];
    for _ in 0..side.pow(d as u32) {
        let ranks: Vec<usize> = (0..k).map(|l| numeric_rank(mode_differential(act, &n, l), 1e-12)).collect();
        for (l, dim) in dims.iter_mut().enumerate() {
            let out = if l < k { ranks[l] } else { 0 };
            let inc = if l > 0 { ranks[l - 1] } else { 0 };
            *dim += binomial(k, l) - out - inc;
        }
        for x in n.iter_mut().rev() {
            if *x < radius {
                *x += 1;
                break;
            }
            *x = -radius;
        }
    }
    dims
}

#[derive(Debug, Clone, PartialEq)]
pub struct TameInverse {
    pub delta: Cochain,
    /// `‖d(δω) − ω‖_0 / max(1, ‖ω‖_0)`.
    pub residual: f64,
    /// `‖δω‖_r / ‖ω‖_{r+2τ}`.
    pub ratio: f64,
}

pub const EXACTNESS_TOL: f64 = 1e-10;

/// `δω = d* Δ^{-1} ω` for exact `ω ∈ C^{ℓ+1}`, so that `d(δω) = ω`.
pub fn tame_inverse_delta(omega: &Cochain, tau: f64, r: f64) -> Result<TameInverse, DynError> {
    if omega.degree() == 0 {
        return Err(DynError::DegreeUnderflow);
    }
    let parts = hodge_decompose(omega)?;
    let scale = omega.l2_norm().max(1.0);
    let coexact = parts.coexact.l2_norm() / scale;
    let harmonic = parts.harmonic.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt() / scale;
    if coexact > EXACTNESS_TOL || harmonic > EXACTNESS_TOL {
        return Err(DynError::NotExact { coexact, harmonic });
    }
    let delta = codifferential(&inverse_laplacian(omega)?)?;
    let residual = differential(&delta)?.sub(omega)?.l2_norm() / scale;
    let den = omega.sobolev_norm(r + 2.0 * tau);
    let ratio = if den == 0.0 { 0.0 } else { delta.sobolev_norm(r) / den };
    Ok(TameInverse { delta, residual, ratio })
}
