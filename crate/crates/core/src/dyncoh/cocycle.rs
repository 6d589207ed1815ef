use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{differential, Cochain, DynError};
use crate::exterior::MultiIndex;
use crate::torus::{FourierSeries, TranslationAction};

pub const CLOSED_TOL: f64 = 1e-10;

/// Below this `|ρ(t)·n|` the segment factor uses its Taylor expansion.
const SERIES_CUTOFF: f64 = 1e-8;

fn check_closed(omega: &Cochain) -> Result<(), DynError> {
    if omega.degree() != 1 {
        return Err(DynError::Mismatch(format!("expected a 1-cochain, got degree {}", omega.degree())));
    }
    if omega.k() >= 2 {
        let residual = differential(omega)?.l2_norm() / omega.sobolev_norm(1.0).max(1.0);
        if residual > CLOSED_TOL {
            return Err(DynError::NotClosed { residual });
        }
    }
    Ok(())
}

fn rho(act: &TranslationAction, t: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; act.d()];
    for (x, &tj) in act.generators().iter().zip(t) {
        for (o, xi) in out.iter_mut().zip(x) {
            *o += tj * xi;
        }
    }
    out
}

/// `∫_0^1 e^{iθs} ds = (e^{iθ} − 1) / (iθ)`.
fn segment_factor(theta: f64, small: bool) -> Complex64 {
    if small {
        Complex64::new(1.0 - theta * theta / 6.0, theta / 2.0)
    } else {
        (Complex64::from_polar(1.0, theta) - 1.0) / Complex64::new(0.0, theta)
    }
}

fn eval_unchecked(omega: &Cochain, t: &[f64], x: &[f64]) -> Complex64 {
    let act = omega.action();
    let shift = rho(act, t);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, u) in omega.components() {
        let tj = t[i.indices()[0]];
        if tj == 0.0 {
            continue;
        }
        for (n, c) in u.iter() {
            let dot: f64 = n.iter().zip(&shift).map(|(&m, s)| m as f64 * s).sum();
            let phase: f64 = n.iter().zip(x).map(|(&m, y)| m as f64 * y).sum();
            let factor = segment_factor(2.0 * PI * dot, dot.abs() < SERIES_CUTOFF);
            acc += c * tj * Complex64::from_polar(1.0, 2.0 * PI * phase) * factor;
        }
    }
    acc
}

fn check_point(omega: &Cochain, t: &[f64], x: &[f64]) -> Result<(), DynError> {
    if t.len() != omega.k() || x.len() != omega.action().d() {
        return Err(DynError::Mismatch(format!(
            "t ∈ ℝ^{} and x ∈ 𝕋^{} for k = {}, d = {}",
            t.len(),
            x.len(),
            omega.k(),
            omega.action().d()
        )));
    }
    Ok(())
}

/// `S(ω)(t, x) = ∫_0^1 ω(t)(x + sρ(t)) ds`, the line integral of a closed
/// 1-cochain along the orbit segment, evaluated mode by mode.
pub fn cocycle_from_form(omega: &Cochain, t: &[f64], x: &[f64]) -> Result<Complex64, DynError> {
    check_closed(omega)?;
    check_point(omega, t, x)?;
    Ok(eval_unchecked(omega, t, x))
}

/// Richardson tableau on central differences of `s ↦ f(s)` at 0.
fn richardson(f: impl Fn(f64) -> Complex64, h0: f64) -> (Complex64, f64) {
    const LEVELS: usize = 4;
    let mut table = [[Complex64::new(0.0, 0.0); LEVELS]; LEVELS];
    for (i, row) in table.iter_mut().enumerate() {
        let h = h0 / (1 << i) as f64;
        row[0] = (f(h) - f(-h)) / (2.0 * h);
    }
    for m in 1..LEVELS {
        let w = 4f64.powi(m as i32) - 1.0;
        for i in m..LEVELS {
            table[i][m] = table[i][m - 1] + (table[i][m - 1] - table[i - 1][m - 1]) / w;
        }
    }
    let best = table[LEVELS - 1][LEVELS - 1];
    (best, (best - table[LEVELS - 2][LEVELS - 2]).norm())
}

/// `T(β)(X)`: differentiates `t ↦ β(tX, x)` at `t = 0` on the grid of
/// `(2R + 1)^d` points and returns the Fourier coefficients with
/// `‖n‖_∞ ≤ R`, which are exact for inputs of that support.
pub fn form_from_cocycle(
    act: &TranslationAction,
    sampler: impl Fn(&[f64], &[f64]) -> Complex64,
    xvec: &[f64],
    radius: i64,
) -> Result<FourierSeries, DynError> {
    if xvec.len() != act.k() {
        return Err(DynError::Mismatch(format!("X ∈ ℝ^{} for k = {}", xvec.len(), act.k())));
    }
    let d = act.d();
    let m = (2 * radius + 1) as usize;
    let freq_scale = 2.0 * PI * radius.max(1) as f64 * rho(act, xvec).iter().map(|v| v.abs()).sum::<f64>();
    let h0 = 0.1 / freq_scale.max(1.0);

    let total = m.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let x: Vec<f64> = idx.iter().map(|&i| i as f64 / m as f64).collect();
        let (v, disagreement) = richardson(
            |s| {
                let t: Vec<f64> = xvec.iter().map(|c| c * s).collect();
                sampler(&t, &x)
            },
            h0,
        );
        if !v.re.is_finite() || !v.im.is_finite() || disagreement > 1e-6 * v.norm().max(1.0) {
            return Err(DynError::NonDifferentiable { x, disagreement });
        }
        points.push(x);
        values.push(v);
        for i in idx.iter_mut().rev() {
            *i += 1;
            if *i < m {
                break;
            }
            *i = 0;
        }
    }

    let norm = 1.0 / total as f64;
    let mut coeffs = Vec::new();
    let mut n = vec![-radius; d];
    for _ in 0..total {
        let mut c = Complex64::new(0.0, 0.0);
        for (x, v) in points.iter().zip(&values) {
            let phase: f64 = n.iter().zip(x).map(|(&a, b)| a as f64 * b).sum();
            c += v * Complex64::from_polar(1.0, -2.0 * PI * phase);
        }
        coeffs.push((n.clone(), c * norm));
        for x in n.iter_mut().rev() {
            if *x < radius {
                *x += 1;
                break;
            }
            *x = -radius;
        }
    }
    let peak = coeffs.iter().fold(0.0f64, |a, (_, c)| a.max(c.norm())).max(1.0);
    let kept = coeffs.into_iter().filter(|(_, c)| c.norm() > 1e-12 * peak);
    Ok(FourierSeries::new(d, kept)?)
}

/// `‖T(S(ω)) − ω‖_0`, recovering each component `ω(e_j)` from samples of `S(ω)`.
pub fn roundtrip_error(omega: &Cochain) -> Result<f64, DynError> {
    check_closed(omega)?;
    let act = omega.action();
    let k = omega.k();
    let radius = omega.radius();
    let mut err2 = 0.0;
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        let rec = form_from_cocycle(act, |t, x| eval_unchecked(omega, t, x), &e, radius)?;
        let target = omega.component(&MultiIndex::new(k, &[j])?);
        err2 += rec.sub(&target)?.l2_norm().powi(2);
    }
    Ok(err2.sqrt())
}

/// `dψ + L` for random real `ψ` and a random real constant covector `L`.
pub fn random_closed_one_form<R: Rng + ?Sized>(
    act: &TranslationAction,
    radius: i64,
    modes: usize,
    rng: &mut R,
) -> Cochain {
    let psi = Cochain::random(act, 0, radius, modes, rng);
    let k = act.k();
    let constant = Cochain::new(
        act,
        1,
        (0..k).map(|j| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            (MultiIndex::new(k, &[j]).expect("j < k"), FourierSeries::constant(act.d(), c))
        }),
    )
    .expect("consistent shapes");
    differential(&psi).and_then(|dpsi| dpsi.add(&constant)).expect("k ≥ 1")
}

/// `ℂ^n`-valued cocycle over an `ℝ^k`-action, stored through its
/// derivative data `T(β) = (ω_1, .., ω_n)`, each a closed 1-cochain.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianCocycle {
    action: TranslationAction,
    forms: Vec<Cochain>,
}

impl AbelianCocycle {
    pub fn new(action: &TranslationAction, forms: Vec<Cochain>) -> Result<Self, DynError> {
        for w in &forms {
            if w.action() != action {
                return Err(DynError::Mismatch("form over a different action".into()));
            }
            check_closed(w)?;
        }
        Ok(AbelianCocycle { action: action.clone(), forms })
    }

    pub fn value_dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Cochain] {
        &self.forms
    }

    /// `β(t, x) ∈ ℂ^n`.
    pub fn eval(&self, t: &[f64], x: &[f64]) -> Result<Vec<Complex64>, DynError> {
        self.forms
            .iter()
            .map(|w| {
                check_point(w, t, x)?;
                Ok(eval_unchecked(w, t, x))
            })
            .collect()
    }

    /// `max |β(t + s, x) − β(t, x + ρ(s)) − β(s, x)|` over components.
    pub fn identity_residual(&self, t: &[f64], s: &[f64], x: &[f64]) -> Result<f64, DynError> {
        let ts: Vec<f64> = t.iter().zip(s).map(|(a, b)| a + b).collect();
        let moved: Vec<f64> = x.iter().zip(rho(&self.action, s)).map(|(a, b)| a + b).collect();
        let lhs = self.eval(&ts, x)?;
        let a = self.eval(t, &moved)?;
        let b = self.eval(s, x)?;
        Ok(lhs.iter().zip(a.iter().zip(&b)).map(|(l, (a, b))| (l - a - b).norm()).fold(0.0, f64::max))
    }
}
