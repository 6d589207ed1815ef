use std::f64::consts::PI;

use serde::Serialize;

use super::HeisError;

/// Grid model of a Schrödinger representation of `H^g`, in which the
/// orbitwise laplacian of `k` generators is multiplication by
/// `4π²(x_1² + .. + x_k²)` on functions of `x ∈ ℝ^g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerModel {
    g: usize,
    k: usize,
    radius: f64,
    h: f64,
    tol: f64,
    /// Points per axis: `x = (i − (m − 1)/2) h`, `i = 0..m`, so `x = 0` is exact.
    m: usize,
}

pub const DEFAULT_RADIUS: f64 = 6.0;
pub const DEFAULT_STEP: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_POINTS: usize = 20_000_000;

impl SchrodingerModel {
    pub fn new(g: usize, k: usize, radius: f64, h: f64, tol: f64) -> Result<Self, HeisError> {
        if g == 0 || k == 0 || k > g {
            return Err(HeisError::Model(format!("need 1 ≤ k ≤ g, got k = {k}, g = {g}")));
        }
        if !(radius > 0.0 && h > 0.0 && radius.is_finite() && h.is_finite()) {
            return Err(HeisError::Model(format!("need R > 0 and h > 0, got R = {radius}, h = {h}")));
        }
        if tol.is_nan() || tol < 0.0 {
            return Err(HeisError::Model(format!("tolerance must be nonnegative, got {tol}")));
        }
        let steps = 2.0 * radius / h;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) || !(steps.round() as usize).is_multiple_of(2) {
            return Err(HeisError::OriginNotOnGrid { radius, h });
        }
        let m = steps.round() as usize + 1;
        if m.checked_pow(g as u32).is_none_or(|n| n > MAX_POINTS) {
            return Err(HeisError::Model(format!("{m}^{g} grid points exceed the limit of {MAX_POINTS}")));
        }
        Ok(SchrodingerModel { g, k, radius, h, tol, m })
    }

    /// `R = 6`, `h = 0.05`, `tol = 1e−9`.
    pub fn with_defaults(g: usize, k: usize) -> Result<Self, HeisError> {
        Self::new(g, k, DEFAULT_RADIUS, DEFAULT_STEP, DEFAULT_TOL)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn points_per_axis(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.g as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn axis_value(&self, i: usize) -> f64 {
        (i as i64 - (self.m as i64 - 1) / 2) as f64 * self.h
    }

    fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.g];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.m;
            flat /= self.m;
        }
        idx
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.m + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi(flat).into_iter().map(|i| self.axis_value(i)).collect()
    }

    pub fn origin(&self) -> usize {
        self.flat(&vec![(self.m - 1) / 2; self.g])
    }

    /// Samples `f` at every grid point, in row-major order.
    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|p| f(&self.point(p))).collect()
    }

    /// Whether the symbol vanishes at the grid point: `x_1 = .. = x_k = 0`.
    fn is_singular(&self, idx: &[usize]) -> bool {
        idx[..self.k].iter().all(|&i| 2 * i == self.m - 1)
    }
}

/// `4π²(x_1² + .. + x_k²)`; coordinates past the `k`-th do not enter.
pub fn multiplication_symbol(model: &SchrodingerModel, x: &[f64]) -> f64 {
    4.0 * PI * PI * x.iter().take(model.k).map(|v| v * v).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum MultiplicationOutcome {
    /// `u = v / symbol`, with the symbol's zero set filled by local quadratic fits.
    Solved {
        u: Vec<f64>,
        /// `max |symbol·u − v| / max(‖v‖_∞, tiny)` over the grid.
        residual: f64,
        /// Largest 1-norm condition number among the fits.
        fit_condition: f64,
        filled: usize,
    },
    /// `v` does not vanish where the symbol does, so `v ∉ Im(Δ_α)`.
    Obstruction { value: f64, point: Vec<f64> },
}

impl MultiplicationOutcome {
    pub fn is_obstruction(&self) -> bool {
        matches!(self, MultiplicationOutcome::Obstruction { .. })
    }
}

const FIT_CONDITION_LIMIT: f64 = 1e10;

/// Least-squares quadratic in the first `k` coordinates (scaled by `h`)
/// through `u` on the punctured `5^k` stencil around `centre`.
fn quadratic_fit(model: &SchrodingerModel, u: &[f64], centre: &[usize]) -> Result<(f64, f64), HeisError> {
    let k = model.k;
    // monomials 1, y_a, y_a y_b (a ≤ b)
    let mut monomials: Vec<(Option<usize>, Option<usize>)> = vec![(None, None)];
    monomials.extend((0..k).map(|a| (Some(a), None)));
    for a in 0..k {
        for b in a..k {
            monomials.push((Some(a), Some(b)));
        }
    }
    let p = monomials.len();
    let mut normal = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    let mut used = 0;
    let stencil = 5usize.pow(k as u32);
    for s in 0..stencil {
        let offs: Vec<i64> = (0..k).map(|a| ((s / 5usize.pow(a as u32)) % 5) as i64 - 2).collect();
        if offs.iter().all(|&o| o == 0) {
            continue;
        }
        let mut idx = centre.to_vec();
        let mut inside = true;
        for (a, &o) in offs.iter().enumerate() {
            let v = idx[a] as i64 + o;
            if v < 0 || v >= model.m as i64 {
                inside = false;
                break;
            }
            idx[a] = v as usize;
        }
        if !inside {
            continue;
        }
        let y: Vec<f64> = offs.iter().map(|&o| o as f64).collect();
        let row: Vec<f64> = monomials
            .iter()
            .map(|&(a, b)| a.map_or(1.0, |a| y[a]) * b.map_or(1.0, |b| y[b]))
            .collect();
        let val = u[model.flat(&idx)];
        for i in 0..p {
            rhs[i] += row[i] * val;
            for j in 0..p {
                normal[i][j] += row[i] * row[j];
            }
        }
        used += 1;
    }
    if used < p {
        return Err(HeisError::GridTooCoarse { condition: f64::INFINITY });
    }
    let inv = invert(&normal).ok_or(HeisError::GridTooCoarse { condition: f64::INFINITY })?;
    let norm1 = |m: &[Vec<f64>]| (0..p).map(|j| m.iter().map(|r| r[j].abs()).sum::<f64>()).fold(0.0, f64::max);
    let condition = norm1(&normal) * norm1(&inv);
    if condition > FIT_CONDITION_LIMIT {
        return Err(HeisError::GridTooCoarse { condition });
    }
    let constant: f64 = inv[0].iter().zip(&rhs).map(|(a, b)| a * b).sum();
    Ok((constant, condition))
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> =
        a.iter().enumerate().map(|(i, r)| r.iter().cloned().chain((0..n).map(|j| (i == j) as u8 as f64)).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        let piv = m[c][c];
        for v in m[c].iter_mut() {
            *v /= piv;
        }
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let f = row[c];
            if r != c && f != 0.0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Divides `v` by the symbol if `v` vanishes (to `tol · ‖v‖_∞`) on the
/// symbol's zero set, and otherwise returns the value there as a witness
/// that `v` is not in the image.
pub fn attempt_solve_multiplication(model: &SchrodingerModel, v: &[f64]) -> Result<MultiplicationOutcome, HeisError> {
    if v.len() != model.len() {
        return Err(HeisError::Model(format!("{} samples for a grid of {}", v.len(), model.len())));
    }
    if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
        return Err(HeisError::Model(format!("non-finite sample {bad}")));
    }
    let vmax = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let threshold = model.tol * vmax;
    let origin = model.origin();
    if v[origin].abs() > threshold {
        return Ok(MultiplicationOutcome::Obstruction { value: v[origin], point: model.point(origin) });
    }
    let singular: Vec<usize> = (0..model.len()).filter(|&p| model.is_singular(&model.multi(p))).collect();
    if let Some(&p) = singular.iter().find(|&&p| v[p].abs() > threshold) {
        return Ok(MultiplicationOutcome::Obstruction { value: v[p], point: model.point(p) });
    }

    let mut u: Vec<f64> = (0..model.len())
        .map(|p| {
            let s = multiplication_symbol(model, &model.point(p));
            if s == 0.0 {
                0.0
            } else {
                v[p] / s
            }
        })
        .collect();
    let mut fit_condition = 0.0f64;
    let mut filled_values = Vec::with_capacity(singular.len());
    for &p in &singular {
        let (value, cond) = quadratic_fit(model, &u, &model.multi(p))?;
        fit_condition = fit_condition.max(cond);
        filled_values.push(value);
    }
    for (&p, value) in singular.iter().zip(filled_values) {
        u[p] = value;
    }

    let residual = (0..model.len())
        .map(|p| (multiplication_symbol(model, &model.point(p)) * u[p] - v[p]).abs())
        .fold(0.0, f64::max)
        / vmax.max(f64::MIN_POSITIVE);
    Ok(MultiplicationOutcome::Solved { u, residual, fit_condition, filled: singular.len() })
}
