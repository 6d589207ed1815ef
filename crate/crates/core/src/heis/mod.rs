//! Translation actions on Heisenberg nilmanifolds: the Schrödinger-model
//! obstruction and the necessary conditions (center in the image,
//! diophantine base action).

mod schrodinger;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{LieAlgebra, Subspace};
use crate::rational::{format_q, from_f64, parse_q, to_f64, QMatrix, Q};
use crate::torus::{diophantine_scan, golden_ratio, DiophantineReport, ScanVerdict, TranslationAction};

pub use schrodinger::{
    attempt_solve_multiplication, multiplication_symbol, MultiplicationOutcome, SchrodingerModel, DEFAULT_RADIUS,
    DEFAULT_STEP, DEFAULT_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisError {
    #[error("invalid Heisenberg action: {0}")]
    InvalidAction(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("the grid with R = {radius}, h = {h} does not contain the origin")]
    OriginNotOnGrid { radius: f64, h: f64 },
    #[error("grid too coarse to resolve the origin neighbourhood (fit condition number {condition:e})")]
    GridTooCoarse { condition: f64 },
    #[error("{0}")]
    Parse(String),
}

/// `ρ: ℝ^k → H^g` through its generators, written in the basis
/// `X_1..X_g, Y_1..Y_g, Z` of 𝔥^g.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergAction {
    g: usize,
    generators: Vec<Vec<Q>>,
}

impl HeisenbergAction {
    /// Checks lengths and linear independence. Commutation is reported by
    /// [`heisenberg_gh_check`] rather than rejected here.
    pub fn new(g: usize, generators: Vec<Vec<Q>>) -> Result<Self, HeisError> {
        if g == 0 {
            return Err(HeisError::InvalidAction("g must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(HeisError::InvalidAction("need at least one generator".into()));
        }
        for (j, v) in generators.iter().enumerate() {
            if v.len() != 2 * g + 1 {
                return Err(HeisError::InvalidAction(format!(
                    "generator {j} has {} entries, expected 2g + 1 = {}",
                    v.len(),
                    2 * g + 1
                )));
            }
        }
        if QMatrix::from_rows(&generators).rank() < generators.len() {
            return Err(HeisError::InvalidAction("generators are linearly dependent".into()));
        }
        Ok(HeisenbergAction { g, generators })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        &self.generators
    }

    /// `(X + φY, Z)` in 𝔥^1, with φ rounded to the nearest double.
    pub fn golden_with_center() -> Self {
        let phi = from_f64(golden_ratio()).expect("finite");
        Self::new(1, vec![vec![Q::one(), phi, Q::zero()], vec![Q::zero(), Q::zero(), Q::one()]]).expect("valid")
    }

    /// `(X, Y)` in 𝔥^1: misses the center (and does not commute).
    pub fn xy() -> Self {
        Self::new(1, vec![vec![Q::one(), Q::zero(), Q::zero()], vec![Q::zero(), Q::one(), Q::zero()]]).expect("valid")
    }

    /// The flow generated by `X` in 𝔥^1.
    pub fn x_flow() -> Self {
        Self::new(1, vec![vec![Q::one(), Q::zero(), Q::zero()]]).expect("valid")
    }

    /// Projection of the generators to `𝔥^g / [𝔥^g, 𝔥^g] ≅ ℝ^{2g}`.
    pub fn base_generators(&self) -> Vec<Vec<Q>> {
        self.generators.iter().map(|v| v[..2 * self.g].to_vec()).collect()
    }

    /// Reparametrizes by an invertible `k × k` matrix: new generator `i`
    /// is `Σ_j p[i][j] · old_j`.
    pub fn reparametrize(&self, p: &QMatrix) -> Result<Self, HeisError> {
        if p.rows() != self.k() || p.cols() != self.k() || p.inverse().is_none() {
            return Err(HeisError::InvalidAction("reparametrization must be invertible k × k".into()));
        }
        let gens = (0..self.k())
            .map(|i| {
                (0..2 * self.g + 1)
                    .map(|c| (0..self.k()).fold(Q::zero(), |acc, j| acc + &p[(i, j)] * &self.generators[j][c]))
                    .collect()
            })
            .collect();
        Self::new(self.g, gens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalEntry {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RationalEntry {
    fn to_q(&self) -> Result<Q, String> {
        match self {
            RationalEntry::Int(i) => Ok(Q::from_integer((*i).into())),
            RationalEntry::Float(x) => from_f64(*x).ok_or_else(|| format!("non-finite entry {x}")),
            RationalEntry::Text(s) => parse_q(s).map_err(|e| e.to_string()),
        }
    }
}

/// `{"g": .., "generators": [[..]]}`, entries integers, floats or rational strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergActionFile {
    pub g: usize,
    pub generators: Vec<Vec<RationalEntry>>,
}

impl HeisenbergAction {
    pub fn from_json(text: &str) -> Result<Self, HeisError> {
        let file: HeisenbergActionFile = serde_json::from_str(text).map_err(|e| HeisError::Parse(e.to_string()))?;
        let gens = file
            .generators
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, e)| e.to_q().map_err(|m| HeisError::Parse(format!("generators[{j}][{i}]: {m}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(file.g, gens)
    }

    pub fn to_json(&self) -> String {
        let file = HeisenbergActionFile {
            g: self.g,
            generators: self
                .generators
                .iter()
                .map(|row| row.iter().map(|q| RationalEntry::Text(format_q(q))).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("action serializes")
    }
}

/// `ω(a, b) = Σ_i a_i b_{g+i} − a_{g+i} b_i`, so that `[A, B] = ω(a, b) Z`.
pub fn symplectic_form(g: usize, a: &[Q], b: &[Q]) -> Q {
    (0..g).fold(Q::zero(), |acc, i| acc + &a[i] * &b[g + i] - &a[g + i] * &b[i])
}

/// Symplectic basis `e_1..e_g, f_1..f_g` of ℝ^{2g} whose first `dim W`
/// vectors `e_i` span the projected image `W` when `W` is isotropic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticCompletion {
    pub image_dim: usize,
    pub isotropic: bool,
    pub e: Vec<Vec<Q>>,
    pub f: Vec<Vec<Q>>,
}

impl SymplecticCompletion {
    /// `ω(e_i, f_j) = δ_ij` and `ω(e_i, e_j) = ω(f_i, f_j) = 0`.
    pub fn is_symplectic(&self, g: usize) -> bool {
        let n = self.e.len();
        n == g
            && self.f.len() == g
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let d = if i == j { Q::one() } else { Q::zero() };
                    symplectic_form(g, &self.e[i], &self.f[j]) == d
                        && symplectic_form(g, &self.e[i], &self.e[j]).is_zero()
                        && symplectic_form(g, &self.f[i], &self.f[j]).is_zero()
                })
            })
    }
}

/// Symplectic Gram–Schmidt that processes a basis of `W` first, then the
/// standard vectors.
pub fn symplectic_completion(g: usize, image: &[Vec<Q>]) -> SymplecticCompletion {
    let w = Subspace::span(2 * g, image);
    let isotropic = w.basis().iter().all(|a| w.basis().iter().all(|b| symplectic_form(g, a, b).is_zero()));
    let id = QMatrix::identity(2 * g);
    let mut pool: Vec<Vec<Q>> = w.basis().to_vec();
    pool.extend((0..2 * g).map(|i| id.row(i).to_vec()));
    let mut e = Vec::with_capacity(g);
    let mut f = Vec::with_capacity(g);
    while let Some(pos) = pool.iter().position(|v| v.iter().any(|x| !x.is_zero())) {
        let ei = pool.remove(pos);
        let Some(partner) = pool.iter().position(|v| !symplectic_form(g, &ei, v).is_zero()) else {
            // cannot happen in a nondegenerate space once earlier pairs are split off
            break;
        };
        let raw = pool.remove(partner);
        let s = symplectic_form(g, &ei, &raw);
        let fi: Vec<Q> = raw.iter().map(|x| x / &s).collect();
        for v in pool.iter_mut() {
            let a = symplectic_form(g, v, &fi);
            let b = symplectic_form(g, v, &ei);
            for ((x, ex), fx) in v.iter_mut().zip(&ei).zip(&fi) {
                *x = &*x - &a * ex + &b * fx;
            }
        }
        e.push(ei);
        f.push(fi);
    }
    SymplecticCompletion { image_dim: w.dim(), isotropic, e, f }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeisVerdict {
    FailsNecessaryConditions,
    PassesNecessaryConditions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergReport {
    pub g: usize,
    pub k: usize,
    pub tau: f64,
    pub radius: u64,
    /// Pairwise brackets of the generators vanish.
    pub abelian: bool,
    /// `Z ∈ span ρ`.
    pub center_test: bool,
    pub base_generators: Vec<Vec<f64>>,
    pub base_scan: DiophantineReport,
    pub base_test: bool,
    pub completion: SymplecticCompletion,
    pub verdict: HeisVerdict,
    pub reasons: Vec<String>,
}

/// Necessary conditions for the action to be GH; a pass is not a proof.
pub fn heisenberg_gh_check(act: &HeisenbergAction, tau: f64, radius: u64) -> HeisenbergReport {
    let g = act.g;
    let h = LieAlgebra::heisenberg(g);
    let abelian = act.generators.iter().enumerate().all(|(i, a)| {
        act.generators[i + 1..].iter().all(|b| h.bracket(a, b).expect("length checked").iter().all(Zero::is_zero))
    });
    let mut z = vec![Q::zero(); 2 * g + 1];
    z[2 * g] = Q::one();
    let center_test = Subspace::span(2 * g + 1, &act.generators).contains(&z);

    let base = act.base_generators();
    let base_f64: Vec<Vec<f64>> = base.iter().map(|v| v.iter().map(to_f64).collect()).collect();
    let torus = TranslationAction::new_exact(2 * g, base.clone()).expect("2g ≥ 2 and k ≥ 1");
    let base_scan = diophantine_scan(&torus, tau, radius);
    let base_test = base_scan.verdict == ScanVerdict::DiophantineConsistent;
    let completion = symplectic_completion(g, &base);

    let mut reasons = Vec::new();
    if !abelian {
        reasons.push("generators do not commute, so they do not define an ℝ^k-action".to_string());
    }
    if !center_test {
        reasons.push("center test: Z is not in the span of the generators".to_string());
    }
    match base_scan.verdict {
        ScanVerdict::Resonant => reasons.push(format!(
            "base test: resonance at {:?}",
            base_scan.resonance.as_ref().expect("resonant scan has a frequency")
        )),
        ScanVerdict::Failing => reasons.push(format!("base test: K_hat decays to {:e} at radius {radius}", base_scan.k_hat)),
        ScanVerdict::DiophantineConsistent => {}
    }
    let verdict = if reasons.is_empty() {
        HeisVerdict::PassesNecessaryConditions
    } else {
        HeisVerdict::FailsNecessaryConditions
    };
    HeisenbergReport {
        g,
        k: act.k(),
        tau,
        radius,
        abelian,
        center_test,
        base_generators: base_f64,
        base_scan,
        base_test,
        completion,
        verdict,
        reasons,
    }
}
