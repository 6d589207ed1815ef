//! The cochain complex `C^ℓ(α) ≅ C^∞(𝕋^d, Λ^ℓ(ℝ^k))` of a translation
//! action, on trigonometric polynomials. Every operator here is a Fourier
//! multiplier, so truncation is exact.

mod cocycle;
mod hodge;
mod io;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::exterior::{contract_basis, wedge_basis, ExtVector, ExteriorError, MultiIndex};
use crate::torus::{laplacian_symbol, sobolev_norm, FourierSeries, TorusError, TranslationAction};

pub use cocycle::{cocycle_from_form, form_from_cocycle, random_closed_one_form, roundtrip_error, AbelianCocycle};
pub use hodge::{harmonic_dims, hodge_decompose, tame_inverse_delta, HodgeParts, Orthogonality, TameInverse};
pub use io::{CochainComponent, CochainFile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynError {
    #[error("degree {degree} has no successor for k = {k}")]
    DegreeOverflow { degree: usize, k: usize },
    #[error("degree 0 cochains have no codifferential")]
    DegreeUnderflow,
    #[error("cochain shape mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("cochain is not closed: ‖dω‖ = {residual:e}")]
    NotClosed { residual: f64 },
    #[error("cochain is not exact: coexact part {coexact:e}, harmonic part {harmonic:e}")]
    NotExact { coexact: f64, harmonic: f64 },
    #[error("laplacian is not diagonal: residual {residual:e}")]
    NotDiagonal { residual: f64 },
    #[error("sampler is not differentiable at x = {x:?}: Richardson levels disagree by {disagreement:e}")]
    NonDifferentiable { x: Vec<f64>, disagreement: f64 },
    #[error("{0}")]
    Parse(String),
}

/// `ω = Σ_I u_I e^I` with `u_I` trigonometric polynomials on 𝕋^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    action: TranslationAction,
    degree: usize,
    components: BTreeMap<MultiIndex, FourierSeries>,
}

impl Cochain {
    pub fn zero(action: &TranslationAction, degree: usize) -> Self {
        Cochain { action: action.clone(), degree, components: BTreeMap::new() }
    }

    pub fn new(
        action: &TranslationAction,
        degree: usize,
        components: impl IntoIterator<Item = (MultiIndex, FourierSeries)>,
    ) -> Result<Self, DynError> {
        if degree > action.k() {
            return Err(DynError::Mismatch(format!("degree {degree} exceeds k = {}", action.k())));
        }
        let mut out = Self::zero(action, degree);
        for (i, u) in components {
            if i.k() != action.k() || i.degree() != degree {
                return Err(DynError::Mismatch(format!(
                    "index {:?} is not a degree-{degree} index over k = {}",
                    i.indices(),
                    action.k()
                )));
            }
            if u.d() != action.d() {
                return Err(DynError::Mismatch(format!("series on 𝕋^{} for an action on 𝕋^{}", u.d(), action.d())));
            }
            out.add_component(i, &u);
        }
        Ok(out)
    }

    /// Constant-coefficient cochain `Σ c_I e^I`.
    pub fn constant(action: &TranslationAction, form: &ExtVector<Complex64>) -> Result<Self, DynError> {
        if form.k() != action.k() {
            return Err(DynError::Mismatch(format!("form over k = {} for k = {}", form.k(), action.k())));
        }
        let comps = form.terms().map(|(i, c)| (i.clone(), FourierSeries::constant(action.d(), *c)));
        Self::new(action, form.degree(), comps)
    }

    pub fn single(action: &TranslationAction, index: MultiIndex, u: FourierSeries) -> Result<Self, DynError> {
        let degree = index.degree();
        Self::new(action, degree, [(index, u)])
    }

    /// Random real cochain with `modes` frequencies per component in `‖n‖_∞ ≤ radius`.
    pub fn random<R: Rng + ?Sized>(
        action: &TranslationAction,
        degree: usize,
        radius: i64,
        modes: usize,
        rng: &mut R,
    ) -> Self {
        let comps = MultiIndex::all(action.k(), degree)
            .into_iter()
            .map(|i| (i, FourierSeries::random(action.d(), radius, modes, true, rng)))
            .collect::<Vec<_>>();
        Self::new(action, degree, comps).expect("consistent shapes")
    }

    fn add_component(&mut self, index: MultiIndex, u: &FourierSeries) {
        let sum = match self.components.get(&index) {
            Some(cur) => cur.add(u).expect("same dimension"),
            None => u.clone(),
        };
        if sum.is_empty() {
            self.components.remove(&index);
        } else {
            self.components.insert(index, sum);
        }
    }

    pub fn action(&self) -> &TranslationAction {
        &self.action
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn k(&self) -> usize {
        self.action.k()
    }

    pub fn component(&self, index: &MultiIndex) -> FourierSeries {
        self.components.get(index).cloned().unwrap_or_else(|| FourierSeries::zero(self.action.d()))
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &FourierSeries)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Largest `‖n‖_∞` over all components.
    pub fn radius(&self) -> i64 {
        self.components.values().map(FourierSeries::radius).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<(), DynError> {
        if self.degree != other.degree || self.action != other.action {
            return Err(DynError::Mismatch(format!(
                "degree {} and degree {} cochains (or different actions)",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, DynError> {
        self.check(other)?;
        let mut out = self.clone();
        for (i, u) in &other.components {
            out.add_component(i.clone(), u);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DynError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(&self.action, self.degree);
        for (i, u) in &self.components {
            out.add_component(i.clone(), &u.scale(s));
        }
        out
    }

    /// Applies a frequency multiplier to every component.
    pub fn map_multiplier(&self, mut m: impl FnMut(&[i64]) -> Complex64) -> Self {
        let mut out = Self::zero(&self.action, self.degree);
        for (i, u) in &self.components {
            out.add_component(i.clone(), &u.map_multiplier(&mut m));
        }
        out
    }

    /// Constant (`n = 0`) coefficients as an element of `Λ^ℓ(ℂ^k)`.
    pub fn constant_part(&self) -> ExtVector<Complex64> {
        let terms = self.components.iter().map(|(i, u)| (i.clone(), u.mean()));
        ExtVector::from_terms(self.k(), self.degree, terms).expect("consistent shapes")
    }

    pub fn without_constant(&self) -> Self {
        let mut out = Self::zero(&self.action, self.degree);
        for (i, u) in &self.components {
            out.add_component(i.clone(), &u.without_mean());
        }
        out
    }

    /// `⟨ω, η⟩_ℓ = Σ_I ∫ ω_I conj(η_I) dx` with Haar measure.
    pub fn inner(&self, other: &Self) -> Result<Complex64, DynError> {
        self.check(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, u) in &self.components {
            if let Some(v) = other.components.get(i) {
                for (n, c) in u.iter() {
                    acc += c * v.get(n).conj();
                }
            }
        }
        Ok(acc)
    }

    /// `(Σ_I ‖ω_I‖_s²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.components.values().map(|u| sobolev_norm(u, s).powi(2)).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `max_{I,n} |ω̂_I(n)|`.
    pub fn max_abs(&self) -> f64 {
        self.components.values().fold(0.0, |m, u| m.max(u.max_abs()))
    }
}

/// Multiplier of the generator `X_j` on `e^{2πi n·x}`: `2πi X_j·n`.
fn derivative(act: &TranslationAction, j: usize, n: &[i64]) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * act.generator_dot(j, n))
}

/// `d(u e^I) = Σ_j (X_j u) e^j ∧ e^I`.
pub fn differential(omega: &Cochain) -> Result<Cochain, DynError> {
    let k = omega.k();
    if omega.degree >= k {
        return Err(DynError::DegreeOverflow { degree: omega.degree, k });
    }
    let act = &omega.action;
    let mut out = Cochain::zero(act, omega.degree + 1);
    for (i, u) in &omega.components {
        for j in 0..k {
            if let Some((sign, target)) = wedge_basis(j, i)? {
                let s = sign.to_i64() as f64;
                out.add_component(target, &u.map_multiplier(|n| derivative(act, j, n) * s));
            }
        }
    }
    Ok(out)
}

/// `d*(v e^J) = −Σ_j (X_j v) ι_j e^J`, the adjoint of [`differential`]
/// for the Haar pairing (each `X_j` is skew-adjoint).
pub fn codifferential(omega: &Cochain) -> Result<Cochain, DynError> {
    if omega.degree == 0 {
        return Err(DynError::DegreeUnderflow);
    }
    let act = &omega.action;
    let mut out = Cochain::zero(act, omega.degree - 1);
    for (jdx, v) in &omega.components {
        for j in 0..omega.k() {
            if let Some((sign, target)) = contract_basis(j, jdx)? {
                let s = -(sign.to_i64() as f64);
                out.add_component(target, &v.map_multiplier(|n| derivative(act, j, n) * s));
            }
        }
    }
    Ok(out)
}

/// `d*d + dd*` by composition, without the diagonal shortcut.
pub fn laplacian_by_composition(omega: &Cochain) -> Result<Cochain, DynError> {
    let mut out = Cochain::zero(&omega.action, omega.degree);
    if omega.degree < omega.k() {
        out = out.add(&codifferential(&differential(omega)?)?)?;
    }
    if omega.degree > 0 {
        out = out.add(&differential(&codifferential(omega)?)?)?;
    }
    Ok(out)
}

/// `Δ_α` applied componentwise: `u e^I ↦ (Δ_α u) e^I`.
pub fn diagonal_laplacian(omega: &Cochain) -> Cochain {
    let act = omega.action.clone();
    omega.map_multiplier(|n| Complex64::new(laplacian_symbol(&act, n).expect("cochain dimension"), 0.0))
}

/// `max_{I,n} |(d*d + dd*)ω − Δ_α ω|` relative to `max(1, max |Δ_α ω|)`.
pub fn diagonality_residual(omega: &Cochain) -> Result<f64, DynError> {
    let comp = laplacian_by_composition(omega)?;
    let diag = diagonal_laplacian(omega);
    Ok(comp.sub(&diag)?.max_abs() / diag.max_abs().max(1.0))
}

pub const DIAGONAL_TOL: f64 = 1e-12;

/// `Δ_{α,ℓ} = d*d + dd*`, checked against the componentwise multiplier.
pub fn cochain_laplacian(omega: &Cochain) -> Result<Cochain, DynError> {
    let comp = laplacian_by_composition(omega)?;
    let diag = diagonal_laplacian(omega);
    let residual = comp.sub(&diag)?.max_abs() / diag.max_abs().max(1.0);
    if residual > DIAGONAL_TOL {
        return Err(DynError::NotDiagonal { residual });
    }
    Ok(comp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::golden_ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mi(k: usize, idx: &[usize]) -> MultiIndex {
        MultiIndex::new(k, idx).unwrap()
    }

    #[test]
    fn differential_of_a_mode() {
        let act = TranslationAction::golden_2d();
        let n = vec![2, -1];
        let u = FourierSeries::mode(n.clone(), c(1.0, 0.0));
        let w = Cochain::single(&act, MultiIndex::empty(2), u).unwrap();
        let dw = differential(&w).unwrap();
        assert_eq!(dw.degree(), 1);
        let x1n = 2.0;
        let x2n = -golden_ratio();
        assert!((dw.component(&mi(2, &[0])).get(&n) - c(0.0, 2.0 * PI * x1n)).norm() < 1e-14);
        assert!((dw.component(&mi(2, &[1])).get(&n) - c(0.0, 2.0 * PI * x2n)).norm() < 1e-14);

        let constant = Cochain::single(&act, mi(2, &[1]), FourierSeries::constant(2, c(3.0, 1.0))).unwrap();
        assert!(differential(&constant).unwrap().is_zero());
        assert!(matches!(
            differential(&Cochain::zero(&act, 2)),
            Err(DynError::DegreeOverflow { degree: 2, k: 2 })
        ));
    }

    #[test]
    fn codifferential_of_top_form() {
        let act = TranslationAction::golden_2d();
        let n = vec![1, 3];
        let w = Cochain::single(&act, mi(2, &[0, 1]), FourierSeries::mode(n.clone(), c(1.0, 0.0))).unwrap();
        let dw = codifferential(&w).unwrap();
        let a1 = c(0.0, 2.0 * PI * act.generator_dot(0, &n));
        let a2 = c(0.0, 2.0 * PI * act.generator_dot(1, &n));
        // −a1·(+1) e^{(2)} − a2·(−1) e^{(1)}
        assert!((dw.component(&mi(2, &[1])).get(&n) + a1).norm() < 1e-13);
        assert!((dw.component(&mi(2, &[0])).get(&n) - a2).norm() < 1e-13);
        assert!(codifferential(&Cochain::constant(&act, &ExtVector::basis(mi(2, &[0]))).unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(codifferential(&Cochain::zero(&act, 0)), Err(DynError::DegreeUnderflow));
    }

    #[test]
    fn complex_and_adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=3 {
            let act = TranslationAction::golden_k(k);
            for l in 0..=k {
                let w = Cochain::random(&act, l, 3, 4, &mut rng);
                // second-order operators: measure against the size of Δω
                let scale = diagonal_laplacian(&w).max_abs().max(1.0);
                if l + 2 <= k {
                    let ddw = differential(&differential(&w).unwrap()).unwrap();
                    assert!(ddw.max_abs() <= 1e-13 * scale, "{}", ddw.max_abs());
                }
                if l >= 2 {
                    let ddw = codifferential(&codifferential(&w).unwrap()).unwrap();
                    assert!(ddw.max_abs() <= 1e-13 * scale, "{}", ddw.max_abs());
                }
                if l < k {
                    let eta = Cochain::random(&act, l + 1, 3, 4, &mut rng);
                    let lhs = differential(&w).unwrap().inner(&eta).unwrap();
                    let rhs = w.inner(&codifferential(&eta).unwrap()).unwrap();
                    assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "{lhs} {rhs}");
                }
                assert!(diagonality_residual(&w).unwrap() <= DIAGONAL_TOL);
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        let act = TranslationAction::golden_2d();
        let n = vec![1, -1];
        let w = Cochain::single(&act, mi(2, &[1]), FourierSeries::mode(n.clone(), c(1.0, 0.0))).unwrap();
        let lw = cochain_laplacian(&w).unwrap();
        let sym = laplacian_symbol(&act, &n).unwrap();
        assert!((lw.component(&mi(2, &[1])).get(&n) - c(sym, 0.0)).norm() < 1e-12 * sym);
        assert!(lw.component(&mi(2, &[0])).is_empty());
        let constant = Cochain::constant(&act, &ExtVector::basis(MultiIndex::empty(2))).unwrap();
        assert!(cochain_laplacian(&constant).unwrap().is_zero());
    }
}
