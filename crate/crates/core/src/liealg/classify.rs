//! The two classification routines behind the rigidity statements, plus the
//! bracket computation showing that 𝔤_{2,3} has no abelian lift of the
//! Heisenberg GH action.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{LieAlgebra, LieError, Subspace};
use crate::rational::{is_zero_vec, rational_roots, QMatrix, Q};

/// `𝔤 ≅ 𝔥^genus × ℝ^euclidean`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeisenbergProduct {
    pub genus: usize,
    pub euclidean: usize,
}

/// Recognizes 2-step nilpotent algebras with one-dimensional derived algebra.
///
/// Every bracket is a multiple `ω(x, y) z` of the generator `z` of `[𝔤, 𝔤]`;
/// the rank of the skew form `ω` is `2g` and the remaining directions are
/// central.
pub fn classify_2step_dim1(g: &LieAlgebra) -> Result<HeisenbergProduct, LieError> {
    match g.step() {
        Some(2) => {}
        Some(s) => return Err(LieError::NotApplicable(format!("algebra is {s}-step nilpotent, not 2-step"))),
        None => return Err(LieError::NotApplicable("algebra is not nilpotent".into())),
    }
    let derived = g.derived_subalgebra();
    if derived.dim() != 1 {
        return Err(LieError::NotApplicable(format!("derived algebra has dimension {}, not 1", derived.dim())));
    }
    let n = g.dim();
    let mut form = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let coords = derived.coordinates(&g.bracket_basis(i, j)).expect("brackets lie in [g,g]");
            form[(i, j)] = coords[0].clone();
        }
    }
    let rank = form.rank();
    debug_assert!(rank.is_multiple_of(2), "skew form has even rank");
    Ok(HeisenbergProduct { genus: rank / 2, euclidean: n - rank - 1 })
}

/// Jordan data of one rational eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenBlocks {
    pub value: Q,
    pub algebraic_multiplicity: usize,
    /// Block sizes, largest first.
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanProfile {
    /// `det(xI − A)`, ascending coefficients.
    pub charpoly: Vec<Q>,
    pub eigenvalues: Vec<EigenBlocks>,
    /// Factor of the characteristic polynomial without rational roots;
    /// `[1]` when every eigenvalue is rational.
    pub irrational_factor: Vec<Q>,
}

impl JordanProfile {
    pub fn of(a: &QMatrix) -> JordanProfile {
        let n = a.rows();
        let charpoly = a.charpoly();
        let (roots, irrational_factor) = rational_roots(&charpoly);
        let eigenvalues = roots
            .into_iter()
            .map(|(value, mult)| {
                let shifted = a.sub(&QMatrix::identity(n).scale(&value));
                EigenBlocks { blocks: blocks_from_ranks(&shifted, mult), value, algebraic_multiplicity: mult }
            })
            .collect();
        JordanProfile { charpoly, eigenvalues, irrational_factor }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.irrational_factor.len() <= 1 && self.eigenvalues.iter().all(|e| e.value.is_zero())
    }
}

/// Jordan block sizes of eigenvalue 0 of `n` from `r_j = rank(n^j)`: there
/// are `r_{j−1} − r_j` blocks of size at least `j`.
fn blocks_from_ranks(n: &QMatrix, multiplicity: usize) -> Vec<usize> {
    let dim = n.rows();
    let mut ranks = vec![dim];
    let mut power = QMatrix::identity(dim);
    loop {
        power = power.mul(n);
        let r = power.rank();
        let prev = *ranks.last().unwrap();
        ranks.push(r);
        if r == prev || ranks.len() > multiplicity + 1 {
            break;
        }
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut blocks = Vec::new();
    for size in (1..=at_least.len()).rev() {
        let exactly = at_least[size - 1] - at_least.get(size).copied().unwrap_or(0);
        blocks.extend(std::iter::repeat_n(size, exactly));
    }
    blocks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Codim1Verdict {
    /// `ad_Z` vanishes on the ideal; the algebra is abelian.
    Abelian,
    /// Nilpotent `ad_Z` with one nontrivial block of size `g`: `𝔣^g × ℝ^n`.
    Filiform { g: usize, n: usize },
    /// Nilpotent `ad_Z` with several nontrivial blocks. The block profile is
    /// reported without asserting a product decomposition.
    MultiBlockNilpotent { blocks: Vec<usize> },
    /// `ad_Z` has a nonzero eigenvalue.
    SolvableNonNilpotent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codim1Classification {
    /// `ad_Z` restricted to the ideal, in the ideal's echelon basis.
    pub restricted_ad: QMatrix,
    pub profile: JordanProfile,
    pub verdict: Codim1Verdict,
}

/// Classifies `𝔤 = 𝔞 ⊕ ℝZ` with `𝔞` an abelian ideal of codimension one
/// through the Jordan form of `A = ad_Z|_𝔞`.
pub fn classify_codim1_abelian(g: &LieAlgebra, ideal: &Subspace, z: &[Q]) -> Result<Codim1Classification, LieError> {
    let n = g.dim();
    if z.len() != n {
        return Err(LieError::DimensionMismatch { expected: n, got: z.len() });
    }
    if ideal.ambient() != n {
        return Err(LieError::DimensionMismatch { expected: n, got: ideal.ambient() });
    }
    if ideal.dim() + 1 != n {
        return Err(LieError::NotCodimOne { dim: ideal.dim(), ambient: n });
    }
    if ideal.contains(z) {
        return Err(LieError::ElementInIdeal);
    }
    let basis = ideal.basis();
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            if !is_zero_vec(&g.bracket(x, y)?) {
                return Err(LieError::NotAbelian);
            }
        }
    }
    for m in 0..n {
        for x in basis {
            if !ideal.contains(&g.bracket(&g.unit(m), x)?) {
                return Err(LieError::NotIdeal);
            }
        }
    }
    let cols: Vec<Vec<Q>> = basis
        .iter()
        .map(|x| ideal.coordinates(&g.bracket(z, x).expect("dims checked")).expect("ideal is ad-invariant"))
        .collect();
    let restricted_ad = if cols.is_empty() { QMatrix::zeros(0, 0) } else { QMatrix::from_columns(&cols) };
    let profile = JordanProfile::of(&restricted_ad);
    let verdict = if !profile.is_nilpotent() {
        Codim1Verdict::SolvableNonNilpotent
    } else {
        let blocks = profile.eigenvalues.first().map(|e| e.blocks.clone()).unwrap_or_default();
        let nontrivial: Vec<usize> = blocks.iter().copied().filter(|&b| b >= 2).collect();
        match nontrivial.len() {
            0 => Codim1Verdict::Abelian,
            1 => Codim1Verdict::Filiform { g: nontrivial[0], n: blocks.len() - 1 },
            _ => Codim1Verdict::MultiBlockNilpotent { blocks },
        }
    };
    Ok(Codim1Classification { restricted_ad, profile, verdict })
}

/// Tries every coordinate hyperplane `span(b_i : i ≠ m)` as the abelian
/// ideal with `Z = b_m`, returning the first `m` that classifies.
pub fn classify_codim1_coordinate(g: &LieAlgebra) -> Option<(usize, Codim1Classification)> {
    let n = g.dim();
    (0..n).find_map(|m| {
        let others: Vec<Vec<Q>> = (0..n).filter(|&i| i != m).map(|i| g.unit(i)).collect();
        let ideal = Subspace::span(n, &others);
        classify_codim1_abelian(g, &ideal, &g.unit(m)).ok().map(|c| (m, c))
    })
}

/// `[S', R']` for the lifts `R' = X1 + βX2 + Y`, `S' = Z + Y'` in 𝔤_{2,3}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleWitness {
    pub r_lift: Vec<Q>,
    pub s_lift: Vec<Q>,
    pub bracket: Vec<Q>,
    /// `Y1 + βY2`.
    pub expected: Vec<Q>,
}

impl CounterexampleWitness {
    pub fn matches_expected(&self) -> bool {
        self.bracket == self.expected
    }

    /// A nonzero bracket means the lift of the base action is not abelian.
    pub fn lift_is_nonabelian(&self) -> bool {
        !is_zero_vec(&self.bracket)
    }
}

/// Central corrections are given as coordinates in `span(Y1, Y2)`.
pub fn counterexample_g23(beta: &Q, y: &[Q; 2], y_prime: &[Q; 2]) -> CounterexampleWitness {
    let g = LieAlgebra::free_nilpotent_2_3();
    let (x1, x2, z, y1, y2) = (0, 1, 2, 3, 4);
    let mut r_lift = vec![Q::zero(); 5];
    r_lift[x1] = Q::one();
    r_lift[x2] = beta.clone();
    r_lift[y1] = y[0].clone();
    r_lift[y2] = y[1].clone();
    let mut s_lift = vec![Q::zero(); 5];
    s_lift[z] = Q::one();
    s_lift[y1] = y_prime[0].clone();
    s_lift[y2] = y_prime[1].clone();
    let bracket = g.bracket(&s_lift, &r_lift).expect("g23 vectors have length 5");
    let mut expected = vec![Q::zero(); 5];
    expected[y1] = Q::one();
    expected[y2] = beta.clone();
    CounterexampleWitness { r_lift, s_lift, bracket, expected }
}
