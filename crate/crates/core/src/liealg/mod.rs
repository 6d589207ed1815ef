//! Finite-dimensional Lie algebras over ℚ given by structure constants.
//!
//! Only the brackets `[b_i, b_j]` with `i < j` are stored; the other half of
//! the table follows from antisymmetry, so the stored data can never be
//! inconsistent with it.

mod builders;
mod classify;
mod io;
mod subspace;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_q, QMatrix, Q};

pub use classify::{
    classify_2step_dim1, classify_codim1_abelian, classify_codim1_coordinate, counterexample_g23, Codim1Classification, Codim1Verdict,
    CounterexampleWitness, EigenBlocks, HeisenbergProduct, JordanProfile,
};
pub use io::{AlgebraFile, BracketEntry};
pub use subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("Lie algebra must have positive dimension")]
    ZeroDimension,
    #[error("expected {expected} basis names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [b_{0}, b_{0}] must vanish")]
    SelfBracket(usize),
    #[error("conflicting values given for [b_{0}, b_{1}]")]
    Conflict(usize, usize),
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("subspace is not abelian")]
    NotAbelian,
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("subspace must have codimension 1, has dimension {dim} in ambient {ambient}")]
    NotCodimOne { dim: usize, ambient: usize },
    #[error("transversal element lies in the ideal")]
    ElementInIdeal,
    #[error("change of basis matrix is singular")]
    SingularBasisChange,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Lie algebra with exact structure constants `[b_i, b_j] = Σ_m c_ij^m b_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<Q>>,
}

/// Outcome of [`LieAlgebra::jacobi_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub violations: Vec<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LieAlgebra {
    /// Builds an algebra from bracket entries `(i, j, [(m, c_ij^m)])`.
    ///
    /// Entries with `i > j` are stored through antisymmetry. Giving both
    /// `(i, j)` and `(j, i)` is accepted only when they agree.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        entries: impl IntoIterator<Item = (usize, usize, Vec<(usize, Q)>)>,
    ) -> Result<Self, LieError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let dim = names.len();
        if dim == 0 {
            return Err(LieError::ZeroDimension);
        }
        let mut brackets: BTreeMap<(usize, usize), Vec<Q>> = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), Vec<Q>> = BTreeMap::new();
        for (i, j, coeffs) in entries {
            for &idx in [i, j].iter().chain(coeffs.iter().map(|(m, _)| m)) {
                if idx >= dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim });
                }
            }
            let mut v = vec![Q::zero(); dim];
            for (m, c) in coeffs {
                v[m] += c;
            }
            if i == j {
                if v.iter().any(|c| !c.is_zero()) {
                    return Err(LieError::SelfBracket(i));
                }
                continue;
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.into_iter().map(|c| -c).collect()) };
            if let Some(prev) = seen.get(&key) {
                if *prev != v {
                    return Err(LieError::Conflict(key.0, key.1));
                }
                continue;
            }
            seen.insert(key, v.clone());
            if v.iter().any(|c| !c.is_zero()) {
                brackets.insert(key, v);
            }
        }
        Ok(LieAlgebra { names, brackets })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `[b_i, b_j]` as a dense coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let n = self.dim();
        if i == j {
            return vec![Q::zero(); n];
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.brackets.get(&key) {
            Some(v) if neg => v.iter().map(|c| -c).collect(),
            Some(v) => v.clone(),
            None => vec![Q::zero(); n],
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, m: usize) -> Q {
        self.bracket_basis(i, j)[m].clone()
    }

    /// Nonzero stored brackets `(i, j, [b_i, b_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &[Q])> {
        self.brackets.iter().map(|(&(i, j), v)| (i, j, v.as_slice()))
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![Q::zero(); self.dim()];
        for (&(i, j), v) in &self.brackets {
            // contribution of [b_i, b_j] with coefficient x_i y_j − x_j y_i
            let c = &x[i] * &y[j] - &x[j] * &y[i];
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(v) {
                if !b.is_zero() {
                    *o += &c * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x`, column `j` holding `[x, b_j]`.
    pub fn ad(&self, x: &[Q]) -> Result<QMatrix, LieError> {
        self.check_len(x)?;
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.bracket(x, &self.unit(j))).collect::<Result<_, _>>()?;
        Ok(QMatrix::from_columns(&cols))
    }

    pub fn ad_basis(&self, i: usize) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.bracket_basis(i, j)).collect();
        QMatrix::from_columns(&cols)
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    fn check_len(&self, x: &[Q]) -> Result<(), LieError> {
        if x.len() != self.dim() {
            return Err(LieError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Checks `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` on every basis triple
    /// `x < y < z`; the alternating Jacobiator makes other orderings redundant.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim();
        let mut violations = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (ea, eb, ec) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&ea, &self.bracket_basis(b, c)).expect("dims agree");
                    let t2 = self.bracket(&eb, &self.bracket_basis(c, a)).expect("dims agree");
                    let t3 = self.bracket(&ec, &self.bracket_basis(a, b)).expect("dims agree");
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        violations.push((a, b, c));
                    }
                }
            }
        }
        JacobiReport { violations }
    }

    /// `[A, B]` for subspaces of this algebra.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut gens = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                gens.push(self.bracket(x, y).expect("subspace ambient matches algebra"));
            }
        }
        Subspace::span(self.dim(), &gens)
    }

    /// `𝔤^{(0)} = 𝔤 ⊇ 𝔤^{(1)} = [𝔤, 𝔤] ⊇ …`, stopping at the first term that
    /// repeats (the repeat is not included).
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let whole = Subspace::whole(self.dim());
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().expect("series is never empty");
            if last.dim() == 0 {
                break;
            }
            let next = self.bracket_subspaces(&whole, last);
            if next == *last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn lower_central_dims(&self) -> Vec<usize> {
        self.lower_central_series().iter().map(Subspace::dim).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.dim() == 0)
    }

    /// Minimal `ℓ` with `𝔤^{(ℓ)} = 0`, or `None` when not nilpotent.
    pub fn step(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last()?.dim() == 0).then(|| series.len() - 1)
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        let whole = Subspace::whole(self.dim());
        self.bracket_subspaces(&whole, &whole)
    }

    /// `{x : [x, b_j] = 0 for all j}`, the kernel of the stacked maps `x ↦ [x, b_j]`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut stacked = QMatrix::zeros(0, n);
        for j in 0..n {
            // column i of this block is [b_i, b_j]
            let cols: Vec<Vec<Q>> = (0..n).map(|i| self.bracket_basis(i, j)).collect();
            stacked = stacked.vstack(&QMatrix::from_columns(&cols));
        }
        Subspace::span(n, &stacked.kernel())
    }

    /// Same algebra in the basis `b'_i = Σ_r P_{ri} b_r` (columns of `p`).
    pub fn change_basis(&self, p: &QMatrix) -> Result<LieAlgebra, LieError> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(LieError::DimensionMismatch { expected: n, got: p.rows() });
        }
        let inv = p.inverse().ok_or(LieError::SingularBasisChange)?;
        let cols: Vec<Vec<Q>> = (0..n).map(|i| p.column(i)).collect();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = self.bracket(&cols[i], &cols[j])?;
                let coords = inv.mul_vec(&br);
                let terms: Vec<(usize, Q)> =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                if !terms.is_empty() {
                    entries.push((i, j, terms));
                }
            }
        }
        let names = (0..n).map(|i| format!("b{i}"));
        LieAlgebra::new(names, entries)
    }

    /// Renders a coordinate vector as `name_1 - (2/3)name_2 + …`.
    pub fn format_element(&self, x: &[Q]) -> String {
        let mut out = String::new();
        for (c, name) in x.iter().zip(&self.names).filter(|(c, _)| !c.is_zero()) {
            let negative = *c < Q::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if abs.is_one() {
                out.push_str(name);
            } else {
                out.push_str(&format!("({}){name}", format_q(&abs)));
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn antisymmetric_completion() {
        let g = LieAlgebra::new(["X", "Y", "Z"], [(1, 0, vec![(2, q(1))])]).unwrap();
        assert_eq!(g.bracket_basis(0, 1), vec![q(0), q(0), q(-1)]);
        assert_eq!(g.bracket_basis(1, 0), vec![q(0), q(0), q(1)]);
        assert!(matches!(
            LieAlgebra::new(["X", "Y"], [(0, 1, vec![(0, q(1))]), (1, 0, vec![(0, q(1))])]),
            Err(LieError::Conflict(0, 1))
        ));
        assert!(matches!(LieAlgebra::new(["X"], [(0, 0, vec![(0, q(1))])]), Err(LieError::SelfBracket(0))));
        assert!(matches!(
            LieAlgebra::new(["X", "Y"], [(0, 2, vec![])]),
            Err(LieError::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(matches!(LieAlgebra::new(Vec::<String>::new(), []), Err(LieError::ZeroDimension)));
    }

    #[test]
    fn jacobi_examples() {
        assert!(LieAlgebra::heisenberg(1).jacobi_check().passes());
        assert!(LieAlgebra::abelian(5).jacobi_check().passes());
        // [X,Y] = X, [X,Z] = Y: the Jacobiator on (X,Y,Z) is
        // [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0 + [Y,−Y] + [Z,X] = −Y ≠ 0
        let bad = LieAlgebra::new(["X", "Y", "Z"], [(0, 1, vec![(0, q(1))]), (0, 2, vec![(1, q(1))])]).unwrap();
        assert_eq!(bad.jacobi_check().violations, vec![(0, 1, 2)]);
    }

    #[test]
    fn lower_central_series_examples() {
        assert_eq!(LieAlgebra::heisenberg(1).lower_central_dims(), vec![3, 1, 0]);
        assert_eq!(LieAlgebra::heisenberg(1).step(), Some(2));
        // f^3: [Y,X1] = X2, [Y,X2] = X3 → g^1 = <X2,X3>, g^2 = <X3>, g^3 = 0
        assert_eq!(LieAlgebra::filiform(3).lower_central_dims(), vec![4, 2, 1, 0]);
        assert_eq!(LieAlgebra::filiform(3).step(), Some(3));
        assert_eq!(LieAlgebra::free_nilpotent_2_3().lower_central_dims(), vec![5, 3, 2, 0]);
        assert_eq!(LieAlgebra::abelian(4).lower_central_dims(), vec![4, 0]);
        for g in 1..=6 {
            assert_eq!(LieAlgebra::heisenberg(g).lower_central_dims(), vec![2 * g + 1, 1, 0]);
        }
    }

    #[test]
    fn non_nilpotent_series_stabilizes() {
        // ax+b algebra: [X,Y] = Y
        let g = LieAlgebra::new(["X", "Y"], [(0, 1, vec![(1, q(1))])]).unwrap();
        assert_eq!(g.lower_central_dims(), vec![2, 1]);
        assert!(!g.is_nilpotent());
        assert_eq!(g.step(), None);
    }

    #[test]
    fn center_examples() {
        let g23 = LieAlgebra::free_nilpotent_2_3();
        let expected = Subspace::span(5, &[g23.unit(3), g23.unit(4)]);
        assert_eq!(g23.center(), expected);
        for g in 1..=3 {
            let h = LieAlgebra::heisenberg(g);
            let z = h.dim() - 1;
            assert_eq!(h.center(), Subspace::span(h.dim(), &[h.unit(z)]));
        }
        assert_eq!(LieAlgebra::abelian(4).center().dim(), 4);
    }

    #[test]
    fn change_basis_preserves_invariants() {
        let h = LieAlgebra::heisenberg(2);
        let p = QMatrix::from_i64(&[
            &[1, 1, 0, 0, 0],
            &[0, 1, 2, 0, 0],
            &[0, 0, 1, 0, 1],
            &[3, 0, 0, 1, 0],
            &[0, 0, 0, 1, 1],
        ]);
        let h2 = h.change_basis(&p).unwrap();
        assert!(h2.jacobi_check().passes());
        assert_eq!(h2.lower_central_dims(), vec![5, 1, 0]);
        assert_eq!(h2.center().dim(), 1);
        assert!(matches!(h.change_basis(&QMatrix::zeros(5, 5)), Err(LieError::SingularBasisChange)));
    }

    #[test]
    fn format_element_renders_terms() {
        let g = LieAlgebra::free_nilpotent_2_3();
        let mut v = vec![q(0); 5];
        v[3] = q(1);
        v[4] = crate::rational::qf(-2, 3);
        assert_eq!(g.format_element(&v), "Y1 - (2/3)Y2");
        assert_eq!(g.format_element(&[q(0), q(0), q(0), q(0), q(0)]), "0");
        v[0] = q(-1);
        assert_eq!(g.format_element(&v), "-X1 + Y1 - (2/3)Y2");
    }
}
