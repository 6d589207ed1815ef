//! Chevalley–Eilenberg complex `C^ℓ(π) = Hom(Λ_ℓ 𝔤, V)` of a finite
//! dimensional representation, with exact ranks for cohomology.
//!
//! A cochain is stored densely: the value on the basis multi-index `I` is
//! the block `values[rank(I) * dim_v .. (rank(I) + 1) * dim_v]`.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{binomial, MultiIndex, Sign};
use crate::liealg::LieAlgebra;
use crate::rational::{QMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CeError {
    #[error("degree {degree} out of range for an algebra of dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("expected {expected} action matrices, got {got}")]
    ActionCount { expected: usize, got: usize },
    #[error("action matrix {index} is {rows}x{cols}, expected {dim_v}x{dim_v}")]
    ActionShape { index: usize, rows: usize, cols: usize, dim_v: usize },
    #[error("not a representation: π([b_{0}, b_{1}]) ≠ [π(b_{0}), π(b_{1})]")]
    NotHomomorphism(usize, usize),
    #[error("cochain does not match the representation: {0}")]
    Mismatch(String),
}

/// `π: 𝔤 → End(V)` given on the basis of 𝔤.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    algebra: LieAlgebra,
    dim_v: usize,
    action: Vec<QMatrix>,
}

impl Representation {
    /// Validates shapes and the homomorphism property before accepting the data.
    pub fn new(algebra: LieAlgebra, dim_v: usize, action: Vec<QMatrix>) -> Result<Self, CeError> {
        if action.len() != algebra.dim() {
            return Err(CeError::ActionCount { expected: algebra.dim(), got: action.len() });
        }
        for (index, m) in action.iter().enumerate() {
            if m.rows() != dim_v || m.cols() != dim_v {
                return Err(CeError::ActionShape { index, rows: m.rows(), cols: m.cols(), dim_v });
            }
        }
        let rep = Representation { algebra, dim_v, action };
        rep.check_homomorphism()?;
        Ok(rep)
    }

    /// `π ≡ 0` on `V = ℚ^dim_v`.
    pub fn trivial(algebra: LieAlgebra, dim_v: usize) -> Self {
        let action = vec![QMatrix::zeros(dim_v, dim_v); algebra.dim()];
        Representation { algebra, dim_v, action }
    }

    /// `X ↦ ad_X` on `V = 𝔤`.
    pub fn adjoint(algebra: LieAlgebra) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.ad_basis(i)).collect();
        Representation { dim_v: algebra.dim(), algebra, action }
    }

    /// Checks `π([b_i, b_j]) = π(b_i)π(b_j) − π(b_j)π(b_i)` for all `i < j`.
    pub fn check_homomorphism(&self) -> Result<(), CeError> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let br = self.algebra.bracket_basis(i, j);
                let lhs = self.apply_element(&br);
                let rhs = self.action[i].mul(&self.action[j]).sub(&self.action[j].mul(&self.action[i]));
                if lhs != rhs {
                    return Err(CeError::NotHomomorphism(i, j));
                }
            }
        }
        Ok(())
    }

    /// `π(x)` for `x = Σ x_m b_m`.
    pub fn apply_element(&self, x: &[Q]) -> QMatrix {
        x.iter()
            .zip(&self.action)
            .filter(|(c, _)| !c.is_zero())
            .fold(QMatrix::zeros(self.dim_v, self.dim_v), |acc, (c, m)| acc.add(&m.scale(c)))
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn action(&self, i: usize) -> &QMatrix {
        &self.action[i]
    }

    pub fn cochain_dim(&self, degree: usize) -> usize {
        binomial(self.algebra.dim(), degree) * self.dim_v
    }
}

/// Alternating map `Λ_ℓ 𝔤 → V`, determined by its values on canonical
/// basis multi-indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgCochain {
    algebra_dim: usize,
    degree: usize,
    dim_v: usize,
    values: Vec<Q>,
}

impl AlgCochain {
    pub fn zero(rep: &Representation, degree: usize) -> Self {
        AlgCochain {
            algebra_dim: rep.algebra.dim(),
            degree,
            dim_v: rep.dim_v,
            values: vec![Q::zero(); rep.cochain_dim(degree)],
        }
    }

    pub fn from_values(rep: &Representation, degree: usize, values: Vec<Q>) -> Result<Self, CeError> {
        if degree > rep.algebra.dim() {
            return Err(CeError::DegreeOutOfRange { degree, dim: rep.algebra.dim() });
        }
        if values.len() != rep.cochain_dim(degree) {
            return Err(CeError::Mismatch(format!(
                "expected {} coordinates, got {}",
                rep.cochain_dim(degree),
                values.len()
            )));
        }
        Ok(AlgCochain { algebra_dim: rep.algebra.dim(), degree, dim_v: rep.dim_v, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `ω(b_I) ∈ V`.
    pub fn value(&self, index: &MultiIndex) -> &[Q] {
        let r = index.rank();
        &self.values[r * self.dim_v..(r + 1) * self.dim_v]
    }

    pub fn set(&mut self, index: &MultiIndex, v: &[Q]) {
        let r = index.rank();
        self.values[r * self.dim_v..(r + 1) * self.dim_v].clone_from_slice(v);
    }
}

/// Matrix of `d: C^ℓ(π) → C^{ℓ+1}(π)` in the canonical bases, built from
///
/// `(dω)(Y_0..Y_ℓ) = Σ_i (−1)^i π(Y_i) ω(..Ŷ_i..) + Σ_{i<j} (−1)^{i+j} ω([Y_i,Y_j], ..Ŷ_i..Ŷ_j..)`.
pub fn ce_differential_matrix(rep: &Representation, degree: usize) -> Result<QMatrix, CeError> {
    let n = rep.algebra.dim();
    if degree > n {
        return Err(CeError::DegreeOutOfRange { degree, dim: n });
    }
    let dv = rep.dim_v;
    let mut d = QMatrix::zeros(rep.cochain_dim(degree + 1), rep.cochain_dim(degree));
    let add_block = |d: &mut QMatrix, row: usize, col: usize, block: &QMatrix, s: &Q| {
        for a in 0..dv {
            for b in 0..dv {
                let x = &block[(a, b)];
                if !x.is_zero() {
                    d[(row * dv + a, col * dv + b)] += x * s;
                }
            }
        }
    };
    let identity = QMatrix::identity(dv);
    for out in MultiIndex::all(n, degree + 1) {
        let row = out.rank();
        let idx = out.indices();
        for (i, &yi) in idx.iter().enumerate() {
            let mut rest = idx.to_vec();
            rest.remove(i);
            let col = MultiIndex::new(n, &rest).expect("subset of a valid index").rank();
            let s = Q::from_integer(Sign::from_parity(i).to_i64().into());
            add_block(&mut d, row, col, &rep.action[yi], &s);
        }
        for p in 0..idx.len() {
            for q in p + 1..idx.len() {
                let bracket = rep.algebra.bracket_basis(idx[p], idx[q]);
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|&(t, _)| t != p && t != q).map(|(_, &x)| x).collect();
                let rest = MultiIndex::new(n, &rest).expect("subset of a valid index");
                for (m, c) in bracket.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    // ω(b_m, rest) = (−1)^{#rest below m} ω(rest ∪ {m})
                    let Some((sign, target)) = crate::exterior::wedge_basis(m, &rest).expect("m < n") else {
                        continue;
                    };
                    let s = Sign::from_parity(p + q) * sign;
                    let coeff = Q::from_integer(s.to_i64().into()) * c;
                    add_block(&mut d, row, target.rank(), &identity, &coeff);
                }
            }
        }
    }
    Ok(d)
}

pub fn ce_differential(rep: &Representation, omega: &AlgCochain) -> Result<AlgCochain, CeError> {
    if omega.algebra_dim != rep.algebra.dim() || omega.dim_v != rep.dim_v {
        return Err(CeError::Mismatch(format!(
            "cochain over (dim 𝔤 = {}, dim V = {}) used with representation over ({}, {})",
            omega.algebra_dim,
            omega.dim_v,
            rep.algebra.dim(),
            rep.dim_v
        )));
    }
    if omega.degree >= rep.algebra.dim() {
        return Err(CeError::DegreeOutOfRange { degree: omega.degree + 1, dim: rep.algebra.dim() });
    }
    let d = ce_differential_matrix(rep, omega.degree)?;
    Ok(AlgCochain {
        algebra_dim: omega.algebra_dim,
        degree: omega.degree + 1,
        dim_v: omega.dim_v,
        values: d.mul_vec(&omega.values),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

/// `dim Z^ℓ`, `dim B^ℓ` and `dim H^ℓ = dim Z^ℓ − dim B^ℓ` by exact ranks.
pub fn cohomology_dim(rep: &Representation, degree: usize) -> Result<CohomologyDims, CeError> {
    let n = rep.algebra.dim();
    if degree > n {
        return Err(CeError::DegreeOutOfRange { degree, dim: n });
    }
    let cochains = rep.cochain_dim(degree);
    let rank_out = if degree < n { ce_differential_matrix(rep, degree)?.rank() } else { 0 };
    let coboundaries = if degree > 0 { ce_differential_matrix(rep, degree - 1)?.rank() } else { 0 };
    let cocycles = cochains - rank_out;
    Ok(CohomologyDims { cochains, cocycles, coboundaries, cohomology: cocycles - coboundaries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn trivial_abelian_differential_vanishes() {
        let rep = Representation::trivial(LieAlgebra::abelian(3), 2);
        for l in 0..3 {
            assert!(ce_differential_matrix(&rep, l).unwrap().is_zero());
        }
        for l in 0..=3 {
            assert_eq!(cohomology_dim(&rep, l).unwrap().cohomology, 2 * binomial(3, l));
        }
    }

    #[test]
    fn heisenberg_dual_z() {
        // dZ*(X ∧ Y) = −Z*([X, Y]) = −1, zero on X∧Z and Y∧Z
        let h = LieAlgebra::heisenberg(1);
        let rep = Representation::trivial(h, 1);
        let mut w = AlgCochain::zero(&rep, 1);
        w.set(&MultiIndex::new(3, &[2]).unwrap(), &[q(1)]);
        let dw = ce_differential(&rep, &w).unwrap();
        assert_eq!(dw.value(&MultiIndex::new(3, &[0, 1]).unwrap()), &[q(-1)]);
        assert_eq!(dw.value(&MultiIndex::new(3, &[0, 2]).unwrap()), &[q(0)]);
        assert_eq!(dw.value(&MultiIndex::new(3, &[1, 2]).unwrap()), &[q(0)]);
    }

    #[test]
    fn heisenberg_cohomology() {
        let h = LieAlgebra::heisenberg(1);
        let trivial = Representation::trivial(h.clone(), 1);
        let d1 = cohomology_dim(&trivial, 1).unwrap();
        assert_eq!(d1, CohomologyDims { cochains: 3, cocycles: 2, coboundaries: 0, cohomology: 2 });
        let adj = Representation::adjoint(h);
        assert_eq!(cohomology_dim(&adj, 1).unwrap().cohomology, 4);
        assert_eq!(cohomology_dim(&adj, 0).unwrap().cohomology, 1);
    }

    #[test]
    fn errors() {
        let rep = Representation::trivial(LieAlgebra::heisenberg(1), 1);
        assert!(matches!(cohomology_dim(&rep, 4), Err(CeError::DegreeOutOfRange { .. })));
        let top = AlgCochain::zero(&rep, 3);
        assert!(matches!(ce_differential(&rep, &top), Err(CeError::DegreeOutOfRange { .. })));
        let other = Representation::adjoint(LieAlgebra::heisenberg(1));
        let w = AlgCochain::zero(&other, 1);
        assert!(matches!(ce_differential(&rep, &w), Err(CeError::Mismatch(_))));
        assert!(AlgCochain::from_values(&rep, 1, vec![q(1)]).is_err());
    }

    #[test]
    fn homomorphism_check_rejects_bad_action() {
        let h = LieAlgebra::heisenberg(1);
        // π(X) = π(Y) = 0 but π(Z) = 1 breaks π([X,Y]) = [π(X), π(Y)]
        let action = vec![QMatrix::zeros(1, 1), QMatrix::zeros(1, 1), QMatrix::identity(1)];
        assert_eq!(Representation::new(h.clone(), 1, action), Err(CeError::NotHomomorphism(0, 1)));
        let ok = Representation::new(h.clone(), 3, (0..3).map(|i| h.ad_basis(i)).collect());
        assert!(ok.is_ok());
        assert!(matches!(
            Representation::new(h, 1, vec![QMatrix::zeros(1, 1)]),
            Err(CeError::ActionCount { .. })
        ));
    }
}
