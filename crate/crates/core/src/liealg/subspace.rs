use num_traits::Zero;

use crate::rational::{QMatrix, Q};

/// Linear subspace of ℚ^n, stored as the nonzero rows of its reduced
/// row-echelon form. Two subspaces are equal iff their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        let id = QMatrix::identity(ambient);
        Subspace { ambient, basis: (0..ambient).map(|r| id.row(r).to_vec()).collect() }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let rref = QMatrix::from_rows(vectors).rref();
        let basis = (0..rref.rank()).map(|r| rref.matrix.row(r).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in [`Subspace::basis`], if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if v.len() != self.ambient {
            return None;
        }
        if self.basis.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        QMatrix::from_columns(&self.basis).solve(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn span_is_canonical() {
        let a = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::span(3, &[vec![q(2), q(0), q(0)], vec![q(3), q(5), q(0)], vec![q(1), q(0), q(0)]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&[q(7), q(-1), q(0)]));
        assert!(!a.contains(&[q(0), q(0), q(1)]));
        assert_eq!(Subspace::whole(3).dim(), 3);
        assert!(Subspace::whole(3).contains_subspace(&a));
        assert_eq!(a.sum(&Subspace::span(3, &[vec![q(0), q(0), q(4)]])).dim(), 3);
        assert!(Subspace::zero(2).contains(&[q(0), q(0)]));
        assert!(!Subspace::zero(2).contains(&[q(1), q(0)]));
    }
}
