use num_traits::One;

use super::LieAlgebra;
use crate::rational::Q;

impl LieAlgebra {
    /// 𝔥^g with basis `X_1..X_g, Y_1..Y_g, Z` and `[X_i, Y_i] = Z`.
    pub fn heisenberg(g: usize) -> LieAlgebra {
        assert!(g >= 1, "Heisenberg algebra needs g >= 1");
        let mut names: Vec<String> = (1..=g).map(|i| format!("X{i}")).collect();
        names.extend((1..=g).map(|i| format!("Y{i}")));
        names.push("Z".into());
        let z = 2 * g;
        let entries = (0..g).map(|i| (i, g + i, vec![(z, Q::one())]));
        LieAlgebra::new(names, entries).expect("valid Heisenberg data")
    }

    /// Model filiform 𝔣^g with basis `Y, X_1..X_g` and `[Y, X_i] = X_{i+1}`.
    pub fn filiform(g: usize) -> LieAlgebra {
        assert!(g >= 1, "filiform algebra needs g >= 1");
        let mut names = vec!["Y".to_string()];
        names.extend((1..=g).map(|i| format!("X{i}")));
        let entries = (1..g).map(|i| (0, i, vec![(i + 1, Q::one())]));
        LieAlgebra::new(names, entries).expect("valid filiform data")
    }

    /// 𝔤_{2,3}, basis `X1, X2, Z, Y1, Y2` with `[X1,X2] = Z`, `[Z,X1] = Y1`, `[Z,X2] = Y2`.
    pub fn free_nilpotent_2_3() -> LieAlgebra {
        let one = Q::one;
        LieAlgebra::new(
            ["X1", "X2", "Z", "Y1", "Y2"],
            [(0, 1, vec![(2, one())]), (2, 0, vec![(3, one())]), (2, 1, vec![(4, one())])],
        )
        .expect("valid g23 data")
    }

    pub fn abelian(n: usize) -> LieAlgebra {
        LieAlgebra::new((1..=n).map(|i| format!("E{i}")), []).expect("valid abelian data")
    }

    /// Direct product `self × other`; the basis of `other` follows `self`'s.
    pub fn product(&self, other: &LieAlgebra) -> LieAlgebra {
        let off = self.dim();
        let mut names: Vec<String> = self.names.clone();
        for n in other.names() {
            let name = if names.contains(n) { format!("{n}'") } else { n.clone() };
            names.push(name);
        }
        let shift = |v: &[Q], by: usize| -> Vec<(usize, Q)> {
            v.iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)).map(|(m, c)| (m + by, c.clone())).collect()
        };
        let mut entries: Vec<_> =
            self.nonzero_brackets().map(|(i, j, v)| (i, j, shift(v, 0))).collect();
        entries.extend(other.nonzero_brackets().map(|(i, j, v)| (i + off, j + off, shift(v, off))));
        LieAlgebra::new(names, entries).expect("product of valid algebras")
    }

    /// Reorders the basis: new basis element `i` is old element `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> LieAlgebra {
        let n = self.dim();
        assert_eq!(perm.len(), n, "permutation length");
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        assert!(inverse.iter().all(|&i| i < n), "not a permutation");
        let names: Vec<String> = perm.iter().map(|&old| self.names[old].clone()).collect();
        let entries = self.nonzero_brackets().map(|(i, j, v)| {
            let terms = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(m, c)| (inverse[m], c.clone()))
                .collect();
            (inverse[i], inverse[j], terms)
        });
        LieAlgebra::new(names, entries).expect("permutation of a valid algebra")
    }
}
