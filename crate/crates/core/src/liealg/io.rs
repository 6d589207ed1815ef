use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LieAlgebra, LieError};
use crate::rational::{format_q, parse_q, Q};

/// On-disk Lie algebra: 0-based indices, rational strings as coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<LieAlgebra, LieError> {
        if self.basis.len() != self.dim {
            return Err(LieError::NameCount { expected: self.dim, got: self.basis.len() });
        }
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (pos, b) in self.brackets.into_iter().enumerate() {
            let mut terms: Vec<(usize, Q)> = Vec::new();
            for (m, c) in b.coeffs {
                let m: usize = m
                    .trim()
                    .parse()
                    .map_err(|_| LieError::Parse(format!("brackets[{pos}].coeffs: key `{m}` is not an index")))?;
                let c = parse_q(&c).map_err(|e| LieError::Parse(format!("brackets[{pos}].coeffs[{m}]: {e}")))?;
                terms.push((m, c));
            }
            entries.push((b.i, b.j, terms));
        }
        LieAlgebra::new(self.basis, entries)
    }
}

impl From<&LieAlgebra> for AlgebraFile {
    fn from(g: &LieAlgebra) -> Self {
        let brackets = g
            .nonzero_brackets()
            .map(|(i, j, v)| BracketEntry {
                i,
                j,
                coeffs: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.to_string(), format_q(c)))
                    .collect(),
            })
            .collect();
        AlgebraFile { dim: g.dim(), basis: g.names().to_vec(), brackets }
    }
}

impl LieAlgebra {
    /// Parses the JSON algebra format; errors carry line/column or field paths.
    pub fn from_json(text: &str) -> Result<LieAlgebra, LieError> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| LieError::Parse(e.to_string()))?;
        file.into_algebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AlgebraFile::from(self)).expect("algebra serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_completion() {
        let g = LieAlgebra::free_nilpotent_2_3();
        assert_eq!(LieAlgebra::from_json(&g.to_json()).unwrap(), g);

        let text = r#"{"dim": 3, "basis": ["X","Y","Z"],
            "brackets": [{"i": 1, "j": 0, "coeffs": {"2": "-1"}}]}"#;
        assert_eq!(LieAlgebra::from_json(text).unwrap(), LieAlgebra::heisenberg(1).clone_named(["X", "Y", "Z"]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(LieAlgebra::from_json("{"), Err(LieError::Parse(_))));
        let bad_coeff = r#"{"dim": 2, "basis": ["A","B"], "brackets": [{"i":0,"j":1,"coeffs":{"0":"x/2"}}]}"#;
        let err = LieAlgebra::from_json(bad_coeff).unwrap_err();
        assert!(err.to_string().contains("brackets[0]"), "{err}");
        let count = r#"{"dim": 3, "basis": ["A","B"]}"#;
        assert_eq!(LieAlgebra::from_json(count), Err(LieError::NameCount { expected: 3, got: 2 }));
    }

    impl LieAlgebra {
        fn clone_named<const N: usize>(&self, names: [&str; N]) -> LieAlgebra {
            let mut g = self.clone();
            g.names = names.iter().map(|s| s.to_string()).collect();
            g
        }
    }
}
