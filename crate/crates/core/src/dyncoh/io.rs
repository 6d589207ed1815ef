use serde::{Deserialize, Serialize};

use super::{Cochain, DynError};
use crate::exterior::MultiIndex;
use crate::torus::{FourierSeries, SeriesRecord, TranslationAction};

/// `{"k": .., "degree": .., "components": [{"index": [..], "series": [..]}]}`
/// with 0-based, increasing indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub k: usize,
    pub degree: usize,
    #[serde(default)]
    pub components: Vec<CochainComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainComponent {
    pub index: Vec<usize>,
    pub series: Vec<SeriesRecord>,
}

impl CochainFile {
    pub fn into_cochain(self, action: &TranslationAction) -> Result<Cochain, DynError> {
        if self.k != action.k() {
            return Err(DynError::Mismatch(format!("cochain file has k = {}, action has k = {}", self.k, action.k())));
        }
        let mut comps = Vec::with_capacity(self.components.len());
        for (pos, c) in self.components.into_iter().enumerate() {
            let index = MultiIndex::new(self.k, &c.index)
                .map_err(|e| DynError::Parse(format!("components[{pos}].index: {e}")))?;
            if index.degree() != self.degree {
                return Err(DynError::Parse(format!(
                    "components[{pos}].index has {} entries, expected degree {}",
                    index.degree(),
                    self.degree
                )));
            }
            let series = FourierSeries::from_records(c.series, Some(action.d()))
                .map_err(|e| DynError::Parse(format!("components[{pos}].series: {e}")))?;
            comps.push((index, series));
        }
        Cochain::new(action, self.degree, comps)
    }
}

impl From<&Cochain> for CochainFile {
    fn from(w: &Cochain) -> Self {
        CochainFile {
            k: w.k(),
            degree: w.degree(),
            components: w
                .components()
                .map(|(i, u)| CochainComponent { index: i.indices().to_vec(), series: u.to_records() })
                .collect(),
        }
    }
}

impl Cochain {
    pub fn from_json(text: &str, action: &TranslationAction) -> Result<Self, DynError> {
        let file: CochainFile = serde_json::from_str(text).map_err(|e| DynError::Parse(e.to_string()))?;
        file.into_cochain(action)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CochainFile::from(self)).expect("cochain serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let act = TranslationAction::golden_2d();
        let w = Cochain::random(&act, 1, 2, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let back = Cochain::from_json(&w.to_json(), &act).unwrap();
        assert!(back.sub(&w).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn errors() {
        let act = TranslationAction::golden_2d();
        let bad_index = r#"{"k": 2, "degree": 1, "components": [{"index": [2], "series": []}]}"#;
        let err = Cochain::from_json(bad_index, &act).unwrap_err();
        assert!(err.to_string().contains("components[0].index"), "{err}");
        let bad_degree = r#"{"k": 2, "degree": 1, "components": [{"index": [0, 1], "series": []}]}"#;
        assert!(matches!(Cochain::from_json(bad_degree, &act), Err(DynError::Parse(_))));
        let bad_k = r#"{"k": 3, "degree": 1}"#;
        assert!(matches!(Cochain::from_json(bad_k, &act), Err(DynError::Mismatch(_))));
        let bad_series = r#"{"k": 2, "degree": 0, "components": [{"index": [], "series": [{"n": [1], "re": 1.0}]}]}"#;
        assert!(matches!(Cochain::from_json(bad_series, &act), Err(DynError::Parse(_))));
    }
}
