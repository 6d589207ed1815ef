use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FourierSeries, TorusError, TranslationAction};
use crate::rational::parse_q;

/// Generator entry: a JSON number, or a rational string such as `"1/2"`
/// which makes the action exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Float(f64),
    Exact(String),
}

/// `{"d": .., "k": .., "generators": [[..]]}`; `generators[j]` is the
/// column `X_{j+1}` of length `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub d: usize,
    pub k: usize,
    pub generators: Vec<Vec<Entry>>,
}

impl ActionFile {
    pub fn into_action(self) -> Result<TranslationAction, TorusError> {
        if self.generators.len() != self.k {
            return Err(TorusError::InvalidAction(format!(
                "k = {} but {} generators given",
                self.k,
                self.generators.len()
            )));
        }
        let all_exact = self.generators.iter().flatten().all(|e| matches!(e, Entry::Exact(_)));
        if all_exact {
            let gens = self
                .generators
                .iter()
                .enumerate()
                .map(|(j, col)| {
                    col.iter()
                        .enumerate()
                        .map(|(i, e)| match e {
                            Entry::Exact(s) => {
                                parse_q(s).map_err(|err| TorusError::Parse(format!("generators[{j}][{i}]: {err}")))
                            }
                            Entry::Float(_) => unreachable!(),
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            return TranslationAction::new_exact(self.d, gens);
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, col)| {
                col.iter()
                    .enumerate()
                    .map(|(i, e)| match e {
                        Entry::Float(x) => Ok(*x),
                        Entry::Exact(s) => parse_q(s)
                            .map(|q| crate::rational::to_f64(&q))
                            .map_err(|err| TorusError::Parse(format!("generators[{j}][{i}]: {err}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        TranslationAction::new(self.d, gens)
    }
}

impl From<&TranslationAction> for ActionFile {
    fn from(act: &TranslationAction) -> Self {
        ActionFile {
            d: act.d(),
            k: act.k(),
            generators: act.generators().iter().map(|c| c.iter().map(|&x| Entry::Float(x)).collect()).collect(),
        }
    }
}

impl TranslationAction {
    pub fn from_json(text: &str) -> Result<Self, TorusError> {
        let file: ActionFile = serde_json::from_str(text).map_err(|e| TorusError::Parse(e.to_string()))?;
        file.into_action()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRecord {
    pub n: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl FourierSeries {
    /// Parses `[{"n": [..], "re": .., "im": ..}]`. The torus dimension is
    /// taken from `d`, or from the first record when `d` is `None`.
    pub fn from_json(text: &str, d: Option<usize>) -> Result<Self, TorusError> {
        let recs: Vec<SeriesRecord> = serde_json::from_str(text).map_err(|e| TorusError::Parse(e.to_string()))?;
        Self::from_records(recs, d)
    }

    pub fn from_records(recs: Vec<SeriesRecord>, d: Option<usize>) -> Result<Self, TorusError> {
        let d = match (d, recs.first()) {
            (Some(d), _) => d,
            (None, Some(r)) => r.n.len(),
            (None, None) => return Err(TorusError::Parse("empty series needs an explicit dimension".into())),
        };
        Self::new(d, recs.into_iter().map(|r| (r.n, Complex64::new(r.re, r.im))))
    }

    pub fn to_records(&self) -> Vec<SeriesRecord> {
        self.iter().map(|(n, c)| SeriesRecord { n: n.clone(), re: c.re, im: c.im }).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("series serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_files() {
        let a = TranslationAction::from_json(r#"{"d": 2, "k": 1, "generators": [["1", "1/2"]]}"#).unwrap();
        assert!(a.is_exact());
        assert_eq!(a, TranslationAction::rational_half());
        let f = TranslationAction::from_json(r#"{"d": 2, "k": 1, "generators": [[1.0, 0.5]]}"#).unwrap();
        assert!(!f.is_exact());
        assert!(f.is_resonant(&[1, -2]));
        let bad = TranslationAction::from_json(r#"{"d": 2, "k": 2, "generators": [[1.0, 0.5]]}"#);
        assert!(matches!(bad, Err(TorusError::InvalidAction(_))));
        assert!(matches!(TranslationAction::from_json("[1"), Err(TorusError::Parse(_))));
        let g = TranslationAction::golden();
        let text = serde_json::to_string(&ActionFile::from(&g)).unwrap();
        assert_eq!(TranslationAction::from_json(&text).unwrap(), g);
    }

    #[test]
    fn series_files() {
        let s = FourierSeries::from_json(r#"[{"n": [1, -2], "re": 1.0, "im": 0.5}, {"n": [0, 0], "re": 2.0}]"#, None)
            .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.mean(), Complex64::new(2.0, 0.0));
        assert_eq!(FourierSeries::from_json(&s.to_json(), Some(2)).unwrap(), s);
        assert!(FourierSeries::from_json("[]", None).is_err());
        assert!(FourierSeries::from_json("[]", Some(3)).unwrap().is_empty());
    }
}
