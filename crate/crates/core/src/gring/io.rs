use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BundleData, FiberMonomial, GradedSection, GringError};
use crate::exactpoly::{BinForm, FieldSpec, PolyError};

/// On-disk form of a pair of surface equations.
///
/// ```json
/// { "p_g": 2, "theta": 0, "field": {"kind": "prime_field", "p": 101},
///   "Q": {"x0^2": "1", "y": "t0^2 - t1^2"}, "G": {"z^2": "1", ...} }
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationFile {
    pub p_g: i64,
    pub theta: i64,
    pub field: FieldSpec,
    #[serde(rename = "Q")]
    pub q: BTreeMap<String, String>,
    #[serde(rename = "G")]
    pub g: BTreeMap<String, String>,
}

impl EquationFile {
    pub fn from_sections(q: &GradedSection, g: &GradedSection) -> Self {
        let b = q.bundle();
        EquationFile { p_g: b.p_g() as i64, theta: b.theta() as i64, field: q.field(), q: to_map(q), g: to_map(g) }
    }

    /// Parses and validates both sections. Errors name the slot (`Q[x1^2]`)
    /// and, for syntax errors, the byte offset inside that coefficient.
    pub fn to_sections(&self) -> Result<(BundleData, GradedSection, GradedSection), GringError> {
        let bundle = BundleData::new(self.p_g, self.theta)?;
        let field = self.field.checked()?;
        let q = from_map(bundle, field, "Q", 2, bundle.quadric_twist(), &self.q)?;
        let g = from_map(bundle, field, "G", 6, bundle.sextic_twist(), &self.g)?;
        Ok((bundle, q, g))
    }
}

fn to_map(s: &GradedSection) -> BTreeMap<String, String> {
    s.terms().map(|(m, c)| (m.to_string(), c.to_string())).collect()
}

fn from_map(
    bundle: BundleData,
    field: FieldSpec,
    name: &str,
    d: u32,
    m: i64,
    map: &BTreeMap<String, String>,
) -> Result<GradedSection, GringError> {
    let mut terms = Vec::with_capacity(map.len());
    for (key, value) in map {
        let mono: FiberMonomial =
            key.parse().map_err(|source| GringError::Parse { slot: format!("{name} monomial `{key}`"), source })?;
        let c = BinForm::parse(field, value).map_err(|e| match e {
            PolyError::Parse(source) => GringError::Parse { slot: format!("{name}[{key}]"), source },
            other => GringError::Slot { slot: format!("{name}[{key}]"), source: Box::new(other.into()) },
        })?;
        terms.push((mono, c));
    }
    GradedSection::from_terms(bundle, field, d, m, terms)
        .map_err(|e| GringError::Slot { slot: name.to_string(), source: Box::new(e) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse::ParseError;

    fn sample() -> EquationFile {
        let json = r#"{
            "p_g": 2, "theta": 0, "field": {"kind": "rationals"},
            "Q": {"x0^2": "1", "x1^2": "t0^4 - 1/2*t1^4", "y": "t0*t1"},
            "G": {"z^2": "1", "y^3": "3", "x1^6": "t1^6"}
        }"#;
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn round_trip() {
        let file = sample();
        let (_, q, g) = file.to_sections().unwrap();
        let back = EquationFile::from_sections(&q, &g);
        assert_eq!(back, file);
        let text = serde_json::to_string(&back).unwrap();
        let again: EquationFile = serde_json::from_str(&text).unwrap();
        assert_eq!(again.to_sections().unwrap().1, q);
    }

    #[test]
    fn unknown_variable_is_reported_with_slot() {
        let mut file = sample();
        file.g.insert("y^3".into(), "t2^3".into());
        match file.to_sections() {
            Err(GringError::Parse { slot, source: ParseError::UnknownVariable { name, offset } }) => {
                assert_eq!(slot, "G[y^3]");
                assert_eq!((name.as_str(), offset), ("t2", 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_degree_is_reported() {
        let mut file = sample();
        file.q.insert("y".into(), "t0".into());
        let err = file.to_sections().unwrap_err();
        assert!(err.to_string().contains("expected 2"), "{err}");
    }
}
