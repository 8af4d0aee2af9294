use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cayley::Generator;
use crate::circle::{LiftedMap, ProjectiveMap};
use crate::error::{Error, Result};
use crate::zoo::{self, Expected, GroupSpec};

/// On-disk group definition; matrices are row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub name: String,
    #[serde(default = "one")]
    pub k: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub matrix: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<u32>,
}

fn one() -> u32 {
    1
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ParseError {
        location: location.into(),
        message: message.into(),
    }
}

impl GroupFile {
    pub fn into_spec(self) -> Result<GroupSpec> {
        if self.k == 0 {
            return Err(parse_error("k", "cover degree must be positive"));
        }
        if self.generators.is_empty() {
            return Err(parse_error("generators", "at least one generator is required"));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.into_iter().enumerate() {
            let base = ProjectiveMap::normalize(g.matrix)
                .map_err(|e| parse_error(format!("generators[{i}].matrix"), e.to_string()))?;
            let branch = g.branch.unwrap_or(0);
            if self.k == 1 && branch != 0 {
                return Err(parse_error(format!("generators[{i}].branch"), "branch requires k > 1"));
            }
            let element = LiftedMap::new(base, self.k, branch)?;
            gens.push(Generator { name: g.name, element });
        }
        GroupSpec::new(&self.name, gens, self.relators, self.expected.unwrap_or_default())
    }

    /// Primary generators of a spec (one of each inverse pair).
    pub fn from_spec(spec: &GroupSpec) -> Self {
        let s = spec.generators();
        GroupFile {
            name: spec.name.clone(),
            k: spec.k,
            generators: spec
                .primary_indices()
                .into_iter()
                .map(|i| GeneratorEntry {
                    name: s.name(i).to_string(),
                    matrix: s.element(i).base().entries(),
                    branch: (spec.k > 1).then(|| s.element(i).branch()),
                })
                .collect(),
            expected: Some(spec.expected.clone()).filter(|e| *e != Expected::default()),
            relators: spec.relators.clone(),
        }
    }
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let file: GroupFile = serde_json::from_str(text)
        .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    file.into_spec()
}

/// `zoo:REF` names a zoo constructor; anything else is a JSON file path.
pub fn load_group(source: &str) -> Result<GroupSpec> {
    if let Some(r) = source.strip_prefix("zoo:") {
        return zoo::from_ref(r);
    }
    let text = std::fs::read_to_string(Path::new(source))?;
    parse_group(&text)
}

pub fn export_group(spec: &GroupSpec) -> String {
    serde_json::to_string_pretty(&GroupFile::from_spec(spec)).expect("group files serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_doubles_generators() {
        let text = r#"{"name": "pair", "generators": [
            {"name": "a", "matrix": [2, 0, 0, 0.5]},
            {"name": "b", "matrix": [1, 1, 0, 1]}]}"#;
        let spec = parse_group(text).unwrap();
        assert_eq!(spec.generators().len(), 4);
        assert_eq!(spec.k, 1);
    }

    #[test]
    fn singular_matrix_is_a_parse_error() {
        let text = r#"{"name": "bad", "generators": [{"name": "a", "matrix": [1, 2, 2, 4]}]}"#;
        match parse_group(text).unwrap_err() {
            Error::ParseError { location, .. } => assert_eq!(location, "generators[0].matrix"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = parse_group("{\n\"name\": 3\n}").unwrap_err();
        assert!(matches!(err, Error::ParseError { ref location, .. } if location.starts_with("line 2")));
        let err = parse_group(r#"{"name": "x", "generators": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
    }

    #[test]
    fn zoo_groups_round_trip() {
        for r in ["triangle:2,3,7", "lift:2:surface:2", "modular", "affine"] {
            let spec = load_group(&format!("zoo:{r}")).unwrap();
            let back = parse_group(&export_group(&spec)).unwrap();
            assert_eq!(back.generators().len(), spec.generators().len(), "{r}");
            for (a, b) in back.generators().elements().iter().zip(spec.generators().elements()) {
                assert!(a.approx_eq(&b, 1e-12));
            }
            assert_eq!(back.expected, spec.expected);
        }
    }

    #[test]
    fn relator_oracle_runs_on_load() {
        let text = r#"{"name": "c", "generators": [{"name": "r", "matrix": [0, -1, 1, 0]}],
            "relators": ["rrr"]}"#;
        assert!(matches!(parse_group(text).unwrap_err(), Error::OracleFailed(_)));
    }
}
