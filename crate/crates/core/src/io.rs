//! Polytope file formats.
//!
//! Two encodings are accepted:
//!
//! * JSON: `{"name": "optional", "vertices": [[0,0],[1,0],...]}`
//! * plain text: one point per line, whitespace-separated integers; lines
//!   starting with `#` and blank lines are ignored.
//!
//! The format is detected from the first non-blank character (`{` means JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{LatticePoint, Limits, VPolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<LatticePoint>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &VPolytope, name: Option<String>) -> Self {
        PolytopeFile {
            name,
            vertices: p.vertices().to_vec(),
        }
    }

    pub fn into_polytope(self, limits: Limits) -> Result<VPolytope> {
        VPolytope::with_limits(self.vertices, limits)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope file serializes")
    }
}

pub fn parse_polytope(text: &str) -> Result<PolytopeFile> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()));
    }
    let mut vertices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad integer {t:?}", lineno + 1)))
            })
            .collect::<Result<Vec<i64>>>()?;
        vertices.push(LatticePoint(coords));
    }
    Ok(PolytopeFile {
        name: None,
        vertices,
    })
}

pub fn read_polytope_file(path: &Path) -> Result<PolytopeFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut file = parse_polytope(&text)?;
    if file.name.is_none() {
        file.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_agree() {
        let text = "# a triangle\n0 0\n\n2 1\n1 2\n";
        let json = r#"{"name":"tri","vertices":[[0,0],[2,1],[1,2]]}"#;
        let a = parse_polytope(text).unwrap();
        let b = parse_polytope(json).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(b.name.as_deref(), Some("tri"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_polytope("0 x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_polytope("{\"vertices\": 3}"), Err(Error::Parse(_))));
        let empty = parse_polytope("# nothing\n").unwrap();
        assert_eq!(
            empty.into_polytope(Limits::default()).unwrap_err(),
            Error::EmptyInput
        );
    }
}
