//! The JSON structure-file format.
//!
//! ```json
//! {"kind": "lattice", "elements": ["0", "a", "1"], "leq": [["0", "a"], ["a", "1"]]}
//! {"kind": "fss", "lattice": {"elements": [...], "leq": [...]}, "F": {"0": "0", "a": "1", "1": "1"}}
//! {"kind": "frame", "nodes": ["i", "k"], "rel": [["i", "k"], ["k", "k"]]}
//! ```
//!
//! `leq` may list any generating pairs; the order is their reflexive-transitive
//! closure. Written files list the covering pairs. Element order in
//! `elements` (and node order in `nodes`) is the canonical order.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::frames::{make_frame, Frame};
use crate::lattice::{validate_lattice, SupLattice};
use crate::morphisms::FSupLattice;

/// The raw contents of a structure file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StructureFile {
    Lattice(LatticeSpec),
    Fss {
        lattice: LatticeSpec,
        #[serde(rename = "F")]
        f: Map<String, Value>,
    },
    Frame {
        nodes: Vec<String>,
        rel: Vec<(String, String)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
}

/// A validated structure.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Lattice(SupLattice),
    Fss(FSupLattice),
    Frame(Frame),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Fss(_) => "fss",
            Structure::Frame(_) => "frame",
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Structure::Lattice(l) => format!("lattice with {} elements", l.len()),
            Structure::Fss(h) => format!("fss with {} elements", h.lattice().len()),
            Structure::Frame(j) => format!("frame with {} nodes and {} related pairs", j.len(), j.rel().len()),
        }
    }
}

/// Why a structure file was rejected, with where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    Io { path: String, message: String },
    Parse { line: usize, column: usize, message: String },
    Invalid { location: String, message: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io { path, message } => write!(f, "{path}: {message}"),
            FormatError::Parse { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            FormatError::Invalid { location, message } => write!(f, "{location}: {message}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn invalid(location: impl Into<String>, e: impl fmt::Display) -> FormatError {
    FormatError::Invalid {
        location: location.into(),
        message: e.to_string(),
    }
}

/// Index of the first pair mentioning `label`, for locating errors.
fn pair_mentioning(pairs: &[(String, String)], label: &str) -> Option<usize> {
    pairs.iter().position(|(a, b)| a == label || b == label)
}

fn build_lattice(spec: &LatticeSpec, prefix: &str) -> Result<SupLattice, FormatError> {
    validate_lattice(&spec.elements, &spec.leq).map_err(|e| {
        let location = match &e {
            Error::EmptyLattice | Error::DuplicateLabel(_) => format!("{prefix}elements"),
            Error::UnknownLabel(l) => match pair_mentioning(&spec.leq, l) {
                Some(k) => format!("{prefix}leq[{k}]"),
                None => format!("{prefix}leq"),
            },
            _ => format!("{prefix}leq"),
        };
        invalid(location, e)
    })
}

fn build_fss(lattice: &LatticeSpec, f: &Map<String, Value>) -> Result<FSupLattice, FormatError> {
    let g = build_lattice(lattice, "lattice.")?;
    for key in f.keys() {
        if g.element(key).is_none() {
            return Err(invalid(format!("F.{key}"), Error::UnknownLabel(key.clone())));
        }
    }
    let mut op = Vec::with_capacity(g.len());
    for x in g.elements() {
        let label = g.label(x);
        let value = f
            .get(label)
            .ok_or_else(|| invalid("F", format!("no value given for `{label}`")))?;
        let value = value
            .as_str()
            .ok_or_else(|| invalid(format!("F.{label}"), "value must be an element label"))?;
        op.push(g.require(value).map_err(|e| invalid(format!("F.{label}"), e))?);
    }
    FSupLattice::new(&g, op).map_err(|e| invalid("F", e))
}

fn build_frame(nodes: &[String], rel: &[(String, String)]) -> Result<Frame, FormatError> {
    make_frame(nodes, rel).map_err(|e| {
        let location = match &e {
            Error::UnknownNode(l) => match pair_mentioning(rel, l) {
                Some(k) => format!("rel[{k}]"),
                None => "rel".into(),
            },
            _ => "nodes".into(),
        };
        invalid(location, e)
    })
}

/// Parses and validates a structure file's text.
pub fn parse_structure(text: &str) -> Result<Structure, FormatError> {
    let file: StructureFile = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match &file {
        StructureFile::Lattice(spec) => build_lattice(spec, "").map(Structure::Lattice),
        StructureFile::Fss { lattice, f } => build_fss(lattice, f).map(Structure::Fss),
        StructureFile::Frame { nodes, rel } => build_frame(nodes, rel).map(Structure::Frame),
    }
}

pub fn read_structure(path: &Path) -> Result<Structure, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_structure(&text)
}

fn lattice_spec(l: &SupLattice) -> LatticeSpec {
    LatticeSpec {
        elements: l.labels().to_vec(),
        leq: l
            .covers()
            .into_iter()
            .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
            .collect(),
    }
}

/// The file describing a structure; `leq` lists covering pairs.
pub fn structure_file(s: &Structure) -> StructureFile {
    match s {
        Structure::Lattice(l) => StructureFile::Lattice(lattice_spec(l)),
        Structure::Fss(h) => {
            let g = h.lattice();
            let f = g
                .elements()
                .map(|x| (g.label(x).to_string(), Value::String(g.label(h.f(x)).to_string())))
                .collect();
            StructureFile::Fss {
                lattice: lattice_spec(g),
                f,
            }
        }
        Structure::Frame(j) => StructureFile::Frame {
            nodes: j.nodes().to_vec(),
            rel: j.rel_labels(),
        },
    }
}

/// Canonical JSON text for a structure, ending with a newline.
pub fn render_structure(s: &Structure) -> String {
    let mut text = serde_json::to_string_pretty(&structure_file(s)).expect("structure files serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let text = r#"{"kind": "lattice", "elements": ["0", "a", "b", "c", "1"],
            "leq": [["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#;
        let s = parse_structure(text).unwrap();
        assert_eq!(parse_structure(&render_structure(&s)).unwrap(), s);
    }

    #[test]
    fn fss_and_frame_round_trip() {
        let fss = r#"{"kind": "fss", "lattice": {"elements": ["0", "1"], "leq": [["0", "1"]]},
            "F": {"0": "0", "1": "1"}}"#;
        let frame = r#"{"kind": "frame", "nodes": ["i", "k"], "rel": [["i", "k"]]}"#;
        for text in [fss, frame] {
            let s = parse_structure(text).unwrap();
            assert_eq!(parse_structure(&render_structure(&s)).unwrap(), s);
        }
    }

    #[test]
    fn diagnostics_are_located() {
        let cycle = r#"{"kind": "lattice", "elements": ["a", "b"], "leq": [["a","b"],["b","a"]]}"#;
        assert!(matches!(parse_structure(cycle), Err(FormatError::Invalid { location, .. }) if location == "leq"));
        let unknown = r#"{"kind": "frame", "nodes": ["i"], "rel": [["i","i"],["i","z"]]}"#;
        assert!(matches!(parse_structure(unknown), Err(FormatError::Invalid { location, .. }) if location == "rel[1]"));
        let syntax = "{\"kind\": \"lattice\",\n \"elements\": [}";
        assert!(matches!(parse_structure(syntax), Err(FormatError::Parse { line: 2, .. })));
    }

    #[test]
    fn operator_breaking_joins_names_the_pair() {
        // The 2×2 square with F sending one atom up to the top.
        let text = r#"{"kind": "fss",
            "lattice": {"elements": ["0", "p", "q", "1"], "leq": [["0","p"],["0","q"],["p","1"],["q","1"]]},
            "F": {"0": "0", "p": "1", "q": "0", "1": "p"}}"#;
        match parse_structure(text) {
            Err(FormatError::Invalid { location, message }) => {
                assert_eq!(location, "F");
                assert!(message.contains("join"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
