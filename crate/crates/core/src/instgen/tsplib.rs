//! Reader for the coordinate subset of the TSPLIB format.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TsplibError {
    #[error("no NODE_COORD_SECTION found")]
    MissingSection,
    #[error("line {line}: malformed coordinate row {text:?}")]
    BadRow { line: usize, text: String },
    #[error("line {line}: duplicate node index {index}")]
    DuplicateIndex { line: usize, index: u64 },
    #[error("line {line}: malformed DIMENSION header")]
    BadDimension { line: usize },
    #[error("DIMENSION says {declared} but {found} coordinate rows were read")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("at least 3 coordinate rows are required, found {0}")]
    TooFewNodes(usize),
}

/// Coordinates from a TSPLIB file, in file order. Row 0 becomes the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct TsplibSample {
    pub name: String,
    pub coords: Vec<(f64, f64)>,
}

impl TsplibSample {
    pub fn new(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self, TsplibError> {
        if coords.len() < 3 {
            return Err(TsplibError::TooFewNodes(coords.len()));
        }
        Ok(Self { name: name.into(), coords })
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len()
    }
}

fn header_value(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim(), value.trim()))
}

pub fn parse_tsplib(text: &str) -> Result<TsplibSample, TsplibError> {
    let mut name = String::new();
    let mut dimension = None;
    let mut in_section = false;
    let mut found_section = false;
    let mut coords = Vec::new();
    let mut indexes = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_section {
            if line.starts_with("NODE_COORD_SECTION") {
                in_section = true;
                found_section = true;
                continue;
            }
            if let Some((key, value)) = header_value(line) {
                match key {
                    "NAME" => name = value.trim_end_matches(".tsp").to_string(),
                    "DIMENSION" => {
                        dimension = Some(
                            value
                                .parse::<usize>()
                                .map_err(|_| TsplibError::BadDimension { line: line_no })?,
                        )
                    }
                    _ => {}
                }
            }
            continue;
        }
        if line == "EOF" || line.ends_with("_SECTION") {
            in_section = false;
            if line == "EOF" {
                break;
            }
            continue;
        }
        let bad = || TsplibError::BadRow { line: line_no, text: line.to_string() };
        let mut fields = line.split_whitespace();
        let index: u64 = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        let x: f64 = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        let y: f64 = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        if fields.next().is_some() || !x.is_finite() || !y.is_finite() {
            return Err(bad());
        }
        if !indexes.insert(index) {
            return Err(TsplibError::DuplicateIndex { line: line_no, index });
        }
        coords.push((x, y));
    }

    if !found_section {
        return Err(TsplibError::MissingSection);
    }
    if let Some(declared) = dimension {
        if declared != coords.len() {
            return Err(TsplibError::DimensionMismatch { declared, found: coords.len() });
        }
    }
    TsplibSample::new(name, coords)
}
