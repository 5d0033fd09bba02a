use thiserror::Error;

use super::MipModel;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("solution line {line}: {message}")]
pub struct SolutionParseError {
    pub line: usize,
    pub message: String,
}

/// Dense assignment in model variable order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSolution {
    pub values: Vec<f64>,
    /// Names in the text that the model does not declare.
    pub unknown: Vec<String>,
}

impl ParsedSolution {
    pub fn get(&self, model: &MipModel, name: &str) -> Option<f64> {
        model.lookup(name).map(|id| self.values[id.0])
    }
}

/// Reads `name value` pairs, one per line. Blank lines and `#` comments are
/// skipped, unknown names are collected rather than rejected, and variables
/// that never appear are 0.
pub fn parse_solution(text: &str, model: &MipModel) -> Result<ParsedSolution, SolutionParseError> {
    let mut values = vec![0.0; model.num_vars()];
    let mut unknown = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(SolutionParseError {
                line: i + 1,
                message: format!("expected `name value`, got {line:?}"),
            });
        };
        let value: f64 = value.parse().map_err(|_| SolutionParseError {
            line: i + 1,
            message: format!("bad value {value:?} for {name}"),
        })?;
        if !value.is_finite() {
            return Err(SolutionParseError {
                line: i + 1,
                message: format!("non-finite value for {name}"),
            });
        }
        match model.lookup(name) {
            Some(id) => values[id.0] = value,
            None => unknown.push(name.to_string()),
        }
    }
    if !unknown.is_empty() {
        log::warn!("solution mentions {} undeclared variable(s), e.g. {}", unknown.len(), unknown[0]);
    }
    Ok(ParsedSolution { values, unknown })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mipir::VarKind;

    fn model() -> MipModel {
        let mut m = MipModel::new();
        m.add_var("x_t0_o0_d1", VarKind::Binary, 0.0, 1.0, 0.0);
        m.add_var("u_t0_v1", VarKind::Integer, 0.0, 3.0, 0.0);
        m
    }

    #[test]
    fn single_pair() {
        let m = model();
        let s = parse_solution("x_t0_o0_d1 1\n", &m).unwrap();
        assert_eq!(s.values, vec![1.0, 0.0]);
        assert_eq!(s.get(&m, "x_t0_o0_d1"), Some(1.0));
    }

    #[test]
    fn empty_text_is_all_zero() {
        assert_eq!(parse_solution("", &model()).unwrap().values, vec![0.0, 0.0]);
    }

    #[test]
    fn unknown_names_and_comments() {
        let s = parse_solution("# status: Optimal\nzz 3\n\nu_t0_v1 2 # trailing\n", &model()).unwrap();
        assert_eq!(s.values, vec![0.0, 2.0]);
        assert_eq!(s.unknown, vec!["zz".to_string()]);
    }

    #[test]
    fn malformed_line_number() {
        let e = parse_solution("x_t0_o0_d1 1\nu_t0_v1\n", &model()).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_solution("u_t0_v1 two\n", &model()).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
