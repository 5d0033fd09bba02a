//! CPLEX-LP text for the subset used here: Maximize, Subject To, Bounds,
//! Generals, Binaries, End.

use std::fmt::Write as _;

use thiserror::Error;

use super::{MipError, MipModel, RowSense, VarId, VarKind, Variable};

const WRAP_AT: usize = 100;

fn push_terms(out: &mut String, line_start: usize, terms: impl Iterator<Item = (f64, String)>) {
    let mut line_len = out.len() - line_start;
    let mut first = true;
    for (coef, name) in terms {
        let coef = if coef == 0.0 { 0.0 } else { coef };
        let piece = match (first, coef < 0.0) {
            (true, false) => format!(" {coef} {name}"),
            (true, true) => format!(" - {} {name}", -coef),
            (false, false) => format!(" + {coef} {name}"),
            (false, true) => format!(" - {} {name}", -coef),
        };
        if line_len + piece.len() > WRAP_AT && !first {
            out.push_str("\n  ");
            line_len = 2;
        }
        line_len += piece.len();
        out.push_str(&piece);
        first = false;
    }
}

fn bound_line(v: &Variable) -> Option<String> {
    let (lo, up) = (v.lower, v.upper);
    if v.kind == VarKind::Binary && lo == 0.0 && up == 1.0 {
        return None;
    }
    if lo == up {
        return Some(format!(" {} = {lo}", v.name));
    }
    let lo_inf = lo == f64::NEG_INFINITY;
    let up_inf = up == f64::INFINITY;
    Some(match (lo_inf, up_inf) {
        (true, true) => format!(" {} free", v.name),
        (true, false) => format!(" -inf <= {} <= {up}", v.name),
        (false, true) if lo == 0.0 => return None,
        (false, true) => format!(" {} >= {lo}", v.name),
        (false, false) => format!(" {lo} <= {} <= {up}", v.name),
    })
}

/// Renders `model` deterministically. Every section header is written even
/// when the section is empty.
pub fn emit_lp(model: &MipModel) -> Result<String, MipError> {
    model.check()?;
    let vars = model.variables();
    let mut out = String::from("Maximize\n");
    let start = out.len();
    out.push_str(" obj:");
    // a variable in no row is listed with coefficient 0 so that readers
    // do not flag it as unused
    let mut in_row = vec![false; vars.len()];
    for row in model.rows() {
        for &(VarId(i), _) in &row.terms {
            in_row[i] = true;
        }
    }
    let objective: Vec<(f64, String)> = vars
        .iter()
        .zip(&in_row)
        .filter(|(v, &used)| v.objective != 0.0 || !used)
        .map(|(v, _)| v)
        .map(|v| (v.objective, v.name.clone()))
        .collect();
    if objective.is_empty() {
        if let Some(v) = vars.first() {
            let _ = write!(out, " 0 {}", v.name);
        }
    } else {
        push_terms(&mut out, start, objective.into_iter());
    }
    out.push_str("\nSubject To\n");
    for row in model.rows() {
        let start = out.len();
        let _ = write!(out, " {}:", row.name);
        push_terms(
            &mut out,
            start,
            row.terms.iter().map(|&(VarId(i), c)| (c, vars[i].name.clone())),
        );
        let _ = writeln!(out, " {} {}", row.sense, row.rhs);
    }
    out.push_str("Bounds\n");
    for v in vars {
        if let Some(line) = bound_line(v) {
            out.push_str(&line);
            out.push('\n');
        }
    }
    for (header, kind) in [("Generals", VarKind::Integer), ("Binaries", VarKind::Binary)] {
        out.push_str(header);
        out.push('\n');
        let names: Vec<&str> =
            vars.iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        for chunk in names.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    Ok(out)
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct LpParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objective,
    Rows,
    Bounds,
    Generals,
    Binaries,
    End,
}

struct Tok<'a> {
    text: &'a str,
    line: usize,
}

fn err(line: usize, message: impl Into<String>) -> LpParseError {
    LpParseError { line, message: message.into() }
}

fn parse_num(t: &Tok<'_>) -> Result<f64, LpParseError> {
    match t.text {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        s => s.parse().map_err(|_| err(t.line, format!("expected a number, got {s:?}"))),
    }
}

/// Parses linear terms up to (not including) a sense token or the end.
fn parse_terms<'a>(
    toks: &[Tok<'a>],
    pos: &mut usize,
) -> Result<Vec<(f64, &'a str)>, LpParseError> {
    let mut terms = Vec::new();
    while *pos < toks.len() && !matches!(toks[*pos].text, "<=" | ">=" | "=" | "<" | ">" | "=<" | "=>") {
        let mut sign = 1.0;
        while matches!(toks[*pos].text, "+" | "-") {
            if toks[*pos].text == "-" {
                sign = -sign;
            }
            *pos += 1;
            if *pos >= toks.len() {
                return Err(err(toks[*pos - 1].line, "dangling sign"));
            }
        }
        let t = &toks[*pos];
        let (coef, name) = match t.text.parse::<f64>() {
            Ok(c) => {
                *pos += 1;
                let n = toks.get(*pos).ok_or_else(|| err(t.line, "coefficient without variable"))?;
                (c, n.text)
            }
            Err(_) => (1.0, t.text),
        };
        *pos += 1;
        terms.push((sign * coef, name));
    }
    Ok(terms)
}

fn parse_sense(t: &Tok<'_>) -> Result<RowSense, LpParseError> {
    match t.text {
        "<=" | "<" | "=<" => Ok(RowSense::Le),
        ">=" | ">" | "=>" => Ok(RowSense::Ge),
        "=" => Ok(RowSense::Eq),
        s => Err(err(t.line, format!("expected a sense, got {s:?}"))),
    }
}

/// Reads LP text in the subset written by [`emit_lp`]. Role tags are not
/// represented in LP text and come back empty.
pub fn parse_lp(text: &str) -> Result<MipModel, LpParseError> {
    let mut section = Section::None;
    let mut buckets: [Vec<Tok<'_>>; 5] = Default::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('\\').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let lower = content.to_ascii_lowercase();
        let next = match lower.as_str() {
            "maximize" | "maximise" | "max" => Some(Section::Objective),
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "generals" | "general" | "integers" => Some(Section::Generals),
            "binaries" | "binary" => Some(Section::Binaries),
            "end" => Some(Section::End),
            "minimize" | "minimise" | "min" => return Err(err(line, "only maximization is supported")),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let bucket = match section {
            Section::None => return Err(err(line, "text before the objective section")),
            Section::End => return Err(err(line, "text after End")),
            Section::Objective => 0,
            Section::Rows => 1,
            Section::Bounds => 2,
            Section::Generals => 3,
            Section::Binaries => 4,
        };
        for word in content.split_whitespace() {
            // split "name:" labels glued to the first term
            if let Some((label, rest)) = word.split_once(':') {
                buckets[bucket].push(Tok { text: &word[..label.len() + 1], line });
                if !rest.is_empty() {
                    buckets[bucket].push(Tok { text: rest, line });
                }
            } else {
                buckets[bucket].push(Tok { text: word, line });
            }
        }
    }

    let mut kinds: Vec<(String, VarKind)> = Vec::new();
    for (bucket, kind) in [(3, VarKind::Integer), (4, VarKind::Binary)] {
        for t in &buckets[bucket] {
            kinds.push((t.text.to_string(), kind));
        }
    }

    let mut model = MipModel::new();
    let declare = |model: &mut MipModel, name: &str| -> VarId {
        match model.lookup(name) {
            Some(id) => id,
            None => model.add_var(name, VarKind::Continuous, 0.0, f64::INFINITY, 0.0),
        }
    };

    let obj = &buckets[0];
    let mut pos = 0;
    if obj.first().is_some_and(|t| t.text.ends_with(':')) {
        pos = 1;
    }
    for (coef, name) in parse_terms(obj, &mut pos)? {
        let id = declare(&mut model, name);
        let prev = model.var(id).objective;
        model.set_objective(id, prev + coef);
    }
    if pos < obj.len() {
        return Err(err(obj[pos].line, "unexpected token in objective"));
    }

    let rows = &buckets[1];
    let mut pos = 0;
    let mut counter = 0;
    while pos < rows.len() {
        let name = if rows[pos].text.ends_with(':') {
            pos += 1;
            rows[pos - 1].text.trim_end_matches(':').to_string()
        } else {
            counter += 1;
            format!("R{counter}")
        };
        let line = rows.get(pos).map_or(0, |t| t.line);
        let terms = parse_terms(rows, &mut pos)?;
        let sense_tok = rows.get(pos).ok_or_else(|| err(line, format!("row {name} has no sense")))?;
        let sense = parse_sense(sense_tok)?;
        let rhs_tok = rows.get(pos + 1).ok_or_else(|| err(line, format!("row {name} has no rhs")))?;
        let rhs = parse_num(rhs_tok)?;
        pos += 2;
        let ids: Vec<(VarId, f64)> =
            terms.into_iter().map(|(c, n)| (declare(&mut model, n), c)).collect();
        model.add_row(name, ids, sense, rhs);
    }

    for (name, kind) in &kinds {
        let id = declare(&mut model, name);
        let (lo, up) = match kind {
            VarKind::Binary => (0.0, 1.0),
            _ => (model.var(id).lower, model.var(id).upper),
        };
        model.set_bounds(id, lo, up);
        model.set_kind(id, *kind);
    }

    let b = &buckets[2];
    let mut pos = 0;
    while pos < b.len() {
        let line = b[pos].line;
        let group: Vec<&Tok<'_>> = b[pos..].iter().take_while(|t| t.line == line).collect();
        pos += group.len();
        let texts: Vec<&str> = group.iter().map(|t| t.text).collect();
        match texts.as_slice() {
            [name, "free"] => {
                let id = declare(&mut model, name);
                model.set_bounds(id, f64::NEG_INFINITY, f64::INFINITY);
            }
            [_, s1, name, s2, _] if is_le(s1) && is_le(s2) => {
                let id = declare(&mut model, name);
                model.set_bounds(id, parse_num(group[0])?, parse_num(group[4])?);
            }
            [name, _, _] => {
                let id = declare(&mut model, name);
                let v = parse_num(group[2])?;
                let (lo, up) = (model.var(id).lower, model.var(id).upper);
                match parse_sense(group[1])? {
                    RowSense::Eq => model.set_bounds(id, v, v),
                    RowSense::Ge => model.set_bounds(id, v, up),
                    RowSense::Le => model.set_bounds(id, lo, v),
                }
            }
            _ => return Err(err(line, format!("unsupported bound {:?}", texts.join(" ")))),
        }
    }
    Ok(model)
}

fn is_le(s: &str) -> bool {
    matches!(s, "<=" | "<" | "=<")
}

impl MipModel {
    pub(crate) fn set_kind(&mut self, var: VarId, kind: VarKind) {
        self.variables[var.0].kind = kind;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mipir::census;

    fn one_binary() -> MipModel {
        let mut m = MipModel::new();
        let b = m.add_var("b", VarKind::Binary, 0.0, 1.0, 1.0);
        m.add_row("c0", [(b, 1.0)], RowSense::Le, 1.0);
        m
    }

    #[test]
    fn six_section_fixture() {
        let text = emit_lp(&one_binary()).unwrap();
        assert_eq!(
            text,
            "Maximize\n obj: 1 b\nSubject To\n c0: 1 b <= 1\nBounds\nGenerals\nBinaries\n b\nEnd\n"
        );
        assert_eq!(emit_lp(&one_binary()).unwrap(), text);
    }

    #[test]
    fn bounds_and_signs() {
        let mut m = MipModel::new();
        let x = m.add_var("x", VarKind::Binary, 0.0, 0.0, -2.5);
        let u = m.add_var("u", VarKind::Integer, 0.0, 4.0, 0.0);
        let h = m.add_var("h", VarKind::Continuous, -1.0, f64::INFINITY, 0.0);
        let f = m.add_var("f", VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY, 0.0);
        m.add_row("r", [(x, -1.0), (u, 0.5), (h, 0.0), (f, 1e-7)], RowSense::Ge, -3.0);
        let text = emit_lp(&m).unwrap();
        assert!(text.contains(" obj: - 2.5 x\n"));
        assert!(text.contains(" r: - 1 x + 0.5 u + 0 h + 0.0000001 f >= -3\n"));
        assert!(text.contains(" x = 0\n 0 <= u <= 4\n h >= -1\n f free\n"));
        let back = parse_lp(&text).unwrap();
        assert_eq!(emit_lp(&back).unwrap(), text);
        assert_eq!(back.variables()[0].kind, VarKind::Binary);
        assert_eq!(back.var(VarId(0)).upper, 0.0);
    }

    #[test]
    fn long_rows_wrap_and_reparse() {
        let mut m = MipModel::new();
        let ids: Vec<_> = (0..60)
            .map(|i| m.add_var(format!("x_t0_o{i}_d{}", i + 1), VarKind::Binary, 0.0, 1.0, i as f64))
            .collect();
        m.add_row("big", ids.iter().map(|&v| (v, 1.0)), RowSense::Eq, 1.0);
        let text = emit_lp(&m).unwrap();
        assert!(text.lines().all(|l| l.len() <= WRAP_AT + 40));
        let back = parse_lp(&text).unwrap();
        assert_eq!(census(&back), census(&m));
        assert_eq!(back.rows()[0].terms.len(), 60);
    }

    #[test]
    fn illegal_name_is_rejected() {
        let mut m = MipModel::new();
        m.add_var("x y", VarKind::Binary, 0.0, 1.0, 0.0);
        assert!(matches!(emit_lp(&m), Err(MipError::IllegalName(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_lp("Maximize\n obj: 1 b\nSubject To\n c0: 1 b <= x\nEnd\n").unwrap_err();
        assert_eq!(e.line, 4);
    }
}
