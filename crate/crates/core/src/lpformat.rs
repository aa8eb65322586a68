//! LP-text and fixed-column MPS writers, with readers for the same dialect.
//!
//! Numbers are written with Rust's shortest round-trip float formatting,
//! so reading a written model back reproduces every coefficient exactly.
//! Names longer than eight characters overflow the fixed MPS fields; the
//! reader therefore splits MPS lines on whitespace.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;

use thiserror::Error;

use crate::model::{Formulation, LpModel, ModelError, Relation, Sense, VarKind, VarRole};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn parse_num(token: &str, line: usize) -> Result<f64, FormatError> {
    match token.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => token
            .parse()
            .map_err(|_| parse_err(line, format!("expected a number, found {token:?}"))),
    }
}

const LINE_WIDTH: usize = 78;

/// Append `- 2 x` style terms, wrapping long lines.
fn push_terms(out: &mut String, lead: &str, terms: &[(usize, f64)], model: &LpModel, tail: &str) {
    let mut line = lead.to_string();
    let mut first = true;
    let mut pieces: Vec<String> = terms
        .iter()
        .map(|&(j, a)| {
            let name = &model.variables[j].name;
            let sign = if a < 0.0 { "-" } else { "+" };
            let mag = a.abs();
            let body = if mag == 1.0 { name.clone() } else { format!("{} {name}", num(mag)) };
            let piece = if first && a >= 0.0 {
                body
            } else {
                format!("{sign} {body}")
            };
            first = false;
            piece
        })
        .collect();
    if pieces.is_empty() {
        // Keep the row well formed with an explicit zero term.
        pieces.push(format!("0 {}", model.variables.first().map_or("x", |v| v.name.as_str())));
    }
    if !tail.is_empty() {
        pieces.push(tail.to_string());
    }
    for piece in pieces {
        if line.len() + 1 + piece.len() > LINE_WIDTH && line.trim().len() > lead.trim().len() {
            out.push_str(&line);
            out.push('\n');
            line = "   ".to_string();
        }
        line.push(' ');
        line.push_str(&piece);
    }
    out.push_str(&line);
    out.push('\n');
}

fn default_bounds(kind: VarKind) -> (f64, f64) {
    match kind {
        VarKind::Binary => (0.0, 1.0),
        _ => (0.0, f64::INFINITY),
    }
}

/// CPLEX-style LP text.
pub fn write_lp(model: &LpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {} ({})", model.name, model.formulation.tag());
    out.push_str(match model.sense {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    push_terms(&mut out, " obj:", &model.objective, model, "");
    out.push_str("Subject To\n");
    for c in &model.constraints {
        let tail = format!("{} {}", c.relation, num(c.rhs));
        push_terms(&mut out, &format!(" {}:", c.name), &c.terms, model, &tail);
    }
    let bounds: Vec<String> = model
        .variables
        .iter()
        .filter(|v| (v.lower, v.upper) != default_bounds(v.kind))
        .map(|v| match (v.lower, v.upper) {
            (l, h) if l == f64::NEG_INFINITY && h == f64::INFINITY => format!(" {} free", v.name),
            (l, h) if h == f64::INFINITY => format!(" {} >= {}", v.name, num(l)),
            (l, h) => format!(" {} <= {} <= {}", num(l), v.name, num(h)),
        })
        .collect();
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        for b in bounds {
            out.push_str(&b);
            out.push('\n');
        }
    }
    for (kind, header) in [(VarKind::Integer, "Generals"), (VarKind::Binary, "Binaries")] {
        let names: Vec<&str> = model
            .variables
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        if names.is_empty() {
            continue;
        }
        out.push_str(header);
        out.push('\n');
        let mut line = String::new();
        for name in names {
            if !line.is_empty() && line.len() + 1 + name.len() > LINE_WIDTH {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            line.push(' ');
            line.push_str(name);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

/// Variables in order of first appearance, with kinds and bounds filled in
/// once every section has been read.
#[derive(Default)]
struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
    bounds: HashMap<usize, (f64, f64)>,
    kinds: HashMap<usize, VarKind>,
}

impl VarTable {
    fn get(&mut self, name: &str) -> usize {
        if let Some(&j) = self.index.get(name) {
            return j;
        }
        let j = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), j);
        j
    }

    fn bound(&mut self, j: usize, lo: Option<f64>, hi: Option<f64>) {
        let entry = self.bounds.entry(j).or_insert((f64::NAN, f64::NAN));
        if let Some(l) = lo {
            entry.0 = l;
        }
        if let Some(h) = hi {
            entry.1 = h;
        }
    }

    fn into_model(self, name: String, sense: Sense) -> Result<LpModel, FormatError> {
        let mut model = LpModel::new(name, Formulation::Custom, sense);
        for (j, name) in self.names.into_iter().enumerate() {
            let kind = self.kinds.get(&j).copied().unwrap_or(VarKind::Continuous);
            let (dl, dh) = default_bounds(kind);
            let (l, h) = self.bounds.get(&j).copied().unwrap_or((f64::NAN, f64::NAN));
            let lo = if l.is_nan() { dl } else { l };
            let hi = if h.is_nan() { dh } else { h };
            model.add_variable(name, kind, lo, hi, VarRole::Other)?;
        }
        Ok(model)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LpSection {
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    End,
}

/// Parse a linear expression `[+|-] [coef] name ...` from tokens.
fn parse_expr(tokens: &[&str], vars: &mut VarTable) -> Vec<(usize, f64)> {
    let mut terms: Vec<(usize, f64)> = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(v) = tok.parse::<f64>() {
                    coef = Some(v);
                } else {
                    let j = vars.get(tok);
                    let a = sign * coef.unwrap_or(1.0);
                    match terms.iter_mut().find(|(k, _)| *k == j) {
                        Some(t) => t.1 += a,
                        None => terms.push((j, a)),
                    }
                    sign = 1.0;
                    coef = None;
                }
            }
        }
    }
    terms
}

/// Read LP text produced by [`write_lp`].
pub fn read_lp(text: &str) -> Result<LpModel, FormatError> {
    let mut name = String::from("model");
    let mut sense = None;
    let mut section = None;
    let mut vars = VarTable::default();
    let mut objective_tokens: Vec<String> = Vec::new();
    let mut constraint_tokens: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('\\') {
            if line_no == 1 {
                if let Some(first) = comment.split_whitespace().next() {
                    name = first.to_string();
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let next = match lower.as_str() {
            "minimize" | "minimise" | "min" => {
                sense = Some(Sense::Minimize);
                Some(LpSection::Objective)
            }
            "maximize" | "maximise" | "max" => {
                sense = Some(Sense::Maximize);
                Some(LpSection::Objective)
            }
            "subject to" | "st" | "s.t." => Some(LpSection::Constraints),
            "bounds" => Some(LpSection::Bounds),
            "generals" | "general" => Some(LpSection::Generals),
            "binaries" | "binary" => Some(LpSection::Binaries),
            "end" => Some(LpSection::End),
            _ => None,
        };
        if let Some(s) = next {
            section = Some(s);
            continue;
        }
        match section {
            Some(LpSection::Objective) => {
                objective_tokens.extend(line.split_whitespace().map(str::to_string))
            }
            Some(LpSection::Constraints) => {
                constraint_tokens.extend(line.split_whitespace().map(|t| (line_no, t.to_string())))
            }
            Some(LpSection::Bounds) => {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t[..] {
                    [v, "free"] => {
                        let j = vars.get(v);
                        vars.bound(j, Some(f64::NEG_INFINITY), Some(f64::INFINITY));
                    }
                    [l, "<=", v, "<=", h] => {
                        let (l, h) = (parse_num(l, line_no)?, parse_num(h, line_no)?);
                        let j = vars.get(v);
                        vars.bound(j, Some(l), Some(h));
                    }
                    [v, ">=", l] => {
                        let l = parse_num(l, line_no)?;
                        let j = vars.get(v);
                        vars.bound(j, Some(l), None);
                    }
                    [v, "<=", h] => {
                        let h = parse_num(h, line_no)?;
                        let j = vars.get(v);
                        vars.bound(j, None, Some(h));
                    }
                    [v, "=", x] => {
                        let x = parse_num(x, line_no)?;
                        let j = vars.get(v);
                        vars.bound(j, Some(x), Some(x));
                    }
                    _ => return Err(parse_err(line_no, format!("unrecognized bound {line:?}"))),
                }
            }
            Some(LpSection::Generals) | Some(LpSection::Binaries) => {
                let kind = if section == Some(LpSection::Generals) {
                    VarKind::Integer
                } else {
                    VarKind::Binary
                };
                for v in line.split_whitespace() {
                    let j = vars.get(v);
                    vars.kinds.insert(j, kind);
                }
            }
            Some(LpSection::End) => {
                return Err(parse_err(line_no, "content after End"));
            }
            None => return Err(parse_err(line_no, "expected Minimize or Maximize")),
        }
    }
    if section != Some(LpSection::End) {
        return Err(parse_err(text.lines().count(), "missing End"));
    }
    let sense = sense.ok_or_else(|| parse_err(1, "missing objective sense"))?;

    // Objective: drop the "obj:" label.
    let obj: Vec<&str> = objective_tokens
        .iter()
        .map(String::as_str)
        .filter(|t| !t.ends_with(':'))
        .collect();
    let objective = parse_expr(&obj, &mut vars);

    // Constraints: `name: expr rel rhs`.
    let mut rows = Vec::new();
    let mut k = 0;
    while k < constraint_tokens.len() {
        let (line, label) = &constraint_tokens[k];
        let row_name = label
            .strip_suffix(':')
            .ok_or_else(|| parse_err(*line, format!("expected a row label, found {label:?}")))?
            .to_string();
        k += 1;
        let start = k;
        while k < constraint_tokens.len() && !matches!(constraint_tokens[k].1.as_str(), "<=" | ">=" | "=" | "=<" | "=>") {
            k += 1;
        }
        if k + 1 >= constraint_tokens.len() {
            return Err(parse_err(*line, format!("row {row_name} has no relation")));
        }
        let relation = match constraint_tokens[k].1.as_str() {
            "<=" | "=<" => Relation::Le,
            ">=" | "=>" => Relation::Ge,
            _ => Relation::Eq,
        };
        let rhs = parse_num(&constraint_tokens[k + 1].1, constraint_tokens[k + 1].0)?;
        let expr: Vec<&str> = constraint_tokens[start..k].iter().map(|(_, t)| t.as_str()).collect();
        let terms: Vec<(usize, f64)> = parse_expr(&expr, &mut vars)
            .into_iter()
            .filter(|&(_, a)| a != 0.0)
            .collect();
        rows.push((row_name, terms, relation, rhs));
        k += 2;
    }
    let mut model = vars.into_model(name, sense)?;
    model.set_objective(objective.into_iter().filter(|&(_, a)| a != 0.0).collect());
    for (name, terms, relation, rhs) in rows {
        model.add_constraint(name, terms, relation, rhs);
    }
    Ok(model)
}

fn mps_line(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    let mut line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4}");
    while line.ends_with(' ') {
        line.pop();
    }
    out.push_str(&line);
    out.push('\n');
}

/// Fixed-column MPS with an OBJSENSE section and integer markers.
pub fn write_mps(model: &LpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", model.name);
    out.push_str("OBJSENSE\n");
    out.push_str(match model.sense {
        Sense::Minimize => "    MIN\n",
        Sense::Maximize => "    MAX\n",
    });
    out.push_str("ROWS\n");
    mps_line(&mut out, "N", "obj", "", "");
    for c in &model.constraints {
        let t = match c.relation {
            Relation::Le => "L",
            Relation::Ge => "G",
            Relation::Eq => "E",
        };
        mps_line(&mut out, t, &c.name, "", "");
    }
    out.push_str("COLUMNS\n");
    let mut entries: Vec<Vec<(&str, f64)>> = vec![Vec::new(); model.num_variables()];
    for &(j, a) in &model.objective {
        entries[j].push(("obj", a));
    }
    for c in &model.constraints {
        for &(j, a) in &c.terms {
            entries[j].push((&c.name, a));
        }
    }
    let mut in_marker = false;
    let mut marker = 0;
    for (j, v) in model.variables.iter().enumerate() {
        let integer = v.kind != VarKind::Continuous;
        if integer != in_marker {
            let tag = if integer { "'INTORG'" } else { "'INTEND'" };
            out.push_str(&format!("    M{marker:<7}  'MARKER'                 {tag}\n"));
            marker += 1;
            in_marker = integer;
        }
        if entries[j].is_empty() {
            mps_line(&mut out, "", &v.name, "obj", "0");
        }
        for &(row, a) in &entries[j] {
            mps_line(&mut out, "", &v.name, row, &num(a));
        }
    }
    if in_marker {
        out.push_str(&format!("    M{marker:<7}  'MARKER'                 'INTEND'\n"));
    }
    out.push_str("RHS\n");
    for c in &model.constraints {
        if c.rhs != 0.0 {
            mps_line(&mut out, "", "RHS", &c.name, &num(c.rhs));
        }
    }
    out.push_str("BOUNDS\n");
    for v in &model.variables {
        let (lo, hi) = (v.lower, v.upper);
        if v.kind == VarKind::Binary && (lo, hi) == (0.0, 1.0) {
            mps_line(&mut out, "BV", "BND", &v.name, "");
            continue;
        }
        if lo == hi {
            mps_line(&mut out, "FX", "BND", &v.name, &num(lo));
            continue;
        }
        if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            mps_line(&mut out, "FR", "BND", &v.name, "");
            continue;
        }
        if lo == f64::NEG_INFINITY {
            mps_line(&mut out, "MI", "BND", &v.name, "");
        } else if lo != 0.0 {
            mps_line(&mut out, "LO", "BND", &v.name, &num(lo));
        }
        if hi != f64::INFINITY {
            mps_line(&mut out, "UP", "BND", &v.name, &num(hi));
        } else if v.kind == VarKind::Integer {
            mps_line(&mut out, "PL", "BND", &v.name, "");
        }
    }
    out.push_str("ENDATA\n");
    out
}

/// Read MPS produced by [`write_mps`] (free spacing is accepted).
pub fn read_mps(text: &str) -> Result<LpModel, FormatError> {
    let mut name = String::from("model");
    let mut sense = Sense::Minimize;
    let mut section = "";
    let mut objective_row: Option<String> = None;
    let mut rows: Vec<(String, Relation)> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut terms: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut objective: Vec<(usize, f64)> = Vec::new();
    let mut vars = VarTable::default();
    let mut integer_block = false;
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let t: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match t[0] {
                "NAME" => {
                    if let Some(n) = t.get(1) {
                        name = n.to_string();
                    }
                    "NAME"
                }
                "OBJSENSE" => {
                    if let Some(s) = t.get(1) {
                        sense = if s.starts_with("MAX") { Sense::Maximize } else { Sense::Minimize };
                    }
                    "OBJSENSE"
                }
                "ROWS" => "ROWS",
                "COLUMNS" => "COLUMNS",
                "RHS" => "RHS",
                "BOUNDS" => "BOUNDS",
                "RANGES" => return Err(parse_err(line_no, "RANGES is not supported")),
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(parse_err(line_no, format!("unknown section {other:?}"))),
            };
            continue;
        }
        match section {
            "OBJSENSE" => {
                sense = if t[0].starts_with("MAX") { Sense::Maximize } else { Sense::Minimize };
            }
            "ROWS" => {
                let [kind, row] = t[..] else {
                    return Err(parse_err(line_no, "expected row type and name"));
                };
                let relation = match kind {
                    "N" => {
                        if objective_row.is_none() {
                            objective_row = Some(row.to_string());
                        }
                        continue;
                    }
                    "L" => Relation::Le,
                    "G" => Relation::Ge,
                    "E" => Relation::Eq,
                    _ => return Err(parse_err(line_no, format!("unknown row type {kind:?}"))),
                };
                row_index.insert(row.to_string(), rows.len());
                rows.push((row.to_string(), relation));
                terms.push(Vec::new());
                rhs.push(0.0);
            }
            "COLUMNS" => {
                if t.get(1) == Some(&"'MARKER'") {
                    integer_block = t.get(2) == Some(&"'INTORG'");
                    continue;
                }
                if t.len() < 3 || t.len().is_multiple_of(2) {
                    return Err(parse_err(line_no, "expected column, row, value"));
                }
                let j = vars.get(t[0]);
                if integer_block {
                    vars.kinds.entry(j).or_insert(VarKind::Integer);
                }
                for pair in t[1..].chunks(2) {
                    let value = parse_num(pair[1], line_no)?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        objective.push((j, value));
                    } else {
                        let r = *row_index
                            .get(pair[0])
                            .ok_or_else(|| parse_err(line_no, format!("unknown row {:?}", pair[0])))?;
                        terms[r].push((j, value));
                    }
                }
            }
            "RHS" => {
                if t.len() < 3 || t.len().is_multiple_of(2) {
                    return Err(parse_err(line_no, "expected set, row, value"));
                }
                for pair in t[1..].chunks(2) {
                    let value = parse_num(pair[1], line_no)?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        continue;
                    }
                    let r = *row_index
                        .get(pair[0])
                        .ok_or_else(|| parse_err(line_no, format!("unknown row {:?}", pair[0])))?;
                    rhs[r] = value;
                }
            }
            "BOUNDS" => {
                if t.len() < 3 {
                    return Err(parse_err(line_no, "expected bound type, set, column"));
                }
                let j = vars.get(t[2]);
                let value = t.get(3).map(|v| parse_num(v, line_no)).transpose()?;
                let need = |v: Option<f64>| v.ok_or_else(|| parse_err(line_no, "bound needs a value"));
                match t[0] {
                    "UP" => vars.bound(j, None, Some(need(value)?)),
                    "LO" => vars.bound(j, Some(need(value)?), None),
                    "FX" => {
                        let v = need(value)?;
                        vars.bound(j, Some(v), Some(v));
                    }
                    "FR" => vars.bound(j, Some(f64::NEG_INFINITY), Some(f64::INFINITY)),
                    "MI" => vars.bound(j, Some(f64::NEG_INFINITY), None),
                    "PL" => vars.bound(j, None, Some(f64::INFINITY)),
                    "BV" => {
                        vars.kinds.insert(j, VarKind::Binary);
                        vars.bound(j, Some(0.0), Some(1.0));
                    }
                    other => return Err(parse_err(line_no, format!("unknown bound type {other:?}"))),
                }
            }
            _ => return Err(parse_err(line_no, "data outside a section")),
        }
    }
    if !ended {
        return Err(parse_err(text.lines().count(), "missing ENDATA"));
    }
    let mut model = vars.into_model(name, sense)?;
    model.set_objective(objective);
    for (((row, relation), t), b) in rows.into_iter().zip(terms).zip(rhs) {
        model.add_constraint(row, t, relation, b);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::ContainmentDag;
    use crate::formulations::build_cg;
    use crate::interval::IntervalRepresentation;

    fn single() -> LpModel {
        let r = IntervalRepresentation::normalize(&[(1, 2)]).unwrap();
        build_cg(&r, &ContainmentDag::new(&r), false)
    }

    #[test]
    fn single_vertex_lp_text() {
        let text = write_lp(&single());
        assert_eq!(
            text,
            "\\ cg (cg)\nMinimize\n obj: c\nSubject To\n root_p1: x_0_1 - c <= 0\n assign_1: x_0_1 = 1\nGenerals\n c\nBinaries\n x_0_1\nEnd\n"
        );
    }

    #[test]
    fn lp_round_trip_preserves_rows() {
        let m = single();
        let back = read_lp(&write_lp(&m)).unwrap();
        assert_eq!(back.num_constraints(), 2);
        assert_eq!(back.variables.len(), 2);
        assert_eq!(write_lp(&back).lines().skip(1).collect::<Vec<_>>(), write_lp(&m).lines().skip(1).collect::<Vec<_>>());
    }

    #[test]
    fn mps_round_trip() {
        let m = single();
        let text = write_mps(&m);
        let back = read_mps(&text).unwrap();
        assert_eq!(back.variables, m.variables);
        assert_eq!(back.constraints, m.constraints);
        assert_eq!(back.objective, m.objective);
    }

    #[test]
    fn bounds_survive() {
        let mut m = LpModel::new("b", Formulation::Custom, Sense::Maximize);
        m.add_variable("f", VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY, VarRole::Other).unwrap();
        m.add_variable("g", VarKind::Continuous, -2.5, 3.0, VarRole::Other).unwrap();
        m.add_variable("h", VarKind::Continuous, f64::NEG_INFINITY, 4.0, VarRole::Other).unwrap();
        m.add_variable("k", VarKind::Integer, 1.0, f64::INFINITY, VarRole::Other).unwrap();
        m.add_constraint("r", vec![(0, 1.0), (1, -0.125), (2, 2.0), (3, 1.0)], Relation::Ge, -7.0);
        m.set_objective(vec![(1, 1.0)]);
        for back in [read_lp(&write_lp(&m)).unwrap(), read_mps(&write_mps(&m)).unwrap()] {
            assert_eq!(back.variables, m.variables);
            assert_eq!(back.constraints, m.constraints);
            assert_eq!(back.sense, Sense::Maximize);
        }
    }

    #[test]
    fn metadata_restores_roles() {
        let m = single();
        let mut back = read_lp(&write_lp(&m)).unwrap();
        assert_eq!(back.formulation, Formulation::Custom);
        back.apply_metadata(&m.metadata()).unwrap();
        assert_eq!(back.formulation, Formulation::Cg);
        let x = back.var("x_0_1").unwrap();
        assert_eq!(back.role(x), m.role(m.var("x_0_1").unwrap()));
        assert_eq!(back.var_by_role(&VarRole::ColorCount), back.var("c"));
    }

    #[test]
    fn reader_errors() {
        assert!(read_lp("Minimize\n obj: x\nSubject To\n r: x <=\nEnd\n").is_err());
        assert!(read_lp("Minimize\n obj: x\n").is_err());
        assert!(read_mps("NAME x\nROWS\n N obj\nCOLUMNS\n x y 1\nENDATA\n").is_err());
    }
}
