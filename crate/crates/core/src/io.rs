//! Problem files, report documents and the text table.
//!
//! A problem file is a list of `key: value` lines followed by the matrix:
//!
//! ```text
//! # Airy
//! variable: z
//! rank: 2
//! poles: inf
//! matrix:
//!   0, 1
//!   z, 0
//! ```
//!
//! Keys: `variable` (default `z`), `rank`, `poles` (rationals or `inf`,
//! comma separated, optionally in brackets), `genus` (must be 0), `flags`
//! (any of `assume-irreducible-curve`, `assert-irreducible-connection`,
//! `check-reduction`, `text`), `truncation`. Entries use integers, the
//! variable, `+ - * / ^` with integer exponents, and parentheses.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Field, Mat, MatRF, Point, Rat, RatFn};
use crate::global::{analyze, AnalysisOptions, GlobalReport, PoleAnalysis, Smoothness, TheoremStatus};
use crate::puiseux::tower::TElem;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub assume_irreducible_curve: bool,
    pub assert_irreducible_connection: bool,
    pub check_reduction: bool,
    pub text: bool,
    pub truncation: Option<usize>,
}

impl Flags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut fl = vec![];
        if self.assume_irreducible_curve {
            fl.push("assume-irreducible-curve");
        }
        if self.assert_irreducible_connection {
            fl.push("assert-irreducible-connection");
        }
        if self.check_reduction {
            fl.push("check-reduction");
        }
        if self.text {
            fl.push("text");
        }
        fl
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub variable: String,
    pub rank: usize,
    /// Entry expressions as written.
    pub entries: Vec<Vec<String>>,
    pub matrix: MatRF,
    pub poles: Vec<Point>,
    pub genus: i64,
    pub flags: Flags,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var,
    Op(char),
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(s: &str, var: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            if name != var {
                return Err(perr(line, col, format!("unknown identifier '{name}'")));
            }
            out.push((Tok::Var, col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(perr(line, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

const MAX_EXPONENT: i64 = 4096;

impl Parser {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(perr(self.line, self.col(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<RatFn> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            v = if c == '+' { v.plus(&t) } else { v.minus(&t) };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<RatFn> {
        let mut v = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let col = self.col();
            let t = self.unary()?;
            v = if c == '*' {
                v.times(&t)
            } else {
                if t.is_zero() {
                    return Err(perr(self.line, col, "division by zero"));
                }
                v.over(&t)
            };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<RatFn> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let col = self.col();
        let paren = self.peek_op() == Some('(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek_op() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = match self.toks.get(self.pos) {
            Some((Tok::Int(n), _)) => n.clone(),
            _ => return Err(perr(self.line, self.col(), "exponent must be an integer")),
        };
        self.pos += 1;
        if paren {
            if self.peek_op() != Some(')') {
                return Err(perr(self.line, col, "non-integer exponent"));
            }
            self.pos += 1;
        }
        let e = i64::try_from(n)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| perr(self.line, col, "exponent too large"))?;
        Ok(if neg { -e } else { e })
    }

    fn power(&mut self) -> Result<RatFn> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        let e = self.exponent()?;
        if e < 0 {
            if base.is_zero() {
                return Err(perr(self.line, col, "division by zero"));
            }
            Ok(base.recip().powi(e.unsigned_abs()))
        } else {
            Ok(base.powi(e as u64))
        }
    }

    fn atom(&mut self) -> Result<RatFn> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(n), _)) => {
                self.pos += 1;
                Ok(RatFn::constant(Rat::from_int(n)))
            }
            Some((Tok::Var, _)) => {
                self.pos += 1;
                Ok(RatFn::var())
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(_) => Err(perr(self.line, col, "expected a number, the variable or '('")),
            None => Err(perr(self.line, col, "unexpected end of expression")),
        }
    }
}

/// Parses one entry; `line` and `col` locate its first character in the file.
pub fn parse_expr_at(s: &str, var: &str, line: usize, col: usize) -> Result<RatFn> {
    let toks = lex(s, var, line, col)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col: col + s.chars().count(),
    };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(perr(line, p.col(), "unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_expr(s: &str, var: &str) -> Result<RatFn> {
    parse_expr_at(s, var, 1, 1)
}

pub fn parse_pole(s: &str, line: usize, col: usize) -> Result<Point> {
    let t = s.trim();
    if t == "inf" || t == "infinity" {
        return Ok(Point::Infinity);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b.trim_start()),
        None => (false, t),
    };
    let (n, d) = body.split_once('/').unwrap_or((body, "1"));
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| perr(line, col, format!("invalid pole '{t}'")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| perr(line, col, format!("invalid pole '{t}'")))?;
    if d == BigInt::from(0) {
        return Err(perr(line, col, "zero denominator"));
    }
    let v = Rat::new(n, d);
    Ok(Point::Finite(if neg { -v } else { v }))
}

/// Splits on commas, returning pieces with their 0-based character offsets.
fn split_commas(s: &str) -> Vec<(usize, &str)> {
    let mut out = vec![];
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == ',' {
            out.push((start, &s[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &s[start..]));
    out.into_iter()
        .map(|(o, p)| {
            let lead = p.len() - p.trim_start().len();
            (s[..o + lead].chars().count(), p.trim())
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let mut variable = "z".to_string();
    let mut rank: Option<usize> = None;
    let mut poles: Option<Vec<Point>> = None;
    let mut genus = 0i64;
    let mut flags = Flags::default();
    let mut rows: Vec<(usize, usize, String)> = vec![];
    let mut in_matrix = false;
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            in_matrix = false;
            let key = key.trim();
            let vcol = key.len() + (content.len() - content.trim_start().len()) + 2;
            let vcol = vcol + (value.len() - value.trim_start().len());
            let value = value.trim();
            match key {
                "variable" => {
                    if value.is_empty()
                        || !value.chars().all(|c| c.is_alphanumeric() || c == '_')
                        || value.starts_with(|c: char| c.is_ascii_digit())
                        || value == "inf"
                    {
                        return Err(perr(line, vcol, format!("invalid variable name '{value}'")));
                    }
                    variable = value.to_string();
                }
                "rank" => {
                    let r: usize = value
                        .parse()
                        .ok()
                        .filter(|r| *r >= 1)
                        .ok_or_else(|| perr(line, vcol, "rank must be a positive integer"))?;
                    rank = Some(r);
                }
                "poles" => {
                    let inner = value.trim_start_matches('[').trim_end_matches(']');
                    let off = value.len() - value.trim_start_matches('[').len();
                    let mut ps: Vec<Point> = vec![];
                    if !inner.trim().is_empty() {
                        for (o, piece) in split_commas(inner) {
                            let col = vcol + off + o;
                            let p = parse_pole(piece, line, col)?;
                            if ps.contains(&p) {
                                return Err(perr(line, col, format!("duplicate pole {p}")));
                            }
                            ps.push(p);
                        }
                    }
                    poles = Some(ps);
                }
                "genus" => {
                    genus = value
                        .parse()
                        .map_err(|_| perr(line, vcol, "genus must be an integer"))?;
                    if genus != 0 {
                        return Err(perr(line, vcol, "only genus 0 is supported"));
                    }
                }
                "truncation" => {
                    flags.truncation = Some(
                        value
                            .parse()
                            .ok()
                            .filter(|t| *t >= 1)
                            .ok_or_else(|| perr(line, vcol, "truncation must be a positive integer"))?,
                    );
                }
                "flags" => {
                    for (o, f) in split_commas(value) {
                        match f {
                            "" => {}
                            "assume-irreducible-curve" => flags.assume_irreducible_curve = true,
                            "assert-irreducible-connection" => flags.assert_irreducible_connection = true,
                            "check-reduction" => flags.check_reduction = true,
                            "text" => flags.text = true,
                            _ => return Err(perr(line, vcol + o, format!("unknown flag '{f}'"))),
                        }
                    }
                }
                "matrix" => {
                    if !value.is_empty() {
                        return Err(perr(line, vcol, "matrix rows start on the next line"));
                    }
                    in_matrix = true;
                }
                _ => {
                    return Err(perr(
                        line,
                        1 + content.len() - content.trim_start().len(),
                        format!("unknown key '{key}'"),
                    ))
                }
            }
        } else if in_matrix {
            rows.push((line, 1, content.to_string()));
        } else {
            return Err(perr(line, 1, "expected 'key: value'"));
        }
    }
    if rows.is_empty() {
        return Err(perr(last_line.max(1), 1, "missing matrix"));
    }
    let n = rank.unwrap_or(rows.len());
    if rows.len() != n {
        return Err(Error::InvalidProblem(format!(
            "matrix has {} rows, rank is {n}",
            rows.len()
        )));
    }
    let mut entries = vec![];
    let mut parsed = vec![];
    for (line, col, row) in &rows {
        let pieces = split_commas(row);
        if pieces.len() != n {
            return Err(perr(
                *line,
                *col,
                format!("row has {} entries, expected {n} (matrix must be square)", pieces.len()),
            ));
        }
        let mut er = vec![];
        let mut pr = vec![];
        for (o, piece) in pieces {
            if piece.is_empty() {
                return Err(perr(*line, col + o, "empty entry"));
            }
            pr.push(parse_expr_at(piece, &variable, *line, col + o)?);
            er.push(piece.to_string());
        }
        entries.push(er);
        parsed.push(pr);
    }
    let poles = poles.ok_or_else(|| Error::InvalidProblem("missing 'poles'".into()))?;
    if poles.is_empty() {
        return Err(Error::InvalidProblem("the pole set must not be empty".into()));
    }
    Ok(ProblemSpec {
        variable,
        rank: n,
        entries,
        matrix: Mat::from_rows(parsed),
        poles,
        genus,
        flags,
    })
}

impl ProblemSpec {
    /// Canonical problem text; parses back to an equal spec (up to entry spelling).
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "variable: {}", self.variable);
        let _ = writeln!(s, "rank: {}", self.rank);
        let poles: Vec<String> = self.poles.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(s, "poles: {}", poles.join(", "));
        let _ = writeln!(s, "genus: {}", self.genus);
        let fl = self.flags.names();
        if !fl.is_empty() {
            let _ = writeln!(s, "flags: {}", fl.join(", "));
        }
        if let Some(t) = self.flags.truncation {
            let _ = writeln!(s, "truncation: {t}");
        }
        s.push_str("matrix:\n");
        for i in 0..self.rank {
            let row: Vec<String> = self.matrix.row(i).iter().map(|e| e.display_in(&self.variable)).collect();
            let _ = writeln!(s, "  {}", row.join(", "));
        }
        s
    }
}

pub const SCHEMA_VERSION: &str = "1";

/// "p/q" form, also for integers.
pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn point_str(p: &Point) -> String {
    match p {
        Point::Finite(a) => rat_str(a),
        Point::Infinity => "inf".into(),
    }
}

fn telem_str(t: &TElem) -> String {
    t.as_rat().map_or_else(|| t.to_string(), |r| rat_str(&r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputBlock {
    pub variable: String,
    pub rank: usize,
    pub genus: i64,
    pub poles: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub flags: Vec<String>,
    pub truncation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub pole: Option<String>,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBlock {
    /// Principal part in the local coordinate t.
    pub q: String,
    pub r: usize,
    pub p: i64,
    pub residue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchBlock {
    pub p: i64,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermBlock {
    pub r_c: usize,
    pub branches: Vec<BranchBlock>,
    pub inf_intersection: i64,
    pub milnor: i64,
    pub milnor_oracle: i64,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksBlock {
    pub milnor_ok: Option<bool>,
    pub delta_identity_ok: bool,
    pub oracle_agrees: Option<bool>,
    pub disc_identity_ok: bool,
    pub irr_end_agrees: bool,
    pub reduction_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleBlock {
    pub pole: String,
    pub pole_order: i64,
    pub mode: String,
    pub m: usize,
    pub irr: i64,
    pub irr_end: i64,
    pub delta_end: i64,
    pub cells: Vec<CellBlock>,
    pub germ: Option<GermBlock>,
    pub checks: ChecksBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusBlock {
    pub status: String,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyBlock {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalBlock {
    pub n: usize,
    pub b: i64,
    pub arithmetic_genus: i64,
    pub delta_sum: i64,
    pub euler_char: i64,
    pub rigidity: i64,
    pub smoothness: StatusBlock,
    pub irreducibility: StatusBlock,
    pub main_theorem: StatusBlock,
    pub cohomology: Option<CohomologyBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub input: InputBlock,
    pub poles: Vec<PoleBlock>,
    pub global: Option<GlobalBlock>,
    pub diagnostics: Vec<Diagnostic>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<ReportDocument> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })
    }

    pub fn pole(&self, p: &str) -> Option<&PoleBlock> {
        self.poles.iter().find(|b| b.pole == p)
    }
}

fn pole_block(pa: &PoleAnalysis) -> PoleBlock {
    let l = &pa.local;
    let cells = l
        .cells
        .iter()
        .map(|c| CellBlock {
            q: if c.q.is_exact_zero() {
                "0".into()
            } else {
                c.q.display_in("t")
            },
            r: c.r,
            p: c.p,
            residue: c.exponent_residue.as_ref().map(telem_str),
        })
        .collect();
    let germ = pa.germ.as_ref().map(|g| GermBlock {
        r_c: g.r_c(),
        branches: g.branches.iter().map(|b| BranchBlock { p: b.p, r: b.r }).collect(),
        inf_intersection: g.inf_intersection,
        milnor: g.milnor,
        milnor_oracle: pa.oracle.as_ref().map_or(g.milnor, |o| o.milnor),
        delta: g.delta,
    });
    let c = &pa.checks;
    PoleBlock {
        pole: point_str(&l.pole),
        pole_order: l.pole_order,
        mode: l.mode.map_or_else(|| "unchecked".into(), |m| m.to_string()),
        m: l.m(),
        irr: l.irregularity(),
        irr_end: l.irr_end(),
        delta_end: l.delta_end(),
        cells,
        germ,
        checks: ChecksBlock {
            milnor_ok: c.milnor_ok,
            delta_identity_ok: c.delta_identity_ok,
            oracle_agrees: c.oracle_agrees,
            disc_identity_ok: c.disc_identity_ok,
            irr_end_agrees: c.irr_end_agrees,
            reduction_agrees: c.reduction_agrees,
        },
    }
}

fn theorem_str(s: TheoremStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

pub fn report_document(spec: &ProblemSpec, r: std::result::Result<GlobalReport, Error>) -> ReportDocument {
    let mut poles = spec.poles.clone();
    poles.sort();
    let input = InputBlock {
        variable: spec.variable.clone(),
        rank: spec.rank,
        genus: spec.genus,
        poles: poles.iter().map(point_str).collect(),
        matrix: (0..spec.rank)
            .map(|i| spec.matrix.row(i).iter().map(|e| e.display_in(&spec.variable)).collect())
            .collect(),
        flags: spec
            .flags
            .names()
            .into_iter()
            .filter(|f| *f != "text")
            .map(String::from)
            .collect(),
        truncation: spec.flags.truncation,
    };
    let r = match r {
        Ok(r) => r,
        Err(e) => {
            return ReportDocument {
                schema: SCHEMA_VERSION.into(),
                input,
                poles: vec![],
                global: None,
                diagnostics: vec![Diagnostic {
                    pole: None,
                    kind: e.kind().into(),
                    message: e.to_string(),
                }],
                warnings: vec![],
                exit_code: 2,
            }
        }
    };
    let mut diagnostics = vec![];
    let mut blocks = vec![];
    for (p, res) in &r.poles {
        match res {
            Ok(pa) => blocks.push(pole_block(pa)),
            Err(e) => diagnostics.push(Diagnostic {
                pole: Some(point_str(p)),
                kind: e.kind().into(),
                message: e.to_string(),
            }),
        }
    }
    let global = r.global.as_ref().map(|g| GlobalBlock {
        n: g.class.n,
        b: g.class.b,
        arithmetic_genus: g.arithmetic_genus,
        delta_sum: g.delta_sum,
        euler_char: g.euler_char,
        rigidity: g.rigidity,
        smoothness: StatusBlock {
            status: g.smoothness.label().into(),
            details: match &g.smoothness {
                Smoothness::Smooth => vec![],
                Smoothness::Singular(v) => v.clone(),
                Smoothness::Indeterminate(m) => vec![m.clone()],
            },
        },
        irreducibility: StatusBlock {
            status: g.irreducibility.label().into(),
            details: match &g.irreducibility {
                crate::global::Irreducibility::Irreducible(p) => {
                    vec![format!("single totally ramified cluster at {}", point_str(p))]
                }
                crate::global::Irreducibility::Reducible(k) => {
                    vec![format!("{k} factors over the rational function field")]
                }
                crate::global::Irreducibility::Unknown => vec![],
            },
        },
        main_theorem: StatusBlock {
            status: theorem_str(g.main_theorem.status),
            details: g.main_theorem.reasons.clone(),
        },
        cohomology: g.cohomology.map(|(h0, h1, h2)| CohomologyBlock { h0, h1, h2 }),
    });
    ReportDocument {
        schema: SCHEMA_VERSION.into(),
        input,
        poles: blocks,
        global,
        diagnostics,
        warnings: r.warnings.clone(),
        exit_code: r.exit_code(),
    }
}

pub fn options_of(flags: &Flags) -> AnalysisOptions {
    AnalysisOptions {
        assume_irreducible_curve: flags.assume_irreducible_curve,
        assert_irreducible_connection: flags.assert_irreducible_connection,
        truncation: flags.truncation,
        check_reduction: flags.check_reduction,
    }
}

pub fn run_analysis(spec: &ProblemSpec) -> ReportDocument {
    let r = analyze(&spec.matrix, &spec.poles, &options_of(&spec.flags));
    report_document(spec, r)
}

fn short_pole(p: &str) -> String {
    p.strip_suffix("/1").unwrap_or(p).to_string()
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    }
}

pub fn render_text(d: &ReportDocument) -> String {
    let mut s = String::new();
    let head = [
        "pole", "nu", "m", "Irr", "Irr(End)", "delta(End)", "mu", "delta", "r_C", "(C,X_inf)_a",
    ];
    let widths = [8, 4, 4, 5, 10, 12, 5, 7, 5, 13];
    let line = |cells: &[String]| -> String {
        let mut l = String::new();
        for (c, w) in cells.iter().zip(widths) {
            let _ = write!(l, "{c:>w$}");
        }
        l.push('\n');
        l
    };
    s.push_str(&line(&head.map(String::from)));
    for p in &d.poles {
        let g = p.germ.as_ref();
        let dash = || "-".to_string();
        s.push_str(&line(&[
            short_pole(&p.pole),
            p.pole_order.to_string(),
            p.m.to_string(),
            p.irr.to_string(),
            p.irr_end.to_string(),
            p.delta_end.to_string(),
            g.map_or_else(dash, |g| g.milnor.to_string()),
            g.map_or_else(dash, |g| g.delta.to_string()),
            g.map_or_else(dash, |g| g.r_c.to_string()),
            g.map_or_else(dash, |g| g.inf_intersection.to_string()),
        ]));
    }
    for p in &d.poles {
        let c = &p.checks;
        let _ = writeln!(
            s,
            "pole {}: {}; milnor {}, delta identity {}, oracle {}, disc identity {}, Irr(End) routes {}, reduction {}",
            short_pole(&p.pole),
            p.mode,
            opt_bool(c.milnor_ok),
            c.delta_identity_ok,
            opt_bool(c.oracle_agrees),
            c.disc_identity_ok,
            c.irr_end_agrees,
            opt_bool(c.reduction_agrees),
        );
    }
    if let Some(g) = &d.global {
        s.push('\n');
        let _ = writeln!(s, "n = {}, b = {}, g_a = {}", g.n, g.b, g.arithmetic_genus);
        let _ = writeln!(s, "chi = {}, rig = {}", g.euler_char, g.rigidity);
        if let Some(h) = &g.cohomology {
            let _ = writeln!(s, "h0 = {}, h1 = {}, h2 = {}", h.h0, h.h1, h.h2);
        }
        let _ = writeln!(s, "smoothness: {}", g.smoothness.status);
        let _ = writeln!(s, "irreducibility: {}", g.irreducibility.status);
        let _ = writeln!(s, "main theorem: {}", g.main_theorem.status);
        for r in &g.main_theorem.details {
            let _ = writeln!(s, "  {r}");
        }
    }
    if !d.diagnostics.is_empty() {
        s.push_str("\nerrors:\n");
        for e in &d.diagnostics {
            match &e.pole {
                Some(p) => {
                    let _ = writeln!(s, "  at {}: {} ({})", short_pole(p), e.message, e.kind);
                }
                None => {
                    let _ = writeln!(s, "  {} ({})", e.message, e.kind);
                }
            }
        }
    }
    if !d.warnings.is_empty() {
        s.push_str("\nwarnings:\n");
        for w in &d.warnings {
            let _ = writeln!(s, "  {w}");
        }
    }
    let _ = writeln!(s, "\nexit code: {}", d.exit_code);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::UPoly;

    const AIRY: &str = "# Airy\nrank: 2\npoles: inf\nmatrix:\n  0, 1\n  z, 0\n";

    #[test]
    fn parses_rational_entry() {
        let f = parse_expr("(3*z^2+1)/(z*(z-1)^2)", "z").unwrap();
        assert_eq!(f.num(), &UPoly::from_ints(&[1, 0, 3]));
        assert_eq!(f.den(), &UPoly::from_ints(&[0, 1, -2, 1]));
        assert_eq!(parse_expr("-z^2", "z").unwrap(), RatFn::monomial(Rat::from(-1), 2));
        assert_eq!(parse_expr("2^-1*z^(-1)", "z").unwrap(), RatFn::monomial(Rat::new(1, 2), -1));
    }

    #[test]
    fn rejects_fractional_exponent() {
        let e = parse_expr("z^(1/2)", "z").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 3, .. }), "{e:?}");
        assert!(parse_expr("1/(z-z)", "z").is_err());
        assert!(parse_expr("2 z", "z").is_err());
        assert!(parse_expr("x", "z").is_err());
    }

    #[test]
    fn duplicate_pole() {
        let e = parse_problem("poles: [0, 0]\nmatrix:\n1/z\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 12, .. }), "{e:?}");
    }

    #[test]
    fn error_positions() {
        let e = parse_problem("poles: inf\nmatrix:\n  0, 1\n  z, 0 +\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 9, .. }), "{e:?}");
        let e = parse_problem("poles: inf\nmatrix:\n  0, 1\n  z\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e:?}");
        let e = parse_problem("genus: 1\npoles: inf\nmatrix:\n z\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 8, .. }), "{e:?}");
        assert!(matches!(parse_problem("rank: 3\npoles: inf\nmatrix:\n z\n"), Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn problem_round_trip() {
        let p = parse_problem(AIRY).unwrap();
        assert_eq!(p.rank, 2);
        assert_eq!(p.poles, vec![Point::Infinity]);
        let again = parse_problem(&p.render()).unwrap();
        assert_eq!(again.matrix, p.matrix);
        assert_eq!(again.render(), p.render());
    }

    #[test]
    fn airy_report() {
        let d = run_analysis(&parse_problem(AIRY).unwrap());
        assert_eq!(d.exit_code, 0);
        let s = d.to_json();
        assert_eq!(ReportDocument::from_json(&s).unwrap().to_json(), s);
        let t = render_text(&d);
        assert!(t.contains("     inf   3   1    3         3           6    4      2    1            5"), "{t}");
        assert!(!t.contains("warnings"));
    }
}
