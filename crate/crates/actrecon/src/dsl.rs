//! Parser and serializer for the ACT process-model text format.
//!
//! Grammar:
//!
//! ```text
//! model  := "graph" STRING "{" entity* flow* "}"
//! entity := "entity" STRING "{" task* "}"
//! task   := "task" STRING "{" prop* "}"
//! prop   := IDENT "=" NUMBER ";"
//! flow   := "flow" STRING "->" STRING ";"
//! ```
//!
//! Strings are double-quoted with `\"` and `\\` escapes only, identifiers
//! match `[a-z][a-z0-9_]*`, numbers are unsigned decimals, whitespace is
//! insignificant between tokens, and `#` comments run to end of line.
//!
//! Serialization is canonical: two-space indentation, one declaration per
//! line, declarations in model order, trailing newline. `parse` then
//! `serialize` is byte-stable, and `parse(serialize(m))` equals `m`.

use crate::model::{name_eq, ControlFlow, Entity, ModelError, ProcessModel, Task};
use std::fmt;

/// Position of a parse failure, 1-based, pointing inside the input or at
/// end-of-input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseDiagnostic {}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Ident(String),
    Str(String),
    Number(f64),
    LBrace,
    RBrace,
    Semi,
    Eq,
    Arrow,
    Minus,
    Eof,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    column: usize,
}

impl Tok {
    fn describe(&self) -> String {
        match &self.kind {
            TokKind::Ident(s) => format!("'{s}'"),
            TokKind::Str(s) => format!("string \"{s}\""),
            TokKind::Number(n) => format!("number {n}"),
            TokKind::LBrace => "'{'".to_string(),
            TokKind::RBrace => "'}'".to_string(),
            TokKind::Semi => "';'".to_string(),
            TokKind::Eq => "'='".to_string(),
            TokKind::Arrow => "'->'".to_string(),
            TokKind::Minus => "'-'".to_string(),
            TokKind::Eof => "end of input".to_string(),
        }
    }
}

fn diag(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokenize(mut self) -> Result<Vec<Tok>, ParseDiagnostic> {
        let mut toks = Vec::new();
        loop {
            // Skip whitespace and # comments.
            loop {
                match self.chars.peek() {
                    Some(c) if c.is_whitespace() => {
                        self.bump();
                    }
                    Some('#') => {
                        while let Some(&c) = self.chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    _ => break,
                }
            }

            let (line, column) = (self.line, self.column);
            let c = match self.chars.peek() {
                None => {
                    toks.push(Tok {
                        kind: TokKind::Eof,
                        line,
                        column,
                    });
                    return Ok(toks);
                }
                Some(&c) => c,
            };

            let kind = match c {
                '{' => {
                    self.bump();
                    TokKind::LBrace
                }
                '}' => {
                    self.bump();
                    TokKind::RBrace
                }
                ';' => {
                    self.bump();
                    TokKind::Semi
                }
                '=' => {
                    self.bump();
                    TokKind::Eq
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        TokKind::Arrow
                    } else {
                        TokKind::Minus
                    }
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None => return Err(diag(line, column, "unterminated string")),
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some(c) => return Err(diag(
                                    self.line,
                                    self.column.saturating_sub(1),
                                    format!(
                                        "invalid escape '\\{c}' (only \\\" and \\\\ are allowed)"
                                    ),
                                )),
                                None => return Err(diag(line, column, "unterminated string")),
                            },
                            Some(c) => s.push(c),
                        }
                    }
                    TokKind::Str(s)
                }
                c if c.is_ascii_digit() => {
                    let mut text = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                        text.push(self.bump().unwrap());
                    }
                    if self.chars.peek() == Some(&'.') {
                        self.bump();
                        text.push('.');
                        if !matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                            return Err(diag(
                                self.line,
                                self.column,
                                "expected digit after decimal point",
                            ));
                        }
                        while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                            text.push(self.bump().unwrap());
                        }
                    }
                    let value: f64 = text
                        .parse()
                        .map_err(|_| diag(line, column, format!("invalid number '{text}'")))?;
                    if !value.is_finite() {
                        return Err(diag(
                            line,
                            column,
                            format!("number '{text}' is out of range"),
                        ));
                    }
                    TokKind::Number(value)
                }
                c if c.is_ascii_lowercase() => {
                    let mut ident = String::new();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_lowercase() || d.is_ascii_digit() || *d == '_')
                    {
                        ident.push(self.bump().unwrap());
                    }
                    TokKind::Ident(ident)
                }
                c => return Err(diag(line, column, format!("unexpected character '{c}'"))),
            };
            toks.push(Tok { kind, line, column });
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Tok, ParseDiagnostic> {
        let tok = self.bump();
        match &tok.kind {
            TokKind::Ident(s) if s == kw => Ok(tok),
            _ => Err(diag(
                tok.line,
                tok.column,
                format!("expected '{kw}', found {}", tok.describe()),
            )),
        }
    }

    fn expect_string(&mut self, what: &str) -> Result<(String, Tok), ParseDiagnostic> {
        let tok = self.bump();
        match &tok.kind {
            TokKind::Str(s) => Ok((s.clone(), tok)),
            _ => Err(diag(
                tok.line,
                tok.column,
                format!("expected {what}, found {}", tok.describe()),
            )),
        }
    }

    fn expect_kind(&mut self, kind: TokKind, what: &str) -> Result<Tok, ParseDiagnostic> {
        let tok = self.bump();
        if tok.kind == kind {
            Ok(tok)
        } else {
            Err(diag(
                tok.line,
                tok.column,
                format!("expected {what}, found {}", tok.describe()),
            ))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokKind::Ident(s) if s == kw)
    }

    fn parse_model(&mut self) -> Result<ProcessModel, ParseDiagnostic> {
        self.expect_keyword("graph")?;
        let (name, _) = self.expect_string("graph name")?;
        self.expect_kind(TokKind::LBrace, "'{'")?;

        let mut model = ProcessModel::new(name);
        while self.at_keyword("entity") {
            let entity = self.parse_entity(&model)?;
            model.entities.push(entity);
        }
        while self.at_keyword("flow") {
            let flow = self.parse_flow(&model)?;
            model.flows.push(flow);
        }
        let close = self.bump();
        if close.kind != TokKind::RBrace {
            return Err(diag(
                close.line,
                close.column,
                format!(
                    "expected 'entity', 'flow' or '}}', found {}",
                    close.describe()
                ),
            ));
        }
        let end = self.bump();
        if end.kind != TokKind::Eof {
            return Err(diag(
                end.line,
                end.column,
                format!("expected end of input, found {}", end.describe()),
            ));
        }
        Ok(model)
    }

    fn parse_entity(&mut self, model: &ProcessModel) -> Result<Entity, ParseDiagnostic> {
        self.expect_keyword("entity")?;
        let (name, name_tok) = self.expect_string("entity name")?;
        if model.entities.iter().any(|e| name_eq(&e.name, &name)) {
            return Err(diag(
                name_tok.line,
                name_tok.column,
                format!("duplicate entity name \"{name}\""),
            ));
        }
        self.expect_kind(TokKind::LBrace, "'{'")?;
        let mut entity = Entity {
            name,
            tasks: Vec::new(),
        };
        while self.at_keyword("task") {
            let task = self.parse_task(model, &entity)?;
            entity.tasks.push(task);
        }
        let close = self.bump();
        if close.kind != TokKind::RBrace {
            return Err(diag(
                close.line,
                close.column,
                format!("expected 'task' or '}}', found {}", close.describe()),
            ));
        }
        Ok(entity)
    }

    fn parse_task(
        &mut self,
        model: &ProcessModel,
        entity: &Entity,
    ) -> Result<Task, ParseDiagnostic> {
        self.expect_keyword("task")?;
        let (name, name_tok) = self.expect_string("task name")?;
        let taken = model.lookup_task(&name).is_some()
            || entity.tasks.iter().any(|t| name_eq(&t.name, &name));
        if taken {
            return Err(diag(
                name_tok.line,
                name_tok.column,
                format!("duplicate task name \"{name}\""),
            ));
        }
        self.expect_kind(TokKind::LBrace, "'{'")?;
        let mut task = Task::new(name);
        while let TokKind::Ident(_) = &self.peek().kind {
            let prop_tok = self.bump();
            let prop = match prop_tok.kind {
                TokKind::Ident(s) => s,
                _ => unreachable!(),
            };
            if task.properties.contains_key(&prop) {
                return Err(diag(
                    prop_tok.line,
                    prop_tok.column,
                    format!("duplicate property \"{prop}\" in task \"{}\"", task.name),
                ));
            }
            self.expect_kind(TokKind::Eq, "'='")?;
            let value_tok = self.bump();
            let value =
                match value_tok.kind {
                    TokKind::Number(v) => v,
                    TokKind::Minus | TokKind::Arrow => return Err(diag(
                        value_tok.line,
                        value_tok.column,
                        format!(
                            "negative value for property \"{prop}\" (property values must be >= 0)"
                        ),
                    )),
                    _ => {
                        return Err(diag(
                            value_tok.line,
                            value_tok.column,
                            format!("expected number, found {}", value_tok.describe()),
                        ))
                    }
                };
            self.expect_kind(TokKind::Semi, "';'")?;
            task.properties.insert(prop, value);
        }
        let close = self.bump();
        if close.kind != TokKind::RBrace {
            return Err(diag(
                close.line,
                close.column,
                format!("expected property or '}}', found {}", close.describe()),
            ));
        }
        Ok(task)
    }

    fn parse_flow(&mut self, model: &ProcessModel) -> Result<ControlFlow, ParseDiagnostic> {
        self.expect_keyword("flow")?;
        let (source, source_tok) = self.expect_string("source task name")?;
        self.expect_kind(TokKind::Arrow, "'->'")?;
        let (target, target_tok) = self.expect_string("target task name")?;
        self.expect_kind(TokKind::Semi, "';'")?;

        if model.lookup_task(&source).is_none() {
            return Err(diag(
                source_tok.line,
                source_tok.column,
                format!("flow references unknown task \"{source}\""),
            ));
        }
        if model.lookup_task(&target).is_none() {
            return Err(diag(
                target_tok.line,
                target_tok.column,
                format!("flow references unknown task \"{target}\""),
            ));
        }
        if name_eq(&source, &target) {
            return Err(diag(
                source_tok.line,
                source_tok.column,
                format!("flow \"{source}\" -> \"{target}\" is a self-loop"),
            ));
        }
        if model
            .flows
            .iter()
            .any(|f| name_eq(&f.source, &source) && name_eq(&f.target, &target))
        {
            return Err(diag(
                source_tok.line,
                source_tok.column,
                format!("duplicate flow \"{source}\" -> \"{target}\""),
            ));
        }
        Ok(ControlFlow { source, target })
    }
}

/// Parses ACT text into a model satisfying every model invariant. Any
/// rejection carries a 1-based line/column diagnostic.
pub fn parse_model(text: &str) -> Result<ProcessModel, ParseDiagnostic> {
    let toks = Lexer::new(text).tokenize()?;
    let mut parser = Parser { toks, pos: 0 };
    parser.parse_model()
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

fn format_number(v: f64) -> String {
    // `Display` for f64 never uses exponent notation, which keeps the
    // output inside the NUMBER grammar and round-trips the exact value.
    format!("{v}")
}

/// Serializes a valid model to canonical ACT text. Output is deterministic
/// and re-parses to an equal model.
pub fn serialize_model(model: &ProcessModel) -> Result<String, ModelError> {
    let violations = model.validate();
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    let mut out = String::new();
    out.push_str(&format!("graph \"{}\" {{\n", escape(&model.name)));
    for entity in &model.entities {
        out.push_str(&format!("  entity \"{}\" {{\n", escape(&entity.name)));
        for task in &entity.tasks {
            out.push_str(&format!("    task \"{}\" {{\n", escape(&task.name)));
            for (prop, value) in &task.properties {
                out.push_str(&format!("      {prop} = {};\n", format_number(*value)));
            }
            out.push_str("    }\n");
        }
        out.push_str("  }\n");
    }
    for flow in &model.flows {
        out.push_str(&format!(
            "  flow \"{}\" -> \"{}\";\n",
            escape(&flow.source),
            escape(&flow.target)
        ));
    }
    out.push_str("}\n");
    Ok(out)
}
