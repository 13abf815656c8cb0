//! Rule-based extraction of reconstruction constraints from structured
//! requirement sentences.
//!
//! The pipeline is: dictionary-driven tokenization (longest phrase match
//! wins), then template matching. Five sentence templates are recognized:
//!
//! 1. entity selection     — `The new model shall contain "A", "B"`
//! 2. task augmentation    — `Supplier shall add "RFI Response"`
//! 3. task reservation     — `Reserve importance higher than 90 tasks`
//! 4. objective            — `The importance is maximum`
//! 5. property bound       — `The time does not exceed 2500 hours`
//!
//! Templates are tried in that order; the first full match wins. Every
//! sentence yields exactly one record or exactly one error.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Words dropped during tokenization. Articles plus copula forms: the
/// templates quantify over content words only, and sentences like
/// "time must be less than 2500" read naturally with the copula present.
const DROPPED_WORDS: &[&str] = &[
    "the", "a", "an", "be", "is", "are", "was", "were", "been", "being",
];

const SENTENCE_PUNCTUATION: &[char] = &['.', '!', '?', ';', ':'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenTag {
    Keyword,
    Relation,
    Bound,
    Objective,
    Name,
    Number,
    Separator,
}

impl TokenTag {
    pub fn parse(tag: &str) -> Option<TokenTag> {
        match tag {
            "keyword" => Some(TokenTag::Keyword),
            "relation" => Some(TokenTag::Relation),
            "bound" => Some(TokenTag::Bound),
            "objective" => Some(TokenTag::Objective),
            "name" => Some(TokenTag::Name),
            "number" => Some(TokenTag::Number),
            "separator" => Some(TokenTag::Separator),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub text: String,
    pub tag: TokenTag,
}

impl Token {
    fn new(tag: TokenTag, text: impl Into<String>) -> Self {
        Token {
            text: text.into(),
            tag,
        }
    }

    fn is_keyword(&self, canonical: &str) -> bool {
        self.tag == TokenTag::Keyword && self.text == canonical
    }
}

/// One dictionary row: a surface phrase, the canonical token it maps to,
/// and its part-of-speech tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DictEntry {
    pub surface: String,
    pub canonical: String,
    pub tag: String,
}

/// Ordered surface-to-canonical mapping. Surfaces are unique after
/// lowercasing; multi-word surfaces are allowed and the longest match wins.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    entries: Vec<DictEntry>,
}

impl Dictionary {
    pub fn new() -> Self {
        Dictionary::default()
    }

    /// Inserts an entry, replacing any existing entry with the same
    /// lowercased surface.
    pub fn insert(&mut self, surface: &str, canonical: &str, tag: &str) {
        let key = surface.trim().to_lowercase();
        if let Some(existing) = self.entries.iter_mut().find(|e| e.surface == key) {
            existing.canonical = canonical.to_string();
            existing.tag = tag.to_string();
        } else {
            self.entries.push(DictEntry {
                surface: key,
                canonical: canonical.to_string(),
                tag: tag.to_string(),
            });
        }
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    /// Canonical token for an exact surface, if present.
    pub fn lookup(&self, surface: &str) -> Option<&DictEntry> {
        let key = surface.trim().to_lowercase();
        self.entries.iter().find(|e| e.surface == key)
    }

    /// Longest entry whose surface words match a prefix of `words`
    /// (case-insensitive). Returns the entry and the number of words
    /// consumed.
    fn longest_match(&self, words: &[String]) -> Option<(&DictEntry, usize)> {
        let mut best: Option<(&DictEntry, usize)> = None;
        for entry in &self.entries {
            let surface_words: Vec<&str> = entry.surface.split_whitespace().collect();
            if surface_words.is_empty() || surface_words.len() > words.len() {
                continue;
            }
            let matches = surface_words
                .iter()
                .zip(words.iter())
                .all(|(s, w)| *s == w.to_lowercase());
            if matches {
                match best {
                    Some((_, n)) if n >= surface_words.len() => {}
                    _ => best = Some((entry, surface_words.len())),
                }
            }
        }
        best
    }
}

/// The built-in reconstruction dictionary: modal verbs collapse to `shall`,
/// comparison phrases to `greater`/`less`, extremum words to `max`/`min`,
/// and so on. Callers can layer custom rows on top with
/// [`Dictionary::insert`].
pub fn default_dictionary() -> Dictionary {
    let rows: &[(&str, &str, &str)] = &[
        ("should", "shall", "keyword"),
        ("must", "shall", "keyword"),
        ("shall", "shall", "keyword"),
        ("add", "add", "keyword"),
        ("increase", "add", "keyword"),
        ("execute", "add", "keyword"),
        ("reserve", "reserve", "keyword"),
        ("save", "reserve", "keyword"),
        ("retain", "reserve", "keyword"),
        ("more than", "greater", "relation"),
        ("higher than", "greater", "relation"),
        ("greater than", "greater", "relation"),
        ("greater", "greater", "relation"),
        ("at least", "greater", "relation"),
        ("less than", "less", "relation"),
        ("lower than", "less", "relation"),
        ("less", "less", "relation"),
        ("does not exceed", "less", "relation"),
        ("no more than", "less", "relation"),
        ("at most", "less", "relation"),
        ("maximum", "max", "objective"),
        ("greatest", "max", "objective"),
        ("most", "max", "objective"),
        ("maximize", "max", "objective"),
        ("max", "max", "objective"),
        ("minimum", "min", "objective"),
        ("least", "min", "objective"),
        ("minimize", "min", "objective"),
        ("min", "min", "objective"),
        ("task", "task", "keyword"),
        ("tasks", "task", "keyword"),
        ("activity", "task", "keyword"),
        ("activities", "task", "keyword"),
        ("property", "property", "keyword"),
        ("contain", "contain", "keyword"),
        ("contains", "contain", "keyword"),
        ("include", "contain", "keyword"),
        ("includes", "contain", "keyword"),
        ("new model", "new model", "keyword"),
        ("and", ",", "separator"),
    ];
    let mut dict = Dictionary::new();
    for (surface, canonical, tag) in rows {
        dict.insert(surface, canonical, tag);
    }
    dict
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractError {
    #[error("unbalanced quote at column {column}")]
    UnbalancedQuote { column: usize },
    #[error("unrecognized requirement: {sentence:?}")]
    Unrecognized { sentence: String },
    #[error("ambiguous requirement: {detail}")]
    Ambiguous { detail: String },
    #[error("malformed requirement: {detail}")]
    Malformed { detail: String },
    #[error("second entity-selection sentence (first one was on line {first})")]
    DuplicateSelection { first: usize },
    #[error("second objective sentence (first one was on line {first})")]
    DuplicateObjective { first: usize },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ExtractError>,
    },
}

fn at_line(line: usize, source: ExtractError) -> ExtractError {
    ExtractError::AtLine {
        line,
        source: Box::new(source),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Greater,
    Less,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Greater => write!(f, "greater"),
            Relation::Less => write!(f, "less"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskAddition {
    pub entity: String,
    pub task: String,
}

/// `(property, relation, value)` rule. Used both for reservation rules
/// (strict comparison) and for sum bounds (inclusive comparison).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRule {
    pub property: String,
    pub relation: Relation,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub property: String,
    pub direction: Direction,
}

/// The classified record for one sentence.
#[derive(Debug, Clone, PartialEq)]
pub enum Requirement {
    Selection(Vec<String>),
    Addition(TaskAddition),
    Reservation(PropertyRule),
    Objective(ObjectiveSpec),
    Bound(PropertyRule),
}

/// Aggregated constraints for one requirements document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub esc: Option<Vec<String>>,
    pub aac: Vec<TaskAddition>,
    pub arc: Vec<PropertyRule>,
    pub tfc: Option<ObjectiveSpec>,
    pub cc: Vec<PropertyRule>,
}

impl ConstraintSet {
    pub fn is_empty(&self) -> bool {
        self.esc.is_none()
            && self.aac.is_empty()
            && self.arc.is_empty()
            && self.tfc.is_none()
            && self.cc.is_empty()
    }
}

// Raw lexemes, before dictionary normalization.
#[derive(Debug, Clone, PartialEq)]
enum Lexeme {
    Word(String),
    Quoted(String),
    Number(String),
    Separator,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\''
}

fn scan_lexemes(sentence: &str) -> Result<Vec<Lexeme>, ExtractError> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut lexemes = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let open_column = i + 1;
            i += 1;
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(ExtractError::UnbalancedQuote {
                    column: open_column,
                });
            }
            lexemes.push(Lexeme::Quoted(chars[start..i].iter().collect()));
            i += 1;
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                i += 1;
            }
            // Thousands separators: a comma counts as part of the number
            // only when followed by exactly three digits ("15,000,000");
            // otherwise it is a list separator ("90, 95").
            loop {
                if i < chars.len() && chars[i] == ',' {
                    let group: Vec<char> = chars[i + 1..].iter().take(4).copied().collect();
                    let three_digits =
                        group.len() >= 3 && group[..3].iter().all(|c| c.is_ascii_digit());
                    let fourth_is_digit = group.len() == 4 && group[3].is_ascii_digit();
                    if three_digits && !fourth_is_digit {
                        digits.extend(&group[..3]);
                        i += 4;
                        continue;
                    }
                }
                break;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                digits.push('.');
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    digits.push(chars[i]);
                    i += 1;
                }
            }
            lexemes.push(Lexeme::Number(digits));
        } else if c == ',' || c == '\u{3001}' {
            lexemes.push(Lexeme::Separator);
            i += 1;
        } else if SENTENCE_PUNCTUATION.contains(&c) {
            i += 1;
        } else if is_word_char(c) {
            let mut word = String::new();
            while i < chars.len() && is_word_char(chars[i]) {
                word.push(chars[i]);
                i += 1;
            }
            lexemes.push(Lexeme::Word(word));
        } else {
            // Stray symbol; skip it rather than fail the sentence.
            i += 1;
        }
    }
    Ok(lexemes)
}

/// Tokenizes one requirement sentence: dictionary phrases collapse to
/// canonical tokens (longest match wins), quoted spans become single name
/// tokens verbatim, numbers lose their thousands separators, and unit
/// words trailing a number are dropped.
pub fn tokenize(sentence: &str, dict: &Dictionary) -> Result<Vec<Token>, ExtractError> {
    let lexemes = scan_lexemes(sentence)?;
    let mut tokens: Vec<(Token, bool)> = Vec::new(); // (token, from_quote)

    let mut i = 0;
    while i < lexemes.len() {
        match &lexemes[i] {
            Lexeme::Quoted(text) => {
                tokens.push((Token::new(TokenTag::Name, text.clone()), true));
                i += 1;
            }
            Lexeme::Number(text) => {
                tokens.push((Token::new(TokenTag::Number, text.clone()), false));
                i += 1;
            }
            Lexeme::Separator => {
                tokens.push((Token::new(TokenTag::Separator, ","), false));
                i += 1;
            }
            Lexeme::Word(_) => {
                // Collect the run of consecutive plain words for phrase lookup.
                let mut words = Vec::new();
                let mut j = i;
                while j < lexemes.len() {
                    if let Lexeme::Word(w) = &lexemes[j] {
                        words.push(w.clone());
                        j += 1;
                    } else {
                        break;
                    }
                }
                if let Some((entry, consumed)) = dict.longest_match(&words) {
                    let tag = TokenTag::parse(&entry.tag).unwrap_or(TokenTag::Keyword);
                    tokens.push((Token::new(tag, entry.canonical.clone()), false));
                    i += consumed;
                } else {
                    let word = words[0].clone();
                    if !DROPPED_WORDS.contains(&word.to_lowercase().as_str()) {
                        tokens.push((Token::new(TokenTag::Name, word), false));
                    }
                    i += 1;
                }
            }
        }
    }

    // Drop unquoted name tokens directly following a number: these are
    // units ("2500 hours"). Quoted names always survive.
    let mut out: Vec<Token> = Vec::new();
    for (token, from_quote) in tokens {
        let after_number = matches!(out.last(), Some(t) if t.tag == TokenTag::Number);
        if token.tag == TokenTag::Name && !from_quote && after_number {
            continue;
        }
        out.push(token);
    }
    Ok(out)
}

/// Renders tokens back to canonical sentence text. Name tokens are quoted
/// so that dictionary words and multi-word names survive re-tokenization.
pub fn render_tokens(tokens: &[Token]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for token in tokens {
        match token.tag {
            TokenTag::Name => parts.push(format!("\"{}\"", token.text)),
            TokenTag::Separator => {
                if let Some(last) = parts.last_mut() {
                    last.push(',');
                } else {
                    parts.push(",".to_string());
                }
            }
            _ => parts.push(token.text.clone()),
        }
    }
    parts.join(" ")
}

// --- template matching -----------------------------------------------------

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Cursor { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// One name slot: consecutive name tokens joined with spaces. A
    /// separator inside a single-name slot is ambiguous.
    fn name_group(&mut self, slot: &str) -> Result<String, ExtractError> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            match t.tag {
                TokenTag::Name => {
                    parts.push(t.text.clone());
                    self.pos += 1;
                }
                TokenTag::Separator if !parts.is_empty() => {
                    return Err(ExtractError::Ambiguous {
                        detail: format!("two {slot} names where one was expected"),
                    });
                }
                _ => break,
            }
        }
        if parts.is_empty() {
            return Err(ExtractError::Malformed {
                detail: format!("expected a {slot} name"),
            });
        }
        Ok(parts.join(" "))
    }

    /// Skips an optional literal `property` keyword after a property slot.
    fn skip_property_keyword(&mut self) {
        if matches!(self.peek(), Some(t) if t.is_keyword("property")) {
            self.pos += 1;
        }
    }

    fn expect_single_number(&mut self) -> Result<f64, ExtractError> {
        let t = match self.bump() {
            Some(t) if t.tag == TokenTag::Number => t,
            other => {
                return Err(ExtractError::Malformed {
                    detail: format!(
                        "expected a number, found {}",
                        other.map_or("end of sentence".to_string(), |t| format!("'{}'", t.text))
                    ),
                })
            }
        };
        if matches!(self.peek(), Some(n) if n.tag == TokenTag::Number) {
            return Err(ExtractError::Ambiguous {
                detail: "two numbers where one was expected".to_string(),
            });
        }
        let value: f64 = t.text.parse().map_err(|_| ExtractError::Malformed {
            detail: format!("invalid number '{}'", t.text),
        })?;
        if !value.is_finite() {
            return Err(ExtractError::Malformed {
                detail: format!("number '{}' is out of range", t.text),
            });
        }
        Ok(value)
    }

    fn expect_end(&self) -> Result<(), ExtractError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ExtractError::Malformed {
                detail: format!("unexpected trailing '{}'", t.text),
            }),
        }
    }
}

fn relation_of(token: &Token) -> Option<Relation> {
    if token.tag != TokenTag::Relation {
        return None;
    }
    match token.text.as_str() {
        "greater" => Some(Relation::Greater),
        "less" => Some(Relation::Less),
        _ => None,
    }
}

fn direction_of(token: &Token) -> Option<Direction> {
    if token.tag != TokenTag::Objective {
        return None;
    }
    match token.text.as_str() {
        "max" => Some(Direction::Max),
        "min" => Some(Direction::Min),
        _ => None,
    }
}

fn match_selection(tokens: &[Token]) -> Result<Requirement, ExtractError> {
    let mut cur = Cursor::new(tokens);
    cur.bump(); // the "new model" marker
    match cur.bump() {
        Some(t) if t.is_keyword("shall") => {}
        _ => {
            return Err(ExtractError::Malformed {
                detail: "entity selection requires 'shall'".to_string(),
            })
        }
    }
    match cur.bump() {
        Some(t) if t.is_keyword("contain") => {}
        _ => {
            return Err(ExtractError::Malformed {
                detail: "entity selection requires 'contain' (or 'include')".to_string(),
            })
        }
    }
    let mut names: Vec<String> = Vec::new();
    loop {
        let mut parts = Vec::new();
        while let Some(t) = cur.peek() {
            if t.tag == TokenTag::Name {
                parts.push(t.text.clone());
                cur.pos += 1;
            } else {
                break;
            }
        }
        if parts.is_empty() {
            return Err(ExtractError::Malformed {
                detail: "expected an entity name in the selection list".to_string(),
            });
        }
        let name = parts.join(" ");
        if !names.iter().any(|n| n.eq_ignore_ascii_case(&name)) {
            names.push(name);
        }
        match cur.peek() {
            None => break,
            Some(t) if t.tag == TokenTag::Separator => {
                cur.pos += 1;
            }
            Some(t) => {
                return Err(ExtractError::Malformed {
                    detail: format!("unexpected '{}' in the selection list", t.text),
                })
            }
        }
    }
    Ok(Requirement::Selection(names))
}

fn match_addition(tokens: &[Token], shall_at: usize) -> Result<Requirement, ExtractError> {
    let entity_tokens = &tokens[..shall_at];
    let task_tokens = &tokens[shall_at + 2..];

    let mut cur = Cursor::new(entity_tokens);
    let entity = cur.name_group("entity")?;
    cur.expect_end()?;

    let mut cur = Cursor::new(task_tokens);
    let task = cur.name_group("task")?;
    cur.expect_end()?;

    Ok(Requirement::Addition(TaskAddition { entity, task }))
}

fn match_reservation(tokens: &[Token]) -> Result<Requirement, ExtractError> {
    let mut cur = Cursor::new(tokens);
    cur.bump(); // reserve
    let property = cur.name_group("property")?;
    cur.skip_property_keyword();
    let relation = match cur.bump().and_then(relation_of) {
        Some(r) => r,
        None => {
            return Err(ExtractError::Malformed {
                detail: "reservation requires a comparison ('higher than' / 'lower than')"
                    .to_string(),
            })
        }
    };
    let value = cur.expect_single_number()?;
    match cur.bump() {
        Some(t) if t.is_keyword("task") => {}
        _ => {
            return Err(ExtractError::Malformed {
                detail: "reservation must end with 'task' or 'tasks'".to_string(),
            })
        }
    }
    cur.expect_end()?;
    Ok(Requirement::Reservation(PropertyRule {
        property: property.to_lowercase(),
        relation,
        value,
    }))
}

fn match_objective(tokens: &[Token]) -> Result<Requirement, ExtractError> {
    let mut cur = Cursor::new(tokens);
    let property = cur.name_group("property")?;
    cur.skip_property_keyword();
    if matches!(cur.peek(), Some(t) if t.is_keyword("shall")) {
        cur.pos += 1;
    }
    let direction = match cur.bump().and_then(direction_of) {
        Some(d) => d,
        None => {
            return Err(ExtractError::Malformed {
                detail: "objective requires 'maximum' or 'minimum'".to_string(),
            })
        }
    };
    cur.expect_end()?;
    Ok(Requirement::Objective(ObjectiveSpec {
        property: property.to_lowercase(),
        direction,
    }))
}

fn match_bound(tokens: &[Token]) -> Result<Requirement, ExtractError> {
    let mut cur = Cursor::new(tokens);
    let property = cur.name_group("property")?;
    cur.skip_property_keyword();
    if matches!(cur.peek(), Some(t) if t.is_keyword("shall")) {
        cur.pos += 1;
    }
    let relation = match cur.bump().and_then(relation_of) {
        Some(r) => r,
        None => {
            return Err(ExtractError::Malformed {
                detail: "bound requires a comparison".to_string(),
            })
        }
    };
    let value = cur.expect_single_number()?;
    cur.expect_end()?;
    Ok(Requirement::Bound(PropertyRule {
        property: property.to_lowercase(),
        relation,
        value,
    }))
}

/// Classifies one tokenized sentence against the five templates, trying
/// them in order; the first applicable template wins.
pub fn match_templates(tokens: &[Token]) -> Result<Requirement, ExtractError> {
    // 1. Entity selection, anchored on the leading "new model" marker.
    if matches!(tokens.first(), Some(t) if t.is_keyword("new model")) {
        return match_selection(tokens);
    }
    // 2. Task augmentation, anchored on "... shall add ...".
    let shall_add = tokens
        .windows(2)
        .position(|w| w[0].is_keyword("shall") && w[1].is_keyword("add"));
    if let Some(i) = shall_add {
        return match_addition(tokens, i);
    }
    // 3. Task reservation, anchored on the leading "reserve".
    if matches!(tokens.first(), Some(t) if t.is_keyword("reserve")) {
        return match_reservation(tokens);
    }
    // 4. Objective, anchored on a max/min token.
    if tokens.iter().any(|t| t.tag == TokenTag::Objective) {
        return match_objective(tokens);
    }
    // 5. Property bound, anchored on a comparison token.
    if tokens.iter().any(|t| t.tag == TokenTag::Relation) {
        return match_bound(tokens);
    }
    Err(ExtractError::Unrecognized {
        sentence: render_tokens(tokens),
    })
}

/// Extracts a [`ConstraintSet`] from newline-separated requirement
/// sentences. Blank lines and `#` comments are ignored; errors carry the
/// 1-based line number. A second selection or objective sentence is a
/// conflict.
pub fn extract(requirements_text: &str, dict: &Dictionary) -> Result<ConstraintSet, ExtractError> {
    let mut set = ConstraintSet::default();
    let mut esc_line = None;
    let mut tfc_line = None;

    for (idx, raw_line) in requirements_text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens = tokenize(line, dict).map_err(|e| at_line(line_no, e))?;
        let record = if tokens.is_empty() {
            Err(ExtractError::Unrecognized {
                sentence: line.to_string(),
            })
        } else {
            match_templates(&tokens)
        }
        .map_err(|e| at_line(line_no, e))?;

        match record {
            Requirement::Selection(names) => {
                if let Some(first) = esc_line {
                    return Err(at_line(line_no, ExtractError::DuplicateSelection { first }));
                }
                esc_line = Some(line_no);
                set.esc = Some(names);
            }
            Requirement::Objective(objective) => {
                if let Some(first) = tfc_line {
                    return Err(at_line(line_no, ExtractError::DuplicateObjective { first }));
                }
                tfc_line = Some(line_no);
                set.tfc = Some(objective);
            }
            Requirement::Addition(addition) => set.aac.push(addition),
            Requirement::Reservation(rule) => set.arc.push(rule),
            Requirement::Bound(rule) => set.cc.push(rule),
        }
    }
    Ok(set)
}

fn render_number(v: f64) -> String {
    format!("{v}")
}

/// Renders a constraint set back to canonical requirement sentences.
/// Re-extracting the result yields an equal constraint set.
pub fn render_requirements(set: &ConstraintSet) -> String {
    let mut lines = Vec::new();
    if let Some(esc) = &set.esc {
        let names: Vec<String> = esc.iter().map(|n| format!("\"{n}\"")).collect();
        lines.push(format!("The new model shall contain {}", names.join(", ")));
    }
    for aac in &set.aac {
        lines.push(format!("\"{}\" shall add \"{}\"", aac.entity, aac.task));
    }
    if let Some(tfc) = &set.tfc {
        let direction = match tfc.direction {
            Direction::Max => "maximum",
            Direction::Min => "minimum",
        };
        lines.push(format!("The \"{}\" is {direction}", tfc.property));
    }
    for arc in &set.arc {
        let relation = match arc.relation {
            Relation::Greater => "higher than",
            Relation::Less => "lower than",
        };
        lines.push(format!(
            "Reserve \"{}\" {relation} {} tasks",
            arc.property,
            render_number(arc.value)
        ));
    }
    for cc in &set.cc {
        let relation = match cc.relation {
            Relation::Greater => "greater than",
            Relation::Less => "less than",
        };
        lines.push(format!(
            "The \"{}\" is {relation} {}",
            cc.property,
            render_number(cc.value)
        ));
    }
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}
