//! Textual contract and trust-ladder language.
//!
//! ```text
//! contract  = ident ws comparator ws decimal
//!             [ ws "over" ws duration [ ws "max-episode" ws duration ] ]
//!             [ ws "per-group" ] ;
//! comparator = ">=" | ">" | "<=" | "<" ;
//! duration  = digits ( "ms" | "s" | "m" | "h" | "d" ) ;
//!
//! ladder    = { rule-line | comment | blank } default-line { comment | blank } ;
//! rule-line = "level" decimal "when" condition { "," condition } ;
//! condition = ident "in" "[" decimal "," ( decimal | "inf" ) ")" ;
//! default-line = "default" decimal ;
//! comment   = "#" { any } ;
//! ```
//!
//! Rendering is canonical: single spaces, `window`, `max-episode` and
//! `per-group` clauses in that order, decimals without trailing zeros and
//! durations in the largest unit that divides them exactly.

use std::fmt;

use thiserror::Error;

use crate::decimal::{Decimal, DecimalError};
use crate::model::{
    Comparator, ContractSpec, Ident, LadderCondition, LadderError, LadderRule, TrustLadder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("ladder has no `default` line")]
    MissingDefault,
}

const DURATION_UNITS: [(&str, u64); 5] = [
    ("d", 86_400_000),
    ("h", 3_600_000),
    ("m", 60_000),
    ("s", 1_000),
    ("ms", 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokenKind {
    Word,
    Op,
    Punct,
    Other,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    kind: TokenKind,
    text: &'a str,
    at: usize,
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-' | b'+' | b'%')
}

fn is_op_byte(b: u8) -> bool {
    matches!(b, b'<' | b'>' | b'=' | b'!')
}

/// Splits one line into tokens. `base` is the line's offset in the whole input.
fn tokenize(line: &str, base: usize) -> Vec<Token<'_>> {
    let bytes = line.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b' ' || b == b'\t' {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if is_word_byte(b) {
            while i < bytes.len() && is_word_byte(bytes[i]) {
                i += 1;
            }
            TokenKind::Word
        } else if is_op_byte(b) {
            while i < bytes.len() && is_op_byte(bytes[i]) {
                i += 1;
            }
            TokenKind::Op
        } else if matches!(b, b'[' | b']' | b'(' | b')' | b',') {
            i += 1;
            TokenKind::Punct
        } else {
            // a whole (possibly multi-byte) char
            i += line[i..].chars().next().map_or(1, char::len_utf8);
            TokenKind::Other
        };
        tokens.push(Token {
            kind,
            text: &line[start..i],
            at: base + start,
        });
    }
    tokens
}

struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    next: usize,
    end: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: &'a str, base: usize) -> Tokens<'a> {
        Tokens {
            tokens: tokenize(line, base),
            next: 0,
            end: base + line.len(),
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.next).copied()
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError {
                position: tok.at,
                expected: expected.to_owned(),
                found: format!("{:?}", tok.text),
            },
            None => ParseError {
                position: self.end,
                expected: expected.to_owned(),
                found: "end of input".to_owned(),
            },
        }
    }

    fn bump(&mut self) -> Option<Token<'a>> {
        let tok = self.peek();
        if tok.is_some() {
            self.next += 1;
        }
        tok
    }

    fn word(&mut self, expected: &str) -> Result<Token<'a>, ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Word => {
                self.next += 1;
                Ok(tok)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn eat_keyword(&mut self, keyword: &str) -> bool {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Word && tok.text == keyword => {
                self.next += 1;
                true
            }
            _ => false,
        }
    }

    fn keyword(&mut self, keyword: &str) -> Result<(), ParseError> {
        if self.eat_keyword(keyword) {
            Ok(())
        } else {
            Err(self.error(&format!("`{keyword}`")))
        }
    }

    fn punct(&mut self, p: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Punct && tok.text == p => {
                self.next += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("`{p}`"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Word => match Ident::new(tok.text) {
                Ok(id) => {
                    self.next += 1;
                    Ok(id)
                }
                Err(_) => Err(self.error(what)),
            },
            _ => Err(self.error(what)),
        }
    }

    fn decimal(&mut self, what: &str) -> Result<Decimal, ParseError> {
        let tok = self.word(what)?;
        tok.text.parse::<Decimal>().map_err(|e| {
            let position = match e {
                DecimalError::InvalidChar { offset, .. } => tok.at + offset,
                _ => tok.at,
            };
            ParseError {
                position,
                expected: format!("{what} ({e})"),
                found: format!("{:?}", tok.text),
            }
        })
    }

    fn duration(&mut self) -> Result<u64, ParseError> {
        let tok = self.word("duration such as 30d or 10m")?;
        parse_duration(tok.text).ok_or_else(|| ParseError {
            position: tok.at,
            expected: "duration: digits followed by ms, s, m, h or d".to_owned(),
            found: format!("{:?}", tok.text),
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }
}

/// `30d` -> 2_592_000_000 ticks (milliseconds).
pub fn parse_duration(s: &str) -> Option<u64> {
    // "ms" must be tried before "m" and "s"
    let (digits, unit) = if let Some(d) = s.strip_suffix("ms") {
        (d, 1)
    } else {
        let unit = DURATION_UNITS
            .iter()
            .find(|(suffix, _)| *suffix != "ms" && s.ends_with(suffix))?;
        (&s[..s.len() - unit.0.len()], unit.1)
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<u64>().ok()?.checked_mul(unit)
}

pub fn render_duration(ticks: u64) -> String {
    if ticks == 0 {
        return "0ms".to_owned();
    }
    let (suffix, unit) = DURATION_UNITS
        .iter()
        .find(|(_, unit)| ticks.is_multiple_of(*unit))
        .copied()
        .unwrap_or(("ms", 1));
    format!("{}{suffix}", ticks / unit)
}

pub fn parse_contract(src: &str) -> Result<ContractSpec, ParseError> {
    parse_contract_at(src, 0)
}

/// Like [`parse_contract`] but over raw bytes; invalid UTF-8 is a parse error
/// at the first bad byte.
pub fn parse_contract_bytes(src: &[u8]) -> Result<ContractSpec, ParseError> {
    match std::str::from_utf8(src) {
        Ok(s) => parse_contract(s),
        Err(e) => Err(ParseError {
            position: e.valid_up_to(),
            expected: "UTF-8 text".to_owned(),
            found: format!("byte 0x{:02x}", src[e.valid_up_to()]),
        }),
    }
}

fn parse_contract_at(src: &str, base: usize) -> Result<ContractSpec, ParseError> {
    let mut toks = Tokens::new(src, base);
    let capability = toks.ident("capability identifier")?;
    let comparator = match toks.peek() {
        Some(tok) if tok.kind == TokenKind::Op => match Comparator::parse(tok.text) {
            Some(c) => {
                toks.bump();
                c
            }
            None => return Err(toks.error("comparator (>=, >, <=, <)")),
        },
        _ => return Err(toks.error("comparator (>=, >, <=, <)")),
    };
    let threshold = toks.decimal("threshold")?;
    let mut window = None;
    let mut max_episode = None;
    if toks.eat_keyword("over") {
        window = Some(toks.duration()?);
        if toks.eat_keyword("max-episode") {
            max_episode = Some(toks.duration()?);
        }
    }
    let per_group = toks.eat_keyword("per-group");
    toks.finish()?;
    Ok(ContractSpec {
        capability,
        comparator,
        threshold,
        window,
        max_episode,
        per_group,
    })
}

pub fn render_contract(c: &ContractSpec) -> String {
    let mut out = format!("{} {} {}", c.capability, c.comparator.as_str(), c.threshold);
    if let Some(w) = c.window {
        out.push_str(" over ");
        out.push_str(&render_duration(w));
        if let Some(e) = c.max_episode {
            out.push_str(" max-episode ");
            out.push_str(&render_duration(e));
        }
    }
    if c.per_group {
        out.push_str(" per-group");
    }
    out
}

impl fmt::Display for ContractSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_contract(self))
    }
}

fn ladder_error(position: usize, err: LadderError) -> ParseError {
    ParseError {
        position,
        expected: "valid ladder rule".to_owned(),
        found: err.to_string(),
    }
}

/// Line-oriented ladder: `level L when cap in [a, b), ...` lines and one
/// trailing `default D`. Blank lines and `#` comments are skipped.
pub fn parse_ladder(src: &str) -> Result<TrustLadder, DslError> {
    let mut rules = Vec::new();
    let mut default: Option<(Decimal, usize)> = None;
    let mut offset = 0;
    for raw in src.split('\n') {
        let base = offset;
        offset += raw.len() + 1;
        let trimmed = raw.trim_start_matches([' ', '\t']);
        if trimmed.trim_end_matches([' ', '\t']).is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = Tokens::new(raw, base);
        if default.is_some() {
            return Err(toks.error("end of ladder after the default line").into());
        }
        if toks.eat_keyword("default") {
            let level_at = toks.peek().map_or(toks.end, |t| t.at);
            let level = toks.decimal("default level")?;
            toks.finish()?;
            default = Some((level, level_at));
            continue;
        }
        let rule_at = toks.peek().map_or(toks.end, |t| t.at);
        toks.keyword("level")?;
        let level = toks.decimal("level")?;
        toks.keyword("when")?;
        let mut conditions = Vec::new();
        loop {
            let capability = toks.ident("capability identifier")?;
            toks.keyword("in")?;
            toks.punct("[")?;
            let lower = toks.decimal("lower bound")?;
            toks.punct(",")?;
            let upper = if toks.eat_keyword("inf") {
                None
            } else {
                Some(toks.decimal("upper bound or `inf`")?)
            };
            toks.punct(")")?;
            conditions.push(LadderCondition {
                capability,
                lower,
                upper,
            });
            if toks.punct(",").is_err() {
                break;
            }
        }
        toks.finish()?;
        let rule = LadderRule { conditions, level };
        // validate eagerly so the error carries this line's position
        TrustLadder::new(vec![rule.clone()], Decimal::ZERO)
            .map_err(|e| ladder_error(rule_at, e))?;
        rules.push(rule);
    }
    let (default_level, at) = default.ok_or(DslError::MissingDefault)?;
    TrustLadder::new(rules, default_level).map_err(|e| DslError::Parse(ladder_error(at, e)))
}

pub fn render_ladder(ladder: &TrustLadder) -> String {
    let mut lines: Vec<String> = ladder
        .rules()
        .iter()
        .map(|rule| {
            let conds: Vec<String> = rule
                .conditions
                .iter()
                .map(|c| match c.upper {
                    Some(u) => format!("{} in [{}, {})", c.capability, c.lower, u),
                    None => format!("{} in [{}, inf)", c.capability, c.lower),
                })
                .collect();
            format!("level {} when {}", rule.level, conds.join(", "))
        })
        .collect();
    lines.push(format!("default {}", ladder.default_level()));
    lines.join("\n")
}
