//! Regular expression syntax over an explicit ordered alphabet.
//!
//! Supported: literals, `[...]` classes with ranges and `^` negation,
//! `|`, juxtaposition, `*`, `+`, `?`, parentheses and `\` escapes
//! (`\xHH`, `\n`, `\r`, `\t`, or any escaped byte taken literally).
//! There are no anchors, no backreferences and no `.` wildcard.

use thiserror::Error;

use super::alphabet::{render_symbol, OrderedAlphabet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("symbol {} at offset {offset} is not in the alphabet", render_symbol(*symbol))]
    UnknownSymbol { symbol: u8, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexAst {
    /// The empty word.
    Epsilon,
    Literal(u8),
    /// Non-empty set of symbols, listed in alphabet order.
    Class(Vec<u8>),
    Concat(Vec<RegexAst>),
    Union(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
}

impl RegexAst {
    pub fn star(inner: RegexAst) -> Self {
        RegexAst::Star(Box::new(inner))
    }

    pub fn plus(inner: RegexAst) -> Self {
        RegexAst::Plus(Box::new(inner))
    }

    pub fn optional(inner: RegexAst) -> Self {
        RegexAst::Optional(Box::new(inner))
    }
}

pub fn parse_regex(text: &str, alphabet: &OrderedAlphabet) -> Result<RegexAst, RegexError> {
    let mut parser = Parser {
        input: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    let ast = parser.alternation()?;
    match parser.peek() {
        None => Ok(ast),
        Some(b')') => Err(parser.syntax("unmatched ')'")),
        Some(_) => Err(parser.syntax("unexpected character")),
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    alphabet: &'a OrderedAlphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn syntax(&self, message: &str) -> RegexError {
        self.syntax_at(self.pos, message)
    }

    fn syntax_at(&self, offset: usize, message: &str) -> RegexError {
        RegexError::Syntax {
            offset,
            message: message.to_owned(),
        }
    }

    fn member(&self, symbol: u8, offset: usize) -> Result<u8, RegexError> {
        if self.alphabet.contains(symbol) {
            Ok(symbol)
        } else {
            Err(RegexError::UnknownSymbol { symbol, offset })
        }
    }

    fn alternation(&mut self) -> Result<RegexAst, RegexError> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            RegexAst::Union(branches)
        })
    }

    fn concatenation(&mut self) -> Result<RegexAst, RegexError> {
        let mut items = Vec::new();
        while let Some(b) = self.peek() {
            if b == b'|' || b == b')' {
                break;
            }
            items.push(self.repetition()?);
        }
        Ok(match items.len() {
            0 => RegexAst::Epsilon,
            1 => items.pop().unwrap(),
            _ => RegexAst::Concat(items),
        })
    }

    fn repetition(&mut self) -> Result<RegexAst, RegexError> {
        let mut atom = self.atom()?;
        loop {
            atom = match self.peek() {
                Some(b'*') => RegexAst::star(atom),
                Some(b'+') => RegexAst::plus(atom),
                Some(b'?') => RegexAst::optional(atom),
                _ => return Ok(atom),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<RegexAst, RegexError> {
        let start = self.pos;
        match self.bump() {
            None => Err(self.syntax("unexpected end of pattern")),
            Some(b'(') => {
                let inner = self.alternation()?;
                if self.bump() != Some(b')') {
                    return Err(self.syntax_at(self.pos.min(self.input.len()), "expected ')'"));
                }
                Ok(inner)
            }
            Some(b'[') => self.class(start),
            Some(b'*' | b'+' | b'?') => Err(self.syntax_at(start, "nothing to repeat")),
            Some(b'\\') => {
                let symbol = self.escape(start)?;
                Ok(RegexAst::Literal(self.member(symbol, start)?))
            }
            Some(b) => Ok(RegexAst::Literal(self.member(b, start)?)),
        }
    }

    /// Called just after the backslash.
    fn escape(&mut self, start: usize) -> Result<u8, RegexError> {
        match self.bump() {
            None => Err(self.syntax_at(start, "dangling escape")),
            Some(b'n') => Ok(b'\n'),
            Some(b'r') => Ok(b'\r'),
            Some(b't') => Ok(b'\t'),
            Some(b'x') => {
                let digits = self
                    .input
                    .get(self.pos..self.pos + 2)
                    .and_then(|d| std::str::from_utf8(d).ok())
                    .and_then(|d| u8::from_str_radix(d, 16).ok())
                    .ok_or_else(|| self.syntax_at(start, "\\x expects two hex digits"))?;
                self.pos += 2;
                Ok(digits)
            }
            Some(b) => Ok(b),
        }
    }

    fn class_symbol(&mut self) -> Result<(u8, usize), RegexError> {
        let at = self.pos;
        match self.bump() {
            None => Err(self.syntax_at(at, "unterminated class")),
            Some(b'\\') => Ok((self.escape(at)?, at)),
            Some(b) => Ok((b, at)),
        }
    }

    /// Called just after `[`.
    fn class(&mut self, start: usize) -> Result<RegexAst, RegexError> {
        let negated = self.peek() == Some(b'^');
        if negated {
            self.pos += 1;
        }
        let mut selected = vec![false; self.alphabet.len()];
        let mut any = false;
        loop {
            match self.peek() {
                None => return Err(self.syntax("unterminated class")),
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => {}
            }
            let (lo, lo_at) = self.class_symbol()?;
            let is_range =
                self.peek() == Some(b'-') && !matches!(self.input.get(self.pos + 1), Some(b']') | None);
            if is_range {
                self.pos += 1;
                let (hi, hi_at) = self.class_symbol()?;
                if hi < lo {
                    return Err(self.syntax_at(lo_at, "inverted class range"));
                }
                for b in lo..=hi {
                    let at = if b == hi { hi_at } else { lo_at };
                    let idx = self.alphabet.index_of(self.member(b, at)?).unwrap();
                    selected[idx] = true;
                }
            } else {
                let idx = self.alphabet.index_of(self.member(lo, lo_at)?).unwrap();
                selected[idx] = true;
            }
            any = true;
        }
        if !any {
            return Err(self.syntax_at(start, "empty class"));
        }
        let members: Vec<u8> = selected
            .iter()
            .enumerate()
            .filter(|(_, &on)| on != negated)
            .map(|(i, _)| self.alphabet.symbol(i))
            .collect();
        if members.is_empty() {
            return Err(self.syntax_at(start, "class matches no alphabet symbol"));
        }
        Ok(RegexAst::Class(members))
    }
}
