//! Totally ordered byte alphabets.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one symbol")]
    Empty,
    #[error("alphabet contains duplicate symbol {}", render_symbol(*.0))]
    Duplicate(u8),
    #[error("symbol {} at offset {offset} is not in the alphabet", render_symbol(*symbol))]
    UnknownSymbol { symbol: u8, offset: usize },
}

/// A finite set of byte symbols ordered by declaration position.
///
/// Index 0 is the smallest symbol. Comparing two symbols compares their
/// indices, never their byte values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedAlphabet {
    symbols: Vec<u8>,
    position: [u16; 256],
}

const ABSENT: u16 = u16::MAX;

impl OrderedAlphabet {
    pub fn new(symbols: &[u8]) -> Result<Self, AlphabetError> {
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut position = [ABSENT; 256];
        for (i, &s) in symbols.iter().enumerate() {
            if position[s as usize] != ABSENT {
                return Err(AlphabetError::Duplicate(s));
            }
            position[s as usize] = i as u16;
        }
        Ok(Self {
            symbols: symbols.to_vec(),
            position,
        })
    }

    /// Every byte value, in ascending byte order.
    pub fn all_bytes() -> Self {
        let all: Vec<u8> = (0..=255u8).collect();
        Self::new(&all).expect("256 distinct bytes")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> u8 {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        match self.position[symbol as usize] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index_of(symbol).is_some()
    }

    /// Maps a word to symbol indices, failing on the first foreign byte.
    pub fn encode(&self, word: &[u8]) -> Result<Vec<usize>, AlphabetError> {
        word.iter()
            .enumerate()
            .map(|(offset, &symbol)| {
                self.index_of(symbol)
                    .ok_or(AlphabetError::UnknownSymbol { symbol, offset })
            })
            .collect()
    }

    pub fn decode(&self, indices: &[usize]) -> Vec<u8> {
        indices.iter().map(|&i| self.symbols[i]).collect()
    }

    pub fn cmp_symbols(&self, a: u8, b: u8) -> Result<Ordering, AlphabetError> {
        let ia = self
            .index_of(a)
            .ok_or(AlphabetError::UnknownSymbol { symbol: a, offset: 0 })?;
        let ib = self
            .index_of(b)
            .ok_or(AlphabetError::UnknownSymbol { symbol: b, offset: 0 })?;
        Ok(ia.cmp(&ib))
    }

    /// Radix (length-lexicographic) order: shorter words first, equal
    /// lengths compared symbol by symbol under the alphabet order.
    pub fn radix_cmp(&self, u: &[u8], v: &[u8]) -> Result<Ordering, AlphabetError> {
        let u = self.encode(u)?;
        let v = self.encode(v)?;
        Ok(u.len().cmp(&v.len()).then_with(|| u.cmp(&v)))
    }
}

impl fmt::Debug for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedAlphabet(\"")?;
        for &s in &self.symbols {
            write!(f, "{}", render_symbol(s))?;
        }
        write!(f, "\")")
    }
}

/// Printable ASCII (other than space and backslash) renders as itself,
/// everything else as `\xHH`.
pub fn render_symbol(symbol: u8) -> String {
    if symbol.is_ascii_graphic() && symbol != b'\\' {
        (symbol as char).to_string()
    } else {
        format!("\\x{symbol:02x}")
    }
}

/// Inverse of [`render_symbol`] for a single token.
pub fn parse_symbol(token: &str) -> Option<u8> {
    let bytes = token.as_bytes();
    match bytes {
        [b] if *b != b'\\' => Some(*b),
        [b'\\', b'x', h, l] => {
            let hex = std::str::from_utf8(&[*h, *l]).ok()?.to_owned();
            u8::from_str_radix(&hex, 16).ok()
        }
        _ => None,
    }
}
