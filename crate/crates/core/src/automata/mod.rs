//! Regex parsing and deterministic automaton construction.
//!
//! Pipeline: [`parse_regex`] → Thompson NFA → subset construction → trim →
//! Hopcroft minimization. Every automaton handed to the counting layer is
//! a trim DFA with a partial transition map.

mod alphabet;
mod dfa;
mod dump;
mod factorial;
mod nfa;
mod regex;

use thiserror::Error;

pub use alphabet::{parse_symbol, render_symbol, AlphabetError, OrderedAlphabet};
pub use dfa::{Dfa, DfaError, StateId};
pub use dump::{dump_dfa, parse_dfa_dump};
pub use factorial::{factorial_closure, is_factorial};
pub use nfa::Nfa;
pub use regex::{parse_regex, RegexAst, RegexError};

/// Trim, minimal DFA for the language of `ast`.
pub fn compile(ast: &RegexAst, alphabet: &OrderedAlphabet) -> Dfa {
    Nfa::from_ast(ast, alphabet).determinize().trim().minimize()
}

/// Trim DFA straight out of the subset construction, not minimized.
pub fn compile_unminimized(ast: &RegexAst, alphabet: &OrderedAlphabet) -> Dfa {
    Nfa::from_ast(ast, alphabet).determinize().trim()
}

pub fn compile_regex(pattern: &str, alphabet: &OrderedAlphabet) -> Result<Dfa, RegexError> {
    Ok(compile(&parse_regex(pattern, alphabet)?, alphabet))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Regex(#[from] RegexError),
    #[error(transparent)]
    Dfa(#[from] DfaError),
}
