//! Line-oriented text form of a [`Dfa`].
//!
//! ```text
//! alphabet a b
//! states 2
//! initial 0
//! accepting 0
//! 0 a 0
//! 0 b 1
//! 1 a 0
//! ```
//!
//! Symbols are written as themselves when printable ASCII, otherwise as
//! `\xHH`. The empty-language automaton dumps as `states 0` with
//! `initial none`. Blank lines and lines starting with `#` are ignored when
//! reading.

use std::fmt::Write as _;

use super::alphabet::{parse_symbol, render_symbol, OrderedAlphabet};
use super::dfa::{Dfa, DfaError, StateId};

pub fn dump_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    let alphabet: Vec<String> = dfa.alphabet().symbols().iter().map(|&s| render_symbol(s)).collect();
    writeln!(out, "alphabet {}", alphabet.join(" ")).unwrap();
    writeln!(out, "states {}", dfa.state_count()).unwrap();
    match dfa.initial() {
        Some(q) => writeln!(out, "initial {q}").unwrap(),
        None => writeln!(out, "initial none").unwrap(),
    }
    let accepting: Vec<String> = dfa.accepting_states().map(|q| q.to_string()).collect();
    if accepting.is_empty() {
        writeln!(out, "accepting").unwrap();
    } else {
        writeln!(out, "accepting {}", accepting.join(" ")).unwrap();
    }
    for q in 0..dfa.state_count() {
        for (s, t) in dfa.successors(q) {
            writeln!(out, "{q} {} {t}", render_symbol(dfa.alphabet().symbol(s))).unwrap();
        }
    }
    out
}

pub fn parse_dfa_dump(text: &str) -> Result<Dfa, DfaError> {
    let mut alphabet = None;
    let mut states = None;
    let mut initial: Option<Option<StateId>> = None;
    let mut accepting = Vec::new();
    let mut transitions = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| DfaError::Dump {
            line,
            message: message.to_owned(),
        };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let head = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        let state = |tok: &str| tok.parse::<StateId>().map_err(|_| err("expected a state number"));
        match head {
            "alphabet" => {
                let symbols = rest
                    .iter()
                    .map(|tok| parse_symbol(tok).ok_or_else(|| err("bad symbol token")))
                    .collect::<Result<Vec<u8>, _>>()?;
                alphabet = Some(OrderedAlphabet::new(&symbols)?);
            }
            "states" => match rest.as_slice() {
                [n] => states = Some(state(n)?),
                _ => return Err(err("expected `states N`")),
            },
            "initial" => match rest.as_slice() {
                ["none"] => initial = Some(None),
                [q] => initial = Some(Some(state(q)?)),
                _ => return Err(err("expected `initial q`")),
            },
            "accepting" => {
                accepting = rest.iter().map(|tok| state(tok)).collect::<Result<_, _>>()?;
            }
            _ => match rest.as_slice() {
                [symbol, dst] => {
                    let symbol = parse_symbol(symbol).ok_or_else(|| err("bad symbol token"))?;
                    transitions.push((state(head)?, symbol, state(dst)?));
                }
                _ => return Err(err("expected `src symbol dst`")),
            },
        }
    }

    let missing = |what: &str| DfaError::Dump {
        line: 0,
        message: format!("missing `{what}` line"),
    };
    let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let states = states.ok_or_else(|| missing("states"))?;
    match initial.ok_or_else(|| missing("initial"))? {
        Some(q) => Dfa::new(alphabet, states, q, &accepting, &transitions),
        None if states == 0 && transitions.is_empty() => Ok(Dfa::empty(alphabet)),
        None => Err(DfaError::Dump {
            line: 0,
            message: "`initial none` requires `states 0`".to_owned(),
        }),
    }
}
