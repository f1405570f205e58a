//! Shared corpus and brute-force oracles for the integration suites.
#![allow(dead_code)]

use ansc::ans::Ans;
use ansc::automata::{compile_regex, Dfa, OrderedAlphabet};
use regex::bytes::Regex;

pub struct Lang {
    pub name: &'static str,
    pub pattern: &'static str,
    pub alphabet: OrderedAlphabet,
}

impl Lang {
    pub fn dfa(&self) -> Dfa {
        compile_regex(self.pattern, &self.alphabet).unwrap()
    }

    pub fn ans(&self) -> Ans {
        Ans::new(self.dfa()).unwrap()
    }

    /// Membership oracle from an unrelated regex engine.
    pub fn oracle(&self) -> Regex {
        Regex::new(&format!("(?-u)^(?:{})$", self.pattern)).unwrap()
    }

    /// Longest length whose exhaustive enumeration stays within `budget`
    /// candidate words, capped at `cap`.
    pub fn enumeration_depth(&self, cap: usize, budget: u64) -> usize {
        let k = self.alphabet.len() as u64;
        let mut total = 1u64;
        let mut layer = 1u64;
        for n in 1..=cap {
            layer = layer.saturating_mul(k);
            total = total.saturating_add(layer);
            if total > budget {
                return n - 1;
            }
        }
        cap
    }
}

fn lang(name: &'static str, pattern: &'static str, alphabet: &[u8]) -> Lang {
    Lang {
        name,
        pattern,
        alphabet: OrderedAlphabet::new(alphabet).unwrap(),
    }
}

pub fn fib() -> Lang {
    lang("fibonacci", "(a|ba)*", b"ab")
}

pub fn poly() -> Lang {
    lang("three-block", "[ab]*[cd]*[ef]+", b"abcdef")
}

pub fn binary() -> Lang {
    lang("binary", "0|1[01]*", b"01")
}

/// Infinite languages used by every property suite.
pub fn corpus() -> Vec<Lang> {
    vec![
        lang("even", "(aa)*", b"a"),
        lang("a-then-b", "a*b*", b"ab"),
        fib(),
        poly(),
        binary(),
        lang("rotation", "(abc)*", b"abc"),
        lang("reversed", "[ab]*", b"ba"),
        lang("decimal", "0|[1-9][0-9]*", b"0123456789"),
        lang("hex", "[a-f][0-9a-f]*", b"0123456789abcdef"),
        lang("nonzero-bytes", "[^\\x00]*", &(0..=255u8).collect::<Vec<_>>()),
        lang("optional-tail", "a(b|cc)*d?", b"abcd"),
        lang("no-bb", "(b|)(a|ab)*", b"ab"),
    ]
}

/// Regexes that may denote finite or empty languages as well.
pub fn finite_corpus() -> Vec<Lang> {
    vec![
        lang("single", "ab", b"ab"),
        lang("epsilon-only", "", b"ab"),
        lang("small-set", "a|ab|ba|bab", b"ab"),
        lang("bounded", "[ab]?[ab]?[ab]?c", b"abc"),
    ]
}

/// All words of length `n` in radix order.
pub fn words_of_length(alphabet: &OrderedAlphabet, n: usize) -> Vec<Vec<u8>> {
    let k = alphabet.len();
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut w = vec![0u8; n];
            for slot in w.iter_mut().rev() {
                *slot = alphabet.symbol(i % k);
                i /= k;
            }
            w
        })
        .collect()
}

/// Members of length at most `max_len`, in radix order, by filtering every
/// candidate through the oracle.
pub fn members_up_to(l: &Lang, max_len: usize) -> Vec<Vec<u8>> {
    let re = l.oracle();
    (0..=max_len)
        .flat_map(|n| words_of_length(&l.alphabet, n))
        .filter(|w| re.is_match(w))
        .collect()
}

pub fn brute_count(l: &Lang, n: usize) -> u64 {
    let re = l.oracle();
    words_of_length(&l.alphabet, n).iter().filter(|w| re.is_match(w)).count() as u64
}

/// A word of length `len` read along a uniformly random walk in `dfa`.
/// Every state must have a successor and be accepting, as in the trim
/// automaton of an infinite factorial language without dead ends.
pub fn random_walk(dfa: &Dfa, len: usize, rng: &mut impl rand::Rng) -> Vec<u8> {
    let mut q = dfa.initial().unwrap();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let next: Vec<(usize, usize)> = dfa.successors(q).collect();
        let (s, t) = next[rng.gen_range(0..next.len())];
        out.push(dfa.alphabet().symbol(s));
        q = t;
    }
    assert!(dfa.is_accepting(q));
    out
}
