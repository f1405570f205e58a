//! Abstract numeration systems: an infinite regular language read in radix
//! order as a bijection with the natural numbers.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::automata::{AlphabetError, Dfa, OrderedAlphabet};
use crate::counting::{CountCache, OpCounters};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnsError {
    #[error("automaton must be trim")]
    NotTrim,
    #[error("language is empty")]
    EmptyLanguage,
    #[error("language is finite")]
    FiniteLanguage,
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("word is not in the language: no transition at offset {offset}")]
    PrefixDies { offset: usize },
    #[error("word is not in the language: it ends in a non-accepting state")]
    NotAccepting,
    #[error("language has no word of length {0}")]
    NoWordOfLength(usize),
}

/// An infinite regular language over an ordered alphabet, with the
/// counting ladder used for ranking and unranking.
///
/// Clones share the ladder.
#[derive(Debug, Clone)]
pub struct Ans {
    dfa: Arc<Dfa>,
    cache: Arc<CountCache>,
}

impl Ans {
    pub fn new(dfa: Dfa) -> Result<Self, AnsError> {
        if !dfa.is_trim() {
            return Err(AnsError::NotTrim);
        }
        if dfa.state_count() == 0 {
            return Err(AnsError::EmptyLanguage);
        }
        if !dfa.is_infinite() {
            return Err(AnsError::FiniteLanguage);
        }
        let cache = CountCache::from_dfa(&dfa).map_err(|_| AnsError::NotTrim)?;
        Ok(Self {
            dfa: Arc::new(dfa),
            cache: Arc::new(cache),
        })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        self.dfa.alphabet()
    }

    pub fn cache(&self) -> &CountCache {
        &self.cache
    }

    pub fn radix_cmp(&self, u: &[u8], v: &[u8]) -> Result<Ordering, AnsError> {
        Ok(self.alphabet().radix_cmp(u, v)?)
    }

    /// Membership check with the failure reason.
    pub fn check_member(&self, word: &[u8]) -> Result<Vec<usize>, AnsError> {
        let symbols = self.alphabet().encode(word)?;
        let mut q = self.dfa.initial().expect("non-empty language");
        for (offset, &s) in symbols.iter().enumerate() {
            q = self.dfa.next(q, s).ok_or(AnsError::PrefixDies { offset })?;
        }
        if self.dfa.is_accepting(q) {
            Ok(symbols)
        } else {
            Err(AnsError::NotAccepting)
        }
    }

    /// Zero-based radix-order rank of `word`.
    pub fn val(&self, word: &[u8]) -> Result<BigUint, AnsError> {
        self.val_with(word, &mut OpCounters::default())
    }

    pub fn val_with(&self, word: &[u8], counters: &mut OpCounters) -> Result<BigUint, AnsError> {
        let symbols = self.check_member(word)?;
        let len = symbols.len();
        if len == 0 {
            return Ok(BigUint::zero());
        }
        let mut rank = self.cache.cum_count_with(len as i64 - 1, counters);
        self.cache.with_suffix_counts(len - 1, counters, |ladder| {
            let mut q = self.dfa.initial().unwrap();
            for (i, &s) in symbols.iter().enumerate() {
                let below = &ladder[len - 1 - i];
                for smaller in 0..s {
                    if let Some(t) = self.dfa.next(q, smaller) {
                        rank += &below[t];
                    }
                }
                q = self.dfa.next(q, s).unwrap();
            }
        });
        Ok(rank)
    }

    /// The word of rank `n`.
    pub fn rep(&self, n: &BigUint) -> Vec<u8> {
        self.rep_with(n, &mut OpCounters::default())
    }

    pub fn rep_with(&self, n: &BigUint, counters: &mut OpCounters) -> Vec<u8> {
        let len = self
            .cache
            .length_of_rank_with(n, counters)
            .expect("an infinite language has a word of every rank");
        let mut rest = n - self.cache.cum_count_with(len as i64 - 1, counters);
        let mut q = self.dfa.initial().unwrap();
        let mut out = Vec::with_capacity(len);
        if len > 0 {
            self.cache.with_suffix_counts(len - 1, counters, |ladder| {
                for remaining in (0..len).rev() {
                    let below = &ladder[remaining];
                    let (s, t) = self
                        .dfa
                        .successors(q)
                        .find(|&(_, t)| {
                            if rest < below[t] {
                                true
                            } else {
                                rest -= &below[t];
                                false
                            }
                        })
                        .expect("rank lies inside the length block");
                    out.push(self.alphabet().symbol(s));
                    q = t;
                }
            });
        }
        debug_assert!(rest.is_zero() && self.dfa.is_accepting(q));
        out
    }

    /// Length of `rep(n)` without building the word; logarithmic in the
    /// length.
    pub fn rep_len(&self, n: &BigUint) -> BigUint {
        self.rep_len_with(n, &mut OpCounters::default())
    }

    pub fn rep_len_with(&self, n: &BigUint, counters: &mut OpCounters) -> BigUint {
        self.cache
            .length_of_rank_by_squaring(n, counters)
            .expect("an infinite language has a word of every rank")
    }

    /// Radix-largest word of length `n`.
    pub fn max_word(&self, n: usize) -> Result<Vec<u8>, AnsError> {
        if self.cache.count(n).is_zero() {
            return Err(AnsError::NoWordOfLength(n));
        }
        Ok(self.rep(&(self.cache.cum_count(n as i64) - 1u32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile_regex;

    fn ans(pattern: &str, alphabet: &[u8]) -> Ans {
        Ans::new(compile_regex(pattern, &OrderedAlphabet::new(alphabet).unwrap()).unwrap()).unwrap()
    }

    fn big(n: u32) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binary_system_goldens() {
        let s2 = ans("0|1[01]*", b"01");
        let words = ["0", "1", "10", "11", "100"];
        for (n, w) in words.iter().enumerate() {
            assert_eq!(s2.rep(&big(n as u32)), w.as_bytes());
            assert_eq!(s2.val(w.as_bytes()).unwrap(), big(n as u32));
        }
    }

    #[test]
    fn fibonacci_system_ranks() {
        let fib = ans("(a|ba)*", b"ab");
        assert_eq!(fib.val(b"ba").unwrap(), big(3));
        assert_eq!(fib.rep(&big(5)), b"aba");
        assert_eq!(fib.val(b"").unwrap(), big(0));
        assert_eq!(fib.rep(&big(0)), b"");
    }

    #[test]
    fn membership_errors_are_distinguished() {
        let fib = ans("(a|ba)*", b"ab");
        assert_eq!(fib.val(b"abb"), Err(AnsError::PrefixDies { offset: 2 }));
        assert_eq!(fib.val(b"ab"), Err(AnsError::NotAccepting));
        assert!(matches!(fib.val(b"ac"), Err(AnsError::Alphabet(_))));
    }

    #[test]
    fn constructor_rejects_finite_and_empty() {
        let ab = OrderedAlphabet::new(b"ab").unwrap();
        let finite = compile_regex("ab", &ab).unwrap();
        assert_eq!(Ans::new(finite).unwrap_err(), AnsError::FiniteLanguage);
        assert_eq!(Ans::new(Dfa::empty(ab.clone())).unwrap_err(), AnsError::EmptyLanguage);
        let untrimmed = Dfa::new(ab, 1, 0, &[0], &[(0, b'a', 0)]).unwrap();
        assert_eq!(Ans::new(untrimmed).unwrap_err(), AnsError::NotTrim);
    }

    #[test]
    fn max_words() {
        assert_eq!(ans("0|1[01]*", b"01").max_word(2).unwrap(), b"11");
        assert_eq!(ans("(a|ba)*", b"ab").max_word(3).unwrap(), b"baa");
        assert_eq!(ans("a*", b"a").max_word(5).unwrap(), b"aaaaa");
        assert_eq!(ans("(aa)*", b"a").max_word(3), Err(AnsError::NoWordOfLength(3)));
    }

    #[test]
    fn radix_cmp_uses_alphabet_order() {
        let s2 = ans("0|1[01]*", b"01");
        assert_eq!(s2.radix_cmp(b"1", b"10").unwrap(), Ordering::Less);
        let rev = ans("[ab]*", b"ba");
        assert_eq!(rev.radix_cmp(b"a", b"b").unwrap(), Ordering::Greater);
        assert_eq!(rev.val(b"b").unwrap(), big(1));
    }

    #[test]
    fn zero_count_lengths_are_skipped() {
        let even = ans("(aa)*", b"a");
        assert_eq!(even.rep(&big(2)), b"aaaa");
        assert_eq!(even.val(b"aaaaaa").unwrap(), big(3));
    }

    #[test]
    fn rep_len_matches_rep() {
        let fib = ans("(a|ba)*", b"ab");
        for n in 0..200u32 {
            assert_eq!(fib.rep_len(&big(n)), BigUint::from(fib.rep(&big(n)).len()));
        }
    }

    #[test]
    fn fresh_val_cost() {
        let fib = ans("(a|ba)*", b"ab");
        let word = b"baaba".repeat(20);
        let word = &word[..];
        assert!(fib.dfa().accepts(word).unwrap());
        let mut ops = OpCounters::default();
        fib.val_with(word, &mut ops).unwrap();
        assert_eq!(ops.matrix_matrix, 0);
        assert_eq!(ops.matrix_vector, word.len() as u64 - 1);
        assert_eq!(ops.vector_vector, 1);
    }
}
