//! Deterministic automata with partial transition maps.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use super::alphabet::{render_symbol, AlphabetError, OrderedAlphabet};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("state {state} is outside 0..{count}")]
    StateOutOfRange { state: StateId, count: usize },
    #[error("state {state} has two transitions on symbol {}", render_symbol(*symbol))]
    NonDeterministic { state: StateId, symbol: u8 },
    #[error("dump line {line}: {message}")]
    Dump { line: usize, message: String },
}

/// A deterministic automaton over an [`OrderedAlphabet`].
///
/// Missing transitions reject. An automaton with zero states recognizes
/// the empty language and has no initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: OrderedAlphabet,
    /// Row-major `state * |A| + symbol`.
    delta: Vec<Option<StateId>>,
    initial: Option<StateId>,
    accepting: Vec<bool>,
    trim: bool,
}

impl Dfa {
    /// Builds an automaton from explicit `(source, symbol, target)` triples.
    /// The result is not marked trim; call [`Dfa::trim`] for that.
    pub fn new(
        alphabet: OrderedAlphabet,
        states: usize,
        initial: StateId,
        accepting: &[StateId],
        transitions: &[(StateId, u8, StateId)],
    ) -> Result<Self, DfaError> {
        let k = alphabet.len();
        let check = |state: StateId| {
            if state < states {
                Ok(state)
            } else {
                Err(DfaError::StateOutOfRange { state, count: states })
            }
        };
        check(initial)?;
        let mut accept = vec![false; states];
        for &q in accepting {
            accept[check(q)?] = true;
        }
        let mut delta = vec![None; states * k];
        for &(src, symbol, dst) in transitions {
            check(src)?;
            check(dst)?;
            let s = alphabet
                .index_of(symbol)
                .ok_or(AlphabetError::UnknownSymbol { symbol, offset: 0 })?;
            match delta[src * k + s] {
                Some(existing) if existing != dst => {
                    return Err(DfaError::NonDeterministic { state: src, symbol })
                }
                _ => delta[src * k + s] = Some(dst),
            }
        }
        Ok(Self {
            alphabet,
            delta,
            initial: Some(initial),
            accepting: accept,
            trim: false,
        })
    }

    pub(crate) fn from_raw(
        alphabet: OrderedAlphabet,
        delta: Vec<Option<StateId>>,
        initial: Option<StateId>,
        accepting: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(delta.len(), accepting.len() * alphabet.len());
        Self {
            alphabet,
            delta,
            initial,
            accepting,
            trim: false,
        }
    }

    /// The zero-state automaton of the empty language. It is trivially trim.
    pub fn empty(alphabet: OrderedAlphabet) -> Self {
        Self {
            alphabet,
            delta: Vec::new(),
            initial: None,
            accepting: Vec::new(),
            trim: true,
        }
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(q, _)| q)
    }

    pub fn is_trim(&self) -> bool {
        self.trim
    }

    pub fn is_empty_language(&self) -> bool {
        self.trim().state_count() == 0
    }

    /// Target of `state` on the symbol with alphabet index `symbol`.
    #[inline]
    pub fn next(&self, state: StateId, symbol: usize) -> Option<StateId> {
        self.delta[state * self.alphabet.len() + symbol]
    }

    /// Defined transitions out of `state` as `(symbol index, target)`,
    /// in alphabet order.
    pub fn successors(&self, state: StateId) -> impl Iterator<Item = (usize, StateId)> + '_ {
        let k = self.alphabet.len();
        self.delta[state * k..(state + 1) * k]
            .iter()
            .enumerate()
            .filter_map(|(s, t)| t.map(|t| (s, t)))
    }

    /// Runs the automaton on a word of symbol indices. `None` means the run
    /// died on a missing transition.
    pub fn run(&self, symbols: &[usize]) -> Option<StateId> {
        symbols
            .iter()
            .try_fold(self.initial?, |q, &s| self.next(q, s))
    }

    pub fn accepts(&self, word: &[u8]) -> Result<bool, AlphabetError> {
        let symbols = self.alphabet.encode(word)?;
        Ok(self.run(&symbols).is_some_and(|q| self.accepting[q]))
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let Some(start) = self.initial else {
            return seen;
        };
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            for (_, t) in self.successors(q) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut preds = vec![Vec::new(); n];
        for q in 0..n {
            for (_, t) in self.successors(q) {
                preds[t].push(q);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<StateId> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states that are reachable and co-reachable, preserving
    /// their relative numbering.
    pub fn trim(&self) -> Dfa {
        if self.trim {
            return self.clone();
        }
        let reach = self.reachable();
        let coreach = self.coreachable();
        let keep: Vec<bool> = reach.iter().zip(&coreach).map(|(a, b)| *a && *b).collect();
        let Some(initial) = self.initial.filter(|&q| keep[q]) else {
            return Dfa::empty(self.alphabet.clone());
        };
        let mut renumber = vec![None; self.state_count()];
        let mut next_id = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                renumber[q] = Some(next_id);
                next_id += 1;
            }
        }
        let k = self.alphabet.len();
        let mut delta = vec![None; next_id * k];
        let mut accepting = vec![false; next_id];
        for q in 0..self.state_count() {
            let Some(nq) = renumber[q] else { continue };
            accepting[nq] = self.accepting[q];
            for (s, t) in self.successors(q) {
                delta[nq * k + s] = renumber[t];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: renumber[initial],
            accepting,
            trim: true,
        }
    }

    /// Renumbers states in breadth-first discovery order from the initial
    /// state, exploring symbols in alphabet order. Unreachable states are
    /// dropped.
    pub fn canonicalize(&self) -> Dfa {
        let Some(start) = self.initial else {
            return Dfa::empty(self.alphabet.clone());
        };
        let mut order = vec![start];
        let mut renumber = vec![None; self.state_count()];
        renumber[start] = Some(0);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for (_, t) in self.successors(q) {
                if renumber[t].is_none() {
                    renumber[t] = Some(order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let k = self.alphabet.len();
        let mut delta = vec![None; order.len() * k];
        for (nq, &q) in order.iter().enumerate() {
            for (s, t) in self.successors(q) {
                delta[nq * k + s] = renumber[t];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: Some(0),
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
            trim: self.trim,
        }
    }

    /// Hopcroft partition refinement. The result is trim, minimal and
    /// canonically numbered.
    pub fn minimize(&self) -> Dfa {
        let d = self.trim();
        let n = d.state_count();
        if n == 0 {
            return d;
        }
        let k = d.alphabet.len();
        // State `n` is an explicit sink completing the partial map.
        let sink = n;
        let next = |q: StateId, s: usize| if q == sink { sink } else { d.next(q, s).unwrap_or(sink) };

        let mut inverse = vec![vec![Vec::new(); n + 1]; k];
        for q in 0..=n {
            for (s, preds) in inverse.iter_mut().enumerate() {
                preds[next(q, s)].push(q);
            }
        }

        let (acc, rej): (Vec<StateId>, Vec<StateId>) = (0..=n).partition(|&q| q != sink && d.accepting[q]);
        let mut blocks: Vec<Vec<StateId>> = [acc, rej].into_iter().filter(|b| !b.is_empty()).collect();
        let mut block_of = vec![0; n + 1];
        for (b, members) in blocks.iter().enumerate() {
            for &q in members {
                block_of[q] = b;
            }
        }
        let mut pending: Vec<Vec<bool>> = vec![vec![true; k]; blocks.len()];
        let mut work: Vec<(usize, usize)> = (0..blocks.len())
            .flat_map(|b| (0..k).map(move |s| (b, s)))
            .collect();

        let mut marked = vec![false; n + 1];
        while let Some((splitter, s)) = work.pop() {
            pending[splitter][s] = false;
            let mut touched: HashMap<usize, Vec<StateId>> = HashMap::new();
            for &t in &blocks[splitter] {
                for &q in &inverse[s][t] {
                    if !marked[q] {
                        marked[q] = true;
                        touched.entry(block_of[q]).or_default().push(q);
                    }
                }
            }
            let mut touched: Vec<(usize, Vec<StateId>)> = touched.into_iter().collect();
            touched.sort_unstable_by_key(|(b, _)| *b);
            for (y, inside) in touched {
                for &q in &inside {
                    marked[q] = false;
                }
                if inside.len() == blocks[y].len() {
                    continue;
                }
                let outside: Vec<StateId> = blocks[y].iter().copied().filter(|&q| !inside.contains(&q)).collect();
                let z = blocks.len();
                for &q in &outside {
                    block_of[q] = z;
                }
                let smaller_is_inside = inside.len() <= outside.len();
                blocks[y] = inside;
                blocks.push(outside);
                pending.push(vec![false; k]);
                let was_pending = pending[y].clone();
                for (c, was) in was_pending.into_iter().enumerate() {
                    if was {
                        pending[z][c] = true;
                        work.push((z, c));
                    } else {
                        let pick = if smaller_is_inside { y } else { z };
                        pending[pick][c] = true;
                        work.push((pick, c));
                    }
                }
            }
        }

        let dead = block_of[sink];
        let mut new_id = vec![None; blocks.len()];
        let mut count = 0;
        for (b, id) in new_id.iter_mut().enumerate() {
            if b != dead {
                *id = Some(count);
                count += 1;
            }
        }
        let mut delta = vec![None; count * k];
        let mut accepting = vec![false; count];
        for (b, members) in blocks.iter().enumerate() {
            let Some(nb) = new_id[b] else { continue };
            let rep = members[0];
            accepting[nb] = d.accepting[rep];
            for s in 0..k {
                delta[nb * k + s] = new_id[block_of[next(rep, s)]];
            }
        }
        let initial = new_id[block_of[d.initial.expect("non-empty trim automaton")]];
        Dfa {
            alphabet: d.alphabet.clone(),
            delta,
            initial,
            accepting,
            trim: true,
        }
        .canonicalize()
    }

    /// Language equality by breadth-first search over the product of the
    /// two (implicitly completed) automata. Automata over different ordered
    /// alphabets are never equivalent.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let accepts = |d: &Dfa, q: Option<StateId>| q.is_some_and(|q| d.accepting[q]);
        let start = (self.initial, other.initial);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            if accepts(self, p) != accepts(other, q) {
                return false;
            }
            for s in 0..self.alphabet.len() {
                let pair = (p.and_then(|p| self.next(p, s)), q.and_then(|q| other.next(q, s)));
                if pair != (None, None) && seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        true
    }

    /// True iff the trimmed automaton has a cycle, i.e. the language is
    /// infinite.
    pub fn is_infinite(&self) -> bool {
        let d = self.trim();
        let n = d.state_count();
        // 0 = unvisited, 1 = on the DFS stack, 2 = finished
        let mut color = vec![0u8; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, d.successors(root).map(|(_, t)| t).collect::<Vec<_>>())];
            color[root] = 1;
            while let Some((q, children)) = stack.last_mut() {
                let q = *q;
                match children.pop() {
                    Some(t) => match color[t] {
                        1 => return true,
                        0 => {
                            color[t] = 1;
                            let next: Vec<StateId> = d.successors(t).map(|(_, u)| u).collect();
                            stack.push((t, next));
                        }
                        _ => {}
                    },
                    None => {
                        color[q] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }

    /// Number of symbols leading from `p` to `q`.
    pub fn multiplicity(&self, p: StateId, q: StateId) -> usize {
        self.successors(p).filter(|&(_, t)| t == q).count()
    }
}
