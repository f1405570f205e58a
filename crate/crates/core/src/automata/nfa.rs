//! Nondeterministic automata: Thompson construction and subset construction.

use std::collections::{HashMap, VecDeque};

use super::alphabet::{AlphabetError, OrderedAlphabet};
use super::dfa::{Dfa, StateId};
use super::regex::RegexAst;

#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: OrderedAlphabet,
    /// `transitions[state][symbol]` lists target states.
    transitions: Vec<Vec<Vec<StateId>>>,
    epsilon: Vec<Vec<StateId>>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
}

impl Nfa {
    /// An automaton with `states` states and no transitions.
    pub fn with_states(alphabet: OrderedAlphabet, states: usize) -> Self {
        let k = alphabet.len();
        Self {
            transitions: vec![vec![Vec::new(); k]; states],
            epsilon: vec![Vec::new(); states],
            initial: Vec::new(),
            accepting: vec![false; states],
            alphabet,
        }
    }

    /// Thompson construction.
    pub fn from_ast(ast: &RegexAst, alphabet: &OrderedAlphabet) -> Self {
        let mut nfa = Self::with_states(alphabet.clone(), 0);
        let (start, end) = nfa.fragment(ast);
        nfa.initial = vec![start];
        nfa.accepting[end] = true;
        nfa
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn set_initial(&mut self, states: impl IntoIterator<Item = StateId>) {
        let mut initial: Vec<StateId> = states.into_iter().collect();
        initial.sort_unstable();
        initial.dedup();
        assert!(initial.iter().all(|&q| q < self.state_count()));
        self.initial = initial;
    }

    pub fn set_accepting(&mut self, state: StateId, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn add_transition(&mut self, from: StateId, symbol: usize, to: StateId) {
        assert!(to < self.state_count());
        let targets = &mut self.transitions[from][symbol];
        if !targets.contains(&to) {
            targets.push(to);
        }
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        assert!(to < self.state_count());
        self.epsilon[from].push(to);
    }

    fn new_state(&mut self) -> StateId {
        self.transitions.push(vec![Vec::new(); self.alphabet.len()]);
        self.epsilon.push(Vec::new());
        self.accepting.push(false);
        self.transitions.len() - 1
    }

    fn fragment(&mut self, ast: &RegexAst) -> (StateId, StateId) {
        match ast {
            RegexAst::Epsilon => {
                let (s, e) = (self.new_state(), self.new_state());
                self.add_epsilon(s, e);
                (s, e)
            }
            RegexAst::Literal(b) => self.symbol_fragment(std::slice::from_ref(b)),
            RegexAst::Class(members) => self.symbol_fragment(members),
            RegexAst::Concat(items) => {
                let mut parts = items.iter().map(|item| self.fragment(item)).collect::<Vec<_>>();
                for pair in parts.windows(2) {
                    self.add_epsilon(pair[0].1, pair[1].0);
                }
                let last = parts.pop().expect("non-empty concatenation");
                (parts.first().map_or(last.0, |p| p.0), last.1)
            }
            RegexAst::Union(branches) => {
                let (s, e) = (self.new_state(), self.new_state());
                for branch in branches {
                    let (bs, be) = self.fragment(branch);
                    self.add_epsilon(s, bs);
                    self.add_epsilon(be, e);
                }
                (s, e)
            }
            RegexAst::Star(inner) | RegexAst::Plus(inner) | RegexAst::Optional(inner) => {
                let (s, e) = (self.new_state(), self.new_state());
                let (is, ie) = self.fragment(inner);
                self.add_epsilon(s, is);
                self.add_epsilon(ie, e);
                if !matches!(ast, RegexAst::Plus(_)) {
                    self.add_epsilon(s, e);
                }
                if !matches!(ast, RegexAst::Optional(_)) {
                    self.add_epsilon(ie, is);
                }
                (s, e)
            }
        }
    }

    fn symbol_fragment(&mut self, symbols: &[u8]) -> (StateId, StateId) {
        let (s, e) = (self.new_state(), self.new_state());
        for &b in symbols {
            let idx = self
                .alphabet
                .index_of(b)
                .expect("regex symbols are validated against the alphabet");
            self.add_transition(s, idx, e);
        }
        (s, e)
    }

    /// Sorted epsilon closure of `states`.
    fn closure(&self, states: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut stack: Vec<StateId> = states.into_iter().collect();
        for &q in &stack {
            seen[q] = true;
        }
        let mut out = Vec::new();
        while let Some(q) = stack.pop() {
            out.push(q);
            for &r in &self.epsilon[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn step(&self, set: &[StateId], symbol: usize) -> Vec<StateId> {
        let targets = set.iter().flat_map(|&q| self.transitions[q][symbol].iter().copied());
        self.closure(targets)
    }

    pub fn accepts(&self, word: &[u8]) -> Result<bool, AlphabetError> {
        let symbols = self.alphabet.encode(word)?;
        let mut current = self.closure(self.initial.iter().copied());
        for s in symbols {
            if current.is_empty() {
                return Ok(false);
            }
            current = self.step(&current, s);
        }
        Ok(current.iter().any(|&q| self.accepting[q]))
    }

    /// Subset construction. Only non-empty subsets become states, so the
    /// result has a partial transition map and no dead sink.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let start = self.closure(self.initial.iter().copied());
        if start.is_empty() {
            return Dfa::empty(self.alphabet.clone());
        }
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta: Vec<Option<StateId>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let set = subsets[id].clone();
            delta.resize((id + 1) * k, None);
            for s in 0..k {
                let next = self.step(&set, s);
                if next.is_empty() {
                    continue;
                }
                let target = match ids.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        ids.insert(next.clone(), t);
                        subsets.push(next);
                        queue.push_back(t);
                        t
                    }
                };
                delta[id * k + s] = Some(target);
            }
        }
        delta.resize(subsets.len() * k, None);
        let accepting = subsets
            .iter()
            .map(|set| set.iter().any(|&q| self.accepting[q]))
            .collect();
        Dfa::from_raw(self.alphabet.clone(), delta, Some(0), accepting)
    }
}
