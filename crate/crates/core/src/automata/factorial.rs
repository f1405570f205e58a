//! Factor (substring) closure of regular languages.

use super::dfa::Dfa;
use super::nfa::Nfa;

/// Minimal trim DFA for the set of all factors of `L(dfa)`.
///
/// Every state of the trimmed input becomes both initial and accepting; the
/// resulting NFA is determinized and minimized so that counting stays
/// unambiguous.
pub fn factorial_closure(dfa: &Dfa) -> Dfa {
    let d = dfa.trim();
    let n = d.state_count();
    let mut nfa = Nfa::with_states(d.alphabet().clone(), n);
    for q in 0..n {
        nfa.set_accepting(q, true);
        for (s, t) in d.successors(q) {
            nfa.add_transition(q, s, t);
        }
    }
    nfa.set_initial(0..n);
    nfa.determinize().trim().minimize()
}

/// True iff the language equals its own factor closure.
pub fn is_factorial(dfa: &Dfa) -> bool {
    dfa.equivalent(&factorial_closure(dfa))
}
