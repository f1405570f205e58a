//! Growth classification of regular languages.
//!
//! The index of a trim DFA is the Perron–Frobenius root of its adjacency
//! matrix, which equals the largest root over its strongly connected
//! components. Components are classified exactly with integer arithmetic
//! first; floating point is used only to approximate roots strictly
//! greater than one.

use thiserror::Error;

use crate::automata::{Dfa, StateId};

/// Tolerance used when comparing numeric component roots for the
/// polynomial index.
pub const MARK_TOLERANCE: f64 = 1e-6;
/// Largest Collatz–Wielandt bracket width accepted as converged. Once
/// inside it, iteration continues while the bracket still narrows, so the
/// root is usually accurate to machine precision.
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("automaton must be trim")]
    NotTrim,
    #[error("language is finite")]
    FiniteLanguage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Finite,
    Polynomial,
    Exponential,
}

impl GrowthClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthClass::Finite => "finite",
            GrowthClass::Polynomial => "polynomial",
            GrowthClass::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccClass {
    /// One state, no self-loop: root 0.
    Trivial,
    /// Every state has exactly one transition staying inside: root 1.
    Cycle,
    /// Anything else: root strictly above 1.
    Expanding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component id of each state.
    pub component_of: Vec<usize>,
    /// Members of each component. Ids are in reverse topological order:
    /// every condensation edge goes from a higher id to a lower one.
    pub components: Vec<Vec<StateId>>,
    /// Deduplicated condensation successors per component.
    pub edges: Vec<Vec<usize>>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Iterative Tarjan decomposition plus condensation.
pub fn scc_decompose(dfa: &Dfa) -> SccDecomposition {
    let n = dfa.state_count();
    let succ: Vec<Vec<StateId>> = (0..n).map(|q| dfa.successors(q).map(|(_, t)| t).collect()).collect();

    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut component_of = vec![UNSEEN; n];
    let mut components: Vec<Vec<StateId>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (state, next successor position)
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component_of[w] = id;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }

    let mut edges = vec![Vec::new(); components.len()];
    for (p, targets) in succ.iter().enumerate() {
        for &q in targets {
            let (cp, cq) = (component_of[p], component_of[q]);
            if cp != cq {
                edges[cp].push(cq);
            }
        }
    }
    for e in &mut edges {
        e.sort_unstable();
        e.dedup();
    }
    SccDecomposition {
        component_of,
        components,
        edges,
    }
}

/// Exact classification of one component by its internal out-degrees.
pub fn exact_scc_class(members: &[StateId], dfa: &Dfa) -> SccClass {
    let inside = |q: StateId| members.contains(&q);
    let degrees: Vec<usize> = members
        .iter()
        .map(|&p| dfa.successors(p).filter(|&(_, t)| inside(t)).count())
        .collect();
    if members.len() == 1 && degrees[0] == 0 {
        SccClass::Trivial
    } else if degrees.iter().all(|&d| d == 1) {
        SccClass::Cycle
    } else {
        SccClass::Expanding
    }
}

/// Perron root of the component's adjacency submatrix, estimated by power
/// iteration on `A + I` (primitive, so no oscillation) and shifted back.
///
/// Returns the midpoint of the final Collatz–Wielandt bracket and its
/// half-width.
pub fn component_root(members: &[StateId], dfa: &Dfa) -> (f64, f64) {
    let m = members.len();
    let pos = |q: StateId| members.iter().position(|&x| x == q);
    let mut shifted = vec![0.0f64; m * m];
    for (i, &p) in members.iter().enumerate() {
        shifted[i * m + i] += 1.0;
        for (_, t) in dfa.successors(p) {
            if let Some(j) = pos(t) {
                shifted[i * m + j] += 1.0;
            }
        }
    }
    let mut v = vec![1.0f64; m];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    let mut width = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERATIONS {
        let w: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| shifted[i * m + j] * v[j]).sum())
            .collect();
        lo = f64::INFINITY;
        hi = 0.0f64;
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let scale = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / scale).collect();
        let narrowed = hi - lo < width;
        width = width.min(hi - lo);
        if width < POWER_TOLERANCE && (!narrowed || width <= f64::EPSILON * hi) {
            break;
        }
    }
    ((lo + hi) / 2.0 - 1.0, (hi - lo) / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthInfo {
    pub class: GrowthClass,
    /// 0 or 1 exactly unless the class is exponential.
    pub index: f64,
    pub index_tolerance: f64,
    /// `None` for finite languages.
    pub polynomial_index: Option<usize>,
    pub scc_count: usize,
}

impl GrowthInfo {
    /// Growth order `n^pd * Ind^n` with the index at 12 decimals.
    pub fn theta(&self) -> String {
        match self.polynomial_index {
            None => "0 (finite)".to_owned(),
            Some(pd) => format!("n^{pd} * {:.12}^n", self.index),
        }
    }
}

struct ComponentRoots {
    scc: SccDecomposition,
    classes: Vec<SccClass>,
    roots: Vec<(f64, f64)>,
}

fn component_roots(dfa: &Dfa) -> Result<ComponentRoots, GrowthError> {
    if !dfa.is_trim() {
        return Err(GrowthError::NotTrim);
    }
    let scc = scc_decompose(dfa);
    let classes: Vec<SccClass> = scc.components.iter().map(|c| exact_scc_class(c, dfa)).collect();
    let roots = scc
        .components
        .iter()
        .zip(&classes)
        .map(|(members, class)| match class {
            SccClass::Trivial => (0.0, 0.0),
            SccClass::Cycle => (1.0, 0.0),
            SccClass::Expanding => component_root(members, dfa),
        })
        .collect();
    Ok(ComponentRoots { scc, classes, roots })
}

fn global_index(c: &ComponentRoots) -> (f64, f64, GrowthClass) {
    let expanding = c
        .classes
        .iter()
        .zip(&c.roots)
        .filter(|(class, _)| **class == SccClass::Expanding)
        .map(|(_, r)| *r)
        .max_by(|a, b| a.0.total_cmp(&b.0));
    match expanding {
        Some((root, tol)) => (root, tol, GrowthClass::Exponential),
        None if c.classes.contains(&SccClass::Cycle) => (1.0, 0.0, GrowthClass::Polynomial),
        None => (0.0, 0.0, GrowthClass::Finite),
    }
}

/// Index (Frobenius root) and growth class of a trim DFA.
pub fn index(dfa: &Dfa) -> Result<(f64, GrowthClass), GrowthError> {
    let c = component_roots(dfa)?;
    let (root, _, class) = global_index(&c);
    Ok((root, class))
}

fn polynomial_index_of(c: &ComponentRoots) -> Option<usize> {
    let (root, _, class) = global_index(c);
    let marked: Vec<bool> = c
        .classes
        .iter()
        .zip(&c.roots)
        .map(|(sc, r)| match class {
            GrowthClass::Finite => false,
            GrowthClass::Polynomial => *sc == SccClass::Cycle,
            GrowthClass::Exponential => *sc == SccClass::Expanding && (r.0 - root).abs() <= MARK_TOLERANCE,
        })
        .collect();
    if class == GrowthClass::Finite {
        return None;
    }
    // Successors always carry lower ids, so ascending order is topological
    // from the sinks up.
    let mut best = vec![0usize; c.scc.len()];
    for id in 0..c.scc.len() {
        let below = c.scc.edges[id].iter().map(|&s| best[s]).max().unwrap_or(0);
        best[id] = below + marked[id] as usize;
    }
    Some(best.into_iter().max().unwrap_or(0) - 1)
}

/// One less than the largest number of maximal-root components met along
/// a path of the condensation.
pub fn polynomial_index(dfa: &Dfa) -> Result<usize, GrowthError> {
    polynomial_index_of(&component_roots(dfa)?).ok_or(GrowthError::FiniteLanguage)
}

pub fn analyze(dfa: &Dfa) -> Result<GrowthInfo, GrowthError> {
    let c = component_roots(dfa)?;
    let (index, index_tolerance, class) = global_index(&c);
    Ok(GrowthInfo {
        class,
        index,
        index_tolerance,
        polynomial_index: polynomial_index_of(&c),
        scc_count: c.scc.len(),
    })
}

/// Limit of the compression ratio of a base conversion from `src` to
/// `dst`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrPrediction {
    Ratio(f64),
    Infinite,
    Zero,
    /// Both polynomial with equal degree: bounded but no limit is implied.
    IndeterminateFinite,
}

pub fn predict_cr(src: &GrowthInfo, dst: &GrowthInfo) -> Result<CrPrediction, GrowthError> {
    use GrowthClass::*;
    if src.class == Finite || dst.class == Finite {
        return Err(GrowthError::FiniteLanguage);
    }
    Ok(match (src.class, dst.class) {
        (_, Exponential) => CrPrediction::Ratio(src.index.ln() / dst.index.ln()),
        (Exponential, _) => CrPrediction::Infinite,
        _ => {
            let (p, q) = (src.polynomial_index.unwrap(), dst.polynomial_index.unwrap());
            match p.cmp(&q) {
                std::cmp::Ordering::Less => CrPrediction::Zero,
                std::cmp::Ordering::Greater => CrPrediction::Infinite,
                std::cmp::Ordering::Equal => CrPrediction::IndeterminateFinite,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile_regex, OrderedAlphabet};

    fn dfa(pattern: &str, alphabet: &[u8]) -> Dfa {
        compile_regex(pattern, &OrderedAlphabet::new(alphabet).unwrap()).unwrap()
    }

    #[test]
    fn fibonacci_is_one_component() {
        let scc = scc_decompose(&dfa("(a|ba)*", b"ab"));
        assert_eq!(scc.components, vec![vec![0, 1]]);
        assert!(scc.edges[0].is_empty());
    }

    #[test]
    fn poly_is_a_chain_of_singletons() {
        let d = dfa("[ab]*[cd]*[ef]+", b"abcdef");
        let scc = scc_decompose(&d);
        assert_eq!(scc.len(), 3);
        assert!(scc.components.iter().all(|c| c.len() == 1));
        let (c0, c1, c2) = (scc.component_of[0], scc.component_of[1], scc.component_of[2]);
        assert!(scc.edges[c0].contains(&c1) && scc.edges[c1].contains(&c2));
        for c in &scc.components {
            assert_eq!(exact_scc_class(c, &d), SccClass::Expanding);
        }
    }

    #[test]
    fn acyclic_automaton_is_all_trivial() {
        let d = dfa("abc|ba", b"abc");
        let scc = scc_decompose(&d);
        assert_eq!(scc.len(), d.state_count());
        assert!(scc.components.iter().all(|c| exact_scc_class(c, &d) == SccClass::Trivial));
    }

    #[test]
    fn rotation_is_a_cycle() {
        let d = dfa("(abc)*", b"abc");
        let scc = scc_decompose(&d);
        assert_eq!(scc.len(), 1);
        assert_eq!(exact_scc_class(&scc.components[0], &d), SccClass::Cycle);
    }

    #[test]
    fn reference_indices() {
        let (fib, class) = index(&dfa("(a|ba)*", b"ab")).unwrap();
        assert_eq!(class, GrowthClass::Exponential);
        assert!((fib - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        let (poly, class) = index(&dfa("[ab]*[cd]*[ef]+", b"abcdef")).unwrap();
        assert_eq!(class, GrowthClass::Exponential);
        assert!((poly - 2.0).abs() < 1e-9);
        assert_eq!(index(&dfa("ab", b"ab")).unwrap(), (0.0, GrowthClass::Finite));
    }

    #[test]
    fn reference_polynomial_indices() {
        assert_eq!(polynomial_index(&dfa("(a|ba)*", b"ab")).unwrap(), 0);
        assert_eq!(polynomial_index(&dfa("[ab]*[cd]*[ef]+", b"abcdef")).unwrap(), 2);
        assert_eq!(polynomial_index(&dfa("a*b*", b"ab")).unwrap(), 1);
        assert_eq!(polynomial_index(&dfa("ab", b"ab")), Err(GrowthError::FiniteLanguage));
    }

    #[test]
    fn non_maximal_components_between_marked_ones_are_crossed() {
        // two 2-letter loops separated by a 1-letter loop
        let d = dfa("[ab]*c*[ab]*", b"abc");
        let info = analyze(&d).unwrap();
        assert!((info.index - 2.0).abs() < 1e-9);
        assert_eq!(info.polynomial_index, Some(1));
    }

    #[test]
    fn predictions() {
        let fib = analyze(&dfa("(a|ba)*", b"ab")).unwrap();
        let bin = analyze(&dfa("0|1[01]*", b"01")).unwrap();
        let ab = analyze(&dfa("a*b*", b"ab")).unwrap();
        let astar = analyze(&dfa("a*", b"a")).unwrap();
        let finite = analyze(&dfa("ab", b"ab")).unwrap();
        match predict_cr(&fib, &bin).unwrap() {
            CrPrediction::Ratio(r) => assert!((r - 0.694241913).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        assert_eq!(predict_cr(&fib, &fib).unwrap(), CrPrediction::Ratio(1.0));
        assert_eq!(predict_cr(&fib, &ab).unwrap(), CrPrediction::Infinite);
        assert_eq!(predict_cr(&ab, &bin).unwrap(), CrPrediction::Ratio(0.0));
        assert_eq!(predict_cr(&astar, &ab).unwrap(), CrPrediction::Zero);
        assert_eq!(predict_cr(&ab, &astar).unwrap(), CrPrediction::Infinite);
        assert_eq!(predict_cr(&ab, &ab).unwrap(), CrPrediction::IndeterminateFinite);
        assert_eq!(predict_cr(&finite, &bin), Err(GrowthError::FiniteLanguage));
    }

    #[test]
    fn non_trim_is_rejected() {
        let d = Dfa::new(OrderedAlphabet::new(b"a").unwrap(), 1, 0, &[0], &[]).unwrap();
        assert_eq!(analyze(&d), Err(GrowthError::NotTrim));
    }
}
