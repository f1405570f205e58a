//! Exact counting of language members through the adjacency matrix of a
//! trim DFA.
//!
//! `C_L(n) = V_I · M^n · V_F`. Rather than forming `M^n`, a [`CountCache`]
//! grows the ladder `u_0 = V_F`, `u_{k+1} = M · u_k` of per-state suffix
//! counts together with the running sums `s_k = u_0 + ... + u_k`, so that
//! a count is one vector–vector product against a cached vector.
//!
//! Products are tallied in [`OpCounters`]: `u_0` is free, every further rung
//! costs one matrix–vector product, and every scalar count or cumulative
//! count costs one vector–vector product the first time it is requested.

use std::ops::AddAssign;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::automata::Dfa;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("automaton must be trim")]
    NotTrim,
}

/// Matrix–matrix, matrix–vector and vector–vector multiplication tallies.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounters {
    pub matrix_matrix: u64,
    pub matrix_vector: u64,
    pub vector_vector: u64,
}

impl OpCounters {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.matrix_matrix += rhs.matrix_matrix;
        self.matrix_vector += rhs.matrix_vector;
        self.vector_vector += rhs.vector_vector;
    }
}

/// Dense square matrix of nonnegative big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    dim: usize,
    entries: Vec<BigUint>,
}

impl BigMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigUint::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigUint::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigUint> + Copy>(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            entries: rows.iter().flatten().map(|&x| x.into()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigUint) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[BigUint] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    fn product(&self, rhs: &BigMatrix) -> BigMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = BigMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &BigMatrix, counters: &mut OpCounters) -> BigMatrix {
        counters.matrix_matrix += 1;
        self.product(rhs)
    }

    pub fn mul_vec(&self, v: &[BigUint], counters: &mut OpCounters) -> Vec<BigUint> {
        assert_eq!(v.len(), self.dim);
        counters.matrix_vector += 1;
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn add(&self, rhs: &BigMatrix) -> BigMatrix {
        BigMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `m^exponent` by binary exponentiation; each product bumps the
/// matrix–matrix counter. `m^0` is the identity and `m^1` costs nothing.
pub fn mat_pow(m: &BigMatrix, mut exponent: u64, counters: &mut OpCounters) -> BigMatrix {
    let mut result: Option<BigMatrix> = None;
    let mut base = m.clone();
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.mul(&base, counters),
            });
        }
        exponent >>= 1;
        if exponent > 0 {
            base = base.mul(&base, counters);
        }
    }
    result.unwrap_or_else(|| BigMatrix::identity(m.dim()))
}

/// Adjacency matrix with initial and accepting indicator vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    pub matrix: BigMatrix,
    pub initial: Vec<bool>,
    pub accepting: Vec<bool>,
}

impl MatrixRep {
    pub fn from_dfa(dfa: &Dfa) -> Result<Self, CountingError> {
        if !dfa.is_trim() {
            return Err(CountingError::NotTrim);
        }
        let n = dfa.state_count();
        let mut counts = vec![0u32; n * n];
        for p in 0..n {
            for (_, q) in dfa.successors(p) {
                counts[p * n + q] += 1;
            }
        }
        let mut initial = vec![false; n];
        if let Some(q) = dfa.initial() {
            initial[q] = true;
        }
        Ok(Self {
            matrix: BigMatrix {
                dim: n,
                entries: counts.into_iter().map(BigUint::from).collect(),
            },
            initial,
            accepting: (0..n).map(|q| dfa.is_accepting(q)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn initial_dot(&self, v: &[BigUint], counters: &mut OpCounters) -> BigUint {
        counters.vector_vector += 1;
        self.initial
            .iter()
            .zip(v)
            .filter(|(on, _)| **on)
            .map(|(_, x)| x)
            .sum()
    }

    fn accepting_vector(&self) -> Vec<BigUint> {
        self.accepting.iter().map(|&a| BigUint::from(a as u8)).collect()
    }

    /// `V_I · M^n · V_F` through [`mat_pow`], independent of any cache.
    pub fn count_by_power(&self, n: u64, counters: &mut OpCounters) -> BigUint {
        let power = mat_pow(&self.matrix, n, counters);
        let column = power.mul_vec(&self.accepting_vector(), counters);
        self.initial_dot(&column, counters)
    }
}

/// `(A, S)` standing for the block matrix `[[A, S], [0, I]]`; the `k`-th
/// power of `(M, I)` is `(M^k, I + M + ... + M^(k-1))`.
struct PowerSum {
    power: BigMatrix,
    sum: BigMatrix,
}

impl PowerSum {
    fn compose(&self, rhs: &PowerSum, counters: &mut OpCounters) -> PowerSum {
        counters.matrix_matrix += 2;
        PowerSum {
            power: self.power.product(&rhs.power),
            sum: self.power.product(&rhs.sum).add(&self.sum),
        }
    }
}

#[derive(Debug, Default)]
struct Ladder {
    suffix: Vec<Arc<[BigUint]>>,
    running: Vec<Arc<[BigUint]>>,
    counts: Vec<Option<BigUint>>,
    cumulative: Vec<Option<BigUint>>,
}

/// Incrementally grown suffix-count ladder for one matrix representation.
///
/// Readers of already-cached rungs share a read lock; extension takes the
/// write lock, so growth is serialized.
#[derive(Debug)]
pub struct CountCache {
    rep: MatrixRep,
    ladder: RwLock<Ladder>,
}

impl CountCache {
    pub fn new(rep: MatrixRep) -> Self {
        let u0: Arc<[BigUint]> = rep.accepting_vector().into();
        Self {
            ladder: RwLock::new(Ladder {
                suffix: vec![u0.clone()],
                running: vec![u0],
                counts: vec![None],
                cumulative: vec![None],
            }),
            rep,
        }
    }

    pub fn from_dfa(dfa: &Dfa) -> Result<Self, CountingError> {
        Ok(Self::new(MatrixRep::from_dfa(dfa)?))
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.rep
    }

    /// Highest cached rung `K`.
    pub fn high_water(&self) -> usize {
        self.ladder.read().unwrap().suffix.len() - 1
    }

    fn extend_to(&self, k: usize, counters: &mut OpCounters) {
        if self.ladder.read().unwrap().suffix.len() > k {
            return;
        }
        let mut ladder = self.ladder.write().unwrap();
        while ladder.suffix.len() <= k {
            let last = ladder.suffix.last().unwrap().clone();
            let next = self.rep.matrix.mul_vec(&last, counters);
            let running: Vec<BigUint> = ladder
                .running
                .last()
                .unwrap()
                .iter()
                .zip(&next)
                .map(|(a, b)| a + b)
                .collect();
            ladder.suffix.push(next.into());
            ladder.running.push(running.into());
            ladder.counts.push(None);
            ladder.cumulative.push(None);
        }
    }

    /// `u_k`: entry `q` is the number of accepted length-`k` continuations
    /// from state `q`.
    pub fn suffix_counts_with(&self, k: usize, counters: &mut OpCounters) -> Arc<[BigUint]> {
        self.extend_to(k, counters);
        self.ladder.read().unwrap().suffix[k].clone()
    }

    /// Runs `f` on the rungs `u_0 ..= u_k` under one read lock. Cheaper
    /// than repeated [`CountCache::suffix_counts`] calls in tight loops.
    pub fn with_suffix_counts<R>(&self, k: usize, counters: &mut OpCounters, f: impl FnOnce(&[Arc<[BigUint]>]) -> R) -> R {
        self.extend_to(k, counters);
        let ladder = self.ladder.read().unwrap();
        f(&ladder.suffix[..=k])
    }

    pub fn suffix_counts(&self, k: usize) -> Arc<[BigUint]> {
        self.suffix_counts_with(k, &mut OpCounters::default())
    }

    /// `C_L(n)`.
    pub fn count_with(&self, n: usize, counters: &mut OpCounters) -> BigUint {
        self.extend_to(n, counters);
        if let Some(c) = &self.ladder.read().unwrap().counts[n] {
            return c.clone();
        }
        let u = self.ladder.read().unwrap().suffix[n].clone();
        let c = self.rep.initial_dot(&u, counters);
        self.ladder.write().unwrap().counts[n] = Some(c.clone());
        c
    }

    pub fn count(&self, n: usize) -> BigUint {
        self.count_with(n, &mut OpCounters::default())
    }

    /// `C_L^≤(n) = C_L(0) + ... + C_L(n)`, with `C_L^≤(-1) = 0`.
    pub fn cum_count_with(&self, n: i64, counters: &mut OpCounters) -> BigUint {
        let Ok(n) = usize::try_from(n) else {
            return BigUint::zero();
        };
        self.extend_to(n, counters);
        if let Some(c) = &self.ladder.read().unwrap().cumulative[n] {
            return c.clone();
        }
        let s = self.ladder.read().unwrap().running[n].clone();
        let c = self.rep.initial_dot(&s, counters);
        self.ladder.write().unwrap().cumulative[n] = Some(c.clone());
        c
    }

    pub fn cum_count(&self, n: i64) -> BigUint {
        self.cum_count_with(n, &mut OpCounters::default())
    }

    /// Smallest `ℓ` with `C_L^≤(ℓ) > rank`, found by walking the ladder.
    /// `None` when the language has fewer than `rank + 1` members.
    pub fn length_of_rank_with(&self, rank: &BigUint, counters: &mut OpCounters) -> Option<usize> {
        // Binary search inside the cached part of the ladder; walk past it.
        let top = self.high_water();
        let mut len = 0usize;
        if top > 0 {
            if self.cum_count_with(top as i64, counters) > *rank {
                let (mut lo, mut hi) = (0usize, top);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if self.cum_count_with(mid as i64, counters) > *rank {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                return Some(lo);
            }
            len = top;
        }
        loop {
            if self.cum_count_with(len as i64, counters) > *rank {
                return Some(len);
            }
            // u_k = 0 forces every later rung to 0: no longer members exist.
            if self.suffix_counts_with(len, counters).iter().all(Zero::is_zero) {
                return None;
            }
            len += 1;
        }
    }

    pub fn length_of_rank(&self, rank: &BigUint) -> Option<usize> {
        self.length_of_rank_with(rank, &mut OpCounters::default())
    }

    /// Same result as [`CountCache::length_of_rank`] but by binary lifting
    /// over powers of the block matrix `[[M, I], [0, I]]`, so the cost is
    /// logarithmic in the answer. This is the route for ranks whose
    /// representation is far too long to materialize.
    pub fn length_of_rank_by_squaring(&self, rank: &BigUint, counters: &mut OpCounters) -> Option<BigUint> {
        let dim = self.rep.dim();
        let accepting = self.rep.accepting_vector();
        // cumulative(P) for P = B^k is C^≤(k - 1).
        let cumulative = |p: &PowerSum, counters: &mut OpCounters| {
            let column = p.sum.mul_vec(&accepting, counters);
            self.rep.initial_dot(&column, counters)
        };

        let mut powers = vec![PowerSum {
            power: self.rep.matrix.clone(),
            sum: BigMatrix::identity(dim),
        }];
        let mut previous = BigUint::zero();
        loop {
            let top = powers.last().unwrap();
            let value = cumulative(top, counters);
            if value > *rank {
                break;
            }
            // An infinite trim language has a member in every window of
            // lengths wider than its cycle, once past 2·|Q|. A stall over
            // such a window means the language is finite.
            if powers.len() > 1 && value == previous && (1usize << (powers.len() - 2)) > 2 * dim {
                return None;
            }
            previous = value;
            let squared = top.compose(top, counters);
            powers.push(squared);
        }

        let mut acc = PowerSum {
            power: BigMatrix::identity(dim),
            sum: BigMatrix::zeros(dim),
        };
        let mut exponent = BigUint::zero();
        for (j, p) in powers.iter().enumerate().rev() {
            let candidate = acc.compose(p, counters);
            if cumulative(&candidate, counters) <= *rank {
                acc = candidate;
                exponent += BigUint::one() << j;
            }
        }
        // C^≤(exponent - 1) ≤ rank < C^≤(exponent)
        Some(exponent)
    }
}
