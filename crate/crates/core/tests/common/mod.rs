//! Shared generators for the randomized test corpora.
//!
//! Each integration-test binary uses its own subset of these helpers.
#![allow(dead_code)]

use markov_moments::{Component, Cycle, MarkovChain, Rational, Scalar, Transition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

pub struct ChainConfig {
    pub min_states: usize,
    pub max_states: usize,
    pub dim: usize,
    /// Outputs are integers in `[-out_range, out_range]`.
    pub out_range: i64,
    /// Extra random edges on top of the Hamiltonian cycle and the loop.
    pub extra_edges: usize,
    /// Maximum number of parallel edges per ordered vertex pair.
    pub max_parallel: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            min_states: 1,
            max_states: 6,
            dim: 2,
            out_range: 3,
            extra_edges: 8,
            max_parallel: 3,
        }
    }
}

/// A strongly connected, aperiodic chain with exact random rational
/// probabilities: a Hamiltonian cycle for strong connectivity, a loop for
/// aperiodicity, and random extra edges with bounded parallelism.
pub fn random_chain(rng: &mut ChaCha8Rng, cfg: &ChainConfig) -> MarkovChain<Rational> {
    let n = rng.random_range(cfg.min_states..=cfg.max_states);
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    if n == 1 {
        arcs.push((0, 0));
        arcs.push((0, 0));
    } else {
        for v in 0..n {
            arcs.push((v, (v + 1) % n));
        }
        arcs.push((rng.random_range(0..n), rng.random_range(0..n)));
        // force a loop so the period is 1
        let v = rng.random_range(0..n);
        arcs.push((v, v));
    }
    for _ in 0..rng.random_range(0..=cfg.extra_edges) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if arcs.iter().filter(|&&(a, b)| (a, b) == (u, v)).count() < cfg.max_parallel {
            arcs.push((u, v));
        }
    }

    let mut transitions: Vec<Transition<Rational>> = Vec::new();
    for s in 0..n {
        let out: Vec<usize> = arcs
            .iter()
            .enumerate()
            .filter(|&(_, &(a, _))| a == s)
            .map(|(i, _)| i)
            .collect();
        let weights: Vec<i64> = out.iter().map(|_| rng.random_range(1..=9)).collect();
        let total: i64 = weights.iter().sum();
        for (&arc, w) in out.iter().zip(weights) {
            let (from, to) = arcs[arc];
            let outputs = (0..cfg.dim)
                .map(|_| Rational::from_int(rng.random_range(-cfg.out_range..=cfg.out_range)))
                .collect();
            transitions.push(Transition {
                from,
                to,
                prob: r(w, total),
                out: outputs,
            });
        }
    }

    let states = (0..n).map(|v| format!("s{v}")).collect();
    let outputs = (0..cfg.dim).map(|i| format!("k{i}")).collect();
    MarkovChain::new(states, outputs, transitions).expect("generator produces valid chains")
}

/// A random weighted digraph (no stochasticity, no connectivity guarantees)
/// for the matrix-tree corpus.
pub fn random_weighted_digraph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Component<Rational> {
    let n = rng.random_range(1..=max_vertices);
    let mut edges = Vec::new();
    for _ in 0..rng.random_range(0..=(2 * n + 2)) {
        let from = rng.random_range(0..n);
        let to = rng.random_range(0..n);
        edges.push(Transition {
            from,
            to,
            prob: r(rng.random_range(1..=9), rng.random_range(1..=9)),
            out: vec![],
        });
    }
    Component::from_edges(n, 0, edges).expect("valid component")
}

/// Direct evaluation of the centered covariance constant by enumerating the
/// functional digraphs, independent of the bilinear-expansion code path.
pub fn covariance_by_direct_enumeration(
    comp: &Component<Rational>,
    e: &[Rational],
    i: usize,
    j: usize,
) -> Rational {
    use markov_moments::functional_digraphs;
    let centered = |c: &Cycle<Rational>, out: usize| -> Rational {
        c.value[out].clone() - e[out].clone() * Rational::from_int(c.len() as i64)
    };
    let d1_digraphs = functional_digraphs(comp, 1, 100_000_000).unwrap();
    let d2_digraphs = functional_digraphs(comp, 2, 100_000_000).unwrap();
    let mut one_d1 = r(0, 1);
    let mut d1 = r(0, 1);
    for d in &d1_digraphs {
        let c = &d.cycles[0];
        one_d1 += d.weight.clone() * Rational::from_int(c.len() as i64);
        d1 += d.weight.clone() * centered(c, i) * centered(c, j);
    }
    let mut d2 = r(0, 1);
    for d in &d2_digraphs {
        let (c1, c2) = (&d.cycles[0], &d.cycles[1]);
        d2 += d.weight.clone()
            * (centered(c1, i) * centered(c2, j) + centered(c2, i) * centered(c1, j));
    }
    (d1 - d2) / one_d1
}

/// Random exact probability in the open unit interval.
pub fn random_unit_rational(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.random_range(2..=30i64);
    let num = rng.random_range(1..den);
    r(num, den)
}
