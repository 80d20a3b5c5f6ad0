//! Exact decision procedures on the cycle space of a strongly connected
//! component: regularity of the asymptotic variance-covariance matrix,
//! dependence certificates, and the variance-zero test.
//!
//! The test never enumerates cycles. In a strongly connected digraph the
//! characteristic vectors of directed cycles span the kernel of the
//! flow-incidence matrix `NN`: adding a large multiple of a positive
//! circulation through all edges turns any rational circulation positive, and
//! positive circulations decompose into directed cycles. A function vanishes
//! on that kernel exactly when it lies in the row space of `NN`, so the
//! functions `1, k_1, ..., k_m` are independent on the cycle space if and only
//! if stacking their value rows `MM` onto `NN` raises the rank by `m + 1`.
//! Cycle counts can be exponential; the stacked rank is polynomial.

use crate::error::{Error, Result};
use crate::graph::Component;
use crate::linalg;
use crate::scalar::Scalar;

/// Outcome of the rank test: either the functions `1, k_1, ..., k_m` are
/// linearly independent on the cycle space (the variance-covariance matrix is
/// regular), or a nonzero coefficient vector `(a_0, ..., a_m)` with
/// `a_0 1(C) + a_1 k_1(C) + ... + a_m k_m(C) = 0` on every cycle.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleCertificate<S> {
    Independent,
    Dependent { coefficients: Vec<S> },
}

impl<S: Scalar> CycleCertificate<S> {
    pub fn is_independent(&self) -> bool {
        matches!(self, CycleCertificate::Independent)
    }

    pub fn coefficients(&self) -> Option<&[S]> {
        match self {
            CycleCertificate::Independent => None,
            CycleCertificate::Dependent { coefficients } => Some(coefficients),
        }
    }
}

/// Flow-incidence matrix `NN`: one row per vertex, one column per edge, `+1`
/// where the edge enters the vertex and `-1` where it leaves. Loop columns
/// are zero.
fn incidence_matrix<S: Scalar>(comp: &Component<S>) -> Vec<Vec<S>> {
    let n = comp.vertex_count();
    let mut nn = vec![vec![S::zero(); comp.edges().len()]; n];
    for (j, e) in comp.edges().iter().enumerate() {
        nn[e.to][j] = nn[e.to][j].clone() + S::one();
        nn[e.from][j] = nn[e.from][j].clone() - S::one();
    }
    nn
}

/// Value rows `MM` for the constant function and the chosen outputs.
fn function_rows<S: Scalar>(comp: &Component<S>, outputs: &[usize]) -> Vec<Vec<S>> {
    let mut mm = Vec::with_capacity(outputs.len() + 1);
    mm.push(vec![S::one(); comp.edges().len()]);
    for &i in outputs {
        mm.push(comp.edges().iter().map(|e| e.out[i].clone()).collect());
    }
    mm
}

fn rank_test_on<S: Scalar>(comp: &Component<S>, outputs: &[usize]) -> CycleCertificate<S> {
    let nn = incidence_matrix(comp);
    let mm = function_rows(comp, outputs);
    let mut stacked = nn.clone();
    stacked.extend(mm.iter().cloned());

    let rank_nn = linalg::rank(&nn);
    let rank_stacked = linalg::rank(&stacked);
    if rank_stacked == rank_nn + outputs.len() + 1 {
        return CycleCertificate::Independent;
    }

    // Some left-kernel vector of the stacked matrix has a nonzero tail; its
    // tail is the dependence relation, normalized at its first nonzero entry.
    // In float mode "nonzero" is judged relative to the vector scale.
    let tail = mm.len();
    let head = nn.len();
    for vector in linalg::left_kernel_basis(&stacked) {
        let mut scale = S::zero();
        for c in &vector {
            if c.abs() > scale {
                scale = c.abs();
            }
        }
        let coefficients = &vector[head..head + tail];
        if let Some(lead) = coefficients.iter().find(|c| !c.is_negligible(&scale)) {
            let lead = lead.clone();
            return CycleCertificate::Dependent {
                coefficients: coefficients
                    .iter()
                    .map(|c| c.clone() / lead.clone())
                    .collect(),
            };
        }
    }
    unreachable!("rank deficiency guarantees a kernel vector with nonzero tail")
}

/// Decides whether `1, k_1, ..., k_m` are linearly independent as functions on
/// the cycles of the component, which is equivalent to the regularity of the
/// asymptotic variance-covariance matrix. Independent of the probabilities.
pub fn cycle_rank_test<S: Scalar>(comp: &Component<S>) -> CycleCertificate<S> {
    debug_assert!(comp.is_strongly_connected());
    let outputs: Vec<usize> = (0..comp.dim()).collect();
    rank_test_on(comp, &outputs)
}

/// Finds one directed cycle by walking first out-edges.
fn some_cycle<S: Scalar>(comp: &Component<S>) -> Option<(u64, Vec<S>)> {
    let n = comp.vertex_count();
    let mut seen = vec![false; n];
    let mut path: Vec<usize> = Vec::new();
    let mut v = 0usize;
    loop {
        if seen[v] {
            let pos = path
                .iter()
                .position(|&w| comp.edges()[w].from == v)
                .unwrap();
            let cycle = &path[pos..];
            let mut value = vec![S::zero(); comp.dim()];
            for &e in cycle {
                for (acc, x) in value.iter_mut().zip(&comp.edges()[e].out) {
                    *acc = acc.clone() + x.clone();
                }
            }
            return Some((cycle.len() as u64, value));
        }
        seen[v] = true;
        let &e = comp.out_edges(v).first()?;
        path.push(e);
        v = comp.edges()[e].to;
    }
}

/// Tests whether the single output `k_i` has asymptotic variance zero, i.e.
/// `k_i(C) = a 1(C)` for every cycle. Returns the constant `a` when it
/// exists; on a strongly connected chain this is the quasi-deterministic
/// constant and the expectation constant.
pub fn variance_zero<S: Scalar>(comp: &Component<S>, output: usize) -> Result<Option<S>> {
    if output >= comp.dim() {
        return Err(Error::OutputIndex {
            index: output,
            dim: comp.dim(),
        });
    }
    if rank_test_on(comp, &[output]).is_independent() {
        return Ok(None);
    }
    // Dependent: a_0 1 + a_1 k = 0 with a_1 != 0, since 1 alone never
    // vanishes on a cycle. The ratio on any one cycle is the constant.
    let (len, value) = some_cycle(comp)
        .ok_or_else(|| Error::Internal("strongly connected component has no cycle".into()))?;
    Ok(Some(value[output].clone() / S::from_int(len as i64)))
}

/// Specialization for 0/1-valued outputs: the variance is zero if and only if
/// the output is constant on the final component's edges. Checks the domain
/// and must agree with [`variance_zero`].
pub fn zero_one_variance_check<S: Scalar>(comp: &Component<S>, output: usize) -> Result<bool> {
    if output >= comp.dim() {
        return Err(Error::OutputIndex {
            index: output,
            dim: comp.dim(),
        });
    }
    for e in comp.edges() {
        let v = &e.out[output];
        if !v.is_zero() && *v != S::one() {
            return Err(Error::NotZeroOne {
                output: output.to_string(),
                value: v.render(),
            });
        }
    }
    let first = &comp.edges()[0].out[output];
    Ok(comp.edges().iter().all(|e| e.out[output] == *first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Transition;
    use crate::graph::{simple_cycles, Component};
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn edge(from: usize, to: usize, prob: Rational, out: Vec<Rational>) -> Transition<Rational> {
        Transition {
            from,
            to,
            prob,
            out,
        }
    }

    fn two_loops() -> Component<Rational> {
        Component::from_edges(
            1,
            1,
            vec![
                edge(0, 0, r(1, 2), vec![r(0, 1)]),
                edge(0, 0, r(1, 2), vec![r(1, 1)]),
            ],
        )
        .unwrap()
    }

    fn block_component() -> Component<Rational> {
        Component::from_edges(
            2,
            2,
            vec![
                edge(0, 0, r(1, 2), vec![r(0, 1), r(0, 1)]),
                edge(0, 1, r(1, 2), vec![r(0, 1), r(0, 1)]),
                edge(1, 0, r(1, 2), vec![r(1, 1), r(0, 1)]),
                edge(1, 1, r(1, 2), vec![r(0, 1), r(1, 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn loops_with_distinct_outputs_are_independent() {
        assert!(cycle_rank_test(&two_loops()).is_independent());
    }

    #[test]
    fn step_counter_is_dependent_with_unit_certificate() {
        // every edge outputs 1, so k(C) = 1(C) identically
        let comp = Component::from_edges(
            2,
            1,
            vec![
                edge(0, 1, r(1, 1), vec![r(1, 1)]),
                edge(1, 0, r(1, 2), vec![r(1, 1)]),
                edge(1, 1, r(1, 2), vec![r(1, 1)]),
            ],
        )
        .unwrap();
        match cycle_rank_test(&comp) {
            CycleCertificate::Dependent { coefficients } => {
                assert_eq!(coefficients, vec![r(1, 1), r(-1, 1)]);
            }
            other => panic!("expected dependent, got {other:?}"),
        }
    }

    #[test]
    fn block_chain_outputs_are_independent() {
        assert!(cycle_rank_test(&block_component()).is_independent());
    }

    #[test]
    fn certificates_annihilate_every_enumerated_cycle() {
        let comp = Component::from_edges(
            2,
            2,
            vec![
                edge(0, 1, r(1, 1), vec![r(1, 1), r(2, 1)]),
                edge(1, 0, r(1, 2), vec![r(0, 1), r(1, 1)]),
                edge(1, 1, r(1, 2), vec![r(2, 1), r(3, 1)]),
            ],
        )
        .unwrap();
        let cert = cycle_rank_test(&comp);
        if let CycleCertificate::Dependent { coefficients } = &cert {
            for cycle in simple_cycles(&comp, None).cycles {
                let mut acc = coefficients[0].clone() * Rational::from_int(cycle.len() as i64);
                for i in 0..comp.dim() {
                    acc += coefficients[i + 1].clone() * cycle.value[i].clone();
                }
                assert!(acc.is_zero(), "certificate fails on {cycle:?}");
            }
        }
    }

    #[test]
    fn variance_zero_examples() {
        // k == 0
        let comp = Component::from_edges(
            1,
            1,
            vec![
                edge(0, 0, r(1, 2), vec![r(0, 1)]),
                edge(0, 0, r(1, 2), vec![r(0, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(variance_zero(&comp, 0).unwrap(), Some(r(0, 1)));

        // step counter k == 1
        let comp = Component::from_edges(1, 1, vec![edge(0, 0, r(1, 1), vec![r(1, 1)])]).unwrap();
        assert_eq!(variance_zero(&comp, 0).unwrap(), Some(r(1, 1)));

        // 11-block counter: the loop at 1 and the loop at 0 have different ratios
        let comp = block_component();
        assert_eq!(variance_zero(&comp, 1).unwrap(), None);
        assert_eq!(variance_zero(&comp, 0).unwrap(), None);
        assert!(variance_zero(&comp, 5).is_err());
    }

    #[test]
    fn variance_zero_matches_the_rank_test_on_single_outputs() {
        for comp in [two_loops(), block_component()] {
            for i in 0..comp.dim() {
                let dependent = !rank_test_on(&comp, &[i]).is_independent();
                assert_eq!(variance_zero(&comp, i).unwrap().is_some(), dependent);
            }
        }
    }

    #[test]
    fn zero_one_check_examples() {
        let comp = block_component();
        // both outputs take value 0 and 1 somewhere
        assert!(!zero_one_variance_check(&comp, 0).unwrap());
        assert!(!zero_one_variance_check(&comp, 1).unwrap());
        assert_eq!(
            zero_one_variance_check(&comp, 0).unwrap(),
            variance_zero(&comp, 0).unwrap().is_some()
        );

        let constant_one = Component::from_edges(
            1,
            1,
            vec![
                edge(0, 0, r(1, 2), vec![r(1, 1)]),
                edge(0, 0, r(1, 2), vec![r(1, 1)]),
            ],
        )
        .unwrap();
        assert!(zero_one_variance_check(&constant_one, 0).unwrap());

        let out_of_domain =
            Component::from_edges(1, 1, vec![edge(0, 0, r(1, 1), vec![r(2, 1)])]).unwrap();
        assert!(matches!(
            zero_one_variance_check(&out_of_domain, 0),
            Err(Error::NotZeroOne { .. })
        ));
    }

    /// Exhaustive oracle: the verdict must match the rank of the matrix whose
    /// rows are `(1(C), k_1(C), ..., k_m(C))` over all simple cycles.
    #[test]
    fn rank_test_matches_cycle_enumeration_oracle() {
        let comps = vec![two_loops(), block_component()];
        for comp in comps {
            let rows: Vec<Vec<Rational>> = simple_cycles(&comp, None)
                .cycles
                .into_iter()
                .map(|c| {
                    let mut row = vec![Rational::from_int(c.len() as i64)];
                    row.extend(c.value);
                    row
                })
                .collect();
            let full = crate::linalg::rank(&rows) == comp.dim() + 1;
            assert_eq!(cycle_rank_test(&comp).is_independent(), full);
        }
    }

    #[test]
    fn verdicts_are_invariant_under_probability_reassignment() {
        let reweighted = Component::from_edges(
            2,
            2,
            vec![
                edge(0, 0, r(9, 10), vec![r(0, 1), r(0, 1)]),
                edge(0, 1, r(1, 10), vec![r(0, 1), r(0, 1)]),
                edge(1, 0, r(1, 3), vec![r(1, 1), r(0, 1)]),
                edge(1, 1, r(2, 3), vec![r(0, 1), r(1, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(
            cycle_rank_test(&block_component()).is_independent(),
            cycle_rank_test(&reweighted).is_independent()
        );
    }
}
