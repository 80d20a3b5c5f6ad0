//! Markov chains with vector-valued output functions on transitions.
//!
//! A chain is a finite state set with a distinguished initial state (the first
//! declared one), a multiset of transitions carrying positive probabilities and
//! `m`-dimensional output vectors, parallel edges and loops allowed. Validation
//! checks the structural assumptions the asymptotic theory needs: stochastic
//! rows, reachability, a unique terminal strongly connected component, and
//! aperiodicity of that component.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph;
use crate::scalar::{total, Scalar};

/// One transition: `from -> to` with probability `prob` and output vector `out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<S> {
    pub from: usize,
    pub to: usize,
    pub prob: S,
    pub out: Vec<S>,
}

/// A finite Markov chain with `m` output functions on its transitions.
///
/// The initial state is always state 0, the first declared one. A nontrivial
/// initial distribution must be modelled by an extra source state.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain<S> {
    states: Vec<String>,
    outputs: Vec<String>,
    transitions: Vec<Transition<S>>,
}

impl<S: Scalar> MarkovChain<S> {
    /// Builds a chain, checking the per-transition invariants: positive
    /// probabilities, known state indices, consistent output dimension.
    /// Row sums and reachability are checked by [`MarkovChain::validate`].
    pub fn new(
        states: Vec<String>,
        outputs: Vec<String>,
        transitions: Vec<Transition<S>>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidChain("chain has no states".into()));
        }
        for (i, name) in states.iter().enumerate() {
            if name.is_empty() || states[..i].contains(name) {
                return Err(Error::InvalidChain(format!(
                    "state name `{name}` is empty or duplicated"
                )));
            }
        }
        let m = outputs.len();
        for t in &transitions {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(Error::InvalidChain(
                    "transition endpoint out of range".into(),
                ));
            }
            if t.prob.partial_cmp(&S::zero()) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::NonpositiveProbability {
                    from: states[t.from].clone(),
                    to: states[t.to].clone(),
                });
            }
            if t.out.len() != m {
                return Err(Error::OutputDimension {
                    from: states[t.from].clone(),
                    to: states[t.to].clone(),
                    expected: m,
                    got: t.out.len(),
                });
            }
        }
        Ok(MarkovChain {
            states,
            outputs,
            transitions,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Output dimension `m`.
    pub fn dim(&self) -> usize {
        self.outputs.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn transitions(&self) -> &[Transition<S>] {
        &self.transitions
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn state_name(&self, index: usize) -> &str {
        &self.states[index]
    }

    /// Transition indices grouped by source state.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    /// The same chain evaluated in binary64.
    pub fn to_f64(&self) -> MarkovChain<f64> {
        MarkovChain {
            states: self.states.clone(),
            outputs: self.outputs.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    from: t.from,
                    to: t.to,
                    prob: t.prob.to_f64(),
                    out: t.out.iter().map(Scalar::to_f64).collect(),
                })
                .collect(),
        }
    }

    /// Replaces all outputs by a function of the source state: every
    /// transition leaving state `s` gets the vector `f(s)`.
    pub fn from_state_outputs(
        &self,
        outputs: Vec<String>,
        f: &BTreeMap<String, Vec<S>>,
    ) -> Result<MarkovChain<S>> {
        let m = outputs.len();
        let mut per_state = Vec::with_capacity(self.states.len());
        for name in &self.states {
            let v = f
                .get(name)
                .ok_or_else(|| Error::MissingStateOutput(name.clone()))?;
            if v.len() != m {
                return Err(Error::OutputDimension {
                    from: name.clone(),
                    to: name.clone(),
                    expected: m,
                    got: v.len(),
                });
            }
            per_state.push(v.clone());
        }
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                from: t.from,
                to: t.to,
                prob: t.prob.clone(),
                out: per_state[t.from].clone(),
            })
            .collect();
        MarkovChain::new(self.states.clone(), outputs, transitions)
    }

    /// Inverse of [`MarkovChain::from_state_outputs`]: recovers the state
    /// function when every state's outgoing transitions agree on the output,
    /// and reports which state breaks that otherwise. States without outgoing
    /// transitions are omitted.
    pub fn state_outputs(&self) -> Result<BTreeMap<String, Vec<S>>> {
        let mut map = BTreeMap::new();
        for (s, edges) in self.out_edges().iter().enumerate() {
            let mut iter = edges.iter().map(|&e| &self.transitions[e].out);
            let first = match iter.next() {
                Some(v) => v,
                None => continue,
            };
            if iter.any(|v| v != first) {
                return Err(Error::NonConstantStateOutput(self.states[s].clone()));
            }
            map.insert(self.states[s].clone(), first.clone());
        }
        Ok(map)
    }

    /// Structural validation: stochastic rows, reachability from the initial
    /// state, a unique condensation leaf, and aperiodicity of its component.
    pub fn validate(&self) -> ValidationReport {
        let n = self.states.len();
        let mut row_ok = true;
        for edges in self.out_edges() {
            let sum = total(edges.iter().map(|&e| self.transitions[e].prob.clone()));
            if !(sum.clone() - S::one()).is_verdict_zero() {
                row_ok = false;
            }
        }

        let adjacency: Vec<Vec<usize>> = {
            let mut adj = vec![Vec::new(); n];
            for t in &self.transitions {
                adj[t.from].push(t.to);
            }
            adj
        };
        let mut reached = vec![false; n];
        let mut queue = vec![0usize];
        reached[0] = true;
        while let Some(v) = queue.pop() {
            for &w in &adjacency[v] {
                if !reached[w] {
                    reached[w] = true;
                    queue.push(w);
                }
            }
        }
        let unreachable: Vec<String> = (0..n)
            .filter(|&v| !reached[v])
            .map(|v| self.states[v].clone())
            .collect();

        let sccs = graph::tarjan_scc(&adjacency);
        let comp_of = graph::component_ids(&sccs, n);
        let mut is_leaf = vec![true; sccs.len()];
        for t in &self.transitions {
            if comp_of[t.from] != comp_of[t.to] {
                is_leaf[comp_of[t.from]] = false;
            }
        }
        let leaf_components: Vec<Vec<String>> = sccs
            .iter()
            .enumerate()
            .filter(|&(c, _)| is_leaf[c])
            .map(|(_, comp)| {
                let mut names: Vec<String> = comp.iter().map(|&v| self.states[v].clone()).collect();
                names.sort();
                names
            })
            .collect();

        let (final_states, period) = if leaf_components.len() == 1 {
            let leaf_id = (0..sccs.len()).find(|&c| is_leaf[c]).unwrap();
            let mut members: Vec<usize> = sccs[leaf_id].clone();
            members.sort_unstable();
            let period = graph::period_of_scc(&adjacency, &members);
            (
                members.iter().map(|&v| self.states[v].clone()).collect(),
                period,
            )
        } else {
            (Vec::new(), None)
        };

        ValidationReport {
            stochastic: row_ok,
            reachable: unreachable.is_empty(),
            unreachable,
            leaf_count: leaf_components.len(),
            leaf_components,
            final_states,
            period,
        }
    }
}

/// Outcome of [`MarkovChain::validate`]. Verdicts, not errors: downstream
/// analyses refuse chains failing any of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub stochastic: bool,
    pub reachable: bool,
    pub unreachable: Vec<String>,
    pub leaf_count: usize,
    /// State names of every terminal strongly connected component.
    pub leaf_components: Vec<Vec<String>>,
    /// State names of the final component when the condensation has one leaf.
    pub final_states: Vec<String>,
    /// Period of the final component, when defined.
    pub period: Option<u64>,
}

impl ValidationReport {
    pub fn finally_connected(&self) -> bool {
        self.leaf_count == 1
    }

    pub fn finally_aperiodic(&self) -> bool {
        self.period == Some(1)
    }

    /// True when the chain satisfies every assumption of the asymptotic
    /// theory; analyses require this.
    pub fn is_valid(&self) -> bool {
        self.stochastic && self.reachable && self.finally_connected() && self.finally_aperiodic()
    }

    /// Human-readable list of failed checks.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.stochastic {
            out.push("some row of transition probabilities does not sum to 1".to_owned());
        }
        if !self.reachable {
            out.push(format!(
                "states unreachable from the initial state: {}",
                self.unreachable.join(", ")
            ));
        }
        if !self.finally_connected() {
            out.push(format!(
                "condensation has {} leaves (terminal components: {})",
                self.leaf_count,
                self.leaf_components
                    .iter()
                    .map(|c| format!("{{{}}}", c.join(", ")))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        if self.finally_connected() && !self.finally_aperiodic() {
            out.push(format!(
                "final component has period {}",
                self.period.unwrap_or(0)
            ));
        }
        out
    }
}

fn scalar_from_value<S: Scalar>(value: &Value, context: &str) -> Result<S> {
    match value {
        Value::String(s) => Ok(S::parse(s)?),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(S::from_int(i))
            } else if S::EXACT {
                Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!(
                        "{context}: non-integer JSON number {n}; quote it as a string (\"p/q\" or decimal) for exact parsing"
                    ),
                })
            } else {
                Ok(S::parse(&n.to_string())?)
            }
        }
        other => Err(Error::Syntax {
            line: 0,
            column: 0,
            message: format!("{context}: expected a number, got {other}"),
        }),
    }
}

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key).ok_or_else(|| Error::Syntax {
        line: 0,
        column: 0,
        message: format!("missing field `{key}`"),
    })
}

fn string_list(value: &Value, context: &str) -> Result<Vec<String>> {
    value
        .as_array()
        .ok_or_else(|| Error::Syntax {
            line: 0,
            column: 0,
            message: format!("{context}: expected an array"),
        })?
        .iter()
        .map(|v| {
            v.as_str().map(str::to_owned).ok_or_else(|| Error::Syntax {
                line: 0,
                column: 0,
                message: format!("{context}: expected a string"),
            })
        })
        .collect()
}

/// Parses the chain-file format:
///
/// ```json
/// {"states": ["0", "1"], "initial": "0", "outputs": ["k10", "k11"],
///  "transitions": [{"from": "0", "to": "1", "prob": "1/2", "out": ["0", "0"]}]}
/// ```
///
/// Probabilities and outputs are strings (`"3/7"` or a decimal, parsed exactly
/// in rational mode) or JSON integers. Parallel edges and loops are preserved.
pub fn parse_chain<S: Scalar>(text: &str) -> Result<MarkovChain<S>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let map = value.as_object().ok_or_else(|| Error::Syntax {
        line: 0,
        column: 0,
        message: "chain file must be a JSON object".into(),
    })?;

    let states = string_list(field(map, "states")?, "states")?;
    let outputs = match map.get("outputs") {
        Some(v) => string_list(v, "outputs")?,
        None => Vec::new(),
    };
    let initial = field(map, "initial")?
        .as_str()
        .ok_or_else(|| Error::Syntax {
            line: 0,
            column: 0,
            message: "initial: expected a string".into(),
        })?;
    if states.is_empty() {
        return Err(Error::InvalidChain("chain has no states".into()));
    }
    if !states.contains(&initial.to_owned()) {
        return Err(Error::UnknownState(initial.to_owned()));
    }
    if states[0] != initial {
        return Err(Error::InvalidChain(format!(
            "initial state must be the first declared state (`{}`, not `{initial}`)",
            states[0]
        )));
    }

    let mut transitions = Vec::new();
    for (i, t) in field(map, "transitions")?
        .as_array()
        .ok_or_else(|| Error::Syntax {
            line: 0,
            column: 0,
            message: "transitions: expected an array".into(),
        })?
        .iter()
        .enumerate()
    {
        let obj = t.as_object().ok_or_else(|| Error::Syntax {
            line: 0,
            column: 0,
            message: format!("transition #{i}: expected an object"),
        })?;
        let from_name = field(obj, "from")?.as_str().unwrap_or_default();
        let to_name = field(obj, "to")?.as_str().unwrap_or_default();
        let from = states
            .iter()
            .position(|s| s == from_name)
            .ok_or_else(|| Error::UnknownState(from_name.to_owned()))?;
        let to = states
            .iter()
            .position(|s| s == to_name)
            .ok_or_else(|| Error::UnknownState(to_name.to_owned()))?;
        let prob: S = scalar_from_value(field(obj, "prob")?, &format!("transition #{i} prob"))?;
        let out: Vec<S> = field(obj, "out")?
            .as_array()
            .ok_or_else(|| Error::Syntax {
                line: 0,
                column: 0,
                message: format!("transition #{i}: out must be an array"),
            })?
            .iter()
            .map(|v| scalar_from_value(v, &format!("transition #{i} out")))
            .collect::<Result<_>>()?;
        transitions.push(Transition {
            from,
            to,
            prob,
            out,
        });
    }

    let chain = MarkovChain::new(states, outputs, transitions)?;

    // Row sums are a hard error at parse time; the file claims to be a chain.
    for (s, edges) in chain.out_edges().iter().enumerate() {
        let sum = total(edges.iter().map(|&e| chain.transitions[e].prob.clone()));
        if !(sum.clone() - S::one()).is_verdict_zero() {
            return Err(Error::RowSumNotOne {
                state: chain.states[s].clone(),
                sum: sum.render(),
            });
        }
    }
    Ok(chain)
}

/// Serializes a chain back to the chain-file format. `parse_chain` of the
/// result reproduces the chain exactly (state names, edge multiset, values).
pub fn serialize_chain<S: Scalar>(chain: &MarkovChain<S>) -> String {
    let transitions: Vec<Value> = chain
        .transitions()
        .iter()
        .map(|t| {
            json!({
                "from": chain.state_name(t.from),
                "to": chain.state_name(t.to),
                "prob": t.prob.render(),
                "out": t.out.iter().map(Scalar::render).collect::<Vec<_>>(),
            })
        })
        .collect();
    let value = json!({
        "states": chain.states(),
        "initial": chain.state_name(0),
        "outputs": chain.outputs(),
        "transitions": transitions,
    });
    serde_json::to_string_pretty(&value).expect("chain serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    /// One state, two loops with probability 1/2, outputs [0] and [1].
    pub(crate) fn bernoulli_chain() -> MarkovChain<Rational> {
        MarkovChain::new(
            vec!["s".into()],
            vec!["k".into()],
            vec![
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(0, 1)],
                },
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(1, 1)],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn parses_smallest_nondegenerate_chain() {
        let text = r#"{
            "states": ["s"], "initial": "s", "outputs": ["k"],
            "transitions": [
                {"from": "s", "to": "s", "prob": "1/2", "out": ["0"]},
                {"from": "s", "to": "s", "prob": "1/2", "out": ["1"]}
            ]
        }"#;
        let chain: MarkovChain<Rational> = parse_chain(text).unwrap();
        assert_eq!(chain.state_count(), 1);
        assert_eq!(chain.dim(), 1);
        assert_eq!(chain.transitions().len(), 2);
        assert_eq!(chain, bernoulli_chain());
    }

    #[test]
    fn parses_the_two_state_block_chain() {
        let text = r#"{
            "states": ["0", "1"], "initial": "0", "outputs": ["k10", "k11"],
            "transitions": [
                {"from": "0", "to": "0", "prob": "1/2", "out": ["0", "0"]},
                {"from": "0", "to": "1", "prob": "1/2", "out": ["0", "0"]},
                {"from": "1", "to": "0", "prob": "1/2", "out": ["1", "0"]},
                {"from": "1", "to": "1", "prob": "1/2", "out": ["0", "1"]}
            ]
        }"#;
        let chain: MarkovChain<Rational> = parse_chain(text).unwrap();
        assert_eq!(chain.state_count(), 2);
        assert_eq!(chain.dim(), 2);
        assert_eq!(chain.transitions().len(), 4);
    }

    #[test]
    fn rejects_zero_probability() {
        let text = r#"{
            "states": ["s"], "initial": "s", "outputs": [],
            "transitions": [
                {"from": "s", "to": "s", "prob": "0", "out": []},
                {"from": "s", "to": "s", "prob": "1", "out": []}
            ]
        }"#;
        match parse_chain::<Rational>(text) {
            Err(Error::NonpositiveProbability { .. }) => {}
            other => panic!("expected nonpositive-probability error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_row_sum_and_unknown_state_and_bad_dim() {
        let bad_sum = r#"{
            "states": ["s"], "initial": "s", "outputs": [],
            "transitions": [{"from": "s", "to": "s", "prob": "1/2", "out": []}]
        }"#;
        assert!(matches!(
            parse_chain::<Rational>(bad_sum),
            Err(Error::RowSumNotOne { .. })
        ));

        let unknown = r#"{
            "states": ["s"], "initial": "s", "outputs": [],
            "transitions": [{"from": "s", "to": "t", "prob": "1", "out": []}]
        }"#;
        assert!(matches!(
            parse_chain::<Rational>(unknown),
            Err(Error::UnknownState(name)) if name == "t"
        ));

        let bad_dim = r#"{
            "states": ["s"], "initial": "s", "outputs": ["a", "b"],
            "transitions": [{"from": "s", "to": "s", "prob": "1", "out": ["1"]}]
        }"#;
        assert!(matches!(
            parse_chain::<Rational>(bad_dim),
            Err(Error::OutputDimension {
                expected: 2,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn syntax_errors_report_positions() {
        match parse_chain::<Rational>("{\n  \"states\": [,]\n}") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn validate_three_cycle_periods() {
        let cycle3 = |extra_loop: bool| {
            let mut transitions = vec![
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 1),
                    out: vec![],
                },
                Transition {
                    from: 1,
                    to: 2,
                    prob: r(1, 1),
                    out: vec![],
                },
                Transition {
                    from: 2,
                    to: 0,
                    prob: r(1, 1),
                    out: vec![],
                },
            ];
            if extra_loop {
                transitions[2].prob = r(1, 2);
                transitions.push(Transition {
                    from: 2,
                    to: 2,
                    prob: r(1, 2),
                    out: vec![],
                });
            }
            MarkovChain::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![],
                transitions,
            )
            .unwrap()
        };

        let report = cycle3(false).validate();
        assert!(report.finally_connected());
        assert_eq!(report.period, Some(3));
        assert!(!report.finally_aperiodic());

        let report = cycle3(true).validate();
        assert_eq!(report.period, Some(1));
        assert!(report.finally_aperiodic());
    }

    #[test]
    fn validate_two_terminal_components() {
        // initial state branches into two absorbing loops
        let chain = MarkovChain::new(
            vec!["i".into(), "a".into(), "b".into()],
            vec![],
            vec![
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 2),
                    out: vec![],
                },
                Transition {
                    from: 0,
                    to: 2,
                    prob: r(1, 2),
                    out: vec![],
                },
                Transition {
                    from: 1,
                    to: 1,
                    prob: r(1, 1),
                    out: vec![],
                },
                Transition {
                    from: 2,
                    to: 2,
                    prob: r(1, 1),
                    out: vec![],
                },
            ],
        )
        .unwrap();
        let report = chain.validate();
        assert_eq!(report.leaf_count, 2);
        assert!(!report.finally_connected());
        assert!(!report.is_valid());
        assert_eq!(report.leaf_components.len(), 2);
    }

    #[test]
    fn validate_flags_unreachable_states() {
        let chain = MarkovChain::new(
            vec!["a".into(), "b".into()],
            vec![],
            vec![
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 1),
                    out: vec![],
                },
                Transition {
                    from: 1,
                    to: 0,
                    prob: r(1, 1),
                    out: vec![],
                },
            ],
        )
        .unwrap();
        let report = chain.validate();
        assert!(!report.reachable);
        assert_eq!(report.unreachable, vec!["b".to_owned()]);
        assert!(!report.is_valid());
    }

    #[test]
    fn state_outputs_round_trip_and_mismatch() {
        let chain = MarkovChain::new(
            vec!["a".into(), "b".into()],
            vec![],
            vec![
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 2),
                    out: vec![],
                },
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![],
                },
                Transition {
                    from: 1,
                    to: 0,
                    prob: r(1, 1),
                    out: vec![],
                },
            ],
        )
        .unwrap();
        let f: BTreeMap<String, Vec<Rational>> = [
            ("a".to_owned(), vec![r(0, 1)]),
            ("b".to_owned(), vec![r(1, 1)]),
        ]
        .into_iter()
        .collect();
        let with_outputs = chain.from_state_outputs(vec!["f".into()], &f).unwrap();
        for t in with_outputs.transitions() {
            assert_eq!(t.out, f[with_outputs.state_name(t.from)]);
        }
        assert_eq!(with_outputs.state_outputs().unwrap(), f);

        // constant function: every output the same, so the variance-zero test
        // downstream recovers the constant
        let c: BTreeMap<String, Vec<Rational>> = [
            ("a".to_owned(), vec![r(7, 3)]),
            ("b".to_owned(), vec![r(7, 3)]),
        ]
        .into_iter()
        .collect();
        let constant = chain.from_state_outputs(vec!["c".into()], &c).unwrap();
        assert!(constant
            .transitions()
            .iter()
            .all(|t| t.out == vec![r(7, 3)]));
        let comp = crate::graph::final_component(&constant).unwrap();
        assert_eq!(
            crate::cycle_space::variance_zero(&comp, 0).unwrap(),
            Some(r(7, 3))
        );

        let missing: BTreeMap<String, Vec<Rational>> =
            [("a".to_owned(), vec![r(0, 1)])].into_iter().collect();
        assert!(matches!(
            chain.from_state_outputs(vec!["f".into()], &missing),
            Err(Error::MissingStateOutput(name)) if name == "b"
        ));

        // 10/11-block outputs differ across state 1's out-edges
        let text = r#"{
            "states": ["0", "1"], "initial": "0", "outputs": ["k10", "k11"],
            "transitions": [
                {"from": "0", "to": "0", "prob": "1/2", "out": ["0", "0"]},
                {"from": "0", "to": "1", "prob": "1/2", "out": ["0", "0"]},
                {"from": "1", "to": "0", "prob": "1/2", "out": ["1", "0"]},
                {"from": "1", "to": "1", "prob": "1/2", "out": ["0", "1"]}
            ]
        }"#;
        let blocks: MarkovChain<Rational> = parse_chain(text).unwrap();
        assert!(matches!(
            blocks.state_outputs(),
            Err(Error::NonConstantStateOutput(name)) if name == "1"
        ));
    }

    #[test]
    fn serialization_round_trips() {
        let chain = bernoulli_chain();
        let text = serialize_chain(&chain);
        let back: MarkovChain<Rational> = parse_chain(&text).unwrap();
        assert_eq!(chain, back);
    }
}
