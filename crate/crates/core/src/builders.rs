//! Constructors for the example families: the w-NAF Hamming-weight
//! transducers, synchronized transducer products over a common binary input,
//! and the two-state block-counting chains with parameterized probabilities.

use crate::chain::{MarkovChain, Transition};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A deterministic, input-complete transducer over the input alphabet
/// `{0, 1}`: exactly one transition per state and input letter.
#[derive(Debug, Clone)]
pub struct Transducer<S> {
    name: String,
    states: Vec<String>,
    /// `step[state][input]` is `(next state, output)`.
    step: Vec<[(usize, S); 2]>,
}

impl<S: Scalar> Transducer<S> {
    /// Builds a transducer from a transition list; fails unless every state
    /// has exactly one transition per input letter.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        transitions: Vec<(usize, u8, usize, S)>,
    ) -> Result<Self> {
        let n = states.len();
        let mut step: Vec<[Option<(usize, S)>; 2]> = vec![[None, None]; n];
        for (from, input, to, output) in transitions {
            if from >= n || to >= n || input > 1 {
                return Err(Error::BadTransducer {
                    state: from.min(n.saturating_sub(1)).to_string(),
                });
            }
            if step[from][input as usize].is_some() {
                return Err(Error::BadTransducer {
                    state: states[from].clone(),
                });
            }
            step[from][input as usize] = Some((to, output));
        }
        let step = step
            .into_iter()
            .enumerate()
            .map(|(s, row)| match row {
                [Some(a), Some(b)] => Ok([a, b]),
                _ => Err(Error::BadTransducer {
                    state: states[s].clone(),
                }),
            })
            .collect::<Result<_>>()?;
        Ok(Transducer {
            name: name.into(),
            states,
            step,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transition(&self, state: usize, input: u8) -> &(usize, S) {
        &self.step[state][input as usize]
    }

    /// Runs the transducer on an input word from the initial state; returns
    /// the total output and the end state.
    pub fn run(&self, input: &[u8]) -> (S, usize) {
        let mut state = 0;
        let mut sum = S::zero();
        for &letter in input {
            let (next, out) = self.transition(state, letter);
            sum = sum + out.clone();
            state = *next;
        }
        (sum, state)
    }
}

/// The transducer computing the Hamming weight of the width-`w` non-adjacent
/// form from the binary expansion of the input, for `w >= 2`. It has `w + 1`
/// states: a start state `1`, a chain `2, ..., w` absorbing window positions,
/// and a carry state `w + 1`.
pub fn wnaf_transducer<S: Scalar>(w: u32) -> Result<Transducer<S>> {
    if w < 2 {
        return Err(Error::WidthTooSmall(w));
    }
    let w = w as usize;
    let states: Vec<String> = (1..=w + 1).map(|i| i.to_string()).collect();
    // local indices: state i has index i - 1
    let zero = S::zero;
    let one = S::one;
    let mut t: Vec<(usize, u8, usize, S)> = vec![
        (0, 0, 0, zero()), // loop at 1 on 0|0
        (0, 1, 1, one()),  // 1 -> 2 on 1|1
    ];
    // the chain 2 -> ... -> w moves on on either input, output 0
    for s in 1..w - 1 {
        t.push((s, 0, s + 1, zero()));
        t.push((s, 1, s + 1, zero()));
    }
    t.push((w - 1, 0, 0, zero())); // w -> 1 on 0|0
    t.push((w - 1, 1, w, zero())); // w -> w+1 on 1|0
    t.push((w, 1, w, zero())); // loop at w+1 on 1|0
    t.push((w, 0, 1, one())); // w+1 -> 2 on 0|1
    Transducer::new(format!("hw{w}"), states, t)
}

/// Cartesian product of two transducers driven by the same random binary
/// input: states are the reachable state pairs, each input letter becomes one
/// transition with its probability, and the output vector pairs the two
/// transducers' outputs.
pub fn product<S: Scalar>(
    a: &Transducer<S>,
    b: &Transducer<S>,
    input_probs: &[S; 2],
) -> Result<MarkovChain<S>> {
    for p in input_probs {
        if p.partial_cmp(&S::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ProbabilityRange(p.render()));
        }
    }
    if !(input_probs[0].clone() + input_probs[1].clone() - S::one()).is_verdict_zero() {
        return Err(Error::ProbabilityRange(format!(
            "{} + {}",
            input_probs[0].render(),
            input_probs[1].render()
        )));
    }

    let mut pairs: Vec<(usize, usize)> = vec![(0, 0)];
    let mut index_of = std::collections::HashMap::new();
    index_of.insert((0, 0), 0usize);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (sa, sb) = pairs[next];
        for input in 0..2u8 {
            let (ta, oa) = a.transition(sa, input);
            let (tb, ob) = b.transition(sb, input);
            let target = (*ta, *tb);
            let to = *index_of.entry(target).or_insert_with(|| {
                pairs.push(target);
                pairs.len() - 1
            });
            transitions.push(Transition {
                from: next,
                to,
                prob: input_probs[input as usize].clone(),
                out: vec![oa.clone(), ob.clone()],
            });
        }
        next += 1;
    }

    let states = pairs
        .iter()
        .map(|&(sa, sb)| format!("{}|{}", a.states()[sa], b.states()[sb]))
        .collect();
    MarkovChain::new(
        states,
        vec![a.name().to_owned(), b.name().to_owned()],
        transitions,
    )
}

/// Which pair of length-2 blocks a block chain counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Count 10-blocks and 11-blocks.
    TenEleven,
    /// Count 00-blocks and 11-blocks.
    ZeroZeroEleven,
}

impl BlockKind {
    pub fn output_names(self) -> [&'static str; 2] {
        match self {
            BlockKind::TenEleven => ["k10", "k11"],
            BlockKind::ZeroZeroEleven => ["k00", "k11"],
        }
    }
}

impl std::str::FromStr for BlockKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "10-11" => Ok(BlockKind::TenEleven),
            "00-11" => Ok(BlockKind::ZeroZeroEleven),
            other => Err(format!("unknown block kind `{other}`; use 10-11 or 00-11")),
        }
    }
}

fn check_open_unit<S: Scalar>(p: &S) -> Result<()> {
    if *p > S::zero() && *p < S::one() {
        Ok(())
    } else {
        Err(Error::ProbabilityRange(p.render()))
    }
}

/// The two-state chain of the block-counting transducers on states `0`, `1`:
/// four transitions with `p(0->0) = p00`, `p(1->1) = p11`. The 10-counter
/// outputs 1 on `1 -> 0`, the 11-counter on the loop at `1`, and the
/// 00-counter on the loop at `0`.
pub fn block_chain<S: Scalar>(kind: BlockKind, p00: S, p11: S) -> Result<MarkovChain<S>> {
    check_open_unit(&p00)?;
    check_open_unit(&p11)?;
    let p01 = S::one() - p00.clone();
    let p10 = S::one() - p11.clone();
    let (z, o) = (S::zero, S::one);
    let outs: [[S; 2]; 4] = match kind {
        // edge order: 0->0, 0->1, 1->0, 1->1
        BlockKind::TenEleven => [[z(), z()], [z(), z()], [o(), z()], [z(), o()]],
        BlockKind::ZeroZeroEleven => [[o(), z()], [z(), z()], [z(), z()], [z(), o()]],
    };
    let [o00, o01, o10, o11] = outs;
    let names = kind.output_names();
    MarkovChain::new(
        vec!["0".into(), "1".into()],
        vec![names[0].into(), names[1].into()],
        vec![
            Transition {
                from: 0,
                to: 0,
                prob: p00,
                out: o00.to_vec(),
            },
            Transition {
                from: 0,
                to: 1,
                prob: p01,
                out: o01.to_vec(),
            },
            Transition {
                from: 1,
                to: 0,
                prob: p10,
                out: o10.to_vec(),
            },
            Transition {
                from: 1,
                to: 1,
                prob: p11,
                out: o11.to_vec(),
            },
        ],
    )
}

/// The block chain with the explicit initial state in front of the two-state
/// core: the source reads one input letter (probability 1/2 each, output 0)
/// and never returns. The chain is finally connected but not strongly
/// connected; the asymptotic constants are those of the core.
pub fn block_chain_with_source<S: Scalar>(
    kind: BlockKind,
    p00: S,
    p11: S,
) -> Result<MarkovChain<S>> {
    let core = block_chain(kind, p00, p11)?;
    let mut states = vec!["i".to_owned()];
    states.extend(core.states().iter().cloned());
    let zero_out = vec![S::zero(), S::zero()];
    let mut transitions = vec![
        Transition {
            from: 0,
            to: 1,
            prob: S::ratio(1, 2),
            out: zero_out.clone(),
        },
        Transition {
            from: 0,
            to: 2,
            prob: S::ratio(1, 2),
            out: zero_out,
        },
    ];
    transitions.extend(core.transitions().iter().map(|t| Transition {
        from: t.from + 1,
        to: t.to + 1,
        prob: t.prob.clone(),
        out: t.out.clone(),
    }));
    MarkovChain::new(states, core.outputs().to_vec(), transitions)
}

/// The probability `p(0->0)` making the numbers of 10- and 11-blocks
/// asymptotically independent, as a function of `p(1->1)`:
/// `-p11/2 + 2 - sqrt(p11^2 - 8 p11 + 8)/2`, which lies in `(2 - sqrt 2, 1)`.
pub fn independence_curve_10_11(p11: f64) -> Result<f64> {
    if !(p11 > 0.0 && p11 < 1.0) {
        return Err(Error::ProbabilityRange(p11.to_string()));
    }
    Ok(-0.5 * p11 + 2.0 - 0.5 * (p11 * p11 - 8.0 * p11 + 8.0).sqrt())
}
