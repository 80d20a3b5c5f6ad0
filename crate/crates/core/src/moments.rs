//! Asymptotic expectation and variance-covariance constants of the output
//! sums, by two independent engines, plus finite-`n` ground truth.
//!
//! The digraph engine enumerates the spanning functional digraphs of the
//! final component with one and two components and evaluates the weighted
//! cycle sums directly. The determinant engine differentiates
//! `det(I - z A(x))` at `(1, ..., 1, 1)` through truncated Taylor arithmetic
//! and applies the implicit-differentiation formulas. Both produce identical
//! exact values; `analyze` runs them side by side and insists on equality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::MarkovChain;
use crate::cycle_space::{cycle_rank_test, variance_zero};
use crate::error::{Error, Result};
use crate::graph::{final_component, for_each_functional_digraph, Component};
use crate::jet::char_derivatives;
use crate::linalg::det_scalar;
use crate::scalar::Scalar;

/// Which engine produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    Digraph,
    Determinant,
}

impl std::fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentMethod::Digraph => write!(f, "digraph"),
            MomentMethod::Determinant => write!(f, "determinant"),
        }
    }
}

/// Weighted cycle sums over the spanning functional digraphs with one
/// component (`D1`) and two components (`D2`). The `D2` sums run over ordered
/// pairs of distinct cycles, which doubles the unordered sum for symmetric
/// integrands.
#[derive(Debug, Clone, PartialEq)]
pub struct D1D2Sums<S> {
    pub m: usize,
    /// `1(D1)`; positive for every strongly connected component.
    pub one_d1: S,
    /// `k_i(D1)`
    pub k_d1: Vec<S>,
    /// `(k_i, k_j)(D1)`, full symmetric matrix
    pub kk_d1: Vec<Vec<S>>,
    /// `(k_i, k_j)(D2)`
    pub kk_d2: Vec<Vec<S>>,
    /// `(k_i, 1)(D1)`
    pub k_one_d1: Vec<S>,
    /// `(k_i, 1)(D2)`
    pub k_one_d2: Vec<S>,
    /// `(1, 1)(D1)`
    pub one_one_d1: S,
    /// `(1, 1)(D2)`
    pub one_one_d2: S,
}

/// Accumulates the `D1`/`D2` sums in one pass over the functional digraphs.
pub fn d1_d2_sums<S: Scalar>(comp: &Component<S>, cap: u64) -> Result<D1D2Sums<S>> {
    let m = comp.dim();
    let mut sums = D1D2Sums {
        m,
        one_d1: S::zero(),
        k_d1: vec![S::zero(); m],
        kk_d1: vec![vec![S::zero(); m]; m],
        kk_d2: vec![vec![S::zero(); m]; m],
        k_one_d1: vec![S::zero(); m],
        k_one_d2: vec![S::zero(); m],
        one_one_d1: S::zero(),
        one_one_d2: S::zero(),
    };
    for_each_functional_digraph(comp, cap, |d| match d.cycles.as_slice() {
        [c] => {
            let p = &d.weight;
            let len = S::from_int(c.len() as i64);
            sums.one_d1 = sums.one_d1.clone() + p.clone() * len.clone();
            for i in 0..m {
                sums.k_d1[i] = sums.k_d1[i].clone() + p.clone() * c.value[i].clone();
                sums.k_one_d1[i] =
                    sums.k_one_d1[i].clone() + p.clone() * c.value[i].clone() * len.clone();
                for j in 0..m {
                    sums.kk_d1[i][j] = sums.kk_d1[i][j].clone()
                        + p.clone() * c.value[i].clone() * c.value[j].clone();
                }
            }
            sums.one_one_d1 = sums.one_one_d1.clone() + p.clone() * len.clone() * len.clone();
        }
        [c1, c2] => {
            let p = &d.weight;
            let (l1, l2) = (S::from_int(c1.len() as i64), S::from_int(c2.len() as i64));
            for i in 0..m {
                sums.k_one_d2[i] = sums.k_one_d2[i].clone()
                    + p.clone()
                        * (c1.value[i].clone() * l2.clone() + c2.value[i].clone() * l1.clone());
                for j in 0..m {
                    sums.kk_d2[i][j] = sums.kk_d2[i][j].clone()
                        + p.clone()
                            * (c1.value[i].clone() * c2.value[j].clone()
                                + c2.value[i].clone() * c1.value[j].clone());
                }
            }
            sums.one_one_d2 =
                sums.one_one_d2.clone() + p.clone() * S::from_int(2) * l1.clone() * l2.clone();
        }
        _ => {}
    })?;
    Ok(sums)
}

/// Asymptotic expectation vector and variance-covariance matrix, with the
/// verdicts derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<S> {
    /// `E[K_n^(i)] = e_i n + O(1)`
    pub e: Vec<S>,
    /// `Sigma`: variances on the diagonal, covariance constants off it.
    pub sigma: Vec<Vec<S>>,
    /// `Sigma` regular, i.e. the output sums satisfy a joint CLT.
    pub sigma_regular: bool,
    /// `[i][j]`: the zero verdict for `sigma[i][j]` — asymptotic pairwise
    /// independence off the diagonal, variance zero on it.
    pub pairwise_independent: Vec<Vec<bool>>,
    pub method: MomentMethod,
}

impl<S: Scalar> MomentReport<S> {
    fn from_sigma(e: Vec<S>, sigma: Vec<Vec<S>>, method: MomentMethod) -> Self {
        let det = det_scalar(&sigma);
        let pairwise = sigma
            .iter()
            .map(|row| row.iter().map(Scalar::is_verdict_zero).collect())
            .collect();
        MomentReport {
            e,
            sigma,
            sigma_regular: !det.is_verdict_zero(),
            pairwise_independent: pairwise,
            method,
        }
    }

    pub fn dim(&self) -> usize {
        self.e.len()
    }

    /// The covariance constant for a pair of outputs.
    pub fn covariance(&self, i: usize, j: usize) -> &S {
        &self.sigma[i][j]
    }
}

/// Moment constants by weighted functional-digraph enumeration:
/// `e_i = k_i(D1) / 1(D1)` and
/// `sigma_ij = ((k_i - e_i 1, k_j - e_j 1)(D1) - (...)(D2)) / 1(D1)`,
/// the centered sums expanded bilinearly from [`d1_d2_sums`].
pub fn moments_combinatorial<S: Scalar>(comp: &Component<S>, cap: u64) -> Result<MomentReport<S>> {
    let sums = d1_d2_sums(comp, cap)?;
    let m = sums.m;
    if sums.one_d1.is_zero() {
        return Err(Error::Internal("1(D1) vanished on a component".into()));
    }
    let e: Vec<S> = (0..m)
        .map(|i| sums.k_d1[i].clone() / sums.one_d1.clone())
        .collect();

    let centered = |i: usize, j: usize, kk: &Vec<Vec<S>>, k_one: &Vec<S>, one_one: &S| -> S {
        kk[i][j].clone() - e[i].clone() * k_one[j].clone() - e[j].clone() * k_one[i].clone()
            + e[i].clone() * e[j].clone() * one_one.clone()
    };

    let mut sigma = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let d1 = centered(i, j, &sums.kk_d1, &sums.k_one_d1, &sums.one_one_d1);
            let d2 = centered(i, j, &sums.kk_d2, &sums.k_one_d2, &sums.one_one_d2);
            let value = (d1 - d2) / sums.one_d1.clone();
            sigma[i][j] = value.clone();
            sigma[j][i] = value;
        }
    }
    Ok(MomentReport::from_sigma(e, sigma, MomentMethod::Digraph))
}

/// Moment constants from the derivative bundle of `f = det(I - z A)`, by
/// implicit differentiation of the dominant root:
/// `e_i = f_{x_i} / f_z` and
/// `v_i = (f_{x_i}^2 (f_{zz} + f_z) + f_z^2 (f_{x_i x_i} + f_{x_i})
///         - 2 f_{x_i} f_z f_{x_i z}) / f_z^3`,
/// with the mixed analogue for covariances.
pub fn moments_determinant<S: Scalar>(comp: &Component<S>) -> Result<MomentReport<S>> {
    let d = char_derivatives(comp)?;
    if d.f_z.is_zero() {
        return Err(Error::Internal(
            "f_z = 0; the component cannot be a stochastic final component".into(),
        ));
    }
    let m = d.m;
    let fz = d.f_z.clone();
    let fz2 = fz.clone() * fz.clone();
    let fz3 = fz2.clone() * fz.clone();

    let e: Vec<S> = (0..m).map(|i| d.f_x[i].clone() / fz.clone()).collect();

    let mut sigma = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let second = if i == j {
                d.f_xx_plus_fx[i].clone()
            } else {
                d.mixed(i, j).clone()
            };
            let value = (d.f_x[i].clone() * d.f_x[j].clone() * d.f_zz_plus_fz.clone()
                + fz2.clone() * second
                - fz.clone()
                    * (d.f_x[i].clone() * d.f_xz[j].clone()
                        + d.f_x[j].clone() * d.f_xz[i].clone()))
                / fz3.clone();
            sigma[i][j] = value.clone();
            sigma[j][i] = value;
        }
    }
    Ok(MomentReport::from_sigma(
        e,
        sigma,
        MomentMethod::Determinant,
    ))
}

/// Exact moments of the output sums after exactly `n` steps, from the full
/// path distribution of the whole chain (not only the final component).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMoments<S> {
    pub n: usize,
    pub mean: Vec<S>,
    pub variance: Vec<S>,
    /// Full symmetric matrix; the diagonal repeats `variance`.
    pub covariance: Vec<Vec<S>>,
}

/// Dynamic program over per-state accumulators of probability mass, first
/// moments, and second moments of the partial sums. Cost `O(n |E| m^2)`.
pub fn exact_dp_moments<S: Scalar>(chain: &MarkovChain<S>, n: usize) -> FiniteMoments<S> {
    let states = chain.state_count();
    let m = chain.dim();
    let mut p = vec![S::zero(); states];
    p[0] = S::one();
    let mut m1 = vec![vec![S::zero(); m]; states];
    let mut m2 = vec![vec![vec![S::zero(); m]; m]; states];

    for _ in 0..n {
        let mut np = vec![S::zero(); states];
        let mut nm1 = vec![vec![S::zero(); m]; states];
        let mut nm2 = vec![vec![vec![S::zero(); m]; m]; states];
        for t in chain.transitions() {
            // no mass at the source means the moment accumulators are zero too
            if p[t.from].is_zero() {
                continue;
            }
            let q = &t.prob;
            np[t.to] = np[t.to].clone() + q.clone() * p[t.from].clone();
            for i in 0..m {
                nm1[t.to][i] = nm1[t.to][i].clone()
                    + q.clone() * (m1[t.from][i].clone() + t.out[i].clone() * p[t.from].clone());
                for j in 0..m {
                    nm2[t.to][i][j] = nm2[t.to][i][j].clone()
                        + q.clone()
                            * (m2[t.from][i][j].clone()
                                + t.out[i].clone() * m1[t.from][j].clone()
                                + t.out[j].clone() * m1[t.from][i].clone()
                                + t.out[i].clone() * t.out[j].clone() * p[t.from].clone());
                }
            }
        }
        p = np;
        m1 = nm1;
        m2 = nm2;
    }

    let mean: Vec<S> = (0..m)
        .map(|i| (0..states).fold(S::zero(), |acc, s| acc + m1[s][i].clone()))
        .collect();
    let raw2 = |i: usize, j: usize| -> S {
        (0..states).fold(S::zero(), |acc, s| acc + m2[s][i][j].clone())
    };
    let covariance: Vec<Vec<S>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| raw2(i, j) - mean[i].clone() * mean[j].clone())
                .collect()
        })
        .collect();
    let variance = (0..m).map(|i| covariance[i][i].clone()).collect();
    FiniteMoments {
        n,
        mean,
        variance,
        covariance,
    }
}

/// Seeded Monte Carlo estimate of the finite-`n` output distribution together
/// with normality diagnostics of the standardized samples.
#[derive(Debug, Clone)]
pub struct McReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Sample mean of the raw output sums.
    pub mean: Vec<f64>,
    /// Sample covariance of the raw output sums.
    pub covariance: Vec<Vec<f64>>,
    /// Per-sample standardized vectors `(K - e n) / sqrt(n)`, whitened by the
    /// asymptotic `Sigma` when it is positive definite.
    pub standardized: Vec<Vec<f64>>,
    /// Whether whitening succeeded; false means `Sigma` was singular and the
    /// standardized vectors are unwhitened.
    pub whitened: bool,
    pub skewness: Vec<f64>,
    pub excess_kurtosis: Vec<f64>,
}

/// Simulates `samples` random paths of length `n`. Each sample draws from its
/// own ChaCha stream derived from `(seed, sample index)`, so results are
/// byte-identical however the work is sharded.
pub fn monte_carlo<S: Scalar>(
    chain: &MarkovChain<S>,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<McReport> {
    if samples == 0 {
        return Err(Error::Internal(
            "monte_carlo needs at least one sample".into(),
        ));
    }
    let float_chain = chain.to_f64();
    let comp = final_component(&float_chain)?;
    let asymptotic = moments_determinant(&comp)?;
    let m = float_chain.dim();

    // per-state cumulative transition table
    let mut table: Vec<Vec<(f64, usize)>> = vec![Vec::new(); float_chain.state_count()];
    for (s, edges) in float_chain.out_edges().iter().enumerate() {
        let mut acc = 0.0;
        for &e in edges {
            acc += float_chain.transitions()[e].prob;
            table[s].push((acc, e));
        }
    }

    let chol = cholesky(&asymptotic.sigma);
    let whitened = chol.is_some();
    let sqrt_n = (n as f64).sqrt();

    let mut raw = Vec::with_capacity(samples);
    let mut standardized = Vec::with_capacity(samples);
    for index in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut state = 0usize;
        let mut k = vec![0.0f64; m];
        for _ in 0..n {
            let u: f64 = rng.random();
            let row = &table[state];
            let mut chosen = row.len() - 1;
            for (idx, (cum, _)) in row.iter().enumerate() {
                if u < *cum {
                    chosen = idx;
                    break;
                }
            }
            let t = &float_chain.transitions()[row[chosen].1];
            for (acc, x) in k.iter_mut().zip(&t.out) {
                *acc += *x;
            }
            state = t.to;
        }
        let mut y: Vec<f64> = (0..m)
            .map(|i| (k[i] - asymptotic.e[i] * n as f64) / sqrt_n)
            .collect();
        if let Some(l) = &chol {
            y = forward_substitute(l, &y);
        }
        raw.push(k);
        standardized.push(y);
    }

    let mean: Vec<f64> = (0..m)
        .map(|i| raw.iter().map(|k| k[i]).sum::<f64>() / samples as f64)
        .collect();
    let covariance: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    raw.iter()
                        .map(|k| (k[i] - mean[i]) * (k[j] - mean[j]))
                        .sum::<f64>()
                        / samples as f64
                })
                .collect()
        })
        .collect();

    let mut skewness = Vec::with_capacity(m);
    let mut excess_kurtosis = Vec::with_capacity(m);
    for i in 0..m {
        let values: Vec<f64> = standardized.iter().map(|y| y[i]).collect();
        let (skew, kurt) = skew_kurtosis(&values);
        skewness.push(skew);
        excess_kurtosis.push(kurt);
    }

    Ok(McReport {
        n,
        samples,
        seed,
        mean,
        covariance,
        standardized,
        whitened,
        skewness,
        excess_kurtosis,
    })
}

/// Lower-triangular Cholesky factor, or `None` when the matrix is not
/// positive definite (within float tolerance).
fn cholesky(sigma: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = sigma.len();
    let mut l = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        for j in 0..=i {
            let mut sum = sigma[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 1e-12 {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

fn forward_substitute(l: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = y.len();
    let mut w = vec![0.0f64; m];
    for i in 0..m {
        let mut sum = y[i];
        for k in 0..i {
            sum -= l[i][k] * w[k];
        }
        w[i] = sum / l[i][i];
    }
    w
}

fn skew_kurtosis(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let central = |p: i32| values.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let m2 = central(2);
    let skew = central(3) / m2.powf(1.5);
    let kurt = central(4) / (m2 * m2) - 3.0;
    (skew, kurt)
}

/// Runs both moment engines and checks that they agree exactly (or within the
/// verdict tolerance in float mode), together with the cycle-space verdict.
pub fn cross_checked_moments<S: Scalar>(comp: &Component<S>, cap: u64) -> Result<MomentReport<S>> {
    let digraph = moments_combinatorial(comp, cap)?;
    let determinant = moments_determinant(comp)?;
    let agree = if S::EXACT {
        digraph.e == determinant.e && digraph.sigma == determinant.sigma
    } else {
        let close = |a: &S, b: &S| (a.clone() - b.clone()).is_verdict_zero();
        digraph
            .e
            .iter()
            .zip(&determinant.e)
            .all(|(a, b)| close(a, b))
            && digraph
                .sigma
                .iter()
                .zip(&determinant.sigma)
                .all(|(ra, rb)| ra.iter().zip(rb).all(|(a, b)| close(a, b)))
    };
    if !agree {
        return Err(Error::MethodDisagreement(format!(
            "digraph: e={:?} sigma={:?}; determinant: e={:?} sigma={:?}",
            digraph.e, digraph.sigma, determinant.e, determinant.sigma
        )));
    }
    let rank_verdict = cycle_rank_test(comp).is_independent();
    if digraph.sigma_regular != rank_verdict {
        return Err(Error::MethodDisagreement(format!(
            "sigma determinant says regular={}, cycle rank test says {}",
            digraph.sigma_regular, rank_verdict
        )));
    }
    // variance-zero characterization must agree with the diagonal
    for i in 0..comp.dim() {
        let quasi = variance_zero(comp, i)?;
        let v_zero = digraph.sigma[i][i].is_verdict_zero();
        match (&quasi, v_zero) {
            (Some(a), true) => {
                if S::EXACT && *a != digraph.e[i] {
                    return Err(Error::MethodDisagreement(format!(
                        "variance-zero constant {} differs from e_{} = {}",
                        a.render(),
                        i,
                        digraph.e[i].render()
                    )));
                }
            }
            (None, false) => {}
            _ => {
                return Err(Error::MethodDisagreement(format!(
                    "variance_zero({i}) = {quasi:?} but v_{i} = {}",
                    digraph.sigma[i][i].render()
                )));
            }
        }
    }
    Ok(digraph)
}
