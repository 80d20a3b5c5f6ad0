//! Total-degree-2 truncated Taylor arithmetic in the variables
//! `(t_1, ..., t_m, zeta)`, and the derivative bundle of
//! `f(x_1, ..., x_m, z) = det(I - z A(x_1, ..., x_m))` at `(1, ..., 1, 1)`.
//!
//! The substitution `x_i = exp(t_i)`, `z = exp(zeta)` makes the combinations
//! needed downstream plain coefficients: the coefficient of `t_i` is
//! `f_{x_i}`, of `t_i t_j` is `f_{x_i x_j}`, twice the coefficient of `t_i^2`
//! is `f_{x_i x_i} + f_{x_i}`, twice the coefficient of `zeta^2` is
//! `f_{zz} + f_z`, and of `t_i zeta` is `f_{x_i z}`, with no recombination.
//!
//! Jets with zero constant term are not invertible, so determinants use the
//! division-free algorithm from [`crate::linalg`].

use crate::error::{Error, Result};
use crate::graph::Component;
use crate::linalg::{det_division_free, Ring};
use crate::scalar::Scalar;

/// Coefficients of a polynomial of total degree <= 2 in `nvars` variables:
/// the constant, `nvars` linear terms, then the upper-triangular quadratic
/// terms in lexicographic pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<S> {
    nvars: usize,
    coeffs: Vec<S>,
}

fn quad_index(nvars: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < nvars);
    let offset = a * nvars - (a * a - a) / 2;
    1 + nvars + offset + (b - a)
}

impl<S: Scalar> Jet2<S> {
    pub fn len(nvars: usize) -> usize {
        1 + nvars + nvars * (nvars + 1) / 2
    }

    pub fn zero(nvars: usize) -> Self {
        Jet2 {
            nvars,
            coeffs: vec![S::zero(); Self::len(nvars)],
        }
    }

    pub fn constant(nvars: usize, value: S) -> Self {
        let mut jet = Self::zero(nvars);
        jet.coeffs[0] = value;
        jet
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn constant_coeff(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn linear_coeff(&self, v: usize) -> &S {
        &self.coeffs[1 + v]
    }

    /// Coefficient of the monomial `v_a * v_b` (with `v^2` for `a == b`).
    pub fn quadratic_coeff(&self, a: usize, b: usize) -> &S {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        &self.coeffs[quad_index(self.nvars, a, b)]
    }

    /// Degree-2 truncation of `c * exp(l)` for a linear form `l`:
    /// `c * (1 + l + l^2 / 2)`.
    pub fn exp_linear(c: S, linear: &[S]) -> Self {
        let nvars = linear.len();
        let mut jet = Self::zero(nvars);
        jet.coeffs[0] = c.clone();
        for (v, l) in linear.iter().enumerate() {
            jet.coeffs[1 + v] = c.clone() * l.clone();
        }
        let half = S::ratio(1, 2);
        for a in 0..nvars {
            for b in a..nvars {
                let mut term = c.clone() * linear[a].clone() * linear[b].clone();
                if a == b {
                    term = term * half.clone();
                }
                jet.coeffs[quad_index(nvars, a, b)] = term;
            }
        }
        jet
    }

    pub fn scale(&self, factor: &S) -> Self {
        Jet2 {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        Jet2 {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        Jet2 {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Jet2 {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    /// Product truncated at total degree 2.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let n = self.nvars;
        let mut out = Self::zero(n);
        let (ac, bc) = (&self.coeffs[0], &other.coeffs[0]);
        out.coeffs[0] = ac.clone() * bc.clone();
        for v in 0..n {
            out.coeffs[1 + v] =
                ac.clone() * other.coeffs[1 + v].clone() + bc.clone() * self.coeffs[1 + v].clone();
        }
        for a in 0..n {
            for b in a..n {
                let idx = quad_index(n, a, b);
                let mut acc =
                    ac.clone() * other.coeffs[idx].clone() + bc.clone() * self.coeffs[idx].clone();
                if a == b {
                    acc = acc + self.coeffs[1 + a].clone() * other.coeffs[1 + a].clone();
                } else {
                    acc = acc
                        + self.coeffs[1 + a].clone() * other.coeffs[1 + b].clone()
                        + self.coeffs[1 + b].clone() * other.coeffs[1 + a].clone();
                }
                out.coeffs[idx] = acc;
            }
        }
        out
    }

    fn max_abs(&self) -> S {
        let mut best = S::zero();
        for c in &self.coeffs {
            if c.abs() > best {
                best = c.abs();
            }
        }
        best
    }
}

impl<S: Scalar> Ring for Jet2<S> {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }

    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

/// The partial derivatives of `f(x_1, ..., x_m, z) = det(I - z A)` at
/// `(1, ..., 1, 1)`, in the combinations the moment formulas consume.
#[derive(Debug, Clone, PartialEq)]
pub struct CharDerivatives<S> {
    pub m: usize,
    /// `f_z`
    pub f_z: S,
    /// `f_{x_i}`
    pub f_x: Vec<S>,
    /// `f_{x_i x_i} + f_{x_i}`
    pub f_xx_plus_fx: Vec<S>,
    /// `f_{x_i x_j}` for `i < j`, addressed through [`CharDerivatives::mixed`]
    pub f_mixed: Vec<Vec<S>>,
    /// `f_{x_i z}`
    pub f_xz: Vec<S>,
    /// `f_{zz} + f_z`
    pub f_zz_plus_fz: S,
}

impl<S: Scalar> CharDerivatives<S> {
    /// `f_{x_i x_j}` for `i != j`.
    pub fn mixed(&self, i: usize, j: usize) -> &S {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        &self.f_mixed[i][j - i - 1]
    }
}

/// Builds the jet-valued transition matrix `I - z A` of the component, with
/// `x_i = exp(t_i)` and `z = exp(zeta)`, takes its division-free determinant,
/// and reads the derivative bundle off the coefficients. The constant
/// coefficient must vanish, since a stochastic `A` makes `I - A` singular.
pub fn char_derivatives<S: Scalar>(comp: &Component<S>) -> Result<CharDerivatives<S>> {
    let m = comp.dim();
    let n = comp.vertex_count();
    let nvars = m + 1;
    let zeta = m;

    let mut matrix = vec![vec![Jet2::zero(nvars); n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = Jet2::constant(nvars, S::one());
    }
    for e in comp.edges() {
        let mut linear: Vec<S> = e.out.clone();
        linear.push(S::one()); // the z exponent
        let term = Jet2::exp_linear(e.prob.clone(), &linear);
        matrix[e.from][e.to] = matrix[e.from][e.to].sub(&term);
    }

    let f = det_division_free(&matrix);

    let scale = f.max_abs();
    if !f.constant_coeff().is_negligible(&scale) {
        return Err(Error::Internal(format!(
            "constant coefficient of det(I - zA) is {} instead of 0",
            f.constant_coeff().render()
        )));
    }

    let two = S::from_int(2);
    Ok(CharDerivatives {
        m,
        f_z: f.linear_coeff(zeta).clone(),
        f_x: (0..m).map(|i| f.linear_coeff(i).clone()).collect(),
        f_xx_plus_fx: (0..m)
            .map(|i| two.clone() * f.quadratic_coeff(i, i).clone())
            .collect(),
        f_mixed: (0..m)
            .map(|i| {
                (i + 1..m)
                    .map(|j| f.quadratic_coeff(i, j).clone())
                    .collect()
            })
            .collect(),
        f_xz: (0..m).map(|i| f.quadratic_coeff(i, zeta).clone()).collect(),
        f_zz_plus_fz: two.clone() * f.quadratic_coeff(zeta, zeta).clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Transition;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn jet(coeffs: &[(usize, Rational)], nvars: usize) -> Jet2<Rational> {
        let mut j = Jet2::zero(nvars);
        for (idx, c) in coeffs {
            j.coeffs[*idx] = c.clone();
        }
        j
    }

    #[test]
    fn exp_linear_examples() {
        // c = 1, l = 0
        let j = Jet2::exp_linear(r(1, 1), &[r(0, 1)]);
        assert_eq!(j, Jet2::constant(1, r(1, 1)));

        // c = 1/2, l = t1: 1/2 + t1/2 + t1^2/4
        let j = Jet2::exp_linear(r(1, 2), &[r(1, 1)]);
        assert_eq!(j.constant_coeff(), &r(1, 2));
        assert_eq!(j.linear_coeff(0), &r(1, 2));
        assert_eq!(j.quadratic_coeff(0, 0), &r(1, 4));

        // c = 1, l = t1 + zeta: all six coefficients
        let j = Jet2::exp_linear(r(1, 1), &[r(1, 1), r(1, 1)]);
        assert_eq!(j.constant_coeff(), &r(1, 1));
        assert_eq!(j.linear_coeff(0), &r(1, 1));
        assert_eq!(j.linear_coeff(1), &r(1, 1));
        assert_eq!(j.quadratic_coeff(0, 0), &r(1, 2));
        assert_eq!(j.quadratic_coeff(0, 1), &r(1, 1));
        assert_eq!(j.quadratic_coeff(1, 1), &r(1, 2));
    }

    #[test]
    fn determinant_of_identity_is_one() {
        let n = 3;
        let mut m = vec![vec![Jet2::zero(2); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Jet2::constant(2, r(1, 1));
        }
        assert_eq!(det_division_free(&m), Jet2::constant(2, r(1, 1)));
    }

    #[test]
    fn one_by_one_bernoulli_determinant() {
        // 1 - exp(zeta)/2 - exp(t1 + zeta)/2, variables (t1, zeta)
        let one = Jet2::constant(2, r(1, 1));
        let loop0 = Jet2::exp_linear(r(1, 2), &[r(0, 1), r(1, 1)]);
        let loop1 = Jet2::exp_linear(r(1, 2), &[r(1, 1), r(1, 1)]);
        let entry = one.sub(&loop0).sub(&loop1);
        let det = det_division_free(&[vec![entry]]);
        assert!(det.constant_coeff().is_zero());
        assert_eq!(det.linear_coeff(0), &r(-1, 2)); // t1
        assert_eq!(det.linear_coeff(1), &r(-1, 1)); // zeta
    }

    #[test]
    fn repeated_rows_give_the_zero_jet() {
        let row = vec![
            Jet2::exp_linear(r(1, 3), &[r(1, 1)]),
            Jet2::exp_linear(r(2, 3), &[r(2, 1)]),
        ];
        let m = vec![row.clone(), row];
        assert_eq!(det_division_free(&m), Jet2::zero(1));
    }

    proptest::proptest! {
        #[test]
        fn ring_laws_on_random_jets(
            raw in proptest::collection::vec((-6i64..=6, 1i64..=4), 18),
        ) {
            let coeff = |chunk: &[(i64, i64)]| -> Vec<Rational> {
                chunk.iter().map(|&(n, d)| r(n, d)).collect()
            };
            let jets: Vec<Jet2<Rational>> = raw
                .chunks(6)
                .map(|chunk| {
                    let c = coeff(chunk);
                    // span constants, linears, and quadratics
                    Jet2::exp_linear(c[0].clone(), &[c[1].clone(), c[2].clone()])
                        .mul(&Jet2::exp_linear(c[3].clone(), &[c[4].clone(), c[5].clone()]))
                        .add(&Jet2::constant(2, c[0].clone() - c[3].clone()))
                })
                .collect();
            let (a, b, c) = (&jets[0], &jets[1], &jets[2]);
            proptest::prop_assert_eq!(a.mul(b), b.mul(a));
            proptest::prop_assert_eq!(a.add(b), b.add(a));
            proptest::prop_assert_eq!(a.mul(&b.mul(c)), a.mul(b).mul(c));
            proptest::prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
            proptest::prop_assert_eq!(a.sub(a), Jet2::zero(2));
        }
    }

    #[test]
    fn ring_laws_on_sampled_jets() {
        let samples = [
            jet(&[(0, r(1, 2)), (1, r(-1, 3)), (3, r(2, 1))], 2),
            jet(&[(0, r(-2, 1)), (2, r(1, 1)), (4, r(1, 5))], 2),
            jet(&[(1, r(3, 7)), (5, r(-1, 2))], 2),
            Jet2::exp_linear(r(2, 3), &[r(1, 1), r(-2, 1)]),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!(a.mul(b), b.mul(a));
                assert_eq!(a.add(b), b.add(a));
                for c in &samples {
                    assert_eq!(a.mul(&b.mul(c)), a.mul(b).mul(c));
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                }
            }
        }
    }

    fn bernoulli_component() -> Component<Rational> {
        Component::from_edges(
            1,
            1,
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
    fn bernoulli_derivative_bundle() {
        let d = char_derivatives(&bernoulli_component()).unwrap();
        assert_eq!(d.f_z, r(-1, 1));
        assert_eq!(d.f_x, vec![r(-1, 2)]);
        assert_eq!(d.f_xx_plus_fx, vec![r(-1, 2)]);
        assert_eq!(d.f_zz_plus_fz, r(-1, 1));
        // f_{x１z} = (k,1)(D2) - (k,1)(D1) = 0 - 1/2
        assert_eq!(d.f_xz, vec![r(-1, 2)]);
    }

    #[test]
    fn block_chain_f_z_is_minus_one() {
        let comp = Component::from_edges(
            2,
            2,
            vec![
                Transition {
                    from: 0,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(0, 1), r(0, 1)],
                },
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 2),
                    out: vec![r(0, 1), r(0, 1)],
                },
                Transition {
                    from: 1,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(1, 1), r(0, 1)],
                },
                Transition {
                    from: 1,
                    to: 1,
                    prob: r(1, 2),
                    out: vec![r(0, 1), r(1, 1)],
                },
            ],
        )
        .unwrap();
        let d = char_derivatives(&comp).unwrap();
        // 1(D1) = 1/4 + 1/4 + 2/4 = 1
        assert_eq!(d.f_z, r(-1, 1));
    }

    #[test]
    fn constant_coefficient_vanishes_for_stochastic_components() {
        // f(1, ..., 1, 1) = 0 because rows of A sum to one
        let comp = Component::from_edges(
            3,
            1,
            vec![
                Transition {
                    from: 0,
                    to: 1,
                    prob: r(1, 3),
                    out: vec![r(1, 1)],
                },
                Transition {
                    from: 0,
                    to: 2,
                    prob: r(2, 3),
                    out: vec![r(0, 1)],
                },
                Transition {
                    from: 1,
                    to: 2,
                    prob: r(1, 1),
                    out: vec![r(2, 1)],
                },
                Transition {
                    from: 2,
                    to: 0,
                    prob: r(1, 2),
                    out: vec![r(0, 1)],
                },
                Transition {
                    from: 2,
                    to: 2,
                    prob: r(1, 2),
                    out: vec![r(1, 1)],
                },
            ],
        )
        .unwrap();
        assert!(char_derivatives(&comp).is_ok());
    }
}
