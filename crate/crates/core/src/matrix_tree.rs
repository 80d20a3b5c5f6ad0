//! Weighted Laplacian and the All-Minors Matrix-Tree identity: minors of the
//! Laplacian equal signed, weighted sums over rooted spanning forests. Both
//! sides are computed independently, which makes the module its own verifier.

use crate::error::Result;
use crate::graph::{forests, Component};
use crate::linalg::det_scalar;
use crate::scalar::Scalar;

/// Laplacian of the component under its edge weights: `-l[i][j]` is the total
/// weight of the edges `i -> j` for `i != j`, diagonals make rows sum to
/// zero. Loops cancel and do not affect the matrix.
pub fn laplacian<S: Scalar>(comp: &Component<S>) -> Vec<Vec<S>> {
    let n = comp.vertex_count();
    let mut l = vec![vec![S::zero(); n]; n];
    for e in comp.edges() {
        if e.from == e.to {
            continue;
        }
        l[e.from][e.to] = l[e.from][e.to].clone() - e.prob.clone();
        l[e.from][e.from] = l[e.from][e.from].clone() + e.prob.clone();
    }
    l
}

/// The minor `det L_{A,B}`: rows with index in `A` and columns with index in
/// `B` deleted (0-based). Zero when `|A| != |B|`, one when everything is
/// deleted.
pub fn laplacian_minor<S: Scalar>(
    l: &[Vec<S>],
    rows_deleted: &[usize],
    cols_deleted: &[usize],
) -> S {
    let n = l.len();
    let keep =
        |deleted: &[usize]| -> Vec<usize> { (0..n).filter(|v| !deleted.contains(v)).collect() };
    let rows = keep(rows_deleted);
    let cols = keep(cols_deleted);
    if rows.len() != cols.len() {
        return S::zero();
    }
    let reduced: Vec<Vec<S>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| l[i][j].clone()).collect())
        .collect();
    det_scalar(&reduced)
}

/// The forest side of the All-Minors identity:
/// `(-1)^(sum of A + sum of B) * sum over F in F_{A,B} of weight(F) sign(F)`,
/// with 1-based vertex indices in the component's canonical order, so that
/// `forest_sum(comp, A, B) == laplacian_minor(laplacian(comp), A, B)`.
pub fn forest_sum<S: Scalar>(
    comp: &Component<S>,
    roots: &[usize],
    markers: &[usize],
    cap: u64,
) -> Result<S> {
    let exponent: usize = roots.iter().chain(markers).map(|&v| v + 1).sum();
    let mut sum = S::zero();
    for forest in forests(comp, roots, markers, cap)? {
        let term = if forest.sign > 0 {
            forest.weight
        } else {
            -forest.weight
        };
        sum = sum + term;
    }
    if exponent % 2 == 1 {
        sum = -sum;
    }
    Ok(sum)
}
