//! Small algebras and generators used throughout the tests and the CLI
//! fixtures.

use std::sync::Arc;

use crate::analysis::{enumerate_indecomposables, Catalog, Limits};
use crate::error::Result;
use crate::linalg::{Field, Matrix};
use crate::module::{projective, quotient, simple, Representation};
use crate::quiver::{BoundAlgebra, Path, Quiver, Relation, RelationIdeal};
use crate::relative::FContext;

/// `1 -> 2`.
pub fn a2(field: Field) -> Result<Arc<BoundAlgebra>> {
    let q = Quiver::new(&["1", "2"], &[("alpha", "1", "2")])?;
    Ok(Arc::new(BoundAlgebra::new(field, q, RelationIdeal { nilpotency: 2, generators: vec![] })?))
}

/// `1 -> 2 -> 3` with radical square zero.
pub fn ejem4(field: Field) -> Result<Arc<BoundAlgebra>> {
    let q = Quiver::new(&["1", "2", "3"], &[("alpha", "1", "2"), ("beta", "2", "3")])?;
    Ok(Arc::new(BoundAlgebra::new(field, q, RelationIdeal { nilpotency: 2, generators: vec![] })?))
}

/// `alpha: 1 -> 2` and a loop `beta` at 2 with `beta^2 = 0`.
pub fn nofadm(field: Field) -> Result<Arc<BoundAlgebra>> {
    let q = Quiver::new(&["1", "2"], &[("alpha", "1", "2"), ("beta", "2", "2")])?;
    let rel = Relation { terms: vec![(1, Path::parse(&q, "beta beta")?)] };
    Ok(Arc::new(BoundAlgebra::new(field, q, RelationIdeal { nilpotency: 3, generators: vec![rel] })?))
}

pub fn projectives(alg: &Arc<BoundAlgebra>) -> Vec<Representation> {
    (0..alg.vertex_count()).map(|v| projective(alg, v)).collect()
}

/// `K = P(1) / S(2)` over [`nofadm`].
pub fn k_module(alg: &Arc<BoundAlgebra>) -> Result<Representation> {
    let f = alg.field();
    let soc = Matrix::from_columns(f, 2, &[vec![0, 1]]);
    Ok(quotient(&projective(alg, 0), &[Matrix::zeros(f, 1, 0), soc])?.0)
}

/// Dimension bounds covering every indecomposable of [`a2`], [`ejem4`] and
/// [`nofadm`] respectively.
pub const A2_BOUND: [usize; 2] = [1, 1];
pub const EJEM4_BOUND: [usize; 3] = [1, 1, 1];
pub const NOFADM_BOUND: [usize; 2] = [2, 2];

pub fn catalog(alg: &Arc<BoundAlgebra>, bound: &[usize], lim: Limits) -> Result<Catalog> {
    enumerate_indecomposables(alg, bound, lim)
}

/// `X = Λ`.
pub fn regular_context(alg: &Arc<BoundAlgebra>, lim: Limits) -> Result<FContext> {
    FContext::build(alg, projectives(alg), lim)
}

/// `X = Λ ⊕ S(2)` over [`ejem4`].
pub fn ejem4_context(alg: &Arc<BoundAlgebra>, lim: Limits) -> Result<FContext> {
    let mut xs = projectives(alg);
    xs.push(simple(alg, 1));
    FContext::build(alg, xs, lim)
}

/// `X = Λ ⊕ K` over [`nofadm`].
pub fn nofadm_context(alg: &Arc<BoundAlgebra>, lim: Limits) -> Result<FContext> {
    let mut xs = projectives(alg);
    xs.push(k_module(alg)?);
    FContext::build(alg, xs, lim)
}
