//! The Kronecker algebra `1 ⇉ 2` with its preinjectives `J_n`, regular
//! modules `R_{p,n}` and the finite checks around `gen_F(R_{(1:1),1})`.

use std::sync::Arc;

use crate::analysis::{hom_basis, hom_dim, Limits};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::module::{kernel, projective, DirectSum, ModuleMap, Representation};
use crate::quiver::{BoundAlgebra, Quiver, RelationIdeal};
use crate::relative::FContext;
use crate::torsion::gen_f_contains;

pub const DISCLAIMER: &str = "The claim that gen_F(R_{(1,1),1}) is not a preenveloping class quantifies over the \
infinite family J_n and is not decided by this tool; only its finite ingredients are checked.";

pub fn algebra(field: Field) -> Result<Arc<BoundAlgebra>> {
    let q = Quiver::new(&["1", "2"], &[("alpha", "1", "2"), ("beta", "1", "2")])?;
    Ok(Arc::new(BoundAlgebra::new(field, q, RelationIdeal { nilpotency: 2, generators: vec![] })?))
}

fn check_kronecker(alg: &BoundAlgebra) -> Result<()> {
    let q = alg.quiver();
    let ok =
        q.vertex_count() == 2 && q.arrows().len() == 2 && q.arrows().iter().all(|a| a.source == 0 && a.target == 1);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidQuiver("expected two arrows 1 -> 2".into()))
    }
}

/// `J_n = (k^{n+1} ⇉ k^n)` with maps `(1, 0)` and `(0, 1)`.
pub fn j_module(alg: &Arc<BoundAlgebra>, n: usize) -> Result<Representation> {
    check_kronecker(alg)?;
    let f = alg.field();
    let a = Matrix::from_fn(f, n, n + 1, |r, c| (r == c) as u32);
    let b = Matrix::from_fn(f, n, n + 1, |r, c| (c == r + 1) as u32);
    Representation::new(alg, vec![n + 1, n], vec![a, b])
}

/// `R_{(a:b),n}`: `(1, J_n(b/a))` for `a ≠ 0`, otherwise `(J_n(0), 1)`.
pub fn r_module(alg: &Arc<BoundAlgebra>, point: (u32, u32), n: usize) -> Result<Representation> {
    check_kronecker(alg)?;
    let f = alg.field();
    let (a, b) = (point.0 % f.p(), point.1 % f.p());
    if a == 0 && b == 0 {
        return Err(Error::InvalidRepresentation("(0:0) is not a point of P^1".into()));
    }
    let jordan = |ev: u32| Matrix::from_fn(f, n, n, |r, c| if r == c { ev } else { (c == r + 1) as u32 });
    let (ma, mb) =
        if a != 0 { (Matrix::identity(f, n), jordan(f.mul(b, f.inv(a)))) } else { (jordan(0), Matrix::identity(f, n)) };
    Representation::new(alg, vec![n, n], vec![ma, mb])
}

/// `X = P(1) ⊕ P(2) ⊕ R_{(1:1),1}`.
pub fn context(alg: &Arc<BoundAlgebra>, lim: Limits) -> Result<FContext> {
    let xs = vec![projective(alg, 0), projective(alg, 1), r_module(alg, (1, 1), 1)?];
    FContext::build(alg, xs, lim)
}

/// `R^{n+1} -> J_n` whose components are a Hom basis padded by zeros,
/// with its kernel inclusion.
pub fn padded_sequence(alg: &Arc<BoundAlgebra>, n: usize) -> Result<(ModuleMap, ModuleMap)> {
    let r = r_module(alg, (1, 1), 1)?;
    let j = j_module(alg, n)?;
    let basis = hom_basis(&r, &j)?;
    let ds = DirectSum::new(alg, &vec![r.clone(); n + 1])?;
    let parts: Vec<ModuleMap> =
        (0..=n).map(|k| basis.get(k).cloned().unwrap_or_else(|| ModuleMap::zero(&r, &j))).collect();
    let g = ds.from_components(&j, &parts);
    let (_, f) = kernel(&g)?;
    Ok((f, g))
}

/// `n + 1` pairwise distinct points of `P^1(F_p)`, starting with `(1:1)`.
pub fn distinct_points(field: Field, count: usize) -> Result<Vec<(u32, u32)>> {
    let p = field.p();
    let mut pts = vec![(1, 1), (1, 0), (0, 1)];
    pts.extend((2..p).map(|b| (1, b)));
    if count > pts.len() {
        return Err(Error::CapExceeded { what: "points of P^1".into(), needed: count as u128, cap: pts.len() as u128 });
    }
    pts.truncate(count);
    Ok(pts)
}

/// `⊕_i R_{p_i,1} -> J_n` over distinct points, with its kernel inclusion.
pub fn distinct_points_sequence(alg: &Arc<BoundAlgebra>, n: usize) -> Result<(ModuleMap, ModuleMap)> {
    let j = j_module(alg, n)?;
    let mut rs = Vec::new();
    let mut parts = Vec::new();
    for p in distinct_points(alg.field(), n + 1)? {
        let r = r_module(alg, p, 1)?;
        let h = hom_basis(&r, &j)?.into_iter().next().expect("Hom(R_p, J_n) is nonzero");
        rs.push(r);
        parts.push(h);
    }
    let ds = DirectSum::new(alg, &rs)?;
    let g = ds.from_components(&j, &parts);
    let (_, f) = kernel(&g)?;
    Ok((f, g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShardRow {
    pub n: usize,
    pub hom_r_j: usize,
    /// Image dimension of the padded map `R^{n+1} -> J_n`.
    pub padded_image_dim: usize,
    pub padded_f_exact: bool,
    pub gen_f_contains_j: bool,
    pub distinct_points_f_exact: bool,
    pub distinct_points_kernel_is_s2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shard {
    pub hom_r10_r11: usize,
    pub gen_f_contains_r10: bool,
    pub rows: Vec<ShardRow>,
    pub disclaimer: &'static str,
}

/// Finite checks for `n = 0..=max_n` (`J_0 = S(1)`).
pub fn shard(ctx: &FContext, max_n: usize) -> Result<Shard> {
    let alg = ctx.algebra();
    let r11 = r_module(alg, (1, 1), 1)?;
    let r10 = r_module(alg, (1, 0), 1)?;
    let s2 = crate::module::simple(alg, 1);
    let mut rows = Vec::new();
    for n in 0..=max_n {
        let j = j_module(alg, n)?;
        let (f, g) = padded_sequence(alg, n)?;
        let (pf, pg) = distinct_points_sequence(alg, n)?;
        rows.push(ShardRow {
            n,
            hom_r_j: hom_dim(&r11, &j)?,
            padded_image_dim: g.total_matrix().rank(),
            padded_f_exact: ctx.is_f_exact(&f, &g)?.is_some(),
            gen_f_contains_j: gen_f_contains(ctx, &r11, &j)?,
            distinct_points_f_exact: ctx.is_f_exact(&pf, &pg)?.is_some(),
            distinct_points_kernel_is_s2: crate::analysis::is_isomorphic(pf.source(), &s2, ctx.limits())?.is_some(),
        });
    }
    Ok(Shard {
        hom_r10_r11: hom_dim(&r10, &r11)?,
        gen_f_contains_r10: gen_f_contains(ctx, &r11, &r10)?,
        rows,
        disclaimer: DISCLAIMER,
    })
}
