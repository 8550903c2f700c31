//! `gen_F`, F-torsion classes, relative projectives/injectives and
//! preenvelopes over a catalog of indecomposables.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::analysis::{check_cap, hom_basis, hom_dim, left_minimal_version, tau, Catalog, Limits};
use crate::error::{Error, Result};
use crate::linalg::{Field, Span};
use crate::module::{cokernel, direct_sum, injective, DirectSum, ModuleMap, Representation};
use crate::relative::{FContext, FExactTriple, HomSpace};

/// `Z ∈ gen_F(M)`: the canonical map `M^d -> Z` on a Hom basis is F-epic.
pub fn gen_f_contains(ctx: &FContext, m: &Representation, z: &Representation) -> Result<bool> {
    if z.is_zero() {
        return Ok(true);
    }
    let maps = hom_basis(m, z)?;
    for x in ctx.summands() {
        let target = HomSpace::new(x, z)?;
        if target.dim() == 0 {
            continue;
        }
        let mut span = Span::new(ctx.field(), target.zero().flatten().len());
        for h in hom_basis(x, m)? {
            for f in &maps {
                span.insert(&h.then(f).flatten());
            }
        }
        if span.dim() < target.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points of `P^{d-1}(F_p)`: nonzero vectors with leading coordinate 1.
pub fn projective_points(field: Field, d: usize) -> Vec<Vec<u32>> {
    let p = field.p();
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let count = (p as u64).pow(free as u32);
        for mut n in 0..count {
            let mut v = vec![0; d];
            v[lead] = 1;
            for c in v.iter_mut().skip(lead + 1) {
                *c = (n % p as u64) as u32;
                n /= p as u64;
            }
            out.push(v);
        }
    }
    out
}

/// Catalog indices of the summands of `m`, without multiplicities.
fn support(catalog: &Catalog, m: &Representation, lim: Limits) -> Result<Vec<usize>> {
    Ok(catalog.locate(m, lim)?.into_iter().map(|(k, _)| k).collect())
}

/// Why a subset fails to be an F-torsion class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionWitness {
    /// `outside` lies in `gen_F(⊕S)` but not in `S`.
    Quotient { outside: usize },
    /// An F-extension of `⊕c` by `⊕a` (catalog indices, with repetition)
    /// whose middle term has the summands `factors`.
    Extension { c: Vec<usize>, a: Vec<usize>, factors: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionVerdict {
    pub is_torsion: bool,
    pub quotient_closed: bool,
    /// `None` when quotient closure already failed.
    pub extension_closed: Option<bool>,
    /// Multiset pairs examined beyond indecomposable end terms.
    pub cross_checked: usize,
    /// Multiset pairs with too many classes to enumerate.
    pub cross_skipped: usize,
    /// The indecomposable layer passed but a larger pair failed.
    pub disagreement: bool,
    pub witness: Option<TorsionWitness>,
}

/// Middle terms of all classes in `Ext^1_F(C_c, C_a)` up to scalars.
#[derive(Clone, Debug)]
pub struct ExtEntry {
    pub dim: usize,
    pub middles: Vec<Vec<usize>>,
}

/// Precomputed `gen_F` and extension data over a catalog.
pub struct TorsionChecker<'a> {
    ctx: &'a FContext,
    catalog: &'a Catalog,
    /// `hom_dims[z][i] = dim Hom(X_i, C_z)`.
    hom_dims: Vec<Vec<usize>>,
    /// `gen[z][k][i]`: basis of `Hom(C_k, C_z) ∘ Hom(X_i, C_k)` in coordinates.
    gen: Vec<Vec<Vec<Vec<Vec<u32>>>>>,
    ext: OnceLock<std::result::Result<Vec<Vec<ExtEntry>>, Error>>,
    cross: Mutex<HashMap<(Vec<usize>, Vec<usize>), Option<Vec<Vec<usize>>>>>,
    /// Largest number of classes enumerated in a cross-check pair.
    pub cross_cap: usize,
}

impl<'a> TorsionChecker<'a> {
    pub fn new(ctx: &'a FContext, catalog: &'a Catalog) -> Result<Self> {
        if !std::sync::Arc::ptr_eq(ctx.algebra(), catalog.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let n = catalog.len();
        let spaces: Vec<Vec<HomSpace>> =
            catalog.entries().par_iter().map(|c| ctx.hom_spaces(c)).collect::<Result<_>>()?;
        let from_x: Vec<Vec<Vec<ModuleMap>>> = catalog
            .entries()
            .par_iter()
            .map(|c| ctx.summands().iter().map(|x| hom_basis(x, c)).collect())
            .collect::<Result<_>>()?;
        let gen = (0..n)
            .into_par_iter()
            .map(|z| {
                (0..n)
                    .map(|k| {
                        let maps = hom_basis(catalog.get(k), catalog.get(z))?;
                        Ok((0..ctx.rank())
                            .map(|i| {
                                let mut span = Span::new(ctx.field(), spaces[z][i].dim());
                                for h in &from_x[k][i] {
                                    for f in &maps {
                                        span.insert(&spaces[z][i].coords(&h.then(f)));
                                    }
                                }
                                span.basis().to_vec()
                            })
                            .collect())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let hom_dims = spaces.iter().map(|row| row.iter().map(HomSpace::dim).collect()).collect();
        Ok(TorsionChecker {
            ctx,
            catalog,
            hom_dims,
            gen,
            ext: OnceLock::new(),
            cross: Mutex::new(HashMap::new()),
            cross_cap: 32,
        })
    }

    pub fn ctx(&self) -> &'a FContext {
        self.ctx
    }

    pub fn catalog(&self) -> &'a Catalog {
        self.catalog
    }

    /// `C_z ∈ gen_F(⊕_{k ∈ s} C_k)`.
    pub fn contains(&self, s: &[usize], z: usize) -> bool {
        (0..self.ctx.rank()).all(|i| {
            let need = self.hom_dims[z][i];
            if need == 0 {
                return true;
            }
            let mut span = Span::new(self.ctx.field(), need);
            for &k in s {
                for v in &self.gen[z][k][i] {
                    span.insert(v);
                }
            }
            span.dim() == need
        })
    }

    /// Catalog indices in `gen_F(⊕S)`.
    pub fn closure(&self, s: &[usize]) -> Vec<usize> {
        (0..self.catalog.len()).filter(|&z| self.contains(s, z)).collect()
    }

    /// `gen_F(M)` within the catalog for an arbitrary module.
    pub fn closure_of(&self, m: &Representation) -> Result<Vec<usize>> {
        let s = support(self.catalog, m, self.ctx.limits())?;
        Ok(self.closure(&s))
    }

    /// Middle terms for every ordered pair `(c, a)`.
    pub fn ext_table(&self) -> Result<&Vec<Vec<ExtEntry>>> {
        self.ext
            .get_or_init(|| {
                let n = self.catalog.len();
                (0..n)
                    .into_par_iter()
                    .map(|c| (0..n).map(|a| self.ext_entry(&[c], &[a], usize::MAX)).collect())
                    .map(|row: Result<Vec<Option<ExtEntry>>>| row.map(|r| r.into_iter().map(Option::unwrap).collect()))
                    .collect()
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `None` when the number of classes exceeds `max_classes`.
    fn ext_entry(&self, c: &[usize], a: &[usize], max_classes: usize) -> Result<Option<ExtEntry>> {
        let cm = self.catalog.sum_of(c)?;
        let am = self.catalog.sum_of(a)?;
        let ext = self.ctx.ext_f(&cm, &am, 1)?;
        let field = self.ctx.field();
        check_cap(field, ext.dim, "extension classes", self.ctx.limits())?;
        let points = projective_points(field, ext.dim);
        if points.len() > max_classes {
            return Ok(None);
        }
        let mut middles = Vec::with_capacity(points.len());
        for v in &points {
            let z = crate::analysis::combine(&ModuleMap::zero(&ext.omega, &am), &ext.cocycles, v);
            let t = self.ctx.middle_term(&cm, &am, &z)?;
            middles.push(support(self.catalog, t.middle(), self.ctx.limits())?);
        }
        Ok(Some(ExtEntry { dim: ext.dim, middles }))
    }

    /// Quotient closure, extension closure on indecomposable end terms, then
    /// sums of at most two on each end.
    pub fn verdict(&self, s: &[usize]) -> Result<TorsionVerdict> {
        let member = self.membership(s);
        let mut v = TorsionVerdict {
            is_torsion: false,
            quotient_closed: true,
            extension_closed: None,
            cross_checked: 0,
            cross_skipped: 0,
            disagreement: false,
            witness: None,
        };
        if let Some(&outside) = self.closure(s).iter().find(|&&z| !member[z]) {
            v.quotient_closed = false;
            v.witness = Some(TorsionWitness::Quotient { outside });
            return Ok(v);
        }
        let table = self.ext_table()?;
        for &c in s {
            for &a in s {
                if let Some(factors) = table[c][a].middles.iter().find(|f| f.iter().any(|&k| !member[k])) {
                    v.extension_closed = Some(false);
                    v.witness = Some(TorsionWitness::Extension { c: vec![c], a: vec![a], factors: factors.clone() });
                    return Ok(v);
                }
            }
        }
        let sides = multisets(s);
        for c in &sides {
            for a in &sides {
                if c.len() == 1 && a.len() == 1 {
                    continue;
                }
                let dim: usize = c.iter().flat_map(|&x| a.iter().map(move |&y| table[x][y].dim)).sum();
                if dim == 0 {
                    continue;
                }
                match self.cross_entry(c, a)? {
                    None => v.cross_skipped += 1,
                    Some(middles) => {
                        v.cross_checked += 1;
                        if let Some(factors) = middles.iter().find(|f| f.iter().any(|&k| !member[k])) {
                            v.extension_closed = Some(false);
                            v.disagreement = true;
                            v.witness = Some(TorsionWitness::Extension {
                                c: c.clone(),
                                a: a.clone(),
                                factors: factors.clone(),
                            });
                            return Ok(v);
                        }
                    }
                }
            }
        }
        v.extension_closed = Some(true);
        v.is_torsion = true;
        Ok(v)
    }

    fn cross_entry(&self, c: &[usize], a: &[usize]) -> Result<Option<Vec<Vec<usize>>>> {
        let key = (c.to_vec(), a.to_vec());
        if let Some(hit) = self.cross.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let entry = self.ext_entry(c, a, self.cross_cap)?.map(|e| e.middles);
        self.cross.lock().expect("cache lock").insert(key, entry.clone());
        Ok(entry)
    }

    pub fn is_torsion(&self, s: &[usize]) -> Result<bool> {
        Ok(self.verdict(s)?.is_torsion)
    }

    fn membership(&self, s: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.catalog.len()];
        for &k in s {
            member[k] = true;
        }
        member
    }
}

/// Multisets of size one or two drawn from `s`, each sorted.
fn multisets(s: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = s.iter().map(|&k| vec![k]).collect();
    for (i, &x) in s.iter().enumerate() {
        for &y in &s[i..] {
            out.push(if x <= y { vec![x, y] } else { vec![y, x] });
        }
    }
    out
}

/// `(P(F), I(F))` as sorted catalog indices: `add(X)` and `add(τX) ⊕ inj`.
pub fn f_proj_inj(ctx: &FContext, catalog: &Catalog) -> Result<(Vec<usize>, Vec<usize>)> {
    let lim = ctx.limits();
    let mut proj = Vec::new();
    for x in ctx.summands() {
        let k = catalog
            .index_of(x)?
            .ok_or_else(|| Error::CatalogEntryMissing(format!("summand with dims {:?}", x.dims())))?;
        proj.push(k);
    }
    let mut inj = Vec::new();
    for x in ctx.summands() {
        inj.extend(support(catalog, &tau(x)?, lim)?);
    }
    for v in 0..ctx.algebra().vertex_count() {
        inj.extend(support(catalog, &injective(ctx.algebra(), v), lim)?);
    }
    proj.sort_unstable();
    inj.sort_unstable();
    inj.dedup();
    Ok((proj, inj))
}

/// `I(F) ⊆ S`; only meaningful over a complete catalog.
pub fn is_f_preenveloping(ctx: &FContext, catalog: &Catalog, s: &[usize]) -> Result<bool> {
    if !catalog.complete {
        return Err(Error::IncompleteCatalog);
    }
    let (_, inj) = f_proj_inj(ctx, catalog)?;
    Ok(inj.iter().all(|k| s.contains(k)))
}

/// F-projectivity and F-injectivity tested on the sequences given by a
/// basis of every `Ext^1_F(C, A)` over the catalog.
pub fn definitional_proj_inj(ctx: &FContext, catalog: &Catalog) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = catalog.len();
    let triples: Vec<FExactTriple> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (c, a) = (catalog.get(k / n), catalog.get(k % n));
            let ext = ctx.ext_f(c, a, 1)?;
            ext.cocycles.iter().map(|z| ctx.middle_term(c, a, z)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut proj = Vec::new();
    let mut inj = Vec::new();
    for (k, y) in catalog.entries().iter().enumerate() {
        let mut is_proj = true;
        let mut is_inj = true;
        for t in &triples {
            // Hom(Y, B) -> Hom(Y, C) onto
            if is_proj && !restriction_onto(y, &t.g, Side::Post)? {
                is_proj = false;
            }
            // Hom(B, Y) -> Hom(A, Y) onto
            if is_inj && !restriction_onto(y, &t.f, Side::Pre)? {
                is_inj = false;
            }
        }
        if is_proj {
            proj.push(k);
        }
        if is_inj {
            inj.push(k);
        }
    }
    Ok((proj, inj))
}

enum Side {
    Post,
    Pre,
}

fn restriction_onto(y: &Representation, g: &ModuleMap, side: Side) -> Result<bool> {
    let f = y.field();
    let (maps, target, len) = match side {
        Side::Post => {
            let maps: Vec<ModuleMap> = hom_basis(y, g.source())?.iter().map(|h| h.then(g)).collect();
            (maps, hom_dim(y, g.target())?, ModuleMap::zero(y, g.target()).flatten().len())
        }
        Side::Pre => {
            let maps: Vec<ModuleMap> = hom_basis(g.target(), y)?.iter().map(|h| g.then(h)).collect();
            (maps, hom_dim(g.source(), y)?, ModuleMap::zero(g.source(), y).flatten().len())
        }
    };
    let mut span = Span::new(f, len);
    for m in &maps {
        span.insert(&m.flatten());
    }
    Ok(span.dim() == target)
}

/// The universal map `N -> ⊕_j T_j^{dim Hom(N, T_j)}`, optionally made left minimal.
pub fn left_approximation(
    n: &Representation,
    targets: &[Representation],
    minimal: bool,
    lim: Limits,
) -> Result<ModuleMap> {
    let mut summands = Vec::new();
    let mut parts = Vec::new();
    for t in targets {
        for h in hom_basis(n, t)? {
            summands.push(t.clone());
            parts.push(h);
        }
    }
    let ds = DirectSum::new(n.algebra(), &summands)?;
    let f = ds.into_components(n, &parts);
    if minimal {
        Ok(left_minimal_version(&f, lim)?.0)
    } else {
        Ok(f)
    }
}

/// An F-exact `0 -> N -> Z -> C -> 0` with `N -> Z` a preenvelope in `class`.
#[derive(Clone, Debug)]
pub struct Preenvelope {
    pub triple: FExactTriple,
    /// Catalog indices of `gen_F(⊕T)`.
    pub class: Vec<usize>,
}

/// Pushout of an F-cover of `N` along a left `add(T)`-approximation.
pub fn construct_preenvelope(checker: &TorsionChecker, n: &Representation, t: &[usize]) -> Result<Preenvelope> {
    let ctx = checker.ctx();
    let catalog = checker.catalog();
    let lim = ctx.limits();
    let class = checker.closure(t);
    let (_, inj) = f_proj_inj(ctx, catalog)?;
    if let Some(k) = inj.iter().find(|k| !class.contains(k)) {
        return Err(Error::HypothesisFailed(format!("F-injective catalog entry {k} is not in gen_F(T)")));
    }
    let cover = ctx.f_cover(n)?;
    let targets: Vec<Representation> = t.iter().map(|&k| catalog.get(k).clone()).collect();
    let w = left_approximation(&cover.sum.module, &targets, true, lim)?;
    if ctx.is_f_monic(&w)?.is_none() {
        return Err(Error::HypothesisFailed("approximation of the F-cover is not F-monic".into()));
    }
    let alg = ctx.algebra();
    let ds = DirectSum::new(alg, &[w.target().clone(), n.clone()])?;
    let u = ds.into_components(&cover.sum.module, &[w.clone(), cover.map.scale(ctx.field().neg(1))]);
    let (_, q) = cokernel(&u)?;
    let w2 = ds.inclusion(1).then(&q);
    let triple = ctx.is_f_monic(&w2)?.ok_or_else(|| Error::HypothesisFailed("pushout map is not F-monic".into()))?;
    let z = triple.middle();
    if support(catalog, z, lim)?.iter().any(|k| !class.contains(k)) {
        return Err(Error::HypothesisFailed("pushout is not in gen_F(T)".into()));
    }
    for &y in &class {
        let y = catalog.get(y);
        if !restriction_onto(y, &w2, Side::Pre)? {
            return Err(Error::HypothesisFailed("pushout map is not a preenvelope".into()));
        }
    }
    Ok(Preenvelope { triple, class })
}

/// `⊕_{k ∈ s} C_k` (zero for an empty set).
pub fn subset_module(catalog: &Catalog, s: &[usize]) -> Result<Representation> {
    if s.is_empty() {
        return Ok(Representation::zero(catalog.algebra()));
    }
    direct_sum(catalog.algebra(), &s.iter().map(|&k| catalog.get(k).clone()).collect::<Vec<_>>())
}
