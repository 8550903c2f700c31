//! Hom spaces, local endomorphism rings, decomposition, the radical of the
//! module category, projective presentations, the AR translate and Ext.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::poly::{self, Primary};
use crate::linalg::{Field, Matrix, Span};
use crate::module::{
    direct_sum, kernel, nakayama_on_projectives, projective, submodule, DirectSum, ModuleMap, Representation,
};
use crate::quiver::BoundAlgebra;

/// Resource bounds for the searches that may fall back to enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of field vectors a brute-force search may visit.
    pub enum_cap: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enum_cap: 1_000_000 }
    }
}

const RANDOM_TRIES: usize = 48;

/// Basis of `Hom(M, N)`, in the echelon order of the intertwiner system.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<Vec<ModuleMap>> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let f = m.field();
    let verts = m.dims().len();
    let mut off = vec![0; verts + 1];
    for v in 0..verts {
        off[v + 1] = off[v] + n.dim_at(v) * m.dim_at(v);
    }
    let unknowns = off[verts];
    let arrows = m.algebra().quiver().arrows();
    let eq_count: usize = arrows.iter().map(|a| n.dim_at(a.target) * m.dim_at(a.source)).sum();
    let mut sys = Matrix::zeros(f, eq_count, unknowns);
    let mut row = 0;
    for (ai, a) in arrows.iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (m.arrow_map(ai), n.arrow_map(ai));
        for r in 0..n.dim_at(t) {
            for c in 0..m.dim_at(s) {
                // (f_t M(a))[r,c] - (N(a) f_s)[r,c]
                for k in 0..m.dim_at(t) {
                    let x = ma.get(k, c);
                    if x != 0 {
                        let idx = off[t] + r * m.dim_at(t) + k;
                        sys.set(row, idx, f.add(sys.get(row, idx), x));
                    }
                }
                for k in 0..n.dim_at(s) {
                    let x = na.get(r, k);
                    if x != 0 {
                        let idx = off[s] + k * m.dim_at(s) + c;
                        sys.set(row, idx, f.sub(sys.get(row, idx), x));
                    }
                }
                row += 1;
            }
        }
    }
    Ok(sys.kernel_basis().iter().map(|v| ModuleMap::from_flat(m, n, v)).collect())
}

pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

/// `Σ c_k b_k`; `basis` must be nonempty or `zero` is returned.
pub fn combine(zero: &ModuleMap, basis: &[ModuleMap], coeffs: &[u32]) -> ModuleMap {
    let mut acc = zero.clone();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Rank of a family of maps with common ends.
pub fn span_rank(maps: &[ModuleMap]) -> usize {
    let Some(first) = maps.first() else { return 0 };
    let mut s = Span::new(first.source().field(), first.flatten().len());
    maps.iter().filter(|g| s.insert(&g.flatten())).count()
}

/// A linearly independent subfamily spanning the same space.
pub fn independent(maps: &[ModuleMap]) -> Vec<ModuleMap> {
    let Some(first) = maps.first() else { return Vec::new() };
    let mut s = Span::new(first.source().field(), first.flatten().len());
    maps.iter().filter(|g| s.insert(&g.flatten())).cloned().collect()
}

fn eval_poly(p: &[u32], x: &ModuleMap) -> ModuleMap {
    let id = ModuleMap::identity(x.source());
    let mut acc = ModuleMap::zero(x.source(), x.source());
    for &c in p.iter().rev() {
        acc = x.then(&acc).add(&id.scale(c));
    }
    acc
}

fn charpoly(x: &ModuleMap) -> Vec<u32> {
    let f = x.source().field();
    x.vertex_maps().iter().fold(vec![1], |acc, m| poly::mul(f, &acc, &m.charpoly()))
}

enum Element {
    /// Characteristic polynomial is a power of this irreducible.
    Primary(Vec<u32>),
    /// Neither nilpotent nor invertible.
    Splitting(ModuleMap),
}

fn classify(x: &ModuleMap) -> Element {
    match poly::primary(x.source().field(), &charpoly(x)) {
        Primary::Power(g) => Element::Primary(g),
        Primary::Split(u) => Element::Splitting(eval_poly(&u, x)),
    }
}

fn random_combination(zero: &ModuleMap, basis: &[ModuleMap], rng: &mut StdRng) -> ModuleMap {
    let f = zero.source().field();
    let coeffs: Vec<u32> = basis.iter().map(|_| f.random(rng)).collect();
    combine(zero, basis, &coeffs)
}

pub(crate) fn check_cap(field: Field, dim: usize, what: &str, lim: Limits) -> Result<u128> {
    let needed = (field.p() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if needed > lim.enum_cap {
        return Err(Error::CapExceeded { what: what.to_string(), needed, cap: lim.enum_cap });
    }
    Ok(needed)
}

/// Every element of the span of `basis`, in lexicographic coefficient order.
fn for_each_element(
    zero: &ModuleMap,
    basis: &[ModuleMap],
    what: &str,
    lim: Limits,
    mut visit: impl FnMut(ModuleMap) -> bool,
) -> Result<()> {
    let f = zero.source().field();
    let total = check_cap(f, basis.len(), what, lim)?;
    let p = f.p() as u128;
    let mut coeffs = vec![0u32; basis.len()];
    for idx in 0..total {
        let mut r = idx;
        for c in coeffs.iter_mut() {
            *c = (r % p) as u32;
            r /= p;
        }
        if !visit(combine(zero, basis, &coeffs)) {
            break;
        }
    }
    Ok(())
}

/// Closure of `gens` under left and right multiplication by `ring`.
fn two_sided_ideal(gens: &[ModuleMap], ring: &[ModuleMap]) -> Vec<ModuleMap> {
    let Some(first) = gens.first() else { return Vec::new() };
    let mut span = Span::new(first.source().field(), first.flatten().len());
    let mut out = Vec::new();
    let mut queue: Vec<ModuleMap> = gens.to_vec();
    while let Some(g) = queue.pop() {
        if !span.insert(&g.flatten()) {
            continue;
        }
        for b in ring {
            queue.push(g.then(b));
            queue.push(b.then(&g));
        }
        out.push(g);
    }
    out
}

/// Whether a one-sided ideal (given by a basis) is nilpotent.
pub fn ideal_is_nilpotent(ideal: &[ModuleMap]) -> bool {
    let mut power = independent(ideal);
    let mut last = usize::MAX;
    while !power.is_empty() {
        if power.len() >= last {
            return false;
        }
        last = power.len();
        let products: Vec<ModuleMap> = power.iter().flat_map(|p| ideal.iter().map(move |i| i.then(p))).collect();
        power = independent(&products);
        power.retain(|g| !g.is_zero());
    }
    true
}

/// Some element of the span that is not nilpotent, if any.
fn find_non_nilpotent(zero: &ModuleMap, basis: &[ModuleMap], lim: Limits) -> Result<Option<ModuleMap>> {
    for b in basis {
        if !b.is_nilpotent() {
            return Ok(Some(b.clone()));
        }
    }
    for a in basis {
        for b in basis {
            let ab = b.then(a);
            if !ab.is_nilpotent() {
                return Ok(Some(ab));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x2f11);
    for _ in 0..RANDOM_TRIES {
        let x = random_combination(zero, basis, &mut rng);
        if !x.is_nilpotent() {
            return Ok(Some(x));
        }
    }
    let mut found = None;
    for_each_element(zero, basis, "elements of an ideal", lim, |x| {
        if x.is_nilpotent() {
            true
        } else {
            found = Some(x);
            false
        }
    })?;
    Ok(found)
}

/// Outcome of the local-ring test on `End(M)`.
#[derive(Clone, Debug)]
pub enum Locality {
    /// `End(M)` is local; the basis spans its Jacobson radical.
    Local { radical: Vec<ModuleMap> },
    /// An endomorphism that is neither nilpotent nor invertible.
    Splits(ModuleMap),
}

/// Decides whether `End(M)` is local. Exact: nilpotent parts of the basis
/// generate an ideal `I`; if `I` is nilpotent and `End(M)/I` is a field
/// then `I` is the radical, otherwise some element splits `M`.
pub fn end_locality(m: &Representation, lim: Limits) -> Result<Locality> {
    assert!(!m.is_zero(), "locality of the zero module");
    let basis = hom_basis(m, m)?;
    let zero = ModuleMap::zero(m, m);
    let id = ModuleMap::identity(m);
    let f = m.field();
    let mut gens = Vec::new();
    for c in &basis {
        match classify(c) {
            Element::Splitting(x) => return Ok(Locality::Splits(x)),
            Element::Primary(g) => gens.push(eval_poly(&g, c)),
        }
    }
    let mut ideal = two_sided_ideal(&gens, &basis);
    if ideal.len() + 1 == basis.len() && ideal_is_nilpotent(&ideal) {
        // End(M)/I is the prime field
        return Ok(Locality::Local { radical: ideal });
    }
    let mut rng = StdRng::seed_from_u64(0x10ca1);
    let mut candidates = basis.clone();
    for _ in 0..RANDOM_TRIES {
        let c = random_combination(&zero, &basis, &mut rng);
        match classify(&c) {
            Element::Splitting(x) => return Ok(Locality::Splits(x)),
            Element::Primary(_) => candidates.push(c),
        }
    }
    'grow: loop {
        if !ideal_is_nilpotent(&ideal) {
            break 'grow;
        }
        let k = basis.len() - ideal.len();
        if k == 0 {
            // the identity lies in a nilpotent ideal only for M = 0
            unreachable!("nilpotent ideal containing the identity");
        }
        let mut span = Span::new(f, zero.flatten().len());
        for g in &ideal {
            span.insert(&g.flatten());
        }
        for c in &candidates {
            // minimal polynomial of c modulo the ideal
            let mut powers = vec![id.clone()];
            let mut quotient = span.clone();
            let mut coords_span = Vec::new();
            loop {
                let next = powers.last().unwrap().then(c);
                let last = powers.last().unwrap();
                if !quotient.insert(&last.flatten()) {
                    break;
                }
                coords_span.push(last.clone());
                powers.push(next);
            }
            let deg = coords_span.len();
            let top = &powers[deg];
            // solve top = Σ a_i c^i mod ideal
            let mut cols: Vec<Vec<u32>> = ideal.iter().map(|g| g.flatten()).collect();
            cols.extend(coords_span.iter().map(|g| g.flatten()));
            let sys = Matrix::from_columns(f, zero.flatten().len(), &cols);
            let sol = sys.solve(&top.flatten())?.expect("power lies in the span by construction");
            let mut minpoly: Vec<u32> = sol[ideal.len()..].iter().map(|&a| f.neg(a)).collect();
            minpoly.push(1);
            match poly::primary(f, &minpoly) {
                Primary::Split(u) => return Ok(Locality::Splits(eval_poly(&u, c))),
                Primary::Power(g) => {
                    if g.len() == minpoly.len() {
                        if deg == k {
                            return Ok(Locality::Local { radical: ideal });
                        }
                    } else {
                        let extra = eval_poly(&g, c);
                        let mut gens2 = ideal.clone();
                        gens2.push(extra);
                        ideal = two_sided_ideal(&gens2, &basis);
                        continue 'grow;
                    }
                }
            }
        }
        break 'grow;
    }
    // exhaustive fallback
    let mut split = None;
    let mut nil = Vec::new();
    for_each_element(&zero, &basis, "endomorphisms", lim, |x| match classify(&x) {
        Element::Splitting(s) => {
            split = Some(s);
            false
        }
        Element::Primary(g) => {
            if g == [0, 1] {
                nil.push(x);
            }
            true
        }
    })?;
    Ok(match split {
        Some(s) => Locality::Splits(s),
        None => Locality::Local { radical: independent(&nil) },
    })
}

pub fn is_indecomposable(m: &Representation, lim: Limits) -> Result<bool> {
    Ok(!m.is_zero() && matches!(end_locality(m, lim)?, Locality::Local { .. }))
}

/// A summand of a module with its inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Representation,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// `M = im φ^n ⊕ ker φ^n` for an endomorphism `φ`.
pub fn fitting(phi: &ModuleMap) -> Result<(Summand, Summand)> {
    let m = phi.source();
    let n = m.dims().iter().copied().max().unwrap_or(0).max(1);
    let psi = phi.pow(n as u64);
    let im_bases: Vec<Matrix> = psi.vertex_maps().iter().map(|a| a.column_space()).collect();
    let ker_bases: Vec<Matrix> = psi.vertex_maps().iter().map(|a| a.kernel_matrix()).collect();
    let (u, iu) = submodule(m, &im_bases)?;
    let (v, iv) = submodule(m, &ker_bases)?;
    let projections = split_projections(m, &[iu.clone(), iv.clone()], &[u.clone(), v.clone()])?;
    let mut it = projections.into_iter();
    let (pu, pv) = (it.next().unwrap(), it.next().unwrap());
    Ok((Summand { module: u, inclusion: iu, projection: pu }, Summand { module: v, inclusion: iv, projection: pv }))
}

/// Projections dual to inclusions that realize `M` as a direct sum.
fn split_projections(m: &Representation, incls: &[ModuleMap], parts: &[Representation]) -> Result<Vec<ModuleMap>> {
    let f = m.field();
    let verts = m.dims().len();
    let mut per_part: Vec<Vec<Matrix>> = vec![Vec::with_capacity(verts); incls.len()];
    for v in 0..verts {
        let all =
            Matrix::hstack_all(f, m.dim_at(v), &incls.iter().map(|i| i.vertex_map(v).clone()).collect::<Vec<_>>());
        let inv =
            all.invert()?.ok_or_else(|| Error::InvalidMap(format!("summands do not span the module at vertex {v}")))?;
        let mut row = 0;
        for (k, part) in parts.iter().enumerate() {
            per_part[k].push(inv.block(row, part.dim_at(v), 0, m.dim_at(v)));
            row += part.dim_at(v);
        }
    }
    parts.iter().zip(per_part).map(|(part, maps)| ModuleMap::new(m, part, maps)).collect()
}

/// An indecomposable summand with the radical of its endomorphism ring.
#[derive(Clone, Debug)]
pub struct IndecSummand {
    pub summand: Summand,
    pub radical: Vec<ModuleMap>,
}

/// Krull–Schmidt decomposition grouped into isomorphism classes.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub module: Representation,
    pub summands: Vec<IndecSummand>,
    /// Indices into `summands`, one list per isomorphism class.
    pub classes: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn rk(&self) -> usize {
        self.classes.len()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1
    }

    pub fn is_basic(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// One representative per class.
    pub fn representatives(&self) -> Vec<&Representation> {
        self.classes.iter().map(|c| &self.summands[c[0]].summand.module).collect()
    }

    pub fn basic_part(&self) -> Result<Representation> {
        let reps: Vec<Representation> = self.representatives().into_iter().cloned().collect();
        direct_sum(self.module.algebra(), &reps)
    }
}

pub fn decompose(m: &Representation, lim: Limits) -> Result<Decomposition> {
    let mut found: Vec<(Representation, ModuleMap, Vec<ModuleMap>)> = Vec::new();
    let mut stack = vec![(m.clone(), ModuleMap::identity(m))];
    while let Some((cur, incl)) = stack.pop() {
        if cur.is_zero() {
            continue;
        }
        match end_locality(&cur, lim)? {
            Locality::Local { radical } => found.push((cur, incl, radical)),
            Locality::Splits(phi) => {
                let (u, v) = fitting(&phi)?;
                // pushed in reverse so that the image part is handled first
                stack.push((v.module, v.inclusion.then(&incl)));
                stack.push((u.module, u.inclusion.then(&incl)));
            }
        }
    }
    let parts: Vec<Representation> = found.iter().map(|x| x.0.clone()).collect();
    let incls: Vec<ModuleMap> = found.iter().map(|x| x.1.clone()).collect();
    let projections = split_projections(m, &incls, &parts)?;
    let summands: Vec<IndecSummand> = found
        .into_iter()
        .zip(projections)
        .map(|((module, inclusion, radical), projection)| IndecSummand {
            summand: Summand { module, inclusion, projection },
            radical,
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        let mut placed = false;
        for c in classes.iter_mut() {
            if iso_indecomposable(&summands[c[0]].summand.module, &s.summand.module)?.is_some() {
                c.push(k);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![k]);
        }
    }
    Ok(Decomposition { module: m.clone(), summands, classes })
}

/// Isomorphism between indecomposables: some basis element of the Hom space
/// is invertible iff the modules are isomorphic, because the non-invertible
/// maps form a proper subspace.
pub fn iso_indecomposable(m: &Representation, n: &Representation) -> Result<Option<ModuleMap>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m == n {
        return Ok(Some(ModuleMap::identity(m)));
    }
    Ok(hom_basis(m, n)?.into_iter().find(|g| g.is_iso()))
}

/// An isomorphism `M -> N`, if one exists.
pub fn is_isomorphic(m: &Representation, n: &Representation, lim: Limits) -> Result<Option<ModuleMap>> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m == n {
        return Ok(Some(ModuleMap::identity(m)));
    }
    let basis = hom_basis(m, n)?;
    if let Some(g) = basis.iter().find(|g| g.is_iso()) {
        return Ok(Some(g.clone()));
    }
    let zero = ModuleMap::zero(m, n);
    let mut rng = StdRng::seed_from_u64(0x150);
    for _ in 0..RANDOM_TRIES {
        let g = random_combination(&zero, &basis, &mut rng);
        if g.is_iso() {
            return Ok(Some(g));
        }
    }
    let dm = decompose(m, lim)?;
    let dn = decompose(n, lim)?;
    iso_from_decompositions(&dm, &dn)
}

fn iso_from_decompositions(dm: &Decomposition, dn: &Decomposition) -> Result<Option<ModuleMap>> {
    if dm.summands.len() != dn.summands.len() {
        return Ok(None);
    }
    let mut used = vec![false; dn.summands.len()];
    let mut total = ModuleMap::zero(&dm.module, &dn.module);
    for s in &dm.summands {
        let mut matched = false;
        for (j, t) in dn.summands.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(phi) = iso_indecomposable(&s.summand.module, &t.summand.module)? {
                used[j] = true;
                total = total.add(&s.summand.projection.then(&phi).then(&t.summand.inclusion));
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(None);
        }
    }
    Ok(Some(total))
}

/// Basis of the radical `rad(M, N)`, assembled blockwise from decompositions.
pub fn rad_hom_basis_with(dm: &Decomposition, dn: &Decomposition) -> Result<Vec<ModuleMap>> {
    let mut out = Vec::new();
    for s in &dm.summands {
        for t in &dn.summands {
            let (a, b) = (&s.summand.module, &t.summand.module);
            let block = match iso_indecomposable(a, b)? {
                Some(phi) => s.radical.iter().map(|r| r.then(&phi)).collect(),
                None => hom_basis(a, b)?,
            };
            out.extend(block.iter().map(|g| s.summand.projection.then(g).then(&t.summand.inclusion)));
        }
    }
    Ok(out)
}

pub fn rad_hom_basis(m: &Representation, n: &Representation, lim: Limits) -> Result<Vec<ModuleMap>> {
    rad_hom_basis_with(&decompose(m, lim)?, &decompose(n, lim)?)
}

/// Basis of `rad²(M, N)`, factoring through the given indecomposables.
/// Complete when `via` contains every indecomposable (up to iso).
pub fn rad2_hom_basis(
    m: &Representation,
    n: &Representation,
    via: &[Representation],
    lim: Limits,
) -> Result<Vec<ModuleMap>> {
    let dm = decompose(m, lim)?;
    let dn = decompose(n, lim)?;
    let mut all = Vec::new();
    for z in via {
        let dz = decompose(z, lim)?;
        let first = rad_hom_basis_with(&dm, &dz)?;
        let second = rad_hom_basis_with(&dz, &dn)?;
        for a in &first {
            for b in &second {
                all.push(a.then(b));
            }
        }
    }
    all.retain(|g| !g.is_zero());
    Ok(independent(&all))
}

/// Whether `g` lies in the span of `basis` (all with the same ends).
pub fn in_span(g: &ModuleMap, basis: &[ModuleMap]) -> bool {
    let mut s = Span::new(g.source().field(), g.flatten().len());
    for b in basis {
        s.insert(&b.flatten());
    }
    s.contains(&g.flatten())
}

/// Projective cover: the vertices of the standard projectives used, their
/// sum, and the covering map.
pub fn projective_cover(m: &Representation) -> Result<(Vec<usize>, DirectSum, ModuleMap)> {
    let alg = m.algebra();
    let f = m.field();
    let q = alg.quiver();
    let mut vertices = Vec::new();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for w in 0..alg.vertex_count() {
        let incoming: Vec<Matrix> = q
            .arrows()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.target == w)
            .map(|(ai, _)| m.arrow_map(ai).clone())
            .collect();
        let rad = Matrix::hstack_all(f, m.dim_at(w), &incoming);
        for g in rad.complement().columns() {
            vertices.push(w);
            gens.push(g);
        }
    }
    let sum = DirectSum::new(alg, &vertices.iter().map(|&w| projective(alg, w)).collect::<Vec<_>>())?;
    let parts: Vec<ModuleMap> = vertices
        .iter()
        .zip(&gens)
        .zip(&sum.summands)
        .map(|((&w, g), pw)| {
            let maps = (0..alg.vertex_count())
                .map(|u| {
                    let cols: Vec<Vec<u32>> =
                        alg.basis_between(w, u).iter().map(|&k| m.path_matrix(alg.basis_path(k)).mul_vec(g)).collect();
                    Matrix::from_columns(f, m.dim_at(u), &cols)
                })
                .collect();
            ModuleMap::new(pw, m, maps)
        })
        .collect::<Result<_>>()?;
    let cover = sum.from_components(m, &parts);
    Ok((vertices, sum, cover))
}

/// `P1 -d-> P0 -aug-> M -> 0`, minimal, with the first syzygy.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub p0_vertices: Vec<usize>,
    pub p1_vertices: Vec<usize>,
    pub p0: DirectSum,
    pub p1: DirectSum,
    pub d: ModuleMap,
    pub aug: ModuleMap,
    pub syzygy: Representation,
    pub syzygy_inclusion: ModuleMap,
}

pub fn minimal_presentation(m: &Representation) -> Result<Presentation> {
    let (p0_vertices, p0, aug) = projective_cover(m)?;
    let (syzygy, syzygy_inclusion) = kernel(&aug)?;
    let (p1_vertices, p1, c) = projective_cover(&syzygy)?;
    let d = c.then(&syzygy_inclusion);
    Ok(Presentation { p0_vertices, p1_vertices, p0, p1, d, aug, syzygy, syzygy_inclusion })
}

/// The `i`-th syzygy (`i = 0` is `M` itself).
pub fn syzygy(m: &Representation, i: usize) -> Result<Representation> {
    let mut cur = m.clone();
    for _ in 0..i {
        let (_, _, cover) = projective_cover(&cur)?;
        cur = kernel(&cover)?.0;
    }
    Ok(cur)
}

pub fn tau(m: &Representation) -> Result<Representation> {
    if m.is_zero() {
        return Ok(m.clone());
    }
    let pres = minimal_presentation(m)?;
    let nu = nakayama_on_projectives(m.algebra(), &pres.p1_vertices, &pres.p0_vertices, &pres.d)?;
    Ok(kernel(&nu)?.0)
}

/// `dim Ext^1(M, N) = dim Hom(ΩM, N) - rank(Hom(P0, N) -> Hom(ΩM, N))`.
pub fn ext1_dim(m: &Representation, n: &Representation) -> Result<usize> {
    let pres = minimal_presentation(m)?;
    let cocycles = hom_dim(&pres.syzygy, n)?;
    if cocycles == 0 {
        return Ok(0);
    }
    let restricted: Vec<ModuleMap> =
        hom_basis(&pres.p0.module, n)?.iter().map(|g| pres.syzygy_inclusion.then(g)).collect();
    Ok(cocycles - span_rank(&restricted))
}

pub fn ext_dim(m: &Representation, n: &Representation, i: usize) -> Result<usize> {
    assert!(i >= 1, "Ext^0 is Hom");
    ext1_dim(&syzygy(m, i - 1)?, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Basis of the one-sided ideal of endomorphisms killed by `f`: on the
/// source (`f∘g = 0`) for right, on the target (`g∘f = 0`) for left.
fn annihilator(f: &ModuleMap, side: Side) -> Result<Vec<ModuleMap>> {
    let (obj, images): (&Representation, Vec<ModuleMap>) = match side {
        Side::Right => {
            let e = hom_basis(f.source(), f.source())?;
            (f.source(), e.iter().map(|g| g.then(f)).collect())
        }
        Side::Left => {
            let e = hom_basis(f.target(), f.target())?;
            (f.target(), e.iter().map(|g| f.then(g)).collect())
        }
    };
    let e = hom_basis(obj, obj)?;
    if e.is_empty() {
        return Ok(Vec::new());
    }
    let len = f.flatten().len();
    let cols: Vec<Vec<u32>> = images.iter().map(|g| g.flatten()).collect();
    let sys = Matrix::from_columns(obj.field(), len, &cols);
    let zero = ModuleMap::zero(obj, obj);
    Ok(sys.kernel_basis().iter().map(|c| combine(&zero, &e, c)).collect())
}

/// Right minimal: no nonzero summand of the source is killed by `f`;
/// left minimal dually. Decided by nilpotency of the annihilator ideal.
pub fn is_minimal(f: &ModuleMap, side: Side) -> Result<bool> {
    Ok(ideal_is_nilpotent(&annihilator(f, side)?))
}

/// Right minimal version: restriction of `f` to a summand of the source
/// with a complement in the kernel. Returns the restricted map and the
/// summand's inclusion and projection.
pub fn right_minimal_version(f: &ModuleMap, lim: Limits) -> Result<(ModuleMap, Summand)> {
    let mut cur = f.clone();
    let mut incl = ModuleMap::identity(f.source());
    let mut proj = ModuleMap::identity(f.source());
    loop {
        let ann = annihilator(&cur, Side::Right)?;
        if ideal_is_nilpotent(&ann) {
            let s = Summand { module: cur.source().clone(), inclusion: incl, projection: proj };
            return Ok((cur, s));
        }
        let zero = ModuleMap::zero(cur.source(), cur.source());
        let x = find_non_nilpotent(&zero, &ann, lim)?.expect("non-nilpotent ideal has a non-nilpotent element");
        if x.is_iso() {
            // f vanishes: the minimal version lives on the zero module
            let z = Representation::zero(f.source().algebra());
            let s = Summand {
                module: z.clone(),
                inclusion: ModuleMap::zero(&z, f.source()),
                projection: ModuleMap::zero(f.source(), &z),
            };
            return Ok((ModuleMap::zero(&z, f.target()), s));
        }
        let (_, ker) = fitting(&x)?;
        cur = ker.inclusion.then(&cur);
        incl = ker.inclusion.then(&incl);
        proj = proj.then(&ker.projection);
    }
}

/// Left minimal version: `f` followed by the projection onto a summand of
/// the target whose complement meets the image trivially.
pub fn left_minimal_version(f: &ModuleMap, lim: Limits) -> Result<(ModuleMap, Summand)> {
    let mut cur = f.clone();
    let mut incl = ModuleMap::identity(f.target());
    let mut proj = ModuleMap::identity(f.target());
    loop {
        let ann = annihilator(&cur, Side::Left)?;
        if ideal_is_nilpotent(&ann) {
            let s = Summand { module: cur.target().clone(), inclusion: incl, projection: proj };
            return Ok((cur, s));
        }
        let zero = ModuleMap::zero(cur.target(), cur.target());
        let x = find_non_nilpotent(&zero, &ann, lim)?.expect("non-nilpotent ideal has a non-nilpotent element");
        if x.is_iso() {
            let z = Representation::zero(f.source().algebra());
            let s = Summand {
                module: z.clone(),
                inclusion: ModuleMap::zero(&z, f.target()),
                projection: ModuleMap::zero(f.target(), &z),
            };
            return Ok((ModuleMap::zero(f.source(), &z), s));
        }
        // x^n ∘ f = 0, so the image of f sits in ker x^n
        let (_, ker) = fitting(&x)?;
        cur = cur.then(&ker.projection);
        incl = ker.inclusion.then(&incl);
        proj = proj.then(&ker.projection);
    }
}

/// Ordered list of pairwise non-isomorphic indecomposables.
#[derive(Clone, Debug)]
pub struct Catalog {
    algebra: Arc<BoundAlgebra>,
    entries: Vec<Representation>,
    /// Set when enumeration to `bound` was exhaustive.
    pub complete: bool,
    pub bound: Option<Vec<usize>>,
}

impl Catalog {
    /// User-supplied entries; validated and put in canonical order.
    pub fn from_entries(
        alg: &Arc<BoundAlgebra>,
        entries: Vec<Representation>,
        complete: bool,
        lim: Limits,
    ) -> Result<Self> {
        for (k, e) in entries.iter().enumerate() {
            if !Arc::ptr_eq(e.algebra(), alg) {
                return Err(Error::AlgebraMismatch);
            }
            if !is_indecomposable(e, lim)? {
                return Err(Error::DecomposableSummand(k));
            }
            for (j, other) in entries[..k].iter().enumerate() {
                if iso_indecomposable(other, e)?.is_some() {
                    return Err(Error::DuplicateSummand(j, k));
                }
            }
        }
        let mut entries = entries;
        entries.sort_by_cached_key(canonical_key);
        Ok(Catalog { algebra: alg.clone(), entries, complete, bound: None })
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.algebra
    }

    pub fn entries(&self) -> &[Representation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: usize) -> &Representation {
        &self.entries[k]
    }

    /// Index of the entry isomorphic to the indecomposable `m`.
    pub fn index_of(&self, m: &Representation) -> Result<Option<usize>> {
        for (k, e) in self.entries.iter().enumerate() {
            if e.dims() == m.dims() && iso_indecomposable(e, m)?.is_some() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Catalog indices and multiplicities of the summands of `m`, sorted by index.
    pub fn locate(&self, m: &Representation, lim: Limits) -> Result<Vec<(usize, usize)>> {
        if m.is_zero() {
            return Ok(Vec::new());
        }
        let d = decompose(m, lim)?;
        let mut out = Vec::new();
        for (rep, mult) in d.representatives().into_iter().zip(d.multiplicities()) {
            let k = self
                .index_of(rep)?
                .ok_or_else(|| Error::CatalogEntryMissing(format!("indecomposable with dims {:?}", rep.dims())))?;
            out.push((k, mult));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Direct sum of the listed entries.
    pub fn sum_of(&self, indices: &[usize]) -> Result<Representation> {
        let parts: Vec<Representation> = indices.iter().map(|&k| self.entries[k].clone()).collect();
        direct_sum(&self.algebra, &parts)
    }
}

fn canonical_key(m: &Representation) -> (usize, Vec<usize>) {
    (m.total_dim(), m.dims().to_vec())
}

fn support_connected(alg: &BoundAlgebra, d: &[usize]) -> bool {
    let support: Vec<usize> = (0..d.len()).filter(|&v| d[v] > 0).collect();
    let Some(&start) = support.first() else { return false };
    let mut seen = vec![false; d.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for a in alg.quiver().arrows() {
            for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                if x == v && d[y] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    support.iter().all(|&v| seen[v])
}

/// Arrow order and, per position, the relation checks that become decidable
/// once that arrow is assigned.
struct SearchPlan {
    order: Vec<usize>,
    checks: Vec<Vec<usize>>,
}

fn search_plan(alg: &BoundAlgebra) -> SearchPlan {
    let arrows = alg.quiver().arrows().len();
    let gens = &alg.ideal().generators;
    // each check is a set of arrows: relation generators, then boundary paths
    let mut sets: Vec<Vec<usize>> = gens
        .iter()
        .map(|r| {
            let mut s: Vec<usize> = r.terms.iter().flat_map(|(_, p)| p.arrows.iter().copied()).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    sets.extend(alg.boundary_paths().iter().map(|p| {
        let mut s = p.arrows.clone();
        s.sort_unstable();
        s.dedup();
        s
    }));
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; arrows];
    loop {
        let next = sets
            .iter()
            .filter(|s| s.iter().any(|&a| !placed[a]))
            .min_by_key(|s| s.iter().filter(|&&a| !placed[a]).count());
        let Some(s) = next else { break };
        for &a in s {
            if !placed[a] {
                placed[a] = true;
                order.push(a);
            }
        }
    }
    order.extend((0..arrows).filter(|&a| !placed[a]));
    let pos: Vec<usize> = {
        let mut p = vec![0; arrows];
        for (i, &a) in order.iter().enumerate() {
            p[a] = i;
        }
        p
    };
    let mut checks = vec![Vec::new(); arrows];
    for (k, s) in sets.iter().enumerate() {
        if let Some(last) = s.iter().map(|&a| pos[a]).max() {
            checks[last].push(k);
        }
    }
    SearchPlan { order, checks }
}

/// Evaluates check `k` (a relation generator or boundary path) on partial data.
fn check_holds(alg: &BoundAlgebra, k: usize, maps: &[Option<Matrix>], dims: &[usize]) -> bool {
    let f = alg.field();
    let q = alg.quiver();
    let path_matrix = |p: &crate::quiver::Path| {
        let mut acc = Matrix::identity(f, dims[p.start]);
        for &a in &p.arrows {
            acc = maps[a].as_ref().expect("assigned").mul(&acc);
        }
        acc
    };
    let gens = &alg.ideal().generators;
    if k < gens.len() {
        let rel = &gens[k];
        let first = &rel.terms[0].1;
        let mut acc = Matrix::zeros(f, dims[first.end(q)], dims[first.start]);
        for (c, p) in &rel.terms {
            acc = acc.add(&path_matrix(p).scale(*c % f.p()));
        }
        acc.is_zero()
    } else {
        path_matrix(&alg.boundary_paths()[k - gens.len()]).is_zero()
    }
}

fn all_matrices(f: Field, rows: usize, cols: usize) -> Vec<Matrix> {
    let n = rows * cols;
    let count = (f.p() as usize).pow(n as u32);
    (0..count)
        .map(|mut idx| {
            let data: Vec<u32> = (0..n)
                .map(|_| {
                    let d = (idx % f.p() as usize) as u32;
                    idx /= f.p() as usize;
                    d
                })
                .collect();
            Matrix::new(f, rows, cols, data)
        })
        .collect()
}

/// All representations with dimension vector `d`, relations imposed.
fn representations_of(alg: &Arc<BoundAlgebra>, d: &[usize]) -> Vec<Representation> {
    let plan = search_plan(alg);
    let f = alg.field();
    let arrows = alg.quiver().arrows();
    let choices: Vec<Vec<Matrix>> =
        plan.order.iter().map(|&a| all_matrices(f, d[arrows[a].target], d[arrows[a].source])).collect();
    let mut out = Vec::new();
    let mut maps: Vec<Option<Matrix>> = vec![None; arrows.len()];
    fn rec(
        alg: &Arc<BoundAlgebra>,
        d: &[usize],
        plan: &SearchPlan,
        choices: &[Vec<Matrix>],
        pos: usize,
        maps: &mut Vec<Option<Matrix>>,
        out: &mut Vec<Representation>,
    ) {
        if pos == plan.order.len() {
            let ms = maps.iter().map(|m| m.clone().expect("assigned")).collect();
            out.push(Representation::new_unchecked(alg, d.to_vec(), ms).expect("shapes"));
            return;
        }
        let a = plan.order[pos];
        for m in &choices[pos] {
            maps[a] = Some(m.clone());
            if plan.checks[pos].iter().all(|&k| check_holds(alg, k, maps, d)) {
                rec(alg, d, plan, choices, pos + 1, maps, out);
            }
        }
        maps[a] = None;
    }
    rec(alg, d, &plan, &choices, 0, &mut maps, &mut out);
    out
}

fn rank_profile(m: &Representation) -> Vec<usize> {
    m.algebra().basis_paths().iter().map(|p| m.path_matrix(p).rank()).collect()
}

/// Indecomposables of dimension vector `d`, one per isomorphism class,
/// in first-found order.
fn indecomposables_of(alg: &Arc<BoundAlgebra>, d: &[usize], lim: Limits) -> Result<Vec<Representation>> {
    let f = alg.field();
    let entries: usize = alg.quiver().arrows().iter().map(|a| d[a.source] * d[a.target]).sum();
    check_cap(f, entries, &format!("representations of dimension vector {d:?}"), lim)?;
    let mut found: Vec<(Vec<usize>, Representation)> = Vec::new();
    for cand in representations_of(alg, d) {
        let profile = rank_profile(&cand);
        let mut known = false;
        for (p, e) in &found {
            if *p == profile && iso_indecomposable(e, &cand)?.is_some() {
                known = true;
                break;
            }
        }
        if known {
            continue;
        }
        if is_indecomposable(&cand, lim)? {
            found.push((profile, cand));
        }
    }
    Ok(found.into_iter().map(|(_, m)| m).collect())
}

/// All indecomposables with dimension vector bounded componentwise by `bound`.
pub fn enumerate_indecomposables(alg: &Arc<BoundAlgebra>, bound: &[usize], lim: Limits) -> Result<Catalog> {
    if bound.len() != alg.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "bound has {} entries for {} vertices",
            bound.len(),
            alg.vertex_count()
        )));
    }
    let mut vectors: Vec<Vec<usize>> = vec![Vec::new()];
    for &b in bound {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    vectors.retain(|d| support_connected(alg, d));
    vectors.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    let per: Vec<Vec<Representation>> =
        vectors.par_iter().map(|d| indecomposables_of(alg, d, lim)).collect::<Result<_>>()?;
    Ok(Catalog {
        algebra: alg.clone(),
        entries: per.into_iter().flatten().collect(),
        complete: true,
        bound: Some(bound.to_vec()),
    })
}
