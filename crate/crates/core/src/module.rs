//! Representations of bound quivers, module maps and the elementary
//! constructions on them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::quiver::{BoundAlgebra, Path};

/// A finite-dimensional module: one vector space per vertex and one matrix
/// per arrow, `dims[target] x dims[source]`. Cloning is cheap.
#[derive(Clone)]
pub struct Representation {
    algebra: Arc<BoundAlgebra>,
    dims: Arc<Vec<usize>>,
    maps: Arc<Vec<Matrix>>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.dims == other.dims && self.maps == other.maps
    }
}

impl Eq for Representation {}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep{:?}", self.dims)?;
        let q = self.algebra.quiver();
        for (a, m) in q.arrows().iter().zip(self.maps.iter()) {
            write!(f, " {}={:?}", a.name, m)?;
        }
        Ok(())
    }
}

impl Representation {
    /// Validates shapes and relations.
    pub fn new(algebra: &Arc<BoundAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let rep = Self::new_unchecked(algebra, dims, maps)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Validates shapes only; use for data that satisfies the relations by construction.
    pub(crate) fn new_unchecked(algebra: &Arc<BoundAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let q = algebra.quiver();
        if dims.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch(format!("{} dims for {} vertices", dims.len(), q.vertex_count())));
        }
        if maps.len() != q.arrows().len() {
            return Err(Error::DimensionMismatch(format!("{} matrices for {} arrows", maps.len(), q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::DimensionMismatch("matrix over a different field".into()));
            }
        }
        Ok(Representation { algebra: algebra.clone(), dims: Arc::new(dims), maps: Arc::new(maps) })
    }

    pub fn zero(algebra: &Arc<BoundAlgebra>) -> Self {
        let f = algebra.field();
        let n = algebra.vertex_count();
        let maps = algebra.quiver().arrows().iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        Representation { algebra: algebra.clone(), dims: Arc::new(vec![0; n]), maps: Arc::new(maps) }
    }

    pub fn check_relations(&self) -> Result<()> {
        let alg = &self.algebra;
        let f = alg.field();
        for (k, rel) in alg.ideal().generators.iter().enumerate() {
            let first = &rel.terms[0].1;
            let (s, t) = (first.start, first.end(alg.quiver()));
            let mut acc = Matrix::zeros(f, self.dims[t], self.dims[s]);
            for (c, p) in &rel.terms {
                acc = acc.add(&self.path_matrix(p).scale(*c % f.p()));
            }
            if !acc.is_zero() {
                return Err(Error::InvalidRepresentation(format!("relation #{k}")));
            }
        }
        for p in alg.boundary_paths() {
            if !self.path_matrix(p).is_zero() {
                return Err(Error::InvalidRepresentation(format!("nilpotency (path {})", p.display(alg.quiver()))));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn same_algebra(&self, other: &Representation) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
    }

    /// Matrix of the path action `M(p)`.
    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let f = self.field();
        let mut acc = Matrix::identity(f, self.dims[p.start]);
        for &a in &p.arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    /// Action of an algebra element (basis coordinates) as a block matrix
    /// on the whole space.
    pub fn element_matrix(&self, x: &[u32]) -> Matrix {
        let f = self.field();
        let alg = &self.algebra;
        let offsets = self.offsets();
        let n = self.total_dim();
        let mut out = Matrix::zeros(f, n, n);
        for (k, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = alg.basis_path(k);
            let t = p.end(alg.quiver());
            let m = self.path_matrix(p).scale(c);
            let cur = out.block(offsets[t], self.dims[t], offsets[p.start], self.dims[p.start]);
            out.set_block(offsets[t], offsets[p.start], &cur.add(&m));
        }
        out
    }

    /// Start index of each vertex space in the concatenated total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|&d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }
}

/// A morphism of representations: one matrix per vertex, `dims_N(v) x dims_M(v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Representation,
    target: Representation,
    maps: Vec<Matrix>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Map{:?}->{:?} {:?}", self.source.dims(), self.target.dims(), self.maps)
    }
}

impl ModuleMap {
    /// Validates shapes and the intertwining condition.
    pub fn new(source: &Representation, target: &Representation, maps: Vec<Matrix>) -> Result<Self> {
        let m = Self::new_unchecked(source, target, maps)?;
        m.check_intertwines()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: &Representation, target: &Representation, maps: Vec<Matrix>) -> Result<Self> {
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch);
        }
        if maps.len() != source.dims().len() {
            return Err(Error::InvalidMap(format!("{} vertex maps for {} vertices", maps.len(), source.dims().len())));
        }
        for (v, m) in maps.iter().enumerate() {
            if m.rows() != target.dim_at(v) || m.cols() != source.dim_at(v) {
                return Err(Error::InvalidMap(format!("vertex {v} map has shape {}x{}", m.rows(), m.cols())));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), maps })
    }

    pub fn check_intertwines(&self) -> Result<()> {
        for (ai, a) in self.source.algebra().quiver().arrows().iter().enumerate() {
            let lhs = self.maps[a.target].mul(self.source.arrow_map(ai));
            let rhs = self.target.arrow_map(ai).mul(&self.maps[a.source]);
            if lhs != rhs {
                return Err(Error::InvalidMap(format!("does not intertwine arrow {}", a.name)));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Representation) -> Self {
        let f = m.field();
        let maps = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
        ModuleMap { source: m.clone(), target: m.clone(), maps }
    }

    pub fn zero(source: &Representation, target: &Representation) -> Self {
        let f = source.field();
        let maps = source.dims().iter().zip(target.dims()).map(|(&s, &t)| Matrix::zeros(f, t, s)).collect();
        ModuleMap { source: source.clone(), target: target.clone(), maps }
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &Matrix {
        &self.maps[v]
    }

    pub fn vertex_maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ModuleMap) -> ModuleMap {
        assert_eq!(self.target.dims(), after.source.dims(), "composition of incompatible maps");
        let maps = self.maps.iter().zip(&after.maps).map(|(f, g)| g.mul(f)).collect();
        ModuleMap { source: self.source.clone(), target: after.target.clone(), maps }
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &ModuleMap) -> ModuleMap {
        before.then(self)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        let maps = self.maps.iter().map(|a| a.scale(c)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    /// Same matrices, reinterpreted between modules with identical data.
    pub fn with_ends(&self, source: &Representation, target: &Representation) -> ModuleMap {
        ModuleMap { source: source.clone(), target: target.clone(), maps: self.maps.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn is_nilpotent(&self) -> bool {
        self.maps.iter().all(|m| m.is_nilpotent())
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let maps: Option<Vec<Matrix>> = self.maps.iter().map(|m| m.invert().ok().flatten()).collect();
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), maps: maps? })
    }

    pub fn pow(&self, e: u64) -> ModuleMap {
        let maps = self.maps.iter().map(|m| m.pow(e)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), maps }
    }

    /// Concatenated row-major entries of the vertex maps.
    pub fn flatten(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn from_flat(source: &Representation, target: &Representation, v: &[u32]) -> ModuleMap {
        let f = source.field();
        let mut at = 0;
        let maps = source
            .dims()
            .iter()
            .zip(target.dims())
            .map(|(&s, &t)| {
                let m = Matrix::new(f, t, s, v[at..at + s * t].to_vec());
                at += s * t;
                m
            })
            .collect();
        ModuleMap { source: source.clone(), target: target.clone(), maps }
    }

    /// Block-diagonal version as a single matrix on total spaces.
    pub fn total_matrix(&self) -> Matrix {
        Matrix::block_diag(self.source.field(), &self.maps)
    }
}

/// Length of the flattened coordinate vector of maps `source -> target`.
pub fn flat_len(source: &Representation, target: &Representation) -> usize {
    source.dims().iter().zip(target.dims()).map(|(&s, &t)| s * t).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StandardKind {
    Simple,
    Projective,
    Injective,
}

pub fn simple(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let mut dims = vec![0; alg.vertex_count()];
    dims[v] = 1;
    let f = alg.field();
    let maps = alg.quiver().arrows().iter().map(|a| Matrix::zeros(f, dims[a.target], dims[a.source])).collect();
    Representation::new_unchecked(alg, dims, maps).expect("simple module shapes")
}

/// `P(v)`: basis the basis paths starting at `v`, arrows act by composition.
pub fn projective(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let f = alg.field();
    let q = alg.quiver();
    let spaces: Vec<Vec<usize>> = (0..alg.vertex_count()).map(|w| alg.basis_between(v, w)).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let src = &spaces[a.source];
            let tgt = &spaces[a.target];
            let arrow = Path { start: a.source, arrows: vec![ai] };
            Matrix::from_fn(f, tgt.len(), src.len(), |r, c| {
                let p = alg.basis_path(src[c]);
                let composed = Path::compose(q, &arrow, p).expect("composable");
                alg.reduce(&composed)[tgt[r]]
            })
        })
        .collect();
    let dims = spaces.iter().map(|s| s.len()).collect();
    Representation::new_unchecked(alg, dims, maps).expect("projective module shapes")
}

/// `I(v)`: basis dual to the basis paths ending at `v`, arrows act by
/// precomposition.
pub fn injective(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let f = alg.field();
    let q = alg.quiver();
    let spaces: Vec<Vec<usize>> = (0..alg.vertex_count()).map(|w| alg.basis_between(w, v)).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let src = &spaces[a.source];
            let tgt = &spaces[a.target];
            let arrow = Path { start: a.source, arrows: vec![ai] };
            Matrix::from_fn(f, tgt.len(), src.len(), |r, c| {
                let qpath = alg.basis_path(tgt[r]);
                let composed = Path::compose(q, qpath, &arrow).expect("composable");
                alg.reduce(&composed)[src[c]]
            })
        })
        .collect();
    let dims = spaces.iter().map(|s| s.len()).collect();
    Representation::new_unchecked(alg, dims, maps).expect("injective module shapes")
}

pub fn standard_module(alg: &Arc<BoundAlgebra>, kind: StandardKind, v: usize) -> Result<Representation> {
    if v >= alg.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    Ok(match kind {
        StandardKind::Simple => simple(alg, v),
        StandardKind::Projective => projective(alg, v),
        StandardKind::Injective => injective(alg, v),
    })
}

/// A direct sum together with the offsets of each summand at each vertex.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Representation,
    pub summands: Vec<Representation>,
    /// `offsets[k][v]`: first coordinate of summand `k` at vertex `v`.
    pub offsets: Vec<Vec<usize>>,
}

impl DirectSum {
    pub fn new(alg: &Arc<BoundAlgebra>, summands: &[Representation]) -> Result<Self> {
        if summands.iter().any(|s| !Arc::ptr_eq(s.algebra(), alg)) {
            return Err(Error::AlgebraMismatch);
        }
        let f = alg.field();
        let n = alg.vertex_count();
        let mut dims = vec![0; n];
        let mut offsets = Vec::with_capacity(summands.len());
        for s in summands {
            offsets.push(dims.clone());
            for v in 0..n {
                dims[v] += s.dim_at(v);
            }
        }
        let maps = (0..alg.quiver().arrows().len())
            .map(|a| Matrix::block_diag(f, &summands.iter().map(|s| s.arrow_map(a).clone()).collect::<Vec<_>>()))
            .collect();
        let module = Representation::new_unchecked(alg, dims, maps)?;
        Ok(DirectSum { module, summands: summands.to_vec(), offsets })
    }

    pub fn inclusion(&self, k: usize) -> ModuleMap {
        let f = self.module.field();
        let s = &self.summands[k];
        let maps = (0..self.module.dims().len())
            .map(|v| {
                let mut m = Matrix::zeros(f, self.module.dim_at(v), s.dim_at(v));
                m.set_block(self.offsets[k][v], 0, &Matrix::identity(f, s.dim_at(v)));
                m
            })
            .collect();
        ModuleMap { source: s.clone(), target: self.module.clone(), maps }
    }

    pub fn projection(&self, k: usize) -> ModuleMap {
        let f = self.module.field();
        let s = &self.summands[k];
        let maps = (0..self.module.dims().len())
            .map(|v| {
                let mut m = Matrix::zeros(f, s.dim_at(v), self.module.dim_at(v));
                m.set_block(0, self.offsets[k][v], &Matrix::identity(f, s.dim_at(v)));
                m
            })
            .collect();
        ModuleMap { source: self.module.clone(), target: s.clone(), maps }
    }

    /// The map `⊕ S_k -> N` with components `parts[k]`.
    pub fn from_components(&self, target: &Representation, parts: &[ModuleMap]) -> ModuleMap {
        let f = self.module.field();
        let maps = (0..self.module.dims().len())
            .map(|v| {
                Matrix::hstack_all(f, target.dim_at(v), &parts.iter().map(|p| p.maps[v].clone()).collect::<Vec<_>>())
            })
            .collect();
        ModuleMap { source: self.module.clone(), target: target.clone(), maps }
    }

    /// The map `N -> ⊕ S_k` with components `parts[k]`.
    pub fn into_components(&self, source: &Representation, parts: &[ModuleMap]) -> ModuleMap {
        let f = self.module.field();
        let maps = (0..self.module.dims().len())
            .map(|v| {
                Matrix::vstack_all(f, source.dim_at(v), &parts.iter().map(|p| p.maps[v].clone()).collect::<Vec<_>>())
            })
            .collect();
        ModuleMap { source: source.clone(), target: self.module.clone(), maps }
    }
}

pub fn direct_sum(alg: &Arc<BoundAlgebra>, summands: &[Representation]) -> Result<Representation> {
    Ok(DirectSum::new(alg, summands)?.module)
}

/// `f ⊕ g` between the direct sums of sources and targets.
pub fn map_direct_sum(parts: &[ModuleMap]) -> Result<ModuleMap> {
    let alg = parts.first().map(|p| p.source.algebra().clone()).ok_or_else(|| Error::InvalidMap("empty sum".into()))?;
    let src = DirectSum::new(&alg, &parts.iter().map(|p| p.source.clone()).collect::<Vec<_>>())?;
    let tgt = DirectSum::new(&alg, &parts.iter().map(|p| p.target.clone()).collect::<Vec<_>>())?;
    let f = alg.field();
    let maps = (0..alg.vertex_count())
        .map(|v| Matrix::block_diag(f, &parts.iter().map(|p| p.maps[v].clone()).collect::<Vec<_>>()))
        .collect();
    Ok(ModuleMap { source: src.module, target: tgt.module, maps })
}

/// The submodule spanned at each vertex by the columns of `bases[v]`
/// (which must be linearly independent and invariant), with its inclusion.
pub fn submodule(m: &Representation, bases: &[Matrix]) -> Result<(Representation, ModuleMap)> {
    let alg = m.algebra();
    let mut maps = Vec::new();
    for (ai, a) in alg.quiver().arrows().iter().enumerate() {
        let image = m.arrow_map(ai).mul(&bases[a.source]);
        let x = bases[a.target]
            .solve_matrix(&image)
            .ok_or_else(|| Error::InvalidRepresentation(format!("subspace not invariant under {}", a.name)))?;
        maps.push(x);
    }
    let dims = bases.iter().map(|b| b.cols()).collect();
    let sub = Representation::new_unchecked(alg, dims, maps)?;
    let incl = ModuleMap::new_unchecked(&sub, m, bases.to_vec())?;
    Ok((sub, incl))
}

/// `M / U` for the invariant subspaces spanned by `bases[v]`, with the projection.
pub fn quotient(m: &Representation, bases: &[Matrix]) -> Result<(Representation, ModuleMap)> {
    let alg = m.algebra();
    let mut proj = Vec::new();
    let mut lifts = Vec::new();
    for (v, b) in bases.iter().enumerate() {
        let comp = b.complement();
        let full = b.hstack(&comp);
        let inv = full
            .invert()?
            .ok_or_else(|| Error::InvalidRepresentation(format!("dependent subspace basis at vertex {v}")))?;
        proj.push(inv.block(b.cols(), comp.cols(), 0, m.dim_at(v)));
        lifts.push(comp);
    }
    let maps = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| proj[a.target].mul(m.arrow_map(ai)).mul(&lifts[a.source]))
        .collect();
    let dims = lifts.iter().map(|l| l.cols()).collect();
    let q = Representation::new_unchecked(alg, dims, maps)?;
    let pi = ModuleMap::new_unchecked(m, &q, proj)?;
    Ok((q, pi))
}

/// Kernel, image and cokernel of a module map.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: Representation,
    pub inclusion: ModuleMap,
    pub image: Representation,
    /// `source -> image`
    pub coimage: ModuleMap,
    /// `image -> target`
    pub image_inclusion: ModuleMap,
    pub cokernel: Representation,
    pub projection: ModuleMap,
}

pub fn kernel(f: &ModuleMap) -> Result<(Representation, ModuleMap)> {
    let bases: Vec<Matrix> = f.maps.iter().map(|m| m.kernel_matrix()).collect();
    submodule(&f.source, &bases)
}

pub fn image(f: &ModuleMap) -> Result<(Representation, ModuleMap)> {
    let bases: Vec<Matrix> = f.maps.iter().map(|m| m.column_space()).collect();
    submodule(&f.target, &bases)
}

pub fn cokernel(f: &ModuleMap) -> Result<(Representation, ModuleMap)> {
    let bases: Vec<Matrix> = f.maps.iter().map(|m| m.column_space()).collect();
    quotient(&f.target, &bases)
}

pub fn kernel_cokernel(f: &ModuleMap) -> Result<KernelCokernel> {
    let (kernel, inclusion) = kernel(f)?;
    let (image, image_inclusion) = image(f)?;
    let coimage_maps: Vec<Matrix> = (0..f.maps.len())
        .map(|v| image_inclusion.maps[v].solve_matrix(&f.maps[v]).expect("image contains the columns of f"))
        .collect();
    let coimage = ModuleMap::new_unchecked(&f.source, &image, coimage_maps)?;
    let (cokernel, projection) = cokernel(f)?;
    Ok(KernelCokernel { kernel, inclusion, image, coimage, image_inclusion, cokernel, projection })
}

/// For a surjection `q: X -> B` and `h: X -> C` vanishing on `ker q`, the
/// unique `g: B -> C` with `g ∘ q = h`.
pub fn factor_through_epi(q: &ModuleMap, h: &ModuleMap) -> Result<ModuleMap> {
    let mut maps = Vec::new();
    for v in 0..q.maps.len() {
        // g_v q_v = h_v  <=>  q_v^T g_v^T = h_v^T
        let gt = q.maps[v]
            .transpose()
            .solve_matrix(&h.maps[v].transpose())
            .ok_or_else(|| Error::InvalidMap(format!("map does not factor through the epimorphism at vertex {v}")))?;
        maps.push(gt.transpose());
    }
    ModuleMap::new_unchecked(&q.target, &h.target, maps)
}

/// For an injection `i: A -> X` and `h: C -> X` with image inside `im i`,
/// the unique `g: C -> A` with `i ∘ g = h`.
pub fn factor_through_mono(i: &ModuleMap, h: &ModuleMap) -> Result<ModuleMap> {
    let mut maps = Vec::new();
    for v in 0..i.maps.len() {
        let g = i.maps[v]
            .solve_matrix(&h.maps[v])
            .ok_or_else(|| Error::InvalidMap(format!("map does not factor through the monomorphism at vertex {v}")))?;
        maps.push(g);
    }
    ModuleMap::new_unchecked(&h.source, &i.source, maps)
}

/// Nakayama functor on a map between explicit sums of standard projectives:
/// `f: ⊕ P(src[k]) -> ⊕ P(tgt[l])` goes to `⊕ I(src[k]) -> ⊕ I(tgt[l])`.
pub fn nakayama_on_projectives(
    alg: &Arc<BoundAlgebra>,
    src: &[usize],
    tgt: &[usize],
    f: &ModuleMap,
) -> Result<ModuleMap> {
    let field = alg.field();
    let q = alg.quiver();
    let psrc = DirectSum::new(alg, &src.iter().map(|&v| projective(alg, v)).collect::<Vec<_>>())?;
    let ptgt = DirectSum::new(alg, &tgt.iter().map(|&v| projective(alg, v)).collect::<Vec<_>>())?;
    if f.source != psrc.module || f.target != ptgt.module {
        return Err(Error::InvalidMap("source or target is not the declared sum of standard projectives".into()));
    }
    let isrc = DirectSum::new(alg, &src.iter().map(|&v| injective(alg, v)).collect::<Vec<_>>())?;
    let itgt = DirectSum::new(alg, &tgt.iter().map(|&v| injective(alg, v)).collect::<Vec<_>>())?;
    let n = alg.vertex_count();
    let mut maps: Vec<Matrix> =
        (0..n).map(|w| Matrix::zeros(field, itgt.module.dim_at(w), isrc.module.dim_at(w))).collect();
    for (k, &i) in src.iter().enumerate() {
        // e_i is the first basis element of P(i) at vertex i
        let col = psrc.offsets[k][i];
        for (l, &j) in tgt.iter().enumerate() {
            let paths_ji = alg.basis_between(j, i);
            let row0 = ptgt.offsets[l][i];
            let x: Vec<u32> = (0..paths_ji.len()).map(|r| f.maps[i].get(row0 + r, col)).collect();
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for w in 0..n {
                let rows = alg.basis_between(w, j);
                let cols = alg.basis_between(w, i);
                for (ri, &r) in rows.iter().enumerate() {
                    for (qi, &qk) in paths_ji.iter().enumerate() {
                        if x[qi] == 0 {
                            continue;
                        }
                        let composed = Path::compose(q, alg.basis_path(qk), alg.basis_path(r)).expect("composable");
                        let red = alg.reduce(&composed);
                        for (si, &s) in cols.iter().enumerate() {
                            if red[s] == 0 {
                                continue;
                            }
                            let (rr, cc) = (itgt.offsets[l][w] + ri, isrc.offsets[k][w] + si);
                            let cur = maps[w].get(rr, cc);
                            maps[w].set(rr, cc, field.add(cur, field.mul(x[qi], red[s])));
                        }
                    }
                }
            }
        }
    }
    ModuleMap::new(&isrc.module, &itgt.module, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Quiver, Relation, RelationIdeal};

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    pub(crate) fn loop_algebra() -> Arc<BoundAlgebra> {
        let q = Quiver::new(&["1", "2"], &[("alpha", "1", "2"), ("beta", "2", "2")]).unwrap();
        let rel = Relation { terms: vec![(1, Path::parse(&q, "beta beta").unwrap())] };
        Arc::new(BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 3, generators: vec![rel] }).unwrap())
    }

    pub(crate) fn a3_radical_square() -> Arc<BoundAlgebra> {
        let q = Quiver::new(&["1", "2", "3"], &[("alpha", "1", "2"), ("beta", "2", "3")]).unwrap();
        let rel = Relation { terms: vec![(1, Path::parse(&q, "beta alpha").unwrap())] };
        Arc::new(BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 2, generators: vec![rel] }).unwrap())
    }

    #[test]
    fn standard_modules_of_loop_algebra() {
        let alg = loop_algebra();
        assert_eq!(projective(&alg, 0).dims(), &[1, 2]);
        assert_eq!(injective(&alg, 1).dims(), &[2, 2]);
        assert_eq!(simple(&alg, 0).dims(), &[1, 0]);
        for v in 0..2 {
            for kind in [StandardKind::Simple, StandardKind::Projective, StandardKind::Injective] {
                standard_module(&alg, kind, v).unwrap().check_relations().unwrap();
            }
        }
        assert!(standard_module(&alg, StandardKind::Simple, 7).is_err());
    }

    #[test]
    fn projective_dimension_sums_to_algebra() {
        for alg in [loop_algebra(), a3_radical_square()] {
            let total: usize = (0..alg.vertex_count()).map(|v| projective(&alg, v).total_dim()).sum();
            assert_eq!(total, alg.dim());
            let total: usize = (0..alg.vertex_count()).map(|v| injective(&alg, v).total_dim()).sum();
            assert_eq!(total, alg.dim());
        }
    }

    #[test]
    fn direct_sum_and_zero() {
        let alg = loop_algebra();
        let p1 = projective(&alg, 0);
        let z = Representation::zero(&alg);
        let s = direct_sum(&alg, &[p1.clone(), z]).unwrap();
        assert_eq!(s, p1);
        let ds = DirectSum::new(&alg, &[simple(&alg, 0), simple(&alg, 1)]).unwrap();
        assert_eq!(ds.module.dims(), &[1, 1]);
        assert!(ds.module.arrow_maps().iter().all(|m| m.is_zero()));
        for k in 0..2 {
            let round = ds.inclusion(k).then(&ds.projection(k));
            assert_eq!(round, ModuleMap::identity(&ds.summands[k]));
            ds.inclusion(k).check_intertwines().unwrap();
        }
    }

    #[test]
    fn kernel_cokernel_of_identity_and_zero() {
        let alg = loop_algebra();
        let m = injective(&alg, 1);
        let kc = kernel_cokernel(&ModuleMap::identity(&m)).unwrap();
        assert!(kc.kernel.is_zero() && kc.cokernel.is_zero());
        let n = projective(&alg, 0);
        let kc = kernel_cokernel(&ModuleMap::zero(&m, &n)).unwrap();
        assert_eq!(kc.kernel.dims(), m.dims());
        assert_eq!(kc.cokernel.dims(), n.dims());
        kc.inclusion.check_intertwines().unwrap();
        kc.projection.check_intertwines().unwrap();
        kc.kernel.check_relations().unwrap();
        kc.cokernel.check_relations().unwrap();
    }

    #[test]
    fn nakayama_identity_and_zero() {
        let alg = a3_radical_square();
        for v in 0..3 {
            let p = projective(&alg, v);
            let nu = nakayama_on_projectives(&alg, &[v], &[v], &ModuleMap::identity(&p)).unwrap();
            assert_eq!(nu, ModuleMap::identity(&injective(&alg, v)));
        }
        let p1 = projective(&alg, 0);
        let p2 = projective(&alg, 1);
        let nu = nakayama_on_projectives(&alg, &[1], &[0], &ModuleMap::zero(&p2, &p1)).unwrap();
        assert!(nu.is_zero());
        // a map P(1) -> P(2) is not in the declared form P(2) -> P(1)
        assert!(nakayama_on_projectives(&alg, &[1], &[0], &ModuleMap::zero(&p1, &p2)).is_err());
    }
}
