//! Quivers, admissible relation ideals and the bound quiver algebra they
//! present.
//!
//! A path is stored in application order: `Path { start, arrows: [a, b] }`
//! means "apply `a`, then `b`", which is written `b a` and evaluates to the
//! matrix product `M(b) * M(a)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(name, source id, target id)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v}")));
            }
        }
        let mut out = Quiver { vertices, arrows: Vec::new() };
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if out.arrows.iter().any(|a| a.name == name) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow {name}")));
            }
            let source = out.vertex_index(s.as_ref()).ok_or_else(|| Error::UnknownVertex(s.as_ref().into()))?;
            let target = out.vertex_index(t.as_ref()).ok_or_else(|| Error::UnknownVertex(t.as_ref().into()))?;
            out.arrows.push(Arrow { name, source, target });
        }
        Ok(out)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    /// Arrow indices in the order they are applied.
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, arrows: Vec::new() }
    }

    /// Validates composability of `arrows` starting at `start`.
    pub fn new(quiver: &Quiver, start: usize, arrows: Vec<usize>) -> Result<Self> {
        let mut at = start;
        for &a in &arrows {
            let arrow = quiver.arrows.get(a).ok_or_else(|| Error::InvalidQuiver(format!("no arrow #{a}")))?;
            if arrow.source != at {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} does not start at {}",
                    arrow.name, quiver.vertices[at]
                )));
            }
            at = arrow.target;
        }
        Ok(Path { start, arrows })
    }

    /// Parses a path written right to left as arrow names, e.g. `"b a"`.
    /// A single vertex id `e<v>` denotes the trivial path.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Self> {
        let names: Vec<&str> = text.split_whitespace().collect();
        if names.is_empty() {
            return Err(Error::InvalidQuiver("empty path".into()));
        }
        if names.len() == 1 && quiver.arrow_index(names[0]).is_none() {
            if let Some(v) = names[0].strip_prefix('e').and_then(|v| quiver.vertex_index(v)) {
                return Ok(Path::trivial(v));
            }
        }
        let mut arrows = Vec::with_capacity(names.len());
        for name in names.iter().rev() {
            arrows.push(quiver.arrow_index(name).ok_or_else(|| Error::InvalidQuiver(format!("unknown arrow {name}")))?);
        }
        let start = quiver.arrows[arrows[0]].source;
        Path::new(quiver, start, arrows)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, quiver: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| quiver.arrows[a].target)
    }

    /// `after ∘ before`, if composable.
    pub fn compose(quiver: &Quiver, after: &Path, before: &Path) -> Option<Path> {
        if before.end(quiver) != after.start {
            return None;
        }
        let mut arrows = before.arrows.clone();
        arrows.extend_from_slice(&after.arrows);
        Some(Path { start: before.start, arrows })
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", quiver.vertices[self.start]);
        }
        self.arrows.iter().rev().map(|&a| quiver.arrows[a].name.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// A linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u32, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationIdeal {
    /// All paths of at least this length lie in the ideal.
    pub nilpotency: usize,
    pub generators: Vec<Relation>,
}

/// `kQ / I` with a path basis and structure constants.
#[derive(Debug)]
pub struct BoundAlgebra {
    field: Field,
    quiver: Quiver,
    ideal: RelationIdeal,
    paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    /// Indices into `paths` of the normal-form basis.
    basis: Vec<usize>,
    /// Column `j` holds the basis coordinates of the class of `paths[j]`.
    reduction: Matrix,
    /// Paths of length exactly `nilpotency`; they act as zero.
    boundary: Vec<Path>,
    products: Vec<Vec<u32>>,
}

impl fmt::Display for BoundAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kQ/I over F_{} with {} vertices, {} arrows, dim {}",
            self.field.p(),
            self.quiver.vertex_count(),
            self.quiver.arrows.len(),
            self.dim()
        )
    }
}

fn paths_up_to(quiver: &Quiver, max_len: usize) -> Vec<Vec<Path>> {
    let mut by_len: Vec<Vec<Path>> = vec![(0..quiver.vertex_count()).map(Path::trivial).collect()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for p in &by_len[len - 1] {
            let end = p.end(quiver);
            for (ai, a) in quiver.arrows.iter().enumerate() {
                if a.source == end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { start: p.start, arrows });
                }
            }
        }
        next.sort();
        by_len.push(next);
    }
    by_len
}

impl BoundAlgebra {
    pub fn new(field: Field, quiver: Quiver, ideal: RelationIdeal) -> Result<Self> {
        let nil = ideal.nilpotency;
        if nil < 2 {
            return Err(Error::NotAdmissible(format!("nilpotency degree {nil} must be at least 2")));
        }
        for rel in &ideal.generators {
            let Some((_, first)) = rel.terms.first() else {
                return Err(Error::NotAdmissible("empty relation".into()));
            };
            let (s, t) = (first.start, first.end(&quiver));
            for (_, p) in &rel.terms {
                Path::new(&quiver, p.start, p.arrows.clone())?;
                if p.len() < 2 {
                    return Err(Error::NotAdmissible(format!(
                        "path {} has length {} < 2",
                        p.display(&quiver),
                        p.len()
                    )));
                }
                if p.start != s || p.end(&quiver) != t {
                    return Err(Error::NotAdmissible(format!(
                        "paths of a relation must be parallel ({})",
                        p.display(&quiver)
                    )));
                }
            }
        }

        let mut by_len = paths_up_to(&quiver, nil);
        let boundary = by_len.pop().unwrap_or_default();
        let paths: Vec<Path> = by_len.into_iter().flatten().collect();
        let path_index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = paths.len();

        // span of u * r * w for every generator r and paths u, w
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for rel in &ideal.generators {
            let (s, t) = (rel.terms[0].1.start, rel.terms[0].1.end(&quiver));
            for w in paths.iter().filter(|w| w.end(&quiver) == s) {
                for u in paths.iter().filter(|u| u.start == t) {
                    let mut v = vec![0u32; n];
                    let mut nonzero = false;
                    for (c, term) in &rel.terms {
                        let len = w.len() + term.len() + u.len();
                        if len >= nil {
                            continue;
                        }
                        let mut arrows = w.arrows.clone();
                        arrows.extend_from_slice(&term.arrows);
                        arrows.extend_from_slice(&u.arrows);
                        let idx = path_index[&Path { start: w.start, arrows }];
                        v[idx] = field.add(v[idx], *c % field.p());
                        nonzero |= v[idx] != 0;
                    }
                    if nonzero {
                        rows.push(v);
                    }
                }
            }
        }

        // longer paths are preferred as leading terms, so normal forms use shorter ones
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(paths[j].len()), j));
        let permuted = Matrix::from_fn(field, rows.len(), n, |i, j| rows[i][order[j]]);
        let ech = permuted.rref();
        let mut leading_row: HashMap<usize, usize> = HashMap::new();
        for (r, &pc) in ech.pivots.iter().enumerate() {
            leading_row.insert(order[pc], r);
        }
        let basis: Vec<usize> = (0..n).filter(|j| !leading_row.contains_key(j)).collect();
        let basis_pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut position_of_column = vec![0usize; n];
        for (pos, &j) in order.iter().enumerate() {
            position_of_column[j] = pos;
        }
        let mut reduction = Matrix::zeros(field, basis.len(), n);
        for j in 0..n {
            match leading_row.get(&j) {
                None => reduction.set(basis_pos[&j], j, 1),
                Some(&r) => {
                    for (&bj, &k) in &basis_pos {
                        let c = ech.reduced.get(r, position_of_column[bj]);
                        if c != 0 {
                            reduction.set(k, j, field.neg(c));
                        }
                    }
                }
            }
        }

        let mut alg =
            BoundAlgebra { field, quiver, ideal, paths, path_index, basis, reduction, boundary, products: Vec::new() };
        let dim = alg.basis.len();
        let mut products = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let after = &alg.paths[alg.basis[i]];
                let before = &alg.paths[alg.basis[j]];
                products.push(match Path::compose(&alg.quiver, after, before) {
                    Some(p) => alg.reduce(&p),
                    None => vec![0; dim],
                });
            }
        }
        alg.products = products;
        Ok(alg)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ideal(&self) -> &RelationIdeal {
        &self.ideal
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The normal-form basis paths.
    pub fn basis_paths(&self) -> Vec<&Path> {
        self.basis.iter().map(|&j| &self.paths[j]).collect()
    }

    pub fn basis_path(&self, k: usize) -> &Path {
        &self.paths[self.basis[k]]
    }

    /// Paths of length equal to the nilpotency degree.
    pub fn boundary_paths(&self) -> &[Path] {
        &self.boundary
    }

    /// Basis coordinates of the class of `p` (zero when `p` is long enough to vanish).
    pub fn reduce(&self, p: &Path) -> Vec<u32> {
        match self.path_index.get(p) {
            Some(&j) => self.reduction.column(j),
            None => vec![0; self.dim()],
        }
    }

    /// Basis positions of the paths from `from` to `to`, in basis order.
    pub fn basis_between(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| {
                let p = self.basis_path(k);
                p.start == from && p.end(&self.quiver) == to
            })
            .collect()
    }

    /// Structure constants: coordinates of `b_i * b_j` (`b_j` applied first).
    pub fn product(&self, i: usize, j: usize) -> &[u32] {
        &self.products[i * self.dim() + j]
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let d = self.dim();
        let mut out = vec![0u32; d];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, &c) in self.product(i, j).iter().enumerate() {
                    if c != 0 {
                        out[k] = f.add(out[k], f.mul(ab, c));
                    }
                }
            }
        }
        out
    }

    /// Coordinates of the vertex idempotent `e_v`.
    pub fn idempotent(&self, v: usize) -> Vec<u32> {
        self.reduce(&Path::trivial(v))
    }

    pub fn one(&self) -> Vec<u32> {
        let f = self.field;
        (0..self.vertex_count())
            .fold(vec![0; self.dim()], |acc, v| acc.iter().zip(self.idempotent(v)).map(|(&a, b)| f.add(a, b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn kronecker() -> BoundAlgebra {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 2, generators: vec![] }).unwrap()
    }

    fn loop_algebra() -> BoundAlgebra {
        let q = Quiver::new(&["1", "2"], &[("alpha", "1", "2"), ("beta", "2", "2")]).unwrap();
        let rel = Relation { terms: vec![(1, Path::parse(&q, "beta beta").unwrap())] };
        BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 3, generators: vec![rel] }).unwrap()
    }

    #[test]
    fn kronecker_dimension() {
        let alg = kronecker();
        let names: Vec<String> = alg.basis_paths().iter().map(|p| p.display(alg.quiver())).collect();
        assert_eq!(names, vec!["e1", "e2", "a", "b"]);
    }

    #[test]
    fn loop_dimension() {
        let alg = loop_algebra();
        // paths of length <= 2: e1 e2 alpha beta (beta alpha) (beta beta); beta^2 dies
        assert_eq!(alg.dim(), 5);
        let names: Vec<String> = alg.basis_paths().iter().map(|p| p.display(alg.quiver())).collect();
        assert!(names.contains(&"beta alpha".to_string()));
        assert!(!names.contains(&"beta beta".to_string()));
    }

    #[test]
    fn one_vertex_is_the_field() {
        let q = Quiver::new(&["1"], &[] as &[(&str, &str, &str)]).unwrap();
        let alg = BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 2, generators: vec![] }).unwrap();
        assert_eq!(alg.dim(), 1);
    }

    #[test]
    fn rejects_length_one_relations() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let rel = Relation { terms: vec![(1, Path::parse(&q, "a").unwrap()), (4, Path::parse(&q, "b").unwrap())] };
        let err = BoundAlgebra::new(f5(), q.clone(), RelationIdeal { nilpotency: 2, generators: vec![rel] });
        assert!(matches!(err, Err(Error::NotAdmissible(_))));
        let err = BoundAlgebra::new(f5(), q, RelationIdeal { nilpotency: 1, generators: vec![] });
        assert!(matches!(err, Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn commutativity_relation_identifies_paths() {
        // square 1 -> 2 -> 4, 1 -> 3 -> 4 with ba = dc
        let q =
            Quiver::new(&["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")])
                .unwrap();
        let rel = Relation { terms: vec![(1, Path::parse(&q, "b a").unwrap()), (4, Path::parse(&q, "d c").unwrap())] };
        let alg = BoundAlgebra::new(f5(), q.clone(), RelationIdeal { nilpotency: 3, generators: vec![rel] }).unwrap();
        assert_eq!(alg.dim(), 4 + 4 + 1);
        assert_eq!(alg.reduce(&Path::parse(&q, "b a").unwrap()), alg.reduce(&Path::parse(&q, "d c").unwrap()));
    }

    #[test]
    fn algebra_axioms() {
        for alg in [kronecker(), loop_algebra()] {
            let f = alg.field();
            let d = alg.dim();
            let unit = |k: usize| {
                let mut v = vec![0; d];
                v[k] = 1;
                v
            };
            let one = alg.one();
            for i in 0..d {
                assert_eq!(alg.multiply(&one, &unit(i)), unit(i));
                assert_eq!(alg.multiply(&unit(i), &one), unit(i));
                for j in 0..d {
                    for k in 0..d {
                        let left = alg.multiply(&alg.multiply(&unit(i), &unit(j)), &unit(k));
                        let right = alg.multiply(&unit(i), &alg.multiply(&unit(j), &unit(k)));
                        assert_eq!(left, right);
                    }
                }
            }
            let _ = f;
        }
    }
}
