//! Turns a parsed `.bqa` file into an algebra, a generator context and an
//! optional catalog, and resolves module names against it.

use std::sync::Arc;

use reltilt::analysis::{enumerate_indecomposables, is_indecomposable, iso_indecomposable, Catalog, Limits};
use reltilt::kronecker;
use reltilt::linalg::{Field, Matrix};
use reltilt::module::{direct_sum, injective, projective, simple, Representation};
use reltilt::quiver::{BoundAlgebra, Path, Quiver, Relation, RelationIdeal};
use reltilt::relative::FContext;
use thiserror::Error;

use crate::bqa::{AlgebraFile, CatalogDecl, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{line}:{col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Core(#[from] reltilt::Error),
    #[error("{0}")]
    Usage(String),
}

fn semantic(line: usize, col: usize, msg: impl ToString) -> CliError {
    CliError::Semantic { line, col, msg: msg.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub p: Option<u64>,
    pub dim_bound: Option<Vec<usize>>,
    pub max_res_len: usize,
    pub enum_cap: Option<u128>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { p: None, dim_bound: None, max_res_len: 4, enum_cap: None }
    }
}

impl Settings {
    pub fn limits(&self) -> Limits {
        self.enum_cap.map_or_else(Limits::default, |enum_cap| Limits { enum_cap })
    }
}

pub struct Session {
    pub file: AlgebraFile,
    pub settings: Settings,
    pub algebra: Arc<BoundAlgebra>,
    pub ctx: FContext,
    pub catalog: Option<Catalog>,
    /// Display name and aliases of each catalog entry.
    pub catalog_names: Vec<(String, Vec<String>)>,
}

impl Session {
    pub fn new(file: AlgebraFile, settings: Settings) -> Result<Self, CliError> {
        let lines = file.lines.clone();
        let p = settings.p.unwrap_or(file.p);
        let field = Field::new(p).map_err(|e| semantic(lines.field, 7, e))?;
        let arrows: Vec<(&str, &str, &str)> =
            file.arrows.iter().map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str())).collect();
        let vertices: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
        let quiver = Quiver::new(&vertices, &arrows).map_err(|e| semantic(lines.quiver, 1, e))?;
        let mut generators = Vec::new();
        for r in &file.relations {
            let mut terms = Vec::new();
            for t in r {
                let path = Path::parse(&quiver, &t.path.join(" ")).map_err(|e| semantic(lines.relations, 1, e))?;
                terms.push((field.from_i64(t.coeff), path));
            }
            generators.push(Relation { terms });
        }
        let ideal = RelationIdeal { nilpotency: file.nilpotency, generators };
        let algebra = Arc::new(BoundAlgebra::new(field, quiver, ideal).map_err(|e| semantic(lines.relations, 1, e))?);
        let names = Resolver { file: &file, algebra: &algebra };
        for m in &file.modules {
            names.named_module(&m.value.name).map_err(|e| semantic(m.line, m.col, e))?;
        }
        let mut summands = Vec::new();
        for s in &file.generator {
            summands.push(names.resolve(&s.value).map_err(|e| semantic(s.line, s.col, e))?);
        }
        let lim = settings.limits();
        let ctx = FContext::build(&algebra, summands, lim).map_err(|e| semantic(lines.generator, 1, e))?;
        let mut session =
            Session { settings, algebra: algebra.clone(), ctx, catalog: None, catalog_names: Vec::new(), file };
        let decl = match (&session.settings.dim_bound, &session.file.catalog) {
            (Some(b), _) => Some((CatalogDecl::Bound(b.clone()), 0, 0)),
            (None, Some(c)) => Some((c.value.clone(), c.line, c.col)),
            (None, None) => None,
        };
        if let Some((decl, line, col)) = decl {
            let catalog = match decl {
                CatalogDecl::Bound(b) => {
                    if b.len() != algebra.vertex_count() {
                        return Err(semantic(line, col, "catalog bound needs one entry per vertex"));
                    }
                    enumerate_indecomposables(&algebra, &b, lim).map_err(|e| semantic(line, col, e))?
                }
                CatalogDecl::Explicit(names) => {
                    let entries = names.iter().map(|n| session.resolve(n)).collect::<Result<Vec<_>, _>>()?;
                    Catalog::from_entries(&algebra, entries, false, lim).map_err(|e| semantic(line, col, e))?
                }
            };
            session.catalog_names = session.name_entries(&catalog)?;
            session.catalog = Some(catalog);
        }
        Ok(session)
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn names(&self) -> Resolver<'_> {
        Resolver { file: &self.file, algebra: &self.algebra }
    }

    pub fn resolve(&self, expr: &str) -> Result<Representation, CliError> {
        self.names().resolve(expr)
    }

    fn name_entries(&self, catalog: &Catalog) -> Result<Vec<(String, Vec<String>)>, CliError> {
        let lim = self.settings.limits();
        let mut candidates = Vec::new();
        let names = self.names();
        for n in names.candidate_names() {
            let m = names.resolve(&n)?;
            if !m.is_zero() && is_indecomposable(&m, lim)? {
                candidates.push((n, m));
            }
        }
        let mut out = Vec::new();
        for (k, e) in catalog.entries().iter().enumerate() {
            let mut names = Vec::new();
            for (n, m) in &candidates {
                if m.dims() == e.dims() && iso_indecomposable(m, e)?.is_some() {
                    names.push(n.clone());
                }
            }
            if names.is_empty() {
                names.push(format!("M{}", k + 1));
            }
            let first = names.remove(0);
            out.push((first, names));
        }
        Ok(out)
    }

    pub fn catalog(&self) -> Result<&Catalog, CliError> {
        self.catalog
            .as_ref()
            .ok_or_else(|| CliError::Usage("no catalog: add a `catalog` line or pass --dim-bound".into()))
    }

    pub fn entry_name(&self, k: usize) -> &str {
        &self.catalog_names[k].0
    }

    pub fn subset_names(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&k| self.entry_name(k).to_string()).collect()
    }

    /// Names of the generator summands as written in the file.
    pub fn generator_names(&self) -> Vec<String> {
        self.file.generator.iter().map(|s| s.value.clone()).collect()
    }
}

/// Name lookup against the modules of a file and the built-ins.
pub struct Resolver<'a> {
    pub file: &'a AlgebraFile,
    pub algebra: &'a Arc<BoundAlgebra>,
}

impl Resolver<'_> {
    pub fn named_module(&self, name: &str) -> Result<Representation, CliError> {
        let decl = &self
            .file
            .modules
            .iter()
            .find(|m| m.value.name == name)
            .ok_or_else(|| CliError::Usage(format!("unknown module {name}")))?
            .value;
        let f = self.algebra.field();
        let q = self.algebra.quiver();
        if decl.dims.len() != q.vertex_count() {
            return Err(CliError::Usage(format!("module {name}: expected {} dimensions", q.vertex_count())));
        }
        let mut maps: Vec<Option<Matrix>> = vec![None; q.arrows().len()];
        for (arrow, rows) in &decl.matrices {
            let a =
                q.arrow_index(arrow).ok_or_else(|| CliError::Usage(format!("module {name}: unknown arrow {arrow}")))?;
            let (s, t) = (decl.dims[q.arrows()[a].source], decl.dims[q.arrows()[a].target]);
            let m = if rows.is_empty() { Matrix::zeros(f, t, s) } else { Matrix::from_rows(f, rows) };
            if m.rows() != t || m.cols() != s {
                return Err(CliError::Usage(format!("module {name}: matrix {arrow} must be {t}x{s}")));
            }
            maps[a] = Some(m);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                let (s, t) = (decl.dims[q.arrows()[a].source], decl.dims[q.arrows()[a].target]);
                match m {
                    Some(m) => Ok(m),
                    None if s == 0 || t == 0 => Ok(Matrix::zeros(f, t, s)),
                    None => Err(CliError::Usage(format!("module {name}: missing matrix for {}", q.arrows()[a].name))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(self.algebra, decl.dims.clone(), maps)?)
    }

    fn builtin(&self, name: &str) -> Result<Option<Representation>, CliError> {
        if let Some(args) = name.strip_prefix("J(").and_then(|s| s.strip_suffix(')')) {
            let n = args.trim().parse().map_err(|_| CliError::Usage(format!("bad family index in {name}")))?;
            return Ok(Some(kronecker::j_module(self.algebra, n)?));
        }
        if let Some(args) = name.strip_prefix("R(").and_then(|s| s.strip_suffix(')')) {
            let bad = || CliError::Usage(format!("expected R(p0:p1,n), found {name}"));
            let (point, n) = args.split_once(',').ok_or_else(bad)?;
            let (a, b) = point.split_once(':').ok_or_else(bad)?;
            let a = a.trim().parse::<i64>().map_err(|_| bad())?;
            let b = b.trim().parse::<i64>().map_err(|_| bad())?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let f = self.algebra.field();
            return Ok(Some(kronecker::r_module(self.algebra, (f.from_i64(a), f.from_i64(b)), n)?));
        }
        let mut chars = name.chars();
        let kind = chars.next();
        let rest = chars.as_str();
        let build: fn(&Arc<BoundAlgebra>, usize) -> Representation = match kind {
            Some('P') => projective,
            Some('I') => injective,
            Some('S') => simple,
            _ => return Ok(None),
        };
        match self.algebra.quiver().vertex_index(rest) {
            Some(v) => Ok(Some(build(self.algebra, v))),
            None => Ok(None),
        }
    }

    /// A file module, a built-in, or a `+`-separated sum of those.
    pub fn resolve(&self, expr: &str) -> Result<Representation, CliError> {
        let parts: Vec<&str> = expr.split('+').map(str::trim).collect();
        if parts.len() > 1 {
            let mods = parts.iter().map(|p| self.resolve(p)).collect::<Result<Vec<_>, _>>()?;
            return Ok(direct_sum(self.algebra, &mods)?);
        }
        let name = parts[0];
        if name == "0" {
            return Ok(Representation::zero(self.algebra));
        }
        if self.file.modules.iter().any(|m| m.value.name == name) {
            return self.named_module(name);
        }
        if let Some(m) = self.builtin(name)? {
            return Ok(m);
        }
        Err(CliError::Usage(format!("unknown module {name}")))
    }

    /// Candidate names in priority order: file modules, generator summands,
    /// explicit catalog names, then `P`, `S`, `I` at each vertex.
    pub fn candidate_names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.file.modules.iter().map(|m| m.value.name.clone()).collect();
        out.extend(self.file.generator.iter().map(|s| s.value.clone()));
        if let Some(CatalogDecl::Explicit(names)) = self.file.catalog.as_ref().map(|c| &c.value) {
            out.extend(names.iter().cloned());
        }
        for kind in ["P", "S", "I"] {
            out.extend(self.algebra.quiver().vertices().iter().map(|v| format!("{kind}{v}")));
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|n| seen.insert(n.clone()));
        out
    }
}
