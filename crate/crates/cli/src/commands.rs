//! Command dispatch: each command yields a report and an exit code
//! (0 ok, 1 property false, 2 error).

use std::path::Path;

use reltilt::classify::{
    enumerate_torsion_classes, f_admissible_counterexamples, is_f_presilting, is_f_tilting, verify_theorem_special,
    verify_theorem_tilting, TheoremReport, TorsionFilter,
};
use reltilt::torsion::{definitional_proj_inj, f_proj_inj, is_f_preenveloping, TorsionChecker};
use reltilt::{kronecker, Error};

use crate::bqa;
use crate::report::{AlgebraInfo, ArrowInfo, CatalogEntry, Input, Outcome, Report, ShardRow, TorsionClass, SCHEMA};
use crate::session::{CliError, Session, Settings};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Catalog,
    Resolve { module: String, length: usize },
    Presilt { module: String },
    Tilt { module: String },
    GenF { module: String },
    Torsion { filters: Vec<TorsionFilter> },
    Admissible,
    VerifyTilting,
    VerifySpecial,
    KroneckerShard { n: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Catalog => "catalog",
            Command::Resolve { .. } => "resolve",
            Command::Presilt { .. } => "presilt",
            Command::Tilt { .. } => "tilt",
            Command::GenF { .. } => "genf",
            Command::Torsion { .. } => "torsion",
            Command::Admissible => "admissible",
            Command::VerifyTilting => "verify-tilting",
            Command::VerifySpecial => "verify-special",
            Command::KroneckerShard { .. } => "kronecker-shard",
        }
    }

    pub fn args(&self) -> Vec<String> {
        match self {
            Command::Resolve { module, length } => vec![module.clone(), format!("--length={length}")],
            Command::Presilt { module } | Command::Tilt { module } | Command::GenF { module } => vec![module.clone()],
            Command::Torsion { filters } => filters.iter().map(|f| format!("--filter={}", filter_name(*f))).collect(),
            Command::KroneckerShard { n } => vec![format!("--n={n}")],
            _ => Vec::new(),
        }
    }
}

pub fn filter_name(f: TorsionFilter) -> &'static str {
    match f {
        TorsionFilter::All => "all",
        TorsionFilter::Nonzero => "nonzero",
        TorsionFilter::Preenveloping => "preenveloping",
        TorsionFilter::FPreenveloping => "f-preenveloping",
    }
}

pub fn parse_filter(s: &str) -> Result<TorsionFilter, CliError> {
    Ok(match s {
        "all" => TorsionFilter::All,
        "nonzero" => TorsionFilter::Nonzero,
        "preenveloping" => TorsionFilter::Preenveloping,
        "f-preenveloping" => TorsionFilter::FPreenveloping,
        _ => return Err(CliError::Usage(format!("unknown filter {s}"))),
    })
}

/// Parses and loads a `.bqa` file.
pub fn load(path: &Path, settings: Settings) -> Result<Session, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Session::new(bqa::parse(&text)?, settings)
}

fn header(session: &Session, cmd: &Command, file_label: &str) -> Report {
    let alg = &session.algebra;
    let q = alg.quiver();
    let catalog = session.catalog.as_ref().map(|c| {
        c.entries()
            .iter()
            .enumerate()
            .map(|(k, e)| CatalogEntry {
                index: k,
                name: session.catalog_names[k].0.clone(),
                aliases: session.catalog_names[k].1.clone(),
                dims: e.dims().to_vec(),
            })
            .collect()
    });
    Report {
        schema: SCHEMA,
        command: cmd.name().to_string(),
        input: Input {
            file: file_label.to_string(),
            args: cmd.args(),
            p: u64::from(session.field().p()),
            dim_bound: session.settings.dim_bound.clone(),
            max_res_len: session.settings.max_res_len,
            enum_cap: session.settings.limits().enum_cap,
        },
        algebra: AlgebraInfo {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowInfo {
                    name: a.name.clone(),
                    source: q.vertices()[a.source].clone(),
                    target: q.vertices()[a.target].clone(),
                })
                .collect(),
            dim: alg.dim(),
            generator: session.generator_names(),
            gamma_dim: session.ctx.gamma().dim(),
        },
        catalog,
        outcome: Outcome::Error { message: String::new() },
    }
}

/// Runs a command; errors become an `error` outcome with exit code 2.
pub fn run(session: &Session, cmd: &Command, file_label: &str) -> (Report, u8) {
    let mut report = header(session, cmd, file_label);
    match outcome(session, cmd) {
        Ok((outcome, property)) => {
            report.outcome = outcome;
            (report, if property == Some(false) { 1 } else { 0 })
        }
        Err(e) => {
            report.outcome = Outcome::Error { message: e.to_string() };
            (report, 2)
        }
    }
}

fn class(session: &Session, s: &[usize]) -> TorsionClass {
    TorsionClass { members: session.subset_names(s), indices: s.to_vec() }
}

/// Covering pairs of the inclusion order on `classes`.
pub fn hasse(classes: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let subset = |a: &[usize], b: &[usize]| a.len() < b.len() && a.iter().all(|x| b.contains(x));
    let mut out = Vec::new();
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate() {
            if subset(a, b) && !classes.iter().any(|c| subset(a, c) && subset(c, b)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn theorem(session: &Session, t: TheoremReport) -> (Outcome, Option<bool>) {
    let holds = t.bijection_holds;
    let outcome = Outcome::Theorem {
        left: t.left.iter().map(|s| session.subset_names(s)).collect(),
        right: t.right.iter().map(|s| class(session, s)).collect(),
        mapping: t.mapping,
        bijection_holds: holds,
        witnesses: t.witnesses,
    };
    (outcome, Some(holds))
}

fn outcome(session: &Session, cmd: &Command) -> Result<(Outcome, Option<bool>), CliError> {
    let ctx = &session.ctx;
    let gen_names = session.generator_names();
    Ok(match cmd {
        Command::Catalog => {
            let cat = session.catalog()?;
            let (proj, inj) = f_proj_inj(ctx, cat)?;
            let definitional_agrees = definitional_proj_inj(ctx, cat)? == (proj.clone(), inj.clone());
            let gl_dim_f = match ctx.gl_dim_f(cat.entries(), session.settings.max_res_len) {
                Ok(d) => Some(d),
                Err(Error::AboveBound(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let outcome = Outcome::Catalog {
                complete: cat.complete,
                count: cat.len(),
                f_projectives: session.subset_names(&proj),
                f_injectives: session.subset_names(&inj),
                definitional_agrees,
                gl_dim_f,
            };
            (outcome, None)
        }
        Command::Resolve { module, length } => {
            let m = session.resolve(module)?;
            let res = ctx.resolution(&m, *length)?;
            let mut terms = Vec::new();
            let mut syzygy_dims = Vec::new();
            for k in 0..=*length {
                let mut names: Vec<String> = res.term_indices(k).iter().map(|&i| gen_names[i].clone()).collect();
                names.sort();
                terms.push(names);
                syzygy_dims.push(res.omega(k).dims().to_vec());
                if res.vanishes_at(k + 1) {
                    break;
                }
            }
            let pd_f = match ctx.pd_f(&m, session.settings.max_res_len) {
                Ok(d) => Some(d),
                Err(Error::AboveBound(_)) => None,
                Err(e) => return Err(e.into()),
            };
            (Outcome::Resolution { module: module.clone(), terms, syzygy_dims, pd_f }, None)
        }
        Command::Presilt { module } => {
            let m = session.resolve(module)?;
            let v = is_f_presilting(ctx, &m)?;
            let outcome = Outcome::Presilting {
                module: module.clone(),
                via_prop_b: v.via_prop_b,
                via_gamma: v.via_gamma,
                via_homotopy: v.via_homotopy,
                agreed: v.agreed(),
                ext1_f_self: ctx.ext_f_dim(&m, &m, 1)?,
            };
            (outcome, Some(v.value()))
        }
        Command::Tilt { module } => {
            let v = is_f_tilting(ctx, &session.resolve(module)?)?;
            let outcome = Outcome::Tilting {
                module: module.clone(),
                is_tilting: v.is_tilting,
                pd_at_most_one: v.pd_at_most_one,
                self_orthogonal: v.self_orthogonal,
                coresolved: v.coresolutions.iter().map(Option::is_some).collect(),
            };
            (outcome, Some(v.is_tilting))
        }
        Command::GenF { module } => {
            let cat = session.catalog()?;
            let ch = TorsionChecker::new(ctx, cat)?;
            let closure = ch.closure_of(&session.resolve(module)?)?;
            let outcome = Outcome::GenF {
                module: module.clone(),
                is_torsion: if cat.complete { Some(ch.is_torsion(&closure)?) } else { None },
                f_preenveloping: if cat.complete { Some(is_f_preenveloping(ctx, cat, &closure)?) } else { None },
                closure: class(session, &closure),
            };
            (outcome, None)
        }
        Command::Torsion { filters } => {
            let cat = session.catalog()?;
            if !cat.complete {
                return Err(Error::IncompleteCatalog.into());
            }
            let ch = TorsionChecker::new(ctx, cat)?;
            let classes = enumerate_torsion_classes(&ch, filters)?;
            let outcome = Outcome::Torsion {
                filters: filters.iter().map(|f| filter_name(*f).to_string()).collect(),
                hasse: hasse(&classes),
                classes: classes.iter().map(|s| class(session, s)).collect(),
            };
            (outcome, None)
        }
        Command::Admissible => {
            let ch = TorsionChecker::new(ctx, session.catalog()?)?;
            let counter = f_admissible_counterexamples(&ch)?;
            let admissible = counter.is_empty();
            let outcome = Outcome::Admissible {
                admissible,
                counterexamples: counter.iter().map(|s| session.subset_names(s)).collect(),
            };
            (outcome, Some(admissible))
        }
        Command::VerifyTilting => {
            theorem(session, verify_theorem_tilting(&TorsionChecker::new(ctx, session.catalog()?)?)?)
        }
        Command::VerifySpecial => {
            let ch = TorsionChecker::new(ctx, session.catalog()?)?;
            match verify_theorem_special(&ch) {
                Err(Error::NotFAdmissible(s)) => {
                    return Err(CliError::Usage(format!(
                        "not F-admissible: {} has no relative self-extensions but is not F-presilting",
                        session.subset_names(&s).join(" + ")
                    )))
                }
                other => theorem(session, other?),
            }
        }
        Command::KroneckerShard { n } => {
            let shard = kronecker::shard(ctx, *n)?;
            let stated = shard.hom_r10_r11 == 0
                && !shard.gen_f_contains_r10
                && shard.rows.iter().all(|r| r.padded_f_exact && r.gen_f_contains_j);
            let outcome = Outcome::KroneckerShard {
                hom_r10_r11: shard.hom_r10_r11,
                gen_f_contains_r10: shard.gen_f_contains_r10,
                rows: shard
                    .rows
                    .iter()
                    .map(|r| ShardRow {
                        n: r.n,
                        hom_r_j: r.hom_r_j,
                        padded_image_dim: r.padded_image_dim,
                        padded_f_exact: r.padded_f_exact,
                        gen_f_contains_j: r.gen_f_contains_j,
                        distinct_points_f_exact: r.distinct_points_f_exact,
                        distinct_points_kernel_is_s2: r.distinct_points_kernel_is_s2,
                    })
                    .collect(),
                stated_sequences_hold: stated,
                disclaimer: shard.disclaimer.to_string(),
            };
            (outcome, Some(stated))
        }
    })
}

fn unknown(b: Option<bool>) -> String {
    b.map_or("unknown (incomplete catalog)".to_string(), |b| b.to_string())
}

/// One-paragraph plain-text rendering of a report.
pub fn summary(report: &Report) -> String {
    let set = |v: &[String]| format!("{{{}}}", v.join(","));
    match &report.outcome {
        Outcome::Catalog { count, f_projectives, f_injectives, gl_dim_f, .. } => format!(
            "{count} indecomposables; P(F) = {}; I(F) = {}; gl.dim_F = {}",
            set(f_projectives),
            set(f_injectives),
            gl_dim_f.map_or("above bound".to_string(), |d| d.to_string())
        ),
        Outcome::Resolution { module, terms, pd_f, .. } => {
            let t: Vec<String> = terms.iter().enumerate().map(|(k, t)| format!("P^-{k} = {}", t.join(" + "))).collect();
            format!("{module}: {}; pd_F = {}", t.join("; "), pd_f.map_or("above bound".to_string(), |d| d.to_string()))
        }
        Outcome::Presilting { module, via_prop_b, via_gamma, via_homotopy, agreed, .. } => {
            format!("{module} F-presilting: {via_prop_b} (gamma {via_gamma}, homotopy {via_homotopy}, agreed {agreed})")
        }
        Outcome::Tilting { module, is_tilting, .. } => format!("{module} F-tilting: {is_tilting}"),
        Outcome::GenF { module, closure, is_torsion, f_preenveloping } => format!(
            "gen_F({module}) = {}; torsion {}; F-preenveloping {}",
            set(&closure.members),
            unknown(*is_torsion),
            unknown(*f_preenveloping)
        ),
        Outcome::Torsion { classes, .. } => {
            let c: Vec<String> = classes.iter().map(|c| set(&c.members)).collect();
            format!("{} classes: {}", classes.len(), c.join(" "))
        }
        Outcome::Admissible { admissible, counterexamples } => {
            let c: Vec<String> = counterexamples.iter().map(|c| c.join("+")).collect();
            format!(
                "F-admissible: {admissible}{}",
                if c.is_empty() { String::new() } else { format!("; counterexamples {}", c.join(", ")) }
            )
        }
        Outcome::Theorem { left, right, bijection_holds, .. } => {
            format!("{} modules, {} classes, bijection {bijection_holds}", left.len(), right.len())
        }
        Outcome::KroneckerShard { stated_sequences_hold, disclaimer, .. } => {
            format!("stated sequences hold: {stated_sequences_hold}\n{disclaimer}")
        }
        Outcome::Error { message } => format!("error: {message}"),
    }
}
