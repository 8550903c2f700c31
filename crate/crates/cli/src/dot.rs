//! Graphviz output: the Hasse diagram of listed torsion classes, or the quiver.

use std::fmt::Write as _;

use crate::report::{Outcome, Report};
use crate::session::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotTarget {
    TorsionLattice,
    Quiver,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn emit(report: &Report, target: DotTarget) -> Result<String, CliError> {
    let mut out = String::new();
    match target {
        DotTarget::TorsionLattice => {
            let Outcome::Torsion { classes, hasse, .. } = &report.outcome else {
                return Err(CliError::Usage("report has no torsion section".into()));
            };
            out.push_str("digraph torsion_lattice {\n  rankdir=BT;\n");
            for (k, c) in classes.iter().enumerate() {
                let label = if c.members.is_empty() { "0".to_string() } else { format!("{{{}}}", c.members.join(",")) };
                let _ = writeln!(out, "  t{k} [label={}];", quote(&label));
            }
            for (a, b) in hasse {
                let _ = writeln!(out, "  t{a} -> t{b};");
            }
        }
        DotTarget::Quiver => {
            out.push_str("digraph quiver {\n");
            for v in &report.algebra.vertices {
                let _ = writeln!(out, "  {};", quote(v));
            }
            for a in &report.algebra.arrows {
                let _ = writeln!(out, "  {} -> {} [label={}];", quote(&a.source), quote(&a.target), quote(&a.name));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
