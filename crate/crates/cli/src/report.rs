//! Versioned, deterministic JSON reports.

use serde::Serialize;

pub const SCHEMA: &str = "reltilt-report/1";

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input: Input,
    pub algebra: AlgebraInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<Vec<CatalogEntry>>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Input {
    pub file: String,
    pub args: Vec<String>,
    pub p: u64,
    pub dim_bound: Option<Vec<usize>>,
    pub max_res_len: usize,
    pub enum_cap: u128,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ArrowInfo {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AlgebraInfo {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowInfo>,
    pub dim: usize,
    pub generator: Vec<String>,
    pub gamma_dim: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CatalogEntry {
    pub index: usize,
    pub name: String,
    pub aliases: Vec<String>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TorsionClass {
    pub members: Vec<String>,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Catalog {
        complete: bool,
        count: usize,
        f_projectives: Vec<String>,
        f_injectives: Vec<String>,
        definitional_agrees: bool,
        gl_dim_f: Option<usize>,
    },
    Resolution {
        module: String,
        /// Generator summands in `P^{-k}_F`, by name.
        terms: Vec<Vec<String>>,
        syzygy_dims: Vec<Vec<usize>>,
        pd_f: Option<usize>,
    },
    Presilting {
        module: String,
        via_prop_b: bool,
        via_gamma: bool,
        via_homotopy: bool,
        agreed: bool,
        ext1_f_self: usize,
    },
    Tilting {
        module: String,
        is_tilting: bool,
        pd_at_most_one: bool,
        self_orthogonal: bool,
        coresolved: Vec<bool>,
    },
    GenF {
        module: String,
        closure: TorsionClass,
        /// Both unknown for explicit catalogs.
        is_torsion: Option<bool>,
        f_preenveloping: Option<bool>,
    },
    Torsion {
        filters: Vec<String>,
        classes: Vec<TorsionClass>,
        /// Covering relations `(smaller, larger)` between listed classes.
        hasse: Vec<(usize, usize)>,
    },
    Admissible {
        admissible: bool,
        counterexamples: Vec<Vec<String>>,
    },
    Theorem {
        left: Vec<Vec<String>>,
        right: Vec<TorsionClass>,
        mapping: Vec<Option<usize>>,
        bijection_holds: bool,
        witnesses: Vec<String>,
    },
    KroneckerShard {
        hom_r10_r11: usize,
        gen_f_contains_r10: bool,
        rows: Vec<ShardRow>,
        stated_sequences_hold: bool,
        disclaimer: String,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ShardRow {
    pub n: usize,
    pub hom_r_j: usize,
    pub padded_image_dim: usize,
    pub padded_f_exact: bool,
    pub gen_f_contains_j: bool,
    pub distinct_points_f_exact: bool,
    pub distinct_points_kernel_is_s2: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
