use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reltilt_cli::commands::{load, parse_filter, run, summary, Command};
use reltilt_cli::dot::{emit, DotTarget};
use reltilt_cli::report::Outcome;
use reltilt_cli::session::{CliError, Settings};

#[derive(Parser)]
#[command(name = "reltilt", version, about = "Relative tilting theory over bound quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Algebra description (.bqa)
    file: PathBuf,
    /// Override the field characteristic
    #[arg(long)]
    p: Option<u64>,
    /// Catalog dimension bound, e.g. 2,2
    #[arg(long, value_delimiter = ',')]
    dim_bound: Option<Vec<usize>>,
    /// Bound used for projective and global dimensions
    #[arg(long, default_value_t = 4)]
    max_res_len: usize,
    /// Largest brute-force search size
    #[arg(long)]
    enum_cap: Option<u128>,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a DOT diagram here
    #[arg(long)]
    dot: Option<PathBuf>,
    /// What the DOT diagram shows; defaults to the torsion lattice when available
    #[arg(long, value_enum)]
    dot_target: Option<Target>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    TorsionLattice,
    Quiver,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog with relative projectives and injectives
    Catalog(Common),
    /// Minimal relative projective resolution
    Resolve {
        #[command(flatten)]
        common: Common,
        module: String,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// F-presilting test by three independent methods
    Presilt {
        #[command(flatten)]
        common: Common,
        module: String,
    },
    /// F-tilting test
    Tilt {
        #[command(flatten)]
        common: Common,
        module: String,
    },
    /// gen_F closure within the catalog
    Genf {
        #[command(flatten)]
        common: Common,
        module: String,
    },
    /// Enumerate F-torsion classes
    Torsion {
        #[command(flatten)]
        common: Common,
        /// all, nonzero, preenveloping or f-preenveloping (repeatable)
        #[arg(long)]
        filter: Vec<String>,
    },
    /// F-admissibility with counterexamples
    Admissible(Common),
    /// F-tilting modules against F-preenveloping F-torsion classes
    VerifyTilting(Common),
    /// Special F-presilting modules against preenveloping F-torsion classes
    VerifySpecial(Common),
    /// Finite checks for the Kronecker family
    KroneckerShard {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

fn split(cmd: Cmd) -> Result<(Common, Command), CliError> {
    Ok(match cmd {
        Cmd::Catalog(c) => (c, Command::Catalog),
        Cmd::Resolve { common, module, length } => (common, Command::Resolve { module, length }),
        Cmd::Presilt { common, module } => (common, Command::Presilt { module }),
        Cmd::Tilt { common, module } => (common, Command::Tilt { module }),
        Cmd::Genf { common, module } => (common, Command::GenF { module }),
        Cmd::Torsion { common, filter } => {
            let mut filters = filter.iter().map(|f| parse_filter(f)).collect::<Result<Vec<_>, _>>()?;
            if filters.is_empty() {
                filters.push(reltilt::classify::TorsionFilter::All);
            }
            (common, Command::Torsion { filters })
        }
        Cmd::Admissible(c) => (c, Command::Admissible),
        Cmd::VerifyTilting(c) => (c, Command::VerifyTilting),
        Cmd::VerifySpecial(c) => (c, Command::VerifySpecial),
        Cmd::KroneckerShard { common, n } => (common, Command::KroneckerShard { n }),
    })
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn main_inner() -> Result<u8, CliError> {
    let (common, cmd) = split(Cli::parse().command)?;
    let settings = Settings {
        p: common.p,
        dim_bound: common.dim_bound.clone(),
        max_res_len: common.max_res_len,
        enum_cap: common.enum_cap,
    };
    let started = Instant::now();
    let session = load(&common.file, settings)?;
    let label = common.file.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let (report, code) = run(&session, &cmd, &label);
    if let Outcome::Error { message } = &report.outcome {
        eprintln!("error: {message}");
    }
    if common.json.as_ref().is_none_or(|p| p.as_os_str() != "-") {
        println!("{}", summary(&report));
    }
    if let Some(path) = &common.json {
        write_out(path, &report.to_json())?;
    }
    if let Some(path) = &common.dot {
        let target = match common.dot_target {
            Some(Target::TorsionLattice) => DotTarget::TorsionLattice,
            Some(Target::Quiver) => DotTarget::Quiver,
            None if matches!(cmd, Command::Torsion { .. }) => DotTarget::TorsionLattice,
            None => DotTarget::Quiver,
        };
        write_out(path, &emit(&report, target)?)?;
    }
    // timing goes to stderr so reports stay byte-identical
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    Ok(code)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
