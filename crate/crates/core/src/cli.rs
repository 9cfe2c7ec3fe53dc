//! The `fdz` command line.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{ClassifyOptions, ScalarRingChoice};
use crate::deform::{CyclicComponent, DeformationSpec};
use crate::eqcheck::{SearchLimits, DEFAULT_COEFF_BOUND, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::fomc::{builtin, parse_formula, Builtin, Formula};
use crate::linalg::Int;
use crate::report::{
    analyze_report, classify_report, deform_report, eqcheck_report, modelcheck_report, pf_report, to_json,
    AnalyzeReport, ClassifyReport, SCHEMA,
};
use crate::ring::FdzRing;
use crate::ringfile::parse_ring;

#[derive(Debug, Parser)]
#[command(name = "fdz", version, about = "Invariants and classification verdicts for rings of finite rank over Z")]
pub struct Cli {
    /// Seed for the tie ordering of bounded searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic ideals, predicates and bilinear-map data.
    Analyze { file: PathBuf },
    /// Classification verdicts with citations.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ScalarArg::Pf)]
        scalar_ring: ScalarArg,
    },
    /// The scalar rings P(f) and P(A) as ring files with their actions.
    Pf { file: PathBuf },
    /// Elementary equivalence and isomorphism of two rings.
    Eqcheck {
        file_a: PathBuf,
        file_b: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build an abelian deformation.
    Deform {
        file: PathBuf,
        /// One cyclic factor of N: `e=E,d=V1:V2:...` (value in ring coordinates).
        #[arg(long = "g")]
        g: Vec<String>,
        #[arg(long)]
        check_sixterm: bool,
        /// Also write the deformed ring file here.
        #[arg(long)]
        ring_out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Evaluate a formula in A/nA.
    Modelcheck {
        file: PathBuf,
        #[arg(long = "mod")]
        modulus: Int,
        /// `theta,k=N`, `phi,k=N` or `psi,k=N`.
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        builtin: Option<String>,
        #[arg(long)]
        formula: Option<PathBuf>,
    },
    /// Analyze and classify every `.ring` file in a directory.
    Corpus {
        dir: PathBuf,
        /// Print a plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScalarArg {
    Pf,
    Pa,
}

#[derive(Clone, Copy, Debug, Args)]
pub struct SearchArgs {
    /// Coefficient bound for free coordinates in isomorphism searches.
    #[arg(long, default_value_t = DEFAULT_COEFF_BOUND)]
    pub bound: u64,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
}

impl SearchArgs {
    fn limits(self, seed: u64) -> SearchLimits {
        SearchLimits { coeff_bound: self.bound, node_budget: self.budget, seed }
    }
}

fn usage(message: String) -> Error {
    Error::Parse { line: 0, message }
}

pub fn read_ring(path: &Path) -> Result<FdzRing> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_ring(&text)
}

fn parse_int(s: &str) -> Result<Int> {
    s.trim().parse().map_err(|_| usage(format!("'{s}' is not an integer")))
}

/// `e=E,d=V1:V2:…`; the value may also be written `[V1,V2,…]`.
pub fn parse_component(arg: &str) -> Result<CyclicComponent> {
    let bad = || usage(format!("expected e=E,d=VEC in --g, found '{arg}'"));
    let rest = arg.trim().strip_prefix("e=").ok_or_else(bad)?;
    let (e, d) = rest.split_once(',').ok_or_else(bad)?;
    let d = d.trim().strip_prefix("d=").ok_or_else(bad)?;
    let d = d.trim().trim_start_matches('[').trim_end_matches(']');
    let value = d
        .split(|c: char| c == ':' || c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(parse_int)
        .collect::<Result<Vec<Int>>>()?;
    Ok(CyclicComponent { order: parse_int(e)?, value })
}

/// `theta,k=N` and the like.
pub fn parse_builtin(arg: &str) -> Result<Formula> {
    let bad = || usage(format!("expected NAME,k=N in --builtin, found '{arg}'"));
    let (name, k) = arg.split_once(',').ok_or_else(bad)?;
    let k = k.trim().strip_prefix("k=").ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    Ok(builtin(name.trim().parse::<Builtin>()?, k))
}

#[derive(Serialize)]
#[serde(untagged)]
enum CorpusEntry {
    Ok { file: String, analyze: AnalyzeReport, classify: ClassifyReport },
    Failed { file: String, error: String, exit_code: i32 },
}

#[derive(Serialize)]
struct CorpusReport {
    schema: &'static str,
    kind: &'static str,
    entries: Vec<CorpusEntry>,
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let read = fs::read_dir(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ring"))
        .collect();
    files.sort();
    Ok(files)
}

fn corpus(dir: &Path, opts: ClassifyOptions, table: bool) -> Result<String> {
    let entries: Vec<CorpusEntry> = corpus_files(dir)?
        .par_iter()
        .map(|path| {
            let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            match read_ring(path) {
                Ok(r) => CorpusEntry::Ok { file, analyze: analyze_report(&r), classify: classify_report(&r, opts) },
                Err(e) => CorpusEntry::Failed { file, exit_code: e.exit_code(), error: e.to_string() },
            }
        })
        .collect();
    if !table {
        return Ok(to_json(&CorpusReport { schema: SCHEMA, kind: "corpus", entries }));
    }
    let columns = ["tame", "regular", "qfa", "super_tame", "bi_interpretable"];
    let mut out = format!("{:<16} {:>4}", "file", "rank");
    for c in columns {
        out.push_str(&format!(" {c:>16}"));
    }
    out.push('\n');
    for e in &entries {
        match e {
            CorpusEntry::Ok { file, analyze, classify } => {
                out.push_str(&format!("{file:<16} {:>4}", analyze.input.rank));
                for c in columns {
                    out.push_str(&format!(" {:>16}", classify.verdicts[c].value.as_str()));
                }
            }
            CorpusEntry::Failed { file, error, .. } => out.push_str(&format!("{file:<16} error: {error}")),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Run one command and return what goes to standard output.
pub fn run(cli: &Cli) -> Result<String> {
    let seed = cli.seed;
    match &cli.command {
        Command::Analyze { file } => Ok(to_json(&analyze_report(&read_ring(file)?))),
        Command::Classify { file, scalar_ring } => {
            let scalar_ring = match scalar_ring {
                ScalarArg::Pf => ScalarRingChoice::Pf,
                ScalarArg::Pa => ScalarRingChoice::Pa,
            };
            Ok(to_json(&classify_report(&read_ring(file)?, ClassifyOptions { scalar_ring, seed })))
        }
        Command::Pf { file } => Ok(to_json(&pf_report(&read_ring(file)?))),
        Command::Eqcheck { file_a, file_b, search } => {
            Ok(to_json(&eqcheck_report(&read_ring(file_a)?, &read_ring(file_b)?, search.limits(seed))))
        }
        Command::Deform { file, g, check_sixterm, ring_out, search } => {
            let base = read_ring(file)?;
            let spec = if g.is_empty() {
                DeformationSpec::trivial(base)
            } else {
                let g = g.iter().map(|a| parse_component(a)).collect::<Result<Vec<_>>>()?;
                DeformationSpec::new(base, g)
            };
            let report = deform_report(&spec, *check_sixterm, search.limits(seed))?;
            if let Some(path) = ring_out {
                fs::write(path, &report.ring_file).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            Ok(to_json(&report))
        }
        Command::Modelcheck { file, modulus, builtin, formula } => {
            let ring = read_ring(file)?;
            let f = match (builtin, formula) {
                (Some(b), _) => parse_builtin(b)?,
                (None, Some(path)) => {
                    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    parse_formula(&text)?
                }
                (None, None) => return Err(usage("one of --builtin or --formula is required".into())),
            };
            if *modulus <= Int::from(0) {
                return Err(usage("--mod must be positive".into()));
            }
            Ok(to_json(&modelcheck_report(&ring, modulus, &f)?))
        }
        Command::Corpus { dir, table } => corpus(dir, ClassifyOptions { seed, ..Default::default() }, *table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fomc::theta;
    use crate::linalg::{int, ints};

    #[test]
    fn components() {
        let want = CyclicComponent { order: int(2), value: ints(&[0, 1, 0]) };
        assert_eq!(parse_component("e=2,d=0:1:0").unwrap(), want);
        assert_eq!(parse_component("e=2,d=[0,1,0]").unwrap(), want);
        assert!(parse_component("e=2").is_err());
        assert!(parse_component("d=1,e=2").is_err());
    }

    #[test]
    fn builtins() {
        assert_eq!(parse_builtin("theta,k=3").unwrap(), theta(3));
        assert!(parse_builtin("theta").is_err());
        assert!(parse_builtin("omega,k=1").is_err());
    }

    #[test]
    fn clap_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
