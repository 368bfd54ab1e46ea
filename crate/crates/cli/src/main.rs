use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alcq::encoder::{encode, make_torus_model, translate_to_alcni, TilingSystem, TorusTiling};
use alcq::interp::{
    enumerate_model_with_budget, eval_concept, parse_interpretation, DEFAULT_STEP_BUDGET,
};
use alcq::normalize::nnf;
use alcq::syntax::{parse_concept, Concept, Signature};
use alcq::tableau::{classify, is_satisfiable_with, subsumes_with, SearchConfig};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

const STACK_BYTES: usize = 512 * 1024 * 1024;

#[derive(Parser, Debug)]
#[command(
    name = "alcq",
    version,
    about = "Reasoner for ALCQ with role composition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SearchFlags {
    /// Maximum number of rule applications.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    limit_steps: Option<u64>,
    /// Maximum number of individuals in any ABox.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    limit_individuals: Option<u64>,
    /// Explore alternatives on several threads.
    #[arg(long, conflicts_with = "deterministic")]
    parallel: bool,
    /// Sequential search with reproducible output.
    #[arg(long)]
    deterministic: bool,
}

impl SearchFlags {
    fn config(&self, trace: bool) -> SearchConfig {
        let mut cfg = SearchConfig {
            trace,
            parallel: self.parallel && !self.deterministic,
            ..SearchConfig::default()
        };
        if let Some(n) = self.limit_steps {
            cfg.max_steps = n;
        }
        if let Some(n) = self.limit_individuals {
            cfg.max_individuals = usize::try_from(n).unwrap_or(usize::MAX);
        }
        cfg
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability; exit 0 for SAT, 1 for UNSAT.
    Sat {
        /// Concept expression, or "-" for stdin.
        concept: String,
        /// Write the canonical model here.
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
        /// Print every rule application.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Decide whether the first concept is subsumed by the second; exit 0 for YES.
    Subsumes {
        sub: String,
        sup: String,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Compute the subsumption hierarchy of `Name = concept` lines.
    Classify {
        /// File path, or "-" for stdin.
        file: String,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Print the negation normal form.
    Nnf { concept: String },
    /// Push inverses inward and unfold compositions under value restrictions.
    Translate { concept: String },
    /// Print the start concept for a tiling system.
    EncodeDomino {
        /// Tiling system file, or "-" for stdin.
        tiles: String,
        /// Print the translated form.
        #[arg(long)]
        translate: bool,
        /// Write the 3x3 torus model here.
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
        /// Torus tiling for the model; defaults to the first tile everywhere.
        #[arg(long, value_name = "PATH", requires = "model")]
        tiling: Option<PathBuf>,
    },
    /// Evaluate a concept on an interpretation file; exit 0 iff every named individual is in it.
    CheckModel {
        interpretation: String,
        concept: String,
    },
    /// Search for a finite model by enumeration; exit 0 if one is found.
    Enumerate {
        concept: String,
        #[arg(long, value_name = "N", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_domain: u64,
        /// Step budget shared by all domain sizes.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_STEP_BUDGET)]
        limit_steps: u64,
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
    },
}

fn read_source(arg: &str, what: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else if what == "expression" {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {what} {arg}"))
    }
}

fn concept_arg(arg: &str) -> Result<Concept> {
    let text = read_source(arg, "expression")?;
    parse_concept(text.trim()).with_context(|| format!("parsing {:?}", text.trim()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_named(text: &str) -> Result<Vec<(String, Concept)>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((name, body)) = line.split_once('=') else {
            bail!("line {}: expected 'Name = concept'", k + 1);
        };
        let c = parse_concept(body.trim()).with_context(|| format!("line {}", k + 1))?;
        out.push((name.trim().to_string(), c));
    }
    Ok(out)
}

fn verdict(out: &mut impl Write, yes: bool, t: &str, f: &str) -> Result<ExitCode> {
    writeln!(out, "{}", if yes { t } else { f })?;
    Ok(if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Result<ExitCode> {
    match cli.command {
        Command::Sat {
            concept,
            model,
            trace,
            search,
        } => {
            let c = concept_arg(&concept)?;
            let v = is_satisfiable_with(&c, &search.config(trace))?;
            let code = verdict(out, v.satisfiable, "SAT", "UNSAT")?;
            for line in v.trace.iter().flatten() {
                writeln!(out, "{line}")?;
            }
            if let (Some(path), Some(m)) = (model, &v.model) {
                write_file(&path, &m.to_string())?;
            }
            Ok(code)
        }
        Command::Subsumes { sub, sup, search } => {
            if sub == "-" && sup == "-" {
                bail!("only one argument may read stdin");
            }
            let (c, d) = (concept_arg(&sub)?, concept_arg(&sup)?);
            let yes = subsumes_with(&c, &d, &search.config(false))?;
            verdict(out, yes, "YES", "NO")
        }
        Command::Classify { file, search } => {
            let named = parse_named(&read_source(&file, "file")?)?;
            let h = classify(&named, &search.config(false))?;
            write!(out, "{h}")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Nnf { concept } => {
            writeln!(out, "{}", nnf(&concept_arg(&concept)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { concept } => {
            writeln!(out, "{}", translate_to_alcni(&concept_arg(&concept)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EncodeDomino {
            tiles,
            translate,
            model,
            tiling,
        } => {
            let ts = TilingSystem::parse(&read_source(&tiles, "tiling system")?)?;
            let enc = encode(&ts)?;
            let e_d = if translate {
                translate_to_alcni(&enc.e_d)
            } else {
                enc.e_d
            };
            writeln!(out, "{e_d}")?;
            if let Some(path) = model {
                let t = match tiling {
                    Some(p) => TorusTiling::parse(
                        &fs::read_to_string(&p)
                            .with_context(|| format!("reading {}", p.display()))?,
                    )?,
                    None => TorusTiling::constant(&ts.tiles[0]),
                };
                write_file(&path, &make_torus_model(&ts, &t)?.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckModel {
            interpretation,
            concept,
        } => {
            if interpretation == "-" && concept == "-" {
                bail!("only one argument may read stdin");
            }
            let i = parse_interpretation(&read_source(&interpretation, "interpretation")?)?;
            let c = concept_arg(&concept)?;
            let ext = eval_concept(&i, &c);
            writeln!(out, "{{{}}}", i.names(&ext).join(", "))?;
            let mut all_in = !ext.is_empty();
            for (name, e) in i.assignment() {
                let member = ext.contains(e);
                writeln!(out, "{name}: {}", if member { "in" } else { "not in" })?;
                all_in &= member;
            }
            Ok(if all_in {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Enumerate {
            concept,
            max_domain,
            limit_steps,
            model,
        } => {
            let c = concept_arg(&concept)?;
            let bound = usize::try_from(max_domain)?;
            let found = enumerate_model_with_budget(&c, &Signature::default(), bound, limit_steps)?;
            match found {
                Some(m) => {
                    writeln!(out, "MODEL {}", m.domain_size())?;
                    match model {
                        Some(path) => write_file(&path, &m.to_string())?,
                        None => write!(out, "{m}")?,
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => verdict(out, false, "", &format!("NO MODEL up to {bound}")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || {
            let stdout = io::stdout();
            let mut out = io::BufWriter::new(stdout.lock());
            let result = run(cli, &mut out);
            let flushed = out.flush();
            result.and_then(|code| flushed.map(|_| code).map_err(Into::into))
        });
    let joined = match worker {
        Ok(handle) => handle.join(),
        Err(e) => {
            eprintln!("error: cannot start worker thread: {e}");
            return ExitCode::from(2);
        }
    };
    match joined {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
