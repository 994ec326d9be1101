//! Command-line front end: catalog queries, model checking, reduction,
//! unification searches and the verification scenarios.
//!
//! Boolean answers are printed as words (true/false/inconclusive), never
//! encoded in the exit code. Exit 0 on success, 2 on usage or parse errors,
//! 3 when a guard or search budget was exceeded.

use clap::{Parser, Subcommand};
use std::process::ExitCode;
use std::sync::Arc;
use ultab_core::catalog::{Catalog, Namer};
use ultab_core::classifier::{self, KnownResultDb, UnifType};
use ultab_core::formulas::{parse_formula, parse_substitution, Substitution};
use ultab_core::frames::Frame;
use ultab_core::logics::{LogicError, LogicSpec};
use ultab_core::models::Model;
use ultab_core::morphisms;
use ultab_core::unification::{self, Refutation, SearchOutcome, SearchParams};
use ultab_core::verify;
use ultab_core::{dot, text};

mod certfile;

#[derive(Parser)]
#[command(name = "ultab", version, about = "Finite Kripke-model engine for tabular intermediate logics")]
struct Cli {
    /// Extra frame definitions (frame blocks) loaded into the catalog.
    #[arg(long, global = true)]
    catalog_file: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog names, or print one frame.
    Catalog { name: Option<String> },
    /// Compute the closure of a frame family under generated subframes and
    /// p-morphic images.
    Sm {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
    },
    /// Does the logic of the given frames omit a frame?
    Omits {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        frame: String,
    },
    /// Classification report (JSON).
    Classify {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
    },
    /// Label the whole extension lattice (counts plus one line per logic).
    Census {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        /// Restrict to the single-frame (Halldén-complete) extensions.
        #[arg(long)]
        h_complete: bool,
    },
    /// Evaluate a formula on a model (at a node, or everywhere).
    Force {
        /// Model file (may also define frames).
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// Node name; default prints every node.
        #[arg(long)]
        node: Option<String>,
    },
    /// Reduce a model to its p-irreducible reduct.
    Reduce {
        #[arg(long)]
        model: String,
    },
    /// Are two models equivalent (same theories)?
    Equiv {
        #[arg(long)]
        model: String,
        #[arg(long)]
        other: String,
    },
    /// Apply a substitution to a model, printing the resulting model.
    Sigma {
        #[arg(long)]
        subst: String,
        #[arg(long)]
        model: String,
    },
    /// Is the substitution a unifier of the formula in the logic?
    Unifies {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        subst: String,
        #[arg(long)]
        formula: String,
    },
    /// Is the formula projective in the logic (extension property)?
    Projective {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        formula: String,
    },
    /// Is tau more general than sigma?
    MoreGeneral {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Filtering join of two unifiers (requires the weak excluded middle).
    FilterJoin {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        sigma: String,
        /// Index of the fresh variable; defaults to one past both targets.
        #[arg(long)]
        fresh: Option<u32>,
    },
    /// Search for a projective-approximation retraction for sigma.
    Retraction {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Exhaustively refute (or find) a width-m certificate for sigma.
    Refute {
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
        #[arg(long)]
        sigma: String,
        #[arg(short, long)]
        m: u32,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Find a certificate and print it, or check a stored one.
    Certificate {
        #[arg(long, value_delimiter = ',')]
        frames: Vec<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(short, long)]
        m: Option<u32>,
        /// Check a stored certificate file instead of searching.
        #[arg(long)]
        check: Option<String>,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Run a named verification scenario.
    Verify {
        scenario: String,
        #[arg(short, long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// DOT export of a frame, a model file, or an extension lattice.
    Dot {
        /// Catalog frame name.
        #[arg(long)]
        frame: Option<String>,
        /// Model file.
        #[arg(long)]
        model: Option<String>,
        /// Frames generating a logic whose lattice is drawn.
        #[arg(long, value_delimiter = ',')]
        lattice: Vec<String>,
    },
}

/// Errors sorted by exit code.
enum CliError {
    /// Exit 2: bad input.
    Usage(String),
    /// Exit 3: guard or budget exceeded.
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn from_logic_error(e: LogicError) -> CliError {
    match e {
        LogicError::SizeCapExceeded(_)
        | LogicError::FrameTooLarge(..)
        | LogicError::CharacterGuard(_)
        | LogicError::LatticeGuard(..) => CliError::Guard(e.to_string()),
        LogicError::Model(ref m) if matches!(m, ultab_core::models::ModelError::ExplosionGuard { .. }) => {
            CliError::Guard(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn from_unif_error(e: unification::UnifError) -> CliError {
    match e {
        unification::UnifError::Logic(le) => from_logic_error(le),
        other => CliError::Usage(other.to_string()),
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Reads `@file` arguments from disk, passes other strings through.
fn load_arg(arg: &str) -> Result<String, CliError> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_file_or_inline(arg: &str) -> Result<String, CliError> {
    // Model and map arguments accept either a path or inline text.
    if arg.contains('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))
    }
}

struct Ctx {
    catalog: Catalog,
}

impl Ctx {
    fn new(catalog_file: Option<&str>) -> Result<Ctx, CliError> {
        let mut catalog = Catalog::standard();
        if let Some(path) = catalog_file {
            let srcs =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
            catalog.extend_from_text(&srcs).map_err(usage)?;
        }
        Ok(Ctx { catalog })
    }

    /// Resolves frame names; `@file` reads a `logic { frames: ...; }` block
    /// (plus any frame blocks defined alongside it).
    fn frames(&self, names: &[String]) -> Result<Vec<Arc<Frame>>, CliError> {
        let mut out = Vec::new();
        for n in names {
            if let Some(path) = n.strip_prefix('@') {
                let src = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
                let local: Vec<(String, Frame)> = text::parse_frames(&src).map_err(usage)?;
                let (_, listed) = text::parse_logic_spec(&src).map_err(usage)?;
                for name in listed {
                    let frame = local
                        .iter()
                        .find(|(ln, _)| *ln == name)
                        .map(|(_, f)| Arc::new(f.clone()))
                        .map_or_else(|| self.catalog.lookup(&name).map_err(usage), Ok)?;
                    out.push(frame);
                }
            } else {
                out.push(self.catalog.lookup(n).map_err(usage)?);
            }
        }
        Ok(out)
    }

    fn logic(&self, names: &[String]) -> Result<LogicSpec, CliError> {
        LogicSpec::new(self.frames(names)?).map_err(from_logic_error)
    }

    fn subst(&self, arg: &str) -> Result<Substitution, CliError> {
        parse_substitution(&load_arg(arg)?).map_err(usage)
    }

    /// Parses a model; frame blocks in the same source shadow the catalog.
    fn model(&self, arg: &str) -> Result<(String, Model), CliError> {
        let src = load_file_or_inline(arg)?;
        let local: Vec<(String, Frame)> = text::parse_frames(&src).map_err(usage)?;
        let resolve = |name: &str| -> Option<Arc<Frame>> {
            local
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, f)| Arc::new(f.clone()))
                .or_else(|| self.catalog.lookup(name).ok())
        };
        text::parse_model(&src, resolve).map_err(usage)
    }
}

fn print_bool(b: bool) {
    println!("{}", if b { "true" } else { "false" });
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::new(cli.catalog_file.as_deref())?;
    let namer = Namer::new(&ctx.catalog);
    match cli.command {
        Command::Catalog { name } => match name {
            Some(n) => {
                let f = ctx.catalog.lookup(&n).map_err(usage)?;
                println!("{}", text::format_frame(&n, &f));
                println!("# depth {}, {} nodes", f.depth(), f.len());
            }
            None => {
                for n in ctx.catalog.names() {
                    println!("{n}");
                }
                println!("# plus parametric L<d>, F<n>, R<n>");
            }
        },
        Command::Sm { frames } => {
            let l = ctx.logic(&frames)?;
            let names: Vec<String> = l.closure().iter().map(|f| namer.name(f)).collect();
            println!("{}", names.join(" "));
        }
        Command::Omits { frames, frame } => {
            let l = ctx.logic(&frames)?;
            let g = ctx.catalog.lookup(&frame).map_err(usage)?;
            print_bool(l.omits(&g));
        }
        Command::Classify { frames } => {
            let l = ctx.logic(&frames)?;
            let db = KnownResultDb::standard();
            let report = classifier::classify(&db, &l);
            println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
        }
        Command::Census { frames, h_complete } => {
            let l = ctx.logic(&frames)?;
            let db = KnownResultDb::standard();
            let rep = if h_complete {
                classifier::h_complete_census(&db, &l).map_err(from_logic_error)?
            } else {
                classifier::census(&db, &l).map_err(from_logic_error)?
            };
            println!(
                "{} logics, {} nullary, {} hereditary finitary, {} finitary non-hereditary",
                rep.total,
                rep.nullary,
                rep.hereditary,
                rep.finitary_non_hereditary.len()
            );
            for e in &rep.entries {
                let nullary = match e.db_result {
                    UnifType::Nullary => "true",
                    UnifType::Unknown => "unknown",
                    _ => "false",
                };
                println!(
                    "{}: frames=[{}] nullary={}{}",
                    e.generators.join(","),
                    e.generators.join(","),
                    nullary,
                    if e.figure_sourced { " figure-sourced" } else { "" }
                );
            }
        }
        Command::Force { model, formula, node } => {
            let (_, m) = ctx.model(&model)?;
            let f = parse_formula(&formula).map_err(usage)?;
            match node {
                Some(n) => {
                    let w = m.frame().node(&n).map_err(usage)?;
                    print_bool(m.forces_at(w, &f).map_err(usage)?);
                }
                None => {
                    for w in 0..m.len() {
                        println!(
                            "{}: {}",
                            m.frame().name_of(w),
                            m.forces_at(w, &f).map_err(usage)?
                        );
                    }
                }
            }
        }
        Command::Reduce { model } => {
            let (name, m) = ctx.model(&model)?;
            let (red, _) = morphisms::reduce(&m);
            let frame_name = format!("{name}_reduced_frame");
            println!("{}", text::format_frame(&frame_name, red.frame()));
            println!(
                "{}",
                text::format_model(&format!("{name}_reduced"), &frame_name, &red)
            );
        }
        Command::Equiv { model, other } => {
            let (_, a) = ctx.model(&model)?;
            let (_, b) = ctx.model(&other)?;
            print_bool(morphisms::equivalent(&a, &b).map_err(usage)?);
        }
        Command::Sigma { subst, model } => {
            let s = ctx.subst(&subst)?;
            let (name, m) = ctx.model(&model)?;
            let sm = unification::sigma_model(&s, &m).map_err(from_unif_error)?;
            println!("{}", text::format_model(&format!("{name}_sigma"), "same", &sm));
        }
        Command::Unifies { frames, subst, formula } => {
            let l = ctx.logic(&frames)?;
            let s = ctx.subst(&subst)?;
            let f = parse_formula(&formula).map_err(usage)?;
            print_bool(unification::is_unifier(&l, &s, &f).map_err(from_unif_error)?);
        }
        Command::Projective { frames, formula } => {
            let l = ctx.logic(&frames)?;
            let f = parse_formula(&formula).map_err(usage)?;
            print_bool(unification::is_projective_formula(&l, &f).map_err(from_unif_error)?);
        }
        Command::MoreGeneral { frames, tau, sigma, budget, threads } => {
            let l = ctx.logic(&frames)?;
            let t = ctx.subst(&tau)?;
            let s = ctx.subst(&sigma)?;
            let params = SearchParams { budget, threads };
            match unification::more_general(&l, &t, &s, params).map_err(from_unif_error)? {
                SearchOutcome::Found(_) => println!("true"),
                SearchOutcome::Exhausted => println!("false"),
                SearchOutcome::OutOfBudget => println!("inconclusive"),
            }
        }
        Command::FilterJoin { frames, eps, sigma, fresh } => {
            let l = ctx.logic(&frames)?;
            let e = ctx.subst(&eps)?;
            let s = ctx.subst(&sigma)?;
            let mu = unification::filtering_join(&l, &e, &s, fresh).map_err(from_unif_error)?;
            println!("{mu}");
        }
        Command::Retraction { frames, sigma, budget, threads } => {
            let l = ctx.logic(&frames)?;
            let s = ctx.subst(&sigma)?;
            let params = SearchParams { budget, threads };
            match unification::find_retraction(&l, &s, params).map_err(from_unif_error)? {
                SearchOutcome::Found(g) => {
                    println!("found");
                    print!("{}", certfile::render_sem_subst(&l, "g", &g).map_err(from_unif_error)?);
                }
                SearchOutcome::Exhausted => println!("none"),
                SearchOutcome::OutOfBudget => println!("inconclusive"),
            }
        }
        Command::Refute { frames, sigma, m, budget, threads } => {
            let l = ctx.logic(&frames)?;
            let s = ctx.subst(&sigma)?;
            let params = SearchParams { budget, threads };
            match unification::refute_finitary_at(&l, &s, m, params).map_err(from_unif_error)? {
                Refutation::Refuted => println!("refuted"),
                Refutation::CertificateFound(_) => println!("certificate"),
                Refutation::Inconclusive => println!("inconclusive"),
            }
        }
        Command::Certificate { frames, sigma, m, check, budget, threads } => match check {
            Some(path) => {
                let src = std::fs::read_to_string(&path)
                    .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
                let (l, s, cert) = certfile::parse(&ctx, &src)?;
                let ok = unification::check_main_certificate(&l, &s, &cert)
                    .map_err(from_unif_error)?;
                print_bool(ok);
            }
            None => {
                let (Some(sigma), Some(m)) = (sigma, m) else {
                    return Err(usage("certificate search needs --sigma and --m"));
                };
                if frames.is_empty() {
                    return Err(usage("certificate search needs --frames"));
                }
                let l = ctx.logic(&frames)?;
                let s = ctx.subst(&sigma)?;
                let params = SearchParams { budget, threads };
                match unification::find_certificate(&l, &s, m, params).map_err(from_unif_error)? {
                    SearchOutcome::Found(cert) => {
                        print!("{}", certfile::render(&ctx, &frames, &l, &s, &cert).map_err(from_unif_error)?);
                    }
                    SearchOutcome::Exhausted => println!("none"),
                    SearchOutcome::OutOfBudget => println!("inconclusive"),
                }
            }
        },
        Command::Verify { scenario, m, budget, threads } => {
            let params = SearchParams { budget, threads };
            let names: Vec<&str> = if scenario == "all" {
                verify::SCENARIOS.to_vec()
            } else {
                vec![scenario.as_str()]
            };
            for name in names {
                match verify::run_scenario(name, m, params) {
                    Ok(rep) => print!("{}", rep.render()),
                    Err(verify::VerifyError::Inconclusive) => {
                        return Err(CliError::Guard(
                            "scenario inconclusive: budget exceeded".into(),
                        ))
                    }
                    Err(verify::VerifyError::UnknownScenario(s)) => {
                        return Err(usage(format!(
                            "unknown scenario `{s}`; known: all, {}",
                            verify::SCENARIOS.join(", ")
                        )))
                    }
                    Err(e) => return Err(usage(e)),
                }
            }
        }
        Command::Dot { frame, model, lattice } => {
            if let Some(name) = frame {
                let f = ctx.catalog.lookup(&name).map_err(usage)?;
                print!("{}", dot::frame_dot(&name, &f));
            } else if let Some(path) = model {
                let (name, m) = ctx.model(&path)?;
                print!("{}", dot::model_dot(&name, &m));
            } else if !lattice.is_empty() {
                let l = ctx.logic(&lattice)?;
                let db = KnownResultDb::standard();
                let lat = l.extension_lattice().map_err(from_logic_error)?;
                let census = classifier::census(&db, &l).map_err(from_logic_error)?;
                let labels: Vec<String> = census
                    .entries
                    .iter()
                    .map(|e| e.generators.join(","))
                    .collect();
                let nullary: Vec<bool> = census
                    .entries
                    .iter()
                    .map(|e| e.db_result == UnifType::Nullary)
                    .collect();
                print!("{}", dot::lattice_dot("lattice", &lat, &labels, &nullary));
            } else {
                return Err(usage("dot needs --frame, --model or --lattice"));
            }
        }
    }
    Ok(())
}
