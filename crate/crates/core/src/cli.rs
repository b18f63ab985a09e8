//! The `proddecomp` command line.
//!
//! Exit codes: 0 success, 1 negative answer (not decomposable, not verified,
//! no solutions), 2 usage or parse error, 3 a size cap was hit or the
//! working degree was too small to finish.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomp::{
    canonicalize, detect_from_points, detect_from_system, eq1_build, eq1_solve_exhaustive, generate,
    verify, CanonicalForm, DetectOptions, GenOptions,
};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::lastfall::{last_fall_degree, solve_rational, SolveMethod};
use crate::limits::Limits;
use crate::mpoly::PolySystem;
use crate::text;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Caps, default extension degree and seed shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub limits: Limits,
    pub ext: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            limits: Limits::default(),
            ext: 1,
            seed: 0,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "proddecomp", version, about = "Product decompositions and last fall degrees over finite fields")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Caps {
    /// Points or assignments an exhaustive scan may visit.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    enum_cap: u64,
    /// Monomial columns a matrix may have.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    monomial_cap: u64,
    /// Candidate subsets the functional search may try.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    subset_cap: u64,
    /// Largest filtration degree.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    degree_cap: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random decomposable system with its planted decomposition.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Extension degree the components and maps are drawn from.
        #[arg(long, default_value_t = 1)]
        ext: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Use identity maps for lambda and rho.
        #[arg(long)]
        identity: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Also write the zero set.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Detect a product decomposition of a system's zero set or of a point set.
    Detect {
        #[arg(long, conflicts_with = "points", required_unless_present = "points")]
        system: Option<PathBuf>,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        ext: Option<usize>,
        /// Try candidate functionals in reverse order.
        #[arg(long)]
        reverse: bool,
        /// Do not retry with a doubled extension degree.
        #[arg(long)]
        no_retry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a decomposition against a point set.
    Verify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
    },
    /// Last fall degree of a system.
    Lfd {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        cap: u32,
    },
    /// Rational points through the filtration.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::E)]
        method: Method,
    },
    /// Emit the unknown-coefficient system for a decomposition of G.
    Eq1 {
        #[arg(long)]
        system: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Component degree; defaults to the system degree.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        solve_exhaustive: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    E,
    Eprime,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let config = Config {
        limits: Limits {
            enumeration: cli.caps.enum_cap,
            monomials: cli.caps.monomial_cap as usize,
            subsets: cli.caps.subset_cap as usize,
            degree: cli.caps.degree_cap,
        },
        ..Config::default()
    };
    match execute(cli.command, &config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::BoundInsufficient { .. } => EXIT_CAP,
        Error::WitnessNotFound { .. } => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<PolySystem> {
    text::parse_system(&read(path)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}

fn execute(cmd: Command, config: &Config, out: &mut dyn Write) -> Result<i32> {
    let limits = &config.limits;
    match cmd {
        Command::Gen {
            n,
            d,
            p,
            m,
            ext,
            seed,
            identity,
            output,
            truth,
            points,
        } => {
            let field = Field::new(p, m, 1)?;
            let seed = seed.unwrap_or(config.seed);
            let inst = generate(n, d, &field, ext, seed, GenOptions { identity }, limits)?;
            write_file(&output, &text::write_system(&inst.g))?;
            if let Some(path) = truth {
                write_file(&path, &text::write_decomposition(&inst.truth))?;
            }
            if let Some(path) = points {
                write_file(&path, &text::write_points(&inst.w))?;
            }
            writeln!(out, "generated n={n} d={d} over {} with |W|={}", text::field_header(inst.g.field()), inst.w.len())?;
            Ok(EXIT_OK)
        }
        Command::Detect {
            system,
            points,
            ext,
            reverse,
            no_retry,
            output,
        } => {
            let opts = DetectOptions {
                reverse,
                retry: !no_retry,
            };
            let found = if let Some(path) = system {
                let g = read_system(&path)?;
                match detect_from_system(&g, ext.unwrap_or(config.ext), opts, limits)? {
                    Ok(dec) => Some(dec.canonical()?),
                    Err(reason) => {
                        writeln!(out, "not decomposable: {reason}")?;
                        None
                    }
                }
            } else {
                let path = points.expect("clap enforces one input");
                let w = text::parse_points(&read(&path)?)?;
                match detect_from_points(&w, ext.unwrap_or(config.ext), opts, limits)? {
                    Some(dec) => Some(dec.canonical()?),
                    None => {
                        writeln!(out, "not decomposable: no product structure found")?;
                        None
                    }
                }
            };
            let Some(dec) = found else {
                return Ok(EXIT_NEGATIVE);
            };
            let rendered = text::write_decomposition(&dec);
            writeln!(out, "decomposable")?;
            write!(out, "{rendered}")?;
            if let Some(path) = output {
                write_file(&path, &rendered)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { points, decomp } => {
            let w = text::parse_points(&read(&points)?)?;
            let dec = text::parse_decomposition(&read(&decomp)?)?;
            match verify(&w, &dec) {
                Ok(()) => {
                    writeln!(out, "verified")?;
                    Ok(EXIT_OK)
                }
                Err(reason) => {
                    writeln!(out, "not verified: {reason}")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Lfd { system, cap } => {
            let g = read_system(&system)?;
            let rec = last_fall_degree(&g, cap, limits)?;
            let falls: Vec<String> = rec.falls_at.iter().map(u32::to_string).collect();
            writeln!(out, "lastFall {}", rec.last_fall)?;
            writeln!(out, "fallsAt [{}]", falls.join(", "))?;
            writeln!(out, "capped {}", rec.capped)?;
            Ok(EXIT_OK)
        }
        Command::Solve { system, method } => {
            let g = read_system(&system)?;
            let method = match method {
                Method::E => SolveMethod::E,
                Method::Eprime => SolveMethod::EPrime,
            };
            let w = solve_rational(&g, method, limits)?;
            writeln!(out, "# {} rational points", w.len())?;
            for p in w.points() {
                let coords: Vec<String> = p.iter().map(|&x| g.field().format(x)).collect();
                writeln!(out, "{}", coords.join(", "))?;
            }
            Ok(if w.is_empty() { EXIT_NEGATIVE } else { EXIT_OK })
        }
        Command::Eq1 {
            system,
            output,
            d,
            solve_exhaustive,
        } => {
            let g = read_system(&system)?;
            let d = d.unwrap_or(g.max_degree() as usize);
            let s = eq1_build(&g, d, limits)?;
            let eqs = PolySystem::new(&s.field, s.num_unknowns(), s.equations.clone())?;
            let mut rendered = format!(
                "# unknowns x1..x{} are {}\n",
                s.num_unknowns(),
                s.labels.join(" ")
            );
            rendered.push_str(&text::write_system(&eqs));
            write_file(&output, &rendered)?;
            writeln!(out, "unknowns {}", s.num_unknowns())?;
            writeln!(out, "equations {}", s.num_equations())?;
            if !solve_exhaustive {
                return Ok(EXIT_OK);
            }
            let sols = eq1_solve_exhaustive(&s, limits)?;
            writeln!(out, "solutions {}", sols.len())?;
            let mut forms: Vec<(CanonicalForm, Field)> = Vec::new();
            for sol in &sols {
                let dec = sol.decomposition()?;
                let c = canonicalize(&dec);
                if !forms.iter().any(|(f, k)| f == &c && k == dec.field()) {
                    forms.push((c, dec.field().clone()));
                }
            }
            writeln!(out, "canonical forms {}", forms.len())?;
            for (k, (c, field)) in forms.iter().enumerate() {
                writeln!(out, "# form {}", k + 1)?;
                write!(out, "{}", text::write_decomposition(&c.to_decomposition(field)?))?;
            }
            Ok(if sols.is_empty() { EXIT_NEGATIVE } else { EXIT_OK })
        }
    }
}
