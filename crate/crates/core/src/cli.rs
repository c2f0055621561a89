//! The `fullgroup` command line.
//!
//! Every subcommand prints the canonical JSON of its result on the first
//! line, then a short human-readable table. Exit codes: 0 success, 1 domain
//! error, 2 parse error.
//!
//! Object arguments are file paths holding the shared JSON format, or inline
//! literals:
//!
//! - sets: `0,10,111`
//! - tables: `0->1,1->0`
//! - leaf perms: a table literal or file, or `{"level":L,"perm":[..]}`
//! - permutations: image lists `1,2,0`
//! - point-valued step functions: `0:1,1:2`

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::census::{census, en_surrogate_check};
use crate::conjugate::conjugate_tuples;
use crate::cylinder::CylinderSet;
use crate::densify::{densify, psi_embed};
use crate::equidecompose::{equidecompose_onto, pre_three_cycle, prec, three_cycle};
use crate::error::{Error, Result};
use crate::l0::{orbit_member, phi_embed, FiniteGroupSpec, OrbitMembership, StepFn};
use crate::perm::Perm;
use crate::rational::{format_rational, parse_rational, Lambda, Rational};
use crate::selftest::{run_all, run_suite, DEFAULT_SEED};
use crate::table::{odometer, FullMap, LeafPerm, TableMap};
use crate::word::{set_max_depth, Word};

#[derive(Parser, Debug)]
#[command(name = "fullgroup", version, about = "Exact computations with dyadic odometer full-group elements")]
pub struct Cli {
    /// Largest word length any operation may create.
    #[arg(long, global = true, value_name = "D")]
    pub max_depth: Option<u8>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct LambdaArg {
    /// Bernoulli parameter p/q in (0, 1): the mass of digit 0.
    #[arg(long, default_value = "1/2", value_parser = parse_lambda)]
    pub lambda: Lambda,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measure and Kraft sum of a clopen set.
    Measure {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        set: String,
    },
    /// Composition `left ∘ right` of two tables.
    Compose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Uniform distance between two total maps.
    Du {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Radon-Nikodym cocycle of a table, piece by piece.
    Cocycle {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        map: String,
    },
    /// Support of a total map and its measure.
    Support {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        map: String,
    },
    /// The adding machine cut at a depth.
    Odometer {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long)]
        level: u8,
    },
    /// Orbit census of a tuple of leaf permutations.
    Census {
        #[command(flatten)]
        lambda: LambdaArg,
        /// Level to refine every generator to; defaults to the deepest one.
        #[arg(long)]
        level: Option<u8>,
        #[arg(long, required = true, num_args = 1..)]
        tuple: Vec<String>,
    },
    /// Whether every transitive type of size at most `s` occurs `multiplicity` times.
    EnCheck {
        #[arg(long)]
        level: Option<u8>,
        #[arg(long, required = true, num_args = 1..)]
        tuple: Vec<String>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        multiplicity: usize,
    },
    /// Conjugate one tuple onto another with the same census types.
    Conjugate {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "1/16", value_parser = parse_rational_arg)]
        epsilon: Rational,
        #[arg(long)]
        level: Option<u8>,
        #[arg(long = "source", required = true, num_args = 1..)]
        source: Vec<String>,
        #[arg(long = "target", required = true, num_args = 1..)]
        target: Vec<String>,
    },
    /// Map set A onto set B, leaving at most epsilon uncovered.
    Equidecompose {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "1/8", value_parser = parse_rational_arg)]
        epsilon: Rational,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// Whether A is equivalent to a subset of B under every non-singular measure.
    Prec {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// The 3-cycle built from a pre-3-cycle (the canonical one by default).
    ThreeCycle {
        #[arg(long, requires = "psi")]
        phi: Option<String>,
        #[arg(long, requires = "phi")]
        psi: Option<String>,
    },
    /// Embed a permutation of 2^l points as a leaf map.
    Psi {
        #[arg(long)]
        perm: String,
    },
    /// Embed a leaf permutation as a permutation-valued step function.
    Phi {
        #[arg(long)]
        map: String,
        #[arg(long)]
        level: Option<u8>,
    },
    /// Implant every small transitive type on a light invariant set.
    Densify {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "1/16", value_parser = parse_rational_arg)]
        epsilon: Rational,
        #[arg(long)]
        level: Option<u8>,
        #[arg(long, required = true, num_args = 1..)]
        tuple: Vec<String>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        multiplicity: usize,
    },
    /// Decide whether a step function takes values in the orbit of a point.
    OrbitMember {
        /// Step function, `word:value,...` or a file.
        #[arg(long)]
        f: String,
        /// Degree of the permutation group.
        #[arg(long)]
        degree: usize,
        /// Group generators as image lists; none means the symmetric group.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long)]
        y0: usize,
    },
    /// Run the property suites and print a pass/fail matrix.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run one suite only.
        #[arg(long)]
        suite: Option<u8>,
    },
}

fn parse_lambda(s: &str) -> std::result::Result<Lambda, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_parse() {
                2
            } else {
                1
            }
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let json = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{json}").map_err(io_error)
}

fn io_error(e: std::io::Error) -> Error {
    Error::Precondition(format!("write failed: {e}"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(io_error)?
    };
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(d) = cli.max_depth {
        set_max_depth(d)?;
    }
    match &cli.command {
        Command::Measure { lambda, set } => {
            let set = load_set(set)?;
            let (mu, kraft) = (set.mu(&lambda.lambda), set.kraft());
            emit(out, &serde_json::json!({
                "set": set,
                "mu": format_rational(&mu),
                "kraft": format_rational(&kraft),
            }))?;
            say!(out, "set    {set}");
            say!(out, "mu     {}  (lambda = {})", format_rational(&mu), lambda.lambda);
            say!(out, "kraft  {}", format_rational(&kraft));
        }
        Command::Compose { left, right } => {
            let h = load_table(left)?.compose(&load_table(right)?)?;
            emit(out, &h)?;
            print_pairs(out, &h)?;
        }
        Command::Du { lambda, left, right } => {
            let d = crate::table::du(&load_table(left)?, &load_table(right)?, &lambda.lambda)?;
            emit(out, &format_rational(&d))?;
            say!(out, "du = {}  (lambda = {})", format_rational(&d), lambda.lambda);
        }
        Command::Cocycle { lambda, map } => {
            let f = load_table(map)?;
            let values: Vec<(Word, String)> = f
                .rn_cocycle(&lambda.lambda)
                .into_iter()
                .map(|(w, r)| (w, format_rational(&r)))
                .collect();
            emit(out, &values)?;
            say!(out, "{:<20} rn", "piece");
            for (w, r) in &values {
                say!(out, "{:<20} {r}", show(w));
            }
        }
        Command::Support { lambda, map } => {
            let f = FullMap::new(load_table(map)?)?;
            let s = f.support();
            let mu = s.mu(&lambda.lambda);
            emit(out, &serde_json::json!({ "support": s, "mu": format_rational(&mu) }))?;
            say!(out, "support {s}");
            say!(out, "mu      {}", format_rational(&mu));
        }
        Command::Odometer { lambda, level } => {
            let o = odometer(*level)?;
            emit(out, &o)?;
            print_pairs(out, &o.table)?;
            say!(out, "undefined on {}, missing image {}", o.defect_dom, o.defect_rng);
            say!(out, "defect mass {}", format_rational(&o.defect_mass(&lambda.lambda)));
        }
        Command::Census { lambda, level, tuple } => {
            let t = load_tuple(tuple, *level)?;
            let c = census(&t, &lambda.lambda)?;
            emit(out, &c)?;
            say!(out, "level {}, lambda {}", c.level, c.lambda);
            say!(out, "{:<24} {:>6} {:>16}  blocks", "type", "count", "mass");
            for e in &c.entries {
                say!(
                    out,
                    "{:<24} {:>6} {:>16}  {:?}",
                    e.ty.encoding(),
                    e.count,
                    format_rational(&e.mass),
                    e.blocks
                );
            }
        }
        Command::EnCheck { level, tuple, s, multiplicity } => {
            let t = load_tuple(tuple, *level)?;
            let r = en_surrogate_check(&t, *s, *multiplicity)?;
            emit(out, &r)?;
            say!(out, "passes {}", r.passes);
            for m in &r.missing {
                say!(out, "missing {:<20} have {} need {}", m.ty.encoding(), m.have, m.need);
            }
        }
        Command::Conjugate { lambda, epsilon, level, source, target } => {
            let s = load_tuple(source, *level)?;
            let t = load_tuple(target, *level)?;
            let level = s[0].level().max(t[0].level());
            let s = refine_all(&s, level)?;
            let t = refine_all(&t, level)?;
            let r = conjugate_tuples(&s, &t, &lambda.lambda, epsilon)?;
            emit(out, &r)?;
            say!(out, "exact {}, {} pairs", r.exact, r.map.len());
            for (i, d) in r.defects.iter().enumerate() {
                say!(out, "defect {i}: {}", format_rational(d));
            }
            say!(out, "bound {}", format_rational(&r.defect_bound));
        }
        Command::Equidecompose { lambda, epsilon, a, b } => {
            let (a, b) = (load_set(a)?, load_set(b)?);
            let r = equidecompose_onto(&a, &b, &lambda.lambda, epsilon)?;
            emit(out, &r)?;
            say!(out, "exact {}, level {}, {} pairs", r.is_exact(), r.level, r.map.len());
            say!(out, "leftover {}", format_rational(&r.leftover(&lambda.lambda)));
        }
        Command::Prec { a, b } => {
            let r = prec(&load_set(a)?, &load_set(b)?)?;
            emit(out, &r)?;
            say!(
                out,
                "holds {}  (kraft {} vs {})",
                r.holds,
                format_rational(&r.kraft_a),
                format_rational(&r.kraft_b)
            );
        }
        Command::ThreeCycle { phi, psi } => {
            let (phi, psi) = match (phi, psi) {
                (Some(a), Some(b)) => (load_table(a)?, load_table(b)?),
                _ => pre_three_cycle(&Lambda::half()),
            };
            let c = three_cycle(&phi, &psi)?;
            emit(out, c.table())?;
            print_pairs(out, c.table())?;
        }
        Command::Psi { perm } => {
            let p = psi_embed(&parse_perm(perm)?)?;
            emit(out, &p)?;
            print_pairs(out, &p.to_table())?;
        }
        Command::Phi { map, level } => {
            let t = load_leaf_perm(map, *level)?;
            let f = phi_embed(&t)?;
            emit(out, &f)?;
            for (w, g) in f.pieces() {
                say!(out, "{:<16} {g}", show(w));
            }
        }
        Command::Densify { lambda, epsilon, level, tuple, s, multiplicity } => {
            let t = load_tuple(tuple, *level)?;
            let r = densify(&t, &lambda.lambda, epsilon, *s, *multiplicity)?;
            emit(out, &r)?;
            say!(out, "level {}, invariant mass {}", r.level, format_rational(&r.invariant_mass));
            for (i, d) in r.du.iter().enumerate() {
                say!(out, "du {i}: {}", format_rational(d));
            }
            say!(out, "every type present: {}", r.check.passes);
        }
        Command::OrbitMember { f, degree, gens, y0 } => {
            let f = load_point_step(f)?;
            let group = if gens.is_empty() {
                FiniteGroupSpec::symmetric(*degree)?
            } else {
                let gens = gens.iter().map(|g| parse_perm(g)).collect::<Result<Vec<_>>>()?;
                FiniteGroupSpec::generated(*degree, &gens)?
            };
            match orbit_member(&f, &group, *y0) {
                OrbitMembership::Member { witness } => {
                    emit(out, &serde_json::json!({ "member": true, "witness": witness }))?;
                    for (w, g) in witness.pieces() {
                        say!(out, "{:<16} {g}", show(w));
                    }
                }
                OrbitMembership::Refused { piece, value } => {
                    emit(out, &serde_json::json!({ "member": false, "piece": piece, "value": value }))?;
                    say!(out, "value {value} on {piece} is outside the orbit of {y0}");
                    return Ok(1);
                }
            }
        }
        Command::Selftest { seed, suite } => {
            let reports = match suite {
                Some(id) => vec![run_suite(*id, *seed)?],
                None => run_all(*seed),
            };
            let summary: Vec<_> = reports
                .iter()
                .map(|r| serde_json::json!({ "criterion": r.id, "passed": r.passed(), "checks": r.checks }))
                .collect();
            emit(out, &summary)?;
            for r in &reports {
                say!(out, "{r}");
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn print_pairs(out: &mut dyn Write, t: &TableMap) -> Result<()> {
    say!(out, "{:<20} image", "source");
    for (u, v) in t.pairs() {
        say!(out, "{:<20} {v}", show(u));
    }
    Ok(())
}

/// Words for tables; the empty word is shown as `ε`.
fn show(w: &Word) -> String {
    if w.is_root() {
        "ε".into()
    } else {
        w.to_string()
    }
}

fn refine_all(t: &[LeafPerm], level: u8) -> Result<Vec<LeafPerm>> {
    t.iter().map(|p| p.refine(level)).collect()
}

/// File contents if `arg` names an existing file, else `None`.
fn read_file(arg: &str) -> Result<Option<String>> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(None);
    }
    std::fs::read_to_string(path)
        .map(Some)
        .map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad {what}: {e}")))
}

fn strip_braces(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(s)
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

pub fn load_set(arg: &str) -> Result<CylinderSet> {
    if let Some(text) = read_file(arg)? {
        return from_json(&text, "set");
    }
    let words: Vec<&str> = split_list(strip_braces(arg)).map(|w| w.trim_matches('"')).collect();
    CylinderSet::parse(&words)
}

pub fn load_table(arg: &str) -> Result<TableMap> {
    if let Some(text) = read_file(arg)? {
        return from_json(&text, "table");
    }
    let pairs = split_list(strip_braces(arg))
        .map(|p| {
            let (u, v) = p
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected u->v, got {p:?}")))?;
            Ok((Word::parse(u.trim())?, Word::parse(v.trim())?))
        })
        .collect::<Result<Vec<_>>>()?;
    TableMap::from_pairs(pairs)
}

/// A leaf permutation from a `{"level","perm"}` file or any total table.
pub fn load_leaf_perm(arg: &str, level: Option<u8>) -> Result<LeafPerm> {
    if let Some(text) = read_file(arg)? {
        let value: serde_json::Value = from_json(&text, "leaf permutation")?;
        if value.get("perm").is_some() {
            let p: LeafPerm = from_json(&text, "leaf permutation")?;
            return match level {
                Some(l) => p.refine(l),
                None => Ok(p),
            };
        }
    }
    let f = FullMap::new(load_table(arg)?)?;
    let depth = f.depth();
    f.to_leaf_perm(level.unwrap_or(depth))
}

pub fn load_tuple(args: &[String], level: Option<u8>) -> Result<Vec<LeafPerm>> {
    let raw = args
        .iter()
        .map(|a| load_leaf_perm(a, level))
        .collect::<Result<Vec<_>>>()?;
    let top = raw.iter().map(LeafPerm::level).max().unwrap_or(0);
    refine_all(&raw, top)
}

pub fn parse_perm(arg: &str) -> Result<Perm> {
    if let Some(text) = read_file(arg)? {
        return from_json(&text, "permutation");
    }
    let s = arg.trim().trim_start_matches('[').trim_end_matches(']');
    let images = split_list(s)
        .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad image {x:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images)
}

pub fn load_point_step(arg: &str) -> Result<StepFn<usize>> {
    if let Some(text) = read_file(arg)? {
        return from_json(&text, "step function");
    }
    let pieces = split_list(strip_braces(arg))
        .map(|p| {
            let (w, v) = p
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected word:value, got {p:?}")))?;
            let v = v
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad value {v:?}")))?;
            Ok((Word::parse(w.trim().trim_matches('"'))?, v))
        })
        .collect::<Result<Vec<_>>>()?;
    if pieces.is_empty() {
        return Err(Error::Parse("empty step function".into()));
    }
    StepFn::from_pieces(pieces)
}
