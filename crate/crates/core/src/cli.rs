//! Command-line front end. [`run`] parses arguments, writes the report and
//! returns the process exit code:
//!
//! * 0: every asserted check passed
//! * 1: an asserted check failed
//! * 2: usage error (bad prime, parameters or flags)
//! * 3: resource cap exceeded

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use crate::conics::{brute_force_conic_count, classify_and_count, closed_form_total, fiber_sum_total, ConicParams};
use crate::delta::{build_assignment, certificate_dump, verify_certificate};
use crate::enumeration::{enumerate_solutions_capped, DEFAULT_MAX_PRIME};
use crate::error::Error;
use crate::field::Prime;
use crate::obstruction::verify_breakup;
use crate::orbits::{compute_orbits, find_bigon, verify_divisibility, OrbitPartition};
use crate::special::{markoff_p3, orbits_00_minus3, table_22m2, tiny_orbits_22m2, write_table_csv, RowStatus};
use crate::surface::SurfaceParams;
use crate::sweep::{rng_for, run_sweep, summarize, SweepMode, SweepOptions};

/// Environment variable setting the worker thread count.
pub const THREADS_ENV: &str = "MARKOFF_THREADS";

#[derive(Debug, Parser)]
#[command(name = "markoff", version, about = "Orbits and point counts of Markoff-type surfaces mod p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// The prime modulus.
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Parameters a1,a2,a3; negative values are reduced mod p.
    #[arg(short = 'a', long = "params", value_delimiter = ',', allow_hyphen_values = true, num_args = 1, default_value = "0,0,0")]
    pub a: Vec<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Refuse to enumerate for primes above this.
    #[arg(long, default_value_t = DEFAULT_MAX_PRIME)]
    pub max_p: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form solution count against enumeration.
    Count(SurfaceArgs),
    /// Print every nonzero solution.
    Enumerate(SurfaceArgs),
    /// Orbit decomposition and size table.
    Orbits(SurfaceArgs),
    /// Run one of the verification suites.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Seed for randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the orbit table for a = (2,2,-2).
    #[command(name = "table-22m2")]
    Table22m2 {
        #[arg(long, default_value_t = 43)]
        max_p: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Worked families with s = 0 or small special orbits.
    Special {
        #[arg(value_enum)]
        case: SpecialCase,
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count, divisibility and certificate over many parameter sets.
    Sweep {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<u64>,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the angle-function certificate.
        #[arg(long)]
        no_certificate: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Divisibility,
    Breakup,
    Delta,
    Numel,
    Conics,
    Nobigons,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialCase {
    #[value(name = "00m3")]
    ZeroZeroMinus3,
    P3,
    #[value(name = "22m2")]
    TwoTwoMinus2,
}

/// Applies the thread-count environment variable, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

enum Failure {
    Usage(String),
    Resource(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            2
        }
        Err(Failure::Resource(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            3
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn surface(args: &SurfaceArgs) -> std::result::Result<SurfaceParams, Failure> {
    let p = Prime::new(args.p)?;
    let a: [i64; 3] = args
        .a
        .as_slice()
        .try_into()
        .map_err(|_| Failure::Usage(format!("expected three parameters, got {}", args.a.len())))?;
    Ok(SurfaceParams::new(p, a))
}

fn partition(args: &SurfaceArgs) -> std::result::Result<OrbitPartition, Failure> {
    let params = surface(args)?;
    Ok(compute_orbits(enumerate_solutions_capped(&params, args.max_p)?))
}

fn json(out: &mut dyn Write, value: &impl Serialize) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::other)?;
    writeln!(out)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Count(args) => count(&args, out),
        Command::Enumerate(args) => {
            let params = surface(&args)?;
            let sol = enumerate_solutions_capped(&params, args.max_p)?;
            match args.format {
                Format::Json => json(out, &sol.points())?,
                _ => sol.write_csv(&mut *out)?,
            }
            Ok(true)
        }
        Command::Orbits(args) => {
            let part = partition(&args)?;
            let report = part.report();
            match args.format {
                Format::Json => json(out, &report)?,
                Format::Csv => {
                    writeln!(out, "size,rep,divisible_by_p")?;
                    for o in &report.orbits {
                        let [a, b, c] = o.rep.values();
                        writeln!(out, "{},\"{a},{b},{c}\",{}", o.size, o.divisible_by_p)?;
                    }
                }
                Format::Text => {
                    writeln!(out, "{} class={}", part.params(), report.class)?;
                    writeln!(out, "total={} orbits={}", report.total, report.orbits.len())?;
                    writeln!(out, "table: {}", report.table)?;
                }
            }
            Ok(true)
        }
        Command::Verify { check, surface: args, seed } => verify(check, &args, seed, out),
        Command::Table22m2 { max_p, format } => {
            let rows = table_22m2(max_p)?;
            let ok = rows.iter().all(|r| r.status != RowStatus::Mismatch);
            match format {
                Format::Json => json(out, &rows)?,
                Format::Csv => write_table_csv(&rows, &mut *out)?,
                Format::Text => {
                    for r in &rows {
                        let flag = match r.status {
                            RowStatus::Match => "matches printed row",
                            RowStatus::MatchAfterTripodFix => "printed row lists 4^3; computed 4^4",
                            RowStatus::Mismatch => "MISMATCH with printed row",
                            RowStatus::Unpublished => "no printed row",
                        };
                        writeln!(out, "p={:<3} {}  [{}]", r.p, r.computed, flag)?;
                    }
                }
            }
            Ok(ok)
        }
        Command::Special { case, p, format } => special(case, p, format, out),
        Command::Sweep { p_list, exhaustive, samples, seed, no_certificate, format } => {
            let primes: Vec<Prime> = p_list.iter().map(|&p| Prime::new(p)).collect::<Result<_, _>>()?;
            for p in &primes {
                p.require_at_least(5)?;
            }
            let mode = match (exhaustive, samples) {
                (_, Some(k)) => SweepMode::Samples(k),
                _ => SweepMode::Exhaustive,
            };
            let items = run_sweep(&primes, mode, seed, SweepOptions { certificate: !no_certificate })?;
            let summary = summarize(&items);
            match format {
                Format::Json => json(out, &serde_json::json!({ "summary": summary, "items": items }))?,
                Format::Csv => {
                    writeln!(out, "p,a1,a2,a3,class,total,formula,orbits,divisible,certificate")?;
                    for it in &items {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{}",
                            it.p,
                            it.a[0],
                            it.a[1],
                            it.a[2],
                            it.class,
                            it.enumerated,
                            it.formula,
                            it.orbit_count,
                            it.divisible.map_or("n/a".into(), |d| d.to_string()),
                            it.certificate.as_ref().map_or("skipped".into(), |c| format!("{c:?}"))
                        )?;
                    }
                }
                Format::Text => {
                    for it in items.iter().filter(|it| !it.passed()) {
                        writeln!(out, "FAIL p={} a={:?}: {:?}", it.p, it.a, it)?;
                    }
                    writeln!(
                        out,
                        "{} parameter sets; count failures {}; divisibility {}/{} ok; certificates {} passed, {} failed; \
                         expected no-extension {}, unexpected {}",
                        summary.items,
                        summary.count_failures,
                        summary.divisibility_checked - summary.divisibility_failures,
                        summary.divisibility_checked,
                        summary.certificates_passed,
                        summary.certificate_failures,
                        summary.expected_no_extension,
                        summary.unexpected_no_extension
                    )?;
                    writeln!(out, "{}", verdict(summary.passed()))?;
                }
            }
            Ok(summary.passed())
        }
    }
}

fn count(args: &SurfaceArgs, out: &mut dyn Write) -> Outcome {
    let params = surface(args)?;
    let formula = closed_form_total(&params)?;
    let brute = enumerate_solutions_capped(&params, args.max_p)?.len() as u64;
    let ok = brute == formula;
    match args.format {
        Format::Json => json(out, &serde_json::json!({ "brute": brute, "formula": formula, "pass": ok }))?,
        _ => writeln!(out, "brute={brute} formula={formula} {}", verdict(ok))?,
    }
    Ok(ok)
}

fn verify(check: Check, args: &SurfaceArgs, seed: u64, out: &mut dyn Write) -> Outcome {
    match check {
        Check::Numel => count(args, out),
        Check::Divisibility => {
            let part = partition(args)?;
            let rep = verify_divisibility(&part)?;
            match args.format {
                Format::Json => json(out, &rep)?,
                _ => {
                    let status = if rep.asserted { verdict(rep.passed()) } else { "NOT ASSERTED" };
                    writeln!(out, "class={} table: {}", rep.class, part.size_table())?;
                    writeln!(out, "non-divisible sizes: {:?}", rep.failures)?;
                    writeln!(out, "{status}")?;
                }
            }
            Ok(rep.passed())
        }
        Check::Breakup => {
            let params = surface(args)?;
            if params.prime().get() > args.max_p {
                return Err(Error::ResourceLimit { p: params.prime().get(), cap: args.max_p }.into());
            }
            let rep = verify_breakup(&params)?;
            match args.format {
                Format::Json => json(out, &rep)?,
                _ => {
                    writeln!(out, "form: i={} sigma={} alpha={}", rep.form.i, rep.form.sigma, rep.form.alpha)?;
                    writeln!(out, "orbits={} (need >= {}) sizes={:?}", rep.orbit_count, rep.required_orbits, rep.orbit_sizes)?;
                    writeln!(out, "classes={:?} closed={}", rep.class_sizes, rep.classes_closed)?;
                    let tag = if rep.conjecture_partition_matched { "matched" } else { "WARNING: not matched" };
                    writeln!(out, "conjectured sizes {:?}: {tag}", rep.conjectured_sizes)?;
                    writeln!(out, "{}", verdict(rep.passed()))?;
                }
            }
            Ok(rep.passed())
        }
        Check::Delta => {
            let part = partition(args)?;
            let asg = match build_assignment(&part) {
                Ok(a) => a,
                Err(e @ Error::NoConsistentExtension { .. }) => {
                    writeln!(out, "{e}")?;
                    writeln!(out, "{}", verdict(false))?;
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            let rep = verify_certificate(&part, &asg)?;
            match args.format {
                Format::Json => json(out, &certificate_dump(&part, &asg, &rep))?,
                _ => {
                    writeln!(out, "points={} cycles={} fixed incidences={}", rep.points, rep.cycles, rep.fixed_points)?;
                    writeln!(
                        out,
                        "failures: total={} pair={} fix={}",
                        rep.total_failures, rep.pair_failures, rep.fix_failures
                    )?;
                    let sizes: Vec<String> =
                        rep.orbits.iter().map(|o| format!("{}(mod p {})", o.size, o.size_mod_p)).collect();
                    writeln!(out, "orbits: {}", sizes.join(", "))?;
                    writeln!(out, "{}", verdict(rep.passed()))?;
                }
            }
            Ok(rep.passed())
        }
        Check::Conics => {
            let params = surface(args)?;
            let p = params.prime();
            let mut checked = 0u64;
            let mut bad = 0u64;
            let mut check_one = |c: ConicParams| -> std::result::Result<(), Failure> {
                checked += 1;
                if classify_and_count(&c)?.1 != brute_force_conic_count(&c) {
                    bad += 1;
                }
                Ok(())
            };
            if p.get() <= 7 {
                for b in p.elements() {
                    for d in p.elements() {
                        for e in p.elements() {
                            for f in p.elements() {
                                check_one(ConicParams { b, d, e, f })?;
                            }
                        }
                    }
                }
            } else {
                let mut rng = rng_for(seed, p);
                for _ in 0..1000 {
                    let mut r = || p.elem(rng.gen_range(0..p.get() as i64));
                    check_one(ConicParams { b: r(), d: r(), e: r(), f: r() })?;
                }
            }
            let fiber = fiber_sum_total(&params)?;
            let enumerated = enumerate_solutions_capped(&params, args.max_p)?.len() as u64 + 1;
            let ok = bad == 0 && fiber == enumerated;
            writeln!(out, "conics checked={checked} mismatches={bad}")?;
            writeln!(out, "fiber sum={fiber} enumerated (with origin)={enumerated}")?;
            writeln!(out, "{}", verdict(ok))?;
            Ok(ok)
        }
        Check::Nobigons => {
            let params = surface(args)?;
            let sol = enumerate_solutions_capped(&params, args.max_p)?;
            let found = find_bigon(&params, sol.points());
            match found {
                Some((x, i, j)) => writeln!(out, "bigon at {x}: m{i} x = m{j} x")?,
                None => writeln!(out, "no bigons among {} points", sol.len())?,
            }
            writeln!(out, "{}", verdict(found.is_none()))?;
            Ok(found.is_none())
        }
    }
}

fn special(case: SpecialCase, p: Option<u64>, format: Format, out: &mut dyn Write) -> Outcome {
    match case {
        SpecialCase::P3 => {
            let rep = markoff_p3()?;
            match format {
                Format::Json => json(out, &rep)?,
                _ => {
                    writeln!(out, "orbits: {}", rep.table)?;
                    writeln!(out, "moves are negations: {}; move graph is the 3-cube: {}", rep.moves_are_negation, rep.is_cube)?;
                }
            }
            Ok(rep.passed())
        }
        SpecialCase::ZeroZeroMinus3 => {
            let p = Prime::new(p.ok_or_else(|| Failure::Usage("special 00m3 needs -p".into()))?)?;
            let rep = orbits_00_minus3(p)?;
            match format {
                Format::Json => json(out, &rep)?,
                _ => {
                    writeln!(out, "{}", rep.summary())?;
                    writeln!(
                        out,
                        "formula: conic1={} conic0={}; burnside: conic1={} conic0={}; sqrt5 in F_p: {}",
                        rep.conic1_orbits, rep.conic0_orbits, rep.burnside_conic1, rep.burnside_conic0, rep.sqrt5_in_fp
                    )?;
                    writeln!(out, "m1,m2,m3 on x3=+-1: {:?}", rep.full_action_pm1_sizes)?;
                }
            }
            Ok(rep.agrees())
        }
        SpecialCase::TwoTwoMinus2 => {
            let p = Prime::new(p.ok_or_else(|| Failure::Usage("special 22m2 needs -p".into()))?)?;
            let rep = tiny_orbits_22m2(p)?;
            match format {
                Format::Json => json(out, &rep)?,
                _ => {
                    for o in &rep.orbits {
                        let pts: Vec<String> = o.points.iter().map(|x| x.to_string()).collect();
                        writeln!(out, "{:<9} size {} (bfs {}) {}", o.kind, o.expected_size, o.bfs_size, pts.join(" "))?;
                    }
                    writeln!(out, "{}", verdict(rep.passed()))?;
                }
            }
            Ok(rep.passed())
        }
    }
}
