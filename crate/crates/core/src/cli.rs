//! Command-line front end. Every subcommand maps to one library operation and
//! prints one report per line, as text or JSON.
//!
//! Exit codes: 0 when every report holds or is vacuous, 1 on a failed or
//! undecided check, 2 on malformed input or a violated precondition, 3 when a
//! search budget runs out.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::construction::{pi_check, step1_conditions_check, toy_witness_search, BlockPartition, ConstructionParams};
use crate::error::{Error, Result};
use crate::exactmath::{binom_upper_check, lemma_asymptotic1_check, lemma_asymptotic_check, DEFAULT_PRECISION};
use crate::extension::{ext_lower_bound_check, phase2_check};
use crate::family::{SetFamily, Sparsity};
use crate::format::{parse_family, write_family};
use crate::gamma::{egt4_verify, gamma_unit_check, gamma_weighted_check, md_report};
use crate::gen::{generate, rng_from_seed, Distribution};
use crate::generator::{egt_find, gamma_core_report};
use crate::oracle::{run_suite, Scale};
use crate::split::{split1_identity_check, split2_find, DEFAULT_RESTARTS};
use crate::sunflower::{sunflower_report, DEFAULT_BUDGET};
use crate::verdict::{Holds, Value, VerdictReport, Witness};

pub const CLAIM_KAPPA: &str = "kappa";

#[derive(Debug, Parser)]
#[command(name = "sunflower-kit", version, about = "Exact checks on uniform set families")]
pub struct Cli {
    /// Emit one JSON object per report.
    #[arg(long, global = true)]
    pub json: bool,

    /// Bits of precision for interval arithmetic.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,

    /// Search budget (nodes, restarts or candidates, per subcommand).
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

/// Where the family comes from: a file, or a seeded generator.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Family file in the text format; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub count: Option<usize>,
    /// uniform, star or clustered.
    #[arg(long, default_value = "uniform")]
    pub dist: String,
}

impl Source {
    pub fn load(&self) -> Result<SetFamily> {
        if let Some(path) = &self.input {
            return parse_family(&read_input(path)?);
        }
        match (self.n, self.m, self.count) {
            (Some(n), Some(m), Some(count)) => {
                let dist: Distribution = self.dist.parse()?;
                generate(&mut rng_from_seed(self.seed.unwrap_or(0)), dist, n, m, count)
            }
            _ => Err(Error::InvalidArgument("give --input, or --n, --m and --count (with --seed) to generate a family".into())),
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// `NUM/DEN` or an integer.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let parse = |t: &str| t.trim().parse::<num_bigint::BigInt>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0.into() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(parse(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded family and print it in the text format.
    Gen(#[command(flatten)] Source),
    /// Lower bound on the number of l-sets containing a member.
    Ext {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        l: u32,
    },
    /// Sparsity ln C(n,m) - ln ||F||; optionally the complement comparison at 2m.
    Kappa {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        phase2: bool,
    },
    /// Set condition and pair condition at b; optionally the core extraction.
    GammaCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_rational)]
        b: BigRational,
        #[arg(long)]
        core: bool,
    },
    /// Incidence counts over the l-sets against their closed forms.
    Md {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        l: u32,
    },
    /// Find a small extension generator with an exact certificate.
    EgtFind {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = parse_rational)]
        lambda: BigRational,
        #[arg(long, value_parser = parse_rational, default_value = "1/16")]
        eps: BigRational,
    },
    /// Count l-sets whose load is close to the average.
    Egt4Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = parse_rational)]
        gamma: BigRational,
    },
    /// Split identity for j blocks of size d (all j when omitted).
    SplitCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        j: Option<u32>,
    },
    /// Find a full split meeting the guaranteed size; --budget sets restarts.
    SplitFind {
        #[command(flatten)]
        source: Source,
    },
    /// Search for a k-sunflower; --budget caps search nodes.
    Sunflower {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Block-partition property for three families (one file is used thrice).
    PiCheck {
        /// One or three family files.
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        /// Blocks as `1,2;3,4`.
        #[arg(long)]
        blocks: String,
        /// Elements each member has in each block.
        #[arg(long)]
        q: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, value_parser = parse_rational, default_value = "1/2")]
        eps: BigRational,
        /// First-level b; later levels decay by (1 - 1/r)^2.
        #[arg(long, value_parser = parse_rational)]
        b: BigRational,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        /// Size the floor in condition i) is measured against.
        #[arg(long)]
        base: u64,
        /// Also run the brute-force first-step search on the first family.
        #[arg(long)]
        search: bool,
    },
    /// Sweep the logarithmic inequalities over a grid.
    VerifyLemmas {
        #[arg(long, default_value_t = 300)]
        max_x: i64,
        #[arg(long, default_value_t = 20)]
        max_y: i64,
    },
    /// Run every oracle cross-check and print a pass/fail table.
    OracleSuite {
        /// Smaller ranges and fewer samples.
        #[arg(long)]
        quick: bool,
        /// Restrict to these runner ids (C1..C11, I1..I4).
        #[arg(long)]
        only: Vec<String>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Consistency(_) => 1,
        _ => 2,
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    json: bool,
    worst: Holds,
}

impl Printer<'_> {
    fn report(&mut self, mut r: VerdictReport, started: Instant) -> Result<()> {
        r.runtime_ms = Some(started.elapsed().as_millis());
        self.worst = self.worst.and(match r.holds {
            Holds::Vacuous => Holds::True,
            h => h,
        });
        if self.json {
            writeln!(self.out, "{}", serde_json::to_string(&r).map_err(|e| Error::Io(e.to_string()))?)?;
        } else {
            writeln!(self.out, "{r} ({} ms)", r.runtime_ms.unwrap_or(0))?;
        }
        Ok(())
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        let s = serde_json::to_string(v).map_err(|e| Error::Io(e.to_string()))?;
        self.line(&s)
    }

    fn code(&self) -> i32 {
        if self.worst.passed() { 0 } else { 1 }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let prec = cli.precision;
    let mut p = Printer { out, json: cli.json, worst: Holds::Vacuous };
    let t = Instant::now();
    match &cli.command {
        Command::Gen(source) => {
            let f = source.load()?;
            if cli.json {
                #[derive(Serialize)]
                struct Out {
                    n: u32,
                    m: u32,
                    sets: Vec<Vec<u32>>,
                }
                let f = f.canonical();
                p.json(&Out { n: f.n(), m: f.m(), sets: f.sets().iter().map(|s| s.elements()).collect() })?;
            } else {
                write!(p.out, "{}", write_family(&f)?)?;
            }
        }
        Command::Ext { source, l } => {
            let f = source.load()?;
            p.report(ext_lower_bound_check(&f, *l, prec)?, t)?;
        }
        Command::Kappa { source, phase2 } => {
            let f = source.load()?;
            let lhs = match f.sparsity() {
                Sparsity::Infinite => Value::PosInfinity,
                s => Value::Interval(s.interval(prec).expect("finite sparsity")),
            };
            let r = VerdictReport::new(CLAIM_KAPPA, Holds::True, lhs, Value::Absent).with_detail("size", Value::rational(f.size()));
            p.report(r, t)?;
            if *phase2 {
                p.report(phase2_check(&f, prec)?, Instant::now())?;
            }
        }
        Command::GammaCheck { source, b, core } => {
            let f = source.load()?;
            p.report(gamma_unit_check(&f, b)?, t)?;
            let t2 = Instant::now();
            p.report(gamma_weighted_check(&f, b)?, t2)?;
            if *core {
                let t3 = Instant::now();
                p.report(gamma_core_report(&f, b)?, t3)?;
            }
        }
        Command::Md { source, l } => {
            let f = source.load()?;
            p.report(md_report(&f, *l)?, t)?;
        }
        Command::EgtFind { source, l, lambda, eps } => {
            let f = source.load()?;
            p.report(egt_find(&f, *l, lambda, eps, prec)?.to_report(), t)?;
        }
        Command::Egt4Verify { source, l, gamma } => {
            let f = source.load()?;
            p.report(egt4_verify(&f, *l, gamma)?.to_report(), t)?;
        }
        Command::SplitCheck { source, d, j } => {
            let f = source.load()?;
            let d = d.unwrap_or(if f.m() > 0 { f.n() / f.m() } else { 0 });
            let js: Vec<u32> = match j {
                Some(j) => vec![*j],
                None => (0..=f.m()).collect(),
            };
            for j in js {
                let t = Instant::now();
                p.report(split1_identity_check(&f, d, j)?, t)?;
            }
        }
        Command::SplitFind { source } => {
            let f = source.load()?;
            let found = split2_find(&f, cli.budget.unwrap_or(DEFAULT_RESTARTS), source.seed.unwrap_or(0))?;
            p.report(found.to_report(), t)?;
        }
        Command::Sunflower { source, k } => {
            let f = source.load()?;
            p.report(sunflower_report(&f, *k, cli.budget.unwrap_or(DEFAULT_BUDGET))?, t)?;
        }
        Command::PiCheck { inputs, blocks, q, j, eps, b, beta, base, search } => {
            let fams = inputs.iter().map(|i| parse_family(&read_input(i)?)).collect::<Result<Vec<_>>>()?;
            let three: [&SetFamily; 3] = match fams.len() {
                1 => [&fams[0], &fams[0], &fams[0]],
                3 => [&fams[0], &fams[1], &fams[2]],
                k => return Err(Error::InvalidArgument(format!("pi-check takes one or three --input files, got {k}"))),
            };
            let lists = parse_blocks(blocks)?;
            let refs: Vec<&[u32]> = lists.iter().map(|v| v.as_slice()).collect();
            let part = BlockPartition::from_lists(fams[0].n(), *q, &refs)?;
            let params = ConstructionParams::direct(eps.clone(), fams[0].m(), *q, part.r(), *beta, b.clone())?;
            p.report(pi_check(three, &part, *j, &params, &BigUint::from(*base))?, t)?;
            if *search {
                let t2 = Instant::now();
                match toy_witness_search(&fams[0], &part, &params, *j, cli.budget.unwrap_or(1_000_000))? {
                    Some(w) => {
                        let r = step1_conditions_check(&fams[0], &part, *j, &w.s, &w.v, &params.step_b(*j)?, params.beta)?
                            .with_detail("entry_ratio", Value::rational(w.entry_ratio))
                            .with_note(format!("v = {}", w.v));
                        p.report(r, t2)?;
                    }
                    None => {
                        let r = VerdictReport::new(crate::construction::CLAIM_STEP1, Holds::False, Value::Absent, Value::Absent)
                            .with_note("no set meets the first-step conditions for the chosen vector");
                        p.report(r, t2)?;
                    }
                }
            }
        }
        Command::VerifyLemmas { max_x, max_y } => verify_lemmas(&mut p, *max_x, *max_y, prec)?,
        Command::OracleSuite { quick, only } => {
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            let outcomes = run_suite(scale, only)?;
            let all = outcomes.iter().all(|o| o.passed());
            if cli.json {
                p.json(&outcomes)?;
            } else {
                for o in &outcomes {
                    p.line(&o.line())?;
                    for e in &o.examples {
                        p.line(&format!("    ! {e}"))?;
                    }
                    for n in &o.notes {
                        p.line(&format!("    - {n}"))?;
                    }
                }
            }
            return Ok(if all { 0 } else { 1 });
        }
    }
    Ok(p.code())
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<u32>>> {
    s.split(';')
        .map(|b| {
            b.split(',')
                .map(|e| e.trim().parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad block element `{e}` in `{s}`"))))
                .collect()
        })
        .collect()
}

/// One summary report per inequality over its grid.
fn verify_lemmas(p: &mut Printer<'_>, max_x: i64, max_y: i64, prec: u32) -> Result<()> {
    if max_x < 2 || max_y < 1 {
        return Err(Error::InvalidArgument("need --max-x >= 2 and --max-y >= 1".into()));
    }
    type Check = Box<dyn Fn(i64, i64, i64) -> Result<VerdictReport>>;
    let sweeps: Vec<(&str, Vec<(i64, i64, i64)>, Check)> = vec![
        (
            crate::exactmath::CLAIM_STIRLING,
            (2..=max_x).flat_map(|x| (1..x).map(move |y| (x, y, 0))).collect(),
            Box::new(move |x, y, _| lemma_asymptotic_check(x, y, prec)),
        ),
        (
            crate::exactmath::CLAIM_STIRLING_SHIFT,
            (1..=max_y).flat_map(|y| (3 * y..=12 * y).flat_map(move |x| (0..y).map(move |j| (x, y, j)))).collect(),
            Box::new(move |x, y, j| lemma_asymptotic1_check(x, y, j, prec)),
        ),
        (
            crate::exactmath::CLAIM_BINOM_UPPER,
            (1..=max_x).flat_map(|x| (1..=x).map(move |y| (x, y, 0))).collect(),
            Box::new(move |x, y, _| binom_upper_check(x, y, prec)),
        ),
    ];
    for (claim, grid, check) in sweeps {
        let t = Instant::now();
        let (mut passed, mut inconclusive) = (0u64, 0u64);
        let mut first_bad = None;
        for &(x, y, j) in &grid {
            let r = check(x, y, j)?;
            match r.holds {
                Holds::True | Holds::Vacuous => passed += 1,
                h => {
                    if h == Holds::Inconclusive {
                        inconclusive += 1;
                    }
                    first_bad.get_or_insert(format!("x={x} y={y} j={j}: {h}"));
                }
            }
        }
        let total = grid.len() as u64;
        let holds = if passed == total { Holds::True } else if passed + inconclusive == total { Holds::Inconclusive } else { Holds::False };
        let mut r = VerdictReport::new(claim, holds, Value::int(passed), Value::int(total))
            .with_detail("inconclusive", Value::int(inconclusive))
            .with_note("lhs: cases passed; rhs: cases checked");
        if let Some(bad) = first_bad {
            r = r.with_witness(Witness::Text(bad));
        }
        p.report(r, t)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("sunflower-kit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("7/5").unwrap(), BigRational::new(7.into(), 5.into()));
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn generated_family_and_errors() {
        let (code, out, _) = run_capture(&["gen", "--seed", "4", "--n", "6", "--m", "2", "--count", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n=6 m=2\n"));
        let (code, _, err) = run_capture(&["ext", "--l", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("--input"));
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn budget_exit_code() {
        let (code, _, _) = run_capture(&["sunflower", "--n", "9", "--m", "2", "--count", "36", "--k", "4", "--budget", "1"]);
        assert_eq!(code, 3);
    }
}
