//! Command-line front end. Exit codes: 0 pass, 1 law violations, 2 usage or
//! malformed group descriptions, 3 queries outside a local certificate.

use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::audit::{audit, convexity_scan, AuditConfig, AuditReport, Law};
use crate::ball::ball;
use crate::error::Error;
use crate::order::{OrderedCosetSpace, Sign};
use crate::par::Parallelism;
use crate::spec::{load_spec, Construction};
use crate::words::Word;

#[derive(Debug, Parser)]
#[command(name = "relconvex", version, about = "Invariant orders on coset spaces of groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON group description.
    pub spec: PathBuf,
    /// Use the relative order on G/G0 instead of the full left order.
    #[arg(long)]
    pub cosets: bool,
    /// Print orientation-sum and turn-sum of each comparison to stderr.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print `<`, `=` or `>` for u against v.
    Compare {
        #[command(flatten)]
        common: Common,
        u: String,
        v: String,
    },
    /// Sort words ascending (stable).
    Sort {
        #[command(flatten)]
        common: Common,
        words: Vec<String>,
    },
    /// List the ball of a radius in ascending order.
    Ball {
        #[command(flatten)]
        common: Common,
        radius: usize,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// List the positive elements of a ball in ascending order.
    Cone {
        #[command(flatten)]
        common: Common,
        radius: usize,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Audit the order laws on a ball and print a JSON report.
    Check {
        #[command(flatten)]
        common: Common,
        /// `all` or a law name; repeatable.
        #[arg(long, default_value = "all")]
        law: Vec<String>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Flip one comparison to plant a violation.
        #[arg(long)]
        corrupt: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Scan a ball for elements outside a subgroup lying between two inside it.
    Convexity {
        #[command(flatten)]
        common: Common,
        /// Subgroup generators.
        #[arg(long, num_args = 1.., required = true)]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Print the certificate of a local order.
    Certificate { spec: PathBuf },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Domain(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

/// Outcome of a command: text for stdout and whether laws held.
pub struct Output {
    pub stdout: String,
    pub lawful: bool,
}

fn load(path: &PathBuf) -> Result<Construction, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(load_spec(&text)?)
}

fn parse_words(c: &Construction, words: &[String]) -> Result<Vec<Word>, Failure> {
    words.iter().map(|w| c.parse(w).map_err(Failure::from)).collect()
}

fn trace(c: &Construction, common: &Common, u: &Word, v: &Word) -> Result<(), Failure> {
    if common.trace {
        if let Some(sums) = c.trace(u, v) {
            let s = sums?;
            eprintln!("{u} vs {v}: orientation-sum {} turn-sum {}", s.orientation, s.turn);
        }
    }
    Ok(())
}

fn sorted(order: &OrderedCosetSpace, mut words: Vec<Word>) -> Result<Vec<Word>, Failure> {
    let err = RefCell::new(None);
    words.sort_by(|x, y| match order.try_compare(x, y) {
        Ok(s) => s.to_ordering(),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            std::cmp::Ordering::Equal
        }
    });
    match err.into_inner() {
        Some(e) => Err(e.into()),
        None => Ok(words),
    }
}

/// The elements a construction is examined on: its declared universe, or
/// the word ball.
fn elements(c: &Construction, radius: usize) -> Vec<Word> {
    match &c.universe {
        Some(u) => u.iter().filter(|w| w.len() <= radius).cloned().collect(),
        None => ball(c.group.as_ref(), radius),
    }
}

fn lines(words: &[Word]) -> String {
    words.iter().fold(String::new(), |mut s, w| {
        let _ = writeln!(s, "{w}");
        s
    })
}

fn check_cap(radius: usize, cap: usize) -> Result<(), Failure> {
    if radius > cap {
        return Err(Failure::Usage(format!("radius {radius} exceeds the cap {cap}")));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let ok = |stdout: String| Ok(Output { stdout, lawful: true });
    match &cli.command {
        Command::Compare { common, u, v } => {
            let c = load(&common.spec)?;
            let (u, v) = (c.parse(u)?, c.parse(v)?);
            trace(&c, common, &u, &v)?;
            let s = c.order(common.cosets).try_compare(&u, &v)?;
            ok(format!("{}\n", s.symbol()))
        }
        Command::Sort { common, words } => {
            let c = load(&common.spec)?;
            let ws = parse_words(&c, words)?;
            for pair in ws.windows(2) {
                trace(&c, common, &pair[0], &pair[1])?;
            }
            ok(lines(&sorted(c.order(common.cosets), ws)?))
        }
        Command::Ball { common, radius, cap } => {
            check_cap(*radius, *cap)?;
            let c = load(&common.spec)?;
            let b = sorted(c.order(common.cosets), elements(&c, *radius))?;
            eprintln!("{} elements", b.len());
            ok(lines(&b))
        }
        Command::Cone { common, radius, cap } => {
            check_cap(*radius, *cap)?;
            let c = load(&common.spec)?;
            let order = c.order(common.cosets);
            let one = Word::identity();
            let mut pos = Vec::new();
            for w in elements(&c, *radius) {
                if order.try_compare(&one, &w)? == Sign::Pos {
                    pos.push(w);
                }
            }
            let pos = sorted(order, pos)?;
            eprintln!("{} positive elements", pos.len());
            ok(lines(&pos))
        }
        Command::Check { common, law, radius, samples, seed, corrupt, sequential } => {
            let c = load(&common.spec)?;
            let mut laws = Vec::new();
            for l in law {
                if l == "all" {
                    laws.extend(Law::ALL);
                } else {
                    laws.push(l.parse::<Law>()?);
                }
            }
            laws.sort();
            laws.dedup();
            let universe = elements(&c, *radius);
            let mut order = c.order(common.cosets).clone();
            if *corrupt {
                let one = Word::identity();
                if let Some(y) = universe.iter().find(|y| !order.same_coset(&one, y)) {
                    order = order.corrupted(one, y.clone());
                }
            }
            let mut config = AuditConfig::default()
                .with_laws(&laws)
                .with_samples(*samples)
                .with_seed(*seed)
                .with_parallelism(if *sequential { Parallelism::Sequential } else { Parallelism::Parallel });
            if c.universe.is_some() {
                config = config.local();
            }
            if !common.cosets {
                if let (Some(h), Some(_)) = (&c.convex, &c.full) {
                    config = config.with_convex_subgroup(h.clone());
                }
            }
            let report = audit(&order, &universe, &config);
            report_output(&report)
        }
        Command::Convexity { common, subgroup, radius } => {
            let c = load(&common.spec)?;
            let gens = parse_words(&c, subgroup)?;
            let h = c.subgroup(&gens)?;
            let universe = elements(&c, *radius);
            let (found, scanned) = convexity_scan(c.order(common.cosets), &universe, &h, Parallelism::default());
            let mut report = AuditReport::default();
            report.checked.insert(Law::Convexity, scanned);
            report.violation_counts.insert(Law::Convexity, found.len());
            let mut found = found;
            found.truncate(25);
            report.violations = found;
            report_output(&report)
        }
        Command::Certificate { spec } => {
            let c = load(spec)?;
            match c.certificate {
                Some(cert) => ok(format!("{cert}\n")),
                None => Err(Failure::Usage(format!("{} specs carry no certificate", c.kind))),
            }
        }
    }
}

fn report_output(report: &AuditReport) -> Result<Output, Failure> {
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    Ok(Output { stdout: format!("{json}\n"), lawful: report.is_lawful() })
}

pub fn main_with(cli: &Cli) -> ExitCode {
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.lawful {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
