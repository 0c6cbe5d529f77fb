use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Subcommand};
use iterroot::{CycleType, Permutation};
use serde::Serialize;

use crate::{Outcome, OutputArgs};

#[derive(Subcommand)]
pub enum PermCommand {
    /// Cycle type as `length^count` factors.
    Type(PermArgs),
    /// Whether an n-th root exists (exit 2 when it does not).
    HasRoot {
        #[command(flatten)]
        perm: PermArgs,
        n: u64,
    },
    /// Construct an n-th root and re-check it.
    Root {
        #[command(flatten)]
        perm: PermArgs,
        n: u64,
    },
}

#[derive(Args)]
pub struct PermArgs {
    /// Cycle notation such as "(0 1 2)(3 4)", or an image array such as "[1,2,0]".
    pub permutation: String,
    /// Degree k of S_k; defaults to one more than the largest point mentioned.
    #[arg(long)]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct TypeReport {
    permutation: String,
    cycle_type: CycleType,
}

#[derive(Serialize)]
struct HasRootReport {
    permutation: String,
    n: u64,
    has_root: bool,
}

#[derive(Serialize)]
struct RootReport {
    permutation: String,
    n: u64,
    root: String,
    image: Permutation,
}

pub fn run(cmd: PermCommand) -> Result<Outcome> {
    match cmd {
        PermCommand::Type(args) => {
            let sigma = args.parse()?;
            let report = TypeReport { permutation: cycle_notation(&sigma), cycle_type: sigma.cycle_type() };
            args.output.save_json("cycle_type.json", &report)?;
            args.output.show(&report, || {
                let factors: Vec<String> =
                    report.cycle_type.counts.iter().map(|(len, count)| format!("{len}^{count}")).collect();
                factors.join(" ")
            })?;
            Ok(Outcome::Success)
        }
        PermCommand::HasRoot { perm, n } => {
            ensure!(n >= 1, "n must be at least 1");
            let sigma = perm.parse()?;
            let has_root = sigma.cycle_type().has_nth_root(n);
            let report = HasRootReport { permutation: cycle_notation(&sigma), n, has_root };
            perm.output.save_json("has_root.json", &report)?;
            perm.output.show(&report, || has_root.to_string())?;
            Ok(if has_root { Outcome::Success } else { Outcome::Negative })
        }
        PermCommand::Root { perm, n } => {
            ensure!(n >= 1, "n must be at least 1");
            let sigma = perm.parse()?;
            let Some(tau) = sigma.construct_nth_root(n) else {
                println!("{} has no {n}-th root", cycle_notation(&sigma));
                return Ok(Outcome::Negative);
            };
            if tau.pow(n) != sigma {
                bail!("internal error: constructed root does not reproduce the input");
            }
            let report = RootReport { permutation: cycle_notation(&sigma), n, root: cycle_notation(&tau), image: tau };
            perm.output.save_json("root.json", &report)?;
            perm.output.show(&report, || report.root.clone())?;
            Ok(Outcome::Success)
        }
    }
}

impl PermArgs {
    fn parse(&self) -> Result<Permutation> {
        let s = self.permutation.trim();
        let sigma = if s.starts_with('[') {
            let image: Vec<usize> = serde_json::from_str(s).context("parsing image array")?;
            Permutation::new(image)?
        } else {
            let cycles = parse_cycles(s)?;
            let implied = cycles.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
            let k = self.degree.unwrap_or(implied);
            ensure!(k >= implied, "degree {k} is smaller than the largest point {}", implied - 1);
            Permutation::from_cycles(k, &cycles)?
        };
        if let Some(k) = self.degree {
            ensure!(sigma.degree() == k, "permutation has degree {}, expected {k}", sigma.degree());
        }
        Ok(sigma)
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').with_context(|| format!("expected '(' in {s:?}"))?;
        let (inner, tail) = body.split_once(')').with_context(|| format!("unclosed cycle in {s:?}"))?;
        let cycle = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().with_context(|| format!("bad point {t:?}")))
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = tail.trim_start();
    }
    Ok(cycles)
}

/// Non-trivial cycles, each from its least point; `()` for the identity.
pub fn cycle_notation(p: &Permutation) -> String {
    let parts: Vec<String> = p
        .cycles()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
        .collect();
    if parts.is_empty() {
        "()".into()
    } else {
        parts.concat()
    }
}
