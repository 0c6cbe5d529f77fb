use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use iterroot::functional_graphs::{BruteForceOptions, ComponentPartition, T3FiniteCertificate};
use iterroot::{Error, FunctionalGraph, Permutation};
use serde::Serialize;

use crate::output::read_json;
use crate::{Outcome, OutputArgs};

#[derive(Subcommand)]
pub enum FiniteCommand {
    /// Weakly connected components of the functional graph.
    Components(GraphArgs),
    /// Construct a square root, or explain why there is none.
    Root(GraphArgs),
    /// Run the existence criteria without constructing anything.
    Check(GraphArgs),
    /// Enumerate all square roots (small maps only).
    Brute {
        #[command(flatten)]
        graph: GraphArgs,
        /// Stop after this many roots.
        #[arg(long)]
        limit: Option<usize>,
        /// Largest map size the enumeration accepts.
        #[arg(long, default_value_t = BruteForceOptions::default().guard)]
        guard: usize,
    },
}

#[derive(Args)]
pub struct GraphArgs {
    /// JSON file `{"n": 3, "image": [1, 2, 0]}`.
    pub file: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl GraphArgs {
    fn load(&self) -> Result<FunctionalGraph> {
        read_json(&self.file)
    }
}

#[derive(Serialize)]
struct ComponentsReport {
    #[serde(flatten)]
    partition: ComponentPartition,
    members: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct RootReport {
    method: &'static str,
    root: FunctionalGraph,
}

#[derive(Serialize)]
struct CheckReport {
    n: usize,
    components: usize,
    injective: bool,
    /// For bijections: whether the cycle-count criterion admits a root.
    permutation_criterion: Option<bool>,
    obstruction: Option<String>,
    certificate: Option<T3FiniteCertificate>,
}

#[derive(Serialize)]
struct BruteReport {
    count: usize,
    roots: Vec<FunctionalGraph>,
}

pub fn run(cmd: FiniteCommand) -> Result<Outcome> {
    match cmd {
        FiniteCommand::Components(args) => {
            let f = args.load()?;
            let partition = f.components();
            let report = ComponentsReport { members: partition.members(), partition };
            args.output.save_json("components.json", &report)?;
            args.output.show(&report, || {
                let lines: Vec<String> = report.members.iter().map(|c| format!("{c:?}")).collect();
                format!("{} components\n{}", report.partition.count, lines.join("\n"))
            })?;
            Ok(Outcome::Success)
        }
        FiniteCommand::Root(args) => {
            let f = args.load()?;
            let Some((method, g)) = construct_root(&f)? else {
                let reason = match f.t3_check_finite() {
                    Some(cert) => {
                        args.output.save_json("certificate.json", &cert)?;
                        format!("no square root: {cert:?}")
                    }
                    None => "no square root found".to_string(),
                };
                println!("{reason}");
                return Ok(Outcome::Negative);
            };
            if g.square() != f {
                bail!("internal error: constructed map does not square to the input");
            }
            let report = RootReport { method, root: g };
            args.output.save_json("root.json", &report.root)?;
            args.output.show(&report, || format!("g = {:?} ({method})", report.root.image()))?;
            Ok(Outcome::Success)
        }
        FiniteCommand::Check(args) => {
            let f = args.load()?;
            let (permutation_criterion, obstruction) = if f.is_injective() {
                let inventory = f.multiplicity_sequence()?;
                (Some(inventory.t2a_has_square_root()), inventory.square_root_obstruction())
            } else {
                (None, None)
            };
            let certificate = f.t3_check_finite();
            let negative = permutation_criterion == Some(false) || certificate.is_some();
            let report = CheckReport {
                n: f.len(),
                components: f.components().count,
                injective: f.is_injective(),
                permutation_criterion,
                obstruction,
                certificate,
            };
            args.output.save_json("check.json", &report)?;
            args.output.show(&report, || {
                let verdict = if negative { "no square root" } else { "no obstruction found" };
                format!("n = {}, {} components, injective = {}: {verdict}", report.n, report.components, report.injective)
            })?;
            Ok(if negative { Outcome::Negative } else { Outcome::Success })
        }
        FiniteCommand::Brute { graph, limit, guard } => {
            let f = graph.load()?;
            let options = BruteForceOptions { guard, ..Default::default() };
            let roots = f.brute_force_square_roots(limit, options)?;
            let report = BruteReport { count: roots.len(), roots };
            graph.output.save_json("roots.json", &report)?;
            graph.output.show(&report, || format!("{} square roots", report.count))?;
            Ok(if report.count == 0 { Outcome::Negative } else { Outcome::Success })
        }
    }
}

/// Tries the constructions in order of cost, falling back to enumeration.
fn construct_root(f: &FunctionalGraph) -> Result<Option<(&'static str, FunctionalGraph)>> {
    if f.t3_check_finite().is_some() {
        return Ok(None);
    }
    if let Some(g) = f.square_root_paired() {
        return Ok(Some(("paired components", g)));
    }
    if let Ok(g) = f.square_root_two_components() {
        return Ok(Some(("two components", g)));
    }
    if f.is_injective() {
        let sigma = Permutation::new(f.image().to_vec())?;
        return Ok(sigma
            .construct_nth_root(2)
            .map(|t| ("permutation cycles", FunctionalGraph::new(t.image().to_vec()).expect("permutation image"))));
    }
    match f.brute_force_square_roots(Some(1), BruteForceOptions::default()) {
        Ok(mut roots) => Ok(roots.pop().map(|g| ("enumeration", g))),
        Err(Error::GuardExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}
