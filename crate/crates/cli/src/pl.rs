use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use clap::{Args, Subcommand};
use iterroot::constructions::{
    approximate_pl, boundary_square_approx, extend_to_square, kill_square_root, lp_denseness_check,
    strip_rotation_example, verify_report, BoundaryOptions, CheckOutcome, KillOptions, KillReport,
    NoRootCertificate,
};
use iterroot::geometry::{kuhn_triangulation, mesh_decay, mesh_decay_csv, BoundingBox, PerturbConfig};
use iterroot::pl::ExprMap;
use iterroot::rational::{self, Rational};
use iterroot::{Error, Evaluable, PlMap, Point};
use serde::Serialize;

use crate::output::{read_json, to_json};
use crate::{Format, Outcome, OutputArgs};

#[derive(Subcommand)]
pub enum PlCommand {
    /// Grid interpolation f0 of h with a certified sup-distance bound.
    Approximate(RunConfig),
    /// Approximate h, then perturb it into a map with no square root (writes map.json, certificate.json).
    KillRoot(RunConfig),
    /// Re-check a no-root certificate against a map file.
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Square approximation of h near a boundary fixed point x0.
    BoundarySquare {
        #[command(flatten)]
        config: RunConfig,
        /// Fixed point of h on the cube boundary, e.g. "0,1/2"; defaults to the origin.
        #[arg(long)]
        x0: Option<String>,
    },
    /// The strip-rotation example on the square.
    StripExample {
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extend a map on a grid subcomplex to a square on the whole cube.
    ExtendSquare {
        /// PL map JSON supported on a grid subcomplex.
        #[arg(long)]
        map: PathBuf,
        /// Target box "lo:hi", coordinates comma separated, e.g. "1/2,1/2:1,1".
        #[arg(long = "box")]
        target: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric L^p distance between f and a square, against the closed-form bound.
    LpCheck {
        /// PL self-map of the cube.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mesh of iterated barycentric subdivisions of the cube.
    Subdivide {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Everything a pipeline run depends on; a fixed config gives byte-identical artifacts.
#[derive(Args)]
pub struct RunConfig {
    /// `id`, an expression such as "1 - x1, 1/2", or a file holding an expression or a PL map JSON.
    #[arg(long, default_value = "id")]
    pub h: String,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Target distance, as "p/q" or a decimal.
    #[arg(long, default_value = "1/10")]
    pub eps: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Certification grid step (boundary-square).
    #[arg(long)]
    pub grid: Option<String>,
    /// Subdivision depth cap.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Attempts per perturbed vertex.
    #[arg(long, default_value_t = 1000)]
    pub retries: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl RunConfig {
    fn eps(&self) -> Result<Rational> {
        let eps = parse_rational(&self.eps, "--eps")?;
        ensure!(eps > rational::zero(), "--eps must be positive");
        Ok(eps)
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.m >= 1, "--m must be positive");
        ensure!(self.retries >= 1, "--retries must be positive");
        ensure!(self.depth != Some(0), "--depth must be positive");
        Ok(())
    }

    fn load_h(&self) -> Result<Box<dyn Evaluable>> {
        let src = self.h.trim();
        if src == "id" {
            return Ok(Box::new(ExprMap::identity(self.m)));
        }
        let path = Path::new(src);
        let text = if path.is_file() {
            std::fs::read_to_string(path).with_context(|| format!("reading {src}"))?
        } else {
            src.to_string()
        };
        if text.trim_start().starts_with('{') {
            let f: PlMap = serde_json::from_str(&text).with_context(|| format!("parsing PL map {src}"))?;
            ensure!(f.dim() == self.m, "map has dimension {}, --m is {}", f.dim(), self.m);
            return Ok(Box::new(f));
        }
        Ok(Box::new(ExprMap::parse(text.trim(), self.m)?))
    }
}

#[derive(Serialize)]
struct ApproximationReport {
    resolution: usize,
    #[serde(with = "rational::serde_str")]
    bound: Rational,
}

#[derive(Serialize)]
struct KillRootReport {
    #[serde(with = "rational::serde_str")]
    eps: Rational,
    seed: u64,
    approximation: ApproximationReport,
    kill: KillReport,
    /// Approximation bound plus the exact perturbation; below `eps/2` by construction.
    #[serde(with = "rational::serde_str")]
    total_distance: Rational,
}

#[derive(Serialize)]
struct LpReport {
    p: u32,
    numeric: f64,
    #[serde(with = "rational::serde_str")]
    bound: Rational,
    cells_per_axis: usize,
}

pub fn run(cmd: PlCommand) -> Result<Outcome> {
    match cmd {
        PlCommand::Approximate(cfg) => {
            cfg.validate()?;
            let (h, eps) = (cfg.load_h()?, cfg.eps()?);
            let a = approximate_pl(h.as_ref(), &h.modulus(), &eps, cfg.m, &perturb_config(&cfg))
                .context("approximate step")?;
            let report = ApproximationReport { resolution: a.resolution, bound: a.bound.clone() };
            cfg.output.save_json("f0.json", &a.f0)?;
            cfg.output.save_json("approximation.json", &report)?;
            cfg.output.show(&report, || {
                format!("grid 1/{}, sup distance to h ≤ {}", a.resolution, rational::format(&a.bound))
            })?;
            Ok(Outcome::Success)
        }
        PlCommand::KillRoot(cfg) => {
            cfg.validate()?;
            ensure!(cfg.output.out.is_some(), "kill-root needs --out for the map and certificate files");
            let (h, eps) = (cfg.load_h()?, cfg.eps()?);
            let a = approximate_pl(h.as_ref(), &h.modulus(), &eps, cfg.m, &perturb_config(&cfg))
                .context("approximate step")?;
            let mut options = KillOptions::default();
            if let Some(d) = cfg.depth {
                options.max_depth = d;
            }
            let budget = &eps / rational::int(5);
            let out = kill_square_root(&a.f0, &budget, &options).context("kill step")?;
            let report = KillRootReport {
                total_distance: &a.bound + &out.report.perturbation,
                eps,
                seed: cfg.seed,
                approximation: ApproximationReport { resolution: a.resolution, bound: a.bound },
                kill: out.report,
            };
            cfg.output.save_json("map.json", &out.f)?;
            cfg.output.save_json("certificate.json", &out.certificate)?;
            cfg.output.save_json("report.json", &report)?;
            cfg.output.show(&report, || {
                format!("{}\ndistance to h ≤ {}", out.certificate, rational::format(&report.total_distance))
            })?;
            Ok(Outcome::Success)
        }
        PlCommand::Verify { map, certificate, output } => {
            let f: PlMap = read_json(&map)?;
            let cert: NoRootCertificate = read_json(&certificate)?;
            let checks = verify_report(&f, &cert);
            let ok = checks.iter().all(|c| c.passed);
            output.save_json("verification.json", &checks)?;
            match output.format {
                Some(Format::Csv) => print!("{}", checks_csv(&checks)),
                _ => output.show(&checks, || {
                    let mut lines: Vec<String> = checks
                        .iter()
                        .map(|c| format!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail))
                        .collect();
                    lines.push(if ok { "certificate verified".into() } else { "certificate rejected".into() });
                    lines.join("\n")
                })?,
            }
            Ok(if ok { Outcome::Success } else { Outcome::Negative })
        }
        PlCommand::BoundarySquare { config: cfg, x0 } => {
            cfg.validate()?;
            let (h, eps) = (cfg.load_h()?, cfg.eps()?);
            let x0 = match x0 {
                Some(s) => parse_point(&s)?,
                None => Point::origin(cfg.m),
            };
            let mut options = BoundaryOptions::default();
            if let Some(g) = &cfg.grid {
                options.grid_step = parse_rational(g, "--grid")?;
                ensure!(options.grid_step > rational::zero(), "--grid must be positive");
            }
            if let Some(d) = cfg.depth {
                options.max_depth = d;
            }
            let result = match boundary_square_approx(h.as_ref(), &h.modulus(), &x0, &eps, &options) {
                Err(e @ Error::CertificationFailed { .. }) => {
                    println!("{e}");
                    return Ok(Outcome::Negative);
                }
                r => r.context("boundary square approximation")?,
            };
            cfg.output.save_json("square.json", &result)?;
            cfg.output.show(&result, || {
                format!(
                    "ρ(g², h) ≤ {} < {} over {} cells (sampled max {})",
                    rational::format(&result.bound.bound),
                    rational::format(&eps),
                    result.bound.cells,
                    rational::format(&result.bound.sampled_max)
                )
            })?;
            Ok(Outcome::Success)
        }
        PlCommand::StripExample { eps, output } => {
            let eps = parse_rational(&eps, "--eps")?;
            let (_, example) = strip_rotation_example(&eps)?;
            output.save_json("strip.json", &example)?;
            output.show(&example, || format!("sup ‖f − g²‖ = {}", rational::format(&example.sup)))?;
            Ok(Outcome::Success)
        }
        PlCommand::ExtendSquare { map, target, output } => {
            let f: PlMap = read_json(&map)?;
            let b = parse_box(&target)?;
            let ext = extend_to_square(&f, &b)?;
            output.save_json("square.json", &ext)?;
            output.show(&ext, || {
                format!(
                    "g on grid 1/{} ({} free vertices), g̃(x) = {} + {}·x",
                    ext.resolution,
                    ext.free_vertices,
                    ext.offset,
                    rational::format(&ext.scale)
                )
            })?;
            Ok(Outcome::Success)
        }
        PlCommand::LpCheck { map, eps, p, output } => {
            let f: PlMap = read_json(&map)?;
            let eps = parse_rational(&eps, "--eps")?;
            let check = match lp_denseness_check(&f, &eps, p) {
                Err(e @ Error::CertificationFailed { .. }) => {
                    println!("{e}");
                    return Ok(Outcome::Negative);
                }
                r => r?,
            };
            let report = LpReport { p, numeric: check.numeric, bound: check.bound.clone(), cells_per_axis: check.cells_per_axis };
            output.save_json("square.json", &check.square)?;
            output.save_json("lp.json", &report)?;
            output.show(&report, || {
                format!("∫‖g² − f‖^{p} ≈ {:.9} ≤ {}", report.numeric, rational::format(&report.bound))
            })?;
            Ok(Outcome::Success)
        }
        PlCommand::Subdivide { m, levels, output } => {
            ensure!(m >= 1, "--m must be positive");
            let rows = mesh_decay(&kuhn_triangulation(m, 1), levels)?;
            let csv = mesh_decay_csv(&rows);
            output.save_text("mesh.csv", &csv)?;
            match output.format {
                Some(Format::Json) => {
                    let json: Vec<_> =
                        rows.iter().map(|(l, mesh)| serde_json::json!({"l": l, "mesh": rational::format(mesh)})).collect();
                    print!("{}", to_json(&json)?);
                }
                _ => print!("{csv}"),
            }
            Ok(Outcome::Success)
        }
    }
}

fn perturb_config(cfg: &RunConfig) -> PerturbConfig {
    PerturbConfig { seed: cfg.seed, retry_budget: cfg.retries, ..Default::default() }
}

fn parse_rational(s: &str, flag: &str) -> Result<Rational> {
    rational::parse(s).with_context(|| format!("{flag}: {s:?} is not a rational"))
}

fn parse_point(s: &str) -> Result<Point> {
    let coords = s.split(',').map(|c| parse_rational(c, "point")).collect::<Result<Vec<_>>>()?;
    Ok(Point::new(coords))
}

fn parse_box(s: &str) -> Result<BoundingBox> {
    let (lo, hi) = s.split_once(':').context("--box must look like \"lo:hi\"")?;
    let (lo, hi) = (parse_point(lo)?, parse_point(hi)?);
    ensure!(lo.dim() == hi.dim(), "box corners differ in dimension");
    Ok(BoundingBox { lo, hi })
}

fn checks_csv(checks: &[CheckOutcome]) -> String {
    let mut s = String::from("check,passed,detail\n");
    for c in checks {
        s += &format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "\"\""));
    }
    s
}
