//! The `polytverb` command line.
//!
//! Exit codes: 0 success, 1 a negative answer (`verify` failed, `oracle`
//! found nothing), 2 degenerate zero, 3 solver failure, 4 wrong point
//! count, 64 malformed input or usage, 65 unsupported kind or dimension.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{find_partition, verify_result, CountPolicy, FindOptions};
use crate::error::{Error, Result};
use crate::geometry::{generate_points, PlaneFrame, Tolerances};
use crate::io::{read_json, to_json, InstanceFile, ResultFile};
use crate::oracle::{existence_rate, polytopal_partition_exists, OracleOptions};
use crate::problem::{required_points, ProblemKind};
use crate::svg::render;

pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_SOLVER_FAILED: i32 = 3;
pub const EXIT_WRONG_COUNT: i32 = 4;
pub const EXIT_MALFORMED: i32 = 64;
pub const EXIT_UNSUPPORTED: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "polytverb", version, about = "Polytopal Tverberg-type partitions of point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a seeded random instance.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, env = "POLYTVERB_SEED", default_value_t = 0)]
        seed: u64,
        /// Coordinates are uniform in [-scale, scale].
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Split the points into this many consecutive color classes of
        /// equal size.
        #[arg(long)]
        color_classes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a certified partition.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, env = "POLYTVERB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::solver::EPS_ZERO)]
        eps_zero: f64,
        #[arg(long, default_value_t = crate::geometry::DEFAULT_EPS_KILL)]
        eps_kill: f64,
        #[arg(long, default_value_t = crate::geometry::DEFAULT_EPS_LEAD)]
        eps_lead: f64,
        #[arg(long, default_value_t = FindOptions::default().max_iter)]
        max_iter: usize,
        #[arg(long, default_value_t = 5)]
        retries: usize,
        /// Accept more points than the problem needs.
        #[arg(long)]
        surplus: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a result against its instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        result: PathBuf,
    },
    /// Decide existence by exhaustive search (small instances only).
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        /// Enumerate every labeling instead of one per translation class.
        #[arg(long)]
        no_dedup: bool,
    },
    /// Failure rate of the oracle on random instances one point short.
    Tightness {
        #[command(flatten)]
        kind: KindArgs,
        /// Ambient dimension for kinds that do not fix it.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "POLYTVERB_SEED", default_value_t = 0)]
        seed: u64,
        /// Points per trial; defaults to one fewer than required.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draw an instance and its partition as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Coordinate pair to draw, as `i,j`.
        #[arg(long, default_value = "0,1", value_parser = parse_pair)]
        proj: [usize; 2],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindName {
    Polygon,
    Multiprism,
    Prism,
    Orthotope,
    ComplexFlat,
    Colored,
}

#[derive(Args, Debug, Clone)]
pub struct KindArgs {
    #[arg(long, value_enum)]
    pub kind: KindName,
    /// Polygon size.
    #[arg(long)]
    pub r: Option<usize>,
    /// Polygon sizes of a multiprism or prism, as `3,4`.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<usize>>,
    /// Coordinate plane `i,j` of a polygon or of a single-factor prism.
    #[arg(long, value_parser = parse_pair, conflicts_with = "frame")]
    pub plane: Option<[usize; 2]>,
    /// Coordinate planes of a multiprism, as `0,1;2,3`.
    #[arg(long)]
    pub planes: Option<String>,
    /// JSON file `{"u": [...], "w": [...]}` with an orthonormal plane frame.
    #[arg(long)]
    pub frame: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => Ok([
            a.parse().map_err(|_| format!("bad index {a:?}"))?,
            b.parse().map_err(|_| format!("bad index {b:?}"))?,
        ]),
        _ => Err(format!("expected i,j, got {s:?}")),
    }
}

impl KindArgs {
    /// The problem for points in `R^dim`.
    pub fn resolve(&self, dim: usize) -> Result<ProblemKind> {
        let r = || {
            self.r
                .ok_or_else(|| Error::Unsupported(format!("--kind {:?} needs --r", self.kind)))
        };
        let factors = || {
            self.factors
                .clone()
                .ok_or_else(|| Error::Unsupported("--factors is required".into()))
        };
        let planes = || -> Result<Option<Vec<[usize; 2]>>> {
            match (&self.planes, self.plane) {
                (Some(list), _) => list
                    .split(';')
                    .map(|p| parse_pair(p).map_err(Error::Unsupported))
                    .collect::<Result<Vec<_>>>()
                    .map(Some),
                (None, Some(p)) => Ok(Some(vec![p])),
                (None, None) => Ok(None),
            }
        };
        let kind = match self.kind {
            KindName::Polygon => {
                let r = r()?;
                match (&self.frame, self.plane) {
                    (Some(path), _) => ProblemKind::PolygonInPlane {
                        r,
                        frame: read_json::<PlaneFrame>(path)?,
                    },
                    (None, Some(p)) if !(dim == 2 && p == [0, 1]) => ProblemKind::PolygonInPlane {
                        r,
                        frame: PlaneFrame::axis(dim, p[0], p[1])?,
                    },
                    _ if dim == 2 => ProblemKind::Polygon { r },
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "a polygon in R^{dim} needs --plane or --frame"
                        )))
                    }
                }
            }
            KindName::Multiprism => ProblemKind::Multiprism {
                factors: factors()?,
                planes: planes()?,
            },
            KindName::Prism => ProblemKind::Prism {
                factors: factors()?,
                planes: planes()?,
            },
            KindName::Orthotope => ProblemKind::Orthotope { k: dim },
            KindName::ComplexFlat => ProblemKind::PolygonComplexFlat { r: r()?, dim },
            KindName::Colored => ProblemKind::ColoredPolygon { r: r()?, dim },
        };
        if kind.dimension() != dim {
            return Err(Error::Unsupported(format!(
                "{} lives in R^{}, the instance in R^{dim}",
                kind.name(),
                kind.dimension()
            )));
        }
        // surfaces invalid parameters before any work
        required_points(&kind)?;
        Ok(kind)
    }

    /// Dimension implied by the kind alone.
    fn natural_dimension(&self) -> Option<usize> {
        match self.kind {
            KindName::Polygon if self.frame.is_none() && self.plane.is_none() => Some(2),
            KindName::Multiprism => self.factors.as_ref().map(|f| 2 * f.len()),
            KindName::Prism => self.factors.as_ref().map(|f| 2 * f.len() + 1),
            _ => None,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Degenerate { .. } | Error::EmptyPart { .. } => EXIT_DEGENERATE,
        Error::SolverFailed(_)
        | Error::PreconditionFailed { .. }
        | Error::InvalidCertificate { .. }
        | Error::ConstraintViolated(_) => EXIT_SOLVER_FAILED,
        Error::WrongCount { .. } => EXIT_WRONG_COUNT,
        Error::Malformed(_) | Error::Io(_) | Error::Json(_) => EXIT_MALFORMED,
        Error::InvalidGroup(_)
        | Error::GroupMismatch(_)
        | Error::IncompleteValues { .. }
        | Error::DimensionMismatch { .. }
        | Error::Coverage(_)
        | Error::NonOrthonormalFrame(_)
        | Error::KindMismatch(_)
        | Error::Unsupported(_)
        | Error::EnumerationBound(_) => EXIT_UNSUPPORTED,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_instance(path: &std::path::Path) -> Result<crate::geometry::PointCloud> {
    read_json::<InstanceFile>(path)?
        .to_cloud()
        .map_err(|e| match e {
            Error::DimensionMismatch { .. } => Error::Malformed(e.to_string()),
            other => other,
        })
}

/// Runs one command and returns its exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate {
            dim,
            count,
            seed,
            scale,
            color_classes,
            out,
        } => {
            let mut cloud = generate_points(dim, count, seed, scale)?;
            if let Some(n) = color_classes {
                if n == 0 || count % n != 0 {
                    return Err(Error::Unsupported(format!("{count} points do not split into {n} equal classes")));
                }
                let size = count / n;
                cloud = cloud.with_colors((0..count).map(|j| j / size).collect())?;
            }
            let mut file = InstanceFile::from_cloud(&cloud);
            file.metadata = Some(serde_json::json!({ "seed": seed, "scale": scale }));
            emit(&out, &to_json(&file)?)?;
            Ok(0)
        }
        Command::Solve {
            input,
            kind,
            seed,
            eps_zero,
            eps_kill,
            eps_lead,
            max_iter,
            retries,
            surplus,
            out,
        } => {
            let cloud = load_instance(&input)?;
            let kind = kind.resolve(cloud.dimension())?;
            let options = FindOptions {
                tolerances: Tolerances {
                    kill: eps_kill,
                    lead: eps_lead,
                },
                eps_zero,
                max_iter,
                seed,
                retries,
                count_policy: if surplus { CountPolicy::AtLeast } else { CountPolicy::Exact },
            };
            let result = find_partition(&cloud, &kind, &options)?;
            eprintln!(
                "status=valid kill={:e} lead={:e} pivots={} restarts={}",
                result.certificate.residual,
                result.certificate.leading_magnitude,
                result.report.pivots,
                result.report.restarts
            );
            emit(&out, &to_json(&ResultFile::from_result(&result))?)?;
            Ok(0)
        }
        Command::Verify { input, result } => {
            let cloud = load_instance(&input)?;
            let file: ResultFile = read_json(&result)?;
            let result = file.to_result()?;
            let report = verify_result(&cloud, &result.kind, &result);
            println!("{:<18} {:>24} {:>12}  pass", "check", "value", "tolerance");
            for c in &report.checks {
                println!("{:<18} {:>24e} {:>12e}  {}", c.name, c.value, c.tolerance, c.pass);
            }
            println!("verified={}", report.passed());
            Ok(if report.passed() { 0 } else { EXIT_NEGATIVE })
        }
        Command::Oracle {
            input,
            kind,
            no_dedup,
        } => {
            let cloud = load_instance(&input)?;
            let kind = kind.resolve(cloud.dimension())?;
            let outcome = polytopal_partition_exists(&cloud, &kind, OracleOptions { dedup: !no_dedup })?;
            println!("found={}", outcome.found);
            println!("labelings_checked={}", outcome.labelings_checked);
            if let Some(labeling) = &outcome.labeling {
                let text: Vec<String> = labeling.iter().map(|&g| kind_group_key(&kind, g)).collect();
                println!("labeling={}", text.join(" "));
            }
            Ok(if outcome.found { 0 } else { EXIT_NEGATIVE })
        }
        Command::Tightness {
            kind,
            dim,
            trials,
            seed,
            points,
            jobs,
        } => {
            let dim = dim
                .or_else(|| kind.natural_dimension())
                .ok_or_else(|| Error::Unsupported("--dim is required for this kind".into()))?;
            let kind = kind.resolve(dim)?;
            let points = match points {
                Some(p) => p,
                None => required_points(&kind)? - 1,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Unsupported(e.to_string()))?;
            let found = pool.install(|| existence_rate(&kind, points, trials, seed))?;
            let rate = 1.0 - found;
            let failures = (rate * trials as f64).round() as usize;
            println!("kind={} points={points} trials={trials} failures={failures} rate={rate}", kind.name());
            Ok(0)
        }
        Command::Render {
            input,
            result,
            out,
            proj,
        } => {
            let cloud = load_instance(&input)?;
            let file: ResultFile = read_json(&result)?;
            let svg = render(&cloud, &file.to_result()?, proj)?;
            emit(&out, &svg)?;
            Ok(0)
        }
    }
}

fn kind_group_key(kind: &ProblemKind, g: usize) -> String {
    kind.group().map(|grp| grp.element(g).to_string()).unwrap_or_default()
}
