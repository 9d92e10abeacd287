//! `freesumlab` command-line interface.
//!
//! Exit codes: 0 on success (a `false` verdict is still success), 1 for
//! usage, parse and precondition errors, 2 for internal inconsistencies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use freesumlab::ehrhart::{ehrhart_counts, interpolate_counts};
use freesumlab::freesum::{analyze_pair, free_sum, witness_sets, AnalysisOptions};
use freesumlab::fuzz::{run_fuzz, FuzzConfig};
use freesumlab::io::{read_polytope_file, PolytopeFile};
use freesumlab::linalg::format_rational;
use freesumlab::monoid::{configuration, default_hilbert_cap, h_polynomial, idp_check, IdpMode};
use freesumlab::zoo::run_claims;
use freesumlab::{ehrhart, Error, Limits, VPolytope};

#[derive(Parser, Debug)]
#[command(name = "freesumlab", version, about = "Exact lattice-polytope toolkit for free sums and the integer decomposition property")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print only the essential result.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertices and facet inequalities.
    Facets { file: PathBuf },
    /// Lattice points of a dilate.
    Points {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        dilate: i64,
    },
    /// Ehrhart counts and polynomial.
    Ehrhart { file: PathBuf },
    /// Delta-polynomial.
    Delta { file: PathBuf },
    /// Hilbert function and h-polynomial of the configuration.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Integer decomposition property.
    Idp {
        file: PathBuf,
        /// Check every level up to N instead of the bounded range.
        #[arg(long, value_name = "N")]
        exhaustive: Option<usize>,
    },
    /// Witness sets with their interior points and minima.
    WitnessSets { file: PathBuf },
    /// Free sum of two polytopes.
    FreeSum {
        file: PathBuf,
        other: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full pair report.
    Check {
        file: PathBuf,
        other: PathBuf,
        #[arg(long)]
        skip_actual: bool,
    },
    /// Recompute every claim about the bundled example polytopes.
    Examples,
    /// Random pair corpus; stops with exit 2 on the first inconsistency.
    Fuzz {
        #[arg(long, default_value_t = 2)]
        dim_p: usize,
        #[arg(long, default_value_t = 2)]
        dim_q: usize,
        #[arg(long, default_value_t = 2)]
        coord_bound: i64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Do not force the origin into each polytope.
        #[arg(long)]
        no_origin: bool,
        /// Where to write the failing pair.
        #[arg(long, default_value = "fuzz-reproducer.json")]
        reproducer: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

struct Output {
    text: String,
    json: Value,
    /// Text printed under `--quiet`.
    brief: String,
    exit: u8,
}

impl Output {
    fn new(text: String, json: Value, brief: String) -> Self {
        Output {
            text,
            json,
            brief,
            exit: 0,
        }
    }
}

fn load(path: &Path, limits: Limits) -> Result<VPolytope, Failure> {
    Ok(read_polytope_file(path)?.into_polytope(limits)?)
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let limits = Limits::from_env();
    match &cli.command {
        Command::Facets { file } => {
            let p = load(file, limits)?;
            let facets = p.facets()?;
            let mut text = String::new();
            writeln!(text, "vertices ({}):", p.vertices().len()).unwrap();
            for v in p.vertices() {
                writeln!(text, "  {v}").unwrap();
            }
            writeln!(text, "facets ({}):", facets.len()).unwrap();
            for f in facets {
                writeln!(text, "  {f}").unwrap();
            }
            let brief = facets.iter().map(|f| format!("{f}\n")).collect();
            let json = json!({
                "ambient_dim": p.ambient_dim(),
                "vertices": p.vertices(),
                "facets": facets,
            });
            Ok(Output::new(text, json, brief))
        }
        Command::Points { file, dilate } => {
            if *dilate < 0 {
                return Err(Failure::Usage("--dilate must be nonnegative".into()));
            }
            let p = load(file, limits)?;
            let pts = if *dilate == 0 {
                p.facets()?;
                vec![freesumlab::LatticePoint::origin(p.ambient_dim())]
            } else {
                p.lattice_points(*dilate)?
            };
            let mut text = format!("{} lattice points in {}P:\n", pts.len(), dilate);
            for x in &pts {
                writeln!(text, "  {x}").unwrap();
            }
            let json = json!({"dilate": dilate, "count": pts.len(), "points": pts});
            Ok(Output::new(text, json, format!("{}\n", pts.len())))
        }
        Command::Ehrhart { file } => {
            let p = load(file, limits)?;
            let d = p.ambient_dim();
            let counts = ehrhart_counts(&p, d + 2)?;
            let poly = interpolate_counts(&counts, d)?;
            let text = format!("counts i(0..{}): {:?}\ni(P, n) = {poly}\n", d + 2, counts);
            let json = json!({"counts": counts, "polynomial": poly});
            Ok(Output::new(text, json, format!("{poly}\n")))
        }
        Command::Delta { file } => {
            let p = load(file, limits)?;
            let delta = ehrhart::delta_polynomial(&p)?;
            Ok(Output::new(format!("{delta}\n"), to_json(&delta), format!("{delta}\n")))
        }
        Command::Hilbert { file, cap } => {
            let p = load(file, limits)?;
            let cap = cap.unwrap_or_else(|| default_hilbert_cap(p.ambient_dim()));
            let data = h_polynomial(&configuration(&p)?, cap)?;
            let mut text = format!("H(0..{}): {:?}\nh = {}\n", data.values.len() - 1, data.values, data.h_poly);
            if !data.stabilized {
                writeln!(text, "warning: not stabilized within cap {cap}; h is from partial data").unwrap();
            }
            Ok(Output::new(text, to_json(&data), format!("{}\n", data.h_poly)))
        }
        Command::Idp { file, exhaustive } => {
            let p = load(file, limits)?;
            let mode = exhaustive.map_or(IdpMode::Bounded, IdpMode::Exhaustive);
            let v = idp_check(&p, mode)?;
            let max_level = mode.max_level(p.ambient_dim());
            let mode_name = if exhaustive.is_some() { "exhaustive" } else { "bounded" };
            let mut text = format!("idp: {} (levels 2..={max_level}, {mode_name})\n", v.idp);
            if let Some(w) = &v.witness {
                writeln!(text, "witness: {} in {}P has no decomposition", w.point, w.level).unwrap();
            }
            let json = json!({
                "idp": v.idp,
                "mode": mode_name,
                "max_level": max_level,
                "levels_checked": v.levels_checked,
                "witness": v.witness,
            });
            Ok(Output::new(text, json, format!("{}\n", v.idp)))
        }
        Command::WitnessSets { file } => {
            let p = load(file, limits)?;
            let ws = witness_sets(&p)?;
            let mut text = format!("{} witness set(s)\n", ws.len());
            let mut brief = String::new();
            for w in &ws {
                let subset: Vec<String> = w.subset.iter().map(ToString::to_string).collect();
                let interior: Vec<String> = w.interior_points.iter().map(ToString::to_string).collect();
                write!(
                    text,
                    "W = {{{}}}  min = {}  int(W) = {{{}}}",
                    subset.join(", "),
                    format_rational(&w.min_value),
                    interior.join(", ")
                )
                .unwrap();
                if w.relative_only {
                    text.push_str("  [relative interior only]");
                }
                text.push('\n');
                writeln!(brief, "{}", format_rational(&w.min_value)).unwrap();
            }
            Ok(Output::new(text, to_json(&ws), brief))
        }
        Command::FreeSum { file, other, output } => {
            let p = load(file, limits)?;
            let q = load(other, limits)?;
            let fs = free_sum(&p, &q)?;
            let pf = PolytopeFile::from_polytope(&fs, Some("free_sum".into()));
            if let Some(path) = output {
                std::fs::write(path, pf.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            let mut text = format!("free sum: dimension {}, {} vertices\n", fs.affine_dim(), fs.vertices().len());
            for v in fs.vertices() {
                writeln!(text, "  {v}").unwrap();
            }
            Ok(Output::new(text, to_json(&pf), String::new()))
        }
        Command::Check {
            file,
            other,
            skip_actual,
        } => {
            let p = load(file, limits)?;
            let q = load(other, limits)?;
            let r = analyze_pair(&p, &q, AnalysisOptions { skip_actual: *skip_actual })?;
            let mut out = Output::new(format!("{r}\n"), to_json(&r), format!("consistent: {}\n", r.consistent));
            if !r.consistent {
                out.exit = 2;
            }
            Ok(out)
        }
        Command::Examples => {
            let claims = run_claims();
            let mut text = String::new();
            for c in &claims {
                writeln!(
                    text,
                    "{} {}: {} ({})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.statement,
                    c.detail
                )
                .unwrap();
            }
            let failed = claims.iter().filter(|c| !c.passed).count();
            writeln!(text, "{} claims, {} failed", claims.len(), failed).unwrap();
            let mut out = Output::new(text, to_json(&claims), format!("{failed} failed\n"));
            if failed > 0 {
                out.exit = 2;
            }
            Ok(out)
        }
        Command::Fuzz {
            dim_p,
            dim_q,
            coord_bound,
            count,
            seed,
            no_origin,
            reproducer,
        } => {
            let config = FuzzConfig {
                dim_p: *dim_p,
                dim_q: *dim_q,
                coord_bound: *coord_bound,
                count: *count,
                seed: *seed,
                include_origin: !no_origin,
            };
            config.validate()?;
            let report = run_fuzz(&config, limits)?;
            let mut text = format!("{report}\n");
            let mut out_exit = 0;
            if let Some(rep) = &report.first_inconsistency {
                let body = serde_json::to_string_pretty(rep).expect("reproducer serializes");
                std::fs::write(reproducer, body + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", reproducer.display())))?;
                writeln!(text, "reproducer written to {}", reproducer.display()).unwrap();
                out_exit = 2;
            }
            let brief = format!("inconsistencies: {}\n", report.inconsistencies);
            let mut out = Output::new(text, to_json(&report), brief);
            out.exit = out_exit;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json output"));
            } else if cli.quiet {
                print!("{}", out.brief);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(2)
        }
    }
}
