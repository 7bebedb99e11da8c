use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tridom::bounds;
use tridom::broadcast::{dominates, first_undominated, is_efficient_window};
use tridom::lattice::matchstick;
use tridom::patterns::{enumerate, mirror_pattern, pattern};
use tridom::render::{render_ascii, render_svg, RenderRegion, RenderSpec, ShowFlags};
use tridom::selftest;
use tridom::solver::{solve, Mode, SolveInstance};
use tridom::{BroadcastSet, Params, Window};

#[derive(Parser)]
#[command(name = "tridom", version, about = "(t,r) broadcast domination on the triangular grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Towers of the efficient periodic pattern inside a window.
    Pattern {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: WindowArgs,
        /// Use the mirrored pattern.
        #[arg(long)]
        mirror: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a tower set: efficiency on a window, or domination of T_n with --n.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        mirror: bool,
        /// JSON file with a list of [m, n] towers instead of the pattern.
        #[arg(long)]
        towers: Option<PathBuf>,
        /// Check domination of T_n instead of window efficiency.
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest dominating set of T_n, or any set of at most --k towers.
    Solve {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        k: Option<u64>,
        /// Search node limit.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Known lower and upper bounds for T_n with a certified witness.
    Bounds {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw T_n (with --n) or a window, with pattern, solved or given towers.
    Render {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, conflicts_with = "window")]
        n: Option<u32>,
        /// Half-width of the window.
        #[arg(long)]
        window: Option<u32>,
        #[arg(long, value_enum, default_value_t = TowerSource::Pattern)]
        source: TowerSource,
        #[arg(long, required_if_eq("source", "file"))]
        towers: Option<PathBuf>,
        /// Print reception at every vertex.
        #[arg(long)]
        values: bool,
        /// Outline each tower's reach.
        #[arg(long)]
        reach: bool,
        /// Outline the region.
        #[arg(long)]
        boundary: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance oracle, ball sizes and pattern efficiency up to t = 5.
    Selftest {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    t: u32,
    #[arg(long)]
    r: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Failure> {
        Params::new(self.t, self.r).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct WindowArgs {
    /// Window half-width; defaults to 6t.
    #[arg(long)]
    window: Option<u32>,
    /// Window margin; defaults to t.
    #[arg(long)]
    margin: Option<u32>,
}

impl WindowArgs {
    fn window(&self, p: Params) -> Window {
        Window::new(self.window.unwrap_or(6 * p.t()), self.margin.unwrap_or(p.t()))
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TowerSource {
    Pattern,
    Mirror,
    Solve,
    File,
}

enum Failure {
    Usage(String),
    Other(String),
}

/// Text to emit plus whether the checked property held.
struct Output {
    text: String,
    ok: bool,
}

fn json_output(value: Value, ok: bool) -> Output {
    let mut text = serde_json::to_string_pretty(&value).expect("json values always serialise");
    text.push('\n');
    Output { text, ok }
}

fn only_json(format: Format, verb: &str) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        _ => Err(Failure::Usage(format!("--format: {verb} only supports json"))),
    }
}

fn read_towers(path: &PathBuf) -> Result<BroadcastSet, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--towers {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--towers {}: {e}", path.display())))
}

fn pattern_towers(p: Params, window: &Window, mirror: bool) -> (tridom::PatternLattice, BroadcastSet) {
    let lattice = if mirror { mirror_pattern(p) } else { pattern(p) };
    (lattice, enumerate(&lattice, window))
}

fn drawing(spec: &RenderSpec, format: Format) -> Output {
    let text = match format {
        Format::Svg => render_svg(spec),
        _ => render_ascii(spec),
    };
    Output { text, ok: true }
}

fn run(command: Command) -> Result<(Output, Option<PathBuf>), Failure> {
    match command {
        Command::Pattern { params, window, mirror, output } => {
            let p = params.params()?;
            let w = window.window(p);
            let (lattice, towers) = pattern_towers(p, &w, mirror);
            let out = match output.format {
                Format::Json => {
                    json_output(json!({"t": p.t(), "r": p.r(), "basis": lattice.basis, "towers": towers}), true)
                }
                format => {
                    let spec = RenderSpec {
                        region: RenderRegion::Window(w),
                        towers: towers.iter().filter(|q| w.core_contains(**q)).copied().collect(),
                        params: p,
                        show: ShowFlags::default(),
                    };
                    drawing(&spec, format)
                }
            };
            Ok((out, output.out))
        }
        Command::Verify { params, window, mirror, towers, n, output } => {
            only_json(output.format, "verify")?;
            let p = params.params()?;
            let w = window.window(p);
            if let Some(n) = n {
                let set = match &towers {
                    Some(path) => read_towers(path)?,
                    None => return Err(Failure::Usage("--n needs --towers".into())),
                };
                let region = matchstick(n);
                let first = first_undominated(region.points(), &set, p);
                let out = json_output(
                    json!({"t": p.t(), "r": p.r(), "n": n, "towers": set.len(), "dominates": first.is_none(), "undominated": first}),
                    first.is_none(),
                );
                return Ok((out, output.out));
            }
            let set = match &towers {
                Some(path) => read_towers(path)?,
                None => pattern_towers(p, &w, mirror).1,
            };
            let result = is_efficient_window(&set, p, &w);
            let out = json_output(
                json!({
                    "t": p.t(), "r": p.r(), "window": w.half_width, "margin": w.margin,
                    "efficient": result.is_ok(), "violation": result.as_ref().err(),
                }),
                result.is_ok(),
            );
            Ok((out, output.out))
        }
        Command::Solve { n, params, k, budget, output } => {
            let p = params.params()?;
            let mut inst = match k {
                Some(k) => SolveInstance::feasibility(n, p, k),
                None => SolveInstance::optimize(n, p),
            };
            if let Some(b) = budget {
                inst = inst.with_budget(b);
            }
            let res = solve(&inst);
            if !res.witness.is_empty() && !dominates(matchstick(n).points(), &res.witness, p) {
                return Err(Failure::Other("solver returned a non-dominating set".into()));
            }
            let out = match output.format {
                Format::Json => json_output(
                    json!({
                        "n": n, "t": p.t(), "r": p.r(),
                        "mode": match inst.mode { Mode::Optimize => "optimize", Mode::Feasibility(_) => "feasibility" },
                        "k": k,
                        "status": res.status, "value": res.value, "witness": res.witness,
                        "nodes": res.stats.nodes, "lower_bound": res.lower_bound,
                        "elapsed": res.stats.elapsed.as_secs_f64(),
                    }),
                    true,
                ),
                format => drawing(
                    &RenderSpec {
                        region: RenderRegion::Matchstick(matchstick(n)),
                        towers: res.witness.clone(),
                        params: p,
                        show: ShowFlags { boundary: true, ..Default::default() },
                    },
                    format,
                ),
            };
            if matches!(inst.mode, Mode::Feasibility(_)) && res.status == tridom::solver::Status::Infeasible {
                eprintln!("no dominating set of size {} exists", res.value);
            }
            Ok((out, output.out))
        }
        Command::Bounds { params, n, output } => {
            only_json(output.format, "bounds")?;
            let p = params.params()?;
            let rep = bounds::report(p, n).map_err(|e| Failure::Other(e.to_string()))?;
            let out = json_output(
                json!({
                    "t": p.t(), "r": p.r(), "n": n,
                    "lower": rep.lower, "upper": rep.upper, "exact": rep.exact,
                    "witness": rep.witness, "sources": rep.sources,
                }),
                true,
            );
            Ok((out, output.out))
        }
        Command::Render { params, n, window, source, towers, values, reach, boundary, output } => {
            let p = params.params()?;
            if output.format == Format::Json {
                return Err(Failure::Usage("--format: render supports svg and ascii".into()));
            }
            let region = match (n, window) {
                (Some(n), _) => RenderRegion::Matchstick(matchstick(n)),
                (None, Some(l)) => RenderRegion::Window(Window::new(l, p.t())),
                (None, None) => return Err(Failure::Usage("render needs --n or --window".into())),
            };
            let set = match (source, &region) {
                (TowerSource::File, _) => read_towers(towers.as_ref().expect("required by clap"))?,
                (TowerSource::Solve, RenderRegion::Matchstick(r)) => solve(&SolveInstance::optimize(r.n(), p)).witness,
                (TowerSource::Solve, RenderRegion::Window(_)) => {
                    return Err(Failure::Usage("--source solve needs --n".into()));
                }
                (TowerSource::Pattern | TowerSource::Mirror, RenderRegion::Matchstick(r)) => {
                    let w = Window::new(r.n(), 0).centered_at(tridom::LatticePoint::ORIGIN);
                    let (_, all) = pattern_towers(p, &w, source == TowerSource::Mirror);
                    all.iter().filter(|q| r.contains(**q)).copied().collect()
                }
                (TowerSource::Pattern | TowerSource::Mirror, RenderRegion::Window(w)) => {
                    let (_, all) = pattern_towers(p, w, source == TowerSource::Mirror);
                    all.iter().filter(|q| w.core_contains(**q)).copied().collect()
                }
            };
            let spec = RenderSpec {
                region,
                towers: set,
                params: p,
                show: ShowFlags { reception_values: values, reach_hexagons: reach, boundary },
            };
            Ok((drawing(&spec, output.format), output.out))
        }
        Command::Selftest { output } => {
            only_json(output.format, "selftest")?;
            let report = selftest::run();
            for check in report.checks.iter().filter(|c| !c.passed) {
                for f in &check.failures {
                    eprintln!("{}: {f}", check.name);
                }
            }
            let ok = report.passed;
            Ok((json_output(serde_json::to_value(&report).expect("report serialises"), ok), output.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((output, path)) => {
            match path {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &output.text) {
                        eprintln!("error: --out {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", output.text),
            }
            // a command that ran but found the property false exits 1
            if output.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
