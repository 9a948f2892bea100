//! `transfinite` command-line tool.
//!
//! Exit codes: 0 success, 1 the network failed validation, 2 bad
//! arguments, 3 an input or output file could not be read or written.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use transfinite::bench::{run_bench, BenchConfig, BenchResolution, TARGET_TRIANGLES};
use transfinite::paramlines::{default_levels, param_lines, to_svg};
use transfinite::tessellation::{
    mean_curvature, write_mesh, ColorRamp, MeshFormat, DEVIATION, MEAN_CURVATURE,
};
use transfinite::{
    bundled, deviation, surface_deviation, tessellate, triangulate_domain, validate_network,
    CenterControl, CurveNetwork, DomainPolygon, Error, Patch, PatchConfig, Scheme,
    Tolerances, Uv, ValidationStatus, Vec3,
};
use transfinite_service::{ServiceConfig, DEFAULT_PORT, DEFAULT_RESOLUTION_CAP};

#[derive(Parser)]
#[command(name = "transfinite", version, about = "Multi-sided transfinite surface patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check corner closure and twist compatibility of a network.
    Validate { network: PathBuf },
    /// Evaluate one surface point.
    Eval {
        network: PathBuf,
        #[arg(long, default_value = "MC")]
        scheme: Scheme,
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
        #[arg(long, allow_negative_numbers = true)]
        v: f64,
        #[command(flatten)]
        center: CenterArgs,
    },
    /// Tessellate a patch and write OBJ or PLY (chosen by extension).
    Mesh {
        network: PathBuf,
        #[arg(long, default_value = "MC")]
        scheme: Scheme,
        #[arg(long, default_value_t = 58)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        center: CenterArgs,
        /// Add a mean curvature channel (coloured in PLY output).
        #[arg(long)]
        curvature: bool,
        /// Curvature that maps to full red; defaults to the largest magnitude.
        #[arg(long)]
        clamp: Option<f64>,
    },
    /// Compare two schemes on the same domain mesh.
    Deviate {
        network: PathBuf,
        /// Two schemes, `A,B`.
        #[arg(long, value_delimiter = ',', default_value = "MP,MC")]
        schemes: Vec<Scheme>,
        #[arg(long, default_value_t = 58)]
        resolution: usize,
        /// Deviation in percent that maps to full red.
        #[arg(long, default_value_t = 0.5)]
        clamp: f64,
        /// `surface`: distance to the other surface; `parameter`: distance
        /// between points at the same domain position.
        #[arg(long, default_value = "surface", value_parser = ["surface", "parameter"])]
        metric: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot constant-parameter lines of one side as SVG.
    Paramlines {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        side: usize,
        /// Use the constrained distance instead of the plain one.
        #[arg(long)]
        constrained: bool,
        #[arg(long, default_value_t = 60)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the schemes per side count.
    Bench {
        /// Directory of network files; the bundled networks by default.
        #[arg(long)]
        nets: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "CB,GC,MP,MC")]
        schemes: Vec<Scheme>,
        /// Side counts to time; all available by default.
        #[arg(long, value_delimiter = ',')]
        sides: Vec<usize>,
        /// Fixed ring count; by default each n gets about 10k triangles.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the HTTP service for the editor.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory of example networks; the bundled networks by default.
        #[arg(long)]
        nets: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION_CAP)]
        max_resolution: usize,
    },
}

#[derive(Args)]
struct CenterArgs {
    /// Central control point, `x,y,z` (MP and MC).
    #[arg(long, value_parser = parse_triple, allow_negative_numbers = true, conflicts_with = "p0_offset")]
    p0: Option<Vec3>,
    /// Offset of the central control point from its default, `dx,dy,dz`.
    #[arg(long, value_parser = parse_triple, allow_negative_numbers = true)]
    p0_offset: Option<Vec3>,
}

impl CenterArgs {
    fn config(&self) -> PatchConfig {
        PatchConfig {
            center: match (self.p0, self.p0_offset) {
                (Some(p), _) => CenterControl::Override(p),
                (None, Some(d)) => CenterControl::Offset(d),
                (None, None) => CenterControl::Default,
            },
        }
    }
}

fn parse_triple(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(format!("expected x,y,z, got {s:?}")),
    }
}

/// A one-line diagnostic and its exit code.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Args(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Args(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Args(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::MeshFormat(_) => Failure::Io(e.to_string()),
            Error::Json(_) | Error::Structure(_) | Error::Topology(_) => Failure::Validation(e.to_string()),
            _ => Failure::Args(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_target(false)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Validate { network } => validate(&network),
        Command::Eval {
            network,
            scheme,
            u,
            v,
            center,
        } => {
            let patch = load_patch(&network, scheme, center.config())?;
            let p = patch.eval(Uv::new(u, v))?;
            println!("{} {} {}", p.x, p.y, p.z);
            Ok(())
        }
        Command::Mesh {
            network,
            scheme,
            resolution,
            out,
            center,
            curvature,
            clamp,
        } => mesh(&network, scheme, resolution, &out, center.config(), curvature, clamp),
        Command::Deviate {
            network,
            schemes,
            resolution,
            clamp,
            metric,
            out,
        } => deviate(&network, &schemes, resolution, clamp, &metric, out.as_deref()),
        Command::Paramlines {
            n,
            side,
            constrained,
            resolution,
            out,
        } => {
            let poly = DomainPolygon::regular(n)?;
            let lines = param_lines(&poly, side, constrained, &default_levels(), resolution)?;
            write_text(&out, &to_svg(&poly, &lines))
        }
        Command::Bench {
            nets,
            schemes,
            sides,
            resolution,
            reps,
            json,
        } => bench(nets.as_deref(), schemes, sides, resolution, reps, json.as_deref()),
        Command::Serve {
            port,
            nets,
            max_resolution,
        } => {
            let mut config = match nets {
                Some(dir) => ServiceConfig::from_dir(dir)?,
                None => ServiceConfig::default(),
            };
            config.resolution_cap = max_resolution;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
            let addr = SocketAddr::from(([127, 0, 0, 1], port));
            runtime
                .block_on(transfinite_service::serve(addr, config))
                .map_err(|e| Failure::Io(format!("cannot serve on {addr}: {e}")))
        }
    }
}

fn write_text(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Loads a network and refuses open corners. Twist mismatches only warn.
fn load_network(path: &Path) -> CliResult<CurveNetwork> {
    let net = CurveNetwork::load(path)?;
    let report = validate_network(&net, Tolerances::default())?;
    match report.status {
        ValidationStatus::Fail => Err(Failure::Validation(format!(
            "{}: corners do not meet (largest gap {:.3e})",
            path.display(),
            report.max_position_gap()
        ))),
        ValidationStatus::PassWithWarning => {
            log::warn!(
                "{}: cross-derivatives are not twist-compatible (largest gap {:.3e})",
                path.display(),
                report.max_twist_gap()
            );
            Ok(net)
        }
        ValidationStatus::Pass => Ok(net),
    }
}

fn load_patch(path: &Path, scheme: Scheme, config: PatchConfig) -> CliResult<Patch> {
    let net = load_network(path)?;
    Patch::regular(scheme, net, config).map_err(|e| Failure::Args(e.to_string()))
}

fn validate(path: &Path) -> CliResult {
    let net = CurveNetwork::load(path)?;
    let report = validate_network(&net, Tolerances::default())?;
    println!("{report}");
    if report.usable() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{}: corners do not meet", path.display())))
    }
}

fn mesh(
    path: &Path,
    scheme: Scheme,
    resolution: usize,
    out: &Path,
    config: PatchConfig,
    curvature: bool,
    clamp: Option<f64>,
) -> CliResult {
    let format_probe = MeshFormat::from_path(out, None).map_err(|e| Failure::Args(e.to_string()))?;
    let patch = load_patch(path, scheme, config)?;
    let dmesh = triangulate_domain(patch.domain(), resolution)?;
    let mut surface = tessellate(&patch, &dmesh)?;
    let mut ramp = None;
    if curvature {
        surface = mean_curvature(&surface);
        let values = &surface.scalars[MEAN_CURVATURE];
        let clamp = clamp.unwrap_or_else(|| values.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
        ramp = Some(ColorRamp::new(MEAN_CURVATURE, clamp));
    }
    let format = match format_probe {
        MeshFormat::Obj => MeshFormat::Obj,
        MeshFormat::Ply(_) => MeshFormat::Ply(ramp),
    };
    write_mesh(&surface, &format, out)?;
    println!(
        "{} {}: {} vertices, {} triangles -> {}",
        scheme,
        patch.network().name,
        surface.vertices.len(),
        surface.triangles.len(),
        out.display()
    );
    Ok(())
}

fn deviate(
    path: &Path,
    schemes: &[Scheme],
    resolution: usize,
    clamp: f64,
    metric: &str,
    out: Option<&Path>,
) -> CliResult {
    if schemes.len() != 2 {
        return Err(Failure::Args(format!("--schemes takes two schemes, got {}", schemes.len())));
    }
    let format = out
        .map(|p| MeshFormat::from_path(p, Some(ColorRamp::new(DEVIATION, clamp))))
        .transpose()
        .map_err(|e| Failure::Args(e.to_string()))?;
    let net = load_network(path)?;
    let surfaces = schemes
        .iter()
        .map(|&s| {
            let patch = Patch::regular(s, net.clone(), PatchConfig::default())?;
            let dmesh = triangulate_domain(patch.domain(), resolution)?;
            tessellate(&patch, &dmesh)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (a, b) = (&surfaces[0], &surfaces[1]);
    let (surface_map, surface) = surface_deviation(a, b)?;
    let (parameter_map, parameter) = deviation(a, b)?;
    println!(
        "{} vs {}: surface distance max {:.3}% mean {:.3}%, same-parameter distance max {:.3}% mean {:.3}% (bbox axis {:.4})",
        schemes[0], schemes[1], surface.max_pct, surface.mean_pct, parameter.max_pct, parameter.mean_pct, surface.bbox_axis
    );
    if let (Some(out), Some(format)) = (out, format) {
        let map = if metric == "surface" { surface_map } else { parameter_map };
        write_mesh(&map, &format, out)?;
    }
    Ok(())
}

fn load_network_dir(dir: &Path) -> CliResult<BTreeMap<usize, CurveNetwork>> {
    let mut nets = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let net = load_network(&path)?;
        if let Some(previous) = nets.insert(net.len(), net) {
            return Err(Failure::Args(format!(
                "{} and network {:?} both have {} sides",
                path.display(),
                previous.name,
                previous.len()
            )));
        }
    }
    Ok(nets)
}

fn bench(
    dir: Option<&Path>,
    schemes: Vec<Scheme>,
    sides: Vec<usize>,
    resolution: Option<usize>,
    reps: usize,
    json: Option<&Path>,
) -> CliResult {
    let nets = match dir {
        Some(dir) => load_network_dir(dir)?,
        None => (3..=8).map(|n| (n, bundled::network(n))).collect(),
    };
    let sides = if sides.is_empty() {
        nets.keys().copied().collect()
    } else {
        sides
    };
    let config = BenchConfig {
        sides,
        schemes,
        resolution: resolution.map_or(BenchResolution::TargetTriangles(TARGET_TRIANGLES), BenchResolution::Fixed),
        repetitions: reps,
    };
    let result = run_bench(&nets, &config).map_err(|e| Failure::Args(e.to_string()))?;
    print!("{}", result.table());
    if let Some(path) = json {
        write_text(path, &result.to_json())?;
    }
    Ok(())
}

