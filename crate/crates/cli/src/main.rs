use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hierseg::alpha_n::{alpha_degree_map, alpha_n_partition};
use hierseg::raster::{read_raster, write_pgm16};
use hierseg::separation::{
    max_separation_flatzones, max_separation_pixels, min_separation_flatzones, min_separation_pixels, transition_mask,
    ScalarMap,
};
use hierseg::{flat_zones, AlphaTree, EdgeWeightedGraph, Error, GridImage, Level, Partition, SaliencyMap};
use serde::Serialize;

const EXIT_IO: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Hierarchical segmentation of greyscale rasters by alpha- and
/// constrained connectivity.
#[derive(Parser)]
#[command(name = "hierseg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input raster (PGM or greyscale PNG)
    #[arg(short = 'i', long = "input", value_name = "INPUT")]
    input: PathBuf,
    /// Output file
    #[arg(short = 'o', long = "output", value_name = "OUTPUT")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Label raster of flat zones
    Flatzones {
        #[command(flatten)]
        io: Io,
    },
    /// Label raster of alpha-connected components
    Alphacc {
        #[arg(long)]
        alpha: Level,
        #[command(flatten)]
        io: Io,
    },
    /// Label raster of (alpha, omega)-constrained components
    Constrained {
        #[arg(long)]
        alpha: Level,
        #[arg(long)]
        omega: Level,
        #[command(flatten)]
        io: Io,
    },
    /// Label raster of components with range at most omega
    Omegacc {
        #[arg(long)]
        omega: Level,
        #[command(flatten)]
        io: Io,
    },
    /// Label raster of alpha-components restricted to pixels of alpha-degree at least n
    Alphan {
        #[arg(long)]
        alpha: Level,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        io: Io,
    },
    /// Label raster of the saliency cut at lambda
    Cut {
        #[arg(long)]
        lambda: Level,
        #[command(flatten)]
        io: Io,
    },
    /// JSON dendrogram of the alpha-tree
    Tree {
        #[command(flatten)]
        io: Io,
    },
    /// Interpixel saliency raster of size (2w-1) x (2h-1)
    Saliency {
        /// Replace alpha levels by component ranges and flood everything up to this range
        #[arg(long, value_name = "OMEGA")]
        filter_range: Option<Level>,
        /// Drop regions with fewer pixels than this
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        min_area: Option<u64>,
        /// Log tone mapping onto the full 16-bit range
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Per-pixel separation map
    Separation {
        /// Aggregate over flat zones
        #[arg(long)]
        zones: bool,
        /// Largest instead of smallest difference to a differing neighbour
        #[arg(long)]
        max: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Binary mask of pixels with both a lower and a greater neighbour
    Transition {
        #[command(flatten)]
        io: Io,
    },
    /// Per-pixel count of neighbours within alpha
    Alphadeg {
        #[arg(long)]
        alpha: Level,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Serialize, Default)]
struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Level>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<Level>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Level>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    input: String,
    width: usize,
    height: usize,
    component_count: usize,
    parameters: Parameters,
}

fn read_input(path: &Path) -> hierseg::Result<GridImage> {
    read_raster(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn graph_of(image: &GridImage) -> hierseg::Result<EdgeWeightedGraph> {
    EdgeWeightedGraph::from_image(image)
}

fn to_u16(values: impl IntoIterator<Item = usize>) -> hierseg::Result<Vec<u16>> {
    values
        .into_iter()
        .map(|v| u16::try_from(v).map_err(|_| Error::Format(format!("value {v} does not fit a 16-bit raster"))))
        .collect()
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes component ranks as a 16-bit raster plus the JSON sidecar.
fn write_labels(
    command: &str,
    io: &Io,
    image: &GridImage,
    partition: &Partition,
    parameters: Parameters,
) -> hierseg::Result<()> {
    let samples = to_u16(partition.ranks())?;
    write_pgm16(&io.output, image.width(), image.height(), &samples)?;
    let sidecar = Sidecar {
        command,
        input: io.input.display().to_string(),
        width: image.width(),
        height: image.height(),
        component_count: partition.component_count(),
        parameters,
    };
    let mut text = serde_json::to_string_pretty(&sidecar)?;
    text.push('\n');
    std::fs::write(sidecar_path(&io.output), text)?;
    Ok(())
}

fn write_map(io: &Io, map: &ScalarMap) -> hierseg::Result<()> {
    let samples = to_u16(map.values.iter().map(|&v| v as usize))?;
    write_pgm16(&io.output, map.width, map.height, &samples)
}

fn saliency(
    image: &GridImage,
    filter_range: Option<Level>,
    min_area: Option<u64>,
    log: bool,
) -> hierseg::Result<(usize, usize, Vec<u16>)> {
    let graph = graph_of(image)?;
    let mut map = SaliencyMap::of_graph(&graph)?;
    if let Some(omega) = filter_range {
        map = map.range_filter(image.values(), omega)?;
    }
    if let Some(min_area) = min_area {
        let filtered = map
            .to_tree()?
            .area_filter(usize::try_from(min_area).unwrap_or(usize::MAX));
        map = SaliencyMap::from_tree(&filtered, &graph)?;
    }
    let k = map.render_khalimsky()?;
    let samples = if log {
        k.log_scaled()
    } else {
        to_u16(k.values.iter().map(|&v| v as usize))?
    };
    Ok((k.width, k.height, samples))
}

fn run(command: Command) -> hierseg::Result<()> {
    match command {
        Command::Flatzones { io } => {
            let image = read_input(&io.input)?;
            write_labels("flatzones", &io, &image, &flat_zones(&image)?, Parameters::default())
        }
        Command::Alphacc { alpha, io } => {
            let image = read_input(&io.input)?;
            let p = hierseg::alpha_cc_partition(&graph_of(&image)?, alpha);
            write_labels(
                "alphacc",
                &io,
                &image,
                &p,
                Parameters {
                    alpha: Some(alpha),
                    ..Default::default()
                },
            )
        }
        Command::Constrained { alpha, omega, io } => {
            let image = read_input(&io.input)?;
            let p = AlphaTree::build(&graph_of(&image)?)?.constrained_cc(alpha, omega);
            let params = Parameters {
                alpha: Some(alpha),
                omega: Some(omega),
                ..Default::default()
            };
            write_labels("constrained", &io, &image, &p, params)
        }
        Command::Omegacc { omega, io } => {
            let image = read_input(&io.input)?;
            let p = AlphaTree::build(&graph_of(&image)?)?.omega_cc(omega);
            write_labels(
                "omegacc",
                &io,
                &image,
                &p,
                Parameters {
                    omega: Some(omega),
                    ..Default::default()
                },
            )
        }
        Command::Alphan { alpha, n, io } => {
            let image = read_input(&io.input)?;
            let p = alpha_n_partition(&image, alpha, n);
            write_labels(
                "alphan",
                &io,
                &image,
                &p,
                Parameters {
                    alpha: Some(alpha),
                    n: Some(n),
                    ..Default::default()
                },
            )
        }
        Command::Cut { lambda, io } => {
            let image = read_input(&io.input)?;
            let p = SaliencyMap::of_graph(&graph_of(&image)?)?.cut(lambda);
            write_labels(
                "cut",
                &io,
                &image,
                &p,
                Parameters {
                    lambda: Some(lambda),
                    ..Default::default()
                },
            )
        }
        Command::Tree { io } => {
            let image = read_input(&io.input)?;
            let mut text = AlphaTree::build(&graph_of(&image)?)?.to_json();
            text.push('\n');
            std::fs::write(&io.output, text)?;
            Ok(())
        }
        Command::Saliency {
            filter_range,
            min_area,
            log,
            io,
        } => {
            let image = read_input(&io.input)?;
            let (w, h, samples) = saliency(&image, filter_range, min_area, log)?;
            write_pgm16(&io.output, w, h, &samples)
        }
        Command::Separation { zones, max, io } => {
            let image = read_input(&io.input)?;
            let map = match (zones, max) {
                (false, false) => min_separation_pixels(&image),
                (false, true) => max_separation_pixels(&image),
                (true, false) => min_separation_flatzones(&image)?,
                (true, true) => max_separation_flatzones(&image)?,
            };
            write_map(&io, &map)
        }
        Command::Transition { io } => {
            let image = read_input(&io.input)?;
            write_map(&io, &transition_mask(&image))
        }
        Command::Alphadeg { alpha, io } => {
            let image = read_input(&io.input)?;
            write_map(&io, &alpha_degree_map(&image, alpha))
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HIERSEG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HIERSEG_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
