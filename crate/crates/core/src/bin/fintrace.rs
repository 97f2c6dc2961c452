use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use fintrace::imgio::Rect;
use fintrace::interface::{
    cmd_batch, cmd_trace, parse_point, parse_rect, serve_api, BatchOptions, SessionStore,
    TraceOptions, EXIT_OK, EXIT_USAGE,
};
use fintrace::outline::Point;
use fintrace::synth::{fin_scene, Family};
use fintrace::{PixelarityLut, Tier};

#[derive(Parser)]
#[command(
    name = "fintrace",
    version,
    about = "Extract dorsal-fin outlines from dolphin photographs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one fin between a start and an end point.
    Trace {
        /// Photograph to trace (PNG or JPEG).
        #[arg(long)]
        image: PathBuf,
        /// Start of the fin (leading edge), `x,y`.
        #[arg(long, value_parser = parse_point)]
        start: Point,
        /// End of the fin (trailing edge), `x,y`.
        #[arg(long, value_parser = parse_point)]
        end: Point,
        /// Visible region `x,y,w,h`; defaults to a padded box around the points.
        #[arg(long, value_parser = parse_rect)]
        viewport: Option<Rect>,
        /// auto, 1 or 2.
        #[arg(long, default_value = "auto")]
        tier: Tier,
        /// Outline JSON path; diagnostics go beside it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write intermediate binary images as PBM files here.
        #[arg(long)]
        debug_dir: Option<PathBuf>,
        /// Longest side of the working image, in pixels [default: 600].
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Trace every row of a CSV manifest.
    Batch {
        /// CSV with columns image,start_x,start_y,end_x,end_y and optional vx,vy,vw,vh.
        manifest: PathBuf,
        /// Receives one outline and diagnostics file per image plus summary.csv.
        #[arg(long, default_value = "fintrace-out")]
        out_dir: PathBuf,
        /// auto, 1 or 2.
        #[arg(long, default_value = "auto")]
        tier: Tier,
        /// Longest side of the working image, in pixels [default: 600].
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Serve the HTTP API over the images in a directory.
    Serve {
        /// Directory of PNG/JPEG images; each is served under its file stem.
        #[arg(long)]
        images: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
    /// Print the 512-entry pixelarity table.
    Lut {
        /// Emit CSV (`index,score`).
        #[arg(long)]
        dump: bool,
    },
    /// Write a seeded synthetic fin scene and print its endpoints.
    Synth {
        /// a, b or c.
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn serve(images: PathBuf, addr: SocketAddr) -> i32 {
    let store = match SessionStore::load_dir(&images) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    println!("serving {} images on http://{addr}", store.len());
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match runtime.block_on(serve_api(addr, Arc::new(store))) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Trace {
            image,
            start,
            end,
            viewport,
            tier,
            out,
            debug_dir,
            max_dim,
        } => cmd_trace(&TraceOptions {
            image,
            start,
            end,
            viewport,
            tier,
            out,
            debug_dir,
            max_dim,
        }),
        Command::Batch {
            manifest,
            out_dir,
            tier,
            max_dim,
        } => cmd_batch(&BatchOptions {
            manifest,
            out_dir,
            tier,
            max_dim,
        }),
        Command::Serve { images, port, host } => serve(images, SocketAddr::new(host, port)),
        Command::Lut { dump } => {
            let lut = PixelarityLut::build();
            if dump {
                print!("{}", lut.to_csv());
            } else {
                let scores = lut.scores();
                let (lo, hi) = (scores.iter().min().unwrap(), scores.iter().max().unwrap());
                println!("512 windows, scores {lo}..={hi}; use --dump for the full table");
            }
            EXIT_OK
        }
        Command::Synth { family, seed, out } => {
            let scene = fin_scene(family, seed);
            if let Err(e) = scene.image.save_png(&out) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            let (s, e) = (scene.endpoints.start, scene.endpoints.end);
            println!("--start {},{} --end {},{}", s.x, s.y, e.x, e.y);
            EXIT_OK
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not usage errors
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    ExitCode::from(run(cli) as u8)
}
