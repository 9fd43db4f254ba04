//! `badam`: baseline detection, line rectification and evaluation tools.
//!
//! Exit codes: 0 on success, 1 when `validate` reports findings, 2 on I/O or
//! parameter errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use badam::baseline::{DEFAULT_EPSILON, DEFAULT_MIN_LENGTH, DEFAULT_SIGMA, DEFAULT_T_HIGH, DEFAULT_T_LOW};
use badam::eval::Tolerance;
use badam::raster::{SAUVOLA_K, SAUVOLA_WINDOW};
use badam::synth::Family;

const THREADS_ENV: &str = "BADAM_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "badam",
    version,
    about = "Baseline extraction, line rectification and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vectorize baseline heatmaps (16-bit PNG) into PAGE XML files.
    Detect {
        #[arg(required = true)]
        heatmaps: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_T_LOW)]
        t_low: f64,
        #[arg(long, default_value_t = DEFAULT_T_HIGH)]
        t_high: f64,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Drop skeleton components whose diameter path is shorter (pixels).
        #[arg(long, default_value_t = DEFAULT_MIN_LENGTH)]
        min_length: usize,
    },
    /// Cut a straightened line image for every baseline of a page.
    Rectify {
        page_xml: PathBuf,
        image: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Sauvola window used to find the ink around each baseline.
        #[arg(long, default_value_t = SAUVOLA_WINDOW)]
        window: usize,
        #[arg(long, default_value_t = SAUVOLA_K)]
        k: f64,
    },
    /// Score predicted PAGE XML files against ground truth.
    Eval {
        pred_dir: PathBuf,
        truth_dir: PathBuf,
        /// Pixel tolerance, or "auto" for a quarter of the median line gap.
        #[arg(long, default_value = "20")]
        tolerance: Tolerance,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate synthetic pages: PAGE XML, heatmap and page image per page.
    Synth {
        #[arg(long)]
        pages: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::Mixed)]
        family: FamilyArg,
        /// Standard deviation of additive heatmap noise.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 5)]
        min_lines: usize,
        #[arg(long, default_value_t = 40)]
        max_lines: usize,
        #[arg(long, default_value_t = 900)]
        width: usize,
        #[arg(long, default_value_t = 1100)]
        height: usize,
        #[arg(long, default_value_t = 3)]
        stroke_width: usize,
        #[arg(long, default_value_t = 2.0)]
        heatmap_sigma: f64,
    },
    /// Check baseline annotations against the annotation rules.
    Validate {
        #[arg(required = true)]
        page_xml: Vec<PathBuf>,
        /// Print findings as JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Convert between PAGE XML and baseline bitmask PNGs.
    Convert {
        #[arg(long, value_enum)]
        to: ConvertTarget,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        stroke_width: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_MIN_LENGTH)]
        min_length: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Bitmask,
    Pagexml,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Horizontal,
    Sloped,
    Sinusoidal,
    TwoColumn,
    Ring,
    Mixed,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Horizontal => Family::Horizontal,
            FamilyArg::Sloped => Family::Sloped,
            FamilyArg::Sinusoidal => Family::Sinusoidal,
            FamilyArg::TwoColumn => Family::TwoColumn,
            FamilyArg::Ring => Family::Ring,
            FamilyArg::Mixed => Family::Mixed,
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Detect {
            heatmaps,
            out_dir,
            t_low,
            t_high,
            sigma,
            epsilon,
            min_length,
        } => {
            let params = badam::baseline::DetectParams {
                sigma,
                t_low,
                t_high,
                extract: badam::baseline::ExtractParams { epsilon, min_length },
            };
            commands::detect(&heatmaps, &out_dir, &params)?;
        }
        Command::Rectify {
            page_xml,
            image,
            out_dir,
            window,
            k,
        } => commands::rectify(&page_xml, &image, &out_dir, window, k)?,
        Command::Eval {
            pred_dir,
            truth_dir,
            tolerance,
            report,
        } => commands::eval(&pred_dir, &truth_dir, tolerance, report.as_deref())?,
        Command::Synth {
            pages,
            seed,
            out_dir,
            family,
            noise,
            min_lines,
            max_lines,
            width,
            height,
            stroke_width,
            heatmap_sigma,
        } => {
            let spec = badam::synth::SynthSpec {
                seed,
                width,
                height,
                min_lines,
                max_lines,
                family: family.into(),
                stroke_width,
                heatmap_sigma,
                noise_sigma: noise,
            };
            commands::synth(&spec, pages, &out_dir)?;
        }
        Command::Validate { page_xml, json } => {
            let findings = commands::validate(&page_xml, json)?;
            if findings > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Convert {
            to,
            inputs,
            out_dir,
            stroke_width,
            epsilon,
            min_length,
        } => match to {
            ConvertTarget::Bitmask => commands::to_bitmask(&inputs, &out_dir, stroke_width)?,
            ConvertTarget::Pagexml => commands::to_pagexml(
                &inputs,
                &out_dir,
                &badam::baseline::ExtractParams { epsilon, min_length },
            )?,
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
