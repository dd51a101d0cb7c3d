use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lsd_levelline::bench::run_bench;
use lsd_levelline::datasets::parse_homography_file;
use lsd_levelline::evaluation::{filter_min_length, EVAL_MIN_LENGTH};
use lsd_levelline::svg::render_svg;
use lsd_levelline::{
    detect_detailed, load_grayscale, match_segments, DetectionRecord, DetectorParams, Error,
    EvalConfig, Homography,
};

#[derive(Parser)]
#[command(
    name = "lsd-levelline",
    version,
    about = "Level-line guided line segment detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect segments in one image and write a JSON record.
    Detect {
        image: PathBuf,
        /// Output record path.
        #[arg(short, long)]
        out: PathBuf,
        /// Also write an SVG overlay.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Match two detection records under a homography.
    Eval {
        reference: PathBuf,
        test: PathBuf,
        /// Homography file mapping the reference onto the test image (identity if omitted).
        #[arg(long = "homography", short = 'H')]
        homography: Option<PathBuf>,
        #[command(flatten)]
        eval: EvalArgs,
        /// Write the match report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeatability over every sequence under a dataset root.
    Bench {
        root: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        eval: EvalArgs,
        /// Write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the aligned text table here instead of stdout.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    grad_thresh: Option<f64>,
    /// Anchor equalization radius (px).
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    inlier_ratio: Option<f64>,
    #[arg(long)]
    dist_thresh: Option<f64>,
    /// Degrees.
    #[arg(long)]
    angle_thresh: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    min_length: Option<f64>,
    #[arg(long)]
    init_window: Option<usize>,
    /// Skip refinement of the initial window fit.
    #[arg(long)]
    no_init_refine: bool,
    /// Validate by distance only.
    #[arg(long)]
    no_angle_check: bool,
}

impl ParamArgs {
    fn params(&self) -> DetectorParams {
        let d = DetectorParams::default();
        DetectorParams {
            grad_thresh: self.grad_thresh.unwrap_or(d.grad_thresh),
            equalize_radius: self.radius.unwrap_or(d.equalize_radius),
            inlier_ratio: self.inlier_ratio.unwrap_or(d.inlier_ratio),
            dist_thresh: self.dist_thresh.unwrap_or(d.dist_thresh),
            angle_thresh: self.angle_thresh.unwrap_or(d.angle_thresh),
            rho: self.rho.unwrap_or(d.rho),
            min_length: self.min_length.unwrap_or(d.min_length),
            init_window: self.init_window.unwrap_or(d.init_window),
            init_refine: !self.no_init_refine,
            angle_check: !self.no_angle_check,
            ..d
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Strict,
    Loose,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value = "loose")]
    config: Preset,
    /// Distance threshold (px); overrides the preset.
    #[arg(long)]
    ed: Option<f64>,
    /// Angle threshold (degrees); overrides the preset.
    #[arg(long)]
    ea: Option<f64>,
    /// Overlap threshold (ratio); overrides the preset.
    #[arg(long)]
    eo: Option<f64>,
}

impl EvalArgs {
    fn config(&self) -> EvalConfig {
        let base = match self.config {
            Preset::Strict => EvalConfig::strict(),
            Preset::Loose => EvalConfig::loose(),
        };
        EvalConfig {
            dist_thresh: self.ed.unwrap_or(base.dist_thresh),
            angle_thresh: self.ea.unwrap_or(base.angle_thresh),
            overlap_thresh: self.eo.unwrap_or(base.overlap_thresh),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Detect {
            image,
            out,
            svg,
            params,
        } => {
            let params = params.params();
            params.validate()?;
            let img = load_grayscale(&image)?;
            let det = detect_detailed(&img, &params)?;
            let record = DetectionRecord::new(
                image.display().to_string(),
                img.width(),
                img.height(),
                params,
                &det.segments,
            );
            record.write(&out)?;
            if let Some(svg) = svg {
                write_file(&svg, &render_svg(&img, &det.segments, Some(&det.field))?)?;
            }
            println!("{} segments", det.segments.len());
        }
        Command::Eval {
            reference,
            test,
            homography,
            eval,
            out,
        } => {
            let cfg = eval.config();
            cfg.validate()?;
            let r = DetectionRecord::read(&reference)?;
            let t = DetectionRecord::read(&test)?;
            let h = match homography {
                Some(p) => parse_homography_file(p)?,
                None => Homography::identity(),
            };
            let report = match_segments(
                &filter_min_length(&r.line_segments(), EVAL_MIN_LENGTH),
                &filter_min_length(&t.line_segments(), EVAL_MIN_LENGTH),
                &h,
                &cfg,
            )?;
            println!(
                "n_r {}\nn_t {}\nn_m {}\nrep {}",
                report.n_r, report.n_t, report.n_m, report.rep
            );
            if let Some(out) = out {
                let json = serde_json::to_string_pretty(&report).expect("reports always serialize");
                write_file(&out, &(json + "\n"))?;
            }
        }
        Command::Bench {
            root,
            params,
            eval,
            csv,
            table,
        } => {
            let params = params.params();
            params.validate()?;
            let cfg = eval.config();
            cfg.validate()?;
            let result = run_bench(&root, &params, &cfg)?;
            if let Some(csv) = csv {
                write_file(&csv, &result.to_csv())?;
            }
            match table {
                Some(p) => write_file(&p, &result.to_text())?,
                None => print!("{}", result.to_text()),
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Format(_)
        | Error::Dimension { .. }
        | Error::Parse(_)
        | Error::Load(_)
        | Error::InvalidParam(_)
        | Error::SingularMatrix => 2,
        Error::Domain(_) | Error::DegenerateInput(_) | Error::Contract(_) | Error::Projection => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
