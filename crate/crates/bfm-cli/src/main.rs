//! bfmresp: estimate respiratory rates from captured beamforming feedback
//! frames, synthesize labeled captures, and dump decompressed matrices or
//! window spectra for plotting.

mod report;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bfm_capture::{
    parse_mac, read_fixture, read_pcap, write_fixture, write_pcap, CaptureStream, MacFilter,
};
use bfm_codec::QuantizationConfig;
use bfm_pipeline::{
    apply_pca, band_pass, build_feature_matrix, compute_spectrum_tapered, interpolate_uniform,
    rmse, sliding_estimate, window_count, PipelineConfig, Spectrum,
};
use bfm_synth::{generate_capture, BreathingScenario};

use report::{dump_frame, parse_truth, spectrum_csv, RunReport};

#[derive(Parser)]
#[command(
    name = "bfmresp",
    version,
    about = "Respiratory rate estimation from captured WiFi beamforming feedback"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sliding-window estimator over a capture and emit a report.
    Estimate(EstimateArgs),
    /// Generate a synthetic labeled capture.
    Synth(SynthArgs),
    /// Dump one frame's decompressed feedback matrices as JSON.
    Decode(DecodeArgs),
    /// Emit one window's spectrum as plot-ready CSV.
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pcap,
    Fixture,
}

#[derive(Args)]
struct InputArgs {
    /// Capture file to read.
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Keep only frames from these source MACs (aa:bb:cc:dd:ee:ff, repeatable).
    #[arg(long = "source-mac")]
    source_mac: Vec<String>,
    /// Keep only frames to these destination MACs (repeatable).
    #[arg(long = "dest-mac")]
    dest_mac: Vec<String>,
}

impl InputArgs {
    fn resolved_format(&self) -> Format {
        self.format
            .unwrap_or_else(|| match self.input.extension().and_then(|e| e.to_str()) {
                Some("pcap") | Some("cap") => Format::Pcap,
                _ => Format::Fixture,
            })
    }

    fn format_name(&self) -> &'static str {
        match self.resolved_format() {
            Format::Pcap => "pcap",
            Format::Fixture => "fixture",
        }
    }

    fn filter(&self) -> Result<MacFilter> {
        let parse_list = |items: &[String]| -> Result<Option<Vec<[u8; 6]>>> {
            if items.is_empty() {
                return Ok(None);
            }
            items
                .iter()
                .map(|s| parse_mac(s).with_context(|| format!("bad MAC address {s:?}")))
                .collect::<Result<Vec<_>>>()
                .map(Some)
        };
        Ok(MacFilter {
            sources: parse_list(&self.source_mac)?,
            dests: parse_list(&self.dest_mac)?,
        })
    }

    fn read(&self) -> Result<CaptureStream> {
        let stream = match self.resolved_format() {
            Format::Pcap => read_pcap(&self.input, &self.filter()?)?,
            Format::Fixture => read_fixture(&self.input)?,
        };
        Ok(stream)
    }
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config file with pipeline parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Window length in seconds.
    #[arg(long)]
    window: Option<f64>,
    /// Step between window starts in seconds.
    #[arg(long)]
    step: Option<f64>,
    /// Interpolation interval in seconds.
    #[arg(long)]
    interp: Option<f64>,
    /// Band lower edge in breaths/minute (inclusive).
    #[arg(long = "band-low")]
    band_low: Option<f64>,
    /// Band upper edge in breaths/minute (inclusive).
    #[arg(long = "band-high")]
    band_high: Option<f64>,
    /// Peak-to-mean detection threshold.
    #[arg(long)]
    theta: Option<f64>,
}

impl ConfigArgs {
    /// Built-in defaults, then the config file, then explicit flags.
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            cfg = serde_json::from_str(&text)
                .with_context(|| format!("bad config {}", path.display()))?;
        }
        if let Some(v) = self.window {
            cfg.window_length = v;
        }
        if let Some(v) = self.step {
            cfg.window_step = v;
        }
        if let Some(v) = self.interp {
            cfg.interp_interval = v;
        }
        if let Some(v) = self.band_low {
            cfg.band_low = v;
        }
        if let Some(v) = self.band_high {
            cfg.band_high = v;
        }
        if let Some(v) = self.theta {
            cfg.theta = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON (default for estimate and decode).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (default for spectrum).
    #[arg(long)]
    csv: bool,
}

impl OutputArgs {
    /// Print or write fully rendered output; nothing is emitted on error.
    fn emit(&self, rendered: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, rendered)
                .with_context(|| format!("cannot write {}", path.display())),
            None => {
                print!("{rendered}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Ground-truth CSV (`window_start,rate`) to score against.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SynthArgs {
    /// Ground-truth breathing rate in breaths/minute (0 = breath hold).
    #[arg(long, default_value_t = 15.0)]
    rate: f64,
    /// Capture duration in seconds.
    #[arg(long, default_value_t = 300.0)]
    duration: f64,
    /// Mean feedback interval in seconds.
    #[arg(long, default_value_t = 0.20)]
    interval: f64,
    /// Uniform jitter half-width on the interval in seconds.
    #[arg(long, default_value_t = 0.02)]
    jitter: f64,
    /// Breathing perturbation amplitude.
    #[arg(long, default_value_t = 0.5)]
    gain: f64,
    /// Per-entry complex noise scale.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Transmit antenna count (feedback matrix rows).
    #[arg(long, default_value_t = 4)]
    rows: usize,
    /// Stream count (feedback matrix columns).
    #[arg(long, default_value_t = 4)]
    cols: usize,
    /// Subcarriers per frame.
    #[arg(long, default_value_t = 250)]
    subcarriers: usize,
    /// Phi quantization bits.
    #[arg(long = "b-phi", default_value_t = 6)]
    b_phi: u8,
    /// Psi quantization bits.
    #[arg(long = "b-psi", default_value_t = 4)]
    b_psi: u8,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
    /// Output format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Frame index to decompress.
    #[arg(long, default_value_t = 0)]
    frame: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Window start in seconds (must be a multiple of the step).
    #[arg(long = "window-start", default_value_t = 0.0)]
    window_start: f64,
    /// Apply the band-pass filter before emitting.
    #[arg(long = "band-passed")]
    band_passed: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let cfg = args.config.resolve()?;
    let stream = args.input.read()?;
    let windows = sliding_estimate(&stream, &cfg)?;
    let rmse_value = match &args.truth {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read truth {}", path.display()))?;
            let truth = parse_truth(&text)?;
            Some(rmse(&windows, &truth)?)
        }
        None => None,
    };
    let report = RunReport {
        input: args.input.input.display().to_string(),
        format: args.input.format_name().to_string(),
        config: cfg,
        stream: stream.metadata.clone(),
        windows,
        rmse: rmse_value,
    };
    let rendered = if args.output.csv {
        report.to_csv()
    } else {
        report.to_json()?
    };
    args.output.emit(&rendered)
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let scenario = BreathingScenario {
        rate: args.rate,
        duration: args.duration,
        feedback_interval_mean: args.interval,
        feedback_interval_jitter: args.jitter,
        breathing_gain: args.gain,
        noise_sigma: args.noise,
        seed: args.seed,
        n_rows: args.rows,
        n_cols: args.cols,
        n_subcarriers: args.subcarriers,
        config: QuantizationConfig::new(args.b_phi, args.b_psi)?,
    };
    let stream = generate_capture(&scenario)?;
    let format =
        args.format
            .unwrap_or_else(|| match args.out.extension().and_then(|e| e.to_str()) {
                Some("pcap") | Some("cap") => Format::Pcap,
                _ => Format::Fixture,
            });
    match format {
        Format::Pcap => write_pcap(&stream, &args.out)?,
        Format::Fixture => write_fixture(&stream, &args.out)?,
    }
    eprintln!(
        "wrote {} frames ({:.1} s) to {}",
        stream.records.len(),
        stream.duration(),
        args.out.display()
    );
    Ok(())
}

fn cmd_decode(args: &DecodeArgs) -> Result<()> {
    let stream = args.input.read()?;
    let dump = dump_frame(&stream, args.frame)?;
    let mut rendered = serde_json::to_string(&dump)?;
    rendered.push('\n');
    args.output.emit(&rendered)
}

/// Re-run the chain on a single window and return its spectrum.
fn window_spectrum(
    stream: &CaptureStream,
    cfg: &PipelineConfig,
    start: f64,
    band_passed: bool,
) -> Result<Spectrum> {
    let count = window_count(stream.duration(), cfg);
    let index = (start / cfg.window_step).round();
    let aligned = index * cfg.window_step;
    if (aligned - start).abs() > 1e-9 || index < 0.0 || (index as usize) >= count {
        bail!(
            "window start {start} out of range; {count} windows exist at multiples of {} s",
            cfg.window_step
        );
    }
    let end = start + cfg.window_length;
    let lo = stream.records.partition_point(|r| r.timestamp < start);
    let hi = stream.records.partition_point(|r| r.timestamp < end);
    let frames = &stream.records[lo..hi];
    if frames.len() < 2 {
        bail!(
            "window at {start} holds {} frames; need at least 2",
            frames.len()
        );
    }
    let features = build_feature_matrix(frames)?;
    let series = apply_pca(&features)?;
    let uniform = interpolate_uniform(&series.scores, &features.timestamps, cfg)?;
    let spectrum = compute_spectrum_tapered(&uniform, cfg.hann_taper, cfg.zero_pad_to);
    if band_passed {
        Ok(band_pass(&spectrum, cfg)?)
    } else {
        Ok(spectrum)
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let cfg = args.config.resolve()?;
    let stream = args.input.read()?;
    let spectrum = window_spectrum(&stream, &cfg, args.window_start, args.band_passed)?;
    let rendered = if args.output.json {
        let mut s = serde_json::to_string(&serde_json::json!({
            "window_start": args.window_start,
            "bin_width": spectrum.bin_width,
            "magnitudes": spectrum.magnitudes,
        }))?;
        s.push('\n');
        s
    } else {
        spectrum_csv(&spectrum)
    };
    args.output.emit(&rendered)
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Spectrum(args) => cmd_spectrum(args),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
