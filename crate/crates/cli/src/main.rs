//! `jmpt` batch driver. Every command writes its artifacts to files and
//! prints one JSON summary line on stdout. Failures print one JSON line on
//! stderr and exit with 1 (usage/config) or 2 (data).

mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use jmpt::datacube::{load_cube, load_mask, save_cube, save_mask, synth_scene, BiTemporalPair};
use jmpt::detectors::{run_method, tensor_branch, ChangeMap, Method};
use jmpt::evaluation::{auc, binarize, roc_curve, separability, BinarizePolicy};
use jmpt::morphology::Connectivity;
use serde_json::json;

use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "jmpt",
    version,
    about = "Hyperspectral change detection with attribute profiles and patch tensors"
)]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Progress notes on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic bi-temporal scene with ground truth.
    Synth(SynthArgs),
    /// Run a detector on two co-registered cubes.
    Detect(DetectArgs),
    /// ROC curve and separability of a score map against a mask.
    Eval(EvalArgs),
    /// AUC of the tensor branch for each patch size in a range.
    SweepPatch(SweepArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Directory receiving t1, t2 and mask rasters.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    bands: Option<usize>,
    #[arg(long)]
    regions: Option<usize>,
    #[arg(long)]
    magnitude: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Detector settings shared by `detect` and `sweep-patch`.
#[derive(Args, Debug)]
struct PipelineFlags {
    /// Patch side length w.
    #[arg(long)]
    patch_size: Option<usize>,
    /// Pixel connectivity for the component trees (4 or 8).
    #[arg(long)]
    connectivity: Option<u8>,
    /// Weight of the morphology branch in the fused map.
    #[arg(long)]
    fusion_a: Option<f64>,
    /// Weight of the tensor branch in the fused map.
    #[arg(long)]
    fusion_b: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long)]
    t1: Option<PathBuf>,
    #[arg(long)]
    t2: Option<PathBuf>,
    /// Score map raster; the run report goes next to it as `.report.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// jmpt, morph, tensor, ad, ed or aad.
    #[arg(long)]
    method: Option<String>,
    #[command(flatten)]
    pipeline: PipelineFlags,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Prefix for `.roc.csv`, `.metrics.json` and the optional `.binary.json` map.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
    /// Also write a binary map: `otsu` or a percentile such as `p95`.
    #[arg(long)]
    binarize: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    t1: Option<PathBuf>,
    #[arg(long)]
    t2: Option<PathBuf>,
    #[arg(long)]
    mask: Option<PathBuf>,
    /// CSV with one `w,auc` row per patch size.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    w_min: Option<usize>,
    #[arg(long)]
    w_max: Option<usize>,
    #[command(flatten)]
    pipeline: PipelineFlags,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl From<jmpt::Error> for Failure {
    fn from(e: jmpt::Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            return fail(&Failure::Usage(first.to_string()));
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    let (kind, msg) = match f {
        Failure::Usage(m) => ("usage", m),
        Failure::Data(m) => ("data", m),
    };
    eprintln!("{}", json!({ "error": kind, "message": msg }));
    ExitCode::from(f.code())
}

fn run(cli: Cli) -> Result<serde_json::Value, Failure> {
    let mut cfg = config::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    let log = |msg: &str| {
        if cli.verbose {
            eprintln!("jmpt: {msg}");
        }
    };
    match cli.command {
        Command::Synth(args) => cmd_synth(&mut cfg, args, &log),
        Command::Detect(args) => cmd_detect(&mut cfg, args, &log),
        Command::Eval(args) => cmd_eval(&cfg, args),
        Command::SweepPatch(args) => cmd_sweep(&mut cfg, args, &log),
    }
}

fn required(
    flag: Option<PathBuf>,
    fallback: &Option<PathBuf>,
    name: &str,
) -> Result<PathBuf, Failure> {
    flag.or_else(|| fallback.clone()).ok_or_else(|| {
        Failure::Usage(format!(
            "missing --{name} (or paths.{} in the config)",
            name.replace('-', "_")
        ))
    })
}

/// `path` with `suffix` appended to its file name.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(data_err)? + "\n";
    std::fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn apply_pipeline(cfg: &mut Config, flags: &PipelineFlags) -> Result<(), Failure> {
    let p = &mut cfg.pipeline;
    if let Some(w) = flags.patch_size {
        p.patch_size = w;
    }
    if let Some(n) = flags.connectivity {
        p.connectivity = Connectivity::from_count(n)
            .ok_or_else(|| Failure::Usage(format!("connectivity must be 4 or 8, got {n}")))?;
    }
    if let Some(a) = flags.fusion_a {
        p.fusion.a = a;
    }
    if let Some(b) = flags.fusion_b {
        p.fusion.b = b;
    }
    if let Some(n) = flags.max_iters {
        p.als.max_iters = n;
    }
    if let Some(t) = flags.tol {
        p.als.tol = t;
    }
    Ok(())
}

fn load_pair(t1: &Path, t2: &Path) -> Result<BiTemporalPair, Failure> {
    Ok(BiTemporalPair::new(load_cube(t1)?, load_cube(t2)?)?)
}

fn cmd_synth(
    cfg: &mut Config,
    args: SynthArgs,
    log: &dyn Fn(&str),
) -> Result<serde_json::Value, Failure> {
    let out_dir = required(args.out_dir, &cfg.paths.out_dir, "out-dir")?;
    let s = &mut cfg.synth;
    s.height = args.height.unwrap_or(s.height);
    s.width = args.width.unwrap_or(s.width);
    s.bands = args.bands.unwrap_or(s.bands);
    s.num_change_regions = args.regions.unwrap_or(s.num_change_regions);
    s.change_magnitude = args.magnitude.unwrap_or(s.change_magnitude);
    s.noise_sigma = args.noise.unwrap_or(s.noise_sigma);
    s.seed = args.seed.unwrap_or(s.seed);

    let scene = synth_scene(&cfg.synth)?;
    log(&format!(
        "generated scene with {} change regions",
        scene.regions.len()
    ));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| Failure::Data(format!("{}: {e}", out_dir.display())))?;
    let (t1, t2, mask) = (out_dir.join("t1"), out_dir.join("t2"), out_dir.join("mask"));
    save_cube(scene.pair.t1(), &t1)?;
    save_cube(scene.pair.t2(), &t2)?;
    save_mask(&scene.mask, &mask)?;
    let s = &cfg.synth;
    Ok(json!({
        "command": "synth",
        "height": s.height,
        "width": s.width,
        "bands": s.bands,
        "changed_pixels": scene.mask.changed_count(),
        "seed": s.seed,
        "t1": t1,
        "t2": t2,
        "mask": mask,
    }))
}

fn cmd_detect(
    cfg: &mut Config,
    args: DetectArgs,
    log: &dyn Fn(&str),
) -> Result<serde_json::Value, Failure> {
    let t1 = required(args.t1, &cfg.paths.t1, "t1")?;
    let t2 = required(args.t2, &cfg.paths.t2, "t2")?;
    let out = required(args.out, &cfg.paths.out, "out")?;
    if let Some(m) = &args.method {
        cfg.method = m.parse::<Method>()?;
    }
    apply_pipeline(cfg, &args.pipeline)?;
    cfg.paths.t1 = Some(t1.clone());
    cfg.paths.t2 = Some(t2.clone());
    cfg.paths.out = Some(out.clone());

    let pair = load_pair(&t1, &t2)?;
    log(&format!("running {} on {:?}", cfg.method, pair.t1().dims()));
    let start = Instant::now();
    let map = run_method(cfg.method, &pair, &cfg.pipeline)?;
    let wall = start.elapsed().as_secs_f64();
    save_cube(&map.to_cube(), &out)?;

    let (lo, hi) = map.min_max();
    let (h, w, d) = pair.t1().dims();
    let summary = json!({
        "command": "detect",
        "method": cfg.method,
        "dims": [h, w, d],
        "score_min": lo,
        "score_max": hi,
        "out": out,
    });
    let mut report = summary.clone();
    report["config"] = serde_json::to_value(&*cfg).map_err(data_err)?;
    report["wall_time_s"] = json!(wall);
    write_json(&with_suffix(&out, ".report.json"), &report)?;
    Ok(summary)
}

fn parse_policy(s: &str) -> Result<BinarizePolicy, Failure> {
    if s == "otsu" {
        return Ok(BinarizePolicy::Otsu);
    }
    s.strip_prefix('p')
        .and_then(|q| q.parse::<f64>().ok())
        .map(BinarizePolicy::Percentile)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "binarize policy must be `otsu` or `p<percentile>`, got `{s}`"
            ))
        })
}

fn cmd_eval(cfg: &Config, args: EvalArgs) -> Result<serde_json::Value, Failure> {
    let scores = required(args.scores, &cfg.paths.scores, "scores")?;
    let mask_path = required(args.mask, &cfg.paths.mask, "mask")?;
    let prefix = required(args.out_prefix, &cfg.paths.out, "out-prefix")?;
    let policy = args.binarize.as_deref().map(parse_policy).transpose()?;

    let map = ChangeMap::from_cube(&load_cube(&scores)?)?;
    let mask = load_mask(&mask_path)?;
    let curve = roc_curve(&map, &mask)?;
    let sep = separability(&map, &mask)?;
    let roc_path = with_suffix(&prefix, ".roc.csv");
    std::fs::write(&roc_path, curve.to_csv())
        .map_err(|e| Failure::Data(format!("{}: {e}", roc_path.display())))?;

    let mut metrics = json!({
        "auc": auc(&curve),
        "changed_pixels": mask.changed_count(),
        "unchanged_pixels": mask.unchanged_count(),
        "separability": {
            "changed": sep.changed,
            "unchanged": sep.unchanged,
            "box_gap": sep.box_gap(),
        },
    });
    if let Some(policy) = policy {
        let binary = binarize(&map, policy)?;
        let path = with_suffix(&prefix, ".binary.json");
        save_mask(&binary, &path)?;
        metrics["binary"] =
            json!({ "policy": policy, "changed_pixels": binary.changed_count(), "path": path });
    }
    write_json(&with_suffix(&prefix, ".metrics.json"), &metrics)?;
    metrics["command"] = json!("eval");
    Ok(metrics)
}

fn cmd_sweep(
    cfg: &mut Config,
    args: SweepArgs,
    log: &dyn Fn(&str),
) -> Result<serde_json::Value, Failure> {
    let t1 = required(args.t1, &cfg.paths.t1, "t1")?;
    let t2 = required(args.t2, &cfg.paths.t2, "t2")?;
    let mask_path = required(args.mask, &cfg.paths.mask, "mask")?;
    let out = required(args.out, &cfg.paths.out, "out")?;
    apply_pipeline(cfg, &args.pipeline)?;
    let w_min = args.w_min.unwrap_or(cfg.sweep.w_min);
    let w_max = args.w_max.unwrap_or(cfg.sweep.w_max);
    if w_min == 0 || w_min > w_max {
        return Err(Failure::Usage(format!(
            "invalid patch range {w_min}..={w_max}"
        )));
    }

    let pair = load_pair(&t1, &t2)?;
    let mask = load_mask(&mask_path)?;
    let mut csv = String::from("w,auc\n");
    let mut rows = Vec::new();
    for w in w_min..=w_max {
        let mut run = cfg.pipeline.clone();
        run.patch_size = w;
        let map = tensor_branch(&pair, &run)?;
        let a = auc(&roc_curve(&map, &mask)?);
        log(&format!("w={w} auc={a}"));
        csv.push_str(&format!("{w},{a}\n"));
        rows.push((w, a));
    }
    std::fs::write(&out, csv).map_err(|e| Failure::Data(format!("{}: {e}", out.display())))?;
    // first maximum on ties
    let (best_w, best_auc) = rows
        .iter()
        .copied()
        .fold((0, f64::NEG_INFINITY), |best, row| {
            if row.1 > best.1 {
                row
            } else {
                best
            }
        });
    Ok(json!({
        "command": "sweep-patch",
        "rows": rows.len(),
        "best_w": best_w,
        "best_auc": best_auc,
        "out": out,
    }))
}
