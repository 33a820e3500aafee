use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use image::Rgb;
use jigsaw_core::compat::materialized_bytes;
use jigsaw_core::{evolve_with_table, Chromosome, CompatibilityTable, GaConfig, Placement, Pose, TableMode, TableOptions};
use jigsaw_ga::record::{ConfigEcho, RunRecord};
use jigsaw_ga::render::{downscale_to_budget, parse_color, render};
use jigsaw_ga::{metrics, table_cache, Error, SolutionDoc, TileBundle};

#[derive(Parser)]
#[command(name = "jigsaw-ga", version, about = "Genetic-algorithm solver for square-piece jigsaw puzzles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cut an image into shuffled, randomly rotated tiles.
    Shred(ShredArgs),
    /// Merge several bundles into one shuffled bag.
    Mix(MixArgs),
    /// Run the solver on a bundle.
    Solve(SolveArgs),
    /// Score a solution against the bundle's manifest.
    Evaluate(EvaluateArgs),
    /// Paint a solution as one image.
    Render(RenderArgs),
    /// Write the ground-truth solution of a bundle.
    Truth(TruthArgs),
}

#[derive(Args)]
struct ShredArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 28)]
    tile_size: u32,
    #[arg(long, env = "JIGSAW_GA_SEED", default_value_t = 0)]
    seed: u64,
    /// Source image id in the manifest; defaults to the file stem.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MixArgs {
    #[arg(long = "input", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    #[arg(long, env = "JIGSAW_GA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Solution document to write.
    #[arg(long)]
    out: PathBuf,
    /// Run record; defaults to `<out>` with extension `run.toml`.
    #[arg(long)]
    record: Option<PathBuf>,
    #[arg(long, default_value_t = 300)]
    pop: usize,
    #[arg(long, default_value_t = 100)]
    gens: usize,
    #[arg(long, default_value_t = 4)]
    elite: usize,
    /// Probability of dropping an inherited relation during crossover.
    #[arg(long, default_value_t = 0.001)]
    mutation: f64,
    #[arg(long, env = "JIGSAW_GA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Write a snapshot of the best placement every N generations.
    #[arg(long)]
    render_every: Option<usize>,
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 4_000_000)]
    snapshot_max_pixels: u64,
    /// Materialize the table only if it fits in this many bytes.
    #[arg(long)]
    max_table_bytes: Option<u64>,
    /// Directory for cached compatibility tables.
    #[arg(long)]
    table_cache: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    bundle: PathBuf,
    /// Metrics document to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run record to point at the metrics document.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Fill for empty cells, as R,G,B.
    #[arg(long, default_value = "0,0,0", value_parser = parse_color)]
    background: Rgb<u8>,
    /// Downscale if the image has more pixels than this; 0 keeps full size.
    #[arg(long, default_value_t = 0)]
    max_pixels: u64,
}

#[derive(Args)]
struct TruthArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<jigsaw_core::Error> for Failure {
    fn from(e: jigsaw_core::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn require_file(path: &Path) -> CmdResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such file", path.display())))
    }
}

fn require_bundle(dir: &Path) -> CmdResult {
    require_file(&dir.join(jigsaw_ga::bundle::MANIFEST_FILE))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Shred(a) => cmd_shred(a),
        Command::Mix(a) => cmd_mix(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Render(a) => cmd_render(a),
        Command::Truth(a) => cmd_truth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_shred(a: ShredArgs) -> CmdResult {
    require_file(&a.input)?;
    if a.tile_size == 0 {
        return Err(Failure::Usage("--tile-size must be positive".into()));
    }
    let image = image::open(&a.input).map_err(|e| Error::Image { path: a.input.clone(), source: e })?.to_rgb8();
    let id = a.id.unwrap_or_else(|| a.input.file_stem().map_or("image".into(), |s| s.to_string_lossy().into_owned()));
    let bundle = jigsaw_ga::shred(&image, &id, a.tile_size, a.seed)?;
    bundle.write(&a.out)?;
    println!("{} tiles", bundle.len());
    Ok(())
}

fn cmd_mix(a: MixArgs) -> CmdResult {
    for dir in &a.inputs {
        require_bundle(dir)?;
    }
    let bundles = a.inputs.iter().map(|d| TileBundle::read(d)).collect::<Result<Vec<_>, _>>()?;
    let mixed = jigsaw_ga::mix(&bundles, a.seed)?;
    mixed.write(&a.out)?;
    println!("{} tiles from {} sources", mixed.len(), mixed.manifest.sources.len());
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    require_bundle(&a.bundle)?;
    if a.threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    if a.render_every == Some(0) {
        return Err(Failure::Usage("--render-every must be positive".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = a.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| solve(&a))
}

fn solve(a: &SolveArgs) -> CmdResult {
    let bundle = TileBundle::read(&a.bundle)?;
    let pieces = bundle.pieces()?;
    let n = pieces.len();
    let mut options = TableOptions::default();
    if let Some(max) = a.max_table_bytes {
        options.mode = Some(if materialized_bytes(n) <= max { TableMode::Materialized } else { TableMode::OnDemand });
    }
    let config = GaConfig {
        population_size: a.pop,
        generations: a.gens,
        elite_count: a.elite,
        shared_relation_skip_prob: a.mutation,
        seed: a.seed,
        table: options,
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let start = Instant::now();
    let hash = bundle.content_hash();
    if n == 1 {
        // Nothing to search: the lone piece is the solution.
        let chromosome = Chromosome::from_links(vec![None; 4])?;
        let placement = Placement::new(vec![Pose::default()]);
        SolutionDoc::new(&chromosome, &placement, None)?.write(&a.out)?;
        let echo = ConfigEcho::new(&config, a.threads, "None".into(), n, hash);
        RunRecord::new(a.seed, echo).write(&a.record.clone().unwrap_or_else(|| a.out.with_extension("run.toml")))?;
        println!("single piece, nothing to solve");
        return Ok(());
    }
    let table = match &a.table_cache {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
            table_cache::load_or_build(&table_cache::cache_path(dir, &hash), &pieces, options)?
        }
        None => CompatibilityTable::build_with(&pieces, options)?,
    };
    log::info!("table for {n} pieces ready in {:.2}s ({:?})", start.elapsed().as_secs_f64(), table.mode());

    let snapshot_dir = a.render_every.map(|_| {
        a.snapshot_dir.clone().unwrap_or_else(|| a.out.parent().unwrap_or(Path::new(".")).join("snapshots"))
    });
    if let Some(dir) = &snapshot_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    }

    let echo = ConfigEcho::new(&config, a.threads, format!("{:?}", table.mode()), n, hash);
    let mut record = RunRecord::new(a.seed, echo);
    let mut hook_error = None;
    let solution = evolve_with_table(&table, &config, |report| {
        record.push(report.generation, report.best_fitness, start.elapsed().as_secs_f64());
        log::info!("generation {} best {:.6}", report.generation, report.best_fitness);
        if let (Some(every), Some(dir)) = (a.render_every, &snapshot_dir) {
            if report.generation % every == 0 && hook_error.is_none() {
                if let Err(e) = snapshot(&bundle, report.best, dir, report.generation, a.snapshot_max_pixels) {
                    hook_error = Some(e);
                }
            }
        }
    })?;
    if let Some(e) = hook_error {
        return Err(e.into());
    }

    let doc = SolutionDoc::new(&solution.chromosome, &solution.placement, Some(solution.fitness))?;
    doc.write(&a.out)?;
    let record_path = a.record.clone().unwrap_or_else(|| a.out.with_extension("run.toml"));
    record.write(&record_path)?;
    println!("fitness {:.6}, {} x {} bounding box", solution.fitness, doc.rows, doc.cols);
    Ok(())
}

fn snapshot(bundle: &TileBundle, best: &jigsaw_core::Chromosome, dir: &Path, generation: usize, max_pixels: u64) -> Result<(), Error> {
    let placement = best.placement()?;
    let img = downscale_to_budget(render(bundle, &placement, Rgb([0, 0, 0]))?, max_pixels);
    let path = dir.join(format!("gen_{generation:04}.png"));
    img.save_with_format(&path, image::ImageFormat::Png).map_err(|e| Error::Image { path, source: e })
}

fn cmd_evaluate(a: EvaluateArgs) -> CmdResult {
    require_file(&a.solution)?;
    require_bundle(&a.bundle)?;
    let manifest = jigsaw_ga::Manifest::read(&a.bundle.join(jigsaw_ga::bundle::MANIFEST_FILE))?;
    let doc = SolutionDoc::read(&a.solution)?;
    if doc.piece_count != manifest.piece_count() {
        return Err(Error::Invalid(format!(
            "solution has {} pieces, bundle has {}",
            doc.piece_count,
            manifest.piece_count()
        ))
        .into());
    }
    let chromosome = doc.chromosome()?;
    let m = jigsaw_core::score(&chromosome, &manifest.origins()?)?;
    println!("{}", metrics::summary_line(&m));
    if m.per_source.len() > 1 {
        println!("{:<24} {:>10} {:>9} {:>8}", "source", "accuracy", "matched", "perfect");
        for s in &m.per_source {
            println!(
                "{:<24} {:>9.4}% {:>4}/{:<4} {:>8}",
                manifest.sources[s.source].image_id,
                100.0 * s.neighbor_accuracy,
                s.matched,
                s.total,
                s.perfect
            );
        }
    }
    if let Some(out) = &a.out {
        std::fs::write(out, metrics::to_toml(&m, &manifest)).map_err(|e| Error::Io { path: out.clone(), source: e })?;
        if let Some(rp) = &a.record {
            require_file(rp)?;
            let mut record = RunRecord::read(rp)?;
            record.metrics = Some(out.display().to_string());
            record.write(rp)?;
        }
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> CmdResult {
    require_file(&a.solution)?;
    require_bundle(&a.bundle)?;
    let bundle = TileBundle::read(&a.bundle)?;
    let doc = SolutionDoc::read(&a.solution)?;
    let img = downscale_to_budget(render(&bundle, &doc.placement()?, a.background)?, a.max_pixels);
    img.save_with_format(&a.out, image::ImageFormat::Png).map_err(|e| Error::Image { path: a.out.clone(), source: e })?;
    Ok(())
}

fn cmd_truth(a: TruthArgs) -> CmdResult {
    require_bundle(&a.bundle)?;
    let manifest = jigsaw_ga::Manifest::read(&a.bundle.join(jigsaw_ga::bundle::MANIFEST_FILE))?;
    let chromosome = manifest.ground_truth_chromosome()?;
    let doc = SolutionDoc::new(&chromosome, &manifest.ground_truth_placement()?, None)?;
    doc.write(&a.out)?;
    Ok(())
}
