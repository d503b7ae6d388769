//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors. Results go
//! to files or standard output, diagnostics to standard error. Numbers are
//! printed in the shortest form that parses back to the same `f64` unless
//! `--precision` asks for a fixed number of significant digits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagram::{parse_diagram, write_diagram, PersistenceDiagram};
use crate::kernel::{feature_map_raster, pssk_distance, pssk_eval, KernelScale, RasterGrid};
use crate::landscape::{build_landscape, landscape_distance, landscape_kernel};
use crate::learning::{
    cross_validate, cross_validate_grams, definiteness_check, distance_matrix, export_gram, gram_matrix,
    indefiniteness_search, parse_precomputed, retrieval_eval, svm_train, DistanceChoice, GramMatrix, KernelChoice,
    KernelFamily, SearchOptions, SquareMatrix,
};
use crate::matching::{wasserstein_distance, Exponent};
use crate::persistence::io::{read_image, read_off, read_signal, read_values};
use crate::persistence::{
    build_cubical_filtration, build_lower_star_filtration, build_path_filtration, compute_persistence, GrayscaleImage,
};

#[derive(Debug, Parser)]
#[command(
    name = "pssk",
    version,
    about = "Persistence diagrams, the persistence scale-space kernel, and kernel learning"
)]
struct Cli {
    /// Seed for every random choice (CV folds, definiteness search).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for Gram and distance matrices.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Significant digits for printed numbers (1 to 17); shortest round-trip form by default.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Persistence diagrams of a signal, image or mesh.
    Diagram(DiagramArgs),
    /// Kernel value between two diagrams.
    Kernel(KernelArgs),
    /// Gram matrix of a collection of diagrams.
    Gram(GramArgs),
    /// Distance between two diagrams, or the distance matrix of a collection.
    Distance(DistanceArgs),
    /// Persistence landscape of a diagram as CSV.
    Landscape(LandscapeArgs),
    /// Rasterized scale-space feature map of a diagram.
    FeatureMap(FeatureMapArgs),
    /// Definiteness report for a matrix, or a search for indefinite distance matrices.
    Definiteness(DefinitenessArgs),
    /// Cross-validated SVM classification over C and sigma grids.
    Classify(ClassifyArgs),
    /// Retrieval measures (NN, T1, T2, EM, DCG) for a distance matrix.
    Retrieval(RetrievalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputKind {
    Signal1d,
    Image,
    Mesh,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum KernelKind {
    Pssk,
    Landscape,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    /// Signal (one real per line), image (ASCII PGM or CSV) or OFF mesh.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: InputKind,
    /// Per-vertex values for a mesh, one real per line.
    #[arg(long, required_if_eq("kind", "mesh"))]
    values: Option<PathBuf>,
    /// Output file. With several dimensions and no `--dim`, writes `<stem>.dim<k>.<ext>`.
    #[arg(long)]
    out: PathBuf,
    /// Write only this homology dimension, to `--out` itself.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelKind::Pssk)]
    kind: KernelKind,
    /// Kernel scale, required for pssk.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Debug, Args)]
struct CollectionArgs {
    /// Manifest with one `<path> [label]` per line; paths are relative to the manifest.
    #[arg(long, conflicts_with = "inputs")]
    list: Option<PathBuf>,
    /// Diagram files.
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct GramArgs {
    #[command(flatten)]
    items: CollectionArgs,
    #[arg(long, value_enum, default_value_t = KernelKind::Pssk)]
    kernel: KernelKind,
    #[arg(long)]
    sigma: Option<f64>,
    /// Gram CSV destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the precomputed-kernel text layout (needs labels in the manifest).
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricKind {
    Pssk,
    Landscape,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["p", "metric"])))]
struct DistanceArgs {
    #[arg(long, requires = "b", conflicts_with = "list")]
    a: Option<PathBuf>,
    #[arg(long, requires = "a", conflicts_with = "list")]
    b: Option<PathBuf>,
    /// Manifest of diagrams; prints the distance matrix as CSV.
    #[arg(long, required_unless_present = "a")]
    list: Option<PathBuf>,
    /// Wasserstein order: a real >= 1 or `inf` for the bottleneck distance.
    #[arg(long)]
    p: Option<String>,
    /// Kernel-induced distance instead of a Wasserstein distance.
    #[arg(long, value_enum)]
    metric: Option<MetricKind>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Matrix CSV destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LandscapeArgs {
    #[arg(long)]
    input: PathBuf,
    /// CSV destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RasterFormat {
    Pgm,
    Csv,
}

#[derive(Debug, Args)]
struct FeatureMapArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    sigma: f64,
    /// Cells per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Window `xmin,xmax,ymin,ymax`; defaults to a square around the diagram.
    #[arg(long, value_delimiter = ',')]
    bounds: Option<Vec<f64>>,
    /// PGM is 16-bit ASCII scaled to the value range; CSV holds raw values. Row 0 is the top (ymax).
    #[arg(long, value_enum, default_value_t = RasterFormat::Csv)]
    format: RasterFormat,
    /// Destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DefinitenessArgs {
    #[command(subcommand)]
    mode: DefinitenessMode,
}

#[derive(Debug, Subcommand)]
enum DefinitenessMode {
    /// Eigenvalues, psd and cnd flags of a square matrix CSV.
    Check {
        /// Matrix CSV with a header row of ids.
        #[arg(long)]
        matrix: PathBuf,
        /// Analyze `-M` (useful for distance matrices).
        #[arg(long, conflicts_with = "exp")]
        negate: bool,
        /// Analyze `exp(-xi M)` for the given `xi`.
        #[arg(long)]
        exp: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Random search for diagram sets whose Wasserstein distance matrix is not c.n.d.
    Search {
        /// Wasserstein order: a real >= 1 or `inf`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        /// Diagrams drawn per trial.
        #[arg(long, default_value_t = 40)]
        items: usize,
        #[arg(long, default_value_t = 1_000)]
        max_trials: u32,
        /// Keep the full draw instead of reducing it to a minimal witness.
        #[arg(long)]
        no_prune: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Directory that receives the witness diagrams and distance matrix.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Manifest with `<path> <label>` per line.
    #[arg(long, required_unless_present = "precomputed")]
    list: Option<PathBuf>,
    /// Precomputed-kernel file (as written by `gram --export`) instead of diagrams.
    #[arg(long, conflicts_with_all = ["list", "predict"])]
    precomputed: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = KernelKind::Pssk)]
    kernel: KernelKind,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10,100")]
    c_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1")]
    sigma_grid: Vec<f64>,
    /// Writes the `sigma,accuracy` curve.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    /// Manifest of diagrams to label with a model trained on all items at the best parameters.
    #[arg(long)]
    predict: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RetrievalArgs {
    /// Distance matrix CSV with a header row of ids.
    #[arg(long)]
    matrix: PathBuf,
    /// One integer label per line, in matrix order.
    #[arg(long)]
    labels: PathBuf,
}

/// Error surfaced as an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

type CliResult<T> = Result<T, Failure>;

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn at(path: &Path) -> impl Fn(String) -> Failure + '_ {
    move |m| Failure::Data(format!("{}: {m}", path.display()))
}

/// Number formatting shared by every subcommand.
#[derive(Debug, Clone, Copy)]
struct NumFmt(Option<u32>);

impl NumFmt {
    fn f(self, v: f64) -> String {
        match self.0 {
            Some(p) => format!("{:.*e}", (p - 1) as usize, v),
            None => shortest(v),
        }
    }
}

/// Shortest round-trip text; scientific outside `[1e-2, 1e16)`.
fn shortest(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-2..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Parses `argv` (without the program name), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("pssk")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let mut buf = String::new();
    let result = dispatch(&cli, &mut buf, err);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut String, err: &mut dyn Write) -> CliResult<()> {
    let nf = NumFmt(cli.precision);
    if cli.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Diagram(a) => cmd_diagram(a),
        Command::Kernel(a) => cmd_kernel(a, nf, out),
        Command::Gram(a) => cmd_gram(a, cli.threads, nf, out),
        Command::Distance(a) => cmd_distance(a, cli.threads, nf, out),
        Command::Landscape(a) => cmd_landscape(a, nf, out),
        Command::FeatureMap(a) => cmd_feature_map(a, nf, out),
        Command::Definiteness(a) => cmd_definiteness(&a.mode, cli.seed, nf, out),
        Command::Classify(a) => cmd_classify(a, cli.seed, cli.threads, nf, out, err),
        Command::Retrieval(a) => cmd_retrieval(a, nf, out),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(dest: Option<&PathBuf>, text: &str, out: &mut String) -> CliResult<()> {
    match dest {
        Some(p) => write_text(p, text),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn read_diagram(path: &Path) -> CliResult<PersistenceDiagram> {
    parse_diagram(&read_text(path)?).map_err(|e| at(path)(e.to_string()))
}

fn scale(sigma: Option<f64>) -> CliResult<KernelScale> {
    let s = sigma.ok_or_else(|| Failure::Usage("--sigma is required for the pssk kernel".into()))?;
    KernelScale::new(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn exponent(p: &str) -> CliResult<Exponent> {
    p.parse().map_err(|e: crate::matching::MatchingError| Failure::Usage(e.to_string()))
}

fn cmd_diagram(a: &DiagramArgs) -> CliResult<()> {
    let text = read_text(&a.input)?;
    let e = at(&a.input);
    let diagrams = match a.kind {
        InputKind::Signal1d => {
            compute_persistence(&build_path_filtration(&read_signal(&text).map_err(|x| e(x.to_string()))?))
        }
        InputKind::Image => {
            compute_persistence(&build_cubical_filtration(&read_image(&text).map_err(|x| e(x.to_string()))?))
        }
        InputKind::Mesh => {
            let vpath = a.values.as_ref().ok_or_else(|| Failure::Usage("--values is required for meshes".into()))?;
            let values = read_values(&read_text(vpath)?).map_err(|x| at(vpath)(x.to_string()))?;
            let mesh = read_off(&text, values).map_err(|x| e(x.to_string()))?;
            compute_persistence(&build_lower_star_filtration(&mesh))
        }
    };
    if let Some(k) = a.dim {
        let d =
            diagrams.get(k).ok_or_else(|| Failure::Usage(format!("dimension {k} is not available for this input")))?;
        return write_text(&a.out, &write_diagram(d));
    }
    if diagrams.len() == 1 {
        return write_text(&a.out, &write_diagram(&diagrams[0]));
    }
    let stem = a.out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = a.out.extension().map(|s| format!(".{}", s.to_string_lossy())).unwrap_or_default();
    for d in &diagrams {
        let path = a.out.with_file_name(format!("{stem}.dim{}{ext}", d.dimension()));
        write_text(&path, &write_diagram(d))?;
    }
    Ok(())
}

fn cmd_kernel(a: &KernelArgs, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let sigma = if a.kind == KernelKind::Pssk { Some(scale(a.sigma)?) } else { None };
    let (f, g) = (read_diagram(&a.a)?, read_diagram(&a.b)?);
    let v = match sigma {
        Some(s) => pssk_eval(&f, &g, s),
        None => landscape_kernel(&f, &g),
    };
    let _ = writeln!(out, "{}", nf.f(v));
    Ok(())
}

struct Collection {
    ids: Vec<String>,
    diagrams: Vec<PersistenceDiagram>,
    labels: Option<Vec<i64>>,
}

/// Reads `<path> [label]` lines. Labels must be given for all items or none.
fn read_manifest(path: &Path) -> CliResult<Collection> {
    let text = read_text(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut ids = Vec::new();
    let mut diagrams = Vec::new();
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let e = |m: String| Failure::Data(format!("{}:{}: {m}", path.display(), idx + 1));
        let mut tokens = line.split_whitespace();
        let item = tokens.next().expect("line is nonempty");
        if let Some(l) = tokens.next() {
            labels.push(Some(l.parse::<i64>().map_err(|_| e(format!("bad label `{l}`")))?));
        } else {
            labels.push(None);
        }
        if tokens.next().is_some() {
            return Err(e("expected `<path> [label]`".into()));
        }
        diagrams.push(read_diagram(&base.join(item))?);
        ids.push(item.to_string());
    }
    let labels = if labels.iter().all(Option::is_some) && !labels.is_empty() {
        Some(labels.into_iter().flatten().collect())
    } else if labels.iter().all(Option::is_none) {
        None
    } else {
        return Err(Failure::Data(format!("{}: labels must be given for every item or none", path.display())));
    };
    Ok(Collection { ids, diagrams, labels })
}

fn read_collection(c: &CollectionArgs) -> CliResult<Collection> {
    match &c.list {
        Some(p) => read_manifest(p),
        None => {
            if c.inputs.is_empty() {
                return Err(Failure::Usage("give diagram files or --list".into()));
            }
            let diagrams = c.inputs.iter().map(|p| read_diagram(p)).collect::<CliResult<Vec<_>>>()?;
            let ids = c.inputs.iter().map(|p| p.display().to_string()).collect();
            Ok(Collection { ids, diagrams, labels: None })
        }
    }
}

fn cmd_gram(a: &GramArgs, threads: usize, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let kernel = match a.kernel {
        KernelKind::Pssk => KernelChoice::ScaleSpace(scale(a.sigma)?),
        KernelKind::Landscape => KernelChoice::Landscape,
    };
    let col = read_collection(&a.items)?;
    let g = gram_matrix(&col.diagrams, kernel, threads).with_ids(col.ids);
    if let Some(path) = &a.export {
        let labels =
            col.labels.as_ref().ok_or_else(|| Failure::Usage("--export needs labels in the manifest".into()))?;
        write_text(path, &export_gram(&g, labels, |v| nf.f(v)))?;
    }
    emit(a.out.as_ref(), &g.to_csv(|v| nf.f(v)), out)
}

fn cmd_distance(a: &DistanceArgs, threads: usize, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let choice = match (&a.p, a.metric) {
        (Some(p), None) => DistanceChoice::Wasserstein(exponent(p)?),
        (None, Some(MetricKind::Pssk)) => DistanceChoice::ScaleSpace(scale(a.sigma)?),
        (None, Some(MetricKind::Landscape)) => DistanceChoice::Landscape,
        _ => return Err(Failure::Usage("give exactly one of --p and --metric".into())),
    };
    if let (Some(pa), Some(pb)) = (&a.a, &a.b) {
        let (f, g) = (read_diagram(pa)?, read_diagram(pb)?);
        let v = match choice {
            DistanceChoice::Wasserstein(p) => wasserstein_distance(&f, &g, p),
            DistanceChoice::ScaleSpace(s) => pssk_distance(&f, &g, s),
            DistanceChoice::Landscape => landscape_distance(&f, &g),
        };
        let _ = writeln!(out, "{}", nf.f(v));
        return Ok(());
    }
    let list = a.list.as_ref().ok_or_else(|| Failure::Usage("give --a and --b, or --list".into()))?;
    let col = read_manifest(list)?;
    let d = distance_matrix(&col.diagrams, choice, threads).with_ids(col.ids);
    emit(a.out.as_ref(), &d.to_csv(|v| nf.f(v)), out)
}

fn cmd_landscape(a: &LandscapeArgs, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let l = build_landscape(&read_diagram(&a.input)?);
    emit(a.out.as_ref(), &l.to_csv(|v| nf.f(v)), out)
}

/// Square window around the diagram, padded by three standard deviations of
/// the heat kernel at time `sigma`.
fn default_bounds(d: &PersistenceDiagram, sigma: f64) -> RasterGrid {
    let lo = d.points().iter().map(|p| p.birth).fold(f64::INFINITY, f64::min);
    let hi = d.points().iter().map(|p| p.death).fold(f64::NEG_INFINITY, f64::max);
    let pad = 3.0 * (2.0 * sigma).sqrt();
    if lo.is_finite() && hi.is_finite() {
        RasterGrid::square(lo - pad, hi + pad, 1)
    } else {
        RasterGrid::square(0.0, 1.0, 1)
    }
}

fn raster_pgm(img: &GrayscaleImage, nf: NumFmt) -> String {
    let min = img.pixels().iter().copied().fold(f64::INFINITY, f64::min);
    let max = img.pixels().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = format!("P2\n# min {} max {}\n{} {}\n65535\n", nf.f(min), nf.f(max), img.cols(), img.rows());
    for r in 0..img.rows() {
        let row: Vec<String> = (0..img.cols())
            .map(|c| {
                let v = img.get(r, c);
                let level = if max > min { ((v - min) / (max - min) * 65535.0).round() } else { 0.0 };
                (level as u32).to_string()
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn raster_csv(img: &GrayscaleImage, nf: NumFmt) -> String {
    let mut s = String::new();
    for r in 0..img.rows() {
        let row: Vec<String> = (0..img.cols()).map(|c| nf.f(img.get(r, c))).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn cmd_feature_map(a: &FeatureMapArgs, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let sigma = scale(Some(a.sigma))?;
    let d = read_diagram(&a.input)?;
    let mut grid = match &a.bounds {
        Some(b) if b.len() != 4 => return Err(Failure::Usage("--bounds takes xmin,xmax,ymin,ymax".into())),
        Some(b) => RasterGrid { xmin: b[0], xmax: b[1], ymin: b[2], ymax: b[3], nx: 1, ny: 1 },
        None => default_bounds(&d, a.sigma),
    };
    grid.nx = a.grid;
    grid.ny = a.grid;
    let img = feature_map_raster(&d, sigma, &grid).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = match a.format {
        RasterFormat::Pgm => raster_pgm(&img, nf),
        RasterFormat::Csv => raster_csv(&img, nf),
    };
    emit(a.out.as_ref(), &text, out)
}

fn read_matrix(path: &Path) -> CliResult<GramMatrix> {
    GramMatrix::from_csv(&read_text(path)?).map_err(|e| at(path)(e.to_string()))
}

fn cmd_definiteness(mode: &DefinitenessMode, seed: u64, nf: NumFmt, out: &mut String) -> CliResult<()> {
    match mode {
        DefinitenessMode::Check { matrix, negate, exp, tol } => {
            let m = read_matrix(matrix)?.matrix;
            let m = match (negate, exp) {
                (true, _) => m.map(|v| -v),
                (false, Some(xi)) => m.map(|v| (-xi * v).exp()),
                (false, None) => m,
            };
            let r = definiteness_check(&m, *tol).map_err(data)?;
            out.push_str(&r.to_text(|v| nf.f(v)));
            Ok(())
        }
        DefinitenessMode::Search { p, xi, items, max_trials, tol, no_prune, out_dir } => {
            let opts = SearchOptions {
                exponent: exponent(p)?,
                xi: *xi,
                n_items: *items,
                seed,
                max_trials: *max_trials,
                tolerance: *tol,
                prune: !no_prune,
            };
            let w = indefiniteness_search(&opts).map_err(|e| match e {
                crate::learning::LearningError::InvalidParameter(m) => Failure::Usage(m),
                other => data(other),
            })?;
            let _ = writeln!(out, "trial {}", w.trial);
            let kept: Vec<String> = w.kept.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "kept {}", kept.join(","));
            let _ = writeln!(out, "p {}", opts.exponent);
            let _ = writeln!(out, "xi {}", nf.f(opts.xi));
            let _ = writeln!(out, "certifying_xi {}", nf.f(w.certifying_xi));
            out.push_str("[minus_d]\n");
            out.push_str(&w.report_minus_d.to_text(|v| nf.f(v)));
            out.push_str("[exp_xi]\n");
            out.push_str(&w.report_exp.to_text(|v| nf.f(v)));
            out.push_str("[exp_certifying_xi]\n");
            out.push_str(&w.report_certifying.to_text(|v| nf.f(v)));
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| at(dir)(e.to_string()))?;
                let mut manifest = String::new();
                for (i, d) in w.diagrams.iter().enumerate() {
                    let name = format!("item{i}.dgm");
                    write_text(&dir.join(&name), &write_diagram(d))?;
                    let _ = writeln!(manifest, "{name}");
                }
                write_text(&dir.join("items.txt"), &manifest)?;
                let ids = (0..w.diagrams.len()).map(|i| format!("item{i}")).collect();
                let g = GramMatrix::new(w.distances.clone()).with_ids(ids);
                write_text(&dir.join("distances.csv"), &g.to_csv(|v| nf.f(v)))?;
            }
            Ok(())
        }
    }
}

fn cmd_classify(
    a: &ClassifyArgs,
    seed: u64,
    threads: usize,
    nf: NumFmt,
    out: &mut String,
    err: &mut dyn Write,
) -> CliResult<()> {
    let learning_err = |e: crate::learning::LearningError| match e {
        crate::learning::LearningError::InvalidParameter(m) => Failure::Usage(m),
        other => data(other),
    };
    let (report, collection) = if let Some(path) = &a.precomputed {
        let (m, labels) = parse_precomputed(&read_text(path)?).map_err(|e| at(path)(e.to_string()))?;
        (cross_validate_grams(&[(None, m)], &labels, &a.c_grid, a.folds, seed).map_err(learning_err)?, None)
    } else {
        let list = a.list.as_ref().ok_or_else(|| Failure::Usage("give --list or --precomputed".into()))?;
        let col = read_manifest(list)?;
        let labels = col.labels.clone().ok_or_else(|| at(list)("every item needs a label".into()))?;
        let family = match a.kernel {
            KernelKind::Pssk => KernelFamily::ScaleSpace,
            KernelKind::Landscape => KernelFamily::Landscape,
        };
        let r = cross_validate(&col.diagrams, &labels, family, &a.c_grid, &a.sigma_grid, a.folds, seed, threads)
            .map_err(learning_err)?;
        (r, Some((col, labels)))
    };
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let sigma_text = |s: Option<f64>| s.map(|v| nf.f(v)).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "best_c {}", nf.f(report.best.c));
    let _ = writeln!(out, "best_sigma {}", sigma_text(report.best.sigma));
    let _ = writeln!(out, "mean_accuracy {}", nf.f(report.best.mean_accuracy));
    let folds: Vec<String> = report.best.fold_accuracies.iter().map(|&v| nf.f(v)).collect();
    let _ = writeln!(out, "fold_accuracies {}", folds.join(","));
    out.push_str("c,sigma,mean_accuracy\n");
    for cell in &report.cells {
        let _ = writeln!(out, "{},{},{}", nf.f(cell.c), sigma_text(cell.sigma), nf.f(cell.mean_accuracy));
    }
    if let Some(path) = &a.curve_out {
        write_text(path, &report.curve_csv(|v| nf.f(v)))?;
    }
    if let (Some(pred_path), Some((col, labels))) = (&a.predict, collection) {
        let kernel = match report.best.sigma {
            Some(s) => KernelChoice::ScaleSpace(KernelScale::new(s).map_err(data)?),
            None => KernelChoice::Landscape,
        };
        let train = gram_matrix(&col.diagrams, kernel, threads).matrix;
        let model = svm_train(&train, &labels, report.best.c).map_err(data)?;
        if let Some(w) = &model.warning {
            let _ = writeln!(err, "warning: {w}");
        }
        let queries = read_manifest(pred_path)?;
        let ls_train: Vec<_> = match kernel {
            KernelChoice::Landscape => col.diagrams.iter().map(build_landscape).collect(),
            KernelChoice::ScaleSpace(_) => Vec::new(),
        };
        out.push_str("item,predicted\n");
        for (id, q) in queries.ids.iter().zip(&queries.diagrams) {
            let row: Vec<f64> = match kernel {
                KernelChoice::ScaleSpace(s) => col.diagrams.iter().map(|t| pssk_eval(q, t, s)).collect(),
                KernelChoice::Landscape => {
                    let lq = build_landscape(q);
                    ls_train.iter().map(|lt| lq.inner(lt)).collect()
                }
            };
            let _ = writeln!(out, "{id},{}", model.predict(&row));
        }
    }
    Ok(())
}

fn read_labels(path: &Path) -> CliResult<Vec<i64>> {
    let text = read_text(path)?;
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.split('#').next().unwrap_or_default().trim();
        if t.is_empty() {
            continue;
        }
        labels.push(t.parse().map_err(|_| Failure::Data(format!("{}:{}: bad label `{t}`", path.display(), idx + 1)))?);
    }
    Ok(labels)
}

fn cmd_retrieval(a: &RetrievalArgs, nf: NumFmt, out: &mut String) -> CliResult<()> {
    let d: SquareMatrix = read_matrix(&a.matrix)?.matrix;
    let labels = read_labels(&a.labels)?;
    let s = retrieval_eval(&d, &labels).map_err(data)?;
    out.push_str(&s.to_table(|v| nf.f(v)));
    Ok(())
}
