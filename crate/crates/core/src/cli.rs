//! `leelat` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a checked claim fails or a search runs
//! out of budget, 2 on usage errors and malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::budget::Budgets;
use crate::codes::{LinearCodeZm, Metric};
use crate::error::{Error, Result};
use crate::io::{format_code, format_int_matrix, format_lattice, format_matrix, matrix_hash};
use crate::lattice::{covering_radius_bitset, Lattice};
use crate::matrices::{self, WeighingMatrix};
use crate::sylvester;
use crate::transform::{self, DiscreteTransform};
use crate::verify::{self, Registry, RunOptions};

#[derive(Parser, Debug)]
#[command(
    name = "leelat",
    version,
    about = "Weighing-matrix lattices, Lee-metric codes and Lee-sphere transforms"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Largest quotient group the coset search may materialise.
    #[arg(long, global = true, default_value_t = Budgets::default().coset_budget)]
    coset_budget: u64,
    /// Node limit for pruned distance searches.
    #[arg(long, global = true, default_value_t = Budgets::default().node_budget)]
    node_budget: u64,
    /// Largest code or point set enumerated element by element.
    #[arg(long, global = true, default_value_t = Budgets::default().enum_budget)]
    enum_budget: u64,
    /// Largest matrix order any constructor may build.
    #[arg(long, global = true, default_value_t = Budgets::default().max_order)]
    max_order: usize,
    /// Seed for every random batch.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall times in reports. Reports are no longer byte-stable.
    #[arg(long, global = true)]
    timings: bool,
}

impl Global {
    fn budgets(&self) -> Budgets {
        Budgets {
            max_order: self.max_order,
            coset_budget: self.coset_budget,
            node_budget: self.node_budget,
            enum_budget: self.enum_budget,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct weighing matrices.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Lattice invariants.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Linear codes over Z_m.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Lattices of the Sylvester codes.
    #[command(subcommand)]
    Sylvester(SylvesterCmd),
    /// The maps x -> Wx/s and the discrete transform.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Run a claim suite from the registry.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write the matrix here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Apply the normal form (first row 0…0 1…1) before writing.
    #[arg(long)]
    normal_form: bool,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Sylvester Hadamard matrix of order 2^m.
    Sylvester {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Paley conference matrix of order q+1.
    PaleyConference {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Paley Hadamard matrix: order q+1 (construction i, q ≡ 3 mod 4) or
    /// 2(q+1) (construction ii, q ≡ 1 mod 4, symmetric).
    PaleyHadamard {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Construction::I)]
        construction: Construction,
        #[command(flatten)]
        out: OutArgs,
    },
    /// [[H, H], [H, -H]] for a Hadamard matrix H.
    Doubling {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Construction {
    I,
    Ii,
}

/// Where a lattice comes from; exactly one must be given.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LatticeSource {
    /// Lattice file: `n` then n basis rows.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Row lattice of a weighing matrix (file or name such as sylvester:3).
    #[arg(long)]
    matrix: Option<String>,
    /// Sylvester-code lattice `M,J`.
    #[arg(long, value_parser = parse_pair)]
    sylvester: Option<(u32, u32)>,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Volume and canonical basis.
    Volume {
        #[command(flatten)]
        src: LatticeSource,
    },
    /// Exact minimum Manhattan distance.
    Distance {
        #[command(flatten)]
        src: LatticeSource,
    },
    /// Covering radius by coset search.
    Radius {
        #[command(flatten)]
        src: LatticeSource,
        /// Keep a leader vector per coset.
        #[arg(long)]
        store_leaders: bool,
        /// Export the coset atlas as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Reduce modulo m to a code over Z_m.
    Reduce {
        #[command(flatten)]
        src: LatticeSource,
        /// Defaults to the lattice period.
        #[arg(long)]
        modulus: Option<u64>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CodeSource {
    /// Code file: `m n k` then k generator rows.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Rows of a weighing matrix over Z_w (file or name).
    #[arg(long)]
    matrix: Option<String>,
    /// Rows of the Paley conference matrix of order q+1 over Z_q.
    #[arg(long)]
    conference: Option<u64>,
    /// Sylvester code `M,J` over Z_{2^J}.
    #[arg(long, value_parser = parse_pair)]
    sylvester: Option<(u32, u32)>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Auto,
    Enumerate,
    Pruned,
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Minimum distance.
    Dist {
        #[command(flatten)]
        src: CodeSource,
        #[arg(long, default_value = "lee", value_parser = parse_metric)]
        metric: Metric,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Override the modulus used with --matrix.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Number of Howell-form rows.
    Rank {
        #[command(flatten)]
        src: CodeSource,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Dual code and whether the code is self-dual.
    Dual {
        #[command(flatten)]
        src: CodeSource,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Singleton-bound test over a prime field.
    Mds {
        #[command(flatten)]
        src: CodeSource,
        #[arg(long)]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum SylvesterCmd {
    /// Volumes, distances, covering radii and bounds for every j <= m.
    Table {
        #[arg(long)]
        m: u32,
        /// CSV instead of text.
        #[arg(long)]
        csv: bool,
    },
    /// Covering radius of the (4,4) lattice: 2^32 cosets, about 1.5 GB.
    R44 {
        /// Required: the job is long.
        #[arg(long)]
        confirm: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TransformCmd {
    /// Apply Wx/s (with --s) or the discrete transform to a point.
    Apply {
        #[arg(long)]
        matrix: String,
        /// Comma-separated integer point.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        point: IntVec,
        #[arg(long)]
        s: Option<u64>,
    },
    /// Transform a whole Lee sphere and compare its bounding box with the
    /// cube bound.
    BoxExperiment {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        radius: u64,
        /// Comma-separated center; omit for the origin.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        center: Option<IntVec>,
        /// Use this many seeded random centers instead.
        #[arg(long, conflicts_with = "center")]
        random_centers: Option<u64>,
    },
    /// Run one of the transform suites.
    Verify {
        #[arg(long, value_parser = ["ivA", "ivB", "ivC"])]
        suite: String,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite id or alias, or `all`.
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// Replace the matrix orders of order-indexed claims.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Claim manifest to use instead of the built-in one.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// List suites and aliases.
    #[arg(long)]
    list: bool,
}

fn parse_pair(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected M,J")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?,
        b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?,
    ))
}

/// Comma-separated integers, kept whole so clap does not treat it as a list.
#[derive(Debug, Clone)]
struct IntVec(Vec<i64>);

fn parse_vector(s: &str) -> std::result::Result<IntVec, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad integer {t:?}")))
        .collect::<std::result::Result<_, _>>()
        .map(IntVec)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse()
}

/// Failure classes mapped to exit codes.
enum Fail {
    Usage(String),
    Check(String),
    /// Stdout closed early, as in `leelat ... | head`.
    Closed,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Fail::Check(e.to_string()),
            Error::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe => Fail::Closed,
            _ => Fail::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Fail::Closed;
        }
        Fail::Usage(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

struct Ctx<'a> {
    g: Global,
    out: Out<'a>,
    err: Out<'a>,
}

impl Ctx<'_> {
    /// JSON when `--json`, otherwise the text rendering.
    fn emit<T: Serialize>(
        &mut self,
        value: &T,
        text: impl FnOnce() -> String,
    ) -> std::result::Result<(), Fail> {
        if self.g.json {
            let s = serde_json::to_string_pretty(value).expect("serializable");
            writeln!(self.out, "{s}")?;
        } else {
            write!(self.out, "{}", text())?;
        }
        Ok(())
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        g: cli.global.clone(),
        out,
        err,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) | Err(Fail::Closed) => 0,
        Err(Fail::Check(msg)) => {
            let _ = writeln!(ctx.err, "leelat: {msg}");
            1
        }
        Err(Fail::Usage(msg)) => {
            let _ = writeln!(ctx.err, "leelat: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    match cmd {
        Command::Gen(c) => gen(c, ctx),
        Command::Lattice(c) => lattice(c, ctx),
        Command::Code(c) => code(c, ctx),
        Command::Sylvester(c) => sylvester_cmd(c, ctx),
        Command::Transform(c) => transform_cmd(c, ctx),
        Command::Verify(a) => verify_cmd(a, ctx),
    }
}

/// A file path if it exists, otherwise a matrix name.
fn load_matrix(spec: &str, budgets: &Budgets) -> Result<(String, WeighingMatrix)> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read(path)?;
        Ok((spec.to_string(), crate::io::parse_matrix(&text)?))
    } else if spec.contains(':') {
        Ok((spec.to_string(), matrices::named(spec, budgets.max_order)?))
    } else {
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{spec}: no such file, and not a matrix name"),
        )))
    }
}

fn gen(c: GenCmd, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let max = ctx.g.max_order;
    let budgets = ctx.g.budgets();
    let (w, out) = match c {
        GenCmd::Sylvester { m, out } => (matrices::sylvester_hadamard(m, max)?, out),
        GenCmd::PaleyConference { q, out } => (matrices::paley_conference(q, max)?, out),
        GenCmd::PaleyHadamard {
            q,
            construction,
            out,
        } => {
            let w = match construction {
                Construction::I => matrices::paley_hadamard(q, max)?,
                Construction::Ii => matrices::paley_hadamard_symmetric(q, max)?,
            };
            (w, out)
        }
        GenCmd::Doubling { matrix, out } => {
            let (_, h) = load_matrix(&matrix, &budgets)?;
            (matrices::doubling(&h, max)?, out)
        }
    };
    let w = if out.normal_form {
        matrices::normal_form(&w)
    } else {
        w
    };
    let text = format_matrix(&w);
    match out.out {
        Some(path) => {
            std::fs::write(&path, &text)?;
            #[derive(Serialize)]
            struct Written<'a> {
                path: &'a Path,
                order: usize,
                weight: usize,
                symmetry: String,
                sha256: String,
            }
            let info = Written {
                path: &path,
                order: w.order(),
                weight: w.weight(),
                symmetry: format!("{:?}", w.symmetry()),
                sha256: matrix_hash(&w),
            };
            ctx.emit(&info, || {
                format!(
                    "wrote {} (order {}, weight {}, {}, sha256 {})\n",
                    path.display(),
                    info.order,
                    info.weight,
                    info.symmetry,
                    info.sha256
                )
            })
        }
        None => {
            write!(ctx.out, "{text}")?;
            Ok(())
        }
    }
}

fn load_lattice(src: &LatticeSource, budgets: &Budgets) -> Result<(String, Lattice)> {
    if let Some(p) = &src.basis {
        let basis = crate::io::parse_lattice(&read(p)?)?;
        return Ok((p.display().to_string(), Lattice::canonicalize(&basis)?));
    }
    if let Some(m) = &src.matrix {
        let (name, w) = load_matrix(m, budgets)?;
        return Ok((name, Lattice::canonicalize(&w.to_int_matrix())?));
    }
    let (m, j) = src.sylvester.expect("clap enforces one source");
    Ok((
        format!("sylvester({m},{j})"),
        sylvester::lambda_mj(m, j, budgets.max_order)?,
    ))
}

fn lattice(c: LatticeCmd, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let budgets = ctx.g.budgets();
    match c {
        LatticeCmd::Volume { src } => {
            let (name, l) = load_lattice(&src, &budgets)?;
            #[derive(Serialize)]
            struct V {
                lattice: String,
                dimension: usize,
                volume: String,
                diagonal: Vec<i64>,
                canonical: Vec<Vec<i64>>,
            }
            let v = V {
                lattice: name,
                dimension: l.dimension(),
                volume: l.volume().to_string(),
                diagonal: l.diagonal(),
                canonical: l.canonical().to_rows(),
            };
            ctx.emit(&v, || {
                format!("volume {}\n{}", v.volume, format_lattice(l.canonical()))
            })
        }
        LatticeCmd::Distance { src } => {
            let (name, l) = load_lattice(&src, &budgets)?;
            let d = l.min_manhattan_distance(budgets.node_budget);
            #[derive(Serialize)]
            struct D<'a> {
                lattice: String,
                result: &'a crate::lattice::DistanceResult,
            }
            ctx.emit(
                &D {
                    lattice: name,
                    result: &d,
                },
                || match d.exact() {
                    Some(v) => format!("min distance {v}\nwitness {:?}\n", d.witness()),
                    None => format!(
                        "min distance in [{}, {}] (node budget exhausted)\nwitness {:?}\n",
                        d.bounds().0,
                        d.bounds().1,
                        d.witness()
                    ),
                },
            )?;
            if d.exact().is_none() {
                return Err(Fail::Check(
                    "distance search exhausted its node budget".into(),
                ));
            }
            Ok(())
        }
        LatticeCmd::Radius {
            src,
            store_leaders,
            csv,
        } => {
            let (name, l) = load_lattice(&src, &budgets)?;
            let atlas = l.coset_bfs(store_leaders || csv.is_some(), budgets.coset_budget)?;
            if let Some(path) = &csv {
                atlas.write_csv(std::fs::File::create(path)?)?;
            }
            #[derive(Serialize)]
            struct R {
                lattice: String,
                cosets: usize,
                covering_radius: u32,
                weight_distribution: Vec<u64>,
            }
            let r = R {
                lattice: name,
                cosets: atlas.len(),
                covering_radius: atlas.covering_radius(),
                weight_distribution: atlas.weight_distribution(),
            };
            ctx.emit(&r, || {
                format!(
                    "cosets {}\ncovering radius {}\nweights {:?}\n",
                    r.cosets, r.covering_radius, r.weight_distribution
                )
            })
        }
        LatticeCmd::Reduce { src, modulus } => {
            let (_, l) = load_lattice(&src, &budgets)?;
            let m = match modulus {
                Some(m) => m,
                None => l.period()?,
            };
            let code = l.reduce_to_code(m)?;
            write!(ctx.out, "{}", format_code(&code))?;
            Ok(())
        }
    }
}

fn load_code(
    src: &CodeSource,
    modulus: Option<u64>,
    budgets: &Budgets,
) -> Result<(String, LinearCodeZm)> {
    if let Some(p) = &src.code {
        let code = crate::io::parse_code(&read(p)?)?;
        return Ok((p.display().to_string(), code));
    }
    if let Some((m, j)) = src.sylvester {
        return Ok((
            format!("C({m},{j})"),
            sylvester::c_mj(m, j, budgets.max_order)?,
        ));
    }
    let (name, w) = match (&src.matrix, src.conference) {
        (Some(m), _) => load_matrix(m, budgets)?,
        (None, Some(q)) => {
            let name = format!("conference:{q}");
            let w = matrices::paley_conference(q, budgets.max_order)?;
            (name, w)
        }
        _ => unreachable!("clap enforces one source"),
    };
    let m = modulus.unwrap_or(w.weight() as u64);
    Ok((name, LinearCodeZm::from_matrix(&w.to_int_matrix(), m)?))
}

fn code(c: CodeCmd, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let budgets = ctx.g.budgets();
    match c {
        CodeCmd::Dist {
            src,
            metric,
            method,
            modulus,
        } => {
            let (name, code) = load_code(&src, modulus, &budgets)?;
            let d = match method {
                Method::Auto => code.min_distance(metric, &budgets)?,
                Method::Enumerate => code.min_weight_enumerate(metric, budgets.enum_budget)?,
                Method::Pruned => code.min_weight_pruned(metric, budgets.node_budget)?,
            };
            #[derive(Serialize)]
            struct D<'a> {
                code: String,
                modulus: u64,
                length: usize,
                words: String,
                metric: String,
                result: &'a crate::codes::CodeDistance,
            }
            let v = D {
                code: name,
                modulus: code.modulus(),
                length: code.length(),
                words: code.cardinality().to_string(),
                metric: format!("{metric:?}").to_lowercase(),
                result: &d,
            };
            ctx.emit(&v, || match d.exact() {
                Some(x) => format!("min {} distance {x}\nwitness {:?}\n", v.metric, d.witness()),
                None => format!(
                    "min {} distance in [{}, {}] (node budget exhausted)\n",
                    v.metric,
                    d.bounds().0,
                    d.bounds().1
                ),
            })?;
            if d.exact().is_none() {
                return Err(Fail::Check(
                    "distance search exhausted its node budget".into(),
                ));
            }
            Ok(())
        }
        CodeCmd::Rank { src, modulus } => {
            let (name, code) = load_code(&src, modulus, &budgets)?;
            #[derive(Serialize)]
            struct R {
                code: String,
                modulus: u64,
                rank: usize,
                words: String,
            }
            let r = R {
                code: name,
                modulus: code.modulus(),
                rank: code.rank(),
                words: code.cardinality().to_string(),
            };
            ctx.emit(&r, || format!("rank {} over Z_{}\n", r.rank, r.modulus))
        }
        CodeCmd::Dual { src, modulus } => {
            let (name, code) = load_code(&src, modulus, &budgets)?;
            let dual = code.dual();
            #[derive(Serialize)]
            struct D {
                code: String,
                self_dual: bool,
                dual: Vec<Vec<u64>>,
            }
            let d = D {
                code: name,
                self_dual: dual == code,
                dual: dual.howell_rows(),
            };
            ctx.emit(&d, || {
                format!("self-dual {}\n{}", d.self_dual, format_code(&dual))
            })
        }
        CodeCmd::Mds { src, modulus } => {
            let (name, code) = load_code(&src, modulus, &budgets)?;
            let r = code.is_mds(&budgets)?;
            #[derive(Serialize)]
            struct M<'a> {
                code: String,
                modulus: u64,
                report: &'a crate::codes::MdsReport,
            }
            ctx.emit(
                &M {
                    code: name,
                    modulus: code.modulus(),
                    report: &r,
                },
                || {
                    let (lo, hi) = r.distance.bounds();
                    let d = if lo == hi {
                        lo.to_string()
                    } else {
                        format!("[{lo}, {hi}]")
                    };
                    let mds = r.mds.map_or("undetermined".to_string(), |b| b.to_string());
                    format!("n {} k {} d_H {} MDS {}\n", r.length, r.dimension, d, mds)
                },
            )?;
            if r.mds.is_none() {
                return Err(Fail::Check("distance search exhausted its budget".into()));
            }
            Ok(())
        }
    }
}

fn sylvester_cmd(c: SylvesterCmd, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let budgets = ctx.g.budgets();
    match c {
        SylvesterCmd::Table { m, csv } => {
            let rows = sylvester::table(m, &budgets)?;
            if csv && !ctx.g.json {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record([
                    "m",
                    "j",
                    "volume",
                    "volume_matches_determinant",
                    "min_distance",
                    "covering_radius",
                    "bound",
                ])
                .map_err(|e| Fail::Usage(e.to_string()))?;
                for r in &rows {
                    let (lo, hi) = r.min_distance.bounds();
                    let d = if lo == hi {
                        lo.to_string()
                    } else {
                        format!("{lo}..{hi}")
                    };
                    w.write_record([
                        r.m.to_string(),
                        r.j.to_string(),
                        r.volume.clone(),
                        r.volume_matches_determinant.to_string(),
                        d,
                        r.covering_radius.map_or(String::new(), |v| v.to_string()),
                        r.bound.map_or(String::new(), |v| v.to_string()),
                    ])
                    .map_err(|e| Fail::Usage(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Fail::Usage(e.to_string()))?;
                ctx.out.write_all(&bytes)?;
                return Ok(());
            }
            ctx.emit(&rows, || {
                let mut s = format!(
                    "{:>2} {:>2} {:>26} {:>8} {:>6} {:>6}\n",
                    "m", "j", "volume", "distance", "radius", "bound"
                );
                for r in &rows {
                    let (lo, hi) = r.min_distance.bounds();
                    let d = if lo == hi {
                        lo.to_string()
                    } else {
                        format!("{lo}..{hi}")
                    };
                    s.push_str(&format!(
                        "{:>2} {:>2} {:>26} {:>8} {:>6} {:>6}\n",
                        r.m,
                        r.j,
                        r.volume,
                        d,
                        r.covering_radius.map_or("-".into(), |v| v.to_string()),
                        r.bound.map_or("-".into(), |v| v.to_string())
                    ));
                }
                s
            })
        }
        SylvesterCmd::R44 { confirm } => {
            if !confirm {
                return Err(Fail::Usage(
                    "r44 walks 2^32 cosets with about 1.5 GB of bitsets; pass --confirm".into(),
                ));
            }
            let l = sylvester::lambda_mj(4, 4, budgets.max_order)?;
            let err = &mut *ctx.err;
            let r = covering_radius_bitset(&l, 1 << 32, |level, count| {
                let _ = writeln!(err, "level {level}: {count} cosets");
            })?;
            #[derive(Serialize)]
            struct R {
                m: u32,
                j: u32,
                covering_radius: u32,
            }
            ctx.emit(
                &R {
                    m: 4,
                    j: 4,
                    covering_radius: r,
                },
                || format!("r(4,4) = {r}\n"),
            )
        }
    }
}

fn transform_cmd(c: TransformCmd, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let budgets = ctx.g.budgets();
    match c {
        TransformCmd::Apply { matrix, point, s } => {
            let point = point.0;
            let (name, w) = load_matrix(&matrix, &budgets)?;
            if point.len() != w.order() {
                return Err(Error::DimensionMismatch {
                    expected: w.order(),
                    got: point.len(),
                }
                .into());
            }
            match s {
                Some(s) => {
                    let v = transform::t_ws(&w, s, &point)?;
                    ctx.emit(&v, || {
                        format!("{} / {}\n", format_int_matrix_row(v.numerator()), v.scale())
                    })
                }
                None => {
                    let t = DiscreteTransform::new(&w, &budgets)?;
                    let y = t.apply(&point);
                    #[derive(Serialize)]
                    struct A<'a> {
                        matrix: String,
                        point: &'a [i64],
                        leader: Vec<i64>,
                        image: &'a [i64],
                    }
                    let a = A {
                        matrix: name,
                        point: &point,
                        leader: t.leader_of(&point),
                        image: &y,
                    };
                    ctx.emit(&a, || format!("{}\n", format_int_matrix_row(&y)))
                }
            }
        }
        TransformCmd::BoxExperiment {
            matrix,
            radius,
            center,
            random_centers,
        } => {
            let (name, w) = load_matrix(&matrix, &budgets)?;
            let t = DiscreteTransform::new(&w, &budgets)?;
            let centers = match random_centers {
                Some(k) => {
                    let mut rng = transform::seeded_rng(ctx.g.seed);
                    (0..k)
                        .map(|_| transform::random_center(w.order(), 20, &mut rng))
                        .collect()
                }
                None => vec![center.map_or_else(|| vec![0; w.order()], |c| c.0)],
            };
            let reports = centers
                .iter()
                .map(|c| {
                    transform::bounding_box_experiment(&t, &name, radius, c, budgets.enum_budget)
                })
                .collect::<Result<Vec<_>>>()?;
            let pass = reports.iter().all(|r| r.pass);
            let text = || {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "center {:?}: {} points, max extent {}, bound {} -> {}\n",
                            r.center,
                            r.points,
                            r.extents.iter().max().copied().unwrap_or(0),
                            r.bound,
                            if r.pass { "pass" } else { "FAIL" }
                        )
                    })
                    .collect::<String>()
            };
            if reports.len() == 1 {
                ctx.emit(&reports[0], text)?;
            } else {
                ctx.emit(&reports, text)?;
            }
            if !pass {
                return Err(Fail::Check(
                    "transformed sphere exceeds the cube bound".into(),
                ));
            }
            Ok(())
        }
        TransformCmd::Verify { suite } => run_verify(&Registry::builtin(), &suite, None, ctx),
    }
}

fn format_int_matrix_row(v: &[i64]) -> String {
    let m = crate::intmat::IntMatrix::from_rows(&[v]).expect("one row");
    format_int_matrix(&m).trim_end().to_string()
}

fn verify_cmd(a: VerifyArgs, ctx: &mut Ctx) -> std::result::Result<(), Fail> {
    let registry = match &a.manifest {
        Some(p) => Registry::from_toml(&read(p)?)?,
        None => Registry::builtin(),
    };
    if a.list {
        for s in registry.suites() {
            let aliases: Vec<&str> = verify::SUITE_ALIASES
                .iter()
                .filter(|(_, id)| *id == s)
                .map(|(alias, _)| *alias)
                .collect();
            writeln!(
                ctx.out,
                "{s}{}",
                if aliases.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", aliases.join(", "))
                }
            )?;
        }
        return Ok(());
    }
    let suite = a.suite.expect("clap requires --suite without --list");
    run_verify(&registry, &suite, a.orders, ctx)
}

fn run_verify(
    registry: &Registry,
    suite: &str,
    orders: Option<Vec<usize>>,
    ctx: &mut Ctx,
) -> std::result::Result<(), Fail> {
    let opts = RunOptions {
        budgets: ctx.g.budgets(),
        seed: ctx.g.seed,
        orders,
        timings: ctx.g.timings,
    };
    let report = verify::run_suite(registry, suite, &opts)?;
    ctx.emit(&report, || report.to_text())?;
    if report.failed() {
        return Err(Fail::Check("one or more claims failed".into()));
    }
    Ok(())
}
