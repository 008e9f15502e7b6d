//! `grainlab`: grain-error combinatorics, code construction and
//! verification, rate bounds and grains-channel capacity bounds.
//!
//! Exit status: 0 on success, 1 when a verification returns a negative
//! verdict, 2 on bad input or a violated precondition, 3 when a size cap or
//! time limit stops the computation.

mod manifest;
mod params;
mod svg;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use grainlab::bounds::{
    self, ceil_bound, cor1_upper, dominant_term_tau_max, fig1_curves, listdec_lower, listdec_rate, scenario1_lower,
    scenario2_lower, scenario_rates, thm1_upper,
};
use grainlab::channel::{self, ChannelSpec, InitialKind, DEFAULT_J, NONADJACENT_NOTE};
use grainlab::codes::{self, Code};
use grainlab::graph::{self, ChiEntry};
use grainlab::model::{self, apply_grains, enumerate_error_vectors};
use grainlab::table::{fmt12, Cell, Table};
use grainlab::{Caps, Error, Word};
use num_bigint::BigUint;

use manifest::{with_manifest, RunManifest};
use params::{parse_grid, parse_initial, parse_range, Settings};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(PathBuf, std::io::Error),
    Timeout(String),
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(path.to_path_buf(), e)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::CapExceeded { .. }) | CliError::Timeout(_) => 3,
            CliError::Lib(_) | CliError::Usage(_) | CliError::Io(..) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Timeout(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "grainlab", version, about = "Grain-error codes and grains-channel capacity bounds")]
struct Cli {
    /// `key=value` file with cap overrides and defaults (`J`, `seed`, `timeout`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap overrides, e.g. `mis_n=12,graph_n=14`; applied after GRAINLAB_CAPS and the config file.
    #[arg(long, global = true)]
    caps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every word reachable from x with at most t grains.
    Phi {
        #[arg(long)]
        x: Word,
        #[arg(long)]
        t: usize,
    },
    /// Whether two words are t-confusable.
    Confusable {
        #[arg(long)]
        x1: Word,
        #[arg(long)]
        x2: Word,
        #[arg(long)]
        t: usize,
    },
    /// Largest t-grain-correcting code size M(n, t) by exact search.
    Mnt {
        /// Length or range `a:b`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        t: usize,
        /// Seconds per search; on expiry the best size found is reported as a lower bound.
        #[arg(long)]
        timeout: Option<f64>,
        /// Print the optimal code of the last length.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Greedy clique-partition sizes of G(m, s) next to the published bounds.
    CliqueTable {
        #[arg(long)]
        m: String,
        #[arg(long)]
        s: String,
        #[command(flatten)]
        out: Output,
    },
    /// Checks a code file for grain correction, list decoding or known-grain decoding.
    VerifyCode {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, conflicts_with = "known_grain")]
        list: Option<usize>,
        #[arg(long)]
        known_grain: bool,
    },
    /// Builds a code and prints it in the code-file format.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Length (rn, greedy-s1).
        #[arg(long)]
        n: Option<usize>,
        /// Hamming parameter; the code length is 2^m (hamming-prefix).
        #[arg(long)]
        m: Option<usize>,
        /// Grains corrected (greedy-s1).
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer bounds for (n, t), or rate bounds over a tau grid.
    Bounds {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value = "0.01:0.5:0.01")]
        tau_grid: String,
        /// Clique-partition table (`m,s,parts` CSV); defaults to the published values.
        #[arg(long)]
        table: Option<PathBuf>,
        /// List size for the list-decoding bound.
        #[arg(long, default_value_t = 1)]
        list: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Asymptotic rate curves: GV lower bound, Prop. 2 and clique-partition upper bounds, R_n.
    Fig1 {
        #[arg(long, default_value = "0.005:0.5:0.005")]
        tau_grid: String,
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// SIR lower bound and BINAEras upper bound at one p.
    Sir {
        #[arg(long)]
        p: f64,
        #[arg(long = "J")]
        j: Option<usize>,
    },
    /// Capacity bounds over a grid of p.
    Capacity {
        #[arg(long, default_value = "0:1:0.01")]
        grid: String,
        #[arg(long = "J")]
        j: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Capacity-bound curves: sir, capacity_lower, capacity_upper, error_bound.
    Fig3 {
        #[arg(long, default_value = "0:1:0.01")]
        grid: String,
        #[arg(long = "J")]
        j: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Simulates the grains or BINAEras channel on uniform input.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Independent blocks, one RNG stream each.
        #[arg(long, default_value_t = 1)]
        blocks: u64,
        /// `stationary` or `u0,x0`.
        #[arg(long, default_value = "stationary")]
        initial: String,
        #[arg(long, value_enum, default_value_t = ChannelKind::Grains)]
        channel: ChannelKind,
        /// Print empirical statistics instead of the sequences.
        #[arg(long)]
        stats: bool,
    },
    /// Zero-error rates for both initial-state kinds.
    ZeroError {
        #[arg(long, default_value = "2:12")]
        n: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the CSV as an SVG line plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Rn,
    HammingPrefix,
    GreedyS1,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ChannelKind {
    Grains,
    Binaeras,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let settings = Settings::load(cli.config.as_deref(), cli.caps.as_deref())?;
    let caps = &settings.caps;
    match cli.command {
        Command::Phi { x, t } => {
            println!("{}", phi_in_order(&x, t, caps)?.join(" "));
        }
        Command::Confusable { x1, x2, t } => {
            println!("{}", model::confusable(&x1, &x2, t, caps)?);
        }
        Command::Mnt { n, t, timeout, witness, out } => return mnt(&settings, &n, t, timeout, witness, &out),
        Command::CliqueTable { m, s, out } => {
            let (m_range, s_range) = (parse_range(&m)?, parse_range(&s)?);
            let entries = graph::chi_table(m_range, s_range, caps)?;
            let mut table = Table::new(&["m", "s", "parts", "reference"]);
            for e in &entries {
                let reference = graph::reference_chi(e.m, e.s).map_or(Cell::Empty, |v| Cell::Int(v as i64));
                table.push(vec![e.m.into(), e.s.into(), e.parts.into(), reference]);
            }
            let manifest = RunManifest::new("clique-table").param("m", m).param("s", s);
            emit(&table, manifest, &out, "clique partitions")?;
        }
        Command::VerifyCode { file, t, list, known_grain } => {
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::io(&file, e))?;
            let code = Code::parse(&text)?;
            let (what, ok) = if known_grain {
                ("known-grain", codes::verify_known_grain(&code, t, caps)?)
            } else if let Some(l) = list {
                ("list-decodable", codes::verify_list_decodable(&code, t, l, caps)?)
            } else {
                ("grain-correcting", codes::verify_grain_correcting(&code, t, caps)?)
            };
            let list_note = list.map(|l| format!(" L={l}")).unwrap_or_default();
            println!("n={} size={} t={t}{list_note} {what}: {ok}", code.n(), code.len());
            return Ok(if ok { 0 } else { 1 });
        }
        Command::Construct { kind, n, m, t, out } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this kind")))
            };
            let code = match kind {
                Kind::Rn => codes::construct_rn(need(n, "n")?)?,
                Kind::HammingPrefix => codes::construct_hamming_prefix(need(m, "m")?)?,
                Kind::GreedyS1 => codes::construct_greedy_scenario1(need(n, "n")?, need(t, "t")?, None, caps)?,
            };
            write_out(out.as_deref(), &code.render())?;
        }
        Command::Bounds { n, t, tau_grid, table, list, out } => {
            let entries = chi_entries(table.as_deref())?;
            match (n, t) {
                (Some(n), Some(t)) => integer_bounds(n, t, list, &entries)?,
                (None, None) => {
                    let taus = parse_grid(&tau_grid)?;
                    let table = rate_table(&taus, &entries, list)?;
                    let mut manifest = RunManifest::new("bounds").param("tau_grid", &tau_grid).param("list", list);
                    manifest.note(format!(
                        "scenario and list-decoding rates are defined for tau <= {}",
                        fmt12(dominant_term_tau_max())
                    ));
                    emit(&table, manifest, &out, "rate bounds")?;
                }
                _ => return Err(CliError::Usage("--n and --t must be given together".into())),
            }
        }
        Command::Fig1 { tau_grid, table, out } => {
            let entries = chi_entries(table.as_deref())?;
            let taus = parse_grid(&tau_grid)?;
            let t = fig1_curves(&taus, &entries)?;
            let manifest = RunManifest::new("fig1").param("tau_grid", &tau_grid);
            emit(&t, manifest, &out, "rate bounds")?;
        }
        Command::Sir { p, j } => {
            let j = settings.resolve(j, "J", DEFAULT_J)?;
            let r = channel::sir(p, j)?;
            let lines = [
                ("p", fmt12(r.p)),
                ("J", r.j.to_string()),
                ("T_J", fmt12(r.t_j)),
                ("S_J", fmt12(r.s_j)),
                ("sir", fmt12(r.sir)),
                ("error_bound", fmt12(r.error_bound)),
                ("rigorous_error_bound", fmt12(r.rigorous_error_bound)),
                ("capacity_lower", fmt12(r.capacity_lower)),
                ("capacity_upper", fmt12(r.capacity_upper)),
            ];
            for (k, v) in lines {
                println!("{k} {v}");
            }
        }
        Command::Capacity { grid, j, out } => {
            let j = settings.resolve(j, "J", DEFAULT_J)?;
            let ps = parse_grid(&grid)?;
            let mut table = Table::new(&[
                "p",
                "capacity_lower",
                "capacity_upper",
                "sir",
                "error_bound",
                "nonadjacent_rate",
                "indecomposable",
            ]);
            for &p in &ps {
                let r = channel::sir(p, j)?;
                let ind = channel::indecomposability_check(p)?;
                table.push(vec![
                    p.into(),
                    r.capacity_lower.into(),
                    r.capacity_upper.into(),
                    r.sir.into(),
                    r.error_bound.into(),
                    channel::nonadjacent_error_capacity(p)?.into(),
                    Cell::Text(ind.indecomposable.to_string()),
                ]);
            }
            let mut manifest = RunManifest::new("capacity").param("grid", &grid).param("J", j);
            manifest.note(format!("nonadjacent_rate: {NONADJACENT_NOTE}"));
            emit(&table, manifest, &out, "grains-channel capacity bounds")?;
        }
        Command::Fig3 { grid, j, out } => {
            let j = settings.resolve(j, "J", DEFAULT_J)?;
            let ps = parse_grid(&grid)?;
            let fig = channel::fig3_curves(&ps, j)?;
            let mut manifest = RunManifest::new("fig3").param("grid", &grid).param("J", j);
            manifest.note(match fig.crossing {
                Some(p) => format!("sir < 1/2 from p={}", fmt12(p)),
                None => "sir >= 1/2 on the whole grid".into(),
            });
            emit(&fig.table, manifest, &out, "grains-channel capacity bounds")?;
        }
        Command::Simulate { n, p, seed, blocks, initial, channel: kind, stats } => {
            let seed = settings.resolve(seed, "seed", 0)?;
            let j = settings.resolve(None, "J", DEFAULT_J)?;
            let spec = ChannelSpec::new(p, parse_initial(&initial)?, j)?;
            if n == 0 || blocks == 0 {
                return Err(CliError::Usage("--n and --blocks must be positive".into()));
            }
            if stats {
                print_stats(&channel::simulate_batch(n, &spec, seed, blocks), p);
            } else {
                for b in 0..blocks {
                    let r = channel::simulate_run(n, &spec, seed, b);
                    let bits = |v: &[u8]| v.iter().map(|b| char::from(b'0' + b)).collect::<String>();
                    println!("x {}", bits(&r.x));
                    match kind {
                        ChannelKind::Grains => println!("y {}", bits(&r.y)),
                        ChannelKind::Binaeras => {
                            println!("y {}", channel::render_ternary(&channel::binaeras_output(&r.x, &r.u)))
                        }
                    }
                }
            }
        }
        Command::ZeroError { n, out } => {
            let range = parse_range(&n)?;
            let mut table = Table::new(&["n", "grain_at_start", "no_grain_at_start"]);
            for k in range {
                let a = channel::zero_error_rate(k, InitialKind::GrainAtStart)?;
                let b = channel::zero_error_rate(k, InitialKind::NoGrainAtStart)?;
                table.push(vec![k.into(), Cell::Text(a.to_string()), Cell::Text(b.to_string())]);
            }
            emit(&table, RunManifest::new("zero-error").param("n", n), &out, "zero-error rates")?;
        }
    }
    Ok(0)
}

/// Images of `x` in the order their first grain pattern is enumerated, so
/// `x` itself comes first.
fn phi_in_order(x: &Word, t: usize, caps: &Caps) -> CliResult<Vec<String>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in enumerate_error_vectors(x.len(), t, caps)? {
        let y = apply_grains(x, &e)?;
        if seen.insert(y) {
            out.push(y.to_string());
        }
    }
    Ok(out)
}

fn mnt(settings: &Settings, n: &str, t: usize, timeout: Option<f64>, witness: bool, out: &Output) -> CliResult<u8> {
    let range = parse_range(n)?;
    let timeout = settings.resolve(timeout, "timeout", 0.0)?;
    let limit = (timeout > 0.0).then(|| Duration::from_secs_f64(timeout));
    let mut table = Table::new(&["n", "t", "m", "exact", "nodes"]);
    let mut last = None;
    let mut all_exact = true;
    for k in range {
        let r = graph::exact_m(k, t, &settings.caps, limit)?;
        all_exact &= r.exact;
        table.push(vec![
            k.into(),
            t.into(),
            r.size.into(),
            Cell::Text(r.exact.to_string()),
            Cell::Int(r.nodes as i64),
        ]);
        last = Some(r);
    }
    let manifest = RunManifest::new("mnt").param("n", n).param("t", t).param("timeout", timeout);
    emit(&table, manifest, out, "M(n, t)")?;
    if witness {
        if let Some(r) = last {
            let code = Code::new(r.n, r.witness, codes::Provenance::File)?;
            print!("{}", code.render());
        }
    }
    if !all_exact {
        return Err(CliError::Timeout(
            "time limit reached; rows with exact=false are lower bounds".into(),
        ));
    }
    Ok(0)
}

fn chi_entries(path: Option<&Path>) -> CliResult<Vec<ChiEntry>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok(graph::parse_chi_table(&text)?)
        }
        None => Ok(bounds::reference_chi_entries()),
    }
}

fn integer_bounds(n: usize, t: usize, list: usize, entries: &[ChiEntry]) -> CliResult<()> {
    let cor1 = entries
        .iter()
        .filter(|e| t * e.m <= n * e.s)
        .filter_map(|e| cor1_upper(n, t, e.m, e.s, &BigUint::from(e.parts)).ok())
        .min();
    let rn = BigUint::from(1u8) << n.div_ceil(2);
    println!("n {n}");
    println!("t {t}");
    println!("error_vectors {}", model::count_error_vectors(n, t));
    println!("rn_size {rn}");
    println!("thm1_upper {} (leading term only)", thm1_upper(n, t)?);
    match cor1 {
        Some(v) => println!("cor1_upper {v}"),
        None => println!("cor1_upper none (no admissible table entry)"),
    }
    println!("scenario1_lower {}", ceil_bound(&scenario1_lower(n, t)));
    println!("scenario2_lower {}", ceil_bound(&scenario2_lower(n, t)));
    println!("listdec_lower L={list} {}", listdec_lower(n, t, list)?);
    Ok(())
}

fn rate_table(taus: &[f64], entries: &[ChiEntry], list: usize) -> CliResult<Table> {
    let fig = fig1_curves(taus, entries)?;
    let mut header: Vec<&str> = fig.header.iter().map(String::as_str).collect();
    header.extend(["scenario_lower", "scenario_upper", "listdec_rate"]);
    let mut table = Table::new(&header);
    for (row, &tau) in fig.rows.iter().zip(taus) {
        let mut row = row.clone();
        match scenario_rates(tau) {
            Ok(r) => row.extend([Cell::from(r.lower), Cell::from(r.upper)]),
            Err(_) => row.extend([Cell::Empty, Cell::Empty]),
        }
        row.push(listdec_rate(tau, list).map_or(Cell::Empty, Cell::from));
        table.push(row);
    }
    Ok(table)
}

fn print_stats(s: &channel::SimulationStats, p: f64) {
    let q = p / (1.0 + p);
    let mut out = String::new();
    writeln!(out, "symbols {}", s.symbols).unwrap();
    writeln!(out, "grain_frequency {} (expected {})", fmt12(s.grain_frequency()), fmt12(p)).unwrap();
    writeln!(out, "grain_after_grain {}", s.transitions[1][1]).unwrap();
    writeln!(out, "erasure_rate {} (expected {})", fmt12(s.erasure_rate()), fmt12(q)).unwrap();
    writeln!(out, "error_rate {} (expected {})", fmt12(s.error_rate()), fmt12(q / 2.0)).unwrap();
    writeln!(out, "adjacent_erasures {}", s.adjacent_erasures).unwrap();
    print!("{out}");
}

fn write_out(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(table: &Table, manifest: RunManifest, out: &Output, title: &str) -> CliResult<()> {
    write_out(out.out.as_deref(), &with_manifest(&table.to_csv(), &manifest))?;
    if let Some(path) = &out.svg {
        std::fs::write(path, svg::render(table, title)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}
