use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand, ValueEnum};

use satkit::bounds::{complete_bounds, shift_fixpoint, shift_row};
use satkit::constructions::{gallery_with, Assets, GalleryId};
use satkit::reproduce::{suite_rows, Context, Suite};
use satkit::saturation::{close, is_m_saturated, is_saturated, ColumnOrder, SaturationReport};
use satkit::search::{run, Checkpoint, ResultRecord, ResultsCache, SearchKind, SearchOptions, SearchProblem};
use satkit::{format_matrix, parse_family, parse_matrix, Family, Matrix};

/// Rows larger than this make saturation checks slow.
const SLOW_ROWS: usize = 24;

#[derive(Parser)]
#[command(name = "satkit", version, about = "Saturation and forbidden-configuration computations")]
struct Cli {
    /// Tab-separated output, one record per line.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a matrix avoids every member of a family.
    Contain { matrix: PathBuf, family: String },
    /// Check saturation of a matrix.
    CheckSat { matrix: PathBuf, family: String },
    /// Check m-saturation of a matrix.
    CheckMsat { matrix: PathBuf, family: String },
    /// Add absent columns greedily until the matrix is saturated.
    Close {
        matrix: PathBuf,
        family: String,
        /// asc, desc or shuffle:SEED
        #[arg(long, default_value = "asc")]
        order: String,
    },
    /// Exact sat, m-sat or forb.
    Search(SearchArgs),
    /// Build a gallery matrix.
    Construct {
        id: String,
        n: usize,
        params: Vec<usize>,
        /// Directory holding the matrix assets.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Also check the stated property.
        #[arg(long)]
        verify: bool,
    },
    /// Shift one row (1-based), or every row until nothing changes.
    Shift {
        matrix: PathBuf,
        #[arg(long)]
        row: Option<usize>,
    },
    /// Closed-form bounds for K_k over [0,l].
    Bound {
        n: u64,
        k: u64,
        #[arg(short, long, default_value_t = 1)]
        l: u64,
    },
    /// Run the table of published values.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Time budget in seconds of each full-suite search.
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Full,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// sat, msat or forb
    kind: SearchKind,
    n: usize,
    family: String,
    #[arg(long)]
    min_size: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    /// Where to write the state when the budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Results cache; defaults to $SATKIT_CACHE when set.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Print the witness matrix after the record.
    #[arg(long)]
    show_witness: bool,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_matrix(path: &Path) -> anyhow::Result<Matrix> {
    parse_matrix(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// A family file, or shorthand text when no such file exists.
fn load_family(arg: &str) -> anyhow::Result<Family> {
    let path = Path::new(arg);
    if path.exists() {
        return parse_family(&read(path)?).with_context(|| format!("in {}", path.display()));
    }
    parse_family(arg).with_context(|| format!("{arg:?} is neither a file nor a family"))
}

fn digits(column: &[u8]) -> String {
    column.iter().map(|d| char::from(b'0' + d)).collect()
}

fn one_based(v: &[usize]) -> String {
    v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn warn_size(m: &Matrix) {
    if m.rows() > SLOW_ROWS {
        eprintln!("warning: {} rows; checking every absent column may take long", m.rows());
    }
}

fn verdict(report: &SaturationReport, machine: bool) -> ExitCode {
    match report {
        SaturationReport::Saturated => {
            println!("SATURATED");
            ExitCode::SUCCESS
        }
        SaturationReport::NotAdmissible(w) => {
            if machine {
                println!("NOT-ADMISSIBLE");
            } else {
                match w {
                    Some((i, w)) => println!(
                        "NOT-ADMISSIBLE\nmember {}\nrows {}\ncols {}",
                        i + 1,
                        one_based(&w.row_map),
                        one_based(&w.col_map)
                    ),
                    None => println!("NOT-ADMISSIBLE"),
                }
            }
            ExitCode::from(1)
        }
        SaturationReport::Extendable(c) => {
            println!("EXTENDABLE {}", digits(c));
            ExitCode::from(1)
        }
    }
}

fn parse_order(s: &str) -> anyhow::Result<ColumnOrder> {
    Ok(match s {
        "asc" => ColumnOrder::Ascending,
        "desc" => ColumnOrder::Descending,
        _ => match s.strip_prefix("shuffle:") {
            Some(seed) => ColumnOrder::Shuffled(seed.parse().context("bad shuffle seed")?),
            None => bail!("unknown column order {s:?}"),
        },
    })
}

fn search(args: SearchArgs) -> anyhow::Result<ExitCode> {
    let family = load_family(&args.family)?;
    let mut problem = SearchProblem::new(args.kind, args.n, family);
    problem.size_low = args.min_size;
    problem.size_high = args.max_size;
    problem.budget.node_limit = args.node_limit;
    if let Some(t) = args.time_limit {
        problem.budget.time_limit = Some(Duration::try_from_secs_f64(t).context("bad time limit")?);
    }
    if let (Some(lo), Some(hi)) = (args.min_size, args.max_size) {
        if lo > hi {
            bail!("--min-size exceeds --max-size");
        }
    }
    let cache = args
        .cache
        .or_else(|| std::env::var_os("SATKIT_CACHE").map(PathBuf::from))
        .map(ResultsCache::new);
    let bounded = args.min_size.is_some() || args.max_size.is_some();
    if let (Some(cache), None, false) = (&cache, &args.resume, bounded) {
        if let Some(rec) = cache.lookup_exact(&problem.fingerprint())? {
            println!("{rec}");
            if args.show_witness {
                if let Some(w) = cache.witness(&rec)? {
                    print!("{}", format_matrix(&w));
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
    }
    let resume = match &args.resume {
        Some(path) => {
            let ck = Checkpoint::load(path)?;
            ck.check_matches(&problem)?;
            Some(ck)
        }
        None => None,
    };
    let options = SearchOptions {
        jobs: args.jobs as usize,
        ..SearchOptions::default()
    };
    let outcome = run(&problem, &options, resume.as_ref())?;
    let record = match &cache {
        Some(cache) => cache.store(&problem, &outcome)?,
        None => ResultRecord::new(&problem, &outcome, None),
    };
    if let (Some(path), Some(ck)) = (&args.checkpoint, &outcome.checkpoint) {
        ck.save(path)?;
    }
    println!("{record}");
    if args.show_witness {
        if let Some(w) = &outcome.witness {
            print!("{}", format_matrix(w));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    let machine = cli.machine;
    match cli.command {
        Command::Contain { matrix, family } => {
            let m = load_matrix(&matrix)?;
            let fam = load_family(&family)?;
            match fam.find_violation(&m)? {
                None => {
                    println!("FREE");
                    Ok(ExitCode::SUCCESS)
                }
                Some((i, w)) => {
                    if machine {
                        println!("CONTAINS\t{}\t{}\t{}", i + 1, one_based(&w.row_map), one_based(&w.col_map));
                    } else {
                        println!(
                            "CONTAINS\nmember {}\nrows {}\ncols {}",
                            i + 1,
                            one_based(&w.row_map),
                            one_based(&w.col_map)
                        );
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CheckSat { matrix, family } => {
            let m = load_matrix(&matrix)?;
            warn_size(&m);
            Ok(verdict(&is_saturated(&m, &load_family(&family)?)?, machine))
        }
        Command::CheckMsat { matrix, family } => {
            let m = load_matrix(&matrix)?;
            warn_size(&m);
            Ok(verdict(&is_m_saturated(&m, &load_family(&family)?)?, machine))
        }
        Command::Close { matrix, family, order } => {
            let m = load_matrix(&matrix)?;
            warn_size(&m);
            let out = close(&m, &load_family(&family)?, &parse_order(&order)?)?;
            print!("{}", format_matrix(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Search(args) => search(args),
        Command::Construct {
            id,
            n,
            params,
            data_dir,
            verify,
        } => {
            let id: GalleryId = id.parse()?;
            let assets = data_dir.map_or_else(Assets::embedded, Assets::from_dir);
            let entry = gallery_with(&assets, id, n, &params)?;
            print!("{}", format_matrix(&entry.matrix));
            if verify {
                if entry.verify()? {
                    eprintln!("{}: verified", entry.label());
                } else {
                    eprintln!("{}: FAILS its stated property", entry.label());
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Shift { matrix, row } => {
            let m = load_matrix(&matrix)?;
            let out = match row {
                Some(0) => bail!("rows are numbered from 1"),
                Some(i) if i > m.rows() => bail!("row {i} exceeds {} rows", m.rows()),
                Some(i) => shift_row(&m, i - 1)?,
                None => shift_fixpoint(&m)?,
            };
            print!("{}", format_matrix(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { n, k, l } => {
            for b in complete_bounds(n, k, l)? {
                if machine {
                    println!("{b}");
                } else {
                    println!("{:<10} {:>12}  {}", b.kind_name(), b.value, b.source);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper {
            suite,
            jobs,
            data_dir,
            budget,
        } => {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let suite = match suite {
                SuiteArg::Quick => Suite::Quick,
                SuiteArg::Full => Suite::Full,
            };
            let mut ctx = Context {
                jobs,
                ..Context::default()
            };
            if let Some(dir) = data_dir {
                ctx.assets = Assets::from_dir(dir);
            }
            if let Some(b) = budget {
                ctx.full_budget = Duration::from_secs(b);
            }
            let mut all = true;
            for row in suite_rows(suite) {
                let (out, took) = row.execute(&ctx);
                all &= out.pass;
                let tag = if out.pass { "PASS" } else { "FAIL" };
                if machine {
                    println!("{tag}\t{}\t{}\t{}\t{:.3}", row.criterion, row.name, out.detail, took.as_secs_f64());
                } else {
                    println!("{tag} [{}] {}: {} ({:.1}s)", row.criterion, row.name, out.detail, took.as_secs_f64());
                }
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
