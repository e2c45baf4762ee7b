//! `ellsurf`: command-line reports on elliptic surfaces over the line.
//!
//! Exit status: 0 success, 1 usage or input error, 2 domain error,
//! 3 search budget exceeded.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ellsurf::hurwitz::{self, HurwitzError, RamificationProfile};
use ellsurf::jacobi::{self, JacobiError};
use ellsurf::kodaira::{self, Configuration, FiberType, KodairaError};
use ellsurf::modulicalc::{self, LociError};
use ellsurf::permgroup::{self, CycleType, SearchBudget, SearchError};
use ellsurf::table::Table;
use ellsurf::weierstrass::{self, ModelFamily, WeierstrassError, WeierstrassModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ellsurf", version, about = "Moduli and fiber computations for elliptic surfaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Node budget for monodromy searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized subcommands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Generic,
    PZero,
    QZero,
}

impl From<Family> for ModelFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Generic => ModelFamily::Generic,
            Family::PZero => ModelFamily::PZero,
            Family::QZero => ModelFamily::QZero,
        }
    }
}

/// Where a Weierstrass model comes from.
#[derive(clap::Args)]
struct ModelSource {
    /// Model JSON file (`{"n": .., "P": [..], "Q": [..]}`).
    model: Option<String>,
    /// Draw a random minimal model from a family instead (uses --seed).
    #[arg(long, value_enum, conflicts_with = "model", requires = "n")]
    random: Option<Family>,
    /// Degree parameter for --random.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check Noether's condition and report n.
    Noether {
        /// Configuration such as "I9 + 3*I1", or @FILE.
        config: String,
    },
    /// Trivial-lattice rank contribution of the singular fibers.
    Rhotr { config: String },
    /// Dimension of the configuration locus, with realizability.
    LocusDim { config: String },
    /// Ramification the j-map must have.
    Jmap { config: String },
    /// Witness configuration with trivial rank r.
    NlWitness {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Cyclic base change totally ramified at two fibers.
    BaseChange {
        config: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Fiber types under the two branch points.
        #[arg(long = "at", num_args = 1, required = true)]
        at: Vec<String>,
    },
    /// Dimensions of the constant-j and high-rank loci.
    SpecialLoci {
        #[arg(long)]
        n: u64,
    },
    /// Predicted dimension and existence for a genus-0 ramification profile.
    HurwitzDim {
        #[arg(long)]
        d: usize,
        /// Cycle types such as "[3,1]", one per marked point.
        #[arg(required = true)]
        partitions: Vec<String>,
    },
    /// Search for a transitive tuple with given cycle types and product 1.
    Monodromy {
        #[arg(long)]
        d: usize,
        #[arg(required = true)]
        partitions: Vec<String>,
        /// Count simultaneous-conjugacy classes instead of returning one tuple.
        #[arg(long)]
        count: bool,
    },
    /// Kodaira fiber types of a Weierstrass model.
    Classify {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Dimensions of the graded Jacobian ring.
    JacobiDims {
        #[command(flatten)]
        source: ModelSource,
        /// Weighted degrees to report.
        #[arg(long = "d", num_args = 1.., required = true)]
        degrees: Vec<usize>,
    },
    /// Rank of the 7x7 matrix of tilde-generators against the partials.
    JtildeRank {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Codimensions of V·B_k for k = 0..=k-max.
    CodimSeries {
        #[command(flatten)]
        source: ModelSource,
        /// Subspace JSON; defaults to J plus --extra random vectors.
        #[arg(long)]
        subspace: Option<String>,
        #[arg(long, default_value_t = 1)]
        extra: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Realizable configurations with four multiplicative fibers at n = 1.
    BeauvilleCensus,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Domain(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Domain(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<KodairaError> for Failure {
    fn from(e: KodairaError) -> Self {
        match e {
            KodairaError::Parse(p) => Failure::Input(p.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        match e {
            HurwitzError::Search(s) => s.into(),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<LociError> for Failure {
    fn from(e: LociError) -> Self {
        match e {
            LociError::Kodaira(k) => k.into(),
            LociError::Hurwitz(h) => h.into(),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<WeierstrassError> for Failure {
    fn from(e: WeierstrassError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<JacobiError> for Failure {
    fn from(e: JacobiError) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// A report in both output formats.
struct Report {
    json: Value,
    table: String,
}

impl Report {
    fn new(json: impl Serialize, table: impl ToString) -> Self {
        Self {
            json: serde_json::to_value(json).expect("reports serialize"),
            table: table.to_string(),
        }
    }
}

fn read_input(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
        }
        None => Ok(arg.to_string()),
    }
}

fn config_arg(arg: &str) -> Result<Configuration, Failure> {
    let text = read_input(arg)?;
    kodaira::parse_config(text.trim()).map_err(|e| Failure::Input(format!("{text:?}: {e}")))
}

fn cycle_types(d: usize, items: &[String]) -> Result<Vec<CycleType>, Failure> {
    items
        .iter()
        .map(|s| {
            let t: CycleType = s.parse().map_err(|e| Failure::Input(format!("{e}")))?;
            if t.degree() != d {
                return Err(Failure::Input(format!("{s} is not a partition of {d}")));
            }
            Ok(t)
        })
        .collect()
}

fn load_model(src: &ModelSource, rng: &mut ChaCha8Rng) -> Result<WeierstrassModel, Failure> {
    match (&src.model, src.random) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
        }
        (None, Some(family)) => {
            let n = src.n.expect("clap enforces --n");
            if n == 0 {
                return Err(Failure::Input("--n must be positive".into()));
            }
            Ok(weierstrass::random_model(n, family.into(), rng))
        }
        (None, None) => Err(Failure::Input(
            "give a model file or --random FAMILY --n N".into(),
        )),
    }
}

fn two_columns(rows: &[(&str, String)]) -> Table {
    let mut t = Table::new(["field", "value"]);
    for (k, v) in rows {
        t.row([k.to_string(), v.clone()]);
    }
    t
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let budget = match cli.budget {
        Some(nodes) => SearchBudget {
            max_nodes: nodes,
            ..SearchBudget::default()
        },
        None => SearchBudget::default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Noether { config } => {
            let c = config_arg(config)?;
            let n = kodaira::noether_check(&c)?;
            let table = two_columns(&[
                ("config", c.to_string()),
                ("euler", c.euler_sum().to_string()),
                ("n", n.to_string()),
            ]);
            Ok(Report::new(
                json!({ "config": c, "euler": c.euler_sum(), "n": n }),
                table,
            ))
        }
        Command::Rhotr { config } => {
            let c = config_arg(config)?;
            let rho = kodaira::rho_tr(&c);
            let table = two_columns(&[("config", c.to_string()), ("rho_tr", rho.to_string())]);
            Ok(Report::new(json!({ "config": c, "rho_tr": rho }), table))
        }
        Command::LocusDim { config } => {
            let report = modulicalc::locus_dim(&config_arg(config)?, &budget)?;
            let table = report.to_table();
            Ok(Report::new(report, table))
        }
        Command::Jmap { config } => {
            let req = modulicalc::jmap_requirement(&config_arg(config)?)?;
            let mut t = Table::new(["point", "indices"]);
            for p in req.profile.points() {
                t.row([p.label.clone(), p.parts.to_string()]);
            }
            let table = format!("j-map degree {}\n{t}", req.d);
            Ok(Report::new(req, table))
        }
        Command::NlWitness { n, r } => {
            let report = modulicalc::nl_lower_bound_witness(*n, *r, &budget)?;
            let table = report.to_table();
            Ok(Report::new(report, table))
        }
        Command::BaseChange { config, degree, at } => {
            let c = config_arg(config)?;
            let [a, b] = at.as_slice() else {
                return Err(Failure::Input("--at must be given exactly twice".into()));
            };
            let parse = |s: &str| {
                s.parse::<FiberType>()
                    .map_err(|e| Failure::Input(format!("{s:?}: {e}")))
            };
            let out = modulicalc::cyclic_base_change_config(&c, *degree, [parse(a)?, parse(b)?])?;
            let n = kodaira::noether_check(&out)?;
            let rho = kodaira::rho_tr(&out);
            let table = two_columns(&[
                ("config", out.to_string()),
                ("n", n.to_string()),
                ("fibers", out.singular_fibers().to_string()),
                ("rho_tr", rho.to_string()),
            ]);
            Ok(Report::new(
                json!({
                    "config": out,
                    "n": n,
                    "fibers": out.singular_fibers(),
                    "rho_tr": rho,
                }),
                table,
            ))
        }
        Command::SpecialLoci { n } => {
            let report = modulicalc::special_loci_report(*n)?;
            let table = report.to_table();
            Ok(Report::new(report, table))
        }
        Command::HurwitzDim { d, partitions } => {
            let profile = RamificationProfile::unlabeled(*d, cycle_types(*d, partitions)?)?;
            let report = hurwitz::hurwitz_report(&profile, &budget)?;
            let mut rows = vec![
                ("profile", report.profile.to_string()),
                ("q", report.q.to_string()),
                ("m", report.m.to_string()),
                ("dim", report.predicted_dimension.to_string()),
                ("exists", report.existence.to_string()),
            ];
            if let Some(w) = &report.witness {
                rows.push(("witness", w.join(" ")));
            }
            let table = two_columns(&rows);
            Ok(Report::new(report, table))
        }
        Command::Monodromy {
            d,
            partitions,
            count,
        } => {
            let types = cycle_types(*d, partitions)?;
            if *count {
                let classes = permgroup::count_classes(*d, &types, &budget)?;
                let table = two_columns(&[("classes", classes.to_string())]);
                return Ok(Report::new(json!({ "d": d, "classes": classes }), table));
            }
            let witness = permgroup::monodromy_search(*d, &types, &budget)?;
            let cycles = witness.as_ref().map(|w| w.to_cycle_strings());
            let mut t = Table::new(["type", "permutation"]);
            match &cycles {
                Some(cs) => {
                    for (ty, c) in types.iter().zip(cs) {
                        t.row([ty.to_string(), c.clone()]);
                    }
                }
                None => {
                    t.row(["none", ""]);
                }
            }
            Ok(Report::new(
                json!({ "d": d, "exists": cycles.is_some(), "witness": cycles }),
                t,
            ))
        }
        Command::Classify { source } => {
            let m = load_model(source, &mut rng)?;
            let c = weierstrass::classify_fibers(&m)?;
            let mut t = Table::new(["place", "deg", "vP", "vQ", "vDelta", "fiber"]);
            for p in &c.places {
                let v = &p.valuation;
                t.row([
                    v.place.to_string(),
                    v.degree.to_string(),
                    v.v_p.to_string(),
                    v.v_q.to_string(),
                    v.v_delta.to_string(),
                    p.fiber.to_string(),
                ]);
            }
            let table = format!("n = {}\nconfiguration: {}\n{t}", c.n, c.config);
            Ok(Report::new(c, table))
        }
        Command::JacobiDims { source, degrees } => {
            let m = load_model(source, &mut rng)?;
            let pieces: Vec<_> = degrees.iter().map(|&d| jacobi::jacobi_dims(&m, d)).collect();
            let mut t = Table::new(["d", "dim A", "dim J", "dim R"]);
            for p in &pieces {
                t.row([p.d, p.dim_a, p.dim_j, p.dim_r]);
            }
            // 10n - rho_tr, shown next to R_{7n-2} without claiming equality
            let n = m.n();
            let primitive = if degrees.contains(&(7 * n - 2)) {
                let rho = kodaira::rho_tr(&weierstrass::classify_fibers(&m)?.config);
                Some(10 * n as i64 - rho as i64)
            } else {
                None
            };
            let mut table = t.to_string();
            if let Some(h) = primitive {
                table.push_str(&format!("10n - rho_tr = {h}\n"));
            }
            Ok(Report::new(
                json!({ "pieces": pieces, "h11_prim": primitive }),
                table,
            ))
        }
        Command::JtildeRank { source } => {
            let m = load_model(source, &mut rng)?;
            let r = jacobi::jtilde_rank(&m, &mut rng);
            let wronskian_zero = weierstrass::wronskian(&m).is_zero();
            let table = two_columns(&[
                ("rank", r.rank.to_string()),
                ("wronskian", if wronskian_zero { "0" } else { "nonzero" }.into()),
            ]);
            Ok(Report::new(
                json!({ "jtilde": r, "wronskian_zero": wronskian_zero }),
                table,
            ))
        }
        Command::CodimSeries {
            source,
            subspace,
            extra,
            k_max,
        } => {
            let m = load_model(source, &mut rng)?;
            let v = match subspace {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
                    jacobi::parse_subspace(&text)
                        .map_err(|e| Failure::Input(format!("{path}: {e}")))?
                }
                None => jacobi::random_subspace_over_jacobian(&m, *extra, &mut rng),
            };
            let series = jacobi::codim_series(&m, &v, *k_max)?;
            let mut t = Table::new(["k", "codim"]);
            for (k, c) in series.iter().enumerate() {
                t.row([k, *c]);
            }
            Ok(Report::new(json!({ "codim": series }), t))
        }
        Command::BeauvilleCensus => {
            let census = modulicalc::beauville_census(&budget)?;
            if census.unverified > 0 {
                return Err(Failure::Budget(format!(
                    "{} partitions undecided within the search budget",
                    census.unverified
                )));
            }
            let table = census.to_table();
            Ok(Report::new(census, table))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("valid json")
                ),
                Format::Table => print!("{}", ensure_newline(report.table)),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}
