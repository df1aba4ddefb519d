use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use qcong::congruence::{
    select_catalog, verify_entries, CatalogEntry, ClaimReport, CongruenceClaim, KFamily,
};
use qcong::dissection::{
    builtin_identities, verify_entries as verify_dissections, RegistryEntry, Verdict,
};
use qcong::grammar::parse_series_spec;
use qcong::partitions::{a_bruteforce, a_table_recurrence, a_table_series};
use qcong::scan::{scan, ScanConfig, ScanLimits};
use qcong::{CoefficientRing, Error};

const MAX_HUMAN_ROWS: usize = 20;
const DEFAULT_TERMS: usize = 2000;

#[derive(Parser)]
#[command(
    name = "qcong",
    version,
    about = "Verify and search for congruences of colored partition functions"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Number of coefficients to compute (indices 0..N-1) [default: 2000].
    #[arg(long = "terms", short = 'N', global = true)]
    terms: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of an eta or Pochhammer quotient.
    Expand {
        spec: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Check one claim or a catalog selection.
    Verify(VerifyArgs),
    /// Search a (k, M, A, B) grid for vanishing progressions.
    Scan(ScanArgs),
    /// Check named series identities and support claims.
    Dissect {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
    /// Compare the three ways of computing a_k(n).
    Oracle {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// `all`, a group such as `thm7`, or an exact entry name.
    #[arg(long, conflicts_with_all = ["k", "kc", "prog", "modulus"])]
    catalog: Option<String>,
    /// Number of colors, or k0 when --kc is given.
    #[arg(long)]
    k: Option<u64>,
    /// Family stride c, giving k = c*j + k0 for j <= jmax.
    #[arg(long, default_value_t = 0)]
    kc: u64,
    /// Progression `A,B` for A n + B.
    #[arg(long, value_parser = parse_prog)]
    prog: Option<(u64, u64)>,
    #[arg(long = "mod")]
    modulus: Option<u64>,
    #[arg(long, default_value_t = 3)]
    jmax: u64,
}

#[derive(Args)]
struct ScanArgs {
    /// JSON file holding a scan config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u64>>,
    #[arg(long = "mod", value_delimiter = ',')]
    moduli: Option<Vec<u64>>,
    #[arg(long = "steps", value_delimiter = ',')]
    steps: Option<Vec<u64>>,
    #[arg(long = "offsets", value_delimiter = ',')]
    offsets: Option<Vec<u64>>,
    #[arg(long)]
    survivors_only: bool,
    /// Lift the grid-size and precision ceilings.
    #[arg(long)]
    no_ceiling: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_prog(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let a = a.trim().parse().map_err(|e| format!("bad A: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad B: {e}"))?;
    Ok((a, b))
}

enum Failure {
    Counterexample,
    Usage(String),
    Ceiling(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCeiling { .. } => Failure::Ceiling(e.to_string()),
            _ => {
                let mut msg = e.to_string();
                if let Some(p) = e.pointer() {
                    msg = format!("{msg}\n{p}");
                }
                Failure::Usage(msg)
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QCONG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let outcome = if cli.terms == Some(0) {
        Err(Failure::Usage("--terms must be >= 1".into()))
    } else {
        run(&cli)
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Counterexample) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Ceiling(msg)) => {
            eprintln!("error: {msg} (pass --no-ceiling to run anyway)");
            ExitCode::from(3)
        }
    }
}

impl Cli {
    fn n(&self) -> usize {
        self.terms.unwrap_or(DEFAULT_TERMS)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Expand { spec, modulus } => expand(cli, spec, *modulus),
        Command::Verify(args) => verify(cli, args),
        Command::Scan(args) => run_scan(cli, args),
        Command::Dissect { name, all } => dissect(cli, name.as_deref(), *all),
        Command::Oracle { k, n } => oracle(cli, *k, *n),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn expand(cli: &Cli, spec: &str, modulus: Option<u64>) -> Outcome {
    let spec = parse_series_spec(spec)?;
    let ring = match modulus {
        Some(m) => CoefficientRing::modular(m)?,
        None => CoefficientRing::Exact,
    };
    let coeffs = spec.expand(ring, cli.n())?.coeffs();
    let mut out = io::stdout().lock();
    let res = match cli.format {
        Format::Human => coeffs
            .iter()
            .enumerate()
            .try_for_each(|(n, c)| writeln!(out, "{n}:{c}")),
        Format::Csv => writeln!(out, "n,value").and_then(|_| {
            coeffs
                .iter()
                .enumerate()
                .try_for_each(|(n, c)| writeln!(out, "{n},{c}"))
        }),
        // Integers of any size are valid JSON numbers.
        Format::Json => {
            let items: Vec<String> = coeffs.iter().map(BigInt::to_string).collect();
            writeln!(out, "[{}]", items.join(","))
        }
    };
    res.map_err(|e| Failure::Usage(e.to_string()))
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let entries: Vec<CatalogEntry> = match (&args.catalog, args.k, args.prog, args.modulus) {
        (Some(sel), ..) => select_catalog(sel)?,
        (None, Some(k), Some((a, b)), Some(m)) => {
            let claim = CongruenceClaim::new(KFamily { c: args.kc, k0: k }, a, b, m);
            claim.validate()?;
            vec![CatalogEntry {
                name: claim.to_string(),
                group: "cli".into(),
                claim,
            }]
        }
        _ => {
            return Err(Failure::Usage(
                "give --catalog SELECTOR, or all of --k, --prog A,B and --mod".into(),
            ))
        }
    };
    let reports = verify_entries(&entries, cli.n(), args.jmax)?;
    match cli.format {
        Format::Json => emit_json(&reports)?,
        Format::Csv => {
            println!("name,k_c,k_0,A,B,M,status,checked_n_up_to,checked_j_up_to,witness_j,witness_k,witness_n,residue");
            for r in &reports {
                let c = &r.claim;
                let w = r
                    .result
                    .witness
                    .map(|w| format!("{},{},{},{}", w.j, w.k, w.n, w.residue))
                    .unwrap_or_else(|| ",,,".into());
                println!(
                    "\"{}\",{},{},{},{},{},{},{},{},{w}",
                    r.name.as_deref().unwrap_or_default(),
                    c.k.c,
                    c.k.k0,
                    c.step,
                    c.offset,
                    c.modulus,
                    status_word(r),
                    r.result.checked_n_up_to,
                    r.result.checked_j_up_to,
                );
            }
        }
        Format::Human => print_verify_human(&reports),
    }
    if reports.iter().all(|r| r.result.is_verified()) {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}

fn status_word(r: &ClaimReport) -> &'static str {
    if r.result.is_verified() {
        "verified"
    } else {
        "counterexample"
    }
}

fn print_verify_human(reports: &[ClaimReport]) {
    let failed: Vec<&ClaimReport> = reports.iter().filter(|r| !r.result.is_verified()).collect();
    for r in reports.iter().filter(|r| r.result.is_verified()) {
        println!(
            "ok    {}  (n <= {}, j <= {})",
            r.name.as_deref().unwrap_or_default(),
            r.result.checked_n_up_to,
            r.result.checked_j_up_to
        );
    }
    for r in failed.iter().take(MAX_HUMAN_ROWS) {
        let w = r.result.witness.expect("counterexample has a witness");
        println!(
            "FAIL  {}  witness j={} k={} n={} residue={}",
            r.name.as_deref().unwrap_or_default(),
            w.j,
            w.k,
            w.n,
            w.residue
        );
    }
    if failed.len() > MAX_HUMAN_ROWS {
        println!(
            "... {} more counterexamples (use --format json)",
            failed.len() - MAX_HUMAN_ROWS
        );
    }
    println!(
        "{} verified, {} with counterexamples",
        reports.len() - failed.len(),
        failed.len()
    );
}

fn run_scan(cli: &Cli, args: &ScanArgs) -> Outcome {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ScanConfig>(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => ScanConfig {
            k_values: vec![],
            moduli: vec![],
            steps: vec![],
            offsets: None,
            precision: cli.n(),
            survivors_only: false,
        },
    };
    if let Some(k) = &args.k {
        config.k_values = k.clone();
    }
    if let Some(m) = &args.moduli {
        config.moduli = m.clone();
    }
    if let Some(a) = &args.steps {
        config.steps = a.clone();
    }
    if let Some(b) = &args.offsets {
        config.offsets = Some(b.clone());
    }
    if args.survivors_only {
        config.survivors_only = true;
    }
    if let Some(n) = cli.terms {
        config.precision = n;
    }
    let limits = if args.no_ceiling {
        ScanLimits::unlimited()
    } else {
        ScanLimits::default()
    };
    let report = scan(&config, &limits)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(path) = &args.out {
        fs::write(path, &json).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json if args.out.is_none() => println!("{json}"),
        Format::Csv => {
            println!("k,M,A,B,survived,catalog,unlisted");
            for e in &report.results {
                let c = &e.report.claim;
                println!(
                    "{},{},{},{},{},\"{}\",{}",
                    c.k.k0,
                    c.modulus,
                    c.step,
                    c.offset,
                    e.survived(),
                    e.catalog.as_deref().unwrap_or_default(),
                    e.unlisted
                );
            }
        }
        _ => {
            for e in report.survivors() {
                let c = &e.report.claim;
                let tag = match (&e.catalog, e.unlisted) {
                    (Some(name), _) => format!("listed: {name}"),
                    (None, true) => "unlisted".to_string(),
                    (None, false) => String::new(),
                };
                println!(
                    "a_{}({}n+{}) = 0 mod {}  (n <= {})  {tag}",
                    c.k.k0, c.step, c.offset, c.modulus, e.report.result.checked_n_up_to
                );
            }
            println!(
                "{} survivors out of {} progressions at N = {}",
                report.survivor_count, report.grid_size, config.precision
            );
        }
    }
    Ok(())
}

fn dissect(cli: &Cli, name: Option<&str>, all: bool) -> Outcome {
    let registry = builtin_identities();
    let selected: Vec<RegistryEntry> = match (name, all) {
        (_, true) => registry.clone(),
        (Some(n), false) => match registry.iter().find(|e| e.name == n) {
            Some(e) => vec![e.clone()],
            None => {
                let names: Vec<&str> = registry.iter().map(|e| e.name.as_str()).collect();
                return Err(Failure::Usage(format!(
                    "unknown identity {n:?}; known: {}",
                    names.join(", ")
                )));
            }
        },
        (None, false) => return Err(Failure::Usage("give an identity name or --all".into())),
    };
    let verdicts = verify_dissections(&selected, cli.n())?;
    match cli.format {
        Format::Json => emit_json(&verdicts)?,
        Format::Csv => {
            println!("name,mode,verified_to,holds,expected_to_hold,mismatch_index,classes");
            for v in &verdicts {
                println!(
                    "{},\"{}\",{},{},{},{},\"{}\"",
                    v.name,
                    v.mode,
                    v.verified_to,
                    v.holds,
                    v.expected_to_hold,
                    v.mismatch
                        .as_ref()
                        .map(|m| m.index.to_string())
                        .unwrap_or_default(),
                    v.classes
                        .as_ref()
                        .map(|c| format_classes(c))
                        .unwrap_or_default()
                );
            }
        }
        Format::Human => {
            for v in &verdicts {
                println!("{}", human_verdict(v));
            }
        }
    }
    // With --all, documented negative controls are reported but do not gate.
    let pass = verdicts.iter().all(|v| {
        if all {
            !v.expected_to_hold || v.holds
        } else {
            v.holds
        }
    });
    if pass {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}

fn format_classes(c: &[u64]) -> String {
    let items: Vec<String> = c.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn human_verdict(v: &Verdict) -> String {
    let tag = if v.holds { "ok  " } else { "FAIL" };
    let mut line = format!("{tag}  {:<18} {}  to N = {}", v.name, v.mode, v.verified_to);
    if let Some(m) = &v.mismatch {
        line += &format!("  mismatch at {}: {} vs {}", m.index, m.lhs, m.rhs);
    }
    if let Some(c) = &v.classes {
        line += &format!("  residues {}", format_classes(c));
    }
    if let Some(i) = v.first_violation {
        line += &format!("  first violation at q^{i}");
    }
    if !v.expected_to_hold {
        line += "  (negative control)";
    }
    line
}

#[derive(Serialize)]
struct OracleRow {
    k: u64,
    n: u64,
    bruteforce: String,
    series: String,
    recurrence: String,
    matched: bool,
}

fn oracle(cli: &Cli, k: u64, n: u64) -> Outcome {
    let brute = a_bruteforce(k, n)?;
    let len = n as usize + 1;
    let series = a_table_series(k, CoefficientRing::Exact, len)?.value(n as usize);
    let recurrence = a_table_recurrence(k, len)?.value(n as usize);
    let row = OracleRow {
        k,
        n,
        matched: brute == series && series == recurrence,
        bruteforce: brute.to_string(),
        series: series.to_string(),
        recurrence: recurrence.to_string(),
    };
    match cli.format {
        Format::Json => emit_json(&row)?,
        Format::Csv => {
            println!("k,n,bruteforce,series,recurrence,match");
            println!(
                "{},{},{},{},{},{}",
                row.k, row.n, row.bruteforce, row.series, row.recurrence, row.matched
            );
        }
        Format::Human => println!(
            "a_{}({}): {} / {} / {}  {}",
            k,
            n,
            row.bruteforce,
            row.series,
            row.recurrence,
            if row.matched { "match" } else { "MISMATCH" }
        ),
    }
    if row.matched {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}
