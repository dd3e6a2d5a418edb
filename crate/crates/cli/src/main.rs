//! `lingame`: analyze linear nonlocal games from the command line.
//!
//! Exit codes: 0 success, 1 failed verification or suite, 2 invalid input,
//! 3 enumeration budget or size cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lingame::bounds::{enumeration_count, quantum_bound, ENUMERATION_BUDGET};
use lingame::format::{round_sig, sig};
use lingame::games::json::{game_from_json, game_to_json};
use lingame::games::seeded_uniform_games;
use lingame::nlc::{nlc_report, nlc_spec_from_json, NlcReport};
use lingame::{analyze, chsh_d, AnalysisOptions, Error, GameReport};
use serde_json::json;

/// Largest deviation tolerated between the CHSH-d bound and its closed form.
const CHSH_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "lingame", version, about = "Classical values and quantum bounds of linear nonlocal games")]
struct Cli {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = lingame::numerics::DEFAULT_RANK_TOL, value_parser = positive)]
    rank_tol: f64,
    /// Tolerance for comparisons involving floating-point values.
    #[arg(long, global = true, default_value_t = lingame::nlc::DEFAULT_EQ_TOL, value_parser = positive)]
    eq_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a game file.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// CHSH-d over GF(p^r) against its closed form.
    Chsh {
        p: u64,
        r: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Profile, strategy and bound of an NLC spec file.
    Nlc {
        path: PathBuf,
        /// Also run exhaustive and eigenstructure checks.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// CSV of reports for seeded random uniform games over Z_d.
    Scan {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        d: u64,
        /// Questions per party.
        #[arg(long)]
        m: usize,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("{s} is not a positive number")),
    }
}

/// A failed command and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification { .. } => 1,
            Error::Budget { .. } | Error::NlcTooLarge(..) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

const CSV_COLUMNS: &str = "mA,mB,classical_value,classical_value_exact,quantum_bound,quantum_bound_raw,lemma1_bound,ns_value,rank_phi1,pseudo_telepathy_possible";

fn csv_row(r: &GameReport) -> String {
    [
        r.m_a.to_string(),
        r.m_b.to_string(),
        sig(r.classical_value),
        r.classical_value_exact.clone().unwrap_or_default(),
        sig(r.quantum_bound),
        sig(r.quantum_bound_raw),
        sig(r.lemma1_bound),
        sig(r.ns_value),
        r.rank_phi1.to_string(),
        r.pseudo_telepathy_possible.to_string(),
    ]
    .join(",")
}

fn game_text(r: &GameReport) -> String {
    let mut s = String::new();
    writeln!(s, "group: {}", r.group).unwrap();
    writeln!(s, "questions: {} x {}", r.m_a, r.m_b).unwrap();
    match &r.classical_value_exact {
        Some(q) => writeln!(s, "classical value: {} ({q})", sig(r.classical_value)).unwrap(),
        None => writeln!(s, "classical value: {}", sig(r.classical_value)).unwrap(),
    }
    writeln!(s, "classical strategy: alice {:?} bob {:?}", r.classical_strategy.alice, r.classical_strategy.bob).unwrap();
    writeln!(s, "quantum bound: {} (raw {})", sig(r.quantum_bound), sig(r.quantum_bound_raw)).unwrap();
    for c in &r.norms {
        writeln!(s, "  ||Phi_{}|| = {}", c.character, sig(c.norm)).unwrap();
    }
    writeln!(s, "shared-randomness lower bound: {}", sig(r.lemma1_bound)).unwrap();
    writeln!(s, "no-signaling value: {}", sig(r.ns_value)).unwrap();
    writeln!(s, "rank(Phi_1): {}", r.rank_phi1).unwrap();
    write!(s, "pseudo-telepathy possible: {}", r.pseudo_telepathy_possible).unwrap();
    s
}

fn cmd_analyze(path: &Path, format: Format, rank_tol: f64) -> Result<String, Failure> {
    let game = game_from_json(&read(path)?)?;
    let report = analyze(&game, AnalysisOptions { rank_tol })?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
        Format::Csv => format!("{CSV_COLUMNS}\n{}", csv_row(&report)),
        Format::Text => game_text(&report),
    })
}

fn cmd_chsh(p: u64, r: u32, format: Format) -> Result<String, Failure> {
    let game = chsh_d(p, r)?;
    let d = game.group().order() as f64;
    let bound = quantum_bound(&game);
    let closed = 1.0 / d + (d - 1.0) / (d * d.sqrt());
    let difference = (bound.raw - closed).abs();
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "schema": "lingame.chsh-report/1",
            "p": p,
            "r": r,
            "d": game.group().order(),
            "norms": bound.norms,
            "quantum_bound": round_sig(bound.raw),
            "closed_form": round_sig(closed),
            "difference": round_sig(difference),
        }))
        .expect("reports serialize"),
        Format::Csv => format!(
            "p,r,d,quantum_bound,closed_form,difference\n{p},{r},{},{},{},{}",
            game.group().order(),
            sig(bound.raw),
            sig(closed),
            sig(difference)
        ),
        Format::Text => {
            let mut s = format!("CHSH-{} over {}\n", game.group().order(), game.group());
            for c in &bound.norms {
                writeln!(s, "  ||Phi_{}|| = {}", c.character, sig(c.norm)).unwrap();
            }
            write!(
                s,
                "quantum bound: {}\nclosed form: {}\ndifference: {}",
                sig(bound.raw),
                sig(closed),
                sig(difference)
            )
            .unwrap();
            s
        }
    };
    if difference >= CHSH_TOL {
        return Err(Failure {
            code: 1,
            message: format!("{out}\nbound differs from the closed form by {difference:e}"),
        });
    }
    Ok(out)
}

fn nlc_text(r: &NlcReport) -> String {
    let mut s = String::new();
    writeln!(s, "NLC_{} with n = {} ({} inputs)", r.d, r.n, if r.uniform { "uniform" } else { "weighted" }).unwrap();
    writeln!(s, "lambda: {:?}  Lambda = {}", r.lambda, r.lambda_max).unwrap();
    writeln!(s, "weighted lambda: [{}]  max = {}", r.lambda_weighted.join(", "), r.weighted_max).unwrap();
    writeln!(s, "mu: {}", r.mu).unwrap();
    writeln!(s, "strategy value: {}{}", r.strategy_value, exact_suffix(&r.strategy_value_exact)).unwrap();
    write!(s, "quantum bound: {}{}", r.quantum_bound, exact_suffix(&r.quantum_bound_exact)).unwrap();
    if let Some(v) = &r.verified {
        write!(s, "\nbrute force: {}", v.brute_force.as_deref().unwrap_or("skipped (over budget)")).unwrap();
        write!(s, "\nspectral bound of the game: {}", v.spectral_bound).unwrap();
        for b in &v.block_circulant {
            write!(s, "\nk = {}: off-diagonal {}, ||Phi_k|| = {}, weighted Lambda(k) = {}", b.k, b.off_diagonal, b.norm, b.measured_max).unwrap();
        }
        write!(s, "\nverified").unwrap();
    }
    s
}

fn exact_suffix(e: &Option<String>) -> String {
    e.as_ref().map(|q| format!(" ({q})")).unwrap_or_default()
}

fn cmd_nlc(path: &Path, verify: bool, format: Format, eq_tol: f64) -> Result<String, Failure> {
    let spec = nlc_spec_from_json(&read(path)?)?;
    let report = nlc_report(&spec, verify, eq_tol)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
        Format::Csv => format!(
            "d,n,Lambda,mu,strategy_value,quantum_bound\n{},{},{},{},{},{}",
            report.d, report.n, report.lambda_max, report.mu, report.strategy_value, report.quantum_bound
        ),
        Format::Text => nlc_text(&report),
    })
}

fn cmd_scan(seed: u64, count: usize, d: u64, m: usize, rank_tol: f64) -> Result<String, Failure> {
    let games = seeded_uniform_games(seed, count, d, m, m)?;
    let mut out = format!("index,{CSV_COLUMNS}");
    if let Some(first) = games.first() {
        let need = enumeration_count(first);
        if need > ENUMERATION_BUDGET {
            return Err(Error::Budget {
                count: need,
                limit: ENUMERATION_BUDGET,
            }
            .into());
        }
    }
    for (i, game) in games.iter().enumerate() {
        let r = analyze(game, AnalysisOptions { rank_tol })?;
        let chain = r.lemma1_bound <= r.classical_value + 1e-12 && r.classical_value <= r.quantum_bound.min(1.0) + 1e-9;
        if !chain {
            return Err(Failure {
                code: 1,
                message: format!(
                    "ordering chain violated by game {i}: lemma1 {}, classical {}, bound {}\n{}",
                    r.lemma1_bound,
                    r.classical_value,
                    r.quantum_bound,
                    game_to_json(game)
                ),
            });
        }
        write!(out, "\n{i},{}", csv_row(&r)).unwrap();
    }
    Ok(out)
}

fn cmd_selftest() -> Result<String, Failure> {
    let outcomes = lingame::selftest::run_all();
    let lines: Vec<String> = outcomes.iter().map(ToString::to_string).collect();
    let text = lines.join("\n");
    if outcomes.iter().all(|o| o.passed) {
        Ok(text)
    } else {
        Err(Failure {
            code: 1,
            message: format!("{text}\nacceptance suite failed"),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { path, format } => cmd_analyze(&path, format, cli.rank_tol),
        Command::Chsh { p, r, format } => cmd_chsh(p, r, format),
        Command::Nlc { path, verify, format } => cmd_nlc(&path, verify, format, cli.eq_tol),
        Command::Scan { seed, count, d, m } => cmd_scan(seed, count, d, m, cli.rank_tol),
        Command::Selftest => cmd_selftest(),
    };
    match result {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = writeln!(stdout, "{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
