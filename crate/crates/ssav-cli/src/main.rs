//! `ssav`: tables and verification reports for supersingular and superspecial
//! abelian varieties over finite fields.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use ssav::arith::{primes_in, rational_string, rational_to_f64, square_decompose};
use ssav::census::{
    census, delta_bottom_up, delta_verified, h_sqrt_p, mass, mass_ratio, sp1_count, sp2_count,
    CensusReport,
};
use ssav::cm_quartic::class_number_cm;
use ssav::dimension::{dim_of, enumerate_multiple, enumerate_simple, CaseTag};
use ssav::oracle::{brute_curve_census, MAX_CENSUS_Q};
use ssav::quadratics::{class_number, zeta_minus_one};
use ssav::weil::PrimePower;
use ssav::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_INTEGRALITY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ssav",
    version,
    about = "Counts of supersingular and superspecial abelian varieties over F_q"
)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the supersingular Weil number classes of a given dimension.
    WeilList {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long)]
        dim: u64,
        /// Largest n searched; required for dim > 4.
        #[arg(long)]
        nmax: Option<u64>,
        /// List formal products (multiple Weil numbers) instead of simple classes.
        #[arg(long)]
        multiple: bool,
        #[arg(long)]
        json: bool,
    },
    /// Count superspecial curves (dim 1) or surfaces (dim 2) over F_q.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
        dim: u64,
        /// Recompute the total along an independent path and report agreement.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Emit a CSV table over all primes in an inclusive range.
    ///
    /// Columns by --what:
    ///   sp1      p,sp1
    ///   sp2      p,h_sqrt_p,delta,sp2
    ///   mass     p,sp2,mass,ratio[,ratio_approx]   (mass cells empty for p <= 5)
    ///   zeta     p,zeta_minus_one                  (zeta of Q(sqrt p) at -1)
    ///   classno  p,h_minus_p,h_plus_p,h_k_p_3,h_k_2p_1,h_k_3p_3
    #[command(verbatim_doc_comment)]
    Table {
        /// Inclusive prime range, e.g. 7..97.
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        #[arg(long, value_enum)]
        what: What,
        /// Add a floating-point column next to exact ratios.
        #[arg(long)]
        approx: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Sp1,
    Sp2,
    Mass,
    Zeta,
    Classno,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: u64 = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct Record<P: Serialize, R: Serialize> {
    command: &'static str,
    params: P,
    result: R,
}

#[derive(Serialize)]
struct WeilParams {
    p: u64,
    a: u32,
    dim: u64,
    nmax: Option<u64>,
    multiple: bool,
}

#[derive(Serialize)]
struct WeilRow {
    class: String,
    sign: Option<char>,
    n: Option<u64>,
    dim: u64,
    case: Option<CaseTag>,
}

#[derive(Serialize)]
struct CensusParams {
    p: u64,
    a: u32,
    dim: u64,
    verify: bool,
}

#[derive(Serialize)]
struct Verification {
    path: &'static str,
    value: Option<u64>,
    agree: Option<bool>,
    note: Option<String>,
}

#[derive(Serialize)]
struct CensusResult {
    report: CensusReport,
    verification: Option<Verification>,
}

fn weil_list(
    p: u64,
    a: u32,
    dim: u64,
    nmax: Option<u64>,
    multiple: bool,
) -> ssav::Result<Vec<WeilRow>> {
    let ctx = PrimePower::new(p, a)?;
    if multiple {
        return Ok(enumerate_multiple(ctx, dim)?
            .into_iter()
            .map(|m| WeilRow {
                class: m.to_string(),
                sign: None,
                n: None,
                dim,
                case: None,
            })
            .collect());
    }
    Ok(enumerate_simple(ctx, dim, nmax)?
        .into_iter()
        .map(|w| {
            let d = dim_of(&w);
            WeilRow {
                class: w.to_string(),
                sign: Some(w.sign().symbol()),
                n: Some(w.n()),
                dim: d.dim,
                case: Some(d.case_tag),
            }
        })
        .collect())
}

fn verify(ctx: PrimePower, dim: u64, total: u64) -> ssav::Result<Verification> {
    if dim == 1 {
        return Ok(match ctx.q().filter(|&q| q <= MAX_CENSUS_Q) {
            Some(q) => {
                let n = brute_curve_census(q)?;
                Verification {
                    path: "curve_census",
                    value: Some(n),
                    agree: Some(n == total),
                    note: None,
                }
            }
            None => Verification {
                path: "curve_census",
                value: None,
                agree: None,
                note: Some(format!("q exceeds the census bound {MAX_CENSUS_Q}")),
            },
        });
    }
    let p = ctx.p();
    let h = h_sqrt_p(p)?;
    let bottom_up = if p > 5 {
        delta_verified(p)
    } else {
        delta_bottom_up(p)
    };
    match bottom_up {
        Ok(d) => Ok(Verification {
            path: "orders",
            value: Some(h + d),
            agree: Some(h + d == total),
            note: None,
        }),
        Err(Error::Mismatch(msg)) => Ok(Verification {
            path: "orders",
            value: None,
            agree: Some(false),
            note: Some(msg),
        }),
        Err(e) => Err(e),
    }
}

fn class_number_of(m: i64, j: i64) -> ssav::Result<u64> {
    let (_, s) = square_decompose(m);
    if s == 1 {
        class_number(-j)
    } else {
        class_number_cm(s, j)
    }
}

fn table_row(p: u64, what: What, approx: bool) -> ssav::Result<String> {
    let ctx = PrimePower::new(p, 1)?;
    let pi = p as i64;
    Ok(match what {
        What::Sp1 => format!("{p},{}", sp1_count(ctx)?),
        What::Sp2 => {
            let h = h_sqrt_p(p)?;
            let s = sp2_count(ctx)?;
            format!("{p},{h},{},{s}", s - h)
        }
        What::Mass => {
            let s = sp2_count(ctx)?;
            if p <= 5 {
                if approx {
                    format!("{p},{s},,,")
                } else {
                    format!("{p},{s},,")
                }
            } else {
                let r = mass_ratio(p)?;
                let mut row = format!(
                    "{p},{s},{},{}",
                    rational_string(&mass(p)?),
                    rational_string(&r)
                );
                if approx {
                    row.push_str(&format!(",{:.6}", rational_to_f64(&r)));
                }
                row
            }
        }
        What::Zeta => format!("{p},{}", rational_string(&zeta_minus_one(pi)?)),
        What::Classno => format!(
            "{p},{},{},{},{},{}",
            class_number(-pi)?,
            class_number(pi)?,
            class_number_of(pi, 3)?,
            class_number_of(2 * pi, 1)?,
            class_number_of(3 * pi, 3)?,
        ),
    })
}

fn header(what: What, approx: bool) -> &'static str {
    match (what, approx) {
        (What::Sp1, _) => "p,sp1",
        (What::Sp2, _) => "p,h_sqrt_p,delta,sp2",
        (What::Mass, false) => "p,sp2,mass,ratio",
        (What::Mass, true) => "p,sp2,mass,ratio,ratio_approx",
        (What::Zeta, _) => "p,zeta_minus_one",
        (What::Classno, _) => "p,h_minus_p,h_plus_p,h_k_p_3,h_k_2p_1,h_k_3p_3",
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("records serialize") + "\n"
}

enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::WeilList {
            p,
            a,
            dim,
            nmax,
            multiple,
            json,
        } => {
            let rows = weil_list(p, a, dim, nmax, multiple)?;
            if json {
                return Ok(to_json(&Record {
                    command: "weil-list",
                    params: WeilParams {
                        p,
                        a,
                        dim,
                        nmax,
                        multiple,
                    },
                    result: rows,
                }));
            }
            let width = rows.iter().map(|r| r.class.len()).max().unwrap_or(5).max(5);
            let mut out = format!("{:<width$}  dim\n", "class");
            for r in &rows {
                out.push_str(&format!("{:<width$}  {}\n", r.class, r.dim));
            }
            Ok(out)
        }
        Command::Census {
            p,
            a,
            dim,
            verify: check,
            json,
        } => {
            let ctx = PrimePower::new(p, a)?;
            let report = census(ctx, dim)?;
            let verification = if check {
                Some(verify(ctx, dim, report.total)?)
            } else {
                None
            };
            let agree = verification.as_ref().and_then(|v| v.agree);
            let mismatch_note = verification.as_ref().and_then(|v| v.note.clone());
            let out = if json {
                to_json(&Record {
                    command: "census",
                    params: CensusParams {
                        p,
                        a,
                        dim,
                        verify: check,
                    },
                    result: CensusResult {
                        report,
                        verification,
                    },
                })
            } else {
                census_text(&report, verification.as_ref())
            };
            if agree == Some(false) {
                print_out(&out);
                return Err(Failure::Mismatch(
                    mismatch_note.unwrap_or_else(|| "independent path disagrees".into()),
                ));
            }
            Ok(out)
        }
        Command::Table {
            range: (lo, hi),
            what,
            approx,
        } => {
            let rows: Vec<ssav::Result<String>> = primes_in(lo, hi)
                .par_iter()
                .map(|&p| table_row(p, what, approx))
                .collect();
            let mut out = String::from(header(what, approx));
            out.push('\n');
            for r in rows {
                out.push_str(&r?);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn census_text(report: &CensusReport, verification: Option<&Verification>) -> String {
    let width = report
        .per_class
        .iter()
        .map(|c| c.weil.to_string().len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!(
        "q = {}^{}, dim {}\n{:<width$}  {:>6}  source\n",
        report.ctx.p(),
        report.ctx.a(),
        report.dim,
        "class",
        "count"
    );
    for c in &report.per_class {
        let src = serde_json::to_value(c.provenance).expect("provenance serializes");
        out.push_str(&format!(
            "{:<width$}  {:>6}  {}\n",
            c.weil.to_string(),
            c.count,
            src.as_str().unwrap_or("")
        ));
    }
    out.push_str(&format!("total {}\n", report.total));
    if let (Some(m), Some(r)) = (&report.mass, &report.mass_ratio) {
        out.push_str(&format!(
            "mass {}\nratio {}\n",
            rational_string(m),
            rational_string(r)
        ));
    }
    if let Some(v) = verification {
        match (v.value, v.agree) {
            (Some(x), Some(true)) => out.push_str(&format!("verify {}: {x}, agree\n", v.path)),
            (Some(x), _) => out.push_str(&format!("verify {}: {x}, MISMATCH\n", v.path)),
            (None, _) => out.push_str(&format!(
                "verify {}: {}\n",
                v.path,
                v.note.as_deref().unwrap_or("skipped")
            )),
        }
    }
    out
}

static OUT_PATH: std::sync::OnceLock<Option<String>> = std::sync::OnceLock::new();

fn print_out(s: &str) {
    match OUT_PATH.get().cloned().flatten() {
        Some(path) => {
            if let Err(e) = fs::write(&path, s) {
                eprintln!("error: cannot write {path}: {e}");
            }
        }
        None => {
            let _ = io::stdout().write_all(s.as_bytes());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    OUT_PATH.set(cli.out.clone()).ok();
    if let Some(n) = std::env::var("ABVAR_CENSUS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .ok();
    }
    match run(cli.command) {
        Ok(out) => {
            print_out(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: verification mismatch: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Integrality(_) => ExitCode::from(EXIT_INTEGRALITY),
                Error::Mismatch(_) => ExitCode::from(EXIT_MISMATCH),
                Error::InvalidInput(_) | Error::Unsupported(_) => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
