//! `resgraph` - exact computations on resolution dual graphs of surface
//! singularities from the command line.
//!
//! Exit status: 0 on success or verification pass, 1 on a verification
//! failure (table mismatch, bound violation, oracle disagreement), 2 on an
//! input error.

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resgraph::catalog;
use resgraph::discrepancy::{
    exceptional_log_pullback, lct_maximal_ideal, log_discrepancies, mld_over_point,
    verify_surface_bound, LcValue, SurfaceGerm,
};
use resgraph::files;
use resgraph::fundcycle::{
    brute_force_fundamental_cycle, laufer_fundamental_cycle, TieBreakPolicy,
};
use resgraph::monomial::{example_sharpness_check, monomial_lct, monomial_mld, MonomialBoundary};
use resgraph::rational::{format_rational, parse_rational};
use resgraph::sweep;

#[derive(Parser)]
#[command(name = "resgraph", version, about = "Fundamental cycles, discrepancies, mlds and lc thresholds on resolution dual graphs, in exact rational arithmetic")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Master seed for all randomized sweeps.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the dual graph of a quotient singularity as a graph file.
    Catalog {
        #[command(subcommand)]
        family: CatalogFamily,
    },
    /// Fundamental cycle of a graph file.
    Fundcycle {
        graph_file: String,
        /// Cross-check against the brute-force box enumeration.
        #[arg(long)]
        oracle: bool,
        /// Coefficient bound for the oracle box.
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = PolicyArg::Lowest)]
        policy: PolicyArg,
    },
    /// Max fundamental-cycle coefficients over the whole catalog.
    Sweep6e(SweepRange),
    /// Recompute the reference fundamental-cycle tables.
    VerifyTables,
    /// Exceptional pullback coefficients and log discrepancies of a germ.
    Discrepancy { germ_file: String },
    /// Minimal log discrepancy of a germ over its point.
    Mld { germ_file: String },
    /// Lc threshold of the maximal ideal of a germ.
    LctMaxIdeal { germ_file: String },
    /// The mld^2/24 threshold bound: one germ, or a catalog sweep.
    CheckSurfaceBound {
        germ_file: Option<String>,
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 200)]
        max_n: u64,
        #[arg(long, default_value_t = 10)]
        max_b: u64,
        /// Random klt boundaries per germ (plus the empty one).
        #[arg(long, default_value_t = 50)]
        boundaries: usize,
    },
    /// Mld of a monomial boundary on the smooth plane germ.
    MonomialMld {
        /// Coefficient lambda, e.g. 3/4.
        #[arg(long)]
        lambda: String,
        /// Monomial exponents, e.g. "2,0;0,3".
        #[arg(long)]
        exponents: String,
    },
    /// Lc threshold of a plane monomial ideal.
    MonomialLct {
        #[arg(long)]
        exponents: String,
    },
    /// Weighted-blowup sharpness family: mld 1/m, threshold bound 1/m^2.
    Example18 {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        max_m: Option<u64>,
    },
    /// All randomized property sweeps at configurable sizes.
    PropertySuite {
        #[arg(long, default_value_t = 60)]
        max_n: u64,
        #[arg(long, default_value_t = 10)]
        max_b: u64,
        #[arg(long, default_value_t = 100)]
        trees: usize,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 10)]
        policies: usize,
        #[arg(long, default_value_t = 10)]
        boundaries: usize,
    },
}

#[derive(Subcommand)]
enum CatalogFamily {
    Cyclic {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    Dihedral {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    Tetrahedral {
        #[arg(long)]
        m: u64,
    },
    Octahedral {
        #[arg(long)]
        m: u64,
    },
    Icosahedral {
        #[arg(long)]
        m: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Lowest,
    Highest,
    Random,
}

#[derive(Args)]
struct SweepRange {
    #[arg(long, default_value_t = 200)]
    max_n: u64,
    #[arg(long, default_value_t = 10)]
    max_b: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Ignore failure: the global pool can be initialized only once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, human: String) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Human => println!("{human}"),
    }
    Ok(())
}

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn parse_exponents(text: &str) -> Result<Vec<(u32, u32)>> {
    text.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (a, b) = part
                .split_once(',')
                .with_context(|| format!("exponent pair `{part}` is not `a,b`"))?;
            Ok((
                a.trim().parse().with_context(|| format!("bad exponent `{a}`"))?,
                b.trim().parse().with_context(|| format!("bad exponent `{b}`"))?,
            ))
        })
        .collect()
}

fn lc_value_text(v: &LcValue) -> String {
    match v {
        LcValue::Value(r) => format_rational(r),
        LcValue::NotLc => "not-lc".to_owned(),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Catalog { family } => {
            let entry = match *family {
                CatalogFamily::Cyclic { n, q } => catalog::cyclic(n, q),
                CatalogFamily::Dihedral { n, q } => catalog::dihedral(n, q),
                CatalogFamily::Tetrahedral { m } => catalog::tetrahedral(m),
                CatalogFamily::Octahedral { m } => catalog::octahedral(m),
                CatalogFamily::Icosahedral { m } => catalog::icosahedral(m),
            }?;
            println!("{}", files::graph_to_json(&entry.graph));
            Ok(true)
        }

        Command::Fundcycle { graph_file, oracle, bound, policy } => {
            let graph = files::parse_graph(&read_file(graph_file)?)?;
            let diagnostics = graph.validate();
            if !diagnostics.is_empty() {
                bail!("{graph_file}: invalid graph: {diagnostics:?}");
            }
            let policy = match policy {
                PolicyArg::Lowest => TieBreakPolicy::LowestIndex,
                PolicyArg::Highest => TieBreakPolicy::HighestIndex,
                PolicyArg::Random => TieBreakPolicy::Seeded(cli.seed),
            };
            let cycle = laufer_fundamental_cycle(&graph, policy)?;
            let mut passed = true;
            if *oracle {
                let reference = brute_force_fundamental_cycle(&graph, *bound)?;
                if reference != cycle {
                    eprintln!(
                        "oracle mismatch: laufer {:?}, brute force {:?}",
                        cycle.coefficients(),
                        reference.coefficients()
                    );
                    passed = false;
                }
            }
            emit(
                cli.format,
                &cycle,
                format!(
                    "fundamental cycle: {:?} (max {}, total {})",
                    cycle.coefficients(),
                    cycle.max_coefficient(),
                    cycle.total()
                ),
            )?;
            Ok(passed)
        }

        Command::Sweep6e(range) => {
            let report = sweep::sweep_6e(range.max_n, range.max_b);
            let human = format!(
                "graphs checked: {}\nglobal max coefficient: {} (attained at {})\nper family: {}\n{}",
                report.graphs_checked,
                report.global_max,
                report.attained_at.join(", "),
                report
                    .per_family_max
                    .iter()
                    .map(|(f, m)| format!("{f} {m}"))
                    .collect::<Vec<_>>()
                    .join(", "),
                verdict(report.passes)
            );
            emit(cli.format, &report, human)?;
            Ok(report.passes)
        }

        Command::VerifyTables => {
            let report = sweep::verify_tables();
            let mut lines: Vec<String> = report
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "{} {} -> {:?}",
                        if r.matched { "ok  " } else { "FAIL" },
                        r.label,
                        r.computed
                    )
                })
                .collect();
            lines.push(format!(
                "{}/{} exceptional rows, {} pattern rows: {}",
                report.rows.iter().filter(|r| r.matched).count(),
                report.rows.len(),
                report.pattern_rows,
                verdict(report.all_matched)
            ));
            emit(cli.format, &report, lines.join("\n"))?;
            Ok(report.all_matched)
        }

        Command::Discrepancy { germ_file } => {
            let germ = files::parse_germ(&read_file(germ_file)?)?;
            #[derive(Serialize)]
            struct Out {
                exceptional_pullback: Vec<String>,
                log_discrepancies: Vec<String>,
            }
            let e = match germ.resolution() {
                Some(graph) => exceptional_log_pullback(graph, germ.boundary())?,
                None => {
                    // Smooth germ: single blowup divisor.
                    let sum: resgraph::Rational = germ
                        .boundary()
                        .curves()
                        .iter()
                        .map(|c| c.coefficient().clone())
                        .sum();
                    vec![sum - resgraph::rational::rat(1)]
                }
            };
            let a = log_discrepancies(&e);
            let out = Out {
                exceptional_pullback: e.iter().map(format_rational).collect(),
                log_discrepancies: a.iter().map(format_rational).collect(),
            };
            let human = format!(
                "e = [{}]\na = [{}]",
                out.exceptional_pullback.join(", "),
                out.log_discrepancies.join(", ")
            );
            emit(cli.format, &out, human)?;
            Ok(true)
        }

        Command::Mld { germ_file } => {
            let germ = files::parse_germ(&read_file(germ_file)?)?;
            let mld = mld_over_point(&germ)?;
            #[derive(Serialize)]
            struct Out {
                mld: LcValue,
            }
            let text = lc_value_text(&mld);
            emit(cli.format, &Out { mld }, format!("mld: {text}"))?;
            Ok(true)
        }

        Command::LctMaxIdeal { germ_file } => {
            let germ = files::parse_germ(&read_file(germ_file)?)?;
            if cli.format == Format::Human && germ.resolution().is_some() {
                eprintln!(
                    "note: the threshold formula assumes a rational singularity \
                     (automatic for quotient dual graphs)"
                );
            }
            let lct = lct_maximal_ideal(&germ)?;
            #[derive(Serialize)]
            struct Out {
                lct_maximal_ideal: String,
            }
            let text = format_rational(&lct);
            emit(
                cli.format,
                &Out { lct_maximal_ideal: text.clone() },
                format!("lct of maximal ideal: {text}"),
            )?;
            Ok(true)
        }

        Command::CheckSurfaceBound { germ_file, sweep: do_sweep, max_n, max_b, boundaries } => {
            if *do_sweep {
                let report = sweep::surface_bound_sweep(*max_n, *max_b, *boundaries, cli.seed);
                let human = format!(
                    "germs: {} ({} random boundaries each)\nmin lct/mld^2: {} at {}\nviolations: {}\n{}",
                    report.germs,
                    report.boundaries_per_germ,
                    report.min_ratio_lct_over_mld_sq.as_deref().unwrap_or("-"),
                    report.min_ratio_at.as_deref().unwrap_or("-"),
                    report.violations.len(),
                    verdict(report.passes)
                );
                emit(cli.format, &report, human)?;
                return Ok(report.passes);
            }
            let Some(path) = germ_file else {
                bail!("expected a germ file or --sweep");
            };
            let germ = files::parse_germ(&read_file(path)?)?;
            let report = verify_surface_bound(&germ)?;
            let ok = report.epsilon_sq_over_24_ok && report.epsilon_sq_over_4_ok;
            let human = format!(
                "mld: {}\nlct of maximal ideal: {}\nfundamental cycle: {:?}\nlct >= mld^2/24: {}\ne_i + mld^2/4 <= 1: {}\n{}",
                lc_value_text(&report.mld),
                lc_value_text(&report.lct_maximal_ideal),
                report.fundamental_cycle,
                report.epsilon_sq_over_24_ok,
                report.epsilon_sq_over_4_ok,
                verdict(ok)
            );
            emit(cli.format, &report, human)?;
            Ok(ok)
        }

        Command::MonomialMld { lambda, exponents } => {
            let lambda = parse_rational(lambda)?;
            let exponents = parse_exponents(exponents)?;
            let mb = MonomialBoundary::new(lambda, exponents)?;
            let mld = monomial_mld(&mb)?;
            #[derive(Serialize)]
            struct Out {
                mld: LcValue,
            }
            let text = lc_value_text(&mld);
            emit(cli.format, &Out { mld }, format!("mld: {text}"))?;
            Ok(true)
        }

        Command::MonomialLct { exponents } => {
            let exponents = parse_exponents(exponents)?;
            let lct = monomial_lct(&exponents)?;
            #[derive(Serialize)]
            struct Out {
                lct: String,
            }
            let text = format_rational(&lct);
            emit(cli.format, &Out { lct: text.clone() }, format!("lct: {text}"))?;
            Ok(true)
        }

        Command::Example18 { m, max_m } => {
            let reports = match (m, max_m) {
                (Some(m), None) => vec![example_sharpness_check(*m)?],
                (None, Some(max_m)) => sweep::example_sharpness_sweep(*max_m).reports,
                _ => bail!("pass exactly one of --m or --max-m"),
            };
            let passes = reports.iter().all(|r| r.all_ok());
            let human = reports
                .iter()
                .map(|r| {
                    format!(
                        "m={}: mld {} a_E {} bound {} -> {}",
                        r.m,
                        lc_value_text(&r.mld),
                        r.a_e,
                        r.certified_bound,
                        verdict(r.all_ok())
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli.format, &reports, human)?;
            Ok(passes)
        }

        Command::PropertySuite { max_n, max_b, trees, pairs, policies, boundaries } => {
            #[derive(Serialize)]
            struct Suite {
                tables: sweep::TableReport,
                six_e: sweep::SixESweep,
                oracle: sweep::OracleReport,
                policies: sweep::PolicyReport,
                monotonicity: sweep::MonotonicityReport,
                hj_roundtrip: sweep::HjRoundtripReport,
                discrepancy_sanity: sweep::DiscrepancySanityReport,
                surface_bound: sweep::SurfaceBoundSweep,
                sharpness: sweep::SharpnessSweep,
            }
            let suite = Suite {
                tables: sweep::verify_tables(),
                six_e: sweep::sweep_6e(*max_n, *max_b),
                oracle: sweep::oracle_equivalence(*max_n, *max_b, 8, *trees, 10, cli.seed),
                policies: sweep::policy_invariance(*max_n, *max_b, 8, *policies, cli.seed),
                monotonicity: sweep::monotonicity_sweep(*pairs, cli.seed),
                hj_roundtrip: sweep::hj_roundtrip(*max_n),
                discrepancy_sanity: sweep::discrepancy_sanity(*max_n, *max_b),
                surface_bound: sweep::surface_bound_sweep(*max_n, *max_b, *boundaries, cli.seed),
                sharpness: sweep::example_sharpness_sweep(20),
            };
            let checks = [
                ("tables", suite.tables.all_matched),
                ("6e-bound", suite.six_e.passes),
                ("oracle", suite.oracle.passes()),
                ("policies", suite.policies.passes()),
                ("monotonicity", suite.monotonicity.passes()),
                ("hj-roundtrip", suite.hj_roundtrip.passes()),
                ("discrepancy-sanity", suite.discrepancy_sanity.passes()),
                ("surface-bound", suite.surface_bound.passes),
                ("sharpness", suite.sharpness.passes),
            ];
            let passed = checks.iter().all(|(_, ok)| *ok);
            let human = checks
                .iter()
                .map(|(name, ok)| format!("{name}: {}", verdict(*ok)))
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli.format, &suite, human)?;
            Ok(passed)
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
