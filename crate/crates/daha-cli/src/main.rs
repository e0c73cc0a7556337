//! daha: exact arithmetic in twisted group algebras over an affine torus.
//!
//! Subcommands cover root-datum facts, affine Weyl words, element
//! multiplication, membership checks under both checker configs, defining
//! relations, normalizing c-functions, the rank-1 integration oracle, the
//! finite-torsor transform with cone expansion and resummation, and the
//! full verification suite.
//!
//! Exit codes: 0 success/compliant, 1 honest check failure or membership
//! violation, 2 malformed input, 3 domain/capacity/representation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use daha_core::cherednik::{
    bernstein_instances, check_membership, verify_braids, verify_quadratics, verify_relation,
    RelationOutcome,
};
use daha_core::heckereg::{c_function, rank1_intertwiner_oracle, TruncationBudget};
use daha_core::mellin::{cone_expand, cone_sum, mellin, Cone};
use daha_core::rootdata::RootDatum;
use daha_core::serial::{
    cone_series_from_json, cone_series_to_json, element_from_json, element_to_json,
    fixture_config, fixtures_from_json, laurent_tuple_to_json, ratfun_from_json, ratfun_to_json,
    report_to_json, torsor_from_json, Fixture,
};
use daha_core::suite::{run_suite, DEFAULT_SEED};
use daha_core::weyl::{bfs_ball, AffineWeylElement};
use daha_core::Error;

#[derive(Parser)]
#[command(name = "daha", version, about = "exact twisted group algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TypeArg {
    /// Root datum label (A1, A2, A3, B2, D4)
    #[arg(long = "type", value_name = "LABEL")]
    label: String,
}

#[derive(Subcommand)]
enum Command {
    /// Root datum facts
    Roots {
        #[command(subcommand)]
        cmd: RootsCmd,
    },
    /// Affine Weyl group utilities
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Multiply two serialized algebra elements
    Multiply {
        /// Left factor (element JSON)
        a: PathBuf,
        /// Right factor (element JSON)
        b: PathBuf,
    },
    /// Check a serialized element against a membership config
    CheckMembership {
        /// Element JSON file
        file: PathBuf,
        /// Checker config: cherednik or hecke
        #[arg(long, default_value = "cherednik")]
        config: String,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Verify defining relations in the twisted group algebra
    VerifyRelations {
        #[command(flatten)]
        datum: TypeArg,
        /// Relation list: quadratic, braid, bernstein, or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print the normalizing c-function of an affine Weyl word
    Cfun {
        #[command(flatten)]
        datum: TypeArg,
        /// Generator word, comma separated (e.g. 0,1,0)
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
        /// Print as JSON
        #[arg(long)]
        json: bool,
    },
    /// Check a serialized element against the graded-twist config
    HeckeCheck {
        /// Element JSON file
        file: PathBuf,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Rank-1 integration oracle: enumerated counts against closed forms
    Rank1Oracle {
        /// Residue-ring base (a prime such as 2 or 3)
        #[arg(long)]
        q: u64,
        /// Truncation depth (number of strata)
        #[arg(long)]
        depth: usize,
        /// Integration parameter
        #[arg(long)]
        s: i64,
    },
    /// Finite-torsor transform, cone expansion, cone resummation
    Mellin {
        #[command(subcommand)]
        cmd: MellinCmd,
    },
    /// Run the full verification suite
    Suite {
        /// Randomness seed (the report records it)
        #[arg(long)]
        seed: Option<u64>,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum RootsCmd {
    /// Print the frozen facts of one root datum
    Info {
        /// Root datum label (A1, A2, A3, B2, D4)
        label: String,
        /// Print as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Reduce a generator word to canonical form
    Reduce {
        #[command(flatten)]
        datum: TypeArg,
        /// Generator word, comma separated
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
    /// Count the elements of bounded length
    Ball {
        #[command(flatten)]
        datum: TypeArg,
        /// Maximal length
        #[arg(long)]
        radius: usize,
    },
}

#[derive(Subcommand)]
enum MellinCmd {
    /// Transform a torsor function into its character components
    Transform {
        /// Torsor function JSON file
        file: PathBuf,
    },
    /// Expand a rational function as a graded series on a Weyl cone
    Expand {
        /// Rational function JSON file
        file: PathBuf,
        #[command(flatten)]
        datum: TypeArg,
        /// Weyl word selecting the cone (omit for the dominant cone)
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        cone: Vec<usize>,
        /// Truncation order (graded depth beyond the leading shift)
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Resum a cone series back into a rational function
    Sum {
        /// Cone series JSON file
        file: PathBuf,
    },
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn fixtures_dir() -> PathBuf {
    std::env::var_os("DAHA_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"))
}

fn load_fixtures() -> anyhow::Result<Vec<Fixture>> {
    let path = fixtures_dir().join("membership.json");
    let data = read_input(&path)?;
    Ok(fixtures_from_json(&data)?)
}

fn print_relation_table(rows: &[RelationOutcome]) -> bool {
    let mut all = true;
    for row in rows {
        let status = if row.holds { "ok  " } else { "FAIL" };
        println!("{status} {}", row.name);
        all &= row.holds;
    }
    all
}

fn membership_outcome(
    datum: &RootDatum,
    report: &daha_core::cherednik::MembershipReport,
    json: bool,
) -> u8 {
    if json {
        println!("{}", report_to_json(datum, report));
    } else {
        println!("{report}");
    }
    u8::from(!report.compliant())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Roots { cmd } => {
            let RootsCmd::Info { label, json } = cmd;
            let datum = RootDatum::from_label(&label)?;
            if json {
                let info = serde_json::json!({
                    "type": datum.label().to_string(),
                    "rank": datum.rank(),
                    "width": datum.width(),
                    "h_dual": datum.h_dual(),
                    "rho": datum.rho(),
                    "theta": datum.theta().simple,
                    "positive_roots": datum.positive_roots().len(),
                });
                println!("{}", serde_json::to_string_pretty(&info)?);
            } else {
                println!("type {}", datum.label());
                println!("rank {}", datum.rank());
                println!("torus width {}", datum.width());
                println!("dual Coxeter number {}", datum.h_dual());
                println!("rho coordinates {:?}", datum.rho());
                println!("highest root {:?}", datum.theta().simple);
                println!("positive roots {}", datum.positive_roots().len());
            }
            Ok(0)
        }
        Command::Weyl { cmd } => match cmd {
            WeylCmd::Reduce { datum, word } => {
                let datum = RootDatum::from_label(&datum.label)?;
                let w = AffineWeylElement::from_word(&datum, &word)?;
                let reduced = w.reduced_word(&datum);
                let rendered = reduced
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!("element {w}");
                println!("reduced word [{rendered}]");
                println!("length {}", reduced.len());
                Ok(0)
            }
            WeylCmd::Ball { datum, radius } => {
                let datum = RootDatum::from_label(&datum.label)?;
                let ball = bfs_ball(&datum, radius);
                for l in 0..=radius {
                    let n = ball.iter().filter(|(_, lw)| *lw == l).count();
                    println!("length {l}: {n} elements");
                }
                println!("total {}", ball.len());
                Ok(0)
            }
        },
        Command::Multiply { a, b } => {
            let (datum_a, x) = element_from_json(&read_input(&a)?)?;
            let (datum_b, y) = element_from_json(&read_input(&b)?)?;
            if datum_a.label() != datum_b.label() {
                return Err(Error::Domain(format!(
                    "factors live over different root data: {} vs {}",
                    datum_a.label(),
                    datum_b.label()
                ))
                .into());
            }
            let product = x.mul(&datum_a, &y)?;
            println!("{}", element_to_json(&datum_a, &product));
            Ok(0)
        }
        Command::CheckMembership { file, config, json } => {
            let (datum, x) = element_from_json(&read_input(&file)?)?;
            let cfg = fixture_config(&config)?;
            let report = check_membership(&datum, &x, &cfg)?;
            Ok(membership_outcome(&datum, &report, json))
        }
        Command::VerifyRelations { datum, suite } => {
            let datum = RootDatum::from_label(&datum.label)?;
            let mut rows = Vec::new();
            match suite.as_str() {
                "quadratic" => rows.extend(verify_quadratics(&datum)?),
                "braid" => rows.extend(verify_braids(&datum)?),
                "bernstein" => {
                    for rel in bernstein_instances(&datum)? {
                        rows.push(verify_relation(&datum, &rel)?);
                    }
                }
                "all" => {
                    rows.extend(verify_quadratics(&datum)?);
                    rows.extend(verify_braids(&datum)?);
                    for rel in bernstein_instances(&datum)? {
                        rows.push(verify_relation(&datum, &rel)?);
                    }
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown relation list '{other}' (use quadratic, braid, bernstein, all)"
                    ))
                    .into())
                }
            }
            Ok(u8::from(!print_relation_table(&rows)))
        }
        Command::Cfun { datum, word, json } => {
            let datum = RootDatum::from_label(&datum.label)?;
            let w = AffineWeylElement::from_word(&datum, &word)?;
            let c = c_function(&datum, &w);
            if json {
                println!("{}", ratfun_to_json(&c));
            } else {
                println!("{c}");
            }
            Ok(0)
        }
        Command::HeckeCheck { file, json } => {
            let (datum, x) = element_from_json(&read_input(&file)?)?;
            let cfg = fixture_config("hecke")?;
            let report = check_membership(&datum, &x, &cfg)?;
            Ok(membership_outcome(&datum, &report, json))
        }
        Command::Rank1Oracle { q, depth, s } => {
            let budget = TruncationBudget::new(depth, q, depth)?;
            let out = rank1_intertwiner_oracle(&budget, s)?;
            let diff = &out.stratum_sum - &out.geometric_sum;
            println!("enumerated stratum sum  {}", out.stratum_sum);
            println!("closed-form partial sum {}", out.geometric_sum);
            println!("difference              {}", diff);
            println!("full-sum limit          {}", out.full_limit);
            Ok(u8::from(!diff.is_zero()))
        }
        Command::Mellin { cmd } => match cmd {
            MellinCmd::Transform { file } => {
                let (torsor, phi) = torsor_from_json(&read_input(&file)?)?;
                let components = mellin(&torsor, &phi)?;
                println!("{}", laurent_tuple_to_json(&components));
                Ok(0)
            }
            MellinCmd::Expand {
                file,
                datum,
                cone,
                order,
            } => {
                let datum = RootDatum::from_label(&datum.label)?;
                let f = ratfun_from_json(&read_input(&file)?)?;
                let w = AffineWeylElement::from_word(&datum, &cone)?;
                let cone = Cone::weyl_image(&datum, &w);
                let series = cone_expand(&f, &cone, order)?;
                println!("{}", cone_series_to_json(&series));
                Ok(0)
            }
            MellinCmd::Sum { file } => {
                let series = cone_series_from_json(&read_input(&file)?)?;
                let f = cone_sum(&series)?;
                println!("{}", ratfun_to_json(&f));
                Ok(0)
            }
        },
        Command::Suite { seed, json } => {
            let fixtures = load_fixtures()?;
            let report = run_suite(seed.unwrap_or(DEFAULT_SEED), &fixtures);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            Ok(u8::from(!report.all_passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::Parse(_)) => 2,
                Some(_) => 3,
                // anything else is an input problem (unreadable file, bad JSON)
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}
