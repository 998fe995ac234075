//! Command-line front end for the `strong132` toolkit.

pub mod cache;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use strong132::asymptotics::asymptotic_report;
use strong132::construct::{build, form_square, ConstructionParams, Variant};
use strong132::enumerate::{Options, TABLE_LIMIT};
use strong132::series::{Gf, DEFAULT_ORDER};
use strong132::verify::run_checks;
use strong132::{Error, Permutation};

#[derive(Debug, Parser)]
#[command(
    name = "strong132",
    version,
    about = "Enumerate permutations that strongly avoid 132"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads for brute-force enumeration.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Directory for cached table columns.
    #[arg(long, global = true, env = "STRONG132_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Lift the size guards on brute-force enumeration.
    #[arg(long, global = true)]
    pub unsafe_n: bool,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Bfile,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Form1,
    Form2,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Form1 => Variant::Form1,
            VariantArg::Form2 => Variant::Form2,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force table of a_{n,k} (default format: tsv).
    Table {
        #[arg(long)]
        n_max: usize,
    },
    /// Coefficients of a generating function (default format: bfile).
    Series {
        /// sav132, sav312, a1, a2, a3, b, a_ge4 or d.
        #[arg(long)]
        gf: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Cross-check the table, the series and the constructions (default format: text).
    Verify {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Build one big-cycle construction (default format: text).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        /// Inferred from n and b when omitted.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// The seed permutation in one-line notation, e.g. "2 1".
        #[arg(long)]
        alpha: String,
        /// Output the inverse of the construction.
        #[arg(long)]
        inverse: bool,
    },
    /// Growth-law report (default format: text).
    Asym {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format], what: &str) -> Result<Format> {
    let f = format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!("{what} does not support --format {}", format_name(f));
    }
    Ok(f)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Tsv => "tsv",
        Format::Json => "json",
        Format::Bfile => "bfile",
        Format::Text => "text",
    }
}

fn json_line(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes") + "\n"
}

/// Parses `args` (including the program name) and runs the command,
/// writing the result to `out`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli, out)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let opts = Options {
        jobs: usize::from(g.jobs),
        unsafe_n: g.unsafe_n,
    };
    let mut status = 0;
    let text = match &cli.command {
        Command::Table { n_max } => {
            let format = pick(
                g.format,
                Format::Tsv,
                &[Format::Tsv, Format::Json, Format::Bfile, Format::Text],
                "table",
            )?;
            let table = load_table(*n_max, &opts, g)?;
            match format {
                Format::Tsv => table.to_tsv(),
                Format::Text => table.to_text(),
                Format::Bfile => table.totals_bfile(),
                Format::Json => json_line(&serde_json::to_value(table.records())?),
            }
        }
        Command::Series { gf, order } => {
            let format = pick(
                g.format,
                Format::Bfile,
                &[Format::Bfile, Format::Json, Format::Text],
                "series",
            )?;
            let gf: Gf = gf.parse()?;
            let s = gf.series(*order);
            match format {
                Format::Json => json_line(&s.to_json(gf.name())),
                Format::Text => {
                    let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
                    format!("{}: {}\n", gf.name(), coeffs.join(", "))
                }
                _ => s.to_bfile(0),
            }
        }
        Command::Verify { n_max, order } => {
            let format = pick(
                g.format,
                Format::Text,
                &[Format::Text, Format::Json],
                "verify",
            )?;
            check_order(*n_max, *order)?;
            let table = load_table(*n_max, &opts, g)?;
            let report = run_checks(&table, *order, &opts)?;
            if !report.passed() {
                status = 1;
            }
            match format {
                Format::Json => json_line(&report.to_json()),
                _ => report.to_text(),
            }
        }
        Command::Construct {
            n,
            b,
            variant,
            alpha,
            inverse,
        } => {
            let format = pick(
                g.format,
                Format::Text,
                &[Format::Text, Format::Json],
                "construct",
            )?;
            let alpha: Permutation = alpha.parse()?;
            let variant = match variant {
                Some(v) => Variant::from(*v),
                None => Variant::for_position(*n, *b)
                    .with_context(|| format!("no construction has n = {n} at position b = {b}"))?,
            };
            let params = ConstructionParams::new(*n, *b, variant, alpha, *inverse)?;
            construct_output(&params, format)
        }
        Command::Asym { n_max, order } => {
            let format = pick(
                g.format,
                Format::Text,
                &[Format::Text, Format::Json],
                "asym",
            )?;
            check_order(*n_max, *order)?;
            let report = asymptotic_report(*n_max, *order)?;
            match format {
                Format::Json => json_line(&report.to_json()),
                _ => report.to_text(),
            }
        }
    };
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(status)
}

fn check_order(n_max: usize, order: usize) -> Result<()> {
    if order < n_max {
        bail!("--order ({order}) must be at least --n-max ({n_max})");
    }
    Ok(())
}

fn load_table(
    n_max: usize,
    opts: &Options,
    g: &GlobalArgs,
) -> Result<strong132::enumerate::ClassTable> {
    if n_max == 0 {
        bail!("--n-max must be at least 1");
    }
    if n_max > TABLE_LIMIT && !opts.unsafe_n {
        return Err(Error::GuardExceeded {
            what: "table",
            n: n_max,
            limit: TABLE_LIMIT,
        }
        .into());
    }
    cache::table(n_max, opts, g.cache_dir.as_deref())
}

fn construct_output(params: &ConstructionParams, format: Format) -> String {
    let p = build(params);
    let sq = p.square();
    let n = params.n();
    let cycle_len = p.cycle_length_of(n).expect("n is in range");
    if format == Format::Json {
        let v = serde_json::json!({
            "n": n,
            "b": params.b(),
            "variant": params.variant().to_string(),
            "alpha": params.alpha().one_line(),
            "inverse": params.take_inverse(),
            "one_line": p.one_line(),
            "cycles": p.cycle_decomposition().to_string(),
            "square": sq.one_line(),
            "square_cycles": sq.cycle_decomposition().to_string(),
            "cycle_length_of_n": cycle_len,
            "strongly_avoids_132": p.strongly_avoids_132(),
        });
        return json_line(&v);
    }
    let mut s = String::new();
    s.push_str(&format!(
        "n={} b={} variant={} alpha={} inverse={}\n",
        n,
        params.b(),
        params.variant(),
        params.alpha(),
        params.take_inverse()
    ));
    s.push_str(&format!("one-line: {p}\n"));
    s.push_str(&format!("cycles: {}\n", p.cycle_decomposition()));
    s.push_str(&format!("square: {sq}\n"));
    s.push_str(&format!("square cycles: {}\n", sq.cycle_decomposition()));
    if !params.take_inverse() {
        let explicit = form_square(params) == sq;
        s.push_str(&format!(
            "square matches piecewise form: {}\n",
            yes_no(explicit)
        ));
    }
    s.push_str(&format!(
        "cycle of n: length {cycle_len} (n/gcd(n,b) = {})\n",
        params.cycle_length()
    ));
    s.push_str(&format!(
        "strongly avoids 132: {}\n",
        yes_no(p.strongly_avoids_132())
    ));
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
