use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strata_cli::commands::{cmd_principal, cmd_sv, cmd_table, cmd_volume, Settings, SvRequest};
use strata_cli::render::{Format, Renderer, DEFAULT_DIGITS};
use strata_cli::{cache, exit, selftest, CliError};
use strata_core::siegel_veech::SvKind;
use strata_core::volumes::{VolumeOptions, DEFAULT_MAX_WEIGHT};

/// Exact Masur-Veech volumes and Siegel-Veech constants of strata of Abelian differentials.
#[derive(Parser, Debug)]
#[command(name = "mvvol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Exact, global = true)]
    format: Format,

    /// Fractional digits for --format decimal (at most 90)
    #[arg(long, default_value_t = DEFAULT_DIGITS, global = true)]
    digits: usize,

    /// Volume cache file; the MV_CACHE environment variable takes precedence
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Refuse strata whose sum of (m_i + 1) exceeds this
    #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT, global = true)]
    max_weight: u32,

    /// Worker threads for Wick sums (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Volume of one stratum, e.g. `2`, `1,1` or `H(3,1)`
    Volume { stratum: String },
    /// Principal stratum H(1^(2g-2)) from its closed form
    Principal {
        genus: u32,
        /// Also run the general pipeline and compare
        #[arg(long)]
        verify: bool,
    },
    /// Every stratum with 2g-2 up to the given size
    Table {
        #[arg(long, default_value_t = 6)]
        max_size: u32,
    },
    /// A Siegel-Veech constant
    Sv {
        stratum: String,
        #[arg(long, value_parser = parse_kind)]
        kind: SvKind,
        /// One-based zero indices, `i` or `i,j`
        #[arg(long)]
        zeros: Option<String>,
        /// Return-angle index j for loop_per_angle (angle (2j+1)pi)
        #[arg(long)]
        angle: Option<u32>,
    },
    /// Run the built-in checks
    Selftest,
}

fn parse_kind(s: &str) -> Result<SvKind, String> {
    s.parse().map_err(|e: strata_core::Error| e.to_string())
}

fn run(cli: &Cli) -> Result<(String, i32), CliError> {
    let set = Settings {
        render: Renderer::new(cli.format, cli.digits)?,
        volume_opts: VolumeOptions {
            max_weight: cli.max_weight,
        },
    };
    let cache_path = cache::resolve_path(cli.cache.clone());
    if let Some(p) = &cache_path {
        cache::load(p)?;
    }
    let (out, code) = match &cli.command {
        Command::Volume { stratum } => (cmd_volume(stratum, &set)?, exit::OK),
        Command::Principal { genus, verify } => (cmd_principal(*genus, *verify, &set)?, exit::OK),
        Command::Table { max_size } => (cmd_table(*max_size, &set)?, exit::OK),
        Command::Sv {
            stratum,
            kind,
            zeros,
            angle,
        } => {
            let req = SvRequest {
                stratum,
                kind: *kind,
                zeros: zeros.as_deref(),
                angle: *angle,
            };
            (cmd_sv(&req, &set)?, exit::OK)
        }
        Command::Selftest => {
            let (report, ok) = selftest::run_all(set.volume_opts);
            (report, if ok { exit::OK } else { exit::SELFTEST_FAILED })
        }
    };
    if let Some(p) = &cache_path {
        cache::save(p)?;
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Invalid(e.to_string()))
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("mvvol: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
