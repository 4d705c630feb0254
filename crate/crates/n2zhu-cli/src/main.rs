use clap::Parser;
use n2zhu_cli::cache::CACHE_ENV;
use n2zhu_cli::{run, Command, Format, RunConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "n2zhu", version, about = "Exact computations for the N=2 superconformal algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; only `char` honours csv.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Directory of the report cache.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Recompute and leave the cache untouched.
    #[arg(long, global = true)]
    no_cache: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match (&cli.command, cli.format) {
        (Command::Char(_), f) => f,
        _ => Format::Json,
    };
    let config = RunConfig { command: cli.command, format, cache_dir: if cli.no_cache { None } else { cli.cache_dir } };
    let out = run(&config);
    if let Some(m) = &out.message {
        eprintln!("error: {m}");
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.report.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(out.code as u8)
}
