use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use splitred_cli::scan::{self, ScanOptions};
use splitred_cli::scenario::RunOptions;
use splitred_cli::{golden, run_file, CliError};

#[derive(Parser)]
#[command(name = "splitred", version, about = "Split reduction of Weil restrictions over local fields")]
struct Cli {
    /// Override the precision of every tower.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Exit with status 3 when a result is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    /// Apply the Swan restriction formula to extensions of degree other than p (unverified).
    #[arg(long, global = true)]
    unsafe_degree: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its JSON report.
    Run { scenario: PathBuf },
    /// Recompute every published example and print a PASS/FAIL table.
    ReproducePaper {
        /// Run a single case.
        #[arg(long)]
        case: Option<String>,
        /// List case ids.
        #[arg(long)]
        list: bool,
    },
    /// Sweep a scenario template over parameter ranges and write CSV.
    Scan {
        template: PathBuf,
        /// `key=a..b` (inclusive) or `key=a,b,c`; repeatable.
        #[arg(long = "vary", value_name = "KEY=RANGE")]
        vary: Vec<String>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Continue after errors, recording them as rows.
        #[arg(long)]
        keep_going: bool,
        /// Fill the runtime_ms column.
        #[arg(long)]
        timing: bool,
    },
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("splitred: {e}");
    ExitCode::from(e.exit_code() as u8)
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
    let opts = RunOptions { precision: cli.precision, unsafe_degree: cli.unsafe_degree };
    match cli.command {
        Command::Run { scenario } => match run_file(&scenario, &opts, cli.strict) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::ReproducePaper { case, list } => {
            if list {
                for c in golden::cases() {
                    println!("{:18} {}", c.id, c.description);
                }
                return ExitCode::SUCCESS;
            }
            match golden::run(case.as_deref(), &opts) {
                Ok(rows) => {
                    print!("{}", golden::render(&rows));
                    if rows.iter().all(|r| r.pass) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(CliError::Schema(e)),
            }
        }
        Command::Scan { template, vary, out, jobs, keep_going, timing } => {
            let varies = match vary.iter().map(|v| scan::parse_vary(v)).collect::<Result<Vec<_>, _>>() {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let text = match std::fs::read_to_string(&template) {
                Ok(t) => t,
                Err(e) => return fail(CliError::Schema(format!("{}: {e}", template.display()))),
            };
            let sopts = ScanOptions { run: opts, jobs, keep_going, strict: cli.strict, timing };
            let rows = match scan::scan(&text, &varies, &sopts) {
                Ok(r) => scan::truncate_at_error(r, keep_going),
                Err(e) => return fail(e),
            };
            let written = match &out {
                Some(path) => std::fs::File::create(path)
                    .map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))
                    .and_then(|f| scan::write_csv(&rows, f)),
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    scan::write_csv(&rows, &mut lock).and_then(|_| {
                        lock.flush().map_err(|e| CliError::Precondition(e.to_string()))
                    })
                }
            };
            if let Err(e) = written {
                return fail(e);
            }
            match scan::scan_status(&rows, &sopts) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
    }
}
