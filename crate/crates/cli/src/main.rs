use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = wishart_nc_cli::Cli::parse();
    let stdout = std::io::stdout();
    let code = wishart_nc_cli::run_cli(cli, &mut stdout.lock());
    ExitCode::from(code)
}
