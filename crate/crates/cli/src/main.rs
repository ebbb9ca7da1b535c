mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let out = cli.command.common().out.clone();
    let result = run::build_spec(&cli.command).and_then(|spec| run::execute(&spec, &out));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("trimode: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
