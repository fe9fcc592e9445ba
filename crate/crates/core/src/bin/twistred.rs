use clap::Parser;
use twistred::cli::{execute, exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    let result = execute(&cli.command);
    match &result {
        Ok(o) => {
            for f in &o.files {
                println!("{}", f.display());
            }
            println!("status: {:?}", o.status);
        }
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(exit_code(&result));
}
