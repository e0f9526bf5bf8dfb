use std::path::PathBuf;
use std::process::ExitCode;

use cartan::cli::{self, Form, Options};
use cartan::{Config, Exec};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cartan", version, about = "Graded twisted Steinberg algebras and twist reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Bound on every exhaustive enumeration.
    #[arg(long, default_value_t = Config::default().cap)]
    cap: u64,
    /// Also run the brute-force cross-checks.
    #[arg(long)]
    oracle: bool,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn options(&self) -> Options {
        let mut cfg = Config {
            cap: self.cap,
            ..Config::default()
        };
        if self.sequential {
            cfg.exec = Exec::Sequential;
        }
        Options {
            cfg,
            oracle: self.oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum To {
    Omega,
    Explicit,
    Algebra,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check every axiom of an instance.
    Validate(Common),
    /// Decide ADP, ACP, AQP and their graded versions.
    Classify(Common),
    /// Build the ultrafilter twist and certify the isomorphism.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Write the reconstructed twist as an instance file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Recover a twist from its algebra and compare the three criteria.
    Roundtrip(Common),
    /// Rewrite an instance in another form.
    Convert {
        instance: PathBuf,
        #[arg(long, value_enum)]
        to: To,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, json) = match &cli.command {
        Command::Validate(c) => (cli::cmd_validate(&c.instance, &c.options()), c.json),
        Command::Classify(c) => (cli::cmd_classify(&c.instance, &c.options()), c.json),
        Command::Reconstruct { common, emit } => (
            cli::cmd_reconstruct(&common.instance, emit.as_deref(), &common.options()),
            common.json,
        ),
        Command::Roundtrip(c) => (cli::cmd_roundtrip(&c.instance, &c.options()), c.json),
        Command::Convert {
            instance,
            to,
            output,
            json,
        } => {
            let form = match to {
                To::Omega => Form::Omega,
                To::Explicit => Form::Explicit,
                To::Algebra => Form::Algebra,
            };
            (cli::cmd_convert(instance, form, output.as_deref()), *json)
        }
    };
    print!("{}", outcome.render(json));
    ExitCode::from(outcome.code as u8)
}
