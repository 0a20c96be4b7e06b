//! Command-line front end and the HMF1 document format.

pub mod commands;
pub mod hmf1;
pub mod report;

use clap::error::ErrorKind;
use clap::Parser;
use commands::{Cli, CliError, Context, Format, DEFAULT_PREC};
use report::Report;

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs `argv` (program name first). `env_prec` is the value of `HMF_PREC`, if set.
pub fn run<I, S>(argv: I, env_prec: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                let text = match e.kind() {
                    ErrorKind::InvalidSubcommand => {
                        let name = e.get(clap::error::ContextKind::InvalidSubcommand).map(|v| v.to_string());
                        format!("error: {}\n", CliError::UnknownCommand(name.unwrap_or_default()))
                    }
                    _ => text,
                };
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let name = commands::command_name(&cli.command);
    let result = precision(&cli, env_prec).and_then(|prec| {
        let ctx = Context { input: cli.input.clone(), prec, bound: cli.bound };
        commands::dispatch(&cli, &ctx)
    });
    match result {
        Ok(report) => Outcome { stdout: emit(&report, cli.format), stderr: String::new(), code: 0 },
        Err(e) => {
            let code = e.exit_code();
            let stderr = format!("error: {e}\n");
            let stdout = match cli.format {
                Format::Structured => {
                    let mut r = Report::new(name);
                    r.status = code;
                    r.error = Some(e.to_string());
                    r.structured()
                }
                Format::Text => String::new(),
            };
            Outcome { stdout, stderr, code }
        }
    }
}

fn precision(cli: &Cli, env_prec: Option<&str>) -> Result<u32, CliError> {
    let prec = match (cli.prec, env_prec) {
        (Some(p), _) => p,
        (None, Some(v)) => v.trim().parse().map_err(|_| CliError::Usage(format!("HMF_PREC=`{v}` is not a bit count")))?,
        (None, None) => DEFAULT_PREC,
    };
    if !(16..=1 << 16).contains(&prec) {
        return Err(CliError::Usage(format!("precision {prec} outside 16..=65536 bits")));
    }
    Ok(prec)
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text(),
        Format::Structured => report.structured(),
    }
}
