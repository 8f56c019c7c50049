use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use baileykit_core::corpus::{
    build_sides, registry, verify, verify_all, IdentityInstance, Side, Status, SumOptions, VerificationReport,
};
use baileykit_core::instances::{parse_instances, parse_line, sample_suite, InstanceFile};
use baileykit_core::par;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EVAL: u8 = 3;

#[derive(Parser)]
#[command(name = "baileykit", version, about = "Verify q-series identities coefficient by coefficient")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct OrderArgs {
    /// Truncation order in t-units (t = q^(1/2))
    #[arg(long, conflicts_with = "q_order")]
    order: Option<i64>,
    /// Truncation order in powers of q, i.e. twice as many t-units
    #[arg(long)]
    q_order: Option<i64>,
}

impl OrderArgs {
    fn t_order(self) -> Option<i64> {
        self.order.or(self.q_order.map(|q| 2 * q))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the identities with their parameters and constraints
    List,
    /// Verify one instance
    Verify {
        id: String,
        /// A parameter binding NAME=VALUE; repeatable
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Verify every instance in a file
    VerifyAll {
        #[arg(long)]
        file: PathBuf,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Order for lines that give none
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Print the coefficients of one side as "t-exponent coefficient" lines
    Coeffs {
        id: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Verify a file (or the built-in sample suite) and write a report
    Report {
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        order: OrderArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lhs,
    Rhs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("baileykit: {msg}");
            ExitCode::from(code)
        }
    }
}

type Outcome = Result<u8, (u8, String)>;

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::List => {
            list();
            Ok(0)
        }
        Command::Verify { id, params, order } => {
            let inst = instance(&id, &params, order)?;
            let r = verify(&inst);
            println!("{}", r.summary_line());
            Ok(exit_code(&[r]))
        }
        Command::VerifyAll { file, jobs, order } => {
            let insts = read_file(&file, order)?;
            let reports = par::with_jobs(jobs, || verify_all(&insts));
            let mut out = std::io::stdout().lock();
            for r in &reports {
                let _ = writeln!(out, "{}", r.summary_line());
            }
            let _ = writeln!(out, "{}", tally(&reports));
            Ok(exit_code(&reports))
        }
        Command::Coeffs { id, side, params, order } => {
            let inst = instance(&id, &params, order)?;
            let built = build_sides(&inst, &SumOptions::default()).map_err(|e| (EXIT_EVAL, e.to_string()))?;
            let s = match side {
                SideArg::Lhs => built.lhs,
                SideArg::Rhs => built.rhs,
            };
            let mut out = std::io::stdout().lock();
            match s {
                Side::Series(s) => {
                    for l in s.truncate(inst.order()).to_lines() {
                        let _ = writeln!(out, "{l}");
                    }
                }
                Side::Bivariate(p) => {
                    for (x, s) in p {
                        let _ = writeln!(out, "# x^{x}");
                        for l in s.truncate(inst.order()).to_lines() {
                            let _ = writeln!(out, "{l}");
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Report { format, out, file, jobs, order } => {
            let insts = match file {
                Some(f) => read_file(&f, order)?,
                None => with_default_order(sample_suite(), order.t_order()),
            };
            let reports = par::with_jobs(jobs, || verify_all(&insts));
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
                Format::Text => {
                    let mut t: String = reports.iter().map(|r| r.summary_line() + "\n").collect();
                    t.push_str(&tally(&reports));
                    t.push('\n');
                    t
                }
            };
            fs::write(&out, text).map_err(|e| (EXIT_USAGE, format!("{}: {e}", out.display())))?;
            println!("{}", tally(&reports));
            Ok(exit_code(&reports))
        }
    }
}

fn list() {
    let mut out = std::io::stdout().lock();
    for d in registry() {
        let params: Vec<String> = d.params.iter().map(|p| format!("{}:{}", p.name, p.kind.name())).collect();
        let _ = writeln!(out, "{:<12} {:<8} {}", d.id, d.kind.name(), d.label);
        let _ = writeln!(out, "{:<12} params  {}", "", if params.is_empty() { "-".into() } else { params.join(" ") });
        let _ = writeln!(out, "{:<12} needs   {}", "", if d.constraints.is_empty() { "-" } else { d.constraints });
    }
}

fn instance(id: &str, params: &[String], order: OrderArgs) -> Result<IdentityInstance, (u8, String)> {
    let mut line = id.to_string();
    for p in params {
        if p.chars().any(char::is_whitespace) || !p.contains('=') {
            return Err((EXIT_USAGE, format!("--param expects NAME=VALUE, got `{p}`")));
        }
        line.push(' ');
        line.push_str(p);
    }
    if let Some(o) = order.t_order() {
        line.push_str(&format!(" order={o}"));
    }
    match parse_line(&line, 1) {
        Ok(Some(inst)) => Ok(inst),
        Ok(None) => Err((EXIT_USAGE, "missing identity id".into())),
        Err(e) => Err((EXIT_USAGE, e.message)),
    }
}

fn read_file(path: &PathBuf, order: OrderArgs) -> Result<Vec<IdentityInstance>, (u8, String)> {
    let text = fs::read_to_string(path).map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let file = parse_instances(&text).map_err(|e| (EXIT_USAGE, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))?;
    Ok(with_default_order(file, order.t_order()))
}

fn with_default_order(file: InstanceFile, order: Option<i64>) -> Vec<IdentityInstance> {
    let mut insts = file.instances();
    for i in &mut insts {
        i.order = i.order.or(order);
    }
    insts
}

fn tally(reports: &[VerificationReport]) -> String {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    format!("{} passed, {} failed, {} errors", count(Status::Pass), count(Status::Fail), count(Status::Error))
}

fn exit_code(reports: &[VerificationReport]) -> u8 {
    if reports.iter().any(|r| r.status == Status::Error) {
        EXIT_EVAL
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        EXIT_FAIL
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn report(status: Status) -> VerificationReport {
        VerificationReport {
            id: "RR1".into(),
            params: BTreeMap::new(),
            order: 10,
            status,
            first_mismatch_texp: None,
            first_mismatch_xexp: None,
            lhs_coeff: None,
            rhs_coeff: None,
            terms_summed: 0,
            elapsed_ms: 0,
            error: None,
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[report(Status::Pass), report(Status::Pass)]), 0);
        assert_eq!(exit_code(&[report(Status::Pass), report(Status::Fail)]), EXIT_FAIL);
        assert_eq!(exit_code(&[report(Status::Fail), report(Status::Error)]), EXIT_EVAL);
        assert_eq!(tally(&[report(Status::Fail), report(Status::Error)]), "0 passed, 1 failed, 1 errors");
    }
}
