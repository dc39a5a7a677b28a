use std::io::Write;
use std::ops::ControlFlow;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schurcc::context::{build_context, BMode, SchurContext};
use schurcc::corpus::{self, CorpusOptions};
use schurcc::decision::{self, OracleOptions};
use schurcc::field::load_field;
use schurcc::local::{self, ClassScanner, DEFAULT_CLASS_BOUND};
use schurcc::report::{self, Report};
use schurcc::{fixtures, Error, Result};

/// Decides whether cyclic cyclotomic algebras generate a finite-index
/// subgroup of the p-part of the Schur group of an abelian field.
#[derive(Parser)]
#[command(name = "schurcc", version)]
struct Cli {
    /// Print `key = value` lines instead of the human layout.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct FieldArgs {
    /// Field description file, or inline `m:g1,g2,...`.
    #[arg(long)]
    field: String,

    #[arg(long)]
    prime: u64,

    #[arg(long, value_name = "definition|example", default_value = "definition")]
    b_mode: BMode,
}

impl FieldArgs {
    fn context(&self) -> Result<SchurContext> {
        build_context(&load_field(&self.field)?, self.prime, self.b_mode)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full report and verdict for one field and prime.
    Analyze {
        #[command(flatten)]
        field: FieldArgs,

        /// Also run the residue-class oracle and compare.
        #[arg(long)]
        check_oracle: bool,
    },
    /// Local data at one odd prime r.
    Local {
        #[command(flatten)]
        field: FieldArgs,

        #[arg(long)]
        r: u64,
    },
    /// Residue-class oracle with its per-class table.
    Oracle {
        #[command(flatten)]
        field: FieldArgs,

        /// Realize each listed class by its smallest odd prime.
        #[arg(long)]
        realize_primes: bool,

        /// Search bound for realized primes.
        #[arg(long, default_value_t = 1 << 40)]
        bound: u64,

        /// Largest number of classes the oracle may visit.
        #[arg(long, default_value_t = DEFAULT_CLASS_BOUND)]
        max_classes: u64,

        /// Rows of the class table to print.
        #[arg(long, default_value_t = 64)]
        rows: usize,
    },
    /// Cross-checks every subfield of Q(zeta_m) for m up to a bound.
    Corpus {
        #[arg(long)]
        max_conductor: u64,

        /// Comma-separated primes (default: every valid p).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,

        /// Comma-separated b modes.
        #[arg(long, value_delimiter = ',', default_value = "definition,example")]
        modes: Vec<BMode>,

        /// Classes per context realized by actual primes.
        #[arg(long, default_value_t = 32)]
        sample: usize,

        /// Skip the descending scan-order comparison.
        #[arg(long)]
        skip_scan_order: bool,
    },
    /// Runs the built-in worked examples and checks their known values.
    Examples,
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|e| Error::Invalid(format!("stdout: {e}")))
}

fn analyze(args: &FieldArgs, check_oracle: bool, machine: bool) -> Result<i32> {
    let ctx = args.context()?;
    let main = decision::decide(&ctx)?;
    let mut r = report::context_report(&ctx);
    report::add_decision(&mut r, "", &main);
    if let Some(fast) = decision::fast_paths(&ctx)? {
        report::add_decision(&mut r, "shortcut_", &fast);
    }
    let mut code = 0;
    if check_oracle {
        let oracle = decision::oracle_decide(&ctx)?;
        report::add_decision(&mut r, "oracle_", &oracle);
        let agree = oracle.verdict == main.verdict;
        r.push("oracle_agrees", agree);
        if !agree {
            code = 3;
        }
    }
    emit(&r.render(machine))?;
    Ok(code)
}

fn local_command(args: &FieldArgs, prime_r: u64, machine: bool) -> Result<i32> {
    let ctx = args.context()?;
    let r = if prime_r > 2 && ctx.m() % prime_r == 0 && prime_r != ctx.p {
        report::ramified_report(&local::ramification_nu(&ctx, prime_r)?)
    } else {
        let rep = local::local_report(&ctx, prime_r)?;
        let mut r = Report::new();
        report::add_local(&mut r, "", &rep);
        r
    };
    emit(&r.render(machine))?;
    Ok(0)
}

fn oracle_command(
    args: &FieldArgs,
    realize: bool,
    bound: u64,
    max_classes: u64,
    rows: usize,
    machine: bool,
) -> Result<i32> {
    let ctx = args.context()?;
    let opts = OracleOptions { max_classes, realize_bound: realize.then_some(bound) };
    let decision = decision::oracle_decide_with(&ctx, opts)?;
    let mut r = report::context_report(&ctx);
    r.push("M", local::class_modulus(&ctx));
    report::add_decision(&mut r, "", &decision);
    let mut text = r.render(machine);
    let scanner = ClassScanner::new(&ctx, max_classes)?;
    let mut shown = 0usize;
    let mut total = 0u64;
    let mut failure = None;
    scanner.for_each(|rep| {
        total += 1;
        if shown < rows {
            shown += 1;
            let residue = match rep.source {
                local::Source::Class { residue, .. } => residue,
                local::Source::Prime(r) => r,
            };
            let prime = if realize {
                match local::realize_class(&ctx, residue, 0, bound) {
                    Ok(p) => p.to_string(),
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            } else {
                "-".to_string()
            };
            text.push_str(&if machine {
                format!(
                    "class = {residue} psi={} d={} f_r={} nu={} beta={} prime={prime}\n",
                    rep.psi.value(),
                    rep.d,
                    rep.f_r,
                    rep.nu,
                    rep.beta
                )
            } else {
                format!(
                    "{residue:>10}  psi {:>8}  d {}  f_r {:>4}  nu {}  beta {}  r {prime}{}\n",
                    rep.psi.value(),
                    rep.d,
                    rep.f_r,
                    rep.nu,
                    rep.beta,
                    if rep.nu < rep.beta { "  <" } else { "" }
                )
            });
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if (shown as u64) < total {
        text.push_str(&format!("{}({} more classes not shown)\n", if machine { "# " } else { "" }, total - shown as u64));
    }
    emit(&text)?;
    Ok(0)
}

fn corpus_command(opts: CorpusOptions, machine: bool) -> Result<i32> {
    let summary = corpus::run_corpus_with(&opts, |i, field| {
        if !machine && i % 100 == 0 {
            eprintln!("field {i}: conductor {}", field.conductor());
        }
        ControlFlow::Continue(())
    })?;
    if machine {
        let mut r = Report::new();
        r.push("fields", summary.fields)
            .push("contexts", summary.contexts)
            .push("finite", summary.finite)
            .push("infinite", summary.infinite)
            .push("noncyclic", summary.noncyclic)
            .push("classes_scanned", summary.classes_scanned)
            .push("elements_decomposed", summary.elements_decomposed)
            .push("primes_realized", summary.primes_realized)
            .push("mode_mismatches", summary.mode_mismatches.len())
            .push("diagnostic_disagreements", summary.diagnostic_disagreements.len())
            .push("skipped", summary.skipped.len())
            .push("violations", summary.violations.len());
        emit(&r.machine())?;
    } else {
        emit(&format!("{summary}\n"))?;
    }
    Ok(if summary.is_clean() { 0 } else { 3 })
}

fn examples_command(machine: bool) -> Result<i32> {
    let checks = fixtures::run_all()?;
    let mut text = String::new();
    for c in &checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        if machine {
            text.push_str(&format!("{} = {status}\n", c.name));
        } else {
            text.push_str(&format!("[{status}] {}  ({})\n", c.name, c.detail));
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    emit(&text)?;
    Ok(if failed == 0 { 0 } else { 3 })
}

fn run(cli: Cli) -> Result<i32> {
    let machine = cli.machine;
    match cli.command {
        Command::Analyze { field, check_oracle } => analyze(&field, check_oracle, machine),
        Command::Local { field, r } => local_command(&field, r, machine),
        Command::Oracle { field, realize_primes, bound, max_classes, rows } => {
            oracle_command(&field, realize_primes, bound, max_classes, rows, machine)
        }
        Command::Corpus { max_conductor, primes, modes, sample, skip_scan_order } => {
            let opts = CorpusOptions {
                max_conductor,
                primes,
                modes,
                check_scan_order: !skip_scan_order,
                realize_sample: sample,
                ..CorpusOptions::default()
            };
            corpus_command(opts, machine)
        }
        Command::Examples => examples_command(machine),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

