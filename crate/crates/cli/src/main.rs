use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use apolar_core::field::FieldSpec;
use apolar_core::harness::{
    ann_record, classify_record, hilbert_record, parse_dual, run_corpus, slp_record, verify, AnnRecord, ClassifyRecord,
    CorpusSpec, HarnessError, HilbertRecord, NormalFormSummary, SlpCommandRecord, SlpRecord, SlpStatus, VerifyOptions,
    VerifyRecord,
};
use apolar_core::lefschetz::DEFAULT_TRIALS;

const EXIT_DISAGREEMENT: u8 = 4;

/// Annihilators of polynomials under contraction, complete-intersection
/// checks for binomials, and strong Lefschetz witnesses.
///
/// Polynomials use uppercase dual variables, e.g. "X1^2*X2 - 3/2 X3".
/// Exit status: 0 ok, 2 bad input (parse error, zero polynomial, wrong
/// shape), 3 not a binomial, 4 classifier/oracle disagreement or failed
/// ideal check, 5 I/O error.
#[derive(Parser, Debug)]
#[command(name = "apolar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Coefficient field: "q" or "p:<prime>".
    #[arg(long, global = true, default_value = "q")]
    field: FieldSpec,
    /// Number of variables (default: largest index in the input).
    #[arg(long, global = true)]
    nvars: Option<usize>,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random linear forms and corpus generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random linear forms tried after x1 + ... + xN.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Allow the Lefschetz search in positive characteristic.
    #[arg(long, global = true)]
    slp_override: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal generators of Ann(F) and the Hilbert function, by linear algebra.
    Ann(PolyArg),
    /// Classify a binomial and print the predicted generators.
    Classify(PolyArg),
    /// Run the classifier and the oracle on a binomial and compare.
    Verify {
        #[command(flatten)]
        poly: PolyArg,
        /// Also search for a strong Lefschetz element (homogeneous CI only).
        #[arg(long)]
        slp: bool,
        /// Include per-stage wall-clock times.
        #[arg(long)]
        timings: bool,
    },
    /// Hilbert function and graded bases of R/Ann(F), F homogeneous.
    Hilbert(PolyArg),
    /// Search for a strong Lefschetz element of R/Ann(F), F homogeneous.
    Slp(PolyArg),
    /// Verify a seeded random corpus; records go to --out (or stdout) as JSON Lines.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
struct PolyArg {
    /// The dual generator F.
    #[arg(allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    min_vars: usize,
    #[arg(long, default_value_t = 4)]
    max_vars: usize,
    #[arg(long, default_value_t = 2)]
    max_a: u32,
    #[arg(long, default_value_t = 2)]
    max_b: u32,
    /// Coefficients come from {±1, ..., ±pool}.
    #[arg(long, default_value_t = 5)]
    pool: u64,
    /// Only binomials whose two terms have equal degree.
    #[arg(long)]
    homogeneous: bool,
    /// Search for Lefschetz elements on homogeneous CI instances.
    #[arg(long)]
    slp: bool,
    /// Write the summary here (default: stdout, or stderr when records go to stdout).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Include per-stage wall-clock times (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Harness(HarnessError),
    Io(io::Error),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Harness(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(5)
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: serde::Serialize>(
    g: &Global,
    value: &T,
    text: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    let mut out = open_out(&g.out)?;
    if g.json {
        serde_json::to_writer(&mut out, value).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        text(&mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    let parse = |p: &PolyArg| parse_dual(&p.poly, g.field, g.nvars);
    match &cli.command {
        Command::Ann(p) => {
            let r = ann_record(&parse(p)?)?;
            emit(g, &r, |w| write_ann(w, &r))?;
            Ok(0)
        }
        Command::Classify(p) => {
            let r = classify_record(&parse(p)?)?;
            emit(g, &r, |w| write_classify(w, &r))?;
            Ok(0)
        }
        Command::Verify { poly, slp, timings } => {
            let opts = VerifyOptions {
                with_slp: *slp,
                slp_override: g.slp_override,
                trials: g.trials,
                seed: g.seed,
                timings: *timings,
            };
            let r = verify(&parse(poly)?, &opts)?;
            emit(g, &r, |w| write_verify(w, &r))?;
            Ok(if r.passed() { 0 } else { EXIT_DISAGREEMENT })
        }
        Command::Hilbert(p) => {
            let r = hilbert_record(&parse(p)?)?;
            emit(g, &r, |w| write_hilbert(w, &r))?;
            Ok(0)
        }
        Command::Slp(p) => {
            let r = slp_record(&parse(p)?, g.trials, g.seed, g.slp_override)?;
            emit(g, &r, |w| write_slp_command(w, &r))?;
            Ok(0)
        }
        Command::Corpus(c) => run_corpus_command(g, c),
    }
}

fn run_corpus_command(g: &Global, c: &CorpusArgs) -> Result<u8, Failure> {
    let spec = CorpusSpec {
        min_vars: c.min_vars,
        max_vars: c.max_vars,
        max_a: c.max_a,
        max_b: c.max_b,
        coeff_pool: c.pool,
        count: c.count,
        seed: g.seed,
        homogeneous_only: c.homogeneous,
        field: g.field,
        verify: VerifyOptions {
            with_slp: c.slp,
            slp_override: g.slp_override,
            trials: g.trials,
            seed: g.seed,
            timings: c.timings,
        },
    };
    let mut out = open_out(&g.out)?;
    let summary = run_corpus(&spec, &mut out)?;
    drop(out);
    let text = serde_json::to_string(&summary).map_err(io::Error::from)?;
    match (&c.summary, &g.out) {
        (Some(p), _) => std::fs::write(p, text + "\n")?,
        (None, Some(_)) => println!("{text}"),
        (None, None) => eprintln!("{text}"),
    }
    Ok(if summary.passed { 0 } else { EXIT_DISAGREEMENT })
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_gens(w: &mut dyn Write, gens: &[String]) -> io::Result<()> {
    for g in gens {
        writeln!(w, "  {g}")?;
    }
    Ok(())
}

fn write_ann(w: &mut dyn Write, r: &AnnRecord) -> io::Result<()> {
    writeln!(w, "F = {}  over {}", r.input, r.field)?;
    writeln!(w, "mu = {}  (N = {})", r.mu, r.n_vars)?;
    writeln!(w, "complete intersection: {}", yes(r.ci))?;
    writeln!(w, "minimal generators:")?;
    write_gens(w, &r.generators)?;
    writeln!(w, "socle degree: {}", r.socle_degree)?;
    writeln!(w, "dim R/Ann(F): {}", r.quotient_dim)?;
    if let Some(h) = &r.hilbert {
        writeln!(w, "h = ({})", join(h, ","))?;
    }
    Ok(())
}

fn write_normal_form(w: &mut dyn Write, n: &NormalFormSummary) -> io::Result<()> {
    writeln!(
        w,
        "normal form: a = {:?}, b_left = {:?}, b_right = {:?}, c1 = {}, c2 = {}{}",
        n.a,
        n.b_left,
        n.b_right,
        n.c1,
        n.c2,
        if n.swapped { " (sides swapped)" } else { "" }
    )?;
    write!(w, "d1 = {}, d2 = {}", n.d1, n.d2)?;
    if let Some(v) = n.v {
        write!(w, ", v = {v}")?;
    }
    if let Some(x) = n.w {
        write!(w, ", w = {x}")?;
    }
    writeln!(w)?;
    if let Some(c) = n.case {
        writeln!(w, "case: {c}")?;
    }
    Ok(())
}

fn write_classify(w: &mut dyn Write, r: &ClassifyRecord) -> io::Result<()> {
    writeln!(w, "F = {}  over {}", r.input, r.field)?;
    if let Some(n) = &r.normal_form {
        write_normal_form(w, n)?;
    }
    writeln!(w, "verdict: {}", r.verdict)?;
    if let Some((lhs, rhs)) = r.inequality {
        writeln!(w, "a_r + 1 = {lhs}, v * b_r = {rhs}")?;
    }
    writeln!(w, "complete intersection: {}", yes(r.ci))?;
    if let Some(note) = &r.fallback {
        writeln!(w, "note: {note}")?;
    }
    if !r.generators.is_empty() {
        writeln!(w, "generators:")?;
        write_gens(w, &r.generators)?;
    }
    Ok(())
}

fn write_slp(w: &mut dyn Write, s: &SlpRecord) -> io::Result<()> {
    match &s.witness {
        Some(l) => writeln!(w, "strong Lefschetz witness: {l}  (candidate {})", s.trials_used)?,
        None => match s.status {
            SlpStatus::Skipped => writeln!(w, "strong Lefschetz: skipped")?,
            _ => writeln!(w, "strong Lefschetz: no witness found")?,
        },
    }
    for p in &s.failed_pairs {
        writeln!(
            w,
            "  failed: i = {}, d = {}, rank {} < {}",
            p.i, p.d, p.rank, p.max_rank
        )?;
    }
    if let Some(n) = &s.note {
        writeln!(w, "  {n}")?;
    }
    Ok(())
}

fn write_verify(w: &mut dyn Write, r: &VerifyRecord) -> io::Result<()> {
    writeln!(w, "F = {}  over {}", r.input, r.field)?;
    if let Some(n) = &r.normal_form {
        write_normal_form(w, n)?;
    }
    writeln!(w, "classifier: {}", r.verdict)?;
    writeln!(
        w,
        "oracle: mu = {} ({})",
        r.oracle_mu,
        if r.oracle_ci { "CI" } else { "not CI" }
    )?;
    writeln!(w, "agreement: {}", r.agreement)?;
    if let Some(e) = &r.ideal_equality {
        writeln!(w, "ideal equality: {e}")?;
    }
    if let Some(note) = &r.fallback {
        writeln!(w, "note: {note}")?;
    }
    if !r.generators.is_empty() {
        writeln!(w, "generators:")?;
        write_gens(w, &r.generators)?;
    }
    if let Some(s) = &r.slp {
        write_slp(w, s)?;
    }
    if let Some(t) = &r.timings {
        writeln!(
            w,
            "timings (ms): classify {:.3}, oracle {:.3}, construct {:.3}, equality {:.3}, slp {:.3}",
            t.classify_ms, t.oracle_ms, t.construct_ms, t.equality_ms, t.slp_ms
        )?;
    }
    Ok(())
}

fn write_hilbert(w: &mut dyn Write, r: &HilbertRecord) -> io::Result<()> {
    writeln!(w, "F = {}  over {}", r.input, r.field)?;
    writeln!(w, "h = ({})", join(&r.hilbert, ","))?;
    writeln!(w, "palindromic: {}", yes(r.palindromic))?;
    for (i, b) in r.bases.iter().enumerate() {
        writeln!(w, "  A_{i}: {}", b.join(", "))?;
    }
    Ok(())
}

fn write_slp_command(w: &mut dyn Write, r: &SlpCommandRecord) -> io::Result<()> {
    writeln!(w, "F = {}  over {}", r.input, r.field)?;
    writeln!(w, "h = ({})", join(&r.hilbert, ","))?;
    write_slp(w, &r.slp)
}
