//! The `tesselogic` command line.
//!
//! Exit codes: 0 success or PASS, 1 FAIL (counterexample on stdout),
//! 2 usage or input errors, 3 budget exceeded or INCONCLUSIVE.

mod commands;
pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tesselogic_core::Error;

pub use commands::execute;

#[derive(Parser, Debug)]
#[command(name = "tesselogic", version, about = "Logic over two-dimensional subshifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Args, Debug, Clone)]
pub struct Shared {
    /// Largest size swept, as WxH.
    #[arg(long, global = true, default_value = "3x3", value_parser = parse_size)]
    pub max: (u32, u32),
    /// abstract or concrete.
    #[arg(long, global = true, default_value = "abstract")]
    pub mode: String,
    /// torus, window-false or window-flagged.
    #[arg(long, global = true, default_value = "torus")]
    pub conv: String,
    #[arg(long, global = true, default_value_t = tesselogic_core::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CountArgs {
    /// Grid file with an `alphabet` line and the pattern.
    pub file: PathBuf,
    /// Pattern name in the grid file.
    #[arg(long, default_value = "P")]
    pub pattern: String,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// exactly or at-least.
    #[arg(long, default_value = "exactly")]
    pub count: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a sentence and print it in normal layout.
    Parse { file: PathBuf },
    /// Print the fragment tags of a sentence.
    Classify { file: PathBuf },
    /// Evaluate a sentence on the first torus or window of a grid file.
    Eval { file: PathBuf, config: PathBuf },
    /// List the models of a sentence on all sizes up to --max.
    Models { file: PathBuf },
    /// Compile `∀z ψ` to an SFT.
    CompileSft { file: PathBuf },
    /// Sentence defining an SFT.
    SftToFormula { file: PathBuf },
    /// Compile `∃X̄ ∀z ψ` to a sofic representation.
    CompileSofic { file: PathBuf },
    /// Sentence defining a sofic representation.
    SoficToFormula { file: PathBuf },
    /// Reduce a class C sentence to a single universal quantifier.
    Reduce { file: PathBuf },
    /// Sentence for the configurations with k occurrences of a pattern.
    CountingFormula(CountArgs),
    /// Doubly-marked SFT counting the occurrences of a pattern.
    CountingMarked(CountArgs),
    /// Union of two sentences, or of two marked objects with --marked.
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        marked: bool,
    },
    /// Intersection of two sentences, or of two marked objects.
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        marked: bool,
    },
    /// Compare two sentences on tori, or a sentence with an SFT.
    Equiv {
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(long)]
        via_sft: Option<PathBuf>,
    },
    /// Torus members of an SFT or sofic file on all sizes up to --max.
    Members { file: PathBuf },
    /// Locally admissible patterns of an SFT.
    Admissible {
        file: PathBuf,
        #[arg(long, default_value = "2x2", value_parser = parse_size)]
        size: (u32, u32),
        #[arg(long, default_value_t = 1)]
        radius: u32,
    },
    /// Draw the first torus or window of a grid file.
    Render {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: render::Format,
        #[arg(long, default_value_t = 8)]
        scale: u32,
        /// Paint a counting gadget with markers at X0,Y0,X1,Y1 and overlay its zone.
        #[arg(long, value_parser = parse_markers)]
        markers: Option<((u32, u32), (u32, u32))>,
        #[arg(long, default_value = "P")]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "exactly")]
        count: String,
    },
}

pub fn parse_size(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let n = |t: &str| t.parse::<u32>().ok().filter(|&v| v > 0).ok_or_else(|| format!("bad size `{s}`"));
    Ok((n(w)?, n(h)?))
}

fn parse_markers(s: &str) -> Result<((u32, u32), (u32, u32)), String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("bad marker list `{s}`")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, d] => Ok(((*a, *b), (*c, *d))),
        _ => Err(format!("expected X0,Y0,X1,Y1, got `{s}`")),
    }
}

/// Result of a command: bytes for the main output and an exit code.
pub struct Output {
    pub bytes: Vec<u8>,
    pub code: i32,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|out| {
        match &cli.shared.output {
            Some(p) => std::fs::write(p, &out.bytes)?,
            None => {
                use std::io::Write;
                std::io::stdout().write_all(&out.bytes)?;
            }
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}
