//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 when the command succeeded and every checked identity
//! held, 1 when an identity or bound was violated (the report names a
//! reproducer), 2 for usage and configuration errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use planelab_core::rng::Xoshiro256;
use planelab_core::search::{random_permutation, SearchConfig, SearchError, Target};
use planelab_core::{
    faber_verify, maximal_hypergraph, multiplicity_map, psi_brute, psi_fast, FieldSpec, LineFamily,
    Permutation,
};

use crate::exec::{run_search, SearchRequest};
use crate::formats::{
    emit, parse_tokens, read_permutation, Emit, HypergraphReport, KakeyaReport, OutputFormat,
    PsiReport, SearchReportJson,
};
use crate::verify::{verify_all, verify_samples};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "planelab",
    version,
    about = "Collinear triples, Kakeya sets and extremal search over GF(q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field characteristic (an odd prime).
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Defining polynomial coefficients, constant term first, e.g. "1 0 1".
    #[arg(long)]
    pub modulus: Option<String>,
}

impl FieldArgs {
    pub fn resolve(&self) -> anyhow::Result<Option<Arc<FieldSpec>>> {
        let Some(p) = self.p else {
            if self.n != 1 || self.modulus.is_some() {
                bail!("--n and --modulus require --p");
            }
            return Ok(None);
        };
        let modulus = self.modulus.as_deref().map(parse_tokens).transpose()?;
        Ok(Some(Arc::new(FieldSpec::new(
            p,
            self.n,
            modulus.as_deref(),
        )?)))
    }

    fn require(&self) -> anyhow::Result<Arc<FieldSpec>> {
        self.resolve()?
            .ok_or_else(|| anyhow!("this command needs a field: pass --p (and --n)"))
    }
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
pub struct PermSource {
    /// Inline images, whitespace separated.
    #[arg(long, group = "source")]
    pub perm: Option<String>,
    /// JSON permutation file, or plain-text images for prime fields.
    #[arg(long, group = "source")]
    pub perm_file: Option<PathBuf>,
    #[arg(long, group = "source")]
    pub identity: bool,
    /// x -> x^k; requires gcd(k, q - 1) = 1.
    #[arg(long, group = "source", value_name = "K")]
    pub power: Option<u64>,
    /// Uniform random permutation from the pinned generator.
    #[arg(long, group = "source", value_name = "SEED")]
    pub random_seed: Option<u64>,
}

impl PermSource {
    fn load(&self, field: &FieldArgs) -> anyhow::Result<Permutation> {
        let f = field.resolve()?;
        if let Some(tokens) = &self.perm {
            return Ok(read_permutation(tokens, f)?);
        }
        if let Some(path) = &self.perm_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok(read_permutation(&text, f)?);
        }
        let f = field.require()?;
        if self.identity {
            return Ok(Permutation::identity(f));
        }
        if let Some(k) = self.power {
            return Permutation::power(f, k)
                .with_context(|| format!("x^{k} is not a permutation of this field"));
        }
        let seed = self.random_seed.expect("clap enforces one source");
        Ok(random_permutation(&f, &mut Xoshiro256::seed_from_u64(seed)))
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// text, json or csv.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Shorthand for --format json.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Shorthand for --format csv.
    #[arg(long)]
    pub csv: bool,
}

impl OutputArgs {
    fn format(&self) -> anyhow::Result<OutputFormat> {
        Ok(if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            self.format.parse()?
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    MinPsi,
    MinKakeya,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Collinear triple count and hypergraph norm of one permutation.
    Psi {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        source: PermSource,
        /// Count with the cubic reference algorithm.
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximal collinear subsets of the permutation graph.
    Hypergraph {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        source: PermSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The Kakeya set of a permutation: size, multiplicities, Faber check.
    Kakeya {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        source: PermSource,
        /// Include every point of the set with its multiplicity.
        #[arg(long)]
        emit_points: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the incidence identities over all or sampled permutations.
    #[command(group(ArgGroup::new("sweep").required(true).args(["all", "samples"])))]
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        all: bool,
        #[arg(long, value_name = "N")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "samples")]
        seed: u64,
        /// Invert the outcome of the named check (failure-path testing).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive (or sampled) minimum search.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        target: TargetArg,
        /// Largest q accepted for exhaustive runs.
        #[arg(long, value_name = "Q")]
        ceiling: Option<u32>,
        #[arg(long, env = "PLANELAB_THREADS", default_value_t = 1)]
        workers: usize,
        /// Enumerate all minimizers (capped) instead of one.
        #[arg(long)]
        witnesses: bool,
        /// Sample N random permutations instead of an exhaustive scan (min-psi only).
        #[arg(long, value_name = "N")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "samples")]
        seed: u64,
        /// Record wall time in the report (breaks byte-stability).
        #[arg(long)]
        timing: bool,
        /// Disable branch and bound.
        #[arg(long, hide = true)]
        no_prune: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn write_report<R: Emit>(
    out: &mut dyn Write,
    report: &R,
    format: OutputFormat,
) -> anyhow::Result<()> {
    out.write_all(emit(report, format)?.as_bytes())?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Psi {
            field,
            source,
            brute,
            output,
        } => {
            let format = output.format()?;
            let alpha = source.load(&field)?;
            let hyper = maximal_hypergraph(&alpha);
            let psi = if brute {
                psi_brute(&alpha)
            } else {
                psi_fast(&alpha)
            };
            let report = PsiReport {
                q: alpha.order(),
                psi,
                norm: hyper.norm,
            };
            write_report(out, &report, format)?;
            Ok(if psi == hyper.psi && psi >= hyper.norm {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Hypergraph {
            field,
            source,
            output,
        } => {
            let format = output.format()?;
            let alpha = source.load(&field)?;
            let report = HypergraphReport::from(&maximal_hypergraph(&alpha));
            write_report(out, &report, format)?;
            Ok(EXIT_OK)
        }
        Command::Kakeya {
            field,
            source,
            emit_points,
            output,
        } => {
            let format = output.format()?;
            let alpha = source.load(&field)?;
            let family = LineFamily::from_permutation(&alpha);
            let map = multiplicity_map(&family);
            let faber = faber_verify(&family);
            write_report(out, &KakeyaReport::new(&faber, &map, emit_points), format)?;
            Ok(if faber.all_hold() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Verify {
            field,
            all,
            samples,
            seed,
            inject_fault,
            output,
        } => {
            let format = output.format()?;
            let f = field.require()?;
            let report = match (all, samples) {
                (true, _) => verify_all(&f, inject_fault),
                (false, Some(n)) => verify_samples(&f, n, seed, inject_fault),
                (false, None) => bail!("pass --all or --samples N"),
            };
            write_report(out, &report, format)?;
            Ok(if report.all_hold {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Search {
            field,
            target,
            ceiling,
            workers,
            witnesses,
            samples,
            seed,
            timing,
            no_prune,
            output,
        } => {
            let format = output.format()?;
            let f = field.require()?;
            let target = match target {
                TargetArg::MinPsi => Target::MinPsi,
                TargetArg::MinKakeya => Target::MinKakeya,
            };
            let request = match samples {
                Some(_) if target == Target::MinKakeya => {
                    bail!("--samples is only available for --target min-psi")
                }
                Some(n) => SearchRequest::Random { samples: n, seed },
                None => {
                    let defaults = SearchConfig::for_target(target);
                    SearchRequest::Exhaustive(SearchConfig {
                        ceiling: ceiling.unwrap_or(defaults.ceiling),
                        enumerate_witnesses: witnesses,
                        prune: !no_prune,
                        normalize: true,
                    })
                }
            };
            match run_search(&f, target, request, workers) {
                Ok(t) => {
                    let json =
                        SearchReportJson::new(&t.report, timing.then_some(t.elapsed_s), t.workers);
                    write_report(out, &json, format)?;
                    Ok(EXIT_OK)
                }
                Err(SearchError::BoundViolated(report)) => {
                    write_report(out, &SearchReportJson::new(&report, None, workers), format)?;
                    Ok(EXIT_VIOLATION)
                }
                Err(e @ SearchError::WitnessMismatch { .. }) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_VIOLATION)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}
