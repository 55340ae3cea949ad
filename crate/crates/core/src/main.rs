use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cfg_closure::closure::{cat_decompose, clo_decompose, union_classify, CloDecomposition, UnionClassification};
use cfg_closure::generate::GenParams;
use cfg_closure::harness::{fixed_corpus, load_corpus, random_corpus, run_suite, Mutant, Outcome, SuiteConfig};
use cfg_closure::search::{derive_search, enumerate_forms, Bounds, DEFAULT_FORM_CAP};
use cfg_closure::text::{parse_certificate, parse_form, parse_grammar, serialize_certificate, serialize_grammar};
use cfg_closure::{check_derivation, concat, kleene, union, CheckResult, Grammar, SententialForm};

/// Closure constructions, derivation certificates and bounded theorem checks
/// for context-free grammars.
#[derive(Parser)]
#[command(name = "cfg-closure", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: u64,
    #[arg(long, default_value_t = DEFAULT_FORM_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    form_cap: u64,
}

impl BoundArgs {
    fn bounds(self) -> Bounds {
        Bounds::new(self.max_steps as usize, self.max_len as usize).with_cap(self.form_cap as usize)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Union of two grammars.
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Concatenation of two grammars.
    Cat {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Kleene closure of a grammar.
    Star {
        a: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the forms a grammar derives within the bounds.
    Enum {
        grammar: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Only terminal forms.
        #[arg(long)]
        sentences_only: bool,
    },
    /// Replay a derivation certificate and print its final form.
    Check { grammar: PathBuf, certificate: PathBuf },
    /// Search for a derivation between two forms and print it as a certificate.
    Search {
        grammar: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Classify a form of union(A, B) by the source it was lifted from.
    ClassifyUnion {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Split a form of cat(A, B) into source forms with witnesses.
    DecomposeCat {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Split a form of star(A) into a closure prefix and a source tail.
    DecomposeStar {
        a: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Check every theorem over a corpus; defaults to the built-in corpus.
    Verify {
        #[arg(long, conflicts_with = "random")]
        corpus: Option<PathBuf>,
        /// Number of random grammars.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Run against a deliberately broken construction.
        #[arg(long, default_value = "none")]
        mutant: Mutant,
        /// Write failing inputs here in grammar/certificate format.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
}

fn read_grammar(path: &Path) -> Result<Grammar> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_grammar(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_form(text: &str) -> Result<SententialForm> {
    parse_form(text).map_err(|e| anyhow::anyhow!("invalid form `{text}`: {e}"))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Union { a, b, output } => {
            let g = union(&read_grammar(&a)?, &read_grammar(&b)?)?;
            emit(&serialize_grammar(&g), output.as_deref())?;
        }
        Command::Cat { a, b, output } => {
            let g = concat(&read_grammar(&a)?, &read_grammar(&b)?)?;
            emit(&serialize_grammar(&g), output.as_deref())?;
        }
        Command::Star { a, output } => {
            let g = kleene(&read_grammar(&a)?)?;
            emit(&serialize_grammar(&g), output.as_deref())?;
        }
        Command::Enum { grammar, bounds, sentences_only } => {
            let g = read_grammar(&grammar)?;
            let forms = match enumerate_forms(&g, &bounds.bounds()) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(status(false));
                }
            };
            for (f, k) in forms {
                if sentences_only {
                    if f.is_sentence() {
                        println!("{f}");
                    }
                } else {
                    println!("{k}\t{f}");
                }
            }
        }
        Command::Check { grammar, certificate } => {
            let g = read_grammar(&grammar)?;
            let text =
                fs::read_to_string(&certificate).with_context(|| format!("reading {}", certificate.display()))?;
            let d = parse_certificate(&text).with_context(|| format!("parsing {}", certificate.display()))?;
            match check_derivation(&g, &d) {
                CheckResult::Accepted(f) => println!("{f}"),
                CheckResult::Rejected { step, reason } => {
                    eprintln!("rejected at step {step}: {reason}");
                    return Ok(status(false));
                }
            }
        }
        Command::Search { grammar, from, to, bounds } => {
            let g = read_grammar(&grammar)?;
            match derive_search(&g, &read_form(&from)?, &read_form(&to)?, &bounds.bounds()) {
                Ok(Some(d)) => print!("{}", serialize_certificate(&d)),
                Ok(None) => {
                    eprintln!("no derivation within bounds");
                    return Ok(status(false));
                }
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(status(false));
                }
            }
        }
        Command::ClassifyUnion { a, b, form } => {
            let (g1, g2) = (read_grammar(&a)?, read_grammar(&b)?);
            match union_classify(&g1, &g2, &read_form(&form)?) {
                UnionClassification::StartForm => println!("start"),
                UnionClassification::FromFirst(f) => println!("first: {f}"),
                UnionClassification::FromSecond(f) => println!("second: {f}"),
                UnionClassification::NotLifted => {
                    println!("not-lifted");
                    return Ok(status(false));
                }
            }
        }
        Command::DecomposeCat { a, b, form, bounds } => {
            let (g1, g2) = (read_grammar(&a)?, read_grammar(&b)?);
            match cat_decompose(&g1, &g2, &read_form(&form)?, &bounds.bounds()) {
                Ok(Some(dec)) => {
                    println!("first: {}", dec.first);
                    println!("second: {}", dec.second);
                    print!("# first witness\n{}", serialize_certificate(&dec.first_witness));
                    print!("# second witness\n{}", serialize_certificate(&dec.second_witness));
                }
                Ok(None) => {
                    println!("absent");
                    return Ok(status(false));
                }
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(status(false));
                }
            }
        }
        Command::DecomposeStar { a, form, bounds } => {
            let g = read_grammar(&a)?;
            match clo_decompose(&g, &read_form(&form)?, &bounds.bounds()) {
                Ok(Some(CloDecomposition::EmptyForm)) => println!("empty"),
                Ok(Some(CloDecomposition::StartForm)) => println!("start"),
                Ok(Some(CloDecomposition::Split { prefix, tail, prefix_witness, tail_witness })) => {
                    println!("prefix: {prefix}");
                    println!("tail: {tail}");
                    print!("# prefix witness\n{}", serialize_certificate(&prefix_witness));
                    print!("# tail witness\n{}", serialize_certificate(&tail_witness));
                }
                Ok(None) => {
                    println!("absent");
                    return Ok(status(false));
                }
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(status(false));
                }
            }
        }
        Command::Verify { corpus, random, seed, bounds, mutant, counterexamples } => {
            let corpus = match (corpus, random) {
                (Some(dir), _) => load_corpus(&dir)?,
                (None, Some(n)) => random_corpus(&GenParams::default().with_seed(seed), n),
                (None, None) => fixed_corpus(),
            };
            let summary = run_suite(&SuiteConfig { corpus, bounds: bounds.bounds(), mutant });
            print!("{}", summary.render());
            if let Some(dir) = counterexamples {
                for (i, r) in summary.reports.iter().enumerate() {
                    if let Outcome::Fail(cx) = &r.outcome {
                        cx.write_to(&dir, &format!("{:03}-{}", i, r.id))?;
                    }
                }
            }
            return Ok(status(summary.all_passed()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
