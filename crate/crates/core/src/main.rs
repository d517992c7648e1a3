use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser as ClapParser, Subcommand};

use bastag::batch::parse_batch;
use bastag::bundle::{add_expansion, train_models, ModelBundle, PipelineError};
use bastag::config::Config;
use bastag::eval::{evaluate, read_labeled, write_labeled};
use bastag::lattice::build_lattice;
use bastag::lexicon::Lexicon;
use bastag::ngram::word_tokens;
use bastag::parser::Parser;
use bastag::review::interactive_review;
use bastag::synth::generate_synthetic;

/// Parse building automation point names into tagsets.
#[derive(ClapParser)]
#[command(name = "bastag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model bundle from a lexicon and two corpora.
    Train {
        #[arg(long)]
        lexicon: PathBuf,
        /// One tag phrase per line.
        #[arg(long)]
        phrases: PathBuf,
        /// One equipment name per line.
        #[arg(long)]
        equipment: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// TOML file with configuration values.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Parse point names, one per line, into JSON records.
    Parse {
        #[arg(long)]
        model: PathBuf,
        /// Defaults to standard input.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of parses per line.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Exact-match evaluation on a labelled JSON-lines file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        labeled: PathBuf,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Add an explicit abbreviation and retrain.
    AddExpansion {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        surface: String,
        /// Space-separated tags, e.g. "minimum outside air damper".
        #[arg(long)]
        tags: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Review points interactively, prompting for unknown abbreviations.
    Review {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate labelled synthetic points.
    Synth {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print a transducer in tab-separated text form.
    DumpFst {
        #[arg(long)]
        model: PathBuf,
        /// Print the lattice for this input instead of the tagset transducer.
        #[arg(long)]
        input: Option<String>,
    },
}

fn read_config(path: Option<&Path>) -> Result<Config, PipelineError> {
    let config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| PipelineError::io(p, e))?;
            toml::from_str(&text).map_err(|e| PipelineError::Bundle {
                path: p.display().to_string(),
                message: e.to_string().trim_end().to_string(),
            })?
        }
        None => Config::default(),
    };
    Ok(config.with_env_overrides()?)
}

/// The bundle's parser with runtime overrides from the environment.
fn load_parser(path: &Path) -> Result<(ModelBundle, Parser), PipelineError> {
    let bundle = ModelBundle::load(path)?;
    let config = bundle.config.clone().with_env_overrides()?;
    let parser = bundle.parser()?.with_config(config);
    Ok((bundle, parser))
}

fn create(path: &Path) -> Result<BufWriter<File>, PipelineError> {
    File::create(path).map(BufWriter::new).map_err(|e| PipelineError::io(path, e))
}

fn run(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Train {
            lexicon,
            phrases,
            equipment,
            out,
            config,
        } => {
            let config = read_config(config.as_deref())?;
            let bundle = train_models(&lexicon, &phrases, &equipment, config)?;
            bundle.save(&out)?;
            eprintln!(
                "wrote {} ({} tags, {} word types, {} character types)",
                out.display(),
                bundle.lexicon.tags().len(),
                bundle.word_lm.vocab_size(),
                bundle.char_lm.vocab_size()
            );
        }
        Command::Parse { model, input, k } => {
            if k == 0 {
                return Err(PipelineError::Validation("--k must be at least 1".into()));
            }
            let (_, parser) = load_parser(&model)?;
            let stdout = io::stdout();
            let out = BufWriter::new(stdout.lock());
            let result = match &input {
                Some(p) => {
                    let f = File::open(p).map_err(|e| PipelineError::io(p, e))?;
                    parse_batch(&parser, BufReader::new(f), out, k)
                }
                None => parse_batch(&parser, io::stdin().lock(), out, k),
            };
            let (total, errors) = result.map_err(|e| PipelineError::io(Path::new("<stdout>"), e))?;
            if errors > 0 {
                eprintln!("{errors} of {total} lines could not be parsed");
            }
        }
        Command::Eval { model, labeled, report } => {
            let (_, parser) = load_parser(&model)?;
            let points = read_labeled(&labeled)?;
            let r = evaluate(&parser, &points)?;
            println!("accuracy {:.4} ({}/{})", r.accuracy, r.exact_matches, r.total);
            if !r.oov.is_empty() {
                println!("oov {}", r.oov.join(" "));
            }
            if let Some(path) = report {
                let mut w = create(&path)?;
                let text = serde_json::to_string_pretty(&r).expect("report serializes");
                writeln!(w, "{text}")
                    .and_then(|_| w.flush())
                    .map_err(|e| PipelineError::io(&path, e))?;
            }
        }
        Command::AddExpansion {
            model,
            surface,
            tags,
            out,
        } => {
            let bundle = ModelBundle::load(&model)?;
            let tags = word_tokens(&tags);
            let next = add_expansion(&bundle, &surface.to_lowercase(), &tags)?;
            next.save(&out)?;
            eprintln!("{} -> {} written to {}", surface, tags.join(" "), out.display());
        }
        Command::Review { model, input, out } => {
            let bundle = ModelBundle::load(&model)?;
            let text = std::fs::read_to_string(&input).map_err(|e| PipelineError::io(&input, e))?;
            let inputs: Vec<String> = text.lines().map(str::to_string).filter(|l| !l.is_empty()).collect();
            let stdin = io::stdin();
            let outcome = interactive_review(&bundle, &inputs, stdin.lock(), io::stdout().lock())?;
            outcome.bundle.save(&out)?;
            eprintln!("{} expansions added, bundle written to {}", outcome.added.len(), out.display());
        }
        Command::Synth {
            lexicon,
            n,
            seed,
            out,
            config,
        } => {
            let config = read_config(config.as_deref())?;
            let lexicon = Lexicon::load(&lexicon)?;
            let points = generate_synthetic(&lexicon, n, seed, &config.synth)
                .map_err(|e| PipelineError::Validation(e.to_string()))?;
            std::fs::write(&out, write_labeled(&points)).map_err(|e| PipelineError::io(&out, e))?;
        }
        Command::DumpFst { model, input } => {
            let (_, parser) = load_parser(&model)?;
            let text = match input {
                Some(s) => build_lattice(&s, &parser)?.combined().to_text(),
                None => parser.tagset().fst().to_text(),
            };
            io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| PipelineError::io(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
