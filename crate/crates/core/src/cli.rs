//! The `axplr` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Results go to the
//! output stream or files, diagnostics to the error stream.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{aggregate_stats, curve_to_csv, framework_stats, metrics, sufficiency_curve, FlipFilter, FrameworkPair, TargetKind};
use crate::corpus::{load_corpus, load_lexicon, save_corpus, Dataset, Document};
use crate::error::{Error, Result};
use crate::explain::{explain_document, render_batch, Format, Method};
use crate::gp::{gp_summary, RandomFrameworkSpec};
use crate::miner::{mine_patterns, MinerConfig};
use crate::pattern::{load_patterns, save_patterns};
use crate::plr::{load_model, save_model, train, PlrModel, TrainConfig};
use crate::qbaf::{build_qbafc, compute_strengths, framework_to_dot, framework_to_json, postprocess, Variant};

pub const SEED_ENV: &str = "AXPLR_SEED";
pub const DEFAULT_SEED: u64 = 13;

#[derive(Parser, Debug)]
#[command(name = "axplr", about = "Pattern-based logistic regression with argumentative explanations")]
struct Cli {
    /// Worker threads for batch work (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Add lexicon attributes to every token of a corpus.
    Annotate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "lexicon")]
        lexicons: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mine candidate patterns from a labeled corpus.
    Mine(MineArgs),
    /// Train a model on a corpus and a pattern file.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
        learning_rate: f64,
        #[arg(long, default_value_t = TrainConfig::default().l2_lambda)]
        l2_lambda: f64,
        #[arg(long, default_value_t = TrainConfig::default().epochs)]
        epochs: usize,
    },
    /// Explain predictions for the documents of a corpus file.
    Explain {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        docs: PathBuf,
        #[arg(long, default_value = "shallow")]
        method: String,
        #[arg(long, default_value = "bottom_up")]
        variant: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "json")]
        format: String,
        /// Only explain the document with this id.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Framework statistics grouped by confusion cell.
    Stats {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "bottom_up")]
        variant: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Sufficiency curves as CSV files, one per variant, target and flip filter.
    Sufficiency {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Group property summary over random frameworks.
    CheckGps {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the framework of one document as DOT or JSON.
    Graph {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        docs: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value = "bottom_up")]
        variant: String,
        /// Dump the post-processed framework.
        #[arg(long)]
        post: bool,
        #[arg(long, default_value = "dot")]
        format: String,
    },
}

#[derive(Args, Debug)]
struct MineArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = MinerConfig::default().num_patterns)]
    num_patterns: usize,
    #[arg(long, default_value_t = MinerConfig::default().gap_budget)]
    gaps: usize,
    #[arg(long, default_value_t = MinerConfig::default().max_slots)]
    max_slots: usize,
    #[arg(long, default_value_t = MinerConfig::default().max_attrs_per_pattern)]
    max_attrs: usize,
    #[arg(long, default_value_t = MinerConfig::default().alphabet_size)]
    alphabet: usize,
    #[arg(long, default_value_t = MinerConfig::default().beam_width)]
    beam: usize,
    #[arg(long, default_value_t = MinerConfig::default().min_support)]
    min_support: usize,
    #[arg(long)]
    max_docs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn parse_flag<T: std::str::FromStr<Err = Error>>(value: &str) -> Outcome<T> {
    value.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn seed(flag: Option<u64>) -> Outcome<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn require_file(path: &Path) -> Outcome {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Data(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        )))
    }
}

fn require_parent(path: &Path) -> Outcome {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(Failure::Data(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such directory"),
        ))),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::Data(Error::io(path, e)))
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> Outcome {
    out.write_all(bytes)
        .map_err(|e| Failure::Data(Error::io("<stdout>", e)))
}

fn select(data: Dataset, id: Option<&str>) -> Outcome<Vec<Document>> {
    let mut docs = data.documents;
    if let Some(id) = id {
        docs.retain(|d| d.id == id);
        if docs.is_empty() {
            return Err(Failure::Data(Error::Format(format!("no document with id `{id}`"))));
        }
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

fn labeled(model: &PlrModel, data: &Dataset, variant: Variant) -> Result<Vec<(FrameworkPair, u8, u8)>> {
    let labels = data.labels()?;
    Ok(data
        .documents
        .par_iter()
        .zip(labels)
        .map(|(doc, truth)| {
            let pre = build_qbafc(model, doc, variant);
            let s = compute_strengths(&pre).expect("extracted frameworks are acyclic");
            let (post, post_strengths) = postprocess(&pre, &s).expect("strengths cover every argument");
            let predicted = model.predict(doc).class;
            (
                FrameworkPair {
                    pre,
                    post,
                    post_strengths,
                },
                truth,
                predicted,
            )
        })
        .collect())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Annotate { corpus, lexicons, out: dest } => {
            require_file(&corpus)?;
            for l in &lexicons {
                require_file(l)?;
            }
            require_parent(&dest)?;
            let data = load_corpus(&corpus)?;
            let lex = lexicons.iter().map(load_lexicon).collect::<Result<Vec<_>>>()?;
            save_corpus(&data.annotate(&lex), &dest)?;
        }
        Command::Mine(args) => {
            require_file(&args.corpus)?;
            require_parent(&args.out)?;
            let config = MinerConfig {
                alphabet_size: args.alphabet,
                gap_budget: args.gaps,
                max_slots: args.max_slots,
                max_attrs_per_pattern: args.max_attrs,
                num_patterns: args.num_patterns,
                beam_width: args.beam,
                min_support: args.min_support,
                distinct_coverage: true,
                max_docs: args.max_docs,
                seed: seed(args.seed)?,
            };
            let data = load_corpus(&args.corpus)?;
            let patterns = mine_patterns(&data, &config)?;
            save_patterns(&patterns, &args.out)?;
        }
        Command::Train {
            corpus,
            patterns,
            out: dest,
            learning_rate,
            l2_lambda,
            epochs,
        } => {
            require_file(&corpus)?;
            require_file(&patterns)?;
            require_parent(&dest)?;
            let data = load_corpus(&corpus)?;
            let pats = load_patterns(&patterns)?;
            let config = TrainConfig {
                learning_rate,
                l2_lambda,
                epochs,
            };
            let trained = train(&data, &pats, &config).map_err(|e| match e {
                Error::InvalidHyperparameter(m) => Failure::Usage(m),
                other => Failure::Data(other),
            })?;
            save_model(&trained.model, &dest)?;
        }
        Command::Explain {
            model,
            docs,
            method,
            variant,
            k,
            format,
            id,
            out: dest,
        } => {
            let method: Method = parse_flag(&method)?;
            let variant: Variant = parse_flag(&variant)?;
            let format: Format = parse_flag(&format)?;
            require_file(&model)?;
            require_file(&docs)?;
            if let Some(d) = &dest {
                require_parent(d)?;
            }
            let model = load_model(&model)?;
            let docs = select(load_corpus(&docs)?, id.as_deref())?;
            let explanations: Vec<_> = docs
                .par_iter()
                .map(|d| explain_document(&model, d, method, variant, k))
                .collect();
            let bytes = render_batch(&explanations, format);
            match dest {
                Some(d) => write_file(&d, &bytes)?,
                None => emit(out, &bytes)?,
            }
        }
        Command::Stats {
            model,
            corpus,
            variant,
            format,
        } => {
            let variant: Variant = parse_flag(&variant)?;
            let json = match format.as_str() {
                "text" => false,
                "json" => true,
                other => return usage(format!("unknown format `{other}`")),
            };
            require_file(&model)?;
            require_file(&corpus)?;
            let model = load_model(&model)?;
            let data = load_corpus(&corpus)?;
            let rows = labeled(&model, &data, variant)?;
            let pre = aggregate_stats(&rows.iter().map(|(f, t, p)| (framework_stats(&f.pre), *t, *p)).collect::<Vec<_>>());
            let post = aggregate_stats(&rows.iter().map(|(f, t, p)| (framework_stats(&f.post), *t, *p)).collect::<Vec<_>>());
            let pairs: Vec<(u8, u8)> = rows.iter().map(|r| (r.1, r.2)).collect();
            let m = if pairs.is_empty() { None } else { Some(metrics(&pairs)?) };
            let text = if json {
                serde_json::to_string_pretty(&serde_json::json!({
                    "variant": variant,
                    "documents": rows.len(),
                    "pre": pre,
                    "post": post,
                    "metrics": m,
                }))
                .expect("reports always serialize")
                    + "\n"
            } else {
                let mut t = format!("{variant} frameworks over {} documents\n\n", rows.len());
                t.push_str("before post-processing\n");
                t.push_str(&pre.to_table());
                t.push_str("\nafter post-processing\n");
                t.push_str(&post.to_table());
                if let Some(m) = m {
                    t.push_str(&format!(
                        "\naccuracy {:.4}  macro F1 {:.4}  F1(1) {:.4}  F1(0) {:.4}\n",
                        m.accuracy, m.macro_f1, m.per_class[1].f1, m.per_class[0].f1
                    ));
                }
                t
            };
            emit(out, text.as_bytes())?;
        }
        Command::Sufficiency { model, corpus, out_dir } => {
            require_file(&model)?;
            require_file(&corpus)?;
            fs::create_dir_all(&out_dir).map_err(|e| Failure::Data(Error::io(&out_dir, e)))?;
            let model = load_model(&model)?;
            let data = load_corpus(&corpus)?;
            for variant in Variant::ALL {
                let pairs: Vec<FrameworkPair> = labeled(&model, &data, variant)?.into_iter().map(|r| r.0).collect();
                for target in TargetKind::ALL {
                    for flip in FlipFilter::ALL {
                        let curve = sufficiency_curve(&pairs, target, flip);
                        let name = format!("{}_{}_{}.csv", variant.name(), target.name(), flip.name());
                        let path = out_dir.join(&name);
                        write_file(&path, curve_to_csv(&curve).as_bytes())?;
                        emit(out, format!("{}\n", path.display()).as_bytes())?;
                    }
                }
            }
        }
        Command::CheckGps {
            trials,
            seed: s,
            format,
            out: dest,
        } => {
            let json = match format.as_str() {
                "text" => false,
                "json" => true,
                other => return usage(format!("unknown format `{other}`")),
            };
            if let Some(d) = &dest {
                require_parent(d)?;
            }
            let spec = RandomFrameworkSpec {
                seed: seed(s)?,
                ..RandomFrameworkSpec::default()
            };
            let summary = gp_summary(&spec, trials)?;
            let text = if json { summary.to_json() + "\n" } else { summary.to_table() };
            match dest {
                Some(d) => write_file(&d, text.as_bytes())?,
                None => emit(out, text.as_bytes())?,
            }
        }
        Command::Graph {
            model,
            docs,
            id,
            variant,
            post,
            format,
        } => {
            let variant: Variant = parse_flag(&variant)?;
            let dot = match format.as_str() {
                "dot" => true,
                "json" => false,
                other => return usage(format!("unknown format `{other}`")),
            };
            require_file(&model)?;
            require_file(&docs)?;
            let model = load_model(&model)?;
            let data = load_corpus(&docs)?;
            let doc = match id {
                Some(id) => select(data, Some(&id))?.remove(0),
                None => data.documents.into_iter().next().ok_or(Failure::Data(Error::EmptyInput))?,
            };
            let mut fw = build_qbafc(&model, &doc, variant);
            let mut s = compute_strengths(&fw)?;
            if post {
                (fw, s) = postprocess(&fw, &s)?;
            }
            let text = if dot {
                framework_to_dot(&fw, Some(&s))
            } else {
                framework_to_json(&fw, Some(&s)) + "\n"
            };
            emit(out, text.as_bytes())?;
        }
    }
    Ok(())
}

/// Runs the command line on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if args.len() <= 1 {
        let mut cmd = <Cli as clap::CommandFactory>::command();
        let _ = writeln!(err, "{}", cmd.render_help());
        return 1;
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            let _ = writeln!(err, "error: --jobs must be positive");
            return 1;
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let result = pool.install(|| {
        let mut buf = Vec::new();
        execute(cli, &mut buf).map(|()| buf)
    });
    match result {
        Ok(buf) => match out.write_all(&buf) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                2
            }
        },
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
