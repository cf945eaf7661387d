//! `corpusforge`: corpus cleaning, statistics, validation-subset selection,
//! tokenizer, language identification and span corruption from the shell.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use corpusforge_core::corpus_io::{read_json_lines, Manifest, ShardReader, DEFAULT_MAX_RECORD_BYTES};
use corpusforge_core::document_filters::DEFAULT_LANG_THRESHOLD;
use corpusforge_core::langid::{train_profile, Detector, LangIdError};
use corpusforge_core::pipeline::{self, DedupMode, MalformedPolicy, PipelineConfig, DEFAULT_VALIDATION_SIZE};
use corpusforge_core::resources::ResourceDir;
use corpusforge_core::span_corruption::{corrupt_batch, CorruptionConfig, CorruptionError};
use corpusforge_core::tokenizer::{TokenizerError, UnigramTrainer, UnigramVocab, WordCountsBuilder};

#[derive(Parser)]
#[command(name = "corpusforge", version, about = "Web-corpus cleaning and tokenization toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean the shards of a manifest into an output directory.
    Clean(CleanArgs),
    /// Count documents and words of a (cleaned) corpus.
    Stats(StatsArgs),
    /// Pick the fixed validation subset by seeded reservoir sampling.
    SelectValid(SelectArgs),
    /// Unigram tokenizer.
    #[command(subcommand)]
    Tok(TokCommand),
    /// Character n-gram language identification.
    #[command(subcommand)]
    Langid(LangidCommand),
    /// Turn token sequences into span-corruption examples.
    Corrupt(CorruptArgs),
}

#[derive(Args)]
struct CleanArgs {
    /// Manifest: one shard path per line, relative to the manifest.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_LANG_THRESHOLD)]
    lang_threshold: f64,
    /// `doc` drops later documents sharing a three-sentence window; `off` disables it.
    #[arg(long, default_value = "doc")]
    dedup: DedupMode,
    #[arg(long)]
    badwords: Option<PathBuf>,
    #[arg(long)]
    boilerplate: Option<PathBuf>,
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Directory of `*.json` language profiles.
    #[arg(long)]
    profiles: Option<PathBuf>,
    /// `skip` counts malformed lines; `abort` stops the run on the first one.
    #[arg(long, default_value = "skip")]
    on_malformed: MalformedPolicy,
    #[arg(long, default_value_t = DEFAULT_MAX_RECORD_BYTES)]
    max_record_bytes: usize,
    /// Write gzip-compressed output shards.
    #[arg(long)]
    gzip: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Manifest of the corpus, e.g. the `manifest.txt` written by `clean`.
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = DEFAULT_VALIDATION_SIZE)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSON lines; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TokCommand {
    /// Train a vocabulary from text files.
    Train(TokTrainArgs),
    /// Encode text lines into `{"ids": [...]}` lines.
    Encode(TokEncodeArgs),
    /// Decode `{"ids": [...]}` lines back into text.
    Decode(TokDecodeArgs),
}

#[derive(Args)]
struct TokTrainArgs {
    /// Training files (one text per line, or JSON lines with `--jsonl`).
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    /// Read the `text` field of JSON lines (gzip accepted).
    #[arg(long)]
    jsonl: bool,
    #[arg(long)]
    out: PathBuf,
    /// Total vocabulary size, reserved ids included.
    #[arg(long, default_value_t = 32_000)]
    vocab_size: usize,
    #[arg(long, default_value_t = 8)]
    max_piece_chars: usize,
    #[arg(long, default_value_t = 2)]
    em_iterations: usize,
    #[arg(long, default_value_t = 0.75)]
    keep_fraction: f64,
    /// Multi-char seed candidates (default 20x the vocab size).
    #[arg(long)]
    seed_size: Option<usize>,
    #[arg(long)]
    no_byte_fallback: bool,
}

#[derive(Args)]
struct TokEncodeArgs {
    #[arg(long)]
    vocab: PathBuf,
    /// Input file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    jsonl: bool,
    /// Append the eos id to every sequence.
    #[arg(long)]
    eos: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TokDecodeArgs {
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LangidCommand {
    /// Train a language profile from a text file.
    Train(LangidTrainArgs),
    /// Detect the language of every input line.
    Detect(LangidDetectArgs),
}

#[derive(Args)]
struct LangidTrainArgs {
    #[arg(long)]
    lang: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LangidDetectArgs {
    /// Directory of `*.json` profiles; built-in profiles when absent.
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Read the `text` field of JSON lines.
    #[arg(long)]
    jsonl: bool,
    /// Print the posterior of every language.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct CorruptArgs {
    /// JSON lines with an `ids` field; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.15)]
    rate: f64,
    #[arg(long, default_value_t = 3.0)]
    mean_span_len: f64,
    #[arg(long, default_value_t = 512)]
    max_seq_len: usize,
    /// Cut longer sequences to `--max-seq-len` instead of failing.
    #[arg(long)]
    truncate: bool,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

type Outcome = Result<(), Failure>;

fn config(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, err: err.into() }
}

fn data(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: err.into() }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Clean(a) => clean(a),
        Command::Stats(a) => stats(a),
        Command::SelectValid(a) => select_valid(a),
        Command::Tok(TokCommand::Train(a)) => tok_train(a),
        Command::Tok(TokCommand::Encode(a)) => tok_encode(a),
        Command::Tok(TokCommand::Decode(a)) => tok_decode(a),
        Command::Langid(LangidCommand::Train(a)) => langid_train(a),
        Command::Langid(LangidCommand::Detect(a)) => langid_detect(a),
        Command::Corrupt(a) => corrupt(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>, Failure> {
    match path {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display())).map_err(config)?;
            Ok(Box::new(BufReader::new(f)))
        }
        None => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display())).map_err(config)?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_err(e: io::Error) -> Failure {
    data(anyhow!(e).context("writing output"))
}

/// Text of every input unit: lines, or the `text` field of JSON lines.
fn for_each_text(path: Option<&Path>, jsonl: bool, mut f: impl FnMut(&str) -> Outcome) -> Outcome {
    if jsonl {
        let Some(p) = path else {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map_err(data)?;
            for doc in read_json_lines::<serde_json::Value, _>(buf.as_bytes()) {
                let doc = doc.map_err(|e| data(anyhow!(e)))?;
                let text = doc["text"].as_str().ok_or_else(|| data(anyhow!("record without a text field")))?;
                f(text)?;
            }
            return Ok(());
        };
        let reader = ShardReader::open(p, DEFAULT_MAX_RECORD_BYTES).map_err(config)?;
        for item in reader {
            let (_, doc) = item.map_err(data)?;
            f(&doc.text)?;
        }
        return Ok(());
    }
    for line in open_input(path)?.lines() {
        f(&line.map_err(data)?)?;
    }
    Ok(())
}

fn clean(a: CleanArgs) -> Outcome {
    let cfg = PipelineConfig {
        workers: a.workers,
        lang_threshold: a.lang_threshold,
        dedup: a.dedup,
        resources: ResourceDir::from_env(),
        abbreviations: a.abbreviations,
        badwords: a.badwords,
        boilerplate: a.boilerplate,
        profiles: a.profiles,
        on_malformed: a.on_malformed,
        max_record_bytes: a.max_record_bytes,
        gzip: a.gzip,
        ..PipelineConfig::new(a.manifest, a.out)
    };
    match pipeline::run(&cfg) {
        Ok(stats) => {
            eprint!("{}", stats.summary());
            Ok(())
        }
        Err(e) if e.is_config() => Err(config(e)),
        Err(e) => Err(data(e)),
    }
}

fn load_manifest(path: &Path) -> Result<Manifest, Failure> {
    Manifest::load(path).map_err(|e| config(anyhow!(e).context("loading manifest")))
}

fn stats(a: StatsArgs) -> Outcome {
    let manifest = load_manifest(&a.manifest)?;
    let mut documents = 0u64;
    let mut words = 0u64;
    let mut bytes = 0u64;
    for shard in &manifest.shards {
        let reader = ShardReader::open(&shard.path, DEFAULT_MAX_RECORD_BYTES).map_err(config)?;
        for item in reader {
            let (_, doc) = item.map_err(data)?;
            documents += 1;
            words += corpusforge_core::segmenter::count_words(&doc.text).0 as u64;
            bytes += doc.text.len() as u64;
        }
    }
    let out = json!({ "shards": manifest.len(), "documents": documents, "words": words, "bytes": bytes });
    println!("{}", serde_json::to_string_pretty(&out).expect("plain JSON"));
    Ok(())
}

fn select_valid(a: SelectArgs) -> Outcome {
    let manifest = load_manifest(&a.manifest)?;
    let subset = pipeline::select_validation_subset(&manifest, a.size, a.seed).map_err(|e| {
        if e.is_config() {
            config(e)
        } else {
            data(e)
        }
    })?;
    let mut out = open_output(a.out.as_deref())?;
    for d in &subset {
        serde_json::to_writer(&mut out, d).map_err(data)?;
        out.write_all(b"\n").map_err(write_err)?;
    }
    out.flush().map_err(write_err)?;
    eprintln!("selected {} documents", subset.len());
    Ok(())
}

fn tokenizer_failure(e: TokenizerError) -> Failure {
    match e {
        TokenizerError::InvalidConfig(_) | TokenizerError::VocabFormat { .. } | TokenizerError::Io(_) => config(e),
        _ => data(e),
    }
}

fn tok_train(a: TokTrainArgs) -> Outcome {
    let trainer = UnigramTrainer {
        vocab_size: a.vocab_size,
        seed_size: a.seed_size,
        max_piece_chars: a.max_piece_chars,
        keep_fraction: a.keep_fraction,
        em_iterations: a.em_iterations,
        byte_fallback: !a.no_byte_fallback,
    };
    let mut builder = WordCountsBuilder::default();
    for path in &a.inputs {
        for_each_text(Some(path), a.jsonl, |t| {
            builder.add_text(t);
            Ok(())
        })?;
    }
    let corpus = builder.finish();
    eprintln!("{} distinct words, {} total", corpus.len(), corpus.total());
    let vocab = trainer.train(&corpus).map_err(tokenizer_failure)?;
    vocab.save(&a.out).map_err(tokenizer_failure)?;
    eprintln!("wrote {} pieces to {}", vocab.len(), a.out.display());
    Ok(())
}

fn load_vocab(path: &Path) -> Result<UnigramVocab, Failure> {
    UnigramVocab::load(path).map_err(config)
}

fn tok_encode(a: TokEncodeArgs) -> Outcome {
    let vocab = load_vocab(&a.vocab)?;
    let mut out = open_output(a.out.as_deref())?;
    for_each_text(a.input.as_deref(), a.jsonl, |t| {
        let mut ids = vocab.encode(t).map_err(tokenizer_failure)?.piece_ids;
        if a.eos {
            ids.push(corpusforge_core::tokenizer::EOS_ID);
        }
        serde_json::to_writer(&mut out, &json!({ "ids": ids })).map_err(data)?;
        out.write_all(b"\n").map_err(write_err)
    })?;
    out.flush().map_err(write_err)
}

#[derive(serde::Deserialize)]
struct IdsRecord {
    ids: Vec<u32>,
}

fn tok_decode(a: TokDecodeArgs) -> Outcome {
    let vocab = load_vocab(&a.vocab)?;
    let input = open_input(a.input.as_deref())?;
    let mut out = open_output(a.out.as_deref())?;
    for rec in read_json_lines::<IdsRecord, _>(input) {
        let rec = rec.map_err(|e| data(anyhow!(e)))?;
        let text = vocab.decode(&rec.ids).map_err(tokenizer_failure)?;
        writeln!(out, "{text}").map_err(write_err)?;
    }
    out.flush().map_err(write_err)
}

fn langid_train(a: LangidTrainArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display())).map_err(config)?;
    let profile = train_profile(&a.lang, &text).map_err(data)?;
    profile.save(&a.out).with_context(|| format!("writing {}", a.out.display())).map_err(data)?;
    eprintln!("wrote profile for {} to {}", a.lang, a.out.display());
    Ok(())
}

fn langid_detect(a: LangidDetectArgs) -> Outcome {
    let detector = match &a.profiles {
        Some(dir) => Detector::from_profile_dir(dir),
        None => Detector::from_resources(&ResourceDir::from_env()),
    }
    .map_err(config)?;
    let mut out = open_output(None)?;
    for_each_text(a.input.as_deref(), a.jsonl, |t| {
        let rec = match detector.posteriors(t) {
            Ok(post) => {
                let (lang, prob) = post.iter().fold(&post[0], |best, p| if p.1 > best.1 { p } else { best });
                let mut rec = json!({ "lang": lang, "prob": prob });
                if a.all {
                    rec["posteriors"] = post.iter().map(|(l, p)| (l.clone(), json!(p))).collect::<serde_json::Map<_, _>>().into();
                }
                rec
            }
            Err(e @ LangIdError::LowConfidence(_)) => json!({ "lang": null, "prob": 0.0, "error": e.to_string() }),
            Err(e) => return Err(data(e)),
        };
        serde_json::to_writer(&mut out, &rec).map_err(data)?;
        out.write_all(b"\n").map_err(write_err)
    })?;
    out.flush().map_err(write_err)
}

fn corrupt(a: CorruptArgs) -> Outcome {
    const BATCH: usize = 4096;
    let cfg = CorruptionConfig {
        corruption_rate: a.rate,
        mean_span_len: a.mean_span_len,
        max_seq_len: a.max_seq_len,
        seed: a.seed,
    };
    cfg.validate().map_err(config)?;
    let input = open_input(a.input.as_deref())?;
    let mut out = open_output(a.out.as_deref())?;
    let mut batch: Vec<Vec<u32>> = Vec::with_capacity(BATCH);
    let mut done = 0u64;
    let mut flush = |batch: &mut Vec<Vec<u32>>, out: &mut Box<dyn Write>| -> Outcome {
        for (i, ex) in corrupt_batch(batch, &cfg, done).into_iter().enumerate() {
            let ex = ex.map_err(|e: CorruptionError| data(anyhow!(e).context(format!("sequence {}", done + i as u64 + 1))))?;
            serde_json::to_writer(&mut *out, &ex).map_err(data)?;
            out.write_all(b"\n").map_err(write_err)?;
        }
        done += batch.len() as u64;
        batch.clear();
        Ok(())
    };
    for rec in read_json_lines::<IdsRecord, _>(input) {
        let mut ids = rec.map_err(|e| data(anyhow!(e)))?.ids;
        if a.truncate {
            ids.truncate(a.max_seq_len);
        }
        batch.push(ids);
        if batch.len() == BATCH {
            flush(&mut batch, &mut out)?;
        }
    }
    flush(&mut batch, &mut out)?;
    out.flush().map_err(write_err)
}
