use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use valenz_core::embedding::{load_vectors, VectorSpace};
use valenz_core::export::{export_csv, export_json};
use valenz_core::generator::enumerate_structures;
use valenz_core::lexicon::{validate_bundle, AdjectivePosition, ClassId, Language};
use valenz_core::ontology::{classify_adjectives, expand_candidates, rank_prototypes, FileResource};
use valenz_core::query::{
    parse_pair, run_generate, run_validate, GenerateRequest, ValidateMode, ValidateRequest,
};
use valenz_core::{load_bundle, Lexicon};
use valenz_service::{fresh_seed, router, AppState, CorsOrigin};

#[derive(Parser)]
#[command(name = "valenz", version, about = "Valency-driven noun phrase generation and checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BundleArg {
    /// Lexicon bundle (JSON); the built-in sample bundle when omitted.
    #[arg(long, env = "VALENZ_BUNDLE")]
    bundle: Option<PathBuf>,
}

impl BundleArg {
    fn load(&self) -> anyhow::Result<Lexicon> {
        match &self.bundle {
            Some(p) => {
                let f = File::open(p).with_context(|| format!("cannot open bundle {}", p.display()))?;
                load_bundle(f).with_context(|| format!("cannot load bundle {}", p.display()))
            }
            None => Ok(Lexicon::sample()),
        }
    }
}

#[derive(Args)]
struct NounSense {
    #[arg(long)]
    lang: Language,
    #[arg(long)]
    noun: String,
    #[arg(long)]
    sense: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PhraseFormat {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Position {
    Pre,
    Post,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long, env = "VALENZ_VECTORS")]
        vectors: Option<PathBuf>,
        #[arg(long, env = "VALENZ_HOST", default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "VALENZ_PORT", default_value_t = 8080)]
        port: u16,
        /// Allowed browser origin, `*` for any.
        #[arg(long, env = "VALENZ_CORS_ORIGIN", default_value = "*")]
        cors_origin: String,
    },
    /// Generate phrases for a class selection.
    Generate {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        target: NounSense,
        /// Slot class, as `slot=class.path`; repeatable.
        #[arg(long = "select", value_parser = parse_select)]
        select: Vec<(String, String)>,
        #[arg(long)]
        template: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Rank by embedding plausibility and keep the top `limit`.
        #[arg(long)]
        filter: bool,
        #[arg(long, env = "VALENZ_VECTORS")]
        vectors: Option<PathBuf>,
        /// Embed the phrases in this sentence frame.
        #[arg(long)]
        frame: Option<String>,
        #[arg(long, value_enum, default_value_t = PhraseFormat::Text)]
        format: PhraseFormat,
    },
    /// Check a phrase (or a clause with --sentence) against the lexicon.
    Validate {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        lang: Language,
        #[arg(long)]
        sentence: bool,
        text: String,
    },
    /// List the structures a class selection yields.
    Structures {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        target: NounSense,
        #[arg(long = "select", value_parser = parse_select)]
        select: Vec<(String, String)>,
    },
    /// Bundle maintenance.
    Lexicon {
        #[command(subcommand)]
        command: LexiconCommand,
    },
    /// Rank slot candidates by co-occurrence frequency.
    Rank {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        target: NounSense,
        #[arg(long)]
        slot: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Role distribution of a noun's annotated adjectives.
    Adjstats {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        lang: Language,
        #[arg(long)]
        noun: String,
        #[arg(long)]
        sense: Option<String>,
        #[arg(long, value_enum)]
        position: Position,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Subcommand)]
enum LexiconCommand {
    /// Report integrity and coverage problems.
    Check {
        #[command(flatten)]
        bundle: BundleArg,
    },
    /// Propose new slot candidates from an external word list.
    Expand {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        resource: PathBuf,
        #[arg(long, default_value = "es")]
        lang: Language,
        #[arg(long)]
        noun: String,
        #[arg(long)]
        sense: String,
        #[arg(long)]
        slot: String,
        #[arg(long)]
        class: String,
    },
}

fn parse_select(s: &str) -> Result<(String, String), String> {
    parse_pair(s).map_err(|e| e.to_string())
}

fn load_vectors_file(path: &Path) -> anyhow::Result<VectorSpace> {
    let f = File::open(path).with_context(|| format!("cannot open vectors {}", path.display()))?;
    load_vectors(f).with_context(|| format!("cannot load vectors {}", path.display()))
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Exit status for a command that ran to completion.
enum Outcome {
    Ok,
    Rejected,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Serve {
            bundle,
            vectors,
            host,
            port,
            cors_origin,
        } => {
            let lex = bundle.load()?;
            let vs = vectors.as_deref().map(load_vectors_file).transpose()?;
            let app = router(AppState::new(lex, vs), &CorsOrigin::parse(&cors_origin)).map_err(anyhow::Error::msg)?;
            let addr: SocketAddr = format!("{host}:{port}").parse().context("invalid bind address")?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                axum::serve(listener, app).await
            })?;
            Ok(Outcome::Ok)
        }
        Command::Generate {
            bundle,
            target,
            select,
            template,
            seed,
            limit,
            filter,
            vectors,
            frame,
            format,
        } => {
            let lex = bundle.load()?;
            let vs = match (filter, vectors) {
                (true, Some(p)) => Some(load_vectors_file(&p)?),
                (true, None) => anyhow::bail!("--filter needs --vectors"),
                (false, _) => None,
            };
            let req = GenerateRequest {
                language: target.lang,
                noun: target.noun,
                sense_id: target.sense,
                class_selection: select.into_iter().collect::<BTreeMap<_, _>>(),
                template_id: template,
                seed,
                limit,
                use_embedding_filter: filter,
                frame_id: frame,
            };
            let resp = run_generate(&lex, vs.as_ref(), &req, fresh_seed())?;
            if seed.is_none() {
                eprintln!("seed {}", resp.meta.seed);
            }
            let mut out = std::io::stdout().lock();
            match format {
                PhraseFormat::Json => out.write_all(export_json(&resp.export_rows()).as_bytes())?,
                PhraseFormat::Csv => out.write_all(export_csv(&resp.export_rows()).as_bytes())?,
                PhraseFormat::Text => {
                    for p in &resp.phrases {
                        writeln!(out, "{}", p.surface)?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Validate {
            bundle,
            lang,
            sentence,
            text,
        } => {
            let lex = bundle.load()?;
            let req = ValidateRequest {
                language: lang,
                text,
                mode: if sentence { ValidateMode::Sentence } else { ValidateMode::Phrase },
            };
            let res = run_validate(&lex, &req);
            print_json(&res)?;
            if res.accepted() {
                Ok(Outcome::Ok)
            } else {
                let v = serde_json::to_value(&res)?;
                for d in v["diagnoses"].as_array().into_iter().flatten() {
                    eprintln!("{}: {}", d["rule"].as_str().unwrap_or("?"), d["message"].as_str().unwrap_or(""));
                }
                if let Some(np) = v.get("np") {
                    for d in np["diagnoses"].as_array().into_iter().flatten() {
                        eprintln!("{}: {}", d["rule"].as_str().unwrap_or("?"), d["message"].as_str().unwrap_or(""));
                    }
                }
                Ok(Outcome::Rejected)
            }
        }
        Command::Structures { bundle, target, select } => {
            let lex = bundle.load()?;
            let schema = lex.schema(target.lang, &target.noun, &target.sense)?;
            let sel = valenz_core::generator::resolve_selection(
                schema,
                select.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            )?;
            let mut out = std::io::stdout().lock();
            for t in enumerate_structures(&lex, target.lang, &target.noun, &target.sense, &sel)? {
                writeln!(out, "{}\t{}", t.id, t.standard_example)?;
            }
            Ok(Outcome::Ok)
        }
        Command::Lexicon {
            command: LexiconCommand::Check { bundle },
        } => {
            let lex = bundle.load()?;
            let report = validate_bundle(&lex);
            let mut out = std::io::stdout().lock();
            for f in &report.findings {
                writeln!(out, "{}\t{}\t{}", f.code, f.subject, f.message)?;
            }
            if report.is_clean() {
                let nouns: usize = lex.languages().iter().map(|l| lex.nouns(*l).count()).sum();
                writeln!(out, "ok: {nouns} nouns, {} frames", lex.frames().len())?;
                Ok(Outcome::Ok)
            } else {
                eprintln!("{} finding(s)", report.findings.len());
                Ok(Outcome::Rejected)
            }
        }
        Command::Lexicon {
            command:
                LexiconCommand::Expand {
                    bundle,
                    resource,
                    lang,
                    noun,
                    sense,
                    slot,
                    class,
                },
        } => {
            let lex = bundle.load()?;
            let res = FileResource::open(&resource)?;
            let found = expand_candidates(&lex, &res, lang, &noun, &sense, &slot, &ClassId::new(class))?;
            print_json(&found)?;
            Ok(Outcome::Ok)
        }
        Command::Rank {
            bundle,
            target,
            slot,
            format,
        } => {
            let lex = bundle.load()?;
            let ranked = rank_prototypes(&lex, target.lang, &target.noun, &target.sense, &slot)?;
            match format {
                ReportFormat::Json => print_json(&ranked)?,
                ReportFormat::Text => {
                    let mut out = std::io::stdout().lock();
                    for p in &ranked {
                        writeln!(out, "{} {}", p.lemma, p.cooccurrence_count)?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Adjstats {
            bundle,
            lang,
            noun,
            sense,
            position,
            format,
        } => {
            let lex = bundle.load()?;
            let pos = match position {
                Position::Pre => AdjectivePosition::Prenominal,
                Position::Post => AdjectivePosition::Postnominal,
            };
            let dist = classify_adjectives(&lex, lang, &noun, sense.as_deref(), pos)?;
            match format {
                ReportFormat::Json => print_json(&dist)?,
                ReportFormat::Text => {
                    let mut rows: Vec<(&String, &usize)> = dist.counts.iter().collect();
                    rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
                    let mut out = std::io::stdout().lock();
                    for (label, n) in rows {
                        writeln!(out, "{label} {n} {}%", dist.percentages[label])?;
                    }
                    writeln!(out, "total {}", dist.total)?;
                }
            }
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
