use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::candidates::{external_candidates, ngram_candidates, CandidateSource, DEFAULT_MAX_NGRAM};
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::io::{
    parse_alignment_file, parse_conll, parse_marked_sentence, parse_span_records,
    parse_translations, read_text, serialize_conll, serialize_span_records, CorpusDocument,
};
use crate::matching::{
    build_problem, render_matrix, render_solution, solve, solve_bruteforce, Solver,
};
use crate::model::{AlignmentSet, EntitySpan, LabeledSentence, Sentence};
use crate::projection::{assign_marker_labels, project, Method, ProjectionConfig};

use super::config::{parse_candidate_source, parse_max_ngram};
use super::{CandidatesArgs, DirectionArg, InputFlags, ProjectArgs, ReportFormat, SolveArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Labeled source sentences aligned to the target corpus.
    SourceToTarget,
    /// Back-translated marked sentences aligned to the target corpus.
    TargetToTarget,
}

/// Input files for one projection run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputPaths {
    pub direction: Direction,
    pub labeled: Option<PathBuf>,
    pub target: PathBuf,
    pub align: PathBuf,
    pub spans: Option<PathBuf>,
    pub marked: Option<PathBuf>,
    pub translations: Option<PathBuf>,
}

/// A fully resolved `project` invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub config: ProjectionConfig,
    pub inputs: InputPaths,
    pub out: PathBuf,
    pub jobs: usize,
    pub skip_bad_sentences: bool,
}

fn required(path: &Option<PathBuf>, flag: &str, why: &str) -> Result<PathBuf> {
    path.clone()
        .ok_or_else(|| Error::Config(format!("--{flag} is required {why}")))
}

fn existing(path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        })
    }
}

fn uses_external_spans(cfg: &ProjectionConfig) -> bool {
    cfg.method == Method::CandidateMatching && cfg.candidate_source == CandidateSource::ExternalNer
}

impl InputPaths {
    /// Checks that every file the configuration needs was named and exists.
    pub fn resolve(flags: &InputFlags, cfg: &ProjectionConfig) -> Result<InputPaths> {
        let direction = match flags.direction {
            DirectionArg::Src2tgt => Direction::SourceToTarget,
            DirectionArg::Tgt2tgt => Direction::TargetToTarget,
        };
        let target = required(&flags.target, "target", "")?;
        let align = required(&flags.align, "align", "")?;
        let (labeled, marked, translations) = match direction {
            Direction::SourceToTarget => {
                (Some(required(&flags.labeled, "labeled", "for src2tgt")?), None, None)
            }
            Direction::TargetToTarget => (
                None,
                Some(required(&flags.marked, "marked", "for tgt2tgt")?),
                Some(required(&flags.translations, "translations", "for tgt2tgt")?),
            ),
        };
        let spans = if uses_external_spans(cfg) {
            Some(required(&flags.spans, "spans", "with --candidates ner")?)
        } else {
            None
        };
        Ok(InputPaths {
            direction,
            labeled: labeled.map(existing).transpose()?,
            target: existing(target)?,
            align: existing(align)?,
            spans: spans.map(existing).transpose()?,
            marked: marked.map(existing).transpose()?,
            translations: translations.map(existing).transpose()?,
        })
    }
}

impl RunManifest {
    pub fn from_args(args: &ProjectArgs) -> Result<RunManifest> {
        let config = args.projection.settings()?.resolve()?;
        let out = required(&args.out, "out", "")?;
        let jobs = match args.jobs {
            Some(0) => return Err(Error::Config("--jobs must be at least 1".into())),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let inputs = InputPaths::resolve(&args.inputs, &config)?;
        Ok(RunManifest {
            config,
            inputs,
            out,
            jobs,
            skip_bad_sentences: args.skip_bad_sentences,
        })
    }
}

/// Parsed, mutually consistent inputs; index `i` of every list belongs to
/// sentence `i` of the target corpus.
#[derive(Debug, Clone)]
pub struct ProjectInputs {
    pub labeled: Vec<LabeledSentence>,
    pub targets: Vec<Sentence>,
    pub aligns: Vec<AlignmentSet>,
    pub spans: Option<BTreeMap<usize, Vec<EntitySpan>>>,
}

fn count_mismatch(what: &str, found: usize, unit: &str, expected: usize) -> Error {
    Error::Mismatch(format!(
        "{what} has {found} {unit} but the target corpus has {expected} sentences"
    ))
}

fn with_file(path: &Path, err: Error) -> Error {
    match err {
        Error::Format { line, message } => {
            Error::format(line, format!("{}: {message}", path.display()))
        }
        other => other,
    }
}

fn read_conll(path: &Path) -> Result<CorpusDocument> {
    parse_conll(&read_text(path)?).map_err(|e| with_file(path, e))
}

/// Reads every input and checks sentence and line counts before any
/// projection starts.
pub fn load_inputs(paths: &InputPaths, cfg: &ProjectionConfig) -> Result<ProjectInputs> {
    let targets: Vec<Sentence> = read_conll(&paths.target)?
        .sentences
        .into_iter()
        .map(|s| s.sentence().clone())
        .collect();
    let n = targets.len();

    let aligns = parse_alignment_file(&read_text(&paths.align)?)
        .map_err(|e| with_file(&paths.align, e))?;
    if aligns.len() != n {
        return Err(count_mismatch("alignment file", aligns.len(), "lines", n));
    }

    let labeled = match paths.direction {
        Direction::SourceToTarget => {
            let path = paths.labeled.as_ref().expect("resolved for src2tgt");
            let doc = read_conll(path)?;
            if doc.len() != n {
                return Err(count_mismatch("labeled corpus", doc.len(), "sentences", n));
            }
            doc.sentences
        }
        Direction::TargetToTarget => {
            let marked_path = paths.marked.as_ref().expect("resolved for tgt2tgt");
            let tr_path = paths.translations.as_ref().expect("resolved for tgt2tgt");
            let marked = read_text(marked_path)?;
            let translations = read_text(tr_path)?;
            let marked: Vec<&str> = marked.lines().collect();
            let translations: Vec<&str> = translations.lines().collect();
            if marked.len() != n {
                return Err(count_mismatch("marked-sentence file", marked.len(), "lines", n));
            }
            if translations.len() != n {
                return Err(count_mismatch("translations file", translations.len(), "lines", n));
            }
            let mut out = Vec::with_capacity(n);
            for (i, (m, t)) in marked.iter().zip(&translations).enumerate() {
                let at_line = |path: &Path, e: Error| match e {
                    Error::Format { message, .. } => {
                        Error::format(Some(i + 1), format!("{}: {message}", path.display()))
                    }
                    other => other,
                };
                let tr = parse_translations(t).map_err(|e| at_line(tr_path, e))?;
                let mut sentence = parse_marked_sentence(m, tr).map_err(|e| at_line(marked_path, e))?;
                sentence.sentence = sentence.sentence.with_id(i);
                out.push(assign_marker_labels(&sentence, cfg.min_similarity)?);
            }
            out
        }
    };

    let spans = match &paths.spans {
        Some(path) if uses_external_spans(cfg) => {
            let map = parse_span_records(&read_text(path)?).map_err(|e| with_file(path, e))?;
            if let Some((&id, _)) = map.range(n..).next() {
                return Err(Error::Mismatch(format!(
                    "{}: sentence_id {id} but the target corpus has {n} sentences",
                    path.display()
                )));
            }
            Some(map)
        }
        _ => None,
    };

    Ok(ProjectInputs {
        labeled,
        targets,
        aligns,
        spans,
    })
}

impl ProjectInputs {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    fn external_spans(&self, i: usize) -> Option<&[EntitySpan]> {
        self.spans
            .as_ref()
            .map(|m| m.get(&i).map_or(&[][..], Vec::as_slice))
    }

    pub fn project_sentence(&self, i: usize, cfg: &ProjectionConfig) -> Result<LabeledSentence> {
        project(
            &self.labeled[i],
            &self.targets[i],
            &self.aligns[i],
            cfg,
            self.external_spans(i),
        )
        .map_err(|e| e.in_sentence(i))
    }
}

/// Writes through a temporary file in the destination directory, so the
/// destination only ever holds complete output.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Projects the whole corpus and writes the labeled target as CoNLL.
pub fn cmd_project(manifest: &RunManifest) -> Result<String> {
    let cfg = &manifest.config;
    let inputs = load_inputs(&manifest.inputs, cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", manifest.jobs)))?;
    let results: Vec<Result<LabeledSentence>> = pool.install(|| {
        (0..inputs.len())
            .into_par_iter()
            .map(|i| inputs.project_sentence(i, cfg))
            .collect()
    });

    let mut sentences = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(s) => sentences.push(s),
            Err(e) if manifest.skip_bad_sentences => {
                eprintln!("warning: {e}; emitting it unlabeled");
                skipped += 1;
                sentences.push(LabeledSentence::unlabeled(inputs.targets[i].clone()));
            }
            Err(e) => return Err(e),
        }
    }
    let entities: usize = sentences.iter().map(|s| s.entities().len()).sum();
    let doc = CorpusDocument::new(sentences);
    write_atomic(&manifest.out, &serialize_conll(&doc))?;
    let mut summary = format!(
        "projected {entities} entities over {} sentences into {}",
        doc.len(),
        manifest.out.display()
    );
    if skipped > 0 {
        let _ = write!(summary, " ({skipped} sentences skipped)");
    }
    summary.push('\n');
    Ok(summary)
}

/// Emits one span record per sentence with all n-gram candidates.
pub fn cmd_candidates(args: &CandidatesArgs) -> Result<String> {
    if parse_candidate_source(&args.candidates)? != CandidateSource::Ngram {
        return Err(Error::Config(
            "only n-gram candidates can be generated; NER spans are inputs".into(),
        ));
    }
    let max_len = match &args.max_ngram {
        Some(v) => parse_max_ngram(v)?,
        None => Some(DEFAULT_MAX_NGRAM),
    };
    let path = required(&args.target, "target", "")?;
    let doc = read_conll(&existing(path)?)?;
    let sets = doc
        .sentences
        .iter()
        .map(|s| ngram_candidates(s.sentence(), max_len))
        .collect::<Result<Vec<_>>>()?;
    let text = serialize_span_records(sets.iter().map(|c| (c.sentence_id, c.spans.as_slice())));
    match &args.out {
        Some(out) => {
            write_atomic(out, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Debug view of one sentence's matching problem: the cost matrix, the
/// configured solver and, within its size guard, the brute-force optimum.
pub fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let mut cfg = args.projection.settings()?.resolve()?;
    cfg.method = Method::CandidateMatching;
    cfg.validate()?;
    let paths = InputPaths::resolve(&args.inputs, &cfg)?;
    let inputs = load_inputs(&paths, &cfg)?;
    let i = args.sentence;
    if i >= inputs.len() {
        return Err(Error::Config(format!(
            "--sentence {i} is out of range; the corpus has {} sentences",
            inputs.len()
        )));
    }
    let labeled = &inputs.labeled[i];
    let target = &inputs.targets[i];
    let candidates = match cfg.candidate_source {
        CandidateSource::Ngram => ngram_candidates(target, cfg.max_ngram_len),
        CandidateSource::ExternalNer => {
            external_candidates(target, inputs.external_spans(i).unwrap_or(&[]))
        }
    }
    .map_err(|e| e.in_sentence(i))?;
    let problem =
        build_problem(labeled, candidates, &inputs.aligns[i], cfg.mode).map_err(|e| e.in_sentence(i))?;

    let mut out = format!("sentence {i}\n");
    out.push_str(&render_matrix(&problem));
    let configured = solve(&problem, cfg.solver).map_err(|e| e.in_sentence(i))?;
    out.push_str(&render_solution(&cfg.solver.to_string(), &problem, &configured));
    let mut summary = format!("objectives: {} {}", cfg.solver, configured.objective);
    if cfg.solver != Solver::BruteForce {
        match solve_bruteforce(&problem) {
            Ok(exact) => {
                out.push_str(&render_solution("brute", &problem, &exact));
                let _ = write!(summary, ", exact {}", exact.objective);
            }
            Err(e @ Error::GuardExceeded { .. }) => {
                let _ = writeln!(out, "notice: brute-force oracle skipped: {e}");
            }
            Err(e) => {
                let _ = writeln!(out, "brute: {e}");
            }
        }
    }
    out.push_str(&summary);
    out.push('\n');
    Ok(out)
}

pub fn cmd_evaluate(pred: &Path, gold: &Path, format: ReportFormat) -> Result<String> {
    let report = evaluate(&read_conll(pred)?, &read_conll(gold)?)?;
    Ok(match format {
        ReportFormat::Text => report.render_text(),
        ReportFormat::Json => report.to_json() + "\n",
    })
}
