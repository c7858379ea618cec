//! Word vectors and CBOW-style plausibility filtering of generated phrases.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{enumerate_phrases, generate_phrases, GenerateOptions, GeneratedPhrase, StructureTemplate, MAX_LIMIT};
use crate::lexicon::Lexicon;

/// Small toy space covering the sample lexicon's lemmas.
pub const SAMPLE_VECTORS: &str = include_str!("../data/sample_vectors.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct VectorSpace {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    normalized: bool,
}

/// Vector-file key of a lemma: spaces become underscores.
pub fn vector_key(lemma: &str) -> String {
    lemma.trim().replace(' ', "_")
}

impl VectorSpace {
    pub fn new(dim: usize) -> Self {
        VectorSpace {
            dim,
            vectors: HashMap::new(),
            normalized: false,
        }
    }

    pub fn insert(&mut self, word: &str, v: Vec<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Domain(format!("vector for `{word}` has {} components, expected {}", v.len(), self.dim)));
        }
        self.normalized = false;
        self.vectors.insert(vector_key(word), v);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Looks a lemma up by key, then by its lowercase key.
    pub fn get(&self, lemma: &str) -> Option<&[f64]> {
        let k = vector_key(lemma);
        self.vectors
            .get(&k)
            .or_else(|| self.vectors.get(&k.to_lowercase()))
            .map(Vec::as_slice)
    }

    /// Unit-length copy; zero vectors stay zero.
    pub fn normalize(&mut self) {
        for v in self.vectors.values_mut() {
            let n = norm(v);
            if n > 0.0 {
                v.iter_mut().for_each(|x| *x /= n);
            }
        }
        self.normalized = true;
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Some((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Reads the text vector format: optional `count dim` header, then `word x1 … xd` rows.
pub fn load_vectors(source: impl Read) -> Result<VectorSpace> {
    let reader = BufReader::new(source);
    let mut vs: Option<VectorSpace> = None;
    let mut declared: Option<(usize, usize)> = None;
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::VectorParse {
            line: lineno,
            message: e.to_string(),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        last_line = lineno;
        if vs.is_none() && declared.is_none() && fields.len() == 2 {
            if let (Ok(c), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                declared = Some((c, d));
                vs = Some(VectorSpace::new(d));
                continue;
            }
        }
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::VectorParse {
                line: lineno,
                message: e.to_string(),
            })?;
        let space = vs.get_or_insert_with(|| VectorSpace::new(values.len()));
        if values.len() != space.dim || values.is_empty() {
            return Err(Error::VectorParse {
                line: lineno,
                message: format!("expected {} components, found {}", space.dim, values.len()),
            });
        }
        space.vectors.insert(fields[0].to_string(), values);
    }
    let vs = vs.unwrap_or_else(|| VectorSpace::new(0));
    if let Some((count, _)) = declared {
        if vs.len() != count {
            return Err(Error::VectorParse {
                line: last_line,
                message: format!("header declares {count} rows, found {}", vs.len()),
            });
        }
    }
    Ok(vs)
}

/// Cosine between a candidate and the mean of its in-vocabulary context; `None` when undefined.
pub fn context_score(vs: &VectorSpace, candidate: &str, context: &[&str]) -> Result<Option<f64>> {
    if context.is_empty() {
        return Err(Error::Domain("context must not be empty".into()));
    }
    let Some(c) = vs.get(candidate) else { return Ok(None) };
    let mut mean = vec![0.0; vs.dim];
    let mut n = 0usize;
    for w in context {
        if let Some(v) = vs.get(w) {
            mean.iter_mut().zip(v).for_each(|(m, x)| *m += x);
            n += 1;
        }
    }
    if n == 0 {
        return Ok(None);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    Ok(cosine(c, &mean))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPhrase {
    pub phrase: GeneratedPhrase,
    pub score: f64,
}

/// The scored filler (last trace slot) and its context (head and every other lemma).
pub fn phrase_context(p: &GeneratedPhrase) -> Option<(&str, Vec<&str>)> {
    let (last, rest) = p.trace.split_last()?;
    let mut ctx = vec![p.noun.as_str()];
    for t in rest {
        ctx.push(&t.lemma);
        if let Some(pf) = &t.paired {
            ctx.push(&pf.lemma);
        }
    }
    if let Some(pf) = &last.paired {
        ctx.push(&pf.lemma);
    }
    Some((last.lemma.as_str(), ctx))
}

// Scores equal up to float noise count as ties, so the surface decides.
fn tie_key(score: f64) -> i64 {
    (score * 1e9).round() as i64
}

pub(crate) fn rank_order(a: &ScoredPhrase, b: &ScoredPhrase) -> Ordering {
    tie_key(b.score)
        .cmp(&tie_key(a.score))
        .then_with(|| a.phrase.surface.cmp(&b.phrase.surface))
}

/// Scores, drops unscoreable phrases, sorts by score then surface, truncates to `limit`.
pub fn filter_phrases(vs: &VectorSpace, phrases: Vec<GeneratedPhrase>, limit: usize) -> Vec<ScoredPhrase> {
    let mut scored: Vec<ScoredPhrase> = phrases
        .into_iter()
        .filter_map(|p| {
            let (cand, ctx) = phrase_context(&p)?;
            let score = context_score(vs, cand, &ctx).ok().flatten()?;
            Some(ScoredPhrase { phrase: p, score })
        })
        .collect();
    scored.sort_by(rank_order);
    scored.truncate(limit);
    scored
}

/// Generates a large pool for the template and keeps the `limit` most plausible phrases.
pub fn generate_filtered(
    lex: &Lexicon,
    t: &StructureTemplate,
    opts: GenerateOptions,
    vs: &VectorSpace,
) -> Result<Vec<ScoredPhrase>> {
    if opts.limit > MAX_LIMIT {
        return Err(Error::Domain(format!("limit {} exceeds {MAX_LIMIT}", opts.limit)));
    }
    if opts.limit == 0 {
        return Ok(Vec::new());
    }
    let mut pool = enumerate_phrases(lex, t, MAX_LIMIT + 1)?;
    if pool.len() > MAX_LIMIT {
        pool = generate_phrases(lex, t, GenerateOptions { seed: opts.seed, limit: MAX_LIMIT })?;
    }
    for p in &mut pool {
        p.seed = Some(opts.seed);
    }
    Ok(filter_phrases(vs, pool, opts.limit))
}
