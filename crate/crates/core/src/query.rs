//! Request/response layer shared by the HTTP service and the command line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::embedding::{generate_filtered, phrase_context, context_score, rank_order, ScoredPhrase, VectorSpace};
use crate::error::{Error, Result};
use crate::export::ExportRow;
use crate::frames::{check_clause, find_frame, generate_sentences, ClauseVerdict};
use crate::generator::{
    find_template, generate_phrases, resolve_selection, ClassSelection, GenerateOptions, StructureTemplate,
    TraceSlot, MAX_LIMIT,
};
use crate::lexicon::{Language, Lexicon};
use crate::validator::{validate_phrase, Verdict};

pub const DEFAULT_LIMIT: usize = 100;

fn default_limit() -> usize {
    DEFAULT_LIMIT
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerateRequest {
    pub language: Language,
    pub noun: String,
    #[serde(alias = "sense")]
    pub sense_id: String,
    /// Slot reference (`1`, `Arg1`, role id) to class path.
    #[serde(default)]
    pub class_selection: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[serde(default)]
    pub use_embedding_filter: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PhraseItem {
    pub surface: String,
    pub trace: Vec<TraceSlot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    /// Set in sentence mode: the hosted phrase as it appears in the clause.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub np_surface: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerateMeta {
    pub seed: u64,
    pub count: usize,
    pub template_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_id: Option<String>,
    pub filtered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerateResponse {
    pub phrases: Vec<PhraseItem>,
    pub meta: GenerateMeta,
}

impl GenerateResponse {
    pub fn export_rows(&self) -> Vec<ExportRow> {
        self.phrases
            .iter()
            .map(|p| ExportRow {
                surface: p.surface.clone(),
                trace: p.trace.clone(),
            })
            .collect()
    }
}

/// Parses `1=a.b,2=c.d` into slot/class pairs.
pub fn parse_selection(text: &str) -> Result<Vec<(String, String)>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_pair)
        .collect()
}

/// Parses one `slot=class` pair.
pub fn parse_pair(pair: &str) -> Result<(String, String)> {
    match pair.split_once('=') {
        Some((s, c)) if !s.trim().is_empty() && !c.trim().is_empty() => {
            Ok((s.trim().to_string(), c.trim().to_string()))
        }
        _ => Err(Error::Domain(format!("malformed selection `{pair}`, expected slot=class"))),
    }
}

impl GenerateRequest {
    pub fn selection(&self, lex: &Lexicon) -> Result<ClassSelection> {
        let schema = lex.schema(self.language, &self.noun, &self.sense_id)?;
        resolve_selection(schema, self.class_selection.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }

    pub fn template(&self, lex: &Lexicon) -> Result<StructureTemplate> {
        let sel = self.selection(lex)?;
        find_template(lex, self.language, &self.noun, &self.sense_id, &sel, self.template_id.as_deref())
    }
}

/// Runs a generation request. `default_seed` is used when the request carries none.
pub fn run_generate(
    lex: &Lexicon,
    vectors: Option<&VectorSpace>,
    req: &GenerateRequest,
    default_seed: u64,
) -> Result<GenerateResponse> {
    if req.limit > MAX_LIMIT {
        return Err(Error::Domain(format!("limit {} exceeds {MAX_LIMIT}", req.limit)));
    }
    let seed = req.seed.unwrap_or(default_seed);
    let template = req.template(lex)?;
    let vs = match (req.use_embedding_filter, vectors) {
        (false, _) => None,
        (true, Some(vs)) => Some(vs),
        (true, None) => return Err(Error::Domain("the embedding filter needs a vector file".into())),
    };
    let opts = GenerateOptions { seed, limit: req.limit };
    let phrases = match &req.frame_id {
        Some(fid) => sentence_items(lex, vs, fid, &template, opts)?,
        None => match vs {
            Some(vs) => generate_filtered(lex, &template, opts, vs)?
                .into_iter()
                .map(|s| PhraseItem {
                    surface: s.phrase.surface,
                    trace: s.phrase.trace,
                    score: Some(s.score),
                    np_surface: None,
                })
                .collect(),
            None => generate_phrases(lex, &template, opts)?
                .into_iter()
                .map(|p| PhraseItem {
                    surface: p.surface,
                    trace: p.trace,
                    score: None,
                    np_surface: None,
                })
                .collect(),
        },
    };
    Ok(GenerateResponse {
        meta: GenerateMeta {
            seed,
            count: phrases.len(),
            template_id: template.id,
            frame_id: req.frame_id.clone(),
            filtered: vs.is_some(),
        },
        phrases,
    })
}

fn sentence_items(
    lex: &Lexicon,
    vs: Option<&VectorSpace>,
    frame_id: &str,
    template: &StructureTemplate,
    opts: GenerateOptions,
) -> Result<Vec<PhraseItem>> {
    let frame = find_frame(lex, frame_id)?;
    let Some(vs) = vs else {
        return Ok(generate_sentences(lex, frame, template, opts)?
            .into_iter()
            .map(|s| PhraseItem {
                surface: s.surface,
                trace: s.phrase.trace,
                score: None,
                np_surface: Some(s.np_surface),
            })
            .collect());
    };
    if opts.limit == 0 {
        return Ok(Vec::new());
    }
    // Sentences are ranked by the plausibility of their hosted phrase.
    let pool = generate_sentences(lex, frame, template, GenerateOptions { seed: opts.seed, limit: MAX_LIMIT })?;
    let mut scored: Vec<(ScoredPhrase, String, String)> = pool
        .into_iter()
        .filter_map(|s| {
            let (cand, ctx) = phrase_context(&s.phrase)?;
            let score = context_score(vs, cand, &ctx).ok().flatten()?;
            let scored = ScoredPhrase {
                phrase: s.phrase,
                score,
            };
            Some((scored, s.surface, s.np_surface))
        })
        .collect();
    scored.sort_by(|a, b| rank_order(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
    scored.truncate(opts.limit);
    Ok(scored
        .into_iter()
        .map(|(sp, surface, np_surface)| PhraseItem {
            surface,
            trace: sp.phrase.trace,
            score: Some(sp.score),
            np_surface: Some(np_surface),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidateMode {
    #[default]
    Phrase,
    Sentence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateRequest {
    pub language: Language,
    pub text: String,
    #[serde(default)]
    pub mode: ValidateMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ValidationResult {
    Phrase(Verdict),
    Sentence(ClauseVerdict),
}

impl ValidationResult {
    pub fn accepted(&self) -> bool {
        match self {
            ValidationResult::Phrase(v) => v.accepted(),
            ValidationResult::Sentence(c) => c.accepted,
        }
    }
}

pub fn run_validate(lex: &Lexicon, req: &ValidateRequest) -> ValidationResult {
    match req.mode {
        ValidateMode::Phrase => ValidationResult::Phrase(validate_phrase(lex, req.language, &req.text)),
        ValidateMode::Sentence => ValidationResult::Sentence(check_clause(lex, req.language, &req.text)),
    }
}
