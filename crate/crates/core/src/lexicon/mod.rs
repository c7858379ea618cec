//! Lexicon bundle: domain types, loading with integrity checks, and lookup indices.

mod model;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use unicode_normalization::UnicodeNormalization;

pub use model::*;
pub use validate::{validate_bundle, Finding, ValidationReport};

use crate::error::{Error, Result};

/// The bundled sample lexicon.
pub const SAMPLE_BUNDLE: &str = include_str!("../../data/sample_bundle.json");

#[derive(Debug, Clone, Copy)]
pub(crate) struct FormHit {
    pub entry: usize,
    pub key: FormKey,
}

#[derive(Debug, Default)]
pub(crate) struct FormIndex {
    pub by_form: HashMap<String, Vec<FormHit>>,
    pub max_tokens: usize,
    /// (lowercased linking form, entry)
    pub compounds: Vec<(String, usize)>,
}

/// Immutable, indexed lexicon. Safe to share across threads.
#[derive(Debug)]
pub struct Lexicon {
    bundle: Bundle,
    entries: HashMap<(Language, String), usize>,
    nouns: HashMap<(Language, String), usize>,
    classes: HashMap<ClassId, usize>,
    roles: HashMap<RoleId, usize>,
    forms: HashMap<Language, FormIndex>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.bundle == other.bundle
    }
}

/// Reads and indexes a bundle document.
pub fn load_bundle(mut source: impl Read) -> Result<Lexicon> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    Lexicon::from_json(&text)
}

/// All schemas of a noun, ordered by sense id.
pub fn schemas_for<'a>(
    lex: &'a Lexicon,
    language: Language,
    lemma: &str,
) -> Result<Vec<(&'a str, &'a ArgumentSchema)>> {
    let noun = lex
        .noun(language, lemma)
        .ok_or_else(|| Error::not_found(format!("noun `{lemma}` ({language})")))?;
    let mut v: Vec<_> = noun.senses.iter().map(|s| (s.sense.as_str(), s)).collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    Ok(v)
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Lexicon> {
        let normalized: String = text.nfc().collect();
        let bundle: Bundle = serde_json::from_str(&normalized).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Lexicon::from_bundle(bundle)
    }

    pub fn sample() -> Lexicon {
        Lexicon::from_json(SAMPLE_BUNDLE).expect("bundled sample lexicon is valid")
    }

    /// One parsed sample per test process.
    #[cfg(test)]
    pub(crate) fn shared_sample() -> &'static Lexicon {
        static LEX: std::sync::OnceLock<Lexicon> = std::sync::OnceLock::new();
        LEX.get_or_init(Lexicon::sample)
    }

    pub fn from_bundle(bundle: Bundle) -> Result<Lexicon> {
        let mut lex = Lexicon {
            entries: HashMap::new(),
            nouns: HashMap::new(),
            classes: HashMap::new(),
            roles: HashMap::new(),
            forms: HashMap::new(),
            bundle,
        };
        for (i, c) in lex.bundle.ontology.iter().enumerate() {
            lex.classes.insert(c.id.clone(), i);
        }
        for (i, r) in lex.bundle.roles.iter().enumerate() {
            lex.roles.insert(r.id.clone(), i);
        }
        for (i, e) in lex.bundle.entries.iter().enumerate() {
            if lex
                .entries
                .insert((e.language, e.lemma.clone()), i)
                .is_some()
            {
                return Err(Error::Domain(format!(
                    "duplicate entry `{}` ({})",
                    e.lemma, e.language
                )));
            }
        }
        for (i, n) in lex.bundle.nouns.iter().enumerate() {
            if lex.nouns.insert((n.language, n.lemma.clone()), i).is_some() {
                return Err(Error::Domain(format!(
                    "duplicate noun `{}` ({})",
                    n.lemma, n.language
                )));
            }
        }
        lex.check_integrity()?;
        lex.build_form_index();
        Ok(lex)
    }

    fn check_integrity(&self) -> Result<()> {
        let b = &self.bundle;
        let class = |id: &ClassId, ctx: &dyn Fn() -> String| -> Result<()> {
            if self.classes.contains_key(id) {
                Ok(())
            } else {
                Err(Error::Integrity {
                    id: id.0.clone(),
                    context: ctx(),
                })
            }
        };
        let entry = |lang: Language, lemma: &str, ctx: &dyn Fn() -> String| -> Result<()> {
            if self.entries.contains_key(&(lang, lemma.to_string())) {
                Ok(())
            } else {
                Err(Error::Integrity {
                    id: lemma.to_string(),
                    context: ctx(),
                })
            }
        };
        for c in &b.ontology {
            if let Some(p) = c.id.parent() {
                class(&p, &|| format!("class `{}`", c.id))?;
            }
        }
        for e in &b.entries {
            for c in &e.classes {
                class(c, &|| format!("entry `{}`", e.lemma))?;
            }
        }
        for n in &b.nouns {
            entry(n.language, &n.lemma, &|| format!("noun `{}`", n.lemma))?;
            for s in &n.senses {
                let ctx = || format!("{} / {}", n.lemma, s.sense);
                for sl in &s.slots {
                    if !self.roles.contains_key(&sl.role) {
                        return Err(Error::Integrity {
                            id: sl.role.0.clone(),
                            context: format!("{} Arg{}", ctx(), sl.index),
                        });
                    }
                    for (c, cands) in &sl.members {
                        class(c, &ctx)?;
                        for cand in cands {
                            entry(n.language, &cand.lemma, &ctx)?;
                        }
                    }
                    for r in &sl.realizations {
                        for c in r.classes.iter().chain(r.examples.keys()) {
                            class(c, &ctx)?;
                        }
                    }
                    if let Some(p) = &sl.paired {
                        for c in &p.classes {
                            class(c, &ctx)?;
                        }
                    }
                    for req in &sl.requires {
                        if s.slot(*req).is_none() {
                            return Err(Error::Integrity {
                                id: format!("Arg{req}"),
                                context: format!("{} Arg{} requires", ctx(), sl.index),
                            });
                        }
                    }
                }
                for r in &s.number_rules {
                    if s.slot(r.slot).is_none() {
                        return Err(Error::Integrity {
                            id: format!("Arg{}", r.slot),
                            context: format!("{} number rule", ctx()),
                        });
                    }
                }
                for r in &s.head_number_rules {
                    class(&r.class, &ctx)?;
                    if s.slot(r.slot).is_none() {
                        return Err(Error::Integrity {
                            id: format!("Arg{}", r.slot),
                            context: format!("{} head-number rule", ctx()),
                        });
                    }
                }
            }
        }
        for f in &b.frames {
            let ctx = || format!("frame `{}`", f.id);
            self.sense_ref(f.language, &f.noun, &f.sense, &ctx)?;
            for a in &f.adjectives {
                entry(f.language, a, &ctx)?;
            }
            for a in f.attributes.iter().filter_map(|a| a.adjective.as_ref()) {
                entry(f.language, a, &ctx)?;
            }
            for v in &f.verbs {
                for r in &v.requires {
                    for c in &r.classes {
                        class(c, &ctx)?;
                    }
                }
            }
        }
        for a in &b.adjective_annotations {
            self.sense_ref(a.language, &a.noun, &a.sense, &|| {
                format!("adjective annotation for `{}`", a.noun)
            })?;
        }
        for t in &b.cooccurrence {
            let ctx = || format!("cooccurrence table for `{}`", t.noun);
            let schema = self.sense_ref(t.language, &t.noun, &t.sense, &ctx)?;
            if schema.slot(t.slot).is_none() {
                return Err(Error::Integrity {
                    id: format!("Arg{}", t.slot),
                    context: ctx(),
                });
            }
        }
        Ok(())
    }

    fn sense_ref(
        &self,
        lang: Language,
        noun: &str,
        sense: &str,
        ctx: &dyn Fn() -> String,
    ) -> Result<&ArgumentSchema> {
        let n = self.noun(lang, noun).ok_or_else(|| Error::Integrity {
            id: noun.to_string(),
            context: ctx(),
        })?;
        n.senses
            .iter()
            .find(|s| s.sense == sense)
            .ok_or_else(|| Error::Integrity {
                id: sense.to_string(),
                context: ctx(),
            })
    }

    fn build_form_index(&mut self) {
        for (i, e) in self.bundle.entries.iter().enumerate() {
            let idx = self.forms.entry(e.language).or_default();
            for (key, form) in &e.forms {
                let Some(form) = form else { continue };
                let norm = normalize_phrase(form);
                idx.max_tokens = idx.max_tokens.max(norm.split(' ').count());
                idx.by_form
                    .entry(norm)
                    .or_default()
                    .push(FormHit { entry: i, key: *key });
            }
            if let Some(cf) = &e.compound_form {
                idx.compounds.push((cf.to_lowercase(), i));
            }
        }
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    /// Pretty JSON of the underlying bundle; reloading it yields an equal lexicon.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.bundle).expect("bundle serializes")
    }

    pub fn languages(&self) -> Vec<Language> {
        if self.bundle.meta.languages.is_empty() {
            Language::ALL.to_vec()
        } else {
            self.bundle.meta.languages.clone()
        }
    }

    pub fn entry(&self, language: Language, lemma: &str) -> Option<&LexicalEntry> {
        self.entries
            .get(&(language, lemma.to_string()))
            .map(|&i| &self.bundle.entries[i])
    }

    pub(crate) fn entry_at(&self, i: usize) -> &LexicalEntry {
        &self.bundle.entries[i]
    }

    pub fn require_entry(&self, language: Language, lemma: &str) -> Result<&LexicalEntry> {
        self.entry(language, lemma)
            .ok_or_else(|| Error::not_found(format!("entry `{lemma}` ({language})")))
    }

    pub fn noun(&self, language: Language, lemma: &str) -> Option<&Noun> {
        self.nouns
            .get(&(language, lemma.to_string()))
            .map(|&i| &self.bundle.nouns[i])
    }

    pub fn nouns(&self, language: Language) -> impl Iterator<Item = &Noun> {
        self.bundle
            .nouns
            .iter()
            .filter(move |n| n.language == language)
    }

    pub fn schema(&self, language: Language, noun: &str, sense: &str) -> Result<&ArgumentSchema> {
        let n = self
            .noun(language, noun)
            .ok_or_else(|| Error::not_found(format!("noun `{noun}` ({language})")))?;
        n.senses
            .iter()
            .find(|s| s.sense == sense)
            .ok_or_else(|| Error::not_found(format!("sense `{sense}` of `{noun}`")))
    }

    pub fn class(&self, id: &ClassId) -> Option<&ClassDecl> {
        self.classes.get(id).map(|&i| &self.bundle.ontology[i])
    }

    pub fn role(&self, id: &RoleId) -> Option<&SemanticRole> {
        self.roles.get(id).map(|&i| &self.bundle.roles[i])
    }

    /// Connotation of a class, inherited from the nearest annotated ancestor.
    pub fn connotation(&self, id: &ClassId) -> Polarity {
        let mut cur = Some(id.clone());
        while let Some(c) = cur {
            if let Some(decl) = self.class(&c) {
                if !decl.connotation.is_neutral() {
                    return decl.connotation;
                }
            }
            cur = c.parent();
        }
        Polarity::Neutral
    }

    /// Human label of a slot for messages, e.g. `Arg3 locacion.direccion «Locación: Dirección»`.
    pub fn slot_label(&self, slot: &ArgumentSlot) -> String {
        let gloss = self
            .role(&slot.role)
            .and_then(|r| r.gloss.get(&Language::Es).or_else(|| r.gloss.values().next()));
        match gloss {
            Some(g) => format!("Arg{} {} «{}»", slot.index, slot.role, g),
            None => format!("Arg{} {}", slot.index, slot.role),
        }
    }

    pub fn frames(&self) -> &[SentenceFrame] {
        &self.bundle.frames
    }

    pub fn annotations(&self) -> &[AdjectiveAnnotation] {
        &self.bundle.adjective_annotations
    }

    pub fn cooccurrence(&self) -> &[CooccurrenceTable] {
        &self.bundle.cooccurrence
    }

    pub(crate) fn form_index(&self, language: Language) -> Option<&FormIndex> {
        self.forms.get(&language)
    }

    /// Adjectives annotated with `ArgN` for a noun sense, in annotation order.
    pub fn role_adjectives(
        &self,
        language: Language,
        noun: &str,
        sense: &str,
        slot: u8,
    ) -> Vec<&LexicalEntry> {
        let label = format!("Arg{slot}");
        let mut out: Vec<&LexicalEntry> = Vec::new();
        for a in self
            .annotations()
            .iter()
            .filter(|a| a.language == language && a.noun == noun && a.sense == sense)
        {
            for (adj, l) in &a.items {
                if *l != label {
                    continue;
                }
                if let Some(e) = self.entry(language, adj) {
                    if e.is_adjective() && !out.iter().any(|o| o.lemma == e.lemma) {
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    /// Class ids grouped by depth, for diagnostics and drill-down.
    pub fn class_ids(&self) -> BTreeMap<usize, Vec<&ClassId>> {
        let mut m: BTreeMap<usize, Vec<&ClassId>> = BTreeMap::new();
        for c in &self.bundle.ontology {
            m.entry(c.id.depth()).or_default().push(&c.id);
        }
        m
    }
}

/// Lowercased, single-spaced form used as index key.
pub(crate) fn normalize_phrase(s: &str) -> String {
    s.split_whitespace()
        .map(|t| t.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}
