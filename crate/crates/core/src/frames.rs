//! Sentence frames: embedding generated phrases into clauses with compatible verbs, adverbs and adjectives.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constraints::Violation;
use crate::error::{Error, Result};
use crate::generator::{generate_phrases, GenerateOptions, GeneratedPhrase, StructureTemplate, TraceSlot, MAX_LIMIT};
use crate::lexicon::{
    AttributeChoice, Case, ClassId, ClauseFunction, ClausePart, LexicalEntry, Direction, Language, Lexicon, Number, Polarity, RealizationKind,
    SentenceFrame, VerbChoice, VerbPosition,
};
use crate::realize::{join, realize_np, realize_tokens, rewrite, Tok};
use crate::validator::{
    parse_tokens, prepositions, tokenize, validate_parsed, Diagnosis, Matcher, Span, Token, Verdict, VerdictStatus,
};

pub const POLARITY_CLASH: &str = "polarity-clash";
pub const CLASS_CONNOTATION: &str = "class-connotation";

const FRAME_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn list_frames<'a>(
    lex: &'a Lexicon,
    language: Language,
    noun: &str,
    sense: Option<&str>,
    position: Option<VerbPosition>,
) -> Vec<&'a SentenceFrame> {
    lex.frames()
        .iter()
        .filter(|f| f.language == language && f.noun == noun)
        .filter(|f| sense.is_none_or(|s| f.sense == s))
        .filter(|f| position.is_none_or(|p| f.verb_position == p))
        .collect()
}

pub fn find_frame<'a>(lex: &'a Lexicon, id: &str) -> Result<&'a SentenceFrame> {
    lex.frames()
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::not_found(format!("frame `{id}`")))
}

/// An adjective or attribute in the clause, with its polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopedAdjective {
    pub text: String,
    pub polarity: Polarity,
}

pub fn adjective_polarity(lex: &Lexicon, language: Language, lemma: &str) -> Polarity {
    lex.entry(language, lemma).map_or(Polarity::Neutral, |e| e.polarity)
}

impl ScopedAdjective {
    pub fn lookup(lex: &Lexicon, language: Language, lemma: &str) -> Self {
        ScopedAdjective {
            text: lemma.to_string(),
            polarity: adjective_polarity(lex, language, lemma),
        }
    }
}

/// Classes a trace filler belongs to: the selected class, its member class and its own tags.
fn filler_classes(lex: &Lexicon, language: Language, noun: &str, sense: &str, t: &TraceSlot) -> BTreeSet<ClassId> {
    let mut out = BTreeSet::from([t.class.clone()]);
    let mut lemmas = vec![t.lemma.as_str()];
    if let Some(p) = &t.paired {
        lemmas.push(&p.lemma);
    }
    for lemma in lemmas {
        if let Some(e) = lex.entry(language, lemma) {
            out.extend(e.classes.iter().cloned());
        }
        if let Ok(schema) = lex.schema(language, noun, sense) {
            if let Some(slot) = schema.slot(t.slot) {
                out.extend(
                    slot.candidates_under(&t.class)
                        .filter(|(_, c)| c.lemma == lemma)
                        .map(|(c, _)| c.clone()),
                );
            }
        }
    }
    out
}

/// Opposite polarities in one clause clash; a polar adjective must not contradict a filler class's connotation.
pub fn check_adjective_compat(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    adjectives: &[ScopedAdjective],
    trace: &[TraceSlot],
) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, a) in adjectives.iter().enumerate() {
        for b in &adjectives[i + 1..] {
            if a.polarity.opposes(b.polarity) {
                out.push(Violation::new(
                    POLARITY_CLASH,
                    None,
                    format!("`{}` and `{}` have opposite polarity in one clause", a.text, b.text),
                ));
            }
        }
    }
    for t in trace {
        for c in filler_classes(lex, language, noun, sense, t) {
            let conn = lex.connotation(&c);
            for a in adjectives.iter().filter(|a| a.polarity.opposes(conn)) {
                out.push(Violation::new(
                    CLASS_CONNOTATION,
                    Some(t.slot),
                    format!("`{}` contradicts the {conn:?} connotation of `{}` ({c})", a.text, t.lemma).to_lowercase(),
                ));
            }
        }
    }
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedSentence {
    pub surface: String,
    pub frame_id: String,
    /// The hosted phrase as it appears in the clause, adjectives included.
    pub np_surface: String,
    pub phrase: GeneratedPhrase,
    pub verb: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adverb: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub adjectives: Vec<String>,
}

fn verb_fits(v: &VerbChoice, trace: &[TraceSlot], classes: impl Fn(&TraceSlot) -> BTreeSet<ClassId>) -> bool {
    v.requires.iter().all(|req| {
        trace
            .iter()
            .find(|t| t.slot == req.slot)
            .is_some_and(|t| classes(t).iter().any(|c| req.classes.iter().any(|r| r.contains(c))))
    })
}

fn host(frame: &SentenceFrame) -> Result<ClauseFunction> {
    let hosts: Vec<_> = frame.pattern.iter().filter(|p| p.np).collect();
    let verbs = frame.pattern.iter().filter(|p| p.function == ClauseFunction::Verb).count();
    match (hosts.as_slice(), verbs) {
        ([h], 1) => Ok(h.function),
        _ => Err(Error::Domain(format!("frame `{}` needs exactly one verb and one noun-phrase host", frame.id))),
    }
}

fn host_case(f: ClauseFunction) -> Case {
    match f {
        ClauseFunction::DirectObject => Case::Acc,
        ClauseFunction::IndirectObject | ClauseFunction::PrepositionalComplement => Case::Dat,
        _ => Case::Nom,
    }
}

fn attribute_text(lex: &Lexicon, language: Language, noun: &str, number: Number, a: &AttributeChoice) -> Result<String> {
    let word = match (&a.adjective, &a.text) {
        (Some(adj), _) if language == Language::De => adj.clone(),
        (Some(adj), _) => {
            let head = lex.require_entry(language, noun)?;
            let e = lex.require_entry(language, adj)?;
            e.adjective_form(head.gender, number, None)
                .ok_or_else(|| Error::Realization {
                    lemma: adj.clone(),
                    form: format!("{}", crate::lexicon::FormKey::new(number, None)),
                })?
                .to_string()
        }
        (None, Some(t)) => t.clone(),
        (None, None) => return Err(Error::Domain("attribute without adjective or text".into())),
    };
    Ok(match &a.prefix {
        Some(p) => format!("{p} {word}"),
        None => word,
    })
}

fn attribute_scope(lex: &Lexicon, language: Language, a: &AttributeChoice) -> ScopedAdjective {
    match &a.adjective {
        Some(adj) => ScopedAdjective::lookup(lex, language, adj),
        None => ScopedAdjective {
            text: a.text.clone().unwrap_or_default(),
            polarity: a.polarity,
        },
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Embeds generated phrases of `template` into `frame`; deterministic for a seed.
pub fn generate_sentences(
    lex: &Lexicon,
    frame: &SentenceFrame,
    template: &StructureTemplate,
    opts: GenerateOptions,
) -> Result<Vec<GeneratedSentence>> {
    if frame.language != template.language || frame.noun != template.noun || frame.sense != template.sense {
        return Err(Error::Domain(format!(
            "template `{}` does not belong to the noun sense of frame `{}`",
            template.id, frame.id
        )));
    }
    if opts.limit > MAX_LIMIT {
        return Err(Error::Domain(format!("limit {} exceeds {MAX_LIMIT}", opts.limit)));
    }
    let host_fn = host(frame)?;
    let lang = frame.language;
    let template_fits = |v: &&VerbChoice| {
        v.requires.iter().all(|req| {
            template
                .slots
                .iter()
                .find(|s| s.slot == req.slot)
                .is_some_and(|s| req.classes.iter().any(|r| r.overlaps(&s.class)))
        })
    };
    if !frame.verbs.iter().any(|v| template_fits(&v)) {
        return Err(Error::FrameIncomplete(frame.id.clone()));
    }
    if opts.limit == 0 {
        return Ok(Vec::new());
    }
    let schema = lex.schema(lang, &template.noun, &template.sense)?;
    let apposition_before = template.slots.iter().any(|s| {
        schema.slot(s.slot).and_then(|sl| sl.realizations.get(s.realization)).is_some_and(|r| {
            r.kind == RealizationKind::Apposition && r.direction == Some(Direction::Before)
        })
    });
    let phrases = generate_phrases(lex, template, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(FRAME_STREAM));
    let mut out = Vec::with_capacity(phrases.len());
    for phrase in phrases {
        let classes = |t: &TraceSlot| filler_classes(lex, lang, &phrase.noun, &phrase.sense, t);
        let verbs: Vec<&VerbChoice> = frame.verbs.iter().filter(|v| verb_fits(v, &phrase.trace, classes)).collect();
        let Some(verb) = verbs.choose(&mut rng).copied() else { continue };
        let plural_subject = host_fn == ClauseFunction::Subject && phrase.head_number == Number::Plural;
        let verb_form = match (&verb.pl, plural_subject) {
            (Some(pl), true) => pl.clone(),
            _ => verb.sg.clone(),
        };
        let compatible = |scope: &[ScopedAdjective]| {
            check_adjective_compat(lex, lang, &phrase.noun, &phrase.sense, scope, &phrase.trace).is_empty()
        };
        let attrs: Vec<&AttributeChoice> = frame
            .attributes
            .iter()
            .filter(|a| compatible(&[attribute_scope(lex, lang, a)]))
            .collect();
        let needs_attribute = frame.pattern.iter().any(|p| p.function == ClauseFunction::Attribute);
        let attribute = attrs.choose(&mut rng).copied();
        if needs_attribute && attribute.is_none() {
            continue;
        }
        let mut scope: Vec<ScopedAdjective> = attribute.map(|a| attribute_scope(lex, lang, a)).into_iter().collect();
        let mut adjectives = Vec::new();
        if !apposition_before && !frame.adjectives.is_empty() && rng.gen_bool(0.5) {
            let fitting: Vec<&String> = frame
                .adjectives
                .iter()
                .filter(|a| {
                    let mut s = scope.clone();
                    s.push(ScopedAdjective::lookup(lex, lang, a));
                    compatible(&s)
                })
                .collect();
            if let Some(a) = fitting.choose(&mut rng) {
                scope.push(ScopedAdjective::lookup(lex, lang, a));
                adjectives.push((*a).clone());
            }
        }
        debug_assert!(compatible(&scope));
        let adverb = frame.adverbs.choose(&mut rng).map(|a| a.form.clone());
        let attribute_text = attribute
            .map(|a| attribute_text(lex, lang, &phrase.noun, phrase.head_number, a))
            .transpose()?;

        let mut np = phrase.np.clone();
        np.modifiers = adjectives.clone();
        if lang == Language::De {
            np.head_case = Some(host_case(host_fn));
        }
        let np_surface = realize_np(lex, &np)?;
        let mut toks: Vec<Tok> = Vec::new();
        let words = |s: &str| s.split_whitespace().map(Tok::word).collect::<Vec<_>>();
        for part in &frame.pattern {
            if let Some(p) = &part.preposition {
                toks.extend(words(p));
            }
            if part.np {
                toks.extend(realize_tokens(lex, &np)?);
                continue;
            }
            match part.function {
                ClauseFunction::Verb => toks.extend(words(&verb_form)),
                ClauseFunction::Adverb => toks.extend(words(adverb.as_deref().unwrap_or_default())),
                ClauseFunction::Attribute => toks.extend(words(attribute_text.as_deref().unwrap_or_default())),
                _ => {
                    if let Some(o) = part.options.choose(&mut rng) {
                        toks.extend(words(o));
                    }
                }
            }
        }
        let surface = format!("{}.", capitalize(&join(&rewrite(lang, toks))));
        out.push(GeneratedSentence {
            surface,
            frame_id: frame.id.clone(),
            np_surface,
            phrase,
            verb: verb_form,
            adverb: adverb.filter(|_| frame.pattern.iter().any(|p| p.function == ClauseFunction::Adverb)),
            attribute: attribute_text,
            adjectives,
        });
    }
    Ok(out)
}

/// Verdict on a whole clause: the hosted phrase plus adjective compatibility across the clause.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClauseVerdict {
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_id: Option<String>,
    pub np: Verdict,
    pub diagnoses: Vec<Diagnosis>,
}

fn find_seq(toks: &[Token], seq: &[String]) -> Option<usize> {
    if seq.is_empty() || seq.len() > toks.len() {
        return None;
    }
    (0..=toks.len() - seq.len()).find(|&i| toks[i..i + seq.len()].iter().zip(seq).all(|(t, w)| t.text == *w))
}

fn lower_words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

/// Drops one option of each non-host part from the outer end of `region`.
fn strip_parts<'t>(mut region: &'t [Token], parts: &[&ClausePart], frame: &SentenceFrame, from_front: bool) -> &'t [Token] {
    for part in parts {
        let mut options: Vec<Vec<String>> = part.options.iter().map(|o| lower_words(o)).collect();
        if part.function == ClauseFunction::Adverb {
            options.extend(frame.adverbs.iter().map(|a| lower_words(&a.form)));
        }
        options.sort_by_key(|o| std::cmp::Reverse(o.len()));
        for o in options.iter().filter(|o| !o.is_empty() && o.len() <= region.len()) {
            let hit = if from_front {
                region[..o.len()].iter().zip(o).all(|(t, w)| t.text == *w)
            } else {
                region[region.len() - o.len()..].iter().zip(o).all(|(t, w)| t.text == *w)
            };
            if hit {
                region = if from_front { &region[o.len()..] } else { &region[..region.len() - o.len()] };
                break;
            }
        }
    }
    region
}

/// Checks a clause: locates a frame verb, validates the hosted phrase and the polarity of every adjective in scope.
pub fn check_clause(lex: &Lexicon, language: Language, text: &str) -> ClauseVerdict {
    let preps = prepositions(lex, language);
    let toks = tokenize(language, text, &preps);
    let mut located: Vec<(&SentenceFrame, usize, usize)> = Vec::new();
    for f in lex.frames().iter().filter(|f| f.language == language) {
        for v in &f.verbs {
            for form in std::iter::once(&v.sg).chain(v.pl.iter()) {
                let seq = lower_words(form);
                if let Some(i) = find_seq(&toks, &seq) {
                    located.push((f, i, seq.len()));
                }
            }
        }
    }
    located.sort_by_key(|&(_, _, len)| std::cmp::Reverse(len));
    let split = |(f, i, len): (&'_ SentenceFrame, usize, usize)| {
        let host = f.pattern.iter().position(|p| p.np).unwrap_or(0);
        let verb = f.pattern.iter().position(|p| p.function == ClauseFunction::Verb).unwrap_or(0);
        let (before, after) = (&toks[..i], &toks[i + len..]);
        if host < verb {
            let outer: Vec<&ClausePart> = f.pattern[..host].iter().collect();
            (strip_parts(before, &outer, f, true), after)
        } else {
            let outer: Vec<&ClausePart> = f.pattern[host + 1..].iter().rev().collect();
            (strip_parts(after, &outer, f, false), before)
        }
    };
    // Prefer a frame of the noun the hosted phrase is headed by.
    let chosen = located
        .iter()
        .copied()
        .find(|&c| {
            let (np_toks, _) = split(c);
            parse_tokens(lex, language, text, np_toks, &preps).is_some_and(|p| p.head.readings.iter().any(|r| r.lemma == c.0.noun))
        })
        .or(located.first().copied());
    let (frame, np_toks, rest): (Option<&SentenceFrame>, &[Token], &[Token]) = match chosen {
        Some(c) => {
            let (np_toks, rest) = split(c);
            (Some(c.0), np_toks, rest)
        }
        None => (None, &toks[..], &[]),
    };
    let np = validate_parsed(lex, text, parse_tokens(lex, language, text, np_toks, &preps));
    let mut scope: Vec<(ScopedAdjective, Option<Span>)> = Vec::new();
    if let Some(spec) = &np.np {
        scope.extend(spec.modifiers.iter().map(|m| (ScopedAdjective::lookup(lex, language, m), None)));
    }
    let m = Matcher {
        lex,
        language,
        text,
        toks: rest,
    };
    let mut i = 0;
    while i < rest.len() {
        match m.longest(i, LexicalEntry::is_adjective) {
            Some((len, n)) => {
                scope.push((ScopedAdjective::lookup(lex, language, &n.readings[0].lemma), Some(n.span)));
                i += len;
            }
            None => i += 1,
        }
    }
    let mut diagnoses = np.diagnoses.clone();
    if let Some(spec) = &np.np {
        let adjs: Vec<ScopedAdjective> = scope.iter().map(|(a, _)| a.clone()).collect();
        diagnoses.extend(
            check_adjective_compat(lex, language, &spec.noun, &spec.sense, &adjs, &np.trace)
                .into_iter()
                .map(|v| Diagnosis {
                    span: scope.iter().find(|(a, _)| v.message.contains(&format!("`{}`", a.text))).and_then(|(_, s)| *s),
                    rule: v.rule,
                    message: v.message,
                    slot: v.slot,
                }),
        );
    }
    ClauseVerdict {
        accepted: diagnoses.is_empty() && np.status != VerdictStatus::UnknownHead,
        frame_id: frame.map(|f| f.id.clone()),
        np,
        diagnoses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::check_constraints;
    use crate::generator::{enumerate_structures, resolve_selection};
    use crate::np::Det;

    fn lex() -> Lexicon {
        Lexicon::sample()
    }

    fn templates(lex: &Lexicon, lang: Language, noun: &str, sense: &str, sel: &[(&str, &str)]) -> Vec<StructureTemplate> {
        let schema = lex.schema(lang, noun, sense).unwrap();
        let sel = resolve_selection(schema, sel.iter().copied()).unwrap();
        enumerate_structures(lex, lang, noun, sense, &sel).unwrap()
    }

    fn trace(slot: u8, class: &str, lemma: &str) -> TraceSlot {
        TraceSlot {
            slot,
            role: crate::lexicon::RoleId("origen_causa".into()),
            class: ClassId::from(class),
            lemma: lemma.into(),
            number: Number::Plural,
            determiner: Det::None,
            realization: "a".into(),
            paired: None,
        }
    }

    #[test]
    fn listing_by_position() {
        let lex = lex();
        let before = list_frames(&lex, Language::Es, "respuesta", None, Some(VerbPosition::BeforeNp));
        assert!(before.iter().any(|f| f.standard_example == "Pedro evalúa la respuesta del alumno a la pregunta."));
        let after = list_frames(&lex, Language::Es, "respuesta", None, Some(VerbPosition::AfterNp));
        assert!(after.iter().any(|f| f.standard_example == "La respuesta de Mario a Antonio es muy breve."));
        assert!(list_frames(&lex, Language::Es, "viaje", None, Some(VerbPosition::BeforeNp)).is_empty());
    }

    #[test]
    fn adjective_compatibility() {
        let lex = lex();
        let t = [trace(1, "material.sustancia.excremento", "excremento")];
        let a = |l: &str| ScopedAdjective::lookup(&lex, Language::Es, l);
        let check = |adjs: &[ScopedAdjective]| {
            check_adjective_compat(&lex, Language::Es, "olor", "percepcion_olfativa", adjs, &t)
                .into_iter()
                .map(|v| v.rule)
                .collect::<Vec<_>>()
        };
        assert_eq!(check(&[a("agradable")]), [CLASS_CONNOTATION]);
        assert!(check(&[a("agradable"), a("desagradable")]).contains(&POLARITY_CLASH.to_string()));
        assert!(check(&[a("intenso")]).is_empty());
        assert!(check(&[a("desagradable"), a("intenso")]).is_empty());
    }

    #[test]
    fn sentences_are_sound_and_deterministic() {
        let lex = lex();
        for frame in lex.frames() {
            let schema = lex.schema(frame.language, &frame.noun, &frame.sense).unwrap();
            let sel: Vec<(String, String)> = schema
                .slots
                .iter()
                .take(2)
                .filter_map(|s| s.allowed_classes().next().map(|c| (s.index.to_string(), c.to_string())))
                .collect();
            let sel: Vec<(&str, &str)> = sel.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let Ok(s) = resolve_selection(schema, sel.iter().copied()) else { continue };
            let Ok(ts) = enumerate_structures(&lex, frame.language, &frame.noun, &frame.sense, &s) else { continue };
            for t in ts.iter().take(3) {
                let opts = GenerateOptions { seed: 11, limit: 8 };
                let Ok(a) = generate_sentences(&lex, frame, t, opts) else { continue };
                assert_eq!(a, generate_sentences(&lex, frame, t, opts).unwrap());
                for s in &a {
                    assert!(s.surface.ends_with('.'));
                    assert!(s.surface.chars().next().unwrap().is_uppercase(), "{}", s.surface);
                    assert!(check_constraints(&lex, &s.phrase.np).is_empty());
                    let mut scope: Vec<_> = s.adjectives.iter().map(|a| ScopedAdjective::lookup(&lex, frame.language, a)).collect();
                    let n = s.phrase.head_number;
                    scope.extend(
                        frame
                            .attributes
                            .iter()
                            .filter(|a| s.attribute == attribute_text(&lex, frame.language, &frame.noun, n, a).ok())
                            .map(|a| attribute_scope(&lex, frame.language, a)),
                    );
                    assert!(check_adjective_compat(&lex, frame.language, &frame.noun, &frame.sense, &scope, &s.phrase.trace).is_empty());
                }
            }
        }
    }

    #[test]
    fn olor_frame_with_excrement_never_turns_pleasant() {
        let lex = lex();
        let frame = find_frame(&lex, "olor.a1").unwrap();
        let ts = templates(&lex, Language::Es, "olor", "percepcion_olfativa", &[("1", "material.sustancia.excremento")]);
        for t in &ts {
            for s in generate_sentences(&lex, frame, t, GenerateOptions { seed: 3, limit: 50 }).unwrap() {
                assert!(!s.adjectives.iter().any(|a| a == "agradable"), "{}", s.surface);
                assert!(!s.surface.ends_with(" agradable."), "{}", s.surface);
            }
        }
    }

    #[test]
    fn standard_frame_shape() {
        let lex = lex();
        let frame = find_frame(&lex, "olor.b1").unwrap();
        let ts = templates(
            &lex,
            Language::Es,
            "olor",
            "percepcion_olfativa",
            &[("1", "material.sustancia.liquido_no_consumible"), ("2", "lugar.construccion.habitacion")],
        );
        let t = ts.iter().find(|t| t.id == "sg|1:a|2:de.def").unwrap();
        let out = generate_sentences(&lex, frame, t, GenerateOptions { seed: 5, limit: 20 }).unwrap();
        assert_eq!(out.len(), 20);
        for s in &out {
            let rest = s.surface.trim_end_matches('.');
            assert!(rest.starts_with("Ahora ") || rest.starts_with("De repente "), "{rest}");
            assert!(rest.ends_with(&s.np_surface), "{rest} / {}", s.np_surface);
        }
        assert!(generate_sentences(&lex, frame, t, GenerateOptions { seed: 5, limit: 0 }).unwrap().is_empty());
    }

    #[test]
    fn incompatible_verbs_make_frame_incomplete() {
        let lex = lex();
        let mut frame = find_frame(&lex, "olor.b2").unwrap().clone();
        frame.verbs.retain(|v| !v.requires.is_empty());
        let ts = templates(&lex, Language::Es, "olor", "percepcion_olfativa", &[("1", "material.sustancia.liquido_no_consumible")]);
        assert!(matches!(
            generate_sentences(&lex, &frame, &ts[0], GenerateOptions { seed: 1, limit: 5 }),
            Err(Error::FrameIncomplete(_))
        ));
    }

    #[test]
    fn german_subject_phrase_with_prenominal_adjective() {
        let lex = lex();
        let frame = find_frame(&lex, "frage.b1").unwrap();
        let ts = templates(&lex, Language::De, "Frage", "erkundigung", &[("1", "animado.humano.rol_social")]);
        let t = ts.iter().find(|t| t.id.starts_with("sg|1:gen")).unwrap();
        let out = generate_sentences(&lex, frame, t, GenerateOptions { seed: 9, limit: 30 }).unwrap();
        assert!(out.iter().any(|s| !s.adjectives.is_empty()));
        for s in out.iter().filter(|s| !s.adjectives.is_empty()) {
            assert!(s.np_surface.starts_with("die "), "{}", s.np_surface);
            assert!(s.np_surface.split(' ').nth(1).unwrap().ends_with('e'), "{}", s.np_surface);
        }
    }

    #[test]
    fn clause_polarity_examples() {
        let lex = lex();
        let rules = |t: &str| {
            let v = check_clause(&lex, Language::Es, t);
            assert!(!v.accepted, "{t}");
            assert_eq!(v.np.status, VerdictStatus::Accepted, "{t}: {:?}", v.np.diagnoses);
            v.diagnoses.into_iter().map(|d| d.rule).collect::<Vec<_>>()
        };
        assert!(rules("*El agradable olor a excrementos es intenso").contains(&CLASS_CONNOTATION.to_string()));
        assert!(rules("*El agradable olor a excrementos resulta desagradable.").contains(&POLARITY_CLASH.to_string()));
        let ok = check_clause(&lex, Language::Es, "El intenso olor a excrementos resulta desagradable.");
        assert!(ok.accepted, "{:?}", ok.diagnoses);
        assert_eq!(ok.frame_id.as_deref(), Some("olor.a2"));
        let ok = check_clause(&lex, Language::Es, "Ahora Carlos nota el olor a aguarrás de la habitación.");
        assert!(ok.accepted, "{:?}", ok.diagnoses);
    }

    #[test]
    fn generated_sentences_pass_the_clause_check() {
        let lex = lex();
        let frame = find_frame(&lex, "olor.a1").unwrap();
        let ts = templates(&lex, Language::Es, "olor", "percepcion_olfativa", &[("1", "material.sustancia.excremento")]);
        for t in &ts {
            for s in generate_sentences(&lex, frame, t, GenerateOptions { seed: 4, limit: 20 }).unwrap() {
                let v = check_clause(&lex, Language::Es, &s.surface);
                assert!(v.accepted, "{}: {:?}", s.surface, v.diagnoses);
            }
        }
    }

    #[test]
    fn german_braces_are_prenominal() {
        let lex = lex();
        for f in lex.frames().iter().filter(|f| f.language == Language::De) {
            if let Some(i) = f.standard_example.find('{') {
                let head = f.standard_example.find(&f.noun).or_else(|| f.standard_example.to_lowercase().find(&f.noun.to_lowercase()));
                assert!(head.is_some_and(|h| h > i), "{}", f.standard_example);
            }
        }
    }
}
