//! Surface realization: articles, form lookup, constituent order, elision and contraction.

use crate::error::{Error, Result};
use crate::lexicon::{
    starts_with_vowel, ArgumentSchema, Case, Direction, FormKey, FormalRealization, Gender, Language,
    LexicalEntry, Lexicon, Number, RealizationKind,
};
use crate::np::{Det, Filler, NpSpec};

/// A surface token with the phonological fact elision depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tok {
    pub text: String,
    pub vowel: bool,
}

impl Tok {
    pub(crate) fn word(text: &str) -> Tok {
        Tok {
            vowel: starts_with_vowel(text),
            text: text.to_string(),
        }
    }

    fn of_entry(text: String, e: &LexicalEntry) -> Tok {
        Tok {
            vowel: e.starts_with_vowel(),
            text,
        }
    }
}

/// Article for a determiner choice, or `None` when the language has no form (German indefinite plural).
pub fn article(
    language: Language,
    det: Det,
    gender: Gender,
    number: Number,
    case: Option<Case>,
) -> Option<&'static str> {
    use Gender::*;
    use Number::*;
    let g = match gender {
        None if language == Language::De => Masc,
        None => Masc,
        g => g,
    };
    match (language, det) {
        (_, Det::None) => Option::None,
        (Language::Es, Det::Definite) => Some(match (g, number) {
            (Fem, Singular) => "la",
            (Fem, Plural) => "las",
            (_, Singular) => "el",
            (_, Plural) => "los",
        }),
        (Language::Es, Det::Indefinite) => Some(match (g, number) {
            (Fem, Singular) => "una",
            (Fem, Plural) => "unas",
            (_, Singular) => "un",
            (_, Plural) => "unos",
        }),
        (Language::Fr, Det::Definite) => Some(match (g, number) {
            (_, Plural) => "les",
            (Fem, Singular) => "la",
            (_, Singular) => "le",
        }),
        (Language::Fr, Det::Indefinite) => Some(match (g, number) {
            (_, Plural) => "des",
            (Fem, Singular) => "une",
            (_, Singular) => "un",
        }),
        (Language::De, Det::Definite) => {
            let c = case.unwrap_or(Case::Nom);
            Some(match (number, g, c) {
                (Plural, _, Case::Nom | Case::Acc) => "die",
                (Plural, _, Case::Gen) => "der",
                (Plural, _, Case::Dat) => "den",
                (Singular, Masc, Case::Nom) => "der",
                (Singular, Masc, Case::Acc) => "den",
                (Singular, Masc | Neut, Case::Gen) => "des",
                (Singular, Masc | Neut, Case::Dat) => "dem",
                (Singular, Neut, Case::Nom | Case::Acc) => "das",
                (Singular, _, Case::Nom | Case::Acc) => "die",
                (Singular, _, Case::Gen | Case::Dat) => "der",
            })
        }
        (Language::De, Det::Indefinite) => {
            let c = case.unwrap_or(Case::Nom);
            match (number, g, c) {
                (Plural, _, _) => Option::None,
                (Singular, Masc, Case::Nom) => Some("ein"),
                (Singular, Masc, Case::Acc) => Some("einen"),
                (Singular, Masc | Neut, Case::Gen) => Some("eines"),
                (Singular, Masc | Neut, Case::Dat) => Some("einem"),
                (Singular, Neut, Case::Nom | Case::Acc) => Some("ein"),
                (Singular, _, Case::Nom | Case::Acc) => Some("eine"),
                (Singular, _, Case::Gen | Case::Dat) => Some("einer"),
            }
        }
    }
}

fn missing(lemma: &str, number: Number, case: Option<Case>) -> Error {
    Error::Realization {
        lemma: lemma.to_string(),
        form: FormKey::new(number, case).to_string(),
    }
}

fn noun_form(e: &LexicalEntry, number: Number, case: Option<Case>) -> Result<&str> {
    e.form(number, case).ok_or_else(|| missing(&e.lemma, number, case))
}

fn adjective<'a>(
    lex: &'a Lexicon,
    language: Language,
    lemma: &str,
    head: &LexicalEntry,
    number: Number,
    case: Option<Case>,
) -> Result<&'a str> {
    let e = lex.require_entry(language, lemma)?;
    e.adjective_form(head.gender, number, case)
        .ok_or_else(|| missing(lemma, number, case))
}

struct Resolved<'a> {
    filler: &'a Filler,
    realization: &'a FormalRealization,
}

fn resolve<'a>(schema: &'a ArgumentSchema, f: &'a Filler) -> Result<Resolved<'a>> {
    let slot = schema
        .slot(f.slot)
        .ok_or_else(|| Error::not_found(format!("slot Arg{} of sense `{}`", f.slot, schema.sense)))?;
    let realization = slot.realizations.get(f.realization).ok_or_else(|| {
        Error::not_found(format!("realization {} of Arg{}", f.realization, f.slot))
    })?;
    Ok(Resolved {
        filler: f,
        realization,
    })
}

fn push_nominal(
    lex: &Lexicon,
    language: Language,
    out: &mut Vec<Tok>,
    lemma: &str,
    number: Number,
    det: Det,
    case: Option<Case>,
) -> Result<()> {
    let e = lex.require_entry(language, lemma)?;
    if !e.is_proper() {
        if let Some(a) = article(language, det, e.agreement_gender(), number, case) {
            out.push(Tok::word(a));
        }
    }
    out.push(Tok::of_entry(noun_form(e, number, case)?.to_string(), e));
    Ok(())
}

/// Tokens in surface order, before elision and contraction.
pub fn realize_tokens(lex: &Lexicon, np: &NpSpec) -> Result<Vec<Tok>> {
    let lang = np.language;
    let schema = lex.schema(lang, &np.noun, &np.sense)?;
    let head = lex.require_entry(lang, &np.noun)?;
    let head_case = np.effective_head_case();
    let fillers = np
        .fillers
        .iter()
        .map(|f| resolve(schema, f))
        .collect::<Result<Vec<_>>>()?;
    let of_kind = |k: RealizationKind| fillers.iter().filter(move |r| r.realization.kind == k);
    let appo = |d: Direction| {
        of_kind(RealizationKind::Apposition)
            .filter(move |r| r.realization.direction.unwrap_or(Direction::After) == d)
    };

    let mut out = Vec::new();
    let head_form = noun_form(head, np.head_number, head_case)?;
    let compound = of_kind(RealizationKind::Compound).next();
    if appo(Direction::Before).next().is_none() {
        if let Some(a) = article(lang, np.head_determiner, head.agreement_gender(), np.head_number, head_case) {
            out.push(Tok::word(a));
        }
    }
    for m in &np.modifiers {
        out.push(Tok::word(adjective(lex, lang, m, head, np.head_number, head_case)?));
    }
    if lang == Language::De {
        for r in of_kind(RealizationKind::Adjectival) {
            out.push(Tok::word(adjective(lex, lang, &r.filler.lemma, head, np.head_number, head_case)?));
        }
    }
    for r in appo(Direction::Before) {
        let f = r.filler;
        push_nominal(lex, lang, &mut out, &f.lemma, f.number, Det::None, None)?;
    }
    match compound {
        Some(r) => {
            let e = lex.require_entry(lang, &r.filler.lemma)?;
            let first = e.compound_form.as_deref().ok_or_else(|| Error::Realization {
                lemma: e.lemma.clone(),
                form: "compound_form".to_string(),
            })?;
            out.push(Tok::word(&format!("{first}{}", head_form.to_lowercase())));
        }
        None => out.push(Tok::of_entry(head_form.to_string(), head)),
    }
    if lang != Language::De {
        for r in of_kind(RealizationKind::Adjectival) {
            out.push(Tok::word(adjective(lex, lang, &r.filler.lemma, head, np.head_number, head_case)?));
        }
    }
    for r in appo(Direction::After) {
        let f = r.filler;
        push_nominal(lex, lang, &mut out, &f.lemma, f.number, Det::None, None)?;
    }

    let mut linear: Vec<&Resolved> = fillers.iter().filter(|r| r.realization.is_linear()).collect();
    linear.sort_by_key(|r| schema.position(r.filler.slot));
    for r in linear {
        let f = r.filler;
        let case = if lang == Language::De { r.realization.filler_case() } else { None };
        if let Some(p) = &r.realization.preposition {
            out.push(Tok::word(p));
        }
        push_nominal(lex, lang, &mut out, &f.lemma, f.number, f.determiner, case)?;
        if let Some(p) = &f.paired {
            let pr = schema.slot(f.slot).and_then(|s| s.paired.as_ref());
            let second = pr.map_or("bis", |pr| pr.second.as_str());
            let case = if lang == Language::De { pr.and_then(|pr| pr.case).or(case) } else { None };
            out.push(Tok::word(second));
            push_nominal(lex, lang, &mut out, &p.lemma, p.number, p.determiner, case)?;
        }
    }
    Ok(out)
}

const CONTRACTIONS_ES: &[(&str, &str, &str)] = &[("de", "el", "del"), ("a", "el", "al")];
const CONTRACTIONS_FR: &[(&str, &str, &str)] = &[
    ("de", "le", "du"),
    ("de", "les", "des"),
    ("à", "le", "au"),
    ("à", "les", "aux"),
];
const CONTRACTIONS_DE: &[(&str, &str, &str)] = &[
    ("von", "dem", "vom"),
    ("in", "dem", "im"),
    ("zu", "dem", "zum"),
    ("zu", "der", "zur"),
    ("an", "dem", "am"),
    ("bei", "dem", "beim"),
];

pub(crate) fn contractions(language: Language) -> &'static [(&'static str, &'static str, &'static str)] {
    match language {
        Language::Es => CONTRACTIONS_ES,
        Language::Fr => CONTRACTIONS_FR,
        Language::De => CONTRACTIONS_DE,
    }
}

/// French words that elide before a vowel.
pub(crate) const ELIDING_FR: &[(&str, &str)] = &[("le", "l'"), ("la", "l'"), ("de", "d'")];

/// Elision first, then contraction; each pass is a single left-to-right scan.
pub fn rewrite(language: Language, toks: Vec<Tok>) -> Vec<Tok> {
    let mut elided: Vec<Tok> = Vec::with_capacity(toks.len());
    let mut it = toks.into_iter().peekable();
    while let Some(t) = it.next() {
        let elide = language == Language::Fr
            && it.peek().is_some_and(|n| n.vowel)
            && ELIDING_FR.iter().any(|(w, _)| *w == t.text);
        if elide {
            let short = ELIDING_FR.iter().find(|(w, _)| *w == t.text).map(|(_, s)| *s).unwrap_or("");
            let next = it.next().expect("peeked");
            elided.push(Tok {
                text: format!("{short}{}", next.text),
                vowel: false,
            });
        } else {
            elided.push(t);
        }
    }
    let table = contractions(language);
    let mut out: Vec<Tok> = Vec::with_capacity(elided.len());
    let mut it = elided.into_iter().peekable();
    while let Some(t) = it.next() {
        let hit = it
            .peek()
            .and_then(|n| table.iter().find(|(a, b, _)| *a == t.text && *b == n.text));
        match hit {
            Some((_, _, c)) => {
                it.next();
                out.push(Tok::word(c));
            }
            None => out.push(t),
        }
    }
    out
}

pub fn join(toks: &[Tok]) -> String {
    toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
}

pub fn realize_np(lex: &Lexicon, np: &NpSpec) -> Result<String> {
    let toks = realize_tokens(lex, np)?;
    Ok(join(&rewrite(np.language, toks)))
}
