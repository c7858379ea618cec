//! Consultive checking of user-written phrases: chunking, unification with the head's schemas, per-rule diagnoses.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::constraints::{check_constraints, Violation};
use crate::generator::{realization_code, TraceSlot};
use crate::lexicon::{
    normalize_phrase, ArgumentSchema, ArgumentSlot, Case, ClassId, Direction, Gender, Language, LexicalEntry, Lexicon,
    Number, RealizationKind,
};
use crate::np::{Det, Filler, NpSpec, PairedFiller};
use crate::realize::{article, contractions};

pub const UNKNOWN_HEAD: &str = "unknown-head";
pub const UNKNOWN_TOKEN: &str = "unknown-token";
pub const UNMATCHED_CHUNK: &str = "unmatched-chunk";
pub const AGREEMENT: &str = "agreement";

/// Byte range in the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reading {
    pub lemma: String,
    pub number: Number,
}

/// A matched word or multiword expression with every lexical reading of its form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nominal {
    pub text: String,
    pub surface: String,
    pub readings: Vec<Reading>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Chunk {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub article: Option<String>,
    pub determiner: Det,
    pub nominal: Nominal,
    pub span: Span,
}

impl Chunk {
    pub fn lemma(&self) -> &str {
        &self.nominal.readings[0].lemma
    }

    pub fn number(&self) -> Number {
        self.nominal.readings[0].number
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnknownToken {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParsedNp {
    pub language: Language,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub article: Option<String>,
    #[serde(skip)]
    article_span: Option<Span>,
    pub determiner: Det,
    pub premodifiers: Vec<Nominal>,
    pub appositions: Vec<Nominal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compound: Option<Nominal>,
    /// Head readings are restricted to nouns with argument schemas.
    pub head: Nominal,
    pub postmodifiers: Vec<Nominal>,
    pub chunks: Vec<Chunk>,
    pub unknown: Vec<UnknownToken>,
}

impl ParsedNp {
    pub fn head_lemma(&self) -> &str {
        &self.head.readings[0].lemma
    }

    pub fn head_number(&self) -> Number {
        self.head.readings[0].number
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Accepted,
    Rejected,
    UnknownHead,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchedSchema {
    pub sense: String,
    pub template: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub rule: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_schema: Option<MatchedSchema>,
    pub diagnoses: Vec<Diagnosis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceSlot>,
    /// The reading the verdict is based on.
    #[serde(skip)]
    pub np: Option<NpSpec>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.status == VerdictStatus::Accepted
    }

    pub fn rules(&self) -> Vec<&str> {
        self.diagnoses.iter().map(|d| d.rule.as_str()).collect()
    }
}

fn is_punct(c: char) -> bool {
    matches!(
        c,
        '*' | '{' | '}' | '(' | ')' | '[' | ']' | '"' | '«' | '»' | '¿' | '¡' | '.' | ',' | ';' | ':' | '!' | '?'
    )
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

/// Prepositions any schema, pairing or frame of the language uses.
pub(crate) fn prepositions(lex: &Lexicon, language: Language) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for n in lex.nouns(language) {
        for s in &n.senses {
            for slot in &s.slots {
                out.extend(slot.realizations.iter().filter_map(|r| r.preposition.clone()));
                if let Some(p) = &slot.paired {
                    out.insert(p.first.clone());
                    out.insert(p.second.clone());
                }
            }
        }
    }
    for f in lex.frames().iter().filter(|f| f.language == language) {
        out.extend(f.pattern.iter().filter_map(|p| p.preposition.clone()));
    }
    out.into_iter().map(|p| p.to_lowercase()).collect()
}

/// Splits on whitespace, strips punctuation and braces, undoes elision and contraction.
pub(crate) fn tokenize(language: Language, text: &str, preps: &BTreeSet<String>) -> Vec<Token> {
    let mut words = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                words.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    let contracted = contractions(language);
    let mut out: Vec<Token> = Vec::new();
    for (s, e) in words {
        let word = &text[s..e];
        let Some(a) = word.find(|c: char| !is_punct(c)) else { continue };
        let b = word.rfind(|c: char| !is_punct(c)).map(|i| i + word[i..].chars().next().map_or(1, char::len_utf8)).unwrap_or(word.len());
        let (s, word) = (s + a, &word[a..b]);
        let span = Span { start: s, end: s + word.len() };
        let lower = word.to_lowercase();
        if language == Language::Fr {
            if let Some(ap) = word.find(is_apostrophe) {
                let prefix = word[..ap].to_lowercase();
                let after = ap + word[ap..].chars().next().map_or(1, char::len_utf8);
                if (prefix == "l" || prefix == "d") && after < word.len() {
                    let first = if prefix == "l" { "l'" } else { "de" };
                    out.push(Token {
                        text: first.to_string(),
                        span: Span { start: s, end: s + after },
                    });
                    out.push(Token {
                        text: word[after..].to_lowercase(),
                        span: Span { start: s + after, end: span.end },
                    });
                    continue;
                }
            }
        }
        let indefinite_des = language == Language::Fr
            && lower == "des"
            && out.last().is_none_or(|t| preps.contains(&t.text));
        match contracted.iter().find(|(_, _, c)| *c == lower) {
            Some((p, d, _)) if !indefinite_des => {
                out.push(Token { text: p.to_string(), span });
                out.push(Token { text: d.to_string(), span });
            }
            _ => out.push(Token { text: lower, span }),
        }
    }
    out
}

/// Every article form of the language with its determiner.
fn article_table(language: Language) -> HashMap<String, Det> {
    let mut m = HashMap::new();
    let cases: &[Option<Case>] = match language {
        Language::De => &[Some(Case::Nom), Some(Case::Acc), Some(Case::Dat), Some(Case::Gen)],
        _ => &[None],
    };
    for det in [Det::Definite, Det::Indefinite] {
        for g in [Gender::Masc, Gender::Fem, Gender::Neut] {
            for n in [Number::Singular, Number::Plural] {
                for c in cases {
                    if let Some(a) = article(language, det, g, n, *c) {
                        m.insert(a.to_string(), det);
                    }
                }
            }
        }
    }
    if language == Language::Fr {
        m.insert("l'".to_string(), Det::Definite);
    }
    m
}

fn article_agrees(language: Language, token: &str, det: Det, e: &LexicalEntry, number: Number, case: Option<Case>) -> bool {
    if token == "l'" {
        return language == Language::Fr && det == Det::Definite && number == Number::Singular;
    }
    article(language, det, e.agreement_gender(), number, case) == Some(token)
}

pub(crate) struct Matcher<'a> {
    pub lex: &'a Lexicon,
    pub language: Language,
    pub text: &'a str,
    pub toks: &'a [Token],
}

impl Matcher<'_> {
    /// Longest entry form starting at `i` whose entry satisfies `pred`.
    pub(crate) fn longest(&self, i: usize, pred: impl Fn(&LexicalEntry) -> bool) -> Option<(usize, Nominal)> {
        let idx = self.lex.form_index(self.language)?;
        let max = idx.max_tokens.min(self.toks.len().saturating_sub(i));
        for len in (1..=max).rev() {
            let key = self.toks[i..i + len].iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
            let Some(hits) = idx.by_form.get(&key) else { continue };
            let mut readings: Vec<Reading> = Vec::new();
            for h in hits {
                let e = self.lex.entry_at(h.entry);
                let r = Reading {
                    lemma: e.lemma.clone(),
                    number: h.key.number,
                };
                if pred(e) && !readings.contains(&r) {
                    readings.push(r);
                }
            }
            if !readings.is_empty() {
                return Some((len, self.nominal(i, len, key, readings)));
            }
        }
        None
    }

    fn nominal(&self, i: usize, len: usize, text: String, readings: Vec<Reading>) -> Nominal {
        let span = Span {
            start: self.toks[i].span.start,
            end: self.toks[i + len - 1].span.end,
        };
        Nominal {
            text,
            surface: self.text[span.start..span.end].to_string(),
            readings,
            span,
        }
    }

    fn is_head(&self, e: &LexicalEntry) -> bool {
        !e.is_adjective() && self.lex.noun(self.language, &e.lemma).is_some()
    }

    /// Head noun at `i`, possibly as the second member of a compound.
    fn head(&self, i: usize) -> Option<(Nominal, Option<Nominal>)> {
        let idx = self.lex.form_index(self.language)?;
        let t = &self.toks[i];
        let direct = |key: &str| -> Vec<Reading> {
            let mut v: Vec<Reading> = Vec::new();
            for h in idx.by_form.get(key).into_iter().flatten() {
                let e = self.lex.entry_at(h.entry);
                let r = Reading {
                    lemma: e.lemma.clone(),
                    number: h.key.number,
                };
                if self.is_head(e) && !v.contains(&r) {
                    v.push(r);
                }
            }
            v
        };
        let readings = direct(&t.text);
        if !readings.is_empty() {
            return Some((self.nominal(i, 1, t.text.clone(), readings), None));
        }
        for (cf, ei) in &idx.compounds {
            let Some(rest) = t.text.strip_prefix(cf.as_str()) else { continue };
            if rest.is_empty() {
                continue;
            }
            let readings = direct(rest);
            if readings.is_empty() {
                continue;
            }
            let e = self.lex.entry_at(*ei);
            let first = Nominal {
                text: cf.clone(),
                surface: self.text[t.span.start..t.span.end].to_string(),
                readings: vec![Reading {
                    lemma: e.lemma.clone(),
                    number: Number::Singular,
                }],
                span: t.span,
            };
            let mut head = self.nominal(i, 1, rest.to_string(), readings);
            head.surface = first.surface.clone();
            return Some((head, Some(first)));
        }
        None
    }
}

pub(crate) fn parse_tokens(lex: &Lexicon, language: Language, text: &str, toks: &[Token], preps: &BTreeSet<String>) -> Option<ParsedNp> {
    let m = Matcher { lex, language, text, toks };
    let arts = article_table(language);
    let mut unknown = Vec::new();
    let mut i = 0;
    let mut art = None;
    if let Some(t) = toks.first() {
        if let Some(&d) = arts.get(&t.text) {
            art = Some((t.text.clone(), d, t.span));
            i = 1;
        }
    }
    let mut premodifiers = Vec::new();
    let mut appositions = Vec::new();
    let (head, compound) = loop {
        if i >= toks.len() {
            return None;
        }
        let multi = m.longest(i, |e| !e.is_adjective()).filter(|(len, _)| *len > 1);
        if multi.is_none() {
            if let Some(h) = m.head(i) {
                i += 1;
                break h;
            }
        }
        if let Some((len, adj)) = m.longest(i, LexicalEntry::is_adjective) {
            premodifiers.push(adj);
            i += len;
        } else if let Some((len, n)) = multi.or_else(|| m.longest(i, |e| !e.is_adjective())) {
            appositions.push(n);
            i += len;
        } else {
            unknown.push(UnknownToken {
                text: toks[i].text.clone(),
                span: toks[i].span,
            });
            i += 1;
        }
    };
    let mut postmodifiers = Vec::new();
    if language != Language::De {
        while i < toks.len() {
            let nominal = m.longest(i, |e| !e.is_adjective()).map_or(0, |(l, _)| l);
            match m.longest(i, LexicalEntry::is_adjective) {
                Some((len, adj)) if len >= nominal => {
                    postmodifiers.push(adj);
                    i += len;
                }
                _ => break,
            }
        }
    }
    let mut chunks = Vec::new();
    while i < toks.len() {
        let start = i;
        let mut j = i;
        let prep = preps.contains(&toks[j].text).then(|| toks[j].text.clone());
        if prep.is_some() {
            j += 1;
        }
        let mut chunk_art = None;
        if let Some(&d) = toks.get(j).and_then(|t| arts.get(&t.text)) {
            let has_noun_after = j + 1 < toks.len() && m.longest(j + 1, |e| !e.is_adjective()).is_some();
            if has_noun_after {
                chunk_art = Some((toks[j].text.clone(), d));
                j += 1;
            }
        }
        match (j < toks.len()).then(|| m.longest(j, |e| !e.is_adjective())).flatten() {
            Some((len, nominal)) => {
                let span = Span {
                    start: toks[start].span.start,
                    end: nominal.span.end,
                };
                chunks.push(Chunk {
                    preposition: prep,
                    determiner: chunk_art.as_ref().map_or(Det::None, |a| a.1),
                    article: chunk_art.map(|a| a.0),
                    nominal,
                    span,
                });
                i = j + len;
            }
            None => {
                let end = j.min(toks.len() - 1);
                for t in &toks[start..=end] {
                    unknown.push(UnknownToken {
                        text: t.text.clone(),
                        span: t.span,
                    });
                }
                i = end + 1;
            }
        }
    }
    Some(ParsedNp {
        language,
        determiner: art.as_ref().map_or(Det::None, |a| a.1),
        article_span: art.as_ref().map(|a| a.2),
        article: art.map(|a| a.0),
        premodifiers,
        appositions,
        compound,
        head,
        postmodifiers,
        chunks,
        unknown,
    })
}

/// Chunks a phrase into head and dependents; `None` when no known head noun occurs.
pub fn parse_np(lex: &Lexicon, language: Language, text: &str) -> Option<ParsedNp> {
    let preps = prepositions(lex, language);
    let toks = tokenize(language, text, &preps);
    parse_tokens(lex, language, text, &toks, &preps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prev {
    Filler(usize),
    Modifier,
    Other,
}

#[derive(Debug, Clone)]
struct State {
    fillers: Vec<Filler>,
    spans: Vec<Span>,
    modifiers: Vec<String>,
    attached: usize,
    unmatched: Vec<Diagnosis>,
    extra: Vec<Diagnosis>,
    notes: Vec<String>,
    last_pos: Option<usize>,
    prev: Prev,
}

struct Unifier<'a> {
    lex: &'a Lexicon,
    language: Language,
    noun: &'a str,
    head: &'a LexicalEntry,
    schema: &'a ArgumentSchema,
    parsed: &'a ParsedNp,
    head_number: Number,
    head_case: Option<Case>,
}

#[derive(Debug, Clone)]
struct Reading2 {
    np: NpSpec,
    spans: Vec<Span>,
    violations: Vec<Diagnosis>,
    unmatched: Vec<Diagnosis>,
    notes: Vec<String>,
    attached: usize,
}

impl Reading2 {
    fn cost(&self) -> (usize, usize, isize, usize) {
        (
            self.unmatched.len(),
            self.violations.len(),
            -(self.np.fillers.len() as isize),
            self.attached + self.np.modifiers.len(),
        )
    }
}

fn is_adnominal(language: Language, prep: Option<&str>) -> bool {
    match language {
        Language::De => matches!(prep, None | Some("von")),
        _ => prep == Some("de"),
    }
}

impl Unifier<'_> {
    fn slot_case(&self, kind_case: Option<Case>) -> Option<Case> {
        if self.language == Language::De {
            kind_case
        } else {
            None
        }
    }

    /// Candidate class and reading of a nominal in a slot; falls back to the first allowed class.
    fn candidate<'n>(&self, slot: &ArgumentSlot, r_admits: impl Fn(&ClassId) -> bool, n: &'n Nominal) -> (ClassId, &'n Reading) {
        for rd in &n.readings {
            let hit = slot
                .members
                .iter()
                .filter(|(c, _)| r_admits(c))
                .chain(slot.members.iter())
                .find(|(_, cands)| cands.iter().any(|c| c.lemma == rd.lemma));
            if let Some((c, _)) = hit {
                return (c.clone(), rd);
            }
        }
        let class = slot.members.keys().find(|c| r_admits(c)).or_else(|| slot.members.keys().next());
        (class.cloned().unwrap_or_else(|| ClassId::from("")), &n.readings[0])
    }

    /// Number of `lemma` in `n` whose form and article fit `case`; `false` when none does.
    fn number_for(&self, n: &Nominal, lemma: &str, art: Option<&str>, det: Det, case: Option<Case>) -> (Number, bool) {
        let Some(e) = self.lex.entry(self.language, lemma) else {
            return (n.readings[0].number, false);
        };
        let mut first = None;
        for rd in n.readings.iter().filter(|r| r.lemma == lemma) {
            first.get_or_insert(rd.number);
            let form_ok = e.form(rd.number, case).map(normalize_phrase).as_deref() == Some(n.text.as_str());
            let art_ok = art.is_none_or(|a| e.is_proper() || article_agrees(self.language, a, det, e, rd.number, case));
            if form_ok && art_ok {
                return (rd.number, true);
            }
        }
        (first.unwrap_or(n.readings[0].number), false)
    }

    fn agreement(&self, n: &Nominal, slot: Option<u8>) -> Diagnosis {
        Diagnosis {
            rule: AGREEMENT.to_string(),
            message: format!("`{}` does not agree in form with its context", n.surface),
            span: Some(n.span),
            slot,
        }
    }

    fn used(&self, st: &State, slot: u8) -> bool {
        st.fillers.iter().any(|f| f.slot == slot)
    }

    fn adjective_form_ok(&self, n: &Nominal, lemma: &str) -> bool {
        self.lex
            .entry(self.language, lemma)
            .and_then(|e| e.adjective_form(self.head.gender, self.head_number, self.head_case))
            .map(normalize_phrase)
            .as_deref()
            == Some(n.text.as_str())
    }

    fn adjective_options(&self, st: &State, n: &Nominal, prenominal: bool) -> Vec<State> {
        let mut out = Vec::new();
        let filler_side = (self.language == Language::De) == prenominal;
        if filler_side {
            for slot in &self.schema.slots {
                if self.used(st, slot.index) {
                    continue;
                }
                let role_adjs = self.lex.role_adjectives(self.language, self.noun, &self.schema.sense, slot.index);
                for (ri, r) in slot.realizations.iter().enumerate().filter(|(_, r)| r.kind == RealizationKind::Adjectival) {
                    for rd in &n.readings {
                        let Some(e) = role_adjs.iter().find(|e| e.lemma == rd.lemma) else { continue };
                        let class = e
                            .classes
                            .iter()
                            .find(|c| slot.members.keys().any(|k| k.contains(c) || c.contains(k)) && r.admits_class(c))
                            .or_else(|| e.classes.iter().next())
                            .cloned()
                            .unwrap_or_else(|| ClassId::from(""));
                        let mut s = st.clone();
                        if !self.adjective_form_ok(n, &rd.lemma) {
                            s.extra.push(self.agreement(n, Some(slot.index)));
                        }
                        s.fillers.push(Filler {
                            slot: slot.index,
                            realization: ri,
                            class,
                            lemma: rd.lemma.clone(),
                            number: self.head_number,
                            determiner: Det::None,
                            paired: None,
                        });
                        s.spans.push(n.span);
                        out.push(s);
                    }
                }
            }
        }
        let lemma = &n.readings[0].lemma;
        let mut s = st.clone();
        if !self.adjective_form_ok(n, lemma) {
            s.extra.push(self.agreement(n, None));
        }
        s.modifiers.push(lemma.clone());
        s.notes.push(format!("`{}` is a free modifier of `{}`, not an argument", n.surface, self.noun));
        out.push(s);
        out
    }

    /// Options for a bare nominal realized by one of the non-linear kinds.
    fn nominal_options(&self, st: &State, n: &Nominal, kind: RealizationKind, dir: Option<Direction>, what: &str) -> Vec<State> {
        let mut out = Vec::new();
        for slot in &self.schema.slots {
            if self.used(st, slot.index) {
                continue;
            }
            for (ri, r) in slot.realizations.iter().enumerate() {
                if r.kind != kind || (kind == RealizationKind::Apposition && r.direction.unwrap_or(Direction::After) != dir.unwrap_or(Direction::After)) {
                    continue;
                }
                let (class, rd) = self.candidate(slot, |c| r.admits_class(c), n);
                let number = if kind == RealizationKind::Compound { Number::Singular } else { rd.number };
                let mut s = st.clone();
                s.fillers.push(Filler {
                    slot: slot.index,
                    realization: ri,
                    class,
                    lemma: rd.lemma.clone(),
                    number,
                    determiner: Det::None,
                    paired: None,
                });
                s.spans.push(n.span);
                out.push(s);
            }
        }
        let mut s = st.clone();
        s.unmatched.push(Diagnosis {
            rule: UNMATCHED_CHUNK.to_string(),
            message: format!("{what} `{}` fills no argument slot of `{}`", n.surface, self.noun),
            span: Some(n.span),
            slot: None,
        });
        out.push(s);
        out
    }

    fn chunk_options(&self, st: &State, c: &Chunk) -> Vec<State> {
        let mut out = Vec::new();
        let prep = c.preposition.as_deref();
        let art = c.article.as_deref();
        if let Prev::Filler(fi) = st.prev {
            let f = &st.fillers[fi];
            let slot = self.schema.slot(f.slot).expect("assigned slot exists");
            let r = &slot.realizations[f.realization];
            if let Some(pr) = slot.paired.as_ref().filter(|pr| pr.applies(r, &f.class)) {
                if f.paired.is_none() && prep == Some(pr.second.as_str()) {
                    let (_, rd) = self.candidate(slot, |_| true, &c.nominal);
                    let case = self.slot_case(pr.case.or(r.filler_case()));
                    let (number, ok) = self.number_for(&c.nominal, &rd.lemma, art, c.determiner, case);
                    let mut s = st.clone();
                    if !ok {
                        s.extra.push(self.agreement(&c.nominal, Some(f.slot)));
                    }
                    s.fillers[fi].paired = Some(PairedFiller {
                        lemma: rd.lemma.clone(),
                        number,
                        determiner: c.determiner,
                    });
                    s.prev = Prev::Other;
                    out.push(s);
                }
            }
            if r.attaches_following && is_adnominal(self.language, prep) {
                out.push(self.attach(st, c, &f.lemma));
                return out;
            }
        }
        for slot in &self.schema.slots {
            if self.used(st, slot.index) {
                continue;
            }
            for (ri, r) in slot.realizations.iter().enumerate() {
                let fits = match r.kind {
                    RealizationKind::Prepositional => prep.is_some() && r.preposition.as_deref().map(str::to_lowercase).as_deref() == prep,
                    RealizationKind::Genitive => prep.is_none() && self.language == Language::De,
                    RealizationKind::Apposition => prep.is_none() && art.is_none() && r.direction != Some(Direction::Before),
                    _ => false,
                };
                if !fits {
                    continue;
                }
                let pos = self.schema.position(slot.index);
                if r.is_linear() && st.last_pos.is_some_and(|l| pos <= l) {
                    continue;
                }
                let (class, rd) = self.candidate(slot, |cl| r.admits_class(cl), &c.nominal);
                let case = self.slot_case(r.filler_case());
                let (number, ok) = self.number_for(&c.nominal, &rd.lemma, art, c.determiner, case);
                let mut s = st.clone();
                if !ok {
                    s.extra.push(self.agreement(&c.nominal, Some(slot.index)));
                }
                s.fillers.push(Filler {
                    slot: slot.index,
                    realization: ri,
                    class,
                    lemma: rd.lemma.clone(),
                    number,
                    determiner: c.determiner,
                    paired: None,
                });
                s.spans.push(c.span);
                if r.is_linear() {
                    s.last_pos = Some(pos);
                }
                s.prev = Prev::Filler(s.fillers.len() - 1);
                out.push(s);
            }
        }
        if is_adnominal(self.language, prep) {
            let host = match st.prev {
                Prev::Filler(fi) => Some(st.fillers[fi].lemma.clone()),
                Prev::Modifier => Some("the preceding phrase".to_string()),
                Prev::Other => None,
            };
            if let Some(h) = host {
                out.push(self.attach(st, c, &h));
            }
        }
        let mut s = st.clone();
        s.unmatched.push(Diagnosis {
            rule: UNMATCHED_CHUNK.to_string(),
            message: format!("`{}` fills no argument slot of `{}`", self.surface(c), self.noun),
            span: Some(c.span),
            slot: None,
        });
        s.prev = Prev::Other;
        out.push(s);
        out
    }

    fn surface(&self, c: &Chunk) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if let Some(p) = &c.preposition {
            parts.push(p);
        }
        if let Some(a) = &c.article {
            parts.push(a);
        }
        parts.push(&c.nominal.surface);
        parts.join(" ")
    }

    fn attach(&self, st: &State, c: &Chunk, host: &str) -> State {
        let mut s = st.clone();
        s.attached += 1;
        s.prev = Prev::Modifier;
        s.notes.push(format!(
            "`{}` modifies `{host}` and is not an argument of `{}`",
            self.surface(c),
            self.noun
        ));
        s
    }

    fn run(&self, base: Vec<Diagnosis>) -> Option<Reading2> {
        enum Item<'p> {
            Adj(&'p Nominal, bool),
            Nom(&'p Nominal, RealizationKind, Option<Direction>, &'static str),
            Chunk(&'p Chunk),
        }
        let p = self.parsed;
        let mut items: Vec<Item> = Vec::new();
        items.extend(p.premodifiers.iter().map(|n| Item::Adj(n, true)));
        items.extend(p.postmodifiers.iter().map(|n| Item::Adj(n, false)));
        items.extend(p.compound.iter().map(|n| Item::Nom(n, RealizationKind::Compound, None, "compound member")));
        items.extend(p.appositions.iter().map(|n| Item::Nom(n, RealizationKind::Apposition, Some(Direction::Before), "apposition")));
        items.extend(p.chunks.iter().map(Item::Chunk));

        let start = State {
            fillers: Vec::new(),
            spans: Vec::new(),
            modifiers: Vec::new(),
            attached: 0,
            unmatched: Vec::new(),
            extra: base,
            notes: Vec::new(),
            last_pos: None,
            prev: Prev::Other,
        };
        let mut best: Option<Reading2> = None;
        let mut stack = vec![(0usize, start)];
        // Depth-first with an explicit stack; later options are pushed first so earlier ones win ties.
        while let Some((k, st)) = stack.pop() {
            if k == items.len() {
                let r = self.finish(st);
                if best.as_ref().is_none_or(|b| r.cost() < b.cost()) {
                    best = Some(r);
                }
                continue;
            }
            let next = match &items[k] {
                Item::Adj(n, pre) => self.adjective_options(&st, n, *pre),
                Item::Nom(n, kind, dir, what) => self.nominal_options(&st, n, *kind, *dir, what),
                Item::Chunk(c) => self.chunk_options(&st, c),
            };
            for s in next.into_iter().rev() {
                stack.push((k + 1, s));
            }
        }
        best
    }

    fn finish(&self, st: State) -> Reading2 {
        let mut np = NpSpec::new(self.language, self.noun, &self.schema.sense, self.head_number);
        np.head_case = self.head_case.filter(|_| self.language == Language::De);
        np.head_determiner = self.parsed.determiner;
        np.modifiers = st.modifiers;
        np.fillers = st.fillers;
        let span_of = |slot: Option<u8>| -> Option<Span> {
            match slot {
                Some(s) => np.fillers.iter().position(|f| f.slot == s).map(|i| st.spans[i]).or(Some(self.parsed.head.span)),
                None => Some(self.parsed.head.span),
            }
        };
        let mut violations: Vec<Diagnosis> = check_constraints(self.lex, &np)
            .into_iter()
            .map(|Violation { rule, slot, message }| Diagnosis {
                span: span_of(slot),
                rule,
                message,
                slot,
            })
            .collect();
        violations.extend(st.extra);
        Reading2 {
            np,
            spans: st.spans,
            violations,
            unmatched: st.unmatched,
            notes: st.notes,
            attached: st.attached,
        }
    }
}

pub(crate) fn template_id(lex: &Lexicon, np: &NpSpec) -> String {
    let schema = lex.schema(np.language, &np.noun, &np.sense).ok();
    let mut fillers: Vec<&Filler> = np.fillers.iter().collect();
    fillers.sort_by_key(|f| f.slot);
    std::iter::once(np.head_number.short().to_string())
        .chain(fillers.iter().map(|f| {
            let code = schema
                .and_then(|s| s.slot(f.slot))
                .filter(|s| f.realization < s.realizations.len())
                .map_or_else(|| f.realization.to_string(), |s| realization_code(s, f.realization));
            format!("{}:{code}", f.slot)
        }))
        .collect::<Vec<_>>()
        .join("|")
}

pub(crate) fn trace_of(lex: &Lexicon, np: &NpSpec) -> Vec<TraceSlot> {
    let Ok(schema) = lex.schema(np.language, &np.noun, &np.sense) else { return Vec::new() };
    let mut fillers: Vec<&Filler> = np.fillers.iter().collect();
    fillers.sort_by_key(|f| f.slot);
    fillers
        .into_iter()
        .filter_map(|f| {
            let slot = schema.slot(f.slot)?;
            (f.realization < slot.realizations.len()).then(|| TraceSlot {
                slot: f.slot,
                role: slot.role.clone(),
                class: f.class.clone(),
                lemma: f.lemma.clone(),
                number: f.number,
                determiner: f.determiner,
                realization: realization_code(slot, f.realization),
                paired: f.paired.clone(),
            })
        })
        .collect()
}

fn unknown_head(text: &str) -> Verdict {
    Verdict {
        status: VerdictStatus::UnknownHead,
        matched_schema: None,
        diagnoses: vec![Diagnosis {
            rule: UNKNOWN_HEAD.to_string(),
            message: format!("no known head noun in `{}`", text.trim()),
            span: None,
            slot: None,
        }],
        notes: Vec::new(),
        trace: Vec::new(),
        np: None,
    }
}

pub(crate) fn validate_parsed(lex: &Lexicon, text: &str, parsed: Option<ParsedNp>) -> Verdict {
    let Some(parsed) = parsed else { return unknown_head(text) };
    let language = parsed.language;
    let unknown: Vec<Diagnosis> = parsed
        .unknown
        .iter()
        .map(|u| Diagnosis {
            rule: UNKNOWN_TOKEN.to_string(),
            message: format!("`{}` is not in the lexicon", &text[u.span.start..u.span.end]),
            span: Some(u.span),
            slot: None,
        })
        .collect();
    let cases: &[Option<Case>] = match language {
        Language::De => &[Some(Case::Nom), Some(Case::Acc), Some(Case::Dat), Some(Case::Gen)],
        _ => &[None],
    };
    let mut lemmas: Vec<&str> = Vec::new();
    for r in &parsed.head.readings {
        if !lemmas.contains(&r.lemma.as_str()) {
            lemmas.push(&r.lemma);
        }
    }
    let mut best: Option<Reading2> = None;
    let mut alternatives: Vec<String> = Vec::new();
    for lemma in lemmas {
        let (Some(noun), Some(head)) = (lex.noun(language, lemma), lex.entry(language, lemma)) else { continue };
        let mut heads: Vec<(Number, Option<Case>)> = Vec::new();
        for r in parsed.head.readings.iter().filter(|r| r.lemma == lemma) {
            for &c in cases {
                let form_ok = head.form(r.number, c).map(normalize_phrase).as_deref() == Some(parsed.head.text.as_str());
                let art_ok = parsed
                    .article
                    .as_deref()
                    .is_none_or(|a| article_agrees(language, a, parsed.determiner, head, r.number, c));
                if form_ok && art_ok && !heads.contains(&(r.number, c)) {
                    heads.push((r.number, c));
                }
            }
        }
        let mut base = Vec::new();
        if heads.is_empty() {
            let n = parsed.head.readings.iter().find(|r| r.lemma == lemma).map_or(Number::Singular, |r| r.number);
            heads.push((n, cases[0]));
            base.push(Diagnosis {
                rule: AGREEMENT.to_string(),
                message: format!("the article does not agree with `{}`", parsed.head.surface),
                span: parsed.article_span.or(Some(parsed.head.span)),
                slot: None,
            });
        }
        for schema in &noun.senses {
            for &(number, case) in &heads {
                let u = Unifier {
                    lex,
                    language,
                    noun: lemma,
                    head,
                    schema,
                    parsed: &parsed,
                    head_number: number,
                    head_case: case,
                };
                let Some(r) = u.run(base.clone()) else { continue };
                match &best {
                    Some(b) if r.cost() >= b.cost() => {
                        if r.cost().0 == 0 && r.cost().1 == 0 {
                            let id = format!("{}:{}", r.np.sense, template_id(lex, &r.np));
                            let bid = format!("{}:{}", b.np.sense, template_id(lex, &b.np));
                            if id != bid && !alternatives.contains(&id) {
                                alternatives.push(id);
                            }
                        }
                    }
                    _ => best = Some(r),
                }
            }
        }
    }
    let Some(best) = best else { return unknown_head(text) };
    let mut diagnoses = unknown;
    diagnoses.extend(best.unmatched.iter().cloned());
    diagnoses.extend(best.violations.iter().cloned());
    let mut notes = best.notes.clone();
    notes.extend(alternatives.into_iter().map(|a| format!("alternative reading {a}")));
    let _ = &best.spans;
    Verdict {
        status: if diagnoses.is_empty() { VerdictStatus::Accepted } else { VerdictStatus::Rejected },
        matched_schema: Some(MatchedSchema {
            sense: best.np.sense.clone(),
            template: template_id(lex, &best.np),
        }),
        diagnoses,
        notes,
        trace: trace_of(lex, &best.np),
        np: Some(best.np),
    }
}

/// Accepted iff some schema of the head unifies with every chunk and no restriction is violated.
pub fn validate_phrase(lex: &Lexicon, language: Language, text: &str) -> Verdict {
    validate_parsed(lex, text, parse_np(lex, language, text))
}
