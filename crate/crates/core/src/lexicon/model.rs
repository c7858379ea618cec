use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Es,
    Fr,
    De,
}

impl Language {
    pub const ALL: [Language; 3] = [Language::Es, Language::Fr, Language::De];

    pub fn code(self) -> &'static str {
        match self {
            Language::Es => "es",
            Language::Fr => "fr",
            Language::De => "de",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "es" => Ok(Language::Es),
            "fr" => Ok(Language::Fr),
            "de" => Ok(Language::De),
            other => Err(format!("unsupported language `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
}

impl Number {
    pub const ALL: [Number; 2] = [Number::Singular, Number::Plural];

    pub fn short(self) -> &'static str {
        match self {
            Number::Singular => "sg",
            Number::Plural => "pl",
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Number::Singular => "singular",
            Number::Plural => "plural",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Nom,
    Gen,
    Dat,
    Acc,
}

impl Case {
    fn short(self) -> &'static str {
        match self {
            Case::Nom => "nom",
            Case::Gen => "gen",
            Case::Dat => "dat",
            Case::Acc => "acc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Gender {
    #[serde(rename = "masc")]
    Masc,
    #[serde(rename = "fem")]
    Fem,
    #[serde(rename = "neut")]
    Neut,
    #[default]
    #[serde(rename = "n/a")]
    None,
}

impl Gender {
    fn short(self) -> Option<&'static str> {
        match self {
            Gender::Masc => Some("m"),
            Gender::Fem => Some("f"),
            Gender::Neut => Some("n"),
            Gender::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Pleasant,
    Unpleasant,
    #[default]
    Neutral,
}

impl Polarity {
    pub fn is_neutral(&self) -> bool {
        *self == Polarity::Neutral
    }

    /// True for a pleasant/unpleasant pair; neutral opposes nothing.
    pub fn opposes(self, other: Polarity) -> bool {
        matches!(
            (self, other),
            (Polarity::Pleasant, Polarity::Unpleasant) | (Polarity::Unpleasant, Polarity::Pleasant)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PartOfSpeech {
    #[default]
    Noun,
    Proper,
    Adjective,
}

/// Key of a form table: `[gender.]number[.case]`, e.g. `sg`, `pl.dat`, `f.sg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormKey {
    pub gender: Option<Gender>,
    pub number: Number,
    pub case: Option<Case>,
}

impl FormKey {
    pub fn new(number: Number, case: Option<Case>) -> Self {
        FormKey {
            gender: None,
            number,
            case,
        }
    }
}

impl fmt::Display for FormKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.gender.and_then(Gender::short) {
            write!(f, "{g}.")?;
        }
        f.write_str(self.number.short())?;
        if let Some(c) = self.case {
            write!(f, ".{}", c.short())?;
        }
        Ok(())
    }
}

impl FromStr for FormKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('.').peekable();
        let gender = match parts.peek() {
            Some(&"m") => Some(Gender::Masc),
            Some(&"f") => Some(Gender::Fem),
            Some(&"n") => Some(Gender::Neut),
            _ => None,
        };
        if gender.is_some() {
            parts.next();
        }
        let number = match parts.next() {
            Some("sg") => Number::Singular,
            Some("pl") => Number::Plural,
            _ => return Err(format!("bad form key `{s}`")),
        };
        let case = match parts.next() {
            None => None,
            Some("nom") => Some(Case::Nom),
            Some("gen") => Some(Case::Gen),
            Some("dat") => Some(Case::Dat),
            Some("acc") => Some(Case::Acc),
            Some(_) => return Err(format!("bad case in form key `{s}`")),
        };
        if parts.next().is_some() {
            return Err(format!("bad form key `{s}`"));
        }
        Ok(FormKey {
            gender,
            number,
            case,
        })
    }
}

impl Serialize for FormKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FormKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dotted class path, e.g. `animado.humano.familia`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub String);

impl ClassId {
    pub fn new(s: impl Into<String>) -> Self {
        ClassId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.split('.').count()
    }

    pub fn parent(&self) -> Option<ClassId> {
        self.0.rsplit_once('.').map(|(p, _)| ClassId(p.to_string()))
    }

    /// Ancestor-or-self test on the dotted path.
    pub fn contains(&self, other: &ClassId) -> bool {
        other.0 == self.0
            || (other.0.len() > self.0.len()
                && other.0.starts_with(&self.0)
                && other.0.as_bytes()[self.0.len()] == b'.')
    }

    /// The prefix of this path at `depth` levels, if the path is that deep.
    pub fn ancestor_at(&self, depth: usize) -> Option<ClassId> {
        if depth == 0 || depth > self.depth() {
            return None;
        }
        Some(ClassId(
            self.0.split('.').take(depth).collect::<Vec<_>>().join("."),
        ))
    }

    /// Either path is an ancestor-or-self of the other.
    pub fn overlaps(&self, other: &ClassId) -> bool {
        self.contains(other) || other.contains(self)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoleId(pub String);

impl fmt::Display for RoleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoleGroup {
    AgentiveAffected,
    ClassificativeSituative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticRole {
    pub id: RoleId,
    pub group: RoleGroup,
    #[serde(default)]
    pub gloss: BTreeMap<Language, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub id: ClassId,
    #[serde(default)]
    pub gloss: BTreeMap<Language, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default, skip_serializing_if = "Polarity::is_neutral")]
    pub connotation: Polarity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexicalEntry {
    pub lemma: String,
    pub language: Language,
    #[serde(default, skip_serializing_if = "is_default_pos")]
    pub pos: PartOfSpeech,
    #[serde(default)]
    pub gender: Gender,
    /// A `null` value marks a form that is explicitly absent (plural-only lexemes).
    pub forms: BTreeMap<FormKey, Option<String>>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub classes: BTreeSet<ClassId>,
    #[serde(default, skip_serializing_if = "Polarity::is_neutral")]
    pub polarity: Polarity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vowel_initial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compound_form: Option<String>,
    /// Gender used for article agreement when it differs from the grammatical one (es. el agua).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article_gender: Option<Gender>,
}

fn is_default_pos(p: &PartOfSpeech) -> bool {
    *p == PartOfSpeech::Noun
}

impl LexicalEntry {
    /// Noun form lookup. Case forms are stored only where they differ from the base form.
    pub fn form(&self, number: Number, case: Option<Case>) -> Option<&str> {
        let exact = self.forms.get(&FormKey::new(number, case));
        match exact {
            Some(v) => v.as_deref(),
            None if case.is_some() => self
                .forms
                .get(&FormKey::new(number, None))
                .and_then(|v| v.as_deref()),
            None => None,
        }
    }

    /// Adjective form agreeing with a head; falls back to gender-invariant and case-less keys.
    pub fn adjective_form(&self, gender: Gender, number: Number, case: Option<Case>) -> Option<&str> {
        let g = match gender {
            Gender::None => None,
            g => Some(g),
        };
        let mut keys = Vec::with_capacity(4);
        for gk in [g, None] {
            if let Some(c) = case {
                keys.push(FormKey {
                    gender: gk,
                    number,
                    case: Some(c),
                });
            }
            keys.push(FormKey {
                gender: gk,
                number,
                case: None,
            });
        }
        keys.iter()
            .find_map(|k| self.forms.get(k))
            .and_then(|v| v.as_deref())
    }

    pub fn has_number(&self, number: Number) -> bool {
        self.forms
            .iter()
            .any(|(k, v)| k.number == number && v.is_some())
    }

    pub fn is_proper(&self) -> bool {
        self.pos == PartOfSpeech::Proper
    }

    pub fn is_adjective(&self) -> bool {
        self.pos == PartOfSpeech::Adjective
    }

    pub fn agreement_gender(&self) -> Gender {
        self.article_gender.unwrap_or(self.gender)
    }

    pub fn starts_with_vowel(&self) -> bool {
        self.vowel_initial
            .unwrap_or_else(|| starts_with_vowel(&self.lemma))
    }
}

pub(crate) fn starts_with_vowel(s: &str) -> bool {
    s.chars().next().is_some_and(|c| {
        matches!(
            c.to_lowercase().next().unwrap_or(c),
            'a' | 'e' | 'i' | 'o' | 'u' | 'h' | 'y' | 'à' | 'â' | 'é' | 'è' | 'ê' | 'î' | 'ï' | 'ô' | 'û'
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizationKind {
    Prepositional,
    Genitive,
    Apposition,
    Compound,
    Adjectival,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminerPolicy {
    RequiredDefinite,
    RequiredIndefinite,
    Forbidden,
    #[default]
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FillerNumberPolicy {
    Singular,
    Plural,
    Both,
    #[default]
    PerCandidate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Before,
    After,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalRealization {
    pub kind: RealizationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(default)]
    pub determiner: DeterminerPolicy,
    #[serde(default, skip_serializing_if = "is_per_candidate")]
    pub filler_number: FillerNumberPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    /// Restricts the realization to candidates under these classes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassId>,
    /// A following de-/von-chunk modifies this filler instead of filling another slot.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub attaches_following: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub examples: BTreeMap<ClassId, String>,
}

fn is_per_candidate(p: &FillerNumberPolicy) -> bool {
    *p == FillerNumberPolicy::PerCandidate
}

impl FormalRealization {
    /// Case the filler is inflected in.
    pub fn filler_case(&self) -> Option<Case> {
        match self.kind {
            RealizationKind::Genitive => Some(Case::Gen),
            _ => self.case,
        }
    }

    pub fn admits_class(&self, class: &ClassId) -> bool {
        self.classes.is_empty() || self.classes.iter().any(|c| c.overlaps(class))
    }

    /// Short label used in template ids and traces, e.g. `de.def`, `gen.def`, `comp`.
    pub fn code(&self) -> String {
        let base = match self.kind {
            RealizationKind::Prepositional => self.preposition.clone().unwrap_or_default(),
            RealizationKind::Genitive => "gen".to_string(),
            RealizationKind::Apposition => match self.direction {
                Some(Direction::Before) => "appo.before".to_string(),
                _ => "appo.after".to_string(),
            },
            RealizationKind::Compound => return "comp".to_string(),
            RealizationKind::Adjectival => return "adj".to_string(),
        };
        match self.determiner {
            DeterminerPolicy::RequiredDefinite => format!("{base}.def"),
            DeterminerPolicy::RequiredIndefinite => format!("{base}.indef"),
            DeterminerPolicy::Any => format!("{base}.any"),
            DeterminerPolicy::Forbidden => base,
        }
    }

    /// Prepositional and genitive fillers follow the head in schema order.
    pub fn is_linear(&self) -> bool {
        matches!(
            self.kind,
            RealizationKind::Prepositional | RealizationKind::Genitive
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CandidateNumber {
    Singular,
    Plural,
    #[default]
    Both,
}

impl CandidateNumber {
    pub fn allows(self, n: Number) -> bool {
        match self {
            CandidateNumber::Both => true,
            CandidateNumber::Singular => n == Number::Singular,
            CandidateNumber::Plural => n == Number::Plural,
        }
    }
}

/// A slot candidate; bare strings in the bundle mean `number: both`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub lemma: String,
    pub number: CandidateNumber,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CandidateRepr {
    Bare(String),
    Full {
        lemma: String,
        #[serde(default)]
        number: CandidateNumber,
    },
}

impl Serialize for Candidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.number == CandidateNumber::Both {
            CandidateRepr::Bare(self.lemma.clone()).serialize(s)
        } else {
            CandidateRepr::Full {
                lemma: self.lemma.clone(),
                number: self.number,
            }
            .serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Candidate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match CandidateRepr::deserialize(d)? {
            CandidateRepr::Bare(lemma) => Candidate {
                lemma,
                number: CandidateNumber::Both,
            },
            CandidateRepr::Full { lemma, number } => Candidate { lemma, number },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedRealization {
    pub first: String,
    pub second: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
}

impl PairedRealization {
    /// Whether a filler of `class` realized with `r` must carry the second endpoint.
    pub fn applies(&self, r: &FormalRealization, class: &ClassId) -> bool {
        r.kind == RealizationKind::Prepositional
            && r.preposition.as_deref() == Some(self.first.as_str())
            && (self.classes.is_empty() || self.classes.iter().any(|c| c.contains(class)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentSlot {
    pub index: u8,
    pub role: RoleId,
    pub realizations: Vec<FormalRealization>,
    pub members: BTreeMap<ClassId, Vec<Candidate>>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub requires: BTreeSet<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paired: Option<PairedRealization>,
}

impl ArgumentSlot {
    pub fn label(&self) -> String {
        format!("Arg{}", self.index)
    }

    pub fn allowed_classes(&self) -> impl Iterator<Item = &ClassId> {
        self.members.keys()
    }

    /// True when `class` is an allowed class or an ancestor of one.
    pub fn admits(&self, class: &ClassId) -> bool {
        self.members.keys().any(|c| class.contains(c))
    }

    /// Candidates of every allowed class under `class`, paired with their own class.
    pub fn candidates_under<'a>(
        &'a self,
        class: &'a ClassId,
    ) -> impl Iterator<Item = (&'a ClassId, &'a Candidate)> + 'a {
        self.members
            .iter()
            .filter(move |(c, _)| class.contains(c))
            .flat_map(|(c, cands)| cands.iter().map(move |cand| (c, cand)))
    }

    pub fn find_candidate(&self, lemma: &str) -> Option<(&ClassId, &Candidate)> {
        self.members
            .iter()
            .flat_map(|(c, cands)| cands.iter().map(move |cand| (c, cand)))
            .find(|(_, cand)| cand.lemma == lemma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HeadNumberPolicy {
    SingularOnly,
    PluralOnly,
    #[default]
    Both,
}

impl HeadNumberPolicy {
    pub fn numbers(self) -> Vec<Number> {
        match self {
            HeadNumberPolicy::SingularOnly => vec![Number::Singular],
            HeadNumberPolicy::PluralOnly => vec![Number::Plural],
            HeadNumberPolicy::Both => vec![Number::Singular, Number::Plural],
        }
    }

    pub fn allows(self, n: Number) -> bool {
        self.numbers().contains(&n)
    }
}

fn is_default_head(p: &HeadNumberPolicy) -> bool {
    *p == HeadNumberPolicy::Both
}

/// (head number, slot) ⇒ required filler number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberRule {
    pub head: Number,
    pub slot: u8,
    pub filler: Number,
}

/// Filler class in a slot ⇒ head number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassHeadRule {
    pub slot: u8,
    pub class: ClassId,
    pub head: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentSchema {
    pub sense: String,
    #[serde(default)]
    pub gloss: String,
    #[serde(default, skip_serializing_if = "is_default_head")]
    pub head_number: HeadNumberPolicy,
    /// Linear order of slots after the head; defaults to index order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub number_rules: Vec<NumberRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub head_number_rules: Vec<ClassHeadRule>,
    #[serde(default)]
    pub slots: Vec<ArgumentSlot>,
}

impl ArgumentSchema {
    pub fn slot(&self, index: u8) -> Option<&ArgumentSlot> {
        self.slots.iter().find(|s| s.index == index)
    }

    /// Accepts `3`, `Arg3`, `arg3` or a role id.
    pub fn resolve_slot(&self, reference: &str) -> Option<&ArgumentSlot> {
        let r = reference.trim();
        let digits = r
            .strip_prefix("Arg")
            .or_else(|| r.strip_prefix("arg"))
            .unwrap_or(r);
        if let Ok(i) = digits.parse::<u8>() {
            return self.slot(i);
        }
        self.slots.iter().find(|s| s.role.0 == r)
    }

    pub fn linear_order(&self) -> Vec<u8> {
        if self.order.is_empty() {
            let mut v: Vec<u8> = self.slots.iter().map(|s| s.index).collect();
            v.sort_unstable();
            v
        } else {
            self.order.clone()
        }
    }

    pub fn position(&self, index: u8) -> usize {
        self.linear_order()
            .iter()
            .position(|&i| i == index)
            .unwrap_or(usize::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Noun {
    pub lemma: String,
    pub language: Language,
    pub senses: Vec<ArgumentSchema>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerbPosition {
    BeforeNp,
    AfterNp,
}

impl FromStr for VerbPosition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "before-np" | "before" => Ok(VerbPosition::BeforeNp),
            "after-np" | "after" => Ok(VerbPosition::AfterNp),
            other => Err(format!("unknown verb position `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseFunction {
    Subject,
    Verb,
    DirectObject,
    IndirectObject,
    Adverb,
    Attribute,
    PrepositionalComplement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClausePart {
    pub function: ClauseFunction,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub np: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRequirement {
    pub slot: u8,
    pub classes: Vec<ClassId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbChoice {
    pub sg: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pl: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requires: Vec<ClassRequirement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdverbChoice {
    pub form: String,
    #[serde(default, skip_serializing_if = "Polarity::is_neutral")]
    pub polarity: Polarity,
}

/// Either an adjective lemma that agrees with the head, or invariant text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeChoice {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
    #[serde(default, skip_serializing_if = "Polarity::is_neutral")]
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceFrame {
    pub id: String,
    pub language: Language,
    pub noun: String,
    pub sense: String,
    pub verb_position: VerbPosition,
    pub pattern: Vec<ClausePart>,
    pub verbs: Vec<VerbChoice>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adverbs: Vec<AdverbChoice>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<AttributeChoice>,
    /// Prenominal adjectives that may modify the hosted NP.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjectives: Vec<String>,
    pub standard_example: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjectivePosition {
    Prenominal,
    Postnominal,
}

impl FromStr for AdjectivePosition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pre" | "prenominal" => Ok(AdjectivePosition::Prenominal),
            "post" | "postnominal" => Ok(AdjectivePosition::Postnominal),
            other => Err(format!("unknown adjective position `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjectiveAnnotation {
    pub noun: String,
    pub language: Language,
    pub sense: String,
    pub position: AdjectivePosition,
    /// (adjective, label) pairs; label is `non-specific` or `ArgN`.
    pub items: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceTable {
    pub noun: String,
    pub language: Language,
    pub sense: String,
    pub slot: u8,
    pub counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub name: String,
    #[serde(default)]
    pub version: String,
    #[serde(default)]
    pub languages: Vec<Language>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub meta: Meta,
    #[serde(default)]
    pub roles: Vec<SemanticRole>,
    #[serde(default)]
    pub ontology: Vec<ClassDecl>,
    #[serde(default)]
    pub entries: Vec<LexicalEntry>,
    #[serde(default)]
    pub nouns: Vec<Noun>,
    #[serde(default)]
    pub frames: Vec<SentenceFrame>,
    #[serde(default)]
    pub adjective_annotations: Vec<AdjectiveAnnotation>,
    #[serde(default)]
    pub cooccurrence: Vec<CooccurrenceTable>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_keys_round_trip() {
        for s in ["sg", "pl", "sg.gen", "pl.dat", "f.sg", "m.pl", "n.sg.dat"] {
            let k: FormKey = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("du".parse::<FormKey>().is_err());
        assert!("sg.loc".parse::<FormKey>().is_err());
    }

    #[test]
    fn class_paths() {
        let c = ClassId::from("animado.humano.familia");
        assert_eq!(c.depth(), 3);
        assert_eq!(c.parent(), Some(ClassId::from("animado.humano")));
        assert!(ClassId::from("animado").contains(&c));
        assert!(!ClassId::from("anim").contains(&c));
        assert_eq!(c.ancestor_at(2), Some(ClassId::from("animado.humano")));
        assert_eq!(c.ancestor_at(4), None);
    }

    #[test]
    fn candidate_shorthand() {
        let v: Vec<Candidate> =
            serde_json::from_str(r#"["cabeza", {"lemma": "hueso", "number": "plural"}]"#).unwrap();
        assert_eq!(v[0].number, CandidateNumber::Both);
        assert_eq!(v[1].number, CandidateNumber::Plural);
        let back = serde_json::to_string(&v).unwrap();
        assert_eq!(back, r#"["cabeza",{"lemma":"hueso","number":"plural"}]"#);
    }

    #[test]
    fn case_forms_fall_back_to_base() {
        let e: LexicalEntry = serde_json::from_str(
            r#"{"lemma":"Kind","language":"de","gender":"neut",
                "forms":{"sg":"Kind","sg.gen":"Kindes","pl":"Kinder","pl.dat":"Kindern"}}"#,
        )
        .unwrap();
        assert_eq!(e.form(Number::Singular, Some(Case::Gen)), Some("Kindes"));
        assert_eq!(e.form(Number::Singular, Some(Case::Dat)), Some("Kind"));
        assert_eq!(e.form(Number::Plural, Some(Case::Dat)), Some("Kindern"));
    }
}
