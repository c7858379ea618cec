//! A fully specified noun phrase: head plus chosen fillers, the input to realization and constraint checks.

use serde::{Deserialize, Serialize};

use crate::lexicon::{Case, ClassId, Language, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Det {
    Definite,
    Indefinite,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairedFiller {
    pub lemma: String,
    pub number: Number,
    pub determiner: Det,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Filler {
    pub slot: u8,
    /// Index into the slot's realization list.
    pub realization: usize,
    /// The selected class; the lemma is one of its noun-specific candidates.
    pub class: ClassId,
    pub lemma: String,
    pub number: Number,
    pub determiner: Det,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paired: Option<PairedFiller>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NpSpec {
    pub language: Language,
    pub noun: String,
    pub sense: String,
    pub head_number: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_case: Option<Case>,
    pub head_determiner: Det,
    /// Prenominal adjective lemmas contributed by a sentence frame.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modifiers: Vec<String>,
    pub fillers: Vec<Filler>,
}

impl NpSpec {
    pub fn new(language: Language, noun: &str, sense: &str, head_number: Number) -> Self {
        NpSpec {
            language,
            noun: noun.to_string(),
            sense: sense.to_string(),
            head_number,
            head_case: None,
            head_determiner: Det::Definite,
            modifiers: Vec::new(),
            fillers: Vec::new(),
        }
    }

    pub fn filler(&self, slot: u8) -> Option<&Filler> {
        self.fillers.iter().find(|f| f.slot == slot)
    }

    /// Case of the head; German defaults to nominative.
    pub fn effective_head_case(&self) -> Option<Case> {
        match self.language {
            Language::De => Some(self.head_case.unwrap_or(Case::Nom)),
            _ => None,
        }
    }
}
