use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::slot_of;
use crate::error::{Error, Result};
use crate::lexicon::{ClassId, FormKey, Gender, Language, Lexicon};

/// Lemma returned by a resource query, tagged with the class it was found under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceHit {
    pub lemma: String,
    pub class: ClassId,
}

/// A source of class-compatible lemmas for paradigmatic expansion.
pub trait LexicalResource: Send + Sync {
    fn synonyms_of(&self, lemma: &str, language: Language) -> Result<Vec<ResourceHit>>;
    /// Lemmas under `class` (a class path acting as the anchor).
    fn hyponyms_of(&self, class: &ClassId, language: Language) -> Result<Vec<ResourceHit>>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceRecord {
    pub lemma: String,
    pub language: Language,
    #[serde(alias = "classPath")]
    pub class_path: ClassId,
    #[serde(default)]
    pub gender: Gender,
    #[serde(default)]
    pub forms: BTreeMap<FormKey, Option<String>>,
}

/// Class-tagged word list read from a JSON array of records.
#[derive(Debug, Clone, Default)]
pub struct FileResource {
    records: Vec<ResourceRecord>,
}

impl FileResource {
    pub fn new(records: Vec<ResourceRecord>) -> Self {
        FileResource { records }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map(FileResource::new)
            .map_err(|e| Error::Resource(format!("line {}: {e}", e.line())))
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
        FileResource::from_json(&text)
    }

    pub fn records(&self) -> &[ResourceRecord] {
        &self.records
    }

    fn hit(r: &ResourceRecord) -> ResourceHit {
        ResourceHit {
            lemma: r.lemma.clone(),
            class: r.class_path.clone(),
        }
    }
}

impl LexicalResource for FileResource {
    fn synonyms_of(&self, lemma: &str, language: Language) -> Result<Vec<ResourceHit>> {
        let classes: Vec<&ClassId> = self
            .records
            .iter()
            .filter(|r| r.language == language && r.lemma == lemma)
            .map(|r| &r.class_path)
            .collect();
        Ok(self
            .records
            .iter()
            .filter(|r| r.language == language && r.lemma != lemma && classes.contains(&&r.class_path))
            .map(FileResource::hit)
            .collect())
    }

    fn hyponyms_of(&self, class: &ClassId, language: Language) -> Result<Vec<ResourceHit>> {
        Ok(self
            .records
            .iter()
            .filter(|r| r.language == language && class.contains(&r.class_path))
            .map(FileResource::hit)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReviewStatus {
    Unreviewed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpandedCandidate {
    pub lemma: String,
    pub class_path: ClassId,
    pub status: ReviewStatus,
}

/// New lemmas for a slot class from a resource. The lexicon is never modified.
pub fn expand_candidates(
    lex: &Lexicon,
    resource: &dyn LexicalResource,
    language: Language,
    noun: &str,
    sense: &str,
    slot: &str,
    class: &ClassId,
) -> Result<Vec<ExpandedCandidate>> {
    let schema = lex.schema(language, noun, sense)?;
    let sl = slot_of(schema, slot, noun)?;
    if !sl.admits(class) {
        return Err(Error::Domain(format!(
            "class `{class}` is not allowed in Arg{} of `{noun}`",
            sl.index
        )));
    }
    let seeds: Vec<&str> = sl.candidates_under(class).map(|(_, c)| c.lemma.as_str()).collect();
    if seeds.is_empty() {
        return Err(Error::EmptyParadigm {
            slot: sl.label(),
            class: class.to_string(),
        });
    }
    let known = |l: &str| sl.find_candidate(l).is_some();

    let mut hits = resource.hyponyms_of(class, language)?;
    let mut syn: Vec<ResourceHit> = Vec::new();
    for seed in &seeds {
        syn.extend(resource.synonyms_of(seed, language)?);
    }
    syn.sort_by(|a, b| a.lemma.cmp(&b.lemma));
    hits.extend(syn);

    let mut out: Vec<ExpandedCandidate> = Vec::new();
    for h in hits {
        if !class.contains(&h.class) || known(&h.lemma) || out.iter().any(|o| o.lemma == h.lemma) {
            continue;
        }
        out.push(ExpandedCandidate {
            lemma: h.lemma,
            class_path: h.class,
            status: ReviewStatus::Unreviewed,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BODY: &str = "animado.humano.parte_del_cuerpo";

    fn rec(lemma: &str, class: &str) -> ResourceRecord {
        ResourceRecord {
            lemma: lemma.into(),
            language: Language::Es,
            class_path: class.into(),
            gender: Gender::None,
            forms: BTreeMap::new(),
        }
    }

    fn expand(res: &FileResource) -> Result<Vec<String>> {
        let lex = Lexicon::sample();
        expand_candidates(&lex, res, Language::Es, "dolor", "sensacion_fisica", "3", &BODY.into())
            .map(|v| v.into_iter().map(|c| c.lemma).collect())
    }

    #[test]
    fn toy_resource_adds_body_parts_only() {
        let res = FileResource::new(vec![
            rec("hombro", BODY),
            rec("rodilla", BODY),
            rec("salud", "estado.fisico"),
        ]);
        assert_eq!(expand(&res).unwrap(), ["hombro", "rodilla"]);
    }

    #[test]
    fn bundled_resource_file() {
        let res = FileResource::from_json(include_str!("../../data/sample_resource.json")).unwrap();
        assert_eq!(expand(&res).unwrap(), ["hombro", "rodilla"]);
    }

    #[test]
    fn known_members_are_dropped() {
        let res = FileResource::new(vec![rec("cabeza", BODY), rec("espalda", BODY)]);
        assert!(expand(&res).unwrap().is_empty());
        assert!(expand(&FileResource::default()).unwrap().is_empty());
    }

    struct Failing;

    impl LexicalResource for Failing {
        fn synonyms_of(&self, _: &str, _: Language) -> Result<Vec<ResourceHit>> {
            Err(Error::Resource("offline".into()))
        }
        fn hyponyms_of(&self, _: &ClassId, _: Language) -> Result<Vec<ResourceHit>> {
            Err(Error::Resource("offline".into()))
        }
    }

    #[test]
    fn resource_failure_propagates() {
        let lex = Lexicon::sample();
        let before = lex.to_json();
        let r = expand_candidates(&lex, &Failing, Language::Es, "dolor", "sensacion_fisica", "3", &BODY.into());
        assert!(matches!(r, Err(Error::Resource(_))));
        assert_eq!(lex.to_json(), before);
    }

    #[test]
    fn malformed_resource_is_a_resource_error() {
        assert!(matches!(FileResource::from_json("[{"), Err(Error::Resource(_))));
    }

    proptest! {
        #[test]
        fn never_returns_known_members(names in proptest::collection::vec("(cabeza|espalda|cuello|hombro|rodilla|codo|[a-z]{3,6})", 0..12)) {
            let lex = Lexicon::shared_sample();
            let res = FileResource::new(names.iter().map(|n| rec(n, BODY)).collect());
            let got = expand_candidates(lex, &res, Language::Es, "dolor", "sensacion_fisica", "3", &BODY.into()).unwrap();
            let sl = lex.schema(Language::Es, "dolor", "sensacion_fisica").unwrap().slot(3).unwrap();
            for c in &got {
                prop_assert!(sl.find_candidate(&c.lemma).is_none());
                prop_assert_eq!(c.status, ReviewStatus::Unreviewed);
            }
            let mut uniq: Vec<_> = got.iter().map(|c| &c.lemma).collect();
            uniq.sort();
            uniq.dedup();
            prop_assert_eq!(uniq.len(), got.len());
        }
    }
}
