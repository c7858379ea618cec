//! Class taxonomy navigation, noun-specific membership, prototypes and adjective tallies.

mod expand;

use std::collections::BTreeMap;

use serde::Serialize;

pub use expand::{
    expand_candidates, ExpandedCandidate, FileResource, LexicalResource, ResourceHit, ResourceRecord,
    ReviewStatus,
};

use crate::error::{Error, Result};
use crate::lexicon::{
    AdjectivePosition, ArgumentSchema, ArgumentSlot, ClassId, Language, Lexicon,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OntologyClass {
    pub id: ClassId,
    pub parent: Option<ClassId>,
    pub depth: usize,
    pub gloss: Option<String>,
    pub example: Option<String>,
}

impl OntologyClass {
    fn from_lexicon(lex: &Lexicon, id: &ClassId, language: Language) -> Self {
        let decl = lex.class(id);
        OntologyClass {
            id: id.clone(),
            parent: id.parent(),
            depth: id.depth(),
            gloss: decl.and_then(|d| {
                d.gloss
                    .get(&language)
                    .or_else(|| d.gloss.get(&Language::Es))
                    .cloned()
            }),
            example: decl.and_then(|d| d.example.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlotRef {
    pub noun: String,
    pub sense: String,
    pub slot: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prototype {
    pub lemma: String,
    pub slot_ref: SlotRef,
    pub cooccurrence_count: u64,
    pub rank: usize,
    pub class_path: Option<ClassId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoleDistribution {
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    /// Integer percentages, rounded half-up.
    pub percentages: BTreeMap<String, u32>,
}

pub(crate) fn slot_of<'a>(schema: &'a ArgumentSchema, slot: &str, noun: &str) -> Result<&'a ArgumentSlot> {
    schema
        .resolve_slot(slot)
        .ok_or_else(|| Error::not_found(format!("slot `{slot}` of `{noun}` / {}", schema.sense)))
}

fn has_members(lex: &Lexicon, language: Language, noun: &str, schema: &ArgumentSchema, slot: &ArgumentSlot, class: &ClassId) -> bool {
    slot.candidates_under(class).next().is_some()
        || lex
            .role_adjectives(language, noun, &schema.sense, slot.index)
            .iter()
            .any(|e| e.classes.iter().any(|c| class.contains(c)))
}

/// Child classes one level below `parent` (roots when absent) with non-empty membership.
pub fn drilldown(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    slot: &str,
    parent: Option<&ClassId>,
) -> Result<Vec<OntologyClass>> {
    let schema = lex.schema(language, noun, sense)?;
    let sl = slot_of(schema, slot, noun)?;
    if let Some(p) = parent {
        if lex.class(p).is_none() {
            return Err(Error::not_found(format!("class `{p}`")));
        }
    }
    let level = parent.map_or(1, |p| p.depth() + 1);
    let mut out: Vec<ClassId> = Vec::new();
    for allowed in sl.allowed_classes() {
        if parent.is_some_and(|p| !p.contains(allowed)) {
            continue;
        }
        let Some(child) = allowed.ancestor_at(level) else { continue };
        if !out.contains(&child) && has_members(lex, language, noun, schema, sl, &child) {
            out.push(child);
        }
    }
    out.sort();
    Ok(out
        .iter()
        .map(|c| OntologyClass::from_lexicon(lex, c, language))
        .collect())
}

/// Noun-specific candidate lemmas under `class`; never the class's global extension.
pub fn members(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    slot: &str,
    class: &ClassId,
) -> Result<Vec<String>> {
    let schema = lex.schema(language, noun, sense)?;
    let sl = slot_of(schema, slot, noun)?;
    if !sl.admits(class) {
        return Err(Error::Domain(format!(
            "class `{class}` is not allowed in Arg{} of `{noun}`",
            sl.index
        )));
    }
    let mut out: Vec<String> = Vec::new();
    for (_, cand) in sl.candidates_under(class) {
        if !out.contains(&cand.lemma) {
            out.push(cand.lemma.clone());
        }
    }
    Ok(out)
}

/// Ranks candidates by co-occurrence count, ties by lemma.
pub fn rank_prototypes(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    slot: &str,
) -> Result<Vec<Prototype>> {
    let schema = lex.schema(language, noun, sense)?;
    let sl = slot_of(schema, slot, noun)?;
    let table = lex
        .cooccurrence()
        .iter()
        .find(|t| t.language == language && t.noun == noun && t.sense == sense && t.slot == sl.index)
        .ok_or_else(|| Error::not_found(format!("co-occurrence table for `{noun}` Arg{}", sl.index)))?;
    Ok(rank_counts(&table.counts)
        .into_iter()
        .enumerate()
        .map(|(i, (lemma, count))| Prototype {
            class_path: sl
                .find_candidate(lemma)
                .map(|(c, _)| c.clone())
                .or_else(|| lex.entry(language, lemma).and_then(|e| e.classes.iter().next().cloned())),
            lemma: lemma.to_string(),
            slot_ref: SlotRef {
                noun: noun.to_string(),
                sense: sense.to_string(),
                slot: sl.index,
            },
            cooccurrence_count: count,
            rank: i + 1,
        })
        .collect())
}

pub(crate) fn rank_counts(counts: &BTreeMap<String, u64>) -> Vec<(&str, u64)> {
    let mut v: Vec<(&str, u64)> = counts.iter().map(|(l, c)| (l.as_str(), *c)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    v
}

/// Share of each role label in the annotated adjective list of a noun.
pub fn classify_adjectives(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: Option<&str>,
    position: AdjectivePosition,
) -> Result<RoleDistribution> {
    let ann = lex
        .annotations()
        .iter()
        .find(|a| {
            a.language == language
                && a.noun == noun
                && a.position == position
                && sense.is_none_or(|s| s == a.sense)
                && !a.items.is_empty()
        })
        .ok_or_else(|| {
            Error::not_found(format!("{position:?} adjective annotations for `{noun}`").to_lowercase())
        })?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (_, label) in &ann.items {
        *counts.entry(label.clone()).or_default() += 1;
    }
    let total = ann.items.len();
    let percentages = counts
        .iter()
        .map(|(k, &c)| (k.clone(), percent_half_up(c, total)))
        .collect();
    Ok(RoleDistribution {
        total,
        counts,
        percentages,
    })
}

pub(crate) fn percent_half_up(part: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((200 * part + total) / (2 * total)) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex() -> &'static Lexicon {
        Lexicon::shared_sample()
    }

    fn ids(v: &[OntologyClass]) -> Vec<&str> {
        v.iter().map(|c| c.id.as_str()).collect()
    }

    #[test]
    fn olor_substances_drill_down() {
        let lex = lex();
        let got = drilldown(lex, Language::Es, "olor", "percepcion_olfativa", "1", Some(&"material.sustancia".into())).unwrap();
        let names = ids(&got);
        assert!(names.contains(&"material.sustancia.liquido_no_consumible"));
        assert!(names.contains(&"material.sustancia.liquido_consumible_bebible"));
        let lnc = got.iter().find(|c| c.id.as_str().ends_with("liquido_no_consumible")).unwrap();
        assert_eq!(lnc.example.as_deref(), Some("aguarrás"));
    }

    #[test]
    fn olor_rooms_drill_down() {
        let lex = lex();
        let got = drilldown(lex, Language::Es, "olor", "percepcion_olfativa", "Arg2", Some(&"lugar.construccion".into())).unwrap();
        assert_eq!(ids(&got), ["lugar.construccion.habitacion"]);
    }

    #[test]
    fn leaf_has_no_children() {
        let lex = lex();
        let got = drilldown(lex, Language::Es, "olor", "percepcion_olfativa", "2", Some(&"lugar.construccion.habitacion".into())).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn roots_are_listed_without_parent() {
        let lex = lex();
        let got = drilldown(lex, Language::Es, "olor", "percepcion_olfativa", "1", None).unwrap();
        assert_eq!(ids(&got), ["fenomeno", "material"]);
    }

    #[test]
    fn unknown_slot_is_not_found() {
        let lex = lex();
        let r = drilldown(lex, Language::Es, "olor", "percepcion_olfativa", "9", None);
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn physical_state_membership_is_noun_specific() {
        let lex = lex();
        let c = ClassId::from("estado.fisico");
        let muerte = members(lex, Language::Es, "muerte", "fallecimiento", "2", &c).unwrap();
        assert_eq!(muerte, ["desnutrición", "enfermedad", "hambre", "inanición", "sed"]);
        let texto = members(lex, Language::Es, "texto", "escrito", "2", &c).unwrap();
        let mut expect = muerte.clone();
        expect.extend(["libido".to_string(), "salud".to_string()]);
        assert_eq!(texto, expect);
        assert_ne!(muerte, texto);
    }

    #[test]
    fn unrelated_class_is_a_domain_error() {
        let lex = lex();
        let r = members(lex, Language::Es, "muerte", "fallecimiento", "2", &"lugar.construccion".into());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn pain_location_prototypes() {
        let lex = lex();
        let p = rank_prototypes(lex, Language::Es, "dolor", "sensacion_fisica", "3").unwrap();
        let find = |l: &str| p.iter().find(|x| x.lemma == l).map(|x| (x.rank, x.cooccurrence_count));
        assert_eq!(find("cabeza"), Some((1, 147678)));
        assert_eq!(find("espalda"), Some((2, 29719)));
        assert_eq!(find("cuello"), Some((7, 3840)));
        assert_eq!(find("ovario"), Some((13, 1491)));
        assert_eq!(find("hueso"), Some((14, 1484)));
        let ovario = p.iter().find(|x| x.lemma == "ovario").unwrap();
        assert_eq!(ovario.class_path.as_ref().unwrap().as_str(), "animado.humano.organo");
    }

    #[test]
    fn equal_counts_rank_by_lemma() {
        let counts: BTreeMap<String, u64> =
            [("b", 5), ("a", 5), ("c", 5)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let order: Vec<_> = rank_counts(&counts).into_iter().map(|(l, _)| l).collect();
        assert_eq!(order, ["a", "b", "c"]);
        assert!(rank_counts(&BTreeMap::new()).is_empty());
    }

    #[test]
    fn missing_table_is_not_found() {
        let lex = lex();
        let r = rank_prototypes(lex, Language::Es, "olor", "percepcion_olfativa", "1");
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn pain_adjective_tally() {
        let lex = lex();
        let post = classify_adjectives(lex, Language::Es, "dolor", None, AdjectivePosition::Postnominal).unwrap();
        assert_eq!(post.percentages["non-specific"], 47);
        assert_eq!(post.percentages["Arg3"], 45);
        assert_eq!(post.percentages["Arg2"], 7);
        assert_eq!(post.percentages["Arg1"], 1);
        let pre = classify_adjectives(lex, Language::Es, "dolor", None, AdjectivePosition::Prenominal).unwrap();
        assert_eq!(pre.percentages.len(), 1);
        assert_eq!(pre.percentages["non-specific"], 100);
    }

    #[test]
    fn missing_annotations_are_not_found() {
        let lex = lex();
        let r = classify_adjectives(lex, Language::Es, "olor", None, AdjectivePosition::Prenominal);
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn drill_down_partitions_members() {
        let lex = lex();
        for noun in lex.bundle().nouns.iter() {
            for s in &noun.senses {
                for sl in &s.slots {
                    let slot = sl.index.to_string();
                    let roots = drilldown(lex, noun.language, &noun.lemma, &s.sense, &slot, None).unwrap();
                    let mut stack: Vec<ClassId> = roots.into_iter().map(|c| c.id).collect();
                    while let Some(parent) = stack.pop() {
                        let children = drilldown(lex, noun.language, &noun.lemma, &s.sense, &slot, Some(&parent)).unwrap();
                        if children.is_empty() || !sl.admits(&parent) {
                            continue;
                        }
                        let mut union: Vec<String> = Vec::new();
                        for c in &children {
                            if sl.admits(&c.id) {
                                union.extend(members(lex, noun.language, &noun.lemma, &s.sense, &slot, &c.id).unwrap());
                            }
                        }
                        let mut whole = members(lex, noun.language, &noun.lemma, &s.sense, &slot, &parent).unwrap();
                        union.sort();
                        union.dedup();
                        whole.sort();
                        assert_eq!(union, whole, "{} Arg{} {}", noun.lemma, sl.index, parent);
                        stack.extend(children.into_iter().map(|c| c.id));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ranks_are_a_permutation(counts in proptest::collection::btree_map("[a-f]{1,4}", 0u64..20, 0..30)) {
            let ranked = rank_counts(&counts);
            prop_assert_eq!(ranked.len(), counts.len());
            for w in ranked.windows(2) {
                prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
            }
        }

        #[test]
        fn percentages_sum_close_to_100(labels in proptest::collection::vec(0usize..4, 1..200)) {
            let total = labels.len();
            let sum: u32 = (0..4)
                .map(|k| labels.iter().filter(|&&l| l == k).count())
                .filter(|&c| c > 0)
                .map(|c| percent_half_up(c, total))
                .sum();
            prop_assert!((98..=102).contains(&sum), "sum {}", sum);
        }
    }
}
