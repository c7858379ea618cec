//! Formal and semantic restrictions on a filled noun phrase. Violations are data, never errors.

use serde::{Deserialize, Serialize};

use crate::lexicon::{
    ArgumentSchema, ArgumentSlot, ClassId, DeterminerPolicy, FillerNumberPolicy, Language, Lexicon,
    Number, RealizationKind,
};
use crate::np::{Det, Filler, NpSpec};

pub const NUMBER_CO_RESTRICTION: &str = "number-co-restriction";
pub const DETERMINER_POLICY: &str = "determiner-policy";
pub const SLOT_INTERDEPENDENCE: &str = "slot-interdependence";
pub const PAIRED_REALIZATION: &str = "paired-realization";
pub const CANDIDATE_NUMBER: &str = "candidate-number";
pub const HEAD_NUMBER: &str = "head-number";
pub const CLASS_MEMBERSHIP: &str = "class-membership";
pub const REALIZATION: &str = "realization";
pub const REPEATED_SLOT: &str = "repeated-slot";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<u8>,
    pub message: String,
}

impl Violation {
    pub(crate) fn new(rule: &str, slot: Option<u8>, message: impl Into<String>) -> Self {
        Violation {
            rule: rule.to_string(),
            slot,
            message: message.into(),
        }
    }
}

/// Class of `lemma` as a member of `class` in this slot; adjectives resolve through their own tags.
#[allow(clippy::too_many_arguments)]
pub(crate) fn member_class(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    schema: &ArgumentSchema,
    slot: &ArgumentSlot,
    kind: RealizationKind,
    class: &ClassId,
    lemma: &str,
) -> Option<ClassId> {
    if kind == RealizationKind::Adjectival {
        return lex
            .role_adjectives(language, noun, &schema.sense, slot.index)
            .into_iter()
            .find(|e| e.lemma == lemma)
            .and_then(|e| e.classes.iter().find(|c| class.contains(c)).cloned());
    }
    slot.candidates_under(class)
        .find(|(_, cand)| cand.lemma == lemma)
        .map(|(c, _)| c.clone())
}

fn allowed_dets(policy: DeterminerPolicy) -> &'static [Det] {
    match policy {
        DeterminerPolicy::RequiredDefinite => &[Det::Definite],
        DeterminerPolicy::RequiredIndefinite => &[Det::Indefinite],
        DeterminerPolicy::Forbidden => &[Det::None],
        DeterminerPolicy::Any => &[Det::Definite, Det::Indefinite],
    }
}

/// Determiners a filler may carry under `policy`; proper nouns and non-nominal realizations take none.
pub(crate) fn determiner_choices(lex: &Lexicon, language: Language, lemma: &str, kind: RealizationKind, policy: DeterminerPolicy) -> &'static [Det] {
    let proper = lex.entry(language, lemma).is_some_and(|e| e.is_proper());
    if proper || !matches!(kind, RealizationKind::Prepositional | RealizationKind::Genitive) {
        &[Det::None]
    } else {
        allowed_dets(policy)
    }
}

fn check_number_policy(policy: FillerNumberPolicy, n: Number) -> bool {
    match policy {
        FillerNumberPolicy::Singular => n == Number::Singular,
        FillerNumberPolicy::Plural => n == Number::Plural,
        FillerNumberPolicy::Both | FillerNumberPolicy::PerCandidate => true,
    }
}

fn check_filler(
    lex: &Lexicon,
    np: &NpSpec,
    schema: &ArgumentSchema,
    f: &Filler,
    out: &mut Vec<Violation>,
) {
    let s = Some(f.slot);
    let Some(slot) = schema.slot(f.slot) else {
        out.push(Violation::new(REALIZATION, s, format!("sense `{}` has no Arg{}", schema.sense, f.slot)));
        return;
    };
    let Some(r) = slot.realizations.get(f.realization) else {
        out.push(Violation::new(REALIZATION, s, format!("Arg{} has no realization {}", f.slot, f.realization)));
        return;
    };
    if !slot.admits(&f.class) || !r.admits_class(&f.class) {
        out.push(Violation::new(
            CLASS_MEMBERSHIP,
            s,
            format!("class `{}` is not admitted by Arg{} as {}", f.class, f.slot, r.code()),
        ));
        return;
    }
    let Some(cand_class) = member_class(lex, np.language, &np.noun, schema, slot, r.kind, &f.class, &f.lemma) else {
        out.push(Violation::new(
            CLASS_MEMBERSHIP,
            s,
            format!("`{}` is not a candidate of `{}` in Arg{}", f.lemma, f.class, f.slot),
        ));
        return;
    };
    if !r.admits_class(&cand_class) {
        out.push(Violation::new(
            CLASS_MEMBERSHIP,
            s,
            format!("`{}` ({cand_class}) cannot be realized as {}", f.lemma, r.code()),
        ));
    }

    for rule in schema.number_rules.iter().filter(|nr| nr.slot == f.slot && nr.head == np.head_number) {
        if f.number != rule.filler {
            out.push(Violation::new(
                NUMBER_CO_RESTRICTION,
                s,
                format!(
                    "a {} head requires a {} filler in Arg{}, found {} `{}`",
                    np.head_number, rule.filler, f.slot, f.number, f.lemma
                ),
            ));
        }
    }
    for rule in schema.head_number_rules.iter().filter(|hr| hr.slot == f.slot) {
        if rule.class.contains(&cand_class) && np.head_number != rule.head {
            out.push(Violation::new(
                HEAD_NUMBER,
                s,
                format!("with `{}` in Arg{} the head must be {}", rule.class, f.slot, rule.head),
            ));
        }
    }
    match r.kind {
        RealizationKind::Adjectival => {
            if f.number != np.head_number {
                out.push(Violation::new(CANDIDATE_NUMBER, s, "adjectival filler must agree with the head"));
            }
        }
        RealizationKind::Compound => {
            if f.number != Number::Singular {
                out.push(Violation::new(CANDIDATE_NUMBER, s, "compound first members are singular"));
            }
        }
        _ => {
            let cand = slot.candidates_under(&f.class).find(|(_, c)| c.lemma == f.lemma).map(|(_, c)| c);
            if cand.is_some_and(|c| !c.number.allows(f.number)) || !check_number_policy(r.filler_number, f.number) {
                out.push(Violation::new(
                    CANDIDATE_NUMBER,
                    s,
                    format!("`{}` does not occur in the {} in Arg{}", f.lemma, f.number, f.slot),
                ));
            }
        }
    }

    let dets = determiner_choices(lex, np.language, &f.lemma, r.kind, r.determiner);
    if !dets.contains(&f.determiner) {
        let expected = match r.determiner {
            DeterminerPolicy::RequiredDefinite => "a definite determiner",
            DeterminerPolicy::RequiredIndefinite => "an indefinite determiner",
            DeterminerPolicy::Forbidden => "no determiner",
            DeterminerPolicy::Any => "a determiner",
        };
        let expected = if dets == [Det::None] { "no determiner" } else { expected };
        out.push(Violation::new(
            DETERMINER_POLICY,
            s,
            format!("Arg{} as {} takes {expected}, found {:?}", f.slot, r.code(), f.determiner).to_lowercase(),
        ));
    }

    let pairing = slot.paired.as_ref().filter(|p| p.applies(r, &cand_class));
    match (pairing, &f.paired) {
        (Some(p), None) => out.push(Violation::new(
            PAIRED_REALIZATION,
            s,
            format!("`{} {}` needs its `{}` endpoint", p.first, f.lemma, p.second),
        )),
        (None, Some(_)) => out.push(Violation::new(
            PAIRED_REALIZATION,
            s,
            format!("Arg{} as {} takes no second endpoint", f.slot, r.code()),
        )),
        (Some(_), Some(second)) => {
            let ok = slot
                .candidates_under(&f.class)
                .any(|(c, cand)| cand.lemma == second.lemma && cand.number.allows(second.number) && *c == cand_class);
            if !ok {
                out.push(Violation::new(
                    PAIRED_REALIZATION,
                    s,
                    format!("`{}` is not a candidate endpoint of class `{cand_class}`", second.lemma),
                ));
            }
        }
        (None, None) => {}
    }
}

pub fn check_constraints(lex: &Lexicon, np: &NpSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let schema = match lex.schema(np.language, &np.noun, &np.sense) {
        Ok(s) => s,
        Err(e) => return vec![Violation::new(REALIZATION, None, e.to_string())],
    };
    if !schema.head_number.allows(np.head_number) {
        out.push(Violation::new(HEAD_NUMBER, None, format!("`{}` is not used in the {}", np.noun, np.head_number)));
    }
    for (i, f) in np.fillers.iter().enumerate() {
        if np.fillers[..i].iter().any(|g| g.slot == f.slot) {
            out.push(Violation::new(REPEATED_SLOT, Some(f.slot), format!("Arg{} filled twice", f.slot)));
            continue;
        }
        check_filler(lex, np, schema, f, &mut out);
    }
    for f in &np.fillers {
        let Some(slot) = schema.slot(f.slot) else { continue };
        for req in &slot.requires {
            if np.filler(*req).is_none() {
                let label = schema.slot(*req).map_or(format!("Arg{req}"), |s| lex.slot_label(s));
                out.push(Violation::new(
                    SLOT_INTERDEPENDENCE,
                    Some(*req),
                    format!("Arg{} requires {label}", f.slot),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::np::PairedFiller;

    use Number::{Plural as Pl, Singular as Sg};

    fn filler(slot: u8, realization: usize, class: &str, lemma: &str, number: Number, det: Det) -> Filler {
        Filler {
            slot,
            realization,
            class: ClassId::from(class),
            lemma: lemma.to_string(),
            number,
            determiner: det,
            paired: None,
        }
    }

    fn rules(lang: Language, noun: &str, sense: &str, head: Number, fillers: Vec<Filler>) -> Vec<String> {
        let mut np = NpSpec::new(lang, noun, sense, head);
        np.fillers = fillers;
        check_constraints(&Lexicon::sample(), &np).into_iter().map(|v| v.rule).collect()
    }

    #[test]
    fn death_number_co_restrictions() {
        let nino = |n| filler(1, 0, "animado.humano.familia", "niño", n, Det::Definite);
        let intox = |n| filler(2, 0, "proceso.natural.patologico", "intoxicación alimentaria", n, Det::None);
        let r = |h, f| rules(Language::Es, "muerte", "fallecimiento", h, f);
        assert!(r(Sg, vec![nino(Sg)]).is_empty());
        assert!(r(Pl, vec![nino(Pl)]).is_empty());
        assert_eq!(r(Pl, vec![nino(Sg)]), [NUMBER_CO_RESTRICTION]);
        assert!(r(Sg, vec![nino(Sg), intox(Sg)]).is_empty());
        assert!(r(Pl, vec![nino(Pl), intox(Sg)]).is_empty());
        assert!(r(Pl, vec![nino(Pl), intox(Pl)]).is_empty());
        assert_eq!(r(Sg, vec![nino(Sg), intox(Pl)]), [NUMBER_CO_RESTRICTION]);
    }

    #[test]
    fn indefinite_genitive_is_rejected() {
        let f = |d| vec![filler(1, 0, "estado.social", "Arbeitslosigkeit", Sg, d)];
        assert!(rules(Language::De, "Frage", "angelegenheit", Sg, f(Det::Definite)).is_empty());
        assert_eq!(rules(Language::De, "Frage", "angelegenheit", Sg, f(Det::Indefinite)), [DETERMINER_POLICY]);
    }

    #[test]
    fn origin_requires_direction() {
        let madrid = filler(2, 0, "lugar.poblacion.ciudad", "Madrid", Sg, Det::None);
        let santiago = filler(3, 0, "lugar.poblacion.ciudad", "Santiago", Sg, Det::None);
        assert!(rules(Language::De, "Flucht", "entweichen", Sg, vec![madrid.clone(), santiago]).is_empty());
        let mut np = NpSpec::new(Language::De, "Flucht", "entweichen", Sg);
        np.fillers = vec![madrid];
        let v = check_constraints(&Lexicon::sample(), &np);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, SLOT_INTERDEPENDENCE);
        assert!(v[0].message.contains("Dirección"), "{}", v[0].message);
    }

    #[test]
    fn month_needs_second_endpoint() {
        let mut nov = filler(3, 0, "tiempo.mes", "November", Sg, Det::None);
        assert_eq!(rules(Language::De, "Aufenthalt", "verweilen", Sg, vec![nov.clone()]), [PAIRED_REALIZATION]);
        nov.paired = Some(PairedFiller {
            lemma: "Dezember".into(),
            number: Sg,
            determiner: Det::None,
        });
        assert!(rules(Language::De, "Aufenthalt", "verweilen", Sg, vec![nov]).is_empty());
        let days = filler(3, 0, "tiempo.duracion", "3 Tage", Pl, Det::None);
        assert!(rules(Language::De, "Aufenthalt", "verweilen", Sg, vec![days]).is_empty());
    }

    #[test]
    fn city_smells_take_a_plural_head() {
        let paris = |d| vec![filler(2, 0, "lugar.poblacion.ciudad", "Paris", Sg, d)];
        assert!(rules(Language::Fr, "odeur", "perception_olfactive", Pl, paris(Det::None)).is_empty());
        assert_eq!(rules(Language::Fr, "odeur", "perception_olfactive", Sg, paris(Det::None)), [HEAD_NUMBER]);
        assert_eq!(rules(Language::Fr, "odeur", "perception_olfactive", Pl, paris(Det::Definite)), [DETERMINER_POLICY]);
    }

    #[test]
    fn non_member_is_flagged() {
        let f = vec![filler(2, 0, "estado.fisico", "salud", Sg, Det::None)];
        assert_eq!(rules(Language::Es, "muerte", "fallecimiento", Sg, f), [CLASS_MEMBERSHIP]);
    }
}
