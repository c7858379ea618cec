use std::collections::BTreeSet;

use serde::Serialize;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: &'static str,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    fn push(&mut self, code: &'static str, subject: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            code,
            subject: subject.into(),
            message: message.into(),
        });
    }
}

const MIN_FRAMES_PER_NOUN: usize = 4;

/// Structural checks beyond referential integrity. Findings are data, never errors.
pub fn validate_bundle(lex: &Lexicon) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let b = lex.bundle();

    let role_ids: BTreeSet<_> = b.roles.iter().map(|r| &r.id).collect();
    if b.roles.len() != 18 || role_ids.len() != b.roles.len() {
        rep.push(
            "role-inventory",
            "roles",
            format!("expected 18 distinct roles, found {}", role_ids.len()),
        );
    }

    for c in &b.ontology {
        if c.id.depth() > 3 {
            rep.push("class-depth", c.id.0.clone(), "class nested deeper than 3 levels");
        }
    }

    let mut used: BTreeSet<&ClassId> = BTreeSet::new();
    for e in &b.entries {
        used.extend(e.classes.iter());
    }
    for n in &b.nouns {
        for s in &n.senses {
            for sl in &s.slots {
                used.extend(sl.members.keys());
            }
        }
    }
    for c in &b.ontology {
        if !used.iter().any(|u| c.id.contains(u)) {
            rep.push(
                "unreachable-class",
                c.id.0.clone(),
                "no entry or slot membership reaches this class",
            );
        }
    }

    for e in &b.entries {
        if e.pos != PartOfSpeech::Adjective
            && !e.forms.contains_key(&FormKey::new(Number::Singular, None))
        {
            rep.push(
                "missing-singular",
                format!("{} ({})", e.lemma, e.language),
                "singular form neither given nor declared absent",
            );
        }
    }

    for n in &b.nouns {
        let mut senses = BTreeSet::new();
        for s in &n.senses {
            let subject = format!("{} / {}", n.lemma, s.sense);
            if !senses.insert(&s.sense) {
                rep.push("duplicate-sense", subject.clone(), "sense id repeated");
            }
            check_schema(lex, n, s, &subject, &mut rep);
        }
        let frames = b
            .frames
            .iter()
            .filter(|f| f.language == n.language && f.noun == n.lemma)
            .count();
        if frames < MIN_FRAMES_PER_NOUN {
            rep.push(
                "few-frames",
                n.lemma.clone(),
                format!("{frames} sentence frames, expected at least {MIN_FRAMES_PER_NOUN}"),
            );
        }
    }

    for f in &b.frames {
        let verbs = f
            .pattern
            .iter()
            .filter(|p| p.function == ClauseFunction::Verb)
            .count();
        let hosts: Vec<_> = f.pattern.iter().filter(|p| p.np).collect();
        if verbs != 1 || hosts.len() != 1 {
            rep.push(
                "frame-pattern",
                f.id.clone(),
                "pattern needs exactly one verb and one NP host",
            );
        }
        if f.verbs.is_empty() {
            rep.push("frame-pattern", f.id.clone(), "no verbs declared");
        }
        if hosts.iter().any(|h| h.function == ClauseFunction::Subject)
            && f.verbs.iter().any(|v| v.pl.is_none())
        {
            rep.push(
                "verb-agreement",
                f.id.clone(),
                "NP is the subject but a verb lacks its plural form",
            );
        }
        if f.language == Language::De && braced_postnominal(&f.standard_example, &f.noun) {
            rep.push(
                "braced-adjective",
                f.id.clone(),
                "German standard examples mark adjectives prenominally only",
            );
        }
    }
    rep
}

/// A `{adjective}` that appears after the head noun (or a compound ending in it).
pub(crate) fn braced_postnominal(example: &str, head: &str) -> bool {
    let head_lc = head.to_lowercase();
    let mut seen_head = false;
    for tok in example.split_whitespace() {
        let clean: String = tok
            .chars()
            .filter(|c| c.is_alphanumeric() || *c == '{' || *c == '}')
            .collect();
        if clean.starts_with('{') {
            if seen_head {
                return true;
            }
            continue;
        }
        let lc = clean.to_lowercase();
        if lc == head_lc || lc.starts_with(&head_lc) || lc.ends_with(&head_lc) {
            seen_head = true;
        }
    }
    false
}

fn check_schema(lex: &Lexicon, n: &Noun, s: &ArgumentSchema, subject: &str, rep: &mut ValidationReport) {
    let mut indices: Vec<u8> = s.slots.iter().map(|sl| sl.index).collect();
    indices.sort_unstable();
    if indices.iter().enumerate().any(|(i, &x)| x as usize != i + 1) {
        rep.push("slot-indices", subject, "slot indices must run from Arg1 without gaps");
    }
    if !s.order.is_empty() {
        let mut o = s.order.clone();
        o.sort_unstable();
        if o != indices {
            rep.push("slot-order", subject, "order must be a permutation of the slot indices");
        }
    }
    for sl in &s.slots {
        let slot_subject = format!("{subject} Arg{}", sl.index);
        if sl.members.is_empty() {
            rep.push("no-classes", slot_subject.clone(), "slot admits no class");
        }
        if sl.realizations.is_empty() {
            rep.push("no-realizations", slot_subject.clone(), "slot has no realization");
        }
        for r in &sl.realizations {
            match r.kind {
                RealizationKind::Genitive | RealizationKind::Compound if n.language != Language::De => {
                    rep.push(
                        "realization-language-mismatch",
                        slot_subject.clone(),
                        format!("{:?} realization on a {} noun", r.kind, n.language),
                    );
                }
                RealizationKind::Prepositional
                    if r.preposition.as_deref().is_none_or(str::is_empty) =>
                {
                    rep.push(
                        "realization-invalid",
                        slot_subject.clone(),
                        "prepositional realization without preposition",
                    );
                }
                RealizationKind::Apposition if r.determiner != DeterminerPolicy::Forbidden => {
                    rep.push(
                        "realization-invalid",
                        slot_subject.clone(),
                        "apposition must forbid determiners",
                    );
                }
                _ => {}
            }
        }
        for (class, cands) in &sl.members {
            let adjectival = sl
                .realizations
                .iter()
                .any(|r| r.kind == RealizationKind::Adjectival && r.admits_class(class));
            let has_adjectives = adjectival
                && lex
                    .role_adjectives(n.language, &n.lemma, &s.sense, sl.index)
                    .iter()
                    .any(|e| e.classes.iter().any(|c| class.contains(c)));
            if cands.is_empty() && !has_adjectives {
                rep.push(
                    "empty-paradigm",
                    format!("{slot_subject} {class}"),
                    "class has no member candidates for this noun",
                );
            }
            for cand in cands {
                let Some(e) = lex.entry(n.language, &cand.lemma) else { continue };
                let usable = sl.realizations.iter().any(|r| match r.kind {
                    RealizationKind::Compound => e.compound_form.is_some(),
                    RealizationKind::Adjectival => false,
                    _ => Number::ALL
                        .iter()
                        .any(|&num| cand.number.allows(num) && e.form(num, r.filler_case()).is_some()),
                });
                if !usable {
                    rep.push(
                        "missing-form",
                        format!("{slot_subject} {}", cand.lemma),
                        "candidate has no form usable by any realization",
                    );
                }
            }
        }
        for r in sl.realizations.iter().filter(|r| r.kind == RealizationKind::Compound) {
            let any = sl.members.iter().any(|(c, cands)| {
                r.admits_class(c)
                    && cands.iter().any(|cand| {
                        lex.entry(n.language, &cand.lemma)
                            .is_some_and(|e| e.compound_form.is_some())
                    })
            });
            if !any {
                rep.push(
                    "compound-form-missing",
                    slot_subject.clone(),
                    "compound realization but no candidate has a linking form",
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_bundle_is_clean() {
        let lex = Lexicon::sample();
        let rep = validate_bundle(&lex);
        assert!(rep.is_clean(), "{:#?}", rep.findings);
    }

    fn with_sample(edit: impl FnOnce(&mut Bundle)) -> Lexicon {
        let mut b = Lexicon::sample().bundle().clone();
        edit(&mut b);
        Lexicon::from_bundle(b).unwrap()
    }

    #[test]
    fn empty_membership_is_reported() {
        let lex = with_sample(|b| {
            let n = b.nouns.iter_mut().find(|n| n.lemma == "olor").unwrap();
            let sl = &mut n.senses[0].slots[1];
            sl.members.insert(ClassId::from("lugar.inmueble.alojamiento"), vec![]);
        });
        assert!(validate_bundle(&lex).has("empty-paradigm"));
    }

    #[test]
    fn compound_on_spanish_noun_is_reported() {
        let lex = with_sample(|b| {
            let n = b.nouns.iter_mut().find(|n| n.lemma == "olor").unwrap();
            n.senses[0].slots[0].realizations.push(FormalRealization {
                kind: RealizationKind::Compound,
                preposition: None,
                determiner: DeterminerPolicy::Forbidden,
                filler_number: FillerNumberPolicy::PerCandidate,
                case: None,
                classes: vec![],
                attaches_following: false,
                direction: None,
                examples: Default::default(),
            });
        });
        assert!(validate_bundle(&lex).has("realization-language-mismatch"));
    }

    #[test]
    fn german_examples_brace_prenominally() {
        assert!(!braced_postnominal("die {lustige} Frage der Studentin", "Frage"));
        assert!(!braced_postnominal("die {interessante} Teilnehmerfrage", "Frage"));
        assert!(braced_postnominal("die Frage {lustige} der Studentin", "Frage"));
        let lex = Lexicon::sample();
        for f in lex.frames().iter().filter(|f| f.language == Language::De) {
            assert!(!braced_postnominal(&f.standard_example, &f.noun), "{}", f.id);
        }
    }
}
