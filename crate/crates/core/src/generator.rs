//! Structure templates from a class selection, and restricted-random phrase generation.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::determiner_choices;
use crate::error::{Error, Result};
use crate::lexicon::{
    ArgumentSchema, ArgumentSlot, ClassId, Direction, FillerNumberPolicy, FormalRealization, Language,
    Lexicon, Number, PairedRealization, RealizationKind, RoleId,
};
use crate::np::{Det, Filler, NpSpec, PairedFiller};
use crate::realize::realize_np;

/// Largest batch a single request may ask for.
pub const MAX_LIMIT: usize = 10_000;

pub type ClassSelection = BTreeMap<u8, ClassId>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TemplateSlot {
    pub slot: u8,
    pub role: RoleId,
    pub class: ClassId,
    pub realization: usize,
    pub code: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureTemplate {
    pub id: String,
    pub language: Language,
    pub noun: String,
    pub sense: String,
    pub head_number: Number,
    pub slots: Vec<TemplateSlot>,
    pub standard_example: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceSlot {
    pub slot: u8,
    pub role: RoleId,
    pub class: ClassId,
    pub lemma: String,
    pub number: Number,
    pub determiner: Det,
    pub realization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paired: Option<PairedFiller>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedPhrase {
    pub surface: String,
    pub language: Language,
    pub noun: String,
    pub sense: String,
    pub template_id: String,
    pub head_number: Number,
    pub trace: Vec<TraceSlot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip)]
    pub np: NpSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    pub seed: u64,
    pub limit: usize,
}

/// Template-id code of a realization, disambiguated when a slot repeats a code.
pub fn realization_code(slot: &ArgumentSlot, idx: usize) -> String {
    let code = slot.realizations[idx].code();
    let dup = slot
        .realizations
        .iter()
        .enumerate()
        .any(|(i, r)| i != idx && r.code() == code);
    if dup {
        format!("{code}~{idx}")
    } else {
        code
    }
}

/// Resolves `(slot reference, class)` pairs against a schema.
pub fn resolve_selection<'a>(
    schema: &ArgumentSchema,
    pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<ClassSelection> {
    let mut sel = ClassSelection::new();
    for (slot, class) in pairs {
        let s = schema
            .resolve_slot(slot)
            .ok_or_else(|| Error::not_found(format!("slot `{slot}` of sense `{}`", schema.sense)))?;
        if sel.insert(s.index, ClassId::from(class.trim())).is_some() {
            return Err(Error::Domain(format!("Arg{} selected twice", s.index)));
        }
    }
    Ok(sel)
}

#[derive(Debug, Clone)]
struct PoolItem {
    lemma: String,
    class: ClassId,
    numbers: Vec<Number>,
}

struct Ctx<'a> {
    lex: &'a Lexicon,
    language: Language,
    noun: &'a str,
    schema: &'a ArgumentSchema,
}

impl Ctx<'_> {
    /// Candidates usable by one realization under a head number, each with its allowed filler numbers.
    fn pool(&self, slot: &ArgumentSlot, r: &FormalRealization, class: &ClassId, head: Number) -> Vec<PoolItem> {
        let lex = self.lex;
        let head_entry = lex.entry(self.language, self.noun);
        let mut items: Vec<PoolItem> = Vec::new();
        let mut raw: Vec<(String, ClassId, Vec<Number>)> = Vec::new();
        match r.kind {
            RealizationKind::Adjectival => {
                let case = (self.language == Language::De).then_some(crate::lexicon::Case::Nom);
                for e in lex.role_adjectives(self.language, self.noun, &self.schema.sense, slot.index) {
                    let Some(c) = e.classes.iter().find(|c| class.contains(c)) else { continue };
                    let g = head_entry.map(|h| h.gender).unwrap_or_default();
                    if e.adjective_form(g, head, case).is_some() {
                        raw.push((e.lemma.clone(), c.clone(), vec![head]));
                    }
                }
            }
            _ => {
                for (c, cand) in slot.candidates_under(class) {
                    let Some(e) = lex.entry(self.language, &cand.lemma) else { continue };
                    let numbers: Vec<Number> = if r.kind == RealizationKind::Compound {
                        if e.compound_form.is_some() { vec![Number::Singular] } else { vec![] }
                    } else {
                        let case = if self.language == Language::De {
                            match r.kind {
                                RealizationKind::Apposition => None,
                                _ => r.filler_case(),
                            }
                        } else {
                            None
                        };
                        Number::ALL
                            .into_iter()
                            .filter(|&n| cand.number.allows(n))
                            .filter(|&n| match r.filler_number {
                                FillerNumberPolicy::Singular => n == Number::Singular,
                                FillerNumberPolicy::Plural => n == Number::Plural,
                                _ => true,
                            })
                            .filter(|&n| e.form(n, case).is_some())
                            .collect()
                    };
                    raw.push((cand.lemma.clone(), c.clone(), numbers));
                }
            }
        }
        for (lemma, c, mut numbers) in raw {
            if !r.admits_class(&c) {
                continue;
            }
            for rule in self.schema.number_rules.iter().filter(|nr| nr.slot == slot.index && nr.head == head) {
                numbers.retain(|&n| n == rule.filler);
            }
            let head_ok = self
                .schema
                .head_number_rules
                .iter()
                .filter(|hr| hr.slot == slot.index && hr.class.contains(&c))
                .all(|hr| hr.head == head);
            if numbers.is_empty() || !head_ok || items.iter().any(|i| i.lemma == lemma) {
                continue;
            }
            items.push(PoolItem {
                lemma,
                class: c,
                numbers,
            });
        }
        items
    }
}

fn head_has_number(lex: &Lexicon, language: Language, noun: &str, n: Number) -> bool {
    let case = (language == Language::De).then_some(crate::lexicon::Case::Nom);
    lex.entry(language, noun).is_some_and(|e| e.form(n, case).is_some())
}

/// One template per valid combination of realizations and head number, in a fixed order.
pub fn enumerate_structures(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    selection: &ClassSelection,
) -> Result<Vec<StructureTemplate>> {
    let schema = lex.schema(language, noun, sense)?;
    if schema.slots.is_empty() || selection.is_empty() {
        return Ok(Vec::new());
    }
    let ctx = Ctx {
        lex,
        language,
        noun,
        schema,
    };
    let mut per_slot: Vec<(&ArgumentSlot, &ClassId, Vec<usize>)> = Vec::new();
    for (&idx, class) in selection {
        let slot = schema
            .slot(idx)
            .ok_or_else(|| Error::not_found(format!("Arg{idx} of `{noun}` / {sense}")))?;
        if lex.class(class).is_none() {
            return Err(Error::not_found(format!("class `{class}`")));
        }
        if !slot.admits(class) {
            return Err(Error::Domain(format!(
                "class `{class}` is not allowed in {}",
                lex.slot_label(slot)
            )));
        }
        let reals: Vec<usize> = (0..slot.realizations.len())
            .filter(|&i| slot.realizations[i].admits_class(class))
            .collect();
        if reals.is_empty() {
            return Err(Error::Domain(format!(
                "no realization of {} admits class `{class}`",
                lex.slot_label(slot)
            )));
        }
        let any_members = reals.iter().any(|&i| {
            Number::ALL
                .iter()
                .any(|&h| !ctx.pool(slot, &slot.realizations[i], class, h).is_empty())
        });
        if !any_members {
            return Err(Error::EmptyParadigm {
                slot: lex.slot_label(slot),
                class: class.to_string(),
            });
        }
        per_slot.push((slot, class, reals));
    }
    for (slot, _, _) in &per_slot {
        for req in &slot.requires {
            if !selection.contains_key(req) {
                let label = schema.slot(*req).map_or(format!("Arg{req}"), |s| lex.slot_label(s));
                return Err(Error::Dependency { slot: label });
            }
        }
    }

    let mut out = Vec::new();
    for head in schema.head_number.numbers() {
        if !head_has_number(lex, language, noun, head) {
            continue;
        }
        let mut combo = vec![0usize; per_slot.len()];
        loop {
            let choice: Vec<usize> = combo.iter().zip(&per_slot).map(|(&c, (_, _, r))| r[c]).collect();
            if let Some(t) = build_template(&ctx, head, &per_slot, &choice) {
                out.push(t);
            }
            // odometer over realization choices
            let mut i = combo.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                combo[i] += 1;
                if combo[i] < per_slot[i].2.len() {
                    break;
                }
                combo[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || combo.is_empty() {
                break;
            }
        }
    }
    Ok(out)
}

fn build_template(
    ctx: &Ctx,
    head: Number,
    per_slot: &[(&ArgumentSlot, &ClassId, Vec<usize>)],
    choice: &[usize],
) -> Option<StructureTemplate> {
    let kinds: Vec<&FormalRealization> = per_slot
        .iter()
        .zip(choice)
        .map(|((s, _, _), &r)| &s.realizations[r])
        .collect();
    let count = |f: &dyn Fn(&FormalRealization) -> bool| kinds.iter().filter(|r| f(r)).count();
    if count(&|r| r.kind == RealizationKind::Compound) > 1
        || count(&|r| r.kind == RealizationKind::Apposition && r.direction == Some(Direction::Before)) > 1
    {
        return None;
    }
    // A following adnominal chunk would attach to this filler, so it must come last.
    let last_linear = per_slot
        .iter()
        .zip(&kinds)
        .filter(|(_, r)| r.is_linear())
        .max_by_key(|((s, _, _), _)| ctx.schema.position(s.index));
    if per_slot.iter().zip(&kinds).any(|((s, _, _), r)| {
        r.attaches_following && last_linear.is_some_and(|((l, _, _), _)| l.index != s.index)
    }) {
        return None;
    }
    let mut slots = Vec::new();
    let mut pools = Vec::new();
    for ((slot, class, _), &ri) in per_slot.iter().zip(choice) {
        let pool = ctx.pool(slot, &slot.realizations[ri], class, head);
        if pool.is_empty() {
            return None;
        }
        pools.push(pool);
        slots.push(TemplateSlot {
            slot: slot.index,
            role: slot.role.clone(),
            class: (*class).clone(),
            realization: ri,
            code: realization_code(slot, ri),
        });
    }
    let id = std::iter::once(head.short().to_string())
        .chain(slots.iter().map(|s| format!("{}:{}", s.slot, s.code)))
        .collect::<Vec<_>>()
        .join("|");
    let mut t = StructureTemplate {
        id,
        language: ctx.language,
        noun: ctx.noun.to_string(),
        sense: ctx.schema.sense.clone(),
        head_number: head,
        slots,
        standard_example: String::new(),
    };
    let np = standard_np(ctx, &t, &pools);
    t.standard_example = realize_np(ctx.lex, &np).ok()?;
    Some(t)
}

fn standard_np(ctx: &Ctx, t: &StructureTemplate, pools: &[Vec<PoolItem>]) -> NpSpec {
    let mut np = NpSpec::new(t.language, &t.noun, &t.sense, t.head_number);
    for (ts, pool) in t.slots.iter().zip(pools) {
        let slot = ctx.schema.slot(ts.slot).expect("template slot exists");
        let r = &slot.realizations[ts.realization];
        let preferred = r
            .examples
            .iter()
            .filter(|(c, _)| c.overlaps(&ts.class))
            .map(|(_, l)| l.as_str())
            .chain(ctx.lex.class(&ts.class).and_then(|c| c.example.as_deref()))
            .find_map(|l| pool.iter().position(|i| i.lemma == l))
            .unwrap_or(0);
        let item = &pool[preferred];
        let number = if item.numbers.contains(&Number::Singular) { Number::Singular } else { item.numbers[0] };
        let det = determiner_choices(ctx.lex, t.language, &item.lemma, r.kind, r.determiner)[0];
        let paired = slot.paired.as_ref().filter(|p| p.applies(r, &item.class)).map(|_| {
            let second = pool
                .iter()
                .cycle()
                .skip(preferred + 1)
                .take(pool.len())
                .find(|i| i.class == item.class && i.lemma != item.lemma)
                .unwrap_or(item);
            PairedFiller {
                lemma: second.lemma.clone(),
                number: second.numbers[0],
                determiner: determiner_choices(ctx.lex, t.language, &second.lemma, r.kind, r.determiner)[0],
            }
        });
        np.fillers.push(Filler {
            slot: ts.slot,
            realization: ts.realization,
            class: ts.class.clone(),
            lemma: item.lemma.clone(),
            number,
            determiner: det,
            paired,
        });
    }
    np
}

/// Finds a template by id among those enumerated for the selection.
pub fn find_template(
    lex: &Lexicon,
    language: Language,
    noun: &str,
    sense: &str,
    selection: &ClassSelection,
    id: Option<&str>,
) -> Result<StructureTemplate> {
    let all = enumerate_structures(lex, language, noun, sense, selection)?;
    match id {
        Some(id) => all
            .into_iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::not_found(format!("structure `{id}` for `{noun}`"))),
        None => all
            .into_iter()
            .next()
            .ok_or_else(|| Error::Domain(format!("the selection yields no structure for `{noun}`"))),
    }
}

/// One concrete choice for a slot.
#[derive(Debug, Clone)]
struct Choice {
    lemma: String,
    number: Number,
    det: Det,
    paired: Option<PairedFiller>,
}

struct SlotPlan<'a> {
    ts: &'a TemplateSlot,
    r: &'a FormalRealization,
    pool: Vec<PoolItem>,
    pairing: Option<&'a PairedRealization>,
}

fn plans<'a>(lex: &'a Lexicon, t: &'a StructureTemplate) -> Result<(Vec<SlotPlan<'a>>, &'a ArgumentSchema)> {
    let schema = lex.schema(t.language, &t.noun, &t.sense)?;
    let ctx = Ctx {
        lex,
        language: t.language,
        noun: &t.noun,
        schema,
    };
    let mut out = Vec::new();
    for ts in &t.slots {
        let slot = schema
            .slot(ts.slot)
            .ok_or_else(|| Error::not_found(format!("Arg{} of `{}`", ts.slot, t.noun)))?;
        let r = slot
            .realizations
            .get(ts.realization)
            .ok_or_else(|| Error::not_found(format!("realization {} of Arg{}", ts.realization, ts.slot)))?;
        let pool = ctx.pool(slot, r, &ts.class, t.head_number);
        if pool.is_empty() {
            return Err(Error::EmptyParadigm {
                slot: lex.slot_label(slot),
                class: ts.class.to_string(),
            });
        }
        out.push(SlotPlan {
            ts,
            r,
            pairing: slot.paired.as_ref(),
            pool,
        });
    }
    Ok((out, schema))
}

fn to_phrase(lex: &Lexicon, t: &StructureTemplate, plans: &[SlotPlan], choices: &[Choice], seed: Option<u64>) -> Result<GeneratedPhrase> {
    let mut np = NpSpec::new(t.language, &t.noun, &t.sense, t.head_number);
    let mut trace = Vec::new();
    for (p, c) in plans.iter().zip(choices) {
        np.fillers.push(Filler {
            slot: p.ts.slot,
            realization: p.ts.realization,
            class: p.ts.class.clone(),
            lemma: c.lemma.clone(),
            number: c.number,
            determiner: c.det,
            paired: c.paired.clone(),
        });
        trace.push(TraceSlot {
            slot: p.ts.slot,
            role: p.ts.role.clone(),
            class: p.ts.class.clone(),
            lemma: c.lemma.clone(),
            number: c.number,
            determiner: c.det,
            realization: p.ts.code.clone(),
            paired: c.paired.clone(),
        });
    }
    let surface = realize_np(lex, &np)?;
    Ok(GeneratedPhrase {
        surface,
        language: t.language,
        noun: t.noun.clone(),
        sense: t.sense.clone(),
        template_id: t.id.clone(),
        head_number: t.head_number,
        trace,
        seed,
        np,
    })
}

/// Per-slot deck: uniform without replacement until exhausted, then with replacement.
struct Deck {
    order: Vec<usize>,
    size: usize,
}

impl Deck {
    fn new(size: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut order: Vec<usize> = (0..size).collect();
        order.shuffle(rng);
        Deck { order, size }
    }

    fn draw(&mut self, rng: &mut ChaCha8Rng) -> usize {
        self.order.pop().unwrap_or_else(|| rng.gen_range(0..self.size))
    }
}

/// Up to `limit` distinct phrases; the same seed always yields the same sequence.
pub fn generate_phrases(lex: &Lexicon, t: &StructureTemplate, opts: GenerateOptions) -> Result<Vec<GeneratedPhrase>> {
    if opts.limit > MAX_LIMIT {
        return Err(Error::Domain(format!("limit {} exceeds {MAX_LIMIT}", opts.limit)));
    }
    if opts.limit == 0 {
        return Ok(Vec::new());
    }
    let (plans, _) = plans(lex, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut decks: Vec<Deck> = plans.iter().map(|p| Deck::new(p.pool.len(), &mut rng)).collect();
    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    let attempts = opts.limit * 20 + 200;
    for _ in 0..attempts {
        if out.len() >= opts.limit {
            break;
        }
        let mut choices = Vec::with_capacity(plans.len());
        for (p, deck) in plans.iter().zip(decks.iter_mut()) {
            let item = &p.pool[deck.draw(&mut rng)];
            let number = *item.numbers.choose(&mut rng).expect("pool items have numbers");
            let dets = determiner_choices(lex, t.language, &item.lemma, p.r.kind, p.r.determiner);
            let det = *dets.choose(&mut rng).expect("policy allows a determiner");
            let paired = paired_options(lex, t.language, p, item)
                .choose(&mut rng)
                .cloned();
            choices.push(Choice {
                lemma: item.lemma.clone(),
                number,
                det,
                paired,
            });
        }
        let phrase = to_phrase(lex, t, &plans, &choices, Some(opts.seed))?;
        if seen.insert(phrase.surface.clone()) {
            out.push(phrase);
        }
    }
    Ok(out)
}

fn paired_options(lex: &Lexicon, language: Language, p: &SlotPlan, item: &PoolItem) -> Vec<PairedFiller> {
    if !p.pairing.is_some_and(|pr| pr.applies(p.r, &item.class)) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for other in p.pool.iter().filter(|o| o.class == item.class && o.lemma != item.lemma) {
        for &n in &other.numbers {
            for &d in determiner_choices(lex, language, &other.lemma, p.r.kind, p.r.determiner) {
                out.push(PairedFiller {
                    lemma: other.lemma.clone(),
                    number: n,
                    determiner: d,
                });
            }
        }
    }
    out
}

/// Every distinct phrase of a template, in a fixed order; stops after `cap` phrases.
pub fn enumerate_phrases(lex: &Lexicon, t: &StructureTemplate, cap: usize) -> Result<Vec<GeneratedPhrase>> {
    let (plans, _) = plans(lex, t)?;
    let mut per_slot: Vec<Vec<Choice>> = Vec::new();
    for p in &plans {
        let mut v = Vec::new();
        for item in &p.pool {
            let pairs = paired_options(lex, t.language, p, item);
            for &n in &item.numbers {
                for &d in determiner_choices(lex, t.language, &item.lemma, p.r.kind, p.r.determiner) {
                    let base = Choice {
                        lemma: item.lemma.clone(),
                        number: n,
                        det: d,
                        paired: None,
                    };
                    if pairs.is_empty() {
                        v.push(base);
                    } else {
                        for pf in &pairs {
                            v.push(Choice {
                                paired: Some(pf.clone()),
                                ..base.clone()
                            });
                        }
                    }
                }
            }
        }
        per_slot.push(v);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_slot.len()];
    'outer: loop {
        let choices: Vec<Choice> = idx.iter().zip(&per_slot).map(|(&i, v)| v[i].clone()).collect();
        let phrase = to_phrase(lex, t, &plans, &choices, None)?;
        if seen.insert(phrase.surface.clone()) {
            out.push(phrase);
            if out.len() >= cap {
                break;
            }
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_slot[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
    }
    Ok(out)
}
