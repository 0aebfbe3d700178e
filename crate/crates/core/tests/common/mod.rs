//! Seeded generators of valid corpora and inventories for property tests.
#![allow(dead_code)]

pub mod oracle;
pub mod stub;

use std::collections::BTreeMap;
use std::path::PathBuf;

use dsrl::corpus::{
    AnnotatedStructure, Argument, Corpus, Formalism, Link, PredicateInstance, Sentence, Style, TokenRange,
};
use dsrl::inventory::{Inventory, ModifierSet, SenseEntry, CONLL2009_MODIFIERS};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

/// Tokens chosen to exercise escaping and alignment: repeats, reserved
/// characters, header punctuation and non-ASCII text.
const VOCAB: &[&str] = &[
    "the", "the", "a", "book", "Mary", "John", "gave", "to", ".", ",", ":", "::", "a.b", "[", "]", "{", "}",
    "[x]", "{y}", "\\", "a\\", "<", ">", "p>", "<p", "reference-to", "naïve", "東京", "ß", "-", "'s", "...",
];

const DEF_WORDS: &[&str] = &[
    "thing", "given", "entity", "to", "who", "time", "or", "duration", "a.", "b:", ":", "x. y", "[note]",
    "{set}", "back\\slash", "naïve", "日本", "end.", "in", "place", "of", "p", "<", ">",
];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn definition(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..=5);
    let words: Vec<&str> = (0..n).map(|_| pick(rng, DEF_WORDS)).collect();
    words.join(" ")
}

fn lemma(rng: &mut ChaCha8Rng) -> String {
    let stems = ["give", "run", "set", "x:y", "a.b", "[lemma]", "naïve", "take_off"];
    format!("{}{}", pick(rng, &stems), rng.random_range(0..4))
}

pub struct Generated {
    pub corpus: Corpus,
    pub inventory: Inventory,
}

/// Places non-overlapping arguments around the predicate.
fn arguments(
    rng: &mut ChaCha8Rng,
    len: usize,
    pred: TokenRange,
    formalism: Formalism,
    roles: &[String],
) -> Vec<Argument> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < len {
        if pred.overlaps(&TokenRange::single(i)) || !rng.random_bool(0.45) {
            i += 1;
            continue;
        }
        let mut end = i;
        if formalism == Formalism::Span {
            let want = rng.random_range(0..4);
            while end + 1 < len && end - i < want && !pred.overlaps(&TokenRange::single(end + 1)) {
                end += 1;
            }
        }
        let link = match rng.random_range(0..6) {
            0 => Link::ReferenceTo,
            1 => Link::ContinuationOf,
            _ => Link::None,
        };
        let role = roles.choose(rng).unwrap().clone();
        out.push(Argument::new(TokenRange::new(i, end).unwrap(), role, link));
        i = end + 1;
    }
    out
}

/// A corpus of `sentences` sentences whose every structure is encodable
/// against the returned inventory.
pub fn random_corpus(seed: u64, sentences: usize, style: Style, formalism: Formalism) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (modifier_set, modifiers): (Option<ModifierSet>, BTreeMap<String, String>) = match style {
        Style::Propbank => (
            Some(ModifierSet::Conll2009),
            CONLL2009_MODIFIERS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        ),
        Style::Framenet => (None, BTreeMap::new()),
    };

    let mut entries: BTreeMap<(String, String), SenseEntry> = BTreeMap::new();
    let mut sents = Vec::new();
    let mut structures = Vec::new();
    for s in 0..sentences {
        let len = rng.random_range(1..=12);
        let tokens: Vec<String> = (0..len).map(|_| pick(&mut rng, VOCAB).to_string()).collect();
        let id = (s + 1).to_string();
        sents.push(Sentence::new(id.clone(), Some(format!("doc{:04}", s / 4)), tokens).unwrap());

        let mut taken: Vec<TokenRange> = Vec::new();
        let mut sentence_structures = Vec::new();
        for _ in 0..rng.random_range(0..=2) {
            let start = rng.random_range(0..len);
            let end = if formalism == Formalism::Span && rng.random_bool(0.2) {
                (start + 1).min(len - 1)
            } else {
                start
            };
            let range = TokenRange::new(start, end).unwrap();
            if taken.iter().any(|t| t.overlaps(&range) || *t == range) {
                continue;
            }
            taken.push(range);

            let lemma = lemma(&mut rng);
            let sense_id = format!("{}.{:02}", lemma, rng.random_range(1..3));
            let entry = entries
                .entry((lemma.to_lowercase(), sense_id.clone()))
                .or_insert_with(|| {
                    let n_roles = rng.random_range(1..=4);
                    let roles = (0..n_roles)
                        .map(|r| match style {
                            Style::Propbank => (format!("A{r}"), definition(&mut rng)),
                            Style::Framenet => (format!("Fe{r}"), definition(&mut rng)),
                        })
                        .collect();
                    SenseEntry {
                        lemma: lemma.clone(),
                        sense_id: sense_id.clone(),
                        definition: definition(&mut rng),
                        roles,
                    }
                });
            let mut role_pool: Vec<String> = entry.roles.keys().cloned().collect();
            role_pool.extend(modifiers.keys().take(3).cloned());
            let args = arguments(&mut rng, len, range, formalism, &role_pool);
            let predicate = PredicateInstance {
                sentence_ref: id.clone(),
                range,
                lemma: entry.lemma.clone(),
                sense_label: Some(sense_id),
                style,
            };
            sentence_structures.push(AnnotatedStructure::new(predicate, args, formalism).unwrap());
        }
        sentence_structures.sort_by_key(|st: &AnnotatedStructure| st.predicate().range);
        structures.extend(sentence_structures);
    }
    let inventory = Inventory::new(style, modifier_set, entries.into_values().collect(), modifiers).unwrap();
    Generated {
        corpus: Corpus::new(sents, structures, format!("random seed {seed}")).unwrap(),
        inventory,
    }
}

/// Random structures over the sentences of `base`, with labels from a small
/// pool so that gold and prediction overlap often.
pub fn random_labeling(rng: &mut ChaCha8Rng, base: &Corpus, formalism: Formalism) -> Corpus {
    let senses = ["s.01", "s.02", "s.03"];
    let roles = ["A0", "A1", "AM-TMP"];
    let mut structures = Vec::new();
    for s in base.sentences() {
        let len = s.len();
        let mut used = Vec::new();
        for _ in 0..rng.random_range(0..=2) {
            let p = rng.random_range(0..len);
            if used.contains(&p) {
                continue;
            }
            used.push(p);
            let range = TokenRange::single(p);
            let pool: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
            let args = arguments(rng, len, range, formalism, &pool);
            let sense = if rng.random_bool(0.9) {
                Some(pick(rng, &senses).to_string())
            } else {
                None
            };
            structures.push(
                AnnotatedStructure::new(
                    PredicateInstance {
                        sentence_ref: s.sentence_id().to_string(),
                        range,
                        lemma: "s".into(),
                        sense_label: sense,
                        style: Style::Propbank,
                    },
                    args,
                    formalism,
                )
                .unwrap(),
            );
        }
    }
    Corpus::new(base.sentences().to_vec(), structures, "random labeling").unwrap()
}

/// Short sentences over a tiny vocabulary.
pub fn random_sentences(rng: &mut ChaCha8Rng, n: usize) -> Corpus {
    let sents = (0..n)
        .map(|i| {
            let len = rng.random_range(1..=6);
            Sentence::new((i + 1).to_string(), None, (0..len).map(|j| format!("w{j}")).collect()).unwrap()
        })
        .collect();
    Corpus::new(sents, vec![], "").unwrap()
}
