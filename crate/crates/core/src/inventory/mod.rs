//! Predicate-sense and role definitions.
//!
//! An inventory document is one JSON object per line. An optional first
//! record `{"style": ..., "modifier_set": ..., "modifiers": {...}}` selects
//! the inventory style and merges one of the bundled modifier tables (plus
//! any extra modifiers); every other record is a sense entry
//! `{"lemma", "sense_id", "definition", "roles": {label: definition}}`.
//! FrameNet frames use the frame name as `sense_id` and frame elements as roles.

mod modifiers;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::corpus::Style;
use crate::error::{Error, Result};

pub use modifiers::{ModifierSet, CONLL2009_MODIFIERS, CONLL2012_MODIFIERS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseEntry {
    pub lemma: String,
    pub sense_id: String,
    pub definition: String,
    pub roles: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inventory {
    style: Style,
    modifier_set: Option<ModifierSet>,
    entries: BTreeMap<(String, String), SenseEntry>,
    modifiers: BTreeMap<String, String>,
}

/// A JSON object whose keys must be unique.
#[derive(Debug, Default)]
struct UniqueMap(BTreeMap<String, String>);

impl<'de> Deserialize<'de> for UniqueMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = UniqueMap;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of label to definition")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<UniqueMap, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate label `{k}`")));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderRecord {
    #[serde(default)]
    style: Option<Style>,
    #[serde(default)]
    modifier_set: Option<ModifierSet>,
    #[serde(default)]
    modifiers: Option<UniqueMap>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    lemma: String,
    sense_id: String,
    definition: String,
    #[serde(default)]
    roles: UniqueMap,
}

#[derive(Serialize)]
struct HeaderOut<'a> {
    style: Style,
    modifier_set: Option<ModifierSet>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    modifiers: BTreeMap<&'a str, &'a str>,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    lemma: &'a str,
    sense_id: &'a str,
    definition: &'a str,
    roles: &'a BTreeMap<String, String>,
}

fn lemma_key(lemma: &str) -> String {
    lemma.to_lowercase()
}

pub fn load_inventory(text: &str) -> Result<Inventory> {
    let mut style = Style::Propbank;
    let mut modifier_set = None;
    let mut modifiers = BTreeMap::new();
    let mut entries = BTreeMap::new();

    let records = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    for (n, (line_no, line)) in records.enumerate() {
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::format(line_no, e.to_string()))?;
        let is_header = value.get("lemma").is_none()
            && ["style", "modifier_set", "modifiers"]
                .iter()
                .any(|k| value.get(k).is_some());
        if is_header {
            if n != 0 {
                return Err(Error::format(line_no, "header record must come first"));
            }
            let header: HeaderRecord =
                serde_json::from_str(line).map_err(|e| Error::format(line_no, e.to_string()))?;
            style = header.style.unwrap_or(Style::Propbank);
            modifier_set = header.modifier_set;
            if let Some(set) = modifier_set {
                for (label, def) in set.table() {
                    modifiers.insert(label.to_string(), def.to_string());
                }
            }
            for (label, def) in header.modifiers.unwrap_or_default().0 {
                if def.trim().is_empty() {
                    return Err(Error::Invariant(format!(
                        "line {line_no}: modifier `{label}` has an empty definition"
                    )));
                }
                modifiers.insert(label, def);
            }
            continue;
        }

        let rec: EntryRecord =
            serde_json::from_str(line).map_err(|e| Error::format(line_no, e.to_string()))?;
        if rec.definition.trim().is_empty() {
            return Err(Error::Invariant(format!(
                "line {line_no}: sense `{}` has an empty definition",
                rec.sense_id
            )));
        }
        if let Some((label, _)) = rec.roles.0.iter().find(|(_, d)| d.trim().is_empty()) {
            return Err(Error::Invariant(format!(
                "line {line_no}: role `{label}` of `{}` has an empty definition",
                rec.sense_id
            )));
        }
        let key = (lemma_key(&rec.lemma), rec.sense_id.clone());
        if entries.contains_key(&key) {
            return Err(Error::format(
                line_no,
                format!("duplicate sense `{}` for lemma `{}`", rec.sense_id, rec.lemma),
            ));
        }
        entries.insert(
            key,
            SenseEntry {
                lemma: rec.lemma,
                sense_id: rec.sense_id,
                definition: rec.definition,
                roles: rec.roles.0,
            },
        );
    }

    Inventory::new(style, modifier_set, entries.into_values().collect(), modifiers)
}

impl Inventory {
    /// `modifiers` is the complete modifier table, including any bundled set.
    pub fn new(
        style: Style,
        modifier_set: Option<ModifierSet>,
        entries: Vec<SenseEntry>,
        modifiers: BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for entry in entries {
            if entry.definition.trim().is_empty() {
                return Err(Error::Invariant(format!(
                    "sense `{}` has an empty definition",
                    entry.sense_id
                )));
            }
            if let Some(role) = entry.roles.keys().find(|r| modifiers.contains_key(*r)) {
                return Err(Error::Invariant(format!(
                    "core role `{role}` of `{}` collides with a modifier label",
                    entry.sense_id
                )));
            }
            let key = (lemma_key(&entry.lemma), entry.sense_id.clone());
            if map.insert(key, entry).is_some() {
                return Err(Error::Invariant("duplicate (lemma, sense) entry".into()));
            }
        }
        if let Some((label, _)) = modifiers.iter().find(|(_, d)| d.trim().is_empty()) {
            return Err(Error::Invariant(format!(
                "modifier `{label}` has an empty definition"
            )));
        }
        Ok(Inventory {
            style,
            modifier_set,
            entries: map,
            modifiers,
        })
    }

    pub fn style(&self) -> Style {
        self.style
    }

    pub fn modifier_set(&self) -> Option<ModifierSet> {
        self.modifier_set
    }

    pub fn modifiers(&self) -> &BTreeMap<String, String> {
        &self.modifiers
    }

    pub fn entries(&self) -> impl Iterator<Item = &SenseEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All senses of `lemma` (case-insensitive exact match), sorted by sense id.
    /// An empty result means the predicate is outside the inventory.
    pub fn candidate_senses(&self, lemma: &str) -> Vec<&SenseEntry> {
        let key = lemma_key(lemma);
        self.entries
            .range((key.clone(), String::new())..)
            .take_while(|((l, _), _)| *l == key)
            .map(|(_, e)| e)
            .collect()
    }

    pub fn sense(&self, lemma: &str, sense_id: &str) -> Option<&SenseEntry> {
        self.entries.get(&(lemma_key(lemma), sense_id.to_string()))
    }

    /// Looks up a sense by lemma, falling back to the sense id alone when it
    /// is unique across lemmas (corpus lemmas are sometimes predicted and
    /// drift from the inventory's).
    pub fn resolve_sense(&self, lemma: &str, sense_id: &str) -> Option<&SenseEntry> {
        self.sense(lemma, sense_id).or_else(|| {
            let mut hits = self.entries.values().filter(|e| e.sense_id == sense_id);
            match (hits.next(), hits.next()) {
                (Some(only), None) => Some(only),
                _ => None,
            }
        })
    }

    /// Entry-specific definition if present, else the modifier definition.
    pub fn role_definition<'a>(&'a self, entry: &'a SenseEntry, role_label: &str) -> Option<&'a str> {
        entry
            .roles
            .get(role_label)
            .or_else(|| self.modifiers.get(role_label))
            .map(String::as_str)
    }

    /// Candidate role set for an entry: its core roles merged with the modifiers.
    pub fn role_candidates(&self, entry: &SenseEntry) -> BTreeMap<String, String> {
        let mut out = self.modifiers.clone();
        out.extend(entry.roles.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    /// Serializes to the document format read by [`load_inventory`].
    pub fn write(&self) -> String {
        let bundled: BTreeMap<&str, &str> = self
            .modifier_set
            .map(|s| s.table().iter().copied().collect())
            .unwrap_or_default();
        let extra = self
            .modifiers
            .iter()
            .filter(|(k, v)| bundled.get(k.as_str()) != Some(&v.as_str()))
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        let header = HeaderOut {
            style: self.style,
            modifier_set: self.modifier_set,
            modifiers: extra,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for e in self.entries.values() {
            let rec = EntryOut {
                lemma: &e.lemma,
                sense_id: &e.sense_id,
                definition: &e.definition,
                roles: &e.roles,
            };
            out.push_str(&serde_json::to_string(&rec).expect("entry serializes"));
            out.push('\n');
        }
        out
    }
}
