//! Argument-modifier definitions shared by every predicate sense.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModifierSet {
    Conll2009,
    Conll2012,
}

impl ModifierSet {
    pub fn table(self) -> &'static [(&'static str, &'static str)] {
        match self {
            ModifierSet::Conll2009 => CONLL2009_MODIFIERS,
            ModifierSet::Conll2012 => CONLL2012_MODIFIERS,
        }
    }
}

pub const CONLL2009_MODIFIERS: &[(&str, &str)] = &[
    ("AM-ADV", "adverbial modifier"),
    ("AM-CAU", "cause or reason"),
    ("AM-DIR", "direction or source"),
    ("AM-DIS", "discourse connective"),
    ("AM-EXT", "amount or extent"),
    ("AM-LOC", "location or position"),
    ("AM-MNR", "instrument or manner"),
    ("AM-MOD", "modal auxiliary"),
    ("AM-NEG", "negation marker"),
    ("AM-PNC", "purpose, not cause"),
    ("AM-PRD", "secondary predication"),
    ("AM-TMP", "time or duration"),
];

pub const CONLL2012_MODIFIERS: &[(&str, &str)] = &[
    ("ARGM-ADJ", "adjectival modifier"),
    ("ARGM-ADV", "adverbial modifier"),
    ("ARGM-CAU", "cause or reason"),
    ("ARGM-COM", "comitative"),
    ("ARGM-DIR", "direction or source"),
    ("ARGM-DIS", "discourse connective"),
    ("ARGM-EXT", "amount or extent"),
    ("ARGM-GOL", "goal or destination"),
    ("ARGM-LOC", "location or position"),
    ("ARGM-LVB", "light verb"),
    ("ARGM-MNR", "instrument or manner"),
    ("ARGM-MOD", "modal auxiliary"),
    ("ARGM-NEG", "negation marker"),
    ("ARGM-PNC", "purpose, not cause"),
    ("ARGM-PRD", "secondary predication"),
    ("ARGM-PRP", "purpose or motivation"),
    ("ARGM-TMP", "time or duration"),
];
