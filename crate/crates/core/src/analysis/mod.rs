//! Sense-frequency partitions, training-set down-sampling and per-partition
//! score tables.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedStructure, Corpus, TokenRange};
use crate::error::{Error, Result};
use crate::scorer::{percent, Counts, ItemKind, Scorer};

/// Occurrence counts per (lemma, sense). Lemmas are stored lowercased.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SenseCounts {
    counts: BTreeMap<(String, String), u64>,
}

impl SenseCounts {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = ((&'a str, &'a str), u64)>) -> Self {
        let mut out = SenseCounts::default();
        for ((lemma, sense), n) in pairs {
            if n > 0 {
                *out.counts.entry((lemma.to_lowercase(), sense.to_string())).or_default() += n;
            }
        }
        out
    }

    pub fn count(&self, lemma: &str, sense: &str) -> u64 {
        self.counts
            .get(&(lemma.to_lowercase(), sense.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn contains(&self, lemma: &str, sense: &str) -> bool {
        self.count(lemma, sense) > 0
    }

    /// Most frequent training sense of `lemma`; ties go to the smallest sense id.
    pub fn most_frequent(&self, lemma: &str) -> Option<&str> {
        let key = lemma.to_lowercase();
        let mut best: Option<(&str, u64)> = None;
        for ((_, sense), &n) in self
            .counts
            .range((key.clone(), String::new())..)
            .take_while(|((l, _), _)| *l == key)
        {
            if best.is_none_or(|(_, m)| n > m) {
                best = Some((sense, n));
            }
        }
        best.map(|(s, _)| s)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.counts.iter().map(|((l, s), n)| (l.as_str(), s.as_str(), *n))
    }
}

pub fn sense_counts(train: &Corpus) -> SenseCounts {
    SenseCounts::from_pairs(train.structures().iter().filter_map(|st| {
        let p = st.predicate();
        p.sense_label.as_deref().map(|s| ((p.lemma.as_str(), s), 1))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PartitionTag {
    Mfs,
    Lfs,
    Unseen,
}

impl PartitionTag {
    pub const ALL: [PartitionTag; 3] = [PartitionTag::Mfs, PartitionTag::Lfs, PartitionTag::Unseen];

    pub fn as_str(self) -> &'static str {
        match self {
            PartitionTag::Mfs => "MFS",
            PartitionTag::Lfs => "LFS",
            PartitionTag::Unseen => "UNSEEN",
        }
    }
}

impl fmt::Display for PartitionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// UNSEEN if the sense never occurs in training (or is missing), MFS if it
/// is the lemma's most frequent training sense, LFS otherwise.
pub fn tag_sense(lemma: &str, sense: Option<&str>, counts: &SenseCounts) -> PartitionTag {
    match sense {
        Some(s) if counts.contains(lemma, s) => {
            if counts.most_frequent(lemma) == Some(s) {
                PartitionTag::Mfs
            } else {
                PartitionTag::Lfs
            }
        }
        _ => PartitionTag::Unseen,
    }
}

pub fn tag_structure(st: &AnnotatedStructure, counts: &SenseCounts) -> PartitionTag {
    tag_sense(&st.predicate().lemma, st.predicate().sense_label.as_deref(), counts)
}

pub type StructureKey = (String, TokenRange);

/// Tags every structure of `eval` by its gold sense.
pub fn partition(eval: &Corpus, counts: &SenseCounts) -> BTreeMap<StructureKey, PartitionTag> {
    eval.structures()
        .iter()
        .map(|st| {
            (
                (st.sentence_ref().to_string(), st.predicate().range),
                tag_structure(st, counts),
            )
        })
        .collect()
}

/// Uniform sample of annotated sentences without replacement.
///
/// The sentences are shuffled once with a ChaCha8 generator seeded by
/// `seed` and the first `round(fraction * N)` are kept, so samples for the
/// same seed are nested. Unannotated sentences are not part of the sample.
/// Kept sentences retain their original order.
pub fn downsample(train: &Corpus, fraction: f64, seed: u64) -> Result<Corpus> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Contract(format!("fraction {fraction} outside (0, 1]")));
    }
    let annotated: Vec<usize> = train
        .sentences()
        .iter()
        .enumerate()
        .filter(|(_, s)| train.is_annotated(s.sentence_id()))
        .map(|(i, _)| i)
        .collect();
    let k = (fraction * annotated.len() as f64).round() as usize;
    let mut order = annotated;
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut keep = order[..k].to_vec();
    keep.sort_unstable();

    let sentences: Vec<_> = keep.iter().map(|&i| train.sentences()[i].clone()).collect();
    let ids: std::collections::BTreeSet<&str> = sentences.iter().map(|s| s.sentence_id()).collect();
    let structures = train
        .structures()
        .iter()
        .filter(|st| ids.contains(st.sentence_ref()))
        .cloned()
        .collect();
    Corpus::new(sentences, structures, format!("{} (sample {fraction}, seed {seed})", train.provenance()))
}

/// One cell of a partition table. `partition` is `None` for the ALL column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCell {
    pub partition: Option<PartitionTag>,
    pub kind: ItemKind,
    pub counts: Counts,
}

impl PartitionCell {
    /// Gold items in the cell.
    pub fn support(&self) -> u64 {
        self.counts.gold
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    pub cells: Vec<PartitionCell>,
}

fn tag_of(
    st: &AnnotatedStructure,
    gold_tags: &BTreeMap<StructureKey, PartitionTag>,
    counts: &SenseCounts,
) -> PartitionTag {
    gold_tags
        .get(&(st.sentence_ref().to_string(), st.predicate().range))
        .copied()
        // spurious predicted predicates are tagged by their own sense
        .unwrap_or_else(|| tag_structure(st, counts))
}

/// Runs `scorer` on the whole corpus and on each partition separately.
pub fn partitioned_scores(
    gold: &Corpus,
    pred: &Corpus,
    counts: &SenseCounts,
    scorer: &dyn Scorer,
) -> Result<PartitionTable> {
    let tags = partition(gold, counts);
    let mut cells = Vec::new();
    let all = scorer.score(gold, pred)?;
    for kind in [ItemKind::Sense, ItemKind::Argument] {
        cells.push(PartitionCell {
            partition: None,
            kind,
            counts: all.category(kind),
        });
    }
    for tag in PartitionTag::ALL {
        let g = gold.filter_structures(|st| tag_of(st, &tags, counts) == tag);
        let p = pred.filter_structures(|st| tag_of(st, &tags, counts) == tag);
        let report = scorer.score(&g, &p)?;
        for kind in [ItemKind::Sense, ItemKind::Argument] {
            cells.push(PartitionCell {
                partition: Some(tag),
                kind,
                counts: report.category(kind),
            });
        }
    }
    Ok(PartitionTable { cells })
}

impl PartitionTable {
    pub fn cell(&self, partition: Option<PartitionTag>, kind: ItemKind) -> &PartitionCell {
        self.cells
            .iter()
            .find(|c| c.partition == partition && c.kind == kind)
            .expect("table has every cell")
    }

    fn share(&self, cell: &PartitionCell) -> String {
        let total = self.cell(None, cell.kind).support();
        if total == 0 {
            "-".into()
        } else {
            format!("{:.1}", 100.0 * cell.support() as f64 / total as f64)
        }
    }

    /// One JSON object per line, one line per cell.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let row = serde_json::json!({
                "partition": c.partition.map_or("ALL", PartitionTag::as_str),
                "kind": c.kind.as_str(),
                "f1": percent(c.counts.f1()),
                "support": c.support(),
                "share": self.share(c),
                "correct": c.counts.correct,
                "predicted": c.counts.predicted,
                "gold": c.counts.gold,
            });
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for PartitionTable {
    /// Rows are item kinds, columns ALL / MFS / LFS / UNSEEN with F1 and support.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let columns: [Option<PartitionTag>; 4] = [
            None,
            Some(PartitionTag::Mfs),
            Some(PartitionTag::Lfs),
            Some(PartitionTag::Unseen),
        ];
        write!(f, "{:<6}", "")?;
        for col in columns {
            write!(f, " | {:<24}", col.map_or("ALL", PartitionTag::as_str))?;
        }
        writeln!(f)?;
        write!(f, "{:<6}", "")?;
        for _ in columns {
            write!(f, " | {:>6} {:<17}", "F1", "Support")?;
        }
        writeln!(f)?;
        for (kind, name) in [(ItemKind::Sense, "Pred."), (ItemKind::Argument, "Arg.")] {
            write!(f, "{name:<6}")?;
            for col in columns {
                let c = self.cell(col, kind);
                let support = match col {
                    None => c.support().to_string(),
                    Some(_) => format!("{} ({}%)", c.support(), self.share(c)),
                };
                write!(f, " | {:>6} {:<17}", percent(c.counts.f1()), support)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
