use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub correct: u64,
    pub predicted: u64,
    pub gold: u64,
}

impl Counts {
    /// 1 when nothing was predicted.
    pub fn precision(&self) -> Ratio<u64> {
        if self.predicted == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(self.correct, self.predicted)
        }
    }

    /// 1 when there is nothing to find.
    pub fn recall(&self) -> Ratio<u64> {
        if self.gold == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(self.correct, self.gold)
        }
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> Ratio<u64> {
        let p = self.precision();
        let r = self.recall();
        if p + r == Ratio::from_integer(0) {
            Ratio::from_integer(0)
        } else {
            Ratio::from_integer(2) * p * r / (p + r)
        }
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts {
            correct: self.correct + o.correct,
            predicted: self.predicted + o.predicted,
            gold: self.gold + o.gold,
        }
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemKind {
    Sense,
    Argument,
}

impl ItemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemKind::Sense => "sense",
            ItemKind::Argument => "argument",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub total: Counts,
    pub breakdown: BTreeMap<ItemKind, Counts>,
}

pub fn as_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Percentage with one decimal, e.g. `92.5`.
pub fn percent(r: Ratio<u64>) -> String {
    format!("{:.1}", as_f64(r) * 100.0)
}

impl ScoreReport {
    pub fn from_breakdown(sense: Counts, argument: Counts) -> Self {
        ScoreReport {
            total: sense + argument,
            breakdown: BTreeMap::from([(ItemKind::Sense, sense), (ItemKind::Argument, argument)]),
        }
    }

    pub fn precision(&self) -> Ratio<u64> {
        self.total.precision()
    }

    pub fn recall(&self) -> Ratio<u64> {
        self.total.recall()
    }

    pub fn f1(&self) -> Ratio<u64> {
        self.total.f1()
    }

    pub fn percent_f1(&self) -> String {
        percent(self.f1())
    }

    pub fn category(&self, kind: ItemKind) -> Counts {
        self.breakdown.get(&kind).copied().unwrap_or_default()
    }

    /// Machine-readable form with exact counts and rounded percentages.
    pub fn to_json(&self, scorer: &str) -> serde_json::Value {
        let row = |c: &Counts| {
            serde_json::json!({
                "correct": c.correct,
                "predicted": c.predicted,
                "gold": c.gold,
                "precision": percent(c.precision()),
                "recall": percent(c.recall()),
                "f1": percent(c.f1()),
            })
        };
        serde_json::json!({
            "scorer": scorer,
            "total": row(&self.total),
            "sense": row(&self.category(ItemKind::Sense)),
            "argument": row(&self.category(ItemKind::Argument)),
        })
    }
}

impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<9} {:>8} {:>8} {:>8} {:>6} {:>6} {:>6}",
            "", "correct", "pred", "gold", "P", "R", "F1"
        )?;
        let rows = [
            ("sense", self.category(ItemKind::Sense)),
            ("argument", self.category(ItemKind::Argument)),
            ("total", self.total),
        ];
        for (name, c) in rows {
            writeln!(
                f,
                "{:<9} {:>8} {:>8} {:>8} {:>6} {:>6} {:>6}",
                name,
                c.correct,
                c.predicted,
                c.gold,
                percent(c.precision()),
                percent(c.recall()),
                percent(c.f1())
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        let none = Counts::default();
        assert_eq!(none.f1(), Ratio::from_integer(1));
        let c = Counts { correct: 0, predicted: 2, gold: 3 };
        assert_eq!(c.f1(), Ratio::from_integer(0));
        let c = Counts { correct: 2, predicted: 4, gold: 2 };
        assert_eq!(c.f1(), Ratio::new(2, 3));
        assert_eq!(percent(Ratio::new(925, 1000)), "92.5");
    }
}
