use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{ArtifactKind, Error, Result};

/// One scored item; `label` and `predicted` are true for "corrupted".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub id: String,
    pub label: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ArtifactKind>,
    pub probability: f64,
    pub predicted: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| (self.tp + self.tn) as f64 / total as f64)
    }

    pub fn precision(&self) -> Option<f64> {
        let d = self.tp + self.fp;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRecall {
    pub total: usize,
    pub detected: usize,
    pub recall: f64,
}

/// Accuracy, precision and recall with corrupted as the positive class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub total: usize,
    pub accuracy: f64,
    /// Absent when nothing was predicted corrupted.
    pub precision: Option<f64>,
    /// Absent when the set holds no corrupted items.
    pub recall: Option<f64>,
    pub confusion: Confusion,
    /// Recall per artifact kind over the corrupted items.
    pub per_artifact: BTreeMap<ArtifactKind, ArtifactRecall>,
    pub records: Vec<ItemRecord>,
}

impl EvalReport {
    pub fn from_records(records: Vec<ItemRecord>) -> Result<EvalReport> {
        if records.is_empty() {
            return Err(Error::EmptyInput("evaluation set"));
        }
        let mut confusion = Confusion::default();
        let mut per: BTreeMap<ArtifactKind, (usize, usize)> = BTreeMap::new();
        for r in &records {
            match (r.label, r.predicted) {
                (true, true) => confusion.tp += 1,
                (false, true) => confusion.fp += 1,
                (false, false) => confusion.tn += 1,
                (true, false) => confusion.fn_ += 1,
            }
            if let (true, Some(kind)) = (r.label, r.kind) {
                let e = per.entry(kind).or_default();
                e.0 += 1;
                e.1 += r.predicted as usize;
            }
        }
        let per_artifact = per
            .into_iter()
            .map(|(k, (total, detected))| {
                let recall = detected as f64 / total as f64;
                (k, ArtifactRecall { total, detected, recall })
            })
            .collect();
        Ok(EvalReport {
            total: records.len(),
            accuracy: confusion.accuracy().unwrap_or(0.0),
            precision: confusion.precision(),
            recall: confusion.recall(),
            confusion,
            per_artifact,
            records,
        })
    }

    /// Plain-text summary: headline metrics, then recall per artifact.
    pub fn summary(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"));
        let c = &self.confusion;
        let mut out = format!(
            "items {}  accuracy {:.4}  precision {}  recall {}\nTP {}  FP {}  TN {}  FN {}\n",
            self.total,
            self.accuracy,
            fmt(self.precision),
            fmt(self.recall),
            c.tp,
            c.fp,
            c.tn,
            c.fn_
        );
        if !self.per_artifact.is_empty() {
            out.push_str(&format!("{:<22} {:>6} {:>8} {:>8}\n", "artifact", "items", "detected", "recall"));
            for (k, r) in &self.per_artifact {
                out.push_str(&format!("{:<22} {:>6} {:>8} {:>8.4}\n", k.name(), r.total, r.detected, r.recall));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(label: bool, predicted: bool, kind: Option<ArtifactKind>) -> ItemRecord {
        ItemRecord {
            id: String::new(),
            label,
            kind,
            probability: if predicted { 1.0 } else { 0.0 },
            predicted,
        }
    }

    proptest! {
        #[test]
        fn identities_hold(tp in 0usize..40, fp in 0usize..40, tn in 0usize..40, fn_ in 0usize..40) {
            prop_assume!(tp + fp + tn + fn_ > 0);
            let mut recs = Vec::new();
            recs.extend((0..tp).map(|_| record(true, true, Some(ArtifactKind::Shader))));
            recs.extend((0..fp).map(|_| record(false, true, None)));
            recs.extend((0..tn).map(|_| record(false, false, None)));
            recs.extend((0..fn_).map(|_| record(true, false, Some(ArtifactKind::Tearing))));
            let r = EvalReport::from_records(recs).unwrap();
            let total = (tp + fp + tn + fn_) as f64;
            prop_assert_eq!(r.confusion, Confusion { tp, fp, tn, fn_ });
            prop_assert_eq!(r.accuracy, (tp + tn) as f64 / total);
            prop_assert_eq!(r.precision, if tp + fp > 0 { Some(tp as f64 / (tp + fp) as f64) } else { None });
            prop_assert_eq!(r.recall, if tp + fn_ > 0 { Some(tp as f64 / (tp + fn_) as f64) } else { None });
            let detected: usize = r.per_artifact.values().map(|a| a.detected).sum();
            prop_assert_eq!(detected, tp);
        }
    }

    #[test]
    fn always_corrupted_on_balanced_set() {
        let recs: Vec<ItemRecord> = (0..10).map(|i| record(i % 2 == 0, true, (i % 2 == 0).then_some(ArtifactKind::Shapes))).collect();
        let r = EvalReport::from_records(recs).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert_eq!(r.recall, Some(1.0));
        assert_eq!(r.per_artifact[&ArtifactKind::Shapes].recall, 1.0);
    }

    #[test]
    fn all_correct_and_empty() {
        let recs = vec![record(true, true, Some(ArtifactKind::Shapes)), record(false, false, None)];
        assert_eq!(EvalReport::from_records(recs).unwrap().accuracy, 1.0);
        assert!(EvalReport::from_records(Vec::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let recs = vec![record(true, false, Some(ArtifactKind::MorseCode)), record(false, true, None)];
        let r = EvalReport::from_records(recs).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"fn\":1"));
        assert_eq!(serde_json::from_str::<EvalReport>(&js).unwrap(), r);
        assert!(r.summary().contains("morse_code"));
    }
}
