use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Split {
    /// Specialist training.
    A,
    /// Combiner training.
    B,
    /// Holdout.
    C,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::A, Split::B, Split::C];
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::A => "A",
            Split::B => "B",
            Split::C => "C",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Split::A),
            "B" | "b" => Ok(Split::B),
            "C" | "c" => Ok(Split::C),
            other => Err(Error::InvalidParameter(format!("unknown split `{other}`"))),
        }
    }
}

/// Per-split image counts for corpus building.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub normals: usize,
    pub per_artifact: usize,
}

/// Assignment of sources to the three splits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    /// Optional overrides of the corpus builder's default counts.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<Split, SplitCounts>,
}

impl SplitPlan {
    pub fn new(a: &[&str], b: &[&str], c: &[&str]) -> SplitPlan {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        SplitPlan {
            a: own(a),
            b: own(b),
            c: own(c),
            counts: BTreeMap::new(),
        }
    }

    pub fn sources(&self, split: Split) -> &[String] {
        match split {
            Split::A => &self.a,
            Split::B => &self.b,
            Split::C => &self.c,
        }
    }

    pub fn split_of(&self, source: &str) -> Option<Split> {
        Split::ALL.into_iter().find(|s| self.sources(*s).iter().any(|x| x == source))
    }

    /// Every source may appear in at most one split, once.
    pub fn validate(&self) -> Result<()> {
        let mut seen: BTreeMap<&str, Split> = BTreeMap::new();
        for split in Split::ALL {
            for src in self.sources(split) {
                if let Some(prev) = seen.insert(src, split) {
                    return Err(Error::SplitViolation(if prev == split {
                        format!("source `{src}` listed twice in split {split}")
                    } else {
                        format!("source `{src}` assigned to both {prev} and {split}")
                    }));
                }
            }
        }
        Ok(())
    }

    /// Check that the observed (source, split) pairs are consistent with the plan
    /// and pairwise disjoint.
    pub fn check_assignment<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, Split)>) -> Result<()> {
        self.validate()?;
        let mut observed: BTreeMap<&str, BTreeSet<Split>> = BTreeMap::new();
        for (src, split) in pairs {
            observed.entry(src).or_default().insert(split);
        }
        for (src, splits) in observed {
            if splits.len() > 1 {
                let names: Vec<String> = splits.iter().map(|s| s.to_string()).collect();
                return Err(Error::SplitViolation(format!("source `{src}` appears in splits {}", names.join(", "))));
            }
            let split = *splits.iter().next().expect("non-empty");
            match self.split_of(src) {
                Some(p) if p == split => {}
                Some(p) => {
                    return Err(Error::SplitViolation(format!("source `{src}` planned for {p} but found in {split}")))
                }
                None => return Err(Error::SplitViolation(format!("source `{src}` is not in the plan"))),
            }
        }
        Ok(())
    }
}

/// Per-class seeded split. Each class keeps at least one item on each side, so
/// every class needs two or more items.
pub fn stratified_split(labels: &[bool], train_frac: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut rng = Rng::new(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [false, true] {
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < 2 {
            return Err(if idx.is_empty() {
                Error::SingleClass
            } else {
                Error::InvalidParameter("each class needs at least two items to split".into())
            });
        }
        let n_train = ((idx.len() as f64 * train_frac).round() as usize).clamp(1, idx.len() - 1);
        let perm = rng.permutation(idx.len());
        train.extend(perm[..n_train].iter().map(|&p| idx[p]));
        test.extend(perm[n_train..].iter().map(|&p| idx[p]));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_plan_is_rejected() {
        let plan = SplitPlan::new(&["g1", "g2"], &["g2"], &["g3"]);
        assert!(matches!(plan.validate(), Err(Error::SplitViolation(_))));
        assert!(SplitPlan::new(&["g1"], &["g2"], &["g3"]).validate().is_ok());
    }

    #[test]
    fn assignment_must_follow_plan() {
        let plan = SplitPlan::new(&["g1"], &["g2"], &["g3"]);
        assert!(plan.check_assignment([("g1", Split::A), ("g2", Split::B)]).is_ok());
        assert!(plan.check_assignment([("g1", Split::A), ("g1", Split::B)]).is_err());
        assert!(plan.check_assignment([("g2", Split::A)]).is_err());
        assert!(plan.check_assignment([("g9", Split::C)]).is_err());
    }

    #[test]
    fn plan_json_shape() {
        let js = r#"{"A":["a"],"B":["b"],"C":["c"],"counts":{"B":{"normals":5,"per_artifact":2}}}"#;
        let plan: SplitPlan = serde_json::from_str(js).unwrap();
        assert_eq!(plan.counts[&Split::B].per_artifact, 2);
        assert_eq!(serde_json::to_string(&plan).unwrap(), js);
    }

    #[test]
    fn stratified_halves() {
        let labels: Vec<bool> = (0..30).map(|i| i % 3 == 0).collect();
        let (train, test) = stratified_split(&labels, 0.5, 4).unwrap();
        assert_eq!(train.len() + test.len(), 30);
        assert_eq!(train.iter().filter(|&&i| labels[i]).count(), 5);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert!(all.iter().copied().eq(0..30));
        assert_eq!((train.clone(), test.clone()), stratified_split(&labels, 0.5, 4).unwrap());
        assert!(stratified_split(&[true, false, false], 0.5, 0).is_err());
    }
}
