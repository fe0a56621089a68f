use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CorpusError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Train/valid/test proportions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios(pub [f64; 3]);

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios([0.8, 0.1, 0.1])
    }
}

impl SplitRatios {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let sum: f64 = self.0.iter().sum();
        if self.0.iter().any(|r| !r.is_finite() || *r < 0.0) || (sum - 1.0).abs() > 1e-6 {
            return Err(CorpusError::Ratios(self.0.to_vec()));
        }
        Ok(())
    }

    /// Largest-remainder allocation of `n` items.
    fn counts(&self, n: usize) -> [usize; 3] {
        let exact: Vec<f64> = self.0.iter().map(|r| r * n as f64).collect();
        let mut counts = [0usize; 3];
        for (c, e) in counts.iter_mut().zip(&exact) {
            *c = e.floor() as usize;
        }
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let assigned: usize = counts.iter().sum();
        for &i in order.iter().cycle().take(n.saturating_sub(assigned)) {
            counts[i] += 1;
        }
        counts
    }
}

fn split_key(seed: u64, doc_id: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(doc_id.as_bytes());
    h.finalize().into()
}

/// Assigns each document id to a split.
///
/// Ids are ordered by a seeded SHA-256 of the id and cut at the
/// largest-remainder counts, so the result depends only on the id set, the
/// ratios and the seed.
pub fn split_doc_ids<S: AsRef<str>>(
    ids: &[S],
    ratios: SplitRatios,
    seed: u64,
) -> Result<BTreeMap<String, Split>, CorpusError> {
    if ids.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    ratios.validate()?;
    let mut keyed: Vec<([u8; 32], &str)> = ids
        .iter()
        .map(|id| (split_key(seed, id.as_ref()), id.as_ref()))
        .collect();
    keyed.sort();
    let [train, valid, _] = ratios.counts(ids.len());
    Ok(keyed
        .into_iter()
        .enumerate()
        .map(|(i, (_, id))| {
            let split = if i < train {
                Split::Train
            } else if i < train + valid {
                Split::Valid
            } else {
                Split::Test
            };
            (id.to_string(), split)
        })
        .collect())
}

/// Partitions items by the split of their document.
pub fn split_corpus<T>(
    items: Vec<T>,
    doc_id: impl Fn(&T) -> &str,
    ratios: SplitRatios,
    seed: u64,
) -> Result<BTreeMap<Split, Vec<T>>, CorpusError> {
    let ids: Vec<String> = items.iter().map(|t| doc_id(t).to_string()).collect();
    let assignment = split_doc_ids(&ids, ratios, seed)?;
    let mut out: BTreeMap<Split, Vec<T>> = Split::ALL.iter().map(|&s| (s, Vec::new())).collect();
    for item in items {
        let split = assignment[doc_id(&item)];
        out.get_mut(&split).expect("all splits present").push(item);
    }
    Ok(out)
}
