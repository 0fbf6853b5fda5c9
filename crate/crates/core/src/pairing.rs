//! Field-level publication counts, co-publication counts, specific degrees of
//! interdisciplinarity, qualifying-pair identification, and the Simpson
//! diversity index.
//!
//! The specific degree of a field pair (A, B) is the share of A's
//! publications co-authored with at least one author of B. It is asymmetric:
//! degree(A,B) and degree(B,A) share the co-publication count but have
//! different denominators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// An ordered field pair with its collaboration intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProfile {
    pub first_field: String,
    pub second_field: String,
    /// Publications with at least one classified author in each field.
    pub co_count: u64,
    /// Publications with at least one classified author in the first field.
    pub first_count: u64,
    /// co_count / first_count, in [0, 1].
    pub degree: f64,
}

/// Number of distinct publications with at least one classified author in
/// each field, keyed by field code.
pub fn field_pub_counts(corpus: &Corpus) -> BTreeMap<String, u64> {
    corpus
        .scheme()
        .entries()
        .iter()
        .enumerate()
        .filter(|(idx, _)| !corpus.pubs_by_field()[*idx].is_empty())
        .map(|(idx, entry)| (entry.code.clone(), corpus.pubs_by_field()[idx].len() as u64))
        .collect()
}

/// Symmetric co-publication counts over unordered field pairs, keyed by the
/// lexicographically smaller code first. A publication with field set
/// {A, B, C} contributes once to each of (A,B), (A,C), (B,C).
pub fn co_pub_counts(corpus: &Corpus) -> BTreeMap<(String, String), u64> {
    co_counts_by_idx(corpus)
        .into_iter()
        .map(|((a, b), count)| {
            let ca = corpus.scheme().entry(a).code.clone();
            let cb = corpus.scheme().entry(b).code.clone();
            if ca <= cb {
                ((ca, cb), count)
            } else {
                ((cb, ca), count)
            }
        })
        .collect()
}

/// co_count / first_count. Errors when first_count is zero.
pub fn specific_degree(co_count: u64, first_count: u64) -> Result<f64> {
    if first_count == 0 {
        return Err(Error::UndefinedInput(
            "specific degree requires a positive first-field publication count".into(),
        ));
    }
    Ok(co_count as f64 / first_count as f64)
}

/// All ordered pairs with first_count >= min_first_count and degree strictly
/// above the threshold, sorted by (first_field, second_field).
pub fn identify_pairs(
    corpus: &Corpus,
    threshold: f64,
    min_first_count: u64,
) -> Result<Vec<PairProfile>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "threshold must be in (0, 1], got {threshold}"
        )));
    }
    let co = co_counts_by_idx(corpus);
    let mut pairs = Vec::new();
    for ((a, b), &count) in &co {
        for (first, second) in [(*a, *b), (*b, *a)] {
            let first_count = corpus.pubs_by_field()[first].len() as u64;
            if first_count < min_first_count {
                continue;
            }
            let degree = specific_degree(count, first_count)?;
            if degree > threshold {
                pairs.push(PairProfile {
                    first_field: corpus.scheme().entry(first).code.clone(),
                    second_field: corpus.scheme().entry(second).code.clone(),
                    co_count: count,
                    first_count,
                    degree,
                });
            }
        }
    }
    pairs.sort_by(|x, y| {
        (&x.first_field, &x.second_field).cmp(&(&y.first_field, &y.second_field))
    });
    Ok(pairs)
}

/// Profile an externally supplied pair list against the corpus, bypassing the
/// threshold filter. Pairs with an unknown field, identical fields, or a
/// first field without publications are skipped with a warning.
pub fn profile_pairs(
    corpus: &Corpus,
    pairs: &[(String, String)],
) -> (Vec<PairProfile>, Vec<String>) {
    let co = co_counts_by_idx(corpus);
    let mut profiles = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (first, second) in pairs {
        if first == second {
            warnings.push(format!("skipped pair ({first}, {second}): fields must differ"));
            continue;
        }
        let (fi, si) = match (
            corpus.scheme().index_of(first),
            corpus.scheme().index_of(second),
        ) {
            (Some(f), Some(s)) => (f, s),
            _ => {
                warnings.push(format!(
                    "skipped pair ({first}, {second}): unknown field code"
                ));
                continue;
            }
        };
        if !seen.insert((fi, si)) {
            warnings.push(format!("skipped duplicate pair ({first}, {second})"));
            continue;
        }
        let first_count = corpus.pubs_by_field()[fi].len() as u64;
        if first_count == 0 {
            warnings.push(format!(
                "skipped pair ({first}, {second}): first field has no publications"
            ));
            continue;
        }
        let key = (fi.min(si), fi.max(si));
        let co_count = co.get(&key).copied().unwrap_or(0);
        profiles.push(PairProfile {
            first_field: first.clone(),
            second_field: second.clone(),
            co_count,
            first_count,
            degree: co_count as f64 / first_count as f64,
        });
    }
    profiles.sort_by(|x, y| {
        (&x.first_field, &x.second_field).cmp(&(&y.first_field, &y.second_field))
    });
    (profiles, warnings)
}

fn co_counts_by_idx(corpus: &Corpus) -> BTreeMap<(usize, usize), u64> {
    let mut by_idx: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for publication in corpus.publications() {
        let fields = publication.field_idxs();
        for i in 0..fields.len() {
            for j in (i + 1)..fields.len() {
                *by_idx.entry((fields[i], fields[j])).or_insert(0) += 1;
            }
        }
    }
    by_idx
}

/// Simpson's index of diversity, 1 - sum(p_i^2) over category shares.
/// Result is in [0, 1); errors when all counts are zero.
pub fn simpson_index(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::UndefinedInput(
            "Simpson index requires a positive total count".into(),
        ));
    }
    let total = total as f64;
    let sum_sq: f64 = counts
        .iter()
        .map(|&x| {
            let p = x as f64 / total;
            p * p
        })
        .sum();
    Ok(1.0 - sum_sq)
}
