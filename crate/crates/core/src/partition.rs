//! Publication set partitioning.
//!
//! Relative to an ordered pair (A, B), the publications of first field A
//! split into three disjoint sets:
//!
//! * Set 1 — co-authored with the second field B (specific collaboration);
//! * Set 2 — co-authored with some other field, but not B (generic
//!   collaboration);
//! * Set 3 — classified field set is exactly {A} (no cross-field
//!   collaboration, regardless of how many authors of A are on the byline).
//!
//! At field level the pair disappears: union12 holds every publication of A
//! with at least one author from any other field, set3 the rest.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Which set a publication lands in, relative to a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetLabel {
    Set1,
    Set2,
    Set3,
}

/// A pair-level or field-level scope.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Pair { first: String, second: String },
    Field { field: String },
}

impl Scope {
    pub fn first_field(&self) -> &str {
        match self {
            Scope::Pair { first, .. } => first,
            Scope::Field { field } => field,
        }
    }

    /// Display label: `A_B` for pairs, `A` for fields.
    pub fn label(&self) -> String {
        match self {
            Scope::Pair { first, second } => format!("{first}_{second}"),
            Scope::Field { field } => field.clone(),
        }
    }
}

/// Per-set publication counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCounts {
    pub set1: u64,
    pub set2: u64,
    pub set3: u64,
    pub union12: u64,
    pub total: u64,
}

impl SetCounts {
    pub fn add(&mut self, other: &SetCounts) {
        self.set1 += other.set1;
        self.set2 += other.set2;
        self.set3 += other.set3;
        self.union12 += other.union12;
        self.total += other.total;
    }
}

/// The partition of one scope's publications, as sorted indices into
/// `corpus.publications()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationSets {
    pub scope: Scope,
    pub set1: Vec<usize>,
    pub set2: Vec<usize>,
    pub set3: Vec<usize>,
    pub union12: Vec<usize>,
}

impl PublicationSets {
    pub fn counts(&self) -> SetCounts {
        SetCounts {
            set1: self.set1.len() as u64,
            set2: self.set2.len() as u64,
            set3: self.set3.len() as u64,
            union12: self.union12.len() as u64,
            total: (self.union12.len() + self.set3.len()) as u64,
        }
    }

    /// Publication ids of one set, sorted.
    pub fn ids<'c>(&self, corpus: &'c Corpus, label: SetLabel) -> Vec<&'c str> {
        let indices = match label {
            SetLabel::Set1 => &self.set1,
            SetLabel::Set2 => &self.set2,
            SetLabel::Set3 => &self.set3,
        };
        let mut ids: Vec<&str> = indices
            .iter()
            .map(|&i| corpus.publications()[i].id.as_str())
            .collect();
        ids.sort_unstable();
        ids
    }
}

/// Classify one publication's classified-author field set against a pair.
/// The first field must be present in the set.
pub fn classify_publication(
    field_set: &BTreeSet<String>,
    first: &str,
    second: &str,
) -> Result<SetLabel> {
    if !field_set.contains(first) {
        return Err(Error::NotInScope(first.to_string()));
    }
    Ok(if field_set.contains(second) {
        SetLabel::Set1
    } else if field_set.len() > 1 {
        SetLabel::Set2
    } else {
        SetLabel::Set3
    })
}

fn field_index(corpus: &Corpus, code: &str) -> Result<usize> {
    corpus
        .scheme()
        .index_of(code)
        .ok_or_else(|| Error::UnknownField(code.to_string()))
}

/// Partition the publications of `first` into Set 1/2/3 relative to the pair
/// (first, second).
pub fn partition_pair(corpus: &Corpus, first: &str, second: &str) -> Result<PublicationSets> {
    let first_idx = field_index(corpus, first)?;
    let second_idx = field_index(corpus, second)?;
    if first_idx == second_idx {
        return Err(Error::InvalidConfig(format!(
            "pair fields must differ, got ({first}, {second})"
        )));
    }
    let mut sets = PublicationSets {
        scope: Scope::Pair {
            first: first.to_string(),
            second: second.to_string(),
        },
        set1: Vec::new(),
        set2: Vec::new(),
        set3: Vec::new(),
        union12: Vec::new(),
    };
    for &pub_idx in &corpus.pubs_by_field()[first_idx] {
        let fields = corpus.publications()[pub_idx].field_idxs();
        if fields.binary_search(&second_idx).is_ok() {
            sets.set1.push(pub_idx);
            sets.union12.push(pub_idx);
        } else if fields.len() > 1 {
            sets.set2.push(pub_idx);
            sets.union12.push(pub_idx);
        } else {
            sets.set3.push(pub_idx);
        }
    }
    Ok(sets)
}

/// Field-level partition: union12 holds the publications of `field`
/// co-authored with at least one other field; set3 the single-field ones.
/// set1 and set2 are empty in this scope.
pub fn partition_field(corpus: &Corpus, field: &str) -> Result<PublicationSets> {
    let field_idx = field_index(corpus, field)?;
    let mut sets = PublicationSets {
        scope: Scope::Field {
            field: field.to_string(),
        },
        set1: Vec::new(),
        set2: Vec::new(),
        set3: Vec::new(),
        union12: Vec::new(),
    };
    for &pub_idx in &corpus.pubs_by_field()[field_idx] {
        if corpus.publications()[pub_idx].field_idxs().len() > 1 {
            sets.union12.push(pub_idx);
        } else {
            sets.set3.push(pub_idx);
        }
    }
    Ok(sets)
}

/// Deduplicated counts over several partitions: each publication is counted
/// once per column, however many input partitions it appears in. Inputs may
/// share one first field (row totals) or span all first fields (scheme-wide
/// totals).
pub fn dedup_totals<'a>(sets: impl IntoIterator<Item = &'a PublicationSets>) -> SetCounts {
    let mut set1 = BTreeSet::new();
    let mut set2 = BTreeSet::new();
    let mut set3 = BTreeSet::new();
    let mut union12 = BTreeSet::new();
    let mut all = BTreeSet::new();
    for sets in sets {
        set1.extend(sets.set1.iter().copied());
        set2.extend(sets.set2.iter().copied());
        set3.extend(sets.set3.iter().copied());
        union12.extend(sets.union12.iter().copied());
        all.extend(sets.union12.iter().copied());
        all.extend(sets.set3.iter().copied());
    }
    SetCounts {
        set1: set1.len() as u64,
        set2: set2.len() as u64,
        set3: set3.len() as u64,
        union12: union12.len() as u64,
        total: all.len() as u64,
    }
}

/// Column-wise sums over several partitions, double counting shared
/// publications.
pub fn summed_totals<'a>(sets: impl IntoIterator<Item = &'a PublicationSets>) -> SetCounts {
    let mut totals = SetCounts::default();
    for sets in sets {
        totals.add(&sets.counts());
    }
    totals
}
