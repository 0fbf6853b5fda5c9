//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them).

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use idrstat::analysis::{run_study, Contrast, Indicator, StudyConfig};
use idrstat::indicators::{self, compute_baselines};
use idrstat::pairing::specific_degree;
use idrstat::partition::{self, partition_field, partition_pair};
use idrstat::report::format_count_pct;
use idrstat::stats::{mann_whitney, mann_whitney_with_cap, shapiro_wilk, TestMethod};
use idrstat::synthgen::{self, SynthConfig};

#[test]
fn criterion_1_formula_anchors() {
    // degrees behind the two anchor rows
    assert!((specific_degree(38, 281).unwrap() - 38.0 / 281.0).abs() < 1e-15);
    assert!((specific_degree(159, 520).unwrap() - 159.0 / 520.0).abs() < 1e-15);

    // all eight percent-bearing cells of the two anchor rows, plus totals
    let anchor_rows: [(u64, [(u64, &str); 4]); 2] = [
        (
            281,
            [
                (38, "38 (13.5%)"),
                (60, "60 (21.4%)"),
                (183, "183 (65.1%)"),
                (98, "98 (34.9%)"),
            ],
        ),
        (
            520,
            [
                (159, "159 (30.6%)"),
                (116, "116 (22.3%)"),
                (245, "245 (47.1%)"),
                (275, "275 (52.9%)"),
            ],
        ),
    ];
    for (total, cells) in anchor_rows {
        for (count, expected) in cells {
            assert_eq!(format_count_pct(count, total).unwrap(), expected);
        }
        assert_eq!(
            format_count_pct(total, total).unwrap(),
            format!("{total} (100%)")
        );
    }
    println!("ACCEPTANCE 1 (formula anchors): PASS");
}

/// Small corpora with varied shape, derived from the replicate index.
/// Expected size tops out near 100 publications, safely under 200.
fn small_corpus_config(seed: u64) -> SynthConfig {
    let mut pair_collab = BTreeMap::new();
    let fields_per_area = 2 + ((seed / 2) % 2) as u32; // 2 or 3
    pair_collab.insert(
        (synthgen::field_code(0, 0), synthgen::field_code(0, 1)),
        0.1 + (seed % 7) as f64 * 0.05,
    );
    if fields_per_area > 2 {
        pair_collab.insert(
            (synthgen::field_code(0, 2), synthgen::field_code(0, 0)),
            0.15,
        );
    }
    SynthConfig {
        areas: 1 + (seed % 2) as u32,
        fields_per_area,
        professors_per_field: 3 + ((seed / 4) % 2) as u32,
        pubs_per_professor: 2.0 + ((seed / 8) % 3) as f64,
        within_field_team_prob: 0.4,
        generic_collab_prob: 0.15,
        pair_collab,
        journals_per_category: 2,
        years: (2004, 2006),
        seed,
        ..SynthConfig::default()
    }
}

#[test]
fn criterion_2_partition_correctness() {
    let start = Instant::now();
    let mut publications_checked = 0u64;
    for replicate in 0..1000u64 {
        let corpus = synthgen::generate(&small_corpus_config(replicate)).unwrap();
        assert!(
            corpus.publications().len() <= 200,
            "replicate {replicate} produced {} publications",
            corpus.publications().len()
        );
        publications_checked += corpus.publications().len() as u64;

        let codes: Vec<String> = corpus
            .scheme()
            .entries()
            .iter()
            .map(|e| e.code.clone())
            .collect();
        let field_sets: Vec<BTreeSet<String>> = (0..corpus.publications().len())
            .map(|idx| corpus.field_codes(idx).map(str::to_string).collect())
            .collect();

        for first in &codes {
            let in_scope: Vec<usize> = (0..corpus.publications().len())
                .filter(|&idx| field_sets[idx].contains(first))
                .collect();

            let mut pair_union: BTreeSet<usize> = BTreeSet::new();
            for second in &codes {
                if first == second {
                    continue;
                }
                let sets = partition_pair(&corpus, first, second).unwrap();

                // brute-force classification, written out directly
                let mut brute1 = Vec::new();
                let mut brute2 = Vec::new();
                let mut brute3 = Vec::new();
                for &idx in &in_scope {
                    if field_sets[idx].contains(second) {
                        brute1.push(idx);
                    } else if field_sets[idx].len() > 1 {
                        brute2.push(idx);
                    } else {
                        brute3.push(idx);
                    }
                }
                assert_eq!(sets.set1, brute1, "{first}->{second} set1");
                assert_eq!(sets.set2, brute2, "{first}->{second} set2");
                assert_eq!(sets.set3, brute3, "{first}->{second} set3");

                // pairwise disjoint and complete
                let mut all: Vec<usize> = sets
                    .set1
                    .iter()
                    .chain(&sets.set2)
                    .chain(&sets.set3)
                    .copied()
                    .collect();
                all.sort_unstable();
                assert_eq!(all, in_scope, "{first}->{second} not a partition");

                pair_union.extend(sets.set1.iter().copied());
                pair_union.extend(sets.set2.iter().copied());
            }

            // field-level union12 equals the union over all pair-level
            // specific+generic sets
            if codes.len() > 1 {
                let field_sets_a = partition_field(&corpus, first).unwrap();
                let expected: BTreeSet<usize> =
                    field_sets_a.union12.iter().copied().collect();
                assert_eq!(pair_union, expected, "{first} union12 mismatch");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "took {elapsed:?}, budget is 30 s"
    );
    println!(
        "ACCEPTANCE 2 (partition correctness): PASS \
         (1000 corpora, {publications_checked} publications, {elapsed:.2?})"
    );
}

#[test]
fn criterion_3_normalization() {
    let start = Instant::now();
    let mut strata_checked = 0u64;
    for replicate in 0..100u64 {
        let corpus = synthgen::generate(&SynthConfig {
            seed: 1000 + replicate,
            professors_per_field: 8,
            pubs_per_professor: 6.0,
            multi_category_prob: 0.3,
            ..SynthConfig::default()
        })
        .unwrap();
        let baselines = compute_baselines(&corpus);

        for ((year, category), baseline) in &baselines.citation {
            let ratios: Vec<f64> = corpus
                .publications()
                .iter()
                .filter(|p| {
                    p.citations > 0 && p.year == *year && p.categories.iter().any(|c| c == category)
                })
                .map(|p| p.citations as f64 / baseline)
                .collect();
            assert!(!ratios.is_empty(), "defined stratum without cited pubs");
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            assert!(
                (mean - 1.0).abs() < 1e-9,
                "citation stratum ({year}, {category}): mean {mean}"
            );
            strata_checked += 1;
        }

        for ((year, category), baseline) in &baselines.impact {
            let ratios: Vec<f64> = corpus
                .journals()
                .values()
                .filter_map(|journal| journal.years.get(year))
                .filter(|record| record.categories.iter().any(|c| c == category))
                .filter_map(|record| record.impact_factor)
                .map(|impact| impact / baseline)
                .collect();
            assert!(!ratios.is_empty());
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            assert!(
                (mean - 1.0).abs() < 1e-9,
                "impact stratum ({year}, {category}): mean {mean}"
            );
            strata_checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, budget is 30 s");
    println!(
        "ACCEPTANCE 3 (normalization): PASS (100 corpora, {strata_checked} strata, {elapsed:.2?})"
    );
}

/// Independent oracle: midranks by counting, exact two-sided p by recursive
/// enumeration of every label assignment.
mod oracle {
    pub fn midranks(pooled: &[f64]) -> Vec<f64> {
        pooled
            .iter()
            .map(|&x| {
                let less = pooled.iter().filter(|&&y| y < x).count() as f64;
                let equal = pooled.iter().filter(|&&y| y == x).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    }

    /// Counts subsets of size k by explicit recursion; returns (matching,
    /// total) over all assignments, where matching means the doubled U is at
    /// least as far from its null mean as observed.
    fn enumerate(
        ranks2: &[i64],
        index: usize,
        left: usize,
        sum: i64,
        offset: i64,
        d_obs: i64,
        counts: &mut (u64, u64),
    ) {
        if left == 0 {
            counts.1 += 1;
            if (sum - offset).abs() >= d_obs {
                counts.0 += 1;
            }
            return;
        }
        if ranks2.len() - index < left {
            return;
        }
        enumerate(ranks2, index + 1, left - 1, sum + ranks2[index], offset, d_obs, counts);
        enumerate(ranks2, index + 1, left, sum, offset, d_obs, counts);
    }

    pub fn exact_two_sided_p(s1: &[f64], s2: &[f64]) -> f64 {
        let n1 = s1.len();
        let n2 = s2.len();
        let pooled: Vec<f64> = s1.iter().chain(s2).copied().collect();
        let ranks2: Vec<i64> = midranks(&pooled)
            .iter()
            .map(|r| (2.0 * r).round() as i64)
            .collect();
        let r1_2: i64 = ranks2[..n1].iter().sum();
        let u2 = r1_2 - (n1 * (n1 + 1)) as i64;
        let d_obs = (u2 - (n1 * n2) as i64).abs();
        // enumerate assignments of the first-sample labels
        let offset = (n1 * (n1 + 1)) as i64 + (n1 * n2) as i64;
        let mut counts = (0u64, 0u64);
        enumerate(&ranks2, 0, n1, 0, offset, d_obs, &mut counts);
        counts.0 as f64 / counts.1 as f64
    }
}

#[test]
fn criterion_4_mann_whitney_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut max_gap: f64 = 0.0;
    for case in 0..200 {
        let n1 = rng.random_range(1..=8);
        let n2 = rng.random_range(1..=8);
        // small integer grid guarantees ties
        let sample = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
            (0..n).map(|_| rng.random_range(0..6) as f64).collect()
        };
        let s1 = sample(&mut rng, n1);
        let s2 = sample(&mut rng, n2);

        let exact = mann_whitney(&s1, &s2, 0.05).unwrap();
        assert_eq!(exact.method, TestMethod::Exact, "case {case}");
        let oracle_p = oracle::exact_two_sided_p(&s1, &s2);
        assert!(
            (exact.p_value - oracle_p).abs() <= 1e-12,
            "case {case}: impl {} vs oracle {oracle_p} on {s1:?} vs {s2:?}",
            exact.p_value
        );

        let approx = mann_whitney_with_cap(&s1, &s2, 0.05, 0).unwrap();
        assert_eq!(approx.method, TestMethod::NormalApprox);
        let gap = (approx.p_value - oracle_p).abs();
        max_gap = max_gap.max(gap);
        assert!(
            gap <= 0.05,
            "case {case}: approx {} vs exact {oracle_p} on {s1:?} vs {s2:?}",
            approx.p_value
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget is 60 s");
    println!(
        "ACCEPTANCE 4 (Mann-Whitney exactness): PASS \
         (200 cases, max approx gap {max_gap:.4}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_5_shapiro_wilk_fidelity() {
    let cases: Vec<serde_json::Value> =
        serde_json::from_str(include_str!("fixtures/shapiro_oracle.json")).unwrap();
    assert_eq!(cases.len(), 3);
    let mut sizes = Vec::new();
    for case in &cases {
        let sample: Vec<f64> = case["sample"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        sizes.push(sample.len());
        let test = shapiro_wilk(&sample, 0).unwrap();
        let expected_w = case["w"].as_f64().unwrap();
        let expected_p = case["p"].as_f64().unwrap();
        assert!(
            (test.w - expected_w).abs() < 1e-3,
            "{}: W {} vs oracle {expected_w}",
            case["name"],
            test.w
        );
        assert!(
            (test.p_value - expected_p).abs() < 1e-2,
            "{}: p {} vs oracle {expected_p}",
            case["name"],
            test.p_value
        );
    }
    sizes.sort_unstable();
    assert_eq!(sizes, vec![10, 50, 500]);
    println!("ACCEPTANCE 5 (Shapiro-Wilk fidelity): PASS (n in {{10, 50, 500}})");
}

fn calibration_config(seed: u64, planted_shift: f64) -> SynthConfig {
    let mut pair_collab = BTreeMap::new();
    pair_collab.insert(
        (synthgen::field_code(0, 0), synthgen::field_code(0, 1)),
        0.25,
    );
    pair_collab.insert(
        (synthgen::field_code(1, 0), synthgen::field_code(1, 1)),
        0.2,
    );
    SynthConfig {
        areas: 2,
        fields_per_area: 2,
        professors_per_field: 20,
        pubs_per_professor: 12.0,
        within_field_team_prob: 0.4,
        generic_collab_prob: 0.1,
        pair_collab,
        planted_shift,
        designated_pairs: if planted_shift != 1.0 {
            vec![(synthgen::field_code(0, 0), synthgen::field_code(0, 1))]
        } else {
            Vec::new()
        },
        seed,
        ..SynthConfig::default()
    }
}

#[test]
fn criterion_6_null_calibration() {
    let start = Instant::now();
    let config = StudyConfig {
        min_first_count: 50,
        min_set_size: 10,
        ..StudyConfig::default()
    };
    let mut comparisons = 0u64;
    let mut rejections = 0u64;
    for replicate in 0..200u64 {
        let corpus =
            synthgen::generate(&calibration_config(50_000 + replicate, 1.0)).unwrap();
        let result = run_study(&corpus, &config).unwrap();
        comparisons += result.comparisons.len() as u64;
        rejections += result.comparisons.iter().filter(|c| c.significant).count() as u64;
    }
    let rate = rejections as f64 / comparisons as f64;
    let elapsed = start.elapsed();
    assert!(
        (0.03..=0.07).contains(&rate),
        "rejection rate {rate:.4} over {comparisons} comparisons"
    );
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget is 5 min");
    println!(
        "ACCEPTANCE 6 (null calibration): PASS \
         (rate {rate:.4} over {comparisons} comparisons, {elapsed:.2?})"
    );
}

#[test]
fn criterion_7_power() {
    let start = Instant::now();
    let first = synthgen::field_code(0, 0);
    let second = synthgen::field_code(0, 1);
    let study_config = StudyConfig {
        pair_override: Some(vec![(first.clone(), second.clone())]),
        min_set_size: 10,
        ..StudyConfig::default()
    };
    let mut detected = 0u32;
    let mut min_n = usize::MAX;
    for replicate in 0..100u64 {
        let mut pair_collab = BTreeMap::new();
        pair_collab.insert((first.clone(), second.clone()), 0.45);
        let corpus = synthgen::generate(&SynthConfig {
            areas: 1,
            fields_per_area: 2,
            professors_per_field: 40,
            pubs_per_professor: 30.0,
            within_field_team_prob: 0.4,
            generic_collab_prob: 0.0,
            pair_collab,
            planted_shift: 1.5,
            designated_pairs: vec![(first.clone(), second.clone())],
            seed: 90_000 + replicate,
            ..SynthConfig::default()
        })
        .unwrap();
        let result = run_study(&corpus, &study_config).unwrap();
        let comparison = result
            .comparisons
            .iter()
            .find(|c| {
                c.contrast == Contrast::Set1VsSet3
                    && c.indicator == Indicator::Aii
                    && c.scope.first_field() == first
            })
            .expect("set1-vs-set3 AII comparison present");
        min_n = min_n.min(comparison.n1).min(comparison.n2);
        if comparison.significant && comparison.delta_median > 0.0 {
            detected += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        min_n >= 500,
        "sets too small for the power setting: min n = {min_n}"
    );
    assert!(detected >= 90, "detected in only {detected}/100 replicates");
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget is 5 min");
    println!(
        "ACCEPTANCE 7 (power): PASS ({detected}/100 replicates, min set size {min_n}, {elapsed:.2?})"
    );
}

/// Baselines and indicator scores agree with a direct per-stratum recount on
/// a corpus with multi-category journals (supports criterion 3's oracle).
#[test]
fn baselines_match_independent_recount() {
    let corpus = synthgen::generate(&SynthConfig {
        multi_category_prob: 0.5,
        seed: 77,
        ..SynthConfig::default()
    })
    .unwrap();
    let baselines = compute_baselines(&corpus);
    let mut recount: BTreeMap<(i32, String), (u64, u64)> = BTreeMap::new();
    for publication in corpus.publications() {
        if publication.citations == 0 {
            continue;
        }
        for category in &publication.categories {
            let entry = recount
                .entry((publication.year, category.clone()))
                .or_insert((0, 0));
            entry.0 += publication.citations;
            entry.1 += 1;
        }
    }
    assert_eq!(recount.len(), baselines.citation.len());
    for (key, (sum, count)) in recount {
        let expected = sum as f64 / count as f64;
        assert!((baselines.citation[&key] - expected).abs() < 1e-12);
    }
    let scores = indicators::score_corpus(&corpus, &baselines);
    assert_eq!(scores.len(), corpus.publications().len());
}

/// Scheme-wide dedup identity: union12 + set3 partitions the analyzed
/// universe (supports criterion 2's dedup semantics).
#[test]
fn dedup_totals_partition_identity() {
    let corpus = synthgen::generate(&SynthConfig {
        seed: 11,
        ..SynthConfig::default()
    })
    .unwrap();
    let pairs = idrstat::pairing::identify_pairs(&corpus, 0.05, 10).unwrap();
    let sets: Vec<_> = pairs
        .iter()
        .map(|p| partition_pair(&corpus, &p.first_field, &p.second_field).unwrap())
        .collect();
    let dedup = partition::dedup_totals(sets.iter());
    assert_eq!(dedup.total, dedup.union12 + dedup.set3);
}
