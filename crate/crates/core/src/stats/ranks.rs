//! Midrank assignment for pooled samples.

/// Ranks aligned with the input order, ties resolved as midranks, plus the
/// size of every tie group (singletons included).
pub(crate) struct Ranked {
    pub ranks: Vec<f64>,
    pub tie_sizes: Vec<u64>,
}

pub(crate) fn midranks(values: &[f64]) -> Ranked {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; n];
    let mut tie_sizes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end (0-based) share the midrank
        let midrank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = midrank;
        }
        tie_sizes.push((end - start) as u64);
        start = end;
    }
    Ranked { ranks, tie_sizes }
}
