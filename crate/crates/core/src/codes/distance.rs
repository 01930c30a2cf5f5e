//! Minimum-weight search over a code given by its Howell form.
//!
//! Every codeword is `Σ c_p r_p` for a unique coefficient vector with
//! `0 <= c_p < m/d_p`. After the coefficients of rows `0..=i` are chosen, the
//! columns before the next pivot are final, which is what the pruned search
//! exploits.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::howell::HowellRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Lee,
    Hamming,
}

impl Metric {
    pub fn table(self, m: u64) -> Vec<u32> {
        (0..m)
            .map(|v| match self {
                Metric::Lee => v.min(m - v) as u32,
                Metric::Hamming => u32::from(v != 0),
            })
            .collect()
    }
}

impl std::str::FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lee" => Ok(Metric::Lee),
            "hamming" => Ok(Metric::Hamming),
            _ => Err(format!("unknown metric {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeDistance {
    Exact {
        distance: u64,
        witness: Vec<u64>,
    },
    /// The pruned search ran out of nodes; `lower <= d <= upper`.
    Interval {
        lower: u64,
        upper: u64,
        witness: Vec<u64>,
    },
}

impl CodeDistance {
    pub fn exact(&self) -> Option<u64> {
        match self {
            CodeDistance::Exact { distance, .. } => Some(*distance),
            CodeDistance::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u64, u64) {
        match self {
            CodeDistance::Exact { distance, .. } => (*distance, *distance),
            CodeDistance::Interval { lower, upper, .. } => (*lower, *upper),
        }
    }

    pub fn witness(&self) -> &[u64] {
        match self {
            CodeDistance::Exact { witness, .. } | CodeDistance::Interval { witness, .. } => witness,
        }
    }
}

fn weight(table: &[u32], x: &[u64]) -> u64 {
    x.iter().map(|&v| table[v as usize] as u64).sum()
}

fn add_row(m: u64, acc: &mut [u64], row: &[u64], from: usize) {
    for j in from..acc.len() {
        let s = acc[j] + row[j];
        acc[j] = if s >= m { s - m } else { s };
    }
}

fn orders(m: u64, rows: &[HowellRow]) -> Vec<u64> {
    rows.iter().map(|r| m / r.entries[r.pivot]).collect()
}

/// Minimum weight of a nonzero word, visiting every codeword.
pub(crate) fn enumerate_min(
    m: u64,
    n: usize,
    rows: &[HowellRow],
    metric: Metric,
) -> Option<(u64, Vec<u64>)> {
    if rows.is_empty() {
        return None;
    }
    let table = metric.table(m);
    let ord = orders(m, rows);

    fn rec(
        m: u64,
        rows: &[HowellRow],
        ord: &[u64],
        table: &[u32],
        depth: usize,
        word: &mut Vec<Vec<u64>>,
        best: &mut Option<(u64, Vec<u64>)>,
    ) {
        if depth == rows.len() {
            let w = &word[depth];
            let wt = weight(table, w);
            if wt > 0 && best.as_ref().is_none_or(|b| wt < b.0) {
                *best = Some((wt, w.clone()));
            }
            return;
        }
        let (head, tail) = word.split_at_mut(depth + 1);
        tail[0].copy_from_slice(&head[depth]);
        for c in 0..ord[depth] {
            if c > 0 {
                add_row(
                    m,
                    &mut word[depth + 1],
                    &rows[depth].entries,
                    rows[depth].pivot,
                );
            }
            rec(m, rows, ord, table, depth + 1, word, best);
        }
    }

    // first row's coefficient splits the work
    let results: Vec<Option<(u64, Vec<u64>)>> = (0..ord[0])
        .into_par_iter()
        .map(|c0| {
            let mut word = vec![vec![0u64; n]; rows.len() + 1];
            for j in 0..n {
                word[1][j] = c0 * rows[0].entries[j] % m;
            }
            let mut best = None;
            rec(m, rows, &ord, &table, 1, &mut word, &mut best);
            best
        })
        .collect();
    let mut best: Option<(u64, Vec<u64>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    best
}

enum Outcome {
    Found(u64, Vec<u64>),
    None,
    OutOfNodes,
}

struct Pruned<'a> {
    m: u64,
    n: usize,
    rows: &'a [HowellRow],
    ord: Vec<u64>,
    table: Vec<u32>,
    nodes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
    global: AtomicU64,
}

struct Branch {
    word: Vec<Vec<u64>>,
    limit: u64,
    best: Option<(u64, Vec<u64>)>,
    local: u64,
}

impl Pruned<'_> {
    /// First column not yet final after choosing rows `0..depth`.
    fn decided_until(&self, depth: usize) -> usize {
        self.rows.get(depth).map_or(self.n, |r| r.pivot)
    }

    fn limit(&self, br: &Branch) -> u64 {
        br.limit.min(self.global.load(Ordering::Relaxed))
    }

    /// `used` is the weight of columns `0..decided_until(depth)`.
    fn dfs(&self, br: &mut Branch, depth: usize, used: u64) -> bool {
        br.local += 1;
        if br.local == 4096 {
            br.local = 0;
            if self.nodes.fetch_add(4096, Ordering::Relaxed) + 4096 > self.budget {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        if depth == self.rows.len() {
            if used > 0 && used <= self.limit(br) {
                br.limit = used - 1;
                self.global.fetch_min(used, Ordering::Relaxed);
                br.best = Some((used, br.word[depth].clone()));
            }
            return true;
        }
        let row = &self.rows[depth];
        let (lo, hi) = (row.pivot, self.decided_until(depth + 1));
        let (head, tail) = br.word.split_at_mut(depth + 1);
        tail[0].copy_from_slice(&head[depth]);
        for c in 0..self.ord[depth] {
            if c > 0 {
                add_row(self.m, &mut br.word[depth + 1], &row.entries, lo);
            }
            let w = used + weight(&self.table, &br.word[depth + 1][lo..hi]);
            if w > self.limit(br) {
                continue;
            }
            if !self.dfs(br, depth + 1, w) {
                return false;
            }
        }
        true
    }
}

fn pruned_search(
    m: u64,
    n: usize,
    rows: &[HowellRow],
    metric: Metric,
    limit: u64,
    budget: u64,
) -> Outcome {
    let s = Pruned {
        m,
        n,
        rows,
        ord: orders(m, rows),
        table: metric.table(m),
        nodes: AtomicU64::new(0),
        budget,
        stop: AtomicBool::new(false),
        global: AtomicU64::new(limit),
    };
    let first = &rows[0];
    let hi = s.decided_until(1);
    let results: Vec<Option<(u64, Vec<u64>)>> = (0..s.ord[0])
        .into_par_iter()
        .map(|c0| {
            let mut word = vec![vec![0u64; n]; rows.len() + 1];
            for j in first.pivot..n {
                word[1][j] = c0 * first.entries[j] % m;
            }
            let mut br = Branch {
                word,
                limit,
                best: None,
                local: 0,
            };
            let w = weight(&s.table, &br.word[1][..hi]);
            if w <= limit {
                s.dfs(&mut br, 1, w);
            }
            br.best
        })
        .collect();
    if s.stop.load(Ordering::Relaxed) {
        return Outcome::OutOfNodes;
    }
    let mut best: Option<(u64, Vec<u64>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    match best {
        Some((w, x)) => Outcome::Found(w, x),
        None => Outcome::None,
    }
}

/// Pruned search seeded with the lightest Howell row as upper bound; falls
/// back to a certified interval when the node budget runs out.
pub(crate) fn pruned_min(
    m: u64,
    n: usize,
    rows: &[HowellRow],
    metric: Metric,
    budget: u64,
) -> Option<CodeDistance> {
    let table = metric.table(m);
    let (upper, witness) = rows
        .iter()
        .map(|r| (weight(&table, &r.entries), r.entries.clone()))
        .min_by_key(|(w, _)| *w)?;
    if upper <= 1 {
        return Some(CodeDistance::Exact {
            distance: upper,
            witness,
        });
    }
    let exact = |d, w| {
        Some(CodeDistance::Exact {
            distance: d,
            witness: w,
        })
    };
    match pruned_search(m, n, rows, metric, upper - 1, budget) {
        Outcome::Found(d, w) => exact(d, w),
        Outcome::None => exact(upper, witness),
        Outcome::OutOfNodes => {
            let mut lower = 1;
            while lower < upper {
                match pruned_search(m, n, rows, metric, lower, budget) {
                    Outcome::None => lower += 1,
                    Outcome::Found(d, w) => return exact(d, w),
                    Outcome::OutOfNodes => break,
                }
            }
            if lower == upper {
                return exact(upper, witness);
            }
            Some(CodeDistance::Interval {
                lower,
                upper,
                witness,
            })
        }
    }
}
