//! Minimum Manhattan weight of a nonzero lattice vector.
//!
//! Depth-first over the canonical coordinates: once `x_1..x_{k-1}` are fixed
//! the basis coefficients `u_1..u_{k-1}` are determined, and `x_k` must be
//! congruent to `Σ_{i<k} u_i g_{ik}` modulo the pivot `d_k`. Candidates for
//! `x_k` are tried by increasing `|x_k|` within the remaining weight budget.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::Lattice;
use crate::intmat::manhattan;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceResult {
    Exact {
        distance: u64,
        witness: Vec<i64>,
    },
    /// The search ran out of nodes; `lower <= d <= upper`.
    Interval {
        lower: u64,
        upper: u64,
        witness: Vec<i64>,
    },
}

impl DistanceResult {
    pub fn exact(&self) -> Option<u64> {
        match self {
            DistanceResult::Exact { distance, .. } => Some(*distance),
            DistanceResult::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u64, u64) {
        match self {
            DistanceResult::Exact { distance, .. } => (*distance, *distance),
            DistanceResult::Interval { lower, upper, .. } => (*lower, *upper),
        }
    }

    pub fn witness(&self) -> &[i64] {
        match self {
            DistanceResult::Exact { witness, .. } | DistanceResult::Interval { witness, .. } => {
                witness
            }
        }
    }
}

enum Outcome {
    Found(u64, Vec<i64>),
    None,
    OutOfNodes,
}

struct Search<'a> {
    rows: &'a [Vec<i64>],
    diag: Vec<i64>,
    nodes: &'a AtomicU64,
    node_budget: u64,
    stop: &'a AtomicBool,
    /// Global best weight found so far, shared between branches.
    global: &'a AtomicU64,
}

struct Branch {
    x: Vec<i64>,
    acc: Vec<i128>,
    limit: u64,
    best: Option<(u64, Vec<i64>)>,
    local_nodes: u64,
}

impl Search<'_> {
    fn charge(&self, br: &mut Branch) -> bool {
        br.local_nodes += 1;
        if br.local_nodes == 4096 {
            br.local_nodes = 0;
            let total = self.nodes.fetch_add(4096, Ordering::Relaxed) + 4096;
            if total > self.node_budget {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn limit(&self, br: &Branch) -> u64 {
        br.limit.min(self.global.load(Ordering::Relaxed))
    }

    fn dfs(&self, br: &mut Branch, k: usize, used: u64, nonzero: bool) -> bool {
        if !self.charge(br) {
            return false;
        }
        let n = self.diag.len();
        if k == n {
            if nonzero && used <= self.limit(br) {
                br.limit = used.saturating_sub(1);
                self.global.fetch_min(used, Ordering::Relaxed);
                br.best = Some((used, br.x.clone()));
            }
            return true;
        }
        let limit = self.limit(br);
        if used > limit {
            return true;
        }
        let d = self.diag[k] as i128;
        let target = br.acc[k].rem_euclid(d);
        // the two residues closest to zero, then step outward by d
        let mut pos = target;
        let mut neg = target - d;
        loop {
            let limit = self.limit(br);
            if used > limit {
                break;
            }
            let room = (limit - used) as i128;
            let pos_ok = pos <= room;
            // the first nonzero coordinate is positive: x and -x are the same answer
            let neg_ok = nonzero && -neg <= room;
            if !pos_ok && !neg_ok {
                break;
            }
            let v = if pos_ok && (!neg_ok || pos <= -neg) {
                pos += d;
                pos - d
            } else {
                neg -= d;
                neg + d
            };
            if !self.descend(br, k, v, used, nonzero) {
                return false;
            }
        }
        true
    }

    fn descend(&self, br: &mut Branch, k: usize, v: i128, used: u64, nonzero: bool) -> bool {
        let u = (v - br.acc[k]) / self.diag[k] as i128;
        let row = &self.rows[k];
        if u != 0 {
            for j in k + 1..row.len() {
                br.acc[j] += u * row[j] as i128;
            }
        }
        br.x[k] = v as i64;
        let ok = self.dfs(br, k + 1, used + v.unsigned_abs() as u64, nonzero || v != 0);
        if u != 0 {
            for j in k + 1..row.len() {
                br.acc[j] -= u * row[j] as i128;
            }
        }
        br.x[k] = 0;
        ok
    }
}

/// Searches for a nonzero vector of weight at most `limit`, returning the
/// lightest one found.
fn search(lattice: &Lattice, limit: u64, node_budget: u64) -> Outcome {
    let rows = lattice.canonical().to_rows();
    let diag = lattice.diagonal();
    let n = diag.len();
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let global = AtomicU64::new(limit);
    let s = Search {
        rows: &rows,
        diag: diag.clone(),
        nodes: &nodes,
        node_budget,
        stop: &stop,
        global: &global,
    };
    // top-level branches: the nonnegative admissible values of x_1
    let d0 = diag[0] as u64;
    let firsts: Vec<u64> = (0..=limit / d0).map(|t| t * d0).collect();
    let results: Vec<Option<(u64, Vec<i64>)>> = firsts
        .par_iter()
        .map(|&v| {
            let mut br = Branch {
                x: vec![0; n],
                acc: vec![0; n],
                limit,
                best: None,
                local_nodes: 0,
            };
            s.descend(&mut br, 0, v as i128, 0, false);
            br.best
        })
        .collect();
    if stop.load(Ordering::Relaxed) {
        return Outcome::OutOfNodes;
    }
    // first branch attaining the minimum keeps the witness schedule-independent
    let mut best: Option<(u64, Vec<i64>)> = None;
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

pub(super) fn min_manhattan(lattice: &Lattice, node_budget: u64) -> DistanceResult {
    let (upper, upper_witness) = lattice
        .basis()
        .row_iter()
        .chain(lattice.canonical().row_iter())
        .map(|r| (manhattan(r), r.to_vec()))
        .min_by_key(|(w, _)| *w)
        .expect("nonempty basis");
    if upper <= 1 {
        return DistanceResult::Exact {
            distance: upper,
            witness: upper_witness,
        };
    }
    match search(lattice, upper - 1, node_budget) {
        Outcome::Found(w, x) => DistanceResult::Exact {
            distance: w,
            witness: x,
        },
        Outcome::None => DistanceResult::Exact {
            distance: upper,
            witness: upper_witness,
        },
        Outcome::OutOfNodes => {
            // certify a lower bound by exhausting small weights one at a time
            let mut lower = 1;
            while lower < upper {
                match search(lattice, lower, node_budget) {
                    Outcome::None => lower += 1,
                    Outcome::Found(w, x) => {
                        return DistanceResult::Exact {
                            distance: w,
                            witness: x,
                        }
                    }
                    Outcome::OutOfNodes => break,
                }
            }
            if lower == upper {
                return DistanceResult::Exact {
                    distance: upper,
                    witness: upper_witness,
                };
            }
            DistanceResult::Interval {
                lower,
                upper,
                witness: upper_witness,
            }
        }
    }
}
