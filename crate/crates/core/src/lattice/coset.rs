//! The quotient group `Z^n / L` and breadth-first search over its Cayley
//! graph with generators `±e_i`.

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::Lattice;
use crate::error::{Error, Result};

const UNSEEN: u8 = u8::MAX;
/// Frontier slice merged at a time; bounds candidate memory.
const MERGE_CHUNK: usize = 1 << 16;

/// Mixed-radix coordinates on `Z^n / L`.
///
/// A coset is identified by the residue `r` of any member after reduction by
/// the canonical basis, `0 <= r_k < d_k`; the index is `r` read in radix
/// `(d_1, ..., d_n)` with `r_1` most significant.
#[derive(Debug, Clone)]
pub struct CosetIndexer {
    rows: Vec<Vec<i64>>,
    shape: Vec<u64>,
    strides: Vec<u64>,
    count: u64,
}

impl CosetIndexer {
    pub(super) fn new(lattice: &Lattice) -> Self {
        let rows = lattice.canonical().to_rows();
        let shape: Vec<u64> = lattice.diagonal().iter().map(|&d| d as u64).collect();
        let n = shape.len();
        let mut strides = vec![1u64; n];
        let mut count = 1u64;
        for k in (0..n).rev() {
            strides[k] = count;
            count = count.saturating_mul(shape[k]);
        }
        CosetIndexer {
            rows,
            shape,
            strides,
            count,
        }
    }

    pub fn dimension(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[u64] {
        &self.shape
    }

    /// Number of cosets, saturating at `u64::MAX`.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Reduces `v` in place from coordinate `from` onward; coordinates before
    /// `from` must already be reduced.
    fn reduce_from(&self, v: &mut [i64], from: usize) {
        for k in from..v.len() {
            let d = self.shape[k] as i64;
            let q = v[k].div_euclid(d);
            if q != 0 {
                for (vj, &rj) in v[k..].iter_mut().zip(&self.rows[k][k..]) {
                    *vj -= q * rj;
                }
            }
        }
    }

    pub fn residue(&self, x: &[i64]) -> Vec<i64> {
        let mut v = x.to_vec();
        self.reduce_from(&mut v, 0);
        v
    }

    pub fn index_of(&self, x: &[i64]) -> u64 {
        self.encode(&self.residue(x))
    }

    pub fn encode(&self, residue: &[i64]) -> u64 {
        residue
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r as u64 * s)
            .sum()
    }

    pub fn decode(&self, mut index: u64) -> Vec<i64> {
        let mut out = vec![0i64; self.shape.len()];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (index / self.strides[k]) as i64;
            index %= self.strides[k];
        }
        out
    }

    /// Index of the coset `residue + sign · e_axis`.
    pub fn step(&self, residue: &[i64], axis: usize, sign: i64, scratch: &mut Vec<i64>) -> u64 {
        scratch.clear();
        scratch.extend_from_slice(residue);
        scratch[axis] += sign;
        self.reduce_from(scratch, axis);
        self.encode(scratch)
    }
}

/// Minimum Manhattan weight of every coset of a lattice.
#[derive(Debug, Clone)]
pub struct CosetAtlas {
    indexer: CosetIndexer,
    weights: Vec<u8>,
    leaders: Option<Vec<i16>>,
    covering_radius: u32,
}

fn generator(g: usize) -> (usize, i64) {
    (g / 2, if g.is_multiple_of(2) { 1 } else { -1 })
}

impl CosetAtlas {
    pub(super) fn build(lattice: &Lattice, store_leaders: bool, budget: u64) -> Result<Self> {
        let indexer = lattice.indexer();
        let n = indexer.dimension();
        let count = lattice
            .volume_u64()
            .filter(|&v| v <= budget)
            .ok_or_else(|| Error::budget("coset search", lattice.volume(), budget))?;
        debug_assert_eq!(count, indexer.count());
        let count = count as usize;
        let mut weights = vec![UNSEEN; count];
        let mut leaders = store_leaders.then(|| vec![0i16; count * n]);
        weights[0] = 0;
        let mut frontier: Vec<u64> = vec![0];
        let mut level = 0u8;
        while !frontier.is_empty() {
            if level == UNSEEN - 1 {
                return Err(Error::Overflow("coset weight above 254".into()));
            }
            let mut next = Vec::new();
            for chunk in frontier.chunks(MERGE_CHUNK) {
                // candidates are generated in parallel, then merged in
                // (frontier position, generator) order: identical to FIFO
                let weights_ro = &weights;
                let found: Vec<Vec<(u64, u32, u8)>> = chunk
                    .par_chunks(1024)
                    .enumerate()
                    .map(|(block, nodes)| {
                        let mut scratch = Vec::with_capacity(n);
                        let mut out = Vec::new();
                        for (off, &node) in nodes.iter().enumerate() {
                            let residue = indexer.decode(node);
                            for g in 0..2 * n {
                                let (axis, sign) = generator(g);
                                let nb = indexer.step(&residue, axis, sign, &mut scratch);
                                if weights_ro[nb as usize] == UNSEEN {
                                    out.push((nb, (block * 1024 + off) as u32, g as u8));
                                }
                            }
                        }
                        out
                    })
                    .collect();
                for (nb, pos, g) in found.into_iter().flatten() {
                    let nb_us = nb as usize;
                    if weights[nb_us] != UNSEEN {
                        continue;
                    }
                    weights[nb_us] = level + 1;
                    if let Some(ls) = leaders.as_mut() {
                        let parent = chunk[pos as usize] as usize;
                        let (axis, sign) = generator(g as usize);
                        ls.copy_within(parent * n..(parent + 1) * n, nb_us * n);
                        ls[nb_us * n + axis] += sign as i16;
                    }
                    next.push(nb);
                }
            }
            if !next.is_empty() {
                level += 1;
            }
            frontier = next;
        }
        debug_assert!(weights.iter().all(|&w| w != UNSEEN));
        Ok(CosetAtlas {
            indexer,
            weights,
            leaders,
            covering_radius: level as u32,
        })
    }

    pub fn indexer(&self) -> &CosetIndexer {
        &self.indexer
    }

    pub fn shape(&self) -> &[u64] {
        self.indexer.shape()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn weight(&self, index: u64) -> u8 {
        self.weights[index as usize]
    }

    pub fn has_leaders(&self) -> bool {
        self.leaders.is_some()
    }

    pub fn leader(&self, index: u64) -> Option<Vec<i64>> {
        let n = self.indexer.dimension();
        let i = index as usize;
        self.leaders
            .as_ref()
            .map(|ls| ls[i * n..(i + 1) * n].iter().map(|&v| v as i64).collect())
    }

    /// Leader of the coset containing `x`.
    pub fn leader_of(&self, x: &[i64]) -> Option<Vec<i64>> {
        self.leader(self.indexer.index_of(x))
    }

    pub fn covering_radius(&self) -> u32 {
        self.covering_radius
    }

    /// Count of cosets per leader weight, indexed by weight.
    pub fn weight_distribution(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.covering_radius as usize + 1];
        for &w in &self.weights {
            out[w as usize] += 1;
        }
        out
    }

    /// Checks `weight(c ± e_i) <= weight(c) + 1` for every coset and axis.
    pub fn check_cayley_triangle(&self) -> bool {
        let n = self.indexer.dimension();
        (0..self.weights.len() as u64)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(n),
                |scratch, c| {
                    let residue = self.indexer.decode(c);
                    let w = self.weights[c as usize];
                    (0..2 * n).all(|g| {
                        let (axis, sign) = generator(g);
                        let nb = self.indexer.step(&residue, axis, sign, scratch);
                        self.weights[nb as usize] <= w + 1
                    })
                },
            )
            .all(|ok| ok)
    }

    /// Every stored leader lies in its coset and has the recorded weight.
    pub fn check_leaders(&self) -> bool {
        let Some(_) = &self.leaders else {
            return true;
        };
        (0..self.weights.len() as u64).into_par_iter().all(|c| {
            let l = self.leader(c).expect("leaders stored");
            self.indexer.index_of(&l) == c
                && crate::intmat::manhattan(&l) == self.weights[c as usize] as u64
        })
    }

    /// CSV with columns `coset_index,weight[,x1..xn]`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.indexer.dimension();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["coset_index".to_string(), "weight".to_string()];
        if self.has_leaders() {
            header.extend((1..=n).map(|i| format!("x{i}")));
        }
        w.write_record(&header).map_err(csv_err)?;
        for (i, &wt) in self.weights.iter().enumerate() {
            let mut rec = vec![i.to_string(), wt.to_string()];
            if let Some(l) = self.leader(i as u64) {
                rec.extend(l.iter().map(i64::to_string));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

struct AtomicBits(Vec<AtomicU64>);

impl AtomicBits {
    fn new(len: u64) -> Self {
        AtomicBits((0..len.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize].load(Ordering::Relaxed) >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`, returning whether it was previously clear.
    fn set(&self, i: u64) -> bool {
        let mask = 1u64 << (i % 64);
        self.0[(i / 64) as usize].fetch_or(mask, Ordering::Relaxed) & mask == 0
    }

    fn clear(&self) {
        self.0
            .par_iter()
            .for_each(|w| w.store(0, Ordering::Relaxed));
    }
}

/// Covering radius without per-coset storage: three bitsets of one bit per
/// coset instead of one byte. Reports progress after each level via `on_level`.
pub fn covering_radius_bitset(
    lattice: &Lattice,
    budget: u64,
    mut on_level: impl FnMut(u32, u64),
) -> Result<u32> {
    let indexer = lattice.indexer();
    let n = indexer.dimension();
    let count = lattice
        .volume_u64()
        .filter(|&v| v <= budget)
        .ok_or_else(|| Error::budget("coset search", lattice.volume(), budget))?;
    let seen = AtomicBits::new(count);
    let mut frontier = AtomicBits::new(count);
    let mut next = AtomicBits::new(count);
    seen.set(0);
    frontier.set(0);
    let mut reached = 1u64;
    let mut level = 0u32;
    loop {
        let added = AtomicU64::new(0);
        frontier.0.par_iter().enumerate().for_each_init(
            || Vec::with_capacity(n),
            |scratch, (wi, word)| {
                let mut bits = word.load(Ordering::Relaxed);
                while bits != 0 {
                    let node = wi as u64 * 64 + bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    let residue = indexer.decode(node);
                    for g in 0..2 * n {
                        let (axis, sign) = generator(g);
                        let nb = indexer.step(&residue, axis, sign, scratch);
                        if !seen.get(nb) && seen.set(nb) {
                            next.set(nb);
                            added.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                }
            },
        );
        let added = added.into_inner();
        if added == 0 {
            break;
        }
        level += 1;
        reached += added;
        on_level(level, reached);
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    debug_assert_eq!(reached, count);
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::{manhattan, IntMatrix};
    use crate::matrices::sylvester_hadamard;

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::canonicalize(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    /// Minimum weight per coset by scanning every point of the l1 ball.
    fn brute_weights(l: &Lattice, radius: i64) -> Vec<u64> {
        let ix = l.indexer();
        let n = ix.dimension();
        let mut best = vec![u64::MAX; ix.count() as usize];
        let mut x = vec![-radius; n];
        loop {
            let w = manhattan(&x);
            if w as i64 <= radius {
                let c = ix.index_of(&x) as usize;
                best[c] = best[c].min(w);
            }
            let mut k = 0;
            while k < n && x[k] == radius {
                x[k] = -radius;
                k += 1;
            }
            if k == n {
                return best;
            }
            x[k] += 1;
        }
    }

    #[test]
    fn whole_space_has_one_coset() {
        let a = lat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
            .coset_bfs(true, 16)
            .unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.covering_radius(), 0);
        assert_eq!(a.leader(0), Some(vec![0, 0, 0]));
    }

    #[test]
    fn weights_match_brute_force() {
        for rows in [
            vec![vec![3, 1], vec![0, 5]],
            vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]],
            sylvester_hadamard(2, 64).unwrap().to_int_matrix().to_rows(),
        ] {
            let l = lat(&rows);
            let atlas = l.coset_bfs(true, 1 << 20).unwrap();
            let brute = brute_weights(&l, 8);
            let got: Vec<u64> = atlas.weights().iter().map(|&w| w as u64).collect();
            assert_eq!(got, brute, "{rows:?}");
            assert!(atlas.check_leaders());
            assert!(atlas.check_cayley_triangle());
        }
    }

    #[test]
    fn hadamard_four_has_radius_two() {
        let l = Lattice::canonicalize(&sylvester_hadamard(2, 64).unwrap().to_int_matrix()).unwrap();
        let atlas = l.coset_bfs(false, 1 << 20).unwrap();
        assert_eq!(atlas.len(), 16);
        assert_eq!(atlas.covering_radius(), 2);
        assert_eq!(atlas.weight_distribution().iter().sum::<u64>(), 16);
        assert!(!atlas.has_leaders());
        assert_eq!(atlas.leader_of(&[1, 0, 0, 0]), None);
    }

    #[test]
    fn bitset_search_agrees() {
        for rows in [
            vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]],
            sylvester_hadamard(3, 64).unwrap().to_int_matrix().to_rows(),
        ] {
            let l = lat(&rows);
            let mut levels = Vec::new();
            let r = covering_radius_bitset(&l, 1 << 20, |lv, n| levels.push((lv, n))).unwrap();
            assert_eq!(r, l.covering_radius(1 << 20).unwrap());
            assert_eq!(levels.last().map(|&(_, n)| n), l.volume_u64());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let l = lat(&[vec![7, 0], vec![0, 7]]);
        assert!(matches!(
            l.coset_bfs(false, 48),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(covering_radius_bitset(&l, 48, |_, _| {}).is_err());
    }

    #[test]
    fn csv_export() {
        let l = lat(&[vec![2, 0], vec![0, 2]]);
        let atlas = l.coset_bfs(true, 16).unwrap();
        let mut buf = Vec::new();
        atlas.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "coset_index,weight,x1,x2");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "0,0,0,0");
        let no_leaders = l.coset_bfs(false, 16).unwrap();
        let mut buf = Vec::new();
        no_leaders.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("coset_index,weight\n"));
    }
}
