//! Initial mappings: identity, two greedy constructions, and a BFS-growing
//! partitioner so that the pipeline needs no external tools.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distance::DistanceTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mapping, Partition};
use crate::objective::max_block_size;
use crate::pcube::PcubeLabeling;

/// Block `i` runs on PE `i`.
pub fn identity_mapping(p: &Partition, pl: &PcubeLabeling) -> Result<Mapping> {
    if p.k != pl.n() {
        return Err(Error::SizeMismatch(format!(
            "{} blocks for {} PEs",
            p.k,
            pl.n()
        )));
    }
    Ok(p.clone())
}

/// Placement of communication-graph vertices (blocks) on PEs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// PE of each block.
    pub pe: Vec<u32>,
    /// Blocks in the order they were placed.
    pub order: Vec<u32>,
}

impl Assignment {
    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.pe.len()];
        self.pe.iter().all(|&p| {
            let p = p as usize;
            p < seen.len() && !std::mem::replace(&mut seen[p], true)
        })
    }

    /// Mapping of application vertices: block `b` goes to `pe[b]`.
    pub fn compose(&self, p: &Partition) -> Mapping {
        Partition {
            block: p.block.iter().map(|&b| self.pe[b as usize]).collect(),
            k: self.pe.len(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scoring {
    /// Sum over all already placed neighbors.
    All,
    /// Only the heaviest already placed neighbor.
    Best,
}

/// Places the heaviest block on a PE of minimum eccentricity, then
/// repeatedly places the block with the most communication to placed blocks
/// on the free PE closest (summed hop distance) to all of their PEs.
pub fn greedy_allc(gc: &Graph, dist: &DistanceTable) -> Result<Assignment> {
    greedy(gc, dist, Scoring::All)
}

/// Like [`greedy_allc`] but scores blocks by their single heaviest edge to a
/// placed block and picks the free PE closest to that block's PE.
pub fn greedy_min(gc: &Graph, dist: &DistanceTable) -> Result<Assignment> {
    greedy(gc, dist, Scoring::Best)
}

const FREE: u32 = u32::MAX;

struct Greedy<'a> {
    gc: &'a Graph,
    scoring: Scoring,
    pe: Vec<u32>,
    used: Vec<bool>,
    // total (All) or heaviest (Best) weight to placed blocks
    score: Vec<u64>,
    // placed neighbor realizing the heaviest weight (Best only)
    anchor: Vec<u32>,
    order: Vec<u32>,
}

impl Greedy<'_> {
    fn place(&mut self, v: usize, p: usize) {
        self.pe[v] = p as u32;
        self.used[p] = true;
        self.order.push(v as u32);
        for (u, w) in self.gc.neighbors(v) {
            if self.pe[u] != FREE {
                continue;
            }
            match self.scoring {
                Scoring::All => self.score[u] += w,
                Scoring::Best => {
                    if w > self.score[u] || (w == self.score[u] && (v as u32) < self.anchor[u]) {
                        self.score[u] = w;
                        self.anchor[u] = v as u32;
                    }
                }
            }
        }
    }

    fn cost(&self, v: usize, p: usize, dist: &DistanceTable) -> u64 {
        match self.scoring {
            Scoring::All => self
                .gc
                .neighbors(v)
                .filter(|&(u, _)| self.pe[u] != FREE)
                .map(|(u, _)| dist.get(p, self.pe[u] as usize) as u64)
                .sum(),
            Scoring::Best => match self.anchor[v] {
                FREE => 0,
                a => dist.get(p, self.pe[a as usize] as usize) as u64,
            },
        }
    }
}

fn greedy(gc: &Graph, dist: &DistanceTable, scoring: Scoring) -> Result<Assignment> {
    let n = gc.n();
    if n != dist.n() {
        return Err(Error::SizeMismatch(format!(
            "{n} blocks for {} PEs",
            dist.n()
        )));
    }
    let mut st = Greedy {
        gc,
        scoring,
        pe: vec![FREE; n],
        used: vec![false; n],
        score: vec![0; n],
        anchor: vec![FREE; n],
        order: Vec::with_capacity(n),
    };
    if n == 0 {
        return Ok(Assignment { pe: st.pe, order: st.order });
    }

    let weighted_degree = |v: usize| gc.neighbors(v).map(|(_, w)| w).sum::<u64>();
    let first = (0..n)
        .max_by(|&a, &b| weighted_degree(a).cmp(&weighted_degree(b)).then(b.cmp(&a)))
        .unwrap();
    let first_pe = (0..n).min_by_key(|&p| (dist.eccentricity(p), p)).unwrap();
    st.place(first, first_pe);

    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| st.pe[v] == FREE)
            .max_by(|&a, &b| st.score[a].cmp(&st.score[b]).then(b.cmp(&a)))
            .unwrap();
        let p = (0..n)
            .filter(|&p| !st.used[p])
            .min_by_key(|&p| (st.cost(v, p, dist), p))
            .unwrap();
        st.place(v, p);
    }
    Ok(Assignment { pe: st.pe, order: st.order })
}

/// Grows `k` blocks breadth-first from distinct random seeds, each capped at
/// `(1 + eps)·⌈n/k⌉` vertices. Vertices left over (unreachable, or walled
/// in by full blocks) join the least-full adjacent block with room, or the
/// least-full block overall.
pub fn grow_partition<R: Rng + ?Sized>(ga: &Graph, k: usize, eps: f64, rng: &mut R) -> Result<Partition> {
    let n = ga.n();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("cannot split {n} vertices into {k} blocks")));
    }
    const NONE: u32 = u32::MAX;
    let cap = max_block_size(n, k, eps);
    let mut block = vec![NONE; n];
    let mut size = vec![0usize; k];
    let mut frontier: Vec<VecDeque<usize>> = vec![VecDeque::new(); k];
    for (b, s) in sample(rng, n, k).into_iter().enumerate() {
        block[s] = b as u32;
        size[b] = 1;
        frontier[b].push_back(s);
    }

    let mut active = true;
    while active {
        active = false;
        for b in 0..k {
            if size[b] >= cap {
                frontier[b].clear();
                continue;
            }
            let Some(u) = frontier[b].pop_front() else { continue };
            active = true;
            for &v in ga.neighbor_ids(u) {
                let v = v as usize;
                if block[v] == NONE && size[b] < cap {
                    block[v] = b as u32;
                    size[b] += 1;
                    frontier[b].push_back(v);
                }
            }
        }
    }

    for v in 0..n {
        if block[v] != NONE {
            continue;
        }
        let adjacent = ga
            .neighbor_ids(v)
            .iter()
            .map(|&u| block[u as usize])
            .filter(|&b| b != NONE && size[b as usize] < cap)
            .min_by_key(|&b| (size[b as usize], b));
        let b = match adjacent {
            Some(b) => b as usize,
            None => (0..k).min_by_key(|&b| (size[b], b)).unwrap(),
        };
        block[v] = b as u32;
        size[b] += 1;
    }
    Partition::new(block, k)
}
