//! Unweighted shortest-path distances.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances from `src`; unreachable vertices hold [`UNREACHABLE`].
pub fn bfs(g: &Graph, src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &v in g.neighbor_ids(u) {
            let v = v as usize;
            if dist[v] == UNREACHABLE {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Dense all-pairs hop-distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<u32>,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    /// Largest distance from `u`.
    pub fn eccentricity(&self, u: usize) -> u32 {
        self.row(u).iter().copied().max().unwrap_or(0)
    }
}

/// One BFS per vertex. Fails on disconnected graphs, whose distances are
/// not all finite.
pub fn bfs_all_pairs(g: &Graph) -> Result<DistanceTable> {
    let n = g.n();
    let mut d = Vec::with_capacity(n * n);
    for u in 0..n {
        let row = bfs(g, u);
        if let Some(v) = row.iter().position(|&x| x == UNREACHABLE) {
            return Err(Error::Disconnected { unreachable: v });
        }
        d.extend_from_slice(&row);
    }
    Ok(DistanceTable { n, d })
}
