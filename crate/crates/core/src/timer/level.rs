//! One level of a label hierarchy: sibling swaps and contraction.

use std::borrow::Cow;

use crate::graph::Graph;
use crate::label::LevelMasks;
use crate::objective::swap_gain;

/// A graph of the hierarchy with its current labels.
///
/// On level `i` (1-based) labels have the lowest `i - 1` digits of the
/// permuted fine labels cut off.
#[derive(Debug, Clone)]
pub struct HierarchyLevel<'g> {
    pub graph: Cow<'g, Graph>,
    pub labels: Vec<u64>,
    pub index: usize,
}

/// `parent[v]` is the vertex of the next coarser level containing `v`.
pub type ParentVec = Vec<u32>;

impl<'g> HierarchyLevel<'g> {
    pub fn finest(graph: &'g Graph, labels: Vec<u64>) -> Self {
        HierarchyLevel {
            graph: Cow::Borrowed(graph),
            labels,
            index: 1,
        }
    }

    /// Vertex ids sorted by label. Siblings end up adjacent, even label
    /// first.
    fn by_label(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.labels.len() as u32).collect();
        order.sort_unstable_by_key(|&v| self.labels[v as usize]);
        order
    }

    /// Sibling pairs `(even, odd)` in ascending order of their shared prefix.
    pub fn sibling_pairs(&self) -> Vec<(usize, usize)> {
        let order = self.by_label();
        order
            .windows(2)
            .filter_map(|w| {
                let (u, v) = (w[0] as usize, w[1] as usize);
                (self.labels[u] >> 1 == self.labels[v] >> 1).then_some((u, v))
            })
            .collect()
    }

    /// One pass over all sibling pairs; a pair exchanges labels iff that
    /// strictly lowers Coco⁺ on this level. Returns the number of swaps.
    pub fn swap_phase(&mut self, masks: LevelMasks) -> usize {
        let mut swaps = 0;
        for (u, v) in self.sibling_pairs() {
            if swap_gain(&self.graph, &self.labels, masks, u, v) < 0 {
                self.labels.swap(u, v);
                swaps += 1;
            }
        }
        swaps
    }

    /// Merges every sibling pair into one vertex and cuts off the lowest
    /// digit of all labels. Coarse vertices are numbered in ascending order
    /// of their labels; parallel edges are summed and intra-pair edges
    /// dropped.
    pub fn contract(&self) -> (HierarchyLevel<'static>, ParentVec) {
        let g = &*self.graph;
        let n = g.n();
        let order = self.by_label();

        let mut parent = vec![0u32; n];
        let mut coarse_labels = Vec::with_capacity(n);
        // run boundaries into `order`, one run per coarse vertex
        let mut starts = Vec::with_capacity(n + 1);
        for (i, &v) in order.iter().enumerate() {
            let prefix = self.labels[v as usize] >> 1;
            if coarse_labels.last() != Some(&prefix) {
                coarse_labels.push(prefix);
                starts.push(i);
            }
            parent[v as usize] = (coarse_labels.len() - 1) as u32;
        }
        starts.push(n);

        let nc = coarse_labels.len();
        let mut xadj = Vec::with_capacity(nc + 1);
        let mut adjncy: Vec<u32> = Vec::with_capacity(g.adjncy().len());
        let mut adjwgt: Vec<u64> = Vec::with_capacity(g.adjncy().len());
        let mut slot = vec![usize::MAX; nc];
        xadj.push(0);
        for c in 0..nc {
            let begin = adjncy.len();
            for &u in &order[starts[c]..starts[c + 1]] {
                for (v, w) in g.neighbors(u as usize) {
                    let pv = parent[v] as usize;
                    if pv == c {
                        continue;
                    }
                    match slot[pv] {
                        usize::MAX => {
                            slot[pv] = adjncy.len();
                            adjncy.push(pv as u32);
                            adjwgt.push(w);
                        }
                        i => adjwgt[i] += w,
                    }
                }
            }
            for &pv in &adjncy[begin..] {
                slot[pv as usize] = usize::MAX;
            }
            let mut seg: Vec<(u32, u64)> = adjncy[begin..]
                .iter()
                .copied()
                .zip(adjwgt[begin..].iter().copied())
                .collect();
            seg.sort_unstable();
            for (k, (v, w)) in seg.into_iter().enumerate() {
                adjncy[begin + k] = v;
                adjwgt[begin + k] = w;
            }
            xadj.push(adjncy.len());
        }

        let next = HierarchyLevel {
            graph: Cow::Owned(Graph::from_csr(xadj, adjncy, adjwgt)),
            labels: coarse_labels,
            index: self.index + 1,
        };
        (next, parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::level_coco_plus;

    fn graph(n: usize, edges: &[(usize, usize, u64)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn no_siblings_means_no_swaps() {
        let g = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        let mut level = HierarchyLevel::finest(&g, vec![0b000, 0b010, 0b100]);
        let masks = LevelMasks { proc: 0b110, ext: 0b001 };
        assert!(level.sibling_pairs().is_empty());
        assert_eq!(level.swap_phase(masks), 0);
        assert_eq!(level.labels, vec![0b000, 0b010, 0b100]);
    }

    #[test]
    fn two_vertex_swap() {
        // 0 and 1 are siblings; 2 has no sibling and stays at 0b10
        let g = graph(3, &[(1, 2, 1)]);
        let masks = LevelMasks { proc: 0b11, ext: 0 };
        let mut level = HierarchyLevel::finest(&g, vec![0b00, 0b01, 0b10]);
        assert_eq!(level.sibling_pairs(), vec![(0, 1)]);
        let before = level_coco_plus(&g, &level.labels, masks);
        assert_eq!(swap_gain(&g, &level.labels, masks, 0, 1), -1);
        assert_eq!(level.swap_phase(masks), 1);
        assert_eq!(level.labels, vec![0b01, 0b00, 0b10]);
        assert_eq!(level_coco_plus(&g, &level.labels, masks), before - 1);
        // a second pass finds nothing better
        assert_eq!(level.swap_phase(masks), 0);
    }

    #[test]
    fn contract_halves_full_pairs() {
        let g = graph(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 0, 5)]);
        let level = HierarchyLevel::finest(&g, vec![0b00, 0b01, 0b10, 0b11]);
        let (next, parent) = level.contract();
        assert_eq!(next.labels, vec![0, 1]);
        assert_eq!(parent, vec![0, 0, 1, 1]);
        assert_eq!(next.graph.edges().collect::<Vec<_>>(), vec![(0, 1, 8)]);
        assert_eq!(next.index, 2);
    }

    #[test]
    fn contract_without_siblings_is_isomorphic() {
        let g = graph(3, &[(0, 1, 2), (1, 2, 3)]);
        let level = HierarchyLevel::finest(&g, vec![0b100, 0b000, 0b010]);
        let (next, parent) = level.contract();
        assert_eq!(next.labels, vec![0b00, 0b01, 0b10]);
        assert_eq!(parent, vec![2, 0, 1]);
        let mut e: Vec<_> = next.graph.edges().collect();
        e.sort();
        assert_eq!(e, vec![(0, 1, 3), (0, 2, 2)]);
    }
}
