//! Communication cost (Coco), label diversity (Div), their difference
//! Coco⁺, edge cut and balance.
//!
//! Everything the optimizer compares is exact integer arithmetic. Coco and
//! Div are summed over all edges: an edge whose endpoints agree on the
//! processor part adds 0 to Coco, and likewise for Div on the extension
//! part, so no edge subsets need to be tracked.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Partition};
use crate::label::{LabelState, LevelMasks};

/// Hop-weighted communication cost: Σ ω(e) · Hamming distance of the
/// processor parts of the endpoint labels.
pub fn coco(ga: &Graph, ls: &LabelState) -> u64 {
    masked_sum(ga, ls.labels(), ls.layout().proc_mask)
}

/// Σ ω(e) · Hamming distance of the extension parts.
pub fn div(ga: &Graph, ls: &LabelState) -> u64 {
    masked_sum(ga, ls.labels(), ls.layout().ext_mask)
}

pub fn coco_plus(ga: &Graph, ls: &LabelState) -> i64 {
    coco(ga, ls) as i64 - div(ga, ls) as i64
}

fn masked_sum(g: &Graph, labels: &[u64], mask: u64) -> u64 {
    g.edges()
        .map(|(u, v, w)| w * ((labels[u] ^ labels[v]) & mask).count_ones() as u64)
        .sum()
}

/// Coco⁺ of an arbitrary level labeling under the given masks.
pub fn level_coco_plus(g: &Graph, labels: &[u64], masks: LevelMasks) -> i64 {
    let xadj = g.xadj();
    let adjncy = g.adjncy();
    let adjwgt = g.adjwgt();
    let mut total = 0i64;
    for u in 0..g.n() {
        let lu = labels[u];
        for i in xadj[u]..xadj[u + 1] {
            let v = adjncy[i] as usize;
            if v > u {
                total += adjwgt[i] as i64 * masks.cost(lu, labels[v]);
            }
        }
    }
    total
}

/// Change of Coco⁺ if `u` and `v` exchange labels (negative is better).
///
/// Only edges at `u` or `v` are visited. The edge `{u, v}` keeps its cost
/// under the exchange and is skipped.
pub fn swap_gain(g: &Graph, labels: &[u64], masks: LevelMasks, u: usize, v: usize) -> i64 {
    let (lu, lv) = (labels[u], labels[v]);
    let xadj = g.xadj();
    let adjncy = g.adjncy();
    let adjwgt = g.adjwgt();
    let mut delta = 0i64;
    for (x, from, to) in [(u, lu, lv), (v, lv, lu)] {
        for i in xadj[x]..xadj[x + 1] {
            let w = adjncy[i] as usize;
            if w == u || w == v {
                continue;
            }
            let lw = labels[w];
            delta += adjwgt[i] as i64 * (masks.cost(to, lw) - masks.cost(from, lw));
        }
    }
    delta
}

/// Total weight of edges whose endpoints lie in different blocks.
pub fn edge_cut(g: &Graph, p: &Partition) -> u64 {
    g.edges()
        .filter(|&(u, v, _)| p.block[u] != p.block[v])
        .map(|(_, _, w)| w)
        .sum()
}

/// Relative excess of the largest block over the ideal `⌈n/k⌉`.
pub fn imbalance(p: &Partition) -> f64 {
    if p.k == 0 || p.is_empty() {
        return 0.0;
    }
    let ideal = p.len().div_ceil(p.k) as f64;
    let max = p.block_sizes().into_iter().max().unwrap_or(0) as f64;
    max / ideal - 1.0
}

/// Largest block size allowed under imbalance `eps`.
pub fn max_block_size(n: usize, k: usize, eps: f64) -> usize {
    ((1.0 + eps) * n.div_ceil(k) as f64 + 1e-9).floor() as usize
}

/// True iff every block holds at most `(1 + eps)·⌈n/k⌉` vertices.
pub fn balance_check(p: &Partition, eps: f64) -> bool {
    let cap = max_block_size(p.len(), p.k.max(1), eps);
    p.block_sizes().into_iter().all(|s| s <= cap)
}

/// Sizes of the edge sets whose endpoints share the processor part and the
/// extension part, respectively.
pub fn agreeing_edge_counts(ga: &Graph, ls: &LabelState) -> (usize, usize) {
    let l = ls.labels();
    let layout = ls.layout();
    let mut same_proc = 0;
    let mut same_ext = 0;
    for (u, v, _) in ga.edges() {
        let x = l[u] ^ l[v];
        same_proc += usize::from(x & layout.proc_mask == 0);
        same_ext += usize::from(x & layout.ext_mask == 0);
    }
    (same_proc, same_ext)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub coco: u64,
    pub div: u64,
    pub coco_plus: i64,
    pub edge_cut: u64,
    pub balance_eps: f64,
}

impl ObjectiveValue {
    /// Evaluates a labeling; `mapping` is the PE assignment it encodes.
    pub fn evaluate(ga: &Graph, ls: &LabelState, mapping: &Partition) -> Self {
        let coco = coco(ga, ls);
        let div = div(ga, ls);
        ObjectiveValue {
            coco,
            div,
            coco_plus: coco as i64 - div as i64,
            edge_cut: edge_cut(ga, mapping),
            balance_eps: imbalance(mapping),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::LabelLayout;

    fn state(dim_gp: usize, dim_ga: usize, labels: Vec<u64>) -> LabelState {
        LabelState::from_parts(LabelLayout::identity(dim_gp, dim_ga), labels).unwrap()
    }

    #[test]
    fn coco_examples() {
        let g = Graph::from_edges(3, &[(0, 1, 2), (1, 2, 5)]).unwrap();
        // one PE: labels differ only in the extension
        let ls = state(0, 2, vec![0, 1, 2]);
        assert_eq!(coco(&g, &ls), 0);
        let g = Graph::from_edges(2, &[(0, 1, 3)]).unwrap();
        let ls = state(2, 2, vec![0b00, 0b11]);
        assert_eq!(coco(&g, &ls), 6);
    }

    #[test]
    fn div_examples() {
        let g = Graph::from_edges(2, &[(0, 1, 2)]).unwrap();
        let same_ext = state(1, 3, vec![0b000, 0b100]);
        assert_eq!(div(&g, &same_ext), 0);
        let ls = state(1, 3, vec![0b000, 0b111]);
        assert_eq!(div(&g, &ls), 4);
        assert_eq!(coco(&g, &ls), 2);
        assert_eq!(coco_plus(&g, &ls), -2);
    }

    #[test]
    fn div_matches_bit_loop() {
        let g = Graph::from_edges(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 1), (0, 3, 7)]).unwrap();
        let ls = state(2, 5, vec![0b10110, 0b01001, 0b11111, 0b00010]);
        let mut expected = 0;
        for (u, v, w) in g.edges() {
            for bit in 0..3 {
                if (ls.labels()[u] >> bit) & 1 != (ls.labels()[v] >> bit) & 1 {
                    expected += w;
                }
            }
        }
        assert_eq!(div(&g, &ls), expected);
    }

    #[test]
    fn edge_cut_examples() {
        let g = Graph::from_edges(3, &[(0, 1, 2), (1, 2, 5)]).unwrap();
        assert_eq!(edge_cut(&g, &Partition::new(vec![0, 0, 0], 1).unwrap()), 0);
        assert_eq!(edge_cut(&g, &Partition::new(vec![0, 1, 2], 3).unwrap()), 7);
        assert_eq!(edge_cut(&g, &Partition::new(vec![0, 0, 1], 2).unwrap()), 5);
    }

    #[test]
    fn symmetric_neighborhoods_have_zero_gain() {
        // 0 and 1 both see 2 and 3 with equal weights
        let g = Graph::from_edges(4, &[(0, 2, 3), (0, 3, 1), (1, 2, 3), (1, 3, 1)]).unwrap();
        let labels = vec![0b100, 0b101, 0b010, 0b111];
        let masks = LevelMasks { proc: 0b110, ext: 0b001 };
        assert_eq!(swap_gain(&g, &labels, masks, 0, 1), 0);
    }

    #[test]
    fn gain_equals_recomputation_with_shared_edge() {
        let g = Graph::from_edges(4, &[(0, 1, 4), (0, 2, 3), (1, 3, 2), (1, 2, 5)]).unwrap();
        let masks = LevelMasks { proc: 0b1100, ext: 0b0011 };
        let mut labels = vec![0b0100, 0b0101, 0b1010, 0b0011];
        let before = level_coco_plus(&g, &labels, masks);
        let gain = swap_gain(&g, &labels, masks, 0, 1);
        labels.swap(0, 1);
        let after = level_coco_plus(&g, &labels, masks);
        assert_eq!(gain, after - before);
        assert_eq!(swap_gain(&g, &labels, masks, 0, 1), -gain);
    }

    #[test]
    fn balance() {
        let even = Partition::new(vec![0, 1, 2, 3, 0, 1, 2, 3], 4).unwrap();
        assert!(balance_check(&even, 0.0));
        assert_eq!(imbalance(&even), 0.0);
        let lump = Partition::new(vec![0; 8], 4).unwrap();
        assert!(!balance_check(&lump, 0.03));
        assert_eq!(max_block_size(100, 4, 0.03), 25);
        assert_eq!(max_block_size(1000, 10, 0.03), 103);
    }
}
