//! Rebuilding a fine labeling from the labels of all hierarchy levels.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::label::low_mask;

/// Labels of levels `1..=dim-1` and the parent links between them, as left
/// behind by one pass of swapping and contraction.
#[derive(Debug, Clone, Default)]
pub struct Hierarchy {
    /// Width of the fine labels.
    pub dim: usize,
    /// `level_labels[i]` holds the labels of level `i + 1`.
    pub level_labels: Vec<Vec<u64>>,
    /// `parents[i]` maps level `i + 1` vertices to level `i + 2` vertices.
    pub parents: Vec<Vec<u32>>,
}

/// Assigns every fine vertex a label from `label_set`.
///
/// Digit 0 and the most significant digit come from the vertex's own level-1
/// label. Digit `j` (for `1 <= j <= dim - 2`) is preferably the lowest digit
/// of the vertex's ancestor on level `j + 1`. Digits are fixed one position
/// at a time for all vertices together: within each group of vertices that
/// agree on the digits fixed so far, the preferred digit is granted while the
/// label set still has room for it, in ascending vertex order, and the
/// remaining vertices take the other digit. Because every group always has
/// exactly as many vertices as labels of the set extend its prefix, the
/// result is a bijection onto `label_set`.
pub fn assemble(h: &Hierarchy, label_set: &[u64]) -> Result<Vec<u64>> {
    let dim = h.dim;
    let fine = h
        .level_labels
        .first()
        .ok_or_else(|| Error::Integrity("hierarchy has no levels".into()))?;
    if dim < 3 {
        return Ok(fine.clone());
    }
    if h.level_labels.len() != dim - 1 || h.parents.len() != dim - 2 {
        return Err(Error::Integrity(format!(
            "hierarchy of width {dim} needs {} levels, has {}",
            dim - 1,
            h.level_labels.len()
        )));
    }
    let n = fine.len();
    let msb = 1u64 << (dim - 1);
    let mut out: Vec<u64> = fine.iter().map(|&l| l & (msb | 1)).collect();
    let mut ancestor: Vec<u32> = (0..n as u32).collect();
    let mut preferred = vec![0u64; n];
    let mut overflow = Vec::new();

    for j in 1..dim - 1 {
        let key_mask = msb | low_mask(j + 1);
        let mut room: HashMap<u64, u32> = HashMap::with_capacity(n);
        for &l in label_set {
            *room.entry(l & key_mask).or_insert(0) += 1;
        }
        let parents = &h.parents[j - 1];
        let coarse = &h.level_labels[j];
        for v in 0..n {
            let a = parents[ancestor[v] as usize];
            ancestor[v] = a;
            preferred[v] = coarse[a as usize] & 1;
        }

        overflow.clear();
        for v in 0..n {
            let key = out[v] | (preferred[v] << j);
            match room.get_mut(&key) {
                Some(r) if *r > 0 => {
                    *r -= 1;
                    out[v] = key;
                }
                _ => overflow.push(v),
            }
        }
        for &v in &overflow {
            let key = out[v] | ((preferred[v] ^ 1) << j);
            match room.get_mut(&key) {
                Some(r) if *r > 0 => {
                    *r -= 1;
                    out[v] = key;
                }
                _ => {
                    return Err(Error::Integrity(format!(
                        "no label left for vertex {v} at digit {j}"
                    )))
                }
            }
        }
    }
    Ok(out)
}
